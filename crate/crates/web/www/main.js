import init, { preset, analyze, synthesizeAndSimulate, certifyTwoStep } from "./pkg/ftcons_web.js";

const $ = (id) => document.getElementById(id);
const out = $("out");

function show(text) {
  out.textContent = text;
}

function guard(fn) {
  return () => {
    try {
      fn();
    } catch (e) {
      show("error: " + e);
    }
  };
}

function frame(canvas) {
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  return ctx;
}

function drawTrajectory(r) {
  const canvas = $("traj");
  const ctx = frame(canvas);
  const pad = 30;
  const w = canvas.width - 2 * pad;
  const h = canvas.height - 2 * pad;
  const all = r.states.flat();
  const lo = Math.min(...all);
  const hi = Math.max(...all);
  const span = hi - lo || 1;
  const x = (t) => pad + (w * t) / Math.max(1, r.steps);
  const y = (v) => pad + h - (h * (v - lo)) / span;

  ctx.strokeStyle = "#999";
  ctx.setLineDash([5, 4]);
  ctx.beginPath();
  ctx.moveTo(pad, y(r.initial_mean));
  ctx.lineTo(pad + w, y(r.initial_mean));
  ctx.stroke();
  ctx.setLineDash([]);

  const n = r.states[0].length;
  for (let i = 0; i < n; i++) {
    ctx.strokeStyle = `hsl(${(360 * i) / n}, 60%, 45%)`;
    ctx.beginPath();
    r.states.forEach((s, t) => (t === 0 ? ctx.moveTo(x(t), y(s[i])) : ctx.lineTo(x(t), y(s[i]))));
    ctx.stroke();
    ctx.fillStyle = ctx.strokeStyle;
    r.states.forEach((s, t) => {
      ctx.beginPath();
      ctx.arc(x(t), y(s[i]), 2.5, 0, 2 * Math.PI);
      ctx.fill();
    });
  }
  ctx.fillStyle = "#333";
  for (let t = 0; t <= r.steps; t++) ctx.fillText(String(t), x(t) - 3, canvas.height - 8);
}

function drawSpectrum(a) {
  const canvas = $("spec");
  const ctx = frame(canvas);
  const pad = 24;
  const w = canvas.width - 2 * pad;
  const h = canvas.height - 2 * pad;
  const values = a.spectrum.map((c) => c.value);
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const top = Math.max(...a.spectrum.map((c) => c.multiplicity));
  const x = (v) => pad + (w * (v - lo)) / (hi - lo || 1);
  ctx.strokeStyle = "#333";
  ctx.beginPath();
  ctx.moveTo(pad, pad + h);
  ctx.lineTo(pad + w, pad + h);
  ctx.stroke();
  ctx.fillStyle = "#2a6";
  ctx.strokeStyle = "#2a6";
  for (const c of a.spectrum) {
    const yTop = pad + h - (h * c.multiplicity) / top;
    ctx.beginPath();
    ctx.moveTo(x(c.value), pad + h);
    ctx.lineTo(x(c.value), yTop);
    ctx.stroke();
    ctx.beginPath();
    ctx.arc(x(c.value), yTop, 3, 0, 2 * Math.PI);
    ctx.fill();
  }
  ctx.fillStyle = "#333";
  ctx.fillText(lo.toFixed(3), pad, canvas.height - 6);
  ctx.fillText(hi.toFixed(3), pad + w - 30, canvas.height - 6);
}

function runAnalyze() {
  const a = JSON.parse(analyze($("edges").value));
  drawSpectrum(a);
  const spec = a.spectrum.map((c) => `${c.value.toFixed(6)}^(${c.multiplicity})`).join(" ");
  show(
    [
      `nodes ${a.n}, edges ${a.edges}`,
      `diameter ${a.diameter}, radius ${a.radius}, center [${a.center.join(" ")}]`,
      a.regular === null ? "not regular" : `${a.regular}-regular`,
      a.intersection_array ? `distance-regular ${a.intersection_array}` : "not distance-regular",
      a.tree ? "tree" : "",
      `spectrum ${spec}`,
      `distinct eigenvalues ${a.distinct}`,
    ]
      .filter(Boolean)
      .join("\n"),
  );
}

function runSimulate() {
  const seed = Number($("seed").value) >>> 0;
  const r = JSON.parse(synthesizeAndSimulate($("edges").value, $("method").value, seed));
  drawTrajectory(r);
  const lines = [
    `construction ${r.construction}: ${r.steps} steps (diameter ${r.diameter})`,
    `residual ${r.residual.toExponential(3)} ${r.passed ? "PASS" : "FAIL"}`,
  ];
  if (r.lambdas) lines.push(`eigenvalues used ${r.lambdas.map((l) => l.toFixed(4)).join(" ")}`);
  r.spread.forEach((s, t) => lines.push(`spread after step ${t}: ${s.toExponential(3)}`));
  show(lines.join("\n"));
}

function runCertify() {
  const c = JSON.parse(certifyTwoStep($("edges").value));
  show(c.text);
}

function loadPreset() {
  $("edges").value = preset($("preset").value);
  runAnalyze();
}

await init();
$("preset").addEventListener("change", guard(loadPreset));
$("analyze").addEventListener("click", guard(runAnalyze));
$("simulate").addEventListener("click", guard(runSimulate));
$("certify").addEventListener("click", guard(runCertify));
guard(loadPreset)();
