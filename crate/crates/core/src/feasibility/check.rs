//! Exact re-check of an [`InfeasibilityCertificate`] against its graph.
//!
//! Uses rational arithmetic with an arbitrary nonzero scale `c` for the
//! target `AB = c·11ᵀ`, and shares no code with the certifier beyond `Graph`.

use num_rational::Rational64;

use super::certificate::{ForcedTriple, InfeasibilityCertificate};
use crate::graph::Graph;

/// Value of `[AB]_ij / c` implied by the certificate, or why it is invalid.
///
/// A valid certificate yields a value different from 1, i.e. a contradiction
/// with `[AB]_ij = c`.
pub fn check_certificate(cert: &InfeasibilityCertificate, g: &Graph, c: Rational64) -> Result<Rational64, String> {
    if c == Rational64::from_integer(0) {
        return Err("scale c must be nonzero".into());
    }
    if cert.n != g.n() {
        return Err(format!("certificate is for n = {}, graph has n = {}", cert.n, g.n()));
    }
    for (k, f) in cert.forced.iter().enumerate() {
        check_forced(g, f).map_err(|e| format!("F{k}: {e}"))?;
    }

    let (i, j) = (cert.contradiction.i, cert.contradiction.j);
    if i >= g.n() || j >= g.n() || i == j || g.has_edge(i, j) {
        return Err(format!("contradiction pair ({i},{j}) is not a non-adjacent pair"));
    }
    // [AB]_ij = Σ_w a_iw b_wj; a_iw needs w ∈ N[i], b_wj needs w ∈ N[j]
    let walks: Vec<usize> = (0..g.n())
        .filter(|&w| (w == i || g.has_edge(i, w)) && (w == j || g.has_edge(w, j)))
        .collect();
    let mut listed: Vec<usize> = cert.contradiction.terms.iter().map(|t| t.v).collect();
    listed.sort_unstable();
    if listed != walks {
        return Err(format!("terms {listed:?} do not cover the length-2 walks {walks:?}"));
    }

    let mut sum = Rational64::from_integer(0);
    for term in &cert.contradiction.terms {
        let v = term.v;
        let links: Vec<ForcedTriple> = term
            .chain
            .iter()
            .map(|&k| cert.forced.get(k).copied().ok_or(format!("unknown forced index {k}")))
            .collect::<Result<_, _>>()?;
        if links.len().is_multiple_of(2) {
            return Err(format!("chain for v = {v} has even length"));
        }
        let first = links[0];
        if (first.i, first.v) != (i, v) {
            return Err(format!("chain for v = {v} does not start at a[{i},{v}]"));
        }
        if links.iter().any(|f| f.v != v) {
            return Err(format!("chain for v = {v} leaves the middle node"));
        }
        // value of a[i,v]·b[v,cur] after each odd link, divided back through shared factors
        let mut value = c;
        let mut cur = first.j;
        for pair in links[1..].chunks(2) {
            let (back, fwd) = (pair[0], pair[1]);
            if back.j != cur {
                return Err(format!("chain for v = {v}: link does not share b[{v},{cur}]"));
            }
            if fwd.i != back.i {
                return Err(format!("chain for v = {v}: link does not share a[{},{v}]", back.i));
            }
            // a[i,v] b[v,fwd.j] = (a[i,v] b[v,cur]) · (a[k,v] b[v,fwd.j]) / (a[k,v] b[v,cur])
            value = value * c / c;
            cur = fwd.j;
        }
        if cur != j {
            return Err(format!("chain for v = {v} ends at b[{v},{cur}] instead of b[{v},{j}]"));
        }
        sum += value;
    }
    Ok(sum / c)
}

fn check_forced(g: &Graph, f: &ForcedTriple) -> Result<(), String> {
    let n = g.n();
    if f.i >= n || f.j >= n || f.v >= n {
        return Err("index out of range".into());
    }
    if f.i == f.j || g.has_edge(f.i, f.j) {
        return Err(format!("({},{}) is not a non-adjacent pair", f.i, f.j));
    }
    let common: Vec<usize> = (0..n).filter(|&w| g.has_edge(f.i, w) && g.has_edge(w, f.j)).collect();
    if common != [f.v] {
        return Err(format!("common neighbors of {} and {} are {common:?}, not [{}]", f.i, f.j, f.v));
    }
    Ok(())
}
