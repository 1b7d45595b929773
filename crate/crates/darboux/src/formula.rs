//! Per-site rendering of translation-invariant lattice polynomials.
//!
//! A polynomial on a periodic ring of `N` sites that is invariant under the
//! shift `j → j + 1` can be written as `Σ_j h_j`, where `h_j` is one density
//! written in site offsets `j`, `j±1`, …; this module recovers `h`.

use std::collections::{BTreeMap, BTreeSet};

use darboux_core::{MIndex, Param, Poly, Rat};
use num_traits::{One, Signed};

fn shift(idx: &MIndex, by: usize) -> MIndex {
    let n = idx.nsites();
    let mut phase = vec![0; 2 * n];
    for j in 0..n {
        let k = (j + by) % n;
        phase[k] = idx.x_exp(j);
        phase[n + k] = idx.y_exp(j);
    }
    MIndex::new(phase, idx.t(), idx.params())
}

// prefer the shift with the most weight on site 0, then on site 1
fn representative(idx: &MIndex) -> (MIndex, usize) {
    let n = idx.nsites();
    let orbit: BTreeSet<MIndex> = (0..n).map(|k| shift(idx, k)).collect();
    let rep = orbit
        .iter()
        .max_by(|a, b| {
            let key = |m: &MIndex| (m.site_degree(0), m.site_degree(1 % n), m.phase().to_vec());
            key(a).cmp(&key(b))
        })
        .cloned()
        .expect("orbit is non-empty");
    (rep, orbit.len())
}

fn site_label(offset: usize, n: usize) -> String {
    if offset == 0 {
        "j".into()
    } else if offset <= n / 2 {
        format!("j+{offset}")
    } else {
        format!("j-{}", n - offset)
    }
}

fn render_term(idx: &MIndex, c: &Rat, first: bool) -> String {
    let n = idx.nsites();
    let mut out = String::new();
    let neg = c.is_negative();
    out.push_str(match (first, neg) {
        (true, true) => "-",
        (true, false) => "",
        (false, true) => " - ",
        (false, false) => " + ",
    });
    let mut factors = Vec::new();
    for (p, name) in [(Param::Nu, "nu"), (Param::Gamma, "gamma"), (Param::Eps, "eps")] {
        factors.push((name.to_owned(), idx.param(p)));
    }
    factors.push(("t".into(), idx.t()));
    for o in 0..n {
        let label = site_label(o, n);
        factors.push((format!("x_{{{label}}}"), idx.x_exp(o)));
        factors.push((format!("y_{{{label}}}"), idx.y_exp(o)));
    }
    let factors: Vec<_> = factors.into_iter().filter(|(_, e)| *e > 0).collect();
    let mag = c.abs();
    let mut parts = Vec::new();
    if !mag.is_one() || factors.is_empty() {
        parts.push(mag.to_string());
    }
    for (name, e) in factors {
        parts.push(if e == 1 { name } else { format!("{name}^{e}") });
    }
    out.push_str(&parts.join("*"));
    out
}

/// The density `h` with `p = Σ_j h_j`, or `None` if `p` is not invariant
/// under cyclic shifts.
pub fn site_density(p: &Poly) -> Option<BTreeMap<MIndex, Rat>> {
    let n = p.nsites();
    let mut density = BTreeMap::new();
    for (idx, c) in p.terms() {
        if (1..n).any(|k| p.coeff(&shift(idx, k)) != *c) {
            return None;
        }
        let (rep, size) = representative(idx);
        density.entry(rep).or_insert_with(|| c * Rat::from_integer((size as i64).into()) / Rat::from_integer((n as i64).into()));
    }
    Some(density)
}

/// `Σ_j [ … ]` with site offsets relative to `j`.
pub fn per_site_formula(p: &Poly) -> Option<String> {
    let density = site_density(p)?;
    if density.is_empty() {
        return Some("0".into());
    }
    let body: String = density
        .iter()
        .enumerate()
        .map(|(i, (idx, c))| render_term(idx, c, i == 0))
        .collect();
    Some(format!("sum_j [ {body} ]"))
}
