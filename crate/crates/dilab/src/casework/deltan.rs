//! The δ̲ₙ polynomials, the set N̲ and the integer search over the terminal family.

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::{CaseError, GraphFamily, Group};
use crate::exppoly::{IntPoly, DEFAULT_TOL};
use crate::wgraph::Weight;

/// Threshold defining N̲ through `δ̲ₙⁿ <= 14.5`.
pub const N_THRESHOLD: f64 = 14.5;

/// Modulus gap below which two roots count as tied for the maximum.
pub const MODULUS_GAP: f64 = 1e-6;

/// Value ties in the integer search are broken towards the smaller `(p, q)`.
pub const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Parity {
    Odd,
    ZeroMod4,
    TwoMod4,
}

pub fn parity(n: u32) -> Parity {
    match n % 4 {
        0 => Parity::ZeroMod4,
        2 => Parity::TwoMod4,
        _ => Parity::Odd,
    }
}

/// The parity-dependent polynomial whose largest root is δ̲ₙ.
pub fn underline_delta_poly(n: u32) -> Result<IntPoly, CaseError> {
    if n < 3 {
        return Err(CaseError::Domain(format!("n must be at least 3, got {n}")));
    }
    let n_us = n as usize;
    let (a, b) = match parity(n) {
        Parity::Odd => {
            let k = n_us / 2;
            (k + 1, k)
        }
        Parity::ZeroMod4 => {
            let k = n_us / 4;
            (2 * k + 1, 2 * k - 1)
        }
        Parity::TwoMod4 => {
            let k = n_us / 4;
            (2 * k + 3, 2 * k - 1)
        }
    };
    let p = &(&IntPoly::monomial(1, n_us) - &IntPoly::monomial(2, a)) - &IntPoly::monomial(2, b);
    Ok(&p + &IntPoly::monomial(1, 0))
}

pub fn underline_delta(n: u32) -> Result<f64, CaseError> {
    Ok(underline_delta_poly(n)?.largest_positive_root(DEFAULT_TOL)?)
}

/// Membership in `{odd n >= 9} ∪ {n = 4k >= 16} ∪ {n = 4k+2 >= 30}`.
pub fn in_underline_n(n: u32) -> bool {
    match parity(n) {
        Parity::Odd => n >= 9,
        Parity::ZeroMod4 => n >= 16,
        Parity::TwoMod4 => n >= 30,
    }
}

/// Membership through the defining inequality `δ̲ₙⁿ <= 14.5`.
pub fn in_underline_n_by_value(n: u32) -> Result<bool, CaseError> {
    Ok(underline_delta(n)?.powi(n as i32) <= N_THRESHOLD)
}

pub fn lower_bound(n: u32) -> Result<f64, CaseError> {
    Ok(N_THRESHOLD.powf(1.0 / n as f64).min(underline_delta(n)?))
}

/// `(p, q)` predicted for the winner of the integer search at `m`.
pub fn parity_rule(m: u32) -> (u32, u32) {
    match parity(m) {
        Parity::Odd => (m / 2, m / 2 + 1),
        Parity::ZeroMod4 => (m / 2 - 1, m / 2 + 1),
        Parity::TwoMod4 => {
            let k = m / 4;
            (2 * k - 1, 2 * k + 3)
        }
    }
}

/// Groups `P×2 p`, `Q×2 q`, `M m`, `U×2 u` joined only by `P-Q`.
pub fn terminal_family() -> GraphFamily {
    GraphFamily {
        groups: vec![
            Group::new("P", "p", 2),
            Group::new("Q", "q", 2),
            Group::new("M", "m", 1),
            Group::new("U", "u", 2),
        ],
        edges: vec![("P".into(), "Q".into())],
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Candidate {
    pub p: u32,
    pub q: u32,
    pub reciprocal: bool,
    pub unique_max_modulus: Option<bool>,
    pub value: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DeltanSearch {
    pub m: u32,
    pub pq: (u32, u32),
    pub value: f64,
    pub matches_parity_rule: bool,
    pub candidates: Vec<Candidate>,
}

/// Clique polynomial of the terminal family at integer weights `(p, q, m, u = m)`.
pub fn terminal_clique_poly(p: u32, q: u32, m: u32) -> Result<IntPoly, CaseError> {
    let fam = terminal_family();
    let params = [("p", p), ("q", q), ("m", m), ("u", m)]
        .into_iter()
        .map(|(s, v)| (s.to_string(), Weight::int(v as i64)))
        .collect();
    Ok(fam.instantiate_weights(&params)?.clique_int_poly()?)
}

/// Searches integer `(p, q)` with `1 <= p <= q`, `p + q <= m` for the smallest
/// growth rate among clique polynomials that are reciprocal and whose reversed
/// polynomial has a unique root of maximum modulus.
pub fn integer_search_deltan(m: u32) -> Result<DeltanSearch, CaseError> {
    if m < 5 {
        return Err(CaseError::Domain(format!("m must be at least 5, got {m}")));
    }
    let mut candidates = Vec::new();
    let mut best: Option<(f64, u32, u32)> = None;
    for p in 1..=m / 2 {
        for q in p..=m - p {
            let poly = terminal_clique_poly(p, q, m)?;
            let reciprocal = poly.is_reciprocal();
            let mut cand = Candidate {
                p,
                q,
                reciprocal,
                unique_max_modulus: None,
                value: None,
            };
            if reciprocal {
                let d = poly.degree().unwrap_or(0);
                let char_poly = poly.reciprocal(d)?;
                let unique = unique_max_modulus(&char_poly);
                cand.unique_max_modulus = Some(unique);
                if unique {
                    let v = char_poly.largest_positive_root(DEFAULT_TOL)?;
                    cand.value = Some(v);
                    if best.map_or(true, |(bv, _, _)| v < bv - TIE_TOL) {
                        best = Some((v, p, q));
                    }
                }
            }
            candidates.push(cand);
        }
    }
    let (value, p, q) = best.ok_or_else(|| CaseError::Computation(format!("no candidate passes the filters at m = {m}")))?;
    Ok(DeltanSearch {
        m,
        pq: (p, q),
        value,
        matches_parity_rule: parity_rule(m) == (p, q),
        candidates,
    })
}

/// True when exactly one root attains the maximum modulus, up to [`MODULUS_GAP`].
pub fn unique_max_modulus(p: &IntPoly) -> bool {
    let roots = durand_kerner(p);
    if roots.len() < 2 {
        return roots.len() == 1;
    }
    let mut moduli: Vec<f64> = roots.iter().map(|z| z.norm()).collect();
    moduli.sort_by(|a, b| b.total_cmp(a));
    moduli[0] - moduli[1] > MODULUS_GAP
}

/// All complex roots by simultaneous Weierstrass iteration.
pub fn durand_kerner(p: &IntPoly) -> Vec<Complex64> {
    let Some(d) = p.degree() else {
        return Vec::new();
    };
    let lead = p.coeffs()[d].to_f64().unwrap_or(f64::NAN);
    let c: Vec<f64> = p.coeffs().iter().map(|x| x.to_f64().unwrap_or(f64::NAN) / lead).collect();
    let eval = |z: Complex64| c.iter().rev().fold(Complex64::zero(), |acc, &a| acc * z + a);
    let radius = 1.0 + c[..d].iter().map(|a| a.abs()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..d).map(|k| seed.powu(k as u32) * (radius / 2.0)).collect();
    for _ in 0..(200 * d).max(1000) {
        let mut moved = 0.0f64;
        for i in 0..d {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..d {
                if j != i {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                denom = Complex64::new(f64::EPSILON, 0.0);
            }
            let step = eval(z[i]) / denom;
            z[i] -= step;
            moved = moved.max(step.norm() / (1.0 + z[i].norm()));
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}
