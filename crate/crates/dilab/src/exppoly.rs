//! Polynomials with non-negative real exponents and exact integer polynomials.
//!
//! [`ExpPoly`] is the working type for clique polynomials after the change of
//! variables `x = t^n`, where exponents become fractions. [`IntPoly`] keeps
//! integer coefficients exactly and is used for characteristic polynomials.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default absolute tolerance for root location.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Default right end of the root search for clique polynomials.
///
/// Growth rates are at least 1, so the relevant root never exceeds 1.
pub const DEFAULT_SCAN_BOUND: f64 = 1.0 + 1e-9;

/// Exponents closer than this are merged when building an [`ExpPoly`].
pub const EXPONENT_MERGE_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("cannot evaluate at x = {0}: non-integer exponents need a positive base")]
    Domain(f64),
    #[error("invalid term ({coeff}, {exponent}): exponents must be finite and >= 0, coefficients finite")]
    InvalidTerm { coeff: f64, exponent: f64 },
    #[error("reciprocal degree {requested} is smaller than the polynomial degree {actual}")]
    DegreeTooSmall { requested: usize, actual: usize },
    #[error("polynomial has no positive root")]
    NoPositiveRoot,
    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
}

/// Compensated (Neumaier) summation.
pub(crate) fn neumaier_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// One term `coeff * x^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub exponent: f64,
}

/// A finite sum of terms `c * x^a` with `a >= 0`, sorted by exponent.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "ExpPolyRepr", into = "ExpPolyRepr")]
pub struct ExpPoly {
    terms: Vec<Term>,
}

#[derive(Serialize, Deserialize)]
struct ExpPolyRepr {
    terms: Vec<(f64, f64)>,
}

impl TryFrom<ExpPolyRepr> for ExpPoly {
    type Error = PolyError;
    fn try_from(r: ExpPolyRepr) -> Result<Self, PolyError> {
        ExpPoly::from_terms(r.terms)
    }
}

impl From<ExpPoly> for ExpPolyRepr {
    fn from(p: ExpPoly) -> Self {
        ExpPolyRepr {
            terms: p.terms.iter().map(|t| (t.coeff, t.exponent)).collect(),
        }
    }
}

impl ExpPoly {
    pub fn zero() -> Self {
        ExpPoly { terms: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        ExpPoly::from_terms([(c, 0.0)]).expect("finite constant")
    }

    /// Builds a polynomial from `(coefficient, exponent)` pairs.
    ///
    /// Terms whose exponents agree within [`EXPONENT_MERGE_TOL`] are merged and
    /// zero coefficients are dropped.
    pub fn from_terms<I: IntoIterator<Item = (f64, f64)>>(terms: I) -> Result<Self, PolyError> {
        let mut raw: Vec<Term> = Vec::new();
        for (coeff, exponent) in terms {
            if !coeff.is_finite() || !exponent.is_finite() || exponent < 0.0 {
                return Err(PolyError::InvalidTerm { coeff, exponent });
            }
            raw.push(Term { coeff, exponent });
        }
        raw.sort_by(|a, b| a.exponent.total_cmp(&b.exponent));
        let mut merged: Vec<Term> = Vec::with_capacity(raw.len());
        let mut group: Vec<f64> = Vec::new();
        let mut group_exp = f64::NAN;
        for t in raw {
            if !group.is_empty() && t.exponent - group_exp <= EXPONENT_MERGE_TOL {
                group.push(t.coeff);
                continue;
            }
            if !group.is_empty() {
                merged.push(Term {
                    coeff: neumaier_sum(group.drain(..)),
                    exponent: group_exp,
                });
            }
            group_exp = t.exponent;
            group.push(t.coeff);
        }
        if !group.is_empty() {
            merged.push(Term {
                coeff: neumaier_sum(group.drain(..)),
                exponent: group_exp,
            });
        }
        merged.retain(|t| t.coeff != 0.0);
        Ok(ExpPoly { terms: merged })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `x^0`.
    pub fn constant_term(&self) -> f64 {
        match self.terms.first() {
            Some(t) if t.exponent == 0.0 => t.coeff,
            _ => 0.0,
        }
    }

    fn has_fractional_exponent(&self) -> bool {
        self.terms.iter().any(|t| t.exponent.fract() != 0.0)
    }

    pub fn eval(&self, x: f64) -> Result<f64, PolyError> {
        if x > 0.0 {
            return Ok(self.eval_pos(x));
        }
        if x == 0.0 {
            return Ok(self.constant_term());
        }
        if self.has_fractional_exponent() || !x.is_finite() {
            return Err(PolyError::Domain(x));
        }
        Ok(neumaier_sum(
            self.terms.iter().map(|t| t.coeff * x.powi(t.exponent as i32)),
        ))
    }

    fn eval_pos(&self, x: f64) -> f64 {
        neumaier_sum(self.terms.iter().map(|t| t.coeff * pow(x, t.exponent)))
    }

    /// First derivative at `x > 0`.
    pub fn derivative_at(&self, x: f64) -> f64 {
        neumaier_sum(
            self.terms
                .iter()
                .filter(|t| t.exponent != 0.0)
                .map(|t| t.coeff * t.exponent * pow(x, t.exponent - 1.0)),
        )
    }

    pub fn scale_exponents(&self, factor: f64) -> Result<Self, PolyError> {
        ExpPoly::from_terms(self.terms.iter().map(|t| (t.coeff, t.exponent * factor)))
    }

    /// Smallest positive root in `(0, DEFAULT_SCAN_BOUND]`.
    pub fn smallest_positive_root(&self, tol: f64) -> Option<f64> {
        self.smallest_positive_root_within(tol, DEFAULT_SCAN_BOUND)
    }

    /// Smallest positive root in `(0, bound]`, or `None` when there is none.
    ///
    /// Both sign-change and tangential (even multiplicity) roots are found.
    pub fn smallest_positive_root_within(&self, tol: f64, bound: f64) -> Option<f64> {
        if !(tol > 0.0 && tol.is_finite()) || !(bound > 0.0) {
            return None;
        }
        RootSearch::new(self, tol).run(bound)
    }
}

#[inline]
fn pow(x: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else if e == 1.0 {
        x
    } else {
        x.powf(e)
    }
}

/// Values needed by the exclusion tests at one abscissa.
struct Probe {
    pos: f64,
    neg: f64,
    value: f64,
    slope: f64,
}

/// Branch-and-bound search for the leftmost root.
///
/// Write `Q = P - N` with `P` and `N` having non-negative coefficients. Both are
/// non-decreasing on `x > 0`, so `P(a) - N(b) <= Q <= P(b) - N(a)` on `[a, b]`.
/// A second test bounds `Q` by its Taylor expansion at the midpoint with a bound
/// on `|Q''|`; it removes intervals near double roots that the first test keeps.
struct RootSearch<'a> {
    poly: &'a ExpPoly,
    tol: f64,
}

const SLACK: f64 = 32.0 * f64::EPSILON;

impl<'a> RootSearch<'a> {
    fn new(poly: &'a ExpPoly, tol: f64) -> Self {
        RootSearch { poly, tol }
    }

    fn probe(&self, x: f64) -> Probe {
        let mut pos = Vec::with_capacity(self.poly.terms.len());
        let mut neg = Vec::with_capacity(self.poly.terms.len());
        let mut slope = Vec::with_capacity(self.poly.terms.len());
        for t in &self.poly.terms {
            let v = t.coeff * pow(x, t.exponent);
            if v >= 0.0 {
                pos.push(v);
            } else {
                neg.push(-v);
            }
            if t.exponent != 0.0 {
                slope.push(v * t.exponent / x);
            }
        }
        let pos = neumaier_sum(pos);
        let neg = neumaier_sum(neg);
        Probe {
            pos,
            neg,
            value: pos - neg,
            slope: neumaier_sum(slope),
        }
    }

    fn parts(&self, x: f64) -> (f64, f64) {
        let mut pos = 0.0;
        let mut neg = 0.0;
        for t in &self.poly.terms {
            let v = t.coeff * pow(x, t.exponent);
            if v >= 0.0 {
                pos += v;
            } else {
                neg -= v;
            }
        }
        (pos, neg)
    }

    /// Upper bound on `|Q''|` over `[a, b]`; each `x^(e-2)` is monotone.
    fn curvature_bound(&self, a: f64, b: f64) -> f64 {
        self.poly
            .terms
            .iter()
            .filter(|t| t.exponent != 0.0 && t.exponent != 1.0)
            .map(|t| {
                let k = t.coeff.abs() * t.exponent * (t.exponent - 1.0).abs();
                k * pow(a, t.exponent - 2.0).max(pow(b, t.exponent - 2.0))
            })
            .sum()
    }

    fn excluded(&self, a: f64, b: f64) -> bool {
        let (pa, na) = self.parts(a);
        let (pb, nb) = self.parts(b);
        let slack = SLACK * (pb + nb);
        if pa - nb > slack || pb - na < -slack {
            return true;
        }
        let c = 0.5 * (a + b);
        let w = b - a;
        let mid = self.probe(c);
        let m2 = self.curvature_bound(a, b);
        let margin = mid.slope.abs() * 0.5 * w + m2 * w * w / 8.0;
        mid.value.abs() - margin > SLACK * (mid.pos + mid.neg)
    }

    fn lower_limit(&self) -> Option<f64> {
        let terms = &self.poly.terms;
        if terms.len() < 2 {
            return None;
        }
        // Below this point the lowest-order term outweighs all others combined.
        let lead = terms[0];
        let rest: f64 = terms[1..].iter().map(|t| t.coeff.abs()).sum();
        let gap = terms[1].exponent - lead.exponent;
        let lim = (lead.coeff.abs() / rest).powf(1.0 / gap);
        Some((0.5 * lim.min(1.0)).max(f64::MIN_POSITIVE))
    }

    fn run(&self, bound: f64) -> Option<f64> {
        let lo = self.lower_limit()?;
        if lo >= bound {
            return None;
        }
        let mut stack = vec![(lo, bound)];
        while let Some((a, b)) = stack.pop() {
            if self.excluded(a, b) {
                continue;
            }
            let w = b - a;
            if w <= self.tol * b.min(1.0) || w <= b * 4.0 * f64::EPSILON {
                if let Some(r) = self.resolve_leaf(a, b, lo, bound) {
                    return Some(r);
                }
                continue;
            }
            let m = if b > 2.0 * a { (a * b).sqrt() } else { 0.5 * (a + b) };
            stack.push((m, b));
            stack.push((a, m));
        }
        None
    }

    fn resolve_leaf(&self, a: f64, b: f64, lo: f64, hi: f64) -> Option<f64> {
        let qa = self.poly.eval_pos(a);
        let qb = self.poly.eval_pos(b);
        if qa == 0.0 {
            return Some(a);
        }
        if qa.signum() != qb.signum() || qb == 0.0 {
            return Some(bisect(|x| self.poly.eval_pos(x), a, b, qa));
        }
        let c = 0.5 * (a + b);
        let mid = self.probe(c);
        if mid.value.abs() > self.tol {
            return None;
        }
        Some(self.polish_tangential(c, lo, hi).unwrap_or(c))
    }

    /// Locates a double root precisely as a zero of the derivative.
    fn polish_tangential(&self, c: f64, lo: f64, hi: f64) -> Option<f64> {
        let probe = self.probe(c);
        let m2 = self.curvature_bound(c * (1.0 - 1e-3), c * (1.0 + 1e-3));
        if m2 <= 0.0 {
            return None;
        }
        let half = 4.0 * (2.0 * SLACK * (probe.pos + probe.neg) / m2).sqrt() + 4.0 * self.tol;
        let a = (c - half).max(lo);
        let b = (c + half).min(hi);
        let da = self.poly.derivative_at(a);
        let db = self.poly.derivative_at(b);
        if da.signum() == db.signum() {
            return None;
        }
        let r = bisect(|x| self.poly.derivative_at(x), a, b, da);
        (self.poly.eval_pos(r).abs() <= probe.value.abs()).then_some(r)
    }
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

impl Neg for &ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        ExpPoly {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: -t.coeff,
                    exponent: t.exponent,
                })
                .collect(),
        }
    }
}

impl Add for &ExpPoly {
    type Output = ExpPoly;
    fn add(self, rhs: &ExpPoly) -> ExpPoly {
        let all = self.terms.iter().chain(rhs.terms.iter());
        ExpPoly::from_terms(all.map(|t| (t.coeff, t.exponent))).expect("valid terms")
    }
}

impl Sub for &ExpPoly {
    type Output = ExpPoly;
    fn sub(self, rhs: &ExpPoly) -> ExpPoly {
        self + &(-rhs)
    }
}

impl Mul for &ExpPoly {
    type Output = ExpPoly;
    fn mul(self, rhs: &ExpPoly) -> ExpPoly {
        let mut out = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for a in &self.terms {
            for b in &rhs.terms {
                out.push((a.coeff * b.coeff, a.exponent + b.exponent));
            }
        }
        ExpPoly::from_terms(out).expect("valid terms")
    }
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let sign = if t.coeff < 0.0 { "-" } else { "+" };
            if i == 0 {
                if t.coeff < 0.0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let c = t.coeff.abs();
            if t.exponent == 0.0 {
                write!(f, "{c}")?;
            } else {
                if c != 1.0 {
                    write!(f, "{c}*")?;
                }
                if t.exponent == 1.0 {
                    write!(f, "x")?;
                } else {
                    write!(f, "x^{}", t.exponent)?;
                }
            }
        }
        Ok(())
    }
}

/// Polynomial with arbitrary-precision integer coefficients; index = exponent.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

#[derive(Serialize, Deserialize)]
struct IntPolyRepr {
    coeffs: Vec<serde_json::Number>,
}

impl Serialize for IntPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                c.to_i64()
                    .map(serde_json::Number::from)
                    .ok_or_else(|| serde::ser::Error::custom("coefficient exceeds 64 bits"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        IntPolyRepr { coeffs }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = IntPolyRepr::deserialize(d)?;
        let coeffs = repr
            .coeffs
            .iter()
            .map(|n| {
                n.as_i64()
                    .map(BigInt::from)
                    .ok_or_else(|| serde::de::Error::custom(format!("coefficient {n} is not an integer")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IntPoly::new(coeffs))
    }
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `c * t^k`.
    pub fn monomial(c: i64, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = BigInt::from(c);
        IntPoly::new(v)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// `t^degree * p(1/t)`.
    pub fn reciprocal(&self, degree: usize) -> Result<IntPoly, PolyError> {
        let actual = self.degree().unwrap_or(0);
        if self.degree().is_some() && degree < actual {
            return Err(PolyError::DegreeTooSmall { requested: degree, actual });
        }
        let mut v = vec![BigInt::zero(); degree + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[degree - k] = c.clone();
        }
        Ok(IntPoly::new(v))
    }

    /// True when the degree-matched reciprocal equals `±p`.
    pub fn is_reciprocal(&self) -> bool {
        let Some(d) = self.degree() else {
            return true;
        };
        let r = self.reciprocal(d).expect("degree matches");
        r == *self || r == -self
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    pub fn to_exppoly(&self) -> ExpPoly {
        ExpPoly::from_terms(
            self.coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (c.to_f64().unwrap_or(f64::NAN), k as f64)),
        )
        .expect("finite coefficients")
    }

    /// Largest positive real root.
    ///
    /// Roots lie below the Cauchy bound `1 + max|a_i / a_d|`; the search runs on
    /// the reversed polynomial, whose smallest positive root is the reciprocal of
    /// the one sought.
    pub fn largest_positive_root(&self, tol: f64) -> Result<f64, PolyError> {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(PolyError::BadTolerance(tol));
        }
        let shift = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        let core = IntPoly::new(self.coeffs[shift.min(self.coeffs.len())..].to_vec());
        let Some(d) = core.degree() else {
            return Err(PolyError::NoPositiveRoot);
        };
        if d == 0 {
            return Err(PolyError::NoPositiveRoot);
        }
        let abs: Vec<f64> = core
            .coeffs
            .iter()
            .map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY))
            .collect();
        let lead = abs[d];
        let cauchy = 1.0 + abs[..d].iter().cloned().fold(0.0, f64::max) / lead;
        let low = abs[0] / (abs[0] + abs[1..].iter().cloned().fold(0.0, f64::max));
        let reversed = core.reciprocal(d)?.to_exppoly();
        let y = reversed
            .smallest_positive_root_within(tol / (cauchy * cauchy), 2.0 / low)
            .ok_or(PolyError::NoPositiveRoot)?;
        let x = 1.0 / y;
        Ok(polish_simple_root(&core, x, tol))
    }
}

/// Tightens a root estimate by bisection on a small bracket when one exists.
fn polish_simple_root(p: &IntPoly, x: f64, tol: f64) -> f64 {
    let h = (tol * x.max(1.0)).max(x * 1e-15);
    let (a, b) = (x - h, x + h);
    let (fa, fb) = (p.eval_f64(a), p.eval_f64(b));
    if fa.is_finite() && fb.is_finite() && fa.signum() != fb.signum() && a > 0.0 {
        bisect(|t| p.eval_f64(t), a, b, fa)
    } else {
        x
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        self + &(-rhs)
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::default();
        }
        let mut v = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        IntPoly::new(v)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let a = c.abs();
            let one = a == BigInt::from(1);
            match k {
                0 => write!(f, "{a}")?,
                1 if one => write!(f, "t")?,
                1 => write!(f, "{a}t")?,
                _ if one => write!(f, "t^{k}")?,
                _ => write!(f, "{a}t^{k}")?,
            }
        }
        Ok(())
    }
}
