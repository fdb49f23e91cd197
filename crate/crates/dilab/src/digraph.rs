//! Directed multigraphs given by non-negative integer matrices, their curves and
//! curve complexes.
//!
//! Entry `(j, i)` of the matrix counts edges `i -> j`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exppoly::{IntPoly, PolyError, DEFAULT_TOL};
use crate::wgraph::{growth_rate_of, GraphError, Weight, WeightedGraph};

pub const DEFAULT_SIZE_LIMIT: usize = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DigraphError {
    #[error("matrix must be square and non-empty")]
    NotSquare,
    #[error("negative entry at ({0}, {1})")]
    NegativeEntry(usize, usize),
    #[error("digraph has {size} vertices, above the limit {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("digraph is not strongly connected")]
    NotStronglyConnected,
    #[error("characteristic polynomial has no positive root")]
    NoPositiveRoot,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("matrix JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    matrix: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    matrix: Vec<Vec<i64>>,
}

/// An embedded directed cycle. `vertices[0]` is the smallest vertex on it and
/// `edge_choices[k]` picks one of the parallel arcs `vertices[k] -> vertices[k+1]`
/// (cyclically).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Curve {
    pub vertices: Vec<usize>,
    pub edge_choices: Vec<u32>,
}

impl Curve {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex_mask(&self) -> u64 {
        self.vertices.iter().fold(0, |m, &v| m | (1 << v))
    }

    pub fn label(&self) -> String {
        let body: Vec<String> = self
            .vertices
            .iter()
            .zip(&self.edge_choices)
            .map(|(v, e)| format!("{v}.{e}"))
            .collect();
        format!("c[{}]", body.join(","))
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        write!(f, "({}) edges {:?}", vs.join(" -> "), self.edge_choices)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct McMullenReport {
    pub equal: bool,
    /// Clique polynomial of the curve complex, `1 - ...`.
    pub clique_poly: String,
    /// `t^n Q(1/t)`.
    pub reciprocal: String,
    pub char_poly: String,
    pub curve_count: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralReport {
    pub radius: f64,
    pub primitive: bool,
}

impl Digraph {
    pub fn new(matrix: Vec<Vec<u32>>) -> Result<Self, DigraphError> {
        let n = matrix.len();
        if n == 0 || matrix.iter().any(|row| row.len() != n) {
            return Err(DigraphError::NotSquare);
        }
        Ok(Digraph { matrix })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self, DigraphError> {
        let mut m = Vec::with_capacity(rows.len());
        for (j, row) in rows.iter().enumerate() {
            let mut r = Vec::with_capacity(row.len());
            for (i, &x) in row.iter().enumerate() {
                r.push(u32::try_from(x).map_err(|_| DigraphError::NegativeEntry(j, i))?);
            }
            m.push(r);
        }
        Digraph::new(m)
    }

    pub fn from_json(text: &str) -> Result<Self, DigraphError> {
        let repr: MatrixRepr = serde_json::from_str(text).map_err(|e| DigraphError::Json(e.to_string()))?;
        Digraph::from_i64(&repr.matrix)
    }

    pub fn to_json(&self) -> String {
        let matrix = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|&x| x as i64).collect())
            .collect();
        serde_json::to_string(&MatrixRepr { matrix }).expect("matrix serializes")
    }

    pub fn size(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<u32>] {
        &self.matrix
    }

    /// Number of arcs `i -> j`.
    pub fn arcs(&self, i: usize, j: usize) -> u32 {
        self.matrix[j][i]
    }

    pub fn trace(&self) -> u64 {
        (0..self.size()).map(|i| self.matrix[i][i] as u64).sum()
    }

    /// Every vertex reaches every other. A single vertex needs a loop, so the
    /// matrix always carries at least one cycle.
    pub fn strongly_connected(&self) -> bool {
        let n = self.size();
        if n == 1 {
            return self.matrix[0][0] > 0;
        }
        let reach = |forward: bool| {
            let mut seen = vec![false; n];
            let mut stack = vec![0usize];
            seen[0] = true;
            while let Some(v) = stack.pop() {
                for w in 0..n {
                    let arc = if forward { self.arcs(v, w) } else { self.arcs(w, v) };
                    if arc > 0 && !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            seen.into_iter().all(|s| s)
        };
        reach(true) && reach(false)
    }

    fn check_size(&self, limit: usize) -> Result<(), DigraphError> {
        if self.size() > limit {
            return Err(DigraphError::TooLarge {
                size: self.size(),
                limit,
            });
        }
        Ok(())
    }

    pub fn enumerate_curves(&self) -> Result<Vec<Curve>, DigraphError> {
        self.enumerate_curves_with_limit(DEFAULT_SIZE_LIMIT)
    }

    /// Simple cycles rooted at their smallest vertex, expanded over parallel arcs.
    pub fn enumerate_curves_with_limit(&self, limit: usize) -> Result<Vec<Curve>, DigraphError> {
        self.check_size(limit)?;
        let n = self.size();
        let mut out = Vec::new();
        let mut path = Vec::new();
        let mut on_path = vec![false; n];
        for root in 0..n {
            path.push(root);
            on_path[root] = true;
            self.cycles_from(root, &mut path, &mut on_path, &mut out);
            on_path[root] = false;
            path.pop();
        }
        out.sort();
        Ok(out)
    }

    fn cycles_from(&self, root: usize, path: &mut Vec<usize>, on_path: &mut [bool], out: &mut Vec<Curve>) {
        let last = *path.last().expect("non-empty path");
        for next in root..self.size() {
            if self.arcs(last, next) == 0 {
                continue;
            }
            if next == root {
                self.expand_choices(path, out);
            } else if !on_path[next] {
                path.push(next);
                on_path[next] = true;
                self.cycles_from(root, path, on_path, out);
                on_path[next] = false;
                path.pop();
            }
        }
    }

    fn expand_choices(&self, path: &[usize], out: &mut Vec<Curve>) {
        let k = path.len();
        let mult: Vec<u32> = (0..k).map(|i| self.arcs(path[i], path[(i + 1) % k])).collect();
        let mut choice = vec![0u32; k];
        loop {
            out.push(Curve {
                vertices: path.to_vec(),
                edge_choices: choice.clone(),
            });
            let mut i = k;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                choice[i] += 1;
                if choice[i] < mult[i] {
                    break;
                }
                choice[i] = 0;
            }
        }
    }

    pub fn curve_complex(&self) -> Result<WeightedGraph, DigraphError> {
        self.curve_complex_with_limit(DEFAULT_SIZE_LIMIT)
    }

    /// One vertex per curve weighted by its length, edges between vertex-disjoint curves.
    pub fn curve_complex_with_limit(&self, limit: usize) -> Result<WeightedGraph, DigraphError> {
        let curves = self.enumerate_curves_with_limit(limit)?;
        let masks: Vec<u64> = curves.iter().map(Curve::vertex_mask).collect();
        let labels: Vec<String> = curves.iter().map(Curve::label).collect();
        let mut g = WeightedGraph::new();
        for (c, label) in curves.iter().zip(&labels) {
            g.add_vertex(label, Weight::int(c.len() as i64))?;
        }
        for a in 0..curves.len() {
            for b in a + 1..curves.len() {
                if masks[a] & masks[b] == 0 {
                    g.add_edge(&labels[a], &labels[b])?;
                }
            }
        }
        Ok(g)
    }

    /// Clique polynomial of the curve complex.
    ///
    /// A clique is a set of pairwise vertex-disjoint curves, so cliques are counted
    /// by the union of their vertex sets: with `c(M)` curves on vertex set `M`,
    /// `g(S) = -sum_{M ∋ min S} c(M) g(S \ M)` and `Q = sum_S g(S) t^|S|`.
    pub fn curve_clique_poly(&self) -> Result<IntPoly, DigraphError> {
        self.check_size(DEFAULT_SIZE_LIMIT)?;
        let n = self.size();
        let full = 1usize << n;
        let mut count = vec![BigInt::zero(); full];
        for c in self.enumerate_curves()? {
            count[c.vertex_mask() as usize] += 1;
        }
        let mut g = vec![BigInt::zero(); full];
        g[0] = BigInt::one();
        for s in 1..full {
            let low = s & s.wrapping_neg();
            let rest = s ^ low;
            let mut acc = BigInt::zero();
            // submasks of `rest`, each joined with the lowest bit
            let mut sub = rest;
            loop {
                let m = sub | low;
                if !count[m].is_zero() && !g[s ^ m].is_zero() {
                    acc -= &count[m] * &g[s ^ m];
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
            g[s] = acc;
        }
        let mut coeffs = vec![BigInt::zero(); n + 1];
        for (s, v) in g.into_iter().enumerate() {
            coeffs[s.count_ones() as usize] += v;
        }
        Ok(IntPoly::new(coeffs))
    }

    /// `det(tI - A)` by the Faddeev-LeVerrier recurrence over the rationals.
    pub fn char_poly(&self) -> IntPoly {
        let n = self.size();
        let a: Vec<Vec<BigRational>> = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
            .collect();
        let mut coeffs = vec![BigRational::zero(); n + 1];
        coeffs[n] = BigRational::one();
        let mut m = vec![vec![BigRational::zero(); n]; n];
        for k in 1..=n {
            let mut next = mat_mul(&a, &m);
            for (i, row) in next.iter_mut().enumerate() {
                row[i] += &coeffs[n - k + 1];
            }
            let am = mat_mul(&a, &next);
            let tr = (0..n).fold(BigRational::zero(), |acc, i| acc + &am[i][i]);
            coeffs[n - k] = -tr / BigRational::from_integer(BigInt::from(k));
            m = next;
        }
        let ints = coeffs
            .into_iter()
            .map(|c| {
                assert!(c.is_integer(), "characteristic polynomial coefficient {c} not integral");
                c.to_integer()
            })
            .collect();
        IntPoly::new(ints)
    }

    pub fn verify_mcmullen(&self) -> Result<McMullenReport, DigraphError> {
        if !self.strongly_connected() {
            return Err(DigraphError::NotStronglyConnected);
        }
        let q = self.curve_clique_poly()?;
        let rec = q.reciprocal(self.size())?;
        let cp = self.char_poly();
        Ok(McMullenReport {
            equal: rec == cp,
            clique_poly: q.to_string(),
            reciprocal: rec.to_string(),
            char_poly: cp.to_string(),
            curve_count: self.enumerate_curves()?.len(),
        })
    }

    /// Boolean test that `A^(n^2)` is entrywise positive.
    pub fn is_primitive(&self) -> bool {
        let n = self.size();
        let b: Vec<Vec<bool>> = self.matrix.iter().map(|r| r.iter().map(|&x| x > 0).collect()).collect();
        let mut acc = b.clone();
        for _ in 1..n * n {
            acc = bool_mul(&acc, &b);
        }
        acc.iter().all(|r| r.iter().all(|&x| x))
    }

    /// Largest positive root of the characteristic polynomial, with a primitivity flag.
    pub fn spectral_radius(&self) -> Result<SpectralReport, DigraphError> {
        if !self.strongly_connected() {
            return Err(DigraphError::NotStronglyConnected);
        }
        let radius = self
            .char_poly()
            .largest_positive_root(DEFAULT_TOL)
            .map_err(|_| DigraphError::NoPositiveRoot)?;
        Ok(SpectralReport {
            radius,
            primitive: self.is_primitive(),
        })
    }

    /// Growth rate of the curve complex.
    pub fn curve_growth_rate(&self) -> Result<f64, DigraphError> {
        Ok(growth_rate_of(&self.curve_clique_poly()?.to_exppoly())?)
    }

    /// A random strongly connected digraph with `1..=max_size` vertices and entries
    /// in {0, 1, 2} drawn with probabilities 0.5, 0.3, 0.2.
    pub fn random_strongly_connected(max_size: usize, seed: u64) -> Digraph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=max_size.max(1));
        loop {
            let matrix: Vec<Vec<u32>> = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| match rng.gen::<f64>() {
                            x if x < 0.5 => 0,
                            x if x < 0.8 => 1,
                            _ => 2,
                        })
                        .collect()
                })
                .collect();
            let d = Digraph { matrix };
            if d.strongly_connected() {
                return d;
            }
        }
    }
}

fn mat_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    let mut out = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

fn bool_mul(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).any(|k| a[i][k] && b[k][j])).collect())
        .collect()
}
