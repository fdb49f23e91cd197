//! Weighted graphs, clique polynomials and growth rates.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exppoly::{ExpPoly, IntPoly, PolyError, DEFAULT_SCAN_BOUND, DEFAULT_TOL};

/// Default guard on the vertex count for clique enumeration.
pub const DEFAULT_VERTEX_LIMIT: usize = 40;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("unknown vertex id {0:?}")]
    UnknownVertex(String),
    #[error("duplicate vertex id {0:?}")]
    DuplicateVertex(String),
    #[error("self-loop at {0:?}")]
    SelfLoop(String),
    #[error("duplicate edge {0:?} - {1:?}")]
    DuplicateEdge(String, String),
    #[error("weight of {id:?} must be positive and finite, got {weight}")]
    BadWeight { id: String, weight: String },
    #[error("graph has {count} vertices, above the enumeration limit {limit}")]
    TooLarge { count: usize, limit: usize },
    #[error("empty vertex group")]
    EmptyGroup,
    #[error("weights are not all integers")]
    NonIntegerWeights,
    #[error("clique polynomial has no root in (0, 1]")]
    NoRoot,
    #[error("bad weight literal {0:?}")]
    BadLiteral(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("graph JSON: {0}")]
    Json(String),
}

/// A positive vertex weight, kept exact when it was given exactly.
#[derive(Debug, Clone, PartialEq)]
pub enum Weight {
    Exact(Rational64),
    Float(f64),
}

impl Weight {
    pub fn int(n: i64) -> Self {
        Weight::Exact(Rational64::from_integer(n))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Weight::Exact(Rational64::new(num, den))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Weight::Exact(r) => *r.numer() as f64 / *r.denom() as f64,
            Weight::Float(x) => *x,
        }
    }

    fn is_positive(&self) -> bool {
        match self {
            Weight::Exact(r) => r.is_positive(),
            Weight::Float(x) => *x > 0.0 && x.is_finite(),
        }
    }

    /// Parses a decimal literal such as `"0.25"` or `"3"` exactly.
    pub fn parse_decimal(s: &str) -> Result<Self, GraphError> {
        let bad = || GraphError::BadLiteral(s.to_string());
        let t = s.trim();
        if let Some((n, d)) = t.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            return Ok(Weight::ratio(n, d));
        }
        let (int_part, frac_part) = t.split_once('.').unwrap_or((t, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac_part}");
        let num: i64 = digits.parse().map_err(|_| bad())?;
        let den = 10i64.checked_pow(frac_part.len() as u32).ok_or_else(bad)?;
        Ok(Weight::ratio(num, den))
    }

    fn scaled(&self, alpha: f64) -> Weight {
        Weight::Float(self.to_f64() * alpha)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Exact(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Weight::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Weight::Float(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WeightRepr {
    Number(f64),
    Text(String),
    Ratio { num: i64, den: i64 },
}

impl Serialize for Weight {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Weight::Exact(r) => WeightRepr::Ratio {
                num: *r.numer(),
                den: *r.denom(),
            }
            .serialize(s),
            Weight::Float(x) => WeightRepr::Number(*x).serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match WeightRepr::deserialize(d)? {
            WeightRepr::Number(x) => Ok(Weight::Float(x)),
            WeightRepr::Text(s) => Weight::parse_decimal(&s).map_err(serde::de::Error::custom),
            WeightRepr::Ratio { num, den } if den != 0 => Ok(Weight::ratio(num, den)),
            WeightRepr::Ratio { .. } => Err(serde::de::Error::custom("zero denominator")),
        }
    }
}

/// A clique, as vertex ids in graph order. The empty clique is included.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Clique {
    pub members: Vec<String>,
}

/// Simple undirected graph with positive vertex weights.
#[derive(Debug, Clone, Default)]
pub struct WeightedGraph {
    ids: Vec<String>,
    weights: Vec<Weight>,
    index: HashMap<String, usize>,
    adj: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct VertexRepr {
    id: String,
    weight: Weight,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    vertices: Vec<VertexRepr>,
    #[serde(default)]
    edges: Vec<(String, String)>,
}

impl WeightedGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, id: &str, weight: Weight) -> Result<usize, GraphError> {
        if self.index.contains_key(id) {
            return Err(GraphError::DuplicateVertex(id.to_string()));
        }
        if !weight.is_positive() {
            return Err(GraphError::BadWeight {
                id: id.to_string(),
                weight: weight.to_string(),
            });
        }
        let i = self.ids.len();
        self.ids.push(id.to_string());
        self.weights.push(weight);
        self.index.insert(id.to_string(), i);
        self.adj.push(Vec::new());
        Ok(i)
    }

    pub fn add_edge(&mut self, a: &str, b: &str) -> Result<(), GraphError> {
        let i = self.require(a)?;
        let j = self.require(b)?;
        if i == j {
            return Err(GraphError::SelfLoop(a.to_string()));
        }
        if self.has_edge_idx(i, j) {
            return Err(GraphError::DuplicateEdge(a.to_string(), b.to_string()));
        }
        self.link(i, j);
        Ok(())
    }

    fn link(&mut self, i: usize, j: usize) {
        let pos = self.adj[i].binary_search(&j).unwrap_err();
        self.adj[i].insert(pos, j);
        let pos = self.adj[j].binary_search(&i).unwrap_err();
        self.adj[j].insert(pos, i);
    }

    fn require(&self, id: &str) -> Result<usize, GraphError> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| GraphError::UnknownVertex(id.to_string()))
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn weight(&self, id: &str) -> Option<&Weight> {
        self.index.get(id).map(|&i| &self.weights[i])
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn has_edge(&self, a: &str, b: &str) -> bool {
        match (self.index.get(a), self.index.get(b)) {
            (Some(&i), Some(&j)) => self.has_edge_idx(i, j),
            _ => false,
        }
    }

    fn has_edge_idx(&self, i: usize, j: usize) -> bool {
        self.adj[i].binary_search(&j).is_ok()
    }

    /// Edges as id pairs in index order.
    pub fn edges(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for (i, nbrs) in self.adj.iter().enumerate() {
            for &j in nbrs.iter().filter(|&&j| j > i) {
                out.push((self.ids[i].clone(), self.ids[j].clone()));
            }
        }
        out
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let repr: GraphRepr = serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        let mut g = WeightedGraph::new();
        for v in repr.vertices {
            g.add_vertex(&v.id, v.weight)?;
        }
        for (a, b) in repr.edges {
            g.add_edge(&a, &b)?;
        }
        Ok(g)
    }

    pub fn to_json(&self) -> String {
        let repr = GraphRepr {
            vertices: self
                .ids
                .iter()
                .zip(&self.weights)
                .map(|(id, w)| VertexRepr {
                    id: id.clone(),
                    weight: w.clone(),
                })
                .collect(),
            edges: self.edges(),
        };
        serde_json::to_string(&repr).expect("graph serializes")
    }

    /// Calls `visit` once per clique (including the empty one) with member indices.
    ///
    /// Each clique is reached by extending with vertices of increasing index, so it
    /// is produced exactly once, in a deterministic order.
    pub(crate) fn for_each_clique<F: FnMut(&[usize])>(&self, mut visit: F) {
        let mut stack: Vec<usize> = Vec::new();
        visit(&stack);
        let all: Vec<usize> = (0..self.ids.len()).collect();
        self.extend(&all, &mut stack, &mut visit);
    }

    fn extend<F: FnMut(&[usize])>(&self, candidates: &[usize], stack: &mut Vec<usize>, visit: &mut F) {
        for (k, &v) in candidates.iter().enumerate() {
            stack.push(v);
            visit(stack);
            let next: Vec<usize> = intersect_sorted(&candidates[k + 1..], &self.adj[v]);
            if !next.is_empty() {
                self.extend(&next, stack, visit);
            }
            stack.pop();
        }
    }

    fn check_limit(&self, limit: usize) -> Result<(), GraphError> {
        if self.ids.len() > limit {
            return Err(GraphError::TooLarge {
                count: self.ids.len(),
                limit,
            });
        }
        Ok(())
    }

    pub fn enumerate_cliques(&self) -> Result<Vec<Clique>, GraphError> {
        self.enumerate_cliques_with_limit(DEFAULT_VERTEX_LIMIT)
    }

    pub fn enumerate_cliques_with_limit(&self, limit: usize) -> Result<Vec<Clique>, GraphError> {
        self.check_limit(limit)?;
        let mut out = Vec::new();
        self.for_each_clique(|members| {
            out.push(Clique {
                members: members.iter().map(|&i| self.ids[i].clone()).collect(),
            })
        });
        Ok(out)
    }

    fn all_exact(&self) -> bool {
        self.weights.iter().all(|w| matches!(w, Weight::Exact(_)))
    }

    pub fn clique_polynomial(&self) -> Result<ExpPoly, GraphError> {
        self.clique_polynomial_with_limit(DEFAULT_VERTEX_LIMIT)
    }

    /// `Q(t) = sum over cliques K of (-1)^|K| t^w(K)`.
    ///
    /// With exact weights, equal exponents are merged exactly before conversion.
    pub fn clique_polynomial_with_limit(&self, limit: usize) -> Result<ExpPoly, GraphError> {
        self.check_limit(limit)?;
        if self.all_exact() {
            let table = self.exact_clique_table();
            let terms = table
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(e, c)| (c.to_f64().unwrap_or(f64::NAN), rational_to_f64(&e)));
            return Ok(ExpPoly::from_terms(terms)?);
        }
        let w: Vec<f64> = self.weights.iter().map(Weight::to_f64).collect();
        let mut terms = Vec::new();
        self.for_each_clique(|members| {
            let sign = if members.len() % 2 == 0 { 1.0 } else { -1.0 };
            terms.push((sign, members.iter().map(|&i| w[i]).sum::<f64>()));
        });
        Ok(ExpPoly::from_terms(terms)?)
    }

    fn exact_clique_table(&self) -> BTreeMap<BigRational, BigInt> {
        let w: Vec<BigRational> = self
            .weights
            .iter()
            .map(|x| match x {
                Weight::Exact(r) => BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom())),
                Weight::Float(_) => unreachable!("checked by all_exact"),
            })
            .collect();
        let mut table: BTreeMap<BigRational, BigInt> = BTreeMap::new();
        self.for_each_clique(|members| {
            let e = members.iter().fold(BigRational::zero(), |acc, &i| acc + &w[i]);
            let sign = if members.len() % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            *table.entry(e).or_default() += sign;
        });
        table
    }

    /// Exact clique polynomial when every weight is a positive integer.
    pub fn clique_int_poly(&self) -> Result<IntPoly, GraphError> {
        if !self
            .weights
            .iter()
            .all(|w| matches!(w, Weight::Exact(r) if r.is_integer()))
        {
            return Err(GraphError::NonIntegerWeights);
        }
        let table = self.exact_clique_table();
        let deg = table.keys().last().map(|e| e.to_integer().to_usize().unwrap_or(0)).unwrap_or(0);
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        for (e, c) in table {
            coeffs[e.to_integer().to_usize().expect("small degree")] += c;
        }
        Ok(IntPoly::new(coeffs))
    }

    /// `1 / (smallest positive root of Q)`; 1 in the polynomial-growth case.
    pub fn growth_rate(&self) -> Result<f64, GraphError> {
        self.growth_rate_with_limit(DEFAULT_VERTEX_LIMIT)
    }

    /// Every pair of vertices is adjacent.
    pub fn is_complete(&self) -> bool {
        let n = self.ids.len();
        self.adj.iter().all(|a| a.len() + 1 == n)
    }

    pub fn growth_rate_with_limit(&self, limit: usize) -> Result<f64, GraphError> {
        // Q is the product of the (1 - x^w), so its first root is 1 with
        // multiplicity n and floating noise near 1 would hide it.
        if self.is_complete() {
            return Ok(1.0);
        }
        let q = self.clique_polynomial_with_limit(limit)?;
        growth_rate_of(&q)
    }

    /// Collapses `group` into one vertex with the summed weight whose neighbours
    /// are the common neighbours of the group.
    pub fn vertex_sum(&self, group: &[&str]) -> Result<WeightedGraph, GraphError> {
        if group.is_empty() {
            return Err(GraphError::EmptyGroup);
        }
        let mut members: Vec<usize> = group.iter().map(|id| self.require(id)).collect::<Result<_, _>>()?;
        members.sort_unstable();
        members.dedup();
        let in_group = |i: usize| members.binary_search(&i).is_ok();
        let new_id = members.iter().map(|&i| self.ids[i].as_str()).collect::<Vec<_>>().join("+");
        let weight = sum_weights(members.iter().map(|&i| &self.weights[i]));
        let mut g = WeightedGraph::new();
        for i in 0..self.ids.len() {
            if i == members[0] {
                g.add_vertex(&new_id, weight.clone())?;
            } else if !in_group(i) {
                g.add_vertex(&self.ids[i], self.weights[i].clone())?;
            }
        }
        for (a, b) in self.edges() {
            let (ia, ib) = (self.index[&a], self.index[&b]);
            if !in_group(ia) && !in_group(ib) {
                g.add_edge(&a, &b)?;
            }
        }
        for u in 0..self.ids.len() {
            if !in_group(u) && members.iter().all(|&m| self.has_edge_idx(m, u)) {
                g.add_edge(&new_id, &self.ids[u])?;
            }
        }
        Ok(g)
    }

    /// Multiplies every weight by `alpha`; the result has float weights.
    pub fn scale(&self, alpha: f64) -> WeightedGraph {
        let mut g = self.clone();
        g.weights = self.weights.iter().map(|w| w.scaled(alpha)).collect();
        g
    }

    pub fn with_weight(&self, id: &str, weight: Weight) -> Result<WeightedGraph, GraphError> {
        let i = self.require(id)?;
        if !weight.is_positive() {
            return Err(GraphError::BadWeight {
                id: id.to_string(),
                weight: weight.to_string(),
            });
        }
        let mut g = self.clone();
        g.weights[i] = weight;
        Ok(g)
    }

    pub fn induced(&self, keep: &[&str]) -> Result<WeightedGraph, GraphError> {
        let mut idx: Vec<usize> = keep.iter().map(|id| self.require(id)).collect::<Result<_, _>>()?;
        idx.sort_unstable();
        idx.dedup();
        let mut g = WeightedGraph::new();
        for &i in &idx {
            g.add_vertex(&self.ids[i], self.weights[i].clone())?;
        }
        for (a, b) in self.edges() {
            if g.index.contains_key(&a) && g.index.contains_key(&b) {
                g.add_edge(&a, &b)?;
            }
        }
        Ok(g)
    }

    pub fn without_edges(&self, drop: &[(&str, &str)]) -> Result<WeightedGraph, GraphError> {
        let mut g = self.clone();
        for (a, b) in drop {
            let (i, j) = (self.require(a)?, self.require(b)?);
            g.adj[i].retain(|&k| k != j);
            g.adj[j].retain(|&k| k != i);
        }
        Ok(g)
    }
}

fn sum_weights<'a, I: Iterator<Item = &'a Weight>>(ws: I) -> Weight {
    let ws: Vec<&Weight> = ws.collect();
    if ws.iter().all(|w| matches!(w, Weight::Exact(_))) {
        let mut acc = Rational64::zero();
        for w in &ws {
            if let Weight::Exact(r) = w {
                acc += *r;
            }
        }
        Weight::Exact(acc)
    } else {
        Weight::Float(ws.iter().map(|w| w.to_f64()).sum())
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Growth rate from a clique polynomial.
///
/// A root within 1e-6 of 1 at which the polynomial vanishes is snapped to 1.
pub fn growth_rate_of(q: &ExpPoly) -> Result<f64, GraphError> {
    let r = q
        .smallest_positive_root_within(DEFAULT_TOL, DEFAULT_SCAN_BOUND)
        .ok_or(GraphError::NoRoot)?;
    if (r - 1.0).abs() < 1e-6 && q.eval(1.0).map(|v| v.abs() < 1e-12).unwrap_or(false) {
        return Ok(1.0);
    }
    Ok(1.0 / r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(vs: &[(&str, i64)], es: &[(&str, &str)]) -> WeightedGraph {
        let mut g = WeightedGraph::new();
        for (id, w) in vs {
            g.add_vertex(id, Weight::int(*w)).unwrap();
        }
        for (a, b) in es {
            g.add_edge(a, b).unwrap();
        }
        g
    }

    #[test]
    fn clique_counts() {
        let g = graph(&[("v1", 1), ("v2", 1)], &[]);
        assert_eq!(g.enumerate_cliques().unwrap().len(), 3);
        let k3 = graph(&[("a", 1), ("b", 1), ("c", 1)], &[("a", "b"), ("b", "c"), ("a", "c")]);
        assert_eq!(k3.enumerate_cliques().unwrap().len(), 8);
        let path = graph(&[("v1", 1), ("v2", 1), ("v3", 1)], &[("v1", "v2"), ("v2", "v3")]);
        let cl = path.enumerate_cliques().unwrap();
        assert_eq!(cl.len(), 6);
        assert!(cl.contains(&Clique { members: vec![] }));
        assert!(cl.contains(&Clique {
            members: vec!["v2".into(), "v3".into()]
        }));
    }

    #[test]
    fn complete_graphs_grow_polynomially() {
        let k3 = graph(&[("a", 4), ("b", 2), ("c", 4)], &[("a", "b"), ("b", "c"), ("a", "c")]);
        assert!(k3.is_complete());
        assert_eq!(k3.growth_rate().unwrap(), 1.0);
        let open = k3.without_edges(&[("a", "c")]).unwrap();
        assert!(!open.is_complete());
        assert!(open.growth_rate().unwrap() > 1.0);
    }

    #[test]
    fn clique_polynomial_examples() {
        let g = graph(&[("v1", 1), ("v2", 1)], &[]);
        assert_eq!(g.clique_polynomial().unwrap(), ExpPoly::from_terms([(1.0, 0.0), (-2.0, 1.0)]).unwrap());
        let e = graph(&[("v1", 1), ("v2", 1)], &[("v1", "v2")]);
        assert_eq!(
            e.clique_polynomial().unwrap(),
            ExpPoly::from_terms([(1.0, 0.0), (-2.0, 1.0), (1.0, 2.0)]).unwrap()
        );
        let k3 = graph(&[("a", 1), ("b", 1), ("c", 2)], &[("a", "b"), ("b", "c"), ("a", "c")]);
        assert_eq!(
            k3.clique_polynomial().unwrap(),
            ExpPoly::from_terms([(1.0, 0.0), (-2.0, 1.0), (2.0, 3.0), (-1.0, 4.0)]).unwrap()
        );
        assert_eq!(k3.clique_int_poly().unwrap(), IntPoly::from_i64s(&[1, -2, 0, 2, -1]));
    }

    #[test]
    fn growth_rate_examples() {
        let g = graph(&[("v1", 1), ("v2", 1)], &[]);
        assert!((g.growth_rate().unwrap() - 2.0).abs() < 1e-12);
        let e = graph(&[("v1", 1), ("v2", 1)], &[("v1", "v2")]);
        assert_eq!(e.growth_rate().unwrap(), 1.0);
        assert_eq!(graph(&[("v", 1)], &[]).growth_rate().unwrap(), 1.0);
        assert_eq!(WeightedGraph::new().growth_rate().unwrap(), 1.0);
    }

    #[test]
    fn vertex_sum_examples() {
        let g = graph(
            &[("v1", 1), ("v2", 2), ("u2", 1), ("u3", 1)],
            &[("v1", "u3"), ("v2", "u2"), ("v2", "u3")],
        );
        let h = g.vertex_sum(&["v1", "v2"]).unwrap();
        assert_eq!(h.vertex_count(), 3);
        assert_eq!(h.weight("v1+v2"), Some(&Weight::int(3)));
        assert!(h.has_edge("v1+v2", "u3"));
        assert!(!h.has_edge("v1+v2", "u2"));

        let two = graph(&[("a", 1), ("b", 1)], &[]);
        let s = two.vertex_sum(&["a", "b"]).unwrap();
        assert_eq!(s.vertex_count(), 1);
        assert!((two.growth_rate().unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(s.growth_rate().unwrap(), 1.0);

        let single = g.vertex_sum(&["v1"]).unwrap();
        assert_eq!(single.vertex_count(), g.vertex_count());
        assert_eq!(single.edges(), g.edges());
        assert!(g.vertex_sum(&["zz"]).is_err());
        assert!(g.vertex_sum(&[]).is_err());
    }

    #[test]
    fn summing_two_isolated_vertices_halves_the_exponent() {
        // Summed into one weight-2 vertex: 1 - t^2 has its root at 1.
        // Summed pair with a third isolated weight-1 vertex: 1 - t - t^2.
        let g = graph(&[("a", 1), ("b", 1), ("c", 1)], &[]);
        let s = g.vertex_sum(&["a", "b"]).unwrap();
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((s.growth_rate().unwrap() - golden).abs() < 1e-10);
        assert!(s.growth_rate().unwrap() <= g.growth_rate().unwrap());
    }

    #[test]
    fn json_roundtrip_and_literals() {
        let text = r#"{"vertices":[{"id":"p1","weight":0.5},{"id":"q1","weight":"0.25"},{"id":"r","weight":{"num":1,"den":3}}],"edges":[["p1","q1"]]}"#;
        let g = WeightedGraph::from_json(text).unwrap();
        assert_eq!(g.weight("p1"), Some(&Weight::Float(0.5)));
        assert_eq!(g.weight("q1"), Some(&Weight::ratio(1, 4)));
        assert_eq!(g.weight("r"), Some(&Weight::ratio(1, 3)));
        let back = WeightedGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(back.edges(), g.edges());
        assert_eq!(back.weights(), g.weights());
        assert!(WeightedGraph::from_json(r#"{"vertices":[{"id":"a","weight":0}]}"#).is_err());
        assert!(WeightedGraph::from_json(r#"{"vertices":[{"id":"a","weight":1}],"edges":[["a","a"]]}"#).is_err());
        assert!(WeightedGraph::from_json(r#"{"vertices":[{"id":"a","weight":1}],"edges":[["a","b"]]}"#).is_err());
    }

    #[test]
    fn decimal_parsing() {
        assert_eq!(Weight::parse_decimal("3").unwrap(), Weight::int(3));
        assert_eq!(Weight::parse_decimal("0.125").unwrap(), Weight::ratio(1, 8));
        assert_eq!(Weight::parse_decimal(".5").unwrap(), Weight::ratio(1, 2));
        assert_eq!(Weight::parse_decimal("2/6").unwrap(), Weight::ratio(1, 3));
        assert!(Weight::parse_decimal("abc").is_err());
        assert!(Weight::parse_decimal("1/0").is_err());
    }

    #[test]
    fn vertex_limit_guard() {
        let mut g = WeightedGraph::new();
        for i in 0..41 {
            g.add_vertex(&format!("v{i}"), Weight::int(1)).unwrap();
        }
        assert!(matches!(g.enumerate_cliques(), Err(GraphError::TooLarge { .. })));
        assert_eq!(g.enumerate_cliques_with_limit(50).unwrap().len(), 42);
    }
}
