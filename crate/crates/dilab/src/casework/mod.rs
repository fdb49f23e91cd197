//! Constrained growth-rate minimization over parameterized graph families.
//!
//! All weights are fractions of n, so the growth rate of an instantiated graph
//! is λⁿ for the unnormalised weights.

mod accounting;
mod deltan;
mod optimize;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exppoly::{ExpPoly, PolyError};
use crate::wgraph::{growth_rate_of, GraphError, Weight, WeightedGraph};

pub use accounting::{accounting_constraints, Accounting};
pub use deltan::{
    durand_kerner, in_underline_n, in_underline_n_by_value, integer_search_deltan, lower_bound, parity, parity_rule,
    terminal_clique_poly, terminal_family, underline_delta, underline_delta_poly, unique_max_modulus, Candidate,
    DeltanSearch, Parity, MODULUS_GAP, N_THRESHOLD, TIE_TOL,
};
pub use optimize::{minimize, nelder_mead, CaseResult, DeltanSummary, MinimizeOptions, SanityResult};

/// Slack allowed on `min >= expected_bound`.
pub const BOUND_SLACK: f64 = 1e-3;

/// Slack on linear constraints when testing feasibility.
pub const FEASIBILITY_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CaseError {
    #[error("case file: {0}")]
    Parse(String),
    #[error("case {id}: {msg}")]
    Invalid { id: String, msg: String },
    #[error("unbound symbol {0:?}")]
    Unbound(String),
    #[error("symbol {symbol:?} must be positive, got {value}")]
    NonPositive { symbol: String, value: f64 },
    #[error("{0}")]
    Domain(String),
    #[error("no feasible point found for case {0}")]
    Infeasible(String),
    #[error("{0}")]
    Computation(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Group {
    pub name: String,
    pub symbol: String,
    #[serde(default = "one")]
    pub count: u32,
}

fn one() -> u32 {
    1
}

impl Group {
    pub fn new(name: &str, symbol: &str, count: u32) -> Self {
        Group {
            name: name.to_string(),
            symbol: symbol.to_string(),
            count,
        }
    }
}

/// Groups of equal-weight vertices; an edge between two groups joins every pair
/// of vertices across them, and there are no edges inside a group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFamily {
    pub groups: Vec<Group>,
    #[serde(default)]
    pub edges: Vec<(String, String)>,
}

impl GraphFamily {
    /// Weight symbols in order of first appearance.
    pub fn symbols(&self) -> Vec<String> {
        let mut seen = BTreeSet::new();
        self.groups
            .iter()
            .filter(|g| seen.insert(g.symbol.clone()))
            .map(|g| g.symbol.clone())
            .collect()
    }

    fn validate(&self) -> Result<(), String> {
        if self.groups.is_empty() {
            return Err("family has no groups".into());
        }
        let mut names = BTreeSet::new();
        for g in &self.groups {
            if g.count == 0 {
                return Err(format!("group {} has count 0", g.name));
            }
            if !names.insert(g.name.as_str()) {
                return Err(format!("duplicate group {}", g.name));
            }
        }
        let mut pairs = BTreeSet::new();
        for (a, b) in &self.edges {
            for x in [a, b] {
                if !names.contains(x.as_str()) {
                    return Err(format!("edge mentions unknown group {x}"));
                }
            }
            if a == b {
                return Err(format!("edge {a}-{a} joins a group to itself"));
            }
            let key = if a < b { (a, b) } else { (b, a) };
            if !pairs.insert(key) {
                return Err(format!("duplicate edge {a}-{b}"));
            }
        }
        Ok(())
    }

    fn vertex_ids(&self, g: &Group) -> Vec<String> {
        if g.count == 1 {
            vec![g.name.clone()]
        } else {
            (1..=g.count).map(|i| format!("{}{}", g.name, i)).collect()
        }
    }

    /// Builds the graph with the given weights per symbol.
    pub fn instantiate_weights(&self, params: &BTreeMap<String, Weight>) -> Result<WeightedGraph, CaseError> {
        self.validate().map_err(CaseError::Domain)?;
        let mut g = WeightedGraph::new();
        for grp in &self.groups {
            let w = params.get(&grp.symbol).ok_or_else(|| CaseError::Unbound(grp.symbol.clone()))?;
            for id in self.vertex_ids(grp) {
                g.add_vertex(&id, w.clone())?;
            }
        }
        let by_name: BTreeMap<&str, &Group> = self.groups.iter().map(|g| (g.name.as_str(), g)).collect();
        for (a, b) in &self.edges {
            for x in self.vertex_ids(by_name[a.as_str()]) {
                for y in self.vertex_ids(by_name[b.as_str()]) {
                    g.add_edge(&x, &y)?;
                }
            }
        }
        Ok(g)
    }

    pub fn instantiate(&self, params: &BTreeMap<String, f64>) -> Result<WeightedGraph, CaseError> {
        let mut w = BTreeMap::new();
        for s in self.symbols() {
            let v = *params.get(&s).ok_or_else(|| CaseError::Unbound(s.clone()))?;
            if !(v > 0.0 && v.is_finite()) {
                return Err(CaseError::NonPositive { symbol: s, value: v });
            }
            w.insert(s, Weight::Float(v));
        }
        self.instantiate_weights(&w)
    }

    /// Growth rate of the instantiated graph, computed from the group-level clique
    /// signature.
    pub fn objective(&self, params: &BTreeMap<String, f64>) -> Result<f64, CaseError> {
        let sig = Signature::new(self).map_err(CaseError::Domain)?;
        let values = sig
            .symbols
            .iter()
            .map(|s| {
                let v = *params.get(s).ok_or_else(|| CaseError::Unbound(s.clone()))?;
                if v > 0.0 && v.is_finite() {
                    Ok(v)
                } else {
                    Err(CaseError::NonPositive {
                        symbol: s.clone(),
                        value: v,
                    })
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        sig.eval(&values)
    }
}

/// Cliques of an instantiated family use at most one vertex per group, so they
/// correspond to cliques `S` of the group graph, each standing for `prod N_g`
/// vertex cliques with sign `(-1)^|S|`.
#[derive(Debug, Clone)]
pub(crate) struct Signature {
    pub(crate) symbols: Vec<String>,
    terms: Vec<(f64, Vec<usize>)>,
}

impl Signature {
    pub(crate) fn new(family: &GraphFamily) -> Result<Self, String> {
        family.validate()?;
        let symbols = family.symbols();
        let sym_idx: Vec<usize> = family
            .groups
            .iter()
            .map(|g| symbols.iter().position(|s| *s == g.symbol).expect("symbol listed"))
            .collect();
        let mut group_graph = WeightedGraph::new();
        for g in &family.groups {
            group_graph
                .add_vertex(&g.name, Weight::int(1))
                .map_err(|e| e.to_string())?;
        }
        for (a, b) in &family.edges {
            group_graph.add_edge(a, b).map_err(|e| e.to_string())?;
        }
        let mut terms = Vec::new();
        group_graph.for_each_clique(|members| {
            let sign = if members.len() % 2 == 0 { 1.0 } else { -1.0 };
            let count: f64 = members.iter().map(|&i| family.groups[i].count as f64).product();
            terms.push((sign * count, members.iter().map(|&i| sym_idx[i]).collect()));
        });
        Ok(Signature { symbols, terms })
    }

    pub(crate) fn poly(&self, values: &[f64]) -> Result<ExpPoly, CaseError> {
        let terms = self
            .terms
            .iter()
            .map(|(c, syms)| (*c, syms.iter().map(|&i| values[i]).sum::<f64>()));
        Ok(ExpPoly::from_terms(terms)?)
    }

    pub(crate) fn eval(&self, values: &[f64]) -> Result<f64, CaseError> {
        Ok(growth_rate_of(&self.poly(values)?)?)
    }
}

/// `sum coeffs[s] * s <= bound`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub coeffs: BTreeMap<String, f64>,
    pub bound: f64,
}

impl Constraint {
    pub fn new<'a, I: IntoIterator<Item = (&'a str, f64)>>(coeffs: I, bound: f64) -> Self {
        Constraint {
            coeffs: coeffs.into_iter().map(|(s, c)| (s.to_string(), c)).collect(),
            bound,
        }
    }

    pub fn lhs(&self, values: &BTreeMap<String, f64>) -> f64 {
        self.coeffs.iter().map(|(s, c)| c * values.get(s).copied().unwrap_or(f64::NAN)).sum()
    }

    pub fn holds(&self, values: &BTreeMap<String, f64>) -> bool {
        self.lhs(values) <= self.bound + FEASIBILITY_TOL
    }
}

/// `symbol = constant + sum coeffs[s] * s`, applied in file order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reduction {
    pub symbol: String,
    #[serde(default)]
    pub constant: f64,
    #[serde(default)]
    pub coeffs: BTreeMap<String, f64>,
    pub anchor: String,
    /// Kept in the unreduced sanity pass; set for equalities that are not
    /// monotonicity arguments.
    #[serde(default)]
    pub structural: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    #[default]
    Minimize,
    Deltan,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseSpec {
    pub id: String,
    pub anchor: String,
    #[serde(default)]
    pub solver: Solver,
    pub expected_bound: f64,
    #[serde(default)]
    pub closed_form: Option<f64>,
    #[serde(default)]
    pub prose_reconstructed: bool,
    #[serde(default)]
    pub notes: Vec<String>,
    pub family: GraphFamily,
    #[serde(default)]
    pub constraints: Vec<Constraint>,
    #[serde(default)]
    pub reductions: Vec<Reduction>,
    /// Per-symbol `(lo, hi]`; `(0, 1]` when absent.
    #[serde(default)]
    pub bounds: BTreeMap<String, (f64, f64)>,
    #[serde(default)]
    pub expected_argmin: BTreeMap<String, f64>,
}

impl CaseSpec {
    pub fn from_toml(text: &str) -> Result<Self, CaseError> {
        let spec: CaseSpec = toml::from_str(text).map_err(|e| CaseError::Parse(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("case serializes")
    }

    fn invalid(&self, msg: impl Into<String>) -> CaseError {
        CaseError::Invalid {
            id: self.id.clone(),
            msg: msg.into(),
        }
    }

    pub fn validate(&self) -> Result<(), CaseError> {
        self.family.validate().map_err(|m| self.invalid(m))?;
        if !(self.expected_bound > 1.0) {
            return Err(self.invalid(format!("expected_bound must exceed 1, got {}", self.expected_bound)));
        }
        let symbols: BTreeSet<String> = self.family.symbols().into_iter().collect();
        let known = |s: &String, what: &str| {
            if symbols.contains(s) {
                Ok(())
            } else {
                Err(self.invalid(format!("{what} mentions unknown symbol {s}")))
            }
        };
        for c in &self.constraints {
            for s in c.coeffs.keys() {
                known(s, "constraint")?;
            }
        }
        let mut reduced = BTreeSet::new();
        for (i, r) in self.reductions.iter().enumerate() {
            known(&r.symbol, "reduction")?;
            if !reduced.insert(r.symbol.clone()) {
                return Err(self.invalid(format!("symbol {} reduced twice", r.symbol)));
            }
            for s in r.coeffs.keys() {
                known(s, "reduction")?;
                if s == &r.symbol || self.reductions[i + 1..].iter().any(|later| &later.symbol == s) {
                    return Err(self.invalid(format!("reduction of {} uses {s} before it is determined", r.symbol)));
                }
            }
        }
        for (s, (lo, hi)) in &self.bounds {
            known(s, "bounds")?;
            if !(*lo >= 0.0 && lo < hi && hi.is_finite()) {
                return Err(self.invalid(format!("bad bounds for {s}")));
            }
        }
        for s in self.expected_argmin.keys() {
            known(s, "expected_argmin")?;
        }
        Ok(())
    }

    pub fn strict(&self) -> bool {
        !self.prose_reconstructed
    }

    pub fn bounds_of(&self, symbol: &str) -> (f64, f64) {
        self.bounds.get(symbol).copied().unwrap_or((0.0, 1.0))
    }

    /// Symbols left free after the reductions selected by `keep`.
    pub(crate) fn free_symbols(&self, reductions: &[&Reduction]) -> Vec<String> {
        self.family
            .symbols()
            .into_iter()
            .filter(|s| !reductions.iter().any(|r| &r.symbol == s))
            .collect()
    }

    /// Completes a point with the given reductions.
    pub(crate) fn complete(&self, reductions: &[&Reduction], mut values: BTreeMap<String, f64>) -> BTreeMap<String, f64> {
        for r in reductions {
            let v = r.constant
                + r.coeffs
                    .iter()
                    .map(|(s, c)| c * values.get(s).copied().unwrap_or(f64::NAN))
                    .sum::<f64>();
            values.insert(r.symbol.clone(), v);
        }
        values
    }

    /// Positivity, bounds and linear constraints.
    pub fn feasible(&self, values: &BTreeMap<String, f64>) -> bool {
        values.iter().all(|(s, &v)| {
            let (lo, hi) = self.bounds_of(s);
            v.is_finite() && v > lo && v > 0.0 && v <= hi + FEASIBILITY_TOL
        }) && self.constraints.iter().all(|c| c.holds(values))
    }

    /// Objective at a full parameter point, reductions included.
    pub fn objective_at(&self, free: &BTreeMap<String, f64>) -> Result<f64, CaseError> {
        let all: Vec<&Reduction> = self.reductions.iter().collect();
        self.family.objective(&self.complete(&all, free.clone()))
    }
}

macro_rules! builtin_sources {
    ($($file:literal),* $(,)?) => {
        &[$(($file, include_str!(concat!("cases/", $file)))),*]
    };
}

const BUILTIN_SOURCES: &[(&str, &str)] = builtin_sources![
    "I.half-n.toml",
    "I.leq2curves.toml",
    "I.enter-filament-twice.toml",
    "I.enter-filament-twice-same.toml",
    "I.beta-gamma-intersect.toml",
    "I.petal-beta.toml",
    "I.mu-fil-petal-a.toml",
    "I.mu-fil-petal-b.toml",
    "I.mu-fil-petal-c.toml",
    "I.distinct-filament-curves.toml",
    "I.same-filament-other.toml",
    "I.non-reciprocal.toml",
    "I.mu-disjoint-beta-gamma.toml",
    "I.mu-disjoint-gamma.toml",
    "I.two-bridges.toml",
    "I.deltan.toml",
    "II.beta-gamma-intersect.toml",
    "II.gamma-not-petal-curve.toml",
    "II.mu-no-filament.toml",
    "II.mu-filament-a.toml",
    "II.mu-filament-b.toml",
    "II.mu-filament-c.toml",
    "III.two-petal.toml",
    "III.mu-no-filament.toml",
    "III.mu-filament-beta.toml",
    "III.mu-filament-nobeta.toml",
    "IV.A1.toml",
    "IV.A2.toml",
    "IV.A3.toml",
    "IV.B1.toml",
    "IV.B2.toml",
    "IV.B3.toml",
    "IV.B4.toml",
    "V.both-non-petal.toml",
];

/// Every bundled case, in file order.
pub fn builtin_cases() -> Vec<CaseSpec> {
    BUILTIN_SOURCES
        .iter()
        .map(|(file, text)| CaseSpec::from_toml(text).unwrap_or_else(|e| panic!("bundled case {file}: {e}")))
        .collect()
}

pub fn builtin_case(id: &str) -> Option<CaseSpec> {
    builtin_cases().into_iter().find(|c| c.id == id)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(kv: &[(&str, f64)]) -> BTreeMap<String, f64> {
        kv.iter().map(|&(k, v)| (k.to_string(), v)).collect()
    }

    #[test]
    fn instantiate_k22() {
        let fam = GraphFamily {
            groups: vec![Group::new("P", "p", 2), Group::new("Q", "q", 2)],
            edges: vec![("P".into(), "Q".into())],
        };
        let g = fam.instantiate(&params(&[("p", 1.0), ("q", 1.0)])).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 4);
        assert!(!g.has_edge("P1", "P2"));
        assert!(fam.instantiate(&params(&[("p", 1.0)])).is_err());
        assert!(fam.instantiate(&params(&[("p", 1.0), ("q", 0.0)])).is_err());
    }

    #[test]
    fn objective_examples() {
        let iso = GraphFamily {
            groups: vec![Group::new("U1", "u1", 1), Group::new("U2", "u2", 1)],
            edges: vec![],
        };
        let v = iso.objective(&params(&[("u1", 0.25), ("u2", 0.25)])).unwrap();
        assert!((v - 16.0).abs() < 1e-9);
        let path = GraphFamily {
            groups: vec![Group::new("U1", "u1", 1), Group::new("U2", "u2", 1), Group::new("U3", "u3", 1)],
            edges: vec![("U1".into(), "U3".into())],
        };
        let v = path.objective(&params(&[("u1", 0.25), ("u2", 0.5), ("u3", 0.25)])).unwrap();
        assert!((v - 16.0).abs() < 1e-9);
        let single = GraphFamily {
            groups: vec![Group::new("V", "v", 1)],
            edges: vec![],
        };
        assert_eq!(single.objective(&params(&[("v", 1.0)])).unwrap(), 1.0);
    }

    #[test]
    fn terminal_family_gives_delta9() {
        let fam = terminal_family();
        let g = fam
            .instantiate(&params(&[("p", 4.0 / 9.0), ("q", 5.0 / 9.0), ("m", 1.0), ("u", 1.0)]))
            .unwrap();
        assert_eq!(g.vertex_count(), 7);
        let d9 = underline_delta(9).unwrap();
        assert!((g.growth_rate().unwrap() - d9.powi(9)).abs() < 1e-8);
    }

    #[test]
    fn builtins_parse_and_validate() {
        let cases = builtin_cases();
        assert_eq!(cases.len(), BUILTIN_SOURCES.len());
        let ids: BTreeSet<&str> = cases.iter().map(|c| c.id.as_str()).collect();
        assert_eq!(ids.len(), cases.len());
        assert!(ids.contains("I.deltan"));
        assert_eq!(builtin_case("II.gamma-not-petal-curve").unwrap().expected_bound, 33.0);
        assert!(builtin_case("I.two-bridges").unwrap().closed_form.is_some());
        let deltan = builtin_case("I.deltan").unwrap();
        assert_eq!(deltan.solver, Solver::Deltan);
        assert_eq!(deltan.family, terminal_family());
        for c in &cases {
            let back = CaseSpec::from_toml(&c.to_toml()).unwrap();
            assert_eq!(&back, c);
        }
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = CaseSpec::from_toml("id = \"x\"\nanchor = \"a\"\nexpected_bound = \n").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        let bad_edge = r#"
id = "x"
anchor = "a"
expected_bound = 2.0
[family]
groups = [{ name = "P", symbol = "p" }]
edges = [["P", "Z"]]
"#;
        assert!(matches!(CaseSpec::from_toml(bad_edge), Err(CaseError::Invalid { .. })));
    }

    #[test]
    fn signature_matches_instantiation() {
        for c in builtin_cases() {
            let syms = c.family.symbols();
            let p: BTreeMap<String, f64> = syms
                .iter()
                .enumerate()
                .map(|(i, s)| (s.clone(), 0.2 + 0.07 * i as f64))
                .collect();
            let fast = c.family.objective(&p).unwrap();
            let slow = c.family.instantiate(&p).unwrap().growth_rate().unwrap();
            assert!((fast - slow).abs() <= 1e-9 * slow, "{}: {fast} vs {slow}", c.id);
        }
    }
}
