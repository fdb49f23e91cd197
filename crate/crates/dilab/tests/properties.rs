mod common;

use std::collections::BTreeMap;

use dilab::casework::{self, builtin_cases, underline_delta};
use dilab::exppoly::{ExpPoly, IntPoly, DEFAULT_TOL};
use dilab::foldcalc::{Role, Script};
use dilab::wgraph::{Weight, WeightedGraph};
use proptest::prelude::*;
use rand::Rng;

use common::random_graph;

const TOL: f64 = 1e-9;

fn reweighted(g: &WeightedGraph, ws: &[f64]) -> WeightedGraph {
    let mut out = g.clone();
    for (id, &w) in g.ids().iter().zip(ws) {
        out = out.with_weight(id, Weight::Float(w)).unwrap();
    }
    out
}

fn subset(ids: &[String], mask: u64) -> Vec<&str> {
    ids.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, s)| s.as_str()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scaling(seed in any::<u64>(), alpha in prop::sample::select(vec![0.5, 2.0, 3.0])) {
        let g = random_graph(seed, 10);
        let lhs = g.scale(alpha).growth_rate().unwrap();
        let rhs = g.growth_rate().unwrap().powf(1.0 / alpha);
        prop_assert!((lhs - rhs).abs() <= TOL, "{lhs} vs {rhs}");
    }

    #[test]
    fn raising_a_weight_never_increases_growth(seed in any::<u64>(), pick in any::<prop::sample::Index>(), bump in 0.01f64..2.0) {
        let g = random_graph(seed, 10);
        let id = &g.ids()[pick.index(g.vertex_count())];
        let w = g.weight(id).unwrap().to_f64();
        let h = g.with_weight(id, Weight::Float(w + bump)).unwrap();
        prop_assert!(h.growth_rate().unwrap() <= g.growth_rate().unwrap() + TOL);
    }

    #[test]
    fn induced_subgraph(seed in any::<u64>(), mask in any::<u64>()) {
        let g = random_graph(seed, 10);
        let keep = subset(g.ids(), mask);
        let h = g.induced(&keep).unwrap();
        prop_assert!(g.growth_rate().unwrap() >= h.growth_rate().unwrap() - TOL);
    }

    #[test]
    fn wide_subgraph(seed in any::<u64>(), mask in any::<u64>()) {
        let g = random_graph(seed, 10);
        let edges = g.edges();
        let drop: Vec<(&str, &str)> = edges
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> (i % 64) & 1 == 1)
            .map(|(_, (a, b))| (a.as_str(), b.as_str()))
            .collect();
        let h = g.without_edges(&drop).unwrap();
        prop_assert!(h.growth_rate().unwrap() >= g.growth_rate().unwrap() - TOL);
    }

    #[test]
    fn log_convexity(seed in any::<u64>(), t in 0.0f64..=1.0) {
        let g = random_graph(seed, 10);
        let mut r = common::rng(seed ^ 0x5eed);
        let n = g.vertex_count();
        let w1: Vec<f64> = (0..n).map(|_| r.gen_range(0.25..3.0)).collect();
        let w2: Vec<f64> = (0..n).map(|_| r.gen_range(0.25..3.0)).collect();
        let wt: Vec<f64> = w1.iter().zip(&w2).map(|(a, b)| t * a + (1.0 - t) * b).collect();
        let l1 = reweighted(&g, &w1).growth_rate().unwrap();
        let l2 = reweighted(&g, &w2).growth_rate().unwrap();
        let lt = reweighted(&g, &wt).growth_rate().unwrap();
        prop_assert!(lt <= l1.powf(t) * l2.powf(1.0 - t) + TOL, "{lt} vs {l1}^{t} {l2}^{}", 1.0 - t);
    }

    #[test]
    fn vertex_sum(seed in any::<u64>(), mask in 1u64..) {
        let g = random_graph(seed, 10);
        let mut group = subset(g.ids(), mask);
        if group.is_empty() {
            group.push(g.ids()[0].as_str());
        }
        let h = g.vertex_sum(&group).unwrap();
        prop_assert!(h.growth_rate().unwrap() <= g.growth_rate().unwrap() + TOL);
    }

    #[test]
    fn planted_root(r in 0.05f64..1.0, extra in prop::collection::vec((0.01f64..1.0, 0.2f64..4.0), 0..5)) {
        // (1 - x/r) q(x) with q = 1 + sum c_i x^e_i positive on (0, r].
        let q = ExpPoly::from_terms(std::iter::once((1.0, 0.0)).chain(extra.iter().copied())).unwrap();
        let lin = ExpPoly::from_terms([(1.0, 0.0), (-1.0 / r, 1.0)]).unwrap();
        let p = &lin * &q;
        let found = p.smallest_positive_root(DEFAULT_TOL).unwrap();
        prop_assert!((found - r).abs() <= 1e-9 * r.max(1.0), "{found} vs {r}");
    }

    #[test]
    fn reciprocal_is_an_involution(cs in prop::collection::vec(-20i64..20, 1..12), lead in 1i64..9) {
        let mut cs = cs;
        cs.push(lead);
        let p = IntPoly::from_i64s(&cs);
        let d = p.degree().unwrap();
        prop_assert_eq!(p.reciprocal(d).unwrap().reciprocal(d).unwrap(), p);
    }

    #[test]
    fn largest_root_is_a_root(cs in prop::collection::vec(-6i64..6, 1..8)) {
        // Monic with negative constant term, so a positive root exists.
        let mut cs = cs;
        cs[0] = -cs[0].abs() - 1;
        cs.push(1);
        let p = IntPoly::from_i64s(&cs);
        let r = p.largest_positive_root(DEFAULT_TOL).unwrap();
        let slope: f64 = cs.iter().enumerate().skip(1).map(|(k, &c)| (k as i64 * c) as f64 * r.powi(k as i32 - 1)).sum();
        prop_assume!(slope.abs() > 1e-6);
        let rounding: f64 = 8.0 * f64::EPSILON * cs.iter().enumerate().map(|(k, &c)| (c as f64).abs() * r.powi(k as i32)).sum::<f64>();
        prop_assert!(p.eval_f64(r).abs() <= 10.0 * DEFAULT_TOL * slope.abs() + rounding);
        // Nothing larger is a root: p stays positive beyond r.
        for i in 1..=64 {
            let x = r * (1.0 + 1e-6) + i as f64 * (1.0 + r) / 16.0;
            prop_assert!(p.eval_f64(x) > 0.0, "p({x}) <= 0 beyond {r}");
        }
    }

    #[test]
    fn fold_scripts(seed in any::<u64>()) {
        let script = Script::random(seed);
        let run = script.run().unwrap();
        let first = &run.states[0];
        let (m, r0) = (first.edges().filament_count(), first.edges().petal_count());
        for st in run.states.iter().chain(std::iter::once(&run.closed)) {
            prop_assert!(st.det_is_unit());
            prop_assert!(st.zeta_preserves_roles());
            prop_assert!(st.check_parity().is_empty());
            prop_assert_eq!(st.matrix().len(), script.edges.len());
            prop_assert_eq!(st.roles().iter().filter(|r| **r == Role::Filament).count(), m);
            prop_assert_eq!(st.roles().iter().filter(|r| **r == Role::Petal).count(), r0);
        }
    }
}

#[test]
fn objective_matches_instantiation() {
    for case in builtin_cases() {
        let symbols = case.family.symbols();
        let mut r = common::rng(case.id.len() as u64);
        for _ in 0..5 {
            let params: BTreeMap<String, f64> = symbols.iter().map(|s| (s.clone(), r.gen_range(0.05..1.5))).collect();
            let obj = case.family.objective(&params).unwrap();
            let direct = case.family.instantiate(&params).unwrap().growth_rate().unwrap();
            assert!((obj - direct).abs() <= 1e-9 * direct, "{}: {obj} vs {direct}", case.id);
            assert!(obj >= 1.0);
        }
    }
}

#[test]
fn delta_decreases_within_parity_classes() {
    let values: Vec<f64> = (0..=204).map(|n| if n < 3 { f64::NAN } else { underline_delta(n).unwrap() }).collect();
    for n in 9..=200usize {
        assert!(values[n + 4] < values[n], "n = {n}");
        if n % 2 == 1 {
            assert!(values[n + 2] < values[n], "n = {n}");
        }
    }
    for n in 4..=200usize {
        if n != 6 && n != 10 {
            assert!(values[n - 1] > values[n], "n = {n}");
        }
    }
}

#[test]
fn membership_definitions_agree() {
    for n in 3..=200 {
        assert_eq!(casework::in_underline_n(n), casework::in_underline_n_by_value(n).unwrap(), "n = {n}");
    }
}
