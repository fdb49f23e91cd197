#![allow(dead_code)]

use dilab::wgraph::{Weight, WeightedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random simple graph on `1..=max_n` vertices. Half the graphs get small integer
/// weights, the rest float weights in [0.25, 3].
pub fn random_graph(seed: u64, max_n: usize) -> WeightedGraph {
    let mut r = rng(seed);
    let n = r.gen_range(1..=max_n);
    let exact = r.gen_bool(0.5);
    let density = r.gen_range(0.1..0.9);
    let mut g = WeightedGraph::new();
    for i in 0..n {
        let w = if exact {
            Weight::int(r.gen_range(1..=4))
        } else {
            Weight::Float(r.gen_range(0.25..3.0))
        };
        g.add_vertex(&format!("v{i}"), w).unwrap();
    }
    for i in 0..n {
        for j in i + 1..n {
            if r.gen_bool(density) {
                g.add_edge(&format!("v{i}"), &format!("v{j}")).unwrap();
            }
        }
    }
    g
}

pub fn ids(g: &WeightedGraph) -> Vec<String> {
    g.ids().to_vec()
}

/// Smallest root in (0, 1] of `f` by a fine scan, independent of the library root
/// finder. Sign changes are bisected; local minima that reach zero (tangential
/// roots) are refined by golden-section search. A touching root at 1 counts.
pub fn smallest_root_by_scan<F: Fn(f64) -> f64>(f: F) -> Option<f64> {
    let steps = 20_000;
    let h = 1.0 / steps as f64;
    let mut xs = [0.0, h];
    let mut fs = [f(0.0), f(h)];
    for k in 2..=steps + 1 {
        let x = (k as f64 * h).min(1.0);
        let v = f(x);
        if fs[1] == 0.0 {
            return Some(xs[1]);
        }
        if (fs[1] < 0.0) != (fs[0] < 0.0) {
            return Some(bisect(&f, xs[0], xs[1], fs[0]));
        }
        if fs[1] > 0.0 && fs[1] < fs[0] && fs[1] <= v {
            let (m, fm) = golden_min(&f, xs[0], x);
            if fm.abs() < 1e-11 {
                return Some(m);
            }
            if fm < 0.0 {
                return Some(bisect(&f, xs[0], m, fs[0]));
            }
        }
        if k > steps {
            break;
        }
        xs = [xs[1], x];
        fs = [fs[1], v];
    }
    (f(1.0).abs() < 1e-9).then_some(1.0)
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, flo: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) == (flo < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn golden_min<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let m = 0.5 * (a + b);
    (m, f(m))
}

/// Clique polynomial by brute force over vertex subsets, as (coefficient, exponent)
/// terms, one per clique.
pub fn brute_force_cliques(g: &WeightedGraph) -> Vec<(f64, f64)> {
    let ids = ids(g);
    let n = ids.len();
    let mut terms = Vec::new();
    for mask in 0u64..(1 << n) {
        let members: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let clique = members
            .iter()
            .enumerate()
            .all(|(a, &i)| members[a + 1..].iter().all(|&j| g.has_edge(&ids[i], &ids[j])));
        if clique {
            let w: f64 = members.iter().map(|&i| g.weights()[i].to_f64()).sum();
            let sign = if members.len() % 2 == 0 { 1.0 } else { -1.0 };
            terms.push((sign, w));
        }
    }
    terms
}

pub fn eval_terms(terms: &[(f64, f64)], x: f64) -> f64 {
    terms.iter().map(|&(c, e)| c * x.powf(e)).sum()
}

/// Growth rate from the brute-force clique polynomial.
pub fn brute_force_growth_rate(g: &WeightedGraph) -> f64 {
    if g.vertex_count() == 0 {
        return 1.0;
    }
    let terms = brute_force_cliques(g);
    1.0 / smallest_root_by_scan(|x| eval_terms(&terms, x)).expect("clique polynomial changes sign in (0, 1]")
}
