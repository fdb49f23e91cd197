//! Command-line front end. `run` does all the work and returns the text to print
//! together with the exit code, so the binary is a thin wrapper.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::casework::{self, builtin_case, builtin_cases, CaseResult, CaseSpec, MinimizeOptions};
use crate::digraph::Digraph;
use crate::foldcalc::Script;
use crate::wgraph::WeightedGraph;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Table cells with no known value.
pub const UNKNOWN_SLOTS: [u32; 6] = [10, 12, 14, 18, 22, 26];

/// Largest digraph size accepted by `verify-mcmullen`.
pub const MAX_VERIFY_SIZE: usize = 8;

const RADIUS_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "dilab", version, about = "Growth rates of clique polynomials and minimum-dilatation casework")]
pub struct Cli {
    /// Emit a JSON report with full precision instead of Markdown.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// δ̲ₙ, the lower bound and N̲ membership, or the full table.
    Delta(DeltaArgs),
    /// Check the curve-complex identity on random strongly connected digraphs.
    VerifyMcmullen(VerifyArgs),
    /// Run constrained growth-rate minimizations.
    Minimize(MinimizeArgs),
    /// Growth rate of a weighted graph given as JSON.
    Growth {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Curves and curve complex of a digraph given as a JSON matrix.
    Curves {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Run a fold script and check its invariants.
    Fold {
        #[arg(long)]
        script: PathBuf,
    },
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("what").required(true).args(["n", "table"])))]
pub struct DeltaArgs {
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub table: bool,
    /// Rows of the table.
    #[arg(long, default_value_t = 8, requires = "table")]
    pub max_k: u32,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Largest number of vertices.
    #[arg(long, default_value_t = 6)]
    pub size: usize,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["case", "builtin", "all_builtin"])))]
pub struct MinimizeArgs {
    #[arg(long)]
    pub case: Option<PathBuf>,
    #[arg(long)]
    pub builtin: Option<String>,
    #[arg(long)]
    pub all_builtin: bool,
    /// n for the δ̲ₙ case.
    #[arg(long, default_value_t = 9)]
    pub n: u32,
    /// Grid points per free dimension.
    #[arg(long, default_value_t = 64)]
    pub grid: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Skip the unreduced sanity pass.
    #[arg(long)]
    pub no_sanity: bool,
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub text: String,
}

/// Machine-readable report. Identical inputs and seed give identical bytes.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs_digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub ok: bool,
    pub results: Value,
}

#[derive(Debug)]
struct UsageError(String);

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

struct Produced {
    command: &'static str,
    inputs: Vec<u8>,
    seed: Option<u64>,
    ok: bool,
    results: Value,
    markdown: String,
}

pub fn run(cli: &Cli) -> Outcome {
    let produced = match &cli.command {
        Command::Delta(a) => cmd_delta(a),
        Command::VerifyMcmullen(a) => cmd_verify_mcmullen(a),
        Command::Minimize(a) => cmd_minimize(a),
        Command::Growth { graph } => cmd_growth(graph),
        Command::Curves { matrix } => cmd_curves(matrix),
        Command::Fold { script } => cmd_fold(script),
    };
    match produced {
        Err(UsageError(msg)) => Outcome {
            code: EXIT_USAGE,
            text: format!("error: {msg}\n"),
        },
        Ok(p) => {
            let code = if p.ok { EXIT_OK } else { EXIT_FAILED };
            let text = if cli.json {
                let report = RunReport {
                    command: p.command.to_string(),
                    inputs_digest: digest(p.command, &p.inputs),
                    seed: p.seed,
                    ok: p.ok,
                    results: p.results,
                };
                let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
                s.push('\n');
                s
            } else {
                p.markdown
            };
            Outcome { code, text }
        }
    }
}

fn digest(command: &str, inputs: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(command.as_bytes());
    h.update([0]);
    h.update(inputs);
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn read(path: &Path) -> Result<String, UsageError> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn f6(x: f64) -> String {
    format!("{x:.6}")
}

fn fmt_point(p: &BTreeMap<String, f64>) -> String {
    p.iter().map(|(k, v)| format!("{k}={}", f6(*v))).collect::<Vec<_>>().join(", ")
}

// ---- delta ----

/// The table cell for braid index n: `None` for the unknown slots.
/// The n = 6 cell holds δ̲₅.
pub fn table_cell(n: u32) -> Result<Option<f64>, casework::CaseError> {
    if UNKNOWN_SLOTS.contains(&n) {
        return Ok(None);
    }
    casework::underline_delta(if n == 6 { 5 } else { n }).map(Some)
}

fn cmd_delta(a: &DeltaArgs) -> Result<Produced, UsageError> {
    if a.table {
        if a.max_k == 0 {
            return Err(usage("--max-k must be at least 1"));
        }
        let mut md = String::from("| k | n=4k-1 | n=4k | n=4k+1 | n=4k+2 |\n|---|---|---|---|---|\n");
        let mut rows = Vec::new();
        for k in 1..=a.max_k {
            let ns = [4 * k - 1, 4 * k, 4 * k + 1, 4 * k + 2];
            let mut cells = Vec::new();
            let _ = write!(md, "| {k} |");
            for n in ns {
                let cell = table_cell(n).map_err(|e| usage(e.to_string()))?;
                match cell {
                    Some(v) => {
                        let _ = write!(md, " {v:.5} |");
                    }
                    None => md.push_str(" ??? |"),
                }
                cells.push(json!({ "n": n, "value": cell }));
            }
            md.push('\n');
            rows.push(json!({ "k": k, "cells": cells }));
        }
        return Ok(Produced {
            command: "delta",
            inputs: format!("table max_k={}", a.max_k).into_bytes(),
            seed: None,
            ok: true,
            results: json!({ "rows": rows }),
            markdown: md,
        });
    }
    let n = a.n.expect("clap requires --n or --table");
    if n < 3 {
        return Err(usage(format!("--n must be at least 3, got {n}")));
    }
    let err = |e: casework::CaseError| usage(e.to_string());
    let delta = casework::underline_delta(n).map_err(err)?;
    let bound = casework::lower_bound(n).map_err(err)?;
    let member = casework::in_underline_n(n);
    let unknown = UNKNOWN_SLOTS.contains(&n);
    let membership = if member { "in N̲" } else { "not in N̲" };
    let mut md = String::new();
    if unknown {
        let _ = writeln!(md, "n = {n}: ??? (δ̲_{n} = {} for reference, {membership})", f6(delta));
    } else {
        let _ = writeln!(md, "n = {n}: δ̲_{n} = {}, {membership}", f6(delta));
    }
    let _ = writeln!(md, "δ̲_{n}^{n} = {}", f6(delta.powi(n as i32)));
    let _ = writeln!(md, "lower bound = {}", f6(bound));
    Ok(Produced {
        command: "delta",
        inputs: format!("n={n}").into_bytes(),
        seed: None,
        ok: true,
        results: json!({
            "n": n,
            "underline_delta": delta,
            "underline_delta_pow_n": delta.powi(n as i32),
            "lower_bound": bound,
            "in_underline_n": member,
            "unknown_slot": unknown,
        }),
        markdown: md,
    })
}

// ---- verify-mcmullen ----

#[derive(Debug, Clone, Serialize)]
struct Trial {
    index: usize,
    matrix: Vec<Vec<u32>>,
    ok: bool,
    equal: bool,
    curve_count: usize,
    char_poly: String,
    reciprocal_clique_poly: String,
    spectral_radius: f64,
    growth_rate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn run_trial(index: usize, max_size: usize, seed: u64) -> Trial {
    let d = Digraph::random_strongly_connected(max_size, seed.wrapping_add(index as u64));
    let mut t = Trial {
        index,
        matrix: d.matrix().to_vec(),
        ok: false,
        equal: false,
        curve_count: 0,
        char_poly: String::new(),
        reciprocal_clique_poly: String::new(),
        spectral_radius: f64::NAN,
        growth_rate: f64::NAN,
        error: None,
    };
    let checked = (|| -> Result<(), String> {
        let rep = d.verify_mcmullen().map_err(|e| e.to_string())?;
        t.equal = rep.equal;
        t.curve_count = rep.curve_count;
        t.char_poly = rep.char_poly;
        t.reciprocal_clique_poly = rep.reciprocal;
        t.spectral_radius = d.spectral_radius().map_err(|e| e.to_string())?.radius;
        t.growth_rate = d.curve_growth_rate().map_err(|e| e.to_string())?;
        Ok(())
    })();
    match checked {
        Ok(()) => t.ok = t.equal && (t.spectral_radius - t.growth_rate).abs() <= RADIUS_TOL,
        Err(e) => t.error = Some(e),
    }
    t
}

fn cmd_verify_mcmullen(a: &VerifyArgs) -> Result<Produced, UsageError> {
    if a.size == 0 || a.size > MAX_VERIFY_SIZE {
        return Err(usage(format!("--size must lie in 1..={MAX_VERIFY_SIZE}, got {}", a.size)));
    }
    let trials: Vec<Trial> = (0..a.trials).into_par_iter().map(|i| run_trial(i, a.size, a.seed)).collect();
    let passed = trials.iter().filter(|t| t.ok).count();
    let ok = passed == trials.len();
    let mut md = String::new();
    let _ = writeln!(md, "{passed}/{} ok", trials.len());
    let verbose = trials.len() <= 3;
    for t in trials.iter().filter(|t| verbose || !t.ok) {
        let _ = writeln!(md, "\n### trial {} ({})", t.index, if t.ok { "ok" } else { "FAILED" });
        let _ = writeln!(md, "- matrix: {:?}", t.matrix);
        let _ = writeln!(md, "- curves: {}", t.curve_count);
        let _ = writeln!(md, "- char poly: {}", t.char_poly);
        let _ = writeln!(md, "- t^n Q(1/t): {}", t.reciprocal_clique_poly);
        let _ = writeln!(md, "- spectral radius: {}", f6(t.spectral_radius));
        let _ = writeln!(md, "- growth rate: {}", f6(t.growth_rate));
        if let Some(e) = &t.error {
            let _ = writeln!(md, "- error: {e}");
        }
    }
    Ok(Produced {
        command: "verify-mcmullen",
        inputs: format!("size={} trials={}", a.size, a.trials).into_bytes(),
        seed: Some(a.seed),
        ok,
        results: json!({ "passed": passed, "trials": trials }),
        markdown: md,
    })
}

// ---- minimize ----

fn load_cases(a: &MinimizeArgs) -> Result<(Vec<CaseSpec>, Vec<u8>), UsageError> {
    if let Some(path) = &a.case {
        let text = read(path)?;
        let case = CaseSpec::from_toml(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        return Ok((vec![case], text.into_bytes()));
    }
    if let Some(id) = &a.builtin {
        let case = builtin_case(id).ok_or_else(|| usage(format!("no builtin case {id:?}")))?;
        return Ok((vec![case], format!("builtin={id}").into_bytes()));
    }
    Ok((builtin_cases(), b"all-builtin".to_vec()))
}

fn case_markdown(r: &CaseResult) -> String {
    let mut md = String::new();
    let _ = writeln!(md, "## {}", r.id);
    let _ = writeln!(md, "- min: {}", f6(r.min));
    let _ = writeln!(md, "- argmin: {}", fmt_point(&r.argmin));
    let _ = writeln!(
        md,
        "- expected bound: {} ({})",
        f6(r.expected_bound),
        if r.meets_bound { "met" } else { "MISSED" }
    );
    if let Some(c) = r.closed_form {
        let _ = writeln!(md, "- closed form: {}", f6(c));
    }
    if let Some(d) = r.argmin_deviation {
        let _ = writeln!(md, "- argmin deviation: {}", f6(d));
    }
    if let Some(s) = &r.sanity {
        let _ = writeln!(
            md,
            "- unreduced check: {}{}",
            f6(s.min),
            if s.beats_reduced { " (undercuts the reduced minimum)" } else { "" }
        );
    }
    if let Some(d) = &r.deltan {
        let _ = writeln!(
            md,
            "- (p,q)=({},{}) at n={}; minimum over m attained at m={} with ({},{})",
            d.pq_at_n.0, d.pq_at_n.1, d.n, d.m, d.pq.0, d.pq.1
        );
    }
    md
}

fn cmd_minimize(a: &MinimizeArgs) -> Result<Produced, UsageError> {
    if a.grid < 2 {
        return Err(usage("--grid must be at least 2"));
    }
    if a.n < 5 {
        return Err(usage(format!("--n must be at least 5, got {}", a.n)));
    }
    let (cases, mut inputs) = load_cases(a)?;
    inputs.extend_from_slice(format!(" n={} grid={} sanity={}", a.n, a.grid, !a.no_sanity).as_bytes());
    let opts = MinimizeOptions {
        grid: a.grid,
        seed: a.seed,
        n: a.n,
        sanity: !a.no_sanity,
        ..MinimizeOptions::default()
    };
    let mut results = Vec::new();
    for case in &cases {
        let r = casework::minimize(case, &opts).map_err(|e| usage(format!("{}: {e}", case.id)))?;
        results.push(r);
    }
    let ok = results.iter().all(|r| r.meets_bound || !r.strict);
    let markdown = if a.all_builtin {
        let mut md = String::from("| case | min | bound | status | argmin |\n|---|---|---|---|---|\n");
        for r in &results {
            let status = match (r.meets_bound, r.strict) {
                (true, _) => "met",
                (false, true) => "MISSED",
                (false, false) => "missed (reconstructed)",
            };
            let _ = writeln!(
                md,
                "| {} | {} | {} | {status} | {} |",
                r.id,
                f6(r.min),
                f6(r.expected_bound),
                fmt_point(&r.argmin)
            );
        }
        let missed: Vec<&str> = results.iter().filter(|r| r.strict && !r.meets_bound).map(|r| r.id.as_str()).collect();
        let _ = writeln!(md, "\n{} cases, strict misses: {}", results.len(), if missed.is_empty() { "none".into() } else { missed.join(", ") });
        md
    } else {
        results.iter().map(case_markdown).collect::<Vec<_>>().join("\n")
    };
    Ok(Produced {
        command: "minimize",
        inputs,
        seed: Some(a.seed),
        ok,
        results: serde_json::to_value(&results).expect("results serialize"),
        markdown,
    })
}

// ---- growth, curves, fold ----

fn cmd_growth(path: &Path) -> Result<Produced, UsageError> {
    let text = read(path)?;
    let g = WeightedGraph::from_json(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let q = g.clique_polynomial().map_err(|e| usage(e.to_string()))?;
    let rate = g.growth_rate().map_err(|e| usage(e.to_string()))?;
    let markdown = format!(
        "- vertices: {}\n- edges: {}\n- clique polynomial: {q}\n- growth rate: {}\n",
        g.vertex_count(),
        g.edge_count(),
        f6(rate)
    );
    Ok(Produced {
        command: "growth",
        inputs: text.into_bytes(),
        seed: None,
        ok: true,
        results: json!({
            "vertices": g.vertex_count(),
            "edges": g.edge_count(),
            "clique_polynomial": q.to_string(),
            "growth_rate": rate,
        }),
        markdown,
    })
}

fn cmd_curves(path: &Path) -> Result<Produced, UsageError> {
    let text = read(path)?;
    let d = Digraph::from_json(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let err = |e: crate::digraph::DigraphError| usage(e.to_string());
    let curves = d.enumerate_curves().map_err(err)?;
    let complex = d.curve_complex().map_err(err)?;
    let clique = d.curve_clique_poly().map_err(err)?;
    let mut md = String::new();
    let _ = writeln!(md, "{} curves", curves.len());
    for c in &curves {
        let _ = writeln!(md, "- {}: {c}", c.label());
    }
    let edges = complex.edges();
    let _ = writeln!(md, "\ncurve complex: {} vertices, {} edges", complex.vertex_count(), edges.len());
    for (a, b) in &edges {
        let _ = writeln!(md, "- {a} -- {b}");
    }
    let _ = writeln!(md, "\nclique polynomial: {clique}");
    let _ = writeln!(md, "characteristic polynomial: {}", d.char_poly());
    let curve_json: Vec<Value> = curves
        .iter()
        .map(|c| json!({ "label": c.label(), "vertices": c.vertices, "edge_choices": c.edge_choices }))
        .collect();
    Ok(Produced {
        command: "curves",
        inputs: text.into_bytes(),
        seed: None,
        ok: true,
        results: json!({
            "curves": curve_json,
            "complex_edges": edges,
            "clique_polynomial": clique.to_string(),
            "char_poly": d.char_poly().to_string(),
        }),
        markdown: md,
    })
}

fn cmd_fold(path: &Path) -> Result<Produced, UsageError> {
    let text = read(path)?;
    let script = Script::from_json(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let run = script.run().map_err(|e| usage(e.to_string()))?;
    let st = &run.closed;
    let ids = st.edges().ids();
    let det = st.determinant();
    let det_unit = st.det_is_unit();
    let roles_ok = st.zeta_preserves_roles();
    let parity = st.check_parity();
    let ok = det_unit && roles_ok && parity.is_empty();
    let roles: Vec<Value> = ids
        .iter()
        .enumerate()
        .map(|(i, id)| json!({ "id": id, "initial": st.edges().role(i), "current": st.roles()[i] }))
        .collect();
    let zeta: BTreeMap<&str, &str> = ids
        .iter()
        .zip(st.zeta())
        .map(|(id, &z)| (id.as_str(), ids[z].as_str()))
        .collect();
    let matrix: Vec<Vec<String>> = st.matrix().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();

    let mut md = String::new();
    let _ = writeln!(md, "{} folds on {} edges", run.states.len() - 1, ids.len());
    let _ = writeln!(md, "\n| edge | initial | current | zeta |\n|---|---|---|---|");
    for (i, id) in ids.iter().enumerate() {
        let _ = writeln!(md, "| {id} | {} | {} | {} |", st.edges().role(i), st.roles()[i], ids[st.zeta()[i]]);
    }
    let _ = writeln!(md, "\ntransition matrix:");
    for row in &matrix {
        let _ = writeln!(md, "    {}", row.join(" "));
    }
    let _ = writeln!(md, "\n- determinant: {det} ({})", if det_unit { "unit" } else { "NOT A UNIT" });
    let _ = writeln!(md, "- zeta preserves roles: {}", if roles_ok { "yes" } else { "NO" });
    let _ = writeln!(md, "- parity violations: {}", parity.len());
    for v in &parity {
        let _ = writeln!(md, "  - ({}, {}): {}", v.row, v.col, v.reason);
    }
    Ok(Produced {
        command: "fold",
        inputs: text.into_bytes(),
        seed: None,
        ok,
        results: json!({
            "folds": run.states.len() - 1,
            "roles": roles,
            "zeta": zeta,
            "matrix": matrix,
            "determinant": det.to_string(),
            "det_is_unit": det_unit,
            "zeta_preserves_roles": roles_ok,
            "parity_violations": parity,
        }),
        markdown: md,
    })
}
