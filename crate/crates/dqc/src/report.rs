//! Reports behind the `synth`, `verify`, `bound` and `table` commands.

use std::fmt::Write as _;
use std::time::Instant;

use dqc_core::binom::ceil_log2;
use dqc_core::bounds::{cc_lower_bound, state_tensor, support_rank_exact, BoundKind, BoundOptions};
use dqc_core::builder::{build, expected_communication, verify, Build, DickeSpec, Engine};
use dqc_core::circuit::Circuit;
use dqc_core::partition::{balanced_partition, communication_complexity, validate_locality};
use dqc_core::sim::{dicke_state, MAX_DENSE_QUBITS};
use dqc_core::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;

/// Version tag carried by every JSON report.
pub const SCHEMA: u32 = 1;

/// Largest `n` whose state tensor is materialized for bounds.
pub const BOUND_MAX_N: usize = 20;

/// Largest two-way split that also gets an exact-arithmetic rank check.
pub const EXACT_RANK_MAX_N: usize = 12;

/// Validates `(n, k, p)`. Blocks of unequal size are only accepted with
/// `allow_uneven`.
pub fn checked_spec(n: usize, k: usize, p: usize, allow_uneven: bool) -> Result<DickeSpec> {
    if p == 0 {
        return Err(Error::Infeasible("p must be at least 1".into()));
    }
    if p > n {
        return Err(Error::Infeasible(format!("p = {p} QPUs but only n = {n} data qubits")));
    }
    let spec = DickeSpec::new(n, k, p)?;
    if !allow_uneven && !spec.is_even_split() {
        return Err(Error::Infeasible(format!("n = {n} is not divisible by p = {p} (pass --uneven to allow unequal blocks)")));
    }
    Ok(spec)
}

fn construction(spec: &DickeSpec) -> &'static str {
    match spec.p {
        1 => "local",
        2 => "two-qpu",
        _ => "chain",
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Metrics {
    /// Gates excluding cross-QPU two-qubit gates.
    pub size: usize,
    pub total_gates: usize,
    pub depth: usize,
    pub comm_count: usize,
    pub qubits: usize,
    pub qubits_per_qpu: usize,
    pub ancillas_per_qpu: usize,
}

pub struct Synthesis {
    pub build: Build,
    pub decomposed: Circuit,
    pub metrics: Metrics,
}

pub fn synthesize(spec: &DickeSpec) -> Result<Synthesis> {
    let built = build(spec)?;
    let decomposed = built.circuit.decompose();
    let metrics = Metrics {
        size: decomposed.size(Some(&built.partition))?,
        total_gates: decomposed.size(None)?,
        depth: decomposed.depth()?,
        comm_count: communication_complexity(&decomposed, &built.partition)?,
        qubits: decomposed.n_qubits(),
        qubits_per_qpu: built.qubits_per_qpu(),
        ancillas_per_qpu: built.ancillas_per_qpu,
    };
    Ok(Synthesis { build: built, decomposed, metrics })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QpuPeak {
    pub qpu: usize,
    pub peak: usize,
    pub budget: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub n: usize,
    pub k: usize,
    pub p: usize,
    pub construction: &'static str,
    #[serde(flatten)]
    pub metrics: Metrics,
    pub comm_expected: usize,
    pub comm_lower_bound: Option<usize>,
    pub fidelity: f64,
    pub ancilla_leakage: f64,
    pub passed: bool,
    pub engine: &'static str,
    /// Largest data block plus two ancillas.
    pub locality_budget: usize,
    pub locality_pass: bool,
    pub per_qpu_peak: Vec<QpuPeak>,
    pub balanced_strict: bool,
    pub balanced_literal: bool,
    pub wall_time_ms: f64,
}

/// Builds, simulates and measures `spec`.
///
/// Refuses registers wider than the dense simulator's limit.
pub fn run_report(spec: &DickeSpec, bound: BoundOptions) -> Result<RunReport> {
    let start = Instant::now();
    let synth = synthesize(spec)?;
    if synth.metrics.qubits > MAX_DENSE_QUBITS {
        return Err(Error::TooLarge { qubits: synth.metrics.qubits, limit: MAX_DENSE_QUBITS });
    }
    let check = verify(&synth.build)?;
    let comm_lower_bound = if spec.p >= 2 && spec.n <= BOUND_MAX_N {
        Some(cc_lower_bound(&dicke_state(spec.n, spec.k)?, spec.p, bound)?.bound)
    } else {
        None
    };
    let budget = spec.block_sizes().into_iter().max().unwrap_or(0) + 2;
    let locality = validate_locality(&synth.decomposed, &synth.build.partition, budget);
    let balance = synth.build.partition.balance();
    Ok(RunReport {
        schema: SCHEMA,
        n: spec.n,
        k: spec.k,
        p: spec.p,
        construction: construction(spec),
        comm_expected: expected_communication(spec, spec.p >= 3),
        metrics: synth.metrics,
        comm_lower_bound,
        fidelity: check.fidelity,
        ancilla_leakage: check.leakage,
        passed: check.passed(),
        engine: match check.engine {
            Engine::Dense => "dense",
            Engine::Sparse => "sparse",
        },
        locality_budget: budget,
        locality_pass: locality.passed(),
        per_qpu_peak: locality.per_qpu.iter().map(|u| QpuPeak { qpu: u.qpu, peak: u.peak, budget: u.budget }).collect(),
        balanced_strict: balance.strict,
        balanced_literal: balance.literal,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundRow {
    pub schema: u32,
    pub n: usize,
    pub k: usize,
    pub p: usize,
    pub rank: usize,
    pub bound: usize,
    /// Communication count of the construction used for this spec.
    pub comm_upper: usize,
    pub tight: bool,
    pub kind: &'static str,
    pub partitions_examined: usize,
    /// Exact rank of the two-way support pattern, for small `n`.
    pub exact_rank: Option<usize>,
}

/// Lower bound for `D(n, k)` on `p` QPUs next to the construction's count.
pub fn bound_row(spec: &DickeSpec, options: BoundOptions) -> Result<BoundRow> {
    if spec.n > BOUND_MAX_N {
        return Err(Error::TooLarge { qubits: spec.n, limit: BOUND_MAX_N });
    }
    let state = dicke_state(spec.n, spec.k)?;
    let lb = cc_lower_bound(&state, spec.p, options)?;
    let exact_rank = if spec.p == 2 && spec.n <= EXACT_RANK_MAX_N {
        Some(support_rank_exact(&state_tensor(&state, &balanced_partition(spec.n, 2, 0)?)?)?)
    } else {
        None
    };
    let comm_upper = synthesize(spec)?.metrics.comm_count;
    Ok(BoundRow {
        schema: SCHEMA,
        n: spec.n,
        k: spec.k,
        p: spec.p,
        rank: lb.rank,
        bound: lb.bound,
        comm_upper,
        tight: lb.bound == comm_upper,
        kind: match lb.kind {
            BoundKind::MatrixRank => "matrix rank",
            BoundKind::Flattening => "flattening bound only",
        },
        partitions_examined: lb.partitions,
        exact_rank,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub n: usize,
    pub k: usize,
    pub p: usize,
    /// `ok`, `infeasible` or `refused`.
    pub status: &'static str,
    #[serde(flatten)]
    pub metrics: Option<Metrics>,
    /// `ceil(log2(k + 1))`, doubled per link for chains.
    pub comm_formula: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

pub fn parse_grid(text: &str) -> std::result::Result<Vec<(usize, usize, usize)>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|cell| !cell.is_empty())
        .map(|cell| {
            let parts: Vec<&str> = cell.split(':').collect();
            match parts[..] {
                [n, k, p] => Ok((
                    n.parse().map_err(|_| format!("bad n in `{cell}`"))?,
                    k.parse().map_err(|_| format!("bad k in `{cell}`"))?,
                    p.parse().map_err(|_| format!("bad p in `{cell}`"))?,
                )),
                _ => Err(format!("grid cell `{cell}` is not n:k:p")),
            }
        })
        .collect()
}

fn table_row(n: usize, k: usize, p: usize, allow_uneven: bool) -> TableRow {
    let outcome = checked_spec(n, k, p, allow_uneven).and_then(|s| Ok((s, synthesize(&s)?.metrics)));
    match outcome {
        Ok((spec, metrics)) => TableRow {
            n,
            k,
            p,
            status: "ok",
            metrics: Some(metrics),
            comm_formula: Some(expected_communication(&spec, p >= 3)),
            message: None,
        },
        Err(e) => TableRow {
            n,
            k,
            p,
            status: if matches!(e, Error::TooLarge { .. }) { "refused" } else { "infeasible" },
            metrics: None,
            comm_formula: None,
            message: Some(e.to_string()),
        },
    }
}

/// Evaluates the grid cells in parallel; rows keep grid order.
pub fn table(grid: &[(usize, usize, usize)], allow_uneven: bool) -> Vec<TableRow> {
    grid.par_iter().map(|&(n, k, p)| table_row(n, k, p, allow_uneven)).collect()
}

pub fn table_markdown(rows: &[TableRow]) -> String {
    let mut out = String::from(
        "| n | k | p | size | depth | qubits/QPU | comm | ceil(log2(k+1)) |\n|---|---|---|---|---|---|---|---|\n",
    );
    for r in rows {
        let _ = match &r.metrics {
            Some(m) => writeln!(
                out,
                "| {} | {} | {} | {} | {} | {} | {} | {} |",
                r.n,
                r.k,
                r.p,
                m.size,
                m.depth,
                m.qubits_per_qpu,
                m.comm_count,
                ceil_log2(r.k as u64 + 1)
            ),
            None => writeln!(out, "| {} | {} | {} | {} | | | | |", r.n, r.k, r.p, r.status),
        };
    }
    out
}

pub fn table_json(rows: &[TableRow]) -> String {
    #[derive(Serialize)]
    struct Doc<'a> {
        schema: u32,
        rows: &'a [TableRow],
    }
    serde_json::to_string_pretty(&Doc { schema: SCHEMA, rows }).expect("table rows always serialize")
}
