//! Acceptance checks, one PASS/FAIL line each.

use std::process::ExitCode;
use std::time::Instant;

use dqc_core::binom::{binomial, bit_width, ceil_log2};
use dqc_core::blocks::{binary_to_onehot, dicke_unitary, map_to_k_minus_j, onehot_position_of_bit, onehot_to_unary, ripple_add, Register};
use dqc_core::bounds::{cc_lower_bound, matrix_rank, state_tensor, support_rank_exact, BoundOptions};
use dqc_core::builder::{build_2qpu, build_pqpu, data_state, Build};
use dqc_core::partition::{balanced_partition, communication_complexity, validate_locality};
use dqc_core::sim::{dicke_state, fidelity, run, run_sparse, SparseState};
use dqc_core::{Circuit, DickeSpec, StateVector};

type Outcome = Result<String, String>;
type Check = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Every even `n` in `2..=12` with every `0 <= k <= n`.
fn two_qpu_grid() -> impl Iterator<Item = (usize, usize)> {
    (2..=12).step_by(2).flat_map(|n| (0..=n).map(move |k| (n, k)))
}

fn built_2qpu(n: usize, k: usize) -> Result<(Build, Circuit), String> {
    let b = build_2qpu(&DickeSpec::new(n, k, 2).map_err(err)?).map_err(err)?;
    let d = b.circuit.decompose();
    Ok((b, d))
}

/// Output basis index of a circuit that permutes basis states.
fn basis_map(circuit: &Circuit, input: u64) -> Result<u64, String> {
    let out = run_sparse(circuit, Some(&SparseState::basis(circuit.n_qubits(), input).map_err(err)?)).map_err(err)?;
    let hits: Vec<u64> = out.iter().filter(|(_, a)| a.norm_sqr() > 1e-9).map(|(x, _)| x).collect();
    match hits[..] {
        [x] => Ok(x),
        _ => Err(format!("input {input:#b} spread over {} basis states", hits.len())),
    }
}

fn pack(reg: &[usize], value: u64) -> u64 {
    reg.iter().enumerate().fold(0, |acc, (i, &q)| acc | (value >> i & 1) << q)
}

fn unpack(x: u64, reg: &[usize]) -> u64 {
    reg.iter().enumerate().fold(0, |acc, (i, &q)| acc | (x >> q & 1) << i)
}

fn correctness_2qpu() -> Outcome {
    let mut worst_fid = 1.0f64;
    let mut worst_leak = 0.0f64;
    let mut cases = 0;
    for (n, k) in two_qpu_grid() {
        let (b, _) = built_2qpu(n, k)?;
        let v = dqc_core::verify(&b).map_err(err)?;
        let oracle = fidelity(&data_state(&b).map_err(err)?, &dicke_state(n, k).map_err(err)?, None).map_err(err)?;
        ensure!(v.fidelity >= 1.0 - 1e-9, "({n},{k}) fidelity {}", v.fidelity);
        ensure!(oracle >= 1.0 - 1e-9, "({n},{k}) data-state fidelity {oracle}");
        ensure!(v.leakage <= 1e-12, "({n},{k}) leakage {:e}", v.leakage);
        worst_fid = worst_fid.min(v.fidelity).min(oracle);
        worst_leak = worst_leak.max(v.leakage);
        cases += 1;
    }
    Ok(format!("{cases} cases, min fidelity {worst_fid:.12}, max leakage {worst_leak:.1e}"))
}

fn exact_comm_2qpu() -> Outcome {
    let mut cases = 0;
    for (n, k) in two_qpu_grid() {
        let (b, d) = built_2qpu(n, k)?;
        let comm = communication_complexity(&d, &b.partition).map_err(err)?;
        // Weights above n/2 are prepared as D(n, n - k) followed by X on every data qubit.
        let weight = k.min(n - k);
        ensure!(comm == ceil_log2(weight as u64 + 1), "({n},{k}) comm {comm}");
        ensure!(comm <= ceil_log2(k as u64 + 1), "({n},{k}) comm {comm} above ceil(log2(k+1))");
        cases += 1;
    }
    Ok(format!("{cases} cases, comm = ceil(log2(min(k, n-k) + 1))"))
}

fn tightness() -> Outcome {
    let mut cases = 0;
    for (n, k) in two_qpu_grid().filter(|&(n, k)| k <= n / 2) {
        let state = dicke_state(n, k).map_err(err)?;
        let lb = cc_lower_bound(&state, 2, BoundOptions { samples: 3, seed: n as u64 * 31 + k as u64 }).map_err(err)?;
        let (b, d) = built_2qpu(n, k)?;
        let comm = communication_complexity(&d, &b.partition).map_err(err)?;
        let want = ceil_log2(k as u64 + 1);
        ensure!(lb.bound == want && comm == want, "({n},{k}) bound {} comm {comm} want {want}", lb.bound);
        ensure!(lb.rank == k + 1, "({n},{k}) min sampled rank {}", lb.rank);
        let tensor = state_tensor(&state, &balanced_partition(n, 2, 0).map_err(err)?).map_err(err)?;
        ensure!(matrix_rank(&tensor).map_err(err)? == k + 1, "({n},{k}) numerical rank");
        ensure!(support_rank_exact(&tensor).map_err(err)? == k + 1, "({n},{k}) exact rank");
        cases += 1;
    }
    Ok(format!("{cases} cases, bound = comm = ceil(log2(k+1)), exact rank k+1"))
}

fn chain_correctness() -> Outcome {
    let mut cases = 0;
    let mut worst = 1.0f64;
    for p in 2..=4usize {
        for m in 2..=4usize {
            let n = p * m;
            for k in 0..=n {
                let b = build_pqpu(&DickeSpec::new(n, k, p).map_err(err)?).map_err(err)?;
                let d = b.circuit.decompose();
                let v = dqc_core::verify(&b).map_err(err)?;
                ensure!(v.fidelity >= 1.0 - 1e-9, "({n},{k},{p}) fidelity {}", v.fidelity);
                ensure!(v.leakage <= 1e-12, "({n},{k},{p}) leakage {:e}", v.leakage);
                let comm = communication_complexity(&d, &b.partition).map_err(err)?;
                let want = 2 * (p - 1) * ceil_log2(k as u64 + 1);
                ensure!(comm == want, "({n},{k},{p}) comm {comm} want {want}");
                worst = worst.min(v.fidelity);
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} cases, min fidelity {worst:.12}, comm = 2(p-1)ceil(log2(k+1))"))
}

fn dicke_unitary_contract() -> Outcome {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for n in 1..=10usize {
        let reg: Vec<usize> = (0..n).collect();
        for k in 0..=n {
            let u = dicke_unitary(n, k, &reg).map_err(err)?;
            for j in 0..=k {
                let input = StateVector::basis(n, (1 << j) - 1).map_err(err)?;
                let diff = run(&u, Some(&input)).map_err(err)?.max_abs_diff(&dicke_state(n, j).map_err(err)?);
                ensure!(diff <= 1e-9, "U({n},{k}) on weight {j}: {diff:e}");
                worst = worst.max(diff);
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} (n,k,j) triples, max deviation {worst:.1e}"))
}

fn encoding_and_locality() -> Outcome {
    for k in 0..=15usize {
        let m = bit_width(k as u64);
        let onehot: Vec<usize> = (0..=k).collect();
        let bits: Vec<usize> = (0..m).map(|l| if l + 1 < m { onehot_position_of_bit(l) } else { k + 1 }).collect();
        let bin = Register::binary(bits.clone()).map_err(err)?;
        let oh = Register::one_hot(onehot).map_err(err)?;
        let mut circ = binary_to_onehot(k, &bin, &oh).map_err(err)?;
        let tail = onehot_to_unary(k, &oh).map_err(err)?;
        circ.widen(tail.n_qubits());
        circ.extend(&tail).map_err(err)?;
        let circ = circ.decompose();
        for j in 0..=k as u64 {
            let out = basis_map(&circ, pack(&bits, j))?;
            ensure!(out == ((1u64 << j) - 1) << 1, "k={k} j={j}: output {out:#b}");
        }
    }
    let mut cases = 0;
    for (n, k) in two_qpu_grid() {
        let (b, d) = built_2qpu(n, k)?;
        ensure!(b.ancillas_per_qpu == 2, "({n},{k}) uses {} ancillas per QPU", b.ancillas_per_qpu);
        let report = validate_locality(&d, &b.partition, n / 2 + 2);
        ensure!(report.passed(), "({n},{k}) locality {:?}", report.failures().collect::<Vec<_>>());
        cases += 1;
    }
    Ok(format!("round trip for k <= 15, locality at n/2+2 on {cases} builds"))
}

fn weight_marginals() -> Outcome {
    let mut worst = 0.0f64;
    for (n, k) in two_qpu_grid() {
        let (b, _) = built_2qpu(n, k)?;
        let v = dqc_core::verify(&b).map_err(err)?;
        let h = n / 2;
        let total = binomial(n as u32, k as u32) as f64;
        let l1: f64 = (0..=h)
            .map(|j| {
                let want = if j <= k && k - j <= h {
                    (binomial(h as u32, j as u32) * binomial(h as u32, (k - j) as u32)) as f64 / total
                } else {
                    0.0
                };
                (v.block_marginals[0].get(j).copied().unwrap_or(0.0) - want).abs()
            })
            .sum();
        ensure!(l1 <= 1e-9, "({n},{k}) marginal l1 {l1:e}");
        worst = worst.max(l1);
    }
    Ok(format!("max l1 {worst:.1e}"))
}

fn size_scaling() -> Outcome {
    let (_, base) = built_2qpu(4, 1)?;
    let c = base.size(None).map_err(err)? as f64 / 4.0;
    let mut sizes = std::collections::BTreeMap::new();
    let mut worst = 0.0f64;
    for (n, k) in two_qpu_grid() {
        let (_, d) = built_2qpu(n, k)?;
        let size = d.size(None).map_err(err)?;
        let cap = 8.0 * c * (n * k) as f64;
        ensure!(size as f64 <= cap, "({n},{k}) size {size} above {cap}");
        if n * k > 0 {
            worst = worst.max(size as f64 / (c * (n * k) as f64));
        }
        sizes.insert((k, n), size);
    }
    for (&(k, n), &size) in &sizes {
        if let Some(&next) = sizes.get(&(k, n + 2)) {
            ensure!(next >= size, "size drops from {size} at n={n} to {next} at n={} (k={k})", n + 2);
        }
    }
    Ok(format!("C = {c}, max size/(C n k) = {worst:.2}, monotone in n"))
}

fn arithmetic() -> Outcome {
    for m in 1..=4usize {
        let a: Vec<usize> = (0..m).collect();
        let b: Vec<usize> = (m..2 * m).collect();
        let z = 2 * m;
        let add = ripple_add(&a, &b, Some(z)).map_err(err)?.decompose();
        for x in 0..1u64 << m {
            for y in 0..1u64 << m {
                for carry in 0..2u64 {
                    let out = basis_map(&add, pack(&a, x) | pack(&b, y) | carry << z)?;
                    let sum = x + y;
                    ensure!(unpack(out, &a) == x, "m={m} {x}+{y}: a changed");
                    ensure!(unpack(out, &b) == sum % (1 << m), "m={m} {x}+{y}: sum {}", unpack(out, &b));
                    ensure!(out >> z & 1 == carry ^ (sum >> m), "m={m} {x}+{y}: carry");
                }
            }
        }
    }
    for k in 0..=15u64 {
        let m = bit_width(k).max(1);
        let reg: Vec<usize> = (0..m).collect();
        let scratch: Vec<usize> = (m..2 * m).collect();
        let circ = map_to_k_minus_j(&reg, k, &scratch).map_err(err)?.decompose();
        for j in 0..=k {
            let out = basis_map(&circ, pack(&reg, j))?;
            ensure!(out == pack(&reg, k - j), "k={k} j={j}: output {out:#b}");
        }
    }
    Ok("adder exhaustive for m <= 4, k - j exhaustive for k <= 15".into())
}

fn main() -> ExitCode {
    let criteria: [Check; 9] = [
        ("2-QPU fidelity and ancilla leakage, n <= 12", correctness_2qpu),
        ("2-QPU communication count", exact_comm_2qpu),
        ("lower bound meets the construction", tightness),
        ("p-QPU chain fidelity and communication", chain_correctness),
        ("Dicke unitary on every weight j <= k, n <= 10", dicke_unitary_contract),
        ("encoding pipeline and 2-ancilla locality", encoding_and_locality),
        ("weight marginals of QPU0", weight_marginals),
        ("size scaling", size_scaling),
        ("arithmetic blocks", arithmetic),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
