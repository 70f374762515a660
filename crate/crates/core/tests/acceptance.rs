//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the lines are always
//! printed; exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;

use twostring::compression::{
    assemble_controlled, commutator_check, controlled_blocks, local_tensor, pauli_sum,
    x_components, z_components, Thresholds, Verdict,
};
use twostring::diagram::random::{random_diagram, RandomDiagramConfig};
use twostring::diagram::relations::{check_relation, RELATION_IDS};
use twostring::diagram::{builtin, evaluate_dense, evaluate_symbolic, Builtin};
use twostring::protocol::io::{random_blocks, random_input};
use twostring::protocol::{run_mct_controlled, Mode};
use twostring::qudit::{fourier, gauss, ghz_state, max_state, pauli, Operator, Pauli, StateVector};
use twostring::random::{random_unitary, rng};
use twostring::scalar::{omega, phase_aligned_deviation, q_pow, zeta_pow, Tolerance};

const TOL: f64 = 1e-9;
const RELATIONS_BUDGET: Duration = Duration::from_secs(30);
const MCT_BUDGET: Duration = Duration::from_secs(300);

struct Outcome {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn relation_suite() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut failed = Vec::new();
    let mut checks = 0;
    for d in 2..=5 {
        for id in RELATION_IDS {
            match check_relation(id, d, Tolerance::default()) {
                Ok(r) => {
                    checks += r.checks;
                    worst = worst.max(r.max_dev_dense).max(r.max_dev_symbolic);
                    if !r.pass {
                        failed.push(format!("{id}@d={d}"));
                    }
                }
                Err(e) => failed.push(format!("{id}@d={d}: {e}")),
            }
        }
    }
    let took = start.elapsed();
    verdict(
        failed.is_empty() && worst <= TOL && took < RELATIONS_BUDGET,
        format!(
            "{} relations x d=2..5, {checks} checks, max dev {worst:.2e}, {:.2}s{}",
            RELATION_IDS.len(),
            took.as_secs_f64(),
            if failed.is_empty() { String::new() } else { format!(", failed {failed:?}") }
        ),
    )
}

fn dev(a: &Operator, b: &Operator) -> f64 {
    a.max_deviation(b).unwrap()
}

fn algebraic_identities() -> Outcome {
    let mut worst = 0.0f64;
    for d in 2..=8usize {
        let id = Operator::identity(d, 1);
        let x = pauli(d, Pauli::X).unwrap();
        let y = pauli(d, Pauli::Y).unwrap();
        let z = pauli(d, Pauli::Z).unwrap();
        let f = fourier(d).unwrap();
        let g = gauss(d).unwrap();
        let q = q_pow(d, 1);
        let mul = |a: &Operator, b: &Operator| a.compose(b).unwrap();
        for (op, e) in [(&x, d), (&y, d), (&z, d), (&f, 4), (&g, 2 * d)] {
            worst = worst.max(dev(&op.pow(e as u32).unwrap(), &id));
        }
        let fg = mul(&f, &g);
        worst = worst.max(dev(&fg.pow(3).unwrap(), &id.scale(omega(d).unwrap())));
        worst = worst.max(dev(&mul(&x, &y), &mul(&y, &x).scale(q)));
        worst = worst.max(dev(&mul(&y, &z), &mul(&z, &y).scale(q)));
        worst = worst.max(dev(&mul(&z, &x), &mul(&x, &z).scale(q)));
        worst = worst.max(dev(&mul(&mul(&x, &y), &z), &id.scale(zeta_pow(d, 1))));
        worst = worst.max(dev(&mul(&mul(&f, &x), &f.adjoint()), &z));
        worst = worst.max(dev(&mul(&mul(&g, &x), &g.adjoint()), &y.adjoint()));
    }
    verdict(worst <= TOL, format!("d=2..8, max dev {worst:.2e}"))
}

fn resource_identity() -> Outcome {
    let mut worst = 0.0f64;
    for d in 2..=4 {
        let f = fourier(d).unwrap();
        for n in 1..=4 {
            let mut s = max_state(d, n).unwrap();
            for q in 1..=n {
                s = s.apply_local(&f, &[q]).unwrap();
            }
            let ghz = ghz_state(d, n).unwrap();
            worst = worst.max(phase_aligned_deviation(s.amps(), ghz.amps()).unwrap());
        }
    }
    let mut omega_dev = 0.0f64;
    for d in 1..=16 {
        omega_dev = omega_dev.max((omega(d).unwrap().norm() - 1.0).abs());
    }
    verdict(
        worst <= TOL && omega_dev <= 1e-12,
        format!("F^n Max vs GHZ max dev {worst:.2e}; ||ω|-1| max {omega_dev:.2e} for d<=16"),
    )
}

fn state_op(s: &StateVector) -> Operator {
    Operator::from_columns(s.d(), s.n(), std::slice::from_ref(s)).unwrap()
}

fn dictionary() -> Outcome {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for d in 2..=3 {
        let mut pairs: Vec<(Builtin, Operator)> = vec![
            (Builtin::I, Operator::identity(d, 1)),
            (Builtin::X, pauli(d, Pauli::X).unwrap()),
            (Builtin::Y, pauli(d, Pauli::Y).unwrap()),
            (Builtin::Z, pauli(d, Pauli::Z).unwrap()),
            (Builtin::Bell, state_op(&max_state(d, 2).unwrap())),
        ];
        for n in 1..=4 {
            pairs.push((Builtin::Max(n), state_op(&max_state(d, n).unwrap())));
        }
        for (b, want) in pairs {
            let diag = builtin(&b, d).unwrap();
            for got in [evaluate_dense(&diag).unwrap(), evaluate_symbolic(&diag).unwrap()] {
                worst = worst.max(phase_aligned_deviation(got.data(), want.data()).unwrap());
                cases += 1;
            }
        }
    }
    verdict(worst <= TOL, format!("{cases} evaluations, max dev {worst:.2e}"))
}

/// Full index of `(digit at qudit j, rest)` in a big-endian register.
fn join(d: usize, n: usize, j: usize, digit: usize, rest: usize) -> usize {
    let low = d.pow((n - j) as u32);
    let hi = rest / low;
    let lo = rest % low;
    (hi * d + digit) * low + lo
}

/// Oracle for condition (3): project `T` onto `span{P_j^ℓ ⊗ A}` through
/// partial traces and report the residual.
fn pauli_span_residual(t: &Operator, j: usize, axis: Pauli) -> f64 {
    let (d, n) = (t.d(), t.n());
    let m = d.pow((n - 1) as u32);
    let p = pauli(d, axis).unwrap();
    let powers: Vec<Operator> = (0..d).map(|l| p.pow(l as u32).unwrap()).collect();
    let coeffs: Vec<Vec<Complex64>> = (0..d)
        .map(|l| {
            let inv = powers[l].adjoint();
            let mut c = vec![Complex64::new(0.0, 0.0); m * m];
            for a in 0..m {
                for b in 0..m {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for x in 0..d {
                        for y in 0..d {
                            acc += inv.get(x, y) * t.get(join(d, n, j, y, a), join(d, n, j, x, b));
                        }
                    }
                    c[a * m + b] = acc / d as f64;
                }
            }
            c
        })
        .collect();
    let mut worst = 0.0f64;
    for x in 0..d {
        for y in 0..d {
            for a in 0..m {
                for b in 0..m {
                    let r: Complex64 = (0..d).map(|l| powers[l].get(x, y) * coeffs[l][a * m + b]).sum();
                    let e = t.get(join(d, n, j, x, a), join(d, n, j, y, b));
                    worst = worst.max((r - e).norm());
                }
            }
        }
    }
    worst
}

/// Oracle for condition (1): largest entry coupling different values of
/// qudit `j`.
fn off_block_norm(t: &Operator, j: usize) -> f64 {
    let (d, n) = (t.d(), t.n());
    let w = d.pow((n - j) as u32);
    let mut worst = 0.0f64;
    for r in 0..t.rows() {
        for c in 0..t.cols() {
            if (r / w) % d != (c / w) % d {
                worst = worst.max(t.get(r, c).norm());
            }
        }
    }
    worst
}

/// Conditions of the Z-compression proposition, in order: block diagonal,
/// controlled form, Z-expansion, commutes with `Z_j`.
fn z_conditions(t: &Operator, j: usize) -> [bool; 4] {
    let scale = t.max_norm();
    let th = TOL * scale;
    let controlled = controlled_blocks(t, j)
        .ok()
        .map(|c| dev(&assemble_controlled(&c.blocks, j, t.n()).unwrap(), t) <= th)
        .unwrap_or(false);
    let expansion = z_components(t, j)
        .ok()
        .map(|c| dev(&pauli_sum(Pauli::Z, j, &c).unwrap(), t) <= th)
        .unwrap_or(false)
        && pauli_span_residual(t, j, Pauli::Z) <= th;
    let commutes = commutator_check(t, j, Pauli::Z, Thresholds::default()).unwrap().verdict
        == Verdict::Compressed;
    [off_block_norm(t, j) <= th, controlled, expansion, commutes]
}

/// Equivalent X-compression conditions: X-expansion (library and
/// oracle) and commutes with `X_j`.
fn x_conditions(t: &Operator, j: usize) -> [bool; 2] {
    let th = TOL * t.max_norm();
    let expansion = x_components(t, j)
        .ok()
        .map(|c| dev(&c.reassemble().unwrap(), t) <= th)
        .unwrap_or(false)
        && pauli_span_residual(t, j, Pauli::X) <= th;
    let commutes = commutator_check(t, j, Pauli::X, Thresholds::default()).unwrap().verdict
        == Verdict::Compressed;
    [expansion, commutes]
}

fn compression_equivalences() -> Outcome {
    let mut wrong = 0;
    let mut total = 0;
    for d in 2..=3usize {
        for n in 2..=3usize {
            let mut r = rng(1000 + 10 * d as u64 + n as u64);
            let fourier_on = |j: usize| {
                local_tensor(&fourier(d).unwrap(), j, &Operator::identity(d, n - 1)).unwrap()
            };
            for i in 0..100 {
                let j = 1 + i % n;
                let blocks: Vec<Operator> =
                    (0..d).map(|_| random_unitary(&mut r, d, n - 1)).collect();
                let pos = assemble_controlled(&blocks, j, n).unwrap();
                // negatives alternate between generic unitaries and operators
                // controlled on a different qudit
                let neg = if i % 2 == 0 {
                    random_unitary(&mut r, d, n)
                } else {
                    let other = 1 + (j % n);
                    let bs: Vec<Operator> =
                        (0..d).map(|_| random_unitary(&mut r, d, n - 1)).collect();
                    assemble_controlled(&bs, other, n).unwrap()
                };
                let f = fourier_on(j);
                let pos_x = f.adjoint().compose(&pos).unwrap().compose(&f).unwrap();
                let neg_x = f.adjoint().compose(&neg).unwrap().compose(&f).unwrap();
                for (t, want) in [(&pos, true), (&neg, false)] {
                    total += 1;
                    if z_conditions(t, j).iter().any(|&c| c != want) {
                        wrong += 1;
                    }
                }
                for (t, want) in [(&pos_x, true), (&neg_x, false)] {
                    total += 1;
                    if x_conditions(t, j).iter().any(|&c| c != want) {
                        wrong += 1;
                    }
                }
            }
        }
    }
    verdict(
        wrong == 0,
        format!("{total} instances (Z and X, positive and negative), {wrong} misclassified"),
    )
}

struct MctStats {
    runs: usize,
    branches: usize,
    worst_dev: f64,
    worst_prob: f64,
    mismatched: usize,
    cost_ok: bool,
    took: Duration,
}

fn mct_runs() -> MctStats {
    let start = Instant::now();
    let mut s = MctStats {
        runs: 0,
        branches: 0,
        worst_dev: 0.0,
        worst_prob: 0.0,
        mismatched: 0,
        cost_ok: true,
        took: Duration::ZERO,
    };
    for d in 2..=3usize {
        for n in 1..=3usize {
            let mut r = rng(7000 + 10 * d as u64 + n as u64);
            let uniform = 1.0 / d.pow(n as u32 + 1) as f64;
            for _ in 0..50 {
                let blocks = random_blocks(&mut r, d, n);
                let input = random_input(&mut r, d, n);
                let run = run_mct_controlled(d, &blocks, &input, &Mode::AllBranches).unwrap();
                s.runs += 1;
                if run.branches.len() != d.pow(n as u32 + 1) {
                    s.mismatched += 1;
                }
                for b in &run.branches {
                    s.branches += 1;
                    s.worst_dev = s.worst_dev.max(b.max_dev);
                    s.worst_prob = s.worst_prob.max((b.prob - uniform).abs());
                }
                let c = run.cost;
                s.cost_ok &= c.resource_states == 1
                    && c.resource_qudits == n + 1
                    && c.cdits == 2 * n
                    && c.baseline_bqst.resource_states == n
                    && c.baseline_bqst.channels == 2 * n;
            }
        }
    }
    s.took = start.elapsed();
    s
}

fn backend_cross_validation() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for d in 2..=3 {
        let mut r = rng(500 + d as u64);
        for _ in 0..200 {
            let diag = random_diagram(&mut r, d, RandomDiagramConfig::default());
            let a = evaluate_dense(&diag).unwrap();
            let b = evaluate_symbolic(&diag).unwrap();
            worst = worst.max(phase_aligned_deviation(a.data(), b.data()).unwrap());
            count += 1;
        }
    }
    verdict(worst <= TOL, format!("{count} random diagrams, max dev {worst:.2e}"))
}

fn main() -> ExitCode {
    let mct = mct_runs();
    let results = [
        ("relation suite", relation_suite()),
        ("algebraic identities", algebraic_identities()),
        ("resource-state identity", resource_identity()),
        ("diagram/algebra dictionary", dictionary()),
        ("compression equivalences", compression_equivalences()),
        (
            "MCT correctness",
            verdict(
                mct.mismatched == 0
                    && mct.worst_dev <= TOL
                    && mct.worst_prob <= TOL
                    && mct.took < MCT_BUDGET,
                format!(
                    "{} runs, {} branches, max dev {:.2e}, max |p - uniform| {:.2e}, {:.2}s",
                    mct.runs,
                    mct.branches,
                    mct.worst_dev,
                    mct.worst_prob,
                    mct.took.as_secs_f64()
                ),
            ),
        ),
        (
            "protocol cost",
            verdict(
                mct.cost_ok && mct.runs > 0,
                format!("{} runs: 1 state of n+1 qudits, 2n cdits; baseline n states, 2n channels", mct.runs),
            ),
        ),
        ("backend cross-validation", backend_cross_validation()),
    ];
    let mut all = true;
    for (i, (name, v)) in results.iter().enumerate() {
        all &= v.pass;
        println!(
            "{} [{}] {name}: {}",
            if v.pass { "PASS" } else { "FAIL" },
            i + 1,
            v.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
