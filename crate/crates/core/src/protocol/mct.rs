use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use super::{BranchResult, CostReport, Mode, Network, Participant, ProtocolRun, Transcript};
use crate::compression::{assemble_controlled, commutator_check, Thresholds, Verdict};
use crate::error::{Error, Result};
use crate::qudit::{controlled_adder, fourier, pauli, Operator, Pauli, StateVector};
use crate::scalar::{phase_aligned_deviation, DEFAULT_EPS};

/// Exponent signs of the two classically controlled corrections in the
/// controlled variant: the parties apply `X^(broadcast·ℓ0)` to their
/// resource qudit and the leader applies `Z^(returned·Σℓj)` to its data.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorrectionSigns {
    pub broadcast: i64,
    pub returned: i64,
}

pub const CONTROLLED_SIGNS: CorrectionSigns = CorrectionSigns {
    broadcast: 1,
    returned: 1,
};

/// The X-compressed leader either undoes its controlled shift before
/// measuring and corrects with the full outcome sum (`Full`), or skips both
/// (`Simplified`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XVariant {
    Full,
    Simplified,
}

pub const MATCH_TOL: f64 = DEFAULT_EPS;
const ZERO_PROB: f64 = 1e-14;

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        Err(Error::InvalidDimension(d))
    } else {
        Ok(())
    }
}

fn check_unitary(op: &Operator) -> Result<()> {
    let dev = op.unitarity_deviation()?;
    if dev > MATCH_TOL {
        return Err(Error::NonUnitary(dev));
    }
    Ok(())
}

/// Validates per-party block lists and returns each party's data size.
fn block_sizes(d: usize, blocks: &[Vec<Operator>]) -> Result<Vec<usize>> {
    check_dim(d)?;
    if blocks.is_empty() {
        return Err(Error::Malformed("at least one party is required".into()));
    }
    blocks
        .iter()
        .map(|bs| {
            if bs.len() != d {
                return Err(Error::shape(format!("{d} blocks"), bs.len()));
            }
            let m = bs[0].n();
            for b in bs {
                if b.d() != d || !b.is_square() || b.n() != m || m == 0 {
                    return Err(Error::shape(
                        format!("square block on {} qudits", m.max(1)),
                        format!("{}<-{} qudits", b.n_out(), b.n_in()),
                    ));
                }
                check_unitary(b)?;
            }
            Ok(m)
        })
        .collect()
}

fn component_sizes(d: usize, comps: &[Operator]) -> Result<Vec<usize>> {
    check_dim(d)?;
    if comps.is_empty() {
        return Err(Error::Malformed("at least one party is required".into()));
    }
    comps
        .iter()
        .map(|t| {
            if t.d() != d || !t.is_square() || t.n() < 2 {
                return Err(Error::shape(
                    "square operator on control leg plus data",
                    format!("{}<-{} qudits", t.n_out(), t.n_in()),
                ));
            }
            check_unitary(t)?;
            let c = commutator_check(t, 1, Pauli::X, Thresholds::default())?;
            if c.verdict != Verdict::Compressed {
                return Err(Error::NotXCompressed {
                    qudit: 1,
                    norm: c.norm,
                });
            }
            Ok(t.n() - 1)
        })
        .collect()
}

fn check_input(d: usize, net: &Network, input: &StateVector) -> Result<()> {
    if input.d() != d || input.n() != net.data_qudits() {
        return Err(Error::shape(
            format!("input on {} qudits of dimension {d}", net.data_qudits()),
            format!("{} qudits of dimension {}", input.n(), input.d()),
        ));
    }
    Ok(())
}

/// `Σ_ℓ (⊗_j T_j(ℓ)) ⊗ |ℓ⟩⟨ℓ|` on `[P1…, Pn…, L]`.
pub fn target_unitary(d: usize, blocks: &[Vec<Operator>]) -> Result<Operator> {
    let sizes = block_sizes(d, blocks)?;
    let total = sizes.iter().sum::<usize>() + 1;
    let joint: Vec<Operator> = (0..d)
        .map(|l| {
            blocks[1..]
                .iter()
                .try_fold(blocks[0][l].clone(), |acc, bs| acc.tensor(&bs[l]))
        })
        .collect::<Result<_>>()?;
    assemble_controlled(&joint, total, total)
}

fn controlled_target_state(
    net: &Network,
    blocks: &[Vec<Operator>],
    input: &StateVector,
) -> Result<StateVector> {
    let d = input.d();
    let mut out = StateVector::zeros(d, input.n());
    for l in 0..d {
        let mut s = input.project(net.leader_data(), l)?;
        for (j, bs) in blocks.iter().enumerate() {
            s = s.apply_local(&bs[l], &net.party_qudits(j + 1))?;
        }
        for (o, a) in out.amps_mut().iter_mut().zip(s.amps()) {
            *o += a;
        }
    }
    Ok(out)
}

fn xcompressed_target_state(
    net: &Network,
    comps: &[Operator],
    input: &StateVector,
) -> Result<StateVector> {
    let mut s = input.clone();
    for (j, t) in comps.iter().enumerate() {
        let mut qudits = vec![net.leader_data()];
        qudits.extend(net.party_qudits(j + 1));
        s = s.apply_local(t, &qudits)?;
    }
    Ok(s)
}

/// Product of the X-compressed factors, each acting on the leader's qudit
/// (its control leg) and one party's data, on `[P1…, Pn…, L]`.
pub fn target_unitary_x(d: usize, comps: &[Operator]) -> Result<Operator> {
    let sizes = component_sizes(d, comps)?;
    let net = Network::new(&sizes)?;
    let total = net.data_qudits();
    let cols = (0..d.pow(total as u32))
        .map(|c| {
            let mut e = StateVector::zeros(d, total);
            e.amps_mut()[c] = Complex64::new(1.0, 0.0);
            xcompressed_target_state(&net, comps, &e)
        })
        .collect::<Result<Vec<_>>>()?;
    Operator::from_columns(d, total, &cols)
}

/// `‖(⟨ℓ|_c ⊗ X^ℓ_t) CX⁻¹ − ⟨ℓ|_c ⊗ I_t‖_max` maximised over `ℓ`.
pub fn trick_identity_deviation(d: usize) -> Result<f64> {
    check_dim(d)?;
    let x = pauli(d, Pauli::X)?;
    let cx_inv = controlled_shift(d)?.adjoint();
    let mut worst = 0.0f64;
    for l in 0..d {
        let xl = x.pow(l as u32)?;
        let corrected = Operator::from_fn(d, 1, 2, |r, c| {
            if c / d == l {
                xl.get(r, c % d)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let bare = Operator::from_fn(d, 1, 2, |r, c| {
            if c / d == l && r == c % d {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        worst = worst.max(corrected.compose(&cx_inv)?.max_deviation(&bare)?);
    }
    Ok(worst)
}

fn controlled_shift(d: usize) -> Result<Operator> {
    let x = pauli(d, Pauli::X)?;
    let blocks = (0..d).map(|l| x.pow(l as u32)).collect::<Result<Vec<_>>>()?;
    assemble_controlled(&blocks, 1, 2)
}

fn pow_mod(op: &Operator, e: i64) -> Result<Operator> {
    op.pow(e.rem_euclid(op.d() as i64) as u32)
}

/// How measurement outcomes are chosen along one branch.
enum Chooser<'a> {
    Fixed(&'a [usize]),
    Sample(&'a mut crate::random::SeededRng),
}

struct Sim<'a> {
    net: &'a Network,
    state: StateVector,
    outcomes: Vec<usize>,
    transcript: Transcript,
    chooser: Chooser<'a>,
}

impl Sim<'_> {
    fn apply(&mut self, op: &Operator, qudits: &[usize]) -> Result<()> {
        self.state = self.state.apply_local(op, qudits)?;
        Ok(())
    }

    fn measure(&mut self, qudit: usize) -> Result<usize> {
        let d = self.state.d();
        let k = match &mut self.chooser {
            Chooser::Fixed(v) => v[self.outcomes.len()],
            Chooser::Sample(rng) => {
                let w: Vec<f64> = (0..d)
                    .map(|k| self.state.project(qudit, k).map(|p| p.norm().powi(2)))
                    .collect::<Result<_>>()?;
                let mut u = rng.random::<f64>() * w.iter().sum::<f64>();
                let mut pick = d - 1;
                for (k, wk) in w.iter().enumerate() {
                    if u < *wk {
                        pick = k;
                        break;
                    }
                    u -= wk;
                }
                pick
            }
        };
        self.state = self.state.project(qudit, k)?;
        self.outcomes.push(k);
        Ok(k)
    }

    fn broadcast(&mut self, value: usize) {
        let parties = (1..=self.net.n).map(Participant::Party).collect();
        self.transcript.send(Participant::Leader, parties, value);
    }

    fn report(&mut self, j: usize, value: usize) {
        self.transcript
            .send(Participant::Party(j), vec![Participant::Leader], value);
    }
}

fn initial_state(net: &Network, input: &StateVector, max_form: bool) -> Result<StateVector> {
    let d = input.d();
    let mut s = input.tensor(&StateVector::basis(d, &vec![0; net.n + 1])?)?;
    let f = fourier(d)?;
    let r0 = net.resource(0);
    s = s.apply_local(&f, &[r0])?;
    let add = controlled_adder(d)?;
    for j in 1..=net.n {
        s = s.apply_local(&add, &[r0, net.resource(j)])?;
    }
    if max_form {
        let finv = f.adjoint();
        for j in 0..=net.n {
            s = s.apply_local(&finv, &[net.resource(j)])?;
        }
    }
    Ok(s)
}

struct Gates {
    finv: Operator,
    x: Operator,
    z: Operator,
    cz: Operator,
    cx: Operator,
}

impl Gates {
    fn new(d: usize) -> Result<Self> {
        let z = pauli(d, Pauli::Z)?;
        let zs = (0..d).map(|l| z.pow(l as u32)).collect::<Result<Vec<_>>>()?;
        Ok(Gates {
            finv: fourier(d)?.adjoint(),
            x: pauli(d, Pauli::X)?,
            cz: assemble_controlled(&zs, 1, 2)?,
            z,
            cx: controlled_shift(d)?,
        })
    }
}

/// Stage at which a branch simulation stops.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Stop {
    End,
    BeforeLeaderCorrection,
}

fn controlled_branch(
    sim: &mut Sim,
    g: &Gates,
    ctrl: &[Operator],
    signs: CorrectionSigns,
    stop: Stop,
) -> Result<()> {
    let net = sim.net;
    let (r0, lead) = (net.resource(0), net.leader_data());
    sim.apply(&g.finv, &[r0])?;
    sim.apply(&g.cz, &[r0, lead])?;
    sim.apply(&g.finv, &[r0])?;
    let l0 = sim.measure(r0)?;
    sim.broadcast(l0);
    let mut sum = 0i64;
    for (j, c) in ctrl.iter().enumerate() {
        let rj = net.resource(j + 1);
        sim.apply(&pow_mod(&g.x, signs.broadcast * l0 as i64)?, &[rj])?;
        let mut qs = vec![rj];
        qs.extend(net.party_qudits(j + 1));
        sim.apply(c, &qs)?;
        sim.apply(&g.finv, &[rj])?;
        let lj = sim.measure(rj)?;
        sim.report(j + 1, lj);
        sum += lj as i64;
    }
    if stop == Stop::End {
        sim.apply(&pow_mod(&g.z, signs.returned * sum)?, &[lead])?;
    }
    Ok(())
}

fn xcompressed_branch(
    sim: &mut Sim,
    g: &Gates,
    comps: &[Operator],
    variant: XVariant,
    stop: Stop,
) -> Result<()> {
    let net = sim.net;
    let (r0, lead) = (net.resource(0), net.leader_data());
    sim.apply(&g.cx, &[r0, lead])?;
    sim.apply(&g.finv, &[r0])?;
    if variant == XVariant::Full {
        sim.apply(&g.cx.adjoint(), &[r0, lead])?;
    }
    let l0 = sim.measure(r0)?;
    sim.broadcast(l0);
    let mut sum = if variant == XVariant::Full { l0 as i64 } else { 0 };
    for (j, t) in comps.iter().enumerate() {
        let rj = net.resource(j + 1);
        sim.apply(&pow_mod(&g.z, -(l0 as i64))?, &[rj])?;
        let mut qs = vec![rj];
        qs.extend(net.party_qudits(j + 1));
        sim.apply(t, &qs)?;
        let lj = sim.measure(rj)?;
        sim.report(j + 1, lj);
        sum += lj as i64;
    }
    if stop == Stop::End {
        sim.apply(&pow_mod(&g.x, sum)?, &[lead])?;
    }
    Ok(())
}

type BranchFn<'a> = dyn Fn(&mut Sim) -> Result<()> + Sync + 'a;

fn finish_branch(
    sim: Sim,
    target: &StateVector,
) -> Result<Option<BranchResult>> {
    let net = sim.net;
    let fixed: Vec<(usize, usize)> = std::iter::once((net.resource(0), sim.outcomes[0]))
        .chain((1..=net.n).map(|j| (net.resource(j), sim.outcomes[j])))
        .collect();
    let out = sim.state.extract(&fixed)?;
    let prob = out.norm().powi(2);
    if prob < ZERO_PROB {
        return Ok(None);
    }
    let output = out.normalized();
    let max_dev = phase_aligned_deviation(output.amps(), target.amps())?;
    Ok(Some(BranchResult {
        outcomes: sim.outcomes,
        prob,
        output,
        max_dev,
        matched: max_dev <= MATCH_TOL,
        transcript: sim.transcript,
    }))
}

fn all_outcomes(d: usize, len: usize) -> Vec<Vec<usize>> {
    (0..d.pow(len as u32))
        .map(|mut idx| {
            let mut v = vec![0; len];
            for slot in v.iter_mut().rev() {
                *slot = idx % d;
                idx /= d;
            }
            v
        })
        .collect()
}

fn run(
    net: Network,
    start: StateVector,
    target: StateVector,
    mode: &Mode,
    branch: &BranchFn,
) -> Result<ProtocolRun> {
    let d = start.d();
    let target = target.normalized();
    let branches: Vec<BranchResult> = match mode {
        Mode::AllBranches => all_outcomes(d, net.n + 1)
            .par_iter()
            .map(|fixed| {
                let mut sim = Sim {
                    net: &net,
                    state: start.clone(),
                    outcomes: Vec::new(),
                    transcript: Transcript::default(),
                    chooser: Chooser::Fixed(fixed),
                };
                branch(&mut sim)?;
                finish_branch(sim, &target)
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect(),
        Mode::Sample { seed, shots } => {
            let mut rng = crate::random::rng(*seed);
            let mut out = Vec::with_capacity(*shots);
            for _ in 0..*shots {
                let mut sim = Sim {
                    net: &net,
                    state: start.clone(),
                    outcomes: Vec::new(),
                    transcript: Transcript::default(),
                    chooser: Chooser::Sample(&mut rng),
                };
                branch(&mut sim)?;
                out.extend(finish_branch(sim, &target)?);
            }
            out
        }
    };
    let total_prob = branches.iter().map(|b| b.prob).sum();
    let transcript = branches
        .first()
        .map(|b| b.transcript.clone())
        .unwrap_or_default();
    let cost = CostReport {
        resource_states: 1,
        resource_qudits: net.n + 1,
        cdits: transcript.cdit_count(),
        rounds: transcript.rounds(),
        baseline_bqst: CostReport::bqst_baseline(net.n),
    };
    Ok(ProtocolRun {
        network: net,
        branches,
        cost,
        total_prob,
    })
}

fn controlled_parts(d: usize, blocks: &[Vec<Operator>]) -> Result<(Network, Vec<Operator>)> {
    let sizes = block_sizes(d, blocks)?;
    let net = Network::new(&sizes)?;
    let ctrl = blocks
        .iter()
        .zip(&sizes)
        .map(|(bs, m)| assemble_controlled(bs, 1, m + 1))
        .collect::<Result<Vec<_>>>()?;
    Ok((net, ctrl))
}

/// Simulates the protocol for a controlled gate whose control is the
/// leader's qudit and whose party-`j` blocks are `blocks[j-1][ℓ]`. The input
/// lives on `[P1…, Pn…, L]`.
pub fn run_mct_controlled(
    d: usize,
    blocks: &[Vec<Operator>],
    input: &StateVector,
    mode: &Mode,
) -> Result<ProtocolRun> {
    run_mct_controlled_with_signs(d, blocks, input, mode, CONTROLLED_SIGNS)
}

pub fn run_mct_controlled_with_signs(
    d: usize,
    blocks: &[Vec<Operator>],
    input: &StateVector,
    mode: &Mode,
    signs: CorrectionSigns,
) -> Result<ProtocolRun> {
    let (net, ctrl) = controlled_parts(d, blocks)?;
    check_input(d, &net, input)?;
    let target = controlled_target_state(&net, blocks, input)?;
    let start = initial_state(&net, input, false)?;
    let g = Gates::new(d)?;
    let branch = |sim: &mut Sim| controlled_branch(sim, &g, &ctrl, signs, Stop::End);
    run(net, start, target, mode, &branch)
}

/// Simulates the X-compressed protocol. `comps[j-1]` acts on party `j`'s
/// control leg (its first qudit, identified with the leader's qudit) and
/// data.
pub fn run_mct_xcompressed(
    d: usize,
    comps: &[Operator],
    input: &StateVector,
    mode: &Mode,
) -> Result<ProtocolRun> {
    run_mct_xcompressed_variant(d, comps, input, mode, XVariant::Simplified)
}

pub fn run_mct_xcompressed_variant(
    d: usize,
    comps: &[Operator],
    input: &StateVector,
    mode: &Mode,
    variant: XVariant,
) -> Result<ProtocolRun> {
    let sizes = component_sizes(d, comps)?;
    let net = Network::new(&sizes)?;
    check_input(d, &net, input)?;
    let target = xcompressed_target_state(&net, comps, input)?;
    let start = initial_state(&net, input, true)?;
    let g = Gates::new(d)?;
    let branch = |sim: &mut Sim| xcompressed_branch(sim, &g, comps, variant, Stop::End);
    run(net, start, target, mode, &branch)
}

/// Unnormalized reduced state of the leader's qudits `(L, r0)` for each
/// broadcast value `ℓ0`, summed over the parties' outcomes, just before the
/// leader learns them.
pub fn leader_marginals(
    d: usize,
    blocks: &[Vec<Operator>],
    input: &StateVector,
) -> Result<Vec<Operator>> {
    let (net, ctrl) = controlled_parts(d, blocks)?;
    check_input(d, &net, input)?;
    let start = initial_state(&net, input, false)?;
    let g = Gates::new(d)?;
    let keep = [net.leader_data(), net.resource(0)];
    let mut acc = vec![Operator::zeros(d, 2, 2); d];
    for fixed in all_outcomes(d, net.n + 1) {
        let mut sim = Sim {
            net: &net,
            state: start.clone(),
            outcomes: Vec::new(),
            transcript: Transcript::default(),
            chooser: Chooser::Fixed(&fixed),
        };
        controlled_branch(&mut sim, &g, &ctrl, CONTROLLED_SIGNS, Stop::BeforeLeaderCorrection)?;
        let rho = sim.state.reduced_density(&keep)?;
        acc[fixed[0]] = acc[fixed[0]].add(&rho)?;
    }
    Ok(acc)
}
