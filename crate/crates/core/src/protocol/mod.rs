//! Branch-enumerating LOCC simulation of multipartite compressed
//! teleportation: one leader shares a common control with `n` parties
//! through a single `(n+1)`-qudit resource state.

pub mod io;
mod mct;
mod report;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qudit::{fourier, StateVector};

pub use mct::{
    run_mct_controlled, run_mct_controlled_with_signs, run_mct_xcompressed,
    run_mct_xcompressed_variant, target_unitary, target_unitary_x, trick_identity_deviation,
    leader_marginals, CorrectionSigns, XVariant, CONTROLLED_SIGNS, MATCH_TOL,
};
pub use report::{BranchEntry, CostEntry, ProtocolReport, TrialReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Participant {
    Leader,
    Party(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Register {
    Data,
    Resource,
}

/// Qudit ownership. Data qudits come first in the order
/// `[P1 data…, …, Pn data…, L]`, followed by the resource qudits
/// `[r1, …, rn, r0]`; `r0` belongs to the leader.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Network {
    pub n: usize,
    pub party_data: Vec<usize>,
    pub layout: Vec<(Participant, Register)>,
}

impl Network {
    pub fn new(party_data: &[usize]) -> Result<Self> {
        if party_data.is_empty() {
            return Err(Error::Malformed("a network needs at least one party".into()));
        }
        let n = party_data.len();
        let mut layout = Vec::new();
        for (j, &m) in party_data.iter().enumerate() {
            layout.extend(std::iter::repeat_n((Participant::Party(j + 1), Register::Data), m));
        }
        layout.push((Participant::Leader, Register::Data));
        for j in 1..=n {
            layout.push((Participant::Party(j), Register::Resource));
        }
        layout.push((Participant::Leader, Register::Resource));
        Ok(Network {
            n,
            party_data: party_data.to_vec(),
            layout,
        })
    }

    pub fn total_qudits(&self) -> usize {
        self.layout.len()
    }

    pub fn data_qudits(&self) -> usize {
        self.party_data.iter().sum::<usize>() + 1
    }

    /// 1-based data qudits of party `j` (1-based).
    pub fn party_qudits(&self, j: usize) -> Vec<usize> {
        let start: usize = self.party_data[..j - 1].iter().sum();
        (start + 1..=start + self.party_data[j - 1]).collect()
    }

    pub fn leader_data(&self) -> usize {
        self.data_qudits()
    }

    /// Resource qudit of participant `j`; `0` is the leader.
    pub fn resource(&self, j: usize) -> usize {
        let base = self.data_qudits();
        if j == 0 {
            base + self.n + 1
        } else {
            base + j
        }
    }

    pub fn owner(&self, qudit: usize) -> Participant {
        self.layout[qudit - 1].0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Message {
    pub sender: Participant,
    pub receivers: Vec<Participant>,
    pub value: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Transcript {
    pub messages: Vec<Message>,
}

impl Transcript {
    pub fn send(&mut self, sender: Participant, receivers: Vec<Participant>, value: usize) {
        self.messages.push(Message {
            sender,
            receivers,
            value,
        });
    }

    /// One cdit per receiver of each message.
    pub fn cdit_count(&self) -> usize {
        self.messages.iter().map(|m| m.receivers.len()).sum()
    }

    /// Number of communication rounds: maximal runs of messages with the
    /// same sender role.
    pub fn rounds(&self) -> usize {
        let mut rounds = 0;
        let mut last: Option<bool> = None;
        for m in &self.messages {
            let from_leader = m.sender == Participant::Leader;
            if last != Some(from_leader) {
                rounds += 1;
                last = Some(from_leader);
            }
        }
        rounds
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Baseline {
    pub resource_states: usize,
    pub channels: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CostReport {
    pub resource_states: usize,
    pub resource_qudits: usize,
    pub cdits: usize,
    pub rounds: usize,
    pub baseline_bqst: Baseline,
}

impl CostReport {
    /// Bidirectional teleportation needs one bipartite state and two
    /// channel uses per non-local gate.
    pub fn bqst_baseline(n: usize) -> Baseline {
        Baseline {
            resource_states: n,
            channels: 2 * n,
        }
    }

    pub fn matches_expected_cost(&self, n: usize) -> bool {
        self.resource_states == 1
            && self.resource_qudits == n + 1
            && self.cdits == 2 * n
            && self.baseline_bqst == Self::bqst_baseline(n)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BranchResult {
    /// `(ℓ0, ℓ1, …, ℓn)`.
    pub outcomes: Vec<usize>,
    pub prob: f64,
    /// Normalized state of the data qudits after corrections.
    pub output: StateVector,
    pub max_dev: f64,
    pub matched: bool,
    pub transcript: Transcript,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Mode {
    AllBranches,
    Sample { seed: u64, shots: usize },
}

#[derive(Clone, Debug)]
pub struct ProtocolRun {
    pub network: Network,
    pub branches: Vec<BranchResult>,
    pub cost: CostReport,
    pub total_prob: f64,
}

impl ProtocolRun {
    pub fn all_matched(&self) -> bool {
        self.branches.iter().all(|b| b.matched)
    }

    pub fn max_dev(&self) -> f64 {
        self.branches.iter().map(|b| b.max_dev).fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureBasis {
    Computational,
    Fourier,
}

/// All outcomes of measuring one qudit (1-based): `(outcome, probability,
/// renormalized post-state)`, zero-probability outcomes omitted. A Fourier
/// measurement applies `F⁻¹` and then measures in the computational basis.
pub fn measure_qudit(
    state: &StateVector,
    qudit: usize,
    basis: MeasureBasis,
) -> Result<Vec<(usize, f64, StateVector)>> {
    let s = match basis {
        MeasureBasis::Computational => state.clone(),
        MeasureBasis::Fourier => state.apply_local(&fourier(state.d())?.adjoint(), &[qudit])?,
    };
    let total = s.norm().powi(2);
    let mut out = Vec::new();
    for k in 0..s.d() {
        let p = s.project(qudit, k)?;
        let w = p.norm().powi(2);
        if w > 1e-15 * total.max(1.0) {
            out.push((k, w / total, p.scale(Complex64::new(1.0 / w.sqrt(), 0.0))));
        }
    }
    Ok(out)
}
