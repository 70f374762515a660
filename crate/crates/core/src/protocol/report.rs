use serde::Serialize;

use super::{Baseline, Mode, ProtocolRun};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchEntry {
    pub trial: usize,
    pub outcomes: Vec<usize>,
    pub prob: f64,
    #[serde(rename = "match")]
    pub matched: bool,
    pub max_dev: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialReport {
    pub trial: usize,
    pub branches: usize,
    pub total_prob: f64,
    pub max_dev: f64,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CostEntry {
    pub resource_states: usize,
    pub resource_qudits: usize,
    pub cdits: usize,
    pub rounds: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProtocolReport {
    pub d: usize,
    pub n: usize,
    pub mode: &'static str,
    pub variant: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shots: Option<usize>,
    pub trials: Vec<TrialReport>,
    pub branches: Vec<BranchEntry>,
    pub cost: CostEntry,
    pub baseline_bqst: Baseline,
    pub pass: bool,
}

impl ProtocolReport {
    /// Summarises one or more runs of the same `(d, n)` protocol. A run
    /// passes when every branch matches the target, the cost matches one
    /// `(n+1)`-qudit state and `2n` cdits, and, when all branches were
    /// enumerated, the probabilities sum to one. Branches match when their
    /// phase-aligned deviation is at most `tol`.
    pub fn from_runs(
        d: usize,
        n: usize,
        mode: &Mode,
        variant: &str,
        tol: f64,
        runs: &[ProtocolRun],
    ) -> Self {
        let exhaustive = matches!(mode, Mode::AllBranches);
        let mut branches = Vec::new();
        let mut trials = Vec::new();
        for (t, run) in runs.iter().enumerate() {
            branches.extend(run.branches.iter().map(|b| BranchEntry {
                trial: t,
                outcomes: b.outcomes.clone(),
                prob: b.prob,
                matched: b.max_dev <= tol,
                max_dev: b.max_dev,
            }));
            let prob_ok = !exhaustive || (run.total_prob - 1.0).abs() <= tol.max(1e-12);
            let matched = run.branches.iter().all(|b| b.max_dev <= tol);
            trials.push(TrialReport {
                trial: t,
                branches: run.branches.len(),
                total_prob: run.total_prob,
                max_dev: run.max_dev(),
                pass: matched && prob_ok && run.cost.matches_expected_cost(n),
            });
        }
        let cost = runs.first().map(|r| r.cost);
        let (seed, shots) = match mode {
            Mode::AllBranches => (None, None),
            Mode::Sample { seed, shots } => (Some(*seed), Some(*shots)),
        };
        ProtocolReport {
            d,
            n,
            mode: if exhaustive { "all_branches" } else { "sample" },
            variant: variant.to_string(),
            seed,
            shots,
            pass: !trials.is_empty() && trials.iter().all(|t| t.pass),
            trials,
            branches,
            cost: CostEntry {
                resource_states: cost.map_or(0, |c| c.resource_states),
                resource_qudits: cost.map_or(0, |c| c.resource_qudits),
                cdits: cost.map_or(0, |c| c.cdits),
                rounds: cost.map_or(0, |c| c.rounds),
            },
            baseline_bqst: super::CostReport::bqst_baseline(n),
        }
    }
}
