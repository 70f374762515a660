//! Command-line front end. Reports go to stdout (or `--out`) as JSON, a
//! one-line summary goes to stderr.
//!
//! Exit status: 0 pass, 1 verification failure, 2 input or validation
//! error, 3 indeterminate.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::compression::{
    commutator_check, controlled_blocks_with, x_components_with, Thresholds, Verdict,
};
use crate::diagram::relations::{check_relation, RelationReport, RELATION_IDS};
use crate::diagram::{builtin, evaluate_dense, evaluate_symbolic, parse_diagram, Builtin, Diagram};
use crate::error::{Error, Result};
use crate::protocol::io::{gate_file_from_json, random_blocks, random_components, random_input, GateSpec};
use crate::protocol::{
    run_mct_controlled, run_mct_xcompressed_variant, Mode, ProtocolReport, ProtocolRun, XVariant,
};
use crate::qudit::io::{operator_from_json, MatrixDoc};
use crate::qudit::{Operator, Pauli, StateVector};
use crate::scalar::{phase_aligned_deviation, Tolerance, DEFAULT_EPS};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_INDETERMINATE: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "twostring", version, about = "Two-string qudit diagrams and compressed teleportation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Comparison tolerance
    #[arg(long, default_value_t = DEFAULT_EPS)]
    pub tol: f64,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the planar relation suite in dimension d
    Relations {
        #[arg(long)]
        d: usize,
        /// Relation ids, comma separated (default: all)
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate a diagram file or builtin to a matrix
    Eval {
        /// Diagram JSON file
        path: Option<PathBuf>,
        /// Builtin diagram name, e.g. X, bell, max(3), basis(1,0)
        #[arg(long, conflicts_with = "path")]
        builtin: Option<String>,
        /// Dimension for --builtin
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, value_enum, default_value_t = BackendArg::Dense)]
        backend: BackendArg,
        #[command(flatten)]
        common: Common,
    },
    /// Decide whether an operator commutes with a Pauli on one qudit
    Compress {
        /// Matrix JSON file
        path: PathBuf,
        /// Designated qudit (1-based)
        #[arg(long)]
        j: usize,
        #[arg(long, value_enum, default_value_t = AxisArg::Z)]
        axis: AxisArg,
        #[command(flatten)]
        common: Common,
    },
    /// Simulate multipartite compressed teleportation
    Mct {
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        /// Gate file with per-party blocks or X-compressed components
        #[arg(long, conflicts_with = "random")]
        blocks: Option<PathBuf>,
        /// Number of random instances
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::AllBranches)]
        mode: ModeArg,
        /// Sampled branches per instance in sample mode
        #[arg(long, default_value_t = 16)]
        shots: usize,
        /// Protocol variant for random instances
        #[arg(long, value_enum, default_value_t = VariantArg::Controlled)]
        variant: VariantArg,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Dense,
    Symbolic,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    Z,
    X,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    #[value(name = "all_branches")]
    AllBranches,
    Sample,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Controlled,
    #[value(name = "xcompressed")]
    XCompressed,
    #[value(name = "xcompressed_full")]
    XCompressedFull,
}

struct Outcome {
    report: serde_json::Value,
    summary: String,
    code: u8,
}

pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            return ExitCode::from(code);
        }
    };
    ExitCode::from(run(cli))
}

/// Runs a parsed command and returns its exit status.
pub fn run(cli: Cli) -> u8 {
    let common = match &cli.command {
        Command::Relations { common, .. }
        | Command::Eval { common, .. }
        | Command::Compress { common, .. }
        | Command::Mct { common, .. } => common,
    };
    let result = validate(common).and_then(|tol| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(common.threads)
            .build()
            .map_err(|e| Error::Malformed(e.to_string()))?
            .install(|| dispatch(&cli.command, tol))
    });
    match result.and_then(|o| emit(&o, common.out.as_ref()).map(|_| o)) {
        Ok(o) => {
            eprintln!("{}", o.summary);
            o.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

fn validate(common: &Common) -> Result<Tolerance> {
    if common.threads == 0 {
        return Err(Error::Malformed("--threads must be at least 1".into()));
    }
    Tolerance::new(common.tol)
}

fn emit(o: &Outcome, out: Option<&PathBuf>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(&o.report)?;
    text.push('\n');
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn dispatch(cmd: &Command, tol: Tolerance) -> Result<Outcome> {
    match cmd {
        Command::Relations { d, only, .. } => cmd_relations(*d, only, tol),
        Command::Eval {
            path,
            builtin,
            d,
            backend,
            ..
        } => cmd_eval(path.as_ref(), builtin.as_deref(), *d, *backend, tol),
        Command::Compress { path, j, axis, .. } => cmd_compress(path, *j, *axis, tol),
        Command::Mct {
            d,
            n,
            blocks,
            random,
            seed,
            mode,
            shots,
            variant,
            ..
        } => cmd_mct(&MctArgs {
            d: *d,
            n: *n,
            blocks: blocks.clone(),
            random: *random,
            seed: *seed,
            mode: *mode,
            shots: *shots,
            variant: *variant,
            tol: tol.eps(),
        }),
    }
}

fn pass_code(pass: bool) -> u8 {
    if pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn cmd_relations(d: usize, only: &[String], tol: Tolerance) -> Result<Outcome> {
    if !(2..=8).contains(&d) {
        return Err(Error::InvalidDimension(d));
    }
    let ids: Vec<&str> = if only.is_empty() {
        RELATION_IDS.to_vec()
    } else {
        only.iter().map(String::as_str).collect()
    };
    for id in &ids {
        if !RELATION_IDS.contains(id) {
            return Err(Error::UnknownRelation(id.to_string()));
        }
    }
    let reports: Vec<RelationReport> = ids
        .par_iter()
        .map(|id| check_relation(id, d, tol))
        .collect::<Result<_>>()?;
    let pass = reports.iter().all(|r| r.pass);
    let passed = reports.iter().filter(|r| r.pass).count();
    Ok(Outcome {
        summary: format!("relations d={d}: {passed}/{} pass", reports.len()),
        report: json!({ "d": d, "relations": reports, "pass": pass }),
        code: pass_code(pass),
    })
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(Error::from)
}

fn load_diagram(path: Option<&PathBuf>, name: Option<&str>, d: Option<usize>) -> Result<Diagram> {
    match (path, name) {
        (Some(p), None) => {
            let diag = parse_diagram(&read(p)?)?;
            if let Some(d) = d.filter(|&d| d != diag.d()) {
                return Err(Error::shape(format!("d={d}"), format!("d={}", diag.d())));
            }
            Ok(diag)
        }
        (None, Some(b)) => {
            let d = d.ok_or_else(|| Error::Malformed("--builtin needs --d".into()))?;
            builtin(&b.parse::<Builtin>()?, d)
        }
        _ => Err(Error::Malformed("give a diagram file or --builtin".into())),
    }
}

fn cmd_eval(
    path: Option<&PathBuf>,
    name: Option<&str>,
    d: Option<usize>,
    backend: BackendArg,
    tol: Tolerance,
) -> Result<Outcome> {
    let diag = load_diagram(path, name, d)?;
    let shape = format!("{}<-{} qudits, d={}", diag.n_out(), diag.n_in(), diag.d());
    let (op, cross) = match backend {
        BackendArg::Dense => (evaluate_dense(&diag)?, None),
        BackendArg::Symbolic => (evaluate_symbolic(&diag)?, None),
        BackendArg::Both => {
            let a = evaluate_dense(&diag)?;
            let b = evaluate_symbolic(&diag)?;
            let dev = phase_aligned_deviation(a.data(), b.data())?;
            (a, Some(dev))
        }
    };
    let pass = cross.is_none_or(|dev| dev <= tol.eps());
    let backend_name = match backend {
        BackendArg::Dense => "dense",
        BackendArg::Symbolic => "symbolic",
        BackendArg::Both => "both",
    };
    let mut report = json!({
        "backend": backend_name,
        "operator": MatrixDoc::from_operator(&op),
    });
    let summary = match cross {
        Some(dev) => {
            report["cross_check"] = json!({ "max_dev": dev, "pass": pass });
            format!("eval {shape}: dense vs symbolic max_dev {dev:.3e}")
        }
        None => format!("eval {shape}: {backend_name}"),
    };
    Ok(Outcome {
        report,
        summary,
        code: pass_code(pass),
    })
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Compressed => "compressed",
        Verdict::NotCompressed => "not_compressed",
        Verdict::Indeterminate => "indeterminate",
    }
}

fn docs(ops: &[Operator]) -> Vec<MatrixDoc> {
    ops.iter().map(MatrixDoc::from_operator).collect()
}

fn cmd_compress(path: &PathBuf, j: usize, axis: AxisArg, tol: Tolerance) -> Result<Outcome> {
    let t = operator_from_json(&read(path)?)?;
    let th = Thresholds::with_pass(tol.eps())?;
    let pauli = match axis {
        AxisArg::Z => Pauli::Z,
        AxisArg::X => Pauli::X,
    };
    let check = commutator_check(&t, j, pauli, th)?;
    let mut report = json!({
        "d": t.d(),
        "n": t.n(),
        "qudit": j,
        "axis": pauli.to_string(),
        "commutator_norm": check.norm,
        "scale": check.scale,
        "verdict": verdict_name(check.verdict),
    });
    if check.verdict == Verdict::Compressed {
        match axis {
            AxisArg::Z => report["blocks"] = json!(docs(&controlled_blocks_with(&t, j, th)?.blocks)),
            AxisArg::X => {
                report["components"] = json!(docs(&x_components_with(&t, j, th)?.components))
            }
        }
    }
    let code = match check.verdict {
        Verdict::Compressed => EXIT_PASS,
        Verdict::NotCompressed => EXIT_FAIL,
        Verdict::Indeterminate => EXIT_INDETERMINATE,
    };
    Ok(Outcome {
        summary: format!(
            "compress qudit {j} axis {pauli}: {} (commutator {:.3e})",
            verdict_name(check.verdict),
            check.norm
        ),
        report,
        code,
    })
}

struct MctArgs {
    d: Option<usize>,
    n: Option<usize>,
    blocks: Option<PathBuf>,
    random: Option<usize>,
    seed: u64,
    mode: ModeArg,
    shots: usize,
    variant: VariantArg,
    tol: f64,
}

struct Instance {
    gate: GateSpec,
    input: StateVector,
    mode: Mode,
}

fn check_match(flag: &str, given: Option<usize>, actual: usize) -> Result<()> {
    match given {
        Some(g) if g != actual => Err(Error::Malformed(format!(
            "--{flag} {g} does not match the gate file ({actual})"
        ))),
        _ => Ok(()),
    }
}

fn cmd_mct(a: &MctArgs) -> Result<Outcome> {
    if a.mode == ModeArg::Sample && a.shots == 0 {
        return Err(Error::Malformed("--shots must be at least 1".into()));
    }
    let mut master = crate::random::rng(a.seed);
    let mode_for = |rng: &mut crate::random::SeededRng| match a.mode {
        ModeArg::AllBranches => Mode::AllBranches,
        ModeArg::Sample => Mode::Sample {
            seed: rng.random(),
            shots: a.shots,
        },
    };
    let (d, n, instances) = match (&a.blocks, a.random) {
        (Some(path), None) => {
            let file = gate_file_from_json(&read(path)?)?;
            check_match("d", a.d, file.d)?;
            check_match("n", a.n, file.gate.parties())?;
            let input = match file.input {
                Some(s) => s,
                None => crate::random::random_state(&mut master, file.d, file.gate.data_qudits()),
            };
            let mode = mode_for(&mut master);
            let n = file.gate.parties();
            (file.d, n, vec![Instance { gate: file.gate, input, mode }])
        }
        (None, Some(trials)) => {
            let d = a.d.ok_or_else(|| Error::Malformed("--random needs --d".into()))?;
            let n = a.n.ok_or_else(|| Error::Malformed("--random needs --n".into()))?;
            if d < 2 {
                return Err(Error::InvalidDimension(d));
            }
            if n == 0 || trials == 0 {
                return Err(Error::Malformed("--n and --random must be at least 1".into()));
            }
            let mut out = Vec::with_capacity(trials);
            for _ in 0..trials {
                let gate = match a.variant {
                    VariantArg::Controlled => GateSpec::Controlled(random_blocks(&mut master, d, n)),
                    _ => GateSpec::XCompressed(random_components(&mut master, d, n)?),
                };
                let input = random_input(&mut master, d, n);
                let mode = mode_for(&mut master);
                out.push(Instance { gate, input, mode });
            }
            (d, n, out)
        }
        _ => return Err(Error::Malformed("give exactly one of --blocks and --random".into())),
    };
    let xvariant = if a.variant == VariantArg::XCompressedFull {
        XVariant::Full
    } else {
        XVariant::Simplified
    };
    let runs: Vec<ProtocolRun> = instances
        .iter()
        .map(|inst| match &inst.gate {
            GateSpec::Controlled(b) => run_mct_controlled(d, b, &inst.input, &inst.mode),
            GateSpec::XCompressed(c) => {
                run_mct_xcompressed_variant(d, c, &inst.input, &inst.mode, xvariant)
            }
        })
        .collect::<Result<_>>()?;
    let variant = match instances.first().map(|i| &i.gate) {
        Some(GateSpec::XCompressed(_)) if xvariant == XVariant::Full => "xcompressed_full",
        Some(GateSpec::XCompressed(_)) => "xcompressed",
        _ => "controlled",
    };
    let report_mode = match a.mode {
        ModeArg::AllBranches => Mode::AllBranches,
        ModeArg::Sample => Mode::Sample {
            seed: a.seed,
            shots: a.shots,
        },
    };
    let report = ProtocolReport::from_runs(d, n, &report_mode, variant, a.tol, &runs);
    let summary = format!(
        "mct d={d} n={n} {variant}: {} trial(s), {} branch(es), cdits {}, resource qudits {}, {}",
        report.trials.len(),
        report.branches.len(),
        report.cost.cdits,
        report.cost.resource_qudits,
        if report.pass { "pass" } else { "FAIL" }
    );
    Ok(Outcome {
        code: pass_code(report.pass),
        report: to_value(&report)?,
        summary,
    })
}

fn to_value<T: Serialize>(v: &T) -> Result<serde_json::Value> {
    Ok(serde_json::to_value(v)?)
}
