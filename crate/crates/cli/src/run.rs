use std::path::PathBuf;

use beliefnet::ann::{
    analyze_trajectory, init_model, load_idx_dataset, train as train_model, AnnConfig, AnnError,
    Cadence, Dataset, IdxOptions, Optimizer, Trajectory, TrajectoryAnalysis, TrajectoryRecord,
    UniverseMode,
};
use beliefnet::audit::{
    audit_agm_contraction, audit_agm_revision, AuditError, AuditOptions, ContractionOperator,
    RevisionOperator,
};
use beliefnet::logic::WorldLabel;
use beliefnet::metrics::SequenceVerdict;
use beliefnet::replay::{fullmeet_step, replay_sequence, ReplayError, ReplayOptions};
use beliefnet::{parse_formula, Vocabulary};
use clap::{Args, ValueEnum};
use serde::Serialize;

use crate::change::resolve_vocab;
use crate::{print_json, CliError, CliResult};

#[derive(Args)]
pub struct AuditArgs {
    /// dalal, full-meet-revise, lex, full-meet-contract or moderate.
    #[arg(long)]
    operator: String,
    /// Number of atoms; up to 3 is exhaustive, larger is sampled.
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sampled instances when n > 3.
    #[arg(long, default_value_t = 2000)]
    samples: usize,
}

fn letters(n: usize) -> Result<Vocabulary, CliError> {
    if n == 0 || n > 26 {
        return Err(CliError::Semantic(format!("cannot audit over {n} atoms")));
    }
    Vocabulary::new((0..n).map(|i| ((b'a' + i as u8) as char).to_string()))
        .map_err(|e| CliError::Semantic(e.to_string()))
}

pub fn audit(args: AuditArgs) -> CliResult {
    let vocab = letters(args.n)?;
    let opts = AuditOptions {
        seed: args.seed,
        samples: args.samples,
    };
    let id = args.operator.as_str();
    let report = if let Some(op) = RevisionOperator::from_id(id) {
        audit_agm_revision(id, &|s, phi| op.apply(s, phi), &vocab, opts)
    } else if let Some(op) = ContractionOperator::from_id(id) {
        audit_agm_contraction(id, &|s, phi| op.apply(s, phi), &vocab, opts)
    } else {
        return Err(CliError::Parse(format!(
            "unknown operator `{id}`; expected one of dalal, full-meet-revise, lex, full-meet-contract, moderate"
        )));
    }
    .map_err(|e: AuditError| CliError::Semantic(e.to_string()))?;
    print_json(&report);
    if report.all_hold() {
        Ok(())
    } else {
        let failed: Vec<&str> = report.failures().map(|c| c.id.as_str()).collect();
        Err(CliError::Audit(format!("{id} fails {}", failed.join(", "))))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OptimizerArg {
    Adam,
    Sgd,
}

#[derive(Clone, Copy, ValueEnum)]
enum CadenceArg {
    Step,
    Epoch,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Full,
    Observed,
}

#[derive(Args)]
pub struct TrainArgs {
    /// `boolean:<formula>` or `idx:<images>,<labels>`.
    #[arg(long)]
    task: String,
    /// Atoms of a boolean task; inferred from the formula when omitted.
    #[arg(long)]
    vocab: Option<String>,
    /// Hidden layer sizes, comma-separated.
    #[arg(long, default_value = "100")]
    hidden: String,
    #[arg(long, default_value_t = 2000)]
    epochs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "step")]
    cadence: CadenceArg,
    /// Defaults to full for boolean tasks and observed for idx tasks.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long, default_value_t = 1e-3)]
    lr: f64,
    #[arg(long, value_enum, default_value = "adam")]
    optimizer: OptimizerArg,
    #[arg(long, default_value_t = 0.5)]
    tau: f64,
    /// Kept samples of an idx task.
    #[arg(long, default_value_t = 30)]
    limit: usize,
    /// Write the trajectory JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the trajectory and verdicts as JSON instead of a table.
    #[arg(long)]
    json: bool,
}

#[derive(Serialize)]
struct TrainOutput {
    seed: u64,
    config: AnnConfig,
    trajectory: TrajectoryRecord,
    analysis: TrajectoryAnalysis,
}

fn ann_error(e: AnnError) -> CliError {
    match e {
        AnnError::Io(_)
        | AnnError::BadMagic { .. }
        | AnnError::TruncatedFile(_)
        | AnnError::LabelMismatch { .. }
        | AnnError::BadTrajectory(_) => CliError::Semantic(e.to_string()),
        _ => CliError::TrainConfig(e.to_string()),
    }
}

fn verdict_text(v: &SequenceVerdict) -> String {
    match v.violation {
        None => "holds".into(),
        Some((i, j, m)) => format!("fails at ({i}, {j}, {m})"),
    }
}

pub fn train(args: TrainArgs) -> CliResult {
    let hidden = args
        .hidden
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::TrainConfig(format!("--hidden: {e}")))?;

    let (vocab, data, default_mode) = if let Some(f) = args.task.strip_prefix("boolean:") {
        let vocab = resolve_vocab(args.vocab.as_deref(), &[f])?;
        let formula = parse_formula(f, &vocab).map_err(|e| CliError::Parse(format!("in `{f}`: {e}")))?;
        let data = Dataset::from_formula(&formula, &vocab).map_err(ann_error)?;
        (vocab, data, UniverseMode::Full)
    } else if let Some(paths) = args.task.strip_prefix("idx:") {
        let (images, labels) = paths
            .split_once(',')
            .ok_or_else(|| CliError::Parse("idx task needs `idx:<images>,<labels>`".into()))?;
        let opts = IdxOptions {
            limit: Some(args.limit),
            ..IdxOptions::default()
        };
        let data = load_idx_dataset(images, labels, &opts).map_err(ann_error)?;
        let n = opts.grid * opts.grid;
        let vocab = Vocabulary::numbered("x", n).map_err(|e| CliError::TrainConfig(e.to_string()))?;
        (vocab, data, UniverseMode::Observed)
    } else {
        return Err(CliError::Parse(format!(
            "unknown task `{}`; expected boolean:<formula> or idx:<images>,<labels>",
            args.task
        )));
    };

    let mode = match args.mode {
        Some(ModeArg::Full) => UniverseMode::Full,
        Some(ModeArg::Observed) => UniverseMode::Observed,
        None => default_mode,
    };
    let cfg = AnnConfig {
        n: vocab.len(),
        hidden,
        tau: args.tau,
        lr: args.lr,
        optimizer: match args.optimizer {
            OptimizerArg::Adam => Optimizer::ADAM,
            OptimizerArg::Sgd => Optimizer::Sgd,
        },
        epochs: args.epochs,
        seed: args.seed,
        cadence: match args.cadence {
            CadenceArg::Step => Cadence::Step,
            CadenceArg::Epoch => Cadence::Epoch,
        },
    };
    let model = init_model(&cfg).map_err(ann_error)?;
    let (_, traj) = train_model(model, &data, &cfg, &vocab, mode).map_err(ann_error)?;
    let analysis = analyze_trajectory(&traj);
    let record = traj.to_record();
    if let Some(path) = &args.out {
        let text = serde_json::to_string_pretty(&record).expect("serializable");
        std::fs::write(path, text + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }

    if args.json {
        print_json(&TrainOutput {
            seed: cfg.seed,
            config: cfg,
            trajectory: record,
            analysis,
        });
        return Ok(());
    }
    println!("seed: {}  samples: {}  mode: {:?}", cfg.seed, data.len(), traj.mode());
    println!("{:>8}  {:>8}  {:>6}", "step", "accuracy", "|K|");
    for s in &traj.stages {
        println!(
            "{:>8}  {:>8.4}  {:>6}",
            s.step,
            s.accuracy.unwrap_or(f64::NAN),
            s.belief.len()
        );
    }
    println!("SD: {}", verdict_text(&analysis.sd));
    println!("DB: {}", verdict_text(&analysis.db));
    match &analysis.da {
        Some(v) => println!("DA: {}", verdict_text(v)),
        None => println!("DA: skipped (inconsistent stage)"),
    }
    Ok(())
}

#[derive(Clone, Copy, ValueEnum)]
enum PairArg {
    Dp,
    FullMeet,
}

#[derive(Args)]
pub struct ReplayArgs {
    /// Trajectory JSON, as written by `train --out`.
    #[arg(long)]
    trajectory: PathBuf,
    /// Replay even if the sequence violates (SD).
    #[arg(long)]
    forced: bool,
    #[arg(long, value_enum, default_value = "dp")]
    operator_pair: PairArg,
    /// Also check the ranking constraints on every step.
    #[arg(long)]
    check_constraints: bool,
}

#[derive(Serialize)]
struct FullMeetRecord {
    i: usize,
    phi1: Vec<WorldLabel>,
    notphi2: Vec<WorldLabel>,
    result: Vec<WorldLabel>,
    matched: bool,
}

#[derive(Serialize)]
struct FullMeetTrace {
    operator_pair: &'static str,
    steps: Vec<FullMeetRecord>,
}

pub fn load_trajectory(path: &std::path::Path) -> Result<Trajectory, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let record: TrajectoryRecord =
        serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    Trajectory::from_record(&record).map_err(|e| CliError::Semantic(e.to_string()))
}

pub fn replay(args: ReplayArgs) -> CliResult {
    let traj = load_trajectory(&args.trajectory)?;
    let seq = traj.beliefs();
    let vocab = &traj.vocab;
    match args.operator_pair {
        PairArg::Dp => {
            let opts = ReplayOptions {
                forced: args.forced,
                check_constraints: args.check_constraints,
            };
            let trace = replay_sequence(&seq, opts).map_err(|e| match e {
                ReplayError::SdViolation((i, j, m)) => CliError::SdViolation(format!(
                    "trajectory violates (SD) at ({i}, {j}, {m}); use --forced to replay anyway"
                )),
                other => CliError::Semantic(other.to_string()),
            })?;
            print_json(&trace.to_record(vocab));
            let matched = trace.steps.iter().filter(|s| s.matched).count();
            eprintln!(
                "{matched}/{} steps matched; invariants {}; lemmas {}",
                trace.steps.len(),
                if trace.invariants.iter().all(|&b| b) { "ok" } else { "broken" },
                if trace.lemmas.iter().all(|&(a, b)| a && b) { "ok" } else { "broken" },
            );
        }
        PairArg::FullMeet => {
            if seq.len() < 2 {
                return Err(CliError::Semantic(ReplayError::TooShort(seq.len()).to_string()));
            }
            let steps: Vec<FullMeetRecord> = seq
                .windows(2)
                .enumerate()
                .map(|(i, w)| {
                    let s = fullmeet_step(&w[0], &w[1]);
                    FullMeetRecord {
                        i,
                        phi1: s.phi1.labels(vocab),
                        notphi2: s.not_phi2.labels(vocab),
                        matched: s.result == w[1],
                        result: s.result.labels(vocab),
                    }
                })
                .collect();
            let matched = steps.iter().filter(|s| s.matched).count();
            let total = steps.len();
            print_json(&FullMeetTrace {
                operator_pair: "full-meet",
                steps,
            });
            eprintln!("{matched}/{total} steps matched");
        }
    }
    Ok(())
}
