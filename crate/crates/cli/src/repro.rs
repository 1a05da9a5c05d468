//! Pinned scenarios checked against the fixture files under `fixtures/repro`.

use beliefnet::ann::{
    analyze_trajectory, init_model, parse_idx, train, AnnConfig, Dataset, IdxOptions, Trajectory,
    TrajectoryRecord, UniverseMode,
};
use beliefnet::audit::{check_r_constraints, reproduce_fullmeet_dp2};
use beliefnet::epistemics::EpistemicState;
use beliefnet::metrics::{check_sequence, dalal_gradual, dist_a, dist_b, Condition};
use beliefnet::operators::{dalal_revise, lex_revise};
use beliefnet::replay::{fullmeet_step, replay_sequence, ReplayOptions};
use beliefnet::{parse_formula, Universe, Vocabulary, WorldLabel, WorldSet};
use clap::Args;
use serde::Deserialize;

use crate::change::models;
use crate::{CliError, CliResult};

const SCENARIOS: [(&str, &str); 6] = [
    ("distances-example", include_str!("../../../fixtures/repro/distances-example.json")),
    ("dalal-gradual", include_str!("../../../fixtures/repro/dalal-gradual.json")),
    ("fullmeet-dp2", include_str!("../../../fixtures/repro/fullmeet-dp2.json")),
    ("table1", include_str!("../../../fixtures/repro/table1.json")),
    ("backprop-dp-example", include_str!("../../../fixtures/repro/backprop-dp-example.json")),
    ("mnist-smoke", include_str!("../../../fixtures/repro/mnist-smoke.json")),
];

const TRAJECTORIES: [(&str, &str); 2] = [
    ("table1.json", include_str!("../../../fixtures/trajectories/table1.json")),
    ("worked-example.json", include_str!("../../../fixtures/trajectories/worked-example.json")),
];

const MNIST_IMAGES: &[u8] = include_bytes!("../../../data/mnist-subset/train-images-idx3-ubyte");
const MNIST_LABELS: &[u8] = include_bytes!("../../../data/mnist-subset/train-labels-idx1-ubyte");

#[derive(Args)]
pub struct ReproArgs {
    /// distances-example, dalal-gradual, fullmeet-dp2, table1,
    /// backprop-dp-example, mnist-smoke, or all.
    name: String,
}

type Outcome = Result<String, String>;

pub fn run(args: ReproArgs) -> CliResult {
    let names: Vec<&str> = if args.name == "all" {
        SCENARIOS.iter().map(|(n, _)| *n).collect()
    } else if SCENARIOS.iter().any(|(n, _)| *n == args.name) {
        vec![args.name.as_str()]
    } else {
        return Err(CliError::Parse(format!("unknown scenario `{}`", args.name)));
    };
    let mut failed = Vec::new();
    for name in names {
        let fixture = SCENARIOS.iter().find(|(n, _)| *n == name).unwrap().1;
        match scenario(name, fixture) {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                println!("FAIL {name}: {why}");
                failed.push(name);
            }
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Repro(format!("mismatch in {}", failed.join(", "))))
    }
}

fn scenario(name: &str, fixture: &str) -> Outcome {
    match name {
        "distances-example" => distances(parse(fixture)?),
        "dalal-gradual" => gradual(parse(fixture)?),
        "fullmeet-dp2" => fullmeet_dp2(parse(fixture)?),
        "table1" => table1(parse(fixture)?),
        "backprop-dp-example" => worked_example(parse(fixture)?),
        "mnist-smoke" => mnist(parse(fixture)?),
        _ => unreachable!("scenario list is fixed"),
    }
}

fn parse<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T, String> {
    serde_json::from_str(text).map_err(|e| format!("bad fixture: {e}"))
}

fn vocab(names: &[String]) -> Result<Vocabulary, String> {
    Vocabulary::new(names.iter().cloned()).map_err(|e| e.to_string())
}

fn set_of(text: &str, v: &Vocabulary) -> Result<WorldSet, String> {
    models(text, v).map_err(|e| format!("{e:?}"))
}

fn labels_set(u: &Universe, v: &Vocabulary, labels: &[WorldLabel]) -> Result<WorldSet, String> {
    WorldSet::from_labels(u, v, labels).ok_or_else(|| format!("unknown world in {labels:?}"))
}

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, expected {want:?}"))
    }
}

fn trajectory(file: &str) -> Result<Trajectory, String> {
    let text = TRAJECTORIES
        .iter()
        .find(|(n, _)| *n == file)
        .ok_or_else(|| format!("no trajectory fixture `{file}`"))?
        .1;
    let rec: TrajectoryRecord = parse(text)?;
    Trajectory::from_record(&rec).map_err(|e| e.to_string())
}

#[derive(Deserialize)]
struct Distances {
    vocabulary: Vec<String>,
    k1: String,
    k2: String,
    expected: DistancesExpected,
}

#[derive(Deserialize)]
struct DistancesExpected {
    dist_a: u32,
    dist_b: Vec<WorldLabel>,
}

fn distances(f: Distances) -> Outcome {
    let v = vocab(&f.vocabulary)?;
    let (k1, k2) = (set_of(&f.k1, &v)?, set_of(&f.k2, &v)?);
    let a = dist_a(&k1, &k2).map_err(|e| e.to_string())?;
    expect("Dist_A", a, f.expected.dist_a)?;
    let b = dist_b(&k1, &k2);
    expect("Dist_B", &b, &labels_set(k1.universe(), &v, &f.expected.dist_b)?)?;
    Ok(format!("Dist_A = {a}, |Dist_B| = {}", b.len()))
}

#[derive(Deserialize)]
struct Gradual {
    vocabulary: Vec<String>,
    belief: String,
    input: String,
    expected: GradualExpected,
}

#[derive(Deserialize)]
struct GradualExpected {
    layers: Vec<Vec<WorldLabel>>,
    revision: Vec<WorldLabel>,
    strict_da: bool,
}

fn gradual(f: Gradual) -> Outcome {
    let v = vocab(&f.vocabulary)?;
    let (k, phi) = (set_of(&f.belief, &v)?, set_of(&f.input, &v)?);
    let u = k.universe().clone();
    let layers = dalal_gradual(&k, &phi).map_err(|e| e.to_string())?;
    let want = f
        .expected
        .layers
        .iter()
        .map(|l| labels_set(&u, &v, l))
        .collect::<Result<Vec<_>, _>>()?;
    expect("layers", &layers, &want)?;
    let revised = dalal_revise(&k, &phi);
    expect("revision", &revised, &labels_set(&u, &v, &f.expected.revision)?)?;
    let mut seq = vec![k];
    seq.extend(layers.iter().cloned());
    seq.push(revised);
    let da = check_sequence(&seq, Condition::DaStrict).map_err(|e| e.to_string())?;
    expect("strict DA", da.holds, f.expected.strict_da)?;
    Ok(format!(
        "layer sizes {:?}, strict DA holds",
        layers.iter().map(WorldSet::len).collect::<Vec<_>>()
    ))
}

#[derive(Deserialize)]
struct FullMeetDp2 {
    vocabulary: Vec<String>,
    belief: String,
    input: String,
    expected: FullMeetDp2Expected,
}

#[derive(Deserialize)]
struct FullMeetDp2Expected {
    revision: Vec<WorldLabel>,
    violated: Vec<String>,
    witness: [WorldLabel; 2],
    lex_holds: Vec<String>,
}

fn fullmeet_dp2(f: FullMeetDp2) -> Outcome {
    let v = vocab(&f.vocabulary)?;
    let report = reproduce_fullmeet_dp2().map_err(|e| e.to_string())?;
    let violated: Vec<String> = report.failures().map(|c| c.id.clone()).collect();
    expect("violated constraints", &violated, &f.expected.violated)?;
    let witness = report
        .check("R2")
        .and_then(|c| c.counterexample.as_ref())
        .and_then(|cx| cx.witness.clone());
    expect("R2 witness", witness, Some(f.expected.witness))?;

    let (k, phi) = (set_of(&f.belief, &v)?, set_of(&f.input, &v)?);
    let prior = EpistemicState::full_meet(k);
    let post = lex_revise(&prior, &phi);
    expect("lex revision", post.belief(), &labels_set(phi.universe(), &v, &f.expected.revision)?)?;
    let c = check_r_constraints(&prior, &phi, &post);
    let lex_holds: Vec<String> = c
        .named()
        .iter()
        .filter(|(_, pc)| pc.holds)
        .map(|(id, _)| id.to_string())
        .collect();
    expect("constraints lex satisfies", lex_holds, f.expected.lex_holds)?;
    Ok("full-meet breaks R2 on (ab, ab̄); lex satisfies R1-R4 and LR".into())
}

#[derive(Deserialize)]
struct Table1 {
    trajectory: String,
    expected: Table1Expected,
    training: Training,
}

#[derive(Deserialize)]
struct Table1Expected {
    sd: bool,
    dist_b_to_last: Vec<Vec<WorldLabel>>,
    dp_matched: usize,
    fullmeet_matched: usize,
}

#[derive(Deserialize)]
struct Training {
    formula: String,
    hidden: Vec<usize>,
    epochs: usize,
    seeds: Vec<u64>,
    min_converged: usize,
    final_belief: Vec<WorldLabel>,
    final_accuracy: f64,
}

fn table1(f: Table1) -> Outcome {
    let t = trajectory(&f.trajectory)?;
    let seq = t.beliefs();
    let last = seq.last().ok_or("empty trajectory")?;
    let sd = analyze_trajectory(&t).sd;
    expect("SD", sd.holds, f.expected.sd)?;
    let rows: Vec<WorldSet> = seq.iter().map(|k| dist_b(k, last)).collect();
    let want = f
        .expected
        .dist_b_to_last
        .iter()
        .map(|l| labels_set(&t.universe, &t.vocab, l))
        .collect::<Result<Vec<_>, _>>()?;
    expect("Dist_B(K_i, K_4)", &rows, &want)?;
    let trace = replay_sequence(&seq, ReplayOptions::default()).map_err(|e| e.to_string())?;
    let matched = trace.steps.iter().filter(|s| s.matched).count();
    expect("DP steps matched", matched, f.expected.dp_matched)?;
    expect("DP invariants", trace.all_ok(), true)?;
    let fm = seq.windows(2).filter(|w| fullmeet_step(&w[0], &w[1]).result == w[1]).count();
    expect("full-meet steps matched", fm, f.expected.fullmeet_matched)?;

    let tr = &f.training;
    let v = t.vocab.clone();
    let formula = parse_formula(&tr.formula, &v).map_err(|e| e.to_string())?;
    let data = Dataset::from_formula(&formula, &v).map_err(|e| e.to_string())?;
    let target = labels_set(&t.universe, &v, &tr.final_belief)?;
    let mut converged = 0;
    for &seed in &tr.seeds {
        let cfg = AnnConfig {
            seed,
            epochs: tr.epochs,
            ..AnnConfig::new(v.len(), tr.hidden.clone())
        };
        let model = init_model(&cfg).map_err(|e| e.to_string())?;
        let (_, run) = train(model, &data, &cfg, &v, UniverseMode::Full).map_err(|e| e.to_string())?;
        let end = run.stages.last().expect("at least one stage");
        if end.accuracy == Some(tr.final_accuracy) {
            converged += 1;
            expect(&format!("seed {seed} final belief"), &end.belief, &target)?;
        }
        if analyze_trajectory(&run).sd.holds {
            let tr = replay_sequence(&run.beliefs(), ReplayOptions::default()).map_err(|e| e.to_string())?;
            expect(&format!("seed {seed} replay"), tr.all_ok(), true)?;
        }
    }
    if converged < tr.min_converged {
        return Err(format!("{converged}/{} seeds converged, need {}", tr.seeds.len(), tr.min_converged));
    }
    Ok(format!(
        "SD holds, {matched}/{} DP steps matched, {converged}/{} seeds reach 100%",
        trace.steps.len(),
        tr.seeds.len()
    ))
}

#[derive(Deserialize)]
struct WorkedExample {
    trajectory: String,
    expected: WorkedExpected,
}

#[derive(Deserialize)]
struct WorkedExpected {
    sd: bool,
    initial: Vec<Vec<usize>>,
    steps: Vec<WorkedStep>,
}

#[derive(Deserialize)]
struct WorkedStep {
    phi1: Vec<usize>,
    notphi2: Vec<usize>,
    mid: Vec<Vec<usize>>,
    #[serde(default)]
    post: Option<Vec<Vec<usize>>>,
    result: Vec<usize>,
}

fn worked_example(f: WorkedExample) -> Outcome {
    let t = trajectory(&f.trajectory)?;
    let u = &t.universe;
    let set = |ix: &[usize]| WorldSet::from_indices(u, ix.iter().copied());
    let layers = |ls: &[Vec<usize>]| ls.iter().map(|l| set(l)).collect::<Vec<_>>();
    let trace = replay_sequence(&t.beliefs(), ReplayOptions::default()).map_err(|e| e.to_string())?;
    expect("SD", trace.sd.holds, f.expected.sd)?;
    expect("initial ranking", trace.initial.ranking().layers(), layers(&f.expected.initial))?;
    expect("steps", trace.steps.len(), f.expected.steps.len())?;
    for (i, (s, w)) in trace.steps.iter().zip(&f.expected.steps).enumerate() {
        expect(&format!("step {i} phi1"), &s.phi1, &set(&w.phi1))?;
        expect(&format!("step {i} notphi2"), &s.not_phi2, &set(&w.notphi2))?;
        expect(&format!("step {i} mid ranking"), s.mid.ranking().layers(), layers(&w.mid))?;
        if let Some(post) = &w.post {
            expect(&format!("step {i} post ranking"), s.post.ranking().layers(), layers(post))?;
        }
        expect(&format!("step {i} result"), s.post.belief(), &set(&w.result))?;
    }
    expect("all checks", trace.all_ok(), true)?;
    Ok(format!("{} steps matched with the displayed preorders", trace.steps.len()))
}

#[derive(Deserialize)]
struct Mnist {
    keep: Vec<(u8, u8)>,
    limit: usize,
    grid: usize,
    threshold: u8,
    hidden: Vec<usize>,
    epochs: usize,
    seeds: Vec<u64>,
    expected: MnistExpected,
}

#[derive(Deserialize)]
struct MnistExpected {
    samples: usize,
    inputs: usize,
    min_accuracy: f64,
    min_passing: usize,
}

fn mnist(f: Mnist) -> Outcome {
    let opts = IdxOptions {
        keep: f.keep,
        grid: f.grid,
        threshold: f.threshold,
        limit: Some(f.limit),
    };
    let data = parse_idx(MNIST_IMAGES, MNIST_LABELS, &opts).map_err(|e| e.to_string())?;
    expect("samples", data.len(), f.expected.samples)?;
    let n = data.samples[0].input.len();
    expect("inputs", n, f.expected.inputs)?;
    let v = Vocabulary::numbered("x", n).map_err(|e| e.to_string())?;
    let mut passing = 0;
    let mut sd_runs = 0;
    let mut accs = Vec::new();
    for &seed in &f.seeds {
        let cfg = AnnConfig {
            seed,
            epochs: f.epochs,
            ..AnnConfig::new(n, f.hidden.clone())
        };
        let model = init_model(&cfg).map_err(|e| e.to_string())?;
        let (_, run) = train(model, &data, &cfg, &v, UniverseMode::Observed).map_err(|e| e.to_string())?;
        let acc = run.stages.last().and_then(|s| s.accuracy).unwrap_or(0.0);
        accs.push(acc);
        if acc >= f.expected.min_accuracy {
            passing += 1;
        }
        if analyze_trajectory(&run).sd.holds {
            sd_runs += 1;
        }
    }
    if passing < f.expected.min_passing {
        return Err(format!("{passing}/{} seeds reach {}, accuracies {accs:?}", f.seeds.len(), f.expected.min_accuracy));
    }
    Ok(format!(
        "{passing}/{} seeds reach accuracy >= {}; SD held on {sd_runs} runs (reported only)",
        f.seeds.len(),
        f.expected.min_accuracy
    ))
}
