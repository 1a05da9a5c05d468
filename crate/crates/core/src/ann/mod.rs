//! A small binary feed-forward network trained from scratch, the belief
//! sets its thresholded output induces, and the training trajectories those
//! belief sets form.

mod idx;
mod model;

pub use idx::{downsample, load_idx_dataset, parse_idx, IdxOptions, IMAGE_MAGIC, LABEL_MAGIC};
pub use model::{
    bce_logit, bce_logit_grad, binarize, gradient_check, init_model, sigmoid, Activation,
    AnnModel, Layer, FD_STEP, PROB_CLAMP,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{Formula, Universe, UniverseError, Vocabulary, World, WorldLabel, WorldSet};
use crate::logic::{FULL_UNIVERSE_MAX_ATOMS, MAX_ATOMS};
use crate::metrics::{check_sequence, Condition, SequenceVerdict};

#[derive(Debug, Error)]
pub enum AnnError {
    #[error("bad configuration: {0}")]
    BadConfig(String),
    #[error("input has {got} bits, the network expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("sample #{index} has label {label}; labels must be 0 or 1")]
    NonBinaryLabel { index: usize, label: u8 },
    #[error("full universe over {0} inputs is too large; use observed mode")]
    UniverseTooLarge(usize),
    #[error("input #{index} occurs twice in the observed universe")]
    DuplicateInput { index: usize },
    #[error("bad trajectory: {0}")]
    BadTrajectory(String),
    #[error("IDX file has magic {found:#010x}, expected {expected:#010x}")]
    BadMagic { expected: u32, found: u32 },
    #[error("IDX file is truncated: {0}")]
    TruncatedFile(String),
    #[error("{images} images but {labels} labels")]
    LabelMismatch { images: usize, labels: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum Optimizer {
    Sgd,
    Adam { beta1: f64, beta2: f64, eps: f64 },
}

impl Optimizer {
    pub const ADAM: Optimizer = Optimizer::Adam {
        beta1: 0.9,
        beta2: 0.999,
        eps: 1e-8,
    };
}

/// When a belief set is extracted. Training is full-batch, so one epoch is
/// one parameter update and both cadences give the same stages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Cadence {
    #[default]
    Step,
    Epoch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UniverseMode {
    Full,
    Observed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnConfig {
    pub n: usize,
    pub hidden: Vec<usize>,
    pub tau: f64,
    pub lr: f64,
    pub optimizer: Optimizer,
    pub epochs: usize,
    pub seed: u64,
    pub cadence: Cadence,
}

impl AnnConfig {
    /// Defaults: τ = 0.5, Adam(0.9, 0.999, 1e-8) at lr 1e-3, 2000 epochs,
    /// seed 0, a snapshot after every step.
    pub fn new(n: usize, hidden: Vec<usize>) -> Self {
        AnnConfig {
            n,
            hidden,
            tau: 0.5,
            lr: 1e-3,
            optimizer: Optimizer::ADAM,
            epochs: 2000,
            seed: 0,
            cadence: Cadence::Step,
        }
    }

    pub fn validate(&self) -> Result<(), AnnError> {
        let bad = |m: String| Err(AnnError::BadConfig(m));
        if self.n == 0 || self.n > MAX_ATOMS {
            return bad(format!("input size must be in 1..={MAX_ATOMS}, got {}", self.n));
        }
        if self.hidden.contains(&0) {
            return bad("hidden layers must be non-empty".into());
        }
        if !(0.0..=1.0).contains(&self.tau) {
            return bad(format!("threshold must lie in [0, 1], got {}", self.tau));
        }
        if !(self.lr.is_finite() && self.lr >= 0.0) {
            return bad(format!("learning rate must be finite and non-negative, got {}", self.lr));
        }
        if let Optimizer::Adam { beta1, beta2, eps } = self.optimizer {
            if !(0.0..1.0).contains(&beta1) || !(0.0..1.0).contains(&beta2) || eps.is_nan() || eps <= 0.0 {
                return bad("adam needs beta1, beta2 in [0, 1) and eps > 0".into());
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub input: Vec<bool>,
    pub label: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Dataset {
    pub samples: Vec<Sample>,
}

impl Dataset {
    /// The truth table of `f`: one sample per world, in world order.
    pub fn from_formula(f: &Formula, vocab: &Vocabulary) -> Result<Self, AnnError> {
        let n = vocab.len();
        if n > FULL_UNIVERSE_MAX_ATOMS {
            return Err(AnnError::UniverseTooLarge(n));
        }
        let samples = (0..1u128 << n)
            .map(|w| Sample {
                input: World(w).to_bits(n),
                label: u8::from(f.eval(World(w))),
            })
            .collect();
        Ok(Dataset { samples })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// The sample inputs as an observed universe, in sample order.
    pub fn observed_universe(&self) -> Result<Universe, AnnError> {
        let n = self.samples.first().map_or(0, |s| s.input.len());
        observed_universe(n, self.samples.iter().map(|s| s.input.as_slice()))
    }

    fn validate(&self, n: usize) -> Result<(), AnnError> {
        if self.samples.is_empty() {
            return Err(AnnError::BadConfig("dataset is empty".into()));
        }
        for (index, s) in self.samples.iter().enumerate() {
            if s.input.len() != n {
                return Err(AnnError::DimensionMismatch {
                    expected: n,
                    got: s.input.len(),
                });
            }
            if s.label > 1 {
                return Err(AnnError::NonBinaryLabel { index, label: s.label });
            }
        }
        Ok(())
    }
}

fn observed_universe<'a>(
    n: usize,
    inputs: impl Iterator<Item = &'a [bool]>,
) -> Result<Universe, AnnError> {
    let worlds: Vec<World> = inputs.map(World::from_bits).collect();
    Universe::observed(n, worlds).map_err(|e| match e {
        UniverseError::DuplicateInput { index } => AnnError::DuplicateInput { index },
        other => AnnError::BadConfig(other.to_string()),
    })
}

/// The worlds of `universe` the model classifies as 1.
pub fn extract_on(m: &AnnModel, universe: &Universe, tau: f64) -> Result<WorldSet, AnnError> {
    let n = universe.atoms();
    if n != m.inputs() {
        return Err(AnnError::DimensionMismatch {
            expected: m.inputs(),
            got: n,
        });
    }
    let mut out = WorldSet::empty(universe);
    for i in 0..universe.size() {
        let y = m.forward(&universe.world(i).to_bits(n))?;
        if binarize(y, tau) {
            out.insert(i);
        }
    }
    Ok(out)
}

/// `[ψ]` for the Boolean function the model computes, over all `2^n` inputs.
pub fn extract_belief_set(m: &AnnModel, vocab: &Vocabulary, tau: f64) -> Result<WorldSet, AnnError> {
    if vocab.len() > FULL_UNIVERSE_MAX_ATOMS {
        return Err(AnnError::UniverseTooLarge(vocab.len()));
    }
    let u = vocab
        .full_universe()
        .map_err(|_| AnnError::UniverseTooLarge(vocab.len()))?;
    extract_on(m, &u, tau)
}

/// The members of `universe` (duplicate-free) classified as 1.
pub fn extract_belief_set_observed(
    m: &AnnModel,
    universe: &[Vec<bool>],
    tau: f64,
) -> Result<WorldSet, AnnError> {
    let n = universe.first().map_or(m.inputs(), Vec::len);
    let u = observed_universe(n, universe.iter().map(Vec::as_slice))?;
    extract_on(m, &u, tau)
}

/// Fraction of samples whose thresholded output equals the label.
pub fn accuracy(m: &AnnModel, d: &Dataset, tau: f64) -> f64 {
    let hits = d
        .samples
        .iter()
        .filter(|s| m.forward(&s.input).is_ok_and(|y| binarize(y, tau) == (s.label == 1)))
        .count();
    hits as f64 / d.samples.len() as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stage {
    /// Parameter updates applied before this snapshot.
    pub step: usize,
    pub belief: WorldSet,
    pub accuracy: Option<f64>,
}

/// The belief sets a network passes through during training. Consecutive
/// equal beliefs are collapsed into the first stage that showed them.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub vocab: Vocabulary,
    pub universe: Universe,
    pub cadence: Cadence,
    pub stages: Vec<Stage>,
}

impl Trajectory {
    pub fn new(vocab: Vocabulary, universe: Universe, cadence: Cadence) -> Self {
        Trajectory {
            vocab,
            universe,
            cadence,
            stages: Vec::new(),
        }
    }

    pub fn mode(&self) -> UniverseMode {
        if self.universe.is_full() {
            UniverseMode::Full
        } else {
            UniverseMode::Observed
        }
    }

    /// Appends a snapshot unless its belief equals the last one. Steps must
    /// increase.
    pub fn record(&mut self, step: usize, belief: WorldSet, accuracy: Option<f64>) -> bool {
        if let Some(last) = self.stages.last() {
            assert!(step > last.step, "stage steps must increase");
            if last.belief == belief {
                return false;
            }
        }
        self.stages.push(Stage {
            step,
            belief,
            accuracy,
        });
        true
    }

    pub fn beliefs(&self) -> Vec<WorldSet> {
        self.stages.iter().map(|s| s.belief.clone()).collect()
    }

    pub fn to_record(&self) -> TrajectoryRecord {
        let n = self.vocab.len();
        TrajectoryRecord {
            vocabulary: self.vocab.atoms().to_vec(),
            mode: self.mode(),
            cadence: self.cadence,
            universe: (!self.universe.is_full()).then(|| {
                self.universe
                    .worlds()
                    .map(|w| w.to_bits(n).iter().map(|&b| if b { '1' } else { '0' }).collect())
                    .collect()
            }),
            stages: self
                .stages
                .iter()
                .map(|s| StageRecord {
                    step: s.step,
                    worlds: s.belief.labels(&self.vocab),
                    accuracy: s.accuracy,
                })
                .collect(),
        }
    }

    pub fn from_record(r: &TrajectoryRecord) -> Result<Self, AnnError> {
        let bad = |m: String| AnnError::BadTrajectory(m);
        let vocab = Vocabulary::new(r.vocabulary.iter().cloned()).map_err(|e| bad(e.to_string()))?;
        let n = vocab.len();
        let universe = match (r.mode, &r.universe) {
            (UniverseMode::Full, _) => vocab.full_universe().map_err(|e| bad(e.to_string()))?,
            (UniverseMode::Observed, Some(rows)) => {
                let bits = rows
                    .iter()
                    .map(|row| {
                        if row.len() != n || row.chars().any(|c| c != '0' && c != '1') {
                            return Err(bad(format!("universe row `{row}` is not a {n}-bit string")));
                        }
                        Ok(row.chars().map(|c| c == '1').collect::<Vec<bool>>())
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                observed_universe(n, bits.iter().map(Vec::as_slice))?
            }
            (UniverseMode::Observed, None) => {
                return Err(bad("observed mode needs the universe rows".into()))
            }
        };
        let mut t = Trajectory::new(vocab, universe, r.cadence);
        for s in &r.stages {
            if t.stages.last().is_some_and(|l| l.step >= s.step) {
                return Err(bad(format!("stage steps must increase (at step {})", s.step)));
            }
            let mut belief = WorldSet::empty(&t.universe);
            for l in &s.worlds {
                let i = t
                    .universe
                    .index_of_label(&t.vocab, l)
                    .ok_or_else(|| bad(format!("unknown world `{l}`")))?;
                belief.insert(i);
            }
            t.record(s.step, belief, s.accuracy);
        }
        Ok(t)
    }
}

/// Serialized trajectory. In observed mode `universe` lists the sample
/// inputs as bit strings (atom 1 first) and worlds are sample indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub vocabulary: Vec<String>,
    pub mode: UniverseMode,
    #[serde(default)]
    pub cadence: Cadence,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub universe: Option<Vec<String>>,
    pub stages: Vec<StageRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub step: usize,
    pub worlds: Vec<WorldLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub accuracy: Option<f64>,
}

/// Full-batch optimizer state over a model and dataset.
pub struct Trainer<'a> {
    model: AnnModel,
    data: &'a Dataset,
    cfg: AnnConfig,
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
}

impl<'a> Trainer<'a> {
    pub fn new(model: AnnModel, data: &'a Dataset, cfg: &AnnConfig) -> Result<Self, AnnError> {
        cfg.validate()?;
        if model.inputs() != cfg.n {
            return Err(AnnError::BadConfig(format!(
                "model takes {} inputs, config says {}",
                model.inputs(),
                cfg.n
            )));
        }
        data.validate(cfg.n)?;
        let p = model.num_parameters();
        Ok(Trainer {
            model,
            data,
            cfg: cfg.clone(),
            m: vec![0.0; p],
            v: vec![0.0; p],
            t: 0,
        })
    }

    pub fn model(&self) -> &AnnModel {
        &self.model
    }

    pub fn into_model(self) -> AnnModel {
        self.model
    }

    pub fn loss(&self) -> f64 {
        self.model.loss(self.data)
    }

    /// One full-batch update.
    pub fn step(&mut self) {
        let g = self.model.gradient(self.data);
        let mut p = self.model.parameters();
        let lr = self.cfg.lr;
        match self.cfg.optimizer {
            Optimizer::Sgd => {
                for (w, gk) in p.iter_mut().zip(&g) {
                    *w -= lr * gk;
                }
            }
            Optimizer::Adam { beta1, beta2, eps } => {
                self.t += 1;
                let c1 = 1.0 - beta1.powi(self.t);
                let c2 = 1.0 - beta2.powi(self.t);
                for k in 0..p.len() {
                    self.m[k] = beta1 * self.m[k] + (1.0 - beta1) * g[k];
                    self.v[k] = beta2 * self.v[k] + (1.0 - beta2) * g[k] * g[k];
                    let mh = self.m[k] / c1;
                    let vh = self.v[k] / c2;
                    p[k] -= lr * mh / (vh.sqrt() + eps);
                }
            }
        }
        self.model.set_parameters(&p);
    }
}

/// Trains for `cfg.epochs` full-batch updates, snapshotting the extracted
/// belief set and accuracy before the first update and after each one.
///
/// In full mode the belief ranges over all `2^n` inputs of `vocab`; in
/// observed mode over the dataset inputs.
pub fn train(
    model: AnnModel,
    data: &Dataset,
    cfg: &AnnConfig,
    vocab: &Vocabulary,
    mode: UniverseMode,
) -> Result<(AnnModel, Trajectory), AnnError> {
    if vocab.len() != cfg.n {
        return Err(AnnError::BadConfig(format!(
            "vocabulary has {} atoms, config says {}",
            vocab.len(),
            cfg.n
        )));
    }
    let mut trainer = Trainer::new(model, data, cfg)?;
    let universe = match mode {
        UniverseMode::Full => {
            if cfg.n > FULL_UNIVERSE_MAX_ATOMS {
                return Err(AnnError::UniverseTooLarge(cfg.n));
            }
            vocab.full_universe().expect("size checked")
        }
        UniverseMode::Observed => data.observed_universe()?,
    };
    let mut traj = Trajectory::new(vocab.clone(), universe, cfg.cadence);
    let snap = |m: &AnnModel, traj: &mut Trajectory, step: usize| -> Result<(), AnnError> {
        let belief = extract_on(m, &traj.universe, cfg.tau)?;
        traj.record(step, belief, Some(accuracy(m, data, cfg.tau)));
        Ok(())
    };
    snap(trainer.model(), &mut traj, 0)?;
    for step in 1..=cfg.epochs {
        trainer.step();
        snap(trainer.model(), &mut traj, step)?;
    }
    Ok((trainer.into_model(), traj))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryAnalysis {
    pub sd: SequenceVerdict,
    pub db: SequenceVerdict,
    /// `None` when some stage is inconsistent.
    pub da: Option<SequenceVerdict>,
}

pub fn analyze_trajectory(t: &Trajectory) -> TrajectoryAnalysis {
    let seq = t.beliefs();
    let run = |c| check_sequence(&seq, c);
    TrajectoryAnalysis {
        sd: run(Condition::Sd).expect("SD is total"),
        db: run(Condition::Db).expect("DB is total"),
        da: run(Condition::Da).ok(),
    }
}

#[cfg(test)]
mod tests;
