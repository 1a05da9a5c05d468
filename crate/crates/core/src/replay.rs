//! Symbolic replay of belief-set sequences.
//!
//! Each transition `K_i → K_{i+1}` is reproduced as a lexicographic revision
//! by `φ₁` followed by a moderate contraction by `φ₂`, threading one ranking
//! through the whole sequence. The sequence must satisfy (SD); in forced mode
//! it is replayed anyway and mismatching steps are reported.
//!
//! Step indices are 0-based: step `i` goes from `seq[i]` to `seq[i + 1]`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::audit::{check_c_constraints, check_r_constraints};
use crate::epistemics::EpistemicState;
use crate::logic::{Vocabulary, WorldLabel, WorldSet};
use crate::metrics::{check_sequence, Condition, SequenceVerdict};
use crate::operators::{full_meet_contract, full_meet_revise, lex_revise, moderate_contract};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("a replay needs at least two belief sets, got {0}")]
    TooShort(usize),
    #[error("sequence violates (SD) at triple {0:?}")]
    SdViolation((usize, usize, usize)),
    #[error("belief sets in the sequence range over different universes")]
    UniverseMismatch,
}

/// `(φ₁, [¬φ₂])` for the transition `ki → kj`. Disjoint sets give
/// `φ₁ = kj` and a tautological `φ₂`; otherwise `φ₁ = ki ∩ kj` and
/// `[¬φ₂] = kj ∖ ki`.
pub fn construct_transition_inputs(ki: &WorldSet, kj: &WorldSet) -> (WorldSet, WorldSet) {
    if ki.is_disjoint(kj) {
        (kj.clone(), WorldSet::empty(kj.universe()))
    } else {
        (ki.intersection(kj), kj.difference(ki))
    }
}

/// `K₁` at rank 0, everything else tied above it.
pub fn initial_epistemic_state(k1: &WorldSet) -> EpistemicState {
    EpistemicState::full_meet(k1.clone())
}

fn union_upto(seq: &[WorldSet], i: usize) -> WorldSet {
    seq[1..=i]
        .iter()
        .fold(seq[0].clone(), |acc, k| acc.union(k))
}

/// Lemma A at step `i`: in the disjoint case, `[φ₁]` avoids `K_1 ∪ … ∪ K_i`.
pub fn verify_lemma_a(seq: &[WorldSet], i: usize) -> bool {
    let (ki, kj) = (&seq[i], &seq[i + 1]);
    if !ki.is_disjoint(kj) {
        return true;
    }
    let (phi1, _) = construct_transition_inputs(ki, kj);
    phi1.is_disjoint(&union_upto(seq, i))
}

/// Lemma B at step `i`: `[¬φ₂]` avoids `K_1 ∪ … ∪ K_i`.
pub fn verify_lemma_b(seq: &[WorldSet], i: usize) -> bool {
    let (_, not_phi2) = construct_transition_inputs(&seq[i], &seq[i + 1]);
    not_phi2.is_disjoint(&union_upto(seq, i))
}

/// Invariant (I): every world outside `seen` has the same rank.
fn outside_tied(s: &EpistemicState, seen: &WorldSet) -> bool {
    let rest = seen.complement();
    let mut outside = rest.iter().map(|w| s.ranking().rank(w));
    match outside.next() {
        None => true,
        Some(r) => outside.all(|x| x == r),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ReplayOptions {
    /// Replay even if (SD) fails.
    pub forced: bool,
    /// Also check (R1)–(R4)+(LR) on each revision and (C1)–(C4)+(MC) on
    /// each contraction.
    pub check_constraints: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplayStep {
    pub index: usize,
    pub phi1: WorldSet,
    /// `[¬φ₂]`.
    pub not_phi2: WorldSet,
    pub pre: EpistemicState,
    pub mid: EpistemicState,
    pub post: EpistemicState,
    pub matched: bool,
    /// (I) for the post state, over `K_1 ∪ … ∪ K_{i+1}`.
    pub invariant_ok: bool,
    pub lemma_a: bool,
    pub lemma_b: bool,
    /// Target belief set is empty.
    pub degenerate: bool,
    pub revision_constraints_ok: Option<bool>,
    pub contraction_constraints_ok: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplayTrace {
    pub sd: SequenceVerdict,
    pub initial: EpistemicState,
    pub steps: Vec<ReplayStep>,
    /// (I_1), …, (I_l).
    pub invariants: Vec<bool>,
    /// (Lemma A, Lemma B) per step.
    pub lemmas: Vec<(bool, bool)>,
}

impl ReplayTrace {
    pub fn all_matched(&self) -> bool {
        self.steps.iter().all(|s| s.matched)
    }

    /// Every step matched and every invariant and lemma check passed.
    pub fn all_ok(&self) -> bool {
        self.all_matched()
            && self.invariants.iter().all(|&b| b)
            && self.lemmas.iter().all(|&(a, b)| a && b)
            && self.steps.iter().all(|s| {
                s.revision_constraints_ok != Some(false) && s.contraction_constraints_ok != Some(false)
            })
    }

    pub fn to_record(&self, vocab: &Vocabulary) -> TraceRecord {
        TraceRecord {
            sd_holds: self.sd.holds,
            sd_violation: self.sd.violation,
            initial: self.initial.ranking().to_layer_labels(vocab),
            steps: self
                .steps
                .iter()
                .map(|s| StepRecord {
                    i: s.index,
                    phi1: s.phi1.labels(vocab),
                    notphi2: s.not_phi2.labels(vocab),
                    pre: s.pre.ranking().to_layer_labels(vocab),
                    mid: s.mid.ranking().to_layer_labels(vocab),
                    post: s.post.ranking().to_layer_labels(vocab),
                    result: s.post.belief().labels(vocab),
                    matched: s.matched,
                    invariant_ok: s.invariant_ok,
                    lemma_a: s.lemma_a,
                    lemma_b: s.lemma_b,
                    degenerate: s.degenerate,
                    revision_constraints_ok: s.revision_constraints_ok,
                    contraction_constraints_ok: s.contraction_constraints_ok,
                })
                .collect(),
        }
    }
}

/// Serialized form of a [`ReplayTrace`]; rankings are lists of layers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub sd_holds: bool,
    pub sd_violation: Option<(usize, usize, usize)>,
    pub initial: Vec<Vec<WorldLabel>>,
    pub steps: Vec<StepRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub i: usize,
    pub phi1: Vec<WorldLabel>,
    pub notphi2: Vec<WorldLabel>,
    pub pre: Vec<Vec<WorldLabel>>,
    pub mid: Vec<Vec<WorldLabel>>,
    pub post: Vec<Vec<WorldLabel>>,
    pub result: Vec<WorldLabel>,
    pub matched: bool,
    pub invariant_ok: bool,
    #[serde(rename = "lemmaA")]
    pub lemma_a: bool,
    #[serde(rename = "lemmaB")]
    pub lemma_b: bool,
    pub degenerate: bool,
    /// Present only when constraints were checked.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub revision_constraints_ok: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contraction_constraints_ok: Option<bool>,
}

/// Replays `seq` with lexicographic revision and moderate contraction. The
/// contraction uses the ranking produced by the revision, and its posterior
/// ranking becomes the prior of the next step.
pub fn replay_sequence(seq: &[WorldSet], opts: ReplayOptions) -> Result<ReplayTrace, ReplayError> {
    if seq.len() < 2 {
        return Err(ReplayError::TooShort(seq.len()));
    }
    let u = seq[0].universe();
    if seq.iter().any(|k| k.universe() != u) {
        return Err(ReplayError::UniverseMismatch);
    }
    let sd = check_sequence(seq, Condition::Sd).expect("SD is defined for every sequence");
    if let (false, Some(t)) = (opts.forced, sd.violation) {
        return Err(ReplayError::SdViolation(t));
    }

    let initial = initial_epistemic_state(&seq[0]);
    let mut seen = seq[0].clone();
    let mut invariants = vec![outside_tied(&initial, &seen)];
    let mut lemmas = Vec::with_capacity(seq.len() - 1);
    let mut steps = Vec::with_capacity(seq.len() - 1);
    let mut state = initial.clone();

    for i in 0..seq.len() - 1 {
        let (ki, kj) = (&seq[i], &seq[i + 1]);
        let (phi1, not_phi2) = construct_transition_inputs(ki, kj);
        let lemma_a = if ki.is_disjoint(kj) { phi1.is_disjoint(&seen) } else { true };
        let lemma_b = not_phi2.is_disjoint(&seen);

        let mid = lex_revise(&state, &phi1);
        let phi2 = not_phi2.complement();
        let post = moderate_contract(&mid, &phi2);

        seen = seen.union(kj);
        let invariant_ok = outside_tied(&post, &seen);
        let (rc, cc) = if opts.check_constraints {
            (
                Some(check_r_constraints(&state, &phi1, &mid).all_hold()),
                Some(check_c_constraints(&mid, &phi2, &post).all_hold()),
            )
        } else {
            (None, None)
        };

        invariants.push(invariant_ok);
        lemmas.push((lemma_a, lemma_b));
        steps.push(ReplayStep {
            index: i,
            matched: post.belief() == kj,
            phi1,
            not_phi2,
            pre: std::mem::replace(&mut state, post.clone()),
            mid,
            post,
            invariant_ok,
            lemma_a,
            lemma_b,
            degenerate: kj.is_empty(),
            revision_constraints_ok: rc,
            contraction_constraints_ok: cc,
        });
    }

    Ok(ReplayTrace {
        sd,
        initial,
        steps,
        invariants,
        lemmas,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullMeetStep {
    pub phi1: WorldSet,
    pub not_phi2: WorldSet,
    pub result: WorldSet,
}

/// One transition with the full-meet pair: revise `K₁` by `φ₁`, then
/// contract by `φ₂`.
pub fn fullmeet_step(k1: &WorldSet, k2: &WorldSet) -> FullMeetStep {
    let (phi1, not_phi2) = construct_transition_inputs(k1, k2);
    let revised = full_meet_revise(k1, &phi1);
    let result = full_meet_contract(revised.belief(), &not_phi2.complement())
        .belief()
        .clone();
    FullMeetStep {
        phi1,
        not_phi2,
        result,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{Universe, World};

    fn set(u: &Universe, idx: &[usize]) -> WorldSet {
        WorldSet::from_indices(u, idx.iter().copied())
    }

    fn five() -> Universe {
        Universe::observed(3, (0..5).map(World).collect()).unwrap()
    }

    const R1: usize = 0;
    const R2: usize = 1;
    const R3: usize = 2;
    const R4: usize = 3;
    const R5: usize = 4;

    #[test]
    fn transition_inputs() {
        let u = five();
        let (p1, n2) = construct_transition_inputs(&set(&u, &[R1]), &set(&u, &[R4, R5]));
        assert_eq!(p1, set(&u, &[R4, R5]));
        assert!(n2.is_empty());
        let (p1, n2) = construct_transition_inputs(&set(&u, &[R4, R5]), &set(&u, &[R2, R3, R4, R5]));
        assert_eq!(p1, set(&u, &[R4, R5]));
        assert_eq!(n2, set(&u, &[R2, R3]));
        let k = set(&u, &[R2, R4]);
        let (p1, n2) = construct_transition_inputs(&k, &k);
        assert_eq!(p1, k);
        assert!(n2.is_empty());
    }

    #[test]
    fn initial_states() {
        let u = five();
        let s = initial_epistemic_state(&set(&u, &[R1]));
        assert_eq!(s.ranking().layers(), vec![set(&u, &[R1]), set(&u, &[R2, R3, R4, R5])]);
        assert_eq!(initial_epistemic_state(&WorldSet::all(&u)).ranking().num_layers(), 1);
        assert_eq!(initial_epistemic_state(&WorldSet::empty(&u)).ranking().num_layers(), 1);
    }

    #[test]
    fn worked_example_replays() {
        let u = five();
        let seq = [set(&u, &[R1]), set(&u, &[R4, R5]), set(&u, &[R2, R3, R4, R5])];
        let t = replay_sequence(&seq, ReplayOptions { check_constraints: true, ..Default::default() }).unwrap();
        assert!(t.all_ok());
        assert_eq!(t.steps.len(), 2);
        let expected = vec![set(&u, &[R4, R5]), set(&u, &[R1]), set(&u, &[R2, R3])];
        assert_eq!(t.steps[0].mid.ranking().layers(), expected);
        assert_eq!(t.steps[0].post.ranking().layers(), expected);
        assert_eq!(t.steps[1].mid.ranking().layers(), expected);
        assert_eq!(t.lemmas, vec![(true, true), (true, true)]);
        assert!(verify_lemma_a(&seq, 0) && verify_lemma_b(&seq, 1));
    }

    #[test]
    fn planted_sd_violation_breaks_lemmas() {
        // r ∈ K1 ∩ (K3 ∖ K2)
        let u = Universe::full(2).unwrap();
        let seq = [set(&u, &[3]), set(&u, &[0]), set(&u, &[3])];
        assert!(!verify_lemma_a(&seq, 1));
        let seq_b = [set(&u, &[3]), set(&u, &[0, 1]), set(&u, &[0, 1, 3])];
        assert!(!verify_lemma_b(&seq_b, 1));
        assert!(matches!(
            replay_sequence(&seq, ReplayOptions::default()),
            Err(ReplayError::SdViolation((1, 2, 3)))
        ));
        let forced = replay_sequence(&seq, ReplayOptions { forced: true, ..Default::default() }).unwrap();
        assert!(!forced.sd.holds);
        assert!(!forced.lemmas[1].0);
    }

    #[test]
    fn constant_and_degenerate_sequences() {
        let u = Universe::full(2).unwrap();
        let k = set(&u, &[1, 2]);
        let t = replay_sequence(&[k.clone(), k.clone()], ReplayOptions::default()).unwrap();
        assert!(t.all_ok());
        assert_eq!(t.steps[0].post, t.initial);

        let t = replay_sequence(&[k.clone(), WorldSet::empty(&u)], ReplayOptions::default()).unwrap();
        assert!(t.all_matched());
        assert!(t.steps[0].degenerate);
        assert_eq!(t.steps[0].post.ranking(), t.initial.ranking());

        assert_eq!(replay_sequence(&[k], ReplayOptions::default()), Err(ReplayError::TooShort(1)));
    }

    #[test]
    fn fullmeet_single_steps() {
        let u = Universe::full(2).unwrap();
        let s = fullmeet_step(&set(&u, &[3]), &set(&u, &[2]));
        assert_eq!(s.result, set(&u, &[2]));
        let k = set(&u, &[0, 3]);
        assert_eq!(fullmeet_step(&k, &k).result, k);
        let u = five();
        let s = fullmeet_step(&set(&u, &[R4, R5]), &set(&u, &[R2, R3, R4, R5]));
        assert_eq!(s.result, set(&u, &[R2, R3, R4, R5]));
    }

    #[test]
    fn trace_record_serializes() {
        let u = five();
        let v = Vocabulary::new(["a", "b", "c"]).unwrap();
        let seq = [set(&u, &[R1]), set(&u, &[R4, R5])];
        let rec = replay_sequence(&seq, ReplayOptions::default()).unwrap().to_record(&v);
        let json = serde_json::to_value(&rec).unwrap();
        assert_eq!(json["steps"][0]["phi1"], serde_json::json!([3, 4]));
        assert_eq!(json["steps"][0]["lemmaA"], serde_json::json!(true));
        let back: TraceRecord = serde_json::from_value(json).unwrap();
        assert_eq!(back, rec);
    }
}
