//! Brute-force verification of the AGM postulates (in world-set form) and of
//! the Darwiche–Pearl style constraints on ranking transitions.
//!
//! Exhaustive audits (up to three atoms) tabulate the operator once per
//! prior state and input, then check every `(K, φ, ψ)` triple on 64-bit
//! membership masks. Larger vocabularies are sampled with a seeded ChaCha8
//! stream; the seed is part of the report.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::epistemics::{EpistemicState, Ranking};
use crate::logic::{Universe, Vocabulary, WorldLabel, WorldSet};
use crate::operators::{
    dalal_preorder, dalal_revise, full_meet_contract, full_meet_revise, lex_revise,
    moderate_contract,
};

/// Largest vocabulary audited exhaustively.
pub const EXHAUSTIVE_MAX_ATOMS: usize = 3;
/// Largest vocabulary the sampled audit accepts.
pub const SAMPLED_MAX_ATOMS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AuditError {
    #[error("audits support 1 to {SAMPLED_MAX_ATOMS} atoms, got {0}")]
    UnsupportedSize(usize),
    #[error("expected witness does not violate {constraint}")]
    WitnessMismatch { constraint: String },
}

/// Revision operators with a registered id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RevisionOperator {
    FullMeet,
    Dalal,
    Lex,
}

impl RevisionOperator {
    pub const ALL: [RevisionOperator; 3] = [Self::FullMeet, Self::Dalal, Self::Lex];

    pub fn id(self) -> &'static str {
        match self {
            Self::FullMeet => "full-meet-revise",
            Self::Dalal => "dalal",
            Self::Lex => "lex",
        }
    }

    pub fn from_id(id: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|o| o.id() == id)
    }

    pub fn apply(self, s: &EpistemicState, phi: &WorldSet) -> WorldSet {
        match self {
            Self::FullMeet => full_meet_revise(s.belief(), phi).belief().clone(),
            Self::Dalal => dalal_revise(s.belief(), phi),
            Self::Lex => lex_revise(s, phi).belief().clone(),
        }
    }
}

/// Contraction operators with a registered id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ContractionOperator {
    FullMeet,
    Moderate,
}

impl ContractionOperator {
    pub const ALL: [ContractionOperator; 2] = [Self::FullMeet, Self::Moderate];

    pub fn id(self) -> &'static str {
        match self {
            Self::FullMeet => "full-meet-contract",
            Self::Moderate => "moderate",
        }
    }

    pub fn from_id(id: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|o| o.id() == id)
    }

    pub fn apply(self, s: &EpistemicState, phi: &WorldSet) -> WorldSet {
        match self {
            Self::FullMeet => full_meet_contract(s.belief(), phi).belief().clone(),
            Self::Moderate => moderate_contract(s, phi).belief().clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RevisionPostulate {
    Closure,
    Success,
    Inclusion,
    Vacuity,
    Consistency,
    Extensionality,
    Superexpansion,
    Subexpansion,
}

impl RevisionPostulate {
    pub const ALL: [RevisionPostulate; 8] = [
        Self::Closure,
        Self::Success,
        Self::Inclusion,
        Self::Vacuity,
        Self::Consistency,
        Self::Extensionality,
        Self::Superexpansion,
        Self::Subexpansion,
    ];

    pub fn id(self) -> &'static str {
        ["K*1", "K*2", "K*3", "K*4", "K*5", "K*6", "K*7", "K*8"][self as usize]
    }

    fn binary(self) -> bool {
        matches!(self, Self::Superexpansion | Self::Subexpansion)
    }

    fn holds_masks(self, k: u64, phi: u64, r_phi: u64, again: u64, psi: u64, r_phi_psi: u64) -> bool {
        let sub = |a: u64, b: u64| a & !b == 0;
        match self {
            Self::Closure => true,
            Self::Success => sub(r_phi, phi),
            Self::Inclusion => sub(k & phi, r_phi),
            Self::Vacuity => k & phi == 0 || sub(r_phi, k & phi),
            Self::Consistency => phi == 0 || r_phi != 0,
            Self::Extensionality => r_phi == again,
            Self::Superexpansion => sub(r_phi & psi, r_phi_psi),
            Self::Subexpansion => r_phi & psi == 0 || sub(r_phi_psi, r_phi & psi),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContractionPostulate {
    Closure,
    Inclusion,
    Vacuity,
    Success,
    Recovery,
    Extensionality,
    Conjunction,
    ConjunctiveInclusion,
}

impl ContractionPostulate {
    pub const ALL: [ContractionPostulate; 8] = [
        Self::Closure,
        Self::Inclusion,
        Self::Vacuity,
        Self::Success,
        Self::Recovery,
        Self::Extensionality,
        Self::Conjunction,
        Self::ConjunctiveInclusion,
    ];

    pub fn id(self) -> &'static str {
        ["K-1", "K-2", "K-3", "K-4", "K-5", "K-6", "K-7", "K-8"][self as usize]
    }

    fn binary(self) -> bool {
        matches!(self, Self::Conjunction | Self::ConjunctiveInclusion)
    }

    #[allow(clippy::too_many_arguments)]
    fn holds_masks(
        self,
        k: u64,
        all: u64,
        phi: u64,
        c_phi: u64,
        again: u64,
        c_psi: u64,
        c_phi_psi: u64,
    ) -> bool {
        let sub = |a: u64, b: u64| a & !b == 0;
        match self {
            Self::Closure => true,
            Self::Inclusion => sub(k, c_phi),
            Self::Vacuity => sub(k, phi) || c_phi == k,
            Self::Success => phi == all || c_phi & !phi & all != 0,
            Self::Recovery => !sub(k, phi) || sub(c_phi & phi, k),
            Self::Extensionality => c_phi == again,
            Self::Conjunction => sub(c_phi_psi, c_phi | c_psi),
            Self::ConjunctiveInclusion => sub(c_phi_psi, phi) || sub(c_phi, c_phi_psi),
        }
    }
}

/// Checks one revision postulate on one instance, directly on world sets.
/// `psi` is ignored by the unary postulates.
pub fn revision_postulate_holds(
    p: RevisionPostulate,
    op: &dyn Fn(&EpistemicState, &WorldSet) -> WorldSet,
    s: &EpistemicState,
    phi: &WorldSet,
    psi: &WorldSet,
) -> bool {
    let k = s.belief();
    let r = op(s, phi);
    match p {
        RevisionPostulate::Closure => true,
        RevisionPostulate::Success => r.is_subset(phi),
        RevisionPostulate::Inclusion => k.intersection(phi).is_subset(&r),
        RevisionPostulate::Vacuity => {
            let kp = k.intersection(phi);
            kp.is_empty() || r.is_subset(&kp)
        }
        RevisionPostulate::Consistency => phi.is_empty() || !r.is_empty(),
        RevisionPostulate::Extensionality => r == op(s, phi),
        RevisionPostulate::Superexpansion => {
            r.intersection(psi).is_subset(&op(s, &phi.intersection(psi)))
        }
        RevisionPostulate::Subexpansion => {
            let rp = r.intersection(psi);
            rp.is_empty() || op(s, &phi.intersection(psi)).is_subset(&rp)
        }
    }
}

/// Checks one contraction postulate on one instance, directly on world sets.
pub fn contraction_postulate_holds(
    p: ContractionPostulate,
    op: &dyn Fn(&EpistemicState, &WorldSet) -> WorldSet,
    s: &EpistemicState,
    phi: &WorldSet,
    psi: &WorldSet,
) -> bool {
    let k = s.belief();
    let c = op(s, phi);
    match p {
        ContractionPostulate::Closure => true,
        ContractionPostulate::Inclusion => k.is_subset(&c),
        ContractionPostulate::Vacuity => k.is_subset(phi) || c == *k,
        ContractionPostulate::Success => phi.is_all() || !c.is_subset(phi),
        ContractionPostulate::Recovery => !k.is_subset(phi) || c.intersection(phi).is_subset(k),
        ContractionPostulate::Extensionality => c == op(s, phi),
        ContractionPostulate::Conjunction => op(s, &phi.intersection(psi)).is_subset(&c.union(&op(s, psi))),
        ContractionPostulate::ConjunctiveInclusion => {
            let both = op(s, &phi.intersection(psi));
            both.is_subset(phi) || c.is_subset(&both)
        }
    }
}

/// A replayable failing instance, written with world labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub belief: Vec<WorldLabel>,
    pub ranking: Vec<Vec<WorldLabel>>,
    pub phi: Vec<WorldLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<Vec<WorldLabel>>,
    /// Offending world pair, for ranking constraints.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<[WorldLabel; 2]>,
}

impl Counterexample {
    fn new(vocab: &Vocabulary, s: &EpistemicState, phi: &WorldSet, psi: Option<&WorldSet>) -> Self {
        Counterexample {
            belief: s.belief().labels(vocab),
            ranking: s.ranking().to_layer_labels(vocab),
            phi: phi.labels(vocab),
            psi: psi.map(|p| p.labels(vocab)),
            witness: None,
        }
    }

    /// Rebuilds `(state, φ, ψ)`; `ψ` defaults to the empty set.
    pub fn to_instance(
        &self,
        universe: &Universe,
        vocab: &Vocabulary,
    ) -> Option<(EpistemicState, WorldSet, WorldSet)> {
        let belief = WorldSet::from_labels(universe, vocab, &self.belief)?;
        let ranking = Ranking::from_layer_labels(universe, vocab, &self.ranking).ok()?;
        let state = EpistemicState::new(belief, ranking).ok()?;
        let phi = WorldSet::from_labels(universe, vocab, &self.phi)?;
        let psi = match &self.psi {
            Some(p) => WorldSet::from_labels(universe, vocab, p)?,
            None => WorldSet::empty(universe),
        };
        Some((state, phi, psi))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub operator: String,
    pub n: usize,
    /// `exhaustive`, `sampled` or `scenario`.
    pub mode: String,
    pub seed: Option<u64>,
    pub instances: u64,
    pub checks: Vec<Check>,
}

impl AuditReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.holds)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AuditOptions {
    pub seed: u64,
    /// Number of sampled `(state, φ, ψ)` instances above three atoms.
    pub samples: usize,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            seed: 0,
            samples: 2000,
        }
    }
}

/// Every total preorder over a universe of at most 4 worlds, each paired
/// with its minimal layer as belief.
fn all_preorders(u: &Universe) -> Vec<EpistemicState> {
    let size = u.size();
    assert!(size <= 4);
    let mut out: Vec<Ranking> = Vec::new();
    let total = size.pow(size as u32);
    for code in 0..total {
        let ranks: Vec<u32> = (0..size)
            .map(|i| (code / size.pow(i as u32) % size) as u32)
            .collect();
        let rk = Ranking::from_ranks(u, &ranks);
        if !out.contains(&rk) {
            out.push(rk);
        }
    }
    out.into_iter().map(EpistemicState::from_ranking).collect()
}

/// Prior states used by the exhaustive audits: every consistent layered
/// state for up to two atoms; for three atoms, the full-meet and Dalal
/// rankings of every consistent belief. (The two-layer rankings faithful to
/// `K` coincide with its full-meet ranking.)
pub fn canonical_priors(u: &Universe) -> Vec<EpistemicState> {
    if u.size() <= 4 {
        return all_preorders(u);
    }
    let mut out = Vec::new();
    for mask in 1..(1u64 << u.size()) {
        let k = WorldSet::from_mask(u, mask);
        let fm = EpistemicState::full_meet(k.clone());
        let dalal = EpistemicState::new(k.clone(), dalal_preorder(&k).unwrap()).unwrap();
        if dalal != fm {
            out.push(dalal);
        }
        out.push(fm);
    }
    out
}

type Op<'a> = &'a dyn Fn(&EpistemicState, &WorldSet) -> WorldSet;

struct Tabulated {
    results: Vec<u64>,
    repeat: Vec<u64>,
}

fn tabulate(op: Op, s: &EpistemicState, sets: &[WorldSet]) -> Tabulated {
    let results = sets.iter().map(|phi| op(s, phi).mask()).collect();
    let repeat = sets.iter().map(|phi| op(s, phi).mask()).collect();
    Tabulated { results, repeat }
}

fn check_size(n: usize) -> Result<Universe, AuditError> {
    if n == 0 || n > SAMPLED_MAX_ATOMS {
        return Err(AuditError::UnsupportedSize(n));
    }
    Ok(Universe::full(n).expect("size checked"))
}

fn random_set(u: &Universe, rng: &mut ChaCha8Rng) -> WorldSet {
    let mut s = WorldSet::empty(u);
    let mut word = 0u64;
    for i in 0..u.size() {
        if i % 64 == 0 {
            word = rng.next_u64();
        }
        if word >> (i % 64) & 1 == 1 {
            s.insert(i);
        }
    }
    s
}

/// A consistent prior: full-meet, Dalal, or a random layering of `K`'s
/// complement into up to four extra layers.
fn random_state(u: &Universe, rng: &mut ChaCha8Rng) -> EpistemicState {
    let mut k = random_set(u, rng);
    if k.is_empty() {
        k.insert((rng.next_u64() % u.size() as u64) as usize);
    }
    match rng.next_u64() % 3 {
        0 => EpistemicState::full_meet(k),
        1 => {
            let rk = dalal_preorder(&k).unwrap();
            EpistemicState::new(k, rk).unwrap()
        }
        _ => {
            let ranks: Vec<u32> = (0..u.size())
                .map(|i| if k.contains(i) { 0 } else { 1 + (rng.next_u64() % 4) as u32 })
                .collect();
            EpistemicState::from_ranking(Ranking::from_ranks(u, &ranks))
        }
    }
}

struct Tally<P> {
    postulates: Vec<P>,
    failures: Vec<Option<Counterexample>>,
}

impl<P: Copy> Tally<P> {
    fn new(postulates: &[P]) -> Self {
        Tally {
            postulates: postulates.to_vec(),
            failures: vec![None; postulates.len()],
        }
    }

    fn report(self, id: impl Fn(P) -> &'static str, operator: &str, n: usize, mode: &str, seed: Option<u64>, instances: u64) -> AuditReport {
        let checks = self
            .postulates
            .iter()
            .zip(self.failures)
            .map(|(&p, cx)| Check {
                id: id(p).to_string(),
                holds: cx.is_none(),
                counterexample: cx,
            })
            .collect();
        AuditReport {
            operator: operator.to_string(),
            n,
            mode: mode.to_string(),
            seed,
            instances,
            checks,
        }
    }
}

/// Audits a revision operator against the world-set forms of the eight AGM
/// revision postulates. The first counterexample per postulate is kept.
pub fn audit_agm_revision(
    id: &str,
    op: Op,
    vocab: &Vocabulary,
    opts: AuditOptions,
) -> Result<AuditReport, AuditError> {
    let n = vocab.len();
    let u = check_size(n)?;
    let mut tally = Tally::new(&RevisionPostulate::ALL);

    if n <= EXHAUSTIVE_MAX_ATOMS {
        let sets: Vec<WorldSet> = (0..1u64 << u.size()).map(|m| WorldSet::from_mask(&u, m)).collect();
        let priors = canonical_priors(&u);
        for s in &priors {
            let t = tabulate(op, s, &sets);
            let k = s.belief().mask();
            for (pi, &p) in RevisionPostulate::ALL.iter().enumerate() {
                if tally.failures[pi].is_some() {
                    continue;
                }
                'phi: for phi in 0..sets.len() {
                    let (r, again) = (t.results[phi], t.repeat[phi]);
                    if !p.binary() {
                        if !p.holds_masks(k, phi as u64, r, again, 0, 0) {
                            tally.failures[pi] = Some(Counterexample::new(vocab, s, &sets[phi], None));
                            break 'phi;
                        }
                        continue;
                    }
                    for psi in 0..sets.len() {
                        let both = t.results[phi & psi];
                        if !p.holds_masks(k, phi as u64, r, again, psi as u64, both) {
                            tally.failures[pi] =
                                Some(Counterexample::new(vocab, s, &sets[phi], Some(&sets[psi])));
                            break 'phi;
                        }
                    }
                }
            }
        }
        let per_state = (sets.len() * sets.len()) as u64;
        return Ok(tally.report(RevisionPostulate::id, id, n, "exhaustive", None, priors.len() as u64 * per_state));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.samples {
        let s = random_state(&u, &mut rng);
        let phi = random_set(&u, &mut rng);
        let psi = random_set(&u, &mut rng);
        for (pi, &p) in RevisionPostulate::ALL.iter().enumerate() {
            if tally.failures[pi].is_none() && !revision_postulate_holds(p, op, &s, &phi, &psi) {
                tally.failures[pi] = Some(Counterexample::new(vocab, &s, &phi, p.binary().then_some(&psi)));
            }
        }
    }
    Ok(tally.report(RevisionPostulate::id, id, n, "sampled", Some(opts.seed), opts.samples as u64))
}

/// Audits a contraction operator against the world-set forms of the eight
/// AGM contraction postulates.
pub fn audit_agm_contraction(
    id: &str,
    op: Op,
    vocab: &Vocabulary,
    opts: AuditOptions,
) -> Result<AuditReport, AuditError> {
    let n = vocab.len();
    let u = check_size(n)?;
    let mut tally = Tally::new(&ContractionPostulate::ALL);

    if n <= EXHAUSTIVE_MAX_ATOMS {
        let sets: Vec<WorldSet> = (0..1u64 << u.size()).map(|m| WorldSet::from_mask(&u, m)).collect();
        let all = WorldSet::all(&u).mask();
        let priors = canonical_priors(&u);
        for s in &priors {
            let t = tabulate(op, s, &sets);
            let k = s.belief().mask();
            for (pi, &p) in ContractionPostulate::ALL.iter().enumerate() {
                if tally.failures[pi].is_some() {
                    continue;
                }
                'phi: for phi in 0..sets.len() {
                    let (c, again) = (t.results[phi], t.repeat[phi]);
                    if !p.binary() {
                        if !p.holds_masks(k, all, phi as u64, c, again, 0, 0) {
                            tally.failures[pi] = Some(Counterexample::new(vocab, s, &sets[phi], None));
                            break 'phi;
                        }
                        continue;
                    }
                    for psi in 0..sets.len() {
                        let (c_psi, both) = (t.results[psi], t.results[phi & psi]);
                        if !p.holds_masks(k, all, phi as u64, c, again, c_psi, both) {
                            tally.failures[pi] =
                                Some(Counterexample::new(vocab, s, &sets[phi], Some(&sets[psi])));
                            break 'phi;
                        }
                    }
                }
            }
        }
        let per_state = (sets.len() * sets.len()) as u64;
        return Ok(tally.report(ContractionPostulate::id, id, n, "exhaustive", None, priors.len() as u64 * per_state));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.samples {
        let s = random_state(&u, &mut rng);
        let phi = random_set(&u, &mut rng);
        let psi = random_set(&u, &mut rng);
        for (pi, &p) in ContractionPostulate::ALL.iter().enumerate() {
            if tally.failures[pi].is_none() && !contraction_postulate_holds(p, op, &s, &phi, &psi) {
                tally.failures[pi] = Some(Counterexample::new(vocab, &s, &phi, p.binary().then_some(&psi)));
            }
        }
    }
    Ok(tally.report(ContractionPostulate::id, id, n, "sampled", Some(opts.seed), opts.samples as u64))
}

/// Outcome of a pairwise constraint; `witness` is the first offending pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairCheck {
    pub holds: bool,
    pub witness: Option<(usize, usize)>,
}

impl PairCheck {
    fn scan(size: usize, mut ok: impl FnMut(usize, usize) -> bool) -> PairCheck {
        for r in 0..size {
            for r2 in 0..size {
                if !ok(r, r2) {
                    return PairCheck {
                        holds: false,
                        witness: Some((r, r2)),
                    };
                }
            }
        }
        PairCheck {
            holds: true,
            witness: None,
        }
    }
}

/// (R1)–(R4) and (LR) for a revision transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RevisionConstraints {
    pub r1: PairCheck,
    pub r2: PairCheck,
    pub r3: PairCheck,
    pub r4: PairCheck,
    pub lr: PairCheck,
}

impl RevisionConstraints {
    pub fn named(&self) -> [(&'static str, PairCheck); 5] {
        [("R1", self.r1), ("R2", self.r2), ("R3", self.r3), ("R4", self.r4), ("LR", self.lr)]
    }

    /// (R1)–(R4), i.e. the DP constraints proper.
    pub fn dp_holds(&self) -> bool {
        self.r1.holds && self.r2.holds && self.r3.holds && self.r4.holds
    }

    pub fn all_hold(&self) -> bool {
        self.dp_holds() && self.lr.holds
    }
}

/// (C1)–(C4) and (MC) for a contraction transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContractionConstraints {
    pub c1: PairCheck,
    pub c2: PairCheck,
    pub c3: PairCheck,
    pub c4: PairCheck,
    pub mc: PairCheck,
}

impl ContractionConstraints {
    pub fn named(&self) -> [(&'static str, PairCheck); 5] {
        [("C1", self.c1), ("C2", self.c2), ("C3", self.c3), ("C4", self.c4), ("MC", self.mc)]
    }

    pub fn dp_holds(&self) -> bool {
        self.c1.holds && self.c2.holds && self.c3.holds && self.c4.holds
    }

    pub fn all_hold(&self) -> bool {
        self.dp_holds() && self.mc.holds
    }
}

/// Evaluates (R1)–(R4) and (LR) over all world pairs.
pub fn check_r_constraints(
    prior: &EpistemicState,
    phi: &WorldSet,
    posterior: &EpistemicState,
) -> RevisionConstraints {
    let (a, b) = (prior.ranking(), posterior.ranking());
    let size = prior.universe().size();
    let inp = |r: usize| phi.contains(r);
    RevisionConstraints {
        r1: PairCheck::scan(size, |r, r2| !(inp(r) && inp(r2)) || a.le(r, r2) == b.le(r, r2)),
        r2: PairCheck::scan(size, |r, r2| inp(r) || inp(r2) || a.le(r, r2) == b.le(r, r2)),
        r3: PairCheck::scan(size, |r, r2| !(inp(r) && !inp(r2) && a.lt(r, r2)) || b.lt(r, r2)),
        r4: PairCheck::scan(size, |r, r2| !(inp(r) && !inp(r2) && a.le(r, r2)) || b.le(r, r2)),
        lr: PairCheck::scan(size, |r, r2| !(inp(r) && !inp(r2)) || b.lt(r, r2)),
    }
}

/// Evaluates (C1)–(C4) and (MC) over all world pairs.
pub fn check_c_constraints(
    prior: &EpistemicState,
    phi: &WorldSet,
    posterior: &EpistemicState,
) -> ContractionConstraints {
    let (a, b) = (prior.ranking(), posterior.ranking());
    let size = prior.universe().size();
    let inp = |r: usize| phi.contains(r);
    let kept = posterior.belief();
    ContractionConstraints {
        c1: PairCheck::scan(size, |r, r2| !(inp(r) && inp(r2)) || a.le(r, r2) == b.le(r, r2)),
        c2: PairCheck::scan(size, |r, r2| inp(r) || inp(r2) || a.le(r, r2) == b.le(r, r2)),
        c3: PairCheck::scan(size, |r, r2| !(!inp(r) && inp(r2) && a.lt(r, r2)) || b.lt(r, r2)),
        c4: PairCheck::scan(size, |r, r2| !(!inp(r) && inp(r2) && a.le(r, r2)) || b.le(r, r2)),
        mc: PairCheck::scan(size, |r, r2| {
            !(!inp(r) && inp(r2) && !kept.contains(r2)) || b.lt(r, r2)
        }),
    }
}

fn constraint_checks(
    vocab: &Vocabulary,
    prior: &EpistemicState,
    phi: &WorldSet,
    named: &[(&'static str, PairCheck)],
) -> Vec<Check> {
    let u = prior.universe();
    named
        .iter()
        .map(|&(id, pc)| Check {
            id: id.to_string(),
            holds: pc.holds,
            counterexample: pc.witness.map(|(r, r2)| Counterexample {
                witness: Some([u.label(vocab, r), u.label(vocab, r2)]),
                ..Counterexample::new(vocab, prior, phi, None)
            }),
        })
        .collect()
}

/// Full-meet revision of `K = {ab}` by `φ = ¬a ∧ b` over `{a, b}`: the
/// prior has `ab ≺ ab̄` while the posterior ties them, so (R2) fails on the
/// pair `(ab, ab̄)`. The report lists (R1)–(R4) and (LR) for the step, with
/// (R2) carrying exactly that pair.
pub fn reproduce_fullmeet_dp2() -> Result<AuditReport, AuditError> {
    let vocab = Vocabulary::new(["a", "b"]).expect("static vocabulary");
    let u = vocab.full_universe().expect("two atoms");
    let world = |s: &str| u.index_of(vocab.parse_world(s).unwrap()).unwrap();
    let (ab, a_nb, na_b) = (world("a=1 b=1"), world("a=1 b=0"), world("a=0 b=1"));

    let k = WorldSet::from_indices(&u, [ab]);
    let phi = WorldSet::from_indices(&u, [na_b]);
    let prior = EpistemicState::full_meet(k.clone());
    let post = full_meet_revise(&k, &phi);
    let constraints = check_r_constraints(&prior, &phi, &post);

    let (pa, pb) = (prior.ranking(), post.ranking());
    let pair_breaks_r2 = !phi.contains(ab)
        && !phi.contains(a_nb)
        && pa.lt(ab, a_nb)
        && pb.equiv(ab, a_nb);
    if !pair_breaks_r2 || constraints.r2.holds {
        return Err(AuditError::WitnessMismatch {
            constraint: "R2".into(),
        });
    }

    let mut checks = constraint_checks(&vocab, &prior, &phi, &constraints.named());
    let r2 = checks.iter_mut().find(|c| c.id == "R2").expect("R2 listed");
    if let Some(cx) = r2.counterexample.as_mut() {
        cx.witness = Some([u.label(&vocab, ab), u.label(&vocab, a_nb)]);
    }
    Ok(AuditReport {
        operator: RevisionOperator::FullMeet.id().to_string(),
        n: 2,
        mode: "scenario".into(),
        seed: None,
        instances: 1,
        checks,
    })
}

/// Report form of a single revision transition check.
pub fn revision_step_report(
    operator: &str,
    vocab: &Vocabulary,
    prior: &EpistemicState,
    phi: &WorldSet,
    posterior: &EpistemicState,
) -> AuditReport {
    let c = check_r_constraints(prior, phi, posterior);
    AuditReport {
        operator: operator.to_string(),
        n: vocab.len(),
        mode: "scenario".into(),
        seed: None,
        instances: 1,
        checks: constraint_checks(vocab, prior, phi, &c.named()),
    }
}
