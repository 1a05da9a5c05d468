use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use smallvec::{smallvec, SmallVec};
use thiserror::Error;

use super::{Vocabulary, World, MAX_ATOMS};

/// Largest vocabulary for which all `2^n` worlds are enumerated.
pub const FULL_UNIVERSE_MAX_ATOMS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UniverseError {
    #[error("full universe over {0} atoms is too large (max {FULL_UNIVERSE_MAX_ATOMS}); use an observed universe")]
    TooLarge(usize),
    #[error("observed universe needs at least one atom and at most {MAX_ATOMS}, got {0}")]
    BadWidth(usize),
    #[error("observed universe contains input #{index} twice")]
    DuplicateInput { index: usize },
    #[error("world {0:#x} does not fit the universe")]
    OutOfRange(u128),
}

#[derive(Debug)]
struct Observed {
    n: usize,
    worlds: Vec<World>,
    index: HashMap<World, usize>,
}

/// The set of worlds that world sets range over: every assignment (full
/// mode), or an explicit list of observed assignments.
///
/// Worlds are addressed by a dense index. In full mode the index of a world
/// is its bit pattern; in observed mode it is its position in the list.
#[derive(Debug, Clone)]
pub enum Universe {
    Full { n: usize },
    Observed(Arc<ObservedHandle>),
}

/// Opaque shared storage of an observed universe.
#[derive(Debug)]
pub struct ObservedHandle(Observed);

impl PartialEq for Universe {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Universe::Full { n: a }, Universe::Full { n: b }) => a == b,
            (Universe::Observed(a), Universe::Observed(b)) => {
                Arc::ptr_eq(a, b) || (a.0.n == b.0.n && a.0.worlds == b.0.worlds)
            }
            _ => false,
        }
    }
}

impl Eq for Universe {}

impl Hash for Universe {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.is_full().hash(state);
        self.atoms().hash(state);
        self.size().hash(state);
    }
}

impl Universe {
    pub fn full(n: usize) -> Result<Self, UniverseError> {
        if n == 0 || n > FULL_UNIVERSE_MAX_ATOMS {
            return Err(UniverseError::TooLarge(n));
        }
        Ok(Universe::Full { n })
    }

    /// An observed universe; `worlds` must be duplicate-free.
    pub fn observed(n: usize, worlds: Vec<World>) -> Result<Self, UniverseError> {
        if n == 0 || n > MAX_ATOMS {
            return Err(UniverseError::BadWidth(n));
        }
        let mut index = HashMap::with_capacity(worlds.len());
        for (i, &w) in worlds.iter().enumerate() {
            if n < MAX_ATOMS && w.0 >> n != 0 {
                return Err(UniverseError::OutOfRange(w.0));
            }
            if index.insert(w, i).is_some() {
                return Err(UniverseError::DuplicateInput { index: i });
            }
        }
        Ok(Universe::Observed(Arc::new(ObservedHandle(Observed { n, worlds, index }))))
    }

    pub fn is_full(&self) -> bool {
        matches!(self, Universe::Full { .. })
    }

    /// Number of atoms.
    pub fn atoms(&self) -> usize {
        match self {
            Universe::Full { n } => *n,
            Universe::Observed(o) => o.0.n,
        }
    }

    /// Number of worlds.
    pub fn size(&self) -> usize {
        match self {
            Universe::Full { n } => 1 << n,
            Universe::Observed(o) => o.0.worlds.len(),
        }
    }

    #[inline]
    pub fn world(&self, index: usize) -> World {
        match self {
            Universe::Full { .. } => World(index as u128),
            Universe::Observed(o) => o.0.worlds[index],
        }
    }

    pub fn index_of(&self, w: World) -> Option<usize> {
        match self {
            Universe::Full { n } => (w.0 >> n == 0).then_some(w.0 as usize),
            Universe::Observed(o) => o.0.index.get(&w).copied(),
        }
    }

    pub fn worlds(&self) -> impl Iterator<Item = World> + '_ {
        (0..self.size()).map(move |i| self.world(i))
    }

    /// Label used in JSON and text output: `a=1 b=0 …` in full mode, the
    /// sample index in observed mode.
    pub fn label(&self, vocab: &Vocabulary, index: usize) -> WorldLabel {
        match self {
            Universe::Full { .. } => WorldLabel::Assignment(vocab.format_world(self.world(index))),
            Universe::Observed(_) => WorldLabel::Sample(index),
        }
    }

    pub fn index_of_label(&self, vocab: &Vocabulary, label: &WorldLabel) -> Option<usize> {
        match (self, label) {
            (Universe::Full { .. }, WorldLabel::Assignment(s)) => {
                vocab.parse_world(s).ok().and_then(|w| self.index_of(w))
            }
            (Universe::Observed(_), WorldLabel::Sample(i)) => (*i < self.size()).then_some(*i),
            _ => None,
        }
    }
}

/// How a world is written in serialized output.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(untagged)]
pub enum WorldLabel {
    Assignment(String),
    Sample(usize),
}

impl fmt::Display for WorldLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WorldLabel::Assignment(s) => f.write_str(s),
            WorldLabel::Sample(i) => write!(f, "#{i}"),
        }
    }
}

type Words = SmallVec<[u64; 1]>;

/// A subset of a [`Universe`], stored as a bitset over world indices.
///
/// Binary set operations require both operands to share a universe and
/// panic otherwise.
#[derive(Clone)]
pub struct WorldSet {
    universe: Universe,
    bits: Words,
}

fn word_count(size: usize) -> usize {
    size.div_ceil(64).max(1)
}

impl WorldSet {
    pub fn empty(universe: &Universe) -> Self {
        WorldSet {
            universe: universe.clone(),
            bits: smallvec![0; word_count(universe.size())],
        }
    }

    pub fn all(universe: &Universe) -> Self {
        let mut s = Self::empty(universe);
        for w in s.bits.iter_mut() {
            *w = u64::MAX;
        }
        s.trim();
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: &Universe, indices: I) -> Self {
        let mut s = Self::empty(universe);
        for i in indices {
            s.insert(i);
        }
        s
    }

    /// Worlds not in the universe are rejected.
    pub fn from_worlds<I: IntoIterator<Item = World>>(
        universe: &Universe,
        worlds: I,
    ) -> Result<Self, UniverseError> {
        let mut s = Self::empty(universe);
        for w in worlds {
            let i = universe.index_of(w).ok_or(UniverseError::OutOfRange(w.0))?;
            s.insert(i);
        }
        Ok(s)
    }

    /// Bitmask constructor for universes of at most 64 worlds.
    pub fn from_mask(universe: &Universe, mask: u64) -> Self {
        assert!(universe.size() <= 64, "from_mask needs a universe of at most 64 worlds");
        let mut s = Self::empty(universe);
        s.bits[0] = mask;
        s.trim();
        s
    }

    /// Low 64 bits of the membership mask.
    pub fn mask(&self) -> u64 {
        self.bits[0]
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    fn trim(&mut self) {
        let size = self.universe.size();
        let rem = size % 64;
        if rem != 0 {
            let last = self.bits.len() - 1;
            self.bits[last] &= (1u64 << rem) - 1;
        }
    }

    #[inline]
    pub fn contains(&self, index: usize) -> bool {
        index < self.universe.size() && self.bits[index / 64] >> (index % 64) & 1 == 1
    }

    pub fn contains_world(&self, w: World) -> bool {
        self.universe.index_of(w).is_some_and(|i| self.contains(i))
    }

    #[inline]
    pub fn insert(&mut self, index: usize) {
        assert!(index < self.universe.size(), "world index {index} outside universe");
        self.bits[index / 64] |= 1 << (index % 64);
    }

    pub fn remove(&mut self, index: usize) {
        if index < self.universe.size() {
            self.bits[index / 64] &= !(1 << (index % 64));
        }
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn is_all(&self) -> bool {
        self.len() == self.universe.size()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + t)
                }
            })
        })
    }

    pub fn worlds(&self) -> impl Iterator<Item = World> + '_ {
        self.iter().map(|i| self.universe.world(i))
    }

    fn check_same(&self, other: &WorldSet) {
        assert!(
            self.universe == other.universe,
            "world sets belong to different universes"
        );
    }

    fn zip_with(&self, other: &WorldSet, f: impl Fn(u64, u64) -> u64) -> WorldSet {
        self.check_same(other);
        WorldSet {
            universe: self.universe.clone(),
            bits: self.bits.iter().zip(&other.bits).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn union(&self, other: &WorldSet) -> WorldSet {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &WorldSet) -> WorldSet {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &WorldSet) -> WorldSet {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn symmetric_difference(&self, other: &WorldSet) -> WorldSet {
        self.zip_with(other, |a, b| a ^ b)
    }

    pub fn complement(&self) -> WorldSet {
        let mut s = WorldSet {
            universe: self.universe.clone(),
            bits: self.bits.iter().map(|&w| !w).collect(),
        };
        s.trim();
        s
    }

    pub fn is_subset(&self, other: &WorldSet) -> bool {
        self.check_same(other);
        self.bits.iter().zip(&other.bits).all(|(&a, &b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &WorldSet) -> bool {
        self.check_same(other);
        self.bits.iter().zip(&other.bits).all(|(&a, &b)| a & b == 0)
    }

    pub fn intersects(&self, other: &WorldSet) -> bool {
        !self.is_disjoint(other)
    }

    pub fn labels(&self, vocab: &Vocabulary) -> Vec<WorldLabel> {
        self.iter().map(|i| self.universe.label(vocab, i)).collect()
    }

    pub fn from_labels(
        universe: &Universe,
        vocab: &Vocabulary,
        labels: &[WorldLabel],
    ) -> Option<WorldSet> {
        let mut s = WorldSet::empty(universe);
        for l in labels {
            s.insert(universe.index_of_label(vocab, l)?);
        }
        Some(s)
    }

    /// Canonical DNF: one conjunction of literals per member world, atoms in
    /// vocabulary order. The empty set prints as `false`.
    pub fn to_dnf(&self, vocab: &Vocabulary) -> String {
        let n = vocab.len();
        let disjuncts: Vec<String> = self
            .worlds()
            .map(|w| {
                (0..n)
                    .map(|i| {
                        let a = &vocab.atoms()[i];
                        if w.get(i) {
                            a.clone()
                        } else {
                            format!("!{a}")
                        }
                    })
                    .collect::<Vec<_>>()
                    .join(" & ")
            })
            .collect();
        match disjuncts.len() {
            0 => "false".to_string(),
            1 => disjuncts.into_iter().next().unwrap(),
            _ if n == 1 => disjuncts.join(" | "),
            _ => disjuncts
                .iter()
                .map(|d| format!("({d})"))
                .collect::<Vec<_>>()
                .join(" | "),
        }
    }
}

impl PartialEq for WorldSet {
    fn eq(&self, other: &Self) -> bool {
        self.universe == other.universe && self.bits == other.bits
    }
}

impl Eq for WorldSet {}

impl Hash for WorldSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.universe.size().hash(state);
        self.bits.hash(state);
    }
}

impl fmt::Debug for WorldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
