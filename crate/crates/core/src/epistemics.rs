//! Total preorders over worlds (as normalized rank maps), faithfulness, and
//! the generic minimal-world revision and contraction engines.

use smallvec::SmallVec;
use thiserror::Error;

use crate::logic::{Universe, Vocabulary, WorldLabel, WorldSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RankingError {
    #[error("layers do not partition the universe: {0}")]
    NotAPartition(String),
    #[error("unknown world `{0}` in ranking")]
    UnknownWorld(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateError {
    #[error("ranking is not faithful to the belief set: its minimal layer differs")]
    NotFaithful,
    #[error("belief and ranking range over different universes")]
    UniverseMismatch,
}

type Ranks = SmallVec<[u32; 16]>;

/// A total preorder over a universe: `r ⪯ r'` iff `rank(r) <= rank(r')`.
///
/// Ranks are always normalized to `0..k` with every value in that range in
/// use, so two rankings are equal iff they encode the same preorder.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ranking {
    universe: Universe,
    ranks: Ranks,
}

impl Ranking {
    pub fn uniform(universe: &Universe) -> Self {
        Ranking {
            universe: universe.clone(),
            ranks: SmallVec::from_elem(0, universe.size()),
        }
    }

    /// Ranks worlds by ascending `key`; equal keys become ties.
    pub fn from_keys<K: Ord + Copy>(universe: &Universe, key: impl Fn(usize) -> K) -> Self {
        let keys: SmallVec<[K; 16]> = (0..universe.size()).map(key).collect();
        let mut distinct = keys.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let ranks = keys
            .iter()
            .map(|k| distinct.binary_search(k).unwrap() as u32)
            .collect();
        Ranking {
            universe: universe.clone(),
            ranks,
        }
    }

    /// Normalizes an arbitrary rank vector indexed by world.
    pub fn from_ranks(universe: &Universe, ranks: &[u32]) -> Self {
        assert_eq!(ranks.len(), universe.size(), "one rank per world");
        Self::from_keys(universe, |i| ranks[i])
    }

    /// Layer `i` gets rank `i`. Layers must be non-empty, pairwise disjoint
    /// and cover the universe.
    pub fn from_layers(universe: &Universe, layers: &[WorldSet]) -> Result<Self, RankingError> {
        let mut seen = WorldSet::empty(universe);
        let mut ranks: Ranks = SmallVec::from_elem(0, universe.size());
        for (i, layer) in layers.iter().enumerate() {
            if layer.universe() != universe {
                return Err(RankingError::NotAPartition(format!(
                    "layer {i} belongs to another universe"
                )));
            }
            if layer.is_empty() {
                return Err(RankingError::NotAPartition(format!("layer {i} is empty")));
            }
            if layer.intersects(&seen) {
                return Err(RankingError::NotAPartition(format!(
                    "layer {i} repeats a world"
                )));
            }
            seen = seen.union(layer);
            for w in layer.iter() {
                ranks[w] = i as u32;
            }
        }
        if !seen.is_all() {
            return Err(RankingError::NotAPartition(format!(
                "{} worlds are not ranked",
                universe.size() - seen.len()
            )));
        }
        Ok(Ranking {
            universe: universe.clone(),
            ranks,
        })
    }

    /// `K` at rank 0 and every other world tied at rank 1; uniform when `K`
    /// is empty or the whole universe.
    pub fn full_meet(k: &WorldSet) -> Self {
        Self::from_keys(k.universe(), |i| !k.contains(i))
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    #[inline]
    pub fn rank(&self, world: usize) -> u32 {
        self.ranks[world]
    }

    pub fn ranks(&self) -> &[u32] {
        &self.ranks
    }

    pub fn num_layers(&self) -> usize {
        self.ranks.iter().max().map_or(0, |&m| m as usize + 1)
    }

    pub fn layer(&self, rank: u32) -> WorldSet {
        WorldSet::from_indices(
            &self.universe,
            (0..self.ranks.len()).filter(|&i| self.ranks[i] == rank),
        )
    }

    pub fn layers(&self) -> Vec<WorldSet> {
        (0..self.num_layers() as u32).map(|r| self.layer(r)).collect()
    }

    /// `min(set, ⪯)`: the members of `set` of least rank.
    pub fn minimal(&self, set: &WorldSet) -> WorldSet {
        let Some(best) = set.iter().map(|i| self.ranks[i]).min() else {
            return WorldSet::empty(&self.universe);
        };
        WorldSet::from_indices(&self.universe, set.iter().filter(|&i| self.ranks[i] == best))
    }

    #[inline]
    pub fn le(&self, r: usize, r2: usize) -> bool {
        self.ranks[r] <= self.ranks[r2]
    }

    #[inline]
    pub fn lt(&self, r: usize, r2: usize) -> bool {
        self.ranks[r] < self.ranks[r2]
    }

    #[inline]
    pub fn equiv(&self, r: usize, r2: usize) -> bool {
        self.ranks[r] == self.ranks[r2]
    }

    /// Layers as lists of world labels, most plausible first.
    pub fn to_layer_labels(&self, vocab: &Vocabulary) -> Vec<Vec<WorldLabel>> {
        self.layers().iter().map(|l| l.labels(vocab)).collect()
    }

    pub fn from_layer_labels(
        universe: &Universe,
        vocab: &Vocabulary,
        layers: &[Vec<WorldLabel>],
    ) -> Result<Self, RankingError> {
        let sets = layers
            .iter()
            .map(|layer| {
                let mut s = WorldSet::empty(universe);
                for l in layer {
                    let i = universe
                        .index_of_label(vocab, l)
                        .ok_or_else(|| RankingError::UnknownWorld(l.to_string()))?;
                    s.insert(i);
                }
                Ok(s)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_layers(universe, &sets)
    }
}

/// True iff `k` is empty or the rank-0 layer of `rk` is exactly `k`.
pub fn is_faithful(rk: &Ranking, k: &WorldSet) -> bool {
    k.is_empty() || rk.layer(0) == *k
}

/// A belief set together with a faithful plausibility preorder.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EpistemicState {
    belief: WorldSet,
    ranking: Ranking,
}

impl EpistemicState {
    pub fn new(belief: WorldSet, ranking: Ranking) -> Result<Self, StateError> {
        if belief.universe() != ranking.universe() {
            return Err(StateError::UniverseMismatch);
        }
        if !is_faithful(&ranking, &belief) {
            return Err(StateError::NotFaithful);
        }
        Ok(EpistemicState { belief, ranking })
    }

    /// The state whose ranking is read off the belief: minimal layer `K`,
    /// all other worlds tied. An empty belief gets the uniform ranking.
    pub fn full_meet(belief: WorldSet) -> Self {
        let ranking = Ranking::full_meet(&belief);
        EpistemicState { belief, ranking }
    }

    /// The state whose belief is the rank-0 layer of `ranking`.
    pub fn from_ranking(ranking: Ranking) -> Self {
        EpistemicState {
            belief: ranking.layer(0),
            ranking,
        }
    }

    pub(crate) fn from_parts_unchecked(belief: WorldSet, ranking: Ranking) -> Self {
        debug_assert!(is_faithful(&ranking, &belief));
        EpistemicState { belief, ranking }
    }

    pub fn belief(&self) -> &WorldSet {
        &self.belief
    }

    pub fn ranking(&self) -> &Ranking {
        &self.ranking
    }

    pub fn universe(&self) -> &Universe {
        self.belief.universe()
    }

    pub fn into_parts(self) -> (WorldSet, Ranking) {
        (self.belief, self.ranking)
    }
}

/// Revision via minimal worlds: `min([φ], ⪯)`.
pub fn revise_r(s: &EpistemicState, phi: &WorldSet) -> WorldSet {
    s.ranking.minimal(phi)
}

/// Contraction via minimal worlds: `[K] ∪ min([¬φ], ⪯)`.
pub fn contract_c(s: &EpistemicState, phi: &WorldSet) -> WorldSet {
    s.belief.union(&s.ranking.minimal(&phi.complement()))
}
