//! Concrete belief-change operators: expansion, full-meet revision and
//! contraction, Dalal revision, lexicographic revision and moderate
//! contraction.

use std::collections::VecDeque;

use thiserror::Error;

use crate::epistemics::{contract_c, revise_r, EpistemicState, Ranking};
use crate::logic::{Universe, World, WorldSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperatorError {
    #[error("belief set is inconsistent (no models)")]
    InconsistentBeliefSet,
}

/// `K + φ`.
pub fn expand(k: &WorldSet, phi: &WorldSet) -> WorldSet {
    k.intersection(phi)
}

/// Full-meet revision; the posterior ranking is the full-meet ranking of
/// the result.
pub fn full_meet_revise(k: &WorldSet, phi: &WorldSet) -> EpistemicState {
    let meet = k.intersection(phi);
    let belief = if meet.is_empty() { phi.clone() } else { meet };
    EpistemicState::full_meet(belief)
}

/// Full-meet contraction: condition (C) over the full-meet ranking of `K`.
pub fn full_meet_contract(k: &WorldSet, phi: &WorldSet) -> EpistemicState {
    let prior = EpistemicState::full_meet(k.clone());
    EpistemicState::full_meet(contract_c(&prior, phi))
}

/// `D(K, r)`: least Hamming distance from `r` to a model of `K`.
pub fn dalal_distance(k: &WorldSet, r: World) -> Result<u32, OperatorError> {
    k.worlds()
        .map(|w| w.distance(r))
        .min()
        .ok_or(OperatorError::InconsistentBeliefSet)
}

/// `D(K, r)` for every world of the universe, indexed like the universe.
pub fn dalal_distances(k: &WorldSet) -> Result<Vec<u32>, OperatorError> {
    if k.is_empty() {
        return Err(OperatorError::InconsistentBeliefSet);
    }
    let u = k.universe();
    match u {
        // multi-source BFS over the hypercube
        Universe::Full { n } => {
            let mut dist = vec![u32::MAX; u.size()];
            let mut queue: VecDeque<usize> = k.iter().collect();
            for &i in &queue {
                dist[i] = 0;
            }
            while let Some(i) = queue.pop_front() {
                let d = dist[i] + 1;
                for b in 0..*n {
                    let j = i ^ (1 << b);
                    if dist[j] == u32::MAX {
                        dist[j] = d;
                        queue.push_back(j);
                    }
                }
            }
            Ok(dist)
        }
        Universe::Observed(_) => {
            let members: Vec<World> = k.worlds().collect();
            Ok(u.worlds()
                .map(|r| members.iter().map(|w| w.distance(r)).min().unwrap())
                .collect())
        }
    }
}

/// Dalal's faithful preorder: worlds ranked by normalized `D(K, ·)`.
pub fn dalal_preorder(k: &WorldSet) -> Result<Ranking, OperatorError> {
    let d = dalal_distances(k)?;
    Ok(Ranking::from_keys(k.universe(), |i| d[i]))
}

/// Dalal revision. An inconsistent `K` revises to `φ` itself.
pub fn dalal_revise(k: &WorldSet, phi: &WorldSet) -> WorldSet {
    match dalal_preorder(k) {
        Ok(rk) => rk.minimal(phi),
        Err(OperatorError::InconsistentBeliefSet) => phi.clone(),
    }
}

/// Lexicographic revision: every φ-world strictly below every ¬φ-world,
/// prior order kept inside each block. Revising by `∅` keeps the prior
/// ranking and yields the inconsistent belief.
pub fn lex_revise(s: &EpistemicState, phi: &WorldSet) -> EpistemicState {
    let belief = revise_r(s, phi);
    let rk = s.ranking();
    let ranking = Ranking::from_keys(s.universe(), |i| (!phi.contains(i), rk.rank(i)));
    EpistemicState::from_parts_unchecked(belief, ranking)
}

/// Moderate contraction. With `B = [K] ∪ min([¬φ])`: `B` is tied at the
/// bottom, then the remaining ¬φ-worlds, then the remaining φ-worlds, prior
/// order kept inside the last two blocks. Contracting a tautology returns
/// the prior state.
pub fn moderate_contract(s: &EpistemicState, phi: &WorldSet) -> EpistemicState {
    if phi.is_all() {
        return s.clone();
    }
    let belief = contract_c(s, phi);
    let rk = s.ranking();
    let ranking = Ranking::from_keys(s.universe(), |i| {
        if belief.contains(i) {
            (0u8, 0)
        } else if !phi.contains(i) {
            (1, rk.rank(i))
        } else {
            (2, rk.rank(i))
        }
    });
    EpistemicState::from_parts_unchecked(belief, ranking)
}
