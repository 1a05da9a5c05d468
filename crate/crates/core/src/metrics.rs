//! Distances between belief sets, the gradualism conditions over belief-set
//! sequences, and Dalal-layer intermediate states.

use serde::{Deserialize, Serialize};

use crate::logic::WorldSet;
use crate::operators::{dalal_distances, OperatorError};

/// Type-A distance: least Hamming distance between a model of `k1` and a
/// model of `k2`.
pub fn dist_a(k1: &WorldSet, k2: &WorldSet) -> Result<u32, OperatorError> {
    if k2.is_empty() {
        return Err(OperatorError::InconsistentBeliefSet);
    }
    let d = dalal_distances(k1)?;
    Ok(k2.iter().map(|i| d[i]).min().expect("non-empty"))
}

/// Type-B distance: the symmetric difference of the model sets.
pub fn dist_b(k1: &WorldSet, k2: &WorldSet) -> WorldSet {
    k1.symmetric_difference(k2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Condition {
    /// `Dist_A(T_i, T_m) >= Dist_A(T_j, T_m)`
    #[serde(rename = "DA")]
    Da,
    /// `Dist_A(T_i, T_m) > Dist_A(T_j, T_m)`
    #[serde(rename = "DA-strict")]
    DaStrict,
    /// `|Dist_B(T_i, T_m)| >= |Dist_B(T_j, T_m)|`
    #[serde(rename = "DB")]
    Db,
    /// `Dist_B(T_i, T_m) ⊇ Dist_B(T_j, T_m)`
    #[serde(rename = "SD")]
    Sd,
}

impl Condition {
    pub fn id(self) -> &'static str {
        match self {
            Condition::Da => "DA",
            Condition::DaStrict => "DA-strict",
            Condition::Db => "DB",
            Condition::Sd => "SD",
        }
    }
}

/// Verdict of a condition over a sequence `T_1 … T_l`. The violation triple
/// `(i, j, m)` is 1-based with `i < j < m`, the first in lexicographic order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceVerdict {
    pub condition: Condition,
    pub holds: bool,
    pub violation: Option<(usize, usize, usize)>,
}

/// Checks `cond` over all `i < j < m`. Sequences shorter than three hold
/// vacuously. The type-A conditions need every member consistent.
pub fn check_sequence(seq: &[WorldSet], cond: Condition) -> Result<SequenceVerdict, OperatorError> {
    let l = seq.len();
    let first = |ok: &dyn Fn(usize, usize, usize) -> bool| {
        for i in 0..l {
            for j in i + 1..l {
                for m in j + 1..l {
                    if !ok(i, j, m) {
                        return Some((i + 1, j + 1, m + 1));
                    }
                }
            }
        }
        None
    };
    let violation = match cond {
        Condition::Da | Condition::DaStrict => {
            if seq.iter().any(WorldSet::is_empty) {
                return Err(OperatorError::InconsistentBeliefSet);
            }
            // to_m[m][i] = Dist_A(T_i, T_m)
            let to_m: Vec<Vec<u32>> = seq
                .iter()
                .map(|tm| {
                    let d = dalal_distances(tm).expect("consistent");
                    seq.iter().map(|t| t.iter().map(|w| d[w]).min().unwrap()).collect()
                })
                .collect();
            let strict = cond == Condition::DaStrict;
            first(&|i, j, m| {
                let (a, b) = (to_m[m][i], to_m[m][j]);
                if strict {
                    a > b
                } else {
                    a >= b
                }
            })
        }
        Condition::Db => first(&|i, j, m| {
            dist_b(&seq[i], &seq[m]).len() >= dist_b(&seq[j], &seq[m]).len()
        }),
        Condition::Sd => first(&|i, j, m| {
            dist_b(&seq[j], &seq[m]).is_subset(&dist_b(&seq[i], &seq[m]))
        }),
    };
    Ok(SequenceVerdict {
        condition: cond,
        holds: violation.is_none(),
        violation,
    })
}

/// The strict Dalal shells between `K` and its revision by `φ`:
/// `H_k = { r : D(K, r) = k }` for `0 < k < d*`, where `d*` is the least
/// distance of a `φ`-world. Shells are complete, not cut down to `φ`. In an
/// observed universe a shell may be empty.
pub fn dalal_gradual(k: &WorldSet, phi: &WorldSet) -> Result<Vec<WorldSet>, OperatorError> {
    let d = dalal_distances(k)?;
    let target = phi
        .iter()
        .map(|i| d[i])
        .min()
        .ok_or(OperatorError::InconsistentBeliefSet)?;
    let u = k.universe();
    Ok((1..target.max(1))
        .map(|layer| WorldSet::from_indices(u, (0..u.size()).filter(|&i| d[i] == layer)))
        .collect())
}

/// Bit columns `x_1 … x_len` one world may follow in an (SD) sequence:
/// whenever `x_j ≠ x_m` with `j < m`, every earlier `x_i` equals `x_j`.
fn sd_columns(len: usize) -> Vec<u32> {
    (0..1u32 << len)
        .filter(|&c| {
            let x = |t: usize| c >> t & 1;
            (0..len).all(|i| {
                (i + 1..len).all(|j| (j + 1..len).all(|m| x(j) == x(m) || x(i) == x(j)))
            })
        })
        .collect()
}

/// Every sequence of `len` subsets of a universe of `worlds` worlds
/// (at most 64) that satisfies (SD), as membership masks.
///
/// (SD) holds for a sequence iff it holds for each world's membership
/// column separately, so the sequences are the products of admissible
/// columns. Order: world 0's column varies fastest.
pub fn sd_mask_sequences(worlds: usize, len: usize) -> impl Iterator<Item = Vec<u64>> {
    assert!(worlds <= 64 && len >= 1);
    let cols = sd_columns(len);
    let mut digits = vec![0usize; worlds];
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let mut seq = vec![0u64; len];
        for (w, &d) in digits.iter().enumerate() {
            let c = cols[d];
            for (t, m) in seq.iter_mut().enumerate() {
                *m |= u64::from(c >> t & 1) << w;
            }
        }
        done = true;
        for d in digits.iter_mut() {
            *d += 1;
            if *d < cols.len() {
                done = false;
                break;
            }
            *d = 0;
        }
        Some(seq)
    })
}
