//! Finite propositional vocabularies, possible worlds, formulas and their
//! model sets.
//!
//! A world over `n` atoms is an `n`-bit integer: bit `i` is the truth value
//! of the `i`-th atom of the [`Vocabulary`]. Belief sets are never stored as
//! sentence sets; they are represented by their model sets ([`WorldSet`]).

mod formula;
mod parser;
mod universe;

use std::fmt;

use thiserror::Error;

pub use formula::{Formula, FormulaDisplay};
pub use parser::{atom_names, parse_formula, ParseError};
pub use universe::{Universe, UniverseError, WorldLabel, WorldSet, FULL_UNIVERSE_MAX_ATOMS};

/// Largest vocabulary representable by a [`World`].
pub const MAX_ATOMS: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VocabularyError {
    #[error("vocabulary must contain at least one atom")]
    Empty,
    #[error("vocabulary has {0} atoms, at most {MAX_ATOMS} are supported")]
    TooLarge(usize),
    #[error("invalid atom name `{0}`")]
    BadName(String),
    #[error("duplicate atom `{0}`")]
    Duplicate(String),
    #[error("cannot parse world `{text}`: {reason}")]
    BadWorld { text: String, reason: String },
}

/// Ordered, duplicate-free list of atom names. Position `i` is bit `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vocabulary {
    atoms: Vec<String>,
}

fn is_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && name != "true"
        && name != "false"
}

impl Vocabulary {
    pub fn new<I, S>(atoms: I) -> Result<Self, VocabularyError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let atoms: Vec<String> = atoms.into_iter().map(Into::into).collect();
        if atoms.is_empty() {
            return Err(VocabularyError::Empty);
        }
        if atoms.len() > MAX_ATOMS {
            return Err(VocabularyError::TooLarge(atoms.len()));
        }
        for (i, name) in atoms.iter().enumerate() {
            if !is_atom_name(name) {
                return Err(VocabularyError::BadName(name.clone()));
            }
            if atoms[..i].contains(name) {
                return Err(VocabularyError::Duplicate(name.clone()));
            }
        }
        Ok(Self { atoms })
    }

    /// `x1, …, xn`, used for pixel inputs.
    pub fn numbered(prefix: &str, n: usize) -> Result<Self, VocabularyError> {
        Self::new((1..=n).map(|i| format!("{prefix}{i}")))
    }

    /// Parses a comma-separated list such as `a,b,c`.
    pub fn parse_list(text: &str) -> Result<Self, VocabularyError> {
        Self::new(text.split(',').map(str::trim).filter(|s| !s.is_empty()))
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == name)
    }

    /// The full universe of all `2^n` worlds over this vocabulary.
    pub fn full_universe(&self) -> Result<Universe, UniverseError> {
        Universe::full(self.len())
    }

    /// Text form `a=1 b=0 …`, covering every atom.
    pub fn format_world(&self, w: World) -> String {
        let mut out = String::new();
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(a);
            out.push('=');
            out.push(if w.get(i) { '1' } else { '0' });
        }
        out
    }

    pub fn parse_world(&self, text: &str) -> Result<World, VocabularyError> {
        let bad = |reason: &str| VocabularyError::BadWorld {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let mut bits = 0u128;
        let mut seen = 0u128;
        for pair in text.split_whitespace() {
            let (name, value) = pair.split_once('=').ok_or_else(|| bad("expected atom=0|1"))?;
            let i = self
                .index_of(name)
                .ok_or_else(|| bad(&format!("unknown atom `{name}`")))?;
            if seen >> i & 1 == 1 {
                return Err(bad(&format!("atom `{name}` assigned twice")));
            }
            seen |= 1 << i;
            match value {
                "1" => bits |= 1 << i,
                "0" => {}
                _ => return Err(bad("values must be 0 or 1")),
            }
        }
        if seen.count_ones() as usize != self.len() {
            return Err(bad("every atom must be assigned"));
        }
        Ok(World(bits))
    }
}

impl fmt::Display for Vocabulary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.atoms.join(","))
    }
}

/// A truth assignment; bit `i` holds atom `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct World(pub u128);

impl World {
    #[inline]
    pub fn get(self, atom: usize) -> bool {
        self.0 >> atom & 1 == 1
    }

    /// Hamming distance, `|Diff(self, other)|`.
    #[inline]
    pub fn distance(self, other: World) -> u32 {
        (self.0 ^ other.0).count_ones()
    }

    pub fn from_bits(bits: &[bool]) -> World {
        assert!(bits.len() <= MAX_ATOMS);
        World(
            bits.iter()
                .enumerate()
                .fold(0u128, |acc, (i, &b)| acc | (b as u128) << i),
        )
    }

    pub fn to_bits(self, n: usize) -> Vec<bool> {
        (0..n).map(|i| self.get(i)).collect()
    }
}

/// A set of atoms, as a bit mask over vocabulary positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct AtomSet(pub u128);

impl AtomSet {
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, atom: usize) -> bool {
        self.0 >> atom & 1 == 1
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..MAX_ATOMS).filter(move |&i| self.contains(i))
    }

    pub fn names(self, vocab: &Vocabulary) -> Vec<&str> {
        self.iter().map(|i| vocab.atoms()[i].as_str()).collect()
    }
}

/// The atoms on which two worlds disagree.
pub fn world_diff(r: World, r2: World) -> AtomSet {
    AtomSet(r.0 ^ r2.0)
}
