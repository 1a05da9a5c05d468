use std::fmt;

use super::{Universe, Vocabulary, World, WorldSet};

/// Propositional formula over a vocabulary; atoms are vocabulary positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(usize),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(i: usize) -> Self {
        Formula::Atom(i)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// Classical truth-table evaluation.
    pub fn eval(&self, w: World) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(i) => w.get(*i),
            Formula::Not(f) => !f.eval(w),
            Formula::And(a, b) => a.eval(w) && b.eval(w),
            Formula::Or(a, b) => a.eval(w) || b.eval(w),
            Formula::Implies(a, b) => !a.eval(w) || b.eval(w),
            Formula::Iff(a, b) => a.eval(w) == b.eval(w),
        }
    }

    /// `[f]`: every world of the universe that satisfies `f`.
    pub fn models(&self, universe: &Universe) -> WorldSet {
        WorldSet::from_indices(
            universe,
            (0..universe.size()).filter(|&i| self.eval(universe.world(i))),
        )
    }

    /// Largest atom index referenced, if any.
    pub fn max_atom(&self) -> Option<usize> {
        match self {
            Formula::True | Formula::False => None,
            Formula::Atom(i) => Some(*i),
            Formula::Not(f) => f.max_atom(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.max_atom().max(b.max_atom())
            }
        }
    }

    pub fn display<'a>(&'a self, vocab: &'a Vocabulary) -> FormulaDisplay<'a> {
        FormulaDisplay { formula: self, vocab }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            _ => 5,
        }
    }
}

/// Prints a formula in the grammar accepted by [`super::parse_formula`],
/// with the fewest parentheses that preserve the tree shape.
pub struct FormulaDisplay<'a> {
    formula: &'a Formula,
    vocab: &'a Vocabulary,
}

impl FormulaDisplay<'_> {
    fn write(&self, f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let child = |g: &Formula, min_prec: u8, out: &mut fmt::Formatter<'_>| {
            if g.precedence() < min_prec {
                out.write_str("(")?;
                self.write(g, out)?;
                out.write_str(")")
            } else {
                self.write(g, out)
            }
        };
        match f {
            Formula::True => out.write_str("true"),
            Formula::False => out.write_str("false"),
            Formula::Atom(i) => out.write_str(&self.vocab.atoms()[*i]),
            Formula::Not(g) => {
                out.write_str("!")?;
                child(g, 5, out)
            }
            // left-associative chains: the right operand must bind tighter
            Formula::And(a, b) => {
                child(a, 4, out)?;
                out.write_str(" & ")?;
                child(b, 5, out)
            }
            Formula::Or(a, b) => {
                child(a, 3, out)?;
                out.write_str(" | ")?;
                child(b, 4, out)
            }
            // right-associative
            Formula::Implies(a, b) => {
                child(a, 3, out)?;
                out.write_str(" -> ")?;
                child(b, 2, out)
            }
            Formula::Iff(a, b) => {
                child(a, 2, out)?;
                out.write_str(" <-> ")?;
                child(b, 1, out)
            }
        }
    }
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(self.formula, out)
    }
}
