//! Recursive-descent parser for the ASCII formula grammar:
//!
//! ```text
//! formula := iff
//! iff     := imp ("<->" iff)?
//! imp     := or ("->" imp)?
//! or      := and ("|" and)*
//! and     := not ("&" not)*
//! not     := "!" not | atom | "true" | "false" | "(" formula ")"
//! ```

use thiserror::Error;

use super::{Formula, Vocabulary};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {position}: expected {expected}, found {found}")]
    Syntax {
        position: usize,
        expected: String,
        found: String,
    },
    #[error("unknown atom `{name}` at byte {position}")]
    UnknownAtom { name: String, position: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Imp,
    Iff,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::Not => "`!`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Imp => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'!' => Tok::Not,
            b'&' => Tok::And,
            b'|' => Tok::Or,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Imp
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                i += 2;
                Tok::Iff
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                match &text[start..=i] {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    s => Tok::Ident(s.to_string()),
                }
            }
            _ => {
                let found = text[start..].chars().next().unwrap();
                return Err(ParseError::Syntax {
                    position: start,
                    expected: "a formula token".into(),
                    found: format!("`{found}`"),
                });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    vocab: &'a Vocabulary,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError::Syntax {
            position: self.offset(),
            expected: expected.to_string(),
            found: self.peek().describe(),
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.imp()?;
        if *self.peek() == Tok::Iff {
            self.bump();
            return Ok(Formula::iff(lhs, self.iff()?));
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Imp {
            self.bump();
            return Ok(Formula::implies(lhs, self.imp()?));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.not()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = Formula::and(lhs, self.not()?);
        }
        Ok(lhs)
    }

    fn not(&mut self) -> Result<Formula, ParseError> {
        let position = self.offset();
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.not()?))
            }
            Tok::True => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::Ident(name) => {
                self.bump();
                self.vocab
                    .index_of(&name)
                    .map(Formula::Atom)
                    .ok_or(ParseError::UnknownAtom { name, position })
            }
            Tok::LParen => {
                self.bump();
                let f = self.iff()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error("`)`"));
                }
                self.bump();
                Ok(f)
            }
            _ => Err(self.error("an atom, `true`, `false`, `!` or `(`")),
        }
    }
}

/// Parses `text` against `vocab`.
pub fn parse_formula(text: &str, vocab: &Vocabulary) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        vocab,
    };
    let f = p.iff()?;
    if *p.peek() != Tok::End {
        return Err(p.error("an operator or end of input"));
    }
    Ok(f)
}

/// Atom names in order of first appearance; used to infer a vocabulary.
pub fn atom_names(text: &str) -> Result<Vec<String>, ParseError> {
    let mut names: Vec<String> = Vec::new();
    for (_, t) in tokenize(text)? {
        if let Tok::Ident(s) = t {
            if !names.contains(&s) {
                names.push(s);
            }
        }
    }
    Ok(names)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Formula as F;

    fn abcd() -> Vocabulary {
        Vocabulary::new(["a", "b", "c", "d"]).unwrap()
    }

    #[test]
    fn conjunction() {
        let v = Vocabulary::new(["a", "b"]).unwrap();
        assert_eq!(parse_formula("a & b", &v).unwrap(), F::and(F::atom(0), F::atom(1)));
    }

    #[test]
    fn negated_conjunction_chain() {
        let f = parse_formula("!a & !b & !c & !d", &abcd()).unwrap();
        let n = |i| F::not(F::atom(i));
        let expected = F::and(F::and(F::and(n(0), n(1)), n(2)), n(3));
        assert_eq!(f, expected);
    }

    #[test]
    fn implication_is_right_associative() {
        let f = parse_formula("a -> b -> c", &abcd()).unwrap();
        assert_eq!(f, F::implies(F::atom(0), F::implies(F::atom(1), F::atom(2))));
        let g = parse_formula("a <-> b <-> c", &abcd()).unwrap();
        assert_eq!(g, F::iff(F::atom(0), F::iff(F::atom(1), F::atom(2))));
    }

    #[test]
    fn precedence_ladder() {
        let v = abcd();
        // ! > & > | > -> > <->
        let f = parse_formula("!a & b | c -> d <-> a", &v).unwrap();
        let expected = F::iff(
            F::implies(
                F::or(F::and(F::not(F::atom(0)), F::atom(1)), F::atom(2)),
                F::atom(3),
            ),
            F::atom(0),
        );
        assert_eq!(f, expected);
        assert_eq!(
            parse_formula("(true)|false", &v).unwrap(),
            F::or(F::True, F::False)
        );
    }

    #[test]
    fn errors_carry_positions() {
        let v = abcd();
        assert_eq!(
            parse_formula("a & e", &v),
            Err(ParseError::UnknownAtom { name: "e".into(), position: 4 })
        );
        match parse_formula("a & (b | c", &v) {
            Err(ParseError::Syntax { position, expected, .. }) => {
                assert_eq!(position, 10);
                assert_eq!(expected, "`)`");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_formula("a b", &v), Err(ParseError::Syntax { position: 2, .. })));
        assert!(matches!(parse_formula("", &v), Err(ParseError::Syntax { position: 0, .. })));
        assert!(matches!(parse_formula("a # b", &v), Err(ParseError::Syntax { position: 2, .. })));
        assert!(matches!(parse_formula("a - b", &v), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn atom_names_in_first_appearance_order() {
        assert_eq!(atom_names("b & a | !b -> c").unwrap(), vec!["b", "a", "c"]);
        assert!(atom_names("true").unwrap().is_empty());
    }
}
