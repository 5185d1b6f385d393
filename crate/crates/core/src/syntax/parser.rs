//! Recursive-descent parser for the ASCII grammar.
//!
//! Precedence, loosest first: `<->`, `->` (right-associative), `|`, `&`, then the
//! prefix operators `~`, `O`, `<>`, `[]`.

use super::{and, bx, dia, iff, imp, next, not, or, Formula};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: expected {expected}")]
pub struct ParseError {
    /// Character offset into the input.
    pub position: usize,
    pub expected: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    False,
    Atom(String),
    Not,
    Next,
    Dia,
    Box,
    And,
    Or,
    Imp,
    Iff,
    LParen,
    RParen,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::False => "`false`".into(),
        Tok::Atom(a) => format!("atom `{a}`"),
        Tok::Not => "`~`".into(),
        Tok::Next => "`O`".into(),
        Tok::Dia => "`<>`".into(),
        Tok::Box => "`[]`".into(),
        Tok::And => "`&`".into(),
        Tok::Or => "`|`".into(),
        Tok::Imp => "`->`".into(),
        Tok::Iff => "`<->`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::End => "end of input".into(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let starts = |i: usize, s: &str| s.chars().enumerate().all(|(k, c)| chars.get(i + k) == Some(&c));
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let (tok, len) = if starts(i, "<->") {
            (Tok::Iff, 3)
        } else if starts(i, "->") {
            (Tok::Imp, 2)
        } else if starts(i, "<>") {
            (Tok::Dia, 2)
        } else if starts(i, "[]") {
            (Tok::Box, 2)
        } else {
            match c {
                '~' => (Tok::Not, 1),
                'O' => (Tok::Next, 1),
                '&' => (Tok::And, 1),
                '|' => (Tok::Or, 1),
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                c if c.is_ascii_lowercase() => {
                    let mut j = i;
                    while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                        j += 1;
                    }
                    let word: String = chars[i..j].iter().collect();
                    let tok = if word == "false" { Tok::False } else { Tok::Atom(word) };
                    (tok, j - i)
                }
                _ => {
                    return Err(ParseError { position: i, expected: "a formula token".into() });
                }
            }
        };
        out.push((i, tok));
        i += len;
    }
    out.push((chars.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn here(&self) -> usize {
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
        ParseError { position: self.here(), expected: format!("{expected}, found {}", describe(self.peek())) }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implication()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.implication()?;
            lhs = iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Imp {
            self.bump();
            let rhs = self.implication()?;
            return Ok(imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(not(self.unary()?))
            }
            Tok::Next => {
                self.bump();
                Ok(next(self.unary()?))
            }
            Tok::Dia => {
                self.bump();
                Ok(dia(self.unary()?))
            }
            Tok::Box => {
                self.bump();
                Ok(bx(self.unary()?))
            }
            Tok::False => {
                self.bump();
                Ok(Formula::Bottom)
            }
            Tok::Atom(a) => {
                self.bump();
                Ok(Formula::Atom(a))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.iff()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error("`)`"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.error("a formula")),
        }
    }
}

/// Parses a formula, desugaring `~f` to `f -> false` and `a <-> b` to `(a -> b) & (b -> a)`.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let f = p.iff()?;
    if *p.peek() != Tok::End {
        return Err(p.error("an operator or end of input"));
    }
    Ok(f)
}
