//! Derivation files.
//!
//! ```text
//! # comments attach to the next line
//! 1: []p -> p & O[]p ; axiom ix {phi := p}
//! 2: ... ; mp 1 3
//! 3: ... ; nec 2
//! 4: ... ; indbox 3
//! 5: ... ; inddia 3
//! ```

use super::{Subst, METAVARS};
use crate::syntax::{parse, Formula};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    /// Without a substitution the checker infers one.
    Axiom {
        name: String,
        subst: Option<Subst>,
    },
    Mp(usize, usize),
    Nec(usize),
    IndBox(usize),
    IndDia(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub formula: Formula,
    pub justification: Justification,
    /// Comment printed above the line.
    pub note: Option<String>,
}

impl Line {
    pub fn new(formula: Formula, justification: Justification) -> Self {
        Line { formula, justification, note: None }
    }

    pub fn axiom(formula: Formula, name: &str) -> Self {
        Line::new(formula, Justification::Axiom { name: name.to_string(), subst: None })
    }
}

/// Numbered lines; indices in justifications are 1-based.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Derivation {
    pub lines: Vec<Line>,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct DerivationFormatError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> DerivationFormatError {
    DerivationFormatError { line, message: message.into() }
}

fn parse_subst(line: usize, body: &str) -> Result<Subst, DerivationFormatError> {
    let mut out = Subst::new();
    for item in body.split(',').filter(|s| !s.trim().is_empty()) {
        let (var, f) = item
            .split_once(":=")
            .ok_or_else(|| err(line, format!("expected `var := formula`, found `{}`", item.trim())))?;
        let var = var.trim();
        if !METAVARS.contains(&var) {
            return Err(err(line, format!("unknown metavariable `{var}`")));
        }
        let f = parse(f).map_err(|e| err(line, format!("in substitution for `{var}`: {e}")))?;
        if out.insert(var.to_string(), f).is_some() {
            return Err(err(line, format!("`{var}` substituted twice")));
        }
    }
    Ok(out)
}

fn index(line: usize, s: Option<&str>) -> Result<usize, DerivationFormatError> {
    let s = s.ok_or_else(|| err(line, "missing line reference"))?;
    s.parse().map_err(|_| err(line, format!("bad line reference `{s}`")))
}

fn parse_justification(line: usize, text: &str) -> Result<Justification, DerivationFormatError> {
    let text = text.trim();
    let (rule, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
    let mut args = rest.split_whitespace();
    let j = match rule {
        "axiom" => {
            let rest = rest.trim();
            let (name, tail) = match rest.find('{') {
                Some(i) => (rest[..i].trim(), Some(&rest[i..])),
                None => (rest, None),
            };
            if name.is_empty() {
                return Err(err(line, "axiom needs a name"));
            }
            let subst = match tail {
                Some(t) => {
                    let inner = t.strip_prefix('{').and_then(|t| t.trim_end().strip_suffix('}'));
                    Some(parse_subst(line, inner.ok_or_else(|| err(line, "unbalanced `{`"))?)?)
                }
                None => None,
            };
            return Ok(Justification::Axiom { name: name.to_string(), subst });
        }
        "mp" => Justification::Mp(index(line, args.next())?, index(line, args.next())?),
        "nec" => Justification::Nec(index(line, args.next())?),
        "indbox" => Justification::IndBox(index(line, args.next())?),
        "inddia" => Justification::IndDia(index(line, args.next())?),
        _ => return Err(err(line, format!("unknown rule `{rule}`"))),
    };
    if let Some(extra) = args.next() {
        return Err(err(line, format!("unexpected `{extra}`")));
    }
    Ok(j)
}

impl FromStr for Derivation {
    type Err = DerivationFormatError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut lines = Vec::new();
        let mut note: Option<String> = None;
        for (i, raw) in text.lines().enumerate() {
            let no = i + 1;
            let t = raw.trim();
            if let Some(c) = t.strip_prefix('#') {
                let c = c.trim();
                note = Some(match note.take() {
                    Some(prev) => format!("{prev}\n{c}"),
                    None => c.to_string(),
                });
                continue;
            }
            let t = t.split('#').next().unwrap_or("").trim();
            if t.is_empty() {
                continue;
            }
            let (num, rest) = t.split_once(':').ok_or_else(|| err(no, "expected `N: formula ; justification`"))?;
            let num: usize = num.trim().parse().map_err(|_| err(no, format!("bad line number `{}`", num.trim())))?;
            if num != lines.len() + 1 {
                return Err(err(no, format!("expected line number {}, found {num}", lines.len() + 1)));
            }
            let (f, j) = rest.split_once(';').ok_or_else(|| err(no, "missing `;` before the justification"))?;
            let formula = parse(f).map_err(|e| err(no, e.to_string()))?;
            let justification = parse_justification(no, j)?;
            lines.push(Line { formula, justification, note: note.take() });
        }
        Ok(Derivation { lines })
    }
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Axiom { name, subst: None } => write!(f, "axiom {name}"),
            Justification::Axiom { name, subst: Some(s) } => {
                let items: Vec<String> =
                    METAVARS.iter().filter_map(|v| s.get(*v).map(|g| format!("{v} := {g}"))).collect();
                write!(f, "axiom {name} {{{}}}", items.join(", "))
            }
            Justification::Mp(a, b) => write!(f, "mp {a} {b}"),
            Justification::Nec(i) => write!(f, "nec {i}"),
            Justification::IndBox(i) => write!(f, "indbox {i}"),
            Justification::IndDia(i) => write!(f, "inddia {i}"),
        }
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.lines.iter().enumerate() {
            if let Some(n) = &l.note {
                for c in n.lines() {
                    writeln!(f, "# {c}")?;
                }
            }
            writeln!(f, "{}: {} ; {}", k + 1, l.formula, l.justification)?;
        }
        Ok(())
    }
}
