//! Two-sided types, their relations, and quasimodels.

mod frame;
pub mod random;

pub use frame::{validate_quasimodel, QmFailure, QmReport, Quasimodel};
pub use random::random_quasimodel;

use crate::kripke::ModelError;
use crate::syntax::{closure_of, is_subformula_closed, Formula, FormulaSet};
use std::fmt;
use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum QmError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("restriction set is not closed under subformulas")]
    SigmaNotClosed,
    #[error("`{0}` is not of the form O f or <>f")]
    NotTemporal(String),
    #[error("labels may only use the [] -free language, found `{0}`")]
    BoxInLabel(String),
}

/// A pair of refuted and accepted formulas.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwoSidedType {
    pub neg: FormulaSet,
    pub pos: FormulaSet,
}

fn fmt_set(f: &mut fmt::Formatter<'_>, set: &FormulaSet) -> fmt::Result {
    let items: Vec<String> = set.iter().map(|g| g.to_string()).collect();
    write!(f, "{{{}}}", items.join(", "))
}

impl fmt::Display for TwoSidedType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("neg")?;
        fmt_set(f, &self.neg)?;
        f.write_str(" pos")?;
        fmt_set(f, &self.pos)
    }
}

/// A clause of the type definition that a type violates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeViolation {
    /// Clause number, 1 to 8; 0 marks a formula outside the `[]`-free language.
    pub condition: u8,
    pub formula: Formula,
}

impl fmt::Display for TypeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.condition {
            0 => "uses []",
            1 => "is both positive and negative",
            2 => "is positive",
            3 => "is a positive conjunction with a conjunct missing from pos",
            4 => "is a negative conjunction with no conjunct in neg",
            5 => "is a positive disjunction with no disjunct in pos",
            6 => "is a negative disjunction with a disjunct missing from neg",
            7 => "is a positive implication with antecedent not in neg and consequent not in pos",
            _ => "is a negative <> formula whose body is not in neg",
        };
        write!(f, "condition {}: `{}` {what}", self.condition, self.formula)
    }
}

impl TwoSidedType {
    pub fn new(neg: FormulaSet, pos: FormulaSet) -> Self {
        TwoSidedType { neg, pos }
    }

    pub fn with_neg(neg: FormulaSet) -> Self {
        TwoSidedType { neg, pos: FormulaSet::new() }
    }

    /// `neg ∪ pos`.
    pub fn formulas(&self) -> FormulaSet {
        self.neg.union(&self.pos).cloned().collect()
    }

    /// Every violated clause, in clause order.
    pub fn violations(&self) -> Vec<TypeViolation> {
        let mut out = Vec::new();
        let mut push =
            |condition: u8, formula: &Formula| out.push(TypeViolation { condition, formula: formula.clone() });
        for g in self.formulas() {
            if !g.fragment().is_box_free() {
                push(0, &g);
            }
        }
        for g in self.pos.intersection(&self.neg) {
            push(1, g);
        }
        if self.pos.contains(&Formula::Bottom) {
            push(2, &Formula::Bottom);
        }
        for g in &self.pos {
            match g {
                Formula::And(a, b) if !(self.pos.contains(a) && self.pos.contains(b)) => push(3, g),
                Formula::Or(a, b) if !(self.pos.contains(a) || self.pos.contains(b)) => push(5, g),
                Formula::Implies(a, b) if !(self.neg.contains(a) || self.pos.contains(b)) => push(7, g),
                _ => {}
            }
        }
        for g in &self.neg {
            match g {
                Formula::And(a, b) if !(self.neg.contains(a) || self.neg.contains(b)) => push(4, g),
                Formula::Or(a, b) if !(self.neg.contains(a) && self.neg.contains(b)) => push(6, g),
                Formula::Eventually(a) if !self.neg.contains(a) => push(8, g),
                _ => {}
            }
        }
        out.sort_by_key(|v| v.condition);
        out
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }

    /// `self ≼ other`: fewer refuted and more accepted formulas.
    pub fn leq_t(&self, other: &Self) -> bool {
        other.neg.is_subset(&self.neg) && self.pos.is_subset(&other.pos)
    }

    /// `self ⊑ other`: same refuted formulas and fewer accepted ones.
    pub fn sqsub_t(&self, other: &Self) -> bool {
        self.neg == other.neg && self.pos.is_subset(&other.pos)
    }

    /// Whether `other` may label a successor of a point labelled `self`.
    pub fn s_t(&self, other: &Self) -> bool {
        self.pos.iter().all(|g| match g {
            Formula::Next(a) => other.pos.contains(a),
            Formula::Eventually(a) => self.pos.contains(a) || other.pos.contains(g),
            _ => true,
        }) && self.neg.iter().all(|g| match g {
            Formula::Next(a) => other.neg.contains(a),
            Formula::Eventually(_) => other.neg.contains(g),
            _ => true,
        })
    }

    /// `(neg, pos ∩ sigma)`.
    pub fn restrict(&self, sigma: &FormulaSet) -> Result<Self, QmError> {
        if !is_subformula_closed(sigma) {
            return Err(QmError::SigmaNotClosed);
        }
        Ok(self.restrict_unchecked(sigma))
    }

    pub(crate) fn restrict_unchecked(&self, sigma: &FormulaSet) -> Self {
        TwoSidedType { neg: self.neg.clone(), pos: self.pos.intersection(sigma).cloned().collect() }
    }

    /// Formulas of `neg ∪ pos` having `f` as a subformula.
    pub fn superformulas(&self, f: &Formula) -> FormulaSet {
        self.formulas().into_iter().filter(|g| g.contains(f)).collect()
    }

    /// `f` is a positive temporal formula with no positive temporal proper superformula.
    pub fn is_maximal_temporal(&self, f: &Formula) -> bool {
        f.is_temporal() && self.pos.contains(f) && !self.pos.iter().any(|g| g != f && g.is_temporal() && g.contains(f))
    }

    /// Removes `f` and its superformulas from `pos`.
    pub fn delete_realized(&self, f: &Formula) -> Result<Self, QmError> {
        if !f.is_temporal() {
            return Err(QmError::NotTemporal(f.to_string()));
        }
        Ok(TwoSidedType { neg: self.neg.clone(), pos: self.pos.iter().filter(|g| !g.contains(f)).cloned().collect() })
    }

    /// Positive temporal formulas not below another positive temporal formula.
    pub fn maximal_temporals(&self) -> Vec<&Formula> {
        self.pos.iter().filter(|g| self.is_maximal_temporal(g)).collect()
    }

    /// Subformula closure of `pos`.
    pub fn sub_pos(&self) -> FormulaSet {
        closure_of(self.pos.iter())
    }

    /// Reads a one-sided type over `sigma`: accepted formulas are `accepted`, the rest of `sigma` is refuted.
    pub fn from_one_sided(sigma: &FormulaSet, accepted: &FormulaSet) -> Self {
        TwoSidedType { pos: accepted.clone(), neg: sigma.difference(accepted).cloned().collect() }
    }
}

pub fn validate_type(t: &TwoSidedType) -> Vec<TypeViolation> {
    t.violations()
}

/// Relation between two types.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TypeRel {
    LeqT,
    SqsubT,
    ST,
}

pub fn type_rel(a: &TwoSidedType, b: &TwoSidedType, which: TypeRel) -> bool {
    match which {
        TypeRel::LeqT => a.leq_t(b),
        TypeRel::SqsubT => a.sqsub_t(b),
        TypeRel::ST => a.s_t(b),
    }
}

/// Parses `{a, b}` item lists; formulas never contain `,`.
pub(crate) fn parse_formula_list(body: &str) -> Result<FormulaSet, String> {
    body.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| crate::syntax::parse(s).map_err(|e| format!("`{s}`: {e}")))
        .collect()
}

/// Parses `neg{...} pos{...}`; either part may be omitted.
pub fn parse_type(text: &str) -> Result<TwoSidedType, String> {
    let mut t = TwoSidedType::default();
    let mut rest = text.trim();
    let mut seen = (false, false);
    while !rest.is_empty() {
        let (key, after) =
            rest.split_once('{').ok_or_else(|| format!("expected `neg{{...}}` or `pos{{...}}`, found `{rest}`"))?;
        let (body, tail) = after.split_once('}').ok_or("missing `}`")?;
        let set = parse_formula_list(body)?;
        match key.trim() {
            "neg" if !seen.0 => {
                seen.0 = true;
                t.neg = set;
            }
            "pos" if !seen.1 => {
                seen.1 = true;
                t.pos = set;
            }
            k => return Err(format!("unexpected `{k}`")),
        }
        rest = tail.trim();
    }
    Ok(t)
}

impl std::str::FromStr for TwoSidedType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        parse_type(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{closure, parse};

    fn t(s: &str) -> TwoSidedType {
        s.parse().unwrap()
    }

    fn set(items: &[&str]) -> FormulaSet {
        items.iter().map(|s| parse(s).unwrap()).collect()
    }

    #[test]
    fn type_examples() {
        assert!(t("neg{<>q, q} pos{p, p | r}").is_valid());
        let bot = t("pos{false}").violations();
        assert_eq!(bot.len(), 1);
        assert_eq!(bot[0].condition, 2);
        let dia = t("neg{<>q}").violations();
        assert_eq!((dia[0].condition, dia[0].formula.clone()), (8, parse("<>q").unwrap()));
        assert_eq!(t("neg{p} pos{p}").violations()[0].condition, 1);
        assert_eq!(t("pos{[]p}").violations()[0].condition, 0);
        assert_eq!(t("pos{p -> q}").violations()[0].condition, 7);
        assert!(t("neg{p} pos{p -> q}").is_valid());
    }

    #[test]
    fn relation_examples() {
        let a = t("neg{q, <>q} pos{p}");
        let b = t("neg{q, <>q} pos{p, p | r}");
        assert!(a.sqsub_t(&b) && a.leq_t(&b) && !b.sqsub_t(&a));
        assert!(!t("pos{O p}").s_t(&t("pos{q}")));
        assert!(t("neg{<>q, q} pos{<>p, p}").s_t(&t("neg{<>q, q}")));
        assert!(!t("neg{<>q, q} pos{<>p}").s_t(&t("neg{<>q, q}")));
        assert!(!t("neg{O q}").s_t(&t("")));
        assert!(type_rel(&a, &b, TypeRel::LeqT));
    }

    #[test]
    fn restriction_examples() {
        let x = t("neg{<>q, q} pos{p, p | r}");
        assert_eq!(x.restrict(&closure(&parse("p").unwrap())).unwrap(), t("neg{<>q, q} pos{p}"));
        assert_eq!(x.restrict(&FormulaSet::new()).unwrap(), t("neg{<>q, q}"));
        assert_eq!(x.restrict(&set(&["p | r"])), Err(QmError::SigmaNotClosed));
    }

    #[test]
    fn deletion_examples() {
        let x = t("pos{p, <>p}");
        assert_eq!(x.delete_realized(&parse("<>p").unwrap()).unwrap(), t("pos{p}"));
        assert_eq!(x.delete_realized(&parse("O q").unwrap()).unwrap(), x);
        assert!(matches!(x.delete_realized(&parse("p").unwrap()), Err(QmError::NotTemporal(_))));
        assert!(x.is_maximal_temporal(&parse("<>p").unwrap()));
        let y = t("pos{O p, <>O p, p}");
        assert!(!y.is_maximal_temporal(&parse("O p").unwrap()));
        assert_eq!(y.maximal_temporals(), vec![&parse("<>O p").unwrap()]);
    }

    #[test]
    fn one_sided_embedding() {
        let sigma = closure(&parse("p -> <>q").unwrap());
        let x = TwoSidedType::from_one_sided(&sigma, &set(&["p", "<>q", "q", "p -> <>q"]));
        assert!(x.is_valid());
        assert_eq!(x.neg, FormulaSet::new());
    }

    #[test]
    fn display_round_trips() {
        let x = t("neg{<>q, q} pos{p}");
        assert_eq!(x.to_string(), "neg{q, <>q} pos{p}");
        assert_eq!(t(&x.to_string()), x);
        assert!("neg{p} neg{q}".parse::<TwoSidedType>().is_err());
    }
}
