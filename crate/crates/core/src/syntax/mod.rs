//! Formula syntax: the AST, subformula machinery and fragment classification.

mod parser;
mod printer;
pub mod random;

use std::collections::BTreeSet;
use std::fmt;

pub use parser::{parse, ParseError};
pub use printer::render;

/// Formulas of the temporal language. `~` and `<->` only exist in the concrete syntax.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Bottom,
    Atom(String),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Eventually(Box<Formula>),
    Henceforth(Box<Formula>),
}

/// Finite set of formulas under structural equality.
pub type FormulaSet = BTreeSet<Formula>;

/// Which temporal operators a formula uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Fragment {
    /// No `O`, `<>` or `[]`.
    TemporalFree,
    /// Only `O`.
    NextOnly,
    /// `<>` occurs, `[]` does not.
    BoxFree,
    /// `[]` occurs, `<>` does not.
    DiamondFree,
    /// Both `<>` and `[]` occur.
    Full,
}

impl Fragment {
    pub fn is_box_free(self) -> bool {
        matches!(self, Fragment::TemporalFree | Fragment::NextOnly | Fragment::BoxFree)
    }

    pub fn is_diamond_free(self) -> bool {
        matches!(self, Fragment::TemporalFree | Fragment::NextOnly | Fragment::DiamondFree)
    }
}

pub fn atom(name: &str) -> Formula {
    Formula::Atom(name.to_string())
}

pub fn bottom() -> Formula {
    Formula::Bottom
}

/// `false -> false`.
pub fn top() -> Formula {
    imp(Formula::Bottom, Formula::Bottom)
}

pub fn and(a: Formula, b: Formula) -> Formula {
    Formula::And(Box::new(a), Box::new(b))
}

pub fn or(a: Formula, b: Formula) -> Formula {
    Formula::Or(Box::new(a), Box::new(b))
}

pub fn imp(a: Formula, b: Formula) -> Formula {
    Formula::Implies(Box::new(a), Box::new(b))
}

pub fn not(a: Formula) -> Formula {
    imp(a, Formula::Bottom)
}

pub fn iff(a: Formula, b: Formula) -> Formula {
    and(imp(a.clone(), b.clone()), imp(b, a))
}

pub fn next(a: Formula) -> Formula {
    Formula::Next(Box::new(a))
}

pub fn dia(a: Formula) -> Formula {
    Formula::Eventually(Box::new(a))
}

pub fn bx(a: Formula) -> Formula {
    Formula::Henceforth(Box::new(a))
}

impl Formula {
    /// Immediate subformulas.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Bottom | Formula::Atom(_) => vec![],
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => vec![a, b],
            Formula::Next(a) | Formula::Eventually(a) | Formula::Henceforth(a) => vec![a],
        }
    }

    /// Node count.
    pub fn length(&self) -> usize {
        1 + self.children().iter().map(|c| c.length()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    /// Maximal nesting of `O`, `<>` and `[]`.
    pub fn temporal_depth(&self) -> usize {
        let inner = self.children().iter().map(|c| c.temporal_depth()).max().unwrap_or(0);
        if self.is_temporal_node() {
            inner + 1
        } else {
            inner
        }
    }

    /// Maximal nesting of `->`.
    pub fn implication_depth(&self) -> usize {
        let inner = self.children().iter().map(|c| c.implication_depth()).max().unwrap_or(0);
        if matches!(self, Formula::Implies(..)) {
            inner + 1
        } else {
            inner
        }
    }

    fn is_temporal_node(&self) -> bool {
        matches!(self, Formula::Next(_) | Formula::Eventually(_) | Formula::Henceforth(_))
    }

    /// Formulas of the form `O f` or `<> f`.
    pub fn is_temporal(&self) -> bool {
        matches!(self, Formula::Next(_) | Formula::Eventually(_))
    }

    pub fn contains(&self, g: &Formula) -> bool {
        self == g || self.children().iter().any(|c| c.contains(g))
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        if let Formula::Atom(p) = self {
            out.insert(p.clone());
        }
        for c in self.children() {
            c.collect_atoms(out);
        }
    }

    pub fn fragment(&self) -> Fragment {
        let (mut next, mut dia, mut bx) = (false, false, false);
        self.scan(&mut |f| match f {
            Formula::Next(_) => next = true,
            Formula::Eventually(_) => dia = true,
            Formula::Henceforth(_) => bx = true,
            _ => {}
        });
        match (dia, bx) {
            (true, true) => Fragment::Full,
            (true, false) => Fragment::BoxFree,
            (false, true) => Fragment::DiamondFree,
            (false, false) if next => Fragment::NextOnly,
            _ => Fragment::TemporalFree,
        }
    }

    fn scan(&self, visit: &mut impl FnMut(&Formula)) {
        visit(self);
        for c in self.children() {
            c.scan(visit);
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

/// All subformulas of `f`, including `f`.
pub fn closure(f: &Formula) -> FormulaSet {
    let mut out = FormulaSet::new();
    add_closure(f, &mut out);
    out
}

/// Union of the closures of every member.
pub fn closure_of<'a>(fs: impl IntoIterator<Item = &'a Formula>) -> FormulaSet {
    let mut out = FormulaSet::new();
    for f in fs {
        add_closure(f, &mut out);
    }
    out
}

fn add_closure(f: &Formula, out: &mut FormulaSet) {
    if out.insert(f.clone()) {
        for c in f.children() {
            add_closure(c, out);
        }
    }
}

/// True when every subformula of a member is a member.
pub fn is_subformula_closed(set: &FormulaSet) -> bool {
    set.iter().all(|f| f.children().iter().all(|c| set.contains(*c)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cd(p: Formula, q: Formula) -> Formula {
        imp(bx(or(p.clone(), q.clone())), or(bx(p), dia(q)))
    }

    #[test]
    fn closure_of_atom() {
        let p = atom("p");
        assert_eq!(closure(&p).len(), 1);
        assert_eq!(p.length(), 1);
        assert_eq!(p.fragment(), Fragment::TemporalFree);
    }

    #[test]
    fn closure_of_eventually() {
        let f = dia(atom("p"));
        let c = closure(&f);
        assert_eq!(c, [f.clone(), atom("p")].into_iter().collect());
        assert_eq!(f.fragment(), Fragment::BoxFree);
    }

    #[test]
    fn closure_of_cd_instance() {
        let f = cd(atom("p"), atom("q"));
        let c = closure(&f);
        let expected: FormulaSet = [
            f.clone(),
            bx(or(atom("p"), atom("q"))),
            or(atom("p"), atom("q")),
            or(bx(atom("p")), dia(atom("q"))),
            bx(atom("p")),
            dia(atom("q")),
            atom("p"),
            atom("q"),
        ]
        .into_iter()
        .collect();
        assert_eq!(c, expected);
        assert_eq!(f.fragment(), Fragment::Full);
        assert!(c.len() <= f.length());
    }

    #[test]
    fn next_only_fragment_is_in_both_fragments() {
        let f = next(atom("p"));
        assert_eq!(f.fragment(), Fragment::NextOnly);
        assert!(f.fragment().is_box_free() && f.fragment().is_diamond_free());
        assert!(!bx(atom("p")).fragment().is_box_free());
    }

    #[test]
    fn depths() {
        let f = imp(next(dia(atom("p"))), imp(atom("q"), bx(atom("r"))));
        assert_eq!(f.temporal_depth(), 2);
        assert_eq!(f.implication_depth(), 2);
        assert_eq!(f.depth(), 4);
    }

    #[test]
    fn subformula_closed_detection() {
        let f = and(atom("p"), atom("q"));
        assert!(is_subformula_closed(&closure(&f)));
        let only: FormulaSet = [f].into_iter().collect();
        assert!(!is_subformula_closed(&only));
    }
}
