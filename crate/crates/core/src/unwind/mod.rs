//! Typed paths over quasimodels and their unwinding into dynamic posets.

mod limit;

pub use limit::{
    conservativity_check, conservativity_check_from, weak_limit, weak_limit_with_budget, BoundRow,
    ConservativityReport, Mode, WeakLimit, DEFAULT_BUDGET,
};

use crate::kripke::ModelError;
use crate::quasimodel::{Quasimodel, TwoSidedType};
use crate::syntax::{Formula, FormulaSet};
use std::fmt;
use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum UnwindError {
    #[error("typed path is empty")]
    EmptyPath,
    #[error("position {at}: world is not a successor of the previous one")]
    NotAPath { at: usize },
    #[error("position {at}: type is not below the label of its world")]
    NotSquareBelow { at: usize },
    #[error("position {at}: type is not compatible with the previous type")]
    NotSensible { at: usize },
    #[error("`{v0}` is not above the first world `{w0}`")]
    NotAbove { w0: String, v0: String },
    #[error("the last type leaves a realized <> formula out: `{0}`")]
    NotRealizationClosed(String),
    #[error("host is not a quasimodel: {0}")]
    HostNotQuasimodel(String),
    #[error("weak limit exceeds {0} points")]
    Blowup(usize),
    #[error("{0}")]
    Precondition(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Worlds along a relation path, each with a type below its label.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypedPath {
    pub steps: Vec<(usize, TwoSidedType)>,
}

impl TypedPath {
    pub fn new(steps: Vec<(usize, TwoSidedType)>) -> Self {
        TypedPath { steps }
    }

    /// The one-point path `(w, label(w))`.
    pub fn at(q: &Quasimodel, w: usize) -> Self {
        TypedPath { steps: vec![(w, q.label(w).clone())] }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn worlds(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.0).collect()
    }

    pub fn types(&self) -> impl Iterator<Item = &TwoSidedType> {
        self.steps.iter().map(|s| &s.1)
    }

    /// Drops the first `k` positions.
    pub fn suffix(&self, k: usize) -> TypedPath {
        TypedPath { steps: self.steps[k.min(self.len())..].to_vec() }
    }

    pub fn is_terminal(&self) -> bool {
        self.steps.last().is_some_and(|(_, t)| t.pos.is_empty())
    }

    /// Each positive subformula set is contained in the previous one.
    pub fn is_proper(&self) -> bool {
        self.steps.windows(2).all(|p| p[1].1.sub_pos().is_subset(&p[0].1.sub_pos()))
    }

    /// Checks the path, label and compatibility conditions.
    pub fn check(&self, q: &Quasimodel) -> Result<(), UnwindError> {
        for (i, (w, t)) in self.steps.iter().enumerate() {
            if !t.sqsub_t(q.label(*w)) {
                return Err(UnwindError::NotSquareBelow { at: i });
            }
            if i > 0 {
                let (u, s) = &self.steps[i - 1];
                if !q.successors(*u).contains(w) {
                    return Err(UnwindError::NotAPath { at: i });
                }
                if !s.s_t(t) {
                    return Err(UnwindError::NotSensible { at: i });
                }
            }
        }
        Ok(())
    }

    /// `self` is pointwise below a prefix of `other`.
    pub fn below(&self, other: &TypedPath, q: &Quasimodel) -> bool {
        self.len() <= other.len()
            && self.steps.iter().zip(&other.steps).all(|((w, a), (v, b))| q.leq(*w, *v) && a.leq_t(b))
    }

    pub fn render(&self, q: &Quasimodel) -> String {
        if self.is_empty() {
            return "eps".into();
        }
        let items: Vec<String> = self.steps.iter().map(|(w, t)| format!("({}, {t})", q.name(*w))).collect();
        format!("[{}]", items.join(", "))
    }
}

impl fmt::Display for TypedPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.steps.iter().map(|(w, t)| format!("({w}, {t})")).collect();
        write!(f, "[{}]", items.join(", "))
    }
}

/// Types `phi0, l(w1)|sub(phi0+), ...` along a relation path.
pub fn proper_types(q: &Quasimodel, path: &[usize], phi0: TwoSidedType) -> Result<TypedPath, UnwindError> {
    let Some(&w0) = path.first() else {
        return Err(UnwindError::EmptyPath);
    };
    if !phi0.sqsub_t(q.label(w0)) {
        return Err(UnwindError::NotSquareBelow { at: 0 });
    }
    let mut steps = vec![(w0, phi0)];
    for (i, &w) in path.iter().enumerate().skip(1) {
        if !q.successors(path[i - 1]).contains(&w) {
            return Err(UnwindError::NotAPath { at: i });
        }
        let sigma = steps[i - 1].1.sub_pos();
        steps.push((w, q.label(w).restrict_unchecked(&sigma)));
    }
    Ok(TypedPath { steps })
}

/// Lifts a typed path to start at `v0`, following the least confluent successors and taking full labels.
pub fn lift_path(q: &Quasimodel, tp: &TypedPath, v0: usize) -> Result<TypedPath, UnwindError> {
    let worlds = lift_worlds(q, tp, v0)?;
    Ok(TypedPath { steps: worlds.into_iter().map(|v| (v, q.label(v).clone())).collect() })
}

fn lift_worlds(q: &Quasimodel, tp: &TypedPath, v0: usize) -> Result<Vec<usize>, UnwindError> {
    let Some(&(w0, _)) = tp.steps.first() else {
        return Err(UnwindError::EmptyPath);
    };
    if !q.leq(w0, v0) {
        return Err(UnwindError::NotAbove { w0: q.name(w0).into(), v0: q.name(v0).into() });
    }
    let mut out = vec![v0];
    for (i, (w, _)) in tp.steps.iter().enumerate().skip(1) {
        let prev = out[i - 1];
        let next = q.successors(prev).iter().copied().find(|&v| q.leq(*w, v)).ok_or_else(|| {
            UnwindError::HostNotQuasimodel(format!("no successor of {} lies above {}", q.name(prev), q.name(*w)))
        })?;
        out.push(next);
    }
    Ok(out)
}

/// Formulas a successor type has to accept.
fn forced(t: &TwoSidedType) -> FormulaSet {
    t.pos
        .iter()
        .filter_map(|g| match g {
            Formula::Next(a) => Some((**a).clone()),
            Formula::Eventually(a) if !t.pos.contains(a) => Some(g.clone()),
            _ => None,
        })
        .collect()
}

/// Least subset of `label(v).pos` containing `seed` and closed under the type clauses and realization.
fn close(q: &Quasimodel, v: usize, seed: FormulaSet) -> TwoSidedType {
    let label = q.label(v);
    let mut pos = FormulaSet::new();
    let mut todo: Vec<Formula> = seed.into_iter().collect();
    while let Some(g) = todo.pop() {
        if !label.pos.contains(&g) || !pos.insert(g.clone()) {
            continue;
        }
        match &g {
            Formula::And(a, b) => {
                todo.push((**a).clone());
                todo.push((**b).clone());
            }
            Formula::Or(a, b) => todo.push(if label.pos.contains(a) { (**a).clone() } else { (**b).clone() }),
            Formula::Implies(a, b) if !label.neg.contains(a) => todo.push((**b).clone()),
            Formula::Eventually(a) if label.pos.contains(a) => todo.push((**a).clone()),
            _ => {}
        }
    }
    TwoSidedType { neg: label.neg.clone(), pos }
}

/// Least type at successor `v` compatible with `t`.
pub(crate) fn minimal_successor(q: &Quasimodel, t: &TwoSidedType, v: usize, extra: &FormulaSet) -> TwoSidedType {
    let mut seed = forced(t);
    seed.extend(extra.iter().cloned());
    close(q, v, seed)
}

/// Least type at `v` accepting `seed`.
pub(crate) fn minimal_type(q: &Quasimodel, v: usize, seed: FormulaSet) -> TwoSidedType {
    close(q, v, seed)
}

/// Every positive `<>f` whose body holds at `w` has its body in `t`.
pub fn is_realization_closed(q: &Quasimodel, w: usize, t: &TwoSidedType) -> bool {
    realization_gap(q, w, t).is_none()
}

fn realization_gap<'a>(q: &Quasimodel, w: usize, t: &'a TwoSidedType) -> Option<&'a Formula> {
    t.pos.iter().find(|g| matches!(g, Formula::Eventually(a) if q.label(w).pos.contains(a) && !t.pos.contains(a)))
}

fn least_successor(q: &Quasimodel, w: usize) -> Result<usize, UnwindError> {
    q.successors(w)
        .first()
        .copied()
        .ok_or_else(|| UnwindError::HostNotQuasimodel(format!("{} has no successor", q.name(w))))
}

/// Extends a typed path until its last positive set is empty.
///
/// Each round removes the least (by rendering) maximal temporal formula of the last type: `O f` and
/// realized `<>f` take one step; an unrealized `<>f` follows the shortest relation path to a world
/// accepting `f`, then takes one more step. Successor types are the least ones compatible with
/// their predecessor, so the last type must not leave out a body its label already accepts.
pub fn extend_terminal(q: &Quasimodel, tp: &TypedPath) -> Result<TypedPath, UnwindError> {
    tp.check(q)?;
    let Some((w, t)) = tp.steps.last() else {
        return Err(UnwindError::EmptyPath);
    };
    if let Some(g) = realization_gap(q, *w, t) {
        return Err(UnwindError::NotRealizationClosed(g.to_string()));
    }
    let mut out = tp.clone();
    let none = FormulaSet::new();
    loop {
        let (w, t) = out.steps.last().unwrap().clone();
        if t.pos.is_empty() {
            return Ok(out);
        }
        let choice = t.maximal_temporals().into_iter().min_by_key(|g| g.to_string()).cloned();
        if let Some(Formula::Eventually(a)) = &choice {
            if !t.pos.contains(a) {
                let path = q.shortest_path(w, |u| q.label(u).pos.contains(a)).ok_or_else(|| {
                    UnwindError::HostNotQuasimodel(format!("`<>{a}` is never realized from {}", q.name(w)))
                })?;
                for &u in &path[1..] {
                    let prev = &out.steps.last().unwrap().1;
                    let next = minimal_successor(q, prev, u, &none);
                    out.steps.push((u, next));
                }
            }
        }
        let (u, prev) = out.steps.last().unwrap().clone();
        let v = least_successor(q, u)?;
        out.steps.push((v, minimal_successor(q, &prev, v, &none)));
    }
}

/// Maximum length of [`extend_terminal`] output.
pub fn terminal_length_bound(q: &Quasimodel, tp: &TypedPath) -> usize {
    let norm = tp.steps.last().map_or(0, |(_, t)| t.sub_pos().len());
    tp.len() + norm * (q.size() + 1) + 1
}

/// Lifts `tp` above `v0` with the least types accepting `extra` at the start.
pub(crate) fn minimal_lift(
    q: &Quasimodel,
    tp: &TypedPath,
    v0: usize,
    extra: &FormulaSet,
) -> Result<TypedPath, UnwindError> {
    let worlds = lift_worlds(q, tp, v0)?;
    let mut steps: Vec<(usize, TwoSidedType)> = Vec::with_capacity(worlds.len());
    for (i, &v) in worlds.iter().enumerate() {
        let mut seed: FormulaSet = tp.steps[i].1.pos.clone();
        let t = if i == 0 {
            seed.extend(extra.iter().cloned());
            minimal_type(q, v, seed)
        } else {
            minimal_successor(q, &steps[i - 1].1, v, &seed)
        };
        steps.push((v, t));
    }
    Ok(TypedPath { steps })
}
