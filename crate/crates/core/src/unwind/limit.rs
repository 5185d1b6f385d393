//! Bounded weak limit models and the conservativity pipeline.

use super::{extend_terminal, minimal_lift, minimal_type, TypedPath, UnwindError};
use crate::kripke::{eval, validate_model, Model};
use crate::quasimodel::{validate_quasimodel, Quasimodel, TwoSidedType};
use crate::syntax::{closure, Formula, FormulaSet};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

/// Default cap on the number of points.
pub const DEFAULT_BUDGET: usize = 2000;

/// Terminal typed paths up to a length bound, as a dynamic poset model.
#[derive(Clone, Debug)]
pub struct WeakLimit {
    pub bound: usize,
    /// `points[0]` is the empty path.
    pub points: Vec<TypedPath>,
    /// Generated paths longer than the bound.
    pub missing: Vec<TypedPath>,
    /// Points named `eps`, `t1`, `t2`, ... in the order of `points`.
    pub model: Model,
    empty_neg: FormulaSet,
}

impl WeakLimit {
    pub fn index_of(&self, p: &TypedPath) -> Option<usize> {
        self.points.iter().position(|x| x == p)
    }

    /// First type of a point; the empty path refutes every refuted label formula.
    pub fn label(&self, i: usize) -> TwoSidedType {
        match self.points[i].steps.first() {
            Some((_, t)) => t.clone(),
            None => TwoSidedType::with_neg(self.empty_neg.clone()),
        }
    }

    /// Points where an implication-free subformula of `f` disagrees with the label.
    ///
    /// Only points at least `temporal_depth(f)` away from the bound are inspected.
    pub fn truth_violations(&self, f: &Formula) -> Vec<(usize, Formula)> {
        let depth = f.temporal_depth();
        let subs: Vec<Formula> = closure(f).into_iter().filter(|g| g.implication_depth() == 0).collect();
        let sets: Vec<_> = subs.iter().map(|g| eval(&self.model, g)).collect();
        let mut out = Vec::new();
        for (i, p) in self.points.iter().enumerate() {
            if p.len() + depth > self.bound {
                continue;
            }
            let t = self.label(i);
            for (g, s) in subs.iter().zip(&sets) {
                if (t.pos.contains(g) && !s.contains(i)) || (t.neg.contains(g) && s.contains(i)) {
                    out.push((i, g.clone()));
                }
            }
        }
        out
    }

    /// Labels increase along the order and successor labels are compatible.
    pub fn labels_coherent(&self) -> bool {
        let n = self.points.len();
        let labels: Vec<TwoSidedType> = (0..n).map(|i| self.label(i)).collect();
        let order_ok = (0..n).all(|a| (0..n).all(|b| !self.model.leq(a, b) || labels[a].leq_t(&labels[b])));
        let step_ok = (0..n).all(|a| self.points[a].len() < 2 || labels[a].s_t(&labels[self.model.step(a)]));
        order_ok && step_ok
    }
}

/// Weak limit with the default point budget.
pub fn weak_limit(q: &Quasimodel, bound: usize) -> Result<WeakLimit, UnwindError> {
    weak_limit_with_budget(q, bound, DEFAULT_BUDGET)
}

/// Closes the terminal extensions of all labels under shifts and implication witnesses.
pub fn weak_limit_with_budget(q: &Quasimodel, bound: usize, budget: usize) -> Result<WeakLimit, UnwindError> {
    if bound == 0 {
        return Err(UnwindError::Precondition("length bound must be at least 1".into()));
    }
    let report = validate_quasimodel(q);
    if !report.valid() {
        return Err(UnwindError::HostNotQuasimodel(report.failures[0].to_string()));
    }
    let n = q.size();
    let empty_neg: FormulaSet = q.labels().iter().flat_map(|t| t.neg.iter().cloned()).collect();
    let mut points: BTreeSet<TypedPath> = BTreeSet::new();
    let mut missing: BTreeSet<TypedPath> = BTreeSet::new();
    let mut work: Vec<TypedPath> = Vec::new();
    let mut add =
        |path: TypedPath, points: &mut BTreeSet<TypedPath>, work: &mut Vec<TypedPath>| -> Result<(), UnwindError> {
            if path.len() > bound {
                missing.insert(path.clone());
            }
            for k in 0..=path.len() {
                let s = path.suffix(k);
                if s.len() <= bound && points.insert(s.clone()) {
                    if points.len() > budget {
                        return Err(UnwindError::Blowup(budget));
                    }
                    work.push(s);
                }
            }
            Ok(())
        };
    add(TypedPath::default(), &mut points, &mut work)?;
    for w in 0..n {
        add(extend_terminal(q, &TypedPath::at(q, w))?, &mut points, &mut work)?;
    }
    while let Some(alpha) = work.pop() {
        let neg = match alpha.steps.first() {
            Some((_, t)) => t.neg.clone(),
            None => empty_neg.clone(),
        };
        for g in &neg {
            let Formula::Implies(a, b) = g else { continue };
            let fits = |v: usize| q.label(v).pos.contains(a) && q.label(v).neg.contains(b);
            let seed: FormulaSet = [(**a).clone()].into();
            let start = match alpha.steps.first() {
                Some(&(w0, _)) => {
                    let v0 = (0..n).find(|&v| q.leq(w0, v) && fits(v)).ok_or_else(|| {
                        UnwindError::HostNotQuasimodel(format!("no witness for `{g}` above {}", q.name(w0)))
                    })?;
                    minimal_lift(q, &alpha, v0, &seed)?
                }
                None => {
                    let v0 = (0..n)
                        .find(|&v| fits(v))
                        .ok_or_else(|| UnwindError::HostNotQuasimodel(format!("no witness for `{g}`")))?;
                    TypedPath::new(vec![(v0, minimal_type(q, v0, seed))])
                }
            };
            add(extend_terminal(q, &start)?, &mut points, &mut work)?;
        }
    }
    let mut points: Vec<TypedPath> = points.into_iter().collect();
    points.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    let index: BTreeMap<&TypedPath, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let names: Vec<String> = (0..points.len()).map(|i| if i == 0 { "eps".into() } else { format!("t{i}") }).collect();
    let mut order = Vec::new();
    for (i, a) in points.iter().enumerate() {
        for (j, b) in points.iter().enumerate() {
            if i != j && a.below(b, q) {
                order.push((i, j));
            }
        }
    }
    let step: Vec<usize> = points.iter().map(|p| index[&p.suffix(1)]).collect();
    let atoms: BTreeSet<String> = q.labels().iter().flat_map(|t| t.formulas()).flat_map(|g| g.atoms()).collect();
    let val: BTreeMap<String, Vec<usize>> = atoms
        .into_iter()
        .map(|p| {
            let at = Formula::Atom(p.clone());
            let ws = (0..points.len())
                .filter(|&i| points[i].steps.first().is_some_and(|(_, t)| t.pos.contains(&at)))
                .collect();
            (p, ws)
        })
        .collect();
    let model = Model::new(names, order, step, val)?;
    Ok(WeakLimit { bound, points, missing: missing.into_iter().collect(), model, empty_neg })
}

/// Whether the formula should hold or fail at the chosen world.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Satisfy,
    Falsify,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "satisfy" | "sat" => Ok(Mode::Satisfy),
            "falsify" | "fal" => Ok(Mode::Falsify),
            _ => Err(format!("unknown mode `{s}`")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Satisfy => "satisfy",
            Mode::Falsify => "falsify",
        })
    }
}

/// One bound of a conservativity run.
#[derive(Clone, Debug)]
pub struct BoundRow {
    pub bound: usize,
    pub points: usize,
    pub missing: usize,
    /// Whether the formula holds at the start path.
    pub holds: bool,
    pub model_valid: bool,
    pub truth_violations: usize,
}

#[derive(Clone, Debug)]
pub struct ConservativityReport {
    pub formula: Formula,
    pub world: String,
    pub mode: Mode,
    /// Terminal extension of the chosen world with its label.
    pub start: TypedPath,
    pub start_text: String,
    pub base_bound: usize,
    pub rows: Vec<BoundRow>,
    /// The weak limit at the base bound.
    pub limit: WeakLimit,
}

impl ConservativityReport {
    /// Every bound gives the verdict the mode asks for.
    pub fn agrees(&self) -> bool {
        let want = self.mode == Mode::Satisfy;
        self.rows.iter().all(|r| r.holds == want)
    }

    pub fn stable(&self) -> bool {
        self.rows.windows(2).all(|w| w[0].holds == w[1].holds)
    }

    pub fn models_valid(&self) -> bool {
        self.rows.iter().all(|r| r.model_valid)
    }

    pub fn passed(&self) -> bool {
        self.agrees() && self.stable() && self.models_valid() && self.rows.iter().all(|r| r.truth_violations == 0)
    }
}

impl fmt::Display for ConservativityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "formula: {}", self.formula)?;
        writeln!(f, "world: {} ({})", self.world, self.mode)?;
        writeln!(f, "start path: {}", self.start_text)?;
        for r in &self.rows {
            writeln!(
                f,
                "bound {}: {} points, {} cut off, holds = {}, model valid = {}, truth violations = {}",
                r.bound, r.points, r.missing, r.holds, r.model_valid, r.truth_violations
            )?;
        }
        writeln!(f, "agrees with mode: {}", self.agrees())?;
        writeln!(f, "stable across bounds: {}", self.stable())
    }
}

/// Unwinds `q` at bounds `L`, `L+1`, `L+2` and evaluates `f` at the terminal extension of `w`.
///
/// `L` is the start path length plus the temporal and implication depths of `f`.
pub fn conservativity_check(
    q: &Quasimodel,
    f: &Formula,
    w: &str,
    mode: Mode,
) -> Result<ConservativityReport, UnwindError> {
    conservativity_check_from(q, f, w, mode, None)
}

/// As [`conservativity_check`], starting from bound `base` instead of `L` when given.
pub fn conservativity_check_from(
    q: &Quasimodel,
    f: &Formula,
    w: &str,
    mode: Mode,
    base: Option<usize>,
) -> Result<ConservativityReport, UnwindError> {
    if !f.fragment().is_box_free() {
        return Err(UnwindError::Precondition(format!("`{f}` uses []")));
    }
    let wi = q.index(w).ok_or_else(|| UnwindError::Precondition(format!("unknown world `{w}`")))?;
    let side = match mode {
        Mode::Satisfy => &q.label(wi).pos,
        Mode::Falsify => &q.label(wi).neg,
    };
    if !side.contains(f) {
        let which = if mode == Mode::Satisfy { "positive" } else { "negative" };
        return Err(UnwindError::Precondition(format!("`{f}` is not {which} at {w}")));
    }
    let start = extend_terminal(q, &TypedPath::at(q, wi))?;
    let base = base.unwrap_or(start.len() + f.temporal_depth() + f.implication_depth()).max(1);
    let mut rows = Vec::new();
    let mut first = None;
    for bound in base..base + 3 {
        let wl = weak_limit(q, bound)?;
        let at = wl.index_of(&start).expect("start path is a point");
        let holds = eval(&wl.model, f).contains(at);
        let model_valid = validate_model(&wl.model.to_raw()).is_ok_and(|r| r.valid);
        rows.push(BoundRow {
            bound,
            points: wl.points.len(),
            missing: wl.missing.len(),
            holds,
            model_valid,
            truth_violations: wl.truth_violations(f).len(),
        });
        first.get_or_insert(wl);
    }
    Ok(ConservativityReport {
        formula: f.clone(),
        world: w.to_string(),
        mode,
        start_text: start.render(q),
        start,
        base_bound: base,
        rows,
        limit: first.unwrap(),
    })
}
