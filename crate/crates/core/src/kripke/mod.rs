//! Finite dynamic posets: validation, evaluation and the three readings of `[]`.

pub(crate) mod format;
pub mod random;

use crate::syntax::Formula;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

pub use format::RawModel;
pub use random::{gen_random_model, ModelClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("world `{0}` declared twice")]
    DuplicateWorld(String),
    #[error("no step given for world `{0}`")]
    MissingStep(String),
    #[error("order is not antisymmetric: {0} and {1} lie on a cycle")]
    CycleError(String, String),
    #[error("model is not a valid dynamic poset: {0}")]
    ModelInvalid(String),
    #[error("could not generate a {0} model with {1} worlds")]
    GenerationFailure(String, usize),
}

/// Subset of the worlds of a model.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WorldSet(Vec<bool>);

impl WorldSet {
    pub fn empty(n: usize) -> Self {
        WorldSet(vec![false; n])
    }

    pub fn full(n: usize) -> Self {
        WorldSet(vec![true; n])
    }

    pub fn from_indices(n: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(n);
        for i in idx {
            s.0[i] = true;
        }
        s
    }

    pub fn contains(&self, w: usize) -> bool {
        self.0[w]
    }

    pub fn insert(&mut self, w: usize) {
        self.0[w] = true;
    }

    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn count(&self) -> usize {
        self.0.iter().filter(|b| **b).count()
    }

    pub fn is_full(&self) -> bool {
        self.0.iter().all(|b| *b)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i)
    }

    pub fn union(&self, o: &Self) -> Self {
        WorldSet(self.0.iter().zip(&o.0).map(|(a, b)| *a || *b).collect())
    }

    pub fn intersect(&self, o: &Self) -> Self {
        WorldSet(self.0.iter().zip(&o.0).map(|(a, b)| *a && *b).collect())
    }

    pub fn complement(&self) -> Self {
        WorldSet(self.0.iter().map(|a| !a).collect())
    }
}

/// Validated finite dynamic poset with an upward-closed valuation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
    step: Vec<usize>,
    val: BTreeMap<String, WorldSet>,
}

/// A failed structural check together with its witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Failure {
    /// `w <= v` but `step(w) <= step(v)` fails.
    NotContinuous { w: String, v: String },
    /// `w` satisfies the atom, `v >= w` does not.
    NotUpClosed { atom: String, w: String, v: String },
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::NotContinuous { w, v } => write!(f, "not continuous: {w} <= {v} but their steps are unordered"),
            Failure::NotUpClosed { atom, w, v } => write!(f, "val {atom} not upward closed: {w} in, {v} out"),
        }
    }
}

/// How to treat an order whose closure has cycles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CyclePolicy {
    Reject,
    /// Merge each cycle into a single world.
    Quotient,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub valid: bool,
    pub continuous: bool,
    pub open: bool,
    /// First `(w, v)` with `v >= step(w)` and no `w' >= w` stepping to `v`.
    pub open_witness: Option<(String, String)>,
    pub persistent: bool,
    pub failures: Vec<Failure>,
    /// Merged classes when the quotient policy was applied.
    pub merged: Vec<Vec<String>>,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "valid: {}", self.valid)?;
        writeln!(f, "continuous: {}", self.continuous)?;
        match &self.open_witness {
            None => writeln!(f, "open: true")?,
            Some((w, v)) => writeln!(f, "open: false (no world above {w} steps to {v})")?,
        }
        writeln!(f, "persistent: {}", self.persistent)?;
        for class in &self.merged {
            writeln!(f, "merged: {}", class.join(" "))?;
        }
        for x in &self.failures {
            writeln!(f, "{x}")?;
        }
        Ok(())
    }
}

pub(crate) fn reflexive_transitive(n: usize, pairs: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut leq = vec![vec![false; n]; n];
    for (i, row) in leq.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in pairs {
        leq[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if leq[i][k] {
                let above = leq[k].clone();
                for (cell, up) in leq[i].iter_mut().zip(above) {
                    *cell |= up;
                }
            }
        }
    }
    leq
}

/// Checks a raw model; cycles in the order are an error.
pub fn validate_model(raw: &RawModel) -> Result<ValidationReport, ModelError> {
    validate_model_with(raw, CyclePolicy::Reject)
}

pub fn validate_model_with(raw: &RawModel, policy: CyclePolicy) -> Result<ValidationReport, ModelError> {
    let (q, merged) = quotient(raw, policy)?;
    let n = q.worlds.len();
    let leq = reflexive_transitive(n, &q.order);
    let step = q.steps()?;
    let name = |i: usize| q.worlds[i].clone();
    let mut failures = Vec::new();
    for w in 0..n {
        for v in 0..n {
            if leq[w][v] && !leq[step[w]][step[v]] {
                failures.push(Failure::NotContinuous { w: name(w), v: name(v) });
            }
        }
    }
    let continuous = failures.is_empty();
    for (atom, ws) in &q.val {
        for &w in ws {
            for (v, _) in leq[w].iter().enumerate().filter(|(_, &up)| up) {
                if !ws.contains(&v) {
                    failures.push(Failure::NotUpClosed { atom: atom.clone(), w: name(w), v: name(v) });
                }
            }
        }
    }
    let open_witness = open_violation(&leq, &step).map(|(w, v)| (name(w), name(v)));
    let open = open_witness.is_none();
    Ok(ValidationReport {
        valid: failures.is_empty(),
        continuous,
        open,
        open_witness,
        persistent: continuous && open,
        failures,
        merged,
    })
}

fn open_violation(leq: &[Vec<bool>], step: &[usize]) -> Option<(usize, usize)> {
    let n = step.len();
    for w in 0..n {
        for v in 0..n {
            if leq[step[w]][v] && !(0..n).any(|u| leq[w][u] && step[u] == v) {
                return Some((w, v));
            }
        }
    }
    None
}

fn quotient(raw: &RawModel, policy: CyclePolicy) -> Result<(RawModel, Vec<Vec<String>>), ModelError> {
    let n = raw.worlds.len();
    let leq = reflexive_transitive(n, &raw.order);
    let mut class = vec![usize::MAX; n];
    let mut reps = Vec::new();
    let mut merged = Vec::new();
    for i in 0..n {
        if class[i] != usize::MAX {
            continue;
        }
        let members: Vec<usize> = (i..n).filter(|&j| leq[i][j] && leq[j][i]).collect();
        if members.len() > 1 {
            if policy == CyclePolicy::Reject {
                return Err(ModelError::CycleError(raw.worlds[i].clone(), raw.worlds[members[1]].clone()));
            }
            merged.push(members.iter().map(|&j| raw.worlds[j].clone()).collect());
        }
        for &j in &members {
            class[j] = reps.len();
        }
        reps.push(i);
    }
    if merged.is_empty() {
        return Ok((raw.clone(), merged));
    }
    let worlds = reps.iter().map(|&r| raw.worlds[r].clone()).collect();
    let order = raw.order.iter().map(|&(a, b)| (class[a], class[b])).collect();
    let map = reps.iter().map(|&r| raw.map[r].map(|s| class[s])).collect();
    let val = raw
        .val
        .iter()
        .map(|(k, ws)| {
            let mut cs: Vec<usize> = ws.iter().map(|&w| class[w]).collect();
            cs.sort();
            cs.dedup();
            (k.clone(), cs)
        })
        .collect();
    Ok((RawModel { worlds, order, map, val }, merged))
}

impl Model {
    /// Builds a model, rejecting cyclic orders and invalid structure.
    pub fn from_raw(raw: &RawModel) -> Result<Model, ModelError> {
        Self::from_raw_with(raw, CyclePolicy::Reject)
    }

    pub fn from_raw_with(raw: &RawModel, policy: CyclePolicy) -> Result<Model, ModelError> {
        let report = validate_model_with(raw, policy)?;
        if !report.valid {
            let msg: Vec<String> = report.failures.iter().map(|f| f.to_string()).collect();
            return Err(ModelError::ModelInvalid(msg.join("; ")));
        }
        let (q, _) = quotient(raw, policy)?;
        let n = q.worlds.len();
        let leq = reflexive_transitive(n, &q.order);
        let step = q.steps()?;
        let val = q.val.iter().map(|(k, ws)| (k.clone(), WorldSet::from_indices(n, ws.iter().copied()))).collect();
        Ok(Model { names: q.worlds, leq, step, val })
    }

    pub fn from_text(text: &str) -> Result<Model, ModelError> {
        Self::from_raw(&RawModel::parse(text)?)
    }

    /// Builds a model from explicit parts; `order` is closed reflexively and transitively.
    pub fn new(
        names: Vec<String>,
        order: Vec<(usize, usize)>,
        step: Vec<usize>,
        val: BTreeMap<String, Vec<usize>>,
    ) -> Result<Model, ModelError> {
        let raw = RawModel { worlds: names, order, map: step.into_iter().map(Some).collect(), val };
        Self::from_raw(&raw)
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, w: usize) -> &str {
        &self.names[w]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn leq(&self, w: usize, v: usize) -> bool {
        self.leq[w][v]
    }

    pub fn step(&self, w: usize) -> usize {
        self.step[w]
    }

    pub fn valuation(&self, atom: &str) -> WorldSet {
        self.val.get(atom).cloned().unwrap_or_else(|| WorldSet::empty(self.size()))
    }

    pub fn atoms(&self) -> impl Iterator<Item = &String> {
        self.val.keys()
    }

    pub fn is_open(&self) -> bool {
        open_violation(&self.leq, &self.step).is_none()
    }

    pub fn to_raw(&self) -> RawModel {
        let n = self.size();
        let mut order = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let covers =
                    a != b && self.leq[a][b] && !(0..n).any(|c| c != a && c != b && self.leq[a][c] && self.leq[c][b]);
                if covers {
                    order.push((a, b));
                }
            }
        }
        RawModel {
            worlds: self.names.clone(),
            order,
            map: self.step.iter().map(|&s| Some(s)).collect(),
            val: self.val.iter().map(|(k, s)| (k.clone(), s.iter().collect())).collect(),
        }
    }

    /// Serializes in the line-oriented model format.
    pub fn to_text(&self) -> String {
        self.to_raw().to_text()
    }

    /// `{w : every v >= w lies in s}`.
    pub fn interior(&self, s: &WorldSet) -> WorldSet {
        let n = self.size();
        WorldSet((0..n).map(|w| (0..n).all(|v| !self.leq[w][v] || s.contains(v))).collect())
    }

    /// `{w : step(w) in s}`.
    pub fn preimage(&self, s: &WorldSet) -> WorldSet {
        WorldSet(self.step.iter().map(|&t| s.contains(t)).collect())
    }

    pub fn is_up_closed(&self, s: &WorldSet) -> bool {
        self.interior(s) == *s
    }

    /// Orbit of `w` up to and including the first repeated world.
    pub fn orbit(&self, w: usize) -> Vec<usize> {
        let mut seen = vec![false; self.size()];
        let mut out = Vec::new();
        let mut x = w;
        while !seen[x] {
            seen[x] = true;
            out.push(x);
            x = self.step[x];
        }
        out
    }
}

/// The truth set of `f`.
pub fn eval(m: &Model, f: &Formula) -> WorldSet {
    let n = m.size();
    match f {
        Formula::Bottom => WorldSet::empty(n),
        Formula::Atom(p) => m.valuation(p),
        Formula::And(a, b) => eval(m, a).intersect(&eval(m, b)),
        Formula::Or(a, b) => eval(m, a).union(&eval(m, b)),
        Formula::Implies(a, b) => m.interior(&eval(m, a).complement().union(&eval(m, b))),
        Formula::Next(a) => m.preimage(&eval(m, a)),
        Formula::Eventually(a) => {
            let mut acc = eval(m, a);
            loop {
                let grown = acc.union(&m.preimage(&acc));
                if grown == acc {
                    return acc;
                }
                acc = grown;
            }
        }
        Formula::Henceforth(a) => orbit_box(m, &eval(m, a)),
    }
}

fn orbit_box(m: &Model, s: &WorldSet) -> WorldSet {
    WorldSet((0..m.size()).map(|w| m.orbit(w).iter().all(|&x| s.contains(x))).collect())
}

/// Three computations of `[]f`: greatest invariant open subset, interior of the
/// intersection of all preimages, and the orbit check.
pub fn box_variants(m: &Model, f: &Formula) -> (WorldSet, WorldSet, WorldSet) {
    let s = eval(m, f);
    let mut a = m.interior(&s);
    loop {
        let next = m.interior(&a.intersect(&m.preimage(&a)));
        if next == a {
            break;
        }
        a = next;
    }
    let mut pre = s.clone();
    let mut meet = s.clone();
    for _ in 0..m.size() {
        pre = m.preimage(&pre);
        meet = meet.intersect(&pre);
    }
    let b = m.interior(&meet);
    let c = orbit_box(m, &s);
    (a, b, c)
}

/// Whether `f` holds everywhere, with a failing world otherwise.
pub fn check_validity(m: &Model, f: &Formula) -> (bool, Option<usize>) {
    let s = eval(m, f);
    match (0..m.size()).find(|&w| !s.contains(w)) {
        None => (true, None),
        Some(w) => (false, Some(w)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    const FS_MODEL: &str = "worlds: w0 w1 w2\norder: w1<=w2\nmap: w0->w1 w1->w1 w2->w2\nval p: w2\nval q:\n";

    fn fs_model() -> Model {
        Model::from_text(FS_MODEL).unwrap()
    }

    fn names(m: &Model, s: &WorldSet) -> Vec<String> {
        s.iter().map(|w| m.name(w).to_string()).collect()
    }

    #[test]
    fn countermodel_is_continuous_not_open() {
        let r = validate_model(&RawModel::parse(FS_MODEL).unwrap()).unwrap();
        assert!(r.valid && r.continuous && !r.open && !r.persistent);
        assert_eq!(r.open_witness, Some(("w0".into(), "w2".into())));
    }

    #[test]
    fn identity_step_is_open() {
        let r = validate_model(&RawModel::parse("worlds: a b c\norder: a<=b a<=c\nmap: a->a b->b c->c\n").unwrap())
            .unwrap();
        assert!(r.valid && r.open && r.persistent);
    }

    #[test]
    fn swapping_chain_is_not_continuous() {
        let r = validate_model(&RawModel::parse("worlds: a b\norder: a<=b\nmap: a->b b->a\n").unwrap()).unwrap();
        assert!(!r.continuous);
        assert_eq!(r.failures[0], Failure::NotContinuous { w: "a".into(), v: "b".into() });
    }

    #[test]
    fn cycles_are_rejected_or_merged() {
        let raw = RawModel::parse("worlds: a b c\norder: a<=b b<=a\nmap: a->b b->a c->c\nval p: a b\n").unwrap();
        assert!(matches!(validate_model(&raw), Err(ModelError::CycleError(..))));
        let r = validate_model_with(&raw, CyclePolicy::Quotient).unwrap();
        assert_eq!(r.merged, vec![vec!["a".to_string(), "b".to_string()]]);
        let m = Model::from_raw_with(&raw, CyclePolicy::Quotient).unwrap();
        assert_eq!(m.size(), 2);
        assert_eq!(m.step(0), 0);
    }

    #[test]
    fn invalid_models_do_not_build() {
        let e = Model::from_text("worlds: a b\norder: a<=b\nmap: a->a b->b\nval p: a\n").unwrap_err();
        assert!(matches!(e, ModelError::ModelInvalid(_)));
    }

    #[test]
    fn fischer_servi_fails_at_root() {
        let m = fs_model();
        for text in ["(O p -> O q) -> O(p -> q)", "(<>p -> []q) -> [](p -> q)"] {
            let (ok, w) = check_validity(&m, &parse(text).unwrap());
            assert!(!ok);
            assert_eq!(w, Some(0), "{text}");
        }
    }

    #[test]
    fn hand_computed_sets() {
        let m = fs_model();
        let e = |t: &str| names(&m, &eval(&m, &parse(t).unwrap()));
        assert_eq!(e("O p"), vec!["w2"]);
        assert_eq!(e("O p -> O q"), vec!["w0"]);
        assert_eq!(e("p -> q"), vec!["w0"]);
        assert!(e("O(p -> q)").is_empty());
        assert_eq!(e("<>p"), vec!["w2"]);
        assert!(e("false").is_empty());
        assert_eq!(e("[](p -> p)").len(), 3);
    }

    #[test]
    fn constant_domain_is_valid_on_countermodel() {
        let m = fs_model();
        assert_eq!(check_validity(&m, &parse("[](p | q) -> []p | <>q").unwrap()), (true, None));
        assert_eq!(check_validity(&m, &parse("p -> p").unwrap()), (true, None));
    }

    #[test]
    fn box_variants_agree_on_countermodel() {
        let m = fs_model();
        let (a, b, c) = box_variants(&m, &parse("p -> q").unwrap());
        assert_eq!(a, b);
        assert_eq!(b, c);
        assert!(c.iter().next().is_none());
        let (a, b, c) = box_variants(&m, &parse("false -> false").unwrap());
        assert!(a.is_full() && b.is_full() && c.is_full());
    }

    #[test]
    fn text_round_trip() {
        let m = fs_model();
        assert_eq!(Model::from_text(&m.to_text()).unwrap(), m);
    }
}
