//! Labelled frames with a successor relation, and their text format.
//!
//! ```text
//! worlds: a b
//! order: a<=b
//! rel: a->a a->b b->b
//! label a: neg{p -> q, q}
//! label b: neg{q} pos{p}
//! ```

use super::{parse_type, QmError, TwoSidedType, TypeViolation};
use crate::kripke::format::{content_lines, format_err, lookup, pair_list, world_list};
use crate::kripke::{eval, reflexive_transitive, Model, ModelError};
use crate::syntax::{Formula, FormulaSet};
use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

/// Worlds with a partial order, a serial-or-not relation and type labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quasimodel {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
    rel: Vec<Vec<usize>>,
    labels: Vec<TwoSidedType>,
}

impl Quasimodel {
    /// `order` is closed reflexively and transitively; cycles are rejected.
    pub fn new(
        names: Vec<String>,
        order: &[(usize, usize)],
        rel: &[(usize, usize)],
        labels: Vec<TwoSidedType>,
    ) -> Result<Self, QmError> {
        let n = names.len();
        if n == 0 {
            return Err(ModelError::Format { line: 0, message: "no worlds declared".into() }.into());
        }
        if labels.len() != n {
            return Err(ModelError::Format { line: 0, message: "one label per world is required".into() }.into());
        }
        let leq = reflexive_transitive(n, order);
        for a in 0..n {
            for b in a + 1..n {
                if leq[a][b] && leq[b][a] {
                    return Err(ModelError::CycleError(names[a].clone(), names[b].clone()).into());
                }
            }
        }
        let mut succ = vec![Vec::new(); n];
        for &(a, b) in rel {
            succ[a].push(b);
        }
        for s in &mut succ {
            s.sort();
            s.dedup();
        }
        for t in &labels {
            if let Some(g) = t.formulas().into_iter().find(|g| !g.fragment().is_box_free()) {
                return Err(QmError::BoxInLabel(g.to_string()));
            }
        }
        Ok(Quasimodel { names, leq, rel: succ, labels })
    }

    /// Labels each world of `m` with the formulas of `sigma` it satisfies and refutes.
    pub fn from_model(m: &Model, sigma: &FormulaSet) -> Result<Self, QmError> {
        let n = m.size();
        let truth: Vec<(Formula, Vec<bool>)> = sigma
            .iter()
            .map(|g| {
                let s = eval(m, g);
                (g.clone(), (0..n).map(|w| s.contains(w)).collect())
            })
            .collect();
        let labels = (0..n)
            .map(|w| {
                let mut t = TwoSidedType::default();
                for (g, holds) in &truth {
                    if holds[w] {
                        t.pos.insert(g.clone());
                    } else {
                        t.neg.insert(g.clone());
                    }
                }
                t
            })
            .collect();
        let mut order = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && m.leq(a, b) {
                    order.push((a, b));
                }
            }
        }
        let rel: Vec<(usize, usize)> = (0..n).map(|w| (w, m.step(w))).collect();
        Quasimodel::new(m.names().to_vec(), &order, &rel, labels)
    }

    pub fn from_text(text: &str) -> Result<Self, QmError> {
        let mut worlds: Option<Vec<String>> = None;
        let mut order = Vec::new();
        let mut rel = Vec::new();
        let mut labels: Vec<Option<TwoSidedType>> = Vec::new();
        for (line, l) in content_lines(text) {
            let (key, body) = l.split_once(':').ok_or_else(|| format_err(line, "expected `key: ...`"))?;
            let key = key.trim();
            if key == "worlds" {
                if worlds.is_some() {
                    return Err(format_err(line, "`worlds` given twice").into());
                }
                let ws = world_list(line, body)?;
                labels = vec![None; ws.len()];
                worlds = Some(ws);
                continue;
            }
            let ws = worlds.as_ref().ok_or_else(|| format_err(line, "`worlds` must come first"))?;
            if key == "order" {
                order.extend(pair_list(ws, line, body, "<=")?);
            } else if key == "rel" {
                rel.extend(pair_list(ws, line, body, "->")?);
            } else if let Some(w) = key.strip_prefix("label ") {
                let i = lookup(ws, w.trim())?;
                if labels[i].is_some() {
                    return Err(format_err(line, format!("`{}` labelled twice", w.trim())).into());
                }
                labels[i] = Some(parse_type(body).map_err(|e| format_err(line, e))?);
            } else {
                return Err(format_err(line, format!("unknown key `{key}`")).into());
            }
        }
        let names = worlds.ok_or_else(|| format_err(0, "no worlds declared"))?;
        let labels = labels
            .into_iter()
            .enumerate()
            .map(|(i, t)| t.ok_or_else(|| format_err(0, format!("no label for `{}`", names[i]))))
            .collect::<Result<Vec<_>, _>>()?;
        Quasimodel::new(names, &order, &rel, labels)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("worlds: {}\n", self.names.join(" "));
        let mut order = Vec::new();
        for a in 0..self.size() {
            for b in 0..self.size() {
                if a != b
                    && self.leq[a][b]
                    && !(0..self.size()).any(|c| c != a && c != b && self.leq[a][c] && self.leq[c][b])
                {
                    order.push(format!("{}<={}", self.names[a], self.names[b]));
                }
            }
        }
        if !order.is_empty() {
            out.push_str(&format!("order: {}\n", order.join(" ")));
        }
        let rel: Vec<String> = (0..self.size())
            .flat_map(|a| self.rel[a].iter().map(move |&b| (a, b)))
            .map(|(a, b)| format!("{}->{}", self.names[a], self.names[b]))
            .collect();
        out.push_str(&format!("rel: {}\n", rel.join(" ")).replace(": \n", ":\n"));
        for (w, t) in self.labels.iter().enumerate() {
            out.push_str(&format!("label {}: {t}\n", self.names[w]));
        }
        out
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

    /// Successors in increasing index order.
    pub fn successors(&self, w: usize) -> &[usize] {
        &self.rel[w]
    }

    pub fn label(&self, w: usize) -> &TwoSidedType {
        &self.labels[w]
    }

    pub fn labels(&self) -> &[TwoSidedType] {
        &self.labels
    }

    /// Whether every world has exactly one successor.
    pub fn is_deterministic(&self) -> bool {
        self.rel.iter().all(|s| s.len() == 1)
    }

    /// Shortest path `w, ..., v` with `goal(v)`, least in index order among the shortest.
    pub fn shortest_path(&self, w: usize, goal: impl Fn(usize) -> bool) -> Option<Vec<usize>> {
        let n = self.size();
        let mut prev = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([w]);
        seen[w] = true;
        while let Some(u) = queue.pop_front() {
            if goal(u) {
                let mut path = vec![u];
                let mut x = u;
                while x != w {
                    x = prev[x];
                    path.push(x);
                }
                path.reverse();
                return Some(path);
            }
            for &v in &self.rel[u] {
                if !seen[v] {
                    seen[v] = true;
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        None
    }
}

impl FromStr for Quasimodel {
    type Err = QmError;

    fn from_str(s: &str) -> Result<Self, QmError> {
        Quasimodel::from_text(s)
    }
}

/// A violated quasimodel condition with its witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QmFailure {
    BadType { w: String, violation: TypeViolation },
    NotMonotone { w: String, v: String },
    NoImplicationWitness { w: String, formula: Formula },
    NotSerial { w: String },
    NotForwardConfluent { w: String, w2: String, v: String },
    NotSensible { w: String, v: String },
    NotOmegaSensible { w: String, formula: Formula },
}

impl fmt::Display for QmFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QmFailure::BadType { w, violation } => write!(f, "label of {w} is not a type: {violation}"),
            QmFailure::NotMonotone { w, v } => write!(f, "not monotone: {w} <= {v} but their labels are not ordered"),
            QmFailure::NoImplicationWitness { w, formula } => {
                write!(f, "no world above {w} refutes `{formula}` with its antecedent positive")
            }
            QmFailure::NotSerial { w } => write!(f, "not serial: {w} has no successor"),
            QmFailure::NotForwardConfluent { w, w2, v } => {
                write!(f, "not forward-confluent: {w} <= {w2} and {w} -> {v}, but no successor of {w2} lies above {v}")
            }
            QmFailure::NotSensible { w, v } => write!(f, "not sensible: {w} -> {v} but the labels are not compatible"),
            QmFailure::NotOmegaSensible { w, formula } => {
                write!(f, "not omega-sensible: `{formula}` is positive at {w} but never realized")
            }
        }
    }
}

/// Result of [`validate_quasimodel`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QmReport {
    pub failures: Vec<QmFailure>,
}

impl QmReport {
    pub fn valid(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for QmReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.valid() {
            return writeln!(f, "valid quasimodel");
        }
        for x in &self.failures {
            writeln!(f, "{x}")?;
        }
        Ok(())
    }
}

/// Checks the type, frame and relational conditions exhaustively.
pub fn validate_quasimodel(q: &Quasimodel) -> QmReport {
    let n = q.size();
    let name = |w: usize| q.names[w].clone();
    let mut failures = Vec::new();
    for w in 0..n {
        for violation in q.labels[w].violations() {
            failures.push(QmFailure::BadType { w: name(w), violation });
        }
    }
    for w in 0..n {
        for v in 0..n {
            if q.leq[w][v] && !q.labels[w].leq_t(&q.labels[v]) {
                failures.push(QmFailure::NotMonotone { w: name(w), v: name(v) });
            }
        }
    }
    for w in 0..n {
        for g in &q.labels[w].neg {
            if let Formula::Implies(a, b) = g {
                let ok = (0..n).any(|v| q.leq[w][v] && q.labels[v].pos.contains(a) && q.labels[v].neg.contains(b));
                if !ok {
                    failures.push(QmFailure::NoImplicationWitness { w: name(w), formula: g.clone() });
                }
            }
        }
    }
    for w in 0..n {
        if q.rel[w].is_empty() {
            failures.push(QmFailure::NotSerial { w: name(w) });
        }
    }
    for w in 0..n {
        for w2 in 0..n {
            if !q.leq[w][w2] {
                continue;
            }
            for &v in &q.rel[w] {
                if !q.rel[w2].iter().any(|&v2| q.leq[v][v2]) {
                    failures.push(QmFailure::NotForwardConfluent { w: name(w), w2: name(w2), v: name(v) });
                }
            }
        }
    }
    for w in 0..n {
        for &v in &q.rel[w] {
            if !q.labels[w].s_t(&q.labels[v]) {
                failures.push(QmFailure::NotSensible { w: name(w), v: name(v) });
            }
        }
    }
    for w in 0..n {
        for g in &q.labels[w].pos {
            if let Formula::Eventually(a) = g {
                if q.shortest_path(w, |v| q.labels[v].pos.contains(a)).is_none() {
                    failures.push(QmFailure::NotOmegaSensible { w: name(w), formula: g.clone() });
                }
            }
        }
    }
    QmReport { failures }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{closure, parse};

    #[test]
    fn single_loop_examples() {
        let q: Quasimodel = "worlds: w\nrel: w->w\nlabel w: pos{p, <>p}\n".parse().unwrap();
        assert!(validate_quasimodel(&q).valid());
        let bad: Quasimodel = "worlds: w\nrel: w->w\nlabel w: pos{<>p}\n".parse().unwrap();
        let r = validate_quasimodel(&bad);
        assert_eq!(r.failures, vec![QmFailure::NotOmegaSensible { w: "w".into(), formula: parse("<>p").unwrap() }]);
        let stuck: Quasimodel = "worlds: w\nlabel w: pos{p}\n".parse().unwrap();
        assert_eq!(validate_quasimodel(&stuck).failures, vec![QmFailure::NotSerial { w: "w".into() }]);
    }

    #[test]
    fn implication_witness_and_monotony() {
        let text = "worlds: a b\norder: a<=b\nrel: a->a b->b\nlabel a: neg{p -> q, q}\nlabel b: neg{q} pos{p}\n";
        let q: Quasimodel = text.parse().unwrap();
        assert!(validate_quasimodel(&q).valid(), "{}", validate_quasimodel(&q));
        let flipped = text.replace("a<=b", "b<=a");
        let r = validate_quasimodel(&flipped.parse().unwrap());
        assert!(r.failures.iter().any(|f| matches!(f, QmFailure::NoImplicationWitness { .. })));
        assert!(r.failures.iter().any(|f| matches!(f, QmFailure::NotMonotone { .. })));
    }

    #[test]
    fn forward_confluence_and_sensibility() {
        let text =
            "worlds: a b c\norder: a<=b\nrel: a->c b->b c->c\nlabel a: neg{O p, p}\nlabel b: neg{p}\nlabel c: neg{p}\n";
        let r = validate_quasimodel(&text.parse().unwrap());
        assert!(r.failures.iter().any(|f| matches!(f, QmFailure::NotForwardConfluent { .. })));
        let text = "worlds: a\nrel: a->a\nlabel a: neg{p} pos{O p}\n";
        let r = validate_quasimodel(&text.parse().unwrap());
        assert_eq!(r.failures, vec![QmFailure::NotSensible { w: "a".into(), v: "a".into() }]);
    }

    #[test]
    fn text_round_trip_and_errors() {
        let text = "worlds: a b\norder: a<=b\nrel: a->a b->b\nlabel a: neg{q, p -> q}\nlabel b: neg{q} pos{p}\n";
        let q: Quasimodel = text.parse().unwrap();
        assert_eq!(q.to_text().parse::<Quasimodel>().unwrap(), q);
        assert!(matches!("worlds: a\nrel: a->a\n".parse::<Quasimodel>(), Err(QmError::Model(_))));
        assert!(matches!(
            "worlds: a\nrel: a->a\nlabel a: pos{[]p}\n".parse::<Quasimodel>(),
            Err(QmError::BoxInLabel(_))
        ));
        assert!(matches!(
            "worlds: a b\norder: a<=b b<=a\nrel: a->a b->b\nlabel a:\nlabel b:\n".parse::<Quasimodel>(),
            Err(QmError::Model(ModelError::CycleError(..)))
        ));
    }

    #[test]
    fn models_give_quasimodels() {
        let m = Model::from_text("worlds: a b\norder: a<=b\nmap: a->b b->b\nval p: b\n").unwrap();
        let q = Quasimodel::from_model(&m, &closure(&parse("<>p -> O p").unwrap())).unwrap();
        assert!(validate_quasimodel(&q).valid());
        assert!(q.is_deterministic());
        assert!(q.label(0).pos.contains(&parse("<>p").unwrap()));
        assert_eq!(q.shortest_path(0, |v| v == 1), Some(vec![0, 1]));
    }
}
