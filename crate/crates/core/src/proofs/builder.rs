//! Proof terms with hypotheses, compiled to Hilbert lines by bracket abstraction.

use super::{instantiate, schema, Derivation, Justification, Line, Subst};
use crate::syntax::{and, bx, dia, imp, next, or, parse, Formula};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("modus ponens: `{major}` does not apply to `{minor}`")]
    Mismatch { major: String, minor: String },
    #[error("{rule} needs a premise of the form {shape}, got `{found}`")]
    Shape { rule: &'static str, shape: &'static str, found: String },
    #[error("{0} applied to a premise that depends on a hypothesis")]
    OpenPremise(&'static str),
    #[error("hypothesis {0} is never discharged")]
    Undischarged(usize),
}

#[derive(Clone, Debug)]
enum Node {
    Hyp(usize),
    Ax(&'static str, Subst),
    Mp(Box<Pf>, Box<Pf>),
    Nec(Box<Pf>),
    IndBox(Box<Pf>),
    IndDia(Box<Pf>),
    Lam(usize, Box<Pf>),
}

/// A proof term; `lam` discharges a hypothesis.
#[derive(Clone, Debug)]
pub struct Pf {
    concl: Formula,
    node: Node,
    note: Option<String>,
}

impl Pf {
    pub fn concl(&self) -> &Formula {
        &self.concl
    }

    pub fn hyp(id: usize, f: Formula) -> Pf {
        Pf { concl: f, node: Node::Hyp(id), note: None }
    }

    /// Axiom instance; panics on an unknown schema name.
    pub fn ax(name: &'static str, fill: &[(&str, Formula)]) -> Pf {
        let s = schema(name).unwrap_or_else(|| panic!("unknown schema `{name}`"));
        let subst: Subst = fill.iter().map(|(v, f)| (v.to_string(), f.clone())).collect();
        Pf { concl: instantiate(&s.template, &subst), node: Node::Ax(s.name, subst), note: None }
    }

    /// From `major = A -> B` and `minor = A`, conclude `B`.
    pub fn mp(major: Pf, minor: Pf) -> Result<Pf, BuildError> {
        match &major.concl {
            Formula::Implies(a, b) if **a == minor.concl => {
                Ok(Pf { concl: (**b).clone(), node: Node::Mp(Box::new(major), Box::new(minor)), note: None })
            }
            _ => Err(BuildError::Mismatch { major: major.concl.to_string(), minor: minor.concl.to_string() }),
        }
    }

    pub fn nec(p: Pf) -> Pf {
        Pf { concl: next(p.concl.clone()), node: Node::Nec(Box::new(p)), note: None }
    }

    pub fn ind_box(p: Pf) -> Result<Pf, BuildError> {
        match &p.concl {
            Formula::Implies(a, b) if **b == next((**a).clone()) => {
                Ok(Pf { concl: imp((**a).clone(), bx((**a).clone())), node: Node::IndBox(Box::new(p)), note: None })
            }
            f => Err(BuildError::Shape { rule: "indbox", shape: "A -> O A", found: f.to_string() }),
        }
    }

    pub fn ind_dia(p: Pf) -> Result<Pf, BuildError> {
        match &p.concl {
            Formula::Implies(a, b) if **a == next((**b).clone()) => {
                Ok(Pf { concl: imp(dia((**b).clone()), (**b).clone()), node: Node::IndDia(Box::new(p)), note: None })
            }
            f => Err(BuildError::Shape { rule: "inddia", shape: "O A -> A", found: f.to_string() }),
        }
    }

    /// Discharges hypothesis `id` with formula `f`.
    pub fn lam(id: usize, f: Formula, body: Pf) -> Pf {
        Pf { concl: imp(f, body.concl.clone()), node: Node::Lam(id, Box::new(body)), note: None }
    }

    pub fn note(mut self, text: &str) -> Pf {
        self.note = Some(text.to_string());
        self
    }

    fn mentions(&self, id: usize) -> bool {
        match &self.node {
            Node::Hyp(h) => *h == id,
            Node::Ax(..) => false,
            Node::Mp(a, b) => a.mentions(id) || b.mentions(id),
            Node::Nec(p) | Node::IndBox(p) | Node::IndDia(p) | Node::Lam(_, p) => p.mentions(id),
        }
    }

    fn with_note(mut self, note: &Option<String>) -> Pf {
        if note.is_some() {
            self.note = note.clone();
        }
        self
    }

    /// Removes every `lam`.
    fn compile(&self) -> Result<Pf, BuildError> {
        let out = match &self.node {
            Node::Hyp(_) | Node::Ax(..) => self.clone(),
            Node::Mp(a, b) => Pf::mp(a.compile()?, b.compile()?)?,
            Node::Nec(p) => Pf::nec(p.compile()?),
            Node::IndBox(p) => Pf::ind_box(p.compile()?)?,
            Node::IndDia(p) => Pf::ind_dia(p.compile()?)?,
            Node::Lam(id, body) => {
                let Formula::Implies(a, _) = &self.concl else { unreachable!() };
                abstract_hyp(*id, a, &body.compile()?)?
            }
        };
        Ok(out.with_note(&self.note))
    }

    /// Hilbert lines in post-order, one per distinct formula.
    pub fn to_derivation(&self) -> Result<Derivation, BuildError> {
        let mut d = Derivation::default();
        let mut seen = HashMap::new();
        emit(&self.compile()?, &mut d, &mut seen)?;
        Ok(d)
    }
}

/// Proof of `a -> t.concl` without hypothesis `id`.
fn abstract_hyp(id: usize, a: &Formula, t: &Pf) -> Result<Pf, BuildError> {
    if !t.mentions(id) {
        return Pf::mp(Pf::ax("i1", &[("phi", t.concl.clone()), ("psi", a.clone())]), t.clone());
    }
    match &t.node {
        Node::Hyp(_) => {
            let aa = imp(a.clone(), a.clone());
            let s = Pf::ax("i2", &[("phi", a.clone()), ("psi", aa.clone()), ("chi", a.clone())]);
            let k1 = Pf::ax("i1", &[("phi", a.clone()), ("psi", aa)]);
            let k2 = Pf::ax("i1", &[("phi", a.clone()), ("psi", a.clone())]);
            Pf::mp(Pf::mp(s, k1)?, k2)
        }
        Node::Mp(major, minor) => {
            let s = Pf::ax("i2", &[("phi", a.clone()), ("psi", minor.concl.clone()), ("chi", t.concl.clone())]);
            Pf::mp(Pf::mp(s, abstract_hyp(id, a, major)?)?, abstract_hyp(id, a, minor)?)
        }
        Node::Nec(_) => Err(BuildError::OpenPremise("nec")),
        Node::IndBox(_) => Err(BuildError::OpenPremise("indbox")),
        Node::IndDia(_) => Err(BuildError::OpenPremise("inddia")),
        Node::Ax(..) | Node::Lam(..) => unreachable!(),
    }
}

fn emit(p: &Pf, d: &mut Derivation, seen: &mut HashMap<Formula, usize>) -> Result<usize, BuildError> {
    if let Some(&k) = seen.get(&p.concl) {
        return Ok(k);
    }
    let justification = match &p.node {
        Node::Hyp(id) => return Err(BuildError::Undischarged(*id)),
        Node::Ax(name, s) => Justification::Axiom { name: name.to_string(), subst: Some(s.clone()) },
        Node::Mp(major, minor) => {
            let b = emit(minor, d, seen)?;
            let a = emit(major, d, seen)?;
            Justification::Mp(b, a)
        }
        Node::Nec(q) => Justification::Nec(emit(q, d, seen)?),
        Node::IndBox(q) => Justification::IndBox(emit(q, d, seen)?),
        Node::IndDia(q) => Justification::IndDia(emit(q, d, seen)?),
        Node::Lam(..) => unreachable!(),
    };
    d.lines.push(Line { formula: p.concl.clone(), justification, note: p.note.clone() });
    seen.insert(p.concl.clone(), d.lines.len());
    Ok(d.lines.len())
}

fn f(text: &str) -> Formula {
    parse(text).expect("fixed formula")
}

/// `cd(p,q) -> bi(p,q)` in the base logic.
pub fn cd_to_bi() -> Derivation {
    build_cd_to_bi().and_then(|p| p.to_derivation()).expect("fixed construction")
}

fn build_cd_to_bi() -> Result<Pf, BuildError> {
    let (p, q) = (f("p"), f("q"));
    let theta = f("[](O q -> q)");
    let tq = imp(theta.clone(), q.clone());

    // O(theta -> q) -> (theta -> q)
    let h_next = Pf::hyp(1, next(tq.clone()));
    let h_theta = Pf::hyp(2, theta.clone());
    let unfold = Pf::mp(Pf::ax("ix", &[("phi", f("O q -> q"))]), h_theta)?;
    let step = Pf::mp(Pf::ax("i3", &[("phi", f("O q -> q")), ("psi", next(theta.clone()))]), unfold.clone())?;
    let later = Pf::mp(Pf::ax("i4", &[("phi", f("O q -> q")), ("psi", next(theta.clone()))]), unfold)?;
    let dist = Pf::mp(Pf::ax("v", &[("phi", theta.clone()), ("psi", q.clone())]), h_next)?;
    let q_now = Pf::mp(step, Pf::mp(dist, later)?)?;
    let back = Pf::lam(1, next(tq.clone()), Pf::lam(2, theta.clone(), q_now))
        .note("t = [](O q -> q) unfolds to (O q -> q) & O t; with O(t -> q) this gives q");
    let induct = Pf::ind_dia(back)?.note("<>(t -> q) -> t -> q by induction on <>");

    // <>q -> <>(theta -> q)
    let weaken = Pf::ax("i1", &[("phi", q.clone()), ("psi", theta.clone())]);
    let chi = weaken.concl().clone();
    let keep = Pf::mp(Pf::ax("i1", &[("phi", next(chi.clone())), ("psi", chi.clone())]), Pf::nec(weaken.clone()))?;
    let always = Pf::mp(Pf::ind_box(keep)?, weaken)?.note("[](q -> t -> q) by induction on []");
    let lift = Pf::mp(Pf::ax("vii", &[("phi", q.clone()), ("psi", tq.clone())]), always)?;

    // <>q -> theta -> q
    let h_dia = Pf::hyp(3, dia(q.clone()));
    let key = Pf::lam(3, dia(q.clone()), Pf::mp(induct, Pf::mp(lift, h_dia)?)?).note("<>q -> t -> q");

    // cd(p,q) -> [](p | q) & theta -> []p | q
    let cd = f("[](p | q) -> []p | <>q");
    let prem = and(bx(or(p.clone(), q.clone())), theta.clone());
    let goal = or(bx(p.clone()), q.clone());
    let h_cd = Pf::hyp(4, cd.clone());
    let h_prem = Pf::hyp(5, prem.clone());
    let all = Pf::mp(Pf::ax("i3", &[("phi", bx(or(p.clone(), q.clone()))), ("psi", theta.clone())]), h_prem.clone())?;
    let split = Pf::mp(h_cd, all)?.note("[]p | <>q from cd");
    let th = Pf::mp(Pf::ax("i4", &[("phi", bx(or(p.clone(), q.clone()))), ("psi", theta.clone())]), h_prem)?;
    let left = Pf::ax("i6", &[("phi", bx(p.clone())), ("psi", q.clone())]);
    let h_d = Pf::hyp(6, dia(q.clone()));
    let q_got = Pf::mp(Pf::mp(key, h_d)?, th)?;
    let right = Pf::lam(6, dia(q.clone()), Pf::mp(Pf::ax("i7", &[("phi", bx(p.clone())), ("psi", q.clone())]), q_got)?);
    let cases = Pf::ax("i8", &[("phi", bx(p.clone())), ("psi", dia(q.clone())), ("chi", goal)]);
    let done = Pf::mp(Pf::mp(Pf::mp(cases, left)?, right)?, split)?.note("case split on []p | <>q");
    Ok(Pf::lam(4, cd, Pf::lam(5, prem, done)))
}

#[cfg(test)]
mod tests {
    use super::super::{check_derivation, check_proof_of, LogicSystem};
    use super::*;

    #[test]
    fn identity_by_abstraction() {
        let a = f("p");
        let d = Pf::lam(0, a.clone(), Pf::hyp(0, a)).to_derivation().unwrap();
        assert_eq!(d.lines.last().unwrap().formula, f("p -> p"));
        assert_eq!(check_derivation(&d, "itl0".parse().unwrap()), Ok(()));
    }

    #[test]
    fn open_premises_are_rejected() {
        let body = Pf::nec(Pf::hyp(0, f("p")));
        assert_eq!(Pf::lam(0, f("p"), body).to_derivation().unwrap_err(), BuildError::OpenPremise("nec"));
        assert_eq!(Pf::hyp(7, f("p")).to_derivation().unwrap_err(), BuildError::Undischarged(7));
        assert!(Pf::ind_dia(Pf::ax("i3", &[("phi", f("p")), ("psi", f("q"))])).is_err());
    }

    #[test]
    fn cd_to_bi_is_accepted() {
        let d = cd_to_bi();
        let goal = f("([](p | q) -> []p | <>q) -> [](p | q) & [](O q -> q) -> []p | q");
        let sys: LogicSystem = "itl0".parse().unwrap();
        assert_eq!(check_proof_of(&d, sys, &goal), Ok(()));
        let text = d.to_string();
        assert_eq!(text.parse::<Derivation>().unwrap(), d);
    }
}
