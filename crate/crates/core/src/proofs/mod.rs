//! Hilbert-style derivations for the four logics and their one-modality fragments.

mod builder;
mod format;

pub use builder::{cd_to_bi, BuildError, Pf};
pub use format::{Derivation, DerivationFormatError, Justification, Line};

use crate::syntax::random::{random_formula, GenOptions};
use crate::syntax::{parse, Formula};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;
use thiserror::Error;

/// Metavariable assignment, keyed by `phi`, `psi`, `chi`.
pub type Subst = BTreeMap<String, Formula>;

/// Metavariable names, in display order.
pub const METAVARS: [&str; 3] = ["phi", "psi", "chi"];

/// Which axiom group a schema belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Owner {
    Base,
    FischerServi,
    ConstantDomain,
    /// Added to the `[]`-fragment of logics containing `cd`.
    BackwardInduction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomSchema {
    pub name: &'static str,
    /// Template whose atoms are metavariables.
    pub template: Formula,
    pub owner: Owner,
}

const TABLE: [(&str, &str, Owner); 23] = [
    ("i1", "phi -> psi -> phi", Owner::Base),
    ("i2", "(phi -> psi -> chi) -> (phi -> psi) -> phi -> chi", Owner::Base),
    ("i3", "phi & psi -> phi", Owner::Base),
    ("i4", "phi & psi -> psi", Owner::Base),
    ("i5", "phi -> psi -> phi & psi", Owner::Base),
    ("i6", "phi -> phi | psi", Owner::Base),
    ("i7", "psi -> phi | psi", Owner::Base),
    ("i8", "(phi -> chi) -> (psi -> chi) -> phi | psi -> chi", Owner::Base),
    ("i9", "false -> phi", Owner::Base),
    ("i10", "(phi -> psi) -> (phi -> ~psi) -> ~phi", Owner::Base),
    ("ii", "~O false", Owner::Base),
    ("iii", "O(phi & psi) <-> O phi & O psi", Owner::Base),
    ("iv", "O(phi | psi) <-> O phi | O psi", Owner::Base),
    ("v", "O(phi -> psi) -> O phi -> O psi", Owner::Base),
    ("vi", "[](phi -> psi) -> []phi -> []psi", Owner::Base),
    ("vii", "[](phi -> psi) -> <>phi -> <>psi", Owner::Base),
    ("viii", "<>(phi | psi) -> <>phi | <>psi", Owner::Base),
    ("ix", "[]phi -> phi & O[]phi", Owner::Base),
    ("x", "phi | O<>phi -> <>phi", Owner::Base),
    ("fs-next", "(O phi -> O psi) -> O(phi -> psi)", Owner::FischerServi),
    ("fs-dia", "(<>phi -> []psi) -> [](phi -> psi)", Owner::FischerServi),
    ("cd", "[](phi | psi) -> []phi | <>psi", Owner::ConstantDomain),
    ("bi", "[](phi | psi) & [](O psi -> psi) -> []phi | psi", Owner::BackwardInduction),
];

/// Every schema known to the checker.
pub fn schemas() -> &'static [AxiomSchema] {
    static CELL: OnceLock<Vec<AxiomSchema>> = OnceLock::new();
    CELL.get_or_init(|| {
        TABLE
            .iter()
            .map(|&(name, text, owner)| AxiomSchema { name, template: parse(text).expect("schema table"), owner })
            .collect()
    })
}

pub fn schema(name: &str) -> Option<&'static AxiomSchema> {
    schemas().iter().find(|s| s.name == name)
}

/// Replaces metavariables in `template`; unbound ones are left in place.
pub fn instantiate(template: &Formula, subst: &Subst) -> Formula {
    match template {
        Formula::Atom(a) => subst.get(a).cloned().unwrap_or_else(|| template.clone()),
        Formula::Bottom => Formula::Bottom,
        Formula::And(a, b) => Formula::And(Box::new(instantiate(a, subst)), Box::new(instantiate(b, subst))),
        Formula::Or(a, b) => Formula::Or(Box::new(instantiate(a, subst)), Box::new(instantiate(b, subst))),
        Formula::Implies(a, b) => Formula::Implies(Box::new(instantiate(a, subst)), Box::new(instantiate(b, subst))),
        Formula::Next(a) => Formula::Next(Box::new(instantiate(a, subst))),
        Formula::Eventually(a) => Formula::Eventually(Box::new(instantiate(a, subst))),
        Formula::Henceforth(a) => Formula::Henceforth(Box::new(instantiate(a, subst))),
    }
}

fn match_into(t: &Formula, f: &Formula, s: &mut Subst) -> bool {
    use Formula::*;
    match (t, f) {
        (Atom(m), _) => match s.get(m) {
            Some(bound) => bound == f,
            None => {
                s.insert(m.clone(), f.clone());
                true
            }
        },
        (Bottom, Bottom) => true,
        (And(a, b), And(c, d)) | (Or(a, b), Or(c, d)) | (Implies(a, b), Implies(c, d)) => {
            match_into(a, c, s) && match_into(b, d, s)
        }
        (Next(a), Next(b)) | (Eventually(a), Eventually(b)) | (Henceforth(a), Henceforth(b)) => match_into(a, b, s),
        _ => false,
    }
}

/// The substitution making the schema equal to `f`, if there is one.
pub fn match_schema(f: &Formula, schema: &AxiomSchema) -> Option<Subst> {
    let mut s = Subst::new();
    match_into(&schema.template, f, &mut s).then_some(s)
}

/// Base logic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum System {
    Itl0,
    ItlFs,
    ItlCd,
    Itl1,
}

/// Language a logic is restricted to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Language {
    Full,
    /// No `[]`.
    Dia,
    /// No `<>`.
    Box,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LogicSystem {
    pub system: System,
    pub language: Language,
}

impl LogicSystem {
    pub const fn new(system: System, language: Language) -> Self {
        LogicSystem { system, language }
    }

    pub fn has_fs(self) -> bool {
        matches!(self.system, System::ItlFs | System::Itl1)
    }

    pub fn has_cd(self) -> bool {
        matches!(self.system, System::ItlCd | System::Itl1)
    }

    /// Whether `f` belongs to the language of this logic.
    pub fn speaks(self, f: &Formula) -> bool {
        match self.language {
            Language::Full => true,
            Language::Dia => f.fragment().is_box_free(),
            Language::Box => f.fragment().is_diamond_free(),
        }
    }

    fn owns(self, owner: Owner) -> bool {
        match owner {
            Owner::Base => true,
            Owner::FischerServi => self.has_fs(),
            Owner::ConstantDomain => self.has_cd(),
            Owner::BackwardInduction => self.has_cd() && self.language == Language::Box,
        }
    }

    /// Schemas of this logic that have instances in its language.
    pub fn schemas(self) -> Vec<&'static AxiomSchema> {
        schemas().iter().filter(|s| self.owns(s.owner) && self.speaks(&s.template)).collect()
    }

    pub fn admits(self, name: &str) -> bool {
        self.schemas().iter().any(|s| s.name == name)
    }

    /// Generator options producing formulas of this language.
    pub fn gen_options(self) -> GenOptions {
        match self.language {
            Language::Full => GenOptions::default(),
            Language::Dia => GenOptions::box_free(),
            Language::Box => GenOptions::diamond_free(),
        }
    }
}

impl fmt::Display for LogicSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.system {
            System::Itl0 => "itl0",
            System::ItlFs => "itl-fs",
            System::ItlCd => "itl-cd",
            System::Itl1 => "itl1",
        })?;
        match self.language {
            Language::Full => Ok(()),
            Language::Dia => f.write_str("-dia"),
            Language::Box => f.write_str("-box"),
        }
    }
}

impl FromStr for LogicSystem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let lower = s.to_ascii_lowercase();
        let (base, language) = if let Some(b) = lower.strip_suffix("-full") {
            (b, Language::Full)
        } else if let Some(b) = lower.strip_suffix("-dia") {
            (b, Language::Dia)
        } else if let Some(b) = lower.strip_suffix("-box") {
            (b, Language::Box)
        } else {
            (lower.as_str(), Language::Full)
        };
        let system = match base {
            "itl0" => System::Itl0,
            "itl-fs" | "itlfs" => System::ItlFs,
            "itl-cd" | "itlcd" => System::ItlCd,
            "itl1" => System::Itl1,
            _ => return Err(format!("unknown logic `{s}`")),
        };
        Ok(LogicSystem { system, language })
    }
}

/// Why a derivation was rejected.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CheckError {
    #[error("derivation is empty")]
    Empty,
    #[error("line {line}: refers to line {target}, which does not come earlier")]
    BadIndex { line: usize, target: usize },
    #[error("line {line}: unknown axiom `{name}`")]
    UnknownAxiom { line: usize, name: String },
    #[error("line {line}: axiom `{name}` is not part of {system}")]
    NotAdmitted { line: usize, name: String, system: String },
    #[error("line {line}: formula is not an instance of axiom `{name}`")]
    NotInstance { line: usize, name: String },
    #[error("line {line}: substitution mentions `{var}`, which axiom `{name}` does not use")]
    StraySubstitution { line: usize, name: String, var: String },
    #[error("line {line}: lines {a} and {b} do not combine by modus ponens into this formula")]
    BadModusPonens { line: usize, a: usize, b: usize },
    #[error("line {line}: {rule} applied to line {premise} does not give this formula")]
    BadRule { line: usize, rule: &'static str, premise: usize },
    #[error("line {line}: formula lies outside the language of {system}")]
    OutsideLanguage { line: usize, system: String },
    #[error("derivation proves `{found}`, not `{expected}`")]
    WrongConclusion { found: String, expected: String },
}

impl CheckError {
    /// The first offending line, when there is one.
    pub fn line(&self) -> Option<usize> {
        match self {
            CheckError::Empty | CheckError::WrongConclusion { .. } => None,
            CheckError::BadIndex { line, .. }
            | CheckError::UnknownAxiom { line, .. }
            | CheckError::NotAdmitted { line, .. }
            | CheckError::NotInstance { line, .. }
            | CheckError::StraySubstitution { line, .. }
            | CheckError::BadModusPonens { line, .. }
            | CheckError::BadRule { line, .. }
            | CheckError::OutsideLanguage { line, .. } => Some(*line),
        }
    }
}

fn check_line(d: &Derivation, k: usize, sys: LogicSystem) -> Result<(), CheckError> {
    let line = k + 1;
    let f = &d.lines[k].formula;
    if !sys.speaks(f) {
        return Err(CheckError::OutsideLanguage { line, system: sys.to_string() });
    }
    let earlier = |i: usize| -> Result<&Formula, CheckError> {
        if i == 0 || i > k {
            Err(CheckError::BadIndex { line, target: i })
        } else {
            Ok(&d.lines[i - 1].formula)
        }
    };
    match &d.lines[k].justification {
        Justification::Axiom { name, subst } => {
            let s = schema(name).ok_or_else(|| CheckError::UnknownAxiom { line, name: name.clone() })?;
            if !sys.admits(name) {
                return Err(CheckError::NotAdmitted { line, name: name.clone(), system: sys.to_string() });
            }
            let ok = match subst {
                Some(sub) => {
                    let used = s.template.atoms();
                    if let Some(var) = sub.keys().find(|v| !used.contains(*v)) {
                        return Err(CheckError::StraySubstitution { line, name: name.clone(), var: var.clone() });
                    }
                    used.iter().all(|v| sub.contains_key(v)) && instantiate(&s.template, sub) == *f
                }
                None => match_schema(f, s).is_some(),
            };
            if !ok {
                return Err(CheckError::NotInstance { line, name: name.clone() });
            }
        }
        Justification::Mp(a, b) => {
            let (fa, fb) = (earlier(*a)?, earlier(*b)?);
            let fits = |major: &Formula, minor: &Formula| matches!(major, Formula::Implies(x, y) if **x == *minor && **y == *f);
            if !fits(fb, fa) && !fits(fa, fb) {
                return Err(CheckError::BadModusPonens { line, a: *a, b: *b });
            }
        }
        Justification::Nec(i) => {
            let p = earlier(*i)?;
            if *f != Formula::Next(Box::new(p.clone())) {
                return Err(CheckError::BadRule { line, rule: "nec", premise: *i });
            }
        }
        Justification::IndBox(i) => {
            let p = earlier(*i)?;
            let ok = matches!((p, f), (Formula::Implies(a, b), Formula::Implies(c, d))
                if a == c && **b == Formula::Next(a.clone()) && **d == Formula::Henceforth(a.clone()));
            if !ok {
                return Err(CheckError::BadRule { line, rule: "indbox", premise: *i });
            }
        }
        Justification::IndDia(i) => {
            let p = earlier(*i)?;
            let ok = matches!((p, f), (Formula::Implies(a, b), Formula::Implies(c, d))
                if b == d && **a == Formula::Next(b.clone()) && **c == Formula::Eventually(b.clone()));
            if !ok {
                return Err(CheckError::BadRule { line, rule: "inddia", premise: *i });
            }
        }
    }
    Ok(())
}

/// Accepts iff every line is an admitted axiom instance or a correct rule application inside the language.
pub fn check_derivation(d: &Derivation, sys: LogicSystem) -> Result<(), CheckError> {
    if d.lines.is_empty() {
        return Err(CheckError::Empty);
    }
    (0..d.lines.len()).try_for_each(|k| check_line(d, k, sys))
}

/// As [`check_derivation`], and the last line must be `goal`.
pub fn check_proof_of(d: &Derivation, sys: LogicSystem, goal: &Formula) -> Result<(), CheckError> {
    check_derivation(d, sys)?;
    let last = &d.lines.last().unwrap().formula;
    if last != goal {
        return Err(CheckError::WrongConclusion { found: last.to_string(), expected: goal.to_string() });
    }
    Ok(())
}

/// Instance of `schema` with fill-ins of depth at most `depth`.
pub fn random_instance<R: Rng + ?Sized>(schema: &AxiomSchema, depth: usize, opts: &GenOptions, rng: &mut R) -> Formula {
    let subst: Subst = schema
        .template
        .atoms()
        .into_iter()
        .map(|v| {
            let d = rng.gen_range(0..=depth);
            (v, random_formula(rng, d, opts))
        })
        .collect();
    instantiate(&schema.template, &subst)
}

/// Deterministic sample of `count` instances, cycling through the schemas of `sys`.
pub fn enumerate_axiom_instances(sys: LogicSystem, depth: usize, seed: u64, count: usize) -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let list = sys.schemas();
    let opts = sys.gen_options();
    (0..count).map(|k| random_instance(list[k % list.len()], depth, &opts, &mut rng)).collect()
}
