//! The fixture corpus and the distinctness matrix built from it.
//!
//! The corpus is `fixtures/corpus.toml` plus the model, quasimodel and derivation files
//! it names. A copy is compiled into the crate; [`Corpus::from_dir`] reads a directory instead.

use crate::kripke::{check_validity, eval, Model};
use crate::proofs::{check_derivation, check_proof_of, enumerate_axiom_instances, Derivation, LogicSystem, System};
use crate::quasimodel::Quasimodel;
use crate::realline::{eval_real, parse_point, parse_set, parse_valuation};
use crate::syntax::parse;
use crate::unwind::{conservativity_check, Mode};
use serde::Deserialize;
use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use thiserror::Error;

const EMBEDDED: [(&str, &str); 6] = [
    ("corpus.toml", include_str!("../fixtures/corpus.toml")),
    ("fs_countermodel.model", include_str!("../fixtures/fs_countermodel.model")),
    ("cd_to_bi.proof", include_str!("../fixtures/cd_to_bi.proof")),
    ("loop.qm", include_str!("../fixtures/loop.qm")),
    ("implication.qm", include_str!("../fixtures/implication.qm")),
    ("nondeterministic.qm", include_str!("../fixtures/nondeterministic.qm")),
];

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("cannot read `{path}`: {message}")]
    Io { path: String, message: String },
    #[error("corpus: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("corpus refers to unknown file `{0}`")]
    MissingFile(String),
}

/// What a case checks and the verdict it expects.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(tag = "check", rename_all = "kebab-case")]
pub enum Check {
    /// Truth of a formula at a world of a model file.
    KripkeEval { file: String, formula: String, at: String, expect: bool },
    /// Validity of sampled axiom instances of a logic on a model file.
    KripkeAxioms { file: String, system: String, depth: usize, count: usize, seed: u64, expect: bool },
    /// Truth of a formula at a point of the real line.
    RealEval { val: String, formula: String, at: String, expect: bool },
    /// Truth set of a formula on the real line.
    RealSet { val: String, formula: String, expect: String },
    /// Acceptance of a derivation file.
    Proof { file: String, system: String, goal: Option<String>, expect: bool },
    /// Conservativity run on a quasimodel file.
    Unwind { file: String, formula: String, at: String, mode: String, expect: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
pub struct FixtureCase {
    pub name: String,
    pub about: String,
    #[serde(flatten)]
    pub check: Check,
}

#[derive(Deserialize)]
struct CorpusFile {
    case: Vec<FixtureCase>,
}

/// Cases and the files they use.
#[derive(Clone, Debug)]
pub struct Corpus {
    files: BTreeMap<String, String>,
    pub cases: Vec<FixtureCase>,
}

impl Corpus {
    /// The copy compiled into the crate.
    pub fn embedded() -> Result<Self, FixtureError> {
        let files = EMBEDDED.iter().map(|(n, t)| (n.to_string(), t.to_string())).collect();
        Corpus::from_files(files)
    }

    /// Reads `corpus.toml` and every file it names from `dir`.
    pub fn from_dir(dir: &Path) -> Result<Self, FixtureError> {
        let read = |name: &str| {
            let path = dir.join(name);
            std::fs::read_to_string(&path)
                .map_err(|e| FixtureError::Io { path: path.display().to_string(), message: e.to_string() })
        };
        let index: CorpusFile = toml::from_str(&read("corpus.toml")?)?;
        let mut files = BTreeMap::new();
        for case in &index.case {
            if let Some(name) = case.check.file() {
                if !files.contains_key(name) {
                    files.insert(name.to_string(), read(name)?);
                }
            }
        }
        Ok(Corpus { files, cases: index.case })
    }

    fn from_files(files: BTreeMap<String, String>) -> Result<Self, FixtureError> {
        let text = files.get("corpus.toml").ok_or_else(|| FixtureError::MissingFile("corpus.toml".into()))?;
        let index: CorpusFile = toml::from_str(text)?;
        for case in &index.case {
            if let Some(name) = case.check.file() {
                if !files.contains_key(name) {
                    return Err(FixtureError::MissingFile(name.to_string()));
                }
            }
        }
        Ok(Corpus { files, cases: index.case })
    }

    pub fn file(&self, name: &str) -> Option<&str> {
        self.files.get(name).map(String::as_str)
    }

    pub fn case(&self, name: &str) -> Option<&FixtureCase> {
        self.cases.iter().find(|c| c.name == name)
    }
}

impl Check {
    pub fn file(&self) -> Option<&str> {
        match self {
            Check::KripkeEval { file, .. }
            | Check::KripkeAxioms { file, .. }
            | Check::Proof { file, .. }
            | Check::Unwind { file, .. } => Some(file),
            Check::RealEval { .. } | Check::RealSet { .. } => None,
        }
    }
}

/// Result of one case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseOutcome {
    pub name: String,
    pub expected: String,
    pub found: String,
    pub passed: bool,
    /// Extra lines for the report.
    pub detail: Vec<String>,
}

fn outcome(case: &FixtureCase, expected: String, found: String, detail: Vec<String>) -> CaseOutcome {
    CaseOutcome { name: case.name.clone(), passed: expected == found, expected, found, detail }
}

fn verdict(b: bool) -> String {
    b.to_string()
}

/// Runs one case; input errors count as failures.
pub fn run_case(corpus: &Corpus, case: &FixtureCase) -> CaseOutcome {
    match try_case(corpus, case) {
        Ok(o) => o,
        Err(e) => CaseOutcome {
            name: case.name.clone(),
            expected: "a verdict".into(),
            found: format!("error: {e}"),
            passed: false,
            detail: Vec::new(),
        },
    }
}

fn try_case(corpus: &Corpus, case: &FixtureCase) -> Result<CaseOutcome, String> {
    let file = |name: &str| corpus.file(name).ok_or_else(|| format!("missing file `{name}`"));
    let formula = |text: &str| parse(text).map_err(|e| e.to_string());
    let system = |text: &str| text.parse::<LogicSystem>();
    match &case.check {
        Check::KripkeEval { file: f, formula: g, at, expect } => {
            let m = Model::from_text(file(f)?).map_err(|e| e.to_string())?;
            let w = m.index(at).ok_or_else(|| format!("unknown world `{at}`"))?;
            let holds = eval(&m, &formula(g)?).contains(w);
            Ok(outcome(case, verdict(*expect), verdict(holds), Vec::new()))
        }
        Check::KripkeAxioms { file: f, system: s, depth, count, seed, expect } => {
            let m = Model::from_text(file(f)?).map_err(|e| e.to_string())?;
            let sys = system(s)?;
            let instances = enumerate_axiom_instances(sys, *depth, *seed, *count);
            let bad: Vec<String> = instances
                .iter()
                .filter_map(|g| match check_validity(&m, g) {
                    (false, Some(w)) => Some(format!("`{g}` fails at {}", m.name(w))),
                    _ => None,
                })
                .collect();
            let mut detail = vec![format!("{} instances of {sys}, {} invalid", instances.len(), bad.len())];
            detail.extend(bad.iter().take(3).cloned());
            Ok(outcome(case, verdict(*expect), verdict(bad.is_empty()), detail))
        }
        Check::RealEval { val, formula: g, at, expect } => {
            let v = parse_valuation(val).map_err(|e| e.to_string())?;
            let x = parse_point(at).map_err(|e| e.to_string())?;
            let set = eval_real(&v, &formula(g)?).map_err(|e| e.to_string())?;
            Ok(outcome(case, verdict(*expect), verdict(set.member(&x)), vec![format!("truth set {set}")]))
        }
        Check::RealSet { val, formula: g, expect } => {
            let v = parse_valuation(val).map_err(|e| e.to_string())?;
            let want = parse_set(expect).map_err(|e| e.to_string())?;
            let set = eval_real(&v, &formula(g)?).map_err(|e| e.to_string())?;
            let found = if set == want { want.to_string() } else { set.to_string() };
            Ok(outcome(case, want.to_string(), found, Vec::new()))
        }
        Check::Proof { file: f, system: s, goal, expect } => {
            let d: Derivation = file(f)?.parse().map_err(|e: crate::proofs::DerivationFormatError| e.to_string())?;
            let sys = system(s)?;
            let r = match goal {
                Some(g) => check_proof_of(&d, sys, &formula(g)?),
                None => check_derivation(&d, sys),
            };
            let detail = match &r {
                Ok(()) => vec![format!("{} lines accepted in {sys}", d.lines.len())],
                Err(e) => vec![format!("rejected in {sys}: {e}")],
            };
            Ok(outcome(case, verdict(*expect), verdict(r.is_ok()), detail))
        }
        Check::Unwind { file: f, formula: g, at, mode, expect } => {
            let q = Quasimodel::from_text(file(f)?).map_err(|e| e.to_string())?;
            let mode: Mode = mode.parse()?;
            let r = conservativity_check(&q, &formula(g)?, at, mode).map_err(|e| e.to_string())?;
            let detail = r.to_string().lines().map(str::to_string).collect();
            Ok(outcome(case, verdict(*expect), verdict(r.passed()), detail))
        }
    }
}

/// A formula separating two logics, with the fixture that shows it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separation {
    pub formula: &'static str,
    /// Case refuting the formula on a model every logic without it is sound for.
    pub case: &'static str,
    pub established: bool,
}

/// `cells[a][b]` holds a formula of logic `a` outside logic `b`, when there is one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistinctnessMatrix {
    pub systems: Vec<System>,
    pub cells: Vec<Vec<Option<Separation>>>,
}

const SYSTEMS: [System; 4] = [System::Itl0, System::ItlFs, System::ItlCd, System::Itl1];

type Witness = (&'static str, &'static str, &'static str, fn(LogicSystem) -> bool);

/// Separating formulas with the fixture refuting each and the logics that prove it.
const WITNESSES: [Witness; 2] = [
    ("fs-next", "(O p -> O q) -> O(p -> q)", "fs-next-fails-at-root", LogicSystem::has_fs),
    ("cd", "[](p | q) -> []p | <>q", "cd-fails-at-zero", LogicSystem::has_cd),
];

impl DistinctnessMatrix {
    pub fn build(outcomes: &[CaseOutcome]) -> Self {
        let passed = |name: &str| outcomes.iter().any(|o| o.name == name && o.passed);
        let cells = SYSTEMS
            .iter()
            .map(|&a| {
                SYSTEMS
                    .iter()
                    .map(|&b| {
                        let (la, lb) = (
                            LogicSystem::new(a, crate::proofs::Language::Full),
                            LogicSystem::new(b, crate::proofs::Language::Full),
                        );
                        WITNESSES
                            .iter()
                            .find(|(axiom, _, _, has)| la.admits(axiom) && !has(lb))
                            .map(|&(_, formula, case, _)| Separation { formula, case, established: passed(case) })
                    })
                    .collect()
            })
            .collect();
        DistinctnessMatrix { systems: SYSTEMS.to_vec(), cells }
    }

    /// Every pair of distinct logics is separated in some direction by an established case.
    pub fn pairwise_distinct(&self) -> bool {
        let n = self.systems.len();
        let sep = |a: usize, b: usize| self.cells[a][b].as_ref().is_some_and(|s| s.established);
        (0..n).all(|a| (a + 1..n).all(|b| sep(a, b) || sep(b, a)))
    }
}

impl fmt::Display for DistinctnessMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |s: System| LogicSystem::new(s, crate::proofs::Language::Full).to_string();
        writeln!(f, "row logic proves the formula, column logic does not:")?;
        write!(f, "{:8}", "")?;
        for &s in &self.systems {
            write!(f, "{:10}", name(s))?;
        }
        writeln!(f)?;
        for (i, &a) in self.systems.iter().enumerate() {
            write!(f, "{:8}", name(a))?;
            for (j, cell) in self.cells[i].iter().enumerate() {
                let text = match cell {
                    _ if i == j => "=",
                    Some(s) if s.established => {
                        if s.case.starts_with("fs") {
                            "FS-next"
                        } else {
                            "CD"
                        }
                    }
                    Some(_) => "?",
                    None => "-",
                };
                write!(f, "{text:10}")?;
            }
            writeln!(f)?;
        }
        for (_, formula, case, _) in WITNESSES {
            writeln!(f, "  {}: {formula} (refuted by {case})", if case.starts_with("fs") { "FS-next" } else { "CD" })?;
        }
        write!(f, "pairwise distinct: {}", self.pairwise_distinct())
    }
}

#[derive(Clone, Debug)]
pub struct FixtureReport {
    pub outcomes: Vec<CaseOutcome>,
    pub matrix: DistinctnessMatrix,
}

impl FixtureReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed) && self.matrix.pairwise_distinct()
    }

    pub fn failures(&self) -> Vec<&str> {
        self.outcomes.iter().filter(|o| !o.passed).map(|o| o.name.as_str()).collect()
    }
}

impl fmt::Display for FixtureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.outcomes {
            let mark = if o.passed { "ok  " } else { "FAIL" };
            writeln!(f, "{mark} {} (expected {}, found {})", o.name, o.expected, o.found)?;
            for d in &o.detail {
                writeln!(f, "       {d}")?;
            }
        }
        writeln!(f)?;
        writeln!(f, "{}", self.matrix)
    }
}

/// Runs every case and assembles the distinctness matrix.
pub fn run_fixtures(corpus: &Corpus) -> FixtureReport {
    let outcomes: Vec<CaseOutcome> = corpus.cases.iter().map(|c| run_case(corpus, c)).collect();
    let matrix = DistinctnessMatrix::build(&outcomes);
    FixtureReport { outcomes, matrix }
}
