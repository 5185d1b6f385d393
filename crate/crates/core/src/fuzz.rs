//! Randomized soundness checks: axiom instances against random models of a class.
//!
//! On a class the logic is sound for, any counterexample is a bug. On a mismatched class
//! counterexamples are expected; finding none is reported as suspicious.

use crate::kripke::{check_validity, gen_random_model, ModelClass};
use crate::proofs::{random_instance, LogicSystem};
use crate::realline::{eval_real, DyadicSet, RealValuation, Q};
use crate::syntax::Formula;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Where random models come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FuzzClass {
    Kripke(ModelClass),
    /// Random open valuations on the real line with the doubling map.
    RealLine,
}

impl FromStr for FuzzClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "real" => Ok(FuzzClass::RealLine),
            _ => s.parse().map(FuzzClass::Kripke),
        }
    }
}

impl fmt::Display for FuzzClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FuzzClass::Kripke(c) => write!(f, "{c}"),
            FuzzClass::RealLine => f.write_str("real"),
        }
    }
}

impl FuzzClass {
    /// Whether every logic axiom is valid on every model of the class.
    pub fn sound_for(self, sys: LogicSystem) -> bool {
        match self {
            FuzzClass::Kripke(ModelClass::Continuous | ModelClass::ContinuousNotOpen) => !sys.has_fs(),
            FuzzClass::Kripke(ModelClass::Open | ModelClass::Persistent) => true,
            FuzzClass::RealLine => !sys.has_cd(),
        }
    }
}

/// A complete description of a run; equal configs give equal reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzConfig {
    pub system: LogicSystem,
    pub class: FuzzClass,
    pub trials: usize,
    pub max_worlds: usize,
    /// Maximum depth of metavariable fill-ins.
    pub depth: usize,
    pub instances_per_schema: usize,
    pub seed: u64,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            system: "itl-cd".parse().unwrap(),
            class: FuzzClass::Kripke(ModelClass::Continuous),
            trials: 500,
            max_worlds: 6,
            depth: 3,
            instances_per_schema: 1,
            seed: 0,
        }
    }
}

/// An axiom instance failing somewhere on a generated model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub trial: usize,
    pub schema: &'static str,
    pub formula: Formula,
    /// Model file text, or the valuation on the real line.
    pub model: String,
    /// A world or point where the instance fails.
    pub point: String,
}

/// How the outcome compares with the soundness prediction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FuzzVerdict {
    /// Sound class, no counterexample.
    Pass,
    /// Sound class, counterexamples found.
    Fail,
    /// Mismatched class, counterexamples found as predicted.
    ExpectedCounterexamples,
    /// Mismatched class, none found.
    Suspicious,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzReport {
    pub config: FuzzConfig,
    pub instances: usize,
    /// Instances the real-line engine could not represent.
    pub skipped: usize,
    pub counterexamples: Vec<Counterexample>,
    /// Counterexample counts by schema.
    pub by_schema: BTreeMap<&'static str, usize>,
}

impl FuzzReport {
    pub fn verdict(&self) -> FuzzVerdict {
        match (self.config.class.sound_for(self.config.system), self.counterexamples.is_empty()) {
            (true, true) => FuzzVerdict::Pass,
            (true, false) => FuzzVerdict::Fail,
            (false, false) => FuzzVerdict::ExpectedCounterexamples,
            (false, true) => FuzzVerdict::Suspicious,
        }
    }

    /// Only counterexamples on a sound class fail a run.
    pub fn passed(&self) -> bool {
        self.verdict() != FuzzVerdict::Fail
    }
}

impl fmt::Display for FuzzReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        writeln!(
            f,
            "{} on {} models: {} trials, up to {} worlds, fill-in depth {}, seed {}",
            c.system, c.class, c.trials, c.max_worlds, c.depth, c.seed
        )?;
        writeln!(f, "instances checked: {} ({} skipped)", self.instances, self.skipped)?;
        writeln!(f, "counterexamples: {}", self.counterexamples.len())?;
        for (name, n) in &self.by_schema {
            writeln!(f, "  {name}: {n}")?;
        }
        if let Some(cx) = self.counterexamples.first() {
            writeln!(f, "first counterexample (trial {}, schema {}):", cx.trial, cx.schema)?;
            writeln!(f, "  formula: {}", cx.formula)?;
            writeln!(f, "  fails at: {}", cx.point)?;
            for line in cx.model.lines() {
                writeln!(f, "  | {line}")?;
            }
        }
        let what = match self.verdict() {
            FuzzVerdict::Pass => "no counterexamples, as soundness predicts",
            FuzzVerdict::Fail => "counterexamples on a class the logic is sound for",
            FuzzVerdict::ExpectedCounterexamples => "counterexamples found on a class the logic is not sound for",
            FuzzVerdict::Suspicious => "suspicious: no counterexample on a class the logic is not sound for",
        };
        write!(f, "{what}")
    }
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

struct TrialResult {
    instances: usize,
    skipped: usize,
    found: Vec<Counterexample>,
}

fn random_open_set(rng: &mut ChaCha8Rng) -> DyadicSet {
    const GRID: [(i64, i64); 7] = [(-2, 1), (-1, 1), (-1, 2), (0, 1), (1, 2), (1, 1), (2, 1)];
    let point = |rng: &mut ChaCha8Rng| -> Option<Q> {
        let k = rng.gen_range(0..=GRID.len());
        GRID.get(k).map(|&(n, d)| Q::new(BigInt::from(n), BigInt::from(d)))
    };
    let mut set = DyadicSet::empty();
    for _ in 0..rng.gen_range(0..=2) {
        let (a, b) = (point(rng), point(rng));
        let lo = if rng.gen_bool(0.2) { None } else { a };
        let (lo, hi) = match (lo, b) {
            (Some(x), Some(y)) if x > y => (Some(y), Some(x)),
            (Some(x), Some(y)) if x == y => continue,
            pair => pair,
        };
        if let Ok(piece) = DyadicSet::open_interval(lo, hi) {
            set = set.union(&piece);
        }
    }
    set
}

fn run_trial(cfg: &FuzzConfig, trial: usize) -> TrialResult {
    let mut rng = trial_rng(cfg.seed, trial);
    let opts = cfg.system.gen_options();
    let schemas = cfg.system.schemas();
    let mut out = TrialResult { instances: 0, skipped: 0, found: Vec::new() };
    match cfg.class {
        FuzzClass::Kripke(class) => {
            let min = if class == ModelClass::ContinuousNotOpen { 2 } else { 1 };
            let n = rng.gen_range(min..=cfg.max_worlds.max(min));
            let m = gen_random_model(rng.gen(), n, class).expect("model generation");
            for s in &schemas {
                for _ in 0..cfg.instances_per_schema {
                    let f = random_instance(s, cfg.depth, &opts, &mut rng);
                    out.instances += 1;
                    if let (false, Some(w)) = check_validity(&m, &f) {
                        out.found.push(Counterexample {
                            trial,
                            schema: s.name,
                            formula: f,
                            model: m.to_text(),
                            point: m.name(w).to_string(),
                        });
                    }
                }
            }
        }
        FuzzClass::RealLine => {
            let v: RealValuation = opts.atoms.iter().map(|a| (a.clone(), random_open_set(&mut rng))).collect();
            for s in &schemas {
                for _ in 0..cfg.instances_per_schema {
                    let f = random_instance(s, cfg.depth, &opts, &mut rng);
                    out.instances += 1;
                    match eval_real(&v, &f) {
                        Ok(set) if !set.is_reals() => {
                            let model = v.iter().map(|(a, s)| format!("{a}={s}")).collect::<Vec<_>>().join("; ");
                            let gap = set.complement();
                            let mut candidates = gap.landmarks();
                            candidates.push(Q::from_integer(BigInt::from(0)));
                            let point =
                                candidates.into_iter().find(|x| gap.member(x)).map_or("?".into(), |x| x.to_string());
                            out.found.push(Counterexample { trial, schema: s.name, formula: f, model, point });
                        }
                        Ok(_) => {}
                        Err(_) => out.skipped += 1,
                    }
                }
            }
        }
    }
    out
}

/// Runs the trials on all available threads and merges results in trial order.
pub fn fuzz_soundness(cfg: &FuzzConfig) -> FuzzReport {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(cfg.trials.max(1));
    let mut results: Vec<(usize, TrialResult)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|k| {
                scope
                    .spawn(move || (k..cfg.trials).step_by(threads).map(|t| (t, run_trial(cfg, t))).collect::<Vec<_>>())
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("fuzz worker")).collect()
    });
    results.sort_by_key(|(t, _)| *t);
    let mut report = FuzzReport {
        config: cfg.clone(),
        instances: 0,
        skipped: 0,
        counterexamples: Vec::new(),
        by_schema: BTreeMap::new(),
    };
    for (_, r) in results {
        report.instances += r.instances;
        report.skipped += r.skipped;
        for cx in r.found {
            *report.by_schema.entry(cx.schema).or_insert(0) += 1;
            report.counterexamples.push(cx);
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(system: &str, class: &str, trials: usize, depth: usize) -> FuzzConfig {
        FuzzConfig {
            system: system.parse().unwrap(),
            class: class.parse().unwrap(),
            trials,
            depth,
            ..FuzzConfig::default()
        }
    }

    #[test]
    fn sound_classes_have_no_counterexamples() {
        for (s, c) in [("itl-cd", "cont"), ("itl1", "pers"), ("itl-fs", "open"), ("itl-cd-box", "cont")] {
            let r = fuzz_soundness(&cfg(s, c, 40, 2));
            assert_eq!(r.verdict(), FuzzVerdict::Pass, "{r}");
            assert!(r.instances >= 40 * 10);
        }
    }

    #[test]
    fn fischer_servi_fails_on_non_open_models() {
        let r = fuzz_soundness(&cfg("itl-fs", "cont-not-open", 60, 1));
        assert_eq!(r.verdict(), FuzzVerdict::ExpectedCounterexamples, "{r}");
        assert!(r.by_schema.keys().all(|k| k.starts_with("fs")));
    }

    #[test]
    fn constant_domain_fails_on_the_real_line() {
        let mut c = cfg("itl-cd", "real", 60, 1);
        c.instances_per_schema = 2;
        let r = fuzz_soundness(&c);
        assert_eq!(r.verdict(), FuzzVerdict::ExpectedCounterexamples, "{r}");
        assert!(r.by_schema.keys().all(|&k| k == "cd"), "{r}");
    }

    #[test]
    fn runs_are_reproducible() {
        let c = cfg("itl-fs", "cont-not-open", 20, 2);
        assert_eq!(fuzz_soundness(&c), fuzz_soundness(&c));
        assert_eq!("real".parse::<FuzzClass>().unwrap().to_string(), "real");
        assert!("reals".parse::<FuzzClass>().is_err());
    }
}
