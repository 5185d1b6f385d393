//! Acceptance criteria. Each criterion prints one `criterion N ...: PASS|FAIL` line.
//!
//! Runs without the test harness: `cargo test --test acceptance`.

mod common;

use common::{kripke_truth, q, real_truth, Interval};
use itl::fixtures::{run_case, Corpus};
use itl::kripke::{box_variants, check_validity, eval, gen_random_model, validate_model, Model, ModelClass};
use itl::proofs::{
    cd_to_bi, check_derivation, enumerate_axiom_instances, schemas, Derivation, Justification, LogicSystem,
};
use itl::quasimodel::{random_quasimodel, validate_quasimodel, Quasimodel, TwoSidedType};
use itl::realline::{eval_real, parse_set, parse_valuation};
use itl::syntax::random::{random_formula, random_formula_len, GenOptions};
use itl::syntax::{closure_of, parse, Formula, FormulaSet};
use itl::unwind::{conservativity_check, extend_terminal, terminal_length_bound, weak_limit, Mode, TypedPath};
use rand::seq::IteratorRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::time::{Duration, Instant};

const FS_MODEL: &str = include_str!("../fixtures/fs_countermodel.model");

fn criterion(id: u8, name: &str, limit: Option<Duration>, body: impl FnOnce() -> Result<String, String>) {
    let start = Instant::now();
    let result = body();
    let elapsed = start.elapsed();
    let result = match (result, limit) {
        (Ok(d), Some(l)) if elapsed > l => Err(format!("{d}; took {elapsed:?}, limit {l:?}")),
        (r, _) => r,
    };
    match &result {
        Ok(d) => println!("criterion {id} {name}: PASS ({d}; {} ms)", elapsed.as_millis()),
        Err(d) => println!("criterion {id} {name}: FAIL ({d}; {} ms)", elapsed.as_millis()),
    }
    if let Err(d) = result {
        panic!("criterion {id} failed: {d}");
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_fischer_servi_countermodel() {
    criterion(1, "Fischer Servi countermodel", Some(Duration::from_secs(1)), || {
        let m = Model::from_text(FS_MODEL).map_err(|e| e.to_string())?;
        let w0 = m.index("w0").unwrap();
        for text in ["(O p -> O q) -> O(p -> q)", "(<>p -> []q) -> [](p -> q)"] {
            let f = parse(text).unwrap();
            ensure(!eval(&m, &f).contains(w0), || format!("`{text}` holds at w0"))?;
            ensure(!kripke_truth(&m, &f)[w0], || format!("oracle: `{text}` holds at w0"))?;
        }
        let sys: LogicSystem = "itl-cd".parse().unwrap();
        let instances = enumerate_axiom_instances(sys, 2, 1, 100);
        for f in &instances {
            ensure(check_validity(&m, f).0, || format!("`{f}` is not valid"))?;
            ensure(kripke_truth(&m, f).iter().all(|&b| b), || format!("oracle: `{f}` is not valid"))?;
        }
        Ok(format!("both Fischer Servi schemas fail at w0, {} {sys} instances valid", instances.len()))
    });
}

fn c2_real_line_independence() {
    criterion(2, "real line independence", Some(Duration::from_secs(1)), || {
        let v = parse_valuation("p=(-inf,1); q=(0,inf)").map_err(|e| e.to_string())?;
        let zero = q(0, 1);
        let ev = |t: &str| eval_real(&v, &parse(t).unwrap()).map_err(|e| e.to_string());
        for t in ["[](p | q) -> []p | <>q", "[](p | q) & [](O q -> q) -> []p | q"] {
            ensure(!ev(t)?.member(&zero), || format!("`{t}` holds at 0"))?;
        }
        let all = ev("[](p | q)")?;
        ensure(all == parse_set("(-inf,inf)").unwrap(), || format!("[](p | q) is {all}"))?;
        let bp = ev("[]p")?;
        ensure(bp == parse_set("(-inf,0)").unwrap(), || format!("[]p is {bp}"))?;
        let oracle_v: BTreeMap<String, Vec<Interval>> =
            [("p".to_string(), vec![(None, Some(q(1, 1)))]), ("q".to_string(), vec![(Some(q(0, 1)), None)])].into();
        let f = parse("[]p").unwrap();
        for k in [-7, -5, -1, 1, 2, 5, 7] {
            let x = q(k, 3);
            ensure(real_truth(&oracle_v, &q(2, 1), &f, &x) == bp.member(&x), || format!("oracle disagrees at {x}"))?;
        }
        Ok("CD and BI fail at 0, [](p | q) = (-inf,inf), []p = (-inf,0)".into())
    });
}

fn c3_soundness_fuzz() {
    use itl::fuzz::{fuzz_soundness, FuzzConfig, FuzzVerdict};
    criterion(3, "soundness fuzz", Some(Duration::from_secs(60)), || {
        let mut parts = Vec::new();
        for (system, class) in [("itl-cd", "cont"), ("itl1", "pers"), ("itl-fs", "open")] {
            let cfg = FuzzConfig {
                system: system.parse().unwrap(),
                class: class.parse().unwrap(),
                trials: 500,
                max_worlds: 6,
                depth: 3,
                instances_per_schema: 1,
                seed: 2024,
            };
            let r = fuzz_soundness(&cfg);
            ensure(r.verdict() == FuzzVerdict::Pass, || format!("{r}"))?;
            parts.push(format!("{system}/{class}: {} instances, 0 counterexamples", r.instances));
        }
        Ok(parts.join(", "))
    });
}

fn c4_box_equivalence() {
    criterion(4, "henceforth characterisations agree", None, || {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let opts = GenOptions::default();
        let mut checked = 0;
        for seed in 0..200 {
            let n = rng.gen_range(1..=6);
            let m = gen_random_model(seed, n, ModelClass::Continuous).map_err(|e| e.to_string())?;
            for _ in 0..5 {
                let f = random_formula(&mut rng, 3, &opts);
                let (a, b, c) = box_variants(&m, &f);
                ensure(a == b && b == c, || format!("seed {seed}: variants differ on `{f}`"))?;
                let oracle = kripke_truth(&m, &Formula::Henceforth(Box::new(f.clone())));
                ensure((0..n).all(|w| oracle[w] == a.contains(w)), || {
                    format!("seed {seed}: oracle differs on `[]{f}`")
                })?;
                checked += 1;
            }
        }
        Ok(format!("{checked} formula/model pairs on 200 models"))
    });
}

/// Truth types of random models, with a successor pair and an order pair per world.
struct TypeSample {
    sigma: FormulaSet,
    at: TwoSidedType,
    next: TwoSidedType,
    above: Vec<TwoSidedType>,
    below: Vec<TwoSidedType>,
}

fn type_samples(seed: u64) -> Vec<TypeSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=4);
    let m = gen_random_model(rng.gen(), n, ModelClass::Continuous).unwrap();
    let f = random_formula_len(&mut rng, 10, &GenOptions::box_free());
    let sigma = itl::syntax::closure(&f);
    let qm = Quasimodel::from_model(&m, &sigma).unwrap();
    (0..n)
        .map(|w| TypeSample {
            sigma: sigma.clone(),
            at: qm.label(w).clone(),
            next: qm.label(m.step(w)).clone(),
            above: (0..n).filter(|&v| m.leq(w, v)).map(|v| qm.label(v).clone()).collect(),
            below: (0..n).filter(|&v| m.leq(v, w)).map(|v| qm.label(v).clone()).collect(),
        })
        .collect()
}

fn random_closed_subset(rng: &mut ChaCha8Rng, sigma: &FormulaSet) -> FormulaSet {
    let k = rng.gen_range(0..=sigma.len());
    closure_of(sigma.iter().choose_multiple(rng, k))
}

fn c5_type_properties() {
    criterion(5, "type properties", None, || {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut counts = [0usize; 5];
        let names = ["restrict", "cross-transitivity", "restricted step", "delete next", "delete eventually"];
        let mut seed = 0;
        while counts.iter().any(|&c| c < 1000) {
            seed += 1;
            ensure(seed < 20_000, || format!("ran out of samples: {counts:?}"))?;
            for s in type_samples(seed) {
                ensure(s.at.is_valid(), || format!("seed {seed}: truth type {} is not a type", s.at))?;
                let sub = random_closed_subset(&mut rng, &s.sigma);
                let r = s.at.restrict(&sub).map_err(|e| e.to_string())?;
                ensure(r.is_valid(), || format!("restriction {r} of {} is not a type", s.at))?;
                counts[0] += 1;

                for psi in &s.above {
                    ensure(r.sqsub_t(&s.at) && s.at.leq_t(psi), || "premise".into())?;
                    ensure(r.leq_t(psi), || format!("{r} below {} below {psi}", s.at))?;
                    counts[1] += 1;
                }
                let upper = s.at.restrict(&random_closed_subset(&mut rng, &s.sigma)).unwrap();
                for gamma in &s.below {
                    if gamma.leq_t(&upper) {
                        ensure(gamma.leq_t(&s.at), || format!("{gamma} below {upper} inside {}", s.at))?;
                        counts[1] += 1;
                    }
                }

                let mut big: FormulaSet = r.sub_pos();
                big.extend(random_closed_subset(&mut rng, &s.sigma));
                let big = closure_of(big.iter());
                ensure(s.at.s_t(&s.next), || "truth types are sensible".into())?;
                let rn = s.next.restrict(&big).unwrap();
                ensure(r.s_t(&rn), || format!("{r} then {rn}"))?;
                counts[2] += 1;

                for g in s.at.maximal_temporals() {
                    let deleted = s.next.delete_realized(g).unwrap();
                    ensure(deleted.is_valid(), || format!("deletion {deleted} is not a type"))?;
                    match g {
                        Formula::Next(_) => {
                            ensure(s.at.s_t(&deleted), || format!("{} then {deleted} after deleting {g}", s.at))?;
                            counts[3] += 1;
                        }
                        Formula::Eventually(a) if s.at.pos.contains(a) => {
                            ensure(s.at.s_t(&deleted), || format!("{} then {deleted} after deleting {g}", s.at))?;
                            counts[4] += 1;
                        }
                        _ => {}
                    }
                }
            }
        }
        let parts: Vec<String> = names.iter().zip(counts).map(|(n, c)| format!("{n} {c}")).collect();
        Ok(parts.join(", "))
    });
}

fn c6_terminal_extension() {
    criterion(6, "terminal extension", None, || {
        let (mut models, mut paths, mut longest) = (0, 0, 0);
        for seed in 0..150 {
            let (qm, _) = random_quasimodel(seed, 4, 6).map_err(|e| e.to_string())?;
            ensure(validate_quasimodel(&qm).valid() && common::quasimodel_ok(&qm), || format!("seed {seed} invalid"))?;
            models += 1;
            for w in 0..qm.size() {
                let start = TypedPath::at(&qm, w);
                let out = extend_terminal(&qm, &start).map_err(|e| format!("seed {seed}: {e}"))?;
                let bound = terminal_length_bound(&qm, &start);
                ensure(out.len() <= bound, || format!("seed {seed}: length {} over {bound}", out.len()))?;
                ensure(out.is_terminal() && out.check(&qm).is_ok(), || {
                    format!("seed {seed}: bad path {}", out.render(&qm))
                })?;
                ensure(out.steps[0] == start.steps[0], || "start changed".into())?;
                longest = longest.max(out.len());
                paths += 1;
            }
        }
        Ok(format!("{models} quasimodels, {paths} extensions, longest {longest}"))
    });
}

fn c7_conservativity() {
    criterion(7, "conservativity on fixtures", None, || {
        let corpus = Corpus::embedded().map_err(|e| e.to_string())?;
        let cases: Vec<_> =
            corpus.cases.iter().filter(|c| matches!(c.check, itl::fixtures::Check::Unwind { .. })).collect();
        ensure(cases.len() >= 3, || "too few fixtures".into())?;
        let mut nondeterministic = false;
        for case in &cases {
            let o = run_case(&corpus, case);
            ensure(o.passed, || format!("{}: {}", o.name, o.detail.join("; ")))?;
            let itl::fixtures::Check::Unwind { file, formula, at, mode, .. } = &case.check else { unreachable!() };
            let qm = Quasimodel::from_text(corpus.file(file).unwrap()).unwrap();
            nondeterministic |= !qm.is_deterministic();
            let r = conservativity_check(&qm, &parse(formula).unwrap(), at, mode.parse::<Mode>()?).unwrap();
            ensure(r.agrees() && r.stable() && r.models_valid(), || format!("{}: {r}", case.name))?;
            for bound in r.base_bound..r.base_bound + 3 {
                let wl = weak_limit(&qm, bound).map_err(|e| e.to_string())?;
                let report = validate_model(&wl.model.to_raw()).map_err(|e| e.to_string())?;
                ensure(report.valid && wl.labels_coherent(), || format!("{}: bound {bound}", case.name))?;
            }
        }
        ensure(nondeterministic, || "no nondeterministic fixture".into())?;
        Ok(format!("{} fixtures, verdicts stable over three bounds", cases.len()))
    });
}

/// Twenty single-line edits of the derivation.
fn mutations(d: &Derivation) -> Vec<(String, Derivation)> {
    let n = d.lines.len();
    let mut out = Vec::new();
    for i in 0..10 {
        let k = i * n / 10 + 1;
        let mut m = d.clone();
        m.lines[k].formula = Formula::Next(Box::new(m.lines[k].formula.clone()));
        out.push((format!("wrap line {} in O", k + 1), m));
    }
    let mp: Vec<usize> = (0..n).filter(|&k| matches!(d.lines[k].justification, Justification::Mp(..))).collect();
    for i in 0..5 {
        let k = mp[i * mp.len() / 5 + 1];
        let mut m = d.clone();
        if let Justification::Mp(a, b) = m.lines[k].justification {
            m.lines[k].justification = Justification::Mp(a, b - 1);
        }
        out.push((format!("shift a premise of line {}", k + 1), m));
    }
    let ax: Vec<usize> = (0..n).filter(|&k| matches!(d.lines[k].justification, Justification::Axiom { .. })).collect();
    let all = schemas();
    for i in 0..4 {
        let k = ax[i * ax.len() / 4];
        let mut m = d.clone();
        if let Justification::Axiom { name, .. } = &m.lines[k].justification {
            let pos = all.iter().position(|s| s.name == name).unwrap();
            let other = all[(pos + 1) % all.len()].name.to_string();
            m.lines[k].justification = Justification::Axiom { name: other, subst: None };
        }
        out.push((format!("swap the axiom of line {}", k + 1), m));
    }
    let k = mp[mp.len() / 2];
    let mut m = d.clone();
    m.lines[k].justification = Justification::IndDia(k);
    out.push((format!("use inddia on line {}", k + 1), m));
    out
}

fn c8_proof_checker() {
    criterion(8, "proof checker", None, || {
        let corpus = Corpus::embedded().map_err(|e| e.to_string())?;
        let d: Derivation = corpus.file("cd_to_bi.proof").unwrap().parse().map_err(|e| format!("{e}"))?;
        ensure(d == cd_to_bi(), || "fixture differs from the generated derivation".into())?;
        let sys: LogicSystem = "itl0".parse().unwrap();
        check_derivation(&d, sys).map_err(|e| e.to_string())?;
        let muts = mutations(&d);
        ensure(muts.len() == 20, || "expected 20 mutations".into())?;
        for (what, m) in &muts {
            ensure(check_derivation(m, sys).is_err(), || format!("accepted after: {what}"))?;
        }
        let models: Vec<Model> =
            (0..50).map(|s| gen_random_model(900 + s, 1 + (s as usize % 6), ModelClass::Continuous).unwrap()).collect();
        for (k, line) in d.lines.iter().enumerate() {
            for m in &models {
                ensure(check_validity(m, &line.formula).0, || format!("line {} fails on a random model", k + 1))?;
            }
        }
        Ok(format!("{} lines accepted, 20 mutations rejected, all lines valid on 50 models", d.lines.len()))
    });
}

fn main() {
    let criteria: [fn(); 8] = [
        c1_fischer_servi_countermodel,
        c2_real_line_independence,
        c3_soundness_fuzz,
        c4_box_equivalence,
        c5_type_properties,
        c6_terminal_extension,
        c7_conservativity,
        c8_proof_checker,
    ];
    let failed = criteria.iter().filter(|c| std::panic::catch_unwind(**c).is_err()).count();
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
