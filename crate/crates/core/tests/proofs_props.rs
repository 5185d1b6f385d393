use itl::proofs::{
    check_derivation, instantiate, match_schema, random_instance, schemas, AxiomSchema, Derivation, Justification,
    Line, LogicSystem,
};
use itl::syntax::{imp, next};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The smallest listed logic admitting the schema.
fn home(s: &AxiomSchema) -> LogicSystem {
    ["itl0", "itl-fs", "itl-cd", "itl-cd-box"]
        .iter()
        .map(|n| n.parse::<LogicSystem>().unwrap())
        .find(|sys| sys.admits(s.name))
        .unwrap()
}

fn schema() -> impl Strategy<Value = &'static AxiomSchema> {
    prop::sample::select(schemas().iter().collect::<Vec<_>>())
}

fn instance(s: &AxiomSchema, seed: u64, depth: usize) -> itl::Formula {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_instance(s, depth, &home(s).gen_options(), &mut rng)
}

proptest! {
    #[test]
    fn instances_are_one_line_proofs(s in schema(), seed in any::<u64>(), depth in 0usize..=3) {
        let f = instance(s, seed, depth);
        let sys = home(s);
        prop_assert!(sys.speaks(&f));
        let d = Derivation { lines: vec![Line::axiom(f.clone(), s.name)] };
        prop_assert!(check_derivation(&d, sys).is_ok(), "{} rejected in {}", f, sys);
    }

    #[test]
    fn matching_recovers_the_instance(s in schema(), seed in any::<u64>(), depth in 0usize..=3) {
        let f = instance(s, seed, depth);
        let subst = match_schema(&f, s).expect("instance matches its schema");
        prop_assert_eq!(instantiate(&s.template, &subst), f);
    }

    #[test]
    fn wrapped_instances_are_not_axioms(s in schema(), seed in any::<u64>()) {
        let f = next(instance(s, seed, 2));
        let d = Derivation { lines: vec![Line::axiom(f, s.name)] };
        prop_assert!(check_derivation(&d, "itl1".parse().unwrap()).is_err());
    }

    #[test]
    fn derivation_text_round_trips(picks in prop::collection::vec((schema(), any::<u64>()), 1..6)) {
        let mut d = Derivation::default();
        for (s, seed) in &picks {
            let f = instance(s, *seed, 2);
            let subst = match_schema(&f, s);
            d.lines.push(Line::new(f, Justification::Axiom { name: s.name.to_string(), subst }));
        }
        let n = d.lines.len();
        d.lines.push(Line::new(next(d.lines[0].formula.clone()), Justification::Nec(1)));
        d.lines.push(Line::new(imp(d.lines[n - 1].formula.clone(), d.lines[n - 1].formula.clone()), Justification::Nec(n)));
        let text = d.to_string();
        prop_assert_eq!(text.parse::<Derivation>().unwrap(), d);
    }
}
