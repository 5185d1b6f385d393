mod common;

use common::quasimodel_ok;
use itl::kripke::{gen_random_model, ModelClass};
use itl::quasimodel::{random_quasimodel, validate_quasimodel, Quasimodel};
use itl::syntax::random::{random_formula_len, GenOptions};
use itl::syntax::{closure, closure_of, Formula};
use proptest::prelude::*;
use rand::seq::IteratorRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn truth_types(seed: u64) -> (Quasimodel, itl::kripke::Model) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=4);
    let m = gen_random_model(rng.gen(), n, ModelClass::Continuous).unwrap();
    let f = random_formula_len(&mut rng, 9, &GenOptions::box_free());
    (Quasimodel::from_model(&m, &closure(&f)).unwrap(), m)
}

/// One random structural or label edit.
fn mutate(q: &Quasimodel, rng: &mut ChaCha8Rng) -> Option<Quasimodel> {
    let n = q.size();
    let mut order: Vec<(usize, usize)> =
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| a != b && q.leq(a, b)).collect();
    let mut rel: Vec<(usize, usize)> = (0..n).flat_map(|w| q.successors(w).iter().map(move |&v| (w, v))).collect();
    let mut labels = q.labels().to_vec();
    match rng.gen_range(0..5) {
        0 if !rel.is_empty() => {
            rel.remove(rng.gen_range(0..rel.len()));
        }
        1 => rel.push((rng.gen_range(0..n), rng.gen_range(0..n))),
        2 => order.push((rng.gen_range(0..n), rng.gen_range(0..n))),
        3 => {
            let t = &mut labels[rng.gen_range(0..n)];
            let g = t.pos.iter().choose(rng)?.clone();
            t.pos.remove(&g);
            t.neg.insert(g);
        }
        _ => {
            let t = &mut labels[rng.gen_range(0..n)];
            let g = t.neg.iter().choose(rng)?.clone();
            t.neg.remove(&g);
            if rng.gen_bool(0.5) {
                t.pos.insert(g);
            }
        }
    }
    Quasimodel::new(q.names().to_vec(), &order, &rel, labels).ok()
}

proptest! {
    #[test]
    fn validator_matches_oracle_on_mutants(seed in any::<u64>(), edits in 0usize..3) {
        let (mut q, _) = random_quasimodel(seed, 4, 6).unwrap();
        prop_assert!(validate_quasimodel(&q).valid());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..edits {
            if let Some(m) = mutate(&q, &mut rng) {
                q = m;
            }
        }
        prop_assert_eq!(validate_quasimodel(&q).valid(), quasimodel_ok(&q), "{}", q.to_text());
    }

    #[test]
    fn text_round_trips(seed in any::<u64>()) {
        let (q, _) = random_quasimodel(seed, 4, 6).unwrap();
        prop_assert_eq!(Quasimodel::from_text(&q.to_text()).unwrap(), q);
    }

    #[test]
    fn truth_types_form_a_quasimodel(seed in any::<u64>()) {
        let (q, m) = truth_types(seed);
        prop_assert!(validate_quasimodel(&q).valid());
        for w in 0..q.size() {
            prop_assert!(q.label(w).s_t(q.label(m.step(w))));
        }
    }

    #[test]
    fn restriction_keeps_types(seed in any::<u64>(), pick in any::<u64>()) {
        let (q, m) = truth_types(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(pick);
        let all = q.label(0).formulas();
        let k = rng.gen_range(0..=all.len());
        let sub = closure_of(all.iter().choose_multiple(&mut rng, k));
        for w in 0..q.size() {
            let r = q.label(w).restrict(&sub).unwrap();
            prop_assert!(r.is_valid());
            prop_assert!(r.sqsub_t(q.label(w)));
            let next = q.label(m.step(w));
            prop_assert!(r.s_t(&next.restrict(&closure_of(r.sub_pos().iter().chain(sub.iter()))).unwrap()));
        }
    }

    #[test]
    fn deleting_maximal_temporals_keeps_sensibility(seed in any::<u64>()) {
        let (q, m) = truth_types(seed);
        for w in 0..q.size() {
            let (phi, psi) = (q.label(w), q.label(m.step(w)));
            for g in phi.maximal_temporals() {
                let deleted = psi.delete_realized(g).unwrap();
                prop_assert!(deleted.is_valid());
                let applies = match g {
                    Formula::Next(_) => true,
                    Formula::Eventually(a) => phi.pos.contains(a),
                    _ => false,
                };
                if applies {
                    prop_assert!(phi.s_t(&deleted), "{} then {} minus {}", phi, psi, g);
                }
            }
        }
    }
}
