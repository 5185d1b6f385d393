//! Seeded random quasimodels.

use super::{validate_quasimodel, QmError, Quasimodel};
use crate::kripke::{gen_random_model, ModelClass};
use crate::syntax::random::{random_formula_len, GenOptions};
use crate::syntax::{closure, Formula};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A valid quasimodel labelled over the subformulas of a random `[]`-free formula of length at most `max_len`.
///
/// Labels are truth types of a random dynamic poset; extra successor edges are then added
/// whenever the result stays sensible and forward-confluent, so the relation is often not a function.
pub fn random_quasimodel(seed: u64, max_worlds: usize, max_len: usize) -> Result<(Quasimodel, Formula), QmError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_worlds.max(1));
    let m = gen_random_model(rng.gen(), n, ModelClass::Continuous)?;
    let opts = GenOptions { henceforth: false, ..GenOptions::default().with_atoms(&["p", "q"]) };
    let f = random_formula_len(&mut rng, max_len.max(1), &opts);
    let base = Quasimodel::from_model(&m, &closure(&f))?;
    let mut edges: Vec<(usize, usize)> = (0..n).flat_map(|w| base.successors(w).iter().map(move |&v| (w, v))).collect();
    let mut extra: Vec<(usize, usize)> = (0..n)
        .flat_map(|w| (0..n).map(move |v| (w, v)))
        .filter(|e| !edges.contains(e) && base.label(e.0).s_t(base.label(e.1)))
        .collect();
    extra.shuffle(&mut rng);
    let mut q = base;
    for e in extra {
        if !rng.gen_bool(0.5) {
            continue;
        }
        edges.push(e);
        let order: Vec<(usize, usize)> =
            (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| a != b && m.leq(a, b)).collect();
        let cand = Quasimodel::new(q.names().to_vec(), &order, &edges, q.labels().to_vec())?;
        if validate_quasimodel(&cand).valid() {
            q = cand;
        } else {
            edges.pop();
        }
    }
    Ok((q, f))
}
