//! Seeded random dynamic posets.

use super::{reflexive_transitive, Model, ModelError};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Structural class of a generated model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelClass {
    /// Monotone step.
    Continuous,
    /// Monotone and open step.
    Open,
    /// Continuous and open; on posets this is the same class as `Open`.
    Persistent,
    /// Monotone step that is not open.
    ContinuousNotOpen,
}

impl fmt::Display for ModelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelClass::Continuous => "cont",
            ModelClass::Open => "open",
            ModelClass::Persistent => "pers",
            ModelClass::ContinuousNotOpen => "cont-not-open",
        })
    }
}

impl FromStr for ModelClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "cont" | "continuous" => Ok(ModelClass::Continuous),
            "open" => Ok(ModelClass::Open),
            "pers" | "persistent" => Ok(ModelClass::Persistent),
            "cont-not-open" => Ok(ModelClass::ContinuousNotOpen),
            _ => Err(format!("unknown model class `{s}`")),
        }
    }
}

const ROUNDS: usize = 200;
const ATOMS: [&str; 3] = ["p", "q", "r"];

fn random_order(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<bool>> {
    let density = rng.gen_range(0.1..0.6);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                pairs.push((i, j));
            }
        }
    }
    reflexive_transitive(n, &pairs)
}

/// Monotone map by backtracking along the index order, which extends the order.
fn random_monotone(rng: &mut ChaCha8Rng, leq: &[Vec<bool>]) -> Vec<usize> {
    let n = leq.len();
    let options: Vec<Vec<usize>> = (0..n)
        .map(|_| {
            let mut o: Vec<usize> = (0..n).collect();
            o.shuffle(rng);
            o
        })
        .collect();
    let mut step = vec![0; n];
    fn go(w: usize, leq: &[Vec<bool>], options: &[Vec<usize>], step: &mut Vec<usize>) -> bool {
        if w == leq.len() {
            return true;
        }
        for &t in &options[w] {
            if (0..w).all(|u| !leq[u][w] || leq[step[u]][t]) {
                step[w] = t;
                if go(w + 1, leq, options, step) {
                    return true;
                }
            }
        }
        false
    }
    let found = go(0, leq, &options, &mut step);
    debug_assert!(found);
    step
}

fn random_up_set(rng: &mut ChaCha8Rng, leq: &[Vec<bool>]) -> Vec<usize> {
    let n = leq.len();
    let gens: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
    (0..n).filter(|&v| gens.iter().any(|&g| leq[g][v])).collect()
}

fn is_open(leq: &[Vec<bool>], step: &[usize]) -> bool {
    super::open_violation(leq, step).is_none()
}

fn build(rng: &mut ChaCha8Rng, leq: Vec<Vec<bool>>, step: Vec<usize>) -> Result<Model, ModelError> {
    let n = leq.len();
    let names = (0..n).map(|i| format!("w{i}")).collect();
    let mut order = Vec::new();
    for (a, row) in leq.iter().enumerate() {
        for (b, &le) in row.iter().enumerate() {
            if a != b && le {
                order.push((a, b));
            }
        }
    }
    let val: BTreeMap<String, Vec<usize>> = ATOMS.iter().map(|a| (a.to_string(), random_up_set(rng, &leq))).collect();
    Model::new(names, order, step, val)
}

/// Deterministic random model of the given class over atoms `p`, `q`, `r`.
pub fn gen_random_model(seed: u64, n: usize, class: ModelClass) -> Result<Model, ModelError> {
    if n == 0 {
        return Err(ModelError::GenerationFailure(class.to_string(), n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let want = |leq: &[Vec<bool>], step: &[usize]| match class {
        ModelClass::Continuous => true,
        ModelClass::Open | ModelClass::Persistent => is_open(leq, step),
        ModelClass::ContinuousNotOpen => !is_open(leq, step),
    };
    for _ in 0..ROUNDS {
        let leq = random_order(&mut rng, n);
        let step = random_monotone(&mut rng, &leq);
        if want(&leq, &step) {
            return build(&mut rng, leq, step);
        }
    }
    // Relaxed structure: identity maps are open, constant maps on a chain are not.
    let leq = random_order(&mut rng, n);
    match class {
        ModelClass::Continuous | ModelClass::Open | ModelClass::Persistent => build(&mut rng, leq, (0..n).collect()),
        ModelClass::ContinuousNotOpen if n >= 2 => {
            let leq = reflexive_transitive(n, &[(0, 1)]);
            build(&mut rng, leq, vec![0; n])
        }
        ModelClass::ContinuousNotOpen => Err(ModelError::GenerationFailure(class.to_string(), n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::{validate_model, ModelClass};

    #[test]
    fn classes_are_honoured() {
        for seed in 0..40 {
            for n in 1..=6 {
                let m = gen_random_model(seed, n, ModelClass::Continuous).unwrap();
                assert!(validate_model(&m.to_raw()).unwrap().valid);
                assert!(gen_random_model(seed, n, ModelClass::Open).unwrap().is_open());
                if n >= 2 {
                    assert!(!gen_random_model(seed, n, ModelClass::ContinuousNotOpen).unwrap().is_open());
                }
            }
        }
    }

    #[test]
    fn deterministic_and_seed_sensitive() {
        let a = gen_random_model(1, 4, ModelClass::Continuous).unwrap();
        assert_eq!(a, gen_random_model(1, 4, ModelClass::Continuous).unwrap());
        let differs = (2..10).any(|s| gen_random_model(s, 4, ModelClass::Continuous).unwrap() != a);
        assert!(differs);
    }

    #[test]
    fn seed_seven_open_model() {
        let m = gen_random_model(7, 5, ModelClass::Open).unwrap();
        let r = validate_model(&m.to_raw()).unwrap();
        assert!(r.valid && r.open);
    }

    #[test]
    fn single_world_is_identity() {
        let m = gen_random_model(3, 1, ModelClass::Persistent).unwrap();
        assert_eq!(m.step(0), 0);
        assert!(m.leq(0, 0));
        assert!(gen_random_model(3, 1, ModelClass::ContinuousNotOpen).is_err());
    }
}
