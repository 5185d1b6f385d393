//! Seeded random formulas.

use super::{and, atom, bx, dia, imp, next, or, Formula};
use rand::Rng;

/// Shape of generated formulas.
#[derive(Clone, Debug)]
pub struct GenOptions {
    pub atoms: Vec<String>,
    pub next: bool,
    pub eventually: bool,
    pub henceforth: bool,
    pub bottom: bool,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions {
            atoms: vec!["p".into(), "q".into(), "r".into()],
            next: true,
            eventually: true,
            henceforth: true,
            bottom: true,
        }
    }
}

impl GenOptions {
    pub fn box_free() -> Self {
        GenOptions { henceforth: false, ..Self::default() }
    }

    pub fn diamond_free() -> Self {
        GenOptions { eventually: false, ..Self::default() }
    }

    pub fn with_atoms(mut self, atoms: &[&str]) -> Self {
        self.atoms = atoms.iter().map(|a| a.to_string()).collect();
        self
    }
}

/// Random formula of depth at most `depth + 1`; depth 0 yields a leaf.
pub fn random_formula<R: Rng + ?Sized>(rng: &mut R, depth: usize, opts: &GenOptions) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        if opts.bottom && rng.gen_bool(0.1) {
            return Formula::Bottom;
        }
        return atom(&opts.atoms[rng.gen_range(0..opts.atoms.len())]);
    }
    let mut ops: Vec<u8> = vec![0, 1, 2];
    if opts.next {
        ops.push(3);
    }
    if opts.eventually {
        ops.push(4);
    }
    if opts.henceforth {
        ops.push(5);
    }
    let sub = |rng: &mut R| random_formula(rng, depth - 1, opts);
    match ops[rng.gen_range(0..ops.len())] {
        0 => and(sub(rng), sub(rng)),
        1 => or(sub(rng), sub(rng)),
        2 => imp(sub(rng), sub(rng)),
        3 => next(sub(rng)),
        4 => dia(sub(rng)),
        _ => bx(sub(rng)),
    }
}

/// Random formula with at most `max_len` nodes.
pub fn random_formula_len<R: Rng + ?Sized>(rng: &mut R, max_len: usize, opts: &GenOptions) -> Formula {
    loop {
        let f = random_formula(rng, max_len.saturating_sub(1).min(4), opts);
        if f.length() <= max_len {
            return f;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn deterministic_in_seed() {
        let a = random_formula(&mut ChaCha8Rng::seed_from_u64(5), 4, &GenOptions::default());
        let b = random_formula(&mut ChaCha8Rng::seed_from_u64(5), 4, &GenOptions::default());
        assert_eq!(a, b);
    }

    #[test]
    fn respects_depth_and_fragment() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let f = random_formula(&mut rng, 3, &GenOptions::box_free());
            assert!(f.depth() <= 4);
            assert!(f.fragment().is_box_free());
            let g = random_formula_len(&mut rng, 6, &GenOptions::default());
            assert!(g.length() <= 6);
        }
    }
}
