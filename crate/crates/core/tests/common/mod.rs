//! Reference evaluators written straight from the definitions, used as oracles.

#![allow(dead_code)]

use itl::kripke::Model;
use itl::quasimodel::{Quasimodel, TwoSidedType};
use itl::realline::Q;
use itl::syntax::Formula;
use num_bigint::BigInt;
use num_traits::Signed;
use std::collections::BTreeMap;

/// Truth set on a finite dynamic poset; `[]` is the union of all invariant up-sets inside the body.
pub fn kripke_truth(m: &Model, f: &Formula) -> Vec<bool> {
    let n = m.size();
    let up = |s: &[bool], w: usize| (0..n).all(|v| !m.leq(w, v) || s[v]);
    match f {
        Formula::Bottom => vec![false; n],
        Formula::Atom(a) => {
            let v = m.valuation(a);
            (0..n).map(|w| v.contains(w)).collect()
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            let (x, y) = (kripke_truth(m, a), kripke_truth(m, b));
            (0..n)
                .map(|w| match f {
                    Formula::And(..) => x[w] && y[w],
                    Formula::Or(..) => x[w] || y[w],
                    _ => (0..n).all(|v| !m.leq(w, v) || !x[v] || y[v]),
                })
                .collect()
        }
        Formula::Next(a) => {
            let x = kripke_truth(m, a);
            (0..n).map(|w| x[m.step(w)]).collect()
        }
        Formula::Eventually(a) => {
            let x = kripke_truth(m, a);
            (0..n)
                .map(|w| {
                    let mut y = w;
                    (0..=n).any(|_| {
                        let hit = x[y];
                        y = m.step(y);
                        hit
                    })
                })
                .collect()
        }
        Formula::Henceforth(a) => {
            let x = kripke_truth(m, a);
            let mut out = vec![false; n];
            for mask in 0u32..(1 << n) {
                let u: Vec<bool> = (0..n).map(|w| mask & (1 << w) != 0).collect();
                let ok = (0..n).all(|w| !u[w] || (x[w] && u[m.step(w)] && up(&u, w)));
                if ok {
                    for w in 0..n {
                        out[w] |= u[w];
                    }
                }
            }
            out
        }
    }
}

/// An open interval with optional infinite ends.
pub type Interval = (Option<Q>, Option<Q>);

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn in_interval(x: &Q, (lo, hi): &Interval) -> bool {
    lo.as_ref().is_none_or(|l| x > l) && hi.as_ref().is_none_or(|h| x < h)
}

/// Truth at a non-dyadic point of the real line under doubling, for valuations that are finite
/// unions of open intervals with dyadic ends. Every truth set then only changes at dyadic points,
/// so interiors can be read off pointwise and orbits only matter until they pass `bound`.
pub fn real_truth(v: &BTreeMap<String, Vec<Interval>>, bound: &Q, f: &Formula, x: &Q) -> bool {
    let two = q(2, 1);
    let escape = |y: &Q| {
        let mut z = y.clone();
        let mut k = 0;
        while z.abs() <= *bound {
            z = &z * &two;
            k += 1;
        }
        k + 1
    };
    match f {
        Formula::Bottom => false,
        Formula::Atom(a) => v.get(a).is_some_and(|ivs| ivs.iter().any(|i| in_interval(x, i))),
        Formula::And(a, b) => real_truth(v, bound, a, x) && real_truth(v, bound, b, x),
        Formula::Or(a, b) => real_truth(v, bound, a, x) || real_truth(v, bound, b, x),
        Formula::Implies(a, b) => !real_truth(v, bound, a, x) || real_truth(v, bound, b, x),
        Formula::Next(a) => real_truth(v, bound, a, &(x * &two)),
        Formula::Eventually(a) | Formula::Henceforth(a) => {
            let mut y = x.clone();
            let mut seen = Vec::new();
            for _ in 0..=escape(x) {
                seen.push(real_truth(v, bound, a, &y));
                y = &y * &two;
            }
            if matches!(f, Formula::Eventually(_)) {
                seen.iter().any(|&b| b)
            } else {
                seen.iter().all(|&b| b)
            }
        }
    }
}

/// Quasimodel conditions checked with the transitive closure of the relation.
pub fn quasimodel_ok(q: &Quasimodel) -> bool {
    let n = q.size();
    let labels: Vec<&TwoSidedType> = (0..n).map(|w| q.label(w)).collect();
    let mut reach = vec![vec![false; n]; n];
    for (w, row) in reach.iter_mut().enumerate() {
        for &v in q.successors(w) {
            row[v] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    let is_type = |t: &TwoSidedType| {
        t.pos.is_disjoint(&t.neg)
            && !t.pos.contains(&Formula::Bottom)
            && t.pos.iter().all(|g| match g {
                Formula::And(a, b) => t.pos.contains(a) && t.pos.contains(b),
                Formula::Or(a, b) => t.pos.contains(a) || t.pos.contains(b),
                Formula::Implies(a, b) => t.neg.contains(a) || t.pos.contains(b),
                Formula::Henceforth(_) => false,
                _ => true,
            })
            && t.neg.iter().all(|g| match g {
                Formula::And(a, b) => t.neg.contains(a) || t.neg.contains(b),
                Formula::Or(a, b) => t.neg.contains(a) && t.neg.contains(b),
                Formula::Eventually(a) => t.neg.contains(a),
                Formula::Henceforth(_) => false,
                _ => true,
            })
    };
    let below = |s: &TwoSidedType, t: &TwoSidedType| s.pos.is_subset(&t.pos) && t.neg.is_subset(&s.neg);
    let step_ok = |s: &TwoSidedType, t: &TwoSidedType| {
        s.pos.iter().all(|g| match g {
            Formula::Next(a) => t.pos.contains(a),
            Formula::Eventually(a) => s.pos.contains(a) || t.pos.contains(g),
            _ => true,
        }) && s.neg.iter().all(|g| match g {
            Formula::Next(a) => t.neg.contains(a),
            Formula::Eventually(_) => t.neg.contains(g),
            _ => true,
        })
    };
    let all = |p: &dyn Fn(usize) -> bool| (0..n).all(p);
    all(&|w| is_type(labels[w]))
        && all(&|w| all(&|v| !q.leq(w, v) || below(labels[w], labels[v])))
        && all(&|w| {
            labels[w].neg.iter().all(|g| match g {
                Formula::Implies(a, b) => {
                    (0..n).any(|v| q.leq(w, v) && labels[v].pos.contains(a) && labels[v].neg.contains(b))
                }
                _ => true,
            })
        })
        && all(&|w| !q.successors(w).is_empty())
        && all(&|w| {
            all(&|w2| !q.leq(w, w2) || q.successors(w).iter().all(|&v| q.successors(w2).iter().any(|&v2| q.leq(v, v2))))
        })
        && all(&|w| q.successors(w).iter().all(|&v| step_ok(labels[w], labels[v])))
        && all(&|w| {
            labels[w].pos.iter().all(|g| match g {
                Formula::Eventually(a) => {
                    labels[w].pos.contains(a) || (0..n).any(|v| reach[w][v] && labels[v].pos.contains(a))
                }
                _ => true,
            })
        })
}
