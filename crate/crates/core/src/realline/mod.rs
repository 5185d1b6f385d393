//! Exact semantics on the real line with `S(x) = 2x`.
//!
//! A [`DyadicSet`] splits the line into the negative half, the point `0` and the
//! positive half. Each half is a finite pattern above some top `T` plus a pattern on
//! `(T/2, T]` repeated at every scale `2^-k` below it. The class is closed under
//! every connective, so evaluation never approximates.

mod literal;
mod pattern;

use crate::syntax::Formula;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

pub use literal::{parse_point, parse_set, parse_valuation, Piece};
pub use pattern::Q;
use pattern::{Half, Segs};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealError {
    #[error("set literal error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("empty interval ({0},{1})")]
    EmptyInterval(String, String),
    #[error("set is not open: {0}")]
    NotOpen(String),
    #[error("bad ladder: {0}")]
    BadLadder(String),
    #[error("atom `{0}` has no value")]
    UnboundAtom(String),
    #[error("pattern did not stabilise within {0} blocks")]
    NotRepresentable(usize),
    #[error("unsupported map `{0}`; only the doubling map 2x is available")]
    UnsupportedMap(String),
}

/// The dynamical map; only doubling is supported.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RealMap {
    #[default]
    Doubling,
}

impl FromStr for RealMap {
    type Err = RealError;

    fn from_str(s: &str) -> Result<Self, RealError> {
        match s.replace(' ', "").as_str() {
            "2x" | "2*x" | "doubling" => Ok(RealMap::Doubling),
            _ => Err(RealError::UnsupportedMap(s.to_string())),
        }
    }
}

/// Exact subset of the real line; see the module docs.
#[derive(Clone, Debug)]
pub struct DyadicSet {
    neg: Half,
    zero: bool,
    pos: Half,
}

/// Truth sets of atoms.
pub type RealValuation = BTreeMap<String, DyadicSet>;

impl PartialEq for DyadicSet {
    /// Equality of denotations.
    fn eq(&self, other: &Self) -> bool {
        self.zip(other, |a, b| a != b).is_empty()
    }
}

impl Eq for DyadicSet {}

impl DyadicSet {
    pub fn empty() -> Self {
        DyadicSet { neg: Half::constant(false), zero: false, pos: Half::constant(false) }
    }

    pub fn reals() -> Self {
        DyadicSet { neg: Half::constant(true), zero: true, pos: Half::constant(true) }
    }

    /// Open interval `(lo, hi)`; `None` bounds are infinite.
    pub fn open_interval(lo: Option<Q>, hi: Option<Q>) -> Result<Self, RealError> {
        if let (Some(a), Some(b)) = (&lo, &hi) {
            if a >= b {
                return Err(RealError::EmptyInterval(a.to_string(), b.to_string()));
            }
        }
        Ok(Self::interval(lo.as_ref(), false, hi.as_ref(), false))
    }

    /// Interval with chosen closedness at its finite ends; may be empty.
    pub fn interval(lo: Option<&Q>, lo_closed: bool, hi: Option<&Q>, hi_closed: bool) -> Self {
        if let (Some(a), Some(b)) = (lo, hi) {
            if a > b || (a == b && !(lo_closed && hi_closed)) {
                return Self::empty();
            }
        }
        let zero_q = Q::zero();
        let below = |x: Option<&Q>| x.is_none_or(|a| a.is_negative());
        let above = |x: Option<&Q>| x.is_none_or(|b| b.is_positive());
        let zero = (below(lo) || (lo.is_some_and(|a| a.is_zero()) && lo_closed))
            && (above(hi) || (hi.is_some_and(|b| b.is_zero()) && hi_closed));
        let pos = match hi {
            Some(b) if !b.is_positive() => Half::constant(false),
            _ => match lo {
                Some(a) if a.is_positive() => Half::interval(a, lo_closed, hi, hi_closed),
                _ => Half::interval(&zero_q, false, hi, hi_closed),
            },
        };
        let neg_hi = lo.map(|a| -a);
        let neg = match lo {
            Some(a) if !a.is_negative() => Half::constant(false),
            _ => match hi {
                Some(b) if b.is_negative() => Half::interval(&-b, hi_closed, neg_hi.as_ref(), lo_closed),
                _ => Half::interval(&zero_q, false, neg_hi.as_ref(), lo_closed),
            },
        };
        DyadicSet { neg, zero, pos }
    }

    /// `union_k 2^-k * seed`, with the seed a union of open intervals inside `(top/2, top)`
    /// (mirrored when `positive` is false).
    pub fn ladder(top: &Q, seed: &[(Q, Q)], positive: bool) -> Result<Self, RealError> {
        if !top.is_positive() {
            return Err(RealError::BadLadder(format!("block top {top} must be positive")));
        }
        let lo = top / Q::from_integer(2.into());
        let mut pattern = Segs::constant(lo.clone(), Some(top.clone()), false);
        for (a, b) in seed {
            if a >= b {
                return Err(RealError::EmptyInterval(a.to_string(), b.to_string()));
            }
            if *a < lo || b > top {
                return Err(RealError::BadLadder(format!("seed ({a},{b}) leaves the block ({lo},{top}]")));
            }
            let mut iv = Segs::constant(lo.clone(), Some(top.clone()), false);
            iv.cells = vec![*a == lo];
            if *a > lo {
                iv.cuts.push(a.clone());
                iv.pts.push(false);
                iv.cells.push(true);
            }
            if b < top {
                iv.cuts.push(b.clone());
                iv.pts.push(false);
                iv.cells.push(false);
            }
            pattern = pattern.zip(&iv, |x, y| x || y);
        }
        let h = Half::ladder(top.clone(), pattern).canonical();
        Ok(if positive {
            DyadicSet { neg: Half::constant(false), zero: false, pos: h }
        } else {
            DyadicSet { neg: h, zero: false, pos: Half::constant(false) }
        })
    }

    pub fn member(&self, x: &Q) -> bool {
        if x.is_positive() {
            self.pos.at(x)
        } else if x.is_negative() {
            self.neg.at(&-x)
        } else {
            self.zero
        }
    }

    fn zip(&self, o: &Self, op: impl Fn(bool, bool) -> bool + Copy) -> Self {
        DyadicSet { neg: self.neg.zip(&o.neg, op), zero: op(self.zero, o.zero), pos: self.pos.zip(&o.pos, op) }
    }

    pub fn union(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a || b)
    }

    pub fn intersect(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a && b)
    }

    pub fn complement(&self) -> Self {
        DyadicSet { neg: self.neg.complement(), zero: !self.zero, pos: self.pos.complement() }
    }

    pub fn interior(&self) -> Self {
        DyadicSet {
            neg: self.neg.interior(),
            zero: self.zero && self.neg.full_near_zero() && self.pos.full_near_zero(),
            pos: self.pos.interior(),
        }
    }

    /// Interior of `(R \ self) | b`.
    pub fn impl_interior(&self, b: &Self) -> Self {
        self.complement().union(b).interior()
    }

    /// `{x : 2x in self}`.
    pub fn preimage(&self) -> Self {
        DyadicSet { neg: self.neg.halve(), zero: self.zero, pos: self.pos.halve() }
    }

    /// `union_n {x : 2^n x in self}`.
    pub fn eventually(&self) -> Result<Self, RealError> {
        self.check_cap()?;
        Ok(DyadicSet { neg: self.neg.orbit_union(), zero: self.zero, pos: self.pos.orbit_union() })
    }

    /// Greatest open invariant subset.
    pub fn henceforth(&self) -> Result<Self, RealError> {
        self.check_cap()?;
        let w = DyadicSet { neg: self.neg.invariant_core(), zero: self.zero, pos: self.pos.invariant_core() };
        Ok(w.interior())
    }

    /// Iteration cap: 4 plus the dyadic span of the endpoints.
    fn check_cap(&self) -> Result<(), RealError> {
        for h in [&self.neg, &self.pos] {
            let min = h.per.cuts.first().cloned().unwrap_or_else(|| h.top.clone()).min(h.top.clone());
            let ratio = h.max_endpoint() / min;
            let mut span = 0usize;
            let mut x = Q::from_integer(1.into());
            while x < ratio {
                x *= Q::from_integer(2.into());
                span += 1;
            }
            let cap = 4 + span;
            if h.block_count() > cap {
                return Err(RealError::NotRepresentable(cap));
            }
        }
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        !self.zero && self.neg.is_empty() && self.pos.is_empty()
    }

    pub fn is_reals(&self) -> bool {
        self.complement().is_empty()
    }

    pub fn is_open(&self) -> bool {
        *self == self.interior()
    }

    /// Finite cut points and block tops, for building sample grids.
    pub fn landmarks(&self) -> Vec<Q> {
        let mut out = vec![Q::zero()];
        for (h, sign) in [(&self.pos, 1), (&self.neg, -1)] {
            let s = Q::from_integer(sign.into());
            out.push(&h.top * &s);
            out.extend(h.per.cuts.iter().chain(&h.up.cuts).map(|c| c * &s));
        }
        out.sort();
        out.dedup();
        out
    }
}

impl fmt::Display for DyadicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&literal::render_set(self))
    }
}

impl FromStr for DyadicSet {
    type Err = RealError;

    fn from_str(s: &str) -> Result<Self, RealError> {
        parse_set(s)
    }
}

/// The truth set of `f` on the real line under doubling.
pub fn eval_real(v: &RealValuation, f: &Formula) -> Result<DyadicSet, RealError> {
    Ok(match f {
        Formula::Bottom => DyadicSet::empty(),
        Formula::Atom(p) => v.get(p).cloned().ok_or_else(|| RealError::UnboundAtom(p.clone()))?,
        Formula::And(a, b) => eval_real(v, a)?.intersect(&eval_real(v, b)?),
        Formula::Or(a, b) => eval_real(v, a)?.union(&eval_real(v, b)?),
        Formula::Implies(a, b) => eval_real(v, a)?.impl_interior(&eval_real(v, b)?),
        Formula::Next(a) => eval_real(v, a)?.preimage(),
        Formula::Eventually(a) => eval_real(v, a)?.eventually()?,
        Formula::Henceforth(a) => eval_real(v, a)?.henceforth()?,
    })
}
