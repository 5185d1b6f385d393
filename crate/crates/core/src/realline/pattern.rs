//! Exact subsets of `(0, inf)` that are invariant under halving near zero.
//!
//! A [`Half`] with top `T` stores the set on `(T/2, T]` (repeated at every scale `2^-k`
//! below `T`) and on `(T, inf)` explicitly. Pieces are [`Segs`]: finitely many cut points
//! with their own membership bits and constant open cells between them.

use num_rational::BigRational;
use num_traits::{One, Signed};

pub type Q = BigRational;

pub(crate) fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub(crate) fn half_of(x: &Q) -> Q {
    x / q(2)
}

pub(crate) fn twice(x: &Q) -> Q {
    x * q(2)
}

/// Piecewise-constant membership on an open interval `(lo, hi)`; `hi = None` means `inf`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segs {
    pub lo: Q,
    pub hi: Option<Q>,
    pub cuts: Vec<Q>,
    pub pts: Vec<bool>,
    pub cells: Vec<bool>,
}

impl Segs {
    pub fn constant(lo: Q, hi: Option<Q>, b: bool) -> Self {
        Segs { lo, hi, cuts: vec![], pts: vec![], cells: vec![b] }
    }

    pub fn at(&self, x: &Q) -> bool {
        match self.cuts.binary_search(x) {
            Ok(k) => self.pts[k],
            Err(k) => self.cells[k],
        }
    }

    /// Cell immediately to the right of `x`.
    pub fn right_of(&self, x: &Q) -> bool {
        self.cells[self.cuts.partition_point(|c| c <= x)]
    }

    pub fn first_cell(&self) -> bool {
        self.cells[0]
    }

    pub fn last_cell(&self) -> bool {
        *self.cells.last().unwrap()
    }

    pub fn is_constant(&self, b: bool) -> bool {
        self.cells.iter().all(|c| *c == b) && self.pts.iter().all(|p| *p == b)
    }

    pub fn slice(&self, lo: &Q, hi: Option<&Q>) -> Segs {
        let inside = |c: &Q| c > lo && hi.is_none_or(|h| c < h);
        let mut out =
            Segs { lo: lo.clone(), hi: hi.cloned(), cuts: vec![], pts: vec![], cells: vec![self.right_of(lo)] };
        for (k, c) in self.cuts.iter().enumerate() {
            if inside(c) {
                out.cuts.push(c.clone());
                out.pts.push(self.pts[k]);
                out.cells.push(self.cells[k + 1]);
            }
        }
        out
    }

    pub fn scale(&self, f: &Q) -> Segs {
        Segs {
            lo: &self.lo * f,
            hi: self.hi.as_ref().map(|h| h * f),
            cuts: self.cuts.iter().map(|c| c * f).collect(),
            pts: self.pts.clone(),
            cells: self.cells.clone(),
        }
    }

    /// `self`, then the point `self.hi` with bit `mid`, then `rest`.
    pub fn concat(mut self, mid: bool, rest: Segs) -> Segs {
        let m = self.hi.take().expect("concat needs a bounded left part");
        debug_assert_eq!(m, rest.lo);
        self.cuts.push(m);
        self.pts.push(mid);
        self.cuts.extend(rest.cuts);
        self.pts.extend(rest.pts);
        self.cells.extend(rest.cells);
        self.hi = rest.hi;
        self
    }

    pub fn zip(&self, other: &Segs, op: impl Fn(bool, bool) -> bool) -> Segs {
        debug_assert!(self.lo == other.lo && self.hi == other.hi);
        let mut cuts: Vec<Q> = self.cuts.iter().chain(&other.cuts).cloned().collect();
        cuts.sort();
        cuts.dedup();
        let pts = cuts.iter().map(|c| op(self.at(c), other.at(c))).collect();
        let mut cells = vec![op(self.first_cell(), other.first_cell())];
        cells.extend(cuts.iter().map(|c| op(self.right_of(c), other.right_of(c))));
        Segs { lo: self.lo.clone(), hi: self.hi.clone(), cuts, pts, cells }.simplified()
    }

    pub fn map(&self, op: impl Fn(bool) -> bool) -> Segs {
        Segs {
            lo: self.lo.clone(),
            hi: self.hi.clone(),
            cuts: self.cuts.clone(),
            pts: self.pts.iter().map(|b| op(*b)).collect(),
            cells: self.cells.iter().map(|b| op(*b)).collect(),
        }
    }

    /// Drops cut points that carry no information.
    pub fn simplified(self) -> Segs {
        let mut out = Segs { lo: self.lo, hi: self.hi, cuts: vec![], pts: vec![], cells: vec![self.cells[0]] };
        for (k, c) in self.cuts.into_iter().enumerate() {
            let last = *out.cells.last().unwrap();
            if self.pts[k] == last && self.cells[k + 1] == last {
                continue;
            }
            out.cuts.push(c);
            out.pts.push(self.pts[k]);
            out.cells.push(self.cells[k + 1]);
        }
        out
    }

    /// Keeps a cut point only when it and both neighbouring cells are members.
    pub fn interior_points(&self) -> Segs {
        let mut out = self.clone();
        for k in 0..out.pts.len() {
            out.pts[k] = self.pts[k] && self.cells[k] && self.cells[k + 1];
        }
        out.simplified()
    }
}

/// Subset of `(0, inf)`; see the module docs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Half {
    pub top: Q,
    /// Pattern on `(top/2, top)`.
    pub per: Segs,
    pub top_in: bool,
    /// Pattern on `(top, inf)`.
    pub up: Segs,
}

impl Half {
    pub fn constant(b: bool) -> Half {
        let top = Q::one();
        Half {
            per: Segs::constant(half_of(&top), Some(top.clone()), b),
            top_in: b,
            up: Segs::constant(top.clone(), None, b),
            top,
        }
    }

    /// The part of an interval lying in `(0, inf)`; bounds are `None` at `inf`.
    pub fn interval(lo: &Q, lo_closed: bool, hi: Option<&Q>, hi_closed: bool) -> Half {
        debug_assert!(!lo.is_negative());
        if lo.is_positive() {
            let top = lo.clone();
            let up = match hi {
                None => Segs::constant(top.clone(), None, true),
                Some(h) if h == lo => Segs::constant(top.clone(), None, false),
                Some(h) => Segs {
                    lo: top.clone(),
                    hi: None,
                    cuts: vec![h.clone()],
                    pts: vec![hi_closed],
                    cells: vec![true, false],
                },
            };
            return Half { per: Segs::constant(half_of(&top), Some(top.clone()), false), top_in: lo_closed, up, top };
        }
        match hi {
            None => Half::constant(true),
            Some(h) => {
                let top = half_of(h);
                let up = Segs {
                    lo: top.clone(),
                    hi: None,
                    cuts: vec![h.clone()],
                    pts: vec![hi_closed],
                    cells: vec![true, false],
                };
                Half { per: Segs::constant(half_of(&top), Some(top.clone()), true), top_in: true, up, top }
            }
        }
    }

    /// `union_k 2^-k * seed` for a seed pattern on `(top/2, top)`.
    pub fn ladder(top: Q, seed: Segs) -> Half {
        let up = Segs::constant(top.clone(), None, false);
        Half { top, per: seed, top_in: false, up }
    }

    pub fn at(&self, x: &Q) -> bool {
        debug_assert!(x.is_positive());
        if *x > self.top {
            return self.up.at(x);
        }
        let mut y = x.clone();
        let low = half_of(&self.top);
        while y <= low {
            y = twice(&y);
        }
        if y == self.top {
            self.top_in
        } else {
            self.per.at(&y)
        }
    }

    /// Pattern of the set on `(lo, hi)` for `0 < lo`.
    pub fn slice(&self, lo: &Q, hi: Option<&Q>) -> Segs {
        if *lo >= self.top {
            return self.up.slice(lo, hi);
        }
        let mut k = 0u32;
        let mut b = self.top.clone();
        while half_of(&b) >= *lo {
            b = half_of(&b);
            k += 1;
        }
        // (b/2, b] holds lo; unroll blocks from there up to top.
        let mut acc: Option<Segs> = None;
        let mut scale = Q::one() / Q::from_integer(num_bigint::BigInt::from(2u8).pow(k));
        for _ in 0..=k {
            let block = self.per.scale(&scale);
            acc = Some(match acc {
                None => block,
                Some(a) => a.concat(self.top_in, block),
            });
            scale = twice(&scale);
        }
        let whole = acc.unwrap().concat(self.top_in, self.up.clone());
        whole.slice(lo, hi).simplified()
    }

    /// Same set, stored with a smaller top `t`.
    pub fn rebase(&self, t: &Q) -> Half {
        debug_assert!(*t <= self.top && t.is_positive());
        Half { top: t.clone(), per: self.slice(&half_of(t), Some(t)), top_in: self.at(t), up: self.slice(t, None) }
    }

    /// Raises the top while the stored upper part repeats the periodic pattern.
    pub fn canonical(mut self) -> Half {
        self.per = self.per.simplified();
        self.up = self.up.simplified();
        while !self.up.cuts.is_empty() {
            let t2 = twice(&self.top);
            let scaled = self.per.scale(&q(2));
            if self.up.slice(&self.top, Some(&t2)) != scaled || self.up.at(&t2) != self.top_in {
                break;
            }
            self.up = self.up.slice(&t2, None);
            self.per = scaled;
            self.top = t2;
        }
        self
    }

    pub fn zip(&self, other: &Half, op: impl Fn(bool, bool) -> bool + Copy) -> Half {
        let t = if self.top <= other.top { self.top.clone() } else { other.top.clone() };
        let a = self.rebase(&t);
        let b = other.rebase(&t);
        Half { per: a.per.zip(&b.per, op), top_in: op(a.top_in, b.top_in), up: a.up.zip(&b.up, op), top: t }.canonical()
    }

    pub fn complement(&self) -> Half {
        Half { top: self.top.clone(), per: self.per.map(|b| !b), top_in: !self.top_in, up: self.up.map(|b| !b) }
    }

    /// `{x : 2x in self}`.
    pub fn halve(&self) -> Half {
        let h = q(1) / q(2);
        Half { top: half_of(&self.top), per: self.per.scale(&h), top_in: self.top_in, up: self.up.scale(&h) }
    }

    /// Interior inside `(0, inf)`.
    pub fn interior(&self) -> Half {
        let h = self.rebase(&half_of(&self.top));
        let top_in = h.top_in && h.per.last_cell() && h.up.first_cell();
        Half { per: h.per.interior_points(), up: h.up.interior_points(), top_in, top: h.top }.canonical()
    }

    /// Contains some `(0, e)`.
    pub fn full_near_zero(&self) -> bool {
        self.top_in && self.per.is_constant(true)
    }

    pub fn empty_near_zero(&self) -> bool {
        !self.top_in && self.per.is_constant(false)
    }

    pub fn is_empty(&self) -> bool {
        self.empty_near_zero() && self.up.is_constant(false)
    }

    /// Largest finite cut point, at least the top.
    pub fn max_endpoint(&self) -> Q {
        self.up.cuts.last().cloned().unwrap_or_else(|| self.top.clone())
    }

    /// Normalized block patterns `(pattern on (1/2,1), bit at 1)` from the highest block
    /// `(N/2, N]` above every cut down to the periodic block; returns the blocks and `N`.
    fn blocks(&self) -> (Vec<(Segs, bool)>, Q) {
        let m = self.max_endpoint();
        let mut n = self.top.clone();
        while n < m {
            n = twice(&n);
        }
        let mut out = Vec::new();
        let mut b = n.clone();
        loop {
            let pat = self.slice(&half_of(&b), Some(&b)).scale(&(Q::one() / &b));
            out.push((pat, self.at(&b)));
            if b == self.top {
                break;
            }
            b = half_of(&b);
        }
        (out, n)
    }

    /// Number of dyadic blocks the descending recursion visits.
    pub fn block_count(&self) -> usize {
        let m = self.max_endpoint();
        let mut n = self.top.clone();
        let mut k = 1;
        while n < m {
            n = twice(&n);
            k += 1;
        }
        k
    }

    /// Rebuilds a half from block results ordered from top `n` downwards, plus the tail bit.
    fn assemble(blocks: Vec<(Segs, bool)>, n: Q, tail: bool) -> Half {
        let count = blocks.len();
        let mut tops = Vec::with_capacity(count);
        let mut b = n.clone();
        for _ in 0..count {
            tops.push(b.clone());
            b = half_of(&b);
        }
        let place = |i: usize| blocks[i].0.scale(&tops[i]);
        let last = count - 1;
        let top = tops[last].clone();
        let mut up: Option<(Segs, bool)> = None;
        for i in (0..last).rev() {
            let seg = place(i);
            up = Some(match up {
                None => (seg, blocks[i].1),
                Some((acc, bit)) => (acc.concat(bit, seg), blocks[i].1),
            });
        }
        let tail_seg = Segs::constant(n.clone(), None, tail);
        let up = match up {
            None => tail_seg,
            Some((acc, bit)) => acc.concat(bit, tail_seg),
        };
        Half { per: place(last), top_in: blocks[last].1, up, top }.canonical()
    }

    /// `{x : 2^n x in self for every n >= 0}`.
    pub fn invariant_core(&self) -> Half {
        if !self.up.last_cell() {
            return Half::constant(false);
        }
        let (blocks, n) = self.blocks();
        let mut acc = (Segs::constant(q(1) / q(2), Some(q(1)), true), true);
        let mut out = Vec::with_capacity(blocks.len());
        for (pat, bit) in blocks {
            acc = (pat.zip(&acc.0, |a, b| a && b), bit && acc.1);
            out.push(acc.clone());
        }
        Half::assemble(out, n, true)
    }

    /// `{x : 2^n x in self for some n >= 0}`.
    pub fn orbit_union(&self) -> Half {
        if self.up.last_cell() {
            return Half::constant(true);
        }
        let (blocks, n) = self.blocks();
        let mut acc = (Segs::constant(q(1) / q(2), Some(q(1)), false), false);
        let mut out = Vec::with_capacity(blocks.len());
        for (pat, bit) in blocks {
            acc = (pat.zip(&acc.0, |a, b| a || b), bit || acc.1);
            out.push(acc.clone());
        }
        Half::assemble(out, n, false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> Q {
        Q::new(a.into(), b.into())
    }

    #[test]
    fn interval_membership() {
        let h = Half::interval(&q(0), false, Some(&q(1)), false);
        assert!(h.at(&r(1, 2)) && h.at(&r(1, 1000)) && !h.at(&q(1)) && !h.at(&q(3)));
        let g = Half::interval(&q(1), false, Some(&q(2)), false);
        assert!(g.at(&r(3, 2)) && !g.at(&q(1)) && !g.at(&q(2)) && !g.at(&r(1, 2)));
    }

    #[test]
    fn rebase_preserves_membership() {
        let h = Half::interval(&q(1), false, Some(&q(5)), true);
        let g = h.rebase(&r(3, 8));
        for k in 1..60 {
            let x = r(k, 8);
            assert_eq!(h.at(&x), g.at(&x), "{x}");
        }
        let c = g.clone().canonical();
        assert_eq!(c.top, r(3, 4));
        assert!((1..60).all(|k| c.at(&r(k, 8)) == h.at(&r(k, 8))));
    }

    #[test]
    fn orbit_union_of_unit_gap() {
        let h = Half::interval(&q(1), false, Some(&q(2)), false);
        let e = h.orbit_union();
        assert!(e.at(&r(3, 4)) && e.at(&r(3, 2)) && !e.at(&q(1)) && !e.at(&r(1, 2)) && !e.at(&q(2)) && !e.at(&q(3)));
    }

    #[test]
    fn invariant_core_of_gap_complement() {
        let a = Half::interval(&q(0), false, Some(&q(1)), false);
        let b = Half::interval(&r(3, 2), false, None, false);
        let w = a.zip(&b, |x, y| x || y).invariant_core();
        assert!(w.at(&r(7, 8)) && !w.at(&r(5, 8)) && !w.at(&q(1)) && w.at(&q(2)) && w.at(&r(7, 16)));
        assert!(!w.at(&r(3, 4)));
    }

    #[test]
    fn interior_removes_isolated_points() {
        let a = Half::interval(&q(0), false, Some(&q(1)), false);
        let b = Half::interval(&q(1), false, Some(&q(2)), false);
        let u = a.zip(&b, |x, y| x || y).zip(&Half::interval(&q(1), true, Some(&q(1)), true), |x, y| x || y);
        assert!(u.at(&q(1)));
        let i = u.interior();
        assert!(i.at(&q(1)));
        let gap = a.zip(&b, |x, y| x || y);
        assert!(!gap.interior().at(&q(1)));
    }
}
