//! Set literals such as `(-inf,1) U (3/2,inf) U ladder(seed=(3/4,1); block=(1/2,1]; sign=+)`.

use super::pattern::{Half, Segs, Q};
use super::{DyadicSet, RealError, RealValuation};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// One component of a literal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Piece {
    Empty,
    Reals,
    /// Open interval; `None` is infinite.
    Interval(Option<Q>, Option<Q>),
    /// Seed intervals in positive coordinates inside `(top/2, top)`.
    Ladder {
        top: Q,
        seed: Vec<(Q, Q)>,
        positive: bool,
    },
}

impl Piece {
    pub fn to_set(&self) -> Result<DyadicSet, RealError> {
        match self {
            Piece::Empty => Ok(DyadicSet::empty()),
            Piece::Reals => Ok(DyadicSet::reals()),
            Piece::Interval(a, b) => DyadicSet::open_interval(a.clone(), b.clone()),
            Piece::Ladder { top, seed, positive } => DyadicSet::ladder(top, seed, *positive),
        }
    }
}

/// Union of the pieces.
pub fn normalize(pieces: &[Piece]) -> Result<DyadicSet, RealError> {
    let mut acc = DyadicSet::empty();
    for p in pieces {
        acc = acc.union(&p.to_set()?);
    }
    Ok(acc)
}

/// Lower bound, closed, upper bound, closed, start offset.
type Bracket = (Option<Q>, bool, Option<Q>, bool, usize);

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { chars: src.chars().collect(), pos: 0, _src: src }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn err(&self, message: impl Into<String>) -> RealError {
        RealError::Parse { position: self.pos, message: message.into() }
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        let n = s.chars().count();
        if self.chars.len() >= self.pos + n && self.chars[self.pos..self.pos + n].iter().copied().eq(s.chars()) {
            self.pos += n;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), RealError> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{s}`")))
        }
    }

    /// A rational, `inf` or `-inf`; returns `(sign, value)` with `value = None` for infinity.
    fn number(&mut self) -> Result<(i8, Option<Q>), RealError> {
        self.skip_ws();
        let mut sign = 1i8;
        if self.eat("-") {
            sign = -1;
        } else {
            self.eat("+");
        }
        if self.eat("inf") {
            return Ok((sign, None));
        }
        let start = self.pos;
        let digits = |c: &mut Self| {
            let s = c.pos;
            while c.chars.get(c.pos).is_some_and(|ch| ch.is_ascii_digit()) {
                c.pos += 1;
            }
            c.chars[s..c.pos].iter().collect::<String>()
        };
        let int = digits(self);
        if int.is_empty() {
            self.pos = start;
            return Err(self.err("expected a number"));
        }
        let mut value = Q::from_integer(int.parse::<BigInt>().unwrap());
        if self.chars.get(self.pos) == Some(&'/') {
            self.pos += 1;
            let den = digits(self);
            let den: BigInt = den.parse().map_err(|_| self.err("expected a denominator"))?;
            if den.is_zero() {
                return Err(self.err("zero denominator"));
            }
            value /= Q::from_integer(den);
        } else if self.chars.get(self.pos) == Some(&'.') {
            self.pos += 1;
            let frac = digits(self);
            if frac.is_empty() {
                return Err(self.err("expected digits after `.`"));
            }
            let scale = BigInt::from(10u8).pow(frac.len() as u32);
            value += Q::new(frac.parse::<BigInt>().unwrap(), scale);
        }
        if sign < 0 {
            value = -value;
        }
        Ok((sign, Some(value)))
    }

    /// `(a,b)` with arbitrary brackets; returns bounds and closedness.
    fn bracketed(&mut self) -> Result<Bracket, RealError> {
        self.skip_ws();
        let at = self.pos;
        let lo_closed = match self.peek() {
            Some('(') => false,
            Some('[') => true,
            _ => return Err(self.err("expected `(` or `[`")),
        };
        self.pos += 1;
        let (ls, lo) = self.number()?;
        if lo.is_none() && ls > 0 {
            return Err(self.err("lower bound cannot be +inf"));
        }
        self.expect(",")?;
        let (hs, hi) = self.number()?;
        if hi.is_none() && hs < 0 {
            return Err(self.err("upper bound cannot be -inf"));
        }
        let hi_closed = match self.peek() {
            Some(')') => false,
            Some(']') => true,
            _ => return Err(self.err("expected `)` or `]`")),
        };
        self.pos += 1;
        Ok((lo, lo_closed, hi, hi_closed, at))
    }

    fn open_interval(&mut self) -> Result<(Option<Q>, Option<Q>), RealError> {
        let (lo, lc, hi, hc, at) = self.bracketed()?;
        if lc || hc {
            let text: String = self.chars[at..self.pos].iter().collect();
            return Err(RealError::NotOpen(text));
        }
        if let (Some(a), Some(b)) = (&lo, &hi) {
            if a >= b {
                return Err(RealError::EmptyInterval(a.to_string(), b.to_string()));
            }
        }
        Ok((lo, hi))
    }

    fn ladder(&mut self) -> Result<Piece, RealError> {
        self.expect("(")?;
        let mut seed: Option<Vec<(Option<Q>, Option<Q>)>> = None;
        let mut block = None;
        let mut sign = None;
        loop {
            if self.eat("seed") {
                self.expect("=")?;
                let mut ivs = vec![self.open_interval()?];
                while self.eat("U") {
                    ivs.push(self.open_interval()?);
                }
                seed = Some(ivs);
            } else if self.eat("block") {
                self.expect("=")?;
                block = Some(self.bracketed()?);
            } else if self.eat("sign") {
                self.expect("=")?;
                sign = Some(if self.eat("+") {
                    true
                } else if self.eat("-") {
                    false
                } else {
                    return Err(self.err("expected `+` or `-`"));
                });
            } else {
                return Err(self.err("expected `seed`, `block` or `sign`"));
            }
            if self.eat(")") {
                break;
            }
            self.expect(";")?;
        }
        let seed = seed.ok_or_else(|| self.err("ladder needs a seed"))?;
        let (lo, lc, hi, hc, _) = block.ok_or_else(|| self.err("ladder needs a block"))?;
        let (Some(lo), Some(hi)) = (lo, hi) else {
            return Err(RealError::BadLadder("block bounds must be finite".into()));
        };
        let positive = hi.is_positive();
        if sign.is_some_and(|s| s != positive) {
            return Err(RealError::BadLadder("sign disagrees with the block".into()));
        }
        let two = Q::from_integer(2.into());
        let top = if positive {
            if lc || !hc || lo.clone() * &two != hi {
                return Err(RealError::BadLadder(format!(
                    "positive block must look like (b/2,b], got bounds {lo}, {hi}"
                )));
            }
            hi
        } else {
            if !lc || hc || hi.clone() * &two != lo || !lo.is_negative() {
                return Err(RealError::BadLadder(format!(
                    "negative block must look like [-b,-b/2), got bounds {lo}, {hi}"
                )));
            }
            -lo
        };
        let mut out = Vec::new();
        for (a, b) in seed {
            let (Some(a), Some(b)) = (a, b) else {
                return Err(RealError::BadLadder("seed intervals must be bounded".into()));
            };
            out.push(if positive { (a, b) } else { (-b, -a) });
        }
        Ok(Piece::Ladder { top, seed: out, positive })
    }

    fn piece(&mut self) -> Result<Piece, RealError> {
        if self.eat("empty") {
            Ok(Piece::Empty)
        } else if self.eat("R") {
            Ok(Piece::Reals)
        } else if self.eat("ladder") {
            self.ladder()
        } else {
            let (a, b) = self.open_interval()?;
            Ok(Piece::Interval(a, b))
        }
    }
}

/// Parses a literal into its pieces.
pub fn parse_pieces(text: &str) -> Result<Vec<Piece>, RealError> {
    let mut c = Cursor::new(text);
    let mut out = vec![c.piece()?];
    while c.eat("U") {
        out.push(c.piece()?);
    }
    if c.peek().is_some() {
        return Err(c.err("expected `U` or end of input"));
    }
    Ok(out)
}

/// Parses a finite rational such as `-3/4`, `2` or `0.5`.
pub fn parse_point(text: &str) -> Result<Q, RealError> {
    let mut c = Cursor::new(text);
    let (_, value) = c.number()?;
    if c.peek().is_some() {
        return Err(c.err("expected end of input"));
    }
    value.ok_or_else(|| RealError::Parse { position: 0, message: "expected a finite point".into() })
}

pub fn parse_set(text: &str) -> Result<DyadicSet, RealError> {
    normalize(&parse_pieces(text)?)
}

/// Parses `p=(-inf,1); q=(0,inf)`.
pub fn parse_valuation(text: &str) -> Result<RealValuation, RealError> {
    let mut out = RealValuation::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut parts = Vec::new();
    for (i, ch) in text.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ';' if depth == 0 => {
                parts.push((start, &text[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push((start, &text[start..]));
    for (offset, part) in parts {
        if part.trim().is_empty() {
            continue;
        }
        let (name, lit) = part
            .split_once('=')
            .ok_or_else(|| RealError::Parse { position: offset, message: "expected `atom=set`".into() })?;
        let name = name.trim();
        if !crate::kripke::format::valid_atom(name) {
            return Err(RealError::Parse { position: offset, message: format!("bad atom name `{name}`") });
        }
        let set = parse_set(lit).map_err(|e| match e {
            RealError::Parse { position, message } => {
                RealError::Parse { position: position + offset + part.find('=').unwrap() + 1, message }
            }
            other => other,
        })?;
        out.insert(name.to_string(), set);
    }
    Ok(out)
}

enum El {
    Cell(Option<Q>, Option<Q>, bool),
    Pt(Q, bool),
    Ladder(String),
}

fn segs_elems(s: &Segs, out: &mut Vec<El>) {
    let mut lo = Some(s.lo.clone());
    for (k, c) in s.cuts.iter().enumerate() {
        out.push(El::Cell(lo, Some(c.clone()), s.cells[k]));
        out.push(El::Pt(c.clone(), s.pts[k]));
        lo = Some(c.clone());
    }
    out.push(El::Cell(lo, s.hi.clone(), s.last_cell()));
}

fn fmt_q(x: &Q) -> String {
    x.to_string()
}

fn fmt_interval(lo: &Option<Q>, lc: bool, hi: &Option<Q>, hc: bool) -> String {
    let l = lo.as_ref().map_or("-inf".to_string(), fmt_q);
    let h = hi.as_ref().map_or("inf".to_string(), fmt_q);
    format!("{}{l},{h}{}", if lc { '[' } else { '(' }, if hc { ']' } else { ')' })
}

/// Maximal runs of members, rendered as intervals; ladders pass through.
fn components(elems: &[El]) -> Vec<String> {
    let mut out = Vec::new();
    let mut run: Option<(Option<Q>, bool)> = None;
    let mut last_end: Option<(Option<Q>, bool)> = None;
    let close = |run: &mut Option<(Option<Q>, bool)>, end: &Option<(Option<Q>, bool)>, out: &mut Vec<String>| {
        if let (Some((lo, lc)), Some((hi, hc))) = (run.take(), end) {
            out.push(fmt_interval(&lo, lc, hi, *hc));
        }
    };
    for e in elems {
        match e {
            El::Cell(lo, hi, true) => {
                if run.is_none() {
                    run = Some((lo.clone(), false));
                }
                last_end = Some((hi.clone(), false));
            }
            El::Pt(x, true) => {
                if run.is_none() {
                    run = Some((Some(x.clone()), true));
                }
                last_end = Some((Some(x.clone()), true));
            }
            El::Cell(_, _, false) | El::Pt(_, false) => close(&mut run, &last_end, &mut out),
            El::Ladder(text) => {
                close(&mut run, &last_end, &mut out);
                out.push(text.clone());
            }
        }
    }
    close(&mut run, &last_end, &mut out);
    out
}

/// Largest excluded point with members just below it, pushed up while the set stays periodic.
fn ladder_top(h: &Half) -> Q {
    let mut cands = Vec::new();
    for (k, c) in h.per.cuts.iter().enumerate() {
        if !h.per.pts[k] && h.per.cells[k] {
            cands.push(c.clone());
        }
    }
    if !h.top_in && h.per.last_cell() {
        cands.push(h.top.clone());
    }
    if cands.is_empty() {
        return h.top.clone();
    }
    let two = Q::from_integer(2.into());
    let limit = h.max_endpoint() * &two;
    cands
        .into_iter()
        .map(|mut c| {
            while c <= limit {
                let c2 = &c * &two;
                let below = h.slice(&(&c / &two), Some(&c)).scale(&two);
                if h.slice(&c, Some(&c2)) != below || h.at(&c2) != h.at(&c) {
                    break;
                }
                c = c2;
            }
            c
        })
        .max()
        .unwrap()
}

/// Elements of a half in positive coordinates from 0 upward.
fn half_elems(h: &Half, positive: bool) -> Vec<El> {
    let mut out = Vec::new();
    if h.full_near_zero() || h.empty_near_zero() {
        out.push(El::Cell(Some(Q::zero()), Some(h.top.clone()), h.top_in));
        out.push(El::Pt(h.top.clone(), h.top_in));
        segs_elems(&h.up, &mut out);
        return out;
    }
    let c = ladder_top(h);
    let g = h.rebase(&c);
    let mut seed_elems = Vec::new();
    segs_elems(&g.per, &mut seed_elems);
    let text = if positive {
        let seed = components(&seed_elems).join(" U ");
        format!("ladder(seed={seed}; block=({},{}]; sign=+)", fmt_q(&(&c / Q::from_integer(2.into()))), fmt_q(&c))
    } else {
        let seed = components(&mirror(seed_elems)).join(" U ");
        format!(
            "ladder(seed={seed}; block=[{},{}); sign=-)",
            fmt_q(&-c.clone()),
            fmt_q(&-(&c / Q::from_integer(2.into())))
        )
    };
    out.push(El::Ladder(text));
    out.push(El::Pt(c.clone(), g.top_in));
    segs_elems(&g.up, &mut out);
    out
}

fn mirror(elems: Vec<El>) -> Vec<El> {
    elems
        .into_iter()
        .rev()
        .map(|e| match e {
            El::Cell(lo, hi, b) => El::Cell(hi.map(|x| -x), lo.map(|x| -x), b),
            El::Pt(x, b) => El::Pt(-x, b),
            El::Ladder(t) => El::Ladder(t),
        })
        .collect()
}

pub(crate) fn render_set(s: &DyadicSet) -> String {
    let mut elems = mirror(half_elems(&s.neg, false));
    elems.push(El::Pt(Q::zero(), s.zero));
    elems.extend(half_elems(&s.pos, true));
    let parts = components(&elems);
    if parts.is_empty() {
        "empty".to_string()
    } else {
        parts.join(" U ")
    }
}
