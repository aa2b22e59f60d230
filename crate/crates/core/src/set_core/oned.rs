//! Subsets of `[0,1)` as flagged partitions with rational breakpoints.

use std::fmt;

use num_traits::{One, Zero};

use super::{Component, SetError};
use crate::rational::{fmt_exact, Q};

/// A non-degenerate half-open interval `[lo, hi)` inside `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Q,
    hi: Q,
}

impl Interval {
    pub fn new(lo: Q, hi: Q) -> Result<Self, SetError> {
        if lo < Q::zero() || hi > Q::one() {
            return Err(SetError::OutOfRange(if lo < Q::zero() { lo } else { hi }));
        }
        if lo >= hi {
            return Err(SetError::DegenerateInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> &Q {
        &self.lo
    }

    pub fn hi(&self) -> &Q {
        &self.hi
    }

    pub fn length(&self) -> Q {
        &self.hi - &self.lo
    }
}

impl From<Interval> for OneDimSet {
    fn from(iv: Interval) -> Self {
        OneDimSet::span(iv.lo, iv.hi, true, false)
    }
}

/// A subset of `[0,1)`.
///
/// `breaks` is strictly increasing from `0` to `1`. `open[i]` says whether the
/// open interval `(breaks[i], breaks[i+1])` is included and `point[i]` whether
/// the breakpoint `breaks[i]` itself is. The representation is kept canonical:
/// no interior breakpoint has `open[i-1] == point[i] == open[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OneDimSet {
    breaks: Vec<Q>,
    open: Vec<bool>,
    point: Vec<bool>,
}

impl OneDimSet {
    fn constant(flag: bool) -> Self {
        Self {
            breaks: vec![Q::zero(), Q::one()],
            open: vec![flag],
            point: vec![flag],
        }
    }

    pub fn empty() -> Self {
        Self::constant(false)
    }

    pub fn full() -> Self {
        Self::constant(true)
    }

    /// Builds a set from raw flags, canonicalizing it.
    pub fn from_parts(breaks: Vec<Q>, open: Vec<bool>, point: Vec<bool>) -> Result<Self, SetError> {
        let valid = breaks.len() >= 2
            && breaks[0].is_zero()
            && breaks[breaks.len() - 1].is_one()
            && breaks.windows(2).all(|w| w[0] < w[1])
            && open.len() == breaks.len() - 1
            && point.len() == breaks.len() - 1;
        if !valid {
            return Err(SetError::MalformedPartition);
        }
        let mut s = Self {
            breaks,
            open,
            point,
        };
        s.normalize();
        Ok(s)
    }

    /// The interval from `lo` to `hi` with the given endpoint closedness,
    /// clipped to `[0,1)`. Caller guarantees `0 <= lo < hi <= 1`.
    pub fn span(lo: Q, hi: Q, lo_closed: bool, hi_closed: bool) -> Self {
        debug_assert!(lo >= Q::zero() && lo < hi && hi <= Q::one());
        let mut breaks = vec![Q::zero()];
        let mut open = Vec::new();
        let mut point = Vec::new();
        if !lo.is_zero() {
            breaks.push(lo.clone());
            open.push(false);
            point.push(false);
        }
        point.push(lo_closed);
        open.push(true);
        if !hi.is_one() {
            breaks.push(hi);
            point.push(hi_closed);
            open.push(false);
        }
        breaks.push(Q::one());
        let mut s = Self {
            breaks,
            open,
            point,
        };
        s.normalize();
        s
    }

    /// A finite set of points in `[0,1)`.
    pub fn points<I: IntoIterator<Item = Q>>(pts: I) -> Result<Self, SetError> {
        let mut acc = Self::empty();
        for p in pts {
            if p < Q::zero() || p >= Q::one() {
                return Err(SetError::OutOfRange(p));
            }
            let single = if p.is_zero() {
                Self {
                    breaks: vec![Q::zero(), Q::one()],
                    open: vec![false],
                    point: vec![true],
                }
            } else {
                Self {
                    breaks: vec![Q::zero(), p, Q::one()],
                    open: vec![false, false],
                    point: vec![false, true],
                }
            };
            acc = acc.union(&single);
        }
        Ok(acc)
    }

    pub fn breakpoints(&self) -> &[Q] {
        &self.breaks
    }

    pub fn length(&self) -> Q {
        let mut total = Q::zero();
        for (i, &inc) in self.open.iter().enumerate() {
            if inc {
                total += &self.breaks[i + 1] - &self.breaks[i];
            }
        }
        total
    }

    pub fn contains(&self, x: &Q) -> bool {
        if *x < Q::zero() || *x >= Q::one() {
            return false;
        }
        // Last breakpoint <= x.
        let i = self.breaks.partition_point(|b| b <= x) - 1;
        if self.breaks[i] == *x {
            self.point[i]
        } else {
            self.open[i]
        }
    }

    /// Flags of this set on `grid`, which must contain every breakpoint of
    /// `self`. Returns `(open, point)` indexed like `grid`.
    fn sample(&self, grid: &[Q]) -> (Vec<bool>, Vec<bool>) {
        let mut open = Vec::with_capacity(grid.len() - 1);
        let mut point = Vec::with_capacity(grid.len() - 1);
        let mut j = 0;
        for g in &grid[..grid.len() - 1] {
            while self.breaks[j + 1] <= *g {
                j += 1;
            }
            point.push(if self.breaks[j] == *g {
                self.point[j]
            } else {
                self.open[j]
            });
            open.push(self.open[j]);
        }
        (open, point)
    }

    fn merged_grid<'a, I: IntoIterator<Item = &'a OneDimSet>>(sets: I) -> Vec<Q> {
        let mut grid: Vec<Q> = sets
            .into_iter()
            .flat_map(|s| s.breaks.iter().cloned())
            .collect();
        grid.sort();
        grid.dedup();
        grid
    }

    fn zip_with(&self, other: &Self, f: impl Fn(bool, bool) -> bool) -> Self {
        let grid = Self::merged_grid([self, other]);
        let (ao, ap) = self.sample(&grid);
        let (bo, bp) = other.sample(&grid);
        let open = ao.iter().zip(&bo).map(|(&x, &y)| f(x, y)).collect();
        let point = ap.iter().zip(&bp).map(|(&x, &y)| f(x, y)).collect();
        let mut s = Self {
            breaks: grid,
            open,
            point,
        };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let k = self.open.len();
        let mut breaks = vec![self.breaks[0].clone()];
        let mut open = vec![self.open[0]];
        let mut point = vec![self.point[0]];
        for i in 1..k {
            let prev = *open.last().unwrap();
            if prev == self.point[i] && prev == self.open[i] {
                continue;
            }
            breaks.push(self.breaks[i].clone());
            open.push(self.open[i]);
            point.push(self.point[i]);
        }
        breaks.push(Q::one());
        self.breaks = breaks;
        self.open = open;
        self.point = point;
    }

    /// Maximal connected pieces as `(lo, lo_closed, hi, hi_closed)`; a single
    /// point has `lo == hi`.
    fn runs(&self) -> Vec<(Q, bool, Q, bool)> {
        // Piece 2i is the point breaks[i], piece 2i+1 the open interval after it.
        let k = self.open.len();
        let included = |p: usize| {
            if p.is_multiple_of(2) {
                self.point[p / 2]
            } else {
                self.open[p / 2]
            }
        };
        let mut runs = Vec::new();
        let mut p = 0;
        while p < 2 * k {
            if !included(p) {
                p += 1;
                continue;
            }
            let start = p;
            while p + 1 < 2 * k && included(p + 1) {
                p += 1;
            }
            let lo = self.breaks[start / 2].clone();
            let lo_closed = start % 2 == 0;
            let (hi, hi_closed) = if p % 2 == 0 {
                (self.breaks[p / 2].clone(), true)
            } else {
                (self.breaks[p / 2 + 1].clone(), false)
            };
            runs.push((lo, lo_closed, hi, hi_closed));
            p += 1;
        }
        runs
    }
}

impl Component for OneDimSet {
    const TERM_SYNTAX: (&'static str, char, char) = ("rect", '{', '}');

    fn is_empty(&self) -> bool {
        self.open.len() == 1 && !self.open[0] && !self.point[0]
    }

    fn is_full(&self) -> bool {
        self.open.len() == 1 && self.open[0] && self.point[0]
    }

    fn union(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a || b)
    }

    fn intersect(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a && b)
    }

    fn complement(&self) -> Self {
        Self {
            breaks: self.breaks.clone(),
            open: self.open.iter().map(|f| !f).collect(),
            point: self.point.iter().map(|f| !f).collect(),
        }
    }

    fn refine(parts: &[&Self]) -> Vec<(Self, Vec<bool>)> {
        let grid = Self::merged_grid(parts.iter().copied());
        let k = grid.len() - 1;
        let samples: Vec<_> = parts.iter().map(|s| s.sample(&grid)).collect();
        let sig_of = |piece: usize| -> Vec<bool> {
            samples
                .iter()
                .map(|(o, pt)| {
                    if piece.is_multiple_of(2) {
                        pt[piece / 2]
                    } else {
                        o[piece / 2]
                    }
                })
                .collect()
        };
        let mut cells = Vec::new();
        let mut p = 0;
        while p < 2 * k {
            let sig = sig_of(p);
            let start = p;
            while p + 1 < 2 * k && sig_of(p + 1) == sig {
                p += 1;
            }
            let mut open = vec![false; k];
            let mut point = vec![false; k];
            for piece in start..=p {
                if piece % 2 == 0 {
                    point[piece / 2] = true;
                } else {
                    open[piece / 2] = true;
                }
            }
            let mut cell = Self {
                breaks: grid.clone(),
                open,
                point,
            };
            cell.normalize();
            cells.push((cell, sig));
            p += 1;
        }
        cells
    }
}

impl fmt::Display for OneDimSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let runs = self.runs();
        if runs.is_empty() {
            return f.write_str("∅");
        }
        let mut pieces: Vec<String> = Vec::new();
        let mut pending_points: Vec<String> = Vec::new();
        let flush = |pending: &mut Vec<String>, pieces: &mut Vec<String>| {
            if !pending.is_empty() {
                pieces.push(format!("{{{}}}", pending.join(", ")));
                pending.clear();
            }
        };
        for (lo, lc, hi, hc) in runs {
            if lo == hi {
                pending_points.push(fmt_exact(&lo));
                continue;
            }
            flush(&mut pending_points, &mut pieces);
            pieces.push(format!(
                "{}{},{}{}",
                if lc { '[' } else { '(' },
                fmt_exact(&lo),
                fmt_exact(&hi),
                if hc { ']' } else { ')' }
            ));
        }
        flush(&mut pending_points, &mut pieces);
        f.write_str(&pieces.join(" ∪ "))
    }
}
