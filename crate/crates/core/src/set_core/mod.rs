//! Finite-dimensional subsets of `[0,1)^α` and their Boolean and cylindric
//! algebra.
//!
//! Every set is a finite union of product terms. A term constrains finitely
//! many dimensions; all others are implicitly the whole line, so the ambient
//! power space is never materialized. The same machinery serves the discrete
//! sets in [`crate::discrete_core`] through the [`Component`] trait.

mod cyl;
mod oned;
#[cfg(test)]
mod tests;

use std::fmt;
use std::hash::Hash;

pub use cyl::{CylSet, Term};
pub use oned::{Interval, OneDimSet};

use crate::rational::Q;

/// A dimension of the power space, named by its index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DimVar(pub u32);

impl fmt::Display for DimVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SetError {
    #[error("degenerate interval: lower end {lo} is not below upper end {hi}")]
    DegenerateInterval { lo: Q, hi: Q },
    #[error("value {0} lies outside [0,1)")]
    OutOfRange(Q),
    #[error("breakpoints must increase strictly from 0 to 1 with one flag per piece")]
    MalformedPartition,
    #[error("substitution target {0} is already a free dimension of the set")]
    TargetDimensionOccupied(DimVar),
}

/// One-dimensional building block of a product term.
///
/// Implementors form a Boolean algebra of subsets of a fixed line (`[0,1)` or
/// the atom base). `refine` must return pairwise disjoint cells covering the
/// whole line such that every input part is a union of cells; the boolean
/// vector records, per part, whether the cell lies inside it.
pub trait Component: Clone + fmt::Debug + fmt::Display + Eq + Ord + Hash {
    /// Keyword and delimiters used when rendering a product term.
    const TERM_SYNTAX: (&'static str, char, char);

    fn is_empty(&self) -> bool;
    fn is_full(&self) -> bool;
    fn union(&self, other: &Self) -> Self;
    fn intersect(&self, other: &Self) -> Self;
    fn complement(&self) -> Self;
    fn refine(parts: &[&Self]) -> Vec<(Self, Vec<bool>)>;

    fn is_subset(&self, other: &Self) -> bool {
        self.intersect(&other.complement()).is_empty()
    }
}

/// Finite unions of products of one-dimensional interval/point sets.
pub type FinDimSet = CylSet<OneDimSet>;

/// Half-open rectangle term from `(dim, [lo, hi))` sides.
pub fn rect<I>(sides: I) -> Result<FinDimSet, SetError>
where
    I: IntoIterator<Item = (DimVar, Q, Q)>,
{
    let mut comps = Vec::new();
    for (d, lo, hi) in sides {
        comps.push((d, OneDimSet::from(Interval::new(lo, hi)?)));
    }
    Ok(FinDimSet::product(comps))
}
