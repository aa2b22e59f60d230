//! Power measures, fiber profiles and the closed forms for the measures of
//! n-fold unions and intersections of substituted copies.
//!
//! For a set `a` and a dimension `y`, write `z̄` for the other free
//! dimensions of `a`. The y-section of `a` is a step function of `z̄`; a
//! [`FiberProfile`] lists its steps as `(volume, q)` pairs where `q` is the
//! one-dimensional measure of the section. Substituting fresh `y_1..y_n` for
//! `y` gives copies whose sections are independent given `z̄`, so
//!
//! ```text
//! μ(⋂ a(y/y_i)) = Σ vol · qⁿ        μ(⋃ a(y/y_i)) = 1 − Σ vol · (1 − q)ⁿ
//! ```
//!
//! for the Lebesgue power measure and the discrete one alike.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::discrete_core::{AtomSet, DiscreteBase, DiscreteError, DiscreteSet};
use crate::rational::{pow, MeasureValue, Q};
use crate::set_core::{Component, CylSet, DimVar, FinDimSet, OneDimSet, Term};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MeasureError {
    #[error(transparent)]
    Discrete(#[from] DiscreteError),
    #[error("profile volumes sum to {0}, not 1")]
    ProfileNotNormalized(Q),
    #[error("profile cell {index} has {field} = {value} outside [0,1]")]
    ProfileValueOutOfRange {
        index: usize,
        field: &'static str,
        value: Q,
    },
}

/// A one-dimensional probability measure extended to the power space.
pub trait PowerMeasure<C: Component> {
    fn component_measure(&self, c: &C) -> Result<Q, MeasureError>;

    /// Sum over the canonical (disjoint) terms of the product of component
    /// measures.
    fn measure(&self, a: &CylSet<C>) -> Result<MeasureValue, MeasureError> {
        let mut total = Q::zero();
        for t in a.canonical_terms() {
            let mut v = Q::one();
            for (_, c) in t.components() {
                v *= self.component_measure(c)?;
            }
            total += v;
        }
        Ok(MeasureValue::new(total))
    }
}

/// The Lebesgue power measure on `[0,1)^α`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Lebesgue;

impl PowerMeasure<OneDimSet> for Lebesgue {
    fn component_measure(&self, c: &OneDimSet) -> Result<Q, MeasureError> {
        Ok(c.length())
    }
}

impl PowerMeasure<AtomSet> for DiscreteBase {
    fn component_measure(&self, c: &AtomSet) -> Result<Q, MeasureError> {
        Ok(self.measure_atoms(c)?)
    }
}

pub fn lebesgue_measure(a: &FinDimSet) -> MeasureValue {
    Lebesgue
        .measure(a)
        .expect("Lebesgue measure of a representable set is total")
}

pub fn discrete_measure(
    a: &DiscreteSet,
    base: &DiscreteBase,
) -> Result<MeasureValue, MeasureError> {
    base.measure(a)
}

/// One step of a fiber profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileCell<C> {
    /// The parameter region as a product over the `z̄` dimensions, absent for
    /// profiles supplied directly as `(volume, q)` pairs.
    pub region: Option<Term<C>>,
    pub volume: Q,
    /// Measure of the y-section over the region.
    pub q: Q,
    pub fiber: Option<C>,
}

/// The y-section measure of a set as a step function of the remaining free
/// dimensions. Cells partition the parameter space, including cells whose
/// section is empty, so the volumes sum to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberProfile<C: Component = OneDimSet> {
    projection_dim: Option<DimVar>,
    degenerate: bool,
    cells: Vec<ProfileCell<C>>,
}

impl<C: Component> FiberProfile<C> {
    /// A profile given directly by `(volume, q)` pairs, e.g. for sets that are
    /// not finite unions of products.
    pub fn from_cells<I: IntoIterator<Item = (Q, Q)>>(cells: I) -> Result<Self, MeasureError> {
        let unit = |index, field, v: &Q| {
            if *v < Q::zero() || *v > Q::one() {
                Err(MeasureError::ProfileValueOutOfRange {
                    index,
                    field,
                    value: v.clone(),
                })
            } else {
                Ok(())
            }
        };
        let mut out = Vec::new();
        let mut total = Q::zero();
        for (i, (volume, q)) in cells.into_iter().enumerate() {
            unit(i, "vol", &volume)?;
            unit(i, "q", &q)?;
            total += &volume;
            out.push(ProfileCell {
                region: None,
                volume,
                q,
                fiber: None,
            });
        }
        if !total.is_one() {
            return Err(MeasureError::ProfileNotNormalized(total));
        }
        Ok(Self {
            projection_dim: None,
            degenerate: false,
            cells: out,
        })
    }

    pub fn projection_dim(&self) -> Option<DimVar> {
        self.projection_dim
    }

    /// True when the set does not depend on the projection dimension, so
    /// every section is empty or full.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn cells(&self) -> &[ProfileCell<C>] {
        &self.cells
    }

    /// `Σ vol · q`, which equals the measure of the set.
    pub fn fubini_total(&self) -> Q {
        self.cells.iter().map(|c| &c.volume * &c.q).sum()
    }

    /// Measure of the intersection of `n` copies with fresh projection dims.
    pub fn n_fold_intersection(&self, n: u64) -> MeasureValue {
        assert!(n >= 1, "n-fold measures start at n = 1");
        MeasureValue::new(self.cells.iter().map(|c| &c.volume * pow(&c.q, n)).sum())
    }

    /// `Σ (vol · q)ⁿ`: the weighted section measure raised to `n` as a whole.
    /// Agrees with [`Self::n_fold_intersection`] only at `n = 1` or when every
    /// weight is 0 or 1; kept for comparison, never used as a measure.
    pub fn n_fold_intersection_uncorrected(&self, n: u64) -> Q {
        assert!(n >= 1, "n-fold measures start at n = 1");
        self.cells.iter().map(|c| pow(&(&c.volume * &c.q), n)).sum()
    }

    /// Measure of the union of `n` copies with fresh projection dims.
    pub fn n_fold_union(&self, n: u64) -> MeasureValue {
        assert!(n >= 1, "n-fold measures start at n = 1");
        let miss: Q = self
            .cells
            .iter()
            .map(|c| &c.volume * pow(&(Q::one() - &c.q), n))
            .sum();
        MeasureValue::new(Q::one() - miss)
    }

    /// `(sup_n union measure, inf_n intersection measure)`: the volume of
    /// cells with positive section and with full-measure section.
    pub fn limits(&self) -> (MeasureValue, MeasureValue) {
        let sup = self
            .cells
            .iter()
            .filter(|c| c.q > Q::zero())
            .map(|c| c.volume.clone())
            .sum();
        let inf = self
            .cells
            .iter()
            .filter(|c| c.q.is_one())
            .map(|c| c.volume.clone())
            .sum();
        (MeasureValue::new(sup), MeasureValue::new(inf))
    }

    /// Upper bound on the distance of both n-th terms from their limits:
    /// `Σ_{0<q<1} vol · max(q, 1−q)ⁿ`.
    pub fn gap_bound_at(&self, n: u64) -> Q {
        self.cells
            .iter()
            .filter(|c| c.q > Q::zero() && !c.q.is_one())
            .map(|c| {
                let other = Q::one() - &c.q;
                let m = if c.q > other { &c.q } else { &other };
                &c.volume * pow(m, n)
            })
            .sum()
    }

    /// Smallest `n >= 1` with `gap_bound_at(n) <= eps`. Requires `eps > 0`.
    pub fn n_for_gap(&self, eps: &Q) -> u64 {
        assert!(*eps > Q::zero(), "target gap must be positive");
        if self.gap_bound_at(1) <= *eps {
            return 1;
        }
        let mut hi = 2u64;
        while self.gap_bound_at(hi) > *eps {
            hi *= 2;
        }
        let mut lo = hi / 2;
        // gap(lo) > eps >= gap(hi)
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.gap_bound_at(mid) <= *eps {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }
}

/// Partitions the parameter space of `a` (its free dimensions other than `y`)
/// into cells on which the y-section of `a` is constant, and measures each
/// section. With no parameter dimensions the space is a single unit cell.
pub fn fiber_profile<C, M>(a: &CylSet<C>, y: DimVar, m: &M) -> Result<FiberProfile<C>, MeasureError>
where
    C: Component,
    M: PowerMeasure<C> + ?Sized,
{
    let dims = a.dim_set();
    let degenerate = !dims.contains(&y);
    let zbar: Vec<DimVar> = dims.into_iter().filter(|d| *d != y).collect();
    let terms: Vec<&Term<C>> = a.canonical_terms().iter().collect();
    let mut cells = Vec::new();
    profile_rec(&terms, &zbar, y, m, Vec::new(), Q::one(), &mut cells)?;
    Ok(FiberProfile {
        projection_dim: Some(y),
        degenerate,
        cells,
    })
}

fn profile_rec<C, M>(
    terms: &[&Term<C>],
    zbar: &[DimVar],
    y: DimVar,
    m: &M,
    region: Vec<(DimVar, C)>,
    volume: Q,
    out: &mut Vec<ProfileCell<C>>,
) -> Result<(), MeasureError>
where
    C: Component,
    M: PowerMeasure<C> + ?Sized,
{
    let close = |fiber: Option<C>, q: Q, region: Vec<(DimVar, C)>, volume: Q| ProfileCell {
        region: Term::new(region),
        volume,
        q,
        fiber,
    };
    let Some((&d, rest)) = zbar.split_first() else {
        let mut fiber: Option<C> = None;
        let mut full = false;
        for t in terms {
            match t.get(y) {
                Some(c) => {
                    fiber = Some(match fiber {
                        Some(f) => f.union(c),
                        None => c.clone(),
                    })
                }
                None => full = true,
            }
        }
        let q = if full {
            Q::one()
        } else {
            match &fiber {
                Some(f) => m.component_measure(f)?,
                None => Q::zero(),
            }
        };
        let fiber = if full { None } else { fiber };
        out.push(close(fiber, q, region, volume));
        return Ok(());
    };
    let mut parts = Vec::new();
    let mut slot = Vec::with_capacity(terms.len());
    for t in terms {
        match t.get(d) {
            Some(c) => {
                slot.push(Some(parts.len()));
                parts.push(c);
            }
            None => slot.push(None),
        }
    }
    if parts.is_empty() {
        return profile_rec(terms, rest, y, m, region, volume, out);
    }
    for (cell, sig) in C::refine(&parts) {
        let alive: Vec<&Term<C>> = terms
            .iter()
            .zip(&slot)
            .filter(|(_, s)| s.is_none_or(|p| sig[p]))
            .map(|(t, _)| *t)
            .collect();
        let vol = &volume * m.component_measure(&cell)?;
        let mut reg = region.clone();
        reg.push((d, cell));
        if alive.is_empty() {
            out.push(close(None, Q::zero(), reg, vol));
        } else {
            profile_rec(&alive, rest, y, m, reg, vol, out)?;
        }
    }
    Ok(())
}

/// Dimensions of `a` other than `y`.
pub fn parameter_dims<C: Component>(a: &CylSet<C>, y: DimVar) -> BTreeSet<DimVar> {
    let mut d = a.dim_set();
    d.remove(&y);
    d
}
