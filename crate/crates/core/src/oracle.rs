//! Brute-force cross-checks for the closed forms.
//!
//! Nothing here touches fiber profiles or the n-fold formulas: the n-fold
//! stages are built literally from substitutions and Boolean operations, and
//! measures are summed over the atomic cells of the per-dimension breakpoint
//! refinement.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::discrete_core::{DiscreteBase, DiscreteSet};
use crate::measure_engine::{Lebesgue, MeasureError, PowerMeasure};
use crate::rational::{MeasureValue, Q};
use crate::set_core::{Component, CylSet, DimVar, FinDimSet, SetError};

pub const DEFAULT_MAX_N: u64 = 5;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("n = {n} exceeds the materialization bound {max}")]
    BoundExceeded { n: u64, max: u64 },
    #[error("cell enumeration exceeded the cap of {0} cells")]
    CellCapExceeded(u64),
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Union,
    Intersection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub max_n: u64,
    /// Cap on visited grid cells during enumeration.
    pub max_cells: Option<u64>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            max_n: DEFAULT_MAX_N,
            max_cells: None,
        }
    }
}

/// `n` dimensions not free in `a` and distinct from `y`.
pub fn fresh_dims<C: Component>(a: &CylSet<C>, y: DimVar, n: u64) -> Vec<DimVar> {
    let start = a.max_dim().map_or(0, |d| d.0 + 1).max(y.0 + 1);
    (0..n as u32).map(|i| DimVar(start + i)).collect()
}

/// The literal union or intersection of `a(y/y_i)` for `n` fresh `y_i`.
pub fn materialize_n_fold<C: Component>(
    a: &CylSet<C>,
    y: DimVar,
    n: u64,
    mode: Mode,
    cfg: &OracleConfig,
) -> Result<CylSet<C>, OracleError> {
    if n > cfg.max_n {
        return Err(OracleError::BoundExceeded { n, max: cfg.max_n });
    }
    let mut acc: Option<CylSet<C>> = None;
    for yi in fresh_dims(a, y, n) {
        let copy = a.substitute(y, yi)?;
        acc = Some(match acc {
            None => copy,
            Some(s) => match mode {
                Mode::Union => s.union(&copy).canonical(),
                Mode::Intersection => s.intersect(&copy).canonical(),
            },
        });
    }
    Ok(acc.unwrap_or_else(|| match mode {
        // Empty union and empty intersection.
        Mode::Union => CylSet::empty(),
        Mode::Intersection => CylSet::unit(),
    }))
}

/// Sums the volumes of grid cells inside `a`, where the grid is the product
/// of each dimension's refinement over all stored terms. Subtrees no term can
/// reach are skipped and subtrees covered by a term are summed in one step;
/// both shortcuts are exact.
pub fn grid_measure_with<C, M>(
    a: &CylSet<C>,
    m: &M,
    cfg: &OracleConfig,
) -> Result<MeasureValue, OracleError>
where
    C: Component,
    M: PowerMeasure<C> + ?Sized,
{
    let terms = a.terms();
    let dims: BTreeSet<DimVar> = terms.iter().flat_map(|t| t.dims()).collect();
    let mut levels = Vec::with_capacity(dims.len());
    for &d in &dims {
        let mut slot = vec![None; terms.len()];
        let mut parts = Vec::new();
        for (i, t) in terms.iter().enumerate() {
            if let Some(c) = t.get(d) {
                slot[i] = Some(parts.len());
                parts.push(c);
            }
        }
        let mut cells = Vec::new();
        for (cell, sig) in C::refine(&parts) {
            cells.push((m.component_measure(&cell)?, sig));
        }
        levels.push(Level { cells, slot });
    }
    // remaining[i][l]: number of constrained dims of term i at levels >= l.
    let remaining: Vec<Vec<usize>> = terms
        .iter()
        .enumerate()
        .map(|(i, _)| {
            let mut r = vec![0; levels.len() + 1];
            for l in (0..levels.len()).rev() {
                r[l] = r[l + 1] + usize::from(levels[l].slot[i].is_some());
            }
            r
        })
        .collect();
    let alive: Vec<usize> = (0..terms.len()).collect();
    let mut visited = 0u64;
    let total = enumerate(&levels, &remaining, 0, &alive, Q::one(), cfg, &mut visited)?;
    Ok(MeasureValue::new(total))
}

struct Level {
    cells: Vec<(Q, Vec<bool>)>,
    slot: Vec<Option<usize>>,
}

fn enumerate(
    levels: &[Level],
    remaining: &[Vec<usize>],
    l: usize,
    alive: &[usize],
    volume: Q,
    cfg: &OracleConfig,
    visited: &mut u64,
) -> Result<Q, OracleError> {
    *visited += 1;
    if let Some(cap) = cfg.max_cells {
        if *visited > cap {
            return Err(OracleError::CellCapExceeded(cap));
        }
    }
    if alive.is_empty() || volume.is_zero() {
        return Ok(Q::zero());
    }
    if alive.iter().any(|&i| remaining[i][l] == 0) {
        return Ok(volume);
    }
    let level = &levels[l];
    let mut sum = Q::zero();
    for (mass, sig) in &level.cells {
        let next: Vec<usize> = alive
            .iter()
            .copied()
            .filter(|&i| level.slot[i].is_none_or(|p| sig[p]))
            .collect();
        sum += enumerate(
            levels,
            remaining,
            l + 1,
            &next,
            &volume * mass,
            cfg,
            visited,
        )?;
    }
    Ok(sum)
}

/// Lebesgue measure by grid enumeration.
pub fn grid_measure(a: &FinDimSet) -> MeasureValue {
    grid_measure_with(a, &Lebesgue, &OracleConfig::default())
        .expect("uncapped Lebesgue enumeration is total")
}

/// Discrete measure of the materialized n-fold stage by enumeration over
/// atom classes (each named atom alone, the unnamed atoms as one class).
pub fn truncation_measure_discrete(
    a: &DiscreteSet,
    base: &DiscreteBase,
    y: DimVar,
    n: u64,
    mode: Mode,
    cfg: &OracleConfig,
) -> Result<MeasureValue, OracleError> {
    let stage = materialize_n_fold(a, y, n, mode, cfg)?;
    grid_measure_with(&stage, base, cfg)
}

/// Closed-form-free measure of the n-fold stage for any power measure.
pub fn n_fold_measure_by_materialization<C, M>(
    a: &CylSet<C>,
    y: DimVar,
    n: u64,
    mode: Mode,
    m: &M,
    cfg: &OracleConfig,
) -> Result<MeasureValue, OracleError>
where
    C: Component,
    M: PowerMeasure<C> + ?Sized,
{
    let stage = materialize_n_fold(a, y, n, mode, cfg)?;
    grid_measure_with(&stage, m, cfg)
}
