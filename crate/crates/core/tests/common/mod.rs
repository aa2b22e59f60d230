//! Seeded random generators shared by the integration tests.

#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use cylproj_core::discrete_core::{AtomSet, DiscreteBase, DiscreteSet};
use cylproj_core::rational::{q, Q};
use cylproj_core::set_core::{Component, DimVar, FinDimSet, OneDimSet, Term};

pub const MAX_DIMS: u32 = 4;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Endpoints `k / 2^depth`.
fn dyadic(r: &mut StdRng, depth: u32) -> Q {
    let den = 1i64 << depth;
    q(r.gen_range(0..=den), den)
}

fn endpoints(r: &mut StdRng) -> (Q, Q) {
    loop {
        let (a, b) = (dyadic(r, 3), dyadic(r, 3));
        if a != b {
            return if a < b { (a, b) } else { (b, a) };
        }
    }
}

fn half_open(r: &mut StdRng) -> OneDimSet {
    let (lo, hi) = endpoints(r);
    OneDimSet::span(lo, hi, true, false)
}

fn point(r: &mut StdRng) -> Q {
    q(r.gen_range(0..12), 12)
}

/// A one-dimensional piece of any shape: intervals with any end flags,
/// finite point sets, punctured intervals and punctured lines.
fn degenerate_component(r: &mut StdRng) -> OneDimSet {
    match r.gen_range(0..8) {
        0 | 1 => half_open(r),
        2 => {
            let (lo, hi) = endpoints(r);
            OneDimSet::span(lo, hi, r.gen(), r.gen())
        }
        3 | 4 => {
            let n = r.gen_range(1..=2);
            OneDimSet::points((0..n).map(|_| point(r))).unwrap()
        }
        5 => {
            let pts = OneDimSet::points([point(r)]).unwrap();
            half_open(r).intersect(&pts.complement())
        }
        6 => OneDimSet::points([point(r)]).unwrap().complement(),
        _ => half_open(r).union(&OneDimSet::points([point(r)]).unwrap()),
    }
}

fn random_term<C: Component>(
    r: &mut StdRng,
    dims: u32,
    comp: &mut dyn FnMut(&mut StdRng) -> C,
) -> Option<Term<C>> {
    let mut all: Vec<u32> = (0..dims).collect();
    all.shuffle(r);
    let k = r.gen_range(1..=dims as usize);
    let mut chosen = all[..k].to_vec();
    chosen.sort_unstable();
    Term::new(
        chosen
            .into_iter()
            .map(|d| (DimVar(d), comp(r)))
            .collect::<Vec<_>>(),
    )
}

/// Union of at most `max_terms` half-open dyadic boxes over `dims` dims.
pub fn nondegenerate_set_with(r: &mut StdRng, dims: u32, max_terms: usize) -> FinDimSet {
    let n = r.gen_range(1..=max_terms);
    FinDimSet::from_terms((0..n).filter_map(|_| random_term(r, dims, &mut half_open)))
}

/// Nondegenerate rectangle union, at most 4 dims and 6 terms.
pub fn nondegenerate_set(r: &mut StdRng) -> FinDimSet {
    let dims = r.gen_range(1..=MAX_DIMS);
    nondegenerate_set_with(r, dims, 6)
}

pub fn degenerate_set_with(r: &mut StdRng, dims: u32, max_terms: usize) -> FinDimSet {
    let n = r.gen_range(1..=max_terms);
    FinDimSet::from_terms((0..n).filter_map(|_| random_term(r, dims, &mut degenerate_component)))
}

/// Sets with points and punctures, occasionally complemented.
pub fn degenerate_set(r: &mut StdRng) -> FinDimSet {
    let dims = r.gen_range(1..=3);
    let s = degenerate_set_with(r, dims, 4);
    if r.gen_ratio(1, 4) {
        s.complement()
    } else {
        s
    }
}

/// Either kind, with degenerate sets a third of the time.
pub fn any_set(r: &mut StdRng) -> FinDimSet {
    if r.gen_ratio(1, 3) {
        degenerate_set(r)
    } else {
        nondegenerate_set(r)
    }
}

/// A base with 1 to 8 named atoms; the tail is zero a quarter of the time.
pub fn discrete_base(r: &mut StdRng) -> DiscreteBase {
    let n = r.gen_range(1..=8);
    let weights: Vec<i64> = (0..n).map(|_| r.gen_range(1..=6)).collect();
    let tail: i64 = if r.gen_ratio(1, 4) {
        0
    } else {
        r.gen_range(1..=4)
    };
    let total: i64 = weights.iter().sum::<i64>() + tail;
    DiscreteBase::new(
        weights.iter().map(|w| q(*w, total)).collect(),
        q(tail, total),
    )
    .expect("weights normalized")
}

fn atom_set(r: &mut StdRng, base: &DiscreteBase) -> AtomSet {
    let n = base.named_probs().len() as u32;
    let k = r.gen_range(0..=n.min(3));
    let atoms: Vec<u32> = (0..k).map(|_| r.gen_range(0..n)).collect();
    if r.gen() {
        AtomSet::cofinite(base.universe(), atoms)
    } else {
        AtomSet::finite(base.universe(), atoms)
    }
}

pub fn discrete_set_with(
    r: &mut StdRng,
    base: &DiscreteBase,
    dims: u32,
    max_terms: usize,
) -> DiscreteSet {
    let n = r.gen_range(1..=max_terms);
    DiscreteSet::from_terms(
        (0..n).filter_map(|_| random_term(r, dims, &mut |r: &mut StdRng| atom_set(r, base))),
    )
}

pub fn discrete_set(r: &mut StdRng, base: &DiscreteBase) -> DiscreteSet {
    let dims = r.gen_range(1..=MAX_DIMS);
    discrete_set_with(r, base, dims, 6)
}

pub fn dim(r: &mut StdRng, dims: u32) -> DimVar {
    DimVar(r.gen_range(0..dims))
}

pub fn e1() -> FinDimSet {
    let y = DimVar(0);
    let z = DimVar(1);
    FinDimSet::product([
        (y, OneDimSet::points([q(2, 3)]).unwrap()),
        (z, OneDimSet::span(q(1, 2), q(1, 1), true, false)),
    ])
    .union(&FinDimSet::product([
        (y, OneDimSet::points([q(1, 3)]).unwrap()),
        (z, OneDimSet::span(q(0, 1), q(1, 2), true, false)),
    ]))
}
