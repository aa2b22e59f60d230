//! Sets over a countable atom base `T = {c_0, c_1, ...}` carrying a discrete
//! probability measure.
//!
//! Only finitely many atoms are ever named. The unnamed atoms `c_N, c_{N+1},
//! ...` behave as one indivisible class in every dimension and share the
//! base's tail mass, so every sum over `T` reduces to a finite expression.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};

use crate::rational::Q;
use crate::set_core::{Component, CylSet, DimVar};

/// The carrier an [`AtomSet`] lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AtomUniverse {
    /// Countably many atoms; all but finitely many are unnamed.
    Countable,
    /// Exactly `n` atoms `c_0..c_{n-1}`.
    Finite(u32),
}

/// A finite or cofinite set of atom indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomSet {
    universe: AtomUniverse,
    cofinite: bool,
    members: BTreeSet<u32>,
}

impl AtomSet {
    pub fn finite<I: IntoIterator<Item = u32>>(universe: AtomUniverse, atoms: I) -> Self {
        let members = atoms.into_iter().collect();
        Self {
            universe,
            cofinite: false,
            members,
        }
        .normalized()
    }

    /// All atoms except the listed ones.
    pub fn cofinite<I: IntoIterator<Item = u32>>(universe: AtomUniverse, excluded: I) -> Self {
        Self {
            universe,
            cofinite: true,
            members: excluded.into_iter().collect(),
        }
        .normalized()
    }

    pub fn full(universe: AtomUniverse) -> Self {
        Self::cofinite(universe, [])
    }

    pub fn empty(universe: AtomUniverse) -> Self {
        Self::finite(universe, [])
    }

    fn normalized(mut self) -> Self {
        if let AtomUniverse::Finite(n) = self.universe {
            if self.cofinite {
                self.members = (0..n).filter(|i| !self.members.contains(i)).collect();
                self.cofinite = false;
            } else {
                self.members.retain(|&i| i < n);
            }
        }
        self
    }

    pub fn universe(&self) -> AtomUniverse {
        self.universe
    }

    pub fn is_cofinite(&self) -> bool {
        self.cofinite
    }

    /// Listed atoms: the members of a finite set, the exclusions of a cofinite one.
    pub fn listed(&self) -> &BTreeSet<u32> {
        &self.members
    }

    pub fn contains(&self, atom: u32) -> bool {
        match self.universe {
            AtomUniverse::Finite(n) if atom >= n => false,
            _ => self.members.contains(&atom) != self.cofinite,
        }
    }

    fn check_universe(&self, other: &Self) {
        assert_eq!(
            self.universe, other.universe,
            "atom sets over different universes cannot be combined"
        );
    }
}

impl Component for AtomSet {
    const TERM_SYNTAX: (&'static str, char, char) = ("prod", '(', ')');

    fn is_empty(&self) -> bool {
        !self.cofinite && self.members.is_empty()
    }

    fn is_full(&self) -> bool {
        match self.universe {
            AtomUniverse::Countable => self.cofinite && self.members.is_empty(),
            AtomUniverse::Finite(n) => self.members.len() == n as usize,
        }
    }

    fn union(&self, other: &Self) -> Self {
        self.check_universe(other);
        let (cofinite, members) = match (self.cofinite, other.cofinite) {
            (false, false) => (false, &self.members | &other.members),
            (true, true) => (true, &self.members & &other.members),
            (true, false) => (true, &self.members - &other.members),
            (false, true) => (true, &other.members - &self.members),
        };
        Self {
            universe: self.universe,
            cofinite,
            members,
        }
        .normalized()
    }

    fn intersect(&self, other: &Self) -> Self {
        self.complement().union(&other.complement()).complement()
    }

    fn complement(&self) -> Self {
        Self {
            universe: self.universe,
            cofinite: !self.cofinite,
            members: self.members.clone(),
        }
        .normalized()
    }

    fn refine(parts: &[&Self]) -> Vec<(Self, Vec<bool>)> {
        let Some(first) = parts.first() else {
            return Vec::new();
        };
        let universe = first.universe;
        let named: BTreeSet<u32> = parts
            .iter()
            .flat_map(|p| p.members.iter().copied())
            .collect();
        let mut cells: Vec<(Self, Vec<bool>)> = named
            .iter()
            .map(|&i| {
                let sig = parts.iter().map(|p| p.contains(i)).collect();
                (Self::finite(universe, [i]), sig)
            })
            .collect();
        let rest = Self::cofinite(universe, named.iter().copied());
        if !rest.is_empty() {
            let sig = parts.iter().map(|p| p.cofinite).collect();
            cells.push((rest, sig));
        }
        cells
    }
}

impl fmt::Display for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list: Vec<String> = self.members.iter().map(u32::to_string).collect();
        if self.cofinite {
            write!(f, "co{{{}}}", list.join(","))
        } else {
            write!(f, "{{{}}}", list.join(","))
        }
    }
}

/// Sets built from finitely many atom-set products; the discrete analogue of
/// [`crate::set_core::FinDimSet`].
pub type DiscreteSet = CylSet<AtomSet>;

/// Product of atom sets, one per dimension.
pub fn prod<I: IntoIterator<Item = (DimVar, AtomSet)>>(comps: I) -> DiscreteSet {
    DiscreteSet::product(comps)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiscreteError {
    #[error("atom probabilities must be positive, got {0}")]
    NonPositiveAtom(Q),
    #[error("tail mass must be non-negative, got {0}")]
    NegativeTail(Q),
    #[error("atom probabilities and tail mass sum to {0}, not 1")]
    NotNormalized(Q),
    #[error("atom c_{0} is not named by the base")]
    UnknownAtom(u32),
    #[error(
        "set universe {set:?} does not match the base (named atoms {named}, tail mass {tail})"
    )]
    UniverseMismatch {
        set: AtomUniverse,
        named: usize,
        tail: Q,
    },
}

/// A discrete probability measure on `T`: explicit probabilities for the
/// named atoms plus a tail mass spread over the unnamed ones.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiscreteBase {
    named: Vec<Q>,
    tail: Q,
}

impl DiscreteBase {
    pub fn new(named: Vec<Q>, tail: Q) -> Result<Self, DiscreteError> {
        if let Some(p) = named.iter().find(|p| **p <= Q::zero()) {
            return Err(DiscreteError::NonPositiveAtom(p.clone()));
        }
        if tail < Q::zero() {
            return Err(DiscreteError::NegativeTail(tail));
        }
        let total = named.iter().fold(tail.clone(), |acc, p| acc + p);
        if !total.is_one() {
            return Err(DiscreteError::NotNormalized(total));
        }
        Ok(Self { named, tail })
    }

    pub fn named_probs(&self) -> &[Q] {
        &self.named
    }

    pub fn tail_mass(&self) -> &Q {
        &self.tail
    }

    /// The universe sets measured by this base must live in.
    pub fn universe(&self) -> AtomUniverse {
        if self.tail.is_zero() {
            AtomUniverse::Finite(self.named.len() as u32)
        } else {
            AtomUniverse::Countable
        }
    }

    pub fn prob(&self, atom: u32) -> Result<&Q, DiscreteError> {
        self.named
            .get(atom as usize)
            .ok_or(DiscreteError::UnknownAtom(atom))
    }

    /// `p`-measure of a one-dimensional atom set.
    pub fn measure_atoms(&self, s: &AtomSet) -> Result<Q, DiscreteError> {
        if s.universe() != self.universe() {
            return Err(DiscreteError::UniverseMismatch {
                set: s.universe(),
                named: self.named.len(),
                tail: self.tail.clone(),
            });
        }
        let mut listed = Q::zero();
        for &i in s.listed() {
            listed += self.prob(i)?;
        }
        Ok(if s.is_cofinite() {
            Q::one() - listed
        } else {
            listed
        })
    }
}
