use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use super::{Component, DimVar, SetError};

/// A product of one-dimensional components. Dimensions without an entry are
/// the whole line; full components are never stored and a term with an empty
/// component is never constructed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term<C> {
    comps: BTreeMap<DimVar, C>,
}

impl<C: Component> Term<C> {
    pub fn unit() -> Self {
        Self {
            comps: BTreeMap::new(),
        }
    }

    /// `None` when some component is empty. Repeated dimensions intersect.
    pub fn new<I: IntoIterator<Item = (DimVar, C)>>(comps: I) -> Option<Self> {
        let mut map: BTreeMap<DimVar, C> = BTreeMap::new();
        for (d, c) in comps {
            let c = match map.remove(&d) {
                Some(prev) => prev.intersect(&c),
                None => c,
            };
            if c.is_empty() {
                return None;
            }
            map.insert(d, c);
        }
        map.retain(|_, c| !c.is_full());
        Some(Self { comps: map })
    }

    pub fn is_unit(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn get(&self, d: DimVar) -> Option<&C> {
        self.comps.get(&d)
    }

    pub fn components(&self) -> impl Iterator<Item = (DimVar, &C)> {
        self.comps.iter().map(|(d, c)| (*d, c))
    }

    pub fn dims(&self) -> impl Iterator<Item = DimVar> + '_ {
        self.comps.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    fn first_dim(&self) -> Option<DimVar> {
        self.comps.keys().next().copied()
    }

    fn without(&self, d: DimVar) -> Self {
        let mut comps = self.comps.clone();
        comps.remove(&d);
        Self { comps }
    }

    /// Adds a component on a dimension the term does not constrain yet.
    fn with(mut self, d: DimVar, c: &C) -> Self {
        debug_assert!(!self.comps.contains_key(&d));
        if !c.is_full() {
            self.comps.insert(d, c.clone());
        }
        self
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let mut comps = self.comps.clone();
        for (d, c) in &other.comps {
            match comps.get_mut(d) {
                Some(mine) => {
                    let both = mine.intersect(c);
                    if both.is_empty() {
                        return None;
                    }
                    *mine = both;
                }
                None => {
                    comps.insert(*d, c.clone());
                }
            }
        }
        Some(Self { comps })
    }

    fn renamed(&self, from: DimVar, to: DimVar) -> Self {
        let mut comps = self.comps.clone();
        if let Some(c) = comps.remove(&from) {
            comps.insert(to, c);
        }
        Self { comps }
    }

    pub fn render(&self, name: &dyn Fn(DimVar) -> String) -> String {
        let (kw, open, close) = C::TERM_SYNTAX;
        if self.comps.is_empty() {
            return format!("{kw}{open}{close}");
        }
        let body: Vec<String> = self
            .comps
            .iter()
            .map(|(d, c)| format!("{}:{}", name(*d), c))
            .collect();
        if open == '{' {
            format!("{kw}{open} {} {close}", body.join(", "))
        } else {
            format!("{kw}{open}{}{close}", body.join(", "))
        }
    }
}

/// A finite union of product terms over an unbounded family of dimensions.
///
/// Equality, hashing and [`CylSet::dim_set`] are computed on the canonical
/// form, which is built lazily and cached. The canonical form splits on the
/// smallest free dimension, groups the cells of that dimension by the
/// (recursively canonical) set they lead to, and merges each group into one
/// component. Its terms are pairwise disjoint.
#[derive(Clone)]
pub struct CylSet<C: Component> {
    terms: Arc<Vec<Term<C>>>,
    canon: Arc<OnceLock<Vec<Term<C>>>>,
}

impl<C: Component> CylSet<C> {
    pub fn from_terms<I: IntoIterator<Item = Term<C>>>(terms: I) -> Self {
        Self {
            terms: Arc::new(terms.into_iter().collect()),
            canon: Arc::new(OnceLock::new()),
        }
    }

    fn from_canonical(terms: Vec<Term<C>>) -> Self {
        let canon = OnceLock::new();
        let _ = canon.set(terms.clone());
        Self {
            terms: Arc::new(terms),
            canon: Arc::new(canon),
        }
    }

    pub fn empty() -> Self {
        Self::from_canonical(Vec::new())
    }

    pub fn unit() -> Self {
        Self::from_canonical(vec![Term::unit()])
    }

    /// A single product term; empty if any component is empty.
    pub fn product<I: IntoIterator<Item = (DimVar, C)>>(comps: I) -> Self {
        Self::from_terms(Term::new(comps))
    }

    /// The terms as constructed (possibly overlapping).
    pub fn terms(&self) -> &[Term<C>] {
        &self.terms
    }

    /// The canonical disjoint terms.
    pub fn canonical_terms(&self) -> &[Term<C>] {
        self.canon.get_or_init(|| canon_rec(&self.terms))
    }

    pub fn canonical(&self) -> Self {
        Self::from_canonical(self.canonical_terms().to_vec())
    }

    pub fn is_empty(&self) -> bool {
        self.canonical_terms().is_empty()
    }

    pub fn is_unit(&self) -> bool {
        matches!(self.canonical_terms(), [t] if t.is_unit())
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().chain(other.terms.iter()).cloned())
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let a = self.canonical_terms();
        let b = other.canonical_terms();
        let mut out = Vec::with_capacity(a.len() * b.len());
        for s in a {
            for t in b {
                if let Some(st) = s.intersect(t) {
                    out.push(st);
                }
            }
        }
        Self::from_terms(out)
    }

    /// Complement relative to the unit of the power space.
    pub fn complement(&self) -> Self {
        Self::from_terms(complement_rec(self.canonical_terms()))
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.intersect(&other.complement())
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    /// Dimensions the set actually depends on.
    pub fn dim_set(&self) -> BTreeSet<DimVar> {
        self.canonical_terms()
            .iter()
            .flat_map(|t| t.dims())
            .collect()
    }

    /// Largest dimension index mentioned by any stored term.
    pub fn max_dim(&self) -> Option<DimVar> {
        self.terms.iter().flat_map(|t| t.dims()).max()
    }

    /// Existential projection along `y`, as a cylinder.
    pub fn cylindrify(&self, y: DimVar) -> Self {
        Self::from_terms(self.terms.iter().map(|t| t.without(y)))
    }

    /// Universal projection along `y`: `-C_y(-a)`.
    pub fn co_cylindrify(&self, y: DimVar) -> Self {
        self.complement().cylindrify(y).complement()
    }

    /// Renames the free dimension `from` to `to`, which must not be free.
    pub fn substitute(&self, from: DimVar, to: DimVar) -> Result<Self, SetError> {
        if from == to {
            return Ok(self.clone());
        }
        let dims = self.dim_set();
        if dims.contains(&to) {
            return Err(SetError::TargetDimensionOccupied(to));
        }
        if !dims.contains(&from) {
            return Ok(self.clone());
        }
        Ok(Self::from_terms(
            self.canonical_terms().iter().map(|t| t.renamed(from, to)),
        ))
    }

    /// An equal set whose terms are pairwise disjoint products of the atomic
    /// cells of each dimension's breakpoint refinement.
    pub fn disjointify(&self) -> Self {
        let terms = self.terms.as_slice();
        let dims: BTreeSet<DimVar> = terms.iter().flat_map(|t| t.dims()).collect();
        let grids: Vec<Grid<C>> = dims
            .iter()
            .map(|&d| {
                let mut slot = vec![None; terms.len()];
                let mut parts = Vec::new();
                for (i, t) in terms.iter().enumerate() {
                    if let Some(c) = t.get(d) {
                        slot[i] = Some(parts.len());
                        parts.push(c);
                    }
                }
                (d, C::refine(&parts), slot)
            })
            .collect();
        let alive: Vec<usize> = (0..terms.len()).collect();
        let mut out = Vec::new();
        disjointify_rec(&grids, 0, &alive, Term::unit(), &mut out);
        Self::from_terms(out)
    }

    /// Renders the canonical form with the supplied dimension names.
    pub fn render(&self, name: &dyn Fn(DimVar) -> String) -> String {
        let terms = self.canonical_terms();
        if terms.is_empty() {
            return "∅".to_string();
        }
        terms
            .iter()
            .map(|t| t.render(name))
            .collect::<Vec<_>>()
            .join(" | ")
    }
}

fn disjointify_rec<C: Component>(
    grids: &[Grid<C>],
    level: usize,
    alive: &[usize],
    prefix: Term<C>,
    out: &mut Vec<Term<C>>,
) {
    if alive.is_empty() {
        return;
    }
    let Some((d, cells, slot)) = grids.get(level) else {
        out.push(prefix);
        return;
    };
    for (cell, sig) in cells {
        let next: Vec<usize> = alive
            .iter()
            .copied()
            .filter(|&i| slot[i].is_none_or(|p| sig[p]))
            .collect();
        disjointify_rec(grids, level + 1, &next, prefix.clone().with(*d, cell), out);
    }
}

/// Splits `terms` on their smallest dimension `d`. For every class of cells
/// of `d` that no term distinguishes, yields the merged component and the
/// terms alive on it with `d` removed.
/// A dimension, its refinement cells with signatures, and each term's part index.
type Grid<C> = (DimVar, Vec<(C, Vec<bool>)>, Vec<Option<usize>>);

/// Cells of one dimension, each with the residual terms alive on it.
type Slices<C> = Vec<(C, Vec<Term<C>>)>;

fn split_first<C: Component>(terms: &[Term<C>]) -> (DimVar, Slices<C>) {
    let d = terms
        .iter()
        .filter_map(|t| t.first_dim())
        .min()
        .expect("split_first needs a non-unit term");
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
    let mut classes: BTreeMap<Vec<bool>, C> = BTreeMap::new();
    for (cell, sig) in C::refine(&parts) {
        classes
            .entry(sig)
            .and_modify(|c| *c = c.union(&cell))
            .or_insert(cell);
    }
    let groups = classes
        .into_iter()
        .map(|(sig, comp)| {
            let sub = terms
                .iter()
                .zip(&slot)
                .filter(|(_, s)| s.is_none_or(|p| sig[p]))
                .map(|(t, _)| t.without(d))
                .collect();
            (comp, sub)
        })
        .collect();
    (d, groups)
}

fn canon_rec<C: Component>(terms: &[Term<C>]) -> Vec<Term<C>> {
    if terms.is_empty() {
        return Vec::new();
    }
    if terms.iter().any(Term::is_unit) {
        return vec![Term::unit()];
    }
    let (d, groups) = split_first(terms);
    let mut by_result: BTreeMap<Vec<Term<C>>, C> = BTreeMap::new();
    for (comp, sub) in groups {
        let sub = canon_rec(&sub);
        if sub.is_empty() {
            continue;
        }
        by_result
            .entry(sub)
            .and_modify(|c| *c = c.union(&comp))
            .or_insert(comp);
    }
    if by_result.len() == 1 {
        let (sub, comp) = by_result.iter().next().unwrap();
        if comp.is_full() {
            return sub.clone();
        }
    }
    let mut ordered: Vec<(C, Vec<Term<C>>)> = by_result.into_iter().map(|(s, c)| (c, s)).collect();
    ordered.sort();
    ordered
        .into_iter()
        .flat_map(|(comp, sub)| sub.into_iter().map(move |t| t.with(d, &comp)))
        .collect()
}

fn complement_rec<C: Component>(terms: &[Term<C>]) -> Vec<Term<C>> {
    if terms.is_empty() {
        return vec![Term::unit()];
    }
    if terms.iter().any(Term::is_unit) {
        return Vec::new();
    }
    let (d, groups) = split_first(terms);
    groups
        .into_iter()
        .flat_map(|(comp, sub)| {
            complement_rec(&sub)
                .into_iter()
                .map(move |t| t.with(d, &comp))
        })
        .collect()
}

impl<C: Component> PartialEq for CylSet<C> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.terms, &other.terms) || self.canonical_terms() == other.canonical_terms()
    }
}

impl<C: Component> Eq for CylSet<C> {}

impl<C: Component> std::hash::Hash for CylSet<C> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.canonical_terms().hash(state);
    }
}

impl<C: Component> fmt::Debug for CylSet<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("CylSet").field(&self.to_string()).finish()
    }
}

impl<C: Component> fmt::Display for CylSet<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&|d| d.to_string()))
    }
}
