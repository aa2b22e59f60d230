use proptest::prelude::*;

use super::*;
use crate::rational::q;

const Y: DimVar = DimVar(0);
const Z: DimVar = DimVar(1);
const W: DimVar = DimVar(2);

fn iv(lo: Q, hi: Q) -> OneDimSet {
    OneDimSet::span(lo, hi, true, false)
}

fn pts(v: &[Q]) -> OneDimSet {
    OneDimSet::points(v.iter().cloned()).unwrap()
}

fn e1() -> FinDimSet {
    FinDimSet::product([(Y, pts(&[q(2, 3)])), (Z, iv(q(1, 2), q(1, 1)))]).union(
        &FinDimSet::product([(Y, pts(&[q(1, 3)])), (Z, iv(q(0, 1), q(1, 2)))]),
    )
}

fn staircase() -> FinDimSet {
    rect([(Z, q(0, 1), q(1, 4))])
        .unwrap()
        .union(&rect([(Y, q(0, 1), q(1, 2)), (Z, q(1, 4), q(1, 1))]).unwrap())
}

fn measure(a: &FinDimSet) -> Q {
    crate::measure_engine::lebesgue_measure(a).exact
}

#[test]
fn union_with_empty_and_involution() {
    let a = staircase();
    assert_eq!(a.union(&FinDimSet::empty()), a);
    assert_eq!(a.complement().complement(), a);
    assert_eq!(e1().complement().complement(), e1());
}

#[test]
fn e1_terms_are_disjoint() {
    let f1 = FinDimSet::product([(Y, pts(&[q(2, 3)])), (Z, iv(q(1, 2), q(1, 1)))]);
    let f2 = FinDimSet::product([(Y, pts(&[q(1, 3)])), (Z, iv(q(0, 1), q(1, 2)))]);
    assert!(f1.intersect(&f2).is_empty());
}

#[test]
fn disjointify_examples() {
    let a = rect([(Y, q(0, 1), q(1, 2)), (Z, q(0, 1), q(1, 2))]).unwrap();
    assert_eq!(a.disjointify().terms(), a.terms());

    let b = rect([(Y, q(0, 1), q(3, 4))])
        .unwrap()
        .union(&rect([(Y, q(1, 4), q(1, 1))]).unwrap());
    let d = b.disjointify();
    let cells: Vec<OneDimSet> = d
        .terms()
        .iter()
        .map(|t| t.get(Y).unwrap().clone())
        .collect();
    assert_eq!(
        cells,
        vec![
            iv(q(0, 1), q(1, 4)),
            iv(q(1, 4), q(3, 4)),
            iv(q(3, 4), q(1, 1))
        ]
    );
    assert!(d.is_unit());
    assert_eq!(d.disjointify().terms(), d.terms());
}

#[test]
fn dim_set_examples() {
    let a = FinDimSet::product([(Y, iv(q(0, 1), q(1, 2))), (Z, OneDimSet::full())]);
    assert_eq!(a.dim_set().into_iter().collect::<Vec<_>>(), vec![Y]);
    assert_eq!(e1().dim_set().into_iter().collect::<Vec<_>>(), vec![Y, Z]);
    assert!(FinDimSet::unit().dim_set().is_empty());
    // A dimension mentioned by the terms but not depended upon.
    let split = rect([(Y, q(0, 1), q(1, 2)), (Z, q(0, 1), q(1, 2))])
        .unwrap()
        .union(&rect([(Y, q(0, 1), q(1, 2)), (Z, q(1, 2), q(1, 1))]).unwrap());
    assert_eq!(split.dim_set().into_iter().collect::<Vec<_>>(), vec![Y]);
}

#[test]
fn substitute_examples() {
    let a = staircase();
    let b = a.substitute(Y, W).unwrap();
    assert_eq!(b.dim_set().into_iter().collect::<Vec<_>>(), vec![Z, W]);
    assert_eq!(measure(&b), measure(&a));
    assert_eq!(a.substitute(Y, Y).unwrap(), a);
    assert_eq!(
        a.substitute(Y, Z).unwrap_err(),
        SetError::TargetDimensionOccupied(Z)
    );

    let y7 = DimVar(7);
    let both = e1().substitute(Y, y7).unwrap().intersect(&e1());
    assert_eq!(
        both.dim_set().into_iter().collect::<Vec<_>>(),
        vec![Y, Z, y7]
    );
    assert_eq!(measure(&both), q(0, 1));
}

#[test]
fn cylindrify_examples() {
    let c = e1().cylindrify(Y);
    assert!(c.is_unit());
    assert_eq!(measure(&c), q(1, 1));
    assert!(FinDimSet::unit().cylindrify(Y).is_unit());
    let cz = e1().cylindrify(Z);
    assert_eq!(cz, FinDimSet::product([(Y, pts(&[q(1, 3), q(2, 3)]))]));
    assert_eq!(measure(&cz), q(0, 1));
}

#[test]
fn co_cylindrify_examples() {
    assert!(FinDimSet::unit().co_cylindrify(Y).is_unit());
    assert!(e1().co_cylindrify(Y).is_empty());
    assert_eq!(
        staircase().co_cylindrify(Y),
        rect([(Z, q(0, 1), q(1, 4))]).unwrap()
    );
}

#[test]
fn set_equal_examples() {
    let a = staircase();
    assert_eq!(a, a.clone());
    assert!(a.union(&a.complement()).is_unit());
    assert_eq!(a.union(&a.complement()), FinDimSet::unit());
}

#[test]
fn render_uses_names() {
    let names = |d: DimVar| ["y", "z"][d.0 as usize].to_string();
    assert_eq!(
        e1().render(&names),
        "rect{ y:{1/3}, z:[0,1/2) } | rect{ y:{2/3}, z:[1/2,1) }"
    );
    assert_eq!(FinDimSet::unit().render(&names), "rect{}");
    assert_eq!(FinDimSet::empty().render(&names), "∅");
}

#[test]
fn canonical_terms_are_disjoint() {
    let a = staircase()
        .union(&e1())
        .union(&rect([(W, q(1, 8), q(5, 8))]).unwrap());
    let terms = a.canonical_terms();
    for (i, s) in terms.iter().enumerate() {
        for t in &terms[i + 1..] {
            assert!(s.intersect(t).is_none(), "{s:?} meets {t:?}");
        }
    }
}

pub(crate) fn arb_oned() -> impl Strategy<Value = OneDimSet> {
    let endpoint = (0i64..=4).prop_map(|k| q(k, 4));
    let piece = prop_oneof![
        3 => (endpoint.clone(), endpoint.clone()).prop_filter_map("degenerate", |(a, b)| {
            (a < b).then(|| iv(a, b))
        }),
        1 => (0i64..8).prop_map(|k| pts(&[q(k, 8)])),
    ];
    proptest::collection::vec(piece, 1..3)
        .prop_map(|ps| ps.iter().skip(1).fold(ps[0].clone(), |acc, p| acc.union(p)))
}

pub(crate) fn arb_set() -> impl Strategy<Value = FinDimSet> {
    let term = proptest::collection::btree_map(0u32..3, arb_oned(), 1..3).prop_map(|m| {
        m.into_iter()
            .map(|(d, c)| (DimVar(d), c))
            .collect::<Vec<_>>()
    });
    proptest::collection::vec(term, 0..4)
        .prop_map(|ts| FinDimSet::from_terms(ts.into_iter().filter_map(Term::new)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn boolean_laws(a in arb_set(), b in arb_set(), c in arb_set()) {
        prop_assert_eq!(a.union(&b), b.union(&a));
        prop_assert_eq!(a.intersect(&b), b.intersect(&a));
        prop_assert_eq!(a.union(&b).union(&c), a.union(&b.union(&c)));
        prop_assert_eq!(a.intersect(&b).intersect(&c), a.intersect(&b.intersect(&c)));
        prop_assert_eq!(a.intersect(&b.union(&c)), a.intersect(&b).union(&a.intersect(&c)));
        prop_assert_eq!(a.union(&b).complement(), a.complement().intersect(&b.complement()));
        prop_assert_eq!(a.complement().complement(), a.clone());
        prop_assert!(a.union(&a.complement()).is_unit());
        prop_assert!(a.intersect(&a.complement()).is_empty());
    }

    #[test]
    fn cylindrify_laws(a in arb_set(), b in arb_set(), d in 0u32..3) {
        let y = DimVar(d);
        let ca = a.cylindrify(y);
        prop_assert!(a.is_subset(&ca));
        prop_assert_eq!(ca.cylindrify(y), ca.clone());
        prop_assert_eq!(a.union(&b).cylindrify(y), ca.union(&b.cylindrify(y)));
        if a.is_subset(&b) {
            prop_assert!(ca.is_subset(&b.cylindrify(y)));
        }
        prop_assert!(a.co_cylindrify(y).is_subset(&a));
        prop_assert!(!ca.dim_set().contains(&y));
    }

    #[test]
    fn dim_set_matches_cylindrify(a in arb_set()) {
        for d in 0..4u32 {
            let y = DimVar(d);
            prop_assert_eq!(a.dim_set().contains(&y), a.cylindrify(y) != a);
        }
    }

    #[test]
    fn substitution_laws(a in arb_set(), b in arb_set(), d in 0u32..3) {
        let y = DimVar(d);
        let fresh = DimVar(9);
        let s = a.substitute(y, fresh).unwrap();
        prop_assert!(s.is_subset(&a.cylindrify(y)));
        if a.dim_set().contains(&y) {
            let mut expect = a.dim_set();
            expect.remove(&y);
            expect.insert(fresh);
            prop_assert_eq!(s.dim_set(), expect);
        }
        let sub = |x: &FinDimSet| x.substitute(y, fresh).unwrap();
        prop_assert_eq!(sub(&a.complement()), s.complement());
        prop_assert_eq!(sub(&a.union(&b)), s.union(&sub(&b)));
    }

    #[test]
    fn disjointify_preserves_set(a in arb_set()) {
        let d = a.disjointify();
        prop_assert_eq!(&d, &a);
        prop_assert_eq!(measure(&d), measure(&a));
        let again = d.disjointify();
        prop_assert_eq!(again.terms(), d.terms());
        let terms = d.terms();
        for (i, s) in terms.iter().enumerate() {
            for t in &terms[i + 1..] {
                prop_assert!(s.intersect(t).is_none());
            }
        }
    }
}
