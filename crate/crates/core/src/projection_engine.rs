//! Strong projections, convergence tables and continuity audits.
//!
//! The strong projection of `a` along `y` keeps the parameter points whose
//! y-section has positive measure; the strong co-projection keeps those whose
//! section has full measure. Their measures are exactly the limits of the
//! n-fold union and intersection sequences, whereas the ordinary projections
//! `C_y a` and `C^∂_y a` only agree with those limits when no section of
//! positive parameter volume is non-empty but null (resp. co-null but not
//! full).

use std::fmt;

use num_traits::{One, Zero};

use crate::discrete_core::{DiscreteBase, DiscreteSet};
use crate::measure_engine::{fiber_profile, FiberProfile, MeasureError, PowerMeasure};
use crate::rational::{fmt_exact, pow, MeasureValue, Q};
use crate::set_core::{Component, CylSet, DimVar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProjectionError {
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error("sup of the union sequence is {sup} but the projection measures {projection}")]
    ContinuityViolated { sup: Q, projection: Q },
}

/// Union of the profile regions whose section measure satisfies `keep`.
fn regions_where<C: Component>(p: &FiberProfile<C>, keep: impl Fn(&Q) -> bool) -> CylSet<C> {
    CylSet::from_terms(
        p.cells()
            .iter()
            .filter(|c| keep(&c.q))
            .filter_map(|c| c.region.clone()),
    )
}

/// Parameter points whose y-section has positive measure, as a cylinder.
pub fn strong_project<C, M>(a: &CylSet<C>, y: DimVar, m: &M) -> Result<CylSet<C>, MeasureError>
where
    C: Component,
    M: PowerMeasure<C> + ?Sized,
{
    let p = fiber_profile(a, y, m)?;
    Ok(regions_where(&p, |q| *q > Q::zero()))
}

/// Parameter points whose y-section has full measure, as a cylinder.
pub fn strong_co_project<C, M>(a: &CylSet<C>, y: DimVar, m: &M) -> Result<CylSet<C>, MeasureError>
where
    C: Component,
    M: PowerMeasure<C> + ?Sized,
{
    let p = fiber_profile(a, y, m)?;
    Ok(regions_where(&p, Q::is_one))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceRow {
    pub n: u64,
    pub union: Q,
    pub intersection: Q,
}

/// Exact n-fold union/intersection measures against their limits and the
/// ordinary projection measures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    pub sup_limit: Q,
    pub inf_limit: Q,
    /// `μ(C_y a)`; unavailable for profiles given without a set.
    pub ordinary_projection_measure: Option<Q>,
    /// `μ(C^∂_y a)`.
    pub ordinary_co_projection_measure: Option<Q>,
    /// Whether `μ(C_y a)` equals the sup of the union sequence.
    pub continuity_holds: Option<bool>,
    /// Whether `μ(C^∂_y a)` equals the inf of the intersection sequence.
    pub co_continuity_holds: Option<bool>,
    gap_weights: Vec<(Q, Q)>,
}

impl ConvergenceReport {
    pub fn from_profile<C: Component>(p: &FiberProfile<C>, n_max: u64) -> Self {
        assert!(n_max >= 1, "n_max must be at least 1");
        let rows = (1..=n_max)
            .map(|n| ConvergenceRow {
                n,
                union: p.n_fold_union(n).exact,
                intersection: p.n_fold_intersection(n).exact,
            })
            .collect();
        let (sup, inf) = p.limits();
        let gap_weights = p
            .cells()
            .iter()
            .filter(|c| c.q > Q::zero() && !c.q.is_one())
            .map(|c| {
                let other = Q::one() - &c.q;
                let m = if c.q > other { c.q.clone() } else { other };
                (c.volume.clone(), m)
            })
            .collect();
        Self {
            rows,
            sup_limit: sup.exact,
            inf_limit: inf.exact,
            ordinary_projection_measure: None,
            ordinary_co_projection_measure: None,
            continuity_holds: None,
            co_continuity_holds: None,
            gap_weights,
        }
    }

    /// `Σ_{0<q<1} vol · max(q, 1−q)ⁿ`, bounding both sequences' distance
    /// from their limits at step `n`.
    pub fn gap_bound_at(&self, n: u64) -> Q {
        self.gap_weights.iter().map(|(v, m)| v * pow(m, n)).sum()
    }

    fn with_projections(mut self, proj: Q, co_proj: Q) -> Self {
        self.continuity_holds = Some(proj == self.sup_limit);
        self.co_continuity_holds = Some(co_proj == self.inf_limit);
        self.ordinary_projection_measure = Some(proj);
        self.ordinary_co_projection_measure = Some(co_proj);
        self
    }
}

pub fn convergence_table<C, M>(
    a: &CylSet<C>,
    y: DimVar,
    n_max: u64,
    m: &M,
) -> Result<ConvergenceReport, MeasureError>
where
    C: Component,
    M: PowerMeasure<C> + ?Sized,
{
    let p = fiber_profile(a, y, m)?;
    let proj = m.measure(&a.cylindrify(y))?.exact;
    let co_proj = m.measure(&a.co_cylindrify(y))?.exact;
    Ok(ConvergenceReport::from_profile(&p, n_max).with_projections(proj, co_proj))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    HypothesisNotMet,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::HypothesisNotMet => "hypothesis-not-met",
        })
    }
}

/// A checked statement together with the exact values it was decided on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub label: String,
    pub values: Vec<(String, Q)>,
    pub holds: bool,
}

impl Evaluation {
    fn new(label: &str, values: &[(&str, &Q)], holds: bool) -> Self {
        Self {
            label: label.to_string(),
            values: values
                .iter()
                .map(|(k, v)| (k.to_string(), (*v).clone()))
                .collect(),
            holds,
        }
    }
}

impl fmt::Display for Evaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self
            .values
            .iter()
            .map(|(k, v)| format!("{k}={}", fmt_exact(v)))
            .collect();
        write!(f, "{}: {} [{}]", self.label, self.holds, vals.join(", "))
    }
}

/// Outcome of an audit. `witness` is set whenever the verdict is `Fails`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport<W> {
    pub subject: &'static str,
    pub hypothesis_evaluations: Vec<Evaluation>,
    pub conclusion_evaluations: Vec<Evaluation>,
    pub verdict: Verdict,
    pub witness: Option<W>,
    /// Intermediate sets the audit constructed, by name.
    pub derived: Vec<(String, W)>,
    pub notes: Vec<String>,
}

impl<W> AuditReport<W> {
    pub fn conclusion(&self, label: &str) -> Option<&Evaluation> {
        self.conclusion_evaluations
            .iter()
            .find(|e| e.label == label)
    }

    pub fn hypothesis(&self, label: &str) -> Option<&Evaluation> {
        self.hypothesis_evaluations
            .iter()
            .find(|e| e.label == label)
    }

    pub fn derived(&self, name: &str) -> Option<&W> {
        self.derived.iter().find(|(n, _)| n == name).map(|(_, w)| w)
    }
}

pub const CONTINUITY: &str = "mu(C_y a) = sup_n mu(U_n)";
pub const INF_PROPERTY: &str = "mu(Cd_y a) = inf_n mu(I_n)";
pub const SUP_PROPERTY: &str = CONTINUITY;
pub const LEMMA1_CONDITION: &str = "inf_n mu(I_n(b)) = 0";
pub const THM4_HYPOTHESIS: &str = "mu(C_zbar a) < 1";
pub const THM4_COMPLEMENT_HYPOTHESIS: &str = "mu(C_zbar -a) < 1";

/// Decides whether the measure is continuous for the cylindric sum of `a`
/// along `y`, i.e. whether `μ(C_y a)` equals the sup of the n-fold unions.
pub fn continuity_check<C, M>(
    a: &CylSet<C>,
    y: DimVar,
    m: &M,
) -> Result<AuditReport<CylSet<C>>, MeasureError>
where
    C: Component,
    M: PowerMeasure<C> + ?Sized,
{
    let p = fiber_profile(a, y, m)?;
    let (sup, _) = p.limits();
    let proj = m.measure(&a.cylindrify(y))?.exact;
    let mu_a = m.measure(a)?.exact;
    let holds = proj == sup.exact;
    let mut notes = Vec::new();
    if mu_a.is_one() {
        notes.push("sufficient condition mu(a) = 1 applies".to_string());
    }
    if proj.is_zero() {
        notes.push("sufficient condition mu(C_y a) = 0 applies".to_string());
    }
    Ok(AuditReport {
        subject: "continuity",
        hypothesis_evaluations: vec![
            Evaluation::new("mu(a) = 1", &[("mu(a)", &mu_a)], mu_a.is_one()),
            Evaluation::new("mu(C_y a) = 0", &[("mu(C_y a)", &proj)], proj.is_zero()),
        ],
        conclusion_evaluations: vec![Evaluation::new(
            CONTINUITY,
            &[("mu(C_y a)", &proj), ("sup", &sup.exact)],
            holds,
        )],
        verdict: if holds {
            Verdict::Holds
        } else {
            Verdict::Fails
        },
        witness: (!holds).then(|| a.clone()),
        derived: Vec::new(),
        notes,
    })
}

/// Checks that the inf property for `a` holds exactly when the
/// intersection sequence of `b = a − C^∂_y a` tends to zero. The left side
/// uses the co-cylindrification, the right side the fiber profile.
pub fn lemma1_audit<C, M>(
    a: &CylSet<C>,
    y: DimVar,
    m: &M,
) -> Result<AuditReport<CylSet<C>>, MeasureError>
where
    C: Component,
    M: PowerMeasure<C> + ?Sized,
{
    let co = a.co_cylindrify(y);
    let b = a.difference(&co).canonical();
    let inf_b = fiber_profile(&b, y, m)?.limits().1.exact;
    let condition = inf_b.is_zero();
    let lhs = m.measure(&co)?.exact;
    let inf_a = fiber_profile(a, y, m)?.limits().1.exact;
    let eq5 = lhs == inf_a;
    let consistent = condition == eq5;
    Ok(AuditReport {
        subject: "lemma1",
        hypothesis_evaluations: vec![Evaluation::new(
            LEMMA1_CONDITION,
            &[("inf(b)", &inf_b)],
            condition,
        )],
        conclusion_evaluations: vec![Evaluation::new(
            INF_PROPERTY,
            &[("mu(Cd_y a)", &lhs), ("inf", &inf_a)],
            eq5,
        )],
        verdict: if consistent {
            Verdict::Holds
        } else {
            Verdict::Fails
        },
        witness: (!consistent).then(|| a.clone()),
        derived: vec![("b".to_string(), b)],
        notes: Vec::new(),
    })
}

/// Evaluates the majorant-rectangle condition `μ(C_{z̄} a) < 1` together with
/// both candidate conclusions: the inf property and the literal sup property.
/// The verdict follows the inf property; the sup property and the
/// complement-side hypothesis are reported as evidence.
pub fn theorem4_audit<C, M>(
    a: &CylSet<C>,
    y: DimVar,
    m: &M,
) -> Result<AuditReport<CylSet<C>>, MeasureError>
where
    C: Component,
    M: PowerMeasure<C> + ?Sized,
{
    let zbar: Vec<DimVar> = a.dim_set().into_iter().filter(|d| *d != y).collect();
    let cyl_all = |s: &CylSet<C>| zbar.iter().fold(s.clone(), |acc, &z| acc.cylindrify(z));
    let majorant = m.measure(&cyl_all(a))?.exact;
    let co_majorant = m.measure(&cyl_all(&a.complement()))?.exact;
    let hyp = majorant < Q::one();
    let co_hyp = co_majorant < Q::one();

    let report = convergence_table(a, y, 1, m)?;
    let proj = report.ordinary_projection_measure.clone().unwrap();
    let co_proj = report.ordinary_co_projection_measure.clone().unwrap();
    let inf_ok = report.co_continuity_holds.unwrap();
    let sup_ok = report.continuity_holds.unwrap();

    let mut notes = vec![format!(
        "sup property reported as evidence only: {}",
        if sup_ok { "holds" } else { "fails" }
    )];
    if co_hyp {
        notes.push(format!(
            "complement-side hypothesis holds, which yields the sup property for a: {}",
            if sup_ok { "confirmed" } else { "NOT confirmed" }
        ));
    }
    let verdict = match (hyp, inf_ok) {
        (false, _) => Verdict::HypothesisNotMet,
        (true, true) => Verdict::Holds,
        (true, false) => Verdict::Fails,
    };
    Ok(AuditReport {
        subject: "theorem4",
        hypothesis_evaluations: vec![
            Evaluation::new(THM4_HYPOTHESIS, &[("mu(C_zbar a)", &majorant)], hyp),
            Evaluation::new(
                THM4_COMPLEMENT_HYPOTHESIS,
                &[("mu(C_zbar -a)", &co_majorant)],
                co_hyp,
            ),
        ],
        conclusion_evaluations: vec![
            Evaluation::new(
                INF_PROPERTY,
                &[("mu(Cd_y a)", &co_proj), ("inf", &report.inf_limit)],
                inf_ok,
            ),
            Evaluation::new(
                SUP_PROPERTY,
                &[("mu(C_y a)", &proj), ("sup", &report.sup_limit)],
                sup_ok,
            ),
        ],
        verdict,
        witness: (verdict == Verdict::Fails).then(|| a.clone()),
        derived: Vec::new(),
        notes,
    })
}

/// Measure of the countable union of all substituted copies of `a`, i.e. the
/// sup of the finite unions, checked against `ν(C_y a)`.
pub fn infinite_union_measure_discrete(
    a: &DiscreteSet,
    y: DimVar,
    base: &DiscreteBase,
) -> Result<MeasureValue, ProjectionError> {
    let sup = fiber_profile(a, y, base)?.limits().0;
    let proj = base.measure(&a.cylindrify(y))?;
    if sup != proj {
        return Err(ProjectionError::ContinuityViolated {
            sup: sup.exact,
            projection: proj.exact,
        });
    }
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrete_core::{prod, AtomSet, AtomUniverse};
    use crate::measure_engine::{lebesgue_measure, Lebesgue};
    use crate::rational::q;
    use crate::set_core::{rect, FinDimSet, OneDimSet};

    const Y: DimVar = DimVar(0);
    const Z: DimVar = DimVar(1);

    fn pts(v: &[Q]) -> OneDimSet {
        OneDimSet::points(v.iter().cloned()).unwrap()
    }

    fn iv(lo: Q, hi: Q) -> OneDimSet {
        OneDimSet::span(lo, hi, true, false)
    }

    fn e1() -> FinDimSet {
        FinDimSet::product([(Y, pts(&[q(2, 3)])), (Z, iv(q(1, 2), q(1, 1)))]).union(
            &FinDimSet::product([(Y, pts(&[q(1, 3)])), (Z, iv(q(0, 1), q(1, 2)))]),
        )
    }

    fn checkerboard() -> FinDimSet {
        rect([(Y, q(0, 1), q(1, 2)), (Z, q(0, 1), q(1, 2))])
            .unwrap()
            .union(&rect([(Y, q(1, 2), q(1, 1)), (Z, q(1, 2), q(1, 1))]).unwrap())
    }

    fn staircase() -> FinDimSet {
        rect([(Z, q(0, 1), q(1, 4))])
            .unwrap()
            .union(&rect([(Y, q(0, 1), q(1, 2)), (Z, q(1, 4), q(1, 1))]).unwrap())
    }

    #[test]
    fn strong_projection_examples() {
        assert!(strong_project(&e1(), Y, &Lebesgue).unwrap().is_empty());
        assert!(strong_project(&checkerboard(), Y, &Lebesgue)
            .unwrap()
            .is_unit());
        assert!(strong_co_project(&FinDimSet::unit(), Y, &Lebesgue)
            .unwrap()
            .is_unit());
        assert_eq!(
            strong_co_project(&staircase(), Y, &Lebesgue).unwrap(),
            rect([(Z, q(0, 1), q(1, 4))]).unwrap()
        );
        assert!(strong_co_project(&e1(), Y, &Lebesgue).unwrap().is_empty());
    }

    #[test]
    fn e1_convergence_table() {
        let r = convergence_table(&e1(), Y, 3, &Lebesgue).unwrap();
        for row in &r.rows {
            assert_eq!(row.union, q(0, 1));
            assert_eq!(row.intersection, q(0, 1));
        }
        assert_eq!(r.sup_limit, q(0, 1));
        assert_eq!(r.inf_limit, q(0, 1));
        assert_eq!(r.ordinary_projection_measure, Some(q(1, 1)));
        assert_eq!(r.continuity_holds, Some(false));
    }

    #[test]
    fn checkerboard_convergence_table() {
        let r = convergence_table(&checkerboard(), Y, 3, &Lebesgue).unwrap();
        let unions: Vec<Q> = r.rows.iter().map(|r| r.union.clone()).collect();
        let inters: Vec<Q> = r.rows.iter().map(|r| r.intersection.clone()).collect();
        assert_eq!(unions, vec![q(1, 2), q(3, 4), q(7, 8)]);
        assert_eq!(inters, vec![q(1, 2), q(1, 4), q(1, 8)]);
        assert_eq!(
            (r.sup_limit.clone(), r.inf_limit.clone()),
            (q(1, 1), q(0, 1))
        );
        assert_eq!(r.continuity_holds, Some(true));
        assert_eq!(r.gap_bound_at(3), q(1, 8));
    }

    #[test]
    fn unit_convergence_table() {
        let r = convergence_table(&FinDimSet::unit(), Y, 1, &Lebesgue).unwrap();
        assert_eq!(r.rows[0].union, q(1, 1));
        assert_eq!(r.rows[0].intersection, q(1, 1));
        assert_eq!(r.continuity_holds, Some(true));
    }

    #[test]
    fn continuity_verdicts() {
        let bad = continuity_check(&e1(), Y, &Lebesgue).unwrap();
        assert_eq!(bad.verdict, Verdict::Fails);
        assert_eq!(bad.witness, Some(e1()));
        let good = continuity_check(&checkerboard(), Y, &Lebesgue).unwrap();
        assert_eq!(good.verdict, Verdict::Holds);
        assert!(good.witness.is_none());
        let unit = continuity_check(&FinDimSet::unit(), Y, &Lebesgue).unwrap();
        assert!(unit.hypothesis("mu(a) = 1").unwrap().holds);
    }

    #[test]
    fn lemma1_examples() {
        let r = lemma1_audit(&staircase(), Y, &Lebesgue).unwrap();
        assert_eq!(
            r.derived("b").unwrap(),
            &rect([(Y, q(0, 1), q(1, 2)), (Z, q(1, 4), q(1, 1))]).unwrap()
        );
        assert!(r.hypothesis(LEMMA1_CONDITION).unwrap().holds);
        let eq5 = r.conclusion(INF_PROPERTY).unwrap();
        assert!(eq5.holds);
        assert_eq!(eq5.values[0].1, q(1, 4));
        assert_eq!(r.verdict, Verdict::Holds);

        let r = lemma1_audit(&e1(), Y, &Lebesgue).unwrap();
        assert_eq!(r.derived("b").unwrap(), &e1());
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.conclusion(INF_PROPERTY).unwrap().values[0].1, q(0, 1));
    }

    #[test]
    fn lemma1_on_punctured_fibers() {
        // Full-measure but not full sections: the inf property fails and so
        // does the condition on b.
        let punct = pts(&[q(1, 3)]).complement();
        let a = FinDimSet::product([(Y, punct), (Z, iv(q(0, 1), q(1, 2)))]);
        let r = lemma1_audit(&a, Y, &Lebesgue).unwrap();
        assert!(!r.hypothesis(LEMMA1_CONDITION).unwrap().holds);
        assert!(!r.conclusion(INF_PROPERTY).unwrap().holds);
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn theorem4_point_example() {
        let a = FinDimSet::product([(Y, pts(&[q(1, 3)])), (Z, iv(q(0, 1), q(1, 2)))]);
        let r = theorem4_audit(&a, Y, &Lebesgue).unwrap();
        let hyp = r.hypothesis(THM4_HYPOTHESIS).unwrap();
        assert!(hyp.holds);
        assert_eq!(hyp.values[0].1, q(0, 1));
        assert!(r.conclusion(INF_PROPERTY).unwrap().holds);
        let sup = r.conclusion(SUP_PROPERTY).unwrap();
        assert!(!sup.holds);
        assert_eq!(sup.values[0].1, q(1, 2));
        assert_eq!(sup.values[1].1, q(0, 1));
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn theorem4_unit_hypothesis_not_met() {
        let r = theorem4_audit(&FinDimSet::unit(), Y, &Lebesgue).unwrap();
        assert_eq!(r.verdict, Verdict::HypothesisNotMet);
    }

    #[test]
    fn theorem4_nondegenerate() {
        let a = rect([(Y, q(0, 1), q(1, 2)), (Z, q(0, 1), q(1, 2))]).unwrap();
        let r = theorem4_audit(&a, Y, &Lebesgue).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert!(r.conclusion(SUP_PROPERTY).unwrap().holds);
    }

    #[test]
    fn discrete_examples() {
        let c = AtomUniverse::Countable;
        let base = DiscreteBase::new(vec![q(1, 2), q(1, 4)], q(1, 4)).unwrap();
        let a = prod([(Y, AtomSet::finite(c, [0])), (Z, AtomSet::finite(c, [0]))]);
        let d1 = a.union(&prod([
            (Y, AtomSet::cofinite(c, [0])),
            (Z, AtomSet::cofinite(c, [0])),
        ]));
        assert_eq!(
            infinite_union_measure_discrete(&d1, Y, &base)
                .unwrap()
                .exact,
            q(1, 1)
        );
        assert_eq!(
            infinite_union_measure_discrete(&DiscreteSet::empty(), Y, &base)
                .unwrap()
                .exact,
            q(0, 1)
        );
        assert_eq!(
            infinite_union_measure_discrete(&a, Y, &base).unwrap().exact,
            q(1, 2)
        );
        for s in [&a, &d1] {
            assert_eq!(strong_project(s, Y, &base).unwrap(), s.cylindrify(Y));
            assert_eq!(
                continuity_check(s, Y, &base).unwrap().verdict,
                Verdict::Holds
            );
        }
    }

    #[test]
    fn strong_measures_match_limits() {
        for a in [e1(), checkerboard(), staircase()] {
            let p = fiber_profile(&a, Y, &Lebesgue).unwrap();
            let (sup, inf) = p.limits();
            assert_eq!(
                lebesgue_measure(&strong_project(&a, Y, &Lebesgue).unwrap()),
                sup
            );
            assert_eq!(
                lebesgue_measure(&strong_co_project(&a, Y, &Lebesgue).unwrap()),
                inf
            );
        }
    }
}
