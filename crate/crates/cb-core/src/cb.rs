//! Cayley-Bacharach propagation on complete intersections in `P^n`, with
//! multiplier-ideal corrections for excess vanishing, and the Tan-Viehweg
//! cokernel inequality `v2 <= v1`.
//!
//! A [`CIScenario`] packages `n` hypersurfaces of degrees `d_1..d_n` whose
//! common zero set is a finite transverse point set `Z`, possibly together
//! with a parametrized curve or surface `W` along which the sections vanish
//! in excess dimension.  The checks all reduce to comparisons of `h0` values
//! of linear systems from [`crate::vanishing`].

use crate::error::{Error, Result};
use crate::poly::{binomial, projectively_equal, Form, Parametrization};
use crate::scalar::{Field, Scalar};
use crate::vanishing::{basis_h0, h0, Condition};

/// A parametrized positive-dimensional component of the zero scheme.
///
/// `eq_degree` is the degree of the hypersurfaces cutting the locus out
/// scheme-theoretically (2 for the twisted cubic); it feeds the Li-type
/// degree count and is unrelated to the degree of the component forms.
#[derive(Clone, Debug)]
pub struct ExcessLocus {
    param: Parametrization,
    eq_degree: usize,
}

impl ExcessLocus {
    pub fn new(param: Parametrization, eq_degree: usize) -> Result<ExcessLocus> {
        if eq_degree == 0 {
            return Err(Error::domain("equation degree must be positive"));
        }
        Ok(ExcessLocus { param, eq_degree })
    }

    pub fn param(&self) -> &Parametrization {
        &self.param
    }

    pub fn dim(&self) -> usize {
        self.param.source_dim()
    }

    pub fn eq_degree(&self) -> usize {
        self.eq_degree
    }
}

/// `n` sections of `O(d_1) + ... + O(d_n)` on `P^n` vanishing transversely on
/// a finite rational point set `Z`, with an optional excess locus `W`.
///
/// Construction validates every hypothesis the theorems consume: sections
/// have the declared degrees, vanish at every point of `Z` and along `W`, the
/// Jacobian has full rank `n` at each point (so `Z` is reduced and
/// transverse), the points are pairwise distinct, and no point lies on `W`
/// (exactly checkable when `W` is a curve).
#[derive(Clone, Debug)]
pub struct CIScenario {
    name: String,
    field: Field,
    degrees: Vec<usize>,
    sections: Vec<Form>,
    excess: Option<ExcessLocus>,
    points: Vec<Vec<Scalar>>,
}

impl CIScenario {
    pub fn new(
        name: impl Into<String>,
        field: Field,
        degrees: Vec<usize>,
        sections: Vec<Form>,
        excess: Option<ExcessLocus>,
        points: Vec<Vec<Scalar>>,
    ) -> Result<CIScenario> {
        let sc = CIScenario { name: name.into(), field, degrees, sections, excess, points };
        sc.validate()?;
        Ok(sc)
    }

    fn validate(&self) -> Result<()> {
        let n = self.degrees.len();
        if n == 0 {
            return Err(Error::scenario("no section degrees given"));
        }
        if self.sections.len() != n {
            return Err(Error::scenario(format!(
                "{} sections for {n} degrees",
                self.sections.len()
            )));
        }
        for (i, (f, &d)) in self.sections.iter().zip(&self.degrees).enumerate() {
            if d == 0 {
                return Err(Error::scenario(format!("degree of section {i} must be positive")));
            }
            if f.is_zero() {
                return Err(Error::scenario(format!("section {i} is the zero form")));
            }
            if f.degree() != d {
                return Err(Error::scenario(format!(
                    "section {i} has degree {}, declared {d}",
                    f.degree()
                )));
            }
            if f.nvars() != n + 1 {
                return Err(Error::scenario(format!(
                    "section {i} lives in {} variables, ambient space is P^{n}",
                    f.nvars()
                )));
            }
            if f.field() != self.field {
                return Err(Error::scenario(format!(
                    "section {i} over {}, scenario over {}",
                    f.field(),
                    self.field
                )));
            }
        }
        if self.points.is_empty() {
            return Err(Error::scenario("the finite point set Z must be nonempty"));
        }
        for (j, z) in self.points.iter().enumerate() {
            if z.len() != n + 1 {
                return Err(Error::scenario(format!(
                    "point {j} has {} coordinates, expected {}",
                    z.len(),
                    n + 1
                )));
            }
            if z.iter().any(|x| x.field() != self.field) {
                return Err(Error::scenario(format!("point {j} not over {}", self.field)));
            }
            if z.iter().all(|x| x.is_zero()) {
                return Err(Error::scenario(format!("point {j} is the zero vector")));
            }
        }
        for i in 0..self.points.len() {
            for j in i + 1..self.points.len() {
                if projectively_equal(&self.points[i], &self.points[j]) {
                    return Err(Error::scenario(format!("points {i} and {j} coincide")));
                }
            }
        }
        for (j, z) in self.points.iter().enumerate() {
            for (i, f) in self.sections.iter().enumerate() {
                if !f.evaluate(z)?.is_zero() {
                    return Err(Error::scenario(format!(
                        "section {i} does not vanish at point {j}"
                    )));
                }
            }
            // Transversality: Z must be a simple zero set of the section
            // vector, i.e. the n gradients are independent at each point.
            let jac = self.jacobian_at(z)?;
            if jac.rank() != n {
                return Err(Error::scenario(format!(
                    "Jacobian drops rank at point {j}: the zero set is not transverse there"
                )));
            }
        }
        if let Some(ex) = &self.excess {
            let w = ex.param();
            if w.field() != self.field {
                return Err(Error::scenario("excess locus over a different field"));
            }
            if w.target_dim() != n {
                return Err(Error::scenario(format!(
                    "excess locus maps to P^{}, scenario lives on P^{n}",
                    w.target_dim()
                )));
            }
            if ex.dim() >= n {
                return Err(Error::scenario("excess locus must have dimension below n"));
            }
            for (i, f) in self.sections.iter().enumerate() {
                if !w.pullback(f)?.is_zero() {
                    return Err(Error::scenario(format!(
                        "section {i} does not vanish along the excess locus"
                    )));
                }
            }
            if ex.dim() == 1 {
                for (j, z) in self.points.iter().enumerate() {
                    if w.contains_point(z)? {
                        return Err(Error::scenario(format!(
                            "point {j} lies on the excess curve"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn jacobian_at(&self, z: &[Scalar]) -> Result<crate::Matrix> {
        let n = self.n();
        let rows = self
            .sections
            .iter()
            .map(|f| {
                (0..n + 1)
                    .map(|v| {
                        let d = f.partial(v);
                        if d.is_zero() {
                            Ok(self.field.zero())
                        } else {
                            d.evaluate(z)
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        crate::Matrix::from_rows(self.field, rows, n + 1)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Ambient dimension; also the number of sections.
    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn sections(&self) -> &[Form] {
        &self.sections
    }

    pub fn excess(&self) -> Option<&ExcessLocus> {
        self.excess.as_ref()
    }

    pub fn points(&self) -> &[Vec<Scalar>] {
        &self.points
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    /// Degree of `K + det E` twisted down by `a`: `sum d_i - (n+1) - a`.
    pub fn adjoint_degree(&self, a: i64) -> i64 {
        self.degrees.iter().sum::<usize>() as i64 - (self.n() as i64 + 1) - a
    }

    /// The multiplier-ideal correction for this scenario: order-`(w+1)` jets
    /// along the excess locus (the exponent of `J(I_W^n)`).  Empty when there
    /// is no excess component.
    pub fn multiplier_conditions(&self) -> Vec<Condition> {
        match &self.excess {
            Some(ex) => {
                let order = mi_exponent(self.n(), ex.dim(), self.n());
                vec![Condition::subvariety_jet(ex.param().clone(), order)]
            }
            None => Vec::new(),
        }
    }

    /// Point-vanishing conditions for the points selected by `indices`.
    pub fn point_conditions(&self, indices: &[usize]) -> Vec<Condition> {
        indices.iter().map(|&i| Condition::point(self.points[i].clone())).collect()
    }
}

/// Exponent `d` with `J(I_W^m) = I_W^d` for smooth `W` of dimension `w` in an
/// `n`-fold: `max(0, w + 1 + m - n)`.
pub fn mi_exponent(n: usize, w: usize, m: usize) -> usize {
    assert!(w < n, "excess dimension must be below the ambient dimension");
    assert!(m >= 1, "ideal power must be positive");
    (w as i64 + 1 + m as i64 - n as i64).max(0) as usize
}

/// Degree bound in the Li-type statement: forms of degree
/// `sum d_i - (n+1) - w*e` vanishing (to order one) on `W` propagate across
/// `Z`.  May be negative; the caller decides vacuity.
pub fn li_degree(degrees: &[usize], n: usize, w: usize, e: usize) -> i64 {
    assert!(degrees.iter().all(|&d| d >= 1), "section degrees must be positive");
    assert!(w == 0 || e >= 1, "equation degree must be positive when W is present");
    degrees.iter().sum::<usize>() as i64 - (n as i64 + 1) - (w * e) as i64
}

/// Outcome of one propagation check: does every degree-`degree` form
/// satisfying `extra` and vanishing on `Z` minus one point also vanish at the
/// omitted point?
#[derive(Clone, Debug)]
pub struct PropagationReport {
    pub degree: i64,
    pub omit: usize,
    pub holds: bool,
    /// True when no form satisfies the all-but-one conditions at all, so the
    /// statement holds with nothing to witness.
    pub vacuous: bool,
    /// Dimension with the omitted point left out / added back.
    pub h0_without: usize,
    pub h0_with: usize,
    /// When propagation fails: a form through all conditions and `Z` minus
    /// the omitted point that is nonzero there.
    pub witness: Option<Form>,
}

/// Full propagation data for omitting `points[omit]`.
pub fn cb_propagation(
    sc: &CIScenario,
    extra: &[Condition],
    degree: i64,
    omit: usize,
) -> Result<PropagationReport> {
    if omit >= sc.num_points() {
        return Err(Error::dim(format!(
            "omitted index {omit} out of range for {} points",
            sc.num_points()
        )));
    }
    if degree < 0 {
        return Ok(PropagationReport {
            degree,
            omit,
            holds: true,
            vacuous: true,
            h0_without: 0,
            h0_with: 0,
            witness: None,
        });
    }
    let mut conds: Vec<Condition> = extra.to_vec();
    for (j, z) in sc.points().iter().enumerate() {
        if j != omit {
            conds.push(Condition::point(z.clone()));
        }
    }
    let h0_without = h0(sc.field(), sc.n(), degree, &conds)?;
    let mut with = conds.clone();
    with.push(Condition::point(sc.points()[omit].clone()));
    let h0_with = h0(sc.field(), sc.n(), degree, &with)?;
    let holds = h0_without == h0_with;
    let witness = if holds {
        None
    } else {
        let z = &sc.points()[omit];
        basis_h0(sc.field(), sc.n(), degree, &conds)?
            .into_iter()
            .find(|f| !f.evaluate(z).map(|v| v.is_zero()).unwrap_or(true))
    };
    Ok(PropagationReport {
        degree,
        omit,
        holds,
        vacuous: h0_without == 0,
        h0_without,
        h0_with,
        witness,
    })
}

/// True iff vanishing propagates to the omitted point.
pub fn cb_propagates(
    sc: &CIScenario,
    extra: &[Condition],
    degree: i64,
    omit: usize,
) -> Result<bool> {
    Ok(cb_propagation(sc, extra, degree, omit)?.holds)
}

/// A partition of the point indices into two nonempty halves.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Split {
    z1: Vec<usize>,
    z2: Vec<usize>,
}

impl Split {
    /// `z1` picks the first part; the second is the complement in
    /// `0..num_points`.  Both parts must be nonempty.
    pub fn new(num_points: usize, mut z1: Vec<usize>) -> Result<Split> {
        z1.sort_unstable();
        z1.dedup();
        if z1.iter().any(|&i| i >= num_points) {
            return Err(Error::dim("split index out of range"));
        }
        let z2: Vec<usize> = (0..num_points).filter(|i| !z1.contains(i)).collect();
        if z1.is_empty() || z2.is_empty() {
            return Err(Error::domain("both parts of a split must be nonempty"));
        }
        Ok(Split { z1, z2 })
    }

    pub fn z1(&self) -> &[usize] {
        &self.z1
    }

    pub fn z2(&self) -> &[usize] {
        &self.z2
    }

    /// All `2^num_points - 2` proper splits, ordered by the bitmask of the
    /// first part.
    pub fn enumerate_proper(num_points: usize) -> Vec<Split> {
        assert!(num_points >= 2, "need at least two points to split");
        assert!(num_points < 20, "split enumeration is exponential");
        let mut out = Vec::new();
        for mask in 1..(1u32 << num_points) - 1 {
            let z1: Vec<usize> =
                (0..num_points).filter(|i| mask & (1 << i) != 0).collect();
            out.push(Split::new(num_points, z1).expect("proper by construction"));
        }
        out
    }
}

/// Failure of `Z1` to impose independent conditions on degree-`a` forms:
/// `#Z1` minus the rank of the evaluation map.  For `a < 0` there are no
/// forms at all and `v1 = #Z1`.
pub fn v1(field: Field, n: usize, a: i64, z1: &[Vec<Scalar>]) -> Result<usize> {
    if z1.is_empty() {
        return Err(Error::domain("v1 of an empty point set"));
    }
    if a < 0 {
        return Ok(z1.len());
    }
    let conds: Vec<Condition> = z1.iter().map(|z| Condition::point(z.clone())).collect();
    let full = binomial(a as usize + n, n);
    let rank = full - h0(field, n, a, &conds)?;
    Ok(z1.len() - rank)
}

/// A count together with a marker for statements that hold with no content.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct V2 {
    pub value: usize,
    /// Set when the target degree is negative: both spaces are zero.
    pub vacuous: bool,
}

/// Sections of degree `sum d_i - (n+1) - a` through `Z2` (and the multiplier
/// jets, when requested and present) that do not vanish on all of `Z`:
/// the cokernel dimension `h0(Z2 conditions) - h0(all-Z conditions)`.
pub fn v2(sc: &CIScenario, a: i64, split: &Split, use_multiplier: bool) -> Result<V2> {
    check_split(sc, split)?;
    let degree = sc.adjoint_degree(a);
    if degree < 0 {
        return Ok(V2 { value: 0, vacuous: true });
    }
    let base = if use_multiplier { sc.multiplier_conditions() } else { Vec::new() };
    let mut z2_conds = base.clone();
    z2_conds.extend(sc.point_conditions(split.z2()));
    let big = h0(sc.field(), sc.n(), degree, &z2_conds)?;
    let mut all_conds = base;
    all_conds.extend(sc.point_conditions(split.z1()));
    all_conds.extend(sc.point_conditions(split.z2()));
    let small = h0(sc.field(), sc.n(), degree, &all_conds)?;
    debug_assert!(big >= small);
    Ok(V2 { value: big - small, vacuous: false })
}

fn check_split(sc: &CIScenario, split: &Split) -> Result<()> {
    let total = split.z1().len() + split.z2().len();
    if total != sc.num_points()
        || split.z1().iter().chain(split.z2()).any(|&i| i >= sc.num_points())
    {
        return Err(Error::dim("split does not partition the scenario's points"));
    }
    Ok(())
}

/// One Tan-Viehweg comparison: `v2 <= v1` for a split and twist.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TVReport {
    pub a: i64,
    pub z1: Vec<usize>,
    pub z2: Vec<usize>,
    pub v1: usize,
    pub v2: usize,
    pub vacuous: bool,
    pub pass: bool,
}

pub fn tv_check(sc: &CIScenario, a: i64, split: &Split, use_multiplier: bool) -> Result<TVReport> {
    check_split(sc, split)?;
    let z1_points: Vec<Vec<Scalar>> =
        split.z1().iter().map(|&i| sc.points()[i].clone()).collect();
    let v1 = v1(sc.field(), sc.n(), a, &z1_points)?;
    let v2 = v2(sc, a, split, use_multiplier)?;
    Ok(TVReport {
        a,
        z1: split.z1().to_vec(),
        z2: split.z2().to_vec(),
        v1,
        v2: v2.value,
        vacuous: v2.vacuous,
        pass: v2.value <= v1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Scalar {
        Field::Q.from_i64(v)
    }

    fn qpt(coords: &[i64]) -> Vec<Scalar> {
        coords.iter().map(|&v| q(v)).collect()
    }

    /// 2x2 grid: f1 = x0(x0 - x2), f2 = x1(x1 - x2), Z = 4 points.
    fn small_grid() -> CIScenario {
        let x0 = Form::monomial(3, vec![1, 0, 0], q(1)).unwrap();
        let x1 = Form::monomial(3, vec![0, 1, 0], q(1)).unwrap();
        let x2 = Form::monomial(3, vec![0, 0, 1], q(1)).unwrap();
        let f1 = x0.mul(&x0.sub(&x2).unwrap()).unwrap();
        let f2 = x1.mul(&x1.sub(&x2).unwrap()).unwrap();
        CIScenario::new(
            "2x2 grid",
            Field::Q,
            vec![2, 2],
            vec![f1, f2],
            None,
            vec![qpt(&[0, 0, 1]), qpt(&[0, 1, 1]), qpt(&[1, 0, 1]), qpt(&[1, 1, 1])],
        )
        .unwrap()
    }

    #[test]
    fn multiplier_exponent_formula() {
        assert_eq!(mi_exponent(3, 1, 3), 2);
        assert_eq!(mi_exponent(3, 1, 1), 0);
        assert_eq!(mi_exponent(2, 0, 2), 1);
        for n in 1..=10 {
            for w in 0..n {
                assert_eq!(mi_exponent(n, w, n), w + 1);
            }
        }
    }

    #[test]
    fn li_degree_examples() {
        assert_eq!(li_degree(&[2, 2, 5], 3, 1, 2), 3);
        assert_eq!(li_degree(&[2, 3], 2, 0, 1), 2);
        assert_eq!(li_degree(&[2, 2, 3], 3, 1, 2), 1);
        assert_eq!(li_degree(&[1, 1], 2, 0, 1), -1);
    }

    #[test]
    fn grid_propagation_is_vacuous_at_degree_one() {
        // Degree d1 + d2 - 3 = 1 and no three of the four points collinear:
        // no line through three of them exists, so the statement is vacuous.
        let sc = small_grid();
        for omit in 0..4 {
            let rep = cb_propagation(&sc, &[], 1, omit).unwrap();
            assert!(rep.holds);
            assert!(rep.vacuous);
            assert_eq!(rep.h0_without, 0);
        }
    }

    #[test]
    fn negative_degree_propagation_is_vacuous() {
        let sc = small_grid();
        let rep = cb_propagation(&sc, &[], -1, 0).unwrap();
        assert!(rep.holds && rep.vacuous);
    }

    #[test]
    fn propagation_fails_with_explicit_witness_when_misapplied() {
        // Degree 2 conics through 3 of the 4 grid points do not all pass
        // through the fourth (degree 2 > d1 + d2 - 3), so the check reports a
        // witness conic.
        let sc = small_grid();
        let rep = cb_propagation(&sc, &[], 2, 0).unwrap();
        assert!(!rep.holds);
        let w = rep.witness.expect("witness form");
        assert!(!w.evaluate(&sc.points()[0]).unwrap().is_zero());
        for j in 1..4 {
            assert!(w.evaluate(&sc.points()[j]).unwrap().is_zero());
        }
    }

    #[test]
    fn v1_examples() {
        let f = Field::Q;
        assert_eq!(v1(f, 2, 0, &[qpt(&[1, 0, 0])]).unwrap(), 0);
        assert_eq!(v1(f, 2, 0, &[qpt(&[1, 0, 0]), qpt(&[0, 1, 0])]).unwrap(), 1);
        // Three collinear points impose only two conditions on lines.
        let collinear = vec![qpt(&[1, 0, 0]), qpt(&[0, 1, 0]), qpt(&[1, 1, 0])];
        assert_eq!(v1(f, 2, 1, &collinear).unwrap(), 1);
        // Negative twist: no sections at all.
        assert_eq!(v1(f, 2, -1, &collinear).unwrap(), 3);
    }

    #[test]
    fn split_validation() {
        assert!(Split::new(4, vec![0, 1, 2, 3]).is_err());
        assert!(Split::new(4, vec![]).is_err());
        assert!(Split::new(4, vec![7]).is_err());
        let s = Split::new(4, vec![2, 0]).unwrap();
        assert_eq!(s.z1(), &[0, 2]);
        assert_eq!(s.z2(), &[1, 3]);
        assert_eq!(Split::enumerate_proper(4).len(), 14);
    }

    #[test]
    fn tv_holds_on_the_small_grid() {
        let sc = small_grid();
        for split in Split::enumerate_proper(4) {
            for a in 0..3 {
                let rep = tv_check(&sc, a, &split, false).unwrap();
                assert!(rep.pass, "v2 = {} > v1 = {} at a = {a}", rep.v2, rep.v1);
            }
        }
    }

    #[test]
    fn v2_vacuous_below_degree_zero() {
        let sc = small_grid();
        let split = Split::new(4, vec![0]).unwrap();
        // adjoint degree = 4 - 3 - a, negative for a >= 2
        let r = v2(&sc, 5, &split, false).unwrap();
        assert_eq!(r.value, 0);
        assert!(r.vacuous);
        let rep = tv_check(&sc, 5, &split, false).unwrap();
        assert!(rep.vacuous && rep.pass);
    }

    #[test]
    fn scenario_validation_catches_bad_data() {
        let x0 = Form::monomial(3, vec![1, 0, 0], q(1)).unwrap();
        let x1 = Form::monomial(3, vec![0, 1, 0], q(1)).unwrap();
        // Section not vanishing at the point.
        assert!(CIScenario::new(
            "bad",
            Field::Q,
            vec![1, 1],
            vec![x0.clone(), x1.clone()],
            None,
            vec![qpt(&[1, 1, 1])],
        )
        .is_err());
        // Duplicate points (projectively equal representatives).
        assert!(CIScenario::new(
            "dup",
            Field::Q,
            vec![1, 1],
            vec![x0.clone(), x1.clone()],
            None,
            vec![qpt(&[0, 0, 1]), qpt(&[0, 0, 2])],
        )
        .is_err());
        // Degree mismatch.
        assert!(CIScenario::new(
            "deg",
            Field::Q,
            vec![2, 1],
            vec![x0, x1],
            None,
            vec![qpt(&[0, 0, 1])],
        )
        .is_err());
    }

    #[test]
    fn tangential_intersection_is_rejected() {
        // f1 = x0^2 - x1x2 (smooth conic), f2 = x1 (its tangent at (0,0,1)):
        // the gradients are dependent there.
        let f1 = Form::from_terms(
            3,
            2,
            Field::Q,
            [(vec![2, 0, 0], q(1)), (vec![0, 1, 1], q(-1))],
        )
        .unwrap();
        let f2 = Form::monomial(3, vec![0, 1, 0], q(1)).unwrap();
        let err = CIScenario::new(
            "tangent",
            Field::Q,
            vec![2, 1],
            vec![f1, f2],
            None,
            vec![qpt(&[0, 0, 1])],
        );
        assert!(err.is_err());
    }
}
