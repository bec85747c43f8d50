//! Cayley-Bacharach for determinantal loci: points where a matrix of forms
//! drops rank.
//!
//! A [`FormMatrix`] is an `(n+e) x (e+1)` matrix `U` whose row `i` consists
//! of forms of one degree `a_i` on `P^n`.  At a point `z` of the expected
//! degeneracy locus, `U(z)` has rank exactly `e` and its kernel is a single
//! point `phi(z)` of `P^e`.  The classifying map `phi` replaces the section
//! count of the complete-intersection case: `c1` measures how far the
//! `phi`-images of a subset `Z1` fail to impose independent conditions on
//! degree `n-1` forms on `P^e`, and `c2` counts forms of degree
//! `sum a_i - (n+1)` through the complementary points that miss `Z1`.  The
//! inequality `c2 <= c1` is the determinantal Cayley-Bacharach statement.

use crate::cb::Split;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::poly::{monomial_basis, projectively_equal, Form};
use crate::scalar::{Field, Scalar};
use crate::vanishing::{h0, Condition};

/// Matrix of forms with constant degree along each row.
#[derive(Clone, Debug)]
pub struct FormMatrix {
    n: usize,
    row_degrees: Vec<usize>,
    entries: Vec<Vec<Form>>,
    field: Field,
}

impl FormMatrix {
    /// Shape contract: `row_degrees.len() = n + e` rows and `e + 1` columns
    /// for some `e >= 0`, entries of row `i` homogeneous of degree
    /// `row_degrees[i]` in `n + 1` variables.
    pub fn new(n: usize, row_degrees: Vec<usize>, entries: Vec<Vec<Form>>) -> Result<FormMatrix> {
        if n == 0 {
            return Err(Error::domain("ambient dimension must be positive"));
        }
        let rows = row_degrees.len();
        if rows == 0 || entries.len() != rows {
            return Err(Error::dim(format!(
                "{} entry rows for {rows} row degrees",
                entries.len()
            )));
        }
        let cols = entries[0].len();
        if cols == 0 || rows != n + cols - 1 {
            return Err(Error::dim(format!(
                "a degeneracy matrix on P^{n} with {cols} columns needs {} rows, got {rows}",
                n + cols.max(1) - 1
            )));
        }
        let field = entries[0][0].field();
        for (i, row) in entries.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::dim(format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            if row_degrees[i] == 0 {
                return Err(Error::domain("row degrees must be positive"));
            }
            for (j, f) in row.iter().enumerate() {
                if f.nvars() != n + 1 {
                    return Err(Error::dim(format!(
                        "entry ({i},{j}) has {} variables, expected {}",
                        f.nvars(),
                        n + 1
                    )));
                }
                if f.degree() != row_degrees[i] {
                    return Err(Error::dim(format!(
                        "entry ({i},{j}) has degree {}, row degree is {}",
                        f.degree(),
                        row_degrees[i]
                    )));
                }
                if f.field() != field {
                    return Err(Error::field_mismatch(format!(
                        "entry ({i},{j}) over {}, matrix over {field}",
                        f.field()
                    )));
                }
            }
        }
        Ok(FormMatrix { n, row_degrees, entries, field })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Kernel dimension parameter: the expected rank at degeneracy points.
    pub fn e(&self) -> usize {
        self.entries[0].len() - 1
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn row_degrees(&self) -> &[usize] {
        &self.row_degrees
    }

    pub fn entries(&self) -> &[Vec<Form>] {
        &self.entries
    }

    pub fn eval(&self, z: &[Scalar]) -> Result<Matrix> {
        let rows = self
            .entries
            .iter()
            .map(|row| row.iter().map(|f| f.evaluate(z)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(self.field, rows, self.e() + 1)
    }
}

/// True iff `U(z)` has rank exactly `e`, so the kernel is one projective
/// point.
pub fn rank_drop_check(u: &FormMatrix, z: &[Scalar]) -> Result<bool> {
    Ok(u.eval(z)?.rank() == u.e())
}

/// The kernel point of `U(z)` in `P^e`, scaled so its first nonzero
/// coordinate is 1.  Errors unless the kernel is exactly one-dimensional.
pub fn phi(u: &FormMatrix, z: &[Scalar]) -> Result<Vec<Scalar>> {
    let kernel = u.eval(z)?.kernel_basis();
    if kernel.len() != 1 {
        return Err(Error::domain(format!(
            "kernel at the point is {}-dimensional, expected 1",
            kernel.len()
        )));
    }
    let mut v = kernel.into_iter().next().expect("checked length");
    let lead = v
        .iter()
        .find(|x| !x.is_zero())
        .expect("kernel vectors are nonzero")
        .clone();
    let inv = lead.inv().expect("leading coordinate is nonzero");
    for x in v.iter_mut() {
        *x = &*x * &inv;
    }
    Ok(v)
}

/// Evaluation matrix of the degree-`k` monomials on `P^e` at the kernel
/// points of the given `z`'s: one row per point.
pub fn rho_matrix(u: &FormMatrix, points: &[Vec<Scalar>], k: usize) -> Result<Matrix> {
    let basis = monomial_basis(u.e() + 1, k);
    let rows = points
        .iter()
        .map(|z| {
            let p = phi(u, z)?;
            Ok(basis.iter().map(|m| m.evaluate(&p, u.field())).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(u.field, rows, basis.len())
}

/// Failure of the kernel points of `Z1` to impose independent conditions on
/// degree `n-1` forms on `P^e`.
pub fn c1(u: &FormMatrix, z1: &[Vec<Scalar>]) -> Result<usize> {
    if z1.is_empty() {
        return Err(Error::domain("c1 of an empty point set"));
    }
    Ok(z1.len() - rho_matrix(u, z1, u.n() - 1)?.rank())
}

/// `c2` value with a vacuity marker for negative target degree.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct C2 {
    pub value: usize,
    pub vacuous: bool,
}

/// Forms of degree `sum a_i - (n+1)` through `Z2 = Z minus Z1` that do not
/// vanish on all of `Z`, as a cokernel dimension.
pub fn c2(
    field: Field,
    n: usize,
    row_degrees: &[usize],
    z_all: &[Vec<Scalar>],
    z2: &[Vec<Scalar>],
) -> Result<C2> {
    for (j, z) in z2.iter().enumerate() {
        if !z_all.iter().any(|w| projectively_equal(w, z)) {
            return Err(Error::domain(format!("Z2 point {j} does not appear in Z")));
        }
    }
    let degree = row_degrees.iter().sum::<usize>() as i64 - (n as i64 + 1);
    if degree < 0 {
        return Ok(C2 { value: 0, vacuous: true });
    }
    let z2_conds: Vec<Condition> = z2.iter().map(|z| Condition::point(z.clone())).collect();
    let all_conds: Vec<Condition> = z_all.iter().map(|z| Condition::point(z.clone())).collect();
    let big = h0(field, n, degree, &z2_conds)?;
    let small = h0(field, n, degree, &all_conds)?;
    debug_assert!(big >= small);
    Ok(C2 { value: big - small, vacuous: false })
}

/// A degeneracy matrix with a finite marked subset of its rank-`e` locus and
/// a distinguished split of that subset.
#[derive(Clone, Debug)]
pub struct DetScenario {
    name: String,
    matrix: FormMatrix,
    points: Vec<Vec<Scalar>>,
    /// A point excluded from `Z` (the extra intersection point in the
    /// classical constructions); kept for validation and reporting only.
    origin: Option<Vec<Scalar>>,
    split: Split,
}

impl DetScenario {
    pub fn new(
        name: impl Into<String>,
        matrix: FormMatrix,
        points: Vec<Vec<Scalar>>,
        origin: Option<Vec<Scalar>>,
        split: Split,
    ) -> Result<DetScenario> {
        let n = matrix.n();
        if points.is_empty() {
            return Err(Error::scenario("the marked point set must be nonempty"));
        }
        for (j, z) in points.iter().enumerate() {
            if z.len() != n + 1 || z.iter().all(|x| x.is_zero()) {
                return Err(Error::scenario(format!("point {j} is not a point of P^{n}")));
            }
            if z.iter().any(|x| x.field() != matrix.field()) {
                return Err(Error::scenario(format!("point {j} over the wrong field")));
            }
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if projectively_equal(&points[i], &points[j]) {
                    return Err(Error::scenario(format!("points {i} and {j} coincide")));
                }
            }
        }
        if let Some(o) = &origin {
            if points.iter().any(|z| projectively_equal(z, o)) {
                return Err(Error::scenario("the excluded point appears in Z"));
            }
        }
        for (j, z) in points.iter().enumerate() {
            if !rank_drop_check(&matrix, z)? {
                return Err(Error::scenario(format!(
                    "the matrix does not drop rank at point {j}"
                )));
            }
        }
        if split.z1().len() + split.z2().len() != points.len()
            || split.z1().iter().chain(split.z2()).any(|&i| i >= points.len())
        {
            return Err(Error::scenario("split does not partition the marked points"));
        }
        Ok(DetScenario { name: name.into(), matrix, points, origin, split })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn matrix(&self) -> &FormMatrix {
        &self.matrix
    }

    pub fn points(&self) -> &[Vec<Scalar>] {
        &self.points
    }

    pub fn origin(&self) -> Option<&Vec<Scalar>> {
        self.origin.as_ref()
    }

    pub fn split(&self) -> &Split {
        &self.split
    }

    fn points_of(&self, indices: &[usize]) -> Vec<Vec<Scalar>> {
        indices.iter().map(|&i| self.points[i].clone()).collect()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DetReport {
    pub z1: Vec<usize>,
    pub z2: Vec<usize>,
    pub c1: usize,
    pub c2: usize,
    pub vacuous: bool,
    pub pass: bool,
}

/// The determinantal comparison `c2 <= c1` for the scenario's split.
pub fn det_cb_check(sc: &DetScenario) -> Result<DetReport> {
    det_cb_check_split(sc, sc.split())
}

/// Same comparison for an arbitrary split of the marked points.
pub fn det_cb_check_split(sc: &DetScenario, split: &Split) -> Result<DetReport> {
    if split.z1().len() + split.z2().len() != sc.points().len()
        || split.z1().iter().chain(split.z2()).any(|&i| i >= sc.points().len())
    {
        return Err(Error::dim("split does not partition the scenario's points"));
    }
    let z1_points = sc.points_of(split.z1());
    let z2_points = sc.points_of(split.z2());
    let c1 = c1(sc.matrix(), &z1_points)?;
    let c2 = c2(
        sc.matrix().field(),
        sc.matrix().n(),
        sc.matrix().row_degrees(),
        sc.points(),
        &z2_points,
    )?;
    Ok(DetReport {
        z1: split.z1().to_vec(),
        z2: split.z2().to_vec(),
        c1,
        c2: c2.value,
        vacuous: c2.vacuous,
        pass: c2.value <= c1,
    })
}

/// Write `f = a * l1 + b * l2` for linear forms `l1, l2` with a common zero
/// the plane curve `f` passes through.  On `P^2` the membership is
/// prechecked: it holds exactly when `f` vanishes at the intersection point
/// of the two lines.  Returns the canonical solution of the linear system.
pub fn decompose_through_point(f: &Form, l1: &Form, l2: &Form) -> Result<(Form, Form)> {
    let nvars = f.nvars();
    if l1.nvars() != nvars || l2.nvars() != nvars {
        return Err(Error::dim("forms live in different variable counts"));
    }
    if l1.degree() != 1 || l2.degree() != 1 {
        return Err(Error::domain("divisor forms must be linear"));
    }
    if f.degree() == 0 || f.is_zero() {
        return Err(Error::domain("nothing to decompose"));
    }
    let field = f.field();
    if nvars == 3 {
        let a = l1.coeff_vector();
        let b = l2.coeff_vector();
        // Intersection point of the two lines as a cross product.
        let o = vec![
            &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
            &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
            &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
        ];
        if o.iter().all(|x| x.is_zero()) {
            return Err(Error::domain("the two lines coincide"));
        }
        if !f.evaluate(&o)?.is_zero() {
            return Err(Error::domain(
                "the form does not pass through the intersection of the lines",
            ));
        }
    }
    let d = f.degree();
    let target_dim = monomial_basis(nvars, d).len();
    let half = monomial_basis(nvars, d - 1);
    let mut columns = Vec::with_capacity(2 * half.len());
    for l in [l1, l2] {
        for m in &half {
            let col = Form::monomial(nvars, m.exps().to_vec(), field.one())?.mul(l)?;
            columns.push(col.coeff_vector());
        }
    }
    let mat = Matrix::from_columns(field, &columns, target_dim)?;
    let sol = mat
        .solve(&f.coeff_vector())?
        .ok_or_else(|| Error::domain("the form is not in the ideal of the two lines"))?;
    let a_form = Form::from_coeff_vector(nvars, d - 1, field, &sol[..half.len()])?;
    let b_form = Form::from_coeff_vector(nvars, d - 1, field, &sol[half.len()..])?;
    debug_assert!({
        let back = a_form.mul(l1)?.add(&b_form.mul(l2)?)?;
        back.sub(f)?.is_zero()
    });
    Ok((a_form, b_form))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Field;

    fn q(v: i64) -> Scalar {
        Field::Q.from_i64(v)
    }

    fn qpt(coords: &[i64]) -> Vec<Scalar> {
        coords.iter().map(|&v| q(v)).collect()
    }

    fn x(i: usize) -> Form {
        let mut e = vec![0u32; 3];
        e[i] = 1;
        Form::monomial(3, e, q(1)).unwrap()
    }

    /// 3x2 matrix on P^2 whose degeneracy locus contains the line x0 = x1:
    /// rows (x0, x1), (x1x2, x0x2), (x0x1x2, x0^2x2).
    fn line_matrix() -> FormMatrix {
        let r1 = vec![x(0), x(1)];
        let r2 = vec![x(1).mul(&x(2)).unwrap(), x(0).mul(&x(2)).unwrap()];
        let r3 = vec![
            x(0).mul(&x(1)).unwrap().mul(&x(2)).unwrap(),
            x(0).mul(&x(0)).unwrap().mul(&x(2)).unwrap(),
        ];
        FormMatrix::new(2, vec![1, 2, 3], vec![r1, r2, r3]).unwrap()
    }

    #[test]
    fn shape_validation() {
        // Wrong row count for the column count.
        assert!(FormMatrix::new(2, vec![1, 1], vec![vec![x(0), x(1)], vec![x(0), x(2)]]).is_err());
        // Degree mismatch within a row.
        assert!(FormMatrix::new(
            2,
            vec![1, 2, 2],
            vec![
                vec![x(0), x(1)],
                vec![x(0).mul(&x(1)).unwrap(), x(2)],
                vec![x(0).mul(&x(1)).unwrap(), x(2).mul(&x(2)).unwrap()],
            ],
        )
        .is_err());
    }

    #[test]
    fn kernel_point_is_normalized_and_scale_invariant() {
        let u = line_matrix();
        let z = qpt(&[1, 1, 1]);
        assert!(rank_drop_check(&u, &z).unwrap());
        let p = phi(&u, &z).unwrap();
        assert_eq!(p, vec![q(1), q(-1)]);
        // A different representative of the same projective point gives the
        // identical normalized kernel vector.
        let p5 = phi(&u, &qpt(&[5, 5, 5])).unwrap();
        assert_eq!(p, p5);
    }

    #[test]
    fn full_rank_point_has_no_kernel() {
        let u = line_matrix();
        let z = qpt(&[1, 2, 1]);
        assert!(!rank_drop_check(&u, &z).unwrap());
        assert!(phi(&u, &z).is_err());
    }

    #[test]
    fn collinear_kernel_images_drop_c1() {
        let u = line_matrix();
        // Two points of the line x0 = x1 share the kernel point (1, -1).
        let z1 = vec![qpt(&[1, 1, 1]), qpt(&[1, 1, 5])];
        assert_eq!(c1(&u, &z1).unwrap(), 1);
        assert_eq!(c1(&u, &z1[..1].to_vec()).unwrap(), 0);
    }

    #[test]
    fn c2_counts_the_cokernel() {
        // Degeneracy locus is a whole line here, so the finiteness hypothesis
        // fails and c2 may exceed c1; this only pins the raw computation.
        let u = line_matrix();
        let z = vec![qpt(&[1, 1, 1]), qpt(&[1, 1, 5])];
        let r = c2(u.field(), u.n(), u.row_degrees(), &z, &[]).unwrap();
        assert_eq!(r.value, 2);
        assert!(!r.vacuous);
        // Z2 must sit inside Z.
        assert!(c2(u.field(), u.n(), u.row_degrees(), &z, &[qpt(&[0, 1, 0])]).is_err());
    }

    #[test]
    fn column_scaling_preserves_c1() {
        let r1 = vec![x(0), x(1).scale(&q(7))];
        let r2 = vec![x(1).mul(&x(2)).unwrap(), x(0).mul(&x(2)).unwrap().scale(&q(7))];
        let r3 = vec![
            x(0).mul(&x(1)).unwrap().mul(&x(2)).unwrap(),
            x(0).mul(&x(0)).unwrap().mul(&x(2)).unwrap().scale(&q(7)),
        ];
        let scaled = FormMatrix::new(2, vec![1, 2, 3], vec![r1, r2, r3]).unwrap();
        let z1 = vec![qpt(&[1, 1, 1]), qpt(&[1, 1, 5])];
        assert_eq!(c1(&scaled, &z1).unwrap(), c1(&line_matrix(), &z1).unwrap());
    }

    #[test]
    fn scenario_rejects_non_degenerate_points() {
        let u = line_matrix();
        let split = Split::new(2, vec![0]).unwrap();
        let bad = DetScenario::new(
            "bad",
            u.clone(),
            vec![qpt(&[1, 1, 1]), qpt(&[1, 2, 1])],
            None,
            split.clone(),
        );
        assert!(bad.is_err());
        let good = DetScenario::new(
            "good",
            u,
            vec![qpt(&[1, 1, 1]), qpt(&[1, 1, 5])],
            None,
            split,
        )
        .unwrap();
        // The degeneracy locus is a whole line, so the theorem's finiteness
        // hypothesis fails and the inequality honestly fails with it: the
        // singleton kernel point imposes one condition (c1 = 0) while the
        // cokernel still sees the removed point (c2 = 1).
        let rep = det_cb_check(&good).unwrap();
        assert_eq!(rep.c1, 0);
        assert_eq!(rep.c2, 1);
        assert!(!rep.pass);
    }

    #[test]
    fn decomposition_reassembles() {
        // f = x0^2 + x0x1 vanishes at (0,0,1) = x0 cap x1.
        let f = x(0).mul(&x(0)).unwrap().add(&x(0).mul(&x(1)).unwrap()).unwrap();
        let (a, b) = decompose_through_point(&f, &x(0), &x(1)).unwrap();
        let back = a.mul(&x(0)).unwrap().add(&b.mul(&x(1)).unwrap()).unwrap();
        assert!(back.sub(&f).unwrap().is_zero());
        assert_eq!(a.degree(), 1);
    }

    #[test]
    fn decomposition_rejects_forms_missing_the_point() {
        let f = x(2).mul(&x(2)).unwrap();
        assert!(decompose_through_point(&f, &x(0), &x(1)).is_err());
        // Coincident lines are rejected.
        assert!(decompose_through_point(&x(0).mul(&x(0)).unwrap(), &x(0), &x(0).scale(&q(3))).is_err());
    }
}
