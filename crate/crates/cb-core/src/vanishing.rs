//! Linear conditions on forms of one degree, compiled to exact matrices.
//!
//! A [`Condition`] contributes rows to a matrix whose columns run over the
//! monomial basis of degree-`d` forms on `P^n` (in the crate's monomial
//! order).  The kernel of that matrix is the space of forms satisfying all
//! conditions, so `h0 = C(d+n, n) - rank` and a canonical basis of the space
//! falls out of [`crate::Matrix::kernel_basis`].
//!
//! Rows are emitted in a fixed order (conditions in input order; inside a jet
//! condition, differential operators in graded monomial order, then parameter
//! monomials in monomial order), so compiled systems are reproducible.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::poly::{binomial, monomial_basis, Form, Monomial, Parametrization, PowerCache};
use crate::scalar::{Field, Scalar};

/// One linear condition on degree-`d` forms.
#[derive(Clone, Debug)]
pub enum Condition {
    /// The form vanishes at a point.
    PointVanish { point: Vec<Scalar> },
    /// All partial derivatives of order `< order` vanish at the point; order
    /// 1 is plain vanishing, order `m` cuts out an `m`-fold point.
    PointJet { point: Vec<Scalar>, order: usize },
    /// The form, pulled back along the parametrization, vanishes to order
    /// `order` (all operator-derivatives of order `< order` pull back to the
    /// zero form).  Order 0 imposes nothing.
    SubvarietyJet { param: Parametrization, order: usize },
}

impl Condition {
    pub fn point(p: Vec<Scalar>) -> Condition {
        Condition::PointVanish { point: p }
    }

    pub fn point_jet(p: Vec<Scalar>, order: usize) -> Condition {
        Condition::PointJet { point: p, order }
    }

    pub fn subvariety_jet(param: Parametrization, order: usize) -> Condition {
        Condition::SubvarietyJet { param, order }
    }

    fn field(&self) -> Option<Field> {
        match self {
            Condition::PointVanish { point } => point.first().map(|s| s.field()),
            Condition::PointJet { point, .. } => point.first().map(|s| s.field()),
            Condition::SubvarietyJet { param, .. } => Some(param.field()),
        }
    }
}

/// The compiled conditions on degree-`degree` forms on `P^n`.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    n: usize,
    degree: usize,
    matrix: Matrix,
}

impl LinearSystem {
    /// Compile `conditions` into one matrix.  All-zero rows (conditions that
    /// are vacuous in this degree) are dropped.
    pub fn compile(
        field: Field,
        n: usize,
        degree: usize,
        conditions: &[Condition],
    ) -> Result<LinearSystem> {
        let cols = binomial(degree + n, n);
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for cond in conditions {
            if let Some(f) = cond.field() {
                if f != field {
                    return Err(Error::field_mismatch(format!(
                        "condition over {f}, system over {field}"
                    )));
                }
            }
            condition_rows_into(field, n, degree, cond, &mut rows)?;
        }
        rows.retain(|r| r.iter().any(|s| !s.is_zero()));
        let matrix = Matrix::from_rows(field, rows, cols)?;
        Ok(LinearSystem { n, degree, matrix })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    /// Dimension of the space of degree-`degree` forms satisfying the
    /// conditions.
    pub fn solution_dim(&self) -> usize {
        self.matrix.cols() - self.rank()
    }

    /// Canonical basis of that space, as forms.
    pub fn solution_basis(&self) -> Result<Vec<Form>> {
        self.matrix
            .kernel_basis()
            .into_iter()
            .map(|v| Form::from_coeff_vector(self.n + 1, self.degree, self.matrix.field(), &v))
            .collect()
    }
}

/// Rows a single condition imposes on degree-`degree` forms on `P^n`.
pub fn condition_rows(
    field: Field,
    n: usize,
    degree: usize,
    cond: &Condition,
) -> Result<Vec<Vec<Scalar>>> {
    let mut rows = Vec::new();
    condition_rows_into(field, n, degree, cond, &mut rows)?;
    Ok(rows)
}

fn condition_rows_into(
    field: Field,
    n: usize,
    degree: usize,
    cond: &Condition,
    rows: &mut Vec<Vec<Scalar>>,
) -> Result<()> {
    match cond {
        Condition::PointVanish { point } => {
            let p = validated_point(field, n, point)?;
            rows.push(evaluation_row(field, n, degree, p, &Monomial::new(vec![0; n + 1])));
            Ok(())
        }
        Condition::PointJet { point, order } => {
            let p = validated_point(field, n, point)?;
            for k in 0..*order {
                if k > degree {
                    break;
                }
                for beta in monomial_basis(n + 1, k) {
                    rows.push(evaluation_row(field, n, degree, p, &beta));
                }
            }
            Ok(())
        }
        Condition::SubvarietyJet { param, order } => {
            if param.target_dim() != n {
                return Err(Error::dim(format!(
                    "parametrization maps to P^{}, system lives on P^{n}",
                    param.target_dim()
                )));
            }
            if param.field() != field {
                return Err(Error::field_mismatch(format!(
                    "parametrization over {}, system over {field}",
                    param.field()
                )));
            }
            let mut cache = PowerCache::new(param.components())?;
            let w = param.source_dim();
            let ambient_basis = monomial_basis(n + 1, degree);
            for k in 0..*order {
                if k > degree {
                    break;
                }
                let pulled_degree = (degree - k) * param.degree();
                let gamma_basis = monomial_basis(w + 1, pulled_degree);
                // block[gamma][alpha]: coefficient of the parameter monomial
                // gamma in the pullback of the beta-derivative of x^alpha
                for beta in monomial_basis(n + 1, k) {
                    let mut block =
                        vec![vec![field.zero(); ambient_basis.len()]; gamma_basis.len()];
                    for (a_idx, alpha) in ambient_basis.iter().enumerate() {
                        let Some((coeff, shifted)) = derivative_monomial(field, alpha, &beta)
                        else {
                            continue;
                        };
                        let image = cache.monomial_image(&shifted)?.scale(&coeff);
                        for (m, c) in image.terms() {
                            let g_idx = gamma_basis
                                .binary_search(m)
                                .expect("pullback monomial lies in the parameter basis");
                            block[g_idx][a_idx] = c.clone();
                        }
                    }
                    rows.extend(block);
                }
            }
            Ok(())
        }
    }
}

/// Row of values `D^beta x^alpha (p)` over the degree-`degree` basis.
fn evaluation_row(
    field: Field,
    n: usize,
    degree: usize,
    p: &[Scalar],
    beta: &Monomial,
) -> Vec<Scalar> {
    monomial_basis(n + 1, degree)
        .iter()
        .map(|alpha| match derivative_monomial(field, alpha, beta) {
            Some((coeff, shifted)) => &coeff * &shifted.evaluate(p, field),
            None => field.zero(),
        })
        .collect()
}

/// `D^beta x^alpha = c * x^(alpha - beta)` with `c` the falling-factorial
/// product; `None` when some `beta_i > alpha_i` (the derivative vanishes).
fn derivative_monomial(field: Field, alpha: &Monomial, beta: &Monomial) -> Option<(Scalar, Monomial)> {
    let mut coeff = 1i64;
    let mut shifted = Vec::with_capacity(alpha.nvars());
    for (&a, &b) in alpha.exps().iter().zip(beta.exps()) {
        if b > a {
            return None;
        }
        for k in 0..b {
            coeff *= (a - k) as i64;
        }
        shifted.push(a - b);
    }
    Some((field.from_i64(coeff), Monomial::new(shifted)))
}

fn validated_point<'a>(field: Field, n: usize, point: &'a [Scalar]) -> Result<&'a [Scalar]> {
    if point.len() != n + 1 {
        return Err(Error::dim(format!(
            "point has {} coordinates, ambient space is P^{n}",
            point.len()
        )));
    }
    for x in point {
        if x.field() != field {
            return Err(Error::field_mismatch(format!(
                "point coordinate over {}, system over {field}",
                x.field()
            )));
        }
    }
    if point.iter().all(|x| x.is_zero()) {
        return Err(Error::domain("the zero vector is not a projective point"));
    }
    Ok(point)
}

/// `h0` of degree-`degree` forms on `P^n` cut down by `conditions`; zero for
/// negative degree.
pub fn h0(field: Field, n: usize, degree: i64, conditions: &[Condition]) -> Result<usize> {
    if degree < 0 {
        return Ok(0);
    }
    Ok(LinearSystem::compile(field, n, degree as usize, conditions)?.solution_dim())
}

/// Canonical basis of the space counted by [`h0`]; empty for negative degree.
pub fn basis_h0(
    field: Field,
    n: usize,
    degree: i64,
    conditions: &[Condition],
) -> Result<Vec<Form>> {
    if degree < 0 {
        return Ok(Vec::new());
    }
    LinearSystem::compile(field, n, degree as usize, conditions)?.solution_basis()
}
