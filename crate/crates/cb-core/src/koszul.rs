//! Graded pieces of the Koszul complex of a section of `O(d_1)+...+O(d_n)`
//! and of its Skoda subcomplex.
//!
//! Position `p` of the Koszul complex is the direct sum over `p`-element
//! subsets `I` of the sections of a coefficient space of degree
//! `t - sum_{i in I} d_i` forms; the differential contracts with the section
//! vector, multiplying by `f_i` with the usual alternating sign.  When the
//! zero scheme has an excess component `W` the full complex stops being
//! exact, and that failure shows up here as nonzero graded homology.  The
//! Skoda variant shrinks each summand by jets along `W` (order
//! `max(0, w+1 - p)` at position `p`, the multiplier exponent of `I_W^{n-p}`)
//! and stays exact in the interior; its tail image is the Skoda product
//! ideal, compared against the jet-plus-points condition space.
//!
//! Everything here is one graded degree at a time: positions are finite
//! dimensional vector spaces, differentials are explicit matrices in the
//! per-summand bases, and homology is rank arithmetic.

use crate::cb::CIScenario;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::poly::Form;
use crate::vanishing::{basis_h0, h0, Condition};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum KoszulVariant {
    Full,
    Skoda,
}

/// One direct summand of a complex position: the coefficient space of
/// degree-`degree` forms cut down by the variant's conditions, with a cached
/// basis in coefficient coordinates.
#[derive(Clone, Debug)]
struct Summand {
    subset: Vec<usize>,
    degree: i64,
    basis: Vec<Form>,
    /// Columns are the coefficient vectors of `basis`; unused when the
    /// summand is the whole coefficient space.
    basis_matrix: Matrix,
    unconstrained: bool,
}

/// A graded piece (fixed twist `t`) of the chosen complex for a scenario.
pub struct GradedComplex {
    scenario: CIScenario,
    twist: i64,
    variant: KoszulVariant,
    terms: Vec<Vec<Summand>>,
    /// `diffs[p-1]` is the matrix of `D_p`: position `p` to position `p-1`.
    diffs: Vec<Matrix>,
}

/// Jet order along `W` at position `p`: the multiplier exponent of
/// `I_W^{n-p}`, extended by 0 at `p = n` where the term is unconstrained.
fn skoda_order(n: usize, w: usize, p: usize) -> usize {
    (w as i64 + 1 + (n - p) as i64 - n as i64).max(0) as usize
}

/// All `p`-element subsets of `0..n` in lexicographic order.
fn subsets(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, p: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if p == 0 {
            out.push(prefix.clone());
            return;
        }
        for i in start..=n - p {
            prefix.push(i);
            rec(i + 1, n, p - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, p, &mut Vec::new(), &mut out);
    out
}

impl GradedComplex {
    pub fn build(sc: &CIScenario, twist: i64, variant: KoszulVariant) -> Result<GradedComplex> {
        let n = sc.n();
        let field = sc.field();
        let excess = match (variant, sc.excess()) {
            (KoszulVariant::Skoda, None) => {
                return Err(Error::domain(
                    "the Skoda variant needs a scenario with an excess locus",
                ));
            }
            (KoszulVariant::Skoda, Some(ex)) => Some(ex),
            (KoszulVariant::Full, _) => None,
        };
        let mut terms: Vec<Vec<Summand>> = Vec::with_capacity(n + 1);
        for p in 0..=n {
            let order = excess.map_or(0, |ex| skoda_order(n, ex.dim(), p));
            let conds: Vec<Condition> = if order == 0 {
                Vec::new()
            } else {
                let ex = excess.expect("order > 0 only with an excess locus");
                vec![Condition::subvariety_jet(ex.param().clone(), order)]
            };
            let mut summands = Vec::new();
            for subset in subsets(n, p) {
                let degree =
                    twist - subset.iter().map(|&i| sc.degrees()[i] as i64).sum::<i64>();
                let basis = basis_h0(field, n, degree, &conds)?;
                let basis_matrix = if basis.is_empty() {
                    Matrix::zero(0, 0, field)
                } else {
                    let cols: Vec<Vec<_>> = basis.iter().map(|f| f.coeff_vector()).collect();
                    Matrix::from_columns(field, &cols, cols[0].len())?
                };
                summands.push(Summand {
                    subset,
                    degree,
                    basis,
                    basis_matrix,
                    unconstrained: conds.is_empty(),
                });
            }
            terms.push(summands);
        }
        let mut diffs = Vec::with_capacity(n);
        for p in 1..=n {
            diffs.push(differential(sc, &terms, p)?);
        }
        Ok(GradedComplex { scenario: sc.clone(), twist, variant, terms, diffs })
    }

    pub fn n(&self) -> usize {
        self.scenario.n()
    }

    pub fn twist(&self) -> i64 {
        self.twist
    }

    pub fn variant(&self) -> KoszulVariant {
        self.variant
    }

    pub fn scenario(&self) -> &CIScenario {
        &self.scenario
    }

    /// Dimension of position `p`.
    pub fn term_dim(&self, p: usize) -> usize {
        self.terms[p].iter().map(|s| s.basis.len()).sum()
    }

    /// Matrix of `D_p` (position `p` to `p-1`), `1 <= p <= n`.
    pub fn differential(&self, p: usize) -> &Matrix {
        assert!(p >= 1 && p <= self.n(), "differential index out of range");
        &self.diffs[p - 1]
    }

    /// Graded homology dimensions, listed from position `n` down to 0.
    pub fn homology_dims(&self) -> Vec<usize> {
        let n = self.n();
        let ranks: Vec<usize> = self.diffs.iter().map(|d| d.rank()).collect();
        let mut out = Vec::with_capacity(n + 1);
        for p in (0..=n).rev() {
            let kernel = if p == 0 {
                self.term_dim(0)
            } else {
                self.term_dim(p) - ranks[p - 1]
            };
            let image = if p == n { 0 } else { ranks[p] };
            out.push(kernel - image);
        }
        out
    }

    /// Verify `D_p compose D_{p+1} = 0` for every pair of consecutive
    /// differentials.
    pub fn dd_is_zero(&self) -> bool {
        for p in 2..=self.n() {
            let prod = self.diffs[p - 2].mul(&self.diffs[p - 1]);
            for i in 0..prod.rows() {
                for j in 0..prod.cols() {
                    if !prod.get(i, j).is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Rank of `D_1`: the dimension of the degree-`t` piece of the image
    /// ideal.
    pub fn tail_image_rank(&self) -> usize {
        self.diffs[0].rank()
    }

    /// Dimension the Skoda tail should reach: forms with the full multiplier
    /// jets along `W` that also vanish on `Z`.
    pub fn skoda_tail_target_dim(&self) -> Result<usize> {
        if self.variant != KoszulVariant::Skoda {
            return Err(Error::domain("tail target is defined for the Skoda variant"));
        }
        let sc = &self.scenario;
        let mut conds = sc.multiplier_conditions();
        conds.extend(sc.points().iter().map(|z| Condition::point(z.clone())));
        h0(sc.field(), sc.n(), self.twist, &conds)
    }

    /// Matrix-level commuting squares for the inclusion into the full
    /// complex: `D_full . B_p = B_{p-1} . D_skoda` where `B_p` stacks the
    /// summand bases into coefficient coordinates.
    pub fn restriction_commutes(&self, full: &GradedComplex) -> Result<bool> {
        if self.variant != KoszulVariant::Skoda || full.variant != KoszulVariant::Full {
            return Err(Error::domain("expected a Skoda complex and its full companion"));
        }
        if self.twist != full.twist || self.n() != full.n() {
            return Err(Error::dim("complexes live at different twists"));
        }
        for p in 1..=self.n() {
            let left = full.diffs[p - 1].mul(&self.inclusion_matrix(full, p)?);
            let right = self.inclusion_matrix(full, p - 1)?.mul(&self.diffs[p - 1]);
            if left.rows() != right.rows() || left.cols() != right.cols() {
                return Ok(false);
            }
            for i in 0..left.rows() {
                for j in 0..left.cols() {
                    if left.get(i, j) != right.get(i, j) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Block-diagonal change of basis from this complex's position `p` into
    /// the full complex's coefficient coordinates.
    fn inclusion_matrix(&self, full: &GradedComplex, p: usize) -> Result<Matrix> {
        let field = self.scenario.field();
        let rows = full.term_dim(p);
        let cols = self.term_dim(p);
        let mut out = Matrix::zero(rows, cols, field);
        let mut row_off = 0;
        let mut col_off = 0;
        for (s, fs) in self.terms[p].iter().zip(&full.terms[p]) {
            debug_assert_eq!(s.subset, fs.subset);
            for (j, b) in s.basis.iter().enumerate() {
                for (i, v) in b.coeff_vector().into_iter().enumerate() {
                    if !v.is_zero() {
                        out.set(row_off + i, col_off + j, v);
                    }
                }
            }
            row_off += fs.basis.len();
            col_off += s.basis.len();
        }
        Ok(out)
    }
}

/// Matrix of `D_p` in the per-summand bases: contraction with the section
/// vector, block `I -> I minus {i}` given by multiplication by `f_i` with
/// sign `(-1)^(position of i in I)`.
fn differential(sc: &CIScenario, terms: &[Vec<Summand>], p: usize) -> Result<Matrix> {
    let field = sc.field();
    let sources = &terms[p];
    let targets = &terms[p - 1];
    let col_off = offsets(sources);
    let row_off = offsets(targets);
    let total_rows = *row_off.last().expect("offsets always end with the total");
    let total_cols = *col_off.last().expect("offsets always end with the total");
    let mut rows: Vec<Vec<_>> = (0..total_rows)
        .map(|_| vec![field.zero(); total_cols])
        .collect();
    for (si, source) in sources.iter().enumerate() {
        if source.basis.is_empty() {
            continue;
        }
        for (k, &i) in source.subset.iter().enumerate() {
            let target_subset: Vec<usize> =
                source.subset.iter().copied().filter(|&j| j != i).collect();
            let ti = targets
                .binary_search_by(|s| s.subset.as_slice().cmp(target_subset.as_slice()))
                .expect("every facet subset appears at the previous position");
            let target = &targets[ti];
            debug_assert_eq!(
                target.degree,
                source.degree + sc.degrees()[i] as i64,
                "multiplication by f_i must land in the facet summand's degree"
            );
            let images: Vec<Form> = source
                .basis
                .iter()
                .map(|b| b.mul(&sc.sections()[i]))
                .collect::<Result<_>>()?;
            let coords = coordinates_in(target, &images, field)?;
            let negate = k % 2 == 1;
            for (c, col) in coords.iter().enumerate() {
                for (r, v) in col.iter().enumerate() {
                    if v.is_zero() {
                        continue;
                    }
                    let v = if negate { -v } else { v.clone() };
                    rows[row_off[ti] + r][col_off[si] + c] = v;
                }
            }
        }
    }
    Matrix::from_rows(field, rows, total_cols)
}

fn offsets(summands: &[Summand]) -> Vec<usize> {
    let mut out = Vec::with_capacity(summands.len() + 1);
    let mut acc = 0;
    for s in summands {
        out.push(acc);
        acc += s.basis.len();
    }
    out.push(acc);
    out
}

/// Coordinates of the given forms in a summand's basis, one column per form.
fn coordinates_in(
    target: &Summand,
    images: &[Form],
    field: crate::scalar::Field,
) -> Result<Vec<Vec<crate::scalar::Scalar>>> {
    if target.unconstrained {
        return Ok(images.iter().map(|f| f.coeff_vector()).collect());
    }
    let cols: Vec<Vec<_>> = images.iter().map(|f| f.coeff_vector()).collect();
    let rhs = Matrix::from_columns(field, &cols, target.basis_matrix.rows())?;
    let sol = target
        .basis_matrix
        .solve_many(&rhs)?
        .ok_or_else(|| Error::domain("differential image escapes the constrained summand"))?;
    Ok((0..sol.cols())
        .map(|j| (0..sol.rows()).map(|i| sol.get(i, j).clone()).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::binomial;
    use crate::scalar::Field;
    use crate::scenario::{build_line_grid, build_twisted_cubic};

    #[test]
    fn subset_order_is_lexicographic() {
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsets(4, 3).len(), 4);
        let mut sorted = subsets(4, 2);
        sorted.sort();
        assert_eq!(sorted, subsets(4, 2));
    }

    #[test]
    fn term_dims_of_the_full_complex() {
        let sc = build_line_grid(Field::Q, 2, 3, 11).unwrap();
        // t = d: position 0 is the whole degree-d space.
        let cx = GradedComplex::build(&sc, 4, KoszulVariant::Full).unwrap();
        assert_eq!(cx.term_dim(0), binomial(4 + 2, 2));
        assert!(cx.dd_is_zero());
        // t = sum d_i: the top term is the one-dimensional degree-0 space.
        let cx = GradedComplex::build(&sc, 5, KoszulVariant::Full).unwrap();
        assert_eq!(cx.term_dim(2), 1);
        assert!(cx.dd_is_zero());
    }

    #[test]
    fn grid_complex_resolves_the_points() {
        // Regular sequence: interior homology vanishes and the cokernel
        // counts the six crossings once t is past regularity.
        let sc = build_line_grid(Field::Q, 2, 3, 11).unwrap();
        let cx = GradedComplex::build(&sc, 6, KoszulVariant::Full).unwrap();
        assert_eq!(cx.homology_dims(), vec![0, 0, 6]);
        // The image of D_1 in that degree is exactly the forms through Z.
        let z_conds: Vec<Condition> =
            sc.points().iter().map(|z| Condition::point(z.clone())).collect();
        let ideal_dim = h0(Field::Q, 2, 6, &z_conds).unwrap();
        assert_eq!(cx.tail_image_rank(), ideal_dim);
    }

    #[test]
    fn single_section_complex_is_injective() {
        // n = 1: the complex is multiplication by the section, injective,
        // with cokernel the two zeros.
        let f = crate::poly::Form::from_terms(
            2,
            2,
            Field::Q,
            [(vec![1, 1], Field::Q.one())],
        )
        .unwrap();
        let sc = crate::cb::CIScenario::new(
            "two points on a line",
            Field::Q,
            vec![2],
            vec![f],
            None,
            vec![
                vec![Field::Q.one(), Field::Q.zero()],
                vec![Field::Q.zero(), Field::Q.one()],
            ],
        )
        .unwrap();
        let cx = GradedComplex::build(&sc, 3, KoszulVariant::Full).unwrap();
        assert_eq!(cx.homology_dims(), vec![0, 2]);
    }

    #[test]
    fn skoda_variant_constrains_the_right_positions() {
        let sc = build_twisted_cubic(Field::Q, 5, &[1, 2, 3], 7).unwrap();
        let full = GradedComplex::build(&sc, 7, KoszulVariant::Full).unwrap();
        let skoda = GradedComplex::build(&sc, 7, KoszulVariant::Skoda).unwrap();
        // Jet orders by position: p = 0 carries order w+1 = 2, p = 1 order 1,
        // p = 2 order 0 (J(b) = O for m = 1 here), p = 3 unconstrained.
        assert_eq!(skoda_order(3, 1, 0), 2);
        assert_eq!(skoda_order(3, 1, 1), 1);
        assert_eq!(skoda_order(3, 1, 2), 0);
        assert_eq!(skoda_order(3, 1, 3), 0);
        for p in 2..=3 {
            assert_eq!(skoda.term_dim(p), full.term_dim(p));
        }
        for p in 0..=1 {
            assert!(skoda.term_dim(p) < full.term_dim(p));
        }
        assert!(skoda.dd_is_zero());
        assert!(skoda.restriction_commutes(&full).unwrap());
    }

    #[test]
    fn skoda_needs_an_excess_locus() {
        let sc = build_line_grid(Field::Q, 2, 3, 11).unwrap();
        assert!(GradedComplex::build(&sc, 5, KoszulVariant::Skoda).is_err());
    }

    #[test]
    #[ignore = "one-off sweep used to fix the Skoda twist window"]
    fn skoda_window_sweep() {
        let sc = build_twisted_cubic(Field::Q, 5, &[1, 2, 3], 7).unwrap();
        for t in 5..=13 {
            let cx = GradedComplex::build(&sc, t, KoszulVariant::Skoda).unwrap();
            let h = cx.homology_dims();
            let tail = cx.tail_image_rank();
            let target = cx.skoda_tail_target_dim().unwrap();
            println!(
                "t = {t}: homology {h:?}, tail rank {tail}, target {target}, interior ok {}",
                h[1] == 0 && h[2] == 0 && tail == target
            );
        }
    }

    #[test]
    #[ignore = "one-off sweep recording the full-variant excess signature"]
    fn full_window_sweep() {
        let sc = build_twisted_cubic(Field::Q, 5, &[1, 2, 3], 7).unwrap();
        for t in 6..=9 {
            let cx = GradedComplex::build(&sc, t, KoszulVariant::Full).unwrap();
            println!("t = {t}: homology {:?}", cx.homology_dims());
        }
    }
}
