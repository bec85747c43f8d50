//! Sparse homogeneous forms and rational parametrizations.
//!
//! Monomials are ordered by total degree, then by exponent vector with the
//! first variable dominant, so the degree-1 basis in three variables reads
//! `x0, x1, x2`.  Every coefficient-vector API in the crate uses this order;
//! it is the contract that makes matrices, kernel bases, and reports
//! reproducible.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Field, Scalar};

/// Exponent vector of a monomial; total degree is cached.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: Vec<u32>,
    degree: u32,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Monomial {
        let degree = exps.iter().sum();
        Monomial { exps, degree }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    /// Product of two monomials in the same variable set.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial::new(self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect())
    }

    /// Evaluate at a point, with scalar powers computed directly.
    pub fn evaluate(&self, point: &[Scalar], field: Field) -> Scalar {
        let mut acc = field.one();
        for (e, x) in self.exps.iter().zip(point) {
            for _ in 0..*e {
                acc = &acc * x;
            }
        }
        acc
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Degree ascending; within a degree the larger exponent vector (lex)
        // comes first, which puts x0-dominant monomials at the front.
        self.degree
            .cmp(&other.degree)
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of the given degree in `nvars` variables, in the crate's
/// monomial order.  Length is `C(degree + nvars - 1, nvars - 1)`.
pub fn monomial_basis(nvars: usize, degree: usize) -> Vec<Monomial> {
    assert!(nvars >= 1, "need at least one variable");
    let mut out = Vec::with_capacity(binomial(degree + nvars - 1, nvars - 1));
    let mut exps = vec![0u32; nvars];
    fill_basis(&mut out, &mut exps, 0, degree as u32);
    debug_assert!(out.windows(2).all(|w| w[0] < w[1]));
    out
}

fn fill_basis(out: &mut Vec<Monomial>, exps: &mut Vec<u32>, var: usize, remaining: u32) {
    if var == exps.len() - 1 {
        exps[var] = remaining;
        out.push(Monomial::new(exps.clone()));
        return;
    }
    for k in (0..=remaining).rev() {
        exps[var] = k;
        fill_basis(out, exps, var + 1, remaining - k);
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// A homogeneous polynomial over one field, stored sparsely.
///
/// Invariants: every stored monomial has `nvars` variables and total degree
/// `degree`; no coefficient is zero; all coefficients lie in `field`.  The
/// zero form is an empty term map with an explicit degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Form {
    nvars: usize,
    degree: usize,
    field: Field,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Form {
    pub fn zero(nvars: usize, degree: usize, field: Field) -> Form {
        Form { nvars, degree, field, terms: BTreeMap::new() }
    }

    /// Build from `(exponents, coefficient)` pairs; duplicates accumulate.
    pub fn from_terms(
        nvars: usize,
        degree: usize,
        field: Field,
        terms: impl IntoIterator<Item = (Vec<u32>, Scalar)>,
    ) -> Result<Form> {
        let mut f = Form::zero(nvars, degree, field);
        for (exps, coeff) in terms {
            if exps.len() != nvars {
                return Err(Error::dim(format!(
                    "monomial has {} exponents, form has {nvars} variables",
                    exps.len()
                )));
            }
            let m = Monomial::new(exps);
            if m.degree() as usize != degree {
                return Err(Error::dim(format!(
                    "monomial of degree {} in a form of degree {degree}",
                    m.degree()
                )));
            }
            if coeff.field() != field {
                return Err(Error::field_mismatch(format!(
                    "coefficient in {}, form over {field}",
                    coeff.field()
                )));
            }
            f.add_term(m, coeff);
        }
        Ok(f)
    }

    /// The single monomial `coeff * x^exps`.
    pub fn monomial(nvars: usize, exps: Vec<u32>, coeff: Scalar) -> Result<Form> {
        let degree = exps.iter().map(|&e| e as usize).sum();
        Form::from_terms(nvars, degree, coeff.field(), [(exps, coeff)])
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = &*e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn check_compatible(&self, other: &Form, op: &str) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::dim(format!(
                "{op} of forms in {} and {} variables",
                self.nvars, other.nvars
            )));
        }
        if self.field != other.field {
            return Err(Error::field_mismatch(format!(
                "{op} of forms over {} and {}",
                self.field, other.field
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Form) -> Result<Form> {
        self.check_compatible(other, "sum")?;
        if self.degree != other.degree {
            return Err(Error::dim(format!(
                "sum of forms of degrees {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Form) -> Result<Form> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Form {
        let mut out = Form::zero(self.nvars, self.degree, self.field);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), -c);
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Form {
        assert_eq!(s.field(), self.field, "scale factor field must match");
        let mut out = Form::zero(self.nvars, self.degree, self.field);
        if s.is_zero() {
            return out;
        }
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &Form) -> Result<Form> {
        self.check_compatible(other, "product")?;
        let mut out = Form::zero(self.nvars, self.degree + other.degree, self.field);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: usize) -> Form {
        let mut acc = Form::from_terms(
            self.nvars,
            0,
            self.field,
            [(vec![0; self.nvars], self.field.one())],
        )
        .expect("constant form");
        for _ in 0..k {
            acc = acc.mul(self).expect("compatible by construction");
        }
        acc
    }

    /// Evaluate at a point with `nvars` coordinates.  The zero vector is not
    /// a projective point and is rejected.
    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.nvars {
            return Err(Error::dim(format!(
                "point has {} coordinates, form has {} variables",
                point.len(),
                self.nvars
            )));
        }
        for x in point {
            if x.field() != self.field {
                return Err(Error::field_mismatch(format!(
                    "point coordinate in {}, form over {}",
                    x.field(),
                    self.field
                )));
            }
        }
        if point.iter().all(|x| x.is_zero()) {
            return Err(Error::domain("evaluation at the zero vector"));
        }
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            acc = &acc + &(c * &m.evaluate(point, self.field));
        }
        Ok(acc)
    }

    /// Partial derivative with respect to variable `var`.
    pub fn partial(&self, var: usize) -> Form {
        assert!(var < self.nvars, "variable index out of range");
        let mut out = Form::zero(self.nvars, self.degree.saturating_sub(1), self.field);
        for (m, c) in &self.terms {
            let e = m.exps()[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps().to_vec();
            exps[var] -= 1;
            out.add_term(Monomial::new(exps), &self.field.from_i64(e as i64) * c);
        }
        out
    }

    /// Substitute `x_i := comps[i]`.  The components must be homogeneous of
    /// one common degree in one common variable set; the result is
    /// homogeneous of degree `self.degree * comps.degree`.
    pub fn compose(&self, comps: &[Form]) -> Result<Form> {
        if comps.len() != self.nvars {
            return Err(Error::dim(format!(
                "{} substitution components for {} variables",
                comps.len(),
                self.nvars
            )));
        }
        let mut cache = PowerCache::new(comps)?;
        if self.is_zero() {
            return Ok(Form::zero(cache.nvars, self.degree * cache.degree, self.field));
        }
        let mut acc = Form::zero(cache.nvars, self.degree * cache.degree, self.field);
        for (m, c) in &self.terms {
            let image = cache.monomial_image(m)?;
            acc = acc.add(&image.scale(c))?;
        }
        Ok(acc)
    }

    /// Coefficients in the monomial basis of `(nvars, degree)`, dense.
    pub fn coeff_vector(&self) -> Vec<Scalar> {
        monomial_basis(self.nvars, self.degree)
            .into_iter()
            .map(|m| self.terms.get(&m).cloned().unwrap_or_else(|| self.field.zero()))
            .collect()
    }

    pub fn from_coeff_vector(
        nvars: usize,
        degree: usize,
        field: Field,
        coeffs: &[Scalar],
    ) -> Result<Form> {
        let basis = monomial_basis(nvars, degree);
        if coeffs.len() != basis.len() {
            return Err(Error::dim(format!(
                "{} coefficients for a basis of size {}",
                coeffs.len(),
                basis.len()
            )));
        }
        Form::from_terms(
            nvars,
            degree,
            field,
            basis.into_iter().zip(coeffs.iter().cloned()).map(|(m, c)| (m.exps().to_vec(), c)),
        )
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let mut mono = String::new();
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !mono.is_empty() {
                    mono.push('*');
                }
                mono.push_str(&format!("x{i}"));
                if e > 1 {
                    mono.push_str(&format!("^{e}"));
                }
            }
            let cs = c.to_string();
            let (sign, mag) = match cs.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", cs),
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == "1" {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

/// Lazily extended table of powers of substitution components, shared across
/// many monomial images of one composition.
pub struct PowerCache<'a> {
    comps: &'a [Form],
    nvars: usize,
    degree: usize,
    field: Field,
    pows: Vec<Vec<Form>>,
}

impl<'a> PowerCache<'a> {
    pub fn new(comps: &'a [Form]) -> Result<PowerCache<'a>> {
        let first = comps.first().ok_or_else(|| Error::dim("empty component list"))?;
        for c in comps {
            if c.nvars() != first.nvars() || c.degree() != first.degree() {
                return Err(Error::dim(
                    "substitution components must share one variable set and degree",
                ));
            }
            if c.field() != first.field() {
                return Err(Error::field_mismatch("substitution components over mixed fields"));
            }
        }
        Ok(PowerCache {
            comps,
            nvars: first.nvars(),
            degree: first.degree(),
            field: first.field(),
            pows: vec![Vec::new(); comps.len()],
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    fn power(&mut self, i: usize, k: usize) -> Result<&Form> {
        if self.pows[i].is_empty() {
            let one = Form::from_terms(
                self.nvars,
                0,
                self.field,
                [(vec![0; self.nvars], self.field.one())],
            )?;
            self.pows[i].push(one);
        }
        while self.pows[i].len() <= k {
            let next = self.pows[i].last().unwrap().mul(&self.comps[i])?;
            self.pows[i].push(next);
        }
        Ok(&self.pows[i][k])
    }

    /// Image of the monomial `x^exps` under the substitution.
    pub fn monomial_image(&mut self, m: &Monomial) -> Result<Form> {
        let mut acc = Form::from_terms(
            self.nvars,
            0,
            self.field,
            [(vec![0; self.nvars], self.field.one())],
        )?;
        for (i, &e) in m.exps().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let p = self.power(i, e as usize)?.clone();
            acc = acc.mul(&p)?;
        }
        Ok(acc)
    }
}

/// A map `P^w -> P^n` given by `n + 1` forms of one common degree in `w + 1`
/// parameters.
///
/// Construction validates what can be checked exactly for curves (`w = 1`):
/// the components have no common zero over any extension field (their gcd as
/// binary forms is constant), and a fixed list of sample parameters gives
/// pairwise distinct images with an everywhere-rank-2 Jacobian, a spot check
/// that the map is an embedding.  For `w >= 2` only the shape checks run and
/// smoothness of the image is the caller's responsibility.
#[derive(Clone, Debug)]
pub struct Parametrization {
    source_dim: usize,
    components: Vec<Form>,
    name: String,
}

impl Parametrization {
    pub fn new(source_dim: usize, components: Vec<Form>, name: impl Into<String>) -> Result<Parametrization> {
        if source_dim == 0 {
            return Err(Error::dim("source must have positive dimension"));
        }
        if components.len() < 2 {
            return Err(Error::dim("a parametrization needs at least two components"));
        }
        let degree = components[0].degree();
        let field = components[0].field();
        for c in &components {
            if c.nvars() != source_dim + 1 {
                return Err(Error::dim(format!(
                    "component in {} variables, source has {}",
                    c.nvars(),
                    source_dim + 1
                )));
            }
            if c.degree() != degree {
                return Err(Error::dim("components must share one degree"));
            }
            if c.field() != field {
                return Err(Error::field_mismatch("components over mixed fields"));
            }
        }
        if components.iter().all(|c| c.is_zero()) {
            return Err(Error::domain("all components vanish identically"));
        }
        let p = Parametrization { source_dim, components, name: name.into() };
        if source_dim == 1 {
            p.validate_curve()?;
        }
        Ok(p)
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    /// Dimension of the target projective space.
    pub fn target_dim(&self) -> usize {
        self.components.len() - 1
    }

    /// Common degree of the component forms.
    pub fn degree(&self) -> usize {
        self.components[0].degree()
    }

    pub fn field(&self) -> Field {
        self.components[0].field()
    }

    pub fn components(&self) -> &[Form] {
        &self.components
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn evaluate(&self, t: &[Scalar]) -> Result<Vec<Scalar>> {
        let image: Vec<Scalar> =
            self.components.iter().map(|c| c.evaluate(t)).collect::<Result<_>>()?;
        if image.iter().all(|x| x.is_zero()) {
            return Err(Error::domain("parameter maps to the zero vector"));
        }
        Ok(image)
    }

    /// Substitute the component forms into `f`: the restriction of `f` to the
    /// image, as a form on the parameter space.
    pub fn pullback(&self, f: &Form) -> Result<Form> {
        f.compose(&self.components)
    }

    /// Exact membership test for curves: `z` lies on the image iff the binary
    /// forms `g_i * z_j - g_j * z_i` share a common zero, i.e. iff their gcd
    /// has positive degree.  Only valid for `source_dim == 1`.
    pub fn contains_point(&self, z: &[Scalar]) -> Result<bool> {
        if self.source_dim != 1 {
            return Err(Error::domain("membership test only implemented for curves"));
        }
        if z.len() != self.components.len() {
            return Err(Error::dim(format!(
                "point has {} coordinates, target has {}",
                z.len(),
                self.components.len()
            )));
        }
        if z.iter().all(|x| x.is_zero()) {
            return Err(Error::domain("zero vector is not a projective point"));
        }
        let mut minors = Vec::new();
        for i in 0..self.components.len() {
            for j in i + 1..self.components.len() {
                let m = self.components[i].scale(&z[j]).sub(&self.components[j].scale(&z[i]))?;
                if !m.is_zero() {
                    minors.push(m);
                }
            }
        }
        // All minors zero would mean the curve is the single point z.
        if minors.is_empty() {
            return Ok(true);
        }
        Ok(binary_gcd_degree(&minors)? > 0)
    }

    fn validate_curve(&self) -> Result<()> {
        let nonzero: Vec<Form> =
            self.components.iter().filter(|c| !c.is_zero()).cloned().collect();
        if binary_gcd_degree(&nonzero)? > 0 {
            return Err(Error::domain(format!(
                "components of {} share a zero: the map has a base point",
                self.name
            )));
        }
        let field = self.field();
        // Spot checks at fixed parameters: distinct images, rank-2 Jacobian.
        let samples: Vec<Vec<Scalar>> = [(1i64, 0i64), (0, 1), (1, 1), (1, -1), (1, 2), (1, 3)]
            .iter()
            .map(|&(a, b)| vec![field.from_i64(a), field.from_i64(b)])
            .collect();
        let mut images = Vec::new();
        for t in &samples {
            let img = self.evaluate(t)?;
            let jac_rows: Vec<Vec<Scalar>> = (0..2)
                .map(|v| {
                    self.components
                        .iter()
                        .map(|c| {
                            let d = c.partial(v);
                            if d.is_zero() {
                                Ok(field.zero())
                            } else {
                                d.evaluate(t)
                            }
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let jac = Matrix::from_rows(field, jac_rows, self.components.len())?;
            if jac.rank() != 2 {
                return Err(Error::domain(format!(
                    "Jacobian of {} drops rank at a sample parameter",
                    self.name
                )));
            }
            images.push(img);
        }
        for i in 0..images.len() {
            for j in i + 1..images.len() {
                if projectively_equal(&images[i], &images[j]) {
                    return Err(Error::domain(format!(
                        "{} identifies two sample parameters",
                        self.name
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Proportionality of nonzero coordinate vectors: all 2x2 minors vanish.
pub fn projectively_equal(a: &[Scalar], b: &[Scalar]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if !(&(&a[i] * &b[j]) - &(&a[j] * &b[i])).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Degree of the gcd of a family of nonzero binary forms.  Zero means the
/// forms have no common zero over any field extension.
pub fn binary_gcd_degree(forms: &[Form]) -> Result<usize> {
    let mut acc: Option<BinaryFactor> = None;
    for f in forms {
        if f.nvars() != 2 {
            return Err(Error::dim("gcd is defined for binary forms"));
        }
        if f.is_zero() {
            continue;
        }
        let fac = BinaryFactor::from_form(f);
        acc = Some(match acc {
            None => fac,
            Some(g) => g.gcd(&fac),
        });
    }
    let g = acc.ok_or_else(|| Error::domain("gcd of an empty or all-zero family"))?;
    Ok(g.degree())
}

/// A binary form split as `s^a * t^b * u(t/s)` with `u` a univariate
/// polynomial with nonzero constant and leading coefficients (coefficients
/// ascending in `t/s`).
struct BinaryFactor {
    s_pow: usize,
    t_pow: usize,
    u: Vec<Scalar>,
    field: Field,
}

impl BinaryFactor {
    fn from_form(f: &Form) -> BinaryFactor {
        let d = f.degree();
        let field = f.field();
        // coeffs[k] multiplies s^(d-k) t^k
        let mut coeffs = vec![field.zero(); d + 1];
        for (m, c) in f.terms() {
            coeffs[m.exps()[1] as usize] = c.clone();
        }
        let t_pow = coeffs.iter().position(|c| !c.is_zero()).expect("nonzero form");
        let last = coeffs.iter().rposition(|c| !c.is_zero()).expect("nonzero form");
        let u = coeffs[t_pow..=last].to_vec();
        BinaryFactor { s_pow: d - last, t_pow, u, field }
    }

    fn degree(&self) -> usize {
        self.s_pow + self.t_pow + (self.u.len() - 1)
    }

    fn gcd(&self, other: &BinaryFactor) -> BinaryFactor {
        BinaryFactor {
            s_pow: self.s_pow.min(other.s_pow),
            t_pow: self.t_pow.min(other.t_pow),
            u: poly_gcd(&self.u, &other.u, self.field),
            field: self.field,
        }
    }
}

/// Monic gcd of univariate polynomials (dense ascending coefficients).
fn poly_gcd(a: &[Scalar], b: &[Scalar], field: Field) -> Vec<Scalar> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    loop {
        trim(&mut b);
        if b.is_empty() {
            trim(&mut a);
            let lead_inv = a.last().expect("gcd of zero polynomials").inv().expect("nonzero lead");
            return a.iter().map(|c| c * &lead_inv).collect();
        }
        let r = poly_rem(&a, &b, field);
        a = b;
        b = r;
    }
}

fn poly_rem(a: &[Scalar], b: &[Scalar], field: Field) -> Vec<Scalar> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = b[db].inv().expect("nonzero divisor lead");
    while r.len() > db {
        let k = r.len() - 1 - db;
        let q = &r[r.len() - 1] * &lead_inv;
        if !q.is_zero() {
            for i in 0..=db {
                r[k + i] = &r[k + i] - &(&q * &b[i]);
            }
        }
        r.pop();
        while r.len() > db && r.last().map_or(false, |c| c.is_zero()) {
            r.pop();
        }
    }
    trim(&mut r);
    let _ = field;
    r
}

fn trim(p: &mut Vec<Scalar>) {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Scalar {
        Field::Q.from_i64(v)
    }

    #[test]
    fn monomial_order_puts_x0_first() {
        let basis = monomial_basis(3, 1);
        let exps: Vec<&[u32]> = basis.iter().map(|m| m.exps()).collect();
        assert_eq!(exps, vec![&[1, 0, 0][..], &[0, 1, 0], &[0, 0, 1]]);

        let basis2 = monomial_basis(2, 3);
        let exps2: Vec<&[u32]> = basis2.iter().map(|m| m.exps()).collect();
        assert_eq!(exps2, vec![&[3, 0][..], &[2, 1], &[1, 2], &[0, 3]]);
    }

    #[test]
    fn basis_size_is_binomial() {
        assert_eq!(monomial_basis(3, 3).len(), 10); // C(5,2)
        assert_eq!(monomial_basis(4, 2).len(), 10); // C(5,3)
        assert_eq!(monomial_basis(4, 5).len(), binomial(8, 3));
    }

    #[test]
    fn arithmetic_cancels_to_zero() {
        let x0x1 = Form::monomial(2, vec![1, 1], q(3)).unwrap();
        let minus = Form::monomial(2, vec![1, 1], q(-3)).unwrap();
        assert!(x0x1.add(&minus).unwrap().is_zero());
        assert_eq!(x0x1.sub(&x0x1).unwrap().num_terms(), 0);
    }

    #[test]
    fn product_of_linear_forms() {
        // (x0 + x1)(x0 - x1) = x0^2 - x1^2
        let a = Form::from_terms(2, 1, Field::Q, [(vec![1, 0], q(1)), (vec![0, 1], q(1))]).unwrap();
        let b = Form::from_terms(2, 1, Field::Q, [(vec![1, 0], q(1)), (vec![0, 1], q(-1))]).unwrap();
        let p = a.mul(&b).unwrap();
        let expect =
            Form::from_terms(2, 2, Field::Q, [(vec![2, 0], q(1)), (vec![0, 2], q(-1))]).unwrap();
        assert_eq!(p, expect);
    }

    #[test]
    fn homogeneity_is_enforced() {
        assert!(Form::from_terms(2, 2, Field::Q, [(vec![1, 0], q(1))]).is_err());
        assert!(Form::from_terms(2, 1, Field::Q, [(vec![1, 0, 0], q(1))]).is_err());
    }

    #[test]
    fn evaluate_rejects_zero_vector() {
        let f = Form::monomial(3, vec![1, 1, 0], q(1)).unwrap();
        assert!(f.evaluate(&[q(0), q(0), q(0)]).is_err());
        assert_eq!(f.evaluate(&[q(2), q(3), q(5)]).unwrap(), q(6));
    }

    #[test]
    fn partial_derivative_and_euler_relation() {
        // f = x0^2 x1, d = 3: sum x_i df/dx_i = 3 f
        let f = Form::monomial(2, vec![2, 1], q(1)).unwrap();
        let mut acc = Form::zero(2, 3, Field::Q);
        for v in 0..2 {
            let xi = Form::monomial(2, { let mut e = vec![0, 0]; e[v] = 1; e }, q(1)).unwrap();
            acc = acc.add(&xi.mul(&f.partial(v)).unwrap()).unwrap();
        }
        assert_eq!(acc, f.scale(&q(3)));
    }

    #[test]
    fn compose_with_veronese_square() {
        // x0*x1 composed with (s^2, t^2) = s^2 t^2
        let f = Form::monomial(2, vec![1, 1], q(1)).unwrap();
        let g = vec![
            Form::monomial(2, vec![2, 0], q(1)).unwrap(),
            Form::monomial(2, vec![0, 2], q(1)).unwrap(),
        ];
        let c = f.compose(&g).unwrap();
        assert_eq!(c, Form::monomial(2, vec![2, 2], q(1)).unwrap());
        assert_eq!(c.degree(), 4);
    }

    #[test]
    fn coeff_vector_round_trip() {
        let f = Form::from_terms(
            3,
            2,
            Field::Q,
            [(vec![2, 0, 0], q(5)), (vec![0, 1, 1], q(-2))],
        )
        .unwrap();
        let v = f.coeff_vector();
        assert_eq!(v.len(), 6);
        let back = Form::from_coeff_vector(3, 2, Field::Q, &v).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn display_is_readable() {
        let f = Form::from_terms(
            3,
            2,
            Field::Q,
            [(vec![2, 0, 0], q(1)), (vec![0, 1, 1], q(-3))],
        )
        .unwrap();
        assert_eq!(format!("{f}"), "x0^2 - 3*x1*x2");
    }

    #[test]
    fn binary_gcd_detects_shared_roots() {
        // (s - t)(s + t) and (s - t)s share exactly (s - t).
        let s = Form::monomial(2, vec![1, 0], q(1)).unwrap();
        let t = Form::monomial(2, vec![0, 1], q(1)).unwrap();
        let smt = s.sub(&t).unwrap();
        let spt = s.add(&t).unwrap();
        let a = smt.mul(&spt).unwrap();
        let b = smt.mul(&s).unwrap();
        assert_eq!(binary_gcd_degree(&[a.clone(), b]).unwrap(), 1);
        assert_eq!(binary_gcd_degree(&[a, s.mul(&t).unwrap()]).unwrap(), 0);
    }

    #[test]
    fn rational_normal_curve_parametrization_validates() {
        let comps = (0..4)
            .map(|i| Form::monomial(2, vec![3 - i, i], q(1)).unwrap())
            .collect::<Vec<_>>();
        let p = Parametrization::new(1, comps, "twisted cubic").unwrap();
        assert_eq!(p.degree(), 3);
        assert_eq!(p.target_dim(), 3);
        assert_eq!(
            p.evaluate(&[q(1), q(2)]).unwrap(),
            vec![q(1), q(2), q(4), q(8)]
        );
        assert!(p.contains_point(&[q(1), q(2), q(4), q(8)]).unwrap());
        assert!(!p.contains_point(&[q(1), q(2), q(4), q(9)]).unwrap());
        assert!(p.contains_point(&[q(0), q(0), q(0), q(1)]).unwrap());
    }

    #[test]
    fn base_point_is_rejected() {
        // (s^2 t, s t^2): common zero at both (1,0) and (0,1).
        let comps = vec![
            Form::monomial(2, vec![2, 1], q(1)).unwrap(),
            Form::monomial(2, vec![1, 2], q(1)).unwrap(),
        ];
        assert!(Parametrization::new(1, comps, "degenerate").is_err());
    }

    #[test]
    fn non_injective_sample_is_rejected() {
        // (s^2, t^2) identifies (1,1) and (1,-1).
        let comps = vec![
            Form::monomial(2, vec![2, 0], q(1)).unwrap(),
            Form::monomial(2, vec![0, 2], q(1)).unwrap(),
        ];
        assert!(Parametrization::new(1, comps, "double cover").is_err());
    }
}
