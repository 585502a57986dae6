//! Linearized polynomials `f(x) = Σ a_i x^(q^i)` over `F_(q^n)`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{gcd, Elem, Embedding, Field};
use crate::matrix::Matrix;

/// Membership of a polynomial in one of the two known exceptional families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `x^(q^s)`, index 0.
    Pseudoregulus { s: u32 },
    /// `x + δ x^(q^(2s))`, index `s`. When `rescaled` the stored polynomial is
    /// `δ^(-1) x + x^(q^(2s))`.
    Lp { s: u32, delta: Elem, rescaled: bool },
}

/// The conditions attached to a family, evaluated in a specific field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyFlags {
    /// `gcd(s, n) = 1`.
    pub gcd_ok: bool,
    /// `N(δ) ≠ 1`; always true for monomials.
    pub norm_ok: bool,
}

impl FamilyFlags {
    pub fn holds(&self) -> bool {
        self.gcd_ok && self.norm_ok
    }
}

/// The first violated condition of ℓ-normalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizationIssue {
    IndexOutOfRange,
    DegreeTooLarge,
    NotMonic,
    IndexCoefficientNonzero,
    NotSeparable,
}

/// A q-linearized polynomial over `field = F_(q^n)` with `base = F_q` a lower
/// level of the same tower.
#[derive(Clone, PartialEq, Eq)]
pub struct LinearizedPoly {
    field: Field,
    base: Field,
    coeffs: Vec<Elem>,
    family: Option<Family>,
}

impl LinearizedPoly {
    /// Builds `Σ coeffs[i] x^(q^i)`; trailing zeros are dropped.
    pub fn new(field: &Field, base: &Field, mut coeffs: Vec<Elem>) -> Result<LinearizedPoly> {
        if !field.has_sublevel(base) {
            return Err(Error::NoSubfield { from: base.literal(), into: field.literal() });
        }
        if coeffs.iter().any(|&c| !field.contains(c)) {
            return Err(Error::FieldMismatch);
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let n = field.degree_over(base)? as usize;
        if coeffs.len() > n {
            return Err(Error::DegreeTooLarge { degree: coeffs.len() - 1, n });
        }
        Ok(LinearizedPoly { field: field.clone(), base: base.clone(), coeffs, family: None })
    }

    /// `x^(q^s)` with the family tag attached.
    pub fn pseudoregulus(field: &Field, base: &Field, s: u32) -> Result<LinearizedPoly> {
        let n = field.degree_over(base)?;
        if s == 0 || s >= n {
            return Err(Error::InvalidArgument(format!("pseudoregulus needs 1 <= s < n, got s = {s}, n = {n}")));
        }
        let mut coeffs = vec![Elem::ZERO; s as usize + 1];
        coeffs[s as usize] = Elem::ONE;
        let mut f = LinearizedPoly::new(field, base, coeffs)?;
        f.family = Some(Family::Pseudoregulus { s });
        Ok(f)
    }

    /// `x + δ x^(q^(2s))`, or `δ^(-1) x + x^(q^(2s))` when `rescale` is set.
    pub fn lp_binomial(field: &Field, base: &Field, s: u32, delta: Elem, rescale: bool) -> Result<LinearizedPoly> {
        let n = field.degree_over(base)?;
        if s == 0 || 2 * s >= n {
            return Err(Error::InvalidArgument(format!("LP binomial needs 1 <= s and 2s < n, got s = {s}, n = {n}")));
        }
        if delta.is_zero() || !field.contains(delta) {
            return Err(Error::InvalidArgument("LP binomial needs a nonzero δ in the field".into()));
        }
        let mut coeffs = vec![Elem::ZERO; 2 * s as usize + 1];
        if rescale {
            coeffs[0] = field.inv(delta).unwrap();
            coeffs[2 * s as usize] = Elem::ONE;
        } else {
            coeffs[0] = Elem::ONE;
            coeffs[2 * s as usize] = delta;
        }
        let mut f = LinearizedPoly::new(field, base, coeffs)?;
        f.family = Some(Family::Lp { s, delta, rescaled: rescale });
        Ok(f)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn family(&self) -> Option<&Family> {
        self.family.as_ref()
    }

    /// `q = |F_q|`.
    pub fn q(&self) -> u64 {
        self.base.size() as u64
    }

    /// `n = [F_(q^n) : F_q]`.
    pub fn n(&self) -> usize {
        (self.field.prime_degree() / self.base.prime_degree()) as usize
    }

    /// The q-degree, `None` for the zero polynomial.
    pub fn q_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `x^(q^i)` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(Elem::ZERO)
    }

    /// The index declared by the family, if any.
    pub fn declared_index(&self) -> Option<usize> {
        match self.family {
            Some(Family::Pseudoregulus { .. }) => Some(0),
            Some(Family::Lp { s, .. }) => Some(s as usize),
            None => None,
        }
    }

    pub fn evaluate(&self, x: Elem) -> Elem {
        let f = &self.field;
        let q = self.q();
        self.coeffs.iter().enumerate().fold(Elem::ZERO, |acc, (i, &a)| {
            if a.is_zero() {
                acc
            } else {
                f.add(acc, f.mul(a, f.frobenius_unchecked(x, q, i as u64)))
            }
        })
    }

    /// `f(x)` for every `x` in canonical order, built by `F_p`-linearity from the
    /// values at powers of `p`.
    pub fn values(&self) -> Vec<Elem> {
        let f = &self.field;
        let size = f.size() as usize;
        let p = f.characteristic() as usize;
        let mut out = vec![Elem::ZERO; size];
        let mut unit = 1usize;
        while unit < size {
            let v = self.evaluate(Elem(unit as u32));
            // x in [d·unit, (d+1)·unit) is (x - unit) + unit
            for x in unit..(unit * p).min(size) {
                out[x] = f.add(out[x - unit], v);
            }
            unit *= p;
        }
        out
    }

    /// `c · f`.
    pub fn scale(&self, c: Elem) -> LinearizedPoly {
        let coeffs = self.coeffs.iter().map(|&a| self.field.mul(c, a)).collect();
        LinearizedPoly::new(&self.field, &self.base, coeffs).expect("scaling keeps the degree")
    }

    /// `f(x) - m x^(q^ell)`.
    pub fn minus_monomial(&self, m: Elem, ell: usize) -> Result<LinearizedPoly> {
        let n = self.n();
        if ell >= n {
            return Err(Error::InvalidIndex { ell, n });
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(coeffs.len().max(ell + 1), Elem::ZERO);
        coeffs[ell] = self.field.sub(coeffs[ell], m);
        LinearizedPoly::new(&self.field, &self.base, coeffs)
    }

    /// Checks the ℓ-normalization conditions and names the first one violated.
    pub fn normalization(&self, ell: usize) -> std::result::Result<(), NormalizationIssue> {
        let n = self.n();
        if ell >= n {
            return Err(NormalizationIssue::IndexOutOfRange);
        }
        if self.coeffs.len() > n {
            return Err(NormalizationIssue::DegreeTooLarge);
        }
        if self.coeffs.last() != Some(&Elem::ONE) {
            return Err(NormalizationIssue::NotMonic);
        }
        if !self.coeff(ell).is_zero() {
            return Err(NormalizationIssue::IndexCoefficientNonzero);
        }
        if ell > 0 && self.coeff(0).is_zero() {
            return Err(NormalizationIssue::NotSeparable);
        }
        Ok(())
    }

    pub fn is_ell_normalized(&self, ell: usize) -> bool {
        self.normalization(ell).is_ok()
    }

    /// The `n × n` matrix over `F_q` of `x ↦ f(x)` in the monomial basis of the
    /// field over the base level.
    pub fn as_matrix(&self) -> Matrix {
        let basis = self.field.monomial_basis(&self.base);
        let columns: Vec<Vec<Elem>> = basis
            .iter()
            .map(|&b| self.field.coords(self.evaluate(b), &self.base))
            .collect();
        Matrix::from_columns(&self.base, &columns).expect("square coordinate matrix")
    }

    /// `F_q`-dimension of the kernel.
    pub fn kernel_dim(&self) -> usize {
        self.n() - self.as_matrix().rank()
    }

    /// An `F_q`-basis of the kernel, as field elements.
    pub fn kernel_basis(&self) -> Vec<Elem> {
        self.as_matrix()
            .nullspace()
            .iter()
            .map(|v| self.field.from_coords(v, &self.base))
            .collect()
    }

    /// Family conditions recomputed in the current field; `None` for untagged
    /// polynomials.
    pub fn family_flags(&self) -> Option<FamilyFlags> {
        let n = self.n() as u64;
        match self.family {
            Some(Family::Pseudoregulus { s }) => Some(FamilyFlags { gcd_ok: gcd(s as u64, n) == 1, norm_ok: true }),
            Some(Family::Lp { s, rescaled, .. }) => {
                // δ is read back from the coefficients, not the tag
                let delta = if rescaled {
                    self.field.inv(self.coeff(0)).unwrap_or(Elem::ZERO)
                } else {
                    self.coeff(2 * s as usize)
                };
                let norm = self.field.norm(delta, &self.base).expect("base is a sublevel");
                Some(FamilyFlags { gcd_ok: gcd(s as u64, n) == 1, norm_ok: norm != Elem::ONE })
            }
            None => None,
        }
    }

    /// The same polynomial with coefficients pushed through an embedding. The
    /// base of the result is `ext_base`, which must have the size of the current
    /// base and sit below the target field.
    pub fn embed(&self, embedding: &Embedding, ext_base: &Field) -> Result<LinearizedPoly> {
        if embedding.from() != &self.field {
            return Err(Error::FieldMismatch);
        }
        if ext_base.size() != self.base.size() {
            return Err(Error::InvalidArgument("extension base must have the original base size".into()));
        }
        let into = embedding.into_field();
        let coeffs = self.coeffs.iter().map(|&c| embedding.apply(c)).collect();
        let mut g = LinearizedPoly::new(into, ext_base, coeffs)?;
        g.family = match self.family {
            Some(Family::Lp { s, delta, rescaled }) => Some(Family::Lp { s, delta: embedding.apply(delta), rescaled }),
            ref other => other.clone(),
        };
        Ok(g)
    }

    /// Element tuples (prime-field digits) of the coefficients.
    pub fn coefficient_tuples(&self) -> Vec<Vec<u32>> {
        self.coeffs.iter().map(|&c| self.field.digits(c)).collect()
    }
}

impl fmt::Display for LinearizedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let q = self.q();
        let mut terms = Vec::new();
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let power = q.pow(i as u32);
            let mono = if power == 1 { "x".to_string() } else { format!("x^{power}") };
            if a == Elem::ONE {
                terms.push(mono);
            } else {
                let ds: Vec<String> = self.field.digits(a).iter().map(u32::to_string).collect();
                terms.push(format!("[{}]{mono}", ds.join(",")));
            }
        }
        write!(f, "{}", terms.join(" + "))
    }
}

impl fmt::Debug for LinearizedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}/{}", self, self.field.literal(), self.base.literal())
    }
}

/// `U_f = {(x^(q^ℓ), f(x))}` as an `F_q`-subspace of `F_(q^n)²`.
#[derive(Clone, Debug)]
pub struct UfSubspace {
    field: Field,
    base: Field,
    ell: usize,
    basis: Vec<(Elem, Elem)>,
}

impl UfSubspace {
    pub fn new(f: &LinearizedPoly, ell: usize) -> Result<UfSubspace> {
        let n = f.n();
        if ell >= n {
            return Err(Error::InvalidIndex { ell, n });
        }
        let field = f.field();
        let q = f.q();
        let basis = field
            .monomial_basis(f.base())
            .into_iter()
            .map(|x| (field.frobenius_unchecked(x, q, ell as u64), f.evaluate(x)))
            .collect();
        Ok(UfSubspace { field: field.clone(), base: f.base().clone(), ell, basis })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn basis(&self) -> &[(Elem, Elem)] {
        &self.basis
    }

    /// `F_q`-dimension, by row reduction of the basis coordinates.
    pub fn dimension(&self) -> usize {
        let rows: Vec<Vec<Elem>> = self
            .basis
            .iter()
            .map(|&(a, b)| {
                let mut v = self.field.coords(a, &self.base);
                v.extend(self.field.coords(b, &self.base));
                v
            })
            .collect();
        Matrix::from_rows(&self.base, &rows).map_or(0, |m| m.rank())
    }
}
