//! Case enumeration, rank certificates and arithmetic sieves.
//!
//! A rank certificate exhibits, for a given semilinear element `g`, a companion
//! `h` from the relevant classical group such that `η(h∘g) - I_d` (or
//! `η(g∘h) - I_d`) has rank below `d - 1`.

mod hering;
mod sieve;

pub use hering::{hering_cases, HeringCase, HeringTag, SPORADIC_ORDERS};
pub use sieve::{gamma_l1_sieve, spread_constraints, Branch, Outcome, SieveVerdict};

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matgroup::{extend_symplectic_basis, is_symplectic, sl_complete, symplectic_form, EmbeddingContext, Semilinear};
use crate::matrix::Matrix;

/// `rank(A - I_d) < d - 1`.
pub fn fm_rank_criterion(a: &Matrix, d: usize) -> Result<bool> {
    if a.rows() != d || a.cols() != d {
        return Err(Error::DimensionMismatch(format!("expected a {d}x{d} matrix, got {}x{}", a.rows(), a.cols())));
    }
    Ok(a.sub(&Matrix::identity(a.field(), d))?.rank() + 1 < d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    Sl,
    Sp,
}

#[derive(Clone, Debug)]
pub struct RankCertificate {
    pub kind: CertificateKind,
    pub q: u64,
    pub e: usize,
    pub d: usize,
    /// The element being certified.
    pub input: Semilinear,
    /// `α ∈ SL(e, q^(d/e))` or `B ∈ Sp(e, q^(d/e))`.
    pub companion: Matrix,
    /// `α∘γ` (SL) or `M∘B` (Sp).
    pub product: Semilinear,
    /// For Sp: the symplectic basis `D̃` the companion was built from.
    pub symplectic_basis: Option<Matrix>,
    /// `rank(η(product) - I_d)`.
    pub rank: usize,
    /// The bound established by the construction: `d - 2` or `d - e/2`.
    pub bound: usize,
}

impl RankCertificate {
    /// Recomputes the product, its image under `η`, and the rank from the stored
    /// parts, and checks the group membership of the companion.
    pub fn verify(&self, ctx: &EmbeddingContext) -> Result<bool> {
        let companion = Semilinear { matrix: self.companion.clone(), frobenius: 0 };
        let (product, member) = match self.kind {
            CertificateKind::Sl => {
                (ctx.compose(&companion, &self.input)?, self.companion.det()? == Elem::ONE)
            }
            CertificateKind::Sp => (ctx.compose(&self.input, &companion)?, is_symplectic(&self.companion)?),
        };
        if product != self.product || !member {
            return Ok(false);
        }
        let eta = ctx.eta_semilinear(&product)?;
        let rank = eta.sub(&Matrix::identity(ctx.base_field(), self.d))?.rank();
        Ok(rank == self.rank && rank <= self.bound && fm_rank_criterion(&eta, self.d)?)
    }
}

fn eta_rank(ctx: &EmbeddingContext, g: &Semilinear) -> Result<usize> {
    Ok(ctx.eta_semilinear(g)?.sub(&Matrix::identity(ctx.base_field(), ctx.d()))?.rank())
}

/// For `γ = (β, j)` in `ΓL(e, q^m)` with `e = ctx.n() > 2`, builds `α ∈ SL(e, q^m)`
/// with `rank(η(α∘γ) - I_d) ≤ d - 2`. `j` is reduced modulo `m`.
pub fn sl_certificate(ctx: &EmbeddingContext, beta: &Matrix, j: i64) -> Result<RankCertificate> {
    let e = ctx.n() as usize;
    let m = ctx.m() as usize;
    if e <= 2 {
        return Err(Error::InvalidArgument(format!("SL certificates need e > 2, got {e}")));
    }
    if beta.field() != ctx.mid_field() || beta.rows() != e || !beta.is_square() {
        return Err(Error::DimensionMismatch(format!("β must be {e}x{e} over {}", ctx.mid_field().literal())));
    }
    if !beta.is_invertible() {
        return Err(Error::Singular);
    }
    let j = j.rem_euclid(m as i64) as u32;
    let fqm = ctx.mid_field();

    // η(αβ)M^j = M^j η(Frob^(-j)(αβ)), so the first two columns of
    // D = Frob^(-j)(αβ) must decode the columns 1 and m+1 of M^(-j).
    let mm = ctx.frobenius_block(e);
    let minv = mm.inverse()?.pow(j as u64)?;
    let c1 = ctx.decode(&minv.column(0))?;
    let c2 = ctx.decode(&minv.column(m))?;
    let beta_bar = ctx.frobenius_matrix(beta, -(j as i64));
    let d = sl_complete(fqm, &c1, &c2, e, beta_bar.det()?)?;
    let alpha_bar = d.mul(&beta_bar.inverse()?)?;
    let alpha = ctx.frobenius_matrix(&alpha_bar, j as i64);

    let input = Semilinear { matrix: beta.clone(), frobenius: j };
    let product = ctx.compose(&Semilinear { matrix: alpha.clone(), frobenius: 0 }, &input)?;
    let rank = eta_rank(ctx, &product)?;
    Ok(RankCertificate {
        kind: CertificateKind::Sl,
        q: ctx.q(),
        e,
        d: ctx.d(),
        input,
        companion: alpha,
        product,
        symplectic_basis: None,
        rank,
        bound: ctx.d() - 2,
    })
}

/// The factor `R` of an element of `Aut_q(Sp)`: the identity or
/// `R_(a^(q^i)) = diag(I, a^(q^i) I)` for the fixed nonsquare `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RPart {
    One,
    Nonsquare { i: u32 },
}

/// `R ∘ σ ∘ S_α ∘ A` with `σ = Frob^s`, `S_α` scalar and `A ∈ Sp(e, q^m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpElement {
    pub r: RPart,
    pub frobenius: u32,
    pub scalar: Elem,
    pub a: Matrix,
}

/// Smallest nonsquare in canonical order; `None` in characteristic 2.
pub fn fixed_nonsquare(field: &Field) -> Option<Elem> {
    field.nonzero_elements().find(|&x| !field.is_square(x))
}

fn r_diagonal(ctx: &EmbeddingContext, r: RPart, e: usize) -> Result<Vec<Elem>> {
    let fqm = ctx.mid_field();
    let a = match r {
        RPart::One => Elem::ONE,
        RPart::Nonsquare { i } => {
            let a = fixed_nonsquare(fqm)
                .ok_or_else(|| Error::InvalidArgument("every element is a square in characteristic 2".into()))?;
            fqm.frobenius_unchecked(a, ctx.q(), i as u64)
        }
    };
    Ok((0..e).map(|k| if k < e / 2 { Elem::ONE } else { a }).collect())
}

/// The element `D = R ∘ σ ∘ S_α` as `(R·α^(q^s), s)`.
fn sp_outer(ctx: &EmbeddingContext, el: &SpElement, e: usize) -> Result<Semilinear> {
    let fqm = ctx.mid_field();
    let c = fqm.frobenius_unchecked(el.scalar, ctx.q(), el.frobenius as u64);
    let diag: Vec<Elem> = r_diagonal(ctx, el.r, e)?.iter().map(|&x| fqm.mul(x, c)).collect();
    Ok(Semilinear { matrix: Matrix::diagonal(fqm, &diag), frobenius: el.frobenius % ctx.m() })
}

fn check_sp_element(ctx: &EmbeddingContext, el: &SpElement) -> Result<usize> {
    let e = el.a.rows();
    if el.a.field() != ctx.mid_field() || !el.a.is_square() || e % 2 != 0 {
        return Err(Error::DimensionMismatch("A must be a square matrix of even size over the middle field".into()));
    }
    if el.scalar.is_zero() || !ctx.mid_field().contains(el.scalar) {
        return Err(Error::InvalidArgument("the scalar must be a nonzero element".into()));
    }
    if !is_symplectic(&el.a)? {
        return Err(Error::InvalidArgument("A is not symplectic".into()));
    }
    Ok(e)
}

/// `R ∘ σ ∘ S_α ∘ A` as the semilinear element `(R·α^(q^s)·Frob^s(A), s)`.
pub fn aut_sp_compose(ctx: &EmbeddingContext, el: &SpElement) -> Result<Semilinear> {
    let e = check_sp_element(ctx, el)?;
    let outer = sp_outer(ctx, el, e)?;
    ctx.compose(&outer, &Semilinear { matrix: el.a.clone(), frobenius: 0 })
}

/// Splits `(X, s)` back into `R ∘ σ ∘ S_α ∘ A` with `R ∈ {I, R_a}` and the
/// scalar `α` the smaller of `±α` in canonical order.
pub fn aut_sp_decompose(ctx: &EmbeddingContext, g: &Semilinear) -> Result<SpElement> {
    let fqm = ctx.mid_field();
    let x = &g.matrix;
    let e = x.rows();
    let h = symplectic_form(fqm, e)?;
    if x.field() != fqm || !x.is_square() {
        return Err(Error::DimensionMismatch("element must be square over the middle field".into()));
    }
    let s = g.frobenius % ctx.m();
    // X H Xᵀ = μ H with μ = c² for R = I and μ = c²·a for R = R_a
    let gram = x.mul(&h)?.mul(&x.transpose())?;
    let mu = gram.get(0, e / 2);
    if mu.is_zero() || gram != h.scale(mu) {
        return Err(Error::InvalidArgument("element does not normalize the symplectic form".into()));
    }
    let (r, c2) = if fqm.is_square(mu) {
        (RPart::One, mu)
    } else {
        let a = fixed_nonsquare(fqm).expect("odd characteristic");
        (RPart::Nonsquare { i: 0 }, fqm.div(mu, a)?)
    };
    let c = fqm.sqrt(c2).expect("square by construction");
    let alpha = fqm.frobenius_unchecked(c, ctx.q(), (ctx.m() - s) as u64 % ctx.m() as u64);
    let alpha = alpha.min(fqm.neg(alpha));
    let c = fqm.frobenius_unchecked(alpha, ctx.q(), s as u64);
    let rc: Vec<Elem> = r_diagonal(ctx, r, e)?.iter().map(|&v| fqm.inv(fqm.mul(v, c)).unwrap()).collect();
    let inner = Matrix::diagonal(fqm, &rc).mul(x)?;
    let a = ctx.frobenius_matrix(&inner, -(s as i64));
    let el = SpElement { r, frobenius: s, scalar: alpha, a };
    check_sp_element(ctx, &el)?;
    Ok(el)
}

/// For `M = D∘A` in `Aut_q(Sp(e, q^m))` with `e = ctx.n()` even and at least
/// 4, builds `B ∈ Sp(e, q^m)` with `rank(η(M∘B) - I_d) ≤ d - e/2`.
pub fn sp_certificate(ctx: &EmbeddingContext, el: &SpElement) -> Result<RankCertificate> {
    let e = ctx.n() as usize;
    let m = ctx.m() as usize;
    if e % 2 != 0 || e < 4 {
        return Err(Error::InvalidArgument(format!("Sp certificates need even e >= 4, got {e}")));
    }
    if check_sp_element(ctx, el)? != e {
        return Err(Error::DimensionMismatch(format!("A must be {e}x{e}")));
    }
    let input = aut_sp_compose(ctx, el)?;
    let outer = sp_outer(ctx, el, e)?;
    let eta_inv = ctx.eta_semilinear(&outer)?.inverse()?;
    let fs: Vec<Vec<Elem>> = (0..e / 2)
        .map(|i| ctx.decode(&eta_inv.column(i * m)))
        .collect::<Result<_>>()?;
    let basis = extend_symplectic_basis(ctx.mid_field(), &fs, e)?;
    let b = el.a.inverse()?.mul(&basis)?;
    let product = ctx.compose(&input, &Semilinear { matrix: b.clone(), frobenius: 0 })?;
    let rank = eta_rank(ctx, &product)?;
    Ok(RankCertificate {
        kind: CertificateKind::Sp,
        q: ctx.q(),
        e,
        d: ctx.d(),
        input,
        companion: b,
        product,
        symplectic_basis: Some(basis),
        rank,
        bound: ctx.d() - e / 2,
    })
}

/// A uniformly random invertible `e × e` matrix over `field`.
pub fn random_invertible<R: Rng + ?Sized>(field: &Field, e: usize, rng: &mut R) -> Matrix {
    loop {
        let a = Matrix::from_fn(field, e, e, |_, _| Elem(rng.gen_range(0..field.size())));
        if a.is_invertible() {
            return a;
        }
    }
}

/// A random product of `2e` symplectic transvections `I + c·v·vᵀ·H`.
pub fn random_symplectic<R: Rng + ?Sized>(field: &Field, e: usize, rng: &mut R) -> Result<Matrix> {
    let h = symplectic_form(field, e)?;
    let mut acc = Matrix::identity(field, e);
    for _ in 0..2 * e {
        let v: Vec<Elem> = (0..e).map(|_| Elem(rng.gen_range(0..field.size()))).collect();
        let c = Elem(rng.gen_range(0..field.size()));
        let vvt = Matrix::from_fn(field, e, e, |i, j| field.mul(c, field.mul(v[i], v[j])));
        acc = acc.mul(&Matrix::identity(field, e).add(&vvt.mul(&h)?)?)?;
    }
    Ok(acc)
}

/// A random element in canonical form (`i = 0`, canonical scalar).
pub fn random_sp_element<R: Rng + ?Sized>(ctx: &EmbeddingContext, rng: &mut R) -> Result<SpElement> {
    let fqm = ctx.mid_field();
    let e = ctx.n() as usize;
    let r = if fixed_nonsquare(fqm).is_some() && rng.gen_bool(0.5) { RPart::Nonsquare { i: 0 } } else { RPart::One };
    let frobenius = rng.gen_range(0..ctx.m());
    let s = Elem(rng.gen_range(1..fqm.size()));
    let scalar = s.min(fqm.neg(s));
    let a = random_symplectic(fqm, e, rng)?;
    Ok(SpElement { r, frobenius, scalar, a })
}

/// A random `(β, j)` with `β ∈ GL(e, q^m)` and `0 ≤ j < m`.
pub fn random_gl_element<R: Rng + ?Sized>(ctx: &EmbeddingContext, rng: &mut R) -> (Matrix, i64) {
    let beta = random_invertible(ctx.mid_field(), ctx.n() as usize, rng);
    (beta, rng.gen_range(0..ctx.m() as i64))
}
