//! The natural embedding `GL(n, q^m) → GL(nm, q)` and the matrix constructions
//! that go with it.
//!
//! With `γ` primitive in `F_(q^m)` and `B = (1, γ, …, γ^(m-1))`, an element
//! `a` becomes the `m × m` matrix `φ(a)` of `x ↦ a·x` in the basis `B`. Its
//! `k`-th column is `(γ^k a)_B = C^k (a)_B` where `C` is the companion matrix of
//! the minimal polynomial of `γ`. A matrix `T` over `F_(q^m)` becomes the block
//! matrix `η(T) = (φ(T_ij))`, and `M = diag(M̄, …, M̄)` realizes the Frobenius
//! `x ↦ x^q` coordinate-wise.

use crate::error::{Error, Result};
use crate::field::{prime_power, Elem, Field, FieldTower, Poly};
use crate::matrix::Matrix;

/// An element `v ↦ X · Frob^s(v)` of `ΓL(n, q^m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Semilinear {
    pub matrix: Matrix,
    pub frobenius: u32,
}

#[derive(Clone, Debug)]
pub struct EmbeddingContext {
    q: u64,
    m: u32,
    n: u32,
    fq: Field,
    fqm: Field,
    big: Field,
    gamma: Elem,
    minpoly: Poly,
    companion: Matrix,
    /// Change of coordinates from the monomial basis of `F_(q^m)` to `B`.
    to_b: Matrix,
    /// The basis `B` itself.
    b_elems: Vec<Elem>,
    mbar: Matrix,
}

fn level_of_degree(tower: &std::sync::Arc<FieldTower>, degree: u32) -> Result<Field> {
    (0..tower.num_levels())
        .map(|l| Field::at_level(tower.clone(), l).unwrap())
        .find(|f| f.prime_degree() == degree)
        .ok_or_else(|| Error::InvalidArgument(format!("no level of degree {degree}")))
}

impl EmbeddingContext {
    /// Builds the tower `F_q ⊂ F_(q^m) ⊂ F_(q^(nm))` and the data of the embedding.
    pub fn new(q: u64, m: u32, n: u32) -> Result<EmbeddingContext> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidArgument("m and n must be positive".into()));
        }
        let (p, a) = prime_power(q)?;
        let tower = FieldTower::build(p, &[a, m, n])?;
        let fq = level_of_degree(&tower, a)?;
        let fqm = level_of_degree(&tower, a * m)?;
        let big = level_of_degree(&tower, a * m * n)?;

        let gamma = fqm.primitive_element();
        let minpoly = fqm.min_poly(gamma, &fq)?;
        let companion = companion_matrix(&minpoly)?;
        let b_elems: Vec<Elem> = (0..m as u64).map(|k| fqm.pow(gamma, k)).collect();
        let from_b = Matrix::from_columns(&fq, &b_elems.iter().map(|&b| fqm.coords(b, &fq)).collect::<Vec<_>>())?;
        let to_b = from_b.inverse()?;
        let frob_cols: Vec<Vec<Elem>> = b_elems
            .iter()
            .map(|&b| to_b.mul_vec(&fqm.coords(fqm.pow(b, q), &fq)))
            .collect::<Result<_>>()?;
        let mbar = Matrix::from_columns(&fq, &frob_cols)?;
        Ok(EmbeddingContext { q, m, n, fq, fqm, big, gamma, minpoly, companion, to_b, b_elems, mbar })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `d = nm`.
    pub fn d(&self) -> usize {
        (self.n * self.m) as usize
    }

    /// `F_q`.
    pub fn base_field(&self) -> &Field {
        &self.fq
    }

    /// `F_(q^m)`.
    pub fn mid_field(&self) -> &Field {
        &self.fqm
    }

    /// `F_(q^(nm))`.
    pub fn top_field(&self) -> &Field {
        &self.big
    }

    pub fn gamma(&self) -> Elem {
        self.gamma
    }

    pub fn minpoly(&self) -> &Poly {
        &self.minpoly
    }

    pub fn companion(&self) -> &Matrix {
        &self.companion
    }

    /// `M̄`: the Frobenius of `F_(q^m)` in the basis `B`.
    pub fn mbar(&self) -> &Matrix {
        &self.mbar
    }

    pub fn basis_b(&self) -> &[Elem] {
        &self.b_elems
    }

    /// The basis `A` of `F_(q^(nm))` over `F_(q^m)`.
    pub fn basis_a(&self) -> Vec<Elem> {
        self.big.monomial_basis(&self.fqm)
    }

    /// The basis `C = (α_i γ^j)` of `F_(q^(nm))` over `F_q`, block by block.
    pub fn basis_c(&self) -> Vec<Elem> {
        let mut out = Vec::with_capacity(self.d());
        for alpha in self.basis_a() {
            for &b in &self.b_elems {
                out.push(self.big.mul(alpha, b));
            }
        }
        out
    }

    /// `(a)_B`.
    pub fn coords_b(&self, a: Elem) -> Vec<Elem> {
        self.to_b.mul_vec(&self.fqm.coords(a, &self.fq)).expect("length m")
    }

    /// Inverse of [`EmbeddingContext::coords_b`].
    pub fn from_coords_b(&self, c: &[Elem]) -> Elem {
        c.iter()
            .zip(&self.b_elems)
            .fold(Elem::ZERO, |acc, (&x, &b)| self.fqm.add(acc, self.fqm.mul(x, b)))
    }

    /// `F_q`-coordinates of a vector of `F_(q^m)^n`, block by block.
    pub fn encode(&self, v: &[Elem]) -> Vec<Elem> {
        v.iter().flat_map(|&a| self.coords_b(a)).collect()
    }

    /// Inverse of [`EmbeddingContext::encode`].
    pub fn decode(&self, v: &[Elem]) -> Result<Vec<Elem>> {
        let m = self.m as usize;
        if v.len() % m != 0 {
            return Err(Error::DimensionMismatch(format!("length {} is not a multiple of {m}", v.len())));
        }
        Ok(v.chunks(m).map(|c| self.from_coords_b(c)).collect())
    }

    /// `(v)_C` for an element of `F_(q^(nm))`.
    pub fn coords_c(&self, v: Elem) -> Vec<Elem> {
        self.encode(&self.big.coords(v, &self.fqm))
    }

    pub fn phi(&self, a: Elem) -> Result<Matrix> {
        if !self.fqm.contains(a) {
            return Err(Error::FieldMismatch);
        }
        let cols: Vec<Vec<Elem>> = self.b_elems.iter().map(|&b| self.coords_b(self.fqm.mul(a, b))).collect();
        Matrix::from_columns(&self.fq, &cols)
    }

    pub fn eta(&self, t: &Matrix) -> Result<Matrix> {
        if t.field() != &self.fqm {
            return Err(Error::FieldMismatch);
        }
        if !t.is_square() {
            return Err(Error::DimensionMismatch("η needs a square matrix".into()));
        }
        let blocks = (0..t.rows())
            .map(|i| (0..t.cols()).map(|j| self.phi(t.get(i, j))).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_blocks(&self.fq, &blocks)
    }

    /// `M = diag(M̄, …, M̄)` with `blocks` copies.
    pub fn frobenius_block(&self, blocks: usize) -> Matrix {
        Matrix::block_diagonal(&self.fq, &vec![self.mbar.clone(); blocks])
    }

    /// Entrywise `x ↦ x^(q^s)`; negative `s` is reduced modulo `m`.
    pub fn frobenius_matrix(&self, t: &Matrix, s: i64) -> Matrix {
        let s = s.rem_euclid(self.m as i64) as u64;
        t.map(&self.fqm, |a| self.fqm.frobenius_unchecked(a, self.q, s))
    }

    /// `η(X) · M^s` for the semilinear element `(X, s)`.
    pub fn eta_semilinear(&self, g: &Semilinear) -> Result<Matrix> {
        let mpow = self.frobenius_block(g.matrix.rows()).pow(g.frobenius as u64)?;
        self.eta(&g.matrix)?.mul(&mpow)
    }

    /// `(X, s) ∘ (Y, t) = (X · Frob^s(Y), s + t)`.
    pub fn compose(&self, g: &Semilinear, h: &Semilinear) -> Result<Semilinear> {
        let y = self.frobenius_matrix(&h.matrix, g.frobenius as i64);
        Ok(Semilinear { matrix: g.matrix.mul(&y)?, frobenius: (g.frobenius + h.frobenius) % self.m })
    }

    /// `diag(φ(a), I, …, I) · M = M · diag(φ(a^(q^(m-1))), I, …, I)`.
    pub fn check_commutation(&self, a: Elem) -> Result<bool> {
        let n = self.n as usize;
        let m = self.m as usize;
        let lift = |x: Elem| -> Result<Matrix> {
            let mut blocks = vec![self.phi(x)?];
            blocks.extend(std::iter::repeat_n(Matrix::identity(&self.fq, m), n - 1));
            Ok(Matrix::block_diagonal(&self.fq, &blocks))
        };
        let mm = self.frobenius_block(n);
        let conj = self.fqm.frobenius_unchecked(a, self.q, self.m as u64 - 1);
        Ok(lift(a)?.mul(&mm)? == mm.mul(&lift(conj)?)?)
    }

    /// A matrix over `F_(q^m)` from rows.
    pub fn matrix(&self, rows: &[Vec<Elem>]) -> Result<Matrix> {
        Matrix::from_rows(&self.fqm, rows)
    }
}

/// Companion matrix of a monic polynomial: column `i` is `e_(i+1)` and the last
/// column is `-(c_0, …, c_(m-1))`.
pub fn companion_matrix(poly: &Poly) -> Result<Matrix> {
    if !poly.is_monic() {
        return Err(Error::NotMonic);
    }
    let f = poly.field();
    let c = poly.coeffs();
    let m = c.len() - 1;
    if m == 0 {
        return Err(Error::InvalidArgument("companion matrix of a constant".into()));
    }
    Ok(Matrix::from_fn(f, m, m, |i, j| {
        if j == m - 1 {
            f.neg(c[i])
        } else if i == j + 1 {
            Elem::ONE
        } else {
            Elem::ZERO
        }
    }))
}

/// `H = [[0, I], [-I, 0]]` of size `e`.
pub fn symplectic_form(field: &Field, e: usize) -> Result<Matrix> {
    if e == 0 || e % 2 != 0 {
        return Err(Error::InvalidArgument(format!("symplectic form needs a positive even size, got {e}")));
    }
    let h = e / 2;
    let minus_one = field.neg(Elem::ONE);
    Ok(Matrix::from_fn(field, e, e, |i, j| {
        if i < h && j == i + h {
            Elem::ONE
        } else if i >= h && j + h == i {
            minus_one
        } else {
            Elem::ZERO
        }
    }))
}

/// `ω(x, y) = xᵀ H y`.
pub fn omega(field: &Field, x: &[Elem], y: &[Elem]) -> Elem {
    let h = x.len() / 2;
    (0..h).fold(Elem::ZERO, |acc, i| {
        let t = field.sub(field.mul(x[i], y[i + h]), field.mul(x[i + h], y[i]));
        field.add(acc, t)
    })
}

/// Whether `A` is invertible with `A H Aᵀ = H`.
pub fn is_symplectic(a: &Matrix) -> Result<bool> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("symplectic test needs a square matrix".into()));
    }
    let h = symplectic_form(a.field(), a.rows())?;
    Ok(a.is_invertible() && a.mul(&h)?.mul(&a.transpose())? == h)
}

/// The solution of `ω(c_i, w) = rhs_i` for all constraint vectors `c_i`, with
/// free coordinates set to zero.
fn solve_pairing(field: &Field, e: usize, constraints: &[(&[Elem], Elem)]) -> Option<Vec<Elem>> {
    if constraints.is_empty() {
        return Some(vec![Elem::ZERO; e]);
    }
    let h = e / 2;
    // row for ω(c, ·): coefficient of w_j is (cᵀ H)_j
    let rows: Vec<Vec<Elem>> = constraints
        .iter()
        .map(|(c, _)| (0..e).map(|j| if j < h { field.neg(c[j + h]) } else { c[j - h] }).collect())
        .collect();
    let rhs: Vec<Elem> = constraints.iter().map(|&(_, r)| r).collect();
    Matrix::from_rows(field, &rows).ok()?.solve(&rhs).ok()?
}

/// Extends pairwise `ω`-orthogonal independent vectors `f_1, …, f_r` (`r ≤ e/2`)
/// to a symplectic basis `(u_1, …, u_(e/2), w_1, …, w_(e/2))` with `u_i = f_i`.
/// Returns the matrix with these columns; its Gram matrix is exactly `H`.
pub fn extend_symplectic_basis(field: &Field, vectors: &[Vec<Elem>], e: usize) -> Result<Matrix> {
    if e == 0 || e % 2 != 0 {
        return Err(Error::InvalidArgument(format!("symplectic basis needs a positive even size, got {e}")));
    }
    let h = e / 2;
    if vectors.len() > h {
        return Err(Error::InvalidArgument(format!("at most {h} vectors can be extended, got {}", vectors.len())));
    }
    if vectors.iter().any(|v| v.len() != e) {
        return Err(Error::DimensionMismatch(format!("vectors must have length {e}")));
    }
    if !vectors.is_empty() && Matrix::from_rows(field, vectors)?.rank() < vectors.len() {
        return Err(Error::Dependent);
    }
    for (i, x) in vectors.iter().enumerate() {
        for y in &vectors[i + 1..] {
            if !omega(field, x, y).is_zero() {
                return Err(Error::InvalidArgument("vectors are not pairwise isotropic".into()));
            }
        }
    }

    let mut us: Vec<Vec<Elem>> = vectors.to_vec();
    let mut ws: Vec<Vec<Elem>> = Vec::with_capacity(h);
    let partner = |us: &[Vec<Elem>], ws: &[Vec<Elem>], i: usize| -> Result<Vec<Elem>> {
        let mut cons: Vec<(&[Elem], Elem)> = us
            .iter()
            .enumerate()
            .map(|(j, u)| (u.as_slice(), if j == i { Elem::ONE } else { Elem::ZERO }))
            .collect();
        cons.extend(ws.iter().map(|w| (w.as_slice(), Elem::ZERO)));
        solve_pairing(field, e, &cons).ok_or(Error::Singular)
    };
    for i in 0..us.len() {
        let w = partner(&us, &ws, i)?;
        ws.push(w);
    }
    let mut next_std = 0;
    while us.len() < h {
        let Some(k) = (next_std..e).next() else { return Err(Error::Singular) };
        next_std = k + 1;
        let mut v = vec![Elem::ZERO; e];
        v[k] = Elem::ONE;
        // project onto the ω-complement of the pairs found so far
        let mut proj = v.clone();
        for (u, w) in us.iter().zip(&ws) {
            let a = omega(field, w, &v);
            let b = omega(field, u, &v);
            for j in 0..e {
                proj[j] = field.add(proj[j], field.sub(field.mul(a, u[j]), field.mul(b, w[j])));
            }
        }
        if proj.iter().all(|x| x.is_zero()) {
            continue;
        }
        us.push(proj);
        let w = partner(&us, &ws, us.len() - 1)?;
        ws.push(w);
    }
    let columns: Vec<Vec<Elem>> = us.into_iter().chain(ws).collect();
    Matrix::from_columns(field, &columns)
}

/// An `e × e` matrix whose first two columns are `c1`, `c2` and whose
/// determinant is `det_target`. The remaining columns are standard basis
/// vectors, added in index order while they enlarge the span; the last one is
/// then rescaled.
pub fn sl_complete(field: &Field, c1: &[Elem], c2: &[Elem], e: usize, det_target: Elem) -> Result<Matrix> {
    if e <= 2 {
        return Err(Error::InvalidArgument(format!("column completion needs e > 2, got {e}")));
    }
    if c1.len() != e || c2.len() != e {
        return Err(Error::DimensionMismatch(format!("columns must have length {e}")));
    }
    if det_target.is_zero() {
        return Err(Error::InvalidArgument("target determinant must be nonzero".into()));
    }
    let mut cols = vec![c1.to_vec(), c2.to_vec()];
    if Matrix::from_rows(field, &cols)?.rank() < 2 {
        return Err(Error::Dependent);
    }
    for k in 0..e {
        if cols.len() == e {
            break;
        }
        let mut v = vec![Elem::ZERO; e];
        v[k] = Elem::ONE;
        cols.push(v);
        if Matrix::from_rows(field, &cols)?.rank() < cols.len() {
            cols.pop();
        }
    }
    let mut d = Matrix::from_columns(field, &cols)?;
    let det = d.det()?;
    let scale = field.div(det_target, det)?;
    let last: Vec<Elem> = d.column(e - 1).iter().map(|&x| field.mul(x, scale)).collect();
    d.set_column(e - 1, &last);
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(f: &Field, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
        Matrix::from_fn(f, n, n, |_, _| Elem(rng.gen_range(0..f.size())))
    }

    fn random_invertible(f: &Field, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
        loop {
            let a = random_matrix(f, n, rng);
            if a.is_invertible() {
                return a;
            }
        }
    }

    fn rows(m: &Matrix) -> Vec<Vec<u32>> {
        m.to_rows().iter().map(|r| r.iter().map(|e| e.0).collect()).collect()
    }

    #[test]
    fn companion_examples() {
        let f2 = Field::prime(2).unwrap();
        let p = Poly::new(f2.clone(), vec![Elem(1), Elem(1), Elem(1)]);
        assert_eq!(rows(&companion_matrix(&p).unwrap()), vec![vec![0, 1], vec![1, 1]]);
        let lin = Poly::new(f2.clone(), vec![Elem(1), Elem(1)]);
        assert_eq!(rows(&companion_matrix(&lin).unwrap()), vec![vec![1]]);
        let cubic = Poly::new(f2.clone(), vec![Elem(1), Elem(1), Elem(0), Elem(1)]);
        let c = companion_matrix(&cubic).unwrap();
        assert_eq!(c.column(2), vec![Elem(1), Elem(1), Elem(0)]);
        let f3 = Field::prime(3).unwrap();
        assert_eq!(companion_matrix(&Poly::new(f3, vec![Elem(1), Elem(2)])), Err(Error::NotMonic));
        assert!(companion_matrix(&Poly::new(f2, vec![Elem(1)])).is_err());
    }

    #[test]
    fn companion_characteristic_polynomial() {
        // det(tI - C) at every scalar t equals the polynomial at t
        for (q, m) in [(2u64, 3u32), (3, 2), (2, 4), (5, 2), (4, 2)] {
            let ctx = EmbeddingContext::new(q, m, 1).unwrap();
            let f = ctx.base_field();
            let c = ctx.companion();
            for t in f.elements() {
                let tc = Matrix::scalar(f, m as usize, t).sub(c).unwrap();
                assert_eq!(tc.det().unwrap(), ctx.minpoly().eval(t));
            }
            assert_eq!(ctx.phi(ctx.gamma()).unwrap(), *c);
        }
    }

    #[test]
    fn phi_examples() {
        let ctx = EmbeddingContext::new(2, 2, 2).unwrap();
        let f2 = ctx.base_field();
        assert_eq!(ctx.phi(Elem::ONE).unwrap(), Matrix::identity(f2, 2));
        assert_eq!(ctx.phi(ctx.gamma()).unwrap(), *ctx.companion());
        let g1 = ctx.mid_field().add(ctx.gamma(), Elem::ONE);
        assert_eq!(rows(&ctx.phi(g1).unwrap()), vec![vec![1, 1], vec![1, 0]]);
    }

    #[test]
    fn phi_is_an_injective_ring_homomorphism() {
        for (q, m) in [(2u64, 2u32), (2, 3), (3, 2)] {
            let ctx = EmbeddingContext::new(q, m, 1).unwrap();
            let f = ctx.mid_field();
            let images: Vec<Matrix> = f.elements().map(|a| ctx.phi(a).unwrap()).collect();
            for a in f.elements() {
                for b in f.elements() {
                    let (pa, pb) = (&images[a.index()], &images[b.index()]);
                    assert_eq!(images[f.add(a, b).index()], pa.add(pb).unwrap());
                    assert_eq!(images[f.mul(a, b).index()], pa.mul(pb).unwrap());
                }
            }
            let mut distinct = images.clone();
            distinct.sort_by_key(|m| format!("{m:?}"));
            distinct.dedup();
            assert_eq!(distinct.len(), f.size() as usize);
        }
    }

    #[test]
    fn eta_examples() {
        let ctx = EmbeddingContext::new(2, 2, 2).unwrap();
        let f4 = ctx.mid_field();
        let f2 = ctx.base_field();
        assert_eq!(ctx.eta(&Matrix::identity(f4, 2)).unwrap(), Matrix::identity(f2, 4));
        let dg = Matrix::diagonal(f4, &[ctx.gamma(), Elem::ONE]);
        let expected = Matrix::block_diagonal(f2, &[ctx.companion().clone(), Matrix::identity(f2, 2)]);
        let eta = ctx.eta(&dg).unwrap();
        assert_eq!(eta, expected);
        assert_eq!(eta.sub(&Matrix::identity(f2, 4)).unwrap().rank(), 2);
    }

    #[test]
    fn eta_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for (n, m) in [(2u32, 2u32), (2, 3), (3, 2)] {
            let ctx = EmbeddingContext::new(2, m, n).unwrap();
            let f = ctx.mid_field();
            for _ in 0..100 {
                let t1 = random_matrix(f, n as usize, &mut rng);
                let t2 = random_matrix(f, n as usize, &mut rng);
                let lhs = ctx.eta(&t1.mul(&t2).unwrap()).unwrap();
                assert_eq!(lhs, ctx.eta(&t1).unwrap().mul(&ctx.eta(&t2).unwrap()).unwrap());
                let det = ctx.eta(&t1).unwrap().det().unwrap();
                assert_eq!(det, f.norm(t1.det().unwrap(), ctx.base_field()).unwrap());
                assert_eq!(ctx.eta(&t1).unwrap().is_invertible(), t1.is_invertible());
            }
        }
    }

    #[test]
    fn eta_acts_on_basis_c_coordinates() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for (q, n, m) in [(2u64, 2u32, 2u32), (3, 2, 2), (2, 3, 2)] {
            let ctx = EmbeddingContext::new(q, m, n).unwrap();
            let big = ctx.top_field();
            let c = ctx.basis_c();
            let cm = Matrix::from_columns(ctx.base_field(), &c.iter().map(|&x| big.coords(x, ctx.base_field())).collect::<Vec<_>>()).unwrap();
            assert_eq!(cm.rank(), ctx.d());
            for _ in 0..20 {
                let t = random_matrix(ctx.mid_field(), n as usize, &mut rng);
                let v = Elem(rng.gen_range(0..big.size()));
                let vv = big.coords(v, ctx.mid_field());
                let w = t.mul_vec(&vv).unwrap();
                let wv = big.from_coords(&w, ctx.mid_field());
                assert_eq!(ctx.eta(&t).unwrap().mul_vec(&ctx.coords_c(v)).unwrap(), ctx.coords_c(wv));
                // coordinates over C reproduce v
                let back = ctx.coords_c(v).iter().zip(&c).fold(Elem::ZERO, |acc, (&x, &b)| big.add(acc, big.mul(x, b)));
                assert_eq!(back, v);
            }
        }
    }

    #[test]
    fn frobenius_block_examples() {
        let ctx = EmbeddingContext::new(2, 2, 2).unwrap();
        assert_eq!(rows(ctx.mbar()), vec![vec![1, 1], vec![0, 1]]);
        let f2 = ctx.base_field();
        assert_eq!(ctx.mbar().pow(2).unwrap(), Matrix::identity(f2, 2));
        let mm = ctx.frobenius_block(2);
        assert_eq!(mm, Matrix::block_diagonal(f2, &[ctx.mbar().clone(), ctx.mbar().clone()]));
        for (q, m) in [(2u64, 3u32), (3, 2), (2, 4), (4, 3)] {
            let c = EmbeddingContext::new(q, m, 1).unwrap();
            let mb = c.mbar();
            let order = (1..=m).find(|&k| mb.pow(k as u64).unwrap() == Matrix::identity(c.base_field(), m as usize));
            assert_eq!(order, Some(m));
        }
    }

    #[test]
    fn frobenius_conjugation_identity() {
        // M^j η(X) M^(-j) = η(Frob^j(X))
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let ctx = EmbeddingContext::new(2, 2, 3).unwrap();
        let mm = ctx.frobenius_block(3);
        let minv = mm.inverse().unwrap();
        for _ in 0..20 {
            let x = random_matrix(ctx.mid_field(), 3, &mut rng);
            let lhs = mm.mul(&ctx.eta(&x).unwrap()).unwrap().mul(&minv).unwrap();
            assert_eq!(lhs, ctx.eta(&ctx.frobenius_matrix(&x, 1)).unwrap());
        }
    }

    #[test]
    fn commutation_holds() {
        for (q, m, n) in [(2u64, 2u32, 2u32), (2, 2, 3), (2, 3, 2), (3, 2, 2), (2, 2, 1), (4, 2, 2)] {
            let ctx = EmbeddingContext::new(q, m, n).unwrap();
            for a in ctx.mid_field().nonzero_elements() {
                assert!(ctx.check_commutation(a).unwrap(), "q={q} m={m} n={n} a={a:?}");
            }
        }
    }

    #[test]
    fn semilinear_composition_matches_eta() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let ctx = EmbeddingContext::new(2, 3, 2).unwrap();
        for _ in 0..30 {
            let g = Semilinear { matrix: random_invertible(ctx.mid_field(), 2, &mut rng), frobenius: rng.gen_range(0..3) };
            let h = Semilinear { matrix: random_invertible(ctx.mid_field(), 2, &mut rng), frobenius: rng.gen_range(0..3) };
            let gh = ctx.compose(&g, &h).unwrap();
            let lhs = ctx.eta_semilinear(&gh).unwrap();
            let rhs = ctx.eta_semilinear(&g).unwrap().mul(&ctx.eta_semilinear(&h).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn symplectic_form_examples() {
        let f3 = Field::prime(3).unwrap();
        assert_eq!(rows(&symplectic_form(&f3, 2).unwrap()), vec![vec![0, 1], vec![2, 0]]);
        let f2 = Field::prime(2).unwrap();
        let h4 = symplectic_form(&f2, 4).unwrap();
        assert_eq!(rows(&h4), vec![vec![0, 0, 1, 0], vec![0, 0, 0, 1], vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
        for f in [f2, f3, Field::new(3, &[2]).unwrap()] {
            for e in [2, 4, 6] {
                let h = symplectic_form(&f, e).unwrap();
                assert_eq!(h.mul(&h).unwrap(), Matrix::identity(&f, e).neg());
                assert!(is_symplectic(&h).unwrap());
                assert!(is_symplectic(&Matrix::identity(&f, e)).unwrap());
            }
            assert!(symplectic_form(&f, 3).is_err());
        }
    }

    #[test]
    fn diagonal_symplectic() {
        let f = Field::new(3, &[2]).unwrap();
        for l in f.nonzero_elements() {
            let a = Matrix::diagonal(&f, &[l, f.inv(l).unwrap()]);
            assert!(is_symplectic(&a).unwrap());
        }
        let bad = Matrix::diagonal(&f, &[Elem(2), Elem(1)]);
        assert!(!is_symplectic(&bad).unwrap());
        assert!(is_symplectic(&Matrix::zeros(&f, 2, 3)).is_err());
    }

    #[test]
    fn symplectic_group_is_closed() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let f = Field::new(2, &[2]).unwrap();
        let h = symplectic_form(&f, 4).unwrap();
        let transvection = |rng: &mut ChaCha8Rng| {
            let v: Vec<Elem> = (0..4).map(|_| Elem(rng.gen_range(0..4))).collect();
            let c = Elem(rng.gen_range(0..4));
            let vvt = Matrix::from_fn(&f, 4, 4, |i, j| f.mul(c, f.mul(v[i], v[j])));
            Matrix::identity(&f, 4).add(&vvt.mul(&h).unwrap()).unwrap()
        };
        for _ in 0..50 {
            let a = transvection(&mut rng).mul(&transvection(&mut rng)).unwrap();
            let b = transvection(&mut rng);
            assert!(is_symplectic(&a).unwrap());
            assert!(is_symplectic(&a.mul(&b).unwrap()).unwrap());
            assert!(is_symplectic(&a.inverse().unwrap()).unwrap());
        }
    }

    fn unit(e: usize, k: usize) -> Vec<Elem> {
        let mut v = vec![Elem::ZERO; e];
        v[k] = Elem::ONE;
        v
    }

    #[test]
    fn symplectic_extension_examples() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(extend_symplectic_basis(&f2, &[], 4).unwrap(), Matrix::identity(&f2, 4));
        assert_eq!(extend_symplectic_basis(&f2, &[unit(2, 0)], 2).unwrap(), Matrix::identity(&f2, 2));
        let d = extend_symplectic_basis(&f2, &[unit(4, 0), unit(4, 1)], 4).unwrap();
        let h = symplectic_form(&f2, 4).unwrap();
        assert_eq!(d.transpose().mul(&h).unwrap().mul(&d).unwrap(), h);
        assert_eq!(d, Matrix::identity(&f2, 4));
    }

    #[test]
    fn symplectic_extension_rejects_bad_input() {
        let f3 = Field::prime(3).unwrap();
        assert_eq!(extend_symplectic_basis(&f3, &[unit(4, 0), unit(4, 0)], 4), Err(Error::Dependent));
        assert!(extend_symplectic_basis(&f3, &[unit(4, 0), unit(4, 2)], 4).is_err());
        assert!(extend_symplectic_basis(&f3, &[unit(4, 0)], 3).is_err());
        assert!(extend_symplectic_basis(&f3, &[unit(2, 0), unit(2, 1)], 2).is_err());
    }

    #[test]
    fn symplectic_extension_gram_is_h() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for f in [Field::new(2, &[2]).unwrap(), Field::new(3, &[2]).unwrap(), Field::prime(5).unwrap()] {
            for e in [2usize, 4, 6] {
                let h = symplectic_form(&f, e).unwrap();
                for _ in 0..30 {
                    // random isotropic set: columns of a random symplectic matrix
                    let mut s = Matrix::identity(&f, e);
                    for _ in 0..6 {
                        let v: Vec<Elem> = (0..e).map(|_| Elem(rng.gen_range(0..f.size()))).collect();
                        let c = Elem(rng.gen_range(0..f.size()));
                        let t = Matrix::identity(&f, e)
                            .add(&Matrix::from_fn(&f, e, e, |i, j| f.mul(c, f.mul(v[i], v[j]))).mul(&h).unwrap())
                            .unwrap();
                        s = s.mul(&t).unwrap();
                    }
                    let r = rng.gen_range(0..=e / 2);
                    let given: Vec<Vec<Elem>> = (0..r).map(|i| s.column(i)).collect();
                    let d = extend_symplectic_basis(&f, &given, e).unwrap();
                    assert_eq!(d.transpose().mul(&h).unwrap().mul(&d).unwrap(), h);
                    assert!(is_symplectic(&d).unwrap());
                    for (i, g) in given.iter().enumerate() {
                        assert_eq!(&d.column(i), g);
                    }
                }
            }
        }
    }

    #[test]
    fn sl_complete_examples() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(sl_complete(&f2, &unit(3, 0), &unit(3, 1), 3, Elem::ONE).unwrap(), Matrix::identity(&f2, 3));
        let f3 = Field::prime(3).unwrap();
        let d = sl_complete(&f3, &unit(3, 0), &unit(3, 1), 3, Elem(2)).unwrap();
        assert_eq!(d, Matrix::diagonal(&f3, &[Elem(1), Elem(1), Elem(2)]));
        let f4 = Field::new(2, &[2]).unwrap();
        let g = Elem(2);
        let c1 = vec![g, Elem(0), Elem(0), Elem(0)];
        let c2 = vec![Elem(0), g, Elem(0), Elem(0)];
        let d = sl_complete(&f4, &c1, &c2, 4, Elem::ONE).unwrap();
        assert_eq!(d.det().unwrap(), Elem::ONE);
        assert_eq!(d.column(2), unit(4, 2));
        assert_eq!(d.column(3)[3], f4.inv(f4.mul(g, g)).unwrap());
        assert!(sl_complete(&f4, &c1[..2], &c2[..2], 2, Elem::ONE).is_err());
        assert_eq!(sl_complete(&f4, &c1, &c1, 4, Elem::ONE), Err(Error::Dependent));
    }

    #[test]
    fn sl_complete_hits_the_target() {
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        let f = Field::new(3, &[2]).unwrap();
        for e in 3..6 {
            for _ in 0..40 {
                let c1: Vec<Elem> = (0..e).map(|_| Elem(rng.gen_range(0..9))).collect();
                let c2: Vec<Elem> = (0..e).map(|_| Elem(rng.gen_range(0..9))).collect();
                let t = Elem(rng.gen_range(1..9));
                match sl_complete(&f, &c1, &c2, e, t) {
                    Ok(d) => {
                        assert_eq!(d.det().unwrap(), t);
                        assert_eq!(d.column(0), c1);
                        assert_eq!(d.column(1), c2);
                    }
                    Err(err) => assert_eq!(err, Error::Dependent),
                }
            }
        }
    }
}
