//! Univariate polynomials over one level of a tower. Only what the tower
//! construction and the minimal-polynomial code need.

use std::fmt;

use super::{prime_factors, Elem, Field, LevelRef};

/// A polynomial with coefficients in `field`, lowest degree first, trimmed.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Elem>,
}

impl Poly {
    pub fn new(field: Field, mut coeffs: Vec<Elem>) -> Poly {
        trim(&mut coeffs);
        Poly { field, coeffs }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&Elem::ONE)
    }

    /// Horner evaluation at a point of any field containing the coefficient field.
    pub fn eval_in(&self, field: &Field, x: Elem) -> Elem {
        self.coeffs
            .iter()
            .rev()
            .fold(Elem::ZERO, |acc, &c| field.add(field.mul(acc, x), c))
    }

    pub fn eval(&self, x: Elem) -> Elem {
        self.eval_in(&self.field, x)
    }

    pub fn is_irreducible(&self) -> bool {
        match self.degree() {
            None | Some(0) => false,
            Some(_) => {
                let lead = self.field.inv(*self.coeffs.last().unwrap()).unwrap();
                let monic: Vec<Elem> = self.coeffs.iter().map(|&c| self.field.mul(c, lead)).collect();
                is_irreducible(self.field.arith(), &monic)
            }
        }
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.coeffs.iter().map(|c| c.0.to_string()).collect();
        write!(f, "Poly[{}] over {}", cs.join(","), self.field.literal())
    }
}

fn trim(v: &mut Vec<Elem>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// `a · (t + c)`.
pub(crate) fn mul_linear(f: LevelRef<'_>, a: &[Elem], c: Elem) -> Vec<Elem> {
    let mut out = vec![Elem::ZERO; a.len() + 1];
    for (i, &x) in a.iter().enumerate() {
        out[i + 1] = f.add(out[i + 1], x);
        out[i] = f.add(out[i], f.mul(x, c));
    }
    out
}

fn mul(f: LevelRef<'_>, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Elem::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

/// Remainder of `a` modulo a nonzero `m`.
fn rem(f: LevelRef<'_>, a: &[Elem], m: &[Elem]) -> Vec<Elem> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = f.inv(m[dm]).expect("nonzero leading coefficient");
    while r.len() > dm {
        let k = r.len() - 1;
        let c = f.mul(r[k], lead_inv);
        for i in 0..=dm {
            r[k - dm + i] = f.sub(r[k - dm + i], f.mul(c, m[i]));
        }
        trim(&mut r);
    }
    r
}

fn powmod(f: LevelRef<'_>, base: &[Elem], mut e: u64, m: &[Elem]) -> Vec<Elem> {
    let mut acc = vec![Elem::ONE];
    let mut b = rem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(f, &mul(f, &acc, &b), m);
        }
        e >>= 1;
        if e > 0 {
            b = rem(f, &mul(f, &b, &b), m);
        }
    }
    acc
}

fn gcd(f: LevelRef<'_>, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    x
}

fn sub(f: LevelRef<'_>, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let n = a.len().max(b.len());
    let mut out: Vec<Elem> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(Elem::ZERO);
            let y = b.get(i).copied().unwrap_or(Elem::ZERO);
            f.sub(x, y)
        })
        .collect();
    trim(&mut out);
    out
}

/// Rabin's test for a monic polynomial of degree `d ≥ 1` over a field of size `Q`:
/// `t^(Q^d) ≡ t (mod m)` and `gcd(t^(Q^(d/r)) - t, m) = 1` for every prime `r | d`.
pub(crate) fn is_irreducible(f: LevelRef<'_>, monic: &[Elem]) -> bool {
    let d = monic.len() - 1;
    if d == 1 {
        return true;
    }
    let q = f.size() as u64;
    let t = vec![Elem::ZERO, Elem::ONE];
    let mut frob = Vec::with_capacity(d + 1);
    frob.push(t.clone());
    for i in 1..=d {
        let next = powmod(f, &frob[i - 1], q, monic);
        frob.push(next);
    }
    if frob[d] != t {
        return false;
    }
    prime_factors(d as u64).into_iter().all(|r| {
        let h = sub(f, &frob[d / r as usize], &t);
        gcd(f, &h, monic).len() == 1
    })
}
