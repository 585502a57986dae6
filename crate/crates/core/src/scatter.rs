//! Scatteredness tests.
//!
//! `f` is scattered of index `ℓ` when `f(y)/y^(q^ℓ) = f(z)/z^(q^ℓ)` forces
//! `y/z ∈ F_q`. Equivalently every `f(x) - m x^(q^ℓ)` has a kernel of
//! `F_q`-dimension at most one. The kernel method counts, for every `m`, the
//! nonzero `x` with `f(x) = m x^(q^ℓ)`; that set is the kernel minus zero, so
//! the kernel has dimension `log_q(count + 1)`.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{max_field_size, Elem, Embedding, Field};
use crate::linpoly::{FamilyFlags, LinearizedPoly, UfSubspace};
use crate::matrix::Matrix;

/// Largest field the pair oracle accepts.
pub const PAIRS_MAX_FIELD: u32 = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Kernel,
    Pairs,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Kernel => "kernel",
            Method::Pairs => "pairs",
        }
    }
}

/// Evidence that a polynomial is not scattered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `f(y)/y^(q^ℓ) = f(z)/z^(q^ℓ) = m` with `y/z ∉ F_q`.
    Pair { y: Elem, z: Elem, m: Elem },
    /// Two `F_q`-independent kernel vectors of `f - m x^(q^ℓ)`.
    Kernel { m: Elem, vectors: [Elem; 2] },
}

impl Witness {
    /// Re-checks the witness by direct evaluation.
    pub fn verify(&self, f: &LinearizedPoly, ell: usize) -> bool {
        let field = f.field();
        let q = f.q();
        let (y, z, m) = match *self {
            Witness::Pair { y, z, m } => (y, z, m),
            Witness::Kernel { m, vectors: [y, z] } => (y, z, m),
        };
        if y.is_zero() || z.is_zero() {
            return false;
        }
        let fits = |x: Elem| f.evaluate(x) == field.mul(m, field.frobenius_unchecked(x, q, ell as u64));
        let ratio = field.div(y, z).unwrap();
        fits(y) && fits(z) && !f.base().contains(ratio)
    }

    pub fn m(&self) -> Elem {
        match *self {
            Witness::Pair { m, .. } | Witness::Kernel { m, .. } => m,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScatterReport {
    pub scattered: bool,
    pub witness: Option<Witness>,
    pub method: Method,
    pub field: String,
    pub size: u32,
    pub ell: usize,
    pub elapsed_ms: u64,
}

fn check_index(f: &LinearizedPoly, ell: usize) -> Result<()> {
    let n = f.n();
    if ell >= n {
        return Err(Error::InvalidIndex { ell, n });
    }
    Ok(())
}

/// `f(x)/x^(q^ℓ)` for every nonzero `x`; entry 0 is unused.
fn quotients(f: &LinearizedPoly, ell: usize) -> Vec<Elem> {
    let field = f.field();
    let values = f.values();
    let n1 = field.size() as u64 - 1;
    let shift = crate::field::pow_mod(f.q(), ell as u64, n1);
    let mut out = vec![Elem::ZERO; field.size() as usize];
    for x in 1..field.size() {
        let fx = values[x as usize];
        if let Some(lf) = field.log(fx) {
            let lx = field.log(Elem(x)).unwrap() as u64;
            out[x as usize] = field.exp(lf as u64 + n1 - lx * shift % n1);
        }
    }
    out
}

/// Kernel method: scattered iff `dim ker(f - m x^(q^ℓ)) ≤ 1` for every `m`.
/// The witness is the smallest failing `m`.
pub fn is_scattered_kernel(f: &LinearizedPoly, ell: usize) -> Result<ScatterReport> {
    check_index(f, ell)?;
    let start = Instant::now();
    let field = f.field();
    let q = f.q() as u32;
    let mut counts = vec![0u32; field.size() as usize];
    for &m in &quotients(f, ell)[1..] {
        counts[m.index()] += 1;
    }
    let witness = match counts.iter().position(|&c| c > q - 1) {
        None => None,
        Some(m) => {
            let m = Elem(m as u32);
            let kernel = f.minus_monomial(m, ell)?.kernel_basis();
            debug_assert!(kernel.len() >= 2);
            Some(Witness::Kernel { m, vectors: [kernel[0], kernel[1]] })
        }
    };
    Ok(ScatterReport {
        scattered: witness.is_none(),
        witness,
        method: Method::Kernel,
        field: field.literal(),
        size: field.size(),
        ell,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Reference oracle: tests every pair `y < z` of nonzero elements directly.
pub fn is_scattered_pairs(f: &LinearizedPoly, ell: usize) -> Result<ScatterReport> {
    check_index(f, ell)?;
    let field = f.field();
    if field.size() > PAIRS_MAX_FIELD {
        return Err(Error::FieldTooLarge { size: field.size() as u128, bound: PAIRS_MAX_FIELD as u64 });
    }
    let start = Instant::now();
    let q = f.base().size();
    let quo = quotients(f, ell);
    let size = field.size();
    let mut witness = None;
    'outer: for y in 1..size {
        for z in y + 1..size {
            if quo[y as usize] == quo[z as usize] && field.div(Elem(y), Elem(z)).unwrap().0 >= q {
                witness = Some(Witness::Pair { y: Elem(y), z: Elem(z), m: quo[y as usize] });
                break 'outer;
            }
        }
    }
    Ok(ScatterReport {
        scattered: witness.is_none(),
        witness,
        method: Method::Pairs,
        field: field.literal(),
        size,
        ell,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

pub fn is_scattered(f: &LinearizedPoly, ell: usize, method: Method) -> Result<ScatterReport> {
    match method {
        Method::Kernel => is_scattered_kernel(f, ell),
        Method::Pairs => is_scattered_pairs(f, ell),
    }
}

#[derive(Clone, Debug)]
pub struct ProbeEntry {
    /// Extension multiplier: the polynomial is tested over `F_(q^(n·m))`.
    pub m: u32,
    pub report: ScatterReport,
    /// Family conditions recomputed in the extension.
    pub flags: Option<FamilyFlags>,
}

#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub entries: Vec<ProbeEntry>,
    pub first_failure: Option<u32>,
    /// Set when a requested extension exceeded the field-size bound.
    pub truncated: bool,
}

/// The field `F_(q^(n·m))` in which `f` is probed, with its level of size `q`.
pub fn extension_of(f: &LinearizedPoly, m: u32) -> Result<(Field, Field)> {
    let base = f.base();
    let tower = f.field().tower();
    let mut chain: Vec<u32> = tower.degrees()[..base.level()].to_vec();
    chain.push(f.n() as u32 * m);
    let ext = Field::new(tower.characteristic() as u64, &chain)?;
    let ext_base = ext.level_field(base.level())?;
    Ok((ext, ext_base))
}

/// `f` with coefficients embedded into `F_(q^(n·m))`; `m = 1` returns `f`.
pub fn lift(f: &LinearizedPoly, m: u32) -> Result<LinearizedPoly> {
    if m == 1 {
        return Ok(f.clone());
    }
    let (ext, ext_base) = extension_of(f, m)?;
    let emb = Embedding::new(f.field(), &ext)?;
    f.embed(&emb, &ext_base)
}

/// Runs the kernel test over `F_(q^(n·m))` for `m = 1..=m_max`. Extensions past
/// the field-size bound are skipped and flagged.
pub fn probe_exceptional(f: &LinearizedPoly, ell: usize, m_max: u32) -> Result<ProbeReport> {
    check_index(f, ell)?;
    if m_max == 0 {
        return Err(Error::InvalidArgument("probe depth must be at least 1".into()));
    }
    let bound = max_field_size() as u128;
    let size = f.field().size() as u128;
    let fits: Vec<u32> = (1..=m_max)
        .take_while(|&m| size.checked_pow(m).is_some_and(|s| s <= bound))
        .collect();
    let truncated = (fits.len() as u32) < m_max;
    let entries = fits
        .par_iter()
        .map(|&m| {
            let g = lift(f, m)?;
            let report = is_scattered_kernel(&g, ell)?;
            Ok(ProbeEntry { m, report, flags: g.family_flags() })
        })
        .collect::<Result<Vec<_>>>()?;
    let first_failure = entries.iter().find(|e| !e.report.scattered).map(|e| e.m);
    Ok(ProbeReport { entries, first_failure, truncated })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UfCheck {
    pub scattered: bool,
    /// Largest `dim(U ∩ S)` over the spread elements.
    pub max_dim: usize,
    /// The first spread element `(a:b)` attaining it.
    pub worst: (Elem, Elem),
}

/// Intersects `U` with every element `{(λa, λb)}` of the Desarguesian spread.
pub fn check_uf_scattered(u: &UfSubspace) -> UfCheck {
    let field = u.field();
    let base = u.base();
    let basis = u.basis();
    let n = basis.len();
    // (x, y) lies on the line through (a, b) iff x·b - y·a = 0
    let points = std::iter::once((Elem::ZERO, Elem::ONE)).chain(field.elements().map(|b| (Elem::ONE, b)));
    let mut best = (0, (Elem::ZERO, Elem::ONE));
    for (a, b) in points {
        let columns: Vec<Vec<Elem>> = basis
            .iter()
            .map(|&(x, y)| field.coords(field.sub(field.mul(x, b), field.mul(y, a)), base))
            .collect();
        let dim = n - Matrix::from_columns(base, &columns).expect("square").rank();
        if dim > best.0 {
            best = (dim, (a, b));
        }
    }
    UfCheck { scattered: best.0 <= 1, max_dim: best.0, worst: best.1 }
}
