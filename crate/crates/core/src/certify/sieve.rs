//! Divisibility sieves on `(q, k, ℓ)` with `d = max(k, ℓ)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{gcd, prime_power};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `k = 0`: the polynomial is a monomial.
    KZero,
    /// `ℓ = 0 < k`.
    EllZero,
    /// `k = ℓ`.
    Equal,
    /// `ℓ < k = d`.
    EllBelowK,
    /// `k < ℓ = d`.
    KBelowEll,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Excluded,
    MonomialBranch,
    Unresolved,
    Survivor,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SieveVerdict {
    pub q: u64,
    pub k: u32,
    pub ell: u32,
    pub d: u32,
    pub branch: Branch,
    /// `(q^max - q^min) / (q^gcd - 1)` for the ΓL(1) sieve.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quantity: Option<u128>,
    /// The bound the quantity must not exceed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<u64>,
    /// `q^(d/2) - 1` for the spread sieve.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub divisor: Option<u128>,
    pub outcome: Outcome,
    /// Set when divisibility passes but the branch is ruled out by the orbit
    /// argument on the `d/2`-spread.
    pub excluded_by_orbit_argument: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<&'static str>,
}

const NOTE_INDEX_ZERO: &str = "index 0: exceptional scattered polynomials of index 0 are monomials";
const NOTE_EQUAL: &str = "k = ell contradicts the vanishing coefficient of x^(q^ell)";

fn power(q: u64, e: u32) -> Result<u128> {
    (q as u128)
        .checked_pow(e)
        .ok_or_else(|| Error::InvalidArgument(format!("{q}^{e} overflows")))
}

fn verdict(q: u64, k: u32, ell: u32, branch: Branch, outcome: Outcome) -> SieveVerdict {
    SieveVerdict {
        q,
        k,
        ell,
        d: k.max(ell),
        branch,
        quantity: None,
        bound: None,
        divisor: None,
        outcome,
        excluded_by_orbit_argument: false,
        note: None,
    }
}

/// Branches shared by both sieves; `None` means the divisibility test applies.
fn boundary(q: u64, k: u32, ell: u32) -> Option<SieveVerdict> {
    if k == 0 {
        return Some(verdict(q, k, ell, Branch::KZero, Outcome::MonomialBranch));
    }
    if ell == 0 {
        let mut v = verdict(q, k, ell, Branch::EllZero, Outcome::MonomialBranch);
        v.note = Some(NOTE_INDEX_ZERO);
        return Some(v);
    }
    if k == ell {
        let mut v = verdict(q, k, ell, Branch::Equal, Outcome::Excluded);
        v.note = Some(NOTE_EQUAL);
        return Some(v);
    }
    None
}

/// The ΓL(1) sieve: `Q = (q^max - q^min)/(q^gcd(k,ℓ) - 1)` must divide an index
/// `i ≤ d`, so `Q > d` excludes the pair.
pub fn gamma_l1_sieve(q: u64, k: u32, ell: u32) -> Result<SieveVerdict> {
    prime_power(q)?;
    if let Some(v) = boundary(q, k, ell) {
        return Ok(v);
    }
    let (hi, lo) = (k.max(ell), k.min(ell));
    let g = gcd(k as u64, ell as u64) as u32;
    let quantity = (power(q, hi)? - power(q, lo)?) / (power(q, g)? - 1);
    let d = hi;
    let branch = if ell < k { Branch::EllBelowK } else { Branch::KBelowEll };
    let outcome = if quantity > d as u128 { Outcome::Excluded } else { Outcome::Unresolved };
    let mut v = verdict(q, k, ell, branch, outcome);
    v.quantity = Some(quantity);
    v.bound = Some(d as u64);
    Ok(v)
}

/// Orbit-size divisibility on a `d/2`-spread. Survivors are exactly
/// `(k, ℓ) = (d, d/2)`.
pub fn spread_constraints(q: u64, k: u32, ell: u32) -> Result<SieveVerdict> {
    prime_power(q)?;
    let d = k.max(ell);
    if d == 0 || d % 2 != 0 {
        return Err(Error::InvalidArgument(format!("spread constraints need even d = max(k, ell), got {d}")));
    }
    if let Some(v) = boundary(q, k, ell) {
        return Ok(v);
    }
    let divisor = power(q, d / 2)? - 1;
    let divides = |x: u128| x % divisor == 0;
    let mut v = if ell == d {
        let mut v = verdict(q, k, ell, Branch::KBelowEll, Outcome::Excluded);
        v.excluded_by_orbit_argument = divides(power(q, k)? - 1);
        v
    } else {
        let ok = divides(power(q, ell)? - 1) && divides(power(q, d)? - power(q, ell)?);
        verdict(q, k, ell, Branch::EllBelowK, if ok { Outcome::Survivor } else { Outcome::Excluded })
    };
    v.divisor = Some(divisor);
    Ok(v)
}
