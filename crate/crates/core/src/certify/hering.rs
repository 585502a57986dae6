use serde::Serialize;

use crate::error::Result;
use crate::field::prime_power;

/// `q^d` values of the sporadic transitive groups.
pub const SPORADIC_ORDERS: [u64; 9] = [25, 49, 121, 529, 841, 3481, 16, 81, 729];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HeringTag {
    /// `ΓL(1, q^d)`, the `e = 1` member of the SL family.
    GammaL1,
    Sl,
    Sp,
    G2,
    Sporadic,
}

/// One case of the classification of linear groups transitive on nonzero vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HeringCase {
    pub tag: HeringTag,
    /// Dimension `e` of the natural module, when the case has one.
    pub e: Option<u32>,
    /// Size of the field the group is defined over.
    pub field_size: Option<u64>,
}

/// All cases instantiated for `(q, d)`, in the order `ΓL(1)`, SL by increasing
/// `e`, Sp by increasing `e`, G2, sporadic.
pub fn hering_cases(q: u64, d: u32) -> Result<Vec<HeringCase>> {
    let (p, _) = prime_power(q)?;
    let divisors: Vec<u32> = (1..=d).filter(|e| d % e == 0).collect();
    let size = |e: u32| q.checked_pow(d / e);
    let mut out = Vec::new();
    for &e in &divisors {
        let tag = if e == 1 { HeringTag::GammaL1 } else { HeringTag::Sl };
        out.push(HeringCase { tag, e: Some(e), field_size: size(e) });
    }
    for &e in divisors.iter().filter(|&&e| e % 2 == 0 && e >= 4) {
        out.push(HeringCase { tag: HeringTag::Sp, e: Some(e), field_size: size(e) });
    }
    if p == 2 && d % 6 == 0 {
        out.push(HeringCase { tag: HeringTag::G2, e: Some(6), field_size: 2u64.checked_pow(d / 6) });
    }
    if q.checked_pow(d).is_some_and(|v| SPORADIC_ORDERS.contains(&v)) {
        out.push(HeringCase { tag: HeringTag::Sporadic, e: None, field_size: None });
    }
    Ok(out)
}
