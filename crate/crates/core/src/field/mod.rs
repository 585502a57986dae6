//! Finite fields and field towers.
//!
//! A [`FieldTower`] is a chain `F_p = L_0 ⊂ L_1 ⊂ … ⊂ L_t` where every level is a
//! simple extension of the one below it, `L_i = L_{i-1}[t]/(m_i(t))`. The modulus
//! of each level is the smallest monic irreducible polynomial over the previous
//! level, so the same `(p, degrees)` always produces the same tower.
//!
//! Elements are packed integers: an element of `L_i` is `Σ c_j · |L_{i-1}|^j`
//! where `c_j ∈ L_{i-1}` is packed the same way. Equivalently the base-`p` digits
//! of the integer are the coordinates over the prime field in the flattened
//! monomial basis. Two consequences are used throughout the crate:
//!
//! * an element of a lower level has the same integer in every higher level, so
//!   inclusion is the identity on [`Elem`];
//! * the base-`|L_b|` digits of an element are its coordinates over `L_b`, and
//!   `x ∈ L_b` iff `x < |L_b|`.
//!
//! Integer order is the canonical order of elements (it is the lexicographic
//! order on coefficient vectors read from the highest degree down).

mod embed;
mod poly;

pub use embed::Embedding;
pub use poly::Poly;

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper bound on field sizes.
pub const DEFAULT_MAX_FIELD_SIZE: u64 = 1 << 24;

static MAX_FIELD_SIZE: AtomicU64 = AtomicU64::new(DEFAULT_MAX_FIELD_SIZE);

/// Current upper bound on the size of constructible fields.
pub fn max_field_size() -> u64 {
    MAX_FIELD_SIZE.load(Ordering::Relaxed)
}

/// Changes the bound on field sizes. Values above `u32::MAX` are clamped.
pub fn set_max_field_size(bound: u64) {
    MAX_FIELD_SIZE.store(bound.min(u32::MAX as u64), Ordering::Relaxed);
}

/// A field element in packed form. Only meaningful together with a [`Field`].
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
    primitive: Elem,
}

struct Level {
    degree: u32,
    modulus: Vec<Elem>,
    size: u32,
    prime_degree: u32,
    tables: OnceLock<Tables>,
}

/// A chain of finite fields with deterministic moduli.
pub struct FieldTower {
    p: u32,
    levels: Vec<Level>,
}

type TowerKey = (u32, Vec<u32>);

fn tower_cache() -> &'static Mutex<HashMap<TowerKey, Arc<FieldTower>>> {
    static CACHE: OnceLock<Mutex<HashMap<TowerKey, Arc<FieldTower>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl FieldTower {
    /// Builds (or fetches from the process-wide cache) the tower over `F_p` with
    /// the given relative degrees. Degrees equal to 1 are dropped, so
    /// `build(3, &[1])` is the prime field `F_3`.
    pub fn build(p: u64, chain: &[u32]) -> Result<Arc<FieldTower>> {
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(Error::NotPrime(p));
        }
        if chain.iter().any(|&d| d == 0) {
            return Err(Error::InvalidArgument("extension degrees must be at least 1".into()));
        }
        let degrees: Vec<u32> = chain.iter().copied().filter(|&d| d > 1).collect();
        let total = degrees
            .iter()
            .fold(1u32, |acc, &d| acc.saturating_mul(d))
            .min(200);
        let size = (p as u128).saturating_pow(total);
        let bound = max_field_size();
        if size > bound as u128 {
            return Err(Error::FieldTooLarge { size, bound });
        }

        let key = (p as u32, degrees.clone());
        if let Some(t) = tower_cache().lock().expect("tower cache poisoned").get(&key) {
            return Ok(Arc::clone(t));
        }

        let mut tower = FieldTower {
            p: p as u32,
            levels: vec![Level {
                degree: 1,
                modulus: Vec::new(),
                size: p as u32,
                prime_degree: 1,
                tables: OnceLock::new(),
            }],
        };
        for &d in &degrees {
            let below = tower.levels.len() - 1;
            let modulus = tower.find_modulus(below, d);
            let prev = &tower.levels[below];
            let level = Level {
                degree: d,
                modulus,
                size: prev.size.pow(d),
                prime_degree: prev.prime_degree * d,
                tables: OnceLock::new(),
            };
            tower.levels.push(level);
        }
        let tower = Arc::new(tower);
        let mut cache = tower_cache().lock().expect("tower cache poisoned");
        Ok(Arc::clone(cache.entry(key).or_insert(tower)))
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    /// Relative degrees of the non-prime levels.
    pub fn degrees(&self) -> Vec<u32> {
        self.levels[1..].iter().map(|l| l.degree).collect()
    }

    /// The literal `p^[d1,d2,...]` describing this tower.
    pub fn literal(&self) -> String {
        let ds: Vec<String> = self.degrees().iter().map(u32::to_string).collect();
        if ds.is_empty() {
            format!("{}^[1]", self.p)
        } else {
            format!("{}^[{}]", self.p, ds.join(","))
        }
    }

    /// Modulus of `level` over `level - 1`, low degree first, monic.
    pub fn modulus(&self, level: usize) -> &[Elem] {
        &self.levels[level].modulus
    }

    fn find_modulus(&self, below: usize, degree: u32) -> Vec<Elem> {
        let base = LevelRef { tower: self, level: below };
        let s = self.levels[below].size as u64;
        let count = s.pow(degree);
        for code in 0..count {
            let mut c = code;
            let mut coeffs = Vec::with_capacity(degree as usize + 1);
            for _ in 0..degree {
                coeffs.push(Elem((c % s) as u32));
                c /= s;
            }
            if coeffs[0].is_zero() {
                continue;
            }
            coeffs.push(Elem::ONE);
            if poly::is_irreducible(base, &coeffs) {
                return coeffs;
            }
        }
        unreachable!("no irreducible polynomial of degree {degree} over a field of size {s}")
    }

    fn tables(&self, level: usize) -> &Tables {
        self.levels[level]
            .tables
            .get_or_init(|| LevelRef { tower: self, level }.build_tables())
    }
}

impl PartialEq for FieldTower {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.levels.len() == other.levels.len()
            && self
                .levels
                .iter()
                .zip(&other.levels)
                .all(|(a, b)| a.degree == b.degree && a.modulus == b.modulus)
    }
}

impl Eq for FieldTower {}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldTower({})", self.literal())
    }
}

/// Arithmetic on one level of a tower, usable while the tower is being built.
#[derive(Clone, Copy)]
pub(crate) struct LevelRef<'a> {
    tower: &'a FieldTower,
    level: usize,
}

impl<'a> LevelRef<'a> {
    #[inline]
    fn info(&self) -> &'a Level {
        &self.tower.levels[self.level]
    }

    #[inline]
    pub(crate) fn size(&self) -> u32 {
        self.info().size
    }

    #[inline]
    pub(crate) fn add(&self, a: Elem, b: Elem) -> Elem {
        add_digits(self.tower.p, a, b)
    }

    #[inline]
    pub(crate) fn sub(&self, a: Elem, b: Elem) -> Elem {
        add_digits(self.tower.p, a, neg_digits(self.tower.p, b))
    }

    #[inline]
    pub(crate) fn neg(&self, a: Elem) -> Elem {
        neg_digits(self.tower.p, a)
    }

    #[inline]
    pub(crate) fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        let t = self.tower.tables(self.level);
        let n1 = t.exp.len() as u32;
        let mut s = t.log[a.index()] + t.log[b.index()];
        if s >= n1 {
            s -= n1;
        }
        Elem(t.exp[s as usize])
    }

    #[inline]
    pub(crate) fn inv(&self, a: Elem) -> Option<Elem> {
        if a.is_zero() {
            return None;
        }
        let t = self.tower.tables(self.level);
        let n1 = t.exp.len() as u32;
        let l = t.log[a.index()];
        Some(Elem(t.exp[((n1 - l) % n1) as usize]))
    }

    pub(crate) fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        let t = self.tower.tables(self.level);
        let n1 = t.exp.len() as u64;
        let l = t.log[a.index()] as u64;
        Elem(t.exp[((l * (e % n1)) % n1) as usize])
    }

    fn slow_mul(&self, a: Elem, b: Elem) -> Elem {
        if self.level == 0 {
            let p = self.tower.p as u64;
            return Elem(((a.0 as u64 * b.0 as u64) % p) as u32);
        }
        let info = self.info();
        let below = LevelRef { tower: self.tower, level: self.level - 1 };
        let s = below.size();
        let d = info.degree as usize;
        let ac = split(a, s, d);
        let bc = split(b, s, d);
        let mut prod = vec![Elem::ZERO; 2 * d - 1];
        for (i, &x) in ac.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in bc.iter().enumerate() {
                prod[i + j] = below.add(prod[i + j], below.mul(x, y));
            }
        }
        for k in (d..2 * d - 1).rev() {
            let c = prod[k];
            if c.is_zero() {
                continue;
            }
            for i in 0..d {
                let m = info.modulus[i];
                prod[k - d + i] = below.sub(prod[k - d + i], below.mul(c, m));
            }
        }
        join(&prod[..d], s)
    }

    fn slow_pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = Elem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            base = self.slow_mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplication by the level generator `t`.
    fn mul_by_generator(&self, a: Elem) -> Elem {
        let info = self.info();
        let below = LevelRef { tower: self.tower, level: self.level - 1 };
        let s = below.size();
        let d = info.degree as usize;
        let c = split(a, s, d);
        let top = c[d - 1];
        let mut out = vec![Elem::ZERO; d];
        for i in 0..d {
            let shifted = if i == 0 { Elem::ZERO } else { c[i - 1] };
            out[i] = below.sub(shifted, below.mul(top, info.modulus[i]));
        }
        join(&out, s)
    }

    fn build_tables(&self) -> Tables {
        let n = self.size();
        let n1 = n - 1;
        let factors = prime_factors(n1 as u64);
        let primitive = (1..n)
            .map(Elem)
            .find(|&a| {
                factors
                    .iter()
                    .all(|&r| self.slow_pow(a, n1 as u64 / r) != Elem::ONE)
            })
            .expect("multiplicative group of a finite field is cyclic");
        let generator = if self.level == 0 {
            None
        } else {
            Some(Elem(self.tower.levels[self.level - 1].size))
        };
        let mut exp = vec![0u32; n1 as usize];
        let mut log = vec![0u32; n as usize];
        let mut x = Elem::ONE;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = x.0;
            log[x.index()] = i as u32;
            x = if generator == Some(primitive) {
                self.mul_by_generator(x)
            } else {
                self.slow_mul(x, primitive)
            };
        }
        debug_assert_eq!(x, Elem::ONE);
        Tables { exp, log, primitive }
    }
}

#[inline]
fn add_digits(p: u32, a: Elem, b: Elem) -> Elem {
    if p == 2 {
        return Elem(a.0 ^ b.0);
    }
    let (mut x, mut y) = (a.0, b.0);
    let mut out = 0u32;
    let mut place = 1u32;
    while x != 0 || y != 0 {
        let mut d = x % p + y % p;
        if d >= p {
            d -= p;
        }
        out += d * place;
        x /= p;
        y /= p;
        place = place.wrapping_mul(p);
    }
    Elem(out)
}

#[inline]
fn neg_digits(p: u32, a: Elem) -> Elem {
    if p == 2 {
        return a;
    }
    let mut x = a.0;
    let mut out = 0u32;
    let mut place = 1u32;
    while x != 0 {
        let d = x % p;
        if d != 0 {
            out += (p - d) * place;
        }
        x /= p;
        place = place.wrapping_mul(p);
    }
    Elem(out)
}

fn split(a: Elem, s: u32, d: usize) -> Vec<Elem> {
    let mut v = a.0;
    (0..d)
        .map(|_| {
            let c = v % s;
            v /= s;
            Elem(c)
        })
        .collect()
}

fn join(coeffs: &[Elem], s: u32) -> Elem {
    Elem(coeffs.iter().rev().fold(0u32, |acc, c| acc * s + c.0))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits a prime power `q = p^a` into `(p, a)`.
pub fn prime_power(q: u64) -> Result<(u64, u32)> {
    let fs = prime_factors(q);
    if q < 2 || fs.len() != 1 {
        return Err(Error::NotPrimePower(q));
    }
    let p = fs[0];
    let mut a = 0;
    let mut r = q;
    while r > 1 {
        r /= p;
        a += 1;
    }
    Ok((p, a))
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// One level of a [`FieldTower`], viewed as a field in its own right.
#[derive(Clone)]
pub struct Field {
    tower: Arc<FieldTower>,
    level: usize,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.level == other.level
            && (Arc::ptr_eq(&self.tower, &other.tower) || *self.tower == *other.tower)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({}, level {})", self.tower.literal(), self.level)
    }
}

impl Field {
    /// Top level of the tower `p^[chain]`.
    pub fn new(p: u64, chain: &[u32]) -> Result<Field> {
        let tower = FieldTower::build(p, chain)?;
        let level = tower.num_levels() - 1;
        Ok(Field { tower, level })
    }

    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Field> {
        Field::new(p, &[])
    }

    pub fn at_level(tower: Arc<FieldTower>, level: usize) -> Result<Field> {
        if level >= tower.num_levels() {
            return Err(Error::InvalidLevel { level, levels: tower.num_levels() });
        }
        Ok(Field { tower, level })
    }

    /// Another level of the same tower.
    pub fn level_field(&self, level: usize) -> Result<Field> {
        Field::at_level(Arc::clone(&self.tower), level)
    }

    /// The level directly below this one (the prime field maps to itself).
    pub fn below(&self) -> Field {
        Field { tower: Arc::clone(&self.tower), level: self.level.saturating_sub(1) }
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn level(&self) -> usize {
        self.level
    }

    #[inline]
    pub(crate) fn arith(&self) -> LevelRef<'_> {
        LevelRef { tower: &self.tower, level: self.level }
    }

    pub fn characteristic(&self) -> u32 {
        self.tower.p
    }

    #[inline]
    pub fn size(&self) -> u32 {
        self.tower.levels[self.level].size
    }

    /// Degree over the prime field.
    pub fn prime_degree(&self) -> u32 {
        self.tower.levels[self.level].prime_degree
    }

    /// Literal of the tower truncated at this level.
    pub fn literal(&self) -> String {
        let ds: Vec<String> = self.tower.levels[1..=self.level]
            .iter()
            .map(|l| l.degree.to_string())
            .collect();
        if ds.is_empty() {
            format!("{}^[1]", self.tower.p)
        } else {
            format!("{}^[{}]", self.tower.p, ds.join(","))
        }
    }

    /// Whether `sub` is a level of the same tower at or below this one.
    pub fn has_sublevel(&self, sub: &Field) -> bool {
        sub.level <= self.level
            && (Arc::ptr_eq(&self.tower, &sub.tower) || *self.tower == *sub.tower)
    }

    /// Degree of this field over a lower level of the same tower.
    pub fn degree_over(&self, sub: &Field) -> Result<u32> {
        if !self.has_sublevel(sub) {
            return Err(Error::InvalidLevel { level: sub.level, levels: self.level + 1 });
        }
        Ok(self.prime_degree() / sub.prime_degree())
    }

    #[inline]
    pub fn contains(&self, a: Elem) -> bool {
        a.0 < self.size()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.size()).map(Elem)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (1..self.size()).map(Elem)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.arith().add(a, b)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.arith().sub(a, b)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.arith().neg(a)
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.arith().mul(a, b)
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        self.arith().inv(a)
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        let bi = self.inv(b).ok_or(Error::DivisionByZero)?;
        Ok(self.mul(a, bi))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        self.arith().pow(a, e)
    }

    /// Multiplication by an integer (repeated addition).
    pub fn scale_int(&self, a: Elem, k: u64) -> Elem {
        let k = (k % self.characteristic() as u64) as u32;
        self.mul(a, Elem(k))
    }

    /// Discrete logarithm with respect to [`Field::primitive_element`].
    #[inline]
    pub fn log(&self, a: Elem) -> Option<u32> {
        if a.is_zero() {
            None
        } else {
            Some(self.tower.tables(self.level).log[a.index()])
        }
    }

    /// `γ^i` for the primitive element `γ`.
    #[inline]
    pub fn exp(&self, i: u64) -> Elem {
        let t = self.tower.tables(self.level);
        Elem(t.exp[(i % t.exp.len() as u64) as usize])
    }

    /// Smallest element (in canonical order) of multiplicative order `|F| - 1`.
    pub fn primitive_element(&self) -> Elem {
        self.tower.tables(self.level).primitive
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: Elem) -> Option<u64> {
        let l = self.log(a)? as u64;
        let n1 = self.size() as u64 - 1;
        Some(n1 / gcd(l, n1))
    }

    /// The generator `t` of this level over the level below (1 for the prime field).
    pub fn generator(&self) -> Elem {
        if self.level == 0 {
            Elem::ONE
        } else {
            Elem(self.tower.levels[self.level - 1].size)
        }
    }

    /// `a^(|base|^i)`: the `i`-th power of the Frobenius automorphism over `base`.
    pub fn frobenius(&self, a: Elem, base: &Field, i: u64) -> Result<Elem> {
        if !self.has_sublevel(base) {
            return Err(Error::InvalidLevel { level: base.level, levels: self.level + 1 });
        }
        Ok(self.frobenius_unchecked(a, base.size() as u64, i))
    }

    /// `a^(q^i)` where `q` is the size of some subfield.
    #[inline]
    pub fn frobenius_unchecked(&self, a: Elem, q: u64, i: u64) -> Elem {
        if a.is_zero() {
            return a;
        }
        let n1 = self.size() as u64 - 1;
        let e = pow_mod(q, i, n1);
        self.pow(a, if e == 0 { n1 } else { e })
    }

    /// Relative norm `Π_{i<e} a^(Q^i)` down to the lower level `sub` of size `Q`.
    pub fn norm(&self, a: Elem, sub: &Field) -> Result<Elem> {
        let e = self.degree_over(sub)? as u64;
        let q = sub.size() as u64;
        let mut acc = Elem::ONE;
        for i in 0..e {
            acc = self.mul(acc, self.frobenius_unchecked(a, q, i));
        }
        Ok(acc)
    }

    /// Relative trace `Σ_{i<e} a^(Q^i)` down to the lower level `sub`.
    pub fn trace(&self, a: Elem, sub: &Field) -> Result<Elem> {
        let e = self.degree_over(sub)? as u64;
        let q = sub.size() as u64;
        let mut acc = Elem::ZERO;
        for i in 0..e {
            acc = self.add(acc, self.frobenius_unchecked(a, q, i));
        }
        Ok(acc)
    }

    /// Whether a nonzero element is a square.
    pub fn is_square(&self, a: Elem) -> bool {
        match self.log(a) {
            None => true,
            Some(l) => self.characteristic() == 2 || l % 2 == 0,
        }
    }

    /// Canonical square root: the smaller (in canonical order) of the roots.
    pub fn sqrt(&self, a: Elem) -> Option<Elem> {
        let Some(l) = self.log(a) else { return Some(Elem::ZERO) };
        let n1 = self.size() as u64 - 1;
        if self.characteristic() == 2 {
            // n1 is odd, so 2 is invertible modulo n1.
            let half = (n1 + 1) / 2;
            return Some(self.exp(l as u64 * half));
        }
        if l % 2 != 0 {
            return None;
        }
        let r = self.exp(l as u64 / 2);
        Some(r.min(self.neg(r)))
    }

    /// Minimal polynomial of `a` over the lower level `sub`.
    pub fn min_poly(&self, a: Elem, sub: &Field) -> Result<Poly> {
        if !self.has_sublevel(sub) {
            return Err(Error::InvalidLevel { level: sub.level, levels: self.level + 1 });
        }
        let q = sub.size() as u64;
        let mut conjugates = vec![a];
        loop {
            let next = self.frobenius_unchecked(*conjugates.last().unwrap(), q, 1);
            if next == a {
                break;
            }
            conjugates.push(next);
        }
        let mut coeffs = vec![Elem::ONE];
        for c in conjugates {
            coeffs = poly::mul_linear(self.arith(), &coeffs, self.neg(c));
        }
        debug_assert!(coeffs.iter().all(|&c| sub.contains(c)));
        Ok(Poly::new(sub.clone(), coeffs))
    }

    /// Base-`p` digits of an element, lowest first, padded to the prime degree.
    pub fn digits(&self, a: Elem) -> Vec<u32> {
        let p = self.characteristic();
        let mut v = a.0;
        (0..self.prime_degree())
            .map(|_| {
                let d = v % p;
                v /= p;
                d
            })
            .collect()
    }

    /// Inverse of [`Field::digits`]; shorter inputs are zero-padded.
    pub fn from_digits(&self, digits: &[u32]) -> Result<Elem> {
        let p = self.characteristic();
        if digits.len() > self.prime_degree() as usize {
            return Err(Error::InvalidArgument(format!(
                "element tuple has {} coordinates, field {} has degree {}",
                digits.len(),
                self.literal(),
                self.prime_degree()
            )));
        }
        if let Some(&d) = digits.iter().find(|&&d| d >= p) {
            return Err(Error::InvalidArgument(format!("coordinate {d} is not reduced modulo {p}")));
        }
        Ok(Elem(digits.iter().rev().fold(0u32, |acc, &d| acc * p + d)))
    }

    /// Coordinates over a lower level in the tower's monomial basis.
    pub fn coords(&self, a: Elem, base: &Field) -> Vec<Elem> {
        let s = base.size();
        let n = self.prime_degree() / base.prime_degree();
        split(a, s, n as usize)
    }

    /// Inverse of [`Field::coords`].
    pub fn from_coords(&self, coords: &[Elem], base: &Field) -> Elem {
        join(coords, base.size())
    }

    /// The monomial basis over a lower level: `coords` of its `j`-th member is `e_j`.
    pub fn monomial_basis(&self, base: &Field) -> Vec<Elem> {
        let s = base.size();
        let n = self.prime_degree() / base.prime_degree();
        (0..n).map(|j| Elem(s.pow(j))).collect()
    }

    pub fn elem(&self, a: Elem) -> Result<FElem> {
        if !self.contains(a) {
            return Err(Error::FieldMismatch);
        }
        Ok(FElem { field: self.clone(), value: a })
    }
}

pub(crate) fn pow_mod(base: u64, exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = base as u128 % m;
    let mut e = exp;
    let mut acc = 1u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc as u64
}

/// An element together with the field it lives in. All binary operations
/// check that both operands come from the same field.
#[derive(Clone, PartialEq, Eq)]
pub struct FElem {
    field: Field,
    value: Elem,
}

impl FElem {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> Elem {
        self.value
    }

    fn check(&self, other: &FElem) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    fn wrap(&self, value: Elem) -> FElem {
        FElem { field: self.field.clone(), value }
    }

    pub fn add(&self, other: &FElem) -> Result<FElem> {
        self.check(other)?;
        Ok(self.wrap(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &FElem) -> Result<FElem> {
        self.check(other)?;
        Ok(self.wrap(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &FElem) -> Result<FElem> {
        self.check(other)?;
        Ok(self.wrap(self.field.mul(self.value, other.value)))
    }

    pub fn div(&self, other: &FElem) -> Result<FElem> {
        self.check(other)?;
        Ok(self.wrap(self.field.div(self.value, other.value)?))
    }

    pub fn inv(&self) -> Result<FElem> {
        Ok(self.wrap(self.field.inv(self.value).ok_or(Error::DivisionByZero)?))
    }

    pub fn neg(&self) -> FElem {
        self.wrap(self.field.neg(self.value))
    }

    pub fn pow(&self, e: u64) -> FElem {
        self.wrap(self.field.pow(self.value, e))
    }

    pub fn frobenius(&self, base: &Field, i: u64) -> Result<FElem> {
        Ok(self.wrap(self.field.frobenius(self.value, base, i)?))
    }

    pub fn norm(&self, sub: &Field) -> Result<FElem> {
        let v = self.field.norm(self.value, sub)?;
        Ok(FElem { field: sub.clone(), value: v })
    }
}

impl fmt::Display for FElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ds: Vec<String> = self.field.digits(self.value).iter().map(u32::to_string).collect();
        write!(f, "[{}]", ds.join(","))
    }
}

impl fmt::Debug for FElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.field.literal())
    }
}

#[cfg(test)]
mod tests;
