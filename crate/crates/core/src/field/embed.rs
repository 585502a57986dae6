use super::{Elem, Field};
use crate::error::{Error, Result};

/// A field embedding `from ↪ into` between levels of (possibly different) towers
/// over the same prime.
///
/// Levels the two towers share verbatim (same degrees and moduli from the bottom
/// up) are mapped identically. Every further level generator of `from` is sent
/// to the smallest root, in canonical order, of its modulus pushed through the
/// embedding of the level below.
#[derive(Clone, Debug)]
pub struct Embedding {
    from: Field,
    into: Field,
    /// Images of the prime-field monomial basis of `from`.
    images: Vec<Elem>,
}

impl Embedding {
    pub fn new(from: &Field, into: &Field) -> Result<Embedding> {
        if from.characteristic() != into.characteristic()
            || into.prime_degree() % from.prime_degree() != 0
        {
            return Err(Error::NoSubfield { from: from.literal(), into: into.literal() });
        }
        let src = from.tower();
        let dst = into.tower();
        let mut shared = 0;
        while shared < from.level()
            && shared < into.level()
            && src.levels[shared + 1].degree == dst.levels[shared + 1].degree
            && src.levels[shared + 1].modulus == dst.levels[shared + 1].modulus
        {
            shared += 1;
        }

        // Images of the prime-field monomial basis of the current source level.
        let mut images: Vec<Elem> = (0..src.levels[shared].prime_degree)
            .map(|j| Elem(into.characteristic().pow(j)))
            .collect();
        for level in shared + 1..=from.level() {
            let info = &src.levels[level];
            let prev = images.clone();
            let below = from.level_field(level - 1)?;
            let push = |c: Elem| -> Elem { apply(into, &below, &prev, c) };
            let mapped: Vec<Elem> = info.modulus.iter().map(|&c| push(c)).collect();
            // all roots lie in the subfield of size |level|, the powers of g^step
            let step = (into.size() as u64 - 1) / (info.size as u64 - 1);
            let root = (0..info.size as u64 - 1)
                .map(|k| into.exp(k * step))
                .filter(|&x| {
                    mapped
                        .iter()
                        .rev()
                        .fold(Elem::ZERO, |acc, &c| into.add(into.mul(acc, x), c))
                        .is_zero()
                })
                .min()
                .ok_or_else(|| Error::NoSubfield { from: from.literal(), into: into.literal() })?;
            let mut next = Vec::with_capacity(prev.len() * info.degree as usize);
            let mut power = Elem::ONE;
            for _ in 0..info.degree {
                next.extend(prev.iter().map(|&b| into.mul(b, power)));
                power = into.mul(power, root);
            }
            images = next;
        }
        Ok(Embedding { from: from.clone(), into: into.clone(), images })
    }

    pub fn from(&self) -> &Field {
        &self.from
    }

    pub fn into_field(&self) -> &Field {
        &self.into
    }

    /// Image of an element of the source field.
    pub fn apply(&self, a: Elem) -> Elem {
        apply(&self.into, &self.from, &self.images, a)
    }
}

fn apply(into: &Field, from: &Field, images: &[Elem], a: Elem) -> Elem {
    let p = into.characteristic();
    let mut v = a.0;
    let mut acc = Elem::ZERO;
    for &img in images.iter().take(from.prime_degree() as usize) {
        let d = v % p;
        v /= p;
        if d != 0 {
            acc = into.add(acc, into.mul(Elem(d), img));
        }
    }
    acc
}
