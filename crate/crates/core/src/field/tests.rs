use super::*;
use proptest::prelude::*;

fn f(p: u64, chain: &[u32]) -> Field {
    Field::new(p, chain).unwrap()
}

/// Brute-force irreducibility over a prime field: no monic factor of degree
/// `1..=d/2` divides the polynomial. Polynomials are coefficient vectors mod p.
fn brute_irreducible(p: u32, poly: &[u32]) -> bool {
    let d = poly.len() - 1;
    for fd in 1..=d / 2 {
        for code in 0..(p as u64).pow(fd as u32) {
            let mut factor: Vec<u32> = (0..fd).map(|i| ((code / (p as u64).pow(i as u32)) % p as u64) as u32).collect();
            factor.push(1);
            let mut r: Vec<u32> = poly.to_vec();
            while r.len() > fd {
                let c = *r.last().unwrap();
                let k = r.len() - 1;
                for i in 0..=fd {
                    r[k - fd + i] = (r[k - fd + i] + p - (c * factor[i]) % p) % p;
                }
                r.pop();
            }
            if r.iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

#[test]
fn small_field_moduli() {
    let f4 = FieldTower::build(2, &[2]).unwrap();
    assert_eq!(f4.modulus(1), &[Elem(1), Elem(1), Elem(1)]);
    let f3 = FieldTower::build(3, &[1]).unwrap();
    assert_eq!(f3.num_levels(), 1);
    assert_eq!(f3.literal(), "3^[1]");
    let f8 = FieldTower::build(2, &[3]).unwrap();
    assert_eq!(f8.modulus(1), &[Elem(1), Elem(1), Elem(0), Elem(1)]);
    let f9 = FieldTower::build(3, &[2]).unwrap();
    assert_eq!(f9.modulus(1), &[Elem(1), Elem(0), Elem(1)]);
}

#[test]
fn moduli_are_smallest_irreducible() {
    for (p, d) in [(2u32, 3u32), (2, 4), (2, 5), (2, 6), (3, 2), (3, 3), (3, 4), (5, 2), (5, 3), (7, 2)] {
        let tower = FieldTower::build(p as u64, &[d]).unwrap();
        let expected = (0..(p as u64).pow(d))
            .map(|code| {
                let mut v: Vec<u32> = (0..d).map(|i| ((code / (p as u64).pow(i)) % p as u64) as u32).collect();
                v.push(1);
                v
            })
            .find(|v| brute_irreducible(p, v))
            .unwrap();
        let got: Vec<u32> = tower.modulus(1).iter().map(|e| e.0).collect();
        assert_eq!(got, expected, "p={p} d={d}");
    }
}

#[test]
fn tower_level_modulus_has_no_roots_below() {
    // degree-2 and degree-3 moduli over a subfield are irreducible iff rootless
    for (p, chain) in [(3u64, vec![2u32, 2u32]), (2, vec![2, 3]), (2, vec![2, 2]), (2, vec![3, 2])] {
        let top = f(p, &chain);
        let below = top.below();
        let m = Poly::new(below.clone(), top.tower().modulus(top.level()).to_vec());
        assert!(below.elements().all(|x| !m.eval(x).is_zero()));
    }
}

#[test]
fn rejects_bad_inputs() {
    assert_eq!(Field::new(4, &[2]).unwrap_err(), Error::NotPrime(4));
    assert!(matches!(Field::new(2, &[30]), Err(Error::FieldTooLarge { .. })));
    assert!(Field::new(2, &[0]).is_err());
}

#[test]
fn multiplication_examples() {
    let f4 = f(2, &[2]);
    let g = Elem(2);
    assert_eq!(f4.mul(g, f4.add(g, Elem::ONE)), Elem::ONE);
    let f8 = f(2, &[3]);
    // g^3 = g + 1
    assert_eq!(f8.pow(Elem(2), 3), Elem(3));
    assert_eq!(f8.inv(Elem::ZERO), None);
    assert_eq!(f8.div(Elem(1), Elem(0)), Err(Error::DivisionByZero));
}

#[test]
fn frobenius_examples() {
    let f4 = f(2, &[2]);
    let f2 = f4.below();
    assert_eq!(f4.frobenius(Elem(2), &f2, 1).unwrap(), Elem(3));
    assert_eq!(f4.frobenius(Elem(1), &f2, 1).unwrap(), Elem(1));
    let f81 = f(3, &[2, 2]);
    let f9 = f81.below();
    for a in f81.elements() {
        assert_eq!(f81.frobenius(a, &f9, 2).unwrap(), a);
    }
    for a in f9.elements() {
        assert_eq!(f81.frobenius(a, &f9, 1).unwrap(), a);
    }
    let other = f(2, &[3]);
    assert!(f4.frobenius(Elem(1), &other, 1).is_err());
}

#[test]
fn norm_examples() {
    let f4 = f(2, &[2]);
    assert_eq!(f4.norm(Elem(2), &f4.below()).unwrap(), Elem::ONE);
    assert_eq!(f4.norm(Elem::ONE, &f4.below()).unwrap(), Elem::ONE);
    let f9 = f(3, &[2]);
    let g = Elem(3);
    // oracle: repeated multiplication g * g^3
    let g3 = f9.mul(f9.mul(g, g), g);
    assert_eq!(f9.mul(g, g3), Elem::ONE);
    assert_eq!(f9.norm(g, &f9.below()).unwrap(), Elem::ONE);
}

#[test]
fn primitive_elements() {
    assert_eq!(f(2, &[2]).primitive_element(), Elem(2));
    assert_eq!(f(2, &[1]).primitive_element(), Elem(1));
    assert_eq!(f(2, &[3]).primitive_element(), Elem(2));
    // oracle: enumerate powers
    for (p, chain) in [(3u64, vec![2u32]), (2, vec![4]), (5, vec![2]), (3, vec![2, 2]), (2, vec![2, 3])] {
        let field = f(p, &chain);
        let n1 = field.size() as u64 - 1;
        let order = |a: Elem| {
            let mut x = a;
            let mut k = 1;
            while x != Elem::ONE {
                x = field.mul(x, a);
                k += 1;
            }
            k
        };
        let expected = field.nonzero_elements().find(|&a| order(a) == n1).unwrap();
        assert_eq!(field.primitive_element(), expected);
    }
}

#[test]
fn minimal_polynomials() {
    let f4 = f(2, &[2]);
    let f2 = f4.below();
    let g = f4.min_poly(Elem(2), &f2).unwrap();
    assert_eq!(g.coeffs(), &[Elem(1), Elem(1), Elem(1)]);
    let one = f4.min_poly(Elem(1), &f2).unwrap();
    assert_eq!(one.coeffs(), &[Elem(1), Elem(1)]);
    let g1 = f4.min_poly(Elem(3), &f2).unwrap();
    assert_eq!(g1.coeffs(), &[Elem(1), Elem(1), Elem(1)]);
    let f3 = f(3, &[1]);
    assert_eq!(f3.min_poly(Elem(1), &f3).unwrap().coeffs(), &[Elem(2), Elem(1)]);

    for (p, chain) in [(2u64, vec![2u32, 3u32]), (3, vec![2, 2]), (2, vec![6])] {
        let top = f(p, &chain);
        for level in 0..top.level() {
            let sub = top.level_field(level).unwrap();
            for a in top.elements().step_by(7) {
                let mp = top.min_poly(a, &sub).unwrap();
                assert!(mp.is_monic());
                assert!(mp.eval_in(&top, a).is_zero());
                assert!(mp.is_irreducible());
                assert_eq!(top.degree_over(&sub).unwrap() as usize % mp.degree().unwrap(), 0);
            }
        }
    }
}

#[test]
fn digits_round_trip() {
    let f81 = f(3, &[2, 2]);
    let a = Elem(50);
    let d = f81.digits(a);
    assert_eq!(d.len(), 4);
    assert_eq!(f81.from_digits(&d).unwrap(), a);
    assert_eq!(f81.from_digits(&[1, 0, 1]).unwrap(), Elem(10));
    assert!(f81.from_digits(&[3]).is_err());
    assert!(f81.from_digits(&[0, 0, 0, 0, 1]).is_err());
    let f9 = f81.below();
    let c = f81.coords(a, &f9);
    assert_eq!(c.len(), 2);
    assert_eq!(f81.from_coords(&c, &f9), a);
    assert!(f81.elements().all(|x| f9.contains(x) == (f81.coords(x, &f9)[1] == Elem::ZERO)));
}

#[test]
fn felem_checks_fields() {
    let f4 = f(2, &[2]);
    let f8 = f(2, &[3]);
    let a = f4.elem(Elem(2)).unwrap();
    let b = f8.elem(Elem(2)).unwrap();
    assert_eq!(a.mul(&b), Err(Error::FieldMismatch));
    let z = f4.elem(Elem::ZERO).unwrap();
    assert_eq!(z.inv(), Err(Error::DivisionByZero));
    assert_eq!(a.mul(&a.inv().unwrap()).unwrap().value(), Elem::ONE);
    assert_eq!(a.to_string(), "[0,1]");
    assert!(f4.elem(Elem(4)).is_err());
}

#[test]
fn norm_is_multiplicative_and_surjective() {
    for (p, chain) in [(2u64, vec![4u32]), (3, vec![2, 2]), (2, vec![2, 3]), (5, vec![2]), (2, vec![12])] {
        let top = f(p, &chain);
        for level in 0..top.level() {
            let sub = top.level_field(level).unwrap();
            let mut hit = vec![false; sub.size() as usize];
            for a in top.nonzero_elements() {
                let n = top.norm(a, &sub).unwrap();
                assert!(sub.contains(n));
                hit[n.index()] = true;
            }
            assert!(hit[1..].iter().all(|&h| h), "{:?} over level {level}", top);
            for a in top.nonzero_elements().step_by(13) {
                for b in top.nonzero_elements().step_by(17) {
                    let lhs = top.norm(top.mul(a, b), &sub).unwrap();
                    let rhs = sub.mul(top.norm(a, &sub).unwrap(), top.norm(b, &sub).unwrap());
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}

#[test]
fn frobenius_is_an_automorphism_of_the_right_order() {
    for (p, chain) in [(2u64, vec![6u32]), (3, vec![2, 2]), (5, vec![3])] {
        let top = f(p, &chain);
        for level in 0..top.level() {
            let base = top.level_field(level).unwrap();
            let e = top.degree_over(&base).unwrap() as u64;
            let q = base.size() as u64;
            let fr = |a| top.frobenius_unchecked(a, q, 1);
            for a in top.elements().step_by(5) {
                assert_eq!(top.frobenius_unchecked(a, q, e), a);
                for b in top.elements().step_by(11) {
                    assert_eq!(fr(top.add(a, b)), top.add(fr(a), fr(b)));
                    assert_eq!(fr(top.mul(a, b)), top.mul(fr(a), fr(b)));
                }
            }
            // order is exactly e: some element is moved by every smaller power
            let g = top.primitive_element();
            for i in 1..e {
                assert_ne!(top.frobenius_unchecked(g, q, i), g);
            }
        }
    }
}

#[test]
fn embeddings_are_injective_homomorphisms() {
    let cases: Vec<(Field, Field)> = vec![
        (f(2, &[1]), f(2, &[2])),
        (f(2, &[2]), f(2, &[4])),
        (f(2, &[3]), f(2, &[6])),
        (f(2, &[2, 3]), f(2, &[2, 6])),
        (f(3, &[2]), f(3, &[4])),
        (f(3, &[2, 2]), f(3, &[8])),
        (f(2, &[2, 2]), f(2, &[4, 2])),
    ];
    for (from, into) in cases {
        let emb = Embedding::new(&from, &into).unwrap();
        assert_eq!(emb.apply(Elem::ZERO), Elem::ZERO);
        assert_eq!(emb.apply(Elem::ONE), Elem::ONE);
        let mut seen = std::collections::HashSet::new();
        for a in from.elements() {
            assert!(seen.insert(emb.apply(a)));
            for b in from.elements().step_by(3) {
                assert_eq!(emb.apply(from.mul(a, b)), into.mul(emb.apply(a), emb.apply(b)));
                assert_eq!(emb.apply(from.add(a, b)), into.add(emb.apply(a), emb.apply(b)));
            }
        }
    }
    assert!(Embedding::new(&f(2, &[3]), &f(2, &[4])).is_err());
    assert!(Embedding::new(&f(2, &[2]), &f(3, &[2])).is_err());
}

#[test]
fn embedding_chooses_smallest_root_and_fixes_shared_levels() {
    let from = f(2, &[3]);
    let into = f(2, &[6]);
    let emb = Embedding::new(&from, &into).unwrap();
    let m = from.min_poly(from.generator(), &from.below()).unwrap();
    let smallest = into.elements().find(|&x| m.eval_in(&into, x).is_zero()).unwrap();
    assert_eq!(emb.apply(from.generator()), smallest);

    let from = f(3, &[2, 2]);
    let into = f(3, &[2, 4]);
    let emb = Embedding::new(&from, &into).unwrap();
    for a in from.below().elements() {
        assert_eq!(emb.apply(a), a);
    }
}

fn arb_field() -> impl Strategy<Value = Field> {
    prop_oneof![
        Just(f(2, &[8])),
        Just(f(3, &[2, 2])),
        Just(f(5, &[3])),
        Just(f(7, &[2])),
        Just(f(2, &[2, 5])),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(320))]

    #[test]
    fn field_axioms(field in arb_field(), seeds in proptest::collection::vec(any::<u32>(), 48)) {
        let n = field.size();
        for t in seeds.chunks(3) {
            let (a, b, c) = (Elem(t[0] % n), Elem(t[1] % n), Elem(t[2] % n));
            prop_assert_eq!(field.mul(field.mul(a, b), c), field.mul(a, field.mul(b, c)));
            prop_assert_eq!(field.add(field.add(a, b), c), field.add(a, field.add(b, c)));
            prop_assert_eq!(field.mul(a, field.add(b, c)), field.add(field.mul(a, b), field.mul(a, c)));
            prop_assert_eq!(field.mul(a, Elem::ONE), a);
            prop_assert_eq!(field.add(a, field.neg(a)), Elem::ZERO);
            prop_assert_eq!(field.sub(field.add(a, b), b), a);
            if !a.is_zero() {
                prop_assert_eq!(field.mul(a, field.inv(a).unwrap()), Elem::ONE);
            }
            prop_assert_eq!(field.pow(a, field.size() as u64), a);
        }
    }

    #[test]
    fn square_roots(field in arb_field(), seed in any::<u32>()) {
        let a = Elem(seed % field.size());
        let sq = field.mul(a, a);
        let r = field.sqrt(sq).unwrap();
        prop_assert_eq!(field.mul(r, r), sq);
        prop_assert!(field.is_square(sq));
    }
}
