use polarity_core::field::{is_irreducible, prime_power, smallest_irreducible, FieldError};
use polarity_core::{Field, FieldElement};
use proptest::prelude::*;

const ORDERS: [u64; 12] = [2, 3, 4, 5, 7, 8, 9, 11, 16, 25, 27, 32];

fn fields() -> Vec<Field> {
    ORDERS.iter().map(|&q| Field::with_order(q).unwrap()).collect()
}

#[test]
fn small_fields_satisfy_the_axioms_exhaustively() {
    for f in fields().into_iter().filter(|f| f.order() <= 9) {
        let els: Vec<FieldElement> = f.elements().collect();
        for &a in &els {
            assert_eq!(f.add(a, f.neg(a)), FieldElement::ZERO);
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
            }
            for &b in &els {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for &c in &els {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }
}

#[test]
fn multiplicative_group_is_cyclic() {
    for f in fields() {
        let q = f.order();
        let generators = f
            .elements()
            .filter(|&a| f.multiplicative_order(a) == Some(q - 1))
            .count();
        // phi(q - 1) generators
        let phi = (1..q).filter(|&k| gcd(k, q - 1) == 1).count();
        assert_eq!(generators, phi, "q = {q}");
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn frobenius_is_additive_and_has_order_k() {
    for f in fields() {
        let p = f.characteristic() as u64;
        for a in f.elements() {
            for b in f.elements().step_by(3) {
                assert_eq!(
                    f.pow(f.add(a, b), p),
                    f.add(f.pow(a, p), f.pow(b, p))
                );
            }
            assert_eq!(f.pow(a, f.order() as u64), a);
        }
    }
}

#[test]
fn table_multiply_matches_schoolbook() {
    for f in fields() {
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.mul(a, b).index(), f.mul_poly(a.index(), b.index()));
            }
        }
    }
}

#[test]
fn descriptor_round_trips() {
    for f in fields() {
        let g: Field = f.descriptor().parse().unwrap();
        assert_eq!(g.modulus(), f.modulus());
        assert_eq!(g.order(), f.order());
    }
    let f: Field = "3^2:1,0,1".parse().unwrap();
    assert_eq!(f.modulus(), &[1, 0, 1]);
}

#[test]
fn default_moduli_are_irreducible() {
    for (p, k) in [(2, 2), (2, 3), (2, 5), (3, 2), (3, 3), (5, 2), (7, 2)] {
        let m = smallest_irreducible(p, k);
        assert_eq!(m.len(), k as usize + 1);
        assert!(is_irreducible(&m, p));
    }
    assert_eq!(smallest_irreducible(2, 2), vec![1, 1, 1]);
    assert_eq!(smallest_irreducible(3, 2), vec![1, 0, 1]);
}

#[test]
fn construction_errors() {
    assert_eq!(Field::with_order(6).unwrap_err(), FieldError::NotPrimePower(6));
    assert!(Field::new(4, 1, None).is_err());
    assert!(Field::new(2, 0, None).is_err());
    // x^2 + 1 = (x + 1)^2 over GF(2)
    assert!(Field::new(2, 2, Some(vec![1, 0, 1])).is_err());
    assert_eq!(prime_power(1), None);
    assert_eq!(prime_power(49), Some((7, 2)));
}

#[test]
fn distinct_moduli_give_isomorphic_fields() {
    // x^3 + x + 1 and x^3 + x^2 + 1 both define GF(8); count squares and cubes alike
    let a = Field::new(2, 3, Some(vec![1, 1, 0, 1])).unwrap();
    let b = Field::new(2, 3, Some(vec![1, 0, 1, 1])).unwrap();
    let orders = |f: &Field| {
        let mut v: Vec<_> = f.elements().map(|x| f.multiplicative_order(x)).collect();
        v.sort();
        v
    };
    assert_eq!(orders(&a), orders(&b));
}

proptest! {
    #[test]
    fn gf_27_ring_laws(a in 0u32..27, b in 0u32..27, c in 0u32..27) {
        let f = Field::with_order(27).unwrap();
        let (a, b, c) = (FieldElement::from_index(a), FieldElement::from_index(b), FieldElement::from_index(c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if !b.is_zero() {
            prop_assert_eq!(f.mul(f.mul(a, b), f.inv(b).unwrap()), a);
        }
    }

    #[test]
    fn gf_32_pow_is_repeated_mul(a in 0u32..32, e in 0u64..70) {
        let f = Field::with_order(32).unwrap();
        let a = FieldElement::from_index(a);
        let naive = (0..e).fold(FieldElement::ONE, |acc, _| f.mul(acc, a));
        prop_assert_eq!(f.pow(a, e), naive);
    }
}
