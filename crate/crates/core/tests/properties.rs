//! Property tests over seeded random structures.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use flab::json::{document_to_file, parse_document, to_canonical, Document};
use flab::lifting::{lift_small, LiftProblem};
use flab::matrix::Matrix;
use flab::pairing::Symmetry;
use flab::random::{random_adapted, random_fl_module, random_invertible, random_paired};
use flab::ring::{make_ring, make_small_surjection, Family, Ring, RingElem};
use flab::simple::{tensor_decompose, SimpleSpec};

fn ring_strategy() -> impl Strategy<Value = Ring> {
    prop_oneof![
        Just((Family::Witt, 5, 1, 1)),
        Just((Family::Witt, 7, 2, 1)),
        Just((Family::Witt, 5, 1, 3)),
        Just((Family::Witt, 3, 2, 2)),
        Just((Family::DualNumbers, 5, 1, 2)),
        Just((Family::DualNumbers, 7, 2, 3)),
    ]
    .prop_map(|(fam, p, f, n)| make_ring(fam, p, f, n).unwrap())
}

fn elem(ring: &Ring, code: u64) -> RingElem {
    ring.element_from_code(code as u128 % ring.size())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn ring_axioms(ring in ring_strategy(), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (x, y, z) = (elem(&ring, a), elem(&ring, b), elem(&ring, c));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x - &x, RingElem::zero(&ring));
        if x.is_unit() {
            prop_assert!((&x * &x.inv().unwrap()).is_one());
        } else {
            prop_assert!(x.inv().is_none());
            prop_assert!(x.valuation() > 0);
        }
    }

    #[test]
    fn frobenius_is_additive_and_multiplicative(ring in ring_strategy(), a in any::<u64>(), b in any::<u64>()) {
        let (x, y) = (elem(&ring, a), elem(&ring, b));
        prop_assert_eq!((&x + &y).frobenius(), &x.frobenius() + &y.frobenius());
        prop_assert_eq!((&x * &y).frobenius(), &x.frobenius() * &y.frobenius());
        prop_assert_eq!(x.frobenius_pow(ring.f()), x);
    }

    #[test]
    fn invertible_matrices_invert(ring in ring_strategy(), seed in any::<u64>(), n in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_invertible(&mut rng, &ring, n);
        let inv = a.inverse().unwrap();
        prop_assert_eq!(a.mul(&inv), Matrix::identity(&ring, n));
        prop_assert_eq!(inv.mul(&a), Matrix::identity(&ring, n));
    }

    #[test]
    fn change_of_basis_preserves_validity(ring in ring_strategy(), seed in any::<u64>(), rank in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fp = ring.f();
        let m = random_fl_module(&mut rng, &ring, fp, rank, ring.p() as i64 - 2);
        m.validate().unwrap();
        let c: Vec<Matrix> = (0..fp).map(|t| random_adapted(&mut rng, &ring, m.weights(t))).collect();
        let m2 = m.change_basis(&c).unwrap();
        prop_assert!(m2.validate().is_ok());
        prop_assert!(m2.is_isomorphic(&m).unwrap());
    }

    #[test]
    fn canonical_json_round_trip(ring in ring_strategy(), seed in any::<u64>(), half in 1usize..3, sign in prop::bool::ANY) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sym = if sign { Symmetry::Symplectic } else { Symmetry::Orthogonal };
        let p = random_paired(&mut rng, &ring, ring.f(), 2 * half, sym, 3).unwrap();
        let doc = Document::Paired(p);
        let text = to_canonical(&document_to_file(&doc));
        let back = parse_document(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(to_canonical(&document_to_file(&back)), text);
    }

    #[test]
    fn small_lift_reduces_back(p in prop::sample::select(vec![5u64, 7, 11]), seed in any::<u64>(),
                               half in 1usize..3, sign in prop::bool::ANY, dual in prop::bool::ANY) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = make_ring(Family::Witt, p, 1, 1).unwrap();
        let sym = if sign { Symmetry::Symplectic } else { Symmetry::Orthogonal };
        let spread = ((p - 2) / 2) as i64;
        prop_assume!(2 * half as i64 - 1 <= spread);
        let base = random_paired(&mut rng, &k, 1, 2 * half, sym, spread).unwrap();
        let fam = if dual { Family::DualNumbers } else { Family::Witt };
        let src = k.at_level(fam, 2).unwrap();
        let prob = LiftProblem::new(base.clone(), make_small_surjection(&src).unwrap()).unwrap();
        let res = lift_small(&prob).unwrap();
        prop_assert!(res.lifted.validate().is_ok());
        prop_assert_eq!(res.lifted.reduce_to(&k).unwrap(), base);
    }

    #[test]
    fn tensor_weights_are_pairwise_sums(i in prop::collection::vec(0i64..4, 1..5),
                                        j in prop::collection::vec(0i64..4, 1..5)) {
        let (Ok(a), Ok(b)) = (SimpleSpec::new(i.clone()), SimpleSpec::new(j.clone())) else {
            return Ok(());
        };
        let d = tensor_decompose(&a, &b);
        let mut sums: Vec<i64> = i.iter().flat_map(|x| j.iter().map(move |y| x + y)).collect();
        sums.sort_unstable();
        prop_assert_eq!(d.weight_multiset(), sums);
        prop_assert_eq!(d.dimension(), i.len() * j.len());
    }
}
