use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use super::*;
use crate::algebra::{FgAbelianGroup, IntMatrix};
use crate::group::{character_group, FiniteGroup};

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn cyclic_module(m: u64, gen: &IntMatrix) -> GModule {
    let g = FiniteGroup::abelian(&[m]).unwrap();
    let action = (0..m as usize).map(|k| gen.pow(k as u32)).collect();
    GModule::lattice(&g, action).unwrap()
}

fn orders(v: &[i64]) -> FgAbelianGroup {
    FgAbelianGroup::from_cyclic_orders(&ints(v))
}

#[test]
fn differentials_square_to_zero() {
    let g = FiniteGroup::abelian(&[2, 2]).unwrap();
    let m = IntMatrix::from_i64_rows(&[&[-1, 0], &[0, 1]]);
    let n = IntMatrix::from_i64_rows(&[&[1, 0], &[0, -1]]);
    let action = g.elements().map(|e| {
        let c = g.element_key(e);
        let bits: Vec<u32> = c.split(',').map(|s| s.parse().unwrap()).collect();
        &m.pow(bits[0]) * &n.pow(bits[1])
    });
    let module = GModule::lattice(&g, action.collect()).unwrap();
    for k in 0..2 {
        assert!(differentials_compose_to_zero(&module, k).unwrap());
    }
}

#[test]
fn trivial_integer_coefficients() {
    let g = FiniteGroup::abelian(&[2, 3]).unwrap();
    let z = GModule::trivial(&g, 1);
    assert_eq!(cohomology(&z, 0).unwrap().group(), &FgAbelianGroup::free(1));
    assert!(cohomology(&z, 1).unwrap().group().is_trivial());
    assert_eq!(cohomology(&z, 2).unwrap().group(), &orders(&[6]));
    let g = FiniteGroup::abelian(&[2, 2]).unwrap();
    let z = GModule::trivial(&g, 1);
    assert_eq!(cohomology(&z, 2).unwrap().group(), &orders(&[2, 2]));
    assert_eq!(cohomology(&z, 3).unwrap().group(), &orders(&[2]));
}

#[test]
fn sign_action_on_plane() {
    let module = cyclic_module(2, &IntMatrix::from_i64_rows(&[&[-1, 0], &[0, -1]]));
    assert_eq!(cohomology(&module, 1).unwrap().group(), &orders(&[2, 2]));
    assert!(cohomology(&module, 2).unwrap().group().is_trivial());
    assert!(cohomology(&module, 0).unwrap().group().is_trivial());
}

#[test]
fn finite_coefficients() {
    let g = FiniteGroup::abelian(&[2]).unwrap();
    let module = GModule::with_moduli(&g, vec![IntMatrix::identity(1); 2], ints(&[2])).unwrap();
    for n in 0..=3 {
        assert_eq!(cohomology(&module, n).unwrap().group(), &orders(&[2]), "degree {n}");
    }
    let g = FiniteGroup::abelian(&[3]).unwrap();
    let module = GModule::with_moduli(&g, vec![IntMatrix::identity(1); 3], ints(&[2])).unwrap();
    for n in 0..=2 {
        let expected = if n == 0 { orders(&[2]) } else { FgAbelianGroup::trivial() };
        assert_eq!(cohomology(&module, n).unwrap().group(), &expected, "degree {n}");
    }
}

#[test]
fn oracle_examples() {
    let rot = IntMatrix::from_i64_rows(&[&[0, -1], &[1, 0]]);
    let module = cyclic_module(4, &rot);
    let o = cyclic_cohomology_oracle(&module).unwrap();
    assert_eq!(o.h1, orders(&[2]));
    assert!(o.h2.is_trivial());
    let module = cyclic_module(3, &IntMatrix::from_i64_rows(&[&[0, -1], &[1, -1]]));
    let o = cyclic_cohomology_oracle(&module).unwrap();
    assert_eq!(o.h1, orders(&[3]));
    assert!(o.h2.is_trivial());
    for n in 0..=3 {
        assert_eq!(cohomology(&module, n).unwrap().group(), o.degree(n));
    }
}

#[test]
fn oracle_rejects_noncyclic() {
    let g = FiniteGroup::abelian(&[2, 2]).unwrap();
    assert_eq!(cyclic_cohomology_oracle(&GModule::trivial(&g, 1)), Err(CohomologyError::NotCyclic));
}

#[test]
fn routes_agree_with_coordinates() {
    let module = cyclic_module(4, &IntMatrix::from_i64_rows(&[&[0, -1, 0], &[1, 0, 0], &[0, 0, 1]]));
    for n in 1..=2 {
        let fast = cohomology(&module, n).unwrap();
        let slow = cohomology_via_kernel(&module, n).unwrap();
        assert_eq!(fast.group(), slow.group());
        for i in 0..fast.group().num_generators() {
            let c = fast.generator(i).unwrap();
            let again = fast.class_of(&c.representative).unwrap();
            assert_eq!(again.coordinates, c.coordinates);
            assert!(!slow.class_of(&c.representative).unwrap().is_zero());
        }
    }
}

#[test]
fn coboundaries_are_zero_classes() {
    let module = cyclic_module(2, &IntMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]));
    let f = BarCochain::from_fn(&module, 1, |t| ints(&[t[0] as i64 + 1, 3])).unwrap();
    let df = coboundary(&module, &f).unwrap();
    let h = cohomology(&module, 2).unwrap();
    assert!(h.class_of(&df).unwrap().is_zero());
    let h = cohomology_via_kernel(&module, 2).unwrap();
    assert!(h.class_of(&df).unwrap().is_zero());
}

#[test]
fn non_cocycle_is_rejected() {
    let g = FiniteGroup::abelian(&[2]).unwrap();
    let z = GModule::trivial(&g, 1);
    let f = BarCochain::from_fn(&z, 1, |t| ints(&[t[0] as i64 + 1])).unwrap();
    assert_eq!(cohomology(&z, 1).unwrap().class_of(&f).unwrap_err(), CohomologyError::NotACocycle);
}

#[test]
fn size_budget_is_enforced() {
    let g = FiniteGroup::abelian(&[64]).unwrap();
    let z = GModule::trivial(&g, 2);
    assert!(matches!(differential_matrix(&z, 3), Err(CohomologyError::SizeBudget { .. })));
}

#[test]
fn bockstein_is_isomorphism_onto_h2() {
    let g = FiniteGroup::abelian(&[2, 4]).unwrap();
    let z = GModule::trivial(&g, 1);
    let h2 = cohomology(&z, 2).unwrap();
    assert_eq!(h2.group(), &orders(&[2, 4]));
    let chars = character_group(&g).unwrap();
    let classes: Vec<_> = chars.iter().map(|c| h2.class_of(&bockstein(&g, c).unwrap()).unwrap()).collect();
    for (i, a) in classes.iter().enumerate() {
        assert_eq!(a.is_zero(), chars[i].is_trivial());
        for (j, b) in classes.iter().enumerate() {
            let sum = h2.class_of(&bockstein(&g, &chars[i].add(&chars[j])).unwrap()).unwrap();
            assert!(h2.equal(&h2.add(a, b), &sum));
        }
    }
    assert!(h2.image_subgroup(&classes).unwrap().is_everything());
}

#[test]
fn extension_maps() {
    // Z/2 acting by diag(1, -1) with translation 1/2 on the first axis
    let g = FiniteGroup::abelian(&[2]).unwrap();
    let l = IntMatrix::from_i64_rows(&[&[1, 0], &[0, -1]]);
    let module = GModule::lattice(&g, vec![IntMatrix::identity(2), l]).unwrap();
    let lambda = BarCochain::from_fn(&module, 2, |t| ints(&[(t[0] * t[1]) as i64, 0])).unwrap();
    let ext = ExtensionClass::new(&module, lambda).unwrap();
    let psi = pair_with_invariant(&ext, &ints(&[1, 0])).unwrap();
    let z = GModule::trivial(&g, 1);
    let h2 = cohomology(&z, 2).unwrap();
    assert!(!h2.class_of(&psi).unwrap().is_zero());
    assert!(pair_with_invariant(&ext, &ints(&[0, 1])).is_err());

    let dual = module.dual().unwrap();
    let h1 = cohomology(&dual, 1).unwrap();
    assert_eq!(h1.group(), &orders(&[2]));
    let h3 = cohomology(&z, 3).unwrap();
    for i in 0..h1.group().num_generators() {
        let f = h1.generator(i).unwrap();
        let c = cup_with_extension(&ext, &f.representative).unwrap();
        assert!(h3.class_of(&c).is_ok());
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let chi = crate::group::QmodZCharacter::from_values(&g, vec![BigRational::zero(), half]).unwrap();
    assert!(!h2.class_of(&bockstein(&g, &chi).unwrap()).unwrap().is_zero());
}

fn arb_cyclic_action() -> impl Strategy<Value = (u64, IntMatrix)> {
    // block sums of companion matrices of x^m - 1 factors, then conjugated
    let blocks = prop::collection::vec(0usize..5, 1..4);
    (prop::sample::select(vec![2u64, 3, 4, 6]), blocks, prop::collection::vec(-2i64..=2, 0..6)).prop_map(
        |(m, kinds, shear)| {
            let mut parts: Vec<IntMatrix> = Vec::new();
            for k in kinds {
                let b = match (m, k % 3) {
                    (_, 0) => IntMatrix::identity(1),
                    (2, _) | (4, 2) | (6, 2) => IntMatrix::from_i64_rows(&[&[-1]]),
                    (3, _) => IntMatrix::from_i64_rows(&[&[0, -1], &[1, -1]]),
                    (4, _) => IntMatrix::from_i64_rows(&[&[0, -1], &[1, 0]]),
                    _ => IntMatrix::from_i64_rows(&[&[0, -1], &[1, 1]]),
                };
                parts.push(b);
            }
            let n: usize = parts.iter().map(|p| p.rows()).sum();
            let mut a = IntMatrix::zeros(n, n);
            let mut off = 0;
            for p in &parts {
                for i in 0..p.rows() {
                    for j in 0..p.cols() {
                        a.set(off + i, off + j, p.get(i, j).clone());
                    }
                }
                off += p.rows();
            }
            // conjugate by elementary shears
            let mut s = IntMatrix::identity(n);
            let mut s_inv = IntMatrix::identity(n);
            for (idx, x) in shear.iter().enumerate() {
                let (i, j) = (idx % n, (idx + 1) % n);
                if i != j {
                    let mut e = IntMatrix::identity(n);
                    e.set(i, j, BigInt::from(*x));
                    s = &s * &e;
                    let mut e_inv = IntMatrix::identity(n);
                    e_inv.set(i, j, BigInt::from(-*x));
                    s_inv = &e_inv * &s_inv;
                }
            }
            (m, &(&s * &a) * &s_inv)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]
    #[test]
    fn bar_complex_matches_cyclic_oracle((m, a) in arb_cyclic_action()) {
        let module = cyclic_module(m, &a);
        let o = cyclic_cohomology_oracle(&module).unwrap();
        for n in 0..=2 {
            prop_assert_eq!(cohomology_type(&module, n).unwrap(), o.degree(n).clone());
        }
    }
}
