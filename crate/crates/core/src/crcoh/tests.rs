use super::*;
use crate::gkm::catalog::{affine, catalog, list_catalog};
use crate::groups::FiniteGroup;
use crate::qfield::parse_ratfunc;
use num::Zero;

fn rf(s: &str, nvars: usize) -> RatFunc {
    parse_ratfunc(s, nvars).unwrap()
}

fn idx(v: &str, c: usize) -> InertiaIndex {
    InertiaIndex::new(v, c)
}

/// Chart on the quaternion group: two independent index-two characters.
fn q8_chart() -> StackyGKMGraph {
    let q8 = FiniteGroup::quaternion8();
    let mut ki = vec![Rat::zero(); 8];
    let mut kj = vec![Rat::zero(); 8];
    for x in [4usize, 5, 6, 7] {
        ki[x] = rat(1, 2);
    }
    for x in [2usize, 3, 6, 7] {
        kj[x] = rat(1, 2);
    }
    let chi_i = Character::new(&q8, ki).unwrap();
    let chi_j = Character::new(&q8, kj).unwrap();
    affine(
        "AffineQ8",
        q8,
        vec![(chi_i, Weight(vec![rat(1, 1), rat(0, 1)])), (chi_j, Weight(vec![rat(0, 1), rat(1, 1)]))],
    )
    .unwrap()
}

#[test]
fn ages_match_hand_computations() {
    let g = catalog("AffineZ2").unwrap();
    assert_eq!(age(&g, "v", 0), rat(0, 1));
    assert_eq!(age(&g, "v", 1), rat(1, 1));

    let g = catalog("AffineZ3").unwrap();
    assert_eq!(age(&g, "v", 1), rat(1, 1));
    assert_eq!(age(&g, "v", 2), rat(2, 1));

    // Two sign-twisted directions, so a transposition has age 1 while a
    // rotation acts trivially.
    let g = catalog("AffineS3").unwrap();
    assert_eq!(age(&g, "v", 0), rat(0, 1));
    assert_eq!(age(&g, "v", 1), rat(0, 1));
    assert_eq!(age(&g, "v", 2), rat(1, 1));

    let g = catalog("P(1,2)").unwrap();
    assert_eq!(age(&g, "y", 1), rat(1, 2));

    let g = catalog("P1").unwrap();
    assert_eq!(age(&g, "p0", 0), rat(0, 1));
    assert_eq!(cr_degree(&g, "p0", 0, 2), rat(2, 1));
    assert_eq!(cr_degree(&catalog("AffineZ3").unwrap(), "v", 2, -1), rat(3, 1));
}

#[test]
fn age_pairs_with_inverse_across_the_catalog() {
    for name in list_catalog() {
        let g = match catalog(name) {
            Ok(g) => g,
            Err(_) => continue,
        };
        for v in g.vertices.keys() {
            let group = g.vertex_group(v).clone();
            for c in 0..group.conjugacy_classes().len() {
                let cbar = group.inverse_class(c);
                let moved = moved_directions(&g, v, c);
                assert_eq!(moved, moved_directions(&g, v, cbar), "{} {} {}", name, v, c);
                assert_eq!(
                    age(&g, v, c) + age(&g, v, cbar),
                    rat(moved as i64, 1),
                    "{} {} {}",
                    name,
                    v,
                    c
                );
            }
        }
    }
}

#[test]
fn euler_classes_of_fixed_directions() {
    let g = catalog("P2").unwrap();
    assert_eq!(e_class(&g, "p0", 0), rf("u1*u2", 2));

    let g = catalog("P1").unwrap();
    assert_eq!(e_class(&g, "p0", 0), rf("u1", 1));
    assert_eq!(e_class(&g, "p1", 0), rf("-u1", 1));

    // The twisted sector of the two-dimensional quotient point fixes
    // nothing, so its Euler class is empty.
    let g = catalog("AffineZ2").unwrap();
    assert_eq!(e_class(&g, "v", 1), rf("1", 2));

    // Twist only the first coordinate: the second direction survives.
    let z2 = FiniteGroup::cyclic(2);
    let chi = Character::cyclic_power(&z2, 1);
    let triv = Character::cyclic_power(&z2, 0);
    let g = affine(
        "HalfTwist",
        z2,
        vec![(chi, Weight(vec![rat(1, 1), rat(0, 1)])), (triv, Weight(vec![rat(0, 1), rat(1, 1)]))],
    )
    .unwrap();
    assert_eq!(e_class(&g, "v", 1), rf("u2", 2));
    assert_eq!(moved_directions(&g, "v", 1), 1);
}

#[test]
fn pairing_matches_hand_computations() {
    let p1 = catalog("P1").unwrap();
    let unit0 = sector_unit(&p1, "p0", 0);
    assert_eq!(pairing(&p1, &unit0, &unit0), rf("1/u1", 1));

    // Degree reasons force the square of the unit to integrate to zero,
    // while a point pairs to one.
    let one = global_unit(&p1);
    assert!(pairing(&p1, &one, &one).is_zero());
    assert_eq!(pairing(&p1, &one, &point_class(&p1, "p0")), rf("1", 1));
    assert_eq!(pairing(&p1, &one, &point_class(&p1, "p1")), rf("1", 1));

    let p2 = catalog("P2").unwrap();
    let one = global_unit(&p2);
    assert!(pairing(&p2, &one, &one).is_zero());
    assert_eq!(pairing(&p2, &one, &point_class(&p2, "p1")), rf("1", 2));

    let g = catalog("AffineZ2").unwrap();
    let twisted = sector_unit(&g, "v", 1);
    assert_eq!(pairing(&g, &twisted, &twisted), rf("1/2", 2));

    // Twisted sectors of the cyclic cone pair only against their inverses.
    let g = catalog("AffineZ3").unwrap();
    let s1 = sector_unit(&g, "v", 1);
    let s2 = sector_unit(&g, "v", 2);
    assert!(pairing(&g, &s1, &s1).is_zero());
    assert_eq!(pairing(&g, &s1, &s2), rf("1/3", 3));
    assert_eq!(pairing(&g, &s2, &s1), rf("1/3", 3));
}

#[test]
fn pairing_normalizes_inverse_sectors_across_the_catalog() {
    for name in list_catalog() {
        let g = match catalog(name) {
            Ok(g) => g,
            Err(_) => continue,
        };
        for v in g.vertices.keys() {
            let group = g.vertex_group(v).clone();
            for c in 0..group.conjugacy_classes().len() {
                let cbar = group.inverse_class(c);
                let p = pairing(&g, &sector_unit(&g, v, c), &sector_unit(&g, v, cbar));
                let cent = rat(group.class_centralizer_order(c) as i64, 1);
                let normalized = p.scale(&cent).mul(&e_class(&g, v, c));
                assert_eq!(normalized, RatFunc::one(g.m), "{} {} {}", name, v, c);
            }
        }
    }
}

#[test]
fn cup_products_match_hand_computations() {
    let g = catalog("AffineZ2").unwrap();
    let prod = cup_affine(&g, "v", 1, 1);
    let mut expected = EqCRClass::zero();
    expected.add_term(idx("v", 0), rf("u1*u2", 2));
    assert_eq!(prod, expected);

    let g = catalog("AffineZ3").unwrap();
    assert_eq!(cup_affine(&g, "v", 1, 1), sector_unit(&g, "v", 2));
    let mut expected = EqCRClass::zero();
    expected.add_term(idx("v", 0), rf("u1*u2*u3", 3));
    assert_eq!(cup_affine(&g, "v", 1, 2), expected);

    // Transposition times transposition spreads over the identity and the
    // rotations, always with the full weight factor.
    let g = catalog("AffineS3").unwrap();
    let mut expected = EqCRClass::zero();
    expected.add_term(idx("v", 0), rf("3*u1*u2", 2));
    expected.add_term(idx("v", 1), rf("3*u1*u2", 2));
    assert_eq!(cup_affine(&g, "v", 2, 2), expected);
}

#[test]
fn cup_is_unital_commutative_and_associative() {
    for g in [
        catalog("AffineZ2").unwrap(),
        catalog("AffineZ3").unwrap(),
        catalog("AffineS3").unwrap(),
        q8_chart(),
    ] {
        let n = g.vertex_group("v").conjugacy_classes().len();
        for c in 0..n {
            assert_eq!(cup_affine(&g, "v", 0, c), sector_unit(&g, "v", c), "{} {}", g.name, c);
        }
        for a in 0..n {
            for b in 0..n {
                assert_eq!(
                    cup_affine(&g, "v", a, b),
                    cup_affine(&g, "v", b, a),
                    "{} {} {}",
                    g.name,
                    a,
                    b
                );
                for c in 0..n {
                    let left =
                        cup_affine_classes(&g, "v", &cup_affine(&g, "v", a, b), &sector_unit(&g, "v", c));
                    let right =
                        cup_affine_classes(&g, "v", &sector_unit(&g, "v", a), &cup_affine(&g, "v", b, c));
                    assert_eq!(left, right, "{} {} {} {}", g.name, a, b, c);
                }
            }
        }
    }
}

#[test]
fn class_arithmetic_and_display() {
    let g = catalog("AffineZ2").unwrap();
    let a = sector_unit(&g, "v", 0).scale(&rf("u1", 2));
    let b = sector_unit(&g, "v", 1);
    let sum = a.add(&b);
    assert_eq!(sum.coeff(&idx("v", 0), 2), rf("u1", 2));
    assert_eq!(sum.coeff(&idx("v", 1), 2), rf("1", 2));
    assert_eq!(format!("{}", sum), "[(v,0)] u1 + [(v,1)] 1");

    let cancel = sum.add(&sector_unit(&g, "v", 1).scale(&rf("-1", 2)));
    assert_eq!(cancel.coeffs.len(), 1);
    assert!(EqCRClass::zero().is_zero());
    assert_eq!(format!("{}", EqCRClass::zero()), "0");
}
