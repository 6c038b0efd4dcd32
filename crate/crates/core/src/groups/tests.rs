use super::*;
use crate::qfield::rat;

fn s3() -> Arc<FiniteGroup> {
    FiniteGroup::symmetric(3)
}

#[test]
fn class_data_is_frozen() {
    let z2 = FiniteGroup::cyclic(2);
    assert_eq!(z2.conjugacy_classes(), &[vec![0], vec![1]]);
    assert!(z2.is_abelian());

    let z4 = FiniteGroup::cyclic(4);
    assert_eq!(z4.conjugacy_classes(), &[vec![0], vec![1], vec![2], vec![3]]);
    assert_eq!(z4.element_order(1), 4);
    assert_eq!(z4.element_order(2), 2);

    let v4 = FiniteGroup::product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
    assert_eq!(v4.order(), 4);
    assert!(v4.is_abelian());
    assert!(v4.elements().all(|x| v4.mul(x, x) == 0));

    // S3 with lexicographic one-line ordering: 1,2,5 are the transpositions
    // and 3,4 the 3-cycles.
    let s3 = s3();
    assert!(!s3.is_abelian());
    assert_eq!(s3.conjugacy_classes(), &[vec![0], vec![3, 4], vec![1, 2, 5]]);
    assert_eq!(s3.centralizer(1), vec![0, 1]);
    assert_eq!(s3.centralizer(3), vec![0, 3, 4]);
    assert_eq!(s3.centralizer_order(3), 3);
    assert_eq!(s3.class_centralizer_order(2), 2);
    assert_eq!(s3.inverse_class(1), 1);
    assert_eq!(s3.element_order(3), 3);

    let q8 = FiniteGroup::quaternion8();
    assert_eq!(
        q8.conjugacy_classes(),
        &[vec![0], vec![1], vec![2, 3], vec![4, 5], vec![6, 7]]
    );
    assert_eq!(q8.centralizer(2), vec![0, 1, 2, 3]);
    assert_eq!(q8.element_order(1), 2);
    assert_eq!(q8.element_order(2), 4);
    // ij = k, ji = -k.
    assert_eq!(q8.mul(2, 4), 6);
    assert_eq!(q8.mul(4, 2), 7);

    let s4 = FiniteGroup::symmetric(4);
    assert_eq!(s4.order(), 24);
    let sizes: Vec<usize> = s4.conjugacy_classes().iter().map(|c| c.len()).collect();
    assert_eq!(sizes, vec![1, 3, 6, 6, 8]);
}

#[test]
fn rejects_broken_tables() {
    // Identity not first.
    let t = vec![vec![1, 0], vec![0, 1]];
    assert!(FiniteGroup::from_table("bad", &t).is_err());
    // Non-associative Latin square (order 5 loop).
    let t = vec![
        vec![0, 1, 2, 3, 4],
        vec![1, 0, 3, 4, 2],
        vec![2, 4, 0, 1, 3],
        vec![3, 2, 4, 0, 1],
        vec![4, 3, 1, 2, 0],
    ];
    assert!(matches!(
        FiniteGroup::from_table("loop", &t),
        Err(GroupError::InvalidTable(m)) if m.contains("associative")
    ));
}

#[test]
fn table_text_round_trips() {
    for g in [FiniteGroup::cyclic(6), s3(), FiniteGroup::quaternion8()] {
        let text = g.to_table_text();
        let back = FiniteGroup::parse_table_text(&g.name, &text).unwrap();
        assert_eq!(*back, *g);
    }
    assert!(FiniteGroup::parse_table_text("t", "2\n0 1\n1").is_err());
    assert!(FiniteGroup::parse_table_text("t", "2\n0 1\n1 0\n9").is_err());
}

#[test]
fn abelian_cover_counts_match_closed_form() {
    let z4 = FiniteGroup::cyclic(4);
    // 1 + 3 = 0 mod 4: solutions fill G^(2g).
    assert_eq!(z4.count_covers(2, &[1, 3]), BigUint::from(256u32));
    assert_eq!(z4.count_covers(0, &[1, 3]), BigUint::from(1u32));
    // 1 + 1 = 2 != 0: empty.
    assert_eq!(z4.count_covers(1, &[1, 1]), BigUint::zero());
    assert_eq!(z4.count_covers(3, &[]), BigUint::from(4096u32));
}

#[test]
fn s3_cover_counts_by_hand() {
    let s3 = s3();
    // Class indices: 0 identity, 1 three-cycles, 2 transpositions.
    // Two transpositions multiplying to the identity: the 3 equal pairs.
    assert_eq!(s3.count_covers(0, &[2, 2, 0]), BigUint::from(3u32));
    // Two inverse 3-cycles.
    assert_eq!(s3.count_covers(0, &[1, 1, 0]), BigUint::from(2u32));
    // Transposition pairs with 3-cycle product: 3 pairs per target cycle.
    assert_eq!(s3.count_covers(0, &[2, 2, 1]), BigUint::from(6u32));
    // Commuting pairs: sum of centralizer orders over elements.
    assert_eq!(s3.count_covers(1, &[]), BigUint::from(18u32));

    // Refinement by generated subgroup.
    let by_sub = s3.count_covers_by_subgroup(0, &[2, 2, 0]).unwrap();
    assert_eq!(by_sub.len(), 1);
    // All three Z2 subgroups are conjugate; the canonical one is {0, 1}.
    assert_eq!(by_sub[&vec![0u16, 1u16]], BigUint::from(3u32));

    let by_sub = s3.count_covers_by_subgroup(0, &[1, 1, 0]).unwrap();
    assert_eq!(by_sub[&vec![0u16, 3u16, 4u16]], BigUint::from(2u32));

    let by_sub = s3.count_covers_by_subgroup(0, &[2, 2, 1]).unwrap();
    let full: Vec<u16> = (0..6).collect();
    assert_eq!(by_sub[&full], BigUint::from(6u32));
}

#[test]
fn convolution_matches_bruteforce() {
    let groups = [
        FiniteGroup::cyclic(3),
        FiniteGroup::cyclic(4),
        FiniteGroup::product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)),
        s3(),
        FiniteGroup::quaternion8(),
    ];
    for g in &groups {
        let k = g.conjugacy_classes().len();
        for genus in 0..=2 {
            for c1 in 0..k {
                for c2 in 0..k {
                    if (g.order() as f64).powi((2 * genus + 2) as i32) > 1e7 {
                        continue;
                    }
                    let classes = [c1, c2];
                    assert_eq!(
                        g.count_covers(genus, &classes),
                        g.count_covers_bruteforce(genus, &classes).unwrap(),
                        "{} g={} classes={:?}",
                        g.name,
                        genus,
                        classes
                    );
                }
            }
        }
    }
}

#[test]
fn by_subgroup_totals_match_plain_count() {
    let q8 = FiniteGroup::quaternion8();
    let by_sub = q8.count_covers_by_subgroup(1, &[1]).unwrap();
    let total: BigUint = by_sub.values().sum();
    assert_eq!(total, q8.count_covers(1, &[1]));

    let s4 = FiniteGroup::symmetric(4);
    let by_sub = s4.count_covers_by_subgroup(0, &[2, 2, 1]).unwrap();
    let total: BigUint = by_sub.values().sum();
    assert_eq!(total, s4.count_covers(0, &[2, 2, 1]));
}

#[test]
fn enumeration_guard_trips() {
    let s4 = FiniteGroup::symmetric(4);
    assert!(matches!(
        s4.count_covers_by_subgroup(2, &[0, 0]),
        Err(GroupError::TooLarge(_, _))
    ));
}

#[test]
fn characters_validate_additively() {
    let z4 = FiniteGroup::cyclic(4);
    let chi = Character::cyclic_power(&z4, 1);
    assert_eq!(chi.value(1), &rat(1, 4));
    assert_eq!(chi.value(3), &rat(3, 4));
    assert_eq!(chi.order(), 4);
    assert_eq!(chi.kernel(), vec![0]);

    let chi2 = Character::cyclic_power(&z4, 2);
    assert_eq!(chi2.order(), 2);
    assert_eq!(chi2.kernel(), vec![0, 2]);
    assert!(chi2.trivial_on(&[0, 2]));
    assert!(!chi2.trivial_on(&[1]));

    assert!(Character::trivial(&z4).is_trivial());
    assert_eq!(Character::trivial(&z4).order(), 1);

    // Values get reduced mod 1 before checking.
    let chi3 = Character::new(&z4, vec![rat(2, 1), rat(5, 4), rat(1, 2), rat(3, 4)]).unwrap();
    assert_eq!(chi3, Character::cyclic_power(&z4, 1));

    assert!(Character::new(&z4, vec![rat(0, 1), rat(1, 2), rat(1, 4), rat(3, 4)]).is_err());
    assert!(Character::new(&z4, vec![rat(0, 1); 3]).is_err());

    // The sign character of S3 vanishes exactly on the rotations.
    let s3 = s3();
    let mut vals = vec![rat(0, 1); 6];
    for x in [1u16, 2, 5] {
        vals[x as usize] = rat(1, 2);
    }
    let sign = Character::new(&s3, vals).unwrap();
    assert_eq!(sign.kernel(), vec![0, 3, 4]);
    assert_eq!(sign.order(), 2);
}

#[test]
fn homs_and_automorphisms() {
    let z2 = FiniteGroup::cyclic(2);
    let s3 = s3();
    let h = GroupHom::new(&z2, &s3, vec![0, 1]).unwrap();
    assert!(h.injective());
    assert_eq!(h.image(), vec![0, 1]);
    assert_eq!(h.apply(1), 1);
    assert!(GroupHom::new(&z2, &s3, vec![0, 3]).is_err());

    let z4 = FiniteGroup::cyclic(4);
    let neg = vec![0u16, 3, 2, 1];
    z4.automorphism_check(&neg).unwrap();
    assert_eq!(z4.automorphism_order(&neg), 2);
    assert!(z4.automorphism_check(&[0, 2, 1, 3]).is_err());
    assert!(z4.automorphism_check(&[0, 1, 1, 3]).is_err());

    // Conjugation by a transposition is an automorphism of S3.
    let conj: Vec<u16> = (0..6).map(|x| s3.conj(1, x)).collect();
    s3.automorphism_check(&conj).unwrap();
    assert_eq!(s3.automorphism_order(&conj), 2);
}

#[test]
fn subgroup_machinery() {
    let s3 = s3();
    assert_eq!(s3.subgroup_closure(&[3]), vec![0, 3, 4]);
    assert_eq!(s3.subgroup_closure(&[1, 3]), (0..6).collect::<Vec<u16>>());
    assert_eq!(s3.canonical_subgroup(&[0, 5]), vec![0, 1]);
    assert_eq!(s3.canonical_subgroup(&[0, 2]), vec![0, 1]);

    let q8 = FiniteGroup::quaternion8();
    assert_eq!(q8.subgroup_closure(&[2]), vec![0, 1, 2, 3]);
    assert_eq!(q8.subgroup_closure(&[4, 6]), (0..8).collect::<Vec<u16>>());
    // The center is normal, hence self-canonical.
    assert_eq!(q8.canonical_subgroup(&[0, 1]), vec![0, 1]);

    assert_eq!(s3.pow(3, 2), 4);
    assert_eq!(s3.pow(3, -1), 4);
    assert_eq!(s3.pow(1, 0), 0);
}
