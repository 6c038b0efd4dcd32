use super::*;
use crate::qfield::parse_ratfunc;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rf(s: &str) -> RatFunc {
    parse_ratfunc(s, 2).unwrap()
}

#[test]
fn genus_zero_closed_form() {
    assert_eq!(psi_mgn(0, &[0, 0, 0]), rat(1, 1));
    assert_eq!(psi_mgn(0, &[1, 0, 0, 0]), rat(1, 1));
    assert_eq!(psi_mgn(0, &[1, 1, 0, 0, 0]), rat(2, 1));
    assert_eq!(psi_mgn(0, &[2, 0, 0, 0, 0]), rat(1, 1));
    assert_eq!(psi_mgn(0, &[2, 1, 1, 0, 0, 0, 0]), rat(12, 1));
    // Off dimension or unstable.
    assert_eq!(psi_mgn(0, &[1, 1, 1]), rat(0, 1));
    assert_eq!(psi_mgn(0, &[0, 0]), rat(0, 1));
    assert_eq!(psi_mgn(1, &[]), rat(0, 1));
}

#[test]
fn positive_genus_recursion_is_frozen() {
    assert_eq!(psi_mgn(1, &[1]), rat(1, 24));
    assert_eq!(psi_mgn(1, &[0, 2]), rat(1, 24));
    assert_eq!(psi_mgn(1, &[1, 1]), rat(1, 24));
    assert_eq!(psi_mgn(1, &[0, 0, 3]), rat(1, 24));
    assert_eq!(psi_mgn(1, &[2, 2]), rat(0, 1));
    assert_eq!(psi_mgn(2, &[4]), rat(1, 1152));
    assert_eq!(psi_mgn(2, &[0, 5]), rat(1, 1152));
    assert_eq!(psi_mgn(2, &[1, 4]), rat(1, 384));
    assert_eq!(psi_mgn(2, &[2, 3]), rat(29, 5760));
    assert_eq!(psi_mgn(3, &[7]), rat(1, 82944));
}

#[test]
fn string_and_dilaton_equations_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..30 {
        let g = rng.gen_range(0..=3usize);
        let n = rng.gen_range(1..=5usize);
        let exps: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=6usize)).collect();
        if 2 * g + n <= 2 {
            continue;
        }
        // String: an extra zero-power point reduces each exponent once.
        let mut with_zero = exps.clone();
        with_zero.push(0);
        let mut sum = Rat::zero();
        for i in 0..n {
            if exps[i] == 0 {
                continue;
            }
            let mut lowered = exps.clone();
            lowered[i] -= 1;
            sum += psi_mgn(g, &lowered);
        }
        assert_eq!(psi_mgn(g, &with_zero), sum, "string at g={} exps={:?}", g, exps);
        // Dilaton: an extra first-power point scales by 2g-2+n.
        let mut with_one = exps.clone();
        with_one.push(1);
        let factor = rat_i(2 * g as i64 - 2 + n as i64);
        assert_eq!(psi_mgn(g, &with_one), factor * psi_mgn(g, &exps), "dilaton {:?}", exps);
    }
}

#[test]
fn cover_reduction_matches_counts() {
    let z2 = FiniteGroup::cyclic(2);
    assert_eq!(psi_bg(&z2, 0, &[1, 1, 0], &[0, 0, 0], None).unwrap(), rat(1, 2));
    // A class product outside the identity kills every abelian count.
    let z3 = FiniteGroup::cyclic(3);
    assert_eq!(psi_bg(&z3, 0, &[1, 1, 0], &[0, 0, 0], None).unwrap(), rat(0, 1));

    let triv = FiniteGroup::trivial();
    assert_eq!(psi_bg(&triv, 1, &[0, 0], &[2, 0], None).unwrap(), psi_mgn(1, &[2, 0]));

    let s3 = FiniteGroup::symmetric(3);
    assert_eq!(psi_bg(&s3, 0, &[2, 2, 1], &[0, 0, 0], None).unwrap(), rat(1, 1));
    // Restricting to the subgroup generated by one transposition.
    assert_eq!(psi_bg(&s3, 0, &[2, 2, 0], &[0, 0, 0], Some(&[0, 1])).unwrap(), rat(1, 2));
    let full: Vec<u16> = (0..6).collect();
    assert_eq!(psi_bg(&s3, 0, &[2, 2, 0], &[0, 0, 0], Some(&full)).unwrap(), rat(0, 1));
    // A non-canonical member list for the same subgroup class works too.
    assert_eq!(psi_bg(&s3, 0, &[2, 2, 0], &[0, 0, 0], Some(&[0, 2])).unwrap(), rat(1, 2));

    // Degree law over the downstairs integral.
    let up = psi_bg(&z2, 1, &[1, 1], &[2, 0], None).unwrap();
    assert_eq!(up, rat_i(2) * psi_mgn(1, &[2, 0]));
}

#[test]
fn unstable_conventions_extend_the_stable_forms() {
    let w1 = rf("u1");
    let w2 = rf("u2");
    assert_eq!(unstable_one_flag(1, &w1), rf("u1"));
    assert_eq!(unstable_one_flag(3, &w1), rf("u1/3"));
    assert_eq!(unstable_two_flags(2, &w1, &w2).unwrap(), rf("1/(2*(u1+u2))"));
    assert!(matches!(
        unstable_two_flags(1, &w1, &rf("-u1")),
        Err(PsiError::DegenerateWeight(_))
    ));
    assert_eq!(unstable_one_flag_psi(2, &w1, 0), rf("1/2"));
    assert_eq!(unstable_one_flag_psi(1, &w1, 3), rf("-u1^3"));

    // Stable closed forms the conventions continue: one special point gives
    // 1/w^(n-2), two give (w1+w2)^(n-3)/(w1 w2)^(n-2), and a psi power at a
    // plain point gives the binomial coefficient times 1/w^(n-2-a).
    for n in 3..=7usize {
        let mut exps = vec![0; n];
        exps[0] = n - 3;
        assert_eq!(psi_mgn(0, &exps), rat(1, 1));

        let lhs: Rat = (0..=n - 3)
            .map(|a| {
                let mut e = vec![0; n];
                e[0] = a;
                e[1] = n - 3 - a;
                psi_mgn(0, &e) * rat(3, 1).pow(a as i32) * rat(5, 1).pow((n - 3 - a) as i32)
            })
            .sum();
        // With w1 = 1/3 and w2 = 1/5 inverted into the series weights:
        // sum_a C(n-3,a) 3^a 5^(n-3-a) = (3+5)^(n-3).
        assert_eq!(lhs, rat(8, 1).pow((n - 3) as i32));
    }
}

#[test]
fn twisted_bundle_ranks() {
    let z2 = FiniteGroup::cyclic(2);
    let triv = Character::cyclic_power(&z2, 0);
    let sgn = Character::cyclic_power(&z2, 1);
    assert_eq!(hodge_rank(&z2, &triv, 0, &[]), 0);
    assert_eq!(hodge_rank(&z2, &triv, 2, &[1, 1]), 2);
    assert_eq!(hodge_rank(&z2, &sgn, 0, &[1, 1]), 0);
    assert_eq!(hodge_rank(&z2, &sgn, 0, &[1, 1, 1, 1]), 1);
    assert_eq!(hodge_rank(&z2, &sgn, 1, &[]), 0);
}

#[test]
fn lambda_dispatch_and_table() {
    let z2 = FiniteGroup::cyclic(2);
    let sgn = Character::cyclic_power(&z2, 1);
    let plain = BGIntegralRequest {
        group: z2.clone(),
        genus: 0,
        classes: vec![1, 1, 0],
        subgroup: None,
        psi: vec![0, 0, 0],
        lambda: vec![],
    };
    assert_eq!(lambda_integral(&plain, None).unwrap(), rat(1, 2));

    // Rank-zero twisted bundle: the lambda factor is vacuous.
    let mut vacuous = plain.clone();
    vacuous.lambda = vec![LambdaFactor { phi: sgn.clone(), powers: vec![1] }];
    assert_eq!(hodge_rank(&z2, &sgn, 0, &[1, 1, 0]), 0);
    assert_eq!(lambda_integral(&vacuous, None).unwrap(), rat(1, 2));

    // Psi-paired classes land in the same key regardless of ordering.
    let mut a = plain.clone();
    a.classes = vec![1, 0, 1];
    a.psi = vec![2, 1, 0];
    let mut b = plain.clone();
    b.classes = vec![0, 1, 1];
    b.psi = vec![1, 0, 2];
    assert_eq!(a.canonical_key(), b.canonical_key());
    let mut c = plain.clone();
    c.classes = vec![0, 1, 1];
    c.psi = vec![0, 1, 2];
    assert_ne!(a.canonical_key(), c.canonical_key());

    // A genuine lambda integral needs a table entry.
    let mut hard = BGIntegralRequest {
        group: z2.clone(),
        genus: 1,
        classes: vec![0],
        subgroup: None,
        psi: vec![0],
        lambda: vec![LambdaFactor {
            phi: Character::cyclic_power(&z2, 0),
            powers: vec![1],
        }],
    };
    let err = lambda_integral(&hard, None).unwrap_err();
    let key = match err {
        PsiError::UnsupportedIntegral(k) => k,
        other => panic!("unexpected error {:?}", other),
    };
    let text = format!("{}\n# comment\n\n{} = 1/24\n", HODGE_TABLE_HEADER, key);
    let table = HodgeTable::parse(&text).unwrap();
    assert_eq!(lambda_integral(&hard, Some(&table)).unwrap(), rat(1, 24));

    // A lambda power above the bundle rank vanishes without a table.
    hard.lambda[0].powers = vec![0, 1];
    assert_eq!(lambda_integral(&hard, None).unwrap(), rat(0, 1));

    assert!(HodgeTable::parse("wrong header\n").is_err());
    assert!(HodgeTable::parse(&format!("{}\nnonsense\n", HODGE_TABLE_HEADER)).is_err());
}
