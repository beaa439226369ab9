//! Identities and algebraic properties; the oracle-equivalence suites live
//! in the acceptance target.

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fermat_ns::exact_linalg::{det_exact, det_mod, IntMatrix};
use fermat_ns::fermat_combinatorics::{character_sets, Character};
use fermat_ns::line_lattice::{
    all_lines, eigendivisor, eigendivisor_pairing, gram_matrix, line_pairing, Generator, StandardLine,
};

#[test]
fn eigendivisors_are_orthogonal() {
    for m in [5u64, 7] {
        let sets = character_sets(m).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(15 + m);
        let mut done = 0;
        while done < 50 {
            let i = rng.gen_range(1..=3u8);
            let j = rng.gen_range(1..=3u8);
            let a = *sets.d_family[i as usize - 1].choose(&mut rng).unwrap();
            let b = *sets.d_family[j as usize - 1].choose(&mut rng).unwrap();
            if b == a.neg(m) {
                continue;
            }
            let v = eigendivisor_pairing(&eigendivisor(i, &a, m).unwrap(), &eigendivisor(j, &b, m).unwrap(), m);
            assert!(v.unwrap().is_zero(), "m={m} w{i}({a:?}) . w{j}({b:?})");
            done += 1;
        }
    }
}

#[test]
fn hyperplane_relations() {
    // sum over one exponent of a family is the hyperplane class
    for m in 3..=9u64 {
        let lines = all_lines(m);
        for family in 1..=3u8 {
            for fixed in 0..m {
                for test in &lines {
                    let s: i64 = (0..m)
                        .map(|k| {
                            let l = StandardLine::new(m, family, k, fixed).unwrap();
                            line_pairing(&l.into(), &(*test).into(), m).unwrap()
                        })
                        .sum();
                    assert_eq!(s, line_pairing(&Generator::H, &(*test).into(), m).unwrap());
                }
            }
        }
    }
}

fn line_strategy(m: u64) -> impl Strategy<Value = StandardLine> {
    (1..=3u8, 0..m, 0..m).prop_map(move |(f, k, l)| StandardLine::new(m, f, k, l).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pairing_is_symmetric(m in 3u64..12, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lines = all_lines(m);
        let a = *lines.choose(&mut rng).unwrap();
        let b = *lines.choose(&mut rng).unwrap();
        let ab = line_pairing(&a.into(), &b.into(), m).unwrap();
        prop_assert_eq!(ab, line_pairing(&b.into(), &a.into(), m).unwrap());
        prop_assert!(ab == 0 || ab == 1 || (a == b && ab == 2 - m as i64));
    }

    #[test]
    fn gram_matrices_are_symmetric(lines in proptest::collection::vec(line_strategy(7), 1..20)) {
        let g = gram_matrix(&lines, 7).unwrap();
        prop_assert!(g.is_symmetric());
    }

    #[test]
    fn det_is_multiplicative(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = IntMatrix::from_fn(n, n, |_, _| rng.gen_range(-20..=20));
        let b = IntMatrix::from_fn(n, n, |_, _| rng.gen_range(-20..=20));
        let ab = IntMatrix::from_fn(n, n, |i, j| (0..n).map(|k| a.get(i, k) * b.get(k, j)).sum());
        let (da, db) = (det_exact(&a).unwrap(), det_exact(&b).unwrap());
        prop_assert_eq!(det_exact(&ab).unwrap(), &da * &db);
        prop_assert_eq!(det_exact(&a.transpose()).unwrap(), da.clone());
        let p = 1_000_003u64;
        let want = (da % BigInt::from(p) + BigInt::from(p)) % BigInt::from(p);
        prop_assert_eq!(BigInt::from(det_mod(&a, p).unwrap()), want);
    }

    #[test]
    fn characters_negate(a0 in 1u64..7, a1 in 1u64..7, a2 in 1u64..7) {
        let a3 = (21 - a0 - a1 - a2) % 7;
        prop_assume!(a3 != 0);
        let c = Character::new([a0 as i64, a1 as i64, a2 as i64, a3 as i64], 7).unwrap();
        prop_assert_eq!(c.neg(7).neg(7), c);
        prop_assert_eq!(c.is_decomposable(7), c.neg(7).is_decomposable(7));
    }
}
