use proptest::prelude::*;

use qmut_core::catalog::{canonical_graded, squid_graded};
use qmut_core::exseq::{self, braid_check, commute_check, Classification, ExcSeqQuiver, Side};
use qmut_core::graded::{fz_mutate, forget_grading, graded_mutate, Quiver};
use qmut_core::word::{Direction, MutationWord};
use qmut_core::WeightSequence;

fn quiver() -> impl Strategy<Value = Quiver> {
    (1usize..=8).prop_flat_map(|n| {
        proptest::collection::vec((any::<bool>(), 0u32..=3), n * (n - 1) / 2).prop_map(move |pairs| {
            let mut q = Quiver::new(n);
            let mut it = pairs.into_iter();
            for i in 0..n {
                for j in i + 1..n {
                    let (forward, c) = it.next().unwrap();
                    if forward {
                        q.add_arrows(i, j, c);
                    } else {
                        q.add_arrows(j, i, c);
                    }
                }
            }
            q
        })
    })
}

fn sequence(max_n: usize) -> impl Strategy<Value = ExcSeqQuiver> {
    (2usize..=max_n).prop_flat_map(|n| {
        (
            proptest::collection::vec(0u64..=5, n),
            proptest::collection::vec(-3i64..=3, n * (n - 1) / 2),
        )
            .prop_map(move |(ranks, entries)| {
                let mut q = ExcSeqQuiver::new(ranks);
                let mut it = entries.into_iter();
                for i in 0..n {
                    for j in i + 1..n {
                        q.set(i, j, it.next().unwrap());
                    }
                }
                q
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn fz_mutation_is_an_involution(q in quiver(), k in 0usize..8) {
        let k = k % q.n();
        let once = fz_mutate(&q, k).unwrap();
        prop_assert_eq!(fz_mutate(&once, k).unwrap(), q);
    }

    #[test]
    fn left_and_right_mutations_are_inverse(q in sequence(6), l in 0usize..5, left in any::<bool>()) {
        let l = l % (q.n() - 1);
        let side = if left { Side::Left } else { Side::Right };
        if let Ok(Classification::Kind(kind)) = exseq::classify(&q, l, side) {
            if let Ok((m, mv)) = exseq::mutate(&q, l, side, kind) {
                let word = MutationWord::new(vec![mv]);
                let back = word.replay_sequence(&m, Direction::Backward).unwrap();
                prop_assert!(back.same_data(&q));
                prop_assert_eq!(back.labels(), q.labels());
            }
        }
    }

    #[test]
    fn braid_and_far_commutation_hold(q in sequence(4), i in 0usize..3) {
        let n = q.n();
        if n >= 3 {
            let i = i % (n - 2);
            if let Ok(ok) = braid_check(&q, i) {
                prop_assert!(ok);
            }
        }
        if n == 4 {
            if let Ok(ok) = commute_check(&q, 0, 2) {
                prop_assert!(ok);
            }
        }
    }
}

fn catalog() -> Vec<qmut_core::GradedQuiver> {
    let mut out = Vec::new();
    for p in [vec![2, 2, 2], vec![2, 2, 2, 2], vec![3, 3, 4], vec![2, 3, 7]] {
        let w = WeightSequence::new(p).unwrap();
        out.push(canonical_graded(&w));
        out.push(squid_graded(&w));
    }
    out
}

#[test]
fn forgetting_the_grading_commutes_with_mutation() {
    for q in catalog() {
        let mut mutable = 0;
        for k in 0..q.n() {
            if !q.tag(k).is_known() {
                continue;
            }
            mutable += 1;
            let (m, _) = graded_mutate(&q, k).unwrap();
            let graded_first = forget_grading(&m);
            let fz_first = fz_mutate(&forget_grading(&q), k).unwrap();
            assert_eq!(graded_first.arrows, fz_first.arrows, "vertex {k}");
            assert_eq!(graded_first.labels, fz_first.labels);
        }
        assert!(mutable > 0);
    }
}
