use std::time::Instant;

use qmut_core::catalog::{canonical_graded, squid_graded, squid_sequence};
use qmut_core::recovery::{recover, recover_sequence, tilting_sequence_from_graded, PHASE_BUDGET};
use qmut_core::word::Direction;
use qmut_core::WeightSequence;

fn w(p: &[u32]) -> WeightSequence {
    WeightSequence::new(p.to_vec()).unwrap()
}

#[test]
fn canonical_types_recover_their_weights() {
    for p in [
        vec![2, 2, 2],
        vec![2, 2, 2, 2],
        vec![3, 3, 4],
        vec![2, 3, 4],
        vec![3, 3, 3],
        vec![2, 3, 5],
        vec![2, 2, 5],
        vec![4, 4],
        vec![2, 2, 2, 2, 2],
        vec![2, 3, 7],
    ] {
        let start = Instant::now();
        let res = recover(&canonical_graded(&w(&p))).unwrap_or_else(|e| panic!("{p:?}: {e}"));
        let mut expected = p.clone();
        expected.sort_unstable_by(|a, b| b.cmp(a));
        assert_eq!(res.weights, expected, "{p:?}");
        assert!(res.word.len() < PHASE_BUDGET);
        let back = res.word.replay_sequence(&res.final_state, Direction::Backward).unwrap();
        assert!(back.same_data(&res.input), "{p:?}");
        eprintln!("{p:?}: {} moves in {:?}", res.word.len(), start.elapsed());
    }
}

#[test]
fn squid_is_a_fixed_point() {
    for p in [vec![2, 3], vec![2, 2, 2], vec![2, 2, 2, 2], vec![3, 3, 4]] {
        let res = recover_sequence(&squid_sequence(&w(&p))).unwrap();
        assert!(res.word.transpositions_only(), "{p:?}: {:?}", res.word);
        let res = recover(&squid_graded(&w(&p))).unwrap();
        assert!(res.word.transpositions_only(), "{p:?}");
    }
}

#[test]
fn reconstruction_names_the_input_in_squid_terms() {
    let q = canonical_graded(&w(&[2, 2, 2]));
    let (seq, order) = tilting_sequence_from_graded(&q).unwrap();
    let res = recover_sequence(&seq).unwrap();
    assert_eq!(res.reconstruction.len(), order.len());
    assert!(res.final_state.labels().iter().any(|l| l.to_string() == "O(c)"));
}

#[test]
fn mutated_inputs_recover_the_same_type() {
    use qmut_core::ranks::{mutate_tracking, refresh_tags};
    use rand::rngs::StdRng;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    let mut rng = StdRng::seed_from_u64(11);
    for p in [vec![2, 2, 2], vec![2, 2, 2, 2], vec![3, 3, 4], vec![2, 3, 7]] {
        let mut expected = p.clone();
        expected.sort_unstable_by(|a, b| b.cmp(a));
        for walk in 0..25 {
            let mut q = refresh_tags(&canonical_graded(&w(&p))).unwrap();
            for _ in 0..6 {
                let known: Vec<usize> = (0..q.n()).filter(|&v| q.tag(v).is_known()).collect();
                q = mutate_tracking(&q, *known.choose(&mut rng).unwrap()).unwrap().0;
            }
            let res = recover(&q).unwrap_or_else(|e| panic!("{p:?} walk {walk}: {e}"));
            assert_eq!(res.weights, expected);
            let back = res.word.replay_sequence(&res.final_state, Direction::Backward).unwrap();
            assert!(back.same_data(&res.input));
        }
    }
}
