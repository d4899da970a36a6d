//! Fixtures and random documents shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use qmut::doc::Document;
use qmut_core::catalog::{canonical_graded, squid_graded, squid_sequence};
use qmut_core::exseq::{self, Side};
use qmut_core::ranks::mutate_tracking;
use qmut_core::WeightSequence;

pub const TYPES: &[&[u32]] = &[&[2, 3], &[2, 2, 2], &[2, 2, 3], &[2, 2, 2, 2], &[3, 3, 4], &[2, 3, 7], &[2, 4, 4]];

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn fixture_names() -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(fixture_path(""))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".json"))
        .collect();
    names.sort();
    names
}

pub fn weights(p: &[u32]) -> WeightSequence {
    WeightSequence::new(p.to_vec()).unwrap()
}

/// A catalog quiver after a short tracked walk, with some ranks or tags
/// occasionally blanked so that every code path gets exercised.
pub fn random_graded(rng: &mut StdRng) -> Document {
    let p = weights(TYPES.choose(rng).unwrap());
    let mut q = if rng.gen_bool(0.5) { canonical_graded(&p) } else { squid_graded(&p) };
    for _ in 0..rng.gen_range(0..6) {
        let k = rng.gen_range(0..q.n());
        if let Ok((m, _)) = mutate_tracking(&q, k) {
            q = m;
        }
    }
    match rng.gen_range(0..5) {
        0 => {
            let v = rng.gen_range(0..q.n());
            q.set_rank(v, None);
        }
        1 => {
            let v = rng.gen_range(0..q.n());
            q.set_tag(v, qmut_core::Tag::Unknown);
        }
        _ => {}
    }
    Document::from_graded(&q)
}

/// A squid sequence after a few classified mutations.
pub fn random_sequence(rng: &mut StdRng) -> Document {
    let p = weights(TYPES.choose(rng).unwrap());
    let mut q = squid_sequence(&p);
    for _ in 0..rng.gen_range(0..5) {
        let l = rng.gen_range(0..q.n() - 1);
        let side = if rng.gen_bool(0.5) { Side::Left } else { Side::Right };
        if let Ok((m, _)) = exseq::mutate_classified(&q, l, side) {
            q = m;
        }
    }
    Document::from_sequence(&q)
}
