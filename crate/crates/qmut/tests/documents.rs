mod common;

use common::{fixture, fixture_names, weights};
use qmut::doc::{self, Document, Kind};
use qmut::ops::{self, GenerateAs, GenerateType};
use qmut_core::catalog::{squid_graded, squid_sequence};
use qmut_core::graded::labeled_equal;
use qmut_core::ranks::solve_unknown_ranks;
use qmut_core::Tag;

#[test]
fn fixtures_round_trip_byte_for_byte() {
    let names = fixture_names();
    assert!(names.len() >= 5, "{names:?}");
    for name in names {
        let text = fixture(&name);
        let d = doc::parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(doc::serialize(&d), text, "{name}");
    }
}

#[test]
fn squid_fixture_is_the_generated_squid() {
    let d = doc::parse(&fixture("squid_2_3.json")).unwrap();
    assert!(labeled_equal(&d.to_graded().unwrap(), &squid_graded(&weights(&[2, 3]))));
    let s = doc::parse(&fixture("squid_2_3_sequence.json")).unwrap();
    assert!(s.to_sequence().unwrap().same_data(&squid_sequence(&weights(&[2, 3]))));
}

#[test]
fn canonical_fixture_matches_generate() {
    let g = ops::generate(GenerateType::Canonical, "3,3,4", GenerateAs::Graded).unwrap();
    assert_eq!(doc::serialize(&g), fixture("canonical_3_3_4.json"));
}

#[test]
fn generate_mutate_solve_reproduces_q1() {
    let g = ops::generate(GenerateType::Canonical, "3,3,4", GenerateAs::Graded).unwrap();
    let (m, mv) = ops::mutate(&g, 1, true).unwrap();
    assert!(matches!(mv, doc::MoveDoc::Graded { at: 1, .. }));
    let solved = ops::solve_ranks(&m).unwrap();
    let q1 = doc::parse(&fixture("q1.json")).unwrap();
    assert!(labeled_equal(&solved.to_graded().unwrap(), &q1.to_graded().unwrap()));
    let tagged = ops::infer_tags(&solved).unwrap();
    let mut expected = q1.clone();
    expected.meta.clear();
    assert_eq!(tagged, expected);
}

#[test]
fn q1_mutated_at_2_gives_q2_whose_rank_is_2() {
    let q1 = doc::parse(&fixture("q1.json")).unwrap();
    let q2 = doc::parse(&fixture("q2.json")).unwrap().to_graded().unwrap();
    let (m, _) = ops::mutate(&q1, 2, true).unwrap();
    let m = m.to_graded().unwrap();
    assert!(labeled_equal(&m, &q2));
    assert_eq!(m.tag(1), Tag::Sink);
    assert_eq!(solve_unknown_ranks(&q2).unwrap()[1], 2);

    let tagged = ops::infer_tags(&ops::solve_ranks(&doc::parse(&fixture("q2.json")).unwrap()).unwrap()).unwrap();
    assert_eq!(tagged.vertices[0].tag, Some(doc::TagDoc::Source));
    assert_eq!(tagged.vertices[2].tag, Some(doc::TagDoc::Source));
}

#[test]
fn squid_with_four_arms_of_weight_two_has_six_vertices() {
    let d = ops::generate(GenerateType::Squid, "2,2,2,2", GenerateAs::Graded).unwrap();
    assert_eq!(d.vertices.len(), 6);
    let s = ops::generate(GenerateType::Squid, "2,2,2,2", GenerateAs::Sequence).unwrap();
    assert_eq!(s.kind, Kind::ExcSequence);
    assert_eq!(s.vertices.len(), 6);
}

#[test]
fn degree_two_arrow_names_the_field() {
    let mut v: serde_json::Value = serde_json::from_str(&fixture("squid_2_3.json")).unwrap();
    v["arrows"][1]["degree"] = 2.into();
    let e = doc::parse(&v.to_string()).unwrap_err();
    assert_eq!(e.field.as_deref(), Some("arrows[1].degree"));
    assert_eq!(e.exit_code(), 2);
}

#[test]
fn unknown_fields_and_bad_ids_are_rejected() {
    let text = fixture("squid_2_3.json").replacen("\"label\"", "\"lable\"", 1);
    assert_eq!(doc::parse(&text).unwrap_err().code, "parse");

    let mut v: serde_json::Value = serde_json::from_str(&fixture("squid_2_3.json")).unwrap();
    v["vertices"][0]["id"] = 7.into();
    let e = doc::parse(&v.to_string()).unwrap_err();
    assert_eq!(e.field.as_deref(), Some("vertices[0].id"));
}

#[test]
fn fz_mutation_forgets_the_grading() {
    let d: Document = doc::parse(&fixture("q1.json")).unwrap();
    let (m, _) = ops::mutate(&d, 2, false).unwrap();
    assert!(m.arrows.as_ref().unwrap().iter().all(|a| a.degree == 0));
    assert_eq!(m.meta["grading"], "forgotten");
    let (back, _) = ops::mutate(&m, 2, false).unwrap();
    let total = |d: &Document| d.arrows.as_ref().unwrap().iter().map(|a| (a.from, a.to, a.count)).collect::<Vec<_>>();
    let mut expected = qmut_core::graded::forget_grading(&d.to_graded().unwrap());
    expected = qmut_core::graded::fz_mutate(&qmut_core::graded::fz_mutate(&expected, 1).unwrap(), 1).unwrap();
    assert_eq!(total(&back), total(&Document::from_quiver(&expected)));
}

#[test]
fn recovery_output_replays_back_to_the_input() {
    let d = ops::generate(GenerateType::Canonical, "2,2,2,2", GenerateAs::Graded).unwrap();
    let r = ops::recover(&d, Some(3)).unwrap();
    assert_eq!(r.weights, vec![2, 2, 2, 2]);
    assert_eq!(r.states.as_ref().unwrap().len(), 4.min(r.word.len() + 1));
    let word = doc::WordDocument { schema: doc::SCHEMA.into(), kind: doc::WordKind::MutationWord, moves: r.word.clone() };
    let back = ops::replay(&r.final_state, &word, true).unwrap();
    assert!(back.to_sequence().unwrap().same_data(&r.input.to_sequence().unwrap()));
}
