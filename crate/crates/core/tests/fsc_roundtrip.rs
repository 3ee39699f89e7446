use std::path::Path;
use std::sync::Arc;

use frcode::fsc::{emit_fsc, parse_fsc, read_fsc, FscDocument};
use frcode::storage::exact_to_states;
use frcode::{fixtures, Field, Subspace};
use proptest::prelude::*;

#[test]
fn fixtures_round_trip() {
    for name in ["four_node.fsc", "four_node_corrupted.fsc", "good_triple_seed.fsc"] {
        let doc = read_fsc(&Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)).unwrap();
        let text = emit_fsc(&doc);
        assert_eq!(parse_fsc(&text).unwrap(), doc, "{name}");
        assert_eq!(emit_fsc(&parse_fsc(&text).unwrap()), text, "{name}");
    }
}

#[test]
fn four_node_fixture_matches_exact_code() {
    let doc = read_fsc(&Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/four_node.fsc")).unwrap();
    let exact = exact_to_states(&fixtures::four_node_spaces(), &fixtures::four_node_params()).unwrap();
    let states = doc.to_state_set().unwrap();
    assert_eq!(states.key_set(), exact.key_set());
    for c in exact.collections() {
        let a: Vec<_> = states.transitions(c).iter().map(|t| &t.newcomer).collect();
        let b: Vec<_> = exact.transitions(c).iter().map(|t| &t.newcomer).collect();
        assert_eq!(a, b);
    }
}

fn collections() -> impl Strategy<Value = (u32, usize, Vec<Vec<Vec<Vec<u32>>>>)> {
    (prop_oneof![Just(2u32), Just(3), Just(4), Just(8)], 1usize..5).prop_flat_map(|(q, m)| {
        let row = proptest::collection::vec(0..q, m);
        let space = proptest::collection::vec(row, 0..=m);
        let coll = proptest::collection::vec(space, 1..4);
        (Just(q), Just(m), proptest::collection::vec(coll, 0..4))
    })
}

proptest! {
    #[test]
    fn random_documents_round_trip((q, m, colls) in collections()) {
        let f = Arc::new(Field::with_order(q).unwrap());
        let named: Vec<(String, Vec<Subspace>)> = colls
            .into_iter()
            .enumerate()
            .map(|(i, c)| {
                let spaces = c.into_iter().map(|rows| Subspace::from_rows(&f, m, rows).unwrap()).collect();
                (format!("C{i}"), spaces)
            })
            .collect();
        let doc = FscDocument::from_collections(f.clone(), m, &named);
        let text = emit_fsc(&doc);
        let back = parse_fsc(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(emit_fsc(&back), text);
        for (name, spaces) in &named {
            let mut want = spaces.clone();
            want.sort();
            prop_assert_eq!(back.collection(name).spaces().to_vec(), want);
        }
    }
}
