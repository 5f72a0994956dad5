use proptest::prelude::*;
use riesz_ned::{generate_random_instance, Error, Instance, Partition};

fn path(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn shipped_fixtures_load() {
    for name in ["mixing_4atom.json", "independent_4atom.json", "two_sided_counterexample.json"] {
        let inst = Instance::load(path(name)).unwrap();
        assert_eq!(inst.space().atom_count(), 4, "{name}");
        assert!(inst.partitions().contains_key("T"));
    }
    let minimal = Instance::load(path("minimal.json")).unwrap();
    assert!(minimal.partitions().is_empty());
    assert_eq!(minimal.base_operator().partition(), &Partition::trivial(1));
}

#[test]
fn malformed_fixture_points_at_the_field() {
    match Instance::load(path("malformed.json")) {
        Err(Error::Parse { path, line, .. }) => {
            assert_eq!(path, "weights[1]");
            assert_eq!(line, 3);
        }
        other => panic!("expected a parse error, got {other:?}"),
    }
    assert!(matches!(Instance::load(path("missing.json")), Err(Error::Parse { .. })));
    let unknown = r#"{"atoms":["a"],"weights":[1],"extra":1}"#;
    assert!(matches!(Instance::parse(unknown), Err(Error::Parse { .. })));
}

proptest! {
    #[test]
    fn generated_instances_round_trip(seed in any::<u64>(), atoms in 1usize..=64, parts in 0usize..5) {
        let inst = generate_random_instance(seed, atoms, parts).unwrap();
        let text = inst.to_json();
        let back = Instance::parse(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(back.to_json(), text);
    }
}
