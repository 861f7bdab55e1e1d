mod common;

use cnd::pipeline::{run, Pins};
use cnd::{parse_spec, Instance, LayoutParams};

#[test]
fn every_corpus_diagram_satisfies_its_spec() {
    for name in common::CORPUS {
        let (inst_text, spec_text) = common::corpus_pair(name);
        let instance = Instance::parse(&inst_text).unwrap();
        let spec = parse_spec(&spec_text).unwrap();
        let diagram = run(&instance, &spec_text, &LayoutParams::default(), &Pins::new())
            .unwrap_or_else(|e| panic!("{name}: {e}"));
        let bad = common::violations(&inst_text, &spec, &diagram.to_json());
        assert!(bad.is_empty(), "{name}: {bad:#?}");
    }
}

#[test]
fn dag_under_tree_spec_is_unsat() {
    let instance = Instance::parse(&common::fixture("dag-tree.json")).unwrap();
    let err = run(&instance, &common::fixture("dag-tree.cnd"), &LayoutParams::default(), &Pins::new()).unwrap_err();
    assert_eq!(err.kind(), "unsat");
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn contradictory_spec_fails_statically() {
    let instance = Instance::parse(&common::fixture("linked-list.json")).unwrap();
    let err = run(&instance, &common::fixture("inconsistent.cnd"), &LayoutParams::default(), &Pins::new()).unwrap_err();
    assert_eq!(err.kind(), "static");
}

#[test]
fn checker_notices_a_moved_node() {
    let (inst_text, spec_text) = common::corpus_pair("bst");
    let instance = Instance::parse(&inst_text).unwrap();
    let spec = parse_spec(&spec_text).unwrap();
    let diagram = run(&instance, &spec_text, &LayoutParams::default(), &Pins::new()).unwrap();
    let mut json: serde_json::Value = serde_json::from_str(&diagram.to_json()).unwrap();
    let root = json["nodes"][0]["x"].as_f64().unwrap();
    json["nodes"][1]["x"] = (root + 500.0).into();
    let bad = common::violations(&inst_text, &spec, &json.to_string());
    assert!(!bad.is_empty());
}
