mod common;

use std::time::{Duration, Instant};

use cnd::pipeline::{run, Pins};
use cnd::{parse_spec, Instance, LayoutParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn random_cases_either_fail_cleanly_or_satisfy_the_spec() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let start = Instant::now();
    let mut laid_out = 0;
    for i in 0..1000 {
        let case = common::gen::random_case(&mut rng);
        let instance = Instance::parse(&case.instance).unwrap();
        match run(&instance, &case.spec, &LayoutParams::default(), &Pins::new()) {
            Ok(diagram) => {
                laid_out += 1;
                let spec = parse_spec(&case.spec).unwrap();
                let bad = common::violations(&case.instance, &spec, &diagram.to_json());
                assert!(bad.is_empty(), "case {i}: {case:#?}\n{bad:#?}");
            }
            Err(e) => assert!(
                matches!(e.kind(), "static" | "unsat" | "group" | "input"),
                "case {i}: {case:#?}\n{e}"
            ),
        }
    }
    eprintln!("{laid_out} of 1000 cases laid out");
    assert!(laid_out >= 200, "only {laid_out} cases laid out");
    assert!(start.elapsed() < Duration::from_secs(60), "took {:?}", start.elapsed());
}
