//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

mod common;

use std::ffi::OsStr;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use cnd::pipeline::{default_diagram, run, Pins};
use cnd::{parse_spec, Instance, LayoutParams};

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_ms: u64) -> Check {
    ensure(elapsed <= Duration::from_millis(limit_ms), || {
        format!("took {elapsed:?}, limit {limit_ms}ms")
    })
}

fn diagram(inst: &str, spec: &str, params: &LayoutParams) -> Result<Value, String> {
    let instance = Instance::parse(inst).map_err(|e| e.to_string())?;
    let d = run(&instance, spec, params, &Pins::new()).map_err(|e| e.to_string())?;
    Ok(serde_json::from_str(&d.to_json()).unwrap())
}

fn center(d: &Value, id: &str) -> (f64, f64) {
    let n = d["nodes"].as_array().unwrap().iter().find(|n| n["id"] == id).unwrap();
    (n["x"].as_f64().unwrap(), n["y"].as_f64().unwrap())
}

fn evaluate(inst: &str, spec: &str, d: &Value) -> Check {
    let bad = common::violations(inst, &parse_spec(spec).unwrap(), &d.to_string());
    ensure(bad.is_empty(), || format!("{bad:?}"))
}

fn cli_layout(inst: &str, spec: &str) -> (std::process::Output, bool, Duration) {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out.svg");
    let dir = common::fixture_dir();
    let (i, s) = (dir.join(inst), dir.join(spec));
    let start = Instant::now();
    let o = common::cli(&[
        OsStr::new("layout"),
        "-i".as_ref(),
        i.as_os_str(),
        "-s".as_ref(),
        s.as_os_str(),
        "-o".as_ref(),
        out.as_os_str(),
    ]);
    let elapsed = start.elapsed();
    (o, out.exists(), elapsed)
}

fn static_error_fidelity() -> Check {
    let (o, wrote, elapsed) = cli_layout("linked-list.json", "inconsistent.cnd");
    let stderr = String::from_utf8_lossy(&o.stderr);
    ensure(
        stderr == "Inconsistent orientation constraint: Field next cannot be laid out with directions: right, left.",
        || format!("stderr {stderr:?}"),
    )?;
    ensure(o.status.code() == Some(1), || format!("exit {:?}", o.status.code()))?;
    ensure(!wrote, || "output file written".into())?;
    within(elapsed, 100)
}

fn binary_tree() -> Check {
    let start = Instant::now();
    let (inst, spec) = common::corpus_pair("bst");
    let d = diagram(&inst, &spec, &LayoutParams::default())?;
    let elapsed = start.elapsed();
    let raw: Value = serde_json::from_str(&inst).unwrap();
    let mut checked = 0;
    for f in raw["fields"].as_array().unwrap() {
        let sign = match f["name"].as_str().unwrap() {
            "left" => -1.0,
            "right" => 1.0,
            _ => continue,
        };
        for t in f["tuples"].as_array().unwrap() {
            let (p, c) = (center(&d, t[0].as_str().unwrap()), center(&d, t[1].as_str().unwrap()));
            ensure(sign * (c.0 - p.0) >= 100.0 - 1e-6 && c.1 - p.1 >= 100.0 - 1e-6, || {
                format!("{t} misplaced")
            })?;
            checked += 1;
        }
    }
    ensure(checked == 6, || format!("{checked} tree tuples"))?;
    evaluate(&inst, &spec, &d)?;
    within(elapsed, 1000)
}

fn ring_angles(d: &Value) -> Vec<f64> {
    let (cx, cy) = (d["cycles"][0]["cx"].as_f64().unwrap(), d["cycles"][0]["cy"].as_f64().unwrap());
    (0..5)
        .map(|i| {
            let (x, y) = center(d, &format!("Light{i}"));
            (x - cx).atan2(-(y - cy)).to_degrees()
        })
        .collect()
}

fn ring_of_five() -> Check {
    let start = Instant::now();
    let (inst, spec) = common::corpus_pair("ring-lights");
    let cw = diagram(&inst, &spec, &LayoutParams::default())?;
    let ccw_spec = spec.replace("clockwise", "counterclockwise");
    let ccw = diagram(&inst, &ccw_spec, &LayoutParams::default())?;
    let elapsed = start.elapsed();
    for (d, step) in [(&cw, 72.0), (&ccw, -72.0)] {
        let (cx, cy, r) = (
            d["cycles"][0]["cx"].as_f64().unwrap(),
            d["cycles"][0]["cy"].as_f64().unwrap(),
            d["cycles"][0]["r"].as_f64().unwrap(),
        );
        for i in 0..5 {
            let (x, y) = center(d, &format!("Light{i}"));
            let dist = (x - cx).hypot(y - cy);
            ensure((dist - r).abs() <= 1e-6, || format!("Light{i} off circle by {}", dist - r))?;
        }
        let a = ring_angles(d);
        for i in 0..5 {
            let gap = (a[(i + 1) % 5] - a[i] - step).rem_euclid(360.0);
            ensure(gap.min(360.0 - gap) <= 1e-6, || format!("gap after Light{i} is off by {gap}"))?;
        }
    }
    evaluate(&inst, &spec, &cw)?;
    evaluate(&inst, &ccw_spec, &ccw)?;
    within(elapsed, 1000)
}

fn river_crossing() -> Check {
    let start = Instant::now();
    let (inst, spec) = common::corpus_pair("river-crossing");
    let d = diagram(&inst, &spec, &LayoutParams::default())?;
    let elapsed = start.elapsed();
    let plain = diagram(&inst, "", &LayoutParams::default())?;
    let count = |d: &Value, shore: &str| {
        d["edges"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|e| e["field"] == "animals" && e["from"]["id"].as_str().unwrap().ends_with(shore))
            .count()
    };
    for (shore, members) in [("Near", 3), ("Far", 2)] {
        ensure(count(&plain, shore) == members, || format!("{shore}: ungrouped edge count"))?;
        ensure(count(&d, shore) == 1, || format!("{shore}: {} grouped edges", count(&d, shore)))?;
    }
    evaluate(&inst, &spec, &d)?;
    within(elapsed, 1000)
}

fn bad_instance() -> Check {
    let (o, wrote, _) = cli_layout("dag-tree.json", "dag-tree.cnd");
    let stderr = String::from_utf8_lossy(&o.stderr);
    ensure(o.status.code() == Some(2), || format!("exit {:?}", o.status.code()))?;
    ensure(stderr.contains("N0") && stderr.contains("N1"), || format!("stderr {stderr:?}"))?;
    ensure(!wrote, || "diagram written".into())
}

fn anti_masking() -> Check {
    let (inst, spec) = common::corpus_pair("dining-philosophers");
    let instance = Instance::parse(&inst).unwrap();
    let svg = run(&instance, &spec, &LayoutParams::default(), &Pins::new())
        .map_err(|e| e.to_string())?
        .to_svg();
    let forks = svg.matches("id=\"node-Fork").count();
    ensure(forks == 6, || format!("{forks} fork nodes"))
}

fn refinement_identity() -> Check {
    let params = LayoutParams {
        seed: 11,
        ..LayoutParams::default()
    };
    for name in &common::CORPUS[..10] {
        let instance = Instance::parse(&common::corpus_pair(name).0).unwrap();
        let empty = run(&instance, "", &params, &Pins::new()).map_err(|e| e.to_string())?;
        let default = default_diagram(&instance, &params);
        ensure(empty.to_svg() == default.to_svg(), || format!("{name}: svg differs"))?;
        ensure(empty.to_json() == default.to_json(), || format!("{name}: json differs"))?;
    }
    Ok(())
}

fn determinism() -> Check {
    for name in common::CORPUS {
        let (inst, spec) = common::corpus_pair(name);
        let instance = Instance::parse(&inst).unwrap();
        for seed in [0, 42] {
            let params = LayoutParams {
                seed,
                ..LayoutParams::default()
            };
            let runs: Vec<String> = (0..3)
                .map(|_| run(&instance, &spec, &params, &Pins::new()).map(|d| d.to_svg()))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            ensure(runs[0] == runs[1] && runs[1] == runs[2], || format!("{name} seed {seed}"))?;
        }
    }
    Ok(())
}

fn fuzz_soundness() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for i in 0..1000 {
        let case = common::gen::random_case(&mut rng);
        let instance = Instance::parse(&case.instance).unwrap();
        if let Ok(d) = run(&instance, &case.spec, &LayoutParams::default(), &Pins::new()) {
            let bad = common::violations(&case.instance, &parse_spec(&case.spec).unwrap(), &d.to_json());
            ensure(bad.is_empty(), || format!("case {i}: {bad:?}"))?;
        }
    }
    within(start.elapsed(), 60_000)
}

fn solver_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..200 {
        let sys = common::fm::random_system(&mut rng);
        ensure(common::fm::solver(&sys) == common::fm::oracle(&sys), || format!("system {i}: {sys:?}"))?;
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("static error fidelity", static_error_fidelity),
        ("binary tree", binary_tree),
        ("ring of five", ring_of_five),
        ("river crossing", river_crossing),
        ("bad instance is loud", bad_instance),
        ("anti-masking", anti_masking),
        ("refinement identity", refinement_identity),
        ("determinism", determinism),
        ("fuzz soundness", fuzz_soundness),
        ("solver oracle", solver_oracle),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let result = check();
        let ms = start.elapsed().as_secs_f64() * 1000.0;
        match result {
            Ok(()) => println!("PASS  {name} ({ms:.1} ms)"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name} ({ms:.1} ms): {why}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
