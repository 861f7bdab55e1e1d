//! Random instances and specs for fuzzing.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

const DIRECTIONS: [&str; 8] = [
    "left",
    "right",
    "above",
    "below",
    "directlyLeft",
    "directlyRight",
    "directlyAbove",
    "directlyBelow",
];

#[derive(Debug, Clone)]
pub struct Case {
    pub instance: String,
    pub spec: String,
}

/// At most 12 atoms over up to 3 sigs, up to 3 binary fields, and up to 6
/// constraints drawn from every constraint form.
pub fn random_case(rng: &mut ChaCha8Rng) -> Case {
    let sig_count = rng.gen_range(1..=3);
    let sigs: Vec<String> = (0..sig_count).map(|i| format!("S{i}")).collect();
    let atom_count = rng.gen_range(1..=12);
    let atoms: Vec<(String, String)> = (0..atom_count)
        .map(|i| (format!("A{i}"), sigs.choose(rng).unwrap().clone()))
        .collect();
    let field_count = rng.gen_range(1..=3);
    let fields: Vec<String> = (0..field_count).map(|i| format!("f{i}")).collect();
    let field_json: Vec<_> = fields
        .iter()
        .map(|name| {
            let n = rng.gen_range(0..=atom_count + 2);
            let mut tuples: Vec<[String; 2]> = Vec::new();
            for _ in 0..n {
                let a = atoms.choose(rng).unwrap().0.clone();
                let b = atoms.choose(rng).unwrap().0.clone();
                let t = [a, b];
                if !tuples.contains(&t) {
                    tuples.push(t);
                }
            }
            json!({"name": name, "owner": sigs[0], "arity": 2, "tuples": tuples})
        })
        .collect();
    let instance = json!({
        "sigs": sigs.iter().map(|s| json!({"name": s})).collect::<Vec<_>>(),
        "atoms": atoms.iter().map(|(id, sig)| json!({"id": id, "sig": sig})).collect::<Vec<_>>(),
        "fields": field_json,
    })
    .to_string();

    let mut lines = Vec::new();
    for _ in 0..rng.gen_range(0..=6) {
        let field = fields.choose(rng).unwrap();
        let line = match rng.gen_range(0..4) {
            0 => {
                let flow = ["", " clockwise", " counterclockwise"].choose(rng).unwrap();
                format!("cyclic {field}{flow}")
            }
            1 => {
                let k = rng.gen_range(1..=2);
                let dirs: Vec<&str> = DIRECTIONS.choose_multiple(rng, k).copied().collect();
                format!("orient field {field} {}", dirs.join(","))
            }
            2 => {
                let a = sigs.choose(rng).unwrap();
                let b = sigs.choose(rng).unwrap();
                format!("orient sig {a} {b} {}", DIRECTIONS.choose(rng).unwrap())
            }
            _ => format!("group {field} {}", ["range", "domain"].choose(rng).unwrap()),
        };
        lines.push(line);
    }
    Case {
        instance,
        spec: lines.join("\n"),
    }
}
