use std::path::Path;

use attnplan::pursuit::{bundled_config, compile, load_spec};
use proptest::prelude::*;

const CAP: usize = 2_000;

/// Parse and, if accepted, compile under a small state cap. Must never panic.
fn exercise(text: &str) {
    let Ok(mut spec) = load_spec(text) else { return };
    spec.state_cap = spec.state_cap.min(CAP);
    if let Ok(world) = compile(&spec) {
        let m = &world.mdp;
        for s in 0..m.num_states() {
            for a in 0..m.num_actions() {
                let total: f64 = m.transition(s, a).map(|(_, p)| p).sum();
                assert!((total - 1.0).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn fuzz_seeds_are_accepted() {
    for dir in ["parse_config", "compile_config"] {
        let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(dir);
        let mut seen = 0;
        for entry in std::fs::read_dir(&root).unwrap() {
            let text = std::fs::read_to_string(entry.unwrap().path()).unwrap();
            load_spec(&text).unwrap();
            exercise(&text);
            seen += 1;
        }
        assert!(seen >= 3, "{dir}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn mutated_configs_never_panic(cut in 0usize..600, pos in 0usize..600, byte in 0u8..128) {
        let mut bytes = bundled_config("mini-3x3").unwrap().as_bytes().to_vec();
        let p = pos % bytes.len();
        bytes[p] = byte;
        bytes.truncate(cut.max(1).min(bytes.len()));
        if let Ok(text) = String::from_utf8(bytes) {
            exercise(&text);
        }
    }

    #[test]
    fn numeric_fields_accept_or_reject_cleanly(
        width in -2i64..6,
        slip in -0.5f64..1.5,
        eps in -1.0f64..3.0,
        prob in -0.5f64..1.5,
        discount in -0.5f64..1.5,
    ) {
        let text = bundled_config("mini-3x3")
            .unwrap()
            .replace("width = 3", &format!("width = {width}"))
            .replace("slip_main = 0.7", &format!("slip_main = {slip:?}"))
            .replace("epsilon = 0.0", &format!("epsilon = {eps:?}"))
            .replace("prob = 1.0", &format!("prob = {prob:?}"))
            .replace("discount = 0.95", &format!("discount = {discount:?}"));
        exercise(&text);
    }
}
