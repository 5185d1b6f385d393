//! Samples axiom instances on random models, on matching and mismatched classes.

use itl::fuzz::{fuzz_soundness, FuzzConfig};

fn main() {
    for (system, class, depth) in
        [("itl-cd", "cont", 3), ("itl1", "pers", 3), ("itl-fs", "cont-not-open", 1), ("itl-cd", "real", 1)]
    {
        let cfg = FuzzConfig {
            system: system.parse().unwrap(),
            class: class.parse().unwrap(),
            trials: 100,
            depth,
            ..FuzzConfig::default()
        };
        println!("{}\n", fuzz_soundness(&cfg));
    }
}
