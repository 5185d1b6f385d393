//! Builds the derivation of "constant domain implies backward induction" and checks it.

use itl::proofs::{cd_to_bi, check_derivation, check_proof_of, Derivation, Justification};
use itl::syntax::parse;

fn main() {
    let d = cd_to_bi();
    let goal = parse("([](p | q) -> []p | <>q) -> [](p | q) & [](O q -> q) -> []p | q").unwrap();
    println!("{} lines", d.lines.len());
    for line in d.lines.iter().rev().take(4).collect::<Vec<_>>().into_iter().rev() {
        println!("  {} ; {}", line.formula, line.justification);
    }
    for sys in ["itl0", "itl1", "itl0-box"] {
        let verdict = match check_proof_of(&d, sys.parse().unwrap(), &goal) {
            Ok(()) => "accepted".to_string(),
            Err(e) => format!("rejected: {e}"),
        };
        println!("{sys}: {verdict}");
    }
    let text = d.to_string();
    let again: Derivation = text.parse().unwrap();
    assert_eq!(again, d);
    let mut broken = d.clone();
    let k = broken.lines.iter().position(|l| matches!(l.justification, Justification::Mp(..))).unwrap();
    if let Justification::Mp(a, b) = broken.lines[k].justification {
        broken.lines[k].justification = Justification::Mp(a, b.saturating_sub(1).max(1));
    }
    println!(
        "after editing line {}: {:?}",
        k + 1,
        check_derivation(&broken, "itl0".parse().unwrap()).err().map(|e| e.to_string())
    );
}
