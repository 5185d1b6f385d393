//! Unwinds the branching quasimodel into a dynamic poset and checks the verdicts.

use itl::kripke::validate_model;
use itl::quasimodel::Quasimodel;
use itl::syntax::parse;
use itl::unwind::{conservativity_check, extend_terminal, weak_limit, Mode, TypedPath};

fn main() {
    let q: Quasimodel = include_str!("../fixtures/nondeterministic.qm").parse().unwrap();
    let a = q.index("a").unwrap();
    let path = extend_terminal(&q, &TypedPath::at(&q, a)).unwrap();
    println!("terminal extension of a: {}", path.render(&q));

    let wl = weak_limit(&q, 3).unwrap();
    println!("weak limit at bound 3: {} points, {} paths cut off", wl.points.len(), wl.missing.len());
    for (i, p) in wl.points.iter().enumerate() {
        println!("  {:4} {}", wl.model.name(i), p.render(&q));
    }
    print!("{}", wl.model.to_text());
    println!("valid dynamic poset: {}", validate_model(&wl.model.to_raw()).unwrap().valid);

    let f = parse("<>p -> <>q").unwrap();
    let report = conservativity_check(&q, &f, "a", Mode::Falsify).unwrap();
    print!("{report}");
    println!("passed: {}", report.passed());
}
