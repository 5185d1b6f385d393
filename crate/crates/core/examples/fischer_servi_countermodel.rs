//! A three-world dynamic poset whose step is monotone but not open.
//!
//! Both Fischer Servi schemas fail at its root while constant domain holds everywhere.

use itl::kripke::{check_validity, eval, validate_model, Model, RawModel};
use itl::proofs::enumerate_axiom_instances;
use itl::syntax::parse;

const MODEL: &str = include_str!("../fixtures/fs_countermodel.model");

fn main() {
    let report = validate_model(&RawModel::parse(MODEL).unwrap()).unwrap();
    print!("{report}");
    let m = Model::from_text(MODEL).unwrap();
    for text in ["(O p -> O q) -> O(p -> q)", "(<>p -> []q) -> [](p -> q)", "[](p | q) -> []p | <>q"] {
        let f = parse(text).unwrap();
        let set = eval(&m, &f);
        let names: Vec<&str> = set.iter().map(|w| m.name(w)).collect();
        println!("{f}: true at {{{}}}", names.join(", "));
    }
    let sys = "itl-cd".parse().unwrap();
    let instances = enumerate_axiom_instances(sys, 2, 7, 100);
    let valid = instances.iter().filter(|f| check_validity(&m, f).0).count();
    println!("{valid} of {} sampled {sys} axiom instances are valid", instances.len());
}
