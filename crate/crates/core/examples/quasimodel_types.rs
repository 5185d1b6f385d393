//! Two-sided types, their relations and a quasimodel check.

use itl::quasimodel::{validate_quasimodel, Quasimodel, TwoSidedType};
use itl::syntax::{closure, parse};

fn main() {
    let a: TwoSidedType = "neg{<>q, q} pos{<>p}".parse().unwrap();
    let b: TwoSidedType = "neg{<>q, q} pos{p, <>p}".parse().unwrap();
    println!("a = {a}\nb = {b}");
    println!("a valid: {}, b valid: {}", a.is_valid(), b.is_valid());
    println!("a below b: {}, a inside b: {}, a then b: {}", a.leq_t(&b), a.sqsub_t(&b), a.s_t(&b));
    println!("a then empty: {}", a.s_t(&"neg{<>q, q}".parse().unwrap()));
    let bad: TwoSidedType = "neg{<>q} pos{p | r}".parse().unwrap();
    for v in bad.violations() {
        println!("  {v}");
    }
    let sigma = closure(&parse("p").unwrap());
    println!("b restricted to sub(p): {}", b.restrict(&sigma).unwrap());
    println!("b without <>p: {}", b.delete_realized(&parse("<>p").unwrap()).unwrap());

    let q: Quasimodel = include_str!("../fixtures/nondeterministic.qm").parse().unwrap();
    println!("deterministic: {}", q.is_deterministic());
    print!("{}", validate_quasimodel(&q));
    let broken = Quasimodel::from_text("worlds: w\nrel: w->w\nlabel w: neg{q} pos{<>q}\n").unwrap();
    print!("{}", validate_quasimodel(&broken));
}
