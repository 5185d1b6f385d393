//! Parses a few formulas, prints them back and shows their measures.

use itl::syntax::{closure, parse};

fn main() {
    for text in ["p -> q -> r", "(p -> q) -> r", "O(p & q) <-> O p & O q", "[](p | q) -> []p | <>q", "~<>p"] {
        let f = parse(text).expect("well-formed");
        println!("{text}");
        println!("  rendered:          {f}");
        println!("  length:            {}", f.length());
        println!("  temporal depth:    {}", f.temporal_depth());
        println!("  implication depth: {}", f.implication_depth());
        println!("  fragment:          {:?}", f.fragment());
        println!("  subformulas:       {}", closure(&f).len());
        assert_eq!(parse(&f.to_string()).unwrap(), f);
    }
    match parse("((p") {
        Ok(_) => unreachable!(),
        Err(e) => println!("((p: {e}"),
    }
}
