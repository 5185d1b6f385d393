//! Exact truth sets on the real line under `x -> 2x`.

use itl::realline::{eval_real, parse_point, parse_valuation};
use itl::syntax::parse;

fn main() {
    let v = parse_valuation("p=(-inf,1); q=(0,inf)").unwrap();
    for text in
        ["p | q", "[](p | q)", "[]p", "<>q", "O p", "[](p | q) -> []p | <>q", "[](p | q) & [](O q -> q) -> []p | q"]
    {
        let f = parse(text).unwrap();
        let set = eval_real(&v, &f).unwrap();
        let zero = set.member(&parse_point("0").unwrap());
        println!("{f:40} {set:30} at 0: {zero}");
    }
    let ladder = parse_valuation("p=(-inf,0) U ladder(seed=(3/4,1); block=(1/2,1]; sign=+)").unwrap();
    for text in ["p", "<>p", "[]p", "O p"] {
        let f = parse(text).unwrap();
        println!("{f:6} {}", eval_real(&ladder, &f).unwrap());
    }
}
