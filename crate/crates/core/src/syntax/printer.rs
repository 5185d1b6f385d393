//! Printer with minimal parentheses.

use super::Formula;

const IMP: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const UNARY: u8 = 4;

fn level(f: &Formula) -> u8 {
    match f {
        Formula::Implies(_, b) if **b != Formula::Bottom => IMP,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        _ => UNARY,
    }
}

fn write(f: &Formula, min: u8, out: &mut String) {
    if level(f) < min {
        out.push('(');
        write(f, IMP, out);
        out.push(')');
        return;
    }
    match f {
        Formula::Bottom => out.push_str("false"),
        Formula::Atom(a) => out.push_str(a),
        Formula::Implies(a, b) if **b == Formula::Bottom => prefix("~", a, out),
        Formula::Implies(a, b) => binary(a, " -> ", b, OR, IMP, out),
        Formula::Or(a, b) => binary(a, " | ", b, OR, AND, out),
        Formula::And(a, b) => binary(a, " & ", b, AND, UNARY, out),
        Formula::Next(a) => prefix("O", a, out),
        Formula::Eventually(a) => prefix("<>", a, out),
        Formula::Henceforth(a) => prefix("[]", a, out),
    }
}

fn binary(a: &Formula, op: &str, b: &Formula, left: u8, right: u8, out: &mut String) {
    write(a, left, out);
    out.push_str(op);
    write(b, right, out);
}

fn prefix(op: &str, a: &Formula, out: &mut String) {
    out.push_str(op);
    let mut body = String::new();
    write(a, UNARY, &mut body);
    if op == "O" && body.starts_with(|c: char| c.is_ascii_alphanumeric()) {
        out.push(' ');
    }
    out.push_str(&body);
}

/// Renders `f` so that [`parse`](super::parse) gives back `f`.
pub fn render(f: &Formula) -> String {
    let mut out = String::new();
    write(f, IMP, &mut out);
    out
}
