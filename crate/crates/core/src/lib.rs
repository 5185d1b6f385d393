//! Workbench for intuitionistic linear temporal logic.
//!
//! The crate covers five tasks:
//!
//! * [`syntax`]: formulas over `false`, atoms, `&`, `|`, `->`, `O` (next), `<>` (eventually)
//!   and `[]` (henceforth), with a parser and a printer.
//! * [`kripke`]: finite dynamic posets and their evaluator.
//! * [`realline`]: exact semantics on the real line under the doubling map.
//! * [`proofs`]: a Hilbert proof checker for the four logics and their fragments.
//! * [`quasimodel`] and [`unwind`]: two-sided types, quasimodels, and unwinding them into dynamic posets.
//!
//! [`fixtures`] and [`fuzz`] tie these together, and [`cli`] exposes them on the command line.
//!
//! Each capability has a runnable program under `examples/`:
//!
//! ```text
//! cargo run --example parse_render
//! cargo run --example fischer_servi_countermodel
//! cargo run --example real_line_doubling
//! cargo run --example check_derivation
//! cargo run --example quasimodel_types
//! cargo run --example unwind_quasimodel
//! cargo run --example soundness_fuzz
//! ```
//!
//! A small session:
//!
//! ```
//! use itl::syntax::parse;
//! use itl::kripke::{eval, Model};
//!
//! let m = Model::from_text(
//!     "worlds: w0 w1 w2\norder: w1<=w2\nmap: w0->w1 w1->w1 w2->w2\nval p: w2\nval q:\n",
//! )
//! .unwrap();
//! let fs = parse("(O p -> O q) -> O(p -> q)").unwrap();
//! assert!(!eval(&m, &fs).contains(m.index("w0").unwrap()));
//! ```

pub mod cli;
pub mod fixtures;
pub mod fuzz;
pub mod kripke;
pub mod proofs;
pub mod quasimodel;
pub mod realline;
pub mod syntax;
pub mod unwind;

pub use syntax::{parse, render, Formula, FormulaSet};
