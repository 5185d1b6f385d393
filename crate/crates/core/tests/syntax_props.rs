use itl::syntax::{closure, is_subformula_closed, parse, render, Formula};
use proptest::prelude::*;

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::Bottom),
        prop::sample::select(vec!["p", "q", "r", "x1"]).prop_map(|a| Formula::Atom(a.to_string())),
    ];
    leaf.prop_recursive(5, 40, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::Or(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::Implies(Box::new(a), Box::new(b))),
            inner.clone().prop_map(|a| Formula::Next(Box::new(a))),
            inner.clone().prop_map(|a| Formula::Eventually(Box::new(a))),
            inner.prop_map(|a| Formula::Henceforth(Box::new(a))),
        ]
    })
}

proptest! {
    #[test]
    fn render_then_parse_is_identity(f in formula()) {
        let text = render(&f);
        prop_assert_eq!(parse(&text).unwrap(), f.clone());
        prop_assert_eq!(f.to_string(), text);
    }

    #[test]
    fn spacing_does_not_matter(f in formula()) {
        let tight: String = render(&f).chars().filter(|c| *c != ' ').collect();
        prop_assert_eq!(parse(&tight).unwrap(), f);
    }

    #[test]
    fn closure_is_closed_and_small(f in formula()) {
        let c = closure(&f);
        prop_assert!(c.contains(&f));
        prop_assert!(is_subformula_closed(&c));
        prop_assert!(c.len() <= f.length());
        prop_assert!(c.iter().all(|g| f.contains(g)));
    }

    #[test]
    fn measures_are_consistent(f in formula()) {
        prop_assert!(f.temporal_depth() <= f.depth());
        prop_assert!(f.implication_depth() <= f.depth());
        prop_assert!(f.depth() <= f.length());
        let frag = f.fragment();
        prop_assert_eq!(frag.is_box_free(), !render(&f).contains("[]"));
        prop_assert_eq!(frag.is_diamond_free(), !render(&f).contains("<>"));
    }
}
