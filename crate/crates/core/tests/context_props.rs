mod oracles;

use std::collections::BTreeSet;

use ordstate::context::{decompose, equiv, subcontext, usage_projection, Binding, Context};
use ordstate::opm::{Index, OpmInstance};
use ordstate::term::{Loc, Name, Type};
use proptest::prelude::*;

use oracles::{equiv_brute, ref_graph, subcontext_brute};

#[derive(Debug, Clone, Copy)]
enum Leaf {
    Empty,
    Ord(bool),
    Unr,
}

#[derive(Debug, Clone)]
enum Shape {
    Leaf(usize),
    Seq(Box<Shape>, Box<Shape>),
    Par(Box<Shape>, Box<Shape>),
}

fn res(s: &str) -> Type {
    Type::Res(Index::Regex(s.parse().unwrap()))
}

fn leaf(l: Leaf, i: usize) -> Context {
    match l {
        Leaf::Empty => Context::Empty,
        Leaf::Ord(a) => Context::var(&format!("x{i}"), res(if a { "a" } else { "b" })),
        Leaf::Unr => Context::var(&format!("x{i}"), Type::Unit),
    }
}

fn random_shape(order: &[usize], bits: &mut impl Iterator<Item = bool>) -> Shape {
    if order.len() == 1 {
        return Shape::Leaf(order[0]);
    }
    let mid = 1 + (bits.next().unwrap_or(false) as usize) * (order.len() - 1) / 2;
    let mid = mid.clamp(1, order.len() - 1);
    let (l, r) = order.split_at(mid);
    let (a, b) = (random_shape(l, bits), random_shape(r, bits));
    if bits.next().unwrap_or(false) {
        Shape::Seq(Box::new(a), Box::new(b))
    } else {
        Shape::Par(Box::new(a), Box::new(b))
    }
}

fn build(s: &Shape, leaves: &[Leaf]) -> Context {
    match s {
        Shape::Leaf(i) => leaf(leaves[*i], *i),
        Shape::Seq(a, b) => Context::seq(build(a, leaves), build(b, leaves)),
        Shape::Par(a, b) => Context::par(build(a, leaves), build(b, leaves)),
    }
}

fn arb_leaves() -> impl Strategy<Value = Vec<Leaf>> {
    prop::collection::vec(
        prop_oneof![
            1 => Just(Leaf::Empty),
            4 => any::<bool>().prop_map(Leaf::Ord),
            1 => Just(Leaf::Unr),
        ],
        1..7,
    )
}

/// Two contexts over the same bindings, arranged independently.
fn arb_pair() -> impl Strategy<Value = (Context, Context)> {
    arb_leaves().prop_flat_map(|leaves| {
        let n = leaves.len();
        (
            Just(leaves),
            Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
            Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
            prop::collection::vec(any::<bool>(), 32),
            prop::collection::vec(any::<bool>(), 32),
        )
            .prop_map(|(leaves, o1, o2, b1, b2)| {
                (
                    build(&random_shape(&o1, &mut b1.into_iter()), &leaves),
                    build(&random_shape(&o2, &mut b2.into_iter()), &leaves),
                )
            })
    })
}

fn arb_context() -> impl Strategy<Value = Context> {
    arb_pair().prop_map(|(a, _)| a)
}

fn ordered_names(c: &Context) -> Vec<Name> {
    c.ordered_bindings().iter().filter_map(|b| b.var_name().cloned()).collect()
}

fn rename(c: &Context, suffix: &str) -> Context {
    match c {
        Context::Empty => Context::Empty,
        Context::Bind(Binding::Var(x, t)) => Context::var(&format!("{x}{suffix}"), t.clone()),
        Context::Bind(b) => Context::Bind(b.clone()),
        Context::Seq(a, b) => Context::seq(rename(a, suffix), rename(b, suffix)),
        Context::Par(a, b) => Context::par(rename(a, suffix), rename(b, suffix)),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn equiv_matches_brute_force((a, b) in arb_pair()) {
        prop_assert_eq!(equiv(&a, &b), equiv_brute(&ref_graph(&a), &ref_graph(&b)), "{} vs {}", a, b);
        prop_assert_eq!(equiv(&a, &b), equiv(&b, &a));
        prop_assert!(equiv(&a, &a));
    }

    #[test]
    fn subcontext_matches_brute_force((a, b) in arb_pair()) {
        prop_assert_eq!(subcontext(&a, &b), subcontext_brute(&ref_graph(&a), &ref_graph(&b)), "{} vs {}", a, b);
        prop_assert!(subcontext(&a, &a));
        if subcontext(&a, &b) && subcontext(&b, &a) {
            prop_assert!(equiv(&a, &b));
        }
    }

    #[test]
    fn parallel_is_below_sequential(a in arb_context(), b in arb_context()) {
        let b = rename(&b, "'");
        prop_assert!(subcontext(&Context::par(a.clone(), b.clone()), &Context::seq(a.clone(), b.clone())));
        prop_assert!(equiv(&Context::par(a.clone(), b.clone()), &Context::par(b.clone(), a.clone())));
    }

    #[test]
    fn simplify_preserves_meaning(c in arb_context()) {
        let s = c.simplify();
        prop_assert!(equiv(&c, &s));
        prop_assert_eq!(c.dom(), s.dom());
    }

    #[test]
    fn restriction_is_the_induced_subgraph(c in arb_context(), mask in prop::collection::vec(any::<bool>(), 8)) {
        let names = ordered_names(&c);
        let keep: BTreeSet<Name> = names.iter().zip(&mask).filter(|(_, &m)| m).map(|(x, _)| x.clone()).collect();
        let full = ref_graph(&c);
        let sub = ref_graph(&c.restrict(&keep));
        let idx: Vec<usize> = (0..names.len()).filter(|&i| keep.contains(&names[i])).collect();
        let expected: BTreeSet<(usize, usize)> = full
            .edges
            .iter()
            .filter_map(|&(i, j)| {
                let a = idx.iter().position(|&k| k == i)?;
                let b = idx.iter().position(|&k| k == j)?;
                Some((a, b))
            })
            .collect();
        prop_assert_eq!(sub.edges, expected);
        prop_assert!(sub.unr.is_empty() || sub.unr.iter().all(|b| keep.contains(b.var_name().unwrap())));
    }

    #[test]
    fn decomposition_is_sound(c in arb_context(), mask in prop::collection::vec(any::<bool>(), 8)) {
        let names = ordered_names(&c);
        let xs: BTreeSet<Name> = names.iter().zip(&mask).filter(|(_, &m)| m).map(|(x, _)| x.clone()).collect();
        if let Some((g, inner)) = decompose(&c, &xs) {
            let inner_ord: BTreeSet<Name> = ordered_names(&inner).into_iter().collect();
            prop_assert_eq!(&inner_ord, &xs);
            prop_assert!(g.ordered_vars().is_disjoint(&xs));
            prop_assert!(subcontext(&c, &g.fill(&inner)), "{} vs {}", c, g.fill(&inner));
        }
    }
}

#[test]
fn decomposition_of_a_prefix_always_succeeds() {
    let c = Context::seq(
        Context::var("a", res("a")),
        Context::seq(Context::var("b", res("b")), Context::var("c", res("a"))),
    );
    for keep in [vec!["a"], vec!["b"], vec!["c"], vec!["a", "b"], vec!["b", "c"], vec!["a", "b", "c"]] {
        let xs: BTreeSet<Name> = keep.iter().map(|s| Name::new(s)).collect();
        assert!(decompose(&c, &xs).is_some(), "{keep:?}");
    }
    // the middle binding would have to move
    let xs: BTreeSet<Name> = ["a", "c"].iter().map(|s| Name::new(s)).collect();
    assert!(decompose(&c, &xs).is_none());
}

#[test]
fn usage_projection_multiplies_along_the_order() {
    let opm = OpmInstance::by_name("regex").unwrap();
    let loc = |s: &str| Context::Bind(Binding::Loc(Loc(0), opm.parse_index(s).unwrap()));
    let chain = Context::seq(loc("r"), Context::seq(loc("w"), loc("c")));
    let p = usage_projection(&chain, &opm).unwrap().unwrap();
    assert_eq!(p, opm.parse_index("rwc").unwrap());
    assert_eq!(usage_projection(&Context::par(loc("r"), loc("w")), &opm).unwrap(), None);
    assert_eq!(usage_projection(&Context::Empty, &opm).unwrap(), Some(opm.parse_index("eps").unwrap()));
}
