use ordstate::surface::{desugar, parse, parse_type, pretty, pretty_type, Binder, Expr, ExprKind, IndexText, Param, SType, Span};
use ordstate::term::{Effect, Mode, Name, PairKind};
use proptest::prelude::*;

fn binder(s: &str) -> Binder {
    Binder {
        name: Name::new(s),
        span: Span::default(),
    }
}

fn ix(s: &str) -> IndexText {
    IndexText {
        text: s.to_string(),
        span: Span::default(),
    }
}

fn mk(kind: ExprKind) -> Expr {
    Expr::new(kind, Span::default())
}

fn arb_name() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["x", "y", "h1", "of0", "f", "_"]).prop_map(str::to_string)
}

/// `n` pairwise distinct names, none of them `_`.
fn distinct_names(n: usize) -> impl Strategy<Value = Vec<String>> {
    Just(vec!["x", "y", "h1", "of0", "f", "g", "z"])
        .prop_shuffle()
        .prop_map(move |v| v[..n].iter().map(|s| s.to_string()).collect())
}

fn arb_index() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["r", "rc", "(r|w)*c", "eps", "r*", "a b"]).prop_map(str::to_string)
}

fn arb_type() -> impl Strategy<Value = SType> {
    let leaf = prop_oneof![Just(SType::Unit), arb_index().prop_map(|m| SType::Res(ix(&m)))];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (
                prop::sample::select(vec![Mode::Plain, Mode::Unordered, Mode::Right, Mode::Left]),
                any::<bool>(),
                inner.clone(),
                inner.clone()
            )
                .prop_map(|(m, e, a, b)| SType::Arrow(
                    m,
                    if e { Effect::Impure } else { Effect::Pure },
                    Box::new(a),
                    Box::new(b)
                )),
            (any::<bool>(), inner.clone(), inner).prop_map(|(o, a, b)| SType::Prod(
                if o { PairKind::Ordered } else { PairKind::Unordered },
                Box::new(a),
                Box::new(b)
            )),
        ]
    })
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        Just(mk(ExprKind::Unit)),
        arb_name().prop_filter("not a wildcard", |x| x != "_").prop_map(|x| mk(ExprKind::Var(Name::new(&x)))),
        arb_index().prop_map(|m| mk(ExprKind::New(ix(&m)))),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        let e = inner.clone();
        prop_oneof![
            (arb_index(), e.clone()).prop_map(|(m, x)| mk(ExprKind::Op(ix(&m), Box::new(x)))),
            (arb_index(), e.clone()).prop_map(|(m, x)| mk(ExprKind::Split(ix(&m), Box::new(x)))),
            e.clone().prop_map(|x| mk(ExprKind::Drop(Box::new(x)))),
            (e.clone(), e.clone()).prop_map(|(a, b)| mk(ExprKind::App(Box::new(a), Box::new(b)))),
            (e.clone(), e.clone()).prop_map(|(a, b)| mk(ExprKind::Pair(Box::new(a), Box::new(b)))),
            (e.clone(), e.clone()).prop_map(|(a, b)| mk(ExprKind::Seq(Box::new(a), Box::new(b)))),
            (e.clone(), arb_type()).prop_map(|(a, t)| mk(ExprKind::Ann(Box::new(a), t))),
            (arb_name(), e.clone()).prop_map(|(x, b)| mk(ExprKind::Lam(binder(&x), Box::new(b)))),
            (arb_name(), e.clone(), e.clone())
                .prop_map(|(x, m, n)| mk(ExprKind::Let(binder(&x), Box::new(m), Box::new(n)))),
            (distinct_names(2), e.clone(), e.clone()).prop_map(|(xy, m, n)| (xy[0].clone(), xy[1].clone(), m, n)).prop_map(|(x, y, m, n)| mk(ExprKind::LetPair(
                binder(&x),
                binder(&y),
                Box::new(m),
                Box::new(n)
            ))),
            (distinct_names(5), prop::collection::vec(any::<bool>(), 0..3), arb_type(), e.clone(), e)
                .prop_map(|(ns, shape, ty, def, body)| {
                    let mut rest = ns[1..].iter();
                    let params = shape
                        .iter()
                        .filter_map(|&pair| {
                            let a = rest.next()?;
                            Some(match rest.next() {
                                Some(b) if pair => Param::Pair(binder(a), binder(b)),
                                _ => Param::Var(binder(a)),
                            })
                        })
                        .collect();
                    (ns[0].clone(), ty, params, def, body)
                })
                .prop_map(|(f, ty, params, def, body)| mk(ExprKind::Def {
                    name: binder(&f),
                    ty,
                    params,
                    def: Box::new(def),
                    body: Box::new(body),
                })),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn printed_expressions_parse_back(e in arb_expr()) {
        let text = pretty(&e);
        let back = parse(&text).map_err(|err| TestCaseError::fail(format!("{err}\n{text}")))?;
        prop_assert_eq!(back.erase_spans(), e.erase_spans(), "{}", text);
    }

    #[test]
    fn printed_types_parse_back(t in arb_type()) {
        let text = pretty_type(&t);
        let back = parse_type(&text).map_err(|err| TestCaseError::fail(format!("{err}\n{text}")))?;
        prop_assert_eq!(pretty_type(&back), text);
    }

    #[test]
    fn spans_nest(e in arb_expr()) {
        let text = pretty(&e);
        let parsed = parse(&text).unwrap();
        fn check(e: &Expr, len: usize) -> bool {
            e.span.end <= len && e.children().iter().all(|c| e.span.contains(c.span) && check(c, len))
        }
        prop_assert!(check(&parsed, text.len()), "{}", text);
    }

    #[test]
    fn desugaring_renames_binders_apart(e in arb_expr()) {
        let d = desugar(&e);
        let (mut binders, mut uses) = (Vec::new(), Vec::new());
        collect(&d.expr, &mut binders, &mut uses);
        let unique: std::collections::BTreeSet<_> = binders.iter().collect();
        prop_assert_eq!(unique.len(), binders.len(), "{}", pretty(&d.expr));
        prop_assert!(d.wildcards.iter().all(|w| binders.contains(w)));
        prop_assert!(uses.iter().all(|x| !d.wildcards.contains(x)));
    }

    #[test]
    fn parser_never_panics(s in "[a-z{}()!\\\\.,;:|*<>\\-\\[\\] \n]{0,40}") {
        let _ = parse(&s);
        let _ = parse_type(&s);
    }
}

fn collect(e: &Expr, binders: &mut Vec<Name>, uses: &mut Vec<Name>) {
    match &e.kind {
        ExprKind::Var(x) => uses.push(x.clone()),
        ExprKind::Lam(x, _) | ExprKind::Let(x, ..) => binders.push(x.name.clone()),
        ExprKind::LetPair(x, y, ..) => binders.extend([x.name.clone(), y.name.clone()]),
        ExprKind::Def { .. } => panic!("definitions survive desugaring"),
        _ => {}
    }
    for c in e.children() {
        collect(c, binders, uses);
    }
}

#[test]
fn comments_and_blank_lines_are_ignored() {
    let a = parse("-- header\n\nlet x = unit in -- trailing\n x\n").unwrap();
    let b = parse("let x = unit in x").unwrap();
    assert_eq!(a.erase_spans(), b.erase_spans());
}

#[test]
fn parse_errors_carry_a_position() {
    let src = "let x = new {r} in\nlet = x in x";
    let err = parse(src).unwrap_err();
    assert_eq!(err.span.line_col(src), (2, 5));
}
