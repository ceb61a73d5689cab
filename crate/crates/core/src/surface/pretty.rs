use super::ast::{Expr, ExprKind, Param, SType};

// Precedence levels, loosest first.
const ANN: u8 = 0;
const SEQ: u8 = 1;
const TERM: u8 = 2;
const APP: u8 = 3;
const PREFIX: u8 = 4;
const ATOM: u8 = 5;

fn level(e: &Expr) -> u8 {
    match &e.kind {
        ExprKind::Ann(..) => ANN,
        ExprKind::Seq(..) => SEQ,
        ExprKind::Let(..) | ExprKind::LetPair(..) | ExprKind::Def { .. } | ExprKind::Lam(..) => TERM,
        ExprKind::App(..) => APP,
        ExprKind::New(_) | ExprKind::Op(..) | ExprKind::Split(..) | ExprKind::Drop(_) => PREFIX,
        ExprKind::Unit | ExprKind::Var(_) | ExprKind::Pair(..) => ATOM,
    }
}

/// Whether the expression's rightmost part would swallow a trailing `: T`.
fn ends_open(e: &Expr) -> bool {
    match &e.kind {
        ExprKind::Let(..) | ExprKind::LetPair(..) | ExprKind::Def { .. } | ExprKind::Lam(..) => true,
        ExprKind::Seq(_, b) => ends_open(b),
        _ => false,
    }
}

fn go(e: &Expr, min: u8) -> String {
    let text = match &e.kind {
        ExprKind::Unit => "unit".to_string(),
        ExprKind::Var(x) => x.to_string(),
        ExprKind::New(m) => format!("new {{{}}}", m.text),
        ExprKind::Op(m, x) => format!("!{{{}}} {}", m.text, go(x, PREFIX)),
        ExprKind::Split(m, x) => format!("split {{{}}} {}", m.text, go(x, PREFIX)),
        ExprKind::Drop(x) => format!("drop {}", go(x, PREFIX)),
        ExprKind::App(f, a) => format!("{} {}", go(f, APP), go(a, PREFIX)),
        ExprKind::Pair(a, b) => format!("({}, {})", go(a, ANN), go(b, ANN)),
        ExprKind::Ann(x, t) if ends_open(x) => format!("({}) : {}", go(x, ANN), pretty_type(t)),
        ExprKind::Ann(x, t) => format!("{} : {}", go(x, SEQ), pretty_type(t)),
        ExprKind::Seq(a, b) => format!("{}; {}", go(a, APP), go(b, SEQ)),
        ExprKind::Lam(x, body) => format!("\\{}. {}", x.name, go(body, ANN)),
        ExprKind::Let(x, m, n) => format!("let {} = {} in\n{}", x.name, go(m, ANN), go(n, ANN)),
        ExprKind::LetPair(x, y, m, n) => {
            format!("let {}, {} = {} in\n{}", x.name, y.name, go(m, ANN), go(n, ANN))
        }
        ExprKind::Def {
            name,
            ty,
            params,
            def,
            body,
        } => {
            let params: Vec<String> = params
                .iter()
                .map(|p| match p {
                    Param::Var(x) => x.name.to_string(),
                    Param::Pair(a, b) => format!("({}, {})", a.name, b.name),
                })
                .collect();
            let head = std::iter::once(name.name.to_string()).chain(params).collect::<Vec<_>>().join(" ");
            format!(
                "let {} : {}\n    {} = {}\nin\n{}",
                name.name,
                pretty_type(ty),
                head,
                go(def, ANN),
                go(body, ANN)
            )
        }
    };
    if level(e) < min {
        format!("({text})")
    } else {
        text
    }
}

/// Concrete syntax that parses back to the same tree.
pub fn pretty(e: &Expr) -> String {
    go(e, ANN)
}

pub fn pretty_type(t: &SType) -> String {
    fn ty(t: &SType, level: u8) -> String {
        match t {
            SType::Unit => "Unit".to_string(),
            SType::Res(m) => format!("{{{}}}", m.text),
            SType::Arrow(m, e, a, b) => {
                let s = format!("{} -[{} {}]-> {}", ty(a, 1), m.letter(), e, ty(b, 0));
                if level > 0 {
                    format!("({s})")
                } else {
                    s
                }
            }
            SType::Prod(k, a, b) => {
                let s = format!("{} {} {}", ty(a, 1), k.symbol(), ty(b, 2));
                if level > 1 {
                    format!("({s})")
                } else {
                    s
                }
            }
        }
    }
    ty(t, 0)
}
