use std::fmt;

use crate::term::{Effect, Mode, Name, PairKind};

/// Byte range in the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Span {
        Span { start, end }
    }

    pub fn to(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }

    pub fn contains(self, other: Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    /// 1-based line and column of `start`.
    pub fn line_col(self, src: &str) -> (usize, usize) {
        let upto = &src[..self.start.min(src.len())];
        let line = upto.matches('\n').count() + 1;
        let col = upto.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
        (line, col)
    }
}

/// The raw text between `{` and `}`; interpreted by the chosen OPM.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexText {
    pub text: String,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Binder {
    pub name: Name,
    pub span: Span,
}

impl Binder {
    pub fn is_wildcard(&self) -> bool {
        self.name.as_str() == "_"
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Param {
    Var(Binder),
    Pair(Binder, Binder),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SType {
    Unit,
    Res(IndexText),
    Arrow(Mode, Effect, Box<SType>, Box<SType>),
    Prod(PairKind, Box<SType>, Box<SType>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExprKind {
    Unit,
    New(IndexText),
    Op(IndexText, Box<Expr>),
    Split(IndexText, Box<Expr>),
    Drop(Box<Expr>),
    Var(Name),
    App(Box<Expr>, Box<Expr>),
    Pair(Box<Expr>, Box<Expr>),
    LetPair(Binder, Binder, Box<Expr>, Box<Expr>),
    Ann(Box<Expr>, SType),
    Lam(Binder, Box<Expr>),
    Let(Binder, Box<Expr>, Box<Expr>),
    Seq(Box<Expr>, Box<Expr>),
    /// `let f : T` then `f params = def in body`.
    Def {
        name: Binder,
        ty: SType,
        params: Vec<Param>,
        def: Box<Expr>,
        body: Box<Expr>,
    },
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Expr {
        Expr { kind, span }
    }

    /// Direct subexpressions, left to right.
    pub fn children(&self) -> Vec<&Expr> {
        match &self.kind {
            ExprKind::Unit | ExprKind::New(_) | ExprKind::Var(_) => vec![],
            ExprKind::Op(_, e) | ExprKind::Split(_, e) | ExprKind::Drop(e) => vec![e],
            ExprKind::Ann(e, _) | ExprKind::Lam(_, e) => vec![e],
            ExprKind::App(a, b)
            | ExprKind::Pair(a, b)
            | ExprKind::Seq(a, b)
            | ExprKind::LetPair(_, _, a, b)
            | ExprKind::Let(_, a, b) => vec![a, b],
            ExprKind::Def { def, body, .. } => vec![def, body],
        }
    }

    /// The same tree with every span zeroed, for structural comparison.
    pub fn erase_spans(&self) -> Expr {
        fn ix(i: &IndexText) -> IndexText {
            IndexText {
                text: i.text.trim().to_string(),
                span: Span::default(),
            }
        }
        fn b(x: &Binder) -> Binder {
            Binder {
                name: x.name.clone(),
                span: Span::default(),
            }
        }
        fn ty(t: &SType) -> SType {
            match t {
                SType::Unit => SType::Unit,
                SType::Res(i) => SType::Res(ix(i)),
                SType::Arrow(m, e, a, c) => SType::Arrow(*m, *e, Box::new(ty(a)), Box::new(ty(c))),
                SType::Prod(k, a, c) => SType::Prod(*k, Box::new(ty(a)), Box::new(ty(c))),
            }
        }
        let e = |x: &Expr| Box::new(x.erase_spans());
        let kind = match &self.kind {
            ExprKind::Unit => ExprKind::Unit,
            ExprKind::New(i) => ExprKind::New(ix(i)),
            ExprKind::Op(i, x) => ExprKind::Op(ix(i), e(x)),
            ExprKind::Split(i, x) => ExprKind::Split(ix(i), e(x)),
            ExprKind::Drop(x) => ExprKind::Drop(e(x)),
            ExprKind::Var(x) => ExprKind::Var(x.clone()),
            ExprKind::App(x, y) => ExprKind::App(e(x), e(y)),
            ExprKind::Pair(x, y) => ExprKind::Pair(e(x), e(y)),
            ExprKind::LetPair(p, q, x, y) => ExprKind::LetPair(b(p), b(q), e(x), e(y)),
            ExprKind::Ann(x, t) => ExprKind::Ann(e(x), ty(t)),
            ExprKind::Lam(p, x) => ExprKind::Lam(b(p), e(x)),
            ExprKind::Let(p, x, y) => ExprKind::Let(b(p), e(x), e(y)),
            ExprKind::Seq(x, y) => ExprKind::Seq(e(x), e(y)),
            ExprKind::Def {
                name,
                ty: t,
                params,
                def,
                body,
            } => ExprKind::Def {
                name: b(name),
                ty: ty(t),
                params: params
                    .iter()
                    .map(|p| match p {
                        Param::Var(x) => Param::Var(b(x)),
                        Param::Pair(x, y) => Param::Pair(b(x), b(y)),
                    })
                    .collect(),
                def: e(def),
                body: e(body),
            },
        };
        Expr::new(kind, Span::default())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::pretty::pretty(self))
    }
}

impl fmt::Display for SType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::pretty::pretty_type(self))
    }
}
