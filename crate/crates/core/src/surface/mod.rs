//! The concrete surface language (`.ord` files).
//!
//! Besides the parser and printer this module holds the desugaring pass
//! that runs before checking: function definitions become annotated
//! lambdas, tuple parameters become pair eliminations, and every binder is
//! renamed apart so no binder shadows another.

mod ast;
mod lexer;
mod parser;
mod pretty;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use ast::{Binder, Expr, ExprKind, IndexText, Param, SType, Span};
pub use parser::{parse, parse_type};
pub use pretty::{pretty, pretty_type};

use crate::term::Name;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub span: Span,
    pub message: String,
    pub expected: Vec<String>,
}

impl ParseError {
    pub fn new(span: Span, message: &str, expected: Vec<String>) -> ParseError {
        ParseError {
            span,
            message: message.to_string(),
            expected,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(" or "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

/// Generates names that are not used anywhere in a program.
#[derive(Debug, Clone, Default)]
pub struct Fresh {
    used: BTreeSet<String>,
}

impl Fresh {
    pub fn new(used: BTreeSet<String>) -> Fresh {
        Fresh { used }
    }

    /// Every identifier occurring in `e`.
    pub fn for_expr(e: &Expr) -> Fresh {
        let mut used = BTreeSet::new();
        collect_names(e, &mut used);
        Fresh { used }
    }

    /// `base` itself if unused, otherwise `base1`, `base2`, ...
    pub fn fresh(&mut self, base: &str) -> Name {
        let mut cand = base.to_string();
        let mut k = 1;
        while self.used.contains(&cand) {
            cand = format!("{base}{k}");
            k += 1;
        }
        self.used.insert(cand.clone());
        Name::new(&cand)
    }

    pub fn reserve(&mut self, name: &str) {
        self.used.insert(name.to_string());
    }
}

fn collect_names(e: &Expr, out: &mut BTreeSet<String>) {
    let mut add = |b: &Binder| {
        if !b.is_wildcard() {
            out.insert(b.name.to_string());
        }
    };
    match &e.kind {
        ExprKind::Var(x) => {
            out.insert(x.to_string());
        }
        ExprKind::Lam(x, _) | ExprKind::Let(x, ..) => add(x),
        ExprKind::LetPair(x, y, ..) => {
            add(x);
            add(y);
        }
        ExprKind::Def { name, params, .. } => {
            add(name);
            for p in params {
                match p {
                    Param::Var(x) => add(x),
                    Param::Pair(x, y) => {
                        add(x);
                        add(y);
                    }
                }
            }
        }
        _ => {}
    }
    for c in e.children() {
        collect_names(c, out);
    }
}

/// Output of [`desugar`].
#[derive(Debug, Clone)]
pub struct Desugared {
    pub expr: Expr,
    /// Knows every name now in use.
    pub fresh: Fresh,
    /// Names given to `_` binders.
    pub wildcards: BTreeSet<Name>,
}

/// Expands definitions and renames binders apart.
pub fn desugar(e: &Expr) -> Desugared {
    let mut fresh = Fresh::for_expr(e);
    let mut d = Desugar {
        fresh: &mut fresh,
        seen: BTreeSet::new(),
        wildcards: BTreeSet::new(),
    };
    let expr = d.expr(e, &BTreeMap::new());
    let wildcards = d.wildcards;
    Desugared {
        expr,
        fresh,
        wildcards,
    }
}

struct Desugar<'a> {
    fresh: &'a mut Fresh,
    seen: BTreeSet<Name>,
    wildcards: BTreeSet<Name>,
}

type Scope = BTreeMap<Name, Name>;

impl Desugar<'_> {
    /// Picks the name a binder gets after renaming.
    fn bind(&mut self, b: &Binder, scope: &Scope) -> (Binder, Scope) {
        let name = if b.is_wildcard() || self.seen.contains(&b.name) {
            self.fresh.fresh(b.name.as_str())
        } else {
            b.name.clone()
        };
        self.seen.insert(name.clone());
        if b.is_wildcard() {
            self.wildcards.insert(name.clone());
        }
        let mut inner = scope.clone();
        if !b.is_wildcard() {
            inner.insert(b.name.clone(), name.clone());
        }
        (
            Binder {
                name,
                span: b.span,
            },
            inner,
        )
    }

    fn expr(&mut self, e: &Expr, scope: &Scope) -> Expr {
        let b = |x: Expr| Box::new(x);
        let kind = match &e.kind {
            ExprKind::Unit | ExprKind::New(_) => e.kind.clone(),
            ExprKind::Var(x) => ExprKind::Var(scope.get(x).cloned().unwrap_or_else(|| x.clone())),
            ExprKind::Op(m, x) => ExprKind::Op(m.clone(), b(self.expr(x, scope))),
            ExprKind::Split(m, x) => ExprKind::Split(m.clone(), b(self.expr(x, scope))),
            ExprKind::Drop(x) => ExprKind::Drop(b(self.expr(x, scope))),
            ExprKind::App(f, a) => ExprKind::App(b(self.expr(f, scope)), b(self.expr(a, scope))),
            ExprKind::Pair(x, y) => ExprKind::Pair(b(self.expr(x, scope)), b(self.expr(y, scope))),
            ExprKind::Seq(x, y) => ExprKind::Seq(b(self.expr(x, scope)), b(self.expr(y, scope))),
            ExprKind::Ann(x, t) => ExprKind::Ann(b(self.expr(x, scope)), t.clone()),
            ExprKind::Lam(x, body) => {
                let (x, inner) = self.bind(x, scope);
                ExprKind::Lam(x, b(self.expr(body, &inner)))
            }
            ExprKind::Let(x, m, n) => {
                let m = self.expr(m, scope);
                let (x, inner) = self.bind(x, scope);
                ExprKind::Let(x, b(m), b(self.expr(n, &inner)))
            }
            ExprKind::LetPair(x, y, m, n) => {
                let m = self.expr(m, scope);
                let (x, s1) = self.bind(x, scope);
                let (y, s2) = self.bind(y, &s1);
                ExprKind::LetPair(x, y, b(m), b(self.expr(n, &s2)))
            }
            ExprKind::Def {
                name,
                ty,
                params,
                def,
                body,
            } => {
                let lam = self.params(params, def, scope, def.span);
                let ann = Expr::new(ExprKind::Ann(b(lam), ty.clone()), def.span);
                let (name, inner) = self.bind(name, scope);
                ExprKind::Let(name, b(ann), b(self.expr(body, &inner)))
            }
        };
        Expr::new(kind, e.span)
    }

    fn params(&mut self, params: &[Param], def: &Expr, scope: &Scope, span: Span) -> Expr {
        let Some((first, rest)) = params.split_first() else {
            return self.expr(def, scope);
        };
        match first {
            Param::Var(x) => {
                let (x, inner) = self.bind(x, scope);
                let body = self.params(rest, def, &inner, span);
                Expr::new(ExprKind::Lam(x, Box::new(body)), span)
            }
            Param::Pair(x, y) => {
                let p = Binder {
                    name: self.fresh.fresh("p"),
                    span: x.span.to(y.span),
                };
                self.seen.insert(p.name.clone());
                let (x, s1) = self.bind(x, scope);
                let (y, s2) = self.bind(y, &s1);
                let body = self.params(rest, def, &s2, span);
                let var = Expr::new(ExprKind::Var(p.name.clone()), p.span);
                let elim = Expr::new(
                    ExprKind::LetPair(x, y, Box::new(var), Box::new(body)),
                    span,
                );
                Expr::new(ExprKind::Lam(p, Box::new(elim)), span)
            }
        }
    }
}
