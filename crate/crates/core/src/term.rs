//! The core calculus: terms, types and effects.
//!
//! Abstractions, applications and arrows come in four modes. Plain terms may
//! not capture ordered resources; the other three differ in where the
//! argument sits relative to the captured context (in parallel, after it, or
//! before it). Pairs are either unordered (`ox`) or ordered (`.o`).

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::opm::{Index, Opm, OpmError, OpmInstance};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(s: &str) -> Name {
        Name(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Name {
        Name::new(s)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Loc(pub u64);

impl fmt::Display for Loc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Plain,
    Unordered,
    Right,
    Left,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::Plain, Mode::Unordered, Mode::Right, Mode::Left];

    /// Letter used in arrow types: `-[u 1]->`.
    pub fn letter(self) -> char {
        match self {
            Mode::Plain => 'u',
            Mode::Unordered => 'o',
            Mode::Right => 'r',
            Mode::Left => 'l',
        }
    }

    pub fn from_letter(c: char) -> Option<Mode> {
        Mode::ALL.into_iter().find(|m| m.letter() == c)
    }

    /// Marker written after `\` and `let`, and between function and argument.
    pub fn mark(self) -> &'static str {
        match self {
            Mode::Plain => "",
            Mode::Unordered => "°",
            Mode::Right => ">",
            Mode::Left => "<",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairKind {
    Unordered,
    Ordered,
}

impl PairKind {
    pub fn symbol(self) -> &'static str {
        match self {
            PairKind::Unordered => "ox",
            PairKind::Ordered => ".o",
        }
    }
}

/// Whether a term may perform a resource operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Effect {
    Pure,
    Impure,
}

impl Effect {
    pub fn join(self, other: Effect) -> Effect {
        self.max(other)
    }

    pub fn bit(self) -> u8 {
        match self {
            Effect::Pure => 0,
            Effect::Impure => 1,
        }
    }
}

impl fmt::Display for Effect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bit())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Unit,
    Res(Index),
    Arrow(Mode, Effect, Box<Type>, Box<Type>),
    Prod(PairKind, Box<Type>, Box<Type>),
}

impl Type {
    pub fn arrow(mode: Mode, eff: Effect, a: Type, b: Type) -> Type {
        Type::Arrow(mode, eff, Box::new(a), Box::new(b))
    }

    pub fn prod(kind: PairKind, a: Type, b: Type) -> Type {
        Type::Prod(kind, Box::new(a), Box::new(b))
    }

    pub fn is_unr(&self) -> bool {
        match self {
            Type::Unit | Type::Arrow(Mode::Plain, ..) => true,
            Type::Res(_) | Type::Arrow(..) => false,
            Type::Prod(_, a, b) => a.is_unr() && b.is_unr(),
        }
    }

    pub fn is_ord(&self) -> bool {
        match self {
            Type::Res(_) => true,
            Type::Arrow(m, ..) => *m != Mode::Plain,
            Type::Prod(_, a, b) => a.is_ord() || b.is_ord(),
            Type::Unit => false,
        }
    }

    /// Structural equality up to OPM equivalence of indices.
    pub fn equiv(&self, other: &Type, opm: &OpmInstance) -> Result<bool, OpmError> {
        Ok(match (self, other) {
            (Type::Unit, Type::Unit) => true,
            (Type::Res(a), Type::Res(b)) => a == b || opm.equiv(a, b)?,
            (Type::Arrow(m1, e1, a1, b1), Type::Arrow(m2, e2, a2, b2)) => {
                m1 == m2 && e1 == e2 && a1.equiv(a2, opm)? && b1.equiv(b2, opm)?
            }
            (Type::Prod(k1, a1, b1), Type::Prod(k2, a2, b2)) => {
                k1 == k2 && a1.equiv(a2, opm)? && b1.equiv(b2, opm)?
            }
            _ => false,
        })
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // arrows are right-associative and bind looser than products
        fn go(t: &Type, f: &mut fmt::Formatter<'_>, level: u8) -> fmt::Result {
            match t {
                Type::Unit => f.write_str("Unit"),
                Type::Res(m) => write!(f, "{{{m}}}"),
                Type::Arrow(m, e, a, b) => {
                    if level > 0 {
                        f.write_str("(")?;
                    }
                    go(a, f, 1)?;
                    write!(f, " -[{} {}]-> ", m.letter(), e)?;
                    go(b, f, 0)?;
                    if level > 0 {
                        f.write_str(")")?;
                    }
                    Ok(())
                }
                Type::Prod(k, a, b) => {
                    if level > 1 {
                        f.write_str("(")?;
                    }
                    go(a, f, 1)?;
                    write!(f, " {} ", k.symbol())?;
                    go(b, f, 2)?;
                    if level > 1 {
                        f.write_str(")")?;
                    }
                    Ok(())
                }
            }
        }
        go(self, f, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constant {
    Unit,
    New(Index),
    Op(Index),
    Split(Index, Index),
    Drop,
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constant::Unit => f.write_str("unit"),
            Constant::New(m) => write!(f, "new{{{m}}}"),
            Constant::Op(m) => write!(f, "op{{{m}}}"),
            Constant::Split(a, b) => write!(f, "split{{{a}}}{{{b}}}"),
            Constant::Drop => f.write_str("drop"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Const(Constant),
    Loc(Loc),
    Var(Name),
    Lam(Mode, Name, Box<Term>),
    App(Mode, Box<Term>, Box<Term>),
    Pair(PairKind, Box<Term>, Box<Term>),
    LetPair(PairKind, Name, Name, Box<Term>, Box<Term>),
}

impl Term {
    pub fn unit() -> Term {
        Term::Const(Constant::Unit)
    }

    pub fn var(x: &str) -> Term {
        Term::Var(Name::new(x))
    }

    pub fn lam(mode: Mode, x: Name, body: Term) -> Term {
        Term::Lam(mode, x, Box::new(body))
    }

    pub fn app(mode: Mode, f: Term, a: Term) -> Term {
        Term::App(mode, Box::new(f), Box::new(a))
    }

    /// A constant applied with plain application.
    pub fn call(c: Constant, a: Term) -> Term {
        Term::app(Mode::Plain, Term::Const(c), a)
    }

    pub fn pair(kind: PairKind, a: Term, b: Term) -> Term {
        Term::Pair(kind, Box::new(a), Box::new(b))
    }

    pub fn let_pair(kind: PairKind, x: Name, y: Name, m: Term, n: Term) -> Term {
        Term::LetPair(kind, x, y, Box::new(m), Box::new(n))
    }

    /// `(\^q x. n) ^q m`, the shape a value binding elaborates to.
    pub fn let_in(mode: Mode, x: Name, m: Term, n: Term) -> Term {
        Term::app(mode, Term::lam(mode, x, n), m)
    }

    pub fn is_value(&self) -> bool {
        match self {
            Term::Const(_) | Term::Loc(_) | Term::Lam(..) => true,
            Term::Pair(_, a, b) => a.is_value() && b.is_value(),
            Term::Var(_) | Term::App(..) | Term::LetPair(..) => false,
        }
    }

    pub fn fv(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_fv(&mut Vec::new(), &mut out);
        out
    }

    fn collect_fv(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match self {
            Term::Const(_) | Term::Loc(_) => {}
            Term::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Term::Lam(_, x, body) => {
                bound.push(x.clone());
                body.collect_fv(bound, out);
                bound.pop();
            }
            Term::App(_, a, b) | Term::Pair(_, a, b) => {
                a.collect_fv(bound, out);
                b.collect_fv(bound, out);
            }
            Term::LetPair(_, x, y, m, n) => {
                m.collect_fv(bound, out);
                bound.push(x.clone());
                bound.push(y.clone());
                n.collect_fv(bound, out);
                bound.truncate(bound.len() - 2);
            }
        }
    }

    /// Capture-avoiding `self[v/x]`.
    pub fn subst(&self, v: &Term, x: &Name) -> Term {
        let fv_v = v.fv();
        self.subst_in(v, x, &fv_v)
    }

    fn subst_in(&self, v: &Term, x: &Name, fv_v: &BTreeSet<Name>) -> Term {
        match self {
            Term::Const(_) | Term::Loc(_) => self.clone(),
            Term::Var(y) => {
                if y == x {
                    v.clone()
                } else {
                    self.clone()
                }
            }
            Term::Lam(q, y, body) => {
                if y == x {
                    return self.clone();
                }
                let (y, body) = freshen(y, body, fv_v);
                Term::lam(*q, y, body.subst_in(v, x, fv_v))
            }
            Term::App(q, a, b) => Term::app(*q, a.subst_in(v, x, fv_v), b.subst_in(v, x, fv_v)),
            Term::Pair(k, a, b) => Term::pair(*k, a.subst_in(v, x, fv_v), b.subst_in(v, x, fv_v)),
            Term::LetPair(k, y1, y2, m, n) => {
                let m = m.subst_in(v, x, fv_v);
                if y1 == x || y2 == x {
                    return Term::let_pair(*k, y1.clone(), y2.clone(), m, (**n).clone());
                }
                let (y1, n) = freshen(y1, n, fv_v);
                let avoid: BTreeSet<Name> = fv_v.iter().cloned().chain([y1.clone()]).collect();
                let (y2, n) = freshen(y2, &n, &avoid);
                Term::let_pair(*k, y1, y2, m, n.subst_in(v, x, fv_v))
            }
        }
    }

    /// Occurrences of each location, counted with multiplicity.
    pub fn location_counts(&self) -> std::collections::BTreeMap<Loc, usize> {
        let mut out = std::collections::BTreeMap::new();
        self.visit(&mut |t| {
            if let Term::Loc(l) = t {
                *out.entry(*l).or_insert(0) += 1;
            }
        });
        out
    }

    pub fn visit(&self, f: &mut impl FnMut(&Term)) {
        f(self);
        match self {
            Term::Const(_) | Term::Loc(_) | Term::Var(_) => {}
            Term::Lam(_, _, b) => b.visit(f),
            Term::App(_, a, b) | Term::Pair(_, a, b) | Term::LetPair(_, _, _, a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    /// Recognizes `(\^q x. n) ^q m`.
    pub fn as_let(&self) -> Option<(Mode, &Name, &Term, &Term)> {
        match self {
            Term::App(q, f, m) => match &**f {
                Term::Lam(q2, x, n) if q == q2 => Some((*q, x, m, n)),
                _ => None,
            },
            _ => None,
        }
    }

    /// Multi-line rendering with one binding per line.
    pub fn pretty(&self) -> String {
        let mut lines = Vec::new();
        block(self, 0, &mut lines);
        lines.join("\n")
    }
}

/// Renames binder `y` in `body` if it clashes with `avoid`.
fn freshen(y: &Name, body: &Term, avoid: &BTreeSet<Name>) -> (Name, Term) {
    if !avoid.contains(y) {
        return (y.clone(), body.clone());
    }
    let used = body.fv();
    let mut cand = format!("{y}'");
    while avoid.contains(cand.as_str()) || used.contains(cand.as_str()) {
        cand.push('\'');
    }
    let fresh = Name::new(&cand);
    let renamed = body.subst(&Term::Var(fresh.clone()), y);
    (fresh, renamed)
}

impl std::borrow::Borrow<str> for Name {
    fn borrow(&self) -> &str {
        &self.0
    }
}

fn is_binding(t: &Term) -> bool {
    t.as_let().is_some() || matches!(t, Term::LetPair(..))
}

fn contains_binding(t: &Term) -> bool {
    let mut found = false;
    t.visit(&mut |s| found |= is_binding(s));
    found
}

fn push(lines: &mut Vec<String>, indent: usize, text: &str) {
    lines.push(format!("{}{}", "  ".repeat(indent), text));
}

fn block(t: &Term, indent: usize, lines: &mut Vec<String>) {
    if let Some((q, x, m, n)) = t.as_let() {
        header(&format!("let{} {x}", q.mark()), m, indent, lines);
        block(n, indent, lines);
    } else if let Term::LetPair(k, x, y, m, n) = t {
        header(&format!("let {x} {} {y}", k.symbol()), m, indent, lines);
        block(n, indent, lines);
    } else if let (Term::Lam(q, x, body), true) = (t, contains_binding(t)) {
        push(lines, indent, &format!("\\{}{x}.", q.mark()));
        block(body, indent + 1, lines);
    } else {
        push(lines, indent, &inline(t, Prec::Low));
    }
}

fn header(head: &str, bound: &Term, indent: usize, lines: &mut Vec<String>) {
    if contains_binding(bound) {
        push(lines, indent, &format!("{head} ="));
        block(bound, indent + 1, lines);
        push(lines, indent, "in");
    } else {
        push(lines, indent, &format!("{head} = {} in", inline(bound, Prec::Low)));
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Low,
    App,
    Atom,
}

fn inline(t: &Term, ctx: Prec) -> String {
    let (text, prec) = match t {
        Term::Const(c) => (c.to_string(), Prec::Atom),
        Term::Loc(l) => (l.to_string(), Prec::Atom),
        Term::Var(x) => (x.to_string(), Prec::Atom),
        Term::Pair(k, a, b) => (
            format!("({} {} {})", inline(a, Prec::Low), k.symbol(), inline(b, Prec::Low)),
            Prec::Atom,
        ),
        _ if t.as_let().is_some() => {
            let (q, x, m, n) = t.as_let().unwrap();
            (
                format!("let{} {x} = {} in {}", q.mark(), inline(m, Prec::Low), inline(n, Prec::Low)),
                Prec::Low,
            )
        }
        Term::LetPair(k, x, y, m, n) => (
            format!("let {x} {} {y} = {} in {}", k.symbol(), inline(m, Prec::Low), inline(n, Prec::Low)),
            Prec::Low,
        ),
        Term::Lam(q, x, body) => (format!("\\{}{x}. {}", q.mark(), inline(body, Prec::Low)), Prec::Low),
        Term::App(q, f, a) => {
            let f = inline(f, Prec::App);
            let a = inline(a, Prec::Atom);
            match q {
                Mode::Plain => (format!("{f} {a}"), Prec::App),
                _ => (format!("{f} {} {a}", q.mark()), Prec::App),
            }
        }
    };
    if prec < ctx {
        format!("({text})")
    } else {
        text
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&inline(self, Prec::Low))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn res(s: &str) -> Type {
        Type::Res(OpmInstance::default().parse_index(s).unwrap())
    }

    #[test]
    fn unr_and_ord_partition_types() {
        let types = [
            Type::Unit,
            res("r"),
            Type::arrow(Mode::Plain, Effect::Impure, res("r"), Type::Unit),
            Type::arrow(Mode::Unordered, Effect::Pure, Type::Unit, Type::Unit),
            Type::prod(PairKind::Ordered, Type::Unit, Type::Unit),
            Type::prod(PairKind::Unordered, Type::Unit, res("r")),
        ];
        let expect = [true, false, true, false, true, false];
        for (t, unr) in types.iter().zip(expect) {
            assert_eq!(t.is_unr(), unr, "{t}");
            assert_ne!(t.is_unr(), t.is_ord());
        }
    }

    #[test]
    fn fv_and_values() {
        let t = Term::lam(Mode::Plain, "x".into(), Term::app(Mode::Plain, Term::var("x"), Term::var("y")));
        assert_eq!(t.fv(), BTreeSet::from([Name::new("y")]));
        assert!(t.is_value());
        assert!(Term::pair(PairKind::Ordered, Term::Loc(Loc(0)), Term::unit()).is_value());
        assert!(!Term::var("x").is_value());
    }

    #[test]
    fn subst_avoids_capture() {
        // (\y. x y)[y/x] must not capture
        let t = Term::lam(Mode::Plain, "y".into(), Term::app(Mode::Plain, Term::var("x"), Term::var("y")));
        let s = t.subst(&Term::var("y"), &Name::new("x"));
        assert_eq!(s.to_string(), "\\y'. y y'");
        assert_eq!(s.fv(), BTreeSet::from([Name::new("y")]));
        let shadow = Term::lam(Mode::Plain, "x".into(), Term::var("x"));
        assert_eq!(shadow.subst(&Term::unit(), &Name::new("x")), shadow);
    }

    #[test]
    fn printing() {
        let m = Term::let_in(
            Mode::Unordered,
            "a".into(),
            Term::call(Constant::Drop, Term::var("x")),
            Term::pair(PairKind::Ordered, Term::var("a"), Term::unit()),
        );
        assert_eq!(m.pretty(), "let° a = drop x in\n(a .o unit)");
        let ty = Type::arrow(
            Mode::Plain,
            Effect::Impure,
            Type::prod(PairKind::Unordered, res("r*"), res("w*")),
            Type::Unit,
        );
        assert_eq!(ty.to_string(), "{r*} ox {w*} -[u 1]-> Unit");
    }
}
