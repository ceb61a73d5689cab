//! Bunched typing contexts.
//!
//! A context is a tree of bindings joined by `,` (sequential, no exchange)
//! and `∥` (parallel, with exchange). Its meaning is a DAG over the ordered
//! bindings, where an edge says "use before", plus a set of unrestricted
//! bindings. Equivalence and the subcontext order are decided on that
//! interpretation.

mod decompose;
mod dot;
mod graph;

use std::collections::BTreeSet;
use std::fmt;

pub use decompose::{closed, decompose, left, par, right};
pub use dot::to_dot;
pub use graph::GraphRep;

use crate::opm::{Index, Opm, OpmError, OpmInstance};
use crate::term::{Loc, Name, Type};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Binding {
    Var(Name, Type),
    Loc(Loc, Index),
}

impl Binding {
    pub fn var(x: &str, ty: Type) -> Binding {
        Binding::Var(Name::new(x), ty)
    }

    /// Location bindings are always ordered.
    pub fn is_unr(&self) -> bool {
        match self {
            Binding::Var(_, t) => t.is_unr(),
            Binding::Loc(..) => false,
        }
    }

    pub fn var_name(&self) -> Option<&Name> {
        match self {
            Binding::Var(x, _) => Some(x),
            Binding::Loc(..) => None,
        }
    }
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Binding::Var(x, t) => write!(f, "{x}:{t}"),
            Binding::Loc(l, m) => write!(f, "{l}:{{{m}}}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Context {
    Empty,
    Bind(Binding),
    Seq(Box<Context>, Box<Context>),
    Par(Box<Context>, Box<Context>),
}

/// Graph over the ordered bindings plus the unrestricted set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interp {
    pub graph: GraphRep<Binding>,
    pub unr: BTreeSet<Binding>,
}

impl Context {
    pub fn bind(b: Binding) -> Context {
        Context::Bind(b)
    }

    pub fn var(x: &str, ty: Type) -> Context {
        Context::Bind(Binding::var(x, ty))
    }

    pub fn seq(a: Context, b: Context) -> Context {
        Context::Seq(Box::new(a), Box::new(b))
    }

    pub fn par(a: Context, b: Context) -> Context {
        Context::Par(Box::new(a), Box::new(b))
    }

    pub fn interpret(&self) -> Interp {
        match self {
            Context::Empty => Interp {
                graph: GraphRep::default(),
                unr: BTreeSet::new(),
            },
            Context::Bind(b) if b.is_unr() => Interp {
                graph: GraphRep::default(),
                unr: BTreeSet::from([b.clone()]),
            },
            Context::Bind(b) => Interp {
                graph: GraphRep::single(b.clone()),
                unr: BTreeSet::new(),
            },
            Context::Seq(a, b) | Context::Par(a, b) => {
                let (ia, ib) = (a.interpret(), b.interpret());
                let graph = if matches!(self, Context::Seq(..)) {
                    ia.graph.join(&ib.graph)
                } else {
                    ia.graph.union(&ib.graph)
                };
                Interp {
                    graph,
                    unr: ia.unr.union(&ib.unr).cloned().collect(),
                }
            }
        }
    }

    /// Bindings in left-to-right order.
    pub fn bindings(&self) -> Vec<&Binding> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect<'a>(&'a self, out: &mut Vec<&'a Binding>) {
        match self {
            Context::Empty => {}
            Context::Bind(b) => out.push(b),
            Context::Seq(a, b) | Context::Par(a, b) => {
                a.collect(out);
                b.collect(out);
            }
        }
    }

    /// Every variable bound, ordered or not.
    pub fn dom(&self) -> BTreeSet<Name> {
        self.bindings().into_iter().filter_map(|b| b.var_name().cloned()).collect()
    }

    pub fn lookup(&self, x: &Name) -> Option<&Type> {
        self.bindings().into_iter().find_map(|b| match b {
            Binding::Var(y, t) if y == x => Some(t),
            _ => None,
        })
    }

    pub fn is_unr(&self) -> bool {
        self.bindings().iter().all(|b| b.is_unr())
    }

    /// Ordered bindings in left-to-right order; vertex `i` of the
    /// interpretation is the `i`-th of these.
    pub fn ordered_bindings(&self) -> Vec<&Binding> {
        self.bindings().into_iter().filter(|b| !b.is_unr()).collect()
    }

    /// Replaces every variable binding outside `xs` by `·`.
    pub fn restrict(&self, xs: &BTreeSet<Name>) -> Context {
        self.map_bindings(&mut |b| match b {
            Binding::Var(x, _) if !xs.contains(x) => None,
            _ => Some(b.clone()),
        })
    }

    /// Keeps only the bindings of location `l`.
    pub fn focus(&self, l: Loc) -> Context {
        self.map_bindings(&mut |b| match b {
            Binding::Loc(l2, _) if *l2 == l => Some(b.clone()),
            _ => None,
        })
    }

    fn map_bindings(&self, f: &mut impl FnMut(&Binding) -> Option<Binding>) -> Context {
        match self {
            Context::Empty => Context::Empty,
            Context::Bind(b) => f(b).map_or(Context::Empty, Context::Bind),
            Context::Seq(a, b) => Context::seq(a.map_bindings(f), b.map_bindings(f)),
            Context::Par(a, b) => Context::par(a.map_bindings(f), b.map_bindings(f)),
        }
    }

    /// Erases ordered bindings by vertex index, and unrestricted ones
    /// unless `keep_unr`.
    pub(crate) fn retain_vertices(&self, keep: &dyn Fn(usize) -> bool, keep_unr: bool) -> Context {
        let mut i = 0;
        self.map_bindings(&mut |b| {
            if b.is_unr() {
                return keep_unr.then(|| b.clone());
            }
            let k = keep(i);
            i += 1;
            k.then(|| b.clone())
        })
    }

    /// `·` removed wherever the unit laws allow.
    pub fn simplify(&self) -> Context {
        match self {
            Context::Seq(a, b) | Context::Par(a, b) => {
                let (a, b) = (a.simplify(), b.simplify());
                match (&a, &b) {
                    (Context::Empty, _) => b,
                    (_, Context::Empty) => a,
                    _ if matches!(self, Context::Seq(..)) => Context::seq(a, b),
                    _ => Context::par(a, b),
                }
            }
            _ => self.clone(),
        }
    }
}

/// `Γ1 ≃ Γ2`: isomorphic graphs and equal unrestricted sets.
pub fn equiv(g1: &Context, g2: &Context) -> bool {
    let (i1, i2) = (g1.interpret(), g2.interpret());
    i1.unr == i2.unr && i1.graph.iso(&i2.graph)
}

/// `Γ1 ≲ Γ2`: `Γ2`'s graph has the same vertices and at least the edges of
/// `Γ1`'s, and `Γ1` has at least `Γ2`'s unrestricted bindings.
pub fn subcontext(g1: &Context, g2: &Context) -> bool {
    let (i1, i2) = (g1.interpret(), g2.interpret());
    i1.unr.is_superset(&i2.unr) && i1.graph.embedding_into(&i2.graph, false).is_some()
}

/// The product of the location indices along the unique topological order
/// of the context's graph, if that order is unique and the product defined.
pub fn usage_projection(c: &Context, opm: &OpmInstance) -> Result<Option<Index>, OpmError> {
    let g = c.interpret().graph;
    let Some(order) = g.unique_topological_ordering() else {
        return Ok(None);
    };
    let mut acc = opm.unit();
    for v in order {
        if let Binding::Loc(_, m) = &g.labels[v] {
            match opm.mul(&acc, m)? {
                Some(p) => acc = p,
                None => return Ok(None),
            }
        }
    }
    Ok(Some(acc))
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(c: &Context, f: &mut fmt::Formatter<'_>, parent: Option<bool>, left: bool) -> fmt::Result {
            match c {
                Context::Empty => f.write_str("·"),
                Context::Bind(b) => write!(f, "{b}"),
                Context::Seq(a, b) | Context::Par(a, b) => {
                    let is_seq = matches!(c, Context::Seq(..));
                    let wrap = parent.is_some_and(|p| p != is_seq || !left);
                    if wrap {
                        f.write_str("(")?;
                    }
                    go(a, f, Some(is_seq), true)?;
                    f.write_str(if is_seq { ", " } else { " ∥ " })?;
                    go(b, f, Some(is_seq), false)?;
                    if wrap {
                        f.write_str(")")?;
                    }
                    Ok(())
                }
            }
        }
        go(self, f, None, true)
    }
}

/// A context with exactly one hole `[]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Pattern {
    Hole,
    /// `G, Γ`
    SeqL(Box<Pattern>, Context),
    /// `Γ, G`
    SeqR(Context, Box<Pattern>),
    /// `G ∥ Γ`
    ParL(Box<Pattern>, Context),
    /// `Γ ∥ G`
    ParR(Context, Box<Pattern>),
}

impl Pattern {
    pub fn seq_l(g: Pattern, c: Context) -> Pattern {
        Pattern::SeqL(Box::new(g), c)
    }

    pub fn seq_r(c: Context, g: Pattern) -> Pattern {
        Pattern::SeqR(c, Box::new(g))
    }

    pub fn par_l(g: Pattern, c: Context) -> Pattern {
        Pattern::ParL(Box::new(g), c)
    }

    pub fn par_r(c: Context, g: Pattern) -> Pattern {
        Pattern::ParR(c, Box::new(g))
    }

    /// `G[Γ]`.
    pub fn fill(&self, ctx: &Context) -> Context {
        match self {
            Pattern::Hole => ctx.clone(),
            Pattern::SeqL(g, c) => Context::seq(g.fill(ctx), c.clone()),
            Pattern::SeqR(c, g) => Context::seq(c.clone(), g.fill(ctx)),
            Pattern::ParL(g, c) => Context::par(g.fill(ctx), c.clone()),
            Pattern::ParR(c, g) => Context::par(c.clone(), g.fill(ctx)),
        }
    }

    /// The interpretation with the hole as an extra vertex labelled `None`,
    /// together with that vertex's index.
    pub fn interpret(&self) -> (GraphRep<Option<Binding>>, BTreeSet<Binding>, usize) {
        let (g, unr) = self.interpret_inner();
        let hole = g.labels.iter().position(Option::is_none).expect("pattern has a hole");
        (g, unr, hole)
    }

    fn interpret_inner(&self) -> (GraphRep<Option<Binding>>, BTreeSet<Binding>) {
        let lift = |c: &Context| {
            let i = c.interpret();
            (i.graph.map(|b| Some(b.clone())), i.unr)
        };
        let combine = |(g1, u1): (GraphRep<Option<Binding>>, BTreeSet<Binding>),
                       (g2, u2): (GraphRep<Option<Binding>>, BTreeSet<Binding>),
                       seq: bool| {
            let g = if seq { g1.join(&g2) } else { g1.union(&g2) };
            (g, u1.union(&u2).cloned().collect())
        };
        match self {
            Pattern::Hole => (GraphRep::single(None), BTreeSet::new()),
            Pattern::SeqL(g, c) => combine(g.interpret_inner(), lift(c), true),
            Pattern::SeqR(c, g) => combine(lift(c), g.interpret_inner(), true),
            Pattern::ParL(g, c) => combine(g.interpret_inner(), lift(c), false),
            Pattern::ParR(c, g) => combine(lift(c), g.interpret_inner(), false),
        }
    }

    /// `·` removed wherever the unit laws allow.
    pub fn simplify(&self) -> Pattern {
        let side = |c: &Context| c.simplify();
        match self {
            Pattern::Hole => Pattern::Hole,
            Pattern::SeqL(g, c) | Pattern::SeqR(c, g) | Pattern::ParL(g, c) | Pattern::ParR(c, g) => {
                let (g, c) = (g.simplify(), side(c));
                if c == Context::Empty {
                    return g;
                }
                match self {
                    Pattern::SeqL(..) => Pattern::seq_l(g, c),
                    Pattern::SeqR(..) => Pattern::seq_r(c, g),
                    Pattern::ParL(..) => Pattern::par_l(g, c),
                    _ => Pattern::par_r(c, g),
                }
            }
        }
    }

    /// Variables bound with ordered types anywhere in the pattern.
    pub fn ordered_vars(&self) -> BTreeSet<Name> {
        self.fill(&Context::Empty)
            .ordered_bindings()
            .into_iter()
            .filter_map(|b| b.var_name().cloned())
            .collect()
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // print through a context whose hole is a placeholder binding name
        let marker = Binding::var("[]", Type::Unit);
        let text = self.fill(&Context::Bind(marker)).to_string();
        f.write_str(&text.replace("[]:Unit", "[]"))
    }
}
