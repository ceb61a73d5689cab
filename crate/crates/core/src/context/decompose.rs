//! Context decomposition: isolating the bindings a subterm uses.
//!
//! `decompose(Γ, X)` returns a pattern `G` and a context `Γ'` over the
//! variables in `X` such that `Γ ≲ G[Γ']` and no ordered variable of `X`
//! is left in `G`. Clauses are tried top to bottom.
//!
//! The shape helpers below are decided up to `≲`: `right(G)` succeeds when
//! `G` can be read as `(Γ, [])`, `left(G)` as `([], Γ)`, `par(G)` as
//! `([] ∥ Γ)` and `closed(G)` as `(Γ1, [], Γ2)`, each after possibly adding
//! edges.

use std::collections::BTreeSet;

use super::{Binding, Context, Pattern};
use crate::term::Name;

fn hole_neighbours(g: &Pattern) -> (BTreeSet<usize>, BTreeSet<usize>, usize) {
    let (graph, _, hole) = g.interpret();
    let preds = graph.predecessors(hole).collect();
    let succs = graph.successors(hole).collect();
    (preds, succs, hole)
}

/// `G ≲ (Γ, [])`: nothing has to come after the hole.
pub fn right(g: &Pattern) -> Option<Context> {
    let (_, succs, _) = hole_neighbours(g);
    succs.is_empty().then(|| g.fill(&Context::Empty))
}

/// `G ≲ ([], Γ)`: nothing has to come before the hole.
pub fn left(g: &Pattern) -> Option<Context> {
    let (preds, _, _) = hole_neighbours(g);
    preds.is_empty().then(|| g.fill(&Context::Empty))
}

/// `G ≲ ([] ∥ Γ)`: the hole is unrelated to every other binding.
pub fn par(g: &Pattern) -> Option<Context> {
    let (preds, succs, _) = hole_neighbours(g);
    (preds.is_empty() && succs.is_empty()).then(|| g.fill(&Context::Empty))
}

/// `G ≲ (Γ1, [], Γ2)`. `Γ1` holds the hole's ancestors and the unrestricted
/// bindings, `Γ2` everything else. Always succeeds, since an acyclic graph
/// never has an edge from a non-ancestor into an ancestor.
pub fn closed(g: &Pattern) -> Option<(Context, Context)> {
    let (graph, _, hole) = g.interpret();
    let before = graph.ancestors(hole);
    // vertex indices of the filled context skip the hole
    let orig = move |i: usize| if i < hole { i } else { i + 1 };
    let filled = g.fill(&Context::Empty);
    let b1 = before.clone();
    let first = filled.retain_vertices(&move |i| b1.contains(&orig(i)), true);
    let second = filled.retain_vertices(&move |i| !before.contains(&orig(i)), false);
    Some((first, second))
}

fn disjoint(c: &Context, xs: &BTreeSet<Name>) -> bool {
    c.dom().is_disjoint(xs)
}

pub fn decompose(ctx: &Context, xs: &BTreeSet<Name>) -> Option<(Pattern, Context)> {
    match ctx {
        Context::Empty => Some((Pattern::Hole, Context::Empty)),
        Context::Bind(b) => Some(match b {
            Binding::Var(x, _) if xs.contains(x) => {
                if b.is_unr() {
                    (Pattern::par_l(Pattern::Hole, ctx.clone()), ctx.clone())
                } else {
                    (Pattern::Hole, ctx.clone())
                }
            }
            _ => (Pattern::par_l(Pattern::Hole, ctx.clone()), Context::Empty),
        }),
        Context::Seq(c1, c2) => {
            let mut d1 = Lazy::new(|| decompose(c1, xs));
            let mut d2 = Lazy::new(|| decompose(c2, xs));
            if disjoint(c1, xs) {
                if let Some((g2, r2)) = d2.get() {
                    return Some((Pattern::seq_r((**c1).clone(), g2), r2));
                }
            }
            if disjoint(c2, xs) {
                if let Some((g1, r1)) = d1.get() {
                    return Some((Pattern::seq_l(g1, (**c2).clone()), r1));
                }
            }
            let (g1, r1) = d1.get()?;
            let (g2, r2) = d2.get()?;
            let gr = right(&g1)?;
            let gl = left(&g2)?;
            Some((sandwich(gr, gl), Context::seq(r1, r2)))
        }
        Context::Par(c1, c2) => {
            let mut d1 = Lazy::new(|| decompose(c1, xs));
            let mut d2 = Lazy::new(|| decompose(c2, xs));
            if disjoint(c1, xs) {
                if let Some((g2, r2)) = d2.get() {
                    return Some((Pattern::par_r((**c1).clone(), g2), r2));
                }
            }
            if disjoint(c2, xs) {
                if let Some((g1, r1)) = d1.get() {
                    return Some((Pattern::par_l(g1, (**c2).clone()), r1));
                }
            }
            let (g1, r1) = d1.get()?;
            let (g2, r2) = d2.get()?;
            let both = Context::par(r1.clone(), r2.clone());
            if let (Some(a), Some(b)) = (par(&g1), par(&g2)) {
                return Some((Pattern::par_r(Context::par(a, b), Pattern::Hole), both));
            }
            if let (Some(a), Some(b)) = (left(&g1), left(&g2)) {
                return Some((Pattern::seq_l(Pattern::Hole, Context::par(a, b)), both));
            }
            if let (Some(a), Some(b)) = (right(&g1), right(&g2)) {
                return Some((Pattern::seq_r(Context::par(a, b), Pattern::Hole), both));
            }
            if let (Some(gr), Some(gl)) = (right(&g1), left(&g2)) {
                return Some((sandwich(gr, gl), Context::seq(r2, r1)));
            }
            if let (Some(gl), Some(gr)) = (left(&g1), right(&g2)) {
                return Some((sandwich(gr, gl), Context::seq(r1, r2)));
            }
            let (a1, b1) = closed(&g1)?;
            let (a2, b2) = closed(&g2)?;
            Some((
                Pattern::seq_r(
                    Context::par(a1, a2),
                    Pattern::seq_l(Pattern::Hole, Context::par(b1, b2)),
                ),
                both,
            ))
        }
    }
}

/// `(Γr, [], Γl)`.
fn sandwich(before: Context, after: Context) -> Pattern {
    Pattern::seq_r(before, Pattern::seq_l(Pattern::Hole, after))
}

/// A result computed at most once, on first use.
struct Lazy<F: FnOnce() -> Option<(Pattern, Context)>> {
    init: Option<F>,
    value: Option<Option<(Pattern, Context)>>,
}

impl<F: FnOnce() -> Option<(Pattern, Context)>> Lazy<F> {
    fn new(f: F) -> Self {
        Lazy {
            init: Some(f),
            value: None,
        }
    }

    fn get(&mut self) -> Option<(Pattern, Context)> {
        if let Some(f) = self.init.take() {
            self.value = Some(f());
        }
        self.value.clone().flatten()
    }
}
