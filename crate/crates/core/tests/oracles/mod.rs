//! Brute-force reference implementations used by the integration tests and
//! the acceptance suite. Nothing here calls the automaton code or the graph
//! isomorphism search of the library.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use ordstate::context::{Binding, Context};
use ordstate::opm::Index;
use ordstate::regex::{Node, Regex};
use ordstate::term::Loc;
use rand::Rng;

// ---------------------------------------------------------------- regexes

/// End positions reachable by matching `r` against `s` from position `i`.
pub fn ends(r: &Regex, s: &[char], i: usize) -> BTreeSet<usize> {
    match r.node() {
        Node::Empty => BTreeSet::new(),
        Node::Eps => BTreeSet::from([i]),
        Node::Sym(c) => {
            if s.get(i) == Some(c) {
                BTreeSet::from([i + 1])
            } else {
                BTreeSet::new()
            }
        }
        Node::Concat(a, b) => ends(a, s, i).into_iter().flat_map(|j| ends(b, s, j)).collect(),
        Node::Alt(items) => items.iter().flat_map(|x| ends(x, s, i)).collect(),
        Node::Star(a) => {
            let mut seen = BTreeSet::from([i]);
            let mut frontier = vec![i];
            while let Some(j) = frontier.pop() {
                for k in ends(a, s, j) {
                    if seen.insert(k) {
                        frontier.push(k);
                    }
                }
            }
            seen
        }
    }
}

pub fn member(r: &Regex, w: &str) -> bool {
    let s: Vec<char> = w.chars().collect();
    ends(r, &s, 0).contains(&s.len())
}

/// Every word over `alphabet` of length at most `n`.
pub fn words(alphabet: &[char], n: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..n {
        layer = layer
            .iter()
            .flat_map(|w| alphabet.iter().map(move |c| format!("{w}{c}")))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

pub fn alphabet_of(rs: &[&Regex]) -> Vec<char> {
    let mut set = BTreeSet::new();
    for r in rs {
        set.extend(r.symbols());
    }
    set.into_iter().collect()
}

/// `L(small) ⊆ L(big)` on words up to length `n`.
pub fn includes_upto(big: &Regex, small: &Regex, n: usize) -> bool {
    let sigma = alphabet_of(&[big, small]);
    words(&sigma, n).iter().all(|w| !member(small, w) || member(big, w))
}

/// A random nonempty regex of depth at most `depth` over `alphabet`.
pub fn random_regex(rng: &mut impl Rng, alphabet: &[char], depth: usize) -> Regex {
    if depth == 0 || rng.gen_bool(0.3) {
        return if rng.gen_bool(0.15) {
            Regex::eps()
        } else {
            Regex::sym(alphabet[rng.gen_range(0..alphabet.len())])
        };
    }
    match rng.gen_range(0..3) {
        0 => Regex::concat(
            &random_regex(rng, alphabet, depth - 1),
            &random_regex(rng, alphabet, depth - 1),
        ),
        1 => Regex::alt(
            &random_regex(rng, alphabet, depth - 1),
            &random_regex(rng, alphabet, depth - 1),
        ),
        _ => Regex::star(&random_regex(rng, alphabet, depth - 1)),
    }
}

pub fn random_alphabet(rng: &mut impl Rng) -> Vec<char> {
    let k = rng.gen_range(1..=3);
    ['a', 'b', 'c'][..k].to_vec()
}

/// Words of length at most `wn` outside `z` for which no `u ∈ L(x)` of
/// length at most `un` has `uw ∉ L(y)`: each one contradicts maximality of
/// `z` as the largest language with `x·z ⊆ y`.
pub fn maximality_counterwords(x: &Regex, y: &Regex, z: &Regex, wn: usize, un: usize) -> Vec<String> {
    let sigma = alphabet_of(&[x, y, z]);
    let us: Vec<String> = words(&sigma, un).into_iter().filter(|u| member(x, u)).collect();
    words(&sigma, wn)
        .into_iter()
        .filter(|w| !member(z, w))
        .filter(|w| us.iter().all(|u| member(y, &format!("{u}{w}"))))
        .collect()
}

/// Pairs `(u, w)` with `u ∈ L(x)`, `w ∈ L(z)` but `uw ∉ L(y)`.
pub fn soundness_counterexamples(x: &Regex, y: &Regex, z: &Regex, n: usize) -> Vec<(String, String)> {
    let sigma = alphabet_of(&[x, y, z]);
    let ws = words(&sigma, n);
    let us: Vec<&String> = ws.iter().filter(|u| member(x, u)).collect();
    let zs: Vec<&String> = ws.iter().filter(|w| member(z, w)).collect();
    let mut out = Vec::new();
    for u in &us {
        for w in &zs {
            if !member(y, &format!("{u}{w}")) {
                out.push(((*u).clone(), (*w).clone()));
            }
        }
    }
    out
}

// ---------------------------------------------------------------- contexts

/// The two labels of the enumerated contexts.
pub fn labels() -> [Binding; 2] {
    let idx = |s: &str| Index::Regex(s.parse().expect("regex"));
    [Binding::Loc(Loc(0), idx("a")), Binding::Loc(Loc(1), idx("b"))]
}

fn shapes(leaves: &[Context]) -> Vec<Context> {
    if leaves.len() == 1 {
        return vec![leaves[0].clone()];
    }
    let mut out = Vec::new();
    for k in 1..leaves.len() {
        let (l, r) = leaves.split_at(k);
        for a in shapes(l) {
            for b in shapes(r) {
                out.push(Context::seq(a.clone(), b.clone()));
                out.push(Context::par(a.clone(), b.clone()));
            }
        }
    }
    out
}

/// Every context whose leaves are `·` or one of `leaf_choices`, with at
/// most `max_leaves` leaves.
pub fn enumerate(leaf_choices: &[Context], max_leaves: usize) -> Vec<Context> {
    let mut out = Vec::new();
    for n in 1..=max_leaves {
        let mut seqs: Vec<Vec<Context>> = vec![Vec::new()];
        for _ in 0..n {
            seqs = seqs
                .into_iter()
                .flat_map(|s| {
                    leaf_choices.iter().map(move |c| {
                        let mut s = s.clone();
                        s.push(c.clone());
                        s
                    })
                })
                .collect();
        }
        for s in seqs {
            out.extend(shapes(&s));
        }
    }
    out
}

/// The standard universe: leaves `·`, A, B; at most four leaves.
pub fn context_universe() -> Vec<Context> {
    let [a, b] = labels();
    enumerate(&[Context::Empty, Context::Bind(a), Context::Bind(b)], 4)
}

/// Graph interpretation computed directly: leaves in order, `,` adds every
/// edge from the left side to the right side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefGraph {
    pub labels: Vec<Binding>,
    pub edges: BTreeSet<(usize, usize)>,
    pub unr: BTreeSet<Binding>,
}

pub fn ref_graph(c: &Context) -> RefGraph {
    fn go(c: &Context, g: &mut RefGraph) -> Vec<usize> {
        match c {
            Context::Empty => Vec::new(),
            Context::Bind(b) if b.is_unr() => {
                g.unr.insert(b.clone());
                Vec::new()
            }
            Context::Bind(b) => {
                g.labels.push(b.clone());
                vec![g.labels.len() - 1]
            }
            Context::Seq(x, y) => {
                let l = go(x, g);
                let r = go(y, g);
                for &i in &l {
                    for &j in &r {
                        g.edges.insert((i, j));
                    }
                }
                l.into_iter().chain(r).collect()
            }
            Context::Par(x, y) => {
                let l = go(x, g);
                l.into_iter().chain(go(y, g)).collect()
            }
        }
    }
    let mut g = RefGraph {
        labels: Vec::new(),
        edges: BTreeSet::new(),
        unr: BTreeSet::new(),
    };
    go(c, &mut g);
    g
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

/// `Γ1 ≲ Γ2` by trying every bijection between the vertex sets.
pub fn subcontext_brute(g1: &RefGraph, g2: &RefGraph) -> bool {
    if g1.labels.len() != g2.labels.len() || !g1.unr.is_superset(&g2.unr) {
        return false;
    }
    permutations(g1.labels.len()).iter().any(|f| {
        (0..f.len()).all(|i| g1.labels[i] == g2.labels[f[i]])
            && g1.edges.iter().all(|&(i, j)| g2.edges.contains(&(f[i], f[j])))
    })
}

/// `Γ1 ≃ Γ2` by trying every bijection.
pub fn equiv_brute(g1: &RefGraph, g2: &RefGraph) -> bool {
    g1.edges.len() == g2.edges.len() && g1.unr == g2.unr && subcontext_brute(g1, g2)
}

/// Contexts one application of an associativity, commutativity or unit law
/// away from `c`, at any position.
pub fn rewrites(c: &Context) -> Vec<Context> {
    let mut out = Vec::new();
    let boxed = |x: &Context| x.clone();
    match c {
        Context::Seq(x, y) | Context::Par(x, y) => {
            let seq = matches!(c, Context::Seq(..));
            let mk = |a: Context, b: Context| if seq { Context::seq(a, b) } else { Context::par(a, b) };
            if **x == Context::Empty {
                out.push(boxed(y));
            }
            if **y == Context::Empty {
                out.push(boxed(x));
            }
            if !seq {
                out.push(mk(boxed(y), boxed(x)));
            }
            // (a ∘ b) ∘ y  ->  a ∘ (b ∘ y)
            match (&**x, seq) {
                (Context::Seq(a, b), true) | (Context::Par(a, b), false) => {
                    out.push(mk(boxed(a), mk(boxed(b), boxed(y))));
                }
                _ => {}
            }
            match (&**y, seq) {
                (Context::Seq(a, b), true) | (Context::Par(a, b), false) => {
                    out.push(mk(mk(boxed(x), boxed(a)), boxed(b)));
                }
                _ => {}
            }
            for x2 in rewrites(x) {
                out.push(mk(x2, boxed(y)));
            }
            for y2 in rewrites(y) {
                out.push(mk(boxed(x), y2));
            }
        }
        Context::Empty | Context::Bind(_) => {}
    }
    out
}

/// Classes of the reflexive-symmetric-transitive closure of [`rewrites`]
/// over `universe`. Rewrites leaving the universe are ignored.
pub fn rewrite_classes(universe: &[Context]) -> Vec<usize> {
    let index: HashMap<&Context, usize> = universe.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut parent: Vec<usize> = (0..universe.len()).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for (i, c) in universe.iter().enumerate() {
        for d in rewrites(c) {
            if let Some(&j) = index.get(&d) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri] = rj;
            }
        }
    }
    (0..universe.len()).map(|i| find(&mut parent, i)).collect()
}

/// Groups indices of `universe` by the multiset of ordered labels.
pub fn by_label_multiset(universe: &[Context]) -> BTreeMap<Vec<Binding>, Vec<usize>> {
    let mut out: BTreeMap<Vec<Binding>, Vec<usize>> = BTreeMap::new();
    for (i, c) in universe.iter().enumerate() {
        let mut ls = ref_graph(c).labels;
        ls.sort();
        out.entry(ls).or_default().push(i);
    }
    out
}
