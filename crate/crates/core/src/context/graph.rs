use std::collections::BTreeSet;

/// A vertex-labelled DAG. Edges point from bindings that must be used first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphRep<L> {
    pub labels: Vec<L>,
    pub edges: BTreeSet<(usize, usize)>,
}

impl<L> Default for GraphRep<L> {
    fn default() -> Self {
        GraphRep {
            labels: Vec::new(),
            edges: BTreeSet::new(),
        }
    }
}

impl<L: Clone> GraphRep<L> {
    pub fn single(label: L) -> Self {
        GraphRep {
            labels: vec![label],
            edges: BTreeSet::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Disjoint union, second graph shifted after the first.
    pub fn union(&self, other: &Self) -> Self {
        let n = self.len();
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(a, b)| (a + n, b + n)));
        GraphRep { labels, edges }
    }

    /// Union plus an edge from every vertex of `self` to every vertex of `other`.
    pub fn join(&self, other: &Self) -> Self {
        let n = self.len();
        let mut g = self.union(other);
        for a in 0..n {
            for b in 0..other.len() {
                g.edges.insert((a, b + n));
            }
        }
        g
    }

    pub fn map<M: Clone>(&self, f: impl Fn(&L) -> M) -> GraphRep<M> {
        GraphRep {
            labels: self.labels.iter().map(f).collect(),
            edges: self.edges.clone(),
        }
    }

    pub fn successors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter(move |e| e.0 == v).map(|e| e.1)
    }

    pub fn predecessors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter(move |e| e.1 == v).map(|e| e.0)
    }

    /// Vertices with a path to `v`, excluding `v`.
    pub fn ancestors(&self, v: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for p in self.predecessors(u) {
                if seen.insert(p) {
                    stack.push(p);
                }
            }
        }
        seen
    }

    fn degrees(&self) -> (Vec<usize>, Vec<usize>) {
        let mut outd = vec![0; self.len()];
        let mut ind = vec![0; self.len()];
        for &(a, b) in &self.edges {
            outd[a] += 1;
            ind[b] += 1;
        }
        (outd, ind)
    }

    /// The vertex sequence of the only topological ordering, if there is
    /// exactly one.
    pub fn unique_topological_ordering(&self) -> Option<Vec<usize>> {
        let (_, mut ind) = self.degrees();
        let mut order = Vec::with_capacity(self.len());
        let mut done = vec![false; self.len()];
        for _ in 0..self.len() {
            let mut ready = (0..self.len()).filter(|&v| !done[v] && ind[v] == 0);
            let v = ready.next()?;
            if ready.next().is_some() {
                return None;
            }
            done[v] = true;
            order.push(v);
            for s in self.successors(v).collect::<Vec<_>>() {
                ind[s] -= 1;
            }
        }
        Some(order)
    }
}

impl<L: Clone + Eq> GraphRep<L> {
    /// A label-preserving bijection `f` from `self` to `other` such that
    /// every edge of `self` maps to an edge of `other` (and, when `exact`,
    /// every edge of `other` comes from one).
    pub fn embedding_into(&self, other: &Self, exact: bool) -> Option<Vec<usize>> {
        let n = self.len();
        if n != other.len() || self.edges.len() > other.edges.len() {
            return None;
        }
        if exact && self.edges.len() != other.edges.len() {
            return None;
        }
        let (o1, i1) = self.degrees();
        let (o2, i2) = other.degrees();
        let fits = |a: usize, b: usize| {
            self.labels[a] == other.labels[b]
                && if exact {
                    o1[a] == o2[b] && i1[a] == i2[b]
                } else {
                    o1[a] <= o2[b] && i1[a] <= i2[b]
                }
        };
        let candidates: Vec<Vec<usize>> = (0..n).map(|a| (0..n).filter(|&b| fits(a, b)).collect()).collect();
        if candidates.iter().any(Vec::is_empty) {
            return None;
        }
        // most constrained vertices first
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&a| candidates[a].len());
        let mut f = vec![usize::MAX; n];
        let mut used = vec![false; n];
        if self.search(other, exact, &order, 0, &candidates, &mut f, &mut used) {
            Some(f)
        } else {
            None
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn search(
        &self,
        other: &Self,
        exact: bool,
        order: &[usize],
        depth: usize,
        candidates: &[Vec<usize>],
        f: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let Some(&a) = order.get(depth) else {
            return true;
        };
        for &b in &candidates[a] {
            if used[b] {
                continue;
            }
            let consistent = order[..depth].iter().all(|&c| {
                let fc = f[c];
                let ok_out = !self.edges.contains(&(a, c)) || other.edges.contains(&(b, fc));
                let ok_in = !self.edges.contains(&(c, a)) || other.edges.contains(&(fc, b));
                let ok_exact = !exact
                    || ((!other.edges.contains(&(b, fc)) || self.edges.contains(&(a, c)))
                        && (!other.edges.contains(&(fc, b)) || self.edges.contains(&(c, a))));
                ok_out && ok_in && ok_exact
            });
            if !consistent {
                continue;
            }
            f[a] = b;
            used[b] = true;
            if self.search(other, exact, order, depth + 1, candidates, f, used) {
                return true;
            }
            used[b] = false;
        }
        f[a] = usize::MAX;
        false
    }

    pub fn iso(&self, other: &Self) -> bool {
        self.embedding_into(other, true).is_some()
    }
}
