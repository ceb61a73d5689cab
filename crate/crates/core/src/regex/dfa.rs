use std::collections::{BTreeSet, HashMap, VecDeque};

use super::{Alphabet, Regex, RegexError};

pub const DEFAULT_STATE_BUDGET: usize = 4096;

/// A complete deterministic automaton. State 0 is the start state.
#[derive(Debug, Clone)]
pub struct Dfa {
    alphabet: Vec<char>,
    trans: Vec<Vec<usize>>,
    accepting: Vec<bool>,
    /// The derivative each state was built from, when built from a regex.
    labels: Option<Vec<Regex>>,
}

impl Dfa {
    /// Builds the derivative automaton of `r` over `alphabet ∪ symbols(r)`.
    pub fn from_regex(r: &Regex, alphabet: &Alphabet, budget: usize) -> Result<Dfa, RegexError> {
        let mut sigma = alphabet.clone();
        sigma.extend(r.symbols());
        let alphabet: Vec<char> = sigma.into_iter().collect();
        let mut index: HashMap<Regex, usize> = HashMap::new();
        let mut labels = vec![r.clone()];
        let mut trans: Vec<Vec<usize>> = Vec::new();
        index.insert(r.clone(), 0);
        let mut next = 0;
        while next < labels.len() {
            let cur = labels[next].clone();
            let mut row = Vec::with_capacity(alphabet.len());
            for &a in &alphabet {
                let d = cur.derivative(a);
                let id = match index.get(&d) {
                    Some(&id) => id,
                    None => {
                        if labels.len() >= budget {
                            return Err(RegexError::BudgetExceeded(budget));
                        }
                        let id = labels.len();
                        index.insert(d.clone(), id);
                        labels.push(d);
                        id
                    }
                };
                row.push(id);
            }
            trans.push(row);
            next += 1;
        }
        let accepting = labels.iter().map(Regex::nullable).collect();
        Ok(Dfa {
            alphabet,
            trans,
            accepting,
            labels: Some(labels),
        })
    }

    /// The derivative automaton over the regex's own symbols.
    pub fn of(r: &Regex) -> Result<Dfa, RegexError> {
        Dfa::from_regex(r, &Alphabet::new(), DEFAULT_STATE_BUDGET)
    }

    pub fn state_count(&self) -> usize {
        self.trans.len()
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn next(&self, q: usize, a: char) -> Option<usize> {
        let i = self.alphabet.iter().position(|&c| c == a)?;
        Some(self.trans[q][i])
    }

    pub fn accepts(&self, word: &str) -> bool {
        let mut q = 0;
        for c in word.chars() {
            match self.next(q, c) {
                Some(n) => q = n,
                None => return false,
            }
        }
        self.accepting[q]
    }

    pub fn accepting_count(&self) -> usize {
        self.accepting.iter().filter(|&&b| b).count()
    }

    /// States that can reach an accepting state.
    fn live(&self) -> Vec<bool> {
        let n = self.state_count();
        let mut live = self.accepting.clone();
        let mut changed = true;
        while changed {
            changed = false;
            for q in 0..n {
                if !live[q] && self.trans[q].iter().any(|&t| live[t]) {
                    live[q] = true;
                    changed = true;
                }
            }
        }
        live
    }

    pub fn is_empty(&self) -> bool {
        !self.live()[0]
    }

    /// Moore partition refinement.
    pub fn minimize(&self) -> Dfa {
        let n = self.state_count();
        let mut class: Vec<usize> = self.accepting.iter().map(|&a| a as usize).collect();
        loop {
            let mut sigs: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
            let mut next = vec![0; n];
            for q in 0..n {
                let sig = (class[q], self.trans[q].iter().map(|&t| class[t]).collect());
                let fresh = sigs.len();
                next[q] = *sigs.entry(sig).or_insert(fresh);
            }
            let stable = sigs.len() == class.iter().collect::<BTreeSet<_>>().len();
            class = next;
            if stable {
                break;
            }
        }
        // renumber so the start state's class is 0, in BFS order
        let mut order: HashMap<usize, usize> = HashMap::new();
        let mut queue = VecDeque::from([0usize]);
        let mut reps = Vec::new();
        order.insert(class[0], 0);
        reps.push(0);
        while let Some(q) = queue.pop_front() {
            for &t in &self.trans[q] {
                if !order.contains_key(&class[t]) {
                    order.insert(class[t], reps.len());
                    reps.push(t);
                    queue.push_back(t);
                }
            }
        }
        let trans = reps
            .iter()
            .map(|&q| self.trans[q].iter().map(|&t| order[&class[t]]).collect())
            .collect();
        let accepting = reps.iter().map(|&q| self.accepting[q]).collect();
        Dfa {
            alphabet: self.alphabet.clone(),
            trans,
            accepting,
            labels: None,
        }
    }

    /// Reads the automaton back as a regex by state elimination.
    pub fn to_regex(&self) -> Regex {
        let live = self.live();
        if !live[0] {
            return Regex::empty();
        }
        let states: Vec<usize> = (0..self.state_count()).filter(|&q| live[q]).collect();
        let n = states.len();
        let pos: HashMap<usize, usize> = states.iter().enumerate().map(|(i, &q)| (q, i)).collect();
        // nodes 0..n are states, n is the initial node, n+1 the final node
        let (init, fin) = (n, n + 1);
        let mut edge = vec![vec![Regex::empty(); n + 2]; n + 2];
        edge[init][pos[&0]] = Regex::eps();
        for (i, &q) in states.iter().enumerate() {
            for (k, &t) in self.trans[q].iter().enumerate() {
                if let Some(&j) = pos.get(&t) {
                    edge[i][j] = Regex::alt(&edge[i][j], &Regex::sym(self.alphabet[k]));
                }
            }
            if self.accepting[q] {
                edge[i][fin] = Regex::eps();
            }
        }
        let mut remaining: BTreeSet<usize> = (0..n).collect();
        while !remaining.is_empty() {
            // eliminate the state with the fewest in/out connections
            let k = *remaining
                .iter()
                .min_by_key(|&&k| {
                    let ins = (0..n + 2).filter(|&i| i != k && !edge[i][k].is_empty_syntax()).count();
                    let outs = (0..n + 2).filter(|&j| j != k && !edge[k][j].is_empty_syntax()).count();
                    (ins * outs, k)
                })
                .unwrap();
            remaining.remove(&k);
            let loop_k = Regex::star(&edge[k][k]);
            let preds: Vec<usize> = (0..n + 2)
                .filter(|&i| i != k && !edge[i][k].is_empty_syntax())
                .collect();
            let succs: Vec<usize> = (0..n + 2)
                .filter(|&j| j != k && !edge[k][j].is_empty_syntax())
                .collect();
            for &i in &preds {
                for &j in &succs {
                    let path = Regex::concat_all([edge[i][k].clone(), loop_k.clone(), edge[k][j].clone()]);
                    edge[i][j] = Regex::alt(&edge[i][j], &path);
                }
            }
            for x in 0..n + 2 {
                edge[x][k] = Regex::empty();
                edge[k][x] = Regex::empty();
            }
        }
        edge[init][fin].clone()
    }
}

/// Explores the synchronous product of two automata over the same alphabet
/// and reports whether some reachable pair satisfies `bad`.
fn product_finds(a: &Dfa, qa: usize, b: &Dfa, qb: usize, bad: impl Fn(bool, bool) -> bool) -> bool {
    debug_assert_eq!(a.alphabet, b.alphabet);
    let mut seen = BTreeSet::from([(qa, qb)]);
    let mut queue = VecDeque::from([(qa, qb)]);
    while let Some((p, q)) = queue.pop_front() {
        if bad(a.accepting[p], b.accepting[q]) {
            return true;
        }
        for k in 0..a.alphabet.len() {
            let nxt = (a.trans[p][k], b.trans[q][k]);
            if seen.insert(nxt) {
                queue.push_back(nxt);
            }
        }
    }
    false
}

fn joint_alphabet(rs: &[&Regex]) -> Alphabet {
    rs.iter().flat_map(|r| r.symbols()).collect()
}

/// Whether `L(small) ⊆ L(big)`.
pub fn includes(big: &Regex, small: &Regex) -> Result<bool, RegexError> {
    includes_with(big, small, DEFAULT_STATE_BUDGET)
}

pub fn includes_with(big: &Regex, small: &Regex, budget: usize) -> Result<bool, RegexError> {
    if big == small {
        return Ok(true);
    }
    let sigma = joint_alphabet(&[big, small]);
    let b = Dfa::from_regex(big, &sigma, budget)?;
    let s = Dfa::from_regex(small, &sigma, budget)?;
    Ok(!product_finds(&s, 0, &b, 0, |in_small, in_big| in_small && !in_big))
}

/// Language equality.
pub fn equivalent(x: &Regex, y: &Regex) -> Result<bool, RegexError> {
    equivalent_with(x, y, DEFAULT_STATE_BUDGET)
}

pub fn equivalent_with(x: &Regex, y: &Regex, budget: usize) -> Result<bool, RegexError> {
    if x == y {
        return Ok(true);
    }
    let sigma = joint_alphabet(&[x, y]);
    let a = Dfa::from_regex(x, &sigma, budget)?;
    let b = Dfa::from_regex(y, &sigma, budget)?;
    Ok(!product_finds(&a, 0, &b, 0, |p, q| p != q))
}

/// The largest language `z` with `L(den) · z ⊆ L(num)`.
pub fn product_derivative(num: &Regex, den: &Regex) -> Result<Regex, RegexError> {
    product_derivative_with(num, den, DEFAULT_STATE_BUDGET)
}

pub fn product_derivative_with(num: &Regex, den: &Regex, budget: usize) -> Result<Regex, RegexError> {
    let sigma = joint_alphabet(&[num, den]);
    let n = Dfa::from_regex(num, &sigma, budget)?;
    let d = Dfa::from_regex(den, &sigma, budget)?;
    let width = n.alphabet.len();

    // states of num reached by some word of den
    let mut reached = BTreeSet::new();
    let mut seen = BTreeSet::from([(0usize, 0usize)]);
    let mut queue = VecDeque::from([(0usize, 0usize)]);
    while let Some((p, q)) = queue.pop_front() {
        if d.accepting[q] {
            reached.insert(p);
        }
        for k in 0..width {
            let nxt = (n.trans[p][k], d.trans[q][k]);
            if seen.insert(nxt) {
                queue.push_back(nxt);
            }
        }
    }
    if reached.is_empty() {
        // empty divisor: every word qualifies
        return Ok(Regex::star(&Regex::alt_all(sigma.iter().map(|&c| Regex::sym(c)))));
    }

    // accept w iff every reached state accepts w
    let start: Vec<usize> = reached.into_iter().collect();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(start.clone(), 0)]);
    let mut sets = vec![start];
    let mut trans = Vec::new();
    let mut i = 0;
    while i < sets.len() {
        let mut row = Vec::with_capacity(width);
        for k in 0..width {
            let mut t: Vec<usize> = sets[i].iter().map(|&p| n.trans[p][k]).collect();
            t.sort_unstable();
            t.dedup();
            let id = match index.get(&t) {
                Some(&id) => id,
                None => {
                    if sets.len() >= budget {
                        return Err(RegexError::BudgetExceeded(budget));
                    }
                    index.insert(t.clone(), sets.len());
                    sets.push(t);
                    sets.len() - 1
                }
            };
            row.push(id);
        }
        trans.push(row);
        i += 1;
    }
    let accepting = sets.iter().map(|s| s.iter().all(|&p| n.accepting[p])).collect();
    let result = Dfa {
        alphabet: n.alphabet.clone(),
        trans,
        accepting,
        labels: None,
    };

    // prefer a readable candidate: a derivative of num, or eps
    let mut candidates: Vec<Regex> = n.labels.clone().unwrap_or_default();
    candidates.push(Regex::eps());
    candidates.sort_by_key(Regex::size);
    for cand in candidates {
        let c = Dfa::from_regex(&cand, &sigma, budget)?;
        if !product_finds(&result, 0, &c, 0, |p, q| p != q) {
            return Ok(cand);
        }
    }
    Ok(result.minimize().to_regex())
}
