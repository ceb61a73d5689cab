//! Regular expressions over single-letter symbols.
//!
//! Values are structurally shared through [`Arc`]. All construction goes
//! through the smart constructors below, so regexes that differ only by
//! associativity, commutativity or idempotence of `|`, or by the unit and
//! zero laws, compare equal. This keeps the derivative automata finite.

mod dfa;
mod parse;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

pub use dfa::{
    equivalent, equivalent_with, includes, includes_with, product_derivative,
    product_derivative_with, Dfa, DEFAULT_STATE_BUDGET,
};
pub use parse::{parse, RegexParseError};

/// Set of symbols an automaton is built over.
pub type Alphabet = BTreeSet<char>;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum RegexError {
    #[error("automaton construction exceeded the state budget of {0}")]
    BudgetExceeded(usize),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Regex(Arc<Node>);

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Empty,
    Eps,
    Sym(char),
    /// Right-nested: the left operand is never itself a concatenation.
    Concat(Regex, Regex),
    /// Sorted, deduplicated, at least two members, none of them an `Alt`.
    Alt(Vec<Regex>),
    Star(Regex),
}

impl Regex {
    pub fn node(&self) -> &Node {
        &self.0
    }

    fn mk(node: Node) -> Regex {
        Regex(Arc::new(node))
    }

    pub fn empty() -> Regex {
        Regex::mk(Node::Empty)
    }

    pub fn eps() -> Regex {
        Regex::mk(Node::Eps)
    }

    pub fn sym(c: char) -> Regex {
        Regex::mk(Node::Sym(c))
    }

    pub fn concat(a: &Regex, b: &Regex) -> Regex {
        match (a.node(), b.node()) {
            (Node::Empty, _) | (_, Node::Empty) => Regex::empty(),
            (Node::Eps, _) => b.clone(),
            (_, Node::Eps) => a.clone(),
            (Node::Concat(a1, a2), _) => Regex::concat(a1, &Regex::concat(a2, b)),
            _ => Regex::mk(Node::Concat(a.clone(), b.clone())),
        }
    }

    pub fn alt(a: &Regex, b: &Regex) -> Regex {
        Regex::alt_all([a.clone(), b.clone()])
    }

    pub fn alt_all(items: impl IntoIterator<Item = Regex>) -> Regex {
        let mut members = Vec::new();
        for r in items {
            match r.node() {
                Node::Empty => {}
                Node::Alt(rs) => members.extend(rs.iter().cloned()),
                _ => members.push(r),
            }
        }
        members.sort();
        members.dedup();
        // eps is redundant next to any other nullable member
        if members.len() > 1 && members.iter().any(|r| *r.node() != Node::Eps && r.nullable()) {
            members.retain(|r| *r.node() != Node::Eps);
        }
        match members.len() {
            0 => Regex::empty(),
            1 => members.pop().unwrap(),
            _ => Regex::mk(Node::Alt(members)),
        }
    }

    pub fn concat_all(items: impl IntoIterator<Item = Regex>) -> Regex {
        let items: Vec<Regex> = items.into_iter().collect();
        items
            .iter()
            .rev()
            .fold(Regex::eps(), |acc, r| Regex::concat(r, &acc))
    }

    pub fn star(a: &Regex) -> Regex {
        match a.node() {
            Node::Empty | Node::Eps => Regex::eps(),
            Node::Star(_) => a.clone(),
            Node::Alt(rs) if rs.iter().any(|r| *r.node() == Node::Eps) => {
                let inner = Regex::alt_all(rs.iter().filter(|r| *r.node() != Node::Eps).cloned());
                Regex::star(&inner)
            }
            _ => Regex::mk(Node::Star(a.clone())),
        }
    }

    pub fn nullable(&self) -> bool {
        match self.node() {
            Node::Empty | Node::Sym(_) => false,
            Node::Eps | Node::Star(_) => true,
            Node::Concat(a, b) => a.nullable() && b.nullable(),
            Node::Alt(rs) => rs.iter().any(Regex::nullable),
        }
    }

    /// Brzozowski derivative: the language `{ w | a w ∈ L(self) }`.
    pub fn derivative(&self, a: char) -> Regex {
        match self.node() {
            Node::Empty | Node::Eps => Regex::empty(),
            Node::Sym(c) => {
                if *c == a {
                    Regex::eps()
                } else {
                    Regex::empty()
                }
            }
            Node::Concat(r, s) => {
                let left = Regex::concat(&r.derivative(a), s);
                if r.nullable() {
                    Regex::alt(&left, &s.derivative(a))
                } else {
                    left
                }
            }
            Node::Alt(rs) => Regex::alt_all(rs.iter().map(|r| r.derivative(a))),
            Node::Star(r) => Regex::concat(&r.derivative(a), self),
        }
    }

    pub fn symbols(&self) -> Alphabet {
        let mut out = Alphabet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut Alphabet) {
        match self.node() {
            Node::Empty | Node::Eps => {}
            Node::Sym(c) => {
                out.insert(*c);
            }
            Node::Concat(a, b) => {
                a.collect_symbols(out);
                b.collect_symbols(out);
            }
            Node::Alt(rs) => rs.iter().for_each(|r| r.collect_symbols(out)),
            Node::Star(r) => r.collect_symbols(out),
        }
    }

    pub fn is_empty_syntax(&self) -> bool {
        *self.node() == Node::Empty
    }

    /// Whether the language is empty. Normalization removes every `Empty`
    /// below the root, so this is syntactic.
    pub fn is_empty_language(&self) -> bool {
        self.is_empty_syntax()
    }

    /// Membership by repeated derivatives.
    pub fn matches(&self, word: &str) -> bool {
        word.chars()
            .fold(self.clone(), |r, c| r.derivative(c))
            .nullable()
    }

    pub fn size(&self) -> usize {
        match self.node() {
            Node::Empty | Node::Eps | Node::Sym(_) => 1,
            Node::Concat(a, b) => 1 + a.size() + b.size(),
            Node::Alt(rs) => 1 + rs.iter().map(Regex::size).sum::<usize>(),
            Node::Star(r) => 1 + r.size(),
        }
    }
}

// Printing precedence levels.
const PREC_ALT: u8 = 0;
const PREC_CAT: u8 = 1;
const PREC_STAR: u8 = 2;

fn prec(r: &Regex) -> u8 {
    match r.node() {
        Node::Alt(_) => PREC_ALT,
        Node::Concat(..) => PREC_CAT,
        _ => PREC_STAR,
    }
}

fn render(r: &Regex, min: u8) -> String {
    let body = match r.node() {
        Node::Empty => "empty".to_string(),
        Node::Eps => "eps".to_string(),
        Node::Sym(c) => c.to_string(),
        Node::Alt(rs) => rs
            .iter()
            .map(|r| render(r, PREC_CAT))
            .collect::<Vec<_>>()
            .join("|"),
        Node::Concat(..) => {
            let mut factors = Vec::new();
            let mut cur = r;
            while let Node::Concat(a, b) = cur.node() {
                factors.push(render(a, PREC_STAR));
                cur = b;
            }
            factors.push(render(cur, PREC_STAR));
            let tight = factors.concat();
            if spells_keyword(&tight) {
                factors.join(" ")
            } else {
                tight
            }
        }
        Node::Star(inner) => format!("{}*", render(inner, PREC_STAR)),
    };
    if prec(r) < min {
        format!("({body})")
    } else {
        body
    }
}

fn spells_keyword(s: &str) -> bool {
    s.split(|c: char| !c.is_ascii_alphabetic())
        .any(|run| parse::is_keyword(run))
}

impl fmt::Display for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self, PREC_ALT))
    }
}

impl fmt::Debug for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Regex({self})")
    }
}

impl std::str::FromStr for Regex {
    type Err = RegexParseError;

    fn from_str(s: &str) -> Result<Regex, RegexParseError> {
        parse(s)
    }
}
