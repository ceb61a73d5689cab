//! Small-step evaluation of closed core terms over an instrumented heap.
//!
//! Each heap entry records how many extra aliases point at a resource, the
//! envelope fixed when it was created, and the trace of operations
//! performed so far. Operations are refused when the trace could no longer
//! be completed within the envelope, and the last alias may only be
//! dropped once the trace is itself inside the envelope.

use std::collections::BTreeMap;
use std::fmt;

use crate::opm::{Index, Opm, OpmInstance};
use crate::term::{Constant, Loc, Mode, PairKind, Term};

pub const DEFAULT_FUEL: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeapEntry {
    /// Number of references minus one.
    pub refs: u64,
    pub envelope: Index,
    pub trace: Index,
}

impl fmt::Display for HeapEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {{{}}}, {{{}}})", self.refs, self.envelope, self.trace)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Heap {
    entries: BTreeMap<Loc, HeapEntry>,
    next: u64,
}

impl Heap {
    pub fn new() -> Heap {
        Heap::default()
    }

    pub fn get(&self, l: Loc) -> Option<&HeapEntry> {
        self.entries.get(&l)
    }

    pub fn entries(&self) -> &BTreeMap<Loc, HeapEntry> {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Locations are never reused, even after removal.
    fn alloc(&mut self, entry: HeapEntry) -> Loc {
        let l = Loc(self.next);
        self.next += 1;
        self.entries.insert(l, entry);
        l
    }
}

impl fmt::Display for Heap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (l, e)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l} ↦ {e}")?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub term: Term,
    pub heap: Heap,
}

impl Config {
    pub fn new(term: Term) -> Config {
        Config {
            term,
            heap: Heap::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StepRule {
    Beta(Mode),
    ULet,
    OLet,
    New,
    Op,
    Close1,
    Close2,
    Split,
}

impl StepRule {
    pub const ALL: [StepRule; 11] = [
        StepRule::Beta(Mode::Plain),
        StepRule::Beta(Mode::Unordered),
        StepRule::Beta(Mode::Right),
        StepRule::Beta(Mode::Left),
        StepRule::ULet,
        StepRule::OLet,
        StepRule::New,
        StepRule::Op,
        StepRule::Close1,
        StepRule::Close2,
        StepRule::Split,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StepRule::Beta(Mode::Plain) => "RE-Beta",
            StepRule::Beta(Mode::Unordered) => "RE-UBeta",
            StepRule::Beta(Mode::Right) => "RE-RBeta",
            StepRule::Beta(Mode::Left) => "RE-LBeta",
            StepRule::ULet => "RE-ULet",
            StepRule::OLet => "RE-OLet",
            StepRule::New => "RC-Ne",
            StepRule::Op => "RC-Op",
            StepRule::Close1 => "RC-Cl1",
            StepRule::Close2 => "RC-Cl2",
            StepRule::Split => "RC-Sp",
        }
    }

    /// Whether the rule touches the heap.
    pub fn is_gamma(self) -> bool {
        matches!(
            self,
            StepRule::New | StepRule::Op | StepRule::Close1 | StepRule::Close2 | StepRule::Split
        )
    }
}

impl fmt::Display for StepRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The change a single step made to the heap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HeapDelta {
    Unchanged,
    Alloc(Loc, HeapEntry),
    Update(Loc, HeapEntry, HeapEntry),
    Remove(Loc, HeapEntry),
}

impl fmt::Display for HeapDelta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeapDelta::Unchanged => f.write_str("-"),
            HeapDelta::Alloc(l, e) => write!(f, "+{l} {e}"),
            HeapDelta::Update(l, a, b) => write!(f, "{l} {a} -> {b}"),
            HeapDelta::Remove(l, e) => write!(f, "-{l} {e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    /// 1-based.
    pub index: usize,
    pub rule: StepRule,
    pub redex: Term,
    pub delta: HeapDelta,
}

impl fmt::Display for StepRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:>5}  {:<8}  {}  [{}]", self.index, self.rule.name(), self.redex, self.delta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StuckReason {
    OpInadmissible,
    CloseIncomplete,
    NoRule,
}

impl StuckReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StuckReason::OpInadmissible => "op-inadmissible",
            StuckReason::CloseIncomplete => "close-incomplete",
            StuckReason::NoRule => "no-rule",
        }
    }
}

impl fmt::Display for StuckReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stuck {
    pub reason: StuckReason,
    pub redex: Term,
    pub message: String,
}

impl fmt::Display for Stuck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stuck({}) at `{}`: {}", self.reason, self.redex, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepOutcome {
    Stepped(Config, StepRecord),
    Value(Term, Heap),
    Stuck(Stuck),
}

fn stuck(reason: StuckReason, redex: &Term, message: impl Into<String>) -> Stuck {
    Stuck {
        reason,
        redex: redex.clone(),
        message: message.into(),
    }
}

/// One step of `cfg`. The record's index is left at 0.
pub fn step(cfg: &Config, opm: &OpmInstance) -> StepOutcome {
    if cfg.term.is_value() {
        return StepOutcome::Value(cfg.term.clone(), cfg.heap.clone());
    }
    let mut heap = cfg.heap.clone();
    match reduce(&cfg.term, &mut heap, opm) {
        Ok((term, rule, redex, delta)) => StepOutcome::Stepped(
            Config { term, heap },
            StepRecord {
                index: 0,
                rule,
                redex,
                delta,
            },
        ),
        Err(s) => StepOutcome::Stuck(s),
    }
}

type Reduced = (Term, StepRule, Term, HeapDelta);

/// Finds the redex of a non-value `t` and contracts it.
fn reduce(t: &Term, heap: &mut Heap, opm: &OpmInstance) -> Result<Reduced, Stuck> {
    let inside = |sub: &Term, heap: &mut Heap, rebuild: &dyn Fn(Term) -> Term| {
        let (s, rule, redex, delta) = reduce(sub, heap, opm)?;
        Ok((rebuild(s), rule, redex, delta))
    };
    match t {
        Term::App(q, f, a) => {
            // left application evaluates its argument first
            let (first_f, f_val, a_val) = (*q != Mode::Left, f.is_value(), a.is_value());
            if first_f && !f_val || !first_f && a_val && !f_val {
                return inside(f, heap, &|s| Term::app(*q, s, (**a).clone()));
            }
            if !a_val {
                return inside(a, heap, &|s| Term::app(*q, (**f).clone(), s));
            }
            contract_app(t, *q, f, a, heap, opm)
        }
        Term::Pair(k, a, b) => {
            if !a.is_value() {
                return inside(a, heap, &|s| Term::pair(*k, s, (**b).clone()));
            }
            inside(b, heap, &|s| Term::pair(*k, (**a).clone(), s))
        }
        Term::LetPair(k, x, y, m, n) => {
            if !m.is_value() {
                return inside(m, heap, &|s| Term::let_pair(*k, x.clone(), y.clone(), s, (**n).clone()));
            }
            match &**m {
                Term::Pair(k2, v1, v2) if k == k2 && x != y => {
                    let body = n.subst(v1, x).subst(v2, y);
                    let rule = match k {
                        PairKind::Unordered => StepRule::ULet,
                        PairKind::Ordered => StepRule::OLet,
                    };
                    Ok((body, rule, t.clone(), HeapDelta::Unchanged))
                }
                _ => Err(stuck(StuckReason::NoRule, t, "pair elimination does not match its header")),
            }
        }
        Term::Var(x) => Err(stuck(StuckReason::NoRule, t, format!("free variable `{x}`"))),
        Term::Const(_) | Term::Loc(_) | Term::Lam(..) => unreachable!("values do not reduce"),
    }
}

fn contract_app(t: &Term, q: Mode, f: &Term, a: &Term, heap: &mut Heap, opm: &OpmInstance) -> Result<Reduced, Stuck> {
    match f {
        Term::Lam(q2, x, body) if *q2 == q => Ok((body.subst(a, x), StepRule::Beta(q), t.clone(), HeapDelta::Unchanged)),
        Term::Const(c) if q == Mode::Plain => gamma(t, c, a, heap, opm),
        _ => Err(stuck(StuckReason::NoRule, t, "no rule applies to this application")),
    }
}

fn gamma(t: &Term, c: &Constant, arg: &Term, heap: &mut Heap, opm: &OpmInstance) -> Result<Reduced, Stuck> {
    let opm_stuck = |e: crate::opm::OpmError| stuck(StuckReason::NoRule, t, e.to_string());
    if let (Constant::New(m), Term::Const(Constant::Unit)) = (c, arg) {
        let entry = HeapEntry {
            refs: 0,
            envelope: m.clone(),
            trace: opm.unit(),
        };
        let l = heap.alloc(entry.clone());
        return Ok((Term::Loc(l), StepRule::New, t.clone(), HeapDelta::Alloc(l, entry)));
    }
    let (Term::Loc(l), Constant::Op(_) | Constant::Drop | Constant::Split(..)) = (arg, c) else {
        return Err(stuck(StuckReason::NoRule, t, format!("`{c}` cannot be applied to `{arg}`")));
    };
    let l = *l;
    let Some(before) = heap.get(l).cloned() else {
        return Err(stuck(StuckReason::NoRule, t, format!("{l} is not allocated")));
    };
    match c {
        Constant::Op(m) => {
            let Some(trace) = opm.mul(&before.trace, m).map_err(opm_stuck)? else {
                return Err(stuck(
                    StuckReason::OpInadmissible,
                    t,
                    format!("{{{}}} cannot be extended by {{{m}}}", before.trace),
                ));
            };
            if !opm.residual_exists(&trace, &before.envelope).map_err(opm_stuck)? {
                return Err(stuck(
                    StuckReason::OpInadmissible,
                    t,
                    format!("trace {{{trace}}} cannot be completed within {{{}}}", before.envelope),
                ));
            }
            let after = HeapEntry { trace, ..before.clone() };
            heap.entries.insert(l, after.clone());
            Ok((Term::Loc(l), StepRule::Op, t.clone(), HeapDelta::Update(l, before, after)))
        }
        Constant::Drop if before.refs > 0 => {
            let after = HeapEntry {
                refs: before.refs - 1,
                ..before.clone()
            };
            heap.entries.insert(l, after.clone());
            Ok((Term::unit(), StepRule::Close1, t.clone(), HeapDelta::Update(l, before, after)))
        }
        Constant::Drop => {
            if !opm.leq(&before.trace, &before.envelope).map_err(opm_stuck)? {
                return Err(stuck(
                    StuckReason::CloseIncomplete,
                    t,
                    format!("trace {{{}}} is not within {{{}}}", before.trace, before.envelope),
                ));
            }
            heap.entries.remove(&l);
            Ok((Term::unit(), StepRule::Close2, t.clone(), HeapDelta::Remove(l, before)))
        }
        Constant::Split(..) => {
            let after = HeapEntry {
                refs: before.refs + 1,
                ..before.clone()
            };
            heap.entries.insert(l, after.clone());
            let pair = Term::pair(PairKind::Ordered, Term::Loc(l), Term::Loc(l));
            Ok((pair, StepRule::Split, t.clone(), HeapDelta::Update(l, before, after)))
        }
        Constant::Unit | Constant::New(_) => unreachable!(),
    }
}

/// A broken heap-typing invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `l` occurs `found` times but its entry promises `expected`.
    Occurrences { loc: Loc, expected: u64, found: usize },
    /// `l` occurs in the term but is not allocated.
    Dangling(Loc),
    /// `l` is allocated but no longer occurs in the term.
    Leaked(Loc),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Occurrences { loc, expected, found } => {
                write!(f, "{loc} occurs {found} times, heap expects {expected}")
            }
            Violation::Dangling(l) => write!(f, "{l} occurs in the term but is not allocated"),
            Violation::Leaked(l) => write!(f, "{l} is allocated but unreachable"),
        }
    }
}

/// Checks that every allocated location occurs exactly `refs + 1` times and
/// that the term mentions no other locations.
pub fn runtime_oracle(cfg: &Config) -> Vec<Violation> {
    let counts = cfg.term.location_counts();
    let mut out = Vec::new();
    for (l, e) in cfg.heap.entries() {
        match counts.get(l) {
            None => out.push(Violation::Leaked(*l)),
            Some(&found) if found as u64 != e.refs + 1 => out.push(Violation::Occurrences {
                loc: *l,
                expected: e.refs + 1,
                found,
            }),
            Some(_) => {}
        }
    }
    for l in counts.keys() {
        if cfg.heap.get(*l).is_none() {
            out.push(Violation::Dangling(*l));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunOutcome {
    Value(Term),
    Stuck(Stuck),
    FuelExhausted,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub outcome: RunOutcome,
    pub heap: Heap,
    pub steps: Vec<StepRecord>,
    /// Oracle violations with the number of steps taken when observed.
    pub violations: Vec<(usize, Violation)>,
}

impl RunResult {
    /// The steps that touched the heap.
    pub fn gamma_events(&self) -> impl Iterator<Item = &StepRecord> {
        self.steps.iter().filter(|s| s.rule.is_gamma())
    }

    /// Terminated with a value and an empty heap, with no violations.
    pub fn is_clean(&self) -> bool {
        matches!(self.outcome, RunOutcome::Value(_)) && self.heap.is_empty() && self.violations.is_empty()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub fuel: usize,
    /// Run the oracle after every step rather than only at the end.
    pub paranoid: bool,
}

impl Default for RunOptions {
    fn default() -> RunOptions {
        RunOptions {
            fuel: DEFAULT_FUEL,
            paranoid: false,
        }
    }
}

/// Evaluates `term` from the empty heap.
pub fn run(term: &Term, opm: &OpmInstance, opts: RunOptions) -> RunResult {
    let mut cfg = Config::new(term.clone());
    let mut steps = Vec::new();
    let mut violations = Vec::new();
    let observe = |cfg: &Config, n: usize, violations: &mut Vec<(usize, Violation)>| {
        violations.extend(runtime_oracle(cfg).into_iter().map(|v| (n, v)));
    };
    if opts.paranoid {
        observe(&cfg, 0, &mut violations);
    }
    let outcome = loop {
        if steps.len() >= opts.fuel && !cfg.term.is_value() {
            break RunOutcome::FuelExhausted;
        }
        match step(&cfg, opm) {
            StepOutcome::Value(v, _) => break RunOutcome::Value(v),
            StepOutcome::Stuck(s) => break RunOutcome::Stuck(s),
            StepOutcome::Stepped(next, mut rec) => {
                rec.index = steps.len() + 1;
                steps.push(rec);
                cfg = next;
                if opts.paranoid {
                    observe(&cfg, steps.len(), &mut violations);
                }
            }
        }
    };
    if !opts.paranoid {
        observe(&cfg, steps.len(), &mut violations);
    }
    RunResult {
        outcome,
        heap: cfg.heap,
        steps,
        violations,
    }
}
