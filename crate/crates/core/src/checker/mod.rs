//! Bidirectional type checking with elaboration into the core calculus.
//!
//! Surface expressions carry no mode annotations. Every binary form splits
//! its context by restricting it to the free variables of each operand and
//! then asks whether the original context fits the sequential or parallel
//! composition of the parts. Let-bound values pick the least restrictive
//! mode that fits; pair eliminations isolate the bindings of their header
//! with [`decompose`].

mod error;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use error::{ErrorKind, TypeError};

use crate::context::{decompose, par, subcontext, Binding, Context, Pattern};
use crate::opm::{Index, Opm, OpmError, OpmInstance};
use crate::surface::{desugar, Binder, Expr, ExprKind, Fresh, IndexText, SType, Span};
use crate::term::{Constant, Effect, Mode, Name, PairKind, Term, Type};

/// Algorithmic typing rules, recorded as they fire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Unit,
    New,
    Op,
    Split,
    Drop,
    Var,
    App,
    UApp,
    RApp,
    LApp,
    UPair,
    OPair,
    ULet,
    OLet,
    Ann,
    ChkInf,
    Abs,
    UAbs,
    RAbs,
    LAbs,
}

impl Rule {
    pub const ALL: [Rule; 20] = [
        Rule::Unit,
        Rule::New,
        Rule::Op,
        Rule::Split,
        Rule::Drop,
        Rule::Var,
        Rule::App,
        Rule::UApp,
        Rule::RApp,
        Rule::LApp,
        Rule::UPair,
        Rule::OPair,
        Rule::ULet,
        Rule::OLet,
        Rule::Ann,
        Rule::ChkInf,
        Rule::Abs,
        Rule::UAbs,
        Rule::RAbs,
        Rule::LAbs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Unit => "AT-Unit",
            Rule::New => "AT-New",
            Rule::Op => "AT-Op",
            Rule::Split => "AT-Split",
            Rule::Drop => "AT-Drop",
            Rule::Var => "AT-Var",
            Rule::App => "AT-App",
            Rule::UApp => "AT-UApp",
            Rule::RApp => "AT-RApp",
            Rule::LApp => "AT-LApp",
            Rule::UPair => "AT-UPair",
            Rule::OPair => "AT-OPair",
            Rule::ULet => "AT-ULet",
            Rule::OLet => "AT-OLet",
            Rule::Ann => "AT-Ann",
            Rule::ChkInf => "AT-ChkInf",
            Rule::Abs => "AT-Abs",
            Rule::UAbs => "AT-UAbs",
            Rule::RAbs => "AT-RAbs",
            Rule::LAbs => "AT-LAbs",
        }
    }

    fn app(q: Mode) -> Rule {
        match q {
            Mode::Plain => Rule::App,
            Mode::Unordered => Rule::UApp,
            Mode::Right => Rule::RApp,
            Mode::Left => Rule::LApp,
        }
    }

    fn abs(q: Mode) -> Rule {
        match q {
            Mode::Plain => Rule::Abs,
            Mode::Unordered => Rule::UAbs,
            Mode::Right => Rule::RAbs,
            Mode::Left => Rule::LAbs,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How a binding form was elaborated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LetForm {
    /// `let x = e in ...`, as an application of a lambda of this mode.
    Value(Mode),
    /// `e1; e2`, likewise.
    Seq(Mode),
    /// `let x, y = e in ...` on a pair of this kind.
    Pair(PairKind),
}

impl fmt::Display for LetForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mode = |q: Mode| match q {
            Mode::Plain => "plain",
            Mode::Unordered => "°",
            Mode::Right => ">",
            Mode::Left => "<",
        };
        match self {
            LetForm::Value(q) => write!(f, "let {}", mode(*q)),
            LetForm::Seq(q) => write!(f, "seq {}", mode(*q)),
            LetForm::Pair(k) => write!(f, "let {}", k.symbol()),
        }
    }
}

/// The kind of binding a let adds to the context of its body.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum BindingKind {
    Unrestricted,
    UnorderedLinear,
    Ordered,
}

impl BindingKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BindingKind::Unrestricted => "unrestricted",
            BindingKind::UnorderedLinear => "unordered-linear",
            BindingKind::Ordered => "ordered",
        }
    }
}

impl fmt::Display for BindingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LetRecord {
    pub span: Span,
    pub names: Vec<Name>,
    pub form: LetForm,
    pub kind: BindingKind,
    /// The decomposition pattern of a pair elimination.
    pub pattern: Option<Pattern>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InferResult {
    pub ty: Type,
    pub effect: Effect,
    pub core: Term,
}

/// A checked program and what the checker observed on the way.
#[derive(Debug, Clone)]
pub struct Typed {
    pub core: Term,
    pub ty: Type,
    pub effect: Effect,
    /// Binding forms in source order.
    pub lets: Vec<LetRecord>,
    /// The context each let body was checked in, by bound name.
    pub snapshots: BTreeMap<Name, Context>,
    pub rules: BTreeSet<Rule>,
}

/// Infers the type of `e` in `ctx`.
pub fn infer(ctx: &Context, e: &Expr, opm: &OpmInstance) -> Result<InferResult, TypeError> {
    Checker::new(opm, ctx, e).synth(ctx, e, None)
}

/// Checks `e` against `ty` in `ctx`, returning the effect and the core term.
pub fn check(ctx: &Context, e: &Expr, ty: &Type, opm: &OpmInstance) -> Result<(Effect, Term), TypeError> {
    let r = Checker::new(opm, ctx, e).synth(ctx, e, Some(ty))?;
    Ok((r.effect, r.core))
}

/// Desugars and checks a closed program, which must have an unrestricted type.
pub fn check_program(e: &Expr, opm: &OpmInstance) -> Result<Typed, Vec<TypeError>> {
    let d = desugar(e);
    let mut c = Checker {
        opm,
        fresh: d.fresh,
        wildcards: d.wildcards,
        lets: Vec::new(),
        snapshots: BTreeMap::new(),
        rules: BTreeSet::new(),
    };
    let r = c.synth(&Context::Empty, &d.expr, None).map_err(|e| vec![e])?;
    if !r.ty.is_unr() {
        return Err(vec![TypeError::new(
            ErrorKind::TypeMismatch,
            e.span,
            "a program must have an unrestricted type",
        )
        .with("an unrestricted type", &r.ty)]);
    }
    c.lets.sort_by_key(|l| l.span.start);
    Ok(Typed {
        core: r.core,
        ty: r.ty,
        effect: r.effect,
        lets: c.lets,
        snapshots: c.snapshots,
        rules: c.rules,
    })
}

/// Free variables of a surface expression.
pub fn free_vars(e: &Expr) -> BTreeSet<Name> {
    fn go(e: &Expr, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        let under = |names: &[&Binder], body: &Expr, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>| {
            let n = bound.len();
            bound.extend(names.iter().map(|b| b.name.clone()));
            go(body, bound, out);
            bound.truncate(n);
        };
        match &e.kind {
            ExprKind::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            ExprKind::Lam(x, body) => under(&[x], body, bound, out),
            ExprKind::Let(x, m, n) => {
                go(m, bound, out);
                under(&[x], n, bound, out);
            }
            ExprKind::LetPair(x, y, m, n) => {
                go(m, bound, out);
                under(&[x, y], n, bound, out);
            }
            ExprKind::Def {
                name,
                params,
                def,
                body,
                ..
            } => {
                let mut ps = Vec::new();
                for p in params {
                    match p {
                        crate::surface::Param::Var(x) => ps.push(x),
                        crate::surface::Param::Pair(x, y) => ps.extend([x, y]),
                    }
                }
                under(&ps, def, bound, out);
                under(&[name], body, bound, out);
            }
            _ => {
                for c in e.children() {
                    go(c, bound, out);
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    go(e, &mut Vec::new(), &mut out);
    out
}

struct Checker<'a> {
    opm: &'a OpmInstance,
    fresh: Fresh,
    wildcards: BTreeSet<Name>,
    lets: Vec<LetRecord>,
    snapshots: BTreeMap<Name, Context>,
    rules: BTreeSet<Rule>,
}

fn opm_error(span: Span, e: OpmError) -> TypeError {
    TypeError::new(ErrorKind::OpmViolation, span, e.to_string())
}

fn binding_kind(ty: &Type, parallel: bool) -> BindingKind {
    if ty.is_unr() {
        BindingKind::Unrestricted
    } else if parallel {
        BindingKind::UnorderedLinear
    } else {
        BindingKind::Ordered
    }
}

impl<'a> Checker<'a> {
    fn new(opm: &'a OpmInstance, ctx: &Context, e: &Expr) -> Checker<'a> {
        let mut fresh = Fresh::for_expr(e);
        for x in ctx.dom() {
            fresh.reserve(x.as_str());
        }
        Checker {
            opm,
            fresh,
            wildcards: BTreeSet::new(),
            lets: Vec::new(),
            snapshots: BTreeMap::new(),
            rules: BTreeSet::new(),
        }
    }

    fn index(&self, m: &IndexText) -> Result<Index, TypeError> {
        self.opm.parse_index(&m.text).map_err(|msg| {
            TypeError::new(
                ErrorKind::OpmViolation,
                m.span,
                format!("`{}` is not an element of the {} OPM: {msg}", m.text.trim(), self.opm.name()),
            )
        })
    }

    fn ty(&self, t: &SType) -> Result<Type, TypeError> {
        Ok(match t {
            SType::Unit => Type::Unit,
            SType::Res(m) => Type::Res(self.index(m)?),
            SType::Arrow(q, e, a, b) => Type::arrow(*q, *e, self.ty(a)?, self.ty(b)?),
            SType::Prod(k, a, b) => Type::prod(*k, self.ty(a)?, self.ty(b)?),
        })
    }

    /// Fails with context-misuse unless `ctx ≲ want`.
    fn fits(&self, ctx: &Context, want: &Context, span: Span, what: &str) -> Result<(), TypeError> {
        if subcontext(ctx, want) {
            return Ok(());
        }
        let names = |c: &Context| -> BTreeSet<String> {
            c.ordered_bindings().iter().map(|b| b.to_string()).collect()
        };
        let unused: Vec<String> = names(ctx).difference(&names(want)).cloned().collect();
        let message = if unused.is_empty() {
            format!("the context cannot be arranged as {what} requires")
        } else {
            format!("{what} leaves ordered bindings unused: {}", unused.join(", "))
        };
        Err(TypeError::new(ErrorKind::ContextMisuse, span, message).with(want.simplify(), ctx.simplify()))
    }

    /// Inference when `goal` is `None`, checking otherwise.
    fn synth(&mut self, ctx: &Context, e: &Expr, goal: Option<&Type>) -> Result<InferResult, TypeError> {
        match &e.kind {
            ExprKind::Lam(x, body) => self.lambda(ctx, e, x, body, goal),
            ExprKind::Let(x, m, n) => self.let_value(ctx, e.span, x, m, n, goal, false),
            ExprKind::Seq(m, n) => {
                let x = Binder {
                    name: self.fresh.fresh("_"),
                    span: m.span,
                };
                self.wildcards.insert(x.name.clone());
                self.let_value(ctx, e.span, &x, m, n, goal, true)
            }
            ExprKind::LetPair(x, y, m, n) => self.let_pair(ctx, e.span, x, y, m, n, goal),
            ExprKind::Def { .. } => {
                let d = desugar(e);
                self.wildcards.extend(d.wildcards);
                self.synth(ctx, &d.expr, goal)
            }
            ExprKind::Pair(a, b) => match goal {
                Some(Type::Prod(k, s1, s2)) => {
                    let (k, s1, s2) = (*k, s1.as_ref().clone(), s2.as_ref().clone());
                    self.pair(ctx, e.span, a, b, Some((k, &s1, &s2)))
                }
                _ => {
                    let r = self.pair(ctx, e.span, a, b, None)?;
                    self.conclude(r, goal, e.span)
                }
            },
            ExprKind::Ann(inner, t) => {
                let t = self.ty(t)?;
                let r = self.synth(ctx, inner, Some(&t))?;
                self.rules.insert(Rule::Ann);
                self.conclude(InferResult { ty: t, ..r }, goal, e.span)
            }
            _ => {
                let r = self.infer_leaf(ctx, e)?;
                self.conclude(r, goal, e.span)
            }
        }
    }

    /// Compares an inferred type with the goal, if there is one.
    fn conclude(&mut self, r: InferResult, goal: Option<&Type>, span: Span) -> Result<InferResult, TypeError> {
        let Some(goal) = goal else {
            return Ok(r);
        };
        self.rules.insert(Rule::ChkInf);
        if r.ty.equiv(goal, self.opm).map_err(|e| opm_error(span, e))? {
            Ok(InferResult { ty: goal.clone(), ..r })
        } else {
            Err(TypeError::new(ErrorKind::TypeMismatch, span, "type mismatch").with(goal, &r.ty))
        }
    }

    fn resource(&mut self, ctx: &Context, e: &Expr, what: &str) -> Result<(Index, InferResult), TypeError> {
        let r = self.synth(ctx, e, None)?;
        match &r.ty {
            Type::Res(m) => Ok((m.clone(), r)),
            other => Err(TypeError::new(
                ErrorKind::TypeMismatch,
                e.span,
                format!("{what} expects a resource"),
            )
            .with("a resource type", other)),
        }
    }

    /// The greatest admissible rest of `m0` after `m1`.
    fn continuation(&self, m1: &Index, m0: &Index, span: Span, what: &str) -> Result<Index, TypeError> {
        let err = |e| opm_error(span, e);
        let m2 = self.opm.continuation(m1, m0).map_err(err)?.ok_or_else(|| {
            TypeError::new(
                ErrorKind::OpmViolation,
                span,
                format!("{what} {{{m1}}} is not admissible on a resource of type {{{m0}}}"),
            )
        })?;
        let prod = self.opm.mul(m1, &m2).map_err(err)?;
        match prod {
            Some(p) if self.opm.leq(&p, m0).map_err(err)? => Ok(m2),
            _ => Err(TypeError::new(
                ErrorKind::OpmViolation,
                span,
                format!("no continuation of {{{m0}}} after {{{m1}}}"),
            )),
        }
    }

    fn infer_leaf(&mut self, ctx: &Context, e: &Expr) -> Result<InferResult, TypeError> {
        let pure = |ty: Type, core: Term| InferResult {
            ty,
            effect: Effect::Pure,
            core,
        };
        match &e.kind {
            ExprKind::Unit => {
                self.fits(ctx, &Context::Empty, e.span, "`unit`")?;
                self.rules.insert(Rule::Unit);
                Ok(pure(Type::Unit, Term::unit()))
            }
            ExprKind::New(m) => {
                let m = self.index(m)?;
                self.fits(ctx, &Context::Empty, e.span, "`new`")?;
                self.rules.insert(Rule::New);
                Ok(pure(Type::Res(m.clone()), Term::call(Constant::New(m), Term::unit())))
            }
            ExprKind::Var(x) => {
                let Some(t) = ctx.lookup(x).cloned() else {
                    return Err(TypeError::new(
                        ErrorKind::UnboundVariable,
                        e.span,
                        format!("unbound variable `{x}`"),
                    ));
                };
                let want = Context::bind(Binding::Var(x.clone(), t.clone()));
                self.fits(ctx, &want, e.span, &format!("a use of `{x}`"))?;
                self.rules.insert(Rule::Var);
                Ok(pure(t, Term::Var(x.clone())))
            }
            ExprKind::Op(m1, inner) => {
                let m1i = self.index(m1)?;
                let (m0, r) = self.resource(ctx, inner, "an operation")?;
                let m2 = self.continuation(&m1i, &m0, e.span, "operation")?;
                self.rules.insert(Rule::Op);
                Ok(InferResult {
                    ty: Type::Res(m2),
                    effect: r.effect.join(Effect::Impure),
                    core: Term::call(Constant::Op(m1i), r.core),
                })
            }
            ExprKind::Split(m1, inner) => {
                let m1i = self.index(m1)?;
                let (m0, r) = self.resource(ctx, inner, "`split`")?;
                let m2 = self.continuation(&m1i, &m0, e.span, "borrow")?;
                self.rules.insert(Rule::Split);
                Ok(InferResult {
                    ty: Type::prod(PairKind::Ordered, Type::Res(m1i.clone()), Type::Res(m2.clone())),
                    effect: r.effect,
                    core: Term::call(Constant::Split(m1i, m2), r.core),
                })
            }
            ExprKind::Drop(inner) => {
                let (m, r) = self.resource(ctx, inner, "`drop`")?;
                if !self.opm.droppable(&m).map_err(|err| opm_error(e.span, err))? {
                    return Err(TypeError::new(
                        ErrorKind::OpmViolation,
                        e.span,
                        format!("a resource of type {{{m}}} cannot be dropped yet"),
                    ));
                }
                self.rules.insert(Rule::Drop);
                Ok(InferResult {
                    ty: Type::Unit,
                    effect: r.effect,
                    core: Term::call(Constant::Drop, r.core),
                })
            }
            ExprKind::App(f, a) => self.app(ctx, e.span, f, a),
            _ => unreachable!("handled by synth"),
        }
    }

    fn app(&mut self, ctx: &Context, span: Span, f: &Expr, a: &Expr) -> Result<InferResult, TypeError> {
        let g1 = ctx.restrict(&free_vars(f));
        let g2 = ctx.restrict(&free_vars(a));
        let rf = self.synth(&g1, f, None)?;
        let Type::Arrow(q, latent, s, t) = rf.ty.clone() else {
            return Err(TypeError::new(ErrorKind::TypeMismatch, f.span, "only functions can be applied")
                .with("a function type", &rf.ty));
        };
        let want = match q {
            Mode::Plain | Mode::Right => Context::seq(g1.clone(), g2.clone()),
            Mode::Unordered => Context::par(g1.clone(), g2.clone()),
            Mode::Left => Context::seq(g2.clone(), g1.clone()),
        };
        self.fits(ctx, &want, span, &format!("an application of a `{}` function", q.letter()))?;
        if q == Mode::Left && rf.effect == Effect::Impure {
            return Err(TypeError::new(
                ErrorKind::EffectViolation,
                f.span,
                "a function applied with mode `l` must be pure, since its argument runs first",
            ));
        }
        let ra = self.synth(&g2, a, Some(&s))?;
        if q == Mode::Right && ra.effect == Effect::Impure {
            return Err(TypeError::new(
                ErrorKind::EffectViolation,
                a.span,
                "the argument of a function applied with mode `r` must be pure",
            ));
        }
        self.rules.insert(Rule::app(q));
        Ok(InferResult {
            ty: *t,
            effect: latent.join(rf.effect).join(ra.effect),
            core: Term::app(q, rf.core, ra.core),
        })
    }

    fn pair(
        &mut self,
        ctx: &Context,
        span: Span,
        a: &Expr,
        b: &Expr,
        goal: Option<(PairKind, &Type, &Type)>,
    ) -> Result<InferResult, TypeError> {
        let g1 = ctx.restrict(&free_vars(a));
        let g2 = ctx.restrict(&free_vars(b));
        let parallel = Context::par(g1.clone(), g2.clone());
        let kind = match goal {
            Some((PairKind::Unordered, ..)) => {
                self.fits(ctx, &parallel, span, "an unordered pair")?;
                PairKind::Unordered
            }
            Some((PairKind::Ordered, ..)) => PairKind::Ordered,
            None if subcontext(ctx, &parallel) => PairKind::Unordered,
            None => PairKind::Ordered,
        };
        if kind == PairKind::Ordered {
            self.fits(ctx, &Context::seq(g1.clone(), g2.clone()), span, "a pair")?;
        }
        let r1 = self.synth(&g1, a, goal.map(|g| g.1))?;
        let r2 = self.synth(&g2, b, goal.map(|g| g.2))?;
        if kind == PairKind::Ordered && r1.ty.is_ord() && r2.effect == Effect::Impure {
            return Err(TypeError::new(
                ErrorKind::EffectViolation,
                b.span,
                "the second component of an ordered pair with an ordered first component must be pure",
            ));
        }
        self.rules.insert(match kind {
            PairKind::Unordered => Rule::UPair,
            PairKind::Ordered => Rule::OPair,
        });
        Ok(InferResult {
            ty: Type::prod(kind, r1.ty, r2.ty),
            effect: r1.effect.join(r2.effect),
            core: Term::pair(kind, r1.core, r2.core),
        })
    }

    fn lambda(
        &mut self,
        ctx: &Context,
        e: &Expr,
        x: &Binder,
        body: &Expr,
        goal: Option<&Type>,
    ) -> Result<InferResult, TypeError> {
        let (q, latent, s, t) = match goal {
            Some(Type::Arrow(q, latent, s, t)) => (*q, *latent, s.as_ref(), t.as_ref()),
            Some(other) => {
                return Err(TypeError::new(ErrorKind::TypeMismatch, e.span, "a function cannot have this type")
                    .with(other, "a function"))
            }
            None => {
                return Err(TypeError::new(
                    ErrorKind::TypeMismatch,
                    e.span,
                    "cannot infer the type of a function; add a type annotation",
                ))
            }
        };
        let bound = Context::bind(Binding::Var(x.name.clone(), s.clone()));
        let inner = match q {
            Mode::Plain => {
                if !ctx.is_unr() {
                    return Err(TypeError::new(
                        ErrorKind::ModeMismatch,
                        e.span,
                        "a `u` function cannot capture ordered bindings",
                    )
                    .with("an unrestricted context", ctx.simplify()));
                }
                Context::seq(ctx.clone(), bound)
            }
            Mode::Unordered => Context::par(ctx.clone(), bound),
            Mode::Right => Context::seq(ctx.clone(), bound),
            Mode::Left => Context::seq(bound, ctx.clone()),
        };
        let r = self.synth(&inner, body, Some(t))?;
        if r.effect > latent {
            return Err(TypeError::new(
                ErrorKind::EffectViolation,
                body.span,
                "the body performs resource operations but the latent effect is 0",
            )
            .with(latent, r.effect));
        }
        self.rules.insert(Rule::abs(q));
        Ok(InferResult {
            ty: Type::arrow(q, latent, s.clone(), t.clone()),
            effect: Effect::Pure,
            core: Term::lam(q, x.name.clone(), r.core),
        })
    }

    /// `let x = m in n`, or `m; n` when `seq`. Tries the plain, unordered
    /// and left modes in that order.
    #[allow(clippy::too_many_arguments)]
    fn let_value(
        &mut self,
        ctx: &Context,
        span: Span,
        x: &Binder,
        m: &Expr,
        n: &Expr,
        goal: Option<&Type>,
        seq: bool,
    ) -> Result<InferResult, TypeError> {
        let g_arg = ctx.restrict(&free_vars(m));
        let mut body_fv = free_vars(n);
        body_fv.remove(&x.name);
        let g_fn = ctx.restrict(&body_fv);
        let rm = self.synth(&g_arg, m, None)?;
        let s = rm.ty.clone();
        if self.wildcards.contains(&x.name) && !s.is_unr() {
            let what = if seq { "the left side of `;`" } else { "a `_` binding" };
            return Err(TypeError::new(
                ErrorKind::TypeMismatch,
                m.span,
                format!("{what} must have an unrestricted type"),
            )
            .with("an unrestricted type", &s));
        }
        let bound = Context::bind(Binding::Var(x.name.clone(), s.clone()));
        let (q, inner, kind) = if g_fn.is_unr() && subcontext(ctx, &Context::seq(g_fn.clone(), g_arg.clone())) {
            let inner = Context::seq(g_fn.simplify(), bound);
            (Mode::Plain, inner, binding_kind(&s, false))
        } else if subcontext(ctx, &Context::par(g_fn.clone(), g_arg.clone())) {
            let inner = Context::par(g_fn.simplify(), bound);
            (Mode::Unordered, inner, binding_kind(&s, true))
        } else {
            let what = if seq { "sequencing" } else { "this binding" };
            self.fits(ctx, &Context::seq(g_arg.clone(), g_fn.clone()), span, what)?;
            let inner = Context::seq(bound, g_fn.simplify());
            (Mode::Left, inner, binding_kind(&s, false))
        };
        self.lets.push(LetRecord {
            span,
            names: vec![x.name.clone()],
            form: if seq { LetForm::Seq(q) } else { LetForm::Value(q) },
            kind,
            pattern: None,
        });
        self.snapshots.insert(x.name.clone(), inner.clone());
        let rn = self.synth(&inner, n, goal)?;
        self.rules.insert(Rule::abs(q));
        self.rules.insert(Rule::app(q));
        Ok(InferResult {
            ty: rn.ty,
            effect: rm.effect.join(rn.effect),
            core: Term::let_in(q, x.name.clone(), rm.core, rn.core),
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn let_pair(
        &mut self,
        ctx: &Context,
        span: Span,
        x: &Binder,
        y: &Binder,
        m: &Expr,
        n: &Expr,
        goal: Option<&Type>,
    ) -> Result<InferResult, TypeError> {
        let Some((g, header_ctx)) = decompose(ctx, &free_vars(m)) else {
            return Err(TypeError::new(
                ErrorKind::DecompositionFailure,
                m.span,
                "the bindings used by the pair cannot be isolated from the rest of the context",
            )
            .with(format!("a context of the form G[{}]", m), ctx.simplify()));
        };
        let (lets, rules) = (self.lets.len(), self.rules.clone());
        let rm = self.synth(&header_ctx, m, None)?;
        let Type::Prod(k, s1, s2) = rm.ty.clone() else {
            return Err(TypeError::new(ErrorKind::TypeMismatch, m.span, "only pairs can be taken apart")
                .with("a pair type", &rm.ty));
        };
        if rm.effect == Effect::Impure {
            // bind the effectful header first, then take the variable apart
            self.lets.truncate(lets);
            self.rules = rules;
            let p = Binder {
                name: self.fresh.fresh("p"),
                span: m.span,
            };
            let var = Expr::new(ExprKind::Var(p.name.clone()), m.span);
            let elim = Expr::new(ExprKind::LetPair(x.clone(), y.clone(), Box::new(var), Box::new(n.clone())), span);
            let outer = Expr::new(ExprKind::Let(p, Box::new(m.clone()), Box::new(elim)), span);
            return self.synth(ctx, &outer, goal);
        }
        let bx = Context::bind(Binding::Var(x.name.clone(), *s1));
        let by = Context::bind(Binding::Var(y.name.clone(), *s2));
        let (pair_ctx, rule) = match k {
            PairKind::Unordered => (Context::par(bx, by), Rule::ULet),
            PairKind::Ordered => (Context::seq(bx, by), Rule::OLet),
        };
        let g = g.simplify();
        let inner = g.fill(&pair_ctx);
        let kind = if par(&g).is_some() {
            BindingKind::UnorderedLinear
        } else {
            BindingKind::Ordered
        };
        self.lets.push(LetRecord {
            span,
            names: vec![x.name.clone(), y.name.clone()],
            form: LetForm::Pair(k),
            kind,
            pattern: Some(g),
        });
        self.snapshots.insert(x.name.clone(), inner.clone());
        self.snapshots.insert(y.name.clone(), inner.clone());
        let rn = self.synth(&inner, n, goal)?;
        self.rules.insert(rule);
        Ok(InferResult {
            ty: rn.ty,
            effect: rn.effect,
            core: Term::let_pair(k, x.name.clone(), y.name.clone(), rm.core, rn.core),
        })
    }
}
