//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

#[path = "../../core/tests/oracles/mod.rs"]
mod oracles;

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::rngs::StdRng;
use rand::SeedableRng;

use ordstate::checker::{BindingKind, Rule, Typed};
use ordstate::context::{equiv, subcontext, Context, Interp};
use ordstate::interp::{run, RunOptions, RunOutcome, StepRule, StuckReason};
use ordstate::opm::{Index, Opm, OpmInstance, Ownership, OwnershipOpm};
use ordstate::regex::{equivalent, includes, product_derivative, Regex};
use ordstate::term::{Constant, Term};
use ordstate_cli::{check_source, dump_core};

type Outcome = Result<String, String>;

fn dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

fn read(rel: &str) -> String {
    std::fs::read_to_string(dir().join(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

fn regex_opm() -> OpmInstance {
    OpmInstance::by_name("regex").expect("regex OPM")
}

fn accept(rel: &str) -> Result<Typed, String> {
    check_source(&read(rel), &regex_opm()).map_err(|ds| {
        let d = &ds[0];
        format!("{rel} rejected: {}:{}: {} {}", d.line, d.col, d.kind, d.message)
    })
}

fn reject_kind(rel: &str) -> Result<String, String> {
    match check_source(&read(rel), &regex_opm()) {
        Ok(_) => Err(format!("{rel} was accepted")),
        Err(ds) => Ok(ds[0].kind.clone()),
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn copy_end_to_end() -> Outcome {
    let typed = accept("programs/copy.ord")?;
    let r = run(&typed.core, &regex_opm(), RunOptions { fuel: 1000, paranoid: true });
    match &r.outcome {
        RunOutcome::Value(v) => ensure(*v == Term::unit(), || format!("value {v}, expected unit"))?,
        other => return Err(format!("outcome {other:?}")),
    }
    ensure(r.heap.is_empty(), || format!("final heap {}", r.heap))?;
    ensure(r.violations.is_empty(), || format!("{} oracle violations", r.violations.len()))?;
    Ok(format!("{} steps", r.steps.len()))
}

fn mode_golden() -> Outcome {
    let src = read("programs/copy.ord");
    let typed = accept("programs/copy.ord")?;
    let golden = read("golden/copy.core");
    let actual = dump_core(&src, &typed);
    ensure(actual == golden, || format!("dump-core differs from golden:\n{actual}"))?;

    let line = |n: usize| -> Vec<_> {
        typed
            .lets
            .iter()
            .filter(|l| l.span.line_col(&src).0 == n)
            .collect()
    };
    let l1 = line(1);
    ensure(l1.len() == 1 && l1[0].kind == BindingKind::Unrestricted, || "line 1 binding is not unrestricted".into())?;
    let l4 = line(4);
    ensure(
        l4.len() == 2 && l4[0].kind == BindingKind::Ordered && l4[1].kind == BindingKind::UnorderedLinear,
        || "line 4 bindings are not ordered then unordered-linear".into(),
    )?;
    let l5 = line(5);
    let excludes = |l: &&ordstate::checker::LetRecord, x: &str| {
        l.kind == BindingKind::UnorderedLinear
            && l.pattern.as_ref().is_some_and(|p| !p.ordered_vars().iter().any(|v| v.as_str() == x))
    };
    ensure(
        l5.len() == 2 && excludes(&l5[0], "if0") && excludes(&l5[1], "of0"),
        || "line 5 bindings are not unordered-linear with the split handle decomposed away".into(),
    )?;
    let l6 = line(6);
    ensure(l6.len() == 1 && l6[0].kind == BindingKind::Unrestricted, || "line 6 binding is not unrestricted".into())?;
    Ok("exact match".into())
}

fn misuse() -> Outcome {
    let kind = reject_kind("programs/reject/misuse.ord")?;
    ensure(kind == "context-misuse", || format!("misuse rejected as {kind}"))?;
    accept("programs/smoke/10_thunk.ord")?;
    Ok("reordered thunk rejected, original accepted".into())
}

fn aliasing() -> Outcome {
    accept("programs/smoke/07_borrow_then_close.ord")?;
    accept("programs/smoke/22_ordered_pair_argument.ord")?;
    for rel in ["programs/reject/alias_reversed.ord", "programs/reject/alias_pair_reversed.ord"] {
        let kind = reject_kind(rel)?;
        ensure(kind == "context-misuse", || format!("{rel} rejected as {kind}"))?;
    }
    Ok("h1 then h2 accepted, h2 then h1 rejected".into())
}

fn ownership_table() -> Outcome {
    use Ownership::*;
    let mul = [
        (Eps, Eps, Some(Eps)),
        (Eps, Borrow, Some(Borrow)),
        (Eps, Owned, Some(Owned)),
        (Borrow, Eps, Some(Borrow)),
        (Borrow, Borrow, Some(Borrow)),
        (Borrow, Owned, Some(Owned)),
        (Owned, Eps, Some(Owned)),
        (Owned, Borrow, None),
        (Owned, Owned, None),
    ];
    let leq = [
        (Eps, Eps, true),
        (Eps, Borrow, true),
        (Eps, Owned, false),
        (Borrow, Eps, false),
        (Borrow, Borrow, true),
        (Borrow, Owned, false),
        (Owned, Eps, false),
        (Owned, Borrow, false),
        (Owned, Owned, true),
    ];
    let opm = OpmInstance::by_name("ownership").expect("ownership OPM");
    let mut cells = 0;
    for (x, y, z) in mul {
        ensure(OwnershipOpm::mul_table(x, y) == z, || format!("{x} ⊙ {y}"))?;
        let via = opm.mul(&Index::Own(x), &Index::Own(y)).map_err(|e| e.to_string())?;
        ensure(via == z.map(Index::Own), || format!("{x} ⊙ {y} through the instance"))?;
        cells += 1;
    }
    for (x, y, b) in leq {
        ensure(OwnershipOpm::leq_table(x, y) == b, || format!("{x} ≤ {y}"))?;
        let via = opm.leq(&Index::Own(x), &Index::Own(y)).map_err(|e| e.to_string())?;
        ensure(via == b, || format!("{x} ≤ {y} through the instance"))?;
        cells += 1;
    }
    Ok(format!("{cells} cells"))
}

fn regex_oracles() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let pairs = 250;
    let mut disagreements = Vec::new();
    let mut unsound = Vec::new();
    let mut not_maximal = Vec::new();
    for _ in 0..pairs {
        let sigma = oracles::random_alphabet(&mut rng);
        let x = oracles::random_regex(&mut rng, &sigma, 4);
        let y = oracles::random_regex(&mut rng, &sigma, 4);
        let lib = includes(&y, &x).map_err(|e| e.to_string())?;
        if lib != oracles::includes_upto(&y, &x, 6) {
            disagreements.push(format!("{x} ⊆ {y}"));
        }
        let z = product_derivative(&y, &x).map_err(|e| e.to_string())?;
        let sound = includes(&y, &Regex::concat(&x, &z)).map_err(|e| e.to_string())?;
        if !sound || !oracles::soundness_counterexamples(&x, &y, &z, 5).is_empty() {
            unsound.push(format!("{y} / {x} = {z}"));
        }
        if !oracles::maximality_counterwords(&x, &y, &z, 5, 7).is_empty() {
            not_maximal.push(format!("{y} / {x} = {z}"));
        }
    }
    ensure(disagreements.is_empty(), || format!("inclusion disagreements: {disagreements:?}"))?;
    ensure(unsound.is_empty(), || format!("unsound derivatives: {unsound:?}"))?;
    ensure(not_maximal.is_empty(), || format!("non-maximal derivatives: {not_maximal:?}"))?;

    let e: Regex = "(r|w)*c".parse().map_err(|e| format!("{e:?}"))?;
    for den in ["r*", "w*"] {
        let d: Regex = den.parse().map_err(|e| format!("{e:?}"))?;
        let q = product_derivative(&e, &d).map_err(|e| e.to_string())?;
        ensure(equivalent(&q, &e).map_err(|e| e.to_string())?, || format!("{e} / {den} = {q}"))?;
    }
    Ok(format!("{pairs} pairs, 0 disagreements"))
}

fn context_algebra() -> Outcome {
    let universe = oracles::context_universe();
    let n = universe.len();
    let classes = oracles::rewrite_classes(&universe);
    let refs: Vec<_> = universe.iter().map(oracles::ref_graph).collect();
    let interps: Vec<Interp> = universe.iter().map(Context::interpret).collect();
    let eq = |i: usize, j: usize| interps[i].unr == interps[j].unr && interps[i].graph.iso(&interps[j].graph);
    let sub = |i: usize, j: usize| {
        interps[i].unr.is_superset(&interps[j].unr) && interps[i].graph.embedding_into(&interps[j].graph, false).is_some()
    };

    // the public relations are the interpretation-level ones
    for i in (0..n).step_by(7) {
        for j in (0..n).step_by(11) {
            ensure(equiv(&universe[i], &universe[j]) == eq(i, j), || "equiv is not graph isomorphism".into())?;
            ensure(subcontext(&universe[i], &universe[j]) == sub(i, j), || "subcontext is not graph embedding".into())?;
        }
    }

    // agreement with the rewriting closure, through class representatives
    let reps: Vec<usize> = (0..n).filter(|&i| classes[i] == i).collect();
    for i in 0..n {
        for &r in &reps {
            let lib = eq(i, r);
            ensure(lib == eq(r, i), || format!("equiv not symmetric on {}", universe[i]))?;
            ensure(lib == (classes[i] == r), || {
                format!("equiv({}, {}) = {lib} disagrees with rewriting", universe[i], universe[r])
            })?;
            ensure(lib == oracles::equiv_brute(&refs[i], &refs[r]), || {
                format!("equiv({}, {}) = {lib} disagrees with brute force", universe[i], universe[r])
            })?;
        }
    }

    // equivalence relation, pairwise on contexts without `·` leaves
    let plain: Vec<usize> = (0..n).filter(|&i| !has_empty_leaf(&universe[i])).collect();
    let rows: Vec<BTreeSet<usize>> = plain
        .iter()
        .map(|&i| plain.iter().copied().filter(|&j| eq(i, j)).collect())
        .collect();
    for (k, &i) in plain.iter().enumerate() {
        ensure(rows[k].contains(&i), || format!("equiv not reflexive on {}", universe[i]))?;
        for &j in &rows[k] {
            let kj = plain.iter().position(|&p| p == j).expect("member");
            ensure(rows[kj] == rows[k], || {
                format!("equiv not symmetric or transitive at {} / {}", universe[i], universe[j])
            })?;
        }
    }

    // the library graph is the reference graph, so one context per distinct
    // graph stands for all of them
    for i in 0..n {
        let (g, r) = (&interps[i], &refs[i]);
        ensure(g.graph.labels == r.labels && g.graph.edges == r.edges && g.unr == r.unr, || {
            format!("interpretation of {} differs from the reference", universe[i])
        })?;
    }
    let mut seen = std::collections::HashSet::new();
    let distinct: Vec<usize> = (0..n)
        .filter(|&i| seen.insert((refs[i].labels.clone(), refs[i].edges.clone())))
        .collect();
    let mut sub_pairs = 0usize;
    for group in by_labels(&refs, &distinct) {
        for &i in &group {
            for &j in &group {
                let lib = sub(i, j);
                ensure(lib == oracles::subcontext_brute(&refs[i], &refs[j]), || {
                    format!("subcontext({}, {}) = {lib} disagrees with brute force", universe[i], universe[j])
                })?;
                sub_pairs += 1;
            }
        }
    }

    let mut par_pairs = 0usize;
    for a in &universe {
        for b in &universe {
            if leaves(a) + leaves(b) > 4 {
                continue;
            }
            let (p, s) = (Context::par(a.clone(), b.clone()), Context::seq(a.clone(), b.clone()));
            ensure(subcontext(&p, &s), || format!("({a}) ∥ ({b}) is not a subcontext of ({a}), ({b})"))?;
            par_pairs += 1;
        }
    }
    Ok(format!(
        "{n} contexts, {} classes, {} graphs, {sub_pairs} subcontext pairs, {par_pairs} ∥/, pairs",
        reps.len(),
        distinct.len()
    ))
}

fn by_labels(refs: &[oracles::RefGraph], idx: &[usize]) -> Vec<Vec<usize>> {
    let mut groups: std::collections::BTreeMap<Vec<_>, Vec<usize>> = Default::default();
    for &i in idx {
        let mut ls = refs[i].labels.clone();
        ls.sort();
        groups.entry(ls).or_default().push(i);
    }
    groups.into_values().collect()
}

fn has_empty_leaf(c: &Context) -> bool {
    match c {
        Context::Empty => true,
        Context::Bind(_) => false,
        Context::Seq(a, b) | Context::Par(a, b) => has_empty_leaf(a) || has_empty_leaf(b),
    }
}

fn leaves(c: &Context) -> usize {
    match c {
        Context::Empty | Context::Bind(_) => 1,
        Context::Seq(a, b) | Context::Par(a, b) => leaves(a) + leaves(b),
    }
}

fn smoke_corpus() -> Outcome {
    let opm = regex_opm();
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir().join("programs/smoke"))
        .map_err(|e| e.to_string())?
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "ord"))
        .collect();
    files.sort();
    ensure(files.len() >= 20, || format!("only {} programs", files.len()))?;
    let mut rules: BTreeSet<Rule> = BTreeSet::new();
    let mut gammas: BTreeSet<&'static str> = BTreeSet::new();
    let mut total_steps = 0;
    for path in &files {
        let name = path.file_name().expect("name").to_string_lossy().to_string();
        let src = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
        let typed = check_source(&src, &opm).map_err(|ds| format!("{name}: {}", ds[0].message))?;
        ensure(typed.ty.to_string() == "Unit", || format!("{name} has type {}", typed.ty))?;
        rules.extend(typed.rules.iter().copied());
        let r = run(&typed.core, &opm, RunOptions { fuel: 10_000, paranoid: true });
        match &r.outcome {
            RunOutcome::Value(v) if *v == Term::unit() => {}
            other => return Err(format!("{name}: {other:?}")),
        }
        ensure(r.heap.is_empty(), || format!("{name}: final heap {}", r.heap))?;
        ensure(r.violations.is_empty(), || format!("{name}: {:?}", r.violations))?;
        gammas.extend(r.gamma_events().map(|s| s.rule.name()));
        total_steps += r.steps.len();
    }
    let missing: Vec<_> = Rule::ALL.iter().filter(|r| !rules.contains(r)).map(|r| r.name()).collect();
    ensure(missing.is_empty(), || format!("typing rules never used: {missing:?}"))?;
    let all_gammas: BTreeSet<&str> = StepRule::ALL.iter().filter(|r| r.is_gamma()).map(|r| r.name()).collect();
    let missing: Vec<_> = all_gammas.difference(&gammas).collect();
    ensure(missing.is_empty(), || format!("resource rules never fired: {missing:?}"))?;
    Ok(format!("{} programs, {total_steps} steps, {} typing rules", files.len(), rules.len()))
}

fn runtime_guard() -> Outcome {
    let opm = regex_opm();
    let r_idx = opm.parse_index("r")?;
    let term = Term::call(
        Constant::Drop,
        Term::call(
            Constant::Op(r_idx.clone()),
            Term::call(Constant::Op(r_idx.clone()), Term::call(Constant::New(r_idx), Term::unit())),
        ),
    );
    let r = run(&term, &opm, RunOptions { fuel: 100, paranoid: true });
    let stuck = match &r.outcome {
        RunOutcome::Stuck(s) => s,
        other => return Err(format!("outcome {other:?}")),
    };
    ensure(stuck.reason == StuckReason::OpInadmissible, || format!("stuck with {}", stuck.reason.as_str()))?;
    let ops = r.steps.iter().filter(|s| s.rule == StepRule::Op).count();
    ensure(ops == 1, || format!("{ops} operations succeeded before getting stuck"))?;
    let last = r.steps.last().map(|s| s.rule);
    ensure(last == Some(StepRule::Op), || format!("last step was {last:?}"))?;
    ensure(stuck.redex.to_string().starts_with("op{r}"), || format!("stuck at {}", stuck.redex))?;
    Ok(format!("stuck at {} after {} steps", stuck.redex, r.steps.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("file-copy program end to end", copy_end_to_end),
        ("mode inference golden", mode_golden),
        ("thunk misuse rejection", misuse),
        ("aliasing discipline", aliasing),
        ("ownership OPM table", ownership_table),
        ("regex oracles", regex_oracles),
        ("context algebra", context_algebra),
        ("soundness smoke corpus", smoke_corpus),
        ("runtime guard", runtime_guard),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(f).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let ms = start.elapsed().as_millis();
        match result {
            Ok(detail) => println!("PASS  {}. {name} ({detail}; {ms} ms)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  {}. {name}: {why} ({ms} ms)", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
