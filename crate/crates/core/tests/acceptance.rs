//! Acceptance suite. Prints one line per criterion and exits non-zero when
//! the set of failing criteria differs from `EXPECTED_FAILURES`.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use serde_json::{json, Value};
use tel_core::models::{Range, ScenarioClass, Semantics, SubsetModel};
use tel_core::proofs::fixtures::builtin_fixtures;
use tel_core::proofs::{builtin_logics, check_proof, Justification, Logic, Proof, ProofLine};
use tel_core::relational::{enumerate_belief_frames, RelationalModel};
use tel_core::search::{
    decide_bounded_satisfiability, decide_bounded_validity, enumerate_models, scheme_soundness_report, Bounds,
    PoolSpec, Satisfiability, SoundnessReport,
};
use tel_core::syntax::{Formula, SchemeTemplate, Translation, Tree};
use tel_core::topology::enumerate_topologies;
use tel_core::{parse, PointSet};

/// Largest model size for the semantic criteria.
const MAX_POINTS: usize = 3;
/// Largest countermodel size where a small countermodel is required.
const SMALL_COUNTERMODEL: usize = 2;
/// Largest belief frame size for the transfer criterion.
const MAX_FRAME_POINTS: usize = 4;
/// Topologies on at most three points.
const TOPOLOGIES_UP_TO_3: usize = 34;

/// Criteria that fail as stated, with the reason. See the README.
const EXPECTED_FAILURES: &[(u32, &str)] = &[(
    5,
    "weak factivity is not valid for consistent scenarios under almost-everywhere belief; it needs dense scenarios",
)];

struct Outcome {
    passed: bool,
    summary: String,
    report: Value,
}

impl Outcome {
    fn new(passed: bool, summary: impl Into<String>, report: Value) -> Self {
        Outcome { passed, summary: summary.into(), report }
    }
}

struct Ctx {
    jobs: usize,
    pool: Vec<Formula>,
}

impl Ctx {
    fn bounds(&self, max_points: usize) -> Bounds {
        Bounds::new(max_points).with_props(["p", "q"]).jobs(self.jobs)
    }
}

fn scheme(logic: &str, name: &str) -> SchemeTemplate {
    builtin_logics().get(logic).unwrap().scheme(name).unwrap().clone()
}

fn report(ctx: &Ctx, s: &SchemeTemplate, sem: Semantics, cls: ScenarioClass, max_points: usize) -> SoundnessReport {
    scheme_soundness_report(s, sem, cls, &ctx.bounds(max_points), &ctx.pool).unwrap()
}

/// Every failing instance must replay to false at its reported scenario.
fn replays(r: &SoundnessReport) -> bool {
    r.violations.iter().all(|v| !v.model.eval(&v.scenario, &v.instance, r.semantics).unwrap())
}

fn zero_violation_suite(ctx: &Ctx, schemes: &[(&str, &str)], sem: Semantics, cls: ScenarioClass) -> (usize, Value) {
    let mut bad = 0;
    let mut rows = Vec::new();
    for (logic, name) in schemes {
        let r = report(ctx, &scheme(logic, name), sem, cls, MAX_POINTS);
        bad += r.violations.len();
        rows.push(json!({"scheme": name, "semantics": sem, "class": cls, "checked": r.checked, "violations": r.violations.len(),
            "first": r.violations.first().map(|v| v.instance.render_sugared())}));
    }
    (bad, Value::Array(rows))
}

fn topology_laws(_: &Ctx) -> Outcome {
    let mut spaces = 0;
    let mut violations = 0u64;
    for n in 1..=MAX_POINTS {
        for t in enumerate_topologies(n).unwrap() {
            spaces += 1;
            let whole = t.whole();
            for a in whole.subsets() {
                let ia = t.int(a);
                let ca = t.cl(a);
                let laws = [
                    ia.is_subset(a),
                    t.int(ia) == ia,
                    a.is_subset(ca),
                    t.cl(ca) == ca,
                    ca == whole - t.int(whole - a),
                    ia == whole - t.cl(whole - a),
                ];
                violations += laws.iter().filter(|ok| !**ok).count() as u64;
                for b in whole.subsets() {
                    violations += u64::from(t.int(a & b) != ia & t.int(b));
                    violations += u64::from(t.cl(a | b) != ca | t.cl(b));
                }
            }
            violations += u64::from(t.int(whole) != whole) + u64::from(t.cl(PointSet::EMPTY) != PointSet::EMPTY);
        }
    }
    Outcome::new(
        spaces == TOPOLOGIES_UP_TO_3 && violations == 0,
        format!("{violations} violations over {spaces} topologies"),
        json!({"topologies": spaces, "violations": violations}),
    )
}

/// Interior computed from the list of open sets alone.
fn oracle_int(opens: &[PointSet], a: PointSet) -> PointSet {
    opens.iter().filter(|o| o.is_subset(a)).fold(PointSet::EMPTY, |acc, &o| acc | o)
}

fn oracle_cl(opens: &[PointSet], whole: PointSet, a: PointSet) -> PointSet {
    whole - oracle_int(opens, whole - a)
}

fn almost_inclusion(_: &Ctx) -> Outcome {
    let (mut checked, mut violations) = (0u64, 0u64);
    for n in 1..=MAX_POINTS {
        for t in enumerate_topologies(n).unwrap() {
            let (opens, whole) = (t.opens(), t.whole());
            for &a in opens {
                for b in whole.subsets() {
                    let rest = a - b;
                    let nowhere_dense = oracle_int(opens, oracle_cl(opens, whole, rest)).is_empty();
                    let by_closure = a.is_subset(oracle_cl(opens, whole, oracle_int(opens, b)));
                    checked += 1;
                    violations += u64::from(nowhere_dense != by_closure) + u64::from(t.almost_subset(a, b) != by_closure);
                }
            }
        }
    }
    Outcome::new(violations == 0, format!("{violations} violations over {checked} (open A, B) pairs"), json!({"checked": checked, "violations": violations}))
}

fn strong_soundness(ctx: &Ctx) -> Outcome {
    let schemes = [
        ("SEL", "K_B"),
        ("SEL", "sPI"),
        ("SEL", "KB"),
        ("SEL", "RB"),
        ("SEL", "wF"),
        ("SEL", "CB"),
        ("S5_K", "K_K"),
        ("S5_K", "T_K"),
        ("S5_K", "4_K"),
        ("S5_K", "5_K"),
        ("S4_box", "K_box"),
        ("S4_box", "T_box"),
        ("S4_box", "4_box"),
        ("EL", "KI"),
    ];
    let (bad, rows) = zero_violation_suite(ctx, &schemes, Semantics::Strong, ScenarioClass::All);
    Outcome::new(bad == 0, format!("{bad} violations, {} schemes, pool {}", schemes.len(), ctx.pool.len()), rows)
}

const BELIEF_CORE: [(&str, &str); 4] = [("ELB", "K_B"), ("ELB", "sPI"), ("ELB", "KB"), ("ELB", "RB")];

fn ed_soundness(ctx: &Ctx) -> Outcome {
    let (bad, core) = zero_violation_suite(ctx, &BELIEF_CORE, Semantics::Ed, ScenarioClass::All);

    let d = scheme("ELB+D_B", "D_B");
    let d_consistent = report(ctx, &d, Semantics::Ed, ScenarioClass::Consistent, MAX_POINTS);
    let d_all = report(ctx, &d, Semantics::Ed, ScenarioClass::All, MAX_POINTS);
    let d_all_empty_v = d_all.violations.iter().any(|v| v.scenario.v == Some(PointSet::EMPTY));

    let wf = scheme("ELB+wF", "wF");
    let wf_dense = report(ctx, &wf, Semantics::Ed, ScenarioClass::Dense, MAX_POINTS);
    let wf_all = decide_bounded_validity(&parse("B p -> <>p").unwrap(), Semantics::Ed, ScenarioClass::All, &ctx.bounds(SMALL_COUNTERMODEL)).unwrap();
    let wf_small = wf_all.witness().is_some_and(|w| !w.model.eval(&w.scenario, &parse("B p -> <>p").unwrap(), Semantics::Ed).unwrap());

    let passed = bad == 0
        && d_consistent.is_sound()
        && !d_all.is_sound()
        && d_all_empty_v
        && replays(&d_all)
        && wf_dense.is_sound()
        && wf_small;
    Outcome::new(
        passed,
        format!(
            "core {bad} violations; D_B consistent {} / all {} (empty V: {d_all_empty_v}); wF dense {} / countermodel within {SMALL_COUNTERMODEL} points: {wf_small}",
            d_consistent.violations.len(),
            d_all.violations.len(),
            wf_dense.violations.len()
        ),
        json!({"core": core, "d_b_consistent": d_consistent.violations.len(), "d_b_all": d_all.violations.len(),
            "wf_dense": wf_dense.violations.len(), "wf_all": wf_all.to_json()}),
    )
}

fn ae_soundness(ctx: &Ctx) -> Outcome {
    let mut schemes = BELIEF_CORE.to_vec();
    schemes.extend([("ELB+D_B", "D_B"), ("ELB+wF", "wF"), ("ELB+CB", "CB")]);
    let mut failing = Vec::new();
    let mut rows = Vec::new();
    for (logic, name) in &schemes {
        let r = report(ctx, &scheme(logic, name), Semantics::Ae, ScenarioClass::Consistent, MAX_POINTS);
        if !r.is_sound() {
            let v = &r.violations[0];
            failing.push(format!("{name} ({} instances, e.g. {} on {} points)", r.violations.len(), v.instance.render_sugared(), v.model.space().len()));
        }
        rows.push(json!({"scheme": name, "violations": r.violations.len(),
            "first": r.violations.first().map(|v| json!({"instance": v.instance.render_sugared(), "model": tel_core::io::ModelSpec::of(&v.model),
                "scenario": tel_core::io::ScenarioSpec::of(&v.scenario, v.model.space())}))}));
    }
    let cb = parse("B([]p | []~[]p)").unwrap();
    let cb_ed = decide_bounded_validity(&cb, Semantics::Ed, ScenarioClass::All, &ctx.bounds(SMALL_COUNTERMODEL)).unwrap();
    let cb_small = cb_ed.witness().is_some_and(|w| !w.model.eval(&w.scenario, &cb, Semantics::Ed).unwrap());
    // Informational: the same scheme restricted to dense scenarios.
    let wf_dense = report(ctx, &scheme("ELB+wF", "wF"), Semantics::Ae, ScenarioClass::Dense, MAX_POINTS);
    let found = if failing.is_empty() { "0 violations".to_string() } else { format!("violations in {}", failing.join(", ")) };
    let summary = format!(
        "{found}; CB under ed countermodel within {SMALL_COUNTERMODEL} points: {cb_small}; wF on dense scenarios: {} violations",
        wf_dense.violations.len()
    );
    Outcome::new(
        failing.is_empty() && cb_small,
        summary,
        json!({"schemes": rows, "cb_ed": cb_ed.to_json(), "wf_dense_violations": wf_dense.violations.len()}),
    )
}

/// Runs `f` on every model within the bound and every range of `sem`.
fn for_each_range(ctx: &Ctx, sem: Semantics, mut f: impl FnMut(&SubsetModel, Range)) -> usize {
    let models = enumerate_models(&ctx.bounds(MAX_POINTS).covering(&ctx.pool)).unwrap();
    for m in models.iter() {
        for r in m.ranges(sem, ScenarioClass::All) {
            f(&m, r);
        }
    }
    models.len()
}

fn differ(a: PointSet, b: PointSet) -> usize {
    ((a - b) | (b - a)).len()
}

fn equal_doxastic_range(ctx: &Ctx) -> Outcome {
    let (mut compared, mut disagreements) = (0u64, 0u64);
    let models = for_each_range(ctx, Semantics::Strong, |m, r| {
        for f in &ctx.pool {
            compared += r.u.len() as u64;
            disagreements += differ(m.ext(r, f, Semantics::Ae), m.ext(r, f, Semantics::Strong)) as u64;
        }
    });
    Outcome::new(
        disagreements == 0,
        format!("{disagreements} disagreements over {compared} scenario-formula pairs in {models} models"),
        json!({"compared": compared, "disagreements": disagreements}),
    )
}

fn alpha_translation(ctx: &Ctx) -> Outcome {
    let translated: Vec<Formula> = ctx.pool.iter().map(|f| f.translate(Translation::Alpha)).collect();
    let (mut compared, mut disagreements) = (0u64, 0u64);
    let models = for_each_range(ctx, Semantics::Ae, |m, r| {
        for (f, g) in ctx.pool.iter().zip(&translated) {
            compared += r.u.len() as u64;
            disagreements += differ(m.ext(r, f, Semantics::Ae), m.ext(r, g, Semantics::Ae)) as u64;
        }
    });
    Outcome::new(
        disagreements == 0,
        format!("{disagreements} disagreements over {compared} scenario-formula pairs in {models} models"),
        json!({"compared": compared, "disagreements": disagreements}),
    )
}

fn moore_pair(ctx: &Ctx) -> Outcome {
    let b = ctx.bounds(MAX_POINTS);
    let known = decide_bounded_satisfiability(&parse("K(p & ~K p)").unwrap(), Semantics::Strong, ScenarioClass::All, &b).unwrap();
    let knowable = parse("[](p & ~K p)").unwrap();
    let sat = decide_bounded_satisfiability(&knowable, Semantics::Strong, ScenarioClass::All, &b).unwrap();
    let sierpinski = |m: &SubsetModel| {
        let s = m.space();
        s.len() == 2 && s.opens().len() == 3
    };
    let witness_ok = match &sat {
        Satisfiability::Satisfiable(w) => sierpinski(&w.model) && w.model.eval(&w.scenario, &knowable, Semantics::Strong).unwrap(),
        Satisfiability::UnsatisfiableUpToBound { .. } => false,
    };
    let unsat = matches!(known, Satisfiability::UnsatisfiableUpToBound { .. });
    Outcome::new(
        unsat && witness_ok,
        format!("K-form unsatisfiable: {unsat}; []-form satisfied on a two-point Sierpinski space: {witness_ok}"),
        json!({"known": known.to_json(), "knowable": sat.to_json()}),
    )
}

fn negative_fixtures(ctx: &Ctx) -> Outcome {
    let b = ctx.bounds(SMALL_COUNTERMODEL);
    let mut rows = Vec::new();
    let mut ok = true;
    for text in ["B p -> p", "~[]p -> []~[]p"] {
        let f = parse(text).unwrap();
        let v = decide_bounded_validity(&f, Semantics::Strong, ScenarioClass::All, &b).unwrap();
        let replayed = v.witness().is_some_and(|w| !w.model.eval(&w.scenario, &f, w.semantics).unwrap());
        ok &= replayed;
        rows.push(json!({"formula": text, "verdict": v.to_json(), "replays_false": replayed}));
    }
    Outcome::new(ok, format!("both countermodels found within {SMALL_COUNTERMODEL} points and replayed: {ok}"), Value::Array(rows))
}

fn relational_transfer(_: &Ctx) -> Outcome {
    let pool = PoolSpec::belief_only().generate();
    let (mut frames, mut checks, mut failures) = (0usize, 0u64, 0u64);
    for n in 1..=MAX_FRAME_POINTS {
        for frame in enumerate_belief_frames(n).unwrap() {
            frames += 1;
            for bits in 0u64..1 << n {
                let m = RelationalModel::new(frame.clone(), BTreeMap::from([("p".to_string(), PointSet::from_bits(bits))])).unwrap();
                for f in &pool {
                    checks += 1;
                    failures += u64::from(!m.check_transfer(f).unwrap().holds);
                }
            }
        }
    }
    Outcome::new(
        failures == 0 && pool.len() == 100,
        format!("{failures} disagreements over {checks} (model, formula) pairs from {frames} frames"),
        json!({"frames": frames, "checks": checks, "failures": failures}),
    )
}

/// Single-line mutations: negated formula, renamed proposition, and every
/// alternative justification the line could plausibly claim.
fn mutations(logic: &Logic, proof: &Proof, k: usize) -> Vec<ProofLine> {
    let line = &proof.lines[k];
    let n = k + 1;
    let mut out = vec![
        ProofLine::new(line.formula.clone().not(), line.justification.clone()),
        ProofLine::new(line.formula.clone().and(Formula::p("fresh")), line.justification.clone()),
        ProofLine::new(line.formula.clone(), Justification::Premise),
    ];
    for s in logic.schemes() {
        if line.justification != Justification::Axiom(s.name().to_string()) {
            out.push(ProofLine::new(line.formula.clone(), Justification::Axiom(s.name().to_string())));
        }
    }
    let alt = |j: Justification| ProofLine::new(line.formula.clone(), j);
    match &line.justification {
        Justification::Mp(i, j) => out.extend([alt(Justification::Mp(*j, *i)), alt(Justification::Mp(n, *j))]),
        Justification::Nec(m, i) => {
            out.push(alt(Justification::Nec(*m, n)));
            for other in [tel_core::syntax::Modality::Know, tel_core::syntax::Modality::Box, tel_core::syntax::Modality::Bel] {
                if other != *m {
                    out.push(alt(Justification::Nec(other, *i)));
                }
            }
        }
        Justification::Cpl(ids) => {
            for d in 0..ids.len() {
                let mut fewer = ids.clone();
                fewer.remove(d);
                out.push(alt(Justification::Cpl(fewer)));
            }
        }
        Justification::Axiom(_) => out.push(alt(Justification::Cpl((1..n).collect()))),
        Justification::Premise => {}
    }
    out
}

fn proof_fixtures(_: &Ctx) -> Outcome {
    let p = Formula::p("p");
    let mut rows = Vec::new();
    let mut ok = true;
    for f in builtin_fixtures() {
        let logic = builtin_logics().get(f.logic).unwrap().clone();
        let proof = (f.build)(&p);
        let accepted = check_proof(&logic, &proof).is_ok();
        let (mut tried, mut slipped) = (0usize, 0usize);
        for k in 0..proof.len() {
            for m in mutations(&logic, &proof, k) {
                let mut mutated = proof.clone();
                mutated.lines[k] = m;
                tried += 1;
                slipped += usize::from(check_proof(&logic, &mutated).is_ok());
            }
        }
        ok &= accepted && slipped == 0;
        rows.push(json!({"fixture": f.name, "lines": proof.len(), "accepted": accepted, "mutations": tried, "accepted_mutations": slipped}));
    }
    let strong = &rows[0];
    Outcome::new(ok, format!("{} fixtures checked, all mutations rejected: {ok} (strong belief: {} lines)", rows.len(), strong["lines"]), Value::Array(rows))
}

type Criterion = (u32, &'static str, fn(&Ctx) -> Outcome);

const CRITERIA: &[Criterion] = &[
    (1, "topology laws", topology_laws),
    (2, "almost-inclusion via closure of interior", almost_inclusion),
    (3, "strong-semantics soundness", strong_soundness),
    (4, "e-d soundness", ed_soundness),
    (5, "almost-everywhere soundness", ae_soundness),
    (6, "V = U agrees with strong semantics", equal_doxastic_range),
    (7, "alpha translation preserves almost-everywhere truth", alpha_translation),
    (8, "Moore sentence pair", moore_pair),
    (9, "negative fixtures", negative_fixtures),
    (10, "relational to topological transfer", relational_transfer),
    (11, "proof fixtures and mutations", proof_fixtures),
];

fn run_all(ctx: &Ctx, print: bool) -> (BTreeMap<u32, bool>, String) {
    let mut status = BTreeMap::new();
    let mut reports = serde_json::Map::new();
    for (id, name, run) in CRITERIA {
        let start = Instant::now();
        let outcome = run(ctx);
        if print {
            print_line(*id, name, outcome.passed, &outcome.summary, start.elapsed().as_secs_f64());
        }
        status.insert(*id, outcome.passed);
        reports.insert(format!("{id:02}"), json!({"passed": outcome.passed, "report": outcome.report}));
    }
    (status, serde_json::to_string(&Value::Object(reports)).unwrap())
}

fn print_line(id: u32, name: &str, passed: bool, summary: &str, secs: f64) {
    let mark = match (passed, EXPECTED_FAILURES.iter().find(|(e, _)| *e == id)) {
        (true, _) => "PASS".to_string(),
        (false, Some((_, why))) => format!("FAIL (expected: {why})"),
        (false, None) => "FAIL".to_string(),
    };
    println!("criterion {id:>2} {mark}: {name}: {summary} [{secs:.1}s]");
}

fn main() -> ExitCode {
    let pool = PoolSpec::standard().generate();
    let first = Ctx { jobs: 1, pool: pool.clone() };
    let (mut status, report_a) = run_all(&first, true);

    let start = Instant::now();
    let workers = std::thread::available_parallelism().map_or(2, |n| n.get().max(2));
    let second = Ctx { jobs: workers, pool: PoolSpec::standard().generate() };
    let (_, report_b) = run_all(&second, false);
    let identical = report_a == report_b && pool == second.pool;
    print_line(12, "determinism", identical, &format!("second run with {workers} workers byte-identical: {identical}"), start.elapsed().as_secs_f64());
    status.insert(12, identical);

    let failed: Vec<u32> = status.iter().filter(|(_, ok)| !**ok).map(|(id, _)| *id).collect();
    let expected: Vec<u32> = EXPECTED_FAILURES.iter().map(|(id, _)| *id).collect();
    println!("{} of {} criteria passed", status.len() - failed.len(), status.len());
    if failed == expected {
        ExitCode::SUCCESS
    } else {
        println!("unexpected outcome: failing {failed:?}, expected {expected:?}");
        ExitCode::FAILURE
    }
}
