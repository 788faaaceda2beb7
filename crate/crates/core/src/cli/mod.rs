//! Batch front-end. Machine-readable `key=value` lines go to stdout, prose
//! to stderr. Exit codes: 0 pass, 1 a check failed (with a witness), 2 bad
//! input, I/O failure or exhausted budget.

mod spec;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use spec::{FamilyClause, FragmentationClause, SpecFile, SubmeasureClause};

use crate::algebra::{
    max_disjoint_packing, upward_closure, Algebra, Element, Node, NodeSet, PackingOutcome,
};
use crate::budget::{Budget, DEFAULT_STEPS};
use crate::construction::{construct_submeasure_with, verify_construction};
use crate::error::{Error, Result};
use crate::fragmentation::{Fragmentation, GradedOutcome};
use crate::ideal::{
    concentration_witness, diagonal_select, AntichainStream, CertifiedSequence, ChoiceFunctions,
    ConcentrationVerdict, Envelope,
};
use crate::kelley::{intersection_number_with, measure_from_fragmentation, sequence_ratio};
use crate::par::{self, Exec};
use crate::rational::{self, Rational};
use crate::submeasure::{
    check_axioms_with, is_exhaustive_on, uniform_exhaustivity_bound, CheckMode,
    ExhaustivityOutcome, Submeasure, ValueTable, MAX_EXHAUSTIVE_ATOMS,
};

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Parser)]
#[command(
    name = "submeasure",
    version,
    about = "Exact submeasure, fragmentation and ideal checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Spec file describing the algebra, submeasure and fragmentation.
    #[arg(long, global = true)]
    pub spec: Option<PathBuf>,
    /// Output file for tables and certificates.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Number of terms, streams or antichains to examine
    #[arg(long, global = true)]
    pub horizon: Option<usize>,
    /// Step limit for the exact searches
    #[arg(long = "budget-steps", global = true)]
    pub budget_steps: Option<u64>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads for the parallel scans; 1 runs them sequentially.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Check normalization, monotonicity, subadditivity and positivity
    CheckAxioms {
        /// Sample pairs even when an exhaustive scan is possible.
        #[arg(long)]
        sampled: bool,
    },
    /// Build the submeasure of a graded fragmentation and write its table
    Construct,
    /// Look for a grading witness at every level
    CheckGraded,
    /// Largest antichain in each level
    SigmaCc,
    /// Least k with U_k joined with U_k inside U_n
    GradingIndices,
    /// Construct, then verify axioms, positivity and level bounds
    Roundtrip,
    /// Intersection number of a family, or the measure of a fragmentation
    Kelley,
    /// Maximum disjoint packing of the family
    Pack,
    /// Diagonal selection over seeded random null streams
    Diagonal,
    /// Least-value selection from a sequence of antichains
    Concentrate,
    /// Where an antichain stream drops below eps for good
    Exhaustivity,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::CheckAxioms { .. } => "check-axioms",
            Command::Construct => "construct",
            Command::CheckGraded => "check-graded",
            Command::SigmaCc => "sigma-cc",
            Command::GradingIndices => "grading-indices",
            Command::Roundtrip => "roundtrip",
            Command::Kelley => "kelley",
            Command::Pack => "pack",
            Command::Diagonal => "diagonal",
            Command::Concentrate => "concentrate",
            Command::Exhaustivity => "exhaustivity",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Default)]
struct Report {
    code: i32,
    out: String,
    err: String,
}

impl Report {
    fn kv(&mut self, line: impl AsRef<str>) {
        self.out.push_str(line.as_ref());
        self.out.push('\n');
    }

    fn say(&mut self, line: impl AsRef<str>) {
        self.err.push_str(line.as_ref());
        self.err.push('\n');
    }

    fn fail(&mut self) {
        self.code = 1;
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run_cli(&cli),
        Err(e) => Outcome {
            code: if e.use_stderr() { 2 } else { 0 },
            stdout: if e.use_stderr() {
                String::new()
            } else {
                e.to_string()
            },
            stderr: if e.use_stderr() {
                e.to_string()
            } else {
                String::new()
            },
        },
    }
}

pub fn run_cli(cli: &Cli) -> Outcome {
    let exec = if cli.jobs == Some(1) {
        Exec::Sequential
    } else {
        Exec::default()
    };
    let mut report = Report::default();
    let result = par::with_jobs(cli.jobs, || dispatch(cli, exec, &mut report));
    if let Err(e) = result {
        report.code = 2;
        report.kv(format!("error={}", error_tag(&e)));
        report.say(format!("error: {e}"));
    }
    Outcome {
        code: report.code,
        stdout: report.out,
        stderr: report.err,
    }
}

fn error_tag(e: &Error) -> &'static str {
    match e {
        Error::BudgetExhausted(_) => "budget-exhausted",
        Error::Io(_) => "io",
        Error::Parse { .. } => "parse",
        Error::MixedBackend | Error::Unsupported(_) => "unsupported",
        _ => "input",
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
    spec: SpecFile,
    budget: Budget,
    exec: Exec,
}

impl Ctx<'_> {
    fn horizon(&self, default: usize) -> usize {
        self.cli.horizon.or(self.spec.horizon).unwrap_or(default)
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.cli.seed)
    }
}

fn dispatch(cli: &Cli, exec: Exec, r: &mut Report) -> Result<()> {
    let path = cli
        .spec
        .as_ref()
        .ok_or_else(|| Error::input("--spec is required"))?;
    let spec = SpecFile::load(path)?;
    let steps = cli.budget_steps.or(spec.budget).unwrap_or(DEFAULT_STEPS);
    let mut ctx = Ctx {
        cli,
        budget: Budget::new(steps),
        spec,
        exec,
    };
    r.kv(format!("command={}", cli.command.name()));
    r.kv(format!("algebra={}", ctx.spec.algebra));
    r.kv(format!("seed={}", cli.seed));
    match cli.command {
        Command::CheckAxioms { sampled } => check_axioms_cmd(&mut ctx, sampled, r),
        Command::Construct => construct_cmd(&mut ctx, r),
        Command::CheckGraded => check_graded_cmd(&mut ctx, r),
        Command::SigmaCc => sigma_cc_cmd(&mut ctx, r),
        Command::GradingIndices => grading_indices_cmd(&mut ctx, r),
        Command::Roundtrip => roundtrip_cmd(&mut ctx, r),
        Command::Kelley => kelley_cmd(&mut ctx, r),
        Command::Pack => pack_cmd(&mut ctx, r),
        Command::Diagonal => diagonal_cmd(&mut ctx, r),
        Command::Concentrate => concentrate_cmd(&mut ctx, r),
        Command::Exhaustivity => exhaustivity_cmd(&mut ctx, r),
    }
}

fn q(x: &Rational) -> String {
    rational::format(x)
}

fn write_out(ctx: &Ctx<'_>, text: &str, r: &mut Report) -> Result<()> {
    if let Some(path) = &ctx.cli.out {
        std::fs::write(path, text)?;
        r.kv(format!("out={}", path.display()));
    }
    Ok(())
}

fn check_axioms_cmd(ctx: &mut Ctx<'_>, sampled: bool, r: &mut Report) -> Result<()> {
    let m = ctx.spec.submeasure(&mut ctx.budget)?;
    r.kv(format!("kind={}", m.kind().tag()));
    let exhaustive_ok =
        matches!(m.algebra(), Algebra::Finite { atoms } if atoms <= MAX_EXHAUSTIVE_ATOMS);
    let mode = if exhaustive_ok && !sampled {
        CheckMode::Exhaustive
    } else {
        CheckMode::Sampled {
            count: ctx.horizon(100_000) as u64,
            seed: ctx.cli.seed,
        }
    };
    let report = check_axioms_with(&m, mode, ctx.exec)?;
    r.kv(match mode {
        CheckMode::Exhaustive => "mode=exhaustive".to_string(),
        CheckMode::Sampled { count, .. } => format!("mode=sampled samples={count}"),
    });
    r.kv(format!("monotone_pairs={}", report.monotone_pairs));
    r.kv(format!("subadditive_pairs={}", report.subadditive_pairs));
    match &report.violation {
        None => {
            r.kv("axioms=pass");
            r.say("all submeasure axioms hold");
        }
        Some(v) => {
            r.kv("axioms=fail");
            r.kv(v.to_string());
            r.say("submeasure axioms fail; the violation line is a re-checkable counterexample");
            r.fail();
        }
    }
    Ok(())
}

/// Reports the first grading failure, if any.
fn require_graded(f: &Fragmentation, r: &mut Report) -> Result<bool> {
    let (n, outcome) = f.check_graded_all()?;
    match outcome {
        GradedOutcome::Graded => {
            r.kv("graded=true");
            Ok(true)
        }
        GradedOutcome::Witness { a, b } => {
            r.kv(format!(
                "graded=false level={n} witness_a={a} witness_b={b}"
            ));
            r.say(format!(
                "{a} ∨ {b} lies in C_{n} but neither part lies in C_{}",
                n + 1
            ));
            r.fail();
            Ok(false)
        }
    }
}

fn finite_fragmentation(ctx: &mut Ctx<'_>) -> Result<Fragmentation> {
    let atoms = ctx.spec.algebra.require_finite()?;
    if atoms < 2 {
        return Err(Error::input("the algebra must have at least 2 atoms"));
    }
    ctx.spec.fragmentation(&mut ctx.budget)
}

fn construct_cmd(ctx: &mut Ctx<'_>, r: &mut Report) -> Result<()> {
    let f = finite_fragmentation(ctx)?;
    r.kv(format!("levels={}", f.require_levels()?));
    if !require_graded(&f, r)? {
        return Ok(());
    }
    let m = construct_submeasure_with(&f, &mut ctx.budget, ctx.exec)?;
    let source = ctx.spec.fragmentation.as_ref().map(|c| match c {
        FragmentationClause::Harmonic => "harmonic".to_string(),
        FragmentationClause::Dyadic => "dyadic".to_string(),
        FragmentationClause::File(p) => p.display().to_string(),
    });
    let text = m.to_table_file(source)?.render();
    if ctx.cli.out.is_some() {
        write_out(ctx, &text, r)?;
    } else {
        r.out.push_str(&text);
    }
    r.say("constructed submeasure table written");
    Ok(())
}

fn check_graded_cmd(ctx: &mut Ctx<'_>, r: &mut Report) -> Result<()> {
    let f = ctx.spec.fragmentation(&mut ctx.budget)?;
    if f.algebra() == Algebra::Cantor {
        let levels = ctx.horizon(6);
        r.kv(format!("mode=sampled levels={levels}"));
        for n in 1..=levels {
            if let GradedOutcome::Witness { a, b } = f.check_graded_sampled(n, 500, ctx.cli.seed)? {
                r.kv(format!(
                    "graded=false level={n} witness_a={a} witness_b={b}"
                ));
                r.fail();
                return Ok(());
            }
        }
        r.kv("graded=true");
        r.say("no grading failure found among the sampled splits");
        return Ok(());
    }
    r.kv(format!("levels={}", f.require_levels()?));
    require_graded(&f, r)?;
    Ok(())
}

fn sigma_cc_cmd(ctx: &mut Ctx<'_>, r: &mut Report) -> Result<()> {
    let f = ctx.spec.fragmentation(&mut ctx.budget)?;
    let l = f.require_levels()?;
    for n in 1..=l {
        match max_disjoint_packing(f.level(n)?, &mut ctx.budget)? {
            PackingOutcome::Exact(p) => {
                let w: Vec<String> = p.witness.iter().map(Element::to_string).collect();
                r.kv(format!(
                    "level={n} bound={} witness={}",
                    p.size,
                    w.join(",")
                ));
            }
            PackingOutcome::Unknown(p) => {
                r.kv(format!("level={n} lower_bound={}", p.size));
                return Err(Error::BudgetExhausted(ctx.budget.limit()));
            }
        }
    }
    r.say("every level has a finite largest antichain");
    Ok(())
}

fn grading_indices_cmd(ctx: &mut Ctx<'_>, r: &mut Report) -> Result<()> {
    let f = ctx.spec.fragmentation(&mut ctx.budget)?;
    let ks = f.find_grading_indices_with(ctx.exec)?;
    for (n, k) in &ks {
        match k {
            Some(k) => r.kv(format!("k({n})={k}")),
            None => r.kv(format!("k({n})=none")),
        }
    }
    match f.graded_subfragmentation() {
        Ok((_, idx)) => {
            let s: Vec<String> = idx.iter().map(usize::to_string).collect();
            r.kv(format!("subchain={}", s.join(",")));
        }
        Err(e) => {
            r.kv("subchain=none");
            r.say(format!("no graded subchain: {e}"));
            r.fail();
        }
    }
    Ok(())
}

fn roundtrip_cmd(ctx: &mut Ctx<'_>, r: &mut Report) -> Result<()> {
    let f = finite_fragmentation(ctx)?;
    r.kv(format!("levels={}", f.require_levels()?));
    if !require_graded(&f, r)? {
        return Ok(());
    }
    let m = construct_submeasure_with(&f, &mut ctx.budget, ctx.exec)?;
    let report = verify_construction(&f, &m, &mut ctx.budget)?;
    for row in &report.sandwich {
        r.kv(format!(
            "elem={} n0={} value={} lower={} upper={} holds={}",
            row.element,
            row.least_level,
            q(&row.value),
            q(&row.lower()),
            q(&row.upper()),
            row.holds
        ));
    }
    for (n, k) in &report.level_packings {
        r.kv(format!("packing level={n} size={k}"));
    }
    r.kv(format!(
        "axioms={}",
        if report.axioms.passed() {
            "pass"
        } else {
            "fail"
        }
    ));
    if let Some(v) = &report.axioms.violation {
        r.kv(v.to_string());
    }
    r.kv(format!("strictly_positive={}", report.strictly_positive));
    let sandwich_ok = report.sandwich.iter().all(|row| row.holds);
    r.kv(format!(
        "sandwich={}",
        if sandwich_ok { "pass" } else { "fail" }
    ));
    if report.passed() {
        r.say("construction verified: axioms, strict positivity and sandwich bounds hold");
    } else {
        r.fail();
    }
    Ok(())
}

fn kelley_cmd(ctx: &mut Ctx<'_>, r: &mut Report) -> Result<()> {
    let alg = ctx.spec.algebra;
    if ctx.spec.family.is_none() {
        let f = ctx.spec.fragmentation(&mut ctx.budget)?;
        let out = measure_from_fragmentation(&f, &mut ctx.budget)?;
        let mut cert = String::new();
        for (i, w) in out.weights.iter().enumerate() {
            writeln!(cert, "mu atom={i} value={}", q(w)).unwrap();
        }
        for l in &out.levels {
            r.kv(format!(
                "level={} intersection={} floor={}",
                l.level,
                q(&l.intersection),
                q(&l.floor)
            ));
        }
        r.out.push_str(&cert);
        let positive = out.measure.positivity_witness()?.is_none();
        r.kv(format!("strictly_positive={positive}"));
        write_out(ctx, &cert, r)?;
        if !positive {
            r.fail();
        }
        return Ok(());
    }
    let family = ctx.spec.family()?;
    let res = intersection_number_with(alg, &family, &mut ctx.budget)?;
    r.kv(format!("family_size={}", family.len()));
    r.kv(format!("kelley_value={}", q(&res.value)));
    let cert = res.render_certificate();
    r.out.push_str(&cert);
    if let Some(seq) = &res.dual_sequence {
        r.kv(format!(
            "dual_length={} dual_ratio={}",
            seq.len(),
            q(&sequence_ratio(alg, seq)?)
        ));
    }
    let trials = ctx.horizon(1000);
    let mut rng = ctx.rng();
    let mut violation = None;
    for _ in 0..trials {
        let len = rng.gen_range(1..=8);
        let seq: Vec<Element> = (0..len)
            .map(|_| family.choose(&mut rng).expect("nonempty family").clone())
            .collect();
        if sequence_ratio(alg, &seq)? < res.value {
            violation = Some(seq);
            break;
        }
    }
    match violation {
        None => r.kv(format!(
            "weak_duality_checked={trials} weak_duality_violations=0"
        )),
        Some(seq) => {
            let s: Vec<String> = seq.iter().map(Element::to_string).collect();
            r.kv(format!("weak_duality_violation={}", s.join(",")));
            r.fail();
        }
    }
    write_out(ctx, &cert, r)?;
    Ok(())
}

fn pack_cmd(ctx: &mut Ctx<'_>, r: &mut Report) -> Result<()> {
    let family = upward_closure(ctx.spec.algebra, &ctx.spec.family()?)?;
    let outcome = max_disjoint_packing(&family, &mut ctx.budget)?;
    let p = outcome.packing();
    let w: Vec<String> = p.witness.iter().map(Element::to_string).collect();
    r.kv(format!(
        "packing={} exact={} witness={}",
        p.size,
        matches!(outcome, PackingOutcome::Exact(_)),
        w.join(",")
    ));
    if let PackingOutcome::Unknown(_) = outcome {
        return Err(Error::BudgetExhausted(ctx.budget.limit()));
    }
    Ok(())
}

/// Random null streams: a random element shrunk one atom at a time down to 0,
/// certified by its own (nonincreasing) values.
fn random_streams(
    m: &Submeasure,
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<CertifiedSequence>> {
    let alg = m.algebra();
    let atoms = alg.require_finite()?;
    let table = ValueTable::of(m)?;
    (0..count)
        .map(|_| {
            let mut order: Vec<u32> = (0..u32::from(atoms)).collect();
            order.shuffle(rng);
            let keep = rng.gen_range(1..=order.len());
            let mut cur: u32 = order[..keep].iter().map(|i| 1u32 << i).sum();
            let mut terms = Vec::with_capacity(keep + 1);
            let mut values = Vec::with_capacity(keep + 1);
            for &i in &order[..keep] {
                terms.push(Element::Finite(cur));
                values.push(table.get(cur).clone());
                cur &= !(1 << i);
            }
            values.push(table.get(0).clone());
            Ok(CertifiedSequence::from_terms(
                alg,
                0,
                Envelope::Table(values),
                terms,
            ))
        })
        .collect()
}

fn diagonal_cmd(ctx: &mut Ctx<'_>, r: &mut Report) -> Result<()> {
    let m = ctx.spec.submeasure(&mut ctx.budget)?;
    let count = ctx.horizon(100);
    let streams = random_streams(&m, count, &mut ctx.rng())?;
    let f = ChoiceFunctions::from_submeasure(&m);
    let d = diagonal_select(&f, &streams)?;
    let mut failed = None;
    for k in 1..=count {
        let (e, v) = d.checked_term(&m, k)?;
        r.kv(format!("k={k} elem={e} value={}", q(&v)));
        if v >= rational::ratio(1, k as i64) && failed.is_none() {
            failed = Some(k);
        }
    }
    match failed {
        None => {
            r.kv(format!("diagonal=pass streams={count}"));
            r.say("every diagonal term k is below 1/k");
        }
        Some(k) => {
            r.kv(format!("diagonal=fail k={k}"));
            r.fail();
        }
    }
    Ok(())
}

fn default_antichains(alg: Algebra, horizon: usize) -> Result<Vec<(usize, Vec<Element>)>> {
    Ok(match alg {
        Algebra::Finite { atoms } => (1..=horizon.min(usize::from(atoms)))
            .map(|n| (n, (0..n).map(|i| Element::Finite(1 << i)).collect()))
            .collect(),
        Algebra::Cantor => (1..=horizon.min(1 << 12))
            .map(|n| {
                let d = (usize::BITS - (n - 1).leading_zeros()) as u8;
                let nodes = (0..1u64 << d)
                    .map(|p| {
                        Element::Cantor(NodeSet::single(
                            Node::new(d, p).expect("depth within range"),
                        ))
                    })
                    .collect();
                (n, nodes)
            })
            .collect(),
    })
}

fn concentrate_cmd(ctx: &mut Ctx<'_>, r: &mut Report) -> Result<()> {
    let m = ctx.spec.submeasure(&mut ctx.budget)?;
    let horizon = ctx.horizon(32);
    let (antichains, declared) = match ctx.spec.antichain_script()? {
        Some(script) => {
            let env = script.declared_envelope();
            (script.antichains, env)
        }
        None => (default_antichains(m.algebra(), horizon)?, None),
    };
    let report = concentration_witness(&m, antichains, declared, horizon)?;
    for s in &report.selections {
        r.kv(format!(
            "select n={} elem={} value={}",
            s.index,
            s.element,
            q(&s.value)
        ));
    }
    match &report.verdict {
        ConcentrationVerdict::Certified(env) | ConcentrationVerdict::Empirical(env) => {
            r.kv(format!("verdict={} envelope={env}", report.verdict.label()));
        }
        ConcentrationVerdict::NotConcentrated => {
            r.kv("verdict=not-concentrated");
            r.say(format!("not concentrated up to horizon {horizon}"));
            r.fail();
        }
    }
    Ok(())
}

fn exhaustivity_cmd(ctx: &mut Ctx<'_>, r: &mut Report) -> Result<()> {
    let m = ctx.spec.submeasure(&mut ctx.budget)?;
    let eps = ctx
        .spec
        .eps
        .clone()
        .unwrap_or_else(|| rational::ratio(1, 8));
    let horizon = ctx.horizon(64);
    let mut stream = match m.algebra() {
        Algebra::Cantor => AntichainStream::cantor_depth_nodes(),
        alg => AntichainStream::atoms(alg)?,
    };
    r.kv(format!("eps={}", q(&eps)));
    match is_exhaustive_on(&m, &mut stream, &eps, horizon)? {
        ExhaustivityOutcome::Index { index, certified } => {
            r.kv(format!("index={index} certified={certified}"));
        }
        ExhaustivityOutcome::HorizonExhausted {
            trailing_max,
            sampled,
        } => {
            r.kv(format!(
                "horizon_exhausted=true sampled={sampled} trailing_max={}",
                q(&trailing_max)
            ));
            r.fail();
        }
    }
    if m.algebra() != Algebra::Cantor {
        let k = uniform_exhaustivity_bound(&m, &eps, &mut ctx.budget)?;
        r.kv(format!("uniform_bound={k}"));
    }
    Ok(())
}
