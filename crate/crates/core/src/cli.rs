//! The `hardylab` command line: one subcommand per scenario kind plus a
//! scripted demo. Output is aligned tables, or JSON with `--json`; every
//! number is rounded to 12 significant digits.
//!
//! Exit codes are [`EXIT_OK`], [`EXIT_DOMAIN`] (the computation was rejected,
//! e.g. conditioning on a zero-probability event) and [`EXIT_USAGE`] (bad
//! arguments or scenario file).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::abl::{
    abl_probability, assign_elements, audit_product_rule, hardy_ensemble, hardy_observables,
    ProjectorFamily,
};
use crate::causal::{
    hardy_assignment, Criterion, HardyGeometry, LorentzBoost, NonlocalKind, SpacetimeEvent,
};
use crate::error::Error;
use crate::hardy::{Experiment, ExperimentStage, Observable};
use crate::prodrule::{ProductRuleFunction, PRODUCT_RULE_TOLERANCE};
use crate::scenario::{
    run_abl, run_causal, run_hardy, run_prodrule, AblReport, AblScenario, CausalReport,
    CausalScenario, HardyReport, HardyScenario, ProdruleAction, ProdruleReport, ProdruleScenario,
    ScenarioFile, ScenarioKind,
};
use crate::statespace::{ModeLabel, STATE_TOLERANCE};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable that overrides `--seed`.
pub const SEED_ENV: &str = "HARDYLAB_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "hardylab",
    version,
    about = "Hardy's paradox, pre/post-selection and product-rule functions"
)]
struct Cli {
    /// Print JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized checks. HARDYLAB_SEED takes precedence.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Scenario file to run, or `default` for the built-in one.
    #[arg(long, global = true, value_name = "PATH")]
    scenario: Option<String>,
    /// Amplitude cutoff for `hardy` (default 1e-12), relative product-rule
    /// tolerance for `prodrule` (default 1e-9).
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Print the fully resolved scenario file instead of running it.
    #[arg(long, global = true)]
    emit_scenario: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// State amplitudes and outcome probabilities at one stage.
    Hardy(HardyArgs),
    /// ABL probabilities for a pre- and post-selected ensemble.
    Abl(AblArgs),
    /// Event orderings, light-cone regions and element-of-reality verdicts.
    Causal(CausalArgs),
    /// Product-rule functions on a maximal commuting set.
    Prodrule(ProdruleArgs),
    /// Scripted walkthroughs.
    Demo {
        #[command(subcommand)]
        which: DemoKind,
    },
}

#[derive(Debug, Args)]
struct SetupArgs {
    /// Remove the positron's second beam splitter.
    #[arg(long)]
    no_bs2_plus: bool,
    /// Remove the electron's second beam splitter.
    #[arg(long)]
    no_bs2_minus: bool,
}

#[derive(Debug, Args)]
struct HardyArgs {
    /// initial, after_p, after_bs2_minus, after_bs2_plus or after_both.
    #[arg(long)]
    stage: Option<ExperimentStage>,
    /// Outcome to report: a path product such as `D+D-` or a label set
    /// such as `d+d-,c+c-`.
    #[arg(long)]
    outcome: Option<Observable>,
    /// Condition the outcome on this event.
    #[arg(long)]
    condition: Option<Observable>,
    #[command(flatten)]
    setup: SetupArgs,
}

#[derive(Debug, Args)]
struct AblArgs {
    /// Stage of the pre-selected state and of the intermediate observables.
    #[arg(long)]
    pre_stage: Option<ExperimentStage>,
    /// Final label post-selected on, e.g. `d+d-`.
    #[arg(long)]
    post: Option<ModeLabel>,
    /// Intermediate observable (repeatable), e.g. `U+`.
    #[arg(long = "observable")]
    observables: Vec<Observable>,
    /// Attribute values to unperformed measurements and audit the product rule.
    #[arg(long)]
    counterfactual: bool,
    #[command(flatten)]
    setup: SetupArgs,
}

#[derive(Debug, Args)]
struct CausalArgs {
    /// Boost velocity of an observing frame (repeatable).
    #[arg(long = "boost", allow_negative_numbers = true)]
    boosts: Vec<f64>,
    /// Combination of the boxes' forward-cone exteriors to probe.
    #[arg(long)]
    region: Option<NonlocalKind>,
    /// Rest-frame event `t,x` to test (repeatable).
    #[arg(long = "query", allow_hyphen_values = true)]
    queries: Vec<SpacetimeEvent>,
}

#[derive(Debug, Args)]
struct ProdruleArgs {
    #[command(subcommand)]
    action: Option<ProdruleCommand>,
}

#[derive(Debug, Args)]
struct FunctionArg {
    /// Function as inline JSON or a path to a JSON file.
    #[arg(long)]
    function: Option<String>,
}

#[derive(Debug, Subcommand)]
enum ProdruleCommand {
    /// List every 0/1 product-rule assignment on the projector lattice.
    Enumerate {
        #[arg(long)]
        n: Option<usize>,
    },
    /// Check that mixed assignments are principal filters of one projector.
    Uniqueness {
        #[arg(long)]
        n: Option<usize>,
    },
    /// Seeded random product-rule trials.
    Check {
        #[command(flatten)]
        function: FunctionArg,
        /// Number of random spectrum pairs to test (default 1000)
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Which case a function falls in on rank-one projectors.
    Classify {
        #[command(flatten)]
        function: FunctionArg,
    },
    /// The chain of identities fixing a constant-one or single-index function.
    Trace {
        #[command(flatten)]
        function: FunctionArg,
    },
}

#[derive(Debug, Subcommand)]
enum DemoKind {
    /// States, coincidence rate, certainties, ABL triple and frame verdicts.
    HardyParadox,
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidScenario(msg) => Failure::Usage(msg),
            other => Failure::Domain(other),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Runs the command line with `HARDYLAB_SEED` read from the environment.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_env(args, std::env::var(SEED_ENV).ok(), out, err)
}

/// Like [`run`], with the seed override passed in explicitly.
pub fn run_with_env<I, T>(
    args: I,
    env_seed: Option<String>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(&cli, env_seed) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DOMAIN
        }
    }
}

fn execute(cli: &Cli, env_seed: Option<String>) -> Outcome<String> {
    let loaded = match cli.scenario.as_deref() {
        None | Some("default") => None,
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))?;
            Some(ScenarioFile::from_json(&text)?)
        }
    };
    let env_seed = env_seed
        .map(|s| {
            s.trim().parse::<u64>().map_err(|_| {
                Failure::Usage(format!("{SEED_ENV} must be an unsigned integer, got `{s}`"))
            })
        })
        .transpose()?;
    let seed = env_seed.or(cli.seed);
    if let Some(t) = cli.tolerance {
        if !(t.is_finite() && t > 0.0) {
            return Err(Failure::Usage(format!(
                "tolerance must be positive, got {t}"
            )));
        }
    }

    let scenario = match &cli.command {
        Command::Hardy(a) => ScenarioFile::Hardy(hardy_scenario(
            a,
            expect_kind(loaded, ScenarioKind::Hardy)?,
        )?),
        Command::Abl(a) => {
            ScenarioFile::Abl(abl_scenario(a, expect_kind(loaded, ScenarioKind::Abl)?))
        }
        Command::Causal(a) => ScenarioFile::Causal(causal_scenario(
            a,
            expect_kind(loaded, ScenarioKind::Causal)?,
        )),
        Command::Prodrule(a) => ScenarioFile::Prodrule(prodrule_scenario(
            a,
            expect_kind(loaded, ScenarioKind::Prodrule)?,
            seed,
        )?),
        Command::Demo {
            which: DemoKind::HardyParadox,
        } => {
            if cli.emit_scenario {
                return Err(Failure::Usage("the demo has no scenario file".into()));
            }
            return render(cli.json, &demo()?, render_demo);
        }
    };
    if cli.emit_scenario {
        return Ok(scenario.to_json() + "\n");
    }
    match &scenario {
        ScenarioFile::Hardy(s) => render(
            cli.json,
            &run_hardy(s, cli.tolerance.unwrap_or(STATE_TOLERANCE))?,
            render_hardy,
        ),
        ScenarioFile::Abl(s) => render(cli.json, &run_abl(s)?, render_abl),
        ScenarioFile::Causal(s) => render(cli.json, &run_causal(s)?, render_causal),
        ScenarioFile::Prodrule(s) => render(
            cli.json,
            &run_prodrule(s, cli.tolerance.unwrap_or(PRODUCT_RULE_TOLERANCE))?,
            render_prodrule,
        ),
    }
}

fn expect_kind(loaded: Option<ScenarioFile>, kind: ScenarioKind) -> Outcome<Option<ScenarioFile>> {
    match loaded {
        Some(f) if f.kind() != kind => Err(Failure::Usage(format!(
            "scenario file is of kind `{}`, expected `{kind}`",
            f.kind()
        ))),
        other => Ok(other),
    }
}

fn apply_setup(args: &SetupArgs, plus: &mut bool, minus: &mut bool) {
    if args.no_bs2_plus {
        *plus = false;
    }
    if args.no_bs2_minus {
        *minus = false;
    }
}

fn hardy_scenario(a: &HardyArgs, loaded: Option<ScenarioFile>) -> Outcome<HardyScenario> {
    let mut s = match loaded {
        Some(ScenarioFile::Hardy(s)) => s,
        _ => HardyScenario::default(),
    };
    apply_setup(&a.setup, &mut s.bs2_plus_present, &mut s.bs2_minus_present);
    if let Some(stage) = a.stage {
        s.stage = stage;
    }
    let experiment = Experiment::new(s.setup());
    let resolve = |o: &Observable| -> Outcome<_> {
        let p = experiment.projector(s.stage, o)?;
        Ok(p.labels()
            .expect("observables are diagonal")
            .into_iter()
            .cloned()
            .collect())
    };
    if let Some(o) = &a.outcome {
        s.outcome = Some(resolve(o)?);
    }
    if let Some(c) = &a.condition {
        s.condition = Some(resolve(c)?);
    }
    Ok(s)
}

fn abl_scenario(a: &AblArgs, loaded: Option<ScenarioFile>) -> AblScenario {
    let mut s = match loaded {
        Some(ScenarioFile::Abl(s)) => s,
        _ => AblScenario::default(),
    };
    apply_setup(&a.setup, &mut s.bs2_plus_present, &mut s.bs2_minus_present);
    if let Some(stage) = a.pre_stage {
        s.pre_stage = stage;
    }
    if let Some(post) = &a.post {
        s.post_outcome = post.clone();
    }
    if !a.observables.is_empty() {
        s.observables = a.observables.clone();
    }
    if a.counterfactual {
        s.counterfactual = true;
    }
    s
}

fn causal_scenario(a: &CausalArgs, loaded: Option<ScenarioFile>) -> CausalScenario {
    let mut s = match loaded {
        Some(ScenarioFile::Causal(s)) => s,
        _ => CausalScenario::default(),
    };
    if !a.boosts.is_empty() {
        s.boosts = a.boosts.clone();
    }
    if let Some(region) = a.region {
        s.region = region;
    }
    if !a.queries.is_empty() {
        s.queries = a.queries.clone();
    }
    s
}

fn parse_function(arg: &FunctionArg) -> Outcome<Option<ProductRuleFunction>> {
    let Some(raw) = arg.function.as_deref() else {
        return Ok(None);
    };
    let text = if raw.trim_start().starts_with('{') {
        raw.to_string()
    } else {
        std::fs::read_to_string(raw)
            .map_err(|e| Failure::Usage(format!("cannot read {raw}: {e}")))?
    };
    serde_json::from_str(&text)
        .map(Some)
        .map_err(|e| Failure::Usage(format!("invalid function: {e}")))
}

fn prodrule_scenario(
    a: &ProdruleArgs,
    loaded: Option<ScenarioFile>,
    seed: Option<u64>,
) -> Outcome<ProdruleScenario> {
    let loaded = match loaded {
        Some(ScenarioFile::Prodrule(s)) => Some(s),
        _ => None,
    };
    let Some(cmd) = &a.action else {
        let mut s = loaded.ok_or_else(|| {
            Failure::Usage("prodrule needs a subcommand or a scenario file".into())
        })?;
        if let Some(seed) = seed {
            s.seed = seed;
        }
        return Ok(s);
    };
    let action = match cmd {
        ProdruleCommand::Enumerate { .. } => ProdruleAction::Enumerate,
        ProdruleCommand::Uniqueness { .. } => ProdruleAction::Uniqueness,
        ProdruleCommand::Check { .. } => ProdruleAction::Check,
        ProdruleCommand::Classify { .. } => ProdruleAction::Classify,
        ProdruleCommand::Trace { .. } => ProdruleAction::Trace,
    };
    let mut s = match loaded {
        Some(s) if s.action == action => s,
        _ => ProdruleScenario::new(action),
    };
    match cmd {
        ProdruleCommand::Enumerate { n } | ProdruleCommand::Uniqueness { n } => {
            if n.is_some() {
                s.n = *n;
            }
            if s.n.is_none() {
                return Err(Failure::Usage("missing --n".into()));
            }
        }
        ProdruleCommand::Check { function, trials } => {
            if let Some(f) = parse_function(function)? {
                s.function = Some(f);
            }
            if let Some(t) = trials {
                s.trials = *t;
            }
        }
        ProdruleCommand::Classify { function } | ProdruleCommand::Trace { function } => {
            if let Some(f) = parse_function(function)? {
                s.function = Some(f);
            }
        }
    }
    if matches!(
        action,
        ProdruleAction::Check | ProdruleAction::Classify | ProdruleAction::Trace
    ) && s.function.is_none()
    {
        return Err(Failure::Usage("missing --function".into()));
    }
    if let Some(seed) = seed {
        s.seed = seed;
    }
    Ok(s)
}

/// `x` rounded to 12 significant digits, with `-0` folded into `0`.
pub fn round_significant(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    let r: f64 = format!("{x:.11e}").parse().expect("float round trip");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Table form of a number: 12 significant digits, fixed notation in a
/// readable range and exponent notation outside it.
pub fn format_number(x: f64) -> String {
    let r = round_significant(x);
    if r == 0.0 || (1e-5..1e15).contains(&r.abs()) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

fn round_json(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Number(n) if n.is_f64() => {
            let r = round_significant(n.as_f64().expect("f64"));
            if let Some(m) = serde_json::Number::from_f64(r) {
                *n = m;
            }
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(round_json),
        serde_json::Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

/// Pretty JSON of `value` with every float rounded to 12 significant digits.
pub fn to_rounded_json<T: Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("reports serialize");
    round_json(&mut v);
    serde_json::to_string_pretty(&v).expect("json") + "\n"
}

fn render<T: Serialize>(json: bool, report: &T, table: fn(&T) -> String) -> Outcome<String> {
    Ok(if json {
        to_rounded_json(report)
    } else {
        table(report)
    })
}

/// Left-aligned columns separated by two spaces.
struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new<const N: usize>(headers: [&str; N]) -> Self {
        Table {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    fn render(&self, indent: &str) -> String {
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |cells: &[String]| -> String {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
                .collect();
            format!("{indent}{}\n", padded.join("  ").trim_end())
        };
        let mut out = line(&self.headers);
        let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
        out += &line(&rule);
        for row in &self.rows {
            out += &line(row);
        }
        out
    }
}

fn label_set(labels: &std::collections::BTreeSet<ModeLabel>) -> String {
    let names: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
    format!("{{{}}}", names.join(","))
}

fn render_hardy(r: &HardyReport) -> String {
    let mut out = format!("stage {}\n\n", r.stage);
    let mut t = Table::new(["label", "re", "im", "probability"]);
    for a in &r.amplitudes {
        let p = r
            .probabilities
            .iter()
            .find(|p| p.label == a.label)
            .map_or(0.0, |p| p.probability);
        t.row(vec![
            a.label.to_string(),
            format_number(a.re),
            format_number(a.im),
            format_number(p),
        ]);
    }
    out += &t.render("");
    if let Some(o) = &r.outcome {
        out += "\n";
        match (&o.condition, &o.legs) {
            (Some(c), Some(legs)) => {
                let _ = writeln!(
                    out,
                    "P({} | {}) = {}  ({} / {})",
                    label_set(&o.labels),
                    label_set(c),
                    format_number(o.probability),
                    format_number(legs.joint),
                    format_number(legs.condition)
                );
            }
            _ => {
                let _ = writeln!(
                    out,
                    "P({}) = {}",
                    label_set(&o.labels),
                    format_number(o.probability)
                );
            }
        }
    }
    out
}

fn render_abl(r: &AblReport) -> String {
    let mut out = format!(
        "pre-selected at {}, post-selected on {}\n\n",
        r.pre_stage, r.post_outcome
    );
    let mut t = Table::new(["observable", "P(1)", "element"]);
    for p in &r.probabilities {
        let element = r
            .assignment
            .as_ref()
            .and_then(|a| a.get(&p.observable.name()))
            .map_or("-".to_string(), format_number);
        t.row(vec![
            p.observable.to_string(),
            format_number(p.probability),
            element,
        ]);
    }
    out += &t.render("");
    match &r.violations {
        None => out += "\nelements of reality not attributed (pass --counterfactual)\n",
        Some(v) if v.is_empty() => out += "\nproduct rule holds on every audited pair\n",
        Some(v) => {
            out += "\n";
            for x in v {
                let _ = writeln!(
                    out,
                    "product rule violated: f({}) f({}) = {} but f({}) = {}",
                    x.a,
                    x.b,
                    format_number(x.f_a * x.f_b),
                    x.product,
                    format_number(x.f_product)
                );
            }
        }
    }
    out
}

fn assignment_cell(a: &crate::abl::RealityAssignment, name: &str) -> String {
    a.get(name).map_or("-".to_string(), format_number)
}

fn render_causal(r: &CausalReport) -> String {
    let mut out = String::from("memberships\n");
    let mut t = Table::new(["event", "region", "inside", "outside forward cone of"]);
    for m in &r.memberships {
        t.row(vec![
            m.event.to_string(),
            m.region.to_string(),
            m.inside.to_string(),
            m.outside_forward_cone_of.join(", "),
        ]);
    }
    out += &t.render("  ");
    for o in &r.orderings {
        let _ = writeln!(
            out,
            "\norder of events for beta = {}",
            format_number(o.beta)
        );
        let mut t = Table::new(["event", "t", "x"]);
        for e in &o.events {
            t.row(vec![e.name.clone(), format_number(e.t), format_number(e.x)]);
        }
        out += &t.render("  ");
    }
    out += "\nelements of reality (- means none attributed)\n";
    let mut t = Table::new(["criterion", "beta", "U+", "U-", "U+U-"]);
    for v in &r.er_verdicts {
        t.row(vec![
            v.criterion.to_string(),
            format_number(v.beta),
            assignment_cell(&v.assignment, "U+"),
            assignment_cell(&v.assignment, "U-"),
            assignment_cell(&v.assignment, "U+U-"),
        ]);
    }
    out += &t.render("  ");
    out += "\nsame value in every frame\n";
    let mut t = Table::new(["criterion", "observable", "holds"]);
    for v in &r.li1 {
        t.row(vec![
            v.criterion.to_string(),
            v.observable.clone(),
            v.holds.map_or("-".to_string(), |h| h.to_string()),
        ]);
    }
    out += &t.render("  ");
    if let Some(aa) = &r.aharonov_albert {
        out += "\nchecked two-particle state valid at\n";
        let mut t = Table::new(["event", "valid"]);
        for v in aa {
            t.row(vec![v.event.to_string(), v.valid.to_string()]);
        }
        out += &t.render("  ");
    }
    out
}

fn render_prodrule(r: &ProdruleReport) -> String {
    let mut out = String::new();
    match r {
        ProdruleReport::Enumerate(list) => {
            let n = list.first().map_or(0, |a| a.dim());
            let _ = writeln!(out, "{} assignments for N = {n}\n", list.len());
            let mut t = Table::new(["#", "generator", "ones"]);
            for (k, a) in list.iter().enumerate() {
                let generator = match a.principal_generator() {
                    Some(m) => format!(
                        "{:?}",
                        crate::prodrule::DiagonalProjector::from_mask(n, m)
                            .expect("mask")
                            .indices()
                    ),
                    None => "none".into(),
                };
                t.row(vec![
                    (k + 1).to_string(),
                    generator,
                    a.ones().len().to_string(),
                ]);
            }
            out += &t.render("");
        }
        ProdruleReport::Uniqueness(u) => {
            let _ = writeln!(
                out,
                "N = {}: {} assignments, every mixed one is a principal filter of a rank-one projector: {}",
                u.n, u.assignments, u.holds
            );
        }
        ProdruleReport::Check(c) => {
            let _ = writeln!(
                out,
                "{} trials, seed {}, tolerance {}: {} failures, max residual {}",
                c.trials.trials,
                c.trials.seed,
                format_number(c.trials.tolerance),
                c.trials.failures,
                format_number(c.trials.max_residual)
            );
            let _ = writeln!(out, "{}", if c.passed { "passed" } else { "FAILED" });
        }
        ProdruleReport::Classify(c) => {
            let case = match c.report.case {
                crate::prodrule::ProjectorCase::AllOne => "case 1: f(P_i) = 1 for every i",
                crate::prodrule::ProjectorCase::SomeOne => "case 2: f(P_i) = 1 for some i only",
                crate::prodrule::ProjectorCase::AllZero => "case 3: f(P_i) = 0 for every i",
            };
            let _ = writeln!(out, "{case}");
            if !c.report.unit_singletons.is_empty() {
                let _ = writeln!(out, "f(P_i) = 1 for i in {:?}", c.report.unit_singletons);
            }
            if !c.report.minimal_unit_projectors.is_empty() {
                let _ = writeln!(
                    out,
                    "lowest-rank projectors valued 1: {:?}",
                    c.report.minimal_unit_projectors
                );
            }
        }
        ProdruleReport::Trace(tr) => {
            let mut t = Table::new(["identity", "lhs", "rhs", "holds"]);
            for s in &tr.steps {
                t.row(vec![
                    s.identity.clone(),
                    format_number(s.lhs),
                    format_number(s.rhs),
                    s.holds.to_string(),
                ]);
            }
            out += &t.render("");
        }
    }
    out
}

#[derive(Debug, Serialize)]
struct DemoConditional {
    target: String,
    condition: String,
    stage: ExperimentStage,
    joint: f64,
    condition_probability: f64,
    value: f64,
}

#[derive(Debug, Serialize)]
struct DemoFrame {
    criterion: Criterion,
    beta: f64,
    assignment: crate::abl::RealityAssignment,
}

#[derive(Debug, Serialize)]
struct DemoReport {
    states: Vec<HardyReport>,
    coincidence: f64,
    conditionals: Vec<DemoConditional>,
    abl: Vec<(String, f64)>,
    violations: Vec<crate::abl::Violation>,
    frames: Vec<DemoFrame>,
}

fn demo() -> Outcome<DemoReport> {
    let experiment = Experiment::default();
    let stages = [
        ExperimentStage::AfterP,
        ExperimentStage::AfterBs2Minus,
        ExperimentStage::AfterBs2Plus,
        ExperimentStage::AfterBoth,
    ];
    let states = stages
        .iter()
        .map(|&stage| {
            run_hardy(
                &HardyScenario {
                    stage,
                    ..HardyScenario::default()
                },
                STATE_TOLERANCE,
            )
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let coincidence = experiment.observable_probability(
        ExperimentStage::AfterBoth,
        &Observable::d_plus().times(&Observable::d_minus()),
    )?;

    let mut conditionals = Vec::new();
    for (target, condition, stage) in [
        (
            Observable::u_minus(),
            Observable::d_plus(),
            ExperimentStage::AfterBs2Plus,
        ),
        (
            Observable::u_plus(),
            Observable::d_minus(),
            ExperimentStage::AfterBs2Minus,
        ),
    ] {
        let legs = experiment.conditional_legs(
            stage,
            &experiment.projector(stage, &target)?,
            &experiment.projector(stage, &condition)?,
        )?;
        conditionals.push(DemoConditional {
            target: target.name(),
            condition: condition.name(),
            stage,
            joint: legs.joint,
            condition_probability: legs.condition,
            value: legs.value(),
        });
    }

    let ensemble = hardy_ensemble(&experiment)?;
    let observables = hardy_observables(&experiment, ExperimentStage::AfterP)?;
    let abl = observables
        .iter()
        .map(|o| {
            Ok((
                o.name.clone(),
                abl_probability(&ensemble, &ProjectorFamily::binary(&o.projector), 0)?,
            ))
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let assignment = assign_elements(&ensemble, &observables)?;
    let [u_plus, u_minus, _] = observables;
    let violations = audit_product_rule(&assignment, &[(u_plus, u_minus)])?.violations;

    let geometry = HardyGeometry::default();
    let mut frames = Vec::new();
    for criterion in Criterion::ALL {
        for beta in [0.6, -0.6] {
            let frame = LorentzBoost::new(beta)?;
            frames.push(DemoFrame {
                criterion,
                beta,
                assignment: hardy_assignment(
                    &experiment,
                    &geometry,
                    criterion,
                    Some(&frame),
                    NonlocalKind::Union,
                )?,
            });
        }
    }
    Ok(DemoReport {
        states,
        coincidence,
        conditionals,
        abl,
        violations,
        frames,
    })
}

fn render_demo(d: &DemoReport) -> String {
    let titles = [
        "after the overlap point P",
        "electron past BS2- only (frame moving towards the electron side)",
        "positron past BS2+ only (frame moving towards the positron side)",
        "after both second beam splitters",
    ];
    let mut out = String::from("Hardy's paradox\n\n");
    for (title, state) in titles.iter().zip(&d.states) {
        let _ = writeln!(out, "state {title}");
        let mut t = Table::new(["label", "re", "im"]);
        for a in &state.amplitudes {
            t.row(vec![
                a.label.to_string(),
                format_number(a.re),
                format_number(a.im),
            ]);
        }
        out += &t.render("  ");
        out += "\n";
    }
    let _ = writeln!(
        out,
        "P(D+ and D-) = {}  (one run in {})\n",
        format_number(d.coincidence),
        format_number(1.0 / d.coincidence)
    );
    out += "certainties from the state alone, no projection:\n";
    for c in &d.conditionals {
        let _ = writeln!(
            out,
            "  P({} | {}) at {} = {}  ({} / {})",
            c.target,
            c.condition,
            c.stage,
            format_number(c.value),
            format_number(c.joint),
            format_number(c.condition_probability)
        );
    }
    out += "\nABL rule, pre-selected after P, post-selected on d+d-:\n";
    for (name, p) in &d.abl {
        let _ = writeln!(out, "  P({name} = 1) = {}", format_number(*p));
    }
    out += "\n";
    for v in &d.violations {
        let _ = writeln!(
            out,
            "product rule violated: f({}) f({}) = {} but f({}) = {}",
            v.a,
            v.b,
            format_number(v.f_a * v.f_b),
            v.product,
            format_number(v.f_product)
        );
    }
    out += "\nelements of reality by criterion and frame (- means none attributed)\n";
    let mut t = Table::new(["criterion", "beta", "U+", "U-", "U+U-"]);
    for f in &d.frames {
        t.row(vec![
            f.criterion.to_string(),
            format_number(f.beta),
            assignment_cell(&f.assignment, "U+"),
            assignment_cell(&f.assignment, "U-"),
            assignment_cell(&f.assignment, "U+U-"),
        ]);
    }
    out += &t.render("  ");
    out
}
