//! Batch front-end: one [`RunManifest`] per process, one JSON or CSV report
//! per command.
//!
//! ```text
//! lplab curve   --group S3 --f f.json --p 1,1.5,2,3 --out curve.csv
//! lplab witness --group S3 --p 4 --seed 0 --restarts 16
//! lplab herz    --group Z6 --random 50 --seed 1
//! lplab all     --out reports/
//! ```
//!
//! Exit status is 0 when every executed check passes, 1 when a check fails
//! (reports are still written) and 2 on input errors. Reports are
//! byte-identical for identical manifests; wall-clock timings go to a
//! `<out>.timing.json` sidecar, or to stderr when writing to stdout.

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{embed_subgroup, seeded_element, GroupAlgebraElement};
use crate::analysis::{
    check_abelian_selfduality, check_herz_monotone, check_log_convexity, check_quotient_contraction,
    check_sharp_duality, check_subgroup_isometry, norm_curve, validate_grid, witness_search, CheckDetail, CheckReport,
    NormCurve, SearchConfig, DEFAULT_GRID, DEFAULT_TOL,
};
use crate::crossed::{check_mnp_isometry, verify_matrix_units, verify_spatiality, CrossedCoefficients};
use crate::error::{LabError, Result};
use crate::gelfand::{characters, check_gelfand_sandwich, plancherel_residual};
use crate::group::{generated_subgroup, parse_group_spec, subgroup, FiniteGroup, SubgroupHandle};
use crate::io::{coefficient_matrix_from_json, csv_float, read_element, to_json_string};
use crate::pnorm::{bruteforce_pnorm, estimate_pnorm, interpolation_upper, EstimatorConfig, MAX_P};
use crate::{CMatrix, C64};

pub const TOOL: &str = "lplab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Groups swept by `all`.
pub const DEFAULT_GROUPS: [&str; 5] = ["Z6", "Z8", "S3", "D4", "Q8"];

/// Smallest duality gap a `witness` run must certify.
pub const WITNESS_THRESHOLD: f64 = 1e-3;

const PLANCHEREL_TOL: f64 = 1e-9;
const ORACLE_TOL: f64 = 1e-4;
const BOUND_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Curve,
    Herz,
    Convexity,
    Duality,
    Selfdual,
    Witness,
    Subgroup,
    Quotient,
    Gelfand,
    CrossedUnits,
    CrossedNorm,
    OracleSuite,
    All,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Curve => "curve",
            Command::Herz => "herz",
            Command::Convexity => "convexity",
            Command::Duality => "duality",
            Command::Selfdual => "selfdual",
            Command::Witness => "witness",
            Command::Subgroup => "subgroup",
            Command::Quotient => "quotient",
            Command::Gelfand => "gelfand",
            Command::CrossedUnits => "crossed-units",
            Command::CrossedNorm => "crossed-norm",
            Command::OracleSuite => "oracle-suite",
            Command::All => "all",
        }
    }

    fn needs_group(self) -> bool {
        !matches!(self, Command::OracleSuite | Command::All)
    }

    fn default_p(self) -> Vec<f64> {
        match self {
            Command::Curve | Command::Herz | Command::Convexity => DEFAULT_GRID.to_vec(),
            Command::Duality => vec![1.2, 1.5, 3.0, 4.0],
            Command::Selfdual => vec![1.2, 1.5, 4.0],
            Command::Witness => vec![4.0],
            Command::OracleSuite => vec![1.2, 1.5, 2.5, 4.0],
            _ => vec![1.5, 3.0],
        }
    }

    fn default_samples(self) -> usize {
        match self {
            Command::Curve => 1,
            Command::Herz | Command::Convexity => 50,
            Command::CrossedNorm => 10,
            Command::OracleSuite => 200,
            _ => 20,
        }
    }

    /// Groups from [`DEFAULT_GROUPS`] the command applies to under `all`.
    fn default_groups(self) -> Vec<&'static str> {
        match self {
            Command::Selfdual | Command::Gelfand => vec!["Z6", "Z8"],
            Command::Witness => vec!["S3", "D4", "Q8"],
            Command::OracleSuite | Command::All => vec![],
            _ => DEFAULT_GROUPS.to_vec(),
        }
    }

    const SWEEP: [Command; 12] = [
        Command::Curve,
        Command::Herz,
        Command::Convexity,
        Command::Duality,
        Command::Selfdual,
        Command::Witness,
        Command::Subgroup,
        Command::Quotient,
        Command::Gelfand,
        Command::CrossedUnits,
        Command::CrossedNorm,
        Command::OracleSuite,
    ];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Command line; every flag is shared by all commands.
#[derive(Parser, Debug)]
#[command(name = "lplab", version, about = "L^p operator norms of finite group algebras")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Group spec such as Z6, D4, S3, Q8 or Z2xZ4.
    #[arg(long)]
    pub group: Option<String>,
    /// Element file (JSON or CSV); a coefficient matrix for crossed-norm.
    #[arg(long = "f", value_name = "PATH")]
    pub input: Option<PathBuf>,
    /// Comma-separated exponents in [1, 64].
    #[arg(long = "p", value_delimiter = ',')]
    pub p: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Estimator restarts; search restarts for witness.
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Number of seeded random inputs.
    #[arg(long)]
    pub random: Option<usize>,
    /// `center`, `trivial`, `gen:<ids>` or a comma list of member ids.
    #[arg(long)]
    pub subgroup: Option<String>,
    /// Output file, or directory for `all`. Defaults to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Defaults to csv for a `.csv` output path, json otherwise.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: Command,
    pub group: Option<String>,
    pub input: Option<PathBuf>,
    pub p: Vec<f64>,
    pub seed: u64,
    pub restarts: Option<usize>,
    pub random: Option<usize>,
    pub subgroup: Option<String>,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunManifest {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            group: None,
            input: None,
            p: Vec::new(),
            seed: 0,
            restarts: None,
            random: None,
            subgroup: None,
            out: None,
            format: Format::Json,
        }
    }

    /// Rejects bad exponents and flag combinations before any work starts.
    pub fn validate(&self) -> Result<()> {
        if let Some(&p) = self.p.iter().find(|&&p| !(1.0..=MAX_P).contains(&p)) {
            return Err(LabError::InvalidExponent(p));
        }
        if self.command.needs_group() && self.group.is_none() {
            return Err(LabError::Parse(format!("{} needs --group", self.command.name())));
        }
        if !self.command.needs_group() && self.group.is_some() {
            return Err(LabError::Parse(format!("{} takes no --group", self.command.name())));
        }
        if let Some(g) = &self.group {
            parse_group_spec(g)?;
        }
        if self.input.is_some() && self.random.is_some() {
            return Err(LabError::Parse("--f and --random are exclusive".into()));
        }
        if self.input.is_some() && matches!(self.command, Command::All | Command::OracleSuite | Command::Witness) {
            return Err(LabError::Parse(format!("{} takes no --f", self.command.name())));
        }
        if self.command == Command::All && !self.p.is_empty() {
            return Err(LabError::Parse("all uses each command's default exponents".into()));
        }
        if self.random == Some(0) {
            return Err(LabError::OutOfRange("--random must be positive".into()));
        }
        if self.restarts == Some(0) {
            return Err(LabError::OutOfRange("--restarts must be positive".into()));
        }
        match self.command {
            Command::Curve | Command::Herz | Command::Convexity => validate_grid(&self.exponents())?,
            Command::Witness if self.exponents().len() != 1 => {
                return Err(LabError::Parse("witness takes a single --p".into()));
            }
            _ => {}
        }
        if self.command == Command::Convexity && self.exponents().len() < 3 {
            return Err(LabError::OutOfRange("convexity needs at least 3 exponents".into()));
        }
        if self.subgroup.is_some() && !matches!(self.command, Command::Subgroup | Command::Quotient) {
            return Err(LabError::Parse("--subgroup applies to subgroup and quotient".into()));
        }
        Ok(())
    }

    fn exponents(&self) -> Vec<f64> {
        if self.p.is_empty() {
            self.command.default_p()
        } else {
            self.p.clone()
        }
    }

    fn samples(&self) -> usize {
        self.random.unwrap_or(self.command.default_samples())
    }

    fn estimator(&self) -> EstimatorConfig {
        let cfg = EstimatorConfig::default().with_seed(self.seed);
        match self.restarts {
            Some(r) => EstimatorConfig { restarts: r, ..cfg },
            None => cfg,
        }
    }

    fn group(&self) -> Result<Arc<FiniteGroup>> {
        let spec = self
            .group
            .as_deref()
            .ok_or_else(|| LabError::Parse("missing --group".into()))?;
        Ok(Arc::new(parse_group_spec(spec)?))
    }
}

impl From<Cli> for RunManifest {
    fn from(cli: Cli) -> Self {
        let csv_path = cli
            .out
            .as_deref()
            .is_some_and(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")));
        let format = cli.format.unwrap_or(if csv_path { Format::Csv } else { Format::Json });
        Self {
            command: cli.command,
            group: cli.group,
            input: cli.input,
            p: cli.p,
            seed: cli.seed,
            restarts: cli.restarts,
            random: cli.random,
            subgroup: cli.subgroup,
            out: cli.out,
            format,
        }
    }
}

/// One command's output.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Command,
    pub seed: u64,
    pub manifest: RunManifest,
    pub pass: bool,
    pub worst_violation: f64,
    pub checks: Vec<CheckReport>,
    pub data: Value,
}

struct Outcome {
    checks: Vec<CheckReport>,
    data: Vec<Value>,
    curves: Vec<NormCurve>,
}

impl Outcome {
    fn checks(checks: Vec<CheckReport>) -> Self {
        Self {
            checks,
            data: Vec::new(),
            curves: Vec::new(),
        }
    }

    fn extend(&mut self, other: Outcome) {
        self.checks.extend(other.checks);
        self.data.extend(other.data);
        self.curves.extend(other.curves);
    }
}

/// Seeded random element; same `(group, seed)` gives the same element.
pub fn random_element(group: Arc<FiniteGroup>, seed: u64) -> GroupAlgebraElement {
    seeded_element(group, seed, 0)
}

fn elements(m: &RunManifest, g: &Arc<FiniteGroup>) -> Result<Vec<GroupAlgebraElement>> {
    match &m.input {
        Some(path) => Ok(vec![read_element(path, m.group.as_deref())?]),
        None => Ok((0..m.samples() as u64)
            .map(|k| seeded_element(Arc::clone(g), m.seed, k))
            .collect()),
    }
}

fn parse_ids(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|e| LabError::Parse(format!("subgroup id {s:?}: {e}")))
        })
        .collect()
}

/// `center`, `trivial`, `gen:<ids>` or a comma list of member ids.
pub fn parse_subgroup(g: &Arc<FiniteGroup>, spec: &str) -> Result<SubgroupHandle> {
    match spec.to_ascii_lowercase().as_str() {
        "center" => subgroup(g, &g.center()),
        "trivial" => subgroup(g, &[g.identity()]),
        s => match s.strip_prefix("gen:") {
            Some(ids) => generated_subgroup(g, &parse_ids(ids)?),
            None => subgroup(g, &parse_ids(s)?),
        },
    }
}

fn run_curves(m: &RunManifest, g: &Arc<FiniteGroup>) -> Result<Vec<NormCurve>> {
    let cfg = m.estimator();
    elements(m, g)?
        .iter()
        .map(|f| norm_curve(f, &m.exponents(), &cfg))
        .collect()
}

fn per_p<F>(m: &RunManifest, fs: &[GroupAlgebraElement], check: F) -> Result<Vec<CheckReport>>
where
    F: Fn(&GroupAlgebraElement, f64) -> Result<CheckReport>,
{
    let mut out = Vec::new();
    for f in fs {
        for &p in &m.exponents() {
            out.push(check(f, p)?);
        }
    }
    Ok(out)
}

fn unit_disc_matrix(dim: usize, seed: u64, index: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    CMatrix::from_fn(dim, dim, |_, _| {
        let r = rng.gen::<f64>().sqrt();
        C64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
    })
}

fn square_matrix(dim: usize, seed: u64, index: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    CMatrix::from_fn(dim, dim, |_, _| {
        C64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
    })
}

fn oracle_suite(m: &RunManifest) -> Result<Outcome> {
    let cfg = m.estimator();
    let mut checks = Vec::new();
    for k in 0..m.samples() {
        let dim = 2 + k % 2;
        let a = unit_disc_matrix(dim, m.seed, k as u64);
        let rt = interpolation_upper(&a);
        for &p in &m.exponents() {
            let est = estimate_pnorm(&a, p, &cfg)?.lower;
            let brute = bruteforce_pnorm(&a, p, if dim == 2 { 64 } else { 24 })?;
            let detail = CheckDetail::new()
                .input("matrix", k)
                .input("dim", dim)
                .input("p", p)
                .measure("estimate", est)
                .measure("bruteforce", brute)
                .measure("interpolation_bound", rt.at(p));
            let rel = (est - brute).abs() / brute.max(f64::MIN_POSITIVE);
            checks.push(CheckReport::new(
                "oracle-agreement",
                ORACLE_TOL,
                rel,
                vec![detail.clone()],
            ));
            checks.push(CheckReport::new(
                "interpolation-bound",
                BOUND_TOL,
                est - rt.at(p),
                vec![detail],
            ));
        }
    }
    Ok(Outcome::checks(checks))
}

fn run_on_group(m: &RunManifest) -> Result<Outcome> {
    let cfg = m.estimator();
    let g = m.group()?;
    let outcome = match m.command {
        Command::Curve => {
            let curves = run_curves(m, &g)?;
            Outcome {
                checks: Vec::new(),
                data: Vec::new(),
                curves,
            }
        }
        Command::Herz => {
            let curves = run_curves(m, &g)?;
            Outcome::checks(curves.iter().map(|c| check_herz_monotone(c, DEFAULT_TOL)).collect())
        }
        Command::Convexity => {
            let curves = run_curves(m, &g)?;
            Outcome::checks(
                curves
                    .iter()
                    .map(|c| check_log_convexity(c, DEFAULT_TOL))
                    .collect::<Result<_>>()?,
            )
        }
        Command::Duality => Outcome::checks(per_p(m, &elements(m, &g)?, |f, p| {
            check_sharp_duality(f, p, &cfg, DEFAULT_TOL)
        })?),
        Command::Selfdual => Outcome::checks(per_p(m, &elements(m, &g)?, |f, p| {
            check_abelian_selfduality(f, p, &cfg, DEFAULT_TOL)
        })?),
        Command::Witness => {
            let mut search = SearchConfig {
                seed: m.seed,
                ..SearchConfig::default()
            };
            if let Some(r) = m.restarts {
                search.restarts = r;
            }
            let w = witness_search(&g, m.exponents()[0], &search)?;
            let detail = CheckDetail::new()
                .input("group", g.name())
                .input("p", w.p)
                .measure("gap", w.gap)
                .measure("norm_p", w.norm_p)
                .measure("norm_p_conjugate", w.norm_p_conjugate);
            let report = CheckReport::new("witness-gap", 0.0, WITNESS_THRESHOLD - w.gap, vec![detail]);
            let data = serde_json::to_value(&w).map_err(|e| LabError::Parse(e.to_string()))?;
            Outcome {
                checks: vec![report],
                data: vec![data],
                curves: Vec::new(),
            }
        }
        Command::Subgroup => {
            let h = parse_subgroup(&g, m.subgroup.as_deref().unwrap_or("gen:1"))?;
            let fs = match &m.input {
                Some(_) => elements(m, &g)?,
                None => (0..m.samples() as u64)
                    .map(|k| embed_subgroup(&h, &seeded_element(Arc::clone(h.group()), m.seed, k)))
                    .collect::<Result<_>>()?,
            };
            Outcome::checks(per_p(m, &fs, |f, p| {
                check_subgroup_isometry(&h, f, p, &cfg, DEFAULT_TOL)
            })?)
        }
        Command::Quotient => {
            let n = parse_subgroup(&g, m.subgroup.as_deref().unwrap_or("center"))?;
            Outcome::checks(per_p(m, &elements(m, &g)?, |f, p| {
                check_quotient_contraction(&n, f, p, &cfg, DEFAULT_TOL)
            })?)
        }
        Command::Gelfand => {
            let fs = elements(m, &g)?;
            let mut checks = per_p(m, &fs, |f, p| check_gelfand_sandwich(f, p, &cfg, DEFAULT_TOL))?;
            let table = characters(&g)?;
            for f in &fs {
                let residual = plancherel_residual(&table, f)?;
                let detail = CheckDetail::new()
                    .input("group", g.name())
                    .measure("residual", residual);
                checks.push(CheckReport::new("plancherel", PLANCHEREL_TOL, residual, vec![detail]));
            }
            Outcome::checks(checks)
        }
        Command::CrossedUnits => Outcome::checks(vec![verify_matrix_units(&g)?, verify_spatiality(&g, &cfg)?]),
        Command::CrossedNorm => {
            let matrices = match &m.input {
                Some(path) => vec![coefficient_matrix_from_json(&std::fs::read_to_string(path)?)?],
                None => (0..m.samples() as u64)
                    .map(|k| square_matrix(g.order(), m.seed, k))
                    .collect(),
            };
            let mut checks = Vec::new();
            for c in matrices {
                let coeffs = CrossedCoefficients::new(Arc::clone(&g), c)?;
                for &p in &m.exponents() {
                    checks.push(check_mnp_isometry(&coeffs, p, &cfg, DEFAULT_TOL)?);
                }
            }
            Outcome::checks(checks)
        }
        Command::OracleSuite | Command::All => unreachable!("no group"),
    };
    Ok(outcome)
}

fn execute(m: &RunManifest) -> Result<Outcome> {
    match m.command {
        Command::OracleSuite => oracle_suite(m),
        Command::All => Err(LabError::Parse("all is expanded by run".into())),
        _ => run_on_group(m),
    }
}

fn report(m: &RunManifest, outcome: &Outcome) -> Result<Report> {
    let pass = outcome.checks.iter().all(|c| c.pass);
    let worst = outcome.checks.iter().map(|c| c.worst_violation).fold(0.0, f64::max);
    let mut data = outcome.data.clone();
    for c in &outcome.curves {
        data.push(serde_json::to_value(c).map_err(|e| LabError::Parse(e.to_string()))?);
    }
    Ok(Report {
        tool: TOOL,
        version: VERSION,
        command: m.command,
        seed: m.seed,
        manifest: m.clone(),
        pass,
        worst_violation: worst,
        checks: outcome.checks.clone(),
        data: match data.len() {
            0 => Value::Null,
            1 => data.pop().expect("one entry"),
            _ => Value::Array(data),
        },
    })
}

fn curves_csv(curves: &[NormCurve]) -> String {
    let mut out = String::from("group,f,p,lower,upper,converged\n");
    for (i, c) in curves.iter().enumerate() {
        for e in &c.points {
            out.push_str(&format!(
                "{},{i},{},{},{},{}\n",
                c.group,
                csv_float(e.p),
                csv_float(e.lower),
                csv_float(e.upper),
                e.converged
            ));
        }
    }
    out
}

fn checks_csv(checks: &[CheckReport]) -> String {
    let mut out = String::from("index,check,pass,worst_violation,tolerance\n");
    for (i, c) in checks.iter().enumerate() {
        out.push_str(&format!(
            "{i},{},{},{},{}\n",
            c.check,
            c.pass,
            csv_float(c.worst_violation),
            csv_float(c.tolerance)
        ));
    }
    out
}

/// Renders one command's report in the manifest's format.
fn render(m: &RunManifest, outcome: &Outcome) -> Result<(bool, String)> {
    let r = report(m, outcome)?;
    let text = match m.format {
        Format::Json => to_json_string(&r)?,
        Format::Csv if m.command == Command::Curve => curves_csv(&outcome.curves),
        Format::Csv => checks_csv(&outcome.checks),
    };
    Ok((r.pass, text))
}

fn timing_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".timing.json");
    out.with_file_name(name)
}

fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, text)?;
    Ok(())
}

fn timing_json(entries: &[(String, f64)]) -> Result<String> {
    let map: serde_json::Map<String, Value> = entries.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
    to_json_string(&Value::Object(map))
}

fn run_single(m: &RunManifest) -> Result<bool> {
    let start = Instant::now();
    let outcome = execute(m)?;
    let secs = start.elapsed().as_secs_f64();
    let (pass, text) = render(m, &outcome)?;
    let timing = timing_json(&[(m.command.name().to_string(), secs)])?;
    match &m.out {
        Some(path) => {
            write(path, &text)?;
            write(&timing_path(path), &timing)?;
        }
        None => {
            print!("{text}");
            eprint!("{timing}");
        }
    }
    Ok(pass)
}

fn run_all(m: &RunManifest) -> Result<bool> {
    let dir = m.out.clone().unwrap_or_else(|| PathBuf::from("lplab-report"));
    let ext = match m.format {
        Format::Json => "json",
        Format::Csv => "csv",
    };
    let mut pass = true;
    let mut timings = Vec::new();
    let mut rendered = Vec::new();
    for cmd in Command::SWEEP {
        let start = Instant::now();
        let mut sub = RunManifest {
            command: cmd,
            out: None,
            p: Vec::new(),
            ..m.clone()
        };
        let mut outcome = Outcome::checks(Vec::new());
        if cmd == Command::OracleSuite {
            outcome = execute(&sub)?;
        }
        for spec in cmd.default_groups() {
            sub.group = Some(spec.to_string());
            outcome.extend(execute(&sub)?);
        }
        sub.group = None;
        let (ok, text) = render(&sub, &outcome)?;
        pass &= ok;
        timings.push((cmd.name().to_string(), start.elapsed().as_secs_f64()));
        rendered.push((dir.join(format!("{}.{ext}", cmd.name())), text));
    }
    // written once, after every check has run
    for (path, text) in rendered {
        write(&path, &text)?;
    }
    write(&dir.join("timing.json"), &timing_json(&timings)?)?;
    Ok(pass)
}

fn thread_count() -> Result<Option<usize>> {
    match std::env::var("LPLAB_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(LabError::Parse(format!(
                "LPLAB_THREADS={v:?} is not a positive integer"
            ))),
        },
    }
}

fn run_inner(m: &RunManifest) -> Result<bool> {
    m.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count()? {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| LabError::Io(e.to_string()))?;
    pool.install(|| {
        if m.command == Command::All {
            run_all(m)
        } else {
            run_single(m)
        }
    })
}

/// Runs a manifest and returns the process exit code.
pub fn run(m: &RunManifest) -> i32 {
    match run_inner(m) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("lplab: {e}");
            2
        }
    }
}

/// Parses `args` (program name first) and runs the manifest.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&RunManifest::from(cli)),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            code
        }
    }
}
