//! The `wsk` command line: layer tables, linkage classes, verifier suites
//! and the KL cache.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context as _};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use wsk_core::alcove::{same_orbit, DEFAULT_LINKAGE_BOUND};
use wsk_core::kl::{cache_load, cache_save, inverse_kl_q, kl_p};
use wsk_core::mult::{check_modular, dominant_weights_below, linkage_class, specht_n};
use wsk_core::verify::{verify_inversion, verify_orders, verify_parity, Report};
use wsk_core::{Error, Family, GroupContext, KlKind, KlTable, LayerTable, MultEngine, Partition, QConvention, Weight};

pub mod output;

/// Environment variable that overrides `--cache`.
pub const CACHE_ENV: &str = "WSK_CACHE";
const DEFAULT_CACHE_DIR: &str = "wsk-cache";

pub const EXIT_INVALID: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_COUNTEREXAMPLE: i32 = 4;
pub const EXIT_INCONCLUSIVE: i32 = 5;
pub const EXIT_VALIDATION: i32 = 10;

/// Reproducer lines printed to stderr; the JSON report has them all.
const MAX_REPORTED_CASES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "wsk", version, about = "Layer multiplicities of q-Weyl and q-Specht modules")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Semisimple series of a q-Weyl module.
    MultTable {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Semisimple series of a q-Specht module.
    SpechtTable {
        #[arg(long)]
        lambda: String,
    },
    /// Partitions (or dominant weights below lambda) linked to lambda.
    Orbit {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Run a verifier suite.
    Verify { suite: Suite },
    /// Manage the on-disk KL cache.
    Cache { action: CacheAction },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Orders,
    Klpoly,
    Parity,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CacheAction {
    Build,
    Info,
    Clear,
}

/// Options shared by every command.
#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    #[arg(long, global = true, default_value = "A")]
    pub family: Family,
    /// Rank of the finite root system. Type A tables default to `n - 1`.
    #[arg(long, global = true)]
    pub rank: Option<usize>,
    /// Level; defaults to `--p` when that is set.
    #[arg(long, global = true)]
    pub e: Option<i64>,
    /// Size of the partitions (parity suite; checked against lambda).
    #[arg(long, global = true)]
    pub r: Option<u32>,
    /// Type A_{n-1}; defaults to max(r, 2).
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Length bound for the klpoly suite and cache builds.
    #[arg(long, global = true, default_value_t = 8)]
    pub max_length: usize,
    /// Verifier weight box, as a multiple of e.
    #[arg(long, global = true, default_value_t = 4)]
    pub box_multiple: i64,
    /// Step bound for the strong linkage chain search.
    #[arg(long, global = true, default_value_t = DEFAULT_LINKAGE_BOUND)]
    pub bound: usize,
    /// Cache directory; the WSK_CACHE variable overrides it.
    #[arg(long = "cache", global = true)]
    pub cache_path: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Read tables in characteristic p (needs p^2 > r).
    #[arg(long, global = true)]
    pub assume_james: bool,
    #[arg(long, global = true)]
    pub p: Option<u32>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, global = true, default_value = "dominant-poset")]
    pub q_convention: QConvention,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            family: Family::A,
            rank: None,
            e: None,
            r: None,
            n: None,
            max_length: 8,
            box_multiple: 4,
            bound: DEFAULT_LINKAGE_BOUND,
            cache_path: None,
            format: Format::Json,
            assume_james: false,
            p: None,
            workers: None,
            q_convention: QConvention::DominantPoset,
        }
    }
}

/// A failure with its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub error: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        let error = e.into();
        Failure {
            code: exit_code(&error),
            error,
        }
    }
}

fn fail(code: i32, error: anyhow::Error) -> Failure {
    Failure { code, error }
}

fn invalid(msg: impl Into<String>) -> Failure {
    fail(EXIT_INVALID, anyhow!(msg.into()))
}

/// Status for an error chain: the first library error decides.
pub fn exit_code(e: &anyhow::Error) -> i32 {
    for cause in e.chain() {
        if let Some(err) = cause.downcast_ref::<Error>() {
            return match err {
                Error::ResourceCap { .. } => EXIT_RESOURCE,
                Error::Validation(_) => EXIT_VALIDATION,
                Error::Io(_) | Error::CorruptCache { .. } | Error::CacheVersion(_) => 1,
                _ => EXIT_INVALID,
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 1;
        }
    }
    1
}

pub type CmdResult<T> = std::result::Result<T, Failure>;

/// What the command line names as lambda.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LambdaArg {
    Partition(Partition),
    Weight(Weight),
}

pub fn parse_lambda(s: &str) -> CmdResult<LambdaArg> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("w:") {
        let inner = rest.trim().trim_start_matches('(').trim_end_matches(')');
        if inner.trim().is_empty() {
            return Err(invalid("empty weight"));
        }
        let coords = inner
            .split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|_| invalid(format!("bad weight coordinate {t:?} in {s:?}"))))
            .collect::<CmdResult<Vec<i64>>>()?;
        return Ok(LambdaArg::Weight(Weight(coords)));
    }
    Ok(LambdaArg::Partition(s.parse::<Partition>()?))
}

impl RunConfig {
    pub fn validate(&self) -> CmdResult<()> {
        if let Some(e) = self.e {
            if e < 1 {
                return Err(invalid(format!("e must be at least 1, got {e}")));
            }
        }
        if self.n == Some(0) {
            return Err(invalid("n must be at least 1"));
        }
        if self.max_length == 0 || self.box_multiple < 1 || self.bound == 0 {
            return Err(invalid("verifier bounds must be positive"));
        }
        if self.workers == Some(0) {
            return Err(invalid("workers must be positive"));
        }
        if self.p.is_some() && !self.assume_james {
            return Err(invalid("--p needs --assume-james"));
        }
        if self.assume_james && self.p.is_none() {
            return Err(invalid("--assume-james needs --p"));
        }
        if let (Some(p), Some(e)) = (self.p, self.e) {
            if i64::from(p) != e {
                return Err(invalid(format!("--p {p} needs e = p, got e = {e}")));
            }
        }
        if let (Some(p), Some(r)) = (self.p, self.r) {
            check_modular(r, p)?;
        }
        Ok(())
    }

    pub fn level(&self) -> CmdResult<i64> {
        self.e
            .or(self.p.map(i64::from))
            .ok_or_else(|| invalid("--e is required"))
    }

    /// Cache directory: WSK_CACHE, then `--cache`.
    pub fn cache_dir(&self) -> Option<PathBuf> {
        std::env::var_os(CACHE_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
            .or_else(|| self.cache_path.clone())
    }

    fn context(&self, rank: usize) -> CmdResult<GroupContext> {
        if let Some(r) = self.rank {
            if r != rank {
                return Err(invalid(format!("--rank {r} conflicts with rank {rank} implied by the input")));
            }
        }
        Ok(GroupContext::new(self.family, rank, self.level()?)?)
    }

    fn given_context(&self) -> CmdResult<GroupContext> {
        let rank = self.rank.ok_or_else(|| invalid("--rank is required"))?;
        self.context(rank)
    }

    /// `n` for a type A partition.
    fn type_a_n(&self, lambda: &Partition) -> CmdResult<usize> {
        if self.family != Family::A {
            return Err(invalid("partitions need --family A; use a w: weight"));
        }
        if let Some(r) = self.r {
            if lambda.size() != r {
                return Err(invalid(format!("{lambda} is not a partition of r = {r}")));
            }
        }
        let n = self.n.unwrap_or_else(|| specht_n(lambda));
        if n < 2 {
            return Err(invalid("n must be at least 2 for a table"));
        }
        Ok(n)
    }

    fn engine(&self, ctx: GroupContext) -> CmdResult<MultEngine> {
        let engine = MultEngine::new(ctx).with_q_convention(self.q_convention);
        if let Some(dir) = self.cache_dir() {
            if let Some((p, q)) = load_cache(engine.ctx(), &dir, false)? {
                return Ok(engine.with_kl_tables(p, q)?);
            }
        }
        Ok(engine)
    }

    /// Runs `f` on a pool with the configured worker count.
    pub fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> CmdResult<T> {
        match self.workers {
            None => Ok(f()),
            Some(w) => {
                let pool = rayon::ThreadPoolBuilder::new().num_threads(w).build()?;
                Ok(pool.install(f))
            }
        }
    }
}

fn cache_files(dir: &Path) -> [(KlKind, PathBuf); 2] {
    [(KlKind::P, dir.join("P.klcache")), (KlKind::Q, dir.join("Q.klcache"))]
}

/// Loads both tables if present. A fingerprint mismatch is an error when
/// `strict`, otherwise the cache is skipped.
fn load_cache(ctx: &GroupContext, dir: &Path, strict: bool) -> CmdResult<Option<(KlTable, KlTable)>> {
    let [(_, pp), (_, qp)] = cache_files(dir);
    if !pp.exists() || !qp.exists() {
        return Ok(None);
    }
    let load = |path: &Path| match cache_load(ctx, path) {
        Ok(t) => Ok(Some(t)),
        Err(Error::FingerprintMismatch { .. }) if !strict => Ok(None),
        Err(e) => Err(Failure::from(anyhow::Error::from(e).context(format!("loading {}", path.display())))),
    };
    match (load(&pp)?, load(&qp)?) {
        (Some(p), Some(q)) => Ok(Some((p, q))),
        _ => Ok(None),
    }
}

fn render(cfg: &RunConfig, table: &LayerTable) -> CmdResult<String> {
    table.validate()?;
    Ok(match cfg.format {
        Format::Json => output::table_json(table)?,
        Format::Csv => output::table_csv(table)?,
    })
}

pub fn cmd_mult_table(cfg: &RunConfig, lambda: &str) -> CmdResult<String> {
    cfg.validate()?;
    let table = match parse_lambda(lambda)? {
        LambdaArg::Partition(lam) => {
            let n = cfg.type_a_n(&lam)?;
            let engine = cfg.engine(cfg.context(n - 1)?)?;
            match cfg.p {
                Some(p) => cfg.install(|| engine.modular_table(&lam, n, p))??,
                None => cfg.install(|| engine.weyl_layer_table(&lam, n))??,
            }
        }
        LambdaArg::Weight(w) => {
            if cfg.p.is_some() {
                return Err(invalid("--p applies to partitions only"));
            }
            let engine = cfg.engine(cfg.context(w.rank())?)?;
            cfg.install(|| engine.weyl_layer_table_weight(&w))??
        }
    };
    render(cfg, &table)
}

pub fn cmd_specht_table(cfg: &RunConfig, lambda: &str) -> CmdResult<String> {
    cfg.validate()?;
    let LambdaArg::Partition(lam) = parse_lambda(lambda)? else {
        return Err(invalid("Specht tables are indexed by partitions"));
    };
    if let Some(n) = cfg.n {
        if n != specht_n(&lam) {
            return Err(invalid(format!("Specht tables use n = max(r, 2) = {}, got --n {n}", specht_n(&lam))));
        }
    }
    let n = cfg.type_a_n(&lam)?;
    let engine = cfg.engine(cfg.context(n - 1)?)?;
    let mut table = cfg.install(|| engine.specht_layer_table(&lam))??;
    if let Some(p) = cfg.p {
        check_modular(lam.size(), p)?;
        table.flags.assumes_james = true;
        table.flags.assumes_bipartite = true;
    }
    render(cfg, &table)
}

pub fn cmd_orbit(cfg: &RunConfig, lambda: &str) -> CmdResult<String> {
    cfg.validate()?;
    match parse_lambda(lambda)? {
        LambdaArg::Partition(lam) => {
            let n = cfg.type_a_n(&lam)?;
            let ctx = cfg.context(n - 1)?;
            let class = linkage_class(&ctx, &lam, n)?;
            let labels: Vec<Vec<i64>> = class.iter().map(|p| p.parts().iter().map(|&x| i64::from(x)).collect()).collect();
            let lw = lam.parts().iter().map(|&x| i64::from(x)).collect();
            output::orbit(cfg.format, &ctx, lw, &labels)
        }
        LambdaArg::Weight(w) => {
            let ctx = cfg.context(w.rank())?;
            if !w.is_dominant() {
                return Err(Error::NotDominant(w.0).into());
            }
            let below: Vec<Vec<i64>> = dominant_weights_below(&ctx, &w)
                .into_iter()
                .filter(|nu| same_orbit(&ctx, &w, nu))
                .map(|nu| nu.0)
                .collect();
            output::orbit(cfg.format, &ctx, w.0.clone(), &below)
        }
    }
}

#[derive(Debug)]
pub struct VerifyOutcome {
    pub text: String,
    pub code: i32,
    /// Failing and inconclusive cases, one line each.
    pub cases: Vec<String>,
}

/// The rendered reports and the exit status they imply.
pub fn cmd_verify(cfg: &RunConfig, suite: Suite) -> CmdResult<VerifyOutcome> {
    cfg.validate()?;
    let reports = cfg.install(|| run_suite(cfg, suite))??;
    let code = if reports.iter().any(|r| !r.failures.is_empty()) {
        EXIT_COUNTEREXAMPLE
    } else if reports.iter().any(|r| !r.inconclusive.is_empty()) {
        EXIT_INCONCLUSIVE
    } else {
        0
    };
    let text = match cfg.format {
        Format::Json => output::reports_json(&reports)?,
        Format::Csv => output::reports_csv(&reports)?,
    };
    let cases = reports
        .iter()
        .flat_map(|r| {
            let fails = r.failures.iter().map(move |f| format!("{} [{}] counterexample: {f}", r.suite, r.context));
            let inc = r.inconclusive.iter().map(move |f| format!("{} [{}] inconclusive: {f}", r.suite, r.context));
            fails.chain(inc)
        })
        .collect();
    Ok(VerifyOutcome { text, code, cases })
}

fn run_suite(cfg: &RunConfig, suite: Suite) -> CmdResult<Vec<Report>> {
    let mut out = Vec::new();
    if matches!(suite, Suite::Orders | Suite::All) {
        let ctx = cfg.given_context()?;
        out.extend(verify_orders(&ctx, cfg.box_multiple * ctx.e(), cfg.bound)?);
    }
    if matches!(suite, Suite::Klpoly | Suite::All) {
        let ctx = cfg.given_context()?;
        let (p, q) = match cfg.cache_dir() {
            Some(dir) => load_cache(&ctx, &dir, false)?,
            None => None,
        }
        .unwrap_or_else(|| (KlTable::new(&ctx, KlKind::P), KlTable::new(&ctx, KlKind::Q)));
        out.push(verify_inversion(&ctx, &p, &q, cfg.max_length)?);
    }
    if matches!(suite, Suite::Parity | Suite::All) {
        if cfg.family != Family::A {
            return Err(invalid("the parity suite runs in type A"));
        }
        let r = cfg.r.ok_or_else(|| invalid("--r is required for the parity suite"))?;
        let n = (r as usize).max(2);
        let engine = MultEngine::new(GroupContext::new(Family::A, n - 1, cfg.level()?)?).with_q_convention(cfg.q_convention);
        out.push(verify_parity(&engine, r)?);
    }
    Ok(out)
}

pub fn cmd_cache(cfg: &RunConfig, action: CacheAction) -> CmdResult<String> {
    cfg.validate()?;
    let dir = cfg.cache_dir().unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR));
    match action {
        CacheAction::Build => {
            let ctx = cfg.given_context()?;
            let (p, q) = load_cache(&ctx, &dir, true)?
                .unwrap_or_else(|| (KlTable::new(&ctx, KlKind::P), KlTable::new(&ctx, KlKind::Q)));
            let els = ctx.enumerate_up_to_length(cfg.max_length)?;
            cfg.install(|| {
                els.par_iter().try_for_each(|w| {
                    for y in els.iter().filter(|y| ctx.bruhat_leq(y, w)) {
                        kl_p(&ctx, &p, y, w)?;
                        inverse_kl_q(&ctx, &p, &q, y, w)?;
                    }
                    Ok::<_, Error>(())
                })
            })??;
            std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            let [(_, pp), (_, qp)] = cache_files(&dir);
            cache_save(&ctx, &p, &pp)?;
            cache_save(&ctx, &q, &qp)?;
            Ok(format!("fingerprint {}\nP entries {}\nQ entries {}\n", ctx.fingerprint(), p.len(), q.len()))
        }
        CacheAction::Info => {
            let mut out = String::new();
            for (kind, path) in cache_files(&dir) {
                match std::fs::read_to_string(&path) {
                    Ok(text) => {
                        let mut lines = text.lines();
                        let head = lines.next().unwrap_or("");
                        let fp = head.split(' ').skip(3).collect::<Vec<_>>().join(" ");
                        out.push_str(&format!("{kind} fingerprint {fp} entries {}\n", lines.count()));
                    }
                    Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                        out.push_str(&format!("{kind} entries 0\n"));
                    }
                    Err(e) => return Err(anyhow::Error::from(e).context(format!("reading {}", path.display())).into()),
                }
            }
            Ok(out)
        }
        CacheAction::Clear => {
            for (_, path) in cache_files(&dir) {
                match std::fs::remove_file(&path) {
                    Ok(()) => {}
                    Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
                    Err(e) => return Err(anyhow::Error::from(e).context(format!("removing {}", path.display())).into()),
                }
            }
            Ok(format!("cleared {}\n", dir.display()))
        }
    }
}

fn plain(text: String) -> VerifyOutcome {
    VerifyOutcome { text, code: 0, cases: Vec::new() }
}

/// Parses `args` and runs the command, returning the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let result = match &cli.command {
        Command::MultTable { lambda } => cmd_mult_table(&cli.config, lambda).map(plain),
        Command::SpechtTable { lambda } => cmd_specht_table(&cli.config, lambda).map(plain),
        Command::Orbit { lambda } => cmd_orbit(&cli.config, lambda).map(plain),
        Command::Verify { suite } => cmd_verify(&cli.config, *suite),
        Command::Cache { action } => cmd_cache(&cli.config, *action).map(plain),
    };
    match result {
        Ok(VerifyOutcome { text, code, cases }) => {
            if out.write_all(text.as_bytes()).is_err() {
                return 1;
            }
            for c in cases.iter().take(MAX_REPORTED_CASES) {
                let _ = writeln!(err, "{c}");
            }
            if cases.len() > MAX_REPORTED_CASES {
                let _ = writeln!(err, "... {} more in the report", cases.len() - MAX_REPORTED_CASES);
            }
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {:#}", f.error);
            f.code
        }
    }
}
