//! The `billiard` command line.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage, config or inadmissible word,
//! 3 bound not certified or free-arc check failed, 4 target level unreachable
//! (symbol above `N`), 5 bisection stalled.

pub mod config;
pub mod report;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coding::{count_words, encode, is_admissible, SymbolWord};
use crate::freearc::{max_symbol_bound, verify_arc_free, DEFAULT_ANGLE_SAMPLES, DEFAULT_POSITION_SAMPLES};
use crate::geometry::{trace_orbit, ArcId, PhasePoint, Table, TableClass};
use crate::sft::{certify_table, entropy_lower_bound, largest_root_eq0, EntropyCertificate, EntropyMethod};
use crate::shooting::{realize_word, ShootingError};
use crate::unfolding::cap_launch;
use config::{RunConfig, TableSpec};

/// Environment variable holding the seed for `simulate`.
pub const SEED_VAR: &str = "BILLIARD_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "billiard",
    version,
    about = "Entropy bounds and symbolic dynamics for billiards between parallel walls"
)]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Classical stadium with the given rectangle.
    #[arg(long, global = true, num_args = 2, value_names = ["LENGTH", "WIDTH"], conflicts_with = "mushroom")]
    stadium: Option<Vec<f64>>,
    /// Mushroom with stalk length and cap radius (unit stalk width).
    #[arg(long, global = true, num_args = 2, value_names = ["STALK", "RADIUS"])]
    mushroom: Option<Vec<f64>>,
    /// Angle of the free arcs, in (0, pi/6).
    #[arg(long, global = true)]
    eps: Option<f64>,
    /// Alphabet bound N (caps the computed one for `bound`).
    #[arg(long, global = true)]
    n: Option<u32>,
    /// Also report bounds in bits.
    #[arg(long, global = true)]
    bits: bool,
    /// Draw orbits unfolded into stacked copies of the table.
    #[arg(long, global = true)]
    unfolded: bool,
    /// Output directory (default: the config's output.dir, else the working directory).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Certified lower bound on the topological entropy.
    Bound,
    /// Find an orbit whose code contains a symbol word.
    Realize {
        /// Symbols, separated by spaces or commas; put them after `--`.
        #[arg(required = true, allow_hyphen_values = true, num_args = 1..)]
        word: Vec<String>,
    },
    /// Check the free-arc conditions on every curved cap.
    Verify,
    /// Number of admissible words of each length.
    Count {
        #[arg(long, default_value_t = 40)]
        n_max: usize,
        /// Halve the growth rate as for a semistadium.
        #[arg(long)]
        semistadium: bool,
    },
    /// Plain orbit from an initial condition (random from BILLIARD_SEED when omitted).
    Simulate {
        #[arg(long, default_value_t = 20)]
        steps: usize,
        /// Starting arc: left, right, bottom, top or flat.
        #[arg(long, requires_all = ["r", "phi"])]
        arc: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        r: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        phi: Option<f64>,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

type Outcome = Result<i32, Failure>;

/// Settings after merging flags over the config file.
struct Ctx {
    cfg: RunConfig,
    bits: bool,
    unfolded: bool,
    out: Option<PathBuf>,
    seed: u64,
}

impl Ctx {
    fn spec(&self) -> Result<&TableSpec, Failure> {
        self.cfg
            .table
            .as_ref()
            .ok_or_else(|| Failure::new(2, "no table given: use --stadium, --mushroom or a config with [table]"))
    }

    fn table(&self) -> Result<Table, Failure> {
        self.spec()?.build().map_err(|e| Failure::new(2, e.to_string()))
    }

    fn eps(&self, table: &Table) -> f64 {
        self.cfg.eps.unwrap_or(table.eps())
    }

    fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("."))
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn context(cli: &Cli) -> Result<Ctx, Failure> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p).map_err(|e| Failure::new(2, e.to_string()))?,
        None => RunConfig::default(),
    };
    if let Some(v) = &cli.stadium {
        cfg.table = Some(TableSpec::Stadium { length: v[0], width: v[1] });
    }
    if let Some(v) = &cli.mushroom {
        cfg.table = Some(TableSpec::Mushroom { stalk: v[0], radius: v[1] });
    }
    if cli.eps.is_some() {
        cfg.eps = cli.eps;
    }
    if cli.n.is_some() {
        cfg.n = cli.n;
    }
    cfg.validate().map_err(|e| Failure::new(2, e.to_string()))?;
    let seed = match std::env::var(SEED_VAR) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::new(2, format!("{SEED_VAR} must be an unsigned integer, got {s:?}")))?,
        Err(_) => cfg.output.seed.unwrap_or(0),
    };
    let out = cli.out.clone().or_else(|| cfg.output.dir.clone());
    Ok(Ctx { cfg, bits: cli.bits, unfolded: cli.unfolded, out, seed })
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Outcome {
    let ctx = context(&cli)?;
    match cli.command {
        Command::Bound => bound(&ctx, out),
        Command::Realize { word } => realize(&ctx, &word.join(" "), out),
        Command::Verify => verify(&ctx, out),
        Command::Count { n_max, semistadium } => count(&ctx, n_max, semistadium, out),
        Command::Simulate { steps, arc, r, phi } => simulate(&ctx, steps, arc.zip(r).zip(phi), out),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|e| Failure::new(1, format!("cannot write output: {e}")))
}

/// Writes all files or none: each goes to a temporary file first, and the renames
/// happen only once every temporary file is complete.
fn write_files(dir: &Path, files: &[(&str, String)]) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::new(1, format!("cannot write to {}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut staged = Vec::with_capacity(files.len());
    for (name, body) in files {
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
        tmp.write_all(body.as_bytes()).map_err(io)?;
        tmp.flush().map_err(io)?;
        staged.push((tmp, dir.join(name)));
    }
    for (tmp, path) in staged {
        tmp.persist(&path).map_err(|e| io(e.error))?;
    }
    Ok(())
}

/// Restricts a certificate to alphabet bound `n` when that is below the computed one.
fn cap_alphabet(mut cert: EntropyCertificate, n: u32) -> EntropyCertificate {
    if !cert.certified || i64::from(n) >= cert.n {
        return cert;
    }
    cert.n = i64::from(n);
    cert.method = EntropyMethod::Eq0Root;
    if n == 0 {
        cert.chain.push("alphabet capped at N = 0: no bound".into());
        cert.certified = false;
        cert.bound = 0.0;
        cert.root = None;
        return cert;
    }
    let root = largest_root_eq0(n);
    cert.root = Some(root);
    cert.bound = root.ln() * if cert.class == TableClass::Semistadium { 0.5 } else { 1.0 };
    cert.chain.push(format!("alphabet capped at N = {n}: root = {root}, h >= {} nats", cert.bound));
    cert
}

fn bound(ctx: &Ctx, out: &mut dyn Write) -> Outcome {
    let spec = ctx.spec()?;
    let table = ctx.table()?;
    let cert = match ctx.cfg.eps {
        Some(eps) => entropy_lower_bound(table.ell(), eps, table.class()),
        None => certify_table(&table),
    }
    .map_err(|e| Failure::new(2, e.to_string()))?;
    let cert = match ctx.cfg.n {
        Some(n) => cap_alphabet(cert, n),
        None => cert,
    };
    let text = report::bound_report(&spec.describe(), &cert, ctx.bits);
    emit(out, &text)?;
    if let Some(dir) = &ctx.out {
        write_files(dir, &[("bound.txt", text)])?;
    }
    Ok(if cert.certified { 0 } else { 3 })
}

fn shooting_failure(e: ShootingError) -> Failure {
    let code = match e {
        ShootingError::Inadmissible(_) => 2,
        ShootingError::TargetUnreachable { .. } => 4,
        _ => 5,
    };
    Failure::new(code, e.to_string())
}

fn realize(ctx: &Ctx, text: &str, out: &mut dyn Write) -> Outcome {
    let table = ctx.table()?;
    let eps = ctx.eps(&table);
    let parsed = SymbolWord::parse(text, u32::MAX).map_err(|e| Failure::new(2, e.to_string()))?;
    if parsed.is_empty() {
        return Err(Failure::new(2, "empty word"));
    }
    let top = parsed.symbols().iter().map(|s| s.unsigned_abs()).max().unwrap_or(0);
    let word = SymbolWord::new(parsed.symbols().to_vec(), top).map_err(|e| Failure::new(2, e.to_string()))?;
    if !is_admissible(word.symbols(), top) {
        return Err(Failure::new(2, format!("word {word} is not admissible: nonzero symbols must continue their run")));
    }
    let n = max_symbol_bound(table.ell(), eps, table.class());
    if i64::from(top) > n {
        return Err(Failure::new(4, format!("symbol {top} exceeds the alphabet bound N = {n} of this table")));
    }
    let realized = realize_word(&table, &word, eps).map_err(shooting_failure)?;
    let coded =
        SymbolWord::new(realized.coded_word().to_vec(), word.bound()).map_err(|e| Failure::new(5, e.to_string()))?;
    let svg =
        if ctx.unfolded { svg::unfolded_svg(&table, &realized.orbit) } else { svg::orbit_svg(&table, &realized.orbit) };
    let files = [("orbit.csv", report::orbit_csv(&table, &realized.orbit)), ("orbit.svg", svg)];
    write_files(&ctx.out_dir(), &files)?;
    let blocks: Vec<String> = realized.blocks.iter().map(|b| b.to_string()).collect();
    let text = format!(
        "word: {word}\nN: {n}\neps: {}\nlevel differences: {}\ncollisions: {}\norbit code: {}\nre-encoded: {coded}\nwrote: orbit.csv orbit.svg\n",
        report::num(eps),
        blocks.join(" "),
        realized.orbit.len(),
        realized.code,
    );
    emit(out, &text)?;
    Ok(0)
}

fn verify(ctx: &Ctx, out: &mut dyn Write) -> Outcome {
    let table = ctx.table()?;
    let eps = ctx.eps(&table);
    let mut certs = Vec::new();
    for side in [crate::geometry::CapSide::Left, crate::geometry::CapSide::Right] {
        if table.flat_side() == Some(side) {
            continue;
        }
        let len = table.cap_curve(side).length();
        let ps = ctx.cfg.grid.position_step.unwrap_or(len / DEFAULT_POSITION_SAMPLES as f64);
        let ang = ctx.cfg.grid.angle_step.unwrap_or(eps / DEFAULT_ANGLE_SAMPLES as f64);
        certs.push(verify_arc_free(&table, side, eps, ps, ang));
    }
    let text = report::free_arc_report(&certs);
    emit(out, &text)?;
    if let Some(dir) = &ctx.out {
        write_files(dir, &[("verify.txt", text)])?;
    }
    Ok(if certs.iter().all(|c| c.passed()) { 0 } else { 3 })
}

fn count(ctx: &Ctx, n_max: usize, semistadium: bool, out: &mut dyn Write) -> Outcome {
    let table = match &ctx.cfg.table {
        Some(_) => Some(ctx.table()?),
        None => None,
    };
    let bound = match (ctx.cfg.n, &table) {
        (Some(n), _) => n,
        (None, Some(t)) => {
            let n = max_symbol_bound(t.ell(), ctx.eps(t), t.class());
            u32::try_from(n).map_err(|_| Failure::new(3, "the reach condition fails even for N = 0"))?
        }
        (None, None) => return Err(Failure::new(2, "count needs --n or a table")),
    };
    let class = if semistadium || table.as_ref().is_some_and(|t| t.class() == TableClass::Semistadium) {
        TableClass::Semistadium
    } else {
        TableClass::Full
    };
    let rows: Vec<_> = (1..=n_max).map(|n| (n, count_words(bound, n))).collect();
    let text = report::count_csv(&rows, class);
    emit(out, &text)?;
    if let Some(dir) = &ctx.out {
        write_files(dir, &[("count.csv", text)])?;
    }
    Ok(0)
}

fn simulate(ctx: &Ctx, steps: usize, start: Option<((String, f64), f64)>, out: &mut dyn Write) -> Outcome {
    let table = ctx.table()?;
    let eps = ctx.eps(&table);
    let start = match start {
        Some(((arc, r), phi)) => {
            let arc = ArcId::parse(&arc).ok_or_else(|| Failure::new(2, format!("unknown arc {arc:?}")))?;
            let len = table.curve(arc).length();
            if !(0.0..=len).contains(&r) || !(phi.abs() < std::f64::consts::FRAC_PI_2) {
                return Err(Failure::new(2, format!("start ({arc}, {r}, {phi}) outside [0, {len}] x (-pi/2, pi/2)")));
            }
            PhasePoint::new(arc, r, phi)
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
            let caps = table.curved_caps();
            let side = caps[rng.gen_range(0..caps.len())];
            let len = table.cap_curve(side).length();
            let r = rng.gen_range(0.05 * len..0.95 * len);
            let arg = rng.gen_range(-eps..eps);
            cap_launch(&table, side, r, arg).map_err(|e| Failure::new(2, e.to_string()))?
        }
    };
    let (orbit, stop) = trace_orbit(&table, start, steps);
    let svg = if ctx.unfolded { svg::unfolded_svg(&table, &orbit) } else { svg::orbit_svg(&table, &orbit) };
    write_files(&ctx.out_dir(), &[("orbit.csv", report::orbit_csv(&table, &orbit)), ("orbit.svg", svg)])?;
    let bound = max_symbol_bound(table.ell(), eps, table.class()).max(0) as u32;
    let code = match encode(&table, &orbit, bound.max(64)) {
        Ok(w) => w.to_string(),
        Err(e) => format!("unavailable ({e})"),
    };
    let text = format!(
        "seed: {}\nstart: {} {} {}\ncollisions: {}\nstopped: {}\ncode: {code}\nwrote: orbit.csv orbit.svg\n",
        ctx.seed,
        start.arc,
        report::num(start.r),
        report::num(start.phi),
        orbit.len() - 1,
        stop.map_or_else(|| "no".into(), |e| e.to_string()),
    );
    emit(out, &text)?;
    Ok(0)
}
