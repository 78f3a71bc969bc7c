//! `cartan-git`: runs named scenarios, checks their invariants, writes JSON
//! reports and CSV curves. Exit code 0 when every check passes, 1 when some
//! check fails, 2 on invalid input.

mod report;
mod scenarios;
mod target;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Parser, Subcommand};
use serde_json::Value;

use report::Report;
use scenarios::*;

#[derive(Parser, Debug)]
#[command(name = "cartan-git", version, about = "Momentum maps, Kempf-Ness functions and Futaki characters at desk scale")]
pub struct Cli {
    /// Directory receiving reports and CSV artifacts
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Seed for every random draw in the run
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Overrides the tolerance of the scenario's primary check
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Worker threads for `all`
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the scenario registry
    List,
    /// Run every scenario with its defaults
    All,
    /// Momentum relation, cocycle and a-equivariance on random samples
    Certify(CertifyArgs),
    /// Constancy of the generalized Futaki invariant over the bundle
    FutakiConstancy(FutakiConstancyArgs),
    /// The Futaki invariant vanishes on stabilizer brackets
    FutakiCharacter(FutakiCharacterArgs),
    /// Kempf-Ness function along a ray: closed form, derivative, convexity (CSV t,psi,dpsi,d2psi)
    KnProfile(KnProfileArgs),
    /// Asymptotic slope of a ray against the top weight on the support
    Slope(SlopeArgs),
    /// Stability label and witness, checked against Hilbert-Mumford for tori
    Stability(StabilityArgs),
    /// Momentum zeros from random starts and their uniqueness modulo the stabilizer
    Descend(DescendArgs),
    /// Solves the extremal equation on the stabilizer
    Extremal(ExtremalArgs),
    /// Scalar curvature and Futaki invariant of a toric metric on CP1 (CSV x,s,u2,S)
    Cp1Futaki(Cp1FutakiArgs),
    /// K-energy as a path integral against the closed formula
    Cp1Kenergy(Cp1KenergyArgs),
    /// Toric geodesics: equation residual order and K-energy convexity (CSV t,E)
    Cp1Geodesic(Cp1GeodesicArgs),
    /// Newton descent of the K-energy (CSV iter,E,sup_defect)
    Cp1Descend(Cp1DescendArgs),
    /// Geodesics of densities on the circle (CSV t,node,rho)
    DensityGeodesic(DensityGeodesicArgs),
}

/// Why a run stopped early.
#[derive(Debug)]
pub enum Failure {
    /// Bad input; exit code 2.
    Usage(String),
    /// A computation failed after validation; recorded as a failed check.
    Run(String),
}

impl Failure {
    pub fn usage(e: cartan_git::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<cartan_git::Error> for Failure {
    fn from(e: cartan_git::Error) -> Self {
        Failure::Run(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Run(format!("io: {}", e))
    }
}

/// Run-wide settings shared by every scenario.
pub struct Ctx<'a> {
    pub out: &'a Path,
    pub seed: u64,
    pub tol: Option<f64>,
}

impl Ctx<'_> {
    /// The primary tolerance, unless `--tol` overrides it.
    pub fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

pub struct Entry {
    pub name: &'static str,
    pub anchor: &'static str,
    pub about: &'static str,
}

pub const REGISTRY: &[Entry] = &[
    Entry { name: "certify", anchor: "momentum map and a-equivariance of the Calabi operator", about: "defining relation, cocycle and a-equivariance on random samples" },
    Entry { name: "futaki-constancy", anchor: "constancy of the generalized Futaki invariant", about: "F(zeta) sampled over the bundle is constant" },
    Entry { name: "futaki-character", anchor: "the Futaki invariant is a character", about: "F vanishes on brackets of the stabilizer" },
    Entry { name: "kn-profile", anchor: "Kempf-Ness function and its derivative", about: "Psi along a geodesic ray, closed form and convexity" },
    Entry { name: "slope", anchor: "slope of a geodesic ray", about: "asymptotic slope of Psi against the weight oracle" },
    Entry { name: "stability", anchor: "stability via slopes", about: "stable/semistable/unstable against Hilbert-Mumford" },
    Entry { name: "descend", anchor: "zeros of the momentum map are unique modulo the stabilizer", about: "descent to momentum zeros from two starts" },
    Entry { name: "extremal", anchor: "extremal elements", about: "solves the extremal equation on the stabilizer" },
    Entry { name: "cp1-futaki", anchor: "Futaki integral on CP1", about: "scalar curvature and Futaki invariant of a toric metric" },
    Entry { name: "cp1-kenergy", anchor: "K-energy as a Kempf-Ness functional; Chen-Tian formula", about: "path integral against the closed formula" },
    Entry { name: "cp1-geodesic", anchor: "toric geodesics and convexity of the K-energy", about: "geodesic equation residual and K-energy convexity" },
    Entry { name: "cp1-descend", anchor: "K-energy descent to constant scalar curvature", about: "Newton descent of the K-energy" },
    Entry { name: "density-geodesic", anchor: "Cartan geodesics of densities on the circle", about: "mass, continuity equation and convergence order" },
];

fn params<T: serde::Serialize>(ctx: &Ctx, args: &T) -> BTreeMap<String, Value> {
    let mut p = match serde_json::to_value(args) {
        Ok(Value::Object(m)) => m.into_iter().collect(),
        _ => BTreeMap::new(),
    };
    p.insert("seed".into(), Value::from(ctx.seed));
    p.insert("tol".into(), ctx.tol.map_or(Value::Null, Value::from));
    p
}

type Body<'a, T> = fn(&Ctx<'a>, &T, &mut Report) -> Result<(), Failure>;

/// Runs one scenario; `Err` carries a usage error.
fn execute<'a, T: serde::Serialize>(name: &str, ctx: &Ctx<'a>, args: &T, body: Body<'a, T>) -> Result<Report, String> {
    let mut report = Report::new(name, params(ctx, args));
    match body(ctx, args, &mut report) {
        Ok(()) => {}
        Err(Failure::Usage(m)) => return Err(m),
        Err(Failure::Run(m)) => {
            report.holds("pipeline completed", "run", false);
            report.result("error", Value::String(m));
        }
    }
    report.write(ctx.out).map_err(|e| format!("cannot write report: {}", e))?;
    Ok(report)
}

fn dispatch(ctx: &Ctx, command: &Command) -> Result<Report, String> {
    match command {
        Command::Certify(a) => execute("certify", ctx, a, certify),
        Command::FutakiConstancy(a) => execute("futaki-constancy", ctx, a, futaki_constancy),
        Command::FutakiCharacter(a) => execute("futaki-character", ctx, a, futaki_character),
        Command::KnProfile(a) => execute("kn-profile", ctx, a, kn_profile),
        Command::Slope(a) => execute("slope", ctx, a, slope),
        Command::Stability(a) => execute("stability", ctx, a, stability),
        Command::Descend(a) => execute("descend", ctx, a, descend),
        Command::Extremal(a) => execute("extremal", ctx, a, extremal),
        Command::Cp1Futaki(a) => execute("cp1-futaki", ctx, a, cp1_futaki),
        Command::Cp1Kenergy(a) => execute("cp1-kenergy", ctx, a, cp1_kenergy),
        Command::Cp1Geodesic(a) => execute("cp1-geodesic", ctx, a, cp1_geodesic),
        Command::Cp1Descend(a) => execute("cp1-descend", ctx, a, cp1_descend),
        Command::DensityGeodesic(a) => execute("density-geodesic", ctx, a, density_geodesic),
        Command::List | Command::All => Err("not a scenario".into()),
    }
}

fn list() -> String {
    let mut s = format!("{:<18} {:<60} {}\n", "scenario", "anchor", "description");
    for e in REGISTRY {
        s.push_str(&format!("{:<18} {:<60} {}\n", e.name, e.anchor, e.about));
    }
    s
}

/// Every registered scenario with default arguments, in registry order.
fn run_all(ctx: &Ctx, jobs: usize) -> Result<Vec<Report>, String> {
    let commands: Vec<Command> = REGISTRY
        .iter()
        .map(|e| {
            Cli::try_parse_from(["cartan-git", e.name])
                .map(|c| c.command)
                .map_err(|err| format!("default arguments for {}: {}", e.name, err))
        })
        .collect::<Result<_, _>>()?;
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<Report, String>>>> = Mutex::new((0..commands.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..jobs.clamp(1, commands.len()) {
            scope.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::SeqCst);
                if k >= commands.len() {
                    break;
                }
                let r = dispatch(ctx, &commands[k]);
                slots.lock().expect("no worker panics while holding the lock")[k] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .expect("workers finished")
        .into_iter()
        .map(|r| r.expect("every scenario ran"))
        .collect()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(t) = cli.tol {
        if !(t > 0.0 && t.is_finite()) {
            eprintln!("error: --tol must be a positive finite number");
            return ExitCode::from(2);
        }
    }
    if cli.jobs == 0 {
        eprintln!("error: --jobs must be at least 1");
        return ExitCode::from(2);
    }
    let ctx = Ctx { out: &cli.out, seed: cli.seed, tol: cli.tol };
    let reports = match &cli.command {
        Command::List => {
            print!("{}", list());
            return ExitCode::SUCCESS;
        }
        Command::All => run_all(&ctx, cli.jobs),
        other => dispatch(&ctx, other).map(|r| vec![r]),
    };
    match reports {
        Err(m) => {
            eprintln!("error: {}", m);
            ExitCode::from(2)
        }
        Ok(rs) => {
            for r in &rs {
                print!("{}", r.summary());
            }
            if rs.iter().all(Report::passed) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
