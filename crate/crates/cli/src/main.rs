//! `multipole`: scene files in, CSV reports and gnuplot scripts out.

mod plot;

use clap::{Args, Parser, Subcommand, ValueEnum};
use multipole::analysis::{self, ConvergenceReport, Norm};
use multipole::assembly::MemSystem;
use multipole::field::{self, GridSpec};
use multipole::presets::Preset;
use multipole::solver::{self, Backend};
use multipole::{selftest, Error, Scene};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Wavenumber used with `--preset` when no `-k` is given.
const DEFAULT_PRESET_K: f64 = 0.6;
/// From this wavenumber on, the far preset's error curve sits on the
/// round-off floor before it reaches the asymptotic regime.
const ROUNDOFF_FLOOR_K: f64 = 15.0;

#[derive(Parser)]
#[command(
    name = "multipole",
    version,
    about = "Multipole solver for 2D sound-soft multiple scattering"
)]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a scene and print the validation report.
    Validate {
        #[command(flatten)]
        scene: SceneArgs,
        /// Print the parsed scene back as JSON.
        #[arg(long)]
        echo: bool,
    },
    /// Solve at one truncation and write the coefficients (p,m,re,im).
    Solve {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(short = 'n', long, default_value_t = 20)]
        modes: usize,
        #[arg(long, default_value = "dense")]
        backend: Backend,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Convergence sweep: E(N), γ1(N), γ2(N) per wavenumber, plus a plot script.
    Sweep {
        #[command(flatten)]
        scene: SceneArgs,
        /// Truncation range, `A..B` inclusive, or a single N.
        #[arg(short = 'n', long, default_value = "1..25", value_parser = parse_range)]
        modes: ModeRange,
        #[arg(long, value_enum, default_value_t = NormArg::L0)]
        norm: NormArg,
        /// Add the measurable part of the first-order error as a column.
        #[arg(long)]
        first_order: bool,
        /// Run far-preset sweeps at k >= 15 anyway.
        #[arg(long)]
        allow_roundoff_floor: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// γ1/γ2 envelope tables without solving.
    Bounds {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(short = 'n', long, default_value = "0..25", value_parser = parse_range)]
        modes: ModeRange,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Total field on a grid (CSV plus plot script).
    Field {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(short = 'n', long, default_value_t = 20)]
        modes: usize,
        #[arg(long, default_value = "dense")]
        backend: Backend,
        /// Grid window `x0,x1,y0,y1`; defaults to the scene's bounding box
        /// plus twice the largest radius.
        #[arg(long, value_parser = parse_window)]
        window: Option<[f64; 4]>,
        /// Grid points per axis, `NX,NY`.
        #[arg(long, default_value = "200,200", value_parser = parse_counts)]
        resolution: (usize, usize),
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run the built-in oracle suites.
    Selftest,
}

#[derive(Args)]
struct SceneArgs {
    /// Scene file (JSON).
    #[arg(required_unless_present = "preset", conflicts_with = "preset")]
    scene: Option<PathBuf>,
    /// Built-in three-cylinder scene instead of a file.
    #[arg(long)]
    preset: Option<Preset>,
    /// Wavenumber override; repeat or comma-separate for several.
    #[arg(short = 'k', long = "wavenumber", value_delimiter = ',')]
    wavenumbers: Vec<f64>,
}

#[derive(Args)]
struct OutArgs {
    /// Output directory, created if missing.
    #[arg(short, long, default_value = "out")]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormArg {
    L0,
    Lhalf,
}

impl From<NormArg> for Norm {
    fn from(n: NormArg) -> Norm {
        match n {
            NormArg::L0 => Norm::L0,
            NormArg::Lhalf => Norm::LMinusHalf,
        }
    }
}

#[derive(Clone, Debug)]
struct ModeRange(Vec<usize>);

fn parse_range(s: &str) -> Result<ModeRange, String> {
    let bad = || format!("expected N or A..B, got {s:?}");
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (s, s),
    };
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(format!("range {s:?} is not ascending"));
    }
    Ok(ModeRange((a..=b).collect()))
}

fn parse_window(s: &str) -> Result<[f64; 4], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    match v[..] {
        [x0, x1, y0, y1] if x0 < x1 && y0 < y1 => Ok([x0, x1, y0, y1]),
        _ => Err(format!(
            "expected x0,x1,y0,y1 with x0 < x1 and y0 < y1, got {s:?}"
        )),
    }
}

fn parse_counts(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected NX,NY, got {s:?}"))?;
    let nx: usize = a.trim().parse().map_err(|_| format!("bad NX in {s:?}"))?;
    let ny: usize = b.trim().parse().map_err(|_| format!("bad NY in {s:?}"))?;
    if nx < 2 || ny < 2 {
        return Err("need at least 2 points per axis".into());
    }
    Ok((nx, ny))
}

/// Exit statuses: 1 validation, 2 numerical, 3 I/O.
#[derive(Debug)]
enum Failure {
    Invalid(String),
    Numerical(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Numerical(_) => 2,
            Failure::Io(_) => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Io(_) => Failure::Io(e.to_string()),
            Error::InvalidScene(_) | Error::Parse(_) | Error::Domain(_) => {
                Failure::Invalid(e.to_string())
            }
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

struct Loaded {
    id: String,
    /// One scene per requested wavenumber.
    scenes: Vec<Scene>,
    preset: Option<Preset>,
}

fn load(args: &SceneArgs) -> Result<Loaded, Failure> {
    let (id, base) = match (&args.scene, args.preset) {
        (_, Some(p)) => (p.name().to_string(), p.scene(DEFAULT_PRESET_K)),
        (Some(path), None) => {
            let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
            let id = path
                .file_stem()
                .map_or("scene".into(), |s| s.to_string_lossy().into_owned());
            (id, Scene::from_json(&text)?)
        }
        (None, None) => unreachable!("clap requires a scene or a preset"),
    };
    let scenes = if args.wavenumbers.is_empty() {
        vec![base]
    } else {
        args.wavenumbers
            .iter()
            .map(|&k| base.with_wavenumber(k))
            .collect()
    };
    Ok(Loaded {
        id,
        scenes,
        preset: args.preset,
    })
}

/// Hard violations fail; warnings go to stderr.
fn checked(scene: &Scene) -> Result<(), Failure> {
    let report = scene.validate();
    for w in &report.warnings {
        eprintln!("warning (k = {}): {w}", scene.wavenumber);
    }
    if report.is_ok() {
        Ok(())
    } else {
        Err(Failure::Invalid(format!(
            "k = {}: {}",
            scene.wavenumber,
            report.to_string().trim_end()
        )))
    }
}

fn out_dir(args: &OutArgs) -> Result<&Path, Failure> {
    fs::create_dir_all(&args.out).map_err(|e| io_error(&args.out, e))?;
    Ok(&args.out)
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| io_error(path, e))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn stem(id: &str, k: f64) -> String {
    format!("{id}_k{k}")
}

fn validate(args: &SceneArgs, echo: bool) -> Result<(), Failure> {
    let loaded = load(args)?;
    let mut failed = false;
    for s in &loaded.scenes {
        let report = s.validate();
        failed |= !report.is_ok();
        // with --echo stdout carries only the scene, so it can be re-parsed
        if echo {
            eprint!("{} k = {}: {report}", loaded.id, s.wavenumber);
            println!("{}", s.to_json());
        } else {
            print!("{} k = {}: {report}", loaded.id, s.wavenumber);
        }
    }
    if failed {
        return Err(Failure::Invalid("scene has violations".into()));
    }
    Ok(())
}

fn solve_one(scene: &Scene, n: usize, backend: Backend) -> Result<solver::SolveResult, Failure> {
    checked(scene)?;
    let system = MemSystem::assemble(scene, n)?;
    let result = solver::solve(&system, backend)?;
    eprintln!(
        "k = {}, N = {n}, {backend}: {} iterations, relative residual {:.3e}",
        scene.wavenumber,
        result.iterations,
        result.relative_residual(&system)
    );
    if result.diverged {
        return Err(Failure::Numerical(format!(
            "{backend} diverged after {} iterations",
            result.iterations
        )));
    }
    if !result.converged {
        return Err(Failure::Numerical(format!(
            "{backend} did not converge in {} iterations",
            result.iterations
        )));
    }
    Ok(result)
}

fn solve(args: &SceneArgs, n: usize, backend: Backend, out: &OutArgs) -> Result<(), Failure> {
    let loaded = load(args)?;
    let dir = out_dir(out)?;
    for s in &loaded.scenes {
        let result = solve_one(s, n, backend)?;
        let mut csv = String::from("p,m,re,im\n");
        for (p, m, v) in result.solution.iter() {
            writeln!(csv, "{p},{m},{:.17e},{:.17e}", v.re, v.im).unwrap();
        }
        write(
            &dir.join(format!(
                "{}_N{n}_coefficients.csv",
                stem(&loaded.id, s.wavenumber)
            )),
            &csv,
        )?;
    }
    Ok(())
}

fn print_rates(report: &ConvergenceReport) {
    let show = |name: &str, fit: &Option<analysis::RateFit>| match fit {
        Some(f) => println!(
            "  {name:<12} slope {:+.4} over N = {}..{} (R² {:.4})",
            f.slope, f.first_n, f.last_n, f.r_squared
        ),
        None => println!("  {name:<12} no fit (too few points in the fit window)"),
    };
    println!("{} k = {}:", report.scene_id, report.wavenumber);
    show("E", &report.rates.e);
    show("gamma1", &report.rates.gamma1);
    show("gamma2", &report.rates.gamma2);
    if report.e1_surrogate.is_some() {
        show("E1", &report.rates.e1_surrogate);
    }
}

fn sweep(
    args: &SceneArgs,
    modes: &ModeRange,
    norm: Norm,
    first_order: bool,
    allow_floor: bool,
    out: &OutArgs,
) -> Result<(), Failure> {
    let loaded = load(args)?;
    if loaded.preset == Some(Preset::Far) {
        if let Some(s) = loaded
            .scenes
            .iter()
            .find(|s| s.wavenumber >= ROUNDOFF_FLOOR_K)
        {
            if !allow_floor {
                return Err(Failure::Invalid(format!(
                    "far preset at k = {}: E(N) reaches the round-off floor before the asymptotic regime, \
                     so the fitted rates are meaningless; pass --allow-roundoff-floor to run it anyway",
                    s.wavenumber
                )));
            }
            eprintln!("warning: far preset at k >= {ROUNDOFF_FLOOR_K}: expect the error curve to flatten at round-off");
        }
    }
    let dir = out_dir(out)?;
    for s in &loaded.scenes {
        checked(s)?;
        let mut report = if first_order {
            analysis::first_order_error_sweep(s, &modes.0, norm)?
        } else {
            analysis::convergence_sweep(s, &modes.0, norm)?
        };
        report.scene_id = loaded.id.clone();
        print_rates(&report);
        let name = stem(&loaded.id, s.wavenumber);
        write(&dir.join(format!("{name}.csv")), &report.to_csv())?;
        write(
            &dir.join(format!("{name}.gp")),
            &plot::sweep_script(&name, &report),
        )?;
    }
    Ok(())
}

fn bounds(args: &SceneArgs, modes: &ModeRange, out: &OutArgs) -> Result<(), Failure> {
    let loaded = load(args)?;
    let dir = out_dir(out)?;
    // the envelopes are purely geometric, so one table covers every k
    let s = &loaded.scenes[0];
    checked(s)?;
    let geom = s.geometry();
    let bases = analysis::gamma_bases(s, &geom);
    println!(
        "{}: gamma1 base {:.6}, gamma2 base {:.6}",
        loaded.id, bases.gamma1, bases.gamma2
    );
    if s.len() >= 2 {
        let b = analysis::breakdown_check(s, &geom)?;
        println!(
            "  gap between cylinders {} and {}: {:.4} (threshold {:.4}): {:?}",
            b.largest, b.mid, b.gap, b.threshold, b.classification
        );
    }
    let mut csv = String::from("N,gamma1,gamma2\n");
    for &n in &modes.0 {
        writeln!(
            csv,
            "{n},{:.17e},{:.17e}",
            analysis::gamma1(s, &geom, n),
            analysis::gamma2(s, &geom, n)
        )
        .unwrap();
    }
    write(&dir.join(format!("{}_bounds.csv", loaded.id)), &csv)
}

fn default_window(s: &Scene) -> [f64; 4] {
    let pad = 2.0 * s.max_radius();
    let mut w = [
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    ];
    for c in &s.cylinders {
        w[0] = w[0].min(c.center.0 - c.radius - pad);
        w[1] = w[1].max(c.center.0 + c.radius + pad);
        w[2] = w[2].min(c.center.1 - c.radius - pad);
        w[3] = w[3].max(c.center.1 + c.radius + pad);
    }
    w
}

fn field_cmd(
    args: &SceneArgs,
    n: usize,
    backend: Backend,
    window: Option<[f64; 4]>,
    counts: (usize, usize),
    out: &OutArgs,
) -> Result<(), Failure> {
    let loaded = load(args)?;
    let dir = out_dir(out)?;
    for s in &loaded.scenes {
        let result = solve_one(s, n, backend)?;
        let [x0, x1, y0, y1] = window.unwrap_or_else(|| default_window(s));
        let grid = GridSpec::covering((x0, x1), (y0, y1), counts);
        let samples = field::total_field_grid(s, &result.solution, &grid)?;
        let name = format!("{}_field", stem(&loaded.id, s.wavenumber));
        write(&dir.join(format!("{name}.csv")), &field::grid_csv(&samples))?;
        write(&dir.join(format!("{name}.gp")), &plot::field_script(&name))?;
    }
    Ok(())
}

fn run_selftest() -> Result<(), Failure> {
    let checks = selftest::run_all();
    for c in &checks {
        println!("{c}");
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    println!(
        "{} of {} checks passed",
        checks.len() - failed,
        checks.len()
    );
    if failed > 0 {
        return Err(Failure::Numerical(format!(
            "{failed} selftest checks failed"
        )));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Validate { scene, echo } => validate(&scene, echo),
        Command::Solve {
            scene,
            modes,
            backend,
            out,
        } => solve(&scene, modes, backend, &out),
        Command::Sweep {
            scene,
            modes,
            norm,
            first_order,
            allow_roundoff_floor,
            out,
        } => sweep(
            &scene,
            &modes,
            norm.into(),
            first_order,
            allow_roundoff_floor,
            &out,
        ),
        Command::Bounds { scene, modes, out } => bounds(&scene, &modes, &out),
        Command::Field {
            scene,
            modes,
            backend,
            window,
            resolution,
            out,
        } => field_cmd(&scene, modes, backend, window, resolution, &out),
        Command::Selftest => run_selftest(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: cannot configure {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Invalid(msg) | Failure::Numerical(msg) | Failure::Io(msg)) = &f;
            eprintln!("error: {msg}");
            ExitCode::from(f.code())
        }
    }
}
