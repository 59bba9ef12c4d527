use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tangent_chains::incidence::{Branch, CheckOptions, LocusProblem};
use tangent_chains::scene::{self, Check, CheckSpec, CircleSpec, RunReport, SceneConfig};
use tangent_chains::svg::write_svg;
use tangent_chains::{Error, Point};

/// Builds Pappus and Steiner chain configurations and checks their
/// incidence statements numerically.
#[derive(Debug, Parser)]
#[command(name = "chains", version)]
struct Cli {
    /// Replaces the point and angle tolerances of every check.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Also write the run report here.
    #[arg(long, global = true)]
    json_out: Option<PathBuf>,
    /// Draw the scene into this SVG file.
    #[arg(long, global = true)]
    svg_out: Option<PathBuf>,
    /// Seed for randomly drawn problems.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run checks and print a JSON report.
    Verify {
        #[command(subcommand)]
        target: VerifyTarget,
    },
    /// Draw a scene file or a built-in scene as SVG.
    Render(SceneSource),
    /// Print a built-in scene as JSON.
    Fixture { name: String },
    /// Check that inverted chord circles have their centers on a conic.
    Locus(LocusArgs),
}

#[derive(Debug, Subcommand)]
enum VerifyTarget {
    /// A Pappus chain between two internally tangent circles.
    Pappus {
        /// Outer parent as `cx,cy,r`.
        #[arg(long, value_parser = parse_circle)]
        outer: CircleSpec,
        /// Inner parent as `cx,cy,r`.
        #[arg(long, value_parser = parse_circle)]
        inner: CircleSpec,
        #[arg(short = 'n', long, default_value_t = 12)]
        count: usize,
        /// Run every chain check, not only concurrency.
        #[arg(long)]
        all: bool,
    },
    /// The transplanted Steiner pair, expected to violate the mirrored
    /// pair statements.
    Counterexample {
        #[arg(long, default_value_t = 6)]
        n: usize,
        /// Center of the inversion circle as `x,y`.
        #[arg(long, value_parser = parse_point)]
        omega: Point,
        #[arg(long, default_value_t = 3.0)]
        outer_radius: f64,
    },
    /// A scene file.
    Scene { path: PathBuf },
    /// A built-in scene.
    Fixture { name: String },
}

#[derive(Debug, Args)]
struct SceneSource {
    /// Scene file.
    path: Option<PathBuf>,
    /// Built-in scene name instead of a file.
    #[arg(long, conflicts_with = "path")]
    fixture: Option<String>,
}

#[derive(Debug, Args)]
struct LocusArgs {
    /// Length of the chord each circle cuts from the unit circle.
    #[arg(long, default_value_t = 1.0)]
    chord: f64,
    /// Circle centers lie on the line `x = offset`.
    #[arg(long, default_value_t = 2.0)]
    offset: f64,
    /// Inversion circle as `cx,cy,r`.
    #[arg(long, value_parser = parse_circle)]
    omega: Option<CircleSpec>,
    /// Take the smaller of the two circles about each center.
    #[arg(long)]
    minus: bool,
    /// Number of sample centers tested against the fitted conic.
    #[arg(long, default_value_t = 100)]
    holdout: usize,
    /// Samples span `-y_extent..y_extent` along the line.
    #[arg(long, default_value_t = 3.0)]
    y_extent: f64,
    /// Draw this many problems at random from `--seed` instead.
    #[arg(long)]
    random: Option<usize>,
}

fn parse_numbers<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != N {
        return Err(format!("expected {N} comma-separated numbers, got `{s}`"));
    }
    let mut out = [0.0; N];
    for (slot, part) in out.iter_mut().zip(parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| format!("`{part}` is not a number"))?;
    }
    Ok(out)
}

fn parse_circle(s: &str) -> Result<CircleSpec, String> {
    let [x, y, r] = parse_numbers::<3>(s)?;
    Ok(CircleSpec::new(x, y, r))
}

fn parse_point(s: &str) -> Result<Point, String> {
    let [x, y] = parse_numbers::<2>(s)?;
    Ok(Point::new(x, y))
}

/// Exit status for configuration and input problems.
const CONFIG_ERROR: u8 = 2;

fn load(path: &Path) -> Result<SceneConfig, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Scene(format!("cannot read `{}`: {e}", path.display())))?;
    SceneConfig::from_json(&text)
}

fn random_problems(count: usize, seed: u64) -> Vec<LocusProblem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| LocusProblem {
            chord: rng.random_range(0.2..1.8),
            offset: rng.random_range(1.2..3.0),
            omega_center: Point::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)),
            omega_radius: rng.random_range(0.5..2.0),
            branch: if rng.random_bool(0.5) {
                Branch::Plus
            } else {
                Branch::Minus
            },
        })
        .collect()
}

fn locus_scene(args: &LocusArgs, seed: u64) -> SceneConfig {
    let problems = match args.random {
        Some(count) => random_problems(count, seed),
        None => {
            let omega = args.omega.unwrap_or(CircleSpec::new(0.0, 3.0, 1.0));
            vec![LocusProblem {
                chord: args.chord,
                offset: args.offset,
                omega_center: Point::new(omega.center[0], omega.center[1]),
                omega_radius: omega.radius,
                branch: if args.minus {
                    Branch::Minus
                } else {
                    Branch::Plus
                },
            }]
        }
    };
    SceneConfig {
        checks: problems
            .into_iter()
            .map(|problem| {
                CheckSpec::new(Check::Locus {
                    problem,
                    holdout: args.holdout,
                    y_range: (-args.y_extent, args.y_extent),
                })
            })
            .collect(),
        ..SceneConfig::default()
    }
}

fn summarize(report: &RunReport) {
    for c in &report.checks {
        let status = if c.ok { "PASS" } else { "FAIL" };
        let detail = match (&c.report, &c.error) {
            (_, Some(e)) => format!("error: {e}"),
            (Some(r), None) => format!(
                "max residual {:.3e}{}",
                r.max_residual,
                if c.expect_fail {
                    " (expected to fail)"
                } else {
                    ""
                }
            ),
            (None, None) => String::new(),
        };
        eprintln!("{status} {} {detail}", c.name);
    }
    let passed = report.checks.iter().filter(|c| c.ok).count();
    eprintln!("{passed}/{} checks ok", report.checks.len());
}

fn run_scene(cli: &Cli, scene: &SceneConfig, print_report: bool) -> Result<bool, Error> {
    let mut opts = CheckOptions::default();
    if let Some(t) = cli.tol {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::Scene(format!("--tol must be positive, got {t}")));
        }
        opts.point_tol = t;
        opts.angle_tol = t;
    }
    let (built, report) = scene.execute(&opts)?;
    let json = report.to_json();
    if let Some(path) = &cli.json_out {
        std::fs::write(path, format!("{json}\n"))
            .map_err(|e| Error::UnwritablePath(format!("{}: {e}", path.display())))?;
    }
    let svg_target = cli.svg_out.as_deref();
    if print_report {
        emit(&format!("{json}\n"));
    }
    if let Some(path) = svg_target {
        write_svg(path, &scene.render_svg(&built, &report.checks)?)?;
    } else if !print_report {
        emit(&scene.render_svg(&built, &report.checks)?);
    }
    summarize(&report);
    Ok(report.overall)
}

fn scene_from(source: &SceneSource) -> Result<SceneConfig, Error> {
    match (&source.path, &source.fixture) {
        (Some(p), _) => load(p),
        (None, Some(name)) => scene::fixture(name),
        (None, None) => Err(Error::Scene("give a scene file or --fixture".into())),
    }
}

fn run(cli: &Cli) -> Result<bool, Error> {
    match &cli.command {
        Command::Verify { target } => {
            let scene = match target {
                VerifyTarget::Pappus {
                    outer,
                    inner,
                    count,
                    all,
                } => {
                    let mut s = scene::pappus_scene(*outer, *inner, *count);
                    if !all {
                        s.checks.truncate(1);
                    }
                    s
                }
                VerifyTarget::Counterexample {
                    n,
                    omega,
                    outer_radius,
                } => scene::counterexample_scene(*n, *outer_radius, *omega),
                VerifyTarget::Scene { path } => load(path)?,
                VerifyTarget::Fixture { name } => scene::fixture(name)?,
            };
            run_scene(cli, &scene, true)
        }
        Command::Render(source) => run_scene(cli, &scene_from(source)?, false),
        Command::Fixture { name } => {
            emit(&format!("{}\n", scene::fixture(name)?.to_json()));
            Ok(true)
        }
        Command::Locus(args) => run_scene(cli, &locus_scene(args, cli.seed), true),
    }
}

/// Writes to stdout, ignoring a reader that has gone away.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(CONFIG_ERROR)
        }
    }
}
