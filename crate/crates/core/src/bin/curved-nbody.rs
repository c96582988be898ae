use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use curved_nbody::conditions::{self, PhiParams, SolutionClassTag};
use curved_nbody::dynamics::{integrate_with, IntegrateOptions, Termination};
use curved_nbody::families::{self, FamilyShape, FamilySpec};
use curved_nbody::geom::{self, CurvatureRadius, PlanePoint};
use curved_nbody::io as fio;
use curved_nbody::mobius::{self, MobiusMatrix, SubgroupKind};
use curved_nbody::verify;
use curved_nbody::{Complex64, Error, Result};

#[derive(Parser)]
#[command(name = "curved-nbody", version, about = "Möbius-invariant n-body motions on the sphere M²_R")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a Möbius transformation given as a b c d (re im pairs).
    #[command(allow_negative_numbers = true)]
    ClassifyMatrix {
        #[arg(num_args = 8, value_names = ["A_RE", "A_IM", "B_RE", "B_IM", "C_RE", "C_IM", "D_RE", "D_IM"])]
        entries: Vec<f64>,
        #[arg(long, default_value_t = mobius::TRACE_TOL)]
        tol: f64,
    },
    /// Build family configurations or solve their scalar equations.
    #[command(subcommand)]
    Family(FamilyCommand),
    /// Integrate a configuration; CSV trajectory plus a JSON summary.
    Integrate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Evenly spaced output samples (default: every accepted step).
        #[arg(long)]
        samples: Option<usize>,
        /// CSV destination (default: stdout).
        #[arg(long)]
        output: Option<PathBuf>,
        /// Summary destination (default: stderr).
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Residual of a class's condition system for a configuration.
    Verify {
        #[arg(long)]
        class: Class,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Orbit-invariance and residual-drift report for a trajectory.
    VerifyTrajectory {
        #[arg(long)]
        class: Class,
        /// Configuration JSON with the masses and R.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        trajectory: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Sample the orbit of a point under a one-parameter family.
    #[command(allow_negative_numbers = true)]
    OrbitSample {
        #[arg(long)]
        kind: OrbitKind,
        #[arg(long, num_args = 2, value_names = ["RE", "IM"])]
        z: Vec<f64>,
        #[arg(long)]
        t_end: f64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// r₀ for the homographic scaling φ.
        #[arg(long)]
        r0: Option<f64>,
        #[arg(long = "R", default_value_t = 1.0)]
        radius: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Geodesic distance between two points.
    #[command(allow_negative_numbers = true)]
    Distance {
        #[arg(long = "R")]
        radius: f64,
        #[arg(long, num_args = 2, value_names = ["RE", "IM"])]
        z1: Vec<f64>,
        #[arg(long, num_args = 2, value_names = ["RE", "IM"])]
        z2: Vec<f64>,
    },
}

#[derive(Subcommand)]
enum FamilyCommand {
    /// Emit the configuration JSON of a family member.
    Build(FamilyArgs),
    /// Solve the family's scalar equation (α roots or antipodal mass).
    Solve(FamilyArgs),
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long)]
    class: Class,
    #[arg(long)]
    shape: Shape,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    m: Option<f64>,
    #[arg(long = "M")]
    big_m: Option<f64>,
    #[arg(long = "R")]
    radius: f64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Class {
    Elliptic,
    Hyperbolic,
    Parabolic,
    AsymptoticLoxodromic,
    HomographicLoxodromic,
    TotallyGeodesic,
}

impl From<Class> for SolutionClassTag {
    fn from(c: Class) -> Self {
        match c {
            Class::Elliptic => SolutionClassTag::MobiusElliptic,
            Class::Hyperbolic => SolutionClassTag::MobiusHyperbolic,
            Class::Parabolic => SolutionClassTag::MobiusParabolic,
            Class::AsymptoticLoxodromic => SolutionClassTag::AsymptoticLoxodromic,
            Class::HomographicLoxodromic => SolutionClassTag::HomographicLoxodromic,
            Class::TotallyGeodesic => SolutionClassTag::TotallyGeodesic,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Shape {
    TwoBody,
    Eulerian,
    Equilateral,
    ParabolicCenter,
}

impl From<Shape> for FamilyShape {
    fn from(s: Shape) -> Self {
        match s {
            Shape::TwoBody => FamilyShape::TwoBodyAntipodal,
            Shape::Eulerian => FamilyShape::ThreeBodyEulerian,
            Shape::Equilateral => FamilyShape::ThreeBodyEquilateral,
            Shape::ParabolicCenter => FamilyShape::ThreeBodyParabolicWithCenter,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OrbitKind {
    Elliptic,
    Hyperbolic,
    Parabolic,
    AsymptoticLoxodromic,
    AsymptoticFlow,
    HomographicLoxodromic,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_usage() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn sink(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn emit(path: &Option<PathBuf>, v: &Value) -> Result<()> {
    let mut w = sink(path)?;
    serde_json::to_writer_pretty(&mut w, v)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn read_config(path: &PathBuf) -> Result<curved_nbody::dynamics::Configuration> {
    let f = File::open(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    fio::read_config(BufReader::new(f))
}

fn pair(v: &[f64]) -> Complex64 {
    Complex64::new(v[0], v[1])
}

fn run(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::ClassifyMatrix { entries, tol } => {
            let e = &entries;
            let m = MobiusMatrix::new(pair(&e[0..2]), pair(&e[2..4]), pair(&e[4..6]), pair(&e[6..8]))?;
            let fixed = match m.fixed_points() {
                Ok(set) => Value::Array(set.points().into_iter().map(fio::plane_point_json).collect()),
                Err(Error::IdentityTransformation) => Value::String("all".into()),
                Err(e) => return Err(e),
            };
            emit(&None, &json!({ "class": m.classify_with(tol), "fixed_points": fixed }))?;
        }
        Command::Family(FamilyCommand::Build(a)) => {
            let spec = spec_from(&a)?;
            let cfg = families::build_family(&spec)?;
            let mut w = sink(&a.output)?;
            writeln!(w, "{}", fio::config_to_string(&cfg)?)?;
            w.flush()?;
        }
        Command::Family(FamilyCommand::Solve(a)) => {
            let spec = spec_from(&a)?;
            emit(&a.output, &solve(&spec)?)?;
        }
        Command::Integrate {
            input,
            t_end,
            tol,
            samples,
            output,
            summary,
        } => {
            if !(tol > 0.0) || !(t_end >= 0.0) {
                return Err(Error::Parse("--tol must be positive and --t-end non-negative".into()));
            }
            let cfg = read_config(&input)?;
            let mut opts = IntegrateOptions::new(t_end, tol);
            opts.samples = samples;
            let traj = integrate_with(&cfg, &opts);
            let mut w = sink(&output)?;
            fio::write_trajectory_csv(&traj, &mut w)?;
            w.flush()?;
            let report = json!({
                "termination": traj.termination,
                "samples": traj.len(),
                "t_final": traj.last().t,
                "max_energy_drift": traj.max_energy_drift(),
                "steps": traj.stats,
            });
            match &summary {
                Some(_) => emit(&summary, &report)?,
                None => eprintln!("{}", serde_json::to_string_pretty(&report)?),
            }
            if !matches!(traj.termination, Termination::Completed) {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Verify { class, input, output } => {
            let cfg = read_config(&input)?;
            let rep = conditions::residual(class.into(), &cfg);
            emit(&output, &serde_json::to_value(rep)?)?;
        }
        Command::VerifyTrajectory {
            class,
            input,
            trajectory,
            output,
        } => {
            let cfg = read_config(&input)?;
            let f = File::open(&trajectory).map_err(|e| Error::Parse(format!("{}: {e}", trajectory.display())))?;
            let traj = fio::read_trajectory_csv(BufReader::new(f), &cfg)?;
            let tag: SolutionClassTag = class.into();
            let inv = verify::check_orbit_invariance(&traj, tag)?;
            let drift = verify::residual_drift(&traj, tag);
            emit(&output, &json!({ "invariance": inv, "drift": drift }))?;
        }
        Command::OrbitSample {
            kind,
            z,
            t_end,
            samples,
            r0,
            radius,
            output,
        } => {
            let radius = CurvatureRadius::new(radius)?;
            let kind = match kind {
                OrbitKind::Elliptic => SubgroupKind::EllipticG,
                OrbitKind::Hyperbolic => SubgroupKind::HyperbolicG,
                OrbitKind::Parabolic => SubgroupKind::ParabolicG,
                OrbitKind::AsymptoticLoxodromic => SubgroupKind::AsymptoticLox,
                OrbitKind::AsymptoticFlow => SubgroupKind::AsymptoticLoxFlow,
                OrbitKind::HomographicLoxodromic => {
                    let r0 = r0.ok_or_else(|| Error::Parse("homographic orbits need --r0".into()))?;
                    let p = PhiParams::printed_slope(r0, radius)?;
                    SubgroupKind::HomographicLox(Some(std::sync::Arc::new(move |t| conditions::phi(t, &p))))
                }
            };
            let n = samples.max(1);
            let ts: Vec<f64> = (0..=n).map(|i| t_end * i as f64 / n as f64).collect();
            let pts = mobius::orbit_samples(&kind, PlanePoint::Finite(pair(&z)), &ts)?;
            let rows: Vec<Value> = ts
                .iter()
                .zip(pts)
                .map(|(t, p)| json!({ "t": t, "z": fio::plane_point_json(p) }))
                .collect();
            emit(&output, &Value::Array(rows))?;
        }
        Command::Distance { radius, z1, z2 } => {
            let radius = CurvatureRadius::new(radius)?;
            let d = geom::geodesic_distance(PlanePoint::Finite(pair(&z1)), PlanePoint::Finite(pair(&z2)), radius);
            emit(&None, &json!({ "distance": d }))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn spec_from(a: &FamilyArgs) -> Result<FamilySpec> {
    Ok(FamilySpec {
        tag: a.class.into(),
        shape: a.shape.into(),
        radius: CurvatureRadius::new(a.radius)?,
        r: a.r,
        m: a.m,
        big_m: a.big_m,
    })
}

fn solve(spec: &FamilySpec) -> Result<Value> {
    use FamilyShape::*;
    use SolutionClassTag::*;
    match (spec.tag, spec.shape) {
        (MobiusParabolic, TwoBodyAntipodal) | (MobiusParabolic, ThreeBodyParabolicWithCenter) => {
            let m = spec.m.ok_or_else(|| Error::Parse("--m is required".into()))?;
            let sol = if spec.shape == TwoBodyAntipodal {
                families::solve_parabolic_alpha_2body(m, spec.radius)?
            } else {
                let big_m = spec.big_m.ok_or_else(|| Error::Parse("--M is required".into()))?;
                families::solve_parabolic_alpha_3body(m, big_m, spec.radius)?
            };
            Ok(json!({
                "roots": sol.values(),
                "physical": sol.physical.map(|r| r.root),
                "details": sol.roots,
            }))
        }
        (tag, TwoBodyAntipodal) => {
            let r = spec.r.ok_or_else(|| Error::Parse("--r is required".into()))?;
            let required = families::required_antipodal_mass(tag, r, spec.radius)?;
            let sol = families::solve_antipodal_mass(tag, r, spec.radius)?;
            Ok(json!({ "mass": sol.mass, "residual": sol.residual, "required": fio::complex_json(required) }))
        }
        _ => {
            let cfg = families::build_family(spec)?;
            Ok(json!({ "masses": cfg.masses() }))
        }
    }
}
