use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::Serialize;

use halfspace::io::{self, CertificateRecord, FieldSidecar};
use halfspace::kelvin::{kelvin_report, sample_points, DEFAULT_STEP};
use halfspace::ode::{extinction_detect, shooting_integrate, ExtinctionOutcome, ShootingConfig};
use halfspace::pde::{newton_solve, HalfStripProblem, NewtonConfig, StripGeometry};
use halfspace::sampled::{energy_drift, relative_residual};
use halfspace::{
    antiderivative, asymptote_estimate, explicit_solution_jet, power_coefficient, profile_build,
    regime_classify, spec_from, FamilyParam, GammaParam, ProfileSpec, Regime, SampledProfile,
};

use crate::output::emit;

fn gamma(value: f64) -> Result<GammaParam> {
    Ok(GammaParam::new(value)?)
}

fn positive(name: &str, value: f64) -> Result<()> {
    if !(value > 0.0 && value.is_finite()) {
        return Err(
            halfspace::Error::Domain(format!("--{name} must be positive, got {value}")).into(),
        );
    }
    Ok(())
}

#[derive(Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    gamma: f64,
}

pub fn classify(a: ClassifyArgs) -> Result<u8> {
    let g = gamma(a.gamma)?;
    match regime_classify(g) {
        Regime::ExistenceGammaGt1 => {
            println!(
                "gamma = {}: solutions exist for γ>1; they are the power branch and the rescalings of one profile",
                a.gamma
            );
            Ok(0)
        }
        Regime::NonexistenceGammaLe1 => {
            println!("gamma = {}: no solutions for 0<γ≤1", a.gamma);
            Ok(crate::EXIT_NONEXISTENCE)
        }
    }
}

#[derive(Args)]
pub struct ExplicitArgs {
    #[arg(long)]
    gamma: f64,
    #[arg(long = "tmax", default_value_t = 10.0)]
    t_max: f64,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    /// CSV destination (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn explicit(a: ExplicitArgs) -> Result<u8> {
    let g = gamma(a.gamma)?;
    g.require_existence()?;
    let grid = halfspace::ode::profile_grid(a.t_max, a.n)?;
    let mut values = Vec::with_capacity(grid.len());
    let mut slopes = Vec::with_capacity(grid.len());
    for &t in &grid {
        if t == 0.0 {
            values.push(0.0);
            slopes.push(f64::INFINITY);
        } else {
            let jet = explicit_solution_jet(g, t)?;
            values.push(jet[0]);
            slopes.push(jet[1]);
        }
    }
    let mut buf = Vec::new();
    io::write_columns_csv(&grid, &values, &slopes, &mut buf)?;
    emit(a.out.as_deref(), &buf)?;
    Ok(0)
}

#[derive(Args)]
#[group(id = "family", required = true, multiple = false, args = ["energy", "lambda", "slope"])]
pub struct FamilyArgs {
    /// First-integral level E ≥ 0 (0 selects the power branch)
    #[arg(long)]
    energy: Option<f64>,
    /// Scaling parameter λ > 0
    #[arg(long)]
    lambda: Option<f64>,
    /// Asymptotic slope m > 0
    #[arg(long)]
    slope: Option<f64>,
}

impl FamilyArgs {
    fn param(&self) -> FamilyParam {
        match (self.energy, self.lambda, self.slope) {
            (Some(e), _, _) => FamilyParam::Energy(e),
            (_, Some(l), _) => FamilyParam::Lambda(l),
            (_, _, Some(m)) => FamilyParam::Slope(m),
            _ => unreachable!("clap enforces exactly one family parameter"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileMethod {
    Quad,
    Shoot,
    Both,
}

#[derive(Args)]
pub struct ProfileArgs {
    #[arg(long)]
    gamma: f64,
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long = "tmax", default_value_t = 100.0)]
    t_max: f64,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, value_enum, default_value_t = ProfileMethod::Quad)]
    method: ProfileMethod,
    /// Relative tolerance of the shooting integrator
    #[arg(long, default_value_t = 1e-12)]
    rtol: f64,
    /// CSV destination (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON quality report destination
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Serialize)]
struct ProfileReport {
    gamma: f64,
    energy: f64,
    lambda: f64,
    slope_inf: f64,
    method: ProfileMethod,
    t_max: f64,
    n: usize,
    residual_max: f64,
    energy_drift: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    shooting_t0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    shooting_energy_drift: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cross_method_deviation: Option<f64>,
}

fn max_relative_deviation(a: &SampledProfile, b: &SampledProfile) -> f64 {
    a.values
        .iter()
        .zip(&b.values)
        .filter(|(x, _)| **x > 0.0)
        .map(|(x, y)| (x - y).abs() / x.abs())
        .fold(0.0, f64::max)
}

pub fn profile(a: ProfileArgs) -> Result<u8> {
    let g = gamma(a.gamma)?;
    positive("rtol", a.rtol)?;
    let spec = spec_from(g, a.family.param())?;
    let shoot_cfg = ShootingConfig {
        control: halfspace::numerics::StepControl {
            rel_tol: a.rtol,
            ..ShootingConfig::default().control
        },
        ..ShootingConfig::default()
    };
    let quad = match a.method {
        ProfileMethod::Quad | ProfileMethod::Both => Some(profile_build(&spec, a.t_max, a.n)?),
        ProfileMethod::Shoot => None,
    };
    let shot = match a.method {
        ProfileMethod::Shoot | ProfileMethod::Both => {
            Some(shooting_integrate(&spec, a.t_max, a.n, &shoot_cfg)?)
        }
        ProfileMethod::Quad => None,
    };
    let primary = quad
        .as_ref()
        .or(shot.as_ref().map(|s| &s.profile))
        .expect("at least one method runs");
    let report = ProfileReport {
        gamma: a.gamma,
        energy: spec.energy,
        lambda: spec.lambda,
        slope_inf: spec.slope_inf,
        method: a.method,
        t_max: a.t_max,
        n: a.n,
        residual_max: primary.residual_max,
        energy_drift: primary.energy_drift,
        shooting_t0: shot.as_ref().map(|s| s.report.t0),
        shooting_energy_drift: shot.as_ref().map(|s| s.profile.energy_drift),
        cross_method_deviation: match (&quad, &shot) {
            (Some(q), Some(s)) => Some(max_relative_deviation(q, &s.profile)),
            _ => None,
        },
    };
    let mut buf = Vec::new();
    io::write_profile_csv(primary, &mut buf)?;
    emit(a.out.as_deref(), &buf)?;
    if let Some(path) = &a.report {
        emit(Some(path), io::to_json(&report)?.as_bytes())?;
    }
    Ok(0)
}

#[derive(Args)]
pub struct ExtinctionArgs {
    #[arg(long)]
    gamma: f64,
    #[arg(long)]
    u0: f64,
    #[arg(long, allow_hyphen_values = true)]
    du0: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    t0: f64,
    /// JSON destination (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct GlobalRecord {
    gamma: f64,
    outcome: &'static str,
    #[serde(rename = "E")]
    energy: f64,
    slope_inf: f64,
    profile_origin: f64,
}

pub fn extinction(a: ExtinctionArgs) -> Result<u8> {
    let g = gamma(a.gamma)?;
    let json = match extinction_detect(g, a.t0, a.u0, a.du0)? {
        ExtinctionOutcome::Extinct(cert) => io::to_json(&CertificateRecord::from(&cert))?,
        ExtinctionOutcome::Global(report) => io::to_json(&GlobalRecord {
            gamma: a.gamma,
            outcome: "global",
            energy: report.energy,
            slope_inf: report.spec.slope_inf,
            profile_origin: report.profile_origin,
        })?,
    };
    emit(a.out.as_deref(), json.as_bytes())?;
    Ok(0)
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    gamma: f64,
    /// JSON destination (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct VerifyReport {
    gamma: f64,
    nodes: usize,
    energy_estimate: f64,
    residual_max: f64,
    energy_drift: f64,
}

pub fn verify(a: VerifyArgs) -> Result<u8> {
    let g = gamma(a.gamma)?;
    g.require_existence()?;
    let file = File::open(&a.input).with_context(|| format!("opening {}", a.input.display()))?;
    let cols = io::read_profile_csv(BufReader::new(file))?;
    if cols.t.len() < 3 {
        bail!(halfspace::Error::Domain(
            "a profile needs at least three nodes".into()
        ));
    }
    // The first integral is best resolved away from the boundary: take the
    // median over the upper half of the nodes.
    let mut levels = Vec::new();
    for i in cols.t.len() / 2..cols.t.len() {
        if cols.v[i] > 0.0 && cols.vp[i].is_finite() {
            levels.push(0.5 * cols.vp[i] * cols.vp[i] + antiderivative(g, cols.v[i])?);
        }
    }
    if levels.is_empty() {
        bail!(halfspace::Error::Domain(
            "no usable nodes in the upper half of the profile".into()
        ));
    }
    levels.sort_by(f64::total_cmp);
    let energy = levels[levels.len() / 2];
    let report = VerifyReport {
        gamma: a.gamma,
        nodes: cols.t.len(),
        energy_estimate: energy,
        residual_max: relative_residual(a.gamma, &cols.t, &cols.v),
        energy_drift: energy_drift(a.gamma, energy, &cols.v, &cols.vp),
    };
    emit(a.out.as_deref(), io::to_json(&report)?.as_bytes())?;
    Ok(0)
}

#[derive(Args)]
pub struct Pde2dArgs {
    #[arg(long)]
    gamma: f64,
    #[arg(long, default_value_t = 64)]
    nx: usize,
    #[arg(long, default_value_t = 256)]
    nz: usize,
    #[arg(long = "L", default_value_t = 10.0)]
    length: f64,
    #[arg(long = "H", default_value_t = 10.0)]
    height: f64,
    /// Relative amplitude of the random perturbation of the initial guess
    #[arg(long, default_value_t = 0.2)]
    perturb: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Asymptotic slope of the profile supplying the boundary data
    #[arg(long, default_value_t = 1.0)]
    slope: f64,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long = "max-iters", default_value_t = 60)]
    max_iters: usize,
    /// Use the plain five-point stencil without the wall correction
    #[arg(long)]
    plain: bool,
    /// Field CSV destination (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON diagnostics destination
    #[arg(long)]
    report: Option<PathBuf>,
}

pub fn pde2d(a: Pde2dArgs) -> Result<u8> {
    let g = gamma(a.gamma)?;
    positive("tol", a.tol)?;
    let spec = ProfileSpec::from_slope(g, a.slope)?;
    let geometry = StripGeometry {
        length: a.length,
        height: a.height,
        nx: a.nx,
        nz: a.nz,
    };
    let mut problem = HalfStripProblem::from_profile(&spec, geometry, a.perturb, a.seed)?;
    problem.singular_correction = !a.plain;
    let cfg = NewtonConfig {
        tol: a.tol,
        max_iterations: a.max_iters,
        ..NewtonConfig::default()
    };
    let solution = newton_solve(&problem, &cfg)?;
    if solution.floor_activated {
        eprintln!(
            "warning: positivity floor active on the final iterate; refine the grid near z = 0"
        );
    }
    let mut buf = Vec::new();
    io::write_field_csv(&solution, &mut buf)?;
    emit(a.out.as_deref(), &buf)?;
    if let Some(path) = &a.report {
        emit(
            Some(path),
            io::to_json(&FieldSidecar::from(&solution))?.as_bytes(),
        )?;
    }
    Ok(0)
}

#[derive(Args)]
pub struct KelvinArgs {
    #[arg(long)]
    gamma: f64,
    #[arg(long, default_value_t = 3)]
    dim: usize,
    #[arg(long, default_value_t = 20)]
    points: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Finite-difference step
    #[arg(long, default_value_t = DEFAULT_STEP)]
    h: f64,
    /// JSON destination (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn kelvin(a: KelvinArgs) -> Result<u8> {
    let g = gamma(a.gamma)?;
    g.require_existence()?;
    if a.dim < 2 {
        bail!(halfspace::Error::Domain(format!(
            "--dim must be at least 2, got {}",
            a.dim
        )));
    }
    let points = sample_points(a.dim, a.points, a.seed);
    let report = kelvin_report(g, a.dim, &points, a.h)?;
    emit(a.out.as_deref(), io::to_json(&report)?.as_bytes())?;
    Ok(0)
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args)]
pub struct SweepArgs {
    /// Comma-separated γ values
    #[arg(long = "gamma-list", value_delimiter = ',', required = true)]
    gamma_list: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct SweepRow {
    gamma: f64,
    regime: &'static str,
    /// Power coefficient A(γ) (γ > 1 only).
    power_coefficient: Option<f64>,
    /// Extinction time from u = 1, u' = 0.
    t_extinction: f64,
    /// Decay exponent of v' − m for the normalized profile (γ > 1 only).
    asymptote_rate: Option<f64>,
}

fn sweep_row(gv: f64) -> Result<SweepRow> {
    let g = gamma(gv)?;
    let cert = match extinction_detect(g, 0.0, 1.0, 0.0)? {
        ExtinctionOutcome::Extinct(c) => c,
        ExtinctionOutcome::Global(_) => {
            unreachable!("a start at rest has negative energy for every γ")
        }
    };
    let (regime, a, rate) = match regime_classify(g) {
        Regime::ExistenceGammaGt1 => {
            let spec = ProfileSpec::normalized(g)?;
            let profile = profile_build(&spec, 400.0, 800)?;
            (
                "existence",
                Some(power_coefficient(g)?),
                Some(asymptote_estimate(&profile)?.rate),
            )
        }
        Regime::NonexistenceGammaLe1 => ("nonexistence", None, None),
    };
    Ok(SweepRow {
        gamma: gv,
        regime,
        power_coefficient: a,
        t_extinction: cert.extinction_time,
        asymptote_rate: rate,
    })
}

pub fn sweep(a: SweepArgs) -> Result<u8> {
    let rows = a
        .gamma_list
        .iter()
        .map(|g| sweep_row(*g))
        .collect::<Result<Vec<_>>>()?;
    let text = match a.format {
        Format::Json => io::to_json(&rows)?,
        Format::Csv => {
            let opt = |v: Option<f64>| v.map_or_else(String::new, |v| format!("{v:.16e}"));
            let mut s =
                String::from("gamma,regime,power_coefficient,t_extinction,asymptote_rate\n");
            for r in &rows {
                s.push_str(&format!(
                    "{:.16e},{},{},{:.16e},{}\n",
                    r.gamma,
                    r.regime,
                    opt(r.power_coefficient),
                    r.t_extinction,
                    opt(r.asymptote_rate)
                ));
            }
            s
        }
    };
    emit(a.out.as_deref(), text.as_bytes())?;
    Ok(0)
}
