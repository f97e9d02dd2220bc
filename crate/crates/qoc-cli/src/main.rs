//! `qoc`: eigenmode tables, coupling reports, figure-dataset sweeps, and
//! design search for flux-tunable coupled transmission-line resonators.
//!
//! Exit codes: 0 on success, 1 when the physics rejects the request (e.g.
//! half-quantum flux), 2 on usage errors (bad flags, unreadable specs).

use clap::{Parser, Subcommand, ValueEnum};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use qoc_cli::design::{design_search, DesignConstraints, DesignError, FreeParam};
use qoc_cli::report::{
    ArgmaxJson, BaselineRowJson, CouplingJson, CouplingSummaryJson, DesignJson, ValidityJson,
};
use qoc_cli::spec::{
    BaselineEntry, BaselineSpecFile, PairSpecFile, SpecError, SystemSpecFile, TunableSpecFile,
};
use qoc_cli::sweep::{self, CustomParam, DEFAULT_POINTS};
use qoc_cli::table::{Cell, Dataset, Row};

use qoc_core::analog::{baseline_from_curvature, cavity_baseline, BaselineReport, CouplingFormula};
use qoc_core::params::CavityBaseline;
use qoc_core::validity::{
    check_state, max_coherent_photons, max_thermal_photons, maximal_amplitude, quadrature_stats,
    MaximalAmplitude, StateKind,
};
use qoc_core::PhysicalConstants;

#[derive(Parser)]
#[command(name = "qoc", version, about = "circuit analogs of quadratic optomechanics")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for sweeps (0 = one per CPU).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GVariant {
    Simplified,
    ClosedForm,
    BiotSavart,
}

impl From<GVariant> for CouplingFormula {
    fn from(v: GVariant) -> Self {
        match v {
            GVariant::Simplified => CouplingFormula::Simplified,
            GVariant::ClosedForm => CouplingFormula::ClosedForm,
            GVariant::BiotSavart => CouplingFormula::BiotSavart,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StateArg {
    Vacuum,
    Thermal,
    Coherent,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TargetArg {
    #[value(name = "fig3_4")]
    Fig3_4,
    Fig5,
    Fig7,
    Fig8,
    Fig10,
    Fig11,
    Fig12,
    Custom,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ParamArg {
    Bias,
    CouplingCap,
    AreaRatio,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FreeArg {
    Bias,
    CouplingCap,
    AreaRatio,
}

impl From<FreeArg> for FreeParam {
    fn from(v: FreeArg) -> Self {
        match v {
            FreeArg::Bias => FreeParam::BiasFlux,
            FreeArg::CouplingCap => FreeParam::CouplingCap,
            FreeArg::AreaRatio => FreeParam::AreaRatio,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Normal modes of a capacitively-coupled resonator pair.
    Modes {
        /// Pair spec file (JSON, schema 1).
        #[arg(long)]
        spec: PathBuf,
        /// Override the capacitor displacement, in units of the total length.
        #[arg(long)]
        xi: Option<f64>,
        /// Override the coupling frequency ω_c, in units of v₀/d.
        #[arg(long = "omega-c-over")]
        omega_c_over: Option<f64>,
        /// Highest mode index (modes 0..=n_max are reported).
        #[arg(long = "n-max", default_value_t = 5)]
        n_max: usize,
    },
    /// Flux-dependent modes of a SQUID-terminated resonator.
    Tunable {
        #[arg(long)]
        spec: PathBuf,
        /// Single external flux Φ/Φ₀ (default: the spec value).
        #[arg(long)]
        phi: Option<f64>,
        /// Sweep from here (Φ/Φ₀) ...
        #[arg(long = "phi-min")]
        phi_min: Option<f64>,
        /// ... to here, inclusive.
        #[arg(long = "phi-max")]
        phi_max: Option<f64>,
        /// Points along the flux sweep.
        #[arg(long, default_value_t = DEFAULT_POINTS)]
        points: usize,
        /// Number of modes (1..=n_max).
        #[arg(long = "n-max", default_value_t = 3)]
        n_max: usize,
        /// Keep roots above the SQUID plasma frequency.
        #[arg(long = "include-plasma", default_value_t = false)]
        include_plasma: bool,
    },
    /// Exact spectrum of the combined resonator A at a given flux drive.
    AnalogSpectrum {
        #[arg(long)]
        spec: PathBuf,
        /// Antisymmetric flux variation δΦ/Φ₀.
        #[arg(long, default_value_t = 0.0)]
        dphi: f64,
        #[arg(long = "n-max", default_value_t = 5)]
        n_max: usize,
    },
    /// Quadratic coupling report for one (n, m) mode pair.
    Coupling {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long = "g-variant", value_enum, default_value_t = GVariant::Simplified)]
        g_variant: GVariant,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Reference optical-cavity comparison table.
    Baseline {
        /// Baseline spec file; without it, the built-in reference entries.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Amplitude criterion and photon bounds for a drive-mode state.
    Validity {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum)]
        state: StateArg,
        /// Temperature in K (thermal states).
        #[arg(long, short = 'T')]
        temperature: Option<f64>,
        /// Coherent amplitude |β|.
        #[arg(long)]
        beta: Option<f64>,
    },
    /// Regenerate a reference figure dataset or run a custom sweep.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_enum)]
        target: TargetArg,
        #[arg(long, default_value_t = DEFAULT_POINTS)]
        points: usize,
        /// Swept parameter (custom target).
        #[arg(long, value_enum)]
        param: Option<ParamArg>,
        #[arg(long)]
        min: Option<f64>,
        #[arg(long)]
        max: Option<f64>,
        /// Log-spaced axis (custom target).
        #[arg(long, default_value_t = false)]
        log: bool,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
    },
    /// Maximize |g_nm|/Ω_m over chosen free parameters under constraints.
    Design {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// Free parameters, comma-separated.
        #[arg(long, value_enum, value_delimiter = ',', required = true)]
        free: Vec<FreeArg>,
        /// Feasibility floor on the maximal amplitude X*.
        #[arg(long = "min-x-star")]
        min_x_star: Option<f64>,
        #[arg(long = "bias-lo", default_value_t = 0.0)]
        bias_lo: f64,
        #[arg(long = "bias-hi", default_value_t = 0.45)]
        bias_hi: f64,
        #[arg(long = "cc-lo", default_value_t = 1e-16)]
        cc_lo: f64,
        #[arg(long = "cc-hi", default_value_t = 1e-13)]
        cc_hi: f64,
        #[arg(long = "area-lo", default_value_t = 1e-4)]
        area_lo: f64,
        #[arg(long = "area-hi", default_value_t = 1e-2)]
        area_hi: f64,
    },
}

/// Failures after successful flag parsing.
enum AppError {
    /// Physics-domain rejection → exit 1.
    Physics(String),
    /// Spec/flag/IO problems → exit 2.
    Usage(String),
}

impl From<qoc_core::Error> for AppError {
    fn from(e: qoc_core::Error) -> Self {
        AppError::Physics(e.to_string())
    }
}

impl From<SpecError> for AppError {
    fn from(e: SpecError) -> Self {
        match e {
            SpecError::Invalid(inner) => AppError::Physics(inner.to_string()),
            other => AppError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Usage(format!("i/o error: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global()
        {
            eprintln!("qoc: cannot configure {} worker threads: {e}", cli.jobs);
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(output) => {
            if let Err(e) = write_output(cli.out.as_deref(), &output) {
                eprintln!("qoc: {e}");
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(AppError::Physics(msg)) => {
            eprintln!("qoc: {msg}");
            ExitCode::from(1)
        }
        Err(AppError::Usage(msg)) => {
            eprintln!("qoc: {msg}");
            ExitCode::from(2)
        }
    }
}

fn write_output(path: Option<&Path>, text: &str) -> std::io::Result<()> {
    match path {
        Some(path) => fs::write(path, text),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, AppError> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| AppError::Usage(format!("cannot serialize report: {e}")))
}

fn run(cli: &Cli) -> Result<String, AppError> {
    let constants = PhysicalConstants::si();
    match &cli.command {
        Command::Modes {
            spec,
            xi,
            omega_c_over,
            n_max,
        } => {
            let file = PairSpecFile::load(spec)?;
            let pair = file.pair_with(*xi, *omega_c_over)?;
            let modes = pair.solve_modes(*n_max)?;
            let mut ds = Dataset::new(vec!["n", "omega_rad_s", "k_per_m", "refl_abs", "residual"]);
            for mode in &modes {
                ds.rows.push(Row::ok(vec![
                    Cell::Int(mode.index as i64),
                    Cell::Num(mode.omega),
                    Cell::Num(mode.wavenumber),
                    Cell::Num(mode.refl_abs),
                    Cell::Num(mode.residual),
                ]));
            }
            Ok(ds.to_csv_string())
        }

        Command::Tunable {
            spec,
            phi,
            phi_min,
            phi_max,
            points,
            n_max,
            include_plasma,
        } => {
            let file = TunableSpecFile::load(spec)?;
            let fluxes: Vec<f64> = match (phi, phi_min, phi_max) {
                (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                    return Err(AppError::Usage(
                        "--phi conflicts with --phi-min/--phi-max".into(),
                    ))
                }
                (_, Some(lo), Some(hi)) => {
                    if *points < 2 {
                        return Err(AppError::Usage("flux sweeps need --points ≥ 2".into()));
                    }
                    (0..*points)
                        .map(|i| lo + (hi - lo) * i as f64 / (*points - 1) as f64)
                        .collect()
                }
                (_, Some(_), None) | (_, None, Some(_)) => {
                    return Err(AppError::Usage(
                        "--phi-min and --phi-max must be given together".into(),
                    ))
                }
                (maybe_phi, None, None) => vec![maybe_phi.unwrap_or(file.flux_over_phi0)],
            };
            let mut ds = Dataset::new(vec![
                "phi_over_phi0",
                "n",
                "omega_rad_s",
                "omega_approx_rad_s",
                "eta",
                "delta_d_m",
            ]);
            for &flux in &fluxes {
                match file.resonator(Some(flux), constants) {
                    Ok(res) => {
                        let modes = res.solve_modes_with_plasma_branch(*n_max, *include_plasma)?;
                        let estimates = res.approx_modes(*n_max);
                        let delta_d = res.effective_length();
                        for mode in &modes {
                            ds.rows.push(Row::ok(vec![
                                Cell::Num(flux),
                                Cell::Int(mode.index as i64),
                                Cell::Num(mode.omega),
                                Cell::Num(estimates[mode.index - 1].1 * res.line().wave_speed()),
                                Cell::Num(mode.eta),
                                Cell::Num(delta_d),
                            ]));
                        }
                    }
                    Err(e) => ds.rows.push(Row::failed(vec![Cell::Num(flux)], e.to_string())),
                }
            }
            Ok(ds.to_csv_string())
        }

        Command::AnalogSpectrum { spec, dphi, n_max } => {
            let file = SystemSpecFile::load(spec)?;
            let sys = file.system(constants)?;
            let points = sys.spectrum(*dphi, *n_max)?;
            let mut ds = Dataset::new(vec![
                "n",
                "omega_rad_s",
                "k_per_m",
                "refl_abs",
                "residual",
                "epsilon",
            ]);
            for point in &points {
                ds.rows.push(Row::ok(vec![
                    Cell::Int(point.mode.index as i64),
                    Cell::Num(point.mode.omega),
                    Cell::Num(point.mode.wavenumber),
                    Cell::Num(point.mode.refl_abs),
                    Cell::Num(point.mode.residual),
                    Cell::Num(point.epsilon),
                ]));
            }
            Ok(ds.to_csv_string())
        }

        Command::Coupling {
            spec,
            n,
            m,
            g_variant,
            format,
        } => {
            let file = SystemSpecFile::load(spec)?;
            let sys = file.system(constants)?;
            let report = sys.hamiltonian_report_with(*n, *m, (*g_variant).into())?;
            let json = CouplingJson::new(&sys, &report);
            match format {
                Format::Json => to_json(&json),
                Format::Csv => {
                    let mut ds = Dataset::new(vec![
                        "n",
                        "m",
                        "omega_n0_rad_s",
                        "omega_m_rad_s",
                        "drive_flux_wb",
                        "g_rad_s",
                        "normalized_coupling",
                        "frequency_ratio_s",
                    ]);
                    ds.rows.push(Row::ok(vec![
                        Cell::Int(json.n as i64),
                        Cell::Int(json.m as i64),
                        Cell::Num(json.omega_n0_rad_s),
                        Cell::Num(json.omega_m_rad_s),
                        Cell::Num(json.drive_flux_wb),
                        Cell::Num(json.g_rad_s),
                        Cell::Num(json.normalized_coupling),
                        Cell::Num(json.frequency_ratio_s),
                    ]));
                    Ok(ds.to_csv_string())
                }
            }
        }

        Command::Baseline { spec, format } => {
            let rows: Vec<BaselineRowJson> = match spec {
                Some(path) => {
                    let file = BaselineSpecFile::load(path)?;
                    file.entries()?
                        .into_iter()
                        .map(|entry| match entry {
                            BaselineEntry::Cavity { label, spec } => {
                                BaselineRowJson::new(label, &cavity_baseline(&spec, &constants))
                            }
                            BaselineEntry::Curvature {
                                label,
                                curvature,
                                membrane_mass,
                                mech_freq,
                            } => BaselineRowJson::new(
                                label,
                                &BaselineReport {
                                    curvature,
                                    g_over_omega: baseline_from_curvature(
                                        curvature,
                                        membrane_mass,
                                        mech_freq,
                                        &constants,
                                    ),
                                },
                            ),
                        })
                        .collect()
                }
                None => builtin_baselines(&constants)?,
            };
            match format {
                Format::Json => to_json(&rows),
                Format::Csv => {
                    let mut ds = Dataset::new(vec![
                        "label",
                        "curvature_rad_s_m2",
                        "curvature_2pi_khz_nm2",
                        "g_over_omega",
                    ]);
                    for row in &rows {
                        ds.rows.push(Row::ok(vec![
                            Cell::Text(row.label.clone()),
                            Cell::Num(row.curvature_rad_s_m2),
                            Cell::Num(row.curvature_2pi_khz_nm2),
                            Cell::Num(row.g_over_omega),
                        ]));
                    }
                    Ok(ds.to_csv_string())
                }
            }
        }

        Command::Validity {
            spec,
            n,
            m,
            state,
            temperature,
            beta,
        } => {
            let file = SystemSpecFile::load(spec)?;
            let sys = file.system(constants)?;
            let bound = maximal_amplitude(&sys, *n, *m)?;
            let omega_m = sys.drive_mode(*m).omega;
            let (kind, label) = match state {
                StateArg::Vacuum => (StateKind::Vacuum, "vacuum".to_string()),
                StateArg::Thermal => {
                    let temperature = temperature.ok_or_else(|| {
                        AppError::Usage("thermal state needs --temperature".into())
                    })?;
                    (
                        StateKind::Thermal { temperature },
                        format!("thermal(T={temperature} K)"),
                    )
                }
                StateArg::Coherent => {
                    let beta = beta
                        .ok_or_else(|| AppError::Usage("coherent state needs --beta".into()))?;
                    (
                        StateKind::Coherent {
                            amplitude: num_complex_like(beta),
                        },
                        format!("coherent(|beta|={beta})"),
                    )
                }
            };
            let stats = quadrature_stats(&kind, omega_m, &constants)?;
            let check = check_state(&stats, &bound);
            let photon_bound = match (&kind, &bound) {
                (StateKind::Thermal { .. }, MaximalAmplitude::Bounded(x)) => {
                    Some(max_thermal_photons(*x, omega_m, &constants)?)
                }
                (StateKind::Coherent { .. }, MaximalAmplitude::Bounded(x)) => {
                    Some(max_coherent_photons(*x)?)
                }
                _ => None,
            };
            let json = ValidityJson::new(
                *n,
                *m,
                label,
                bound.value(),
                &stats,
                &check,
                photon_bound.as_ref(),
            );
            to_json(&json)
        }

        Command::Sweep {
            spec,
            target,
            points,
            param,
            min,
            max,
            log,
            n,
            m,
        } => {
            if *points < 2 {
                return Err(AppError::Usage("sweeps need --points ≥ 2".into()));
            }
            let ds = match target {
                TargetArg::Fig3_4 => sweep::fig3_4(&PairSpecFile::load(spec)?, *points),
                TargetArg::Fig5 => sweep::fig5(&PairSpecFile::load(spec)?, *points),
                TargetArg::Fig7 => sweep::fig7(&TunableSpecFile::load(spec)?, *points, constants),
                TargetArg::Fig8 => sweep::fig8(&TunableSpecFile::load(spec)?, *points, constants),
                TargetArg::Fig10 => sweep::fig10(&SystemSpecFile::load(spec)?, *points, constants),
                TargetArg::Fig11 => sweep::fig11(&SystemSpecFile::load(spec)?, *points, constants),
                TargetArg::Fig12 => sweep::fig12(&SystemSpecFile::load(spec)?, *points, constants),
                TargetArg::Custom => {
                    let param = param.ok_or_else(|| {
                        AppError::Usage("custom sweeps need --param".into())
                    })?;
                    let (lo, hi) = match (min, max) {
                        (Some(lo), Some(hi)) if lo.is_finite() && hi.is_finite() && hi > lo => {
                            (*lo, *hi)
                        }
                        _ => {
                            return Err(AppError::Usage(
                                "custom sweeps need finite --min < --max".into(),
                            ))
                        }
                    };
                    let param = match param {
                        ParamArg::Bias => CustomParam::BiasFlux,
                        ParamArg::CouplingCap => CustomParam::CouplingCap,
                        ParamArg::AreaRatio => CustomParam::AreaRatio,
                    };
                    sweep::custom(
                        &SystemSpecFile::load(spec)?,
                        param,
                        lo,
                        hi,
                        *points,
                        *log,
                        *n,
                        *m,
                        constants,
                    )
                }
            };
            Ok(ds.to_csv_string())
        }

        Command::Design {
            spec,
            n,
            m,
            free,
            min_x_star,
            bias_lo,
            bias_hi,
            cc_lo,
            cc_hi,
            area_lo,
            area_hi,
        } => {
            let file = SystemSpecFile::load(spec)?;
            let constraints = DesignConstraints {
                min_x_star: *min_x_star,
                bias_bounds: (*bias_lo, *bias_hi),
                coupling_cap_bounds: (*cc_lo, *cc_hi),
                area_ratio_bounds: (*area_lo, *area_hi),
                ..DesignConstraints::default()
            };
            let free: Vec<FreeParam> = free.iter().map(|f| (*f).into()).collect();
            let result = design_search(&file, &free, &constraints, *n, *m, constants)
                .map_err(|e| match e {
                    DesignError::Core(inner) => AppError::Physics(inner.to_string()),
                    DesignError::NoFreeParameters => AppError::Usage(e.to_string()),
                    other => AppError::Physics(other.to_string()),
                })?;
            let json = DesignJson {
                schema: qoc_cli::spec::SCHEMA_VERSION,
                objective_normalized_coupling: result.report.normalized.abs(),
                coupling: CouplingSummaryJson::from(&result.report),
                x_star: result.x_star,
                argmax: result
                    .argmax
                    .iter()
                    .map(|(p, v)| ArgmaxJson {
                        parameter: p.name(),
                        value: *v,
                    })
                    .collect(),
                binding_constraint: result.binding_constraint,
            };
            to_json(&json)
        }
    }
}

fn num_complex_like(magnitude: f64) -> qoc_core::Complex64 {
    qoc_core::Complex64::new(magnitude, 0.0)
}

/// The two built-in reference cavities for the comparison table.
fn builtin_baselines(constants: &PhysicalConstants) -> Result<Vec<BaselineRowJson>, AppError> {
    let mech_freq = 2.0 * std::f64::consts::PI * 1e5;
    let membrane_mass = 50e-15;
    let cavity = CavityBaseline::new(0.067, 0.999, 532e-9, membrane_mass, mech_freq)?;
    let tilted_curvature = 2.0 * std::f64::consts::PI * 10e6 * 1e18;
    Ok(vec![
        BaselineRowJson::new(
            "membrane_cavity".to_string(),
            &cavity_baseline(&cavity, constants),
        ),
        BaselineRowJson::new(
            "tilted_membrane_cavity".to_string(),
            &BaselineReport {
                curvature: tilted_curvature,
                g_over_omega: baseline_from_curvature(
                    tilted_curvature,
                    membrane_mass,
                    mech_freq,
                    constants,
                ),
            },
        ),
    ])
}
