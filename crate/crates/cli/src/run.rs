//! Runners behind the `complexity`, `spectral`, `sweep` and `calibrate-rmt` subcommands.

use floquet_krylov::floquet::{
    build_dimer_floquet, build_kicked_ising, build_self_dual, dimer_initial_state, polarized_state,
};
use floquet_krylov::krylov::{amplitudes_chain, arnoldi, ArnoldiData, DEFAULT_TOL};
use floquet_krylov::observables::{
    default_burn_in, default_slope_window, default_window, dispersion, magnetization_series,
    rescale, saturation_streaming, slope_fit, ComplexitySeries, DispersionStats,
};
use floquet_krylov::spectral::{
    calibrate_poisson, combine_samples, goe_sample, spacing_histogram, SpacingHistogram, SpectralStats,
    R_GOE, R_POISSON,
};
use floquet_krylov::statespace::{
    angular_momentum_operators, parity_sector, project_operator, total_spin_operator, Axis,
    SectorBasis, SymmetryCheck,
};
use floquet_krylov::{DimerParams, DriveParams, FloquetOperator, Operator, Spin, SpinBasis, StateVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{ExperimentConfig, InitialState, Model, Observable, Point, Sector, PARAMETER_NAMES};
use crate::error::{CliError, CliResult};
use crate::table::{Table, Value};

/// Histogram resolution when `histogram` is requested without `histogram_bins`.
pub const DEFAULT_HISTOGRAM_BINS: usize = 40;

/// Tables produced by one run, plus non-fatal diagnostics for stderr.
#[derive(Debug, Clone, Default)]
pub struct RunOutput {
    pub tables: Vec<Table>,
    pub warnings: Vec<String>,
}

/// A Floquet operator with the matching magnetization operator and space bookkeeping.
pub struct System {
    pub u: FloquetOperator,
    pub jz: Operator,
    basis: Option<SpinBasis>,
    sector: Option<SectorBasis>,
}

impl System {
    pub fn dim(&self) -> usize {
        self.u.dim()
    }
}

pub fn point_label(config: &ExperimentConfig, p: &Point) -> String {
    let size = if config.model.is_chain() {
        format!("N={}", config.sites())
    } else {
        format!("j={}", config.spin())
    };
    let params: Vec<String> = PARAMETER_NAMES
        .iter()
        .zip(p.as_array())
        .map(|(n, v)| format!("{n}={v}"))
        .collect();
    format!("{} {size} {}", config.model.name(), params.join(" "))
}

pub fn build_system(config: &ExperimentConfig, p: &Point) -> CliResult<System> {
    let ctx = || point_label(config, p);
    let wrap = |e| CliError::at_point(&ctx(), e);
    if config.model == Model::Dimer {
        let spin = Spin::new(config.spin()).map_err(wrap)?;
        let params = DimerParams {
            spin,
            interaction: p.k,
            kick: p.mu,
            period: p.t,
        };
        let u = build_dimer_floquet(&params).map_err(wrap)?;
        return Ok(System {
            u,
            jz: angular_momentum_operators(spin).jz,
            basis: None,
            sector: None,
        });
    }
    let basis = SpinBasis::new(config.sites()).map_err(wrap)?;
    let sector = (config.sector() == Sector::PositiveParity).then(|| parity_sector(&basis));
    let u = match config.model {
        Model::SelfDual => {
            let full = build_self_dual(config.sites()).map_err(wrap)?;
            match &sector {
                Some(s) => full.restrict_to(s).map_err(wrap)?,
                None => full,
            }
        }
        _ => {
            let params = DriveParams::new(p.j, p.b, p.phi).with_nonlocal(p.gamma).with_period(p.t);
            build_kicked_ising(&basis, &params, sector.as_ref()).map_err(wrap)?
        }
    };
    let jz_full = total_spin_operator(&basis, Axis::Z);
    let jz = match &sector {
        Some(s) => project_operator(&jz_full, s, SymmetryCheck::Enforce).map_err(wrap)?,
        None => jz_full,
    };
    Ok(System {
        u,
        jz,
        basis: Some(basis),
        sector,
    })
}

/// One initial state: label, draw index (random states only) and vector.
pub struct Start {
    pub label: &'static str,
    pub draw: Option<usize>,
    pub psi: StateVector,
}

/// Initial states requested by the config. Random draw `i` uses stream `i`
/// of a ChaCha8 generator seeded with the configured seed, so the same
/// draws are reused at every parameter point.
pub fn initial_states(config: &ExperimentConfig, system: &System) -> CliResult<Vec<Start>> {
    let num = |e| CliError::Numerical(format!("initial state: {e}"));
    let dim = system.dim();
    Ok(match config.initial_state {
        InitialState::H0Eigenstate => {
            let psi = match &system.basis {
                Some(basis) => polarized_state(basis, system.sector.as_ref()).map_err(num)?,
                None => dimer_initial_state(Spin::new(config.spin()).map_err(num)?).map_err(num)?,
            };
            vec![Start {
                label: "h0-eigenstate",
                draw: None,
                psi,
            }]
        }
        InitialState::Uniform => vec![Start {
            label: "uniform",
            draw: None,
            psi: StateVector::uniform(dim).map_err(num)?,
        }],
        InitialState::Random { count, seed } => {
            let seed = seed.ok_or_else(|| CliError::Config("random initial states need a seed".into()))?;
            (0..count)
                .map(|i| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(i as u64);
                    Ok(Start {
                        label: "random",
                        draw: Some(i),
                        psi: StateVector::haar_random(dim, &mut rng).map_err(num)?,
                    })
                })
                .collect::<CliResult<Vec<_>>>()?
        }
    })
}

fn context_columns() -> Vec<&'static str> {
    let mut cols = vec!["model", "size", "sector"];
    cols.extend(PARAMETER_NAMES);
    cols
}

fn context_values(config: &ExperimentConfig, p: &Point) -> Vec<Value> {
    let size = if config.model.is_chain() {
        Value::Float(config.sites() as f64)
    } else {
        Value::Float(config.spin())
    };
    let mut row = vec![config.model.name().into(), size, config.sector().name().into()];
    row.extend(p.as_array().into_iter().map(Value::Float));
    row
}

fn columns(extra: &[&'static str]) -> Vec<&'static str> {
    let mut cols = context_columns();
    cols.extend_from_slice(extra);
    cols
}

/// Evaluates `f` on every point with at most `workers` threads; results keep point order.
fn map_points<I: Sync, T: Send>(
    config: &ExperimentConfig,
    points: &[I],
    f: impl Fn(&I) -> CliResult<T> + Sync + Send,
) -> CliResult<Vec<T>> {
    let workers = config.workers();
    if workers == 1 {
        return points.iter().map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {workers} workers: {e}")))?;
    pool.install(|| points.par_iter().map(f).collect())
}

/// Krylov diagnostics of one trajectory.
#[derive(Debug, Clone)]
pub struct KrylovRun {
    pub label: &'static str,
    pub draw: Option<usize>,
    pub data: ArnoldiData,
    pub series: ComplexitySeries,
    pub saturation: Option<f64>,
    pub slope: Option<f64>,
    pub slope_within_bound: Option<bool>,
    pub dispersion: Option<DispersionStats>,
    pub magnetization: Option<f64>,
}

fn krylov_run(config: &ExperimentConfig, system: &System, start: &Start, context: &str) -> CliResult<KrylovRun> {
    let wrap = |e| CliError::at_point(context, e);
    let data = arnoldi(&system.u, &start.psi, DEFAULT_TOL).map_err(wrap)?;
    let d = data.krylov_dim();
    let burn_in = config.burn_in.unwrap_or(default_burn_in(d));
    let window = config.window.unwrap_or(default_window(d));
    let slope_window = config.slope_window.unwrap_or(default_slope_window(d));
    let horizon = config.steps.max(slope_window);
    let series = ComplexitySeries::from_trajectory(&amplitudes_chain(&data, horizon));
    let saturation = if config.wants(Observable::Saturation) {
        Some(saturation_streaming(&data, burn_in, window).map_err(wrap)?)
    } else {
        None
    };
    let fit = if config.wants(Observable::Slope) {
        Some(slope_fit(&series.complexity, slope_window).map_err(wrap)?)
    } else {
        None
    };
    let dispersion = if config.wants(Observable::Dispersion) && d >= 2 {
        Some(dispersion(&data).map_err(wrap)?)
    } else {
        None
    };
    let magnetization = if config.wants(Observable::Magnetization) {
        let m = magnetization_series(&system.u, &start.psi, &system.jz, burn_in + window).map_err(wrap)?;
        Some(m.windowed_average(burn_in, window).map_err(wrap)?)
    } else {
        None
    };
    Ok(KrylovRun {
        label: start.label,
        draw: start.draw,
        data,
        series,
        saturation,
        slope: fit.map(|f| f.slope),
        slope_within_bound: fit.map(|f| f.within_bound),
        dispersion,
        magnetization,
    })
}

/// All Krylov runs at one point, for every initial state.
pub fn krylov_runs(config: &ExperimentConfig, p: &Point) -> CliResult<Vec<KrylovRun>> {
    let system = build_system(config, p)?;
    let context = point_label(config, p);
    initial_states(config, &system)?
        .iter()
        .map(|s| krylov_run(config, &system, s, &context))
        .collect()
}

fn mean(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let v: Vec<f64> = values.collect::<Option<_>>()?;
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

/// Scalar diagnostics of one run, or their mean over random draws.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub label: &'static str,
    pub draw: Option<usize>,
    pub krylov_dim: f64,
    pub halted_early: bool,
    pub saturation: Option<f64>,
    pub slope: Option<f64>,
    pub slope_within_bound: Option<bool>,
    pub dispersion: [Option<f64>; 3],
    pub magnetization: Option<f64>,
    pub max_excess_over_linear: f64,
}

impl RunSummary {
    pub fn of(run: &KrylovRun) -> Self {
        let d = run.dispersion;
        Self {
            label: run.label,
            draw: run.draw,
            krylov_dim: run.data.krylov_dim() as f64,
            halted_early: run.data.halted_early(),
            saturation: run.saturation,
            slope: run.slope,
            slope_within_bound: run.slope_within_bound,
            dispersion: [d.map(|d| d.sigma_sub), d.map(|d| d.sigma_diag_re), d.map(|d| d.sigma_diag_im)],
            magnetization: run.magnetization,
            max_excess_over_linear: run.series.max_excess_over_linear(),
        }
    }

    /// Mean over draws; the bound flags must hold for every draw.
    pub fn mean_of(runs: &[RunSummary]) -> Self {
        let m = |f: &dyn Fn(&RunSummary) -> Option<f64>| mean(runs.iter().map(f));
        Self {
            label: "random-mean",
            draw: None,
            krylov_dim: m(&|r| Some(r.krylov_dim)).unwrap_or(f64::NAN),
            halted_early: runs.iter().any(|r| r.halted_early),
            saturation: m(&|r| r.saturation),
            slope: m(&|r| r.slope),
            slope_within_bound: runs
                .iter()
                .map(|r| r.slope_within_bound)
                .collect::<Option<Vec<_>>>()
                .map(|v| v.iter().all(|&b| b)),
            dispersion: [0, 1, 2].map(|i| m(&|r| r.dispersion[i])),
            magnetization: m(&|r| r.magnetization),
            max_excess_over_linear: runs.iter().map(|r| r.max_excess_over_linear).fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

const SUMMARY_COLUMNS: [&str; 12] = [
    "state",
    "draw",
    "krylov_dim",
    "halted_early",
    "saturation",
    "slope",
    "slope_within_bound",
    "sigma_sub",
    "sigma_diag_re",
    "sigma_diag_im",
    "jz_average",
    "max_excess_over_linear",
];

fn summary_values(s: &RunSummary) -> Vec<Value> {
    vec![
        s.label.into(),
        s.draw.into(),
        s.krylov_dim.into(),
        s.halted_early.into(),
        s.saturation.into(),
        s.slope.into(),
        s.slope_within_bound.into(),
        s.dispersion[0].into(),
        s.dispersion[1].into(),
        s.dispersion[2].into(),
        s.magnetization.into(),
        s.max_excess_over_linear.into(),
    ]
}

/// Time series, Arnoldi coefficients and per-run summary for every point and initial state.
pub fn run_complexity(config: &ExperimentConfig) -> CliResult<RunOutput> {
    config.validate()?;
    let points = config.points();
    let results = map_points(config, &points, |p| krylov_runs(config, p))?;

    let mut series = Table::new("series", &columns(&["state", "draw", "step", "complexity", "entropy"]));
    let mut coefficients = Table::new(
        "coefficients",
        &columns(&["state", "draw", "n", "h_sub", "h_diag_re", "h_diag_im"]),
    );
    let mut summary = Table::new("summary", &columns(&SUMMARY_COLUMNS));
    let mut warnings = Vec::new();

    for (p, runs) in points.iter().zip(&results) {
        let ctx = context_values(config, p);
        let with_ctx = |extra: Vec<Value>| {
            let mut row = ctx.clone();
            row.extend(extra);
            row
        };
        for run in runs {
            if run.data.krylov_dim() == 1 {
                warnings.push(format!(
                    "{}: Krylov space is one-dimensional, complexity is identically zero",
                    point_label(config, p)
                ));
            }
            if matches!(run.slope_within_bound, Some(false)) {
                warnings.push(format!("{}: fitted slope exceeds the linear bound", point_label(config, p)));
            }
            if config.wants(Observable::Complexity) || config.wants(Observable::Entropy) {
                for j in 0..=config.steps {
                    series.push(with_ctx(vec![
                        run.label.into(),
                        run.draw.into(),
                        j.into(),
                        run.series.complexity[j].into(),
                        run.series.entropy[j].into(),
                    ]));
                }
            }
            if config.wants(Observable::Coefficients) {
                let sub = run.data.subdiagonal();
                for (n, diag) in run.data.diagonal().iter().enumerate() {
                    let h_sub = if n == 0 { Value::Null } else { sub[n - 1].into() };
                    coefficients.push(with_ctx(vec![
                        run.label.into(),
                        run.draw.into(),
                        n.into(),
                        h_sub,
                        diag.re.into(),
                        diag.im.into(),
                    ]));
                }
            }
            summary.push(with_ctx(summary_values(&RunSummary::of(run))));
        }
        if matches!(config.initial_state, InitialState::Random { .. }) {
            if config.wants(Observable::Complexity) || config.wants(Observable::Entropy) {
                let n = runs.len() as f64;
                for j in 0..=config.steps {
                    let c = runs.iter().map(|r| r.series.complexity[j]).sum::<f64>() / n;
                    let s = runs.iter().map(|r| r.series.entropy[j]).sum::<f64>() / n;
                    series.push(with_ctx(vec!["random-mean".into(), Value::Null, j.into(), c.into(), s.into()]));
                }
            }
            let draws: Vec<RunSummary> = runs.iter().map(RunSummary::of).collect();
            summary.push(with_ctx(summary_values(&RunSummary::mean_of(&draws))));
        }
    }
    let mut tables = Vec::new();
    if config.wants(Observable::Complexity) || config.wants(Observable::Entropy) {
        tables.push(series);
    }
    if config.wants(Observable::Coefficients) {
        tables.push(coefficients);
    }
    tables.push(summary);
    Ok(RunOutput { tables, warnings })
}

/// Level statistics at one point.
#[derive(Debug, Clone)]
pub struct SpectralPoint {
    pub dim: usize,
    pub stats: SpectralStats,
    /// More than half of all gaps vanish: `η` is meaningless and reported as NaN.
    pub degenerate: bool,
    pub histogram: Option<SpacingHistogram>,
}

impl SpectralPoint {
    pub fn eta(&self) -> f64 {
        if self.degenerate {
            f64::NAN
        } else {
            self.stats.eta
        }
    }
}

pub fn spectral_point(config: &ExperimentConfig, p: &Point, bins: Option<usize>) -> CliResult<SpectralPoint> {
    let system = build_system(config, p)?;
    let context = point_label(config, p);
    let wrap = |e| CliError::at_point(&context, e);
    let stats = SpectralStats::from_operator(&system.u).map_err(wrap)?;
    let histogram = match bins {
        Some(b) => Some(spacing_histogram(&stats.phases, b).map_err(wrap)?),
        None => None,
    };
    Ok(SpectralPoint {
        dim: system.dim(),
        degenerate: 2 * stats.degeneracies > stats.phases.len(),
        stats,
        histogram,
    })
}

fn histogram_bins(config: &ExperimentConfig) -> Option<usize> {
    match config.histogram_bins {
        Some(b) => Some(b),
        None if config.outputs.contains(&Observable::Histogram) => Some(DEFAULT_HISTOGRAM_BINS),
        None => None,
    }
}

/// `⟨r̃⟩`, `η` and degeneracy count per point, with an optional spacing histogram table.
pub fn run_spectral(config: &ExperimentConfig) -> CliResult<RunOutput> {
    config.validate()?;
    let points = config.points();
    let bins = histogram_bins(config);
    let results = map_points(config, &points, |p| spectral_point(config, p, bins))?;

    let mut table = Table::new(
        "spectral",
        &columns(&["dim", "r_mean", "eta", "degeneracies", "flag", "l1_poisson", "l1_wigner", "overflow"]),
    );
    let mut hist = Table::new(
        "histogram",
        &columns(&["bin", "s_lo", "s_hi", "density", "poisson", "wigner"]),
    );
    let mut warnings = Vec::new();
    for (p, sp) in points.iter().zip(&results) {
        let ctx = context_values(config, p);
        let flag = if sp.degenerate {
            warnings.push(format!(
                "{}: {} of {} level spacings vanish, η undefined",
                point_label(config, p),
                sp.stats.degeneracies,
                sp.dim
            ));
            "degenerate"
        } else if sp.stats.degeneracies > 0 {
            "degeneracies"
        } else {
            ""
        };
        let mut row = ctx.clone();
        row.extend([
            sp.dim.into(),
            sp.stats.r_mean.into(),
            sp.eta().into(),
            sp.stats.degeneracies.into(),
            flag.into(),
            sp.histogram.as_ref().map(|h| h.l1_to_poisson()).into(),
            sp.histogram.as_ref().map(|h| h.l1_to_wigner()).into(),
            sp.histogram.as_ref().map(|h| h.overflow).into(),
        ]);
        table.push(row);
        if let Some(h) = &sp.histogram {
            for b in 0..h.bins() {
                let mut row = ctx.clone();
                row.extend([
                    b.into(),
                    h.edges[b].into(),
                    h.edges[b + 1].into(),
                    h.density[b].into(),
                    h.poisson[b].into(),
                    h.wigner[b].into(),
                ]);
                hist.push(row);
            }
        }
    }
    let mut tables = vec![table];
    if bins.is_some() {
        tables.push(hist);
    }
    Ok(RunOutput { tables, warnings })
}

/// Columns of the sweep table that get a rescaled companion.
pub const SWEEP_OBSERVABLES: [&str; 9] = [
    "sigma_sub",
    "sigma_diag_re",
    "sigma_diag_im",
    "saturation",
    "slope",
    "r_mean",
    "eta",
    "jz_average",
    "krylov_dim",
];

/// Per-point summary over one or two swept couplings, plus a rescaled companion table.
pub fn run_sweep(config: &ExperimentConfig) -> CliResult<RunOutput> {
    config.validate()?;
    let swept = config.swept_parameters();
    if swept.is_empty() || swept.len() > 2 {
        return Err(CliError::Config(format!(
            "sweep needs one or two swept couplings, found {} ({})",
            swept.len(),
            swept.join(", ")
        )));
    }
    let points = config.points();
    let want_eta = config.wants(Observable::Eta);
    let results = map_points(config, &points, |p| {
        let runs = krylov_runs(config, p)?;
        let spectral = if want_eta { Some(spectral_point(config, p, None)?) } else { None };
        Ok((runs, spectral))
    })?;

    let mut cols = vec!["state", "draw", "krylov_dim", "halted_early"];
    cols.extend(&SWEEP_OBSERVABLES[..8]);
    cols.push("slope_within_bound");
    cols.push("max_excess_over_linear");
    let mut table = Table::new("sweep", &columns(&cols));
    let mut representative = Vec::new();
    let mut warnings = Vec::new();

    for (p, (runs, spectral)) in points.iter().zip(&results) {
        let ctx = context_values(config, p);
        let r_mean = spectral.as_ref().map(|s| s.stats.r_mean);
        let eta = spectral.as_ref().map(|s| s.eta());
        if spectral.as_ref().is_some_and(|s| s.degenerate) {
            warnings.push(format!("{}: degenerate spectrum, η undefined", point_label(config, p)));
        }
        let row_for = |s: &RunSummary| {
            let mut row = ctx.clone();
            row.extend([
                s.label.into(),
                s.draw.into(),
                s.krylov_dim.into(),
                s.halted_early.into(),
                s.dispersion[0].into(),
                s.dispersion[1].into(),
                s.dispersion[2].into(),
                s.saturation.into(),
                s.slope.into(),
                r_mean.into(),
                eta.into(),
                s.magnetization.into(),
                s.slope_within_bound.into(),
                s.max_excess_over_linear.into(),
            ]);
            row
        };
        let summaries: Vec<RunSummary> = runs.iter().map(RunSummary::of).collect();
        for s in &summaries {
            if s.draw.is_none() {
                representative.push(table.len());
            }
            table.push(row_for(s));
        }
        if matches!(config.initial_state, InitialState::Random { .. }) {
            representative.push(table.len());
            table.push(row_for(&RunSummary::mean_of(&summaries)));
        }
    }

    let mut tables = vec![table];
    if points.len() >= 2 {
        let (rescaled, skipped) = rescaled_table(&tables[0], &representative);
        for column in skipped {
            warnings.push(format!("rescaled table: column {column} skipped (constant or missing)"));
        }
        tables.push(rescaled);
    }
    Ok(RunOutput { tables, warnings })
}

/// Applies `rescale` to each observable column over the given rows.
/// Returns the table and the names of columns that could not be rescaled.
pub fn rescaled_table(sweep: &Table, rows: &[usize]) -> (Table, Vec<String>) {
    let mut keep: Vec<&str> = context_columns();
    keep.push("state");
    let mut out_cols = keep.clone();
    let mut scaled = Vec::new();
    let mut skipped = Vec::new();
    for name in SWEEP_OBSERVABLES {
        let Some(col) = sweep.column_index(name) else { continue };
        let values: Vec<f64> = rows
            .iter()
            .map(|&r| sweep.rows[r][col].as_f64().unwrap_or(f64::NAN))
            .collect();
        if values.iter().any(|v| !v.is_finite()) {
            skipped.push(name.to_string());
            continue;
        }
        match rescale(&values) {
            Ok(r) => {
                out_cols.push(name);
                scaled.push(r);
            }
            Err(_) => skipped.push(name.to_string()),
        }
    }
    let mut table = Table::new("rescaled", &out_cols);
    for (i, &r) in rows.iter().enumerate() {
        let mut row: Vec<Value> = keep
            .iter()
            .map(|c| sweep.rows[r][sweep.column_index(c).expect("context column")].clone())
            .collect();
        row.extend(scaled.iter().map(|s| Value::Float(s[i])));
        table.push(row);
    }
    (table, skipped)
}

/// Monte Carlo `⟨r̃⟩` for Poisson phases and GOE bulk spectra.
pub fn run_calibration(config: &ExperimentConfig) -> CliResult<RunOutput> {
    let c = &config.calibration;
    let num = |e| CliError::Numerical(format!("calibration: {e}"));
    if c.poisson_samples < 3 || c.goe_matrices < 2 || c.goe_dim < 8 {
        return Err(CliError::Config(
            "calibration needs poisson_samples >= 3, goe_matrices >= 2 and goe_dim >= 8".into(),
        ));
    }
    let poisson = calibrate_poisson(c.poisson_samples, c.seed).map_err(num)?;
    let samples = map_points(
        config,
        &(0..c.goe_matrices).collect::<Vec<_>>(),
        |&k| goe_sample(c.goe_dim, c.seed, k).map_err(num),
    )?;
    let goe = combine_samples(&samples).map_err(num)?;

    let mut table = Table::new(
        "calibration",
        &["ensemble", "samples", "dim", "seed", "ratios", "r_mean", "std_error", "reference", "deviation", "tolerance", "within_tolerance"],
    );
    let rows = [
        ("poisson", c.poisson_samples, c.poisson_samples, poisson, R_POISSON, 0.005),
        ("goe", c.goe_matrices, c.goe_dim, goe, R_GOE, 0.010),
    ];
    for (name, samples, dim, cal, reference, tol) in rows {
        let deviation = cal.r_mean - reference;
        table.push(vec![
            name.into(),
            samples.into(),
            dim.into(),
            Value::UInt(c.seed),
            cal.ratios.into(),
            cal.r_mean.into(),
            cal.std_error.into(),
            reference.into(),
            deviation.into(),
            tol.into(),
            (deviation.abs() <= tol).into(),
        ]);
    }
    Ok(RunOutput {
        tables: vec![table],
        warnings: Vec::new(),
    })
}
