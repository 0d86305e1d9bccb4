//! One function per subcommand. Each renders its artifact into memory and then
//! writes it to `--out` or standard output.

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::Path;

use peakeq_core::equal_roots::{self, EqualRootSpec};
use peakeq_core::noise::{self, NoiseBand, NoiseSequence};
use peakeq_core::recurrence::{self, HorizonPolicy, PeakReport};
use peakeq_core::root_bounds::{self, BoundCheckReport, ConjectureProbeReport, RealRootSet};
use peakeq_core::seeds;
use peakeq_core::special::{self, RegionAreas, TrinomialEquation};
use peakeq_core::{InitialCondition, Trajectory};
use serde::Serialize;

use crate::config::{Format, RootValue, RunConfig, TrinomialMode};
use crate::output::{self, LoadedTrajectory};
use crate::{parallel, CliError, Result};

pub const COMMANDS: &[&str] = &[
    "simulate",
    "peak",
    "worst-case",
    "equal-roots",
    "table1",
    "bounds-check",
    "noise",
    "markov",
    "trinomial",
    "conjecture",
];

pub fn run(cfg: &RunConfig) -> Result<()> {
    let command = cfg
        .command
        .as_deref()
        .ok_or_else(|| CliError::usage("no command given"))?;
    match command {
        "simulate" => simulate(cfg),
        "peak" => peak(cfg),
        "worst-case" => worst_case(cfg),
        "equal-roots" => equal_roots_cmd(cfg),
        "table1" => table1(cfg),
        "bounds-check" => bounds_check(cfg),
        "noise" => noise_cmd(cfg),
        "markov" => markov(cfg),
        "trinomial" => trinomial(cfg),
        "conjecture" => conjecture(cfg),
        other => Err(CliError::usage(format!(
            "unknown command `{other}` (expected one of {})",
            COMMANDS.join(", ")
        ))),
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn emit(cfg: &RunConfig, bytes: &[u8]) -> Result<()> {
    match &cfg.out {
        Some(path) => std::fs::write(path, bytes).map_err(io_err(path)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(io_err(Path::new("<stdout>")))
        }
    }
}

fn render(f: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> Vec<u8> {
    let mut buf = Vec::new();
    f(&mut buf).expect("writing to memory cannot fail");
    buf
}

fn json<T: Serialize>(value: &T) -> Vec<u8> {
    render(|w| output::write_json(w, value))
}

fn policy(cfg: &RunConfig) -> HorizonPolicy {
    match cfg.horizon {
        Some(cap) => HorizonPolicy::with_cap(cap),
        None => HorizonPolicy::default(),
    }
}

fn require_stable(cfg: &RunConfig, eq: &peakeq_core::DifferenceEquation) -> Result<()> {
    let margin = cfg.margin.unwrap_or(0.0);
    if recurrence::is_schur_stable_with_margin(eq, margin)? {
        Ok(())
    } else {
        Err(peakeq_core::Error::Unstable {
            spectral_radius: recurrence::spectral_radius(eq)?,
        }
        .into())
    }
}

#[derive(Serialize)]
struct TrajectoryJson<'a> {
    order: usize,
    horizon: usize,
    samples: &'a [f64],
    #[serde(skip_serializing_if = "Option::is_none")]
    forcing: Option<&'a [f64]>,
}

#[derive(serde::Deserialize)]
struct TrajectoryJsonIn {
    samples: Vec<f64>,
    forcing: Option<Vec<f64>>,
}

fn simulate(cfg: &RunConfig) -> Result<()> {
    let resolved = cfg.equation()?;
    let eq = &resolved.equation;
    let n = eq.order();
    let init = cfg.initial_condition(&resolved)?;
    let horizon = cfg.horizon.unwrap_or(100);
    let (traj, forcing): (Trajectory, Option<Vec<f64>>) = match cfg.epsilon {
        Some(eps) if eps != 0.0 => {
            let v = NoiseSequence::constant(eps, (horizon + 1).saturating_sub(n));
            (noise::simulate_noisy(eq, &init, &v, horizon)?, Some(v.values().to_vec()))
        }
        _ => (recurrence::simulate(eq, &init, horizon)?, None),
    };
    let format = cfg.format_or(Format::Csv);
    let bytes = match (format, &forcing) {
        (Format::Csv, None) => render(|w| output::write_trajectory(w, &traj)),
        (Format::Csv, Some(v)) => render(|w| output::write_noisy_trajectory(w, &traj, v, n)),
        (Format::Json, _) => json(&TrajectoryJson {
            order: n,
            horizon,
            samples: traj.samples(),
            forcing: forcing.as_deref(),
        }),
    };
    let parse = |bytes: &[u8]| -> Result<LoadedTrajectory> {
        match format {
            Format::Csv => output::read_trajectory(bytes),
            Format::Json => {
                let t: TrajectoryJsonIn = serde_json::from_slice(bytes).map_err(|e| CliError::Config(e.to_string()))?;
                Ok(LoadedTrajectory {
                    samples: t.samples,
                    forcing: t.forcing,
                })
            }
        }
    };
    output::validate_loaded(eq, &parse(&bytes)?)?;
    emit(cfg, &bytes)?;
    if let Some(path) = &cfg.out {
        let on_disk = match format {
            Format::Csv => output::read_trajectory(BufReader::new(File::open(path).map_err(io_err(path))?))?,
            Format::Json => parse(&std::fs::read(path).map_err(io_err(path))?)?,
        };
        output::validate_loaded(eq, &on_disk)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct PeakJson {
    peak_value: f64,
    peak_instants: Vec<usize>,
    has_peak: bool,
    horizon_used: usize,
    certified: bool,
    init: Vec<f64>,
}

impl PeakJson {
    fn new(report: PeakReport, init: &InitialCondition) -> Self {
        Self {
            peak_value: report.peak_value,
            has_peak: report.has_peak(),
            peak_instants: report.peak_instants,
            horizon_used: report.horizon_used,
            certified: report.certified,
            init: init.values().to_vec(),
        }
    }

    fn csv(&self) -> Vec<u8> {
        render(|w| {
            writeln!(w, "peak_value,peak_instants,has_peak,horizon_used,certified,init")?;
            writeln!(
                w,
                "{},{},{},{},{},{}",
                output::fmt_f64(self.peak_value),
                self.peak_instants.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(";"),
                self.has_peak,
                self.horizon_used,
                self.certified,
                self.init.iter().map(|x| output::fmt_f64(*x)).collect::<Vec<_>>().join(";")
            )
        })
    }
}

fn peak(cfg: &RunConfig) -> Result<()> {
    let resolved = cfg.equation()?;
    require_stable(cfg, &resolved.equation)?;
    let init = cfg.initial_condition(&resolved)?;
    let report = recurrence::peak_with_policy(&resolved.equation, &init, &policy(cfg))?;
    let out = PeakJson::new(report, &init);
    match cfg.format_or(Format::Json) {
        Format::Json => emit(cfg, &json(&out)),
        Format::Csv => emit(cfg, &out.csv()),
    }
}

fn worst_case(cfg: &RunConfig) -> Result<()> {
    let resolved = cfg.equation()?;
    require_stable(cfg, &resolved.equation)?;
    let (init, report) = recurrence::worst_case_peak(&resolved.equation, &policy(cfg))?;
    let out = PeakJson::new(report, &init);
    match cfg.format_or(Format::Json) {
        Format::Json => emit(cfg, &json(&out)),
        Format::Csv => emit(cfg, &out.csv()),
    }
}

fn equal_root_spec(cfg: &RunConfig) -> Result<EqualRootSpec> {
    if let Some(e) = cfg.equal_roots {
        return Ok(EqualRootSpec::new(e.n, e.rho)?);
    }
    let n = RunConfig::require(cfg.n, "n")?;
    let rho = RunConfig::require(cfg.rho, "rho")?;
    Ok(EqualRootSpec::new(n, rho)?)
}

#[derive(Serialize)]
struct EqualRootsJson {
    n: usize,
    rho: f64,
    alpha_n: f64,
    beta_n: f64,
    #[serde(rename = "K_alpha")]
    k_alpha: Vec<usize>,
    #[serde(rename = "K_beta")]
    k_beta: Vec<usize>,
    rho_star_beta: f64,
    rho_star_alpha: f64,
    #[serde(rename = "K_alpha_est")]
    k_alpha_est: f64,
    #[serde(rename = "K_beta_est")]
    k_beta_est: f64,
    alpha_est: Option<f64>,
    beta_est: Option<f64>,
}

fn equal_roots_cmd(cfg: &RunConfig) -> Result<()> {
    let spec = equal_root_spec(cfg)?;
    let n = spec.order();
    match cfg.format_or(Format::Json) {
        Format::Json => {
            let s = equal_roots::summary(&spec)?;
            let est = equal_roots::asymptotic_estimates(&spec);
            emit(
                cfg,
                &json(&EqualRootsJson {
                    n,
                    rho: spec.rho(),
                    alpha_n: s.alpha_n,
                    beta_n: s.beta_n,
                    k_alpha: s.k_alpha,
                    k_beta: s.k_beta,
                    rho_star_beta: s.rho_star_beta,
                    rho_star_alpha: s.rho_star_alpha,
                    k_alpha_est: est.k_alpha_est,
                    k_beta_est: est.k_beta_est,
                    alpha_est: est.alpha_est,
                    beta_est: est.beta_est,
                }),
            )
        }
        Format::Csv => {
            let horizon = match cfg.horizon {
                Some(h) => h,
                None => HorizonPolicy::default().initial_horizon(n, spec.rho()),
            };
            if horizon < n {
                return Err(CliError::usage("--horizon must be at least n"));
            }
            let curve = equal_roots::peak_curve(&spec, n..=horizon);
            emit(cfg, &render(|w| output::write_peak_curve(w, &curve)))
        }
    }
}

#[derive(Serialize)]
struct Table1Json {
    n: usize,
    beta_n: f64,
    alpha_n: f64,
    #[serde(rename = "K_beta")]
    k_beta: Vec<usize>,
    #[serde(rename = "K_alpha")]
    k_alpha: Vec<usize>,
}

fn table1(cfg: &RunConfig) -> Result<()> {
    let n_max = cfg.n_max.unwrap_or(7);
    if n_max < 2 {
        return Err(CliError::usage("--n-max must be at least 2"));
    }
    let rows = (2..=n_max)
        .map(equal_roots::table1_row)
        .collect::<peakeq_core::Result<Vec<_>>>()?;
    match cfg.format_or(Format::Csv) {
        Format::Csv => emit(cfg, &render(|w| output::write_table1(w, &rows))),
        Format::Json => {
            let rows: Vec<Table1Json> = rows
                .into_iter()
                .map(|r| Table1Json {
                    n: r.n,
                    beta_n: r.beta_n,
                    alpha_n: r.alpha_n,
                    k_beta: r.k_beta,
                    k_alpha: r.k_alpha,
                })
                .collect();
            emit(cfg, &json(&rows))
        }
    }
}

#[derive(Serialize)]
struct BoundReportJson {
    horizon: usize,
    min_slack: f64,
    worst_k: usize,
    max_ratio: f64,
    peak_value: f64,
    beta_peak: f64,
}

impl From<BoundCheckReport> for BoundReportJson {
    fn from(r: BoundCheckReport) -> Self {
        Self {
            horizon: r.horizon,
            min_slack: r.min_slack,
            worst_k: r.worst_k,
            max_ratio: r.max_ratio,
            peak_value: r.peak_value,
            beta_peak: r.beta_peak,
        }
    }
}

#[derive(Serialize)]
struct BoundsJson {
    roots: Vec<f64>,
    rho: f64,
    lower: Option<BoundReportJson>,
    upper: Option<BoundReportJson>,
    necessary_coefficient_conditions: Option<bool>,
    peak_by_coefficient_sum: bool,
    peak_by_root_sum: bool,
}

fn bounds_check(cfg: &RunConfig) -> Result<()> {
    let roots: Vec<f64> = cfg
        .roots
        .as_ref()
        .ok_or_else(|| CliError::usage("bounds-check needs --roots (real)"))?
        .iter()
        .map(|r| match r {
            RootValue::Real(x) => Ok(*x),
            RootValue::Complex(_) => Err(CliError::usage("bounds-check needs real roots")),
        })
        .collect::<Result<_>>()?;
    let rho = RunConfig::require(cfg.rho, "rho")?;
    let horizon = cfg.horizon.unwrap_or(500);
    let set = RealRootSet::tight(roots.clone())?;
    let lower_applies = roots.iter().all(|&l| l >= rho && l < 1.0);
    let upper_applies = roots.iter().all(|&l| l.abs() <= rho);
    if !lower_applies && !upper_applies {
        return Err(CliError::usage(
            "roots must all lie in [rho, 1) (lower bound) or in [-rho, rho] (upper bound)",
        ));
    }
    let lower = if lower_applies {
        Some(root_bounds::check_lower_bound(&set, rho, horizon)?.into())
    } else {
        None
    };
    let upper = if upper_applies {
        Some(root_bounds::check_upper_bound(&set, rho, horizon)?.into())
    } else {
        None
    };
    let necessary = if lower_applies {
        Some(root_bounds::necessary_coefficient_conditions(&set, rho)?)
    } else {
        None
    };
    let report = BoundsJson {
        peak_by_coefficient_sum: root_bounds::peak_exists_coefficient_sum(&set.equation())?,
        peak_by_root_sum: root_bounds::peak_sufficient_root_sum(&roots)?,
        roots,
        rho,
        lower,
        upper,
        necessary_coefficient_conditions: necessary,
    };
    emit(cfg, &json(&report))
}

#[derive(Serialize)]
struct NoiseJson {
    epsilon: f64,
    steady_state: Option<f64>,
    tail_bound: Option<f64>,
    rows: Vec<SweepRowJson>,
}

#[derive(Serialize)]
struct SweepRowJson {
    t: usize,
    box_lp_max: f64,
    convolution_bound: Option<f64>,
    tail_bound: Option<f64>,
}

fn noise_cmd(cfg: &RunConfig) -> Result<()> {
    let resolved = cfg.equation()?;
    let eq = &resolved.equation;
    let n = eq.order();
    let eps = cfg.epsilon.unwrap_or(0.0);
    let band = NoiseBand::new(eps)?;
    let horizon = cfg.horizon.unwrap_or(200);
    if horizon < n {
        return Err(CliError::usage("--horizon must be at least the order"));
    }
    require_stable(cfg, eq)?;
    let (rows, steady, tail) = match resolved.equal_roots {
        Some(spec) => {
            let rows = noise::bound_sweep(n, spec.rho(), &band, n..=horizon)?;
            let rows: Vec<SweepRowJson> = rows
                .into_iter()
                .map(|r| SweepRowJson {
                    t: r.t,
                    box_lp_max: r.box_lp_max,
                    convolution_bound: Some(r.convolution_bound),
                    tail_bound: Some(r.tail_bound),
                })
                .collect();
            (
                rows,
                Some(noise::steady_state(n, spec.rho(), &band)?),
                Some(noise::geometric_tail_bound(n, spec.rho(), &band)?),
            )
        }
        None => {
            let sols = noise::box_lp_max_range(eq, &band, n..=horizon)?;
            let rows = sols
                .into_iter()
                .map(|s| SweepRowJson {
                    t: s.t,
                    box_lp_max: s.value,
                    convolution_bound: None,
                    tail_bound: None,
                })
                .collect();
            (rows, None, None)
        }
    };
    match cfg.format_or(Format::Csv) {
        Format::Json => emit(
            cfg,
            &json(&NoiseJson {
                epsilon: eps,
                steady_state: steady,
                tail_bound: tail,
                rows,
            }),
        ),
        Format::Csv => {
            let bytes = render(|w| {
                writeln!(w, "t,box_lp_max,convolution_bound,tail_bound")?;
                for r in &rows {
                    let opt = |v: Option<f64>| v.map(output::fmt_f64).unwrap_or_default();
                    writeln!(
                        w,
                        "{},{},{},{}",
                        r.t,
                        output::fmt_f64(r.box_lp_max),
                        opt(r.convolution_bound),
                        opt(r.tail_bound)
                    )?;
                }
                Ok(())
            });
            emit(cfg, &bytes)
        }
    }
}

#[derive(Serialize)]
struct MarkovJson {
    rho: f64,
    peak_instant: usize,
    peak_instants: Vec<usize>,
    peak: f64,
    has_peak: bool,
    #[serde(rename = "K_est")]
    k_est: f64,
    eta_est: f64,
    rho_star: f64,
}

fn markov(cfg: &RunConfig) -> Result<()> {
    let rho = cfg
        .rho
        .or(cfg.markov)
        .ok_or_else(|| CliError::usage("markov needs --rho"))?;
    let report = special::markov_peak(rho)?;
    let est = special::markov_peak_estimates(rho)?;
    let out = MarkovJson {
        rho,
        peak_instant: report.first_instant(),
        has_peak: report.has_peak(),
        peak_instants: report.peak_instants,
        peak: report.peak_value,
        k_est: est.k_est,
        eta_est: est.eta_est,
        rho_star: est.rho_star,
    };
    emit(cfg, &json(&out))
}

#[derive(Serialize)]
struct BoundaryJson<'a> {
    n: usize,
    singular_gaps: usize,
    off_boundary: usize,
    points: Vec<[f64; 3]>,
    #[serde(skip)]
    _marker: std::marker::PhantomData<&'a ()>,
}

#[derive(Serialize)]
struct ClassifyJson {
    n: usize,
    a: f64,
    b: f64,
    in_stability: bool,
    in_cohn: bool,
    in_peak_domain: bool,
}

#[derive(Serialize)]
struct AreasJson {
    n: usize,
    samples: usize,
    seed: u64,
    area_s: f64,
    area_p: f64,
    area_c: f64,
    ratio: f64,
    std_err_s: f64,
    std_err_p: f64,
    std_err_ratio: f64,
    cohn_outside_s: usize,
}

impl AreasJson {
    fn new(r: RegionAreas, seed: u64) -> Self {
        Self {
            n: r.n,
            samples: r.samples,
            seed,
            area_s: r.area_s,
            area_p: r.area_p,
            area_c: r.area_c,
            ratio: r.ratio,
            std_err_s: r.std_err_s,
            std_err_p: r.std_err_p,
            std_err_ratio: r.std_err_ratio,
            cohn_outside_s: r.cohn_outside_s,
        }
    }
}

#[derive(Serialize)]
struct RampJson {
    n: usize,
    a: f64,
    rho: f64,
    b2: f64,
    peak_instant: usize,
    eta_normalized: f64,
    eta_lower: f64,
    horizon: usize,
    max_abs_deviation: f64,
}

fn trinomial(cfg: &RunConfig) -> Result<()> {
    let mode = RunConfig::require(cfg.mode, "mode")?;
    let n = RunConfig::require(cfg.n.or(cfg.trinomial.map(|t| t.n)), "n")?;
    match mode {
        TrinomialMode::Boundary => {
            let b = special::stability_boundary(n, cfg.resolution.unwrap_or(2000))?;
            match cfg.format_or(Format::Csv) {
                Format::Csv => emit(cfg, &render(|w| output::write_boundary(w, &b.points))),
                Format::Json => emit(
                    cfg,
                    &json(&BoundaryJson {
                        n,
                        singular_gaps: b.singular_gaps,
                        off_boundary: b.off_boundary,
                        points: b.points.iter().map(|p| [p.omega, p.a, p.b]).collect(),
                        _marker: std::marker::PhantomData,
                    }),
                ),
            }
        }
        TrinomialMode::Classify => {
            let a = RunConfig::require(cfg.a.or(cfg.trinomial.map(|t| t.a)), "a")?;
            let b = RunConfig::require(cfg.b.or(cfg.trinomial.map(|t| t.b)), "b")?;
            let s = special::classify_point(n, a, b)?;
            emit(
                cfg,
                &json(&ClassifyJson {
                    n,
                    a,
                    b,
                    in_stability: s.in_stability,
                    in_cohn: s.in_cohn,
                    in_peak_domain: s.in_peak_domain,
                }),
            )
        }
        TrinomialMode::Areas => {
            let samples = cfg.samples.unwrap_or(1_000_000);
            let seed = cfg.seed.unwrap_or(0);
            match cfg.format_or(Format::Json) {
                Format::Json => emit(cfg, &json(&AreasJson::new(parallel::region_areas(n, samples, seed)?, seed))),
                Format::Csv => {
                    let mut points = Vec::with_capacity(samples);
                    for (s, count) in seeds::partitions(seed, samples) {
                        points.extend(special::region_samples(n, count, s)?);
                    }
                    emit(cfg, &render(|w| output::write_regions(w, &points)))
                }
            }
        }
        TrinomialMode::Ramp => {
            let a = RunConfig::require(cfg.a.or(cfg.trinomial.map(|t| t.a)), "a")?;
            let r = special::ramp_solution(n, a)?;
            let horizon = cfg.horizon.unwrap_or(100);
            let eq = TrinomialEquation::new(n, a, r.b2)?.to_equation();
            let traj = recurrence::simulate(&eq, &r.init, horizon)?;
            match cfg.format_or(Format::Json) {
                Format::Csv => emit(cfg, &render(|w| output::write_trajectory(w, &traj))),
                Format::Json => {
                    let dev = traj
                        .samples()
                        .iter()
                        .enumerate()
                        .map(|(k, x)| (x - r.value(k)).abs())
                        .fold(0.0, f64::max);
                    emit(
                        cfg,
                        &json(&RampJson {
                            n,
                            a,
                            rho: r.rho,
                            b2: r.b2,
                            peak_instant: r.peak_instant,
                            eta_normalized: r.eta_normalized,
                            eta_lower: r.eta_lower,
                            horizon,
                            max_abs_deviation: dev,
                        }),
                    )
                }
            }
        }
    }
}

#[derive(Serialize)]
struct CounterexampleJson {
    roots: Vec<[f64; 2]>,
    init: Vec<f64>,
    value: f64,
}

#[derive(Serialize)]
struct ProbeJson {
    n: usize,
    rho: f64,
    samples: usize,
    seed: u64,
    max_observed_peak: f64,
    reference_peak: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    counterexample: Option<CounterexampleJson>,
}

impl From<ConjectureProbeReport> for ProbeJson {
    fn from(r: ConjectureProbeReport) -> Self {
        Self {
            n: r.n,
            rho: r.rho,
            samples: r.samples_tested,
            seed: r.seed,
            max_observed_peak: r.max_observed_peak,
            reference_peak: r.reference_peak,
            counterexample: r.counterexample.map(|c| CounterexampleJson {
                roots: c.roots.iter().map(|z| [z.re, z.im]).collect(),
                init: c.init,
                value: c.value,
            }),
        }
    }
}

fn conjecture(cfg: &RunConfig) -> Result<()> {
    let (n, rho) = match cfg.equal_roots {
        Some(e) => (e.n, e.rho),
        None => (RunConfig::require(cfg.n, "n")?, RunConfig::require(cfg.rho, "rho")?),
    };
    let samples = cfg.samples.unwrap_or(10_000);
    let seed = cfg.seed.unwrap_or(0);
    let report = parallel::conjecture_probe(n, rho, samples, seed)?;
    emit(cfg, &json(&ProbeJson::from(report)))
}
