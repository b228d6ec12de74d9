use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use eqdeg::bifurcation::{
    h_fixed_invariant, local_invariant, predict_branches, BranchKind, Mode, SCHEMA_VERSION,
};
use eqdeg::burnside::{multiplication_table, multiplication_table_oracle};
use eqdeg::groups::{dihedral_group, gamma_prime, DihedralElement, SubgroupClassLattice};
use eqdeg::reps::{character_table, LaplacianEigendata};
use eqdeg::spectrum::{
    enumerate_critical_points, parse_nu, CouplingCurve, ModelParams, Tolerances, Window,
};
use eqdeg::verify::{
    export_eigenfunction, fd_sigma_min, sigma_min_scan, spectral_check, symmetry_check, FdSpec,
};
use eqdeg::{Exec, SymmetryContext};
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "eqdeg",
    version,
    about = "Equivariant-degree bifurcation analysis for a ring of delayed, damped wave equations"
)]
struct Cli {
    /// TOML configuration file; command-line flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Run every data-parallel loop sequentially.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate critical parameter values in the index window.
    CriticalPoints {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Predict bifurcating branches with their symmetry groups.
    Predict {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value_t = ModeArg::Global)]
        mode: ModeArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Local bifurcation invariant at a parameter point.
    Invariant {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long, value_enum, default_value_t = ModeArg::Local)]
        mode: ModeArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Numerical singularity scan and spectral cross-check.
    Verify {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long, default_value_t = 128)]
        mt: usize,
        #[arg(long, default_value_t = 64)]
        mx: usize,
        #[arg(long, default_value_t = 0.1)]
        radius: f64,
        #[arg(long, default_value_t = 16)]
        ring_points: usize,
        /// Also evaluate σ_min at the centre on a grid refined twice.
        #[arg(long)]
        refine: bool,
        /// Ratio σ_min(centre)/min(ring) at or below which the centre counts as singular.
        #[arg(long, default_value_t = 0.1)]
        threshold: f64,
        /// Temporal truncation of the spectral cross-check.
        #[arg(long, default_value_t = 4)]
        spectral_m: u32,
        /// Spatial truncation of the spectral cross-check.
        #[arg(long, default_value_t = 4)]
        spectral_n: u32,
        /// CSV file receiving (d_alpha, d_beta, sigma_min) per ring point.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Sample an eigenfunction with prescribed maximal symmetry on a grid (CSV).
    ExportEigenfunction {
        #[arg(long = "ring-size", default_value_t = 7)]
        ring_size: usize,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long = "spatial-mode", default_value_t = 1)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        j: usize,
        #[arg(long, default_value = "H")]
        kind: String,
        #[arg(long, default_value_t = 256)]
        mt: usize,
        #[arg(long, default_value_t = 128)]
        mx: usize,
        /// Print the symmetry-relation check of the exported grid as JSON on stderr.
        #[arg(long)]
        check: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Subgroup lattice, n(H,K), characters and Burnside products as CSV.
    GroupTables {
        #[arg(long = "ring-size", default_value_t = 3)]
        ring_size: usize,
        #[arg(long, value_enum, default_value_t = TableKind::Lattice)]
        table: TableKind,
        #[arg(long, value_enum, default_value_t = GroupKind::GammaPrime)]
        group: GroupKind,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Local,
    Global,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableKind {
    Lattice,
    NTable,
    Characters,
    Burnside,
    BurnsideOracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupKind {
    Dihedral,
    GammaPrime,
}

#[derive(Clone, Copy, ValueEnum)]
enum CouplingKind {
    Sigmoid,
    Linear,
}

#[derive(Args, Default)]
struct ModelArgs {
    /// Wave frequency as a rational p/q.
    #[arg(long)]
    nu: Option<String>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    /// Number of coupled strings N.
    #[arg(long = "ring-size")]
    ring_size: Option<usize>,
    #[arg(long, value_enum)]
    coupling: Option<CouplingKind>,
    #[arg(long, allow_hyphen_values = true)]
    steepness: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    slope: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    offset: Option<f64>,
    #[arg(long)]
    m_max: Option<u32>,
    #[arg(long)]
    n_max: Option<u32>,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    model: Option<ModelSection>,
    window: Option<Window>,
    tolerances: Option<Tolerances>,
    /// (j, [z_{j,1}, ...]) entries replacing the cycle Laplacian spectrum.
    eigendata: Option<Vec<(usize, Vec<f64>)>>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ModelSection {
    nu: Option<String>,
    delta: Option<f64>,
    tau: Option<f64>,
    n: Option<usize>,
    coupling: Option<CouplingCurve>,
}

fn load_config(path: &Option<PathBuf>) -> Result<ConfigFile> {
    match path {
        None => Ok(ConfigFile::default()),
        Some(p) => {
            let text =
                std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            toml::from_str(&text).with_context(|| format!("parsing {}", p.display()))
        }
    }
}

fn resolve_model(cfg: &ConfigFile, args: &ModelArgs) -> Result<(ModelParams, Window)> {
    let sec = cfg.model.as_ref();
    let nu = args
        .nu
        .clone()
        .or_else(|| sec.and_then(|s| s.nu.clone()))
        .unwrap_or_else(|| "1".into());
    let delta = args
        .delta
        .or_else(|| sec.and_then(|s| s.delta))
        .unwrap_or(1.0);
    let tau = args
        .tau
        .or_else(|| sec.and_then(|s| s.tau))
        .context("tau is required (--tau or [model].tau)")?;
    let n = args
        .ring_size
        .or_else(|| sec.and_then(|s| s.n))
        .unwrap_or(3);
    let coupling = match args.coupling {
        Some(CouplingKind::Sigmoid) => CouplingCurve::Sigmoid {
            steepness: args.steepness.unwrap_or(1.0),
        },
        Some(CouplingKind::Linear) => CouplingCurve::Linear {
            slope: args.slope.unwrap_or(1.0),
            offset: args.offset.unwrap_or(0.0),
        },
        None => sec
            .and_then(|s| s.coupling.clone())
            .unwrap_or_else(CouplingCurve::sigmoid),
    };
    let mut params = ModelParams::new(parse_nu(&nu)?, delta, tau, n, coupling)?;
    if let Some(entries) = &cfg.eigendata {
        params = params.with_eigendata(LaplacianEigendata::custom(n, entries.clone())?)?;
    }
    if let Some(t) = cfg.tolerances {
        params = params.with_tolerances(t);
    }
    let base = cfg.window.unwrap_or(Window { m_max: 3, n_max: 3 });
    let window = Window {
        m_max: args.m_max.unwrap_or(base.m_max),
        n_max: args.n_max.unwrap_or(base.n_max),
    };
    Ok((params, window))
}

fn sink(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            Box::new(std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?)
        }
        None => Box::new(std::io::stdout().lock()),
    })
}

fn write_json<T: Serialize>(path: &Option<PathBuf>, value: &T) -> Result<()> {
    let mut w = sink(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}

fn warnings(params: &ModelParams) -> Vec<String> {
    params
        .tau_near_rational_pi(64)
        .map(|(p, q)| vec![format!("tau is within tolerance of {p}/{q}·pi")])
        .unwrap_or_default()
}

#[derive(Serialize)]
struct CriticalPointsReport<'a> {
    schema_version: u32,
    params: &'a ModelParams,
    window: Window,
    tolerances: Tolerances,
    warnings: Vec<String>,
    critical_points: Vec<eqdeg::spectrum::CriticalPoint>,
}

#[derive(Serialize)]
struct InvariantReport {
    schema_version: u32,
    alpha: f64,
    beta: f64,
    mode: Mode,
    window: Window,
    tolerances: Tolerances,
    null: Vec<(eqdeg::spectrum::IndexQuad, i8)>,
    negative: Vec<eqdeg::spectrum::NegativeIndex>,
    negative_factor: Option<String>,
    invariant: Vec<eqdeg::bifurcation::InvariantTerm>,
}

#[derive(Serialize)]
struct VerifyReport {
    schema_version: u32,
    alpha: f64,
    beta: f64,
    scan: eqdeg::verify::ScanResult,
    threshold: f64,
    singular: bool,
    refined_sigma_center: Option<f64>,
    refinement_decreases: Option<bool>,
    spectral_max_deviation: f64,
    spectral_tolerance: f64,
    spectral_pass: bool,
    verdict: String,
}

const SPECTRAL_TOL: f64 = 1e-10;

fn run(cli: Cli) -> Result<()> {
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    };
    let cfg = load_config(&cli.config)?;
    match cli.command {
        Command::CriticalPoints { model, output } => {
            let (params, window) = resolve_model(&cfg, &model)?;
            let points = enumerate_critical_points(&params, window, exec)?;
            if output.format == Format::Csv {
                let mut w = csv::Writer::from_writer(sink(&output.output)?);
                w.write_record(["m", "n", "j", "k", "alpha", "beta", "rho"])?;
                for p in &points {
                    w.write_record([
                        p.quad.m.to_string(),
                        p.quad.n.to_string(),
                        p.quad.j.to_string(),
                        p.quad.k.to_string(),
                        format!("{:.15e}", p.alpha),
                        format!("{:.15e}", p.beta),
                        p.rho.to_string(),
                    ])?;
                }
                w.flush()?;
            } else {
                write_json(
                    &output.output,
                    &CriticalPointsReport {
                        schema_version: SCHEMA_VERSION,
                        params: &params,
                        window,
                        tolerances: params.tolerances,
                        warnings: warnings(&params),
                        critical_points: points,
                    },
                )?;
            }
        }
        Command::Predict {
            model,
            mode,
            output,
        } => {
            let (params, window) = resolve_model(&cfg, &model)?;
            let ctx = SymmetryContext::new(params.n)?;
            let mode = match mode {
                ModeArg::Local => Mode::Local,
                ModeArg::Global => Mode::Global,
            };
            let report = predict_branches(&ctx, &params, window, mode, exec)?;
            if output.format == Format::Csv {
                let mut w = csv::Writer::from_writer(sink(&output.output)?);
                w.write_record([
                    "m",
                    "n",
                    "j",
                    "k",
                    "alpha",
                    "beta",
                    "rho",
                    "kind",
                    "orbit_type",
                    "coeff",
                    "unbounded",
                    "non_stationary",
                ])?;
                for cp in &report.critical_points {
                    for b in &cp.branches {
                        w.write_record([
                            cp.m.to_string(),
                            cp.n.to_string(),
                            cp.j.to_string(),
                            cp.k.to_string(),
                            format!("{:.15e}", cp.alpha),
                            format!("{:.15e}", cp.beta),
                            cp.rho.to_string(),
                            format!("{:?}", b.kind),
                            b.orbit_type.clone(),
                            b.coeff.to_string(),
                            b.unbounded.to_string(),
                            b.non_stationary.to_string(),
                        ])?;
                    }
                }
                w.flush()?;
            } else {
                write_json(&output.output, &report)?;
            }
        }
        Command::Invariant {
            model,
            alpha,
            beta,
            mode,
            output,
        } => {
            let (params, window) = resolve_model(&cfg, &model)?;
            let ctx = SymmetryContext::new(params.n)?;
            let (inv, mode) = match mode {
                ModeArg::Local => (
                    local_invariant(&ctx, &params, alpha, beta, window)?,
                    Mode::Local,
                ),
                ModeArg::Global => (
                    h_fixed_invariant(&ctx, &params, alpha, beta, window)?,
                    Mode::Global,
                ),
            };
            let terms = inv.terms(ctx.twisted());
            if output.format == Format::Csv {
                let mut w = csv::Writer::from_writer(sink(&output.output)?);
                w.write_record(["orbit_type", "coeff"])?;
                for t in &terms {
                    w.write_record([t.orbit_type.clone(), t.coeff.to_string()])?;
                }
                w.flush()?;
            } else {
                write_json(
                    &output.output,
                    &InvariantReport {
                        schema_version: SCHEMA_VERSION,
                        alpha,
                        beta,
                        mode,
                        window,
                        tolerances: params.tolerances,
                        null: inv.contributions.clone(),
                        negative: inv.negative.clone(),
                        negative_factor: inv
                            .negative_factor
                            .as_ref()
                            .map(|f| f.display(ctx.lattice())),
                        invariant: terms,
                    },
                )?;
            }
        }
        Command::Verify {
            model,
            alpha,
            beta,
            mt,
            mx,
            radius,
            ring_points,
            refine,
            threshold,
            spectral_m,
            spectral_n,
            csv: csv_path,
            output,
        } => {
            let (params, _) = resolve_model(&cfg, &model)?;
            let spec = FdSpec { mt, mx };
            let scan = sigma_min_scan(&params, (alpha, beta), radius, ring_points, spec, exec)?;
            let refined = if refine {
                Some(fd_sigma_min(
                    &params,
                    alpha,
                    beta,
                    FdSpec {
                        mt: 2 * mt,
                        mx: 2 * mx,
                    },
                    exec,
                )?)
            } else {
                None
            };
            let dev = spectral_check(&params, alpha, beta, spectral_m, spectral_n)?;
            if let Some(path) = &csv_path {
                let mut w = csv::Writer::from_path(path)?;
                w.write_record(["d_alpha", "d_beta", "sigma_min"])?;
                w.write_record([
                    "0".to_string(),
                    "0".to_string(),
                    format!("{:.15e}", scan.sigma_center),
                ])?;
                for (da, db, s) in &scan.ring {
                    w.write_record([
                        format!("{da:.15e}"),
                        format!("{db:.15e}"),
                        format!("{s:.15e}"),
                    ])?;
                }
                w.flush()?;
            }
            let singular = scan.ratio <= threshold;
            let verdict = if singular {
                "singularity detected"
            } else {
                "no singularity"
            }
            .to_string();
            write_json(
                &output,
                &VerifyReport {
                    schema_version: SCHEMA_VERSION,
                    alpha,
                    beta,
                    threshold,
                    singular,
                    refinement_decreases: refined.map(|r| r < scan.sigma_center),
                    refined_sigma_center: refined,
                    scan,
                    spectral_max_deviation: dev,
                    spectral_tolerance: SPECTRAL_TOL,
                    spectral_pass: dev <= SPECTRAL_TOL,
                    verdict,
                },
            )?;
        }
        Command::ExportEigenfunction {
            ring_size,
            m,
            n,
            j,
            kind,
            mt,
            mx,
            check,
            output,
        } => {
            let kind = BranchKind::parse(&kind)?;
            let u = export_eigenfunction(ring_size, m, n, j, kind, mt, mx)?;
            if check {
                let rels = eqdeg::bifurcation::symmetry_relations(kind, ring_size, m, n, j)?;
                let report = symmetry_check(&u, &rels, 1e-12);
                eprintln!("{}", serde_json::to_string_pretty(&report)?);
            }
            let mut w = csv::Writer::from_writer(sink(&output)?);
            w.write_record(["t", "x", "component", "value"])?;
            for i in 0..u.mt {
                for k in 0..u.mx {
                    for c in 0..u.n {
                        w.write_record([
                            format!("{:.15e}", u.t(i)),
                            format!("{:.15e}", u.x(k)),
                            c.to_string(),
                            format!("{:.15e}", u.get(i, k, c)),
                        ])?;
                    }
                }
            }
            w.flush()?;
        }
        Command::GroupTables {
            ring_size,
            table,
            group,
            output,
        } => {
            let mut w = csv::Writer::from_writer(sink(&output)?);
            if let TableKind::Characters = table {
                write_characters(&mut w, ring_size)?;
                w.flush()?;
                return Ok(());
            }
            let g = match group {
                GroupKind::Dihedral => dihedral_group(ring_size)?,
                GroupKind::GammaPrime => gamma_prime(ring_size)?,
            };
            let lat = SubgroupClassLattice::new(g)?;
            match table {
                TableKind::Lattice => {
                    w.write_record([
                        "class",
                        "name",
                        "order",
                        "class_size",
                        "normalizer_order",
                        "weyl_order",
                    ])?;
                    for (id, c) in lat.classes().iter().enumerate() {
                        w.write_record([
                            id.to_string(),
                            lat.class_name(id),
                            c.order.to_string(),
                            c.members.len().to_string(),
                            c.normalizer_order.to_string(),
                            c.weyl_order.to_string(),
                        ])?;
                    }
                }
                TableKind::NTable => {
                    w.write_record(["h", "k", "n"])?;
                    for h in 0..lat.num_classes() {
                        for k in 0..lat.num_classes() {
                            if lat.n(h, k) > 0 {
                                w.write_record([
                                    h.to_string(),
                                    k.to_string(),
                                    lat.n(h, k).to_string(),
                                ])?;
                            }
                        }
                    }
                }
                TableKind::Burnside | TableKind::BurnsideOracle => {
                    let rows = if let TableKind::Burnside = table {
                        multiplication_table(&lat, exec)?
                    } else {
                        multiplication_table_oracle(&lat, exec)
                    };
                    w.write_record(["h", "k", "product"])?;
                    for ((h, k), p) in rows {
                        let terms: Vec<String> =
                            p.terms().map(|(c, v)| format!("{v}*[{c}]")).collect();
                        w.write_record([h.to_string(), k.to_string(), terms.join(" + ")])?;
                    }
                }
                TableKind::Characters => unreachable!(),
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn write_characters<W: Write>(w: &mut csv::Writer<W>, n: usize) -> Result<()> {
    if n < 3 {
        bail!(eqdeg::Error::InvalidInput(format!(
            "N must be at least 3, got {n}"
        )));
    }
    let mut classes: Vec<(String, DihedralElement)> = vec![("e".into(), DihedralElement::IDENTITY)];
    for r in 1..=n / 2 {
        let d = DihedralElement::rotation(r as i64, n);
        classes.push((d.label(), d));
    }
    classes.push(("k".into(), DihedralElement::kappa()));
    if n.is_multiple_of(2) {
        let d = DihedralElement::reflection_times_rotation(1, n);
        classes.push((d.label(), d));
    }
    let mut header = vec!["irrep".to_string()];
    header.extend(classes.iter().map(|(l, _)| l.clone()));
    w.write_record(&header)?;
    for irr in character_table(n) {
        let mut row = vec![irr.label()];
        row.extend(classes.iter().map(|(_, d)| {
            let v = irr.character(*d, n);
            let r = v.round();
            if (v - r).abs() < 1e-12 {
                format!("{}", r as i64)
            } else {
                format!("{v:.12}")
            }
        }));
        w.write_record(&row)?;
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<eqdeg::Error>() {
        Some(eqdeg::Error::Degenerate(_)) => 2,
        Some(eqdeg::Error::Inexact(_)) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
