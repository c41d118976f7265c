//! Command-line front end: spectrum grids, thermal curves, wave-function
//! profiles, eigensolver runs, and the built-in validation suite, all emitted
//! as deterministic CSV.
//!
//! Exit codes: 0 success, 1 validation/computation failure, 2 usage error.
//! Every error path prints a single machine-parsable line of the form
//! `error[kind]: message` on stderr.

mod config;
mod csv_out;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use config::{
    parse_bracket, parse_dims, parse_f64, parse_method, parse_nodes, parse_u32, parse_variant,
    resolve, resolve_couplings, ConfigError, ConfigFile, DimRange,
};
use csv_out::{fmt_f64, write_csv};
use kg_cornell::ode::{compare_with_closed_form, find_level, OdeProblem};
use kg_cornell::radial::{build_wavefunction, sample_wavefunction, Branch};
use kg_cornell::spectral::{linear_form, spectrum_table, KVariant, QuantumState};
use kg_cornell::thermo::{partition_direct, partition_em, thermo_point, Method};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "kg-cornell",
    version,
    about = "Klein-Gordon bound states with mixed scalar/vector Cornell couplings: spectra, thermodynamics, wave functions, and an independent eigensolver",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

/// Flags shared by every computing subcommand. Values omitted here fall back
/// to the config file (--config) and then to the reference parameter set
/// (M = 1, b_v = 0.002, b_s = 2, a_v = 0.2, a_s = 6).
#[derive(Args, Debug)]
struct CommonOpts {
    /// Rest mass M
    #[arg(long = "M", value_name = "MASS")]
    m: Option<f64>,
    /// Vector Coulomb strength a_v
    #[arg(long)]
    av: Option<f64>,
    /// Scalar Coulomb strength a_s
    #[arg(long = "as")]
    a_s: Option<f64>,
    /// Vector linear strength b_v
    #[arg(long)]
    bv: Option<f64>,
    /// Scalar linear strength b_s
    #[arg(long)]
    bs: Option<f64>,
    /// Plain `key = value` config file; flags take precedence
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output CSV path; `-` writes to stdout
    #[arg(long, value_name = "PATH")]
    out: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Closed-form level grid over (n, l, D), one CSV row per cell
    Spectrum {
        #[command(flatten)]
        common: CommonOpts,
        /// Dimensions, `A..B` inclusive or a single `A` [default: 1..6]
        #[arg(long)]
        dims: Option<String>,
        /// Largest radial index n (grid runs n = 1..=nmax, l = 0..n-1) [default: 5]
        #[arg(long)]
        nmax: Option<u32>,
        /// Exponent convention: table1 | eq27 | half [default: table1]
        #[arg(long)]
        variant: Option<String>,
    },
    /// Partition function and thermal quantities on a temperature grid
    Thermo {
        #[command(flatten)]
        common: CommonOpts,
        /// Single dimension D [default: 3]
        #[arg(long)]
        dims: Option<String>,
        /// Orbital index l [default: 0]
        #[arg(long)]
        l: Option<u32>,
        /// Exponent convention [default: table1]
        #[arg(long)]
        variant: Option<String>,
        /// Grid start mu = k_B T / M [default: 0.5]
        #[arg(long = "mu-min")]
        mu_min: Option<f64>,
        /// Grid end [default: 20]
        #[arg(long = "mu-max")]
        mu_max: Option<f64>,
        /// Grid size [default: 200]
        #[arg(long)]
        points: Option<u32>,
        /// Backend for F/U/S/Cv: direct | em [default: em]
        #[arg(long)]
        method: Option<String>,
    },
    /// Radial wave-function profile under both normalizations
    Wavefunction {
        #[command(flatten)]
        common: CommonOpts,
        /// Single dimension D [default: 3]
        #[arg(long)]
        dims: Option<String>,
        /// Orbital index l [default: 0]
        #[arg(long)]
        l: Option<u32>,
        /// Radial index n [default: 1]
        #[arg(long)]
        n: Option<u32>,
        /// Exponent convention [default: table1]
        #[arg(long)]
        variant: Option<String>,
        /// Sampling endpoint [default: 8/sqrt(beta)]
        #[arg(long)]
        rmax: Option<f64>,
        /// Number of samples [default: 400]
        #[arg(long)]
        samples: Option<u32>,
    },
    /// Numerov shooting eigensolver, one CSV row per requested node count
    Ode {
        #[command(flatten)]
        common: CommonOpts,
        /// Single dimension D [default: 3]
        #[arg(long)]
        dims: Option<String>,
        /// Orbital index l [default: 0]
        #[arg(long)]
        l: Option<u32>,
        /// Node counts to solve, comma separated [default: 0]
        #[arg(long)]
        nodes: Option<String>,
        /// Energy bracket LO,HI [default: 0.5,9]
        #[arg(long)]
        bracket: Option<String>,
        /// Convention for the closed-form comparison [default: table1]
        #[arg(long)]
        variant: Option<String>,
    },
    /// Run the built-in verification suite; exit 0 iff every criterion passes
    Validate,
}

enum Failure {
    Usage(String),
    Config(String),
    Compute(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) | Failure::Config(_) => 2,
            Failure::Compute(_) | Failure::Io(_) => 1,
        }
    }

    fn report(&self) {
        let (kind, msg) = match self {
            Failure::Usage(m) => ("usage", m),
            Failure::Config(m) => ("config", m),
            Failure::Compute(m) => ("compute", m),
            Failure::Io(m) => ("io", m),
        };
        eprintln!("error[{kind}]: {msg}");
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Usage(m) => Failure::Usage(m),
            ConfigError::File { .. } => Failure::Config(e.to_string()),
            ConfigError::Io(m) => Failure::Io(m),
        }
    }
}

fn load_config(common: &CommonOpts) -> Result<ConfigFile, Failure> {
    match &common.config {
        Some(path) => Ok(ConfigFile::load(path)?),
        None => Ok(ConfigFile::default()),
    }
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return 0;
            }
            let first = e.to_string();
            let first = first.lines().next().unwrap_or("invalid arguments");
            let first = first.trim_start_matches("error: ");
            eprintln!("error[usage]: {first}");
            return 2;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(failure) => {
            failure.report();
            failure.code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, Failure> {
    match cli.cmd {
        Cmd::Spectrum {
            common,
            dims,
            nmax,
            variant,
        } => run_spectrum(common, dims, nmax, variant),
        Cmd::Thermo {
            common,
            dims,
            l,
            variant,
            mu_min,
            mu_max,
            points,
            method,
        } => run_thermo(common, dims, l, variant, mu_min, mu_max, points, method),
        Cmd::Wavefunction {
            common,
            dims,
            l,
            n,
            variant,
            rmax,
            samples,
        } => run_wavefunction(common, dims, l, n, variant, rmax, samples),
        Cmd::Ode {
            common,
            dims,
            l,
            nodes,
            bracket,
            variant,
        } => run_ode(common, dims, l, nodes, bracket, variant),
        Cmd::Validate => Ok(run_validate()),
    }
}

fn out_path(common: &CommonOpts, config: &ConfigFile, default: &str) -> String {
    common
        .out
        .clone()
        .or_else(|| config.get("out").map(str::to_string))
        .unwrap_or_else(|| default.to_string())
}

fn run_spectrum(
    common: CommonOpts,
    dims: Option<String>,
    nmax: Option<u32>,
    variant: Option<String>,
) -> Result<i32, Failure> {
    let cfg = load_config(&common)?;
    let couplings = resolve_couplings(common.m, common.av, common.a_s, common.bv, common.bs, &cfg)?;
    let dims_flag = dims.map(|s| parse_dims(&s)).transpose().map_err(usage)?;
    let dims = resolve(
        dims_flag,
        &cfg,
        "dims",
        parse_dims,
        DimRange { lo: 1, hi: 6 },
    )?;
    let nmax_flag = nmax;
    let nmax = resolve(nmax_flag, &cfg, "nmax", parse_u32, 5)?;
    if nmax < 1 {
        return Err(Failure::Usage("--nmax must be at least 1".into()));
    }
    let variant_flag = variant
        .map(|s| parse_variant(&s))
        .transpose()
        .map_err(usage)?;
    let variant = resolve(
        variant_flag,
        &cfg,
        "variant",
        parse_variant,
        KVariant::Table1,
    )?;

    let rows = spectrum_table(&couplings.params, &dims.values(), nmax, variant);
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.d.to_string(),
                r.n.to_string(),
                r.l.to_string(),
                r.variant.tag().to_string(),
                fmt_f64(r.k),
                fmt_f64(r.e_plus),
                fmt_f64(r.e_minus),
                r.status.tag().to_string(),
            ]
        })
        .collect();
    let path = out_path(&common, &cfg, "spectrum.csv");
    write_csv(
        &path,
        &["D", "n", "l", "variant", "k", "E_plus", "E_minus", "status"],
        &csv_rows,
    )
    .map_err(io_failure)?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn run_thermo(
    common: CommonOpts,
    dims: Option<String>,
    l: Option<u32>,
    variant: Option<String>,
    mu_min: Option<f64>,
    mu_max: Option<f64>,
    points: Option<u32>,
    method: Option<String>,
) -> Result<i32, Failure> {
    let cfg = load_config(&common)?;
    let couplings = resolve_couplings(common.m, common.av, common.a_s, common.bv, common.bs, &cfg)?;
    let dims_flag = dims.map(|s| parse_dims(&s)).transpose().map_err(usage)?;
    let d = resolve(
        dims_flag,
        &cfg,
        "dims",
        parse_dims,
        DimRange { lo: 3, hi: 3 },
    )?
    .singleton()?;
    let l = resolve(l, &cfg, "l", parse_u32, 0)?;
    let variant_flag = variant
        .map(|s| parse_variant(&s))
        .transpose()
        .map_err(usage)?;
    let variant = resolve(
        variant_flag,
        &cfg,
        "variant",
        parse_variant,
        KVariant::Table1,
    )?;
    let mu_min = resolve(mu_min, &cfg, "mu-min", parse_f64, 0.5)?;
    let mu_max = resolve(mu_max, &cfg, "mu-max", parse_f64, 20.0)?;
    let points = resolve(points, &cfg, "points", parse_u32, 200)?;
    let method_flag = method
        .map(|s| parse_method(&s))
        .transpose()
        .map_err(usage)?;
    let method = resolve(
        method_flag,
        &cfg,
        "method",
        parse_method,
        Method::EulerMcLaurin,
    )?;
    if !(mu_min > 0.0 && mu_min < mu_max) {
        return Err(Failure::Usage(format!(
            "temperature grid needs 0 < mu-min < mu-max (got {mu_min}, {mu_max})"
        )));
    }
    if points < 2 {
        return Err(Failure::Usage("--points must be at least 2".into()));
    }

    let spec = linear_form(&couplings.params, d, l, variant).map_err(compute)?;
    let mut csv_rows = Vec::with_capacity(points as usize);
    let step = (mu_max - mu_min) / f64::from(points - 1);
    for i in 0..points {
        let mu = if i == points - 1 {
            mu_max
        } else {
            mu_min + step * f64::from(i)
        };
        let z_direct = partition_direct(&spec, mu, 1e-10).map_err(compute)?;
        let z_em = partition_em(&spec, mu).map_err(compute)?;
        let pt = thermo_point(&spec, mu, method).map_err(compute)?;
        csv_rows.push(vec![
            fmt_f64(mu),
            fmt_f64(z_direct),
            fmt_f64(z_em),
            fmt_f64(pt.f_bar),
            fmt_f64(pt.u_bar),
            fmt_f64(pt.s_bar),
            fmt_f64(pt.cv_bar),
        ]);
    }
    let path = out_path(&common, &cfg, "thermo.csv");
    write_csv(
        &path,
        &[
            "mu", "Z_direct", "Z_em", "F_bar", "U_bar", "S_bar", "Cv_bar",
        ],
        &csv_rows,
    )
    .map_err(io_failure)?;
    Ok(0)
}

fn run_wavefunction(
    common: CommonOpts,
    dims: Option<String>,
    l: Option<u32>,
    n: Option<u32>,
    variant: Option<String>,
    rmax: Option<f64>,
    samples: Option<u32>,
) -> Result<i32, Failure> {
    let cfg = load_config(&common)?;
    let couplings = resolve_couplings(common.m, common.av, common.a_s, common.bv, common.bs, &cfg)?;
    let dims_flag = dims.map(|s| parse_dims(&s)).transpose().map_err(usage)?;
    let d = resolve(
        dims_flag,
        &cfg,
        "dims",
        parse_dims,
        DimRange { lo: 3, hi: 3 },
    )?
    .singleton()?;
    let l = resolve(l, &cfg, "l", parse_u32, 0)?;
    let n = resolve(n, &cfg, "n", parse_u32, 1)?;
    let variant_flag = variant
        .map(|s| parse_variant(&s))
        .transpose()
        .map_err(usage)?;
    let variant = resolve(
        variant_flag,
        &cfg,
        "variant",
        parse_variant,
        KVariant::Table1,
    )?;
    let beta = couplings.params.beta();
    let default_rmax = if beta > 0.0 {
        8.0 / beta.sqrt()
    } else {
        f64::NAN
    };
    let rmax = resolve(rmax, &cfg, "rmax", parse_f64, default_rmax)?;
    if !(rmax.is_finite() && rmax > 0.0) {
        return Err(Failure::Usage(
            "--rmax must be a positive radius (required when beta = 0)".into(),
        ));
    }
    let samples = resolve(samples, &cfg, "samples", parse_u32, 400)?;
    if samples < 2 {
        return Err(Failure::Usage("--samples must be at least 2".into()));
    }

    let state = QuantumState::new(n, l, d, variant).map_err(compute)?;
    let wf = build_wavefunction(&couplings.params, &state, Branch::Plus).map_err(compute)?;
    let profile = sample_wavefunction(&wf, 0.0, rmax, samples).map_err(compute)?;
    let csv_rows: Vec<Vec<String>> = profile
        .iter()
        .map(|s| vec![fmt_f64(s.r), fmt_f64(s.r_paper), fmt_f64(s.r_exact)])
        .collect();
    let path = out_path(&common, &cfg, "wavefunction.csv");
    write_csv(&path, &["r", "R_paper", "R_exact"], &csv_rows).map_err(io_failure)?;
    Ok(0)
}

fn run_ode(
    common: CommonOpts,
    dims: Option<String>,
    l: Option<u32>,
    nodes: Option<String>,
    bracket: Option<String>,
    variant: Option<String>,
) -> Result<i32, Failure> {
    let cfg = load_config(&common)?;
    let couplings = resolve_couplings(common.m, common.av, common.a_s, common.bv, common.bs, &cfg)?;
    let dims_flag = dims.map(|s| parse_dims(&s)).transpose().map_err(usage)?;
    let d = resolve(
        dims_flag,
        &cfg,
        "dims",
        parse_dims,
        DimRange { lo: 3, hi: 3 },
    )?
    .singleton()?;
    let l = resolve(l, &cfg, "l", parse_u32, 0)?;
    let nodes_flag = nodes.map(|s| parse_nodes(&s)).transpose().map_err(usage)?;
    let node_list = resolve(nodes_flag, &cfg, "nodes", parse_nodes, vec![0])?;
    let bracket_flag = bracket
        .map(|s| parse_bracket(&s))
        .transpose()
        .map_err(usage)?;
    let bracket = resolve(bracket_flag, &cfg, "bracket", parse_bracket, (0.5, 9.0))?;
    let variant_flag = variant
        .map(|s| parse_variant(&s))
        .transpose()
        .map_err(usage)?;
    let variant = resolve(
        variant_flag,
        &cfg,
        "variant",
        parse_variant,
        KVariant::Table1,
    )?;

    let mut csv_rows = Vec::with_capacity(node_list.len());
    for &target in &node_list {
        let problem = OdeProblem::new(couplings.params, d, l, bracket, target).map_err(compute)?;
        let level = find_level(&problem).map_err(compute)?;
        csv_rows.push(vec![
            d.to_string(),
            l.to_string(),
            target.to_string(),
            fmt_f64(level.e),
            fmt_f64(level.mismatch_residual),
            fmt_f64(level.grid_h),
        ]);
    }
    let path = out_path(&common, &cfg, "ode.csv");
    write_csv(
        &path,
        &["D", "l", "nodes", "E_numeric", "residual", "h"],
        &csv_rows,
    )
    .map_err(io_failure)?;

    // closed-form comparison as a side report (kept off stdout when the CSV
    // itself goes there)
    if path != "-" {
        match compare_with_closed_form(&couplings.params, d, l, &node_list, variant) {
            Ok(rows) => {
                for row in rows {
                    match (row.e_closed, row.rel_gap) {
                        (Some(ec), Some(gap)) => println!(
                            "# nodes={}: E_numeric={:.9}, E_closed[{}]={:.9}, rel gap={:.3e}",
                            row.nodes,
                            row.e_numeric,
                            variant.tag(),
                            ec,
                            gap
                        ),
                        _ => println!(
                            "# nodes={}: E_numeric={:.9}, no real closed-form level",
                            row.nodes, row.e_numeric
                        ),
                    }
                }
            }
            Err(e) => println!("# closed-form comparison unavailable: {e}"),
        }
    }
    Ok(0)
}

fn run_validate() -> i32 {
    let results = kg_cornell::acceptance::run_all();
    let mut failed = 0;
    for r in &results {
        println!("{}", r.line());
        if !r.passed {
            failed += 1;
        }
    }
    println!(
        "validation: {}/{} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed == 0 {
        0
    } else {
        1
    }
}

fn usage(msg: String) -> Failure {
    Failure::Usage(msg)
}

fn compute<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Compute(e.to_string())
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure::Io(e.to_string())
}
