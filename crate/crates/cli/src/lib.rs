//! Command-line front end: parses arguments and config files, runs the
//! sweeps and experiments, and writes CSV or JSON.
//!
//! Exit status: 0 on success, 2 on usage or input errors, 1 when a
//! computation fails.

pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use xxchain::chain::{ChainSpec, Impurity, SpecConfig};
use xxchain::dynamics::{time_series, uniform_grid, SeriesData, SeriesKind};
use xxchain::measures::{alpha_sweep, SweepQuantity};
use xxchain::oracle::equivalence_suite;
use xxchain::protocols::{fidelity_landscape, optimize_alpha, scaling_sweep, TransferReport};
use xxchain::spectral::{classify_band_centered, decompose_spec};

use output::{emit_csv, emit_json, fmt_num, CsvTable};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("{}", .0)]
    Model(#[from] xxchain::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Model(e) if e.is_input_error() => 2,
            _ => 1,
        }
    }
}

/// `lo:hi:step`, inclusive of `hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Range {
    pub fn grid(&self) -> Result<Vec<f64>, CliError> {
        uniform_grid(self.lo, self.hi, self.step).map_err(|e| CliError::Usage(e.to_string()))
    }
}

impl std::str::FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, step] = parts.as_slice() else {
            return Err(format!("`{s}` is not lo:hi:step"));
        };
        let num = |x: &str| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad number `{x}`"))
        };
        let r = Range {
            lo: num(lo)?,
            hi: num(hi)?,
            step: num(step)?,
        };
        if !(r.step > 0.0) || r.hi < r.lo {
            return Err(format!("`{s}` needs step > 0 and hi >= lo"));
        }
        Ok(r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct ChainArgs {
    /// Number of sites.
    #[arg(long)]
    pub n: Option<usize>,
    /// Exchange coupling J.
    #[arg(long, allow_hyphen_values = true)]
    pub j: Option<f64>,
    /// External field h.
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<f64>,
    /// Impurity strength on the edge bond(s).
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Place impurities on both edge bonds.
    #[arg(long)]
    pub mirror: bool,
    /// key = value chain file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct OutArgs {
    /// Output file (stdout when absent or `-`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Parser)]
#[command(name = "xxchain", version, about = "XX spin chain transfer simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Accepted for scripts; every computation is deterministic anyway.
    #[arg(long, global = true)]
    pub seedless: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energies and band labels over an α grid: alpha,j,energy,label.
    Spectrum {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long, default_value = "0:3:0.01")]
        alpha_range: Range,
        /// Emit eigenvector coefficients of these 1-based states instead:
        /// alpha,j,site,coefficient.
        #[arg(long)]
        states: Option<String>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Eigenstate IPR over an α grid: alpha,j,value.
    IprSweep {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long, default_value = "0:2:0.005")]
        alpha_range: Range,
        /// Comma-separated 1-based state indices (all when absent).
        #[arg(long)]
        states: Option<String>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Concurrence of sites 1 and 2 per eigenstate over an α grid.
    ConcurrenceSweep {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long, default_value = "0:2:0.005")]
        alpha_range: Range,
        /// Comma-separated 1-based state indices (all when absent).
        #[arg(long)]
        states: Option<String>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Time evolution from site 1: t,value (t,re,im for amplitude).
    Evolve {
        #[command(flatten)]
        chain: ChainArgs,
        /// ipr, fidelity, amplitude or concurrence.
        #[arg(long, default_value = "fidelity")]
        kind: SeriesKind,
        #[arg(long, default_value_t = 100.0)]
        t_max: f64,
        #[arg(long, default_value_t = 0.05)]
        dt: f64,
        /// Overrides --t-max/--dt.
        #[arg(long)]
        t_range: Option<Range>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Fidelity of mirror chains over (α, t): alpha,t,fidelity.
    Landscape {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long, default_value = "0.1:1.5:0.02")]
        alpha_range: Range,
        #[arg(long, default_value = "0:40:0.1")]
        t_range: Range,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Best mirror-impurity strength for one chain length (JSON report).
    Optimize {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long, default_value = "0.3:1:0.01")]
        alpha_range: Range,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Optimized reports for several even chain lengths plus the t_tr fit.
    Scaling {
        /// Comma-separated chain lengths.
        #[arg(long, default_value = "50,100,200,400")]
        n_list: String,
        #[arg(long, default_value = "0.3:1:0.01")]
        alpha_range: Range,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Compares sector dynamics with the full-space simulator.
    OracleCheck {
        /// Largest chain length checked (from 2).
        #[arg(long, default_value_t = 8)]
        n_max: usize,
    },
}

/// How an α sweep chooses impurity bonds when none are configured.
fn sweep_template(chain: &ChainArgs) -> Result<ChainSpec, CliError> {
    let mut spec = resolve_spec(chain)?;
    if spec.impurities.is_empty() {
        spec.impurities.push(Impurity {
            bond: 1,
            alpha: 1.0,
        });
    }
    Ok(spec)
}

/// Builds the chain from config file and flags (flags win).
pub fn resolve_spec(chain: &ChainArgs) -> Result<ChainSpec, CliError> {
    let cfg = match &chain.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("--config {}: {e}", path.display())))?;
            SpecConfig::parse(&text)?
        }
        None => SpecConfig::default(),
    };
    let n = chain
        .n
        .or(cfg.n_sites)
        .ok_or_else(|| CliError::Usage("--n is required (or n_sites in --config)".into()))?;
    let mut spec = SpecConfig {
        n_sites: Some(n),
        exchange_j: chain.j.or(cfg.exchange_j),
        field_h: chain.h.or(cfg.field_h),
        impurities: cfg.impurities,
    }
    .into_spec(ChainSpec::homogeneous(n));

    if chain.mirror {
        let alpha = chain.alpha.unwrap_or(1.0);
        spec.impurities = ChainSpec::mirror_impurities(n, alpha).impurities;
    } else if let Some(alpha) = chain.alpha {
        if spec.impurities.is_empty() {
            spec.impurities = ChainSpec::single_impurity(n, alpha).impurities;
        } else {
            spec = spec.with_alpha(alpha);
        }
    }
    Ok(spec.validate()?)
}

fn parse_states(states: &Option<String>) -> Result<Vec<usize>, CliError> {
    let Some(text) = states else {
        return Ok(Vec::new());
    };
    text.split(',')
        .map(|s| {
            let j: usize = s
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("--states: bad index `{s}`")))?;
            j.checked_sub(1)
                .ok_or_else(|| CliError::Usage("--states indices start at 1".into()))
        })
        .collect()
}

fn parse_n_list(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("--n-list: bad length `{s}`")))
        })
        .collect()
}

fn require_csv(out: &OutArgs) -> Result<(), CliError> {
    match out.format {
        Some(Format::Json) => Err(CliError::Usage("this subcommand writes CSV only".into())),
        _ => Ok(()),
    }
}

fn out_error(out: &OutArgs, e: std::io::Error) -> CliError {
    match &out.out {
        Some(p) if p.as_os_str() != "-" => CliError::Usage(format!("--out {}: {e}", p.display())),
        _ => CliError::Io(e),
    }
}

fn write_csv(table: &CsvTable, out: &OutArgs) -> Result<(), CliError> {
    emit_csv(table, out.out.as_deref()).map_err(|e| out_error(out, e))
}

fn write_json<T: Serialize>(value: &T, out: &OutArgs) -> Result<(), CliError> {
    emit_json(value, out.out.as_deref()).map_err(|e| out_error(out, e))
}

#[derive(Serialize)]
struct ScalingJson<'a> {
    reports: &'a [TransferReport],
    slope: Option<f64>,
    intercept: Option<f64>,
    correlation: Option<f64>,
}

fn sweep_table(
    chain: &ChainArgs,
    alpha_range: &Range,
    states: &Option<String>,
    quantity: SweepQuantity,
) -> Result<CsvTable, CliError> {
    let template = sweep_template(chain)?;
    let rows = alpha_sweep(
        &template,
        &alpha_range.grid()?,
        &parse_states(states)?,
        quantity,
    )?;
    let mut table = CsvTable::new(&["alpha", "j", "value"]);
    for r in rows {
        table.push(vec![
            fmt_num(r.alpha),
            (r.j + 1).to_string(),
            fmt_num(r.value),
        ]);
    }
    Ok(table)
}

/// Executes a parsed command.
pub fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Spectrum {
            chain,
            alpha_range,
            states,
            out,
        } => {
            require_csv(&out)?;
            let template = sweep_template(&chain)?;
            if states.is_some() {
                let picked = parse_states(&states)?;
                if let Some(j) = picked.iter().find(|&&j| j >= template.n_sites) {
                    return Err(CliError::Usage(format!(
                        "--states: index {} exceeds N = {}",
                        j + 1,
                        template.n_sites
                    )));
                }
                let mut table = CsvTable::new(&["alpha", "j", "site", "coefficient"]);
                for alpha in alpha_range.grid()? {
                    let dec = decompose_spec(&template.with_alpha(alpha))?;
                    for &j in &picked {
                        for (site, c) in dec.eigvecs[j].iter().enumerate() {
                            table.push(vec![
                                fmt_num(alpha),
                                (j + 1).to_string(),
                                (site + 1).to_string(),
                                fmt_num(*c),
                            ]);
                        }
                    }
                }
                write_csv(&table, &out)?;
                return Ok(());
            }
            let mut table = CsvTable::new(&["alpha", "j", "energy", "label"]);
            for alpha in alpha_range.grid()? {
                let dec = decompose_spec(&template.with_alpha(alpha))?;
                let labels = classify_band_centered(&dec, template.exchange_j, template.field_h);
                for (j, (e, l)) in dec.energies.iter().zip(&labels.labels).enumerate() {
                    table.push(vec![
                        fmt_num(alpha),
                        (j + 1).to_string(),
                        fmt_num(*e),
                        l.as_str().into(),
                    ]);
                }
            }
            write_csv(&table, &out)?;
        }
        Command::IprSweep {
            chain,
            alpha_range,
            states,
            out,
        } => {
            require_csv(&out)?;
            let table = sweep_table(&chain, &alpha_range, &states, SweepQuantity::Ipr)?;
            write_csv(&table, &out)?;
        }
        Command::ConcurrenceSweep {
            chain,
            alpha_range,
            states,
            out,
        } => {
            require_csv(&out)?;
            let table = sweep_table(&chain, &alpha_range, &states, SweepQuantity::C12)?;
            write_csv(&table, &out)?;
        }
        Command::Evolve {
            chain,
            kind,
            t_max,
            dt,
            t_range,
            out,
        } => {
            require_csv(&out)?;
            let spec = resolve_spec(&chain)?;
            let grid = match t_range {
                Some(r) => r.grid()?,
                None => Range {
                    lo: 0.0,
                    hi: t_max,
                    step: dt,
                }
                .grid()?,
            };
            let dec = decompose_spec(&spec)?;
            let series = time_series(&dec, kind, &grid)?;
            let table = match &series.values {
                SeriesData::Real(v) => {
                    let mut t = CsvTable::new(&["t", "value"]);
                    for (time, x) in grid.iter().zip(v) {
                        t.push(vec![fmt_num(*time), fmt_num(*x)]);
                    }
                    t
                }
                SeriesData::Complex(v) => {
                    let mut t = CsvTable::new(&["t", "re", "im"]);
                    for (time, z) in grid.iter().zip(v) {
                        t.push(vec![fmt_num(*time), fmt_num(z.re), fmt_num(z.im)]);
                    }
                    t
                }
            };
            write_csv(&table, &out)?;
        }
        Command::Landscape {
            chain,
            alpha_range,
            t_range,
            out,
        } => {
            require_csv(&out)?;
            let n = resolve_spec(&chain)?.n_sites;
            let land = fidelity_landscape(n, &alpha_range.grid()?, &t_range.grid()?)?;
            let mut table = CsvTable::new(&["alpha", "t", "fidelity"]);
            for (a, row) in land.alpha_grid.iter().zip(&land.values) {
                for (t, f) in land.t_grid.iter().zip(row) {
                    table.push(vec![fmt_num(*a), fmt_num(*t), fmt_num(*f)]);
                }
            }
            write_csv(&table, &out)?;
        }
        Command::Optimize {
            chain,
            alpha_range,
            out,
        } => {
            let n = resolve_spec(&chain)?.n_sites;
            let report = optimize_alpha(n, &alpha_range.grid()?)?;
            match out.format.unwrap_or(Format::Json) {
                Format::Json => write_json(&report, &out)?,
                Format::Csv => {
                    let mut t = CsvTable::new(&["alpha", "t_refocus", "t_max", "f_max"]);
                    for r in &report.per_alpha {
                        t.push(vec![
                            fmt_num(r.alpha),
                            r.t_refocus.map(fmt_num).unwrap_or_default(),
                            fmt_num(r.t_max),
                            fmt_num(r.f_max),
                        ]);
                    }
                    write_csv(&t, &out)?;
                }
            }
        }
        Command::Scaling {
            n_list,
            alpha_range,
            out,
        } => {
            let ns = parse_n_list(&n_list)?;
            let res = scaling_sweep(&ns, &alpha_range.grid()?)?;
            match out.format.unwrap_or(Format::Json) {
                Format::Json => write_json(
                    &ScalingJson {
                        reports: &res.reports,
                        slope: res.slope,
                        intercept: res.intercept,
                        correlation: res.correlation,
                    },
                    &out,
                )?,
                Format::Csv => {
                    let mut t = CsvTable::new(&["n", "alpha_opt", "t_tr", "f_max", "c_max"]);
                    for r in &res.reports {
                        t.push(vec![
                            r.n_sites.to_string(),
                            fmt_num(r.alpha_opt),
                            fmt_num(r.t_tr),
                            fmt_num(r.f_max),
                            fmt_num(r.c_max),
                        ]);
                    }
                    write_csv(&t, &out)?;
                }
            }
        }
        Command::OracleCheck { n_max } => {
            if !(2..=xxchain::oracle::MAX_SITES - 1).contains(&n_max) {
                return Err(CliError::Usage(format!(
                    "--n-max must lie in 2..={}",
                    xxchain::oracle::MAX_SITES - 1
                )));
            }
            let sizes: Vec<usize> = (2..=n_max).collect();
            let rows = equivalence_suite(&sizes, &[0.4, 1.0, 3.0], &[1.0, 5.0, 20.0])?;
            println!(
                "{:>3} {:>5} {:>5} {:>11} {:>11} {:>11} {:>11}  result",
                "n", "alpha", "t", "amp_err", "conc_err", "block_err", "sz_leak"
            );
            let mut failed = 0;
            for r in &rows {
                let ok = r.passes();
                failed += usize::from(!ok);
                println!(
                    "{:>3} {:>5} {:>5} {:>11.3e} {:>11.3e} {:>11.3e} {:>11.3e}  {}",
                    r.n_sites,
                    r.alpha,
                    r.t,
                    r.amplitude_error,
                    r.concurrence_error,
                    r.block_error,
                    r.sector_leak,
                    if ok { "pass" } else { "FAIL" }
                );
            }
            println!("{} of {} checks passed", rows.len() - failed, rows.len());
            if failed > 0 {
                return Err(CliError::Model(xxchain::Error::ConvergenceFailure(
                    format!("{failed} oracle checks failed"),
                )));
            }
        }
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs; returns the exit
/// status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
