//! Command-line front end: sweeps over channel and input grids written as
//! CSV or JSON lines, and the oracle-verification suites.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::channel::ChannelParams;
use crate::coherent::{capacity_conjecture, coherent_info_dx, gaussian_coherent_info, thermal_coherent_info, Capacity};
use crate::error::{validation, Error, Result};
use crate::fock::entropy_shift_oracle;
use crate::gaussian::{GaussianInputParams, ThermalSpec};
use crate::perturbation::{coherent_info_shift, PerturbationSpec};
use crate::verify::{self, Suite};

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_VERIFY_FAILED: u8 = 2;
pub const THREADS_VAR: &str = "GAUSSCAP_THREADS";
pub const DEFAULT_EPSILON: f64 = 0.01;
const CONSISTENCY_TOL: f64 = 1e-9;

const COLUMNS_HELP: &str = "\
Columns (fixed order; entropies of perturb in nats, everything else in bits):
  capacity  eta,n_noise,capacity_bits,error
  cinfo     eta,n_noise,energy,x,ic_bits,dic_dx,error
  perturb   spec,n_mean,eta,n_noise,epsilon,d_s_out,d_s_joint,d_ic,sign,condition,error
            with --cutoff: oracle_d_s_out,oracle_d_s_joint,oracle_d_ic before error
  verify    suite,check,deviation,tolerance,passed

Lists are comma separated. A perturbation spec is k:l:c with k and l comma
separated exponents and c a complex amplitude such as 1, 0.5-0.2i.
A config file holds key=value lines using the long flag names; flags win.
Exit status: 0 success, 1 domain or configuration error, 2 verification failure.";

#[derive(Debug, Parser)]
#[command(name = "gausscap", version, about = "Coherent information of the lossy bosonic channel with Gaussian noise", after_help = COLUMNS_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Capacity formula over a channel grid.
    Capacity(Options),
    /// Gaussian-input coherent information and its x-derivative.
    Cinfo(Options),
    /// Second-order entropy shifts of perturbed thermal inputs.
    Perturb(Options),
    /// Oracle-equivalence suites: gaussian, lemma, perturbation or all.
    Verify {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
        #[command(flatten)]
        options: Options,
    },
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    #[arg(long, value_delimiter = ',')]
    pub eta: Vec<f64>,
    #[arg(long = "n-noise", value_delimiter = ',')]
    pub n_noise: Vec<f64>,
    #[arg(long = "n-mean", value_delimiter = ',')]
    pub n_mean: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub energy: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub x: Vec<f64>,
    /// Repeatable.
    #[arg(long)]
    pub spec: Vec<String>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Fock cutoff for oracle columns (perturb) or the lemma suite (verify).
    #[arg(long)]
    pub cutoff: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Fully resolved sweep: flags merged over the optional config file.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub etas: Vec<f64>,
    pub noises: Vec<f64>,
    pub n_means: Vec<f64>,
    pub energies: Vec<f64>,
    pub xs: Vec<f64>,
    pub specs: Vec<String>,
    pub epsilon: f64,
    pub cutoff: Option<usize>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

fn config_error(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}

fn parse_list<T: std::str::FromStr>(key: &str, raw: &str) -> Result<Vec<T>> {
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| config_error(format!("config key '{key}': cannot parse '{s}'"))))
        .collect()
}

fn read_config(path: &Path) -> Result<BTreeMap<String, Vec<String>>> {
    let text = fs::read_to_string(path)
        .map_err(|e| config_error(format!("cannot read config {}: {e}", path.display())))?;
    let mut map: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| config_error(format!("{}:{}: expected key=value", path.display(), i + 1)))?;
        map.entry(key.trim().to_string()).or_default().push(value.trim().to_string());
    }
    Ok(map)
}

impl SweepConfig {
    pub fn resolve(opts: &Options) -> Result<Self> {
        let file = match &opts.config {
            Some(p) => read_config(p)?,
            None => BTreeMap::new(),
        };
        const KEYS: [&str; 10] = ["eta", "n-noise", "n-mean", "energy", "x", "spec", "epsilon", "cutoff", "format", "out"];
        if let Some(bad) = file.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(config_error(format!("unknown config key '{bad}'")));
        }
        let last = |key: &str| file.get(key).and_then(|v| v.last()).map(String::as_str);
        let list = |flag: &Vec<f64>, key: &str| -> Result<Vec<f64>> {
            match (flag.is_empty(), last(key)) {
                (true, Some(raw)) => parse_list(key, raw),
                _ => Ok(flag.clone()),
            }
        };
        let scalar = |key: &str| -> Result<Option<f64>> { last(key).map(|s| parse_list(key, s).map(|v| v[0])).transpose() };
        let specs = if opts.spec.is_empty() {
            file.get("spec").cloned().unwrap_or_default()
        } else {
            opts.spec.clone()
        };
        let format = match (opts.format, last("format")) {
            (Some(f), _) => f,
            (None, Some(raw)) => Format::from_str(raw, true).map_err(|_| config_error(format!("unknown format '{raw}'")))?,
            (None, None) => Format::Csv,
        };
        let cutoff = match (opts.cutoff, last("cutoff")) {
            (Some(c), _) => Some(c),
            (None, Some(raw)) => Some(raw.parse().map_err(|_| config_error(format!("config key 'cutoff': cannot parse '{raw}'")))?),
            (None, None) => None,
        };
        let epsilon = match opts.epsilon {
            Some(e) => e,
            None => scalar("epsilon")?.unwrap_or(DEFAULT_EPSILON),
        };
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(config_error(format!("epsilon must be positive, got {epsilon}")));
        }
        Ok(Self {
            etas: list(&opts.eta, "eta")?,
            noises: list(&opts.n_noise, "n-noise")?,
            n_means: list(&opts.n_mean, "n-mean")?,
            energies: list(&opts.energy, "energy")?,
            xs: list(&opts.x, "x")?,
            specs,
            epsilon,
            cutoff,
            format,
            out: opts.out.clone().or_else(|| last("out").map(PathBuf::from)),
        })
    }

    fn noises_or_default(&self) -> Vec<f64> {
        if self.noises.is_empty() {
            vec![0.0]
        } else {
            self.noises.clone()
        }
    }

    fn channel_grid(&self) -> Vec<(f64, f64)> {
        let noises = self.noises_or_default();
        self.etas
            .iter()
            .flat_map(|&e| noises.iter().map(move |&n| (e, n)))
            .collect()
    }

    /// Energies from `--energy`, else `N + 1/2` from `--n-mean`.
    fn energy_grid(&self) -> Vec<f64> {
        if self.energies.is_empty() {
            self.n_means.iter().map(|n| n + 0.5).collect()
        } else {
            self.energies.clone()
        }
    }

    fn x_grid(&self) -> Vec<f64> {
        if self.xs.is_empty() {
            vec![1.0]
        } else {
            self.xs.clone()
        }
    }
}

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
    Empty,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn error_count(&self) -> usize {
        match self.columns.iter().position(|&c| c == "error") {
            Some(i) => self.rows.iter().filter(|r| !matches!(r[i], Cell::Empty)).count(),
            None => 0,
        }
    }
}

/// 12 significant digits; scientific notation below `1e-4` and from `1e12`.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    // the exponent of the rounded mantissa decides the layout, so carries are handled
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..12).contains(&exp) {
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    let decimals = (11 - exp) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Num(v) => format_number(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> serde_json::Value {
        use serde_json::Value;
        match self {
            Cell::Num(v) if v.is_finite() => format_number(*v)
                .parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
                .map_or(Value::Null, Value::Number),
            Cell::Num(v) => Value::String(format_number(*v)),
            Cell::Int(v) => Value::from(*v),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Empty => Value::Null,
        }
    }
}

pub fn write_table<W: Write>(table: &Table, format: Format, out: W) -> io::Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(&table.columns)?;
            for row in &table.rows {
                w.write_record(row.iter().map(Cell::text))?;
            }
            w.flush()
        }
        Format::Jsonl => {
            let mut out = io::BufWriter::new(out);
            for row in &table.rows {
                let obj: serde_json::Map<String, serde_json::Value> = table
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, cell)| (c.to_string(), cell.json()))
                    .collect();
                serde_json::to_writer(&mut out, &obj)?;
                out.write_all(b"\n")?;
            }
            out.flush()
        }
    }
}

fn error_cell(e: &Error) -> Cell {
    Cell::Text(e.to_string())
}

pub fn capacity_table(cfg: &SweepConfig) -> Table {
    let rows = cfg
        .channel_grid()
        .par_iter()
        .map(|&(eta, nn)| {
            let mut row = vec![Cell::Num(eta), Cell::Num(nn)];
            match ChannelParams::new(eta, nn).map(capacity_conjecture) {
                Ok(Capacity::Bits(q)) => row.extend([Cell::Num(q), Cell::Empty]),
                Ok(Capacity::Unbounded) => row.extend([Cell::Num(f64::INFINITY), Cell::Empty]),
                Err(e) => row.extend([Cell::Empty, error_cell(&e)]),
            }
            row
        })
        .collect();
    Table {
        columns: vec!["eta", "n_noise", "capacity_bits", "error"],
        rows,
    }
}

fn cinfo_row(eta: f64, nn: f64, energy: f64, x: f64) -> Result<(f64, f64)> {
    let params = ChannelParams::new(eta, nn)?;
    let input = GaussianInputParams::new(energy, x, 0.0)?;
    let ic = gaussian_coherent_info(params, input)?.value;
    let dx = coherent_info_dx(params, input)?;
    if x == 1.0 {
        let thermal = thermal_coherent_info(params, ThermalSpec::new(energy - 0.5)?).value;
        if (thermal - ic).abs() > CONSISTENCY_TOL * ic.abs().max(1.0) {
            return Err(Error::Convergence {
                deviation: (thermal - ic).abs(),
                tolerance: CONSISTENCY_TOL,
            });
        }
    }
    Ok((ic, dx))
}

pub fn coherent_info_table(cfg: &SweepConfig) -> Table {
    let energies = cfg.energy_grid();
    let xs = cfg.x_grid();
    let grid: Vec<(f64, f64, f64, f64)> = cfg
        .channel_grid()
        .into_iter()
        .flat_map(|(eta, nn)| {
            let xs = &xs;
            energies.iter().flat_map(move |&e| xs.iter().map(move |&x| (eta, nn, e, x)))
        })
        .collect();
    let rows = grid
        .par_iter()
        .map(|&(eta, nn, e, x)| {
            let mut row = vec![Cell::Num(eta), Cell::Num(nn), Cell::Num(e), Cell::Num(x)];
            match cinfo_row(eta, nn, e, x) {
                Ok((ic, dx)) => row.extend([Cell::Num(ic), Cell::Num(dx), Cell::Empty]),
                Err(err) => row.extend([Cell::Empty, Cell::Empty, error_cell(&err)]),
            }
            row
        })
        .collect();
    Table {
        columns: vec!["eta", "n_noise", "energy", "x", "ic_bits", "dic_dx", "error"],
        rows,
    }
}

/// Parses `k:l[:c]`, e.g. `1,0:0,1:0.5+0.2i`.
pub fn parse_spec(raw: &str, epsilon: f64) -> Result<PerturbationSpec> {
    let parts: Vec<&str> = raw.split(':').collect();
    if !(2..=3).contains(&parts.len()) {
        return Err(validation(format!("spec '{raw}' is not of the form k:l:c")));
    }
    let exps = |s: &str| -> Result<Vec<u32>> {
        s.split(',')
            .map(|t| t.trim().parse().map_err(|_| validation(format!("spec '{raw}': bad exponent '{t}'"))))
            .collect()
    };
    let c = match parts.get(2) {
        Some(s) => s
            .trim()
            .parse::<Complex64>()
            .map_err(|_| validation(format!("spec '{raw}': bad amplitude '{s}'")))?,
        None => Complex64::new(1.0, 0.0),
    };
    PerturbationSpec::new(exps(parts[0])?, exps(parts[1])?, c, epsilon)
}

fn sign_label(v: f64) -> &'static str {
    if v < 0.0 {
        "negative"
    } else if v > 0.0 {
        "positive"
    } else {
        "zero"
    }
}

fn oracle_cells(spec: &PerturbationSpec, n: f64, params: ChannelParams, cutoff: usize) -> Result<[Cell; 3]> {
    let e = spec.epsilon();
    let r = entropy_shift_oracle(spec, n, params, &[2.0 * e, e, 0.5 * e], cutoff)?;
    let e2 = e * e;
    let out = r.output.value * e2;
    Ok(match r.joint {
        Some(j) => [Cell::Num(out), Cell::Num(j.value * e2), Cell::Num(out - j.value * e2)],
        None => [Cell::Num(out), Cell::Empty, Cell::Empty],
    })
}

pub fn perturbation_table(cfg: &SweepConfig) -> Table {
    let grid: Vec<(&String, f64, f64, f64)> = cfg
        .specs
        .iter()
        .flat_map(|s| {
            cfg.n_means
                .iter()
                .flat_map(move |&n| cfg.channel_grid().into_iter().map(move |(eta, nn)| (s, n, eta, nn)))
        })
        .collect();
    let with_oracle = cfg.cutoff.is_some();
    let rows = grid
        .par_iter()
        .map(|&(raw, n, eta, nn)| {
            let mut row = vec![Cell::Text(raw.clone()), Cell::Num(n), Cell::Num(eta), Cell::Num(nn), Cell::Num(cfg.epsilon)];
            let blanks = if with_oracle { 8 } else { 5 };
            let result = parse_spec(raw, cfg.epsilon).and_then(|spec| {
                let params = ChannelParams::new(eta, nn)?;
                let report = coherent_info_shift(&spec, n, params)?;
                let mut cells = vec![
                    Cell::Num(report.d_s_out),
                    Cell::Num(report.d_s_joint),
                    Cell::Num(report.d_ic),
                    Cell::Text(sign_label(report.d_ic).into()),
                    Cell::Bool(eta < 1.0 && n * (1.0 - eta) > nn),
                ];
                if let Some(cutoff) = cfg.cutoff {
                    match oracle_cells(&spec, n, params, cutoff) {
                        Ok(o) => cells.extend(o),
                        Err(e) => return Ok((cells, Some(e))),
                    }
                }
                Ok((cells, None))
            });
            match result {
                Ok((cells, oracle_err)) => {
                    let filled = cells.len();
                    row.extend(cells);
                    row.extend((filled..blanks).map(|_| Cell::Empty));
                    row.push(oracle_err.as_ref().map_or(Cell::Empty, error_cell));
                }
                Err(e) => {
                    row.extend((0..blanks).map(|_| Cell::Empty));
                    row.push(error_cell(&e));
                }
            }
            row
        })
        .collect();
    let mut columns = vec!["spec", "n_mean", "eta", "n_noise", "epsilon", "d_s_out", "d_s_joint", "d_ic", "sign", "condition"];
    if with_oracle {
        columns.extend(["oracle_d_s_out", "oracle_d_s_joint", "oracle_d_ic"]);
    }
    columns.push("error");
    Table { columns, rows }
}

pub fn verify_table(report: &verify::Report) -> Table {
    let rows = report
        .checks
        .iter()
        .map(|c| {
            vec![
                Cell::Text(c.suite.to_string()),
                Cell::Text(c.name.clone()),
                Cell::Num(c.deviation),
                Cell::Num(c.tolerance),
                Cell::Bool(c.passed()),
            ]
        })
        .collect();
    Table {
        columns: vec!["suite", "check", "deviation", "tolerance", "passed"],
        rows,
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| config_error(format!("{THREADS_VAR} must be a positive integer, got '{raw}'")))?;
    // a pool configured earlier in the same process is kept
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn emit(table: &Table, cfg: &SweepConfig) -> Result<()> {
    let io_err = |e: io::Error| config_error(format!("cannot write output: {e}"));
    match &cfg.out {
        Some(path) => {
            let file = fs::File::create(path)
                .map_err(|e| config_error(format!("cannot create {}: {e}", path.display())))?;
            write_table(table, cfg.format, io::BufWriter::new(file)).map_err(io_err)
        }
        None => write_table(table, cfg.format, io::stdout().lock()).map_err(io_err),
    }
}

fn require(grid: &[f64], flag: &str) -> Result<()> {
    if grid.is_empty() {
        Err(config_error(format!("--{flag} needs at least one value")))
    } else {
        Ok(())
    }
}

fn execute(command: &Command) -> Result<u8> {
    configure_threads()?;
    let (opts, suite) = match command {
        Command::Capacity(o) | Command::Cinfo(o) | Command::Perturb(o) => (o, None),
        Command::Verify { suite, options } => (options, Some(*suite)),
    };
    let cfg = SweepConfig::resolve(opts)?;
    let table = match command {
        Command::Capacity(_) => {
            require(&cfg.etas, "eta")?;
            capacity_table(&cfg)
        }
        Command::Cinfo(_) => {
            require(&cfg.etas, "eta")?;
            if cfg.energy_grid().is_empty() {
                return Err(config_error("--energy or --n-mean needs at least one value"));
            }
            coherent_info_table(&cfg)
        }
        Command::Perturb(_) => {
            require(&cfg.etas, "eta")?;
            require(&cfg.n_means, "n-mean")?;
            if cfg.specs.is_empty() {
                return Err(config_error("--spec needs at least one value"));
            }
            perturbation_table(&cfg)
        }
        Command::Verify { .. } => {
            let suite = suite.expect("verify carries a suite");
            let report = verify::run_with(suite, cfg.cutoff.unwrap_or(verify::LEMMA_CUTOFF))?;
            let table = verify_table(&report);
            emit(&table, &cfg)?;
            let mut err = io::stderr().lock();
            for s in [Suite::Gaussian, Suite::Lemma, Suite::Perturbation] {
                if let Some(max) = report.max_deviation(s) {
                    let failed = report.failures().filter(|c| c.suite == s).count();
                    let status = if failed == 0 { "pass".to_string() } else { format!("FAIL ({failed} checks)") };
                    let _ = writeln!(err, "{s}: {status}, max deviation {}", format_number(max));
                }
            }
            for c in report.failures() {
                let _ = writeln!(err, "  {}: {} > {}", c.name, format_number(c.deviation), format_number(c.tolerance));
            }
            return Ok(if report.passed() { EXIT_OK } else { EXIT_VERIFY_FAILED });
        }
    };
    emit(&table, &cfg)?;
    let errors = table.error_count();
    if errors > 0 {
        eprintln!("{errors} row(s) reported errors");
        return Ok(EXIT_ERROR);
    }
    Ok(EXIT_OK)
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(etas: &[f64], noises: &[f64]) -> SweepConfig {
        SweepConfig::resolve(&Options {
            eta: etas.to_vec(),
            n_noise: noises.to_vec(),
            ..Options::default()
        })
        .unwrap()
    }

    #[test]
    fn number_formatting() {
        assert_eq!(format_number(1.0), "1");
        assert_eq!(format_number(1.169925001442312), "1.16992500144");
        assert_eq!(format_number(-0.5), "-0.5");
        assert_eq!(format_number(3.0476e-5), "3.0476e-5");
        assert_eq!(format_number(123456.7890123456), "123456.789012");
        assert_eq!(format_number(9.9999999999999), "10");
        assert_eq!(format_number(0.99999999999999), "1");
        assert_eq!(format_number(f64::INFINITY), "inf");
        assert_eq!(format_number(0.0), "0");
    }

    #[test]
    fn capacity_rows() {
        let t = capacity_table(&cfg(&[2.0 / 3.0, 0.9, 0.7, 1.5], &[0.0, 0.1, 0.3]));
        let q = |row: usize| match t.rows[row][2] {
            Cell::Num(v) => v,
            _ => f64::NAN,
        };
        assert!((q(0) - 1.0).abs() < 1e-12);
        assert!((q(4) - (2.0 * 3f64.log2() - 2.0)).abs() < 1e-12);
        assert_eq!(q(8), 0.0);
        assert_eq!(t.error_count(), 3);
        assert!(capacity_table(&cfg(&[], &[])).rows.is_empty());
    }

    #[test]
    fn spec_parsing() {
        let s = parse_spec("1,0:0,1:0.5-0.2i", 0.01).unwrap();
        assert_eq!(s.k(), &[1, 0]);
        assert_eq!(s.amplitude(), Complex64::new(0.5, -0.2));
        assert_eq!(parse_spec("2:2", 0.01).unwrap().amplitude(), Complex64::new(1.0, 0.0));
        assert!(parse_spec("1:2:1", 0.01).is_err());
        assert!(parse_spec("a:1:1", 0.01).is_err());
    }

    #[test]
    fn perturbation_rows() {
        let mut c = cfg(&[0.8, 1.0], &[0.0]);
        c.n_means = vec![1e4];
        c.specs = vec!["1:1:1".into(), "2:1:1".into()];
        let t = perturbation_table(&c);
        assert_eq!(t.rows.len(), 4);
        assert_eq!(t.rows[0][8], Cell::Text("negative".into()));
        assert_eq!(t.rows[1][6], Cell::Num(0.0));
        assert!(matches!(t.rows[2][10], Cell::Text(_)));
        assert_eq!(t.error_count(), 2);
    }

    #[test]
    fn csv_and_jsonl_are_deterministic() {
        let mut c = cfg(&[0.5, 0.9], &[0.1, 0.3]);
        c.energies = vec![2.5, 10.0];
        c.xs = vec![0.5, 1.0];
        let t = coherent_info_table(&c);
        assert_eq!(t.error_count(), 0);
        let render = |f| {
            let mut buf = Vec::new();
            write_table(&t, f, &mut buf).unwrap();
            String::from_utf8(buf).unwrap()
        };
        let csv = render(Format::Csv);
        assert_eq!(csv, render(Format::Csv));
        assert!(csv.starts_with("eta,n_noise,energy,x,ic_bits,dic_dx,error\n0.5,0.1,2.5,0.5,"));
        let jsonl = render(Format::Jsonl);
        assert_eq!(jsonl.lines().count(), 16);
        assert!(jsonl.starts_with("{\"eta\":0.5,\"n_noise\":0.1,\"energy\":2.5,\"x\":0.5,"));
    }

    #[test]
    fn config_file_and_override() {
        let dir = std::env::temp_dir().join(format!("gausscap-cfg-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("sweep.cfg");
        fs::write(&path, "# sweep\neta = 0.5,0.7\nn-noise=0.1\nspec=1,0:0,1:1\nspec=1:1\nformat=jsonl\n").unwrap();
        let opts = Options {
            eta: vec![0.9],
            config: Some(path.clone()),
            ..Options::default()
        };
        let c = SweepConfig::resolve(&opts).unwrap();
        assert_eq!(c.etas, vec![0.9]);
        assert_eq!(c.noises, vec![0.1]);
        assert_eq!(c.specs.len(), 2);
        assert_eq!(c.format, Format::Jsonl);
        fs::write(&path, "etta=1\n").unwrap();
        assert!(SweepConfig::resolve(&opts).is_err());
        fs::remove_dir_all(dir).unwrap();
    }
}
