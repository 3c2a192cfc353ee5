//! `tseries` command line: ingestion and export of XML documents, trip CSV
//! ingestion, expression evaluation, the Q1..Q4 benchmark, the peer-to-peer
//! simulator and the cost model.

pub mod bench;
pub mod error;
pub mod store;
pub mod synth;
pub mod trip;
pub mod xml;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tseries_core::expr::{evaluate, parse};
use tseries_core::transport::{pke, pst, rpa};
use tseries_core::{format_number, Calendar, ExprNode, Interval, Series, Value};
use tseries_cost::{CostParams, MEASURED_N, MEASURED_T_NET};
use tseries_p2p::{execute, Network, SimConfig, TimingProbe};

pub use error::{CliError, Result};
pub use store::Store;

#[derive(Debug, Parser)]
#[command(name = "tseries", version, about = "Time-series algebra engine and peer-to-peer query simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load an XML series or a trip CSV into the store.
    Ingest(IngestArgs),
    /// Write a stored series as an XML document.
    Export(ExportArgs),
    /// Evaluate an expression and print date,value rows.
    Eval(EvalArgs),
    /// Time the Q1..Q4 benchmark queries.
    Bench(BenchArgs),
    /// Run an expression on the simulated peer-to-peer network.
    P2p(P2pArgs),
    /// Cost-model utilities.
    #[command(subcommand)]
    Cost(CostCommand),
    /// Eco-driving indicators of a trip CSV.
    Trip(TripArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Xml,
    Csv,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long, value_enum)]
    pub format: Format,
    #[arg(long)]
    pub path: PathBuf,
    /// One timestamp per line; defaults to the store calendar, then to the
    /// document's own dates.
    #[arg(long)]
    pub calendar: Option<PathBuf>,
    /// Series name; trip columns are stored as `<name>.<column>`.
    #[arg(long)]
    pub name: String,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub name: String,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub path: Option<PathBuf>,
}

/// Where base series come from.
#[derive(Debug, Args)]
pub struct DataArgs {
    /// Use seeded random walks of this length instead of the store.
    #[arg(long = "synthetic-n")]
    pub synthetic_n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub data_seed: u64,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub expr: String,
    /// First calendar index (default 0).
    #[arg(long)]
    pub from: Option<usize>,
    /// Last calendar index, inclusive (default: end of calendar).
    #[arg(long)]
    pub to: Option<usize>,
    #[command(flatten)]
    pub data: DataArgs,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "Q1,Q2,Q3,Q4")]
    pub queries: Vec<bench::Query>,
    #[arg(long, value_delimiter = ',', default_value = "1000,2000,4000,16000,100000")]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "10,50,100")]
    pub w: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    pub repeat: usize,
    /// Stored series to benchmark instead of a random walk.
    #[arg(long)]
    pub series: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub data_seed: u64,
}

#[derive(Debug, Args)]
pub struct P2pArgs {
    #[arg(long)]
    pub expr: String,
    #[arg(long)]
    pub from: Option<usize>,
    #[arg(long)]
    pub to: Option<usize>,
    #[arg(long)]
    pub peers: Option<usize>,
    #[arg(long)]
    pub seg_len: Option<usize>,
    #[arg(long)]
    pub overlap: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// TOML simulator configuration; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Print only the timing row, on standard output.
    #[arg(long)]
    pub probe_only: bool,
    #[command(flatten)]
    pub data: DataArgs,
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    /// Compute ms per entry. A, B and C default to a fit of the bundled
    /// measurements.
    #[arg(long)]
    pub a: Option<f64>,
    /// Lookup coefficient (ms).
    #[arg(long)]
    pub b: Option<f64>,
    /// Transfer ms per entry.
    #[arg(long)]
    pub c: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum CostCommand {
    /// Bytes needed for a quote history.
    Capacity {
        #[arg(long, default_value_t = 1000)]
        stocks: u64,
        #[arg(long, default_value_t = 10)]
        years: u64,
        #[arg(long, default_value_t = 360)]
        days: u64,
        #[arg(long, default_value_t = 8.5)]
        hours: f64,
        #[arg(long, default_value_t = 5)]
        per_minute: u64,
        #[arg(long, default_value_t = 4)]
        bytes: u64,
    },
    /// Fit A, B and C to a p,t_index,t_r,t_p CSV (bundled table by default).
    Fit {
        #[arg(long)]
        path: Option<PathBuf>,
        #[arg(long, default_value_t = MEASURED_N)]
        n: usize,
        #[arg(long, default_value_t = MEASURED_T_NET)]
        t_net: f64,
    },
    /// Model timings for each peer count.
    Predict {
        #[arg(long, value_delimiter = ',', default_value = "8,16,32,64,128,256")]
        p: Vec<usize>,
        #[arg(long, default_value_t = MEASURED_N)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        t_q: f64,
        #[arg(long, default_value_t = MEASURED_T_NET)]
        t_net: f64,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// p,n,gain CSV for p in 1..=p-max.
    Grid {
        #[arg(long, default_value_t = 512)]
        p_max: usize,
        #[arg(long, value_delimiter = ',', default_value = "10000,100000,500000,1000000")]
        n: Vec<usize>,
        #[command(flatten)]
        params: ParamArgs,
    },
}

#[derive(Debug, Args)]
pub struct TripArgs {
    #[arg(long)]
    pub path: PathBuf,
    /// Sampling period in seconds.
    #[arg(long, default_value_t = 1.0)]
    pub dt: f64,
}

/// Text destined for standard output and standard error.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn out(stdout: String) -> Self {
        Output {
            stdout,
            stderr: String::new(),
        }
    }
}

/// Parses `args`, runs the command and returns the exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match run(cli.command, &Store::from_env()) {
        Ok(o) => {
            let _ = out.write_all(o.stdout.as_bytes());
            let _ = err.write_all(o.stderr.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(command: Command, store: &Store) -> Result<Output> {
    match command {
        Command::Ingest(a) => ingest(&a, store),
        Command::Export(a) => export(&a, store),
        Command::Eval(a) => eval(&a, store).map(Output::out),
        Command::Bench(a) => run_bench(&a, store).map(Output::out),
        Command::P2p(a) => p2p(&a, store),
        Command::Cost(c) => cost(c).map(Output::out),
        Command::Trip(a) => trip_report(&a).map(Output::out),
    }
}

fn ingest(a: &IngestArgs, store: &Store) -> Result<Output> {
    store::check_name(&a.name)?;
    match a.format {
        Format::Xml => {
            let records = store::read_records(&a.path)?;
            let calendar = match &a.calendar {
                Some(p) => store.adopt_calendar(store::parse_calendar(&store::read_file(p)?, p)?)?,
                None => match store.calendar()? {
                    Some(c) => c,
                    None => store.adopt_calendar(store::calendar_from_records(&records, &a.path)?)?,
                },
            };
            let series = store::align(&a.name, &records, calendar, &a.path)?;
            store.save(&series)?;
            Ok(Output {
                stdout: String::new(),
                stderr: format!("ingested {} ({} records, {} dates)\n", a.name, records.len(), series.len()),
            })
        }
        Format::Csv => {
            if a.calendar.is_some() {
                return Err(CliError::Usage("--calendar applies to XML input only".into()));
            }
            let table = trip::read_trip_csv(&store::read_file(&a.path)?, &a.path)?;
            let calendar = store.adopt_calendar(table.calendar())?;
            let all = table.series(&a.name, calendar)?;
            for s in &all {
                store.save(s)?;
            }
            let names: Vec<&str> = all.iter().map(Series::name).collect();
            Ok(Output {
                stdout: String::new(),
                stderr: format!("ingested {} rows as {}\n", table.len(), names.join(", ")),
            })
        }
    }
}

fn export(a: &ExportArgs, store: &Store) -> Result<Output> {
    let doc = xml::write_document(&store.load(&a.name)?);
    match &a.path {
        Some(p) => {
            std::fs::write(p, doc).map_err(|e| CliError::io(p, e))?;
            Ok(Output::default())
        }
        None => Ok(Output::out(doc)),
    }
}

fn parse_expr(text: &str) -> Result<ExprNode> {
    parse(text).map_err(error::expression)
}

/// Base series of `expr`, all on one calendar.
fn bases(expr: &ExprNode, data: &DataArgs, store: &Store) -> Result<Vec<Series>> {
    let names = expr.base_names();
    match data.synthetic_n {
        Some(0) => Err(CliError::Usage("--synthetic-n must be positive".into())),
        Some(n) => {
            let cal = Arc::new(Calendar::synthetic(n));
            Ok(names
                .iter()
                .enumerate()
                .map(|(i, name)| synth::walk_on(name, cal.clone(), data.data_seed.wrapping_add(i as u64)))
                .collect())
        }
        None => names.iter().map(|n| store.load(n)).collect(),
    }
}

fn interval(from: Option<usize>, to: Option<usize>, bases: &[Series]) -> Result<Interval> {
    let len = bases.first().map_or(0, |s| s.calendar().len());
    let last = len.checked_sub(1).ok_or_else(|| CliError::Data("expression has no base series".into()))?;
    let (start, end) = (from.unwrap_or(0), to.unwrap_or(last));
    if end > last {
        return Err(CliError::Usage(format!("--to {end} is past the last calendar index {last}")));
    }
    Interval::new(start, end).map_err(|e| CliError::Usage(e.to_string()))
}

/// `date,value` rows; empty cells are left out and unknown ones print `?`.
pub fn table(series: &Series) -> String {
    let mut out = String::from("date,value\n");
    for (i, v) in series.values().iter().enumerate() {
        let text = match v {
            Value::Real(x) => format_number(*x),
            Value::Unknown => "?".to_string(),
            Value::Empty => continue,
        };
        let date = series.calendar().get(series.start() + i).expect("series lies on its calendar");
        out.push_str(&format!("{date},{text}\n"));
    }
    out
}

fn eval(a: &EvalArgs, store: &Store) -> Result<String> {
    let expr = parse_expr(&a.expr)?;
    let series = bases(&expr, &a.data, store)?;
    let iv = interval(a.from, a.to, &series)?;
    let env = series.into_iter().map(|s| (s.name().to_string(), s)).collect();
    Ok(table(&evaluate(&expr, &env, iv)?))
}

fn run_bench(a: &BenchArgs, store: &Store) -> Result<String> {
    let n_max = a.n.iter().copied().max().unwrap_or(0);
    let data = match &a.series {
        Some(name) => store.load(name)?,
        None => synth::random_walk("PX1", n_max.max(1), a.data_seed),
    };
    let rows = bench::run(&data, &a.queries, &a.n, &a.w, a.repeat)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &rows {
        w.serialize(r).map_err(|e| CliError::Data(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Data(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn p2p(a: &P2pArgs, store: &Store) -> Result<Output> {
    let mut config = match &a.config {
        Some(p) => SimConfig::load(p)?,
        None => SimConfig::default(),
    };
    if let Some(p) = a.peers {
        config.peers = p;
    }
    if a.seg_len.is_some() {
        config.seg_len = a.seg_len;
    }
    if let Some(o) = a.overlap {
        config.overlap = o;
    }
    if let Some(s) = a.seed {
        config.seed = s;
    }
    let seed = config.seed;
    let expr = parse_expr(&a.expr)?;
    let series = bases(&expr, &a.data, store)?;
    let iv = interval(a.from, a.to, &series)?;
    let mut net = Network::new(config)?;
    for s in &series {
        net.load_base(s)?;
    }
    let run = execute(&mut net, &expr, iv, seed)?;
    let probe = format!("{}\n{}\n", TimingProbe::CSV_HEADER, run.probe.csv_row());
    Ok(if a.probe_only {
        Output::out(probe)
    } else {
        Output {
            stdout: table(&run.series),
            stderr: probe,
        }
    })
}

fn params(p: &ParamArgs) -> Result<CostParams<f64>> {
    match (p.a, p.b, p.c) {
        (Some(a), Some(b), Some(c)) => Ok(CostParams::new(a, b, c)?),
        (None, None, None) => Ok(tseries_cost::fit(&tseries_cost::measured_rows(), MEASURED_N, MEASURED_T_NET)?.params),
        _ => Err(CliError::Usage("give all of --a, --b and --c or none".into())),
    }
}

fn cost(c: CostCommand) -> Result<String> {
    match c {
        CostCommand::Capacity {
            stocks,
            years,
            days,
            hours,
            per_minute,
            bytes,
        } => {
            let total = tseries_cost::capacity_bytes(stocks, years, days, hours, per_minute, bytes);
            Ok(format!("{total}\n{}\n", tseries_cost::format_gb(total)))
        }
        CostCommand::Fit { path, n, t_net } => {
            let rows = match &path {
                Some(p) => tseries_cost::read_rows(store::read_file(p)?.as_bytes())?,
                None => tseries_cost::measured_rows(),
            };
            let fit = tseries_cost::fit(&rows, n, t_net)?;
            let (p, k) = (fit.params, fit.params.gain_constants());
            let best = tseries_cost::optimal_peers(n, &k, 4096);
            let mut out = String::from("A,B,C,K1,K2,K3,optimal_p\n");
            out.push_str(&format!("{},{},{},{},{},{},{best}\n\n", p.a, p.b, p.c, k.k1, k.k2, k.k3));
            out.push_str("p,t_r,t_r_model,t_r_rel,t_p,t_p_model,t_p_rel\n");
            for r in &fit.residuals {
                out.push_str(&format!(
                    "{},{},{:.1},{:.3},{},{:.1},{:.3}\n",
                    r.p,
                    r.t_r,
                    r.t_r_model,
                    r.t_r_relative(),
                    r.t_p,
                    r.t_p_model,
                    r.t_p_relative()
                ));
            }
            Ok(out)
        }
        CostCommand::Predict {
            p,
            n,
            t_q,
            t_net,
            params: pa,
        } => {
            let params = params(&pa)?;
            let mut out = String::from("P,T_R,T_P,T_Q,T_NET,T_P2P\n");
            for peers in p {
                if peers == 0 {
                    return Err(CliError::Usage("peer counts must be positive".into()));
                }
                let t = tseries_cost::predict_tp2p(peers, n, &params, t_q, t_net);
                out.push_str(&format!(
                    "{},{:.1},{:.1},{:.1},{:.1},{:.1}\n",
                    t.p, t.t_r, t.t_p, t.t_q, t.t_net, t.t_p2p
                ));
            }
            Ok(out)
        }
        CostCommand::Grid { p_max, n, params: pa } => {
            if n.contains(&0) || p_max == 0 {
                return Err(CliError::Usage("p-max and n must be positive".into()));
            }
            let k = params(&pa)?.gain_constants();
            let ps: Vec<usize> = (1..=p_max).collect();
            let mut buf = Vec::new();
            tseries_cost::write_grid(&mut buf, &tseries_cost::gain_grid(&k, &ps, &n))?;
            Ok(String::from_utf8(buf).expect("csv output is utf-8"))
        }
    }
}

fn trip_report(a: &TripArgs) -> Result<String> {
    let table = trip::read_trip_csv(&store::read_file(&a.path)?, &a.path)?;
    let t = table.trip(a.dt)?;
    let data = |e: tseries_core::Error| CliError::Data(e.to_string());
    Ok(format!(
        "rpa,pke,pst\n{},{},{}\n",
        format_number(rpa(&t).map_err(data)?),
        format_number(pke(&t).map_err(data)?),
        format_number(pst(&t).map_err(data)?)
    ))
}
