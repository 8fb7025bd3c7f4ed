//! Command-line front end: argument parsing, configuration resolution and
//! dispatch to the experiment harness.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hardedge::harness::{
    clt_experiment, ldp_curve, oracle_compare, oscillation_experiment, sample_counts,
    transition_experiment, Cell, ExperimentReport, Table, Verdict, ZeroCountProbe,
};
use hardedge::io::{parse_config, to_csv, to_json, ConfigPairs};
use hardedge::sde::{HorizonPolicy, IntegratorConfig, ModelParams, Provenance};
use hardedge::special::{ellip_e, ellip_k, gamma_inv, rate_bess, script_h};
use hardedge::{Error, Result};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Ratefn,
    Sample,
    Clt,
    Transition,
    Ldp,
    Osc,
    OracleCompare,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Ratefn => "ratefn",
            Command::Sample => "sample",
            Command::Clt => "clt",
            Command::Transition => "transition",
            Command::Ldp => "ldp",
            Command::Osc => "osc",
            Command::OracleCompare => "oracle-compare",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        <Command as ValueEnum>::from_str(s, false)
            .map_err(|_| Error::Domain(format!("unknown command {s:?}")))
    }

    /// Configuration keys that affect this command's output.
    fn keys(self) -> &'static [&'static str] {
        const INTEGRATOR: [&str; 4] = ["base_step", "settle_window", "tolerance", "horizon_extra"];
        match self {
            Command::Ratefn => &["rho_min", "rho_max", "steps"],
            Command::Sample => &[
                "beta", "a", "lambda", "samples", "seed", "route", "n_matrix",
                INTEGRATOR[0], INTEGRATOR[1], INTEGRATOR[2], INTEGRATOR[3],
            ],
            Command::Clt => &[
                "beta", "a", "lambdas", "samples", "seed",
                INTEGRATOR[0], INTEGRATOR[1], INTEGRATOR[2], INTEGRATOR[3],
            ],
            Command::Transition => &[
                "beta", "a", "lambda", "xs", "samples", "seed",
                INTEGRATOR[0], INTEGRATOR[1], INTEGRATOR[2], INTEGRATOR[3],
            ],
            Command::Ldp => &[
                "rho_min", "rho_max", "steps", "beta", "a", "probe_scales", "probe_samples", "seed",
                INTEGRATOR[0], INTEGRATOR[1], INTEGRATOR[2], INTEGRATOR[3],
            ],
            Command::Osc => &[
                "beta", "a", "c", "horizon", "lambdas", "samples", "seed",
                INTEGRATOR[0], INTEGRATOR[1], INTEGRATOR[2], INTEGRATOR[3],
            ],
            Command::OracleCompare => &[
                "beta", "a", "lambda", "n_matrix", "samples", "seed",
                INTEGRATOR[0], INTEGRATOR[1], INTEGRATOR[2], INTEGRATOR[3],
            ],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Sde,
    Riccati,
    Oracle,
}

impl Route {
    fn name(self) -> &'static str {
        match self {
            Route::Sde => "sde",
            Route::Riccati => "riccati",
            Route::Oracle => "oracle",
        }
    }
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub beta: f64,
    pub a: f64,
    pub lambda: f64,
    pub lambdas: Vec<f64>,
    pub xs: Vec<f64>,
    pub rho_min: f64,
    pub rho_max: f64,
    pub steps: usize,
    pub samples: usize,
    pub seed: u64,
    pub route: Route,
    pub n_matrix: usize,
    pub c: f64,
    pub horizon: f64,
    pub probe_scales: Vec<f64>,
    pub probe_samples: usize,
    pub integrator: IntegratorConfig<f64>,
}

impl RunConfig {
    /// Defaults of `command`, sized like the acceptance runs.
    pub fn defaults(command: Command) -> Self {
        let (lambdas, samples) = match command {
            Command::Osc => (vec![10.0, 100.0, 1000.0], 200),
            Command::Clt | Command::Transition => (vec![50.0, 100.0, 200.0], 2000),
            _ => (vec![50.0, 100.0, 200.0], 500),
        };
        let lambda = match command {
            Command::Transition => 200.0,
            Command::OracleCompare => 3.0,
            _ => 1.0,
        };
        RunConfig {
            command,
            format: Format::Csv,
            output: None,
            beta: 2.0,
            a: if command == Command::Transition { 1.0 } else { 0.0 },
            lambda,
            lambdas,
            xs: vec![8.0 * std::f64::consts::PI],
            rho_min: 0.0,
            rho_max: 4.0,
            steps: 41,
            samples,
            seed: 1,
            route: Route::Sde,
            n_matrix: 400,
            c: 1.0,
            horizon: 1.0,
            probe_scales: vec![1.0, 1.5, 2.0],
            probe_samples: 0,
            integrator: IntegratorConfig::default(),
        }
    }

    fn value_of(&self, key: &str) -> String {
        let list = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
        let HorizonPolicy::Asymptotic { extra } = self.integrator.horizon_policy;
        match key {
            "beta" => self.beta.to_string(),
            "a" => self.a.to_string(),
            "lambda" => self.lambda.to_string(),
            "lambdas" => list(&self.lambdas),
            "xs" => list(&self.xs),
            "rho_min" => self.rho_min.to_string(),
            "rho_max" => self.rho_max.to_string(),
            "steps" => self.steps.to_string(),
            "samples" => self.samples.to_string(),
            "seed" => self.seed.to_string(),
            "route" => self.route.name().to_string(),
            "n_matrix" => self.n_matrix.to_string(),
            "c" => self.c.to_string(),
            "horizon" => self.horizon.to_string(),
            "probe_scales" => list(&self.probe_scales),
            "probe_samples" => self.probe_samples.to_string(),
            "base_step" => self.integrator.base_step.to_string(),
            "settle_window" => self.integrator.settle_window.to_string(),
            "tolerance" => self.integrator.tolerance.to_string(),
            "horizon_extra" => extra.to_string(),
            _ => unreachable!("unknown key {key}"),
        }
    }

    /// The resolved configuration as embedded in outputs. The output path
    /// is a destination, not part of the record.
    pub fn to_pairs(&self) -> ConfigPairs {
        let mut p = ConfigPairs::new();
        p.insert("command".into(), self.command.name().into());
        p.insert(
            "format".into(),
            match self.format {
                Format::Csv => "csv",
                Format::Json => "json",
            }
            .into(),
        );
        for k in self.command.keys() {
            p.insert((*k).to_string(), self.value_of(k));
        }
        p
    }

    /// Builds a configuration from `key=value` pairs over the defaults of
    /// the named command. Keys of other commands are ignored.
    pub fn from_pairs(pairs: &ConfigPairs) -> Result<Self> {
        let command = Command::parse(
            pairs
                .get("command")
                .ok_or_else(|| Error::Domain("configuration names no command".into()))?,
        )?;
        let mut cfg = RunConfig::defaults(command);
        for (k, v) in pairs {
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }

    fn set(&mut self, key: &str, v: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
            v.trim()
                .parse()
                .map_err(|_| Error::Domain(format!("{key}: cannot parse {v:?}")))
        }
        fn list(key: &str, v: &str) -> Result<Vec<f64>> {
            if v.trim().is_empty() {
                return Ok(Vec::new());
            }
            v.split(',').map(|x| num(key, x)).collect()
        }
        match key {
            "command" => {}
            "format" => {
                self.format = <Format as ValueEnum>::from_str(v, true)
                    .map_err(|_| Error::Domain(format!("unknown format {v:?}")))?
            }
            "output" => self.output = Some(PathBuf::from(v)),
            "beta" => self.beta = num(key, v)?,
            "a" => self.a = num(key, v)?,
            "lambda" => self.lambda = num(key, v)?,
            "lambdas" => self.lambdas = list(key, v)?,
            "xs" => self.xs = list(key, v)?,
            "rho_min" => self.rho_min = num(key, v)?,
            "rho_max" => self.rho_max = num(key, v)?,
            "steps" => self.steps = num(key, v)?,
            "samples" => self.samples = num(key, v)?,
            "seed" => self.seed = num(key, v)?,
            "route" => {
                self.route = <Route as ValueEnum>::from_str(v, true)
                    .map_err(|_| Error::Domain(format!("unknown route {v:?}")))?
            }
            "n_matrix" => self.n_matrix = num(key, v)?,
            "c" => self.c = num(key, v)?,
            "horizon" => self.horizon = num(key, v)?,
            "probe_scales" => self.probe_scales = list(key, v)?,
            "probe_samples" => self.probe_samples = num(key, v)?,
            "base_step" => self.integrator.base_step = num(key, v)?,
            "settle_window" => self.integrator.settle_window = num(key, v)?,
            "tolerance" => self.integrator.tolerance = num(key, v)?,
            "horizon_extra" => {
                self.integrator.horizon_policy = HorizonPolicy::Asymptotic { extra: num(key, v)? }
            }
            _ => return Err(Error::Domain(format!("unknown configuration key {key:?}"))),
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        if self.command.keys().contains(&"beta") {
            ModelParams::new(self.beta, self.a, self.lambda.max(0.0))?;
            if self.lambda < 0.0 {
                return Err(Error::Domain(format!("lambda must be >= 0, got {}", self.lambda)));
            }
        }
        if self.command.keys().contains(&"base_step") {
            self.integrator.validate()?;
        }
        if self.rho_min > self.rho_max || self.rho_min < 0.0 {
            return Err(Error::Domain("need 0 <= rho_min <= rho_max".into()));
        }
        Ok(())
    }
}

/// Rendered output of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub text: String,
    pub verdict: Verdict,
}

fn grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        n => (0..n)
            .map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
            .collect(),
    }
}

fn ratefn(cfg: &RunConfig) -> Result<(Table, Value)> {
    let mut table = Table::new(&["rho", "nu", "ellip_k", "ellip_e", "script_h", "gamma", "i_bess"]);
    let mut rows = Vec::new();
    for rho in grid(cfg.rho_min, cfg.rho_max, cfg.steps) {
        let r = rate_bess(rho)?;
        let nu = gamma_inv(rho / 4.0)?;
        let k = if nu < 1.0 { ellip_k(nu)? } else { f64::INFINITY };
        let e = ellip_e(nu)?;
        let h = script_h(nu)?;
        table.push(vec![
            Cell::Real(rho),
            Cell::Real(nu),
            Cell::Real(k),
            Cell::Real(e),
            Cell::Real(h),
            Cell::Real(r.gamma_at_nu),
            Cell::Real(r.i_bess),
        ]);
        rows.push(json!({
            "rho": rho, "nu": nu, "ellip_k": if k.is_finite() { json!(k) } else { json!("inf") },
            "ellip_e": e, "script_h": h, "gamma": r.gamma_at_nu, "i_bess": r.i_bess,
        }));
    }
    Ok((table, json!({ "rows": rows })))
}

fn sample(cfg: &RunConfig) -> Result<(Table, Value)> {
    let params = ModelParams::new(cfg.beta, cfg.a, cfg.lambda)?;
    let route = match cfg.route {
        Route::Sde => Provenance::Sde,
        Route::Riccati => Provenance::Riccati,
        Route::Oracle => Provenance::MatrixOracle,
    };
    let samples = sample_counts(&params, route, cfg.samples, cfg.n_matrix, cfg.seed, &cfg.integrator)?;
    let mut table = Table::new(&["index", "count", "converged", "regime_ok", "provenance"]);
    for (i, s) in samples.iter().enumerate() {
        table.push(vec![
            Cell::Int(i as i64),
            Cell::Int(s.value as i64),
            Cell::Int(s.converged as i64),
            Cell::Int(s.regime_ok as i64),
            Cell::Text(cfg.route.name().into()),
        ]);
    }
    Ok((table, json!({ "samples": samples })))
}

fn report_payload(r: ExperimentReport) -> (Table, Value, Verdict) {
    let mut results = r.results;
    if let Value::Object(m) = &mut results {
        m.insert("checks".into(), json!(r.checks));
        m.insert("experiment".into(), json!(r.experiment));
    }
    (r.table, results, r.verdict)
}

/// Runs a resolved configuration and renders its output.
pub fn execute(cfg: &RunConfig) -> Result<Output> {
    cfg.validate()?;
    let ic = &cfg.integrator;
    let (table, results, verdict) = match cfg.command {
        Command::Ratefn => {
            let (t, v) = ratefn(cfg)?;
            (t, v, Verdict::Pass)
        }
        Command::Sample => {
            let (t, v) = sample(cfg)?;
            (t, v, Verdict::Pass)
        }
        Command::Clt => report_payload(clt_experiment(cfg.beta, cfg.a, &cfg.lambdas, cfg.samples, cfg.seed, ic)?),
        Command::Transition => report_payload(transition_experiment(
            cfg.beta, cfg.a, cfg.lambda, &cfg.xs, cfg.samples, cfg.seed, ic,
        )?),
        Command::Ldp => {
            let probe = (cfg.probe_samples > 0).then(|| ZeroCountProbe {
                eigen_scales: cfg.probe_scales.clone(),
                n_samples: cfg.probe_samples,
                seed: cfg.seed,
                a: cfg.a,
            });
            let rho = grid(cfg.rho_min, cfg.rho_max, cfg.steps);
            report_payload(ldp_curve(&rho, cfg.beta, probe.as_ref(), ic)?)
        }
        Command::Osc => report_payload(oscillation_experiment(
            cfg.beta, cfg.a, cfg.c, cfg.horizon, &cfg.lambdas, cfg.samples, cfg.seed, ic,
        )?),
        Command::OracleCompare => report_payload(oracle_compare(
            cfg.beta, cfg.a, cfg.lambda, cfg.n_matrix, cfg.samples, cfg.seed, ic,
        )?),
    };
    let pairs = cfg.to_pairs();
    let text = match cfg.format {
        Format::Csv => to_csv(&table, &pairs),
        Format::Json => to_json(&pairs, &results, verdict)?,
    };
    Ok(Output { text, verdict })
}

#[derive(Debug, Parser)]
#[command(name = "hardedge", version, about = "Hard-edge point process experiments")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Tabulate K, E, H, gamma and the rate function over a rho grid
    Ratefn(Flags),
    /// Raw counting-function samples from one route
    Sample(Flags),
    /// Central limit theorem experiment
    Clt(Flags),
    /// Hard-edge to bulk transition experiment
    Transition(Flags),
    /// Rate-function curve and zero-count decay
    Ldp(Flags),
    /// Oscillatory-integral decay
    Osc(Flags),
    /// SDE routes against the matrix model
    OracleCompare(Flags),
    /// Re-run the configuration embedded in an output file
    Replay {
        file: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct Flags {
    /// key=value configuration file, applied beneath flags
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
    /// Comma-separated list
    #[arg(long)]
    lambdas: Option<String>,
    /// Comma-separated increment offsets
    #[arg(long)]
    xs: Option<String>,
    #[arg(long)]
    rho_min: Option<f64>,
    #[arg(long)]
    rho_max: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    route: Option<Route>,
    #[arg(long)]
    n_matrix: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<f64>,
    /// Time horizon T of the oscillatory statistic
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long)]
    probe_scales: Option<String>,
    #[arg(long)]
    probe_samples: Option<usize>,
    #[arg(long)]
    base_step: Option<f64>,
    #[arg(long)]
    settle_window: Option<f64>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    horizon_extra: Option<f64>,
}

impl Flags {
    fn pairs(&self) -> ConfigPairs {
        let mut p = ConfigPairs::new();
        let mut put = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                p.insert(k.to_string(), v);
            }
        };
        let s = |x: Option<f64>| x.map(|x| x.to_string());
        put("format", self.format.map(|f| format!("{f:?}").to_lowercase()));
        put("output", self.output.as_ref().map(|o| o.display().to_string()));
        put("beta", s(self.beta));
        put("a", s(self.a));
        put("lambda", s(self.lambda));
        put("lambdas", self.lambdas.clone());
        put("xs", self.xs.clone());
        put("rho_min", s(self.rho_min));
        put("rho_max", s(self.rho_max));
        put("steps", self.steps.map(|x| x.to_string()));
        put("samples", self.samples.map(|x| x.to_string()));
        put("seed", self.seed.map(|x| x.to_string()));
        put("route", self.route.map(|r| r.name().to_string()));
        put("n_matrix", self.n_matrix.map(|x| x.to_string()));
        put("c", s(self.c));
        put("horizon", s(self.horizon));
        put("probe_scales", self.probe_scales.clone());
        put("probe_samples", self.probe_samples.map(|x| x.to_string()));
        put("base_step", s(self.base_step));
        put("settle_window", s(self.settle_window));
        put("tolerance", s(self.tolerance));
        put("horizon_extra", s(self.horizon_extra));
        p
    }
}

fn read_config(path: &PathBuf) -> Result<ConfigPairs> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

/// Resolves argv into a configuration: defaults, then the config file, then flags.
pub fn resolve(argv: impl IntoIterator<Item = impl Into<OsString> + Clone>) -> std::result::Result<RunConfig, clap::Error> {
    let cli = Cli::try_parse_from(argv)?;
    let to_clap = |e: Error| clap::Error::raw(clap::error::ErrorKind::ValueValidation, format!("{e}\n"));
    let (command, flags) = match cli.command {
        Sub::Replay { file, output } => {
            let mut pairs = read_config(&file).map_err(to_clap)?;
            if let Some(o) = output {
                pairs.insert("output".into(), o.display().to_string());
            }
            return RunConfig::from_pairs(&pairs).map_err(to_clap);
        }
        Sub::Ratefn(f) => (Command::Ratefn, f),
        Sub::Sample(f) => (Command::Sample, f),
        Sub::Clt(f) => (Command::Clt, f),
        Sub::Transition(f) => (Command::Transition, f),
        Sub::Ldp(f) => (Command::Ldp, f),
        Sub::Osc(f) => (Command::Osc, f),
        Sub::OracleCompare(f) => (Command::OracleCompare, f),
    };
    let mut pairs = match &flags.config {
        Some(path) => read_config(path).map_err(to_clap)?,
        None => ConfigPairs::new(),
    };
    pairs.extend(flags.pairs());
    pairs.insert("command".into(), command.name().into());
    RunConfig::from_pairs(&pairs).map_err(to_clap)
}

/// Exit code for a harness error: an invalid experiment is a failed verdict,
/// anything else is a usage or environment problem.
pub fn error_code(e: &Error) -> i32 {
    match e {
        Error::Experiment(_) => 1,
        _ => 2,
    }
}

/// Parses `argv`, runs it and writes the output. Returns the exit code.
pub fn parse_and_dispatch(argv: impl IntoIterator<Item = impl Into<OsString> + Clone>) -> i32 {
    let cfg = match resolve(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            if code == 0 {
                let _ = e.print();
            } else {
                let msg = e.to_string();
                let first = msg.lines().next().unwrap_or("invalid arguments");
                eprintln!("hardedge: {}", first.trim_start_matches("error: "));
            }
            return code;
        }
    };
    let out = match execute(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("hardedge: {e}");
            return error_code(&e);
        }
    };
    let written = match &cfg.output {
        Some(path) => fs::write(path, &out.text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(out.text.as_bytes()).map_err(|e| e.to_string())
        }
    };
    if let Err(e) = written {
        eprintln!("hardedge: cannot write output: {e}");
        return 2;
    }
    match out.verdict {
        Verdict::Pass => 0,
        Verdict::Fail => 1,
    }
}
