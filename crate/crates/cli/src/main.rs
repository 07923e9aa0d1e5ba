use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use log::info;
use pcycle_core::config::{parse_config, Config};
use pcycle_core::cycles::{enumerate_simple_cycles_with, DEFAULT_CYCLE_CAP};
use pcycle_core::db::{build_db_model, solve_db_with, DbInstance, DEFAULT_PAIR_CAP};
use pcycle_core::plan::{parse_plan, plan_max_hops, plan_to_text};
use pcycle_core::report::{compute_se, render_csv, render_text_table, MethodResult, TableOptions};
use pcycle_core::sg::{build_sg_model, solve_sg_with};
use pcycle_core::sim::verify_plan;
use pcycle_core::topology::validate_protectable_with_cap;
use pcycle_core::{default_max_hops, parse_network, CycleSet, Error, Method, MethodOptions, Network, Plan};
use pcycle_ilp::{export_lp_text, SolveStats, SolveStatus, DEFAULT_TIME_LIMIT};

const EXIT_VERIFY_FAIL: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_INPUT: u8 = 4;

#[derive(Parser)]
#[command(name = "pcycle", version, about = "Dual-link-failure p-cycle protection design")]
struct Cli {
    /// key=value settings: max_hops, time_limit_s, pair_cap, cycle_cap
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// More log output (repeat for debug)
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Topology checks
    Topo {
        #[command(subcommand)]
        action: TopoAction,
    },
    /// Cycle enumeration
    Cycles {
        #[command(subcommand)]
        action: CyclesAction,
    },
    /// Design a protection plan
    Solve {
        file: PathBuf,
        #[arg(long, value_enum)]
        method: MethodArg,
        /// Seconds before the search stops with its best plan
        #[arg(long)]
        time_limit: Option<f64>,
        #[arg(long)]
        max_hops: Option<usize>,
        /// Write the model in LP format
        #[arg(long)]
        export_lp: Option<PathBuf>,
        /// Write the plan here instead of stdout
        #[arg(long)]
        plan_out: Option<PathBuf>,
    },
    /// Check a plan against every dual link failure
    Verify {
        file: PathBuf,
        #[arg(long)]
        plan: PathBuf,
        /// Print only the summary line
        #[arg(long)]
        quiet: bool,
    },
    /// Run both methods on each network and compare them
    Report {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        time_limit: Option<f64>,
        #[arg(long)]
        max_hops: Option<usize>,
        /// Print `-` for solve times so reruns are byte-identical
        #[arg(long)]
        no_timings: bool,
    },
}

#[derive(Subcommand)]
enum TopoAction {
    Check {
        file: PathBuf,
        #[arg(long)]
        max_hops: Option<usize>,
    },
}

#[derive(Subcommand)]
enum CyclesAction {
    Enum {
        file: PathBuf,
        #[arg(long)]
        max_hops: Option<usize>,
        /// One line per cycle with its link relations
        #[arg(long)]
        dump: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Sg,
    Db,
}

/// A failure with its exit code.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NoStraddlingCycle { .. } | Error::NoProtectionPair { .. } => EXIT_INFEASIBLE,
            _ => EXIT_INPUT,
        };
        Fail(code, e.to_string())
    }
}

type CliResult = Result<u8, Fail>;

struct Settings {
    cfg: Config,
}

impl Settings {
    fn max_hops(&self, flag: Option<usize>, net: &Network) -> Result<usize, Fail> {
        let hops = flag.or(self.cfg.max_hops).unwrap_or_else(|| default_max_hops(net));
        if hops < 3 {
            return Err(Fail(EXIT_INPUT, format!("max-hops must be at least 3, got {hops}")));
        }
        Ok(hops)
    }

    fn cycle_cap(&self) -> usize {
        self.cfg.cycle_cap.unwrap_or(DEFAULT_CYCLE_CAP)
    }

    fn method_options(&self, time_limit: Option<f64>) -> Result<MethodOptions, Fail> {
        let time_limit = match time_limit {
            Some(s) if s.is_finite() && s > 0.0 => Duration::from_secs_f64(s),
            Some(s) => return Err(Fail(EXIT_INPUT, format!("time limit must be positive, got {s}"))),
            None => self.cfg.time_limit.unwrap_or(DEFAULT_TIME_LIMIT),
        };
        Ok(MethodOptions {
            time_limit,
            pair_cap: self.cfg.pair_cap.unwrap_or(DEFAULT_PAIR_CAP),
            ..MethodOptions::default()
        })
    }

    fn cycles(&self, net: &Network, hops: usize) -> Result<CycleSet, Fail> {
        let cs = enumerate_simple_cycles_with(net, hops, self.cycle_cap())?;
        info!("{} cycles of at most {hops} hops", cs.len());
        Ok(cs)
    }
}

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| Fail(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Fail> {
    fs::write(path, text).map_err(|e| Fail(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn load_network(path: &Path) -> Result<Network, Fail> {
    parse_network(&read(path)?).map_err(|e| Fail(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn topo_check(s: &Settings, file: &Path, max_hops: Option<usize>) -> CliResult {
    let net = load_network(file)?;
    let hops = s.max_hops(max_hops, &net)?;
    let report = validate_protectable_with_cap(&net, hops, s.cycle_cap())?;
    println!("network {}", net.name());
    println!("nodes {} links {} avg-degree {:.2}", net.node_count(), net.link_count(), pcycle_core::avg_nodal_degree(&net));
    println!("three-connected {}", report.three_connected);
    for &(a, b, paths) in &report.offending_node_pairs {
        println!("offending {} {} paths {paths}", net.node_name(a), net.node_name(b));
    }
    for &l in &report.unstraddled_links {
        println!("unstraddled {} {}", l.0, net.link_label(l));
    }
    Ok(0)
}

fn cycles_enum(s: &Settings, file: &Path, max_hops: Option<usize>, dump: bool) -> CliResult {
    let net = load_network(file)?;
    let hops = s.max_hops(max_hops, &net)?;
    let cs = s.cycles(&net, hops)?;
    println!("cycles {} max-hops {hops}", cs.len());
    if dump {
        print!("{}", cs.dump(&net));
    }
    Ok(0)
}

fn status_code(status: SolveStatus) -> u8 {
    match status {
        SolveStatus::Optimal => 0,
        SolveStatus::CapHit => EXIT_CAP,
        SolveStatus::Infeasible | SolveStatus::Unbounded => EXIT_INFEASIBLE,
    }
}

fn print_outcome(net: &Network, status: SolveStatus, plan: Option<&Plan>, best_bound: f64, stats: &SolveStats) {
    println!("status {}", status.label());
    if let Some(plan) = plan {
        let spare: u64 = plan.spare().iter().map(|&s| s as u64).sum();
        println!("objective {}", plan.total_cost());
        println!("total-spare {spare}");
        match compute_se(plan.spare(), net) {
            Ok(se) => println!("se {se:.4}"),
            Err(_) => println!("se undefined"),
        }
    }
    if best_bound.is_finite() {
        println!("best-bound {best_bound}");
    }
    println!(
        "variables {} constraints {} nodes {} time {:.3}s",
        stats.variable_count,
        stats.constraint_count,
        stats.nodes_explored,
        stats.wall_time.as_secs_f64()
    );
}

fn solve(s: &Settings, file: &Path, method: MethodArg, time_limit: Option<f64>, max_hops: Option<usize>, export_lp: Option<&Path>, plan_out: Option<&Path>) -> CliResult {
    let net = load_network(file)?;
    let hops = s.max_hops(max_hops, &net)?;
    let cs = s.cycles(&net, hops)?;
    let opts = s.method_options(time_limit)?;
    let (status, plan, bound, stats) = match method {
        MethodArg::Sg => {
            if let Some(path) = export_lp {
                write(path, &export_lp_text(&build_sg_model(&net, &cs)?.0))?;
            }
            let out = solve_sg_with(&net, &cs, &opts)?;
            (out.status, out.plan.map(Plan::Sg), out.best_bound, out.stats)
        }
        MethodArg::Db => {
            if let Some(path) = export_lp {
                let inst = DbInstance::new(&net, &cs, opts.pair_cap)?;
                write(path, &export_lp_text(&build_db_model(&net, &cs, &inst)?.0))?;
            }
            let out = solve_db_with(&net, &cs, &opts)?;
            (out.status, out.plan.map(Plan::Db), out.best_bound, out.stats)
        }
    };
    print_outcome(&net, status, plan.as_ref(), bound, &stats);
    if let Some(plan) = &plan {
        let text = plan_to_text(plan, &cs);
        match plan_out {
            Some(path) => write(path, &text)?,
            None => print!("{text}"),
        }
    }
    Ok(status_code(status))
}

fn verify(s: &Settings, file: &Path, plan_path: &Path, quiet: bool) -> CliResult {
    let net = load_network(file)?;
    let text = read(plan_path)?;
    let hops = match plan_max_hops(&text)? {
        Some(h) => h,
        None => s.max_hops(None, &net)?,
    };
    let cs = s.cycles(&net, hops)?;
    let plan = parse_plan(&text, &net, &cs)?;
    let report = verify_plan(&plan, &net, &cs)?;
    if !quiet {
        print!("{}", report.scenario_lines(&net));
    }
    println!("{}", report.summary());
    Ok(if report.pass { 0 } else { EXIT_VERIFY_FAIL })
}

fn run_method(net: &Network, cs: &CycleSet, method: Method, opts: &MethodOptions) -> Result<MethodResult, Fail> {
    let result = match method {
        Method::Sg => solve_sg_with(net, cs, opts).map(|o| MethodResult::from_outcome(net, method, &o, |p| &p.spare)),
        Method::Db => solve_db_with(net, cs, opts).map(|o| MethodResult::from_outcome(net, method, &o, |p| &p.spare)),
    };
    match result {
        Ok(r) => Ok(r),
        Err(Error::NoStraddlingCycle { .. } | Error::NoProtectionPair { .. }) => Ok(MethodResult::infeasible(net, method)),
        Err(e) => Err(e.into()),
    }
}

fn report(s: &Settings, files: &[PathBuf], csv: Option<&Path>, time_limit: Option<f64>, max_hops: Option<usize>, no_timings: bool) -> CliResult {
    let opts = s.method_options(time_limit)?;
    let mut rows = Vec::new();
    for file in files {
        let net = load_network(file)?;
        let hops = s.max_hops(max_hops, &net)?;
        let cs = s.cycles(&net, hops)?;
        info!("{}: solving", net.name());
        let db = run_method(&net, &cs, Method::Db, &opts)?;
        let sg = run_method(&net, &cs, Method::Sg, &opts)?;
        rows.push((db, sg));
    }
    let table = TableOptions { timings: !no_timings };
    print!("{}", render_text_table(&rows, table));
    if let Some(path) = csv {
        write(path, &render_csv(&rows, table)?)?;
    }
    Ok(0)
}

fn run(cli: Cli) -> CliResult {
    let cfg = match &cli.config {
        Some(path) => parse_config(&read(path)?).map_err(|e| Fail(EXIT_INPUT, format!("{}: {e}", path.display())))?,
        None => Config::default(),
    };
    let s = Settings { cfg };
    match cli.command {
        Command::Topo { action: TopoAction::Check { file, max_hops } } => topo_check(&s, &file, max_hops),
        Command::Cycles { action: CyclesAction::Enum { file, max_hops, dump } } => cycles_enum(&s, &file, max_hops, dump),
        Command::Solve { file, method, time_limit, max_hops, export_lp, plan_out } => {
            solve(&s, &file, method, time_limit, max_hops, export_lp.as_deref(), plan_out.as_deref())
        }
        Command::Verify { file, plan, quiet } => verify(&s, &file, &plan, quiet),
        Command::Report { files, csv, time_limit, max_hops, no_timings } => {
            report(&s, &files, csv.as_deref(), time_limit, max_hops, no_timings)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let code = match run(cli) {
        Ok(code) => code,
        Err(Fail(code, message)) => {
            eprintln!("error: {message}");
            code
        }
    };
    // a capped solve may leave an abandoned relaxation running
    std::process::exit(code as i32)
}
