//! `netident`: link identifiability and monitor placement from the shell.

mod report;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use netident::bench::{bench, write_csv};
use netident::gen::{gen_random_graph, GraphModel};
use netident::identifiability::dail;
use netident::oracle::{identifiable_links_with, solve_metrics, OracleOptions};
use netident::placement::{place, Method};
use netident::suite::{run_equivalence_suite, SuiteConfig};
use netident::{Graph, Placement};
use num_rational::BigRational;

#[derive(Debug, Parser)]
#[command(
    name = "netident",
    version,
    about = "Link identifiability and monitor placement"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Edge-list file: one "u v" pair per line, '#' starts a comment.
    #[arg(long, global = true)]
    graph: Option<PathBuf>,
    /// Comma-separated monitor names.
    #[arg(long, global = true, value_delimiter = ',')]
    monitors: Vec<String>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Emit JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Connected, biconnected and triconnected components as a JSON tree.
    Decompose {
        /// Keep polygons whole instead of fan-triangulating them.
        #[arg(long)]
        polygons: bool,
    },
    /// Identifiable links by decomposition.
    Identify,
    /// Identifiable links by brute-force rank over all measurement paths.
    Oracle {
        /// JSON array of true link metrics in link order; integers or "p/q" strings.
        #[arg(long)]
        solve: Option<PathBuf>,
        /// Refuse graphs with more nodes than this.
        #[arg(long, default_value_t = 14)]
        cap: usize,
        /// Forbid monitors as intermediate path nodes.
        #[arg(long)]
        no_monitor_interior: bool,
    },
    /// Budgeted monitor placement.
    Place {
        #[arg(long)]
        budget: usize,
        /// gmmp, rmp-v, rmp-s or nested.
        #[arg(long, default_value = "gmmp", value_parser = Method::from_str)]
        method: Method,
    },
    /// Random graph as an edge list.
    Gen {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        links: usize,
        /// gnm or 2-connected.
        #[arg(long, default_value = "gnm", value_parser = GraphModel::from_str)]
        model: GraphModel,
    },
    /// Decomposition-versus-oracle equivalence over random instances.
    Suite {
        #[arg(long, default_value_t = 500)]
        count: usize,
        #[arg(long, default_value = "4..10", value_parser = usize_range)]
        nodes: (usize, usize),
        #[arg(long, default_value = "2..4", value_parser = usize_range)]
        kappa: (usize, usize),
        /// Links per node.
        #[arg(long, default_value = "1.2..2.0", value_parser = f64_range)]
        density: (f64, f64),
    },
    /// Placement methods over a budget sweep, as CSV.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "gmmp,rmp-v", value_parser = Method::from_str)]
        methods: Vec<Method>,
        /// Number of synthetic 2-connected graphs; ignored with --graph.
        #[arg(long, default_value_t = 10)]
        graphs: usize,
        #[arg(long, default_value = "6..9", value_parser = usize_range)]
        nodes: (usize, usize),
        #[arg(long, default_value = "3..6", value_parser = usize_range)]
        kappas: (usize, usize),
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn range<T: FromStr>(s: &str) -> Result<(T, T), String>
where
    T::Err: std::fmt::Display,
{
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected lo..hi, got {s:?}"))?;
    let parse = |x: &str| x.trim().parse::<T>().map_err(|e| format!("{x:?}: {e}"));
    Ok((parse(lo)?, parse(hi.trim_start_matches('='))?))
}

fn usize_range(s: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = range::<usize>(s)?;
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok((lo, hi))
}

fn f64_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = range::<f64>(s)?;
    if lo.is_nan() || hi.is_nan() || lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok((lo, hi))
}

fn load_graph(g: &Global) -> Result<Graph> {
    let path = g
        .graph
        .as_ref()
        .ok_or_else(|| anyhow!("--graph is required"))?;
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Graph::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn monitors(g: &Graph, global: &Global) -> Result<Placement> {
    if global.monitors.is_empty() {
        return Ok(Placement::new(vec![]));
    }
    Ok(Placement::from_names(g, &global.monitors)?)
}

fn print_json(out: &mut impl Write, value: &impl serde::Serialize) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn parse_metrics(path: &PathBuf) -> Result<Vec<BigRational>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let values: Vec<serde_json::Value> =
        serde_json::from_str(&text).context("metrics must be a JSON array")?;
    values
        .iter()
        .map(|v| match v {
            serde_json::Value::Number(n) if n.is_i64() => {
                Ok(BigRational::from_integer(n.as_i64().unwrap().into()))
            }
            serde_json::Value::String(s) => s.parse().map_err(|_| anyhow!("bad rational {s:?}")),
            other => bail!("metric {other} is neither an integer nor a \"p/q\" string"),
        })
        .collect()
}

/// Whether the run failed a property check rather than a usage check.
enum Outcome {
    Done,
    SuiteFailed,
}

fn run(cli: Cli, out: &mut impl Write) -> Result<Outcome> {
    let global = &cli.global;
    match cli.command {
        Command::Decompose { polygons } => {
            let g = load_graph(global)?;
            let p = monitors(&g, global)?;
            print_json(out, &report::decompose(&g, &p, global.seed, polygons))?;
        }
        Command::Identify => {
            let g = load_graph(global)?;
            let r = dail(&g, &monitors(&g, global)?);
            if global.json {
                print_json(out, &r)?;
            } else {
                for l in &r.links {
                    let verdict = if l.identifiable {
                        "identifiable"
                    } else {
                        "unidentifiable"
                    };
                    let reason = serde_json::to_value(l.reason)?;
                    writeln!(
                        out,
                        "{}-{}\t{verdict}\t{}",
                        l.u,
                        l.v,
                        reason.as_str().unwrap_or_default()
                    )?;
                }
            }
        }
        Command::Oracle {
            solve,
            cap,
            no_monitor_interior,
        } => {
            let g = load_graph(global)?;
            let p = monitors(&g, global)?;
            let opts = OracleOptions {
                node_cap: cap,
                monitor_interior: !no_monitor_interior,
            };
            let verdict = identifiable_links_with(&g, &p, opts)?;
            let recovered = match solve {
                Some(path) => Some(solve_metrics(&g, &p, &parse_metrics(&path)?, opts)?),
                None => None,
            };
            let r = report::oracle(&g, &verdict, recovered.as_deref());
            if global.json {
                print_json(out, &r)?;
            } else {
                for l in &r.links {
                    let verdict = if l.identifiable {
                        "identifiable"
                    } else {
                        "unidentifiable"
                    };
                    match &l.value {
                        Some(v) => writeln!(out, "{}-{}\t{verdict}\t{v}", l.u, l.v)?,
                        None => writeln!(out, "{}-{}\t{verdict}", l.u, l.v)?,
                    }
                }
                writeln!(out, "rank {} over {} paths", r.rank, r.path_count)?;
            }
        }
        Command::Place { budget, method } => {
            let g = load_graph(global)?;
            print_json(out, &place(&g, method, budget, global.seed)?)?;
        }
        Command::Gen {
            nodes,
            links,
            model,
        } => {
            let g = gen_random_graph(nodes, links, model, global.seed)?;
            write!(out, "{}", g.to_edge_list())?;
        }
        Command::Suite {
            count,
            nodes,
            kappa,
            density,
        } => {
            let cfg = SuiteConfig {
                count,
                nodes,
                kappa,
                density,
                seed: global.seed,
            };
            let summary = run_equivalence_suite(&cfg)?;
            if global.json {
                print_json(out, &summary)?;
            } else {
                writeln!(
                    out,
                    "{} instances, {} passed, {} failed",
                    summary.instances, summary.passed, summary.failed
                )?;
                if let Some(c) = &summary.first_counterexample {
                    print_json(out, c)?;
                }
            }
            if !summary.pass() {
                return Ok(Outcome::SuiteFailed);
            }
        }
        Command::Bench {
            methods,
            graphs,
            nodes,
            kappas,
            out: path,
        } => {
            let inputs = match &global.graph {
                Some(file) => {
                    let name = file
                        .file_stem()
                        .map_or("graph".into(), |s| s.to_string_lossy().into_owned());
                    vec![(name, load_graph(global)?)]
                }
                None => synthetic_graphs(graphs, nodes, global.seed)?,
            };
            let kappas: Vec<usize> = (kappas.0..=kappas.1).collect();
            let records = bench(&methods, &inputs, &kappas, global.seed)?;
            match path {
                Some(p) => write_csv(
                    &records,
                    fs::File::create(&p).with_context(|| format!("creating {}", p.display()))?,
                )?,
                None => write_csv(&records, &mut *out)?,
            }
        }
    }
    Ok(Outcome::Done)
}

/// 2-connected graphs with 1.5 links per node, named `g0`, `g1`, ...
fn synthetic_graphs(
    count: usize,
    nodes: (usize, usize),
    seed: u64,
) -> Result<Vec<(String, Graph)>> {
    (0..count)
        .map(|i| {
            let n = nodes.0 + i % (nodes.1 - nodes.0 + 1);
            let links = (3 * n / 2).clamp(n, n * (n - 1) / 2);
            let g = gen_random_graph(
                n,
                links,
                GraphModel::TwoConnected,
                seed.wrapping_add(i as u64),
            )?;
            Ok((format!("g{i}"), g))
        })
        .collect()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::SuiteFailed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
