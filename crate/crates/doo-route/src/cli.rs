//! The `doo-route` command line.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use doo_route_core::configuration::{encode_traced, validate, DEFAULT_SAMPLE_STEP};
use doo_route_core::geometry::{validate_layout, Layout};
use doo_route_core::router::{next_action, project, PlanOutcome};
use doo_route_core::world::{bundled_board, run_episode, Board, Outcome};
use doo_route_core::{Configuration, World};
use serde_json::json;

use crate::bench::{run_benchmark, threads_from_env, BenchConfig};
use crate::io::{ids, point_json, read_json, ConfigurationJson, DooInput, GraphJson, LayoutJson, PolylineJson};
use crate::{svg, CliError};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "doo-route", version, about = "Represent and route deformable linear objects on a convex-decomposed board")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Split the free space into convex regions; prints the layout with regions filled in.
    Decompose { layout: PathBuf },
    /// Build the spatial representation graph.
    Graph { layout: PathBuf },
    /// Encode a polyline as a configuration.
    Encode {
        layout: PathBuf,
        polyline: PathBuf,
        /// Print the configuration before slack removal.
        #[arg(long)]
        raw: bool,
        #[arg(long, default_value_t = DEFAULT_SAMPLE_STEP)]
        sample_step: f64,
    },
    /// Compute the next routing action.
    Plan {
        layout: PathBuf,
        /// Current DOO: polyline or configuration JSON.
        #[arg(long)]
        current: PathBuf,
        /// Goal: configuration or polyline JSON.
        #[arg(long)]
        goal: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SAMPLE_STEP)]
        sample_step: f64,
    },
    /// Run a routing episode and print one JSON record per line.
    Simulate {
        layout: PathBuf,
        #[arg(long)]
        initial: PathBuf,
        #[arg(long)]
        goal: PathBuf,
        #[arg(long, default_value_t = 15)]
        cap: usize,
        #[arg(long, default_value_t = DEFAULT_SAMPLE_STEP)]
        sample_step: f64,
    },
    /// Route random DOOs between random goals and report statistics.
    Bench {
        /// Board layout; the bundled board when omitted.
        #[arg(long)]
        layout: Option<PathBuf>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 15)]
        cap: usize,
        #[arg(long, default_value_t = 0.3)]
        len_min: f64,
        #[arg(long, default_value_t = 0.5)]
        len_max: f64,
    },
    /// Draw the board, its regions and graph, and optionally a DOO, as SVG.
    Render {
        layout: PathBuf,
        #[arg(long)]
        polyline: Option<PathBuf>,
    },
}

fn load_layout(path: &Path) -> Result<Layout, CliError> {
    Ok(read_json::<LayoutJson>(path)?.to_layout())
}

fn load_board(path: &Path) -> Result<Board, CliError> {
    Ok(Board::new(validate_layout(load_layout(path)?)?)?)
}

fn check_step(step: f64) -> Result<f64, CliError> {
    if step > 0.0 && step.is_finite() {
        Ok(step)
    } else {
        Err(CliError::Invalid(format!("--sample-step must be positive, got {step}")))
    }
}

/// The simplified configuration of a DOO given either way.
fn load_configuration(board: &Board, path: &Path, step: f64) -> Result<Configuration, CliError> {
    match read_json::<DooInput>(path)? {
        DooInput::Configuration(c) => {
            let c = Configuration::from_ids(&c.seq);
            validate(&c, &board.graph)
                .map_err(|i| CliError::Invalid(format!("{}: configuration is invalid at index {i}", path.display())))?;
            Ok(c)
        }
        DooInput::Polyline(p) => Ok(board.encode(&p.to_polyline(), step)?.simplified),
    }
}

fn json_line(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string(v).expect("values serialize");
    s.push('\n');
    s
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

/// Runs one invocation and returns what it prints.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    let text = cli.format == Format::Text;
    let mut out = String::new();
    match &cli.command {
        Command::Decompose { layout } => {
            let board = load_board(layout)?;
            let mut l = board.layout.layout().clone();
            l.predecomposed = Some(board.regions.iter().map(|r| r.polygon.clone()).collect());
            if text {
                let _ = writeln!(out, "{} regions", board.regions.len());
                for r in &board.regions {
                    let c = r.centroid;
                    let _ = writeln!(out, "region {}: {} vertices, area {:.6}, centroid ({:.6}, {:.6})", r.id, r.polygon.len(), r.polygon.area(), c.x, c.y);
                }
            } else {
                out = pretty(&LayoutJson::from_layout(&l));
            }
        }
        Command::Graph { layout } => {
            let board = load_board(layout)?;
            let g = GraphJson::new(&board.graph);
            if text {
                let _ = writeln!(out, "{} vertices, {} edges", g.n, g.edges.len());
                for [u, v] in &g.edges {
                    let _ = writeln!(out, "{u} -- {v}");
                }
            } else {
                out = pretty(&g);
            }
        }
        Command::Encode { layout, polyline, raw, sample_step } => {
            let board = load_board(layout)?;
            let doo = read_json::<PolylineJson>(polyline)?.to_polyline();
            let t = encode_traced(&doo, &board.graph, &board.regions, &board.layout, check_step(*sample_step)?)?;
            let c = if *raw { t.raw } else { t.simplified };
            out = if text { format!("{c}\n") } else { json_line(&serde_json::to_value(ConfigurationJson::from(&c)).unwrap()) };
        }
        Command::Plan { layout, current, goal, sample_step } => {
            let board = load_board(layout)?;
            let step = check_step(*sample_step)?;
            let cur = load_configuration(&board, current, step)?;
            let goal = load_configuration(&board, goal, step)?;
            let t0 = Instant::now();
            let plan = next_action(&cur, &goal, &board.graph);
            let us = t0.elapsed().as_secs_f64() * 1e6;
            match plan? {
                PlanOutcome::Done => {
                    out = if text { "done\n".into() } else { json_line(&json!({"outcome": "done"})) };
                }
                PlanOutcome::Next { action, oriented_goal: _ } => {
                    let projected = project(&cur, &action)?;
                    let before = doo_route_core::router::bidirectional_distance(&cur, &goal);
                    if text {
                        let r = Configuration::new(action.replacement.clone());
                        out = format!(
                            "replace [{}, {}) of {cur} with {r}: {projected}, distance {before} -> {}\n",
                            action.span_start, action.span_end, action.expected_distance_after
                        );
                    } else {
                        out = json_line(&json!({
                            "outcome": "next",
                            "span": [action.span_start, action.span_end],
                            "replacement": ids(&action.replacement),
                            "projected": projected.ids(),
                            "distance_before": before,
                            "distance_after": action.expected_distance_after,
                            "plan_time_us": us,
                        }));
                    }
                }
            }
        }
        Command::Simulate { layout, initial, goal, cap, sample_step } => {
            let board = load_board(layout)?;
            let step = check_step(*sample_step)?;
            let doo = read_json::<PolylineJson>(initial)?.to_polyline();
            let goal = load_configuration(&board, goal, step)?;
            let mut world = World::new(board, doo)?;
            world.sample_step = step;
            let epoch = Instant::now();
            let ep = run_episode(world, &goal, *cap, &mut || epoch.elapsed().as_nanos() as u64)?;
            let outcome = match ep.outcome {
                Outcome::Converged => "converged",
                Outcome::ActionCapReached => "cap",
            };
            if text {
                let _ = writeln!(out, "start {} goal {}", ep.initial, ep.goal);
                for (i, s) in ep.steps.iter().enumerate() {
                    let _ = writeln!(
                        out,
                        "step {}: replace [{}, {}) -> {} (distance {} -> {}, {:.1} us)",
                        i + 1,
                        s.action.span_start,
                        s.action.span_end,
                        s.configuration,
                        s.distance_before,
                        s.distance_after,
                        s.plan_time_ns as f64 / 1000.0
                    );
                }
                let _ = writeln!(out, "{outcome} after {} actions", ep.steps.len());
            } else {
                out.push_str(&json_line(&json!({
                    "type": "start",
                    "configuration": ep.initial.ids(),
                    "goal": ep.goal.ids(),
                })));
                for (i, s) in ep.steps.iter().enumerate() {
                    out.push_str(&json_line(&json!({
                        "type": "step",
                        "index": i,
                        "span": [s.action.span_start, s.action.span_end],
                        "replacement": ids(&s.action.replacement),
                        "grasp_range": [s.command.grasp_range.0, s.command.grasp_range.1],
                        "waypoints": s.command.waypoints.iter().map(|p| point_json(*p)).collect::<Vec<_>>(),
                        "tunnel_tags": s.command.tunnel_tags.iter().map(|t| (t.segment, t.tunnel)).collect::<Vec<_>>(),
                        "configuration": s.configuration.ids(),
                        "distance_before": s.distance_before,
                        "distance_after": s.distance_after,
                        "plan_time_us": s.plan_time_ns as f64 / 1000.0,
                    })));
                }
                out.push_str(&json_line(&json!({
                    "type": "end",
                    "outcome": outcome,
                    "actions": ep.steps.len(),
                    "polyline": PolylineJson::from_polyline(&ep.world.doo),
                })));
            }
        }
        Command::Bench { layout, trials, seed, cap, len_min, len_max } => {
            if *trials == 0 || *cap == 0 {
                return Err(CliError::Invalid("--trials and --cap must be at least 1".into()));
            }
            if !(*len_min > 0.0 && len_min <= len_max && len_max.is_finite()) {
                return Err(CliError::Invalid(format!("bad length range [{len_min}, {len_max}]")));
            }
            let l = match layout {
                Some(p) => load_layout(p)?,
                None => bundled_board(),
            };
            let board = Board::new(validate_layout(l)?)?;
            let cfg = BenchConfig {
                trials: *trials,
                seed: *seed,
                cap: *cap,
                length_range: (*len_min, *len_max),
                threads: threads_from_env(),
            };
            let stats = run_benchmark(&board, &cfg);
            if text {
                let _ = writeln!(out, "trials {} (excluded {}, failed {})", stats.trials, stats.excluded, stats.failed);
                let _ = writeln!(out, "success rate {:.3}", stats.success_rate);
                let _ = writeln!(
                    out,
                    "actions mean {:.2} max {} (reference board: mean {} max {})",
                    stats.mean_actions, stats.max_actions, stats.reference.mean_actions, stats.reference.max_actions
                );
                let _ = writeln!(
                    out,
                    "plan time p50 {:.1} us, p99 {:.1} us, max {:.1} us over {} steps",
                    stats.plan_time_p50_us, stats.plan_time_p99_us, stats.plan_time_max_us, stats.plan_steps
                );
            } else {
                out = pretty(&stats);
            }
        }
        Command::Render { layout, polyline } => {
            let board = load_board(layout)?;
            let doo = match polyline {
                Some(p) => Some(read_json::<PolylineJson>(p)?.to_polyline()),
                None => None,
            };
            out = svg::render(&board, doo.as_ref());
        }
    }
    Ok(out)
}

/// Parses `args`, runs, writes output and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = execute(&cli).and_then(|text| match &cli.out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(path.display().to_string(), e.to_string())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io("stdout".into(), e.to_string())),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
