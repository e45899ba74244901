//! The `honeycut` command line.
//!
//! Exit codes: 0 success, 1 I/O, 2 usage or unreadable input, 3 planning
//! failed, 4 shape too large, 5 verification failed.

mod config;
mod svg;

pub use config::Settings;
pub use svg::render_svg;

use crate::gcode::{self, GcodeError};
use crate::honeycomb::{self, HoneycombMap};
use crate::planner::{self, io as plan_io, CutPlan, PlanError, PlanOptions};
use crate::shape::{parse_path, Shape};
use clap::{Parser, Subcommand};
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
enum Failure {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Usage(String),
    #[error("planning failed")]
    Planning,
    #[error("{0}")]
    TooLarge(String),
    #[error("verification failed")]
    Verify,
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Io(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Planning => 3,
            Failure::TooLarge(_) => 4,
            Failure::Verify => 5,
        }
    }
}

type Res = Result<(), Failure>;

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("`{s}` is not a positive number")),
    }
}

fn non_negative(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("`{s}` is not a non-negative number")),
    }
}

fn finite(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("`{s}` is not a finite number")),
    }
}

#[derive(Parser, Debug)]
#[command(name = "honeycut", version, about = "Knife cut planning on honeycomb core blocks")]
struct Cli {
    /// File of `key = value` overrides for knife, constraints, machine and grid settings.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Generate a synthetic block map.
    #[command(allow_negative_numbers = true)]
    GenGrid {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        cols: Option<u32>,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        rows: Option<u32>,
        /// Nominal cell edge, mm.
        #[arg(long, value_parser = positive)]
        cell_edge: Option<f64>,
        /// Node jitter standard deviation, mm.
        #[arg(long, value_parser = non_negative)]
        jitter: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Glue-line direction, degrees.
        #[arg(long, value_parser = finite)]
        ribbon_axis: Option<f64>,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Check a map file against the map invariants.
    ValidateMap {
        #[arg(long)]
        map: PathBuf,
    },
    /// Place a shape on a map and plan its cut points.
    Plan {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        shape: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// Permit cuts through double walls.
        #[arg(long)]
        allow_double: bool,
        /// Also try a placement with the longest straight line on the block edge.
        #[arg(long)]
        use_block_edge: bool,
    },
    /// Convert a plan to G-code.
    Gcode {
        #[arg(long)]
        plan: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Parse and replay a program and check every plunge against the map.
    Simulate {
        #[arg(long)]
        program: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        shape: PathBuf,
        /// Plan providing the shape placement.
        #[arg(long)]
        plan: PathBuf,
    },
    /// Draw a map, optionally with a shape and its cut points, as SVG.
    Render {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        shape: Option<PathBuf>,
        #[arg(long)]
        plan: Option<PathBuf>,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Print the metrics of a plan, re-verifying it when map and shape are given.
    Report {
        #[arg(long)]
        plan: PathBuf,
        #[arg(long, requires = "shape")]
        map: Option<PathBuf>,
        #[arg(long, requires = "map")]
        shape: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Res {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn usage(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Usage(format!("{}: {e}", path.display()))
}

fn load_map(path: &Path) -> Result<HoneycombMap, Failure> {
    honeycomb::load_map(&read(path)?).map_err(|e| usage(path, e))
}

fn load_shape(path: &Path) -> Result<Shape, Failure> {
    parse_path(&read(path)?).map_err(|e| usage(path, e))
}

fn load_plan(path: &Path) -> Result<CutPlan, Failure> {
    plan_io::load_plan(&read(path)?).map_err(|e| usage(path, e))
}

fn violations_json<T: std::fmt::Display>(vs: &[T]) -> String {
    let list: Vec<String> = vs.iter().map(ToString::to_string).collect();
    let mut s = serde_json::to_string_pretty(&serde_json::json!({ "violations": list })).expect("serializes");
    s.push('\n');
    s
}

fn settings(path: Option<&Path>) -> Result<Settings, Failure> {
    let s = match path {
        Some(p) => Settings::parse(&read(p)?).map_err(|e| usage(p, e))?,
        None => Settings::default(),
    };
    s.check().map_err(Failure::Usage)?;
    Ok(s)
}

fn dispatch(cli: Cli) -> Res {
    let mut cfg = settings(cli.config.as_deref())?;
    match cli.cmd {
        Cmd::GenGrid {
            cols,
            rows,
            cell_edge,
            jitter,
            seed,
            ribbon_axis,
            out,
        } => {
            let g = &mut cfg.grid;
            g.columns = cols.unwrap_or(g.columns);
            g.rows = rows.unwrap_or(g.rows);
            g.cell_edge = cell_edge.unwrap_or(g.cell_edge);
            g.jitter_sigma = jitter.unwrap_or(g.jitter_sigma);
            g.seed = seed.unwrap_or(g.seed);
            g.ribbon_axis = ribbon_axis.unwrap_or(g.ribbon_axis);
            let map = honeycomb::generate(g).map_err(|e| Failure::Usage(e.to_string()))?;
            write(&out, &honeycomb::save_map(&map))?;
            println!("nodes: {}\nedges: {}", map.nodes().len(), map.edges().len());
            Ok(())
        }
        Cmd::ValidateMap { map } => {
            let m = load_map(&map)?;
            let vs = honeycomb::validate(&m);
            if vs.is_empty() {
                println!("ok: {} nodes, {} edges", m.nodes().len(), m.edges().len());
                Ok(())
            } else {
                print!("{}", violations_json(&vs));
                Err(Failure::Verify)
            }
        }
        Cmd::Plan {
            map,
            shape,
            out,
            allow_double,
            use_block_edge,
        } => {
            let m = load_map(&map)?;
            let s = load_shape(&shape)?;
            cfg.constraints.allow_double |= allow_double;
            let opts = PlanOptions { use_block_edge };
            match planner::plan(&s, &m, &cfg.knife, &cfg.constraints, &opts) {
                Ok(p) => {
                    write(&out, &plan_io::save_plan(&p))?;
                    print!("{}", plan_io::report_json(&p.metrics));
                    Ok(())
                }
                Err(PlanError::PlanningFailed(f)) => {
                    print!("{}", plan_io::failure_json(&f));
                    Err(Failure::Planning)
                }
                Err(e @ PlanError::ShapeTooLarge { .. }) => Err(Failure::TooLarge(e.to_string())),
                Err(e) => Err(Failure::Usage(e.to_string())),
            }
        }
        Cmd::Gcode { plan, out } => {
            let p = load_plan(&plan)?;
            match gcode::emit(&p, &cfg.machine) {
                Ok(text) => write(&out, &text),
                Err(e @ GcodeError::QuantizationCollision { .. }) => {
                    eprintln!("honeycut: {e}");
                    Err(Failure::Verify)
                }
                Err(e) => Err(Failure::Usage(e.to_string())),
            }
        }
        Cmd::Simulate {
            program,
            map,
            shape,
            plan,
        } => {
            let prog = gcode::parse(&read(&program)?).map_err(|e| usage(&program, e))?;
            let m = load_map(&map)?;
            let p = load_plan(&plan)?;
            let placed = load_shape(&shape)?.apply_placement(&p.placement);
            match gcode::verify_program(&prog, &m, &placed, &cfg.knife, &cfg.constraints, &cfg.machine) {
                Ok(r) => {
                    print!("{}", plan_io::report_json(&r));
                    Ok(())
                }
                Err(vs) => {
                    print!("{}", violations_json(&vs));
                    Err(Failure::Verify)
                }
            }
        }
        Cmd::Render { map, shape, plan, out } => {
            let m = load_map(&map)?;
            let p = plan.as_deref().map(load_plan).transpose()?;
            let s = shape.as_deref().map(load_shape).transpose()?.map(|s| match &p {
                Some(p) => s.apply_placement(&p.placement),
                None => s,
            });
            write(&out, &render_svg(&m, s.as_ref(), p.as_ref(), &cfg.knife))
        }
        Cmd::Report { plan, map, shape } => {
            let p = load_plan(&plan)?;
            let (Some(map), Some(shape)) = (map, shape) else {
                print!("{}", plan_io::report_json(&p.metrics));
                return Ok(());
            };
            let m = load_map(&map)?;
            let s = load_shape(&shape)?;
            match planner::verify_plan(&p, &s, &m, &cfg.knife, &cfg.constraints) {
                Ok(r) => {
                    print!("{}", plan_io::report_json(&r));
                    Ok(())
                }
                Err(vs) => {
                    print!("{}", violations_json(&vs));
                    Err(Failure::Verify)
                }
            }
        }
    }
}

/// Run the command line and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("honeycut: {f}");
            f.code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn bad_flags_are_usage_errors() {
        assert_eq!(run(["honeycut", "gen-grid", "--cell-edge", "-1", "-o", "x.map"]), 2);
        assert_eq!(run(["honeycut", "frobnicate"]), 2);
        assert_eq!(run(["honeycut", "--help"]), 0);
    }
}
