//! Command-line surface: input files, canonical JSON output, basin
//! rendering and the subcommands wrapping the library.

mod commands;
mod input;
mod json;
mod render;

pub use commands::{
    cmd_analyze, cmd_equivalence, cmd_newton_graph, cmd_orbifold, cmd_thurston, cmd_validate, overlay_lines,
    point_json, witness_json, write_files, NewtonGraphOutput,
};
pub use input::{polynomial_from_json, read_json, roots_from_json, MapSource};
pub use json::canonical_json;
pub use render::{default_palette, render_basins, Image, RenderSpec, Viewport, ESCAPED, OVERLAY, UNDECIDED};

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

#[derive(Parser, Debug)]
#[command(name = "newton-graph", version, about = "Channel diagrams and Newton graphs of Newton maps")]
pub struct Cli {
    /// Distance at which an orbit counts as having reached a fixed point.
    #[arg(long, global = true)]
    pub tol_fix: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct MapArgs {
    /// JSON file {"roots": [{"re", "im", "mult"?}]}.
    #[arg(long)]
    pub roots: Option<PathBuf>,
    /// JSON file {"coeffs": [{"re", "im"}]} in ascending degree.
    #[arg(long)]
    pub coeffs: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Fixed points, critical orbits and the postcritically fixed verdict.
    Analyze {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pullback levels up to the Newton graph, with validation.
    NewtonGraph {
        #[command(flatten)]
        map: MapArgs,
        /// Directory for level graphs, DOT files and reports.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 20)]
        max_level: usize,
    },
    /// Basins of attraction as a PPM image.
    Render {
        #[command(flatten)]
        map: MapArgs,
        /// Output file, or a directory to hold basins.ppm.
        #[arg(long, default_value = "basins.ppm")]
        out: PathBuf,
        #[arg(long, default_value_t = 512)]
        width: usize,
        #[arg(long, default_value_t = 512)]
        height: usize,
        /// re_min,re_max,im_min,im_max
        #[arg(long, default_value = "-2,2,-2,2", allow_hyphen_values = true)]
        viewport: String,
        #[arg(long, default_value_t = 200)]
        max_iter: usize,
        /// Draw the channel diagram, or the pullback level given by --overlay-level.
        #[arg(long)]
        overlay: bool,
        #[arg(long, default_value_t = 0)]
        overlay_level: usize,
    },
    /// Checks a graph JSON file with its map against the Newton graph axioms.
    Validate {
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rotation-preserving equivalences between two graphs with maps.
    Equivalence { first: PathBuf, second: PathBuf },
    /// Leading eigenvalue and obstruction verdict from lift data or a matrix.
    Thurston { data: PathBuf },
    /// Orbifold weights and Euler characteristic of a marked map.
    Orbifold { data: PathBuf },
}

fn map_of(args: &MapArgs) -> Result<crate::complex_poly::RationalMap> {
    MapSource::from_files(args.roots.as_deref(), args.coeffs.as_deref())?.newton_map()
}

fn tolerances(cli: &Cli) -> Result<Tolerances> {
    let mut tol = Tolerances::default();
    if let Some(t) = cli.tol_fix {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::Input(format!("--tol-fix must be positive, got {t}")));
        }
        tol.eps_fix = t;
    }
    Ok(tol)
}

/// Runs one command; returns the exit code and writes results to `out`.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let tol = tolerances(cli)?;
    match &cli.command {
        Command::Analyze { map, out: dir } => {
            let report = cmd_analyze(&map_of(map)?, &tol)?;
            let text = canonical_json(&report);
            if let Some(dir) = dir {
                write_files(dir, &[("analysis.json".into(), text.clone())])?;
            }
            out.write_all(text.as_bytes())?;
            Ok(0)
        }
        Command::NewtonGraph { map, out: dir, max_level } => {
            let result = cmd_newton_graph(&map_of(map)?, *max_level, &tol)?;
            if let Some(dir) = dir {
                write_files(dir, &result.files)?;
            }
            out.write_all(canonical_json(&result.summary).as_bytes())?;
            Ok(if result.run.report.overall { 0 } else { 2 })
        }
        Command::Render { map, out: path, width, height, viewport, max_iter, overlay, overlay_level } => {
            let f = map_of(map)?;
            let mut spec = RenderSpec::new(*width, *height, Viewport::parse(viewport)?);
            spec.max_iterations = *max_iter;
            if *overlay {
                spec.overlay = overlay_lines(&f, *overlay_level, &tol)?;
            }
            let img = render_basins(&f, &spec, &tol)?;
            let path = if path.is_dir() { path.join("basins.ppm") } else { path.clone() };
            let file = std::fs::File::create(&path)?;
            img.write_ppm(std::io::BufWriter::new(file))?;
            out.write_all(canonical_json(&json!({"image": path.display().to_string(), "width": width, "height": height})).as_bytes())?;
            Ok(0)
        }
        Command::Validate { graph, out: dir } => {
            let report = cmd_validate(&read_json(graph)?)?;
            let text = canonical_json(&report.to_json());
            if let Some(dir) = dir {
                write_files(dir, &[("validation.json".into(), text.clone())])?;
            }
            out.write_all(text.as_bytes())?;
            Ok(if report.overall { 0 } else { 2 })
        }
        Command::Equivalence { first, second } => {
            let ws = cmd_equivalence(&read_json(first)?, &read_json(second)?)?;
            let v = json!({
                "equivalent": !ws.is_empty(),
                "witness": ws.first().map(witness_json),
                "count": ws.len(),
            });
            out.write_all(canonical_json(&v).as_bytes())?;
            Ok(if ws.is_empty() { 2 } else { 0 })
        }
        Command::Thurston { data } => {
            let report = cmd_thurston(&read_json(data)?)?;
            out.write_all(canonical_json(&report.to_json()).as_bytes())?;
            Ok(if report.obstruction_candidate { 2 } else { 0 })
        }
        Command::Orbifold { data } => {
            let (data, sig) = cmd_orbifold(&read_json(data)?)?;
            out.write_all(canonical_json(&sig.to_json(&data)).as_bytes())?;
            Ok(0)
        }
    }
}

/// Parses arguments and runs; usage errors exit with 1.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{}", e.render()) } else { write!(out, "{}", e.render()) };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
