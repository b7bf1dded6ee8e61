use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pseudodisk::{
    delaunay_graph, emit_svg, generate, parse_drawing, parse_instance, plane_drawing, respect_normalize,
    verify_drawing, write_drawing, write_instance, Family, GenKind, GenSpec, ParseError, PointSet, SvgOptions,
};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "pseudodisk", version, about = "Delaunay-graphs of pseudo-disk families and their plane drawings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that an instance is a pseudo-disk family in generic position.
    Validate {
        #[arg(long)]
        input: PathBuf,
    },
    /// Print the Delaunay-graph edges with their witness disks.
    Delaunay {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Shrink the family until it respects the points; prints the step log.
    Normalize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Build a plane drawing of the Delaunay-graph.
    Draw {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Leave disks out of the SVG.
        #[arg(long)]
        hide_disks: bool,
    },
    /// Check a drawing against its instance.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        drawing: PathBuf,
    },
    /// Write a random valid instance.
    Gen {
        /// poly-disks, homothets, blobs, shrinkable-fixture or capsules
        #[arg(long)]
        kind: GenKind,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        points: usize,
        #[arg(long)]
        disks: usize,
        #[arg(long)]
        output: PathBuf,
        /// Vertices per polygon.
        #[arg(long, default_value_t = 12)]
        k: usize,
        /// Side of the square holding the points.
        #[arg(long, default_value_t = 16)]
        window: u32,
    },
}

/// How a command ended: success, a failed check, or bad input.
enum Failure {
    Check(String),
    Input(String),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<(Family, PointSet), Failure> {
    parse_instance(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn check(e: pseudodisk::Error) -> Failure {
    Failure::Check(e.to_string())
}

#[derive(Serialize)]
struct JsonEdge<'a> {
    x: &'a str,
    y: &'a str,
    witness: &'a str,
}

#[derive(Serialize)]
struct JsonGraph<'a> {
    vertices: &'a [String],
    edges: Vec<JsonEdge<'a>>,
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Validate { input } => {
            let text = read(&input)?;
            match parse_instance(&text) {
                Ok((f, s)) => {
                    println!("valid: {} points, {} disks", s.len(), f.len());
                }
                Err(ParseError::Validation(vs)) => {
                    for v in &vs {
                        println!("{v}");
                    }
                    return Err(Failure::Input(format!("{} violation(s)", vs.len())));
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::Delaunay { input, json } => {
            let (f, s) = load(&input)?;
            let g = delaunay_graph(&f, &s).map_err(check)?;
            if json {
                let edges = g.edges.iter().map(|((x, y), w)| JsonEdge { x, y, witness: w }).collect();
                let out = JsonGraph { vertices: &g.vertices, edges };
                println!("{}", serde_json::to_string_pretty(&out).expect("graph serializes"));
            } else {
                for ((x, y), w) in &g.edges {
                    println!("{x} {y} {w}");
                }
            }
        }
        Command::Normalize { input, output } => {
            let (f, s) = load(&input)?;
            let (g, steps) = respect_normalize(&f, &s).map_err(check)?;
            for st in &steps {
                println!("{st}");
            }
            write(&output, &write_instance(&g, &s))?;
        }
        Command::Draw { input, output, svg, hide_disks } => {
            let (f, s) = load(&input)?;
            let pd = plane_drawing(&f, &s).map_err(check)?;
            write(&output, &write_drawing(&pd))?;
            if let Some(p) = svg {
                write(&p, &emit_svg(&f, &s, Some(&pd.drawing), &SvgOptions { hide_disks }))?;
            }
            println!("drew {} edge(s)", pd.drawing.edges.len());
        }
        Command::Verify { input, drawing } => {
            let (f, s) = load(&input)?;
            let pd =
                parse_drawing(&read(&drawing)?).map_err(|e| Failure::Input(format!("{}: {e}", drawing.display())))?;
            let rep = verify_drawing(&pd.drawing, &f, &pd.witness_family, &s);
            print!("{rep}");
            if !rep.passed() {
                return Err(Failure::Check(format!("{} failure(s)", rep.failures.len())));
            }
        }
        Command::Gen { kind, seed, points, disks, output, k, window } => {
            let spec = GenSpec { seed, kind, n_points: points, n_disks: disks, window, k };
            let (f, s) = generate(&spec).map_err(|e| match e {
                pseudodisk::Error::PreconditionViolated(m) => Failure::Input(m),
                e => check(e),
            })?;
            write(&output, &write_instance(&f, &s))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
