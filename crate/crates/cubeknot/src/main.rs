//! Command-line driver: generate the cuboid complex, build the pipeline
//! artifacts, run the verification battery, or drill into one fundamental
//! cycle's knot certificate. All outputs are reproducible from `(n, seed)`.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use cubeknot::complex::EdgeId;
use cubeknot::construction::{build_c_double_prime, build_c_prime, fundamental_cycle, MIN_N};
use cubeknot::cuboid::{build_cuboid, Color};
use cubeknot::io::{obj_string, off_string, write_json, ComplexJson};
use cubeknot::knots::{choose_generic_direction, fox_colorings, project};
use cubeknot::verify::{run_all, Pipeline, Scope, VerifyOptions};
use cubeknot::{Error, Result};

#[derive(Parser)]
#[command(name = "cubeknot", version, about = "cuboid 2-complexes with entangled spanning trees")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write the (2n+1) x n x n cuboid complex, its coloring and coordinates.
    Generate {
        #[arg(long, default_value_t = MIN_N)]
        n: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// comma-separated subset of {json, off, obj, dot}
        #[arg(long, value_delimiter = ',', default_value = "json")]
        format: Vec<String>,
    },
    /// Build spine, spanning tree T', C' and C'' and write them as JSON.
    Build {
        #[arg(long, default_value_t = MIN_N)]
        n: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run the verification battery and write report.json.
    Verify {
        #[arg(long, default_value_t = MIN_N)]
        n: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `full` or `sampled:K` (routing sweep scope)
        #[arg(long, default_value = "full")]
        scope: String,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// sabotage every verifier to demonstrate the fail paths
        #[arg(long)]
        inject_negative: bool,
    },
    /// Knot certificate for the fundamental cycle of one non-tree edge.
    Knot {
        #[arg(long, default_value_t = MIN_N)]
        n: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// edge id of a non-tree edge of the 1-skeleton
        #[arg(long)]
        edge: u32,
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

fn parse_scope(s: &str, seed: u64) -> Result<Scope> {
    if s == "full" {
        return Ok(Scope::Full);
    }
    if let Some(k) = s.strip_prefix("sampled:") {
        let k: usize = k
            .parse()
            .map_err(|_| Error::ConstructionFailure(format!("bad sample count in scope `{s}`")))?;
        return Ok(Scope::Sampled { k, seed: seed.wrapping_add(7) });
    }
    Err(Error::ConstructionFailure(format!("unknown scope `{s}` (use `full` or `sampled:K`)")))
}

/// Every JSON artifact carries the run parameters in its header.
#[derive(Serialize)]
struct WithParams<T: Serialize> {
    n: i64,
    seed: u64,
    #[serde(flatten)]
    payload: T,
}

fn write_artifact<T: Serialize>(dir: &Path, name: &str, n: i64, seed: u64, payload: T) -> Result<()> {
    write_json(&dir.join(name), &WithParams { n, seed, payload })
}

fn cmd_generate(n: i64, seed: u64, out: &Path, formats: &[String]) -> Result<ExitCode> {
    if n < MIN_N {
        return Err(Error::NTooSmall(n));
    }
    std::fs::create_dir_all(out)?;
    let c = build_cuboid(2 * n + 1, n, n)?;
    let coloring = cubeknot::construction::pipeline_coloring(&c)?;
    for f in formats {
        match f.as_str() {
            "json" => {
                let complex = ComplexJson::from_complex(&c.complex, Some(&c.coords));
                write_artifact(out, "complex.json", n, seed, complex)?;
                let black: Vec<u32> = coloring.vertices_of(Color::Black).map(|v| v.0).collect();
                write_artifact(out, "coloring.json", n, seed, json!({ "black": black }))?;
            }
            "off" => std::fs::write(out.join("complex.off"), off_string(&c.complex, &c.coords)?)?,
            "obj" => std::fs::write(out.join("complex.obj"), obj_string(&c.complex, &c.coords, &[])?)?,
            "dot" => {
                let g = cubeknot::cuboid::diagonal_graph(&c, &coloring, Color::Black)?;
                std::fs::write(
                    out.join("black_diagonals.dot"),
                    g.to_dot("black_diagonals", &Default::default(), &Default::default()),
                )?;
            }
            other => {
                return Err(Error::ConstructionFailure(format!("unknown format `{other}`")));
            }
        }
    }
    println!(
        "generated {}x{}x{} box: {} vertices, {} edges, {} faces",
        2 * n + 1,
        n,
        n,
        c.complex.vertex_count(),
        c.complex.edge_count(),
        c.complex.face_count()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_build(n: i64, seed: u64, out: &Path) -> Result<ExitCode> {
    std::fs::create_dir_all(out)?;
    let pipe = Pipeline::build(n, seed)?;
    write_artifact(out, "spine.json", n, seed, &pipe.plan.spine)?;
    write_artifact(out, "tree.json", n, seed, &pipe.plan)?;
    let prime = build_c_prime(&pipe.cuboid, &pipe.plan)?;
    write_artifact(
        out,
        "cprime.json",
        n,
        seed,
        ComplexJson::from_complex(&prime.complex, Some(&pipe.cuboid.coords)),
    )?;
    let cpp = build_c_double_prime(&prime, &pipe.plan)?;
    write_artifact(out, "cdoubleprime.json", n, seed, ComplexJson::from_complex(&cpp, None))?;
    println!(
        "T' edges: {}; C': {} edges, {} faces; C'': {} vertex, {} edges, {} faces",
        pipe.plan.edge_count(),
        prime.complex.edge_count(),
        prime.complex.face_count(),
        cpp.vertex_count(),
        cpp.edge_count(),
        cpp.face_count()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(n: i64, seed: u64, scope: &str, out: &Path, inject: bool) -> Result<ExitCode> {
    std::fs::create_dir_all(out)?;
    let pipe = Pipeline::build(n, seed)?;
    let opts = VerifyOptions {
        routing: parse_scope(scope, seed)?,
        inject_negative: inject,
        ..VerifyOptions::default()
    };
    let report = run_all(&pipe, opts)?;
    write_json(&out.join("report.json"), &report)?;
    for c in &report.checks {
        println!(
            "{:<30} [{}] {} ({} ms)",
            c.name,
            c.scope,
            if c.passed { "PASS" } else { "FAIL" },
            c.wall_ms
        );
        if let Some(ce) = &c.counterexample {
            println!("  counterexample: {ce}");
        }
    }
    Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_knot(n: i64, seed: u64, edge: u32, p: u64, out: &Path) -> Result<ExitCode> {
    std::fs::create_dir_all(out)?;
    let pipe = Pipeline::build(n, seed)?;
    let cycle = fundamental_cycle(&pipe.cuboid, &pipe.plan, EdgeId(edge))?;
    let geometry = cycle.geometry(&pipe.cuboid)?;
    let direction = choose_generic_direction(&geometry, seed)?;
    let diagram = project(&geometry, direction)?;
    let colorings = fox_colorings(&diagram, p)?;
    let nontrivial = colorings > u128::from(p);
    let points: Vec<[i64; 3]> = geometry.points().to_vec();
    write_artifact(
        out,
        &format!("knot-{edge}.json"),
        n,
        seed,
        json!({
            "edge": edge,
            "p": p,
            "direction": direction,
            "crossings": diagram.crossings.len(),
            "gauss_code": diagram.gauss_code_string(),
            "colorings": colorings.to_string(),
            "nontrivial": nontrivial,
            "cycle": points,
        }),
    )?;
    println!(
        "edge {edge}: {} crossings, {colorings} Fox {p}-colorings → {}",
        diagram.crossings.len(),
        if nontrivial { "nontrivially knotted" } else { "inconclusive" }
    );
    Ok(ExitCode::SUCCESS)
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Generate { n, seed, out, format } => cmd_generate(n, seed, &out, &format),
        Cmd::Build { n, seed, out } => cmd_build(n, seed, &out),
        Cmd::Verify { n, seed, scope, out, inject_negative } => {
            cmd_verify(n, seed, &scope, &out, inject_negative)
        }
        Cmd::Knot { n, seed, edge, p, out } => cmd_knot(n, seed, edge, p, &out),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e @ (Error::Io(_) | Error::Json(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
