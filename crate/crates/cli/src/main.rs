use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use serde::Serialize;
use tconv_cli::{
    emit_svg, gf_check, hull_poset, parse_input, perturb_and_hull, run_hull, CliError, CliResult, InputFormat, Options,
};
use tconv_core::cyclic::cyclic_points;
use tconv_core::trop::find_singular_minor;
use tconv_core::WeightMatrix;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Tropical convex hulls through their cellular free resolutions.
///
/// Reads points as JSON ({"points": [["0","3","4"], ...]}) or CSV (one point
/// per line) and writes a JSON report to standard output.
#[derive(Parser, Debug)]
#[command(name = "tconv", version)]
struct Args {
    /// Input file; `-` or absent reads standard input.
    input: Option<PathBuf>,

    /// Input format; guessed from the content when omitted.
    #[arg(long, value_enum)]
    format: Option<Format>,

    /// Only report whether the input is generic.
    #[arg(long)]
    check_generic: bool,

    /// Accept non-generic input through a lexicographic refinement (experimental).
    #[arg(long)]
    perturb: bool,

    /// Include the initial ideal of the 2x2 minors.
    #[arg(long)]
    with_initial: bool,

    /// Use the cyclic configuration with R points in TP^(N-1) instead of an input file.
    #[arg(long, num_args = 2, value_names = ["R", "N"])]
    cyclic: Option<Vec<usize>>,

    /// Draw the hull as SVG (points in TP^2 only).
    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,

    /// Include the halfspace description.
    #[arg(long)]
    halfspaces: bool,

    /// Compare the generating functions for maximal faces of cyclic polytopes at (R, N, K).
    #[arg(long, num_args = 3, value_names = ["R", "N", "K"])]
    gf_check: Option<Vec<usize>>,

    /// Cross-check against brute force (small inputs only).
    #[arg(long)]
    oracle: bool,

    /// Write the report here instead of standard output.
    #[arg(long, short, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Serialize)]
struct GenericityReport {
    generic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    singular_rows: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    singular_cols: Option<Vec<usize>>,
}

fn read_matrix(args: &Args) -> CliResult<WeightMatrix> {
    if let Some(rn) = &args.cyclic {
        return cyclic_points(rn[0], rn[1]).map_err(CliError::from);
    }
    let mut text = String::new();
    match &args.input {
        Some(path) if path.as_os_str() != "-" => {
            text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Other(format!("cannot read {}: {e}", path.display())))?;
        }
        _ => {
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| CliError::Other(format!("cannot read standard input: {e}")))?;
        }
    }
    let format = args.format.map(|f| match f {
        Format::Json => InputFormat::Json,
        Format::Csv => InputFormat::Csv,
    });
    parse_input(&text, format)
}

fn write_json<T: Serialize>(value: &T, args: &Args) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?;
    match &args.output {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| CliError::Other(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(args: &Args) -> CliResult<ExitCode> {
    if let Some(rnk) = &args.gf_check {
        write_json(&gf_check(rnk[0], rnk[1], rnk[2])?, args)?;
        return Ok(ExitCode::SUCCESS);
    }
    let v = read_matrix(args)?;
    if args.check_generic {
        let witness = find_singular_minor(&v);
        let report = GenericityReport {
            generic: witness.is_none(),
            singular_rows: witness.as_ref().map(|w| w.rows.iter().map(|i| i + 1).collect()),
            singular_cols: witness.as_ref().map(|w| w.cols.iter().map(|j| j + 1).collect()),
        };
        write_json(&report, args)?;
        return Ok(if witness.is_none() { ExitCode::SUCCESS } else { ExitCode::from(3) });
    }
    let opts = Options {
        with_initial: args.with_initial,
        halfspaces: args.halfspaces,
        oracle: args.oracle,
    };
    let report = if args.perturb { perturb_and_hull(&v, &opts)? } else { run_hull(&v, &opts)? };
    if let Some(path) = &args.svg {
        let poset = if report.generic {
            hull_poset(&v)?
        } else {
            hull_poset(&tconv_cli::lexicographic_refinement(&v)?)?
        };
        emit_svg(&poset, path)?;
    }
    write_json(&report, args)?;
    let oracle_failed = report
        .oracle
        .as_ref()
        .is_some_and(|o| !(o.vertices_match && o.faces_match && o.initial_ideal_match && o.duality_match));
    if oracle_failed {
        return Err(CliError::Internal("brute-force cross-check disagrees with the pipeline".into()));
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("tconv: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
