//! `qmap` command-line front end.
//!
//! Exit codes: 0 success, 1 maps not equivalent (`equiv` only), 2 usage error,
//! 3 input or parse error, 4 numerical failure.

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::equivalence::{
    find_equivalence, is_pseudo_unitary, random_pseudo_unitary, transform_osr, Metric, Verdict,
};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::mapio::{
    gen_fixture, matrix_from_json, matrix_to_json, matrix_to_value, save_map, FixtureParams,
    MapDocument, MapKind, QuantumMap,
};
use crate::maps::{
    apply_osr, cp_difference, osr_from_choi, superop_from_osr, MapReport, SignedOsr,
    DEFAULT_RANK_TOL, DEFAULT_TOL,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_EQUIVALENT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "qmap",
    version,
    about = "Analyze, convert and compare quantum maps in operator-sum form"
)]
pub struct Cli {
    /// Numerical tolerance for predicates and equivalence.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,

    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Superop,
    Choi,
    Osr,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report Hermiticity preservation, complete positivity, trace preservation and signature.
    Analyze {
        /// Map document; `-` or omitted reads standard input.
        input: Option<PathBuf>,
    },
    /// Rewrite a map document in another representation.
    Convert {
        input: Option<PathBuf>,
        #[arg(long, value_enum)]
        to: KindArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the canonical (spectral) signed operator-sum representation.
    Extract {
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply a map to a Hermitian matrix.
    Apply {
        map: PathBuf,
        /// Matrix object `{rows, cols, data}`.
        rho: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether two maps are equal and construct a pseudo-unitary witness.
    Equiv {
        first: PathBuf,
        second: PathBuf,
        /// Write the witness `u` and its metric here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mix the operators of a map by a pseudo-unitary matrix.
    Transform {
        input: Option<PathBuf>,
        /// Seed for a random element of U(p, q).
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Generator scale for the random element (at most 2).
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        /// Use this matrix object instead of a random element.
        #[arg(long)]
        unitary: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split a map into the difference of two completely positive maps.
    Decompose {
        input: Option<PathBuf>,
        /// Output prefix; writes `<prefix>.plus.qmap.json` and `<prefix>.minus.qmap.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a named fixture map.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// identity | transpose | depolarizing | completely_depolarizing | amplitude_damping | random_hp
    pub name: String,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Depolarizing strength, or positive-term count for random_hp.
    #[arg(long, allow_negative_numbers = true)]
    pub p: Option<f64>,
    /// Negative-term count for random_hp.
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

/// Parses `args` (including the program name) and runs the command, returning the exit code.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(rendered.as_bytes());
            } else {
                let _ = stdout.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    let mut io = Io {
        stdin,
        stdout,
        stderr,
    };
    match execute(&cli, &mut io) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(io.stderr, "error: {e}");
            if e.is_numerical() {
                EXIT_NUMERICAL
            } else {
                EXIT_INPUT
            }
        }
    }
}

fn execute(cli: &Cli, io: &mut Io<'_>) -> Result<i32> {
    match &cli.command {
        Command::Analyze { input } => analyze(cli, io, input.as_deref()),
        Command::Convert { input, to, out } => convert(io, input.as_deref(), *to, out.as_deref()),
        Command::Extract { input, out } => {
            let doc = read_doc(io, input.as_deref())?;
            let osr = to_osr(&doc)?;
            emit_doc(
                io,
                &MapDocument::from_osr(&osr, doc.meta.clone()),
                out.as_deref(),
            )?;
            Ok(EXIT_OK)
        }
        Command::Apply { map, rho, out } => apply(cli, io, map, rho, out.as_deref()),
        Command::Equiv { first, second, out } => equiv(cli, io, first, second, out.as_deref()),
        Command::Transform {
            input,
            seed,
            scale,
            unitary,
            out,
        } => transform(
            cli,
            io,
            input.as_deref(),
            *seed,
            *scale,
            unitary.as_deref(),
            out.as_deref(),
        ),
        Command::Decompose { input, out } => decompose(cli, io, input.as_deref(), out.as_deref()),
        Command::Gen(args) => {
            let params = FixtureParams {
                dim: args.dim,
                p: args.p,
                q: args.q,
                gamma: args.gamma,
                seed: args.seed,
            };
            let doc = gen_fixture(&args.name, &params)?;
            emit_doc(io, &doc, args.out.as_deref())?;
            Ok(EXIT_OK)
        }
    }
}

fn read_doc(io: &mut Io<'_>, path: Option<&Path>) -> Result<MapDocument> {
    match path {
        None => read_stdin_doc(io),
        Some(p) if p == Path::new("-") => read_stdin_doc(io),
        Some(p) => MapDocument::from_json_str(&fs::read_to_string(p)?),
    }
}

fn read_stdin_doc(io: &mut Io<'_>) -> Result<MapDocument> {
    let mut text = String::new();
    io.stdin.read_to_string(&mut text)?;
    MapDocument::from_json_str(&text)
}

fn emit_doc(io: &mut Io<'_>, doc: &MapDocument, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => save_map(doc, path),
        None => {
            writeln!(io.stdout, "{}", doc.to_json_string())?;
            Ok(())
        }
    }
}

fn emit_json(io: &mut Io<'_>, value: &Value) -> Result<()> {
    writeln!(
        io.stdout,
        "{}",
        serde_json::to_string_pretty(value).expect("json values serialize")
    )?;
    Ok(())
}

/// Any document as a signed OSR; non-OSR kinds go through the canonical extraction.
fn to_osr(doc: &MapDocument) -> Result<SignedOsr> {
    match doc.to_map()? {
        QuantumMap::Osr(osr) => Ok(osr),
        QuantumMap::Choi(b) => osr_from_choi(&b, DEFAULT_RANK_TOL),
        QuantumMap::Superop(a) => osr_from_choi(&a.to_choi()?, DEFAULT_RANK_TOL),
    }
}

/// Formats like C's `%.6g`.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        let s = if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        };
        if s == "-0" {
            "0".into()
        } else {
            s
        }
    } else {
        let s = format!("{x:.5e}");
        let (mantissa, exponent) = s.split_once('e').expect("exponent present");
        let mantissa = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        format!("{mantissa}e{exponent}")
    }
}

fn analyze(cli: &Cli, io: &mut Io<'_>, input: Option<&Path>) -> Result<i32> {
    let doc = read_doc(io, input)?;
    let raw = doc.choi_layout()?;
    let report = MapReport::analyze(doc.dim, &raw, cli.tol)?;
    match cli.format {
        Format::Json => emit_json(io, &report_json(&report))?,
        Format::Text => {
            let out = &mut io.stdout;
            writeln!(out, "dimension: {}", report.dim)?;
            writeln!(
                out,
                "hermiticity preserving: {}",
                report.hermiticity_preserving
            )?;
            writeln!(out, "completely positive: {}", report.completely_positive)?;
            writeln!(out, "trace preserving: {}", report.trace_preserving)?;
            match &report.signature {
                Some(s) => writeln!(out, "signature (p, q, z): {s}")?,
                None => writeln!(
                    out,
                    "signature (p, q, z): undefined (map is not Hermiticity preserving)"
                )?,
            }
            if let Some(values) = &report.choi_eigenvalues {
                let shown: Vec<String> = values.iter().map(|&v| sig6(v)).collect();
                writeln!(out, "choi eigenvalues: {}", shown.join(" "))?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn report_json(report: &MapReport) -> Value {
    json!({
        "dim": report.dim,
        "hermiticity_preserving": report.hermiticity_preserving,
        "completely_positive": report.completely_positive,
        "trace_preserving": report.trace_preserving,
        "signature": report.signature.map(|s| json!({"p": s.p, "q": s.q, "z": s.z})),
        "choi_eigenvalues": report.choi_eigenvalues,
    })
}

fn convert(io: &mut Io<'_>, input: Option<&Path>, to: KindArg, out: Option<&Path>) -> Result<i32> {
    let doc = read_doc(io, input)?;
    let meta = doc.meta.clone();
    let target = match to {
        KindArg::Superop => MapKind::Superop,
        KindArg::Choi => MapKind::Choi,
        KindArg::Osr => MapKind::Osr,
    };
    let converted = match (doc.to_map()?, target) {
        (QuantumMap::Superop(a), MapKind::Superop) => MapDocument::from_superop(&a, meta),
        (QuantumMap::Superop(a), MapKind::Choi) => MapDocument::from_choi(&a.to_choi()?, meta),
        (QuantumMap::Choi(b), MapKind::Superop) => MapDocument::from_superop(&b.to_superop(), meta),
        (QuantumMap::Choi(b), MapKind::Choi) => MapDocument::from_choi(&b, meta),
        (QuantumMap::Osr(osr), MapKind::Superop) => {
            MapDocument::from_superop(&superop_from_osr(&osr), meta)
        }
        (QuantumMap::Osr(osr), MapKind::Choi) => {
            MapDocument::from_choi(&crate::maps::choi_from_osr(&osr), meta)
        }
        (QuantumMap::Osr(osr), MapKind::Osr) => MapDocument::from_osr(&osr, meta),
        (_, MapKind::Osr) => MapDocument::from_osr(&to_osr(&doc)?, meta),
    };
    emit_doc(io, &converted, out)?;
    Ok(EXIT_OK)
}

fn apply(cli: &Cli, io: &mut Io<'_>, map: &Path, rho: &Path, out: Option<&Path>) -> Result<i32> {
    let doc = MapDocument::from_json_str(&fs::read_to_string(map)?)?;
    let rho = matrix_from_json(&fs::read_to_string(rho)?)?;
    if !rho.is_hermitian(cli.tol) {
        return Err(Error::NotHermitian {
            defect: rho.hermiticity_defect() / rho.frob_norm().max(1.0),
        });
    }
    let output = match doc.to_map()? {
        QuantumMap::Osr(osr) => apply_osr(&osr, &rho)?,
        QuantumMap::Superop(a) => a.apply(&rho)?,
        QuantumMap::Choi(b) => b.to_superop().apply(&rho)?,
    };
    let trace = output.trace();
    if let Some(path) = out {
        let mut text = matrix_to_json(&output);
        text.push('\n');
        fs::write(path, text)?;
    }
    match cli.format {
        Format::Json => emit_json(
            io,
            &json!({"output": matrix_to_value(&output), "trace": [trace.re, trace.im]}),
        )?,
        Format::Text => {
            write_matrix_text(io.stdout, &output)?;
            writeln!(io.stdout, "trace: {}", complex_text(trace))?;
        }
    }
    Ok(EXIT_OK)
}

fn complex_text(z: num_complex::Complex64) -> String {
    if z.im == 0.0 {
        sig6(z.re)
    } else {
        let sign = if z.im < 0.0 { '-' } else { '+' };
        format!("{}{sign}{}i", sig6(z.re), sig6(z.im.abs()))
    }
}

fn write_matrix_text(out: &mut dyn Write, m: &ComplexMatrix) -> Result<()> {
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| complex_text(m[(i, j)])).collect();
        writeln!(out, "[{}]", row.join(", "))?;
    }
    Ok(())
}

fn equiv(
    cli: &Cli,
    io: &mut Io<'_>,
    first: &Path,
    second: &Path,
    out: Option<&Path>,
) -> Result<i32> {
    let a = to_osr(&MapDocument::from_json_str(&fs::read_to_string(first)?)?)?;
    let b = to_osr(&MapDocument::from_json_str(&fs::read_to_string(second)?)?)?;
    let result = find_equivalence(&a, &b, cli.tol)?;
    let diag = &result.diagnostics;
    let diagnostics = json!({
        "choi_distance": diag.choi_distance,
        "canonical_terms": diag.canonical_terms.map(|(p, q)| json!({"p": p, "q": q})),
        "max_expansion_residual_first": diag.max_expansion_residual_c,
        "max_expansion_residual_second": diag.max_expansion_residual_d,
        "witness_metric_defect": diag.witness_metric_defect,
        "max_operator_mismatch": diag.max_operator_mismatch,
    });

    let (report, code) = match &result.verdict {
        Verdict::NotEquivalent { choi_distance } => {
            if cli.format == Format::Text {
                writeln!(
                    io.stdout,
                    "not equivalent, Choi distance {}",
                    sig6(*choi_distance)
                )?;
            }
            (
                json!({"verdict": "not_equivalent", "choi_distance": choi_distance, "diagnostics": diagnostics}),
                EXIT_NOT_EQUIVALENT,
            )
        }
        Verdict::EquivalentWithWitness {
            u,
            metric,
            padded_size,
        } => {
            if let Some(path) = out {
                let witness = json!({
                    "u": matrix_to_value(u),
                    "metric": {"p": metric.p(), "q": metric.q()},
                    "padded_size": padded_size,
                });
                let mut text =
                    serde_json::to_string_pretty(&witness).expect("json values serialize");
                text.push('\n');
                fs::write(path, text)?;
            }
            if cli.format == Format::Text {
                writeln!(
                    io.stdout,
                    "equivalent, witness in {metric} (padded size {padded_size}), metric defect {}, operator mismatch {}",
                    sig6(diag.witness_metric_defect.unwrap_or(0.0)),
                    sig6(diag.max_operator_mismatch.unwrap_or(0.0)),
                )?;
            }
            (
                json!({
                    "verdict": "equivalent",
                    "u": matrix_to_value(u),
                    "metric": {"p": metric.p(), "q": metric.q()},
                    "padded_size": padded_size,
                    "diagnostics": diagnostics,
                }),
                EXIT_OK,
            )
        }
        Verdict::EquivalentNoWitness { reason } => {
            writeln!(
                io.stderr,
                "warning: maps are equal but no witness was constructed ({reason})"
            )?;
            if cli.format == Format::Text {
                writeln!(io.stdout, "equivalent, no witness ({reason})")?;
            }
            (
                json!({"verdict": "equivalent_no_witness", "reason": reason.as_str(), "diagnostics": diagnostics}),
                EXIT_OK,
            )
        }
    };
    if cli.format == Format::Json {
        emit_json(io, &report)?;
    }
    Ok(code)
}

#[allow(clippy::too_many_arguments)]
fn transform(
    cli: &Cli,
    io: &mut Io<'_>,
    input: Option<&Path>,
    seed: u64,
    scale: f64,
    unitary: Option<&Path>,
    out: Option<&Path>,
) -> Result<i32> {
    let doc = read_doc(io, input)?;
    let osr = to_osr(&doc)?.sign_ordered();
    let (p, q) = osr.sign_counts();
    let metric = Metric::new(p, q)?;
    let u = match unitary {
        Some(path) => {
            let u = matrix_from_json(&fs::read_to_string(path)?)?;
            if !is_pseudo_unitary(&u, metric, cli.tol)? {
                writeln!(
                    io.stderr,
                    "warning: supplied matrix is not in {metric}; the map will change"
                )?;
            }
            u
        }
        None => random_pseudo_unitary(metric, seed, scale)?,
    };
    let moved = transform_osr(&osr, &u)?;
    emit_doc(io, &MapDocument::from_osr(&moved, doc.meta.clone()), out)?;
    Ok(EXIT_OK)
}

fn decompose(cli: &Cli, io: &mut Io<'_>, input: Option<&Path>, out: Option<&Path>) -> Result<i32> {
    let doc = read_doc(io, input)?;
    let osr = to_osr(&doc)?;
    let (plus, minus) = cp_difference(&osr);
    let base_name = doc.meta.as_ref().and_then(|m| m.name.clone());
    let meta_for = |part: &str| {
        Some(crate::mapio::Meta {
            name: base_name.as_ref().map(|n| format!("{n}.{part}")),
            description: Some(format!(
                "{part} part of a difference of completely positive maps"
            )),
        })
    };
    let plus_doc = MapDocument::from_osr(&plus, meta_for("plus"));
    let minus_doc = MapDocument::from_osr(&minus, meta_for("minus"));
    if let Some(prefix) = out {
        let prefix = prefix.to_string_lossy();
        let prefix = prefix
            .strip_suffix(crate::mapio::EXTENSION)
            .unwrap_or(&prefix);
        save_map(
            &plus_doc,
            format!("{prefix}.plus{}", crate::mapio::EXTENSION),
        )?;
        save_map(
            &minus_doc,
            format!("{prefix}.minus{}", crate::mapio::EXTENSION),
        )?;
    }
    match cli.format {
        Format::Json => {
            let plus_value: Value =
                serde_json::from_str(&plus_doc.to_json_string()).expect("valid json");
            let minus_value: Value =
                serde_json::from_str(&minus_doc.to_json_string()).expect("valid json");
            emit_json(io, &json!({"plus": plus_value, "minus": minus_value}))?;
        }
        Format::Text => {
            writeln!(io.stdout, "plus: {} terms", plus.len())?;
            writeln!(io.stdout, "minus: {} terms", minus.len())?;
        }
    }
    Ok(EXIT_OK)
}
