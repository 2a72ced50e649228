use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use countertwist::charpoly::{char_poly_exact, classify_solvability, degeneracy_report};
use countertwist::evolution::{time_series, SeriesConfig, TimeRow, TimeSeries};
use countertwist::spectrum::spectrum;
use countertwist::table1::{compare_all, compare_row, RowVerdict, Table1Comparison};
use countertwist::verify::{verify, Fault, VerifyConfig};
use countertwist::{Error, Float, Precision, Spin};
use serde::Serialize;
use serde_json::{json, Value};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "countertwist", version, about = "Two-axis countertwisting spin squeezing: exact spectra and dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact characteristic polynomial of H/χ.
    Charpoly(Common),
    /// Eigenvalues with multiplicities.
    Spectrum(Common),
    /// Solvability of the spectrum by radicals.
    Classify(Common),
    /// Run the property suite.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Break the chiral symmetry on purpose; the suite should fail.
        #[arg(long)]
        inject_fault: bool,
    },
    /// Squeezing time series from the coherent state along -x.
    Evolve {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3.0)]
        t_max: f64,
        #[arg(long, default_value_t = 601)]
        steps: usize,
    },
    /// Compare computed polynomials with the published table.
    Table1 {
        #[arg(long, allow_negative_numbers = true)]
        j: Option<Spin>,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args)]
struct Common {
    /// Spin as an integer or `n/2`, e.g. `3` or `21/2`.
    #[arg(long, allow_negative_numbers = true)]
    j: Spin,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    chi: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    omega: f64,
    /// Working precision in decimal digits.
    #[arg(long, default_value_t = 34)]
    precision: u32,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct Output {
    /// Defaults to csv for `evolve` and text otherwise.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

enum Failure {
    Property,
    Input(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_) | Error::NotAvailable(_) | Error::DimensionMismatch { .. } => {
                Failure::Input(e.to_string())
            }
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(format!("{e:#}"))
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Property) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Charpoly(c) => cmd_charpoly(&c),
        Command::Spectrum(c) => cmd_spectrum(&c),
        Command::Classify(c) => cmd_classify(&c),
        Command::Verify { common, inject_fault } => cmd_verify(&common, inject_fault),
        Command::Evolve { common, t_max, steps } => cmd_evolve(&common, t_max, steps),
        Command::Table1 { j, out } => cmd_table1(j, &out),
    }
}

fn precision(c: &Common) -> Result<Precision, Failure> {
    Ok(Precision::new(c.precision)?)
}

fn metadata(command: &str, c: &Common) -> Value {
    json!({
        "tool": "countertwist",
        "version": VERSION,
        "command": command,
        "j": c.j.to_string(),
        "chi": c.chi,
        "omega": c.omega,
        "precision": c.precision,
    })
}

fn emit(out: &Output, body: &str) -> Outcome {
    match &out.output {
        Some(path) => {
            let mut f = BufWriter::new(
                File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
            );
            f.write_all(body.as_bytes()).and_then(|_| f.flush()).context("write failed")?;
        }
        None => {
            let mut stdout = io::stdout().lock();
            match stdout.write_all(body.as_bytes()).and_then(|_| stdout.flush()) {
                Err(e) if e.kind() == io::ErrorKind::BrokenPipe => {}
                r => r.context("write failed")?,
            }
        }
    }
    Ok(())
}

fn emit_json(out: &Output, meta: Value, result: impl Serialize) -> Outcome {
    let doc = json!({ "metadata": meta, "result": result });
    let mut s = serde_json::to_string_pretty(&doc).context("serialization failed")?;
    s.push('\n');
    emit(out, &s)
}

fn format_of(out: &Output, default: Format, allowed: &[Format]) -> Result<Format, Failure> {
    let f = out.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(Failure::Input("this command has no csv output; use json or text".into()))
    }
}

fn cmd_charpoly(c: &Common) -> Outcome {
    let fmt = format_of(&c.out, Format::Text, &[Format::Json, Format::Text])?;
    let poly = char_poly_exact(c.j)?;
    let degree = poly.degree().unwrap_or(0);
    let parity = if degree % 2 == 0 { "even" } else { "odd" };
    let degeneracy = if c.j.twice() >= 1 { Some(degeneracy_report(c.j)?) } else { None };
    match fmt {
        Format::Json => emit_json(
            &c.out,
            metadata("charpoly", c),
            json!({
                "coefficients": poly,
                "degree": degree,
                "parity": parity,
                "degeneracy": degeneracy,
            }),
        ),
        _ => {
            let mut s = format!("j = {}\nP(λ) = det(H/χ - λ) = {poly}\n", c.j);
            s += &format!("degree {degree}, {parity}\n");
            if let Some(d) = degeneracy {
                s += &format!("discriminant = {}\ndegenerate: {}\n", d.discriminant_full, yes_no(d.degenerate));
            }
            emit(&c.out, &s)
        }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_spectrum(c: &Common) -> Outcome {
    let fmt = format_of(&c.out, Format::Text, &[Format::Json, Format::Text])?;
    let report = spectrum(c.j, precision(c)?)?;
    match fmt {
        Format::Json => emit_json(&c.out, metadata("spectrum", c), &report),
        _ => {
            let digits = c.precision as usize;
            let mut s = format!(
                "j = {}, eigenvalues of H/χ ({} distinct, degenerate: {}, pairing verified: {})\n",
                c.j,
                report.eigenvalues.len(),
                yes_no(report.degenerate),
                yes_no(report.pairing_verified)
            );
            for e in &report.eigenvalues {
                s += &format!("{:>w$}  x{}", float_text(&e.value, digits), e.multiplicity, w = digits + 8);
                if let Some(r) = &e.radical_form {
                    s += &format!("  = {r}");
                }
                s.push('\n');
            }
            emit(&c.out, &s)
        }
    }
}

fn cmd_classify(c: &Common) -> Outcome {
    let fmt = format_of(&c.out, Format::Text, &[Format::Json, Format::Text])?;
    let s = classify_solvability(c.j)?;
    match fmt {
        Format::Json => emit_json(&c.out, metadata("classify", c), s),
        _ => {
            let class = serde_json::to_value(s.class).context("serialization failed")?;
            let class = class.as_str().unwrap_or_default().to_string();
            emit(&c.out, &format!("j = {}: {class} (largest factor degree in λ² is {})\n", c.j, s.mu_degree))
        }
    }
}

fn cmd_verify(c: &Common, inject_fault: bool) -> Outcome {
    let fmt = format_of(&c.out, Format::Text, &[Format::Json, Format::Text])?;
    let cfg = VerifyConfig {
        chi: c.chi,
        omega: c.omega,
        fault: inject_fault.then_some(Fault::FlippedFieldCoupling),
        ..VerifyConfig::new(c.j, precision(c)?)
    };
    let report = verify(&cfg)?;
    match fmt {
        Format::Json => emit_json(&c.out, metadata("verify", c), &report)?,
        _ => {
            let mut s = format!("j = {}", c.j);
            if report.propagator_precision != report.precision {
                s += &format!(" (propagator checks at {} digits)", report.propagator_precision.digits());
            }
            if inject_fault {
                s += " [fault injected]";
            }
            s.push('\n');
            for p in &report.properties {
                let verdict = match (p.passed, p.informational) {
                    (true, _) => "PASS",
                    (false, true) => "INFO",
                    (false, false) => "FAIL",
                };
                s += &format!("{verdict} {:<28} {:.3e} (< {:.0e})  {}\n", p.name, p.metric, p.threshold, p.detail);
            }
            emit(&c.out, &s)?;
        }
    }
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Property)
    }
}

/// Decimal text with `digits` significant digits, no locale, `0` for zero.
fn float_text(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    x.to_string_radix(10, Some(digits))
}

fn series_rows(series: &TimeSeries, digits: usize) -> Vec<Vec<Option<String>>> {
    series
        .rows
        .iter()
        .map(|r| r.values().iter().map(|v| v.map(|x| float_text(x, digits))).collect())
        .collect()
}

fn cmd_evolve(c: &Common, t_max: f64, steps: usize) -> Outcome {
    let fmt = format_of(&c.out, Format::Csv, &[Format::Json, Format::Csv, Format::Text])?;
    let cfg = SeriesConfig { j: c.j, chi: c.chi, omega: c.omega, t_max, steps, precision: precision(c)? };
    let series = time_series(&cfg)?;
    let digits = (c.precision as usize).saturating_sub(10).max(17);
    let rows = series_rows(&series, digits);
    match fmt {
        Format::Json => {
            let mut meta = metadata("evolve", c);
            meta["t_max"] = json!(t_max);
            meta["steps"] = json!(steps);
            emit_json(&c.out, meta, json!({ "columns": TimeRow::COLUMNS, "rows": rows }))
        }
        Format::Csv => {
            let mut s = String::new();
            s += "# countertwist evolve\n";
            s += &format!("# version={VERSION}\n");
            s += &format!("# j={}\n# chi={}\n# omega={}\n", c.j, c.chi, c.omega);
            s += &format!("# precision={}\n# t_max={t_max}\n# steps={steps}\n", c.precision);
            s += &TimeRow::COLUMNS.join(",");
            s.push('\n');
            for row in &rows {
                let fields: Vec<&str> = row.iter().map(|f| f.as_deref().unwrap_or("")).collect();
                s += &fields.join(",");
                s.push('\n');
            }
            emit(&c.out, &s)
        }
        Format::Text => {
            let mut s = TimeRow::COLUMNS.iter().map(|c| format!("{c:>14}")).collect::<String>();
            s.push('\n');
            for r in &series.rows {
                for v in r.values() {
                    match v {
                        Some(x) => s += &format!("{:>14.6e}", x.to_f64()),
                        None => s += &format!("{:>14}", "-"),
                    }
                }
                s.push('\n');
            }
            emit(&c.out, &s)
        }
    }
}

fn cmd_table1(j: Option<Spin>, out: &Output) -> Outcome {
    let fmt = format_of(out, Format::Text, &[Format::Json, Format::Text])?;
    let rows: Vec<Table1Comparison> = match j {
        Some(j) => vec![compare_row(j)?],
        None => compare_all()?,
    };
    match fmt {
        Format::Json => {
            let meta = json!({
                "tool": "countertwist",
                "version": VERSION,
                "command": "table1",
                "j": j.map(|j| j.to_string()),
            });
            emit_json(out, meta, &rows)
        }
        _ => {
            let mut s = String::new();
            for r in &rows {
                let verdict = match r.verdict {
                    RowVerdict::Match => "MATCH".to_string(),
                    RowVerdict::Mismatch if r.questionable => "MISMATCH (QUESTIONABLE row)".to_string(),
                    RowVerdict::Mismatch => "MISMATCH".to_string(),
                };
                s += &format!("j = {:<5} {verdict}\n", r.j.to_string());
                if r.verdict == RowVerdict::Mismatch {
                    s += &format!("    printed:  {}\n", r.printed);
                    s += &format!("    computed: {}\n", r.computed);
                    s += &format!("    computed - printed: {}\n", r.difference);
                    if let Some(ok) = r.corrected_matches {
                        s += &format!("    corrected reading matches: {}\n", yes_no(ok));
                    }
                }
            }
            let matches = rows.iter().filter(|r| r.verdict == RowVerdict::Match).count();
            s += &format!("{matches} of {} rows match\n", rows.len());
            emit(out, &s)
        }
    }
}
