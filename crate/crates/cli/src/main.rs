//! `khscan`: Khovanov homology, Jones polynomials and determinants of links.

mod bench;
mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::io::{Read, Write};
use std::process::ExitCode;
use std::time::Instant;

use khscan::cube::kh_cube;
use khscan::diagram::{braid_closure, parse_braid, BraidWord, LinkDiagram};
use khscan::jones::{determinant, jones_closed_braid, jones_from_homology, weaving_determinant, LaurentPoly};
use khscan::ring::Coefficients;
use khscan::scan::{extremal_homology, kh_scan, kh_scan_braid, Policy, ScanConfig, DEFAULT_GENERATOR_CAP};
use khscan::three_braid::{kh_3braid, murasugi_normal_form};
use khscan::{KhError, Result};

use report::{big_json, Meta, RunReport};

#[derive(Parser)]
#[command(name = "khscan", version, about = "Khovanov homology of links")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute Kh^{i,j} of a braid closure or a PD diagram.
    Kh(KhArgs),
    /// Jones polynomial in q, normalized so that J(unknot) = 1.
    Jones(InputArgs),
    /// Determinant |J(i)|.
    Det(DetArgs),
    /// Time a link family and print CSV.
    ///
    /// Columns: family, param, strands, crossings, method, wall_ms,
    /// peak_generators, peak_rank, max_bits, det, total_rank, lower_bound,
    /// top_rank, status. A final comment line gives the log-log slope of
    /// wall time against crossing number.
    Bench(bench::BenchArgs),
}

#[derive(Args, Clone)]
struct InputArgs {
    /// Braid word: whitespace-separated nonzero integers, i for sigma_i and
    /// -i for its inverse, with an optional "strands=N" prefix.
    #[arg(long, conflicts_with = "pd", allow_hyphen_values = true)]
    braid: Option<String>,
    /// Number of strands; defaults to the largest index plus one.
    #[arg(long)]
    strands: Option<usize>,
    /// PD diagram as JSON ({"crossings": [[a,b,c,d,sign], ...]}); "-" reads stdin.
    #[arg(long)]
    pd: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct KhArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    method: Method,
    /// Z, F2 or Fp:p.
    #[arg(long = "coeff", default_value = "Z")]
    coefficients: Coefficients,
    /// Rows kept by the truncated method: i <= k - n_- and, for braids, i >= n_+ - k.
    #[arg(short, long)]
    k: Option<u32>,
    /// Cancellation policy of the scan.
    #[arg(long, value_enum, default_value_t = PolicyArg::Exhaustive)]
    policy: PolicyArg,
    /// Skip the rank and coefficient bound assertions.
    #[arg(long)]
    no_bounds: bool,
    /// Largest number of generators a scan may hold.
    #[arg(long, default_value_t = DEFAULT_GENERATOR_CAP)]
    cap: usize,
}

#[derive(Args)]
struct DetArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Named family; only "weaving" is supported.
    #[arg(long, requires = "n")]
    family: Option<String>,
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Debug)]
pub(crate) enum Method {
    Auto,
    Threebraid,
    Scan,
    Truncated,
    Oracle,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::Threebraid => "threebraid",
            Method::Scan => "scan",
            Method::Truncated => "truncated",
            Method::Oracle => "oracle",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolicyArg {
    Exhaustive,
    Blocks,
}

enum Input {
    Braid(BraidWord),
    Pd(LinkDiagram),
}

impl Input {
    fn descriptor(&self) -> String {
        match self {
            Input::Braid(b) => format!("braid {b}"),
            Input::Pd(d) => format!("pd with {} crossings", d.crossings.len()),
        }
    }

    fn diagram(&self) -> LinkDiagram {
        match self {
            Input::Braid(b) => braid_closure(b),
            Input::Pd(d) => d.clone(),
        }
    }
}

fn read_input(a: &InputArgs) -> Result<Input> {
    match (&a.braid, &a.pd) {
        (Some(text), None) => Ok(Input::Braid(parse_braid(text, a.strands)?)),
        (None, Some(path)) => {
            let text = if path == "-" {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s).map_err(|e| KhError::Parse(e.to_string()))?;
                s
            } else {
                std::fs::read_to_string(path).map_err(|e| KhError::Parse(format!("{path}: {e}")))?
            };
            Ok(Input::Pd(LinkDiagram::from_pd_json(&text)?))
        }
        _ => Err(KhError::Parse("give exactly one of --braid or --pd".into())),
    }
}

/// Compute the homology of `input` with the chosen method.
pub(crate) fn run_kh(
    input: &Input,
    method: Method,
    cfg: &ScanConfig,
    k: Option<u32>,
) -> Result<RunReport> {
    let start = Instant::now();
    let coeff = cfg.coefficients;
    let method = match (method, input) {
        (Method::Auto, Input::Braid(b)) if b.strands == 3 => Method::Threebraid,
        (Method::Auto, _) => Method::Scan,
        (m, _) => m,
    };
    let mut meta = Meta::new(input.descriptor(), method.name(), coeff);
    meta.crossings = Some(input.diagram().crossings.len());
    let table = match method {
        Method::Threebraid => {
            let Input::Braid(b) = input else {
                return Err(KhError::Capability("threebraid needs a braid word".into()));
            };
            let nf = murasugi_normal_form(b)?;
            meta.normal_form = Some(nf.class.to_string());
            kh_3braid(b, coeff, cfg)?
        }
        Method::Scan => {
            let out = match input {
                Input::Braid(b) => kh_scan_braid(b, cfg)?,
                Input::Pd(d) => kh_scan(d, cfg)?,
            };
            meta.record_stats(&out.stats);
            out.table
        }
        Method::Truncated => {
            let k = k.ok_or_else(|| KhError::Parse("the truncated method needs -k".into()))?;
            meta.truncation = Some(k);
            match input {
                Input::Braid(b) => extremal_homology(b, k, cfg)?,
                Input::Pd(d) => {
                    let out = kh_scan(d, &cfg.clone().truncated(k))?;
                    meta.record_stats(&out.stats);
                    out.table
                }
            }
        }
        Method::Oracle => kh_cube(&input.diagram(), coeff)?,
        Method::Auto => unreachable!("auto resolved above"),
    };
    meta.timings_ms.insert("compute".into(), start.elapsed().as_secs_f64() * 1e3);
    Ok(RunReport { meta, table })
}

fn cmd_kh(a: &KhArgs) -> Result<()> {
    let parse_start = Instant::now();
    let input = read_input(&a.input)?;
    let parse_ms = parse_start.elapsed().as_secs_f64() * 1e3;
    let cfg = ScanConfig {
        coefficients: a.coefficients,
        truncation: None,
        policy: match a.policy {
            PolicyArg::Exhaustive => Policy::Exhaustive,
            PolicyArg::Blocks => Policy::BlocksOnly,
        },
        assert_bounds: !a.no_bounds,
        generator_cap: a.cap,
    };
    let mut report = run_kh(&input, a.method, &cfg, a.k)?;
    report.meta.timings_ms.insert("parse".into(), parse_ms);
    match a.input.format {
        Format::Json => emit(&format!("{}\n", serde_json::to_string_pretty(&report.to_json()).expect("serializable"))),
        Format::Text => emit(&report.to_text()),
    }
    Ok(())
}

fn jones_of(input: &Input) -> Result<LaurentPoly> {
    match input {
        Input::Braid(b) => jones_closed_braid(b),
        Input::Pd(d) => {
            let cfg = ScanConfig::default().with_coefficients(Coefficients::Prime(2));
            jones_from_homology(&kh_scan(d, &cfg)?.table)
        }
    }
}

fn cmd_jones(a: &InputArgs) -> Result<()> {
    let input = read_input(a)?;
    let j = jones_of(&input)?;
    match a.format {
        Format::Text => emit(&format!("{j}\n")),
        Format::Json => {
            let terms: Vec<serde_json::Value> =
                j.terms().into_iter().map(|(e, c)| serde_json::json!([e, big_json(&c)])).collect();
            let v = serde_json::json!({
                "meta": {"schema_version": report::SCHEMA_VERSION, "input": input.descriptor()},
                "terms": terms,
                "polynomial": j.to_string(),
            });
            emit(&format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable")));
        }
    }
    Ok(())
}

fn cmd_det(a: &DetArgs) -> Result<()> {
    let (descriptor, det, method) = match (&a.family, a.n) {
        (Some(f), Some(n)) if f == "weaving" => (format!("weaving W(3,{n})"), weaving_determinant(n), "recurrence"),
        (Some(f), _) => return Err(KhError::Capability(format!("unknown family '{f}'"))),
        _ => {
            let input = read_input(&a.input)?;
            (input.descriptor(), determinant(&jones_of(&input)?), "jones")
        }
    };
    match a.input.format {
        Format::Text => emit(&format!("{det}\n")),
        Format::Json => {
            let v = serde_json::json!({
                "meta": {"schema_version": report::SCHEMA_VERSION, "input": descriptor, "method": method},
                "det": big_json(&det),
            });
            emit(&format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable")));
        }
    }
    Ok(())
}

/// Print to stdout, ignoring a closed pipe.
pub(crate) fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match &cli.command {
        Command::Kh(a) => cmd_kh(a),
        Command::Jones(a) => cmd_jones(a),
        Command::Det(a) => cmd_det(a),
        Command::Bench(a) => bench::cmd_bench(a),
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
