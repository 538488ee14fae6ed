use clap::{Args, ValueEnum};
use rayon::prelude::*;
use std::time::Instant;

use khscan::diagram::BraidWord;
use khscan::jones::{determinant, jones_closed_braid};
use khscan::scan::{ScanConfig, DEFAULT_GENERATOR_CAP};
use khscan::{KhError, Result};

use crate::{emit, run_kh, Input, Method};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Debug)]
pub enum Family {
    Weaving,
    PositiveSlow,
    #[value(name = "Lt", alias = "lt")]
    Lt,
    Torus,
}

#[derive(Args)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// First parameter (n, t or k of the family).
    #[arg(long, default_value_t = 1)]
    from: usize,
    /// Last parameter, inclusive.
    #[arg(long)]
    to: Option<usize>,
    /// Defaults: threebraid for weaving, scan for positive_slow and torus, truncated for Lt.
    #[arg(long, value_enum)]
    method: Option<Method>,
    /// Truncation for the truncated method.
    #[arg(short, long, default_value_t = 2)]
    k: u32,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long, default_value_t = DEFAULT_GENERATOR_CAP)]
    cap: usize,
}

fn instance(f: Family, p: usize) -> BraidWord {
    match f {
        Family::Weaving => BraidWord::weaving(p),
        Family::PositiveSlow => BraidWord::positive_slow(p),
        Family::Lt => BraidWord::lt_family(p),
        Family::Torus => BraidWord::torus33k(p),
    }
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Weaving => "weaving",
        Family::PositiveSlow => "positive_slow",
        Family::Lt => "Lt",
        Family::Torus => "torus",
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

struct Row {
    crossings: usize,
    wall_ms: f64,
    ok: bool,
    line: String,
}

fn run_one(f: Family, p: usize, method: Method, k: u32, cap: usize) -> Row {
    let b = instance(f, p);
    let n = b.len();
    let cfg = ScanConfig { generator_cap: cap, ..Default::default() };
    let start = Instant::now();
    let result = run_kh(&Input::Braid(b.clone()), method, &cfg, (method == Method::Truncated).then_some(k));
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let det = jones_closed_braid(&b).map(|j| determinant(&j).to_string()).unwrap_or_default();
    let opt = |x: Option<String>| x.unwrap_or_default();
    let (ok, fields) = match result {
        Ok(r) => {
            let m = &r.meta;
            let (lower, top) = if f == Family::Lt && method == Method::Truncated {
                (binomial(p as u64, k as u64).to_string(), r.table.row_rank(n as i32 - k as i32).to_string())
            } else {
                (String::new(), String::new())
            };
            let total = if method == Method::Truncated { String::new() } else { r.table.total_rank().to_string() };
            (
                true,
                [
                    opt(m.peak_generators.map(|x| x.to_string())),
                    opt(m.peak_rank.map(|x| x.to_string())),
                    opt(m.max_coefficient_bits.map(|x| x.to_string())),
                    det,
                    total,
                    lower,
                    top,
                    "ok".to_string(),
                ],
            )
        }
        Err(e) => {
            let status = match e {
                KhError::SizeCap(_) => "size_cap",
                KhError::Capability(_) => "capability",
                KhError::Invariant(_) => "invariant",
                _ => "error",
            };
            (false, [String::new(), String::new(), String::new(), det, String::new(), String::new(), String::new(), status.into()])
        }
    };
    let line = format!(
        "{},{},{},{},{},{:.3},{}",
        family_name(f),
        p,
        b.strands,
        n,
        method.name(),
        wall_ms,
        fields.join(",")
    );
    Row { crossings: n, wall_ms, ok, line }
}

/// Least-squares slope of ln(wall time) against ln(crossings).
fn log_log_slope(rows: &[Row]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.ok && r.crossings > 0 && r.wall_ms > 0.0)
        .map(|r| ((r.crossings as f64).ln(), r.wall_ms.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn cmd_bench(a: &BenchArgs) -> Result<()> {
    let method = a.method.unwrap_or(match a.family {
        Family::Weaving => Method::Threebraid,
        Family::Lt => Method::Truncated,
        _ => Method::Scan,
    });
    let to = a.to.unwrap_or(match a.family {
        Family::Weaving => 12,
        Family::Lt => 3,
        _ => 4,
    });
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs)
        .build()
        .map_err(|e| KhError::Invalid(e.to_string()))?;
    let rows: Vec<Row> = pool.install(|| {
        (a.from..=to).into_par_iter().map(|p| run_one(a.family, p, method, a.k, a.cap)).collect()
    });
    let mut out = String::from(
        "family,param,strands,crossings,method,wall_ms,peak_generators,peak_rank,max_bits,det,total_rank,lower_bound,top_rank,status\n",
    );
    for r in &rows {
        out += &r.line;
        out.push('\n');
    }
    match log_log_slope(&rows) {
        Some(s) => out += &format!("# log-log slope of wall time against crossings: {s:.3}\n"),
        None => out += "# log-log slope of wall time against crossings: n/a\n",
    }
    emit(&out);
    Ok(())
}
