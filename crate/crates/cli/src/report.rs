use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeMap;

use khscan::homology::HomologyTable;
use khscan::ring::Coefficients;
use khscan::scan::ScanStats;

pub const SCHEMA_VERSION: u32 = 1;

/// Integers that fit in 64 bits become JSON numbers, larger ones strings.
pub fn big_json<T: ToPrimitive + ToString>(n: &T) -> Value {
    match n.to_i64() {
        Some(x) => Value::from(x),
        None => Value::from(n.to_string()),
    }
}

#[derive(Serialize)]
pub struct Meta {
    pub schema_version: u32,
    pub input: String,
    pub method: &'static str,
    pub coefficients: String,
    pub crossings: Option<usize>,
    pub normal_form: Option<String>,
    pub truncation: Option<u32>,
    pub timings_ms: BTreeMap<String, f64>,
    pub peak_generators: Option<usize>,
    pub peak_rank: Option<usize>,
    pub max_coefficient_bits: Option<u64>,
    pub bound_checks: Option<usize>,
    pub nice_sequence: Option<bool>,
}

impl Meta {
    pub fn new(input: String, method: &'static str, coefficients: Coefficients) -> Self {
        Meta {
            schema_version: SCHEMA_VERSION,
            input,
            method,
            coefficients: coefficients.to_string(),
            crossings: None,
            normal_form: None,
            truncation: None,
            timings_ms: BTreeMap::new(),
            peak_generators: None,
            peak_rank: None,
            max_coefficient_bits: None,
            bound_checks: None,
            nice_sequence: None,
        }
    }

    pub fn record_stats(&mut self, s: &ScanStats) {
        self.peak_generators = Some(s.peak_generators);
        self.peak_rank = Some(s.peak_rank);
        self.max_coefficient_bits = Some(s.max_coefficient_bits);
        self.bound_checks = Some(s.bound_checks);
        self.nice_sequence = Some(s.nice);
    }
}

pub struct RunReport {
    pub meta: Meta,
    pub table: HomologyTable,
}

impl RunReport {
    pub fn to_json(&self) -> Value {
        serde_json::json!({ "meta": self.meta, "groups": self.table.to_json() })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("# {} via {} over {}\n", self.meta.input, self.meta.method, self.meta.coefficients);
        if let Some(nf) = &self.meta.normal_form {
            s += &format!("# normal form {nf}\n");
        }
        s + &self.table.to_text()
    }
}
