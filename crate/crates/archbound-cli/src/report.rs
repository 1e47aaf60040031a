//! Structured output records. Every record is one JSON object tagged with
//! `kind` and stamped with the schema version, so downstream consumers can
//! split reports, per-line errors, and the batch summary on one field.
//!
//! Complex scalars serialize as `[re, im]` pairs. All fields are emitted in
//! a fixed order; given identical input, config, and seed the bytes are
//! identical except for wall-time fields.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Version stamp for the record layout.
pub const SCHEMA: &str = "archbound/1";

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Record {
    Report(Report),
    Error(ErrorRecord),
    Summary(Summary),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// Canonical record text; feeding it back reproduces this report.
    pub curve: String,
    pub b_invariants: BInvariants,
    /// +1 or -1 for real models; absent when the coefficients are complex.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discriminant_sign: Option<i8>,
    pub places: Vec<PlaceReport>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BInvariants {
    pub b2: [f64; 2],
    pub b4: [f64; 2],
    pub b6: [f64; 2],
    pub b8: [f64; 2],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlaceReport {
    pub place: String,
    pub variant: String,
    pub two_torsion_x: [[f64; 2]; 3],
    /// Decreasing upper bounds from the contraction iteration.
    pub c_seq: Vec<f64>,
    pub iterations: usize,
    /// Final bound in the reported normalization.
    pub bound: f64,
    /// "series" for the plain local series bound; "shifted-by-log-disc"
    /// when the log|disc|_v / 6 offset is applied.
    pub normalization: String,
    /// The additive offset included in `bound` (0 for "series").
    pub normalization_shift: f64,
    pub wall_time_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationReport>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValidationReport {
    pub n_samples: usize,
    pub terms: usize,
    /// Max over samples of series value + tail window, in the reported
    /// normalization.
    pub empirical_max: f64,
    /// Whether the bound dominates the empirical maximum (compared before
    /// any normalization shift, which cancels anyway).
    pub sound: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub schema: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub error: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Summary {
    pub schema: String,
    pub reports: usize,
    pub errors: usize,
    /// Mean of per-place bounds over all successful reports.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_wall_time_ms: Option<f64>,
}

impl Record {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("records contain only serializable scalars")
    }

    /// Fixed-width human-readable form.
    pub fn to_table(&self) -> String {
        match self {
            Record::Report(r) => r.to_table(),
            Record::Error(e) => match e.line {
                Some(line) => format!("ERROR line {:>4}  {}", line, e.error),
                None => format!("ERROR {}", e.error),
            },
            Record::Summary(s) => {
                let mut out = format!("summary: {} reports, {} errors", s.reports, s.errors);
                if let Some(mb) = s.mean_bound {
                    out.push_str(&format!(", mean bound {mb:.6}"));
                }
                if let Some(mw) = s.mean_wall_time_ms {
                    out.push_str(&format!(", mean wall time {mw:.3} ms"));
                }
                out
            }
        }
    }
}

fn fmt_pair(v: [f64; 2]) -> String {
    if v[1] == 0.0 {
        format!("{}", v[0])
    } else {
        format!("({},{})", v[0], v[1])
    }
}

impl Report {
    fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("curve      {}\n", self.curve));
        if let Some(label) = &self.label {
            out.push_str(&format!("label      {label}\n"));
        }
        let b = &self.b_invariants;
        out.push_str(&format!(
            "b-inv      b2={} b4={} b6={} b8={}\n",
            fmt_pair(b.b2),
            fmt_pair(b.b4),
            fmt_pair(b.b6),
            fmt_pair(b.b8)
        ));
        if let Some(sign) = self.discriminant_sign {
            out.push_str(&format!("disc sign  {}\n", if sign >= 0 { "+" } else { "-" }));
        }
        for p in &self.places {
            out.push_str(&format!(
                "{:<8} {:<20} bound {:<22} N={:<3} {:>9.3} ms",
                p.place, p.variant, p.bound, p.iterations, p.wall_time_ms
            ));
            if p.normalization_shift != 0.0 {
                out.push_str(&format!("  [{} {:+.6}]", p.normalization, p.normalization_shift));
            }
            if let Some(v) = &p.validation {
                out.push_str(&format!(
                    "  empirical max {:.6} over {} samples ({} terms): {}",
                    v.empirical_max,
                    v.n_samples,
                    v.terms,
                    if v.sound { "sound" } else { "NOT SOUND" }
                ));
            }
            out.push('\n');
        }
        out
    }
}

pub fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}
