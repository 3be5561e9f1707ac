//! Verdict records shared by the inequality checkers.
//!
//! Every check reports both sides of its inequality, the margin and (on
//! failure) a witness — never a bare boolean. Extended-real fields keep
//! `±∞` through JSON as the strings `"inf"`/`"-inf"`.

use serde::{Deserialize, Serialize};

/// Outcome of a single inequality instance.
///
/// `VacuousPass` marks instances whose right-hand side is `+∞` (for example
/// a conjugate evaluated beyond its growth rate); these are never silently
/// merged with ordinary passes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    VacuousPass,
    Fail,
}

impl Verdict {
    pub fn passed(self) -> bool {
        !matches!(self, Verdict::Fail)
    }
}

/// Serde adapter for extended reals: finite numbers as JSON numbers,
/// infinities as `"inf"`/`"-inf"`.
pub mod ext_real {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &f64, ser: S) -> Result<S::Ok, S::Error> {
        if value.is_finite() {
            ser.serialize_f64(*value)
        } else if *value > 0.0 {
            ser.serialize_str("inf")
        } else {
            ser.serialize_str("-inf")
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(de)? {
            Raw::Num(x) => Ok(x),
            Raw::Text(s) => match s.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                other => Err(D::Error::custom(format!("bad extended real `{other}`"))),
            },
        }
    }
}

/// A generic record for "lhs ≤ rhs within tol".
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: String,
    #[serde(with = "ext_real")]
    pub lhs: f64,
    #[serde(with = "ext_real")]
    pub rhs: f64,
    /// rhs − lhs; negative beyond tolerance means failure.
    #[serde(with = "ext_real")]
    pub margin: f64,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl InequalityReport {
    /// Judge `lhs ≤ rhs + tol`, attaching `witness` on failure.
    pub fn check(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64, witness: String) -> Self {
        let margin = rhs - lhs;
        let verdict = if rhs.is_infinite() && rhs > 0.0 {
            Verdict::VacuousPass
        } else if lhs <= rhs + tol {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        InequalityReport {
            name: name.into(),
            lhs,
            rhs,
            margin,
            verdict,
            witness: if verdict == Verdict::Fail {
                Some(witness)
            } else {
                None
            },
        }
    }
}

/// One transport-entropy comparison W ≤ Φ⁻¹(H) for a measure ν.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TeReport {
    pub nu_id: String,
    pub w: f64,
    pub h: f64,
    #[serde(with = "ext_real")]
    pub inv_h: f64,
    #[serde(with = "ext_real")]
    pub margin: f64,
    pub verdict: Verdict,
    /// The ν weights are the reproducible witness for a failed instance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_nu: Option<Vec<f64>>,
}

/// One λ row of an inf-convolution inequality check (log-domain).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IcLambdaRecord {
    pub lambda: f64,
    pub log_lhs: f64,
    #[serde(with = "ext_real")]
    pub rhs: f64,
    #[serde(with = "ext_real")]
    pub margin: f64,
    pub verdict: Verdict,
}

/// Full inf-convolution inequality report for one field over a λ grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IcReport {
    pub field_id: String,
    pub rows: Vec<IcLambdaRecord>,
    pub verdict: Verdict,
}

impl IcReport {
    pub fn from_rows(field_id: impl Into<String>, rows: Vec<IcLambdaRecord>) -> Self {
        let verdict = if rows.iter().any(|r| r.verdict == Verdict::Fail) {
            Verdict::Fail
        } else if rows.iter().all(|r| r.verdict == Verdict::VacuousPass) && !rows.is_empty() {
            Verdict::VacuousPass
        } else {
            Verdict::Pass
        };
        IcReport {
            field_id: field_id.into(),
            rows,
            verdict,
        }
    }

    /// Worst (smallest) margin over non-vacuous rows.
    pub fn worst_margin(&self) -> f64 {
        self.rows
            .iter()
            .filter(|r| r.verdict != Verdict::VacuousPass)
            .map(|r| r.margin)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Two-sided moment-comparison verification at one order p.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RhVerification {
    pub field_id: String,
    pub p: f64,
    /// ‖f‖_p / ‖f‖₀
    pub ratio_plus: f64,
    /// ‖f‖₀ / ‖f‖₋p
    pub ratio_minus: f64,
    #[serde(with = "ext_real")]
    pub constant: f64,
    #[serde(with = "ext_real")]
    pub margin_plus: f64,
    #[serde(with = "ext_real")]
    pub margin_minus: f64,
    /// The side (+p or −p) with the smaller margin.
    pub worst_side: f64,
    pub verdict: Verdict,
}

/// Atomic file write: stage in a sibling temp file, then rename over the
/// target so partially-written reports never appear.
pub fn write_atomic(path: &std::path::Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or_else(|| std::path::Path::new("."));
    let stem = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "report".into());
    let mut tmp = dir.join(format!(".{stem}.tmp"));
    // Avoid clobbering a concurrent writer's staging file.
    let mut k = 0;
    while tmp.exists() {
        k += 1;
        tmp = dir.join(format!(".{stem}.{k}.tmp"));
    }
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)
}
