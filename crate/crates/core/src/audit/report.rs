use serde::{Deserialize, Serialize};

use crate::error::QError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// One audited quantity. Inequalities are encoded as `measured` = the
/// quantity that must be small, `expected` = 0, `tolerance` = the bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditCheck {
    pub id: String,
    pub description: String,
    #[serde(with = "float_repr")]
    pub measured: f64,
    #[serde(with = "float_repr")]
    pub expected: f64,
    #[serde(with = "float_repr")]
    pub tolerance: f64,
    pub status: Status,
}

impl AuditCheck {
    /// PASS when `|measured - expected| <= tolerance`; INCONCLUSIVE when
    /// the gap exceeds the tolerance by no more than `numerical_error`;
    /// FAIL otherwise, including any NaN.
    pub fn new(
        id: impl Into<String>,
        description: impl Into<String>,
        measured: f64,
        expected: f64,
        tolerance: f64,
        numerical_error: f64,
    ) -> Self {
        let gap = if measured == expected {
            0.0
        } else {
            (measured - expected).abs()
        };
        let status = if gap <= tolerance {
            Status::Pass
        } else if gap - numerical_error.max(0.0) <= tolerance {
            Status::Inconclusive
        } else {
            Status::Fail
        };
        Self {
            id: id.into(),
            description: description.into(),
            measured,
            expected,
            tolerance,
            status,
        }
    }

    /// A check that could not be computed.
    pub fn from_error(id: impl Into<String>, description: &str, err: &QError) -> Self {
        Self {
            id: id.into(),
            description: format!("{description}; not computed: {err}"),
            measured: f64::NAN,
            expected: f64::NAN,
            tolerance: 0.0,
            status: Status::Fail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub tool_version: String,
    pub seed: u64,
    /// Seconds since the Unix epoch when the run started.
    pub timestamp_unix: u64,
    #[serde(with = "float_repr")]
    pub tol: f64,
    pub n_max: usize,
    pub sample_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub metadata: ReportMetadata,
    pub qp_grid: Vec<f64>,
    pub checks: Vec<AuditCheck>,
}

impl AuditReport {
    /// Sorts checks by id and rejects duplicate ids.
    pub fn new(
        metadata: ReportMetadata,
        qp_grid: Vec<f64>,
        mut checks: Vec<AuditCheck>,
    ) -> Result<Self, QError> {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        if let Some(w) = checks.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(QError::DomainError(format!(
                "duplicate check id {}",
                w[0].id
            )));
        }
        Ok(Self {
            metadata,
            qp_grid,
            checks,
        })
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }
}

/// Finite floats as JSON numbers, non-finite ones as the strings `"NaN"`,
/// `"inf"`, `"-inf"`, so reports round-trip exactly.
pub mod float_repr {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else {
            s.serialize_str(&to_text(*x))
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Text(t) => from_text(&t).ok_or_else(|| {
                serde::de::Error::custom(format!("expected a number, NaN, inf or -inf, got {t:?}"))
            }),
        }
    }

    pub fn to_text(x: f64) -> String {
        if x.is_nan() {
            "NaN".into()
        } else if x == f64::INFINITY {
            "inf".into()
        } else if x == f64::NEG_INFINITY {
            "-inf".into()
        } else {
            format!("{x:?}")
        }
    }

    pub fn from_text(t: &str) -> Option<f64> {
        match t {
            "NaN" => Some(f64::NAN),
            "inf" => Some(f64::INFINITY),
            "-inf" => Some(f64::NEG_INFINITY),
            _ => t.parse().ok(),
        }
    }
}
