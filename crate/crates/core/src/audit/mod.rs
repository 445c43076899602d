//! Verification harness: integral identities, asymptotic envelopes,
//! orthonormality, magnitude bounds and the `q -> 1` limit, gathered into
//! an [`AuditReport`].

mod asymptotic;
mod inequalities;
mod integrals;
mod limit;
mod orthonormality;
mod report;

use std::time::{SystemTime, UNIX_EPOCH};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use asymptotic::{audit_im_asymptotic, audit_sw_asymptotic};
pub use inequalities::{audit_inequalities, SWEEP_N_MAX};
pub use integrals::{
    audit_im_integral, audit_sw_integral, audit_sw_normalization, ImIntegralAudit, SwIntegralAudit,
    WeightReading,
};
pub use limit::{audit_q1_limit, FINAL_ERROR_LIMIT};
pub use orthonormality::{audit_orthonormality, Family, MAX_GRAM_DEGREE};
pub use report::{float_repr, AuditCheck, AuditReport, ReportMetadata, Status};

use crate::error::{check_tol, QError, Result};
use crate::qcore::QParam;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditConfig {
    pub q_grid: Vec<f64>,
    pub tol: f64,
    pub seed: u64,
    /// Largest degree in the asymptotic tables; degrees run `0, 4, 8, ...`.
    pub n_max: usize,
    pub u_values: Vec<f64>,
    pub sample_count: usize,
    pub max_degree: usize,
    pub normalization_degrees: Vec<usize>,
    pub limit_z: Vec<Complex64>,
    pub limit_q: Vec<f64>,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self {
            q_grid: vec![0.1, 0.3, 0.5, 0.7, 0.9],
            tol: 1e-8,
            seed: 42,
            n_max: 40,
            u_values: vec![1.0, 1.5, 2.0],
            sample_count: 10_000,
            max_degree: 8,
            normalization_degrees: vec![0, 2, 4],
            limit_z: vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(-3.0, 0.0),
                Complex64::new(0.0, 2.0),
            ],
            limit_q: vec![0.9, 0.99, 0.999],
        }
    }
}

/// Degrees `0, 4, 8, ..., <= n_max`.
pub fn asymptotic_degrees(n_max: usize) -> Vec<usize> {
    (0..=n_max).step_by(4).collect()
}

fn or_fail(id: String, desc: &str, r: Result<Vec<AuditCheck>>) -> Vec<AuditCheck> {
    r.unwrap_or_else(|e| vec![AuditCheck::from_error(id, desc, &e)])
}

/// Every check that depends on a single `q`.
pub fn audit_single_q(qp: &QParam, cfg: &AuditConfig) -> Vec<AuditCheck> {
    let q = qp.q();
    let mut out = Vec::new();
    out.extend(or_fail(
        format!("im-integral/q={q}/theorem"),
        "int_0^inf A_q(u^-2)^2 W(u) du vs 2(q;q)_inf",
        audit_im_integral(qp, cfg.tol).map(ImIntegralAudit::into_checks),
    ));
    out.extend(or_fail(
        format!("sw-integral/q={q}/theorem"),
        "int_0^inf A_q(1/u)^2 w_SW(u) du vs (q;q)_inf",
        audit_sw_integral(qp, cfg.tol).map(SwIntegralAudit::into_checks),
    ));
    out.extend(or_fail(
        format!("sw-normalization/q={q}"),
        "Stieltjes-Wigert bracket normalization",
        audit_sw_normalization(&cfg.normalization_degrees, qp, cfg.tol),
    ));
    let degrees = asymptotic_degrees(cfg.n_max);
    for &u in &cfg.u_values {
        out.extend(audit_im_asymptotic(&degrees, u, qp));
        out.extend(audit_sw_asymptotic(&degrees, u, qp));
    }
    for fam in [Family::IM, Family::SW] {
        out.extend(or_fail(
            format!("orthonormality/{fam:?}/q={q}").to_lowercase(),
            "Gram matrix",
            audit_orthonormality(fam, cfg.max_degree, qp, cfg.tol),
        ));
    }
    out
}

/// The default full audit over `cfg.q_grid`.
pub fn run_full_audit(cfg: &AuditConfig) -> Result<AuditReport> {
    check_tol(cfg.tol)?;
    if cfg.q_grid.is_empty() {
        return Err(QError::DomainError("the q grid is empty".into()));
    }
    let grid = cfg
        .q_grid
        .iter()
        .map(|&q| QParam::new(q))
        .collect::<Result<Vec<_>>>()?;
    let timestamp_unix = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);

    let mut checks: Vec<AuditCheck> = grid
        .par_iter()
        .flat_map_iter(|qp| audit_single_q(qp, cfg))
        .collect();
    checks.extend(audit_inequalities(cfg.sample_count, cfg.seed, &grid));
    checks.extend(audit_q1_limit(&cfg.limit_z, &cfg.limit_q));

    let metadata = ReportMetadata {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: cfg.seed,
        timestamp_unix,
        tol: cfg.tol,
        n_max: cfg.n_max,
        sample_count: cfg.sample_count,
    };
    AuditReport::new(metadata, cfg.q_grid.clone(), checks)
}
