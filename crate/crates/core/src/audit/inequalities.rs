//! Seeded random sweep over the four magnitude bounds.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::report::AuditCheck;
use crate::error::{QError, Result};
use crate::orthopoly::{im_bound_check, sw_bound_check, IMScalingPoint, SWScalingPoint};
use crate::qcore::QParam;
use crate::ramanujan::{check_exp_bound, check_gauss_bound, BoundReport, Verdict};

pub const SWEEP_N_MAX: usize = 40;
const Z_LOG10_RANGE: (f64, f64) = (-3.0, 3.0);
const U_LOG10_RANGE: (f64, f64) = (-1.0, 1.0);
const T_RANGE: (f64, f64) = (0.1, 3.0);

#[derive(Debug, Clone, Copy, PartialEq)]
struct Sample {
    q_index: usize,
    z: Complex64,
    n: usize,
    t: f64,
    u: Complex64,
}

fn log_uniform_polar(rng: &mut ChaCha8Rng, range: (f64, f64)) -> Complex64 {
    let r = 10f64.powf(rng.gen_range(range.0..=range.1));
    let theta = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    Complex64::from_polar(r, theta)
}

/// The first samples pin the boundary cases: `z = 0` and `|z| = 1`.
fn draw_samples(count: usize, seed: u64, grid_len: usize) -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let mut z = log_uniform_polar(&mut rng, Z_LOG10_RANGE);
            match i {
                0 => z = Complex64::new(0.0, 0.0),
                1 => z /= z.norm(),
                _ => {}
            }
            let t = T_RANGE.0 + (T_RANGE.1 - T_RANGE.0) * (1.0 - rng.gen::<f64>());
            Sample {
                q_index: i % grid_len,
                z,
                n: rng.gen_range(0..=SWEEP_N_MAX),
                t,
                u: log_uniform_polar(&mut rng, U_LOG10_RANGE),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    evaluated: usize,
    violated: usize,
    inconclusive: usize,
    failed: usize,
}

impl Tally {
    fn record(&mut self, r: &Result<BoundReport>) {
        match r {
            Ok(b) => {
                self.evaluated += 1;
                match b.verdict {
                    Verdict::Holds => {}
                    Verdict::Inconclusive => self.inconclusive += 1,
                    Verdict::Violated => self.violated += 1,
                }
            }
            Err(_) => self.failed += 1,
        }
    }

    fn merge(mut self, o: Tally) -> Tally {
        self.evaluated += o.evaluated;
        self.violated += o.violated;
        self.inconclusive += o.inconclusive;
        self.failed += o.failed;
        self
    }
}

const NAMES: [(&str, &str); 4] = [
    ("exp-bound", "|A_q(z)| <= exp(q|z|/(1-q))"),
    (
        "gauss-bound",
        "|A_q(z)| <= (|z|/sqrt q)^(1/2) exp(-ln^2|z|/(4 ln q)) / (q;q)_inf, z != 0",
    ),
    (
        "im-polynomial-bound",
        "|h_n(sinh xi_n | q)| <= |u|^n q^(-n^2 t) A_q(-q^(n(2t-1))/|u|^2)",
    ),
    (
        "sw-polynomial-bound",
        "|S_n(q^(-nt) u; q)| <= |u|^n A_q(-q^(n(t-2))/|u|) / ((q;q)_inf q^(n^2(t-1)))",
    ),
];

fn evaluate(s: &Sample, grid: &[QParam]) -> [Tally; 4] {
    let qp = &grid[s.q_index];
    let gauss_z = if s.z.norm() == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        s.z
    };
    let results = [
        check_exp_bound(s.z, qp),
        check_gauss_bound(gauss_z, qp),
        IMScalingPoint::new(s.n, s.t, s.u, qp).and_then(|p| im_bound_check(&p, qp)),
        SWScalingPoint::new(s.n, s.t, s.u, qp).and_then(|p| sw_bound_check(&p, qp)),
    ];
    let mut out = [Tally::default(); 4];
    for (t, r) in out.iter_mut().zip(results.iter()) {
        t.record(r);
    }
    out
}

/// One aggregate check per inequality. `measured` counts samples that did
/// not hold outright (violations, inconclusive comparisons and evaluation
/// failures); inconclusive ones are the certified numerical slack.
pub fn audit_inequalities(sample_count: usize, seed: u64, qp_grid: &[QParam]) -> Vec<AuditCheck> {
    let precondition = if sample_count == 0 {
        Some(QError::DomainError(
            "sample_count must be at least 1".into(),
        ))
    } else if qp_grid.is_empty() {
        Some(QError::DomainError("the q grid is empty".into()))
    } else {
        None
    };
    if let Some(e) = precondition {
        return NAMES
            .iter()
            .map(|(id, desc)| AuditCheck::from_error(format!("inequality/{id}"), desc, &e))
            .collect();
    }
    let samples = draw_samples(sample_count, seed, qp_grid.len());
    let totals = samples.par_iter().map(|s| evaluate(s, qp_grid)).reduce(
        || [Tally::default(); 4],
        |a, b| {
            let mut out = a;
            for (o, x) in out.iter_mut().zip(b) {
                *o = o.merge(x);
            }
            out
        },
    );
    NAMES
        .iter()
        .zip(totals)
        .map(|((id, desc), t)| {
            AuditCheck::new(
                format!("inequality/{id}"),
                format!(
                    "{desc}: {} samples (seed {seed}), {} violated, {} inconclusive, {} not evaluated",
                    sample_count, t.violated, t.inconclusive, t.failed
                ),
                (t.violated + t.inconclusive + t.failed) as f64,
                0.0,
                0.0,
                t.inconclusive as f64,
            )
        })
        .collect()
}
