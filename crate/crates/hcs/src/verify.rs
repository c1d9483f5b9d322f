//! Seeded property sweeps over one system.

use hcs_core::exponent::exp_matrix;
use hcs_core::spectral::{multiset_distance, DEFAULT_PAIR_TOL};
use hcs_core::{
    assoc_matrix, check_properties, circulant_eigenvalues, crosscheck, spectrum, HnsDef, HyperNum,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Finite-difference step of the ODE suite.
pub const ODE_STEP: f64 = 1e-5;
/// Relative tolerance of the spectrum oracle suite.
pub const ORACLE_TOL: f64 = 1e-9;
/// Allowed gap between `λ0` and `Σ m_i`.
pub const TRACE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub trials: usize,
    pub tol: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    /// Largest error seen; compared against `bound`.
    pub worst: f64,
    pub bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<&'static str>,
}

impl SuiteReport {
    fn new(name: &'static str, bound: f64) -> Self {
        Self {
            name,
            passed: 0,
            failed: 0,
            worst: 0.0,
            bound,
            skipped: None,
        }
    }

    fn skip(name: &'static str, reason: &'static str) -> Self {
        Self {
            skipped: Some(reason),
            ..Self::new(name, 0.0)
        }
    }

    /// Records one trial; errors and NaN count as failures.
    fn record(&mut self, error: Option<f64>) {
        match error {
            Some(e) if e <= self.bound => {
                self.passed += 1;
                self.worst = self.worst.max(e);
            }
            Some(e) => {
                self.failed += 1;
                self.worst = if e.is_nan() {
                    f64::INFINITY
                } else {
                    self.worst.max(e)
                };
            }
            None => {
                self.failed += 1;
                self.worst = f64::INFINITY;
            }
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

pub fn random_number<'s>(hns: &'s HnsDef, rng: &mut impl Rng, half_width: f64) -> HyperNum<'s> {
    let coeffs = (0..hns.dim())
        .map(|_| rng.gen_range(-half_width..=half_width))
        .collect();
    HyperNum::new(hns, coeffs).expect("length matches dim")
}

fn suite_rng(seed: u64, suite: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(suite);
    rng
}

/// All applicable methods agree within `tol`; coefficients in `[-2, 2]`.
pub fn method_agreement(hns: &HnsDef, cfg: &VerifyConfig) -> SuiteReport {
    const NAME: &str = "method_agreement";
    if hns.unit().is_none() {
        return SuiteReport::skip(NAME, "needs a unital system");
    }
    let mut report = SuiteReport::new(NAME, cfg.tol);
    let mut rng = suite_rng(cfg.seed, 1);
    for _ in 0..cfg.trials {
        let m = random_number(hns, &mut rng, 2.0);
        let run = crosscheck(&m, cfg.tol);
        report.record(run.successes().next().map(|_| run.max_pairwise_deviation));
    }
    report
}

/// `Exp(A + B) = Exp(A)·Exp(B)`; coefficients in `[-1, 1]`.
pub fn homomorphism(hns: &HnsDef, cfg: &VerifyConfig) -> SuiteReport {
    const NAME: &str = "homomorphism";
    let props = check_properties(hns, 1e-12);
    if !(props.commutative && props.associative && props.has_unit) {
        return SuiteReport::skip(NAME, "needs a commutative, associative, unital system");
    }
    let mut report = SuiteReport::new(NAME, cfg.tol);
    let mut rng = suite_rng(cfg.seed, 2);
    for _ in 0..cfg.trials {
        let a = random_number(hns, &mut rng, 1.0);
        let b = random_number(hns, &mut rng, 1.0);
        let error = (|| {
            let lhs = exp_matrix(&a.add(&b)?)?;
            let rhs = exp_matrix(&a)?.multiply(&exp_matrix(&b)?)?;
            lhs.distance(&rhs)
        })();
        report.record(error.ok());
    }
    report
}

/// Central difference of `t ↦ Exp(tM)` at `t = 1` against `M·Exp(M)`,
/// coefficients in `[-0.5, 0.5]`, bound `10·h`.
pub fn ode(hns: &HnsDef, cfg: &VerifyConfig) -> SuiteReport {
    const NAME: &str = "ode";
    if hns.unit().is_none() {
        return SuiteReport::skip(NAME, "needs a unital system");
    }
    let h = ODE_STEP;
    let mut report = SuiteReport::new(NAME, 10.0 * h);
    let mut rng = suite_rng(cfg.seed, 3);
    for _ in 0..cfg.trials {
        let m = random_number(hns, &mut rng, 0.5);
        let error = (|| {
            let forward = exp_matrix(&m.scale(1.0 + h))?;
            let backward = exp_matrix(&m.scale(1.0 - h))?;
            let derivative = forward.sub(&backward)?.scale(0.5 / h);
            let rhs = m.multiply(&exp_matrix(&m)?)?;
            derivative.distance(&rhs)
        })();
        report.record(error.ok());
    }
    report
}

/// Eigenvalues of Ψ(M) against the DFT of `m`, cyclic systems only.
pub fn spectrum_oracle(hns: &HnsDef, cfg: &VerifyConfig) -> SuiteReport {
    const NAME: &str = "spectrum_oracle";
    if !hns.is_cyclic() {
        return SuiteReport::skip(NAME, "needs a cyclic group algebra");
    }
    let mut report = SuiteReport::new(NAME, ORACLE_TOL);
    let mut rng = suite_rng(cfg.seed, 4);
    for _ in 0..cfg.trials {
        let m = random_number(hns, &mut rng, 2.0);
        let oracle = circulant_eigenvalues(m.coeffs());
        let error = spectrum(&assoc_matrix(&m), DEFAULT_PAIR_TOL)
            .ok()
            .and_then(|s| {
                let scale = oracle.iter().map(|z| z.norm()).fold(1.0, f64::max);
                let dist = multiset_distance(&oracle, &s.eigenvalues())? / scale;
                let sum: f64 = m.coeffs().iter().sum();
                let trace_gap = (oracle[0].re - sum).abs().max(oracle[0].im.abs());
                // A trace violation fails the trial regardless of the spectrum.
                Some(if trace_gap > TRACE_TOL {
                    f64::INFINITY
                } else {
                    dist
                })
            });
        report.record(error);
    }
    report
}

/// Runs every suite in a fixed order.
pub fn run_all(hns: &HnsDef, cfg: &VerifyConfig) -> Vec<SuiteReport> {
    vec![
        method_agreement(hns, cfg),
        homomorphism(hns, cfg),
        ode(hns, cfg),
        spectrum_oracle(hns, cfg),
    ]
}
