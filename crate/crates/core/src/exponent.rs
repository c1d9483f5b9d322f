//! The exponential of a hypercomplex argument, computed several independent
//! ways so that each result can be checked against the others.
//!
//! - [`exp_series`]: partial sums of `Σ M^s / s!`.
//! - [`exp_matrix`]: `expm(Ψ(M))·vec(ε)`, the solution of `X' = Ψ·X`,
//!   `X(0) = vec(ε)` at `t = 1`.
//! - [`exp_eigen`]: the same solution assembled from a real fundamental
//!   system of eigen-modes, with constants fixed by the initial condition.
//! - [`exp_closed_g47`], [`exp_closed_g51`]: closed forms for the cyclic
//!   group algebras of order 4 and 5.
//! - [`exp_cyclic_dft`]: any cyclic group algebra, by diagonalising the
//!   circulant Ψ with the discrete Fourier transform.
//!
//! Every method returns ε exactly for `M = 0`.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expm::expm;
use crate::hns::{HnsDef, HyperNum};
use crate::spectral::{
    assoc_matrix, circulant_eigenvalues, classify, raw_eigenvalues, root_of_unity,
};

pub const DEFAULT_SERIES_TOL: f64 = 1e-14;
pub const DEFAULT_MAX_TERMS: usize = 200;
/// Relative tolerance for eigenvalue clustering and null-space detection.
pub const DEFAULT_EIGEN_TOL: f64 = 1e-8;
/// Smallest reciprocal condition number accepted for the mode matrix.
const MIN_MODE_RCOND: f64 = 1e-10;
/// Imaginary residue tolerated in the inverse DFT, relative to `max(1, |x|)`.
const DFT_RESIDUE_TOL: f64 = 1e-10;

/// The ways [`crosscheck`] can compute an exponential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Series,
    Matrix,
    Eigen,
    ClosedG47,
    ClosedG51,
    Dft,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Series,
        Method::Matrix,
        Method::Eigen,
        Method::ClosedG47,
        Method::ClosedG51,
        Method::Dft,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Series => "series",
            Method::Matrix => "matrix",
            Method::Eigen => "eigen",
            Method::ClosedG47 => "closed_g47",
            Method::ClosedG51 => "closed_g51",
            Method::Dft => "dft",
        }
    }

    pub fn applies_to(self, hns: &HnsDef) -> bool {
        match self {
            Method::Series | Method::Matrix | Method::Eigen => true,
            Method::ClosedG47 => hns.dim() == 4 && hns.is_cyclic(),
            Method::ClosedG51 => hns.dim() == 5 && hns.is_cyclic(),
            Method::Dft => hns.is_cyclic(),
        }
    }

    /// Runs this method with default tolerances.
    pub fn exp<'s>(self, m: &HyperNum<'s>) -> Result<HyperNum<'s>> {
        match self {
            Method::Series => exp_series(m, DEFAULT_SERIES_TOL, DEFAULT_MAX_TERMS).map(|(x, _)| x),
            Method::Matrix => exp_matrix(m),
            Method::Eigen => exp_eigen(m, DEFAULT_EIGEN_TOL),
            Method::ClosedG47 => exp_closed_g47(m),
            Method::ClosedG51 => exp_closed_g51(m),
            Method::Dft => exp_cyclic_dft(m),
        }
    }
}

/// Methods usable on `hns`, in [`Method::ALL`] order.
pub fn applicable_methods(hns: &HnsDef) -> Vec<Method> {
    Method::ALL
        .into_iter()
        .filter(|m| m.applies_to(hns))
        .collect()
}

/// Exp(0) = ε is the initial condition itself.
fn zero_shortcut<'s>(m: &HyperNum<'s>) -> Result<Option<HyperNum<'s>>> {
    let unit = HyperNum::unit(m.system())?;
    Ok(m.is_zero().then_some(unit))
}

/// Sums `M^s / s!` until a term's ∞-norm drops to `tol`. Returns the sum
/// and the number of terms it contains.
pub fn exp_series<'s>(
    m: &HyperNum<'s>,
    tol: f64,
    max_terms: usize,
) -> Result<(HyperNum<'s>, usize)> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument("series tolerance must be positive"));
    }
    let mut term = HyperNum::unit(m.system())?;
    let mut sum = term.clone();
    let mut used = 1;
    loop {
        if used >= max_terms {
            return Err(Error::NonConvergence { terms: max_terms });
        }
        term = m.multiply(&term)?.scale(1.0 / used as f64);
        if term.norm_inf() <= tol {
            return Ok((sum, used));
        }
        sum = sum.add(&term)?;
        used += 1;
    }
}

/// `expm(Ψ(M))` applied to `vec(ε)`.
pub fn exp_matrix<'s>(m: &HyperNum<'s>) -> Result<HyperNum<'s>> {
    if let Some(unit) = zero_shortcut(m)? {
        return Ok(unit);
    }
    let unit = HyperNum::unit(m.system())?;
    let flow = expm(assoc_matrix(m).entries());
    let x = flow * DVector::from_column_slice(unit.coeffs());
    HyperNum::new(m.system(), x.as_slice().to_vec())
}

/// Groups sorted values whose neighbours lie within `tol`; returns
/// `(mean, multiplicity)` per group.
fn cluster<T: Copy>(
    values: &[T],
    tol: f64,
    distance: impl Fn(T, T) -> f64,
    mean: impl Fn(&[T]) -> T,
) -> Vec<(T, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || distance(values[i - 1], values[i]) > tol {
            out.push((mean(&values[start..i]), i - start));
            start = i;
        }
    }
    out
}

/// `count` orthonormal vectors spanning the null space of `a`, or a
/// degenerate-spectrum error when the null space is smaller.
fn null_space<T>(a: DMatrix<T>, count: usize, tol: f64) -> Result<Vec<DVector<T>>>
where
    T: ComplexField<RealField = f64>,
{
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors were requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    let largest_kept = svd.singular_values[order[count - 1]];
    if largest_kept > tol {
        return Err(Error::DegenerateSpectrum(format!(
            "eigenvalue of multiplicity {count} has a smaller eigenspace (σ = {largest_kept:e})"
        )));
    }
    Ok(order[..count]
        .iter()
        .map(|&i| v_t.row(i).adjoint().into_owned())
        .collect())
}

/// Assembles Exp(M) from the eigen-modes of Ψ.
///
/// Each real eigenvalue λ contributes a mode `v·e^(λt)`; each conjugate pair
/// `re ± i·im` with eigenvector `u + i·w` contributes the two real modes
/// `e^(re·t)(u·cos(im·t) − w·sin(im·t))` and
/// `e^(re·t)(u·sin(im·t) + w·cos(im·t))`. The mode constants are the
/// solution of `Φ(0)·c = vec(ε)`, and the result is `Φ(1)·c`.
///
/// Fails with [`Error::DegenerateSpectrum`] when Ψ is not diagonalizable
/// within `tol`; [`exp_matrix`] covers those inputs.
pub fn exp_eigen<'s>(m: &HyperNum<'s>, tol: f64) -> Result<HyperNum<'s>> {
    if let Some(unit) = zero_shortcut(m)? {
        return Ok(unit);
    }
    let unit = HyperNum::unit(m.system())?;
    let n = m.dim();
    let psi = assoc_matrix(m).into_entries();
    let spectrum = classify(&raw_eigenvalues(&psi), tol)?;

    let magnitude = spectrum
        .eigenvalues()
        .iter()
        .fold(psi.amax(), |acc, z| acc.max(z.norm()));
    let scale = magnitude.max(1.0);
    let cluster_tol = tol * scale;

    let reals = cluster(
        &spectrum.reals,
        cluster_tol,
        |a, b| libm::fabs(b - a),
        |group| group.iter().sum::<f64>() / group.len() as f64,
    );
    let mut pair_values = spectrum.pairs.clone();
    pair_values.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let pairs = cluster(
        &pair_values,
        cluster_tol,
        |a, b| libm::hypot(b.0 - a.0, b.1 - a.1),
        |group| {
            let k = group.len() as f64;
            let (re, im) = group
                .iter()
                .fold((0.0, 0.0), |acc, p| (acc.0 + p.0, acc.1 + p.1));
            (re / k, im / k)
        },
    );

    let psi_c = psi.map(|x| Complex64::new(x, 0.0));
    let shifted_real = |lambda: f64| &psi - DMatrix::<f64>::identity(n, n) * lambda;
    let shifted_complex = |lambda: Complex64| {
        let mut a = psi_c.clone();
        for i in 0..n {
            a[(i, i)] -= lambda;
        }
        a
    };

    let mut start = DMatrix::<f64>::zeros(n, n);
    let mut end = DMatrix::<f64>::zeros(n, n);
    let mut col = 0;
    for (lambda, mult) in reals {
        let growth = libm::exp(lambda);
        for v in null_space(shifted_real(lambda), mult, cluster_tol)? {
            start.set_column(col, &v);
            end.set_column(col, &(v * growth));
            col += 1;
        }
    }
    for ((re, im), mult) in pairs {
        let growth = libm::exp(re);
        let (c, s) = (libm::cos(im), libm::sin(im));
        for z in null_space(shifted_complex(Complex64::new(re, im)), mult, cluster_tol)? {
            let u = z.map(|x| x.re);
            let w = z.map(|x| x.im);
            start.set_column(col, &u);
            end.set_column(col, &((&u * c - &w * s) * growth));
            start.set_column(col + 1, &w);
            end.set_column(col + 1, &((&u * s + &w * c) * growth));
            col += 2;
        }
    }
    debug_assert_eq!(col, n);

    let singular = start.singular_values();
    let rcond = singular.min() / singular.max();
    if rcond.is_nan() || rcond < MIN_MODE_RCOND {
        return Err(Error::DegenerateSpectrum(format!(
            "mode matrix is ill-conditioned (rcond = {rcond:e})"
        )));
    }
    let constants = start
        .lu()
        .solve(&DVector::from_column_slice(unit.coeffs()))
        .ok_or_else(|| Error::DegenerateSpectrum("mode matrix is singular".to_string()))?;
    let x = end * constants;
    HyperNum::new(m.system(), x.as_slice().to_vec())
}

fn require_cyclic(hns: &HnsDef, dim: usize, expected: &'static str) -> Result<()> {
    if hns.dim() == dim && hns.is_cyclic() {
        Ok(())
    } else {
        Err(Error::WrongSystem {
            expected,
            found: hns.name().to_string(),
        })
    }
}

/// Closed form in the cyclic algebra of order 4.
///
/// With `α₁ = m1 + m3`, `α₂ = m1 − m3`, `β₁ = m2 + m4`, `β₂ = m2 − m4` the
/// spectrum is `α₁ ± β₁` and `α₂ ± i·β₂`, and
/// `Exp(M) = ½[(e^α₁ch β₁ + e^α₂cos β₂)e1 + (e^α₁sh β₁ + e^α₂sin β₂)e2
///          + (e^α₁ch β₁ − e^α₂cos β₂)e3 + (e^α₁sh β₁ − e^α₂sin β₂)e4]`.
pub fn exp_closed_g47<'s>(m: &HyperNum<'s>) -> Result<HyperNum<'s>> {
    require_cyclic(m.system(), 4, "the cyclic algebra G47")?;
    let [m1, m2, m3, m4] = [m.coeffs()[0], m.coeffs()[1], m.coeffs()[2], m.coeffs()[3]];
    let (alpha1, alpha2) = (m1 + m3, m1 - m3);
    let (beta1, beta2) = (m2 + m4, m2 - m4);
    let hyp = libm::exp(alpha1);
    let osc = libm::exp(alpha2);
    let (ch, sh) = (hyp * libm::cosh(beta1), hyp * libm::sinh(beta1));
    let (co, si) = (osc * libm::cos(beta2), osc * libm::sin(beta2));
    HyperNum::new(
        m.system(),
        vec![
            0.5 * (ch + co),
            0.5 * (sh + si),
            0.5 * (ch - co),
            0.5 * (sh - si),
        ],
    )
}

/// The 25 mode constants of the order-5 closed form, indexed by component
/// `i = 1..5` (stored 0-based).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct G51Constants {
    pub c1: [f64; 5],
    pub c2: [f64; 5],
    pub f2: [f64; 5],
    pub c3: [f64; 5],
    pub f3: [f64; 5],
}

/// Order-5 Fourier vectors: `C1 = 1/5`, `C2 + i·F2 = (2/5)·ω^(i−1)`,
/// `C3 + i·F3 = (2/5)·ω^(2(i−1))`.
pub fn g51_constants() -> G51Constants {
    let mut k = G51Constants {
        c1: [0.2; 5],
        c2: [0.0; 5],
        f2: [0.0; 5],
        c3: [0.0; 5],
        f3: [0.0; 5],
    };
    for i in 0..5 {
        let first = root_of_unity(i, 5) * 0.4;
        let second = root_of_unity(2 * i, 5) * 0.4;
        k.c2[i] = first.re;
        k.f2[i] = first.im;
        k.c3[i] = second.re;
        k.f3[i] = second.im;
    }
    k
}

/// Closed form in the cyclic algebra of order 5:
///
/// `Exp(M)_i = e^λ₁/5 + e^(re λ₂)(C2_i cos(im λ₂) + F2_i sin(im λ₂))
///           + e^(re λ₄)(C3_i cos(im λ₄) + F3_i sin(im λ₄))`
///
/// with `λ₁ = Σ m_i`, and `λ₂`, `λ₄` the circulant eigenvalues at `k = 1`
/// and `k = 2`. The sign of each imaginary part is kept as computed; the
/// `F` columns are paired with exactly that branch.
pub fn exp_closed_g51<'s>(m: &HyperNum<'s>) -> Result<HyperNum<'s>> {
    require_cyclic(m.system(), 5, "the cyclic algebra G51")?;
    if let Some(unit) = zero_shortcut(m)? {
        return Ok(unit);
    }
    let lambda = circulant_eigenvalues(m.coeffs());
    let lambda1: f64 = m.coeffs().iter().sum();
    let (l2, l4) = (lambda[1], lambda[2]);
    let k = g51_constants();

    let real_mode = libm::exp(lambda1);
    let (g2, cos2, sin2) = (libm::exp(l2.re), libm::cos(l2.im), libm::sin(l2.im));
    let (g4, cos4, sin4) = (libm::exp(l4.re), libm::cos(l4.im), libm::sin(l4.im));
    let coeffs = (0..5)
        .map(|i| {
            k.c1[i] * real_mode
                + g2 * (k.c2[i] * cos2 + k.f2[i] * sin2)
                + g4 * (k.c3[i] * cos4 + k.f3[i] * sin4)
        })
        .collect();
    HyperNum::new(m.system(), coeffs)
}

/// Any cyclic group algebra: `x_j = (1/n)·Σ_k e^(λ_k)·ω^(−jk)` where `λ_k`
/// are the circulant eigenvalues of `M`.
pub fn exp_cyclic_dft<'s>(m: &HyperNum<'s>) -> Result<HyperNum<'s>> {
    let hns = m.system();
    if !hns.is_cyclic() {
        return Err(Error::WrongSystem {
            expected: "a cyclic group algebra",
            found: hns.name().to_string(),
        });
    }
    if let Some(unit) = zero_shortcut(m)? {
        return Ok(unit);
    }
    let n = hns.dim();
    let modes: Vec<Complex64> = circulant_eigenvalues(m.coeffs())
        .iter()
        .map(|z| z.exp())
        .collect();
    let mut coeffs = Vec::with_capacity(n);
    let mut residue = 0.0f64;
    for j in 0..n {
        let x = modes
            .iter()
            .enumerate()
            .fold(Complex64::new(0.0, 0.0), |acc, (k, e)| {
                acc + e * root_of_unity((n - j % n) * k, n)
            })
            / n as f64;
        residue = residue.max(libm::fabs(x.im) / libm::fabs(x.re).max(1.0));
        coeffs.push(x.re);
    }
    if residue > DFT_RESIDUE_TOL {
        return Err(Error::ImaginaryResidue { residue });
    }
    HyperNum::new(hns, coeffs)
}

/// One method's contribution to an [`ExpReport`].
#[derive(Debug, Clone)]
pub struct MethodOutcome<'s> {
    pub method: Method,
    pub result: Result<HyperNum<'s>>,
}

/// All applicable methods evaluated on one input.
#[derive(Debug, Clone)]
pub struct ExpReport<'s> {
    pub input: HyperNum<'s>,
    pub outcomes: Vec<MethodOutcome<'s>>,
    /// Largest ∞-norm distance between two successful results.
    pub max_pairwise_deviation: f64,
    /// Terms used by the series method, when it succeeded.
    pub terms_used: Option<usize>,
    pub tol: f64,
}

impl<'s> ExpReport<'s> {
    pub fn result(&self, method: Method) -> Option<&HyperNum<'s>> {
        self.outcomes
            .iter()
            .find(|o| o.method == method)
            .and_then(|o| o.result.as_ref().ok())
    }

    pub fn successes(&self) -> impl Iterator<Item = (Method, &HyperNum<'s>)> {
        self.outcomes
            .iter()
            .filter_map(|o| o.result.as_ref().ok().map(|r| (o.method, r)))
    }

    /// True when at least one method succeeded and all successful results
    /// agree within `tol`.
    pub fn passed(&self) -> bool {
        self.successes().next().is_some() && self.max_pairwise_deviation <= self.tol
    }
}

/// Runs every applicable method on `m` and measures their disagreement.
pub fn crosscheck<'s>(m: &HyperNum<'s>, tol: f64) -> ExpReport<'s> {
    let mut terms_used = None;
    let outcomes: Vec<MethodOutcome<'s>> = applicable_methods(m.system())
        .into_iter()
        .map(|method| {
            let result = match method {
                Method::Series => {
                    exp_series(m, DEFAULT_SERIES_TOL, DEFAULT_MAX_TERMS).map(|(x, k)| {
                        terms_used = Some(k);
                        x
                    })
                }
                other => other.exp(m),
            };
            MethodOutcome { method, result }
        })
        .collect();

    let results: Vec<&HyperNum<'s>> = outcomes
        .iter()
        .filter_map(|o| o.result.as_ref().ok())
        .collect();
    let mut deviation = 0.0f64;
    for (idx, a) in results.iter().enumerate() {
        for b in &results[idx + 1..] {
            let d = a.distance(b).unwrap_or(f64::INFINITY);
            // NaN must not hide behind max().
            deviation = if d.is_nan() {
                f64::INFINITY
            } else {
                deviation.max(d)
            };
        }
    }

    ExpReport {
        input: m.clone(),
        outcomes,
        max_pairwise_deviation: deviation,
        terms_used,
        tol,
    }
}
