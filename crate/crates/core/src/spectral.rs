//! Associated matrix of a hypercomplex number, its spectrum, and the
//! direct-sum classification read off from that spectrum.
//!
//! For `M` in a system with structure constants `c(i, j → k)`, the product
//! `M·X` is linear in `X`: `vec(M·X) = Ψ·vec(X)` with
//! `Ψ(k, j) = Σ_i m_i·c(i, j → k)`. The exponential `Exp(M)` solves
//! `X' = Ψ·X`, `X(0) = vec(ε)` at `t = 1`, so the eigenvalues of `Ψ` decide
//! the shape of every closed form.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;
use core::fmt;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hns::{HnsDef, HyperNum};

/// Default relative tolerance below which an imaginary part counts as zero.
pub const DEFAULT_PAIR_TOL: f64 = 1e-9;

/// Default number of random samples used by [`iso_signature`].
pub const DEFAULT_TRIALS: usize = 8;

/// The left-multiplication matrix Ψ of a hypercomplex number.
#[derive(Debug, Clone)]
pub struct AssocMatrix<'s> {
    entries: DMatrix<f64>,
    source: HyperNum<'s>,
}

impl<'s> AssocMatrix<'s> {
    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn source(&self) -> &HyperNum<'s> {
        &self.source
    }

    pub fn into_entries(self) -> DMatrix<f64> {
        self.entries
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace()
    }

    /// `Ψ·vec(x)`.
    pub fn apply(&self, x: &HyperNum<'s>) -> Result<HyperNum<'s>> {
        let v = &self.entries * DVector::from_column_slice(x.coeffs());
        HyperNum::new(self.source.system(), v.as_slice().to_vec())
    }
}

/// Builds Ψ(M) from the structure constants.
pub fn assoc_matrix<'s>(m: &HyperNum<'s>) -> AssocMatrix<'s> {
    let hns = m.system();
    let n = hns.dim();
    let coeffs = m.coeffs();
    let entries = DMatrix::from_fn(n, n, |k, j| {
        coeffs
            .iter()
            .enumerate()
            .map(|(i, &mi)| mi * hns.constant(i, j, k))
            .sum()
    });
    AssocMatrix {
        entries,
        source: m.clone(),
    }
}

/// Eigenvalues of Ψ grouped into real roots and conjugate pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Real eigenvalues with multiplicity, ascending.
    pub reals: Vec<f64>,
    /// `(re, im)` with `im > 0`, one entry per conjugate pair, sorted by `re`
    /// then `im`.
    pub pairs: Vec<(f64, f64)>,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.reals.len() + 2 * self.pairs.len()
    }

    pub fn signature(&self) -> IsoSignature {
        IsoSignature::new(self.reals.len(), self.pairs.len())
    }

    /// All eigenvalues, each pair expanded into both conjugates.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        let mut out: Vec<Complex64> = self.reals.iter().map(|&r| Complex64::new(r, 0.0)).collect();
        for &(re, im) in &self.pairs {
            out.push(Complex64::new(re, im));
            out.push(Complex64::new(re, -im));
        }
        out
    }
}

/// Raw eigenvalues of a square real matrix.
pub(crate) fn raw_eigenvalues(a: &DMatrix<f64>) -> Vec<Complex64> {
    a.clone().complex_eigenvalues().iter().copied().collect()
}

fn by_re_then_im(a: &(f64, f64), b: &(f64, f64)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1))
}

/// Splits eigenvalues into reals and conjugate pairs.
///
/// Values whose imaginary part is at most `pair_tol` times the largest
/// eigenvalue magnitude are taken as real.
pub(crate) fn classify(eigenvalues: &[Complex64], pair_tol: f64) -> Result<Spectrum> {
    let scale = eigenvalues.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
    let threshold = pair_tol * scale;

    let mut reals = Vec::new();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for z in eigenvalues {
        if libm::fabs(z.im) <= threshold {
            reals.push(z.re);
        } else if z.im > 0.0 {
            upper.push((z.re, z.im));
        } else {
            lower.push((z.re, -z.im));
        }
    }
    if upper.len() != lower.len() {
        return Err(Error::SpectralPairing {
            unpaired: upper.len().abs_diff(lower.len()),
        });
    }

    upper.sort_by(by_re_then_im);
    let mut pairs = Vec::with_capacity(upper.len());
    for (re, im) in upper {
        let (best, _) = lower
            .iter()
            .enumerate()
            .map(|(idx, &(r, i))| (idx, libm::hypot(r - re, i - im)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("equal counts leave a partner");
        let (r, i) = lower.swap_remove(best);
        pairs.push(((re + r) / 2.0, (im + i) / 2.0));
    }

    reals.sort_by(f64::total_cmp);
    pairs.sort_by(by_re_then_im);
    Ok(Spectrum { reals, pairs })
}

/// Numerical spectrum of Ψ.
pub fn spectrum(psi: &AssocMatrix<'_>, pair_tol: f64) -> Result<Spectrum> {
    classify(&raw_eigenvalues(psi.entries()), pair_tol)
}

/// `λ_k = Σ_j m_(j+1)·ω^(jk)` with `ω = exp(2πi/n)`, `k = 0..n-1`.
///
/// For the cyclic group algebra of order `n` these are exactly the
/// eigenvalues of Ψ(M), since Ψ is then a circulant matrix.
pub fn circulant_eigenvalues(m: &[f64]) -> Vec<Complex64> {
    let n = m.len();
    (0..n)
        .map(|k| {
            m.iter()
                .enumerate()
                .fold(Complex64::new(0.0, 0.0), |acc, (j, &mj)| {
                    acc + root_of_unity(j * k, n) * mj
                })
        })
        .collect()
}

/// `exp(2πi·p/n)`, with `p` reduced modulo `n` before the angle is formed.
pub(crate) fn root_of_unity(p: usize, n: usize) -> Complex64 {
    let angle = 2.0 * PI * (p % n) as f64 / n as f64;
    Complex64::new(libm::cos(angle), libm::sin(angle))
}

/// Direct-sum type `R^a ⊕ C^b` of an algebra, read from its spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IsoSignature {
    pub r_count: usize,
    pub c_count: usize,
}

impl IsoSignature {
    pub const fn new(r_count: usize, c_count: usize) -> Self {
        Self { r_count, c_count }
    }

    pub const fn dim(&self) -> usize {
        self.r_count + 2 * self.c_count
    }

    /// Canonical label. Exponent 1 is dropped inside a sum of both kinds
    /// (`R ⊕ C^2`) and kept for a single kind (`R^1`, `C^2`).
    pub fn label(&self) -> String {
        let single = self.r_count == 0 || self.c_count == 0;
        let part = |symbol: &str, count: usize| {
            if count == 1 && !single {
                String::from(symbol)
            } else {
                format!("{symbol}^{count}")
            }
        };
        let mut parts = Vec::new();
        if self.r_count > 0 {
            parts.push(part("R", self.r_count));
        }
        if self.c_count > 0 {
            parts.push(part("C", self.c_count));
        }
        parts.join(" ⊕ ")
    }
}

impl fmt::Display for IsoSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Classifies `hns` by sampling random numbers and keeping the signature
/// with the most complex pairs. A single sample can sit on a degenerate
/// point (`M = ε` has an all-real spectrum), so several are drawn.
pub fn iso_signature(hns: &HnsDef, trials: usize, seed: u64) -> Result<IsoSignature> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<IsoSignature> = None;
    for _ in 0..trials {
        let coeffs = (0..hns.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let m = HyperNum::new(hns, coeffs)?;
        let signature = spectrum(&assoc_matrix(&m), DEFAULT_PAIR_TOL)?.signature();
        if signature.dim() != hns.dim() {
            return Err(Error::Classification(format!(
                "signature {signature} does not cover dimension {}",
                hns.dim()
            )));
        }
        best = Some(match best {
            Some(b) if b.c_count >= signature.c_count => b,
            _ => signature,
        });
    }
    Ok(best.expect("at least one trial ran"))
}

/// The quadratic-form matrix governing the sign of the discriminant of the
/// first complex pair in `G51`, in the variables `(m2, m3, m4, m5)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscriminantForm {
    pub ki: [[f64; 4]; 4],
    /// Eigenvalues of `ki`, ascending.
    pub eigenvalues: [f64; 4],
}

pub fn discriminant_form_g51() -> DiscriminantForm {
    let r5 = libm::sqrt(5.0);
    let p = 2.0 * r5 + 10.0;
    let q = 2.0 * r5 - 10.0;
    let s = 4.0 * r5;
    let ki = [
        [-p, -s, s, p],
        [-s, q, -q, s],
        [s, -q, q, -s],
        [p, s, -s, -p],
    ];
    let matrix = DMatrix::from_fn(4, 4, |i, j| ki[i][j]);
    let mut values: Vec<f64> = SymmetricEigen::new(matrix)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    values.sort_by(f64::total_cmp);
    DiscriminantForm {
        ki,
        eigenvalues: [values[0], values[1], values[2], values[3]],
    }
}

/// Two evaluations of the discriminant `b` of the `λ = a ± √b` root form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscriminantB {
    pub quadratic_value: f64,
    pub factored_value: f64,
}

/// Evaluates `b` at `m = (m2, m3, m4, m5)` exactly as the expanded and the
/// factored expressions were published, transcription slips included.
///
/// The two disagree on generic input; see [`discriminant_b_reconciled`].
pub fn discriminant_b(m: [f64; 4]) -> DiscriminantB {
    let [m2, m3, m4, m5] = m;
    let r5 = libm::sqrt(5.0);
    let quadratic_value =
        (-2.0 * r5 * m2 * m2 - 10.0 * m2 * m2 + 4.0 * r5 * m5 * m2 + 20.0 * m5 * m2
            - 8.0 * r5 * m3 * m2
            + 8.0 * r5 * m4 * m2
            - 10.0 * m5 * m5
            + 2.0 * r5 * m4 * m4
            + 2.0 * r5 * m3 * m3
            - 8.0 * r5 * m4 * m5
            - 10.0 * m4 * m4
            - 2.0 * r5 * m5 * m5
            - m3 * m3
            + 20.0 * m3 * m4
            + 8.0 * r5 * m3 * m5
            - 4.0 * r5 * m3 * m4)
            / 4.0;
    let linear = -2.0 * m5 + 2.0 * m2 - r5 * m3 - r5 * m4 - m3 + m4;
    let factored_value = -((2.0 * r5 + 10.0) / 64.0) * linear * linear;
    DiscriminantB {
        quadratic_value,
        factored_value,
    }
}

/// Evaluates `b` from the `KI` quadratic form and from the rank-one
/// factorisation of `KI`.
///
/// `KI = -((2√5 + 10)/4)·ℓℓᵀ` with `ℓ = (2, √5 - 1, 1 - √5, -2)`, and
/// `b = xᵀ·KI·x / 16 = -(Im λ)²` for the circulant eigenvalue at `k = 1`.
pub fn discriminant_b_reconciled(m: [f64; 4]) -> DiscriminantB {
    let ki = discriminant_form_g51().ki;
    let mut quadratic = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            quadratic += m[i] * ki[i][j] * m[j];
        }
    }
    let [m2, m3, m4, m5] = m;
    let r5 = libm::sqrt(5.0);
    let linear = 2.0 * m2 + (r5 - 1.0) * (m3 - m4) - 2.0 * m5;
    DiscriminantB {
        quadratic_value: quadratic / 16.0,
        factored_value: -((2.0 * r5 + 10.0) / 64.0) * linear * linear,
    }
}

/// Pairs every value in `expected` with a distinct, closest value in
/// `actual` and returns the largest distance, or `None` if the lengths
/// differ.
pub fn multiset_distance(expected: &[Complex64], actual: &[Complex64]) -> Option<f64> {
    if expected.len() != actual.len() {
        return None;
    }
    let mut used = vec![false; actual.len()];
    let mut worst = 0.0f64;
    for z in expected {
        let (idx, dist) = actual
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, w)| (i, (z - w).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))?;
        used[idx] = true;
        worst = worst.max(dist);
    }
    Some(worst)
}
