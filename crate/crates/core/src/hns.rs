//! Hypercomplex number systems defined by structure constants.
//!
//! A system of dimension `n` is a real algebra with basis `e1..en`. Its
//! multiplication is given by the Cayley table: cell `(i, j)` lists the
//! terms `c·e_k` whose sum is `e_i·e_j`. Numbers are kept in list form, an
//! ordered coefficient vector bound to the system they live in.
//!
//! Indices are 0-based in the API. Rendering and the catalog file format
//! use the 1-based `e1..en` names.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Unit detection accepts a candidate whose residual stays below this bound.
const UNIT_TOL: f64 = 1e-12;

/// One structure constant of a Cayley cell: `coeff · e_index`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub index: usize,
    pub coeff: f64,
}

impl Term {
    pub const fn new(index: usize, coeff: f64) -> Self {
        Self { index, coeff }
    }
}

/// A Cayley cell: the expansion of one basis product.
pub type Cell = Vec<Term>;

/// A finite-dimensional hypercomplex number system.
#[derive(Debug, Clone, PartialEq)]
pub struct HnsDef {
    name: String,
    dim: usize,
    /// Row-major `dim × dim` cells.
    table: Vec<Cell>,
    /// Dense structure constants, `constants[(i * dim + j) * dim + k]`.
    constants: Vec<f64>,
    unit: Option<Vec<f64>>,
}

impl HnsDef {
    /// Builds a system from its Cayley table, given as rows of cells.
    ///
    /// The unit element, when there is one, is detected from the table.
    pub fn new(name: impl Into<String>, table: Vec<Vec<Cell>>) -> Result<Self> {
        let name = name.into();
        let dim = table.len();
        if dim == 0 {
            return Err(Error::InvalidDimension);
        }

        let mut cells = Vec::with_capacity(dim * dim);
        let mut constants = vec![0.0; dim * dim * dim];
        for (i, row) in table.into_iter().enumerate() {
            if row.len() != dim {
                return Err(Error::InvalidTable {
                    system: name,
                    row: i + 1,
                    col: row.len().min(dim) + 1,
                    reason: format!("row has {} cells, expected {dim}", row.len()),
                });
            }
            for (j, cell) in row.into_iter().enumerate() {
                for (pos, term) in cell.iter().enumerate() {
                    let invalid = |reason: String| Error::InvalidTable {
                        system: name.clone(),
                        row: i + 1,
                        col: j + 1,
                        reason,
                    };
                    if term.index >= dim {
                        return Err(invalid(format!(
                            "target index e{} outside e1..e{dim}",
                            term.index + 1
                        )));
                    }
                    if !term.coeff.is_finite() {
                        return Err(invalid("coefficient is not a finite number".to_string()));
                    }
                    if cell[..pos].iter().any(|t| t.index == term.index) {
                        return Err(invalid(format!(
                            "target index e{} appears twice",
                            term.index + 1
                        )));
                    }
                    constants[(i * dim + j) * dim + term.index] = term.coeff;
                }
                cells.push(cell);
            }
        }

        let mut hns = Self {
            name,
            dim,
            table: cells,
            constants,
            unit: None,
        };
        hns.unit = hns.detect_unit();
        Ok(hns)
    }

    /// Like [`HnsDef::new`], but also checks a declared unit basis element
    /// against the one detected from the table.
    pub fn with_declared_unit(
        name: impl Into<String>,
        table: Vec<Vec<Cell>>,
        unit_index: usize,
    ) -> Result<Self> {
        let hns = Self::new(name, table)?;
        match hns.unit_index() {
            Some(u) if u == unit_index => Ok(hns),
            Some(u) => Err(Error::UnitMismatch {
                system: hns.name,
                reason: format!(
                    "declared unit e{} but the table's unit is e{}",
                    unit_index + 1,
                    u + 1
                ),
            }),
            None => Err(Error::UnitMismatch {
                system: hns.name,
                reason: format!(
                    "declared unit e{} is not a two-sided identity of the table",
                    unit_index + 1
                ),
            }),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The cell for `e_i · e_j`.
    pub fn cell(&self, i: usize, j: usize) -> &[Term] {
        &self.table[i * self.dim + j]
    }

    /// The table as rows of cells, the three-level list layout.
    pub fn rows(&self) -> impl Iterator<Item = &[Cell]> + '_ {
        self.table.chunks(self.dim)
    }

    /// Structure constant of `e_k` in `e_i · e_j`.
    #[inline]
    pub fn constant(&self, i: usize, j: usize, k: usize) -> f64 {
        self.constants[(i * self.dim + j) * self.dim + k]
    }

    /// Coefficients of the two-sided identity, if the system has one.
    pub fn unit(&self) -> Option<&[f64]> {
        self.unit.as_deref()
    }

    /// Index of the basis element acting as the unit, when the unit is a
    /// single basis element with coefficient 1.
    pub fn unit_index(&self) -> Option<usize> {
        let unit = self.unit.as_ref()?;
        let mut nonzero = unit.iter().enumerate().filter(|(_, c)| **c != 0.0);
        match (nonzero.next(), nonzero.next()) {
            (Some((u, &1.0)), None) => Some(u),
            _ => None,
        }
    }

    /// Whether the table is exactly the cyclic group law of `Z_dim`.
    pub fn is_cyclic(&self) -> bool {
        let n = self.dim;
        (0..n).all(|i| {
            (0..n).all(|j| {
                let target = (i + j) % n;
                (0..n).all(|k| self.constant(i, j, k) == if k == target { 1.0 } else { 0.0 })
            })
        })
    }

    fn is_two_sided_identity(&self, u: &[f64], tol: f64) -> bool {
        let n = self.dim;
        (0..n).all(|i| {
            (0..n).all(|k| {
                let delta = if i == k { 1.0 } else { 0.0 };
                let left: f64 = (0..n).map(|j| u[j] * self.constant(j, i, k)).sum();
                let right: f64 = (0..n).map(|j| u[j] * self.constant(i, j, k)).sum();
                libm::fabs(left - delta) <= tol && libm::fabs(right - delta) <= tol
            })
        })
    }

    fn detect_unit(&self) -> Option<Vec<f64>> {
        let n = self.dim;
        for u in 0..n {
            let mut candidate = vec![0.0; n];
            candidate[u] = 1.0;
            if self.is_two_sided_identity(&candidate, 0.0) {
                return Some(candidate);
            }
        }

        // General unit: solve u·e_i = e_i and e_i·u = e_i in the least-squares
        // sense, then confirm the residual.
        let rows = 2 * n * n;
        let mut system = DMatrix::<f64>::zeros(rows, n);
        let mut rhs = DVector::<f64>::zeros(rows);
        for i in 0..n {
            for k in 0..n {
                let left = i * n + k;
                let right = n * n + left;
                for j in 0..n {
                    system[(left, j)] = self.constant(j, i, k);
                    system[(right, j)] = self.constant(i, j, k);
                }
                if i == k {
                    rhs[left] = 1.0;
                    rhs[right] = 1.0;
                }
            }
        }
        let svd = system.svd(true, true);
        let solution = svd.solve(&rhs, 1e-12).ok()?;
        let candidate: Vec<f64> = solution
            .iter()
            .map(|&c| {
                let rounded = libm::round(c);
                if libm::fabs(c - rounded) <= UNIT_TOL {
                    rounded
                } else {
                    c
                }
            })
            .collect();
        self.is_two_sided_identity(&candidate, UNIT_TOL)
            .then_some(candidate)
    }
}

/// Group algebra of the cyclic group `Z_n`: `e_i · e_j = e_((i + j) mod n)`
/// with 0-based indices, so `e1` is the unit.
pub fn cyclic_group_algebra(n: usize) -> Result<HnsDef> {
    if n == 0 {
        return Err(Error::InvalidDimension);
    }
    let name = match n {
        4 => "G47".to_string(),
        5 => "G51".to_string(),
        _ => format!("Z{n}"),
    };
    let table = (0..n)
        .map(|i| (0..n).map(|j| vec![Term::new((i + j) % n, 1.0)]).collect())
        .collect();
    HnsDef::new(name, table)
}

/// Report of the algebraic properties of a table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Properties {
    pub commutative: bool,
    pub associative: bool,
    pub has_unit: bool,
}

/// Checks commutativity and associativity over all basis pairs and triples.
pub fn check_properties(hns: &HnsDef, tol: f64) -> Properties {
    let n = hns.dim();
    let commutative = (0..n).all(|i| {
        (0..n).all(|j| {
            (0..n).all(|k| libm::fabs(hns.constant(i, j, k) - hns.constant(j, i, k)) <= tol)
        })
    });

    // (e_i e_j) e_k = Σ_p c(i,j,p) c(p,k,q) e_q ; e_i (e_j e_k) = Σ_p c(j,k,p) c(i,p,q) e_q
    let associative = (0..n).all(|i| {
        (0..n).all(|j| {
            (0..n).all(|k| {
                (0..n).all(|q| {
                    let lhs: f64 = (0..n)
                        .map(|p| hns.constant(i, j, p) * hns.constant(p, k, q))
                        .sum();
                    let rhs: f64 = (0..n)
                        .map(|p| hns.constant(j, k, p) * hns.constant(i, p, q))
                        .sum();
                    libm::fabs(lhs - rhs) <= tol
                })
            })
        })
    });

    Properties {
        commutative,
        associative,
        has_unit: hns.unit().is_some(),
    }
}

/// A hypercomplex number in list form.
#[derive(Debug, Clone)]
pub struct HyperNum<'s> {
    system: &'s HnsDef,
    coeffs: Vec<f64>,
}

impl PartialEq for HyperNum<'_> {
    fn eq(&self, other: &Self) -> bool {
        same_system(self.system, other.system) && self.coeffs == other.coeffs
    }
}

fn same_system(a: &HnsDef, b: &HnsDef) -> bool {
    core::ptr::eq(a, b) || a == b
}

impl<'s> HyperNum<'s> {
    pub fn new(system: &'s HnsDef, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != system.dim() {
            return Err(Error::LengthMismatch {
                expected: system.dim(),
                found: coeffs.len(),
            });
        }
        Ok(Self { system, coeffs })
    }

    pub fn zero(system: &'s HnsDef) -> Self {
        Self {
            system,
            coeffs: vec![0.0; system.dim()],
        }
    }

    /// The basis element `e_(index + 1)`.
    pub fn basis(system: &'s HnsDef, index: usize) -> Self {
        let mut coeffs = vec![0.0; system.dim()];
        coeffs[index] = 1.0;
        Self { system, coeffs }
    }

    /// The unit element ε of `system`.
    pub fn unit(system: &'s HnsDef) -> Result<Self> {
        let unit = system.unit().ok_or_else(|| Error::NoUnit {
            system: system.name().to_string(),
        })?;
        Ok(Self {
            system,
            coeffs: unit.to_vec(),
        })
    }

    pub fn system(&self) -> &'s HnsDef {
        self.system
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn norm_inf(&self) -> f64 {
        self.coeffs
            .iter()
            .fold(0.0, |acc, c| acc.max(libm::fabs(*c)))
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if same_system(self.system, other.system) {
            Ok(())
        } else {
            Err(Error::SystemMismatch {
                left: self.system.name().to_string(),
                right: other.system.name().to_string(),
            })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            system: self.system,
            coeffs,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            system: self.system,
            coeffs,
        })
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            system: self.system,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// ∞-norm of the coefficient difference.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.norm_inf())
    }

    /// Product over the structure constants.
    ///
    /// Basis pairs are visited in ascending `i`, then ascending `j >= i`, and
    /// the `(i, j)` and `(j, i)` contributions are combined before they are
    /// accumulated. On a commutative table this makes `a·b` and `b·a`
    /// bit-identical.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let hns = self.system;
        let n = hns.dim();
        let (a, b) = (&self.coeffs, &other.coeffs);
        let mut out = vec![0.0; n];
        for i in 0..n {
            let diag = a[i] * b[i];
            for (k, slot) in out.iter_mut().enumerate() {
                let c = hns.constant(i, i, k);
                if c != 0.0 {
                    *slot += diag * c;
                }
            }
            for j in i + 1..n {
                let ij = a[i] * b[j];
                let ji = a[j] * b[i];
                for (k, slot) in out.iter_mut().enumerate() {
                    let c_ij = hns.constant(i, j, k);
                    let c_ji = hns.constant(j, i, k);
                    if c_ij != 0.0 || c_ji != 0.0 {
                        *slot += ij * c_ij + ji * c_ji;
                    }
                }
            }
        }
        Ok(Self {
            system: hns,
            coeffs: out,
        })
    }

    /// `a^0 = ε`, `a^k = a · a^(k-1)`.
    pub fn power(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Self::unit(self.system);
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = self.multiply(&acc)?;
        }
        Ok(acc)
    }

    /// Natural form `a1*e1 + a2*e2 + …` with zero terms skipped; the zero
    /// number renders as `0`.
    pub fn natural_form(&self, symbol: &str) -> String {
        let mut out = String::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let magnitude = libm::fabs(c);
            if out.is_empty() {
                if c < 0.0 {
                    out.push('-');
                }
            } else {
                out.push_str(if c < 0.0 { " - " } else { " + " });
            }
            if magnitude != 1.0 {
                let _ = write!(out, "{magnitude}*");
            }
            let _ = write!(out, "{symbol}{}", i + 1);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// Natural form of a generic number with symbolic coefficients, e.g.
/// `a1*e1 + a2*e2 + … + an*en`.
pub fn symbolic_natural_form(dim: usize, coeff: &str, basis: &str) -> String {
    (1..=dim)
        .map(|i| format!("{coeff}{i}*{basis}{i}"))
        .collect::<Vec<_>>()
        .join(" + ")
}
