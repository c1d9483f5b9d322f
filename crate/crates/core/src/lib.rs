//! Hypercomplex number systems given by structure constants, and the
//! exponential of a hypercomplex argument.
//!
//! The crate is `no_std` and needs only `alloc`. It covers:
//!
//! - [`hns`]: systems defined by Cayley tables, numbers in list form, and
//!   their arithmetic;
//! - [`spectral`]: the associated matrix Ψ of a number, its spectrum, and
//!   the `R^a ⊕ C^b` classification read from it;
//! - [`exponent`]: `Exp(M)` by power series, matrix exponential, eigen-modes,
//!   closed forms for the cyclic algebras of order 4 and 5, and the DFT;
//! - [`catalog`]: the built-in systems and name lookup.
//!
//! ```
//! use hcs_core::{cyclic_group_algebra, crosscheck, HyperNum};
//!
//! let g51 = cyclic_group_algebra(5).unwrap();
//! let m = HyperNum::new(&g51, vec![1.0, 0.5, -0.2, 0.3, 0.1]).unwrap();
//! let report = crosscheck(&m, 1e-8);
//! assert!(report.passed());
//! ```
#![no_std]

extern crate alloc;

pub mod catalog;
pub mod error;
pub mod expm;
pub mod exponent;
pub mod hns;
pub mod spectral;

pub use catalog::{builtin_systems, search};
pub use error::{Error, Result};
pub use exponent::{
    applicable_methods, crosscheck, exp_closed_g47, exp_closed_g51, exp_cyclic_dft, exp_eigen,
    exp_matrix, exp_series, g51_constants, ExpReport, G51Constants, Method, MethodOutcome,
};
pub use hns::{check_properties, cyclic_group_algebra, Cell, HnsDef, HyperNum, Properties, Term};
pub use spectral::{
    assoc_matrix, circulant_eigenvalues, discriminant_b, discriminant_b_reconciled,
    discriminant_form_g51, iso_signature, spectrum, AssocMatrix, DiscriminantB, DiscriminantForm,
    IsoSignature, Spectrum,
};
