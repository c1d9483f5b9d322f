//! Built-in systems and lookup by name.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hns::{cyclic_group_algebra, Cell, HnsDef, Term};

fn e(k: usize) -> Cell {
    vec![Term::new(k, 1.0)]
}

fn neg(k: usize) -> Cell {
    vec![Term::new(k, -1.0)]
}

fn zero() -> Cell {
    Vec::new()
}

/// `R ⊕ R ⊕ C` with the table as published: `e2·e2 = e3`, which leaves the
/// second summand nilpotent into the complex block.
fn r_r_c_published() -> HnsDef {
    HnsDef::new(
        "R+R+C",
        vec![
            vec![e(0), zero(), zero(), zero()],
            vec![zero(), e(2), zero(), zero()],
            vec![zero(), zero(), e(2), e(3)],
            vec![zero(), zero(), e(3), neg(2)],
        ],
    )
    .expect("built-in table is well formed")
}

/// `R ⊕ R ⊕ C` with `e2` idempotent.
fn r_r_c_corrected() -> HnsDef {
    HnsDef::new(
        "R+R+C_corrected",
        vec![
            vec![e(0), zero(), zero(), zero()],
            vec![zero(), e(1), zero(), zero()],
            vec![zero(), zero(), e(2), e(3)],
            vec![zero(), zero(), e(3), neg(2)],
        ],
    )
    .expect("built-in table is well formed")
}

/// `W ⊕ C`: double numbers on `e1, e2` (`e2·e2 = e1`) and complex numbers on
/// `e3, e4`.
fn w_c() -> HnsDef {
    HnsDef::new(
        "W+C",
        vec![
            vec![e(0), e(1), zero(), zero()],
            vec![e(1), e(0), zero(), zero()],
            vec![zero(), zero(), e(2), e(3)],
            vec![zero(), zero(), e(3), neg(2)],
        ],
    )
    .expect("built-in table is well formed")
}

/// `R ⊕ C ⊕ C`: reals on `e1`, complex blocks on `e2, e3` and `e4, e5`.
fn r_c_c() -> HnsDef {
    HnsDef::new(
        "R+C+C",
        vec![
            vec![e(0), zero(), zero(), zero(), zero()],
            vec![zero(), e(1), e(2), zero(), zero()],
            vec![zero(), e(2), neg(1), zero(), zero()],
            vec![zero(), zero(), zero(), e(3), e(4)],
            vec![zero(), zero(), zero(), e(4), neg(3)],
        ],
    )
    .expect("built-in table is well formed")
}

/// `G47`, `G51`, and the direct-sum systems they decompose into.
pub fn builtin_systems() -> Vec<HnsDef> {
    vec![
        cyclic_group_algebra(4).expect("dimension 4 is valid"),
        cyclic_group_algebra(5).expect("dimension 5 is valid"),
        r_r_c_published(),
        r_r_c_corrected(),
        w_c(),
        r_c_c(),
    ]
}

/// Exact, case-sensitive lookup.
pub fn search<'c>(catalog: &'c [HnsDef], name: &str) -> Result<&'c HnsDef> {
    catalog
        .iter()
        .find(|s| s.name() == name)
        .ok_or_else(|| Error::NotFound {
            name: name.to_string(),
            available: catalog.iter().map(|s| String::from(s.name())).collect(),
        })
}

/// Rejects catalogs that use a name twice.
pub fn check_unique_names(catalog: &[HnsDef]) -> Result<()> {
    for (i, system) in catalog.iter().enumerate() {
        if catalog[..i].iter().any(|s| s.name() == system.name()) {
            return Err(Error::DuplicateName(system.name().to_string()));
        }
    }
    Ok(())
}
