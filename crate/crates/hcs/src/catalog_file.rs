//! Versioned JSON catalog of hypercomplex number systems.
//!
//! ```json
//! {
//!   "version": 1,
//!   "systems": [
//!     { "name": "W+C", "dim": 4, "table": [[[[1, 1.0]], [[2, 1.0]], [], []], ...] }
//!   ]
//! }
//! ```
//!
//! `table[i][j]` is the cell for `e(i+1)·e(j+1)`: a list of `[k, c]` pairs
//! meaning `Σ c·ek`, with 1-based `k`. A system may carry an optional
//! 1-based `unit_index`; it must name the unit found in the table.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use hcs_core::catalog::check_unique_names;
use hcs_core::{Cell, HnsDef, Term};
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

#[derive(thiserror::Error, Debug)]
pub enum CatalogError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}, column {column} (field `{field}`): {message}")]
    Parse {
        line: usize,
        column: usize,
        field: String,
        message: String,
    },

    #[error("unsupported catalog version {0} (expected {FORMAT_VERSION})")]
    UnsupportedVersion(u32),

    #[error("invalid system `{system}`: {detail}")]
    Validation { system: String, detail: String },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileRepr {
    version: u32,
    systems: Vec<SystemRepr>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemRepr {
    name: String,
    dim: usize,
    table: Vec<Vec<Vec<(usize, f64)>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    unit_index: Option<usize>,
}

/// An in-memory catalog.
#[derive(Debug, Clone, PartialEq)]
pub struct CatalogFile {
    pub version: u32,
    pub systems: Vec<HnsDef>,
}

impl CatalogFile {
    pub fn new(systems: Vec<HnsDef>) -> Self {
        Self {
            version: FORMAT_VERSION,
            systems,
        }
    }

    pub fn names(&self) -> Vec<&str> {
        self.systems.iter().map(HnsDef::name).collect()
    }

    pub fn from_json(text: &str) -> Result<Self, CatalogError> {
        let mut de = serde_json::Deserializer::from_str(text);
        let repr: FileRepr = serde_path_to_error::deserialize(&mut de).map_err(|err| {
            let field = err.path().to_string();
            let inner = err.into_inner();
            CatalogError::Parse {
                line: inner.line(),
                column: inner.column(),
                field,
                message: inner.to_string(),
            }
        })?;
        if repr.version != FORMAT_VERSION {
            return Err(CatalogError::UnsupportedVersion(repr.version));
        }
        let systems = repr
            .systems
            .into_iter()
            .map(system_from_repr)
            .collect::<Result<Vec<_>, _>>()?;
        check_unique_names(&systems).map_err(|err| CatalogError::Validation {
            system: match &err {
                hcs_core::Error::DuplicateName(name) => name.clone(),
                _ => String::new(),
            },
            detail: err.to_string(),
        })?;
        Ok(Self {
            version: repr.version,
            systems,
        })
    }

    pub fn to_json(&self) -> String {
        let repr = FileRepr {
            version: self.version,
            systems: self.systems.iter().map(system_to_repr).collect(),
        };
        let mut text = serde_json::to_string_pretty(&repr).expect("catalog serializes");
        text.push('\n');
        text
    }

    pub fn load(path: &Path) -> Result<Self, CatalogError> {
        let text = fs::read_to_string(path).map_err(|source| CatalogError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// Writes the whole file to a sibling temporary and renames it into place.
    pub fn save(&self, path: &Path) -> Result<(), CatalogError> {
        let io_err = |source| CatalogError::Io {
            path: path.to_path_buf(),
            source,
        };
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p,
            _ => Path::new("."),
        };
        fs::create_dir_all(dir).map_err(io_err)?;
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
        tmp.write_all(self.to_json().as_bytes()).map_err(io_err)?;
        tmp.as_file().sync_all().map_err(io_err)?;
        tmp.persist(path).map_err(|e| io_err(e.error))?;
        Ok(())
    }

    /// Adds systems from `other`. A name already present must carry an
    /// identical table; it is then skipped.
    pub fn merge(&mut self, other: CatalogFile) -> Result<usize, CatalogError> {
        let mut added = 0;
        for system in other.systems {
            match self.systems.iter().find(|s| s.name() == system.name()) {
                Some(existing) if *existing == system => {}
                Some(_) => {
                    return Err(CatalogError::Validation {
                        system: system.name().to_string(),
                        detail: "a different system with this name already exists".to_string(),
                    })
                }
                None => {
                    self.systems.push(system);
                    added += 1;
                }
            }
        }
        Ok(added)
    }
}

fn system_from_repr(repr: SystemRepr) -> Result<HnsDef, CatalogError> {
    let invalid = |detail: String| CatalogError::Validation {
        system: repr.name.clone(),
        detail,
    };
    if repr.dim != repr.table.len() {
        return Err(invalid(format!(
            "dim is {} but the table has {} rows",
            repr.dim,
            repr.table.len()
        )));
    }
    let mut table: Vec<Vec<Cell>> = Vec::with_capacity(repr.table.len());
    for (i, row) in repr.table.iter().enumerate() {
        let mut cells = Vec::with_capacity(row.len());
        for (j, cell) in row.iter().enumerate() {
            let mut terms = Vec::with_capacity(cell.len());
            for &(k, c) in cell {
                if k == 0 {
                    return Err(invalid(format!(
                        "cell (e{}, e{}): target index 0, indices start at 1",
                        i + 1,
                        j + 1
                    )));
                }
                terms.push(Term::new(k - 1, c));
            }
            cells.push(terms);
        }
        table.push(cells);
    }
    let built = match repr.unit_index {
        Some(0) => return Err(invalid("unit_index 0, indices start at 1".to_string())),
        Some(u) => HnsDef::with_declared_unit(repr.name.clone(), table, u - 1),
        None => HnsDef::new(repr.name.clone(), table),
    };
    built.map_err(|err| invalid(err.to_string()))
}

fn system_to_repr(hns: &HnsDef) -> SystemRepr {
    SystemRepr {
        name: hns.name().to_string(),
        dim: hns.dim(),
        table: hns
            .rows()
            .map(|row| {
                row.iter()
                    .map(|cell| cell.iter().map(|t| (t.index + 1, t.coeff)).collect())
                    .collect()
            })
            .collect(),
        unit_index: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hcs_core::builtin_systems;

    #[test]
    fn builtins_round_trip_through_text() {
        let catalog = CatalogFile::new(builtin_systems());
        let text = catalog.to_json();
        assert_eq!(CatalogFile::from_json(&text).unwrap(), catalog);
    }

    #[test]
    fn layout_is_three_level() {
        let catalog = CatalogFile::new(vec![hcs_core::cyclic_group_algebra(2).unwrap()]);
        let value: serde_json::Value = serde_json::from_str(&catalog.to_json()).unwrap();
        assert_eq!(
            value,
            serde_json::json!({
                "version": 1,
                "systems": [{
                    "name": "Z2",
                    "dim": 2,
                    "table": [[[[1, 1.0]], [[2, 1.0]]], [[[2, 1.0]], [[1, 1.0]]]]
                }]
            })
        );
    }

    fn system_json(name: &str, table: &str) -> String {
        format!(
            r#"{{"version": 1, "systems": [{{"name": "{name}", "dim": 2, "table": {table}}}]}}"#
        )
    }

    #[test]
    fn out_of_range_index_names_system_and_cell() {
        let text = system_json(
            "bad",
            "[[[[1, 1.0]], [[2, 1.0]]], [[[2, 1.0]], [[3, 1.0]]]]",
        );
        let err = CatalogFile::from_json(&text).unwrap_err();
        match &err {
            CatalogError::Validation { system, detail } => {
                assert_eq!(system, "bad");
                assert!(detail.contains("(e2, e2)"), "{detail}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_index_is_rejected() {
        let text = system_json("z", "[[[[0, 1.0]], []], [[], []]]");
        assert!(matches!(
            CatalogFile::from_json(&text),
            Err(CatalogError::Validation { .. })
        ));
    }

    #[test]
    fn declared_unit_is_checked() {
        let good = r#"{"version": 1, "systems": [{"name": "Z2", "dim": 2, "unit_index": 1,
            "table": [[[[1, 1.0]], [[2, 1.0]]], [[[2, 1.0]], [[1, 1.0]]]]}]}"#;
        assert!(CatalogFile::from_json(good).is_ok());
        let bad = good.replace(r#""unit_index": 1"#, r#""unit_index": 2"#);
        assert!(matches!(
            CatalogFile::from_json(&bad),
            Err(CatalogError::Validation { .. })
        ));
    }

    #[test]
    fn malformed_json_reports_position_and_field() {
        let text =
            "{\"version\": 1,\n \"systems\": [{\"name\": \"x\", \"dim\": \"two\", \"table\": []}]}";
        match CatalogFile::from_json(text).unwrap_err() {
            CatalogError::Parse { line, field, .. } => {
                assert_eq!(line, 2);
                assert_eq!(field, "systems[0].dim");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn version_and_duplicates() {
        let text = r#"{"version": 2, "systems": []}"#;
        assert!(matches!(
            CatalogFile::from_json(text),
            Err(CatalogError::UnsupportedVersion(2))
        ));
        let one = r#"{"name": "A", "dim": 1, "table": [[[[1, 1.0]]]]}"#;
        let dup = format!(r#"{{"version": 1, "systems": [{one}, {one}]}}"#);
        assert!(matches!(
            CatalogFile::from_json(&dup),
            Err(CatalogError::Validation { .. })
        ));
    }

    #[test]
    fn merge_skips_identical_and_rejects_conflicts() {
        let mut base = CatalogFile::new(builtin_systems());
        assert_eq!(base.merge(CatalogFile::new(builtin_systems())).unwrap(), 0);
        let other = CatalogFile::from_json(&system_json(
            "G47",
            "[[[[1, 1.0]], [[2, 1.0]]], [[[2, 1.0]], [[1, 1.0]]]]",
        ))
        .unwrap();
        assert!(base.merge(other).is_err());
    }
}
