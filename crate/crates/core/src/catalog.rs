//! Bundled named diagrams and their expected invariant data.
//!
//! The fixture is `data/catalog.toml`, compiled into the binary. Entries in
//! its `external` section may lack a Gauss code; those are reported as
//! skipped rather than failed. A file with the same layout named by
//! `FLATCOLOR_EXTERNAL_CATALOG` can supply the missing codes.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::invariant;
use crate::gauss::{GaussDiagram, GaussError};
use crate::laurent::LaurentPoly;

const BUNDLED: &str = include_str!("../data/catalog.toml");

pub const EXTERNAL_ENV: &str = "FLATCOLOR_EXTERNAL_CATALOG";

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("no catalog entry named '{0}'")]
    NotFound(String),
    #[error("catalog is malformed: {0}")]
    Format(String),
    #[error("entry '{name}': {source}")]
    Code { name: String, source: GaussError },
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Deserialize)]
struct RawCatalog {
    #[serde(default)]
    entry: Vec<RawEntry>,
    #[serde(default)]
    external: Vec<RawEntry>,
}

#[derive(Deserialize)]
struct RawEntry {
    name: String,
    code: Option<String>,
    source: String,
    #[serde(default)]
    vanishes: bool,
    f_polys: Option<Vec<String>>,
    upoly: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Expected {
    pub vanishes: bool,
    /// `f_1, f_2, ...` up to and including the first nonzero one.
    pub f_polys: Vec<LaurentPoly>,
    pub upoly: Option<LaurentPoly>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub code: Option<GaussDiagram>,
    pub source: String,
    pub external: bool,
    pub expected: Expected,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "detail", rename_all = "lowercase")]
pub enum EntryCheck {
    Pass,
    Fail(String),
    Skipped(String),
}

impl fmt::Display for EntryCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntryCheck::Pass => write!(f, "pass"),
            EntryCheck::Fail(why) => write!(f, "FAIL: {why}"),
            EntryCheck::Skipped(why) => write!(f, "skipped: {why}"),
        }
    }
}

impl CatalogEntry {
    /// Compares the entry's expectations with a fresh computation at
    /// `order`.
    pub fn check(&self, order: usize) -> EntryCheck {
        let Some(d) = &self.code else {
            return EntryCheck::Skipped(format!("no Gauss code available for {}", self.name));
        };
        let r = invariant(d, order);
        let exp = &self.expected;
        if let Some(u) = &exp.upoly {
            if r.upoly.as_laurent() != u {
                return EntryCheck::Fail(format!("u-polynomial {} != expected {u}", r.upoly));
            }
        }
        if exp.vanishes && !r.representative.is_zero() {
            return EntryCheck::Fail(format!("F = {} is not 0", r.representative));
        }
        if !exp.f_polys.is_empty() {
            let want = &exp.f_polys[..order.min(exp.f_polys.len())];
            if r.defined_polys != want {
                return EntryCheck::Fail(format!(
                    "coloring polynomials {:?} != expected {:?}",
                    r.defined_polys.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                    want.iter().map(|p| p.to_string()).collect::<Vec<_>>()
                ));
            }
        }
        EntryCheck::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

fn poly(name: &str, text: &str) -> Result<LaurentPoly, CatalogError> {
    text.parse()
        .map_err(|e| CatalogError::Format(format!("entry '{name}': {e}")))
}

fn convert(raw: RawEntry, external: bool) -> Result<CatalogEntry, CatalogError> {
    let code = match &raw.code {
        Some(text) => Some(text.parse().map_err(|source| CatalogError::Code {
            name: raw.name.clone(),
            source,
        })?),
        None => None,
    };
    let f_polys = raw
        .f_polys
        .iter()
        .flatten()
        .map(|p| poly(&raw.name, p))
        .collect::<Result<_, _>>()?;
    let upoly = raw.upoly.as_deref().map(|p| poly(&raw.name, p)).transpose()?;
    Ok(CatalogEntry {
        name: raw.name,
        code,
        source: raw.source,
        external,
        expected: Expected {
            vanishes: raw.vanishes,
            f_polys,
            upoly,
        },
    })
}

impl Catalog {
    pub fn from_toml(text: &str) -> Result<Self, CatalogError> {
        let raw: RawCatalog = toml::from_str(text).map_err(|e| CatalogError::Format(e.to_string()))?;
        let mut entries = Vec::new();
        for e in raw.entry {
            entries.push(convert(e, false)?);
        }
        for e in raw.external {
            entries.push(convert(e, true)?);
        }
        Ok(Self { entries })
    }

    /// The compiled-in fixture.
    pub fn bundled() -> Self {
        Self::from_toml(BUNDLED).expect("bundled catalog is valid")
    }

    /// The bundled fixture, plus the overlay named by
    /// `FLATCOLOR_EXTERNAL_CATALOG` when that variable is set.
    pub fn load() -> Result<Self, CatalogError> {
        let mut c = Self::bundled();
        if let Some(path) = std::env::var_os(EXTERNAL_ENV) {
            c.merge_file(Path::new(&path))?;
        }
        Ok(c)
    }

    pub fn merge_file(&mut self, path: &Path) -> Result<(), CatalogError> {
        let text = std::fs::read_to_string(path).map_err(|source| CatalogError::Io {
            path: path.display().to_string(),
            source,
        })?;
        self.merge(Catalog::from_toml(&text)?);
        Ok(())
    }

    /// Entries of `other` replace same-named entries here; an overlay entry
    /// without a code keeps the existing code.
    pub fn merge(&mut self, other: Catalog) {
        for mut e in other.entries {
            match self.entries.iter_mut().find(|x| x.name == e.name) {
                Some(existing) => {
                    if e.code.is_none() {
                        e.code = existing.code.take();
                    }
                    *existing = e;
                }
                None => self.entries.push(e),
            }
        }
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn lookup(&self, name: &str) -> Result<&CatalogEntry, CatalogError> {
        self.entries
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| CatalogError::NotFound(name.to_string()))
    }
}
