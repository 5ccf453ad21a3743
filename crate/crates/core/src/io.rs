//! JSON files for semirings and semilattices.

use std::fs;
use std::path::Path;

use serde::Deserialize;

use crate::algebra::{FiniteAiSemiring, SemiringTables};
use crate::error::{Error, Result};
use crate::semilattice::{Semilattice, SemilatticeFile};

/// Parses and validates a semiring file.
pub fn semiring_from_str(text: &str) -> Result<FiniteAiSemiring> {
    FiniteAiSemiring::new(serde_json::from_str::<SemiringTables>(text)?)
}

pub fn semilattice_from_str(text: &str) -> Result<Semilattice> {
    Semilattice::from_file(&serde_json::from_str::<SemilatticeFile>(text)?)
}

/// Keys in the order `name, elements, add, mul`.
pub fn semiring_to_string(s: &FiniteAiSemiring) -> String {
    serde_json::to_string_pretty(&s.to_tables()).expect("tables serialize")
}

pub fn semilattice_to_string(a: &Semilattice) -> String {
    serde_json::to_string_pretty(&a.to_file()).expect("file serializes")
}

pub fn read_semiring(path: impl AsRef<Path>) -> Result<FiniteAiSemiring> {
    semiring_from_str(&fs::read_to_string(path)?)
}

pub fn read_semilattice(path: impl AsRef<Path>) -> Result<Semilattice> {
    semilattice_from_str(&fs::read_to_string(path)?)
}

/// Either kind of file, told apart by its keys.
pub enum AnyFile {
    Semiring(FiniteAiSemiring),
    Semilattice(Semilattice),
}

pub fn any_from_str(text: &str) -> Result<AnyFile> {
    #[derive(Deserialize)]
    struct Keys {
        covers: Option<serde_json::Value>,
        add: Option<serde_json::Value>,
    }
    let keys: Keys = serde_json::from_str(text)?;
    match (keys.covers.is_some(), keys.add.is_some()) {
        (true, false) => Ok(AnyFile::Semilattice(semilattice_from_str(text)?)),
        (false, true) => Ok(AnyFile::Semiring(semiring_from_str(text)?)),
        _ => Err(Error::Input("file is neither a semiring nor a semilattice".into())),
    }
}
