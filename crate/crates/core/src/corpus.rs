//! Bundled example corpus: one action file per entry plus cross-entry assertions.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::ActionFile;

include!(concat!(env!("OUT_DIR"), "/corpus_files.rs"));

const ASSERTIONS: &str = include_str!("../corpus/assertions.json");

/// Facts relating corpus entries to each other or to printed matrices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Assertion {
    /// `generators[generator] == Σ coeffs[k] · generators[variable]^k`.
    PolynomialRelation {
        example: String,
        entry: String,
        generator: usize,
        variable: usize,
        coeffs: Vec<i64>,
    },
    /// Ascending coefficients of the characteristic polynomial.
    Charpoly {
        example: String,
        entry: String,
        generator: usize,
        poly: Vec<i64>,
    },
    /// `V·A_i·V⁻¹ == B_i` for every generator.
    Conjugator {
        example: String,
        from: String,
        to: String,
        matrix: Vec<Vec<i64>>,
    },
    /// Non-cyclicity certificate: the nonzero coefficients of the cubic form, up to sign.
    CubicForm {
        example: String,
        entry: String,
        prime: u64,
        coefficients: Vec<i64>,
    },
    Square {
        example: String,
        entry: String,
        generator: usize,
        root: Vec<Vec<i64>>,
    },
    NotSquareMod2 {
        example: String,
        entry: String,
        generator: usize,
    },
    /// Pairwise conjugacy over Q.
    RationallyConjugate {
        example: String,
        entries: Vec<String>,
    },
    /// Entropy functions agree on the grid `‖n‖∞ ≤ 3`.
    EntropyEqual {
        example: String,
        entries: Vec<String>,
    },
    /// `first ∘ c` is conjugate over Q to `second`.
    TimeChange {
        example: String,
        first: String,
        second: String,
        c: Vec<Vec<i64>>,
    },
    Compare {
        example: String,
        first: String,
        second: String,
        weakly_isomorphic: bool,
        /// Expected prefix of the distinguishing invariant.
        distinguishing: String,
    },
}

impl Assertion {
    pub fn example(&self) -> &str {
        match self {
            Assertion::PolynomialRelation { example, .. }
            | Assertion::Charpoly { example, .. }
            | Assertion::Conjugator { example, .. }
            | Assertion::CubicForm { example, .. }
            | Assertion::Square { example, .. }
            | Assertion::NotSquareMod2 { example, .. }
            | Assertion::RationallyConjugate { example, .. }
            | Assertion::EntropyEqual { example, .. }
            | Assertion::TimeChange { example, .. }
            | Assertion::Compare { example, .. } => example,
        }
    }

    /// Corpus entries the assertion refers to.
    pub fn entries(&self) -> Vec<&str> {
        match self {
            Assertion::PolynomialRelation { entry, .. }
            | Assertion::Charpoly { entry, .. }
            | Assertion::CubicForm { entry, .. }
            | Assertion::Square { entry, .. }
            | Assertion::NotSquareMod2 { entry, .. } => vec![entry],
            Assertion::Conjugator { from, to, .. } => vec![from, to],
            Assertion::RationallyConjugate { entries, .. } | Assertion::EntropyEqual { entries, .. } => {
                entries.iter().map(String::as_str).collect()
            }
            Assertion::TimeChange { first, second, .. } | Assertion::Compare { first, second, .. } => {
                vec![first, second]
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Corpus {
    /// Sorted by file name.
    pub entries: Vec<ActionFile>,
    pub assertions: Vec<Assertion>,
}

impl Corpus {
    pub fn bundled() -> Result<Corpus> {
        let entries = ACTION_FILES
            .iter()
            .map(|(name, text)| ActionFile::from_json(text).map_err(|e| Error::Parse(format!("{name}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        let assertions = parse_assertions(ASSERTIONS)?;
        Corpus::new(entries, assertions)
    }

    /// Reads `dir/actions/*.json` and `dir/assertions.json` (optional).
    pub fn load_dir(dir: &Path) -> Result<Corpus> {
        let actions = dir.join("actions");
        let mut paths: Vec<_> = std::fs::read_dir(&actions)
            .map_err(|e| Error::Io(format!("{}: {e}", actions.display())))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        let entries = paths.iter().map(|p| ActionFile::from_path(p)).collect::<Result<Vec<_>>>()?;
        let assertion_path = dir.join("assertions.json");
        let assertions = if assertion_path.exists() {
            parse_assertions(&std::fs::read_to_string(&assertion_path)?)?
        } else {
            Vec::new()
        };
        Corpus::new(entries, assertions)
    }

    fn new(entries: Vec<ActionFile>, assertions: Vec<Assertion>) -> Result<Corpus> {
        let c = Corpus { entries, assertions };
        for a in &c.assertions {
            for e in a.entries() {
                if c.get(e).is_none() {
                    return Err(Error::Validation(format!(
                        "assertion for example {} names unknown entry {e}",
                        a.example()
                    )));
                }
            }
        }
        Ok(c)
    }

    pub fn get(&self, name: &str) -> Option<&ActionFile> {
        self.entries.iter().find(|e| e.name == name)
    }
}

fn parse_assertions(text: &str) -> Result<Vec<Assertion>> {
    Ok(serde_json::from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_corpus_parses_and_round_trips() {
        let c = Corpus::bundled().unwrap();
        assert_eq!(c.entries.len(), 15);
        for (file, text) in ACTION_FILES {
            let f = ActionFile::from_json(text).unwrap();
            assert_eq!(format!("{}.json", f.name), *file);
            assert_eq!(f.to_canonical_json(), *text, "{file} is not in canonical form");
        }
    }

    #[test]
    fn every_field_block_reproduces_its_generators() {
        let c = Corpus::bundled().unwrap();
        for e in c.entries.iter().filter(|e| e.field.is_some()) {
            let data = e.field_data().unwrap().unwrap();
            let lattice = e.field.as_ref().unwrap().lattice.clone().unwrap();
            let a = data.construct(&lattice).unwrap();
            assert_eq!(a.generators(), e.matrices().unwrap().as_slice(), "{}", e.name);
        }
    }
}
