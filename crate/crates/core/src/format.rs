//! JSON file format for actions and number-field data.
//!
//! Polynomials are ascending coefficient lists and rationals are `[num, den]` pairs.
//! Field order is fixed by the struct layout and lattices are kept in a sorted map, so
//! [`ActionFile::to_canonical_json`] is stable.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::action::ZdAction;
use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, RatMatrix};
use crate::numberfield::{construct_action, Field, LatticeBasis, NFElement, NumberField};
use crate::poly::IntPoly;

/// `[numerator, denominator]`.
pub type Frac = [i64; 2];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub example: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub dim: usize,
    pub rank: usize,
    /// Row-major integer matrices.
    pub generators: Vec<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldBlock>,
    /// Matrices as printed in the source when they disagree with the field data.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub printed_errata: Vec<Erratum>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expectations: Option<Expectations>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldBlock {
    /// Monic minimal polynomial, ascending.
    pub min_poly: Vec<i64>,
    /// Units as polynomials in the generator of the field.
    pub units: Vec<Vec<Frac>>,
    /// Named lattices, each a list of field elements.
    #[serde(default)]
    pub lattices: BTreeMap<String, Vec<Vec<Frac>>>,
    /// Lattice the generators act on.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Erratum {
    pub generator: usize,
    pub printed: Vec<Vec<i64>>,
}

/// Facts asserted by `verify-paper`; ignored elsewhere.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectations {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_points: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cyclic: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maximal: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cartan: Option<bool>,
    /// Entries of one example with equal tags must have equivalent ideal classes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal_class_tag: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub commutant_rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub commutant_abelian: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub affine_torsion_order: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub affine_index: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub affine_structure: Option<String>,
}

/// Field data resolved into exact objects.
#[derive(Clone, Debug)]
pub struct FieldData {
    pub field: Field,
    pub units: Vec<NFElement>,
    pub lattices: BTreeMap<String, LatticeBasis>,
}

impl FieldData {
    pub fn lattice(&self, name: &str) -> Result<&LatticeBasis> {
        self.lattices.get(name).ok_or_else(|| {
            let known: Vec<&str> = self.lattices.keys().map(String::as_str).collect();
            Error::Validation(format!("unknown lattice {name:?} (known: {})", known.join(", ")))
        })
    }

    /// Multiplication by the units on the named lattice.
    pub fn construct(&self, lattice: &str) -> Result<ZdAction> {
        construct_action(&self.field, &self.units, self.lattice(lattice)?)
    }
}

fn frac(f: &Frac) -> Result<BigRational> {
    if f[1] == 0 {
        return Err(Error::Validation(format!("zero denominator in [{}, {}]", f[0], f[1])));
    }
    Ok(BigRational::new(BigInt::from(f[0]), BigInt::from(f[1])))
}

fn canonical_frac(f: &Frac) -> Frac {
    let g = f[0].gcd(&f[1]).max(1);
    let s = if f[1] < 0 { -1 } else { 1 };
    [s * f[0] / g, s * f[1] / g]
}

fn canonical_poly(p: &[Frac]) -> Vec<Frac> {
    let mut out: Vec<Frac> = p.iter().map(canonical_frac).collect();
    while out.len() > 1 && out.last().is_some_and(|f| f[0] == 0) {
        out.pop();
    }
    if out.is_empty() {
        out.push([0, 1]);
    }
    out
}

pub fn matrix_from_rows(rows: &[Vec<i64>]) -> Result<IntMatrix> {
    IntMatrix::from_rows(rows)
}

impl FieldBlock {
    pub fn canonical(&self) -> FieldBlock {
        FieldBlock {
            min_poly: self.min_poly.clone(),
            units: self.units.iter().map(|u| canonical_poly(u)).collect(),
            lattices: self
                .lattices
                .iter()
                .map(|(k, v)| (k.clone(), v.iter().map(|e| canonical_poly(e)).collect()))
                .collect(),
            lattice: self.lattice.clone(),
        }
    }

    pub fn resolve(&self) -> Result<FieldData> {
        let field = NumberField::new(IntPoly::from_i64(&self.min_poly))?;
        let n = field.degree();
        let element = |e: &[Frac]| -> Result<NFElement> {
            if e.iter().any(|f| f[1] == 0) {
                return Err(Error::Validation("zero denominator".into()));
            }
            let e = canonical_poly(e);
            if e.len() > n {
                return Err(Error::Validation(format!("element with {} coefficients in a degree-{n} field", e.len())));
            }
            let coeffs = e.iter().map(frac).collect::<Result<Vec<_>>>()?;
            Ok(NFElement::from_coeffs(&field, coeffs))
        };
        let units = self.units.iter().map(|u| element(u)).collect::<Result<Vec<_>>>()?;
        let mut lattices = BTreeMap::new();
        for (name, rows) in &self.lattices {
            let elems = rows.iter().map(|r| element(r)).collect::<Result<Vec<_>>>()?;
            let lat = LatticeBasis::from_elements(&field, &elems)
                .map_err(|e| Error::Validation(format!("lattice {name:?}: {e}")))?;
            lattices.insert(name.clone(), lat);
        }
        Ok(FieldData { field, units, lattices })
    }
}

impl ActionFile {
    pub fn from_json(text: &str) -> Result<ActionFile> {
        let file: ActionFile = serde_json::from_str(text)?;
        file.check_shape()?;
        Ok(file)
    }

    pub fn from_path(path: &std::path::Path) -> Result<ActionFile> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        ActionFile::from_json(&text).map_err(|e| match e {
            Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
            Error::Validation(m) => Error::Validation(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Checks the declared `dim`/`rank` against the matrices.
    pub fn check_shape(&self) -> Result<()> {
        if self.generators.len() != self.rank {
            return Err(Error::Validation(format!(
                "rank is {} but {} generators are listed",
                self.rank,
                self.generators.len()
            )));
        }
        for (i, g) in self.generators.iter().enumerate() {
            if g.len() != self.dim || g.iter().any(|r| r.len() != self.dim) {
                return Err(Error::Validation(format!("generator {i} is not {0} x {0}", self.dim)));
            }
        }
        Ok(())
    }

    pub fn matrices(&self) -> Result<Vec<IntMatrix>> {
        self.check_shape()?;
        self.generators.iter().map(|g| matrix_from_rows(g)).collect()
    }

    /// Validated action (unimodular, commuting generators).
    pub fn to_action(&self) -> Result<ZdAction> {
        ZdAction::new(self.matrices()?)
    }

    pub fn field_data(&self) -> Result<Option<FieldData>> {
        self.field.as_ref().map(FieldBlock::resolve).transpose()
    }

    pub fn canonical(&self) -> ActionFile {
        let mut out = self.clone();
        out.field = self.field.as_ref().map(FieldBlock::canonical);
        out.printed_errata.sort_by_key(|e| e.generator);
        out
    }

    pub fn to_canonical_json(&self) -> String {
        to_json_text(&self.canonical())
    }

    /// File with generators taken from an action.
    pub fn from_action(name: &str, a: &ZdAction) -> Result<ActionFile> {
        let generators = a
            .generators()
            .iter()
            .map(|g| g.to_i64_rows().ok_or_else(|| Error::Unsupported("matrix entry exceeds i64".into())))
            .collect::<Result<Vec<_>>>()?;
        Ok(ActionFile {
            name: name.to_string(),
            example: None,
            description: None,
            dim: a.dim(),
            rank: a.rank(),
            generators,
            field: None,
            printed_errata: Vec::new(),
            expectations: None,
        })
    }
}

/// Field description accepted by `construct`: either a bare field block with an
/// optional `name`, or an action file carrying one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub min_poly: Vec<i64>,
    pub units: Vec<Vec<Frac>>,
    #[serde(default)]
    pub lattices: BTreeMap<String, Vec<Vec<Frac>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<String>,
}

pub fn parse_field_source(text: &str) -> Result<(String, FieldBlock)> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if value.get("generators").is_some() {
        let file = ActionFile::from_json(text)?;
        let block =
            file.field.ok_or_else(|| Error::Validation(format!("action file {:?} has no field block", file.name)))?;
        return Ok((file.name, block));
    }
    let f: FieldFile = serde_json::from_str(text)?;
    let name = f.name.unwrap_or_else(|| "field".into());
    Ok((name, FieldBlock { min_poly: f.min_poly, units: f.units, lattices: f.lattices, lattice: f.lattice }))
}

/// Builds the action file for `lattice` from a field block.
pub fn construct_file(name: &str, block: &FieldBlock, lattice: &str) -> Result<ActionFile> {
    let data = block.resolve()?;
    let a = data.construct(lattice)?;
    let mut file = ActionFile::from_action(&format!("{name}_{lattice}"), &a)?;
    let mut field = block.canonical();
    field.lattice = Some(lattice.to_string());
    file.field = Some(field);
    Ok(file)
}

/// Pretty JSON with numeric rows and matrices kept on one line.
pub fn to_json_text<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("plain data");
    let mut out = String::new();
    render(&v, 0, &mut out);
    out.push('\n');
    out
}

fn nesting(v: &serde_json::Value) -> Option<usize> {
    match v {
        serde_json::Value::Object(_) => None,
        serde_json::Value::Array(items) => {
            items.iter().try_fold(0, |acc, x| nesting(x).map(|d| acc.max(d))).map(|d| d + 1)
        }
        _ => Some(0),
    }
}

fn render(v: &serde_json::Value, indent: usize, out: &mut String) {
    use serde_json::Value;
    let pad = |k: usize| "  ".repeat(k);
    match v {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if nesting(v).is_some_and(|d| d <= 2) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                render(x, indent, out);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                render(x, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(k).expect("string"));
                out.push_str(": ");
                render(x, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

/// Rational matrix from `[num, den]` rows.
pub fn rat_matrix(rows: &[Vec<Frac>]) -> Result<RatMatrix> {
    let rows = rows.iter().map(|r| r.iter().map(frac).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
    RatMatrix::from_rows(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{
  "name": "t",
  "dim": 2,
  "rank": 1,
  "generators": [[[2, 1], [1, 1]]],
  "field": {
    "min_poly": [-1, -3, 1],
    "units": [[[0, 1], [1, 1], [0, 5]]],
    "lattices": {"power_basis": [[[2, 2]], [[0, 1], [3, 3]]]}
  }
}"#;

    #[test]
    fn canonical_form_reduces_fractions_and_trims() {
        let f = ActionFile::from_json(SAMPLE).unwrap();
        let c = f.canonical();
        let fb = c.field.unwrap();
        assert_eq!(fb.units[0], vec![[0, 1], [1, 1]]);
        assert_eq!(fb.lattices["power_basis"][0], vec![[1, 1]]);
        let again = ActionFile::from_json(&f.to_canonical_json()).unwrap();
        assert_eq!(again.to_canonical_json(), f.to_canonical_json());
    }

    #[test]
    fn shape_errors_are_reported() {
        let bad = SAMPLE.replace("\"rank\": 1", "\"rank\": 2");
        assert!(matches!(ActionFile::from_json(&bad), Err(Error::Validation(_))));
        let bad = SAMPLE.replace("\"dim\": 2", "\"dmi\": 2");
        match ActionFile::from_json(&bad) {
            Err(Error::Parse(m)) => assert!(m.contains("line"), "{m}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn quadratic_field_constructs_the_companion_matrix() {
        let f = ActionFile::from_json(SAMPLE).unwrap();
        let data = f.field_data().unwrap().unwrap();
        let a = data.construct("power_basis").unwrap();
        assert_eq!(a.generator(0), &IntMatrix::from_i64(&[&[0, 1], &[1, 3]]));
    }
}
