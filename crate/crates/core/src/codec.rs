//! Deterministic JSON encodings.
//!
//! Product schema:
//! `{"n": 3, "field": "Q", "entries": [{"a": [1,2], "b": [2,3],
//!   "out": [[[1,3], "1"]]}, ...]}`
//! with entries sorted by `(a, b)` and each `out` list sorted by
//! coordinate. Scalars are strings: `"p/q"` (or `"p"`) over the
//! rationals, a decimal residue over a prime field. Reading a file we
//! wrote and writing it again is byte-identical.

use serde::{Deserialize, Serialize};

use crate::algebra::{BasisIndex, Dimension, Element, Product};
use crate::error::{Error, Result};
use crate::identities::KernelBasis;
use crate::scalar::{FieldSpec, Scalar};

#[derive(Serialize, Deserialize)]
struct ProductWire {
    n: u32,
    field: String,
    entries: Vec<EntryWire>,
}

#[derive(Serialize, Deserialize)]
struct EntryWire {
    a: [u32; 2],
    b: [u32; 2],
    out: Vec<([u32; 2], String)>,
}

#[derive(Serialize)]
struct KernelWire {
    kind: String,
    n: u32,
    field: String,
    dimension: usize,
    pivots: Vec<usize>,
    basis: Vec<ProductWire>,
}

fn element_to_out(e: &Element) -> Vec<([u32; 2], String)> {
    e.iter().map(|(b, c)| ([b.i(), b.j()], c.to_string())).collect()
}

fn element_from_out(
    n: Dimension,
    field: FieldSpec,
    out: &[([u32; 2], String)],
) -> Result<Element> {
    let mut coeffs = Vec::with_capacity(out.len());
    let mut last: Option<BasisIndex> = None;
    for ([i, j], text) in out {
        let b = BasisIndex::new(*i, *j)?;
        if !n.contains(b) {
            return Err(Error::BadBasisIndex(*i, *j));
        }
        if let Some(prev) = last {
            if prev >= b {
                return Err(Error::Decode(format!(
                    "output coordinates not strictly increasing at ({i},{j})"
                )));
            }
        }
        last = Some(b);
        coeffs.push((b, Scalar::parse(text, field)?));
    }
    Element::from_coeffs(n, field, coeffs)
}

fn product_to_wire(p: &Product) -> ProductWire {
    ProductWire {
        n: p.n().n(),
        field: p.field().to_string(),
        entries: p
            .entries()
            .map(|((a, b), v)| EntryWire {
                a: [a.i(), a.j()],
                b: [b.i(), b.j()],
                out: element_to_out(v),
            })
            .collect(),
    }
}

fn product_from_wire(wire: &ProductWire) -> Result<Product> {
    let n = Dimension::new(wire.n)?;
    let field = FieldSpec::parse(&wire.field)?;
    let mut entries = Vec::with_capacity(wire.entries.len());
    let mut last: Option<(BasisIndex, BasisIndex)> = None;
    for e in &wire.entries {
        let a = BasisIndex::new(e.a[0], e.a[1])?;
        let b = BasisIndex::new(e.b[0], e.b[1])?;
        if !n.contains(a) || !n.contains(b) {
            return Err(Error::Decode(format!(
                "entry ({},{})*({},{}) outside UT_{}",
                e.a[0], e.a[1], e.b[0], e.b[1], wire.n
            )));
        }
        if let Some(prev) = last {
            if prev >= (a, b) {
                return Err(Error::Decode("entries not sorted by (a, b)".into()));
            }
        }
        last = Some((a, b));
        entries.push(((a, b), element_from_out(n, field, &e.out)?));
    }
    Product::from_entries(n, field, entries)
}

pub fn product_to_json(p: &Product) -> String {
    serde_json::to_string_pretty(&product_to_wire(p)).expect("product serialization")
}

pub fn product_from_json(text: &str) -> Result<Product> {
    let wire: ProductWire =
        serde_json::from_str(text).map_err(|e| Error::Decode(e.to_string()))?;
    product_from_wire(&wire)
}

pub fn kernel_to_json(k: &KernelBasis) -> String {
    let wire = KernelWire {
        kind: k.kind.short().to_owned(),
        n: k.n.n(),
        field: k.field.to_string(),
        dimension: k.dimension(),
        pivots: k.pivots.clone(),
        basis: k.basis.iter().map(product_to_wire).collect(),
    };
    serde_json::to_string_pretty(&wire).expect("kernel serialization")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::make_family;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn product_json_roundtrip_is_bit_exact() {
        let n = Dimension::new(4).unwrap();
        let p = Product::canonical(n, q()).scale(&Scalar::ratio(-3, 7).unwrap());
        let text = product_to_json(&p);
        let back = product_from_json(&text).unwrap();
        assert_eq!(back, p);
        assert_eq!(product_to_json(&back), text);
    }

    #[test]
    fn product_json_prime_field() {
        let n = Dimension::new(3).unwrap();
        let f5 = FieldSpec::prime(5).unwrap();
        let p = make_family(&"Mid1[2,1]".parse().unwrap(), n, f5);
        let p = p.unwrap().scale(&f5.integer(3));
        let text = product_to_json(&p);
        assert_eq!(product_from_json(&text).unwrap(), p);
    }

    #[test]
    fn decode_rejects_malformed_input() {
        assert!(product_from_json("{").is_err());
        // n too small
        assert!(product_from_json(r#"{"n":2,"field":"Q","entries":[]}"#).is_err());
        // index outside UT_3
        let bad = r#"{"n":3,"field":"Q","entries":[{"a":[1,4],"b":[1,2],"out":[[[1,3],"1"]]}]}"#;
        assert!(product_from_json(bad).is_err());
        // unsorted entries
        let bad = r#"{"n":3,"field":"Q","entries":[
            {"a":[2,3],"b":[1,2],"out":[[[1,3],"1"]]},
            {"a":[1,2],"b":[1,2],"out":[[[1,3],"1"]]}]}"#;
        assert!(product_from_json(bad).is_err());
        // bad scalar for the field
        let bad = r#"{"n":3,"field":"Fp:5","entries":[{"a":[1,2],"b":[1,2],"out":[[[1,3],"1/2"]]}]}"#;
        assert!(product_from_json(bad).is_err());
    }

    #[test]
    fn kernel_export_contains_basis() {
        use crate::identities::{assemble, kernel, IdentityKind};
        let n = Dimension::new(3).unwrap();
        let kb = kernel(&assemble(IdentityKind::TotallyCompatible, n, q()));
        let text = kernel_to_json(&kb);
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["dimension"], 4);
        assert_eq!(parsed["basis"].as_array().unwrap().len(), 4);
        assert_eq!(parsed["pivots"].as_array().unwrap().len(), 4);
    }
}
