//! The explicit product families that span each identity's solution space,
//! their closed-form counts, and the triple-based constructor that builds
//! the id-matching series from a single value assignment `a * b = c`.
//!
//! Family names follow the bracket grammar used by the CLI:
//! `Mid1[i,j]`, `Mid2[i,j]`, `Mid3[i,j]`, `Mid4[i,j]` (id-matching),
//! `M12_1[i,j]`, `M12_2[i]`, `M12_3[i,j]`, `M12_4` ((12)-matching),
//! `I1[i,j]`, `I2[i]`, `I3[i]`, `I4` (interchangeable),
//! `T1[i,j]`, `T2` (totally compatible).

use std::fmt;
use std::str::FromStr;

use crate::algebra::{BasisIndex, Dimension, Element, Product, UnitizedElement};
use crate::error::{Error, Result};
use crate::identities::IdentityKind;
use crate::scalar::FieldSpec;

/// The fourteen family series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[allow(non_camel_case_types)]
pub enum Series {
    Mid1,
    Mid2,
    Mid3,
    Mid4,
    M12_1,
    M12_2,
    M12_3,
    M12_4,
    I1,
    I2,
    I3,
    I4,
    T1,
    T2,
}

impl Series {
    pub fn kind(self) -> IdentityKind {
        match self {
            Series::Mid1 | Series::Mid2 | Series::Mid3 | Series::Mid4 => IdentityKind::MatchId,
            Series::M12_1 | Series::M12_2 | Series::M12_3 | Series::M12_4 => {
                IdentityKind::MatchTwelve
            }
            Series::I1 | Series::I2 | Series::I3 | Series::I4 => IdentityKind::Interchangeable,
            Series::T1 | Series::T2 => IdentityKind::TotallyCompatible,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Series::Mid1 => "Mid1",
            Series::Mid2 => "Mid2",
            Series::Mid3 => "Mid3",
            Series::Mid4 => "Mid4",
            Series::M12_1 => "M12_1",
            Series::M12_2 => "M12_2",
            Series::M12_3 => "M12_3",
            Series::M12_4 => "M12_4",
            Series::I1 => "I1",
            Series::I2 => "I2",
            Series::I3 => "I3",
            Series::I4 => "I4",
            Series::T1 => "T1",
            Series::T2 => "T2",
        }
    }

    fn arity(self) -> usize {
        match self {
            Series::Mid1 | Series::Mid2 | Series::Mid3 | Series::Mid4 => 2,
            Series::M12_1 | Series::M12_3 | Series::I1 | Series::T1 => 2,
            Series::M12_2 | Series::I2 | Series::I3 => 1,
            Series::M12_4 | Series::I4 | Series::T2 => 0,
        }
    }
}

/// One family member: a series plus its index tuple.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FamilyId {
    pub series: Series,
    pub indices: Vec<u32>,
}

impl FamilyId {
    pub fn new(series: Series, indices: Vec<u32>) -> Result<Self> {
        if indices.len() != series.arity() {
            return Err(Error::InvalidFamily {
                name: series.name().to_owned(),
                reason: format!("takes {} index(es), got {}", series.arity(), indices.len()),
            });
        }
        Ok(FamilyId { series, indices })
    }

    pub fn kind(&self) -> IdentityKind {
        self.series.kind()
    }

    fn invalid(&self, reason: impl Into<String>) -> Error {
        Error::InvalidFamily { name: self.to_string(), reason: reason.into() }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.series.name())?;
        if !self.indices.is_empty() {
            write!(f, "[")?;
            for (k, i) in self.indices.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{i}")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        const ALL: [Series; 14] = [
            Series::Mid1,
            Series::Mid2,
            Series::Mid3,
            Series::Mid4,
            Series::M12_1,
            Series::M12_2,
            Series::M12_3,
            Series::M12_4,
            Series::I1,
            Series::I2,
            Series::I3,
            Series::I4,
            Series::T1,
            Series::T2,
        ];
        let (name, rest) = match text.find('[') {
            Some(k) => (&text[..k], Some(&text[k..])),
            None => (text, None),
        };
        let series = ALL
            .into_iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown family series {name:?}")))?;
        let indices = match rest {
            None => vec![],
            Some(bracketed) => {
                let inner = bracketed
                    .strip_prefix('[')
                    .and_then(|s| s.strip_suffix(']'))
                    .ok_or_else(|| {
                        Error::InvalidInput(format!("malformed family indices in {text:?}"))
                    })?;
                inner
                    .split(',')
                    .map(|p| {
                        p.trim().parse::<u32>().map_err(|_| {
                            Error::InvalidInput(format!("bad family index {p:?} in {text:?}"))
                        })
                    })
                    .collect::<Result<Vec<u32>>>()?
            }
        };
        FamilyId::new(series, indices)
    }
}

fn unit(n: Dimension, field: FieldSpec, i: u32, j: u32) -> Element {
    Element::unit(n, field, BasisIndex::new(i, j).expect("family basis index"))
}

fn bx(i: u32, j: u32) -> BasisIndex {
    BasisIndex::new(i, j).expect("family basis index")
}

/// Builds the table of one family member, enforcing the exact index
/// restrictions of each series.
pub fn make_family(id: &FamilyId, n: Dimension, field: FieldSpec) -> Result<Product> {
    let nn = n.n();
    let mut p = Product::zero(n, field);
    match (id.series, id.indices.as_slice()) {
        (Series::Mid1, &[i, j]) => {
            if !(1 < i && i <= nn && 1 <= j && j < nn) {
                return Err(id.invalid(format!("needs 1 < i <= {nn}, 1 <= j < {nn}")));
            }
            for l in j + 1..=nn {
                p.set_value(bx(i - 1, i), bx(j, l), unit(n, field, 1, l));
            }
        }
        (Series::Mid2, &[i, j]) => {
            if !(1 < i && i <= nn && 1 <= j && j < nn) {
                return Err(id.invalid(format!("needs 1 < i <= {nn}, 1 <= j < {nn}")));
            }
            if (i, j) == (2, nn - 1) {
                return Err(id.invalid(format!(
                    "(i,j) = (2,{}) is excluded: that table already occurs as Mid1[2,{}]",
                    nn - 1,
                    nn - 1
                )));
            }
            for k in 1..i {
                p.set_value(bx(k, i), bx(j, j + 1), unit(n, field, k, nn));
            }
        }
        (Series::Mid3, &[i, j]) => {
            if !(2 < i && i <= j + 1 && j + 1 < nn) {
                return Err(id.invalid(format!("needs 2 < i <= j+1 < {nn}")));
            }
            for k in 1..i {
                for l in j + 1..=nn {
                    p.set_value(bx(k, i), bx(j, l), unit(n, field, k, l));
                }
            }
        }
        (Series::Mid4, &[i, j]) => {
            if !(2 < i && i <= nn && 1 <= j && j < nn - 1) {
                return Err(id.invalid(format!("needs 2 < i <= {nn}, 1 <= j < {}", nn - 1)));
            }
            p.set_value(bx(i - 1, i), bx(j, j + 1), unit(n, field, 1, nn));
        }
        (Series::M12_1, &[i, j]) | (Series::I1, &[i, j]) | (Series::T1, &[i, j]) => {
            if !(1 < i && i <= nn && 1 <= j && j < nn) {
                return Err(id.invalid(format!("needs 1 < i <= {nn}, 1 <= j < {nn}")));
            }
            p.set_value(bx(i - 1, i), bx(j, j + 1), unit(n, field, 1, nn));
        }
        (Series::M12_2, &[i]) => {
            if !(1 <= i && i < nn) {
                return Err(id.invalid(format!("needs 1 <= i < {nn}")));
            }
            p.set_value(bx(1, 2), bx(i, i + 1), unit(n, field, 1, nn - 1));
            p.set_value(bx(i, i + 1), bx(nn - 1, nn), unit(n, field, 2, nn));
        }
        (Series::M12_3, &[i, j]) => {
            if !(1 <= i && i < j && j <= nn && j > i + 2) {
                return Err(id.invalid(format!("needs 1 <= i < j <= {nn} with j > i+2")));
            }
            for k in i + 1..j {
                p.set_value(bx(i, k), bx(k, j), unit(n, field, 1, nn));
            }
        }
        (Series::M12_4, &[]) => {
            if nn == 3 {
                return Err(id.invalid("does not exist on UT_3: the only middle pair is excluded"));
            }
            for a in n.basis() {
                for b in n.basis() {
                    if a.j() == b.i() && !(a.i() == 1 && b.j() == nn) {
                        p.set_value(a, b, unit(n, field, a.i(), b.j()));
                    }
                }
            }
        }
        (Series::I2, &[i]) => {
            if !(1 <= i && i < nn - 1) {
                return Err(id.invalid(format!("needs 1 <= i < {}", nn - 1)));
            }
            p.set_value(bx(1, 2), bx(i, i + 2), unit(n, field, 1, nn));
            p.set_value(bx(i, i + 1), bx(i + 1, i + 2), unit(n, field, 2, nn));
        }
        (Series::I3, &[i]) => {
            if !(1 <= i && i < nn - 1) {
                return Err(id.invalid(format!("needs 1 <= i < {}", nn - 1)));
            }
            p.set_value(bx(i, i + 2), bx(nn - 1, nn), unit(n, field, 1, nn));
            p.set_value(bx(i, i + 1), bx(i + 1, i + 2), unit(n, field, 1, nn - 1));
        }
        (Series::I4, &[]) | (Series::T2, &[]) => {
            p = Product::canonical(n, field);
        }
        _ => unreachable!("arity checked by FamilyId::new"),
    }
    Ok(p)
}

/// Closed-form count of the family basis for `(kind, n)`, with the small-n
/// degenerations folded in.
pub fn expected_count(kind: IdentityKind, n: Dimension) -> Result<usize> {
    let nn = n.n() as usize;
    match kind {
        IdentityKind::MatchId => Ok(7 * (nn - 2) * (nn - 1) / 2 + 1),
        IdentityKind::MatchTwelve => Ok(nn * (3 * nn - 7) / 2 + 3 + usize::from(nn > 4)),
        IdentityKind::Interchangeable => Ok(nn * nn - 3 + usize::from(nn > 4)),
        IdentityKind::TotallyCompatible => Ok((nn - 1) * (nn - 1) + usize::from(nn > 3)),
        IdentityKind::Compatible => Err(Error::Unsupported(
            "no family list is known for the plain compatible identity".into(),
        )),
    }
}

/// All family ids for `(kind, n)` in series order, then lexicographic
/// indices. Series members that coincide with earlier ones at small n are
/// left out, so the list is linearly independent and spans the kernel.
pub fn family_ids(kind: IdentityKind, n: Dimension) -> Result<Vec<FamilyId>> {
    let nn = n.n();
    let mut out = Vec::new();
    let mut push = |series: Series, indices: Vec<u32>| {
        out.push(FamilyId { series, indices });
    };
    match kind {
        IdentityKind::MatchId => {
            for i in 2..=nn {
                for j in 1..nn {
                    push(Series::Mid1, vec![i, j]);
                }
            }
            for i in 2..=nn {
                for j in 1..nn {
                    if (i, j) != (2, nn - 1) {
                        push(Series::Mid2, vec![i, j]);
                    }
                }
            }
            for i in 3..nn {
                for j in i - 1..nn - 1 {
                    push(Series::Mid3, vec![i, j]);
                }
            }
            for i in 3..=nn {
                for j in 1..nn - 1 {
                    push(Series::Mid4, vec![i, j]);
                }
            }
        }
        IdentityKind::MatchTwelve => {
            for i in 2..=nn {
                for j in 1..nn {
                    push(Series::M12_1, vec![i, j]);
                }
            }
            for i in 1..nn {
                push(Series::M12_2, vec![i]);
            }
            for i in 1..=nn {
                for j in i + 3..=nn {
                    push(Series::M12_3, vec![i, j]);
                }
            }
            if nn > 4 {
                push(Series::M12_4, vec![]);
            }
        }
        IdentityKind::Interchangeable => {
            for i in 2..=nn {
                for j in 1..nn {
                    push(Series::I1, vec![i, j]);
                }
            }
            for i in 1..nn - 1 {
                push(Series::I2, vec![i]);
            }
            for i in 1..nn - 1 {
                push(Series::I3, vec![i]);
            }
            if nn > 4 {
                push(Series::I4, vec![]);
            }
        }
        IdentityKind::TotallyCompatible => {
            for i in 2..=nn {
                for j in 1..nn {
                    push(Series::T1, vec![i, j]);
                }
            }
            if nn > 3 {
                push(Series::T2, vec![]);
            }
        }
        IdentityKind::Compatible => {
            return Err(Error::Unsupported(
                "no family list is known for the plain compatible identity".into(),
            ))
        }
    }
    Ok(out)
}

/// The family products for `(kind, n)` in the [`family_ids`] order.
pub fn family_basis(kind: IdentityKind, n: Dimension, field: FieldSpec) -> Result<Vec<Product>> {
    family_ids(kind, n)?
        .iter()
        .map(|id| make_family(id, n, field))
        .collect()
}

/// Builds the id-matching product determined by `e_{i-1,i} * e_{j,j+1} = c`:
/// basis elements split as `x = p.e_{i-1,i} + u` and `y = e_{j,j+1}.q + v`
/// in the unitization, and the table entry is `p.c.q`. With `c` one of
/// `e_{1,j+1}`, `e_{i-1,n}`, `e_{i-1,j+1}`, `e_{1n}` this reproduces the
/// four Mid series.
pub fn product_from_triple(n: Dimension, i: u32, j: u32, c: &Element) -> Result<Product> {
    let nn = n.n();
    if !(1 < i && i <= nn) || !(1 <= j && j < nn) {
        return Err(Error::InvalidInput(format!(
            "product_from_triple needs 1 < i <= {nn} and 1 <= j < {nn}, got i={i}, j={j}"
        )));
    }
    if c.n() != n {
        return Err(Error::DimensionMismatch(nn, c.n().n()));
    }
    let field = c.field();
    let mut p = Product::zero(n, field);
    for x in n.basis() {
        // left cofactor along x = p . e_{i-1,i}; zero unless x ends in column i
        if x.j() != i {
            continue;
        }
        let left = if x.i() == i - 1 {
            UnitizedElement::identity(n, field)
        } else {
            UnitizedElement::new(field.zero(), unit(n, field, x.i(), i - 1))
                .expect("unitized cofactor")
        };
        let lc = left.mul_element(c);
        if lc.is_zero() {
            continue;
        }
        for y in n.basis() {
            // right cofactor along y = e_{j,j+1} . q; zero unless y starts in row j
            if y.i() != j {
                continue;
            }
            let right = if y.j() == j + 1 {
                UnitizedElement::identity(n, field)
            } else {
                UnitizedElement::new(field.zero(), unit(n, field, j + 1, y.j()))
                    .expect("unitized cofactor")
            };
            p.set_value(x, y, right.element_mul(&lc));
        }
    }
    Ok(p)
}

/// The value assignment that generates a Mid-series member through
/// [`product_from_triple`].
pub fn mid_series_choice(
    series: Series,
    i: u32,
    j: u32,
    n: Dimension,
    field: FieldSpec,
) -> Result<Element> {
    let nn = n.n();
    match series {
        Series::Mid1 => Ok(unit(n, field, 1, j + 1)),
        Series::Mid2 => Ok(unit(n, field, i - 1, nn)),
        Series::Mid3 => Ok(unit(n, field, i - 1, j + 1)),
        Series::Mid4 => Ok(unit(n, field, 1, nn)),
        other => Err(Error::Unsupported(format!(
            "{} is not generated by a single value assignment",
            other.name()
        ))),
    }
}
