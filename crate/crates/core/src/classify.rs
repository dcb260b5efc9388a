//! Everything specific to UT_3: the lambda-parametrized general forms of
//! the three solution spaces, their closed-form associators, the
//! automorphism group action in lambda coordinates, canonical forms with
//! explicit witnesses, and an exhaustive finite-field orbit census that
//! checks the canonical labels against true group orbits.
//!
//! On UT_3 the automorphisms are `e12 -> a11 e12 + a31 e13`,
//! `e23 -> a22 e23 + a32 e13`, `e13 -> a11 a22 e13` with `a11, a22`
//! invertible, so the group over F_q has `(q-1)^2 q^2` elements.

use std::collections::BTreeMap;

use crate::algebra::{BasisIndex, Dimension, Element, LinearMap, Product};
use crate::error::{Error, Result};
use crate::exec;
use crate::identities::IdentityKind;
use crate::scalar::{FieldSpec, Scalar};

fn n3() -> Dimension {
    Dimension::new(3).expect("UT_3")
}

fn e12() -> BasisIndex {
    BasisIndex::new(1, 2).expect("e12")
}

fn e13() -> BasisIndex {
    BasisIndex::new(1, 3).expect("e13")
}

fn e23() -> BasisIndex {
    BasisIndex::new(2, 3).expect("e23")
}

/// Which general form a lambda vector parametrizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LambdaForm {
    /// id-matching solutions on UT_3; 8 coordinates.
    IdMatching,
    /// (12)-matching solutions on UT_3; 6 coordinates.
    TwelveMatching,
    /// interchangeable solutions on UT_3; 6 coordinates.
    Interchangeable,
}

impl LambdaForm {
    /// Number of lambda coordinates the form carries.
    pub fn coordinate_count(self) -> usize {
        match self {
            LambdaForm::IdMatching => 8,
            LambdaForm::TwelveMatching | LambdaForm::Interchangeable => 6,
        }
    }

    pub fn kind(self) -> IdentityKind {
        match self {
            LambdaForm::IdMatching => IdentityKind::MatchId,
            LambdaForm::TwelveMatching => IdentityKind::MatchTwelve,
            LambdaForm::Interchangeable => IdentityKind::Interchangeable,
        }
    }

    pub fn for_kind(kind: IdentityKind) -> Result<Self> {
        match kind {
            IdentityKind::MatchId => Ok(LambdaForm::IdMatching),
            IdentityKind::MatchTwelve => Ok(LambdaForm::TwelveMatching),
            IdentityKind::Interchangeable => Ok(LambdaForm::Interchangeable),
            other => Err(Error::Unsupported(format!(
                "no lambda form is attached to the {} identity",
                other.label()
            ))),
        }
    }
}

/// Coordinates of a product in one of the three general forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaVector {
    form: LambdaForm,
    values: Vec<Scalar>,
}

impl LambdaVector {
    pub fn new(form: LambdaForm, values: Vec<Scalar>) -> Result<Self> {
        if values.len() != form.coordinate_count() {
            return Err(Error::InvalidInput(format!(
                "{form:?} takes {} coordinates, got {}",
                form.coordinate_count(),
                values.len()
            )));
        }
        let field = values[0].field();
        if let Some(bad) = values.iter().find(|v| v.field() != field) {
            return Err(Error::FieldMismatch(field, bad.field()));
        }
        Ok(LambdaVector { form, values })
    }

    pub fn zero(form: LambdaForm, field: FieldSpec) -> Self {
        LambdaVector { form, values: vec![field.zero(); form.coordinate_count()] }
    }

    pub fn form(&self) -> LambdaForm {
        self.form
    }

    pub fn field(&self) -> FieldSpec {
        self.values[0].field()
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    /// 1-based coordinate accessor matching the lambda numbering.
    pub fn at(&self, k: usize) -> &Scalar {
        &self.values[k - 1]
    }

    /// Builder with 1-based coordinate assignments.
    pub fn with(form: LambdaForm, field: FieldSpec, assign: &[(usize, Scalar)]) -> Result<Self> {
        let mut values = vec![field.zero(); form.coordinate_count()];
        for (k, v) in assign {
            if *k == 0 || *k > form.coordinate_count() {
                return Err(Error::InvalidInput(format!("lambda index {k} out of range")));
            }
            if v.field() != field {
                return Err(Error::FieldMismatch(field, v.field()));
            }
            values[*k - 1] = v.clone();
        }
        LambdaVector::new(form, values)
    }
}

/// The product parametrized by a lambda vector.
pub fn lambda_to_product(v: &LambdaVector) -> Product {
    let n = n3();
    let field = v.field();
    let l = |k: usize| v.at(k);
    let elem = |coeffs: Vec<(BasisIndex, Scalar)>| {
        Element::from_coeffs(n, field, coeffs).expect("general-form element")
    };
    let mut p = Product::zero(n, field);
    match v.form {
        LambdaForm::IdMatching => {
            p.set_value(e12(), e12(), elem(vec![(e12(), l(1).clone()), (e13(), l(5).clone())]));
            p.set_value(e12(), e13(), elem(vec![(e13(), l(1).clone())]));
            p.set_value(e12(), e23(), elem(vec![(e13(), l(2).clone())]));
            p.set_value(e13(), e12(), elem(vec![(e13(), l(6).clone())]));
            p.set_value(e13(), e23(), elem(vec![(e13(), l(7).clone())]));
            p.set_value(
                e23(),
                e12(),
                elem(vec![
                    (e12(), l(3).clone()),
                    (e13(), l(8).clone()),
                    (e23(), l(6).clone()),
                ]),
            );
            p.set_value(e23(), e13(), elem(vec![(e13(), l(3).clone())]));
            p.set_value(e23(), e23(), elem(vec![(e13(), l(4).clone()), (e23(), l(7).clone())]));
        }
        LambdaForm::TwelveMatching => {
            p.set_value(e12(), e12(), elem(vec![(e12(), l(5).clone()), (e13(), l(1).clone())]));
            p.set_value(
                e12(),
                e23(),
                elem(vec![
                    (e12(), l(6).clone()),
                    (e13(), l(2).clone()),
                    (e23(), l(5).clone()),
                ]),
            );
            p.set_value(e23(), e12(), elem(vec![(e13(), l(3).clone())]));
            p.set_value(e23(), e23(), elem(vec![(e13(), l(4).clone()), (e23(), l(6).clone())]));
        }
        LambdaForm::Interchangeable => {
            p.set_value(e12(), e12(), elem(vec![(e13(), l(1).clone())]));
            p.set_value(e12(), e13(), elem(vec![(e13(), l(5).clone())]));
            p.set_value(
                e12(),
                e23(),
                elem(vec![
                    (e12(), l(6).clone()),
                    (e13(), l(2).clone()),
                    (e23(), l(5).clone()),
                ]),
            );
            p.set_value(e13(), e23(), elem(vec![(e13(), l(6).clone())]));
            p.set_value(e23(), e12(), elem(vec![(e13(), l(3).clone())]));
            p.set_value(e23(), e23(), elem(vec![(e13(), l(4).clone())]));
        }
    }
    p
}

/// Reads the lambda coordinates off a product table and rejects products
/// outside the form's solution space, naming the first offending entry.
pub fn product_to_lambda(p: &Product, form: LambdaForm) -> Result<LambdaVector> {
    if p.n() != n3() {
        return Err(Error::DimensionMismatch(3, p.n().n()));
    }
    let v = |a: BasisIndex, b: BasisIndex, t: BasisIndex| p.value(a, b).coeff(t);
    let values = match form {
        LambdaForm::IdMatching => vec![
            v(e12(), e12(), e12()),
            v(e12(), e23(), e13()),
            v(e23(), e12(), e12()),
            v(e23(), e23(), e13()),
            v(e12(), e12(), e13()),
            v(e13(), e12(), e13()),
            v(e13(), e23(), e13()),
            v(e23(), e12(), e13()),
        ],
        LambdaForm::TwelveMatching => vec![
            v(e12(), e12(), e13()),
            v(e12(), e23(), e13()),
            v(e23(), e12(), e13()),
            v(e23(), e23(), e13()),
            v(e12(), e12(), e12()),
            v(e12(), e23(), e12()),
        ],
        LambdaForm::Interchangeable => vec![
            v(e12(), e12(), e13()),
            v(e12(), e23(), e13()),
            v(e23(), e12(), e13()),
            v(e23(), e23(), e13()),
            v(e12(), e13(), e13()),
            v(e13(), e23(), e13()),
        ],
    };
    let candidate = LambdaVector::new(form, values)?;
    let rebuilt = lambda_to_product(&candidate);
    if &rebuilt != p {
        let basis = n3().basis();
        for &a in &basis {
            for &b in &basis {
                let got = p.value(a, b);
                let want = rebuilt.value(a, b);
                if got != want {
                    return Err(Error::InvalidInput(format!(
                        "product lies outside the {:?} solution space: \
                         table entry ({a}, {b}) is {got}, the general form forces {want}",
                        form
                    )));
                }
            }
        }
        unreachable!("products differ in some table entry");
    }
    Ok(candidate)
}

type AssociatorRow = ([BasisIndex; 3], Vec<(BasisIndex, Scalar)>);

/// All potentially nonzero associators of a general form, as
/// `(triple, coordinate coefficients)` rows evaluated at `v`. Triples not
/// listed have identically vanishing associators.
fn closed_form_rows(v: &LambdaVector) -> Vec<AssociatorRow> {
    let l = |k: usize| v.at(k);
    let m = |a: &Scalar, b: &Scalar| a * b;
    let (u12, u13, u23) = (e12(), e13(), e23());
    match v.form {
        LambdaForm::IdMatching => {
            let two = |x: &Scalar| x + x;
            vec![
                ([u12, u12, u12], vec![(u13, m(l(5), &(l(6) - l(1))))]),
                ([u12, u12, u23], vec![(u13, m(l(5), l(7)))]),
                (
                    [u12, u23, u12],
                    vec![
                        (u12, -&m(l(1), l(3))),
                        (u13, -&(&m(l(1), l(8)) + &m(l(5), l(3)))),
                    ],
                ),
                ([u12, u23, u23], vec![(u13, -&m(l(1), l(4)))]),
                ([u12, u23, u13], vec![(u13, -&m(l(1), l(3)))]),
                (
                    [u23, u12, u12],
                    vec![
                        (u12, m(l(6), l(3))),
                        (u13, m(l(8), &(&two(l(6)) - l(1)))),
                        (u23, m(l(6), &(l(6) - l(1)))),
                    ],
                ),
                (
                    [u23, u12, u23],
                    vec![
                        (u13, &m(l(7), l(8)) + &m(l(6), l(4))),
                        (u23, m(l(7), l(6))),
                    ],
                ),
                ([u23, u12, u13], vec![(u13, m(l(6), l(3)))]),
                ([u13, u23, u12], vec![(u13, -&m(l(6), l(3)))]),
                (
                    [u23, u23, u12],
                    vec![
                        (u12, m(l(3), &(l(7) - l(3)))),
                        (u13, m(l(8), &(l(7) - &two(l(3))))),
                        (u23, -&m(l(6), l(3))),
                    ],
                ),
                ([u23, u23, u23], vec![(u13, m(l(4), &(l(7) - l(3))))]),
                ([u23, u23, u13], vec![(u13, m(l(3), &(l(7) - l(3))))]),
                ([u13, u12, u12], vec![(u13, m(l(6), &(l(6) - l(1))))]),
                ([u13, u12, u23], vec![(u13, m(l(7), l(6)))]),
            ]
        }
        LambdaForm::TwelveMatching => vec![
            (
                [u12, u12, u23],
                vec![(u12, -&m(l(5), l(6))), (u13, -&m(l(1), l(6)))],
            ),
            (
                [u12, u23, u12],
                vec![
                    (u12, m(l(5), l(6))),
                    (u13, &m(l(1), l(6)) + &m(l(3), l(5))),
                ],
            ),
            (
                [u12, u23, u23],
                vec![(u13, m(l(4), l(5))), (u23, m(l(5), l(6)))],
            ),
            ([u23, u12, u12], vec![(u13, -&m(l(3), l(5)))]),
            (
                [u23, u12, u23],
                vec![
                    (u13, -&(&m(l(3), l(6)) + &m(l(4), l(5)))),
                    (u23, -&m(l(5), l(6))),
                ],
            ),
            ([u23, u23, u12], vec![(u13, m(l(3), l(6)))]),
        ],
        LambdaForm::Interchangeable => {
            let two = |x: &Scalar| x + x;
            vec![
                ([u12, u12, u12], vec![(u13, -&m(l(1), l(5)))]),
                (
                    [u12, u12, u23],
                    vec![
                        (u12, -&m(l(5), l(6))),
                        (u13, -&two(&m(l(2), l(5)))),
                        (u23, -&m(l(5), l(5))),
                    ],
                ),
                ([u12, u12, u13], vec![(u13, -&m(l(5), l(5)))]),
                ([u12, u23, u12], vec![(u13, m(l(1), l(6)))]),
                (
                    [u12, u23, u23],
                    vec![
                        (u12, m(l(6), l(6))),
                        (u13, two(&m(l(2), l(6)))),
                        (u23, m(l(5), l(6))),
                    ],
                ),
                ([u12, u23, u13], vec![(u13, m(l(5), l(6)))]),
                ([u23, u12, u23], vec![(u13, -&m(l(4), l(5)))]),
                ([u23, u23, u23], vec![(u13, m(l(4), l(6)))]),
                ([u13, u12, u23], vec![(u13, -&m(l(5), l(6)))]),
                ([u13, u23, u23], vec![(u13, m(l(6), l(6)))]),
            ]
        }
    }
}

/// Closed-form associators of the general form at `v`: a map from basis
/// triples to their (nonzero) associator values. Triples left out have
/// zero associator.
pub fn closed_form_associators(v: &LambdaVector) -> BTreeMap<[BasisIndex; 3], Element> {
    let n = n3();
    let field = v.field();
    let mut out = BTreeMap::new();
    for (triple, coeffs) in closed_form_rows(v) {
        let e = Element::from_coeffs(n, field, coeffs).expect("closed-form element");
        if !e.is_zero() {
            out.insert(triple, e);
        }
    }
    out
}

/// First listed triple whose closed-form associator does not vanish at `v`.
pub fn first_nonzero_associator(v: &LambdaVector) -> Option<([BasisIndex; 3], Element)> {
    let n = n3();
    let field = v.field();
    for (triple, coeffs) in closed_form_rows(v) {
        let e = Element::from_coeffs(n, field, coeffs).expect("closed-form element");
        if !e.is_zero() {
            return Some((triple, e));
        }
    }
    None
}

/// Parameters of an automorphism of UT_3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Aut3Params {
    pub a11: Scalar,
    pub a22: Scalar,
    pub a31: Scalar,
    pub a32: Scalar,
}

impl Aut3Params {
    pub fn new(a11: Scalar, a22: Scalar, a31: Scalar, a32: Scalar) -> Result<Self> {
        let field = a11.field();
        for s in [&a22, &a31, &a32] {
            if s.field() != field {
                return Err(Error::FieldMismatch(field, s.field()));
            }
        }
        if a11.is_zero() || a22.is_zero() {
            return Err(Error::InvalidInput(
                "automorphism needs invertible a11 and a22".into(),
            ));
        }
        Ok(Aut3Params { a11, a22, a31, a32 })
    }

    pub fn identity(field: FieldSpec) -> Self {
        Aut3Params {
            a11: field.one(),
            a22: field.one(),
            a31: field.zero(),
            a32: field.zero(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.a11.field()
    }

    pub fn is_identity(&self) -> bool {
        self.a11.is_one() && self.a22.is_one() && self.a31.is_zero() && self.a32.is_zero()
    }
}

/// The linear map `e12 -> a11 e12 + a31 e13`, `e23 -> a22 e23 + a32 e13`,
/// `e13 -> a11 a22 e13`; always an automorphism of the canonical product.
pub fn aut3_map(p: &Aut3Params) -> LinearMap {
    let n = n3();
    let field = p.field();
    let images = vec![
        Element::from_coeffs(n, field, [(e12(), p.a11.clone()), (e13(), p.a31.clone())])
            .expect("image of e12"),
        Element::from_coeffs(n, field, [(e13(), &p.a11 * &p.a22)]).expect("image of e13"),
        Element::from_coeffs(n, field, [(e23(), p.a22.clone()), (e13(), p.a32.clone())])
            .expect("image of e23"),
    ];
    LinearMap::from_images(n, field, &images).expect("automorphism matrix")
}

/// The lambda coordinates of the transported product
/// `a * b = phi((phi^-1 a) (phi^-1 b))` with `phi = aut3_map(p)`.
/// The id- and (12)-forms use closed formulas; the interchangeable form
/// goes through the generic pushforward.
pub fn transform_lambda(v: &LambdaVector, p: &Aut3Params) -> LambdaVector {
    let out = match v.form {
        LambdaForm::IdMatching => {
            let i11 = p.a11.inv().expect("a11 invertible");
            let i22 = p.a22.inv().expect("a22 invertible");
            let a = &p.a11 * &p.a22;
            let l = |k: usize| v.at(k);
            let values = vec![
                l(1) * &i11,
                &(&(&a * l(2)) - &(&p.a32 * l(1))) - &(&p.a31 * l(7)),
                l(3) * &i22,
                &(&a * l(4)) - &(&p.a32 * l(3)),
                &(&a * l(5)) - &(&p.a31 * l(6)),
                l(6) * &i11,
                l(7) * &i22,
                l(8).clone(),
            ];
            let scale = [
                None,
                Some(&i11 * &i22),
                None,
                Some(&i22 * &i22),
                Some(&i11 * &i11),
                None,
                None,
                None,
            ];
            let values = values
                .into_iter()
                .zip(scale)
                .map(|(val, s)| match s {
                    Some(s) => &val * &s,
                    None => val,
                })
                .collect();
            LambdaVector::new(v.form, values).expect("transformed coordinates")
        }
        LambdaForm::TwelveMatching => {
            let i11 = p.a11.inv().expect("a11 invertible");
            let i22 = p.a22.inv().expect("a22 invertible");
            let a = &p.a11 * &p.a22;
            let l = |k: usize| v.at(k);
            let values = vec![
                &(&(&a * l(1)) + &(&p.a31 * l(5))) * &(&i11 * &i11),
                &(&(&(&a * l(2)) + &(&p.a32 * l(5))) + &(&p.a31 * l(6))) * &(&i11 * &i22),
                l(3).clone(),
                &(&(&a * l(4)) + &(&p.a32 * l(6))) * &(&i22 * &i22),
                l(5) * &i11,
                l(6) * &i22,
            ];
            LambdaVector::new(v.form, values).expect("transformed coordinates")
        }
        LambdaForm::Interchangeable => pushforward_lambda(v, p),
    };
    #[cfg(debug_assertions)]
    {
        let check = pushforward_lambda(v, p);
        assert_eq!(out, check, "closed-form transform disagrees with pushforward");
    }
    out
}

fn pushforward_lambda(v: &LambdaVector, p: &Aut3Params) -> LambdaVector {
    let transported = lambda_to_product(v)
        .pushforward(&aut3_map(p))
        .expect("automorphism is invertible");
    product_to_lambda(&transported, v.form)
        .expect("automorphisms preserve the solution space")
}

/// An isomorphism-class label: which normal form, plus its residual
/// parameters where the form carries any.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CanonicalClass {
    pub kind: IdentityKind,
    pub case: u8,
    pub params: Vec<Scalar>,
}

impl CanonicalClass {
    /// The lambda vector of the class representative.
    pub fn representative(&self, field: FieldSpec) -> Result<LambdaVector> {
        let one = field.one();
        let pr = |k: usize| -> Result<Scalar> {
            self.params
                .get(k)
                .cloned()
                .ok_or_else(|| Error::InvalidInput("missing class parameter".into()))
        };
        match self.kind {
            IdentityKind::MatchId => {
                let form = LambdaForm::IdMatching;
                match self.case {
                    1 => LambdaVector::with(form, field, &[(3, one.clone()), (7, one)]),
                    2 => LambdaVector::with(form, field, &[(1, one.clone()), (7, one)]),
                    3 => LambdaVector::with(form, field, &[(7, one)]),
                    4 => LambdaVector::with(
                        form,
                        field,
                        &[(4, one), (5, pr(0)?), (2, pr(1)?), (8, pr(2)?)],
                    ),
                    5 => LambdaVector::with(form, field, &[(1, one.clone()), (6, one)]),
                    6 => LambdaVector::with(form, field, &[(1, one)]),
                    7 => LambdaVector::with(form, field, &[(5, one), (2, pr(0)?), (8, pr(1)?)]),
                    8 => LambdaVector::with(form, field, &[(2, pr(0)?), (8, pr(1)?)]),
                    c => Err(Error::InvalidInput(format!("id-matching has no case {c}"))),
                }
            }
            IdentityKind::MatchTwelve => {
                let form = LambdaForm::TwelveMatching;
                match self.case {
                    1 => LambdaVector::with(form, field, &[(5, one)]),
                    2 => LambdaVector::with(form, field, &[(6, one)]),
                    3 => LambdaVector::with(
                        form,
                        field,
                        &[(4, one), (1, pr(0)?), (2, pr(1)?), (3, pr(2)?)],
                    ),
                    4 => LambdaVector::with(form, field, &[(1, one), (2, pr(0)?), (3, pr(1)?)]),
                    5 => LambdaVector::with(form, field, &[(2, pr(0)?), (3, pr(1)?)]),
                    c => Err(Error::InvalidInput(format!("(12)-matching has no case {c}"))),
                }
            }
            IdentityKind::Interchangeable => {
                let form = LambdaForm::Interchangeable;
                match self.case {
                    1 => LambdaVector::with(
                        form,
                        field,
                        &[(4, one), (1, pr(0)?), (2, pr(1)?), (3, pr(2)?)],
                    ),
                    2 => LambdaVector::with(form, field, &[(1, one), (2, pr(0)?), (3, pr(1)?)]),
                    3 => LambdaVector::with(form, field, &[(2, pr(0)?), (3, pr(1)?)]),
                    c => Err(Error::InvalidInput(format!("interchangeable has no case {c}"))),
                }
            }
            other => Err(Error::Unsupported(format!(
                "no classification is attached to the {} identity",
                other.label()
            ))),
        }
    }
}

/// Runs the case ladder of the classification on an associative lambda
/// vector: returns the class label and the automorphism parameters
/// carrying `v` onto the class representative.
pub fn canonical_form(v: &LambdaVector) -> Result<(CanonicalClass, Aut3Params)> {
    if let Some((triple, value)) = first_nonzero_associator(v) {
        return Err(Error::InvalidInput(format!(
            "input is not associative: [{}, {}, {}] = {}",
            triple[0], triple[1], triple[2], value
        )));
    }
    let field = v.field();
    let one = field.one();
    let zero = field.zero();
    let l = |k: usize| v.at(k).clone();
    let (case, params, witness): (u8, Vec<Scalar>, Aut3Params) = match v.form {
        LambdaForm::IdMatching => {
            if !l(3).is_zero() {
                (1, vec![], Aut3Params::new(one, l(3), l(2), l(4))?)
            } else if !l(7).is_zero() {
                if !l(1).is_zero() {
                    let a31 = &l(1) * &l(2);
                    (2, vec![], Aut3Params::new(l(1), l(7), a31, zero)?)
                } else {
                    (3, vec![], Aut3Params::new(one, l(7), l(2), zero)?)
                }
            } else if !l(4).is_zero() {
                let alpha = &l(4) * &l(5);
                (
                    4,
                    vec![alpha, l(2), l(8)],
                    Aut3Params::new(one, l(4), zero.clone(), zero)?,
                )
            } else if !l(6).is_zero() {
                (5, vec![], Aut3Params::new(l(6), one, l(5), l(2))?)
            } else if !l(1).is_zero() {
                (6, vec![], Aut3Params::new(l(1), one, zero, l(2))?)
            } else if !l(5).is_zero() {
                (
                    7,
                    vec![l(2), l(8)],
                    Aut3Params::new(l(5), one, zero.clone(), zero)?,
                )
            } else {
                (8, vec![l(2), l(8)], Aut3Params::identity(field))
            }
        }
        LambdaForm::TwelveMatching => {
            if !l(5).is_zero() {
                (1, vec![], Aut3Params::new(l(5), one, -&l(1), -&l(2))?)
            } else if !l(6).is_zero() {
                (2, vec![], Aut3Params::new(one, l(6), -&l(2), -&l(4))?)
            } else if !l(4).is_zero() {
                let alpha = &l(4) * &l(1);
                (
                    3,
                    vec![alpha, l(2), l(3)],
                    Aut3Params::new(one, l(4), zero.clone(), zero)?,
                )
            } else if !l(1).is_zero() {
                (
                    4,
                    vec![l(2), l(3)],
                    Aut3Params::new(l(1), one, zero.clone(), zero)?,
                )
            } else {
                (5, vec![l(2), l(3)], Aut3Params::identity(field))
            }
        }
        LambdaForm::Interchangeable => {
            // associativity already forces lambda_5 = lambda_6 = 0
            if !l(4).is_zero() {
                let alpha = &l(4) * &l(1);
                (
                    1,
                    vec![alpha, l(2), l(3)],
                    Aut3Params::new(one, l(4), zero.clone(), zero)?,
                )
            } else if !l(1).is_zero() {
                (
                    2,
                    vec![l(2), l(3)],
                    Aut3Params::new(l(1), one, zero.clone(), zero)?,
                )
            } else {
                (3, vec![l(2), l(3)], Aut3Params::identity(field))
            }
        }
    };
    let class = CanonicalClass { kind: v.form.kind(), case, params };
    let reached = transform_lambda(v, &witness);
    let expected = class.representative(field)?;
    if reached != expected {
        return Err(Error::InvalidInput(format!(
            "witness does not reach the representative of case {case}: got {:?}",
            reached.values()
        )));
    }
    Ok((class, witness))
}

/// One orbit of the census: its canonical label and size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusRow {
    pub class: CanonicalClass,
    pub orbit_size: usize,
}

/// Result of the exhaustive finite-field census.
#[derive(Debug, Clone)]
pub struct Census {
    pub kind: IdentityKind,
    pub q: u32,
    pub rows: Vec<CensusRow>,
    pub survivor_count: usize,
    pub orbit_count: usize,
    /// Violations of the orbit/label bijection; empty when the canonical
    /// labels classify exactly.
    pub violations: Vec<String>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(len: usize) -> Self {
        UnionFind { parent: (0..len).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn decode_lambda(form: LambdaForm, field: FieldSpec, q: u32, mut code: u64) -> LambdaVector {
    let mut values = Vec::with_capacity(form.coordinate_count());
    for _ in 0..form.coordinate_count() {
        values.push(field.integer((code % q as u64) as i64));
        code /= q as u64;
    }
    LambdaVector::new(form, values).expect("decoded coordinates")
}

fn encode_lambda(v: &LambdaVector) -> u64 {
    let mut code = 0u64;
    for s in v.values().iter().rev() {
        let Scalar::Residue { value, modulus } = s else {
            panic!("census vectors live over a prime field")
        };
        code = code * *modulus as u64 + *value as u64;
    }
    code
}

fn census_group(field: FieldSpec, q: u32) -> Vec<Aut3Params> {
    let mut group = Vec::with_capacity(((q - 1) * (q - 1) * q * q) as usize);
    for a11 in 1..q {
        for a22 in 1..q {
            for a31 in 0..q {
                for a32 in 0..q {
                    group.push(
                        Aut3Params::new(
                            field.integer(a11 as i64),
                            field.integer(a22 as i64),
                            field.integer(a31 as i64),
                            field.integer(a32 as i64),
                        )
                        .expect("unit diagonal entries"),
                    );
                }
            }
        }
    }
    group
}

fn census_impl(kind: IdentityKind, q: u32, sequential: bool) -> Result<Census> {
    let form = LambdaForm::for_kind(kind)?;
    if ![2, 3, 5].contains(&q) {
        return Err(Error::Unsupported(format!(
            "census is guarded to q in {{2, 3, 5}}, got {q}"
        )));
    }
    let field = FieldSpec::prime(q as u64)?;
    let total = (q as u64).pow(form.coordinate_count() as u32);

    let codes: Vec<u64> = (0..total).collect();
    let keep = |code: &u64| {
        first_nonzero_associator(&decode_lambda(form, field, q, *code)).is_none()
    };
    let survivors: Vec<u64> = if sequential {
        exec::filter_collect_seq(codes, keep)
    } else {
        exec::filter_collect(codes, keep)
    };

    // dense code -> survivor index lookup
    let mut index_of = vec![usize::MAX; total as usize];
    for (k, &code) in survivors.iter().enumerate() {
        index_of[code as usize] = k;
    }

    let group = census_group(field, q);
    let mut uf = UnionFind::new(survivors.len());
    for (k, &code) in survivors.iter().enumerate() {
        let v = decode_lambda(form, field, q, code);
        for g in &group {
            let image = encode_lambda(&transform_lambda(&v, g));
            let target = index_of[image as usize];
            assert!(
                target != usize::MAX,
                "group action left the associative locus at code {code}"
            );
            uf.union(k, target);
        }
    }

    let labels: Vec<CanonicalClass> = survivors
        .iter()
        .map(|&code| {
            let v = decode_lambda(form, field, q, code);
            canonical_form(&v).map(|(class, _)| class)
        })
        .collect::<Result<_>>()?;

    let mut orbits: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for k in 0..survivors.len() {
        orbits.entry(uf.find(k)).or_default().push(k);
    }

    let mut violations = Vec::new();
    let mut by_label: BTreeMap<CanonicalClass, Vec<usize>> = BTreeMap::new();
    let mut rows = Vec::new();
    for (root, members) in &orbits {
        let label = &labels[members[0]];
        for &m in members {
            if &labels[m] != label {
                violations.push(format!(
                    "orbit of code {} carries labels case {} and case {}",
                    survivors[*root], label.case, labels[m].case
                ));
            }
        }
        by_label.entry(label.clone()).or_default().push(*root);
        rows.push(CensusRow { class: label.clone(), orbit_size: members.len() });
    }
    for (label, roots) in &by_label {
        if roots.len() > 1 {
            violations.push(format!(
                "label (case {}, params {:?}) occurs in {} distinct orbits",
                label.case,
                label.params.iter().map(Scalar::to_string).collect::<Vec<_>>(),
                roots.len()
            ));
        }
    }
    rows.sort_by(|a, b| a.class.cmp(&b.class));

    Ok(Census {
        kind,
        q,
        survivor_count: survivors.len(),
        orbit_count: orbits.len(),
        rows,
        violations,
    })
}

/// Exhaustive orbit census over F_q: enumerates every lambda vector,
/// keeps the associative ones, partitions them into automorphism orbits,
/// and checks that canonical labels are in bijection with orbits.
pub fn orbit_census(kind: IdentityKind, q: u32) -> Result<Census> {
    census_impl(kind, q, false)
}

/// Single-threaded reference path for [`orbit_census`].
pub fn orbit_census_seq(kind: IdentityKind, q: u32) -> Result<Census> {
    census_impl(kind, q, true)
}
