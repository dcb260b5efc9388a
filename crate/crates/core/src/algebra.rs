//! The strictly upper triangular matrix algebra UT_n(K): basis indexing,
//! sparse elements, bilinear products as structure-constant tables, linear
//! maps, and the standard constructions (mutation, annihilator-valued
//! products, the flip involution, pushforwards along linear maps).
//!
//! Indices are 1-based throughout, matching the usual matrix-unit notation:
//! the basis of UT_n is `e_{ij}` with `1 <= i < j <= n`, ordered
//! lexicographically by `(i, j)`, and `e_{ij} . e_{kl} = [j = k] e_{il}`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{FieldSpec, Scalar};

/// The size parameter of UT_n. Only `n >= 3` is meaningful: UT_2 is a
/// one-dimensional algebra with zero multiplication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dimension(u32);

impl Dimension {
    pub fn new(n: u32) -> Result<Self> {
        if n < 3 {
            return Err(Error::DimensionTooSmall(n));
        }
        Ok(Dimension(n))
    }

    pub fn n(self) -> u32 {
        self.0
    }

    /// Number of matrix units, `n(n-1)/2`.
    pub fn basis_len(self) -> usize {
        let n = self.0 as usize;
        n * (n - 1) / 2
    }

    /// All basis indices in lexicographic order.
    pub fn basis(self) -> Vec<BasisIndex> {
        let n = self.0;
        let mut out = Vec::with_capacity(self.basis_len());
        for i in 1..n {
            for j in i + 1..=n {
                out.push(BasisIndex { i, j });
            }
        }
        out
    }

    /// Position of a basis index in lexicographic order.
    pub fn position(self, b: BasisIndex) -> usize {
        let n = self.0 as usize;
        let (i, j) = (b.i as usize, b.j as usize);
        // pairs with first component < i, then offset within row i
        (i - 1) * n - i * (i - 1) / 2 + (j - i - 1)
    }

    pub fn basis_at(self, pos: usize) -> BasisIndex {
        let n = self.0;
        let mut rest = pos;
        for i in 1..n {
            let row = (n - i) as usize;
            if rest < row {
                return BasisIndex { i, j: i + 1 + rest as u32 };
            }
            rest -= row;
        }
        panic!("basis position {pos} out of range for n={n}");
    }

    pub fn contains(self, b: BasisIndex) -> bool {
        b.j <= self.0
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A matrix-unit index `(i, j)` with `1 <= i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisIndex {
    i: u32,
    j: u32,
}

impl BasisIndex {
    pub fn new(i: u32, j: u32) -> Result<Self> {
        if i == 0 || i >= j {
            return Err(Error::BadBasisIndex(i, j));
        }
        Ok(BasisIndex { i, j })
    }

    pub fn i(self) -> u32 {
        self.i
    }

    pub fn j(self) -> u32 {
        self.j
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e[{},{}]", self.i, self.j)
    }
}

/// Matrix-unit product: `e_{ij} . e_{kl} = e_{il}` when `j = k`, else zero.
pub fn unit_product(a: BasisIndex, b: BasisIndex) -> Option<BasisIndex> {
    (a.j == b.i).then_some(BasisIndex { i: a.i, j: b.j })
}

/// A sparse element of UT_n: a coefficient per matrix unit, zeros omitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    n: Dimension,
    field: FieldSpec,
    coeffs: BTreeMap<BasisIndex, Scalar>,
}

impl Element {
    pub fn zero(n: Dimension, field: FieldSpec) -> Self {
        Element { n, field, coeffs: BTreeMap::new() }
    }

    /// The matrix unit `e_b`.
    pub fn unit(n: Dimension, field: FieldSpec, b: BasisIndex) -> Self {
        Element::zero(n, field).with(b, field.one())
    }

    pub fn from_coeffs<I>(n: Dimension, field: FieldSpec, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BasisIndex, Scalar)>,
    {
        let mut e = Element::zero(n, field);
        for (b, c) in coeffs {
            if !n.contains(b) {
                return Err(Error::BadBasisIndex(b.i, b.j));
            }
            if c.field() != field {
                return Err(Error::FieldMismatch(field, c.field()));
            }
            let cur = &e.coeff(b) + &c;
            e.set(b, cur);
        }
        Ok(e)
    }

    fn with(mut self, b: BasisIndex, c: Scalar) -> Self {
        self.set(b, c);
        self
    }

    fn set(&mut self, b: BasisIndex, c: Scalar) {
        debug_assert!(self.n.contains(b));
        if c.is_zero() {
            self.coeffs.remove(&b);
        } else {
            self.coeffs.insert(b, c);
        }
    }

    pub fn n(&self) -> Dimension {
        self.n
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The value of the element at `(b.i, b.j)`.
    pub fn coeff(&self, b: BasisIndex) -> Scalar {
        self.coeffs.get(&b).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn iter(&self) -> impl Iterator<Item = (BasisIndex, &Scalar)> {
        self.coeffs.iter().map(|(b, c)| (*b, c))
    }

    pub fn support(&self) -> impl Iterator<Item = BasisIndex> + '_ {
        self.coeffs.keys().copied()
    }

    fn check_compat(&self, other: &Element) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n.n(), other.n.n()));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        Ok(())
    }

    pub fn add(&self, other: &Element) -> Element {
        self.check_compat(other).expect("element addition");
        let mut out = self.clone();
        for (b, c) in other.iter() {
            let cur = &out.coeff(b) + c;
            out.set(b, cur);
        }
        out
    }

    pub fn sub(&self, other: &Element) -> Element {
        self.check_compat(other).expect("element subtraction");
        let mut out = self.clone();
        for (b, c) in other.iter() {
            let cur = &out.coeff(b) - c;
            out.set(b, cur);
        }
        out
    }

    pub fn neg(&self) -> Element {
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c = -&*c;
        }
        out
    }

    pub fn scale(&self, k: &Scalar) -> Element {
        if k.is_zero() {
            return Element::zero(self.n, self.field);
        }
        let mut out = self.clone();
        out.coeffs = out.coeffs.into_iter().map(|(b, c)| (b, &c * k)).collect();
        out
    }

    /// Left multiplication by a matrix unit under the canonical product.
    pub fn left_mul_unit(&self, a: BasisIndex) -> Element {
        let mut out = Element::zero(self.n, self.field);
        for (b, c) in self.iter() {
            if let Some(ab) = unit_product(a, b) {
                let cur = &out.coeff(ab) + c;
                out.set(ab, cur);
            }
        }
        out
    }

    /// Right multiplication by a matrix unit under the canonical product.
    pub fn right_mul_unit(&self, b: BasisIndex) -> Element {
        let mut out = Element::zero(self.n, self.field);
        for (a, c) in self.iter() {
            if let Some(ab) = unit_product(a, b) {
                let cur = &out.coeff(ab) + c;
                out.set(ab, cur);
            }
        }
        out
    }

    /// Canonical (matrix) product of two elements.
    pub fn dot(&self, other: &Element) -> Element {
        self.check_compat(other).expect("element product");
        let mut out = Element::zero(self.n, self.field);
        for (a, ca) in self.iter() {
            for (b, cb) in other.iter() {
                if let Some(ab) = unit_product(a, b) {
                    let cur = &out.coeff(ab) + &(ca * cb);
                    out.set(ab, cur);
                }
            }
        }
        out
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (b, c)) in self.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "{b}")?;
            } else {
                write!(f, "{c}*{b}")?;
            }
        }
        Ok(())
    }
}

/// An element `delta*1 + body` of the unitization of UT_n, where `delta`
/// scales the adjoined identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitizedElement {
    pub delta: Scalar,
    pub body: Element,
}

impl UnitizedElement {
    pub fn new(delta: Scalar, body: Element) -> Result<Self> {
        if delta.field() != body.field() {
            return Err(Error::FieldMismatch(delta.field(), body.field()));
        }
        Ok(UnitizedElement { delta, body })
    }

    pub fn identity(n: Dimension, field: FieldSpec) -> Self {
        UnitizedElement { delta: field.one(), body: Element::zero(n, field) }
    }

    pub fn mul(&self, other: &UnitizedElement) -> UnitizedElement {
        let body = self
            .body
            .dot(&other.body)
            .add(&other.body.scale(&self.delta))
            .add(&self.body.scale(&other.delta));
        UnitizedElement { delta: &self.delta * &other.delta, body }
    }

    /// `(delta*1 + u) . x` for `x` in UT_n.
    pub fn mul_element(&self, x: &Element) -> Element {
        x.scale(&self.delta).add(&self.body.dot(x))
    }

    /// `x . (delta*1 + u)` for `x` in UT_n.
    pub fn element_mul(&self, x: &Element) -> Element {
        x.scale(&self.delta).add(&x.dot(&self.body))
    }
}

/// A bilinear product on UT_n, stored as its values on basis pairs.
/// Zero values are never stored, so structural equality is equality of
/// bilinear maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Product {
    n: Dimension,
    field: FieldSpec,
    table: BTreeMap<(BasisIndex, BasisIndex), Element>,
}

impl Product {
    pub fn zero(n: Dimension, field: FieldSpec) -> Self {
        Product { n, field, table: BTreeMap::new() }
    }

    /// The canonical matrix product: `e_{ik} * e_{kj} = e_{ij}`.
    pub fn canonical(n: Dimension, field: FieldSpec) -> Self {
        let mut p = Product::zero(n, field);
        for a in n.basis() {
            for b in n.basis() {
                if let Some(ab) = unit_product(a, b) {
                    p.set_value(a, b, Element::unit(n, field, ab));
                }
            }
        }
        p
    }

    pub fn from_entries<I>(n: Dimension, field: FieldSpec, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((BasisIndex, BasisIndex), Element)>,
    {
        let mut p = Product::zero(n, field);
        for ((a, b), value) in entries {
            if !n.contains(a) {
                return Err(Error::BadBasisIndex(a.i, a.j));
            }
            if !n.contains(b) {
                return Err(Error::BadBasisIndex(b.i, b.j));
            }
            if value.n() != n {
                return Err(Error::DimensionMismatch(n.n(), value.n().n()));
            }
            if value.field() != field {
                return Err(Error::FieldMismatch(field, value.field()));
            }
            let cur = p.value(a, b).add(&value);
            p.set_value(a, b, cur);
        }
        Ok(p)
    }

    pub fn n(&self) -> Dimension {
        self.n
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    pub fn set_value(&mut self, a: BasisIndex, b: BasisIndex, value: Element) {
        if value.is_zero() {
            self.table.remove(&(a, b));
        } else {
            self.table.insert((a, b), value);
        }
    }

    /// The value on a basis pair (zero element when absent).
    pub fn value(&self, a: BasisIndex, b: BasisIndex) -> Element {
        self.table
            .get(&(a, b))
            .cloned()
            .unwrap_or_else(|| Element::zero(self.n, self.field))
    }

    pub fn entries(&self) -> impl Iterator<Item = ((BasisIndex, BasisIndex), &Element)> {
        self.table.iter().map(|(k, v)| (*k, v))
    }

    fn check_compat_product(&self, other: &Product) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n.n(), other.n.n()));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        Ok(())
    }

    fn check_compat_element(&self, e: &Element) -> Result<()> {
        if self.n != e.n() {
            return Err(Error::DimensionMismatch(self.n.n(), e.n().n()));
        }
        if self.field != e.field() {
            return Err(Error::FieldMismatch(self.field, e.field()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Product) -> Product {
        self.check_compat_product(other).expect("product addition");
        let mut out = self.clone();
        for ((a, b), v) in other.entries() {
            let cur = out.value(a, b).add(v);
            out.set_value(a, b, cur);
        }
        out
    }

    pub fn sub(&self, other: &Product) -> Product {
        self.add(&other.scale(&(-&self.field.one())))
    }

    pub fn scale(&self, k: &Scalar) -> Product {
        if k.is_zero() {
            return Product::zero(self.n, self.field);
        }
        let mut out = Product::zero(self.n, self.field);
        for ((a, b), v) in self.entries() {
            out.set_value(a, b, v.scale(k));
        }
        out
    }

    /// `sum_k coeff_k * p_k`, all over the same (n, field).
    pub fn linear_combination(
        n: Dimension,
        field: FieldSpec,
        terms: &[(Scalar, &Product)],
    ) -> Product {
        let mut out = Product::zero(n, field);
        for (c, p) in terms {
            out = out.add(&p.scale(c));
        }
        out
    }

    /// Bilinear evaluation on arbitrary elements.
    pub fn eval(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check_compat_element(x)?;
        self.check_compat_element(y)?;
        let mut out = Element::zero(self.n, self.field);
        for (a, ca) in x.iter() {
            for (b, cb) in y.iter() {
                if let Some(v) = self.table.get(&(a, b)) {
                    out = out.add(&v.scale(&(ca * cb)));
                }
            }
        }
        Ok(out)
    }

    fn eval_elem_unit(&self, x: &Element, b: BasisIndex) -> Element {
        let mut out = Element::zero(self.n, self.field);
        for (a, ca) in x.iter() {
            if let Some(v) = self.table.get(&(a, b)) {
                out = out.add(&v.scale(ca));
            }
        }
        out
    }

    fn eval_unit_elem(&self, a: BasisIndex, y: &Element) -> Element {
        let mut out = Element::zero(self.n, self.field);
        for (b, cb) in y.iter() {
            if let Some(v) = self.table.get(&(a, b)) {
                out = out.add(&v.scale(cb));
            }
        }
        out
    }

    /// `[a,b,c] = (a*b)*c - a*(b*c)` under this product.
    pub fn associator(&self, a: &Element, b: &Element, c: &Element) -> Result<Element> {
        let left = self.eval(&self.eval(a, b)?, c)?;
        let right = self.eval(a, &self.eval(b, c)?)?;
        Ok(left.sub(&right))
    }

    fn associator_units(&self, a: BasisIndex, b: BasisIndex, c: BasisIndex) -> Element {
        let left = self.eval_elem_unit(&self.value(a, b), c);
        let right = self.eval_unit_elem(a, &self.value(b, c));
        left.sub(&right)
    }

    /// Lexicographically first basis triple with nonvanishing associator,
    /// together with its associator. `None` means the product is associative.
    pub fn first_nonassociative_triple(&self) -> Option<([BasisIndex; 3], Element)> {
        let basis = self.n.basis();
        for &a in &basis {
            for &b in &basis {
                for &c in &basis {
                    let v = self.associator_units(a, b, c);
                    if !v.is_zero() {
                        return Some(([a, b, c], v));
                    }
                }
            }
        }
        None
    }

    pub fn is_associative(&self) -> bool {
        self.first_nonassociative_triple().is_none()
    }

    /// The mutation of the canonical product by `x`: `a * b = a . x . b`.
    pub fn mutation(x: &Element) -> Product {
        let n = x.n();
        let field = x.field();
        let mut p = Product::zero(n, field);
        for a in n.basis() {
            let ax = x.left_mul_unit(a);
            if ax.is_zero() {
                continue;
            }
            for b in n.basis() {
                p.set_value(a, b, ax.right_mul_unit(b));
            }
        }
        p
    }

    /// The annihilator-valued product `e_{i,i+1} * e_{j,j+1} = mu[i][j] e_{1n}`
    /// on the complement of the square, zero elsewhere. `mu` is (n-1) x (n-1).
    pub fn annihilator_structure(
        n: Dimension,
        field: FieldSpec,
        mu: &[Vec<Scalar>],
    ) -> Result<Product> {
        let size = (n.n() - 1) as usize;
        if mu.len() != size || mu.iter().any(|row| row.len() != size) {
            return Err(Error::BadShape {
                expected: format!("{size}x{size}"),
                got: format!("{}x{}", mu.len(), mu.first().map_or(0, Vec::len)),
            });
        }
        let top = BasisIndex::new(1, n.n())?;
        let mut p = Product::zero(n, field);
        for (i, row) in mu.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if c.field() != field {
                    return Err(Error::FieldMismatch(field, c.field()));
                }
                let a = BasisIndex::new(i as u32 + 1, i as u32 + 2)?;
                let b = BasisIndex::new(j as u32 + 1, j as u32 + 2)?;
                p.set_value(a, b, Element::unit(n, field, top).scale(c));
            }
        }
        Ok(p)
    }

    /// The pushforward `a * b = L((L^-1 a) * (L^-1 b))` along an invertible map.
    pub fn pushforward(&self, map: &LinearMap) -> Result<Product> {
        self.transport(map, false)
    }

    /// The order-reversing pushforward `a * b = L((L^-1 b) * (L^-1 a))`;
    /// together with an antiautomorphism carrier it sends a structure to one
    /// of the same kind.
    pub fn opposite_pushforward(&self, map: &LinearMap) -> Result<Product> {
        self.transport(map, true)
    }

    fn transport(&self, map: &LinearMap, reverse: bool) -> Result<Product> {
        if map.n() != self.n {
            return Err(Error::DimensionMismatch(self.n.n(), map.n().n()));
        }
        if map.field() != self.field {
            return Err(Error::FieldMismatch(self.field, map.field()));
        }
        let inv = map.inverse()?;
        let preimages: Vec<Element> = self
            .n
            .basis()
            .into_iter()
            .map(|b| inv.apply_unit(b))
            .collect();
        let basis = self.n.basis();
        let mut out = Product::zero(self.n, self.field);
        for (ia, &a) in basis.iter().enumerate() {
            for (ib, &b) in basis.iter().enumerate() {
                let (x, y) = if reverse {
                    (&preimages[ib], &preimages[ia])
                } else {
                    (&preimages[ia], &preimages[ib])
                };
                let v = map.apply(&self.eval(x, y)?);
                out.set_value(a, b, v);
            }
        }
        Ok(out)
    }
}

/// An m x m matrix over the basis of UT_n (m = n(n-1)/2, lexicographic
/// order). Entry (r, c) is the coefficient of basis r in the image of
/// basis c.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    n: Dimension,
    field: FieldSpec,
    matrix: Vec<Scalar>, // row-major, m*m
}

impl LinearMap {
    pub fn new(n: Dimension, field: FieldSpec, matrix: Vec<Scalar>) -> Result<Self> {
        let m = n.basis_len();
        if matrix.len() != m * m {
            return Err(Error::BadShape {
                expected: format!("{m}x{m}"),
                got: format!("{} entries", matrix.len()),
            });
        }
        if let Some(bad) = matrix.iter().find(|s| s.field() != field) {
            return Err(Error::FieldMismatch(field, bad.field()));
        }
        Ok(LinearMap { n, field, matrix })
    }

    /// Builds a map from the images of the basis units.
    pub fn from_images(n: Dimension, field: FieldSpec, images: &[Element]) -> Result<Self> {
        let m = n.basis_len();
        if images.len() != m {
            return Err(Error::BadShape {
                expected: format!("{m} images"),
                got: format!("{}", images.len()),
            });
        }
        let mut matrix = vec![field.zero(); m * m];
        for (c, img) in images.iter().enumerate() {
            if img.n() != n {
                return Err(Error::DimensionMismatch(n.n(), img.n().n()));
            }
            if img.field() != field {
                return Err(Error::FieldMismatch(field, img.field()));
            }
            for (b, coef) in img.iter() {
                matrix[n.position(b) * m + c] = coef.clone();
            }
        }
        LinearMap::new(n, field, matrix)
    }

    pub fn identity(n: Dimension, field: FieldSpec) -> Self {
        let m = n.basis_len();
        let mut matrix = vec![field.zero(); m * m];
        for r in 0..m {
            matrix[r * m + r] = field.one();
        }
        LinearMap { n, field, matrix }
    }

    /// The flip involution `e_{ij} -> e_{n-j+1, n-i+1}`, an antiautomorphism
    /// carrier of UT_n; it is its own inverse.
    pub fn involution(n: Dimension, field: FieldSpec) -> Self {
        let m = n.basis_len();
        let mut matrix = vec![field.zero(); m * m];
        for (c, b) in n.basis().into_iter().enumerate() {
            let img = BasisIndex { i: n.n() - b.j + 1, j: n.n() - b.i + 1 };
            matrix[n.position(img) * m + c] = field.one();
        }
        LinearMap { n, field, matrix }
    }

    pub fn n(&self) -> Dimension {
        self.n
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn entry(&self, r: usize, c: usize) -> &Scalar {
        &self.matrix[r * self.n.basis_len() + c]
    }

    pub fn apply_unit(&self, b: BasisIndex) -> Element {
        let m = self.n.basis_len();
        let c = self.n.position(b);
        let mut out = Element::zero(self.n, self.field);
        for r in 0..m {
            let coef = &self.matrix[r * m + c];
            if !coef.is_zero() {
                out.set(self.n.basis_at(r), coef.clone());
            }
        }
        out
    }

    pub fn apply(&self, x: &Element) -> Element {
        let mut out = Element::zero(self.n, self.field);
        for (b, c) in x.iter() {
            out = out.add(&self.apply_unit(b).scale(c));
        }
        out
    }

    pub fn compose(&self, inner: &LinearMap) -> Result<LinearMap> {
        if self.n != inner.n {
            return Err(Error::DimensionMismatch(self.n.n(), inner.n.n()));
        }
        if self.field != inner.field {
            return Err(Error::FieldMismatch(self.field, inner.field));
        }
        let images: Vec<Element> = self
            .n
            .basis()
            .into_iter()
            .map(|b| self.apply(&inner.apply_unit(b)))
            .collect();
        LinearMap::from_images(self.n, self.field, &images)
    }

    /// Exact inverse by Gauss-Jordan elimination; errors when singular.
    pub fn inverse(&self) -> Result<LinearMap> {
        let m = self.n.basis_len();
        let mut a = self.matrix.clone();
        let mut inv = LinearMap::identity(self.n, self.field).matrix;
        for col in 0..m {
            let pivot = (col..m)
                .find(|&r| !a[r * m + col].is_zero())
                .ok_or(Error::SingularMap)?;
            if pivot != col {
                for k in 0..m {
                    a.swap(pivot * m + k, col * m + k);
                    inv.swap(pivot * m + k, col * m + k);
                }
            }
            let lead = a[col * m + col].inv()?;
            for k in 0..m {
                a[col * m + k] = &a[col * m + k] * &lead;
                inv[col * m + k] = &inv[col * m + k] * &lead;
            }
            for r in 0..m {
                if r == col || a[r * m + col].is_zero() {
                    continue;
                }
                let factor = a[r * m + col].clone();
                for k in 0..m {
                    a[r * m + k] = &a[r * m + k] - &(&factor * &a[col * m + k]);
                    inv[r * m + k] = &inv[r * m + k] - &(&factor * &inv[col * m + k]);
                }
            }
        }
        Ok(LinearMap { n: self.n, field: self.field, matrix: inv })
    }
}
