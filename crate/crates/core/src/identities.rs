//! Compatibility identities between the canonical product `.` and an
//! unknown product `*`, their residual checks, and the exact linear
//! solver for the space of products satisfying a fixed identity.
//!
//! With `.` fixed, each identity is linear in `*`, so its solution set is
//! the kernel of a sparse homogeneous system over the structure constants
//! `c^{t}_{(a,b)}` (value of `e_a * e_b` at coordinate `t`). Unknowns are
//! ordered lexicographically by `(a, b, t)`; elimination is exact
//! Gauss-Jordan with first-nonzero pivoting, which makes every kernel
//! basis a canonical, reproducible artifact.

use std::collections::BTreeMap;

use crate::algebra::{unit_product, BasisIndex, Dimension, Element, Product};
use crate::error::{Error, Result};
use crate::exec;
use crate::scalar::{FieldSpec, Scalar};

/// The five identity kinds relating `.` and `*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IdentityKind {
    Compatible,
    MatchId,
    MatchTwelve,
    Interchangeable,
    TotallyCompatible,
}

impl IdentityKind {
    pub const ALL: [IdentityKind; 5] = [
        IdentityKind::Compatible,
        IdentityKind::MatchId,
        IdentityKind::MatchTwelve,
        IdentityKind::Interchangeable,
        IdentityKind::TotallyCompatible,
    ];

    /// Stable machine name used in CLI flags and CSV columns.
    pub fn short(self) -> &'static str {
        match self {
            IdentityKind::Compatible => "compat",
            IdentityKind::MatchId => "id",
            IdentityKind::MatchTwelve => "12",
            IdentityKind::Interchangeable => "inter",
            IdentityKind::TotallyCompatible => "total",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            IdentityKind::Compatible => "compatible",
            IdentityKind::MatchId => "id-matching",
            IdentityKind::MatchTwelve => "(12)-matching",
            IdentityKind::Interchangeable => "interchangeable",
            IdentityKind::TotallyCompatible => "totally-compatible",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        IdentityKind::ALL
            .into_iter()
            .find(|k| k.short() == text)
            .ok_or_else(|| {
                Error::InvalidInput(format!(
                    "unknown identity kind {text:?} (expected id|12|inter|total|compat)"
                ))
            })
    }

    /// The defining equations, each `sum of signed monomials = 0`.
    fn equations(self) -> &'static [Equation] {
        use Term::*;
        const COMPAT: [Equation; 1] = [Equation {
            tag: "(a.b)*c + (a*b).c = a.(b*c) + a*(b.c)",
            terms: &[(1, DotStarLeft), (1, StarDotLeft), (-1, DotStarRight), (-1, StarDotRight)],
        }];
        const MATCH_ID: [Equation; 2] = [
            Equation { tag: "(a.b)*c = a.(b*c)", terms: &[(1, DotStarLeft), (-1, DotStarRight)] },
            Equation { tag: "(a*b).c = a*(b.c)", terms: &[(1, StarDotLeft), (-1, StarDotRight)] },
        ];
        const MATCH_TWELVE: [Equation; 2] = [
            Equation { tag: "(a.b)*c = a*(b.c)", terms: &[(1, DotStarLeft), (-1, StarDotRight)] },
            Equation { tag: "(a*b).c = a.(b*c)", terms: &[(1, StarDotLeft), (-1, DotStarRight)] },
        ];
        const INTER: [Equation; 2] = [
            Equation { tag: "(a.b)*c = (a*b).c", terms: &[(1, DotStarLeft), (-1, StarDotLeft)] },
            Equation { tag: "a.(b*c) = a*(b.c)", terms: &[(1, DotStarRight), (-1, StarDotRight)] },
        ];
        const TOTAL: [Equation; 3] = [
            Equation { tag: "(a.b)*c = (a*b).c", terms: &[(1, DotStarLeft), (-1, StarDotLeft)] },
            Equation { tag: "(a.b)*c = a.(b*c)", terms: &[(1, DotStarLeft), (-1, DotStarRight)] },
            Equation { tag: "(a.b)*c = a*(b.c)", terms: &[(1, DotStarLeft), (-1, StarDotRight)] },
        ];
        match self {
            IdentityKind::Compatible => &COMPAT,
            IdentityKind::MatchId => &MATCH_ID,
            IdentityKind::MatchTwelve => &MATCH_TWELVE,
            IdentityKind::Interchangeable => &INTER,
            IdentityKind::TotallyCompatible => &TOTAL,
        }
    }

    pub fn equation_tags(self) -> Vec<&'static str> {
        self.equations().iter().map(|e| e.tag).collect()
    }
}

/// The four monomials that occur in the identities, for a basis triple
/// `(a, b, c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Term {
    /// `(a.b)*c`
    DotStarLeft,
    /// `(a*b).c`
    StarDotLeft,
    /// `a.(b*c)`
    DotStarRight,
    /// `a*(b.c)`
    StarDotRight,
}

struct Equation {
    tag: &'static str,
    terms: &'static [(i8, Term)],
}

fn term_value(p: &Product, term: Term, a: BasisIndex, b: BasisIndex, c: BasisIndex) -> Element {
    match term {
        Term::DotStarLeft => match unit_product(a, b) {
            Some(ab) => p.value(ab, c),
            None => Element::zero(p.n(), p.field()),
        },
        Term::StarDotLeft => p.value(a, b).right_mul_unit(c),
        Term::DotStarRight => p.value(b, c).left_mul_unit(a),
        Term::StarDotRight => match unit_product(b, c) {
            Some(bc) => p.value(a, bc),
            None => Element::zero(p.n(), p.field()),
        },
    }
}

/// One violated equation instance: the basis triple, which defining
/// equation failed, and the nonzero difference element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualEntry {
    pub triple: [BasisIndex; 3],
    pub equation: &'static str,
    pub value: Element,
}

/// All violations of an identity, sorted by triple then equation order.
/// Empty exactly when the identity holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualReport {
    pub entries: Vec<ResidualEntry>,
}

impl ResidualReport {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn first(&self) -> Option<&ResidualEntry> {
        self.entries.first()
    }
}

fn all_triples(n: Dimension) -> Vec<[BasisIndex; 3]> {
    let basis = n.basis();
    let mut out = Vec::with_capacity(basis.len().pow(3));
    for &a in &basis {
        for &b in &basis {
            for &c in &basis {
                out.push([a, b, c]);
            }
        }
    }
    out
}

fn triple_entries(kind: IdentityKind, p: &Product, t: [BasisIndex; 3]) -> Vec<ResidualEntry> {
    let [a, b, c] = t;
    let mut out = Vec::new();
    for eq in kind.equations() {
        let mut acc = Element::zero(p.n(), p.field());
        for &(sign, term) in eq.terms {
            let v = term_value(p, term, a, b, c);
            acc = if sign >= 0 { acc.add(&v) } else { acc.sub(&v) };
        }
        if !acc.is_zero() {
            out.push(ResidualEntry { triple: t, equation: eq.tag, value: acc });
        }
    }
    out
}

/// Evaluates every defining equation of `kind` on all basis triples.
pub fn residual(kind: IdentityKind, p: &Product) -> ResidualReport {
    let entries = exec::flat_map_collect(all_triples(p.n()), |t| triple_entries(kind, p, *t));
    ResidualReport { entries }
}

/// Single-threaded reference path for [`residual`].
pub fn residual_seq(kind: IdentityKind, p: &Product) -> ResidualReport {
    let entries = exec::flat_map_collect_seq(all_triples(p.n()), |t| triple_entries(kind, p, *t));
    ResidualReport { entries }
}

/// Column of the unknown `c^{t}_{(a,b)}` in the flattened order.
pub fn column_of(n: Dimension, a: BasisIndex, b: BasisIndex, t: BasisIndex) -> usize {
    let m = n.basis_len();
    (n.position(a) * m + n.position(b)) * m + n.position(t)
}

/// A product as a sparse coordinate vector in the unknown order.
pub fn flatten(p: &Product) -> Vec<(usize, Scalar)> {
    let n = p.n();
    let mut out = Vec::new();
    for ((a, b), v) in p.entries() {
        for (t, c) in v.iter() {
            out.push((column_of(n, a, b, t), c.clone()));
        }
    }
    out
}

/// Inverse of [`flatten`]; later duplicates accumulate.
pub fn unflatten<I>(n: Dimension, field: FieldSpec, coords: I) -> Product
where
    I: IntoIterator<Item = (usize, Scalar)>,
{
    let m = n.basis_len();
    let mut p = Product::zero(n, field);
    let mut grouped: BTreeMap<(BasisIndex, BasisIndex), Vec<(BasisIndex, Scalar)>> =
        BTreeMap::new();
    for (col, c) in coords {
        let t = n.basis_at(col % m);
        let pair = col / m;
        let a = n.basis_at(pair / m);
        let b = n.basis_at(pair % m);
        grouped.entry((a, b)).or_default().push((t, c));
    }
    for ((a, b), coeffs) in grouped {
        let v = Element::from_coeffs(n, field, coeffs).expect("valid coordinates");
        p.set_value(a, b, v);
    }
    p
}

pub type SparseRow = Vec<(usize, Scalar)>;

/// The homogeneous linear system cut out by one identity kind, over the
/// structure constants of `*`.
#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    pub kind: IdentityKind,
    pub n: Dimension,
    pub field: FieldSpec,
    pub cols: usize,
    pub rows: Vec<SparseRow>,
}

fn triple_rows(
    kind: IdentityKind,
    n: Dimension,
    field: FieldSpec,
    t: [BasisIndex; 3],
) -> Vec<SparseRow> {
    let [a, b, c] = t;
    let basis = n.basis();
    let mut rows = Vec::new();
    for eq in kind.equations() {
        // coordinate position -> column -> accumulated coefficient
        let mut by_coord: BTreeMap<usize, BTreeMap<usize, Scalar>> = BTreeMap::new();
        let mut put = |coord: BasisIndex, col: usize, sign: i8| {
            let slot = by_coord
                .entry(n.position(coord))
                .or_default()
                .entry(col)
                .or_insert_with(|| field.zero());
            let delta = field.integer(sign as i64);
            *slot = &*slot + &delta;
        };
        for &(sign, term) in eq.terms {
            match term {
                Term::DotStarLeft => {
                    if let Some(ab) = unit_product(a, b) {
                        for &t in &basis {
                            put(t, column_of(n, ab, c, t), sign);
                        }
                    }
                }
                Term::StarDotRight => {
                    if let Some(bc) = unit_product(b, c) {
                        for &t in &basis {
                            put(t, column_of(n, a, bc, t), sign);
                        }
                    }
                }
                Term::StarDotLeft => {
                    // (e_a * e_b).e_c hits coordinate (t.i, c.j) for t with t.j = c.i
                    for &t in &basis {
                        if let Some(s) = unit_product(t, c) {
                            put(s, column_of(n, a, b, t), sign);
                        }
                    }
                }
                Term::DotStarRight => {
                    // e_a.(e_b * e_c) hits coordinate (a.i, t.j) for t with t.i = a.j
                    for &t in &basis {
                        if let Some(s) = unit_product(a, t) {
                            put(s, column_of(n, b, c, t), sign);
                        }
                    }
                }
            }
        }
        for (_, cols) in by_coord {
            let row: SparseRow = cols.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            if !row.is_empty() {
                rows.push(row);
            }
        }
    }
    rows
}

/// Builds the constraint system of `kind` on UT_n over `field`.
pub fn assemble(kind: IdentityKind, n: Dimension, field: FieldSpec) -> ConstraintSystem {
    let rows = exec::flat_map_collect(all_triples(n), |t| triple_rows(kind, n, field, *t));
    ConstraintSystem { kind, n, field, cols: n.basis_len().pow(3), rows }
}

/// Single-threaded reference path for [`assemble`].
pub fn assemble_seq(kind: IdentityKind, n: Dimension, field: FieldSpec) -> ConstraintSystem {
    let rows = exec::flat_map_collect_seq(all_triples(n), |t| triple_rows(kind, n, field, *t));
    ConstraintSystem { kind, n, field, cols: n.basis_len().pow(3), rows }
}

/// A deterministic reduced-echelon basis of the solution space of a
/// [`ConstraintSystem`]. `pivots[k]` is the unknown column where basis
/// vector `k` has its leading 1; that column is zero in every other
/// basis vector.
#[derive(Debug, Clone)]
pub struct KernelBasis {
    pub kind: IdentityKind,
    pub n: Dimension,
    pub field: FieldSpec,
    pub basis: Vec<Product>,
    pub pivots: Vec<usize>,
}

impl KernelBasis {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// Row-echelon accumulator over sparse rows; pivot of a row is its first
/// nonzero column. Used for both the kernel solver and rank checks.
pub(crate) struct Echelon {
    // (pivot column, normalized row) sorted by pivot column
    rows: Vec<(usize, BTreeMap<usize, Scalar>)>,
}

impl Echelon {
    pub(crate) fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    pub(crate) fn pivot_cols(&self) -> Vec<usize> {
        self.rows.iter().map(|(c, _)| *c).collect()
    }

    /// Reduces `row` against the current rows and inserts the remainder
    /// when nonzero. Returns the new pivot column, or `None` when the row
    /// was dependent.
    pub(crate) fn insert(&mut self, row: SparseRow) -> Option<usize> {
        let mut work: BTreeMap<usize, Scalar> =
            row.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        loop {
            let Some((&lead, _)) = work.iter().next() else {
                return None; // reduced to zero
            };
            match self.rows.binary_search_by_key(&lead, |(c, _)| *c) {
                Ok(idx) => {
                    let factor = work[&lead].clone();
                    let pivot_row = self.rows[idx].1.clone();
                    sub_scaled(&mut work, &pivot_row, &factor);
                }
                Err(slot) => {
                    let lead_coef = work[&lead].clone();
                    let inv = lead_coef.inv().expect("leading coefficient is nonzero");
                    for c in work.values_mut() {
                        *c = &*c * &inv;
                    }
                    self.rows.insert(slot, (lead, work));
                    return Some(lead);
                }
            }
        }
    }

    /// Back-substitutes so every pivot column occurs in exactly one row.
    pub(crate) fn reduce_fully(&mut self) {
        for k in (0..self.rows.len()).rev() {
            let (col, row) = self.rows[k].clone();
            for l in 0..k {
                if let Some(f) = self.rows[l].1.get(&col).cloned() {
                    sub_scaled(&mut self.rows[l].1, &row, &f);
                }
            }
        }
    }

    pub(crate) fn rows(&self) -> &[(usize, BTreeMap<usize, Scalar>)] {
        &self.rows
    }
}

fn sub_scaled(target: &mut BTreeMap<usize, Scalar>, row: &BTreeMap<usize, Scalar>, f: &Scalar) {
    for (col, c) in row {
        let delta = c * f;
        match target.get_mut(col) {
            Some(cur) => {
                *cur = &*cur - &delta;
                if cur.is_zero() {
                    target.remove(col);
                }
            }
            None => {
                target.insert(*col, -&delta);
            }
        }
    }
}

/// Exact kernel of the constraint system. Every returned basis vector is
/// re-verified to have an empty residual before being handed out.
pub fn kernel(system: &ConstraintSystem) -> KernelBasis {
    let mut ech = Echelon::new();
    for row in &system.rows {
        ech.insert(row.clone());
    }
    ech.reduce_fully();

    let pivot_cols = ech.pivot_cols();
    let mut is_pivot = vec![false; system.cols];
    for &c in &pivot_cols {
        is_pivot[c] = true;
    }
    let free_cols: Vec<usize> = (0..system.cols).filter(|&c| !is_pivot[c]).collect();

    let mut basis = Vec::with_capacity(free_cols.len());
    for &f in &free_cols {
        let mut coords: Vec<(usize, Scalar)> = vec![(f, system.field.one())];
        for (p, row) in ech.rows() {
            if let Some(c) = row.get(&f) {
                coords.push((*p, -c));
            }
        }
        basis.push(unflatten(system.n, system.field, coords));
    }

    for b in &basis {
        let check = residual(system.kind, b);
        assert!(
            check.is_empty(),
            "solver produced a vector violating {} at {:?}",
            system.kind.label(),
            check.first().map(|e| (e.triple, e.equation)),
        );
    }

    KernelBasis {
        kind: system.kind,
        n: system.n,
        field: system.field,
        basis,
        pivots: free_cols,
    }
}

/// Dimension of the solution space of `kind` on UT_n over `field`.
pub fn dimension(kind: IdentityKind, n: Dimension, field: FieldSpec) -> usize {
    kernel(&assemble(kind, n, field)).dimension()
}

/// Exact coordinates of `p` in a kernel basis, or `None` when `p` lies
/// outside the span (or lives over a different (n, field)).
pub fn membership(p: &Product, basis: &KernelBasis) -> Option<Vec<Scalar>> {
    if p.n() != basis.n || p.field() != basis.field {
        return None;
    }
    let target: BTreeMap<usize, Scalar> = flatten(p).into_iter().collect();
    let coords: Vec<Scalar> = basis
        .pivots
        .iter()
        .map(|c| target.get(c).cloned().unwrap_or_else(|| basis.field.zero()))
        .collect();
    // reconstruct and compare
    let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
    for (k, b) in basis.basis.iter().enumerate() {
        if coords[k].is_zero() {
            continue;
        }
        for (col, c) in flatten(b) {
            let add = &c * &coords[k];
            match acc.get_mut(&col) {
                Some(cur) => {
                    *cur = &*cur + &add;
                    if cur.is_zero() {
                        acc.remove(&col);
                    }
                }
                None => {
                    if !add.is_zero() {
                        acc.insert(col, add);
                    }
                }
            }
        }
    }
    (acc == target).then_some(coords)
}

/// Solves `sum_k x_k * span[k] = p` exactly; any one solution is returned.
pub fn coordinates_in_span(p: &Product, span: &[Product]) -> Option<Vec<Scalar>> {
    if span.is_empty() {
        return p.is_zero().then_some(vec![]);
    }
    let field = span[0].field();
    let k = span.len();
    // Rows are indexed by coordinate positions; unknowns by span index.
    let mut positions: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
    for (idx, v) in span.iter().enumerate() {
        for (col, c) in flatten(v) {
            positions.entry(col).or_default().push((idx, c));
        }
    }
    let target: BTreeMap<usize, Scalar> = flatten(p).into_iter().collect();
    for col in target.keys() {
        positions.entry(*col).or_default();
    }
    // Dense augmented elimination over k+1 columns.
    let mut ech = Echelon::new();
    for (col, coeffs) in positions {
        let mut row: SparseRow = coeffs;
        if let Some(rhs) = target.get(&col) {
            row.push((k, rhs.clone()));
        }
        ech.insert(row);
    }
    ech.reduce_fully();
    let mut solution = vec![field.zero(); k];
    for (pivot, row) in ech.rows() {
        if *pivot == k {
            return None; // 0 = nonzero rhs: inconsistent
        }
        // free unknowns stay zero, so x_pivot = rhs
        solution[*pivot] = row.get(&k).cloned().unwrap_or_else(|| field.zero());
    }
    // The elimination can leave x_pivot entangled with free unknowns; since
    // the free ones are pinned to zero the reduced row gives the value
    // directly. Verify before answering.
    let terms: Vec<(Scalar, &Product)> = solution.iter().cloned().zip(span.iter()).collect();
    let combo = Product::linear_combination(p.n(), field, &terms);
    (&combo == p).then_some(solution)
}

/// Rank of the map restricting kernel vectors of the id-matching identity
/// to the generator pairs `(e_{i,i+1}, e_{j,j+1})`. Equality with the
/// kernel dimension says a solution is pinned down by its generator values.
pub fn generator_restriction_rank(
    kind: IdentityKind,
    n: Dimension,
    field: FieldSpec,
) -> Result<usize> {
    if kind != IdentityKind::MatchId {
        return Err(Error::Unsupported(format!(
            "generator restriction rank is defined for the id-matching kind, not {}",
            kind.label()
        )));
    }
    let basis = kernel(&assemble(kind, n, field));
    let m = n.basis_len();
    let gens: Vec<BasisIndex> = (1..n.n())
        .map(|i| BasisIndex::new(i, i + 1).expect("generator index"))
        .collect();
    let mut ech = Echelon::new();
    for v in &basis.basis {
        let mut row: SparseRow = Vec::new();
        for (gi, &a) in gens.iter().enumerate() {
            for (gj, &b) in gens.iter().enumerate() {
                let val = v.value(a, b);
                for (t, c) in val.iter() {
                    row.push(((gi * gens.len() + gj) * m + n.position(t), c.clone()));
                }
            }
        }
        ech.insert(row);
    }
    Ok(ech.rank())
}
