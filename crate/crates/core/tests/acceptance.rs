//! Acceptance suite: one test per headline claim, each printing a
//! PASS/FAIL line (run with `--nocapture` to see them). Every tolerance
//! here is exact equality; there is no floating point in the crate.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use utmatch::algebra::{BasisIndex, Dimension, Element, LinearMap, Product};
use utmatch::classify::{
    canonical_form, closed_form_associators, lambda_to_product, orbit_census, product_to_lambda,
    transform_lambda, Aut3Params, LambdaForm, LambdaVector,
};
use utmatch::families::{
    self, expected_count, family_basis, family_ids, make_family, mid_series_choice,
};
use utmatch::identities::{
    assemble, coordinates_in_span, generator_restriction_rank, kernel, membership, residual,
    IdentityKind,
};
use utmatch::scalar::{FieldSpec, Scalar};

fn q() -> FieldSpec {
    FieldSpec::Rationals
}

fn dim(n: u32) -> Dimension {
    Dimension::new(n).unwrap()
}

fn report(criterion: &str, pass: bool) {
    println!("[acceptance] {criterion}: {}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion failed: {criterion}");
}

fn random_scalar(rng: &mut ChaCha8Rng, field: FieldSpec) -> Scalar {
    match field {
        FieldSpec::Rationals => {
            Scalar::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=9)).unwrap()
        }
        FieldSpec::PrimeField(p) => field.integer(rng.gen_range(0..p) as i64),
    }
}

fn random_nonzero(rng: &mut ChaCha8Rng, field: FieldSpec) -> Scalar {
    loop {
        let s = random_scalar(rng, field);
        if !s.is_zero() {
            return s;
        }
    }
}

fn random_lambda(rng: &mut ChaCha8Rng, form: LambdaForm, field: FieldSpec) -> LambdaVector {
    let values = (0..form.coordinate_count()).map(|_| random_scalar(rng, field)).collect();
    LambdaVector::new(form, values).unwrap()
}

fn random_aut(rng: &mut ChaCha8Rng, field: FieldSpec) -> Aut3Params {
    Aut3Params::new(
        random_nonzero(rng, field),
        random_nonzero(rng, field),
        random_scalar(rng, field),
        random_scalar(rng, field),
    )
    .unwrap()
}

/// Uniformly samples the case ladder and fills the free coordinates of
/// that case, so each normal form is exercised.
fn random_associative_lambda(
    rng: &mut ChaCha8Rng,
    form: LambdaForm,
    field: FieldSpec,
) -> LambdaVector {
    let nz = |rng: &mut ChaCha8Rng| random_nonzero(rng, field);
    let any = |rng: &mut ChaCha8Rng| random_scalar(rng, field);
    let assign: Vec<(usize, Scalar)> = match form {
        LambdaForm::IdMatching => match rng.gen_range(0..7) {
            0 => {
                let l3 = nz(rng);
                vec![(3, l3.clone()), (7, l3), (2, any(rng)), (4, any(rng))]
            }
            1 => vec![(7, nz(rng)), (1, nz(rng)), (2, any(rng))],
            2 => vec![(7, nz(rng)), (2, any(rng))],
            3 => vec![(4, nz(rng)), (2, any(rng)), (5, any(rng)), (8, any(rng))],
            4 => {
                let l6 = nz(rng);
                vec![(6, l6.clone()), (1, l6), (2, any(rng)), (5, any(rng))]
            }
            5 => vec![(1, nz(rng)), (2, any(rng))],
            6 => vec![(5, any(rng)), (2, any(rng)), (8, any(rng))],
            _ => unreachable!(),
        },
        LambdaForm::TwelveMatching => match rng.gen_range(0..3) {
            0 => vec![(5, nz(rng)), (1, any(rng)), (2, any(rng))],
            1 => vec![(6, nz(rng)), (2, any(rng)), (4, any(rng))],
            _ => vec![(1, any(rng)), (2, any(rng)), (3, any(rng)), (4, any(rng))],
        },
        LambdaForm::Interchangeable => vec![
            (1, any(rng)),
            (2, any(rng)),
            (3, any(rng)),
            (4, any(rng)),
        ],
    };
    LambdaVector::with(form, field, &assign).unwrap()
}

// ------------------------------------------------------------------------

#[test]
fn criterion_1_dimension_table() {
    let expected: [(IdentityKind, [usize; 4]); 4] = [
        (IdentityKind::MatchId, [8, 22, 43, 71]),
        (IdentityKind::MatchTwelve, [6, 13, 24, 37]),
        (IdentityKind::Interchangeable, [6, 13, 23, 34]),
        (IdentityKind::TotallyCompatible, [4, 10, 17, 26]),
    ];
    let fields = [q(), FieldSpec::prime(5).unwrap()];
    let mut pass = true;
    for field in fields {
        for (kind, dims) in expected {
            for (k, nn) in (3u32..=6).enumerate() {
                let solved = kernel(&assemble(kind, dim(nn), field)).dimension();
                if solved != dims[k] {
                    eprintln!(
                        "dimension({}, n={nn}, {field}) = {solved}, expected {}",
                        kind.label(),
                        dims[k]
                    );
                    pass = false;
                }
            }
        }
    }
    report("criterion 1 (dimension table n=3..6 over Q and F_5)", pass);
}

#[test]
fn criterion_2_span_equals_kernel() {
    let kinds = [
        IdentityKind::MatchId,
        IdentityKind::MatchTwelve,
        IdentityKind::Interchangeable,
        IdentityKind::TotallyCompatible,
    ];
    let mut pass = true;
    for kind in kinds {
        for nn in 3u32..=6 {
            let n = dim(nn);
            let basis = family_basis(kind, n, q()).unwrap();
            let kb = kernel(&assemble(kind, n, q()));

            for (id, p) in family_ids(kind, n).unwrap().iter().zip(&basis) {
                if !residual(kind, p).is_empty() {
                    eprintln!("{id} violates {} at n={nn}", kind.label());
                    pass = false;
                }
                if membership(p, &kb).is_none() {
                    eprintln!("{id} is outside the kernel at n={nn}");
                    pass = false;
                }
            }
            // linear independence: greedy rank over the running span
            let mut seen: Vec<Product> = Vec::new();
            for p in &basis {
                if coordinates_in_span(p, &seen).is_none() {
                    seen.push(p.clone());
                }
            }
            if seen.len() != basis.len() {
                eprintln!("family list of {} at n={nn} is dependent", kind.label());
                pass = false;
            }
            // kernel inside the family span
            for v in &kb.basis {
                if coordinates_in_span(v, &basis).is_none() {
                    eprintln!("kernel vector escapes the family span: {} n={nn}", kind.label());
                    pass = false;
                }
            }
            if kb.dimension() != basis.len() || basis.len() != expected_count(kind, n).unwrap() {
                eprintln!(
                    "count mismatch for {} at n={nn}: kernel {}, families {}",
                    kind.label(),
                    kb.dimension(),
                    basis.len()
                );
                pass = false;
            }
        }
    }
    report("criterion 2 (families span the kernel, both directions)", pass);
}

#[test]
fn criterion_3_closed_form_associators() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let fields = [q(), FieldSpec::prime(7).unwrap()];
    let forms = [
        LambdaForm::IdMatching,
        LambdaForm::TwelveMatching,
        LambdaForm::Interchangeable,
    ];
    let n = dim(3);
    let basis = n.basis();
    let mut pass = true;
    for field in fields {
        for form in forms {
            for _ in 0..200 {
                let v = random_lambda(&mut rng, form, field);
                let p = lambda_to_product(&v);
                let table = closed_form_associators(&v);
                for &a in &basis {
                    for &b in &basis {
                        for &c in &basis {
                            let direct = p
                                .associator(
                                    &Element::unit(n, field, a),
                                    &Element::unit(n, field, b),
                                    &Element::unit(n, field, c),
                                )
                                .unwrap();
                            let closed = table
                                .get(&[a, b, c])
                                .cloned()
                                .unwrap_or_else(|| Element::zero(n, field));
                            if direct != closed {
                                eprintln!(
                                    "{form:?} over {field}: [{a}, {b}, {c}] closed {closed} vs direct {direct}"
                                );
                                pass = false;
                            }
                        }
                    }
                }
            }
        }
    }
    report("criterion 3 (closed-form associators match direct evaluation)", pass);
}

#[test]
fn criterion_4_transform_formulas_match_pushforward() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let fields = [q(), FieldSpec::prime(7).unwrap()];
    let mut pass = true;
    for field in fields {
        for form in [LambdaForm::IdMatching, LambdaForm::TwelveMatching] {
            for _ in 0..200 {
                let v = random_lambda(&mut rng, form, field);
                let aut = random_aut(&mut rng, field);
                // closed-form route
                let closed = transform_lambda(&v, &aut);
                // generic route: transport the product and read coordinates
                let moved = lambda_to_product(&v)
                    .pushforward(&utmatch::classify::aut3_map(&aut))
                    .unwrap();
                let generic = product_to_lambda(&moved, form).unwrap();
                if closed != generic {
                    eprintln!("{form:?} over {field}: closed {closed:?} vs generic {generic:?}");
                    pass = false;
                }
            }
        }
    }
    report("criterion 4 (coordinate transform formulas equal the pushforward)", pass);
}

#[test]
fn criterion_5_orbit_census_bijection() {
    // survivors, orbit count, and orbits per case: computed once by the
    // exhaustive oracle (union-find over the full group action) and frozen.
    struct Golden {
        kind: IdentityKind,
        q: u32,
        survivors: usize,
        orbits: usize,
        per_case: &'static [(u8, usize)],
    }
    let goldens = [
        Golden {
            kind: IdentityKind::MatchId,
            q: 2,
            survivors: 30,
            orbits: 21,
            per_case: &[(1, 1), (2, 1), (3, 1), (4, 8), (5, 1), (6, 1), (7, 4), (8, 4)],
        },
        Golden {
            kind: IdentityKind::MatchId,
            q: 3,
            survivors: 141,
            orbits: 50,
            per_case: &[(1, 1), (2, 1), (3, 1), (4, 27), (5, 1), (6, 1), (7, 9), (8, 9)],
        },
        Golden {
            kind: IdentityKind::MatchTwelve,
            q: 2,
            survivors: 24,
            orbits: 18,
            per_case: &[(1, 1), (2, 1), (3, 8), (4, 4), (5, 4)],
        },
        Golden {
            kind: IdentityKind::MatchTwelve,
            q: 3,
            survivors: 117,
            orbits: 47,
            per_case: &[(1, 1), (2, 1), (3, 27), (4, 9), (5, 9)],
        },
        Golden {
            kind: IdentityKind::Interchangeable,
            q: 2,
            survivors: 16,
            orbits: 16,
            per_case: &[(1, 8), (2, 4), (3, 4)],
        },
        Golden {
            kind: IdentityKind::Interchangeable,
            q: 3,
            survivors: 81,
            orbits: 45,
            per_case: &[(1, 27), (2, 9), (3, 9)],
        },
    ];
    let mut pass = true;
    for g in goldens {
        let census = orbit_census(g.kind, g.q).unwrap();
        if !census.violations.is_empty() {
            for v in &census.violations {
                eprintln!("{} q={}: {v}", g.kind.label(), g.q);
            }
            pass = false;
        }
        if census.survivor_count != g.survivors || census.orbit_count != g.orbits {
            eprintln!(
                "{} q={}: survivors {} orbits {}, expected {} / {}",
                g.kind.label(),
                g.q,
                census.survivor_count,
                census.orbit_count,
                g.survivors,
                g.orbits
            );
            pass = false;
        }
        let mut per_case: BTreeMap<u8, usize> = BTreeMap::new();
        for row in &census.rows {
            *per_case.entry(row.class.case).or_default() += 1;
        }
        let golden_map: BTreeMap<u8, usize> = g.per_case.iter().cloned().collect();
        if per_case != golden_map {
            eprintln!(
                "{} q={}: per-case orbit counts {per_case:?}, expected {golden_map:?}",
                g.kind.label(),
                g.q
            );
            pass = false;
        }
        // sizes add up to the survivor count
        let total: usize = census.rows.iter().map(|r| r.orbit_size).sum();
        if total != census.survivor_count {
            eprintln!("{} q={}: orbit sizes sum to {total}", g.kind.label(), g.q);
            pass = false;
        }
    }
    report("criterion 5 (orbit census bijection over F_2 and F_3)", pass);
}

#[test]
fn criterion_6_canonical_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let forms = [
        LambdaForm::IdMatching,
        LambdaForm::TwelveMatching,
        LambdaForm::Interchangeable,
    ];
    let mut pass = true;
    for form in forms {
        for _ in 0..500 {
            let v = random_associative_lambda(&mut rng, form, q());
            let (class, witness) = canonical_form(&v).unwrap();
            // witness lands exactly on the representative
            let rep = class.representative(q()).unwrap();
            if transform_lambda(&v, &witness) != rep {
                eprintln!("{form:?}: witness misses the representative");
                pass = false;
            }
            // the class is invariant under a random automorphism
            let aut = random_aut(&mut rng, q());
            let moved = transform_lambda(&v, &aut);
            let (class2, _) = canonical_form(&moved).unwrap();
            if class2 != class {
                eprintln!("{form:?}: class changed under an automorphism");
                pass = false;
            }
        }
    }
    report("criterion 6 (canonical class invariant, witness exact)", pass);
}

#[test]
fn criterion_7_construction_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut pass = true;
    for nn in 3u32..=6 {
        let n = dim(nn);
        // mutations satisfy the id-matching identity
        for _ in 0..100 {
            let coeffs: Vec<(BasisIndex, Scalar)> = n
                .basis()
                .into_iter()
                .map(|b| (b, random_scalar(&mut rng, q())))
                .collect();
            let x = Element::from_coeffs(n, q(), coeffs).unwrap();
            let p = Product::mutation(&x);
            if !residual(IdentityKind::MatchId, &p).is_empty() {
                eprintln!("mutation violates id-matching at n={nn}");
                pass = false;
            }
        }
        // annihilator-valued products are associative and totally compatible
        for _ in 0..100 {
            let size = (nn - 1) as usize;
            let mu: Vec<Vec<Scalar>> = (0..size)
                .map(|_| (0..size).map(|_| random_scalar(&mut rng, q())).collect())
                .collect();
            let p = Product::annihilator_structure(n, q(), &mu).unwrap();
            if !residual(IdentityKind::TotallyCompatible, &p).is_empty() {
                eprintln!("annihilator product violates total compatibility at n={nn}");
                pass = false;
            }
            if !p.is_associative() {
                eprintln!("annihilator product is not associative at n={nn}");
                pass = false;
            }
        }
        // random combinations of the totally-compatible families
        let basis = family_basis(IdentityKind::TotallyCompatible, n, q()).unwrap();
        for _ in 0..100 {
            let terms: Vec<(Scalar, &Product)> = basis
                .iter()
                .map(|p| (random_scalar(&mut rng, q()), p))
                .collect();
            let combo = Product::linear_combination(n, q(), &terms);
            if !combo.is_associative()
                || !residual(IdentityKind::TotallyCompatible, &combo).is_empty()
            {
                eprintln!("combination of totally-compatible families misbehaves at n={nn}");
                pass = false;
            }
        }
    }
    report("criterion 7 (mutations, annihilator products, total combinations)", pass);
}

#[test]
fn criterion_8_flip_transport_preserves_kind_and_associativity() {
    let mut pass = true;
    for kind in IdentityKind::ALL {
        for nn in 3u32..=5 {
            let n = dim(nn);
            let phi = LinearMap::involution(n, q());
            let kb = kernel(&assemble(kind, n, q()));
            for v in &kb.basis {
                let star = v.opposite_pushforward(&phi).unwrap();
                if !residual(kind, &star).is_empty() {
                    eprintln!("flip transport leaves {} kernel at n={nn}", kind.label());
                    pass = false;
                }
                if membership(&star, &kb).is_none() {
                    eprintln!("flip transport escapes the {} kernel at n={nn}", kind.label());
                    pass = false;
                }
                if v.is_associative() != star.is_associative() {
                    eprintln!("flip transport changed associativity, {} n={nn}", kind.label());
                    pass = false;
                }
            }
        }
    }
    report("criterion 8 (flip transport stays in kernel, keeps associativity)", pass);
}

#[test]
fn criterion_9_generator_restriction_rank() {
    let mut pass = true;
    for nn in 3u32..=6 {
        let n = dim(nn);
        let rank = generator_restriction_rank(IdentityKind::MatchId, n, q()).unwrap();
        let dimension = kernel(&assemble(IdentityKind::MatchId, n, q())).dimension();
        if rank != dimension {
            eprintln!("generator restriction rank {rank} != dimension {dimension} at n={nn}");
            pass = false;
        }
    }
    report("criterion 9 (id-matching solutions pinned by generator values)", pass);
}

#[test]
fn criterion_10_triple_constructor_fidelity() {
    let mut pass = true;
    for nn in 3u32..=6 {
        let n = dim(nn);
        for id in family_ids(IdentityKind::MatchId, n).unwrap() {
            let (i, j) = (id.indices[0], id.indices[1]);
            let c = mid_series_choice(id.series, i, j, n, q()).unwrap();
            let built = families::product_from_triple(n, i, j, &c).unwrap();
            let expected = make_family(&id, n, q()).unwrap();
            if built != expected {
                eprintln!("triple constructor misses {id} at n={nn}");
                pass = false;
            }
        }
    }
    report("criterion 10 (single-value constructor rebuilds the Mid series)", pass);
}
