//! Batch front end: dimension tables, family verification, residual
//! checks, kernel export, UT_3 classification, orbit census, family
//! construction and product transport, all with deterministic output.
//!
//! Exit codes: 0 success, 1 a mathematical check failed, 2 usage or
//! parse error.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use utmatch::algebra::{Dimension, LinearMap, Product};
use utmatch::classify::{
    aut3_map, canonical_form, orbit_census, product_to_lambda, Aut3Params, LambdaForm,
};
use utmatch::codec;
use utmatch::families::{self, FamilyId};
use utmatch::identities::{self, IdentityKind};
use utmatch::scalar::{FieldSpec, Scalar};

#[derive(Parser)]
#[command(name = "utmatch", version)]
#[command(about = "Exact solver and classifier for compatible bilinear structures on UT_n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// Coefficient field: Q or Fp:<p>
    #[arg(long, default_value = "Q", value_parser = parse_field)]
    field: FieldSpec,

    /// Output format
    #[arg(long, default_value = "text")]
    format: String,

    /// Seed for the randomized spot checks
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Write output to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve every identity kind for n = 3..max-n and compare against the
    /// closed-form dimension counts
    Dim {
        #[command(flatten)]
        common: CommonOpts,
        /// Largest n to solve (3..=8; above 6 is slow)
        #[arg(long = "max-n", default_value_t = 6)]
        max_n: u32,
    },
    /// Verify that the family list of a kind is independent, satisfies its
    /// identity, and spans exactly the solver kernel
    Verify {
        #[command(flatten)]
        common: CommonOpts,
        /// Identity kind: id|12|inter|total
        #[arg(long, value_parser = parse_kind)]
        kind: IdentityKind,
        #[arg(long, default_value_t = 3)]
        n: u32,
    },
    /// Residual report of a product file against all five identity kinds,
    /// plus an associativity verdict
    Check {
        #[command(flatten)]
        common: CommonOpts,
        /// Product JSON file
        file: PathBuf,
    },
    /// Classify an n = 3 product up to isomorphism within its kind
    Classify3 {
        #[command(flatten)]
        common: CommonOpts,
        /// Identity kind: id|12|inter
        #[arg(long, value_parser = parse_kind)]
        kind: IdentityKind,
        /// Product JSON file
        file: PathBuf,
    },
    /// Exhaustive orbit census over a small prime field (n = 3)
    Orbits {
        #[command(flatten)]
        common: CommonOpts,
        /// Identity kind: id|12|inter
        #[arg(long, value_parser = parse_kind)]
        kind: IdentityKind,
    },
    /// Export the deterministic kernel basis of a kind as JSON
    Kernel {
        #[command(flatten)]
        common: CommonOpts,
        /// Identity kind: id|12|inter|total|compat
        #[arg(long, value_parser = parse_kind)]
        kind: IdentityKind,
        #[arg(long, default_value_t = 3)]
        n: u32,
    },
    /// Emit one family product as JSON, e.g. `family Mid1[2,1] --n 3`
    Family {
        #[command(flatten)]
        common: CommonOpts,
        /// Family name in bracket grammar (Mid1[i,j], M12_2[i], I4, T2, ...)
        name: String,
        #[arg(long, default_value_t = 3)]
        n: u32,
    },
    /// Transport a product along an automorphism (n = 3) or along the flip
    /// antiautomorphism (any n)
    Transform {
        #[command(flatten)]
        common: CommonOpts,
        /// Product JSON file
        file: PathBuf,
        /// Order-reversing transport through the flip e_ij -> e_{n-j+1,n-i+1}
        #[arg(long, conflicts_with = "aut3")]
        involution: bool,
        /// Automorphism parameters a11,a22,a31,a32 (n = 3 only)
        #[arg(long, value_name = "A11,A22,A31,A32")]
        aut3: Option<String>,
    },
}

fn parse_field(text: &str) -> Result<FieldSpec, String> {
    FieldSpec::parse(text).map_err(|e| e.to_string())
}

fn parse_kind(text: &str) -> Result<IdentityKind, String> {
    IdentityKind::parse(text).map_err(|e| e.to_string())
}

enum Failure {
    /// A mathematically expected statement did not hold (exit 1).
    Mismatch(String),
    /// Bad input: flags, files, ranges (exit 2).
    Usage(String),
}

impl From<utmatch::Error> for Failure {
    fn from(e: utmatch::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Dim { common, max_n } => cmd_dim(&common, max_n),
        Command::Verify { common, kind, n } => cmd_verify(&common, kind, n),
        Command::Check { common, file } => cmd_check(&common, &file),
        Command::Classify3 { common, kind, file } => cmd_classify3(&common, kind, &file),
        Command::Orbits { common, kind } => cmd_orbits(&common, kind),
        Command::Kernel { common, kind, n } => cmd_kernel(&common, kind, n),
        Command::Family { common, name, n } => cmd_family(&common, &name, n),
        Command::Transform { common, file, involution, aut3 } => {
            cmd_transform(&common, &file, involution, aut3.as_deref())
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch(msg)) => {
            eprintln!("mismatch: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(common: &CommonOpts, content: &str) -> CmdResult {
    match &common.out {
        Some(path) => fs::write(path, content)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn checked_n(n: u32) -> Result<Dimension, Failure> {
    if n > 8 {
        return Err(Failure::Usage(format!(
            "n = {n} is above the supported cap of 8"
        )));
    }
    if n > 6 {
        eprintln!("warning: kernel solving at n = {n} works on {} unknowns and may be slow",
            (n * (n - 1) / 2).pow(3));
    }
    Dimension::new(n).map_err(|e| Failure::Usage(e.to_string()))
}

fn load_product(path: &PathBuf) -> Result<Product, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    codec::product_from_json(&text).map_err(|e| Failure::Usage(e.to_string()))
}

fn scalar_json(s: &Scalar) -> serde_json::Value {
    serde_json::Value::String(s.to_string())
}

// ---------------------------------------------------------------- dim ----

fn cmd_dim(common: &CommonOpts, max_n: u32) -> CmdResult {
    if !(3..=8).contains(&max_n) {
        return Err(Failure::Usage(format!("--max-n must be in 3..=8, got {max_n}")));
    }
    if max_n > 6 {
        eprintln!("warning: solving above n = 6 may be slow");
    }
    struct Row {
        kind: IdentityKind,
        n: u32,
        dim: usize,
        expected: Option<usize>,
    }
    let mut rows = Vec::new();
    for kind in IdentityKind::ALL {
        for nn in 3..=max_n {
            let n = Dimension::new(nn).expect("n >= 3");
            let dim = identities::dimension(kind, n, common.field);
            let expected = families::expected_count(kind, n).ok();
            rows.push(Row { kind, n: nn, dim, expected });
        }
    }
    let all_match = rows
        .iter()
        .all(|r| r.expected.is_none_or(|e| e == r.dim));

    let mut text = String::new();
    match common.format.as_str() {
        "csv" => {
            let mut wtr = csv::Writer::from_writer(vec![]);
            wtr.write_record(["kind", "n", "field", "dimension"]).unwrap();
            for r in &rows {
                wtr.write_record([
                    r.kind.short(),
                    &r.n.to_string(),
                    &common.field.to_string(),
                    &r.dim.to_string(),
                ])
                .unwrap();
            }
            text = String::from_utf8(wtr.into_inner().unwrap()).unwrap();
        }
        "json" => {
            let items: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "kind": r.kind.short(),
                        "n": r.n,
                        "field": common.field.to_string(),
                        "dimension": r.dim,
                        "expected": r.expected,
                        "match": r.expected.is_none_or(|e| e == r.dim),
                    })
                })
                .collect();
            text = serde_json::to_string_pretty(&items).unwrap();
            text.push('\n');
        }
        "text" => {
            writeln!(text, "{:<20} {:>2} {:>6} {:>9} {:>9}", "kind", "n", "field", "dim", "expected").unwrap();
            for r in &rows {
                let expected = r
                    .expected
                    .map(|e| e.to_string())
                    .unwrap_or_else(|| "-".to_string());
                let mark = match r.expected {
                    Some(e) if e != r.dim => "  MISMATCH",
                    _ => "",
                };
                writeln!(
                    text,
                    "{:<20} {:>2} {:>6} {:>9} {:>9}{mark}",
                    r.kind.label(),
                    r.n,
                    common.field.to_string(),
                    r.dim,
                    expected
                )
                .unwrap();
            }
            writeln!(text, "{}", if all_match { "PASS" } else { "FAIL" }).unwrap();
        }
        other => return Err(Failure::Usage(format!("dim does not support --format {other}"))),
    }
    emit(common, &text)?;
    if all_match {
        Ok(())
    } else {
        Err(Failure::Mismatch("a solved dimension differs from its closed form".into()))
    }
}

// ------------------------------------------------------------- verify ----

fn cmd_verify(common: &CommonOpts, kind: IdentityKind, n: u32) -> CmdResult {
    let n = checked_n(n)?;
    let field = common.field;
    let ids = families::family_ids(kind, n)?;
    let basis = families::family_basis(kind, n, field)?;
    let expected = families::expected_count(kind, n)?;

    let mut failures: Vec<String> = Vec::new();

    for (id, p) in ids.iter().zip(&basis) {
        let report = identities::residual(kind, p);
        if let Some(entry) = report.first() {
            failures.push(format!(
                "family {id} violates {} at ({}, {}, {})",
                entry.equation, entry.triple[0], entry.triple[1], entry.triple[2]
            ));
        }
    }

    let kernel = identities::kernel(&identities::assemble(kind, n, field));
    let dim = kernel.dimension();

    // independence: rank of the family list equals its length
    let mut span_rank = 0usize;
    {
        let mut seen: Vec<Product> = Vec::new();
        for p in &basis {
            if identities::coordinates_in_span(p, &seen).is_none() {
                seen.push(p.clone());
                span_rank += 1;
            }
        }
    }
    if span_rank != basis.len() {
        failures.push(format!(
            "family list has rank {span_rank} but {} members",
            basis.len()
        ));
    }
    if basis.len() != expected {
        failures.push(format!(
            "family list has {} members, closed form says {expected}",
            basis.len()
        ));
    }
    if dim != expected {
        failures.push(format!("kernel dimension {dim} differs from closed form {expected}"));
    }
    for (id, p) in ids.iter().zip(&basis) {
        if identities::membership(p, &kernel).is_none() {
            failures.push(format!("family {id} is outside the solver kernel"));
        }
    }
    for (k, v) in kernel.basis.iter().enumerate() {
        if identities::coordinates_in_span(v, &basis).is_none() {
            failures.push(format!("kernel vector {k} is outside the family span"));
        }
    }

    // seeded spot check: random combinations stay inside the solution space
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    for _ in 0..5 {
        let coeffs: Vec<Scalar> = basis
            .iter()
            .map(|_| random_scalar(&mut rng, field))
            .collect();
        let terms: Vec<(Scalar, &Product)> =
            coeffs.into_iter().zip(basis.iter()).collect();
        let combo = Product::linear_combination(n, field, &terms);
        if !identities::residual(kind, &combo).is_empty() {
            failures.push("a random combination of families violates the identity".into());
        }
        if kind == IdentityKind::TotallyCompatible && !combo.is_associative() {
            failures.push("a random totally-compatible combination is not associative".into());
        }
    }

    let pass = failures.is_empty();
    let mut text = String::new();
    match common.format.as_str() {
        "json" => {
            let v = serde_json::json!({
                "kind": kind.short(),
                "n": n.n(),
                "field": field.to_string(),
                "families": basis.len(),
                "expected": expected,
                "rank": span_rank,
                "kernel_dimension": dim,
                "failures": failures,
                "pass": pass,
            });
            text = serde_json::to_string_pretty(&v).unwrap();
            text.push('\n');
        }
        "text" => {
            writeln!(text, "verify {} n={} field={}", kind.label(), n.n(), field).unwrap();
            writeln!(text, "  families: {} (expected {expected})", basis.len()).unwrap();
            writeln!(text, "  independence rank: {span_rank}").unwrap();
            writeln!(text, "  kernel dimension: {dim}").unwrap();
            for f in &failures {
                writeln!(text, "  FAIL {f}").unwrap();
            }
            writeln!(text, "{}", if pass { "PASS" } else { "FAIL" }).unwrap();
        }
        other => return Err(Failure::Usage(format!("verify does not support --format {other}"))),
    }
    emit(common, &text)?;
    if pass {
        Ok(())
    } else {
        Err(Failure::Mismatch(format!("{} verification failed", kind.label())))
    }
}

fn random_scalar(rng: &mut ChaCha8Rng, field: FieldSpec) -> Scalar {
    match field {
        FieldSpec::Rationals => {
            Scalar::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=9)).expect("nonzero denominator")
        }
        FieldSpec::PrimeField(p) => field.integer(rng.gen_range(0..p) as i64),
    }
}

// -------------------------------------------------------------- check ----

fn cmd_check(common: &CommonOpts, file: &PathBuf) -> CmdResult {
    let p = load_product(file)?;
    let mut text = String::new();
    let mut results = Vec::new();
    for kind in IdentityKind::ALL {
        let report = identities::residual(kind, &p);
        results.push((kind, report));
    }
    let assoc = p.first_nonassociative_triple();
    match common.format.as_str() {
        "json" => {
            let kinds: Vec<serde_json::Value> = results
                .iter()
                .map(|(kind, report)| {
                    let first = report.first().map(|e| {
                        serde_json::json!({
                            "triple": [
                                [e.triple[0].i(), e.triple[0].j()],
                                [e.triple[1].i(), e.triple[1].j()],
                                [e.triple[2].i(), e.triple[2].j()],
                            ],
                            "equation": e.equation,
                            "value": e.value.to_string(),
                        })
                    });
                    serde_json::json!({
                        "kind": kind.short(),
                        "pass": report.is_empty(),
                        "violations": report.entries.len(),
                        "first": first,
                    })
                })
                .collect();
            let v = serde_json::json!({
                "n": p.n().n(),
                "field": p.field().to_string(),
                "kinds": kinds,
                "associative": assoc.is_none(),
                "first_nonassociative": assoc.as_ref().map(|(t, v)| {
                    serde_json::json!({
                        "triple": [[t[0].i(), t[0].j()], [t[1].i(), t[1].j()], [t[2].i(), t[2].j()]],
                        "associator": v.to_string(),
                    })
                }),
            });
            text = serde_json::to_string_pretty(&v).unwrap();
            text.push('\n');
        }
        "text" => {
            writeln!(text, "check n={} field={}", p.n().n(), p.field()).unwrap();
            for (kind, report) in &results {
                match report.first() {
                    None => writeln!(text, "  {:<20} PASS", kind.label()).unwrap(),
                    Some(e) => writeln!(
                        text,
                        "  {:<20} FAIL at ({}, {}, {}): {} gives {}",
                        kind.label(),
                        e.triple[0],
                        e.triple[1],
                        e.triple[2],
                        e.equation,
                        e.value
                    )
                    .unwrap(),
                }
            }
            match &assoc {
                None => writeln!(text, "  associative: yes").unwrap(),
                Some((t, v)) => writeln!(
                    text,
                    "  associative: no, [{}, {}, {}] = {}",
                    t[0], t[1], t[2], v
                )
                .unwrap(),
            }
        }
        other => return Err(Failure::Usage(format!("check does not support --format {other}"))),
    }
    emit(common, &text)
}

// ---------------------------------------------------------- classify3 ----

fn cmd_classify3(common: &CommonOpts, kind: IdentityKind, file: &PathBuf) -> CmdResult {
    let p = load_product(file)?;
    let form = LambdaForm::for_kind(kind).map_err(|e| Failure::Usage(e.to_string()))?;
    let emit_error = |common: &CommonOpts, msg: String| -> CmdResult {
        if common.format == "json" {
            let v = serde_json::json!({ "error": msg });
            emit(common, &format!("{}\n", serde_json::to_string_pretty(&v).unwrap()))?;
        }
        Err(Failure::Usage(msg))
    };
    let v = match product_to_lambda(&p, form) {
        Ok(v) => v,
        Err(e) => return emit_error(common, e.to_string()),
    };
    let (class, witness) = match canonical_form(&v) {
        Ok(r) => r,
        Err(e) => return emit_error(common, e.to_string()),
    };
    let json = serde_json::json!({
        "kind": class.kind.short(),
        "case": class.case,
        "params": class.params.iter().map(scalar_json).collect::<Vec<_>>(),
        "witness": {
            "a11": witness.a11.to_string(),
            "a22": witness.a22.to_string(),
            "a31": witness.a31.to_string(),
            "a32": witness.a32.to_string(),
        },
    });
    let text = match common.format.as_str() {
        "json" => format!("{}\n", serde_json::to_string_pretty(&json).unwrap()),
        "text" => {
            let params: Vec<String> = class.params.iter().map(Scalar::to_string).collect();
            format!(
                "kind {} case {} params [{}] witness (a11={}, a22={}, a31={}, a32={})\n",
                class.kind.label(),
                class.case,
                params.join(", "),
                witness.a11,
                witness.a22,
                witness.a31,
                witness.a32
            )
        }
        other => {
            return Err(Failure::Usage(format!("classify3 does not support --format {other}")))
        }
    };
    emit(common, &text)
}

// ------------------------------------------------------------- orbits ----

fn cmd_orbits(common: &CommonOpts, kind: IdentityKind) -> CmdResult {
    let FieldSpec::PrimeField(q) = common.field else {
        return Err(Failure::Usage("orbits needs --field Fp:2, Fp:3 or Fp:5".into()));
    };
    let census = orbit_census(kind, q).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut wtr = csv::Writer::from_writer(vec![]);
    wtr.write_record(["kind", "q", "case", "params", "orbit_size"]).unwrap();
    for row in &census.rows {
        let params: Vec<String> = row.class.params.iter().map(Scalar::to_string).collect();
        wtr.write_record([
            kind.short(),
            &q.to_string(),
            &row.class.case.to_string(),
            &params.join(";"),
            &row.orbit_size.to_string(),
        ])
        .unwrap();
    }
    let text = String::from_utf8(wtr.into_inner().unwrap()).unwrap();
    emit(common, &text)?;
    if census.violations.is_empty() {
        Ok(())
    } else {
        for v in &census.violations {
            eprintln!("census violation: {v}");
        }
        Err(Failure::Mismatch("orbit/label bijection failed".into()))
    }
}

// ------------------------------------------------------------- kernel ----

fn cmd_kernel(common: &CommonOpts, kind: IdentityKind, n: u32) -> CmdResult {
    let n = checked_n(n)?;
    let kb = identities::kernel(&identities::assemble(kind, n, common.field));
    emit(common, &format!("{}\n", codec::kernel_to_json(&kb)))
}

// ------------------------------------------------------------- family ----

fn cmd_family(common: &CommonOpts, name: &str, n: u32) -> CmdResult {
    let n = checked_n(n)?;
    let id: FamilyId = name.parse().map_err(|e: utmatch::Error| Failure::Usage(e.to_string()))?;
    let p = families::make_family(&id, n, common.field)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    emit(common, &format!("{}\n", codec::product_to_json(&p)))
}

// ---------------------------------------------------------- transform ----

fn cmd_transform(
    common: &CommonOpts,
    file: &PathBuf,
    involution: bool,
    aut3: Option<&str>,
) -> CmdResult {
    let p = load_product(file)?;
    let transported = if involution {
        let phi = LinearMap::involution(p.n(), p.field());
        p.opposite_pushforward(&phi).map_err(|e| Failure::Usage(e.to_string()))?
    } else if let Some(params) = aut3 {
        if p.n().n() != 3 {
            return Err(Failure::Usage("--aut3 transport needs an n = 3 product".into()));
        }
        let parts: Vec<&str> = params.split(',').collect();
        if parts.len() != 4 {
            return Err(Failure::Usage("--aut3 takes four comma-separated scalars".into()));
        }
        let field = p.field();
        let scalars: Vec<Scalar> = parts
            .iter()
            .map(|t| Scalar::parse(t.trim(), field))
            .collect::<utmatch::Result<_>>()
            .map_err(|e| Failure::Usage(e.to_string()))?;
        let aut = Aut3Params::new(
            scalars[0].clone(),
            scalars[1].clone(),
            scalars[2].clone(),
            scalars[3].clone(),
        )
        .map_err(|e| Failure::Usage(e.to_string()))?;
        p.pushforward(&aut3_map(&aut)).map_err(|e| Failure::Usage(e.to_string()))?
    } else {
        return Err(Failure::Usage("transform needs --involution or --aut3".into()));
    };
    emit(common, &format!("{}\n", codec::product_to_json(&transported)))
}
