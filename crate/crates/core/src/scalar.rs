//! Exact field arithmetic over the rationals and over prime fields F_p.
//!
//! Every coefficient in the crate is a [`Scalar`]. Rational values are kept
//! reduced with a positive denominator; prime-field values are residues in
//! `[0, p)`. There is no floating point anywhere.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The coefficient field: the rationals, or F_p for a prime `p < 2^31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u32),
}

impl FieldSpec {
    /// Builds a prime-field spec, rejecting composite or oversized moduli.
    pub fn prime(p: u64) -> Result<Self> {
        if !(2..1u64 << 31).contains(&p) {
            return Err(Error::ModulusOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec::PrimeField(p as u32))
    }

    /// Parses `"Q"` or `"Fp:<p>"`.
    pub fn parse(text: &str) -> Result<Self> {
        if text == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        if let Some(p) = text.strip_prefix("Fp:") {
            let p: u64 = p
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad field spec {text:?}")))?;
            return FieldSpec::prime(p);
        }
        Err(Error::InvalidInput(format!(
            "bad field spec {text:?} (expected \"Q\" or \"Fp:<p>\")"
        )))
    }

    pub fn zero(self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::zero()),
            FieldSpec::PrimeField(p) => Scalar::Residue { value: 0, modulus: p },
        }
    }

    pub fn one(self) -> Scalar {
        self.integer(1)
    }

    /// The image of an integer in this field.
    pub fn integer(self, v: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::PrimeField(p) => {
                let m = v.rem_euclid(p as i64) as u32;
                Scalar::Residue { value: m, modulus: p }
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "Fp:{p}"),
        }
    }
}

/// Deterministic Miller-Rabin; the bases 2, 3, 5, 7 decide primality for
/// everything below 3.2e9, which covers the allowed modulus range.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// An exact field element. Rationals are always reduced with positive
/// denominator (zero is 0/1); prime-field residues satisfy `0 <= value < p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u32, modulus: u32 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rationals,
            Scalar::Residue { modulus, .. } => FieldSpec::PrimeField(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    /// Exact rational from a numerator/denominator pair.
    pub fn ratio(num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::Rational(BigRational::new(
            BigInt::from(num),
            BigInt::from(den),
        )))
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Residue { value, modulus } => {
                let p = *modulus as u64;
                Scalar::Residue {
                    value: pow_mod(*value as u64, p - 2, p) as u32,
                    modulus: *modulus,
                }
            }
        })
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self * &other.inv()?)
    }

    /// Parses `sign? digits ("/" digits)?`. Over a prime field the literal
    /// must be an integer (possibly signed; it is reduced mod p); a fraction
    /// literal is rejected as non-canonical.
    pub fn parse(text: &str, field: FieldSpec) -> Result<Scalar> {
        let err = |reason: &str| Error::ScalarParse {
            text: text.to_owned(),
            field,
            reason: reason.to_owned(),
        };
        let (num_text, den_text) = match text.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (text, None),
        };
        let numer: BigInt = parse_signed_int(num_text).ok_or_else(|| err("bad integer"))?;
        match field {
            FieldSpec::Rationals => {
                let denom = match den_text {
                    None => BigInt::one(),
                    Some(d) => {
                        let d: BigInt = parse_unsigned_int(d)
                            .ok_or_else(|| err("denominator must be a positive integer"))?;
                        if d.is_zero() {
                            return Err(err("zero denominator"));
                        }
                        d
                    }
                };
                Ok(Scalar::Rational(BigRational::new(numer, denom)))
            }
            FieldSpec::PrimeField(p) => {
                if den_text.is_some() {
                    return Err(err("fraction literal is not canonical over a prime field"));
                }
                let p_big = BigInt::from(p);
                let mut r = numer % &p_big;
                if r.is_negative() {
                    r += &p_big;
                }
                let digits = r.to_u32_digits().1;
                let value = digits.first().copied().unwrap_or(0);
                Ok(Scalar::Residue { value, modulus: p })
            }
        }
    }

    fn assert_same_field(&self, other: &Scalar) {
        debug_assert_eq!(
            self.field(),
            other.field(),
            "scalar arithmetic across distinct fields"
        );
    }
}

fn parse_signed_int(text: &str) -> Option<BigInt> {
    let body = text.strip_prefix(['+', '-']).unwrap_or(text);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    text.parse().ok()
}

fn parse_unsigned_int(text: &str) -> Option<BigInt> {
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    text.parse().ok()
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.assert_same_field(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue {
                    value: ((*a as u64 + *b as u64) % *p as u64) as u32,
                    modulus: *p,
                }
            }
            _ => unreachable!("mixed-field scalars"),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.assert_same_field(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue {
                    value: ((*a as u64 + *p as u64 - *b as u64) % *p as u64) as u32,
                    modulus: *p,
                }
            }
            _ => unreachable!("mixed-field scalars"),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.assert_same_field(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue {
                    value: mul_mod(*a as u64, *b as u64, *p as u64) as u32,
                    modulus: *p,
                }
            }
            _ => unreachable!("mixed-field scalars"),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_scalar(rng: &mut ChaCha8Rng, field: FieldSpec) -> Scalar {
        match field {
            FieldSpec::Rationals => {
                Scalar::ratio(rng.gen_range(-20..=20), rng.gen_range(1..=12)).unwrap()
            }
            FieldSpec::PrimeField(p) => field.integer(rng.gen_range(0..p) as i64),
        }
    }

    #[test]
    fn arithmetic_examples() {
        let q = FieldSpec::Rationals;
        let f5 = FieldSpec::prime(5).unwrap();
        let half = Scalar::ratio(1, 2).unwrap();
        let third = Scalar::ratio(1, 3).unwrap();
        assert_eq!(&half + &third, Scalar::ratio(5, 6).unwrap());
        assert_eq!(&f5.integer(2) * &f5.integer(3), f5.integer(1));
        assert_eq!(-&q.zero(), q.zero());
    }

    #[test]
    fn inverse_examples() {
        let f7 = FieldSpec::prime(7).unwrap();
        assert_eq!(f7.integer(3).inv().unwrap(), f7.integer(5));
        assert_eq!(
            Scalar::ratio(-2, 3).unwrap().inv().unwrap(),
            Scalar::ratio(-3, 2).unwrap()
        );
        assert_eq!(FieldSpec::Rationals.one().inv().unwrap(), FieldSpec::Rationals.one());
        assert_eq!(FieldSpec::Rationals.zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn parse_examples() {
        let q = FieldSpec::Rationals;
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(Scalar::parse("-4/6", q).unwrap(), Scalar::ratio(-2, 3).unwrap());
        assert_eq!(Scalar::parse("7", f5).unwrap(), f5.integer(2));
        assert_eq!(Scalar::parse("0/3", q).unwrap(), q.zero());
        assert_eq!(Scalar::parse("0/3", q).unwrap().to_string(), "0");
        assert!(Scalar::parse("1/0", q).is_err());
        assert!(Scalar::parse("1/2", f5).is_err());
        assert!(Scalar::parse("1/-2", q).is_err());
        assert!(Scalar::parse("", q).is_err());
        assert!(Scalar::parse("x", q).is_err());
    }

    #[test]
    fn field_spec_validation() {
        assert!(FieldSpec::prime(2).is_ok());
        assert!(FieldSpec::prime(2147483647).is_ok()); // 2^31 - 1 is prime
        assert_eq!(FieldSpec::prime(9), Err(Error::NotPrime(9)));
        assert_eq!(FieldSpec::prime(1), Err(Error::ModulusOutOfRange(1)));
        assert_eq!(FieldSpec::prime(1 << 31), Err(Error::ModulusOutOfRange(1 << 31)));
        assert_eq!(FieldSpec::parse("Fp:7"), FieldSpec::prime(7));
        assert_eq!(FieldSpec::parse("Q"), Ok(FieldSpec::Rationals));
        assert!(FieldSpec::parse("R").is_err());
    }

    #[test]
    fn field_axioms_on_random_triples() {
        let fields = [
            FieldSpec::Rationals,
            FieldSpec::prime(2).unwrap(),
            FieldSpec::prime(5).unwrap(),
            FieldSpec::prime(7).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for field in fields {
            for _ in 0..200 {
                let a = random_scalar(&mut rng, field);
                let b = random_scalar(&mut rng, field);
                let c = random_scalar(&mut rng, field);
                assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
                assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                assert_eq!(&a + &b, &b + &a);
                assert_eq!(&a * &b, &b * &a);
                assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                assert_eq!(&a + &(-&a), field.zero());
                if !a.is_zero() {
                    assert_eq!(&a * &a.inv().unwrap(), field.one());
                }
                assert_eq!(&a - &b, &a + &(-&b));
            }
        }
    }

    proptest! {
        #[test]
        fn parse_format_roundtrip_rational(num in -1000i64..1000, den in 1i64..200) {
            let s = Scalar::ratio(num, den).unwrap();
            let back = Scalar::parse(&s.to_string(), FieldSpec::Rationals).unwrap();
            prop_assert_eq!(back, s);
        }

        #[test]
        fn parse_format_roundtrip_prime(v in 0u32..7919) {
            let field = FieldSpec::prime(7919).unwrap();
            let s = field.integer(v as i64);
            let back = Scalar::parse(&s.to_string(), field).unwrap();
            prop_assert_eq!(back, s);
        }
    }
}
