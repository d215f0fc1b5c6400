//! Truncated p-adic integers: residues mod `p^k` read as the first `k`
//! base-`p` digits of an element of `Z_p`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Serialize, Serializer};

use crate::error::PAdicError;

type PResult<T> = std::result::Result<T, PAdicError>;

/// Moduli must stay below this so products fit comfortably in `u128`.
pub const MAX_MODULUS: u64 = 1 << 62;
pub const DEFAULT_PRECISION: u32 = 12;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `p^e`, or `None` past [`MAX_MODULUS`].
pub fn checked_power(p: u64, e: u32) -> Option<u64> {
    let v = p.checked_pow(e)?;
    (v < MAX_MODULUS).then_some(v)
}

/// p-adic valuation of a nonzero integer.
pub fn int_valuation(p: u64, x: i128) -> Option<u32> {
    if x == 0 {
        return None;
    }
    let mut x = x.unsigned_abs();
    let mut e = 0;
    while x.is_multiple_of(p as u128) {
        x /= p as u128;
        e += 1;
    }
    Some(e)
}

/// Result of a valuation at finite precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Exact(u32),
    /// The residue is zero: the true valuation is at least this.
    AtLeast(u32),
}

impl Valuation {
    pub fn exact(self) -> Option<u32> {
        match self {
            Valuation::Exact(e) => Some(e),
            Valuation::AtLeast(_) => None,
        }
    }

    /// Smallest value the true valuation can take.
    pub fn lower_bound(self) -> u32 {
        match self {
            Valuation::Exact(e) | Valuation::AtLeast(e) => e,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Exact(e) => write!(f, "{e}"),
            Valuation::AtLeast(k) => write!(f, ">={k}"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Exact(e) => s.serialize_u32(*e),
            Valuation::AtLeast(k) => s.serialize_str(&format!(">={k}")),
        }
    }
}

/// Element of `Z/p^k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct TruncatedPAdic {
    p: u64,
    k: u32,
    modulus: u64,
    value: u64,
}

/// Shared `(p, k)` for building elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PAdicRing {
    p: u64,
    k: u32,
    modulus: u64,
}

impl PAdicRing {
    pub fn new(p: u64, k: u32) -> PResult<Self> {
        if !is_prime(p) {
            return Err(PAdicError::NotPrime(p));
        }
        let modulus = match checked_power(p, k) {
            Some(m) if k >= 1 => m,
            _ => return Err(PAdicError::BadPrecision { p, precision: k }),
        };
        Ok(PAdicRing { p, k, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn from_int(&self, x: i128) -> TruncatedPAdic {
        let m = self.modulus as i128;
        TruncatedPAdic {
            p: self.p,
            k: self.k,
            modulus: self.modulus,
            value: x.rem_euclid(m) as u64,
        }
    }

    pub fn zero(&self) -> TruncatedPAdic {
        self.from_int(0)
    }

    pub fn one(&self) -> TruncatedPAdic {
        self.from_int(1)
    }

    /// `p^e` (zero once `e >= k`).
    pub fn p_power(&self, e: u32) -> TruncatedPAdic {
        if e >= self.k {
            self.zero()
        } else {
            self.from_int(self.p.pow(e) as i128)
        }
    }

    /// Element with the given base-`p` digits, least significant first.
    pub fn from_digits(&self, digits: &[u64]) -> TruncatedPAdic {
        let v = digits
            .iter()
            .take(self.k as usize)
            .rev()
            .fold(0u128, |acc, &d| acc * self.p as u128 + (d % self.p) as u128);
        self.from_int(v as i128)
    }
}

impl TruncatedPAdic {
    pub fn ring(&self) -> PAdicRing {
        PAdicRing {
            p: self.p,
            k: self.k,
            modulus: self.modulus,
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.k
    }

    /// Canonical representative in `0..p^k`.
    pub fn value(&self) -> u64 {
        self.value
    }

    /// Representative in `(-p^k/2, p^k/2]`.
    pub fn signed(&self) -> i128 {
        let v = self.value as i128;
        if v > (self.modulus / 2) as i128 {
            v - self.modulus as i128
        } else {
            v
        }
    }

    /// Base-`p` digits, least significant first, exactly `k` of them.
    pub fn digits(&self) -> Vec<u64> {
        let mut v = self.value;
        (0..self.k)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn is_unit(&self) -> bool {
        !self.value.is_multiple_of(self.p)
    }

    pub fn valuation(&self) -> Valuation {
        if self.value == 0 {
            Valuation::AtLeast(self.k)
        } else {
            Valuation::Exact(int_valuation(self.p, self.value as i128).expect("nonzero"))
        }
    }

    /// Congruence modulo `p^e` for `e <= k`.
    pub fn congruent_mod(&self, other: &Self, e: u32) -> bool {
        self.same_ring(other).is_ok() && (*self - *other).valuation().lower_bound() >= e
    }

    pub fn same_ring(&self, other: &Self) -> PResult<()> {
        if self.p == other.p && self.k == other.k {
            Ok(())
        } else {
            Err(PAdicError::Mismatch {
                p1: self.p,
                k1: self.k,
                p2: other.p,
                k2: other.k,
            })
        }
    }

    fn with_value(&self, value: u64) -> Self {
        TruncatedPAdic { value, ..*self }
    }

    pub fn checked_add(&self, other: &Self) -> PResult<Self> {
        self.same_ring(other)?;
        Ok(self.with_value(((self.value as u128 + other.value as u128) % self.modulus as u128) as u64))
    }

    pub fn checked_sub(&self, other: &Self) -> PResult<Self> {
        self.same_ring(other)?;
        Ok(self.with_value(
            ((self.value as u128 + self.modulus as u128 - other.value as u128) % self.modulus as u128) as u64,
        ))
    }

    pub fn checked_mul(&self, other: &Self) -> PResult<Self> {
        self.same_ring(other)?;
        Ok(self.with_value(((self.value as u128 * other.value as u128) % self.modulus as u128) as u64))
    }

    pub fn pow_u64(&self, mut e: u64) -> Self {
        let mut base = *self;
        let mut acc = self.ring().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// `self^e` for a signed integer exponent; negative exponents need a unit.
    pub fn pow_i64(&self, e: i64) -> PResult<Self> {
        if e >= 0 {
            Ok(self.pow_u64(e as u64))
        } else {
            Ok(self.inv()?.pow_u64(e.unsigned_abs()))
        }
    }

    pub fn inv(&self) -> PResult<Self> {
        if !self.is_unit() {
            return Err(PAdicError::NonUnit(self.value));
        }
        let (mut r0, mut r1) = (self.modulus as i128, self.value as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(self.ring().from_int(t0))
    }
}

impl Add for TruncatedPAdic {
    type Output = TruncatedPAdic;
    /// Panics on mismatched rings; use [`TruncatedPAdic::checked_add`] to get an error instead.
    fn add(self, rhs: Self) -> Self {
        self.checked_add(&rhs).expect("mismatched p-adic rings")
    }
}

impl Sub for TruncatedPAdic {
    type Output = TruncatedPAdic;
    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(&rhs).expect("mismatched p-adic rings")
    }
}

impl Mul for TruncatedPAdic {
    type Output = TruncatedPAdic;
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(&rhs).expect("mismatched p-adic rings")
    }
}

impl Neg for TruncatedPAdic {
    type Output = TruncatedPAdic;
    fn neg(self) -> Self {
        self.with_value((self.modulus - self.value) % self.modulus)
    }
}

impl fmt::Debug for TruncatedPAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {}^{})", self.signed(), self.p, self.k)
    }
}

/// Small residues print as signed integers; anything else prints as its
/// digit string, most significant first, e.g. `...2101_3`.
impl fmt::Display for TruncatedPAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.signed();
        let bound = (self.modulus as f64).sqrt() as i128;
        if s.abs() <= bound.max(self.p as i128) {
            write!(f, "{s}")
        } else {
            let digits: String = self
                .digits()
                .iter()
                .rev()
                .map(|d| std::char::from_digit(*d as u32, 36).map_or_else(|| format!("[{d}]"), String::from))
                .collect();
            write!(f, "...{digits}_{}", self.p)
        }
    }
}

impl Serialize for TruncatedPAdic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let signed = self.signed();
        if self.to_string() == signed.to_string() {
            s.serialize_i128(signed)
        } else {
            s.serialize_str(&self.to_string())
        }
    }
}

/// Element of `1 + pZ_p` at finite precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PUnit(TruncatedPAdic);

impl PUnit {
    pub fn new(x: TruncatedPAdic) -> PResult<Self> {
        if x.value % x.p != 1 % x.p || x.k == 0 {
            return Err(PAdicError::NotPrincipalUnit(x.value));
        }
        Ok(PUnit(x))
    }

    /// `1 + q` for `q` divisible by `p`.
    pub fn one_plus(ring: &PAdicRing, q: i128) -> PResult<Self> {
        PUnit::new(ring.from_int(1 + q))
    }

    pub fn one(ring: &PAdicRing) -> Self {
        PUnit(ring.one())
    }

    pub fn get(&self) -> TruncatedPAdic {
        self.0
    }

    /// For `p = 2`: whether the unit lies in `1 + 4Z_2`.
    pub fn in_one_plus_four(&self) -> bool {
        self.0.p != 2 || self.0.k < 2 || self.0.value % 4 == 1
    }

    /// `v_p(self - 1)`.
    pub fn level(&self) -> Valuation {
        (self.0 - self.0.ring().one()).valuation()
    }

    pub fn mul(&self, other: &PUnit) -> PUnit {
        PUnit(self.0 * other.0)
    }

    pub fn inv(&self) -> PUnit {
        PUnit(self.0.inv().expect("principal units are invertible"))
    }

    /// Power with a p-adic exponent. The unit group `1 + pZ/p^k` has order
    /// `p^(k-1)`, so the residue of `e` mod `p^k` determines the result exactly.
    pub fn pow(&self, e: &TruncatedPAdic) -> PResult<PUnit> {
        self.0.same_ring(e)?;
        Ok(PUnit(self.0.pow_u64(e.value)))
    }

    pub fn pow_i64(&self, e: i64) -> PUnit {
        PUnit(self.0.pow_i64(e).expect("principal units are invertible"))
    }
}

/// A solution of `base^λ = target`, with the number of its digits that are determined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExponentSolution {
    pub lambda: TruncatedPAdic,
    /// `λ` is unique modulo `p^significant_digits`; higher digits are zero.
    pub significant_digits: u32,
}

/// Solves `base^λ ≡ target (mod p^k)` by lifting one digit of `λ` at a time.
pub fn solve_exponent(base: &PUnit, target: &PUnit) -> PResult<ExponentSolution> {
    let (b, t) = (base.get(), target.get());
    b.same_ring(&t)?;
    let ring = b.ring();
    let (p, k) = (ring.p(), ring.precision());
    if !base.in_one_plus_four() {
        return Err(PAdicError::NoSolution {
            precision: k,
            reason: format!("base {} is not in 1 + 4Z_2", b.value()),
        });
    }
    let e = match base.level() {
        Valuation::Exact(e) => e,
        Valuation::AtLeast(_) => {
            return if t == ring.one() {
                Ok(ExponentSolution {
                    lambda: ring.zero(),
                    significant_digits: 0,
                })
            } else {
                Err(PAdicError::NoSolution {
                    precision: k,
                    reason: "base is 1 at this precision".into(),
                })
            };
        }
    };
    if target.level().lower_bound() < e {
        return Err(PAdicError::NoSolution {
            precision: k,
            reason: format!(
                "v(target - 1) = {} is below v(base - 1) = {e}",
                target.level()
            ),
        });
    }
    // base^(p^j) - 1 has valuation e + j, so digit j of λ is fixed by the
    // congruence mod p^(e + j + 1).
    let digits = k - e;
    let mut lambda = ring.zero();
    for j in 0..digits {
        let step = ring.p_power(j);
        let digit = (0..p)
            .map(|d| lambda + step * ring.from_int(d as i128))
            .find(|cand| b.pow_u64(cand.value()).congruent_mod(&t, e + j + 1))
            .ok_or_else(|| PAdicError::NoSolution {
                precision: k,
                reason: format!("no digit at position {j}"),
            })?;
        lambda = digit;
    }
    if b.pow_u64(lambda.value()) != t {
        return Err(PAdicError::NoSolution {
            precision: k,
            reason: "lifted exponent does not re-verify".into(),
        });
    }
    Ok(ExponentSolution {
        lambda,
        significant_digits: digits,
    })
}

/// One verified divisibility statement.
#[derive(Clone, Debug, Serialize)]
pub struct ValuationClaim {
    pub statement: String,
    /// The integer itself when it fits in 128 bits.
    pub exact: Option<u128>,
    /// The integer mod `p^k`.
    pub residue: u64,
    pub expected: u32,
    pub computed: Valuation,
    pub holds: bool,
    /// The statement sharpens a weaker published assertion (nonvanishing) to an exact valuation.
    pub strengthened: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimsReport {
    pub p: u64,
    pub f: u32,
    pub q: u64,
    pub precision: u32,
    pub claims: Vec<ValuationClaim>,
    pub all_hold: bool,
}

/// Validates `q = p^f` under the standing hypothesis (`f >= 2` when `p = 2`).
pub fn check_prime_power(p: u64, f: u32) -> PResult<u64> {
    if !is_prime(p) {
        return Err(PAdicError::NotPrime(p));
    }
    if f == 0 || (p == 2 && f < 2) {
        return Err(PAdicError::BadPrecision { p, precision: f });
    }
    checked_power(p, f).ok_or(PAdicError::BadPrecision { p, precision: f })
}

/// Smallest precision used for claims about `q = p^f`.
pub fn minimum_precision(f: u32) -> u32 {
    2 * f + 4
}

/// Valuations of `(1+q)^q - 1` (expected `2f`) and `(1+q)^(1+q) - 1` (expected `f`).
pub fn check_claims(p: u64, f: u32, k: u32) -> PResult<ClaimsReport> {
    let q = check_prime_power(p, f)?;
    if k < minimum_precision(f) {
        return Err(PAdicError::BadPrecision { p, precision: k });
    }
    let ring = PAdicRing::new(p, k)?;
    let unit = ring.from_int(1 + q as i128);
    let one = ring.one();
    let mut claims = Vec::new();
    for (exp, expected, label, strengthened) in [
        (q, 2 * f, "(1+q)^q - 1", true),
        (q + 1, f, "(1+q)^(1+q) - 1", false),
    ] {
        let value = unit.pow_u64(exp) - one;
        let computed = value.valuation();
        let statement = if strengthened {
            format!("{label} is nonzero, with p-adic valuation exactly 2f = {expected}")
        } else {
            format!("{label} is divisible by q = {q} but not by qp = {}", q * p)
        };
        let exact = u32::try_from(exp).ok().and_then(|e| (q as u128 + 1).checked_pow(e)).map(|v| v - 1);
        if let Some(v) = exact {
            assert_eq!(v % ring.modulus() as u128, value.value() as u128);
        }
        claims.push(ValuationClaim {
            statement,
            exact,
            residue: value.value(),
            expected,
            computed,
            holds: computed == Valuation::Exact(expected),
            strengthened,
        });
    }
    let all_hold = claims.iter().all(|c| c.holds);
    Ok(ClaimsReport {
        p,
        f,
        q,
        precision: k,
        claims,
        all_hold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring(p: u64, k: u32) -> PAdicRing {
        PAdicRing::new(p, k).unwrap()
    }

    #[test]
    fn basic_arithmetic() {
        let r = ring(3, 5);
        let four = r.from_int(4);
        assert_eq!(four.inv().unwrap() * four, r.one());
        assert_eq!(four.pow_u64(3).value(), 64);
        let r2 = ring(2, 10);
        let u = r2.from_int(5);
        assert_eq!(u * u.inv().unwrap(), r2.one());
        assert!(r.from_int(6).inv().is_err());
        assert_eq!(-r.one(), r.from_int(242));
    }

    #[test]
    fn valuations() {
        assert_eq!(ring(3, 6).from_int(63).valuation(), Valuation::Exact(2));
        assert_eq!(ring(2, 10).from_int(624).valuation(), Valuation::Exact(4));
        assert_eq!(ring(5, 3).from_int(125).valuation(), Valuation::AtLeast(3));
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let a = ring(3, 5).one();
        let b = ring(3, 6).one();
        let c = ring(5, 5).one();
        assert!(a.checked_add(&b).is_err());
        assert!(a.checked_mul(&c).is_err());
    }

    #[test]
    fn bad_parameters() {
        assert_eq!(PAdicRing::new(4, 3), Err(PAdicError::NotPrime(4)));
        assert!(PAdicRing::new(3, 0).is_err());
        assert!(PAdicRing::new(2, 62).is_err());
        assert!(check_prime_power(2, 1).is_err());
        assert!(check_claims(3, 1, 5).is_err());
    }

    #[test]
    fn claim_values() {
        for (p, f, a, b) in [(3, 1, 63u64, 255u64), (2, 2, 624, 3124), (5, 1, 7775, 46655)] {
            let report = check_claims(p, f, 12).unwrap();
            assert!(report.all_hold);
            assert_eq!(report.claims[0].exact, Some(a as u128));
            assert_eq!(report.claims[1].exact, Some(b as u128));
        }
    }

    #[test]
    fn exponent_solve_matches_brute_force() {
        let r = ring(3, 6);
        let base = PUnit::one_plus(&r, 3).unwrap();
        let target = PUnit::one_plus(&r, 9).unwrap();
        let sol = solve_exponent(&base, &target).unwrap();
        let brute: Vec<u64> = (0..729u64).filter(|&l| r.from_int(4).pow_u64(l).value() == 10).collect();
        assert!(!brute.is_empty());
        assert!(brute.iter().all(|l| l % 243 == sol.lambda.value() % 243));
        assert_eq!(sol.significant_digits, 5);
        assert!(sol.lambda.valuation().lower_bound() >= 1);
        assert_eq!(solve_exponent(&base, &base).unwrap().lambda, r.one());
        assert_eq!(solve_exponent(&base, &PUnit::one(&r)).unwrap().lambda, r.zero());
    }

    #[test]
    fn exponent_solve_refusals() {
        let r = ring(3, 6);
        let base = PUnit::one_plus(&r, 9).unwrap();
        assert!(solve_exponent(&base, &PUnit::one_plus(&r, 3).unwrap()).is_err());
        let r2 = ring(2, 10);
        let three = PUnit::one_plus(&r2, 2).unwrap();
        assert!(solve_exponent(&three, &PUnit::one_plus(&r2, 4).unwrap()).is_err());
        assert!(PUnit::new(r.from_int(2)).is_err());
    }

    #[test]
    fn display_forms() {
        let r = ring(3, 6);
        assert_eq!(r.from_int(-4).to_string(), "-4");
        assert_eq!(r.from_int(300).to_string(), "...102010_3");
    }

    fn params() -> impl Strategy<Value = (u64, u32)> {
        prop_oneof![Just((2u64, 20u32)), Just((3, 12)), Just((5, 8)), Just((7, 6))]
    }

    proptest! {
        #[test]
        fn ring_axioms((p, k) in params(), a in any::<i64>(), b in any::<i64>(), c in any::<i64>()) {
            let r = ring(p, k);
            let (a, b, c) = (r.from_int(a as i128), r.from_int(b as i128), r.from_int(c as i128));
            prop_assert_eq!((a * b) * c, a * (b * c));
            prop_assert_eq!((a + b) + c, a + (b + c));
            prop_assert_eq!(a * (b + c), a * b + a * c);
            prop_assert_eq!(a - a, r.zero());
        }

        #[test]
        fn valuation_is_additive((p, k) in params(), a in 1i64..1_000_000, b in 1i64..1_000_000) {
            let r = ring(p, k);
            let (x, y) = (r.from_int(a as i128), r.from_int(b as i128));
            if let (Valuation::Exact(u), Valuation::Exact(v)) = (x.valuation(), y.valuation()) {
                if u + v < k {
                    prop_assert_eq!((x * y).valuation(), Valuation::Exact(u + v));
                }
            }
        }

        #[test]
        fn unit_pow_is_a_homomorphism((p, k) in params(), t in 0i64..1000, l in any::<u64>(), m in any::<u64>()) {
            let r = ring(p, k);
            let base = PUnit::one_plus(&r, (t * p as i64) as i128).unwrap();
            let (l, m) = (r.from_int(l as i128), r.from_int(m as i128));
            let lhs = base.pow(&(l + m)).unwrap();
            let rhs = base.pow(&l).unwrap().mul(&base.pow(&m).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn solve_inverts_pow((p, k) in params(), t in 1i64..50, l in any::<u64>()) {
            let r = ring(p, k);
            let step = if p == 2 { 4 } else { p as i64 };
            let base = PUnit::one_plus(&r, (t * step) as i128).unwrap();
            prop_assume!(base != PUnit::one(&r));
            let target = base.pow(&r.from_int(l as i128)).unwrap();
            let sol = solve_exponent(&base, &target).unwrap();
            prop_assert_eq!(base.pow(&sol.lambda).unwrap(), target);
        }
    }
}
