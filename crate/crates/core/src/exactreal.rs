//! Real quadratic irrationals `a + b·√s` with an exact total order.
//!
//! Every eigenvalue the cone maps produce lives in a single field ℚ(√s), so
//! the arithmetic here is deliberately restricted to one radicand at a time.
//! Comparison is the exception: it works across fields by isolating and
//! squaring, never touching floating point.

mod radicand;

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use num_rational::BigRational as Rational;
pub use radicand::{is_probable_prime, squarefree_split};

/// Builds the rational `num/den`. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactError {
    NegativeRadicand,
    /// Both operands irrational with different radicands.
    MixedField { left: BigUint, right: BigUint },
    /// Square root requested of a value whose root leaves ℚ(√s).
    NotInField,
    DivisionByZero,
}

impl fmt::Display for ExactError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactError::NegativeRadicand => write!(f, "negative radicand"),
            ExactError::MixedField { left, right } => {
                write!(f, "operands live in different fields Q(√{left}) and Q(√{right})")
            }
            ExactError::NotInField => write!(f, "square root is not a quadratic irrational"),
            ExactError::DivisionByZero => write!(f, "division by zero"),
        }
    }
}

impl core::error::Error for ExactError {}

/// `a + b·√s`, canonical: `b = 0 ⇒ s = 1`, otherwise `s ≥ 2` squarefree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadReal {
    a: Rational,
    b: Rational,
    s: BigUint,
}

impl QuadReal {
    pub fn zero() -> Self {
        Self::rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::rational(Rational::one())
    }

    pub fn rational(a: Rational) -> Self {
        QuadReal {
            a,
            b: Rational::zero(),
            s: BigUint::one(),
        }
    }

    pub fn integer(v: i64) -> Self {
        Self::rational(int(v))
    }

    /// Canonical form of `a + b·√d`.
    pub fn new(a: Rational, b: Rational, d: Rational) -> Result<Self, ExactError> {
        if d.is_negative() {
            return Err(ExactError::NegativeRadicand);
        }
        if b.is_zero() || d.is_zero() {
            return Ok(Self::rational(a));
        }
        // √(p/q) = √(p·q)/q
        let p = d.numer().magnitude();
        let q = d.denom().magnitude();
        let (root, kernel) = squarefree_split(&(p * q));
        let scale = Rational::new(BigInt::from(root), BigInt::from(q.clone()));
        let b = b * scale;
        if kernel.is_one() {
            Ok(Self::rational(a + b))
        } else {
            Ok(QuadReal { a, b, s: kernel })
        }
    }

    /// `√d` for a nonnegative rational `d`.
    pub fn sqrt_of(d: Rational) -> Result<Self, ExactError> {
        Self::new(Rational::zero(), Rational::one(), d)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn s(&self) -> &BigUint {
        &self.s
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|r| r.is_integer())
            .map(|r| r.to_integer())
    }

    pub fn is_zero(&self) -> bool {
        self.b.is_zero() && self.a.is_zero()
    }

    pub fn signum(&self) -> Ordering {
        sign_single(&self.a, &self.b, &self.s)
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn conjugate(&self) -> Self {
        QuadReal {
            a: self.a.clone(),
            b: -self.b.clone(),
            s: self.s.clone(),
        }
    }

    /// Field norm `a² − b²s`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * big_rat(&self.s)
    }

    fn common_field(&self, other: &Self) -> Result<BigUint, ExactError> {
        match (self.is_rational(), other.is_rational()) {
            (true, true) => Ok(BigUint::one()),
            (false, true) => Ok(self.s.clone()),
            (true, false) => Ok(other.s.clone()),
            (false, false) if self.s == other.s => Ok(self.s.clone()),
            _ => Err(ExactError::MixedField {
                left: self.s.clone(),
                right: other.s.clone(),
            }),
        }
    }

    fn from_parts(a: Rational, b: Rational, s: BigUint) -> Self {
        if b.is_zero() || s.is_one() {
            // s = 1 only arises from two rational operands, where b is zero
            Self::rational(a)
        } else {
            QuadReal { a, b, s }
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ExactError> {
        let s = self.common_field(other)?;
        Ok(Self::from_parts(&self.a + &other.a, &self.b + &other.b, s))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ExactError> {
        let s = self.common_field(other)?;
        Ok(Self::from_parts(&self.a - &other.a, &self.b - &other.b, s))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ExactError> {
        let s = self.common_field(other)?;
        let sr = big_rat(&s);
        let a = &self.a * &other.a + &self.b * &other.b * sr;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Self::from_parts(a, b, s))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ExactError> {
        if other.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        self.common_field(other)?;
        let num = self.checked_mul(&other.conjugate())?;
        let nrm = other.norm();
        Ok(Self::from_parts(&num.a / &nrm, &num.b / &nrm, num.s))
    }

    pub fn add_rational(&self, r: &Rational) -> Self {
        QuadReal {
            a: &self.a + r,
            b: self.b.clone(),
            s: self.s.clone(),
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::from_parts(&self.a * r, &self.b * r, self.s.clone())
    }

    /// Exact comparison, valid across different radicands.
    pub fn compare(&self, other: &Self) -> Ordering {
        let da = &self.a - &other.a;
        if self.is_rational() || other.is_rational() || self.s == other.s {
            let s = if self.is_rational() { &other.s } else { &self.s };
            return sign_single(&da, &(&self.b - &other.b), s);
        }
        sign_double(&da, &self.b, &self.s, &(-other.b.clone()), &other.s)
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return self.a.floor().to_integer();
        }
        // floor(b√s) via the integer square root of b²s
        let b2s = &self.b * &self.b * big_rat(&self.s);
        let root = (b2s.numer() / b2s.denom()).sqrt();
        // b√s is irrational, so it never sits on an integer
        let g = if self.b.is_positive() {
            root
        } else {
            -root - BigInt::one()
        };
        let cand = self.a.floor().to_integer() + g;
        let next = Self::rational(Rational::from_integer(&cand + BigInt::one()));
        if self.compare(&next) != Ordering::Less {
            cand + BigInt::one()
        } else {
            cand
        }
    }

    /// Decimal rendering with `digits` places, rounded half to even.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = BigInt::from(10u32).pow(digits as u32);
        let scaled = self.scale(&Rational::from_integer(scale));
        let lo = scaled.floor();
        let frac = scaled.add_rational(&-Rational::from_integer(lo.clone()));
        let rounded = match frac.compare(&QuadReal::rational(rat(1, 2))) {
            Ordering::Less => lo,
            Ordering::Greater => lo + BigInt::one(),
            Ordering::Equal => {
                if lo.is_even() {
                    lo
                } else {
                    lo + BigInt::one()
                }
            }
        };
        render_fixed(&rounded, digits)
    }

    /// Nearest `f64`; display and numerics only.
    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        if self.is_rational() {
            return a;
        }
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        let s = self.s.to_f64().unwrap_or(f64::NAN);
        a + b * libm::sqrt(s)
    }

    /// Nonnegative square root, if it lies in ℚ or in the value's own field.
    pub fn sqrt(&self) -> Result<Self, ExactError> {
        if self.is_negative() {
            return Err(ExactError::NegativeRadicand);
        }
        if self.is_rational() {
            return Self::sqrt_of(self.a.clone());
        }
        // (c + d√s)² = a + b√s  ⇔  c² + d²s = a, 2cd = b.
        // c² is a root of t² − a·t + b²s/4, i.e. (a ± √(a² − b²s))/2.
        let disc = self.norm();
        let r = rational_sqrt(&disc).ok_or(ExactError::NotInField)?;
        let half = rat(1, 2);
        for c2 in [(&self.a + &r) * &half, (&self.a - &r) * &half] {
            if !c2.is_positive() {
                continue;
            }
            if let Some(c) = rational_sqrt(&c2) {
                let d = &self.b / (int(2) * &c);
                let root = QuadReal::from_parts(c, d, self.s.clone());
                return Ok(if root.is_negative() { -root } else { root });
            }
        }
        Err(ExactError::NotInField)
    }
}

impl Default for QuadReal {
    fn default() -> Self {
        Self::zero()
    }
}

impl PartialOrd for QuadReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

impl From<Rational> for QuadReal {
    fn from(r: Rational) -> Self {
        Self::rational(r)
    }
}

impl From<i64> for QuadReal {
    fn from(v: i64) -> Self {
        Self::integer(v)
    }
}

impl Neg for QuadReal {
    type Output = QuadReal;
    fn neg(self) -> QuadReal {
        QuadReal::from_parts(-self.a, -self.b, self.s)
    }
}

impl Neg for &QuadReal {
    type Output = QuadReal;
    fn neg(self) -> QuadReal {
        -self.clone()
    }
}

// Operators mixing a QuadReal with a rational can never leave the field.
impl Add<&Rational> for &QuadReal {
    type Output = QuadReal;
    fn add(self, r: &Rational) -> QuadReal {
        self.add_rational(r)
    }
}

impl Sub<&Rational> for &QuadReal {
    type Output = QuadReal;
    fn sub(self, r: &Rational) -> QuadReal {
        self.add_rational(&-r.clone())
    }
}

impl Mul<&Rational> for &QuadReal {
    type Output = QuadReal;
    fn mul(self, r: &Rational) -> QuadReal {
        self.scale(r)
    }
}

impl fmt::Display for QuadReal {
    /// `a+b√s` with unit coefficients elided, e.g. `45/2-3/2√17`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.a);
        }
        if !self.a.is_zero() {
            write!(f, "{}", self.a)?;
            if self.b.is_positive() {
                write!(f, "+")?;
            }
        }
        if self.b == -Rational::one() {
            write!(f, "-")?;
        } else if !self.b.is_one() {
            write!(f, "{}", self.b)?;
        }
        write!(f, "√{}", self.s)
    }
}

fn big_rat(u: &BigUint) -> Rational {
    Rational::from_integer(BigInt::from(u.clone()))
}

fn rational_sign(r: &Rational) -> Ordering {
    r.cmp(&Rational::zero())
}

/// Exact square root of a nonnegative rational, when it is rational.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let p = r.numer().magnitude();
    let q = r.denom().magnitude();
    let sp = p.sqrt();
    let sq = q.sqrt();
    (&sp * &sp == *p && &sq * &sq == *q)
        .then(|| Rational::new(BigInt::from(sp), BigInt::from(sq)))
}

// sign of a + b√s
fn sign_single(a: &Rational, b: &Rational, s: &BigUint) -> Ordering {
    let sa = rational_sign(a);
    let sb = rational_sign(b);
    if sb == Ordering::Equal || s.is_zero() {
        return sa;
    }
    if sa == Ordering::Equal || sa == sb {
        return sb;
    }
    // opposite signs: the larger magnitude wins
    let lhs = a * a;
    let rhs = b * b * big_rat(s);
    match lhs.cmp(&rhs) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

// sign of a + b√s + c√t
fn sign_double(a: &Rational, b: &Rational, s: &BigUint, c: &Rational, t: &BigUint) -> Ordering {
    let su = sign_single(a, b, s);
    let sc = rational_sign(c);
    if sc == Ordering::Equal {
        return su;
    }
    if su == Ordering::Equal || su == sc {
        return sc;
    }
    // compare (a + b√s)² with c²t
    let sr = big_rat(s);
    let lead = a * a + b * b * &sr - c * c * big_rat(t);
    let cross = int(2) * a * b;
    match sign_single(&lead, &cross, s) {
        Ordering::Greater => su,
        Ordering::Less => sc,
        Ordering::Equal => Ordering::Equal,
    }
}

fn render_fixed(v: &BigInt, digits: usize) -> String {
    let mut out = String::new();
    if v.sign() == Sign::Minus {
        out.push('-');
    }
    let mut body = v.magnitude().to_str_radix(10);
    while body.len() <= digits {
        body.insert(0, '0');
    }
    let split = body.len() - digits;
    out.push_str(&body[..split]);
    if digits > 0 {
        out.push('.');
        out.push_str(&body[split..]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec::Vec;

    fn q(a: Rational, b: Rational, d: Rational) -> QuadReal {
        QuadReal::new(a, b, d).unwrap()
    }

    #[test]
    fn canonical_forms() {
        let x = q(int(0), int(1), int(8));
        assert_eq!((x.a(), x.b(), x.s()), (&int(0), &int(2), &BigUint::from(2u32)));
        let y = q(int(-4), int(1), int(0));
        assert_eq!(y, QuadReal::integer(-4));
        assert_eq!(y.s(), &BigUint::one());
        let z = q(rat(1, 2), rat(3, 2), rat(4, 9));
        assert_eq!(z, QuadReal::rational(rat(3, 2)));
        assert_eq!(
            QuadReal::new(int(0), int(1), int(-1)),
            Err(ExactError::NegativeRadicand)
        );
        // √(1/2) = (1/2)√2
        assert_eq!(q(int(0), int(1), rat(1, 2)), q(int(0), rat(1, 2), int(2)));
    }

    #[test]
    fn field_arithmetic() {
        let sum = QuadReal::integer(-4).checked_add(&QuadReal::integer(4)).unwrap();
        assert!(sum.is_zero());
        let p = q(int(1), int(1), int(2));
        let m = q(int(1), int(-1), int(2));
        assert_eq!(p.checked_mul(&m).unwrap(), QuadReal::integer(-1));
        let xi = QuadReal::integer(-4);
        let shifted = xi.add_rational(&int(4));
        let prod = shifted.checked_mul(&shifted.add_rational(&int(10))).unwrap();
        assert!(prod.is_zero());
        let r3 = QuadReal::sqrt_of(int(3)).unwrap();
        assert!(matches!(
            p.checked_add(&r3),
            Err(ExactError::MixedField { .. })
        ));
        assert_eq!(p.checked_div(&p).unwrap(), QuadReal::one());
        assert_eq!(
            p.checked_div(&QuadReal::zero()),
            Err(ExactError::DivisionByZero)
        );
    }

    #[test]
    fn comparisons() {
        let two = QuadReal::integer(2);
        let one_plus_r2 = q(int(1), int(1), int(2));
        assert_eq!(two.compare(&one_plus_r2), Ordering::Less);
        assert_eq!(
            QuadReal::integer(-16).compare(&QuadReal::rational(rat(-64, 4))),
            Ordering::Equal
        );
        let thr = q(rat(45, 2), rat(-3, 2), int(17));
        assert_eq!(QuadReal::integer(16).compare(&thr), Ordering::Less);
        assert_eq!(QuadReal::integer(17).compare(&thr), Ordering::Greater);
        // √2 + √3 ≈ 3.14626, decided across two fields
        let r2 = QuadReal::sqrt_of(int(2)).unwrap();
        let r3 = QuadReal::sqrt_of(int(3)).unwrap();
        let rest_hi = (-r3.clone()).add_rational(&rat(315, 100));
        let rest_lo = (-r3.clone()).add_rational(&rat(314, 100));
        assert_eq!(r2.compare(&rest_hi), Ordering::Less);
        assert_eq!(r2.compare(&rest_lo), Ordering::Greater);
        assert_eq!(r2.compare(&r3), Ordering::Less);
    }

    #[test]
    fn decimals() {
        let r2 = QuadReal::sqrt_of(int(2)).unwrap();
        assert_eq!(r2.to_decimal(5), "1.41421");
        assert_eq!(QuadReal::integer(-4).to_decimal(3), "-4.000");
        let thr = q(rat(45, 2), rat(-3, 2), int(17));
        // 22.5 − 1.5·4.1231056… = 16.31534…
        assert_eq!(thr.to_decimal(4), "16.3153");
        assert_eq!(QuadReal::rational(rat(1, 8)).to_decimal(2), "0.12");
        assert_eq!(QuadReal::rational(rat(3, 8)).to_decimal(2), "0.38");
        assert_eq!(QuadReal::rational(rat(-1, 8)).to_decimal(2), "-0.12");
        assert_eq!(QuadReal::rational(rat(5, 2)).to_decimal(0), "2");
        assert_eq!((-r2).to_decimal(3), "-1.414");
    }

    #[test]
    fn floors() {
        let cases: Vec<(QuadReal, i64)> = alloc::vec![
            (QuadReal::sqrt_of(int(2)).unwrap(), 1),
            (-QuadReal::sqrt_of(int(2)).unwrap(), -2),
            (q(rat(45, 2), rat(-3, 2), int(17)), 16),
            (QuadReal::rational(rat(-7, 2)), -4),
            (q(rat(1, 2), rat(1, 2), int(5)), 1),
        ];
        for (x, f) in cases {
            assert_eq!(x.floor(), BigInt::from(f), "floor of {x}");
        }
    }

    #[test]
    fn square_roots() {
        // (1 + √2)² = 3 + 2√2
        let sq = q(int(3), int(2), int(2));
        assert_eq!(sq.sqrt().unwrap(), q(int(1), int(1), int(2)));
        // (√2 − 1)² = 3 − 2√2; the positive root is √2 − 1
        let sq = q(int(3), int(-2), int(2));
        assert_eq!(sq.sqrt().unwrap(), q(int(-1), int(1), int(2)));
        assert_eq!(QuadReal::integer(9).sqrt().unwrap(), QuadReal::integer(3));
        assert_eq!(q(int(1), int(1), int(2)).sqrt(), Err(ExactError::NotInField));
        assert_eq!(
            QuadReal::integer(-1).sqrt(),
            Err(ExactError::NegativeRadicand)
        );
    }

    #[test]
    fn display() {
        assert_eq!(q(rat(45, 2), rat(-3, 2), int(17)).to_string(), "45/2-3/2√17");
        assert_eq!(QuadReal::sqrt_of(int(8)).unwrap().to_string(), "2√2");
        assert_eq!((-QuadReal::sqrt_of(int(3)).unwrap()).to_string(), "-√3");
        assert_eq!(QuadReal::integer(-4).to_string(), "-4");
    }
}
