//! Exact scalars: `Q`, `Q(√2)` and the Gaussian extension `Q(i, √2)`.
//!
//! Every matrix entry and polynomial coefficient in the crate lives in one of
//! these fields. Rationals are arbitrary precision and always kept in lowest
//! terms with a positive denominator (the `num-rational` invariant).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Builds the rational `num/den`. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim()).map_err(|_| Error::Parse(format!("invalid rational `{s}`")))
}

/// Correctly rounded (up to the quality of `num-rational`) conversion.
pub fn rational_to_f64(r: &Rational) -> f64 {
    ToPrimitive::to_f64(r).unwrap_or_else(|| {
        // Out-of-range magnitudes: fall back to a shifted division.
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// A commutative field with exact arithmetic.
///
/// The `*_ref` methods exist so that elimination loops do not need to clone
/// both operands; concrete types override them with borrowing arithmetic.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn inv(&self) -> Option<Self>;
    fn from_rational(r: Rational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(rat_int(n))
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.clone() + other.clone()
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.clone() - other.clone()
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.clone() * other.clone()
    }
    fn div_ref(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul_ref(&i))
    }
}

/// An ordered subfield of the reals.
pub trait RealField: Field + Ord {
    fn to_f64(&self) -> f64;
}

impl Field for Rational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
}

impl RealField for Rational {
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
}

/// `a + b·√2` with rational `a`, `b`. The pair is the canonical form.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QSqrt2 {
    pub a: Rational,
    pub b: Rational,
}

impl QSqrt2 {
    pub fn new(a: Rational, b: Rational) -> Self {
        QSqrt2 { a, b }
    }

    pub fn rational(a: Rational) -> Self {
        QSqrt2 { a, b: Rational::zero() }
    }

    pub fn int(n: i64) -> Self {
        Self::rational(rat_int(n))
    }

    pub fn frac(num: i64, den: i64) -> Self {
        Self::rational(rat(num, den))
    }

    pub fn sqrt2() -> Self {
        QSqrt2 { a: Rational::zero(), b: Rational::one() }
    }

    /// `num/den · √2`
    pub fn sqrt2_times(num: i64, den: i64) -> Self {
        QSqrt2 { a: Rational::zero(), b: rat(num, den) }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Galois conjugate `a − b√2`.
    pub fn conj(&self) -> Self {
        QSqrt2 { a: self.a.clone(), b: -self.b.clone() }
    }

    /// Field norm `a² − 2b²`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - rat_int(2) * &self.b * &self.b
    }

    pub fn scale(&self, r: &Rational) -> Self {
        QSqrt2 { a: &self.a * r, b: &self.b * r }
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.div_ref(other).ok_or(Error::DivisionByZero)
    }

    pub fn signum(&self) -> i32 {
        match self.cmp(&QSqrt2::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    /// Double-precision value, within a few ulp of the exact value.
    ///
    /// When `a` and `b√2` have opposite signs the direct sum cancels, so the
    /// value is computed as `(a² − 2b²)/(a − b√2)` instead, where no
    /// cancellation occurs.
    pub fn to_f64(&self) -> f64 {
        let a = rational_to_f64(&self.a);
        let b = rational_to_f64(&self.b);
        if self.b.is_zero() {
            return a;
        }
        if self.a.is_zero() || self.a.is_positive() == self.b.is_positive() {
            return a + b * std::f64::consts::SQRT_2;
        }
        let norm = rational_to_f64(&self.norm());
        norm / (a - b * std::f64::consts::SQRT_2)
    }

    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(t);
        // Split at the last top-level sign that precedes the sqrt2 term.
        if let Some(pos) = t.find("sqrt2") {
            let head = t[..pos].trim_end();
            let head = head.strip_suffix('*').unwrap_or(head);
            // `head` is either `b` or `a+b` / `a-b`.
            let split = head
                .char_indices()
                .skip(1)
                .filter(|&(i, c)| {
                    (c == '+' || c == '-') && !head[..i].ends_with(['e', 'E', '/', '*'])
                })
                .map(|(i, _)| i)
                .last();
            let (a, b) = match split {
                Some(i) => (parse_rational(&head[..i])?, parse_b(&head[i..])?),
                None => (Rational::zero(), parse_b(head)?),
            };
            if !t[pos + 5..].trim().is_empty() {
                return Err(Error::Parse(format!("trailing input in `{s}`")));
            }
            Ok(QSqrt2 { a, b })
        } else {
            Ok(QSqrt2::rational(parse_rational(t)?))
        }
    }
}

fn parse_b(s: &str) -> Result<Rational> {
    match s.trim() {
        "" | "+" => Ok(Rational::one()),
        "-" => Ok(-Rational::one()),
        t => parse_rational(t.strip_prefix('+').unwrap_or(t)),
    }
}

impl Zero for QSqrt2 {
    fn zero() -> Self {
        QSqrt2 { a: Rational::zero(), b: Rational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QSqrt2 {
    fn one() -> Self {
        QSqrt2 { a: Rational::one(), b: Rational::zero() }
    }
}

impl Add for QSqrt2 {
    type Output = QSqrt2;
    fn add(self, o: QSqrt2) -> QSqrt2 {
        QSqrt2 { a: self.a + o.a, b: self.b + o.b }
    }
}

impl<'a> Add<&'a QSqrt2> for &'a QSqrt2 {
    type Output = QSqrt2;
    fn add(self, o: &QSqrt2) -> QSqrt2 {
        QSqrt2 { a: &self.a + &o.a, b: &self.b + &o.b }
    }
}

impl Sub for QSqrt2 {
    type Output = QSqrt2;
    fn sub(self, o: QSqrt2) -> QSqrt2 {
        QSqrt2 { a: self.a - o.a, b: self.b - o.b }
    }
}

impl<'a> Sub<&'a QSqrt2> for &'a QSqrt2 {
    type Output = QSqrt2;
    fn sub(self, o: &QSqrt2) -> QSqrt2 {
        QSqrt2 { a: &self.a - &o.a, b: &self.b - &o.b }
    }
}

impl Mul for QSqrt2 {
    type Output = QSqrt2;
    fn mul(self, o: QSqrt2) -> QSqrt2 {
        &self * &o
    }
}

impl<'a> Mul<&'a QSqrt2> for &'a QSqrt2 {
    type Output = QSqrt2;
    fn mul(self, o: &QSqrt2) -> QSqrt2 {
        if self.b.is_zero() && o.b.is_zero() {
            return QSqrt2::rational(&self.a * &o.a);
        }
        let two = rat_int(2);
        QSqrt2 {
            a: &self.a * &o.a + &two * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }
}

impl Neg for QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2 { a: -self.a, b: -self.b }
    }
}

impl Field for QSqrt2 {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(QSqrt2 { a: &self.a / &n, b: -(&self.b / &n) })
    }
    fn from_rational(r: Rational) -> Self {
        QSqrt2::rational(r)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
}

impl PartialOrd for QSqrt2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QSqrt2 {
    /// Exact comparison via the sign of the difference.
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self - other;
        let sa = d.a.signum();
        let sb = d.b.signum();
        if sb.is_zero() {
            return sa.cmp(&Rational::zero());
        }
        if sa.is_zero() || sa == sb {
            return sb.cmp(&Rational::zero());
        }
        // Opposite signs: compare a² with 2b².
        let lhs = &d.a * &d.a;
        let rhs = rat_int(2) * &d.b * &d.b;
        let a_wins = lhs.cmp(&rhs);
        match a_wins {
            Ordering::Equal => Ordering::Equal,
            Ordering::Greater => sa.cmp(&Rational::zero()),
            Ordering::Less => sb.cmp(&Rational::zero()),
        }
    }
}

impl RealField for QSqrt2 {
    fn to_f64(&self) -> f64 {
        QSqrt2::to_f64(self)
    }
}

impl fmt::Debug for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `p/q`, `r/s*sqrt2` or `p/q+r/s*sqrt2`; the textual polynomial format wraps
/// two-part coefficients in parentheses.
impl fmt::Display for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}*sqrt2", self.b),
            (false, false) => {
                if self.b.is_negative() {
                    write!(f, "{}{}*sqrt2", self.a, self.b)
                } else {
                    write!(f, "{}+{}*sqrt2", self.a, self.b)
                }
            }
        }
    }
}

impl QSqrt2 {
    /// Human-oriented rendering: `3/2`, `-sqrt(2)`, `1/2+3*sqrt(2)`.
    pub fn pretty(&self) -> String {
        let radical = |b: &Rational| -> String {
            if b.is_one() {
                "sqrt(2)".to_string()
            } else if (-b).is_one() {
                "-sqrt(2)".to_string()
            } else {
                format!("{b}*sqrt(2)")
            }
        };
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => self.a.to_string(),
            (true, false) => radical(&self.b),
            (false, false) => {
                let r = radical(&self.b);
                if r.starts_with('-') {
                    format!("{}{}", self.a, r)
                } else {
                    format!("{}+{}", self.a, r)
                }
            }
        }
    }
}

impl Serialize for QSqrt2 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("QSqrt2", 2)?;
        st.serialize_field("a", &self.a.to_string())?;
        st.serialize_field("b", &self.b.to_string())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for QSqrt2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            a: String,
            b: String,
        }
        let raw = Raw::deserialize(d)?;
        let a = parse_rational(&raw.a).map_err(serde::de::Error::custom)?;
        let b = parse_rational(&raw.b).map_err(serde::de::Error::custom)?;
        Ok(QSqrt2 { a, b })
    }
}

/// Serde adapter storing a rational as its `p/q` string.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// `re + i·im` over `Q(√2)`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussQSqrt2 {
    pub re: QSqrt2,
    pub im: QSqrt2,
}

impl GaussQSqrt2 {
    pub fn new(re: QSqrt2, im: QSqrt2) -> Self {
        GaussQSqrt2 { re, im }
    }

    pub fn real(re: QSqrt2) -> Self {
        GaussQSqrt2 { re, im: QSqrt2::zero() }
    }

    pub fn i() -> Self {
        GaussQSqrt2 { re: QSqrt2::zero(), im: QSqrt2::one() }
    }

    pub fn int(n: i64) -> Self {
        Self::real(QSqrt2::int(n))
    }

    pub fn conj(&self) -> Self {
        GaussQSqrt2 { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `|x|² = re² + im²`, an element of `Q(√2)`.
    pub fn abs2(&self) -> QSqrt2 {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

impl Zero for GaussQSqrt2 {
    fn zero() -> Self {
        GaussQSqrt2 { re: QSqrt2::zero(), im: QSqrt2::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussQSqrt2 {
    fn one() -> Self {
        GaussQSqrt2 { re: QSqrt2::one(), im: QSqrt2::zero() }
    }
}

impl Add for GaussQSqrt2 {
    type Output = GaussQSqrt2;
    fn add(self, o: GaussQSqrt2) -> GaussQSqrt2 {
        GaussQSqrt2 { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for GaussQSqrt2 {
    type Output = GaussQSqrt2;
    fn sub(self, o: GaussQSqrt2) -> GaussQSqrt2 {
        GaussQSqrt2 { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Mul for GaussQSqrt2 {
    type Output = GaussQSqrt2;
    fn mul(self, o: GaussQSqrt2) -> GaussQSqrt2 {
        self.mul_ref(&o)
    }
}

impl Neg for GaussQSqrt2 {
    type Output = GaussQSqrt2;
    fn neg(self) -> GaussQSqrt2 {
        GaussQSqrt2 { re: -self.re, im: -self.im }
    }
}

impl Field for GaussQSqrt2 {
    fn inv(&self) -> Option<Self> {
        let n = self.abs2().inv()?;
        Some(GaussQSqrt2 { re: &self.re * &n, im: -(&self.im * &n) })
    }
    fn from_rational(r: Rational) -> Self {
        GaussQSqrt2::real(QSqrt2::rational(r))
    }
    fn add_ref(&self, o: &Self) -> Self {
        GaussQSqrt2 { re: &self.re + &o.re, im: &self.im + &o.im }
    }
    fn sub_ref(&self, o: &Self) -> Self {
        GaussQSqrt2 { re: &self.re - &o.re, im: &self.im - &o.im }
    }
    fn mul_ref(&self, o: &Self) -> Self {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussQSqrt2::real(&self.re * &o.re);
        }
        GaussQSqrt2 {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }
}

impl fmt::Debug for GaussQSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GaussQSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "({})*i", self.im)
        } else {
            write!(f, "({})+({})*i", self.re, self.im)
        }
    }
}

impl From<QSqrt2> for GaussQSqrt2 {
    fn from(x: QSqrt2) -> Self {
        GaussQSqrt2::real(x)
    }
}

/// Splits `n = m²·r` with `r` squarefree, by trial division.
///
/// Factors above `limit` are left inside `r`, which then may not be squarefree;
/// the identity `n = m²·r` always holds.
pub fn square_part(n: &BigInt, limit: u64) -> (BigInt, BigInt) {
    let mut rest = n.abs();
    let mut m = BigInt::one();
    let mut p: u64 = 2;
    while p <= limit {
        let pp = BigInt::from(p) * BigInt::from(p);
        if pp > rest {
            break;
        }
        let bp = BigInt::from(p);
        while (&rest % &pp).is_zero() {
            rest /= &pp;
            m *= &bp;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let root = rest.sqrt();
    if &root * &root == rest {
        m *= root;
        rest = BigInt::one();
    }
    if n.is_negative() {
        rest = -rest;
    }
    (m, rest)
}

/// Exact rational approximation by continued fractions with a bounded
/// denominator. Returns `None` when no convergent is within `tol`.
pub fn recognize_rational(x: f64, max_den: u64, tol: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut y = x;
    for _ in 0..64 {
        let a = y.floor();
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2 > BigInt::from(max_den) {
            break;
        }
        let cand = Rational::new(h2.clone(), k2.clone());
        if (rational_to_f64(&cand) - x).abs() <= tol {
            return Some(cand);
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let frac = y - a;
        if frac.abs() < 1e-300 {
            break;
        }
        y = 1.0 / frac;
        if !y.is_finite() {
            break;
        }
    }
    None
}

pub fn lcm_denominators<'a>(it: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt2_squares_to_two() {
        let s = QSqrt2::sqrt2();
        assert_eq!(&s * &s, QSqrt2::int(2));
    }

    #[test]
    fn conjugate_product_is_norm() {
        let x = QSqrt2::new(rat_int(1), rat_int(1));
        assert_eq!(&x * &x.conj(), QSqrt2::int(-1));
    }

    #[test]
    fn division_example() {
        let x = QSqrt2::frac(3, 2);
        let q = x.checked_div(&QSqrt2::sqrt2()).unwrap();
        assert_eq!(q, QSqrt2::sqrt2_times(3, 4));
        assert_eq!(&q * &QSqrt2::sqrt2(), x);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(
            QSqrt2::one().checked_div(&QSqrt2::zero()),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn float_values() {
        assert_eq!(QSqrt2::sqrt2().to_f64(), 1.4142135623730951);
        assert_eq!(QSqrt2::frac(-15, 4).to_f64(), -3.75);
    }

    #[test]
    fn ordering_handles_mixed_signs() {
        // 3 - 2√2 ≈ 0.17 > 0, 1 - √2 < 0
        assert!(QSqrt2::new(rat_int(3), rat_int(-2)) > QSqrt2::zero());
        assert!(QSqrt2::new(rat_int(1), rat_int(-1)) < QSqrt2::zero());
        assert!(QSqrt2::new(rat_int(-1), rat_int(1)) > QSqrt2::zero());
        assert_eq!(QSqrt2::new(rat_int(2), rat_int(-1)).signum(), 1);
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["3/2", "-7", "1/3*sqrt2", "1/2+1/3*sqrt2", "-1/2-5*sqrt2", "0"] {
            let x = QSqrt2::parse(s).unwrap();
            assert_eq!(x.to_string(), s);
        }
        assert_eq!(QSqrt2::parse("(2-sqrt2)").unwrap(), QSqrt2::new(rat_int(2), rat_int(-1)));
        assert!(QSqrt2::parse("1/0").is_err());
    }

    #[test]
    fn json_encoding() {
        let j = serde_json::to_string(&QSqrt2::sqrt2()).unwrap();
        assert_eq!(j, r#"{"a":"0","b":"1"}"#);
        let back: QSqrt2 = serde_json::from_str(&j).unwrap();
        assert_eq!(back, QSqrt2::sqrt2());
    }

    #[test]
    fn gaussian_inverse_and_conjugation() {
        let x = GaussQSqrt2::new(QSqrt2::int(1), QSqrt2::sqrt2());
        let inv = x.inv().unwrap();
        assert_eq!(x.mul_ref(&inv), GaussQSqrt2::one());
        assert_eq!(x.conj().conj(), x);
        assert_eq!(GaussQSqrt2::i().mul_ref(&GaussQSqrt2::i()), GaussQSqrt2::int(-1));
    }

    #[test]
    fn square_part_extracts_squares() {
        let (m, r) = square_part(&BigInt::from(640), 1000);
        assert_eq!((m, r), (BigInt::from(8), BigInt::from(10)));
        let (m, r) = square_part(&BigInt::from(768), 1000);
        assert_eq!((m, r), (BigInt::from(16), BigInt::from(3)));
    }

    #[test]
    fn recognizes_simple_fractions() {
        assert_eq!(recognize_rational(-0.5, 1000, 1e-12), Some(rat(-1, 2)));
        assert_eq!(recognize_rational(105.0 / 4.0, 1000, 1e-12), Some(rat(105, 4)));
        assert_eq!(recognize_rational(std::f64::consts::PI, 50, 1e-12), None);
    }
}
