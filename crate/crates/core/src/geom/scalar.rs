//! Exact rational scalar.
//!
//! Values live in a checked `Ratio<i128>` until an operation overflows, then
//! in a `BigRational`. Every result is re-canonicalized, so two equal values
//! always share one representation and `Hash`/`Eq` agree.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

type Small = Ratio<i128>;

#[derive(Clone)]
enum Repr {
    Small(Small),
    Big(BigRational),
}

/// An exact rational number.
#[derive(Clone)]
pub struct Scalar(Repr);

fn big_of(r: &Small) -> BigRational {
    BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar(Repr::Small(Small::zero()))
    }

    pub fn one() -> Self {
        Scalar(Repr::Small(Small::one()))
    }

    pub fn from_int(v: i64) -> Self {
        Scalar(Repr::Small(Small::from_integer(v as i128)))
    }

    /// `num / den`. Panics when `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar(Repr::Small(Small::new(num as i128, den as i128)))
    }

    /// Builds from arbitrary-precision parts; `None` when `den == 0`.
    pub fn from_bigints(num: BigInt, den: BigInt) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        Some(Self::from_big(BigRational::new(num, den)))
    }

    fn from_big(b: BigRational) -> Self {
        match (b.numer().to_i128(), b.denom().to_i128()) {
            (Some(n), Some(d)) => Scalar(Repr::Small(Small::new_raw(n, d))),
            _ => Scalar(Repr::Big(b)),
        }
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(s) => big_of(s),
            Repr::Big(b) => b.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(s) => BigInt::from(*s.numer()),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(s) => BigInt::from(*s.denom()),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Small(s) => s.is_zero(),
            Repr::Big(b) => b.is_zero(),
        }
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(s) => {
                if s.is_zero() {
                    0
                } else if s.is_positive() {
                    1
                } else {
                    -1
                }
            }
            Repr::Big(b) => {
                if b.is_zero() {
                    0
                } else if b.is_positive() {
                    1
                } else {
                    -1
                }
            }
        }
    }

    pub fn abs(&self) -> Scalar {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn floor(&self) -> BigInt {
        match &self.0 {
            Repr::Small(s) => BigInt::from(s.floor().to_integer()),
            Repr::Big(b) => b.floor().to_integer(),
        }
    }

    pub fn ceil(&self) -> BigInt {
        match &self.0 {
            Repr::Small(s) => BigInt::from(s.ceil().to_integer()),
            Repr::Big(b) => b.ceil().to_integer(),
        }
    }

    /// Lossy conversion, for display only.
    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(s) => *s.numer() as f64 / *s.denom() as f64,
            Repr::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Nearest dyadic `n / 2^bits` to a float. Used by generators only.
    pub fn from_f64_dyadic(v: f64, bits: u32) -> Self {
        let scale = (1u64 << bits) as f64;
        let n = (v * scale).round() as i64;
        Scalar::new(n, 1i64 << bits)
    }

    pub fn half(&self) -> Scalar {
        self * &Scalar::new(1, 2)
    }

    pub fn min(a: &Scalar, b: &Scalar) -> Scalar {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn max(a: &Scalar, b: &Scalar) -> Scalar {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    /// Exact `2^-k`.
    pub fn pow2_neg(k: u32) -> Scalar {
        if k < 126 {
            Scalar(Repr::Small(Small::new_raw(1, 1i128 << k)))
        } else {
            Self::from_big(BigRational::new(BigInt::one(), BigInt::one() << k))
        }
    }

    /// A dyadic rational strictly inside the open interval `(lo, hi)`.
    ///
    /// Picks the coarsest dyadic grid that has a few points in the interval
    /// and returns the one nearest the middle; `salt` shifts the choice to a
    /// neighbouring grid point so repeated constructions can avoid each other.
    pub fn dyadic_between(lo: &Scalar, hi: &Scalar, salt: u64) -> Scalar {
        assert!(lo < hi, "empty interval");
        let width = hi - lo;
        // smallest k with 2^-k <= width / 8
        let mut k: u32 = 0;
        let mut step = Scalar::one();
        let eighth = &width * &Scalar::new(1, 8);
        if step > eighth {
            while step > eighth {
                k += 1;
                step = step.half();
            }
        } else {
            // width is large: use integer or coarser grid via the midpoint
            let mid = (lo + hi).half();
            let f = mid.floor();
            let cand = Scalar::from_bigints(f.clone(), BigInt::one()).unwrap();
            let offs = (salt % 3) as i64 - 1;
            for o in [offs, 0, 1, -1] {
                let c = &cand + &Scalar::from_int(o);
                if lo < &c && &c < hi {
                    return c;
                }
            }
        }
        let scale = BigInt::one() << k;
        let mid = (lo + hi).half();
        let mid_scaled = &mid * &Scalar::from_bigints(scale.clone(), BigInt::one()).unwrap();
        let base = mid_scaled.floor();
        let offs = [0i64, 1, -1, 2, -2, 3, -3];
        let start = (salt as usize) % offs.len();
        for i in 0..offs.len() {
            let o = offs[(start + i) % offs.len()];
            let c = Scalar::from_bigints(&base + BigInt::from(o), scale.clone()).unwrap();
            if lo < &c && &c < hi {
                return c;
            }
        }
        unreachable!("dyadic grid finer than width/8 must hit the interval")
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<'a> $tr<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
                    if let Some(r) = a.$checked(b) {
                        return Scalar(Repr::Small(r));
                    }
                }
                Scalar::from_big(self.to_big().$m(rhs.to_big()))
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        assert!(!rhs.is_zero(), "division by zero");
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
            if let Some(r) = a.checked_div(b) {
                return Scalar(Repr::Small(r));
            }
        }
        Scalar::from_big(self.to_big() / rhs.to_big())
    }
}

impl Div<Scalar> for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        &self / &rhs
    }
}

impl<'a> Div<&'a Scalar> for Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        &self / rhs
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.0 {
            Repr::Small(s) => match s.numer().checked_neg() {
                Some(n) => Scalar(Repr::Small(Small::new_raw(n, *s.denom()))),
                None => Scalar::from_big(-big_of(s)),
            },
            Repr::Big(b) => Scalar::from_big(-b.clone()),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a == b,
            (Repr::Big(a), Repr::Big(b)) => a == b,
            // canonical form: a value that fits is always Small
            _ => false,
        }
    }
}

impl Eq for Scalar {}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small(s) => {
                0u8.hash(state);
                s.numer().hash(state);
                s.denom().hash(state);
            }
            Repr::Big(b) => {
                1u8.hash(state);
                b.numer().hash(state);
                b.denom().hash(state);
            }
        }
    }
}

impl fmt::Display for Scalar {
    /// Always `numerator/denominator`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(s) => write!(f, "{}/{}", s.numer(), s.denom()),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Error from parsing a rational literal.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseScalarError {
    #[error("malformed rational {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

impl FromStr for Scalar {
    type Err = ParseScalarError;

    /// Accepts `n`, `n/d` and `-n/d` (integers of any size).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let num = BigInt::from_str(n).map_err(|_| ParseScalarError::Malformed(s.to_string()))?;
        let den = BigInt::from_str(d).map_err(|_| ParseScalarError::Malformed(s.to_string()))?;
        Scalar::from_bigints(num, den).ok_or_else(|| ParseScalarError::ZeroDenominator(s.to_string()))
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_int(v)
    }
}

impl From<i32> for Scalar {
    fn from(v: i32) -> Self {
        Scalar::from_int(v as i64)
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
