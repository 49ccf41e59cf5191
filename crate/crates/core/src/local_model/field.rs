//! Exact scalars: rationals, or a prime field F_q.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExactField {
    Rational,
    Prime(u64),
}

fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

impl ExactField {
    pub fn prime(q: u64) -> Result<ExactField> {
        if !is_prime(q) {
            return invalid(format!("{q} is not prime"));
        }
        Ok(ExactField::Prime(q))
    }

    pub fn characteristic(self) -> u64 {
        match self {
            ExactField::Rational => 0,
            ExactField::Prime(q) => q,
        }
    }

    pub fn zero(self) -> Scalar {
        self.int(0)
    }

    pub fn one(self) -> Scalar {
        self.int(1)
    }

    pub fn int(self, n: i64) -> Scalar {
        match self {
            ExactField::Rational => Scalar::Q(BigRational::from_integer(n.into())),
            ExactField::Prime(q) => Scalar::F(n.rem_euclid(q as i64) as u64, q),
        }
    }

    pub fn ratio(self, n: i64, d: i64) -> Result<Scalar> {
        self.int(n).div(&self.int(d))
    }

    pub fn from_rational(self, r: &BigRational) -> Result<Scalar> {
        match self {
            ExactField::Rational => Ok(Scalar::Q(r.clone())),
            ExactField::Prime(q) => {
                let m = BigInt::from(q);
                let n = (r.numer() % &m + &m) % &m;
                let d = (r.denom() % &m + &m) % &m;
                let n = Scalar::F(n.to_u64().unwrap_or(0), q);
                let d = Scalar::F(d.to_u64().unwrap_or(0), q);
                n.div(&d)
            }
        }
    }

    /// Parses "n" or "n/d".
    pub fn parse(self, s: &str) -> Result<Scalar> {
        let r = BigRational::from_str(s.trim()).map_err(|_| Error::Validation(format!("cannot parse scalar {s:?}")))?;
        self.from_rational(&r)
    }
}

impl fmt::Display for ExactField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactField::Rational => write!(f, "Q"),
            ExactField::Prime(q) => write!(f, "F_{q}"),
        }
    }
}

/// A field element. Mixing elements of different fields is a programming error.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    F(u64, u64),
}

fn pow_mod(mut b: u64, mut e: u64, q: u64) -> u64 {
    let mut r = 1u64;
    b %= q;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % q as u128) as u64;
        }
        b = ((b as u128 * b as u128) % q as u128) as u64;
        e >>= 1;
    }
    r
}

impl Scalar {
    pub fn field(&self) -> ExactField {
        match self {
            Scalar::Q(_) => ExactField::Rational,
            Scalar::F(_, q) => ExactField::Prime(*q),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::F(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::F(v, _) => *v == 1,
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero("inverse of zero".into()));
        }
        Ok(match self {
            Scalar::Q(r) => Scalar::Q(r.recip()),
            Scalar::F(v, q) => Scalar::F(pow_mod(*v, q - 2, *q), *q),
        })
    }

    pub fn div(&self, o: &Scalar) -> Result<Scalar> {
        Ok(self * &o.inv()?)
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut r = self.field().one();
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// The rational value, when this is a rational.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Q(r) => Some(r),
            Scalar::F(..) => None,
        }
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Q(r) if r.is_negative())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $qop:tt, $fop:expr) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                match (self, o) {
                    (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a $qop b),
                    (Scalar::F(a, q), Scalar::F(b, r)) if q == r => {
                        let f: fn(u128, u128, u128) -> u128 = $fop;
                        Scalar::F(f(*a as u128, *b as u128, *q as u128) as u64, *q)
                    }
                    _ => panic!("arithmetic between scalars of different fields"),
                }
            }
        }
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
    };
}

binop!(Add, add, +, |a, b, q| (a + b) % q);
binop!(Sub, sub, -, |a, b, q| (a + q - b) % q);
binop!(Mul, mul, *, |a, b, q| (a * b) % q);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::F(a, q) => Scalar::F((q - a) % q, *q),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => write!(f, "{r}"),
            Scalar::F(v, _) => write!(f, "{v}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse() {
        let f = ExactField::prime(37).unwrap();
        for n in 1..37 {
            let x = f.int(n);
            assert!((&x * &x.inv().unwrap()).is_one());
        }
        assert!(f.int(0).inv().is_err());
        assert!(ExactField::prime(35).is_err());
    }

    #[test]
    fn parse_fractions() {
        let q = ExactField::Rational;
        assert_eq!(q.parse("-3/6").unwrap(), q.ratio(-1, 2).unwrap());
        let f = ExactField::Prime(5);
        assert_eq!(f.parse("1/2").unwrap(), f.int(3));
        assert!(f.parse("1/5").is_err());
    }
}
