//! Laurent polynomials in v and rational functions in v over an [`ExactField`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

use super::field::{ExactField, Scalar};

/// Σ c_k v^k with k ≥ `low`. Canonical: no zero coefficient at either end, and
/// the zero polynomial has `low = 0` and no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: ExactField,
    low: i64,
    c: Vec<Scalar>,
}

impl Poly {
    pub fn zero(field: ExactField) -> Poly {
        Poly { field, low: 0, c: Vec::new() }
    }

    pub fn constant(s: Scalar) -> Poly {
        Poly::monomial(s, 0)
    }

    pub fn monomial(s: Scalar, k: i64) -> Poly {
        Poly::from_coeffs(s.field(), k, vec![s])
    }

    /// The variable v.
    pub fn v(field: ExactField) -> Poly {
        Poly::monomial(field.one(), 1)
    }

    pub fn from_coeffs(field: ExactField, low: i64, c: Vec<Scalar>) -> Poly {
        let mut p = Poly { field, low, c };
        p.trim();
        p
    }

    /// Builds from (exponent, coefficient) terms; repeated exponents add up.
    pub fn from_terms(field: ExactField, terms: impl IntoIterator<Item = (i64, Scalar)>) -> Poly {
        terms.into_iter().fold(Poly::zero(field), |acc, (k, s)| &acc + &Poly::monomial(s, k))
    }

    fn trim(&mut self) {
        while self.c.last().is_some_and(Scalar::is_zero) {
            self.c.pop();
        }
        let lead = self.c.iter().take_while(|s| s.is_zero()).count();
        self.c.drain(..lead);
        self.low = if self.c.is_empty() { 0 } else { self.low + lead as i64 };
    }

    pub fn field(&self) -> ExactField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.c.len() == 1 && self.c[0].is_one()
    }

    /// Lowest exponent, i.e. the v-adic valuation. None for zero.
    pub fn low(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    /// Highest exponent. None for zero.
    pub fn high(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.c.len() as i64 - 1)
    }

    pub fn coeff(&self, k: i64) -> Scalar {
        let i = k - self.low;
        if i < 0 || i >= self.c.len() as i64 {
            self.field.zero()
        } else {
            self.c[i as usize].clone()
        }
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.c.iter().enumerate().filter(|(_, s)| !s.is_zero()).map(move |(i, s)| (self.low + i as i64, s))
    }

    pub fn is_constant(&self) -> bool {
        self.is_zero() || (self.low == 0 && self.c.len() == 1)
    }

    pub fn shift(&self, k: i64) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        Poly { field: self.field, low: self.low + k, c: self.c.clone() }
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        Poly::from_coeffs(self.field, self.low, self.c.iter().map(|x| x * s).collect())
    }

    /// v·d/dv.
    pub fn v_derivative(&self) -> Poly {
        let c = self.c.iter().enumerate().map(|(i, x)| x * &self.field.int(self.low + i as i64)).collect();
        Poly::from_coeffs(self.field, self.low, c)
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::constant(self.field.one()), |acc, _| &acc * self)
    }

    /// Evaluation; negative powers need x ≠ 0.
    pub fn eval(&self, x: &Scalar) -> Result<Scalar> {
        let mut acc = self.field.zero();
        for (k, s) in self.terms() {
            let xk = if k >= 0 { x.pow(k as u32) } else { x.inv()?.pow((-k) as u32) };
            acc = &acc + &(s * &xk);
        }
        Ok(acc)
    }

    /// Splits off the largest power of v: self = v^k · rest with rest(0) ≠ 0.
    fn split_v(&self) -> (i64, Poly) {
        (self.low, Poly { field: self.field, low: 0, c: self.c.clone() })
    }

    /// Division with remainder for ordinary polynomials (low ≥ 0 on both).
    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero("polynomial division by zero".into()));
        }
        let f = self.field;
        let (dh, dl) = (d.high().unwrap_or(0), d.coeff(d.high().unwrap_or(0)).inv()?);
        let mut r = self.clone();
        let mut q = Poly::zero(f);
        while let Some(rh) = r.high() {
            if rh < dh {
                break;
            }
            let m = Poly::monomial(&r.coeff(rh) * &dl, rh - dh);
            r = &r - &(&m * d);
            q = &q + &m;
        }
        Ok((q, r))
    }

    pub fn monic(&self) -> Poly {
        match self.high() {
            None => self.clone(),
            Some(h) => self.scale(&self.coeff(h).inv().expect("nonzero leading coefficient")),
        }
    }

    /// Monic gcd of ordinary polynomials.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).expect("nonzero divisor").1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Multiplicity of the root x (x = 0 gives the v-adic valuation). None for zero.
    pub fn valuation_at(&self, x: &Scalar) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        if x.is_zero() {
            return Some(self.low);
        }
        let (_, mut rest) = self.split_v();
        let lin = Poly::from_coeffs(self.field, 0, vec![-x, self.field.one()]);
        let mut k = 0;
        loop {
            let (q, r) = rest.div_rem(&lin).expect("nonzero divisor");
            if !r.is_zero() {
                return Some(k);
            }
            rest = q;
            k += 1;
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let lo = self.low.min(o.low);
        let hi = self.high().unwrap().max(o.high().unwrap());
        let c = (lo..=hi).map(|k| &self.coeff(k) + &o.coeff(k)).collect();
        Poly::from_coeffs(self.field, lo, c)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { field: self.field, low: self.low, c: self.c.iter().map(|x| -x).collect() }
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &(-o)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.field);
        }
        let mut c = vec![self.field.zero(); self.c.len() + o.c.len() - 1];
        for (i, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in o.c.iter().enumerate() {
                c[i + j] = &c[i + j] + &(x * y);
            }
        }
        Poly::from_coeffs(self.field, self.low + o.low, c)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, s) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{s}")?,
                1 => write!(f, "({s})v")?,
                _ => write!(f, "({s})v^{k}")?,
            }
        }
        Ok(())
    }
}

/// num/den in lowest terms. The denominator is an ordinary polynomial with
/// constant term 1, so all powers of v live in the (Laurent) numerator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::DivisionByZero("rational function with zero denominator".into()));
        }
        let f = num.field();
        if num.is_zero() {
            return Ok(RatFunc::from(Poly::zero(f)));
        }
        let (a, n) = num.split_v();
        let (b, d) = den.split_v();
        let g = n.gcd(&d);
        let n = n.div_rem(&g)?.0;
        let d = d.div_rem(&g)?.0;
        let c0 = d.coeff(0).inv()?;
        Ok(RatFunc { num: n.scale(&c0).shift(a - b), den: d.scale(&c0) })
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn field(&self) -> ExactField {
        self.num.field()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when this is a Laurent polynomial.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// True when this is an ordinary polynomial.
    pub fn is_polynomial(&self) -> bool {
        self.is_laurent() && self.num.low().is_none_or(|l| l >= 0)
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.is_laurent().then_some(&self.num)
    }

    pub fn inv(&self) -> Result<RatFunc> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc> {
        Ok(self * &o.inv()?)
    }

    /// Order of vanishing at x (negative for a pole). None for zero.
    pub fn valuation_at(&self, x: &Scalar) -> Option<i64> {
        Some(self.num.valuation_at(x)? - self.den.valuation_at(x).unwrap_or(0))
    }

    /// v-adic valuation. None for zero.
    pub fn valuation(&self) -> Option<i64> {
        self.num.low()
    }

    /// Value at v = 0; needs valuation ≥ 0.
    pub fn at_zero(&self) -> Result<Scalar> {
        match self.valuation() {
            None => Ok(self.field().zero()),
            Some(k) if k > 0 => Ok(self.field().zero()),
            Some(0) => Ok(self.num.coeff(0)),
            Some(_) => Err(Error::DivisionByZero("pole at v = 0".into())),
        }
    }

    /// v·d/dv.
    pub fn v_derivative(&self) -> RatFunc {
        let n = &(&self.num.v_derivative() * &self.den) - &(&self.num * &self.den.v_derivative());
        RatFunc::new(n, &self.den * &self.den).expect("nonzero denominator")
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> RatFunc {
        let one = Poly::constant(p.field().one());
        RatFunc { num: p, den: one }
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc::new(&self.num + &o.num, self.den.clone()).expect("nonzero");
        }
        let n = &(&self.num * &o.den) + &(&o.num * &self.den);
        RatFunc::new(n, &self.den * &o.den).expect("nonzero denominator")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self + &(-o)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::from(Poly::zero(self.field()));
        }
        RatFunc::new(&self.num * &o.num, &self.den * &o.den).expect("nonzero denominator")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_laurent() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "[{}]/[{}]", self.num, self.den)
        }
    }
}

/// Commutative ring operations shared by [`Poly`] and [`RatFunc`] entries.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn zero_in(field: ExactField) -> Self;
    fn one_in(field: ExactField) -> Self;
    fn field_of(&self) -> ExactField;
    fn is_zero_elt(&self) -> bool;
    fn add_r(&self, o: &Self) -> Self;
    fn sub_r(&self, o: &Self) -> Self;
    fn mul_r(&self, o: &Self) -> Self;
    fn neg_r(&self) -> Self;
}

macro_rules! ring_impl {
    ($t:ty, $zero:expr, $one:expr) => {
        impl Ring for $t {
            fn zero_in(field: ExactField) -> Self {
                $zero(field)
            }
            fn one_in(field: ExactField) -> Self {
                $one(field)
            }
            fn field_of(&self) -> ExactField {
                self.field()
            }
            fn is_zero_elt(&self) -> bool {
                self.is_zero()
            }
            fn add_r(&self, o: &Self) -> Self {
                self + o
            }
            fn sub_r(&self, o: &Self) -> Self {
                self - o
            }
            fn mul_r(&self, o: &Self) -> Self {
                self * o
            }
            fn neg_r(&self) -> Self {
                -self
            }
        }
    };
}

ring_impl!(Poly, Poly::zero, |f: ExactField| Poly::constant(f.one()));
ring_impl!(RatFunc, |f| RatFunc::from(Poly::zero(f)), |f: ExactField| RatFunc::from(Poly::constant(f.one())));

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> ExactField {
        ExactField::Rational
    }

    fn e(p: i64) -> Poly {
        Poly::from_coeffs(q(), 0, vec![q().int(p), q().one()])
    }

    #[test]
    fn canonical_form() {
        let p = Poly::from_coeffs(q(), -2, vec![q().zero(), q().int(3), q().zero()]);
        assert_eq!(p.low(), Some(-1));
        assert_eq!(p.high(), Some(-1));
        assert!((&p - &p).is_zero());
        assert_eq!((&p - &p).low(), None);
    }

    #[test]
    fn root_multiplicity() {
        let p = &e(37).pow(3) * &Poly::v(q()).shift(1);
        assert_eq!(p.valuation_at(&q().int(-37)), Some(3));
        assert_eq!(p.valuation_at(&q().zero()), Some(2));
        assert_eq!(p.valuation_at(&q().int(5)), Some(0));
    }

    #[test]
    fn rational_functions_reduce() {
        let a = RatFunc::new(&e(2) * &Poly::v(q()), e(2).shift(3)).unwrap();
        assert!(a.is_laurent());
        assert_eq!(a.valuation(), Some(-2));
        let b = RatFunc::new(Poly::v(q()), e(3)).unwrap();
        let s = &(&a + &b) - &b;
        assert_eq!(s, a);
        assert_eq!((&b * &b.inv().unwrap()), RatFunc::one_in(q()));
    }

    #[test]
    fn derivative_is_a_derivation() {
        let x = RatFunc::new(e(1).pow(2), e(4)).unwrap();
        let y = RatFunc::new(Poly::v(q()).shift(-3), e(-2)).unwrap();
        let lhs = (&x * &y).v_derivative();
        let rhs = &(&x.v_derivative() * &y) + &(&x * &y.v_derivative());
        assert_eq!(lhs, rhs);
    }
}
