use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::laurent::{exact_div, poly_gcd, LaurentPoly};
use crate::error::{Error, Result};

/// Number of steps of the base variable `s` per unit power of `q`: `s = q^(1/S_PER_Q)`.
///
/// Every pairing `<P, P>` of a supported Cartan type has denominator dividing 60, so
/// `q^<nu,lambda>` and `q^(2<nu,lambda>)` are integral powers of `s` for all of them.
pub const S_PER_Q: i64 = 120;

/// Exact element of `Q(s)`, kept in canonical form.
///
/// The denominator has lowest exponent 0 and highest coefficient 1, and shares no factor
/// with the numerator, so structural equality is field equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Default for ExactScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar {
            num: LaurentPoly::zero(),
            den: LaurentPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(c: BigRational) -> Self {
        ExactScalar {
            num: LaurentPoly::constant(c),
            den: LaurentPoly::one(),
        }
    }

    pub fn from_laurent(p: LaurentPoly) -> Self {
        ExactScalar {
            num: p,
            den: LaurentPoly::one(),
        }
    }

    /// `s^e`.
    pub fn s_pow(e: i64) -> Self {
        Self::from_laurent(LaurentPoly::monomial(BigRational::one(), e))
    }

    /// `q^k` for an integer `k`.
    pub fn q_pow(k: i64) -> Self {
        Self::s_pow(k * S_PER_Q)
    }

    /// `q^(num/den)`; panics if the exponent is not a multiple of `1/S_PER_Q`.
    pub fn q_pow_frac(num: i64, den: i64) -> Self {
        assert!(den > 0 && (num * S_PER_Q) % den == 0, "exponent {num}/{den} not representable");
        Self::s_pow(num * S_PER_Q / den)
    }

    /// Builds `num / den` and normalizes. Panics on a zero denominator.
    pub fn from_parts(num: LaurentPoly, den: LaurentPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        normalize(num, den)
    }

    pub fn numer(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denom(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the value is a Laurent polynomial in `s`.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(normalize(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, n: i64) -> Self {
        if n < 0 {
            return self.inv().expect("inverse of zero").pow(-n);
        }
        ExactScalar {
            num: self.num.pow(n as u32),
            den: self.den.pow(n as u32),
        }
    }

    /// Image under `s -> s^{-1}` (equivalently `q -> q^{-1}`).
    pub fn bar(&self) -> Self {
        normalize(self.num.dilate(-1), self.den.dilate(-1))
    }

    /// Image under `q -> q^k`.
    pub fn dilate(&self, k: i64) -> Self {
        assert!(k != 0);
        normalize(self.num.dilate(k), self.den.dilate(k))
    }

    /// Value at `q = 1`. Removable singularities are already cancelled by the canonical form.
    pub fn eval_at_one(&self) -> Result<BigRational> {
        let d = self.den.eval_one();
        if d.is_zero() {
            return Err(Error::Pole(format!("{} has a pole at q = 1", self)));
        }
        Ok(self.num.eval_one() / d)
    }

    /// Value at a rational `q`. Only integral powers of `q` can be substituted exactly.
    pub fn eval_at(&self, q: &BigRational) -> Result<BigRational> {
        if q.is_zero() {
            return Err(Error::Domain("q must be non-zero".into()));
        }
        if q.is_one() {
            return self.eval_at_one();
        }
        let integral = |p: &LaurentPoly| p.terms().iter().all(|(e, _)| e % S_PER_Q == 0);
        if !integral(&self.num) || !integral(&self.den) {
            return Err(Error::UnsupportedEvaluation(format!(
                "{} has fractional powers of q; cannot substitute q = {}",
                self, q
            )));
        }
        let num = self.num.dilate_down(S_PER_Q).eval(q);
        let den = self.den.dilate_down(S_PER_Q).eval(q);
        if den.is_zero() {
            return Err(Error::Pole(format!("{} has a pole at q = {}", self, q)));
        }
        Ok(num / den)
    }
}

impl LaurentPoly {
    /// Inverse of `dilate(k)` for polynomials whose exponents are all multiples of `k`.
    pub(crate) fn dilate_down(&self, k: i64) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms().iter().map(|(e, c)| (e / k, c.clone())))
    }
}

fn normalize(mut num: LaurentPoly, mut den: LaurentPoly) -> ExactScalar {
    if num.is_zero() {
        return ExactScalar::zero();
    }
    let lo = den.low().expect("non-zero denominator");
    if lo != 0 {
        den = den.shift(-lo);
        num = num.shift(-lo);
    }
    if let Some(c) = den.as_constant() {
        return ExactScalar {
            num: num.scale(&c.recip()),
            den: LaurentPoly::one(),
        };
    }
    if !num.is_monomial() {
        let g = poly_gcd(&num, &den);
        if !g.is_one() {
            num = exact_div(&num, &g).expect("gcd divides numerator");
            den = exact_div(&den, &g).expect("gcd divides denominator");
            let lo = den.low().unwrap();
            if lo != 0 {
                den = den.shift(-lo);
                num = num.shift(-lo);
            }
        }
    }
    let lc = den.leading_coeff().unwrap().clone();
    if !lc.is_one() {
        let r = lc.recip();
        den = den.scale(&r);
        num = num.scale(&r);
    }
    if den.is_one() {
        return ExactScalar {
            num,
            den: LaurentPoly::one(),
        };
    }
    ExactScalar { num, den }
}

impl<'a> Add<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            if self.den.is_one() {
                return ExactScalar {
                    num: self.num.add(&rhs.num),
                    den: LaurentPoly::one(),
                };
            }
            return normalize(self.num.add(&rhs.num), self.den.clone());
        }
        if rhs.den.is_one() {
            return normalize(self.num.add(&rhs.num.mul(&self.den)), self.den.clone());
        }
        if self.den.is_one() {
            return normalize(self.num.mul(&rhs.den).add(&rhs.num), rhs.den.clone());
        }
        let g = poly_gcd(&self.den, &rhs.den);
        let a = exact_div(&self.den, &g).unwrap();
        let b = exact_div(&rhs.den, &g).unwrap();
        normalize(
            self.num.mul(&b).add(&rhs.num.mul(&a)),
            a.mul(&rhs.den),
        )
    }
}

impl<'a> Mul<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        if self.is_zero() || rhs.is_zero() {
            return ExactScalar::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return ExactScalar {
                num: self.num.mul(&rhs.num),
                den: LaurentPoly::one(),
            };
        }
        // Cross-cancel before multiplying to keep intermediate degrees low.
        let (n1, d2) = cancel(&self.num, &rhs.den);
        let (n2, d1) = cancel(&rhs.num, &self.den);
        normalize(n1.mul(&n2), d1.mul(&d2))
    }
}

fn cancel(n: &LaurentPoly, d: &LaurentPoly) -> (LaurentPoly, LaurentPoly) {
    if d.is_one() || n.is_monomial() || d.is_monomial() {
        return (n.clone(), d.clone());
    }
    let g = poly_gcd(n, d);
    if g.is_one() {
        return (n.clone(), d.clone());
    }
    (exact_div(n, &g).unwrap(), exact_div(d, &g).unwrap())
}

impl<'a> Neg for &'a ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

impl<'a> Sub<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        self + &(-rhs)
    }
}

impl<'a> Div<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: &ExactScalar) -> ExactScalar {
        self * &rhs.inv().expect("division by zero scalar")
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: &ExactScalar) -> ExactScalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<ExactScalar> for &'a ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: ExactScalar) -> ExactScalar {
                self.$m(&rhs)
            }
        }
    };
}
forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, rhs: &ExactScalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&ExactScalar> for ExactScalar {
    fn sub_assign(&mut self, rhs: &ExactScalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&ExactScalar> for ExactScalar {
    fn mul_assign(&mut self, rhs: &ExactScalar) {
        *self = &*self * rhs;
    }
}

// ---- text format: "c*q^(a/b)" monomials joined by "+", descending exponent ----

fn fmt_exponent(e: i64) -> String {
    let g = e.gcd(&S_PER_Q);
    let (n, d) = (e / g, S_PER_Q / g);
    if d == 1 {
        format!("{}", n)
    } else {
        format!("{}/{}", n, d)
    }
}

fn fmt_poly(p: &LaurentPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    p.terms()
        .iter()
        .rev()
        .map(|(e, c)| format!("{}*q^({})", c, fmt_exponent(*e)))
        .collect::<Vec<_>>()
        .join("+")
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", fmt_poly(&self.num))
        } else {
            write!(f, "({})/({})", fmt_poly(&self.num), fmt_poly(&self.den))
        }
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational '{}'", s));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn parse_monomial(s: &str) -> Result<(i64, BigRational)> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad monomial '{}'", s));
    let (c, rest) = match s.split_once('*') {
        Some((c, rest)) => (parse_rational(c)?, rest.trim()),
        None if s.starts_with('q') || s.starts_with("-q") => {
            let neg = s.starts_with('-');
            let c = BigRational::from_integer(BigInt::from(if neg { -1 } else { 1 }));
            (c, s.trim_start_matches('-'))
        }
        None => return Ok((0, parse_rational(s)?)),
    };
    let inner = rest
        .strip_prefix("q^(")
        .and_then(|r| r.strip_suffix(')'))
        .or_else(|| rest.strip_prefix("q^"))
        .ok_or_else(bad)?;
    let e = parse_rational(inner)?;
    let scaled = e * BigRational::from_integer(BigInt::from(S_PER_Q));
    if !scaled.is_integer() {
        return Err(Error::Parse(format!(
            "exponent in '{}' is not a multiple of 1/{}",
            s, S_PER_Q
        )));
    }
    let e: i64 = scaled
        .to_integer()
        .try_into()
        .map_err(|_| bad())?;
    Ok((e, c))
}

fn split_terms(s: &str) -> Vec<&str> {
    // '+' never appears inside an exponent, so a plain split is enough; a leading sign
    // on a term is kept with it ("1*q^(2)+-3*q^(0)").
    s.split('+').map(str::trim).filter(|t| !t.is_empty()).collect()
}

fn parse_poly(s: &str) -> Result<LaurentPoly> {
    let s = s.trim();
    if s == "0" {
        return Ok(LaurentPoly::zero());
    }
    let mut terms = Vec::new();
    for t in split_terms(s) {
        terms.push(parse_monomial(t)?);
    }
    Ok(LaurentPoly::from_terms(terms))
}

impl FromStr for ExactScalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(body) = s.strip_prefix('(') {
            let (num, rest) = body
                .split_once(")/(")
                .ok_or_else(|| Error::Parse(format!("bad rational function '{}'", s)))?;
            let den = rest
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse(format!("bad rational function '{}'", s)))?;
            let den = parse_poly(den)?;
            if den.is_zero() {
                return Err(Error::Parse("zero denominator".into()));
            }
            return Ok(normalize(parse_poly(num)?, den));
        }
        Ok(ExactScalar::from_laurent(parse_poly(s)?))
    }
}

impl serde::Serialize for ExactScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for ExactScalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl ExactScalar {
    /// Sign of the leading numerator coefficient (used only for display-independent ordering).
    pub fn leading_sign(&self) -> i32 {
        match self.num.leading_coeff() {
            None => 0,
            Some(c) if c.is_negative() => -1,
            Some(_) => 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_zero_after_cancellation() {
        let x = ExactScalar::q_pow(1) + ExactScalar::from_int(3);
        let y = ExactScalar::one() / &(ExactScalar::q_pow(2) - ExactScalar::one());
        let z = &(&x * &y) - &(&x * &y);
        assert!(z.is_zero());
        assert_eq!(z, ExactScalar::zero());
    }

    #[test]
    fn text_round_trip() {
        let a = (ExactScalar::q_pow(3) - ExactScalar::q_pow_frac(-1, 3))
            / (ExactScalar::q_pow(1) + ExactScalar::from_int(2));
        let s = a.to_string();
        assert_eq!(s.parse::<ExactScalar>().unwrap(), a);
        assert_eq!("0".parse::<ExactScalar>().unwrap(), ExactScalar::zero());
        assert_eq!(
            "1*q^(2)+-1/2*q^(0)".parse::<ExactScalar>().unwrap(),
            ExactScalar::q_pow(2) - ExactScalar::from_rational(BigRational::new(1.into(), 2.into()))
        );
    }

    #[test]
    fn canonical_string_shape() {
        let a = ExactScalar::q_pow(2) + ExactScalar::q_pow(-2);
        assert_eq!(a.to_string(), "1*q^(2)+1*q^(-2)");
        let b = ExactScalar::one() / &a;
        assert_eq!(b.to_string(), "(1*q^(2))/(1*q^(4)+1*q^(0))");
    }

    #[test]
    fn evaluation_at_two() {
        let a = ExactScalar::q_pow(2) + ExactScalar::q_pow(-2);
        let two = BigRational::from_integer(2.into());
        assert_eq!(a.eval_at(&two).unwrap(), BigRational::new(17.into(), 4.into()));
    }

    #[test]
    fn fractional_power_rejects_rational_point() {
        let a = ExactScalar::q_pow_frac(1, 2);
        let two = BigRational::from_integer(2.into());
        assert!(matches!(a.eval_at(&two), Err(Error::UnsupportedEvaluation(_))));
        assert!(a.eval_at_one().unwrap().is_one());
    }

    #[test]
    fn pole_at_one() {
        let a = ExactScalar::one() / &(ExactScalar::q_pow(1) - ExactScalar::q_pow(-1));
        assert!(matches!(a.eval_at_one(), Err(Error::Pole(_))));
    }
}
