//! Sparse univariate Laurent polynomials with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Finite sum `sum c_e x^e` stored as `(e, c)` pairs sorted by exponent, with no zero `c`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: Vec<(i64, BigRational)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(BigRational::one(), 0)
    }

    pub fn monomial(c: BigRational, e: i64) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { terms: vec![(e, c)] }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0)
    }

    /// Builds from arbitrary (possibly repeated, unsorted) terms.
    pub fn from_terms<I: IntoIterator<Item = (i64, BigRational)>>(it: I) -> Self {
        let mut map: BTreeMap<i64, BigRational> = BTreeMap::new();
        for (e, c) in it {
            let slot = map.entry(e).or_insert_with(BigRational::zero);
            *slot += c;
        }
        LaurentPoly {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn terms(&self) -> &[(i64, BigRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Constant value if the polynomial has no non-zero exponent.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.as_slice() {
            [] => Some(BigRational::zero()),
            [(0, c)] => Some(c.clone()),
            _ => None,
        }
    }

    pub fn low(&self) -> Option<i64> {
        self.terms.first().map(|t| t.0)
    }

    pub fn high(&self) -> Option<i64> {
        self.terms.last().map(|t| t.0)
    }

    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.terms.last().map(|t| &t.1)
    }

    pub fn coeff(&self, e: i64) -> BigRational {
        match self.terms.binary_search_by_key(&e, |t| t.0) {
            Ok(k) => self.terms[k].1.clone(),
            Err(_) => BigRational::zero(),
        }
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect(),
        }
    }

    /// Substitutes `x -> x^k` (k may be negative).
    pub fn dilate(&self, k: i64) -> Self {
        let mut terms: Vec<_> = self.terms.iter().map(|(e, c)| (e * k, c.clone())).collect();
        terms.sort_by_key(|t| t.0);
        LaurentPoly { terms }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ea, ca) = &self.terms[i];
            let (eb, cb) = &other.terms[j];
            if ea < eb {
                out.push((*ea, ca.clone()));
                i += 1;
            } else if eb < ea {
                out.push((*eb, cb.clone()));
                j += 1;
            } else {
                let s = ca + cb;
                if !s.is_zero() {
                    out.push((*ea, s));
                }
                i += 1;
                j += 1;
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().cloned());
        LaurentPoly { terms: out }
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.terms.len() == 1 {
            let (e, c) = &self.terms[0];
            return other.scale(c).shift(*e);
        }
        if other.terms.len() == 1 {
            let (e, c) = &other.terms[0];
            return self.scale(c).shift(*e);
        }
        let mut map: BTreeMap<i64, BigRational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let slot = map.entry(ea + eb).or_insert_with(BigRational::zero);
                *slot += ca * cb;
            }
        }
        LaurentPoly {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Evaluates at `x = 1`.
    pub fn eval_one(&self) -> BigRational {
        self.terms.iter().fold(BigRational::zero(), |acc, (_, c)| acc + c)
    }

    /// Evaluates at a non-zero rational point.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            acc += c * pow_rat(x, *e);
        }
        acc
    }

    /// gcd of all exponents after shifting the lowest one to zero (0 for monomials).
    pub(crate) fn exponent_stride(&self) -> i64 {
        let lo = match self.low() {
            Some(l) => l,
            None => return 0,
        };
        self.terms.iter().fold(0i64, |g, (e, _)| g.gcd(&(e - lo)))
    }
}

pub(crate) fn pow_rat(x: &BigRational, e: i64) -> BigRational {
    let base = if e < 0 { x.recip() } else { x.clone() };
    num_traits::pow::pow(base, e.unsigned_abs() as usize)
}

// ---- dense integer polynomials used by gcd ----

fn trim(p: &mut Vec<BigInt>) {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

fn content(p: &[BigInt]) -> BigInt {
    p.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn primitive(mut p: Vec<BigInt>) -> Vec<BigInt> {
    trim(&mut p);
    if p.is_empty() {
        return p;
    }
    let mut g = content(&p);
    if p.last().unwrap().is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for c in p.iter_mut() {
            *c = &*c / &g;
        }
    }
    p
}

/// Pseudo-remainder of `a` by `b` (both non-zero, dense ascending).
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = b[db].clone();
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c *= &lb;
        }
        let off = dr - db;
        for (k, bc) in b.iter().enumerate() {
            r[off + k] -= &lr * bc;
        }
        trim(&mut r);
    }
    r
}

fn dense_int_gcd(a: Vec<BigInt>, b: Vec<BigInt>) -> Vec<BigInt> {
    let mut a = primitive(a);
    let mut b = primitive(b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        if b.len() == 1 {
            return vec![BigInt::one()];
        }
        let r = primitive(pseudo_rem(&a, &b));
        a = b;
        b = r;
    }
    a
}

/// Converts to a dense primitive integer polynomial in `y = x^stride`, after removing `x^low`.
fn to_dense_int(p: &LaurentPoly, stride: i64) -> Vec<BigInt> {
    let lo = p.low().unwrap_or(0);
    let deg = ((p.high().unwrap_or(0) - lo) / stride) as usize;
    let lcm = p
        .terms
        .iter()
        .fold(BigInt::one(), |l, (_, c)| l.lcm(c.denom()));
    let mut out = vec![BigInt::zero(); deg + 1];
    for (e, c) in &p.terms {
        let k = ((e - lo) / stride) as usize;
        out[k] = c.numer() * (&lcm / c.denom());
    }
    out
}

/// Monic polynomial gcd, normalized to lowest exponent zero. Inputs must be non-zero.
pub fn poly_gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    assert!(!a.is_zero() && !b.is_zero());
    if a.is_monomial() || b.is_monomial() {
        return LaurentPoly::one();
    }
    let stride = a.exponent_stride().gcd(&b.exponent_stride());
    if stride == 0 {
        return LaurentPoly::one();
    }
    let g = dense_int_gcd(to_dense_int(a, stride), to_dense_int(b, stride));
    let lc = BigRational::from_integer(g.last().unwrap().clone());
    LaurentPoly::from_terms(
        g.into_iter()
            .enumerate()
            .map(|(k, c)| (k as i64 * stride, BigRational::from_integer(c) / &lc)),
    )
}

/// Exact quotient `a / b`, or `None` if `b` does not divide `a` in the Laurent ring.
pub fn exact_div(a: &LaurentPoly, b: &LaurentPoly) -> Option<LaurentPoly> {
    assert!(!b.is_zero());
    if a.is_zero() {
        return Some(LaurentPoly::zero());
    }
    if b.is_monomial() {
        let (e, c) = &b.terms[0];
        return Some(a.scale(&c.recip()).shift(-e));
    }
    // Long division from the top, lowest-exponent normalized.
    let blo = b.low().unwrap();
    let bhi = b.high().unwrap();
    let blc = b.leading_coeff().unwrap().clone();
    let mut rem: BTreeMap<i64, BigRational> = a.terms.iter().cloned().collect();
    let mut quot = Vec::new();
    let alo = a.low().unwrap();
    loop {
        let (top, tc) = match rem.iter().next_back() {
            Some((e, c)) => (*e, c.clone()),
            None => break,
        };
        if top - (bhi - blo) < alo {
            return None;
        }
        let qe = top - bhi;
        let qc = &tc / &blc;
        for (e, c) in &b.terms {
            let slot = rem.entry(qe + e).or_insert_with(BigRational::zero);
            *slot -= &qc * c;
            if slot.is_zero() {
                rem.remove(&(qe + e));
            }
        }
        quot.push((qe, qc));
    }
    Some(LaurentPoly::from_terms(quot))
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| format!("{}*x^{}", c, e))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
