//! Multivariate Laurent polynomials in `s = q^{1/120}` and `Z_j = q^{lambda(h_j)}`, used to
//! carry operators that depend on a symbolic integral weight `lambda`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cartan::Weight;
use crate::linalg::Matrix;
use crate::qfield::{ExactScalar, LaurentPoly, S_PER_Q};

/// Sparse Laurent polynomial over the rationals. Exponent vectors are `[s, Z_1, ..., Z_r]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, BigRational>,
}

impl MPoly {
    pub fn zero(rank: usize) -> Self {
        MPoly { nvars: rank + 1, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(rank, BigRational::one(), vec![0; rank + 1])
    }

    pub fn monomial(rank: usize, c: BigRational, exps: Vec<i64>) -> Self {
        assert_eq!(exps.len(), rank + 1);
        let mut p = Self::zero(rank);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// `c q^k Z^z` where `z` is indexed by the weight coordinates.
    pub fn q_monomial(rank: usize, c: i64, q_exp: i64, z: &[i64]) -> Self {
        let mut e = vec![q_exp * S_PER_Q];
        e.extend_from_slice(z);
        Self::monomial(rank, BigRational::from_integer(BigInt::from(c)), e)
    }

    /// Embeds a Laurent polynomial in `s`.
    pub fn from_laurent(rank: usize, p: &LaurentPoly) -> Self {
        let mut out = Self::zero(rank);
        for (e, c) in p.terms() {
            let mut ex = vec![0; rank + 1];
            ex[0] = *e;
            out.terms.insert(ex, c.clone());
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.nvars - 1
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            let v = out.terms.entry(e.clone()).or_insert_with(BigRational::zero);
            *v += c;
            if v.is_zero() {
                out.terms.remove(e);
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out: BTreeMap<Vec<i64>, BigRational> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let v = out.entry(e).or_insert_with(BigRational::zero);
                *v += c1 * c2;
            }
        }
        out.retain(|_, c| !c.is_zero());
        MPoly { nvars: self.nvars, terms: out }
    }

    /// Substitutes `lambda -> M lambda`, where `(M lambda)_j = sum_k m[j][k] lambda_k`.
    pub fn substitute_linear(&self, m: &[Vec<i64>]) -> Self {
        let r = self.rank();
        let mut out = Self::zero(r);
        for (e, c) in &self.terms {
            let mut ne = vec![e[0]];
            for k in 0..r {
                ne.push((0..r).map(|j| e[1 + j] * m[j][k]).sum());
            }
            out = out.add(&MPoly::monomial(r, c.clone(), ne));
        }
        out
    }

    /// Value at an integral weight: `Z_j = q^{lambda_j}`.
    pub fn evaluate(&self, lambda: &Weight) -> ExactScalar {
        let mut acc = LaurentPoly::zero();
        for (e, c) in &self.terms {
            let s_exp = e[0] + (0..self.rank()).map(|j| e[1 + j] * lambda.get(j) * S_PER_Q).sum::<i64>();
            acc = acc.add(&LaurentPoly::monomial(c.clone(), s_exp));
        }
        ExactScalar::from_laurent(acc)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mut s = format!("{}*q^({}/{})", c, e[0], S_PER_Q);
                for (j, z) in e[1..].iter().enumerate() {
                    if *z != 0 {
                        s.push_str(&format!("*Z{}^({})", j + 1, z));
                    }
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// Operator on `V[0]` whose entries are `numerators[a][b] / denominator`.
#[derive(Clone, Debug)]
pub struct DynOp {
    pub numerators: Vec<Vec<MPoly>>,
    pub denominator: MPoly,
}

impl DynOp {
    pub fn identity(rank: usize, n: usize) -> Self {
        let numerators = (0..n)
            .map(|a| (0..n).map(|b| if a == b { MPoly::one(rank) } else { MPoly::zero(rank) }).collect())
            .collect();
        DynOp { numerators, denominator: MPoly::one(rank) }
    }

    pub fn size(&self) -> usize {
        self.numerators.len()
    }

    pub fn rank(&self) -> usize {
        self.denominator.rank()
    }

    pub fn compose(&self, o: &Self) -> Self {
        let n = self.size();
        let r = self.rank();
        let mut numerators = vec![vec![MPoly::zero(r); n]; n];
        for a in 0..n {
            for b in 0..n {
                let mut acc = MPoly::zero(r);
                for k in 0..n {
                    if !self.numerators[a][k].is_zero() && !o.numerators[k][b].is_zero() {
                        acc = acc.add(&self.numerators[a][k].mul(&o.numerators[k][b]));
                    }
                }
                numerators[a][b] = acc;
            }
        }
        DynOp { numerators, denominator: self.denominator.mul(&o.denominator) }
    }

    pub fn substitute_linear(&self, m: &[Vec<i64>]) -> Self {
        DynOp {
            numerators: self
                .numerators
                .iter()
                .map(|row| row.iter().map(|p| p.substitute_linear(m)).collect())
                .collect(),
            denominator: self.denominator.substitute_linear(m),
        }
    }

    /// Equality as matrices of rational functions (cross-multiplied).
    pub fn equals(&self, o: &Self) -> bool {
        let n = self.size();
        if n != o.size() {
            return false;
        }
        for a in 0..n {
            for b in 0..n {
                let l = self.numerators[a][b].mul(&o.denominator);
                let r = o.numerators[a][b].mul(&self.denominator);
                if l != r {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_identity(&self) -> bool {
        self.equals(&DynOp::identity(self.rank(), self.size()))
    }

    /// Specializes at an integral weight; `None` on a pole.
    pub fn evaluate(&self, lambda: &Weight) -> Option<Matrix<ExactScalar>> {
        let d = self.denominator.evaluate(lambda).inv()?;
        let n = self.size();
        let mut m = Matrix::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                m.set(a, b, &self.numerators[a][b].evaluate(lambda) * &d);
            }
        }
        Some(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substitution_and_evaluation() {
        // Z1^2 Z2^-1 q
        let p = MPoly::q_monomial(2, 3, 1, &[2, -1]);
        let lam = Weight(vec![1, 4]);
        assert_eq!(p.evaluate(&lam), &ExactScalar::from_int(3) * &ExactScalar::q_pow(1 + 2 - 4));
        // lambda -> (lambda_2, lambda_1)
        let swap = vec![vec![0, 1], vec![1, 0]];
        let ps = p.substitute_linear(&swap);
        assert_eq!(ps.evaluate(&lam), p.evaluate(&Weight(vec![4, 1])));
    }

    #[test]
    fn operator_algebra() {
        let r = 1;
        let x = MPoly::q_monomial(r, 1, 0, &[1]);
        let one = MPoly::one(r);
        let op = DynOp { numerators: vec![vec![x.add(&one)]], denominator: x.sub(&one) };
        let inv = DynOp { numerators: vec![vec![x.sub(&one)]], denominator: x.add(&one) };
        assert!(op.compose(&inv).is_identity());
        assert!(!op.is_identity());
        assert!(op.evaluate(&Weight(vec![0])).is_none());
    }
}
