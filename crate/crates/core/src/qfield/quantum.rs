//! Quantum integers, factorials and binomials.

use num_rational::BigRational;

use super::laurent::LaurentPoly;
use super::scalar::{ExactScalar, S_PER_Q};
use crate::error::{Error, Result};

/// `[m]_{q^d} = (q^{dm} - q^{-dm}) / (q^d - q^{-d})`, expanded as a Laurent polynomial.
pub fn quantum_integer(m: i64, d: i64) -> ExactScalar {
    assert!(d > 0, "quantum parameter power must be positive");
    if m == 0 {
        return ExactScalar::zero();
    }
    let sign = if m < 0 { -1 } else { 1 };
    let n = m.abs();
    let c = BigRational::from_integer(sign.into());
    let terms = (0..n).map(|k| ((n - 1 - 2 * k) * d * S_PER_Q, c.clone()));
    ExactScalar::from_laurent(LaurentPoly::from_terms(terms))
}

/// `[m]_{q^d}! = [m][m-1]...[1]`.
pub fn quantum_factorial(m: i64, d: i64) -> Result<ExactScalar> {
    if m < 0 {
        return Err(Error::Domain(format!("quantum factorial of negative {}", m)));
    }
    Ok((1..=m).fold(ExactScalar::one(), |acc, k| &acc * &quantum_integer(k, d)))
}

/// Gaussian binomial `[n choose k]_{q^d}`; zero outside `0 <= k <= n`.
pub fn quantum_binomial(n: i64, k: i64, d: i64) -> ExactScalar {
    if k < 0 || k > n || n < 0 {
        return ExactScalar::zero();
    }
    let num = quantum_factorial(n, d).unwrap();
    let den = &quantum_factorial(k, d).unwrap() * &quantum_factorial(n - k, d).unwrap();
    &num / &den
}

/// `q^{d k}` as a scalar.
pub fn q_power(k: i64, d: i64) -> ExactScalar {
    ExactScalar::q_pow(k * d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_quantum_integers() {
        let q = |k| ExactScalar::q_pow(k);
        assert_eq!(quantum_integer(3, 1), q(2) + ExactScalar::one() + q(-2));
        assert!(quantum_integer(0, 2).is_zero());
        assert_eq!(quantum_integer(1, 3), ExactScalar::one());
        assert_eq!(quantum_integer(-4, 1), -quantum_integer(4, 1));
        assert_eq!(quantum_integer(4, 1), q(3) + q(1) + q(-1) + q(-3));
    }

    #[test]
    fn ratio_four_over_two() {
        let r = &quantum_integer(4, 1) / &quantum_integer(2, 1);
        assert_eq!(r, ExactScalar::q_pow(2) + ExactScalar::q_pow(-2));
        assert_eq!(r.eval_at_one().unwrap(), BigRational::from_integer(2.into()));
    }

    #[test]
    fn factorials() {
        assert!(quantum_factorial(0, 1).unwrap().is_one());
        assert_eq!(
            quantum_factorial(2, 1).unwrap(),
            ExactScalar::q_pow(1) + ExactScalar::q_pow(-1)
        );
        let direct = (ExactScalar::q_pow(1) + ExactScalar::q_pow(-1))
            * (ExactScalar::q_pow(2) + ExactScalar::one() + ExactScalar::q_pow(-2));
        assert_eq!(quantum_factorial(3, 1).unwrap(), direct);
        assert!(quantum_factorial(-1, 1).is_err());
    }

    #[test]
    fn binomial_is_laurent() {
        let b = quantum_binomial(3, 1, 2);
        assert!(b.is_laurent());
        assert_eq!(b, quantum_integer(3, 2));
    }
}
