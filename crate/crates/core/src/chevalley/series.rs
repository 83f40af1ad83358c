//! Rank-one check of the Weyl-type character formula for trace functions: the trace over
//! `L_mu` equals the alternating sum of traces over Verma modules `M_mu` and `M_{s.mu}`,
//! the second one twisted by the dynamical Weyl operator.

use serde::Serialize;

use crate::cartan::{CartanDatum, Weight};
use crate::dynamical::a_rank1_scalar;
use crate::error::{Error, Result};
use crate::intertwiner::HomSpace;
use crate::modules::{irreducible, verma_truncated, WeightModule};
use crate::qfield::ExactScalar;
use crate::torus::TorusFunction;

#[derive(Clone, Debug, Serialize)]
pub struct SeriesReport {
    pub mu: i64,
    pub m: i64,
    pub depth: usize,
    /// Number of weights in the comparison window carrying a nonzero term on either side.
    pub compared: usize,
    /// Weights (as `lambda(h)`) where the two sides differ.
    pub residual_support: Vec<i64>,
    /// The scalar `A_s(mu)` used to twist the second Verma trace.
    pub twist: ExactScalar,
}

impl SeriesReport {
    pub fn is_zero(&self) -> bool {
        self.residual_support.is_empty()
    }
}

fn window(f: &TorusFunction, lowest: i64) -> TorusFunction {
    let mut out = TorusFunction::zero(&f.datum, f.qpower, f.dim());
    for (nu, c) in f.terms() {
        if nu.get(0) >= lowest {
            out.add_term(nu.clone(), c);
        }
    }
    out
}

/// Trace of the intertwiner `M_top -> M_top (x) V` with expectation `v0`, over the Verma
/// module truncated at `levels`.
fn verma_trace(v: &WeightModule, top: i64, levels: usize, v0: &[ExactScalar]) -> Result<TorusFunction> {
    let a1 = CartanDatum::rank_one();
    let verma = verma_truncated(&a1, &Weight(vec![top]), levels)?;
    let h = HomSpace::with_source(verma, v)?;
    if h.dimension() != 1 {
        return Err(Error::Genericity(format!(
            "Verma intertwiner space at {} has dimension {}",
            top,
            h.dimension()
        )));
    }
    let e = h.expectation_of(&h.singular_basis()[0]);
    if e.iter().all(|x| x.is_zero()) {
        return Err(Error::Genericity(format!("Verma intertwiner at {} has zero expectation", top)));
    }
    let phi = h.from_expectation(v0)?;
    h.trace(&phi)
}

/// Compares `Psi^v_mu` with `Psi^v(M_mu) - Psi^{A_s(mu) v}(M_{-mu-2})` for `V = L_{2m}`,
/// keeping weights within `depth` steps of `e^{-alpha}` below `mu`.
///
/// Returns a genericity error when one of the Verma solves is not unique.
pub fn verma_trace_series(m: i64, mu: i64, depth: usize) -> Result<SeriesReport> {
    if m < 0 || mu < 0 {
        return Err(Error::Domain("m and mu must be nonnegative".into()));
    }
    let a1 = CartanDatum::rank_one();
    let v = irreducible(&a1, &Weight(vec![2 * m]))?;
    let v0 = vec![ExactScalar::one()];
    let lowest = mu - 2 * depth as i64;
    let mu_w = Weight(vec![mu]);

    let hom = HomSpace::new(&mu_w, &v)?;
    let lhs = window(&hom.trace(&hom.from_expectation(&v0)?)?, lowest);

    let need = m as usize;
    let mut rhs = window(&verma_trace(&v, mu, depth.max(need), &v0)?, lowest);
    let twist = a_rank1_scalar(m, mu, 1)?;
    let reflected_top = -mu - 2;
    if reflected_top >= lowest {
        let levels = ((reflected_top - lowest) / 2) as usize;
        let tv = vec![twist.clone()];
        let second = window(&verma_trace(&v, reflected_top, levels.max(need), &tv)?, lowest);
        rhs = rhs.sub(&second);
    }

    let mut compared: Vec<i64> = lhs.support().iter().chain(rhs.support().iter()).map(|w| w.get(0)).collect();
    compared.sort_unstable();
    compared.dedup();
    let residual = lhs.sub(&rhs);
    Ok(SeriesReport {
        mu,
        m,
        depth,
        compared: compared.len(),
        residual_support: residual.support().iter().map(|w| w.get(0)).collect(),
        twist,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn character_formula_for_trivial_v() {
        for mu in 0..4 {
            assert!(verma_trace_series(0, mu, 10).unwrap().is_zero());
        }
    }

    #[test]
    fn adjoint_example_and_depth_zero() {
        let r = verma_trace_series(1, 4, 10).unwrap();
        assert!(r.is_zero(), "{:?}", r);
        assert!(r.compared >= 5);
        assert!(verma_trace_series(1, 4, 0).unwrap().is_zero());
    }
}
