//! Constructive inverse of the restriction map: peel off trace functions from the top.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::cartan::{dominant_representative, Weight};
use crate::dynamical::DynamicalWeyl;
use crate::error::{Error, Result};
use crate::hull;
use crate::intertwiner::HomSpace;
use crate::linalg::vec_is_zero;
use crate::modules::WeightModule;
use crate::qfield::ExactScalar;
use crate::torus::TorusFunction;

use super::conditions::check_conditions_with;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionTerm {
    pub mu: Weight,
    /// Expectation value, in local coordinates of `V[0]`.
    pub v: Vec<ExactScalar>,
}

/// `f = sum_k Psi^{v_k}_{mu_k}`, terms sorted by `mu`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub terms: Vec<DecompositionTerm>,
}

impl Decomposition {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("decomposition serializes")
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

struct CachedSpace {
    /// Position in `V[0]` of the pivot of each echelon basis vector.
    pivots: Vec<usize>,
    traces: Vec<TorusFunction>,
    hom: HomSpace,
}

/// Traces of basis intertwiners, computed once per highest weight.
///
/// The trace is linear in the expectation value, and the expectation basis is in reduced
/// echelon form, so the coordinates of an admissible `v` are read off at the pivots.
pub struct TraceCache {
    v: WeightModule,
    spaces: HashMap<Weight, CachedSpace>,
}

impl TraceCache {
    pub fn new(v: &WeightModule) -> Self {
        TraceCache { v: v.clone(), spaces: HashMap::new() }
    }

    pub fn module(&self) -> &WeightModule {
        &self.v
    }

    fn space(&mut self, mu: &Weight) -> Result<&CachedSpace> {
        if !self.spaces.contains_key(mu) {
            let hom = HomSpace::new(mu, &self.v)?;
            let basis = hom.expectation_basis()?;
            let mut pivots = Vec::new();
            let mut traces = Vec::new();
            for phi in &basis {
                let e = hom.expectation_value(phi);
                pivots.push(e.iter().position(|x| !x.is_zero()).expect("basis vectors are nonzero"));
                traces.push(hom.trace(phi)?);
            }
            self.spaces.insert(mu.clone(), CachedSpace { pivots, traces, hom });
        }
        Ok(&self.spaces[mu])
    }

    /// `Psi^{v}_{mu}` for `v` in local coordinates of `V[0]`.
    pub fn trace(&mut self, mu: &Weight, v0: &[ExactScalar]) -> Result<TorusFunction> {
        let vm = self.v.clone();
        let sp = self.space(mu)?;
        if !sp.hom.admissible(v0) {
            return Err(Error::NoIntertwiner { mu: mu.clone() });
        }
        let mut f = TorusFunction::zero_for(&vm);
        for (p, t) in sp.pivots.iter().zip(&sp.traces) {
            if !v0[*p].is_zero() {
                f = f.add(&t.scale(&v0[*p]));
            }
        }
        Ok(f)
    }

    /// Number of highest weights cached so far.
    pub fn len(&self) -> usize {
        self.spaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spaces.is_empty()
    }
}

/// Sum of the traces listed in `d`.
pub fn reconstruct(d: &Decomposition, cache: &mut TraceCache) -> Result<TorusFunction> {
    let mut f = TorusFunction::zero_for(cache.module());
    for t in &d.terms {
        f = f.add(&cache.trace(&t.mu, &t.v)?);
    }
    Ok(f)
}

/// The dominant weight extracted next: among the extreme points of the weight diagram, the
/// largest dominant representative in lexicographic order.
fn top_weight(f: &TorusFunction, diagram: &[Weight]) -> Result<Weight> {
    let ext = hull::extreme_points(diagram);
    let mut best: Option<Weight> = None;
    for p in ext {
        let (mu, _) = dominant_representative(&f.datum, &p);
        if best.as_ref().map_or(true, |b| mu > *b) {
            best = Some(mu);
        }
    }
    best.ok_or_else(|| Error::TheoremViolation("empty weight diagram for a nonzero function".into()))
}

/// Writes `f` as a sum of trace functions with pairwise distinct highest weights.
///
/// Fails with [`Error::ConditionFailed`] when `f` violates one of the conditions and with
/// [`Error::TheoremViolation`] if the induction breaks down on an input that passes them.
pub fn decompose(f: &TorusFunction, v: &WeightModule) -> Result<Decomposition> {
    let mut cache = TraceCache::new(v);
    decompose_with(f, &mut cache)
}

pub fn decompose_with(f: &TorusFunction, cache: &mut TraceCache) -> Result<Decomposition> {
    let v = cache.module().clone();
    let dw = DynamicalWeyl::new(&v)?;
    let report = check_conditions_with(f, &v, &dw)?;
    if let Some(c) = report.first_failure() {
        let detail = match c {
            1 => format!("components outside V[0] at {:?}", report.cond1_zero_weight.offending_weights),
            2 => {
                let e = report.cond2_dynamical_invariance.entries.iter().find(|e| !e.pass).unwrap();
                format!("reflection s{} fails on block m={:?}", e.reflection, e.block)
            }
            _ => {
                let e = report.cond3_divisibility.entries.iter().find(|e| !e.pass).unwrap();
                format!("E_{}^{} f is not divisible (coset {:?}, factor k={:?})", e.node, e.n, e.coset, e.factor)
            }
        };
        return Err(Error::ConditionFailed { condition: c, detail });
    }

    let z = Weight::zero(v.rank());
    let mut rest = f.clone();
    let mut diagram = rest.weight_diagram();
    let mut terms: Vec<DecompositionTerm> = Vec::new();
    while !rest.is_zero() {
        let mu = top_weight(&rest, &diagram)?;
        let coeff: Vec<ExactScalar> = match rest.coefficient(&mu) {
            Some(c) => v.local(&z, c),
            None => {
                return Err(Error::TheoremViolation(format!(
                    "dominant extreme weight {:?} is missing from the support",
                    mu
                )))
            }
        };
        let t = cache.trace(&mu, &coeff).map_err(|e| match e {
            Error::NoIntertwiner { mu } => Error::TheoremViolation(format!(
                "top coefficient at {:?} is not annihilated by the required powers of E_i",
                mu
            )),
            other => other,
        })?;
        rest = rest.sub(&t);
        let next = rest.weight_diagram();
        if next.len() >= diagram.len() || next.contains(&mu) {
            return Err(Error::TheoremViolation(format!("weight diagram did not shrink after removing {:?}", mu)));
        }
        diagram = next;
        if let Some(prev) = terms.iter_mut().find(|t| t.mu == mu) {
            for (a, b) in prev.v.iter_mut().zip(&coeff) {
                *a += b;
            }
        } else {
            terms.push(DecompositionTerm { mu, v: coeff });
        }
    }
    terms.retain(|t| !vec_is_zero(&t.v));
    terms.sort_by(|a, b| a.mu.cmp(&b.mu));
    let d = Decomposition { terms };
    if reconstruct(&d, cache)?.terms() != f.terms() {
        return Err(Error::TheoremViolation("decomposition does not reproduce the input".into()));
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::CartanDatum;
    use crate::modules::irreducible;

    #[test]
    fn round_trip_rank_one() {
        let a1 = CartanDatum::rank_one();
        let v = irreducible(&a1, &Weight(vec![2])).unwrap();
        let mut cache = TraceCache::new(&v);
        let one = vec![ExactScalar::one()];
        let f = cache
            .trace(&Weight(vec![5]), &one)
            .unwrap()
            .add(&cache.trace(&Weight(vec![2]), &one).unwrap().scale(&ExactScalar::q_pow(3)));
        let d = decompose_with(&f, &mut cache).unwrap();
        assert_eq!(d.terms.len(), 2);
        assert_eq!(d.terms[0].mu, Weight(vec![2]));
        assert_eq!(d.terms[0].v, vec![ExactScalar::q_pow(3)]);
        assert_eq!(d.terms[1].mu, Weight(vec![5]));
        let back = Decomposition::parse(&d.to_json_string()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn rejects_invalid_input() {
        let a1 = CartanDatum::rank_one();
        let v = irreducible(&a1, &Weight(vec![2])).unwrap();
        let mut f = TorusFunction::zero_for(&v);
        let z = v.weight_range(&Weight(vec![0])).start;
        let mut c = vec![ExactScalar::zero(); 3];
        c[z] = ExactScalar::one();
        f.add_term(Weight(vec![3]), &c);
        assert!(matches!(decompose(&f, &v), Err(Error::ConditionFailed { condition: 2, .. })));
    }
}
