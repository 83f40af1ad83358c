//! The three conditions that cut out the image of the restriction map.

use serde::Serialize;

use crate::cartan::{Weight, WeylElement};
use crate::dynamical::{DynamicalWeyl, RankOneBlocks};
use crate::error::Result;
use crate::modules::WeightModule;
use crate::qfield::ExactScalar;
use crate::torus::TorusFunction;

#[derive(Clone, Debug, Serialize)]
pub struct Cond1Report {
    pub pass: bool,
    /// Weights whose coefficient has a component outside `V[0]`.
    pub offending_weights: Vec<Weight>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Cond2Entry {
    /// Simple reflection index, starting at 1.
    pub reflection: usize,
    pub pass: bool,
    /// Rank-one block `L_{2m}` where the identity fails.
    pub block: Option<i64>,
    /// Number of monomials in the symbolic residual.
    pub residual_terms: usize,
    /// An integral weight where `f(q^{2 s lambda})` and `A_s(lambda) f(q^{2 lambda})` differ.
    pub witness_lambda: Option<Weight>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Cond2Report {
    pub pass: bool,
    pub entries: Vec<Cond2Entry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Cond3Entry {
    pub node: usize,
    pub n: usize,
    pub pass: bool,
    pub coset: Option<Weight>,
    pub factor: Option<usize>,
    pub remainder: Option<Vec<ExactScalar>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Cond3Report {
    pub pass: bool,
    pub entries: Vec<Cond3Entry>,
}

/// Machine-readable outcome of [`check_conditions`].
#[derive(Clone, Debug, Serialize)]
pub struct ConditionReport {
    pub pass: bool,
    pub cond1_zero_weight: Cond1Report,
    pub cond2_dynamical_invariance: Cond2Report,
    pub cond3_divisibility: Cond3Report,
}

impl ConditionReport {
    /// The first failing condition (1, 2 or 3).
    pub fn first_failure(&self) -> Option<u8> {
        if !self.cond1_zero_weight.pass {
            Some(1)
        } else if !self.cond2_dynamical_invariance.pass {
            Some(2)
        } else if !self.cond3_divisibility.pass {
            Some(3)
        } else {
            None
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// `V[0]`-component of `f` in local coordinates.
pub(crate) fn zero_part(f: &TorusFunction, v: &WeightModule) -> TorusFunction {
    let r = v.weight_range(&Weight::zero(v.rank()));
    f.map_coefficients(r.len(), |c| c[r.clone()].to_vec())
}

/// `(a e^{alpha_i} + b) g`.
fn mul_linear(g: &TorusFunction, i: usize, a: &ExactScalar, b: &ExactScalar) -> TorusFunction {
    let alpha = g.datum.simple_root(i);
    g.shift(&alpha, a).add(&g.scale(b))
}

/// Residual of the reflection identity on block `m` of node `i`, for `g` with values in `V[0]`.
///
/// With `Y = q_i^{lambda(h_i)}`, the block scalar of the unshifted operator is
/// `(-1)^m prod_j (Y^2 q_i^{-j} - q_i^j) / (Y^2 q_i^j - q_i^{-j})`, and `Y^2` evaluates like
/// `e^{alpha_i}`. The identity therefore becomes a polynomial identity in the torus ring.
pub(crate) fn reflection_residual(
    g: &TorusFunction,
    blocks: &RankOneBlocks,
    m: i64,
    qi: i64,
) -> TorusFunction {
    let i = blocks.node;
    let p = &blocks.projections[&m];
    let gm = g.map_coefficients(g.dim(), |c| p.mul_vec(c));
    let mut lhs = gm.weyl_pushforward(&WeylElement::simple(i));
    let mut rhs = gm;
    for j in 1..=m {
        lhs = mul_linear(&lhs, i, &ExactScalar::q_pow(j * qi), &-ExactScalar::q_pow(-j * qi));
        rhs = mul_linear(&rhs, i, &ExactScalar::q_pow(-j * qi), &-ExactScalar::q_pow(j * qi));
    }
    if m % 2 == 1 {
        rhs = rhs.scale(&-ExactScalar::one());
    }
    lhs.sub(&rhs)
}

fn pointwise_witness(g: &TorusFunction, dw: &DynamicalWeyl, i: usize) -> Option<Weight> {
    let r = g.datum.rank;
    let s = WeylElement::simple(i);
    for t in 0..40i64 {
        let lam = Weight((0..r).map(|k| 3 + t + 2 * k as i64).collect());
        let Ok(a) = dw.unshifted(&s, &lam) else { continue };
        let lhs = g.evaluate_at_weight(&s.act(&g.datum, &lam));
        let rhs = a.mul_vec(&g.evaluate_at_weight(&lam));
        if lhs != rhs {
            return Some(lam);
        }
    }
    None
}

/// Checks conditions 1 to 3 for `f` with values in `v`.
///
/// Condition 2 is checked for simple reflections only; the cocycle identity extends it to
/// all of `W`. Condition 3 is checked for `n` below the nilpotency degree of `E_i`, since
/// `E_i^n f` vanishes beyond it.
pub fn check_conditions(f: &TorusFunction, v: &WeightModule) -> Result<ConditionReport> {
    let dw = DynamicalWeyl::new(v)?;
    check_conditions_with(f, v, &dw)
}

pub fn check_conditions_with(f: &TorusFunction, v: &WeightModule, dw: &DynamicalWeyl) -> Result<ConditionReport> {
    let off = f.off_zero_weight(v);
    let cond1 = Cond1Report { pass: off.is_zero(), offending_weights: off.support() };

    let g = zero_part(f, v);
    let mut entries = Vec::new();
    for i in 0..v.rank() {
        let blocks = &dw.blocks[i];
        let mut entry = Cond2Entry {
            reflection: i + 1,
            pass: true,
            block: None,
            residual_terms: 0,
            witness_lambda: None,
        };
        for &m in blocks.projections.keys() {
            let res = reflection_residual(&g, blocks, m, v.qi_power(i));
            if !res.is_zero() {
                entry.pass = false;
                entry.block = Some(m);
                entry.residual_terms = res.terms().len();
                entry.witness_lambda = pointwise_witness(&g, dw, i);
                break;
            }
        }
        entries.push(entry);
    }
    let cond2 = Cond2Report { pass: entries.iter().all(|e| e.pass), entries };

    let mut entries = Vec::new();
    for i in 0..v.rank() {
        let nil = v.e_nilpotency(i);
        for n in 1..nil {
            let en = f.e_action(v, i, n);
            let entry = match en.divide_by_qstring(i, n) {
                Ok(_) => Cond3Entry { node: i + 1, n, pass: true, coset: None, factor: None, remainder: None },
                Err(nd) => Cond3Entry {
                    node: i + 1,
                    n,
                    pass: false,
                    coset: Some(nd.coset),
                    factor: Some(nd.k),
                    remainder: Some(nd.remainder),
                },
            };
            entries.push(entry);
        }
    }
    let cond3 = Cond3Report { pass: entries.iter().all(|e| e.pass), entries };

    Ok(ConditionReport {
        pass: cond1.pass && cond2.pass && cond3.pass,
        cond1_zero_weight: cond1,
        cond2_dynamical_invariance: cond2,
        cond3_divisibility: cond3,
    })
}

/// Linear constraints of conditions 2 and (optionally) 3 on functions with values in `V[0]`
/// supported on `support`.
///
/// Unknowns are indexed by `(weight, coordinate of V[0])` in the order returned; the result
/// is a basis of the solution space as torus functions with values in `V`.
pub fn solution_space(
    v: &WeightModule,
    dw: &DynamicalWeyl,
    support: &[Weight],
    with_cond3: bool,
) -> Vec<TorusFunction> {
    use std::collections::BTreeMap;
    let z = Weight::zero(v.rank());
    let zr = v.weight_range(&z);
    let d0 = zr.len();
    let mut unknowns: Vec<TorusFunction> = Vec::new();
    for nu in support {
        for k in 0..d0 {
            let mut c = vec![ExactScalar::zero(); v.dim()];
            c[zr.start + k] = ExactScalar::one();
            let mut f = TorusFunction::zero_for(v);
            f.add_term(nu.clone(), &c);
            unknowns.push(f);
        }
    }
    // row key -> column -> value
    let mut rows: BTreeMap<String, Vec<(usize, ExactScalar)>> = BTreeMap::new();
    let mut push = |key: String, col: usize, x: &ExactScalar| {
        if !x.is_zero() {
            rows.entry(key).or_default().push((col, x.clone()));
        }
    };
    for (col, f) in unknowns.iter().enumerate() {
        let g = zero_part(f, v);
        for i in 0..v.rank() {
            for &m in dw.blocks[i].projections.keys() {
                let res = reflection_residual(&g, &dw.blocks[i], m, v.qi_power(i));
                for (nu, c) in res.terms() {
                    for (k, x) in c.iter().enumerate() {
                        push(format!("2|{}|{}|{:?}|{}", i, m, nu.coords(), k), col, x);
                    }
                }
            }
            if with_cond3 {
                for n in 1..v.e_nilpotency(i) {
                    let en = f.e_action(v, i, n);
                    for (rep, kk, c) in en.qstring_obstructions(i, n) {
                        for (k, x) in c.iter().enumerate() {
                            push(format!("3|{}|{}|{:?}|{}|{}", i, n, rep.coords(), kk, k), col, x);
                        }
                    }
                }
            }
        }
    }
    let ncols = unknowns.len();
    let mut mat: crate::linalg::Matrix<ExactScalar> = crate::linalg::Matrix::zeros(rows.len().max(1), ncols);
    for (r, entries) in rows.values().enumerate() {
        for (c, x) in entries {
            let cur = mat.get(r, *c).clone();
            mat.set(r, *c, &cur + x);
        }
    }
    mat.kernel()
        .into_iter()
        .map(|kv| {
            let mut f = TorusFunction::zero_for(v);
            for (coef, u) in kv.iter().zip(&unknowns) {
                if !coef.is_zero() {
                    f = f.add(&u.scale(coef));
                }
            }
            f
        })
        .collect()
}
