//! Finite sums `sum_nu e^nu v_nu` with coefficients in a module `V`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::cartan::{CartanDatum, Weight, WeylElement};
use crate::error::{Error, Result};
use crate::hull;
use crate::linalg::vec_is_zero;
use crate::modules::{irreducible, restrict_sl2_with_map, Vector, WeightModule};
use crate::qfield::{ExactScalar, S_PER_Q};

/// Element of `O(H) (x) V`.
///
/// Coefficients are global coordinate vectors of `V`. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusFunction {
    pub datum: CartanDatum,
    /// The quantum parameter is `q^qpower` (not 1 only for rank-one restrictions).
    pub qpower: i64,
    /// Highest weight of `V` when `V` is irreducible; only used for serialization.
    pub module_highest: Option<Weight>,
    dim: usize,
    terms: BTreeMap<Weight, Vector>,
}

/// `E_i^n f` (or `f`) is not divisible by the requested `q`-string.
#[derive(Clone, Debug, PartialEq)]
pub struct NotDivisible {
    /// Representative of the `Z alpha_i`-coset where division failed; its `i`-th coordinate is 0 or 1.
    pub coset: Weight,
    /// The factor `1 - q_i^{2k} e^{alpha_i}` that left a remainder.
    pub k: usize,
    /// Nonzero remainder vector (the would-be quotient coefficient past the top of the coset).
    pub remainder: Vector,
}

impl TorusFunction {
    pub fn zero(datum: &CartanDatum, qpower: i64, dim: usize) -> Self {
        TorusFunction {
            datum: datum.clone(),
            qpower,
            module_highest: None,
            dim,
            terms: BTreeMap::new(),
        }
    }

    /// Zero function with values in `v`.
    pub fn zero_for(v: &WeightModule) -> Self {
        let mut f = Self::zero(&v.datum, v.qpower, v.dim());
        f.module_highest = v.highest_weight.as_ref().map(|(w, _)| w.clone());
        f
    }

    pub fn with_module_highest(mut self, hw: Option<Weight>) -> Self {
        self.module_highest = hw;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<Weight, Vector> {
        &self.terms
    }

    pub fn support(&self) -> Vec<Weight> {
        self.terms.keys().cloned().collect()
    }

    pub fn coefficient(&self, nu: &Weight) -> Option<&Vector> {
        self.terms.get(nu)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `e^nu v` in place.
    pub fn add_term(&mut self, nu: Weight, v: &[ExactScalar]) {
        assert_eq!(v.len(), self.dim, "coefficient has wrong length");
        if vec_is_zero(v) {
            return;
        }
        match self.terms.get_mut(&nu) {
            Some(cur) => {
                for (a, b) in cur.iter_mut().zip(v) {
                    *a += b;
                }
                if vec_is_zero(cur) {
                    self.terms.remove(&nu);
                }
            }
            None => {
                self.terms.insert(nu, v.to_vec());
            }
        }
    }

    fn same_shape(&self, o: &Self) {
        assert!(
            self.datum == o.datum && self.dim == o.dim && self.qpower == o.qpower,
            "torus functions over different data"
        );
    }

    pub fn add(&self, o: &Self) -> Self {
        self.same_shape(o);
        let mut out = self.clone();
        for (nu, v) in &o.terms {
            out.add_term(nu.clone(), v);
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-ExactScalar::one()))
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        let mut out = Self { terms: BTreeMap::new(), ..self.clone() };
        if c.is_zero() {
            return out;
        }
        for (nu, v) in &self.terms {
            out.terms.insert(nu.clone(), v.iter().map(|x| x * c).collect());
        }
        out
    }

    /// `c e^mu f`.
    pub fn shift(&self, mu: &Weight, c: &ExactScalar) -> Self {
        let mut out = Self { terms: BTreeMap::new(), ..self.clone() };
        if c.is_zero() {
            return out;
        }
        for (nu, v) in &self.terms {
            out.terms.insert(nu + mu, v.iter().map(|x| x * c).collect());
        }
        out
    }

    /// Applies a linear map to every coefficient.
    pub fn map_coefficients(&self, dim: usize, f: impl Fn(&[ExactScalar]) -> Vector) -> Self {
        let mut out = Self { terms: BTreeMap::new(), dim, ..self.clone() };
        for (nu, v) in &self.terms {
            out.add_term(nu.clone(), &f(v));
        }
        out
    }

    /// `(1 (x) E_i^n) f`.
    pub fn e_action(&self, v: &WeightModule, i: usize, n: usize) -> Self {
        assert_eq!(v.dim(), self.dim);
        self.map_coefficients(self.dim, |c| {
            let mut c = c.to_vec();
            for _ in 0..n {
                c = v.apply_e(i, &c);
            }
            c
        })
    }

    fn qi(&self, i: usize) -> i64 {
        self.qpower * self.datum.d(i)
    }

    /// Splits the support into `Z alpha_i`-cosets: representative -> (k -> coefficient at rep + k alpha_i).
    fn cosets(&self, i: usize) -> BTreeMap<Weight, BTreeMap<i64, &Vector>> {
        let alpha = self.datum.simple_root(i);
        let mut out: BTreeMap<Weight, BTreeMap<i64, &Vector>> = BTreeMap::new();
        for (nu, v) in &self.terms {
            let k = nu.get(i).div_euclid(2);
            let rep = nu - &alpha.scale(k);
            out.entry(rep).or_default().insert(k, v);
        }
        out
    }

    /// `(1 - c e^{alpha_i}) f`.
    pub fn mul_binomial(&self, i: usize, c: &ExactScalar) -> Self {
        let alpha = self.datum.simple_root(i);
        self.add(&self.shift(&alpha, &-c.clone()))
    }

    /// Multiplies by `prod_{k=1}^n (1 - q_i^{2k} e^{alpha_i})`.
    pub fn mul_qstring(&self, i: usize, n: usize) -> Self {
        let mut out = self.clone();
        for k in 1..=n as i64 {
            out = out.mul_binomial(i, &ExactScalar::q_pow(2 * k * self.qi(i)));
        }
        out
    }

    /// Exact quotient by `(1 - c e^{alpha_i})`, coset by coset.
    fn div_binomial(&self, i: usize, c: &ExactScalar, k_tag: usize) -> std::result::Result<Self, NotDivisible> {
        let alpha = self.datum.simple_root(i);
        let mut out = Self { terms: BTreeMap::new(), ..self.clone() };
        for (rep, coeffs) in self.cosets(i) {
            let lo = *coeffs.keys().next().unwrap();
            let hi = *coeffs.keys().next_back().unwrap();
            // g_k = a_k + c g_{k-1}, running upward; g_hi must vanish.
            let mut g: Vector = vec![ExactScalar::zero(); self.dim];
            for k in lo..=hi {
                let next: Vector = match coeffs.get(&k) {
                    Some(a) => a.iter().zip(&g).map(|(x, y)| x + &(c * y)).collect(),
                    None => g.iter().map(|y| c * y).collect(),
                };
                if k == hi {
                    if !vec_is_zero(&next) {
                        return Err(NotDivisible { coset: rep, k: k_tag, remainder: next });
                    }
                } else {
                    out.add_term(&rep + &alpha.scale(k), &next);
                }
                g = next;
            }
        }
        Ok(out)
    }

    /// Exact quotient of `f` by `prod_{k=1}^n (1 - q_i^{2k} e^{alpha_i})`.
    pub fn divide_by_qstring(&self, i: usize, n: usize) -> std::result::Result<Self, NotDivisible> {
        let mut out = self.clone();
        for k in 1..=n {
            out = out.div_binomial(i, &ExactScalar::q_pow(2 * k as i64 * self.qi(i)), k)?;
        }
        Ok(out)
    }

    /// For each `Z alpha_i`-coset and each `k <= n`, the value of the coset polynomial at
    /// `e^{alpha_i} = q_i^{-2k}`. All vanish exactly when `f` is divisible by the `q`-string.
    pub fn qstring_obstructions(&self, i: usize, n: usize) -> Vec<(Weight, usize, Vector)> {
        let mut out = Vec::new();
        for (rep, coeffs) in self.cosets(i) {
            for k in 1..=n {
                let x = ExactScalar::q_pow(-2 * k as i64 * self.qi(i));
                let mut acc = vec![ExactScalar::zero(); self.dim];
                for (&e, v) in &coeffs {
                    let p = x.pow(e);
                    for (a, b) in acc.iter_mut().zip(v.iter()) {
                        *a += &(&p * b);
                    }
                }
                out.push((rep.clone(), k, acc));
            }
        }
        out
    }

    /// `q^{2 <nu, lambda>}` as an exact scalar.
    pub fn monomial_at(&self, nu: &Weight, lambda: &Weight) -> ExactScalar {
        let p = self.datum.pairing(nu, lambda) * BigRational::from_integer(BigInt::from(2 * S_PER_Q * self.qpower));
        assert!(p.is_integer(), "pairing denominator exceeds the scalar field's resolution");
        ExactScalar::s_pow(p.to_integer().to_i64().expect("exponent fits in i64"))
    }

    /// `f(q^{2 lambda}) = sum_nu q^{2 <nu, lambda>} v_nu`.
    pub fn evaluate_at_weight(&self, lambda: &Weight) -> Vector {
        let mut acc = vec![ExactScalar::zero(); self.dim];
        for (nu, v) in &self.terms {
            let m = self.monomial_at(nu, lambda);
            for (a, b) in acc.iter_mut().zip(v) {
                *a += &(&m * b);
            }
        }
        acc
    }

    /// Moves the term at `nu` to `w nu`.
    pub fn weyl_pushforward(&self, w: &WeylElement) -> Self {
        let mut out = Self { terms: BTreeMap::new(), ..self.clone() };
        for (nu, v) in &self.terms {
            out.terms.insert(w.act(&self.datum, nu), v.clone());
        }
        out
    }

    /// Substitutes `q = 1` in every coefficient.
    pub fn classical_limit(&self) -> Result<BTreeMap<Weight, Vec<BigRational>>> {
        let mut out = BTreeMap::new();
        for (nu, v) in &self.terms {
            let c: Vec<BigRational> = v.iter().map(|x| x.eval_at_one()).collect::<Result<_>>()?;
            if c.iter().any(|x| *x != BigRational::from_integer(0.into())) {
                out.insert(nu.clone(), c);
            }
        }
        Ok(out)
    }

    /// Lattice points of the convex hull of the support.
    pub fn weight_diagram(&self) -> Vec<Weight> {
        hull::lattice_points(&self.support())
    }

    /// The part of `f` whose coefficients have components outside `V[0]`, restricted to those
    /// components.
    pub fn off_zero_weight(&self, v: &WeightModule) -> Self {
        let zero = Weight::zero(self.datum.rank);
        let r = v.weight_range(&zero);
        self.map_coefficients(self.dim, |c| {
            let mut c = c.to_vec();
            for x in &mut c[r.clone()] {
                *x = ExactScalar::zero();
            }
            c
        })
    }

    /// Splits `f` by `Z alpha_i`-cosets of the support and regrades each piece to the rank-one
    /// datum of node `i` with values in the restriction of `v`.
    pub fn string_restriction(&self, v: &WeightModule, i: usize) -> Vec<TorusFunction> {
        let (rv, perm) = restrict_sl2_with_map(v, i);
        let alpha = self.datum.simple_root(i);
        self.cosets(i)
            .into_iter()
            .map(|(rep, coeffs)| {
                let mut g = TorusFunction::zero(&rv.datum, rv.qpower, rv.dim());
                for (k, c) in coeffs {
                    let nu = &rep + &alpha.scale(k);
                    let newc: Vector = perm.iter().map(|&old| c[old].clone()).collect();
                    g.add_term(Weight(vec![nu.get(i)]), &newc);
                }
                g
            })
            .collect()
    }

    pub fn to_json(&self) -> TorusJson {
        TorusJson {
            cartan: self.datum.name.clone(),
            module_v: ModuleSpec { highest_weight: self.module_highest.clone() },
            terms: self
                .terms
                .iter()
                .map(|(w, v)| TermJson { weight: w.clone(), coeffs: v.clone() })
                .collect(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("torus function serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModuleSpec {
    pub highest_weight: Option<Weight>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub weight: Weight,
    pub coeffs: Vec<ExactScalar>,
}

/// Interchange format: `{"cartan", "module_V": {"highest_weight"}, "terms": [{"weight", "coeffs"}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusJson {
    pub cartan: String,
    #[serde(rename = "module_V")]
    pub module_v: ModuleSpec,
    pub terms: Vec<TermJson>,
}

impl TorusJson {
    /// Rebuilds the function together with its irreducible target module.
    pub fn to_function(&self) -> Result<(TorusFunction, WeightModule)> {
        let datum = CartanDatum::from_name(&self.cartan)?;
        let hw = self
            .module_v
            .highest_weight
            .clone()
            .ok_or_else(|| Error::Parse("module_V.highest_weight is required".into()))?;
        let v = irreducible(&datum, &hw)?;
        let mut f = TorusFunction::zero_for(&v);
        for t in &self.terms {
            if t.weight.rank() != datum.rank {
                return Err(Error::Parse(format!("weight {:?} has wrong rank", t.weight)));
            }
            if t.coeffs.len() != v.dim() {
                return Err(Error::Parse(format!(
                    "term at {:?} has {} coefficients, module has dimension {}",
                    t.weight,
                    t.coeffs.len(),
                    v.dim()
                )));
            }
            f.add_term(t.weight.clone(), &t.coeffs);
        }
        Ok((f, v))
    }

    pub fn parse(text: &str) -> Result<(TorusFunction, WeightModule)> {
        let j: TorusJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        j.to_function()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::WeylGroup;

    fn a1() -> CartanDatum {
        CartanDatum::rank_one()
    }

    fn w(x: i64) -> Weight {
        Weight(vec![x])
    }

    fn sc(n: i64) -> ExactScalar {
        ExactScalar::from_int(n)
    }

    #[test]
    fn evaluation_examples() {
        let d = a1();
        let mut f = TorusFunction::zero(&d, 1, 1);
        f.add_term(w(2), &[sc(1)]);
        assert_eq!(f.evaluate_at_weight(&w(1)), vec![ExactScalar::q_pow(2)]);
        let mut ch = TorusFunction::zero(&d, 1, 1);
        ch.add_term(w(1), &[sc(1)]);
        ch.add_term(w(-1), &[sc(1)]);
        assert_eq!(ch.evaluate_at_weight(&w(1)), vec![crate::qfield::quantum_integer(2, 1)]);
        let mut c = TorusFunction::zero(&d, 1, 1);
        c.add_term(w(0), &[sc(7)]);
        assert_eq!(c.evaluate_at_weight(&w(5)), vec![sc(7)]);
    }

    #[test]
    fn division_round_trip() {
        let d = CartanDatum::from_name("A2").unwrap();
        let mut g = TorusFunction::zero(&d, 1, 2);
        g.add_term(Weight(vec![1, 0]), &[sc(1), sc(2)]);
        g.add_term(Weight(vec![-1, 1]), &[sc(0), ExactScalar::q_pow(3)]);
        g.add_term(Weight(vec![3, -2]), &[sc(-1), sc(0)]);
        for i in 0..2 {
            for n in 1..=3 {
                let f = g.mul_qstring(i, n);
                assert_eq!(f.divide_by_qstring(i, n).unwrap(), g);
                assert!(f.qstring_obstructions(i, n).iter().all(|(_, _, v)| vec_is_zero(v)));
            }
        }
    }

    #[test]
    fn constant_is_not_divisible() {
        let mut f = TorusFunction::zero(&a1(), 1, 1);
        f.add_term(w(0), &[sc(1)]);
        let err = f.divide_by_qstring(0, 1).unwrap_err();
        assert_eq!(err.coset, w(0));
        assert_eq!(err.k, 1);
    }

    #[test]
    fn pushforward() {
        let d = a1();
        let wg = WeylGroup::new(&d);
        let s = wg.canonical(&[0]);
        let mut f = TorusFunction::zero(&d, 1, 1);
        f.add_term(w(2), &[sc(3)]);
        let g = f.weyl_pushforward(&s);
        assert_eq!(g.support(), vec![w(-2)]);
        assert_eq!(g.weyl_pushforward(&s), f);
        for l in -3..=3 {
            assert_eq!(g.evaluate_at_weight(&w(l)), f.evaluate_at_weight(&w(-l)));
        }
    }

    #[test]
    fn weight_diagram_examples() {
        let d = a1();
        let mut f = TorusFunction::zero(&d, 1, 1);
        assert!(f.weight_diagram().is_empty());
        f.add_term(w(2), &[sc(1)]);
        f.add_term(w(-2), &[sc(1)]);
        assert_eq!(f.weight_diagram(), (-2..=2).map(w).collect::<Vec<_>>());
    }

    #[test]
    fn json_round_trip() {
        let d = a1();
        let v = irreducible(&d, &w(2)).unwrap();
        let mut f = TorusFunction::zero_for(&v);
        f.add_term(w(1), &[sc(0), ExactScalar::q_pow(-2), sc(0)]);
        let (g, v2) = TorusJson::parse(&f.to_json_string()).unwrap();
        assert_eq!(g, f);
        assert_eq!(v2.dim(), 3);
        assert!(TorusJson::parse("{").is_err());
    }
}
