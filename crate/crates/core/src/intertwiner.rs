//! Module maps `L -> L (x) V` determined by singular vectors, and their weighted traces.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::cartan::Weight;
use crate::error::{Error, Result};
use crate::linalg::{vec_is_zero, Matrix};
use crate::modules::{irreducible, tensor, Vector, WeightModule};
use crate::qfield::ExactScalar;
use crate::torus::TorusFunction;

/// Basis of `{x in M[nu] : E_i x = 0 for all i}` in local coordinates of `M[nu]`.
///
/// The basis is the canonical one of the reduced row echelon form. A weight that does not
/// occur gives an empty basis.
pub fn singular_vectors(m: &WeightModule, nu: &Weight) -> Vec<Vector> {
    let d = m.weight_dim(nu);
    if d == 0 {
        return Vec::new();
    }
    let mut stacked: Matrix<ExactScalar> = Matrix::zeros(0, d);
    for i in 0..m.rank() {
        if let Some(b) = m.e_block(i, nu) {
            stacked = stacked.vstack(b);
        }
    }
    if stacked.rows() == 0 {
        return (0..d)
            .map(|k| {
                let mut v = vec![ExactScalar::zero(); d];
                v[k] = ExactScalar::one();
                v
            })
            .collect();
    }
    stacked.kernel()
}

/// A module map out of a highest-weight module, recorded by the image of the highest-weight vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Intertwiner {
    pub mu: Weight,
    pub v_highest: Option<Weight>,
    /// Local coordinates in `(L (x) V)[mu]`.
    pub image_of_hwv: Vector,
}

/// `Hom(L, L (x) V)` for a highest-weight module `L` of weight `mu`, with everything needed to
/// evaluate its elements.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub mu: Weight,
    pub l: WeightModule,
    pub v: WeightModule,
    pub t: WeightModule,
    singular: Vec<Vector>,
}

impl HomSpace {
    /// The space for the irreducible module `L_mu`.
    pub fn new(mu: &Weight, v: &WeightModule) -> Result<Self> {
        let l = irreducible(&v.datum, mu)?;
        Self::with_source(l, v)
    }

    /// The space for any module with a recorded highest weight (for instance a truncated Verma).
    pub fn with_source(l: WeightModule, v: &WeightModule) -> Result<Self> {
        let (mu, _) = l
            .highest_weight
            .clone()
            .ok_or_else(|| Error::Domain("source module has no highest weight".into()))?;
        let t = tensor(&l, v)?;
        let singular = singular_vectors(&t, &mu);
        Ok(HomSpace { mu, l, v: v.clone(), t, singular })
    }

    pub fn dimension(&self) -> usize {
        self.singular.len()
    }

    pub fn singular_basis(&self) -> &[Vector] {
        &self.singular
    }

    fn zero_weight(&self) -> Weight {
        Weight::zero(self.v.rank())
    }

    /// `dim {v in V[0] : E_i^{mu(h_i)+1} v = 0 for all i}`.
    pub fn kernel_characterization_dim(&self) -> usize {
        let z = self.zero_weight();
        let d0 = self.v.weight_dim(&z);
        if d0 == 0 {
            return 0;
        }
        let mut stacked: Matrix<ExactScalar> = Matrix::zeros(0, d0);
        for i in 0..self.v.rank() {
            let n = (self.mu.get(i) + 1) as usize;
            stacked = stacked.vstack(&self.v.e_power_block(i, &z, n));
        }
        d0 - stacked.rank()
    }

    /// Whether `v0` (local in `V[0]`) satisfies `E_i^{mu(h_i)+1} v0 = 0` for every `i`.
    pub fn admissible(&self, v0: &[ExactScalar]) -> bool {
        let z = self.zero_weight();
        (0..self.v.rank()).all(|i| {
            let n = (self.mu.get(i) + 1) as usize;
            vec_is_zero(&self.v.e_power_block(i, &z, n).mul_vec(v0))
        })
    }

    fn hw_index(&self) -> usize {
        self.l.highest_weight.as_ref().expect("source has a highest weight").1
    }

    /// Position of `l_mu (x) v_j` inside `(L (x) V)[mu]`.
    fn pair_index(&self, a: usize, b: usize) -> usize {
        crate::modules::pair_local_index(&self.l, &self.v, a, b)
    }

    /// Expectation value of a singular vector, in local coordinates of `V[0]`.
    pub fn expectation_of(&self, x: &[ExactScalar]) -> Vector {
        let z = self.zero_weight();
        let hw = self.hw_index();
        self.v
            .weight_range(&z)
            .map(|b| x[self.pair_index(hw, b)].clone())
            .collect()
    }

    pub fn expectation_value(&self, phi: &Intertwiner) -> Vector {
        self.expectation_of(&phi.image_of_hwv)
    }

    /// Intertwiner with the given expectation value (local coordinates of `V[0]`).
    pub fn from_expectation(&self, v0: &[ExactScalar]) -> Result<Intertwiner> {
        let d0 = self.v.weight_dim(&self.zero_weight());
        if v0.len() != d0 {
            return Err(Error::Domain(format!("expected {} coordinates of V[0], got {}", d0, v0.len())));
        }
        let img = if vec_is_zero(v0) {
            vec![ExactScalar::zero(); self.t.weight_dim(&self.mu)]
        } else {
            let cols: Vec<Vector> = self.singular.iter().map(|s| self.expectation_of(s)).collect();
            let solved = if cols.is_empty() { None } else { Matrix::from_cols(&cols, d0).solve(v0) };
            match solved {
                Some(c) => {
                    let mut img = vec![ExactScalar::zero(); self.t.weight_dim(&self.mu)];
                    for (ck, s) in c.iter().zip(&self.singular) {
                        for (a, b) in img.iter_mut().zip(s) {
                            *a += &(ck * b);
                        }
                    }
                    img
                }
                None if !self.admissible(v0) => return Err(Error::NoIntertwiner { mu: self.mu.clone() }),
                None => {
                    return Err(Error::TheoremViolation(format!(
                        "admissible expectation value at {:?} has no intertwiner",
                        self.mu
                    )))
                }
            }
        };
        Ok(Intertwiner {
            mu: self.mu.clone(),
            v_highest: self.v.highest_weight.as_ref().map(|(w, _)| w.clone()),
            image_of_hwv: img,
        })
    }

    /// Same as [`Self::from_expectation`] for a global vector of `V`, which must lie in `V[0]`.
    pub fn from_vector(&self, v: &[ExactScalar]) -> Result<Intertwiner> {
        if v.len() != self.v.dim() {
            return Err(Error::Domain("vector has the wrong dimension".into()));
        }
        let z = self.zero_weight();
        let r = self.v.weight_range(&z);
        if v.iter().enumerate().any(|(k, x)| !r.contains(&k) && !x.is_zero()) {
            return Err(Error::Domain("vector is not in V[0]".into()));
        }
        self.from_expectation(&v[r])
    }

    /// Intertwiners whose expectation values are the canonical echelon basis of the image.
    pub fn expectation_basis(&self) -> Result<Vec<Intertwiner>> {
        let d0 = self.v.weight_dim(&self.zero_weight());
        let exps: Vec<Vector> = self.singular.iter().map(|s| self.expectation_of(s)).collect();
        let basis = crate::linalg::echelon_basis(exps, d0);
        if basis.len() != self.singular.len() {
            return Err(Error::TheoremViolation(format!(
                "expectation map is not injective at {:?}",
                self.mu
            )));
        }
        basis.iter().map(|v| self.from_expectation(v)).collect()
    }

    /// `Phi(b)` for every basis vector `b` of the source, as local vectors of `(L (x) V)[wt b]`.
    ///
    /// Each basis vector is `F_i` of its parent, so `Phi(b) = Delta(F_i) Phi(parent)`.
    pub fn extend(&self, phi: &Intertwiner) -> Result<Vec<Vector>> {
        let parents = self
            .l
            .parents()
            .ok_or_else(|| Error::Domain("source module carries no parent links".into()))?;
        let mut memo: HashMap<usize, Vector> = HashMap::new();
        memo.insert(self.hw_index(), phi.image_of_hwv.clone());
        let mut out = Vec::with_capacity(self.l.dim());
        for g in 0..self.l.dim() {
            out.push(self.extend_one(g, parents, &mut memo)?);
        }
        Ok(out)
    }

    fn extend_one(
        &self,
        g: usize,
        parents: &[Option<(usize, usize)>],
        memo: &mut HashMap<usize, Vector>,
    ) -> Result<Vector> {
        if let Some(v) = memo.get(&g) {
            return Ok(v.clone());
        }
        let (p, i) = parents[g].ok_or_else(|| Error::Domain(format!("basis vector {} has no parent link", g)))?;
        let pv = self.extend_one(p, parents, memo)?;
        let v = self.t.f_local(i, self.l.weight_of(p), &pv);
        memo.insert(g, v.clone());
        Ok(v)
    }

    /// Checks `Phi(X b) = Delta(X) Phi(b)` for `X` in `{E_i, F_i}` and every basis vector `b`.
    pub fn verify(&self, phi: &Intertwiner) -> Result<bool> {
        let images = self.extend(phi)?;
        let unit = |len: usize, k: usize| {
            let mut v = vec![ExactScalar::zero(); len];
            v[k] = ExactScalar::one();
            v
        };
        for g in 0..self.l.dim() {
            let w = self.l.weight_of(g).clone();
            let r = self.l.weight_range(&w);
            let e = unit(r.len(), g - r.start);
            for i in 0..self.l.rank() {
                let alpha = self.l.datum.simple_root(i);
                for raise in [true, false] {
                    let (x, w2) = if raise {
                        (self.l.e_local(i, &w, &e), &w + &alpha)
                    } else {
                        (self.l.f_local(i, &w, &e), &w - &alpha)
                    };
                    let lhs: Vector = if self.l.has_weight(&w2) {
                        let base = self.l.weight_range(&w2).start;
                        let mut acc = vec![ExactScalar::zero(); self.t.weight_dim(&w2)];
                        for (k, c) in x.iter().enumerate() {
                            if !c.is_zero() {
                                for (a, b) in acc.iter_mut().zip(&images[base + k]) {
                                    *a += &(c * b);
                                }
                            }
                        }
                        acc
                    } else {
                        vec![ExactScalar::zero(); self.t.weight_dim(&w2)]
                    };
                    let rhs = if raise {
                        self.t.e_local(i, &w, &images[g])
                    } else {
                        self.t.f_local(i, &w, &images[g])
                    };
                    if lhs.len() != rhs.len() || lhs.iter().zip(&rhs).any(|(a, b)| a != b) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Weighted trace `sum_nu e^nu Tr|_{L[nu]}(Phi)`, a function with values in `V[0]`.
    pub fn trace(&self, phi: &Intertwiner) -> Result<TorusFunction> {
        let images = self.extend(phi)?;
        let z = self.zero_weight();
        let zr = self.v.weight_range(&z);
        let mut f = TorusFunction::zero_for(&self.v);
        for w in self.l.weights() {
            let mut coeff = vec![ExactScalar::zero(); self.v.dim()];
            for a in self.l.weight_range(w) {
                for b in zr.clone() {
                    let x = &images[a][self.pair_index(a, b)];
                    coeff[b] += x;
                }
            }
            f.add_term(w.clone(), &coeff);
        }
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::CartanDatum;
    use num_rational::BigRational;

    fn w(x: i64) -> Weight {
        Weight(vec![x])
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn singular_vector_examples() {
        let a1 = CartanDatum::rank_one();
        let l3 = irreducible(&a1, &w(3)).unwrap();
        assert_eq!(singular_vectors(&l3, &w(3)).len(), 1);
        let l2 = irreducible(&a1, &w(2)).unwrap();
        assert_eq!(singular_vectors(&tensor(&l2, &l2).unwrap(), &w(2)).len(), 1);
        let l0 = irreducible(&a1, &w(0)).unwrap();
        assert_eq!(singular_vectors(&tensor(&l0, &l2).unwrap(), &w(0)).len(), 0);
        assert!(singular_vectors(&l3, &w(7)).is_empty());
    }

    #[test]
    fn hom_dimensions_rank_one() {
        let a1 = CartanDatum::rank_one();
        let l4 = irreducible(&a1, &w(4)).unwrap();
        for (mu, d) in [(0, 0), (1, 0), (2, 1), (3, 1), (5, 1)] {
            let h = HomSpace::new(&w(mu), &l4).unwrap();
            assert_eq!(h.dimension(), d, "mu = {}", mu);
            assert_eq!(h.kernel_characterization_dim(), d);
        }
        let l0 = irreducible(&a1, &w(0)).unwrap();
        assert_eq!(HomSpace::new(&w(3), &l0).unwrap().dimension(), 1);
    }

    #[test]
    fn golden_trace_classical_limit() {
        let a1 = CartanDatum::rank_one();
        let v = irreducible(&a1, &w(2)).unwrap();
        let z = v.weight_range(&w(0)).start;
        for mu in 1..=4i64 {
            let h = HomSpace::new(&w(mu), &v).unwrap();
            let phi = h.from_expectation(&[ExactScalar::one()]).unwrap();
            assert!(h.verify(&phi).unwrap());
            assert_eq!(h.expectation_value(&phi), vec![ExactScalar::one()]);
            let f = h.trace(&phi).unwrap();
            let cl = f.classical_limit().unwrap();
            for k in 0..=mu {
                let nu = mu - 2 * k;
                let want = rat(mu - 2 * k, mu);
                let got = cl.get(&w(nu)).map(|c| c[z].clone()).unwrap_or_else(|| rat(0, 1));
                assert_eq!(got, want, "mu={} nu={}", mu, nu);
            }
        }
    }

    #[test]
    fn quantum_trace_mu_one() {
        let a1 = CartanDatum::rank_one();
        let v = irreducible(&a1, &w(2)).unwrap();
        let h = HomSpace::new(&w(1), &v).unwrap();
        let f = h.trace(&h.from_expectation(&[ExactScalar::one()]).unwrap()).unwrap();
        let z = v.weight_range(&w(0)).start;
        assert_eq!(f.coefficient(&w(1)).unwrap()[z], ExactScalar::one());
        assert_eq!(f.coefficient(&w(-1)).unwrap()[z], -ExactScalar::q_pow(-2));
    }

    #[test]
    fn trivial_v_gives_character() {
        let a2 = CartanDatum::from_name("A2").unwrap();
        let v = WeightModule::trivial(&a2);
        let mu = Weight(vec![1, 1]);
        let h = HomSpace::new(&mu, &v).unwrap();
        let phi = h.from_expectation(&[ExactScalar::one()]).unwrap();
        let f = h.trace(&phi).unwrap();
        for (nu, d) in h.l.character() {
            assert_eq!(f.coefficient(&nu).unwrap()[0], ExactScalar::from_int(d as i64));
        }
    }

    #[test]
    fn errors() {
        let a1 = CartanDatum::rank_one();
        let v = irreducible(&a1, &w(4)).unwrap();
        let h = HomSpace::new(&w(1), &v).unwrap();
        assert!(matches!(h.from_expectation(&[ExactScalar::one()]), Err(Error::NoIntertwiner { .. })));
        let zero = h.from_expectation(&[ExactScalar::zero()]).unwrap();
        assert!(h.trace(&zero).unwrap().is_zero());
        let mut bad = vec![ExactScalar::zero(); 5];
        bad[0] = ExactScalar::one();
        assert!(matches!(h.from_vector(&bad), Err(Error::Domain(_))));
    }

    #[test]
    fn adjoint_a2_intertwiners_commute() {
        let a2 = CartanDatum::from_name("A2").unwrap();
        let adj = irreducible(&a2, &Weight(vec![1, 1])).unwrap();
        let h = HomSpace::new(&Weight(vec![1, 1]), &adj).unwrap();
        assert_eq!(h.dimension(), h.kernel_characterization_dim());
        for phi in h.expectation_basis().unwrap() {
            assert!(h.verify(&phi).unwrap());
        }
    }
}
