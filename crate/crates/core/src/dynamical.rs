//! Dynamical Weyl group operators on the zero weight space.
//!
//! A simple reflection acts on `V[0]` blockwise: restricted to the rank-one subalgebra of node
//! `i`, `V[0]` splits into the zero weight lines of copies of `L_{2m}`, and on each such block
//! `A_{s_i}` is the rank-one scalar. General elements are composed along a reduced word.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::cartan::{CartanDatum, Weight, WeylElement};
use crate::error::{Error, Result};
use crate::intertwiner::HomSpace;
use crate::linalg::Matrix;
use crate::modules::{irreducible, verma_truncated, Vector, WeightModule};
use crate::qfield::{poly_gcd, quantum_factorial, quantum_integer, ExactScalar, LaurentPoly};
use crate::symbolic::{DynOp, MPoly};

/// `m^lambda_{w.lambda}` in a truncated Verma module with highest weight `lambda`, as a global vector.
pub fn extremal_singular_vector(m: &WeightModule, w: &WeylElement, lambda: &Weight) -> Result<Vector> {
    let datum = &m.datum;
    let (hw, hw_index) = m
        .highest_weight
        .clone()
        .ok_or_else(|| Error::Domain("module has no highest weight".into()))?;
    if &hw != lambda {
        return Err(Error::Domain(format!("module has highest weight {:?}, not {:?}", hw, lambda)));
    }
    if !lambda.is_dominant() {
        return Err(Error::Domain(format!("{:?} is not dominant", lambda)));
    }
    let exps = extremal_exponents(datum, w, lambda);
    let need: usize = exps.iter().map(|&(_, n)| n as usize).sum();
    let have = m.truncation_depth.unwrap_or(usize::MAX);
    if need > have {
        return Err(Error::Depth { have, need });
    }
    let mut v = m.basis_vector(hw_index);
    let mut denom = ExactScalar::one();
    for &(i, n) in exps.iter().rev() {
        for _ in 0..n {
            v = m.apply_f(i, &v);
        }
        denom = &denom * &quantum_factorial(n, m.qi_power(i))?;
    }
    let inv = denom.inv().expect("quantum factorials are nonzero");
    Ok(v.iter().map(|x| x * &inv).collect())
}

/// `(i_j, n_j)` along the word of `w`, with `n_j = 2 <lambda + rho, alpha^j> / <alpha^j, alpha^j>`.
pub fn extremal_exponents(datum: &CartanDatum, w: &WeylElement, lambda: &Weight) -> Vec<(usize, i64)> {
    let word = &w.word;
    let lr = lambda + &datum.rho();
    (0..word.len())
        .map(|j| {
            // alpha^j = s_{i_l} ... s_{i_{j+1}} alpha_{i_j}
            let mut a = datum.simple_root(word[j]);
            for &k in &word[j + 1..] {
                a = datum.reflect(k, &a);
            }
            let n = BigRational::from_integer(BigInt::from(2)) * datum.pairing(&lr, &a) / datum.pairing(&a, &a);
            assert!(n.is_integer(), "extremal exponent is integral");
            (word[j], n.to_integer().to_i64().unwrap())
        })
        .collect()
}

/// `(-1)^m prod_{j=1}^m [x+1+j] / [x+1-j]` in the parameter `q^d`.
pub fn a_rank1_scalar(m: i64, x: i64, d: i64) -> Result<ExactScalar> {
    let mut acc = if m % 2 == 0 { ExactScalar::one() } else { -ExactScalar::one() };
    for j in 1..=m {
        let den = quantum_integer(x + 1 - j, d);
        let inv = den
            .inv()
            .ok_or_else(|| Error::Pole(format!("rank-one factor [{}] vanishes (m = {}, argument {})", x + 1 - j, m, x)))?;
        acc = &(&acc * &quantum_integer(x + 1 + j, d)) * &inv;
    }
    Ok(acc)
}

/// `A_{s, L_{2m}}(lambda)` on `V[0]` for the rank-one algebra.
pub fn a_operator_rank1_formula(m: i64, lambda: i64) -> Result<ExactScalar> {
    a_rank1_scalar(m, lambda, 1)
}

/// The same scalar read off an intertwiner of truncated Verma modules `M_lambda -> M_lambda (x) L_{2m}`.
///
/// The image of `m^lambda_{s.lambda}` has leading term `m^lambda_{s.lambda} (x) A v_0`; with the
/// normalization `<Phi> = v_0` this is the coefficient of `F^{lambda+1} m_lambda (x) v_0` in
/// `Delta(F)^{lambda+1} Phi(m_lambda)`.
pub fn a_operator_rank1_direct(m: i64, lambda: i64, depth: usize) -> Result<ExactScalar> {
    if m < 0 || lambda < 0 {
        return Err(Error::Domain("m and lambda must be nonnegative".into()));
    }
    let need = ((lambda + 1) as usize).max(m as usize);
    if depth < need {
        return Err(Error::Depth { have: depth, need });
    }
    let a1 = CartanDatum::rank_one();
    let lam = Weight(vec![lambda]);
    let v = irreducible(&a1, &Weight(vec![2 * m]))?;
    let verma = verma_truncated(&a1, &lam, depth)?;
    let h = HomSpace::with_source(verma, &v)?;
    if h.dimension() != 1 {
        return Err(Error::Genericity(format!(
            "Verma intertwiner space at lambda = {} has dimension {}",
            lambda,
            h.dimension()
        )));
    }
    let e = h.expectation_of(&h.singular_basis()[0]);
    let scale = e[0]
        .inv()
        .ok_or_else(|| Error::Genericity(format!("Verma intertwiner at lambda = {} has zero expectation", lambda)))?;
    let mut x: Vector = h.singular_basis()[0].iter().map(|c| c * &scale).collect();
    let mut wt = lam.clone();
    for _ in 0..=lambda {
        x = h.t.f_local(0, &wt, &x);
        wt = Weight(vec![wt.get(0) - 2]);
    }
    let target = h.l.weight_range(&wt).start;
    let z = h.v.weight_range(&Weight(vec![0])).start;
    let k = crate::modules::pair_local_index(&h.l, &h.v, target, z);
    Ok(x[k].clone())
}

/// Decomposition of `V[0]` under the rank-one subalgebra of node `i`.
#[derive(Clone, Debug)]
pub struct RankOneBlocks {
    pub node: usize,
    /// Columns are bases of the blocks, concatenated in increasing `m`.
    pub basis: Matrix<ExactScalar>,
    pub inverse: Matrix<ExactScalar>,
    /// `m` for each column of `basis`.
    pub block_of: Vec<i64>,
    /// Projection onto each block along the others.
    pub projections: BTreeMap<i64, Matrix<ExactScalar>>,
}

impl RankOneBlocks {
    /// `B_m = F_i^m (ker E_i on V[m alpha_i])` for every `m >= 0`.
    pub fn new(v: &WeightModule, i: usize) -> Result<Self> {
        let z = Weight::zero(v.rank());
        let d0 = v.weight_dim(&z);
        let alpha = v.datum.simple_root(i);
        let mut cols: Vec<Vector> = Vec::new();
        let mut block_of = Vec::new();
        let mut m = 0i64;
        while cols.len() < d0 {
            let top = alpha.scale(m);
            if !v.has_weight(&top) {
                return Err(Error::TheoremViolation(format!(
                    "zero weight space does not split into rank-one blocks at node {}",
                    i
                )));
            }
            let dtop = v.weight_dim(&top);
            let hw: Vec<Vector> = match v.e_block(i, &top) {
                Some(b) => b.kernel(),
                None => (0..dtop)
                    .map(|k| {
                        let mut e = vec![ExactScalar::zero(); dtop];
                        e[k] = ExactScalar::one();
                        e
                    })
                    .collect(),
            };
            for h in hw {
                let mut x = h;
                let mut wt = top.clone();
                for _ in 0..m {
                    x = v.f_local(i, &wt, &x);
                    wt = &wt - &alpha;
                }
                cols.push(x);
                block_of.push(m);
            }
            m += 1;
        }
        let basis = Matrix::from_cols(&cols, d0);
        let inverse = basis
            .inverse()
            .ok_or_else(|| Error::TheoremViolation(format!("rank-one blocks at node {} are dependent", i)))?;
        let mut projections = BTreeMap::new();
        let ms: Vec<i64> = {
            let mut s = block_of.clone();
            s.dedup();
            s
        };
        for &mm in &ms {
            let mut diag = Matrix::zeros(d0, d0);
            for (c, &b) in block_of.iter().enumerate() {
                if b == mm {
                    diag.set(c, c, ExactScalar::one());
                }
            }
            projections.insert(mm, basis.mul(&diag).mul(&inverse));
        }
        Ok(RankOneBlocks { node: i, basis, inverse, block_of, projections })
    }
}

/// Dynamical Weyl group of a module, with the rank-one block data cached per node.
#[derive(Clone, Debug)]
pub struct DynamicalWeyl {
    pub v: WeightModule,
    pub blocks: Vec<RankOneBlocks>,
    d0: usize,
}

impl DynamicalWeyl {
    pub fn new(v: &WeightModule) -> Result<Self> {
        let blocks = (0..v.rank()).map(|i| RankOneBlocks::new(v, i)).collect::<Result<Vec<_>>>()?;
        let d0 = v.weight_dim(&Weight::zero(v.rank()));
        Ok(DynamicalWeyl { v: v.clone(), blocks, d0 })
    }

    pub fn zero_dim(&self) -> usize {
        self.d0
    }

    fn qi(&self, i: usize) -> i64 {
        self.v.qi_power(i)
    }

    /// `A_{s_i}(mu)` on `V[0]`; depends on `mu` only through `mu(h_i)`.
    pub fn simple(&self, i: usize, mu: &Weight) -> Result<Matrix<ExactScalar>> {
        let b = &self.blocks[i];
        let mut out = Matrix::zeros(self.d0, self.d0);
        for (&m, p) in &b.projections {
            let c = a_rank1_scalar(m, mu.get(i), self.qi(i))
                .map_err(|e| Error::Pole(format!("A_(s{}) at {:?}: {}", i + 1, mu, e)))?;
            out = out.add(&p.scale(&c));
        }
        Ok(out)
    }

    /// `A_w(lambda)` on `V[0]` along the canonical word of `w`:
    /// `A_{s_{i_1}}(s_{i_2}...s_{i_l} . lambda) ... A_{s_{i_l}}(lambda)`.
    pub fn shifted(&self, w: &WeylElement, lambda: &Weight) -> Result<Matrix<ExactScalar>> {
        let datum = &self.v.datum;
        let mut out = Matrix::identity(self.d0);
        let mut arg = lambda.clone();
        for &i in w.word.iter().rev() {
            out = self.simple(i, &arg)?.mul(&out);
            arg = WeylElement::simple(i).dot(datum, &arg);
        }
        Ok(out)
    }

    /// `A_w(-lambda - rho)`.
    pub fn unshifted(&self, w: &WeylElement, lambda: &Weight) -> Result<Matrix<ExactScalar>> {
        let arg = &(-lambda) - &self.v.datum.rho();
        self.shifted(w, &arg)
    }

    /// The unshifted simple factor `A_{s_i}(-x - rho)` where `x = u lambda` for symbolic `lambda`.
    pub fn symbolic_simple(&self, i: usize, u: &WeylElement) -> DynOp {
        let datum = &self.v.datum;
        let r = datum.rank;
        let um = u.matrix(datum);
        let qi = self.qi(i);
        // Y^2 = q_i^{2 (u lambda)(h_i)}
        let y2: Vec<i64> = (0..r).map(|k| 2 * qi * um[i][k]).collect();
        let b = &self.blocks[i];
        // Clear the denominators of the projection entries.
        let mut delta = LaurentPoly::one();
        for p in b.projections.values() {
            for a in 0..self.d0 {
                for c in 0..self.d0 {
                    let den = p.get(a, c).denom().clone();
                    let g = poly_gcd(&delta, &den);
                    delta = crate::qfield::exact_div(&delta.mul(&den), &g).expect("lcm divides");
                }
            }
        }
        let zero_z = vec![0; r];
        // prod_j (Y^2 q_i^{-j} - q_i^j) over prod_j (Y^2 q_i^j - q_i^{-j}), sign on the numerator
        let product = |m: i64, upper: bool| {
            let mut acc = MPoly::one(r);
            for j in 1..=m {
                let (a, b) = if upper { (-j * qi, j * qi) } else { (j * qi, -j * qi) };
                acc = acc.mul(&MPoly::q_monomial(r, 1, a, &y2).sub(&MPoly::q_monomial(r, 1, b, &zero_z)));
            }
            acc
        };
        let ms: Vec<i64> = b.projections.keys().copied().collect();
        let dens: Vec<MPoly> = ms.iter().map(|&m| product(m, false)).collect();
        let nums: Vec<MPoly> = ms
            .iter()
            .map(|&m| if m % 2 == 1 { product(m, true).neg() } else { product(m, true) })
            .collect();
        let mut denominator = MPoly::from_laurent(r, &delta);
        for d in &dens {
            denominator = denominator.mul(d);
        }
        let mut numerators = vec![vec![MPoly::zero(r); self.d0]; self.d0];
        for (k, &m) in ms.iter().enumerate() {
            let mut coef = nums[k].clone();
            for (k2, d) in dens.iter().enumerate() {
                if k2 != k {
                    coef = coef.mul(d);
                }
            }
            let p = &b.projections[&m];
            for a in 0..self.d0 {
                for c in 0..self.d0 {
                    let e = p.get(a, c);
                    if e.is_zero() {
                        continue;
                    }
                    let scaled = e * &ExactScalar::from_laurent(delta.clone());
                    assert!(scaled.is_laurent(), "denominator cleared");
                    let ep = MPoly::from_laurent(r, scaled.numer());
                    numerators[a][c] = numerators[a][c].add(&coef.mul(&ep));
                }
            }
        }
        DynOp { numerators, denominator }
    }

    /// `A_w(-lambda - rho)` on `V[0]` as a function of symbolic `lambda`, composed along the
    /// given word: `A_{s_{i_1}}(s_{i_2}...s_{i_l} lambda) ... A_{s_{i_l}}(lambda)`.
    pub fn symbolic_unshifted_word(&self, word: &[usize]) -> DynOp {
        let r = self.v.rank();
        let mut out = DynOp::identity(r, self.d0);
        for k in (0..word.len()).rev() {
            let u = WeylElement { word: word[k + 1..].to_vec() };
            out = self.symbolic_simple(word[k], &u).compose(&out);
        }
        out
    }

    pub fn symbolic_unshifted(&self, w: &WeylElement) -> DynOp {
        self.symbolic_unshifted_word(&w.word)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::WeylGroup;
    use crate::intertwiner::singular_vectors;

    fn w1(x: i64) -> Weight {
        Weight(vec![x])
    }

    #[test]
    fn rank_one_formula_examples() {
        assert_eq!(a_operator_rank1_formula(0, 5).unwrap(), ExactScalar::one());
        let x = a_operator_rank1_formula(1, 2).unwrap();
        assert_eq!(x, -(&ExactScalar::q_pow(2) + &ExactScalar::q_pow(-2)));
        assert!(matches!(a_operator_rank1_formula(2, 1), Err(Error::Pole(_))));
        let m1 = a_operator_rank1_formula(1, 7).unwrap();
        assert_eq!(m1, -(&quantum_integer(9, 1) / &quantum_integer(7, 1)));
    }

    #[test]
    fn direct_matches_formula() {
        for m in 0..=2 {
            for lam in m..=m + 2 {
                let direct = a_operator_rank1_direct(m, lam, (lam + 1) as usize).unwrap();
                assert_eq!(direct, a_operator_rank1_formula(m, lam).unwrap(), "m={} lambda={}", m, lam);
            }
        }
    }

    #[test]
    fn extremal_vectors_are_singular() {
        let a1 = CartanDatum::rank_one();
        let m = verma_truncated(&a1, &w1(3), 5).unwrap();
        let s = WeylElement::simple(0);
        let v = extremal_singular_vector(&m, &s, &w1(3)).unwrap();
        let wt = s.dot(&a1, &w1(3));
        assert_eq!(wt, w1(-5));
        let local = m.local(&wt, &v);
        assert_eq!(local, vec![quantum_factorial(4, 1).unwrap().inv().unwrap()]);
        assert!(matches!(
            extremal_singular_vector(&verma_truncated(&a1, &w1(3), 3).unwrap(), &s, &w1(3)),
            Err(Error::Depth { .. })
        ));

        let a2 = CartanDatum::from_name("A2").unwrap();
        let lam = Weight(vec![1, 0]);
        let wg = WeylGroup::new(&a2);
        let w0 = wg.longest().clone();
        let depth = extremal_exponents(&a2, &w0, &lam).iter().map(|x| x.1 as usize).sum::<usize>();
        let m = verma_truncated(&a2, &lam, depth).unwrap();
        let mut seen = Vec::new();
        for word in wg.reduced_words(&w0) {
            let x = extremal_singular_vector(&m, &WeylElement { word }, &lam).unwrap();
            let wt = w0.dot(&a2, &lam);
            let loc = m.local(&wt, &x);
            assert!(!crate::linalg::vec_is_zero(&loc));
            for i in 0..2 {
                assert!(crate::linalg::vec_is_zero(&m.apply_e(i, &x)));
            }
            seen.push(loc);
        }
        assert!(seen.windows(2).all(|p| p[0] == p[1]));
        let s1s2 = WeylElement { word: vec![0, 1] };
        let x = extremal_singular_vector(&m, &s1s2, &lam).unwrap();
        let wt = s1s2.dot(&a2, &lam);
        assert_eq!(singular_vectors(&m, &wt).len(), 1);
        for i in 0..2 {
            assert!(crate::linalg::vec_is_zero(&m.apply_e(i, &x)));
        }
    }

    #[test]
    fn simple_operator_examples() {
        let a1 = CartanDatum::rank_one();
        let v = irreducible(&a1, &w1(2)).unwrap();
        let dw = DynamicalWeyl::new(&v).unwrap();
        let a = dw.shifted(&WeylElement::simple(0), &w1(2)).unwrap();
        assert_eq!(a.get(0, 0), &-(&ExactScalar::q_pow(2) + &ExactScalar::q_pow(-2)));
        assert!(dw.shifted(&WeylElement::identity(), &w1(2)).unwrap() == Matrix::identity(1));

        let a2 = CartanDatum::from_name("A2").unwrap();
        let adj = irreducible(&a2, &Weight(vec![1, 1])).unwrap();
        let dw = DynamicalWeyl::new(&adj).unwrap();
        // one trivial block and one three-dimensional block at each node
        for b in &dw.blocks {
            assert_eq!(b.block_of, vec![0, 1]);
        }
    }

    #[test]
    fn symbolic_matches_pointwise() {
        let a2 = CartanDatum::from_name("A2").unwrap();
        let adj = irreducible(&a2, &Weight(vec![1, 1])).unwrap();
        let dw = DynamicalWeyl::new(&adj).unwrap();
        let wg = WeylGroup::new(&a2);
        for w in wg.elements() {
            let op = dw.symbolic_unshifted(w);
            for lam in [Weight(vec![2, 5]), Weight(vec![-7, 3])] {
                let sym = op.evaluate(&lam).unwrap();
                let pt = dw.unshifted(w, &lam).unwrap();
                assert!(sym == pt, "w = {:?}", w);
            }
        }
    }

    #[test]
    fn unshifted_rank_one_symbolic() {
        let a1 = CartanDatum::rank_one();
        let v = irreducible(&a1, &w1(2)).unwrap();
        let dw = DynamicalWeyl::new(&v).unwrap();
        let s = WeylElement::simple(0);
        let op = dw.symbolic_unshifted(&s);
        for z in [3i64, -4, 9] {
            let want = -(&quantum_integer(-z + 1, 1) / &quantum_integer(-z - 1, 1));
            assert_eq!(op.evaluate(&w1(z)).unwrap().get(0, 0), &want);
        }
        // involutivity: A_s(s lambda) A_s(lambda) = id
        let back = op.substitute_linear(&s.matrix(&a1)).compose(&op);
        assert!(back.is_identity());
        let triv = DynamicalWeyl::new(&WeightModule::trivial(&a1)).unwrap();
        assert!(triv.symbolic_unshifted(&s).is_identity());
    }
}
