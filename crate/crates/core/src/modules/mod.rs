//! Weight-graded `U_q(g)` modules with explicit matrices for every `E_i` and `F_i`.

mod irreducible;
mod json;
mod relations;
mod restrict;
mod tensor;
mod verma;

use std::collections::{BTreeMap, HashMap};
use std::ops::Range;

use crate::cartan::{CartanDatum, Weight};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::qfield::{quantum_integer, ExactScalar};

pub use irreducible::{irreducible, irreducible_with_qpower};
pub use json::ModuleJson;
pub use relations::{check_relations, Violation, ViolationKind};
pub use restrict::{restrict_sl2, restrict_sl2_with_map};
pub use tensor::tensor;
pub(crate) use tensor::pair_local_index;
pub use verma::{contravariant_form, verma_truncated};

/// A vector in a module, in global basis coordinates.
pub type Vector = Vec<ExactScalar>;

/// Finite-dimensional weight module presented by block matrices.
///
/// Weights are kept in ascending lexicographic order; the global basis is the
/// concatenation of the weight-space bases in that order. A missing block means the
/// operator is zero on that weight space.
#[derive(Clone, Debug)]
pub struct WeightModule {
    pub datum: CartanDatum,
    /// The module's quantum parameter is `q^qpower`; restriction to a rank-one
    /// subalgebra rescales it by the symmetrizer of the chosen node.
    pub qpower: i64,
    weights: Vec<Weight>,
    dims: Vec<usize>,
    offsets: Vec<usize>,
    index: HashMap<Weight, usize>,
    labels: Vec<String>,
    e_ops: Vec<Vec<Option<Matrix<ExactScalar>>>>,
    f_ops: Vec<Vec<Option<Matrix<ExactScalar>>>>,
    /// Highest weight and the global index of the highest-weight vector.
    pub highest_weight: Option<(Weight, usize)>,
    pub truncation_depth: Option<usize>,
    /// For each basis vector `b`, a pair `(p, i)` with `b = F_i p`, when known.
    parents: Option<Vec<Option<(usize, usize)>>>,
}

impl WeightModule {
    /// Empty operators on the given weight spaces.
    pub fn with_spaces(
        datum: CartanDatum,
        qpower: i64,
        spaces: BTreeMap<Weight, usize>,
        labels: Vec<String>,
    ) -> Self {
        let mut weights = Vec::new();
        let mut dims = Vec::new();
        let mut offsets = Vec::new();
        let mut index = HashMap::new();
        let mut off = 0;
        for (w, d) in spaces {
            if d == 0 {
                continue;
            }
            index.insert(w.clone(), weights.len());
            weights.push(w);
            dims.push(d);
            offsets.push(off);
            off += d;
        }
        assert_eq!(labels.len(), off, "one label per basis vector");
        let r = datum.rank;
        let n = weights.len();
        WeightModule {
            datum,
            qpower,
            weights,
            dims,
            offsets,
            index,
            labels,
            e_ops: vec![vec![None; n]; r],
            f_ops: vec![vec![None; n]; r],
            highest_weight: None,
            truncation_depth: None,
            parents: None,
        }
    }

    /// The one-dimensional trivial module `L_0`.
    pub fn trivial(datum: &CartanDatum) -> Self {
        let mut spaces = BTreeMap::new();
        let zero = Weight::zero(datum.rank);
        spaces.insert(zero.clone(), 1);
        let mut m = Self::with_spaces(datum.clone(), 1, spaces, vec!["l".into()]);
        m.highest_weight = Some((zero, 0));
        m.parents = Some(vec![None]);
        m
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn rank(&self) -> usize {
        self.datum.rank
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn has_weight(&self, w: &Weight) -> bool {
        self.index.contains_key(w)
    }

    pub fn weight_index(&self, w: &Weight) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn weight_dim(&self, w: &Weight) -> usize {
        self.index.get(w).map_or(0, |&k| self.dims[k])
    }

    /// Global index range of `V[w]` (empty if `w` is not a weight).
    pub fn weight_range(&self, w: &Weight) -> Range<usize> {
        match self.index.get(w) {
            Some(&k) => self.offsets[k]..self.offsets[k] + self.dims[k],
            None => 0..0,
        }
    }

    /// Weight of the basis vector with global index `g`.
    pub fn weight_of(&self, g: usize) -> &Weight {
        // Zero-dimensional spaces are never stored, so offsets are strictly increasing.
        let k = match self.offsets.binary_search(&g) {
            Ok(k) => k,
            Err(k) => k - 1,
        };
        &self.weights[k]
    }

    /// Effective exponent `d` with `q_i = q^d` for this module.
    pub fn qi_power(&self, i: usize) -> i64 {
        self.qpower * self.datum.d(i)
    }

    /// `[n]_{q_i}`.
    pub fn qint(&self, i: usize, n: i64) -> ExactScalar {
        quantum_integer(n, self.qi_power(i))
    }

    pub fn parents(&self) -> Option<&[Option<(usize, usize)>]> {
        self.parents.as_deref()
    }

    pub(crate) fn set_parents(&mut self, p: Vec<Option<(usize, usize)>>) {
        assert_eq!(p.len(), self.dim());
        self.parents = Some(p);
    }

    pub fn e_block(&self, i: usize, w: &Weight) -> Option<&Matrix<ExactScalar>> {
        self.index.get(w).and_then(|&k| self.e_ops[i][k].as_ref())
    }

    pub fn f_block(&self, i: usize, w: &Weight) -> Option<&Matrix<ExactScalar>> {
        self.index.get(w).and_then(|&k| self.f_ops[i][k].as_ref())
    }

    fn check_shape(&self, src: &Weight, dst: &Weight, m: &Matrix<ExactScalar>) -> Result<usize> {
        let k = self
            .weight_index(src)
            .ok_or_else(|| Error::Domain(format!("{:?} is not a weight", src)))?;
        if m.rows() != self.weight_dim(dst) || m.cols() != self.dims[k] {
            return Err(Error::Domain(format!(
                "block {:?} -> {:?} has shape {}x{}",
                src,
                dst,
                m.rows(),
                m.cols()
            )));
        }
        Ok(k)
    }

    /// Installs the matrix of `E_i : V[w] -> V[w + alpha_i]`.
    pub fn set_e_block(&mut self, i: usize, w: &Weight, m: Matrix<ExactScalar>) -> Result<()> {
        let dst = w + &self.datum.simple_root(i);
        let k = self.check_shape(w, &dst, &m)?;
        self.e_ops[i][k] = if m.rows() == 0 || m.is_zero() { None } else { Some(m) };
        Ok(())
    }

    /// Installs the matrix of `F_i : V[w] -> V[w - alpha_i]`.
    pub fn set_f_block(&mut self, i: usize, w: &Weight, m: Matrix<ExactScalar>) -> Result<()> {
        let dst = w - &self.datum.simple_root(i);
        let k = self.check_shape(w, &dst, &m)?;
        self.f_ops[i][k] = if m.rows() == 0 || m.is_zero() { None } else { Some(m) };
        Ok(())
    }

    /// `E_i` applied to a vector of `V[w]` (local coordinates); result in `V[w + alpha_i]`.
    pub fn e_local(&self, i: usize, w: &Weight, v: &[ExactScalar]) -> Vector {
        let dst = w + &self.datum.simple_root(i);
        match self.e_block(i, w) {
            Some(m) => m.mul_vec(v),
            None => vec![ExactScalar::zero(); self.weight_dim(&dst)],
        }
    }

    /// `F_i` applied to a vector of `V[w]` (local coordinates); result in `V[w - alpha_i]`.
    pub fn f_local(&self, i: usize, w: &Weight, v: &[ExactScalar]) -> Vector {
        let dst = w - &self.datum.simple_root(i);
        match self.f_block(i, w) {
            Some(m) => m.mul_vec(v),
            None => vec![ExactScalar::zero(); self.weight_dim(&dst)],
        }
    }

    fn apply_global(&self, i: usize, v: &[ExactScalar], raise: bool) -> Vector {
        assert_eq!(v.len(), self.dim());
        let mut out = vec![ExactScalar::zero(); self.dim()];
        let alpha = self.datum.simple_root(i);
        for (k, w) in self.weights.iter().enumerate() {
            let r = self.offsets[k]..self.offsets[k] + self.dims[k];
            let local = &v[r];
            if local.iter().all(ExactScalar::is_zero) {
                continue;
            }
            let (block, dst) = if raise {
                (self.e_ops[i][k].as_ref(), w + &alpha)
            } else {
                (self.f_ops[i][k].as_ref(), w - &alpha)
            };
            if let Some(m) = block {
                let img = m.mul_vec(local);
                let dr = self.weight_range(&dst);
                for (o, x) in out[dr].iter_mut().zip(img) {
                    if !x.is_zero() {
                        *o = &*o + &x;
                    }
                }
            }
        }
        out
    }

    pub fn apply_e(&self, i: usize, v: &[ExactScalar]) -> Vector {
        self.apply_global(i, v, true)
    }

    pub fn apply_f(&self, i: usize, v: &[ExactScalar]) -> Vector {
        self.apply_global(i, v, false)
    }

    pub fn zero_vector(&self) -> Vector {
        vec![ExactScalar::zero(); self.dim()]
    }

    pub fn basis_vector(&self, g: usize) -> Vector {
        let mut v = self.zero_vector();
        v[g] = ExactScalar::one();
        v
    }

    /// Restricts a global vector to the coordinates of `V[w]`.
    pub fn local(&self, w: &Weight, v: &[ExactScalar]) -> Vector {
        v[self.weight_range(w)].to_vec()
    }

    /// Embeds local coordinates of `V[w]` into a global vector.
    pub fn embed(&self, w: &Weight, local: &[ExactScalar]) -> Vector {
        let mut v = self.zero_vector();
        let r = self.weight_range(w);
        assert_eq!(r.len(), local.len());
        v[r].clone_from_slice(local);
        v
    }

    /// Smallest `n` with `E_i^n = 0` on the whole module.
    pub fn e_nilpotency(&self, i: usize) -> usize {
        let mut n = 0;
        let mut vs: Vec<Vector> = (0..self.dim()).map(|g| self.basis_vector(g)).collect();
        while vs.iter().any(|v| !v.iter().all(ExactScalar::is_zero)) {
            vs = vs.iter().map(|v| self.apply_e(i, v)).collect();
            n += 1;
        }
        n
    }

    /// Matrix of `E_i^n : V[w] -> V[w + n alpha_i]`.
    pub fn e_power_block(&self, i: usize, w: &Weight, n: usize) -> Matrix<ExactScalar> {
        let alpha = self.datum.simple_root(i);
        let mut cur = w.clone();
        let mut m: Matrix<ExactScalar> = Matrix::identity(self.weight_dim(w));
        for _ in 0..n {
            let dst = &cur + &alpha;
            let step = match self.e_block(i, &cur) {
                Some(b) => b.clone(),
                None => Matrix::zeros(self.weight_dim(&dst), self.weight_dim(&cur)),
            };
            m = step.mul(&m);
            cur = dst;
        }
        m
    }

    /// Weight multiplicities as a map.
    pub fn character(&self) -> BTreeMap<Weight, usize> {
        self.weights.iter().cloned().zip(self.dims.iter().copied()).collect()
    }

    /// Substitutes `q = 1` in every structure constant.
    pub fn classical_blocks(&self) -> Result<Vec<(usize, Weight, bool, Matrix<num_rational::BigRational>)>> {
        let mut out = Vec::new();
        for i in 0..self.rank() {
            for (k, w) in self.weights.iter().enumerate() {
                for (raise, ops) in [(true, &self.e_ops), (false, &self.f_ops)] {
                    if let Some(m) = &ops[i][k] {
                        let mut c = Matrix::zeros(m.rows(), m.cols());
                        for r in 0..m.rows() {
                            for col in 0..m.cols() {
                                c.set(r, col, m.get(r, col).eval_at_one()?);
                            }
                        }
                        out.push((i, w.clone(), raise, c));
                    }
                }
            }
        }
        Ok(out)
    }
}
