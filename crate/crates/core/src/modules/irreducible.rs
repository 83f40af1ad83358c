//! Finite-dimensional irreducible modules, built one weight level at a time.
//!
//! At each weight the spanning set `{F_i b}` (with `b` running over the bases one level up)
//! is paired against itself with the contravariant form. The greedy pivot rows of that Gram
//! matrix form the basis; everything in the radical is dropped on the spot, so the result
//! is the quotient of the Verma module by its maximal submodule.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::cartan::{CartanDatum, Weight};
use crate::error::{Error, Result};
use crate::linalg::{independent_subset, Matrix};
use crate::qfield::{quantum_integer, ExactScalar};

use super::WeightModule;

struct Space {
    /// `(i, parent local index)`: this basis vector is `F_i` of the parent in `V[w + alpha_i]`.
    origin: Vec<Option<(usize, usize)>>,
    words: Vec<Vec<usize>>,
    gram: Matrix<ExactScalar>,
    /// `F_i : V[w + alpha_i] -> V[w]`, keyed by `i`.
    f_in: HashMap<usize, Matrix<ExactScalar>>,
    /// `E_i : V[w] -> V[w + alpha_i]`, keyed by `i`.
    e_out: HashMap<usize, Matrix<ExactScalar>>,
}

pub fn irreducible(datum: &CartanDatum, highest: &Weight) -> Result<WeightModule> {
    irreducible_with_qpower(datum, highest, 1)
}

/// Irreducible module whose quantum parameter is `q^qpower`.
pub fn irreducible_with_qpower(datum: &CartanDatum, highest: &Weight, qpower: i64) -> Result<WeightModule> {
    if highest.rank() != datum.rank {
        return Err(Error::Domain(format!("weight {:?} has wrong rank for {}", highest, datum.name)));
    }
    if !highest.is_dominant() {
        return Err(Error::Domain(format!("{:?} is not dominant", highest)));
    }
    let r = datum.rank;
    let roots: Vec<Weight> = (0..r).map(|i| datum.simple_root(i)).collect();
    let qint = |i: usize, n: i64| quantum_integer(n, qpower * datum.d(i));

    let mut spaces: BTreeMap<Weight, Space> = BTreeMap::new();
    spaces.insert(
        highest.clone(),
        Space {
            origin: vec![None],
            words: vec![Vec::new()],
            gram: Matrix::identity(1),
            f_in: HashMap::new(),
            e_out: HashMap::new(),
        },
    );
    let mut level: BTreeSet<Weight> = [highest.clone()].into_iter().collect();
    let mut order: Vec<Weight> = vec![highest.clone()];

    loop {
        let next: BTreeSet<Weight> = level
            .iter()
            .flat_map(|w| roots.iter().map(move |a| w - a))
            .collect();
        let mut found = BTreeSet::new();
        for nu in &next {
            // Candidates F_i b, sorted by their F-words.
            let mut cands: Vec<(Vec<usize>, usize, usize)> = Vec::new();
            for i in 0..r {
                let up = nu + &roots[i];
                if let Some(sp) = spaces.get(&up) {
                    for (b, w) in sp.words.iter().enumerate() {
                        let mut word = vec![i];
                        word.extend_from_slice(w);
                        cands.push((word, i, b));
                    }
                }
            }
            if cands.is_empty() {
                continue;
            }
            cands.sort();
            let n = cands.len();
            // Gram matrix: <F_i b, F_j b'> = <b, E_i F_j b'>, where
            // E_i F_j b' = F_j E_i b' + delta_ij [(nu + alpha_j)(h_i)]_{q_i} b'.
            let mut gram = Matrix::zeros(n, n);
            for (x, (_, i, b)) in cands.iter().enumerate() {
                let up_i = nu + &roots[*i];
                let sp_i = &spaces[&up_i];
                for (y, (_, j, b2)) in cands.iter().enumerate().skip(x) {
                    let v = e_f_on_parent(&spaces, &roots, nu, *i, *j, *b2, &qint);
                    let mut acc = ExactScalar::zero();
                    for (k, c) in v.iter().enumerate() {
                        if !c.is_zero() {
                            acc = &acc + &(sp_i.gram.get(*b, k) * c);
                        }
                    }
                    gram.set(x, y, acc.clone());
                    gram.set(y, x, acc);
                }
            }
            let cols: Vec<Vec<ExactScalar>> = (0..n).map(|c| gram.col(c)).collect();
            let basis = independent_subset(&cols, n);
            if basis.is_empty() {
                continue;
            }
            let d = basis.len();
            let mut g_b = Matrix::zeros(d, d);
            for (x, &bx) in basis.iter().enumerate() {
                for (y, &by) in basis.iter().enumerate() {
                    g_b.set(x, y, gram.get(bx, by).clone());
                }
            }
            let pos: HashMap<usize, usize> = basis.iter().enumerate().map(|(p, &c)| (c, p)).collect();
            let mut f_in = HashMap::new();
            for i in 0..r {
                let up = nu + &roots[i];
                let Some(sp) = spaces.get(&up) else { continue };
                let mut m = Matrix::zeros(d, sp.words.len());
                for b in 0..sp.words.len() {
                    let c = cands.iter().position(|(_, ci, cb)| *ci == i && *cb == b).unwrap();
                    if let Some(&p) = pos.get(&c) {
                        m.set(p, b, ExactScalar::one());
                    } else {
                        let rhs: Vec<ExactScalar> = basis.iter().map(|&bx| gram.get(bx, c).clone()).collect();
                        let x = g_b
                            .solve(&rhs)
                            .ok_or_else(|| Error::TheoremViolation("contravariant form solve failed".into()))?;
                        for (p, v) in x.into_iter().enumerate() {
                            m.set(p, b, v);
                        }
                    }
                }
                f_in.insert(i, m);
            }
            let origin: Vec<Option<(usize, usize)>> =
                basis.iter().map(|&c| Some((cands[c].1, cands[c].2))).collect();
            let words: Vec<Vec<usize>> = basis.iter().map(|&c| cands[c].0.clone()).collect();
            spaces.insert(
                nu.clone(),
                Space {
                    origin,
                    words,
                    gram: g_b,
                    f_in,
                    e_out: HashMap::new(),
                },
            );
            // E_i on the new basis: E_i F_j p = F_j E_i p + delta_ij [(nu + alpha_j)(h_i)] p.
            let mut e_out = HashMap::new();
            for i in 0..r {
                let up_i = nu + &roots[i];
                let Some(sp_i) = spaces.get(&up_i) else { continue };
                let di = sp_i.words.len();
                let mut m = Matrix::zeros(di, d);
                for (col, o) in spaces[nu].origin.iter().enumerate() {
                    let (j, p) = o.unwrap();
                    let v = e_f_on_parent(&spaces, &roots, nu, i, j, p, &qint);
                    for (row, x) in v.into_iter().enumerate() {
                        m.set(row, col, x);
                    }
                }
                e_out.insert(i, m);
            }
            spaces.get_mut(nu).unwrap().e_out = e_out;
            found.insert(nu.clone());
            order.push(nu.clone());
        }
        if found.is_empty() {
            break;
        }
        level = found;
    }

    assemble(datum, highest, qpower, spaces)
}

/// Coordinates in `V[nu + alpha_i]` of `E_i F_j p`, for `p` the `p`-th basis vector of
/// `V[nu + alpha_j]`.
fn e_f_on_parent(
    spaces: &BTreeMap<Weight, Space>,
    roots: &[Weight],
    nu: &Weight,
    i: usize,
    j: usize,
    p: usize,
    qint: &dyn Fn(usize, i64) -> ExactScalar,
) -> Vec<ExactScalar> {
    let up_i = nu + &roots[i];
    let up_j = nu + &roots[j];
    let dim_i = spaces.get(&up_i).map_or(0, |s| s.words.len());
    let mut out = vec![ExactScalar::zero(); dim_i];
    if dim_i == 0 {
        return out;
    }
    // F_j E_i p, with E_i p in V[nu + alpha_i + alpha_j] and F_j landing in V[nu + alpha_i].
    if let (Some(sp_j), Some(sp_i)) = (spaces.get(&up_j), spaces.get(&up_i)) {
        if let (Some(e), Some(f)) = (sp_j.e_out.get(&i), sp_i.f_in.get(&j)) {
            let ep = e.col(p);
            let fe = f.mul_vec(&ep);
            for (o, x) in out.iter_mut().zip(fe) {
                *o = &*o + &x;
            }
        }
    }
    if i == j {
        let c = qint(i, up_j.get(i));
        out[p] = &out[p] + &c;
    }
    out
}

fn assemble(
    datum: &CartanDatum,
    highest: &Weight,
    qpower: i64,
    spaces: BTreeMap<Weight, Space>,
) -> Result<WeightModule> {
    let dims: BTreeMap<Weight, usize> = spaces.iter().map(|(w, s)| (w.clone(), s.words.len())).collect();
    let mut labels = Vec::new();
    for s in spaces.values() {
        for w in &s.words {
            let mut l: String = w.iter().map(|i| format!("F{}", i + 1)).collect();
            l.push_str(if w.is_empty() { "l" } else { ".l" });
            labels.push(l);
        }
    }
    let mut m = WeightModule::with_spaces(datum.clone(), qpower, dims, labels);
    let roots: Vec<Weight> = (0..datum.rank).map(|i| datum.simple_root(i)).collect();
    let mut parents = vec![None; m.dim()];
    for (w, s) in &spaces {
        let base = m.weight_range(w).start;
        for (k, o) in s.origin.iter().enumerate() {
            if let Some((i, p)) = o {
                let up = w + &roots[*i];
                parents[base + k] = Some((m.weight_range(&up).start + p, *i));
            }
        }
        for (i, e) in &s.e_out {
            m.set_e_block(*i, w, e.clone())?;
        }
        for (i, f) in &s.f_in {
            let up = w + &roots[*i];
            m.set_f_block(*i, &up, f.clone())?;
        }
    }
    m.set_parents(parents);
    let hw = m.weight_range(highest).start;
    m.highest_weight = Some((highest.clone(), hw));
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::check_relations;

    #[test]
    fn sl2_dimensions() {
        let a1 = CartanDatum::rank_one();
        for mu in 0..6 {
            let m = irreducible(&a1, &Weight(vec![mu])).unwrap();
            assert_eq!(m.dim(), (mu + 1) as usize);
            assert!(check_relations(&m).is_empty());
        }
    }

    #[test]
    fn a2_fundamental_and_adjoint() {
        let a2 = CartanDatum::from_name("A2").unwrap();
        let v = irreducible(&a2, &Weight(vec![1, 0])).unwrap();
        assert_eq!(v.dim(), 3);
        let adj = irreducible(&a2, &Weight(vec![1, 1])).unwrap();
        assert_eq!(adj.dim(), 8);
        assert_eq!(adj.weight_dim(&Weight(vec![0, 0])), 2);
        assert!(check_relations(&adj).is_empty());
    }

    #[test]
    fn rejects_non_dominant() {
        let a1 = CartanDatum::rank_one();
        assert!(irreducible(&a1, &Weight(vec![-1])).is_err());
    }
}
