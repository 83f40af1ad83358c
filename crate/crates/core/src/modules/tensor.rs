use std::collections::BTreeMap;

use crate::cartan::Weight;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::qfield::ExactScalar;

use super::WeightModule;

/// `M (x) N` with `Delta(E_i) = E_i (x) K_i + 1 (x) E_i` and `Delta(F_i) = F_i (x) 1 + K_i^{-1} (x) F_i`,
/// where `K_i` acts on a vector of weight `nu` by `q_i^{nu(h_i)}`.
///
/// The basis of each weight space lists pairs `(a, b)` ordered by the weight of `a`, then by
/// the indices of `a` and `b`.
pub fn tensor(m: &WeightModule, n: &WeightModule) -> Result<WeightModule> {
    if m.datum != n.datum || m.qpower != n.qpower {
        return Err(Error::Domain("tensor factors live over different data".into()));
    }
    let datum = m.datum.clone();
    // pairs per total weight
    let mut pairs: BTreeMap<Weight, Vec<(usize, usize)>> = BTreeMap::new();
    for wm in m.weights() {
        for wn in n.weights() {
            let tot = wm + wn;
            let e = pairs.entry(tot).or_default();
            for a in m.weight_range(wm) {
                for b in n.weight_range(wn) {
                    e.push((a, b));
                }
            }
        }
    }
    let dims: BTreeMap<Weight, usize> = pairs.iter().map(|(w, p)| (w.clone(), p.len())).collect();
    let labels: Vec<String> = pairs
        .values()
        .flatten()
        .map(|&(a, b)| format!("{}|{}", m.labels()[a], n.labels()[b]))
        .collect();
    let mut t = WeightModule::with_spaces(datum.clone(), m.qpower, dims, labels);
    let pos: BTreeMap<(usize, usize), usize> = pairs
        .values()
        .flat_map(|p| p.iter().enumerate().map(|(k, &ab)| (ab, k)))
        .collect();

    for (w, ps) in &pairs {
        for i in 0..datum.rank {
            let alpha = datum.simple_root(i);
            for raise in [true, false] {
                let dst = if raise { w + &alpha } else { w - &alpha };
                let Some(dps) = pairs.get(&dst) else { continue };
                let mut block = Matrix::zeros(dps.len(), ps.len());
                for (col, &(a, b)) in ps.iter().enumerate() {
                    let wa = m.weight_of(a).clone();
                    let wb = n.weight_of(b).clone();
                    let (ra, rb) = (m.weight_range(&wa), n.weight_range(&wb));
                    let (la, lb) = (a - ra.start, b - rb.start);
                    let unit = |len: usize, k: usize| {
                        let mut v = vec![ExactScalar::zero(); len];
                        v[k] = ExactScalar::one();
                        v
                    };
                    // First-factor term.
                    let first = if raise {
                        m.e_local(i, &wa, &unit(ra.len(), la))
                    } else {
                        m.f_local(i, &wa, &unit(ra.len(), la))
                    };
                    let (wa2, k_fac) = if raise {
                        (&wa + &alpha, ExactScalar::q_pow(m.qi_power(i) * wb.get(i)))
                    } else {
                        (&wa - &alpha, ExactScalar::one())
                    };
                    let base_a = m.weight_range(&wa2).start;
                    for (k, x) in first.iter().enumerate() {
                        if x.is_zero() {
                            continue;
                        }
                        let row = pos[&(base_a + k, b)];
                        block.set(row, col, block.get(row, col) + &(x * &k_fac));
                    }
                    // Second-factor term.
                    let second = if raise {
                        n.e_local(i, &wb, &unit(rb.len(), lb))
                    } else {
                        n.f_local(i, &wb, &unit(rb.len(), lb))
                    };
                    let (wb2, k_fac) = if raise {
                        (&wb + &alpha, ExactScalar::one())
                    } else {
                        (&wb - &alpha, ExactScalar::q_pow(-m.qi_power(i) * wa.get(i)))
                    };
                    let base_b = n.weight_range(&wb2).start;
                    for (k, x) in second.iter().enumerate() {
                        if x.is_zero() {
                            continue;
                        }
                        let row = pos[&(a, base_b + k)];
                        block.set(row, col, block.get(row, col) + &(x * &k_fac));
                    }
                }
                if raise {
                    t.set_e_block(i, w, block)?;
                } else {
                    t.set_f_block(i, w, block)?;
                }
            }
        }
    }
    Ok(t)
}

/// Position of the pair `(a, b)` inside its weight space of `m (x) n`, matching [`tensor`].
pub(crate) fn pair_local_index(m: &WeightModule, n: &WeightModule, a: usize, b: usize) -> usize {
    let tot = m.weight_of(a) + n.weight_of(b);
    let mut k = 0;
    for wm in m.weights() {
        let wn = &tot - wm;
        if !n.has_weight(&wn) {
            continue;
        }
        let (ra, rb) = (m.weight_range(wm), n.weight_range(&wn));
        if ra.contains(&a) {
            return k + (a - ra.start) * rb.len() + (b - rb.start);
        }
        k += ra.len() * rb.len();
    }
    unreachable!("pair not in tensor product")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::CartanDatum;
    use crate::modules::{check_relations, irreducible};

    #[test]
    fn trivial_factor_is_identity() {
        let a1 = CartanDatum::rank_one();
        let l0 = WeightModule::trivial(&a1);
        let l3 = irreducible(&a1, &Weight(vec![3])).unwrap();
        let t = tensor(&l0, &l3).unwrap();
        for w in l3.weights() {
            assert_eq!(t.e_block(0, w), l3.e_block(0, w));
            assert_eq!(t.f_block(0, w), l3.f_block(0, w));
        }
    }

    #[test]
    fn sl2_tensor_products() {
        let a1 = CartanDatum::rank_one();
        let l1 = irreducible(&a1, &Weight(vec![1])).unwrap();
        let l2 = irreducible(&a1, &Weight(vec![2])).unwrap();
        let l4 = irreducible(&a1, &Weight(vec![4])).unwrap();
        assert!(check_relations(&tensor(&l1, &l1).unwrap()).is_empty());
        let t22 = tensor(&l2, &l2).unwrap();
        assert_eq!(t22.weight_dim(&Weight(vec![0])), 3);
        assert!(check_relations(&tensor(&l2, &l4).unwrap()).is_empty());
    }

    #[test]
    fn pair_index_matches() {
        let a2 = CartanDatum::from_name("A2").unwrap();
        let v = irreducible(&a2, &Weight(vec![1, 0])).unwrap();
        let w = irreducible(&a2, &Weight(vec![0, 1])).unwrap();
        let t = tensor(&v, &w).unwrap();
        for a in 0..v.dim() {
            for b in 0..w.dim() {
                let tot = v.weight_of(a) + w.weight_of(b);
                let k = pair_local_index(&v, &w, a, b);
                let g = t.weight_range(&tot).start + k;
                assert_eq!(t.labels()[g], format!("{}|{}", v.labels()[a], w.labels()[b]));
            }
        }
    }
}
