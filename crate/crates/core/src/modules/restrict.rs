use std::collections::BTreeMap;

use crate::cartan::{CartanDatum, Weight};
use crate::linalg::Matrix;
use crate::qfield::ExactScalar;

use super::WeightModule;

/// Restriction to the rank-one subalgebra generated by `E_i`, `F_i` and `K_i`.
pub fn restrict_sl2(m: &WeightModule, i: usize) -> WeightModule {
    restrict_sl2_with_map(m, i).0
}

/// Restriction together with `perm`, where `perm[new] = old` identifies the basis vectors.
///
/// A vector of weight `nu` gets rank-one weight `nu(h_i)`; the quantum parameter becomes
/// `q_i`. Within a rank-one weight space the original weight spaces appear in ascending order.
pub fn restrict_sl2_with_map(m: &WeightModule, i: usize) -> (WeightModule, Vec<usize>) {
    let a1 = CartanDatum::rank_one();
    let mut groups: BTreeMap<i64, Vec<Weight>> = BTreeMap::new();
    for w in m.weights() {
        groups.entry(w.get(i)).or_default().push(w.clone());
    }
    let mut perm = Vec::new();
    let mut labels = Vec::new();
    let mut dims = BTreeMap::new();
    // offset of each original weight space inside its rank-one weight space
    let mut inner: BTreeMap<Weight, usize> = BTreeMap::new();
    for (k, ws) in &groups {
        let mut off = 0;
        for w in ws {
            inner.insert(w.clone(), off);
            for g in m.weight_range(w) {
                perm.push(g);
                labels.push(format!("{:?}:{}", w.coords(), m.labels()[g]));
            }
            off += m.weight_dim(w);
        }
        dims.insert(Weight(vec![*k]), off);
    }
    let mut out = WeightModule::with_spaces(a1, m.qi_power(i), dims, labels);
    let alpha = m.datum.simple_root(i);
    for (k, ws) in &groups {
        let src = Weight(vec![*k]);
        let n = out.weight_dim(&src);
        for raise in [true, false] {
            let dst = Weight(vec![if raise { k + 2 } else { k - 2 }]);
            let nd = out.weight_dim(&dst);
            if nd == 0 {
                continue;
            }
            let mut block = Matrix::zeros(nd, n);
            for w in ws {
                let (b, w2) = if raise {
                    (m.e_block(i, w), w + &alpha)
                } else {
                    (m.f_block(i, w), w - &alpha)
                };
                let Some(b) = b else { continue };
                let (c0, r0) = (inner[w], inner[&w2]);
                for r in 0..b.rows() {
                    for c in 0..b.cols() {
                        let x: &ExactScalar = b.get(r, c);
                        if !x.is_zero() {
                            block.set(r0 + r, c0 + c, x.clone());
                        }
                    }
                }
            }
            let res = if raise {
                out.set_e_block(0, &src, block)
            } else {
                out.set_f_block(0, &src, block)
            };
            res.expect("restricted block shapes agree");
        }
    }
    (out, perm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::{check_relations, irreducible};

    #[test]
    fn adjoint_a2_restriction() {
        let a2 = CartanDatum::from_name("A2").unwrap();
        let adj = irreducible(&a2, &Weight(vec![1, 1])).unwrap();
        let r = restrict_sl2(&adj, 0);
        assert_eq!(r.weight_dim(&Weight(vec![0])), 2);
        assert!(check_relations(&r).is_empty());
    }

    #[test]
    fn rank_one_restriction_is_identity() {
        let a1 = CartanDatum::rank_one();
        let l = irreducible(&a1, &Weight(vec![3])).unwrap();
        let r = restrict_sl2(&l, 0);
        for w in l.weights() {
            assert_eq!(r.e_block(0, w), l.e_block(0, w));
        }
    }

    #[test]
    fn fundamental_a2_string_structure() {
        let a2 = CartanDatum::from_name("A2").unwrap();
        let v = irreducible(&a2, &Weight(vec![1, 0])).unwrap();
        let r = restrict_sl2(&v, 0);
        // L_1 + L_0: weights 1, -1 and 0, each one-dimensional.
        let ch: Vec<(i64, usize)> = r.character().into_iter().map(|(w, d)| (w.get(0), d)).collect();
        assert_eq!(ch, vec![(-1, 1), (0, 1), (1, 1)]);
    }

    #[test]
    fn b2_short_root_rescales_q() {
        let b2 = CartanDatum::from_name("B2").unwrap();
        let v = irreducible(&b2, &Weight(vec![0, 1])).unwrap();
        assert_eq!(restrict_sl2(&v, 0).qpower, 2);
        assert_eq!(restrict_sl2(&v, 1).qpower, 1);
        assert!(check_relations(&restrict_sl2(&v, 0)).is_empty());
    }
}
