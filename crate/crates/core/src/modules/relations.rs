//! Weight-space-by-weight-space verification of the defining relations.

use serde::Serialize;

use crate::cartan::Weight;
use crate::qfield::{quantum_binomial, ExactScalar};

use super::WeightModule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ViolationKind {
    /// `E_i F_j - F_j E_i != delta_ij [nu(h_i)]_{q_i}` on `V[nu]`.
    Commutator,
    /// The F-Serre relation fails on `V[nu]`.
    SerreF,
    /// The E-Serre relation fails on `V[nu]`.
    SerreE,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub i: usize,
    pub j: usize,
    pub weight: Weight,
    /// Height below the highest weight, when the module has one.
    pub level: Option<i64>,
}

type Op<'a> = (bool, usize);

fn apply_word(m: &WeightModule, word: &[Op<'_>], w: &Weight, v: Vec<ExactScalar>) -> (Weight, Vec<ExactScalar>) {
    // Rightmost operator acts first.
    let mut cur = w.clone();
    let mut v = v;
    for &(raise, i) in word.iter().rev() {
        if raise {
            v = m.e_local(i, &cur, &v);
            cur = &cur + &m.datum.simple_root(i);
        } else {
            v = m.f_local(i, &cur, &v);
            cur = &cur - &m.datum.simple_root(i);
        }
    }
    (cur, v)
}

fn serre_terms(m: &WeightModule, raise: bool, i: usize, j: usize) -> Vec<(ExactScalar, Vec<Op<'static>>)> {
    let n = (1 - m.datum.a(i, j)) as usize;
    (0..=n)
        .map(|k| {
            let mut c = quantum_binomial(n as i64, k as i64, m.qi_power(i));
            if k % 2 == 1 {
                c = -c;
            }
            let mut w: Vec<Op> = vec![(raise, i); n - k];
            w.push((raise, j));
            w.extend(std::iter::repeat((raise, i)).take(k));
            (c, w)
        })
        .collect()
}

/// Lists every weight space on which a commutator or Serre relation fails.
pub fn check_relations(m: &WeightModule) -> Vec<Violation> {
    let r = m.rank();
    let level = |w: &Weight| {
        m.highest_weight
            .as_ref()
            .and_then(|(hw, _)| m.datum.height(&(hw - w)))
    };
    let mut out = Vec::new();
    for w in m.weights() {
        let d = m.weight_dim(w);
        for i in 0..r {
            for j in 0..r {
                let mut bad = false;
                for b in 0..d {
                    let mut e = vec![ExactScalar::zero(); d];
                    e[b] = ExactScalar::one();
                    let (_, ef) = apply_word(m, &[(true, i), (false, j)], w, e.clone());
                    let (_, fe) = apply_word(m, &[(false, j), (true, i)], w, e);
                    let mut lhs: Vec<ExactScalar> = ef.iter().zip(&fe).map(|(a, c)| a - c).collect();
                    if i == j {
                        lhs[b] = &lhs[b] - &m.qint(i, w.get(i));
                    }
                    if lhs.iter().any(|x| !x.is_zero()) {
                        bad = true;
                        break;
                    }
                }
                if bad {
                    out.push(Violation {
                        kind: ViolationKind::Commutator,
                        i,
                        j,
                        weight: w.clone(),
                        level: level(w),
                    });
                }
                if i == j {
                    continue;
                }
                for (raise, kind) in [(false, ViolationKind::SerreF), (true, ViolationKind::SerreE)] {
                    let terms = serre_terms(m, raise, i, j);
                    let mut bad = false;
                    for b in 0..d {
                        let mut acc: Option<Vec<ExactScalar>> = None;
                        for (c, word) in &terms {
                            let mut e = vec![ExactScalar::zero(); d];
                            e[b] = ExactScalar::one();
                            let (_, v) = apply_word(m, word, w, e);
                            let v: Vec<ExactScalar> = v.iter().map(|x| x * c).collect();
                            acc = Some(match acc {
                                None => v,
                                Some(a) => a.iter().zip(&v).map(|(x, y)| x + y).collect(),
                            });
                        }
                        if acc.map_or(false, |a| a.iter().any(|x| !x.is_zero())) {
                            bad = true;
                            break;
                        }
                    }
                    if bad {
                        out.push(Violation {
                            kind,
                            i,
                            j,
                            weight: w.clone(),
                            level: level(w),
                        });
                    }
                }
            }
        }
    }
    out
}
