//! Truncated Verma modules on F-words modulo the quantum Serre relations.

use std::collections::{BTreeMap, HashMap};

use crate::cartan::{CartanDatum, Weight};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::qfield::{quantum_binomial, quantum_integer, ExactScalar};

use super::WeightModule;

type Word = Vec<usize>;

/// Per-weight presentation: all words of that weight, the surviving basis words and, for
/// each word, its coordinates in that basis.
struct WordSpace {
    basis: Vec<Word>,
    reduce: HashMap<Word, Vec<ExactScalar>>,
}

fn word_weight(datum: &CartanDatum, top: &Weight, w: &[usize]) -> Weight {
    w.iter().fold(top.clone(), |acc, &i| &acc - &datum.simple_root(i))
}

/// The Serre element `sum_k (-1)^k [n choose k]_{q_i} F_i^{n-k} F_j F_i^k` as (coefficient, word).
fn serre_element(datum: &CartanDatum, qpower: i64, i: usize, j: usize) -> Vec<(ExactScalar, Word)> {
    let n = (1 - datum.a(i, j)) as usize;
    (0..=n)
        .map(|k| {
            let mut c = quantum_binomial(n as i64, k as i64, qpower * datum.d(i));
            if k % 2 == 1 {
                c = -c;
            }
            let mut w = vec![i; n - k];
            w.push(j);
            w.extend(std::iter::repeat(i).take(k));
            (c, w)
        })
        .collect()
}

/// `M_lambda` truncated to F-words of length at most `depth`.
///
/// Basis words at each weight are the lexicographically smallest words that stay independent
/// modulo the two-sided Serre ideal. Operators leaving the truncation are dropped, so the
/// module relations fail only next to the depth boundary.
pub fn verma_truncated(datum: &CartanDatum, highest: &Weight, depth: usize) -> Result<WeightModule> {
    verma_with_qpower(datum, highest, depth, 1)
}

pub(crate) fn verma_with_qpower(
    datum: &CartanDatum,
    highest: &Weight,
    depth: usize,
    qpower: i64,
) -> Result<WeightModule> {
    if highest.rank() != datum.rank {
        return Err(Error::Domain("weight rank mismatch".into()));
    }
    let r = datum.rank;
    let serre: Vec<(usize, usize, Vec<(ExactScalar, Word)>)> = (0..r)
        .flat_map(|i| (0..r).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, serre_element(datum, qpower, i, j)))
        .collect();

    // Words grouped by weight, level by level.
    let mut levels: Vec<BTreeMap<Weight, Vec<Word>>> = vec![BTreeMap::new()];
    levels[0].insert(highest.clone(), vec![Vec::new()]);
    for k in 1..=depth {
        let mut next: BTreeMap<Weight, Vec<Word>> = BTreeMap::new();
        for words in levels[k - 1].values() {
            for w in words {
                for i in 0..r {
                    let mut nw = vec![i];
                    nw.extend_from_slice(w);
                    next.entry(word_weight(datum, highest, &nw)).or_default().push(nw);
                }
            }
        }
        for ws in next.values_mut() {
            ws.sort();
        }
        levels.push(next);
    }

    let mut spaces: BTreeMap<Weight, WordSpace> = BTreeMap::new();
    for (k, level) in levels.iter().enumerate() {
        for (nu, words) in level {
            let col: HashMap<&Word, usize> = words.iter().enumerate().map(|(c, w)| (w, c)).collect();
            let mut rows: Vec<Vec<ExactScalar>> = Vec::new();
            for (_, _, s) in &serre {
                let len = s[0].1.len();
                if len > k {
                    continue;
                }
                for base in levels[k - len].values().flatten() {
                    for p in 0..=base.len() {
                        let mut row = vec![ExactScalar::zero(); words.len()];
                        let mut hit = false;
                        for (c, sw) in s {
                            let mut w = base[..p].to_vec();
                            w.extend_from_slice(sw);
                            w.extend_from_slice(&base[p..]);
                            if let Some(&x) = col.get(&w) {
                                row[x] = &row[x] + c;
                                hit = true;
                            }
                        }
                        if hit {
                            rows.push(row);
                        }
                    }
                }
            }
            spaces.insert(nu.clone(), reduce_space(words, rows));
        }
    }

    let dims: BTreeMap<Weight, usize> = spaces.iter().map(|(w, s)| (w.clone(), s.basis.len())).collect();
    let labels: Vec<String> = spaces
        .values()
        .flat_map(|s| s.basis.iter())
        .map(|w| {
            let mut l: String = w.iter().map(|i| format!("F{}", i + 1)).collect();
            l.push_str(if w.is_empty() { "m" } else { ".m" });
            l
        })
        .collect();
    let mut m = WeightModule::with_spaces(datum.clone(), qpower, dims, labels);
    let qint = |i: usize, n: i64| quantum_integer(n, qpower * datum.d(i));

    for (nu, sp) in &spaces {
        if sp.basis.is_empty() {
            continue;
        }
        for i in 0..r {
            // F_i: prepend i and reduce.
            let down = nu - &datum.simple_root(i);
            if let Some(dsp) = spaces.get(&down).filter(|s| !s.basis.is_empty()) {
                let mut f = Matrix::zeros(dsp.basis.len(), sp.basis.len());
                for (c, w) in sp.basis.iter().enumerate() {
                    let mut nw = vec![i];
                    nw.extend_from_slice(w);
                    if let Some(v) = dsp.reduce.get(&nw) {
                        for (row, x) in v.iter().enumerate() {
                            f.set(row, c, x.clone());
                        }
                    }
                }
                m.set_f_block(i, nu, f)?;
            }
            // E_i: remove one occurrence of F_i at a time.
            let up = nu + &datum.simple_root(i);
            if let Some(usp) = spaces.get(&up).filter(|s| !s.basis.is_empty()) {
                let mut e = Matrix::zeros(usp.basis.len(), sp.basis.len());
                for (c, w) in sp.basis.iter().enumerate() {
                    for p in 0..w.len() {
                        if w[p] != i {
                            continue;
                        }
                        let tail_weight = word_weight(datum, highest, &w[p + 1..]);
                        let coef = qint(i, tail_weight.get(i));
                        if coef.is_zero() {
                            continue;
                        }
                        let mut nw = w[..p].to_vec();
                        nw.extend_from_slice(&w[p + 1..]);
                        let v = &usp.reduce[&nw];
                        for (row, x) in v.iter().enumerate() {
                            if !x.is_zero() {
                                let cur = e.get(row, c) + &(x * &coef);
                                e.set(row, c, cur);
                            }
                        }
                    }
                }
                m.set_e_block(i, nu, e)?;
            }
        }
    }

    // Parent links where the tail of a basis word is itself a basis word.
    let mut parents = vec![None; m.dim()];
    let mut global: HashMap<Word, usize> = HashMap::new();
    for (nu, sp) in &spaces {
        let base = m.weight_range(nu).start;
        for (k, w) in sp.basis.iter().enumerate() {
            global.insert(w.clone(), base + k);
        }
    }
    for (w, &g) in &global {
        if let Some((&i, tail)) = w.split_first() {
            if let Some(&p) = global.get(&tail.to_vec()) {
                parents[g] = Some((p, i));
            }
        }
    }
    m.set_parents(parents);
    m.highest_weight = Some((highest.clone(), m.weight_range(highest).start));
    m.truncation_depth = Some(depth);
    Ok(m)
}

/// Quotients the word space by the relation rows. Columns are eliminated from the
/// lexicographically largest word down, so the smallest words survive as the basis.
fn reduce_space(words: &[Word], rows: Vec<Vec<ExactScalar>>) -> WordSpace {
    let n = words.len();
    let order: Vec<usize> = (0..n).rev().collect();
    let mut pivots = Vec::new();
    let mut rel = Matrix::zeros(0, n);
    if !rows.is_empty() {
        let permuted: Vec<Vec<ExactScalar>> =
            rows.iter().map(|r| order.iter().map(|&c| r[c].clone()).collect()).collect();
        rel = Matrix::from_rows(permuted, n);
        pivots = rel.rref().into_iter().map(|pc| order[pc]).collect::<Vec<_>>();
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let basis: Vec<Word> = free.iter().map(|&c| words[c].clone()).collect();
    let free_pos: HashMap<usize, usize> = free.iter().enumerate().map(|(p, &c)| (c, p)).collect();
    let mut reduce = HashMap::new();
    for (c, w) in words.iter().enumerate() {
        let mut v = vec![ExactScalar::zero(); free.len()];
        if let Some(&p) = free_pos.get(&c) {
            v[p] = ExactScalar::one();
        } else {
            // Pivot row: w + sum_{free f} R[f] f = 0.
            let row = pivots.iter().position(|&pc| pc == c).unwrap();
            for (&f, &p) in &free_pos {
                let pc = order.iter().position(|&o| o == f).unwrap();
                let x = rel.get(row, pc);
                if !x.is_zero() {
                    v[p] = -x;
                }
            }
        }
        reduce.insert(w.clone(), v);
    }
    WordSpace { basis, reduce }
}

/// Gram matrix of the contravariant form on `M[nu]` for a module with a highest-weight vector.
///
/// Uses `<F_j u, y> = <u, E_j y>` recursively, with `<m, m> = 1`. The word of each basis vector
/// is read off the module's parent links when present, otherwise from its label.
pub fn contravariant_form(m: &WeightModule, nu: &Weight) -> Result<Matrix<ExactScalar>> {
    if !m.has_weight(nu) {
        return Err(Error::Domain(format!("{:?} is not a weight of the module", nu)));
    }
    let (hw, _) = m
        .highest_weight
        .clone()
        .ok_or_else(|| Error::Domain("module has no highest-weight vector".into()))?;
    let mut cache: HashMap<Weight, Matrix<ExactScalar>> = HashMap::new();
    gram_at(m, &hw, nu, &mut cache)
}

fn label_word(label: &str) -> Vec<usize> {
    label
        .split('F')
        .skip(1)
        .map(|t| t.trim_end_matches(".m").trim_end_matches(".l"))
        .map(|t| t.parse::<usize>().expect("word label") - 1)
        .collect()
}

fn gram_at(
    m: &WeightModule,
    hw: &Weight,
    nu: &Weight,
    cache: &mut HashMap<Weight, Matrix<ExactScalar>>,
) -> Result<Matrix<ExactScalar>> {
    if let Some(g) = cache.get(nu) {
        return Ok(g.clone());
    }
    let range = m.weight_range(nu);
    let n = range.len();
    if nu == hw {
        let g = Matrix::identity(n);
        cache.insert(nu.clone(), g.clone());
        return Ok(g);
    }
    let mut g = Matrix::zeros(n, n);
    for (a, ga) in range.clone().enumerate() {
        let word = label_word(&m.labels()[ga]);
        let (j, tail) = word.split_first().expect("non-top vector has a word");
        // u = F_tail m as a vector of M[nu + alpha_j].
        let up = nu + &m.datum.simple_root(*j);
        let mut u = vec![ExactScalar::one()];
        let mut w = hw.clone();
        for &t in tail.iter().rev() {
            u = m.f_local(t, &w, &u);
            w = &w - &m.datum.simple_root(t);
        }
        debug_assert_eq!(w, up);
        let g_up = gram_at(m, hw, &up, cache)?;
        let gu: Vec<ExactScalar> = g_up.transpose().mul_vec(&u);
        for b in 0..n {
            let mut y = vec![ExactScalar::zero(); n];
            y[b] = ExactScalar::one();
            let ey = m.e_local(*j, nu, &y);
            let mut acc = ExactScalar::zero();
            for (x, z) in gu.iter().zip(&ey) {
                if !x.is_zero() && !z.is_zero() {
                    acc = &acc + &(x * z);
                }
            }
            g.set(a, b, acc);
        }
    }
    cache.insert(nu.clone(), g.clone());
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::check_relations;
    use crate::qfield::quantum_factorial;

    #[test]
    fn rank_one_verma_is_a_chain() {
        let a1 = CartanDatum::rank_one();
        let m = verma_truncated(&a1, &Weight(vec![3]), 5).unwrap();
        assert_eq!(m.dim(), 6);
        for k in 0..=5 {
            assert_eq!(m.weight_dim(&Weight(vec![3 - 2 * k])), 1);
        }
    }

    #[test]
    fn a2_verma_weight_space() {
        let a2 = CartanDatum::from_name("A2").unwrap();
        let m = verma_truncated(&a2, &Weight(vec![1, 1]), 2).unwrap();
        assert_eq!(m.weight_dim(&Weight(vec![0, 0])), 2);
        // Serre relations kick in at depth 3: F1 F1 F2, F1 F2 F1, F2 F1 F1 span only 2 dims.
        let m3 = verma_truncated(&a2, &Weight(vec![1, 1]), 3).unwrap();
        assert_eq!(m3.weight_dim(&Weight(vec![-2, 1])), 2);
        let v = check_relations(&m3);
        assert!(!v.is_empty() && v.iter().all(|x| x.level == Some(3)), "{:?}", v);
    }

    #[test]
    fn shapovalov_rank_one() {
        let a1 = CartanDatum::rank_one();
        let lam = 3;
        let m = verma_truncated(&a1, &Weight(vec![lam]), 4).unwrap();
        for n in 0..=4i64 {
            let g = contravariant_form(&m, &Weight(vec![lam - 2 * n])).unwrap();
            let mut expect = quantum_factorial(n, 1).unwrap();
            for k in 1..=n {
                expect = &expect * &quantum_integer(lam - k + 1, 1);
            }
            assert_eq!(g.get(0, 0), &expect);
        }
        let m2 = verma_truncated(&a1, &Weight(vec![2]), 4).unwrap();
        assert!(contravariant_form(&m2, &Weight(vec![-4])).unwrap().get(0, 0).is_zero());
        assert!(contravariant_form(&m2, &Weight(vec![7])).is_err());
    }
}
