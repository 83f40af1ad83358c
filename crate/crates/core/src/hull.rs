//! Exact convex-hull membership by a phase-one simplex over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cartan::Weight;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// True when `p` is a convex combination of `points`.
///
/// Solves `sum_s x_s s = p`, `sum_s x_s = 1`, `x >= 0` for feasibility with artificial
/// variables and Bland's rule, so it terminates and never rounds.
pub fn in_hull(points: &[Vec<BigRational>], p: &[BigRational]) -> bool {
    if points.is_empty() {
        return false;
    }
    let n = points.len();
    let dim = p.len();
    let m = dim + 1;
    // rows: equations; columns: n structural + m artificial + rhs
    let width = n + m + 1;
    let mut t: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); width]; m];
    for k in 0..m {
        let rhs = if k < dim { p[k].clone() } else { BigRational::one() };
        let sign = if rhs.is_negative() { -rat(1) } else { rat(1) };
        for (s, pt) in points.iter().enumerate() {
            let a = if k < dim { pt[k].clone() } else { BigRational::one() };
            t[k][s] = &a * &sign;
        }
        t[k][n + k] = BigRational::one();
        t[k][width - 1] = &rhs * &sign;
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    // objective: minimize sum of artificials; reduced costs c_j = -sum_rows t[k][j] for structurals
    loop {
        let mut entering = None;
        for j in 0..n + m {
            if basis.contains(&j) {
                continue;
            }
            // reduced cost of column j for objective sum of artificials
            let cost_j = if j >= n { BigRational::one() } else { BigRational::zero() };
            let mut rc = cost_j;
            for (k, &b) in basis.iter().enumerate() {
                if b >= n {
                    rc -= &t[k][j];
                }
            }
            if rc.is_negative() {
                entering = Some(j);
                break;
            }
        }
        let Some(j) = entering else { break };
        // ratio test with Bland tie-break on the leaving basic index
        let mut leave: Option<(usize, BigRational)> = None;
        for k in 0..m {
            if t[k][j].is_positive() {
                let ratio = &t[k][width - 1] / &t[k][j];
                let better = match &leave {
                    None => true,
                    Some((lk, lr)) => ratio < *lr || (ratio == *lr && basis[k] < basis[*lk]),
                };
                if better {
                    leave = Some((k, ratio));
                }
            }
        }
        let Some((r, _)) = leave else { break };
        let piv = t[r][j].clone();
        for c in 0..width {
            let v = &t[r][c] / &piv;
            t[r][c] = v;
        }
        for k in 0..m {
            if k != r && !t[k][j].is_zero() {
                let f = t[k][j].clone();
                for c in 0..width {
                    let v = &t[k][c] - &(&f * &t[r][c]);
                    t[k][c] = v;
                }
            }
        }
        basis[r] = j;
    }
    basis
        .iter()
        .enumerate()
        .all(|(k, &b)| b < n || t[k][width - 1].is_zero())
}

fn to_rat(w: &Weight) -> Vec<BigRational> {
    w.coords().iter().map(|&x| rat(x)).collect()
}

/// Lattice points of the convex hull of `points`, sorted.
pub fn lattice_points(points: &[Weight]) -> Vec<Weight> {
    if points.is_empty() {
        return Vec::new();
    }
    let r = points[0].rank();
    let lo: Vec<i64> = (0..r).map(|k| points.iter().map(|p| p.get(k)).min().unwrap()).collect();
    let hi: Vec<i64> = (0..r).map(|k| points.iter().map(|p| p.get(k)).max().unwrap()).collect();
    let pts: Vec<Vec<BigRational>> = points.iter().map(to_rat).collect();
    let mut out = Vec::new();
    let mut cur = lo.clone();
    loop {
        let w = Weight(cur.clone());
        if points.contains(&w) || in_hull(&pts, &to_rat(&w)) {
            out.push(w);
        }
        let mut k = 0;
        loop {
            if k == r {
                out.sort();
                return out;
            }
            cur[k] += 1;
            if cur[k] <= hi[k] {
                break;
            }
            cur[k] = lo[k];
            k += 1;
        }
    }
}

/// Vertices of the convex hull: the points not in the hull of the others.
pub fn extreme_points(points: &[Weight]) -> Vec<Weight> {
    let mut uniq: Vec<Weight> = points.to_vec();
    uniq.sort();
    uniq.dedup();
    let mut out = Vec::new();
    for (k, p) in uniq.iter().enumerate() {
        let others: Vec<Vec<BigRational>> = uniq
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, w)| to_rat(w))
            .collect();
        if !in_hull(&others, &to_rat(p)) {
            out.push(p.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment() {
        let pts = vec![Weight(vec![-2]), Weight(vec![2])];
        let lp = lattice_points(&pts);
        assert_eq!(lp, (-2..=2).map(|x| Weight(vec![x])).collect::<Vec<_>>());
        assert_eq!(extreme_points(&pts), pts);
    }

    #[test]
    fn triangle() {
        let pts = vec![Weight(vec![0, 0]), Weight(vec![2, 0]), Weight(vec![0, 2]), Weight(vec![1, 1])];
        let lp = lattice_points(&pts);
        assert_eq!(lp.len(), 6);
        assert!(!lp.contains(&Weight(vec![2, 2])));
        assert_eq!(extreme_points(&pts).len(), 3);
    }

    #[test]
    fn single_point() {
        let pts = vec![Weight(vec![3, -1])];
        assert_eq!(lattice_points(&pts), pts);
        assert!(lattice_points(&[]).is_empty());
    }
}
