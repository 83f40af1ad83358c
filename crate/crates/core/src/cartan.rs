//! Finite-type Cartan data, the weight lattice and the Weyl group.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::qfield::S_PER_Q;

/// Largest rank accepted by [`CartanDatum::build`]. Raising it only needs the pairing
/// denominators of the new types to divide `S_PER_Q / 2`.
pub const MAX_RANK: usize = 4;

/// Integral weight in fundamental-weight coordinates `(lambda(h_1), ..., lambda(h_r))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|x| x * k).collect())
    }

    pub fn get(&self, i: usize) -> i64 {
        self.0[i]
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl<'a> Add<&'a Weight> for &'a Weight {
    type Output = Weight;
    fn add(self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a Weight> for &'a Weight {
    type Output = Weight;
    fn sub(self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

/// Cartan matrix with its symmetrization and the induced form on the weight lattice.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanDatum {
    pub name: String,
    pub matrix: Vec<Vec<i64>>,
    pub symmetrizers: Vec<i64>,
    pub rank: usize,
    /// Smallest `L > 0` with `L <P, P>` integral.
    pub pairing_denominator: i64,
    /// `<omega_i, omega_j>`.
    #[serde(skip)]
    fundamental_gram: Vec<Vec<BigRational>>,
    /// Inverse Cartan matrix, used for root coordinates.
    #[serde(skip)]
    inverse: Vec<Vec<BigRational>>,
}

impl fmt::Debug for CartanDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CartanDatum({})", self.name)
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn type_a(n: usize) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0; n]; n];
    for i in 0..n {
        m[i][i] = 2;
        if i + 1 < n {
            m[i][i + 1] = -1;
            m[i + 1][i] = -1;
        }
    }
    m
}

impl CartanDatum {
    /// Builds the datum for a type string such as `"A2"`, `"B3"` or `"G2"`.
    pub fn from_name(name: &str) -> Result<Self> {
        let name = name.trim();
        let mut chars = name.chars();
        let letter = chars
            .next()
            .ok_or_else(|| Error::Config("empty Cartan type".into()))?;
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::Config(format!("bad Cartan type '{}'", name)))?;
        Self::build(letter, rank)
    }

    pub fn build(letter: char, rank: usize) -> Result<Self> {
        let letter = letter.to_ascii_uppercase();
        let bad = || Error::Config(format!("unsupported Cartan type {}{}", letter, rank));
        if rank == 0 || rank > MAX_RANK {
            return Err(bad());
        }
        let matrix = match letter {
            'A' => type_a(rank),
            'B' if rank >= 2 => {
                let mut m = type_a(rank);
                m[rank - 1][rank - 2] = -2;
                m
            }
            'C' if rank >= 2 => {
                let mut m = type_a(rank);
                m[rank - 2][rank - 1] = -2;
                m
            }
            'D' if rank >= 4 => {
                let mut m = type_a(rank);
                // Fork at node rank-3: the last two nodes both attach to it.
                m[rank - 2][rank - 1] = 0;
                m[rank - 1][rank - 2] = 0;
                m[rank - 3][rank - 1] = -1;
                m[rank - 1][rank - 3] = -1;
                m
            }
            'G' if rank == 2 => vec![vec![2, -1], vec![-3, 2]],
            _ => return Err(bad()),
        };
        let d = minimal_symmetrizers(&matrix).ok_or_else(bad)?;
        Self::from_matrix(format!("{}{}", letter, rank), matrix, d)
    }

    /// Builds a datum from an explicit matrix and symmetrizers, checking every invariant.
    pub fn from_matrix(name: String, matrix: Vec<Vec<i64>>, d: Vec<i64>) -> Result<Self> {
        let r = matrix.len();
        let cfg = |m: &str| Err(Error::Config(format!("{}: {}", name, m)));
        if r == 0 || d.len() != r || matrix.iter().any(|row| row.len() != r) {
            return cfg("shape");
        }
        for i in 0..r {
            if matrix[i][i] != 2 || d[i] < 1 {
                return cfg("diagonal or symmetrizer");
            }
            for j in 0..r {
                if i != j && (matrix[i][j] > 0 || (matrix[i][j] == 0) != (matrix[j][i] == 0)) {
                    return cfg("off-diagonal sign pattern");
                }
                if d[i] * matrix[i][j] != d[j] * matrix[j][i] {
                    return cfg("not symmetrizable by d");
                }
            }
        }
        let sym: Vec<Vec<BigRational>> = (0..r)
            .map(|i| (0..r).map(|j| rat(d[i] * matrix[i][j])).collect())
            .collect();
        if !positive_definite(&sym) {
            return cfg("not of finite type");
        }
        let a = Matrix::from_rows(
            matrix.iter().map(|row| row.iter().map(|&x| rat(x)).collect()).collect(),
            r,
        );
        let ainv = a.inverse().expect("finite type Cartan matrix is invertible");
        let inverse: Vec<Vec<BigRational>> =
            (0..r).map(|i| (0..r).map(|j| ainv.get(i, j).clone()).collect()).collect();
        let gram: Vec<Vec<BigRational>> = (0..r)
            .map(|i| (0..r).map(|j| &inverse[j][i] * rat(d[j])).collect())
            .collect();
        let mut l = BigInt::one();
        for row in &gram {
            for x in row {
                l = l.lcm(x.denom());
            }
        }
        let l: i64 = l.try_into().map_err(|_| Error::Config("pairing denominator".into()))?;
        if (S_PER_Q / 2) % l != 0 {
            return cfg("pairing denominator does not divide the scalar base");
        }
        Ok(CartanDatum {
            name,
            matrix,
            symmetrizers: d,
            rank: r,
            pairing_denominator: l,
            fundamental_gram: gram,
            inverse,
        })
    }

    /// The datum of `sl_2` (type A1).
    pub fn rank_one() -> Self {
        Self::build('A', 1).expect("A1 is supported")
    }

    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.matrix[i][j]
    }

    pub fn d(&self, i: usize) -> i64 {
        self.symmetrizers[i]
    }

    /// Simple root `alpha_i`: column `i` of the Cartan matrix.
    pub fn simple_root(&self, i: usize) -> Weight {
        Weight((0..self.rank).map(|j| self.matrix[j][i]).collect())
    }

    pub fn fundamental(&self, i: usize) -> Weight {
        let mut w = vec![0; self.rank];
        w[i] = 1;
        Weight(w)
    }

    pub fn rho(&self) -> Weight {
        Weight(vec![1; self.rank])
    }

    /// `<lambda, mu>`, the symmetric invariant form.
    pub fn pairing(&self, l: &Weight, m: &Weight) -> BigRational {
        let mut acc = BigRational::zero();
        for i in 0..self.rank {
            if l.0[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                if m.0[j] != 0 {
                    acc += &self.fundamental_gram[i][j] * rat(l.0[i] * m.0[j]);
                }
            }
        }
        acc
    }

    /// `<nu, omega_j>` for all `j`.
    pub fn pairing_with_fundamentals(&self, nu: &Weight) -> Vec<BigRational> {
        (0..self.rank)
            .map(|j| {
                (0..self.rank)
                    .filter(|&i| nu.0[i] != 0)
                    .map(|i| &self.fundamental_gram[i][j] * rat(nu.0[i]))
                    .fold(BigRational::zero(), |a, b| a + b)
            })
            .collect()
    }

    /// Coordinates of `lambda` in the basis of simple roots.
    pub fn root_coords(&self, l: &Weight) -> Vec<BigRational> {
        (0..self.rank)
            .map(|i| {
                (0..self.rank)
                    .map(|j| &self.inverse[i][j] * rat(l.0[j]))
                    .fold(BigRational::zero(), |a, b| a + b)
            })
            .collect()
    }

    /// Height of an element of the root lattice; `None` if `l` is not in it.
    pub fn height(&self, l: &Weight) -> Option<i64> {
        let mut h = 0;
        for c in self.root_coords(l) {
            if !c.is_integer() {
                return None;
            }
            h += i64::try_from(c.to_integer()).ok()?;
        }
        Some(h)
    }

    pub fn reflect(&self, i: usize, l: &Weight) -> Weight {
        let c = l.0[i];
        if c == 0 {
            return l.clone();
        }
        Weight((0..self.rank).map(|j| l.0[j] - c * self.matrix[j][i]).collect())
    }

    /// Positive roots in fundamental coordinates, sorted by height then lexicographically.
    pub fn positive_roots(&self) -> Vec<Weight> {
        let mut roots: Vec<Weight> = Vec::new();
        let mut seen = HashMap::new();
        let mut queue: VecDeque<Weight> = (0..self.rank).map(|i| self.simple_root(i)).collect();
        while let Some(r) = queue.pop_front() {
            if seen.contains_key(&r) {
                continue;
            }
            seen.insert(r.clone(), ());
            roots.push(r.clone());
            for i in 0..self.rank {
                let s = self.reflect(i, &r);
                let positive = self.root_coords(&s).iter().all(|c| !c.is_negative());
                if positive && !seen.contains_key(&s) {
                    queue.push_back(s);
                }
            }
        }
        roots.sort_by_key(|r| (self.height(r).unwrap(), r.clone()));
        roots
    }

    pub fn is_positive_root_combination(&self, l: &Weight) -> bool {
        self.root_coords(l).iter().all(|c| !c.is_negative())
    }
}

fn positive_definite(m: &[Vec<BigRational>]) -> bool {
    // Leading principal minors via exact elimination.
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    for k in 0..n {
        if !a[k][k].is_positive() {
            return false;
        }
        for i in k + 1..n {
            let f = &a[i][k] / &a[k][k];
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
    }
    true
}

fn minimal_symmetrizers(m: &[Vec<i64>]) -> Option<Vec<i64>> {
    let r = m.len();
    // Brute force over small values suffices for finite types (ratios are 1, 2, 3).
    let mut d = vec![1i64; r];
    loop {
        let ok = (0..r).all(|i| (0..r).all(|j| d[i] * m[i][j] == d[j] * m[j][i]));
        if ok {
            return Some(d);
        }
        let mut k = 0;
        loop {
            if k == r {
                return None;
            }
            d[k] += 1;
            if d[k] <= 3 {
                break;
            }
            d[k] = 1;
            k += 1;
        }
    }
}

/// Element of the Weyl group, stored through a reduced word `s_{i_1} ... s_{i_l}`.
///
/// The word acts right to left: `w lambda = s_{i_1}(... s_{i_l}(lambda))`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeylElement {
    pub word: Vec<usize>,
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self.word.iter().map(|i| format!("s{}", i + 1)).collect();
        write!(f, "{}", parts.join(""))
    }
}

impl WeylElement {
    pub fn identity() -> Self {
        WeylElement { word: Vec::new() }
    }

    pub fn simple(i: usize) -> Self {
        WeylElement { word: vec![i] }
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn sign(&self) -> i64 {
        if self.word.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn act(&self, datum: &CartanDatum, l: &Weight) -> Weight {
        self.word.iter().rev().fold(l.clone(), |acc, &i| datum.reflect(i, &acc))
    }

    /// Shifted action `w . lambda = w(lambda + rho) - rho`.
    pub fn dot(&self, datum: &CartanDatum, l: &Weight) -> Weight {
        let rho = datum.rho();
        &self.act(datum, &(l + &rho)) - &rho
    }

    /// Matrix of the linear action on fundamental coordinates (column `j` is `w omega_j`).
    pub fn matrix(&self, datum: &CartanDatum) -> Vec<Vec<i64>> {
        let cols: Vec<Weight> = (0..datum.rank).map(|j| self.act(datum, &datum.fundamental(j))).collect();
        (0..datum.rank).map(|i| cols.iter().map(|c| c.0[i]).collect()).collect()
    }
}

/// The full Weyl group with canonical reduced words.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    datum: CartanDatum,
    elements: Vec<WeylElement>,
    index: HashMap<Weight, usize>,
}

impl WeylGroup {
    /// Breadth-first enumeration from the identity. Each element is identified by its
    /// image of `rho`, which has trivial stabilizer.
    pub fn new(datum: &CartanDatum) -> Self {
        let rho = datum.rho();
        let mut elements = vec![WeylElement::identity()];
        let mut index = HashMap::new();
        index.insert(rho.clone(), 0);
        let mut images = vec![rho];
        let mut head = 0;
        while head < elements.len() {
            for i in 0..datum.rank {
                // Left multiplication by s_i keeps the word reduced when it is new in BFS order.
                let img = datum.reflect(i, &images[head]);
                if index.contains_key(&img) {
                    continue;
                }
                let mut word = vec![i];
                word.extend_from_slice(&elements[head].word);
                index.insert(img.clone(), elements.len());
                elements.push(WeylElement { word });
                images.push(img);
            }
            head += 1;
        }
        WeylGroup {
            datum: datum.clone(),
            elements,
            index,
        }
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn longest(&self) -> &WeylElement {
        self.elements.iter().max_by_key(|w| w.length()).unwrap()
    }

    /// Canonical representative of the element given by an arbitrary word.
    pub fn canonical(&self, word: &[usize]) -> WeylElement {
        let w = WeylElement { word: word.to_vec() };
        let img = w.act(&self.datum, &self.datum.rho());
        self.elements[self.index[&img]].clone()
    }

    pub fn compose(&self, a: &WeylElement, b: &WeylElement) -> WeylElement {
        let mut word = a.word.clone();
        word.extend_from_slice(&b.word);
        self.canonical(&word)
    }

    pub fn inverse(&self, a: &WeylElement) -> WeylElement {
        let word: Vec<usize> = a.word.iter().rev().copied().collect();
        self.canonical(&word)
    }

    /// All reduced words of `w`.
    pub fn reduced_words(&self, w: &WeylElement) -> Vec<Vec<usize>> {
        if w.length() == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for i in 0..self.datum.rank {
            let rest = self.compose(&WeylElement::simple(i), w);
            if rest.length() + 1 == w.length() {
                for mut tail in self.reduced_words(&rest) {
                    tail.insert(0, i);
                    out.push(tail);
                }
            }
        }
        out.sort();
        out
    }

    /// Number of positive roots sent to negative roots.
    pub fn inversions(&self, w: &WeylElement) -> usize {
        self.datum
            .positive_roots()
            .iter()
            .filter(|r| !self.datum.is_positive_root_combination(&w.act(&self.datum, r)))
            .count()
    }
}

/// Returns `(mu, w)` with `mu` dominant and `w mu = lambda`.
pub fn dominant_representative(datum: &CartanDatum, l: &Weight) -> (Weight, WeylElement) {
    let mut cur = l.clone();
    let mut word = Vec::new();
    while let Some(i) = (0..datum.rank).find(|&i| cur.0[i] < 0) {
        cur = datum.reflect(i, &cur);
        word.push(i);
    }
    (cur, WeylElement { word })
}

/// The W-orbit of `lambda`, sorted.
pub fn orbit(datum: &CartanDatum, l: &Weight) -> Vec<Weight> {
    let mut seen = vec![l.clone()];
    let mut head = 0;
    while head < seen.len() {
        for i in 0..datum.rank {
            let r = datum.reflect(i, &seen[head]);
            if !seen.contains(&r) {
                seen.push(r);
            }
        }
        head += 1;
    }
    seen.sort();
    seen
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_basics() {
        let a1 = CartanDatum::from_name("A1").unwrap();
        assert_eq!(a1.matrix, vec![vec![2]]);
        assert_eq!(a1.pairing_denominator, 2);
        let alpha = a1.simple_root(0);
        assert_eq!(a1.pairing(&alpha, &alpha), rat(2));
        let w = a1.fundamental(0);
        assert_eq!(a1.pairing(&w, &w), BigRational::new(1.into(), 2.into()));
        assert_eq!(WeylElement::simple(0).dot(&a1, &Weight(vec![5])), Weight(vec![-7]));
    }

    #[test]
    fn b2_symmetrizers_and_group() {
        let b2 = CartanDatum::from_name("B2").unwrap();
        assert_eq!(b2.symmetrizers, vec![2, 1]);
        let w = WeylGroup::new(&b2);
        assert_eq!(w.len(), 8);
        assert_eq!(w.longest().length(), 4);
    }

    #[test]
    fn a2_group_and_dot() {
        let a2 = CartanDatum::from_name("A2").unwrap();
        let w = WeylGroup::new(&a2);
        assert_eq!(w.len(), 6);
        assert_eq!(w.longest().length(), 3);
        assert_eq!(w.reduced_words(w.longest()).len(), 2);
        assert_eq!(WeylElement::simple(0).dot(&a2, &Weight(vec![0, 0])), Weight(vec![-2, 1]));
        for e in w.elements() {
            assert_eq!(w.inversions(e), e.length());
        }
    }

    #[test]
    fn group_orders() {
        for (n, k) in [("A3", 24), ("A4", 120), ("B3", 48), ("C3", 48), ("D4", 192), ("G2", 12), ("B4", 384)] {
            let d = CartanDatum::from_name(n).unwrap();
            assert_eq!(WeylGroup::new(&d).len(), k, "{}", n);
        }
    }

    #[test]
    fn unsupported_types() {
        assert!(CartanDatum::from_name("E6").is_err());
        assert!(CartanDatum::from_name("A5").is_err());
        assert!(CartanDatum::from_name("B1").is_err());
        assert!(CartanDatum::from_name("D3").is_err());
        assert!(CartanDatum::from_name("").is_err());
    }

    #[test]
    fn dominant_rep() {
        let a1 = CartanDatum::rank_one();
        let (m, w) = dominant_representative(&a1, &Weight(vec![-3]));
        assert_eq!(m, Weight(vec![3]));
        assert_eq!(w.act(&a1, &m), Weight(vec![-3]));
        let a2 = CartanDatum::from_name("A2").unwrap();
        let l = Weight(vec![-1, -1]);
        let (m, w) = dominant_representative(&a2, &l);
        assert!(m.is_dominant());
        assert_eq!(w.act(&a2, &m), l);
        assert!(orbit(&a2, &l).contains(&m));
    }
}
