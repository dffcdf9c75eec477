//! Root systems in Bourbaki numbering, weights in the fundamental-weight
//! basis, and Weyl group elements acting on weight coordinates.
//!
//! Conventions: `cartan[i][j] = ⟨α_i, α_j∨⟩ = 2(α_i, α_j)/(α_j, α_j)`, the
//! invariant form is scaled so that short roots have squared length 2, and
//! positive roots are listed by height and then by coordinates in
//! decreasing lexicographic order (so the simple roots come first, in index
//! order). Direct sums are lists of simple components with a block-diagonal
//! Cartan matrix.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactfield::rational::{format_rational_short, int};
use crate::linalg::Matrix;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RootSysError {
    #[error("invalid rank {rank} for type {letter:?}")]
    InvalidRank { letter: Letter, rank: usize },
    #[error("weight is not dominant")]
    NotDominant,
    #[error("weight has {got} coordinates but the rank is {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("cannot parse {0:?}")]
    Parse(String),
    #[error("root system has no components")]
    Empty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl FromStr for Letter {
    type Err = RootSysError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim().to_ascii_uppercase().as_str() {
            "A" => Letter::A,
            "B" => Letter::B,
            "C" => Letter::C,
            "D" => Letter::D,
            "E" => Letter::E,
            "F" => Letter::F,
            "G" => Letter::G,
            _ => return Err(RootSysError::Parse(s.to_string())),
        })
    }
}

/// A simple Cartan type such as `B3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CartanType {
    pub letter: Letter,
    pub rank: usize,
}

impl CartanType {
    pub fn new(letter: Letter, rank: usize) -> Result<Self, RootSysError> {
        let ok = match letter {
            Letter::A => rank >= 1,
            Letter::B | Letter::C => rank >= 2,
            Letter::D => rank >= 3,
            Letter::E => (6..=8).contains(&rank),
            Letter::F => rank == 4,
            Letter::G => rank == 2,
        };
        if ok {
            Ok(CartanType { letter, rank })
        } else {
            Err(RootSysError::InvalidRank { letter, rank })
        }
    }

    pub fn label(&self) -> String {
        format!("{:?}{}", self.letter, self.rank)
    }

    /// Other names for the same root system in low rank.
    pub fn aliases(&self) -> Vec<String> {
        match (self.letter, self.rank) {
            (Letter::B, 2) => vec!["C2".into()],
            (Letter::C, 2) => vec!["B2".into()],
            (Letter::A, 3) => vec!["D3".into()],
            (Letter::D, 3) => vec!["A3".into()],
            _ => vec![],
        }
    }

    /// Number of positive roots, from the closed formulas.
    pub fn positive_root_count(&self) -> usize {
        let n = self.rank;
        match self.letter {
            Letter::A => n * (n + 1) / 2,
            Letter::B | Letter::C => n * n,
            Letter::D => n * (n - 1),
            Letter::E => [36, 63, 120][n - 6],
            Letter::F => 24,
            Letter::G => 6,
        }
    }

    /// Gram matrix (α_i, α_j) of the simple roots, short roots of length² 2.
    fn simple_form(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut b = vec![vec![0i64; n]; n];
        let edge = |i: usize, j: usize, v: i64, b: &mut Vec<Vec<i64>>| {
            b[i][j] = v;
            b[j][i] = v;
        };
        match self.letter {
            Letter::A => {
                for i in 0..n {
                    b[i][i] = 2;
                }
                for i in 0..n.saturating_sub(1) {
                    edge(i, i + 1, -1, &mut b);
                }
            }
            Letter::B => {
                for i in 0..n - 1 {
                    b[i][i] = 4;
                    edge(i, i + 1, -2, &mut b);
                }
                b[n - 1][n - 1] = 2;
            }
            Letter::C => {
                for i in 0..n - 1 {
                    b[i][i] = 2;
                }
                for i in 0..n.saturating_sub(2) {
                    edge(i, i + 1, -1, &mut b);
                }
                b[n - 1][n - 1] = 4;
                edge(n - 2, n - 1, -2, &mut b);
            }
            Letter::D => {
                for i in 0..n {
                    b[i][i] = 2;
                }
                for i in 0..n - 2 {
                    edge(i, i + 1, -1, &mut b);
                }
                edge(n - 3, n - 1, -1, &mut b);
            }
            Letter::E => {
                for i in 0..n {
                    b[i][i] = 2;
                }
                // Bourbaki: 1-3-4-5-6(-7(-8)), with 2 attached to 4
                edge(0, 2, -1, &mut b);
                edge(1, 3, -1, &mut b);
                for i in 2..n - 1 {
                    edge(i, i + 1, -1, &mut b);
                }
            }
            Letter::F => {
                b[0][0] = 4;
                b[1][1] = 4;
                b[2][2] = 2;
                b[3][3] = 2;
                edge(0, 1, -2, &mut b);
                edge(1, 2, -2, &mut b);
                edge(2, 3, -1, &mut b);
            }
            Letter::G => {
                b[0][0] = 2;
                b[1][1] = 6;
                edge(0, 1, -3, &mut b);
            }
        }
        b
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl FromStr for CartanType {
    type Err = RootSysError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || RootSysError::Parse(s.to_string());
        let letter: Letter = s.get(..1).ok_or_else(bad)?.parse()?;
        let rank: usize = s.get(1..).ok_or_else(bad)?.parse().map_err(|_| bad())?;
        CartanType::new(letter, rank)
    }
}

/// Parses `B2+B5` style direct sums.
pub fn parse_cartan_types(s: &str) -> Result<Vec<CartanType>, RootSysError> {
    s.split('+').map(str::parse).collect()
}

/// A weight in the fundamental-weight basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    pub coords: Vec<BigRational>,
}

impl Weight {
    pub fn from_ints(v: &[i64]) -> Self {
        Weight { coords: v.iter().map(|&x| int(x)).collect() }
    }

    pub fn zero(rank: usize) -> Self {
        Weight { coords: vec![BigRational::zero(); rank] }
    }

    /// The fundamental weight ω_{i+1} (0-based index i).
    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut w = Self::zero(rank);
        w.coords[i] = BigRational::one();
        w
    }

    pub fn is_dominant(&self) -> bool {
        self.coords.iter().all(|c| !c.is_negative())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Integer coordinates, if the weight is integral.
    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.coords
            .iter()
            .map(|c| if c.is_integer() { i64::try_from(c.to_integer()).ok() } else { None })
            .collect()
    }

    /// Parses comma-separated coordinates such as `0,1,0` or `1/2,0`.
    pub fn parse(s: &str) -> Result<Self, RootSysError> {
        let coords = s
            .split(',')
            .map(|t| {
                crate::exactfield::rational::parse_rational(t)
                    .map_err(|_| RootSysError::Parse(s.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Weight { coords })
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(format_rational_short).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// A Weyl group element: a word in simple reflections (0-based indices)
/// together with its matrix on weight coordinates (column vectors).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    pub word: Vec<usize>,
    pub matrix: Vec<Vec<i64>>,
}

impl WeylElement {
    pub fn apply(&self, w: &Weight) -> Weight {
        Weight {
            coords: self
                .matrix
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&w.coords)
                        .fold(BigRational::zero(), |acc, (&m, c)| acc + c * int(m))
                })
                .collect(),
        }
    }

    pub fn apply_ints(&self, v: &[i64]) -> Vec<i64> {
        self.matrix.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// The word with Bourbaki (1-based) indices.
    pub fn word_one_based(&self) -> Vec<usize> {
        self.word.iter().map(|i| i + 1).collect()
    }
}

/// A (possibly reducible) reduced root system.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSystem {
    components: Vec<CartanType>,
    cartan: Vec<Vec<i64>>,
    form: Vec<Vec<i64>>,
    positive: Vec<Vec<i64>>,
    cartan_inv: Matrix<BigRational>,
}

/// Builds the root system of a simple type.
pub fn build_root_system(t: CartanType) -> RootSystem {
    RootSystem::new(vec![t]).expect("one component")
}

impl RootSystem {
    pub fn new(components: Vec<CartanType>) -> Result<Self, RootSysError> {
        if components.is_empty() {
            return Err(RootSysError::Empty);
        }
        let n: usize = components.iter().map(|c| c.rank).sum();
        let mut form = vec![vec![0i64; n]; n];
        let mut off = 0;
        for c in &components {
            let b = c.simple_form();
            for i in 0..c.rank {
                for j in 0..c.rank {
                    form[off + i][off + j] = b[i][j];
                }
            }
            off += c.rank;
        }
        let cartan: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| 2 * form[i][j] / form[j][j]).collect())
            .collect();
        let cm = Matrix::from_rows(cartan.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect());
        let cartan_inv = cm.inverse().expect("Cartan matrices are invertible");
        let mut rs = RootSystem { components, cartan, form, positive: Vec::new(), cartan_inv };
        rs.positive = rs.generate_positive_roots();
        Ok(rs)
    }

    pub fn from_label(s: &str) -> Result<Self, RootSysError> {
        Self::new(parse_cartan_types(s)?)
    }

    fn generate_positive_roots(&self) -> Vec<Vec<i64>> {
        let n = self.rank();
        let mut all: HashSet<Vec<i64>> = HashSet::new();
        let mut layer: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            })
            .collect();
        let mut out = Vec::new();
        while !layer.is_empty() {
            all.extend(layer.iter().cloned());
            out.extend(layer.iter().cloned());
            let mut next: Vec<Vec<i64>> = Vec::new();
            for beta in &layer {
                for i in 0..n {
                    // p = length of the α_i-string below β
                    let mut p = 0;
                    let mut down = beta.clone();
                    loop {
                        down[i] -= 1;
                        if all.contains(&down) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    let q = p - self.pairing(beta, i);
                    if q > 0 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        if !next.contains(&up) {
                            next.push(up);
                        }
                    }
                }
            }
            layer = next;
        }
        out.sort_by(|a, b| {
            let (ha, hb): (i64, i64) = (a.iter().sum(), b.iter().sum());
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        out
    }

    pub fn components(&self) -> &[CartanType] {
        &self.components
    }

    pub fn label(&self) -> String {
        self.components.iter().map(CartanType::label).collect::<Vec<_>>().join("+")
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    /// Index ranges of the simple roots of each component.
    pub fn component_ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut off = 0;
        self.components
            .iter()
            .map(|c| {
                let r = off..off + c.rank;
                off += c.rank;
                r
            })
            .collect()
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// The symmetric form (α_i, α_j) on simple roots.
    pub fn simple_form(&self) -> &[Vec<i64>] {
        &self.form
    }

    /// Positive roots in simple-root coordinates, in canonical order.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive
    }

    /// ⟨β, α_i∨⟩ for β in simple-root coordinates.
    pub fn pairing(&self, beta: &[i64], i: usize) -> i64 {
        beta.iter().zip(&self.cartan).map(|(c, row)| c * row[i]).sum()
    }

    /// (β, γ) for vectors in simple-root coordinates.
    pub fn inner(&self, beta: &[i64], gamma: &[i64]) -> i64 {
        let mut s = 0;
        for (i, b) in beta.iter().enumerate() {
            if *b == 0 {
                continue;
            }
            for (j, g) in gamma.iter().enumerate() {
                s += b * g * self.form[i][j];
            }
        }
        s
    }

    /// Fundamental-weight coordinates of a root lattice vector.
    pub fn root_to_weight(&self, c: &[i64]) -> Vec<i64> {
        (0..self.rank()).map(|i| self.pairing(c, i)).collect()
    }

    /// ρ in the fundamental basis.
    pub fn rho(&self) -> Weight {
        Weight::from_ints(&vec![1; self.rank()])
    }

    /// Highest root of each component, in simple coordinates.
    pub fn highest_roots(&self) -> Vec<Vec<i64>> {
        self.component_ranges()
            .into_iter()
            .map(|r| {
                self.positive
                    .iter()
                    .filter(|p| p.iter().enumerate().all(|(k, &x)| r.contains(&k) || x == 0))
                    .max_by_key(|p| p.iter().sum::<i64>())
                    .expect("nonempty component")
                    .clone()
            })
            .collect()
    }

    /// Matrix of the simple reflection s_i on weight coordinates.
    pub fn reflection_matrix(&self, i: usize) -> Vec<Vec<i64>> {
        let n = self.rank();
        let mut m = vec![vec![0; n]; n];
        for j in 0..n {
            m[j][j] = 1;
            m[j][i] -= self.cartan[i][j];
        }
        m
    }

    pub fn weyl_element(&self, word: &[usize]) -> WeylElement {
        let n = self.rank();
        let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        for &i in word {
            let s = self.reflection_matrix(i);
            m = (0..n)
                .map(|a| (0..n).map(|b| (0..n).map(|k| m[a][k] * s[k][b]).sum()).collect())
                .collect();
        }
        WeylElement { word: word.to_vec(), matrix: m }
    }

    /// Reflects a weight by s_i.
    pub fn reflect(&self, w: &Weight, i: usize) -> Weight {
        let li = w.coords[i].clone();
        Weight {
            coords: w
                .coords
                .iter()
                .enumerate()
                .map(|(j, c)| c - &li * int(self.cartan[i][j]))
                .collect(),
        }
    }

    /// Dominant Weyl conjugate of an integral weight.
    pub fn dominant_conjugate(&self, v: &[i64]) -> Vec<i64> {
        let mut v = v.to_vec();
        while let Some(i) = v.iter().position(|&x| x < 0) {
            let li = v[i];
            for j in 0..v.len() {
                v[j] -= li * self.cartan[i][j];
            }
        }
        v
    }

    /// Gram matrix of the fundamental weights under the invariant form.
    pub fn weight_gram(&self) -> Matrix<BigRational> {
        let b = Matrix::from_rows(self.form.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect());
        self.cartan_inv.mul(&b).mul(&self.cartan_inv.transpose())
    }

    /// (λ, μ) for weights in the fundamental basis.
    pub fn weight_inner(&self, l: &Weight, m: &Weight) -> BigRational {
        let g = self.weight_gram();
        let gm = g.mul_vec(&m.coords);
        crate::linalg::dot(&l.coords, &gm)
    }

    fn check_len(&self, w: &Weight) -> Result<(), RootSysError> {
        if w.coords.len() == self.rank() {
            Ok(())
        } else {
            Err(RootSysError::DimensionMismatch { expected: self.rank(), got: w.coords.len() })
        }
    }
}

/// Longest Weyl group element, found by greedy descent from ρ.
pub fn longest_element(rs: &RootSystem) -> WeylElement {
    let mut v = vec![1i64; rs.rank()];
    let mut word = Vec::new();
    while let Some(i) = v.iter().position(|&x| x > 0) {
        let li = v[i];
        for j in 0..v.len() {
            v[j] -= li * rs.cartan[i][j];
        }
        word.push(i);
    }
    // s_{i_N}⋯s_{i_1} sends ρ to −ρ; as an involution it equals s_{i_1}⋯s_{i_N}
    rs.weyl_element(&word)
}

/// Coordinates of λ in the simple-root basis.
pub fn to_simple_root_coords(rs: &RootSystem, l: &Weight) -> Result<Vec<BigRational>, RootSysError> {
    rs.check_len(l)?;
    let n = rs.rank();
    Ok((0..n)
        .map(|j| (0..n).fold(BigRational::zero(), |acc, i| acc + &l.coords[i] * &rs.cartan_inv[(i, j)]))
        .collect())
}

pub fn coefficient_sum(rs: &RootSystem, l: &Weight) -> Result<BigRational, RootSysError> {
    Ok(to_simple_root_coords(rs, l)?.into_iter().fold(BigRational::zero(), |a, b| a + b))
}

pub fn in_root_lattice(rs: &RootSystem, l: &Weight) -> Result<bool, RootSysError> {
    Ok(to_simple_root_coords(rs, l)?.iter().all(BigRational::is_integer))
}

pub fn is_self_dual(rs: &RootSystem, l: &Weight) -> Result<bool, RootSysError> {
    rs.check_len(l)?;
    if !l.is_dominant() {
        return Err(RootSysError::NotDominant);
    }
    let w0 = longest_element(rs);
    let img = w0.apply(l);
    Ok(img.coords.iter().zip(&l.coords).all(|(a, b)| *a == -b))
}

/// Weyl's dimension formula, computed exactly.
pub fn weyl_dimension(rs: &RootSystem, l: &Weight) -> Result<BigInt, RootSysError> {
    rs.check_len(l)?;
    if !l.is_dominant() {
        return Err(RootSysError::NotDominant);
    }
    let half: Vec<BigRational> = (0..rs.rank()).map(|i| BigRational::new(rs.form[i][i].into(), 2.into())).collect();
    let mut num = BigRational::one();
    let mut den = BigRational::one();
    for a in rs.positive_roots() {
        let mut lr = BigRational::zero();
        let mut r = BigRational::zero();
        for i in 0..rs.rank() {
            if a[i] == 0 {
                continue;
            }
            let w = &half[i] * int(a[i]);
            lr += (&l.coords[i] + BigRational::one()) * &w;
            r += w;
        }
        num *= lr;
        den *= r;
    }
    let d = num / den;
    debug_assert!(d.is_integer());
    Ok(d.to_integer())
}

/// Canonical JSON record of a root system.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RootSystemRecord {
    #[serde(rename = "type")]
    pub type_label: String,
    pub aliases: Vec<String>,
    pub rank: usize,
    pub cartan_matrix: Vec<Vec<i64>>,
    pub simple_root_lengths_squared: Vec<i64>,
    pub positive_roots: Vec<Vec<i64>>,
    pub longest_element_word: Vec<usize>,
}

impl RootSystem {
    pub fn record(&self) -> RootSystemRecord {
        RootSystemRecord {
            type_label: self.label(),
            aliases: if self.components.len() == 1 { self.components[0].aliases() } else { vec![] },
            rank: self.rank(),
            cartan_matrix: self.cartan.clone(),
            simple_root_lengths_squared: (0..self.rank()).map(|i| self.form[i][i]).collect(),
            positive_roots: self.positive.clone(),
            longest_element_word: longest_element(self).word_one_based(),
        }
    }
}
