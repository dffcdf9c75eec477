//! Weight multiplicities by Freudenthal's recursion, working only with
//! dominant weights and Weyl conjugation. Shares nothing with the module
//! builder beyond the root system data.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use qforma::linalg::Matrix;
use qforma::rootsys::{to_simple_root_coords, RootSystem, Weight};

fn inner(g: &Matrix<BigRational>, a: &[i64], b: &[i64]) -> BigRational {
    let mut s = BigRational::zero();
    for i in 0..a.len() {
        for j in 0..b.len() {
            s += &g.row(i)[j] * BigRational::from_integer((a[i] * b[j]).into());
        }
    }
    s
}

/// Dominant weights `μ ≤ λ` with their multiplicities.
pub fn dominant_multiplicities(rs: &RootSystem, lambda: &[i64]) -> BTreeMap<Vec<i64>, u64> {
    let l = rs.rank();
    let g = rs.weight_gram();
    let pos: Vec<Vec<i64>> = rs.positive_roots().iter().map(|r| rs.root_to_weight(r)).collect();
    let simple: Vec<Vec<i64>> = (0..l).map(|i| rs.cartan_matrix()[i].clone()).collect();
    // A dominant μ = λ − Σ c_i α_i has nonnegative simple coordinates, so
    // c_i is at most the i-th simple coordinate of λ.
    let bound: Vec<i64> = to_simple_root_coords(rs, &Weight::from_ints(lambda))
        .unwrap()
        .iter()
        .map(|c| c.floor().to_integer().try_into().unwrap())
        .collect();
    let mut candidates: Vec<(i64, Vec<i64>)> = vec![];
    let mut c = vec![0i64; l];
    loop {
        let mut mu = lambda.to_vec();
        for i in 0..l {
            for j in 0..l {
                mu[j] -= c[i] * simple[i][j];
            }
        }
        if mu.iter().all(|&x| x >= 0) {
            candidates.push((c.iter().sum(), mu));
        }
        let mut k = 0;
        while k < l {
            c[k] += 1;
            if c[k] <= bound[k] {
                break;
            }
            c[k] = 0;
            k += 1;
        }
        if k == l {
            break;
        }
    }
    candidates.sort();
    let rho = vec![1i64; l];
    let shift = |v: &[i64]| v.iter().zip(&rho).map(|(a, b)| a + b).collect::<Vec<_>>();
    let top = inner(&g, &shift(lambda), &shift(lambda));
    let mut m: BTreeMap<Vec<i64>, u64> = BTreeMap::new();
    for (depth, mu) in candidates {
        if mu == lambda {
            m.insert(mu, 1);
            continue;
        }
        let mut num = BigRational::zero();
        for a in &pos {
            // μ + kα stays below λ, so k never exceeds the depth of μ.
            for k in 1..=depth {
                let nu: Vec<i64> = mu.iter().zip(a).map(|(x, y)| x + k * y).collect();
                let mult = m.get(&rs.dominant_conjugate(&nu)).copied().unwrap_or(0);
                if mult > 0 {
                    num += BigRational::from_integer(mult.into()) * inner(&g, &nu, a);
                }
            }
        }
        let den = &top - inner(&g, &shift(&mu), &shift(&mu));
        if den.is_zero() {
            continue;
        }
        let val = BigRational::from_integer(2.into()) * num / den;
        assert!(val.is_integer(), "non-integral multiplicity");
        let v: u64 = val.to_integer().try_into().unwrap();
        if v > 0 {
            m.insert(mu, v);
        }
    }
    m
}

/// Multiplicity of an arbitrary integral weight.
pub fn multiplicity(rs: &RootSystem, dominant: &BTreeMap<Vec<i64>, u64>, mu: &[i64]) -> u64 {
    dominant.get(&rs.dominant_conjugate(mu)).copied().unwrap_or(0)
}

/// Orbit size of a dominant weight, by closure under simple reflections.
pub fn orbit_size(rs: &RootSystem, mu: &[i64]) -> u64 {
    let mut seen = std::collections::BTreeSet::from([mu.to_vec()]);
    let mut stack = vec![mu.to_vec()];
    while let Some(v) = stack.pop() {
        for i in 0..rs.rank() {
            let mut w = v.clone();
            for j in 0..v.len() {
                w[j] -= v[i] * rs.cartan_matrix()[i][j];
            }
            if seen.insert(w.clone()) {
                stack.push(w);
            }
        }
    }
    seen.len() as u64
}

pub fn total_dimension(rs: &RootSystem, lambda: &[i64]) -> u64 {
    dominant_multiplicities(rs, lambda).iter().map(|(mu, m)| m * orbit_size(rs, mu)).sum()
}
