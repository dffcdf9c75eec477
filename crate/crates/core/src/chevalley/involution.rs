//! Involutions of the Chevalley basis and the rescaling that brings their
//! coefficients into {±1, ±i}.

use serde::Serialize;

use super::structure::{Basis, StructureConstants};
use super::ChevalleyError;
use crate::exactfield::{CyclotomicElem, DEFAULT_ORDER};

/// θ(x_α) = c_α x_{θ(α)}, with θ a permutation of the roots.
#[derive(Clone, Debug, PartialEq)]
pub struct InvolutionSpec {
    pub root_map: Vec<usize>,
    pub signs: Vec<CyclotomicElem>,
}

impl InvolutionSpec {
    /// Checks c_{−α} = 1/c_α = c_{θ(α)} and c_α c_β = ±c_{α+β}.
    pub fn check(&self, sc: &StructureConstants) -> Result<(), ChevalleyError> {
        let n = sc.roots().len();
        if self.root_map.len() != n || self.signs.len() != n {
            return Err(ChevalleyError::InvalidInvolution("wrong length".into()));
        }
        for a in 0..n {
            let inv = self.signs[a]
                .try_inv()
                .map_err(|_| ChevalleyError::InvalidInvolution(format!("c_{a} = 0")))?;
            if self.signs[sc.neg(a)] != inv || self.signs[self.root_map[a]] != inv {
                return Err(ChevalleyError::InvalidInvolution(format!("c(-a)c(a)=1 fails at {a}")));
            }
            if self.root_map[self.root_map[a]] != a {
                return Err(ChevalleyError::InvalidInvolution("root map is not an involution".into()));
            }
        }
        for (a, b, _) in sc.n_entries() {
            let s = sc.root_sum(a, b).expect("stored pair");
            let prod = &self.signs[a] * &self.signs[b];
            if prod != self.signs[s] && prod != -&self.signs[s] {
                return Err(ChevalleyError::InvalidInvolution(format!("c(a+b) fails at ({a},{b})")));
            }
        }
        Ok(())
    }

    /// θ applied to a basis vector, as (target, coefficient).
    pub fn apply_basis(&self, sc: &StructureConstants, b: Basis) -> Vec<(Basis, CyclotomicElem)> {
        match b {
            Basis::X(a) => vec![(Basis::X(self.root_map[a]), self.signs[a].clone())],
            Basis::H(i) => {
                // θ(h*_{α_i}) = h*_{θ(α_i)}
                sc.coroot(self.root_map[i])
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(k, &c)| (Basis::H(k), CyclotomicElem::from_int(c)))
                    .collect()
            }
        }
    }
}

/// The inner involution Ad(t) for the torus element with α_i(t) = ±1.
pub fn inner_involution(sc: &StructureConstants, simple_signs: &[i8]) -> Result<InvolutionSpec, ChevalleyError> {
    if simple_signs.len() != sc.rank() || simple_signs.iter().any(|s| s.abs() != 1) {
        return Err(ChevalleyError::InvalidInvolution("need one sign ±1 per simple root".into()));
    }
    let signs = sc
        .roots()
        .iter()
        .map(|r| {
            let odd = r.iter().zip(simple_signs).filter(|(c, &s)| s < 0 && c.rem_euclid(2) == 1).count();
            CyclotomicElem::from_int(if odd % 2 == 0 { 1 } else { -1 })
        })
        .collect();
    Ok(InvolutionSpec { root_map: (0..sc.roots().len()).collect(), signs })
}

/// The involution induced by a diagram symmetry `perm` of the simple roots,
/// normalized by θ(x_{±α_i}) = x_{±α_{perm(i)}}; the remaining signs follow
/// from the structure constants.
pub fn diagram_involution(sc: &StructureConstants, perm: &[usize]) -> Result<InvolutionSpec, ChevalleyError> {
    let l = sc.rank();
    let rs = sc.root_system();
    let valid = perm.len() == l
        && (0..l).all(|i| perm[perm[i]] == i)
        && (0..l).all(|i| (0..l).all(|j| rs.cartan_matrix()[i][j] == rs.cartan_matrix()[perm[i]][perm[j]]));
    if !valid {
        return Err(ChevalleyError::InvalidInvolution("not a diagram involution".into()));
    }
    let n = sc.roots().len();
    let npos = sc.num_positive();
    let mut root_map = vec![usize::MAX; n];
    let mut signs = vec![CyclotomicElem::zero(); n];
    for a in 0..npos {
        let r = &sc.roots()[a];
        let mut img = vec![0i64; l];
        for i in 0..l {
            img[perm[i]] = r[i];
        }
        let b = sc.root_index(&img).expect("diagram symmetries permute roots");
        root_map[a] = b;
        root_map[sc.neg(a)] = sc.neg(b);
    }
    // propagate through x_ξ = [x_{α_i}, x_{ξ−α_i}] / N for the smallest valid i
    for sign_neg in [false, true] {
        for a in 0..npos {
            let idx = if sign_neg { sc.neg(a) } else { a };
            if a < l {
                signs[idx] = CyclotomicElem::one();
                continue;
            }
            let (i, rest) = (0..l)
                .find_map(|i| {
                    let mut v = sc.roots()[a].clone();
                    v[i] -= 1;
                    sc.root_index(&v).filter(|&b| b < npos).map(|b| (i, b))
                })
                .expect("non-simple root");
            let (p, q) = if sign_neg { (sc.neg(i), sc.neg(rest)) } else { (i, rest) };
            let n0 = sc.n(p, q).expect("pair sums to a root");
            let n1 = sc.n(root_map[p], root_map[q]).expect("images sum to a root");
            let c = &(&signs[p] * &signs[q]) * &CyclotomicElem::from_rational(num_rational::BigRational::new(n1.into(), n0.into()));
            signs[idx] = c;
        }
    }
    Ok(InvolutionSpec { root_map, signs })
}

/// Result of [`normalize_for_involution`].
#[derive(Clone, Debug, Serialize)]
pub struct NormalizedBasis {
    /// x'_α = scalars[α]·x_α.
    pub scalars: Vec<CyclotomicElem>,
    /// θ(x'_α) = new_signs[α]·x'_{θ(α)}, each in {±1, ±i}.
    pub new_signs: Vec<CyclotomicElem>,
}

/// Chooses h with e^{α(h)} = c_α on the simple roots (inside the 24th roots
/// of unity) and rescales x'_α = e^{−α(h)/2} x_α.
pub fn normalize_for_involution(
    sc: &StructureConstants,
    theta: &InvolutionSpec,
) -> Result<NormalizedBasis, ChevalleyError> {
    theta.check(sc)?;
    let l = sc.rank();
    // square roots s_δ of c_δ among the 24th roots of unity
    let mut half = Vec::with_capacity(l);
    for d in 0..l {
        let k = theta.signs[d]
            .as_root_of_unity()
            .filter(|k| k % 2 == 0)
            .ok_or_else(|| ChevalleyError::UnsupportedScalar(theta.signs[d].to_string()))?;
        half.push(k / 2);
    }
    let order = DEFAULT_ORDER as i64;
    let scalars: Vec<CyclotomicElem> = sc
        .roots()
        .iter()
        .map(|r| {
            let e: i64 = r.iter().zip(&half).map(|(c, &h)| c * h as i64).sum();
            CyclotomicElem::zeta_power((-e).rem_euclid(order))
        })
        .collect();
    let allowed: Vec<CyclotomicElem> = [0, 6, 12, 18].iter().map(|&k| CyclotomicElem::zeta_power(k)).collect();
    let mut new_signs = Vec::with_capacity(scalars.len());
    for a in 0..scalars.len() {
        let c = &(&theta.signs[a] * &scalars[a]) * &scalars[theta.root_map[a]].inv();
        if !allowed.contains(&c) {
            return Err(ChevalleyError::UnsupportedScalar(c.to_string()));
        }
        new_signs.push(c);
    }
    Ok(NormalizedBasis { scalars, new_signs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::{bracket, chevalley_basis, LieElement};
    use crate::rootsys::RootSystem;

    fn sc(s: &str) -> StructureConstants {
        chevalley_basis(&RootSystem::from_label(s).unwrap())
    }

    fn apply(sc: &StructureConstants, th: &InvolutionSpec, x: &LieElement) -> LieElement {
        let mut out = LieElement::zero(sc);
        for (b, c) in x.coeffs() {
            for (t, d) in th.apply_basis(sc, *b) {
                out = out.plus_term(t, c * &d);
            }
        }
        out
    }

    #[test]
    fn identity_gives_trivial_scalars() {
        let c = sc("B2");
        let th = inner_involution(&c, &[1, 1]).unwrap();
        let n = normalize_for_involution(&c, &th).unwrap();
        assert!(n.scalars.iter().all(CyclotomicElem::is_one));
    }

    #[test]
    fn minus_one_on_simple_roots_gives_fourth_roots() {
        let c = sc("A3");
        let th = inner_involution(&c, &[-1, -1, -1]).unwrap();
        let n = normalize_for_involution(&c, &th).unwrap();
        let fourth: Vec<_> = [0, 6, 12, 18].iter().map(|&k| CyclotomicElem::zeta_power(k)).collect();
        for (a, s) in n.scalars.iter().enumerate() {
            assert!(fourth.contains(s));
            let ht: i64 = c.roots()[a].iter().sum();
            // s = i^{-ht}
            assert_eq!(*s, CyclotomicElem::zeta_power((-6 * ht).rem_euclid(24)));
        }
    }

    #[test]
    fn diagram_involution_is_an_automorphism() {
        for (t, perm) in [("A2", vec![1, 0]), ("A3", vec![2, 1, 0]), ("D4", vec![0, 1, 3, 2]), ("E6", vec![5, 1, 4, 3, 2, 0])] {
            let c = sc(t);
            let th = diagram_involution(&c, &perm).unwrap();
            th.check(&c).unwrap();
            for x in c.basis() {
                for y in c.basis() {
                    let (ex, ey) = (LieElement::basis(&c, x), LieElement::basis(&c, y));
                    let lhs = apply(&c, &th, &bracket(&c, &ex, &ey).unwrap());
                    let rhs = bracket(&c, &apply(&c, &th, &ex), &apply(&c, &th, &ey)).unwrap();
                    assert_eq!(lhs, rhs, "{t}");
                }
            }
            let n = normalize_for_involution(&c, &th).unwrap();
            assert_eq!(n.new_signs.len(), c.roots().len());
        }
    }

    #[test]
    fn odd_roots_of_unity_are_rejected() {
        let c = sc("A1");
        let z = CyclotomicElem::zeta_power(1);
        let th = InvolutionSpec { root_map: vec![0, 1], signs: vec![z.clone(), z.inv()] };
        assert!(matches!(normalize_for_involution(&c, &th), Err(ChevalleyError::InvalidInvolution(_) | ChevalleyError::UnsupportedScalar(_))));
    }
}
