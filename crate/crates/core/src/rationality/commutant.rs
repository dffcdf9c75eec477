use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{ser_rational, RationalityError};
use crate::chevalley::QFormSpec;
use crate::exactfield::rational::{int, rational_sqrt, squarefree_decomposition};
use crate::exactfield::{quaternion_ramification, CyclotomicElem, Place};
use crate::linalg::{EchelonBasis, Matrix};
use crate::repbuild::{Coefficients, HighestWeightModule, RationalLattice};

type Q = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CommutantKind {
    Rationals,
    QuadraticField,
    Quaternion,
}

fn ser_opt_rational<S: serde::Serializer>(q: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
    match q {
        Some(q) => ser_rational(q, s),
        None => s.serialize_none(),
    }
}

fn ser_params<S: serde::Serializer>(p: &Option<(Q, Q)>, s: S) -> Result<S::Ok, S::Error> {
    use crate::exactfield::rational::format_rational_short as f;
    match p {
        Some((a, b)) => serde::Serialize::serialize(&[f(a), f(b)], s),
        None => s.serialize_none(),
    }
}

/// A division algebra of Q-dimension 1, 2 or 4 arising as a commutant.
#[derive(Clone, Debug, Serialize)]
pub struct CommutantClass {
    pub q_dimension: usize,
    pub kind: CommutantKind,
    /// Squarefree discriminant of the quadratic field.
    #[serde(serialize_with = "ser_opt_rational")]
    pub discriminant: Option<Q>,
    /// Squarefree integers `(a, b)` with `u² = a`, `v² = b`, `uv = −vu`.
    #[serde(serialize_with = "ser_params")]
    pub quaternion_params: Option<(Q, Q)>,
    pub ramification: Option<BTreeSet<Place>>,
    #[serde(skip)]
    pub basis: Vec<Matrix<Q>>,
    /// The standard generators `u, v` in the quaternion case.
    #[serde(skip)]
    pub generators: Option<(Matrix<Q>, Matrix<Q>)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReducibilityWitness {
    pub dimension: usize,
    pub method: String,
    #[serde(skip)]
    pub subspace: Vec<Vec<Q>>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CommutantOutcome {
    Irreducible(CommutantClass),
    Reducible(ReducibilityWitness),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RVerdict {
    IrreducibleOverR,
    ReducibleOverR,
}

pub fn commutant(generators: &[Matrix<Q>]) -> Result<CommutantOutcome, RationalityError> {
    commutant_with_seed(generators, 0)
}

/// Closure of `start` under the generators.
fn spin_up(generators: &[Matrix<Q>], start: Vec<Q>) -> Vec<Vec<Q>> {
    let n = start.len();
    let mut ech = EchelonBasis::new(n);
    let mut basis = vec![];
    let mut queue = vec![start];
    while let Some(v) = queue.pop() {
        if ech.insert(&v) {
            for g in generators {
                queue.push(g.mul_vec(&v));
            }
            basis.push(v);
        }
    }
    basis
}

fn kernel_witness(x: &Matrix<Q>, method: &str) -> Option<ReducibilityWitness> {
    let ker = x.nullspace();
    (!ker.is_empty() && ker.len() < x.rows()).then(|| ReducibilityWitness {
        dimension: ker.len(),
        method: method.to_string(),
        subspace: ker,
    })
}

fn vec_of(m: &Matrix<Q>) -> Vec<Q> {
    m.to_rows().into_iter().flatten().collect()
}

/// Solves `x² = p·x + q·1` for a non-scalar `x` in a quadratic subalgebra.
fn min_poly(x: &Matrix<Q>) -> Option<(Q, Q)> {
    let n = x.rows();
    let a = Matrix::from_cols(n * n, &[vec_of(x), vec_of(&Matrix::identity(n))]);
    let s = a.solve(&vec_of(&x.mul(x)))?;
    Some((s[0].clone(), s[1].clone()))
}

fn squarefree(q: &Q) -> Result<(Q, Q), RationalityError> {
    let (s, t) = squarefree_decomposition(q, crate::exactfield::primes::DEFAULT_TRIAL_BOUND)?;
    Ok((Q::from_integer(s), t))
}

/// Classifies the algebra of matrices commuting with all generators, after a
/// seeded search for invariant subspaces.
pub fn commutant_with_seed(generators: &[Matrix<Q>], seed: u64) -> Result<CommutantOutcome, RationalityError> {
    let n = generators.first().map(Matrix::rows).ok_or_else(|| RationalityError::Hypotheses("no generators".into()))?;
    if n == 0 {
        return Err(RationalityError::Hypotheses("zero-dimensional representation".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts: Vec<Vec<Q>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect();
    for _ in 0..8 {
        starts.push((0..n).map(|_| int(rng.gen_range(-3..=3))).collect());
    }
    for s in starts {
        if s.iter().all(Zero::is_zero) {
            continue;
        }
        let sub = spin_up(generators, s);
        if sub.len() < n {
            return Ok(CommutantOutcome::Reducible(ReducibilityWitness {
                dimension: sub.len(),
                method: "spin-up".into(),
                subspace: sub,
            }));
        }
    }

    // One linear system for X g = g X over all generators.
    let mut ech = EchelonBasis::new(n * n);
    let mut rows = vec![];
    for g in generators {
        for r in 0..n {
            for c in 0..n {
                let mut row = vec![Q::zero(); n * n];
                for k in 0..n {
                    row[r * n + k] += &g[(k, c)];
                    row[k * n + c] -= &g[(r, k)];
                }
                if ech.insert(&row) {
                    rows.push(row);
                }
            }
        }
    }
    let null = if rows.is_empty() {
        (0..n * n).map(|i| (0..n * n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect()
    } else {
        Matrix::from_rows(rows).nullspace()
    };
    let basis: Vec<Matrix<Q>> =
        null.into_iter().map(|v| Matrix::from_rows(v.chunks(n).map(<[Q]>::to_vec).collect())).collect();
    for b in &basis {
        if generators.iter().any(|g| b.commutator(g) != Matrix::zeros(n, n)) {
            return Err(RationalityError::Unsupported("commutant solve produced a non-commuting element".into()));
        }
    }
    for b in &basis {
        if let Some(w) = kernel_witness(b, "zero divisor in commutant basis") {
            return Ok(CommutantOutcome::Reducible(w));
        }
    }
    let d = basis.len();
    let id = Matrix::identity(n);
    let class = |kind, discriminant, params, ram, generators| CommutantClass {
        q_dimension: d,
        kind,
        discriminant,
        quaternion_params: params,
        ramification: ram,
        basis: basis.clone(),
        generators,
    };
    match d {
        1 => Ok(CommutantOutcome::Irreducible(class(CommutantKind::Rationals, None, None, None, None))),
        2 => {
            let x = basis.iter().find(|b| min_poly_scalar(b).is_none()).expect("a non-scalar element");
            let (p, q) = min_poly(x).ok_or_else(|| RationalityError::Unsupported("no quadratic relation".into()))?;
            let disc = &p * &p + int(4) * &q;
            if let Some(r) = rational_sqrt(&disc) {
                let root = (&p + r) / int(2);
                let z = x.sub(&id.scale(&root));
                return Ok(CommutantOutcome::Reducible(kernel_witness(&z, "split minimal polynomial").expect("zero divisor")));
            }
            let (s, _) = squarefree(&disc)?;
            Ok(CommutantOutcome::Irreducible(class(CommutantKind::QuadraticField, Some(s), None, None, None)))
        }
        4 => quaternion_case(&basis, n, seed).map(|r| match r {
            Ok((a, b, ram, u, v)) => {
                CommutantOutcome::Irreducible(class(CommutantKind::Quaternion, None, Some((a, b)), Some(ram), Some((u, v))))
            }
            Err(w) => CommutantOutcome::Reducible(w),
        }),
        _ => match random_zero_divisor(&basis, seed) {
            Some(w) => Ok(CommutantOutcome::Reducible(w)),
            None => Err(RationalityError::Unsupported(format!("commutant of Q-dimension {d}"))),
        },
    }
}

fn min_poly_scalar(x: &Matrix<Q>) -> Option<Q> {
    let c = x[(0, 0)].clone();
    (*x == Matrix::identity(x.rows()).scale(&c)).then_some(c)
}

fn random_zero_divisor(basis: &[Matrix<Q>], seed: u64) -> Option<ReducibilityWitness> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let n = basis.first()?.rows();
    for _ in 0..200 {
        let mut x = Matrix::zeros(n, n);
        for b in basis {
            x = x.add(&b.scale(&int(rng.gen_range(-2..=2))));
        }
        if let Some(w) = kernel_witness(&x, "zero divisor in commutant") {
            return Some(w);
        }
    }
    None
}

type QuaternionData = (Q, Q, BTreeSet<Place>, Matrix<Q>, Matrix<Q>);

fn quaternion_case(
    basis: &[Matrix<Q>],
    n: usize,
    seed: u64,
) -> Result<Result<QuaternionData, ReducibilityWitness>, RationalityError> {
    let id = Matrix::identity(n);
    let zero = Matrix::zeros(n, n);
    let noncentral = basis.iter().find(|x| basis.iter().any(|y| x.commutator(y) != zero));
    let Some(x) = noncentral else {
        return match random_zero_divisor(basis, seed) {
            Some(w) => Ok(Err(w)),
            None => Err(RationalityError::Unsupported("commutative commutant of Q-dimension 4".into())),
        };
    };
    let (p, q) = min_poly(x).ok_or_else(|| RationalityError::Unsupported("no quadratic relation in commutant".into()))?;
    let half = &p / int(2);
    let u = x.sub(&id.scale(&half));
    let a = &q + &half * &half;
    if let Some(r) = rational_sqrt(&a) {
        let w = kernel_witness(&u.sub(&id.scale(&r)), "split quadratic subfield").expect("zero divisor");
        return Ok(Err(w));
    }
    let c = basis.iter().find(|c| u.commutator(c) != zero).expect("u is not central");
    let v = u.commutator(c);
    let v2 = v.mul(&v);
    let b = min_poly_scalar(&v2).ok_or_else(|| RationalityError::Unsupported("v² is not scalar".into()))?;
    let (a_sf, ta) = squarefree(&a)?;
    let (b_sf, tb) = squarefree(&b)?;
    let u = u.scale(&ta.recip());
    let v = v.scale(&tb.recip());
    let ram = quaternion_ramification(&a_sf, &b_sf)?;
    if ram.is_empty() {
        return match norm_zero_divisor(&a_sf, &b_sf, &u, &v) {
            Some(w) => Ok(Err(w)),
            None => Err(RationalityError::Unsupported("split quaternion algebra without a small zero divisor".into())),
        };
    }
    Ok(Ok((a_sf, b_sf, ram, u, v)))
}

/// Searches `t + y·u + z·v + w·uv` with vanishing reduced norm
/// `t² − a y² − b z² + ab w²`.
fn norm_zero_divisor(a: &Q, b: &Q, u: &Matrix<Q>, v: &Matrix<Q>) -> Option<ReducibilityWitness> {
    let a = a.to_integer().to_i128()?;
    let b = b.to_integer().to_i128()?;
    let n = u.rows();
    let uv = u.mul(v);
    const R: i128 = 12;
    for t in 0..=R {
        for y in -R..=R {
            for z in -R..=R {
                for w in -R..=R {
                    if (t, y, z, w) == (0, 0, 0, 0) || t * t - a * y * y - b * z * z + a * b * w * w != 0 {
                        continue;
                    }
                    let x = Matrix::identity(n)
                        .scale(&Q::from_integer(BigInt::from(t)))
                        .add(&u.scale(&Q::from_integer(BigInt::from(y))))
                        .add(&v.scale(&Q::from_integer(BigInt::from(z))))
                        .add(&uv.scale(&Q::from_integer(BigInt::from(w))));
                    if let Some(wit) = kernel_witness(&x, "zero of the reduced norm") {
                        return Some(wit);
                    }
                }
            }
        }
    }
    None
}

pub fn r_irreducibility_verdict(c: &CommutantClass) -> RVerdict {
    let irreducible = match c.kind {
        CommutantKind::Rationals => true,
        CommutantKind::QuadraticField => c.discriminant.as_ref().is_some_and(Signed::is_negative),
        CommutantKind::Quaternion => c.ramification.as_ref().is_some_and(|r| r.contains(&Place::Infinity)),
    };
    if irreducible {
        RVerdict::IrreducibleOverR
    } else {
        RVerdict::ReducibleOverR
    }
}

/// For a quaternion commutant split at the real place, the dimension of the
/// kernel of `u − √a` (or `v − √b`) computed exactly in Q(ζ₂₄), when the
/// square root lies there.
pub fn real_splitting_witness(c: &CommutantClass) -> Option<usize> {
    let (a, b) = c.quaternion_params.as_ref()?;
    let (u, v) = c.generators.as_ref()?;
    let (p, e) = if a.is_positive() { (a, u) } else if b.is_positive() { (b, v) } else { return None };
    let root = match p.to_integer().to_i64()? {
        1 => CyclotomicElem::one(),
        2 => &CyclotomicElem::zeta_power(3) + &CyclotomicElem::zeta_power(-3),
        3 => CyclotomicElem::sqrt3(),
        6 => &(&CyclotomicElem::zeta_power(3) + &CyclotomicElem::zeta_power(-3)) * &CyclotomicElem::sqrt3(),
        _ => return None,
    };
    let n = e.rows();
    let m = e.map(|x| CyclotomicElem::from_rational(x.clone())).sub(&Matrix::identity(n).scale(&root));
    Some(n - m.rank())
}

/// Rational matrices of the Q-form generators acting on a lattice.
///
/// For a Q(i)-lattice with basis `b_k` the result is written in the Q-basis
/// `b_1, …, b_n, i·b_1, …, i·b_n`, so each generator becomes
/// `[[Re C, −Im C], [Im C, Re C]]`.
pub fn restriction_of_scalars(
    module: &HighestWeightModule,
    qf: &QFormSpec,
    lattice: &RationalLattice,
) -> Result<Vec<Matrix<Q>>, RationalityError> {
    let n = module.dim();
    if lattice.vectors.len() != n {
        return Err(RationalityError::Hypotheses(format!("lattice has {} vectors, expected {n}", lattice.vectors.len())));
    }
    let p = Matrix::from_cols(n, &lattice.vectors);
    let pinv = p.inverse().ok_or_else(|| RationalityError::Hypotheses("lattice vectors are dependent".into()))?;
    let gaussian = lattice.coefficients == Coefficients::GaussianRational;
    let size = if gaussian { 2 * n } else { n };
    let mut out = vec![];
    for x in qf.q_basis(module.structure_constants()) {
        let mut m = Matrix::zeros(size, size);
        for (k, b) in lattice.vectors.iter().enumerate() {
            let coords = pinv.mul_vec(&module.act(&x, b));
            for (j, c) in coords.iter().enumerate() {
                let (re, im) = c
                    .to_gaussian()
                    .ok_or_else(|| RationalityError::Hypotheses("lattice is not invariant".into()))?;
                if gaussian {
                    m[(j, k)] = re.clone();
                    m[(n + j, n + k)] = re;
                    m[(n + j, k)] = im.clone();
                    m[(j, n + k)] = -im;
                } else if im.is_zero() {
                    m[(j, k)] = re;
                } else {
                    return Err(RationalityError::Hypotheses("lattice is not invariant over Q".into()));
                }
            }
        }
        out.push(m);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::{standard_qform, twisted_qform, Basis, StructureConstants};
    use crate::repbuild::{build_irrep, lattice_from_seed, qform_generate};
    use crate::rootsys::{RootSystem, Weight};

    fn scalar_rep(label: &str, w: &[i64], tau: Option<usize>) -> Vec<Matrix<Q>> {
        let m = build_irrep(&RootSystem::from_label(label).unwrap(), &Weight::from_ints(w)).unwrap();
        let sc = m.structure_constants();
        let qf = match tau {
            None => standard_qform(sc),
            Some(t) => twisted_qform(sc, t).unwrap(),
        };
        let l = qform_generate(&m, &qf, &lattice_from_seed(&m, Coefficients::GaussianRational)).unwrap();
        restriction_of_scalars(&m, &qf, &l).unwrap()
    }

    #[test]
    fn adjoint_sl2_has_rational_commutant() {
        let sc = StructureConstants::new(&RootSystem::from_label("A1").unwrap());
        let gens: Vec<_> = sc.basis().into_iter().map(|b: Basis| sc.adjoint(b).to_dense()).collect();
        match commutant(&gens).unwrap() {
            CommutantOutcome::Irreducible(c) => {
                assert_eq!(c.q_dimension, 1);
                assert_eq!(r_irreducibility_verdict(&c), RVerdict::IrreducibleOverR);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn hamilton_quaternions_from_su2() {
        let gens = scalar_rep("A1", &[1], None);
        let CommutantOutcome::Irreducible(c) = commutant(&gens).unwrap() else { panic!() };
        assert_eq!(c.kind, CommutantKind::Quaternion);
        let ram = c.ramification.clone().unwrap();
        assert_eq!(ram, [Place::Prime(2), Place::Infinity].into_iter().collect());
        assert_eq!(r_irreducibility_verdict(&c), RVerdict::IrreducibleOverR);
    }

    #[test]
    fn non_self_dual_gives_imaginary_quadratic_field() {
        let gens = scalar_rep("A2", &[1, 0], None);
        let CommutantOutcome::Irreducible(c) = commutant(&gens).unwrap() else { panic!() };
        assert_eq!(c.kind, CommutantKind::QuadraticField);
        assert_eq!(c.discriminant, Some(int(-1)));
        assert_eq!(r_irreducibility_verdict(&c), RVerdict::IrreducibleOverR);
    }

    #[test]
    fn a3_pair_of_forms() {
        assert!(matches!(commutant(&scalar_rep("A3", &[0, 1, 0], None)).unwrap(), CommutantOutcome::Reducible(_)));
        let CommutantOutcome::Irreducible(c) = commutant(&scalar_rep("A3", &[0, 1, 0], Some(0))).unwrap() else {
            panic!()
        };
        assert_eq!(c.kind, CommutantKind::Quaternion);
        let ram = c.ramification.clone().unwrap();
        assert_eq!(ram, [Place::Prime(2), Place::Prime(3)].into_iter().collect());
        assert_eq!(ram.len() % 2, 0);
        assert_eq!(r_irreducibility_verdict(&c), RVerdict::ReducibleOverR);
        assert_eq!(real_splitting_witness(&c), Some(6));
    }
}
