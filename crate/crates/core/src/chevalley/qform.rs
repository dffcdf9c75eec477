//! Q-forms of the compact real form: the standard one and its √3-twist.

use num_rational::BigRational;
use serde::Serialize;

use super::structure::{bracket, Basis, LieElement, StructureConstants};
use super::ChevalleyError;
use crate::exactfield::rational::int;
use crate::exactfield::CyclotomicElem;
use crate::linalg::{EchelonBasis, Matrix, SparseMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum QFormKind {
    StandardCompact,
    Twisted,
}

/// A Q-form of the compact real form, described by per-root scale factors.
///
/// The Q-basis is `{i h_δ} ∪ {s_α(x_α + x_{−α}), s_α·i(x_α − x_{−α}) : α > 0}`
/// with `s_α = (√3)^{c_τ(α)}` in the twisted case and 1 otherwise. The
/// Q(i)-span is the span of `{h_δ} ∪ {s_α x_{±α}}`.
#[derive(Clone, Debug, PartialEq)]
pub struct QFormSpec {
    pub kind: QFormKind,
    pub twist_root: Option<usize>,
    /// c_τ(α) for every root index (all zero in the standard case).
    pub exponents: Vec<i64>,
    /// (√3)^{c_τ(α)} for every root index.
    pub scale: Vec<CyclotomicElem>,
    /// Q-basis positions dropped on purpose (used to exhibit rank deficits).
    pub omitted: Vec<usize>,
}

pub fn standard_qform(sc: &StructureConstants) -> QFormSpec {
    let n = sc.roots().len();
    QFormSpec {
        kind: QFormKind::StandardCompact,
        twist_root: None,
        exponents: vec![0; n],
        scale: vec![CyclotomicElem::one(); n],
        omitted: vec![],
    }
}

/// The twisted form for the simple root with 0-based index `tau`.
pub fn twisted_qform(sc: &StructureConstants, tau: usize) -> Result<QFormSpec, ChevalleyError> {
    if tau >= sc.rank() {
        return Err(ChevalleyError::InvalidSimpleRoot(tau));
    }
    let exponents: Vec<i64> = sc.roots().iter().map(|r| r[tau]).collect();
    let scale = exponents.iter().map(|&c| CyclotomicElem::sqrt3_pow(c)).collect();
    Ok(QFormSpec { kind: QFormKind::Twisted, twist_root: Some(tau), exponents, scale, omitted: vec![] })
}

impl QFormSpec {
    /// The Q-span generators, in a fixed order: the `i h_δ` first, then for
    /// each positive root the pair described on [`QFormSpec`].
    pub fn q_basis(&self, sc: &StructureConstants) -> Vec<LieElement> {
        let i = CyclotomicElem::i();
        let mut out: Vec<LieElement> =
            (0..sc.rank()).map(|d| LieElement::zero(sc).plus_term(Basis::H(d), i.clone())).collect();
        for a in 0..sc.num_positive() {
            let s = &self.scale[a];
            let na = sc.neg(a);
            out.push(
                LieElement::zero(sc)
                    .plus_term(Basis::X(a), s.clone())
                    .plus_term(Basis::X(na), s.clone()),
            );
            let si = s * &i;
            out.push(
                LieElement::zero(sc)
                    .plus_term(Basis::X(a), si.clone())
                    .plus_term(Basis::X(na), -&si),
            );
        }
        out.into_iter()
            .enumerate()
            .filter(|(k, _)| !self.omitted.contains(k))
            .map(|(_, e)| e)
            .collect()
    }

    /// The same form with one Q-basis vector removed.
    pub fn without_basis_vector(&self, k: usize) -> Self {
        let mut s = self.clone();
        s.omitted.push(k);
        s
    }

    /// Generators of the Q(i)-span: h_δ and the rescaled root vectors.
    pub fn q_i_basis(&self, sc: &StructureConstants) -> Vec<LieElement> {
        let mut out: Vec<LieElement> = (0..sc.rank()).map(|d| LieElement::basis(sc, Basis::H(d))).collect();
        for a in 0..sc.roots().len() {
            out.push(LieElement::zero(sc).plus_term(Basis::X(a), self.scale[a].clone()));
        }
        out
    }
}

/// The compact conjugation: conjugate-linear, x_α ↦ x_{−α}, h ↦ −h.
pub fn compact_conjugation(sc: &StructureConstants, x: &LieElement) -> LieElement {
    let mut out = LieElement::zero(sc);
    for (b, c) in x.coeffs() {
        let (nb, sign) = match b {
            Basis::H(i) => (Basis::H(*i), -1),
            Basis::X(a) => (Basis::X(sc.neg(*a)), 1),
        };
        out = out.plus_term(nb, c.conj().scale(&int(sign)));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QFormReport {
    pub bracket_closed: bool,
    pub spans_over_r: bool,
}

pub fn verify_qform(sc: &StructureConstants, qf: &QFormSpec) -> QFormReport {
    verify_qform_basis(sc, &qf.q_basis(sc))
}

/// Closure under bracket with rational coefficients, and full real rank.
pub fn verify_qform_basis(sc: &StructureConstants, basis: &[LieElement]) -> QFormReport {
    let mut span = EchelonBasis::new(sc.dim() * crate::exactfield::cyclotomic::default_degree());
    for b in basis {
        span.insert(&b.rational_coords(sc));
    }
    let mut closed = true;
    'outer: for (i, x) in basis.iter().enumerate() {
        for y in &basis[i + 1..] {
            let z = bracket(sc, x, y).expect("same algebra");
            if !span.contains(&z.rational_coords(sc)) {
                closed = false;
                break 'outer;
            }
        }
    }
    QFormReport { bracket_closed: closed, spans_over_r: real_rank(sc, basis) == sc.dim() }
}

/// Rank over R of a family of elements, computed from real and imaginary
/// parts over Q(ζ₂₄).
pub fn real_rank(sc: &StructureConstants, elems: &[LieElement]) -> usize {
    let rows: Vec<Vec<CyclotomicElem>> = elems
        .iter()
        .map(|e| {
            let v = e.to_vec(sc);
            v.iter().map(CyclotomicElem::re).chain(v.iter().map(CyclotomicElem::im)).collect()
        })
        .collect();
    if rows.is_empty() {
        return 0;
    }
    Matrix::from_rows(rows).rank()
}

/// The su(2) spanned by a root pair inside a Q-form.
#[derive(Clone, Debug, Serialize)]
pub struct Su2Report {
    pub root: usize,
    pub scale_exponent: i64,
    /// `[u_i, u_j] = Σ_k table[i][j][k] u_k` over Q.
    pub table: Vec<Vec<Vec<String>>>,
    pub matches_su2: bool,
    /// exp(X)·exp(Y)·exp(X) in the two-dimensional representation.
    pub weyl_matrix_2d: Vec<Vec<String>>,
    pub weyl_matrix_is_standard: bool,
    /// The adjoint action of the Weyl representative is rational, preserves
    /// the Q-form and induces the reflection s_α on the Cartan subalgebra.
    pub weyl_adjoint_ok: bool,
    #[serde(skip)]
    pub basis: Vec<LieElement>,
}

/// Builds `{i h*_α, s(x_α + x_{−α}), s·i(x_α − x_{−α})}` and checks the
/// relations `[a,b] = 2c`, `[b,c] = 2s²a`, `[c,a] = 2b`.
pub fn su2_subalgebra(sc: &StructureConstants, qf: &QFormSpec, alpha: usize) -> Su2Report {
    let a = if sc.is_positive(alpha) { alpha } else { sc.neg(alpha) };
    let na = sc.neg(a);
    let i = CyclotomicElem::i();
    let s = qf.scale[a].clone();
    let mut hstar = LieElement::zero(sc);
    for (d, &c) in sc.coroot(a).iter().enumerate() {
        hstar = hstar.plus_term(Basis::H(d), CyclotomicElem::from_int(c));
    }
    let u0 = hstar.scale(&i);
    let u1 = LieElement::zero(sc).plus_term(Basis::X(a), s.clone()).plus_term(Basis::X(na), s.clone());
    let si = &s * &i;
    let u2 = LieElement::zero(sc).plus_term(Basis::X(a), si.clone()).plus_term(Basis::X(na), -&si);
    let basis = vec![u0, u1, u2];

    let coords = Matrix::from_cols(
        sc.dim() * 8,
        &basis.iter().map(|e| e.rational_coords(sc)).collect::<Vec<_>>(),
    );
    let mut table = vec![vec![vec![BigRational::from_integer(0.into()); 3]; 3]; 3];
    let mut expressible = true;
    for p in 0..3 {
        for q in 0..3 {
            let z = bracket(sc, &basis[p], &basis[q]).expect("same algebra");
            match coords.solve(&z.rational_coords(sc)) {
                Some(x) => table[p][q] = x,
                None => expressible = false,
            }
        }
    }
    let s2 = (&s * &s).to_rational().expect("scale squared is rational");
    let mut expected = vec![vec![vec![int(0); 3]; 3]; 3];
    expected[0][1][2] = int(2);
    expected[1][0][2] = int(-2);
    expected[1][2][0] = int(2) * &s2;
    expected[2][1][0] = int(-2) * &s2;
    expected[2][0][1] = int(2);
    expected[0][2][1] = int(-2);
    let matches = expressible && table == expected;

    // Weyl representative in the defining representation of sl2:
    // X = [[0,1],[0,0]], Y = [[0,0],[-1,0]] so that [X, Y] = −H.
    let x2 = Matrix::from_rows(vec![vec![int(0), int(1)], vec![int(0), int(0)]]);
    let y2 = Matrix::from_rows(vec![vec![int(0), int(0)], vec![int(-1), int(0)]]);
    let w2 = exp_nilpotent(&x2).mul(&exp_nilpotent(&y2)).mul(&exp_nilpotent(&x2));
    let standard = Matrix::from_rows(vec![vec![int(0), int(1)], vec![int(-1), int(0)]]);

    let weyl_adjoint_ok = weyl_adjoint_check(sc, qf, a);

    let fmt = |q: &BigRational| crate::exactfield::rational::format_rational_short(q);
    Su2Report {
        root: a,
        scale_exponent: qf.exponents[a],
        table: table.iter().map(|r| r.iter().map(|c| c.iter().map(fmt).collect()).collect()).collect(),
        matches_su2: matches,
        weyl_matrix_2d: w2.to_rows().iter().map(|r| r.iter().map(fmt).collect()).collect(),
        weyl_matrix_is_standard: w2 == standard,
        weyl_adjoint_ok,
        basis,
    }
}

/// exp of a nilpotent rational matrix.
pub fn exp_nilpotent(m: &Matrix<BigRational>) -> Matrix<BigRational> {
    let n = m.rows();
    let mut term = Matrix::identity(n);
    let mut acc = Matrix::identity(n);
    for k in 1..=n {
        term = term.mul(m).scale(&BigRational::new(1.into(), (k as i64).into()));
        if term.is_zero() {
            break;
        }
        acc = acc.add(&term);
    }
    acc
}

/// exp of a nilpotent sparse rational matrix.
pub fn exp_nilpotent_sparse(m: &SparseMatrix<BigRational>) -> SparseMatrix<BigRational> {
    let n = m.rows();
    let mut term = SparseMatrix::identity(n);
    let mut acc = SparseMatrix::identity(n);
    for k in 1..=n {
        term = term.mul(m).scale(&BigRational::new(1.into(), (k as i64).into()));
        if term.is_zero() {
            break;
        }
        acc = acc.add(&term);
    }
    acc
}

/// Ad(n_α) with n_α = exp(x_α)exp(x_{−α})exp(x_α): checks that it maps the
/// Q-form into itself and acts on the Cartan subalgebra as s_α.
fn weyl_adjoint_check(sc: &StructureConstants, qf: &QFormSpec, a: usize) -> bool {
    let x = sc.adjoint(Basis::X(a));
    let y = sc.adjoint(Basis::X(sc.neg(a)));
    let n = exp_nilpotent_sparse(&x).mul(&exp_nilpotent_sparse(&y)).mul(&exp_nilpotent_sparse(&x));
    let apply = |e: &LieElement| -> LieElement {
        let v = e.to_vec(sc);
        LieElement::from_vec(sc, &crate::linalg::apply_rational(&n, &v))
    };
    let basis = qf.q_basis(sc);
    let mut span = EchelonBasis::new(sc.dim() * 8);
    for b in &basis {
        span.insert(&b.rational_coords(sc));
    }
    let preserves = basis.iter().all(|b| span.contains(&apply(b).rational_coords(sc)));
    let roots = sc.roots();
    let reflects = (0..sc.rank()).all(|d| {
        // s_α(h_d) = h_d − α(h_d)·h*_α with α(h_d) = ⟨α, α_d∨⟩
        let c = sc.root_system().pairing(&roots[a], d);
        let mut expect = LieElement::basis(sc, Basis::H(d));
        for (k, &v) in sc.coroot(a).iter().enumerate() {
            expect = expect.plus_term(Basis::H(k), CyclotomicElem::from_int(-c * v));
        }
        apply(&LieElement::basis(sc, Basis::H(d))) == expect
    });
    preserves && reflects
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::chevalley_basis;
    use crate::rootsys::RootSystem;

    fn sc(s: &str) -> StructureConstants {
        chevalley_basis(&RootSystem::from_label(s).unwrap())
    }

    #[test]
    fn standard_forms_close_and_span() {
        for t in ["A1", "A2", "B2", "G2"] {
            let c = sc(t);
            let r = verify_qform(&c, &standard_qform(&c));
            assert!(r.bracket_closed && r.spans_over_r, "{t}");
        }
    }

    #[test]
    fn dropping_a_vector_loses_rank() {
        let c = sc("A2");
        let r = verify_qform(&c, &standard_qform(&c).without_basis_vector(3));
        assert!(!r.spans_over_r);
    }

    #[test]
    fn twisted_a3_closes() {
        let c = sc("A3");
        let q = twisted_qform(&c, 1).unwrap();
        let r = verify_qform(&c, &q);
        assert!(r.bracket_closed && r.spans_over_r);
        assert!(twisted_qform(&c, 3).is_err());
    }

    #[test]
    fn twist_is_additive() {
        let c = sc("B3");
        let q = twisted_qform(&c, 2).unwrap();
        for (a, b, _) in c.n_entries() {
            let s = c.root_sum(a, b).unwrap();
            assert_eq!(q.exponents[a] + q.exponents[b], q.exponents[s]);
        }
    }

    #[test]
    fn compact_conjugation_fixes_basis_and_is_an_automorphism() {
        let c = sc("A2");
        let q = standard_qform(&c);
        for b in q.q_basis(&c) {
            assert_eq!(compact_conjugation(&c, &b), b);
        }
        for x in c.basis() {
            for y in c.basis() {
                let (ex, ey) = (LieElement::basis(&c, x), LieElement::basis(&c, y));
                let lhs = compact_conjugation(&c, &bracket(&c, &ex, &ey).unwrap());
                let rhs = bracket(&c, &compact_conjugation(&c, &ex), &compact_conjugation(&c, &ey)).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn killing_form_is_negative_definite_on_the_q_form() {
        let c = sc("G2");
        let basis = standard_qform(&c).q_basis(&c);
        // ad as cyclotomic matrices
        let ad = |e: &LieElement| -> Matrix<CyclotomicElem> {
            let mut m = Matrix::zeros(c.dim(), c.dim());
            for (b, coef) in e.coeffs() {
                let a = c.adjoint(*b).to_dense().map(|q| CyclotomicElem::from_rational(q.clone()));
                m = m.add(&a.scale(coef));
            }
            m
        };
        let ads: Vec<_> = basis.iter().map(ad).collect();
        let gram: Vec<Vec<BigRational>> = ads
            .iter()
            .map(|x| ads.iter().map(|y| x.mul(y).trace().to_rational().unwrap()).collect())
            .collect();
        // LDLᵀ with all pivots negative
        let m = Matrix::from_rows(gram);
        for k in 1..=m.rows() {
            let rows: Vec<Vec<BigRational>> = (0..k).map(|i| m.row(i)[..k].to_vec()).collect();
            let det = Matrix::from_rows(rows).determinant();
            let sign_ok = if k % 2 == 1 { det < int(0) } else { det > int(0) };
            assert!(sign_ok, "minor {k}");
        }
    }

    #[test]
    fn su2_relations_and_weyl_element() {
        let c = sc("A3");
        let q = standard_qform(&c);
        for a in 0..c.roots().len() {
            let r = su2_subalgebra(&c, &q, a);
            assert!(r.matches_su2 && r.weyl_matrix_is_standard && r.weyl_adjoint_ok, "root {a}");
        }
        let t = twisted_qform(&c, 1).unwrap();
        let r = su2_subalgebra(&c, &t, 1);
        assert_eq!(r.scale_exponent, 1);
        assert!(r.matches_su2);
        let r0 = su2_subalgebra(&c, &t, 0);
        let s0 = su2_subalgebra(&c, &q, 0);
        assert_eq!(r0.basis, s0.basis);
    }
}
