//! Bracket closure of a finite set of Lie algebra elements, recomputed from
//! the adjoint matrices rather than the bracket routine.

use num_rational::BigRational;
use qforma::chevalley::{LieElement, StructureConstants};
use qforma::exactfield::CyclotomicElem;
use qforma::linalg::Matrix;

/// Coordinates of `[x, y]`, computed as `ad(x)·y` with `ad(x) = Σ c_b ad(b)`.
fn bracket_via_adjoint(sc: &StructureConstants, x: &LieElement, y: &LieElement) -> Vec<CyclotomicElem> {
    let d = sc.dim();
    let yv = y.to_vec(sc);
    let mut out = vec![CyclotomicElem::zero(); d];
    for (b, c) in x.coeffs() {
        let ad = sc.adjoint(*b);
        for i in 0..d {
            for (j, v) in ad.row_entries(i) {
                let term = &yv[*j] * &(c * &CyclotomicElem::from_rational(v.clone()));
                out[i] = &out[i] + &term;
            }
        }
    }
    out
}

fn flatten(sc: &StructureConstants, v: &[CyclotomicElem]) -> Vec<BigRational> {
    LieElement::from_vec(sc, v).rational_coords(sc)
}

/// Whether every bracket of two generators lies in their rational span, and
/// the rank of that span over Q.
pub fn rational_closure(sc: &StructureConstants, gens: &[LieElement]) -> (bool, usize) {
    let rows: Vec<Vec<BigRational>> = gens.iter().map(|g| g.rational_coords(sc)).collect();
    let base = Matrix::from_rows(rows.clone());
    let rank = base.rank();
    for x in gens {
        for y in gens {
            let mut aug = rows.clone();
            aug.push(flatten(sc, &bracket_via_adjoint(sc, x, y)));
            if Matrix::from_rows(aug).rank() != rank {
                return (false, rank);
            }
        }
    }
    (true, rank)
}
