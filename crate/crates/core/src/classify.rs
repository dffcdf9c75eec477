//! Which compact simple types carry a dominant weight that is self-dual,
//! has integral coefficient sum, and lies outside the root lattice.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactfield::rational::format_rational_short;
use crate::rationality::{weight_report, FsIndicator, RationalityError, WeightReport};
use crate::rootsys::{longest_element, to_simple_root_coords, CartanType, Letter, RootSysError, RootSystem, Weight};

pub const DEFAULT_MAX_RANK: usize = 8;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("max rank {got} exceeds the bound {bound}")]
    RankBound { got: usize, bound: usize },
    #[error("search box misses {missing} of {total} classes of weights modulo roots for {label}")]
    Coverage { label: String, missing: usize, total: usize },
    #[error(transparent)]
    RootSys(#[from] RootSysError),
    #[error(transparent)]
    Rationality(#[from] RationalityError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Obstruction {
    Obstructed,
    Clean,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionWitness {
    #[serde(rename = "type")]
    pub type_label: String,
    pub aliases: Vec<String>,
    pub rank: usize,
    pub verdict: Obstruction,
    pub witness: Option<Vec<i64>>,
    pub report: Option<WeightReport>,
    /// Classes of the weight lattice modulo the root lattice met by the search box.
    pub classes_covered: usize,
    pub classes_total: usize,
}

impl ObstructionWitness {
    pub fn tsv_row(&self) -> String {
        let (w, s, r, d) = match (&self.witness, &self.report) {
            (Some(w), Some(rep)) => (
                w.iter().map(i64::to_string).collect::<Vec<_>>().join(","),
                format_rational_short(&rep.coefficient_sum),
                rep.in_root_lattice.to_string(),
                rep.self_dual.to_string(),
            ),
            _ => ("-".into(), "-".into(), "-".into(), "-".into()),
        };
        let verdict = match self.verdict {
            Obstruction::Obstructed => "OBSTRUCTED",
            Obstruction::Clean => "CLEAN",
        };
        format!("{}\t{}\t{}\t{}\t{}\t{}\t{}", self.type_label, self.rank, verdict, w, s, r, d)
    }
}

pub const TSV_HEADER: &str = "type\trank\tverdict\twitness\tcoefficient_sum\tin_root_lattice\tself_dual";

/// Class of a weight modulo the root lattice: fractional parts of its
/// simple-root coordinates.
fn coset(rs: &RootSystem, w: &Weight) -> Result<Vec<BigRational>, RootSysError> {
    Ok(to_simple_root_coords(rs, w)?.into_iter().map(|x| &x - x.floor()).collect())
}

fn box_weights(rank: usize) -> impl Iterator<Item = Vec<i64>> {
    (0..3usize.pow(rank as u32)).map(move |mut k| {
        let mut v = vec![0; rank];
        for i in (0..rank).rev() {
            v[i] = (k % 3) as i64;
            k /= 3;
        }
        v
    })
}

/// Searches `{0,1,2}^ℓ` in lexicographic order.
pub fn find_obstruction_weight(rs: &RootSystem) -> Result<ObstructionWitness, ClassifyError> {
    let l = rs.rank();
    let w0 = longest_element(rs);
    let total = rs
        .cartan_matrix()
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect::<Vec<Vec<BigRational>>>();
    let total = crate::linalg::Matrix::from_rows(total).determinant().abs().to_integer().to_usize().expect("small");
    let mut classes = BTreeSet::new();
    let mut found = None;
    for v in box_weights(l) {
        let w = Weight::from_ints(&v);
        let c = coset(rs, &w)?;
        let self_dual = w0.apply_ints(&v).iter().zip(&v).all(|(a, b)| *a == -b);
        let in_lattice = c.iter().all(Zero::is_zero);
        let sum: BigRational = to_simple_root_coords(rs, &w)?.into_iter().sum();
        classes.insert(c);
        if found.is_none() && self_dual && sum.is_integer() && !in_lattice {
            found = Some(v);
        }
    }
    if classes.len() != total {
        return Err(ClassifyError::Coverage { label: rs.label(), missing: total - classes.len(), total });
    }
    let report = match &found {
        Some(v) => {
            let r = weight_report(rs, &Weight::from_ints(v))?;
            if !r.is_obstruction_candidate() {
                return Err(RationalityError::Hypotheses(format!("witness {v:?} fails re-verification")).into());
            }
            Some(r)
        }
        None => None,
    };
    let aliases = rs.components().iter().flat_map(CartanType::aliases).collect();
    Ok(ObstructionWitness {
        type_label: rs.label(),
        aliases,
        rank: l,
        verdict: if found.is_some() { Obstruction::Obstructed } else { Obstruction::Clean },
        witness: found,
        report,
        classes_covered: classes.len(),
        classes_total: total,
    })
}

/// Every simple type of rank at most `max_rank` (classical series from
/// their smallest rank, with C2 and D3 listed beside B2 and A3), followed by
/// the exceptional types.
pub fn table_types(max_rank: usize) -> Vec<CartanType> {
    let mut out = vec![];
    for (letter, min) in [(Letter::A, 1), (Letter::B, 2), (Letter::C, 2), (Letter::D, 3)] {
        for r in min..=max_rank {
            out.push(CartanType::new(letter, r).expect("valid rank"));
        }
    }
    for (letter, r) in [(Letter::E, 6), (Letter::E, 7), (Letter::E, 8), (Letter::F, 4), (Letter::G, 2)] {
        out.push(CartanType::new(letter, r).expect("valid rank"));
    }
    out
}

pub fn classification_table(max_rank: usize, jobs: usize) -> Result<Vec<ObstructionWitness>, ClassifyError> {
    classification_table_with_bound(max_rank, jobs, DEFAULT_MAX_RANK)
}

pub fn classification_table_with_bound(
    max_rank: usize,
    jobs: usize,
    bound: usize,
) -> Result<Vec<ObstructionWitness>, ClassifyError> {
    if max_rank > bound {
        return Err(ClassifyError::RankBound { got: max_rank, bound });
    }
    let types = table_types(max_rank);
    let jobs = jobs.max(1).min(types.len().max(1));
    let mut results: Vec<Option<Result<ObstructionWitness, ClassifyError>>> = vec![None; types.len()];
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..jobs)
            .map(|j| {
                let types = &types;
                s.spawn(move || {
                    (j..types.len())
                        .step_by(jobs)
                        .map(|k| (k, RootSystem::new(vec![types[k]]).map_err(ClassifyError::from).and_then(|rs| find_obstruction_weight(&rs))))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (k, r) in h.join().expect("worker panicked") {
                results[k] = Some(r);
            }
        }
    });
    results.into_iter().map(|r| r.expect("every type computed")).collect()
}

/// The closed-form statement being reproduced: A_ℓ with ℓ odd and ℓ ≥ 3,
/// B_ℓ with ℓ ≡ 3, 4 (mod 4) and ℓ ≥ 3, and every D_ℓ with ℓ ≥ 3.
pub fn stated_condition(t: CartanType) -> bool {
    let l = t.rank;
    match t.letter {
        Letter::A => l >= 3 && l % 2 == 1,
        Letter::B => l >= 3 && (l % 4 == 3 || l % 4 == 0),
        Letter::D => l >= 3,
        _ => false,
    }
}

/// What the weight computation gives for type A: the middle fundamental
/// weight of A_ℓ (ℓ odd) has coefficient sum (ℓ+1)²/8, an integer exactly
/// when ℓ ≡ 3 (mod 4); other types agree with [`stated_condition`].
pub fn derived_condition(t: CartanType) -> bool {
    match t.letter {
        Letter::A => t.rank >= 3 && t.rank % 4 == 3,
        _ => stated_condition(t),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RelabelRow {
    pub algebra: String,
    #[serde(rename = "type")]
    pub type_label: String,
    pub obstructed: bool,
    /// `n ≢ 3, 5 (mod 8)` for so(n); `n ≡ 0 (mod 4)` for su(n).
    pub predicted: bool,
}

/// so(n) for 5 ≤ n ≤ `max_so` and su(n) for 2 ≤ n ≤ `max_su`, computed from
/// the matching B, D or A type. The search box has `3^rank` points, so
/// ranks above [`DEFAULT_MAX_RANK`] are refused.
pub fn relabel_rows(max_so: usize, max_su: usize) -> Result<Vec<RelabelRow>, ClassifyError> {
    for rank in [max_so / 2, max_su.saturating_sub(1)] {
        if rank > DEFAULT_MAX_RANK {
            return Err(ClassifyError::RankBound { got: rank, bound: DEFAULT_MAX_RANK });
        }
    }
    let mut out = vec![];
    for n in 5..=max_so {
        let t = if n % 2 == 1 { CartanType::new(Letter::B, (n - 1) / 2)? } else { CartanType::new(Letter::D, n / 2)? };
        let w = find_obstruction_weight(&RootSystem::new(vec![t])?)?;
        out.push(RelabelRow {
            algebra: format!("so({n})"),
            type_label: t.label(),
            obstructed: w.verdict == Obstruction::Obstructed,
            predicted: !matches!(n % 8, 3 | 5),
        });
    }
    for n in 2..=max_su {
        let t = CartanType::new(Letter::A, n - 1)?;
        let w = find_obstruction_weight(&RootSystem::new(vec![t])?)?;
        out.push(RelabelRow {
            algebra: format!("su({n})"),
            type_label: t.label(),
            obstructed: w.verdict == Obstruction::Obstructed,
            predicted: n % 4 == 0,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorRecord {
    #[serde(rename = "type")]
    pub type_label: String,
    pub weight: Vec<i64>,
    pub report: WeightReport,
    pub factor_verdict: Obstruction,
}

#[derive(Clone, Debug, Serialize)]
pub struct DirectSumRecord {
    pub factors: Vec<FactorRecord>,
    #[serde(rename = "type")]
    pub type_label: String,
    pub weight: Vec<i64>,
    pub report: WeightReport,
    pub hypotheses_hold: bool,
    pub factors_clean: bool,
    pub factor_sums_half_integral: bool,
}

/// B2 ⊕ B5 with the spin weight on each factor.
pub fn direct_sum_example() -> Result<DirectSumRecord, ClassifyError> {
    let b2 = CartanType::new(Letter::B, 2)?;
    let b5 = CartanType::new(Letter::B, 5)?;
    let w2 = vec![0, 1];
    let w5 = vec![0, 0, 0, 0, 1];
    let mut factors = vec![];
    for (t, w) in [(b2, &w2), (b5, &w5)] {
        let rs = RootSystem::new(vec![t])?;
        factors.push(FactorRecord {
            type_label: t.label(),
            weight: w.clone(),
            report: weight_report(&rs, &Weight::from_ints(w))?,
            factor_verdict: find_obstruction_weight(&rs)?.verdict,
        });
    }
    let sum = RootSystem::new(vec![b2, b5])?;
    let weight: Vec<i64> = w2.iter().chain(&w5).copied().collect();
    let report = weight_report(&sum, &Weight::from_ints(&weight))?;
    Ok(DirectSumRecord {
        factors_clean: factors.iter().all(|f| f.factor_verdict == Obstruction::Clean),
        factor_sums_half_integral: factors
            .iter()
            .all(|f| !f.report.sum_is_integer && f.report.fs_indicator == FsIndicator::Minus),
        hypotheses_hold: report.is_obstruction_candidate(),
        factors,
        type_label: sum.label(),
        weight,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::rational::int;
    use proptest::prelude::*;

    fn rs(label: &str) -> RootSystem {
        RootSystem::from_label(label).unwrap()
    }

    #[test]
    fn small_cases() {
        let a3 = find_obstruction_weight(&rs("A3")).unwrap();
        assert_eq!(a3.verdict, Obstruction::Obstructed);
        assert_eq!(a3.witness, Some(vec![0, 1, 0]));
        assert_eq!(find_obstruction_weight(&rs("A2")).unwrap().verdict, Obstruction::Clean);
        assert_eq!(find_obstruction_weight(&rs("B5")).unwrap().verdict, Obstruction::Clean);
        assert_eq!(find_obstruction_weight(&rs("B7")).unwrap().verdict, Obstruction::Obstructed);
    }

    #[test]
    fn type_a_follows_the_mod_four_rule() {
        for l in 1..=8 {
            let t = CartanType::new(Letter::A, l).unwrap();
            let w = find_obstruction_weight(&RootSystem::new(vec![t]).unwrap()).unwrap();
            assert_eq!(w.verdict == Obstruction::Obstructed, derived_condition(t), "A{l}");
        }
        let a5 = rs("A5");
        let r = weight_report(&a5, &Weight::from_ints(&[0, 0, 1, 0, 0])).unwrap();
        assert!(r.self_dual && !r.in_root_lattice);
        assert_eq!(r.coefficient_sum, int(9) / int(2));
    }

    #[test]
    fn so_mod_eight() {
        for row in relabel_rows(17, 9).unwrap() {
            if row.algebra.starts_with("so") {
                assert_eq!(row.obstructed, row.predicted, "{}", row.algebra);
            }
        }
    }

    #[test]
    fn direct_sum() {
        let d = direct_sum_example().unwrap();
        assert!(d.hypotheses_hold && d.factors_clean && d.factor_sums_half_integral);
        assert_eq!(d.report.coefficient_sum, int(9));
    }

    #[test]
    fn parallel_table_is_deterministic() {
        let a = classification_table(4, 1).unwrap();
        let b = classification_table(4, 3).unwrap();
        let rows = |t: &[ObstructionWitness]| t.iter().map(ObstructionWitness::tsv_row).collect::<Vec<_>>();
        assert_eq!(rows(&a), rows(&b));
        assert!(classification_table(9, 1).is_err());
    }

    proptest! {
        #[test]
        fn adding_a_root_keeps_the_class(i in 0usize..4, j in 0usize..4, k in 0usize..4) {
            let d4 = rs("D4");
            let w = Weight::fundamental(4, i);
            let root = &d4.positive_roots()[(j * 4 + k) % d4.positive_roots().len()];
            let shifted: Vec<i64> = w.to_ints().unwrap().iter().zip(d4.root_to_weight(root)).map(|(a, b)| a + b).collect();
            let s = Weight::from_ints(&shifted);
            prop_assert_eq!(coset(&d4, &w).unwrap(), coset(&d4, &s).unwrap());
            let s1: BigRational = to_simple_root_coords(&d4, &w).unwrap().into_iter().sum();
            let s2: BigRational = to_simple_root_coords(&d4, &s).unwrap().into_iter().sum();
            prop_assert!((s1 - s2).is_integer());
        }
    }
}
