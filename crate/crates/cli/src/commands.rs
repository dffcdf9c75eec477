use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::json;

use qforma::chevalley::{standard_qform, twisted_qform, QFormSpec, StructureConstants};
use qforma::classify::{self, ClassifyError, ObstructionWitness, TSV_HEADER};
use qforma::exactfield::primes::{prime_divisors, DEFAULT_TRIAL_BOUND};
use qforma::exactfield::rational::{format_rational_short, parse_rational};
use qforma::exactfield::{hilbert_symbol, quaternion_ramification, BigRational, FieldError, Place};
use qforma::linalg::SparseMatrix;
use qforma::rationality::{
    commutant_with_seed, has_q_form_verdict_with_cap, r_irreducibility_verdict, real_splitting_witness,
    restriction_of_scalars, weight_report, CommutantOutcome, RationalityError,
};
use qforma::repbuild::{
    build_irrep_with_cap, dim_cap, doubled_root_coords, lattice_from_seed, qform_generate, Coefficients,
    HighestWeightModule, RepError,
};
use qforma::rootsys::{weyl_dimension, CartanType, Letter, RootSysError, RootSystem, Weight};

use crate::output::{join_ints, render, tsv_table};
use crate::{ChevalleyCmd, ClassifyCmd, Cli, Command, DemoCmd, ModuleArgs, QuatCmd, RationalityCmd, RepCmd, RootsysCmd, TypeArgs};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Refusal(String),
}

impl From<RootSysError> for CliError {
    fn from(e: RootSysError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<RepError> for CliError {
    fn from(e: RepError) -> Self {
        match e {
            RepError::NotDominant | RepError::RootSys(_) => CliError::Usage(e.to_string()),
            other => CliError::Refusal(other.to_string()),
        }
    }
}

impl From<RationalityError> for CliError {
    fn from(e: RationalityError) -> Self {
        match e {
            RationalityError::RootSys(e) => e.into(),
            RationalityError::Rep(e) => e.into(),
            other => CliError::Refusal(other.to_string()),
        }
    }
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::RankBound { .. } | ClassifyError::RootSys(_) => CliError::Usage(e.to_string()),
            other => CliError::Refusal(other.to_string()),
        }
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        match e {
            FieldError::Parse(_) | FieldError::ZeroArgument => CliError::Usage(e.to_string()),
            other => CliError::Refusal(other.to_string()),
        }
    }
}

pub fn dispatch(cli: &Cli) -> Result<String, CliError> {
    let f = cli.format;
    match &cli.command {
        Command::Rootsys { cmd: RootsysCmd::Show(t) } => {
            let rs = root_system(t)?;
            let rec = rs.record();
            let tsv = tsv_table(
                "index\tsimple_coords\theight",
                rec.positive_roots.iter().enumerate().map(|(k, r)| format!("{k}\t{}\t{}", join_ints(r), r.iter().sum::<i64>())),
            );
            render(&rec, f, Some(tsv))
        }
        Command::Chevalley { cmd } => chevalley(cmd, cli),
        Command::Rep { cmd: RepCmd::Build { module, emit } } => rep_build(module, *emit, cli),
        Command::Rationality { cmd } => rationality(cmd, cli),
        Command::Classify { cmd } => classify_cmd(cmd, cli),
        Command::Quat { cmd: QuatCmd::Ramify { a, b } } => quat_ramify(a, b, cli),
        Command::Demo { cmd: DemoCmd::Badgq } => demo_badgq(cli),
    }
}

fn root_system(t: &TypeArgs) -> Result<RootSystem, CliError> {
    let letter: Letter = t.letter.parse()?;
    Ok(RootSystem::new(vec![CartanType::new(letter, t.rank)?])?)
}

fn parse_weight(rs: &RootSystem, s: &str) -> Result<Weight, CliError> {
    let w = Weight::parse(s)?;
    if w.coords.len() != rs.rank() {
        return Err(RootSysError::DimensionMismatch { expected: rs.rank(), got: w.coords.len() }.into());
    }
    if w.to_ints().is_none() || !w.is_dominant() {
        return Err(CliError::Usage(format!("weight {s} is not dominant integral")));
    }
    Ok(w)
}

/// `standard` or `twisted:τ` with 1-based τ.
fn parse_form(sc: &StructureConstants, s: &str) -> Result<QFormSpec, CliError> {
    if s == "standard" {
        return Ok(standard_qform(sc));
    }
    let tau = s
        .strip_prefix("twisted:")
        .and_then(|t| t.parse::<usize>().ok())
        .filter(|&t| t >= 1 && t <= sc.rank())
        .ok_or_else(|| CliError::Usage(format!("form must be `standard` or `twisted:τ` with 1 ≤ τ ≤ {}, got {s:?}", sc.rank())))?;
    twisted_qform(sc, tau - 1).map_err(|e| CliError::Usage(e.to_string()))
}

fn cap(m: &ModuleArgs) -> usize {
    m.dim_cap.unwrap_or_else(dim_cap)
}

fn chevalley(cmd: &ChevalleyCmd, cli: &Cli) -> Result<String, CliError> {
    match cmd {
        ChevalleyCmd::Verify { ty, exhaustive, samples } => {
            let rs = root_system(ty)?;
            let sc = StructureConstants::new(&rs);
            let jacobi = if *exhaustive { sc.jacobi_exhaustive() } else { sc.jacobi_sampled(*samples, cli.seed) };
            let jacobi = jacobi.map_err(|e| CliError::Refusal(e.to_string()))?;
            let pairs = sc.n_pattern_holds().map_err(|e| CliError::Refusal(e.to_string()))?;
            let out = json!({
                "type": rs.label(),
                "dimension": sc.dim(),
                "mode": if *exhaustive { "exhaustive" } else { "sampled" },
                "seed": if *exhaustive { None } else { Some(cli.seed) },
                "jacobi_triples_checked": jacobi,
                "n_pairs_checked": pairs,
                "ok": true,
            });
            let tsv = tsv_table(
                "type\tdimension\tmode\tjacobi_triples_checked\tn_pairs_checked\tok",
                [format!("{}\t{}\t{}\t{jacobi}\t{pairs}\ttrue", rs.label(), sc.dim(), out["mode"].as_str().unwrap_or(""))],
            );
            render(&out, cli.format, Some(tsv))
        }
        ChevalleyCmd::Export(ty) => {
            let rs = root_system(ty)?;
            let sc = StructureConstants::new(&rs);
            let entries: Vec<_> = sc.n_entries().into_iter().map(|(a, b, n)| json!({"alpha": a, "beta": b, "n": n})).collect();
            let out = json!({"type": rs.label(), "roots": sc.roots(), "structure_constants": entries});
            render(&out, cli.format, Some(sc.export_tsv()))
        }
    }
}

fn sparse_entries(m: &SparseMatrix<BigRational>) -> Vec<(usize, usize, String)> {
    (0..m.rows())
        .flat_map(|i| m.row_entries(i).iter().map(move |(j, x)| (i, *j, format_rational_short(x))))
        .collect()
}

#[derive(Serialize)]
struct MultiplicityRow {
    weight: Vec<i64>,
    multiplicity: usize,
}

#[derive(Serialize)]
struct Matrices {
    e: Vec<Vec<(usize, usize, String)>>,
    f: Vec<Vec<(usize, usize, String)>>,
}

#[derive(Serialize)]
struct RepRecord {
    #[serde(rename = "type")]
    type_label: String,
    weight: Vec<i64>,
    dimension: usize,
    weyl_dimension: String,
    relations_ok: bool,
    multiplicities: Vec<MultiplicityRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrices: Option<Matrices>,
}

fn build(m: &ModuleArgs) -> Result<(RootSystem, Weight, HighestWeightModule), CliError> {
    let rs = root_system(&m.ty)?;
    let w = parse_weight(&rs, &m.weight)?;
    let module = build_irrep_with_cap(&rs, &w, cap(m))?;
    Ok((rs, w, module))
}

fn rep_build(m: &ModuleArgs, emit: bool, cli: &Cli) -> Result<String, CliError> {
    let (rs, w, module) = build(m)?;
    let mult: BTreeMap<Vec<i64>, usize> = module.multiplicities();
    let rows: Vec<MultiplicityRow> = module
        .spaces()
        .iter()
        .map(|s| MultiplicityRow { weight: s.weight.clone(), multiplicity: mult[&s.weight] })
        .collect();
    let l = rs.rank();
    let rec = RepRecord {
        type_label: rs.label(),
        weight: w.to_ints().expect("checked integral"),
        dimension: module.dim(),
        weyl_dimension: weyl_dimension(&rs, &w)?.to_string(),
        relations_ok: module.check_relations().is_ok(),
        multiplicities: rows,
        matrices: emit.then(|| Matrices {
            e: (0..l).map(|i| sparse_entries(module.e(i))).collect(),
            f: (0..l).map(|i| sparse_entries(module.f(i))).collect(),
        }),
    };
    let tsv = tsv_table("weight\tmultiplicity", rec.multiplicities.iter().map(|r| format!("{}\t{}", join_ints(&r.weight), r.multiplicity)));
    render(&rec, cli.format, Some(tsv))
}

fn rationality(cmd: &RationalityCmd, cli: &Cli) -> Result<String, CliError> {
    match cmd {
        RationalityCmd::Check { module, form } => {
            let rs = root_system(&module.ty)?;
            let w = parse_weight(&rs, &module.weight)?;
            let qf = parse_form(&StructureConstants::new(&rs), form)?;
            let v = has_q_form_verdict_with_cap(&rs, &w, &qf, cap(module))?;
            render(&v, cli.format, None)
        }
        RationalityCmd::Weight { ty, weight } => {
            let rs = root_system(ty)?;
            let w = parse_weight(&rs, weight)?;
            let r = weight_report(&rs, &w)?;
            let tsv = tsv_table(
                "type\tweight\tself_dual\tcoefficient_sum\tin_root_lattice\tfs_indicator",
                [format!(
                    "{}\t{}\t{}\t{}\t{}\t{}",
                    rs.label(),
                    weight,
                    r.self_dual,
                    format_rational_short(&r.coefficient_sum),
                    r.in_root_lattice,
                    r.fs_indicator.label()
                )],
            );
            render(&json!({"type": rs.label(), "weight": w.to_ints(), "report": r}), cli.format, Some(tsv))
        }
        RationalityCmd::Commutant { module, form } => {
            let (rs, w, m) = build(module)?;
            let qf = parse_form(m.structure_constants(), form)?;
            render(&commutant_record(&rs, &w, &m, &qf, cli.seed)?, cli.format, None)
        }
    }
}

fn commutant_record(
    rs: &RootSystem,
    w: &Weight,
    m: &HighestWeightModule,
    qf: &QFormSpec,
    seed: u64,
) -> Result<serde_json::Value, CliError> {
    let lattice = qform_generate(m, qf, &lattice_from_seed(m, Coefficients::GaussianRational))?;
    let gens = restriction_of_scalars(m, qf, &lattice)?;
    let outcome = commutant_with_seed(&gens, seed)?;
    let (r_verdict, splitting) = match &outcome {
        CommutantOutcome::Irreducible(c) => (Some(r_irreducibility_verdict(c)), real_splitting_witness(c)),
        CommutantOutcome::Reducible(_) => (None, None),
    };
    Ok(json!({
        "type": rs.label(),
        "weight": w.to_ints(),
        "form": qf.kind,
        "tau": qf.twist_root.map(|t| t + 1),
        "rational_dimension": gens.first().map(|g| g.rows()),
        "commutant": outcome,
        "r_verdict": r_verdict,
        "real_splitting_subspace_dimension": splitting,
    }))
}

fn classify_cmd(cmd: &ClassifyCmd, cli: &Cli) -> Result<String, CliError> {
    match cmd {
        ClassifyCmd::Table { max_rank, jobs } => {
            let rows = classify::classification_table(*max_rank, *jobs)?;
            let tsv = tsv_table(TSV_HEADER, rows.iter().map(ObstructionWitness::tsv_row));
            render(&rows, cli.format, Some(tsv))
        }
        ClassifyCmd::Relabel { max_so, max_su } => {
            let rows = classify::relabel_rows(*max_so, *max_su)?;
            let tsv = tsv_table(
                "algebra\ttype\tobstructed\tpredicted",
                rows.iter().map(|r| format!("{}\t{}\t{}\t{}", r.algebra, r.type_label, r.obstructed, r.predicted)),
            );
            render(&rows, cli.format, Some(tsv))
        }
        ClassifyCmd::DirectSum => render(&classify::direct_sum_example()?, cli.format, None),
    }
}

fn quat_ramify(a: &str, b: &str, cli: &Cli) -> Result<String, CliError> {
    let (a, b) = (parse_rational(a)?, parse_rational(b)?);
    let ramified = quaternion_ramification(&a, &b)?;
    let mut places = vec![Place::Prime(2)];
    for n in [a.numer(), a.denom(), b.numer(), b.denom()] {
        for p in prime_divisors(n, DEFAULT_TRIAL_BOUND)? {
            places.push(Place::prime(p.try_into().map_err(|_| CliError::Refusal("prime too large".into()))?)?);
        }
    }
    places.sort();
    places.dedup();
    places.push(Place::Infinity);
    let symbols = places
        .iter()
        .map(|&v| Ok(json!({"place": v, "symbol": hilbert_symbol(&a, &b, v)?})))
        .collect::<Result<Vec<_>, FieldError>>()?;
    let tsv = tsv_table(
        "place\tsymbol",
        symbols.iter().map(|s| format!("{}\t{}", s["place"].to_string().trim_matches('"'), s["symbol"])),
    );
    let out = json!({
        "a": format_rational_short(&a),
        "b": format_rational_short(&b),
        "ramified": ramified,
        "ramified_count_even": ramified.len() % 2 == 0,
        "split": ramified.is_empty(),
        "symbols": symbols,
    });
    render(&out, cli.format, Some(tsv))
}

fn demo_badgq(cli: &Cli) -> Result<String, CliError> {
    let rs = RootSystem::from_label("A3")?;
    let w = Weight::from_ints(&[0, 1, 0]);
    let cap = dim_cap();
    let module = build_irrep_with_cap(&rs, &w, cap)?;
    let sc = module.structure_constants();
    let a = doubled_root_coords(&module)?;
    let odd = a.iter().position(|x| x % 2 != 0).ok_or(RepError::NoOddTau)?;
    let even: Vec<usize> = (0..a.len()).filter(|&t| a[t] % 2 == 0).collect();

    let standard = standard_qform(sc);
    let twisted = twisted_qform(sc, odd).map_err(|e| CliError::Refusal(e.to_string()))?;
    let even_runs = even
        .iter()
        .map(|&t| {
            let qf = twisted_qform(sc, t).map_err(|e| CliError::Refusal(e.to_string()))?;
            let v = has_q_form_verdict_with_cap(&rs, &w, &qf, cap)?;
            Ok(json!({"tau": t + 1, "a_tau": a[t], "verdict": v.verdict}))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let out = json!({
        "type": rs.label(),
        "weight": [0, 1, 0],
        "doubled_root_coordinates": a,
        "standard": has_q_form_verdict_with_cap(&rs, &w, &standard, cap)?,
        "standard_commutant": commutant_record(&rs, &w, &module, &standard, cli.seed)?,
        "twisted": has_q_form_verdict_with_cap(&rs, &w, &twisted, cap)?,
        "twisted_commutant": commutant_record(&rs, &w, &module, &twisted, cli.seed)?,
        "twisted_even_tau": even_runs,
    });
    render(&out, cli.format, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sc() -> StructureConstants {
        StructureConstants::new(&RootSystem::from_label("A3").unwrap())
    }

    #[test]
    fn forms_parse_with_one_based_tau() {
        assert_eq!(parse_form(&sc(), "standard").unwrap().twist_root, None);
        assert_eq!(parse_form(&sc(), "twisted:1").unwrap().twist_root, Some(0));
        assert_eq!(parse_form(&sc(), "twisted:3").unwrap().twist_root, Some(2));
        for bad in ["twisted:0", "twisted:4", "twisted", "compact", "twisted:x"] {
            assert!(matches!(parse_form(&sc(), bad), Err(CliError::Usage(_))), "{bad}");
        }
    }

    #[test]
    fn weights_must_fit_the_rank() {
        let rs = RootSystem::from_label("B3").unwrap();
        assert!(parse_weight(&rs, "1,0,2").is_ok());
        assert!(matches!(parse_weight(&rs, "1,0"), Err(CliError::Usage(_))));
        assert!(matches!(parse_weight(&rs, "1,-1,0"), Err(CliError::Usage(_))));
        assert!(matches!(parse_weight(&rs, "1/2,0,0"), Err(CliError::Usage(_))));
    }

    #[test]
    fn refusals_and_usage_are_separated() {
        let cap = RepError::DimensionCap { dim: "248".into(), cap: 200 };
        assert!(matches!(CliError::from(cap), CliError::Refusal(_)));
        assert!(matches!(CliError::from(RepError::NotDominant), CliError::Usage(_)));
        assert!(matches!(CliError::from(RationalityError::Hypotheses("x".into())), CliError::Refusal(_)));
    }
}
