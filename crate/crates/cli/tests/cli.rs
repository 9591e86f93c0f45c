use std::process::{Command, Output};

use osp_toda::diffop::DiffOperator;
use osp_toda::osp::{AlgebraTable, BasisDocument};
use osp_toda::radial::RadialDocument;
use osp_toda::roots::RootsDocument;
use osp_toda::toda::TodaDocument;
use osp_toda::uea::{CasimirDocument, Uea};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_osp-toda")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).expect("utf-8")
}

fn pretty<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).unwrap() + "\n"
}

const STABLE: &[&[&str]] = &[
    &["basis", "--l", "2"],
    &["roots", "--type", "bc", "--l", "3"],
    &["casimir", "--l", "2"],
    &["radial", "--l", "2", "--mu"],
    &["toda", "--l", "2", "--g", "1,2,3", "--canonicalize"],
    &["verify", "--l", "1", "--suite", "cartan,toda"],
    &["numeric", "--case", "liouville"],
];

#[test]
fn output_is_byte_stable() {
    for args in STABLE {
        let a = stdout(args);
        assert_eq!(a, stdout(args), "{args:?}");
        assert!(a.ends_with("}\n"));
        let v: Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["schema"], "osp-toda/1", "{args:?}");
    }
}

#[test]
fn basis_round_trips() {
    let s = stdout(&["basis", "--l", "2"]);
    let doc: BasisDocument = serde_json::from_str(&s).unwrap();
    let table = doc.validate().unwrap();
    assert_eq!(pretty(&table.to_json()), s);
}

#[test]
fn roots_round_trip() {
    for t in ["b0", "c", "bc"] {
        let s = stdout(&["roots", "--type", t, "--l", "3"]);
        let doc: RootsDocument = serde_json::from_str(&s).unwrap();
        assert_eq!(pretty(&doc), s);
    }
}

#[test]
fn casimir_round_trips() {
    let s = stdout(&["casimir", "--l", "2"]);
    let doc: CasimirDocument = serde_json::from_str(&s).unwrap();
    let table = AlgebraTable::new(2).unwrap();
    let u = Uea::new(&table);
    let c = u.from_json(&doc.terms).unwrap();
    assert_eq!(c, u.casimir_normal_form());
    let again = CasimirDocument { terms: u.to_json(&c), ..doc };
    assert_eq!(pretty(&again), s);
}

#[test]
fn radial_rank_one_symbolic() {
    let s = stdout(&["radial", "--l", "1", "--couplings", "symbolic"]);
    let doc: RadialDocument = serde_json::from_str(&s).unwrap();
    let op = doc.operator().unwrap();
    assert_eq!(op.pretty(), "-d1^2 + 2*g1^2*e^(q1) + 4*g1^4*e^(2q1)");
    assert_eq!(pretty(&RadialDocument { operator: op.to_json(), ..doc }), s);
}

#[test]
fn toda_matches_specialized_radial_part() {
    // chain, e^(q2), e^(2 q2) at g1 = g2 = 1
    let t: TodaDocument = serde_json::from_str(&stdout(&["toda", "--type", "bc", "--l", "2", "--g", "2,2,4"])).unwrap();
    let r: RadialDocument = serde_json::from_str(&stdout(&["radial", "--l", "2", "--couplings", "1,1"])).unwrap();
    let toda = DiffOperator::from_json(2, &t.operator).unwrap();
    assert_eq!(toda, r.operator().unwrap());
}

#[test]
fn toda_canonical_form() {
    let s = stdout(&["toda", "--l", "1", "--g", "2,12", "--canonicalize"]);
    let doc: TodaDocument = serde_json::from_str(&s).unwrap();
    assert_eq!(doc.unit_couplings, Some(false));
    assert_eq!(pretty(&doc), s);
    let v: Value = serde_json::from_str(&s).unwrap();
    assert_eq!(v["shift"][0]["ln"]["2"], "-1");
    assert_eq!(v["invariant"][0]["scalar"], "3 + 0*w + 0*w^2 + 0*w^3");

    // g2(2e) = g2(e)^2 lands on unit couplings
    let v: Value = serde_json::from_str(&stdout(&["toda", "--l", "2", "--g", "5,3,9", "--canonicalize"])).unwrap();
    assert_eq!(v["unit_couplings"], true);
}

#[test]
fn verify_rank_two_passes() {
    let out = run(&["verify", "--l", "2", "--suite", "all"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], true);
    let suites = v["suites"].as_array().unwrap();
    assert_eq!(suites.len(), osp_toda::verify::SUITES.len());
    assert!(suites.iter().all(|s| s["passed"] == true && s.get("millis").is_none()));
}

#[test]
fn timing_is_opt_in() {
    let v: Value = serde_json::from_str(&stdout(&["verify", "--l", "1", "--suite", "cartan", "--timing"])).unwrap();
    assert!(v["suites"][0]["millis"].is_u64());
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify", "--l", "2", "--suite", "nope"][..],
        &["basis", "--l", "0"],
        &["toda", "--l", "1", "--g", "1"],
        &["toda", "--l", "1", "--g", "0,1"],
        &["radial", "--l", "2", "--couplings", "1"],
        &["numeric", "--case", "box", "--l", "2", "--kappa2", "1,1", "--n", "100"],
        &["frobnicate"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn numeric_cases_pass() {
    for args in [
        &["numeric", "--case", "liouville", "--mu", "0.5,1,2"][..],
        &["numeric", "--case", "bc1", "--b", "2", "--a", "0.5"],
        &["numeric", "--case", "box", "--l", "1", "--kappa2", "3"],
    ] {
        let v: Value = serde_json::from_str(&stdout(args)).unwrap();
        assert_eq!(v["passed"], true, "{args:?}");
    }
}
