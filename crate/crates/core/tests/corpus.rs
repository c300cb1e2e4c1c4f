use std::fs;
use std::path::{Path, PathBuf};

use phiform::config::{Expectation, FieldConfig, SymmetryExpectation, VectorFieldConfig};
use phiform::eed::{eed_residuals_insertion, eed_residuals_star};
use phiform::expr::ZeroOptions;
use phiform::maxwell::EMField3;
use phiform::symmetry::{conformal_residual, symmetry_pde_residuals};

fn files(dir: &str) -> Vec<PathBuf> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(dir);
    let mut out: Vec<PathBuf> = fs::read_dir(root)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    out.sort();
    assert!(!out.is_empty());
    out
}

fn load_fields() -> Vec<(FieldConfig, EMField3)> {
    files("fields")
        .into_iter()
        .map(|p| {
            let cfg = FieldConfig::from_json(&fs::read_to_string(&p).unwrap()).unwrap();
            let f = cfg.field().unwrap();
            (cfg, f)
        })
        .collect()
}

#[test]
fn field_expectations_hold_in_every_formulation() {
    let opts = ZeroOptions::default();
    for (cfg, f) in load_fields() {
        let want = cfg.expect.unwrap() == Expectation::Solution;
        for check in f.checks(&opts) {
            if want {
                assert!(
                    check.verdict.is_zero(),
                    "{:?} {}: {}",
                    cfg.name,
                    check.name,
                    check.residual
                );
            }
        }
        let any_nonzero = f.checks(&opts).iter().any(|c| c.verdict.is_nonzero());
        assert_eq!(!any_nonzero, want, "{:?}", cfg.name);
    }
}

#[test]
fn solutions_satisfy_star_and_insertion_forms() {
    for (cfg, f) in load_fields() {
        if cfg.expect != Some(Expectation::Solution) {
            continue;
        }
        let form = f.build_f();
        for r in eed_residuals_star(&form)
            .unwrap()
            .iter()
            .chain(eed_residuals_insertion(&form).unwrap().iter())
        {
            assert!(r.is_zero().is_symbolic(), "{:?}", cfg.name);
        }
    }
}

#[test]
fn field_configs_round_trip() {
    for (cfg, _) in load_fields() {
        assert_eq!(FieldConfig::from_json(&cfg.to_json()).unwrap(), cfg);
    }
}

#[test]
fn vector_field_expectations() {
    for p in files("vector_fields") {
        let cfg = VectorFieldConfig::from_json(&fs::read_to_string(&p).unwrap()).unwrap();
        let x = cfg.field().unwrap();
        let pde_zero = symmetry_pde_residuals(&x)
            .iter()
            .all(|(_, r)| r.is_zero().is_zero());
        let table_zero = conformal_residual(&x)
            .is_zero_with(&ZeroOptions::default())
            .is_zero();
        let want = cfg.expect.unwrap() == SymmetryExpectation::Symmetry;
        assert_eq!(pde_zero, want, "{:?}", cfg.name);
        assert_eq!(table_zero, want, "{:?}", cfg.name);
    }
}
