use std::path::Path;

use nilcontact::catalog::{
    deta, embedded_catalog, find, fixtures, load_dir, parse_algebra, run_checks, theorem_slice, CatalogError,
    ExpectedClass, Shape, Status, Suite, Theorem,
};

const DIR: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/catalog");

#[test]
fn every_file_parses() {
    let mut cat = load_dir(Path::new(DIR)).unwrap();
    let mut embedded = embedded_catalog();
    cat.sort_by(|a, b| a.key.cmp(&b.key));
    embedded.sort_by(|a, b| a.key.cmp(&b.key));
    assert_eq!(cat, embedded);
    assert_eq!(cat.len(), 49);
    assert_eq!(theorem_slice(&cat, Theorem::T31).len(), 23);
    assert_eq!(theorem_slice(&cat, Theorem::T32).len(), 25);
    for e in theorem_slice(&cat, Theorem::T32) {
        assert_eq!(e.expected_class, Some(ExpectedClass::KContactOnly), "{}", e.key);
        assert_eq!(e.dim(), 7);
    }
}

#[test]
fn printed_deta_matches_the_brackets() {
    for e in embedded_catalog() {
        if let Some(printed) = &e.printed_deta {
            assert_eq!(&deta(&e).unwrap(), printed, "{}", e.key);
        }
    }
    let errata: Vec<_> = fixtures().into_iter().filter(|e| e.key.ends_with("_printed")).collect();
    assert_eq!(errata.len(), 3);
    for e in &errata {
        let r = run_checks(e, Suite::All, 0, false);
        let failed: Vec<_> = r.iter().filter(|r| r.status == Status::Fail).map(|r| r.check.as_str()).collect();
        assert_eq!(failed, ["closedness"], "{}", e.key);
    }
}

#[test]
fn shapes() {
    let cat = embedded_catalog();
    assert!(matches!(find(&cat, "h14").unwrap().shape(), Shape::Base { .. }));
    assert!(matches!(find(&cat, "g24_1").unwrap().shape(), Shape::Extension(_)));
    assert!(matches!(find(&cat, "nope"), Err(CatalogError::UnknownKey(_))));
}

#[test]
fn duplicate_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(Path::new(DIR).join("g24_1.alg")).unwrap();
    std::fs::write(dir.path().join("a.alg"), &text).unwrap();
    std::fs::write(dir.path().join("b.alg"), &text).unwrap();
    assert!(matches!(load_dir(dir.path()), Err(CatalogError::DuplicateKey(k)) if k == "g24_1"));
}

#[test]
fn parse_errors_carry_positions() {
    let err = parse_algebra("dim 3\n[e1,e2] = e3\n[e1,e9] = e2\n", "bad").unwrap_err();
    assert_eq!(err.line, 3);
    assert!(err.column >= 1);
    let err = parse_algebra("dim 3\n[e1,e2] = e3 +\n", "bad").unwrap_err();
    assert_eq!(err.line, 2);
}

#[test]
fn whole_catalog_passes() {
    for e in embedded_catalog() {
        for r in run_checks(&e, Suite::All, 7, false) {
            assert_ne!(r.status, Status::Fail, "{} {}", e.key, r.check);
        }
    }
}
