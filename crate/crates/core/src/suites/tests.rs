use super::*;

fn quick(seed: u64) -> SuiteParams {
    SuiteParams { samples: Some(3), seed, ..Default::default() }
}

#[test]
fn registry_names_are_distinct() {
    let mut names: Vec<&str> = registry().iter().map(|s| s.name).collect();
    names.sort();
    names.dedup();
    assert_eq!(names.len(), 14);
}

#[test]
fn unknown_suite_and_bad_params_are_rejected() {
    assert_eq!(run_suite("nope", &quick(1)), Err(Error::UnknownSuite("nope".into())));
    let bad_q = SuiteParams { q: Some(9), ..quick(1) };
    assert!(matches!(run_suite("kato-morel", &bad_q), Err(Error::InvalidParam(_))));
    let bad_degree = SuiteParams { max_degree: Some(40), ..quick(1) };
    assert!(matches!(run_suite("generation", &bad_degree), Err(Error::InvalidParam(_))));
    let even = SuiteParams { q: Some(4), ..quick(1) };
    assert!(run_suite("nilpotence", &even).is_err());
}

#[test]
fn reports_are_deterministic() {
    let p = SuiteParams { q: Some(3), ..quick(42) };
    let mut a = run_suite("characterization", &p).unwrap();
    let mut b = run_suite("characterization", &p).unwrap();
    a.elapsed_ms = 0;
    b.elapsed_ms = 0;
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert!(a.cases_run > 0);
}

#[test]
fn every_suite_passes_at_small_scale() {
    for s in registry() {
        let p = match s.name {
            "kato-morel" | "composite-square" => SuiteParams { q: Some(3), max_degree: Some(4), ..quick(7) },
            "prime-degree-independence" => SuiteParams { max_degree: Some(3), ..quick(7) },
            _ => quick(7),
        };
        let r = run_suite(s.name, &p).unwrap();
        if s.name == "lam-formulas" {
            continue;
        }
        assert!(r.pass, "{}: {:?}", s.name, &r.failures[..r.failures.len().min(3)]);
        assert!(r.cases_run > 0, "{}", s.name);
    }
}

