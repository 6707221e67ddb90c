//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Criterion 3 is stated in a form that does not hold for every field. The
//! run prints FAIL for the statement as written, then checks that the
//! counterexamples are exactly the predicted ones and that the corrected
//! formulas hold everywhere. Any other outcome makes the run fail.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use mwt_core::ext::ExtensionDesc;
use mwt_core::gram::{scharlau_transfer, trace_form_transfer, RationalExtension, ScharlauFunctional};
use mwt_core::gw::{GwElement, GwField};
use mwt_core::kmw::{KmwClass, KmwFq};
use mwt_core::suites::{run_suite, Report, SuiteParams};
use mwt_core::transfers::{TransferMode, Transferer};
use mwt_core::{field_of_order, Fe, FiniteField, Poly, Result};

type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

const TIME_LIMIT: Duration = Duration::from_secs(60);

struct Outcome {
    pass: bool,
    detail: String,
    /// A failure that matches the documented analysis exactly.
    expected_failure: bool,
}

fn params(q: Option<u64>, max_degree: Option<u32>, samples: u32) -> SuiteParams {
    SuiteParams { q, max_degree, samples: Some(samples), seed: 1, mode: None }
}

/// Runs `suite` once per parameter set and requires a pass, enough cases and
/// the time budget for each run.
fn suites(suite: &str, runs: &[SuiteParams], min_cases: u64) -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for p in runs {
        let start = Instant::now();
        let r: Report = match run_suite(suite, p) {
            Ok(r) => r,
            Err(e) => return Outcome { pass: false, detail: format!("{suite}: {e}"), expected_failure: false },
        };
        let took = start.elapsed();
        pass &= r.pass && r.cases_run >= min_cases && took < TIME_LIMIT;
        details.push(format!(
            "{} q={} {} cases, {} failures, {:.1} s",
            suite,
            r.params["q"],
            r.cases_run,
            r.failures.len(),
            took.as_secs_f64()
        ));
        if let Some(f) = r.failures.first() {
            details.push(format!("first failure {} expected {} got {}", f.case, f.expected, f.got));
        }
    }
    Outcome { pass, detail: details.join("; "), expected_failure: false }
}

fn gw(x: Result<KmwFq>) -> GwElement {
    match x.expect("transfer").class() {
        KmwClass::Gw(g) => g,
        KmwClass::Zero => panic!("transfer of a nonzero form vanished"),
        other => panic!("not a degree-0 class: {other:?}"),
    }
}

fn same(a: &GwElement, b: &GwElement) -> bool {
    a.equals(b).expect("same field")
}

fn exts(base: &FiniteField, d: usize) -> impl Iterator<Item = ExtensionDesc> + '_ {
    Poly::monic_irreducibles(base, d).map(move |f| ExtensionDesc::from_min_poly(base, &f).expect("irreducible"))
}

fn lam() -> Outcome {
    let mut literal = BTreeSet::new();
    let mut predicted = BTreeSet::new();
    let mut corrected_failures = Vec::new();
    let mut cases = 0;
    let mut contradicted = 0;
    for q in [3u64, 5] {
        let base = field_of_order(q).unwrap();
        let gf = GwField::Finite(base.clone());
        for d in [3usize, 5] {
            // The trace form of an odd-degree extension is d<1>; it equals n_eps
            // exactly when (-1)^((d-1)/2) is a square.
            let sign = if (d - 1) / 2 % 2 == 0 { Fe::ONE } else { base.neg(Fe::ONE) };
            if !base.is_square(sign) {
                predicted.insert(format!("Tr_geo(1) over GF({q}) in degree {d}"));
            }
            let n_eps = GwElement::n_epsilon(&gf, d as u64);
            let plain = GwElement::one(&gf).scale(d as i64);
            for e in exts(&base, d) {
                let mut tr = Transferer::new();
                let one = KmwFq::integer(e.top(), 1);
                let geo = gw(tr.geo(&e, &one));
                cases += 1;
                if !same(&geo, &n_eps) {
                    contradicted += 1;
                    literal.insert(format!("Tr_geo(1) over GF({q}) in degree {d}"));
                }
                if !same(&geo, &plain) || !same(&gw(tr.bt(&e, &one)), &n_eps) {
                    corrected_failures.push(format!("odd degree {d} over GF({q}) by {}", e.min_poly().format(&base, "t")));
                }
            }
        }
    }
    for q in [3u64, 5, 7] {
        let base = field_of_order(q).unwrap();
        let gf = GwField::Finite(base.clone());
        for e in exts(&base, 2) {
            let norm = e.norm(e.generator());
            let name = format!("Tr_bt(1) over GF({q}) by {}", e.min_poly().format(&base, "t"));
            if !base.is_square(norm) {
                predicted.insert(name.clone());
            }
            let lam = GwElement::one(&gf).add(&GwElement::angle(&base, base.neg(norm)).unwrap()).unwrap();
            let mut tr = Transferer::new();
            cases += 1;
            if !same(&gw(tr.bt(&e, &KmwFq::integer(e.top(), 1))), &lam) {
                contradicted += 1;
                literal.insert(name);
            }
            if !same(&gw(tr.bt(&e, &KmwFq::angle(e.top(), e.generator()).unwrap())), &lam) {
                corrected_failures.push(format!("Tr_bt(<x>) over GF({q}) by {}", e.min_poly().format(&base, "t")));
            }
        }
    }
    let qq = GwField::Rationals;
    let cube_root = RationalExtension::from_ints(&[-2, 0, 0, 1]).unwrap();
    let geo = cube_root.trace_form_transfer(&[cube_root.one()]).unwrap();
    cases += 1;
    predicted.insert("Tr_geo(1) over Q(2^(1/3))".to_string());
    if !same(&geo, &GwElement::n_epsilon(&qq, 3)) {
        contradicted += 1;
        literal.insert("Tr_geo(1) over Q(2^(1/3))".to_string());
    }
    // The trace form of x^3 - 2 is <3> + h.
    let expected = GwElement::from_rational_diagonal(&[3.into()]).unwrap().add(&GwElement::hyperbolic(&qq)).unwrap();
    if !same(&geo, &expected) {
        corrected_failures.push(format!("trace form of Q(2^(1/3)) is {}", geo.serialize()));
    }
    for (name, coeffs, square_norm) in [("Q(sqrt 2)", [-2i64, 0, 1], false), ("Q(sqrt -1)", [1, 0, 1], true)] {
        let ext = RationalExtension::from_ints(&coeffs).unwrap();
        let norm = ext.norm(&ext.generator());
        let lam = GwElement::one(&qq).add(&GwElement::from_rational_diagonal(&[-norm]).unwrap()).unwrap();
        let bt = |u: Vec<_>| ext.scharlau_transfer(&[u], ScharlauFunctional::Coefficient(1)).unwrap();
        cases += 1;
        let label = format!("Tr_bt(1) over {name}");
        if !square_norm {
            predicted.insert(label.clone());
        }
        if !same(&bt(ext.one()), &lam) {
            contradicted += 1;
            literal.insert(label);
        }
        if !same(&bt(ext.generator()), &lam) {
            corrected_failures.push(format!("Tr_bt(<x>) over {name}"));
        }
    }
    let matches = literal == predicted;
    let detail = format!(
        "{} of {} cases contradict the statement as written: {}; corrected forms (Tr_geo(1) = d<1>, Tr_bt(1) = n_eps, Tr_bt(<x>) = (n-1)_eps + <-N(x)>) {}; counterexamples {} the prediction",
        contradicted,
        cases,
        grouped(&literal),
        if corrected_failures.is_empty() { "hold on every case".to_string() } else { format!("fail on {}", corrected_failures.join(", ")) },
        if matches { "match" } else { "do not match" },
    );
    Outcome { pass: literal.is_empty(), detail, expected_failure: matches && corrected_failures.is_empty() && !literal.is_empty() }
}

/// `Tr_bt(1) over GF(3) by f` and `... by g` become `Tr_bt(1) over GF(3) (2 presentations)`.
fn grouped(labels: &BTreeSet<String>) -> String {
    let mut counts: Vec<(String, usize)> = Vec::new();
    for l in labels {
        let head = l.split(" by ").next().unwrap().to_string();
        match counts.last_mut() {
            Some((h, c)) if *h == head => *c += 1,
            _ => counts.push((head, 1)),
        }
    }
    counts
        .into_iter()
        .map(|(h, c)| if c == 1 { h } else { format!("{h} ({c} presentations)") })
        .collect::<Vec<_>>()
        .join(", ")
}

fn degree_zero_oracle() -> Outcome {
    let mut cases = 0;
    let mut bad = Vec::new();
    for q in [3u64, 5] {
        let base = field_of_order(q).unwrap();
        for d in 2..=4usize {
            for e in exts(&base, d) {
                let top = e.top();
                let mut tr = Transferer::new();
                for b in [Fe::ONE, top.nonsquare(), e.generator()] {
                    let form = GwElement::angle(top, b).unwrap();
                    let beta = KmwFq::from_gw(&form).unwrap();
                    let geo = gw(tr.transfer(&e, &beta, TransferMode::Geo));
                    let bt = gw(tr.transfer(&e, &beta, TransferMode::Bt));
                    cases += 2;
                    if !same(&geo, &trace_form_transfer(&e, &form).unwrap()) {
                        bad.push(format!("geo <{}> over {:?}", top.format(b), e));
                    }
                    if !same(&bt, &scharlau_transfer(&e, &form, ScharlauFunctional::Coefficient(d - 1)).unwrap()) {
                        bad.push(format!("bt <{}> over {:?}", top.format(b), e));
                    }
                }
            }
        }
    }
    Outcome {
        pass: bad.is_empty(),
        detail: format!("{cases} comparisons over every monogenic presentation of degree 2..4 over GF(3), GF(5); {} mismatches{}", bad.len(), bad.first().map_or(String::new(), |b| format!(", first {b}"))),
        expected_failure: false,
    }
}

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("kato-morel tower independence", Box::new(|| suites("kato-morel", &[params(Some(3), Some(6), 50), params(Some(5), Some(6), 50)], 50 * 4 * 2))),
        ("characterization identity", Box::new(|| suites("characterization", &[params(None, None, 200)], 200 * 3 * 2))),
        ("Lam trace formulas", Box::new(lam)),
        ("degree-0 oracle equivalence", Box::new(degree_zero_oracle)),
        ("nilpotence of <t> - 1", Box::new(|| suites("nilpotence", &[params(None, None, 1)], 1))),
        ("ramification square, e = 2", Box::new(|| suites("r3a", &[params(Some(3), Some(2), 100)], 100))),
        ("base change of transfers", Box::new(|| suites("r1c-strong", &[params(Some(3), Some(4), 30)], 4 * 30))),
        ("homotopy exact sequence", Box::new(|| suites("homotopy-ses", &[params(None, None, 100)], 2 * 100))),
        ("coprime-degree kill", Box::new(|| suites("coprime-kill", &[params(None, None, 1)], 1))),
        (
            "generation by symbols",
            Box::new(|| {
                let g = suites("generation", &[params(None, Some(4), 200)], 200 * 3 * 2);
                let p = suites("prime-generation", &[params(None, Some(3), 200)], 200 * 2 * 2);
                Outcome { pass: g.pass && p.pass, detail: format!("{}; {}", g.detail, p.detail), expected_failure: false }
            }),
        ),
    ];
    let mut ok = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        println!("{} criterion {:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
        if o.expected_failure {
            println!("     criterion {:>2} fails exactly as analysed; the corrected statements pass", i + 1);
        }
        ok &= o.pass || o.expected_failure;
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
