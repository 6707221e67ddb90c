use super::*;
use crate::suites::{run_suite, SuiteParams};

fn pretty(src: &str) -> String {
    eval_expr(src).unwrap_or_else(|e| panic!("{src}: {e}")).pretty()
}

fn truth(src: &str) -> bool {
    match eval_expr(src) {
        Ok(Value::Bool(b)) => b,
        other => panic!("{src}: {other:?}"),
    }
}

/// Every way a value can be printed in a report.
fn renderings(v: &Value) -> Vec<String> {
    match v {
        Value::Kmw(x) => {
            let mut out = vec![x.canonical().serialize()];
            if let KmwClass::Gw(g) = x.class() {
                out.push(g.serialize());
            }
            out
        }
        Value::GwQ(g) => vec![g.serialize()],
        other => vec![other.pretty()],
    }
}

#[test]
fn documented_examples() {
    let h = pretty("n_eps(GF(3), 2)");
    assert_eq!(h, "<1,-1> = h (rank 2, disc 2)");
    assert!(pretty("transfer(geo, GF(9)/GF(3) by t^2+1, gw<1>)").contains("= h"));
    assert_eq!(pretty("residue(t, [t,2] over GF(3)(t))"), "[2]");
    let j = eval_expr("residue(t, [t,2] over GF(3)(t))").unwrap().to_json();
    assert_eq!(j["value"], "[2]");
    assert_eq!(j["class"]["kind"], "milnor");
}

#[test]
fn literal_fields_are_inferred() {
    assert!(truth("equal(2 + eta*[2] over GF(3), h over GF(3))"));
    assert!(truth("equal(transfer(bt, GF(9)/GF(3), 1), h)"));
    assert!(truth("equal(2 - transfer(bt, GF(9)/GF(3), 1), -eta*[2])"));
    assert!(truth("equal((gw<2> - gw<1> over GF(3))^3, 0)"));
    assert!(truth("equal(eta^2*[2,2] over GF(5), 0)"));
    assert!(matches!(eval_expr("eta"), Err(Error::Semantic(_))));
}

#[test]
fn function_field_operations() {
    assert_eq!(pretty("defect([(t+1)/(t^2+1), t] over GF(5)(t))"), "0");
    assert_eq!(pretty("specialize(t-1, [t+1] over GF(3)(t))"), "[2]");
    assert!(truth("equal(residue(inf, [t] over GF(3)(t)), -1)"));
    assert!(truth("equal(residue(t, compose([t] over GF(5)(t), t^3)), n_eps(GF(5), 3))"));
    assert!(matches!(eval_expr("residue(t^2+1, [t] over GF(5)(t))"), Err(Error::Reducible(_))));
}

#[test]
fn towers_and_generators() {
    assert!(truth("equal(transfer(geo, GF(3) -> t^2+1 -> t^2+x+1, 1 + eta*[x]), transfer(geo, GF(81)/GF(3), 1 + eta*[x]))"));
    assert!(matches!(eval_expr("transfer(geo, GF(3) -> t^2+1 -> t^2+x, 1)"), Err(Error::Reducible(_))));
    let e = eval_expr("transfer(geo, GF(9)/GF(3) by t^2+2*t+2 at x, 1)");
    assert!(matches!(e, Err(Error::Semantic(ref m)) if m.contains("minimal polynomial")), "{e:?}");
    assert_eq!(pretty("minpoly(GF(9)/GF(3), x+1)"), "t^2+t+2");
    assert_eq!(pretty("norm(GF(9)/GF(3), x)"), "1");
    assert_eq!(pretty("norm(GF(3) -> t^2+2*t+2, x+1)"), "2");
    assert_eq!(pretty("trace(GF(3) -> t^2+1 -> t^2+x+1, x)"), pretty("trace(GF(81)/GF(3), x)"));
    assert_eq!(pretty("transition(GF(27)/GF(3), GF(27)/GF(3) at x+1)"), "1");
    assert_eq!(pretty("factor(t^3-t over GF(3))"), "(t)*(t+1)*(t+2)");
    assert_eq!(pretty("decompose(GF(27)/GF(3), [x^2+1])"), "(-5) * [t]");
    assert_eq!(pretty("witt(eta*[2] over GF(3))"), "Witt class over GF(3) with dimension parity 0 and signed discriminant 2");
}

#[test]
fn rational_transfers() {
    let g = eval_expr("transfer(geo, Q by t^3-2, 1)").unwrap();
    assert_eq!(g.pretty(), "<-3,3,3> (rank 3, disc -3, signature 1, hasse -1 at 2,3)");
    assert!(truth("equal(transfer(bt, Q by t^2-2, 1), h over Q)"));
    assert!(truth("equal(transfer(bt, Q by t^2+1, gw<x>), 1 + gw<-1> over Q)"));
    assert!(matches!(eval_expr("transfer(bt, Q by t^2+1, [x])"), Err(Error::Unsupported(_))));
}

#[test]
fn errors_carry_positions() {
    match eval_expr("transfer(bt, GF(9)/GF(3), 1 +)") {
        Err(Error::Parse { pos, .. }) => assert_eq!(pos, 29),
        other => panic!("{other:?}"),
    }
    assert!(matches!(eval_expr("n_eps(GF(6), 2)"), Err(Error::Semantic(m)) if m.contains("at 6")));
    assert!(matches!(eval_expr("[0] over GF(3)"), Err(Error::ZeroUnit(_))));
}

fn replay(suite: &str, mode: TransferMode) -> usize {
    let params = SuiteParams { seed: 1, samples: Some(3), mode: Some(mode), ..Default::default() };
    let report = run_suite(suite, &params).unwrap();
    for f in &report.failures {
        let v = eval_expr(&f.case).unwrap_or_else(|e| panic!("{}: {e}", f.case));
        assert!(renderings(&v).contains(&f.got), "{} gave {:?}, report says {}", f.case, renderings(&v), f.got);
    }
    report.failures.len()
}

#[test]
fn report_failures_replay() {
    assert!(replay("lam-formulas", TransferMode::Geo) > 0);
    assert!(replay("r1c-weak", TransferMode::Bt) + replay("r1c-strong", TransferMode::Bt) > 0);
}

/// Case strings in the formats the suites emit, each checked for the value
/// the suite asserts.
#[test]
fn suite_case_formats_evaluate() {
    let ext = "GF(9)/GF(3) by t^2+1 at x";
    assert!(truth(&format!("equal(transfer(geo, {ext}, res(2 + eta*[2] over GF(3), GF(9)) * ([x])), (2 + eta*[2] over GF(3)) * transfer(geo, {ext}, [x]))")));
    assert!(truth("equal(residue(t, compose([t+1,t] over GF(5)(t), t^3)), n_eps(GF(5), 3) * residue(t, [t+1,t] over GF(5)(t)))"));
    assert_eq!(pretty("defect(eta*[t^2+1,2*(t+1)/(t^2+2)] over GF(3)(t))"), "0");
    let lhs = "res(transfer(geo, GF(3) -> t^2+1 at x, 1 + eta*[x]), GF(9))";
    assert_eq!(pretty(lhs), "<1,1> = h (rank 2, disc 1)");
}
