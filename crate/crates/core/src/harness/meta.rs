use serde::Serialize;

use crate::fd::{fd_step, FdChecker};
use crate::fuel::Fuel;
use crate::syntax::{Alpha, FdClassEnv, FdExpr, FdTypingEnv, MethodEnv};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MetaReport {
    pub steps_checked: u64,
    pub preservation_ok: bool,
    pub progress_ok: bool,
    pub fuel_ok: bool,
    /// The first term at which a check failed.
    pub failing_term: Option<String>,
}

impl MetaReport {
    pub fn clean(&self) -> bool {
        self.preservation_ok && self.progress_ok && self.fuel_ok
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "steps: {}, preservation: {}, progress: {}, fuel: {}\n",
            self.steps_checked, self.preservation_ok, self.progress_ok, self.fuel_ok
        );
        if let Some(t) = &self.failing_term {
            out.push_str(&format!("failing term: {t}\n"));
        }
        out
    }
}

/// Walks the evaluation trace of `e`, re-typechecking after every step.
///
/// Typing uses a trusting checker, so an implementation in `sigma` that
/// does not match its scheme is only noticed once evaluation unfolds it.
pub fn check_metatheory(sigma: &MethodEnv, tc: &FdClassEnv, e: &FdExpr, fuel: u64) -> MetaReport {
    let mut report =
        MetaReport { steps_checked: 0, preservation_ok: true, progress_ok: true, fuel_ok: true, failing_term: None };
    let empty = FdTypingEnv::new();
    let mut checker = FdChecker::trusting(sigma, tc);
    let ty = match checker.expr(&empty, e) {
        Ok((t, _)) => t,
        Err(_) => {
            report.preservation_ok = false;
            report.failing_term = Some(e.to_string());
            return report;
        }
    };
    let mut fuel = Fuel::new(fuel);
    let mut cur = e.clone();
    while !cur.is_value() {
        if !fuel.burn() {
            report.fuel_ok = false;
            report.failing_term = Some(cur.to_string());
            break;
        }
        let Some(next) = fd_step(sigma, &cur) else {
            report.progress_ok = false;
            report.failing_term = Some(cur.to_string());
            break;
        };
        report.steps_checked += 1;
        match checker.expr(&empty, &next) {
            Ok((t, _)) if t.alpha_eq(&ty) => cur = next,
            _ => {
                report.preservation_ok = false;
                report.failing_term = Some(next.to_string());
                break;
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_fd_expr;
    use crate::syntax::{FdClassEntry, FdConstraintScheme, FdQ, FdType, MethodEntry};

    fn eq_env(imp: &str) -> (MethodEnv, FdClassEnv) {
        let tc = FdClassEnv {
            entries: vec![FdClassEntry {
                method: "eq".into(),
                class: "Eq".into(),
                class_var: "a".into(),
                method_type: FdType::arrow(FdType::var("a"), FdType::arrow(FdType::var("a"), FdType::Bool)),
            }],
        };
        let sigma = MethodEnv {
            entries: vec![MethodEntry {
                ctor: "D1_Eq".into(),
                scheme: FdConstraintScheme {
                    binders: vec![],
                    context: vec![],
                    head: FdQ { class: "Eq".into(), arg: FdType::Bool },
                },
                method: "eq".into(),
                imp: parse_fd_expr(imp).unwrap(),
            }],
        };
        (sigma, tc)
    }

    #[test]
    fn value_takes_no_steps() {
        let (s, tc) = eq_env("\\x : Bool. \\y : Bool. True");
        let r = check_metatheory(&s, &tc, &FdExpr::True, 10);
        assert_eq!(r.steps_checked, 0);
        assert!(r.clean() && r.failing_term.is_none());
    }

    #[test]
    fn well_typed_trace() {
        let (s, tc) = eq_env("\\x : Bool. \\y : Bool. y");
        let e = parse_fd_expr("D1_Eq.eq True False").unwrap();
        let r = check_metatheory(&s, &tc, &e, 100);
        assert!(r.clean(), "{}", r.to_text());
        assert_eq!(r.steps_checked, 3);
    }

    #[test]
    fn broken_implementation_breaks_preservation() {
        let (s, tc) = eq_env("\\x : Bool. x");
        let e = parse_fd_expr("D1_Eq.eq True False").unwrap();
        let r = check_metatheory(&s, &tc, &e, 100);
        assert!(!r.preservation_ok);
        assert!(r.failing_term.is_some());
    }

    #[test]
    fn fuel_is_reported() {
        let (s, tc) = eq_env("\\x : Bool. \\y : Bool. y");
        let e = parse_fd_expr("D1_Eq.eq True False").unwrap();
        let r = check_metatheory(&s, &tc, &e, 1);
        assert!(!r.fuel_ok && r.preservation_ok && r.progress_ok);
    }
}
