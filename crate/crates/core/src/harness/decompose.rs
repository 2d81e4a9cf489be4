use serde::Serialize;

use super::HarnessError;
use crate::fd::fd_typecheck_expr;
use crate::source::{typecheck_program, Limits, ProgramTyping};
use crate::syntax::{dedup_alpha, Alpha, FdTypingEnv, SrcProgram, TgtExpr};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub direct: usize,
    pub composed: usize,
    pub truncated: bool,
    /// Direct elaborations with no alpha-equal composed counterpart.
    pub only_direct: Vec<String>,
    /// Composed elaborations with no alpha-equal direct counterpart.
    pub only_composed: Vec<String>,
}

impl DecompositionReport {
    pub fn equal(&self) -> bool {
        self.only_direct.is_empty() && self.only_composed.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "direct: {}, composed: {}, truncated: {}\nequal: {}\n",
            self.direct,
            self.composed,
            self.truncated,
            self.equal()
        );
        for e in &self.only_direct {
            out.push_str(&format!("- direct only: {e}\n"));
        }
        for e in &self.only_composed {
            out.push_str(&format!("+ composed only: {e}\n"));
        }
        out
    }
}

/// The composed target elaborations of a typed program, one per
/// intermediate elaboration, in enumeration order.
pub fn composed_elaborations(t: &ProgramTyping) -> Result<Vec<TgtExpr>, HarnessError> {
    let empty = FdTypingEnv::new();
    t.fd_elabs.alternatives.iter().map(|a| Ok(fd_typecheck_expr(&a.sigma, &t.tc, &empty, &a.expr)?.1)).collect()
}

/// Compares, modulo alpha and after removing alpha-duplicates, the direct
/// target elaborations of `prog` with the composition of every
/// intermediate elaboration with its target translation.
pub fn check_decomposition(prog: &SrcProgram, limits: Limits) -> Result<DecompositionReport, HarnessError> {
    let t = typecheck_program(prog, limits)?;
    let composed = dedup_alpha(composed_elaborations(&t)?);
    let direct = dedup_alpha(t.tgt_elabs.alternatives.clone());
    let missing = |xs: &[TgtExpr], ys: &[TgtExpr]| -> Vec<String> {
        xs.iter().filter(|x| !ys.iter().any(|y| x.alpha_eq(y))).map(|x| x.to_string()).collect()
    };
    Ok(DecompositionReport {
        direct: direct.len(),
        composed: composed.len(),
        truncated: t.fd_elabs.truncated || t.tgt_elabs.truncated,
        only_direct: missing(&direct, &composed),
        only_composed: missing(&composed, &direct),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_program;

    #[test]
    fn ground_instance_decomposes() {
        let p = parse_program(
            "class Eq a where { eq : a -> a -> Bool };
             instance Eq Bool where { eq = \\x. \\y. y };
             (eq :: Bool -> Bool -> Bool) True False",
        )
        .unwrap();
        let r = check_decomposition(&p, Limits::default()).unwrap();
        assert!(r.equal(), "{}", r.to_text());
        assert_eq!((r.direct, r.composed), (1, 1));
    }
}
