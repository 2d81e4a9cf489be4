use crate::fuel::{EvalError, Fuel};
use crate::syntax::{FdDict, FdExpr, MethodEnv};

/// One call-by-name step. Method projection from a constructor application
/// unfolds to the constructor's implementation, looked up in the whole of
/// `sigma`, applied to the constructor's type and dictionary arguments.
pub fn fd_step(sigma: &MethodEnv, e: &FdExpr) -> Option<FdExpr> {
    match e {
        FdExpr::App(f, a) => match f.as_ref() {
            FdExpr::Lam(x, _, body) => Some(body.subst_term(x, a)),
            _ => fd_step(sigma, f).map(|f2| FdExpr::App(Box::new(f2), a.clone())),
        },
        FdExpr::DApp(f, d) => match f.as_ref() {
            FdExpr::DLam(x, _, body) => Some(body.subst_dict(x, d)),
            _ => fd_step(sigma, f).map(|f2| FdExpr::DApp(Box::new(f2), d.clone())),
        },
        FdExpr::TyApp(f, t) => match f.as_ref() {
            FdExpr::TyLam(a, body) => Some(body.subst_type(a, t)),
            _ => fd_step(sigma, f).map(|f2| FdExpr::TyApp(Box::new(f2), t.clone())),
        },
        FdExpr::Method(FdDict::Con { ctor, types, dicts }, _) => {
            let entry = sigma.get(ctor)?;
            let applied = types.iter().fold(entry.imp.clone(), |acc, t| FdExpr::tyapp(acc, t.clone()));
            Some(dicts.iter().fold(applied, |acc, d| FdExpr::dapp(acc, d.clone())))
        }
        FdExpr::Let(x, _, e1, e2) => Some(e2.subst_term(x, e1)),
        FdExpr::Method(FdDict::Var(_), _)
        | FdExpr::True
        | FdExpr::False
        | FdExpr::Var(_)
        | FdExpr::Lam(..)
        | FdExpr::DLam(..)
        | FdExpr::TyLam(..) => None,
    }
}

pub fn fd_eval_counted(sigma: &MethodEnv, e: &FdExpr, fuel: &mut Fuel) -> Result<(FdExpr, u64), EvalError> {
    let mut cur = e.clone();
    let mut steps = 0u64;
    loop {
        if cur.is_value() {
            return Ok((cur, steps));
        }
        if !fuel.burn() {
            return Err(EvalError::FuelExhausted { steps });
        }
        match fd_step(sigma, &cur) {
            Some(next) => {
                cur = next;
                steps += 1;
            }
            None => return Err(EvalError::Stuck { term: cur.to_string() }),
        }
    }
}

pub fn fd_eval(sigma: &MethodEnv, e: &FdExpr, fuel: u64) -> Result<FdExpr, EvalError> {
    fd_eval_counted(sigma, e, &mut Fuel::new(fuel)).map(|(v, _)| v)
}
