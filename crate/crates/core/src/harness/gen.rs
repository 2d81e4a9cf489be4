//! Type-directed generation of closed, well-typed intermediate terms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fd::unify_heads;
use crate::syntax::{FdClassEnv, FdDict, FdExpr, FdQ, FdType, MethodEnv};

const DICT_DEPTH: usize = 4;

/// A closed term of type `Bool` with roughly `size_bound` constructors,
/// drawing on the methods that `sigma` can resolve at small ground types.
/// Deterministic in `seed`.
pub fn generate_fd_term(seed: u64, size_bound: usize, sigma: &MethodEnv, tc: &FdClassEnv) -> FdExpr {
    let mut g = Gen { rng: ChaCha8Rng::seed_from_u64(seed), sigma, tc, fresh: 0 };
    let mut heads = g.method_heads(None);
    g.term(&FdType::Bool, size_bound.max(1), &mut heads)
}

struct Gen<'a> {
    rng: ChaCha8Rng,
    sigma: &'a MethodEnv,
    tc: &'a FdClassEnv,
    fresh: usize,
}

/// A term usable in head position, with its monomorphic type.
#[derive(Clone)]
struct Head {
    expr: FdExpr,
    ty: FdType,
}

fn bb() -> FdType {
    FdType::arrow(FdType::Bool, FdType::Bool)
}

fn class_args() -> [FdType; 3] {
    [FdType::Bool, bb(), FdType::arrow(bb(), FdType::Bool)]
}

fn is_mono(t: &FdType) -> bool {
    match t {
        FdType::Bool => true,
        FdType::Arrow(a, b) => is_mono(a) && is_mono(b),
        _ => false,
    }
}

/// Argument types of `t` when its result, after some arguments, is `want`.
fn spine_to(t: &FdType, want: &FdType) -> Option<Vec<FdType>> {
    let mut args = Vec::new();
    let mut cur = t;
    loop {
        if cur == want && !args.is_empty() {
            return Some(args);
        }
        match cur {
            FdType::Arrow(a, b) => {
                args.push((**a).clone());
                cur = b;
            }
            _ => return None,
        }
    }
}

impl Gen<'_> {
    fn name(&mut self, base: &str) -> String {
        self.fresh += 1;
        format!("{base}{}", self.fresh)
    }

    /// Resolves a ground constraint against `sigma`, or against the local
    /// dictionary `local` when it matches exactly.
    fn dict(&self, q: &FdQ, local: Option<(&str, &FdQ)>, depth: usize) -> Option<FdDict> {
        if let Some((d, lq)) = local {
            if lq == q {
                return Some(FdDict::var(d));
            }
        }
        if depth == 0 {
            return None;
        }
        for entry in &self.sigma.entries {
            let Some(sub) = unify_heads(&entry.scheme.head, &entry.scheme.binders, q, &[]) else {
                continue;
            };
            let types: Option<Vec<FdType>> = entry.scheme.binders.iter().map(|b| sub.get(b).cloned()).collect();
            let Some(types) = types else { continue };
            let dicts: Option<Vec<FdDict>> =
                entry.scheme.context.iter().map(|c| self.dict(&c.subst(&sub), local, depth - 1)).collect();
            if let Some(dicts) = dicts {
                return Some(FdDict::con(&entry.ctor, types, dicts));
            }
        }
        None
    }

    /// Method occurrences at small ground class arguments whose type, once
    /// quantifiers are instantiated at `Bool` and constraints resolved, is
    /// monomorphic.
    fn method_heads(&self, local: Option<(&str, &FdQ)>) -> Vec<Head> {
        let mut out = Vec::new();
        for class in &self.tc.entries {
            for arg in class_args() {
                let q = FdQ { class: class.class.clone(), arg: arg.clone() };
                let Some(d) = self.dict(&q, local, DICT_DEPTH) else { continue };
                let mut ty = class.method_type.subst1(&class.class_var, &arg);
                let mut e = FdExpr::Method(d, class.method.clone());
                loop {
                    let next = match &ty {
                        FdType::Forall(a, body) => {
                            e = FdExpr::tyapp(e, FdType::Bool);
                            body.subst1(a, &FdType::Bool)
                        }
                        FdType::QArrow(mq, body) => match self.dict(mq, local, DICT_DEPTH) {
                            Some(md) => {
                                e = FdExpr::dapp(e, md);
                                (**body).clone()
                            }
                            None => break,
                        },
                        _ => break,
                    };
                    ty = next;
                }
                if is_mono(&ty) {
                    out.push(Head { expr: e, ty });
                }
            }
        }
        out
    }

    fn small_type(&mut self) -> FdType {
        if self.rng.gen_bool(0.7) {
            FdType::Bool
        } else {
            bb()
        }
    }

    fn leaf(&mut self, ty: &FdType, heads: &mut Vec<Head>) -> FdExpr {
        let exact: Vec<FdExpr> = heads.iter().filter(|h| &h.ty == ty).map(|h| h.expr.clone()).collect();
        if !exact.is_empty() && self.rng.gen_bool(0.4) {
            return exact[self.rng.gen_range(0..exact.len())].clone();
        }
        match ty {
            FdType::Arrow(a, b) => {
                let x = self.name("x");
                heads.push(Head { expr: FdExpr::var(&x), ty: (**a).clone() });
                let body = self.leaf(b, heads);
                heads.pop();
                FdExpr::lam(&x, (**a).clone(), body)
            }
            _ if self.rng.gen_bool(0.5) => FdExpr::True,
            _ => FdExpr::False,
        }
    }

    fn term(&mut self, ty: &FdType, size: usize, heads: &mut Vec<Head>) -> FdExpr {
        if size <= 1 {
            return self.leaf(ty, heads);
        }
        let n = size - 1;
        match self.rng.gen_range(0..7) {
            0 => self.leaf(ty, heads),
            1 => {
                let apps: Vec<(FdExpr, Vec<FdType>)> =
                    heads.iter().filter_map(|h| spine_to(&h.ty, ty).map(|args| (h.expr.clone(), args))).collect();
                if apps.is_empty() {
                    return self.term(ty, n, heads);
                }
                let (f, args) = apps[self.rng.gen_range(0..apps.len())].clone();
                let each = (n / args.len()).max(1);
                args.iter().fold(f, |acc, a| {
                    let arg = self.term(a, each, heads);
                    FdExpr::app(acc, arg)
                })
            }
            2 => {
                let a = self.small_type();
                let x = self.name("x");
                heads.push(Head { expr: FdExpr::var(&x), ty: a.clone() });
                let body = self.term(ty, n / 2 + 1, heads);
                heads.pop();
                let arg = self.term(&a, n / 2 + 1, heads);
                FdExpr::app(FdExpr::lam(&x, a, body), arg)
            }
            3 => {
                let a = self.small_type();
                let x = self.name("l");
                let bound = self.term(&a, n / 2 + 1, heads);
                heads.push(Head { expr: FdExpr::var(&x), ty: a.clone() });
                let body = self.term(ty, n / 2 + 1, heads);
                heads.pop();
                FdExpr::let_(&x, a, bound, body)
            }
            4 => {
                let x = self.name("y");
                let id = FdExpr::tylam("a", FdExpr::lam(&x, FdType::var("a"), FdExpr::var(&x)));
                let arg = self.term(ty, n, heads);
                FdExpr::app(FdExpr::tyapp(id, ty.clone()), arg)
            }
            5 => self.dict_abstraction(ty, n, heads),
            _ => match ty {
                FdType::Arrow(a, b) => {
                    let x = self.name("x");
                    heads.push(Head { expr: FdExpr::var(&x), ty: (**a).clone() });
                    let body = self.term(b, n, heads);
                    heads.pop();
                    FdExpr::lam(&x, (**a).clone(), body)
                }
                _ => self.term(ty, n, heads),
            },
        }
    }

    /// `(λ{δ : q}. e) {D}`, where `e` may use methods through `δ`.
    fn dict_abstraction(&mut self, ty: &FdType, n: usize, heads: &mut Vec<Head>) -> FdExpr {
        let mut options = Vec::new();
        for class in &self.tc.entries {
            for arg in class_args() {
                let q = FdQ { class: class.class.clone(), arg };
                if let Some(d) = self.dict(&q, None, DICT_DEPTH) {
                    options.push((q, d));
                }
            }
        }
        if options.is_empty() {
            return self.term(ty, n, heads);
        }
        let (q, d) = options[self.rng.gen_range(0..options.len())].clone();
        let delta = self.name("δ");
        let local = self.method_heads(Some((&delta, &q)));
        let mark = heads.len();
        heads.extend(local.into_iter().filter(|h| mentions_dict(&h.expr, &delta)));
        let body = self.term(ty, n, heads);
        heads.truncate(mark);
        FdExpr::dapp(FdExpr::dlam(&delta, q, body), d)
    }
}

fn mentions_dict(e: &FdExpr, d: &str) -> bool {
    e.free_names().dicts.contains(d)
}
