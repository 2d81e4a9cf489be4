use std::collections::HashSet;

use super::Name;

/// Identifier namespaces. Term variables, type variables and dictionary
/// variables never collide with one another.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Namespace {
    Term,
    Type,
    Dict,
}

/// Deterministic supply of fresh names, one counter per namespace.
///
/// Given the same traversal order the supply hands out the same names, which
/// keeps elaborations reproducible across runs.
#[derive(Clone, Debug, Default)]
pub struct FreshSupply {
    term: u32,
    ty: u32,
    dict: u32,
}

impl FreshSupply {
    pub fn new() -> Self {
        Self::default()
    }

    /// Next name in `ns`, built from `base` and the namespace counter.
    pub fn next(&mut self, ns: Namespace, base: &str) -> Name {
        let counter = match ns {
            Namespace::Term => &mut self.term,
            Namespace::Type => &mut self.ty,
            Namespace::Dict => &mut self.dict,
        };
        *counter += 1;
        format!("{base}{counter}")
    }

    /// Next name in `ns` that `taken` rejects neither.
    pub fn next_avoiding(&mut self, ns: Namespace, base: &str, taken: impl Fn(&str) -> bool) -> Name {
        loop {
            let n = self.next(ns, base);
            if !taken(&n) {
                return n;
            }
        }
    }
}

/// Primes `base` until it is not rejected by `taken`. Used to rename binders
/// during capture-avoiding substitution.
pub fn prime_away(base: &str, taken: impl Fn(&str) -> bool) -> Name {
    let mut candidate = format!("{base}'");
    while taken(&candidate) {
        candidate.push('\'');
    }
    candidate
}

pub fn prime_away_set(base: &str, taken: &HashSet<Name>) -> Name {
    prime_away(base, |n| taken.contains(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counters_are_per_namespace() {
        let mut s = FreshSupply::new();
        assert_eq!(s.next(Namespace::Term, "x"), "x1");
        assert_eq!(s.next(Namespace::Type, "a"), "a1");
        assert_eq!(s.next(Namespace::Term, "x"), "x2");
        assert_eq!(s.next(Namespace::Dict, "δ"), "δ1");
    }

    #[test]
    fn same_traversal_same_names() {
        let run = || {
            let mut s = FreshSupply::new();
            (0..4).map(|_| s.next(Namespace::Dict, "d")).collect::<Vec<_>>()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn priming_skips_taken_names() {
        let taken: HashSet<Name> = ["a'".to_string()].into_iter().collect();
        assert_eq!(prime_away_set("a", &taken), "a''");
        let mut s = FreshSupply::new();
        assert_eq!(s.next_avoiding(Namespace::Type, "b", |n| n == "b1"), "b2");
    }
}
