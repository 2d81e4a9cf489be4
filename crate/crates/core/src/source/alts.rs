use std::collections::HashSet;
use std::hash::Hash;

use crate::syntax::Alpha;

/// A capped, alpha-deduplicated list of alternatives. `truncated` records
/// that some derivations were cut off by a limit, either because the cap was
/// reached or because resolution went too deep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alts<T> {
    pub items: Vec<T>,
    pub truncated: bool,
}

impl<T> Alts<T> {
    pub fn empty(truncated: bool) -> Self {
        Alts { items: Vec::new(), truncated }
    }

    pub fn one(x: T) -> Self {
        Alts { items: vec![x], truncated: false }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

impl<T: Alpha + Clone + Hash + Eq> Alts<T> {
    /// Dedups up to alpha, keeping first occurrences, then applies the cap.
    pub fn collect(items: impl IntoIterator<Item = T>, truncated: bool, cap: usize) -> Self {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let mut truncated = truncated;
        for x in items {
            if seen.insert(x.canonical()) {
                if out.len() == cap {
                    truncated = true;
                    break;
                }
                out.push(x);
            }
        }
        Alts { items: out, truncated }
    }

    pub fn map<U: Alpha + Clone + Hash + Eq>(&self, cap: usize, f: impl Fn(&T) -> U) -> Alts<U> {
        Alts::collect(self.items.iter().map(f), self.truncated, cap)
    }

    /// Cartesian product, left component varying slowest.
    pub fn product<B, U: Alpha + Clone + Hash + Eq>(
        &self,
        other: &Alts<B>,
        cap: usize,
        f: impl Fn(&T, &B) -> U,
    ) -> Alts<U> {
        let pairs = self.items.iter().flat_map(|a| other.items.iter().map(move |b| (a, b)));
        Alts::collect(pairs.map(|(a, b)| f(a, b)), self.truncated || other.truncated, cap)
    }

    /// Cartesian product of a sequence of lists, in order.
    pub fn sequence(lists: Vec<Alts<T>>, cap: usize) -> Alts<Vec<T>> {
        let mut acc: Alts<Vec<T>> = Alts::one(Vec::new());
        for l in lists {
            acc = acc.product(&l, cap, |prefix, x| {
                let mut v = prefix.clone();
                v.push(x.clone());
                v
            });
        }
        acc
    }
}
