use std::fmt;

/// Maximum number of assumptions an [`Env`] can hold.
pub const MAX_ASSUMPTIONS: usize = 128;

/// A set of assumptions, as a bitset over assumption indices.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Env(u128);

impl Env {
    pub const EMPTY: Env = Env(0);

    pub fn single(assumption: usize) -> Self {
        assert!(assumption < MAX_ASSUMPTIONS, "assumption index {assumption} out of range");
        Env(1 << assumption)
    }

    pub fn from_bits(bits: u128) -> Self {
        Env(bits)
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    pub fn union(self, other: Env) -> Env {
        Env(self.0 | other.0)
    }

    pub fn without(self, assumption: usize) -> Env {
        Env(self.0 & !(1 << assumption))
    }

    pub fn contains(self, assumption: usize) -> bool {
        self.0 >> assumption & 1 == 1
    }

    pub fn is_subset_of(self, other: Env) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn assumptions(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let bit = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(bit)
        })
    }
}

impl fmt::Debug for Env {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Env {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.assumptions().map(|a| a.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// Drops every environment that is a superset of another one in the list,
/// and sorts the remainder.
pub fn minimize(envs: &mut Vec<Env>) {
    envs.sort_by_key(|e| (e.len(), *e));
    envs.dedup();
    let mut kept: Vec<Env> = Vec::with_capacity(envs.len());
    for &e in envs.iter() {
        if !kept.iter().any(|k| k.is_subset_of(e)) {
            kept.push(e);
        }
    }
    kept.sort();
    *envs = kept;
}
