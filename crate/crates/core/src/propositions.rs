//! The Boolean algebra of propositions.
//!
//! A proposition is a set of possible worlds, stored as a bitset over an
//! explicitly enumerated [`WorldUniverse`]. Equality, conjunction and
//! entailment are exact word-wise operations on that bitset. Every universe
//! gets a fresh identity token at construction, and binary operations between
//! propositions of different universes fail with [`Error::UniverseMismatch`].

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

/// Largest universe accepted by [`WorldUniverse::new`].
pub const DEFAULT_MAX_WORLDS: usize = 1 << 20;

static NEXT_UNIVERSE: AtomicU64 = AtomicU64::new(1);

/// Identity token of a [`WorldUniverse`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UniverseId(u64);

/// How worlds of a universe are described in debug output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WorldLabels {
    /// World `i` is the truth assignment whose bit `j` gives atom `j`.
    Assignments(Vec<String>),
    /// World `i` is the `i`-th hypothesis of a frame of discernment.
    Elements(Vec<String>),
    Anonymous,
}

/// The finite set of worlds on which a backend's semantics is evaluated.
#[derive(Debug, Clone)]
pub struct WorldUniverse {
    id: UniverseId,
    world_count: usize,
    labels: WorldLabels,
}

impl WorldUniverse {
    pub fn new(world_count: usize, labels: WorldLabels) -> Result<Self> {
        Self::with_limit(world_count, labels, DEFAULT_MAX_WORLDS)
    }

    pub fn with_limit(world_count: usize, labels: WorldLabels, max: usize) -> Result<Self> {
        if world_count == 0 {
            return Err(Error::EmptyUniverse);
        }
        if world_count > max {
            return Err(Error::TooManyWorlds {
                count: world_count,
                max,
            });
        }
        Ok(Self {
            id: UniverseId(NEXT_UNIVERSE.fetch_add(1, Ordering::Relaxed)),
            world_count,
            labels,
        })
    }

    pub fn id(&self) -> UniverseId {
        self.id
    }

    pub fn world_count(&self) -> usize {
        self.world_count
    }

    pub fn labels(&self) -> &WorldLabels {
        &self.labels
    }

    /// Human-readable descriptor of world `index`.
    pub fn label(&self, index: usize) -> String {
        match &self.labels {
            WorldLabels::Assignments(atoms) => {
                let parts: Vec<String> = atoms
                    .iter()
                    .enumerate()
                    .map(|(j, atom)| {
                        if index >> j & 1 == 1 {
                            atom.clone()
                        } else {
                            format!("~{atom}")
                        }
                    })
                    .collect();
                parts.join(" ")
            }
            WorldLabels::Elements(elements) => elements[index].clone(),
            WorldLabels::Anonymous => format!("w{index}"),
        }
    }

    /// The tautology: every world.
    pub fn top(&self) -> Proposition {
        Proposition::bottom(self).complement()
    }

    /// The false proposition: no world.
    pub fn bottom(&self) -> Proposition {
        Proposition::bottom(self)
    }

    /// Proposition holding exactly at the listed worlds. Indices past the end
    /// of the universe are ignored.
    pub fn from_worlds(&self, worlds: impl IntoIterator<Item = usize>) -> Proposition {
        let mut p = self.bottom();
        for w in worlds {
            if w < self.world_count {
                p.words[w / 64] |= 1 << (w % 64);
            }
        }
        p
    }

    /// Proposition holding at the worlds for which `holds` returns true.
    pub fn from_fn(&self, mut holds: impl FnMut(usize) -> bool) -> Proposition {
        let mut p = self.bottom();
        for w in 0..self.world_count {
            if holds(w) {
                p.words[w / 64] |= 1 << (w % 64);
            }
        }
        p
    }
}

pub fn top(u: &WorldUniverse) -> Proposition {
    u.top()
}

pub fn bottom(u: &WorldUniverse) -> Proposition {
    u.bottom()
}

/// A set of worlds of one universe, in canonical bitset form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Proposition {
    universe: UniverseId,
    len: usize,
    words: Box<[u64]>,
}

impl Proposition {
    fn bottom(u: &WorldUniverse) -> Self {
        Self {
            universe: u.id,
            len: u.world_count,
            words: vec![0; u.world_count.div_ceil(64)].into_boxed_slice(),
        }
    }

    pub fn universe(&self) -> UniverseId {
        self.universe
    }

    pub fn world_count(&self) -> usize {
        self.len
    }

    pub fn contains(&self, world: usize) -> bool {
        world < self.len && self.words[world / 64] >> (world % 64) & 1 == 1
    }

    /// Number of worlds in the proposition.
    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_top(&self) -> bool {
        self.count() == self.len
    }

    /// Iterates the member worlds in increasing order.
    pub fn worlds(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i * 64 + bit)
            })
        })
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.universe == other.universe {
            Ok(())
        } else {
            Err(Error::UniverseMismatch)
        }
    }

    fn zip_with(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Result<Self> {
        self.check(other)?;
        let words = self
            .words
            .iter()
            .zip(other.words.iter())
            .map(|(&a, &b)| op(a, b))
            .collect();
        Ok(Self {
            universe: self.universe,
            len: self.len,
            words,
        })
    }

    /// Conjunction.
    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a & b)
    }

    /// Disjunction.
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a | b)
    }

    /// Negation.
    pub fn complement(&self) -> Self {
        let mut words: Box<[u64]> = self.words.iter().map(|w| !w).collect();
        let tail = self.len % 64;
        if tail != 0 {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
        Self {
            universe: self.universe,
            len: self.len,
            words,
        }
    }

    /// Logical entailment: every world of `self` is a world of `other`.
    pub fn entails(&self, other: &Self) -> Result<bool> {
        self.check(other)?;
        Ok(self
            .words
            .iter()
            .zip(other.words.iter())
            .all(|(&a, &b)| a & !b == 0))
    }

    /// True when the two propositions share no world.
    pub fn is_disjoint(&self, other: &Self) -> Result<bool> {
        self.check(other)?;
        Ok(self
            .words
            .iter()
            .zip(other.words.iter())
            .all(|(&a, &b)| a & b == 0))
    }
}

impl fmt::Debug for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const SHOWN: usize = 16;
        let worlds: Vec<usize> = self.worlds().take(SHOWN + 1).collect();
        write!(f, "{{")?;
        for (i, w) in worlds.iter().take(SHOWN).enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{w}")?;
        }
        if worlds.len() > SHOWN {
            write!(f, ",... ({} worlds)", self.count())?;
        }
        write!(f, "}}")
    }
}
