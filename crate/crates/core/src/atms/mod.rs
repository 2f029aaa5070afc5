//! Assumption-based truth maintenance with probabilistic assumptions.
//!
//! Each tell of `<x_t, x_f>` on a sentence creates two assumptions, "the
//! sentence is true" with probability `x_t` and "the sentence is false" with
//! probability `x_f`, exclusive of each other. Beliefs are probabilities of
//! the assumption sets that derive a node, conditioned on consistency; they
//! agree with Dempster's rule on the same tells.

mod belief;
mod cnf;
mod env;
mod oracle;

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};

pub use belief::TellTriple;
pub use cnf::{clauses, Clause, Literal, MAX_CLAUSES};
pub use env::{minimize, Env, MAX_ASSUMPTIONS};
pub use oracle::MAX_ORACLE_TELLS;

pub type NodeId = usize;

/// What a node stands for.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeKey {
    /// A ground literal.
    Literal { atom: String, positive: bool },
    /// Told sentence `tell` (1-based), or its negation.
    Sentence { tell: usize, positive: bool },
    /// The node of assumption `i`.
    Assumption(usize),
    /// A problem-solver datum with no built-in meaning.
    Datum(String),
    Falsum,
}

impl fmt::Display for NodeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeKey::Literal { atom, positive: true } => write!(f, "{atom}"),
            NodeKey::Literal { atom, positive: false } => write!(f, "~{atom}"),
            NodeKey::Sentence { tell, positive: true } => write!(f, "<tell {tell}>"),
            NodeKey::Sentence { tell, positive: false } => write!(f, "~<tell {tell}>"),
            NodeKey::Assumption(i) => write!(f, "#{i}"),
            NodeKey::Datum(name) => write!(f, "{name}"),
            NodeKey::Falsum => write!(f, "falsum"),
        }
    }
}

#[derive(Debug, Clone)]
struct Node {
    key: NodeKey,
    label: Vec<Env>,
    consumers: Vec<usize>,
}

/// `antecedents => consequent`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Justification {
    pub antecedents: Vec<NodeId>,
    pub consequent: NodeId,
}

#[derive(Debug, Clone)]
pub struct Assumption {
    pub name: String,
    pub node: NodeId,
}

/// ATMS network plus the tells that created its probabilistic assumptions.
#[derive(Debug, Clone)]
pub struct AtmsState {
    nodes: Vec<Node>,
    index: HashMap<NodeKey, NodeId>,
    justifications: Vec<Justification>,
    seen: HashSet<Justification>,
    assumptions: Vec<Assumption>,
    nogoods: Vec<Env>,
    tells: Vec<TellTriple>,
    falsum: NodeId,
    /// When false, justifications are recorded but labels are not updated.
    propagate: bool,
}

impl Default for AtmsState {
    fn default() -> Self {
        Self::new()
    }
}

impl AtmsState {
    pub fn new() -> Self {
        let falsum = Node {
            key: NodeKey::Falsum,
            label: Vec::new(),
            consumers: Vec::new(),
        };
        Self {
            nodes: vec![falsum],
            index: HashMap::from([(NodeKey::Falsum, 0)]),
            justifications: Vec::new(),
            seen: HashSet::new(),
            assumptions: Vec::new(),
            nogoods: Vec::new(),
            tells: Vec::new(),
            falsum: 0,
            propagate: true,
        }
    }

    pub fn falsum(&self) -> NodeId {
        self.falsum
    }

    /// The node for `key`, created with an empty label if it is new.
    pub fn node(&mut self, key: NodeKey) -> NodeId {
        if let Some(&id) = self.index.get(&key) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(Node {
            key: key.clone(),
            label: Vec::new(),
            consumers: Vec::new(),
        });
        self.index.insert(key, id);
        id
    }

    /// The node of a ground literal. Creating either sign of an atom also
    /// creates the other and the justification `(a, ~a) => falsum`.
    pub fn literal(&mut self, atom: &str, positive: bool) -> NodeId {
        let key = |positive| NodeKey::Literal {
            atom: atom.to_string(),
            positive,
        };
        if let Some(&id) = self.index.get(&key(positive)) {
            return id;
        }
        let pos = self.node(key(true));
        let neg = self.node(key(false));
        self.add_justification(&[pos, neg], self.falsum);
        if positive {
            pos
        } else {
            neg
        }
    }

    pub fn find(&self, key: &NodeKey) -> Option<NodeId> {
        self.index.get(key).copied()
    }

    pub fn key(&self, node: NodeId) -> &NodeKey {
        &self.nodes[node].key
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Adds an assumption and its node, labelled `{{i}}`.
    pub fn add_assumption(&mut self, name: impl Into<String>) -> Result<(usize, NodeId)> {
        let i = self.assumptions.len();
        if i >= MAX_ASSUMPTIONS {
            return Err(Error::TooManyAssumptions(i + 1));
        }
        let node = self.node(NodeKey::Assumption(i));
        self.assumptions.push(Assumption {
            name: name.into(),
            node,
        });
        if self.propagate {
            self.update_label(node, vec![Env::single(i)]);
        }
        Ok((i, node))
    }

    pub fn assumptions(&self) -> &[Assumption] {
        &self.assumptions
    }

    /// Records `antecedents => consequent` and propagates labels. Repeated
    /// justifications are ignored.
    pub fn add_justification(&mut self, antecedents: &[NodeId], consequent: NodeId) {
        let mut ants = antecedents.to_vec();
        ants.sort_unstable();
        ants.dedup();
        let j = Justification {
            antecedents: ants,
            consequent,
        };
        if !self.seen.insert(j.clone()) {
            return;
        }
        let id = self.justifications.len();
        for &a in &j.antecedents {
            self.nodes[a].consumers.push(id);
        }
        self.justifications.push(j);
        if self.propagate {
            self.propagate_from(id);
        }
    }

    pub fn justifications(&self) -> &[Justification] {
        &self.justifications
    }

    /// Minimal consistent environments deriving `node`.
    pub fn label(&self, node: NodeId) -> &[Env] {
        &self.nodes[node].label
    }

    pub fn label_of(&self, key: &NodeKey) -> Option<&[Env]> {
        self.find(key).map(|n| self.label(n))
    }

    /// Minimal inconsistent environments.
    pub fn nogoods(&self) -> &[Env] {
        &self.nogoods
    }

    pub fn is_nogood(&self, env: Env) -> bool {
        self.nogoods.iter().any(|n| n.is_subset_of(env))
    }

    fn propagate_from(&mut self, start: usize) {
        let mut queue = VecDeque::from([start]);
        while let Some(j) = queue.pop_front() {
            let envs = self.antecedent_envs(j);
            let consequent = self.justifications[j].consequent;
            if !envs.is_empty() && self.update_label(consequent, envs) {
                queue.extend(self.nodes[consequent].consumers.iter().copied());
            }
        }
    }

    /// Consistent unions of one environment from each antecedent label.
    fn antecedent_envs(&self, j: usize) -> Vec<Env> {
        let mut acc = vec![Env::EMPTY];
        for &a in &self.justifications[j].antecedents {
            let label = &self.nodes[a].label;
            if label.is_empty() {
                return Vec::new();
            }
            let mut next = Vec::with_capacity(acc.len() * label.len());
            for &x in &acc {
                for &y in label {
                    let e = x.union(y);
                    if !self.is_nogood(e) {
                        next.push(e);
                    }
                }
            }
            minimize(&mut next);
            if next.is_empty() {
                return next;
            }
            acc = next;
        }
        acc
    }

    /// Adds environments to a label, keeping it minimal. Returns whether the
    /// label changed.
    fn update_label(&mut self, node: NodeId, envs: Vec<Env>) -> bool {
        if node == self.falsum {
            let mut changed = false;
            for e in envs {
                changed |= self.add_nogood(e);
            }
            return changed;
        }
        let mut changed = false;
        for e in envs {
            if self.is_nogood(e) {
                continue;
            }
            let label = &mut self.nodes[node].label;
            if label.iter().any(|x| x.is_subset_of(e)) {
                continue;
            }
            label.retain(|x| !e.is_subset_of(*x));
            label.push(e);
            changed = true;
        }
        if changed {
            self.nodes[node].label.sort();
        }
        changed
    }

    fn add_nogood(&mut self, e: Env) -> bool {
        if self.is_nogood(e) {
            return false;
        }
        self.nogoods.retain(|n| !e.is_subset_of(*n));
        self.nogoods.push(e);
        self.nogoods.sort();
        // anything built on an inconsistent environment is itself a superset
        // of it, so pruning needs no further propagation
        for (i, node) in self.nodes.iter_mut().enumerate() {
            if i != self.falsum {
                node.label.retain(|x| !e.is_subset_of(*x));
            }
        }
        self.nodes[self.falsum].label = self.nogoods.clone();
        true
    }

    /// Human-readable listing of every node label and the nogoods, in a
    /// deterministic order.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, a) in self.assumptions.iter().enumerate() {
            let _ = writeln!(out, "assumption {i}: {}", a.name);
        }
        let mut order: Vec<NodeId> = (0..self.nodes.len())
            .filter(|&n| n != self.falsum && !matches!(self.nodes[n].key, NodeKey::Assumption(_)))
            .collect();
        order.sort_by(|&a, &b| self.nodes[a].key.cmp(&self.nodes[b].key));
        for n in order {
            let _ = writeln!(out, "node {}: label = {}", self.nodes[n].key, env_list(&self.nodes[n].label));
        }
        let _ = writeln!(out, "nogoods = {}", env_list(&self.nogoods));
        out
    }
}

fn env_list(envs: &[Env]) -> String {
    let parts: Vec<String> = envs.iter().map(Env::to_string).collect();
    format!("{{{}}}", parts.join(", "))
}
