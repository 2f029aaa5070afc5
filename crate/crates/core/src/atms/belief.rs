use std::collections::HashMap;

use super::cnf::{clauses, Clause};
use super::env::{minimize, Env, MAX_ASSUMPTIONS};
use super::{AtmsState, NodeId, NodeKey};
use crate::base::TellWeights;
use crate::ds::{BeliefPair, CONFLICT_THRESHOLD};
use crate::error::{Error, Result};
use crate::prop::PropFormula;

/// The pair of assumptions created by one tell.
#[derive(Debug, Clone, PartialEq)]
pub struct TellTriple {
    /// 1-based position of the tell.
    pub index: usize,
    pub sentence: PropFormula,
    /// Assumption "the sentence is true", held with probability `x_t`.
    pub assume_true: usize,
    /// Assumption "the sentence is false", held with probability `x_f`.
    pub assume_false: usize,
    pub weights: TellWeights,
}

impl AtmsState {
    /// Records evidence `<x_t, x_f>` on a ground sentence.
    ///
    /// Nothing is changed when an error is returned.
    pub fn tell(&mut self, sentence: &PropFormula, weights: TellWeights) -> Result<TellTriple> {
        // one slot stays free for the hypothesis used by `ask`
        if self.assumptions.len() + 3 > MAX_ASSUMPTIONS {
            return Err(Error::TooManyAssumptions(self.assumptions.len() + 2));
        }
        let literal = sentence.as_literal().map(|(a, s)| (a.clone(), s));
        let (pos_clauses, neg_clauses) = if literal.is_some() {
            (Vec::new(), Vec::new())
        } else {
            // a side that can never be chosen needs no justifications
            let pos = if weights.x_t() > 0.0 { clauses(sentence, true)? } else { Vec::new() };
            let neg = if weights.x_f() > 0.0 { clauses(sentence, false)? } else { Vec::new() };
            (pos, neg)
        };

        let index = self.tells.len() + 1;
        let (assume_true, at) = self.add_assumption(format!("tell {index} true"))?;
        let (assume_false, af) = self.add_assumption(format!("tell {index} false"))?;
        let (s, not_s) = match &literal {
            Some((atom, positive)) => (self.literal(atom, *positive), self.literal(atom, !positive)),
            None => (
                self.node(NodeKey::Sentence { tell: index, positive: true }),
                self.node(NodeKey::Sentence { tell: index, positive: false }),
            ),
        };
        self.add_justification(&[at], s);
        self.add_justification(&[af], not_s);
        self.add_justification(&[at, af], self.falsum);
        self.add_clauses(s, &pos_clauses);
        self.add_clauses(not_s, &neg_clauses);

        let triple = TellTriple {
            index,
            sentence: sentence.clone(),
            assume_true,
            assume_false,
            weights,
        };
        self.tells.push(triple.clone());
        Ok(triple)
    }

    pub fn tells(&self) -> &[TellTriple] {
        &self.tells
    }

    /// Justifications making `owner` imply every clause, one per literal by
    /// unit resolution: `(owner, ~l1, ..., ~lk) => l0`.
    fn add_clauses(&mut self, owner: NodeId, clauses: &[Clause]) {
        for clause in clauses {
            if clause.is_empty() {
                self.add_justification(&[owner], self.falsum);
                continue;
            }
            let lits: Vec<_> = clause.iter().collect();
            for (i, (atom, positive)) in lits.iter().enumerate() {
                let mut ants = vec![owner];
                for (j, (other, sign)) in lits.iter().enumerate() {
                    if i != j {
                        ants.push(self.literal(other, !sign));
                    }
                }
                let consequent = self.literal(atom, *positive);
                self.add_justification(&ants, consequent);
            }
        }
    }

    /// A copy of the state with an extra assumption hypothesising that
    /// `query` is false (`positive`) or true (`!positive`).
    pub(super) fn with_hypothesis(
        &self,
        query: &PropFormula,
        positive: bool,
        propagate: bool,
    ) -> Result<(AtmsState, usize)> {
        let refute = clauses(query, !positive)?;
        let mut st = self.clone();
        st.propagate = propagate;
        let (h, node) = st.add_assumption("hypothesis")?;
        st.add_clauses(node, &refute);
        Ok((st, h))
    }

    /// Probability that the chosen assumptions are inconsistent.
    pub fn conflict_mass(&self) -> f64 {
        Measure::new(&self.tells, self.assumptions.len()).probability(self.nogoods.clone(), Vec::new())
    }

    /// `(Bel(query), Bel(~query))` for a ground query.
    ///
    /// `query` holds in every consistent choice of assumptions containing an
    /// environment that, together with the hypothesis `~query`, is a nogood.
    pub fn ask(&self, query: &PropFormula) -> Result<BeliefPair> {
        let mut measure = Measure::new(&self.tells, self.assumptions.len() + 1);
        let consistent = 1.0 - measure.probability(self.nogoods.clone(), Vec::new());
        if consistent <= CONFLICT_THRESHOLD {
            return Err(Error::TotalConflict);
        }
        let mut support = |positive: bool| -> Result<f64> {
            let (st, h) = self.with_hypothesis(query, positive, true)?;
            let target: Vec<Env> = st
                .nogoods
                .iter()
                .filter(|n| n.contains(h))
                .map(|n| n.without(h))
                .collect();
            Ok(measure.probability(target, self.nogoods.clone()) / consistent)
        };
        let bel_true = support(true)?;
        let bel_false = support(false)?;
        Ok(BeliefPair::new(bel_true.min(1.0), bel_false.min(1.0)))
    }
}

/// Probability of assumption sets over independent tells, where each tell
/// contributes its true assumption, its false assumption, or neither.
struct Measure<'a> {
    tells: &'a [TellTriple],
    owner: Vec<Option<usize>>,
    /// Assumptions that belong to no tell; they are never chosen.
    stray: u128,
    memo: HashMap<(Vec<Env>, Vec<Env>), f64>,
}

impl<'a> Measure<'a> {
    fn new(tells: &'a [TellTriple], assumption_count: usize) -> Self {
        let mut owner = vec![None; assumption_count.max(1)];
        for (t, tell) in tells.iter().enumerate() {
            owner[tell.assume_true] = Some(t);
            owner[tell.assume_false] = Some(t);
        }
        let stray = owner
            .iter()
            .enumerate()
            .filter(|(_, o)| o.is_none())
            .fold(0u128, |acc, (i, _)| acc | 1 << i);
        Self {
            tells,
            owner,
            stray,
            memo: HashMap::new(),
        }
    }

    /// P(the choice contains some environment of `target` and none of
    /// `avoid`).
    fn probability(&mut self, mut target: Vec<Env>, mut avoid: Vec<Env>) -> f64 {
        target.retain(|e| e.bits() & self.stray == 0);
        avoid.retain(|e| e.bits() & self.stray == 0);
        minimize(&mut target);
        minimize(&mut avoid);
        self.expand(target, avoid)
    }

    fn expand(&mut self, target: Vec<Env>, avoid: Vec<Env>) -> f64 {
        if target.is_empty() || avoid.iter().any(|e| e.is_empty()) {
            return 0.0;
        }
        if avoid.is_empty() && target.iter().any(|e| e.is_empty()) {
            return 1.0;
        }
        let key = (target, avoid);
        if let Some(&p) = self.memo.get(&key) {
            return p;
        }
        let (target, avoid) = key;
        let bits = target.iter().chain(&avoid).fold(0u128, |acc, e| acc | e.bits());
        let tell = &self.tells[self.owner[bits.trailing_zeros() as usize].expect("stray assumptions are filtered")];
        let (t, f) = (tell.assume_true, tell.assume_false);
        let w = tell.weights;
        let mut total = 0.0;
        for (chosen, other, p) in [(Some(t), Some(f), w.x_t()), (Some(f), Some(t), w.x_f()), (None, None, w.slack())] {
            if p <= 0.0 {
                continue;
            }
            let condition = |envs: &[Env]| -> Vec<Env> {
                let mut out: Vec<Env> = envs
                    .iter()
                    .filter(|e| match (chosen, other) {
                        (Some(_), Some(o)) => !e.contains(o),
                        _ => !e.contains(t) && !e.contains(f),
                    })
                    .map(|e| chosen.map_or(*e, |c| e.without(c)))
                    .collect();
                minimize(&mut out);
                out
            };
            total += p * self.expand(condition(&target), condition(&avoid));
        }
        self.memo.insert((target, avoid), total);
        total
    }
}
