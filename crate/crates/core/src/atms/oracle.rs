use super::env::Env;
use super::{AtmsState, NodeId};
use crate::ds::{BeliefPair, CONFLICT_THRESHOLD};
use crate::error::{Error, Result};
use crate::prop::PropFormula;

/// Largest number of tells [`AtmsState::config_bel_oracle`] enumerates.
pub const MAX_ORACLE_TELLS: usize = 12;

impl AtmsState {
    /// Beliefs computed without labels: every one of the `3^n` choices of
    /// tell assumptions is forward-chained through the justifications.
    /// Exponential; meant for cross-checking [`ask`](Self::ask).
    pub fn config_bel_oracle(&self, query: &PropFormula) -> Result<BeliefPair> {
        let n = self.tells.len();
        if n > MAX_ORACLE_TELLS {
            return Err(Error::TooManyTells {
                count: n,
                max: MAX_ORACLE_TELLS,
            });
        }
        let (for_true, h_true) = self.with_hypothesis(query, true, false)?;
        let (for_false, h_false) = self.with_hypothesis(query, false, false)?;

        let (mut conflict, mut bel_true, mut bel_false) = (0.0, 0.0, 0.0);
        for config in 0..3usize.pow(n as u32) {
            let mut digits = config;
            let mut chosen = Env::EMPTY;
            let mut weight = 1.0;
            for tell in &self.tells {
                match digits % 3 {
                    0 => {
                        weight *= tell.weights.x_t();
                        chosen = chosen.union(Env::single(tell.assume_true));
                    }
                    1 => {
                        weight *= tell.weights.x_f();
                        chosen = chosen.union(Env::single(tell.assume_false));
                    }
                    _ => weight *= tell.weights.slack(),
                }
                digits /= 3;
            }
            if weight <= 0.0 {
                continue;
            }
            if derives(self, chosen, self.falsum) {
                conflict += weight;
                continue;
            }
            if derives(&for_true, chosen.union(Env::single(h_true)), for_true.falsum) {
                bel_true += weight;
            }
            if derives(&for_false, chosen.union(Env::single(h_false)), for_false.falsum) {
                bel_false += weight;
            }
        }
        let consistent = 1.0 - conflict;
        if consistent <= CONFLICT_THRESHOLD {
            return Err(Error::TotalConflict);
        }
        Ok(BeliefPair::new(bel_true / consistent, bel_false / consistent))
    }

    /// Whether the assumptions in `env` derive `node`, by forward chaining.
    pub fn derives(&self, env: Env, node: NodeId) -> bool {
        derives(self, env, node)
    }
}

fn derives(st: &AtmsState, env: Env, target: NodeId) -> bool {
    let mut holds = vec![false; st.nodes.len()];
    for a in env.assumptions() {
        holds[st.assumptions[a].node] = true;
    }
    loop {
        if holds[target] {
            return true;
        }
        let mut changed = false;
        for j in &st.justifications {
            if !holds[j.consequent] && j.antecedents.iter().all(|&a| holds[a]) {
                holds[j.consequent] = true;
                changed = true;
            }
        }
        if !changed {
            return false;
        }
    }
}
