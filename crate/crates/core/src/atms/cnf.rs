//! Clause sets for ground formulas, by negation normal form and
//! distribution. Only used to turn told sentences into ATMS justifications,
//! so the clause count is capped instead of introducing fresh atoms.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::prop::PropFormula;

/// Upper bound on the clauses produced for a single formula.
pub const MAX_CLAUSES: usize = 4096;

/// A ground literal: atom name and sign.
pub type Literal = (String, bool);

/// A disjunction of literals, never containing an atom with both signs.
pub type Clause = BTreeSet<Literal>;

/// Clauses equivalent to `f` (`positive`) or to its negation.
pub fn clauses(f: &PropFormula, positive: bool) -> Result<Vec<Clause>> {
    let mut out = cnf(f, positive)?;
    simplify(&mut out);
    Ok(out)
}

fn cnf(f: &PropFormula, positive: bool) -> Result<Vec<Clause>> {
    use Formula::*;
    Ok(match (f, positive) {
        (True, true) | (False, false) => Vec::new(),
        (True, false) | (False, true) => vec![Clause::new()],
        (Atom(a), sign) => vec![Clause::from([(a.clone(), sign)])],
        (Not(x), sign) => cnf(x, !sign)?,
        (And(x, y), true) => union(cnf(x, true)?, cnf(y, true)?),
        (And(x, y), false) => product(cnf(x, false)?, cnf(y, false)?)?,
        (Or(x, y), true) => product(cnf(x, true)?, cnf(y, true)?)?,
        (Or(x, y), false) => union(cnf(x, false)?, cnf(y, false)?),
        (Implies(x, y), true) => product(cnf(x, false)?, cnf(y, true)?)?,
        (Implies(x, y), false) => union(cnf(x, true)?, cnf(y, false)?),
        (Iff(x, y), true) => union(
            product(cnf(x, false)?, cnf(y, true)?)?,
            product(cnf(x, true)?, cnf(y, false)?)?,
        ),
        (Iff(x, y), false) => union(
            product(cnf(x, true)?, cnf(y, true)?)?,
            product(cnf(x, false)?, cnf(y, false)?)?,
        ),
    })
}

fn union(mut a: Vec<Clause>, b: Vec<Clause>) -> Vec<Clause> {
    a.extend(b);
    simplify(&mut a);
    a
}

fn product(a: Vec<Clause>, b: Vec<Clause>) -> Result<Vec<Clause>> {
    if a.len().saturating_mul(b.len()) > MAX_CLAUSES {
        return Err(Error::UnsupportedSentence(format!(
            "clause form exceeds {MAX_CLAUSES} clauses"
        )));
    }
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in &a {
        for y in &b {
            let merged: Clause = x.union(y).cloned().collect();
            if !is_tautology(&merged) {
                out.push(merged);
            }
        }
    }
    simplify(&mut out);
    Ok(out)
}

fn is_tautology(c: &Clause) -> bool {
    c.iter().any(|(a, s)| c.contains(&(a.clone(), !s)))
}

/// Removes duplicate and subsumed clauses.
fn simplify(clauses: &mut Vec<Clause>) {
    clauses.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    clauses.dedup();
    let mut kept: Vec<Clause> = Vec::with_capacity(clauses.len());
    for c in clauses.drain(..) {
        if !kept.iter().any(|k| k.is_subset(&c)) {
            kept.push(c);
        }
    }
    *clauses = kept;
}
