#![allow(dead_code)]

use std::sync::Arc;

use beliefbase::{BeliefBase, BeliefPair, ClausalSentence, ClausalSignature, ClausalSystem, Formula, PropFormula, TellWeights};
use rand::Rng;

pub const EPS: f64 = 1e-9;

pub fn close(pair: BeliefPair, t: f64, f: f64) -> bool {
    pair.distance(&BeliefPair::new(t, f)) < EPS
}

/// Tells `script` in order on a clausal base whose signature is harvested
/// from the script, the queries and the extra constants.
pub fn clausal_base(
    script: &[(&str, f64, f64)],
    queries: &[&str],
    extra_constants: &[&str],
) -> BeliefBase<ClausalSystem> {
    let sentences: Vec<ClausalSentence> = script
        .iter()
        .map(|(s, _, _)| *s)
        .chain(queries.iter().copied())
        .map(|s| ClausalSentence::parse(s).unwrap())
        .collect();
    let sig = ClausalSignature::for_sentences(extra_constants.iter().copied(), &sentences).unwrap();
    let mut base = BeliefBase::empty(Arc::new(ClausalSystem::new(sig).unwrap()));
    for (s, t, f) in script {
        base = base.tell_text(s, TellWeights::new(*t, *f).unwrap()).unwrap();
    }
    base
}

pub const DOG: &[(&str, f64, f64)] = &[
    ("all x: dog(x) -> animal(x)", 0.9, 0.0),
    ("dog(Alex)", 0.7, 0.1),
];

pub const TWEETY: &[(&str, f64, f64)] = &[
    ("all x: bird(x) & ~excp(x) -> flier(x)", 1.0, 0.0),
    ("all x: ~excp(x)", 0.8, 0.2),
    ("all x: penguin(x) -> bird(x) & ~flier(x)", 1.0, 0.0),
    ("bird(Tweety)", 1.0, 0.0),
    ("bird(Cippy)", 1.0, 0.0),
    ("penguin(Tweety)", 1.0, 0.0),
];

/// Random propositional formula over atoms `p0..p{atoms-1}`.
pub fn random_formula<R: Rng>(rng: &mut R, atoms: usize, depth: u32) -> PropFormula {
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..10) {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::atom(format!("p{}", rng.gen_range(0..atoms))),
        };
    }
    let op = rng.gen_range(0..5);
    let x = random_formula(rng, atoms, depth - 1);
    if op == 0 {
        return Formula::not(x);
    }
    let y = random_formula(rng, atoms, depth - 1);
    match op {
        1 => Formula::and(x, y),
        2 => Formula::or(x, y),
        3 => Formula::implies(x, y),
        _ => Formula::iff(x, y),
    }
}
