mod common;

use std::collections::HashMap;
use std::sync::Arc;

use beliefbase::{embed_ds_model, BeliefBase, Bpa, Error, Frame, FrameSentence, PropSignature, PropSystem, TellWeights};
use common::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

fn prop_system(atoms: usize) -> Arc<PropSystem> {
    let sig = PropSignature::new((0..atoms).map(|i| format!("p{i}"))).unwrap();
    Arc::new(PropSystem::new(sig).unwrap())
}

#[test]
fn empty_base_believes_exactly_the_valid_sentences() {
    let sys = prop_system(4);
    let empty = BeliefBase::empty(Arc::clone(&sys));
    let mut rng = StdRng::seed_from_u64(1);
    for _ in 0..500 {
        let f = random_formula(&mut rng, 4, 4);
        let valid = sys.meaning(&f).unwrap().is_top();
        let unsat = sys.meaning(&f).unwrap().is_empty();
        let pair = empty.ask(&f).unwrap();
        let expected = if valid { (1.0, 0.0) } else if unsat { (0.0, 1.0) } else { (0.0, 0.0) };
        assert_eq!((pair.bel_true, pair.bel_false), expected, "{f}");
    }
}

#[test]
fn categorical_tell_believes_exactly_the_consequences() {
    let sys = prop_system(4);
    let empty = BeliefBase::empty(Arc::clone(&sys));
    let mut rng = StdRng::seed_from_u64(2);
    for _ in 0..500 {
        let beta = random_formula(&mut rng, 4, 3);
        let alpha = random_formula(&mut rng, 4, 3);
        let mb = sys.meaning(&beta).unwrap();
        let ma = sys.meaning(&alpha).unwrap();
        let told = empty.tell(beta.clone(), TellWeights::new(1.0, 0.0).unwrap());
        if mb.is_empty() {
            assert_eq!(told.unwrap_err(), Error::TotalConflict);
            continue;
        }
        let pair = told.unwrap().ask(&alpha).unwrap();
        let entails = mb.entails(&ma).unwrap();
        let refutes = mb.is_disjoint(&ma).unwrap();
        assert_eq!(pair.bel_true, if entails { 1.0 } else { 0.0 }, "{beta} / {alpha}");
        assert_eq!(pair.bel_false, if refutes { 1.0 } else { 0.0 }, "{beta} / {alpha}");
    }
}

/// Textbook Dempster-Shafer over subsets of a small frame, as bitmasks.
type MaskBpa = Vec<(u64, f64)>;

fn mask_combine(a: &MaskBpa, b: &MaskBpa) -> Option<MaskBpa> {
    let mut out: HashMap<u64, f64> = HashMap::new();
    let mut conflict = 0.0;
    for &(x, mx) in a {
        for &(y, my) in b {
            if x & y == 0 {
                conflict += mx * my;
            } else {
                *out.entry(x & y).or_default() += mx * my;
            }
        }
    }
    let k = 1.0 - conflict;
    if k <= 1e-12 {
        return None;
    }
    Some(out.into_iter().map(|(s, m)| (s, m / k)).collect())
}

fn mask_bel(m: &MaskBpa, set: u64) -> f64 {
    m.iter().filter(|(s, _)| s & !set == 0).map(|(_, v)| v).sum()
}

fn random_mask_bpa(rng: &mut StdRng, n: usize) -> MaskBpa {
    let full = (1u64 << n) - 1;
    let k = rng.gen_range(1..=5);
    let weights: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    weights
        .into_iter()
        .map(|w| (rng.gen_range(1..=full), w / total))
        .collect()
}

#[test]
fn frame_embedding_matches_textbook_combination() {
    let mut rng = StdRng::seed_from_u64(3);
    let mut checked = 0;
    while checked < 100 {
        let n = rng.gen_range(1..=6);
        let names: Vec<String> = (0..n).map(|i| format!("h{i}")).collect();
        let frame = Arc::new(Frame::new(names.clone()).unwrap());
        let models: Vec<MaskBpa> = (0..rng.gen_range(1..=4)).map(|_| random_mask_bpa(&mut rng, n)).collect();
        let bpas: Vec<Bpa> = models
            .iter()
            .map(|m| Bpa::new(frame.universe(), m.iter().map(|&(s, v)| (frame.subset_from_mask(s), v))).unwrap())
            .collect();
        let oracle = models[1..].iter().try_fold(models[0].clone(), |acc, m| mask_combine(&acc, m));
        let base = embed_ds_model(Arc::clone(&frame), &bpas);
        let Some(oracle) = oracle else {
            assert_eq!(base.unwrap_err(), Error::TotalConflict);
            continue;
        };
        let base = base.unwrap();
        let full = (1u64 << n) - 1;
        for _ in 0..20 {
            let a = rng.gen_range(0..=full);
            let sentence = FrameSentence::new((0..n).filter(|i| a >> i & 1 == 1).map(|i| names[i].clone()));
            let pair = base.ask(&sentence).unwrap();
            assert!((pair.bel_true - mask_bel(&oracle, a)).abs() < EPS);
            assert!((pair.bel_false - mask_bel(&oracle, full & !a)).abs() < EPS);
        }
        checked += 1;
    }
}

#[test]
fn tell_order_does_not_matter() {
    let sys = prop_system(3);
    let mut rng = StdRng::seed_from_u64(4);
    for _ in 0..50 {
        let mut tells: Vec<_> = (0..rng.gen_range(1..=5))
            .map(|_| {
                let t = rng.gen_range(0.0..1.0);
                let f = rng.gen_range(0.0..(1.0 - t));
                (random_formula(&mut rng, 3, 2), TellWeights::new(t, f).unwrap())
            })
            .collect();
        let run = |tells: &[(beliefbase::PropFormula, TellWeights)]| {
            tells
                .iter()
                .try_fold(BeliefBase::empty(Arc::clone(&sys)), |b, (s, w)| b.tell(s.clone(), *w))
        };
        let first = run(&tells);
        tells.shuffle(&mut rng);
        let second = run(&tells);
        match (first, second) {
            (Ok(a), Ok(b)) => {
                for _ in 0..5 {
                    let q = random_formula(&mut rng, 3, 2);
                    assert!(a.ask(&q).unwrap().distance(&b.ask(&q).unwrap()) < EPS);
                }
                assert!(a.state().len() <= 3usize.pow(tells.len() as u32));
                assert!(a.state().len() <= 1 << sys.universe().world_count());
            }
            (Err(e1), Err(e2)) => assert_eq!((e1, e2), (Error::TotalConflict, Error::TotalConflict)),
            (a, b) => panic!("order changed the outcome: {:?} vs {:?}", a.is_ok(), b.is_ok()),
        }
    }
}
