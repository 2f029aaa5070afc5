//! Dempster-Shafer calculus on propositions: basic probability assignments,
//! the belief function, and Dempster's rule of combination.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::propositions::{Proposition, UniverseId, WorldUniverse};

/// Tolerance on the total mass of a BPA.
pub const MASS_TOLERANCE: f64 = 1e-9;
/// Focal elements at or below this mass are dropped after every operation.
pub const PRUNE_THRESHOLD: f64 = 1e-12;
/// Combination is undefined when the normalization constant falls to this.
pub const CONFLICT_THRESHOLD: f64 = 1e-12;

/// A basic probability assignment over the propositions of one universe.
///
/// Focal elements are keyed by their canonical bitset, so two routes to the
/// same set of worlds always land on the same entry.
#[derive(Debug, Clone, PartialEq)]
pub struct Bpa {
    universe: UniverseId,
    world_count: usize,
    focal: BTreeMap<Proposition, f64>,
}

impl Bpa {
    /// The ignorance state: all mass on the tautology.
    pub fn vacuous(u: &WorldUniverse) -> Self {
        let mut focal = BTreeMap::new();
        focal.insert(u.top(), 1.0);
        Self {
            universe: u.id(),
            world_count: u.world_count(),
            focal,
        }
    }

    /// Builds a BPA from `(proposition, mass)` pairs. Pairs naming the same
    /// proposition are merged. Masses must be positive and sum to one.
    pub fn new(u: &WorldUniverse, pairs: impl IntoIterator<Item = (Proposition, f64)>) -> Result<Self> {
        let mut focal: BTreeMap<Proposition, f64> = BTreeMap::new();
        for (p, m) in pairs {
            if p.universe() != u.id() {
                return Err(Error::UniverseMismatch);
            }
            if !m.is_finite() || m <= 0.0 {
                return Err(Error::InvalidMass(m));
            }
            if p.is_empty() {
                return Err(Error::EmptyFocal);
            }
            *focal.entry(p).or_insert(0.0) += m;
        }
        let total: f64 = focal.values().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::MassNotNormalized(total));
        }
        let mut bpa = Self {
            universe: u.id(),
            world_count: u.world_count(),
            focal,
        };
        bpa.prune_and_normalize(total);
        Ok(bpa)
    }

    pub fn universe(&self) -> UniverseId {
        self.universe
    }

    pub fn world_count(&self) -> usize {
        self.world_count
    }

    /// Number of focal elements.
    pub fn len(&self) -> usize {
        self.focal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.focal.is_empty()
    }

    /// Focal elements in canonical order.
    pub fn focal_elements(&self) -> impl Iterator<Item = (&Proposition, f64)> {
        self.focal.iter().map(|(p, &m)| (p, m))
    }

    pub fn mass_of(&self, p: &Proposition) -> f64 {
        self.focal.get(p).copied().unwrap_or(0.0)
    }

    pub fn total_mass(&self) -> f64 {
        self.focal.values().sum()
    }

    /// Total mass of focal elements entailing `q`.
    pub fn bel(&self, q: &Proposition) -> Result<f64> {
        if q.universe() != self.universe {
            return Err(Error::UniverseMismatch);
        }
        let mut total = 0.0;
        for (p, m) in &self.focal {
            if p.entails(q)? {
                total += m;
            }
        }
        Ok(total)
    }

    /// `(Bel(q), Bel(not q))`.
    pub fn belief_pair(&self, q: &Proposition) -> Result<BeliefPair> {
        Ok(BeliefPair {
            bel_true: self.bel(q)?,
            bel_false: self.bel(&q.complement())?,
        })
    }

    /// Dempster's combination `self ⊕ other`.
    ///
    /// The caller is responsible for the two bodies of evidence being
    /// distinct; that condition cannot be checked mechanically.
    pub fn combine(&self, other: &Bpa) -> Result<Bpa> {
        if self.universe != other.universe {
            return Err(Error::UniverseMismatch);
        }
        let pairs: Vec<(Proposition, f64)> = other.focal.iter().map(|(p, &m)| (p.clone(), m)).collect();
        self.combine_evidence(&pairs)
    }

    /// Combines with a raw mass assignment whose focal elements may include
    /// the empty proposition. Mass landing on the empty set counts as
    /// conflict, exactly as in Dempster's rule.
    pub fn combine_evidence(&self, evidence: &[(Proposition, f64)]) -> Result<Bpa> {
        let mut acc: BTreeMap<Proposition, f64> = BTreeMap::new();
        let mut agreeing = 0.0;
        for (p1, &m1) in &self.focal {
            for (p2, m2) in evidence {
                if !m2.is_finite() || *m2 < 0.0 {
                    return Err(Error::InvalidMass(*m2));
                }
                if *m2 == 0.0 {
                    continue;
                }
                let q = p1.meet(p2)?;
                if q.is_empty() {
                    continue;
                }
                let product = m1 * m2;
                agreeing += product;
                *acc.entry(q).or_insert(0.0) += product;
            }
        }
        if agreeing <= CONFLICT_THRESHOLD {
            return Err(Error::TotalConflict);
        }
        let mut out = Bpa {
            universe: self.universe,
            world_count: self.world_count,
            focal: acc,
        };
        out.prune_and_normalize(agreeing);
        Ok(out)
    }

    /// Conflict mass `1 - ρ` that combining with `other` would produce.
    pub fn conflict(&self, other: &Bpa) -> Result<f64> {
        if self.universe != other.universe {
            return Err(Error::UniverseMismatch);
        }
        let mut conflict = 0.0;
        for (p1, m1) in &self.focal {
            for (p2, m2) in &other.focal {
                if p1.is_disjoint(p2)? {
                    conflict += m1 * m2;
                }
            }
        }
        Ok(conflict)
    }

    fn prune_and_normalize(&mut self, total: f64) {
        for m in self.focal.values_mut() {
            *m /= total;
        }
        self.focal.retain(|_, m| *m > PRUNE_THRESHOLD);
        let kept: f64 = self.focal.values().sum();
        for m in self.focal.values_mut() {
            *m /= kept;
        }
    }
}

/// Result of an ask: belief that the sentence is true, and that it is false.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BeliefPair {
    pub bel_true: f64,
    pub bel_false: f64,
}

impl BeliefPair {
    pub fn new(bel_true: f64, bel_false: f64) -> Self {
        Self {
            bel_true,
            bel_false,
        }
    }

    /// Largest componentwise difference.
    pub fn distance(&self, other: &BeliefPair) -> f64 {
        (self.bel_true - other.bel_true)
            .abs()
            .max((self.bel_false - other.bel_false).abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propositions::WorldLabels;
    use proptest::prelude::*;

    const EPS: f64 = 1e-9;

    fn universe(n: usize) -> WorldUniverse {
        WorldUniverse::new(n, WorldLabels::Anonymous).unwrap()
    }

    #[test]
    fn vacuous_bpa() {
        let u = universe(4);
        let v = Bpa::vacuous(&u);
        assert_eq!(v.len(), 1);
        assert_eq!(v.mass_of(&u.top()), 1.0);
        assert_eq!(v.bel(&u.top()).unwrap(), 1.0);
        assert_eq!(v.bel(&u.from_worlds([0, 1, 2])).unwrap(), 0.0);
        assert_eq!(v.bel(&u.bottom()).unwrap(), 0.0);
    }

    // The four regions of the dog/animal picture, one world each, plus a
    // spare world so the frame is not just {A,B,C,D}.
    #[test]
    fn dog_example_combination() {
        let u = universe(4);
        let (a, b, c, d) = (0, 1, 2, 3);
        let first = Bpa::new(&u, [(u.from_worlds([b, d]), 0.9), (u.top(), 0.1)]).unwrap();
        let second = Bpa::new(
            &u,
            [
                (u.from_worlds([c, d]), 0.7),
                (u.from_worlds([a, b]), 0.1),
                (u.top(), 0.2),
            ],
        )
        .unwrap();
        let k = first.combine(&second).unwrap();
        let expected = [
            (u.top(), 0.02),
            (u.from_worlds([a, b]), 0.01),
            (u.from_worlds([c, d]), 0.07),
            (u.from_worlds([b, d]), 0.18),
            (u.from_worlds([b]), 0.09),
            (u.from_worlds([d]), 0.63),
        ];
        assert_eq!(k.len(), 6);
        for (p, m) in expected {
            assert!((k.mass_of(&p) - m).abs() < EPS, "{p:?}");
        }
        // only D entails a proposition holding uniformly on D
        assert!((k.bel(&u.from_worlds([d])).unwrap() - 0.63).abs() < EPS);
    }

    #[test]
    fn combination_with_partial_conflict() {
        let u = universe(2);
        let a = u.from_worlds([0]);
        let k1 = Bpa::new(&u, [(a.clone(), 0.6), (u.top(), 0.4)]).unwrap();
        let k2 = Bpa::new(&u, [(a.complement(), 0.5), (u.top(), 0.5)]).unwrap();
        assert!((k1.conflict(&k2).unwrap() - 0.3).abs() < EPS);
        let k = k1.combine(&k2).unwrap();
        assert!((k.mass_of(&a) - 3.0 / 7.0).abs() < EPS);
        assert!((k.mass_of(&a.complement()) - 2.0 / 7.0).abs() < EPS);
        assert!((k.mass_of(&u.top()) - 2.0 / 7.0).abs() < EPS);
    }

    #[test]
    fn vacuous_is_neutral() {
        let u = universe(3);
        let k = Bpa::new(&u, [(u.from_worlds([0]), 0.25), (u.from_worlds([1, 2]), 0.75)]).unwrap();
        let c = k.combine(&Bpa::vacuous(&u)).unwrap();
        assert_eq!(c.len(), k.len());
        for (p, m) in k.focal_elements() {
            assert!((c.mass_of(p) - m).abs() < EPS);
        }
    }

    #[test]
    fn total_conflict() {
        let u = universe(2);
        let a = u.from_worlds([0]);
        let k1 = Bpa::new(&u, [(a.clone(), 1.0)]).unwrap();
        let k2 = Bpa::new(&u, [(a.complement(), 1.0)]).unwrap();
        assert_eq!(k1.combine(&k2), Err(Error::TotalConflict));
    }

    #[test]
    fn construction_errors() {
        let u = universe(2);
        assert_eq!(Bpa::new(&u, [(u.bottom(), 1.0)]), Err(Error::EmptyFocal));
        assert_eq!(Bpa::new(&u, [(u.top(), 0.0)]), Err(Error::InvalidMass(0.0)));
        assert!(matches!(
            Bpa::new(&u, [(u.top(), 0.5)]),
            Err(Error::MassNotNormalized(_))
        ));
        let other = universe(2);
        assert_eq!(Bpa::new(&u, [(other.top(), 1.0)]), Err(Error::UniverseMismatch));
        assert_eq!(
            Bpa::vacuous(&u).bel(&other.top()),
            Err(Error::UniverseMismatch)
        );
    }

    #[test]
    fn duplicate_pairs_merge() {
        let u = universe(3);
        let p = u.from_worlds([1]);
        let k = Bpa::new(&u, [(p.clone(), 0.25), (p.clone(), 0.25), (u.top(), 0.5)]).unwrap();
        assert_eq!(k.len(), 2);
        assert!((k.mass_of(&p) - 0.5).abs() < EPS);
    }

    #[test]
    fn tiny_masses_are_pruned() {
        let u = universe(2);
        let k = Bpa::new(&u, [(u.from_worlds([0]), 1e-13), (u.top(), 1.0 - 1e-13)]).unwrap();
        assert_eq!(k.len(), 1);
        assert_eq!(k.total_mass(), 1.0);
    }

    #[test]
    fn singletons_plus_top_give_discounted_probability() {
        let u = universe(3);
        let k = Bpa::new(
            &u,
            [
                (u.from_worlds([0]), 0.2),
                (u.from_worlds([1]), 0.3),
                (u.from_worlds([2]), 0.1),
                (u.top(), 0.4),
            ],
        )
        .unwrap();
        assert!((k.bel(&u.from_worlds([0, 1])).unwrap() - 0.5).abs() < EPS);
        assert!((k.bel(&u.from_worlds([2])).unwrap() - 0.1).abs() < EPS);
        assert!((k.bel(&u.from_worlds([0, 2])).unwrap() - 0.3).abs() < EPS);
    }

    fn arb_bpa(n: usize) -> impl Strategy<Value = Vec<(Vec<bool>, f64)>> {
        prop::collection::vec((prop::collection::vec(any::<bool>(), n), 0.01f64..1.0), 1..5)
    }

    fn build(u: &WorldUniverse, raw: &[(Vec<bool>, f64)]) -> Bpa {
        let mut pairs: Vec<(Proposition, f64)> = raw
            .iter()
            .map(|(bits, m)| (u.from_fn(|w| bits[w]), *m))
            .filter(|(p, _)| !p.is_empty())
            .collect();
        if pairs.is_empty() {
            pairs.push((u.top(), 1.0));
        }
        let total: f64 = pairs.iter().map(|(_, m)| m).sum();
        Bpa::new(u, pairs.into_iter().map(|(p, m)| (p, m / total))).unwrap()
    }

    fn assert_close(a: &Bpa, b: &Bpa) -> std::result::Result<(), TestCaseError> {
        for (p, m) in a.focal_elements().chain(b.focal_elements()) {
            let _ = m;
            prop_assert!((a.mass_of(p) - b.mass_of(p)).abs() < EPS);
        }
        Ok(())
    }

    proptest! {
        #[test]
        fn bel_matches_direct_resummation(
            raw in arb_bpa(6),
            q in prop::collection::vec(any::<bool>(), 6),
        ) {
            let u = universe(6);
            let k = build(&u, &raw);
            let q = u.from_fn(|w| q[w]);
            let direct: f64 = k
                .focal_elements()
                .filter(|(p, _)| p.worlds().all(|w| q.contains(w)))
                .map(|(_, m)| m)
                .sum();
            prop_assert!((k.bel(&q)? - direct).abs() < 1e-12);
        }

        #[test]
        fn combine_commutes_and_associates(
            r1 in arb_bpa(5), r2 in arb_bpa(5), r3 in arb_bpa(5),
        ) {
            let u = universe(5);
            let (k1, k2, k3) = (build(&u, &r1), build(&u, &r2), build(&u, &r3));
            if let (Ok(a), Ok(b)) = (k1.combine(&k2), k2.combine(&k1)) {
                assert_close(&a, &b)?;
                prop_assert!((a.total_mass() - 1.0).abs() < EPS);
                prop_assert!(a.focal_elements().all(|(p, m)| !p.is_empty() && m > PRUNE_THRESHOLD));
            }
            let left = k1.combine(&k2).and_then(|k| k.combine(&k3));
            let right = k2.combine(&k3).and_then(|k| k1.combine(&k));
            if let (Ok(l), Ok(r)) = (left, right) {
                assert_close(&l, &r)?;
            }
        }

        #[test]
        fn bel_is_monotone(
            raw in arb_bpa(6),
            q1 in prop::collection::vec(any::<bool>(), 6),
            extra in prop::collection::vec(any::<bool>(), 6),
        ) {
            let u = universe(6);
            let k = build(&u, &raw);
            let small = u.from_fn(|w| q1[w]);
            let large = small.join(&u.from_fn(|w| extra[w]))?;
            prop_assert!(k.bel(&small)? <= k.bel(&large)? + 1e-12);
        }
    }
}
