//! Belief bases: the Empty / Tell / Ask abstract data type over any
//! knowledge system that can map its sentences to propositions.

use std::fmt;
use std::sync::Arc;

use crate::clausal::{self, ClausalSentence, ClausalSystem};
use crate::ds::{BeliefPair, Bpa};
use crate::error::{Error, Result};
use crate::frame::{Frame, FrameSentence};
use crate::prop::{parse_prop, PropFormula, PropSystem};
use crate::propositions::{Proposition, WorldUniverse};

/// A knowledge representation language together with its meaning function.
pub trait KnowledgeSystem {
    type Sentence: Clone + fmt::Debug + fmt::Display;

    fn universe(&self) -> &WorldUniverse;

    fn parse_sentence(text: &str) -> Result<Self::Sentence>;

    /// The proposition a sentence connotes.
    fn meaning(&self, sentence: &Self::Sentence) -> Result<Proposition>;

    /// An equivalent ground propositional formula, for engines that reason
    /// over ground atoms. Languages without one return
    /// [`Error::UnsupportedSentence`].
    fn ground_formula(&self, sentence: &Self::Sentence) -> Result<PropFormula> {
        Err(Error::UnsupportedSentence(sentence.to_string()))
    }
}

impl KnowledgeSystem for PropSystem {
    type Sentence = PropFormula;

    fn universe(&self) -> &WorldUniverse {
        PropSystem::universe(self)
    }

    fn parse_sentence(text: &str) -> Result<PropFormula> {
        parse_prop(text)
    }

    fn meaning(&self, sentence: &PropFormula) -> Result<Proposition> {
        PropSystem::meaning(self, sentence)
    }

    fn ground_formula(&self, sentence: &PropFormula) -> Result<PropFormula> {
        // reject unknown atoms here too
        self.meaning(sentence)?;
        Ok(sentence.clone())
    }
}

impl KnowledgeSystem for ClausalSystem {
    type Sentence = ClausalSentence;

    fn universe(&self) -> &WorldUniverse {
        ClausalSystem::universe(self)
    }

    fn parse_sentence(text: &str) -> Result<ClausalSentence> {
        ClausalSentence::parse(text)
    }

    fn meaning(&self, sentence: &ClausalSentence) -> Result<Proposition> {
        ClausalSystem::meaning(self, sentence)
    }

    fn ground_formula(&self, sentence: &ClausalSentence) -> Result<PropFormula> {
        clausal::ground(self.signature(), sentence)
    }
}

impl KnowledgeSystem for Frame {
    type Sentence = FrameSentence;

    fn universe(&self) -> &WorldUniverse {
        Frame::universe(self)
    }

    fn parse_sentence(text: &str) -> Result<FrameSentence> {
        FrameSentence::parse(text)
    }

    fn meaning(&self, sentence: &FrameSentence) -> Result<Proposition> {
        Frame::meaning(self, &sentence.0)
    }
}

/// Degrees to which a told sentence is believed true and false.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TellWeights {
    x_t: f64,
    x_f: f64,
}

impl TellWeights {
    pub fn new(x_t: f64, x_f: f64) -> Result<Self> {
        let ok = x_t.is_finite() && x_f.is_finite() && x_t >= 0.0 && x_f >= 0.0 && x_t + x_f <= 1.0 + 1e-12;
        if ok {
            Ok(Self { x_t, x_f })
        } else {
            Err(Error::InvalidWeights { x_t, x_f })
        }
    }

    pub fn x_t(&self) -> f64 {
        self.x_t
    }

    pub fn x_f(&self) -> f64 {
        self.x_f
    }

    /// Mass left on the tautology.
    pub fn slack(&self) -> f64 {
        (1.0 - self.x_t - self.x_f).max(0.0)
    }
}

#[derive(Debug, Clone)]
pub struct TellRecord<S> {
    pub sentence: S,
    pub weights: TellWeights,
}

/// A Dempster-Shafer belief base over the knowledge system `K`.
///
/// Values are immutable: [`tell`](Self::tell) returns a new base.
#[derive(Debug)]
pub struct BeliefBase<K: KnowledgeSystem> {
    system: Arc<K>,
    state: Bpa,
    trace: Vec<TellRecord<K::Sentence>>,
}

impl<K: KnowledgeSystem> Clone for BeliefBase<K> {
    fn clone(&self) -> Self {
        Self {
            system: Arc::clone(&self.system),
            state: self.state.clone(),
            trace: self.trace.clone(),
        }
    }
}

impl<K: KnowledgeSystem> BeliefBase<K> {
    /// The empty base: only valid sentences are believed.
    pub fn empty(system: Arc<K>) -> Self {
        let state = Bpa::vacuous(system.universe());
        Self {
            system,
            state,
            trace: Vec::new(),
        }
    }

    pub fn system(&self) -> &Arc<K> {
        &self.system
    }

    pub fn state(&self) -> &Bpa {
        &self.state
    }

    pub fn trace(&self) -> &[TellRecord<K::Sentence>] {
        &self.trace
    }

    /// Combines the base with evidence that `sentence` is true to degree
    /// `x_t` and false to degree `x_f`.
    ///
    /// The new evidence must be distinct from the evidence already in the
    /// base. That is not checked: telling the same observation twice counts
    /// it twice.
    pub fn tell(&self, sentence: K::Sentence, weights: TellWeights) -> Result<Self> {
        let p = self.system.meaning(&sentence)?;
        let universe = self.system.universe();
        let evidence = [
            (p.complement(), weights.x_f()),
            (p, weights.x_t()),
            (universe.top(), weights.slack()),
        ];
        let state = self.state.combine_evidence(&evidence)?;
        let mut trace = self.trace.clone();
        trace.push(TellRecord { sentence, weights });
        Ok(Self {
            system: Arc::clone(&self.system),
            state,
            trace,
        })
    }

    /// `(Bel(sentence), Bel(not sentence))`.
    pub fn ask(&self, sentence: &K::Sentence) -> Result<BeliefPair> {
        let p = self.system.meaning(sentence)?;
        self.state.belief_pair(&p)
    }

    pub fn tell_text(&self, text: &str, weights: TellWeights) -> Result<Self> {
        self.tell(K::parse_sentence(text)?, weights)
    }

    pub fn ask_text(&self, text: &str) -> Result<BeliefPair> {
        self.ask(&K::parse_sentence(text)?)
    }

    /// Combines a whole BPA into the state without recording a tell.
    pub(crate) fn absorb(&self, bpa: &Bpa) -> Result<Self> {
        Ok(Self {
            system: Arc::clone(&self.system),
            state: self.state.combine(bpa)?,
            trace: self.trace.clone(),
        })
    }
}

/// Embeds a classical DS model (a frame and a list of BPAs on it) as a belief
/// base on the frame backend. Asking the subset `A` of the result gives
/// `(bel(A), bel(not A))` for the combination of all the input BPAs.
pub fn embed_ds_model(frame: Arc<Frame>, bpas: &[Bpa]) -> Result<BeliefBase<Frame>> {
    let mut base = BeliefBase::empty(frame);
    for m in bpas {
        base = base.absorb(m)?;
    }
    Ok(base)
}
