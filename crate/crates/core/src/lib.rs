//! Dempster-Shafer belief bases over pluggable knowledge representation
//! languages, with a semantic engine and an ATMS engine.

pub mod atms;
pub mod base;
pub mod clausal;
pub mod ds;
pub mod error;
pub mod formula;
pub mod frame;
pub mod prop;
pub mod propositions;

pub use base::{embed_ds_model, BeliefBase, KnowledgeSystem, TellRecord, TellWeights};
pub use clausal::{ClausalSentence, ClausalSignature, ClausalSystem};
pub use ds::{BeliefPair, Bpa};
pub use error::{Error, Result};
pub use formula::Formula;
pub use frame::{Frame, FrameSentence};
pub use prop::{parse_prop, PropFormula, PropSignature, PropSystem};
pub use propositions::{Proposition, WorldUniverse};
