//! A belief-base session driven by script statements.

use std::sync::Arc;

use beliefbase::atms::AtmsState;
use beliefbase::clausal::Term;
use beliefbase::ds::CONFLICT_THRESHOLD;
use beliefbase::{
    BeliefBase, BeliefPair, Bpa, ClausalSentence, ClausalSignature, ClausalSystem, Error, Frame, KnowledgeSystem,
    PropFormula, PropSignature, PropSystem, Proposition, TellWeights,
};
use serde_json::json;
use thiserror::Error;

use crate::script::{BackendKind, ScriptError, Statement};
use crate::{Engine, Format};

/// Largest difference tolerated between the two engines.
pub const DIVERGENCE_TOLERANCE: f64 = 1e-9;

/// Largest trace for which `show` reconstructs focal generators.
const MAX_TRACED_TELLS: usize = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SessionError {
    #[error(transparent)]
    Script(#[from] ScriptError),
    #[error(transparent)]
    Engine(#[from] Error),
    #[error("engines disagree: semantic {semantic}, atms {atms}")]
    Divergence { semantic: String, atms: String },
    #[error("the atms engine needs a logical backend, not frame")]
    AtmsOnFrame,
    #[error("the frame backend needs a `frame` declaration")]
    NoFrame,
    #[error("`{0}` does not apply to the {1} backend")]
    WrongDeclaration(&'static str, BackendKind),
}

impl SessionError {
    pub fn is_total_conflict(&self) -> bool {
        matches!(self, SessionError::Engine(Error::TotalConflict))
    }
}

type Result<T, E = SessionError> = std::result::Result<T, E>;

enum Semantic {
    Prop(BeliefBase<PropSystem>),
    Clausal(BeliefBase<ClausalSystem>),
    Frame(BeliefBase<Frame>),
}

macro_rules! with_base {
    ($sem:expr, $b:ident => $body:expr) => {
        match $sem {
            Semantic::Prop($b) => $body,
            Semantic::Clausal($b) => $body,
            Semantic::Frame($b) => $body,
        }
    };
}

impl Semantic {
    fn tell(&self, text: &str, w: TellWeights) -> Result<Semantic> {
        Ok(match self {
            Semantic::Prop(b) => Semantic::Prop(b.tell_text(text, w)?),
            Semantic::Clausal(b) => Semantic::Clausal(b.tell_text(text, w)?),
            Semantic::Frame(b) => Semantic::Frame(b.tell_text(text, w)?),
        })
    }

    fn ask(&self, text: &str) -> Result<BeliefPair> {
        Ok(with_base!(self, b => b.ask_text(text)?))
    }

    fn ground(&self, text: &str) -> Result<PropFormula> {
        fn go<K: KnowledgeSystem>(b: &BeliefBase<K>, text: &str) -> beliefbase::Result<PropFormula> {
            b.system().ground_formula(&K::parse_sentence(text)?)
        }
        Ok(with_base!(self, b => go(b, text)?))
    }

    fn meaning(&self, text: &str) -> Result<Proposition> {
        fn go<K: KnowledgeSystem>(b: &BeliefBase<K>, text: &str) -> beliefbase::Result<Proposition> {
            b.system().meaning(&K::parse_sentence(text)?)
        }
        Ok(with_base!(self, b => go(b, text)?))
    }

    fn state(&self) -> &Bpa {
        with_base!(self, b => b.state())
    }
}

struct Engines {
    semantic: Semantic,
    atms: Option<AtmsState>,
}

/// Statement interpreter. The world universe is rebuilt, and the tells
/// replayed, whenever a sentence mentions a symbol the current signature
/// lacks.
pub struct Session {
    kind: BackendKind,
    engine: Engine,
    format: Format,
    atoms: Option<Vec<String>>,
    constants: Vec<String>,
    frame: Option<Vec<String>>,
    /// Sentences whose symbols the signature must cover besides the tells.
    known: Vec<String>,
    tells: Vec<(String, TellWeights)>,
    engines: Option<Engines>,
    implicit_constants: bool,
}

impl Session {
    pub fn new(kind: BackendKind, engine: Engine, format: Format) -> Self {
        Self {
            kind,
            engine,
            format,
            atoms: None,
            constants: Vec::new(),
            frame: None,
            known: Vec::new(),
            tells: Vec::new(),
            engines: None,
            implicit_constants: false,
        }
    }

    /// On the clausal backend, declare lowercase names that no quantifier
    /// binds as constants instead of rejecting them as free variables.
    pub fn set_implicit_constants(&mut self, on: bool) {
        self.implicit_constants = on;
    }

    pub fn kind(&self) -> BackendKind {
        self.kind
    }

    pub fn tell_count(&self) -> usize {
        self.tells.len()
    }

    /// Makes the signature cover `sentence` from the start, so that a script
    /// runs on one universe throughout.
    pub fn preload(&mut self, sentence: &str) {
        self.known.push(sentence.to_string());
        self.engines = None;
    }

    /// Runs one statement and returns the lines it prints.
    pub fn execute(&mut self, stmt: &Statement) -> Result<Vec<String>> {
        match stmt {
            Statement::Backend(kind) => {
                let implicit = self.implicit_constants;
                *self = Session::new(*kind, self.engine, self.format);
                self.implicit_constants = implicit;
                Ok(Vec::new())
            }
            Statement::Atoms(names) => self.declare(|s| {
                if s.kind != BackendKind::Prop {
                    return Err(SessionError::WrongDeclaration("atoms", s.kind));
                }
                s.atoms = Some(names.clone());
                Ok(())
            }),
            Statement::Constants(names) => self.declare(|s| {
                if s.kind != BackendKind::Clausal {
                    return Err(SessionError::WrongDeclaration("constants", s.kind));
                }
                for n in names {
                    if !s.constants.contains(n) {
                        s.constants.push(n.clone());
                    }
                }
                Ok(())
            }),
            Statement::Frame(names) => self.declare(|s| {
                if s.kind != BackendKind::Frame {
                    return Err(SessionError::WrongDeclaration("frame", s.kind));
                }
                s.frame = Some(names.clone());
                Ok(())
            }),
            Statement::Tell { x_t, x_f, sentence } => {
                let weights = TellWeights::new(*x_t, *x_f)?;
                let notes = self.declare_free_names(sentence);
                self.tell(sentence, weights)?;
                Ok(notes)
            }
            Statement::Ask(sentence) => {
                let mut lines = self.declare_free_names(sentence);
                let pair = self.ask(sentence)?;
                lines.push(self.format_ask(sentence, pair));
                Ok(lines)
            }
            Statement::Show => self.show(),
            Statement::Reset => {
                self.tells.clear();
                self.engines = None;
                Ok(Vec::new())
            }
        }
    }

    /// Applies a declaration, keeping it only if the tells so far still
    /// replay under it.
    fn declare(&mut self, change: impl FnOnce(&mut Session) -> Result<()>) -> Result<Vec<String>> {
        let saved = (self.atoms.clone(), self.constants.clone(), self.frame.clone());
        change(self)?;
        if self.tells.is_empty() {
            self.engines = None;
            return Ok(Vec::new());
        }
        match self.build(None) {
            Ok(engines) => {
                self.engines = Some(engines);
                Ok(Vec::new())
            }
            Err(e) => {
                (self.atoms, self.constants, self.frame) = saved;
                Err(e)
            }
        }
    }

    fn declare_free_names(&mut self, text: &str) -> Vec<String> {
        if !self.implicit_constants || self.kind != BackendKind::Clausal {
            return Vec::new();
        }
        let Ok(sentence) = ClausalSentence::parse(text) else {
            return Vec::new();
        };
        let mut notes = Vec::new();
        for atom in sentence.atoms() {
            for arg in &atom.args {
                if let Term::Name(n) = arg {
                    let lower = n.starts_with(|c: char| c.is_ascii_lowercase());
                    if lower && !self.constants.contains(n) {
                        self.constants.push(n.clone());
                        self.engines = None;
                        notes.push(format!("note: `{n}` taken as a constant"));
                    }
                }
            }
        }
        notes
    }

    fn uses_atms(&self) -> bool {
        self.engine != Engine::Semantic
    }

    fn uses_semantic(&self) -> bool {
        self.engine != Engine::Atms
    }

    /// Fresh engines for the current declarations with every tell replayed.
    fn build(&self, extra: Option<&str>) -> Result<Engines> {
        let texts: Vec<&str> = self
            .known
            .iter()
            .map(String::as_str)
            .chain(self.tells.iter().map(|(s, _)| s.as_str()))
            .chain(extra)
            .collect();
        let semantic = match self.kind {
            BackendKind::Prop => {
                let atoms = match &self.atoms {
                    Some(a) => a.clone(),
                    None => harvest_atoms(&texts),
                };
                Semantic::Prop(BeliefBase::empty(Arc::new(PropSystem::new(PropSignature::new(atoms)?)?)))
            }
            BackendKind::Clausal => {
                let sentences: Vec<ClausalSentence> =
                    texts.iter().filter_map(|t| ClausalSentence::parse(t).ok()).collect();
                let sig = ClausalSignature::for_sentences(&self.constants, &sentences)?;
                Semantic::Clausal(BeliefBase::empty(Arc::new(ClausalSystem::new(sig)?)))
            }
            BackendKind::Frame => {
                let names = self.frame.as_ref().ok_or(SessionError::NoFrame)?;
                Semantic::Frame(BeliefBase::empty(Arc::new(Frame::new(names.clone())?)))
            }
        };
        if self.uses_atms() && self.kind == BackendKind::Frame {
            return Err(SessionError::AtmsOnFrame);
        }
        let mut engines = Engines {
            atms: self.uses_atms().then(AtmsState::new),
            semantic,
        };
        for (text, w) in &self.tells {
            engines = self.tell_into(&engines, text, *w)?;
        }
        Ok(engines)
    }

    fn engines(&mut self) -> Result<&Engines> {
        if self.engines.is_none() {
            self.engines = Some(self.build(None)?);
        }
        Ok(self.engines.as_ref().expect("just built"))
    }

    /// Runs `op` on the current engines; if the sentence has symbols they
    /// lack, rebuilds them to cover it and runs `op` again.
    fn with_cover<T>(&mut self, text: &str, op: impl Fn(&Session, &Engines) -> Result<T>) -> Result<T> {
        self.engines()?;
        let first = op(self, self.engines.as_ref().expect("built above"));
        match first {
            Err(SessionError::Engine(Error::UnknownAtom(_) | Error::UnknownPredicate(_) | Error::UnknownConstant(_))) => {
                let rebuilt = self.build(Some(text))?;
                let out = op(self, &rebuilt)?;
                self.known.push(text.to_string());
                self.engines = Some(rebuilt);
                Ok(out)
            }
            other => other,
        }
    }

    fn tell(&mut self, text: &str, w: TellWeights) -> Result<()> {
        let next = self.with_cover(text, |s, e| s.tell_into(e, text, w))?;
        self.engines = Some(next);
        self.tells.push((text.to_string(), w));
        Ok(())
    }

    fn tell_into(&self, engines: &Engines, text: &str, w: TellWeights) -> Result<Engines> {
        let semantic = if self.uses_semantic() {
            Some(engines.semantic.tell(text, w))
        } else {
            None
        };
        let atms = match &engines.atms {
            Some(st) => {
                let formula = engines.semantic.ground(text)?;
                let mut st = st.clone();
                st.tell(&formula, w)?;
                let conflicted = 1.0 - st.conflict_mass() <= CONFLICT_THRESHOLD;
                Some((st, conflicted))
            }
            None => None,
        };
        match (&semantic, &atms) {
            (Some(Err(SessionError::Engine(Error::TotalConflict))), Some((_, false))) => {
                return Err(SessionError::Divergence {
                    semantic: "total conflict".into(),
                    atms: "consistent".into(),
                })
            }
            (Some(Ok(_)), Some((_, true))) => {
                return Err(SessionError::Divergence {
                    semantic: "consistent".into(),
                    atms: "total conflict".into(),
                })
            }
            (_, Some((_, true))) => return Err(Error::TotalConflict.into()),
            _ => {}
        }
        let semantic = match semantic {
            Some(s) => s?,
            // the semantic base only supplies the signature under atms
            None => match &engines.semantic {
                Semantic::Prop(b) => Semantic::Prop(b.clone()),
                Semantic::Clausal(b) => Semantic::Clausal(b.clone()),
                Semantic::Frame(b) => Semantic::Frame(b.clone()),
            },
        };
        Ok(Engines {
            semantic,
            atms: atms.map(|(st, _)| st),
        })
    }

    fn ask(&mut self, text: &str) -> Result<BeliefPair> {
        self.with_cover(text, |s, e| s.ask_in(e, text))
    }

    fn ask_in(&self, engines: &Engines, text: &str) -> Result<BeliefPair> {
        let semantic = if self.uses_semantic() {
            Some(engines.semantic.ask(text)?)
        } else {
            None
        };
        let atms = match &engines.atms {
            Some(st) => Some(st.ask(&engines.semantic.ground(text)?)?),
            None => None,
        };
        match (semantic, atms) {
            (Some(s), Some(a)) if s.distance(&a) > DIVERGENCE_TOLERANCE => Err(SessionError::Divergence {
                semantic: pair_text(s),
                atms: pair_text(a),
            }),
            (Some(s), _) => Ok(s),
            (None, Some(a)) => Ok(a),
            (None, None) => unreachable!("some engine is always active"),
        }
    }

    fn format_ask(&self, text: &str, pair: BeliefPair) -> String {
        match self.format {
            Format::Text => format!("ask {text} -> {}", pair_text(pair)),
            Format::Json => json!({
                "op": "ask",
                "sentence": text,
                "bel_true": rounded(pair.bel_true),
                "bel_false": rounded(pair.bel_false),
                "engine": self.engine.name(),
            })
            .to_string(),
        }
    }

    fn show(&mut self) -> Result<Vec<String>> {
        self.engines()?;
        let engines = self.engines.as_ref().expect("built above");
        let mut lines = Vec::new();
        if self.uses_semantic() {
            let focals = self.focal_lines(engines)?;
            match self.format {
                Format::Text => lines.extend(focals.iter().map(|(m, n, t)| match t {
                    Some(t) => format!("mass {:.9}: {n} worlds: {t}", clean(*m)),
                    None => format!("mass {:.9}: {n} worlds", clean(*m)),
                })),
                Format::Json => {
                    let items: Vec<_> = focals
                        .iter()
                        .map(|(m, n, t)| json!({"mass": rounded(*m), "worlds": n, "trace": t}))
                        .collect();
                    lines.push(json!({"op": "show", "focals": items}).to_string());
                }
            }
        }
        if let Some(st) = &engines.atms {
            match self.format {
                Format::Text => lines.extend(st.dump().lines().map(str::to_string)),
                Format::Json => lines.push(json!({"op": "show", "atms": st.dump()}).to_string()),
            }
        }
        Ok(lines)
    }

    /// Focal elements by decreasing mass, with world counts and the tell
    /// sides whose intersection produced them.
    fn focal_lines(&self, engines: &Engines) -> Result<Vec<(f64, usize, Option<String>)>> {
        let bpa = engines.semantic.state();
        let mut focals: Vec<(&Proposition, f64)> = bpa.focal_elements().collect();
        focals.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        let sides: Option<Vec<(Proposition, Proposition)>> = if self.tells.len() <= MAX_TRACED_TELLS {
            let mut v = Vec::new();
            for (text, _) in &self.tells {
                let p = engines.semantic.meaning(text)?;
                let q = p.complement();
                v.push((p, q));
            }
            Some(v)
        } else {
            None
        };
        Ok(focals
            .into_iter()
            .map(|(p, m)| {
                let trace = sides.as_ref().and_then(|s| generator(p, s, &self.tells));
                (m, p.count(), trace)
            })
            .collect())
    }
}

/// A shortest choice of tell sides (`+i` true, `-i` false) whose
/// intersection is `target`. Ties go to the first one found, trying the
/// true side, then the false side, then neither, tell by tell.
fn generator(target: &Proposition, sides: &[(Proposition, Proposition)], tells: &[(String, TellWeights)]) -> Option<String> {
    fn search(
        i: usize,
        current: &Proposition,
        chosen: &mut Vec<i64>,
        target: &Proposition,
        sides: &[(Proposition, Proposition)],
        tells: &[(String, TellWeights)],
        best: &mut Option<Vec<i64>>,
    ) {
        if !target.entails(current).unwrap_or(false) {
            return;
        }
        if let Some(b) = best {
            if chosen.len() > b.len() {
                return;
            }
        }
        if i == sides.len() {
            if current == target {
                let better = match best {
                    None => true,
                    Some(b) => chosen.len() < b.len(),
                };
                if better {
                    *best = Some(chosen.clone());
                }
            }
            return;
        }
        let n = i as i64 + 1;
        let w = tells[i].1;
        if w.x_t() > 0.0 {
            chosen.push(n);
            search(i + 1, &current.meet(&sides[i].0).expect("same universe"), chosen, target, sides, tells, best);
            chosen.pop();
        }
        if w.x_f() > 0.0 {
            chosen.push(-n);
            search(i + 1, &current.meet(&sides[i].1).expect("same universe"), chosen, target, sides, tells, best);
            chosen.pop();
        }
        if w.slack() > 0.0 {
            search(i + 1, current, chosen, target, sides, tells, best);
        }
    }
    let mut top = target.clone();
    if !top.is_top() {
        top = top.join(&top.complement()).expect("same universe");
    }
    let mut best = None;
    search(0, &top, &mut Vec::new(), target, sides, tells, &mut best);
    let best = best?;
    if best.is_empty() {
        return None;
    }
    let parts: Vec<String> = best
        .iter()
        .map(|&k| if k > 0 { format!("+{k}") } else { format!("-{}", -k) })
        .collect();
    Some(parts.join(" "))
}

/// Atom names in order of first use.
fn harvest_atoms(texts: &[&str]) -> Vec<String> {
    let mut atoms: Vec<String> = Vec::new();
    for t in texts {
        if let Ok(f) = beliefbase::parse_prop(t) {
            f.for_each_atom(&mut |a: &String| {
                if !atoms.contains(a) {
                    atoms.push(a.clone());
                }
            });
        }
    }
    atoms
}

fn clean(v: f64) -> f64 {
    v + 0.0
}

fn rounded(v: f64) -> f64 {
    clean((v * 1e9).round() / 1e9)
}

pub fn pair_text(p: BeliefPair) -> String {
    format!("bel_true={:.9} bel_false={:.9}", clean(p.bel_true), clean(p.bel_false))
}
