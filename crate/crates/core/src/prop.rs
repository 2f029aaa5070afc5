//! Propositional backend: formulas over a finite atom signature, evaluated
//! on the universe of all truth assignments.
//!
//! World `i` assigns atom `j` the value of bit `j` of `i`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::formula::{Formula, Tok, Tokens};
use crate::propositions::{Proposition, WorldLabels, WorldUniverse};

/// Largest atom signature accepted by default (2^20 worlds).
pub const DEFAULT_MAX_ATOMS: usize = 20;

pub type PropFormula = Formula<String>;

/// Parses the propositional surface syntax. An atom is an identifier,
/// optionally followed by a parenthesized argument list that is kept as part
/// of the opaque atom name: `dog(Alex)` is one atom.
pub fn parse_prop(text: &str) -> Result<PropFormula> {
    let mut toks = Tokens::new(text)?;
    let f = toks.formula(&mut prop_atom)?;
    toks.finish()?;
    Ok(f)
}

fn prop_atom(t: &mut Tokens) -> Result<String> {
    let name = t.ident()?;
    if t.eat(&Tok::LParen) {
        let args = t.ident_list_until_rparen()?;
        Ok(format!("{name}({})", args.join(",")))
    } else {
        Ok(name)
    }
}

fn valid_atom_name(name: &str) -> bool {
    let Ok(mut t) = Tokens::new(name) else {
        return false;
    };
    match prop_atom(&mut t) {
        Ok(parsed) => t.finish().is_ok() && parsed == name && name != "true" && name != "false",
        Err(_) => false,
    }
}

/// An ordered list of distinct atom names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropSignature {
    atoms: Vec<String>,
    index: HashMap<String, usize>,
}

impl PropSignature {
    pub fn new<S: Into<String>>(atoms: impl IntoIterator<Item = S>) -> Result<Self> {
        let atoms: Vec<String> = atoms.into_iter().map(Into::into).collect();
        if atoms.is_empty() {
            return Err(Error::InvalidSignature("at least one atom is required".into()));
        }
        let mut index = HashMap::with_capacity(atoms.len());
        for (i, a) in atoms.iter().enumerate() {
            if !valid_atom_name(a) {
                return Err(Error::InvalidSignature(format!("`{a}` is not a valid atom name")));
            }
            if index.insert(a.clone(), i).is_some() {
                return Err(Error::InvalidSignature(format!("atom `{a}` declared twice")));
            }
        }
        Ok(Self { atoms, index })
    }

    /// No atoms, a single world. Only the clausal backend needs this, for
    /// scripts that mention no predicate at all.
    pub(crate) fn empty() -> Self {
        Self {
            atoms: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn index_of(&self, atom: &str) -> Option<usize> {
        self.index.get(atom).copied()
    }

    /// The universe of all `2^n` truth assignments.
    pub fn worlds(&self) -> Result<WorldUniverse> {
        self.worlds_with_limit(DEFAULT_MAX_ATOMS)
    }

    pub fn worlds_with_limit(&self, max_atoms: usize) -> Result<WorldUniverse> {
        if self.atoms.len() > max_atoms {
            return Err(Error::TooManyAtoms {
                count: self.atoms.len(),
                max: max_atoms,
            });
        }
        WorldUniverse::with_limit(
            1 << self.atoms.len(),
            WorldLabels::Assignments(self.atoms.clone()),
            1 << max_atoms,
        )
    }

    /// Truth of `atom` at `world`.
    pub fn value_at(&self, atom: &str, world: usize) -> Result<bool> {
        let j = self.index_of(atom).ok_or_else(|| Error::UnknownAtom(atom.to_string()))?;
        Ok(world >> j & 1 == 1)
    }
}

/// A propositional signature together with its world universe.
#[derive(Debug, Clone)]
pub struct PropSystem {
    signature: PropSignature,
    universe: WorldUniverse,
    atom_props: Vec<Proposition>,
}

impl PropSystem {
    pub fn new(signature: PropSignature) -> Result<Self> {
        Self::with_limit(signature, DEFAULT_MAX_ATOMS)
    }

    pub fn with_limit(signature: PropSignature, max_atoms: usize) -> Result<Self> {
        let universe = signature.worlds_with_limit(max_atoms)?;
        let atom_props = (0..signature.len())
            .map(|j| universe.from_fn(|w| w >> j & 1 == 1))
            .collect();
        Ok(Self {
            signature,
            universe,
            atom_props,
        })
    }

    pub fn signature(&self) -> &PropSignature {
        &self.signature
    }

    pub fn universe(&self) -> &WorldUniverse {
        &self.universe
    }

    /// Set of worlds satisfying `f`, evaluated at all worlds at once, 64
    /// worlds per machine word.
    pub fn meaning(&self, f: &PropFormula) -> Result<Proposition> {
        Ok(match f {
            Formula::True => self.universe.top(),
            Formula::False => self.universe.bottom(),
            Formula::Atom(a) => {
                let j = self
                    .signature
                    .index_of(a)
                    .ok_or_else(|| Error::UnknownAtom(a.clone()))?;
                self.atom_props[j].clone()
            }
            Formula::Not(x) => self.meaning(x)?.complement(),
            Formula::And(x, y) => self.meaning(x)?.meet(&self.meaning(y)?)?,
            Formula::Or(x, y) => self.meaning(x)?.join(&self.meaning(y)?)?,
            Formula::Implies(x, y) => self.meaning(x)?.complement().join(&self.meaning(y)?)?,
            Formula::Iff(x, y) => {
                let (p, q) = (self.meaning(x)?, self.meaning(y)?);
                p.meet(&q)?.join(&p.complement().meet(&q.complement())?)?
            }
        })
    }
}
