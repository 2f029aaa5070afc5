//! Frame-of-discernment backend. Worlds are the hypotheses themselves and a
//! sentence is a subset of them, written `{a, b}`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::formula::{Tok, Tokens};
use crate::propositions::{Proposition, WorldLabels, WorldUniverse};

/// "The answer is one of these hypotheses."
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FrameSentence(pub BTreeSet<String>);

impl FrameSentence {
    pub fn new<S: Into<String>>(elements: impl IntoIterator<Item = S>) -> Self {
        Self(elements.into_iter().map(Into::into).collect())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut t = Tokens::new(text)?;
        t.expect(&Tok::LBrace)?;
        let mut elements = BTreeSet::new();
        if !t.eat(&Tok::RBrace) {
            elements.insert(t.ident()?);
            while t.eat(&Tok::Comma) {
                elements.insert(t.ident()?);
            }
            t.expect(&Tok::RBrace)?;
        }
        t.finish()?;
        Ok(Self(elements))
    }
}

impl fmt::Display for FrameSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self.0.iter().map(String::as_str).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// An exhaustive, mutually exclusive set of hypotheses.
#[derive(Debug, Clone)]
pub struct Frame {
    elements: Vec<String>,
    index: HashMap<String, usize>,
    universe: WorldUniverse,
}

impl Frame {
    pub fn new<S: Into<String>>(elements: impl IntoIterator<Item = S>) -> Result<Self> {
        let elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        let mut index = HashMap::new();
        for (i, e) in elements.iter().enumerate() {
            let ok = e.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && e.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(Error::InvalidSignature(format!("`{e}` is not a valid frame element")));
            }
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::InvalidSignature(format!("frame element `{e}` declared twice")));
            }
        }
        let universe = WorldUniverse::new(elements.len(), WorldLabels::Elements(elements.clone()))?;
        Ok(Self {
            elements,
            index,
            universe,
        })
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn universe(&self) -> &WorldUniverse {
        &self.universe
    }

    /// The proposition holding exactly at the named hypotheses.
    pub fn meaning<S: AsRef<str>>(&self, subset: impl IntoIterator<Item = S>) -> Result<Proposition> {
        let mut worlds = Vec::new();
        for name in subset {
            let name = name.as_ref();
            let i = self
                .index
                .get(name)
                .ok_or_else(|| Error::UnknownElement(name.to_string()))?;
            worlds.push(*i);
        }
        Ok(self.universe.from_worlds(worlds))
    }

    /// Proposition for a subset given as a bitmask over element positions.
    pub fn subset_from_mask(&self, mask: u64) -> Proposition {
        self.universe
            .from_worlds((0..self.elements.len()).filter(|i| mask >> i & 1 == 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_meaning_examples() {
        let fr = Frame::new(["a", "b", "c"]).unwrap();
        assert_eq!(fr.meaning(["a", "b"]).unwrap().worlds().collect::<Vec<_>>(), vec![0, 1]);
        assert!(fr.meaning(["a", "b", "c"]).unwrap().is_top());
        assert!(fr.meaning(Vec::<&str>::new()).unwrap().is_empty());
        assert_eq!(fr.meaning(["d"]).unwrap_err(), Error::UnknownElement("d".into()));
    }

    #[test]
    fn frame_validation() {
        assert_eq!(Frame::new(Vec::<String>::new()).unwrap_err(), Error::EmptyUniverse);
        assert!(Frame::new(["a", "a"]).is_err());
    }

    #[test]
    fn sentence_syntax() {
        assert_eq!(FrameSentence::parse("{a, b}").unwrap(), FrameSentence::new(["b", "a"]));
        assert_eq!(FrameSentence::parse("{}").unwrap(), FrameSentence::new(Vec::<String>::new()));
        assert_eq!(FrameSentence::new(["b", "a"]).to_string(), "{a,b}");
        assert!(FrameSentence::parse("{a,").is_err());
        assert!(FrameSentence::parse("a").is_err());
    }
}
