//! Function-free clausal first-order backend.
//!
//! Sentences are ground formulas or universally quantified quantifier-free
//! bodies. They are grounded over the declared constants and evaluated on
//! the propositional universe of the resulting ground atoms (the Herbrand
//! quotient). An existential in the antecedent of a universal implication,
//! `all x: (exists y: spouse(x,y)) -> married(x)`, is compiled to the outer
//! universal `all x, y: spouse(x,y) -> married(x)`.
//!
//! The quotient is exact for Boolean combinations of a fixed set of sentences
//! only if it also contains witnesses for the existentials that negated
//! universals introduce. [`ClausalSignature::for_sentences`] adds one fresh
//! witness constant per quantified variable of each distinct universal.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::formula::{Formula, Tok, Tokens};
use crate::prop::{PropFormula, PropSignature, PropSystem, DEFAULT_MAX_ATOMS};
use crate::propositions::{Proposition, WorldUniverse};

/// Constant injected when a signature would otherwise have none.
pub const RESERVED_CONSTANT: &str = "_0";

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    /// A constant, or an unbound lowercase name that grounding rejects as a
    /// free variable.
    Name(String),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Name(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClausalAtom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl fmt::Display for ClausalAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.predicate)?;
        if !self.args.is_empty() {
            let args: Vec<String> = self.args.iter().map(Term::to_string).collect();
            write!(f, "({})", args.join(","))?;
        }
        Ok(())
    }
}

pub type ClausalFormula = Formula<ClausalAtom>;

/// `all vars: body`, with `body` quantifier-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UniversalClause {
    pub vars: Vec<String>,
    pub body: ClausalFormula,
}

impl fmt::Display for UniversalClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "all {}: {}", self.vars.join(", "), self.body)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClausalSentence {
    GroundLiteral { positive: bool, atom: ClausalAtom },
    Universal(UniversalClause),
    NegatedUniversal(UniversalClause),
    GroundFormula(ClausalFormula),
}

impl fmt::Display for ClausalSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClausalSentence::GroundLiteral { positive: true, atom } => write!(f, "{atom}"),
            ClausalSentence::GroundLiteral { positive: false, atom } => write!(f, "~{atom}"),
            ClausalSentence::Universal(u) => write!(f, "{u}"),
            ClausalSentence::NegatedUniversal(u) => write!(f, "~({u})"),
            ClausalSentence::GroundFormula(g) => write!(f, "{g}"),
        }
    }
}

impl ClausalSentence {
    pub fn parse(text: &str) -> Result<Self> {
        let mut t = Tokens::new(text)?;
        let s = sentence(&mut t)?;
        t.finish()?;
        Ok(s)
    }

    /// The universal clause this sentence is built on, if any.
    pub fn universal(&self) -> Option<&UniversalClause> {
        match self {
            ClausalSentence::Universal(u) | ClausalSentence::NegatedUniversal(u) => Some(u),
            _ => None,
        }
    }

    /// Every atom occurrence, in textual order.
    pub fn atoms(&self) -> Vec<&ClausalAtom> {
        let mut out = Vec::new();
        match self {
            ClausalSentence::GroundLiteral { atom, .. } => out.push(atom),
            ClausalSentence::Universal(u) | ClausalSentence::NegatedUniversal(u) => {
                u.body.for_each_atom(&mut |a| out.push(a))
            }
            ClausalSentence::GroundFormula(g) => g.for_each_atom(&mut |a| out.push(a)),
        }
        out
    }
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "all" | "exists" | "true" | "false")
}

fn sentence(t: &mut Tokens) -> Result<ClausalSentence> {
    let is_ident = |tok: &Tok, word: &str| matches!(tok, Tok::Ident(s) if s == word);
    if is_ident(t.peek(), "all") {
        return Ok(ClausalSentence::Universal(universal(t)?));
    }
    if *t.peek() == Tok::Not && is_ident(t.peek_at(1), "all") {
        t.next();
        return Ok(ClausalSentence::NegatedUniversal(universal(t)?));
    }
    if *t.peek() == Tok::Not && *t.peek_at(1) == Tok::LParen && is_ident(t.peek_at(2), "all") {
        t.next();
        t.next();
        let u = universal(t)?;
        t.expect(&Tok::RParen)?;
        return Ok(ClausalSentence::NegatedUniversal(u));
    }
    let no_vars = BTreeSet::new();
    let f = t.formula(&mut |t: &mut Tokens| atom(t, &no_vars))?;
    Ok(match f.as_literal() {
        Some((a, positive)) => ClausalSentence::GroundLiteral {
            positive,
            atom: a.clone(),
        },
        None => ClausalSentence::GroundFormula(f),
    })
}

fn var_list(t: &mut Tokens, bound: &BTreeSet<String>) -> Result<Vec<String>> {
    let mut vars: Vec<String> = Vec::new();
    loop {
        let column = t.column();
        let v = t.ident()?;
        if is_keyword(&v) || vars.contains(&v) || bound.contains(&v) {
            return Err(Error::Parse {
                column,
                message: format!("variable `{v}` cannot be bound here"),
            });
        }
        vars.push(v);
        if !t.eat(&Tok::Comma) {
            break;
        }
    }
    t.expect(&Tok::Colon)?;
    Ok(vars)
}

fn universal(t: &mut Tokens) -> Result<UniversalClause> {
    t.ident()?; // `all`
    let mut vars = var_list(t, &BTreeSet::new())?;
    let outer: BTreeSet<String> = vars.iter().cloned().collect();
    let existential_antecedent =
        *t.peek() == Tok::LParen && matches!(t.peek_at(1), Tok::Ident(s) if s == "exists");
    if !existential_antecedent {
        let body = t.formula(&mut |t: &mut Tokens| atom(t, &outer))?;
        return Ok(UniversalClause { vars, body });
    }
    t.next();
    t.next();
    let inner_vars = var_list(t, &outer)?;
    let mut scope = outer.clone();
    scope.extend(inner_vars.iter().cloned());
    let antecedent = t.formula(&mut |t: &mut Tokens| atom(t, &scope))?;
    t.expect(&Tok::RParen)?;
    if *t.peek() != Tok::Implies {
        return Err(Error::UnsupportedQuantifier(
            "an existential is only allowed as the antecedent of an implication".into(),
        ));
    }
    t.next();
    let consequent = t.formula(&mut |t: &mut Tokens| atom(t, &outer))?;
    let mut leaked = None;
    consequent.for_each_atom(&mut |a| {
        for arg in &a.args {
            if let Term::Name(n) = arg {
                if inner_vars.contains(n) {
                    leaked = Some(n.clone());
                }
            }
        }
    });
    if let Some(v) = leaked {
        return Err(Error::UnsupportedQuantifier(format!(
            "existential variable `{v}` escapes its antecedent"
        )));
    }
    vars.extend(inner_vars);
    Ok(UniversalClause {
        vars,
        body: Formula::implies(antecedent, consequent),
    })
}

fn atom(t: &mut Tokens, vars: &BTreeSet<String>) -> Result<ClausalAtom> {
    let column = t.column();
    let predicate = t.ident()?;
    if is_keyword(&predicate) {
        return Err(Error::UnsupportedQuantifier(format!(
            "`{predicate}` at column {column}: quantifiers may only open a sentence or an antecedent"
        )));
    }
    let mut args = Vec::new();
    if t.eat(&Tok::LParen) {
        for name in t.ident_list_until_rparen()? {
            args.push(if vars.contains(&name) {
                Term::Var(name)
            } else {
                Term::Name(name)
            });
        }
    }
    Ok(ClausalAtom { predicate, args })
}

fn is_capitalized(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_ascii_uppercase())
}

fn valid_name(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !is_keyword(name)
}

/// Predicates with arities plus the constants of the Herbrand universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClausalSignature {
    predicates: Vec<(String, usize)>,
    arity: HashMap<String, usize>,
    constants: Vec<String>,
}

impl ClausalSignature {
    pub fn new<P, C>(
        predicates: impl IntoIterator<Item = (P, usize)>,
        constants: impl IntoIterator<Item = C>,
    ) -> Result<Self>
    where
        P: Into<String>,
        C: Into<String>,
    {
        let predicates: Vec<(String, usize)> =
            predicates.into_iter().map(|(p, n)| (p.into(), n)).collect();
        let mut constants: Vec<String> = constants.into_iter().map(Into::into).collect();
        if constants.is_empty() {
            constants.push(RESERVED_CONSTANT.to_string());
        }
        let mut arity = HashMap::new();
        for (p, n) in &predicates {
            if !valid_name(p) {
                return Err(Error::InvalidSignature(format!("`{p}` is not a valid predicate name")));
            }
            if arity.insert(p.clone(), *n).is_some() {
                return Err(Error::InvalidSignature(format!("predicate `{p}` declared twice")));
            }
        }
        let mut seen = BTreeSet::new();
        for c in &constants {
            if !valid_name(c) {
                return Err(Error::InvalidSignature(format!("`{c}` is not a valid constant name")));
            }
            if !seen.insert(c) {
                return Err(Error::InvalidSignature(format!("constant `{c}` declared twice")));
            }
        }
        Ok(Self {
            predicates,
            arity,
            constants,
        })
    }

    /// Builds the signature a script needs: every predicate used (with a
    /// consistent arity), the declared constants, every capitalized name
    /// used as a term, and witness constants `_1, _2, ...` for the
    /// universals.
    ///
    /// Each universal needs one unnamed individual per quantified variable
    /// so that its negation stays satisfiable. Declared constants that no
    /// sentence mentions serve as such individuals, and only the shortfall
    /// is filled with witnesses.
    pub fn for_sentences<'a, C: AsRef<str>>(
        declared_constants: impl IntoIterator<Item = C>,
        sentences: impl IntoIterator<Item = &'a ClausalSentence>,
    ) -> Result<Self> {
        let mut predicates: Vec<(String, usize)> = Vec::new();
        let mut constants: Vec<String> = Vec::new();
        for c in declared_constants {
            let c = c.as_ref().to_string();
            if !constants.contains(&c) {
                constants.push(c);
            }
        }
        let mut universals: BTreeSet<&UniversalClause> = BTreeSet::new();
        let mut mentioned: BTreeSet<&str> = BTreeSet::new();
        for s in sentences {
            for a in s.atoms() {
                match predicates.iter().find(|(p, _)| *p == a.predicate) {
                    Some((_, n)) if *n != a.args.len() => {
                        return Err(Error::ArityMismatch {
                            predicate: a.predicate.clone(),
                            expected: *n,
                            found: a.args.len(),
                        })
                    }
                    Some(_) => {}
                    None => predicates.push((a.predicate.clone(), a.args.len())),
                }
                for arg in &a.args {
                    if let Term::Name(n) = arg {
                        mentioned.insert(n);
                        if is_capitalized(n) && !constants.contains(n) {
                            constants.push(n.clone());
                        }
                    }
                }
            }
            if let Some(u) = s.universal() {
                universals.insert(u);
            }
        }
        let unnamed = constants.iter().filter(|c| !mentioned.contains(c.as_str())).count();
        let needed: usize = universals.iter().map(|u| u.vars.len()).sum();
        let witnesses = needed.saturating_sub(unnamed);
        let mut next = 1;
        for _ in 0..witnesses {
            while constants.contains(&format!("_{next}")) {
                next += 1;
            }
            constants.push(format!("_{next}"));
            next += 1;
        }
        Self::new(predicates, constants)
    }

    pub fn predicates(&self) -> &[(String, usize)] {
        &self.predicates
    }

    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    pub fn has_constant(&self, c: &str) -> bool {
        self.constants.iter().any(|k| k == c)
    }

    pub fn arity(&self, predicate: &str) -> Option<usize> {
        self.arity.get(predicate).copied()
    }

    /// Number of ground atoms over this signature.
    pub fn ground_atom_count(&self) -> usize {
        self.predicates
            .iter()
            .map(|(_, n)| self.constants.len().saturating_pow(*n as u32))
            .fold(0usize, usize::saturating_add)
    }

    /// All ground atom names, predicate-major, argument tuples in
    /// lexicographic constant order.
    pub fn ground_atoms(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (p, n) in &self.predicates {
            for tuple in tuples(&self.constants, *n) {
                out.push(ground_name(p, &tuple));
            }
        }
        out
    }

    /// True when every predicate and constant in `s` belongs to the signature.
    pub fn covers(&self, s: &ClausalSentence) -> bool {
        s.atoms().iter().all(|a| {
            self.arity(&a.predicate) == Some(a.args.len())
                && a.args.iter().all(|t| match t {
                    Term::Var(_) => true,
                    Term::Name(n) => self.has_constant(n),
                })
        })
    }
}

fn ground_name(predicate: &str, args: &[&str]) -> String {
    if args.is_empty() {
        predicate.to_string()
    } else {
        format!("{predicate}({})", args.join(","))
    }
}

/// Every length-`n` tuple over `items`, first position slowest.
fn tuples(items: &[String], n: usize) -> Vec<Vec<&str>> {
    let mut out: Vec<Vec<&str>> = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                items.iter().map(move |c| {
                    let mut next = prefix.clone();
                    next.push(c.as_str());
                    next
                })
            })
            .collect();
    }
    out
}

fn ground_atom(sig: &ClausalSignature, a: &ClausalAtom, binding: &HashMap<&str, &str>) -> Result<String> {
    let expected = sig
        .arity(&a.predicate)
        .ok_or_else(|| Error::UnknownPredicate(a.predicate.clone()))?;
    if expected != a.args.len() {
        return Err(Error::ArityMismatch {
            predicate: a.predicate.clone(),
            expected,
            found: a.args.len(),
        });
    }
    let mut args = Vec::with_capacity(a.args.len());
    for t in &a.args {
        match t {
            Term::Var(v) => match binding.get(v.as_str()) {
                Some(c) => args.push(*c),
                None => return Err(Error::FreeVariable(v.clone())),
            },
            Term::Name(n) if sig.has_constant(n) => args.push(n.as_str()),
            Term::Name(n) if n.starts_with(|c: char| c.is_ascii_lowercase()) => {
                return Err(Error::FreeVariable(n.clone()))
            }
            Term::Name(n) => return Err(Error::UnknownConstant(n.clone())),
        }
    }
    Ok(ground_name(&a.predicate, &args))
}

fn ground_universal(sig: &ClausalSignature, u: &UniversalClause) -> Result<PropFormula> {
    let mut instances = Vec::new();
    for tuple in tuples(&sig.constants, u.vars.len()) {
        let binding: HashMap<&str, &str> = u.vars.iter().map(String::as_str).zip(tuple).collect();
        instances.push(u.body.try_map(&mut |a| ground_atom(sig, a, &binding))?);
    }
    Ok(Formula::conjunction(instances))
}

/// Replaces a sentence by an equivalent ground propositional formula over
/// the atoms `pred(c1,...,cn)`.
pub fn ground(sig: &ClausalSignature, s: &ClausalSentence) -> Result<PropFormula> {
    let empty = HashMap::new();
    match s {
        ClausalSentence::GroundLiteral { positive, atom } => {
            let a = Formula::atom(ground_atom(sig, atom, &empty)?);
            Ok(if *positive { a } else { Formula::not(a) })
        }
        ClausalSentence::Universal(u) => ground_universal(sig, u),
        ClausalSentence::NegatedUniversal(u) => Ok(Formula::not(ground_universal(sig, u)?)),
        ClausalSentence::GroundFormula(g) => g.try_map(&mut |a| ground_atom(sig, a, &empty)),
    }
}

/// A clausal signature with the propositional system of its ground atoms.
#[derive(Debug, Clone)]
pub struct ClausalSystem {
    signature: ClausalSignature,
    ground: PropSystem,
}

impl ClausalSystem {
    pub fn new(signature: ClausalSignature) -> Result<Self> {
        Self::with_limit(signature, DEFAULT_MAX_ATOMS)
    }

    pub fn with_limit(signature: ClausalSignature, max_ground_atoms: usize) -> Result<Self> {
        let count = signature.ground_atom_count();
        if count > max_ground_atoms {
            return Err(Error::TooManyAtoms {
                count,
                max: max_ground_atoms,
            });
        }
        let atoms = signature.ground_atoms();
        let ground = if atoms.is_empty() {
            PropSystem::with_limit(PropSignature::empty(), max_ground_atoms)?
        } else {
            PropSystem::with_limit(PropSignature::new(atoms)?, max_ground_atoms)?
        };
        Ok(Self { signature, ground })
    }

    pub fn signature(&self) -> &ClausalSignature {
        &self.signature
    }

    pub fn ground_system(&self) -> &PropSystem {
        &self.ground
    }

    pub fn universe(&self) -> &WorldUniverse {
        self.ground.universe()
    }

    pub fn meaning(&self, s: &ClausalSentence) -> Result<Proposition> {
        self.ground.meaning(&ground(&self.signature, s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prop::parse_prop;

    fn parse(s: &str) -> ClausalSentence {
        ClausalSentence::parse(s).unwrap()
    }

    #[test]
    fn grounds_universal_over_constants() {
        let sig = ClausalSignature::new([("dog", 1), ("animal", 1)], ["Alex"]).unwrap();
        let g = ground(&sig, &parse("all x: dog(x) -> animal(x)")).unwrap();
        assert_eq!(g, parse_prop("dog(Alex) -> animal(Alex)").unwrap());

        let sig = ClausalSignature::new([("excp", 1)], ["T", "C"]).unwrap();
        let g = ground(&sig, &parse("all x: ~excp(x)")).unwrap();
        assert_eq!(g.to_string(), "~excp(T) & ~excp(C)");
    }

    #[test]
    fn free_and_unknown_symbols() {
        let sig = ClausalSignature::new([("dog", 1)], ["Alex"]).unwrap();
        assert_eq!(ground(&sig, &parse("dog(x)")).unwrap_err(), Error::FreeVariable("x".into()));
        assert_eq!(
            ground(&sig, &parse("dog(Bob)")).unwrap_err(),
            Error::UnknownConstant("Bob".into())
        );
        assert_eq!(
            ground(&sig, &parse("cat(Alex)")).unwrap_err(),
            Error::UnknownPredicate("cat".into())
        );
        assert!(matches!(
            ground(&sig, &parse("dog(Alex, Alex)")),
            Err(Error::ArityMismatch { expected: 1, found: 2, .. })
        ));
    }

    #[test]
    fn sentence_shapes() {
        assert!(matches!(parse("dog(Alex)"), ClausalSentence::GroundLiteral { positive: true, .. }));
        assert!(matches!(parse("~dog(Alex)"), ClausalSentence::GroundLiteral { positive: false, .. }));
        assert!(matches!(parse("dog(Alex) | cat(Alex)"), ClausalSentence::GroundFormula(_)));
        assert!(matches!(parse("~all x: p(x)"), ClausalSentence::NegatedUniversal(_)));
        assert!(matches!(parse("~(all x: p(x))"), ClausalSentence::NegatedUniversal(_)));
        let s = parse("all x: bird(x) & ~excp(x) -> flier(x)");
        assert_eq!(s.to_string(), "all x: bird(x) & ~excp(x) -> flier(x)");
        assert_eq!(parse(&s.to_string()), s);
        let neg = parse("~all x: p(x)");
        assert_eq!(parse(&neg.to_string()), neg);
    }

    #[test]
    fn existential_antecedent_becomes_outer_universal() {
        let s = parse("all x: (exists y: spouse(x, y)) -> married(x)");
        assert_eq!(s, parse("all x, y: spouse(x,y) -> married(x)"));
        assert!(matches!(
            ClausalSentence::parse("all x: (exists y: p(x,y)) -> q(y)"),
            Err(Error::UnsupportedQuantifier(_))
        ));
        assert!(matches!(
            ClausalSentence::parse("all x: exists y: p(x,y)"),
            Err(Error::UnsupportedQuantifier(_))
        ));
        assert!(matches!(
            ClausalSentence::parse("p(A) & all x: q(x)"),
            Err(Error::UnsupportedQuantifier(_))
        ));
    }

    #[test]
    fn meaning_on_the_quotient() {
        let sig = ClausalSignature::new([("dog", 1), ("animal", 1)], ["Alex"]).unwrap();
        let sys = ClausalSystem::new(sig).unwrap();
        assert_eq!(sys.universe().world_count(), 4);
        assert_eq!(sys.meaning(&parse("all x: dog(x) -> animal(x)")).unwrap().count(), 3);
        assert!(sys.meaning(&parse("dog(Alex) | ~dog(Alex)")).unwrap().is_top());
        assert!(sys.meaning(&parse("dog(Alex) & ~dog(Alex)")).unwrap().is_empty());
    }

    #[test]
    fn harvesting_adds_constants_and_witnesses() {
        let script = [
            parse("all x: dog(x) -> animal(x)"),
            parse("dog(Alex)"),
            parse("animal(Alex)"),
        ];
        let sig = ClausalSignature::for_sentences(Vec::<&str>::new(), &script).unwrap();
        assert_eq!(sig.constants(), ["Alex", "_1"]);
        assert_eq!(sig.predicates(), [("dog".to_string(), 1), ("animal".to_string(), 1)]);

        let married = [parse("all x: (exists y: spouse(x,y)) -> married(x)"), parse("spouse(Robert, Alice)")];
        let sig = ClausalSignature::for_sentences(Vec::<&str>::new(), &married).unwrap();
        assert_eq!(sig.constants(), ["Robert", "Alice", "_1", "_2"]);
        assert_eq!(sig.ground_atom_count(), 20);

        // an unmentioned declared constant takes the place of a witness
        let sig = ClausalSignature::for_sentences(["Zed"], &married).unwrap();
        assert_eq!(sig.constants(), ["Zed", "Robert", "Alice", "_1"]);

        let clash = [parse("p(A)"), parse("p(A, B)")];
        assert!(matches!(
            ClausalSignature::for_sentences(Vec::<&str>::new(), &clash),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn reserved_constant_and_limits() {
        let sig = ClausalSignature::new(Vec::<(&str, usize)>::new(), Vec::<&str>::new()).unwrap();
        assert_eq!(sig.constants(), [RESERVED_CONSTANT]);
        let sys = ClausalSystem::new(sig).unwrap();
        assert_eq!(sys.universe().world_count(), 1);
        let big = ClausalSignature::new([("r", 2)], ["A", "B", "C", "D", "E"]).unwrap();
        assert_eq!(
            ClausalSystem::new(big).unwrap_err(),
            Error::TooManyAtoms { count: 25, max: 20 }
        );
    }
}
