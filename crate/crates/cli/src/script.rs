//! Line-oriented script syntax.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackendKind {
    Prop,
    Clausal,
    Frame,
}

impl fmt::Display for BackendKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BackendKind::Prop => "prop",
            BackendKind::Clausal => "clausal",
            BackendKind::Frame => "frame",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Statement {
    Backend(BackendKind),
    Atoms(Vec<String>),
    Constants(Vec<String>),
    Frame(Vec<String>),
    Tell { x_t: f64, x_f: f64, sentence: String },
    Ask(String),
    Show,
    Reset,
}

impl Statement {
    pub fn is_declaration(&self) -> bool {
        matches!(self, Statement::Atoms(_) | Statement::Constants(_) | Statement::Frame(_))
    }

    /// The sentence text of a tell or ask.
    pub fn sentence(&self) -> Option<&str> {
        match self {
            Statement::Tell { sentence, .. } | Statement::Ask(sentence) => Some(sentence),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScriptError {
    #[error("unknown statement `{0}`")]
    UnknownStatement(String),
    #[error("unknown backend `{0}`, expected prop, clausal or frame")]
    UnknownBackend(String),
    #[error("`{0}` is not a decimal number")]
    BadNumber(String),
    #[error("`{0}` needs at least one name")]
    EmptyDeclaration(&'static str),
    #[error("`{0}` takes no arguments")]
    UnexpectedArguments(&'static str),
    #[error("usage: tell <x_t> <x_f> <sentence>")]
    TellUsage,
    #[error("usage: ask <sentence>")]
    AskUsage,
}

/// Parses one line. Blank lines and `#` comments give `None`.
pub fn parse_statement(line: &str) -> Result<Option<Statement>, ScriptError> {
    let line = line.trim();
    if line.is_empty() || line.starts_with('#') {
        return Ok(None);
    }
    let (keyword, rest) = match line.split_once(char::is_whitespace) {
        Some((k, r)) => (k, r.trim()),
        None => (line, ""),
    };
    let names = |what: &'static str| -> Result<Vec<String>, ScriptError> {
        let v: Vec<String> = rest
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(str::to_string)
            .collect();
        if v.is_empty() {
            Err(ScriptError::EmptyDeclaration(what))
        } else {
            Ok(v)
        }
    };
    let bare = |what: &'static str, s: Statement| {
        if rest.is_empty() {
            Ok(s)
        } else {
            Err(ScriptError::UnexpectedArguments(what))
        }
    };
    let stmt = match keyword {
        "backend" => Statement::Backend(match rest {
            "prop" => BackendKind::Prop,
            "clausal" => BackendKind::Clausal,
            "frame" => BackendKind::Frame,
            other => return Err(ScriptError::UnknownBackend(other.to_string())),
        }),
        "atoms" => Statement::Atoms(names("atoms")?),
        "constants" => Statement::Constants(names("constants")?),
        "frame" => Statement::Frame(names("frame")?),
        "tell" => {
            let mut parts = rest.splitn(3, char::is_whitespace);
            let (Some(t), Some(f), Some(s)) = (parts.next(), parts.next(), parts.next()) else {
                return Err(ScriptError::TellUsage);
            };
            let sentence = s.trim();
            if sentence.is_empty() {
                return Err(ScriptError::TellUsage);
            }
            Statement::Tell {
                x_t: decimal(t)?,
                x_f: decimal(f)?,
                sentence: sentence.to_string(),
            }
        }
        "ask" if rest.is_empty() => return Err(ScriptError::AskUsage),
        "ask" => Statement::Ask(rest.to_string()),
        "show" => bare("show", Statement::Show)?,
        "reset" => bare("reset", Statement::Reset)?,
        other => return Err(ScriptError::UnknownStatement(other.to_string())),
    };
    Ok(Some(stmt))
}

/// Plain decimal notation only: digits with an optional fractional part.
fn decimal(text: &str) -> Result<f64, ScriptError> {
    let digits = text.strip_prefix('+').unwrap_or(text);
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    let ok = !(int.is_empty() && frac.is_empty())
        && int.bytes().all(|b| b.is_ascii_digit())
        && frac.bytes().all(|b| b.is_ascii_digit());
    if !ok {
        return Err(ScriptError::BadNumber(text.to_string()));
    }
    text.parse().map_err(|_| ScriptError::BadNumber(text.to_string()))
}

/// Numbered statements of a script (1-based line numbers), skipping
/// blanks and comments.
pub fn parse_script(text: &str) -> Vec<(usize, Result<Statement, ScriptError>)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, line)| parse_statement(line).transpose().map(|r| (i + 1, r)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn statements() {
        assert_eq!(parse_statement("  # note").unwrap(), None);
        assert_eq!(parse_statement("").unwrap(), None);
        assert_eq!(
            parse_statement("backend clausal").unwrap(),
            Some(Statement::Backend(BackendKind::Clausal))
        );
        assert_eq!(
            parse_statement("constants T, C").unwrap(),
            Some(Statement::Constants(vec!["T".into(), "C".into()]))
        );
        assert_eq!(
            parse_statement("tell 0.9 0 all x: dog(x) -> animal(x)").unwrap(),
            Some(Statement::Tell {
                x_t: 0.9,
                x_f: 0.0,
                sentence: "all x: dog(x) -> animal(x)".into()
            })
        );
        assert_eq!(parse_statement("ask  Q(a) ").unwrap(), Some(Statement::Ask("Q(a)".into())));
        assert_eq!(parse_statement("show").unwrap(), Some(Statement::Show));
    }

    #[test]
    fn malformed_statements() {
        assert!(matches!(parse_statement("tel 1 0 p"), Err(ScriptError::UnknownStatement(_))));
        assert!(matches!(parse_statement("tell 1e0 0 p"), Err(ScriptError::BadNumber(_))));
        assert!(matches!(parse_statement("tell 0.5 nan p"), Err(ScriptError::BadNumber(_))));
        assert_eq!(parse_statement("tell 0.5 0.1"), Err(ScriptError::TellUsage));
        assert_eq!(parse_statement("ask"), Err(ScriptError::AskUsage));
        assert!(matches!(parse_statement("backend modal"), Err(ScriptError::UnknownBackend(_))));
        assert!(matches!(parse_statement("atoms"), Err(ScriptError::EmptyDeclaration(_))));
        assert!(matches!(parse_statement("show all"), Err(ScriptError::UnexpectedArguments(_))));
    }

    #[test]
    fn decimals() {
        assert_eq!(decimal("0.25").unwrap(), 0.25);
        assert_eq!(decimal("1").unwrap(), 1.0);
        assert_eq!(decimal(".5").unwrap(), 0.5);
        assert!(decimal(".").is_err());
        assert!(decimal("-0.1").is_err());
    }

    #[test]
    fn line_numbers_skip_comments() {
        let lines = parse_script("# c\nbackend prop\n\nask p\n");
        let numbers: Vec<usize> = lines.iter().map(|(n, _)| *n).collect();
        assert_eq!(numbers, vec![2, 4]);
    }
}
