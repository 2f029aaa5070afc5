//! Script runner and REPL for belief bases.
//!
//! A script is a sequence of lines:
//!
//! ```text
//! backend clausal
//! constants a
//! tell 0.8 0 all x: P(x) -> Q(x)
//! tell 0.6 0.3 P(a)
//! ask Q(a)
//! ```

pub mod script;
pub mod session;

use std::io::{self, BufRead, Write};

use clap::ValueEnum;

use script::{parse_script, parse_statement, BackendKind, Statement};
use session::{Session, SessionError};

/// Which engine answers asks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    /// Dempster combination over world sets.
    Semantic,
    /// Label propagation in the assumption-based truth maintenance system.
    Atms,
    /// Both, failing when they disagree.
    Both,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Semantic => "semantic",
            Engine::Atms => "atms",
            Engine::Both => "both",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub engine: Engine,
    pub format: Format,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            engine: Engine::Semantic,
            format: Format::Text,
        }
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_TOTAL_CONFLICT: i32 = 2;
pub const EXIT_DIVERGENCE: i32 = 3;

/// Result of running a script.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn failure(line: usize, err: &SessionError) -> (i32, String) {
    match err {
        e if e.is_total_conflict() => (EXIT_TOTAL_CONFLICT, format!("total conflict at line {line}")),
        SessionError::Divergence { .. } => (EXIT_DIVERGENCE, format!("line {line}: {err}")),
        _ => (EXIT_ERROR, format!("line {line}: {err}")),
    }
}

/// Runs a whole script, stopping at the first error.
///
/// The first statement must declare the backend, and declarations must
/// come before the first tell or ask. The signature covers every sentence
/// in the script, so all of them are answered on the same universe.
pub fn run_script(text: &str, options: Options) -> Outcome {
    let mut out = Outcome {
        code: EXIT_OK,
        stdout: String::new(),
        stderr: String::new(),
    };
    let fail = |out: &mut Outcome, line: usize, err: &SessionError| {
        let (code, msg) = failure(line, err);
        out.code = code;
        out.stderr.push_str(&msg);
        out.stderr.push('\n');
    };
    let statements = parse_script(text);
    let mut session: Option<Session> = None;
    let mut started = false;
    for (line, parsed) in &statements {
        let stmt = match parsed {
            Ok(s) => s,
            Err(e) => {
                fail(&mut out, *line, &e.clone().into());
                return out;
            }
        };
        let Some(sess) = session.as_mut() else {
            let Statement::Backend(kind) = stmt else {
                out.code = EXIT_ERROR;
                out.stderr = format!("line {line}: a script must start with a backend declaration\n");
                return out;
            };
            let mut sess = Session::new(*kind, options.engine, options.format);
            for (_, s) in &statements {
                if let Some(text) = s.as_ref().ok().and_then(Statement::sentence) {
                    sess.preload(text);
                }
            }
            session = Some(sess);
            continue;
        };
        let misplaced = match stmt {
            Statement::Backend(_) => Some("only one backend declaration is allowed"),
            s if s.is_declaration() && started => Some("declarations must come before the first tell or ask"),
            _ => None,
        };
        if let Some(msg) = misplaced {
            out.code = EXIT_ERROR;
            out.stderr.push_str(&format!("line {line}: {msg}\n"));
            return out;
        }
        started |= stmt.sentence().is_some();
        match sess.execute(stmt) {
            Ok(lines) => {
                for l in lines {
                    out.stdout.push_str(&l);
                    out.stdout.push('\n');
                }
            }
            Err(e) => {
                fail(&mut out, *line, &e);
                return out;
            }
        }
    }
    out
}

/// Interactive session over `input`. Starts on the clausal backend; a
/// `backend` line switches backend and starts over. Errors are reported
/// and the session continues with its state unchanged.
///
/// Unlike scripts, the session grows its signature as sentences arrive, and
/// a lowercase name that no quantifier binds is declared as a constant.
pub fn repl(input: impl BufRead, mut output: impl Write, options: Options, prompt: bool) -> io::Result<()> {
    let mut session = Session::new(BackendKind::Clausal, options.engine, options.format);
    session.set_implicit_constants(true);
    if prompt {
        write!(output, "> ")?;
        output.flush()?;
    }
    for line in input.lines() {
        let line = line?;
        let result = parse_statement(&line)
            .map_err(SessionError::from)
            .and_then(|stmt| match stmt {
                Some(s) => session.execute(&s),
                None => Ok(Vec::new()),
            });
        match result {
            Ok(lines) => {
                for l in lines {
                    writeln!(output, "{l}")?;
                }
            }
            Err(e) if e.is_total_conflict() => writeln!(output, "error: total conflict, tell ignored")?,
            Err(e) => writeln!(output, "error: {e}")?,
        }
        if prompt {
            write!(output, "> ")?;
            output.flush()?;
        }
    }
    if prompt {
        writeln!(output)?;
    }
    Ok(())
}
