//! Measurement-sequence expressions: series (`.`) and parallel (`|`)
//! combination of atoms such as `[m1,m2,m3]`, evaluated to amplitudes.
//!
//! ```
//! use zitterlab::seqlang::{parse, AmplitudeEnv};
//! use zitterlab::Amplitude;
//!
//! let mut env = AmplitudeEnv::new();
//! env.insert("m1", "m2", Amplitude::I);
//! env.insert("m2", "m3", Amplitude::I);
//! let expr = parse("[m1,m2].[m2,m3]").unwrap();
//! assert_eq!(expr.evaluate(&env).unwrap(), Amplitude::new(-1.0, 0.0));
//! ```

mod parser;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::proc_calc::Amplitude;

pub use parser::parse;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeqError {
    #[error("syntax error at {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("empty atom at {position}")]
    EmptyAtom { position: usize },
    #[error("no amplitude for link ({0}, {1})")]
    MissingLink(String, String),
    #[error("series needs a shared outcome: left ends at `{left_end}`, right starts at `{right_start}`")]
    ChainMismatch { left_end: String, right_start: String },
    #[error("parallel branches must share endpoints: [{0}..{1}] vs [{2}..{3}]")]
    ParallelMismatch(String, String, String, String),
    #[error("environment: {0}")]
    Env(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SeqExpr {
    Atom(Vec<String>),
    Series(Box<SeqExpr>, Box<SeqExpr>),
    Parallel(Box<SeqExpr>, Box<SeqExpr>),
}

impl SeqExpr {
    pub fn atom<S: Into<String>>(outcomes: impl IntoIterator<Item = S>) -> Self {
        SeqExpr::Atom(outcomes.into_iter().map(Into::into).collect())
    }

    pub fn series(left: SeqExpr, right: SeqExpr) -> Self {
        SeqExpr::Series(Box::new(left), Box::new(right))
    }

    pub fn parallel(left: SeqExpr, right: SeqExpr) -> Self {
        SeqExpr::Parallel(Box::new(left), Box::new(right))
    }

    fn precedence(&self) -> u8 {
        match self {
            SeqExpr::Parallel(..) => 1,
            SeqExpr::Series(..) => 2,
            SeqExpr::Atom(_) => 3,
        }
    }

    /// First and last outcome, after checking that every series joint shares
    /// its boundary outcome and every parallel pair shares both endpoints.
    pub fn endpoints(&self) -> Result<(&str, &str), SeqError> {
        match self {
            SeqExpr::Atom(o) => Ok((o.first().expect("atoms are nonempty"), o.last().expect("atoms are nonempty"))),
            SeqExpr::Series(l, r) => {
                let (first, left_end) = l.endpoints()?;
                let (right_start, last) = r.endpoints()?;
                if left_end != right_start {
                    return Err(SeqError::ChainMismatch {
                        left_end: left_end.to_owned(),
                        right_start: right_start.to_owned(),
                    });
                }
                Ok((first, last))
            }
            SeqExpr::Parallel(l, r) => {
                let a = l.endpoints()?;
                let b = r.endpoints()?;
                if a != b {
                    return Err(SeqError::ParallelMismatch(a.0.into(), a.1.into(), b.0.into(), b.1.into()));
                }
                Ok(a)
            }
        }
    }

    /// Sum rule for `|`, product rule for `.`; an atom is the product of its
    /// links taken left to right (a single-outcome atom is `1`).
    pub fn evaluate(&self, env: &AmplitudeEnv) -> Result<Amplitude, SeqError> {
        self.endpoints()?;
        self.eval_unchecked(env)
    }

    fn eval_unchecked(&self, env: &AmplitudeEnv) -> Result<Amplitude, SeqError> {
        match self {
            SeqExpr::Atom(o) => o.windows(2).try_fold(Amplitude::ONE, |acc, w| Ok(acc * env.link(&w[0], &w[1])?)),
            SeqExpr::Series(l, r) => Ok(l.eval_unchecked(env)? * r.eval_unchecked(env)?),
            SeqExpr::Parallel(l, r) => Ok(l.eval_unchecked(env)? + r.eval_unchecked(env)?),
        }
    }

    /// Born rule applied to the evaluated amplitude. For `[m1,m2,m3]` this is
    /// `Prob(m2, m3 | m1)`; no further normalization is applied.
    pub fn probability(&self, env: &AmplitudeEnv) -> Result<f64, SeqError> {
        Ok(self.evaluate(env)?.born())
    }

    pub fn depth(&self) -> usize {
        match self {
            SeqExpr::Atom(_) => 1,
            SeqExpr::Series(l, r) | SeqExpr::Parallel(l, r) => 1 + l.depth().max(r.depth()),
        }
    }
}

impl fmt::Display for SeqExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let child = |f: &mut fmt::Formatter<'_>, e: &SeqExpr, min: u8| {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            SeqExpr::Atom(o) => write!(f, "[{}]", o.join(",")),
            // both operators associate to the left
            SeqExpr::Series(l, r) => {
                child(f, l, 2)?;
                f.write_str(".")?;
                child(f, r, 3)
            }
            SeqExpr::Parallel(l, r) => {
                child(f, l, 1)?;
                f.write_str(" | ")?;
                child(f, r, 2)
            }
        }
    }
}

pub fn evaluate(expr: &SeqExpr, env: &AmplitudeEnv) -> Result<Amplitude, SeqError> {
    expr.evaluate(env)
}

pub fn probability(expr: &SeqExpr, env: &AmplitudeEnv) -> Result<f64, SeqError> {
    expr.probability(env)
}

/// Amplitudes of elementary links `[m_i, m_j]`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AmplitudeEnv {
    links: HashMap<(String, String), Amplitude>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkEntry {
    pub from: String,
    pub to: String,
    pub a1: f64,
    pub a2: f64,
}

/// `{"links":[{"from":"m1","to":"m2","a1":0.0,"a2":1.0}, …]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvDoc {
    pub links: Vec<LinkEntry>,
}

impl AmplitudeEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, from: impl Into<String>, to: impl Into<String>, amp: Amplitude) -> Option<Amplitude> {
        self.links.insert((from.into(), to.into()), amp)
    }

    pub fn get(&self, from: &str, to: &str) -> Option<Amplitude> {
        self.links.get(&(from.to_owned(), to.to_owned())).copied()
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    fn link(&self, from: &str, to: &str) -> Result<Amplitude, SeqError> {
        self.get(from, to).ok_or_else(|| SeqError::MissingLink(from.to_owned(), to.to_owned()))
    }

    pub fn from_doc(doc: &EnvDoc) -> Result<Self, SeqError> {
        let mut env = Self::new();
        for l in &doc.links {
            let amp = Amplitude::try_new(l.a1, l.a2).map_err(|e| SeqError::Env(e.to_string()))?;
            if env.insert(l.from.clone(), l.to.clone(), amp).is_some() {
                return Err(SeqError::Env(format!("duplicate link ({}, {})", l.from, l.to)));
            }
        }
        Ok(env)
    }

    pub fn from_json(text: &str) -> Result<Self, SeqError> {
        let doc: EnvDoc = serde_json::from_str(text).map_err(|e| SeqError::Env(e.to_string()))?;
        Self::from_doc(&doc)
    }
}
