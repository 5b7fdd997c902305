//! Propositional formulas: AST, concrete syntax, evaluation, CNF conversion.
//!
//! The grammar is `φ ::= x | φ & φ | φ "|" φ | φ -> φ | !φ` plus parentheses
//! and the constants `true`/`false`. Constants never appear in model files;
//! they exist so that substitution and grounding have a closed result type.

mod cnf;
mod parse;
mod print;

pub use cnf::{tseitin, to_cnf, Clause, CnfEncoding, Literal, VarId, VarPool};
pub use parse::ParseError;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A variable identifier: a letter or underscore followed by letters, digits
/// or underscores. `true` and `false` are reserved words, not variable names.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct VarName(String);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NameError {
    #[error("empty variable name")]
    Empty,
    #[error("invalid variable name `{0}`: must match [A-Za-z_][A-Za-z0-9_]*")]
    BadPattern(String),
    #[error("`{0}` is a reserved word and cannot be a variable name")]
    Reserved(String),
}

impl VarName {
    pub fn new(text: impl Into<String>) -> Result<Self, NameError> {
        let text = text.into();
        let mut chars = text.chars();
        match chars.next() {
            None => return Err(NameError::Empty),
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
            Some(_) => return Err(NameError::BadPattern(text)),
        }
        if !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(NameError::BadPattern(text));
        }
        if text == "true" || text == "false" {
            return Err(NameError::Reserved(text));
        }
        Ok(VarName(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VarName({})", self.0)
    }
}

impl FromStr for VarName {
    type Err = NameError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        VarName::new(s)
    }
}

impl TryFrom<String> for VarName {
    type Error = NameError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        VarName::new(s)
    }
}

impl From<VarName> for String {
    fn from(v: VarName) -> String {
        v.0
    }
}

/// A propositional formula over named variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Var(VarName),
    /// Truth constant. Produced by [`Formula::substitute`] and grounding;
    /// the parser only yields it for the literal words `true`/`false`, and
    /// model files are rejected if they contain one.
    Const(bool),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A total or partial mapping from variable names to truth values.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment(BTreeMap<VarName, bool>);

impl Assignment {
    pub fn new() -> Self {
        Assignment(BTreeMap::new())
    }

    /// Builds the assignment mapping every var in `universe` to whether it
    /// appears in `truthy`.
    pub fn from_true_set<'a>(
        universe: impl IntoIterator<Item = &'a VarName>,
        truthy: &BTreeSet<VarName>,
    ) -> Self {
        Assignment(
            universe
                .into_iter()
                .map(|v| (v.clone(), truthy.contains(v)))
                .collect(),
        )
    }

    pub fn set(&mut self, var: VarName, value: bool) {
        self.0.insert(var, value);
    }

    pub fn get(&self, var: &VarName) -> Option<bool> {
        self.0.get(var).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarName, bool)> {
        self.0.iter().map(|(k, v)| (k, *v))
    }

    pub fn true_vars(&self) -> BTreeSet<VarName> {
        self.0
            .iter()
            .filter(|(_, v)| **v)
            .map(|(k, _)| k.clone())
            .collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<(VarName, bool)> for Assignment {
    fn from_iter<T: IntoIterator<Item = (VarName, bool)>>(iter: T) -> Self {
        Assignment(iter.into_iter().collect())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("variable `{0}` is not bound by the assignment")]
    Unbound(VarName),
}

impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(VarName::new(name).expect("valid variable name"))
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Formula {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    /// Conjunction of a nonempty sequence, left-associated.
    /// Returns `Const(true)` for an empty sequence.
    pub fn conjoin(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut it = parts.into_iter();
        match it.next() {
            None => Formula::Const(true),
            Some(first) => it.fold(first, Formula::and),
        }
    }

    /// Disjunction of a nonempty sequence, left-associated.
    /// Returns `Const(false)` for an empty sequence.
    pub fn disjoin(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut it = parts.into_iter();
        match it.next() {
            None => Formula::Const(false),
            Some(first) => it.fold(first, Formula::or),
        }
    }

    pub fn parse(text: &str) -> Result<Formula, ParseError> {
        parse::parse(text)
    }

    /// Standard Boolean semantics; `Implies(p, q)` is `!p | q`. The
    /// assignment must bind every variable of the formula.
    pub fn evaluate(&self, a: &Assignment) -> Result<bool, EvalError> {
        match self {
            Formula::Var(v) => a.get(v).ok_or_else(|| EvalError::Unbound(v.clone())),
            Formula::Const(b) => Ok(*b),
            Formula::Not(c) => Ok(!c.evaluate(a)?),
            Formula::And(l, r) => Ok(l.evaluate(a)? && r.evaluate(a)?),
            Formula::Or(l, r) => Ok(l.evaluate(a)? || r.evaluate(a)?),
            Formula::Implies(l, r) => Ok(!l.evaluate(a)? || r.evaluate(a)?),
        }
    }

    /// The set of variables occurring in the formula.
    pub fn vars(&self) -> BTreeSet<VarName> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<VarName>) {
        match self {
            Formula::Var(v) => {
                out.insert(v.clone());
            }
            Formula::Const(_) => {}
            Formula::Not(c) => c.collect_vars(out),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    /// Variables in first-occurrence order of a left-to-right traversal.
    pub fn vars_in_order(&self) -> Vec<VarName> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        self.collect_vars_in_order(&mut seen, &mut out);
        out
    }

    fn collect_vars_in_order(&self, seen: &mut BTreeSet<VarName>, out: &mut Vec<VarName>) {
        match self {
            Formula::Var(v) => {
                if seen.insert(v.clone()) {
                    out.push(v.clone());
                }
            }
            Formula::Const(_) => {}
            Formula::Not(c) => c.collect_vars_in_order(seen, out),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                l.collect_vars_in_order(seen, out);
                r.collect_vars_in_order(seen, out);
            }
        }
    }

    /// Replaces each variable bound by `a` with its truth constant and folds
    /// constants away. Unbound variables are left intact.
    pub fn substitute(&self, a: &Assignment) -> Formula {
        match self {
            Formula::Var(v) => match a.get(v) {
                Some(b) => Formula::Const(b),
                None => self.clone(),
            },
            Formula::Const(_) => self.clone(),
            Formula::Not(c) => match c.substitute(a) {
                Formula::Const(b) => Formula::Const(!b),
                sub => Formula::not(sub),
            },
            Formula::And(l, r) => match (l.substitute(a), r.substitute(a)) {
                (Formula::Const(false), _) | (_, Formula::Const(false)) => Formula::Const(false),
                (Formula::Const(true), sub) | (sub, Formula::Const(true)) => sub,
                (sl, sr) => Formula::and(sl, sr),
            },
            Formula::Or(l, r) => match (l.substitute(a), r.substitute(a)) {
                (Formula::Const(true), _) | (_, Formula::Const(true)) => Formula::Const(true),
                (Formula::Const(false), sub) | (sub, Formula::Const(false)) => sub,
                (sl, sr) => Formula::or(sl, sr),
            },
            Formula::Implies(l, r) => match (l.substitute(a), r.substitute(a)) {
                (Formula::Const(false), _) | (_, Formula::Const(true)) => Formula::Const(true),
                (Formula::Const(true), sub) => sub,
                (sl, Formula::Const(false)) => match sl {
                    Formula::Not(inner) => *inner,
                    sl => Formula::not(sl),
                },
                (sl, sr) => Formula::implies(sl, sr),
            },
        }
    }

    /// Folds constant subformulas without substituting anything.
    pub fn fold_constants(&self) -> Formula {
        self.substitute(&Assignment::new())
    }

    /// Splits a top-level conjunction into its conjuncts, flattening the
    /// `And` spine. A formula that is not an `And` is a single conjunct.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        fn walk<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
            match f {
                Formula::And(l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
                other => out.push(other),
            }
        }
        walk(self, &mut out);
        out
    }

    pub fn contains_const(&self) -> bool {
        match self {
            Formula::Var(_) => false,
            Formula::Const(_) => true,
            Formula::Not(c) => c.contains_const(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                l.contains_const() || r.contains_const()
            }
        }
    }
}
