//! First-order syntax: signatures, terms, formulas, and the operations on
//! them (free variables, capture-avoiding substitution, the induction
//! schema). Parsing lives in [`parser`], canonical printing in [`print`].
//!
//! Terms and formulas are plain recursive enums; nothing is interned. All
//! values are immutable and operations are pure.

mod parser;
mod print;

pub use parser::{parse_formula, parse_term, MAX_EXPONENT, MAX_LITERAL};

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised while parsing or manipulating syntax.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("syntax error at byte {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("unknown symbol `{name}` at byte {pos}")]
    UnknownSymbol { name: String, pos: usize },
    #[error("arity mismatch for `{name}` at byte {pos}: expected {expected} arguments, got {got}")]
    ArityMismatch { name: String, pos: usize, expected: usize, got: usize },
    #[error("integer literal at byte {pos} exceeds the supported bound of {max}")]
    LiteralTooLarge { pos: usize, max: u64 },
    #[error("symbol `{name}`: {problem}")]
    BadSymbol { name: String, problem: String },
    #[error("variable `{0}` is not free in the formula")]
    NotFree(String),
    #[error("signature does not provide the constants 0, 1 and binary + required here")]
    MissingArithmetic,
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
}

/// A finite signature: function symbols and relation symbols with their
/// arities, plus constant symbols.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    #[serde(default)]
    functions: BTreeMap<String, usize>,
    #[serde(default)]
    relations: BTreeMap<String, usize>,
    #[serde(default)]
    constants: BTreeSet<String>,
}

impl Signature {
    /// Build a validated signature. Arities must be ≥ 1 (nullary operations
    /// belong in `constants`) and names must not be reused across kinds.
    pub fn new<S: Into<String>>(
        functions: Vec<(S, usize)>,
        relations: Vec<(S, usize)>,
        constants: Vec<S>,
    ) -> Result<Self, SyntaxError> {
        let sig = Signature {
            functions: functions.into_iter().map(|(n, a)| (n.into(), a)).collect(),
            relations: relations.into_iter().map(|(n, a)| (n.into(), a)).collect(),
            constants: constants.into_iter().map(|n| n.into()).collect(),
        };
        sig.validate()?;
        Ok(sig)
    }

    /// The language of rings: constants 0, 1 and binary +, −, ·.
    pub fn ring() -> Self {
        Signature::new(
            vec![("+", 2), ("-", 2), ("*", 2)],
            Vec::new(),
            vec!["0", "1"],
        )
        .expect("ring signature is valid")
    }

    fn validate(&self) -> Result<(), SyntaxError> {
        // The ring operators +, -, * may only be binary functions, and the
        // ring constants 0, 1 may only be constants; every other symbol must
        // be an identifier so that the concrete syntax can express it.
        for (name, arity) in &self.functions {
            if matches!(name.as_str(), "+" | "-" | "*") {
                if *arity != 2 {
                    return Err(SyntaxError::InvalidSignature(format!(
                        "ring operator `{name}` must be binary"
                    )));
                }
            } else if !is_identifier(name) {
                return Err(SyntaxError::InvalidSignature(format!(
                    "function name `{name}` is not a valid identifier"
                )));
            }
        }
        for name in self.relations.keys() {
            if !is_identifier(name) {
                return Err(SyntaxError::InvalidSignature(format!(
                    "relation name `{name}` is not a valid identifier"
                )));
            }
        }
        for name in &self.constants {
            if !matches!(name.as_str(), "0" | "1") && !is_identifier(name) {
                return Err(SyntaxError::InvalidSignature(format!(
                    "constant name `{name}` is not a valid identifier"
                )));
            }
        }
        for (name, arity) in self.functions.iter().chain(self.relations.iter()) {
            if *arity == 0 {
                return Err(SyntaxError::InvalidSignature(format!(
                    "symbol `{name}` has arity 0; declare it as a constant"
                )));
            }
        }
        for name in self.functions.keys() {
            if self.relations.contains_key(name) || self.constants.contains(name) {
                return Err(SyntaxError::InvalidSignature(format!(
                    "symbol `{name}` is declared more than once"
                )));
            }
        }
        for name in self.relations.keys() {
            if self.constants.contains(name) {
                return Err(SyntaxError::InvalidSignature(format!(
                    "symbol `{name}` is declared more than once"
                )));
            }
        }
        Ok(())
    }

    pub fn function_arity(&self, name: &str) -> Option<usize> {
        self.functions.get(name).copied()
    }

    pub fn relation_arity(&self, name: &str) -> Option<usize> {
        self.relations.get(name).copied()
    }

    pub fn has_constant(&self, name: &str) -> bool {
        self.constants.contains(name)
    }

    pub fn is_declared(&self, name: &str) -> bool {
        self.functions.contains_key(name)
            || self.relations.contains_key(name)
            || self.constants.contains(name)
    }

    pub fn functions(&self) -> impl Iterator<Item = (&str, usize)> {
        self.functions.iter().map(|(n, a)| (n.as_str(), *a))
    }

    pub fn relations(&self) -> impl Iterator<Item = (&str, usize)> {
        self.relations.iter().map(|(n, a)| (n.as_str(), *a))
    }

    pub fn constants(&self) -> impl Iterator<Item = &str> {
        self.constants.iter().map(|n| n.as_str())
    }

    /// Load from the JSON signature-file format:
    /// `{"functions": {"+": 2}, "relations": {"E": 2}, "constants": ["0"]}`.
    pub fn from_json_str(text: &str) -> Result<Self, SyntaxError> {
        let sig: Signature = serde_json::from_str(text)
            .map_err(|e| SyntaxError::InvalidSignature(e.to_string()))?;
        sig.validate()?;
        Ok(sig)
    }
}

/// A first-order term.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Term {
    Var(String),
    Const(String),
    Apply(String, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    /// Collect every variable occurring in the term.
    pub fn vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) => {}
            Term::Apply(_, args) => {
                for a in args {
                    a.vars(out);
                }
            }
        }
    }

    /// Check symbols and arities against a signature.
    pub fn validate(&self, sig: &Signature) -> Result<(), SyntaxError> {
        match self {
            Term::Var(_) => Ok(()),
            Term::Const(c) => {
                if sig.has_constant(c) {
                    Ok(())
                } else {
                    Err(SyntaxError::UnknownSymbol { name: c.clone(), pos: 0 })
                }
            }
            Term::Apply(f, args) => {
                let expected = sig
                    .function_arity(f)
                    .ok_or_else(|| SyntaxError::UnknownSymbol { name: f.clone(), pos: 0 })?;
                if args.len() != expected {
                    return Err(SyntaxError::ArityMismatch {
                        name: f.clone(),
                        pos: 0,
                        expected,
                        got: args.len(),
                    });
                }
                for a in args {
                    a.validate(sig)?;
                }
                Ok(())
            }
        }
    }

    fn substitute(&self, map: &BTreeMap<String, Term>) -> Term {
        match self {
            Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::Const(_) => self.clone(),
            Term::Apply(f, args) => {
                Term::Apply(f.clone(), args.iter().map(|a| a.substitute(map)).collect())
            }
        }
    }
}

/// A first-order formula. `Not(Eq(..))` is printed and parsed as `!=`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Formula {
    Eq(Term, Term),
    Rel(String, Vec<Term>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(v: &str, f: Formula) -> Formula {
        Formula::Exists(v.to_string(), Box::new(f))
    }

    pub fn forall(v: &str, f: Formula) -> Formula {
        Formula::Forall(v.to_string(), Box::new(f))
    }

    /// The set of free variables.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Eq(a, b) => {
                let mut vs = BTreeSet::new();
                a.vars(&mut vs);
                b.vars(&mut vs);
                out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
            }
            Formula::Rel(_, args) => {
                let mut vs = BTreeSet::new();
                for a in args {
                    a.vars(&mut vs);
                }
                out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
            }
            Formula::Not(g) => g.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                bound.push(v.clone());
                g.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// A sentence has no free variables.
    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Every variable name occurring anywhere (free, bound, or as a binder).
    pub fn all_var_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Eq(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            Formula::Rel(_, args) => {
                for a in args {
                    a.vars(out);
                }
            }
            Formula::Not(g) => g.collect_names(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_names(out);
                b.collect_names(out);
            }
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                out.insert(v.clone());
                g.collect_names(out);
            }
        }
    }

    /// Check symbols and arities against a signature.
    pub fn validate(&self, sig: &Signature) -> Result<(), SyntaxError> {
        match self {
            Formula::Eq(a, b) => {
                a.validate(sig)?;
                b.validate(sig)
            }
            Formula::Rel(r, args) => {
                let expected = sig
                    .relation_arity(r)
                    .ok_or_else(|| SyntaxError::UnknownSymbol { name: r.clone(), pos: 0 })?;
                if args.len() != expected {
                    return Err(SyntaxError::ArityMismatch {
                        name: r.clone(),
                        pos: 0,
                        expected,
                        got: args.len(),
                    });
                }
                for a in args {
                    a.validate(sig)?;
                }
                Ok(())
            }
            Formula::Not(g) => g.validate(sig),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.validate(sig)?;
                b.validate(sig)
            }
            Formula::Exists(_, g) | Formula::Forall(_, g) => g.validate(sig),
        }
    }

    /// Simultaneous capture-avoiding substitution of terms for free
    /// variables. Bound variables are renamed (with a numeric suffix not
    /// used anywhere in the formula) when a replacement term would otherwise
    /// be captured.
    pub fn substitute(&self, map: &BTreeMap<String, Term>) -> Formula {
        if map.is_empty() {
            return self.clone();
        }
        match self {
            Formula::Eq(a, b) => Formula::Eq(a.substitute(map), b.substitute(map)),
            Formula::Rel(r, args) => {
                Formula::Rel(r.clone(), args.iter().map(|a| a.substitute(map)).collect())
            }
            Formula::Not(g) => Formula::not(g.substitute(map)),
            Formula::And(a, b) => Formula::and(a.substitute(map), b.substitute(map)),
            Formula::Or(a, b) => Formula::or(a.substitute(map), b.substitute(map)),
            Formula::Implies(a, b) => Formula::implies(a.substitute(map), b.substitute(map)),
            Formula::Exists(v, g) => {
                let (v, g) = subst_under_binder(v, g, map);
                Formula::Exists(v, Box::new(g))
            }
            Formula::Forall(v, g) => {
                let (v, g) = subst_under_binder(v, g, map);
                Formula::Forall(v, Box::new(g))
            }
        }
    }
}

fn subst_under_binder(v: &str, body: &Formula, map: &BTreeMap<String, Term>) -> (String, Formula) {
    // The binder shadows its own variable, and bindings for variables that
    // are not free in the body are inert.
    let free = body.free_vars();
    let inner: BTreeMap<String, Term> = map
        .iter()
        .filter(|(k, _)| k.as_str() != v && free.contains(*k))
        .map(|(k, t)| (k.clone(), t.clone()))
        .collect();
    if inner.is_empty() {
        return (v.to_string(), body.clone());
    }
    let captures = inner.values().any(|t| {
        let mut vs = BTreeSet::new();
        t.vars(&mut vs);
        vs.contains(v)
    });
    if !captures {
        return (v.to_string(), body.substitute(&inner));
    }
    // Rename the binder to a fresh variable before substituting.
    let mut forbidden = body.all_var_names();
    forbidden.insert(v.to_string());
    for (k, t) in &inner {
        forbidden.insert(k.clone());
        t.vars(&mut forbidden);
    }
    let fresh = fresh_name(v, &forbidden);
    let mut rename = BTreeMap::new();
    rename.insert(v.to_string(), Term::var(&fresh));
    let renamed = body.substitute(&rename);
    (fresh, renamed.substitute(&inner))
}

/// Names usable as variables, constants, functions and relations in the
/// concrete syntax: `[A-Za-z_][A-Za-z0-9_']*`, excluding the keywords.
fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    let head_ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_');
    head_ok
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
        && name != "exists"
        && name != "forall"
}

/// `base` with the first numeric suffix that avoids every forbidden name.
fn fresh_name(base: &str, forbidden: &BTreeSet<String>) -> String {
    for i in 1.. {
        let candidate = format!("{base}{i}");
        if !forbidden.contains(&candidate) {
            return candidate;
        }
    }
    unreachable!()
}

/// The induction axiom for `phi` along `ind_var`:
/// ∀w̄ [ φ(0, w̄) ∧ ∀x (φ(x, w̄) → φ(x+1, w̄)) → ∀x φ(x, w̄) ],
/// where w̄ lists the remaining free variables of φ in sorted order.
/// The signature must provide 0, 1 and binary +.
pub fn induction_axiom(
    phi: &Formula,
    ind_var: &str,
    sig: &Signature,
) -> Result<Formula, SyntaxError> {
    let free = phi.free_vars();
    if !free.contains(ind_var) {
        return Err(SyntaxError::NotFree(ind_var.to_string()));
    }
    if !sig.has_constant("0") || !sig.has_constant("1") || sig.function_arity("+") != Some(2) {
        return Err(SyntaxError::MissingArithmetic);
    }
    let mut zero_map = BTreeMap::new();
    zero_map.insert(ind_var.to_string(), Term::Const("0".into()));
    let base = phi.substitute(&zero_map);
    let mut succ_map = BTreeMap::new();
    succ_map.insert(
        ind_var.to_string(),
        Term::Apply("+".into(), vec![Term::var(ind_var), Term::Const("1".into())]),
    );
    let step = Formula::forall(ind_var, Formula::implies(phi.clone(), phi.substitute(&succ_map)));
    let conclusion = Formula::forall(ind_var, phi.clone());
    let mut out = Formula::implies(Formula::and(base, step), conclusion);
    let params: Vec<&String> = free.iter().filter(|v| v.as_str() != ind_var).collect();
    for w in params.into_iter().rev() {
        out = Formula::forall(w, out);
    }
    Ok(out)
}
