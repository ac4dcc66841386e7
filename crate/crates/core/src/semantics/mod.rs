//! Finite structures and the Tarski satisfaction relation.
//!
//! A [`FiniteStructure`] interprets every symbol of a [`Signature`] over a
//! nonempty finite universe of opaque element ids. Quantifiers are evaluated
//! by finite disjunction/conjunction. The module also provides homomorphism
//! and isomorphism checks (with the strong, bidirectional relation clause),
//! substructure tests, and elementary equivalence bounded by quantifier
//! rank, decided by the Ehrenfeucht–Fraïssé back-and-forth recursion.
//!
//! Structures are immutable after construction and all checks are pure.

mod builders;

pub use builders::{gf, klein_group, zmod_group, zmod_ring};

use std::collections::{BTreeMap, BTreeSet};

use serde::Deserialize;
use thiserror::Error;

use crate::syntax::{Formula, Signature, SyntaxError, Term};

/// A variable assignment: variable name → element id.
pub type Assignment = BTreeMap<String, String>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("universe must be nonempty")]
    EmptyUniverse,
    #[error("duplicate universe element `{0}`")]
    DuplicateElement(String),
    #[error("element `{0}` is not in the universe")]
    UnknownElement(String),
    #[error("symbol `{0}` has no interpretation in the structure")]
    MissingInterpretation(String),
    #[error("interpretation given for `{0}`, which the signature does not declare")]
    UndeclaredSymbol(String),
    #[error("table for `{symbol}` is malformed: {detail}")]
    TableShape { symbol: String, detail: String },
    #[error("variable `{0}` has no assigned value")]
    UnassignedVariable(String),
    #[error("formula is not a sentence (free variables: {0})")]
    NotASentence(String),
    #[error("structures have different signatures")]
    SignatureMismatch,
    #[error("map is not total: element `{0}` has no image")]
    MapNotTotal(String),
    #[error("map target `{0}` is not in the codomain universe")]
    TargetNotInUniverse(String),
    #[error("{0}")]
    Syntax(#[from] SyntaxError),
    #[error("cannot read structure file: {0}")]
    Json(String),
    #[error("cannot infer a signature: {0}")]
    Inference(String),
    #[error("field construction failed: {0}")]
    Field(String),
}

/// A finite structure: universe plus total interpretation tables for every
/// symbol of its signature.
#[derive(Debug, Clone)]
pub struct FiniteStructure {
    sig: Signature,
    universe: Vec<String>,
    index: BTreeMap<String, usize>,
    /// Flattened row-major tables: entry for (a₁,…,a_k) at Σ aᵢ·n^{k-i}.
    functions: BTreeMap<String, Vec<usize>>,
    relations: BTreeMap<String, BTreeSet<Vec<usize>>>,
    constants: BTreeMap<String, usize>,
}

/// All tuples over {0,…,n−1}^k in lexicographic order.
fn all_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(out.len() * n);
        for t in &out {
            for e in 0..n {
                let mut t2 = t.clone();
                t2.push(e);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

fn flat_index(tuple: &[usize], n: usize) -> usize {
    tuple.iter().fold(0, |acc, &t| acc * n + t)
}

impl FiniteStructure {
    /// Build a structure by giving the interpretation pointwise over element
    /// indices (0-based positions in `universe`).
    pub fn from_interpretation(
        sig: Signature,
        universe: Vec<String>,
        mut fun: impl FnMut(&str, &[usize]) -> usize,
        mut rel: impl FnMut(&str, &[usize]) -> bool,
        mut constant: impl FnMut(&str) -> usize,
    ) -> Result<FiniteStructure, SemanticsError> {
        if universe.is_empty() {
            return Err(SemanticsError::EmptyUniverse);
        }
        let mut index = BTreeMap::new();
        for (i, e) in universe.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(SemanticsError::DuplicateElement(e.clone()));
            }
        }
        let n = universe.len();
        let mut functions = BTreeMap::new();
        for (name, arity) in sig.functions() {
            let mut table = Vec::with_capacity(n.pow(arity as u32));
            for t in all_tuples(n, arity) {
                let v = fun(name, &t);
                if v >= n {
                    return Err(SemanticsError::TableShape {
                        symbol: name.to_string(),
                        detail: format!("value index {v} out of range"),
                    });
                }
                table.push(v);
            }
            functions.insert(name.to_string(), table);
        }
        let mut relations = BTreeMap::new();
        for (name, arity) in sig.relations() {
            let mut set = BTreeSet::new();
            for t in all_tuples(n, arity) {
                if rel(name, &t) {
                    set.insert(t);
                }
            }
            relations.insert(name.to_string(), set);
        }
        let mut constants = BTreeMap::new();
        for name in sig.constants() {
            let v = constant(name);
            if v >= n {
                return Err(SemanticsError::TableShape {
                    symbol: name.to_string(),
                    detail: format!("constant index {v} out of range"),
                });
            }
            constants.insert(name.to_string(), v);
        }
        Ok(FiniteStructure { sig, universe, index, functions, relations, constants })
    }

    /// Parse the JSON structure-file format. When `sig` is absent the
    /// signature is inferred: function arities from table nesting depth,
    /// relation arities from tuple lengths.
    pub fn from_json_str(
        text: &str,
        sig: Option<&Signature>,
    ) -> Result<FiniteStructure, SemanticsError> {
        let file: StructureFile =
            serde_json::from_str(text).map_err(|e| SemanticsError::Json(e.to_string()))?;
        file.into_structure(sig)
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn elem_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    fn apply_fn(&self, name: &str, args: &[usize]) -> usize {
        self.functions[name][flat_index(args, self.universe.len())]
    }

    fn holds_rel(&self, name: &str, args: &[usize]) -> bool {
        self.relations[name].contains(args)
    }

    /// Evaluate a term under an assignment; returns the element id.
    pub fn eval_term(&self, t: &Term, a: &Assignment) -> Result<String, SemanticsError> {
        t.validate(&self.sig)?;
        let env = self.env_from(a)?;
        let v = self.term_value(t, &env)?;
        Ok(self.universe[v].clone())
    }

    /// Tarski evaluation of a formula whose free variables `a` covers.
    pub fn eval(&self, f: &Formula, a: &Assignment) -> Result<bool, SemanticsError> {
        f.validate(&self.sig)?;
        let mut env = self.env_from(a)?;
        self.eval_at(f, &mut env)
    }

    /// A structure models a theory when it satisfies every sentence in it.
    pub fn is_model(&self, theory: &[Formula]) -> Result<bool, SemanticsError> {
        for f in theory {
            let fv = f.free_vars();
            if !fv.is_empty() {
                let list = fv.into_iter().collect::<Vec<_>>().join(", ");
                return Err(SemanticsError::NotASentence(list));
            }
        }
        for f in theory {
            if !self.eval(f, &Assignment::new())? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn env_from(&self, a: &Assignment) -> Result<Vec<(String, usize)>, SemanticsError> {
        let mut env = Vec::with_capacity(a.len());
        for (var, elem) in a {
            let idx = self
                .elem_index(elem)
                .ok_or_else(|| SemanticsError::UnknownElement(elem.clone()))?;
            env.push((var.clone(), idx));
        }
        Ok(env)
    }

    fn term_value(
        &self,
        t: &Term,
        env: &[(String, usize)],
    ) -> Result<usize, SemanticsError> {
        match t {
            Term::Var(v) => env
                .iter()
                .rev()
                .find(|(name, _)| name == v)
                .map(|(_, idx)| *idx)
                .ok_or_else(|| SemanticsError::UnassignedVariable(v.clone())),
            Term::Const(c) => self
                .constants
                .get(c)
                .copied()
                .ok_or_else(|| SemanticsError::MissingInterpretation(c.clone())),
            Term::Apply(f, args) => {
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    vals.push(self.term_value(a, env)?);
                }
                Ok(self.apply_fn(f, &vals))
            }
        }
    }

    fn eval_at(
        &self,
        f: &Formula,
        env: &mut Vec<(String, usize)>,
    ) -> Result<bool, SemanticsError> {
        match f {
            Formula::Eq(a, b) => Ok(self.term_value(a, env)? == self.term_value(b, env)?),
            Formula::Rel(r, args) => {
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    vals.push(self.term_value(a, env)?);
                }
                Ok(self.holds_rel(r, &vals))
            }
            Formula::Not(g) => Ok(!self.eval_at(g, env)?),
            Formula::And(a, b) => Ok(self.eval_at(a, env)? && self.eval_at(b, env)?),
            Formula::Or(a, b) => Ok(self.eval_at(a, env)? || self.eval_at(b, env)?),
            Formula::Implies(a, b) => Ok(!self.eval_at(a, env)? || self.eval_at(b, env)?),
            Formula::Exists(v, g) => {
                for e in 0..self.universe.len() {
                    env.push((v.clone(), e));
                    let holds = self.eval_at(g, env)?;
                    env.pop();
                    if holds {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Formula::Forall(v, g) => {
                for e in 0..self.universe.len() {
                    env.push((v.clone(), e));
                    let holds = self.eval_at(g, env)?;
                    env.pop();
                    if !holds {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Homomorphisms, isomorphisms, substructures
// ---------------------------------------------------------------------------

/// Check that `m` is a homomorphism A → B: constants map to constants,
/// functions commute with the map, and relations are preserved in both
/// directions (R^A(ā) ⟺ R^B(m(ā))).
pub fn is_homomorphism(
    m: &BTreeMap<String, String>,
    a: &FiniteStructure,
    b: &FiniteStructure,
) -> Result<bool, SemanticsError> {
    if a.sig != b.sig {
        return Err(SemanticsError::SignatureMismatch);
    }
    let n = a.universe.len();
    let mut map = Vec::with_capacity(n);
    for e in &a.universe {
        let target = m.get(e).ok_or_else(|| SemanticsError::MapNotTotal(e.clone()))?;
        let idx = b
            .elem_index(target)
            .ok_or_else(|| SemanticsError::TargetNotInUniverse(target.clone()))?;
        map.push(idx);
    }
    for (name, _) in a.sig.constants().map(|c| (c, ())) {
        if map[a.constants[name]] != b.constants[name] {
            return Ok(false);
        }
    }
    for (name, arity) in a.sig.functions() {
        for t in all_tuples(n, arity) {
            let image: Vec<usize> = t.iter().map(|&x| map[x]).collect();
            if map[a.apply_fn(name, &t)] != b.apply_fn(name, &image) {
                return Ok(false);
            }
        }
    }
    for (name, arity) in a.sig.relations() {
        for t in all_tuples(n, arity) {
            let image: Vec<usize> = t.iter().map(|&x| map[x]).collect();
            if a.holds_rel(name, &t) != b.holds_rel(name, &image) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A partial map A → B grown by closing under functions, used both by the
/// isomorphism search and by the atomic check of the Ehrenfeucht–Fraïssé
/// recursion. Invariant: injective and function-consistent on its domain.
#[derive(Clone)]
struct PartialMap<'s> {
    a: &'s FiniteStructure,
    b: &'s FiniteStructure,
    fwd: Vec<Option<usize>>,
    bwd: Vec<Option<usize>>,
}

impl<'s> PartialMap<'s> {
    fn new(a: &'s FiniteStructure, b: &'s FiniteStructure) -> Self {
        PartialMap {
            a,
            b,
            fwd: vec![None; a.universe.len()],
            bwd: vec![None; b.universe.len()],
        }
    }

    /// Record x ↦ y; false on a well-definedness or injectivity conflict.
    fn assign(&mut self, x: usize, y: usize) -> bool {
        match (self.fwd[x], self.bwd[y]) {
            (Some(y0), _) if y0 != y => false,
            (_, Some(x0)) if x0 != x => false,
            _ => {
                self.fwd[x] = Some(y);
                self.bwd[y] = Some(x);
                true
            }
        }
    }

    /// Close the domain under constants and functions, propagating forced
    /// images; false on conflict.
    fn propagate(&mut self) -> bool {
        for name in self.a.sig.constants().collect::<Vec<_>>() {
            if !self.assign(self.a.constants[name], self.b.constants[name]) {
                return false;
            }
        }
        loop {
            let domain: Vec<usize> =
                (0..self.fwd.len()).filter(|&x| self.fwd[x].is_some()).collect();
            let mut grew = false;
            for (name, arity) in self.a.sig.functions().collect::<Vec<_>>() {
                for t in all_tuples(domain.len(), arity) {
                    let args: Vec<usize> = t.iter().map(|&i| domain[i]).collect();
                    let image: Vec<usize> =
                        args.iter().map(|&x| self.fwd[x].unwrap()).collect();
                    let v = self.a.apply_fn(name, &args);
                    let w = self.b.apply_fn(name, &image);
                    if self.fwd[v].is_none() {
                        grew = true;
                    }
                    if !self.assign(v, w) {
                        return false;
                    }
                }
            }
            if !grew {
                return true;
            }
        }
    }

    /// Relations must hold iff on every tuple within the domain.
    fn relations_agree(&self) -> bool {
        let domain: Vec<usize> =
            (0..self.fwd.len()).filter(|&x| self.fwd[x].is_some()).collect();
        for (name, arity) in self.a.sig.relations() {
            for t in all_tuples(domain.len(), arity) {
                let args: Vec<usize> = t.iter().map(|&i| domain[i]).collect();
                let image: Vec<usize> = args.iter().map(|&x| self.fwd[x].unwrap()).collect();
                if self.a.holds_rel(name, &args) != self.b.holds_rel(name, &image) {
                    return false;
                }
            }
        }
        true
    }

    fn first_unassigned(&self) -> Option<usize> {
        (0..self.fwd.len()).find(|&x| self.fwd[x].is_none())
    }
}

/// Search for an isomorphism A ≅ B: a bijection that is a homomorphism with
/// the bidirectional relation clause (its inverse is then a homomorphism
/// too). Exact backtracking with propagation; intended for |universe| ≤ 12.
pub fn find_isomorphism(
    a: &FiniteStructure,
    b: &FiniteStructure,
) -> Option<BTreeMap<String, String>> {
    if a.sig != b.sig || a.universe.len() != b.universe.len() {
        return None;
    }
    let mut seed = PartialMap::new(a, b);
    if !seed.propagate() {
        return None;
    }
    let found = iso_search(seed)?;
    let mut out = BTreeMap::new();
    for (x, y) in found.iter().enumerate() {
        out.insert(a.universe[x].clone(), b.universe[y.unwrap()].clone());
    }
    Some(out)
}

fn iso_search(state: PartialMap<'_>) -> Option<Vec<Option<usize>>> {
    match state.first_unassigned() {
        None => {
            if state.relations_agree() {
                Some(state.fwd)
            } else {
                None
            }
        }
        Some(x) => {
            for y in 0..state.bwd.len() {
                if state.bwd[y].is_some() {
                    continue;
                }
                let mut next = state.clone();
                if next.assign(x, y) && next.propagate() {
                    if let Some(found) = iso_search(next) {
                        return Some(found);
                    }
                }
            }
            None
        }
    }
}

/// A is a substructure of B: same signature, universe included (by id),
/// constants equal, functions the restrictions of B's (which entails
/// closure), and relations the restrictions of B's.
pub fn is_substructure(a: &FiniteStructure, b: &FiniteStructure) -> bool {
    if a.sig != b.sig {
        return false;
    }
    let embed: Option<Vec<usize>> =
        a.universe.iter().map(|e| b.elem_index(e)).collect();
    let Some(embed) = embed else {
        return false;
    };
    for name in a.sig.constants().collect::<Vec<_>>() {
        if embed[a.constants[name]] != b.constants[name] {
            return false;
        }
    }
    let n = a.universe.len();
    for (name, arity) in a.sig.functions() {
        for t in all_tuples(n, arity) {
            let image: Vec<usize> = t.iter().map(|&x| embed[x]).collect();
            if embed[a.apply_fn(name, &t)] != b.apply_fn(name, &image) {
                return false;
            }
        }
    }
    for (name, arity) in a.sig.relations() {
        for t in all_tuples(n, arity) {
            let image: Vec<usize> = t.iter().map(|&x| embed[x]).collect();
            if a.holds_rel(name, &t) != b.holds_rel(name, &image) {
                return false;
            }
        }
    }
    true
}

/// The substructure of `b` generated by `seed`: close the seed and all
/// constants under the functions and restrict every table.
pub fn substructure_closure(
    b: &FiniteStructure,
    seed: &[&str],
) -> Result<FiniteStructure, SemanticsError> {
    let mut included = vec![false; b.universe.len()];
    for id in seed {
        let idx = b
            .elem_index(id)
            .ok_or_else(|| SemanticsError::UnknownElement(id.to_string()))?;
        included[idx] = true;
    }
    for (_, &v) in &b.constants {
        included[v] = true;
    }
    loop {
        let domain: Vec<usize> = (0..included.len()).filter(|&x| included[x]).collect();
        let mut grew = false;
        for (name, arity) in b.sig.functions() {
            for t in all_tuples(domain.len(), arity) {
                let args: Vec<usize> = t.iter().map(|&i| domain[i]).collect();
                let v = b.apply_fn(name, &args);
                if !included[v] {
                    included[v] = true;
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let kept: Vec<usize> = (0..included.len()).filter(|&x| included[x]).collect();
    let reindex: BTreeMap<usize, usize> =
        kept.iter().enumerate().map(|(new, &old)| (old, new)).collect();
    let universe: Vec<String> = kept.iter().map(|&x| b.universe[x].clone()).collect();
    FiniteStructure::from_interpretation(
        b.sig.clone(),
        universe,
        |name, args| {
            let orig: Vec<usize> = args.iter().map(|&i| kept[i]).collect();
            reindex[&b.apply_fn(name, &orig)]
        },
        |name, args| {
            let orig: Vec<usize> = args.iter().map(|&i| kept[i]).collect();
            b.holds_rel(name, &orig)
        },
        |name| reindex[&b.constants[name]],
    )
}

/// Bounded elementary equivalence: do A and B agree on every sentence of
/// quantifier rank ≤ d? Decided by the d-round Ehrenfeucht–Fraïssé game; at
/// rank 0 the pebbled tuples must induce a partial isomorphism between the
/// generated substructures.
pub fn elem_equiv_at_depth(a: &FiniteStructure, b: &FiniteStructure, d: usize) -> bool {
    if a.sig != b.sig {
        return false;
    }
    ef_agree(a, b, &mut Vec::new(), &mut Vec::new(), d)
}

fn ef_agree(
    a: &FiniteStructure,
    b: &FiniteStructure,
    xs: &mut Vec<usize>,
    ys: &mut Vec<usize>,
    d: usize,
) -> bool {
    if d == 0 {
        let mut m = PartialMap::new(a, b);
        for (&x, &y) in xs.iter().zip(ys.iter()) {
            if !m.assign(x, y) {
                return false;
            }
        }
        return m.propagate() && m.relations_agree();
    }
    // Spoiler plays in A, Duplicator answers in B …
    for x in 0..a.universe.len() {
        let mut answered = false;
        for y in 0..b.universe.len() {
            xs.push(x);
            ys.push(y);
            let ok = ef_agree(a, b, xs, ys, d - 1);
            xs.pop();
            ys.pop();
            if ok {
                answered = true;
                break;
            }
        }
        if !answered {
            return false;
        }
    }
    // … and symmetrically with the boards swapped.
    for y in 0..b.universe.len() {
        let mut answered = false;
        for x in 0..a.universe.len() {
            xs.push(x);
            ys.push(y);
            let ok = ef_agree(a, b, xs, ys, d - 1);
            xs.pop();
            ys.pop();
            if ok {
                answered = true;
                break;
            }
        }
        if !answered {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Structure files
// ---------------------------------------------------------------------------

/// Nested function table: depth equals the arity, leaves are element ids.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Table {
    Leaf(String),
    Node(Vec<Table>),
}

#[derive(Debug, Deserialize)]
struct StructureFile {
    universe: Vec<String>,
    #[serde(default)]
    functions: BTreeMap<String, Table>,
    #[serde(default)]
    relations: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default)]
    constants: BTreeMap<String, String>,
}

fn table_depth(t: &Table, symbol: &str) -> Result<usize, SemanticsError> {
    match t {
        Table::Leaf(_) => Ok(0),
        Table::Node(rows) => {
            let first = rows.first().ok_or_else(|| SemanticsError::TableShape {
                symbol: symbol.to_string(),
                detail: "empty table level".into(),
            })?;
            Ok(1 + table_depth(first, symbol)?)
        }
    }
}

impl StructureFile {
    fn into_structure(
        self,
        sig: Option<&Signature>,
    ) -> Result<FiniteStructure, SemanticsError> {
        if self.universe.is_empty() {
            return Err(SemanticsError::EmptyUniverse);
        }
        let mut index = BTreeMap::new();
        for (i, e) in self.universe.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(SemanticsError::DuplicateElement(e.clone()));
            }
        }
        let sig = match sig {
            Some(s) => {
                // Interpretations must cover the signature exactly.
                for (name, _) in s.functions() {
                    if !self.functions.contains_key(name) {
                        return Err(SemanticsError::MissingInterpretation(name.to_string()));
                    }
                }
                for (name, _) in s.relations() {
                    if !self.relations.contains_key(name) {
                        return Err(SemanticsError::MissingInterpretation(name.to_string()));
                    }
                }
                for name in s.constants() {
                    if !self.constants.contains_key(name) {
                        return Err(SemanticsError::MissingInterpretation(name.to_string()));
                    }
                }
                for name in self.functions.keys() {
                    if s.function_arity(name).is_none() {
                        return Err(SemanticsError::UndeclaredSymbol(name.clone()));
                    }
                }
                for name in self.relations.keys() {
                    if s.relation_arity(name).is_none() {
                        return Err(SemanticsError::UndeclaredSymbol(name.clone()));
                    }
                }
                for name in self.constants.keys() {
                    if !s.has_constant(name) {
                        return Err(SemanticsError::UndeclaredSymbol(name.clone()));
                    }
                }
                s.clone()
            }
            None => {
                let mut fns = Vec::new();
                for (name, table) in &self.functions {
                    let arity = table_depth(table, name)?;
                    if arity == 0 {
                        return Err(SemanticsError::TableShape {
                            symbol: name.clone(),
                            detail: "a bare element is a constant, not a function table".into(),
                        });
                    }
                    fns.push((name.clone(), arity));
                }
                let mut rels = Vec::new();
                for (name, tuples) in &self.relations {
                    let first = tuples.first().ok_or_else(|| {
                        SemanticsError::Inference(format!(
                            "relation `{name}` is empty; its arity needs an explicit signature"
                        ))
                    })?;
                    if first.is_empty() {
                        return Err(SemanticsError::TableShape {
                            symbol: name.clone(),
                            detail: "empty tuple".into(),
                        });
                    }
                    rels.push((name.clone(), first.len()));
                }
                let consts: Vec<String> = self.constants.keys().cloned().collect();
                Signature::new(fns, rels, consts)
                    .map_err(|e| SemanticsError::Inference(e.to_string()))?
            }
        };
        let n = self.universe.len();
        let mut functions = BTreeMap::new();
        for (name, arity) in sig.functions() {
            let table = &self.functions[name];
            let mut flat = Vec::with_capacity(n.pow(arity as u32));
            flatten_table(table, arity, n, &index, name, &mut flat)?;
            functions.insert(name.to_string(), flat);
        }
        let mut relations = BTreeMap::new();
        for (name, arity) in sig.relations() {
            let mut set = BTreeSet::new();
            for tuple in &self.relations[name] {
                if tuple.len() != arity {
                    return Err(SemanticsError::TableShape {
                        symbol: name.to_string(),
                        detail: format!(
                            "tuple of length {} in a relation of arity {arity}",
                            tuple.len()
                        ),
                    });
                }
                let idx_tuple: Result<Vec<usize>, _> = tuple
                    .iter()
                    .map(|e| {
                        index
                            .get(e)
                            .copied()
                            .ok_or_else(|| SemanticsError::UnknownElement(e.clone()))
                    })
                    .collect();
                set.insert(idx_tuple?);
            }
            relations.insert(name.to_string(), set);
        }
        let mut constants = BTreeMap::new();
        for name in sig.constants() {
            let target = &self.constants[name];
            let idx = index
                .get(target)
                .copied()
                .ok_or_else(|| SemanticsError::UnknownElement(target.clone()))?;
            constants.insert(name.to_string(), idx);
        }
        Ok(FiniteStructure {
            sig,
            universe: self.universe,
            index,
            functions,
            relations,
            constants,
        })
    }
}

fn flatten_table(
    t: &Table,
    arity: usize,
    n: usize,
    index: &BTreeMap<String, usize>,
    symbol: &str,
    out: &mut Vec<usize>,
) -> Result<(), SemanticsError> {
    match (t, arity) {
        (Table::Leaf(id), 0) => {
            let idx = index
                .get(id)
                .copied()
                .ok_or_else(|| SemanticsError::UnknownElement(id.clone()))?;
            out.push(idx);
            Ok(())
        }
        (Table::Node(rows), a) if a > 0 => {
            if rows.len() != n {
                return Err(SemanticsError::TableShape {
                    symbol: symbol.to_string(),
                    detail: format!("level has {} entries, expected {n}", rows.len()),
                });
            }
            for row in rows {
                flatten_table(row, a - 1, n, index, symbol, out)?;
            }
            Ok(())
        }
        _ => Err(SemanticsError::TableShape {
            symbol: symbol.to_string(),
            detail: "nesting depth does not match the arity".into(),
        }),
    }
}
