//! Quantifier elimination for algebraically closed fields.
//!
//! Ring-language formulas are normalized to polynomial atoms `p = 0` /
//! `p ≠ 0` with exact rational (integer after normalization) coefficients,
//! then quantifiers are eliminated innermost-first by leading-coefficient
//! case analysis with pseudo-remainder and resultant reductions. The output
//! is a [`ConstructibleForm`]: a disjunction of conjunctions of atoms.
//!
//! Nonzero integer-constant atoms (`2 = 0`, `3 ≠ 0`) are *characteristic
//! atoms*: they are kept unevaluated so that a single elimination can be
//! reused for every characteristic. [`decide`] evaluates them at a given
//! characteristic; [`char_spectrum`] folds them into a [`CharCondition`]
//! describing truth across all characteristics at once.

mod eliminate;
mod spectrum;

pub use spectrum::{CharCondition, PrimeMode};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero as NumZero};
use thiserror::Error;

use crate::poly::{Coef, CoefField, MultiPoly, PolyError};
use crate::syntax::{Formula, SyntaxError, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QeError {
    #[error("symbol `{0}` is not part of the ring language")]
    NonRingSymbol(String),
    #[error("expected a quantifier-free formula")]
    NotQuantifierFree,
    #[error("formula is not a sentence (free variables: {0})")]
    NotASentence(String),
    #[error("computation budget of {0} steps exhausted")]
    BudgetExhausted(u64),
    #[error("characteristic must be 0 or a prime, got {0}")]
    InvalidCharacteristic(u64),
    #[error("cannot factor the integer {0}: outside supported range")]
    FactorOutOfRange(String),
    #[error("internal error: non-constant atom `{0}` survived sentence elimination")]
    NonConstantResidue(String),
    #[error("coefficient {0} is too large to render as a term")]
    CoefficientOutOfRange(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

/// The characteristic of an algebraically closed field: zero or a prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Characteristic {
    Zero,
    Prime(u64),
}

impl Characteristic {
    /// Validate a raw number: 0 or a prime.
    pub fn new(c: u64) -> Result<Characteristic, QeError> {
        if c == 0 {
            Ok(Characteristic::Zero)
        } else if crate::poly::is_prime(c) {
            Ok(Characteristic::Prime(c))
        } else {
            Err(QeError::InvalidCharacteristic(c))
        }
    }
}

impl fmt::Display for Characteristic {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Characteristic::Zero => write!(out, "0"),
            Characteristic::Prime(p) => write!(out, "{p}"),
        }
    }
}

/// A step counter shared across one elimination run; exceeding the limit
/// aborts with a resource error instead of running away.
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: AtomicU64,
}

impl Budget {
    pub fn new(limit: u64) -> Budget {
        Budget { limit, used: AtomicU64::new(0) }
    }

    pub fn tick(&self, n: u64) -> Result<(), QeError> {
        let total = self.used.fetch_add(n, Ordering::Relaxed).saturating_add(n);
        if total > self.limit {
            Err(QeError::BudgetExhausted(self.limit))
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }
}

/// Default step budget for the convenience entry points.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

// ---------------------------------------------------------------------------
// Atoms
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Zero,
    NonZero,
}

/// A polynomial atom `p = 0` or `p ≠ 0` in canonical form: integer
/// coefficients, positive leading (lexicographic) coefficient, and — for
/// inequations — integer content 1 unless the polynomial is constant.
/// Constant atoms (|n| ≥ 2) are characteristic atoms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    poly: MultiPoly,
    sign: Sign,
}

/// The result of normalizing a prospective atom: it may fold to a truth
/// value or split into a conjunction of canonical atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormalizedAtom {
    True,
    False,
    Conj(Vec<Atom>),
}

impl Atom {
    /// Normalize `poly (sign) 0` over ℚ.
    ///
    /// - The zero polynomial folds to a truth value.
    /// - Denominators are cleared and the sign fixed by multiplying with a
    ///   nonzero rational / with −1 — units in every characteristic, so the
    ///   atom's meaning is preserved for each interpretation in which it is
    ///   defined.
    /// - Constants fold when |n| = 1 and otherwise stay as characteristic
    ///   atoms.
    /// - An inequation `c·g ≠ 0` with integer content c ≥ 2 splits into
    ///   `c ≠ 0 ∧ g ≠ 0`. Equations keep their content: `2x = 0` is not
    ///   equivalent to `x = 0` in characteristic 2.
    pub fn normalize(poly: MultiPoly, sign: Sign) -> Result<NormalizedAtom, QeError> {
        if poly.field() != CoefField::Rationals {
            return Err(QeError::Poly(PolyError::FieldMismatch(
                CoefField::Rationals,
                poly.field(),
            )));
        }
        if poly.is_zero() {
            return Ok(match sign {
                Sign::Zero => NormalizedAtom::True,
                Sign::NonZero => NormalizedAtom::False,
            });
        }
        let mut p = poly.clear_denominators();
        let lead_negative = match p.leading_coef() {
            Some(Coef::Rat(r)) => r.is_negative(),
            _ => false,
        };
        if lead_negative {
            p = p.scale(&Coef::Rat(BigRational::from_integer((-1).into())));
        }
        if let Some(c) = p.as_constant() {
            let n = c
                .as_rational()
                .expect("rational field")
                .numer()
                .clone();
            if n.is_one() {
                return Ok(match sign {
                    Sign::Zero => NormalizedAtom::False,
                    Sign::NonZero => NormalizedAtom::True,
                });
            }
            return Ok(NormalizedAtom::Conj(vec![Atom { poly: p, sign }]));
        }
        match sign {
            Sign::Zero => Ok(NormalizedAtom::Conj(vec![Atom { poly: p, sign }])),
            Sign::NonZero => {
                let content = p.integer_content().expect("integer coefficients");
                if content > BigInt::one() {
                    let inv = BigRational::new(BigInt::one(), content.clone());
                    let g = p.scale(&Coef::Rat(inv));
                    let c = MultiPoly::from_rational(BigRational::from_integer(content));
                    Ok(NormalizedAtom::Conj(vec![
                        Atom { poly: c, sign: Sign::NonZero },
                        Atom { poly: g, sign: Sign::NonZero },
                    ]))
                } else {
                    Ok(NormalizedAtom::Conj(vec![Atom { poly: p, sign }]))
                }
            }
        }
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// The negation as a conjunction of canonical atoms (an inequation may
    /// content-split).
    pub fn negated(&self) -> Vec<Atom> {
        let flipped = match self.sign {
            Sign::Zero => Sign::NonZero,
            Sign::NonZero => Sign::Zero,
        };
        match Atom::normalize(self.poly.clone(), flipped).expect("atom invariant") {
            NormalizedAtom::Conj(v) => v,
            // The stored polynomial is nonzero and never ±1.
            other => unreachable!("negation of a canonical atom folded to {other:?}"),
        }
    }

    /// For a characteristic atom, its positive integer constant.
    pub fn constant_value(&self) -> Option<BigInt> {
        self.poly.as_constant().map(|c| c.as_rational().expect("rational").numer().clone())
    }

    /// Truth value at a characteristic — `Some` only for constant atoms.
    pub fn holds_at(&self, ch: Characteristic) -> Option<bool> {
        let n = self.constant_value()?;
        let vanishes = match ch {
            Characteristic::Zero => false,
            Characteristic::Prime(p) => (&n % BigInt::from(p)).is_zero(),
        };
        Some(match self.sign {
            Sign::Zero => vanishes,
            Sign::NonZero => !vanishes,
        })
    }

    /// Truth at a point over 𝔽_p (all variables assigned).
    pub fn eval_mod(
        &self,
        assign: &BTreeMap<String, u64>,
        p: u64,
    ) -> Result<bool, QeError> {
        let value = self.poly.reduce_mod_p(p)?.eval_fp(assign)?;
        Ok(match self.sign {
            Sign::Zero => value == 0,
            Sign::NonZero => value != 0,
        })
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Zero => write!(out, "{} = 0", self.poly),
            Sign::NonZero => write!(out, "{} != 0", self.poly),
        }
    }
}

// ---------------------------------------------------------------------------
// Constructible forms (disjunctive normal form over atoms)
// ---------------------------------------------------------------------------

/// A quantifier-free ring formula in disjunctive normal form: a disjunction
/// of conjunctions of atoms. No disjuncts means FALSE; one empty conjunction
/// means TRUE.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructibleForm {
    disjuncts: Vec<Vec<Atom>>,
}

impl ConstructibleForm {
    pub fn true_form() -> Self {
        ConstructibleForm { disjuncts: vec![Vec::new()] }
    }

    pub fn false_form() -> Self {
        ConstructibleForm { disjuncts: Vec::new() }
    }

    /// Build from raw disjuncts and normalize.
    pub fn from_disjuncts(disjuncts: Vec<Vec<Atom>>) -> Self {
        ConstructibleForm { disjuncts }.normalized()
    }

    pub fn is_true(&self) -> bool {
        self.disjuncts.iter().any(|c| c.is_empty())
    }

    pub fn is_false(&self) -> bool {
        self.disjuncts.is_empty()
    }

    pub fn disjuncts(&self) -> &[Vec<Atom>] {
        &self.disjuncts
    }

    /// Variables appearing in any atom.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for conj in &self.disjuncts {
            for atom in conj {
                out.extend(atom.poly().vars().iter().cloned());
            }
        }
        out
    }

    /// The universal simplifications: deduplicate atoms, drop conjunctions
    /// containing `p = 0 ∧ p ≠ 0`, remove subsumed disjuncts, and sort
    /// canonically. Characteristic atoms are left alone.
    pub fn simplify(&self) -> Self {
        self.clone().normalized()
    }

    fn normalized(mut self) -> Self {
        let mut cleaned: Vec<Vec<Atom>> = Vec::with_capacity(self.disjuncts.len());
        'conj: for mut conj in self.disjuncts.drain(..) {
            conj.sort();
            conj.dedup();
            for pair in conj.windows(2) {
                if pair[0].poly() == pair[1].poly() && pair[0].sign() != pair[1].sign() {
                    continue 'conj;
                }
            }
            if conj.is_empty() {
                return ConstructibleForm::true_form();
            }
            cleaned.push(conj);
        }
        cleaned.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        cleaned.dedup();
        // Subsumption: a conjunction implied by a weaker one is redundant.
        let mut kept: Vec<Vec<Atom>> = Vec::with_capacity(cleaned.len());
        'outer: for conj in cleaned {
            for prior in &kept {
                if subset(prior, &conj) {
                    continue 'outer;
                }
            }
            kept.push(conj);
        }
        ConstructibleForm { disjuncts: kept }
    }

    /// Disjunction.
    pub fn or(&self, other: &Self) -> Self {
        let mut disjuncts = self.disjuncts.clone();
        disjuncts.extend(other.disjuncts.iter().cloned());
        ConstructibleForm { disjuncts }.normalized()
    }

    /// Conjunction by distribution.
    pub fn and(&self, other: &Self, budget: &Budget) -> Result<Self, QeError> {
        budget.tick((self.disjuncts.len() as u64 + 1) * (other.disjuncts.len() as u64 + 1))?;
        let mut disjuncts = Vec::with_capacity(self.disjuncts.len() * other.disjuncts.len());
        for a in &self.disjuncts {
            for b in &other.disjuncts {
                let mut conj = a.clone();
                conj.extend(b.iter().cloned());
                disjuncts.push(conj);
            }
        }
        Ok(ConstructibleForm { disjuncts }.normalized())
    }

    /// Negation by De Morgan and redistribution, simplifying between steps.
    pub fn not(&self, budget: &Budget) -> Result<Self, QeError> {
        let mut acc = ConstructibleForm::true_form();
        for conj in &self.disjuncts {
            let negated: Vec<Vec<Atom>> = conj.iter().map(|a| a.negated()).collect();
            let clause = ConstructibleForm { disjuncts: negated }.normalized();
            acc = acc.and(&clause, budget)?;
        }
        Ok(acc)
    }

    /// Fold the characteristic atoms at a concrete characteristic; atoms
    /// with variables are untouched.
    pub fn specialize(&self, ch: Characteristic) -> Self {
        let mut disjuncts = Vec::new();
        'conj: for conj in &self.disjuncts {
            let mut kept = Vec::new();
            for atom in conj {
                match atom.holds_at(ch) {
                    Some(true) => {}
                    Some(false) => continue 'conj,
                    None => kept.push(atom.clone()),
                }
            }
            disjuncts.push(kept);
        }
        ConstructibleForm { disjuncts }.normalized()
    }

    /// Truth value of a variable-free form at a characteristic.
    pub fn decide_at(&self, ch: Characteristic) -> Result<bool, QeError> {
        'conj: for conj in &self.disjuncts {
            for atom in conj {
                match atom.holds_at(ch) {
                    Some(true) => {}
                    Some(false) => continue 'conj,
                    None => return Err(QeError::NonConstantResidue(atom.to_string())),
                }
            }
            return Ok(true);
        }
        Ok(false)
    }

    /// Truth at a point over 𝔽_p: all variables assigned.
    pub fn eval_mod(
        &self,
        assign: &BTreeMap<String, u64>,
        p: u64,
    ) -> Result<bool, QeError> {
        'conj: for conj in &self.disjuncts {
            for atom in conj {
                if !atom.eval_mod(assign, p)? {
                    continue 'conj;
                }
            }
            return Ok(true);
        }
        Ok(false)
    }
}

fn subset(small: &[Atom], big: &[Atom]) -> bool {
    // Both sorted and deduplicated.
    let mut i = 0;
    for b in big {
        if i == small.len() {
            return true;
        }
        if &small[i] == b {
            i += 1;
        }
    }
    i == small.len()
}

impl fmt::Display for ConstructibleForm {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_false() {
            return write!(out, "1 = 0");
        }
        if self.is_true() {
            return write!(out, "0 = 0");
        }
        for (i, conj) in self.disjuncts.iter().enumerate() {
            if i > 0 {
                write!(out, " | ")?;
            }
            write!(out, "(")?;
            for (j, atom) in conj.iter().enumerate() {
                if j > 0 {
                    write!(out, " & ")?;
                }
                write!(out, "{atom}")?;
            }
            write!(out, ")")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Polynomial-atom formulas
// ---------------------------------------------------------------------------

/// A formula whose leaves are polynomial atoms (plus folded truth values),
/// with the connective and quantifier skeleton preserved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyFormula {
    True,
    False,
    Atom(Atom),
    Not(Box<PolyFormula>),
    And(Box<PolyFormula>, Box<PolyFormula>),
    Or(Box<PolyFormula>, Box<PolyFormula>),
    Implies(Box<PolyFormula>, Box<PolyFormula>),
    Exists(String, Box<PolyFormula>),
    Forall(String, Box<PolyFormula>),
}

impl PolyFormula {
    pub fn not(f: PolyFormula) -> PolyFormula {
        PolyFormula::Not(Box::new(f))
    }

    pub fn and(a: PolyFormula, b: PolyFormula) -> PolyFormula {
        PolyFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: PolyFormula, b: PolyFormula) -> PolyFormula {
        PolyFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: PolyFormula, b: PolyFormula) -> PolyFormula {
        PolyFormula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(v: &str, f: PolyFormula) -> PolyFormula {
        PolyFormula::Exists(v.to_string(), Box::new(f))
    }

    pub fn forall(v: &str, f: PolyFormula) -> PolyFormula {
        PolyFormula::Forall(v.to_string(), Box::new(f))
    }

    /// Lift a normalization result into a formula (a conjunction when the
    /// atom split).
    pub fn from_normalized(n: NormalizedAtom) -> PolyFormula {
        match n {
            NormalizedAtom::True => PolyFormula::True,
            NormalizedAtom::False => PolyFormula::False,
            NormalizedAtom::Conj(atoms) => {
                let mut it = atoms.into_iter();
                let first = PolyFormula::Atom(it.next().expect("nonempty conjunction"));
                it.fold(first, |acc, a| PolyFormula::and(acc, PolyFormula::Atom(a)))
            }
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            PolyFormula::True | PolyFormula::False | PolyFormula::Atom(_) => true,
            PolyFormula::Not(g) => g.is_quantifier_free(),
            PolyFormula::And(a, b) | PolyFormula::Or(a, b) | PolyFormula::Implies(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            PolyFormula::Exists(_, _) | PolyFormula::Forall(_, _) => false,
        }
    }
}

/// Convert a ring term to an exact polynomial over ℚ.
pub fn term_to_poly(t: &Term) -> Result<MultiPoly, QeError> {
    let field = CoefField::Rationals;
    match t {
        Term::Var(v) => Ok(MultiPoly::var(field, v)),
        Term::Const(c) => match c.as_str() {
            "0" => Ok(MultiPoly::zero(field)),
            "1" => Ok(MultiPoly::one(field)),
            other => Err(QeError::NonRingSymbol(other.to_string())),
        },
        Term::Apply(op, args) => {
            if args.len() != 2 {
                return Err(QeError::NonRingSymbol(op.clone()));
            }
            let a = term_to_poly(&args[0])?;
            let b = term_to_poly(&args[1])?;
            match op.as_str() {
                "+" => Ok(a.add(&b)?),
                "-" => Ok(a.sub(&b)?),
                "*" => Ok(a.mul(&b)?),
                other => Err(QeError::NonRingSymbol(other.to_string())),
            }
        }
    }
}

/// Render an integer polynomial back as a ring term (inverse of
/// [`term_to_poly`] up to ring identities).
pub fn poly_to_term(p: &MultiPoly) -> Result<Term, QeError> {
    if p.field() != CoefField::Rationals {
        return Err(QeError::Poly(PolyError::FieldMismatch(CoefField::Rationals, p.field())));
    }
    let p = p.clear_denominators();
    if p.is_zero() {
        return Ok(Term::Const("0".into()));
    }
    let vars: Vec<String> = p.vars().to_vec();
    // Descending by total degree then by exponent vector, like Display.
    let mut entries: Vec<(Vec<u32>, BigInt)> = p
        .terms()
        .map(|(e, c)| (e.clone(), c.as_rational().expect("rational").numer().clone()))
        .collect();
    entries.sort_by(|a, b| {
        let ta: u32 = a.0.iter().sum();
        let tb: u32 = b.0.iter().sum();
        tb.cmp(&ta).then_with(|| b.0.cmp(&a.0))
    });
    let mut acc: Option<Term> = None;
    for (exps, coef) in entries {
        let magnitude = coef.magnitude();
        let m_u64: u64 = magnitude
            .try_into()
            .map_err(|_| QeError::CoefficientOutOfRange(coef.to_string()))?;
        if m_u64 > crate::syntax::MAX_LITERAL {
            return Err(QeError::CoefficientOutOfRange(coef.to_string()));
        }
        let mut factor: Option<Term> = if m_u64 != 1 || exps.iter().all(|&e| e == 0) {
            Some(int_literal(m_u64))
        } else {
            None
        };
        for (i, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                let v = Term::var(&vars[i]);
                factor = Some(match factor {
                    None => v,
                    Some(f) => Term::Apply("*".into(), vec![f, v]),
                });
            }
        }
        let mono = factor.expect("nonzero monomial");
        acc = Some(match acc {
            None => {
                if coef.is_negative() {
                    Term::Apply("-".into(), vec![Term::Const("0".into()), mono])
                } else {
                    mono
                }
            }
            Some(t) => {
                let op = if coef.is_negative() { "-" } else { "+" };
                Term::Apply(op.into(), vec![t, mono])
            }
        });
    }
    Ok(acc.expect("nonzero polynomial"))
}

fn int_literal(n: u64) -> Term {
    if n == 0 {
        return Term::Const("0".into());
    }
    let one = Term::Const("1".into());
    let mut t = one.clone();
    for _ in 1..n {
        t = Term::Apply("+".into(), vec![t, one.clone()]);
    }
    t
}

/// Parse a polynomial written as a ring term (e.g. `x^2 - 3*x*y + 2`).
pub fn parse_poly(src: &str) -> Result<MultiPoly, QeError> {
    let term = crate::syntax::parse_term(src, &crate::syntax::Signature::ring())?;
    term_to_poly(&term)
}

/// Replace every atomic subformula t₁ = t₂ by the polynomial atom
/// (t₁ − t₂, Zero), preserving the connective/quantifier skeleton.
pub fn to_polynomial_atoms(f: &Formula) -> Result<PolyFormula, QeError> {
    match f {
        Formula::Eq(a, b) => {
            let p = term_to_poly(a)?.sub(&term_to_poly(b)?)?;
            Ok(PolyFormula::from_normalized(Atom::normalize(p, Sign::Zero)?))
        }
        Formula::Rel(r, _) => Err(QeError::NonRingSymbol(r.clone())),
        Formula::Not(g) => Ok(PolyFormula::not(to_polynomial_atoms(g)?)),
        Formula::And(a, b) => {
            Ok(PolyFormula::and(to_polynomial_atoms(a)?, to_polynomial_atoms(b)?))
        }
        Formula::Or(a, b) => {
            Ok(PolyFormula::or(to_polynomial_atoms(a)?, to_polynomial_atoms(b)?))
        }
        Formula::Implies(a, b) => {
            Ok(PolyFormula::implies(to_polynomial_atoms(a)?, to_polynomial_atoms(b)?))
        }
        Formula::Exists(v, g) => Ok(PolyFormula::Exists(v.clone(), Box::new(to_polynomial_atoms(g)?))),
        Formula::Forall(v, g) => Ok(PolyFormula::Forall(v.clone(), Box::new(to_polynomial_atoms(g)?))),
    }
}

/// Disjunctive normal form of a quantifier-free polynomial formula.
pub fn to_dnf(f: &PolyFormula) -> Result<ConstructibleForm, QeError> {
    let budget = Budget::new(DEFAULT_BUDGET);
    to_dnf_with(f, &budget)
}

pub(crate) fn to_dnf_with(
    f: &PolyFormula,
    budget: &Budget,
) -> Result<ConstructibleForm, QeError> {
    if !f.is_quantifier_free() {
        return Err(QeError::NotQuantifierFree);
    }
    dnf_rec(f, false, budget)
}

fn dnf_rec(f: &PolyFormula, negated: bool, budget: &Budget) -> Result<ConstructibleForm, QeError> {
    budget.tick(1)?;
    Ok(match (f, negated) {
        (PolyFormula::True, false) | (PolyFormula::False, true) => ConstructibleForm::true_form(),
        (PolyFormula::True, true) | (PolyFormula::False, false) => ConstructibleForm::false_form(),
        (PolyFormula::Atom(a), false) => ConstructibleForm::from_disjuncts(vec![vec![a.clone()]]),
        (PolyFormula::Atom(a), true) => ConstructibleForm::from_disjuncts(vec![a.negated()]),
        (PolyFormula::Not(g), _) => dnf_rec(g, !negated, budget)?,
        (PolyFormula::And(a, b), false) | (PolyFormula::Or(a, b), true) => {
            dnf_rec(a, negated, budget)?.and(&dnf_rec(b, negated, budget)?, budget)?
        }
        (PolyFormula::And(a, b), true) | (PolyFormula::Or(a, b), false) => {
            dnf_rec(a, negated, budget)?.or(&dnf_rec(b, negated, budget)?)
        }
        (PolyFormula::Implies(a, b), false) => {
            dnf_rec(a, true, budget)?.or(&dnf_rec(b, false, budget)?)
        }
        (PolyFormula::Implies(a, b), true) => {
            dnf_rec(a, false, budget)?.and(&dnf_rec(b, true, budget)?, budget)?
        }
        (PolyFormula::Exists(_, _), _) | (PolyFormula::Forall(_, _), _) => {
            return Err(QeError::NotQuantifierFree)
        }
    })
}

// ---------------------------------------------------------------------------
// Engine and public entry points
// ---------------------------------------------------------------------------

/// Quantifier-elimination engine: a step budget plus an opt-in parallelism
/// flag (disjuncts of an existential block are eliminated independently).
/// Output is deterministic regardless of execution order.
#[derive(Debug, Clone)]
pub struct QeEngine {
    budget: u64,
    parallel: bool,
}

impl Default for QeEngine {
    fn default() -> Self {
        QeEngine { budget: DEFAULT_BUDGET, parallel: false }
    }
}

impl QeEngine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_budget(mut self, limit: u64) -> Self {
        self.budget = limit;
        self
    }

    pub fn with_parallelism(mut self, on: bool) -> Self {
        self.parallel = on;
        self
    }

    /// Eliminate every quantifier of a ring formula, innermost first.
    /// Universal quantifiers are processed as ¬∃¬.
    pub fn eliminate(&self, f: &Formula) -> Result<ConstructibleForm, QeError> {
        let pf = to_polynomial_atoms(f)?;
        self.eliminate_atoms(&pf)
    }

    /// Eliminate quantifiers from a formula already expressed over
    /// polynomial atoms.
    pub fn eliminate_atoms(&self, f: &PolyFormula) -> Result<ConstructibleForm, QeError> {
        let budget = Budget::new(self.budget);
        eliminate::eliminate_pf(f, &budget, self.parallel)
    }

    /// Decide a sentence in the theory of algebraically closed fields of the
    /// given characteristic.
    pub fn decide(&self, s: &Formula, ch: Characteristic) -> Result<bool, QeError> {
        check_sentence(s)?;
        let cf = self.eliminate(s)?;
        cf.decide_at(ch)
    }

    /// One generic elimination, folded into the full characteristic
    /// spectrum of a sentence.
    pub fn char_spectrum(&self, s: &Formula) -> Result<CharCondition, QeError> {
        check_sentence(s)?;
        let cf = self.eliminate(s)?;
        spectrum::spectrum_of(&cf)
    }
}

fn check_sentence(s: &Formula) -> Result<(), QeError> {
    let fv = s.free_vars();
    if fv.is_empty() {
        Ok(())
    } else {
        Err(QeError::NotASentence(fv.into_iter().collect::<Vec<_>>().join(", ")))
    }
}

/// Eliminate ∃var over a conjunction of atoms with the default engine.
/// Atoms not involving `var` pass through unchanged.
pub fn eliminate_exists_one_var(
    conj: &[Atom],
    var: &str,
) -> Result<ConstructibleForm, QeError> {
    let budget = Budget::new(DEFAULT_BUDGET);
    eliminate::exists_conj(conj, var, &budget)
}

/// Eliminate all quantifiers with the default engine.
pub fn eliminate_all(f: &Formula) -> Result<ConstructibleForm, QeError> {
    QeEngine::default().eliminate(f)
}

/// Decide a sentence with the default engine.
pub fn decide(s: &Formula, ch: Characteristic) -> Result<bool, QeError> {
    QeEngine::default().decide(s, ch)
}

/// Characteristic spectrum of a sentence with the default engine.
pub fn char_spectrum(s: &Formula) -> Result<CharCondition, QeError> {
    QeEngine::default().char_spectrum(s)
}
