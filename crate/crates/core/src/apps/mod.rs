//! Applications of the decision procedure: Hilbert-style solvability of
//! polynomial systems, characteristic-transfer reporting with an
//! independent finite-field oracle, irreducibility across characteristics,
//! and strong-minimality analysis of one-variable constructible sets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::poly::{CoefField, ExtElem, ExtField, MultiPoly, PolyError};
use crate::qe::{
    to_polynomial_atoms, Atom, CharCondition, Characteristic, ConstructibleForm, PolyFormula,
    QeEngine, QeError, Sign,
};
use crate::syntax::{Formula, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AppsError {
    #[error("polynomial system must contain at least one generator")]
    EmptySystem,
    #[error("expected rational coefficients")]
    NotRational,
    #[error("constructible form mentions more than one variable: {0}")]
    NotOneVariable(String),
    #[error("irreducibility analysis needs total degree at least 2, got {0}")]
    DegreeTooSmall(usize),
    #[error(
        "irreducibility guardrail exceeded: supported up to total degree 3 \
         in at most 2 variables, got degree {degree} in {nvars} variables"
    )]
    GuardrailExceeded { degree: usize, nvars: usize },
    #[error("formula is not a sentence (free variables: {0})")]
    NotASentence(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error(
        "internal error: elimination and the finite-field oracle disagree at \
         p = {prime} (elimination says {by_elimination}, oracle says {by_oracle})"
    )]
    OracleMismatch { prime: u64, by_elimination: bool, by_oracle: bool },
    #[error("line {line}: {source}")]
    PolyLine {
        line: usize,
        #[source]
        source: QeError,
    },
    #[error(transparent)]
    Qe(#[from] QeError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

// ---------------------------------------------------------------------------
// Polynomial systems and Nullstellensatz-style solvability
// ---------------------------------------------------------------------------

/// A finite generating set f₁,…,f_k over ℚ together with the variables they
/// mention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySystem {
    generators: Vec<MultiPoly>,
    vars: Vec<String>,
}

impl PolySystem {
    pub fn new(generators: Vec<MultiPoly>) -> Result<Self, AppsError> {
        if generators.is_empty() {
            return Err(AppsError::EmptySystem);
        }
        let mut vars: BTreeSet<String> = BTreeSet::new();
        for g in &generators {
            if g.field() != CoefField::Rationals {
                return Err(AppsError::NotRational);
            }
            vars.extend(g.vars().iter().cloned());
        }
        Ok(PolySystem { generators, vars: vars.into_iter().collect() })
    }

    /// Parse the plain-text format: one polynomial per line, written in the
    /// ring language; `#` starts a comment; blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self, AppsError> {
        let mut generators = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(cut) => &raw[..cut],
                None => raw,
            };
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let poly = crate::qe::parse_poly(line)
                .map_err(|source| AppsError::PolyLine { line: idx + 1, source })?;
            generators.push(poly);
        }
        Self::new(generators)
    }

    pub fn generators(&self) -> &[MultiPoly] {
        &self.generators
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// The solvability sentence ∃x̄ ⋀ᵢ fᵢ = 0 over polynomial atoms.
    pub fn solvability_formula(&self) -> Result<PolyFormula, QeError> {
        let mut matrix = PolyFormula::True;
        for g in &self.generators {
            let atom = PolyFormula::from_normalized(Atom::normalize(g.clone(), Sign::Zero)?);
            matrix = if matrix == PolyFormula::True { atom } else { PolyFormula::and(matrix, atom) };
        }
        let mut f = matrix;
        for v in self.vars.iter().rev() {
            f = PolyFormula::Exists(v.clone(), Box::new(f));
        }
        Ok(f)
    }
}

/// Do the generators share a zero in the algebraic closure of the prime
/// field of the given characteristic?
pub fn nullstellensatz_decide(
    sys: &PolySystem,
    ch: Characteristic,
) -> Result<bool, AppsError> {
    nullstellensatz_decide_with(&QeEngine::default(), sys, ch)
}

pub fn nullstellensatz_decide_with(
    engine: &QeEngine,
    sys: &PolySystem,
    ch: Characteristic,
) -> Result<bool, AppsError> {
    let cf = engine.eliminate_atoms(&sys.solvability_formula()?)?;
    Ok(cf.decide_at(ch)?)
}

// ---------------------------------------------------------------------------
// Strong minimality
// ---------------------------------------------------------------------------

/// Every one-variable constructible set over an algebraically closed field
/// is finite or cofinite; the report carries the corresponding cardinality
/// bound (points, or complement points).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinimalityReport {
    Finite(usize),
    Cofinite(usize),
}

impl fmt::Display for MinimalityReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinimalityReport::Finite(n) => write!(out, "finite, at most {n} point(s)"),
            MinimalityReport::Cofinite(n) => {
                write!(out, "cofinite, complement has at most {n} point(s)")
            }
        }
    }
}

/// Classify the solution set of a one-variable constructible form at a
/// characteristic. Per disjunct: equations pin the set inside the roots of
/// their gcd; an inequation-only disjunct excludes at most the roots of its
/// polynomials. Disjuncts combine by union.
pub fn strong_minimality_analyze(
    c: &ConstructibleForm,
    ch: Characteristic,
) -> Result<MinimalityReport, AppsError> {
    let vars = c.vars();
    if vars.len() > 1 {
        return Err(AppsError::NotOneVariable(
            vars.into_iter().collect::<Vec<_>>().join(", "),
        ));
    }
    let var = vars.into_iter().next();
    let cf = c.specialize(ch);
    let mut finite_total = 0usize;
    let mut cofinite_best: Option<usize> = None;
    'disjunct: for conj in cf.disjuncts() {
        let mut eqs: Vec<MultiPoly> = Vec::new();
        let mut ineq_degree_sum = 0usize;
        for atom in conj {
            let poly = match ch {
                Characteristic::Zero => atom.poly().clone(),
                Characteristic::Prime(p) => atom.poly().reduce_mod_p(p)?,
            };
            if poly.is_zero() {
                match atom.sign() {
                    Sign::Zero => continue,          // 0 = 0: vacuous
                    Sign::NonZero => continue 'disjunct, // 0 ≠ 0: empty
                }
            }
            if poly.is_constant() {
                match atom.sign() {
                    Sign::Zero => continue 'disjunct, // c = 0 with c ≠ 0: empty
                    Sign::NonZero => continue,        // c ≠ 0: vacuous
                }
            }
            let v = var.as_deref().expect("non-constant atom implies a variable");
            match atom.sign() {
                Sign::Zero => eqs.push(poly),
                Sign::NonZero => ineq_degree_sum += poly.degree(v).unwrap_or(0),
            }
        }
        if eqs.is_empty() {
            cofinite_best =
                Some(cofinite_best.map_or(ineq_degree_sum, |b| b.min(ineq_degree_sum)));
        } else {
            let mut g = eqs[0].clone();
            for e in &eqs[1..] {
                g = MultiPoly::gcd_univariate(&g, e)?;
            }
            let v = var.as_deref().expect("equations imply a variable");
            finite_total += g.degree(v).unwrap_or(0);
        }
    }
    Ok(match cofinite_best {
        Some(bound) => MinimalityReport::Cofinite(bound),
        None => MinimalityReport::Finite(finite_total),
    })
}

// ---------------------------------------------------------------------------
// Irreducibility across characteristics
// ---------------------------------------------------------------------------

const MAX_IRREDUCIBILITY_DEGREE: usize = 3;
const MAX_IRREDUCIBILITY_VARS: usize = 2;

fn check_irreducibility_input(f: &MultiPoly) -> Result<(MultiPoly, usize), AppsError> {
    if f.field() != CoefField::Rationals {
        return Err(AppsError::NotRational);
    }
    let degree = f.total_degree().unwrap_or(0);
    if degree < 2 {
        return Err(AppsError::DegreeTooSmall(degree));
    }
    let nvars = f.vars().len();
    if degree > MAX_IRREDUCIBILITY_DEGREE || nvars > MAX_IRREDUCIBILITY_VARS {
        return Err(AppsError::GuardrailExceeded { degree, nvars });
    }
    Ok((f.clear_denominators(), degree))
}

/// All exponent vectors over `nvars` variables with total degree ≤ `deg`,
/// in a fixed deterministic order.
fn monomials_up_to(nvars: usize, deg: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; nvars];
    fn rec(out: &mut Vec<Vec<u32>>, current: &mut Vec<u32>, pos: usize, left: u32) {
        if pos == current.len() {
            out.push(current.clone());
            return;
        }
        for e in 0..=left {
            current[pos] = e;
            rec(out, current, pos + 1, left - e);
        }
        current[pos] = 0;
    }
    rec(&mut out, &mut current, 0, deg as u32);
    out.sort();
    out
}

/// Fresh coefficient names `<prefix>0, <prefix>1, …` avoiding a forbidden
/// set (underscores are prepended until clear).
fn coef_names(prefix: &str, count: usize, forbidden: &BTreeSet<String>) -> Vec<String> {
    let mut pre = prefix.to_string();
    loop {
        let names: Vec<String> = (0..count).map(|i| format!("{pre}{i}")).collect();
        if names.iter().all(|n| !forbidden.contains(n)) {
            return names;
        }
        pre.insert(0, '_');
    }
}

/// The general polynomial Σᵢ cᵢ·x̄^(monoᵢ) with one fresh coefficient
/// variable per monomial.
fn general_poly(
    coef_vars: &[String],
    monos: &[Vec<u32>],
    main_vars: &[String],
) -> Result<MultiPoly, PolyError> {
    let field = CoefField::Rationals;
    let mut acc = MultiPoly::zero(field);
    for (name, exps) in coef_vars.iter().zip(monos) {
        let mut term = MultiPoly::var(field, name);
        for (v, &e) in main_vars.iter().zip(exps) {
            if e > 0 {
                term = term.mul(&MultiPoly::var(field, v).pow(e)?)?;
            }
        }
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// The coefficients of `d` viewed as a polynomial in `main_vars` (each one
/// a polynomial in the remaining variables). Zero coefficients are dropped.
fn coefficients_wrt(
    d: &MultiPoly,
    main_vars: &BTreeSet<String>,
) -> Result<Vec<MultiPoly>, PolyError> {
    let field = CoefField::Rationals;
    let all_vars: Vec<String> = d.vars().to_vec();
    let mut groups: BTreeMap<Vec<u32>, MultiPoly> = BTreeMap::new();
    for (exps, coef) in d.terms() {
        let mut main_part = Vec::with_capacity(all_vars.len());
        let mut rest = MultiPoly::constant(field, coef.clone());
        for (i, v) in all_vars.iter().enumerate() {
            if main_vars.contains(v) {
                main_part.push(exps[i]);
            } else if exps[i] > 0 {
                rest = rest.mul(&MultiPoly::var(field, v).pow(exps[i])?)?;
            }
        }
        let entry = groups.entry(main_part).or_insert_with(|| MultiPoly::zero(field));
        *entry = entry.add(&rest)?;
    }
    Ok(groups.into_values().filter(|p| !p.is_zero()).collect())
}

/// One degree split (k, l): the coefficient-matching system stating that
/// `f` equals a product of general polynomials of total degrees k and l.
/// Returns (all coefficient variables in quantification order, the
/// coefficient polynomials of `A·B − f`).
fn split_system(
    f: &MultiPoly,
    k: usize,
    l: usize,
) -> Result<(Vec<String>, Vec<MultiPoly>), AppsError> {
    let main_vars: Vec<String> = f.vars().to_vec();
    let main_set: BTreeSet<String> = main_vars.iter().cloned().collect();
    let monos_a = monomials_up_to(main_vars.len(), k);
    let monos_b = monomials_up_to(main_vars.len(), l);
    let a_names = coef_names("a", monos_a.len(), &main_set);
    let mut forbidden = main_set.clone();
    forbidden.extend(a_names.iter().cloned());
    let b_names = coef_names("b", monos_b.len(), &forbidden);
    let a = general_poly(&a_names, &monos_a, &main_vars)?;
    let b = general_poly(&b_names, &monos_b, &main_vars)?;
    let difference = a.mul(&b)?.sub(f)?;
    let coeffs = coefficients_wrt(&difference, &main_set)?;
    let mut names = a_names;
    names.extend(b_names);
    Ok((names, coeffs))
}

/// The sentence expressing irreducibility of `f` in the algebraic closure:
/// for every degree split k + l = n (k, l ≥ 1, unordered since the product
/// commutes), no pair of general polynomials of total degrees k and l
/// multiplies to `f`. "Does not multiply to f" is the disjunction, over
/// monomials, of the coefficient-level disequations of `A·B − f`.
pub fn irreducibility_sentence(f: &MultiPoly) -> Result<Formula, AppsError> {
    let (f, degree) = check_irreducibility_input(f)?;
    let zero = Term::Const("0".into());
    let mut conjuncts: Vec<Formula> = Vec::new();
    for k in 1..=degree / 2 {
        let l = degree - k;
        let (names, coeffs) = split_system(&f, k, l)?;
        let mut body: Option<Formula> = None;
        for c in &coeffs {
            let atom = Formula::not(Formula::Eq(crate::qe::poly_to_term(c)?, zero.clone()));
            body = Some(match body {
                None => atom,
                Some(acc) => Formula::or(acc, atom),
            });
        }
        let mut sentence = body.expect("a nonzero coefficient always exists");
        for name in names.iter().rev() {
            sentence = Formula::forall(name, sentence);
        }
        conjuncts.push(sentence);
    }
    let mut out = None;
    for c in conjuncts {
        out = Some(match out {
            None => c,
            Some(acc) => Formula::and(acc, c),
        });
    }
    Ok(out.expect("degree ≥ 2 has at least one split"))
}

/// Constructible form (in the coefficients of `f`, here none) equivalent to
/// "`f` factors nontrivially": the disjunction over splits of the
/// solvability of the coefficient-matching system.
fn reducibility_form(
    engine: &QeEngine,
    f: &MultiPoly,
    degree: usize,
) -> Result<ConstructibleForm, AppsError> {
    let mut out = ConstructibleForm::false_form();
    for k in 1..=degree / 2 {
        let l = degree - k;
        let (names, coeffs) = split_system(f, k, l)?;
        let mut matrix = PolyFormula::True;
        for c in coeffs {
            let atom = PolyFormula::from_normalized(Atom::normalize(c, Sign::Zero)?);
            matrix =
                if matrix == PolyFormula::True { atom } else { PolyFormula::and(matrix, atom) };
        }
        let mut pf = matrix;
        for name in names.iter().rev() {
            pf = PolyFormula::Exists(name.clone(), Box::new(pf));
        }
        out = out.or(&engine.eliminate_atoms(&pf)?);
    }
    Ok(out)
}

/// Is `f` irreducible over the algebraic closure of the prime field of the
/// given characteristic?
pub fn irreducibility_decide(f: &MultiPoly, ch: Characteristic) -> Result<bool, AppsError> {
    irreducibility_decide_with(&QeEngine::default(), f, ch)
}

pub fn irreducibility_decide_with(
    engine: &QeEngine,
    f: &MultiPoly,
    ch: Characteristic,
) -> Result<bool, AppsError> {
    let (f, degree) = check_irreducibility_input(f)?;
    let reducible = reducibility_form(engine, &f, degree)?;
    Ok(!reducible.decide_at(ch)?)
}

/// Irreducibility verdicts in characteristic 0 and at each sampled prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoetherOstrowskiReport {
    char0_irreducible: bool,
    prime_verdicts: Vec<(u64, bool)>,
}

impl NoetherOstrowskiReport {
    pub fn char0_irreducible(&self) -> bool {
        self.char0_irreducible
    }

    /// (prime, irreducible-at-that-prime) in input order.
    pub fn prime_verdicts(&self) -> &[(u64, bool)] {
        &self.prime_verdicts
    }

    /// Sampled primes whose verdict differs from characteristic 0.
    pub fn mismatching_primes(&self) -> Vec<u64> {
        self.prime_verdicts
            .iter()
            .filter(|(_, v)| *v != self.char0_irreducible)
            .map(|(p, _)| *p)
            .collect()
    }

    /// Transfer check against a declared finite exception set: every
    /// sampled prime that disagrees with characteristic 0 must be in it.
    pub fn is_consistent_with(&self, allowed_exceptions: &[u64]) -> bool {
        self.mismatching_primes()
            .iter()
            .all(|p| allowed_exceptions.contains(p))
    }
}

impl fmt::Display for NoetherOstrowskiReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            out,
            "char 0: {}",
            if self.char0_irreducible { "irreducible" } else { "reducible" }
        )?;
        for (p, v) in &self.prime_verdicts {
            writeln!(out, "char {p}: {}", if *v { "irreducible" } else { "reducible" })?;
        }
        Ok(())
    }
}

/// Decide irreducibility of `f` in characteristic 0 and at each listed
/// prime. The coefficient system is eliminated once, generically; each
/// characteristic only re-evaluates the surviving constant atoms.
pub fn noether_ostrowski_check(
    f: &MultiPoly,
    primes: &[u64],
) -> Result<NoetherOstrowskiReport, AppsError> {
    noether_ostrowski_check_with(&QeEngine::default(), f, primes)
}

pub fn noether_ostrowski_check_with(
    engine: &QeEngine,
    f: &MultiPoly,
    primes: &[u64],
) -> Result<NoetherOstrowskiReport, AppsError> {
    let (f, degree) = check_irreducibility_input(f)?;
    let reducible = reducibility_form(engine, &f, degree)?;
    let char0_irreducible = !reducible.decide_at(Characteristic::Zero)?;
    let mut prime_verdicts = Vec::with_capacity(primes.len());
    for &p in primes {
        let ch = match Characteristic::new(p)? {
            Characteristic::Prime(p) => Characteristic::Prime(p),
            Characteristic::Zero => return Err(AppsError::NotPrime(0)),
        };
        prime_verdicts.push((p, !reducible.decide_at(ch)?));
    }
    Ok(NoetherOstrowskiReport { char0_irreducible, prime_verdicts })
}

// ---------------------------------------------------------------------------
// Transfer reporting with a finite-field oracle
// ---------------------------------------------------------------------------

/// One sampled prime: the elimination verdict and, when available, an
/// independent brute-force verdict over finite fields 𝔽_{p^k}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeCheck {
    pub prime: u64,
    pub by_elimination: bool,
    pub by_oracle: Option<bool>,
}

/// The characteristic spectrum of a sentence plus per-prime cross-checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LefschetzReport {
    spectrum: CharCondition,
    checks: Vec<PrimeCheck>,
}

impl LefschetzReport {
    pub fn spectrum(&self) -> &CharCondition {
        &self.spectrum
    }

    pub fn checks(&self) -> &[PrimeCheck] {
        &self.checks
    }
}

impl fmt::Display for LefschetzReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(out, "{}", self.spectrum)?;
        for c in &self.checks {
            write!(out, "p = {}: {}", c.prime, if c.by_elimination { "true" } else { "false" })?;
            match c.by_oracle {
                Some(v) => writeln!(out, " (oracle: {}, agrees)", if v { "true" } else { "false" })?,
                None => writeln!(out, " (oracle: skipped)")?,
            }
        }
        Ok(())
    }
}

/// Compute the characteristic spectrum of a sentence and cross-check it at
/// every prime up to `max_prime` with a finite-field search, where one is
/// conclusive. Any disagreement between the two methods is reported as a
/// hard internal error, never papered over.
pub fn lefschetz_report(s: &Formula, max_prime: u64) -> Result<LefschetzReport, AppsError> {
    lefschetz_report_with(&QeEngine::default(), s, max_prime)
}

pub fn lefschetz_report_with(
    engine: &QeEngine,
    s: &Formula,
    max_prime: u64,
) -> Result<LefschetzReport, AppsError> {
    let free = s.free_vars();
    if !free.is_empty() {
        return Err(AppsError::NotASentence(
            free.into_iter().collect::<Vec<_>>().join(", "),
        ));
    }
    let spectrum = engine.char_spectrum(s)?;
    let pf = to_polynomial_atoms(s)?;
    let existential = strip_exists(&pf);
    let mut checks = Vec::new();
    for p in 2..=max_prime {
        if !crate::poly::is_prime(p) {
            continue;
        }
        let by_elimination = spectrum.holds_at(Characteristic::Prime(p));
        let by_oracle = match &existential {
            Some((vars, matrix)) => oracle_search(matrix, vars, p)?,
            None => None,
        };
        if let Some(o) = by_oracle {
            if o != by_elimination {
                return Err(AppsError::OracleMismatch {
                    prime: p,
                    by_elimination,
                    by_oracle: o,
                });
            }
        }
        checks.push(PrimeCheck { prime: p, by_elimination, by_oracle });
    }
    Ok(LefschetzReport { spectrum, checks })
}

/// Split a purely existential formula into its quantifier prefix and
/// quantifier-free matrix.
fn strip_exists(pf: &PolyFormula) -> Option<(Vec<String>, &PolyFormula)> {
    let mut vars = Vec::new();
    let mut cur = pf;
    while let PolyFormula::Exists(v, g) = cur {
        vars.push(v.clone());
        cur = g;
    }
    if cur.is_quantifier_free() {
        Some((vars, cur))
    } else {
        None
    }
}

fn collect_atoms<'a>(pf: &'a PolyFormula, out: &mut Vec<&'a Atom>) {
    match pf {
        PolyFormula::True | PolyFormula::False => {}
        PolyFormula::Atom(a) => out.push(a),
        PolyFormula::Not(g) => collect_atoms(g, out),
        PolyFormula::And(a, b) | PolyFormula::Or(a, b) | PolyFormula::Implies(a, b) => {
            collect_atoms(a, out);
            collect_atoms(b, out);
        }
        PolyFormula::Exists(_, g) | PolyFormula::Forall(_, g) => collect_atoms(g, out),
    }
}

/// The matrix with atoms pre-reduced modulo p, ready for repeated
/// evaluation at points of an extension field.
enum EvalNode {
    Bool(bool),
    Atom { poly: MultiPoly, sign: Sign },
    Not(Box<EvalNode>),
    And(Box<EvalNode>, Box<EvalNode>),
    Or(Box<EvalNode>, Box<EvalNode>),
    Implies(Box<EvalNode>, Box<EvalNode>),
}

fn compile_matrix(pf: &PolyFormula, p: u64) -> Result<EvalNode, AppsError> {
    Ok(match pf {
        PolyFormula::True => EvalNode::Bool(true),
        PolyFormula::False => EvalNode::Bool(false),
        PolyFormula::Atom(a) => {
            EvalNode::Atom { poly: a.poly().reduce_mod_p(p)?, sign: a.sign() }
        }
        PolyFormula::Not(g) => EvalNode::Not(Box::new(compile_matrix(g, p)?)),
        PolyFormula::And(a, b) => {
            EvalNode::And(Box::new(compile_matrix(a, p)?), Box::new(compile_matrix(b, p)?))
        }
        PolyFormula::Or(a, b) => {
            EvalNode::Or(Box::new(compile_matrix(a, p)?), Box::new(compile_matrix(b, p)?))
        }
        PolyFormula::Implies(a, b) => {
            EvalNode::Implies(Box::new(compile_matrix(a, p)?), Box::new(compile_matrix(b, p)?))
        }
        PolyFormula::Exists(_, _) | PolyFormula::Forall(_, _) => {
            unreachable!("matrix is quantifier-free")
        }
    })
}

fn eval_node(
    node: &EvalNode,
    field: &ExtField,
    assign: &BTreeMap<String, ExtElem>,
) -> bool {
    match node {
        EvalNode::Bool(b) => *b,
        EvalNode::Atom { poly, sign } => {
            let v = eval_poly_ext(poly, field, assign);
            match sign {
                Sign::Zero => field.is_zero(&v),
                Sign::NonZero => !field.is_zero(&v),
            }
        }
        EvalNode::Not(g) => !eval_node(g, field, assign),
        EvalNode::And(a, b) => eval_node(a, field, assign) && eval_node(b, field, assign),
        EvalNode::Or(a, b) => eval_node(a, field, assign) || eval_node(b, field, assign),
        EvalNode::Implies(a, b) => !eval_node(a, field, assign) || eval_node(b, field, assign),
    }
}

/// Evaluate a polynomial with 𝔽_p coefficients at a point of 𝔽_{p^k}.
fn eval_poly_ext(
    poly: &MultiPoly,
    field: &ExtField,
    assign: &BTreeMap<String, ExtElem>,
) -> ExtElem {
    let vars: Vec<&ExtElem> = poly
        .vars()
        .iter()
        .map(|v| assign.get(v).expect("full assignment"))
        .collect();
    let mut acc = field.zero();
    for (exps, coef) in poly.terms() {
        let c = coef.as_mod().expect("coefficients reduced mod p");
        let mut term = field.embed(c);
        for (i, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                term = field.mul(&term, vars[i]);
            }
        }
        acc = field.add(&acc, &term);
    }
    acc
}

/// Search caps: fields and tuple spaces beyond these sizes are skipped.
const ORACLE_FIELD_CAP: u64 = 200_000;
const ORACLE_TUPLE_CAP: u64 = 4_000_000;

/// Brute-force verdict for ∃x̄ (matrix) over the algebraic closure of 𝔽_p,
/// by scanning 𝔽_{p^k} for increasing k.
///
/// `Some(true)` is always sound: a witness in a finite subfield is a
/// witness in the closure (quantifier-free formulas are absolute).
/// `Some(false)` is only returned when the scan was provably exhaustive:
/// with at most one variable, any root of an equation atom generates an
/// extension of degree at most the atom's degree, and an inequation-only
/// witness exists as soon as the field outgrows the number of excluded
/// points. With two variables no such easy bound holds, so an unsuccessful
/// search reports `None` (inconclusive) rather than risking a false alarm.
fn oracle_search(
    matrix: &PolyFormula,
    vars: &[String],
    p: u64,
) -> Result<Option<bool>, AppsError> {
    if vars.len() > 2 {
        return Ok(None);
    }
    let compiled = compile_matrix(matrix, p)?;
    if vars.is_empty() {
        let field = ExtField::new(p, 1)?;
        return Ok(Some(eval_node(&compiled, &field, &BTreeMap::new())));
    }
    let mut atoms = Vec::new();
    collect_atoms(matrix, &mut atoms);
    let max_degree = atoms
        .iter()
        .flat_map(|a| vars.iter().map(|v| a.poly().degree(v).unwrap_or(0)))
        .max()
        .unwrap_or(0)
        .max(1);
    let degree_sum: usize = atoms
        .iter()
        .map(|a| a.poly().total_degree().unwrap_or(0))
        .sum();
    let (k_complete, complete_possible) = if vars.len() == 1 {
        // Smallest k with p^k > degree_sum, but at least max_degree.
        let mut k_size = 1usize;
        while pow_u64(p, k_size).is_some_and(|n| n <= degree_sum as u64) {
            k_size += 1;
        }
        (max_degree.max(k_size), true)
    } else {
        (max_degree * max_degree, false)
    };
    let mut exhaustive = complete_possible;
    for k in 1..=k_complete {
        let Some(order) = pow_u64(p, k) else {
            exhaustive = false;
            break;
        };
        if order > ORACLE_FIELD_CAP
            || order.saturating_pow(vars.len() as u32) > ORACLE_TUPLE_CAP
        {
            exhaustive = false;
            break;
        }
        let field = ExtField::new(p, k)?;
        let elements: Vec<ExtElem> = field.elements().collect();
        let mut assign: BTreeMap<String, ExtElem> = BTreeMap::new();
        if scan(&compiled, &field, &elements, vars, 0, &mut assign) {
            return Ok(Some(true));
        }
    }
    Ok(if exhaustive { Some(false) } else { None })
}

fn scan(
    compiled: &EvalNode,
    field: &ExtField,
    elements: &[ExtElem],
    vars: &[String],
    depth: usize,
    assign: &mut BTreeMap<String, ExtElem>,
) -> bool {
    if depth == vars.len() {
        return eval_node(compiled, field, assign);
    }
    for e in elements {
        assign.insert(vars[depth].clone(), e.clone());
        if scan(compiled, field, elements, vars, depth + 1, assign) {
            return true;
        }
    }
    assign.remove(&vars[depth]);
    false
}

fn pow_u64(base: u64, exp: usize) -> Option<u64> {
    let exp: u32 = exp.try_into().ok()?;
    base.checked_pow(exp)
}
