//! Exact sparse multivariate polynomial arithmetic over ℚ and 𝔽_p.
//!
//! Polynomials are kept in a canonical sparse form: a sorted list of variable
//! names plus a map from exponent vectors (one entry per listed variable) to
//! nonzero coefficients. Variables that do not occur with a positive exponent
//! in any term are pruned from the list, so structural equality coincides
//! with mathematical equality and derived `Eq`/`Ord` are meaningful.
//!
//! Key operations: ring arithmetic, per-variable degree (with `None` playing
//! the role of −∞ for the zero polynomial), pseudo-division, Sylvester-matrix
//! resultants computed by fraction-free (Bareiss) elimination, monic
//! univariate gcd over a field, reduction of ℚ-polynomials modulo a prime,
//! and exhaustive root search in small extension fields 𝔽_{p^k} (see
//! [`extfield`]).

mod extfield;

pub use extfield::{roots_in_fq, ExtElem, ExtField};

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Errors raised by polynomial construction and algorithms.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("coefficient field mismatch: {0} vs {1}")]
    FieldMismatch(CoefField, CoefField),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error("resultant requires positive degree in {0} for at least one argument")]
    BothConstantIn(String),
    #[error("expected a univariate polynomial, found variables {0:?}")]
    NotUnivariate(Vec<String>),
    #[error("denominator {0} is divisible by {1}")]
    DenominatorDivisible(BigInt, u64),
    #[error("variable {0} is not assigned a value")]
    UnassignedVariable(String),
    #[error("field size {0}^{1} exceeds the supported bound of {2}")]
    FieldTooLarge(u64, usize, u64),
    #[error("exponent overflow while multiplying polynomials")]
    DegreeOverflow,
}

/// Coefficient field selector: exact rationals or a prime field 𝔽_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CoefField {
    Rationals,
    Prime(u64),
}

impl fmt::Display for CoefField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefField::Rationals => write!(f, "Q"),
            CoefField::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

/// Trial-division primality check; adequate for the desk-scale moduli used here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).map_or(false, |sq| sq <= n) {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl CoefField {
    /// A validated prime field.
    pub fn prime(p: u64) -> Result<Self, PolyError> {
        if is_prime(p) {
            Ok(CoefField::Prime(p))
        } else {
            Err(PolyError::NotPrime(p))
        }
    }

    fn zero(&self) -> Coef {
        match self {
            CoefField::Rationals => Coef::Rat(BigRational::zero()),
            CoefField::Prime(_) => Coef::Mod(0),
        }
    }

    fn one(&self) -> Coef {
        match self {
            CoefField::Rationals => Coef::Rat(BigRational::one()),
            CoefField::Prime(_) => Coef::Mod(1),
        }
    }

    fn add(&self, a: &Coef, b: &Coef) -> Coef {
        match (self, a, b) {
            (CoefField::Rationals, Coef::Rat(x), Coef::Rat(y)) => Coef::Rat(x + y),
            (CoefField::Prime(p), Coef::Mod(x), Coef::Mod(y)) => Coef::Mod((x + y) % p),
            _ => unreachable!("coefficient does not match field"),
        }
    }

    fn sub(&self, a: &Coef, b: &Coef) -> Coef {
        match (self, a, b) {
            (CoefField::Rationals, Coef::Rat(x), Coef::Rat(y)) => Coef::Rat(x - y),
            (CoefField::Prime(p), Coef::Mod(x), Coef::Mod(y)) => Coef::Mod((x + p - y) % p),
            _ => unreachable!("coefficient does not match field"),
        }
    }

    fn mul(&self, a: &Coef, b: &Coef) -> Coef {
        match (self, a, b) {
            (CoefField::Rationals, Coef::Rat(x), Coef::Rat(y)) => Coef::Rat(x * y),
            (CoefField::Prime(p), Coef::Mod(x), Coef::Mod(y)) => {
                Coef::Mod(((*x as u128 * *y as u128) % *p as u128) as u64)
            }
            _ => unreachable!("coefficient does not match field"),
        }
    }

    fn neg(&self, a: &Coef) -> Coef {
        match (self, a) {
            (CoefField::Rationals, Coef::Rat(x)) => Coef::Rat(-x),
            (CoefField::Prime(p), Coef::Mod(x)) => Coef::Mod(if *x == 0 { 0 } else { p - x }),
            _ => unreachable!("coefficient does not match field"),
        }
    }

    /// Multiplicative inverse of a nonzero coefficient.
    fn inv(&self, a: &Coef) -> Coef {
        match (self, a) {
            (CoefField::Rationals, Coef::Rat(x)) => Coef::Rat(x.recip()),
            (CoefField::Prime(p), Coef::Mod(x)) => Coef::Mod(mod_inverse(*x, *p)),
            _ => unreachable!("coefficient does not match field"),
        }
    }

    fn from_i64(&self, n: i64) -> Coef {
        match self {
            CoefField::Rationals => Coef::Rat(BigRational::from_integer(BigInt::from(n))),
            CoefField::Prime(p) => {
                let r = (n % *p as i64 + *p as i64) as u64 % p;
                Coef::Mod(r)
            }
        }
    }
}

/// Inverse of `a` modulo the prime `p` via the extended Euclidean algorithm.
fn mod_inverse(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "zero has no inverse");
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, (a % p) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "{a} is not invertible mod {p}");
    ((t % p as i128 + p as i128) % p as i128) as u64
}

/// A single coefficient; the variant always matches the owning polynomial's field.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coef {
    Rat(BigRational),
    Mod(u64),
}

impl Coef {
    pub fn is_zero(&self) -> bool {
        match self {
            Coef::Rat(x) => x.is_zero(),
            Coef::Mod(x) => *x == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coef::Rat(x) => x.is_one(),
            Coef::Mod(x) => *x == 1,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Coef::Rat(x) => Some(x),
            Coef::Mod(_) => None,
        }
    }

    pub fn as_mod(&self) -> Option<u64> {
        match self {
            Coef::Rat(_) => None,
            Coef::Mod(x) => Some(*x),
        }
    }
}

/// A sparse multivariate polynomial in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiPoly {
    field: CoefField,
    /// Sorted; every listed variable occurs with a positive exponent somewhere.
    vars: Vec<String>,
    /// Exponent vector (aligned with `vars`) to nonzero coefficient.
    terms: BTreeMap<Vec<u32>, Coef>,
}

impl MultiPoly {
    pub fn zero(field: CoefField) -> Self {
        MultiPoly { field, vars: Vec::new(), terms: BTreeMap::new() }
    }

    pub fn one(field: CoefField) -> Self {
        Self::constant(field, field.one())
    }

    pub fn constant(field: CoefField, c: Coef) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        MultiPoly { field, vars: Vec::new(), terms }
    }

    pub fn from_int(field: CoefField, n: i64) -> Self {
        Self::constant(field, field.from_i64(n))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self::constant(CoefField::Rationals, Coef::Rat(q))
    }

    pub fn var(field: CoefField, name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![1], field.one());
        MultiPoly { field, vars: vec![name.to_string()], terms }
    }

    pub fn field(&self) -> CoefField {
        self.field
    }

    /// The (sorted) variables occurring in this polynomial.
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.as_constant().map_or(false, |c| c.is_one())
    }

    /// The value of a constant polynomial (`None` if any variable occurs).
    /// The zero polynomial yields the zero coefficient.
    pub fn as_constant(&self) -> Option<Coef> {
        if self.vars.is_empty() {
            Some(self.terms.get(&Vec::new()).cloned().unwrap_or_else(|| self.field.zero()))
        } else {
            None
        }
    }

    /// Restore canonical form: drop zero coefficients and unused variables.
    fn normalize(mut self) -> Self {
        self.terms.retain(|_, c| !c.is_zero());
        let nv = self.vars.len();
        let mut used = vec![false; nv];
        for exps in self.terms.keys() {
            for (i, e) in exps.iter().enumerate() {
                if *e > 0 {
                    used[i] = true;
                }
            }
        }
        if used.iter().all(|u| *u) {
            return self;
        }
        let keep: Vec<usize> = (0..nv).filter(|i| used[*i]).collect();
        let vars: Vec<String> = keep.iter().map(|&i| self.vars[i].clone()).collect();
        let terms = self
            .terms
            .into_iter()
            .map(|(exps, c)| (keep.iter().map(|&i| exps[i]).collect(), c))
            .collect();
        MultiPoly { field: self.field, vars, terms }
    }

    fn check_field(&self, other: &Self) -> Result<(), PolyError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(PolyError::FieldMismatch(self.field, other.field))
        }
    }

    /// Re-express both polynomials over the union of their variable lists.
    fn aligned(&self, other: &Self) -> (Vec<String>, BTreeMap<Vec<u32>, Coef>, BTreeMap<Vec<u32>, Coef>) {
        let mut vars: Vec<String> = self.vars.iter().chain(other.vars.iter()).cloned().collect();
        vars.sort();
        vars.dedup();
        let embed = |poly: &MultiPoly| -> BTreeMap<Vec<u32>, Coef> {
            let pos: Vec<usize> = poly
                .vars
                .iter()
                .map(|v| vars.binary_search(v).expect("aligned variable"))
                .collect();
            poly.terms
                .iter()
                .map(|(exps, c)| {
                    let mut e = vec![0u32; vars.len()];
                    for (i, x) in exps.iter().enumerate() {
                        e[pos[i]] = *x;
                    }
                    (e, c.clone())
                })
                .collect()
        };
        (vars.clone(), embed(self), embed(other))
    }

    /// Sum; the coefficient fields must agree.
    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_field(other)?;
        let (vars, mut a, b) = self.aligned(other);
        for (exps, c) in b {
            match a.remove(&exps) {
                Some(prev) => {
                    let s = self.field.add(&prev, &c);
                    if !s.is_zero() {
                        a.insert(exps, s);
                    }
                }
                None => {
                    a.insert(exps, c);
                }
            }
        }
        Ok(MultiPoly { field: self.field, vars, terms: a }.normalize())
    }

    /// Difference; the coefficient fields must agree.
    pub fn sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.add(&other.neg())
    }

    /// Additive inverse.
    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), self.field.neg(c))).collect();
        MultiPoly { field: self.field, vars: self.vars.clone(), terms }
    }

    /// Product; the coefficient fields must agree.
    pub fn mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_field(other)?;
        let (vars, a, b) = self.aligned(other);
        let mut terms: BTreeMap<Vec<u32>, Coef> = BTreeMap::new();
        for (ea, ca) in &a {
            for (eb, cb) in &b {
                let mut e = Vec::with_capacity(vars.len());
                for (x, y) in ea.iter().zip(eb.iter()) {
                    e.push(x.checked_add(*y).ok_or(PolyError::DegreeOverflow)?);
                }
                let c = self.field.mul(ca, cb);
                match terms.remove(&e) {
                    Some(prev) => {
                        let s = self.field.add(&prev, &c);
                        if !s.is_zero() {
                            terms.insert(e, s);
                        }
                    }
                    None => {
                        if !c.is_zero() {
                            terms.insert(e, c);
                        }
                    }
                }
            }
        }
        Ok(MultiPoly { field: self.field, vars, terms }.normalize())
    }

    /// `self` raised to the `n`-th power by repeated squaring.
    pub fn pow(&self, n: u32) -> Result<Self, PolyError> {
        let mut result = Self::one(self.field);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Multiply every coefficient by a scalar.
    pub fn scale(&self, c: &Coef) -> Self {
        if c.is_zero() {
            return Self::zero(self.field);
        }
        let terms = self.terms.iter().map(|(e, k)| (e.clone(), self.field.mul(k, c))).collect();
        MultiPoly { field: self.field, vars: self.vars.clone(), terms }
    }

    /// Degree in `var`; `None` encodes −∞ for the zero polynomial. A variable
    /// that does not occur yields degree 0.
    pub fn degree(&self, var: &str) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        match self.vars.binary_search(&var.to_string()) {
            Err(_) => Some(0),
            Ok(i) => Some(self.terms.keys().map(|e| e[i] as usize).max().unwrap_or(0)),
        }
    }

    /// Total degree; `None` encodes −∞ for the zero polynomial.
    pub fn total_degree(&self) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        Some(
            self.terms
                .keys()
                .map(|e| e.iter().map(|x| *x as usize).sum())
                .max()
                .unwrap_or(0),
        )
    }

    /// The coefficient of `var^k`, as a polynomial in the remaining variables.
    pub fn coeff_of_power(&self, var: &str, k: usize) -> Self {
        self.coeffs_in(var).into_iter().nth(k).unwrap_or_else(|| Self::zero(self.field))
    }

    /// Dense list of coefficients of powers of `var` (index = exponent).
    /// Empty for the zero polynomial; the last entry is nonzero otherwise.
    pub fn coeffs_in(&self, var: &str) -> Vec<Self> {
        if self.is_zero() {
            return Vec::new();
        }
        let deg = self.degree(var).expect("nonzero");
        let pos = self.vars.binary_search(&var.to_string()).ok();
        let rest_vars: Vec<String> = self
            .vars
            .iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != pos)
            .map(|(_, v)| v.clone())
            .collect();
        let mut out: Vec<BTreeMap<Vec<u32>, Coef>> = vec![BTreeMap::new(); deg + 1];
        for (exps, c) in &self.terms {
            let (k, rest): (usize, Vec<u32>) = match pos {
                None => (0, exps.clone()),
                Some(p) => (
                    exps[p] as usize,
                    exps.iter().enumerate().filter(|(i, _)| *i != p).map(|(_, e)| *e).collect(),
                ),
            };
            out[k].insert(rest, c.clone());
        }
        out.into_iter()
            .map(|terms| {
                MultiPoly { field: self.field, vars: rest_vars.clone(), terms }.normalize()
            })
            .collect()
    }

    /// Rebuild `Σ coeffs[i] · var^i` from a dense coefficient list.
    pub fn from_coeffs_in(
        field: CoefField,
        var: &str,
        coeffs: &[Self],
    ) -> Result<Self, PolyError> {
        let x = Self::var(field, var);
        let mut acc = Self::zero(field);
        let mut xp = Self::one(field);
        for (i, c) in coeffs.iter().enumerate() {
            if i > 0 {
                xp = xp.mul(&x)?;
            }
            if !c.is_zero() {
                acc = acc.add(&c.mul(&xp)?)?;
            }
        }
        Ok(acc)
    }

    /// Substitute a polynomial for one variable (Horner evaluation in `var`).
    pub fn substitute(&self, var: &str, value: &Self) -> Result<Self, PolyError> {
        self.check_field(value)?;
        if !self.vars.iter().any(|v| v == var) {
            return Ok(self.clone());
        }
        let coeffs = self.coeffs_in(var);
        let mut acc = Self::zero(self.field);
        for c in coeffs.into_iter().rev() {
            acc = acc.mul(value)?.add(&c)?;
        }
        Ok(acc)
    }

    /// Evaluate a prime-field polynomial at a full assignment of its variables.
    pub fn eval_fp(&self, assign: &BTreeMap<String, u64>) -> Result<u64, PolyError> {
        let p = match self.field {
            CoefField::Prime(p) => p,
            CoefField::Rationals => {
                return Err(PolyError::FieldMismatch(self.field, CoefField::Prime(0)))
            }
        };
        let mut vals = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            match assign.get(v) {
                Some(x) => vals.push(x % p),
                None => return Err(PolyError::UnassignedVariable(v.clone())),
            }
        }
        let mut total: u64 = 0;
        for (exps, c) in &self.terms {
            let mut prod = match c {
                Coef::Mod(x) => *x,
                Coef::Rat(_) => unreachable!("field checked above"),
            };
            for (i, e) in exps.iter().enumerate() {
                prod = (prod as u128 * pow_mod(vals[i], *e as u64, p) as u128 % p as u128) as u64;
            }
            total = (total + prod) % p;
        }
        Ok(total)
    }

    /// Pseudo-division of `f` by `g` with respect to `var`: returns `(q, r, e)`
    /// with `lc^e · f = q·g + r` and `deg_var r < deg_var g`, where `lc` is
    /// the leading coefficient of `g` in `var` and `e` is the number of
    /// scaling steps of the standard loop (0 when `lc = 1`).
    pub fn pseudo_divide(f: &Self, g: &Self, var: &str) -> Result<(Self, Self, u32), PolyError> {
        f.check_field(g)?;
        if g.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let field = f.field;
        let gv = g.coeffs_in(var);
        let dg = gv.len() - 1;
        let lc = gv[dg].clone();
        let lc_is_one = lc.is_one();
        let mut r = f.coeffs_in(var);
        if r.len() <= dg {
            return Ok((Self::zero(field), f.clone(), 0));
        }
        let mut q: Vec<MultiPoly> = vec![Self::zero(field); r.len() - dg];
        let mut e = 0u32;
        while r.len() > dg {
            let dr = r.len() - 1;
            let shift = dr - dg;
            let factor = r[dr].clone();
            if factor.is_zero() {
                r.pop();
                continue;
            }
            if !lc_is_one {
                for c in q.iter_mut() {
                    *c = c.mul(&lc)?;
                }
                for c in r.iter_mut() {
                    *c = c.mul(&lc)?;
                }
                e += 1;
            }
            q[shift] = q[shift].add(&factor)?;
            for i in 0..=dg {
                r[shift + i] = r[shift + i].sub(&factor.mul(&gv[i])?)?;
            }
            debug_assert!(r[dr].is_zero());
            r.pop();
            while r.last().map_or(false, |c| c.is_zero()) {
                r.pop();
            }
        }
        let qp = Self::from_coeffs_in(field, var, &q)?;
        let rp = Self::from_coeffs_in(field, var, &r)?;
        Ok((qp, rp, e))
    }

    /// Exact division: `Some(q)` with `self = q·d` when `d` divides `self`
    /// in the polynomial ring, `None` otherwise.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        if self.check_field(d).is_err() || d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(self.field));
        }
        let (vars, mut rem, div) = self.aligned(d);
        let field = self.field;
        let (dlt_e, dlt_c) = div.iter().next_back().map(|(e, c)| (e.clone(), c.clone()))?;
        let dlt_inv = field.inv(&dlt_c);
        let mut quo: BTreeMap<Vec<u32>, Coef> = BTreeMap::new();
        while let Some((re, rc)) = rem.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            let mut me = Vec::with_capacity(vars.len());
            for (a, b) in re.iter().zip(dlt_e.iter()) {
                if a < b {
                    return None;
                }
                me.push(a - b);
            }
            let mc = field.mul(&rc, &dlt_inv);
            // rem -= (mc · x^me) · d
            for (de, dc) in &div {
                let e: Vec<u32> = me.iter().zip(de.iter()).map(|(a, b)| a + b).collect();
                let c = field.mul(&mc, dc);
                match rem.remove(&e) {
                    Some(prev) => {
                        let s = field.sub(&prev, &c);
                        if !s.is_zero() {
                            rem.insert(e, s);
                        }
                    }
                    None => {
                        rem.insert(e, field.neg(&c));
                    }
                }
            }
            quo.insert(me, mc);
        }
        Some(MultiPoly { field, vars, terms: quo }.normalize())
    }

    /// Resultant of `f` and `g` with respect to `var`, as the determinant of
    /// the Sylvester matrix (rows of `f` first, coefficients in ascending
    /// order) computed by fraction-free Bareiss elimination. With this row
    /// convention `Res_x(x−a, x−b) = b−a` and `Res_x(f, x−y) = f(y)`.
    pub fn resultant(f: &Self, g: &Self, var: &str) -> Result<Self, PolyError> {
        f.check_field(g)?;
        if f.is_zero() || g.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let field = f.field;
        let fv = f.coeffs_in(var);
        let gv = g.coeffs_in(var);
        let m = fv.len() - 1;
        let n = gv.len() - 1;
        if m == 0 && n == 0 {
            return Err(PolyError::BothConstantIn(var.to_string()));
        }
        let dim = m + n;
        let mut mat: Vec<Vec<MultiPoly>> = vec![vec![Self::zero(field); dim]; dim];
        for i in 0..n {
            for (j, c) in fv.iter().enumerate() {
                mat[i][i + j] = c.clone();
            }
        }
        for i in 0..m {
            for (j, c) in gv.iter().enumerate() {
                mat[n + i][i + j] = c.clone();
            }
        }
        bareiss_determinant(field, mat)
    }

    /// Monic gcd of univariate polynomials over the coefficient field by the
    /// Euclidean algorithm. Accepts constants; both arguments must use the
    /// same variable when both are non-constant. `gcd(f, 0)` is the monic
    /// normalization of `f`, and `gcd(0, 0) = 0`.
    pub fn gcd_univariate(f: &Self, g: &Self) -> Result<Self, PolyError> {
        f.check_field(g)?;
        let var = match (f.vars(), g.vars()) {
            ([], []) => None,
            ([v], []) | ([], [v]) => Some(v.clone()),
            ([v], [w]) if v == w => Some(v.clone()),
            _ => {
                let mut vs: Vec<String> = f.vars.iter().chain(g.vars.iter()).cloned().collect();
                vs.sort();
                vs.dedup();
                return Err(PolyError::NotUnivariate(vs));
            }
        };
        let field = f.field;
        let mut a = f.clone();
        let mut b = g.clone();
        if let Some(var) = var {
            while !b.is_zero() {
                let r = field_rem(&a, &b, &var)?;
                a = b;
                b = r;
            }
        } else if !b.is_zero() {
            a = b;
        }
        // Normalize to a monic representative.
        if a.is_zero() {
            return Ok(a);
        }
        let lc = a
            .terms
            .iter()
            .next_back()
            .map(|(_, c)| c.clone())
            .expect("nonzero polynomial has a leading term");
        Ok(a.scale(&field.inv(&lc)))
    }

    /// Reduce a ℚ-polynomial modulo a prime `p` (a ring homomorphism on the
    /// subring of p-integral rationals). Errors if any denominator is
    /// divisible by `p`.
    pub fn reduce_mod_p(&self, p: u64) -> Result<Self, PolyError> {
        if self.field != CoefField::Rationals {
            return Err(PolyError::FieldMismatch(self.field, CoefField::Rationals));
        }
        if !is_prime(p) {
            return Err(PolyError::NotPrime(p));
        }
        let field = CoefField::Prime(p);
        let pb = BigInt::from(p);
        let mut terms = BTreeMap::new();
        for (exps, c) in &self.terms {
            let q = c.as_rational().expect("rational coefficient");
            let den = q.denom().mod_floor(&pb);
            if den.is_zero() {
                return Err(PolyError::DenominatorDivisible(q.denom().clone(), p));
            }
            let num = q.numer().mod_floor(&pb);
            let num_u = bigint_to_u64(&num);
            let den_u = bigint_to_u64(&den);
            let v = (num_u as u128 * mod_inverse(den_u, p) as u128 % p as u128) as u64;
            if v != 0 {
                terms.insert(exps.clone(), Coef::Mod(v));
            }
        }
        Ok(MultiPoly { field, vars: self.vars.clone(), terms }.normalize())
    }

    /// Multiply by the least common multiple of coefficient denominators,
    /// yielding integer coefficients. Identity over prime fields.
    pub fn clear_denominators(&self) -> Self {
        if self.field != CoefField::Rationals || self.is_zero() {
            return self.clone();
        }
        let mut l = BigInt::one();
        for c in self.terms.values() {
            let q = c.as_rational().expect("rational coefficient");
            l = l.lcm(q.denom());
        }
        if l.is_one() {
            return self.clone();
        }
        self.scale(&Coef::Rat(BigRational::from_integer(l)))
    }

    /// For an integer-coefficient ℚ-polynomial: the positive gcd of the
    /// coefficients. `None` if some coefficient is not an integer or the
    /// polynomial is zero.
    pub fn integer_content(&self) -> Option<BigInt> {
        if self.field != CoefField::Rationals || self.is_zero() {
            return None;
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            let q = c.as_rational()?;
            if !q.denom().is_one() {
                return None;
            }
            g = g.gcd(q.numer());
        }
        Some(g)
    }

    /// The coefficient of the lexicographically greatest term.
    pub fn leading_coef(&self) -> Option<&Coef> {
        self.terms.iter().next_back().map(|(_, c)| c)
    }

    /// Terms in a deterministic order (exponent vector, coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Coef)> {
        self.terms.iter()
    }
}

fn bigint_to_u64(n: &BigInt) -> u64 {
    use num_traits::ToPrimitive;
    n.to_u64().expect("residue fits in u64")
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    base %= p;
    let mut acc: u64 = 1 % p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * base as u128 % p as u128) as u64;
        }
        base = (base as u128 * base as u128 % p as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Remainder of univariate division over a field (coefficients inverted
/// exactly, no pseudo-scaling).
fn field_rem(a: &MultiPoly, b: &MultiPoly, var: &str) -> Result<MultiPoly, PolyError> {
    if b.is_zero() {
        return Err(PolyError::DivisionByZero);
    }
    let field = a.field;
    let bv = b.coeffs_in(var);
    let db = bv.len() - 1;
    let lc_inv = {
        let lc = bv[db].as_constant().ok_or_else(|| PolyError::NotUnivariate(b.vars.to_vec()))?;
        field.inv(&lc)
    };
    let mut r = a.coeffs_in(var);
    while r.len() > db {
        let dr = r.len() - 1;
        let shift = dr - db;
        let factor = r[dr].scale(&lc_inv);
        if !factor.is_zero() {
            for i in 0..=db {
                r[shift + i] = r[shift + i].sub(&factor.mul(&bv[i])?)?;
            }
        }
        debug_assert!(r[dr].is_zero());
        r.pop();
        while r.last().map_or(false, |c| c.is_zero()) {
            r.pop();
        }
    }
    MultiPoly::from_coeffs_in(field, var, &r)
}

/// Determinant of a square polynomial matrix by fraction-free Bareiss
/// elimination; every interior division is exact in the polynomial ring.
fn bareiss_determinant(
    field: CoefField,
    mut a: Vec<Vec<MultiPoly>>,
) -> Result<MultiPoly, PolyError> {
    let n = a.len();
    if n == 0 {
        return Ok(MultiPoly::one(field));
    }
    let mut sign = false;
    let mut prev = MultiPoly::one(field);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = !sign;
                }
                None => return Ok(MultiPoly::zero(field)),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = a[k][k].mul(&a[i][j])?.sub(&a[i][k].mul(&a[k][j])?)?;
                a[i][j] = t
                    .exact_div(&prev)
                    .expect("Bareiss pivot division is exact over an integral domain");
            }
            a[i][k] = MultiPoly::zero(field);
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if sign { det.neg() } else { det })
}

impl fmt::Display for MultiPoly {
    /// Renders in the shared term grammar (e.g. `x^2 - 3*x*y + 2`); terms are
    /// ordered by descending total degree, then reverse-lexicographically.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut entries: Vec<(&Vec<u32>, &Coef)> = self.terms.iter().collect();
        entries.sort_by(|(ea, _), (eb, _)| {
            let ta: u32 = ea.iter().sum();
            let tb: u32 = eb.iter().sum();
            tb.cmp(&ta).then_with(|| eb.cmp(ea))
        });
        for (idx, (exps, c)) in entries.iter().enumerate() {
            let (neg, mag) = match c {
                Coef::Rat(q) => (q.is_negative(), format!("{}", q.abs())),
                Coef::Mod(x) => (false, format!("{x}")),
            };
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            let is_const_term = exps.iter().all(|e| *e == 0);
            if mag != "1" || is_const_term {
                factors.push(mag);
            }
            for (i, e) in exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars[i].clone()),
                    _ => factors.push(format!("{}^{}", self.vars[i], e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}
