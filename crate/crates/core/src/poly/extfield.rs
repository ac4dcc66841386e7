//! Small finite extension fields 𝔽_{p^k} = 𝔽_p[t]/(m(t)) and exhaustive root
//! search.
//!
//! The modulus m is the lexicographically first monic irreducible of degree k
//! (comparing coefficient vectors (c_0, …, c_{k−1}) ascending), found by a
//! sieve over all monic candidates. Field sizes are capped at 10^6 so every
//! search below is a plain scan of all elements.

use super::{is_prime, CoefField, MultiPoly, PolyError};

/// Largest supported field size for exhaustive scans.
pub const MAX_FIELD_SIZE: u64 = 1_000_000;

/// An element of 𝔽_{p^k}: coefficients of 1, t, …, t^{k−1} over 𝔽_p.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtElem(pub Vec<u64>);

/// The field 𝔽_{p^k} with a fixed irreducible modulus.
#[derive(Debug, Clone)]
pub struct ExtField {
    p: u64,
    k: usize,
    /// Monic modulus of degree k; coefficients ascending, length k+1.
    modulus: Vec<u64>,
}

impl ExtField {
    /// Build 𝔽_{p^k}. Requires p prime, k ≥ 1 and p^k ≤ 10^6.
    pub fn new(p: u64, k: usize) -> Result<Self, PolyError> {
        if !is_prime(p) {
            return Err(PolyError::NotPrime(p));
        }
        assert!(k >= 1, "extension degree must be positive");
        let mut order: u64 = 1;
        for _ in 0..k {
            order = order
                .checked_mul(p)
                .filter(|o| *o <= MAX_FIELD_SIZE)
                .ok_or(PolyError::FieldTooLarge(p, k, MAX_FIELD_SIZE))?;
        }
        let modulus = first_irreducible(p, k);
        Ok(ExtField { p, k, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of elements, p^k.
    pub fn order(&self) -> u64 {
        self.p.pow(self.k as u32)
    }

    /// The modulus m(t), coefficients ascending (monic, degree k).
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> ExtElem {
        ExtElem(vec![0; self.k])
    }

    pub fn one(&self) -> ExtElem {
        self.embed(1)
    }

    /// The image of a base-field residue.
    pub fn embed(&self, c: u64) -> ExtElem {
        let mut v = vec![0; self.k];
        v[0] = c % self.p;
        ExtElem(v)
    }

    /// All p^k elements, in a fixed order (base-p odometer, constants first).
    pub fn elements(&self) -> impl Iterator<Item = ExtElem> + '_ {
        (0..self.order()).map(move |mut n| {
            let mut v = Vec::with_capacity(self.k);
            for _ in 0..self.k {
                v.push(n % self.p);
                n /= self.p;
            }
            ExtElem(v)
        })
    }

    pub fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem(a.0.iter().zip(b.0.iter()).map(|(x, y)| (x + y) % self.p).collect())
    }

    pub fn sub(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem(a.0.iter().zip(b.0.iter()).map(|(x, y)| (x + self.p - y) % self.p).collect())
    }

    pub fn neg(&self, a: &ExtElem) -> ExtElem {
        ExtElem(a.0.iter().map(|x| (self.p - x) % self.p).collect())
    }

    pub fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let p = self.p;
        let mut prod = vec![0u64; 2 * self.k - 1];
        for (i, x) in a.0.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                prod[i + j] = (prod[i + j] + (x * y) % p) % p;
            }
        }
        // Reduce modulo the monic modulus: t^k = -(m_0 + m_1 t + ... + m_{k-1} t^{k-1}).
        for d in (self.k..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for j in 0..self.k {
                let m = self.modulus[j];
                if m != 0 {
                    let sub = (c * m) % p;
                    prod[d - self.k + j] = (prod[d - self.k + j] + p - sub) % p;
                }
            }
        }
        prod.truncate(self.k);
        ExtElem(prod)
    }

    pub fn is_zero(&self, a: &ExtElem) -> bool {
        a.0.iter().all(|x| *x == 0)
    }

    /// Evaluate a univariate 𝔽_p-polynomial (coefficients ascending) at `x`.
    pub fn eval_poly(&self, coeffs: &[u64], x: &ExtElem) -> ExtElem {
        let mut acc = self.zero();
        for c in coeffs.iter().rev() {
            acc = self.mul(&acc, x);
            acc.0[0] = (acc.0[0] + c % self.p) % self.p;
        }
        acc
    }

    /// Render an element as a polynomial in t, e.g. `t^2 + 2*t + 1`.
    pub fn format_elem(&self, a: &ExtElem) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (i, c) in a.0.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let part = match (i, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "t".to_string(),
                (1, c) => format!("{c}*t"),
                (i, 1) => format!("t^{i}"),
                (i, c) => format!("{c}*t^{i}"),
            };
            parts.push(part);
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// The lexicographically first monic irreducible of degree k over 𝔽_p,
/// comparing coefficient vectors (c_0, …, c_{k−1}) ascending.
fn first_irreducible(p: u64, k: usize) -> Vec<u64> {
    if k == 1 {
        // t itself: the prime field as a trivial extension.
        return vec![0, 1];
    }
    let mut coeffs = vec![0u64; k];
    loop {
        let mut candidate = coeffs.clone();
        candidate.push(1);
        if is_irreducible(&candidate, p) {
            return candidate;
        }
        // Advance lexicographically: the last coordinate varies fastest.
        let mut i = k;
        loop {
            assert!(i > 0, "no irreducible of degree {k} over F_{p} found");
            i -= 1;
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
        }
    }
}

/// Trial division by every monic polynomial of degree ≤ k/2.
fn is_irreducible(poly: &[u64], p: u64) -> bool {
    let k = poly.len() - 1;
    for d in 1..=k / 2 {
        let mut div = vec![0u64; d + 1];
        div[d] = 1;
        loop {
            if poly_rem(poly, &div, p).is_empty() {
                return false;
            }
            // Next monic divisor of degree d.
            let mut i = 0;
            loop {
                if i == d {
                    break;
                }
                div[i] += 1;
                if div[i] < p {
                    break;
                }
                div[i] = 0;
                i += 1;
            }
            if i == d {
                break;
            }
        }
    }
    true
}

/// Remainder of dense univariate division over 𝔽_p (divisor monic).
/// Returns trimmed coefficients; empty means the remainder is zero.
fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let db = b.len() - 1;
    let mut r: Vec<u64> = a.to_vec();
    while r.len() > db {
        let dr = r.len() - 1;
        let c = r[dr];
        if c != 0 {
            for (j, bj) in b.iter().enumerate() {
                let sub = (c * bj) % p;
                r[dr - db + j] = (r[dr - db + j] + p - sub) % p;
            }
        }
        while r.last() == Some(&0) {
            r.pop();
        }
        if r.len() == dr + 1 {
            // Leading term did not cancel; cannot happen with a monic divisor.
            unreachable!("monic division always cancels the leading term");
        }
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

/// All roots of a nonzero univariate polynomial over 𝔽_p in the extension
/// 𝔽_{p^k}, found by exhaustive evaluation. Returns the field (to interpret
/// the element encoding) together with the roots in scan order.
pub fn roots_in_fq(f: &MultiPoly, k: usize) -> Result<(ExtField, Vec<ExtElem>), PolyError> {
    let p = match f.field() {
        CoefField::Prime(p) => p,
        CoefField::Rationals => {
            return Err(PolyError::FieldMismatch(f.field(), CoefField::Prime(0)))
        }
    };
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let var = match f.vars() {
        [] => None,
        [v] => Some(v.clone()),
        vs => return Err(PolyError::NotUnivariate(vs.to_vec())),
    };
    let field = ExtField::new(p, k)?;
    let coeffs: Vec<u64> = match var {
        None => return Ok((field, Vec::new())), // nonzero constant: no roots
        Some(v) => f
            .coeffs_in(&v)
            .iter()
            .map(|c| c.as_constant().and_then(|c| c.as_mod()).expect("univariate over F_p"))
            .collect(),
    };
    let mut roots = Vec::new();
    for x in field.elements() {
        if field.is_zero(&field.eval_poly(&coeffs, &x)) {
            roots.push(x);
        }
    }
    Ok((field, roots))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{CoefField, MultiPoly};

    #[test]
    fn first_irreducibles_are_the_expected_moduli() {
        // Over F_2 the first irreducible quadratic is t^2 + t + 1.
        assert_eq!(ExtField::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        // Over F_3 it is t^2 + 1.
        assert_eq!(ExtField::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn field_axioms_spot_check_f4() {
        let f4 = ExtField::new(2, 2).unwrap();
        let elems: Vec<ExtElem> = f4.elements().collect();
        assert_eq!(elems.len(), 4);
        // Multiplication is commutative and 1 is neutral.
        for a in &elems {
            assert_eq!(f4.mul(a, &f4.one()), *a);
            for b in &elems {
                assert_eq!(f4.mul(a, b), f4.mul(b, a));
            }
        }
        // t * (t + 1) = t^2 + t = 1 under t^2 = t + 1.
        let t = ExtElem(vec![0, 1]);
        let t1 = ExtElem(vec![1, 1]);
        assert_eq!(f4.mul(&t, &t1), f4.one());
    }

    #[test]
    fn roots_of_x2_plus_1_in_f9() {
        // x^2 + 1 has no roots in F_3 but two in F_9.
        let f3 = CoefField::Prime(3);
        let f = MultiPoly::var(f3, "x").pow(2).unwrap().add(&MultiPoly::one(f3)).unwrap();
        let (_, roots1) = roots_in_fq(&f, 1).unwrap();
        assert!(roots1.is_empty());
        let (field, roots2) = roots_in_fq(&f, 2).unwrap();
        assert_eq!(roots2.len(), 2);
        for r in &roots2 {
            let sq = field.mul(r, r);
            assert_eq!(field.add(&sq, &field.one()), field.zero());
        }
    }

    #[test]
    fn roots_of_linear_polynomial() {
        let f7 = CoefField::Prime(7);
        let f = MultiPoly::var(f7, "x").sub(&MultiPoly::from_int(f7, 4)).unwrap();
        let (field, roots) = roots_in_fq(&f, 1).unwrap();
        assert_eq!(roots, vec![field.embed(4)]);
    }

    #[test]
    fn constant_and_zero_inputs() {
        let f5 = CoefField::Prime(5);
        let c = MultiPoly::from_int(f5, 3);
        let (_, roots) = roots_in_fq(&c, 1).unwrap();
        assert!(roots.is_empty());
        assert!(matches!(roots_in_fq(&MultiPoly::zero(f5), 1), Err(PolyError::ZeroPolynomial)));
    }

    #[test]
    fn size_bound_is_enforced() {
        assert!(matches!(ExtField::new(101, 3), Err(PolyError::FieldTooLarge(101, 3, _))));
        assert!(ExtField::new(101, 2).is_ok());
    }

    #[test]
    fn root_count_never_exceeds_degree() {
        // Degree bound over several fields, polynomial x^3 - x.
        for p in [2u64, 3, 5] {
            let fp = CoefField::Prime(p);
            let x = MultiPoly::var(fp, "x");
            let f = x.pow(3).unwrap().sub(&x).unwrap();
            for k in 1..=3 {
                let (_, roots) = roots_in_fq(&f, k).unwrap();
                assert!(roots.len() <= 3, "p={p} k={k} roots={}", roots.len());
            }
        }
    }
}
