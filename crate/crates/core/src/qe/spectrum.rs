//! Characteristic spectra.
//!
//! After eliminating all quantifiers from a sentence, every surviving atom
//! is an integer-constant atom `n = 0` or `n ≠ 0`, true at exactly the
//! primes dividing (respectively not dividing) `n`. Conjunction and
//! disjunction of such conditions stay within the family "finitely many
//! primes" / "all but finitely many primes", which this module represents
//! explicitly and computes with exactly.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{Characteristic, ConstructibleForm, QeError, Sign};

/// Whether `listed` enumerates the primes where the sentence holds, or its
/// complement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimeMode {
    OnlyListed,
    AllExceptListed,
}

/// Truth of a sentence across every characteristic: a flag for
/// characteristic 0 plus a finite or cofinite set of primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharCondition {
    true_in_char0: bool,
    mode: PrimeMode,
    listed: BTreeSet<u64>,
}

impl CharCondition {
    fn always() -> Self {
        CharCondition {
            true_in_char0: true,
            mode: PrimeMode::AllExceptListed,
            listed: BTreeSet::new(),
        }
    }

    fn never() -> Self {
        CharCondition {
            true_in_char0: false,
            mode: PrimeMode::OnlyListed,
            listed: BTreeSet::new(),
        }
    }

    pub fn true_in_char0(&self) -> bool {
        self.true_in_char0
    }

    pub fn mode(&self) -> PrimeMode {
        self.mode
    }

    pub fn listed(&self) -> &BTreeSet<u64> {
        &self.listed
    }

    /// Truth at a concrete characteristic.
    pub fn holds_at(&self, ch: Characteristic) -> bool {
        match ch {
            Characteristic::Zero => self.true_in_char0,
            Characteristic::Prime(p) => match self.mode {
                PrimeMode::OnlyListed => self.listed.contains(&p),
                PrimeMode::AllExceptListed => !self.listed.contains(&p),
            },
        }
    }

    /// The transfer principle couples characteristic 0 to "all but finitely
    /// many primes": a sentence holds in characteristic 0 iff it holds in
    /// all sufficiently large prime characteristics. Every condition built
    /// by this module satisfies the coupling by construction; this is the
    /// structural check.
    pub fn is_coherent(&self) -> bool {
        self.true_in_char0 == matches!(self.mode, PrimeMode::AllExceptListed)
    }

    fn and(&self, other: &Self) -> Self {
        use PrimeMode::*;
        let (mode, listed) = match (self.mode, other.mode) {
            (OnlyListed, OnlyListed) => {
                (OnlyListed, self.listed.intersection(&other.listed).copied().collect())
            }
            (OnlyListed, AllExceptListed) => {
                (OnlyListed, self.listed.difference(&other.listed).copied().collect())
            }
            (AllExceptListed, OnlyListed) => {
                (OnlyListed, other.listed.difference(&self.listed).copied().collect())
            }
            (AllExceptListed, AllExceptListed) => {
                (AllExceptListed, self.listed.union(&other.listed).copied().collect())
            }
        };
        CharCondition { true_in_char0: self.true_in_char0 && other.true_in_char0, mode, listed }
    }

    fn or(&self, other: &Self) -> Self {
        use PrimeMode::*;
        let (mode, listed) = match (self.mode, other.mode) {
            (OnlyListed, OnlyListed) => {
                (OnlyListed, self.listed.union(&other.listed).copied().collect())
            }
            (OnlyListed, AllExceptListed) => {
                (AllExceptListed, other.listed.difference(&self.listed).copied().collect())
            }
            (AllExceptListed, OnlyListed) => {
                (AllExceptListed, self.listed.difference(&other.listed).copied().collect())
            }
            (AllExceptListed, AllExceptListed) => {
                (AllExceptListed, self.listed.intersection(&other.listed).copied().collect())
            }
        };
        CharCondition { true_in_char0: self.true_in_char0 || other.true_in_char0, mode, listed }
    }
}

impl fmt::Display for CharCondition {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "char 0: {}; primes: ", if self.true_in_char0 { "true" } else { "false" })?;
        let set: Vec<String> = self.listed.iter().map(|p| p.to_string()).collect();
        match self.mode {
            PrimeMode::OnlyListed if set.is_empty() => write!(out, "none"),
            PrimeMode::OnlyListed => write!(out, "exactly {{{}}}", set.join(", ")),
            PrimeMode::AllExceptListed if set.is_empty() => write!(out, "all"),
            PrimeMode::AllExceptListed => write!(out, "all except {{{}}}", set.join(", ")),
        }
    }
}

/// Fold a variable-free constructible form into its characteristic
/// spectrum. Errors if any atom still carries variables.
pub(crate) fn spectrum_of(cf: &ConstructibleForm) -> Result<CharCondition, QeError> {
    let mut total = CharCondition::never();
    for conj in cf.disjuncts() {
        let mut cond = CharCondition::always();
        for atom in conj {
            let n = atom
                .constant_value()
                .ok_or_else(|| QeError::NonConstantResidue(atom.to_string()))?;
            let primes = prime_factors(&n)?;
            let atom_cond = match atom.sign() {
                Sign::Zero => CharCondition {
                    true_in_char0: false,
                    mode: PrimeMode::OnlyListed,
                    listed: primes,
                },
                Sign::NonZero => CharCondition {
                    true_in_char0: true,
                    mode: PrimeMode::AllExceptListed,
                    listed: primes,
                },
            };
            cond = cond.and(&atom_cond);
        }
        total = total.or(&cond);
    }
    Ok(total)
}

/// The distinct prime factors of a positive integer: trial division up to
/// 10⁶, then a primality check on the remaining cofactor. Constants whose
/// residual cofactor is composite (a product of two > 10⁶ primes) are
/// rejected rather than mis-factored.
fn prime_factors(n: &BigInt) -> Result<BTreeSet<u64>, QeError> {
    debug_assert!(*n > BigInt::zero());
    let mut out = BTreeSet::new();
    let mut big = n.clone();
    // Strip small primes so the cofactor fits in a machine word when at all
    // possible.
    let mut d = 2u64;
    while d <= 1_000_000 && big.to_u64().is_none() {
        let big_d = BigInt::from(d);
        if (&big % &big_d).is_zero() {
            out.insert(d);
            while (&big % &big_d).is_zero() {
                big /= &big_d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let Some(mut m) = big.to_u64() else {
        return Err(QeError::FactorOutOfRange(big.to_string()));
    };
    while d <= 1_000_000 && d.saturating_mul(d) <= m {
        if m % d == 0 {
            out.insert(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > 1 {
        if crate::poly::is_prime(m) {
            out.insert(m);
        } else {
            return Err(QeError::FactorOutOfRange(m.to_string()));
        }
    }
    Ok(out)
}
