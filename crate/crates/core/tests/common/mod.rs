//! Shared helpers for the integration test suites: seeded RNG and random
//! generators for polynomials. Not every test binary uses every helper.
#![allow(dead_code)]

use acf_core::poly::{CoefField, ExtElem, ExtField, MultiPoly};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random polynomial over ℚ: up to `terms` monomials in `vars`, each
/// exponent at most `max_deg`, integer coefficients in [-span, span] \ {0}.
/// Monomials may cancel, so the result can be zero or of lower degree.
pub fn random_int_poly(
    r: &mut ChaCha8Rng,
    vars: &[&str],
    max_deg: u32,
    terms: usize,
    span: i64,
) -> MultiPoly {
    let q = CoefField::Rationals;
    let mut acc = MultiPoly::from_int(q, 0);
    let n = r.gen_range(1..=terms);
    for _ in 0..n {
        let mut c = 0;
        while c == 0 {
            c = r.gen_range(-span..=span);
        }
        let mut mono = MultiPoly::from_int(q, c);
        for v in vars {
            let e = r.gen_range(0..=max_deg);
            if e > 0 {
                mono = mono.mul(&MultiPoly::var(q, v).pow(e).unwrap()).unwrap();
            }
        }
        acc = acc.add(&mono).unwrap();
    }
    acc
}

/// A random polynomial Σ cᵢ(params)·xⁱ of x-degree between 1 and `max_deg_x`
/// whose coefficients are small integers or (shifted) parameter variables.
/// The leading coefficient is nonzero as a polynomial, though it may of
/// course vanish under a concrete parameter assignment.
pub fn random_poly_in_x(r: &mut ChaCha8Rng, params: &[&str], max_deg_x: u32) -> MultiPoly {
    let q = CoefField::Rationals;
    let x = MultiPoly::var(q, "x");
    let deg = r.gen_range(1..=max_deg_x);
    let mut acc = MultiPoly::from_int(q, 0);
    for i in 0..=deg {
        let c = random_coefficient(r, params, i == deg);
        acc = acc.add(&c.mul(&x.pow(i).unwrap()).unwrap()).unwrap();
    }
    acc
}

fn random_coefficient(r: &mut ChaCha8Rng, params: &[&str], force_nonzero: bool) -> MultiPoly {
    let q = CoefField::Rationals;
    loop {
        let c = match r.gen_range(0..6) {
            0 | 1 => MultiPoly::from_int(q, r.gen_range(-2..=2)),
            2 => MultiPoly::var(q, params[r.gen_range(0..params.len())]),
            3 => MultiPoly::var(q, params[r.gen_range(0..params.len())]).neg(),
            4 => MultiPoly::var(q, params[r.gen_range(0..params.len())])
                .add(&MultiPoly::from_int(q, r.gen_range(-1..=1)))
                .unwrap(),
            _ => MultiPoly::from_int(q, 0),
        };
        if !force_nonzero || !c.is_zero() {
            return c;
        }
    }
}

/// Evaluate a univariate polynomial over 𝔽_p at a point of 𝔽_{p^k}.
pub fn eval_univariate_ext(f: &MultiPoly, field: &ExtField, x: &ExtElem) -> ExtElem {
    let coeffs: Vec<u64> = match f.vars().first().cloned() {
        Some(v) => f
            .coeffs_in(&v)
            .iter()
            .map(|c| c.as_constant().unwrap().as_mod().unwrap())
            .collect(),
        None => vec![f.as_constant().unwrap().as_mod().unwrap()],
    };
    field.eval_poly(&coeffs, x)
}
