//! Randomized structural properties: printing/parsing round trips, the
//! polynomial/term bridge, DNF truth tables, quantifier duality, and the
//! pointwise soundness of the constructible-set algebra.

mod common;

use std::collections::BTreeMap;

use acf_core::qe::{
    decide, poly_to_term, term_to_poly, to_dnf, to_polynomial_atoms, Atom, Budget, Characteristic,
    ConstructibleForm, NormalizedAtom, Sign, DEFAULT_BUDGET,
};
use acf_core::semantics::{zmod_ring, Assignment};
use acf_core::syntax::{parse_formula, parse_term, Formula, Signature, Term};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

// ---------------------------------------------------------------------------
// Seeded random builders (shared shapes for several properties).
// ---------------------------------------------------------------------------

fn random_ring_term(r: &mut ChaCha8Rng, depth: usize, vars: &[&str]) -> Term {
    if depth == 0 || r.gen_bool(0.35) {
        match r.gen_range(0..4) {
            0 => Term::Const("0".to_string()),
            1 => Term::Const("1".to_string()),
            _ => Term::var(vars[r.gen_range(0..vars.len())]),
        }
    } else {
        let op = ["+", "-", "*"][r.gen_range(0..3)];
        Term::Apply(
            op.to_string(),
            vec![
                random_ring_term(r, depth - 1, vars),
                random_ring_term(r, depth - 1, vars),
            ],
        )
    }
}

fn random_ring_formula(r: &mut ChaCha8Rng, depth: usize, vars: &[&str]) -> Formula {
    if depth == 0 || r.gen_bool(0.3) {
        let atom = Formula::Eq(
            random_ring_term(r, 2, vars),
            random_ring_term(r, 2, vars),
        );
        if r.gen_bool(0.3) {
            Formula::not(atom)
        } else {
            atom
        }
    } else {
        let a = random_ring_formula(r, depth - 1, vars);
        match r.gen_range(0..6) {
            0 => Formula::not(a),
            1 => Formula::and(a, random_ring_formula(r, depth - 1, vars)),
            2 => Formula::or(a, random_ring_formula(r, depth - 1, vars)),
            3 => Formula::implies(a, random_ring_formula(r, depth - 1, vars)),
            4 => Formula::exists(vars[r.gen_range(0..vars.len())], a),
            _ => Formula::forall(vars[r.gen_range(0..vars.len())], a),
        }
    }
}

fn random_qf_ring_formula(r: &mut ChaCha8Rng, depth: usize, vars: &[&str]) -> Formula {
    if depth == 0 || r.gen_bool(0.3) {
        let atom = Formula::Eq(
            random_ring_term(r, 2, vars),
            random_ring_term(r, 2, vars),
        );
        if r.gen_bool(0.3) {
            Formula::not(atom)
        } else {
            atom
        }
    } else {
        let a = random_qf_ring_formula(r, depth - 1, vars);
        match r.gen_range(0..4) {
            0 => Formula::not(a),
            1 => Formula::and(a, random_qf_ring_formula(r, depth - 1, vars)),
            2 => Formula::or(a, random_qf_ring_formula(r, depth - 1, vars)),
            _ => Formula::implies(a, random_qf_ring_formula(r, depth - 1, vars)),
        }
    }
}

fn random_form_in_x(r: &mut ChaCha8Rng) -> ConstructibleForm {
    let mut disjuncts = Vec::new();
    for _ in 0..r.gen_range(1..=3) {
        let mut conj = Vec::new();
        let mut dead = false;
        for _ in 0..r.gen_range(1..=2) {
            let poly = common::random_int_poly(r, &["x"], 3, 3, 3);
            if poly.is_zero() {
                continue;
            }
            let sign = if r.gen_bool(0.5) { Sign::Zero } else { Sign::NonZero };
            match Atom::normalize(poly, sign).unwrap() {
                NormalizedAtom::True => {}
                NormalizedAtom::False => dead = true,
                NormalizedAtom::Conj(atoms) => conj.extend(atoms),
            }
        }
        if !dead {
            disjuncts.push(conj);
        }
    }
    ConstructibleForm::from_disjuncts(disjuncts)
}

fn point(v: u64) -> BTreeMap<String, u64> {
    let mut assign = BTreeMap::new();
    assign.insert("x".to_string(), v);
    assign
}

// ---------------------------------------------------------------------------
// Properties.
// ---------------------------------------------------------------------------

proptest! {
    /// Printing any formula and parsing the result restores the identical tree.
    #[test]
    fn printed_formulas_reparse(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let sig = Signature::ring();
        let f = random_ring_formula(&mut r, 4, &["x", "y", "z"]);
        let printed = f.to_string();
        let back = parse_formula(&printed, &sig);
        prop_assert_eq!(back.as_ref(), Ok(&f), "printed as: {}", printed);
    }

    /// Printing any term and parsing the result restores the identical tree.
    #[test]
    fn printed_terms_reparse(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let sig = Signature::ring();
        let t = random_ring_term(&mut r, 4, &["x", "y", "z"]);
        let printed = t.to_string();
        let back = parse_term(&printed, &sig);
        prop_assert_eq!(back.as_ref(), Ok(&t), "printed as: {}", printed);
    }

    /// The parser returns errors, never panics, on arbitrary input.
    #[test]
    fn parser_never_panics(src in "[a-z0-9+*()=!&|<>^ .-]{0,60}") {
        let sig = Signature::ring();
        let _ = parse_formula(&src, &sig);
        let _ = parse_term(&src, &sig);
    }

    /// Converting a polynomial to a term and back is the identity.
    #[test]
    fn polynomial_term_round_trip(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let p = common::random_int_poly(&mut r, &["x", "y"], 4, 4, 6);
        let t = poly_to_term(&p).unwrap();
        prop_assert_eq!(term_to_poly(&t).unwrap(), p);
    }

    /// The disjunctive normal form has the same truth table over ℤ/7 as the
    /// formula it came from (evaluated by the finite-structure semantics).
    #[test]
    fn dnf_matches_structure_semantics(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let f = random_qf_ring_formula(&mut r, 3, &["x", "y"]);
        let cf = to_dnf(&to_polynomial_atoms(&f).unwrap()).unwrap();
        let ring = zmod_ring(7);
        for vx in 0..7u64 {
            for vy in 0..7u64 {
                let mut names = Assignment::new();
                names.insert("x".to_string(), vx.to_string());
                names.insert("y".to_string(), vy.to_string());
                let by_semantics = ring.eval(&f, &names).unwrap();
                let mut values = BTreeMap::new();
                values.insert("x".to_string(), vx);
                values.insert("y".to_string(), vy);
                let by_dnf = cf.eval_mod(&values, 7).unwrap();
                prop_assert_eq!(
                    by_semantics, by_dnf,
                    "truth tables differ at ({}, {}) for {} with DNF {}",
                    vx, vy, f, cf
                );
            }
        }
    }

    /// ∀x φ and ¬∃x ¬φ decide identically in every characteristic.
    #[test]
    fn forall_exists_duality(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let phi = random_qf_ring_formula(&mut r, 2, &["x"]);
        let universal = Formula::forall("x", phi.clone());
        let dual = Formula::exists("x", Formula::not(phi));
        for ch in [
            Characteristic::Zero,
            Characteristic::new(2).unwrap(),
            Characteristic::new(7).unwrap(),
        ] {
            prop_assert_eq!(
                decide(&universal, ch).unwrap(),
                !decide(&dual, ch).unwrap(),
                "duality broken at {} for {}",
                ch,
                universal
            );
        }
    }

    /// Union, intersection, complement, and simplification of constructible
    /// sets are pointwise correct over 𝔽₁₁.
    #[test]
    fn set_algebra_is_pointwise_sound(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let a = random_form_in_x(&mut r);
        let b = random_form_in_x(&mut r);
        let budget = Budget::new(DEFAULT_BUDGET);
        let union = a.or(&b);
        let intersection = a.and(&b, &budget).unwrap();
        let complement = a.not(&budget).unwrap();
        let simplified = a.simplify();
        for v in 0..11u64 {
            let assign = point(v);
            let at_a = a.eval_mod(&assign, 11).unwrap();
            let at_b = b.eval_mod(&assign, 11).unwrap();
            prop_assert_eq!(union.eval_mod(&assign, 11).unwrap(), at_a || at_b);
            prop_assert_eq!(intersection.eval_mod(&assign, 11).unwrap(), at_a && at_b);
            prop_assert_eq!(complement.eval_mod(&assign, 11).unwrap(), !at_a);
            prop_assert_eq!(simplified.eval_mod(&assign, 11).unwrap(), at_a);
        }
    }

    /// Specializing to a characteristic never changes truth at points of
    /// that characteristic.
    #[test]
    fn specialization_preserves_truth(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let a = random_form_in_x(&mut r);
        for p in [2u64, 5, 13] {
            let specialized = a.specialize(Characteristic::new(p).unwrap());
            for v in 0..p {
                let assign = point(v);
                prop_assert_eq!(
                    specialized.eval_mod(&assign, p).unwrap(),
                    a.eval_mod(&assign, p).unwrap(),
                    "specialization changed truth at x = {} mod {} for {}",
                    v, p, a
                );
            }
        }
    }
}

/// `MultiPoly` ↔ `Term` printing composes with the formula parser: a
/// polynomial printed inside an equation parses back to the same polynomial.
#[test]
fn polynomial_display_reparses_through_the_term_grammar() {
    let mut r = common::rng(0x90);
    let sig = Signature::ring();
    for _ in 0..300 {
        let p = common::random_int_poly(&mut r, &["x", "y"], 4, 4, 6);
        let printed = poly_to_term(&p).unwrap().to_string();
        let back = term_to_poly(&parse_term(&printed, &sig).unwrap()).unwrap();
        assert_eq!(back, p, "display round trip failed for {printed}");
    }
}
