//! Standard theories in the ring language: the field axioms and
//! characteristic sentences.

use crate::syntax::{parse_formula, Formula, Signature, Term};

/// The nine field axioms over the ring signature.
pub fn fields_axioms() -> Vec<Formula> {
    let sig = Signature::ring();
    [
        "forall x. forall y. x + y = y + x",
        "forall x. forall y. forall z. x + (y + z) = (x + y) + z",
        "forall x. x + 0 = x",
        "forall x. exists y. x + y = 0",
        "forall x. forall y. x * y = y * x",
        "forall x. forall y. forall z. x * (y * z) = (x * y) * z",
        "forall x. x * 1 = x",
        "forall x. x != 0 -> exists y. x * y = 1",
        "forall x. forall y. forall z. x * (y + z) = x * y + x * z",
    ]
    .iter()
    .map(|s| parse_formula(s, &sig).expect("field axioms are well-formed"))
    .collect()
}

/// φ_n: ∀x (x + x + ... + x = 0) with n summands. A field satisfies φ_p
/// exactly when its characteristic divides p; for prime p this pins the
/// characteristic.
pub fn char_sentence(n: u64) -> Formula {
    assert!(n >= 1, "need at least one summand");
    let x = Term::var("x");
    let mut sum = x.clone();
    for _ in 1..n {
        sum = Term::Apply("+".into(), vec![sum, x.clone()]);
    }
    Formula::forall("x", Formula::Eq(sum, Term::Const("0".into())))
}

/// The degree-n instance of the algebraic-closure schema:
/// ∀a_0 … ∀a_{n-1} ∃x (x^n + a_{n-1}·x^{n-1} + … + a_0 = 0).
pub fn acf_axiom(n: usize) -> Formula {
    assert!(n >= 1, "closure axioms start at degree 1");
    let x = Term::var("x");
    let mut pow = x.clone();
    let mut lhs = {
        // x^n
        for _ in 1..n {
            pow = Term::Apply("*".into(), vec![pow, x.clone()]);
        }
        pow
    };
    for i in (0..n).rev() {
        let a = Term::var(&format!("a{i}"));
        let mut mono = a;
        for _ in 0..i {
            mono = Term::Apply("*".into(), vec![mono, x.clone()]);
        }
        lhs = Term::Apply("+".into(), vec![lhs, mono]);
    }
    let mut f = Formula::exists("x", Formula::Eq(lhs, Term::Const("0".into())));
    for i in (0..n).rev() {
        f = Formula::forall(&format!("a{i}"), f);
    }
    f
}
