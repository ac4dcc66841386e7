//! End-to-end acceptance checks. Each test covers one numbered criterion and
//! prints a single `criterion N: pass — …` line on success (visible with
//! `cargo test --test acceptance -- --nocapture`); any violation aborts the
//! test with a diagnostic. All randomness is seeded, so runs are reproducible.

mod common;

use std::collections::BTreeMap;
use std::time::Instant;

use acf_core::apps::{
    noether_ostrowski_check, nullstellensatz_decide, strong_minimality_analyze, MinimalityReport,
    PolySystem,
};
use acf_core::poly::{roots_in_fq, CoefField, ExtElem, ExtField, MultiPoly};
use acf_core::qe::{
    char_spectrum, decide, eliminate_exists_one_var, parse_poly, Atom, Characteristic,
    ConstructibleForm, NormalizedAtom, Sign,
};
use acf_core::semantics::{
    elem_equiv_at_depth, find_isomorphism, is_substructure, substructure_closure, Assignment,
    FiniteStructure,
};
use acf_core::syntax::{parse_formula, Formula, Signature, Term};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const SMALL_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

fn ring_sentence(src: &str) -> Formula {
    let f = parse_formula(src, &Signature::ring()).unwrap();
    assert!(f.is_sentence(), "fixture must be a sentence: {src}");
    f
}

// ---------------------------------------------------------------------------
// Criterion 1: one-quantifier elimination agrees with a finite-field oracle.
// ---------------------------------------------------------------------------

/// Brute-force the truth of ∃x ⋀ atoms over the algebraic closure of 𝔽_p at
/// a concrete parameter assignment. Complete for the formulas generated
/// below: every root of a degree ≤ 3 equation lies in 𝔽_{p^k} for some
/// k ≤ 3, and an inequation-only conjunction excludes at most 6 points, so
/// 𝔽_{p^3} (at least 8 elements) always retains a witness.
fn oracle_exists_x(conj: &[Atom], params: &BTreeMap<String, u64>, p: u64) -> bool {
    let mut constraints: Vec<(MultiPoly, Sign)> = Vec::new();
    for atom in conj {
        let mut poly = atom.poly().clone();
        for (name, value) in params {
            if poly.vars().iter().any(|v| v == name) {
                poly = poly
                    .substitute(
                        name,
                        &MultiPoly::from_int(CoefField::Rationals, *value as i64),
                    )
                    .unwrap();
            }
        }
        let poly = poly.reduce_mod_p(p).unwrap();
        if poly.is_zero() {
            match atom.sign() {
                Sign::Zero => continue,
                Sign::NonZero => return false,
            }
        } else if poly.vars().is_empty() {
            match atom.sign() {
                Sign::Zero => return false,
                Sign::NonZero => continue,
            }
        } else {
            constraints.push((poly, atom.sign()));
        }
    }
    if constraints.is_empty() {
        return true;
    }
    let eq = constraints.iter().position(|(_, s)| *s == Sign::Zero);
    for k in 1..=3usize {
        let found = match eq {
            Some(i) => {
                let (field, roots) = roots_in_fq(&constraints[i].0, k).unwrap();
                roots
                    .iter()
                    .any(|x| satisfies_all(&constraints, &field, x))
            }
            None => {
                let field = ExtField::new(p, k).unwrap();
                let hit = field
                    .elements()
                    .any(|x| satisfies_all(&constraints, &field, &x));
                hit
            }
        };
        if found {
            return true;
        }
    }
    false
}

fn satisfies_all(constraints: &[(MultiPoly, Sign)], field: &ExtField, x: &ExtElem) -> bool {
    constraints.iter().all(|(poly, sign)| {
        let value = common::eval_univariate_ext(poly, field, x);
        match sign {
            Sign::Zero => field.is_zero(&value),
            Sign::NonZero => !field.is_zero(&value),
        }
    })
}

#[test]
fn criterion_1_one_quantifier_elimination_matches_finite_field_oracle() {
    let started = Instant::now();
    let mut r = common::rng(0xAC01);
    let mut formulas = 0usize;
    let mut checks = 0usize;
    while formulas < 200 {
        // One to two atoms, each a polynomial of x-degree ≤ 3 over ≤ 2
        // parameters, with a random =/≠ sign.
        let mut conj: Vec<Atom> = Vec::new();
        let mut degenerate = false;
        for _ in 0..r.gen_range(1..=2) {
            let poly = common::random_poly_in_x(&mut r, &["a", "b"], 3);
            let sign = if r.gen_bool(0.5) { Sign::Zero } else { Sign::NonZero };
            match Atom::normalize(poly, sign).unwrap() {
                NormalizedAtom::True => {}
                NormalizedAtom::False => degenerate = true,
                NormalizedAtom::Conj(atoms) => conj.extend(atoms),
            }
        }
        if degenerate || conj.is_empty() {
            continue;
        }
        formulas += 1;
        let cf = eliminate_exists_one_var(&conj, "x").unwrap();
        for p in SMALL_PRIMES {
            for va in 0..p {
                for vb in 0..p {
                    let mut assign = BTreeMap::new();
                    assign.insert("a".to_string(), va);
                    assign.insert("b".to_string(), vb);
                    let by_elimination = cf.eval_mod(&assign, p).unwrap();
                    let by_oracle = oracle_exists_x(&conj, &assign, p);
                    assert_eq!(
                        by_elimination, by_oracle,
                        "disagreement at p = {p}, a = {va}, b = {vb}\n\
                         conjunction: {conj:?}\neliminated: {cf}"
                    );
                    checks += 1;
                }
            }
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 60, "criterion 1 exceeded 60 s: {elapsed:?}");
    println!(
        "criterion 1: pass — 200 random one-quantifier formulas agree with the \
         finite-field oracle on {checks} (prime, assignment) checks in {elapsed:.2?}"
    );
}

// ---------------------------------------------------------------------------
// Criteria 2 and 3: a fixed bank of thirty sentences with hand-checked
// verdicts, decided per characteristic and summarized as spectra.
// ---------------------------------------------------------------------------

#[derive(Clone, Copy)]
enum Primes {
    All,
    None,
    Only(&'static [u64]),
    Except(&'static [u64]),
}

impl Primes {
    fn holds(self, p: u64) -> bool {
        match self {
            Primes::All => true,
            Primes::None => false,
            Primes::Only(list) => list.contains(&p),
            Primes::Except(list) => !list.contains(&p),
        }
    }
}

/// (sentence, truth in characteristic zero, truth across primes).
const SENTENCES: [(&str, bool, Primes); 30] = [
    ("exists x. x^2 + 1 = 0", true, Primes::All),
    ("1 + 1 = 0", false, Primes::Only(&[2])),
    ("forall x. x^2 != 2", false, Primes::None),
    ("1 = 0", false, Primes::None),
    ("0 = 0", true, Primes::All),
    ("3 = 0", false, Primes::Only(&[3])),
    ("exists x. x + 1 = 0", true, Primes::All),
    ("forall x. exists y. y + x = 0", true, Primes::All),
    ("forall x. exists y. y * x = 1", false, Primes::None),
    ("forall x. (x != 0 -> exists y. x * y = 1)", true, Primes::All),
    ("exists x. (x^2 = x & x != 0 & x != 1)", false, Primes::None),
    ("exists x. exists y. (x * y = 1 & x + y = 1)", true, Primes::All),
    ("forall a. forall b. exists x. x^2 + a * x + b = 0", true, Primes::All),
    ("forall a. exists x. a * x = 1", false, Primes::None),
    ("exists x. x + x = 1", true, Primes::Except(&[2])),
    ("exists x. x + x + x + x + x + x = 1", true, Primes::Except(&[2, 3])),
    ("exists x. x^2 = 2", true, Primes::All),
    ("exists x. (x^2 = 1 & x != 1)", true, Primes::Except(&[2])),
    ("forall x. (x^2 = 1 -> (x = 1 | x = 0 - 1))", true, Primes::All),
    ("exists x. (x^2 + x + 1 = 0 & x = 1)", false, Primes::Only(&[3])),
    ("forall y. exists x. x^2 = y", true, Primes::All),
    ("exists x. (x + x = 0 & x != 0)", false, Primes::Only(&[2])),
    ("exists x. (x^3 = 2 & 1 + 1 + 1 != 0)", true, Primes::Except(&[3])),
    ("forall x. forall y. (x * y = 0 -> (x = 0 | y = 0))", true, Primes::All),
    ("exists x. exists y. x != y", true, Primes::All),
    ("forall x. x + 0 = x", true, Primes::All),
    ("exists x. (x^2 = x & x + x = x)", true, Primes::All),
    ("5 = 0", false, Primes::Only(&[5])),
    ("exists x. ((x + 1) * (x + 2) = 0 & x^2 = 4)", true, Primes::All),
    ("forall x. (x^3 = x -> (x = 0 | x = 1 | x = 0 - 1))", true, Primes::All),
];

#[test]
fn criterion_2_thirty_sentences_decide_exactly_as_fixed() {
    let started = Instant::now();
    for (src, in_char0, primes) in SENTENCES {
        let s = ring_sentence(src);
        let got0 = decide(&s, Characteristic::Zero).unwrap();
        assert_eq!(got0, in_char0, "characteristic 0 verdict for: {src}");
        for p in SMALL_PRIMES {
            let got = decide(&s, Characteristic::new(p).unwrap()).unwrap();
            assert_eq!(got, primes.holds(p), "characteristic {p} verdict for: {src}");
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 30, "criterion 2 exceeded 30 s: {elapsed:?}");
    println!(
        "criterion 2: pass — 30 sentences decided at characteristic 0 and \
         p ∈ {{2,3,5,7,11,13}} with no unknowns and 100% fixture agreement in {elapsed:.2?}"
    );
}

#[test]
fn criterion_3_spectra_are_coherent_and_match_per_prime_decisions() {
    let primes_to_50: Vec<u64> = (2..=50).filter(|&n| acf_core::poly::is_prime(n)).collect();
    for (src, in_char0, _) in SENTENCES {
        let s = ring_sentence(src);
        let spectrum = char_spectrum(&s).unwrap();
        assert!(
            spectrum.is_coherent(),
            "spectrum of {src} must be true in characteristic 0 exactly when it \
             holds at cofinitely many primes: {spectrum}"
        );
        assert_eq!(
            spectrum.holds_at(Characteristic::Zero),
            in_char0,
            "spectrum char-0 value for: {src}"
        );
        for &p in &primes_to_50 {
            let ch = Characteristic::new(p).unwrap();
            assert_eq!(
                spectrum.holds_at(ch),
                decide(&s, ch).unwrap(),
                "spectrum vs direct decision at p = {p} for: {src}"
            );
        }
    }
    println!(
        "criterion 3: pass — all 30 spectra coherent (char-0 truth ⟺ cofinitely many \
         primes) and consistent with per-prime decisions for every prime p ≤ 50"
    );
}

// ---------------------------------------------------------------------------
// Criterion 4: polynomial-system solvability with a point-search witness.
// ---------------------------------------------------------------------------

const SOLVABLE: [&str; 10] = [
    "x^2 + 1\ny - x",
    "x",
    "x*y - 1\nx - 2",
    "x^2 - 2",
    "x^2 + y^2 - 1\nx - y",
    "x^3 - 2\ny^2 - x",
    "x + y + z\nx*y*z - 1\nx - y",
    "x^2 + x + 1",
    "x*y\nx + y - 1",
    "z - x*y\nx^2 - 1\ny^2 - 1",
];

const UNSOLVABLE: [&str; 10] = [
    "x\nx - 1",
    "1",
    "x^2 + 1\nx - 1",
    "x*y - 1\nx",
    "x + y\nx - y\nx - 1",
    "x^2\nx - 1",
    "2",
    "x^2 - 2\nx^2 - 3",
    "x + 1\nx^2 + 1",
    "x^2 - x\nx + 1",
];

fn eval_multi_ext(f: &MultiPoly, field: &ExtField, assign: &BTreeMap<String, ExtElem>) -> ExtElem {
    let vars = f.vars().to_vec();
    let mut acc = field.embed(0);
    for (exps, coef) in f.terms() {
        let mut term = field.embed(coef.as_mod().unwrap());
        for (i, &e) in exps.iter().enumerate() {
            let x = &assign[&vars[i]];
            for _ in 0..e {
                term = field.mul(&term, x);
            }
        }
        acc = field.add(&acc, &term);
    }
    acc
}

fn search_tuples(
    field: &ExtField,
    polys: &[MultiPoly],
    vars: &[String],
    elems: &[ExtElem],
    i: usize,
    assign: &mut BTreeMap<String, ExtElem>,
) -> bool {
    if i == vars.len() {
        return polys
            .iter()
            .all(|g| field.is_zero(&eval_multi_ext(g, field, assign)));
    }
    for e in elems {
        assign.insert(vars[i].clone(), e.clone());
        if search_tuples(field, polys, vars, elems, i + 1, assign) {
            return true;
        }
    }
    assign.remove(&vars[i]);
    false
}

/// The smallest (p, k) with p ∈ {2,…,13}, k ≤ 2 such that the system has a
/// common zero in 𝔽_{p^k}^n, by exhaustive search.
fn bounded_point_search(sys: &PolySystem) -> Option<(u64, usize)> {
    for p in SMALL_PRIMES {
        for k in 1..=2usize {
            let field = ExtField::new(p, k).unwrap();
            let polys: Vec<MultiPoly> = sys
                .generators()
                .iter()
                .map(|g| g.reduce_mod_p(p).unwrap())
                .collect();
            let elems: Vec<ExtElem> = field.elements().collect();
            let mut assign = BTreeMap::new();
            if search_tuples(&field, &polys, sys.vars(), &elems, 0, &mut assign) {
                return Some((p, k));
            }
        }
    }
    None
}

#[test]
fn criterion_4_nullstellensatz_solvability_with_point_witnesses() {
    let started = Instant::now();
    for src in SOLVABLE {
        let sys = PolySystem::parse(src).unwrap();
        assert!(
            nullstellensatz_decide(&sys, Characteristic::Zero).unwrap(),
            "expected solvable at characteristic 0: {src:?}"
        );
        // Independent confirmation: an explicit common zero over some small
        // finite field, where the decision procedure must also say yes.
        let (p, k) = bounded_point_search(&sys)
            .unwrap_or_else(|| panic!("no finite-field point found for {src:?}"));
        assert!(
            nullstellensatz_decide(&sys, Characteristic::new(p).unwrap()).unwrap(),
            "a point exists in 𝔽_{{{p}^{k}}} but the decision at p = {p} is 'unsolvable': {src:?}"
        );
    }
    for src in UNSOLVABLE {
        let sys = PolySystem::parse(src).unwrap();
        assert!(
            !nullstellensatz_decide(&sys, Characteristic::Zero).unwrap(),
            "expected unsolvable at characteristic 0: {src:?}"
        );
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 120, "criterion 4 exceeded 120 s: {elapsed:?}");
    println!(
        "criterion 4: pass — 20 polynomial systems decided with 100% fixture agreement; \
         every solvable system confirmed by an explicit finite-field point in {elapsed:.2?}"
    );
}

// ---------------------------------------------------------------------------
// Criterion 5: irreducibility across characteristics vs linear-factor search.
// ---------------------------------------------------------------------------

fn ext_mul(field: &ExtField, a: &[ExtElem], b: &[ExtElem]) -> Vec<ExtElem> {
    let mut out = vec![field.embed(0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            let prod = field.mul(x, y);
            out[i + j] = field.add(&out[i + j], &prod);
        }
    }
    out
}

fn xy_exponents(f: &MultiPoly, exps: &[u32]) -> (usize, usize) {
    let vars = f.vars();
    let (mut ex, mut ey) = (0usize, 0usize);
    for (i, &e) in exps.iter().enumerate() {
        if vars[i] == "x" {
            ex = e as usize;
        } else {
            ey = e as usize;
        }
    }
    (ex, ey)
}

/// Does x + b·y + c divide f, i.e. is f(−(b·y + c), y) the zero polynomial?
fn monic_x_factor_divides(field: &ExtField, f: &MultiPoly, b: &ExtElem, c: &ExtElem) -> bool {
    let minus_line = vec![field.neg(c), field.neg(b)];
    let mut powers: Vec<Vec<ExtElem>> = vec![vec![field.embed(1)]];
    for i in 1..=2usize {
        let next = ext_mul(field, &powers[i - 1], &minus_line);
        powers.push(next);
    }
    let mut acc: Vec<ExtElem> = vec![field.embed(0); 8];
    for (exps, coef) in f.terms() {
        let (ex, ey) = xy_exponents(f, exps);
        let scale = field.embed(coef.as_mod().unwrap());
        for (d, coeff_d) in powers[ex].iter().enumerate() {
            let v = field.mul(coeff_d, &scale);
            acc[d + ey] = field.add(&acc[d + ey], &v);
        }
    }
    acc.iter().all(|v| field.is_zero(v))
}

/// Does y + c divide f, i.e. is f(x, −c) the zero polynomial?
fn y_factor_divides(field: &ExtField, f: &MultiPoly, c: &ExtElem) -> bool {
    let minus_c = field.neg(c);
    let mut acc: Vec<ExtElem> = vec![field.embed(0); 8];
    for (exps, coef) in f.terms() {
        let (ex, ey) = xy_exponents(f, exps);
        let mut v = field.embed(coef.as_mod().unwrap());
        for _ in 0..ey {
            v = field.mul(&v, &minus_c);
        }
        acc[ex] = field.add(&acc[ex], &v);
    }
    acc.iter().all(|v| field.is_zero(v))
}

/// Brute-force reducibility of a conic over the closure of 𝔽_p by searching
/// for a linear factor with coefficients in 𝔽_{p^k}, k ≤ 2. Complete for the
/// fixtures below: each has x²-coefficient 1, so any splitting uses two
/// factors monic in x whose y-coefficients satisfy a quadratic over 𝔽_p, and
/// the constant parts then solve linearly over the same field.
fn conic_splits_over_closure(f: &MultiPoly, p: u64) -> bool {
    let fp = f.reduce_mod_p(p).unwrap();
    for k in 1..=2usize {
        let field = ExtField::new(p, k).unwrap();
        let elems: Vec<ExtElem> = field.elements().collect();
        for b in &elems {
            for c in &elems {
                if monic_x_factor_divides(&field, &fp, b, c) {
                    return true;
                }
            }
        }
        for c in &elems {
            if y_factor_divides(&field, &fp, c) {
                return true;
            }
        }
    }
    false
}

#[test]
fn criterion_5_conic_irreducibility_matches_factor_search() {
    // (polynomial, irreducible at characteristic 0, primes disagreeing with 0)
    let fixtures: [(&str, bool, &[u64]); 3] = [
        ("x^2 + y^2 - 1", true, &[2]),
        ("x^2 + y^2", false, &[]),
        ("x^2 - y", true, &[]),
    ];
    for (src, char0, differs) in fixtures {
        let f = parse_poly(src).unwrap();
        let report = noether_ostrowski_check(&f, &SMALL_PRIMES).unwrap();
        assert_eq!(
            report.char0_irreducible(),
            char0,
            "characteristic-0 verdict for {src}"
        );
        assert_eq!(report.mismatching_primes(), differs, "exception set for {src}");
        assert!(
            report.is_consistent_with(differs),
            "transfer coherence for {src}"
        );
        for &(p, irreducible) in report.prime_verdicts() {
            let splits = conic_splits_over_closure(&f, p);
            assert_eq!(
                irreducible, !splits,
                "verdict vs factor search at p = {p} for {src}"
            );
        }
    }
    println!(
        "criterion 5: pass — x²+y²−1 irreducible except at p = 2, x²+y² splits \
         everywhere, x²−y splits nowhere; all verdicts match brute-force \
         linear-factor search over 𝔽_{{p^k}}, k ≤ 2"
    );
}

// ---------------------------------------------------------------------------
// Criterion 6: substructure preservation and isomorphism invariance.
// ---------------------------------------------------------------------------

struct Tables {
    n: usize,
    f: Vec<Vec<usize>>,
    g: Vec<usize>,
    r: Vec<Vec<bool>>,
    c: usize,
}

fn random_tables(r: &mut ChaCha8Rng, n: usize) -> Tables {
    Tables {
        n,
        f: (0..n)
            .map(|_| (0..n).map(|_| r.gen_range(0..n)).collect())
            .collect(),
        g: (0..n).map(|_| r.gen_range(0..n)).collect(),
        r: (0..n)
            .map(|_| (0..n).map(|_| r.gen_bool(0.4)).collect())
            .collect(),
        c: r.gen_range(0..n),
    }
}

fn mixed_signature() -> Signature {
    Signature::new(vec![("f", 2), ("g", 1)], vec![("R", 2)], vec!["c"]).unwrap()
}

/// Realize the tables with element labels `{prefix}0, {prefix}1, …`, renamed
/// through a permutation: table index i becomes structure position perm[i].
fn structure_from_tables(
    sig: &Signature,
    t: &Tables,
    perm: &[usize],
    prefix: &str,
) -> FiniteStructure {
    let mut inv = vec![0usize; t.n];
    for (i, &pi) in perm.iter().enumerate() {
        inv[pi] = i;
    }
    let universe: Vec<String> = (0..t.n).map(|j| format!("{prefix}{j}")).collect();
    FiniteStructure::from_interpretation(
        sig.clone(),
        universe,
        |name, args| match name {
            "f" => perm[t.f[inv[args[0]]][inv[args[1]]]],
            _ => perm[t.g[inv[args[0]]]],
        },
        |_, args| t.r[inv[args[0]]][inv[args[1]]],
        |_| perm[t.c],
    )
    .unwrap()
}

fn random_term(r: &mut ChaCha8Rng, depth: usize) -> Term {
    if depth == 0 || r.gen_bool(0.4) {
        match r.gen_range(0..3) {
            0 => Term::var("x"),
            1 => Term::var("y"),
            _ => Term::Const("c".to_string()),
        }
    } else if r.gen_bool(0.5) {
        Term::Apply("g".to_string(), vec![random_term(r, depth - 1)])
    } else {
        Term::Apply(
            "f".to_string(),
            vec![random_term(r, depth - 1), random_term(r, depth - 1)],
        )
    }
}

fn random_qf_formula(r: &mut ChaCha8Rng, depth: usize) -> Formula {
    if depth == 0 || r.gen_bool(0.35) {
        let t1 = random_term(r, 2);
        let t2 = random_term(r, 2);
        if r.gen_bool(0.5) {
            Formula::Eq(t1, t2)
        } else {
            Formula::Rel("R".to_string(), vec![t1, t2])
        }
    } else {
        let a = random_qf_formula(r, depth - 1);
        match r.gen_range(0..4) {
            0 => Formula::not(a),
            1 => Formula::and(a, random_qf_formula(r, depth - 1)),
            2 => Formula::or(a, random_qf_formula(r, depth - 1)),
            _ => Formula::implies(a, random_qf_formula(r, depth - 1)),
        }
    }
}

#[test]
fn criterion_6_preservation_and_elementary_equivalence() {
    let started = Instant::now();
    let mut r = common::rng(0xAC06);
    let sig = mixed_signature();

    // 100 substructure pairs, 50 quantifier-free formulas each, every
    // two-variable assignment into the substructure: truth must transfer.
    let mut assignments_checked = 0usize;
    for _ in 0..100 {
        let n = r.gen_range(2..=8);
        let tables = random_tables(&mut r, n);
        let identity: Vec<usize> = (0..n).collect();
        let b = structure_from_tables(&sig, &tables, &identity, "e");
        let seed = b.universe()[r.gen_range(0..n)].clone();
        let a = substructure_closure(&b, &[&seed]).unwrap();
        assert!(is_substructure(&a, &b), "closure must embed in its parent");
        for _ in 0..50 {
            let f = random_qf_formula(&mut r, 3);
            for ax in a.universe() {
                for ay in a.universe() {
                    let mut asg = Assignment::new();
                    asg.insert("x".to_string(), ax.clone());
                    asg.insert("y".to_string(), ay.clone());
                    let in_a = a.eval(&f, &asg).unwrap();
                    let in_b = b.eval(&f, &asg).unwrap();
                    assert_eq!(
                        in_a, in_b,
                        "quantifier-free truth changed between substructure and \
                         parent at ({ax}, {ay}) for {f:?}"
                    );
                    assignments_checked += 1;
                }
            }
        }
    }

    // 50 isomorphic pairs: a permuted, relabeled copy must be detected as
    // isomorphic and indistinguishable by back-and-forth up to depth 2.
    for _ in 0..50 {
        let n = r.gen_range(1..=6);
        let tables = random_tables(&mut r, n);
        let identity: Vec<usize> = (0..n).collect();
        let mut perm = identity.clone();
        for i in (1..n).rev() {
            let j = r.gen_range(0..=i);
            perm.swap(i, j);
        }
        let a = structure_from_tables(&sig, &tables, &identity, "e");
        let b = structure_from_tables(&sig, &tables, &perm, "m");
        assert!(
            find_isomorphism(&a, &b).is_some(),
            "permuted copy not recognized as isomorphic (n = {n})"
        );
        for d in 0..=2 {
            assert!(
                elem_equiv_at_depth(&a, &b, d),
                "isomorphic structures distinguished at depth {d} (n = {n})"
            );
        }
    }

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 60, "criterion 6 exceeded 60 s: {elapsed:?}");
    println!(
        "criterion 6: pass — quantifier-free truth preserved across 100 substructure \
         pairs ({assignments_checked} assignments) and 50 isomorphic pairs \
         indistinguishable up to depth 2 in {elapsed:.2?}"
    );
}

// ---------------------------------------------------------------------------
// Criterion 7: minimality verdicts bound actual point counts.
// ---------------------------------------------------------------------------

fn random_one_var_form(r: &mut ChaCha8Rng) -> ConstructibleForm {
    loop {
        let mut disjuncts = Vec::new();
        for _ in 0..r.gen_range(1..=3) {
            let mut conj = Vec::new();
            let mut dead = false;
            for _ in 0..r.gen_range(1..=2) {
                let poly = common::random_int_poly(r, &["x"], 4, 3, 3);
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
        if !disjuncts.is_empty() {
            return ConstructibleForm::from_disjuncts(disjuncts);
        }
    }
}

#[test]
fn criterion_7_minimality_bounds_hold_pointwise() {
    let mut r = common::rng(0xAC07);
    let mut checked = 0usize;
    for _ in 0..100 {
        let cf = random_one_var_form(&mut r);
        // Total at characteristic zero…
        strong_minimality_analyze(&cf, Characteristic::Zero).unwrap();
        // …and sharp over two concrete prime fields.
        for p in [101u64, 127] {
            let verdict =
                strong_minimality_analyze(&cf, Characteristic::new(p).unwrap()).unwrap();
            let mut count = 0usize;
            for v in 0..p {
                let mut asg = BTreeMap::new();
                asg.insert("x".to_string(), v);
                if cf.eval_mod(&asg, p).unwrap() {
                    count += 1;
                }
            }
            match verdict {
                MinimalityReport::Finite(bound) => assert!(
                    count <= bound,
                    "finite verdict bound {bound} but {count} points in 𝔽_{p} for {cf}"
                ),
                MinimalityReport::Cofinite(bound) => assert!(
                    count + bound >= p as usize,
                    "cofinite verdict bound {bound} but only {count} points in 𝔽_{p} for {cf}"
                ),
            }
            checked += 1;
        }
    }
    println!(
        "criterion 7: pass — 100 random one-variable constructible sets classified; \
         all {checked} (form, field) point counts respect the reported bounds"
    );
}

// ---------------------------------------------------------------------------
// Criterion 8: algebra-kernel identities.
// ---------------------------------------------------------------------------

#[test]
fn criterion_8_algebra_kernel_identities() {
    let mut r = common::rng(0xAC08);

    // 500 pseudo-division identities lc(g)^e·f = q·g + r with deg_x r < deg_x g,
    // over ℚ in one and two variables.
    for i in 0..500 {
        let vars: &[&str] = if i % 2 == 0 { &["x"] } else { &["x", "y"] };
        let f = common::random_int_poly(&mut r, vars, 4, 4, 4);
        let g = loop {
            let g = common::random_int_poly(&mut r, vars, 3, 3, 4);
            if g.degree("x").unwrap_or(0) >= 1 {
                break g;
            }
        };
        let (q, rem, e) = MultiPoly::pseudo_divide(&f, &g, "x").unwrap();
        let dg = g.degree("x").unwrap();
        let lc = g.coeff_of_power("x", dg);
        let lhs = lc.pow(e).unwrap().mul(&f).unwrap();
        let rhs = q.mul(&g).unwrap().add(&rem).unwrap();
        assert_eq!(lhs, rhs, "pseudo-division identity for f = {f}, g = {g}");
        assert!(
            rem.degree("x").unwrap_or(0) < dg,
            "remainder degree not reduced: f = {f}, g = {g}, r = {rem}"
        );
    }

    // 200 resultant/gcd coherence checks over prime fields: the resultant of
    // two nonconstant univariate polynomials vanishes exactly when their gcd
    // is nonconstant.
    for i in 0..200 {
        let p = SMALL_PRIMES[i % SMALL_PRIMES.len()];
        let mut sample = || loop {
            let f = common::random_int_poly(&mut r, &["x"], 4, 4, 6)
                .reduce_mod_p(p)
                .unwrap();
            if f.degree("x").unwrap_or(0) >= 1 {
                break f;
            }
        };
        let f = sample();
        let g = sample();
        let res = MultiPoly::resultant(&f, &g, "x").unwrap();
        let gcd = MultiPoly::gcd_univariate(&f, &g).unwrap();
        assert_eq!(
            res.is_zero(),
            gcd.degree("x").unwrap_or(0) >= 1,
            "resultant/gcd disagree over 𝔽_{p}: f = {f}, g = {g}, \
             res = {res}, gcd = {gcd}"
        );
    }

    // 200 reduction-map checks: (· mod p) is a ring homomorphism.
    for i in 0..200 {
        let p = SMALL_PRIMES[i % SMALL_PRIMES.len()];
        let a = common::random_int_poly(&mut r, &["x", "y"], 3, 4, 6);
        let b = common::random_int_poly(&mut r, &["x", "y"], 3, 4, 6);
        let (ap, bp) = (a.reduce_mod_p(p).unwrap(), b.reduce_mod_p(p).unwrap());
        assert_eq!(
            a.add(&b).unwrap().reduce_mod_p(p).unwrap(),
            ap.add(&bp).unwrap(),
            "sum does not commute with reduction mod {p}"
        );
        assert_eq!(
            a.sub(&b).unwrap().reduce_mod_p(p).unwrap(),
            ap.sub(&bp).unwrap(),
            "difference does not commute with reduction mod {p}"
        );
        assert_eq!(
            a.mul(&b).unwrap().reduce_mod_p(p).unwrap(),
            ap.mul(&bp).unwrap(),
            "product does not commute with reduction mod {p}"
        );
    }

    println!(
        "criterion 8: pass — 500 pseudo-division identities, 200 resultant/gcd \
         agreements over prime fields, and 200 reduction-homomorphism checks"
    );
}
