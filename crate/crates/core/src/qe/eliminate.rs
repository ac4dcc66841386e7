//! The elimination state machine.
//!
//! `∃x ⋀ᵢ pᵢ = 0 ∧ ⋀ⱼ qⱼ ≠ 0` is decided over an algebraically closed field
//! by case analysis on the parameters. A worklist of branches tracks, for
//! each case, the accumulated parameter assumptions plus the surviving
//! equations/inequations as coefficient vectors in `x`:
//!
//! - Leading coefficients of equations are split into "≠ 0" and "= 0"
//!   branches until every equation has an honest degree.
//! - No equations: each inequation `q ≠ 0` is satisfiable for some `x` iff
//!   some coefficient is nonzero (an algebraically closed field is
//!   infinite, and a nonzero polynomial has finitely many roots).
//! - One equation `p` (honest degree d ≥ 1): roots exist (d ≥ 1), and some
//!   root avoids the zeros of `q = Πqⱼ` iff `p ∤ qᵈ`, i.e. iff the
//!   pseudo-remainder `prem(qᵈ, p)` has a nonzero coefficient. The
//!   pseudo-remainder identity `lc(p)ᵉ·qᵈ = A·p + R` specializes under the
//!   branch assumptions (`lc(p) ≠ 0`), so divisibility transfers.
//! - Several equations: replace the one of highest degree by its
//!   pseudo-remainder against the one of lowest degree (degrees strictly
//!   decrease); with exactly two equations and no inequations, a common
//!   root exists iff `Res_x(p₁, p₂) = 0`, which is honest while leading
//!   coefficients are pinned nonzero.

use rayon::prelude::*;

use super::{
    Atom, Budget, ConstructibleForm, NormalizedAtom, PolyFormula, QeError, Sign,
};
use crate::poly::{CoefField, MultiPoly};

pub(crate) fn eliminate_pf(
    f: &PolyFormula,
    budget: &Budget,
    parallel: bool,
) -> Result<ConstructibleForm, QeError> {
    budget.tick(1)?;
    match f {
        PolyFormula::True => Ok(ConstructibleForm::true_form()),
        PolyFormula::False => Ok(ConstructibleForm::false_form()),
        PolyFormula::Atom(a) => Ok(ConstructibleForm::from_disjuncts(vec![vec![a.clone()]])),
        PolyFormula::Not(g) => eliminate_pf(g, budget, parallel)?.not(budget),
        PolyFormula::And(a, b) => {
            let a = eliminate_pf(a, budget, parallel)?;
            let b = eliminate_pf(b, budget, parallel)?;
            a.and(&b, budget)
        }
        PolyFormula::Or(a, b) => {
            let a = eliminate_pf(a, budget, parallel)?;
            let b = eliminate_pf(b, budget, parallel)?;
            Ok(a.or(&b))
        }
        PolyFormula::Implies(a, b) => {
            let a = eliminate_pf(a, budget, parallel)?.not(budget)?;
            let b = eliminate_pf(b, budget, parallel)?;
            Ok(a.or(&b))
        }
        PolyFormula::Exists(v, g) => {
            let inner = eliminate_pf(g, budget, parallel)?;
            exists_over(&inner, v, budget, parallel)
        }
        PolyFormula::Forall(v, g) => {
            let negated = eliminate_pf(g, budget, parallel)?.not(budget)?;
            exists_over(&negated, v, budget, parallel)?.not(budget)
        }
    }
}

fn exists_over(
    cf: &ConstructibleForm,
    var: &str,
    budget: &Budget,
    parallel: bool,
) -> Result<ConstructibleForm, QeError> {
    let parts: Vec<ConstructibleForm> = if parallel {
        cf.disjuncts()
            .par_iter()
            .map(|conj| exists_conj(conj, var, budget))
            .collect::<Result<_, _>>()?
    } else {
        cf.disjuncts()
            .iter()
            .map(|conj| exists_conj(conj, var, budget))
            .collect::<Result<_, _>>()?
    };
    let mut out = ConstructibleForm::false_form();
    for part in parts {
        out = out.or(&part);
    }
    Ok(out)
}

/// One equation or inequation, as a dense ascending coefficient vector in
/// the eliminated variable. `lc_fixed` records that the leading coefficient
/// is already known nonzero on this branch (by assumption or because it is
/// a nonzero literal).
#[derive(Debug, Clone, PartialEq)]
struct TrackedPoly {
    coeffs: Vec<MultiPoly>,
    lc_fixed: bool,
}

#[derive(Debug, Clone)]
struct Branch {
    assumptions: Vec<Atom>,
    eqs: Vec<TrackedPoly>,
    ineqs: Vec<Vec<MultiPoly>>,
}

/// Eliminate `∃var` from a single conjunction of atoms.
pub(crate) fn exists_conj(
    conj: &[Atom],
    var: &str,
    budget: &Budget,
) -> Result<ConstructibleForm, QeError> {
    let mut context: Vec<Atom> = Vec::new();
    let mut eqs: Vec<TrackedPoly> = Vec::new();
    let mut ineqs: Vec<Vec<MultiPoly>> = Vec::new();
    for atom in conj {
        if atom.poly().degree(var).unwrap_or(0) == 0 {
            context.push(atom.clone());
        } else {
            let coeffs = atom.poly().coeffs_in(var);
            match atom.sign() {
                Sign::Zero => eqs.push(TrackedPoly { coeffs, lc_fixed: false }),
                Sign::NonZero => ineqs.push(coeffs),
            }
        }
    }
    if eqs.is_empty() && ineqs.is_empty() {
        // The variable does not occur: ∃x φ ≡ φ.
        return Ok(ConstructibleForm::from_disjuncts(vec![context]));
    }

    let mut results: Vec<Vec<Atom>> = Vec::new();
    let mut work = vec![Branch { assumptions: context, eqs, ineqs }];
    while let Some(mut branch) = work.pop() {
        budget.tick(8)?;
        if !normalize_branch(&mut branch)? {
            continue;
        }

        // Pin down the degree of each equation before using it.
        if let Some(i) = branch.eqs.iter().position(|e| !e.lc_fixed) {
            let lc = branch.eqs[i].coeffs.last().expect("nonempty").clone();
            if is_unit_constant(&lc) {
                branch.eqs[i].lc_fixed = true;
                work.push(branch);
                continue;
            }
            let mut nonzero_case = branch.clone();
            if add_normalized(
                &mut nonzero_case.assumptions,
                Atom::normalize(lc.clone(), Sign::NonZero)?,
            ) {
                nonzero_case.eqs[i].lc_fixed = true;
                work.push(nonzero_case);
            }
            let mut zero_case = branch;
            if add_normalized(
                &mut zero_case.assumptions,
                Atom::normalize(lc, Sign::Zero)?,
            ) {
                zero_case.eqs[i].coeffs.pop();
                work.push(zero_case);
            }
            continue;
        }

        // Every equation now has honest degree ≥ 1.
        match branch.eqs.len() {
            0 => {
                // Only inequations: Πqⱼ has finitely many roots, the field is
                // infinite, so ∃x holds iff each qⱼ is not the zero polynomial.
                let mut cf = ConstructibleForm::from_disjuncts(vec![branch.assumptions]);
                for q in &branch.ineqs {
                    let mut options: Vec<Vec<Atom>> = Vec::new();
                    let mut trivially_nonzero = false;
                    for c in q {
                        if c.is_zero() {
                            continue;
                        }
                        match Atom::normalize(c.clone(), Sign::NonZero)? {
                            NormalizedAtom::True => {
                                trivially_nonzero = true;
                                break;
                            }
                            NormalizedAtom::False => {}
                            NormalizedAtom::Conj(v) => options.push(v),
                        }
                    }
                    if trivially_nonzero {
                        continue;
                    }
                    cf = cf.and(&ConstructibleForm::from_disjuncts(options), budget)?;
                    if cf.is_false() {
                        break;
                    }
                }
                results.extend(cf.disjuncts().iter().cloned());
            }
            1 => {
                if branch.ineqs.is_empty() {
                    // A polynomial of degree ≥ 1 always has a root.
                    results.push(branch.assumptions);
                    continue;
                }
                let p = assemble(var, &branch.eqs[0].coeffs)?;
                let d = (branch.eqs[0].coeffs.len() - 1) as u32;
                let mut q = MultiPoly::one(CoefField::Rationals);
                for coeffs in &branch.ineqs {
                    q = q.mul(&assemble(var, coeffs)?)?;
                }
                budget.tick(cost_of(&q) * u64::from(d) + cost_of(&p))?;
                let qd = q.pow(d)?;
                let (_, rem, _) = MultiPoly::pseudo_divide(&qd, &p, var)?;
                // ∃x(p = 0 ∧ q ≠ 0) ⟺ p ∤ qᵈ ⟺ some coefficient of the
                // pseudo-remainder is nonzero.
                for c in rem.coeffs_in(var) {
                    if c.is_zero() {
                        continue;
                    }
                    match Atom::normalize(c, Sign::NonZero)? {
                        NormalizedAtom::True => {
                            results.push(branch.assumptions.clone());
                        }
                        NormalizedAtom::False => {}
                        NormalizedAtom::Conj(v) => {
                            let mut conj = branch.assumptions.clone();
                            if add_atoms(&mut conj, v) {
                                results.push(conj);
                            }
                        }
                    }
                }
            }
            2 if branch.ineqs.is_empty() => {
                // Common root ⟺ resultant vanishes (leading coefficients
                // are pinned nonzero on this branch).
                let p1 = assemble(var, &branch.eqs[0].coeffs)?;
                let p2 = assemble(var, &branch.eqs[1].coeffs)?;
                budget.tick(cost_of(&p1) * cost_of(&p2))?;
                let res = MultiPoly::resultant(&p1, &p2, var)?;
                match Atom::normalize(res, Sign::Zero)? {
                    NormalizedAtom::True => results.push(branch.assumptions),
                    NormalizedAtom::False => {}
                    NormalizedAtom::Conj(v) => {
                        let mut conj = branch.assumptions;
                        if add_atoms(&mut conj, v) {
                            results.push(conj);
                        }
                    }
                }
            }
            _ => {
                // Reduce: replace the highest-degree equation by its
                // pseudo-remainder against the lowest-degree one.
                let lo = branch
                    .eqs
                    .iter()
                    .enumerate()
                    .min_by_key(|(_, e)| e.coeffs.len())
                    .map(|(i, _)| i)
                    .expect("nonempty");
                let hi = branch
                    .eqs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != lo)
                    .max_by_key(|(_, e)| e.coeffs.len())
                    .map(|(i, _)| i)
                    .expect("two or more equations");
                let p_hi = assemble(var, &branch.eqs[hi].coeffs)?;
                let p_lo = assemble(var, &branch.eqs[lo].coeffs)?;
                budget.tick(cost_of(&p_hi) + cost_of(&p_lo))?;
                let (_, rem, _) = MultiPoly::pseudo_divide(&p_hi, &p_lo, var)?;
                branch.eqs[hi] = TrackedPoly { coeffs: rem.coeffs_in(var), lc_fixed: false };
                work.push(branch);
            }
        }
    }
    Ok(ConstructibleForm::from_disjuncts(results))
}

/// Trim literal-zero leading coefficients, fold degree-0 rows into the
/// assumption set, deduplicate, and detect contradictions. Returns `false`
/// when the branch is unsatisfiable.
fn normalize_branch(branch: &mut Branch) -> Result<bool, QeError> {
    let mut i = 0;
    while i < branch.eqs.len() {
        let row = &mut branch.eqs[i];
        while row.coeffs.last().is_some_and(|c| c.is_zero()) {
            row.coeffs.pop();
            row.lc_fixed = false;
        }
        if row.coeffs.is_empty() {
            // 0 = 0 carries no information.
            branch.eqs.remove(i);
            continue;
        }
        if row.coeffs.len() == 1 {
            let c = row.coeffs[0].clone();
            branch.eqs.remove(i);
            if !add_normalized(&mut branch.assumptions, Atom::normalize(c, Sign::Zero)?) {
                return Ok(false);
            }
            continue;
        }
        i += 1;
    }
    let mut i = 0;
    while i < branch.ineqs.len() {
        let row = &mut branch.ineqs[i];
        while row.last().is_some_and(|c| c.is_zero()) {
            row.pop();
        }
        if row.is_empty() {
            // 0 ≠ 0 is absurd.
            return Ok(false);
        }
        if row.len() == 1 {
            let c = row[0].clone();
            branch.ineqs.remove(i);
            if !add_normalized(&mut branch.assumptions, Atom::normalize(c, Sign::NonZero)?) {
                return Ok(false);
            }
            continue;
        }
        i += 1;
    }
    // Deduplicate (merging degree knowledge for equations).
    let mut j = 0;
    while j < branch.eqs.len() {
        let mut k = j + 1;
        while k < branch.eqs.len() {
            if branch.eqs[j].coeffs == branch.eqs[k].coeffs {
                let fixed = branch.eqs[j].lc_fixed || branch.eqs[k].lc_fixed;
                branch.eqs[j].lc_fixed = fixed;
                branch.eqs.remove(k);
            } else {
                k += 1;
            }
        }
        j += 1;
    }
    branch.ineqs.sort();
    branch.ineqs.dedup();
    // p = 0 together with p ≠ 0 is unsatisfiable.
    for eq in &branch.eqs {
        if branch.ineqs.iter().any(|q| *q == eq.coeffs) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn add_normalized(assumptions: &mut Vec<Atom>, n: NormalizedAtom) -> bool {
    match n {
        NormalizedAtom::True => true,
        NormalizedAtom::False => false,
        NormalizedAtom::Conj(v) => add_atoms(assumptions, v),
    }
}

fn add_atoms(assumptions: &mut Vec<Atom>, atoms: Vec<Atom>) -> bool {
    for a in atoms {
        if assumptions
            .iter()
            .any(|x| x.poly() == a.poly() && x.sign() != a.sign())
        {
            return false;
        }
        if !assumptions.contains(&a) {
            assumptions.push(a);
        }
    }
    true
}

fn is_unit_constant(p: &MultiPoly) -> bool {
    use num_traits::One;
    match p.as_constant() {
        Some(c) => c
            .as_rational()
            .is_some_and(|r| r.is_integer() && r.numer().magnitude().is_one()),
        None => false,
    }
}

fn assemble(var: &str, coeffs: &[MultiPoly]) -> Result<MultiPoly, QeError> {
    Ok(MultiPoly::from_coeffs_in(CoefField::Rationals, var, coeffs)?)
}

fn cost_of(p: &MultiPoly) -> u64 {
    (p.terms().count() as u64).max(1)
}
