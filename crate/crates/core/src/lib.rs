//! Exact first-order reasoning over algebraically closed fields.
//!
//! The crate is organized in layers:
//!
//! - [`syntax`]: signatures, terms, formulas, parsing, canonical printing,
//!   capture-avoiding substitution, the induction schema.
//! - [`semantics`]: finite structures with Tarski evaluation, homomorphism
//!   and isomorphism checks, substructures, and bounded elementary
//!   equivalence.
//! - [`poly`]: exact sparse multivariate polynomials over ℚ and 𝔽_p,
//!   pseudo-division, resultants, gcds, and small extension fields 𝔽_{p^k}.
//! - [`qe`]: quantifier elimination for algebraically closed fields,
//!   producing constructible forms, plus sentence decision and
//!   characteristic spectra.
//! - [`apps`]: polynomial-system solvability, characteristic transfer
//!   reports, irreducibility sentences, and strong-minimality analysis.
//! - [`theories`]: axioms of fields and characteristic sentences.

pub mod apps;
pub mod poly;
pub mod qe;
pub mod semantics;
pub mod syntax;
pub mod theories;
