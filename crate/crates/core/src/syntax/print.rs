//! Canonical printing of terms and formulas.
//!
//! The printer is the inverse of the parser on syntax trees: for every term
//! or formula `t` produced by the parser, `parse(print(t)) == t`. Binary
//! connectives are always parenthesized, quantifier bodies that are atoms or
//! negations get parentheses, `Not(Eq(..))` prints as `!=`, desugared
//! integer literals print back as literals, and `0 - t` prints as `-t`.

use std::fmt;

use super::{Formula, Term};

/// Syntactic levels for terms, ordered by binding strength.
#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum Level {
    Sum,
    Prod,
    Atom,
}

/// Recognize the exact tree produced by desugaring an integer literal:
/// `0`, `1`, or a left-associated sum of ones with at least two summands.
fn as_literal(t: &Term) -> Option<u64> {
    match t {
        Term::Const(c) if c == "0" => Some(0),
        Term::Const(c) if c == "1" => Some(1),
        Term::Apply(op, args) if op == "+" && args.len() == 2 => {
            if args[1] != Term::Const("1".into()) {
                return None;
            }
            match as_literal(&args[0]) {
                // `0 + 1` is not the literal 1; only sums built from `1`.
                Some(n) if n >= 1 => Some(n + 1),
                _ => None,
            }
        }
        _ => None,
    }
}

/// Recognize `0 - t`, the desugaring of unary minus.
fn as_unary_minus(t: &Term) -> Option<&Term> {
    match t {
        Term::Apply(op, args)
            if op == "-" && args.len() == 2 && args[0] == Term::Const("0".into()) =>
        {
            Some(&args[1])
        }
        _ => None,
    }
}

fn fmt_term(t: &Term, level: Level, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if let Some(n) = as_literal(t) {
        return write!(out, "{n}");
    }
    if let Some(sub) = as_unary_minus(t) {
        // Unary minus parses at the innermost level, so it never needs
        // parentheses itself; its operand does unless it is atomic.
        write!(out, "-")?;
        return if matches!(sub, Term::Var(_) | Term::Const(_)) || as_literal(sub).is_some() {
            fmt_term(sub, Level::Atom, out)
        } else {
            write!(out, "(")?;
            fmt_term(sub, Level::Sum, out)?;
            write!(out, ")")
        };
    }
    match t {
        Term::Var(v) => write!(out, "{v}"),
        Term::Const(c) => write!(out, "{c}"),
        Term::Apply(op, args) if (op == "+" || op == "-") && args.len() == 2 => {
            let parens = level > Level::Sum;
            if parens {
                write!(out, "(")?;
            }
            fmt_term(&args[0], Level::Sum, out)?;
            write!(out, " {op} ")?;
            fmt_term(&args[1], Level::Prod, out)?;
            if parens {
                write!(out, ")")?;
            }
            Ok(())
        }
        Term::Apply(op, args) if op == "*" && args.len() == 2 => {
            let parens = level > Level::Prod;
            if parens {
                write!(out, "(")?;
            }
            fmt_term(&args[0], Level::Prod, out)?;
            write!(out, " * ")?;
            fmt_term(&args[1], Level::Atom, out)?;
            if parens {
                write!(out, ")")?;
            }
            Ok(())
        }
        Term::Apply(f, args) => {
            write!(out, "{f}(")?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    write!(out, ", ")?;
                }
                fmt_term(a, Level::Sum, out)?;
            }
            write!(out, ")")
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_term(self, Level::Sum, out)
    }
}

fn fmt_formula(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    match f {
        Formula::Eq(a, b) => {
            fmt_term(a, Level::Sum, out)?;
            write!(out, " = ")?;
            fmt_term(b, Level::Sum, out)
        }
        Formula::Rel(r, args) => {
            write!(out, "{r}(")?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    write!(out, ", ")?;
                }
                fmt_term(a, Level::Sum, out)?;
            }
            write!(out, ")")
        }
        Formula::Not(g) => match g.as_ref() {
            Formula::Eq(a, b) => {
                fmt_term(a, Level::Sum, out)?;
                write!(out, " != ")?;
                fmt_term(b, Level::Sum, out)
            }
            Formula::Rel(_, _) => {
                write!(out, "!")?;
                fmt_formula(g, out)
            }
            // Binary connectives carry their own parentheses.
            Formula::And(_, _) | Formula::Or(_, _) | Formula::Implies(_, _) => {
                write!(out, "!")?;
                fmt_formula(g, out)
            }
            _ => {
                write!(out, "!(")?;
                fmt_formula(g, out)?;
                write!(out, ")")
            }
        },
        Formula::And(a, b) => fmt_binary(a, "&", b, out),
        Formula::Or(a, b) => fmt_binary(a, "|", b, out),
        Formula::Implies(a, b) => fmt_binary(a, "->", b, out),
        Formula::Exists(v, g) => {
            write!(out, "exists {v}. ")?;
            fmt_quantifier_body(g, out)
        }
        Formula::Forall(v, g) => {
            write!(out, "forall {v}. ")?;
            fmt_quantifier_body(g, out)
        }
    }
}

fn fmt_binary(a: &Formula, op: &str, b: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(out, "(")?;
    // A quantifier's scope runs maximally to the right, so a quantified left
    // operand needs its own parentheses or it would swallow the connective.
    if matches!(a, Formula::Exists(_, _) | Formula::Forall(_, _)) {
        write!(out, "(")?;
        fmt_formula(a, out)?;
        write!(out, ")")?;
    } else {
        fmt_formula(a, out)?;
    }
    write!(out, " {op} ")?;
    fmt_formula(b, out)?;
    write!(out, ")")
}

fn fmt_quantifier_body(g: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    match g {
        // Quantifier chains print bare; binary connectives self-parenthesize.
        Formula::Exists(_, _)
        | Formula::Forall(_, _)
        | Formula::And(_, _)
        | Formula::Or(_, _)
        | Formula::Implies(_, _) => fmt_formula(g, out),
        _ => {
            write!(out, "(")?;
            fmt_formula(g, out)?;
            write!(out, ")")
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_formula(self, out)
    }
}

#[cfg(test)]
mod tests {
    use crate::syntax::{parse_formula, parse_term, Signature};

    fn ring() -> Signature {
        Signature::ring()
    }

    fn round_trip_formula(src: &str) {
        let f = parse_formula(src, &ring()).unwrap();
        let printed = f.to_string();
        let reparsed = parse_formula(&printed, &ring())
            .unwrap_or_else(|e| panic!("printed form `{printed}` fails to parse: {e}"));
        assert_eq!(f, reparsed, "round trip changed `{src}` via `{printed}`");
    }

    #[test]
    fn quantified_atom_gets_parentheses() {
        let f = parse_formula("exists x. x + 1 = 0", &ring()).unwrap();
        assert_eq!(f.to_string(), "exists x. (x + 1 = 0)");
    }

    #[test]
    fn literals_print_back_as_literals() {
        assert_eq!(parse_term("5", &ring()).unwrap().to_string(), "5");
        assert_eq!(parse_term("0", &ring()).unwrap().to_string(), "0");
        assert_eq!(parse_term("1", &ring()).unwrap().to_string(), "1");
        // 0 + 1 is not the canonical literal tree for 1 and must not
        // collapse to it.
        assert_eq!(parse_term("0 + 1", &ring()).unwrap().to_string(), "0 + 1");
    }

    #[test]
    fn unary_minus_prints_compactly() {
        assert_eq!(parse_term("-x + 2", &ring()).unwrap().to_string(), "-x + 2");
        assert_eq!(parse_term("0 - x", &ring()).unwrap().to_string(), "-x");
        assert_eq!(
            parse_term("-(x * y)", &ring()).unwrap().to_string(),
            "-(x * y)"
        );
    }

    #[test]
    fn parenthesization_tracks_associativity() {
        assert_eq!(
            parse_term("x - (y - z)", &ring()).unwrap().to_string(),
            "x - (y - z)"
        );
        assert_eq!(
            parse_term("x - y - z", &ring()).unwrap().to_string(),
            "x - y - z"
        );
        assert_eq!(
            parse_term("x * (y + z)", &ring()).unwrap().to_string(),
            "x * (y + z)"
        );
        assert_eq!(
            parse_term("x * (y * z)", &ring()).unwrap().to_string(),
            "x * (y * z)"
        );
    }

    #[test]
    fn quantified_left_operands_keep_their_parentheses() {
        let f = parse_formula("(forall z. z = 0) -> 1 = 0", &ring()).unwrap();
        assert_eq!(f.to_string(), "((forall z. (z = 0)) -> 1 = 0)");
        round_trip_formula("(forall z. z = 0) -> 1 = 0");
        round_trip_formula("(exists x. x = 1) & (forall y. y = y)");
    }

    #[test]
    fn formulas_round_trip() {
        for src in [
            "exists x. x*x + 1 = 0",
            "forall x. exists y. x + y = 0",
            "x != 0 -> exists y. x * y = 1",
            "!(x = 0 | y = 0)",
            "!!(x = 0)",
            "exists x. (x = 0 & x = 1)",
            "forall a. forall b. exists x. x*x + a*x + b = 0",
            "x + 2 = 0 & !(y = 1) | z != 4",
            "-x^2 + 3*x - 2 = 0",
            "forall x. (x = 0 -> x = 1 -> x = 0 - 1)",
            "exists x. exists y. x = y",
        ] {
            round_trip_formula(src);
        }
    }

    #[test]
    fn terms_round_trip() {
        for src in [
            "x + y * z + w",
            "x^3 - 2*x + 1",
            "-(x + y)",
            "3 * x - -y",
            "(x + 1) * (x + 2)",
        ] {
            let t = parse_term(src, &ring()).unwrap();
            let printed = t.to_string();
            let reparsed = parse_term(&printed, &ring()).unwrap();
            assert_eq!(t, reparsed, "round trip changed `{src}` via `{printed}`");
        }
    }

    #[test]
    fn relation_formulas_print_and_round_trip() {
        let sig = Signature::new(vec![("f", 1)], vec![("R", 2)], vec!["c"]).unwrap();
        let f = parse_formula("R(f(x), c) & !R(c, c)", &sig).unwrap();
        let printed = f.to_string();
        assert_eq!(printed, "(R(f(x), c) & !R(c, c))");
        assert_eq!(parse_formula(&printed, &sig).unwrap(), f);
    }
}
