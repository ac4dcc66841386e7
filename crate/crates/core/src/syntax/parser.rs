//! Token-based recursive-descent parser for terms and formulas.
//!
//! Grammar (binding strength low → high on the formula side):
//!
//! ```text
//! formula := ("exists" | "forall") var "." formula | implication
//! implication := disjunction ("->" implication)?          (right-assoc)
//! disjunction := conjunction ("|" conjunction)*
//! conjunction := unary ("&" unary)*
//! unary := "!" unary | atom | "(" formula ")"
//! atom  := relname "(" term {"," term} ")" | term ("=" | "!=") term
//! term  := factor (("+" | "-") factor)*                    (left-assoc)
//! factor := power ("*" power)*
//! power := base ("^" natural)?
//! base  := "-" power | name | integer | name "(" term {"," term} ")"
//!        | "(" term ")"
//! ```
//!
//! Integer literals and `^` are sugar: `n` becomes the left-associated sum
//! `1 + 1 + ... + 1` (`0` for n = 0) and `t ^ k` becomes the left-associated
//! product of `k` copies of `t` (`1` for k = 0). Unary minus `-t` stands for
//! `0 - t`. All sugar requires the corresponding ring symbols to be present
//! in the signature. `t1 != t2` abbreviates `!(t1 = t2)`.

use super::{Formula, Signature, SyntaxError, Term};

/// Largest accepted integer literal (the desugared sum has this many ones).
pub const MAX_LITERAL: u64 = 4096;
/// Largest accepted exponent in `t ^ k`.
pub const MAX_EXPONENT: u64 = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    LParen,
    RParen,
    Comma,
    Dot,
    Plus,
    Minus,
    Star,
    Caret,
    Eq,
    Neq,
    Amp,
    Pipe,
    Arrow,
    Bang,
    Exists,
    Forall,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(n) => format!("identifier `{n}`"),
            Tok::Int(n) => format!("integer `{n}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Neq => "`!=`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Exists => "`exists`".into(),
            Tok::Forall => "`forall`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, SyntaxError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let pos = i;
        let tok = match c {
            b'(' => {
                i += 1;
                Tok::LParen
            }
            b')' => {
                i += 1;
                Tok::RParen
            }
            b',' => {
                i += 1;
                Tok::Comma
            }
            b'.' => {
                i += 1;
                Tok::Dot
            }
            b'+' => {
                i += 1;
                Tok::Plus
            }
            b'*' => {
                i += 1;
                Tok::Star
            }
            b'^' => {
                i += 1;
                Tok::Caret
            }
            b'=' => {
                i += 1;
                Tok::Eq
            }
            b'&' => {
                i += 1;
                Tok::Amp
            }
            b'|' => {
                i += 1;
                Tok::Pipe
            }
            b'-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    i += 2;
                    Tok::Arrow
                } else {
                    i += 1;
                    Tok::Minus
                }
            }
            b'!' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    i += 2;
                    Tok::Neq
                } else {
                    i += 1;
                    Tok::Bang
                }
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let text = &src[start..i];
                let value: u64 = text.parse().map_err(|_| SyntaxError::LiteralTooLarge {
                    pos: start,
                    max: MAX_LITERAL,
                })?;
                if value > MAX_LITERAL {
                    return Err(SyntaxError::LiteralTooLarge { pos: start, max: MAX_LITERAL });
                }
                Tok::Int(value)
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'')
                {
                    i += 1;
                }
                match &src[start..i] {
                    "exists" => Tok::Exists,
                    "forall" => Tok::Forall,
                    name => Tok::Ident(name.to_string()),
                }
            }
            other => {
                return Err(SyntaxError::Parse {
                    pos,
                    message: format!("unexpected character `{}`", other as char),
                })
            }
        };
        toks.push(Token { tok, pos });
    }
    toks.push(Token { tok: Tok::End, pos: src.len() });
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<Token>,
    i: usize,
    sig: &'a Signature,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn pos(&self) -> usize {
        self.toks[self.i].pos
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].tok.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), SyntaxError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(SyntaxError::Parse {
                pos: self.pos(),
                message: format!("expected {}, found {}", want.describe(), self.peek().describe()),
            })
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError::Parse { pos: self.pos(), message: message.into() })
    }

    // ---- formulas ----------------------------------------------------

    fn formula(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek() {
            Tok::Exists | Tok::Forall => {
                let is_exists = matches!(self.peek(), Tok::Exists);
                self.bump();
                let pos = self.pos();
                let name = match self.bump() {
                    Tok::Ident(n) => n,
                    other => {
                        return Err(SyntaxError::Parse {
                            pos,
                            message: format!(
                                "expected a variable after the quantifier, found {}",
                                other.describe()
                            ),
                        })
                    }
                };
                if self.sig.is_declared(&name) {
                    return Err(SyntaxError::Parse {
                        pos,
                        message: format!(
                            "cannot bind `{name}`: it is a declared symbol of the signature"
                        ),
                    });
                }
                self.expect(Tok::Dot)?;
                let body = self.formula()?;
                Ok(if is_exists {
                    Formula::Exists(name, Box::new(body))
                } else {
                    Formula::Forall(name, Box::new(body))
                })
            }
            _ => self.implication(),
        }
    }

    fn implication(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Formula, SyntaxError> {
        let mut f = self.conjunction()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            let rhs = self.conjunction()?;
            f = Formula::or(f, rhs);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula, SyntaxError> {
        let mut f = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            f = Formula::and(f, rhs);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                let g = self.unary()?;
                Ok(Formula::not(g))
            }
            // A quantifier may start a subformula anywhere a unary is
            // expected; its scope extends as far right as possible.
            Tok::Exists | Tok::Forall => self.formula(),
            _ => {
                // Try an atom first; on failure fall back to a
                // parenthesized formula. The more specific atom error is
                // kept when neither alternative applies.
                let save = self.i;
                match self.atom() {
                    Ok(f) => Ok(f),
                    Err(atom_err) => {
                        self.i = save;
                        if *self.peek() == Tok::LParen {
                            let save_paren = self.i;
                            self.bump();
                            match self.formula().and_then(|f| {
                                self.expect(Tok::RParen)?;
                                Ok(f)
                            }) {
                                Ok(f) => Ok(f),
                                Err(_) => {
                                    self.i = save_paren;
                                    Err(atom_err)
                                }
                            }
                        } else {
                            Err(atom_err)
                        }
                    }
                }
            }
        }
    }

    fn atom(&mut self) -> Result<Formula, SyntaxError> {
        // Relation atom?
        if let Tok::Ident(name) = self.peek() {
            if let Some(expected) = self.sig.relation_arity(name) {
                let name = name.clone();
                let pos = self.pos();
                self.bump();
                self.expect(Tok::LParen)?;
                let args = self.term_list()?;
                self.expect(Tok::RParen)?;
                if args.len() != expected {
                    return Err(SyntaxError::ArityMismatch {
                        name,
                        pos,
                        expected,
                        got: args.len(),
                    });
                }
                return Ok(Formula::Rel(name, args));
            }
        }
        let lhs = self.term()?;
        match self.peek() {
            Tok::Eq => {
                self.bump();
                let rhs = self.term()?;
                Ok(Formula::Eq(lhs, rhs))
            }
            Tok::Neq => {
                self.bump();
                let rhs = self.term()?;
                Ok(Formula::not(Formula::Eq(lhs, rhs)))
            }
            other => Err(SyntaxError::Parse {
                pos: self.pos(),
                message: format!("expected `=` or `!=`, found {}", other.describe()),
            }),
        }
    }

    // ---- terms -------------------------------------------------------

    fn term_list(&mut self) -> Result<Vec<Term>, SyntaxError> {
        let mut args = vec![self.term()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.term()?);
        }
        Ok(args)
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        let mut t = self.factor()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    let pos = self.pos();
                    self.bump();
                    let rhs = self.factor()?;
                    t = self.apply_binop("+", pos, t, rhs)?;
                }
                Tok::Minus => {
                    let pos = self.pos();
                    self.bump();
                    let rhs = self.factor()?;
                    t = self.apply_binop("-", pos, t, rhs)?;
                }
                _ => return Ok(t),
            }
        }
    }

    fn factor(&mut self) -> Result<Term, SyntaxError> {
        let mut t = self.power()?;
        while *self.peek() == Tok::Star {
            let pos = self.pos();
            self.bump();
            let rhs = self.power()?;
            t = self.apply_binop("*", pos, t, rhs)?;
        }
        Ok(t)
    }

    fn power(&mut self) -> Result<Term, SyntaxError> {
        let base = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        let pos = self.pos();
        self.bump();
        let exp_pos = self.pos();
        let exp = match self.bump() {
            Tok::Int(n) => n,
            other => {
                return Err(SyntaxError::Parse {
                    pos: exp_pos,
                    message: format!("expected a natural number exponent, found {}", other.describe()),
                })
            }
        };
        if exp > MAX_EXPONENT {
            return Err(SyntaxError::LiteralTooLarge { pos: exp_pos, max: MAX_EXPONENT });
        }
        if exp == 0 {
            return self.constant_symbol("1", pos);
        }
        let mut t = base.clone();
        for _ in 1..exp {
            t = self.apply_binop("*", pos, t, base.clone())?;
        }
        Ok(t)
    }

    fn base(&mut self) -> Result<Term, SyntaxError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Minus => {
                self.bump();
                let sub = self.power()?;
                let zero = self.constant_symbol("0", pos)?;
                self.apply_binop("-", pos, zero, sub)
            }
            Tok::Int(n) => {
                self.bump();
                self.integer_literal(n, pos)
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(name) => {
                self.bump();
                if *self.peek() == Tok::LParen {
                    // Function application in prefix notation.
                    let expected = self.sig.function_arity(&name).ok_or_else(|| {
                        SyntaxError::UnknownSymbol { name: name.clone(), pos }
                    })?;
                    self.bump();
                    let args = self.term_list()?;
                    self.expect(Tok::RParen)?;
                    if args.len() != expected {
                        return Err(SyntaxError::ArityMismatch {
                            name,
                            pos,
                            expected,
                            got: args.len(),
                        });
                    }
                    Ok(Term::Apply(name, args))
                } else if self.sig.has_constant(&name) {
                    Ok(Term::Const(name))
                } else if self.sig.function_arity(&name).is_some() {
                    Err(SyntaxError::Parse {
                        pos,
                        message: format!("function symbol `{name}` requires arguments"),
                    })
                } else if self.sig.relation_arity(&name).is_some() {
                    Err(SyntaxError::Parse {
                        pos,
                        message: format!("relation symbol `{name}` cannot appear inside a term"),
                    })
                } else {
                    Ok(Term::Var(name))
                }
            }
            other => Err(SyntaxError::Parse {
                pos,
                message: format!("expected a term, found {}", other.describe()),
            }),
        }
    }

    /// Desugar the literal `n` into `1 + 1 + ... + 1` (left-associated).
    fn integer_literal(&mut self, n: u64, pos: usize) -> Result<Term, SyntaxError> {
        if n == 0 {
            return self.constant_symbol("0", pos);
        }
        let one = self.constant_symbol("1", pos)?;
        let mut t = one.clone();
        for _ in 1..n {
            t = self.apply_binop("+", pos, t, one.clone())?;
        }
        Ok(t)
    }

    fn constant_symbol(&self, name: &str, pos: usize) -> Result<Term, SyntaxError> {
        if self.sig.has_constant(name) {
            Ok(Term::Const(name.to_string()))
        } else {
            Err(SyntaxError::UnknownSymbol { name: name.to_string(), pos })
        }
    }

    fn apply_binop(
        &self,
        op: &str,
        pos: usize,
        lhs: Term,
        rhs: Term,
    ) -> Result<Term, SyntaxError> {
        if self.sig.function_arity(op) == Some(2) {
            Ok(Term::Apply(op.to_string(), vec![lhs, rhs]))
        } else {
            Err(SyntaxError::UnknownSymbol { name: op.to_string(), pos })
        }
    }
}

/// Parse a formula in the given signature. The whole input must be consumed.
pub fn parse_formula(src: &str, sig: &Signature) -> Result<Formula, SyntaxError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, i: 0, sig };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return p.err(format!("unexpected {} after the formula", p.peek().describe()));
    }
    Ok(f)
}

/// Parse a term in the given signature. The whole input must be consumed.
pub fn parse_term(src: &str, sig: &Signature) -> Result<Term, SyntaxError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, i: 0, sig };
    let t = p.term()?;
    if *p.peek() != Tok::End {
        return p.err(format!("unexpected {} after the term", p.peek().describe()));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Formula as F;

    fn ring() -> Signature {
        Signature::ring()
    }

    fn one() -> Term {
        Term::Const("1".into())
    }

    fn lit(n: u64) -> Term {
        if n == 0 {
            return Term::Const("0".into());
        }
        let mut t = one();
        for _ in 1..n {
            t = Term::Apply("+".into(), vec![t, one()]);
        }
        t
    }

    #[test]
    fn parses_basic_sentence() {
        let f = parse_formula("exists x. x*x + 1 = 0", &ring()).unwrap();
        let xx = Term::Apply("*".into(), vec![Term::var("x"), Term::var("x")]);
        let lhs = Term::Apply("+".into(), vec![xx, one()]);
        let expect = F::exists("x", F::Eq(lhs, Term::Const("0".into())));
        assert_eq!(f, expect);
    }

    #[test]
    fn precedence_and_associativity() {
        // * binds tighter than +; + is left-associative.
        let t = parse_term("x + y * z + w", &ring()).unwrap();
        let yz = Term::Apply("*".into(), vec![Term::var("y"), Term::var("z")]);
        let xyz = Term::Apply("+".into(), vec![Term::var("x"), yz]);
        let expect = Term::Apply("+".into(), vec![xyz, Term::var("w")]);
        assert_eq!(t, expect);
        // -> is right-associative and binds weaker than & and |.
        let f = parse_formula("x = 0 -> y = 0 -> z = 0", &ring()).unwrap();
        match f {
            F::Implies(_, rhs) => assert!(matches!(*rhs, F::Implies(_, _))),
            other => panic!("expected nested implication, got {other:?}"),
        }
        let g = parse_formula("x = 0 & y = 0 | z = 0", &ring()).unwrap();
        assert!(matches!(g, F::Or(_, _)));
    }

    #[test]
    fn literals_desugar_to_sums_of_ones() {
        assert_eq!(parse_term("0", &ring()).unwrap(), lit(0));
        assert_eq!(parse_term("1", &ring()).unwrap(), lit(1));
        assert_eq!(parse_term("5", &ring()).unwrap(), lit(5));
        // 2 = 1 + 1 both as a literal and spelled out.
        assert_eq!(parse_term("2", &ring()).unwrap(), parse_term("1 + 1", &ring()).unwrap());
        assert!(matches!(
            parse_term("5000", &ring()),
            Err(SyntaxError::LiteralTooLarge { .. })
        ));
    }

    #[test]
    fn powers_desugar_to_products() {
        assert_eq!(
            parse_term("x^3", &ring()).unwrap(),
            parse_term("x * x * x", &ring()).unwrap()
        );
        assert_eq!(parse_term("x^1", &ring()).unwrap(), Term::var("x"));
        assert_eq!(parse_term("x^0", &ring()).unwrap(), one());
        // ^ binds tighter than *.
        assert_eq!(
            parse_term("y * x^2", &ring()).unwrap(),
            parse_term("y * (x * x)", &ring()).unwrap()
        );
        assert!(matches!(
            parse_term("x^300", &ring()),
            Err(SyntaxError::LiteralTooLarge { .. })
        ));
    }

    #[test]
    fn unary_minus_desugars_to_subtraction_from_zero() {
        assert_eq!(
            parse_term("-x", &ring()).unwrap(),
            parse_term("0 - x", &ring()).unwrap()
        );
        // -x^2 negates the whole power.
        assert_eq!(
            parse_term("-x^2", &ring()).unwrap(),
            parse_term("0 - (x * x)", &ring()).unwrap()
        );
    }

    #[test]
    fn neq_is_negated_equality() {
        let f = parse_formula("x != 0", &ring()).unwrap();
        assert_eq!(
            f,
            F::not(F::Eq(Term::var("x"), Term::Const("0".into())))
        );
    }

    #[test]
    fn quantifier_scope_extends_right() {
        // exists x. x = 0 & x = 1 scopes the whole conjunction.
        let f = parse_formula("exists x. x = 0 & x = 1", &ring()).unwrap();
        match f {
            F::Exists(_, body) => assert!(matches!(*body, F::And(_, _))),
            other => panic!("expected exists, got {other:?}"),
        }
    }

    #[test]
    fn relations_parse_with_arity_checks() {
        let sig = Signature::new(vec![("f", 1)], vec![("R", 2)], vec!["c"]).unwrap();
        let f = parse_formula("R(f(x), c)", &sig).unwrap();
        assert_eq!(
            f,
            F::Rel(
                "R".into(),
                vec![
                    Term::Apply("f".into(), vec![Term::var("x")]),
                    Term::Const("c".into())
                ]
            )
        );
        assert!(matches!(
            parse_formula("R(x)", &sig),
            Err(SyntaxError::ArityMismatch { name, expected: 2, got: 1, .. }) if name == "R"
        ));
        assert!(matches!(
            parse_formula("S(x)", &sig),
            Err(SyntaxError::Parse { .. }) | Err(SyntaxError::UnknownSymbol { .. })
        ));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_formula("exists x x = 0", &ring()) {
            Err(SyntaxError::Parse { pos, .. }) => assert_eq!(pos, 9),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_formula("x + = 0", &ring()) {
            Err(SyntaxError::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_term("x @ y", &ring()) {
            Err(SyntaxError::Parse { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn trailing_input_is_rejected() {
        assert!(parse_formula("x = 0 )", &ring()).is_err());
        assert!(parse_term("x + y y", &ring()).is_err());
    }

    #[test]
    fn nested_parens_and_negation() {
        let f = parse_formula("!((x = 0))", &ring()).unwrap();
        assert_eq!(f, F::not(F::Eq(Term::var("x"), Term::Const("0".into()))));
        let g = parse_formula("!(x = 0 | y = 0)", &ring()).unwrap();
        assert!(matches!(g, F::Not(_)));
    }

    #[test]
    fn binding_declared_symbols_is_rejected() {
        assert!(parse_formula("exists 0. 0 = 0", &ring()).is_err());
        let sig = Signature::new::<&str>(vec![], vec![], vec!["c"]).unwrap();
        assert!(parse_formula("exists c. c = c", &sig).is_err());
    }

    #[test]
    fn non_ring_signatures_reject_arithmetic_sugar() {
        let sig = Signature::new(vec![], vec![("E", 2)], vec!["a"]).unwrap();
        assert!(matches!(
            parse_formula("x + y = a", &sig),
            Err(SyntaxError::UnknownSymbol { name, .. }) if name == "+"
        ));
        assert!(matches!(
            parse_formula("2 = a", &sig),
            Err(SyntaxError::UnknownSymbol { .. })
        ));
        // Relation atoms still parse fine.
        assert!(parse_formula("E(x, y)", &sig).is_ok());
    }
}
