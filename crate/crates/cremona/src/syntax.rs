//! Text syntax for tuples of rational functions and for group words.
//!
//! Tuples look like `[1/x, 1/y] over GF(5)`; coordinates are arithmetic
//! expressions in the variables `x, y, z` (aliases for `t1, t2, t3`) or
//! `t1..td`, with integer literals, `+ - * /`, and `^` with nonnegative
//! integer exponents. Precedence is the usual one: `^`, then unary minus,
//! then `* /`, then `+ -`. Words look like `a^3*B` or `[a,b]` where an
//! uppercase single letter abbreviates the inverse of the lowercase
//! generator and `[u,v]` expands to `u v u^-1 v^-1`.
//!
//! Rendering is canonical (terms in descending graded lex order) and
//! parsing a rendered value reproduces it exactly.

use num_bigint::BigInt;

use crate::birat::BirationalTuple;
use crate::error::{Error, Result, Span};
use crate::field::FieldSpec;
use crate::ratfun::RationalFunction;

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Over,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

#[derive(Debug, Clone)]
struct SpannedTok {
    tok: Tok,
    span: Span,
}

fn lex(src: &str) -> Result<Vec<SpannedTok>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => {
                i += 1;
                Tok::Plus
            }
            '-' => {
                i += 1;
                Tok::Minus
            }
            '*' => {
                i += 1;
                Tok::Star
            }
            '/' => {
                i += 1;
                Tok::Slash
            }
            '^' => {
                i += 1;
                Tok::Caret
            }
            '(' => {
                i += 1;
                Tok::LParen
            }
            ')' => {
                i += 1;
                Tok::RParen
            }
            '[' => {
                i += 1;
                Tok::LBracket
            }
            ']' => {
                i += 1;
                Tok::RBracket
            }
            ',' => {
                i += 1;
                Tok::Comma
            }
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let text = &src[start..i];
                Tok::Num(text.parse::<BigInt>().expect("digits"))
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                let text = &src[start..i];
                if text == "over" {
                    Tok::Over
                } else {
                    Tok::Ident(text.to_string())
                }
            }
            other => {
                return Err(Error::Syntax {
                    span: Span::new(start, start + other.len_utf8()),
                    message: format!("unexpected character '{other}'"),
                })
            }
        };
        out.push(SpannedTok {
            tok,
            span: Span::new(start, i),
        });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Expression AST (phase one; variables are resolved after the coordinate
// count is known)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
enum Ast {
    Num(BigInt),
    Var(String, Span),
    Neg(Box<Ast>),
    Pow(Box<Ast>, u32),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>, Span),
}

struct Parser<'a> {
    toks: &'a [SpannedTok],
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn new(toks: &'a [SpannedTok], end: usize) -> Self {
        Parser { toks, pos: 0, end }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> Span {
        self.toks
            .get(self.pos)
            .map(|t| t.span)
            .unwrap_or(Span::new(self.end, self.end))
    }

    fn bump(&mut self) -> Option<&'a SpannedTok> {
        let t = self.toks.get(self.pos);
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<Span> {
        match self.toks.get(self.pos) {
            Some(t) if &t.tok == want => {
                self.pos += 1;
                Ok(t.span)
            }
            _ => Err(Error::Syntax {
                span: self.here(),
                message: format!("expected {what}"),
            }),
        }
    }

    fn parse_expr(&mut self) -> Result<Ast> {
        let mut lhs = self.parse_term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.parse_term()?;
                    lhs = Ast::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let rhs = self.parse_term()?;
                    lhs = Ast::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_term(&mut self) -> Result<Ast> {
        let mut lhs = self.parse_factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let rhs = self.parse_factor()?;
                    lhs = Ast::Mul(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Slash) => {
                    let span = self.here();
                    self.bump();
                    let rhs = self.parse_factor()?;
                    lhs = Ast::Div(Box::new(lhs), Box::new(rhs), span);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_factor(&mut self) -> Result<Ast> {
        if let Some(Tok::Minus) = self.peek() {
            self.bump();
            let inner = self.parse_factor()?;
            return Ok(Ast::Neg(Box::new(inner)));
        }
        let base = self.parse_base()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let span = self.here();
            match self.bump() {
                Some(SpannedTok {
                    tok: Tok::Num(n), ..
                }) => {
                    let e: u32 = n.try_into().map_err(|_| Error::Syntax {
                        span,
                        message: "exponent too large".into(),
                    })?;
                    return Ok(Ast::Pow(Box::new(base), e));
                }
                _ => {
                    return Err(Error::Syntax {
                        span,
                        message: "expected a nonnegative integer exponent".into(),
                    })
                }
            }
        }
        Ok(base)
    }

    fn parse_base(&mut self) -> Result<Ast> {
        let span = self.here();
        match self.bump().map(|t| t.tok.clone()) {
            Some(Tok::Num(n)) => Ok(Ast::Num(n)),
            Some(Tok::Ident(name)) => Ok(Ast::Var(name, span)),
            Some(Tok::LParen) => {
                let inner = self.parse_expr()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(inner)
            }
            _ => Err(Error::Syntax {
                span,
                message: "expected a number, variable, or parenthesized expression".into(),
            }),
        }
    }
}

/// Resolve a variable name against the declared dimension. `x, y, z` alias
/// `t1, t2, t3`; `tk` addresses coordinate k.
fn resolve_var(name: &str, span: Span, d: usize) -> Result<usize> {
    let idx = match name {
        "x" => Some(0),
        "y" => Some(1),
        "z" => Some(2),
        _ => {
            if let Some(rest) = name.strip_prefix('t') {
                match rest.parse::<usize>() {
                    Ok(k) if k >= 1 => Some(k - 1),
                    _ => None,
                }
            } else {
                None
            }
        }
    };
    match idx {
        Some(i) if i < d => Ok(i),
        Some(i) => Err(Error::Arity {
            span,
            variable: name.to_string(),
            needed: i + 1,
            declared: d,
        }),
        None => Err(Error::Syntax {
            span,
            message: format!("unknown variable '{name}'"),
        }),
    }
}

fn lower(ast: &Ast, d: usize, field: &FieldSpec) -> Result<RationalFunction> {
    match ast {
        Ast::Num(n) => Ok(RationalFunction::constant(d, field.from_int(n))),
        Ast::Var(name, span) => {
            let i = resolve_var(name, *span, d)?;
            Ok(RationalFunction::var(d, i, field.clone()))
        }
        Ast::Neg(inner) => Ok(lower(inner, d, field)?.neg()),
        Ast::Pow(inner, e) => Ok(lower(inner, d, field)?.pow(*e)),
        Ast::Add(a, b) => lower(a, d, field)?.add(&lower(b, d, field)?),
        Ast::Sub(a, b) => lower(a, d, field)?.sub(&lower(b, d, field)?),
        Ast::Mul(a, b) => lower(a, d, field)?.mul(&lower(b, d, field)?),
        Ast::Div(a, b, span) => {
            let denom = lower(b, d, field)?;
            if denom.is_zero() {
                return Err(Error::DomainError {
                    span: *span,
                    message: format!("division by zero in {field}"),
                });
            }
            lower(a, d, field)?.div(&denom)
        }
    }
}

fn parse_field(p: &mut Parser<'_>) -> Result<FieldSpec> {
    let span = p.here();
    match p.bump().map(|t| t.tok.clone()) {
        Some(Tok::Ident(name)) if name == "QQ" => Ok(FieldSpec::Rational),
        Some(Tok::Ident(name)) if name == "GF" => {
            p.expect(&Tok::LParen, "'('")?;
            let pspan = p.here();
            let prime: u64 = match p.bump().map(|t| t.tok.clone()) {
                Some(Tok::Num(n)) => n.try_into().map_err(|_| Error::DomainError {
                    span: pspan,
                    message: "field characteristic too large".into(),
                })?,
                _ => {
                    return Err(Error::Syntax {
                        span: pspan,
                        message: "expected a prime".into(),
                    })
                }
            };
            let mut degree = 1u32;
            if let Some(Tok::Caret) = p.peek() {
                p.bump();
                let mspan = p.here();
                degree = match p.bump().map(|t| t.tok.clone()) {
                    Some(Tok::Num(n)) => n.try_into().map_err(|_| Error::Syntax {
                        span: mspan,
                        message: "extension degree too large".into(),
                    })?,
                    _ => {
                        return Err(Error::Syntax {
                            span: mspan,
                            message: "expected an extension degree".into(),
                        })
                    }
                };
                if degree == 0 {
                    return Err(Error::DomainError {
                        span: mspan,
                        message: "extension degree must be positive".into(),
                    });
                }
            }
            p.expect(&Tok::RParen, "')'")?;
            FieldSpec::finite(prime, degree).map_err(|e| match e {
                Error::NotPrime(n) => Error::DomainError {
                    span: pspan,
                    message: format!("{n} is not prime"),
                },
                other => other,
            })
        }
        _ => Err(Error::Syntax {
            span,
            message: "expected a field: QQ or GF(p) or GF(p^m)".into(),
        }),
    }
}

/// Parse a full tuple declaration `[e1, ..., ed] over FIELD`. The coordinate
/// count fixes the dimension; variables outside it are arity errors.
pub fn parse_map_expr(src: &str) -> Result<BirationalTuple> {
    let toks = lex(src)?;
    let mut p = Parser::new(&toks, src.len());
    p.expect(&Tok::LBracket, "'['")?;
    let mut exprs = vec![p.parse_expr()?];
    while let Some(Tok::Comma) = p.peek() {
        p.bump();
        exprs.push(p.parse_expr()?);
    }
    p.expect(&Tok::RBracket, "']'")?;
    p.expect(&Tok::Over, "'over'")?;
    let field = parse_field(&mut p)?;
    if p.peek().is_some() {
        return Err(Error::Syntax {
            span: p.here(),
            message: "unexpected trailing input".into(),
        });
    }
    let d = exprs.len();
    let coords = exprs
        .iter()
        .map(|e| lower(e, d, &field))
        .collect::<Result<Vec<_>>>()?;
    BirationalTuple::new(coords)
}

/// Canonical text for a tuple, including its field declaration.
pub fn render_tuple(t: &BirationalTuple) -> String {
    format!("{} over {}", t, t.domain())
}

// ---------------------------------------------------------------------------
// Words
// ---------------------------------------------------------------------------

/// One letter of a word: generator index plus inversion flag.
pub type Letter = (usize, bool);

fn resolve_name(name: &str, span: Span, names: &[String]) -> Result<Letter> {
    if let Some(i) = names.iter().position(|n| n == name) {
        return Ok((i, false));
    }
    // single-token uppercase abbreviation for the inverse
    if name.chars().all(|c| c.is_ascii_uppercase()) {
        let lower = name.to_ascii_lowercase();
        if let Some(i) = names.iter().position(|n| n == &lower) {
            return Ok((i, true));
        }
    }
    Err(Error::UnknownGenerator {
        name: name.to_string(),
        span,
    })
}

fn invert_letters(letters: &[Letter]) -> Vec<Letter> {
    letters.iter().rev().map(|&(i, inv)| (i, !inv)).collect()
}

fn parse_wseq(p: &mut Parser<'_>, names: &[String], out: &mut Vec<Letter>) -> Result<()> {
    let mut any = false;
    loop {
        match p.peek() {
            Some(Tok::Star) if any => {
                p.bump();
                continue;
            }
            Some(Tok::Ident(_)) => {
                let span = p.here();
                let name = match p.bump().map(|t| t.tok.clone()) {
                    Some(Tok::Ident(n)) => n,
                    _ => unreachable!(),
                };
                let (idx, inv) = resolve_name(&name, span, names)?;
                let mut exp: i64 = 1;
                if let Some(Tok::Caret) = p.peek() {
                    p.bump();
                    let neg = if let Some(Tok::Minus) = p.peek() {
                        p.bump();
                        true
                    } else {
                        false
                    };
                    let espan = p.here();
                    let mag: i64 = match p.bump().map(|t| t.tok.clone()) {
                        Some(Tok::Num(n)) => n.try_into().map_err(|_| Error::Syntax {
                            span: espan,
                            message: "exponent too large".into(),
                        })?,
                        _ => {
                            return Err(Error::Syntax {
                                span: espan,
                                message: "expected an integer exponent".into(),
                            })
                        }
                    };
                    exp = if neg { -mag } else { mag };
                }
                let flip = exp < 0;
                for _ in 0..exp.unsigned_abs() {
                    out.push((idx, inv ^ flip));
                }
                any = true;
            }
            Some(Tok::LBracket) => {
                p.bump();
                let mut w1 = Vec::new();
                parse_wseq(p, names, &mut w1)?;
                p.expect(&Tok::Comma, "','")?;
                let mut w2 = Vec::new();
                parse_wseq(p, names, &mut w2)?;
                p.expect(&Tok::RBracket, "']'")?;
                // [u, v] = u v u^-1 v^-1
                out.extend_from_slice(&w1);
                out.extend_from_slice(&w2);
                out.extend(invert_letters(&w1));
                out.extend(invert_letters(&w2));
                any = true;
            }
            _ => {
                if !any {
                    return Err(Error::Syntax {
                        span: p.here(),
                        message: "expected a generator name or '['".into(),
                    });
                }
                return Ok(());
            }
        }
    }
}

/// Parse a word over the given generator names into raw letters (not yet
/// freely reduced).
pub fn parse_word_letters(src: &str, names: &[String]) -> Result<Vec<Letter>> {
    let toks = lex(src)?;
    let mut p = Parser::new(&toks, src.len());
    let mut out = Vec::new();
    parse_wseq(&mut p, names, &mut out)?;
    if p.peek().is_some() {
        return Err(Error::Syntax {
            span: p.here(),
            message: "unexpected trailing input".into(),
        });
    }
    Ok(out)
}
