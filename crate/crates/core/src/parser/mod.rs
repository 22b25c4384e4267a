//! Text front-end for formulas.
//!
//! ```text
//! formula  := binary [ "U" interval binary ]
//! binary   := conj { ("||" | "or") conj }
//! conj     := unary { ("&&" | "and") unary }
//! unary    := ("!" | "not") unary | temporal
//! temporal := ("F" | "G") interval unary
//!           | "C" interval "^" tau unary
//!           | primary
//! primary  := "(" formula ")" | "true" | affine cmp signed-number
//! ```
//!
//! `F`, `G`, `C` and `U` are operators only when followed by `[`; otherwise
//! they are ordinary variable names. See `docs/grammar.md` for the full
//! reference.

mod lexer;

use std::fmt;

use thiserror::Error;

use crate::formula::{AffineExpr, Formula, Interval, Predicate, Term};
use lexer::{tokenize, Tok, Token};

/// Byte offsets `start..end` into the parsed text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    pub fn new(start: usize, end: usize) -> Self {
        assert!(start <= end);
        SourceSpan { start, end }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{message} at {span}{}", expected_suffix(.expected))]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
    pub expected: Vec<String>,
}

fn expected_suffix(expected: &[String]) -> String {
    if expected.is_empty() {
        String::new()
    } else {
        format!(" (expected {})", expected.join(", "))
    }
}

impl ParseError {
    fn new(span: SourceSpan, message: String, expected: Vec<String>) -> Self {
        ParseError {
            span,
            message,
            expected,
        }
    }

    /// Renders the error with the offending source line and a caret marker.
    pub fn render(&self, text: &str) -> String {
        let line_start = text[..self.span.start].rfind('\n').map_or(0, |i| i + 1);
        let line_end = text[self.span.start..]
            .find('\n')
            .map_or(text.len(), |i| self.span.start + i);
        let col = text[line_start..self.span.start].chars().count();
        let width = text[self.span.start..self.span.end.min(line_end)]
            .chars()
            .count()
            .max(1);
        format!(
            "{self}\n  {}\n  {}{}",
            &text[line_start..line_end],
            " ".repeat(col),
            "^".repeat(width)
        )
    }
}

pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
    };
    let f = p.formula()?;
    p.expect(&Tok::Eof, "end of input")?;
    Ok(f)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, ahead: usize) -> &Tok {
        let i = (self.pos + ahead).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        ParseError::new(
            self.span(),
            format!("unexpected {}", self.peek().describe()),
            expected.iter().map(|s| s.to_string()).collect(),
        )
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> Result<Token, ParseError> {
        if self.peek() == tok {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&[what]))
        }
    }

    fn at_word(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == word)
    }

    /// `F`, `G`, `C` or `U` immediately followed by `[`.
    fn at_operator(&self, word: &str) -> bool {
        self.at_word(word) && *self.peek_at(1) == Tok::LBracket
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.binary()?;
        if !self.at_operator("U") {
            return Ok(lhs);
        }
        self.bump();
        let i = self.interval()?;
        let rhs = self.binary()?;
        if self.at_operator("U") {
            return Err(ParseError::new(
                self.span(),
                "chained `U` needs parentheses".into(),
                vec![],
            ));
        }
        Ok(Formula::until(i, lhs, rhs))
    }

    fn binary(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.conj()?;
        while matches!(self.peek(), Tok::OrOr) || self.at_word("or") {
            self.bump();
            f = Formula::or(f, self.conj()?);
        }
        Ok(f)
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.unary()?;
        while matches!(self.peek(), Tok::AndAnd) || self.at_word("and") {
            self.bump();
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if matches!(self.peek(), Tok::Bang) || self.at_word("not") {
            self.bump();
            return Ok(Formula::not(self.unary()?));
        }
        if self.at_operator("F") || self.at_operator("G") {
            let eventually = self.at_word("F");
            self.bump();
            let i = self.interval()?;
            let a = self.unary()?;
            return Ok(if eventually {
                Formula::eventually(i, a)
            } else {
                Formula::always(i, a)
            });
        }
        if self.at_operator("C") {
            self.bump();
            let i = self.interval()?;
            self.expect(&Tok::Caret, "`^`")?;
            let tau = self.tau()?;
            let a = self.unary()?;
            return Ok(Formula::cumulative(i, tau, a));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        if *self.peek() == Tok::LParen {
            self.bump();
            let f = self.formula()?;
            self.expect(&Tok::RParen, "`)`")?;
            return Ok(f);
        }
        if self.at_word("true") {
            self.bump();
            return Ok(Formula::True);
        }
        match self.peek() {
            Tok::Num(_) | Tok::Ident(_) | Tok::Minus | Tok::Plus => self.predicate(),
            _ => {
                Err(self.unexpected(&["predicate", "`(`", "`!`", "`F[`", "`G[`", "`C[`", "`true`"]))
            }
        }
    }

    fn predicate(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.affine()?;
        let cmp = match self.peek() {
            Tok::Cmp(c) => *c,
            _ => return Err(self.unexpected(&["`<`", "`<=`", "`>`", "`>=`"])),
        };
        self.bump();
        let rhs = self.signed_number()?;
        Ok(Formula::atom(Predicate::new(lhs, cmp, rhs)))
    }

    fn affine(&mut self) -> Result<AffineExpr, ParseError> {
        let mut terms = vec![self.term(false)?];
        loop {
            let negative = match self.peek() {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => break,
            };
            self.bump();
            terms.push(self.term(negative)?);
        }
        Ok(AffineExpr { terms })
    }

    /// `[sign] number [* ident] | [sign] ident`.
    fn term(&mut self, mut negative: bool) -> Result<Term, ParseError> {
        while matches!(self.peek(), Tok::Minus | Tok::Plus) {
            negative ^= *self.peek() == Tok::Minus;
            self.bump();
        }
        let sign = |v: f64| if negative { -v } else { v };
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                if *self.peek() == Tok::Star {
                    self.bump();
                    let var = self.variable()?;
                    Ok(Term {
                        coef: sign(v),
                        var: Some(var),
                    })
                } else {
                    Ok(Term {
                        coef: sign(v),
                        var: None,
                    })
                }
            }
            Tok::Ident(_) => Ok(Term {
                coef: sign(1.0),
                var: Some(self.variable()?),
            }),
            _ => Err(self.unexpected(&["number", "variable"])),
        }
    }

    fn variable(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_reserved(&s) && *self.peek_at(1) != Tok::LBracket => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected(&["variable"])),
        }
    }

    fn signed_number(&mut self) -> Result<f64, ParseError> {
        let mut negative = false;
        while matches!(self.peek(), Tok::Minus | Tok::Plus) {
            negative ^= *self.peek() == Tok::Minus;
            self.bump();
        }
        match *self.peek() {
            Tok::Num(v) => {
                self.bump();
                Ok(if negative { -v } else { v })
            }
            _ => Err(self.unexpected(&["number"])),
        }
    }

    fn interval(&mut self) -> Result<Interval, ParseError> {
        let open = self.expect(&Tok::LBracket, "`[`")?;
        let lo = self.signed_number()?;
        self.expect(&Tok::Comma, "`,`")?;
        let hi = self.signed_number()?;
        let close = self.expect(&Tok::RBracket, "`]`")?;
        let span = SourceSpan::new(open.span.start, close.span.end);
        if lo < 0.0 {
            return Err(ParseError::new(
                span,
                format!("interval bound {lo} is negative"),
                vec![],
            ));
        }
        if lo > hi {
            return Err(ParseError::new(
                span,
                format!("interval lower bound {lo} exceeds upper bound {hi}"),
                vec![],
            ));
        }
        Ok(Interval::new(lo, hi))
    }

    /// A literal, or a parenthesized arithmetic expression over literals.
    fn tau(&mut self) -> Result<f64, ParseError> {
        let start = self.span();
        let v = match *self.peek() {
            Tok::Num(v) => {
                self.bump();
                v
            }
            Tok::LParen => {
                self.bump();
                let v = self.arith_sum()?;
                self.expect(&Tok::RParen, "`)`")?;
                v
            }
            _ => return Err(self.unexpected(&["number", "`(`"])),
        };
        if !v.is_finite() {
            return Err(ParseError::new(
                start,
                "threshold is not finite".into(),
                vec![],
            ));
        }
        Ok(v)
    }

    fn arith_sum(&mut self) -> Result<f64, ParseError> {
        let mut v = self.arith_product()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    v += self.arith_product()?;
                }
                Tok::Minus => {
                    self.bump();
                    v -= self.arith_product()?;
                }
                _ => return Ok(v),
            }
        }
    }

    fn arith_product(&mut self) -> Result<f64, ParseError> {
        let mut v = self.arith_atom()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    v *= self.arith_atom()?;
                }
                Tok::Slash => {
                    self.bump();
                    v /= self.arith_atom()?;
                }
                _ => return Ok(v),
            }
        }
    }

    fn arith_atom(&mut self) -> Result<f64, ParseError> {
        match *self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(-self.arith_atom()?)
            }
            Tok::Num(v) => {
                self.bump();
                Ok(v)
            }
            Tok::LParen => {
                self.bump();
                let v = self.arith_sum()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(v)
            }
            _ => Err(self.unexpected(&["number", "`(`"])),
        }
    }
}

fn is_reserved(word: &str) -> bool {
    matches!(word, "not" | "and" | "or" | "true")
}
