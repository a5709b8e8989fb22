//! Recursive-descent parsers for the ring and Boolean grammars.
//!
//! The grammars are ambiguous at `(`: a parenthesis may open a formula or a
//! term. The parser tries the formula reading first and backtracks to the
//! atom reading. Errors report the furthest position reached together with
//! every token that would have been accepted there.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::{Atom, BoolAtom, BoolFormula, BoolTerm, Formula, RingAtom, RingFormula, RingTerm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub found: String,
    pub expected: Vec<String>,
    pub message: Option<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at {}:{}", self.line, self.column)?;
        if let Some(m) = &self.message {
            return write!(f, ": {m}");
        }
        write!(f, ": found {}", self.found)?;
        if !self.expected.is_empty() {
            write!(f, ", expected one of {}", self.expected.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(String),
    LParen,
    RParen,
    Dot,
    Eq,
    Leq,
    Plus,
    Star,
    Minus,
    Tilde,
    Amp,
    Bar,
    Arrow,
    Bang,
    Caret,
    Backslash,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Number(s) => write!(f, "'{s}'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::Dot => f.write_str("'.'"),
            Tok::Eq => f.write_str("'='"),
            Tok::Leq => f.write_str("'<='"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Tilde => f.write_str("'~'"),
            Tok::Amp => f.write_str("'&'"),
            Tok::Bar => f.write_str("'|'"),
            Tok::Arrow => f.write_str("'->'"),
            Tok::Bang => f.write_str("'!'"),
            Tok::Caret => f.write_str("'^'"),
            Tok::Backslash => f.write_str("'\\'"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let (start_line, start_col) = (line, col);
        let (tok, len) = if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i + 1;
            while j < chars.len()
                && (chars[j].is_ascii_alphanumeric() || chars[j] == '_' || chars[j] == '\'')
            {
                j += 1;
            }
            (Tok::Ident(chars[i..j].iter().collect()), j - i)
        } else if c.is_ascii_digit() {
            let mut j = i + 1;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            (Tok::Number(chars[i..j].iter().collect()), j - i)
        } else {
            let next = chars.get(i + 1).copied();
            match (c, next) {
                ('-', Some('>')) => (Tok::Arrow, 2),
                ('<', Some('=')) => (Tok::Leq, 2),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                ('.', _) => (Tok::Dot, 1),
                ('=', _) => (Tok::Eq, 1),
                ('+', _) => (Tok::Plus, 1),
                ('*', _) => (Tok::Star, 1),
                ('-', _) => (Tok::Minus, 1),
                ('~', _) => (Tok::Tilde, 1),
                ('&', _) => (Tok::Amp, 1),
                ('|', _) => (Tok::Bar, 1),
                ('!', _) => (Tok::Bang, 1),
                ('^', _) => (Tok::Caret, 1),
                ('\\', _) => (Tok::Backslash, 1),
                _ => {
                    return Err(ParseError {
                        line,
                        column: col,
                        found: format!("'{c}'"),
                        expected: Vec::new(),
                        message: Some(format!("unexpected character '{c}'")),
                    })
                }
            }
        };
        out.push(Spanned { tok, line: start_line, column: start_col });
        i += len;
        col += len;
    }
    out.push(Spanned { tok: Tok::Eof, line, column: col });
    Ok(out)
}

/// Failure marker; details live in the parser's error state.
struct Fail;

type PResult<T> = Result<T, Fail>;

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    furthest: usize,
    expected: BTreeSet<String>,
    fatal: Option<ParseError>,
    boolean: bool,
}

impl Parser {
    fn new(text: &str, boolean: bool) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            furthest: 0,
            expected: BTreeSet::new(),
            fatal: None,
            boolean,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn fail<T>(&mut self, expected: &str) -> PResult<T> {
        if self.pos > self.furthest {
            self.furthest = self.pos;
            self.expected.clear();
        }
        if self.pos == self.furthest {
            self.expected.insert(expected.to_string());
        }
        Err(Fail)
    }

    fn fatal<T>(&mut self, message: String) -> PResult<T> {
        let t = &self.toks[self.pos];
        self.fatal = Some(ParseError {
            line: t.line,
            column: t.column,
            found: t.tok.to_string(),
            expected: Vec::new(),
            message: Some(message),
        });
        Err(Fail)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            self.fail(&tok.to_string())
        }
    }

    fn error(&self) -> ParseError {
        if let Some(e) = &self.fatal {
            return e.clone();
        }
        let t = &self.toks[self.furthest];
        ParseError {
            line: t.line,
            column: t.column,
            found: t.tok.to_string(),
            expected: self.expected.iter().cloned().collect(),
            message: None,
        }
    }

    fn is_reserved(&self, name: &str) -> bool {
        name == "E" || name == "A" || (self.boolean && name == "v")
    }

    fn variable(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(name) if !self.is_reserved(&name) => {
                self.pos += 1;
                Ok(name)
            }
            _ => self.fail("identifier"),
        }
    }

    // Formula layer, shared by both languages.

    fn formula<G: Grammar>(&mut self) -> PResult<Formula<G::Atom>> {
        let left = self.disjunction::<G>()?;
        if self.eat(&Tok::Arrow) {
            let right = self.formula::<G>()?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn disjunction<G: Grammar>(&mut self) -> PResult<Formula<G::Atom>> {
        let mut f = self.conjunction::<G>()?;
        while self.eat(&Tok::Bar) {
            f = Formula::or(f, self.conjunction::<G>()?);
        }
        Ok(f)
    }

    fn conjunction<G: Grammar>(&mut self) -> PResult<Formula<G::Atom>> {
        let mut f = self.unary::<G>()?;
        while self.eat(&Tok::Amp) {
            f = Formula::and(f, self.unary::<G>()?);
        }
        Ok(f)
    }

    fn unary<G: Grammar>(&mut self) -> PResult<Formula<G::Atom>> {
        if self.eat(&Tok::Tilde) {
            return Ok(Formula::not(self.unary::<G>()?));
        }
        if let Tok::Ident(q) = self.peek().clone() {
            if q == "E" || q == "A" {
                self.pos += 1;
                let var = self.variable()?;
                self.expect(Tok::Dot)?;
                let body = self.formula::<G>()?;
                return Ok(if q == "E" {
                    Formula::exists(var, body)
                } else {
                    Formula::forall(var, body)
                });
            }
        }
        if *self.peek() == Tok::LParen {
            let save = self.pos;
            self.pos += 1;
            if let Ok(f) = self.formula::<G>() {
                if self.eat(&Tok::RParen) {
                    return Ok(f);
                }
                let _ = self.fail::<()>("')'");
            }
            if self.fatal.is_some() {
                return Err(Fail);
            }
            self.pos = save;
        }
        Ok(Formula::Atom(G::atom(self)?))
    }

    // Ring terms.

    fn ring_sum(&mut self) -> PResult<RingTerm> {
        let mut t = self.ring_product()?;
        while self.eat(&Tok::Plus) {
            t = RingTerm::add(t, self.ring_product()?);
        }
        Ok(t)
    }

    fn ring_product(&mut self) -> PResult<RingTerm> {
        let mut t = self.ring_unary()?;
        while self.eat(&Tok::Star) {
            t = RingTerm::mul(t, self.ring_unary()?);
        }
        Ok(t)
    }

    fn ring_unary(&mut self) -> PResult<RingTerm> {
        if self.eat(&Tok::Minus) {
            return Ok(RingTerm::neg(self.ring_unary()?));
        }
        match self.peek().clone() {
            Tok::Number(n) if n == "0" => {
                self.pos += 1;
                Ok(RingTerm::Zero)
            }
            Tok::Number(n) if n == "1" => {
                self.pos += 1;
                Ok(RingTerm::One)
            }
            Tok::LParen => {
                self.pos += 1;
                let t = self.ring_sum()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(_) => Ok(RingTerm::Var(self.variable()?)),
            _ => {
                let _ = self.fail::<()>("'0'");
                let _ = self.fail::<()>("'1'");
                let _ = self.fail::<()>("'('");
                let _ = self.fail::<()>("'-'");
                self.fail("identifier")
            }
        }
    }

    // Boolean terms.

    fn bool_join(&mut self) -> PResult<BoolTerm> {
        let mut t = self.bool_diff()?;
        while matches!(self.peek(), Tok::Ident(v) if v == "v") {
            self.pos += 1;
            t = BoolTerm::join(t, self.bool_diff()?);
        }
        Ok(t)
    }

    fn bool_diff(&mut self) -> PResult<BoolTerm> {
        let mut t = self.bool_meet()?;
        while self.eat(&Tok::Backslash) {
            t = BoolTerm::diff(t, self.bool_meet()?);
        }
        Ok(t)
    }

    fn bool_meet(&mut self) -> PResult<BoolTerm> {
        let mut t = self.bool_unary()?;
        while self.eat(&Tok::Caret) {
            t = BoolTerm::meet(t, self.bool_unary()?);
        }
        Ok(t)
    }

    fn bool_unary(&mut self) -> PResult<BoolTerm> {
        if self.eat(&Tok::Bang) {
            return Ok(BoolTerm::complement(self.bool_unary()?));
        }
        match self.peek().clone() {
            Tok::Number(n) if n == "0" => {
                self.pos += 1;
                Ok(BoolTerm::Zero)
            }
            Tok::Number(n) if n == "1" => {
                self.pos += 1;
                Ok(BoolTerm::One)
            }
            Tok::LParen => {
                self.pos += 1;
                let t = self.bool_join()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(_) => Ok(BoolTerm::Var(self.variable()?)),
            _ => {
                let _ = self.fail::<()>("'0'");
                let _ = self.fail::<()>("'1'");
                let _ = self.fail::<()>("'('");
                let _ = self.fail::<()>("'!'");
                self.fail("identifier")
            }
        }
    }

    fn finish<T>(&mut self, r: PResult<T>) -> Result<T, ParseError> {
        match r {
            Ok(v) if *self.peek() == Tok::Eof => Ok(v),
            Ok(_) => {
                let _ = self.fail::<()>("end of input");
                Err(self.error())
            }
            Err(Fail) => Err(self.error()),
        }
    }
}

trait Grammar {
    type Atom: Atom;
    fn atom(p: &mut Parser) -> PResult<Self::Atom>;
}

struct RingGrammar;

impl Grammar for RingGrammar {
    type Atom = RingAtom;

    fn atom(p: &mut Parser) -> PResult<RingAtom> {
        let left = p.ring_sum()?;
        p.expect(Tok::Eq)?;
        let right = p.ring_sum()?;
        Ok(RingAtom::new(left, right))
    }
}

struct BoolGrammar;

impl Grammar for BoolGrammar {
    type Atom = BoolAtom;

    fn atom(p: &mut Parser) -> PResult<BoolAtom> {
        if let (Tok::Ident(name), Tok::LParen) = (p.peek().clone(), p.peek_at(1).clone()) {
            if name == "Fin" {
                p.pos += 2;
                let t = p.bool_join()?;
                p.expect(Tok::RParen)?;
                return Ok(BoolAtom::Fin(t));
            }
            if let Some(digits) = name.strip_prefix('C') {
                if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
                    let n: u32 = match digits.parse() {
                        Ok(n) if n >= 1 => n,
                        _ => return p.fatal(format!("{name}: C_n requires n >= 1")),
                    };
                    p.pos += 2;
                    let t = p.bool_join()?;
                    p.expect(Tok::RParen)?;
                    return Ok(BoolAtom::CountAtLeast(n, t));
                }
            }
        }
        let left = p.bool_join()?;
        if p.eat(&Tok::Eq) {
            return Ok(BoolAtom::Eq(left, p.bool_join()?));
        }
        if p.eat(&Tok::Leq) {
            return Ok(BoolAtom::Leq(left, p.bool_join()?));
        }
        let _ = p.fail::<()>("'='");
        p.fail("'<='")
    }
}

pub fn parse_ring_formula(text: &str) -> Result<RingFormula, ParseError> {
    let mut p = Parser::new(text, false)?;
    let r = p.formula::<RingGrammar>();
    Ok(p.finish(r)?.rename_shadowed())
}

pub fn parse_bool_formula(text: &str) -> Result<BoolFormula, ParseError> {
    let mut p = Parser::new(text, true)?;
    let r = p.formula::<BoolGrammar>();
    Ok(p.finish(r)?.rename_shadowed())
}

pub fn parse_ring_term(text: &str) -> Result<RingTerm, ParseError> {
    let mut p = Parser::new(text, false)?;
    let r = p.ring_sum();
    p.finish(r)
}

pub fn parse_bool_term(text: &str) -> Result<BoolTerm, ParseError> {
    let mut p = Parser::new(text, true)?;
    let r = p.bool_join();
    p.finish(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> RingTerm {
        RingTerm::Var("x".into())
    }

    #[test]
    fn ring_examples() {
        assert_eq!(
            parse_ring_formula("E x. x*x = x").unwrap(),
            RingFormula::exists("x", RingFormula::eq(RingTerm::mul(x(), x()), x()))
        );
        assert_eq!(
            parse_ring_formula("~(0 = 1)").unwrap(),
            RingFormula::not(RingFormula::eq(RingTerm::Zero, RingTerm::One))
        );
    }

    #[test]
    fn missing_dot_is_reported_at_second_variable() {
        let e = parse_ring_formula("E x x").unwrap_err();
        assert_eq!((e.line, e.column), (1, 5));
        assert_eq!(e.found, "'x'");
        assert_eq!(e.expected, vec!["'.'".to_string()]);
    }

    #[test]
    fn quantifier_body_must_be_a_formula() {
        let e = parse_ring_formula("E x. x").unwrap_err();
        assert!(e.expected.contains(&"'='".to_string()), "{e}");
    }

    #[test]
    fn error_positions_are_line_and_column() {
        let e = parse_ring_formula("x = 0 &\n  y +").unwrap_err();
        assert_eq!((e.line, e.column), (2, 6));
    }

    #[test]
    fn bool_examples() {
        let y = BoolTerm::Var("y".into());
        let xv = BoolTerm::Var("x".into());
        assert_eq!(parse_bool_formula("Fin(y)").unwrap(), BoolFormula::fin(y.clone()));
        assert_eq!(
            parse_bool_formula("C2(x ^ !y)").unwrap(),
            BoolFormula::count_at_least(2, BoolTerm::meet(xv, BoolTerm::complement(y)))
        );
        let e = parse_bool_formula("C0(x)").unwrap_err();
        assert!(e.message.unwrap().contains("n >= 1"));
    }

    #[test]
    fn parenthesised_terms_and_formulas() {
        let f = parse_ring_formula("(x + 1)*x = 0 & (x = 1)").unwrap();
        assert_eq!(f.to_string(), "(x + 1)*x = 0 & x = 1");
        let g = parse_bool_formula("(x v y) <= z & ((x) = 0)").unwrap();
        assert_eq!(g.to_string(), "x v y <= z & x = 0");
    }

    #[test]
    fn precedence_and_associativity() {
        let f = parse_ring_formula("~x = 0 & y = 0 | z = 0 -> w = 0 -> v = 0").unwrap();
        assert_eq!(f.to_string(), "((~(x = 0) & y = 0) | z = 0) -> (w = 0 -> v = 0)");
        let g = parse_bool_formula("x v y \\ z ^ !w = 1").unwrap();
        assert_eq!(g.to_string(), "x v y \\ z ^ !w = 1");
        let BoolFormula::Atom(BoolAtom::Eq(t, _)) = g else { panic!() };
        assert!(matches!(t, BoolTerm::Join(..)));
    }

    #[test]
    fn reserved_words_are_not_variables() {
        assert!(parse_ring_formula("E = 0").is_err());
        assert!(parse_bool_formula("v = 0").is_err());
        assert!(parse_ring_formula("v = 0").is_ok());
    }
}
