//! Expression front end: parses `"P ; Q [on (a, b)]"` into a planar map.
//!
//! Grammar (no implicit multiplication, `^` takes a literal nonnegative
//! integer, `/` appears only inside rational literals like `5/2`):
//!
//! ```text
//! input    := expr ';' expr [ 'on' interval ]
//! interval := '(' endpoint ',' endpoint ')'
//! endpoint := ['-'|'+'] (rational | 'inf')
//! expr     := term (('+'|'-') term)*
//! term     := unary ('*' unary)*
//! unary    := '-' unary | power
//! power    := atom ['^' integer]
//! atom     := rational | 'x' | 'y' | '(' expr ')'
//! ```

use std::fmt;

use num_bigint::BigInt;
use ytri_core::bipoly::BiPoly;
use ytri_core::interval::Interval;
use ytri_core::mapalg::PlanarMap;
use ytri_core::rational::Rat;

/// Exponents above this are rejected to keep expansion sizes sane.
const MAX_EXPONENT: u32 = 512;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based column in the input string.
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at column {}: {}", self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Number(BigInt),
    VarX,
    VarY,
    On,
    Inf,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Semicolon,
    Comma,
    End,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Number(n) => format!("number {n}"),
            Token::VarX => "'x'".into(),
            Token::VarY => "'y'".into(),
            Token::On => "'on'".into(),
            Token::Inf => "'inf'".into(),
            Token::Plus => "'+'".into(),
            Token::Minus => "'-'".into(),
            Token::Star => "'*'".into(),
            Token::Slash => "'/'".into(),
            Token::Caret => "'^'".into(),
            Token::LParen => "'('".into(),
            Token::RParen => "')'".into(),
            Token::Semicolon => "';'".into(),
            Token::Comma => "','".into(),
            Token::End => "end of input".into(),
        }
    }
}

struct Lexer {
    tokens: Vec<(Token, usize)>,
    pos: usize,
}

fn tokenize(input: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let col = i + 1;
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
            }
            '+' => {
                tokens.push((Token::Plus, col));
                i += 1;
            }
            '-' => {
                tokens.push((Token::Minus, col));
                i += 1;
            }
            '*' => {
                tokens.push((Token::Star, col));
                i += 1;
            }
            '/' => {
                tokens.push((Token::Slash, col));
                i += 1;
            }
            '^' => {
                tokens.push((Token::Caret, col));
                i += 1;
            }
            '(' => {
                tokens.push((Token::LParen, col));
                i += 1;
            }
            ')' => {
                tokens.push((Token::RParen, col));
                i += 1;
            }
            ';' => {
                tokens.push((Token::Semicolon, col));
                i += 1;
            }
            ',' => {
                tokens.push((Token::Comma, col));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let n = text.parse::<BigInt>().expect("digits parse");
                tokens.push((Token::Number(n), col));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let token = match word.as_str() {
                    "x" => Token::VarX,
                    "y" => Token::VarY,
                    "on" => Token::On,
                    "inf" => Token::Inf,
                    other => {
                        return Err(ParseError {
                            column: col,
                            message: format!(
                                "unknown identifier '{other}'; only x, y, on, inf are allowed"
                            ),
                        })
                    }
                };
                tokens.push((token, col));
            }
            other => {
                return Err(ParseError {
                    column: col,
                    message: format!("unexpected character '{other}'"),
                })
            }
        }
    }
    tokens.push((Token::End, chars.len() + 1));
    Ok(tokens)
}

impl Lexer {
    fn new(input: &str) -> Result<Self, ParseError> {
        Ok(Lexer {
            tokens: tokenize(input)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos].0
    }

    fn column(&self) -> usize {
        self.tokens[self.pos].1
    }

    fn advance(&mut self) -> (Token, usize) {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, token: Token) -> Result<usize, ParseError> {
        if *self.peek() == token {
            Ok(self.advance().1)
        } else {
            Err(ParseError {
                column: self.column(),
                message: format!(
                    "expected {}, found {}",
                    token.describe(),
                    self.peek().describe()
                ),
            })
        }
    }
}

/// Parses a full map source: two components and an optional strip.
pub fn parse_map(input: &str) -> Result<PlanarMap, ParseError> {
    let mut lx = Lexer::new(input)?;
    let p = parse_expr(&mut lx)?;
    lx.expect(Token::Semicolon)?;
    let q = parse_expr(&mut lx)?;
    let strip = if *lx.peek() == Token::On {
        lx.advance();
        parse_interval(&mut lx)?
    } else {
        Interval::all()
    };
    lx.expect(Token::End)?;
    Ok(PlanarMap::new(p, q, strip))
}

/// Parses a single polynomial expression in `x` and `y`.
pub fn parse_expression(input: &str) -> Result<BiPoly, ParseError> {
    let mut lx = Lexer::new(input)?;
    let e = parse_expr(&mut lx)?;
    lx.expect(Token::End)?;
    Ok(e)
}

/// Parses a point `u,v` of rationals (used by `--at`).
pub fn parse_point(input: &str) -> Result<(Rat, Rat), ParseError> {
    let mut lx = Lexer::new(input)?;
    let u = parse_signed_rational(&mut lx)?;
    lx.expect(Token::Comma)?;
    let v = parse_signed_rational(&mut lx)?;
    lx.expect(Token::End)?;
    Ok((u, v))
}

fn parse_expr(lx: &mut Lexer) -> Result<BiPoly, ParseError> {
    let mut acc = parse_term(lx)?;
    loop {
        match lx.peek() {
            Token::Plus => {
                lx.advance();
                acc = &acc + &parse_term(lx)?;
            }
            Token::Minus => {
                lx.advance();
                acc = &acc - &parse_term(lx)?;
            }
            Token::Slash => {
                return Err(ParseError {
                    column: lx.column(),
                    message: "'/' is only allowed inside rational literals like 5/2".into(),
                })
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_term(lx: &mut Lexer) -> Result<BiPoly, ParseError> {
    let mut acc = parse_unary(lx)?;
    while *lx.peek() == Token::Star {
        lx.advance();
        acc = &acc * &parse_unary(lx)?;
    }
    Ok(acc)
}

fn parse_unary(lx: &mut Lexer) -> Result<BiPoly, ParseError> {
    if *lx.peek() == Token::Minus {
        lx.advance();
        return Ok(-&parse_unary(lx)?);
    }
    parse_power(lx)
}

fn parse_power(lx: &mut Lexer) -> Result<BiPoly, ParseError> {
    let base = parse_atom(lx)?;
    if *lx.peek() != Token::Caret {
        return Ok(base);
    }
    let caret_col = lx.column();
    lx.advance();
    match lx.peek().clone() {
        Token::Number(n) => {
            lx.advance();
            let exp = u32::try_from(&n).ok().filter(|e| *e <= MAX_EXPONENT);
            match exp {
                Some(e) => Ok(base.pow(e)),
                None => Err(ParseError {
                    column: caret_col,
                    message: format!("exponent {n} exceeds the supported maximum {MAX_EXPONENT}"),
                }),
            }
        }
        Token::Minus => Err(ParseError {
            column: caret_col,
            message: "exponents must be nonnegative integers".into(),
        }),
        other => Err(ParseError {
            column: caret_col,
            message: format!(
                "'^' must be followed by a nonnegative integer, found {}",
                other.describe()
            ),
        }),
    }
}

fn parse_atom(lx: &mut Lexer) -> Result<BiPoly, ParseError> {
    match lx.peek().clone() {
        Token::Number(_) => {
            let r = parse_rational(lx)?;
            Ok(BiPoly::constant(r))
        }
        Token::VarX => {
            lx.advance();
            Ok(BiPoly::var_x())
        }
        Token::VarY => {
            lx.advance();
            Ok(BiPoly::var_y())
        }
        Token::LParen => {
            lx.advance();
            let inner = parse_expr(lx)?;
            lx.expect(Token::RParen)?;
            Ok(inner)
        }
        other => Err(ParseError {
            column: lx.column(),
            message: format!(
                "expected a number, x, y or parenthesized expression, found {}",
                other.describe()
            ),
        }),
    }
}

/// `INT [ '/' INT ]`, unsigned.
fn parse_rational(lx: &mut Lexer) -> Result<Rat, ParseError> {
    let (token, col) = lx.advance();
    let Token::Number(numer) = token else {
        return Err(ParseError {
            column: col,
            message: format!("expected a number, found {}", token.describe()),
        });
    };
    if *lx.peek() != Token::Slash {
        return Ok(Rat::from(numer));
    }
    let slash_col = lx.column();
    lx.advance();
    let (token, col) = lx.advance();
    let Token::Number(denom) = token else {
        return Err(ParseError {
            column: col,
            message: format!(
                "expected a denominator after '/', found {}",
                token.describe()
            ),
        });
    };
    if denom == BigInt::from(0) {
        return Err(ParseError {
            column: slash_col,
            message: "denominator must be nonzero".into(),
        });
    }
    Ok(Rat::new(numer, denom))
}

fn parse_signed_rational(lx: &mut Lexer) -> Result<Rat, ParseError> {
    let mut negative = false;
    loop {
        match lx.peek() {
            Token::Minus => {
                negative = !negative;
                lx.advance();
            }
            Token::Plus => {
                lx.advance();
            }
            _ => break,
        }
    }
    let r = parse_rational(lx)?;
    Ok(if negative { -r } else { r })
}

fn parse_interval(lx: &mut Lexer) -> Result<Interval, ParseError> {
    let open_col = lx.expect(Token::LParen)?;
    let lower = parse_endpoint(lx)?;
    lx.expect(Token::Comma)?;
    let upper = parse_endpoint(lx)?;
    lx.expect(Token::RParen)?;
    Interval::new(lower, upper).map_err(|e| ParseError {
        column: open_col,
        message: e.to_string(),
    })
}

/// A finite rational or `inf`, optionally signed. `None` is infinite.
fn parse_endpoint(lx: &mut Lexer) -> Result<Option<Rat>, ParseError> {
    let mut negative = false;
    loop {
        match lx.peek() {
            Token::Minus => {
                negative = !negative;
                lx.advance();
            }
            Token::Plus => {
                lx.advance();
            }
            _ => break,
        }
    }
    if *lx.peek() == Token::Inf {
        lx.advance();
        return Ok(None);
    }
    let r = parse_rational(lx)?;
    Ok(Some(if negative { -r } else { r }))
}
