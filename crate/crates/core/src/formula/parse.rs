//! Recursive-descent parser.
//!
//! ```text
//! formula := disj { "(+)" disj }
//! disj    := conj { "|" conj }
//! conj    := unary { "&" unary }
//! unary   := "~" unary | "sid" unary | "snot" unary
//!          | "T" "(" formula "," formula "," formula ")"
//!          | atom | "t" | "f" | "(" formula ")"
//! atom    := "q" digits
//! ```

use std::fmt;

use super::Formula;

/// Syntax error at a character position (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    /// The input line followed by a caret under the offending position.
    pub fn render(&self, input: &str) -> String {
        format!("{input}\n{}^ {}", " ".repeat(self.position), self.message)
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at column {}: {}",
            self.position + 1,
            self.message
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Tilde,
    Sid,
    Snot,
    Tof,
    LParen,
    RParen,
    Comma,
    Xor,
    And,
    Or,
    Atom(u32),
    True,
    False,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Tilde => f.write_str("`~`"),
            Tok::Sid => f.write_str("`sid`"),
            Tok::Snot => f.write_str("`snot`"),
            Tok::Tof => f.write_str("`T`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Xor => f.write_str("`(+)`"),
            Tok::And => f.write_str("`&`"),
            Tok::Or => f.write_str("`|`"),
            Tok::Atom(i) => write!(f, "`q{i}`"),
            Tok::True => f.write_str("`t`"),
            Tok::False => f.write_str("`f`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn lex(input: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |position: usize, message: String| ParseError { position, message };
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '~' => {
                i += 1;
                Tok::Tilde
            }
            '(' if chars.get(i + 1) == Some(&'+') && chars.get(i + 2) == Some(&')') => {
                i += 3;
                Tok::Xor
            }
            '(' => {
                i += 1;
                Tok::LParen
            }
            ')' => {
                i += 1;
                Tok::RParen
            }
            ',' => {
                i += 1;
                Tok::Comma
            }
            '&' => {
                i += 1;
                Tok::And
            }
            '|' => {
                i += 1;
                Tok::Or
            }
            c if c.is_ascii_alphanumeric() => {
                while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                match word.as_str() {
                    "sid" => Tok::Sid,
                    "snot" => Tok::Snot,
                    "T" => Tok::Tof,
                    "t" => Tok::True,
                    "f" => Tok::False,
                    w if w.len() > 1
                        && w.starts_with('q')
                        && w[1..].bytes().all(|b| b.is_ascii_digit()) =>
                    {
                        match w[1..].parse::<u32>() {
                            Ok(0) => return Err(err(start, "atom ids start at q1".into())),
                            Ok(id) => Tok::Atom(id),
                            Err(_) => {
                                return Err(err(start, format!("atom id `{w}` is too large")))
                            }
                        }
                    }
                    w => return Err(err(start, format!("unknown token `{w}`"))),
                }
            }
            other => return Err(err(start, format!("unexpected character `{other}`"))),
        };
        out.push((start, tok));
    }
    out.push((chars.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn position(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&format!("{want}")))
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        ParseError {
            position: self.position(),
            message: format!("expected {wanted}, found {}", self.peek()),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.disj()?;
        while *self.peek() == Tok::Xor {
            self.bump();
            lhs = Formula::xor(lhs, self.disj()?);
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conj()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = Formula::or(lhs, self.conj()?);
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Sid => {
                self.bump();
                Ok(Formula::sqrt_id(self.unary()?))
            }
            Tok::Snot => {
                self.bump();
                Ok(Formula::sqrt_not(self.unary()?))
            }
            Tok::Tof => {
                self.bump();
                self.expect(Tok::LParen)?;
                let a = self.formula()?;
                self.expect(Tok::Comma)?;
                let b = self.formula()?;
                self.expect(Tok::Comma)?;
                let c = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(Formula::toffoli(a, b, c))
            }
            Tok::Atom(id) => {
                let id = *id;
                self.bump();
                Ok(Formula::Atom(id))
            }
            Tok::True => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            _ => Err(self.unexpected("a formula")),
        }
    }
}

pub fn parse(input: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(input)?,
        pos: 0,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("end of input"));
    }
    Ok(f)
}
