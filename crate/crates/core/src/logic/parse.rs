//! Recursive-descent parser for the ASCII formula syntax.
//!
//! Precedence, loosest first: `||`, `&&`, `U` (right-associative), then the
//! prefix operators `!`, `X`, `F`, `G`.

use thiserror::Error;

use super::Formula;
use crate::symbols::Alphabet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at column {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown atom `{atom}` at column {pos}")]
    UnknownAtom { atom: String, pos: usize },
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Not,
    And,
    Or,
    LParen,
    RParen,
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

impl Lexer {
    fn lex(text: &str) -> Result<Self, ParseError> {
        let bytes = text.as_bytes();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            let pos = i + 1;
            match c {
                b' ' | b'\t' | b'\n' | b'\r' => i += 1,
                b'!' => {
                    toks.push((Tok::Not, pos));
                    i += 1;
                }
                b'(' => {
                    toks.push((Tok::LParen, pos));
                    i += 1;
                }
                b')' => {
                    toks.push((Tok::RParen, pos));
                    i += 1;
                }
                b'&' | b'|' => {
                    if bytes.get(i + 1) != Some(&c) {
                        return Err(ParseError::Syntax {
                            pos,
                            msg: format!("expected `{0}{0}`", c as char),
                        });
                    }
                    toks.push((if c == b'&' { Tok::And } else { Tok::Or }, pos));
                    i += 2;
                }
                c if c.is_ascii_alphabetic() => {
                    let start = i;
                    while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                    {
                        i += 1;
                    }
                    toks.push((Tok::Ident(text[start..i].to_string()), pos));
                }
                _ => {
                    return Err(ParseError::Syntax {
                        pos,
                        msg: format!("unexpected character `{}`", text[i..].chars().next().unwrap()),
                    })
                }
            }
        }
        toks.push((Tok::End, text.len() + 1));
        Ok(Lexer { toks })
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    alphabet: Option<&'a Alphabet>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn is_ident(&self, name: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == name)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.until()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = Formula::and(lhs, self.until()?);
        }
        Ok(lhs)
    }

    fn until(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        if self.is_ident("U") {
            self.bump();
            let rhs = self.until()?;
            return Ok(Formula::until(lhs, rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.or()?;
                if *self.peek() != Tok::RParen {
                    return self.error("expected `)`");
                }
                self.bump();
                Ok(inner)
            }
            Tok::Ident(name) => {
                let (_, pos) = self.bump();
                match name.as_str() {
                    "X" => Ok(Formula::next(self.unary()?)),
                    "F" => Ok(Formula::eventually(self.unary()?)),
                    "G" => Ok(Formula::always(self.unary()?)),
                    "U" => Err(ParseError::Syntax { pos, msg: "`U` needs a left operand".into() }),
                    "true" => Ok(Formula::True),
                    "false" => Ok(Formula::False),
                    _ => {
                        if let Some(alpha) = self.alphabet {
                            if !alpha.contains(&name) {
                                return Err(ParseError::UnknownAtom { atom: name, pos });
                            }
                        }
                        Ok(Formula::Atom(name))
                    }
                }
            }
            Tok::End => self.error("unexpected end of formula"),
            other => self.error(format!("unexpected token {other:?}")),
        }
    }
}

/// Parses `text`, checking every atom against `alphabet`.
pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Formula, ParseError> {
    parse_inner(text, Some(alphabet))
}

/// Parses `text` without restricting atom names.
pub fn parse_unchecked(text: &str) -> Result<Formula, ParseError> {
    parse_inner(text, None)
}

fn parse_inner(text: &str, alphabet: Option<&Alphabet>) -> Result<Formula, ParseError> {
    let Lexer { toks } = Lexer::lex(text)?;
    let mut p = Parser { toks, at: 0, alphabet };
    let f = p.or()?;
    if *p.peek() != Tok::End {
        return p.error("trailing input");
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Formula as Fm;

    fn alpha() -> Alphabet {
        Alphabet::new(["R1", "R2", "load", "help", "assist", "a", "b", "c"]).unwrap()
    }

    #[test]
    fn surveillance_formula() {
        let f = parse("G F R1 && G F R2", &alpha()).unwrap();
        assert_eq!(
            f,
            Fm::and(
                Fm::always(Fm::eventually(Fm::atom("R1"))),
                Fm::always(Fm::eventually(Fm::atom("R2")))
            )
        );
    }

    #[test]
    fn constants_and_conjunctions() {
        assert_eq!(parse("true", &alpha()).unwrap(), Fm::True);
        assert_eq!(
            parse("load && help && assist", &alpha()).unwrap(),
            Fm::and(Fm::and(Fm::atom("load"), Fm::atom("help")), Fm::atom("assist"))
        );
    }

    #[test]
    fn precedence_and_associativity() {
        let f = parse("a U b U c || !a && X b", &alpha()).unwrap();
        let expected = Fm::or(
            Fm::until(Fm::atom("a"), Fm::until(Fm::atom("b"), Fm::atom("c"))),
            Fm::and(Fm::not(Fm::atom("a")), Fm::next(Fm::atom("b"))),
        );
        assert_eq!(f, expected);
        // unary binds tighter than U
        assert_eq!(
            parse("F a U b", &alpha()).unwrap(),
            Fm::until(Fm::eventually(Fm::atom("a")), Fm::atom("b"))
        );
    }

    #[test]
    fn display_round_trips() {
        for text in ["a U (b U c)", "(a U b) U c", "!(a && b) || X G c", "G (a || !b) && F c"] {
            let f = parse(text, &alpha()).unwrap();
            assert_eq!(parse(&f.to_string(), &alpha()).unwrap(), f, "{text}");
        }
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            parse("a && zz", &alpha()),
            Err(ParseError::UnknownAtom { atom: "zz".into(), pos: 6 })
        );
        assert!(matches!(parse("a & b", &alpha()), Err(ParseError::Syntax { pos: 3, .. })));
        assert!(matches!(parse("(a || b", &alpha()), Err(ParseError::Syntax { pos: 8, .. })));
        assert!(matches!(parse("a b", &alpha()), Err(ParseError::Syntax { pos: 3, .. })));
        assert!(matches!(parse("", &alpha()), Err(ParseError::Syntax { pos: 1, .. })));
    }
}
