use crate::error::{Error, Result};
use crate::expr::{BinOp, Expr, Func};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    /// Returns the token and its starting byte offset.
    fn next(&mut self) -> Result<(Tok, usize)> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[self.pos..];
        let Some(c) = rest.chars().next() else {
            return Ok((Tok::End, start));
        };
        if c.is_ascii_digit() || c == '.' {
            return self.number(start);
        }
        if c.is_alphabetic() || c == '_' {
            let len = rest
                .char_indices()
                .find(|&(_, ch)| !(ch.is_alphanumeric() || ch == '_'))
                .map_or(rest.len(), |(i, _)| i);
            self.pos += len;
            return Ok((Tok::Ident(rest[..len].to_string()), start));
        }
        self.pos += c.len_utf8();
        let tok = match c {
            '+' | '-' | '*' | '/' | '^' => Tok::Op(c),
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => {
                return Err(Error::Syntax {
                    offset: start,
                    message: format!("unexpected character `{c}`"),
                })
            }
        };
        Ok((tok, start))
    }

    fn number(&mut self, start: usize) -> Result<(Tok, usize)> {
        let bytes = self.src.as_bytes();
        let mut i = self.pos;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        if i < bytes.len() && bytes[i] == b'.' {
            i += 1;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
        }
        if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
            let mut j = i + 1;
            if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                j += 1;
            }
            if j < bytes.len() && bytes[j].is_ascii_digit() {
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                i = j;
            }
        }
        let text = &self.src[start..i];
        let value: f64 = text.parse().map_err(|_| Error::Syntax {
            offset: start,
            message: format!("malformed number `{text}`"),
        })?;
        self.pos = i;
        Ok((Tok::Num(value), start))
    }
}

pub(crate) struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    at: usize,
    vars: &'a [&'a str],
}

impl<'a> Parser<'a> {
    pub(crate) fn new(src: &'a str, vars: &'a [&'a str]) -> Result<Self> {
        let mut lexer = Lexer { src, pos: 0 };
        let (tok, at) = lexer.next()?;
        Ok(Parser { lexer, tok, at, vars })
    }

    fn bump(&mut self) -> Result<()> {
        let (tok, at) = self.lexer.next()?;
        self.tok = tok;
        self.at = at;
        Ok(())
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            offset: self.at,
            message: message.into(),
        })
    }

    pub(crate) fn parse_all(mut self) -> Result<Expr> {
        if self.tok == Tok::End {
            return self.error("empty expression");
        }
        let e = self.additive()?;
        match self.tok {
            Tok::End => Ok(e),
            Tok::RParen => self.error("unmatched `)`"),
            _ => self.error("expected operator"),
        }
    }

    fn additive(&mut self) -> Result<Expr> {
        let mut lhs = self.multiplicative()?;
        loop {
            let op = match self.tok {
                Tok::Op('+') => BinOp::Add,
                Tok::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump()?;
            let rhs = self.multiplicative()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn multiplicative(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.tok {
                Tok::Op('*') => BinOp::Mul,
                Tok::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump()?;
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.tok == Tok::Op('-') {
            self.bump()?;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.tok == Tok::Op('^') {
            self.bump()?;
            // the exponent may itself carry a sign or another power
            let exp = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.tok.clone() {
            Tok::Num(v) => {
                self.bump()?;
                Ok(Expr::Num(v))
            }
            Tok::LParen => {
                self.bump()?;
                let e = self.additive()?;
                if self.tok != Tok::RParen {
                    return self.error("expected `)`");
                }
                self.bump()?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let name_at = self.at;
                self.bump()?;
                if self.tok == Tok::LParen {
                    let Some(func) = Func::from_name(&name) else {
                        return Err(Error::UnknownIdentifier(name));
                    };
                    self.bump()?;
                    let arg = self.additive()?;
                    if self.tok != Tok::RParen {
                        return self.error("expected `)` after function argument");
                    }
                    self.bump()?;
                    return Ok(Expr::Call(func, Box::new(arg)));
                }
                if self.vars.contains(&name.as_str()) {
                    Ok(Expr::Var(name))
                } else if Func::from_name(&name).is_some() {
                    Err(Error::Syntax {
                        offset: name_at,
                        message: format!("function `{name}` needs an argument"),
                    })
                } else {
                    Err(Error::UnknownIdentifier(name))
                }
            }
            Tok::End => self.error("unexpected end of input"),
            Tok::RParen => self.error("unexpected `)`"),
            Tok::Op(c) => self.error(format!("unexpected operator `{c}`")),
        }
    }
}
