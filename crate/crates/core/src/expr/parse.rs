use num_complex::Complex64;

use super::{Expr, Func};
use crate::error::ExprError;

/// Parses `text` into an expression over the chart coordinates `z1..zn`.
///
/// ```text
/// expr    = term { ("+" | "-") term } ;
/// term    = unary { ("*" | "/") unary } ;
/// unary   = "-" unary | power ;
/// power   = atom [ "^" exponent ] ;
/// exponent= ["-"] integer | "(" ["-"] integer ")" ;
/// atom    = number | "i" | "pi" | coord | param
///         | func "(" expr ")" | "(" expr ")" ;
/// coord   = "z" integer ;                 (* 1 <= index <= n *)
/// func    = "exp" | "log" | "sin" | "cos" | "conj" | "abs2" | "re" | "im" ;
/// param   = identifier ;                  (* bound to a real value at evaluation *)
/// ```
///
/// `re(e)` and `im(e)` are sugar for `(e + conj(e))/2` and `(e - conj(e))/(2i)`.
pub fn parse_expr(text: &str, n: usize) -> Result<Expr, ExprError> {
    if text.trim().is_empty() {
        return Err(ExprError::Syntax {
            offset: 0,
            message: "empty expression".into(),
        });
    }
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        n,
    };
    let e = parser.expr()?;
    parser.skip_ws();
    if parser.pos != parser.src.len() {
        return Err(parser.syntax("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    n: usize,
}

impl Parser<'_> {
    fn syntax(&self, message: &str) -> ExprError {
        ExprError::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.syntax(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = lhs.add(&self.term()?);
            } else if self.eat(b'-') {
                lhs = lhs.sub(&self.term()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = lhs.mul(&self.unary()?);
            } else if self.eat(b'/') {
                lhs = lhs.div(&self.unary()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat(b'-') {
            Ok(self.unary()?.neg())
        } else if self.eat(b'+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let exponent = if self.eat(b'(') {
                let k = self.integer_exponent()?;
                self.expect(b')')?;
                k
            } else {
                self.integer_exponent()?
            };
            Ok(base.powi(exponent))
        } else {
            Ok(base)
        }
    }

    fn integer_exponent(&mut self) -> Result<i32, ExprError> {
        let negative = self.eat(b'-');
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("expected integer exponent"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let k: i32 = digits.parse().map_err(|_| ExprError::Syntax {
            offset: start,
            message: "exponent out of range".into(),
        })?;
        Ok(if negative { -k } else { k })
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            None => Err(self.syntax("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.identifier(),
            Some(_) => Err(self.syntax("unexpected character")),
        }
    }

    fn number(&mut self) -> Result<Expr, ExprError> {
        let start = self.pos;
        let src = self.src;
        let digits = |pos: &mut usize| {
            while *pos < src.len() && src[*pos].is_ascii_digit() {
                *pos += 1;
            }
        };
        digits(&mut self.pos);
        if self.pos < src.len() && src[self.pos] == b'.' {
            self.pos += 1;
            digits(&mut self.pos);
        }
        if self.pos < src.len() && (src[self.pos] == b'e' || src[self.pos] == b'E') {
            let save = self.pos;
            self.pos += 1;
            if self.pos < src.len() && (src[self.pos] == b'+' || src[self.pos] == b'-') {
                self.pos += 1;
            }
            let exp_start = self.pos;
            digits(&mut self.pos);
            if exp_start == self.pos {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&src[start..self.pos]).unwrap();
        text.parse::<f64>()
            .map(Expr::real)
            .map_err(|_| ExprError::Syntax {
                offset: start,
                message: format!("malformed number '{text}'"),
            })
    }

    fn identifier(&mut self) -> Result<Expr, ExprError> {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();

        if self.peek() == Some(b'(') {
            let func = match name {
                "re" | "im" => None,
                other => Some(Func::from_name(other).ok_or_else(|| ExprError::UnknownSymbol {
                    name: other.to_string(),
                    offset: start,
                })?),
            };
            self.pos += 1;
            let arg = self.expr()?;
            self.expect(b')')?;
            return Ok(match (func, name) {
                (Some(f), _) => Expr::call(f, &arg),
                (None, "re") => arg.re_part(),
                _ => arg.im_part(),
            });
        }

        match name {
            "i" => return Ok(Expr::constant(Complex64::new(0.0, 1.0))),
            "pi" => return Ok(Expr::real(std::f64::consts::PI)),
            _ => {}
        }
        if let Some(index) = name.strip_prefix('z') {
            if !index.is_empty() && index.bytes().all(|b| b.is_ascii_digit()) {
                let k: usize = index.parse().unwrap_or(usize::MAX);
                if k == 0 || k > self.n {
                    return Err(ExprError::IndexOutOfRange {
                        index: k,
                        n: self.n,
                        offset: start,
                    });
                }
                return Ok(Expr::coord(k - 1));
            }
        }
        if Func::from_name(name).is_some() || name == "re" || name == "im" {
            return Err(ExprError::Syntax {
                offset: self.pos,
                message: format!("function '{name}' needs an argument list"),
            });
        }
        // Lower-case identifiers that are not coordinates are parameters.
        Ok(Expr::param(name))
    }
}
