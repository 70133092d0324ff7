use super::lexer::{Spanned, Tok};
use super::{BinOp, CmpOp, Comparison, Cond, Func, Node, ParseError, ParseErrorKind};

pub(crate) struct Parser {
    toks: Vec<Spanned>,
    at: usize,
    dim: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    pub(crate) fn new(toks: Vec<Spanned>, dim: usize) -> Self {
        Self { toks, at: 0, dim }
    }

    pub(crate) fn parse_all(mut self) -> PResult<Node> {
        let e = self.expr()?;
        if self.peek() != &Tok::End {
            return Err(self.unexpected("an operator or end of input"));
        }
        Ok(e)
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn pos(&self) -> usize {
        self.toks[self.at].pos
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        ParseError {
            kind: ParseErrorKind::Unexpected {
                expected: expected.to_string(),
                found: self.peek().describe(),
            },
            position: self.pos(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn expr(&mut self) -> PResult<Node> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Node::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> PResult<Node> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Node::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> PResult<Node> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> PResult<Node> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let k = self.exponent()?;
            return Ok(Node::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn signed_int(&mut self) -> PResult<i64> {
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Num {
                value,
                integral: true,
            } => {
                self.bump();
                if value > i32::MAX as f64 {
                    return Err(ParseError {
                        kind: ParseErrorKind::ExponentOverflow,
                        position: pos,
                    });
                }
                let v = value as i64;
                Ok(if negative { -v } else { v })
            }
            _ => Err(ParseError {
                kind: ParseErrorKind::NonIntegerExponent,
                position: pos,
            }),
        }
    }

    /// Integer exponent; `a^b^c` folds right-to-left into one literal.
    fn exponent(&mut self) -> PResult<i32> {
        let pos = self.pos();
        let base = if *self.peek() == Tok::LParen {
            self.bump();
            let k = self.signed_int()?;
            self.expect(Tok::RParen, "`)`")?;
            k
        } else {
            self.signed_int()?
        };
        let value = if *self.peek() == Tok::Caret {
            self.bump();
            let inner_pos = self.pos();
            let inner = self.exponent()?;
            if inner < 0 && base.abs() != 1 {
                return Err(ParseError {
                    kind: ParseErrorKind::NonIntegerExponent,
                    position: inner_pos,
                });
            }
            if inner < 0 {
                // base is +-1 here
                if base == -1 && inner % 2 != 0 {
                    -1
                } else {
                    1
                }
            } else {
                base.checked_pow(inner as u32).ok_or(ParseError {
                    kind: ParseErrorKind::ExponentOverflow,
                    position: pos,
                })?
            }
        } else {
            base
        };
        i32::try_from(value).map_err(|_| ParseError {
            kind: ParseErrorKind::ExponentOverflow,
            position: pos,
        })
    }

    fn atom(&mut self) -> PResult<Node> {
        let Spanned { tok, pos } = self.toks[self.at].clone();
        match tok {
            Tok::Num { value, .. } => {
                self.bump();
                Ok(Node::Const(value))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "piecewise" => self.piecewise(pos),
                    "abs" => self.call(Func::Abs, "abs", pos),
                    "min" => self.call(Func::Min, "min", pos),
                    "max" => self.call(Func::Max, "max", pos),
                    _ => self.variable(&name, pos),
                }
            }
            _ => Err(self.unexpected("a number, variable, function or `(`")),
        }
    }

    fn variable(&self, name: &str, pos: usize) -> PResult<Node> {
        let index = match name {
            "x" | "y" | "z" if self.dim <= 3 => match name {
                "x" => 1,
                "y" => 2,
                _ => 3,
            },
            _ => match name.strip_prefix('x').map(str::parse::<usize>) {
                Some(Ok(i)) => i,
                _ => {
                    return Err(ParseError {
                        kind: ParseErrorKind::UnknownIdentifier(name.to_string()),
                        position: pos,
                    })
                }
            },
        };
        if index == 0 || index > self.dim {
            return Err(ParseError {
                kind: ParseErrorKind::VariableOutOfRange {
                    index,
                    dim: self.dim,
                },
                position: pos,
            });
        }
        Ok(Node::Var(index - 1))
    }

    fn call(&mut self, func: Func, name: &'static str, pos: usize) -> PResult<Node> {
        self.expect(Tok::LParen, "`(`")?;
        let mut args = vec![self.expr()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.expr()?);
        }
        self.expect(Tok::RParen, "`,` or `)`")?;
        let ok = match func {
            Func::Abs => args.len() == 1,
            Func::Min | Func::Max => !args.is_empty(),
        };
        if !ok {
            return Err(ParseError {
                kind: ParseErrorKind::Arity {
                    func: name,
                    expected: "1",
                    found: args.len(),
                },
                position: pos,
            });
        }
        Ok(Node::Call(func, args))
    }

    fn piecewise(&mut self, pos: usize) -> PResult<Node> {
        self.expect(Tok::LParen, "`(`")?;
        let mut branches = Vec::new();
        let mut otherwise = None;
        loop {
            let branch_pos = self.pos();
            if otherwise.is_some() {
                return Err(ParseError {
                    kind: ParseErrorKind::BranchAfterElse,
                    position: branch_pos,
                });
            }
            if *self.peek() == Tok::Ident("else".into()) {
                self.bump();
                self.expect(Tok::Arrow, "`->`")?;
                otherwise = Some(self.expr()?);
            } else {
                let cond = self.cond()?;
                self.expect(Tok::Arrow, "`->`")?;
                branches.push((cond, self.expr()?));
            }
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RParen => {
                    self.bump();
                    break;
                }
                _ => return Err(self.unexpected("`,` or `)`")),
            }
        }
        let otherwise = otherwise.ok_or(ParseError {
            kind: ParseErrorKind::MissingElse,
            position: pos,
        })?;
        Ok(Node::Piecewise {
            branches,
            otherwise: Box::new(otherwise),
        })
    }

    fn cond(&mut self) -> PResult<Cond> {
        let mut atoms = vec![self.comparison()?];
        while *self.peek() == Tok::Ident("and".into()) {
            self.bump();
            atoms.push(self.comparison()?);
        }
        Ok(Cond { atoms })
    }

    fn comparison(&mut self) -> PResult<Comparison> {
        let lhs = self.expr()?;
        let op = match self.peek() {
            Tok::Lt => CmpOp::Lt,
            Tok::Le => CmpOp::Le,
            Tok::Gt => CmpOp::Gt,
            Tok::Ge => CmpOp::Ge,
            _ => return Err(self.unexpected("a comparison operator")),
        };
        self.bump();
        let rhs = self.expr()?;
        Ok(Comparison { op, lhs, rhs })
    }
}
