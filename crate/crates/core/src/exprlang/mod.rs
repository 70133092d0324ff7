//! A small arithmetic language with piecewise definitions, used to write
//! operator components in instance files.
//!
//! ```text
//! expr      := term (('+' | '-') term)*
//! term      := unary (('*' | '/') unary)*
//! unary     := '-' unary | power
//! power     := atom ('^' exponent)?
//! exponent  := ['-'] INT ('^' exponent)? | '(' ['-'] INT ')'
//! atom      := NUMBER | VAR | func '(' expr (',' expr)* ')' | '(' expr ')'
//!            | 'piecewise' '(' branch (',' branch)* ')'
//! branch    := cond '->' expr | 'else' '->' expr      (else last, required)
//! cond      := expr relop expr ('and' expr relop expr)*
//! relop     := '<' | '<=' | '>' | '>=' | '≤' | '≥'
//! func      := 'abs' | 'min' | 'max'
//! VAR       := 'x1' .. 'xn', plus 'x', 'y', 'z' when n <= 3
//! ```
//!
//! Piecewise branches are tried in order and the first satisfied condition
//! wins, so half-open intervals are written by ordering the conditions.

mod eval;
mod lexer;
mod parser;

use std::fmt;

use thiserror::Error;

pub use eval::EvalError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Abs,
    Min,
    Max,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub op: CmpOp,
    pub lhs: Node,
    pub rhs: Node,
}

/// Conjunction of comparisons.
#[derive(Clone, Debug, PartialEq)]
pub struct Cond {
    pub atoms: Vec<Comparison>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Const(f64),
    /// Zero-based variable index.
    Var(usize),
    Neg(Box<Node>),
    Binary(BinOp, Box<Node>, Box<Node>),
    Pow(Box<Node>, i32),
    Call(Func, Vec<Node>),
    Piecewise {
        branches: Vec<(Cond, Node)>,
        otherwise: Box<Node>,
    },
}

/// A parsed expression over `dim` variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    dim: usize,
    root: Node,
}

impl Expr {
    pub fn parse(source: &str, dim: usize) -> Result<Self, ParseError> {
        parse(source, dim)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn root(&self) -> &Node {
        &self.root
    }
}

pub fn parse(source: &str, dim: usize) -> Result<Expr, ParseError> {
    if dim == 0 {
        return Err(ParseError {
            kind: ParseErrorKind::InvalidDimension,
            position: 1,
        });
    }
    let root = parser::Parser::new(lexer::tokenize(source)?, dim).parse_all()?;
    Ok(Expr { dim, root })
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("invalid number `{0}`")]
    InvalidNumber(String),
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: String, found: String },
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("variable x{index} out of range for dimension {dim}")]
    VariableOutOfRange { index: usize, dim: usize },
    #[error("piecewise needs a trailing `else` branch")]
    MissingElse,
    #[error("`else` must be the last piecewise branch")]
    BranchAfterElse,
    #[error("exponent must be an integer literal")]
    NonIntegerExponent,
    #[error("exponent out of range")]
    ExponentOverflow,
    #[error("`{func}` takes {expected} argument(s), got {found}")]
    Arity {
        func: &'static str,
        expected: &'static str,
        found: usize,
    },
    #[error("expression dimension must be at least 1")]
    InvalidDimension,
}

/// Syntax error with a 1-based character position.
#[derive(Clone, Debug, PartialEq, Error)]
#[error("parse error at position {position}: {kind}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub position: usize,
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        })
    }
}

impl fmt::Display for Cond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(" and ")?;
            }
            write!(f, "{} {} {}", c.lhs, c.op, c.rhs)?;
        }
        Ok(())
    }
}

/// Fully parenthesized output that reparses to the same tree (up to
/// negative constants, which come back as negated literals).
impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Const(v) if *v < 0.0 || (*v == 0.0 && v.is_sign_negative()) => {
                write!(f, "(-{})", -v)
            }
            Node::Const(v) => write!(f, "{v}"),
            Node::Var(i) => write!(f, "x{}", i + 1),
            Node::Neg(e) => write!(f, "(-{e})"),
            Node::Binary(op, a, b) => {
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                };
                write!(f, "({a} {sym} {b})")
            }
            Node::Pow(e, k) if *k < 0 => write!(f, "({e}^({k}))"),
            Node::Pow(e, k) => write!(f, "({e}^{k})"),
            Node::Call(func, args) => {
                let name = match func {
                    Func::Abs => "abs",
                    Func::Min => "min",
                    Func::Max => "max",
                };
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            Node::Piecewise {
                branches,
                otherwise,
            } => {
                f.write_str("piecewise(")?;
                for (cond, e) in branches {
                    write!(f, "{cond} -> {e}, ")?;
                }
                write!(f, "else -> {otherwise})")
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}
