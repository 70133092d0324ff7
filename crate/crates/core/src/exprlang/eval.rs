use thiserror::Error;

use super::{BinOp, CmpOp, Cond, Expr, Func, Node};
use crate::geometry::Point;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("expression has dimension {expected}, point has {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero raised to a negative power")]
    ZeroToNegativePower,
    #[error("result is not finite")]
    NonFinite,
}

impl Expr {
    pub fn eval<T: Real>(&self, p: &Point<T>) -> Result<T, EvalError> {
        self.eval_slice(p.coords())
    }

    pub fn eval_slice<T: Real>(&self, vars: &[T]) -> Result<T, EvalError> {
        if vars.len() != self.dim {
            return Err(EvalError::DimensionMismatch {
                expected: self.dim,
                found: vars.len(),
            });
        }
        eval_node(&self.root, vars)
    }
}

fn finite<T: Real>(v: T) -> Result<T, EvalError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::NonFinite)
    }
}

fn eval_node<T: Real>(node: &Node, vars: &[T]) -> Result<T, EvalError> {
    match node {
        Node::Const(c) => finite(T::of(*c)),
        Node::Var(i) => Ok(vars[*i]),
        Node::Neg(e) => Ok(-eval_node(e, vars)?),
        Node::Binary(op, a, b) => {
            let a = eval_node(a, vars)?;
            let b = eval_node(b, vars)?;
            finite(match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b == T::zero() {
                        return Err(EvalError::DivisionByZero);
                    }
                    a / b
                }
            })
        }
        Node::Pow(e, k) => {
            let base = eval_node(e, vars)?;
            if base == T::zero() && *k < 0 {
                return Err(EvalError::ZeroToNegativePower);
            }
            finite(base.powi(*k))
        }
        Node::Call(func, args) => {
            let first = eval_node(&args[0], vars)?;
            match func {
                Func::Abs => Ok(first.abs()),
                Func::Min => args[1..]
                    .iter()
                    .try_fold(first, |acc, a| Ok(acc.min(eval_node(a, vars)?))),
                Func::Max => args[1..]
                    .iter()
                    .try_fold(first, |acc, a| Ok(acc.max(eval_node(a, vars)?))),
            }
        }
        Node::Piecewise {
            branches,
            otherwise,
        } => {
            for (cond, e) in branches {
                if holds(cond, vars)? {
                    return eval_node(e, vars);
                }
            }
            eval_node(otherwise, vars)
        }
    }
}

fn holds<T: Real>(cond: &Cond, vars: &[T]) -> Result<bool, EvalError> {
    for c in &cond.atoms {
        let l = eval_node(&c.lhs, vars)?;
        let r = eval_node(&c.rhs, vars)?;
        let ok = match c.op {
            CmpOp::Lt => l < r,
            CmpOp::Le => l <= r,
            CmpOp::Gt => l > r,
            CmpOp::Ge => l >= r,
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::super::{parse, BinOp, Node, ParseErrorKind};
    use super::*;

    const EX434_A: &str = "piecewise(x <= -0.5 -> -2*x - 1, x <= 0 -> 2*x + 1, else -> -2*x + 1)";

    fn at(src: &str, dim: usize, p: &[f64]) -> Result<f64, EvalError> {
        parse(src, dim).unwrap().eval_slice(p)
    }

    #[test]
    fn precedence_of_power_over_product() {
        let e = parse("x^2*y", 2).unwrap();
        assert_eq!(
            e.root(),
            &Node::Binary(
                BinOp::Mul,
                Box::new(Node::Pow(Box::new(Node::Var(0)), 2)),
                Box::new(Node::Var(1))
            )
        );
        assert_eq!(e.eval_slice(&[0.5, 0.5]).unwrap(), 0.125);
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        assert_eq!(at("-x^2", 1, &[3.0]).unwrap(), -9.0);
        assert_eq!(at("2^3^2", 1, &[0.0]).unwrap(), 512.0);
        assert_eq!(at("x^-1", 1, &[4.0]).unwrap(), 0.25);
        assert_eq!(at("x^(-2)", 1, &[2.0]).unwrap(), 0.25);
        assert_eq!(at("8 / 4 / 2", 1, &[0.0]).unwrap(), 1.0);
        assert_eq!(at("1 - 2 - 3", 1, &[0.0]).unwrap(), -4.0);
    }

    #[test]
    fn piecewise_boundaries_take_earlier_branch() {
        assert_eq!(at(EX434_A, 1, &[-0.5]).unwrap(), 0.0);
        assert_eq!(at(EX434_A, 1, &[0.0]).unwrap(), 1.0);
        assert_eq!(at(EX434_A, 1, &[-1.0]).unwrap(), 1.0);
        assert_eq!(at(EX434_A, 1, &[0.75]).unwrap(), -0.5);
    }

    #[test]
    fn conjunctions_and_functions() {
        let src = "piecewise(x > 0 and y >= 0 -> max(x, y, 0.5), else -> abs(min(x, y)))";
        assert_eq!(at(src, 2, &[0.2, 0.1]).unwrap(), 0.5);
        assert_eq!(at(src, 2, &[0.2, -0.1]).unwrap(), 0.1);
        assert_eq!(at("abs(x)", 1, &[0.0]).unwrap(), 0.0);
        assert_eq!(at("x1 + x4", 4, &[1.0, 0.0, 0.0, 2.0]).unwrap(), 3.0);
    }

    #[test]
    fn parse_errors() {
        let e = parse("piecewise(x < 0 -> 1)", 1).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::MissingElse);
        assert_eq!(e.position, 1);
        let e = parse("piecewise(else -> 1, x < 0 -> 2)", 1).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::BranchAfterElse);
        assert!(matches!(parse("y", 1).unwrap_err().kind, ParseErrorKind::VariableOutOfRange { index: 2, dim: 1 }));
        assert!(matches!(parse("y", 4).unwrap_err().kind, ParseErrorKind::UnknownIdentifier(_)));
        assert!(matches!(parse("foo(x)", 1).unwrap_err().kind, ParseErrorKind::UnknownIdentifier(_)));
        assert_eq!(parse("x^0.5", 1).unwrap_err().kind, ParseErrorKind::NonIntegerExponent);
        let e = parse("x + * 2", 1).unwrap_err();
        assert_eq!(e.position, 5);
        assert!(matches!(parse("(x", 1).unwrap_err().kind, ParseErrorKind::Unexpected { .. }));
        assert!(matches!(parse("x < 1", 1).unwrap_err().kind, ParseErrorKind::Unexpected { .. }));
        assert_eq!(parse("x", 0).unwrap_err().kind, ParseErrorKind::InvalidDimension);
        assert!(matches!(parse("abs(x, x)", 1).unwrap_err().kind, ParseErrorKind::Arity { .. }));
    }

    #[test]
    fn eval_errors() {
        assert_eq!(at("1 / x", 1, &[0.0]), Err(EvalError::DivisionByZero));
        assert_eq!(at("x^-2", 1, &[0.0]), Err(EvalError::ZeroToNegativePower));
        assert_eq!(at("x^400", 1, &[10.0]), Err(EvalError::NonFinite));
        assert_eq!(at("x * 1e300 * 1e300", 1, &[1.0]), Err(EvalError::NonFinite));
        assert!(matches!(at("x", 1, &[1.0, 2.0]), Err(EvalError::DimensionMismatch { .. })));
    }

    #[test]
    fn printed_form_reparses() {
        let e = parse(EX434_A, 1).unwrap();
        let again = parse(&e.to_string(), 1).unwrap();
        for x in [-1.0, -0.5, -0.25, 0.0, 0.3, 1.0] {
            assert_eq!(e.eval_slice(&[x]), again.eval_slice(&[x]));
        }
    }

    #[test]
    fn evaluates_in_single_precision() {
        let e = parse("x^2*y", 2).unwrap();
        assert_eq!(e.eval_slice(&[0.5f32, 0.5]).unwrap(), 0.125f32);
    }
}
