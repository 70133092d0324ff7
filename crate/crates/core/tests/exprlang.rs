use proptest::prelude::*;
use varineq::exprlang::{BinOp, CmpOp, Comparison, Cond, Expr, Func, Node};
use varineq::operators::{catalog_lookup, VectorField, CATALOG_NAMES};
use varineq::Point64;

const DIM: usize = 2;

fn node() -> impl Strategy<Value = Node> {
    let leaf = prop_oneof![
        (0u32..64).prop_map(|k| Node::Const(k as f64 / 8.0)),
        (0..DIM).prop_map(Node::Var),
    ];
    leaf.prop_recursive(5, 48, 3, |inner| {
        let op = prop_oneof![Just(BinOp::Add), Just(BinOp::Sub), Just(BinOp::Mul), Just(BinOp::Div)];
        let cmp = prop_oneof![Just(CmpOp::Lt), Just(CmpOp::Le), Just(CmpOp::Gt), Just(CmpOp::Ge)];
        prop_oneof![
            inner.clone().prop_map(|e| Node::Neg(Box::new(e))),
            (op, inner.clone(), inner.clone()).prop_map(|(o, a, b)| Node::Binary(o, Box::new(a), Box::new(b))),
            (inner.clone(), -3i32..4).prop_map(|(e, k)| Node::Pow(Box::new(e), k)),
            inner.clone().prop_map(|e| Node::Call(Func::Abs, vec![e])),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Node::Call(Func::Min, vec![a, b])),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Node::Call(Func::Max, vec![a, b])),
            (cmp, inner.clone(), inner.clone(), inner.clone(), inner.clone()).prop_map(|(op, l, r, e, o)| {
                Node::Piecewise {
                    branches: vec![(Cond { atoms: vec![Comparison { op, lhs: l, rhs: r }] }, e)],
                    otherwise: Box::new(o),
                }
            }),
        ]
    })
}

/// Straightforward tree walk; `None` where evaluation must fail.
fn oracle(n: &Node, x: &[f64]) -> Option<f64> {
    let v = match n {
        Node::Const(c) => *c,
        Node::Var(i) => x[*i],
        Node::Neg(e) => -oracle(e, x)?,
        Node::Binary(op, a, b) => {
            let (a, b) = (oracle(a, x)?, oracle(b, x)?);
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div if b == 0.0 => return None,
                BinOp::Div => a / b,
            }
        }
        Node::Pow(e, k) => {
            let b = oracle(e, x)?;
            if b == 0.0 && *k < 0 {
                return None;
            }
            b.powi(*k)
        }
        Node::Call(f, args) => {
            let vals: Option<Vec<f64>> = args.iter().map(|a| oracle(a, x)).collect();
            let vals = vals?;
            match f {
                Func::Abs => vals[0].abs(),
                Func::Min => vals.iter().cloned().fold(f64::INFINITY, f64::min),
                Func::Max => vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            }
        }
        Node::Piecewise { branches, otherwise } => {
            for (cond, e) in branches {
                let mut holds = true;
                for c in &cond.atoms {
                    let (l, r) = (oracle(&c.lhs, x)?, oracle(&c.rhs, x)?);
                    holds &= match c.op {
                        CmpOp::Lt => l < r,
                        CmpOp::Le => l <= r,
                        CmpOp::Gt => l > r,
                        CmpOp::Ge => l >= r,
                    };
                }
                if holds {
                    return oracle(e, x);
                }
            }
            oracle(otherwise, x)?
        }
    };
    v.is_finite().then_some(v)
}

fn points() -> impl Strategy<Value = Vec<[f64; 2]>> {
    prop::collection::vec([-2.0f64..2.0, -2.0f64..2.0], 100)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn print_parse_is_idempotent(tree in node(), xs in points()) {
        let printed = tree.to_string();
        let e1 = Expr::parse(&printed, DIM).unwrap();
        let s1 = e1.to_string();
        let e2 = Expr::parse(&s1, DIM).unwrap();
        prop_assert_eq!(&s1, &e2.to_string());
        prop_assert_eq!(e1.root(), e2.root());
        for x in &xs {
            let want = oracle(&tree, x);
            let got1 = e1.eval_slice(x).ok();
            let got2 = e2.eval_slice(x).ok();
            prop_assert_eq!(got1, want, "{} at {:?}", printed, x);
            prop_assert_eq!(got2, want);
        }
    }

    #[test]
    fn catalog_sources_agree_with_closed_forms(seed in 0u64..50, x in [-1.0f64..1.0, -1.0f64..1.0]) {
        for name in CATALOG_NAMES {
            let dim = match *name {
                "ex434_A" | "ex434_a" | "ex4331_A" | "ex4331_a" => 1,
                _ => 2,
            };
            let entry = catalog_lookup::<f64>(name, dim, seed).unwrap();
            let reencoded = VectorField::<f64>::from_sources(&entry.sources, dim).unwrap();
            let p = Point64::from_f64(&x[..dim]).unwrap();
            let a = entry.field.evaluate(&p).unwrap();
            let b = reencoded.evaluate(&p).unwrap();
            prop_assert!(a.distance(&b) <= 1e-12, "{name}: {a:?} vs {b:?}");
        }
    }
}

#[test]
fn precedence_and_unary_minus() {
    let at = |s: &str, x: &[f64]| Expr::parse(s, x.len()).unwrap().eval_slice(x).unwrap();
    assert_eq!(at("-x1^2", &[3.0]), -9.0);
    assert_eq!(at("1 - 2 - 3", &[0.0]), -4.0);
    assert_eq!(at("2 * x1 * x2 - x1 / x2", &[3.0, 2.0]), 10.5);
    assert_eq!(at("piecewise(x1 < 0 -> -1, x1 >= 0 and x1 <= 1 -> x1, else -> 1)", &[0.25]), 0.25);
}

#[test]
fn errors_carry_positions() {
    let e = Expr::parse("x1 + * 2", 1).unwrap_err();
    assert_eq!(e.position, 6);
    assert!(Expr::parse("x3", 2).is_err());
    assert!(Expr::parse("sin(x1)", 1).is_err());
}
