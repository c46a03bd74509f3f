//! Strategies shared by the property suites and the acceptance run.
#![allow(dead_code)]

use commuting_ops::diffop::DiffOp;
use commuting_ops::exact::{int, rat, Rational, XLaurent};
use proptest::prelude::*;

pub type Op = DiffOp<XLaurent>;

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

pub fn coefficient() -> impl Strategy<Value = XLaurent> {
    prop::collection::vec((small_rational(), 0u32..=2, -3i32..=3), 0..=3).prop_map(XLaurent::from_monomials)
}

pub fn operator(max_order: usize) -> impl Strategy<Value = Op> {
    prop::collection::vec(coefficient(), 0..=max_order + 1).prop_map(DiffOp::new)
}

/// A random expression in the operator grammar together with the operator
/// it denotes, built without the parser.
#[derive(Clone, Debug)]
pub enum Expr {
    Int(i64),
    X,
    Eps,
    D,
    DPow(u32),
    XPow(i32),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    DivInt(Box<Expr>, i64),
}

impl Expr {
    pub fn text(&self) -> String {
        match self {
            Expr::Int(n) if *n < 0 => format!("({n})"),
            Expr::Int(n) => n.to_string(),
            Expr::X => "x".into(),
            Expr::Eps => "eps".into(),
            Expr::D => "D".into(),
            Expr::DPow(k) => format!("D^{k}"),
            Expr::XPow(k) => format!("x^{k}"),
            Expr::Neg(a) => format!("-({})", a.text()),
            Expr::Add(a, b) => format!("({} + {})", a.text(), b.text()),
            Expr::Sub(a, b) => format!("({} - {})", a.text(), b.text()),
            Expr::Mul(a, b) => format!("{} * {}", a.text(), b.text()),
            Expr::DivInt(a, n) => format!("({}) / {n}", a.text()),
        }
    }

    pub fn value(&self) -> Op {
        let m = |c: XLaurent| DiffOp::multiplication(c);
        match self {
            Expr::Int(n) => m(XLaurent::constant(int(*n))),
            Expr::X => m(XLaurent::x()),
            Expr::Eps => m(XLaurent::term(int(1), 1, 0)),
            Expr::D => DiffOp::d_pow(1),
            Expr::DPow(k) => DiffOp::d_pow(*k as usize),
            Expr::XPow(k) => m(XLaurent::term(int(1), 0, *k)),
            Expr::Neg(a) => a.value().neg(),
            Expr::Add(a, b) => a.value().add(&b.value()),
            Expr::Sub(a, b) => a.value().sub(&b.value()),
            Expr::Mul(a, b) => a.value().compose(&b.value()),
            Expr::DivInt(a, n) => a.value().scale(&rat(1, *n)),
        }
    }
}

pub fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (-12i64..=12).prop_map(Expr::Int),
        Just(Expr::X),
        Just(Expr::Eps),
        Just(Expr::D),
        (0u32..=4).prop_map(Expr::DPow),
        (-4i32..=4).prop_map(Expr::XPow),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner, 1i64..=9).prop_map(|(a, n)| Expr::DivInt(Box::new(a), n)),
        ]
    })
}
