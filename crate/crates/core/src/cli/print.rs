//! Rendering operators as text, JSON and TeX.

use clap::ValueEnum;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::exact::{fmt_rational, parse_rational, Rational, XLaurent};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Tex,
}

/// `c * eps^eps * x^x`, with `c` as `"n"` or `"n/d"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub c: String,
    pub eps: u32,
    pub x: i32,
}

/// The coefficient of `D^d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonCoefficient {
    pub d: usize,
    pub terms: Vec<JsonTerm>,
}

/// Zero coefficients are omitted; `order` is null for the zero operator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonOp {
    pub order: Option<usize>,
    pub coefficients: Vec<JsonCoefficient>,
}

pub fn to_json(op: &DiffOp<XLaurent>) -> JsonOp {
    let coefficients = op
        .coeffs()
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, c)| !c.is_zero())
        .map(|(d, c)| JsonCoefficient {
            d,
            terms: c.monomials().map(|(x, eps, r)| JsonTerm { c: fmt_rational(r), eps, x }).collect(),
        })
        .collect();
    JsonOp { order: op.order(), coefficients }
}

pub fn from_json(j: &JsonOp) -> Result<DiffOp<XLaurent>> {
    let len = j.coefficients.iter().map(|c| c.d + 1).max().unwrap_or(0);
    let mut coeffs = vec![XLaurent::zero(); len];
    for c in &j.coefficients {
        for t in &c.terms {
            let r = parse_rational(&t.c)
                .ok_or_else(|| Error::InvalidArgument(format!("bad rational `{}` in D^{} coefficient", t.c, c.d)))?;
            coeffs[c.d].add_assign_ref(&XLaurent::term(r, t.eps, t.x));
        }
    }
    let op = DiffOp::new(coeffs);
    if op.order() != j.order {
        return Err(Error::InvalidArgument(format!(
            "declared order {:?} does not match the coefficients ({:?})",
            j.order,
            op.order()
        )));
    }
    Ok(op)
}

fn tex_monomial(c: &Rational, e: u32, n: i32) -> String {
    let mut num: Vec<String> = Vec::new();
    let mag = c.abs();
    let numer = mag.numer().to_string();
    let denom = mag.denom().clone();
    match e {
        0 => {}
        1 => num.push("\\epsilon".into()),
        e => num.push(format!("\\epsilon^{{{e}}}")),
    }
    match n {
        1 => num.push("x".into()),
        n if n > 1 => num.push(format!("x^{{{n}}}")),
        _ => {}
    }
    if numer != "1" || num.is_empty() {
        num.insert(0, numer);
    }
    let mut den: Vec<String> = Vec::new();
    if !denom.is_one() {
        den.push(denom.to_string());
    }
    match n {
        -1 => den.push("x".into()),
        n if n < -1 => den.push(format!("x^{{{}}}", -n)),
        _ => {}
    }
    let top = num.join(" ");
    if den.is_empty() {
        top
    } else {
        format!("\\frac{{{top}}}{{{}}}", den.join(" "))
    }
}

fn tex_coefficient(c: &XLaurent) -> String {
    let mut s = String::new();
    for (i, (n, e, r)) in c.monomials().enumerate() {
        match (i, r.is_negative()) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        s.push_str(&tex_monomial(r, e, n));
    }
    s
}

/// Reference-style TeX: `\frac{d^{k}}{dx^{k}}` for `D^k`, fractions for
/// rational coefficients and negative `x` powers.
pub fn to_tex(op: &DiffOp<XLaurent>) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (k, c) in op.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let d = match k {
            0 => String::new(),
            1 => "\\frac{d}{dx}".into(),
            k => format!("\\frac{{d^{{{k}}}}}{{dx^{{{k}}}}}"),
        };
        let coeff = if c.is_one() && k > 0 {
            String::new()
        } else if c.monomial_count() == 1 || k == 0 {
            tex_coefficient(c)
        } else {
            format!("\\left({}\\right)", tex_coefficient(c))
        };
        parts.push(format!("{coeff}{d}"));
    }
    if parts.is_empty() {
        return "0".into();
    }
    let mut s = parts[0].clone();
    for p in &parts[1..] {
        match p.strip_prefix('-') {
            Some(rest) => {
                s.push_str(" - ");
                s.push_str(rest);
            }
            None => {
                s.push_str(" + ");
                s.push_str(p);
            }
        }
    }
    s
}

/// Renders `op`; the text form is accepted back by the parser.
pub fn print_op(op: &DiffOp<XLaurent>, format: Format) -> String {
    match format {
        Format::Text => op.to_string(),
        Format::Json => serde_json::to_string_pretty(&to_json(op)).expect("serializable"),
        Format::Tex => to_tex(op),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::parse::parse_op;
    use crate::opdata::{make_cal_l, make_l1, make_l2};

    #[test]
    fn json_round_trip() {
        for op in [make_l1(), make_l2(), make_cal_l(), DiffOp::zero()] {
            let text = print_op(&op, Format::Json);
            let back: JsonOp = serde_json::from_str(&text).unwrap();
            assert_eq!(from_json(&back).unwrap(), op);
        }
    }

    #[test]
    fn json_rejects_order_mismatch() {
        let mut j = to_json(&make_cal_l());
        j.order = Some(4);
        assert!(from_json(&j).is_err());
    }

    #[test]
    fn tex_matches_reference_style() {
        let op = parse_op("D^3 - (26/x^2)*D - 28/x^3 + x^6/5832").unwrap();
        assert_eq!(
            to_tex(&op),
            "\\frac{d^{3}}{dx^{3}} - \\frac{26}{x^{2}}\\frac{d}{dx} - \\frac{28}{x^{3}} + \\frac{x^{6}}{5832}"
        );
        let op = parse_op("(eps^2/216 + x^3/108)*D^5").unwrap();
        assert_eq!(
            to_tex(&op),
            "\\left(\\frac{\\epsilon^{2}}{216} + \\frac{x^{3}}{108}\\right)\\frac{d^{5}}{dx^{5}}"
        );
        assert_eq!(to_tex(&DiffOp::zero()), "0");
    }

    #[test]
    fn text_round_trip() {
        for op in [make_l1(), make_l2(), make_cal_l()] {
            assert_eq!(parse_op(&print_op(&op, Format::Text)).unwrap(), op);
        }
    }
}
