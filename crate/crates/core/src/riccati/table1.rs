//! Effect of `y = 1/z` on the classical equations of mathematical physics.

use serde::Serialize;

use super::{conformal_transform, LinearODE2, MobiusMap};
use crate::error::Result;
use crate::expr::{fmt_q, q, Polynomial, RationalExpr, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Table1Verdict {
    /// Computed image equals the printed one up to a factor.
    Exact,
    /// Printed "Same", but the computed image is the source with `q -> -q`.
    SameUpToDampingSign,
    Mismatch,
}

#[derive(Debug, Clone, Serialize)]
pub struct Table1Row {
    pub class: &'static str,
    pub params: String,
    pub source: String,
    pub printed: String,
    pub computed: String,
    pub verdict: Table1Verdict,
}

fn poly(cs: &[Q]) -> RationalExpr {
    RationalExpr::from_poly(Polynomial::new(cs.to_vec()))
}

fn c(v: Q) -> RationalExpr {
    RationalExpr::constant(v)
}

fn show(ode: &LinearODE2) -> String {
    format!("p = {}; q = {}; r = {}", ode.p, ode.q, ode.r)
}

struct Case {
    class: &'static str,
    params: String,
    source: LinearODE2,
    /// `None` where the table prints "Same".
    printed: Option<LinearODE2>,
}

fn ode(p: RationalExpr, qq: RationalExpr, r: RationalExpr) -> LinearODE2 {
    LinearODE2::new(p, qq, r).expect("nonzero leading coefficient")
}

fn cases() -> Vec<Case> {
    let zero = Q::from_integer(0.into());
    let one = Q::from_integer(1.into());
    let mut out = Vec::new();

    for (a, b, cc) in [(1, 3, 2), (2, -1, 5), (1, 0, 4)] {
        out.push(Case {
            class: "constant coefficient",
            params: format!("a = {a}, b = {b}, c = {cc}"),
            source: ode(RationalExpr::int(a), RationalExpr::int(b), RationalExpr::int(cc)),
            printed: None,
        });
    }
    for n in 1..=3i64 {
        let nn = q(n * (n + 1), 1);
        out.push(Case {
            class: "Legendre",
            params: format!("n = {n}"),
            source: ode(
                poly(&[one.clone(), zero.clone(), -one.clone()]),
                poly(&[zero.clone(), q(-2, 1)]),
                c(nn.clone()),
            ),
            printed: Some(ode(poly(&[one.clone(), zero.clone(), -one.clone()]), RationalExpr::zero(), c(nn))),
        });
    }
    for n in 1..=3i64 {
        out.push(Case {
            class: "Hermite",
            params: format!("n = {n}"),
            source: ode(RationalExpr::one(), poly(&[zero.clone(), q(-2, 1)]), RationalExpr::int(2 * n)),
            printed: Some(ode(RationalExpr::one(), poly(&[zero.clone(), q(2, 1)]), RationalExpr::int(2 * n))),
        });
    }
    for n in 0..=3i64 {
        let n2 = q(n * n, 1);
        let x2_minus = poly(&[-n2.clone(), zero.clone(), one.clone()]);
        let x2_plus = poly(&[n2.clone(), zero.clone(), one.clone()]);
        let x3_minus = poly(&[zero.clone(), -n2.clone(), zero.clone(), one.clone()]);
        let x2 = poly(&[zero.clone(), zero.clone(), one.clone()]);
        out.push(Case {
            class: "Bessel",
            params: format!("n = {n}"),
            source: ode(x2.clone(), RationalExpr::x(), x2_minus.clone()),
            printed: Some(ode(
                RationalExpr::one(),
                -x2_plus.try_div(&x3_minus).expect("nonzero"),
                x2_minus.try_div(&x2).expect("nonzero"),
            )),
        });
    }
    for n in 1..=3i64 {
        out.push(Case {
            class: "Laguerre",
            params: format!("n = {n}"),
            source: ode(RationalExpr::x(), poly(&[one.clone(), -one.clone()]), RationalExpr::int(n)),
            printed: Some(ode(
                RationalExpr::one(),
                RationalExpr::one(),
                RationalExpr::int(n).try_div(&RationalExpr::x()).expect("nonzero"),
            )),
        });
    }
    for h in [q(1, 1), q(2, 1), q(1, 2)] {
        out.push(Case {
            class: "Chebyshev",
            params: format!("h = {}", fmt_q(&h)),
            source: ode(
                poly(&[one.clone(), zero.clone(), -one.clone()]),
                poly(&[zero.clone(), -one.clone()]),
                c(&h * &h),
            ),
            printed: None,
        });
    }
    for (a, b, g) in [(q(1, 2), q(1, 1), q(2, 1)), (q(2, 1), q(3, 1), q(1, 2)), (q(1, 1), q(1, 1), q(3, 1))] {
        let x_one_minus = poly(&[zero.clone(), one.clone(), -one.clone()]);
        let ab = &a * &b;
        out.push(Case {
            class: "hypergeometric",
            params: format!("alpha = {}, beta = {}, gamma = {}", fmt_q(&a), fmt_q(&b), fmt_q(&g)),
            source: ode(x_one_minus.clone(), poly(&[g.clone(), -(&a + &b + &one)]), c(-ab.clone())),
            printed: Some(ode(x_one_minus, poly(&[&one - &g, &a + &b - &one]), c(-ab))),
        });
    }
    out
}

/// Applies the inversion to every instantiated row and compares against the
/// printed image.
pub fn reproduce_table1() -> Result<Vec<Table1Row>> {
    let inv = MobiusMap::inversion();
    cases()
        .into_iter()
        .map(|case| {
            let computed = conformal_transform(&case.source, &inv)?;
            let (printed, verdict) = match &case.printed {
                Some(p) => (show(p), if computed.same_as(p) { Table1Verdict::Exact } else { Table1Verdict::Mismatch }),
                None => {
                    let flipped = ode(case.source.p.clone(), -case.source.q.clone(), case.source.r.clone());
                    let v = if computed.same_as(&case.source) {
                        Table1Verdict::Exact
                    } else if computed.same_as(&flipped) {
                        Table1Verdict::SameUpToDampingSign
                    } else {
                        Table1Verdict::Mismatch
                    };
                    ("Same".to_string(), v)
                }
            };
            Ok(Table1Row {
                class: case.class,
                params: case.params,
                source: show(&case.source),
                printed,
                computed: show(&computed),
                verdict,
            })
        })
        .collect()
}
