//! Conformal-equivalence invariants.
//!
//! For a monic target `w'' + q1 w' + r1 w = 0` reached from a source through
//! a Mobius map, `r1 = q1^2/4 + q1'/2 + R1`, where `R1` depends only on the
//! source and the map's `alpha` (with `beta` fixed to 1 or 0).

mod table2;

pub use table2::{regenerate_table2, Table2Entry, Table2Report, Table2Verdict};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::RationalExpr;
use crate::riccati::LinearODE2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `beta = 0`, `delta = 1`.
    Beta0,
    /// `beta = 1` with a fixed `alpha`.
    Beta1AlphaFixed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantReport {
    pub branch: Branch,
    pub alpha: Option<RationalExpr>,
    pub r1: RationalExpr,
    pub n1: Option<RationalExpr>,
    pub d1: Option<RationalExpr>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceVerdict {
    pub equivalent: bool,
    pub branch: Branch,
    /// Invariant of the first (source) and second (target) equation.
    pub witness: (RationalExpr, RationalExpr),
    pub notes: Vec<String>,
}

/// `(1, q/p, r/p)`.
pub fn normalize_to_monic(ode: &LinearODE2) -> Result<LinearODE2> {
    if ode.p.is_zero() {
        return Err(Error::DegenerateOde);
    }
    Ok(ode.monic())
}

/// `r - q^2/4 - q'/2` of the monic form.
pub fn invariant_beta0(ode: &LinearODE2) -> Result<InvariantReport> {
    let m = normalize_to_monic(ode)?;
    Ok(InvariantReport {
        branch: Branch::Beta0,
        alpha: None,
        r1: normal_form_invariant(&m.q, &m.r),
        n1: None,
        d1: None,
    })
}

pub(crate) fn normal_form_invariant(q: &RationalExpr, r: &RationalExpr) -> RationalExpr {
    r - &(q * q).scale(&crate::expr::q(1, 4)) - q.derivative().scale(&crate::expr::q(1, 2))
}

fn k(n: i64) -> RationalExpr {
    RationalExpr::int(n)
}

/// Numerator of the `beta = 1` invariant, transcribed term by term.
pub fn appendix_numerator(a: &RationalExpr, q: &RationalExpr, r: &RationalExpr) -> RationalExpr {
    numerator_with(a, q, r, false)
}

/// The numerator with the two suspect terms read as `2 alpha alpha'` (in the
/// `alpha''` coefficient) and `-3 (q')^2` (in the `alpha^2` bracket).
pub fn appendix_numerator_amended(a: &RationalExpr, q: &RationalExpr, r: &RationalExpr) -> RationalExpr {
    numerator_with(a, q, r, true)
}

fn numerator_with(a: &RationalExpr, q: &RationalExpr, r: &RationalExpr, amended: bool) -> RationalExpr {
    let a1 = a.derivative();
    let a2 = a1.derivative();
    let a3 = a2.derivative();
    let q1 = q.derivative();
    let q2 = q1.derivative();
    let r1 = r.derivative();
    let r2 = r1.derivative();
    let sq = |e: &RationalExpr| e * e;
    let cube = |e: &RationalExpr| &(e * e) * e;

    let t1 = k(2) * (sq(a) + a * q + a1.clone() + r.clone()) * a3.clone();
    let t2 = k(-3) * sq(&a2);
    let lead = if amended { k(2) * a * &a1 } else { k(2) * a.clone() };
    let t3 = k(-6) * (lead + (q * a).derivative() + r1.clone()) * a2.clone();
    let t4 = k(12) * cube(&a1);
    let t5 = k(6) * (k(4) * r.clone() + q1.clone() - sq(q)) * sq(&a1);
    let bracket_a1 = k(4) * (k(4) * r.clone() - k(2) * q1.clone() - sq(q)) * sq(a)
        + k(2) * (q2.clone() + k(8) * q * r - k(8) * r1.clone() - k(2) * cube(q)) * a.clone()
        + k(8) * r * (k(2) * r.clone() + q1.clone())
        - k(4) * q * (q * r + k(2) * r1.clone())
        + k(2) * r2.clone();
    let t6 = bracket_a1 * a1.clone();
    let t7 = (k(4) * r.clone() - k(2) * q1.clone() - sq(q)) * sq(&sq(a));
    let t8 = k(2) * (q2.clone() - k(2) * r1.clone() - cube(q) + k(4) * q * r - &q1 * q) * cube(a);
    let t9 =
        (k(8) * sq(r) - sq(&sq(q)) + k(2) * sq(q) * r.clone() + (k(2) * q2.clone() - k(6) * r1.clone()) * q.clone()
            - k(3) * if amended { sq(&q1) } else { q2.clone() }
            + k(2) * r2.clone())
            * sq(a);
    let t10 =
        (k(8) * q * &sq(r) + k(2) * (q2.clone() + &q1 * q - k(2) * r1.clone() - cube(q)) * r.clone() + k(2) * &r2 * q
            - k(2) * sq(q) * r1.clone()
            - k(6) * &r1 * &q1)
            * a.clone();
    let t11 = k(4) * cube(r) + (k(2) * q1.clone() - sq(q)) * sq(r) + (k(2) * r2 - k(2) * q * &r1) * r.clone()
        - k(3) * sq(&r1);
    t1 + t2 + t3 + t4 + t5 + t6 + t7 + t8 + t9 + t10 + t11
}

/// `4 [alpha (alpha + q) + alpha' + r]`.
pub fn appendix_denominator(a: &RationalExpr, q: &RationalExpr, r: &RationalExpr) -> RationalExpr {
    k(4) * (a * &(a + q) + a.derivative() + r.clone())
}

/// The `beta = 1`, fixed-`alpha` invariant `R1 = N1/D1` on the monic form.
pub fn invariant_beta1(ode: &LinearODE2, alpha: &RationalExpr) -> Result<InvariantReport> {
    let m = normalize_to_monic(ode)?;
    let n1 = appendix_numerator(alpha, &m.q, &m.r);
    let d1 = appendix_denominator(alpha, &m.q, &m.r);
    if d1.is_zero() {
        return Err(Error::SingularBranch("alpha (alpha + q) + alpha' + r vanishes identically".into()));
    }
    Ok(InvariantReport {
        branch: Branch::Beta1AlphaFixed,
        alpha: Some(alpha.clone()),
        r1: n1.try_div(&d1)?,
        n1: Some(n1),
        d1: Some(d1),
    })
}

/// `beta = 1` invariant from the amended numerator over `4 K^2`, with
/// `K = alpha (alpha + q) + alpha' + r`. Agrees with the normal-form
/// invariant of `conformal_transform(ode, (alpha, 1, gamma, delta))` for
/// every `gamma`, `delta`.
pub fn invariant_beta1_amended(ode: &LinearODE2, alpha: &RationalExpr) -> Result<InvariantReport> {
    let m = normalize_to_monic(ode)?;
    let kk = alpha * &(alpha + &m.q) + alpha.derivative() + m.r.clone();
    if kk.is_zero() {
        return Err(Error::SingularBranch("alpha (alpha + q) + alpha' + r vanishes identically".into()));
    }
    let n1 = appendix_numerator_amended(alpha, &m.q, &m.r);
    let d1 = k(4) * &kk * kk.clone();
    Ok(InvariantReport {
        branch: Branch::Beta1AlphaFixed,
        alpha: Some(alpha.clone()),
        r1: n1.try_div(&d1)?,
        n1: Some(n1),
        d1: Some(d1),
    })
}

pub fn equivalent_beta0(a: &LinearODE2, b: &LinearODE2) -> Result<EquivalenceVerdict> {
    let ia = invariant_beta0(a)?.r1;
    let ib = invariant_beta0(b)?.r1;
    Ok(EquivalenceVerdict { equivalent: ia == ib, branch: Branch::Beta0, witness: (ia, ib), notes: Vec::new() })
}

/// Whether `target` satisfies `r1 = q1^2/4 + q1'/2 + R1(source, alpha)`.
pub fn equivalent_beta1(source: &LinearODE2, target: &LinearODE2, alpha: &RationalExpr) -> Result<EquivalenceVerdict> {
    let rs = invariant_beta1(source, alpha)?.r1;
    let rt = invariant_beta0(target)?.r1;
    let mut notes = Vec::new();
    let amended = invariant_beta1_amended(source, alpha)?.r1;
    if amended != rs {
        notes.push(format!(
            "printed appendix formula gives {rs}; amended formula gives {amended} (equivalent: {})",
            amended == rt
        ));
    }
    Ok(EquivalenceVerdict { equivalent: rs == rt, branch: Branch::Beta1AlphaFixed, witness: (rs, rt), notes })
}
