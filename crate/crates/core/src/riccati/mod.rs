//! Linear second-order ODEs, their Riccati images, and the action of
//! linear fractional (Mobius) maps on both.
//!
//! The chain is `w -> y = w'/w -> y = (a z + g)/(b z + d) -> z = -u'/(F u)`,
//! which turns `p w'' + q w' + r w = 0` into another linear equation for `u`.

mod table1;

pub use table1::{reproduce_table1, Table1Row, Table1Verdict};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{equal_up_to_factor, RationalExpr, Q};
use crate::numeric::{check_pole_free, cumulative_simpson, first_zero_of, GridFn};

/// `p w'' + q w' + r w = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearODE2 {
    pub p: RationalExpr,
    pub q: RationalExpr,
    pub r: RationalExpr,
}

impl LinearODE2 {
    pub fn new(p: RationalExpr, q: RationalExpr, r: RationalExpr) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::DegenerateOde);
        }
        Ok(LinearODE2 { p, q, r })
    }

    /// The projective pair `(q/p, r/p)`.
    pub fn normalized(&self) -> (RationalExpr, RationalExpr) {
        (self.q.try_div(&self.p).expect("p is nonzero"), self.r.try_div(&self.p).expect("p is nonzero"))
    }

    /// `(1, q/p, r/p)`.
    pub fn monic(&self) -> LinearODE2 {
        let (q, r) = self.normalized();
        LinearODE2 { p: RationalExpr::one(), q, r }
    }

    /// Same equation up to an overall nonzero factor.
    pub fn same_as(&self, other: &LinearODE2) -> bool {
        equal_up_to_factor((&self.p, &self.q, &self.r), (&other.p, &other.q, &other.r))
            .expect("both leading coefficients are nonzero")
    }

    /// Multiplies through by `factor`.
    pub fn scaled(&self, factor: &RationalExpr) -> Result<LinearODE2> {
        LinearODE2::new(factor * &self.p, factor * &self.q, factor * &self.r)
    }

    /// Multiplies through by the least common denominator so that all three
    /// coefficients are polynomials, then scales so `p` has the same leading
    /// coefficient sign as `p_hint` (if given). Purely cosmetic.
    pub fn cleared(&self) -> LinearODE2 {
        let m = self.monic();
        let lcm = {
            let a = m.q.denom();
            let b = m.r.denom();
            let g = a.gcd(b);
            let (ab, _) = (a * b).div_rem(&g);
            ab
        };
        let f = RationalExpr::from_poly(lcm);
        m.scaled(&f).expect("nonzero factor")
    }
}

/// `z' = F z^2 + G z + H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RiccatiEq {
    pub f: RationalExpr,
    pub g: RationalExpr,
    pub h: RationalExpr,
}

impl RiccatiEq {
    /// Set when the quadratic coefficient vanishes; such an equation cannot
    /// be linearized back by `z = -u'/(F u)`.
    pub fn is_degenerate(&self) -> bool {
        self.f.is_zero()
    }
}

/// `y = (alpha z + gamma) / (beta z + delta)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MobiusMap {
    pub alpha: RationalExpr,
    pub beta: RationalExpr,
    pub gamma: RationalExpr,
    pub delta: RationalExpr,
}

impl MobiusMap {
    pub fn new(alpha: RationalExpr, beta: RationalExpr, gamma: RationalExpr, delta: RationalExpr) -> Result<Self> {
        let m = MobiusMap { alpha, beta, gamma, delta };
        if m.det().is_zero() {
            return Err(Error::SingularMap);
        }
        Ok(m)
    }

    pub fn constant(alpha: Q, beta: Q, gamma: Q, delta: Q) -> Result<Self> {
        Self::new(alpha.into(), beta.into(), gamma.into(), delta.into())
    }

    pub fn identity() -> Self {
        MobiusMap {
            alpha: RationalExpr::one(),
            beta: RationalExpr::zero(),
            gamma: RationalExpr::zero(),
            delta: RationalExpr::one(),
        }
    }

    /// `y = 1/z`.
    pub fn inversion() -> Self {
        MobiusMap {
            alpha: RationalExpr::zero(),
            beta: RationalExpr::one(),
            gamma: RationalExpr::one(),
            delta: RationalExpr::zero(),
        }
    }

    /// `alpha delta - beta gamma`.
    pub fn det(&self) -> RationalExpr {
        &(&self.alpha * &self.delta) - &(&self.beta * &self.gamma)
    }

    pub fn is_constant(&self) -> bool {
        [&self.alpha, &self.beta, &self.gamma, &self.delta].iter().all(|e| e.as_constant().is_some())
    }

    /// `self o inner`: the map `z -> self(inner(z))`, i.e. the 2x2 matrix
    /// product `[[a, g], [b, d]]`.
    pub fn compose(&self, inner: &MobiusMap) -> Result<MobiusMap> {
        let (a1, b1, g1, d1) = (&self.alpha, &self.beta, &self.gamma, &self.delta);
        let (a2, b2, g2, d2) = (&inner.alpha, &inner.beta, &inner.gamma, &inner.delta);
        MobiusMap::new(
            &(a1 * a2) + &(g1 * b2),
            &(b1 * a2) + &(d1 * b2),
            &(a1 * g2) + &(g1 * d2),
            &(b1 * g2) + &(d1 * d2),
        )
    }
}

/// `(a1, b1, a2, b2)` with `y = a1 z1 + b1`, `z1 = 1/z2`, `z2 = a2 z3 + b2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MobiusChain {
    pub a1: Q,
    pub b1: Q,
    pub a2: Q,
    pub b2: Q,
}

impl MobiusChain {
    /// The single map `y = a1/(a2 z + b2) + b1`.
    pub fn recompose(&self) -> Result<MobiusMap> {
        MobiusMap::constant(&self.b1 * &self.a2, self.a2.clone(), &self.a1 + &self.b1 * &self.b2, self.b2.clone())
    }
}

/// `y = w'/w` turns the ODE into `y' = -y^2 - (q/p) y - r/p`.
pub fn ode_to_riccati(ode: &LinearODE2) -> Result<RiccatiEq> {
    if ode.p.is_zero() {
        return Err(Error::DegenerateOde);
    }
    let (qn, rn) = ode.normalized();
    Ok(RiccatiEq { f: RationalExpr::int(-1), g: -qn, h: -rn })
}

/// Riccati equation satisfied by `z` when `y = (alpha z + gamma)/(beta z + delta)`
/// and `y' = F0 y^2 + G0 y + H0`.
///
/// For the canonical input `(F0, G0, H0) = (-1, -q/p, -r/p)` this is term for
/// term the same as [`mobius_apply_canonical`]; the general form is used so
/// that any Riccati equation can be pushed through a map without first
/// changing variables.
pub fn mobius_apply(ric: &RiccatiEq, m: &MobiusMap) -> Result<RiccatiEq> {
    let det = m.det();
    if det.is_zero() {
        return Err(Error::SingularMap);
    }
    let (a, b, g, d) = (&m.alpha, &m.beta, &m.gamma, &m.delta);
    let (da, db, dg, dd) = (a.derivative(), b.derivative(), g.derivative(), d.derivative());
    let (f0, g0, h0) = (&ric.f, &ric.g, &ric.h);

    let f = &(&(&(f0 * &(a * a)) + &(g0 * &(a * b))) + &(h0 * &(b * b))) - &(&(&da * b) - &(a * &db));
    let cross = &(a * d) + &(b * g);
    let g_new = &(&(&(f0 * &(a * g)).scale(&Q::from_integer(2.into())) + &(g0 * &cross))
        + &(h0 * &(b * d)).scale(&Q::from_integer(2.into())))
        - &(&(&(&da * d) - &(a * &dd)) + &(&(&dg * b) - &(g * &db)));
    let h = &(&(&(f0 * &(g * g)) + &(g0 * &(g * d))) + &(h0 * &(d * d))) - &(&(&dg * d) - &(g * &dd));
    Ok(RiccatiEq { f: f.try_div(&det)?, g: g_new.try_div(&det)?, h: h.try_div(&det)? })
}

/// The transformed Riccati coefficients written directly in terms of the
/// ODE's `q/p` and `r/p`:
///
/// ```text
/// F = -[a^2 + a b (q/p) + b^2 (r/p) + (a' b - a b')] / D
/// G = -[2 a g + (a d + b g)(q/p) + 2 b d (r/p) + (a' d - a d') + (g' b - g b')] / D
/// H = -[g^2 + g d (q/p) + d^2 (r/p) + (g' d - g d')] / D
/// ```
pub fn mobius_apply_canonical(ode: &LinearODE2, m: &MobiusMap) -> Result<RiccatiEq> {
    let det = m.det();
    if det.is_zero() {
        return Err(Error::SingularMap);
    }
    let (qp, rp) = ode.normalized();
    let (a, b, g, d) = (&m.alpha, &m.beta, &m.gamma, &m.delta);
    let (da, db, dg, dd) = (a.derivative(), b.derivative(), g.derivative(), d.derivative());
    let two = Q::from_integer(2.into());

    let f = &(&(&(a * a) + &(&(a * b) * &qp)) + &(&(b * b) * &rp)) + &(&(&da * b) - &(a * &db));
    let g_br = &(&(&(&(a * g).scale(&two) + &(&(&(a * d) + &(b * g)) * &qp)) + &(&(b * d).scale(&two) * &rp))
        + &(&(&da * d) - &(a * &dd)))
        + &(&(&dg * b) - &(g * &db));
    let h = &(&(&(g * g) + &(&(g * d) * &qp)) + &(&(d * d) * &rp)) + &(&(&dg * d) - &(g * &dd));
    Ok(RiccatiEq { f: (-f).try_div(&det)?, g: (-g_br).try_div(&det)?, h: (-h).try_div(&det)? })
}

/// `z = -u'/(F u)` turns the Riccati equation into
/// `u'' - (G + F'/F) u' + H F u = 0`.
pub fn riccati_to_ode(ric: &RiccatiEq) -> Result<LinearODE2> {
    if ric.f.is_zero() {
        return Err(Error::Reconstruction);
    }
    let log_f = ric.f.derivative().try_div(&ric.f)?;
    LinearODE2::new(RationalExpr::one(), -(&ric.g + &log_f), &ric.h * &ric.f)
}

/// The conformally equivalent equation obtained through `m`.
pub fn conformal_transform(ode: &LinearODE2, m: &MobiusMap) -> Result<LinearODE2> {
    riccati_to_ode(&mobius_apply(&ode_to_riccati(ode)?, m)?)
}

/// Whether the equation is mapped to itself by `y = 1/z`.
pub fn inversion_invariance_check(ode: &LinearODE2) -> Result<bool> {
    Ok(conformal_transform(ode, &MobiusMap::inversion())?.same_as(ode))
}

/// Splits a constant map with `beta != 0` into affine, inversion, affine.
pub fn decompose_constant(m: &MobiusMap) -> Result<MobiusChain> {
    let (Some(a), Some(b), Some(g), Some(d)) =
        (m.alpha.as_constant(), m.beta.as_constant(), m.gamma.as_constant(), m.delta.as_constant())
    else {
        return Err(Error::NotConstant);
    };
    let det = &a * &d - &b * &g;
    if num_traits::Zero::is_zero(&det) {
        return Err(Error::SingularMap);
    }
    if num_traits::Zero::is_zero(&b) {
        return Err(Error::AffineOnly);
    }
    Ok(MobiusChain { a1: -det / &b, b1: a / &b, a2: b, b2: d })
}

/// The single map equivalent to applying `m1` and then `m2`.
///
/// Between the two steps the intermediate variable is rescaled:
/// `z1 = -u1'/(F1 u1)` while the second step starts from `y2 = u1'/u1`, so
/// `z1 = -y2/F1`. The composite is therefore `m1 o L o m2` with
/// `L = (-1, 0, 0, F1)`, not the bare product `m1 o m2`.
pub fn chain_map(ode: &LinearODE2, m1: &MobiusMap, m2: &MobiusMap) -> Result<MobiusMap> {
    let f1 = mobius_apply(&ode_to_riccati(ode)?, m1)?.f;
    if f1.is_zero() {
        return Err(Error::Reconstruction);
    }
    let link = MobiusMap::new(RationalExpr::int(-1), RationalExpr::zero(), RationalExpr::zero(), f1)?;
    m1.compose(&link.compose(m2)?)
}

/// A transported solution together with the exact logarithmic derivative
/// used to build it.
#[derive(Debug, Clone, Serialize)]
pub struct Transported {
    /// `u`, normalized to 1 at the left end, with `u'` (and `u''` when the
    /// source solution carried an exact derivative).
    #[serde(skip)]
    pub u: GridFn,
    /// `u'/u = F (gamma w - delta w')/(alpha w - beta w')` on the grid.
    pub log_derivative: Vec<f64>,
}

/// Carries a solution `w` of `ode` to a solution `u` of
/// `conformal_transform(ode, m)`:
///
/// `u = exp( int F (gamma w - delta w') / (alpha w - beta w') dx )`.
///
/// `w'` is taken from `w` if carried, else from fourth-order differences.
/// When `w` carries an exact derivative, `u''` is assembled exactly from the
/// source equation; otherwise only `u'` is attached.
pub fn transport_solution(ode: &LinearODE2, m: &MobiusMap, w: &GridFn, f: &RationalExpr) -> Result<Transported> {
    let grid = w.grid;
    let (a, b, n) = (grid.a(), grid.b(), grid.len());
    if f.is_zero() {
        return Err(Error::Reconstruction);
    }
    for e in [f, &m.alpha, &m.beta, &m.gamma, &m.delta, &ode.p, &ode.q, &ode.r] {
        check_pole_free(e, a, b, n).map_err(|err| match err {
            Error::Pole { at } => Error::Grid(format!("coefficient pole near x = {at}")),
            other => other,
        })?;
    }
    let ode_lead_zero = check_pole_free(&ode.p.recip().map_err(|_| Error::DegenerateOde)?, a, b, n);
    if ode_lead_zero.is_err() {
        return Err(Error::Grid("leading coefficient p vanishes on the grid".into()));
    }

    let xs = grid.points();
    let ev = |e: &RationalExpr| -> Result<Vec<f64>> { xs.iter().map(|&x| e.eval(x)).collect() };
    let (al, be, ga, de, fv) = (ev(&m.alpha)?, ev(&m.beta)?, ev(&m.gamma)?, ev(&m.delta)?, ev(f)?);
    let wv = &w.values;
    let wd = w.first_derivative();

    let denom: Vec<f64> = (0..n).map(|i| al[i] * wv[i] - be[i] * wd[i]).collect();
    if let Some(at) = first_zero_of(&grid, &denom) {
        return Err(Error::PoleCrossing { what: "alpha w - beta w'".into(), at });
    }
    let numer: Vec<f64> = (0..n).map(|i| ga[i] * wv[i] - de[i] * wd[i]).collect();
    let g: Vec<f64> = (0..n).map(|i| fv[i] * numer[i] / denom[i]).collect();

    let integral = cumulative_simpson(&g, grid.h());
    let u: Vec<f64> = integral.iter().map(|s| s.exp()).collect();
    let up: Vec<f64> = (0..n).map(|i| u[i] * g[i]).collect();
    let mut out = GridFn::new(grid, u.clone())?.with_deriv(up)?;

    if w.deriv.is_some() {
        // w'' from the source equation, then g' by the quotient rule.
        let (pv, qv, rv) = (ev(&ode.p)?, ev(&ode.q)?, ev(&ode.r)?);
        let d = |e: &RationalExpr| ev(&e.derivative());
        let (dal, dbe, dga, dde, dfv) = (d(&m.alpha)?, d(&m.beta)?, d(&m.gamma)?, d(&m.delta)?, d(f)?);
        let mut u2 = vec![0.0; n];
        for i in 0..n {
            let w2 = -(qv[i] * wd[i] + rv[i] * wv[i]) / pv[i];
            let num_d = dga[i] * wv[i] + ga[i] * wd[i] - dde[i] * wd[i] - de[i] * w2;
            let den_d = dal[i] * wv[i] + al[i] * wd[i] - dbe[i] * wd[i] - be[i] * w2;
            let ratio = numer[i] / denom[i];
            let ratio_d = (num_d * denom[i] - numer[i] * den_d) / (denom[i] * denom[i]);
            let gd = dfv[i] * ratio + fv[i] * ratio_d;
            u2[i] = u[i] * (gd + g[i] * g[i]);
        }
        out = out.with_deriv2(u2)?;
    }
    Ok(Transported { u: out, log_derivative: g })
}
