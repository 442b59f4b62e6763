//! Second-order nonlinear ODE satisfied by `psi = A + C phi'/phi` when
//! `phi'' + q phi' + r phi = 0`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::RationalExpr;
use crate::numeric::{check_pole_free, rk4_ivp, Grid, GridFn};
use crate::tol::Tolerances;

/// Polynomial in one variable with rational-function coefficients, lowest
/// degree first.
#[derive(Debug, Clone)]
struct Poly(Vec<RationalExpr>);

impl Poly {
    fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly(
            (0..n)
                .map(|i| match (self.0.get(i), o.0.get(i)) {
                    (Some(a), Some(b)) => a + b,
                    (Some(a), None) | (None, Some(a)) => a.clone(),
                    (None, None) => unreachable!(),
                })
                .collect(),
        )
    }

    fn mul(&self, o: &Poly) -> Poly {
        let mut out = vec![RationalExpr::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly(out)
    }

    fn times(&self, e: &RationalExpr) -> Poly {
        Poly(self.0.iter().map(|c| c * e).collect())
    }

    /// `self(inner)` by Horner's rule.
    fn compose(&self, inner: &Poly) -> Poly {
        let mut acc = Poly(vec![RationalExpr::zero()]);
        for c in self.0.iter().rev() {
            acc = acc.mul(inner).add(&Poly(vec![c.clone()]));
        }
        acc
    }

    fn coeff(&self, k: usize) -> RationalExpr {
        self.0.get(k).cloned().unwrap_or_else(RationalExpr::zero)
    }
}

/// Coefficients of `psi^0 .. psi^3` on the right of `C^2 psi'' = ...`,
/// obtained from `s = phi'/phi`, `s' = -s^2 - q s - r`.
fn derived_coefficients(
    q: &RationalExpr,
    r: &RationalExpr,
    a: &RationalExpr,
    c: &RationalExpr,
) -> Result<[RationalExpr; 4]> {
    let (q1, r1) = (q.derivative(), r.derivative());
    let (a2, c1) = (a.derivative().derivative(), c.derivative());
    let c2 = c1.derivative();
    let int = RationalExpr::int;
    let s1 = Poly(vec![-r.clone(), -q.clone(), int(-1)]);
    let s2 =
        Poly(vec![q * r - r1, r.scale(&crate::expr::q(2, 1)) - q1 + q * q, q.scale(&crate::expr::q(3, 1)), int(2)]);
    let cc = c * c;
    let rhs = Poly(vec![&cc * &a2, &cc * &c2])
        .add(&s1.times(&(&cc * &c1).scale(&crate::expr::q(2, 1))))
        .add(&s2.times(&(&cc * c)));
    let inv_c = c.recip()?;
    let s_of_psi = Poly(vec![-(a * &inv_c), inv_c]);
    let p = rhs.compose(&s_of_psi);
    Ok([p.coeff(0), p.coeff(1), p.coeff(2), p.coeff(3)])
}

/// The same coefficients transcribed from the printed equation.
fn printed_coefficients(q: &RationalExpr, r: &RationalExpr, a: &RationalExpr, c: &RationalExpr) -> [RationalExpr; 4] {
    let (q1, r1) = (q.derivative(), r.derivative());
    let (a2, c1) = (a.derivative().derivative(), c.derivative());
    let c2 = c1.derivative();
    let k = |n: i64| RationalExpr::int(n);
    let cc = c * c;
    let c3 = &cc * c;
    let aa = a * a;
    let t3 = k(2);
    let t2 = -(&(&k(3) * &(q * c)) + &(&k(6) * a) + (&k(2) * &c1));
    let t1 = &(&(&(&(&k(-2) * r) + &q1) + &(q * q)) * &cc)
        + &(&(&(&c2 + &(&k(2) * &(q * &c1))) + &(&k(6) * &(a * q))) * c)
        + (&(&k(6) * &aa) + &(&k(4) * &(&c1 * a)));
    let t0 = &(&(&r1 + &(q * r)) * &c3)
        + &(&(&(&(&(&(-q1.clone() - q * q) + &(&k(2) * r)) * a) + &a2) + &(&k(2) * &(&c1 * r))) * &cc)
        + &(&(&(&k(-3) * &(q * &aa)) - &(&(&c2 + &(&k(2) * &(q * &c1))) * a)) * c)
        + (&(&k(-2) * &(&aa * a)) - &(&k(2) * &(&c1 * &aa)));
    [t0, t1, t2, t3]
}

/// Which transcription of the nonlinear equation the oracle accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    Derived,
    Printed,
    /// Both forms are symbolically identical for these inputs.
    Coincident,
}

/// Pointwise least-squares fit of `C^2 psi''` against `psi^3, psi^2, psi, 1`.
#[derive(Debug, Clone, Serialize)]
pub struct FitReport {
    pub x: Vec<f64>,
    /// `[c3, c2, c1, c0]` per abscissa.
    pub coefficients: Vec<[f64; 4]>,
    /// Largest fit residual, relative to `1 + max|C^2 psi''|`.
    pub residual: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    /// Largest normalized residual of each convention over all samples.
    pub derived_residual: f64,
    pub printed_residual: f64,
    pub tolerance: f64,
    pub fit: FitReport,
    /// Largest gap between fitted and symbolic coefficients.
    pub fit_vs_derived: f64,
    pub fit_vs_printed: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct NonlinearODEForm {
    /// `[psi^3, psi^2, psi, 1]` coefficients of `C^2 psi''`, derived.
    pub derived: [String; 4],
    /// Same, as printed.
    pub printed: [String; 4],
    pub sign_convention: Convention,
    pub oracle: OracleReport,
    #[serde(skip)]
    pub derived_exprs: [RationalExpr; 4],
    #[serde(skip)]
    pub printed_exprs: [RationalExpr; 4],
}

impl NonlinearODEForm {
    /// Coefficients of the accepted convention, highest degree first.
    pub fn coefficients(&self) -> [RationalExpr; 4] {
        let src = match self.sign_convention {
            Convention::Printed => &self.printed_exprs,
            _ => &self.derived_exprs,
        };
        [src[3].clone(), src[2].clone(), src[1].clone(), src[0].clone()]
    }
}

/// `psi = A + C phi'/phi` and `C^2 psi''` on the grid, with `psi''` built
/// from `phi, phi'` through the linear equation itself.
fn psi_and_rhs(
    q: &RationalExpr,
    r: &RationalExpr,
    a: &RationalExpr,
    c: &RationalExpr,
    phi: &GridFn,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let d1 = phi.first_derivative();
    let xs = phi.grid.points();
    let ev = |e: &RationalExpr| -> Result<Vec<f64>> { xs.iter().map(|&x| e.eval(x)).collect() };
    let (qv, q1v, rv, r1v) = (ev(q)?, ev(&q.derivative())?, ev(r)?, ev(&r.derivative())?);
    let (av, a2v) = (ev(a)?, ev(&a.derivative().derivative())?);
    let (cv, c1v, c2v) = (ev(c)?, ev(&c.derivative())?, ev(&c.derivative().derivative())?);
    let mut psi = Vec::with_capacity(xs.len());
    let mut lhs = Vec::with_capacity(xs.len());
    for i in 0..xs.len() {
        let (f, f1) = (phi.values[i], d1[i]);
        let f2 = -qv[i] * f1 - rv[i] * f;
        let f3 = -q1v[i] * f1 - qv[i] * f2 - r1v[i] * f - rv[i] * f1;
        let s = f1 / f;
        let s1 = f2 / f - s * s;
        let s2 = f3 / f - 3.0 * s * f2 / f + 2.0 * s * s * s;
        psi.push(av[i] + cv[i] * s);
        let p2 = a2v[i] + c2v[i] * s + 2.0 * c1v[i] * s1 + cv[i] * s2;
        lhs.push(cv[i] * cv[i] * p2);
    }
    Ok((psi, lhs))
}

/// Fits `C^2 psi''` pointwise against `{psi^3, psi^2, psi, 1}` over the
/// supplied solutions `phi` (each carrying `phi'`).
pub fn coefficient_fit_oracle(
    q: &RationalExpr,
    r: &RationalExpr,
    a: &RationalExpr,
    c: &RationalExpr,
    phis: &[GridFn],
) -> Result<FitReport> {
    if phis.len() < 4 {
        return Err(Error::IllConditioned(format!("{} samples for 4 unknowns", phis.len())));
    }
    let grid = phis[0].grid;
    if phis.iter().any(|p| p.grid != grid) {
        return Err(Error::Dimension("sample solutions live on different grids".into()));
    }
    let data: Vec<(Vec<f64>, Vec<f64>)> = phis.iter().map(|p| psi_and_rhs(q, r, a, c, p)).collect::<Result<_>>()?;
    let scale = 1.0 + data.iter().flat_map(|(_, l)| l.iter()).fold(0.0f64, |m, v| m.max(v.abs()));
    let m = phis.len();
    let mut coefficients = Vec::with_capacity(grid.len());
    let mut residual = 0.0f64;
    for i in 0..grid.len() {
        let design = DMatrix::from_fn(m, 4, |j, k| data[j].0[i].powi(3 - k as i32));
        let target = DVector::from_fn(m, |j, _| data[j].1[i]);
        let svd = design.clone().svd(true, true);
        let (smax, smin) = (svd.singular_values.max(), svd.singular_values.min());
        if smin.is_nan() || smin <= 1e-12 * smax {
            return Err(Error::IllConditioned(format!(
                "collinear samples at x = {} (singular values {smin:e}/{smax:e})",
                grid.x(i)
            )));
        }
        let sol = svd.solve(&target, 1e-14 * smax).map_err(|e| Error::IllConditioned(e.to_string()))?;
        residual = residual.max((&design * &sol - &target).amax() / scale);
        coefficients.push([sol[0], sol[1], sol[2], sol[3]]);
    }
    Ok(FitReport { x: grid.points(), coefficients, residual, samples: m })
}

/// RK4 solutions of `phi'' + q phi' + r phi = 0` from `phi(a) = 1` with a
/// spread of slopes, keeping those that stay nonvanishing on the interval.
pub fn sample_solutions(q: &RationalExpr, r: &RationalExpr, grid: &Grid) -> Result<Vec<GridFn>> {
    const SLOPES: [f64; 10] = [-2.0, -1.0, -0.5, -0.25, 0.0, 0.25, 0.5, 1.0, 2.0, 3.0];
    let mut out = Vec::new();
    for s in SLOPES {
        let phi = rk4_ivp(q, r, grid.a(), 1.0, s, grid)?;
        let min = phi.values.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
        if phi.first_zero().is_none() && min > 1e-3 * phi.max_abs() {
            out.push(phi);
        }
    }
    Ok(out)
}

fn convention_residual(coeffs: &[RationalExpr; 4], data: &[(Vec<f64>, Vec<f64>)], grid: &Grid) -> Result<f64> {
    let mut worst = 0.0f64;
    let mut scale = 1.0f64;
    for (psi, lhs) in data {
        for i in 0..grid.len() {
            let x = grid.x(i);
            let p = psi[i];
            let rhs = coeffs[3].eval(x)? * p * p * p
                + coeffs[2].eval(x)? * p * p
                + coeffs[1].eval(x)? * p
                + coeffs[0].eval(x)?;
            worst = worst.max((lhs[i] - rhs).abs());
            scale = scale.max(1.0 + lhs[i].abs());
        }
    }
    Ok(worst / scale)
}

fn fit_gap(fit: &FitReport, coeffs: &[RationalExpr; 4]) -> Result<f64> {
    let mut worst = 0.0f64;
    for (x, got) in fit.x.iter().zip(&fit.coefficients) {
        for k in 0..4 {
            let want = coeffs[3 - k].eval(*x)?;
            worst = worst.max((got[k] - want).abs() / (1.0 + want.abs()));
        }
    }
    Ok(worst)
}

/// Builds both transcriptions of the nonlinear equation and lets the
/// residual oracle on `interval` pick the one that holds.
pub fn nonlinear_ode_form(
    q: &RationalExpr,
    r: &RationalExpr,
    a: &RationalExpr,
    c: &RationalExpr,
    interval: (f64, f64),
) -> Result<NonlinearODEForm> {
    nonlinear_ode_form_with(q, r, a, c, interval, &Tolerances::default())
}

pub fn nonlinear_ode_form_with(
    q: &RationalExpr,
    r: &RationalExpr,
    a: &RationalExpr,
    c: &RationalExpr,
    interval: (f64, f64),
    tol: &Tolerances,
) -> Result<NonlinearODEForm> {
    let grid = Grid::new(interval.0, interval.1, 2001)?;
    for e in [q, r, a, c] {
        check_pole_free(e, grid.a(), grid.b(), grid.len())?;
    }
    let inv_c = c.recip().map_err(|_| Error::Vanishing { at: grid.a() })?;
    check_pole_free(&inv_c, grid.a(), grid.b(), grid.len()).map_err(|e| match e {
        Error::Pole { at } => Error::Vanishing { at: at.parse().unwrap_or(f64::NAN) },
        other => other,
    })?;

    let derived = derived_coefficients(q, r, a, c)?;
    let printed = printed_coefficients(q, r, a, c);

    let phis = sample_solutions(q, r, &grid)?;
    if phis.len() < 4 {
        return Err(Error::OracleInconclusive(format!(
            "only {} nonvanishing validation solutions on [{}, {}]",
            phis.len(),
            interval.0,
            interval.1
        )));
    }
    let data: Vec<(Vec<f64>, Vec<f64>)> = phis.iter().map(|p| psi_and_rhs(q, r, a, c, p)).collect::<Result<_>>()?;
    let derived_residual = convention_residual(&derived, &data, &grid)?;
    let printed_residual = convention_residual(&printed, &data, &grid)?;
    let fit = coefficient_fit_oracle(q, r, a, c, &phis)?;
    let fit_vs_derived = fit_gap(&fit, &derived)?;
    let fit_vs_printed = fit_gap(&fit, &printed)?;
    let limit = tol.analytic;

    let sign_convention = if derived == printed {
        Convention::Coincident
    } else if derived_residual <= limit {
        Convention::Derived
    } else if printed_residual <= limit {
        Convention::Printed
    } else {
        return Err(Error::OracleInconclusive(format!(
            "neither form holds: derived {derived_residual:e}, printed {printed_residual:e}"
        )));
    };
    Ok(NonlinearODEForm {
        derived: derived.clone().map(|e| e.to_string()).into_iter().rev().collect::<Vec<_>>().try_into().expect("four"),
        printed: printed.clone().map(|e| e.to_string()).into_iter().rev().collect::<Vec<_>>().try_into().expect("four"),
        sign_convention,
        oracle: OracleReport {
            derived_residual,
            printed_residual,
            tolerance: limit,
            fit,
            fit_vs_derived,
            fit_vs_printed,
        },
        derived_exprs: derived,
        printed_exprs: printed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Polynomial;

    fn poly(cs: &[i64]) -> RationalExpr {
        RationalExpr::from_poly(Polynomial::from_i64s(cs))
    }

    fn zero() -> RationalExpr {
        RationalExpr::zero()
    }

    fn one() -> RationalExpr {
        RationalExpr::one()
    }

    #[test]
    fn simplest_instance_in_closed_form() {
        // q = 0, r = -1, A = 0, C = 1: psi = tanh x from phi = cosh x.
        let r = RationalExpr::int(-1);
        let d = derived_coefficients(&zero(), &r, &zero(), &one()).unwrap();
        let p = printed_coefficients(&zero(), &r, &zero(), &one());
        assert_eq!(d, [zero(), RationalExpr::int(-2), zero(), RationalExpr::int(2)]);
        assert_eq!(p, [zero(), RationalExpr::int(2), zero(), RationalExpr::int(2)]);
        for x in [-1.0, -0.3, 0.4, 1.2] {
            let t = f64::tanh(x);
            let exact = -2.0 * t / x.cosh().powi(2);
            assert!((2.0 * t.powi(3) - 2.0 * t - exact).abs() < 1e-14);
            assert!((2.0 * t.powi(3) + 2.0 * t - exact).abs() > 1e-2 || t.abs() < 1e-3);
        }
    }

    #[test]
    fn derived_form_matches_hand_expansion() {
        // C^2 psi'' = 2 psi^3 + (3qC - 6A - 2C') psi^2 + ... : check psi^2 and psi^3.
        let (q, r, a, c) = (poly(&[0, 1]), poly(&[2, 0, 1]), poly(&[1, 1]), poly(&[3, 1]));
        let d = derived_coefficients(&q, &r, &a, &c).unwrap();
        assert_eq!(d[3], RationalExpr::int(2));
        let k = |n| RationalExpr::int(n);
        assert_eq!(d[2], &(&(&k(3) * &(&q * &c)) - &(&k(6) * &a)) - &(&k(2) * &c.derivative()));
    }

    #[test]
    fn oracle_selects_derived_convention() {
        let form = nonlinear_ode_form(&zero(), &RationalExpr::int(-1), &zero(), &one(), (-1.0, 1.0)).unwrap();
        assert_eq!(form.sign_convention, Convention::Derived);
        assert!(form.oracle.derived_residual <= 1e-8, "{:?}", form.oracle.derived_residual);
        assert!(form.oracle.printed_residual > 1e-2);
        assert!(form.oracle.fit.residual <= 1e-8);
        assert!(form.oracle.fit_vs_derived <= 1e-6, "{}", form.oracle.fit_vs_derived);
        for c in &form.oracle.fit.coefficients {
            assert!((c[0] - 2.0).abs() < 1e-6 && c[1].abs() < 1e-6 && (c[2] + 2.0).abs() < 1e-6 && c[3].abs() < 1e-6);
        }
    }

    #[test]
    fn zero_potential_coincides() {
        let form = nonlinear_ode_form(&zero(), &zero(), &zero(), &one(), (0.0, 1.0)).unwrap();
        assert_eq!(form.sign_convention, Convention::Coincident);
        assert_eq!(form.derived, ["2", "0", "0", "0"].map(String::from));
        assert!(form.oracle.derived_residual <= 1e-8);
    }

    #[test]
    fn generic_rational_potential() {
        let r = poly(&[1, 0, 1]).try_div(&poly(&[2, 1])).unwrap();
        let form = nonlinear_ode_form(&zero(), &r, &zero(), &one(), (0.0, 1.0)).unwrap();
        assert_eq!(form.sign_convention, Convention::Derived);
        assert!(form.oracle.derived_residual <= 1e-8);
    }

    #[test]
    fn variable_map_and_damping() {
        let (q, r, a, c) = (poly(&[1, 1]), poly(&[-1, 0, 1]), poly(&[0, 1]), poly(&[2, 1]));
        let form = nonlinear_ode_form(&q, &r, &a, &c, (0.0, 0.8)).unwrap();
        assert_eq!(form.sign_convention, Convention::Derived);
        assert!(form.oracle.derived_residual <= 1e-8);
    }

    #[test]
    fn hermite_fit() {
        let (q, r) = (poly(&[0, -2]), RationalExpr::int(2));
        let g = Grid::new(0.0, 1.0, 401).unwrap();
        let phis = sample_solutions(&q, &r, &g).unwrap();
        let fit = coefficient_fit_oracle(&q, &r, &zero(), &one(), &phis).unwrap();
        assert!(fit.residual <= 1e-6, "{}", fit.residual);
    }

    #[test]
    fn collinear_samples_rejected() {
        let g = Grid::new(0.0, 1.0, 11).unwrap();
        let phi = GridFn::sample(g, |x| 1.0 + x).with_deriv(vec![1.0; 11]).unwrap();
        let same = vec![phi; 5];
        assert!(matches!(
            coefficient_fit_oracle(&zero(), &zero(), &zero(), &one(), &same),
            Err(Error::IllConditioned(_))
        ));
        assert!(matches!(
            coefficient_fit_oracle(&zero(), &zero(), &zero(), &one(), &same[..3]),
            Err(Error::IllConditioned(_))
        ));
    }

    #[test]
    fn vanishing_c_rejected() {
        assert!(nonlinear_ode_form(&zero(), &zero(), &zero(), &poly(&[0, 1]), (-1.0, 1.0)).is_err());
    }
}
