//! Classical and fractional Darboux transformations of `phi'' = (u + lambda) phi`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{RationalExpr, Q};
use crate::numeric::{check_pole_free, first_zero_of, rk4_ivp, Coefficient, Grid, GridFn};
use crate::riccati::MobiusMap;
use crate::tol::Tolerances;

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Difference step for potentials given without a derivative.
const BLACK_BOX_STEP: f64 = 1e-3;

/// A potential `u(x)`: exact rational, or a black box with an optional
/// analytic derivative.
#[derive(Clone)]
pub enum Potential {
    Rational(RationalExpr),
    Function { f: RealFn, df: Option<RealFn> },
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Potential::Rational(e) => write!(f, "Potential::Rational({e})"),
            Potential::Function { df, .. } => {
                write!(f, "Potential::Function {{ analytic_derivative: {} }}", df.is_some())
            }
        }
    }
}

impl From<RationalExpr> for Potential {
    fn from(e: RationalExpr) -> Self {
        Potential::Rational(e)
    }
}

impl Potential {
    pub fn zero() -> Self {
        Potential::Rational(RationalExpr::zero())
    }

    pub fn function(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Potential::Function { f: Arc::new(f), df: None }
    }

    pub fn function_with_derivative(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        df: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Potential::Function { f: Arc::new(f), df: Some(Arc::new(df)) }
    }

    pub fn as_rational(&self) -> Option<&RationalExpr> {
        match self {
            Potential::Rational(e) => Some(e),
            Potential::Function { .. } => None,
        }
    }

    /// `u'(x)`; black boxes without a derivative use a five-point central
    /// difference with step `step`.
    pub fn derivative_at(&self, x: f64, step: f64) -> Result<f64> {
        match self {
            Potential::Rational(e) => e.derivative().eval(x),
            Potential::Function { df: Some(df), .. } => Ok(df(x)),
            Potential::Function { f, df: None } => {
                let s = step;
                Ok((f(x - 2.0 * s) - 8.0 * f(x - s) + 8.0 * f(x + s) - f(x + 2.0 * s)) / (12.0 * s))
            }
        }
    }

    /// Samples `u` on `grid`, rejecting rational poles in `[a, b]`.
    pub fn sample(&self, grid: &Grid) -> Result<Vec<f64>> {
        if let Potential::Rational(e) = self {
            check_pole_free(e, grid.a(), grid.b(), grid.len())?;
        }
        grid.points().into_iter().map(|x| self.value(x)).collect()
    }
}

impl Coefficient for Potential {
    fn value(&self, x: f64) -> Result<f64> {
        match self {
            Potential::Rational(e) => e.eval(x),
            Potential::Function { f, .. } => {
                let v = f(x);
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::Pole { at: format!("{x}") })
                }
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct SchrodingerProblem {
    pub u: Potential,
    pub lambda: f64,
}

impl SchrodingerProblem {
    pub fn new(u: impl Into<Potential>, lambda: f64) -> Self {
        SchrodingerProblem { u: u.into(), lambda }
    }
}

/// `-(u + c)`, the zeroth-order coefficient of `zeta'' - (u + c) zeta = 0`.
struct Shifted<'a> {
    u: &'a Potential,
    c: f64,
}

impl Coefficient for Shifted<'_> {
    fn value(&self, x: f64) -> Result<f64> {
        Ok(-(self.u.value(x)? + self.c))
    }
}

fn vanishing(f: &GridFn) -> Result<()> {
    match f.first_zero() {
        Some(at) => Err(Error::Vanishing { at }),
        None => Ok(()),
    }
}

/// RK4 solution of `zeta'' = (u + c) zeta` through `(x0, value, slope)`,
/// rejected if it vanishes anywhere on the grid.
pub fn seed_eigenfunction(
    prob: &SchrodingerProblem,
    c: f64,
    x0: f64,
    value: f64,
    slope: f64,
    grid: &Grid,
) -> Result<GridFn> {
    let zero = |_: f64| 0.0;
    let zeta = rk4_ivp(&zero, &Shifted { u: &prob.u, c }, x0, value, slope, grid)?;
    vanishing(&zeta)?;
    Ok(zeta)
}

/// Largest pointwise `|f'' - (u + c) f|` on the grid.
pub fn eigen_residual(u: &[f64], c: f64, f: &GridFn) -> f64 {
    let d2 = f.second_derivative();
    (0..f.len()).map(|i| (d2[i] - (u[i] + c) * f.values[i]).abs()).fold(0.0, f64::max)
}

/// `-f'/f` with its derivative `-f''/f + (f'/f)^2`.
fn neg_log_derivative(f: &GridFn) -> Result<GridFn> {
    let d1 = f.first_derivative();
    let d2 = f.second_derivative();
    let a: Vec<f64> = (0..f.len()).map(|i| -d1[i] / f.values[i]).collect();
    let ap: Vec<f64> = (0..f.len()).map(|i| -d2[i] / f.values[i] + a[i] * a[i]).collect();
    GridFn::new(f.grid, a)?.with_deriv(ap)
}

fn is_analytic(f: &GridFn) -> bool {
    f.deriv.is_some() && f.deriv2.is_some()
}

/// `v = u - 2 (ln zeta)''`, with the log-derivative formed as a ratio.
pub fn classical_darboux(prob: &SchrodingerProblem, zeta: &GridFn) -> Result<GridFn> {
    vanishing(zeta)?;
    let u = prob.u.sample(&zeta.grid)?;
    let d1 = zeta.first_derivative();
    let d2 = zeta.second_derivative();
    let v = (0..zeta.len())
        .map(|i| {
            let l = d1[i] / zeta.values[i];
            u[i] - 2.0 * (d2[i] / zeta.values[i] - l * l)
        })
        .collect();
    GridFn::new(zeta.grid, v)
}

/// `psi = phi' - (zeta'/zeta) phi`, carrying `psi'` assembled from the
/// derivatives of `zeta` and `phi`.
pub fn classical_map(zeta: &GridFn, phi: &GridFn) -> Result<GridFn> {
    same_grid(&zeta.grid, &phi.grid)?;
    vanishing(zeta)?;
    let a = neg_log_derivative(zeta)?;
    let ap = a.deriv.as_ref().expect("attached above");
    let (p1, p2) = (phi.first_derivative(), phi.second_derivative());
    let psi = (0..phi.len()).map(|i| a.values[i] * phi.values[i] + p1[i]).collect();
    let dpsi = (0..phi.len()).map(|i| ap[i] * phi.values[i] + a.values[i] * p1[i] + p2[i]).collect();
    GridFn::new(phi.grid, psi)?.with_deriv(dpsi)
}

fn same_grid(a: &Grid, b: &Grid) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::Dimension("functions live on different grids".into()))
    }
}

/// Two seeds at a shared eigenvalue `c` and their negative log-derivatives
/// `A = -zeta1'/zeta1`, `B = -zeta2'/zeta2` (each carrying its derivative).
#[derive(Debug, Clone)]
pub struct SeedPair {
    pub c: f64,
    pub zeta1: GridFn,
    pub zeta2: GridFn,
    pub a: GridFn,
    pub b: GridFn,
    /// `u` sampled on the seed grid.
    pub u: Vec<f64>,
    /// `u'` on the seed grid.
    pub du: Vec<f64>,
    /// Both seeds carry exact first and second derivatives.
    pub analytic: bool,
}

impl SeedPair {
    pub fn new(prob: &SchrodingerProblem, c: f64, zeta1: GridFn, zeta2: GridFn, tol: &Tolerances) -> Result<Self> {
        same_grid(&zeta1.grid, &zeta2.grid)?;
        vanishing(&zeta1)?;
        vanishing(&zeta2)?;
        let u = prob.u.sample(&zeta1.grid)?;
        for z in [&zeta1, &zeta2] {
            let limit = tol.seed_rel * (1.0 + z.max_abs());
            let residual = eigen_residual(&u, c, z);
            if residual.is_nan() || residual > limit {
                return Err(Error::InvalidSeed { residual, tol: limit });
            }
        }
        let du =
            zeta1.grid.points().into_iter().map(|x| prob.u.derivative_at(x, BLACK_BOX_STEP)).collect::<Result<_>>()?;
        Ok(SeedPair {
            c,
            du,
            a: neg_log_derivative(&zeta1)?,
            b: neg_log_derivative(&zeta2)?,
            analytic: is_analytic(&zeta1) && is_analytic(&zeta2),
            zeta1,
            zeta2,
            u,
        })
    }

    pub fn grid(&self) -> Grid {
        self.zeta1.grid
    }

    fn ap(&self) -> &[f64] {
        self.a.deriv.as_deref().expect("A carries A'")
    }

    fn bp(&self) -> &[f64] {
        self.b.deriv.as_deref().expect("B carries B'")
    }

    /// Largest `|A^2 - A' - c - u|` and `|B^2 - B' - c - u|`.
    pub fn potential_residuals(&self) -> (f64, f64) {
        let check = |f: &GridFn, fp: &[f64]| {
            (0..f.len()).map(|i| (f.values[i] * f.values[i] - fp[i] - self.c - self.u[i]).abs()).fold(0.0, f64::max)
        };
        (check(&self.a, self.ap()), check(&self.b, self.bp()))
    }

    /// Largest `|(B - A)' - (B^2 - A^2)|`.
    pub fn ansatz_residual(&self) -> f64 {
        let (a, b) = (&self.a.values, &self.b.values);
        let (ap, bp) = (self.ap(), self.bp());
        (0..a.len()).map(|i| ((bp[i] - ap[i]) - (b[i] * b[i] - a[i] * a[i])).abs()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FracDarbouxResult {
    #[serde(skip)]
    pub seeds: SeedPair,
    /// `v = 2A(A - B) - c`.
    #[serde(skip)]
    pub v: GridFn,
    /// `v - u = A(A - 2B) + A'`.
    #[serde(skip)]
    pub delta_u: GridFn,
    /// `[(ln zeta1)']^2 - 2 (ln zeta1)'(ln zeta2)' - (ln zeta1)''`.
    #[serde(skip)]
    pub delta_u_log_form: GridFn,
    /// Largest pointwise gap between the two forms of `delta_u`.
    pub cross_check: f64,
    /// Transformed solution, when a `phi` was supplied.
    #[serde(skip)]
    pub psi: Option<GridFn>,
}

/// The fractional Darboux transformation built from two seeds at `c`.
pub fn fractional_darboux(
    prob: &SchrodingerProblem,
    c: f64,
    zeta1: &GridFn,
    zeta2: &GridFn,
) -> Result<FracDarbouxResult> {
    fractional_darboux_with(prob, c, zeta1, zeta2, &Tolerances::default())
}

pub fn fractional_darboux_with(
    prob: &SchrodingerProblem,
    c: f64,
    zeta1: &GridFn,
    zeta2: &GridFn,
    tol: &Tolerances,
) -> Result<FracDarbouxResult> {
    let seeds = SeedPair::new(prob, c, zeta1.clone(), zeta2.clone(), tol)?;
    let grid = seeds.grid();
    let n = grid.len();
    let (a, b, ap) = (&seeds.a.values, &seeds.b.values, seeds.ap());

    let v: Vec<f64> = (0..n).map(|i| 2.0 * a[i] * (a[i] - b[i]) - c).collect();
    let du: Vec<f64> = (0..n).map(|i| a[i] * (a[i] - 2.0 * b[i]) + ap[i]).collect();

    let (z1, z1p, z1pp) = (&zeta1.values, zeta1.first_derivative(), zeta1.second_derivative());
    let (z2, z2p) = (&zeta2.values, zeta2.first_derivative());
    let du_log: Vec<f64> = (0..n)
        .map(|i| {
            let l1 = z1p[i] / z1[i];
            let l2 = z2p[i] / z2[i];
            let l1p = z1pp[i] / z1[i] - l1 * l1;
            l1 * l1 - 2.0 * l1 * l2 - l1p
        })
        .collect();
    let scale = 1.0 + du.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let cross_check = (0..n).map(|i| (du[i] - du_log[i]).abs()).fold(0.0, f64::max) / scale;
    let limit = tol.identity(grid.h(), seeds.analytic);
    if cross_check.is_nan() || cross_check > limit {
        return Err(Error::IllConditioned(format!("potential shift forms disagree by {cross_check:e} (> {limit:e})")));
    }
    Ok(FracDarbouxResult {
        v: GridFn::new(grid, v)?,
        delta_u: GridFn::new(grid, du)?,
        delta_u_log_form: GridFn::new(grid, du_log)?,
        cross_check,
        psi: None,
        seeds,
    })
}

/// `psi = (A phi + phi')/(B phi + phi')`, for `phi` at the seed eigenvalue.
///
/// The returned function carries `psi'` by the quotient rule.
pub fn apply_fractional_map(seeds: &SeedPair, phi: &GridFn) -> Result<GridFn> {
    apply_fractional_map_with(seeds, phi, &Tolerances::default())
}

pub fn apply_fractional_map_with(seeds: &SeedPair, phi: &GridFn, tol: &Tolerances) -> Result<GridFn> {
    let grid = seeds.grid();
    same_grid(&grid, &phi.grid)?;
    let limit = tol.seed_rel * (1.0 + phi.max_abs());
    let residual = eigen_residual(&seeds.u, seeds.c, phi);
    if residual.is_nan() || residual > limit {
        return Err(Error::EigenvalueMismatch { residual, tol: limit });
    }
    let n = grid.len();
    let (a, b, ap, bp) = (&seeds.a.values, &seeds.b.values, seeds.ap(), seeds.bp());
    let (f, f1, f2) = (&phi.values, phi.first_derivative(), phi.second_derivative());

    let num: Vec<f64> = (0..n).map(|i| a[i] * f[i] + f1[i]).collect();
    let den: Vec<f64> = (0..n).map(|i| b[i] * f[i] + f1[i]).collect();
    // Cancellation to round-off counts as a zero.
    let cleaned: Vec<f64> = (0..n)
        .map(|i| if den[i].abs() <= 1e-12 * ((b[i] * f[i]).abs() + f1[i].abs()) { 0.0 } else { den[i] })
        .collect();
    if let Some(at) = first_zero_of(&grid, &cleaned) {
        return Err(Error::PoleCrossing { what: "B phi + phi'".into(), at });
    }
    let psi = (0..n).map(|i| num[i] / den[i]).collect();
    let mut dpsi = Vec::with_capacity(n);
    let mut d2psi = Vec::with_capacity(n);
    for i in 0..n {
        let (uc, du) = (seeds.u[i] + seeds.c, seeds.du[i]);
        // A'' = 2 A A' - u' since A' = A^2 - u - c
        let (app, bpp) = (2.0 * a[i] * ap[i] - du, 2.0 * b[i] * bp[i] - du);
        let f3 = du * f[i] + uc * f1[i];
        let dn = ap[i] * f[i] + a[i] * f1[i] + f2[i];
        let dd = bp[i] * f[i] + b[i] * f1[i] + f2[i];
        let d2n = app * f[i] + 2.0 * ap[i] * f1[i] + a[i] * f2[i] + f3;
        let d2d = bpp * f[i] + 2.0 * bp[i] * f1[i] + b[i] * f2[i] + f3;
        let (nn, dn0) = (num[i], den[i]);
        let first = (dn * dn0 - nn * dd) / (dn0 * dn0);
        dpsi.push(first);
        d2psi.push((d2n * dn0 - nn * d2d) / (dn0 * dn0) - 2.0 * dd * first / dn0);
    }
    GridFn::new(grid, psi)?.with_deriv(dpsi)?.with_deriv2(d2psi)
}

impl FracDarbouxResult {
    /// Maps `phi` and stores the image in `psi`.
    pub fn with_phi(mut self, phi: &GridFn) -> Result<Self> {
        self.psi = Some(apply_fractional_map(&self.seeds, phi)?);
        Ok(self)
    }
}

/// Coefficients of `y'' + Q y' + R y = 0`, the image of
/// `phi'' = (u + lambda) phi` under a constant map with unit determinant.
#[derive(Debug, Clone)]
pub struct TransformedSchrodingerForm {
    pub u: Potential,
    pub lambda: f64,
    pub map: [f64; 4],
}

fn map_entries(m: &MobiusMap) -> Result<[Q; 4]> {
    let c = |e: &RationalExpr| e.as_constant().ok_or(Error::NotConstant);
    let ent = [c(&m.alpha)?, c(&m.beta)?, c(&m.gamma)?, c(&m.delta)?];
    let det = &ent[0] * &ent[3] - &ent[1] * &ent[2];
    if det != Q::from_integer(1.into()) {
        return Err(Error::Normalization(crate::expr::fmt_q(&det)));
    }
    Ok(ent)
}

pub fn schrodinger_qr(u: &Potential, lambda: f64, m: &MobiusMap) -> Result<TransformedSchrodingerForm> {
    let ent = map_entries(m)?;
    let f = |v: &Q| crate::expr::q_to_f64(v);
    Ok(TransformedSchrodingerForm { u: u.clone(), lambda, map: [f(&ent[0]), f(&ent[1]), f(&ent[2]), f(&ent[3])] })
}

impl TransformedSchrodingerForm {
    fn pole_denominator(&self, w: f64) -> f64 {
        let [al, be, _, _] = self.map;
        be * be * w - al * al
    }

    /// `Q = 2 alpha gamma - 2 beta delta (u + lambda) - beta^2 u' / (beta^2 (u + lambda) - alpha^2)`.
    pub fn q_at(&self, x: f64) -> Result<f64> {
        let [al, be, ga, de] = self.map;
        let w = self.u.value(x)? + self.lambda;
        let den = self.pole_denominator(w);
        if den.abs() <= 1e-12 * (be * be * w.abs() + al * al) {
            return Err(Error::Pole { at: format!("{x}") });
        }
        let up = self.u.derivative_at(x, BLACK_BOX_STEP)?;
        Ok(2.0 * al * ga - 2.0 * be * de * w - be * be * up / den)
    }

    /// `R = [delta^2 (u + lambda) - gamma^2][beta^2 (u + lambda) - alpha^2]`.
    pub fn r_at(&self, x: f64) -> Result<f64> {
        let [_, _, ga, de] = self.map;
        let w = self.u.value(x)? + self.lambda;
        Ok((de * de * w - ga * ga) * self.pole_denominator(w))
    }
}

/// Exact `Q` and `R` for a rational potential and rational `lambda`.
pub fn schrodinger_qr_exact(u: &RationalExpr, lambda: &Q, m: &MobiusMap) -> Result<(RationalExpr, RationalExpr)> {
    let [al, be, ga, de] = map_entries(m)?;
    let w = u + &RationalExpr::constant(lambda.clone());
    let two = Q::from_integer(2.into());
    let den = w.scale(&(&be * &be)) - RationalExpr::constant(&al * &al);
    let qq = RationalExpr::constant(&two * &al * &ga)
        - w.scale(&(&two * &be * &de))
        - u.derivative().scale(&(&be * &be)).try_div(&den)?;
    let rr = (w.scale(&(&de * &de)) - RationalExpr::constant(&ga * &ga)) * den;
    Ok((qq, rr))
}
