//! Fractional maps `psi = (A phi + C phi_x)/(B phi + D phi_x)` from heat
//! solutions to Burgers-type equations.

mod nonlinear;

pub use nonlinear::{
    coefficient_fit_oracle, nonlinear_ode_form, nonlinear_ode_form_with, sample_solutions, Convention, FitReport,
    NonlinearODEForm, OracleReport,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{fmt_q, q_to_f64, RationalExpr, Q};
use crate::numeric::{check_pole_free, pde_residual_study, Grid, GridField, PdePoint, PdeResidualReport};

#[derive(Debug, Clone, PartialEq)]
pub struct ColeHopfMap {
    pub a: RationalExpr,
    pub b: RationalExpr,
    pub c: RationalExpr,
    pub d: RationalExpr,
}

impl ColeHopfMap {
    pub fn new(a: RationalExpr, b: RationalExpr, c: RationalExpr, d: RationalExpr) -> Result<Self> {
        if b.is_zero() && d.is_zero() {
            return Err(Error::InvalidArgument("B and D are both identically zero".into()));
        }
        Ok(ColeHopfMap { a, b, c, d })
    }

    pub fn constant(a: Q, b: Q, c: Q, d: Q) -> Result<Self> {
        Self::new(
            RationalExpr::constant(a),
            RationalExpr::constant(b),
            RationalExpr::constant(c),
            RationalExpr::constant(d),
        )
    }

    /// `(0, 1, -2 nu, 0)`: the classical transformation.
    pub fn classic(nu: Q) -> Self {
        let two_nu = -(Q::from_integer(2.into()) * nu);
        ColeHopfMap {
            a: RationalExpr::zero(),
            b: RationalExpr::one(),
            c: RationalExpr::constant(two_nu),
            d: RationalExpr::zero(),
        }
    }

    /// The `D = 0`, `B = 1` branch with variable `A` and `C`.
    pub fn variable(a: RationalExpr, c: RationalExpr) -> Self {
        ColeHopfMap { a, b: RationalExpr::one(), c, d: RationalExpr::zero() }
    }

    pub fn is_constant(&self) -> bool {
        [&self.a, &self.b, &self.c, &self.d].iter().all(|e| e.as_constant().is_some())
    }

    fn constants(&self) -> Result<[Q; 4]> {
        let k = |e: &RationalExpr| e.as_constant().ok_or(Error::NotConstant);
        Ok([k(&self.a)?, k(&self.b)?, k(&self.c)?, k(&self.d)?])
    }

    /// `N = A phi + C phi_x`.
    pub fn numerator(&self, x: f64, phi: f64, phi_x: f64) -> Result<f64> {
        Ok(self.a.eval(x)? * phi + self.c.eval(x)? * phi_x)
    }

    /// `E = B phi + D phi_x`.
    pub fn denominator(&self, x: f64, phi: f64, phi_x: f64) -> Result<f64> {
        Ok(self.b.eval(x)? * phi + self.d.eval(x)? * phi_x)
    }

    fn check_poles(&self, g: &Grid) -> Result<()> {
        for e in [&self.a, &self.b, &self.c, &self.d] {
            check_pole_free(e, g.a(), g.b(), g.len())?;
        }
        Ok(())
    }
}

fn scan_rows(field: &GridField, what: &str, f: impl Fn(usize, usize) -> f64) -> Result<()> {
    for k in 0..field.nt() {
        let row: Vec<f64> = (0..field.nx()).map(|i| f(i, k)).collect();
        if let Some(at) = crate::numeric::first_zero_of(&field.xgrid, &row) {
            return Err(Error::PoleCrossing { what: what.into(), at });
        }
    }
    Ok(())
}

/// `psi = -2 nu phi_x / phi`.
pub fn classic_cole_hopf(phi: &GridField, nu: f64) -> Result<GridField> {
    let phi_x = phi.dx4()?;
    classic_cole_hopf_with_dx(phi, &phi_x, nu)
}

/// [`classic_cole_hopf`] with a supplied `phi_x`.
pub fn classic_cole_hopf_with_dx(phi: &GridField, phi_x: &GridField, nu: f64) -> Result<GridField> {
    same_shape(phi, phi_x)?;
    scan_rows(phi, "phi", |i, k| phi.at(i, k))?;
    let values = phi.values.iter().zip(&phi_x.values).map(|(p, px)| -2.0 * nu * px / p).collect();
    GridField::new(phi.xgrid, phi.tgrid, values)
}

fn same_shape(a: &GridField, b: &GridField) -> Result<()> {
    if a.xgrid == b.xgrid && a.tgrid == b.tgrid {
        Ok(())
    } else {
        Err(Error::Dimension("fields live on different grids".into()))
    }
}

/// `psi = (A phi + C phi_x)/(B phi + D phi_x)`, with `phi_x` from
/// fourth-order differences.
pub fn generalized_map(m: &ColeHopfMap, phi: &GridField) -> Result<GridField> {
    let phi_x = phi.dx4()?;
    generalized_map_with_dx(m, phi, &phi_x)
}

/// [`generalized_map`] with a supplied `phi_x`.
pub fn generalized_map_with_dx(m: &ColeHopfMap, phi: &GridField, phi_x: &GridField) -> Result<GridField> {
    same_shape(phi, phi_x)?;
    m.check_poles(&phi.xgrid)?;
    let nx = phi.nx();
    let xs = phi.xgrid.points();
    let ev = |e: &RationalExpr| -> Result<Vec<f64>> { xs.iter().map(|&x| e.eval(x)).collect() };
    let (a, b, c, d) = (ev(&m.a)?, ev(&m.b)?, ev(&m.c)?, ev(&m.d)?);
    let den = |i: usize, k: usize| b[i] * phi.at(i, k) + d[i] * phi_x.at(i, k);
    scan_rows(phi, "B phi + D phi_x", den)?;
    let mut values = Vec::with_capacity(phi.values.len());
    for k in 0..phi.nt() {
        for i in 0..nx {
            values.push((a[i] * phi.at(i, k) + c[i] * phi_x.at(i, k)) / den(i, k));
        }
    }
    GridField::new(phi.xgrid, phi.tgrid, values)
}

/// Inverse relation `phi_x/phi = (B psi - A)/(C - D psi)`.
pub fn phi_log_derivative(m: &ColeHopfMap, psi: &GridField) -> Result<GridField> {
    m.check_poles(&psi.xgrid)?;
    let xs = psi.xgrid.points();
    let ev = |e: &RationalExpr| -> Result<Vec<f64>> { xs.iter().map(|&x| e.eval(x)).collect() };
    let (a, b, c, d) = (ev(&m.a)?, ev(&m.b)?, ev(&m.c)?, ev(&m.d)?);
    scan_rows(psi, "C - D psi", |i, k| c[i] - d[i] * psi.at(i, k))?;
    let mut values = Vec::with_capacity(psi.values.len());
    for k in 0..psi.nt() {
        for i in 0..psi.nx() {
            let p = psi.at(i, k);
            values.push((b[i] * p - a[i]) / (c[i] - d[i] * p));
        }
    }
    GridField::new(psi.xgrid, psi.tgrid, values)
}

/// Residual study of `psi_t + psi psi_x - nu psi_xx`.
pub fn burgers_residual(levels: &[GridField], nu: f64) -> Result<PdeResidualReport> {
    pde_residual_study(levels, &|p: &PdePoint| Ok(p.u_t + p.u * p.u_x - nu * p.u_xx))
}

/// For a constant map with `D = 0`, the right side of
/// `psi_t - psi_xx = 2 psi_x (A - B psi - D psi_x)/(D psi - C)` collapses to
/// `psi_x_coeff * psi_x + psi_psi_x_coeff * psi psi_x`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BurgersReduction {
    pub psi_x_coeff: String,
    pub psi_psi_x_coeff: String,
    /// The reduced equation is `psi_t + psi psi_x = psi_xx`.
    pub is_burgers: bool,
}

pub fn constant_map_reduction(m: &ColeHopfMap) -> Result<Option<BurgersReduction>> {
    let [a, b, c, d] = m.constants()?;
    if d != Q::from_integer(0.into()) {
        return Ok(None);
    }
    if c == Q::from_integer(0.into()) {
        return Err(Error::Pole { at: "everywhere (D psi - C = 0)".into() });
    }
    let two = Q::from_integer(2.into());
    let lin = -(&two * &a) / &c;
    let quad = &two * &b / &c;
    let is_burgers = lin == Q::from_integer(0.into()) && quad == Q::from_integer((-1).into());
    Ok(Some(BurgersReduction { psi_x_coeff: fmt_q(&lin), psi_psi_x_coeff: fmt_q(&quad), is_burgers }))
}

/// Residual study of
/// `psi_t - psi_xx - 2 psi_x (A - B psi - D psi_x)/(D psi - C)` for a
/// constant map, with `nu = 1`.
pub fn generalized_burgers_residual(m: &ColeHopfMap, levels: &[GridField]) -> Result<PdeResidualReport> {
    let [a, b, c, d] = m.constants()?.map(|v| q_to_f64(&v));
    for f in levels {
        scan_rows(f, "D psi - C", |i, k| d * f.at(i, k) - c)?;
    }
    pde_residual_study(levels, &|p: &PdePoint| {
        Ok(p.u_t - p.u_xx - 2.0 * p.u_x * (a - b * p.u - d * p.u_x) / (d * p.u - c))
    })
}

/// Pointwise values of `A, A', A'', C, C', C''`.
struct Jet {
    a: [f64; 3],
    c: [f64; 3],
}

struct JetSource {
    a: [RationalExpr; 3],
    c: [RationalExpr; 3],
}

impl JetSource {
    fn new(a: &RationalExpr, c: &RationalExpr) -> Self {
        let jet = |e: &RationalExpr| {
            let d1 = e.derivative();
            let d2 = d1.derivative();
            [e.clone(), d1, d2]
        };
        JetSource { a: jet(a), c: jet(c) }
    }

    fn at(&self, x: f64) -> Result<Jet> {
        let ev = |es: &[RationalExpr; 3]| -> Result<[f64; 3]> { Ok([es[0].eval(x)?, es[1].eval(x)?, es[2].eval(x)?]) };
        Ok(Jet { a: ev(&self.a)?, c: ev(&self.c)? })
    }
}

/// Right side of the variable-coefficient equation for `C^2 (psi_t - psi_xx)`
/// exactly as printed.
fn printed_variable_rhs(j: &Jet, psi: f64, psi_x: f64) -> f64 {
    let [a, a1, a2] = j.a;
    let [c, c1, c2] = j.c;
    // (C' - 2A)' = C'' - 2A', (C' + 2A)' = C'' + 2A'
    -c1 * psi * psi + (c1 * (2.0 * a + c1) - c * (c2 - 2.0 * a1) + 2.0 * c * psi_x) * psi - c * (c1 + 2.0 * a) * psi_x
        + a * c * (c2 + 2.0 * a1)
        - a * (c2 + c1 * a)
        + c * (c1 * a1 - a2 * c)
}

/// Right side of `C^2 (psi_t - psi_xx)` obtained by substituting
/// `phi_x/phi = (psi - A)/C` into the heat equation.
fn derived_variable_rhs(j: &Jet, psi: f64, psi_x: f64) -> f64 {
    let [a, a1, a2] = j.a;
    let [c, c1, c2] = j.c;
    let w = psi - a;
    2.0 * c * w * (psi_x - a1) - 2.0 * c1 * w * w - 2.0 * c * c1 * psi_x + 2.0 * c * c1 * a1 + 2.0 * c1 * c1 * w
        - c * c2 * w
        - c * c * a2
}

/// Which right-hand side a variable-coefficient residual uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VariableForm {
    Printed,
    Derived,
}

/// Residual study of `C^2 (psi_t - psi_xx) - RHS` for the `D = 0`, `B = 1`
/// branch.
pub fn variable_coeff_residual(
    a: &RationalExpr,
    c: &RationalExpr,
    levels: &[GridField],
    form: VariableForm,
) -> Result<PdeResidualReport> {
    let first = levels.first().ok_or_else(|| Error::Refinement("no levels supplied".into()))?;
    let (lo, hi, n) = (first.xgrid.a(), first.xgrid.b(), first.nx());
    check_pole_free(a, lo, hi, n)?;
    check_pole_free(&c.recip().map_err(|_| Error::Vanishing { at: lo })?, lo, hi, n).map_err(|e| match e {
        Error::Pole { at } => Error::Vanishing { at: at.parse().unwrap_or(f64::NAN) },
        other => other,
    })?;
    check_pole_free(c, lo, hi, n)?;
    let jets = JetSource::new(a, c);
    pde_residual_study(levels, &|p: &PdePoint| {
        let j = jets.at(p.x)?;
        let rhs = match form {
            VariableForm::Printed => printed_variable_rhs(&j, p.u, p.u_x),
            VariableForm::Derived => derived_variable_rhs(&j, p.u, p.u_x),
        };
        Ok(j.c[0] * j.c[0] * (p.u_t - p.u_xx) - rhs)
    })
}

/// Samples of the heat solution `1 + e^(x+t)` on `x` times `[0, 1/2]` at
/// 21, 41 and 81 nodes per axis.
pub fn manufactured_heat_levels(x: (f64, f64)) -> Result<Vec<GridField>> {
    [21usize, 41, 81]
        .iter()
        .map(|&n| Ok(GridField::sample(Grid::new(x.0, x.1, n)?, Grid::new(0.0, 0.5, n)?, |x, t| 1.0 + (x + t).exp())))
        .collect()
}
