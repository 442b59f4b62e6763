//! Numeric engines behind every residual oracle: uniform grids, sampled
//! functions and fields, finite differences, RK4, Crank-Nicolson, residual
//! norms and CSV exchange.

mod csv;
mod fd;
mod heat;
mod quad;
mod residual;
mod rk4;

pub use self::csv::{read_grid_field, read_grid_fn, write_grid_field, write_grid_fn};
pub use fd::{fd_derivative, fd_slice};
pub use heat::heat_crank_nicolson;
pub use quad::cumulative_simpson;
pub use residual::{
    observed_order, ode_residual, ode_residual_pointwise, pde_residual, pde_residual_study, PdeLevel, PdePoint,
    PdeResidualReport, ResidualNorms,
};
pub use rk4::rk4_ivp;

use crate::error::{Error, Result};
use crate::expr::RationalExpr;

/// Uniform grid `a = x_0 < ... < x_{n-1} = b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    a: f64,
    b: f64,
    n: usize,
}

impl Grid {
    pub fn new(a: f64, b: f64, n: usize) -> Result<Self> {
        if n < 5 {
            return Err(Error::Grid(format!("need at least 5 points, got {n}")));
        }
        if !(a.is_finite() && b.is_finite()) || b <= a {
            return Err(Error::Grid(format!("invalid interval [{a}, {b}]")));
        }
        Ok(Grid { a, b, n })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn h(&self) -> f64 {
        (self.b - self.a) / (self.n - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.b
        } else {
            self.a + i as f64 * self.h()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    /// Same interval with `2(n-1)+1` points.
    pub fn refined(&self) -> Self {
        Grid { n: 2 * (self.n - 1) + 1, ..*self }
    }
}

/// Something that can be evaluated pointwise on the real line.
pub trait Coefficient: Sync {
    fn value(&self, x: f64) -> Result<f64>;
}

impl Coefficient for RationalExpr {
    fn value(&self, x: f64) -> Result<f64> {
        self.eval(x)
    }
}

impl<F> Coefficient for F
where
    F: Fn(f64) -> f64 + Sync,
{
    fn value(&self, x: f64) -> Result<f64> {
        Ok(self(x))
    }
}

/// Samples a coefficient on every node of `grid`.
pub fn sample_coefficient(c: &dyn Coefficient, grid: &Grid) -> Result<Vec<f64>> {
    grid.points().into_iter().map(|x| c.value(x)).collect()
}

/// Rejects a rational coefficient whose denominator vanishes on `[a, b]`,
/// detected as a node zero or a sign change on a 4x oversampled grid.
pub fn check_pole_free(e: &RationalExpr, a: f64, b: f64, n: usize) -> Result<()> {
    let den = e.denom();
    if den.degree() == Some(0) {
        return Ok(());
    }
    let m = 4 * n.max(2);
    let mut prev = den.eval(a);
    if prev == 0.0 {
        return Err(Error::Pole { at: format!("{a}") });
    }
    for k in 1..=m {
        let x = a + (b - a) * k as f64 / m as f64;
        let v = den.eval(x);
        if v == 0.0 || v.signum() != prev.signum() {
            return Err(Error::Pole { at: format!("{x}") });
        }
        prev = v;
    }
    Ok(())
}

/// A function sampled on a grid, optionally with exact first and second
/// derivative samples.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFn {
    pub grid: Grid,
    pub values: Vec<f64>,
    pub deriv: Option<Vec<f64>>,
    pub deriv2: Option<Vec<f64>>,
}

impl GridFn {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Dimension(format!("{} values for a {}-point grid", values.len(), grid.len())));
        }
        Ok(GridFn { grid, values, deriv: None, deriv2: None })
    }

    pub fn with_deriv(mut self, d: Vec<f64>) -> Result<Self> {
        if d.len() != self.grid.len() {
            return Err(Error::Dimension("derivative length".into()));
        }
        self.deriv = Some(d);
        Ok(self)
    }

    pub fn with_deriv2(mut self, d: Vec<f64>) -> Result<Self> {
        if d.len() != self.grid.len() {
            return Err(Error::Dimension("second derivative length".into()));
        }
        self.deriv2 = Some(d);
        Ok(self)
    }

    pub fn sample(grid: Grid, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.points().into_iter().map(f).collect();
        GridFn { grid, values, deriv: None, deriv2: None }
    }

    /// Samples a function together with its analytic first and second derivatives.
    pub fn sample_analytic(
        grid: Grid,
        f: impl Fn(f64) -> f64,
        df: impl Fn(f64) -> f64,
        d2f: impl Fn(f64) -> f64,
    ) -> Self {
        let xs = grid.points();
        GridFn {
            grid,
            values: xs.iter().map(|&x| f(x)).collect(),
            deriv: Some(xs.iter().map(|&x| df(x)).collect()),
            deriv2: Some(xs.iter().map(|&x| d2f(x)).collect()),
        }
    }

    /// Samples an exact rational function and its exact derivatives.
    pub fn from_rational(grid: Grid, e: &RationalExpr) -> Result<Self> {
        check_pole_free(e, grid.a(), grid.b(), grid.len())?;
        let d1 = e.derivative();
        let d2 = d1.derivative();
        Ok(GridFn {
            grid,
            values: sample_coefficient(e, &grid)?,
            deriv: Some(sample_coefficient(&d1, &grid)?),
            deriv2: Some(sample_coefficient(&d2, &grid)?),
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Exact derivative if carried, else fourth-order finite differences.
    pub fn first_derivative(&self) -> Vec<f64> {
        match &self.deriv {
            Some(d) => d.clone(),
            None => fd_slice(&self.values, self.grid.h(), 1),
        }
    }

    /// Exact second derivative if carried; otherwise differentiates the
    /// carried first derivative, or the values twice over.
    pub fn second_derivative(&self) -> Vec<f64> {
        match (&self.deriv2, &self.deriv) {
            (Some(d2), _) => d2.clone(),
            (None, Some(d1)) => fd_slice(d1, self.grid.h(), 1),
            (None, None) => fd_slice(&self.values, self.grid.h(), 2),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Location of the first zero (exact node zero or sign change between
    /// neighbours, linearly interpolated).
    pub fn first_zero(&self) -> Option<f64> {
        first_zero_of(&self.grid, &self.values)
    }
}

pub(crate) fn first_zero_of(grid: &Grid, values: &[f64]) -> Option<f64> {
    for i in 0..values.len() {
        if values[i] == 0.0 || !values[i].is_finite() {
            return Some(grid.x(i));
        }
        if i + 1 < values.len() && values[i].signum() != values[i + 1].signum() && values[i + 1] != 0.0 {
            let (x0, x1) = (grid.x(i), grid.x(i + 1));
            let t = values[i] / (values[i] - values[i + 1]);
            return Some(x0 + t * (x1 - x0));
        }
    }
    None
}

/// A space-time field `f(x, t)`; row `k` holds the time level `t_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub xgrid: Grid,
    pub tgrid: Grid,
    pub values: Vec<f64>,
}

impl GridField {
    pub fn new(xgrid: Grid, tgrid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != xgrid.len() * tgrid.len() {
            return Err(Error::Dimension(format!(
                "{} values for a {}x{} field",
                values.len(),
                xgrid.len(),
                tgrid.len()
            )));
        }
        Ok(GridField { xgrid, tgrid, values })
    }

    pub fn sample(xgrid: Grid, tgrid: Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(xgrid.len() * tgrid.len());
        for k in 0..tgrid.len() {
            let t = tgrid.x(k);
            for i in 0..xgrid.len() {
                values.push(f(xgrid.x(i), t));
            }
        }
        GridField { xgrid, tgrid, values }
    }

    pub fn nx(&self) -> usize {
        self.xgrid.len()
    }

    pub fn nt(&self) -> usize {
        self.tgrid.len()
    }

    /// Value at space index `i`, time index `k`.
    pub fn at(&self, i: usize, k: usize) -> f64 {
        self.values[k * self.nx() + i]
    }

    pub fn row(&self, k: usize) -> &[f64] {
        let nx = self.nx();
        &self.values[k * nx..(k + 1) * nx]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Second-order `d/dx` of every time level (central inside, one-sided
    /// second-order at the two edges).
    pub fn dx(&self) -> GridField {
        let h = self.xgrid.h();
        let nx = self.nx();
        let mut out = Vec::with_capacity(self.values.len());
        for k in 0..self.nt() {
            let r = self.row(k);
            for i in 0..nx {
                out.push(if i == 0 {
                    (-3.0 * r[0] + 4.0 * r[1] - r[2]) / (2.0 * h)
                } else if i + 1 == nx {
                    (3.0 * r[i] - 4.0 * r[i - 1] + r[i - 2]) / (2.0 * h)
                } else {
                    (r[i + 1] - r[i - 1]) / (2.0 * h)
                });
            }
        }
        GridField { xgrid: self.xgrid, tgrid: self.tgrid, values: out }
    }

    /// Fourth-order `d/dx` of every time level (five-point stencils, see
    /// [`fd_slice`]). Needs at least five space nodes.
    pub fn dx4(&self) -> Result<GridField> {
        if self.nx() < 5 {
            return Err(Error::Grid(format!("need at least 5 points, got {}", self.nx())));
        }
        let h = self.xgrid.h();
        let mut values = Vec::with_capacity(self.values.len());
        for k in 0..self.nt() {
            values.extend(fd_slice(self.row(k), h, 1));
        }
        GridField::new(self.xgrid, self.tgrid, values)
    }

    /// Pointwise map with access to the coordinates.
    pub fn map(&self, f: impl Fn(f64, f64, f64) -> f64) -> GridField {
        let mut values = Vec::with_capacity(self.values.len());
        for k in 0..self.nt() {
            let t = self.tgrid.x(k);
            for i in 0..self.nx() {
                values.push(f(self.xgrid.x(i), t, self.at(i, k)));
            }
        }
        GridField { xgrid: self.xgrid, tgrid: self.tgrid, values }
    }
}
