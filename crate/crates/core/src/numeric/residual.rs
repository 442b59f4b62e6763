use serde::Serialize;

use super::{sample_coefficient, Coefficient, GridField, GridFn};
use crate::error::{Error, Result};

/// Interior residual norms, divided by `1 + max|f|`. `l2` is the root mean
/// square over interior nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualNorms {
    pub linf: f64,
    pub l2: f64,
}

impl ResidualNorms {
    fn from_interior(res: impl Iterator<Item = f64>, scale: f64) -> Self {
        let (mut linf, mut sq, mut count) = (0.0f64, 0.0, 0usize);
        for r in res {
            let r = r.abs() / scale;
            linf = linf.max(r);
            sq += r * r;
            count += 1;
        }
        ResidualNorms { linf, l2: if count == 0 { 0.0 } else { (sq / count as f64).sqrt() } }
    }
}

/// `f'' + q f' + r f` at every node.
pub fn ode_residual_pointwise(q: &dyn Coefficient, r: &dyn Coefficient, f: &GridFn) -> Result<Vec<f64>> {
    let qv = sample_coefficient(q, &f.grid)?;
    let rv = sample_coefficient(r, &f.grid)?;
    let d1 = f.first_derivative();
    let d2 = f.second_derivative();
    Ok((0..f.len()).map(|i| d2[i] + qv[i] * d1[i] + rv[i] * f.values[i]).collect())
}

/// Normalized interior norms of `f'' + q f' + r f`.
pub fn ode_residual(q: &dyn Coefficient, r: &dyn Coefficient, f: &GridFn) -> Result<ResidualNorms> {
    let res = ode_residual_pointwise(q, r, f)?;
    let n = res.len();
    Ok(ResidualNorms::from_interior(res.into_iter().skip(1).take(n - 2), 1.0 + f.max_abs()))
}

/// Local data handed to a PDE residual operator.
#[derive(Debug, Clone, Copy)]
pub struct PdePoint {
    pub x: f64,
    pub t: f64,
    pub u: f64,
    pub u_t: f64,
    pub u_x: f64,
    pub u_xx: f64,
}

/// Residual of a PDE operator on the interior of a field, using second-order
/// central differences in both `x` and `t`.
pub fn pde_residual(field: &GridField, op: &dyn Fn(&PdePoint) -> Result<f64>) -> Result<ResidualNorms> {
    let (nx, nt) = (field.nx(), field.nt());
    if nx < 3 || nt < 3 {
        return Err(Error::Grid("no interior points".into()));
    }
    let dx = field.xgrid.h();
    let dt = field.tgrid.h();
    let mut res = Vec::with_capacity((nx - 2) * (nt - 2));
    for k in 1..nt - 1 {
        for i in 1..nx - 1 {
            let u = field.at(i, k);
            let p = PdePoint {
                x: field.xgrid.x(i),
                t: field.tgrid.x(k),
                u,
                u_t: (field.at(i, k + 1) - field.at(i, k - 1)) / (2.0 * dt),
                u_x: (field.at(i + 1, k) - field.at(i - 1, k)) / (2.0 * dx),
                u_xx: (field.at(i + 1, k) - 2.0 * u + field.at(i - 1, k)) / (dx * dx),
            };
            res.push(op(&p)?);
        }
    }
    Ok(ResidualNorms::from_interior(res.into_iter(), 1.0 + field.max_abs()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PdeLevel {
    pub dx: f64,
    pub dt: f64,
    pub linf: f64,
    pub l2: f64,
}

/// Residual norms per refinement level plus the observed order of the
/// `linf` norm against `dx` (present only with two or more levels and
/// nonzero residuals).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PdeResidualReport {
    pub levels: Vec<PdeLevel>,
    pub order: Option<f64>,
}

impl PdeResidualReport {
    pub fn finest(&self) -> &PdeLevel {
        self.levels.last().expect("report has at least one level")
    }
}

/// Least-squares slope of `ln e` against `ln h`.
pub fn observed_order(hs: &[f64], errs: &[f64]) -> Option<f64> {
    if hs.len() < 2 || hs.len() != errs.len() || errs.iter().any(|&e| e.is_nan() || e <= 1e-300) {
        return None;
    }
    let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Some(sxy / sxx)
}

/// Runs [`pde_residual`] on each level of a refinement sequence. Levels must
/// cover the same space-time box with strictly decreasing `dx`.
pub fn pde_residual_study(levels: &[GridField], op: &dyn Fn(&PdePoint) -> Result<f64>) -> Result<PdeResidualReport> {
    let Some(first) = levels.first() else {
        return Err(Error::Refinement("no levels supplied".into()));
    };
    let same = |a: f64, b: f64| (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()));
    for w in levels.windows(2) {
        let (c, f) = (&w[0], &w[1]);
        if f.xgrid.h() >= c.xgrid.h() || f.xgrid.h().is_nan() {
            return Err(Error::Refinement("dx must strictly decrease".into()));
        }
    }
    for l in levels {
        if !(same(l.xgrid.a(), first.xgrid.a())
            && same(l.xgrid.b(), first.xgrid.b())
            && same(l.tgrid.a(), first.tgrid.a())
            && same(l.tgrid.b(), first.tgrid.b()))
        {
            return Err(Error::Refinement("levels cover different domains".into()));
        }
    }
    let mut out = Vec::with_capacity(levels.len());
    for l in levels {
        let n = pde_residual(l, op)?;
        out.push(PdeLevel { dx: l.xgrid.h(), dt: l.tgrid.h(), linf: n.linf, l2: n.l2 });
    }
    let hs: Vec<f64> = out.iter().map(|l| l.dx).collect();
    let es: Vec<f64> = out.iter().map(|l| l.linf).collect();
    Ok(PdeResidualReport { order: observed_order(&hs, &es), levels: out })
}
