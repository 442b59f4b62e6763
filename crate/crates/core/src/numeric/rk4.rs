use super::{Coefficient, Grid, GridFn};
use crate::error::{Error, Result};

fn rhs(q: &dyn Coefficient, r: &dyn Coefficient, x: f64, w: f64, wp: f64) -> Result<(f64, f64)> {
    Ok((wp, -q.value(x)? * wp - r.value(x)? * w))
}

fn step(q: &dyn Coefficient, r: &dyn Coefficient, x: f64, (w, wp): (f64, f64), h: f64) -> Result<(f64, f64)> {
    let k1 = rhs(q, r, x, w, wp)?;
    let k2 = rhs(q, r, x + 0.5 * h, w + 0.5 * h * k1.0, wp + 0.5 * h * k1.1)?;
    let k3 = rhs(q, r, x + 0.5 * h, w + 0.5 * h * k2.0, wp + 0.5 * h * k2.1)?;
    let k4 = rhs(q, r, x + h, w + h * k3.0, wp + h * k3.1)?;
    Ok((w + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0), wp + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1)))
}

/// Fixed-step classical Runge-Kutta solution of `w'' + q w' + r w = 0` with
/// `w(x0) = w0`, `w'(x0) = w0p`.
///
/// `x0` may lie anywhere in the grid; the solution is marched outwards in
/// both directions, with one partial step when `x0` falls between nodes.
/// The returned function carries the integrated `w'`.
pub fn rk4_ivp(q: &dyn Coefficient, r: &dyn Coefficient, x0: f64, w0: f64, w0p: f64, grid: &Grid) -> Result<GridFn> {
    let h = grid.h();
    let n = grid.len();
    let tol = 1e-9 * h;
    if x0 < grid.a() - tol || x0 > grid.b() + tol {
        return Err(Error::Grid(format!("initial point {x0} outside [{}, {}]", grid.a(), grid.b())));
    }
    let mut w = vec![0.0; n];
    let mut wp = vec![0.0; n];

    let pos = (x0 - grid.a()) / h;
    let near = pos.round();
    let (fwd_start, bwd_start) = if (pos - near).abs() * h <= tol {
        let i = near as usize;
        w[i] = w0;
        wp[i] = w0p;
        (i, i)
    } else {
        let lo = pos.floor() as usize;
        let hi = lo + 1;
        let up = step(q, r, x0, (w0, w0p), grid.x(hi) - x0)?;
        w[hi] = up.0;
        wp[hi] = up.1;
        let down = step(q, r, x0, (w0, w0p), grid.x(lo) - x0)?;
        w[lo] = down.0;
        wp[lo] = down.1;
        (hi, lo)
    };
    for i in fwd_start..n - 1 {
        let s = step(q, r, grid.x(i), (w[i], wp[i]), h)?;
        w[i + 1] = s.0;
        wp[i + 1] = s.1;
    }
    for i in (1..=bwd_start).rev() {
        let s = step(q, r, grid.x(i), (w[i], wp[i]), -h)?;
        w[i - 1] = s.0;
        wp[i - 1] = s.1;
    }
    if let Some(i) = w.iter().position(|v| !v.is_finite()) {
        return Err(Error::Pole { at: format!("{}", grid.x(i)) });
    }
    GridFn::new(*grid, w)?.with_deriv(wp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{Polynomial, RationalExpr};

    fn max_err(f: &GridFn, exact: impl Fn(f64) -> f64) -> f64 {
        f.values.iter().enumerate().map(|(i, v)| (v - exact(f.grid.x(i))).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn exponential_fourth_order() {
        let zero = |_x: f64| 0.0;
        let minus_one = |_x: f64| -1.0;
        let e = |n| {
            let g = Grid::new(0.0, 1.0, n).unwrap();
            max_err(&rk4_ivp(&zero, &minus_one, 0.0, 1.0, 1.0, &g).unwrap(), f64::exp)
        };
        let ratio = e(21) / e(41);
        assert!((14.0..18.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn sine_and_linear() {
        let zero = |_x: f64| 0.0;
        let one = |_x: f64| 1.0;
        let g = Grid::new(0.0, 2.0, 201).unwrap();
        let s = rk4_ivp(&zero, &one, 0.0, 0.0, 1.0, &g).unwrap();
        assert!(max_err(&s, f64::sin) < 1e-9);
        let lin = rk4_ivp(&zero, &zero, 0.0, 0.0, 1.0, &g).unwrap();
        assert!(max_err(&lin, |x| x) < 1e-13);
    }

    #[test]
    fn starts_inside_and_between_nodes() {
        let zero = |_x: f64| 0.0;
        let minus_one = |_x: f64| -1.0;
        let g = Grid::new(-1.0, 1.0, 101).unwrap();
        let c = rk4_ivp(&zero, &minus_one, 0.0, 1.0, 0.0, &g).unwrap();
        let e = max_err(&c, f64::cosh);
        assert!(e < 1e-8, "{e}");
        let off = rk4_ivp(&zero, &minus_one, 0.013, 0.013f64.cosh(), 0.013f64.sinh(), &g).unwrap();
        let e = max_err(&off, f64::cosh);
        assert!(e < 1e-8, "{e}");
    }

    #[test]
    fn pole_on_grid_is_reported() {
        let zero = |_x: f64| 0.0;
        let r = RationalExpr::new(Polynomial::one(), Polynomial::x()).unwrap();
        let g = Grid::new(-1.0, 1.0, 21).unwrap();
        assert!(matches!(rk4_ivp(&zero, &r, -1.0, 1.0, 0.0, &g), Err(Error::Pole { .. })));
    }
}
