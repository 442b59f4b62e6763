use super::{Grid, GridField, GridFn};
use crate::error::{Error, Result};

/// Crank-Nicolson solution of `phi_t = nu phi_xx` with Dirichlet data.
///
/// `left[k]` and `right[k]` are the boundary values at time `tgrid.x(k)`.
/// The initial row is taken from `initial` verbatim, boundaries included.
pub fn heat_crank_nicolson(initial: &GridFn, left: &[f64], right: &[f64], tgrid: &Grid, nu: f64) -> Result<GridField> {
    let xgrid = initial.grid;
    let nx = xgrid.len();
    let nt = tgrid.len();
    if left.len() != nt || right.len() != nt {
        return Err(Error::Dimension(format!(
            "boundary series of length {}/{} for {nt} time levels",
            left.len(),
            right.len()
        )));
    }
    if nu.is_nan() || nu <= 0.0 {
        return Err(Error::InvalidArgument(format!("diffusivity must be positive, got {nu}")));
    }
    let dx = xgrid.h();
    let dt = tgrid.h();
    let lam = nu * dt / (dx * dx);
    let m = nx - 2;

    let mut values = Vec::with_capacity(nx * nt);
    values.extend_from_slice(&initial.values);
    let mut cur = initial.values.clone();

    let sub = -0.5 * lam;
    let diag = 1.0 + lam;
    let mut rhs = vec![0.0; m];
    let mut cp = vec![0.0; m];
    let mut dp = vec![0.0; m];

    for k in 1..nt {
        let (l_new, r_new) = (left[k], right[k]);
        for (r, w) in rhs.iter_mut().zip(cur.windows(3)) {
            *r = 0.5 * lam * w[0] + (1.0 - lam) * w[1] + 0.5 * lam * w[2];
        }
        rhs[0] += 0.5 * lam * l_new;
        rhs[m - 1] += 0.5 * lam * r_new;

        // Thomas algorithm on the constant tridiagonal (sub, diag, sub).
        cp[0] = sub / diag;
        dp[0] = rhs[0] / diag;
        for j in 1..m {
            let denom = diag - sub * cp[j - 1];
            cp[j] = sub / denom;
            dp[j] = (rhs[j] - sub * dp[j - 1]) / denom;
        }
        let mut next = vec![0.0; nx];
        next[0] = l_new;
        next[nx - 1] = r_new;
        next[m] = dp[m - 1];
        for j in (0..m - 1).rev() {
            next[j + 1] = dp[j] - cp[j] * next[j + 2];
        }
        values.extend_from_slice(&next);
        cur = next;
    }
    GridField::new(xgrid, *tgrid, values)
}
