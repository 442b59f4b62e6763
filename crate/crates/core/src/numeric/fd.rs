use super::GridFn;
use crate::error::{Error, Result};

/// Finite-difference derivative of a sampled function.
///
/// Every node uses a five-point stencil: centred where possible, shifted at
/// the second and penultimate nodes, fully one-sided at the ends. All are
/// exact on polynomials up to degree four.
pub fn fd_derivative(f: &GridFn, order: u8) -> Result<GridFn> {
    if f.len() < 5 {
        return Err(Error::Grid(format!("need at least 5 points, got {}", f.len())));
    }
    if !(order == 1 || order == 2) {
        return Err(Error::InvalidArgument(format!("derivative order {order}")));
    }
    GridFn::new(f.grid, fd_slice(&f.values, f.grid.h(), order))
}

/// Slice form of [`fd_derivative`]; `v.len()` must be at least 5.
pub fn fd_slice(v: &[f64], h: f64, order: u8) -> Vec<f64> {
    let n = v.len();
    assert!(n >= 5, "finite differences need 5 points");
    let mut out = vec![0.0; n];
    match order {
        1 => {
            out[0] = (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) / (12.0 * h);
            out[n - 1] =
                (25.0 * v[n - 1] - 48.0 * v[n - 2] + 36.0 * v[n - 3] - 16.0 * v[n - 4] + 3.0 * v[n - 5]) / (12.0 * h);
            out[1] = (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]) / (12.0 * h);
            out[n - 2] = (3.0 * v[n - 1] + 10.0 * v[n - 2] - 18.0 * v[n - 3] + 6.0 * v[n - 4] - v[n - 5]) / (12.0 * h);
            for i in 2..n - 2 {
                out[i] = (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) / (12.0 * h);
            }
        }
        2 => {
            let h2 = h * h;
            out[0] = (35.0 * v[0] - 104.0 * v[1] + 114.0 * v[2] - 56.0 * v[3] + 11.0 * v[4]) / (12.0 * h2);
            out[n - 1] = (35.0 * v[n - 1] - 104.0 * v[n - 2] + 114.0 * v[n - 3] - 56.0 * v[n - 4] + 11.0 * v[n - 5])
                / (12.0 * h2);
            out[1] = (11.0 * v[0] - 20.0 * v[1] + 6.0 * v[2] + 4.0 * v[3] - v[4]) / (12.0 * h2);
            out[n - 2] = (11.0 * v[n - 1] - 20.0 * v[n - 2] + 6.0 * v[n - 3] + 4.0 * v[n - 4] - v[n - 5]) / (12.0 * h2);
            for i in 2..n - 2 {
                out[i] = (-v[i - 2] + 16.0 * v[i - 1] - 30.0 * v[i] + 16.0 * v[i + 1] - v[i + 2]) / (12.0 * h2);
            }
        }
        _ => panic!("unsupported derivative order {order}"),
    }
    out
}
