use serde::Serialize;

use crate::error::{Error, Result};

/// Default tolerance for identities evaluated with exact derivatives.
pub const ANALYTIC: f64 = 1e-8;
/// Default per-point seed residual, relative to `1 + max|zeta|`.
pub const SEED_REL: f64 = 1e-6;
/// Multiplier of `h^2` for identities limited by finite differences.
pub const FD_FACTOR: f64 = 10.0;

/// Environment variable read by the command-line front end.
pub const ENV_VAR: &str = "DARBOUX_TOL";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub analytic: f64,
    pub seed_rel: f64,
    pub fd_factor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { analytic: ANALYTIC, seed_rel: SEED_REL, fd_factor: FD_FACTOR }
    }
}

impl Tolerances {
    /// Defaults with both absolute tolerances replaced by `value`.
    pub fn overridden(value: f64) -> Result<Self> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::InvalidArgument(format!("tolerance {value}")));
        }
        Ok(Tolerances { analytic: value, seed_rel: value, ..Self::default() })
    }

    /// Parses an optional decimal override such as the value of `DARBOUX_TOL`.
    pub fn from_override(raw: Option<&str>) -> Result<Self> {
        match raw.map(str::trim) {
            None | Some("") => Ok(Self::default()),
            Some(s) => {
                let v: f64 = s.parse().map_err(|_| Error::InvalidArgument(format!("{ENV_VAR}={s}")))?;
                Self::overridden(v)
            }
        }
    }

    pub fn from_env() -> Result<Self> {
        Self::from_override(std::env::var(ENV_VAR).ok().as_deref())
    }

    /// Tolerance for an identity check on a grid of spacing `h`.
    pub fn identity(&self, h: f64, analytic: bool) -> f64 {
        if analytic {
            self.analytic
        } else {
            self.fd_factor * h * h
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn override_parsing() {
        assert_eq!(Tolerances::from_override(None).unwrap(), Tolerances::default());
        let t = Tolerances::from_override(Some(" 1e-6 ")).unwrap();
        assert_eq!((t.analytic, t.seed_rel, t.fd_factor), (1e-6, 1e-6, FD_FACTOR));
        assert!(Tolerances::from_override(Some("abc")).is_err());
        assert!(Tolerances::from_override(Some("-1")).is_err());
    }

    #[test]
    fn identity_switches_on_derivative_source() {
        let t = Tolerances::default();
        assert_eq!(t.identity(0.1, true), 1e-8);
        assert!((t.identity(0.1, false) - 0.1).abs() < 1e-15);
    }
}
