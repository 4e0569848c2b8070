use super::{herm_eig, HermitianMatrix};
use crate::error::{Error, Result};

/// Eigenvalues with `|λ| ≤ SUPPORT_CUTOFF · max|λ|` count as zero.
pub const SUPPORT_CUTOFF: f64 = 1e-12;

/// Functional calculus `U diag(f(λ)) U*`.
///
/// With `support_only`, eigenvalues below the support cutoff are sent to 0
/// instead of being passed to `f`; this is how `0·log 0 = 0` (and pseudo-inverses)
/// are realized. Any eigenvalue that `f` maps to a non-finite value is reported
/// as a domain error.
pub fn matrix_function(
    h: &HermitianMatrix,
    f: impl Fn(f64) -> f64,
    support_only: bool,
) -> Result<HermitianMatrix> {
    let es = herm_eig(h);
    let cutoff = SUPPORT_CUTOFF * es.max_abs_eigenvalue();
    let mut vals = Vec::with_capacity(es.eigenvalues.len());
    for &l in &es.eigenvalues {
        if support_only && l.abs() <= cutoff {
            vals.push(0.0);
            continue;
        }
        let y = f(l);
        if !y.is_finite() {
            return Err(Error::Domain { eigenvalue: l });
        }
        vals.push(y);
    }
    let out = es.reconstruct_from(&vals);
    Ok(HermitianMatrix::hermitize(out))
}

impl HermitianMatrix {
    /// `log H` on the support of `H` (0 on its kernel).
    pub fn log_support(&self) -> Result<HermitianMatrix> {
        matrix_function(self, f64::ln, true)
    }

    pub fn sqrt(&self) -> Result<HermitianMatrix> {
        matrix_function(self, |x| if x < 0.0 { f64::NAN } else { x.sqrt() }, true)
    }

    /// Moore–Penrose pseudo-inverse.
    pub fn pinv(&self) -> HermitianMatrix {
        matrix_function(self, |x| 1.0 / x, true).expect("reciprocal is finite off the kernel")
    }

    /// `H log H` with `0·log 0 = 0`.
    pub fn x_log_x(&self) -> Result<HermitianMatrix> {
        matrix_function(self, |x| if x < 0.0 { f64::NAN } else { x * x.ln() }, true)
    }

    /// Orthogonal projection onto the support (range) of `H`.
    pub fn support_projection(&self) -> HermitianMatrix {
        matrix_function(self, |_| 1.0, true).expect("constant function is finite")
    }

    pub fn exp(&self) -> HermitianMatrix {
        matrix_function(self, f64::exp, false).expect("exp of a finite spectrum")
    }
}
