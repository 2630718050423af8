use super::matrix::ComplexMatrix;
use crate::error::{LieError, Result};

const MAX_SQRT_STEPS: usize = 64;
const MAX_DB_ITERATIONS: usize = 60;

/// Principal matrix logarithm by inverse scaling and squaring.
///
/// Square roots are taken with the Denman–Beavers iteration until the
/// argument is within 0.25 of the identity; the remaining logarithm is summed
/// from the `2 atanh((A - I)(A + I)^-1)` series. An iteration that stalls or
/// hits a singular iterate means the spectrum touches the closed negative real
/// axis, which is reported as [`LieError::Branch`].
pub fn mat_log_principal(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.require_square()?;
    if !a.is_finite() {
        return Err(LieError::NonFinite("mat_log_principal input"));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(a.clone());
    }
    // Singular input is a distinct failure from a branch-cut eigenvalue.
    a.inverse()?;

    let ident = ComplexMatrix::identity(n);
    let mut current = a.clone();
    let mut halvings = 0usize;
    while (&current - &ident).norm_one() > 0.25 {
        if halvings == MAX_SQRT_STEPS {
            return Err(LieError::Branch);
        }
        current = sqrt_denman_beavers(&current)?;
        halvings += 1;
    }

    let s = (&current - &ident).try_mul(&(&current + &ident).inverse().map_err(|_| LieError::Branch)?)?;
    let s2 = &s * &s;
    let mut term = s.clone();
    let mut sum = s.clone();
    let scale = s.norm_fro().max(f64::MIN_POSITIVE);
    for k in 1..200 {
        term = &term * &s2;
        let t = term.scale(1.0 / (2 * k + 1) as f64);
        sum = &sum + &t;
        if t.norm_fro() <= 1e-18 * scale {
            break;
        }
    }
    sum.scale(2.0 * (1u64 << halvings) as f64).ensure_finite("mat_log_principal")
}

fn sqrt_denman_beavers(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.rows();
    let mut y = a.clone();
    let mut z = ComplexMatrix::identity(n);
    for _ in 0..MAX_DB_ITERATIONS {
        let y_inv = y.inverse().map_err(|_| LieError::Branch)?;
        let z_inv = z.inverse().map_err(|_| LieError::Branch)?;
        let y_next = (&y + &z_inv).scale(0.5);
        let z_next = (&z + &y_inv).scale(0.5);
        let delta = (&y_next - &y).norm_fro();
        y = y_next;
        z = z_next;
        if !y.is_finite() {
            return Err(LieError::Branch);
        }
        if delta <= 1e-15 * y.norm_fro() {
            return Ok(y);
        }
    }
    Err(LieError::Branch)
}
