//! Bracketed scalar root finding.

use crate::{Error, Result};

/// Brent's method on a bracket `[a, b]` with `f(a)·f(b) <= 0`.
///
/// Stops when the bracket is narrower than `rel_tol·|x| + abs_tol`.
pub fn brent<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_iter: usize,
) -> Result<f64> {
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracket(format!(
            "no sign change on [{a}, {b}]: f = {fa}, {fb}"
        )));
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 0.5 * (rel_tol * b.abs() + abs_tol) + 2.0 * f64::EPSILON * b.abs();
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * m * s, 1.0 - s)
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0)),
                    (qa - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = d;
            }
        } else {
            d = m;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b)?;
    }
    Err(Error::Convergence(format!(
        "Brent iteration did not converge in {max_iter} steps (last x = {b})"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cube_root() {
        let x = brent(|x| Ok(x * x * x - 2.0), 0.0, 2.0, 1e-15, 0.0, 100).unwrap();
        assert!((x - 2f64.cbrt()).abs() < 1e-14);
    }

    #[test]
    fn reports_missing_bracket() {
        let err = brent(|x| Ok(x * x + 1.0), -1.0, 1.0, 1e-12, 0.0, 100).unwrap_err();
        assert!(matches!(err, Error::Bracket(_)));
    }

    #[test]
    fn propagates_function_errors() {
        let err = brent(|_| Err(Error::domain("boom")), 0.0, 1.0, 1e-12, 0.0, 100).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }
}
