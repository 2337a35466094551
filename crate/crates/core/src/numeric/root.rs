use crate::error::{Error, Result};

/// Smallest root of `f` in `(lo, hi]` for a function negative at `lo`.
///
/// Scans forward in steps of `step` until the sign changes, then bisects to
/// machine precision. Bracketing first means a root is found even when `f`
/// is not monotone along the search direction.
pub fn first_sign_change<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, step: f64) -> Result<f64> {
    let mut a = lo;
    let mut fa = f(a);
    if fa >= 0.0 {
        return Err(Error::RootFinding(format!("f({lo}) = {fa} is not negative")));
    }
    let mut b = a;
    loop {
        if b >= hi {
            return Err(Error::RootFinding(format!("no sign change in ({lo}, {hi}]")));
        }
        b = (a + step).min(hi);
        let fb = f(b);
        if !fb.is_finite() {
            return Err(Error::RootFinding(format!("non-finite value at {b}")));
        }
        if fb >= 0.0 {
            break;
        }
        a = b;
        fa = fb;
    }
    let _ = fa;
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if f(mid) < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}
