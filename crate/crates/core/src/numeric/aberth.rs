//! Simultaneous root finding for univariate complex polynomials.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Evaluates `Σ c_k z^k` and its derivative by Horner's rule.
pub fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Drops leading coefficients that are negligible against the largest one.
pub fn trim(coeffs: &[Complex64], rel: f64) -> Vec<Complex64> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut out = coeffs.to_vec();
    while out.len() > 1 && out.last().unwrap().norm() <= rel * scale {
        out.pop();
    }
    out
}

/// All roots of `Σ coeffs[k] z^k` (lowest degree first) by Aberth iteration,
/// each finished with a Newton step.
pub fn aberth(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let c = trim(coeffs, 1e-14);
    let d = c.len() - 1;
    if d == 0 {
        return Ok(Vec::new());
    }
    let lead = c[d];
    // Fujiwara bound on the root moduli
    let bound = (0..d)
        .map(|k| (c[k] / lead).norm().powf(1.0 / (d - k) as f64))
        .fold(0.0, f64::max)
        * 2.0;
    let r = bound.max(1e-3);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / d as f64 + 0.4))
        .collect();
    let mut converged = false;
    for _ in 0..1000 {
        let mut worst: f64 = 0.0;
        for k in 0..d {
            let (p, dp) = horner(&c, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let sum: Complex64 = (0..d)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if w.is_finite() {
                z[k] -= w;
                worst = worst.max(w.norm() / (1.0 + z[k].norm()));
            }
        }
        if worst < 1e-15 {
            converged = true;
            break;
        }
    }
    if !converged {
        // clusters converge slowly; accept when the residuals are small
        let scale: f64 = c.iter().map(|x| x.norm()).sum();
        let ok = z.iter().all(|&x| {
            let (p, _) = horner(&c, x);
            p.norm() <= 1e-8 * scale * (1.0 + x.norm()).powi(d as i32)
        });
        if !ok {
            return Err(Error::Numeric(format!(
                "root iteration did not converge for a degree {d} polynomial"
            )));
        }
    }
    for x in &mut z {
        let (p, dp) = horner(&c, *x);
        let step = p / dp;
        if step.is_finite() && step.norm() < 1e-6 * (1.0 + x.norm()) {
            *x -= step;
        }
    }
    Ok(z)
}
