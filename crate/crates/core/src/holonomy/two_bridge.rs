//! The two-bridge presentation `⟨x1, x2 | x1 w = w x2⟩`, `w = x2 x1⁻¹ x2⁻¹ x1`,
//! of the figure-eight knot group and its closed-form representation.

use num_complex::Complex64;
use serde::Serialize;

use super::{det2, distance, inv2, trace, Holonomy, M2};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct TwoBridgeRep {
    pub x1: M2,
    pub x2: M2,
    /// `‖x1 w - w x2‖`.
    pub relation_residual: f64,
    pub det_residual: f64,
}

/// The representation at a point `(m, l)` of the A-polynomial curve. The
/// closed form is written in the longitude eigenvalue `m² l`, so it is
/// evaluated there.
pub fn figure_eight_two_bridge(m: Complex64, l: Complex64) -> Result<TwoBridgeRep> {
    let m2 = m * m;
    let l = m2 * l;
    let m4 = m2 * m2;
    let m6 = m4 * m2;
    let m8 = m4 * m4;
    let d1 = m4 - 1.0;
    let d2 = m6 - m2;
    if d1.norm() < 1e-9 || d2.norm() < 1e-9 {
        return Err(Error::Invalid(format!(
            "excluded locus: m^4 - 1 or m^6 - m^2 vanishes at m = {m}"
        )));
    }
    let zero = Complex64::new(0.0, 0.0);
    let x1 = M2::new(m.inv(), (m4 * l - m2 * l - m2 - l) / d1, zero, m);
    let x2 = M2::new(
        zero,
        (m2 * l + m2) / d1,
        (-m8 + m6 + 2.0 * m4 + m2 * l - 1.0) / d2,
        (m2 + 1.0) / m,
    );
    let w = x2 * inv2(&x1) * inv2(&x2) * x1;
    let relation_residual = distance(&(x1 * w), &(w * x2));
    let det_residual = (det2(&x1) - 1.0).norm().max((det2(&x2) - 1.0).norm());
    Ok(TwoBridgeRep {
        x1,
        x2,
        relation_residual,
        det_residual,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceComparison {
    /// `(word in x1, x2, trace there, trace of the face-pairing image)`.
    pub traces: Vec<(String, [f64; 2], [f64; 2])>,
    pub max_difference: f64,
}

/// Compares traces of `x1`, `x2`, `x1 x2`, `x1 x2⁻¹` and `x1² x2` with
/// the holonomy, given words for `x1` and `x2` in the face-pairing
/// generators. Equal traces on these words pin down the representation
/// up to conjugation.
pub fn compare_two_bridge(
    rep: &TwoBridgeRep,
    h: &Holonomy,
    x1_word: &str,
    x2_word: &str,
) -> Result<TraceComparison> {
    let y1 = h.word(x1_word)?;
    let y2 = h.word(x2_word)?;
    let pairs = [
        ("x1", rep.x1, y1),
        ("x2", rep.x2, y2),
        ("x1*x2", rep.x1 * rep.x2, y1 * y2),
        ("x1*x2^-1", rep.x1 * inv2(&rep.x2), y1 * inv2(&y2)),
        ("x1^2*x2", rep.x1 * rep.x1 * rep.x2, y1 * y1 * y2),
    ];
    let mut traces = Vec::new();
    let mut max_difference: f64 = 0.0;
    for (name, a, b) in pairs {
        let (ta, tb) = (trace(&a), trace(&b));
        max_difference = max_difference.max((ta - tb).norm());
        traces.push((name.to_string(), [ta.re, ta.im], [tb.re, tb.im]));
    }
    Ok(TraceComparison {
        traces,
        max_difference,
    })
}
