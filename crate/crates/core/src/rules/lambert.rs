//! Principal-branch Lambert W by Newton iteration, and the approval
//! threshold derived from it for the PTAS committee rule.

/// Newton iteration on w*e^w = x for the principal branch, x >= 0.
/// Start at ln(1+x), at most 50 steps, tolerance 1e-12 on the residual.
pub fn lambert_w0(x: f64) -> f64 {
    assert!(x >= 0.0, "lambert_w0 defined here for x >= 0 only");
    if x == 0.0 {
        return 0.0;
    }
    let mut w = (1.0 + x).ln();
    for _ in 0..50 {
        let ew = w.exp();
        let residual = w * ew - x;
        if residual.abs() <= 1e-12 {
            break;
        }
        // derivative of w*e^w is (1+w)*e^w; positive for w > -1
        w -= residual / ((1.0 + w) * ew);
    }
    w
}

/// Approval threshold t = ceil(m * W0(k) / k), clamped to [1, m].
pub fn ptas_threshold(m: usize, k: usize) -> usize {
    assert!(k >= 1 && k <= m, "require 1 <= k <= m");
    let w = lambert_w0(k as f64);
    let t = (m as f64 * w / k as f64).ceil() as usize;
    t.clamp(1, m)
}
