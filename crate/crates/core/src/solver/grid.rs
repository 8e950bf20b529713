//! Refined grid scans: exhaustive evaluation over a box at a configured
//! step, followed by local re-scans around the incumbent. The coarse pass
//! locates the optimal basin; refinement passes shrink the quantization
//! error far below the coarse step. Used as the cross-check path of the
//! outage solver and as the outer loop of the nested CSI optimizations.

use crate::error::Result;

/// Outcome of a scan: best value and where it was attained.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanBest {
    pub value: f64,
    pub point: Vec<f64>,
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return true;
        }
        if x > y {
            return false;
        }
    }
    false
}

fn scan_box(
    bounds: &[(f64, f64)],
    divisions: usize,
    f: &mut dyn FnMut(&[f64]) -> Result<f64>,
) -> Result<Option<ScanBest>> {
    let n = bounds.len();
    let steps: Vec<f64> = bounds
        .iter()
        .map(|&(lo, hi)| if divisions == 0 { 0.0 } else { (hi - lo) / divisions as f64 })
        .collect();
    let mut idx = vec![0usize; n];
    let mut point = vec![0.0; n];
    let mut best: Option<ScanBest> = None;
    loop {
        for i in 0..n {
            let (lo, hi) = bounds[i];
            point[i] = if idx[i] == divisions { hi } else { lo + idx[i] as f64 * steps[i] };
        }
        let v = f(&point)?;
        if v.is_finite() {
            match &best {
                Some(b) => {
                    if v < b.value - 1e-12
                        || ((v - b.value).abs() <= 1e-12 && lex_less(&point, &b.point))
                    {
                        best = Some(ScanBest { value: v, point: point.clone() });
                    }
                }
                None => best = Some(ScanBest { value: v, point: point.clone() }),
            }
        }
        // Odometer increment.
        let mut i = 0;
        loop {
            if i == n {
                return Ok(best);
            }
            if idx[i] < divisions {
                idx[i] += 1;
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// Minimizes `f` over the box: one full scan at `divisions` steps per
/// variable, then `refine_passes` local re-scans in a window of two coarse
/// cells around the incumbent. Returns `None` when no evaluation was
/// finite (empty region). `f` signals an infeasible point with `INFINITY`.
pub fn refined_minimize(
    bounds: &[(f64, f64)],
    divisions: usize,
    refine_passes: usize,
    f: &mut dyn FnMut(&[f64]) -> Result<f64>,
) -> Result<Option<ScanBest>> {
    let Some(mut best) = scan_box(bounds, divisions, f)? else {
        return Ok(None);
    };
    let mut window: Vec<(f64, f64)> = bounds.to_vec();
    for _ in 0..refine_passes {
        let widths: Vec<f64> = window
            .iter()
            .map(|&(lo, hi)| 2.0 * (hi - lo) / divisions.max(1) as f64)
            .collect();
        window = best
            .point
            .iter()
            .zip(&widths)
            .zip(bounds)
            .map(|((&p, &w), &(lo, hi))| ((p - w).max(lo), (p + w).min(hi)))
            .collect();
        if let Some(b) = scan_box(&window, divisions, f)? {
            if b.value < best.value {
                best = b;
            }
        }
    }
    Ok(Some(best))
}

/// Maximizes `f` over the box by minimizing its negation; `f` signals an
/// infeasible point with `NEG_INFINITY`.
pub fn refined_maximize(
    bounds: &[(f64, f64)],
    divisions: usize,
    refine_passes: usize,
    f: &mut dyn FnMut(&[f64]) -> Result<f64>,
) -> Result<Option<ScanBest>> {
    let neg = refined_minimize(bounds, divisions, refine_passes, &mut |x| f(x).map(|v| -v))?;
    Ok(neg.map(|b| ScanBest { value: -b.value, point: b.point }))
}
