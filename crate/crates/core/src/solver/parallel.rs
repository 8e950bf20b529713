//! Outage-exponent optimization for the two-relay parallel network.
//!
//! The network runs source -> {relay 1, relay 2} -> destination with no
//! direct link, no broadcast and no superposition; all four links scale
//! with unit SNR exponent. Relay `i` listens a fraction `t_i` of the block
//! chosen by a schedule from the first-stage orders. The outage event is a
//! minimum over the four network cuts, each accumulating a link's order
//! only while its endpoint is in the matching half of the schedule:
//!
//! ```text
//! {S}          t1*sr1 + t2*sr2
//! {S,R1}       t2*sr2 + (1-t1)*r1d
//! {S,R2}       t1*sr1 + (1-t2)*r2d
//! {S,R1,R2}    (1-t1)*r1d + (1-t2)*r2d
//! ```
//!
//! Outage is `min(cuts) < r` (strict). The objective is the four-variable
//! exponent cost `4 - sr1 - sr2 - r1d - r2d`. For a fixed pair of
//! first-stage orders the cuts are affine in the second-stage orders, so
//! the solve nests an exact two-variable minimization inside a refined scan
//! of the first stage, once per epsilon of the strictness schedule.

use crate::error::{Error, Result};

use super::expr::{Affine, Comparison, ConstraintExpr, OutageRegion, VarBound};
use super::grid::refined_minimize;
use super::{solve_outage_exponent, SolveMethod, DEGENERATE_GAP, STRICT_EPS_SCHEDULE};

/// Resolution of the first-stage scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParallelGrids {
    /// Steps per first-stage order on `[0, 1]`.
    pub divisions: usize,
    /// Local refinement passes around the incumbent.
    pub refine_passes: usize,
}

impl Default for ParallelGrids {
    fn default() -> Self {
        Self { divisions: 100, refine_passes: 2 }
    }
}

/// Listen-fraction schedule of the two relays.
///
/// The dynamic rule is a family indexed by the rate, which lets the solver
/// re-evaluate it at probe rates when taking limits; static and custom
/// schedules ignore the rate argument.
pub enum ParallelSchedule<'a> {
    /// `t_i = 1 - order_i * (1 - r)`: strong first-stage orders shorten
    /// listening, leaving slack for a weak second stage.
    Dynamic,
    /// Fixed fractions regardless of the draw.
    Static { t1: f64, t2: f64 },
    /// Arbitrary mapping from first-stage orders to fractions.
    Custom(&'a dyn Fn(f64, f64) -> (f64, f64)),
}

impl ParallelSchedule<'_> {
    fn eval(&self, rate: f64, sr1: f64, sr2: f64) -> (f64, f64) {
        match self {
            ParallelSchedule::Dynamic => {
                (1.0 - sr1 * (1.0 - rate), 1.0 - sr2 * (1.0 - rate))
            }
            ParallelSchedule::Static { t1, t2 } => (*t1, *t2),
            ParallelSchedule::Custom(f) => f(sr1, sr2),
        }
    }
}

/// Convenience constructor for the dynamic rule at a fixed rate, usable as
/// a plain `(order, order) -> (t1, t2)` function.
pub fn dynamic_parallel_schedule(r: f64) -> impl Fn(f64, f64) -> (f64, f64) {
    move |sr1, sr2| (1.0 - sr1 * (1.0 - r), 1.0 - sr2 * (1.0 - r))
}

/// Result of a parallel-network solve.
#[derive(Debug, Clone, PartialEq)]
pub struct ParallelSolution {
    /// Infimum over the open (strict) outage region, extrapolated from the
    /// epsilon schedule. When the open region is empty at the target rate
    /// (as at `r = 0`), the value is the limit from slightly larger rates.
    pub value: f64,
    /// Minimum over the closed region (`<=` in place of `<`); infinite when
    /// even the closed region is empty.
    pub closure_value: f64,
    /// Per-epsilon minima actually computed.
    pub samples: Vec<(f64, f64)>,
    /// True when the open-region infimum and the closure minimum disagree
    /// by more than the degeneracy gap: the closed region gains its minimum
    /// on a boundary set that carries no outage probability.
    pub degenerate_boundary: bool,
    /// Orders `[sr1, sr2, r1d, r2d]` near the infimum, from the tightest
    /// feasible epsilon (closure witness when no epsilon was feasible).
    pub witness: Option<[f64; 4]>,
}

fn cut_region(t1: f64, t2: f64, sr1: f64, sr2: f64, threshold: f64) -> OutageRegion {
    const R1D: usize = 0;
    const R2D: usize = 1;
    let cuts = ConstraintExpr::Min(vec![
        ConstraintExpr::Const(t1 * sr1 + t2 * sr2),
        ConstraintExpr::Sum(vec![
            (1.0, ConstraintExpr::Const(t2 * sr2)),
            (1.0 - t1, ConstraintExpr::Var(R1D)),
        ]),
        ConstraintExpr::Sum(vec![
            (1.0, ConstraintExpr::Const(t1 * sr1)),
            (1.0 - t2, ConstraintExpr::Var(R2D)),
        ]),
        ConstraintExpr::Sum(vec![
            (1.0 - t1, ConstraintExpr::Var(R1D)),
            (1.0 - t2, ConstraintExpr::Var(R2D)),
        ]),
    ]);
    OutageRegion {
        vars: vec![VarBound::new("r1d", 0.0, 1.0), VarBound::new("r2d", 0.0, 1.0)],
        constraints: vec![Comparison::le(cuts, threshold)],
    }
}

/// Minimum exponent cost over the cut region with the schedule evaluated
/// at `sched_rate` and the cuts compared against `threshold`.
fn solve_at(
    sched_rate: f64,
    threshold: f64,
    schedule: &ParallelSchedule<'_>,
    clamp: bool,
    grids: ParallelGrids,
) -> Result<Option<(f64, [f64; 4])>> {
    let mut witness: Option<[f64; 4]> = None;
    let mut best_value = f64::INFINITY;
    let outer = refined_minimize(
        &[(0.0, 1.0), (0.0, 1.0)],
        grids.divisions,
        grids.refine_passes,
        &mut |first_stage| {
            let (sr1, sr2) = (first_stage[0], first_stage[1]);
            let (mut t1, mut t2) = schedule.eval(sched_rate, sr1, sr2);
            if !(0.0..=1.0).contains(&t1) || !(0.0..=1.0).contains(&t2) {
                if clamp {
                    t1 = t1.clamp(0.0, 1.0);
                    t2 = t2.clamp(0.0, 1.0);
                } else {
                    return Err(Error::InvalidRegion(format!(
                        "schedule produced ({t1}, {t2}) outside [0,1]^2 at orders ({sr1}, {sr2})"
                    )));
                }
            }
            let region = cut_region(t1, t2, sr1, sr2, threshold);
            let objective = Affine::new(vec![-1.0, -1.0], 4.0 - sr1 - sr2);
            let inner = solve_outage_exponent(&region, &objective, SolveMethod::Exact)?;
            if let Some(opt) = inner.optimum() {
                if opt.value < best_value {
                    best_value = opt.value;
                    witness = Some([sr1, sr2, opt.argmin[0], opt.argmin[1]]);
                }
            }
            Ok(inner.diversity())
        },
    )?;
    Ok(outer.map(|b| (b.value, witness.expect("witness recorded with best value"))))
}

fn extrapolate(samples: &[(f64, f64)]) -> f64 {
    match samples.len() {
        0 => f64::INFINITY,
        1 => samples[0].1,
        n => {
            let (e1, v1) = samples[n - 2];
            let (e2, v2) = samples[n - 1];
            let slope = (v1 - v2) / (e1 - e2);
            v2 - slope * e2
        }
    }
}

/// Infimum of the exponent cost over the parallel-network outage region
/// under a listen-fraction schedule, for `0 <= r < 1`.
///
/// Schedule outputs outside the unit square raise a validation error
/// unless `clamp` is set. The strict outage inequality runs through the
/// epsilon schedule. When the open region is empty at every epsilon (at
/// `r = 0` no rate can fall strictly below zero), the solve probes rates
/// `r + eps` instead — with the dynamic schedule re-evaluated there — and
/// extrapolates back, which reproduces the limit of the tradeoff from the
/// right.
pub fn solve_parallel_dynamic(
    r: f64,
    schedule: &ParallelSchedule<'_>,
    clamp: bool,
    grids: ParallelGrids,
) -> Result<ParallelSolution> {
    if !r.is_finite() || !(0.0..1.0).contains(&r) {
        return Err(Error::Domain(format!(
            "parallel-network solve is defined for 0 <= r < 1, got {r}"
        )));
    }

    let closure = solve_at(r, r, schedule, clamp, grids)?;
    let closure_value = closure.as_ref().map_or(f64::INFINITY, |c| c.0);

    let mut samples = Vec::new();
    let mut tight: Option<[f64; 4]> = None;
    for &eps in &STRICT_EPS_SCHEDULE {
        if let Some((v, w)) = solve_at(r, r - eps, schedule, clamp, grids)? {
            samples.push((eps, v));
            tight = Some(w);
        }
    }

    if samples.is_empty() {
        // Open region empty at the target rate; probe slightly larger
        // rates with a half-epsilon strictness margin (comfortably above
        // the vertex feasibility slack, so probe boundaries stay out).
        for &eps in &STRICT_EPS_SCHEDULE {
            let rate = r + eps;
            if rate >= 1.0 {
                continue;
            }
            if let Some((v, w)) = solve_at(rate, rate - eps / 2.0, schedule, clamp, grids)? {
                samples.push((eps, v));
                tight = Some(w);
            }
        }
    }

    if samples.is_empty() {
        return Ok(ParallelSolution {
            value: closure_value,
            closure_value,
            samples,
            degenerate_boundary: false,
            witness: closure.map(|c| c.1),
        });
    }

    let value = extrapolate(&samples).max(closure_value.min(f64::MAX));
    let value = if closure_value.is_finite() { value.max(closure_value) } else { value };
    Ok(ParallelSolution {
        value,
        closure_value,
        samples,
        degenerate_boundary: closure_value.is_finite()
            && (value - closure_value).abs() > DEGENERATE_GAP,
        witness: tight,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dynamic_schedule_matches_optimal_curve() {
        let r = 1.0 / 3.0;
        let sol = solve_parallel_dynamic(
            r,
            &ParallelSchedule::Dynamic,
            false,
            ParallelGrids::default(),
        )
        .unwrap();
        assert!((sol.value - 1.5).abs() < 1e-2, "got {}", sol.value);
        // The binding event sits on the destination-side cut:
        // (1-r)(sr1*r1d + sr2*r2d) = r.
        let w = sol.witness.unwrap();
        let cut = (1.0 - r) * (w[0] * w[2] + w[1] * w[3]);
        assert!((cut - r).abs() < 0.02, "witness {w:?} cut {cut}");
    }

    #[test]
    fn dynamic_schedule_flags_degenerate_boundary() {
        // The closed region gains isolated corners (e.g. orders
        // (0,1,1,1)) of cost 1; the open-region infimum stays at
        // 2 - r/(1-r).
        let r = 1.0 / 3.0;
        let sol = solve_parallel_dynamic(
            r,
            &ParallelSchedule::Dynamic,
            false,
            ParallelGrids::default(),
        )
        .unwrap();
        assert!(sol.degenerate_boundary);
        assert!((sol.closure_value - 1.0).abs() < 1e-9, "got {}", sol.closure_value);
    }

    #[test]
    fn static_schedule_matches_static_curve() {
        let r = 0.3;
        let sol = solve_parallel_dynamic(
            r,
            &ParallelSchedule::Static { t1: 0.5, t2: 0.5 },
            false,
            ParallelGrids::default(),
        )
        .unwrap();
        assert!((sol.value - 1.4).abs() < 1e-2, "got {}", sol.value);
        // No isolated boundary under the static schedule.
        assert!(!sol.degenerate_boundary);
        assert!((sol.value - sol.closure_value).abs() < 1e-6);
    }

    #[test]
    fn zero_rate_takes_rate_limit() {
        // At r = 0 no rate falls strictly below zero; the solve probes
        // r = eps and extrapolates: both first-stage or both
        // destination-side links at order zero, cost 2.
        for schedule in [ParallelSchedule::Dynamic, ParallelSchedule::Static { t1: 0.5, t2: 0.5 }]
        {
            let sol =
                solve_parallel_dynamic(0.0, &schedule, false, ParallelGrids::default()).unwrap();
            assert!((sol.value - 2.0).abs() < 1e-2, "got {}", sol.value);
            assert!(!sol.samples.is_empty());
        }
    }

    #[test]
    fn schedule_range_is_validated() {
        let bad = |_: f64, _: f64| (1.5, 0.5);
        let res = solve_parallel_dynamic(
            0.3,
            &ParallelSchedule::Custom(&bad),
            false,
            ParallelGrids::default(),
        );
        assert!(matches!(res, Err(Error::InvalidRegion(_))));
        // With clamping enabled the same schedule is accepted.
        let res = solve_parallel_dynamic(
            0.3,
            &ParallelSchedule::Custom(&bad),
            true,
            ParallelGrids::default(),
        );
        assert!(res.is_ok());
    }

    #[test]
    fn custom_schedule_matches_dynamic_at_fixed_rate() {
        let r = 0.25;
        let fixed = dynamic_parallel_schedule(r);
        let via_custom = solve_parallel_dynamic(
            r,
            &ParallelSchedule::Custom(&fixed),
            false,
            ParallelGrids::default(),
        )
        .unwrap();
        let via_dynamic =
            solve_parallel_dynamic(r, &ParallelSchedule::Dynamic, false, ParallelGrids::default())
                .unwrap();
        assert!((via_custom.value - via_dynamic.value).abs() < 1e-9);
    }

    #[test]
    fn rejects_rates_outside_unit_interval() {
        for r in [1.0, -0.1, f64::NAN] {
            assert!(solve_parallel_dynamic(
                r,
                &ParallelSchedule::Dynamic,
                false,
                ParallelGrids::default()
            )
            .is_err());
        }
    }
}
