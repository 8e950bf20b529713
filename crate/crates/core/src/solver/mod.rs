//! Numerical outage-exponent optimization.
//!
//! Diversity exponents are infima of a linear "exponent cost" over outage
//! regions cut out by piecewise-min/max rate constraints. This module
//! computes those infima along two independent routes:
//!
//! * the **exact polyhedral path** rewrites each min/max comparison into a
//!   finite union of half-space conjunctions and minimizes the objective by
//!   vertex enumeration over every piece;
//! * the **grid path** exhaustively scans the variable box at a configured
//!   step (with local refinement) and serves as a structure-free
//!   cross-check.
//!
//! Regions written with strict inequalities are solved by an epsilon-limit:
//! the strict thresholds are tightened by each epsilon in a fixed schedule,
//! the minima extrapolated to epsilon = 0, and a disagreement with the
//! closed-region minimum larger than [`DEGENERATE_GAP`] is flagged as a
//! degenerate boundary (an isolated equality point that does not carry
//! outage probability).

mod csi;
mod exact;
pub mod expr;
pub mod grid;
mod parallel;
mod regions;

pub use csi::{
    ddf_outage_exponent, solve_global_csi, solve_local_csi, GlobalCsiGrids, LocalCsiGrids,
};
pub use expr::{
    Affine, Comparison, CompiledRegion, ConstraintExpr, HalfSpace, MinOfMax, OutageRegion,
    Relation, VarBound,
};
pub use parallel::{
    dynamic_parallel_schedule, solve_parallel_dynamic, ParallelGrids, ParallelSchedule,
    ParallelSolution,
};
pub use regions::{exponent_cost, full_duplex_region, half_duplex_region};

use crate::error::{Error, Result};

/// Epsilon schedule for strict-inequality regions.
pub const STRICT_EPS_SCHEDULE: [f64; 3] = [1e-3, 1e-4, 1e-5];

/// Gap between the epsilon-limit and the closed-region minimum above which
/// the boundary is reported as degenerate.
pub const DEGENERATE_GAP: f64 = 1e-3;

/// Grid-path resolution: `divisions` steps per variable on the full box,
/// then `refine_passes` local re-scans around the incumbent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSettings {
    pub divisions: usize,
    pub refine_passes: usize,
}

impl GridSettings {
    /// Default resolution: 400 steps per variable up to dimension 3, 100
    /// for dimension 4, two refinement passes either way.
    pub fn default_for(dim: usize) -> Self {
        Self { divisions: if dim <= 3 { 400 } else { 100 }, refine_passes: 2 }
    }
}

/// Which route computes the minimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    /// Disjunctive decomposition plus vertex enumeration.
    Exact,
    /// Refined exhaustive scan.
    Grid(GridSettings),
}

/// Result of a region minimization.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentSolution {
    /// Infimum of the objective over the region (epsilon-limit value for
    /// strict regions).
    pub value: f64,
    /// A feasible point attaining (or approaching) the infimum;
    /// lexicographically smallest among ties.
    pub argmin: Vec<f64>,
    /// Route that produced the solution.
    pub method: SolveMethod,
    /// Smallest epsilon used for strict constraints (0 when none).
    pub epsilon: f64,
    /// Minimum over the closed region (thresholds taken non-strict).
    pub closure_value: f64,
    /// True when the strict infimum and the closure minimum disagree by
    /// more than [`DEGENERATE_GAP`].
    pub degenerate_boundary: bool,
}

/// Minimization outcome: distinguished empty region versus an optimum.
#[derive(Debug, Clone, PartialEq)]
pub enum RegionMin {
    /// No feasible point: the event cannot occur, diversity is infinite.
    Empty,
    Optimum(ExponentSolution),
}

impl RegionMin {
    /// Diversity interpretation: an empty outage region maps to infinity.
    pub fn diversity(&self) -> f64 {
        match self {
            RegionMin::Empty => f64::INFINITY,
            RegionMin::Optimum(s) => s.value,
        }
    }

    pub fn optimum(&self) -> Option<&ExponentSolution> {
        match self {
            RegionMin::Empty => None,
            RegionMin::Optimum(s) => Some(s),
        }
    }
}

fn solve_at(
    compiled: &CompiledRegion,
    objective: &Affine,
    method: SolveMethod,
    eps: f64,
) -> Result<Option<(f64, Vec<f64>)>> {
    match method {
        SolveMethod::Exact => {
            let mut best: Option<(f64, Vec<f64>)> = None;
            for poly in compiled.polyhedra(eps)? {
                if let Some((v, x)) =
                    exact::minimize_polyhedron(&compiled.bounds, &poly, &objective.coeffs)
                {
                    let take = match &best {
                        Some((bv, bx)) => {
                            v < bv - 1e-12 || ((v - bv).abs() <= 1e-12 && lex_less(&x, bx))
                        }
                        None => true,
                    };
                    if take {
                        best = Some((v, x));
                    }
                }
            }
            Ok(best.map(|(v, x)| (v + objective.constant, x)))
        }
        SolveMethod::Grid(settings) => {
            let best = grid::refined_minimize(
                &compiled.bounds,
                settings.divisions,
                settings.refine_passes,
                &mut |x| {
                    Ok(if compiled.contains(x, eps) {
                        objective.eval(x)
                    } else {
                        f64::INFINITY
                    })
                },
            )?;
            Ok(best.map(|b| (b.value, b.point)))
        }
    }
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

/// Minimizes an affine objective over an outage region.
///
/// Non-strict regions are solved in one pass. Regions with strict
/// comparisons run the epsilon schedule and report the extrapolated
/// infimum; the returned witness comes from the tightest feasible epsilon.
pub fn solve_outage_exponent(
    region: &OutageRegion,
    objective: &Affine,
    method: SolveMethod,
) -> Result<RegionMin> {
    region.validate()?;
    if objective.coeffs.len() != region.dim() {
        return Err(Error::InvalidRegion(format!(
            "objective has {} coefficients for a {}-variable region",
            objective.coeffs.len(),
            region.dim()
        )));
    }
    if matches!(method, SolveMethod::Exact) && region.dim() > 4 {
        return Err(Error::Unsupported(
            "exact polyhedral path handles at most 4 variables".into(),
        ));
    }
    let compiled = CompiledRegion::compile(region)?;

    let closure = solve_at(&compiled, objective, method, 0.0)?;
    let Some((closure_value, closure_point)) = closure else {
        return Ok(RegionMin::Empty);
    };

    if !region.has_strict() {
        return Ok(RegionMin::Optimum(ExponentSolution {
            value: closure_value,
            argmin: closure_point,
            method,
            epsilon: 0.0,
            closure_value,
            degenerate_boundary: false,
        }));
    }

    let mut samples: Vec<(f64, f64, Vec<f64>)> = Vec::new();
    for &eps in &STRICT_EPS_SCHEDULE {
        if let Some((v, x)) = solve_at(&compiled, objective, method, eps)? {
            samples.push((eps, v, x));
        }
    }

    if samples.is_empty() {
        // The open region is empty (or thinner than the finest epsilon):
        // report the closed-region minimum, which is the limit the infimum
        // approaches as the threshold is reached.
        return Ok(RegionMin::Optimum(ExponentSolution {
            value: closure_value,
            argmin: closure_point,
            method,
            epsilon: 0.0,
            closure_value,
            degenerate_boundary: false,
        }));
    }

    // Linear extrapolation to epsilon = 0 from the two tightest samples.
    let value = if samples.len() >= 2 {
        let (e1, v1, _) = samples[samples.len() - 2].clone();
        let (e2, v2, _) = &samples[samples.len() - 1];
        let slope = (v1 - v2) / (e1 - e2);
        (v2 - slope * e2).max(closure_value)
    } else {
        samples[0].1.max(closure_value)
    };
    let (epsilon, _, argmin) = samples.pop().expect("nonempty");

    Ok(RegionMin::Optimum(ExponentSolution {
        value,
        argmin,
        method,
        epsilon,
        closure_value,
        degenerate_boundary: (value - closure_value).abs() > DEGENERATE_GAP,
    }))
}
