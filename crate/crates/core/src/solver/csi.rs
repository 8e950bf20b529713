//! Channel-state-information bound solvers and the decode-and-forward
//! outage oracle.
//!
//! These routines answer "how well could any schedule do" questions by
//! nesting the region optimizer inside schedule searches:
//!
//! * [`solve_global_csi`] bounds the tradeoff when the relay's
//!   listen/transmit split may depend on every channel in the network. Two
//!   independent routes are cross-checked: a direct scan of the region cut
//!   out by the schedule-eliminated rational constraint
//!   `(sr*rd - sd^2)/(sr + rd - 2 sd) <= r`, and a nested scan that
//!   maximizes the cut-set rate order over the schedule at every exponent
//!   point.
//! * [`solve_local_csi`] bounds the tradeoff when the split may depend only
//!   on the relay's incoming channel: an adversarial three-level program
//!   (worst incoming order, best schedule, worst remaining orders).
//! * [`ddf_outage_exponent`] evaluates the decode-and-forward outage
//!   exponent numerically, with the relay's listening time tied to the
//!   incoming order, as an oracle for the closed-form curve.

use crate::dmt::{d_full_duplex, ChannelExponents, MultiplexingGain};
use crate::error::{Error, Result};

use super::expr::{Affine, Comparison, ConstraintExpr, OutageRegion, VarBound};
use super::grid::{refined_maximize, refined_minimize};
use super::regions::{exponent_cost, full_duplex_region, half_duplex_rate_order};
use super::{solve_outage_exponent, ExponentSolution, GridSettings, RegionMin, SolveMethod};

/// Tolerance for the agreement of the two global-CSI routes.
const CROSS_TOL: f64 = 5e-3;

/// Resolution of the global-CSI scans.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GlobalCsiGrids {
    /// Steps per exponent variable on the full box.
    pub divisions: usize,
    /// Steps of the listen-fraction grid in the nested route.
    pub schedule_divisions: usize,
    /// Local refinement passes around incumbents.
    pub refine_passes: usize,
}

impl Default for GlobalCsiGrids {
    fn default() -> Self {
        Self { divisions: 120, schedule_divisions: 16, refine_passes: 2 }
    }
}

/// Largest rate order the relay can reach at exponent point
/// `(sr, rd, sd)` when it may pick the listen fraction with full knowledge
/// of the point. The order is concave piecewise-affine in the fraction, so
/// the maximum sits at an endpoint or at the kink where the two cut terms
/// cross; a small grid plus those candidates evaluates it exactly.
fn best_schedule_rate_order(sr: f64, rd: f64, sd: f64, schedule_divisions: usize) -> f64 {
    let rise = sr.max(sd) - sd; // slope of the listening cut term
    let fall = sd - rd.max(sd); // slope of the transmitting cut term
    let mut best = f64::NEG_INFINITY;
    let mut eval = |t: f64| {
        let v = half_duplex_rate_order(sr, rd, sd, t);
        if v > best {
            best = v;
        }
    };
    for k in 0..=schedule_divisions {
        eval(k as f64 / schedule_divisions as f64);
    }
    if rise - fall > 1e-15 {
        let cross = (rd.max(sd) - sd) / (rise - fall);
        eval(cross.clamp(0.0, 1.0));
    }
    best
}

/// Membership in the schedule-eliminated outage region: the direct-link
/// order strictly below both relay-path orders, and the rational constraint
/// at or below the rate.
fn in_rational_region(sr: f64, rd: f64, sd: f64, r: f64) -> bool {
    if sd >= sr.min(rd) {
        return false;
    }
    let denom = sr + rd - 2.0 * sd;
    if denom <= 1e-15 {
        return false;
    }
    (sr * rd - sd * sd) / denom <= r + 1e-12
}

/// Upper bound on the tradeoff when the relay schedule may use global CSI,
/// for symmetric relay links `a = b = p` and `c < p`.
///
/// The nested route optimizes the schedule pointwise (maximum over the
/// fraction taken before the region test), so the minimization runs over
/// exponents of the schedule-maximized order; the rational route scans the
/// eliminated form directly. Both are capped by the full-duplex curve:
/// points whose direct order reaches a relay-path order fall back to the
/// full-duplex bound.
pub fn solve_global_csi(
    x: &ChannelExponents,
    r: f64,
    grids: GlobalCsiGrids,
) -> Result<ExponentSolution> {
    if !x.symmetric_relay() {
        return Err(Error::Domain(format!(
            "global-CSI bound requires symmetric relay links (a = b), got a = {}, b = {}",
            x.sr, x.rd
        )));
    }
    if !(x.sd < x.sr) {
        return Err(Error::Domain(format!(
            "global-CSI bound requires c < p, got c = {} with p = {}",
            x.sd, x.sr
        )));
    }
    if !r.is_finite() || r < 0.0 {
        return Err(Error::Domain(format!("rate must be finite and nonnegative, got {r}")));
    }

    let bounds = [(0.0, x.sr), (0.0, x.rd), (0.0, x.sd)];
    let cost = exponent_cost(x);
    let cap = d_full_duplex(*x, MultiplexingGain::new(r)?);

    let rational = refined_minimize(&bounds, grids.divisions, grids.refine_passes, &mut |v| {
        Ok(if in_rational_region(v[0], v[1], v[2], r) {
            cost.eval(v)
        } else {
            f64::INFINITY
        })
    })?;
    let nested = refined_minimize(&bounds, grids.divisions, grids.refine_passes, &mut |v| {
        Ok(
            if best_schedule_rate_order(v[0], v[1], v[2], grids.schedule_divisions) <= r + 1e-12 {
                cost.eval(v)
            } else {
                f64::INFINITY
            },
        )
    })?;

    let v_rational = rational.as_ref().map_or(f64::INFINITY, |b| b.value).min(cap);
    let v_nested = nested.as_ref().map_or(f64::INFINITY, |b| b.value).min(cap);
    if (v_rational - v_nested).abs() > CROSS_TOL {
        return Err(Error::CrossCheck(format!(
            "global-CSI routes disagree at r = {r}: rational {v_rational} vs nested {v_nested}"
        )));
    }

    let value = v_rational.min(v_nested);
    // Witness: the first route attaining the minimum; when the cap binds,
    // the binding event is a full-duplex outage.
    let argmin = if let Some(b) = &rational {
        if b.value <= value + 1e-9 {
            b.point.clone()
        } else if let Some(n) = &nested {
            if n.value <= value + 1e-9 {
                n.point.clone()
            } else {
                full_duplex_witness(x, r)?
            }
        } else {
            full_duplex_witness(x, r)?
        }
    } else if let Some(n) = &nested {
        if n.value <= value + 1e-9 {
            n.point.clone()
        } else {
            full_duplex_witness(x, r)?
        }
    } else {
        full_duplex_witness(x, r)?
    };

    Ok(ExponentSolution {
        value,
        argmin,
        method: SolveMethod::Grid(GridSettings {
            divisions: grids.divisions,
            refine_passes: grids.refine_passes,
        }),
        epsilon: 0.0,
        closure_value: value,
        degenerate_boundary: false,
    })
}

fn full_duplex_witness(x: &ChannelExponents, r: f64) -> Result<Vec<f64>> {
    let region = full_duplex_region(x, r);
    match solve_outage_exponent(&region, &exponent_cost(x), SolveMethod::Exact)? {
        RegionMin::Optimum(s) => Ok(s.argmin),
        RegionMin::Empty => Err(Error::CrossCheck(
            "full-duplex outage region unexpectedly empty".into(),
        )),
    }
}

/// Resolution of the local-CSI three-level program.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalCsiGrids {
    /// Steps of the incoming-order grid on `[0, p]`.
    pub alpha_divisions: usize,
    /// Steps of the listen-fraction grid on `[0, 1]`.
    pub t_divisions: usize,
    /// Local refinement passes for both scans.
    pub refine_passes: usize,
}

impl Default for LocalCsiGrids {
    fn default() -> Self {
        Self { alpha_divisions: 100, t_divisions: 150, refine_passes: 2 }
    }
}

/// Remaining-order outage region for a fixed incoming order and listen
/// fraction: variables `rd in [0, p]`, `sd in [0, c]`, rate order at or
/// below `r`.
fn remaining_order_region(p: f64, c: f64, incoming: f64, t: f64, r: f64) -> OutageRegion {
    const RD: usize = 0;
    const SD: usize = 1;
    let listen = ConstraintExpr::Sum(vec![
        (t, ConstraintExpr::Max(vec![ConstraintExpr::Const(incoming), ConstraintExpr::Var(SD)])),
        (1.0 - t, ConstraintExpr::Var(SD)),
    ]);
    let transmit = ConstraintExpr::Sum(vec![
        (t, ConstraintExpr::Var(SD)),
        (1.0 - t, ConstraintExpr::Max(vec![ConstraintExpr::Var(RD), ConstraintExpr::Var(SD)])),
    ]);
    OutageRegion {
        vars: vec![VarBound::new("rd", 0.0, p), VarBound::new("sd", 0.0, c)],
        constraints: vec![Comparison::le(ConstraintExpr::Min(vec![listen, transmit]), r)],
    }
}

/// Upper bound on the tradeoff when the relay schedule may depend only on
/// its incoming channel order, for `a = b = p`, `c < p`.
///
/// Three nested levels: the incoming order is chosen adversarially (outer
/// minimum), the relay answers with the best listen fraction (middle
/// maximum), and the remaining orders are chosen adversarially again (inner
/// exact minimization). The result is capped by the full-duplex curve.
pub fn solve_local_csi(p: f64, c: f64, r: f64, grids: LocalCsiGrids) -> Result<f64> {
    if !(c < p) {
        return Err(Error::Domain(format!(
            "local-CSI bound requires c < p, got c = {c} with p = {p}"
        )));
    }
    if !r.is_finite() || r < 0.0 {
        return Err(Error::Domain(format!("rate must be finite and nonnegative, got {r}")));
    }
    let x = ChannelExponents::new(p, p, c)?;
    let cap = d_full_duplex(x, MultiplexingGain::new(r)?);

    let inner = |incoming: f64, t: f64| -> Result<f64> {
        let region = remaining_order_region(p, c, incoming, t, r);
        let objective = Affine::new(vec![-1.0, -1.0], 2.0 * p + c - incoming);
        Ok(solve_outage_exponent(&region, &objective, SolveMethod::Exact)?.diversity())
    };

    let outer = refined_minimize(
        &[(0.0, p)],
        grids.alpha_divisions,
        grids.refine_passes,
        &mut |alpha| {
            let incoming = alpha[0];
            let best = refined_maximize(
                &[(0.0, 1.0)],
                grids.t_divisions,
                grids.refine_passes,
                &mut |t| inner(incoming, t[0]),
            )?;
            Ok(best.map_or(f64::INFINITY, |b| b.value))
        },
    )?;

    Ok(outer.map_or(cap, |b| b.value.min(cap)))
}

/// Numerical outage exponent of dynamic decode-and-forward, for `c <
/// min(a, b)` and `r > 0`.
///
/// Two outage events are minimized over and combined:
///
/// * the relay cannot decode within the block (incoming order strictly
///   below `r`) and the direct link alone is short of the rate;
/// * the relay decodes after a fraction `r / incoming` of the block, but the
///   combined order accumulated at the destination stays strictly below
///   `r`.
///
/// Strict comparisons run through the epsilon-limit machinery. At `r = 0`
/// the open regions are empty (a zero-rate transmission is never in
/// outage); the solve then reports the closed-region minimum, which equals
/// the limit of the tradeoff from the right.
pub fn ddf_outage_exponent(x: &ChannelExponents, r: f64, grids: GridSettings) -> Result<f64> {
    if x.sd >= x.relay_min() {
        return Err(Error::Domain(format!(
            "DDF oracle requires c < min(a, b); got c = {} with min(a, b) = {}",
            x.sd,
            x.relay_min()
        )));
    }
    if !r.is_finite() || r < 0.0 {
        return Err(Error::Domain(format!("rate must be finite and nonnegative, got {r}")));
    }
    let cost = exponent_cost(x);

    // Relay never transmits: incoming and direct orders both below r.
    let never_decodes = OutageRegion {
        vars: vec![
            VarBound::new("sr", 0.0, x.sr),
            VarBound::new("rd", 0.0, x.rd),
            VarBound::new("sd", 0.0, x.sd),
        ],
        constraints: vec![
            Comparison::le_strict(ConstraintExpr::Var(0), r),
            Comparison::le_strict(ConstraintExpr::Var(2), r),
        ],
    };
    let mut best = solve_outage_exponent(&never_decodes, &cost, SolveMethod::Exact)?.diversity();

    // Relay decodes after t = r / incoming and forwards; scan the incoming
    // order and solve the remaining two exactly.
    if r <= x.sr {
        let decodes = refined_minimize(
            &[(r, x.sr)],
            grids.divisions,
            grids.refine_passes,
            &mut |alpha| {
                let incoming = alpha[0];
                let t = if r == 0.0 { 0.0 } else { r / incoming };
                const RD: usize = 0;
                const SD: usize = 1;
                let acquired = ConstraintExpr::Sum(vec![
                    (t, ConstraintExpr::Var(SD)),
                    (
                        1.0 - t,
                        ConstraintExpr::Max(vec![
                            ConstraintExpr::Var(RD),
                            ConstraintExpr::Var(SD),
                        ]),
                    ),
                ]);
                let region = OutageRegion {
                    vars: vec![VarBound::new("rd", 0.0, x.rd), VarBound::new("sd", 0.0, x.sd)],
                    constraints: vec![Comparison::le_strict(acquired, r)],
                };
                let objective =
                    Affine::new(vec![-1.0, -1.0], x.sr + x.rd + x.sd - incoming);
                Ok(solve_outage_exponent(&region, &objective, SolveMethod::Exact)?.diversity())
            },
        )?;
        if let Some(b) = decodes {
            best = best.min(b.value);
        }
    }
    Ok(best)
}
