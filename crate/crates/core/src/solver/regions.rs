//! Outage-region builders for the single-relay network.
//!
//! Variables are the fading exponent orders of the three links, in the
//! order `sr, rd, sd`, each boxed by its channel exponent.

use crate::dmt::ChannelExponents;

use super::expr::{Comparison, ConstraintExpr, OutageRegion, VarBound};
use super::Affine;

const SR: usize = 0;
const RD: usize = 1;
const SD: usize = 2;

fn link_vars(x: &ChannelExponents) -> Vec<VarBound> {
    vec![
        VarBound::new("sr", 0.0, x.sr),
        VarBound::new("rd", 0.0, x.rd),
        VarBound::new("sd", 0.0, x.sd),
    ]
}

/// Exponent cost `a + b + c - sr - rd - sd`: the decay exponent of the
/// probability that the fading orders reach a given point.
pub fn exponent_cost(x: &ChannelExponents) -> Affine {
    Affine::new(vec![-1.0, -1.0, -1.0], x.sr + x.rd + x.sd)
}

/// Full-duplex cut-set outage event: the smaller of the two cut orders
/// `max(sr, sd)` and `max(rd, sd)` falls at or below the rate `r`.
pub fn full_duplex_region(x: &ChannelExponents, r: f64) -> OutageRegion {
    let cut = ConstraintExpr::Min(vec![
        ConstraintExpr::Max(vec![ConstraintExpr::Var(SR), ConstraintExpr::Var(SD)]),
        ConstraintExpr::Max(vec![ConstraintExpr::Var(RD), ConstraintExpr::Var(SD)]),
    ]);
    OutageRegion { vars: link_vars(x), constraints: vec![Comparison::le(cut, r)] }
}

/// Half-duplex cut-set outage event for a relay that listens a fraction
/// `t` of the block: the rate order
/// `min(t max(sr, sd) + (1-t) sd, t sd + (1-t) max(rd, sd))`
/// falls at or below `r`.
pub fn half_duplex_region(x: &ChannelExponents, t: f64, r: f64) -> OutageRegion {
    let listen = ConstraintExpr::Sum(vec![
        (t, ConstraintExpr::Max(vec![ConstraintExpr::Var(SR), ConstraintExpr::Var(SD)])),
        (1.0 - t, ConstraintExpr::Var(SD)),
    ]);
    let transmit = ConstraintExpr::Sum(vec![
        (t, ConstraintExpr::Var(SD)),
        (1.0 - t, ConstraintExpr::Max(vec![ConstraintExpr::Var(RD), ConstraintExpr::Var(SD)])),
    ]);
    let cut = ConstraintExpr::Min(vec![listen, transmit]);
    OutageRegion { vars: link_vars(x), constraints: vec![Comparison::le(cut, r)] }
}

/// The half-duplex rate order at a concrete exponent point, used by the
/// schedule-optimizing global-CSI route.
pub fn half_duplex_rate_order(sr: f64, rd: f64, sd: f64, t: f64) -> f64 {
    let listen = t * sr.max(sd) + (1.0 - t) * sd;
    let transmit = t * sd + (1.0 - t) * rd.max(sd);
    listen.min(transmit)
}
