//! Per-realization rate functionals and outage predicates at finite SNR.
//!
//! These mirror the high-SNR cut-set expressions with the constant gap
//! terms dropped: gaps shift rates by O(1), which is invisible in
//! diversity slopes. All rates are in nats (natural logarithms) per
//! symbol; a strategy is in outage when its rate falls strictly below the
//! target `r * ln(rho)`. Ties have probability zero under continuous
//! fading.

use crate::dmt::ChannelExponents;
use crate::error::{Error, Result};

/// Squared channel magnitudes of one quasi-static realization. Unit-mean
/// exponential under Rayleigh sampling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingDraw {
    pub g_sr: f64,
    pub g_rd: f64,
    pub g_sd: f64,
}

impl FadingDraw {
    pub fn new(g_sr: f64, g_rd: f64, g_sd: f64) -> Result<Self> {
        for (name, g) in [("g_sr", g_sr), ("g_rd", g_rd), ("g_sd", g_sd)] {
            if !g.is_finite() || g <= 0.0 {
                return Err(Error::Domain(format!(
                    "squared gain {name} must be positive and finite, got {g}"
                )));
            }
        }
        Ok(Self { g_sr, g_rd, g_sd })
    }
}

/// Squared gains of the four parallel-network links.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParallelFadingDraw {
    pub g_sr1: f64,
    pub g_sr2: f64,
    pub g_r1d: f64,
    pub g_r2d: f64,
}

impl ParallelFadingDraw {
    pub fn new(g_sr1: f64, g_sr2: f64, g_r1d: f64, g_r2d: f64) -> Result<Self> {
        for (name, g) in
            [("g_sr1", g_sr1), ("g_sr2", g_sr2), ("g_r1d", g_r1d), ("g_r2d", g_r2d)]
        {
            if !g.is_finite() || g <= 0.0 {
                return Err(Error::Domain(format!(
                    "squared gain {name} must be positive and finite, got {g}"
                )));
            }
        }
        Ok(Self { g_sr1, g_sr2, g_r1d, g_r2d })
    }
}

/// Fraction of the block the relay spends listening.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    listen: f64,
}

impl Schedule {
    pub fn new(listen: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&listen) {
            return Err(Error::Domain(format!(
                "listen fraction must lie in [0, 1], got {listen}"
            )));
        }
        Ok(Self { listen })
    }

    pub const HALF: Schedule = Schedule { listen: 0.5 };

    pub fn listen_fraction(&self) -> f64 {
        self.listen
    }
}

/// Full-duplex cut-set rate in nats:
/// `min(ln(1 + g_sr rho^a + g_sd rho^c), ln(1 + g_rd rho^b + g_sd rho^c))`.
pub fn rate_full_duplex(d: &FadingDraw, x: &ChannelExponents, rho: f64) -> f64 {
    debug_assert!(rho > 1.0);
    let direct = d.g_sd * rho.powf(x.sd);
    let listen = (1.0 + d.g_sr * rho.powf(x.sr) + direct).ln();
    let transmit = (1.0 + d.g_rd * rho.powf(x.rd) + direct).ln();
    listen.min(transmit)
}

/// Half-duplex cut-set rate for a relay listening a fraction `t`:
///
/// ```text
/// min( t ln(1 + g_sr rho^a + g_sd rho^c) + (1-t) ln(1 + g_sd rho^c),
///      t ln(1 + g_sd rho^c) + (1-t) ln(1 + g_sd rho^c + g_rd rho^b) )
/// ```
pub fn rate_half_duplex_cutset(
    d: &FadingDraw,
    x: &ChannelExponents,
    rho: f64,
    s: Schedule,
) -> f64 {
    debug_assert!(rho > 1.0);
    let t = s.listen_fraction();
    let direct = d.g_sd * rho.powf(x.sd);
    let direct_only = (1.0 + direct).ln();
    let listen = t * (1.0 + d.g_sr * rho.powf(x.sr) + direct).ln() + (1.0 - t) * direct_only;
    let transmit = t * direct_only + (1.0 - t) * (1.0 + direct + d.g_rd * rho.powf(x.rd)).ln();
    listen.min(transmit)
}

/// Maximizes the half-duplex cut-set rate over the listen fraction.
///
/// The rate is the minimum of an affine increasing and an affine
/// decreasing function of `t`, so the maximum sits at an endpoint or at
/// their crossing. Returns `(rate, t)`.
pub fn max_half_duplex_rate(d: &FadingDraw, x: &ChannelExponents, rho: f64) -> (f64, f64) {
    let direct = d.g_sd * rho.powf(x.sd);
    let direct_only = (1.0 + direct).ln();
    let full_listen = (1.0 + d.g_sr * rho.powf(x.sr) + direct).ln();
    let full_transmit = (1.0 + direct + d.g_rd * rho.powf(x.rd)).ln();
    // listen(t) = direct_only + t (full_listen - direct_only)
    // transmit(t) = full_transmit + t (direct_only - full_transmit)
    let rise = full_listen - direct_only;
    let fall = direct_only - full_transmit;
    let mut best = (f64::NEG_INFINITY, 0.0);
    let mut consider = |t: f64| {
        let v = rate_half_duplex_cutset(d, x, rho, Schedule { listen: t });
        if v > best.0 {
            best = (v, t);
        }
    };
    consider(0.0);
    consider(1.0);
    if rise - fall > 0.0 {
        consider(((full_transmit - direct_only) / (rise - fall)).clamp(0.0, 1.0));
    }
    best
}

/// Fraction of the block the relay needs to listen before it can decode:
/// `r ln(rho) / ln(1 + g_sr rho^a)`. Values above 1 mean the relay never
/// finishes decoding within the block; the value is returned uncapped.
pub fn ddf_listen_fraction(d: &FadingDraw, x: &ChannelExponents, rho: f64, r: f64) -> f64 {
    debug_assert!(rho > 1.0);
    r * rho.ln() / (1.0 + d.g_sr * rho.powf(x.sr)).ln()
}

/// Dynamic decode-and-forward outage predicate.
///
/// If the relay never decodes, outage is decided by the direct link alone.
/// Otherwise the relay forwards for the remaining `1 - t` of the block and
/// the destination accumulates the direct rate while listening plus the
/// superposed rate afterwards.
pub fn ddf_outage(d: &FadingDraw, x: &ChannelExponents, rho: f64, r: f64) -> bool {
    let target = r * rho.ln();
    let t_raw = ddf_listen_fraction(d, x, rho, r);
    let direct_only = (1.0 + d.g_sd * rho.powf(x.sd)).ln();
    if t_raw > 1.0 {
        return direct_only < target;
    }
    let t = t_raw.min(1.0);
    let superposed = (1.0 + d.g_sd * rho.powf(x.sd) + d.g_rd * rho.powf(x.rd)).ln();
    t * direct_only + (1.0 - t) * superposed < target
}

/// Dynamic QMF listen fraction `clamp(1 - order * (1 - r), 0, 1)` from the
/// relay's incoming exponent order. Stated for unit-exponent incoming
/// links (`a = 1`).
pub fn dynamic_qmf_schedule(incoming_order: f64, r: f64) -> Schedule {
    Schedule { listen: (1.0 - incoming_order * (1.0 - r)).clamp(0.0, 1.0) }
}

/// QMF outage predicate: cut-set rate under the given schedule strictly
/// below the target rate. `Schedule::HALF` gives static QMF; a schedule
/// from [`dynamic_qmf_schedule`] gives dynamic QMF.
pub fn qmf_outage(d: &FadingDraw, x: &ChannelExponents, rho: f64, r: f64, s: Schedule) -> bool {
    rate_half_duplex_cutset(d, x, rho, s) < r * rho.ln()
}

/// Minimum over the four parallel-network cuts, each link counting only
/// while its endpoint is in the matching listen/transmit state. Unit SNR
/// exponents on all links; `L(g) = ln(1 + g rho)`.
pub fn parallel_cut_rates(d: &ParallelFadingDraw, rho: f64, t1: f64, t2: f64) -> f64 {
    debug_assert!(rho > 1.0);
    let l = |g: f64| (1.0 + g * rho).ln();
    let (sr1, sr2, r1d, r2d) = (l(d.g_sr1), l(d.g_sr2), l(d.g_r1d), l(d.g_r2d));
    let source = t1 * sr1 + t2 * sr2;
    let around_r1 = t2 * sr2 + (1.0 - t1) * r1d;
    let around_r2 = t1 * sr1 + (1.0 - t2) * r2d;
    let destination = (1.0 - t1) * r1d + (1.0 - t2) * r2d;
    source.min(around_r1).min(around_r2).min(destination)
}
