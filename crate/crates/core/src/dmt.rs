//! Domain types and closed-form diversity-multiplexing tradeoff curves.
//!
//! Conventions used throughout: the three links of the single-relay network
//! carry average SNRs `rho^sr` (source-relay), `rho^rd` (relay-destination)
//! and `rho^sd` (source-destination). Rates are measured as multiples of
//! `log rho` (the multiplexing gain `r`), and diversity `d` is the slope of
//! `-log P_outage` against `log rho`. All curves here are evaluated by
//! direct piecewise arithmetic in `f64` and clamped at zero: diversity is an
//! error-probability exponent and cannot be negative.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// SNR scaling exponents `(a, b, c)` of the S-R, R-D and S-D links.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelExponents {
    /// Source-relay exponent `a`.
    pub sr: f64,
    /// Relay-destination exponent `b`.
    pub rd: f64,
    /// Source-destination exponent `c`.
    pub sd: f64,
}

impl ChannelExponents {
    pub fn new(sr: f64, rd: f64, sd: f64) -> Result<Self> {
        for (name, v) in [("sr", sr), ("rd", rd), ("sd", sd)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Domain(format!(
                    "channel exponent {name} must be finite and nonnegative, got {v}"
                )));
            }
        }
        Ok(Self { sr, rd, sd })
    }

    /// Weaker of the two relay-path exponents, `min(a, b)`.
    pub fn relay_min(&self) -> f64 {
        self.sr.min(self.rd)
    }

    /// Stronger of the two relay-path exponents, `max(a, b)`.
    pub fn relay_max(&self) -> f64 {
        self.sr.max(self.rd)
    }

    /// True when the two relay links scale identically (`a = b`), the case
    /// the CSI upper bounds are established for.
    pub fn symmetric_relay(&self) -> bool {
        self.sr == self.rd
    }

    /// Largest multiplexing gain at which any scheme has positive diversity.
    pub fn max_multiplexing_gain(&self) -> f64 {
        self.relay_min().max(self.sd)
    }
}

/// Rate exponent `r`: the target rate is `r log rho`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct MultiplexingGain(f64);

impl MultiplexingGain {
    pub fn new(r: f64) -> Result<Self> {
        if !r.is_finite() || r < 0.0 {
            return Err(Error::Domain(format!(
                "multiplexing gain must be finite and nonnegative, got {r}"
            )));
        }
        Ok(Self(r))
    }

    pub fn get(&self) -> f64 {
        self.0
    }
}

/// Fading exponent orders `(alpha, beta, gamma)` of the three link gains,
/// boxed by the channel exponents: `alpha in [0, a]` and so on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentVector {
    pub sr: f64,
    pub rd: f64,
    pub sd: f64,
}

impl ExponentVector {
    pub fn new(sr: f64, rd: f64, sd: f64, bounds: &ChannelExponents) -> Result<Self> {
        for (name, v, hi) in [("sr", sr, bounds.sr), ("rd", rd, bounds.rd), ("sd", sd, bounds.sd)] {
            if !v.is_finite() || v < 0.0 || v > hi {
                return Err(Error::Domain(format!(
                    "exponent order {name} must lie in [0, {hi}], got {v}"
                )));
            }
        }
        Ok(Self { sr, rd, sd })
    }
}

/// Fading exponent orders for the two-relay parallel network. All four
/// links scale with unit SNR exponent, so every order lives in `[0, 1]`.
/// The second-stage order of the second relay (`r2d`) completes the square
/// of first-stage orders `sr1`, `sr2` and second-stage order `r1d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParallelExponentVector {
    pub sr1: f64,
    pub sr2: f64,
    pub r1d: f64,
    pub r2d: f64,
}

impl ParallelExponentVector {
    pub fn new(sr1: f64, sr2: f64, r1d: f64, r2d: f64) -> Result<Self> {
        for (name, v) in [("sr1", sr1), ("sr2", sr2), ("r1d", r1d), ("r2d", r2d)] {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(Error::Domain(format!(
                    "parallel exponent order {name} must lie in [0, 1], got {v}"
                )));
            }
        }
        Ok(Self { sr1, sr2, r1d, r2d })
    }
}

/// Relaying strategies and bound curves this crate can evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    /// Full-duplex cut-set tradeoff (upper bound for every half-duplex scheme).
    FullDuplex,
    /// Quantize-map-and-forward with a fixed half/half listen-transmit split.
    StaticQmf,
    /// Dynamic decode-and-forward: the relay listens until it can decode.
    Ddf,
    /// QMF with a listening time chosen from the relay's receive CSI.
    DynamicQmf,
    /// Optimal tradeoff under receive-side CSI only (bound curve).
    CsirBound,
    /// Tradeoff bound when the relay schedule may use global CSI.
    GlobalCsiBound,
    /// Two-relay parallel network, optimal (dynamic QMF) tradeoff.
    Parallel,
    /// Two-relay parallel network driven by the static half/half schedule.
    ParallelStaticQmf,
    /// Two-relay parallel network driven by the dynamic QMF schedule.
    ParallelDynamicQmf,
    /// Pointwise best of the achievable single-relay schemes.
    Envelope,
}

impl Scheme {
    pub fn label(&self) -> &'static str {
        match self {
            Scheme::FullDuplex => "fd",
            Scheme::StaticQmf => "sqmf",
            Scheme::Ddf => "ddf",
            Scheme::DynamicQmf => "dqmf",
            Scheme::CsirBound => "lcsi",
            Scheme::GlobalCsiBound => "gcsi",
            Scheme::Parallel => "parallel",
            Scheme::ParallelStaticQmf => "parallel-sqmf",
            Scheme::ParallelDynamicQmf => "parallel-dqmf",
            Scheme::Envelope => "envelope",
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "fd" => Scheme::FullDuplex,
            "sqmf" => Scheme::StaticQmf,
            "ddf" => Scheme::Ddf,
            "dqmf" => Scheme::DynamicQmf,
            "lcsi" => Scheme::CsirBound,
            "gcsi" => Scheme::GlobalCsiBound,
            "parallel" => Scheme::Parallel,
            "parallel-sqmf" => Scheme::ParallelStaticQmf,
            "parallel-dqmf" => Scheme::ParallelDynamicQmf,
            "envelope" => Scheme::Envelope,
            other => return Err(Error::Domain(format!("unknown scheme '{other}'"))),
        })
    }
}

/// A sampled tradeoff curve: ordered `(r, d)` pairs with scheme metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DmtCurve {
    pub scheme: Scheme,
    pub exponents: ChannelExponents,
    pub points: Vec<(f64, f64)>,
}

impl DmtCurve {
    /// Validates ordering: `r` strictly increasing, `d` nonincreasing and
    /// nonnegative.
    pub fn new(scheme: Scheme, exponents: ChannelExponents, points: Vec<(f64, f64)>) -> Result<Self> {
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::Domain(format!(
                    "curve r values must be strictly increasing ({} then {})",
                    w[0].0, w[1].0
                )));
            }
            if w[1].1 > w[0].1 + 1e-12 {
                return Err(Error::Domain(format!(
                    "curve d values must be nonincreasing (d({})={} then d({})={})",
                    w[0].0, w[0].1, w[1].0, w[1].1
                )));
            }
        }
        if points.iter().any(|&(_, d)| d < 0.0) {
            return Err(Error::Domain("curve d values must be nonnegative".into()));
        }
        Ok(Self { scheme, exponents, points })
    }

    /// Samples `d(r)` on a uniform grid.
    pub fn sample(
        scheme: Scheme,
        exponents: ChannelExponents,
        r_grid: impl IntoIterator<Item = f64>,
        d: impl Fn(f64) -> Result<f64>,
    ) -> Result<Self> {
        let mut points = Vec::new();
        for r in r_grid {
            points.push((r, d(r)?));
        }
        Self::new(scheme, exponents, points)
    }
}

fn pos(x: f64) -> f64 {
    x.max(0.0)
}

/// Full-duplex cut-set tradeoff: `(min(a,b) - r)^+ + (c - r)^+`.
///
/// Serves as the outer bound every half-duplex strategy is measured against.
pub fn d_full_duplex(x: ChannelExponents, r: MultiplexingGain) -> f64 {
    let r = r.get();
    pos(x.relay_min() - r) + pos(x.sd - r)
}

/// Tradeoff of static QMF (relay listens half the time, quantizes at noise
/// level, forwards).
///
/// Matches the full-duplex curve when the direct link dominates a relay
/// link (`c > min(a,b)`); otherwise the half-duplex split costs a factor of
/// two in rate: `(min(a,b) + c - 2r)^+`.
pub fn d_static_qmf(x: ChannelExponents, r: MultiplexingGain) -> f64 {
    if x.sd > x.relay_min() {
        d_full_duplex(x, r)
    } else {
        pos(x.relay_min() + x.sd - 2.0 * r.get())
    }
}

/// Tradeoff of dynamic decode-and-forward when the direct link is the weak
/// one (`c < min(a,b)`).
///
/// Piecewise: at low rates the curve follows `min(a,b)+c-2r`; in the middle
/// band the relay's forced listening time erodes diversity as
/// `min(a,b) - (max(a,b)-c) r / (max(a,b)-r)`; at high rates the relay
/// seldom decodes in time and the curve drops as `ab/r - a - b + c`. At
/// exact breakpoints the left piece is evaluated; continuity makes the
/// choice unobservable. Values are clamped at zero.
pub fn d_ddf(x: ChannelExponents, r: MultiplexingGain) -> Result<f64> {
    if x.sd >= x.relay_min() {
        return Err(Error::Domain(format!(
            "d_ddf requires c < min(a, b); got c = {} with min(a, b) = {}",
            x.sd,
            x.relay_min()
        )));
    }
    let r = r.get();
    let (mn, mx, c) = (x.relay_min(), x.relay_max(), x.sd);
    let v = if r <= c.min(mx / 2.0) {
        mn + c - 2.0 * r
    } else if r < mx / 2.0 {
        mn - (mx - c) * r / (mx - r)
    } else {
        x.sr * x.rd / r - x.sr - x.rd + c
    };
    Ok(pos(v))
}

/// Upper bound on the tradeoff when the relay schedule may depend only on
/// its receive CSI: `max(c, p - (p-c) r / (p-r))`, for symmetric relay
/// links `a = b = p` and `c < r < p/2`.
pub fn d_local_csi_bound(p: f64, c: f64, r: MultiplexingGain) -> Result<f64> {
    let r = r.get();
    if !(c < p) {
        return Err(Error::Domain(format!(
            "d_local_csi_bound requires c < p; got c = {c}, p = {p}"
        )));
    }
    if !(r > c && r < p / 2.0) {
        return Err(Error::Domain(format!(
            "d_local_csi_bound is established for c < r < p/2; got r = {r} with c = {c}, p = {p}"
        )));
    }
    Ok(c.max(p - (p - c) * r / (p - r)))
}

/// Optimal tradeoff under receive-side CSI for `a = b = p`, `c < p`: the
/// full-duplex curve up to `r = c`, the [`d_local_csi_bound`] expression on
/// `(c, p/2)` (where dynamic decode-and-forward attains it), and the static
/// QMF line `(p + c - 2r)^+` beyond `p/2`.
pub fn d_csir_optimal(p: f64, c: f64, r: MultiplexingGain) -> Result<f64> {
    if !(c < p) {
        return Err(Error::Domain(format!(
            "d_csir_optimal requires c < p; got c = {c}, p = {p}"
        )));
    }
    let rv = r.get();
    if rv <= c {
        Ok(d_full_duplex(ChannelExponents::new(p, p, c)?, r))
    } else if rv < p / 2.0 {
        d_local_csi_bound(p, c, r)
    } else {
        Ok(pos(p + c - 2.0 * rv))
    }
}

/// Optimal tradeoff of the two-relay parallel network: `2 - r/(1-r)` up to
/// `r = 1/2` (attained by dynamic QMF), then `2(1-r)` (attained by the
/// static schedule). Defined on `0 <= r <= 1`.
pub fn d_parallel(r: MultiplexingGain) -> Result<f64> {
    let r = r.get();
    if r > 1.0 {
        return Err(Error::Domain(format!(
            "parallel-network tradeoff is defined on [0, 1], got r = {r}"
        )));
    }
    if r <= 0.5 {
        Ok(pos(2.0 - r / (1.0 - r)))
    } else {
        Ok(pos(2.0 * (1.0 - r)))
    }
}

/// Regime classification: which strategy is known to be optimal at `(x, r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// The full-duplex tradeoff is achievable; static QMF attains it.
    FdAchievable,
    /// Below the full-duplex curve, but DDF attains the CSIR optimum.
    DdfOptimal,
    /// Below the full-duplex curve; static QMF attains the optimum (and
    /// matches the global-CSI bound).
    StaticQmfOptimal,
    /// Not resolved for asymmetric relay links at this rate.
    Unresolved,
}

impl Regime {
    /// Strategy attaining the optimal tradeoff in this regime, when known.
    pub fn optimal_scheme(&self) -> Option<Scheme> {
        match self {
            Regime::FdAchievable | Regime::StaticQmfOptimal => Some(Scheme::StaticQmf),
            Regime::DdfOptimal => Some(Scheme::Ddf),
            Regime::Unresolved => None,
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Regime::FdAchievable => "fd-achievable",
            Regime::DdfOptimal => "ddf-optimal",
            Regime::StaticQmfOptimal => "static-qmf-optimal",
            Regime::Unresolved => "unresolved",
        };
        f.write_str(s)
    }
}

/// Classifies the operating regime of a channel configuration at rate `r`.
///
/// Static QMF reaches the full-duplex curve whenever the direct link is at
/// least as strong as a relay link, or the rate does not exceed the direct
/// exponent. Past that, the split between DDF (`c < r < p/2`) and static
/// QMF (`r >= p/2`) is established for symmetric relay links only; other
/// configurations report [`Regime::Unresolved`].
pub fn classify_regime(x: ChannelExponents, r: MultiplexingGain) -> Regime {
    let r = r.get();
    if x.sd >= x.relay_min() || r <= x.sd {
        return Regime::FdAchievable;
    }
    if !x.symmetric_relay() {
        return Regime::Unresolved;
    }
    let p = x.sr;
    if r >= p / 2.0 {
        Regime::StaticQmfOptimal
    } else {
        Regime::DdfOptimal
    }
}

/// Finite-SNR surrogate of a link's fading exponent order:
/// `log(1 + g rho^e) / log rho` for squared gain `g` on a link with SNR
/// exponent `e`. Converges to the exponential order as `rho` grows.
pub fn exponent_order(g: f64, rho: f64, e: f64) -> Result<f64> {
    if !(rho > 1.0) {
        return Err(Error::Domain(format!(
            "exponent order needs rho > 1, got rho = {rho}"
        )));
    }
    if !(g > 0.0) || !g.is_finite() {
        return Err(Error::Domain(format!(
            "exponent order needs a positive finite gain, got g = {g}"
        )));
    }
    if e < 0.0 {
        return Err(Error::Domain(format!(
            "exponent order needs a nonnegative SNR exponent, got e = {e}"
        )));
    }
    Ok((1.0 + g * rho.powf(e)).ln() / rho.ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(a: f64, b: f64, c: f64) -> ChannelExponents {
        ChannelExponents::new(a, b, c).unwrap()
    }

    fn r(v: f64) -> MultiplexingGain {
        MultiplexingGain::new(v).unwrap()
    }

    #[test]
    fn full_duplex_worked_values() {
        assert_eq!(d_full_duplex(x(1.0, 1.0, 1.0), r(0.5)), 1.0);
        assert_eq!(d_full_duplex(x(1.0, 1.0, 0.2), r(0.0)), 1.2);
        assert!((d_full_duplex(x(2.0, 1.0, 0.5), r(0.7)) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn static_qmf_worked_values() {
        assert_eq!(d_static_qmf(x(1.0, 2.0, 1.5), r(0.5)), 1.5);
        assert!((d_static_qmf(x(1.0, 1.0, 0.2), r(0.3)) - 0.6).abs() < 1e-15);
        assert_eq!(d_static_qmf(x(1.0, 1.0, 0.2), r(0.6)), 0.0);
    }

    #[test]
    fn ddf_worked_values() {
        let cfg = x(1.0, 1.0, 0.2);
        assert!((d_ddf(cfg, r(0.1)).unwrap() - 1.0).abs() < 1e-15);
        assert!((d_ddf(cfg, r(0.4)).unwrap() - 7.0 / 15.0).abs() < 1e-15);
        assert!((d_ddf(cfg, r(0.5)).unwrap() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn ddf_rejects_strong_direct_link() {
        assert!(matches!(d_ddf(x(1.0, 1.0, 1.0), r(0.2)), Err(Error::Domain(_))));
        assert!(matches!(d_ddf(x(1.0, 2.0, 1.0), r(0.2)), Err(Error::Domain(_))));
    }

    #[test]
    fn ddf_clamps_past_max_gain() {
        assert_eq!(d_ddf(x(1.0, 1.0, 0.2), r(0.9)).unwrap(), 0.0);
    }

    #[test]
    fn local_csi_bound_worked_values() {
        assert!((d_local_csi_bound(1.0, 0.2, r(0.4)).unwrap() - 7.0 / 15.0).abs() < 1e-15);
        assert!((d_local_csi_bound(1.0, 0.2, r(0.25)).unwrap() - 11.0 / 15.0).abs() < 1e-15);
        // Continuity with the DDF middle piece as r approaches c from above.
        assert!((d_local_csi_bound(1.0, 0.2, r(0.2 + 1e-9)).unwrap() - 0.8).abs() < 1e-6);
        assert!(d_local_csi_bound(1.0, 0.2, r(0.1)).is_err());
        assert!(d_local_csi_bound(1.0, 0.2, r(0.5)).is_err());
        assert!(d_local_csi_bound(1.0, 1.2, r(0.4)).is_err());
    }

    #[test]
    fn parallel_worked_values() {
        assert_eq!(d_parallel(r(0.0)).unwrap(), 2.0);
        assert!((d_parallel(r(1.0 / 3.0)).unwrap() - 1.5).abs() < 1e-15);
        assert!((d_parallel(r(0.75)).unwrap() - 0.5).abs() < 1e-15);
        assert!(d_parallel(r(1.5)).is_err());
        assert!(MultiplexingGain::new(-0.1).is_err());
    }

    #[test]
    fn parallel_continuous_at_half() {
        let left = d_parallel(r(0.5)).unwrap();
        let right = 2.0 * (1.0 - 0.5);
        assert!((left - right).abs() < 1e-12);
        assert_eq!(left, 1.0);
    }

    #[test]
    fn ddf_continuous_at_breakpoints() {
        // Breakpoint between first and second piece, and at max(a,b)/2 for
        // symmetric and asymmetric configurations.
        for (a, b, c) in [(1.0, 1.0, 0.2), (1.0, 3.0, 0.9), (2.0, 1.0, 0.5), (1.5, 1.4, 1.0)] {
            let cfg = x(a, b, c);
            let b1 = c.min(a.max(b) / 2.0);
            let b2 = a.max(b) / 2.0;
            for bp in [b1, b2] {
                let eps = 1e-9;
                let left = d_ddf(cfg, r((bp - eps).max(0.0))).unwrap();
                let right = d_ddf(cfg, r(bp + eps)).unwrap();
                assert!(
                    (left - right).abs() < 1e-7,
                    "({a},{b},{c}) discontinuous at r={bp}: {left} vs {right}"
                );
                // Exact breakpoint evaluates the left piece; value must agree
                // with both one-sided limits to first order.
                let at = d_ddf(cfg, r(bp)).unwrap();
                assert!((at - left).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn monotone_nonincreasing_in_rate() {
        let cfgs = [x(1.0, 1.0, 1.0), x(1.0, 1.0, 0.2), x(2.0, 1.0, 0.5), x(1.0, 2.0, 1.5)];
        for cfg in cfgs {
            let mut prev = f64::INFINITY;
            for k in 0..=400 {
                let rv = k as f64 * 0.005;
                let d = d_static_qmf(cfg, r(rv));
                assert!(d <= prev + 1e-12);
                assert!(d_full_duplex(cfg, r(rv)) >= d - 1e-12, "dominance violated");
                prev = d;
            }
        }
        let mut prev = f64::INFINITY;
        for k in 0..=200 {
            let rv = k as f64 * 0.005;
            let d = d_parallel(r(rv)).unwrap();
            assert!(d <= prev + 1e-12);
            prev = d;
        }
        let mut prev = f64::INFINITY;
        for k in 0..=400 {
            let rv = k as f64 * 0.005;
            let d = d_ddf(x(1.0, 1.0, 0.2), r(rv)).unwrap();
            assert!(d <= prev + 1e-12);
            prev = d;
        }
    }

    #[test]
    fn dominance_equality_regimes() {
        // Equality with the full-duplex curve when c >= min(a,b) or r <= c.
        for k in 0..=60 {
            let rv = k as f64 * 0.02;
            let strong = x(1.0, 2.0, 1.5);
            assert_eq!(d_static_qmf(strong, r(rv)), d_full_duplex(strong, r(rv)));
        }
        let weak = x(1.0, 1.0, 0.2);
        for rv in [0.0, 0.05, 0.1, 0.15, 0.2] {
            assert!((d_static_qmf(weak, r(rv)) - d_full_duplex(weak, r(rv))).abs() < 1e-12);
        }
    }

    #[test]
    fn identical_links_specialization() {
        // With all exponents equal the static-QMF curve collapses onto the
        // classical single-relay line 2(1-r).
        let unit = x(1.0, 1.0, 1.0);
        for k in 0..=100 {
            let rv = k as f64 * 0.01;
            let expect = 2.0 * (1.0 - rv);
            assert!((d_static_qmf(unit, r(rv)) - expect).abs() < 1e-12);
            assert!((d_full_duplex(unit, r(rv)) - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn vanishing_direct_link_specialization() {
        // As c -> 0 the DDF curve approaches the line-network tradeoff
        // 1 - r/(1-r) in the middle band.
        let cfg = x(1.0, 1.0, 1e-9);
        for k in 1..50 {
            let rv = k as f64 * 0.01;
            if rv <= 1e-9 || rv >= 0.5 {
                continue;
            }
            let expect = 1.0 - rv / (1.0 - rv);
            assert!((d_ddf(cfg, r(rv)).unwrap() - expect).abs() < 1e-8);
        }
    }

    #[test]
    fn ddf_qmf_crossing() {
        let cfg = x(1.0, 1.0, 0.2);
        let d1 = d_ddf(cfg, r(0.5)).unwrap();
        let d2 = d_static_qmf(cfg, r(0.5));
        assert!((d1 - 0.2).abs() < 1e-12 && (d2 - 0.2).abs() < 1e-12);
        for k in 1..15 {
            let rv = 0.2 + k as f64 * 0.02;
            assert!(d_ddf(cfg, r(rv)).unwrap() > d_static_qmf(cfg, r(rv)));
        }
        for rv in [0.52, 0.55, 0.58] {
            assert!(d_static_qmf(cfg, r(rv)) >= d_ddf(cfg, r(rv)).unwrap());
        }
    }

    #[test]
    fn regime_classification() {
        assert_eq!(classify_regime(x(1.0, 1.0, 1.0), r(0.5)), Regime::FdAchievable);
        assert_eq!(classify_regime(x(1.0, 1.0, 0.2), r(0.4)), Regime::DdfOptimal);
        assert_eq!(classify_regime(x(1.0, 1.0, 0.2), r(0.55)), Regime::StaticQmfOptimal);
        assert_eq!(classify_regime(x(1.0, 1.0, 0.2), r(0.1)), Regime::FdAchievable);
        assert_eq!(classify_regime(x(1.0, 2.0, 0.5), r(0.7)), Regime::Unresolved);
        assert_eq!(
            classify_regime(x(1.0, 1.0, 0.2), r(0.4)).optimal_scheme(),
            Some(Scheme::Ddf)
        );
    }

    #[test]
    fn exponent_order_values() {
        let v = exponent_order(1.0, 1e4, 1.0).unwrap();
        assert!((v - 1.0000108568192156).abs() < 1e-12);
        // g = rho^(-1/2): the realized order is roughly half the exponent.
        let v = exponent_order(0.01, 1e4, 1.0).unwrap();
        assert!((v - (101f64.ln() / 1e4f64.ln())).abs() < 1e-15);
        assert!((v - 0.5).abs() < 2e-3);
        let v = exponent_order(1.0, 1e4, 0.0).unwrap();
        assert!((v - 0.07525749891599529).abs() < 1e-12);
        assert!(exponent_order(1.0, 1.0, 1.0).is_err());
        assert!(exponent_order(0.0, 10.0, 1.0).is_err());
    }

    #[test]
    fn exponent_order_converges() {
        let v = exponent_order(1.0, 1e6, 1.0).unwrap();
        assert!((v - 1.0).abs() < 0.01);
    }

    #[test]
    fn curve_validation() {
        let cfg = x(1.0, 1.0, 0.2);
        let ok = DmtCurve::sample(Scheme::StaticQmf, cfg, (0..=12).map(|k| k as f64 * 0.05), |rv| {
            Ok(d_static_qmf(cfg, r(rv)))
        });
        assert!(ok.is_ok());
        assert!(DmtCurve::new(Scheme::FullDuplex, cfg, vec![(0.0, 1.0), (0.0, 0.9)]).is_err());
        assert!(DmtCurve::new(Scheme::FullDuplex, cfg, vec![(0.0, 1.0), (0.1, 1.5)]).is_err());
        assert!(DmtCurve::new(Scheme::FullDuplex, cfg, vec![(0.0, -0.1)]).is_err());
    }

    #[test]
    fn exponent_vector_bounds() {
        let cfg = x(1.0, 1.0, 0.2);
        assert!(ExponentVector::new(0.5, 1.0, 0.2, &cfg).is_ok());
        assert!(ExponentVector::new(1.1, 1.0, 0.2, &cfg).is_err());
        assert!(ParallelExponentVector::new(0.0, 1.0, 1.0, 1.0).is_ok());
        assert!(ParallelExponentVector::new(0.0, 1.0, 1.0, 1.5).is_err());
    }
}
