//! Consistency between the finite-SNR strategy predicates and their
//! exponent-level outage regions.

use proptest::prelude::*;
use relay_dmt::dmt::{exponent_order, ChannelExponents};
use relay_dmt::mc::FadingSampler;
use relay_dmt::solver::{full_duplex_region, half_duplex_region};
use relay_dmt::strategy::{
    ddf_listen_fraction, ddf_outage, dynamic_qmf_schedule, qmf_outage, rate_full_duplex,
    rate_half_duplex_cutset, FadingDraw, Schedule,
};

/// DDF and dynamic QMF pick the same effective operating point whenever
/// the relay manages to decode; their outage decisions at a deep SNR agree
/// on all but a thin boundary slice of draws.
#[test]
fn ddf_and_dynamic_qmf_agree_at_high_snr() {
    let x = ChannelExponents::new(1.0, 1.0, 0.2).unwrap();
    let rho: f64 = 1e8;
    let r = 0.4;
    let target = r * rho.ln();
    let mut sampler = FadingSampler::new(99, 0);
    let mut considered = 0u64;
    let mut disagreements = 0u64;
    let mut off_boundary_disagreements = 0u64;
    for _ in 0..100_000 {
        let d = sampler.draw();
        if ddf_listen_fraction(&d, &x, rho, r) > 1.0 {
            continue;
        }
        considered += 1;
        let order = exponent_order(d.g_sr, rho, x.sr).unwrap();
        let schedule = dynamic_qmf_schedule(order, r);
        let qmf = qmf_outage(&d, &x, rho, r, schedule);
        let ddf = ddf_outage(&d, &x, rho, r);
        if qmf != ddf {
            disagreements += 1;
            // Distance of either decision quantity from its threshold.
            let t = ddf_listen_fraction(&d, &x, rho, r);
            let direct = (1.0 + d.g_sd * rho.powf(x.sd)).ln();
            let superposed =
                (1.0 + d.g_sd * rho.powf(x.sd) + d.g_rd * rho.powf(x.rd)).ln();
            let ddf_rate = t * direct + (1.0 - t) * superposed;
            let qmf_rate = rate_half_duplex_cutset(&d, &x, rho, schedule);
            // Schedule quantization from realized orders is O(1/ln rho),
            // ~8% of the target at rho = 1e8; 10% bounds the boundary band.
            let margin =
                (qmf_rate - target).abs().min((ddf_rate - target).abs()) / target;
            if margin > 0.10 {
                off_boundary_disagreements += 1;
            }
        }
    }
    assert!(considered > 50_000, "decodable draws should dominate at r=0.4");
    let rate = disagreements as f64 / considered as f64;
    assert!(rate < 0.01, "disagreement rate {rate} over {considered} draws");
    assert_eq!(
        off_boundary_disagreements, 0,
        "disagreements must concentrate near the outage boundary"
    );
}

/// Drives each predicate with gains pinned to exact exponent orders and
/// compares against the outage-region membership, skipping points within
/// 0.02 of a region boundary (where finite-SNR rounding may flip the
/// answer).
#[test]
fn finite_snr_predicates_match_exponent_regions() {
    let x = ChannelExponents::new(1.0, 1.0, 0.2).unwrap();
    let rho: f64 = 1e8;
    let band = 0.02;
    // Offset interior grids so effective orders rarely tie across links.
    let sr_grid: Vec<f64> = (0..=9).map(|k| k as f64 * 0.111).collect();
    let rd_grid: Vec<f64> = (0..=9).map(|k| k as f64 * 0.1043).collect();
    let sd_grid: Vec<f64> = (0..=4).map(|k| k as f64 * 0.0477).collect();
    let mut checked = 0u64;
    for &ts in &sr_grid {
        for &tr in &rd_grid {
            for &td in &sd_grid {
                let draw = FadingDraw::new(
                    rho.powf(ts - x.sr),
                    rho.powf(tr - x.rd),
                    rho.powf(td - x.sd),
                )
                .unwrap();
                // Effective orders at this finite SNR.
                let sr = exponent_order(draw.g_sr, rho, x.sr).unwrap();
                let rd = exponent_order(draw.g_rd, rho, x.rd).unwrap();
                let sd = exponent_order(draw.g_sd, rho, x.sd).unwrap();
                let point = [sr, rd, sd];

                for r in [0.1, 0.3, 0.45] {
                    // Full-duplex cut set.
                    let region = full_duplex_region(&x, r);
                    let margin = region.constraints[0].expr.eval(&point) - r;
                    if margin.abs() > band {
                        let predicted = margin < 0.0;
                        let observed = rate_full_duplex(&draw, &x, rho) < r * rho.ln();
                        assert_eq!(
                            observed, predicted,
                            "fd at orders {point:?} r={r} margin={margin}"
                        );
                        checked += 1;
                    }
                    // Static QMF.
                    let region = half_duplex_region(&x, 0.5, r);
                    let margin = region.constraints[0].expr.eval(&point) - r;
                    if margin.abs() > band {
                        let predicted = margin < 0.0;
                        let observed = qmf_outage(&draw, &x, rho, r, Schedule::HALF);
                        assert_eq!(
                            observed, predicted,
                            "sqmf at orders {point:?} r={r} margin={margin}"
                        );
                        checked += 1;
                    }
                    // DDF: branch on decodability, skipping both the branch
                    // boundary and the cut boundary.
                    if (sr - r).abs() > band {
                        let predicted;
                        let margin;
                        if sr < r {
                            margin = sd - r;
                            predicted = margin < 0.0;
                        } else {
                            let t = r / sr;
                            margin = t * sd + (1.0 - t) * sd.max(rd) - r;
                            predicted = margin < 0.0;
                        }
                        if margin.abs() > band {
                            let observed = ddf_outage(&draw, &x, rho, r);
                            assert_eq!(
                                observed, predicted,
                                "ddf at orders {point:?} r={r} margin={margin}"
                            );
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    assert!(checked > 2_000, "band skipping left too few informative points: {checked}");
}

proptest! {
    // Half-duplex cut-set rate never beats the full-duplex rate, for any
    // draw and any schedule.
    #[test]
    fn half_duplex_dominated_by_full_duplex(
        g_sr in 1e-6f64..1e3,
        g_rd in 1e-6f64..1e3,
        g_sd in 1e-6f64..1e3,
        t in 0.0f64..=1.0,
        log_rho in 1.0f64..9.0,
    ) {
        let x = ChannelExponents::new(1.0, 1.3, 0.4).unwrap();
        let d = FadingDraw::new(g_sr, g_rd, g_sd).unwrap();
        let rho = 10f64.powf(log_rho);
        let hd = rate_half_duplex_cutset(&d, &x, rho, Schedule::new(t).unwrap());
        let fd = rate_full_duplex(&d, &x, rho);
        prop_assert!(hd <= fd + 1e-9);
        prop_assert!(hd >= 0.0);
    }

    // The realized exponent order is trapped between zero and slightly
    // above the link exponent, and grows with the gain.
    #[test]
    fn exponent_order_bounds(g in 1e-9f64..1e6, e in 0.0f64..2.0) {
        let rho = 1e6f64;
        let order = exponent_order(g, rho, e).unwrap();
        prop_assert!(order >= 0.0);
        prop_assert!(order <= e + (2.0 * g.max(1.0)).ln() / rho.ln() + 1e-12);
        let bigger = exponent_order(2.0 * g, rho, e).unwrap();
        prop_assert!(bigger >= order);
    }
}
