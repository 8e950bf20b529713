//! Seeded Rayleigh Monte Carlo: outage estimation over an SNR ladder and
//! diversity-slope fitting.
//!
//! Sampling is split into fixed-size chunks, each drawing from its own
//! ChaCha stream derived from the sweep seed, the ladder index and the
//! chunk index. Merging only sums counts, so results are bit-identical for
//! any worker count. Squared gains are unit-mean exponentials obtained by
//! inverse CDF from one 53-bit uniform each, keeping the per-draw RNG
//! consumption fixed.
//!
//! Diversity here is the slope of `-ln(p_hat)` against `ln(rho)`; points
//! whose outage count falls below a floor are dropped from the fit, since
//! the log of a noisy near-zero estimate wrecks least squares.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dmt::{
    d_ddf, d_full_duplex, d_parallel, d_static_qmf, exponent_order, ChannelExponents,
    MultiplexingGain, Scheme,
};
use crate::error::{Error, Result};
use crate::strategy::{
    ddf_outage, dynamic_qmf_schedule, parallel_cut_rates, qmf_outage, rate_full_duplex,
    FadingDraw, ParallelFadingDraw, Schedule,
};

/// Draws per RNG stream; partitioning is only visible in units of chunks.
const CHUNK: u64 = 1 << 14;

/// Outage counts below this are excluded from slope fits by default.
pub const DEFAULT_COUNT_FLOOR: u64 = 20;

/// 97.5% normal quantile, for 95% Wilson intervals.
const Z95: f64 = 1.959963984540054;

/// Default SNR ladder: deep enough to expose slopes up to d ~ 2 with
/// 10^6..10^7 samples per point, shallow enough to run in minutes.
pub fn default_snr_ladder() -> Vec<f64> {
    vec![1e2, 10f64.powf(2.5), 1e3, 10f64.powf(3.5), 1e4]
}

/// One Monte Carlo sweep: scheme, channel, rate, ladder, sample budget and
/// seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub scheme: Scheme,
    pub exponents: ChannelExponents,
    pub r: f64,
    pub snrs: Vec<f64>,
    pub samples_per_point: u64,
    pub seed: u64,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.snrs.len() < 2 {
            return Err(Error::Domain("at least 2 SNR points are required".into()));
        }
        if self.snrs.windows(2).any(|w| w[1] <= w[0]) || self.snrs.iter().any(|&s| s <= 1.0) {
            return Err(Error::Domain(
                "SNR ladder must be strictly increasing with every point > 1".into(),
            ));
        }
        if self.samples_per_point == 0 {
            return Err(Error::Domain("samples per point must be positive".into()));
        }
        if !self.r.is_finite() || self.r < 0.0 {
            return Err(Error::Domain(format!("rate must be nonnegative, got {}", self.r)));
        }
        match self.scheme {
            Scheme::FullDuplex | Scheme::StaticQmf => Ok(()),
            Scheme::Ddf => {
                if self.exponents.sd >= self.exponents.relay_min() {
                    Err(Error::Domain(
                        "ddf simulation requires c < min(a, b)".into(),
                    ))
                } else {
                    Ok(())
                }
            }
            Scheme::DynamicQmf => {
                if self.exponents.sr != 1.0 {
                    Err(Error::Unsupported(
                        "dqmf schedule is defined for a = 1 configurations only".into(),
                    ))
                } else {
                    Ok(())
                }
            }
            Scheme::ParallelStaticQmf | Scheme::ParallelDynamicQmf => {
                if self.exponents.sr != 1.0 || self.exponents.rd != 1.0 {
                    Err(Error::Unsupported(
                        "parallel schemes model unit SNR exponents on all links (a = b = 1)"
                            .into(),
                    ))
                } else {
                    Ok(())
                }
            }
            other => Err(Error::Unsupported(format!(
                "scheme '{other}' has no Monte Carlo outage predicate"
            ))),
        }
    }

    /// Closed-form asymptote the fitted slope is compared against, where
    /// one exists for the scheme.
    pub fn closed_form_diversity(&self) -> Result<f64> {
        let r = MultiplexingGain::new(self.r)?;
        match self.scheme {
            Scheme::FullDuplex => Ok(d_full_duplex(self.exponents, r)),
            Scheme::StaticQmf => Ok(d_static_qmf(self.exponents, r)),
            Scheme::Ddf | Scheme::DynamicQmf => d_ddf(self.exponents, r),
            Scheme::ParallelDynamicQmf => d_parallel(r),
            Scheme::ParallelStaticQmf => Ok((2.0 - 2.0 * self.r).max(0.0)),
            other => Err(Error::Unsupported(format!(
                "no closed-form diversity for scheme '{other}'"
            ))),
        }
    }
}

/// Estimates for one ladder point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub rho: f64,
    pub rate_nats: f64,
    pub samples: u64,
    pub outage_count: u64,
    pub p_hat: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

/// A completed sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub config: SweepConfig,
    pub points: Vec<SweepPoint>,
}

/// Least-squares diversity slope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiversityFit {
    pub d_hat: f64,
    pub intercept: f64,
    /// Root-mean-square residual of `-ln(p_hat)` around the fitted line.
    pub residual: f64,
    pub points_used: usize,
    /// Ladder points dropped for falling below the count floor.
    pub dropped_rhos: Vec<f64>,
}

/// Seeded sampler for one `(seed, stream)` pair. Streams are cheap to
/// construct; every chunk of a sweep owns one.
pub struct FadingSampler {
    rng: ChaCha8Rng,
}

impl FadingSampler {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng }
    }

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    fn open_unit(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / 9007199254740992.0)
    }

    /// Unit-mean exponential variate (strictly positive).
    pub fn exponential(&mut self) -> f64 {
        -self.open_unit().ln()
    }

    pub fn draw(&mut self) -> FadingDraw {
        FadingDraw {
            g_sr: self.exponential(),
            g_rd: self.exponential(),
            g_sd: self.exponential(),
        }
    }

    pub fn parallel_draw(&mut self) -> ParallelFadingDraw {
        ParallelFadingDraw {
            g_sr1: self.exponential(),
            g_sr2: self.exponential(),
            g_r1d: self.exponential(),
            g_r2d: self.exponential(),
        }
    }
}

/// Samples `count` single-relay draws from one stream. Identical
/// `(seed, stream, count)` always yields the identical sequence.
pub fn sample_fading(seed: u64, stream: u64, count: usize) -> Vec<FadingDraw> {
    let mut sampler = FadingSampler::new(seed, stream);
    (0..count).map(|_| sampler.draw()).collect()
}

/// Wilson score interval for a binomial proportion; well behaved at small
/// counts.
pub fn wilson_interval(count: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let p = count as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

fn outage_single(scheme: Scheme, d: &FadingDraw, x: &ChannelExponents, rho: f64, r: f64) -> bool {
    match scheme {
        Scheme::FullDuplex => rate_full_duplex(d, x, rho) < r * rho.ln(),
        Scheme::StaticQmf => qmf_outage(d, x, rho, r, Schedule::HALF),
        Scheme::Ddf => ddf_outage(d, x, rho, r),
        Scheme::DynamicQmf => {
            let order = exponent_order(d.g_sr, rho, x.sr).expect("rho > 1, g > 0");
            qmf_outage(d, x, rho, r, dynamic_qmf_schedule(order, r))
        }
        _ => unreachable!("validated single-relay scheme"),
    }
}

fn outage_parallel(scheme: Scheme, d: &ParallelFadingDraw, rho: f64, r: f64) -> bool {
    let (t1, t2) = match scheme {
        Scheme::ParallelStaticQmf => (0.5, 0.5),
        Scheme::ParallelDynamicQmf => (
            dynamic_qmf_schedule(exponent_order(d.g_sr1, rho, 1.0).expect("rho > 1"), r)
                .listen_fraction(),
            dynamic_qmf_schedule(exponent_order(d.g_sr2, rho, 1.0).expect("rho > 1"), r)
                .listen_fraction(),
        ),
        _ => unreachable!("validated parallel scheme"),
    };
    parallel_cut_rates(d, rho, t1, t2) < r * rho.ln()
}

/// Outage count for one chunk of one ladder point.
fn chunk_count(cfg: &SweepConfig, rho_idx: usize, chunk_idx: u64, len: u64) -> u64 {
    let rho = cfg.snrs[rho_idx];
    let stream = ((rho_idx as u64) << 32) | chunk_idx;
    let mut sampler = FadingSampler::new(cfg.seed, stream);
    let parallel = matches!(
        cfg.scheme,
        Scheme::ParallelStaticQmf | Scheme::ParallelDynamicQmf
    );
    let mut count = 0u64;
    for _ in 0..len {
        let out = if parallel {
            let d = sampler.parallel_draw();
            outage_parallel(cfg.scheme, &d, rho, cfg.r)
        } else {
            let d = sampler.draw();
            outage_single(cfg.scheme, &d, &cfg.exponents, rho, cfg.r)
        };
        if out {
            count += 1;
        }
    }
    count
}

fn point_count(cfg: &SweepConfig, rho_idx: usize) -> u64 {
    let n = cfg.samples_per_point;
    let chunks = n.div_ceil(CHUNK);
    let chunk_len = |ci: u64| if ci + 1 == chunks { n - ci * CHUNK } else { CHUNK };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..chunks)
            .into_par_iter()
            .map(|ci| chunk_count(cfg, rho_idx, ci, chunk_len(ci)))
            .sum()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..chunks).map(|ci| chunk_count(cfg, rho_idx, ci, chunk_len(ci))).sum()
    }
}

/// Runs the sweep: for every ladder point, the fraction of draws in outage
/// at rate `r ln(rho)`, with a 95% Wilson interval.
pub fn estimate_outage(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let points = cfg
        .snrs
        .iter()
        .enumerate()
        .map(|(i, &rho)| {
            let outage_count = point_count(cfg, i);
            let n = cfg.samples_per_point;
            let (ci_lo, ci_hi) = wilson_interval(outage_count, n);
            SweepPoint {
                rho,
                rate_nats: cfg.r * rho.ln(),
                samples: n,
                outage_count,
                p_hat: outage_count as f64 / n as f64,
                ci_lo,
                ci_hi,
            }
        })
        .collect();
    Ok(SweepResult { config: cfg.clone(), points })
}

/// Fits the diversity slope over the qualifying ladder points.
pub fn fit_points(points: &[SweepPoint], count_floor: u64) -> Result<DiversityFit> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut dropped = Vec::new();
    for p in points {
        if p.outage_count >= count_floor.max(1) {
            xs.push(p.rho.ln());
            ys.push(-p.p_hat.ln());
        } else {
            dropped.push(p.rho);
        }
    }
    if xs.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "diversity fit needs at least 2 points with outage count >= {count_floor}; \
             dropped rho values: {dropped:?}"
        )));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let d_hat = sxy / sxx;
    let intercept = my - d_hat * mx;
    let residual = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let e = y - (intercept + d_hat * x);
            e * e
        })
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(DiversityFit { d_hat, intercept, residual, points_used: xs.len(), dropped_rhos: dropped })
}

/// Fits the diversity slope of a sweep.
pub fn fit_diversity(result: &SweepResult, count_floor: u64) -> Result<DiversityFit> {
    fit_points(&result.points, count_floor)
}

/// Writes the sweep as CSV. Probabilities use scientific notation so deep
/// tails survive the fixed precision; all formatting is deterministic.
pub fn write_sweep_csv(result: &SweepResult, out: &mut impl std::io::Write) -> std::io::Result<()> {
    writeln!(out, "rho,rate_nats,n,outage_count,p_hat,ci_lo,ci_hi")?;
    for p in &result.points {
        writeln!(
            out,
            "{:.6},{:.6},{},{},{:.6e},{:.6e},{:.6e}",
            p.rho, p.rate_nats, p.samples, p.outage_count, p.p_hat, p.ci_lo, p.ci_hi
        )?;
    }
    Ok(())
}

/// Parses a sweep CSV produced by [`write_sweep_csv`].
pub fn parse_sweep_csv(text: &str) -> Result<Vec<SweepPoint>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::InsufficientData("empty sweep CSV".into()))?;
    if header.trim() != "rho,rate_nats,n,outage_count,p_hat,ci_lo,ci_hi" {
        return Err(Error::Domain(format!("unexpected sweep CSV header: {header}")));
    }
    let mut points = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(Error::Domain(format!(
                "sweep CSV line {} has {} fields, expected 7",
                lineno + 2,
                fields.len()
            )));
        }
        let num = |i: usize| -> Result<f64> {
            fields[i]
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::Domain(format!("line {}: {e}", lineno + 2)))
        };
        let int = |i: usize| -> Result<u64> {
            fields[i]
                .trim()
                .parse::<u64>()
                .map_err(|e| Error::Domain(format!("line {}: {e}", lineno + 2)))
        };
        points.push(SweepPoint {
            rho: num(0)?,
            rate_nats: num(1)?,
            samples: int(2)?,
            outage_count: int(3)?,
            p_hat: num(4)?,
            ci_lo: num(5)?,
            ci_hi: num(6)?,
        });
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_moments() {
        let mut sampler = FadingSampler::new(7, 0);
        let n = 1_000_000;
        let mut sum = 0.0;
        let mut below = 0u64;
        for _ in 0..n {
            let g = sampler.exponential();
            assert!(g > 0.0);
            sum += g;
            if g <= 0.1 {
                below += 1;
            }
        }
        let mean = sum / n as f64;
        assert!((mean - 1.0).abs() < 0.01, "mean {mean}");
        let frac = below as f64 / n as f64;
        assert!((frac - 0.09516258196404048).abs() < 0.002, "cdf {frac}");
    }

    #[test]
    fn identical_seeds_identical_sequences() {
        let a = sample_fading(42, 3, 1000);
        let b = sample_fading(42, 3, 1000);
        assert_eq!(a, b);
        let c = sample_fading(43, 3, 1000);
        assert_ne!(a, c);
    }

    #[test]
    fn zero_rate_never_in_outage() {
        for scheme in [Scheme::FullDuplex, Scheme::StaticQmf, Scheme::Ddf] {
            let cfg = SweepConfig {
                scheme,
                exponents: ChannelExponents::new(1.0, 1.0, 0.2).unwrap(),
                r: 0.0,
                snrs: vec![1e2, 1e3],
                samples_per_point: 5_000,
                seed: 1,
            };
            let res = estimate_outage(&cfg).unwrap();
            assert!(res.points.iter().all(|p| p.outage_count == 0));
        }
    }

    #[test]
    fn outage_monotone_in_snr() {
        let cfg = SweepConfig {
            scheme: Scheme::StaticQmf,
            exponents: ChannelExponents::new(1.0, 1.0, 1.0).unwrap(),
            r: 0.25,
            snrs: default_snr_ladder(),
            samples_per_point: 200_000,
            seed: 11,
        };
        let res = estimate_outage(&cfg).unwrap();
        for w in res.points.windows(2) {
            // Monotone within CI overlap.
            assert!(w[1].ci_lo <= w[0].ci_hi + 1e-12);
        }
    }

    #[test]
    fn fit_recovers_synthetic_slopes() {
        let mk = |c: f64, d: f64| -> Vec<SweepPoint> {
            [1e2, 1e3, 1e4]
                .iter()
                .map(|&rho: &f64| {
                    let p = c * rho.powf(-d);
                    SweepPoint {
                        rho,
                        rate_nats: 0.0,
                        samples: 1_000_000,
                        outage_count: (p * 1e6) as u64,
                        p_hat: p,
                        ci_lo: p,
                        ci_hi: p,
                    }
                })
                .collect()
        };
        let fit = fit_points(&mk(1.0, 1.5), 20).unwrap();
        assert!((fit.d_hat - 1.5).abs() < 1e-12);
        assert!(fit.residual < 1e-12);
        // A constant prefactor lands in the intercept, not the slope.
        let fit = fit_points(&mk(3.0, 0.8), 20).unwrap();
        assert!((fit.d_hat - 0.8).abs() < 1e-12);
    }

    #[test]
    fn fit_insufficient_data_names_dropped_points() {
        let points = vec![
            SweepPoint {
                rho: 100.0,
                rate_nats: 0.0,
                samples: 100,
                outage_count: 5,
                p_hat: 0.05,
                ci_lo: 0.0,
                ci_hi: 0.1,
            },
            SweepPoint {
                rho: 1000.0,
                rate_nats: 0.0,
                samples: 100,
                outage_count: 0,
                p_hat: 0.0,
                ci_lo: 0.0,
                ci_hi: 0.05,
            },
        ];
        let err = fit_points(&points, 20).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("100") && msg.contains("1000"), "{msg}");
    }

    #[test]
    fn dqmf_requires_unit_incoming_exponent() {
        let cfg = SweepConfig {
            scheme: Scheme::DynamicQmf,
            exponents: ChannelExponents::new(2.0, 1.0, 0.2).unwrap(),
            r: 0.3,
            snrs: vec![1e2, 1e3],
            samples_per_point: 10,
            seed: 0,
        };
        assert!(matches!(estimate_outage(&cfg), Err(Error::Unsupported(_))));
    }

    #[test]
    fn sweep_csv_roundtrip() {
        let cfg = SweepConfig {
            scheme: Scheme::FullDuplex,
            exponents: ChannelExponents::new(1.0, 1.0, 1.0).unwrap(),
            r: 0.5,
            snrs: vec![1e2, 1e3],
            samples_per_point: 10_000,
            seed: 5,
        };
        let res = estimate_outage(&cfg).unwrap();
        let mut buf = Vec::new();
        write_sweep_csv(&res, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let parsed = parse_sweep_csv(&text).unwrap();
        assert_eq!(parsed.len(), res.points.len());
        for (a, b) in parsed.iter().zip(&res.points) {
            assert_eq!(a.samples, b.samples);
            assert_eq!(a.outage_count, b.outage_count);
            assert!((a.rho - b.rho).abs() < 1e-6);
        }
    }

    #[test]
    fn wilson_interval_brackets_estimate() {
        for (count, n) in [(0u64, 100u64), (1, 100), (50, 100), (100, 100), (3, 7)] {
            let (lo, hi) = wilson_interval(count, n);
            let p = count as f64 / n as f64;
            assert!(lo <= p + 1e-12 && p <= hi + 1e-12);
            assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi));
        }
    }
}
