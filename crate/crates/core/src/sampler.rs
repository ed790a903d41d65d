//! Random family members on a fixed `(a, b)` slice of the `(c, c')` plane.
//!
//! Draws are generated in fixed-size chunks, each from its own ChaCha8
//! stream keyed by the chunk index, so the output depends only on the seed
//! and never on the number of worker threads.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{eta_from_a, family_cm_from_params, tau_bounds, FamilyParams};
use crate::format::{fmt_sig, ser_sig12};
use crate::symplectic::{validate_bona_fide, NormalFormCM, Sign};

pub const CHUNK_SIZE: usize = 4096;

/// Consecutive rejected draws tolerated before giving up on a chunk.
const MAX_REDRAWS: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SamplePoint {
    #[serde(serialize_with = "ser_sig12")]
    pub c: f64,
    #[serde(rename = "cp", serialize_with = "ser_sig12")]
    pub c_prime: f64,
    pub member: bool,
    pub params: Option<FamilyParams>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleSet {
    #[serde(serialize_with = "ser_sig12")]
    pub a: f64,
    #[serde(serialize_with = "ser_sig12")]
    pub b: f64,
    pub seed: u64,
    pub points: Vec<SamplePoint>,
    /// Draws rejected and redrawn (numerically degenerate or not bona fide).
    pub redraws: u64,
}

/// `n` family members at fixed `(a, b)`, with `r ~ U[1/b, b]`,
/// `tau ~ U[tau_min, tau_max]`, a uniformly random EPR sign and `eta` fixed
/// by `a`.
pub fn sample_family(a: f64, b: f64, n: usize, seed: u64) -> Result<SampleSet> {
    if !(a >= 1.0) || !(b >= 1.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!("sampling needs finite a, b >= 1 (a = {a}, b = {b})")));
    }
    let chunks = n.div_ceil(CHUNK_SIZE);
    let results: Vec<(Vec<SamplePoint>, u64)> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let len = CHUNK_SIZE.min(n - k * CHUNK_SIZE);
            sample_chunk(a, b, seed, k as u64, len)
        })
        .collect::<Result<_>>()?;
    let mut points = Vec::with_capacity(n);
    let mut redraws = 0;
    for (p, r) in results {
        points.extend(p);
        redraws += r;
    }
    Ok(SampleSet { a, b, seed, points, redraws })
}

fn sample_chunk(a: f64, b: f64, seed: u64, stream: u64, len: usize) -> Result<(Vec<SamplePoint>, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut points = Vec::with_capacity(len);
    let mut redraws = 0;
    let mut streak = 0;
    while points.len() < len {
        match draw(&mut rng, a, b) {
            Some(p) => {
                points.push(p);
                streak = 0;
            }
            None => {
                redraws += 1;
                streak += 1;
                if streak >= MAX_REDRAWS {
                    return Err(Error::NumericalFailure(format!(
                        "{MAX_REDRAWS} consecutive degenerate draws at a = {a}, b = {b}"
                    )));
                }
            }
        }
    }
    Ok((points, redraws))
}

fn draw(rng: &mut ChaCha8Rng, a: f64, b: f64) -> Option<SamplePoint> {
    let r = if b > 1.0 { rng.random_range(1.0 / b..=b) } else { 1.0 };
    let (lo, hi) = tau_bounds(a, b, r).ok()?;
    let tau = if hi > lo { rng.random_range(lo..=hi) } else { lo };
    let sign = if rng.random_bool(0.5) { Sign::Plus } else { Sign::Minus };
    let mut eta = eta_from_a(a, r, tau, b).ok()?;
    // Endpoints of the tau interval sit on eta = |1 - tau| up to rounding.
    let floor = (1.0 - tau).abs();
    if eta < floor {
        if eta < floor - 1e-9 {
            return None;
        }
        eta = floor;
    }
    let params = FamilyParams::new(b, r, tau, eta, sign).ok()?;
    let nf = family_cm_from_params(&params).ok()?;
    if !validate_bona_fide(&nf.embed()).bona_fide {
        return None;
    }
    Some(SamplePoint { c: nf.c, c_prime: nf.c_prime, member: true, params: Some(params) })
}

/// CSV with header `a,b,c,cp,r,tau,eta,sign`, 12 significant digits.
pub fn write_csv<W: Write>(set: &SampleSet, mut out: W) -> std::io::Result<()> {
    writeln!(out, "a,b,c,cp,r,tau,eta,sign")?;
    let (a, b) = (fmt_sig(set.a, 12), fmt_sig(set.b, 12));
    for p in &set.points {
        let (r, tau, eta, sign) = match p.params {
            Some(fp) => (fmt_sig(fp.r, 12), fmt_sig(fp.tau, 12), fmt_sig(fp.eta, 12), format!("{}", fp.sign.value())),
            None => Default::default(),
        };
        writeln!(out, "{a},{b},{},{},{r},{tau},{eta},{sign}", fmt_sig(p.c, 12), fmt_sig(p.c_prime, 12))?;
    }
    Ok(())
}

/// Histogram of samples on a square grid over `c, c' ∈ [-extent, extent]`
/// with `extent = sqrt(ab)`, the largest correlation allowed by positivity.
/// `counts[i][j]` holds points with `c` in bin `i` and `c'` in bin `j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OccupancyGrid {
    #[serde(serialize_with = "ser_sig12")]
    pub a: f64,
    #[serde(serialize_with = "ser_sig12")]
    pub b: f64,
    pub bins: usize,
    #[serde(serialize_with = "ser_sig12")]
    pub extent: f64,
    #[serde(rename = "grid")]
    pub counts: Vec<Vec<u64>>,
    /// Whether the cell centre is a bona fide state.
    #[serde(skip)]
    pub physical: Vec<Vec<bool>>,
}

impl OccupancyGrid {
    pub fn from_samples(set: &SampleSet, bins: usize) -> Self {
        let bins = bins.max(1);
        let extent = (set.a * set.b).sqrt();
        let width = 2.0 * extent / bins as f64;
        let centre = |i: usize| -extent + (i as f64 + 0.5) * width;
        let physical = (0..bins)
            .map(|i| {
                (0..bins)
                    .map(|j| {
                        validate_bona_fide(&NormalFormCM::new(set.a, set.b, centre(i), centre(j)).embed()).bona_fide
                    })
                    .collect()
            })
            .collect();
        let mut counts = vec![vec![0u64; bins]; bins];
        let index = |x: f64| (((x + extent) / width).floor().max(0.0) as usize).min(bins - 1);
        for p in &set.points {
            counts[index(p.c)][index(p.c_prime)] += 1;
        }
        OccupancyGrid { a: set.a, b: set.b, bins, extent, counts, physical }
    }

    /// Fraction of physical cells that hold at least one sample.
    pub fn occupied_fraction(&self) -> f64 {
        let mut physical = 0usize;
        let mut hit = 0usize;
        for (row, prow) in self.counts.iter().zip(&self.physical) {
            for (&n, &ok) in row.iter().zip(prow) {
                if ok {
                    physical += 1;
                    if n > 0 {
                        hit += 1;
                    }
                }
            }
        }
        if physical == 0 {
            0.0
        } else {
            hit as f64 / physical as f64
        }
    }
}

/// Largest `t >= 0` such that `V(a, b, t, s t)` is bona fide, by bisection.
pub fn bisector_extent(a: f64, b: f64, s: Sign) -> f64 {
    let ok = |t: f64| validate_bona_fide(&NormalFormCM::new(a, b, t, s.value() * t).embed()).bona_fide;
    let (mut lo, mut hi) = (0.0, (a * b).sqrt());
    if ok(hi) {
        return hi;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Coverage of the line `c' = s c` by samples: the physical segment
/// `c ∈ [-t_max, t_max]` is split into `bins` equal pieces, and a piece
/// counts as covered when some sample within perpendicular distance `band`
/// of the line projects into it. Returns the covered fraction.
pub fn bisector_coverage(set: &SampleSet, s: Sign, band: f64, bins: usize) -> f64 {
    let bins = bins.max(1);
    let t_max = bisector_extent(set.a, set.b, s);
    if t_max == 0.0 {
        return 1.0;
    }
    let mut hit = vec![false; bins];
    for p in &set.points {
        let dist = (p.c_prime - s.value() * p.c).abs() / std::f64::consts::SQRT_2;
        if dist > band {
            continue;
        }
        let t = 0.5 * (p.c + s.value() * p.c_prime);
        let x = (t + t_max) / (2.0 * t_max);
        if (0.0..=1.0).contains(&x) {
            hit[((x * bins as f64) as usize).min(bins - 1)] = true;
        }
    }
    hit.iter().filter(|&&h| h).count() as f64 / bins as f64
}
