//! Optimal iteration schedules.
//!
//! For large blocks the counts scale as `j1 = (pi/4) sqrt(N) - eta sqrt(b)` and
//! `j2 = alpha sqrt(b)`, and the non-target amplitude vanishes along the curve
//!
//! ```text
//! tan(2 eta / sqrt K) = 2 sqrt(K) sin(2 alpha) / (K - 4 sin^2 alpha)
//! ```
//!
//! Maximizing `c = eta - alpha` on that curve has the closed-form solution
//!
//! ```text
//! cos(2 alpha_K) = (K - 2) / (2 (K - 1)),   tan(2 eta_K / sqrt K) = sqrt(3K - 4) / (K - 2)
//! ```
//!
//! Both arctangents use `atan2` on the range `(0, pi)`, which covers the
//! vanishing denominator at `K = 2` and the obtuse branch for `2 < K < 4`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{apply_global, apply_local, Geometry, ReducedState, Schedule};
use crate::scalar::{round_half_even, Real};

/// Number of blocks, with `Infinite` standing for the `K -> oo` limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BlockCount {
    Finite(u64),
    Infinite,
}

impl fmt::Display for BlockCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockCount::Finite(k) => write!(f, "{k}"),
            BlockCount::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for BlockCount {
    type Err = std::num::ParseIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "Inf" | "infinity" | "oo" => Ok(BlockCount::Infinite),
            other => other.parse().map(BlockCount::Finite),
        }
    }
}

impl From<u64> for BlockCount {
    fn from(k: u64) -> Self {
        BlockCount::Finite(k)
    }
}

/// Optimal asymptotic coefficients for a given block count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalParameters<T> {
    /// `j2 = alpha sqrt(b)`.
    pub alpha: T,
    /// `j1 = (pi/4) sqrt(N) - eta sqrt(b)`.
    pub eta: T,
    /// Speedup coefficient `eta - alpha`; total cost is `(pi/4) sqrt(N) - c sqrt(b)`.
    pub c: T,
    pub n_blocks: BlockCount,
}

fn check_k(k: u64) -> Result<()> {
    if k < 2 {
        Err(Error::BadK(k, 2))
    } else {
        Ok(())
    }
}

pub fn asymptotic_optimum<T: Real>(n_blocks: BlockCount) -> Result<OptimalParameters<T>> {
    let (alpha, eta) = match n_blocks {
        BlockCount::Infinite => (T::FRAC_PI_6(), T::of(3.0).sqrt() / T::two()),
        BlockCount::Finite(k) => {
            check_k(k)?;
            let kf = T::of_u64(k);
            let one = T::one();
            let two = T::two();
            let alpha = ((kf - two) / (two * (kf - one))).acos() / two;
            let eta = kf.sqrt() / two * (T::of(3.0) * kf - T::of(4.0)).sqrt().atan2(kf - two);
            (alpha, eta)
        }
    };
    Ok(OptimalParameters {
        alpha,
        eta,
        c: eta - alpha,
        n_blocks,
    })
}

/// Solve the large-block vanishing constraint for `eta` given `alpha`.
pub fn eta_from_alpha<T: Real>(n_blocks: u64, alpha: T) -> T {
    let k = T::of_u64(n_blocks);
    let sk = k.sqrt();
    let sin_a = alpha.sin();
    let num = T::two() * sk * (T::two() * alpha).sin();
    let den = k - T::of(4.0) * sin_a * sin_a;
    sk / T::two() * num.atan2(den)
}

/// Truncated large-`K` series for `(alpha_K, eta_K)`; the neglected terms are `O(1/K^3)`.
pub fn asymptotic_expansion<T: Real>(n_blocks: BlockCount) -> (T, T) {
    let s3 = T::of(3.0).sqrt();
    let lead = (T::FRAC_PI_6(), s3 / T::two());
    let k = match n_blocks {
        BlockCount::Infinite => return lead,
        BlockCount::Finite(k) => T::of_u64(k),
    };
    let first = (T::two() * s3 * k).recip();
    let alpha = lead.0 + first + T::of(5.0) * s3 / (T::of(36.0) * k * k);
    let eta = lead.1 + first + T::of(11.0) * s3 / (T::of(90.0) * k * k);
    (alpha, eta)
}

/// Signed error `(expansion - exact)` of the series for both coefficients.
/// Meaningful for large `K`; at small `K` it documents how far off the series is.
pub fn expansion_error<T: Real>(n_blocks: u64) -> Result<(T, T)> {
    let exact = asymptotic_optimum::<T>(BlockCount::Finite(n_blocks))?;
    let (a, e) = asymptotic_expansion::<T>(BlockCount::Finite(n_blocks));
    Ok((a - exact.alpha, e - exact.eta))
}

/// Real (unrounded) iteration counts `(j1, j2)` from the asymptotic optimum.
pub fn asymptotic_counts<T: Real>(g: &Geometry<T>) -> Result<(T, T)> {
    check_k(g.n_blocks())?;
    let p = asymptotic_optimum::<T>(BlockCount::Finite(g.n_blocks()))?;
    let sqrt_b = g.b().sqrt();
    let j1 = T::FRAC_PI_4() * g.n().sqrt() - p.eta * sqrt_b;
    Ok((j1, p.alpha * sqrt_b))
}

/// Rounded asymptotic schedule (round half to even, `j1` clamped at zero,
/// trailing global iteration always applied).
pub fn asymptotic_schedule<T: Real>(g: &Geometry<T>) -> Result<Schedule> {
    let (j1, j2) = asymptotic_counts(g)?;
    let j1 = round_half_even(j1.max(T::zero()));
    let j2 = round_half_even(j2);
    Ok(Schedule::new(
        j1.to_u64().unwrap_or(0),
        j2.to_u64().unwrap_or(0),
        true,
    ))
}

/// Left side minus right side of the printed finite-`N` vanishing condition,
/// evaluated term by term as written.
pub fn vanishing_residual<T: Real>(g: &Geometry<T>, j1: u64, j2: u64) -> T {
    vanishing_residual_relaxed(g, T::of_u64(j1), T::of_u64(j2))
}

/// [`vanishing_residual`] with real-valued iteration counts.
pub fn vanishing_residual_relaxed<T: Real>(g: &Geometry<T>, j1: T, j2: T) -> T {
    let n = g.n();
    let k = T::of_u64(g.n_blocks());
    let one = T::one();
    let two = T::two();
    let a = (two * j1 + one) * g.theta1();
    let b2 = two * j2 * g.theta2();
    let (sa, ca) = a.sin_cos();
    let (sb, cb) = b2.sin_cos();
    let bm1 = T::of_u64(g.ntt_count());
    let sqrt_nm1 = (n - one).sqrt();

    let lhs = -n / sqrt_nm1 * (one / two - one / k) * ca;
    let rhs = cb * sa + (bm1 / (n - one)).sqrt() * sb * ca - bm1.sqrt() * sb * sa
        + bm1 / sqrt_nm1 * cb * ca;
    lhs - rhs
}

/// Result of the exhaustive integer search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactSchedule<T> {
    pub schedule: Schedule,
    pub block_success: T,
}

/// Inclusive search ranges `(j1_max, j2_max)`: one Grover period in each parameter.
pub fn search_bounds<T: Real>(g: &Geometry<T>) -> (u64, u64) {
    let j1 = (T::FRAC_PI_4() * g.n().sqrt()).ceil();
    let j2 = (T::FRAC_PI_2() * g.b().sqrt()).ceil();
    (j1.to_u64().unwrap_or(0), j2.to_u64().unwrap_or(0))
}

/// Cheapest `G1 G2^j2 G1^j1` schedule whose block success probability
/// reaches `threshold`. Ties go to the smaller `j2`, then the smaller `j1`.
pub fn optimal_exact_schedule<T: Real>(g: &Geometry<T>, threshold: T) -> Result<ExactSchedule<T>> {
    check_k(g.n_blocks())?;
    let th = threshold.to_f64().unwrap_or(f64::NAN);
    if !(th > 0.0 && th < 1.0) {
        return Err(Error::BadProbability(th));
    }
    let (j1_max, j2_max) = search_bounds(g);

    // Prefix states after j1 globals, built exactly as run_schedule does.
    let mut prefixes = Vec::with_capacity(j1_max as usize + 1);
    let mut s = ReducedState::uniform(g);
    for _ in 0..=j1_max {
        prefixes.push(s);
        s = apply_global(&s, g);
    }

    let best = prefixes
        .par_iter()
        .enumerate()
        .filter_map(|(j1, prefix)| {
            let mut s = *prefix;
            for j2 in 0..=j2_max {
                let fin = apply_global(&s, g);
                let p = fin.block_success_probability(g);
                if p >= threshold {
                    return Some((Schedule::new(j1 as u64, j2, true), p));
                }
                s = apply_local(&s, g);
            }
            None
        })
        .min_by_key(|(sch, _)| (sch.queries(), sch.j2, sch.j1));

    best.map(|(schedule, block_success)| ExactSchedule {
        schedule,
        block_success,
    })
    .ok_or(Error::Infeasible { threshold: th })
}
