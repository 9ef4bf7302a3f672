//! Cost comparisons and lower bounds.
//!
//! All coefficients are per `sqrt(N)` unless noted, i.e. asymptotic in the
//! block size. Finite-size numbers come from [`crate::optimizer::optimal_exact_schedule`].

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{run_schedule, Geometry, ReducedState, Schedule};
use crate::optimizer::{asymptotic_optimum, BlockCount};
use crate::scalar::Real;

/// Printed cost coefficient of partial search at `K = 4`; the tabulated
/// `alpha_4`, `eta_4` give `0.6155` instead.
pub const PRINTED_S4: f64 = 0.586;

fn check_k(k: u64) -> Result<()> {
    if k < 2 {
        Err(Error::BadK(k, 2))
    } else {
        Ok(())
    }
}

/// `R_K / sqrt(N)`: full Grover search over `K - 1` randomly picked blocks.
pub fn random_pick_coefficient<T: Real>(n_blocks: u64) -> Result<T> {
    check_k(n_blocks)?;
    let k = T::of_u64(n_blocks);
    Ok(T::FRAC_PI_4() * ((k - T::one()) / k).sqrt())
}

/// `S_K / sqrt(N) = pi/4 + (alpha_K - eta_K) / sqrt(K)`.
pub fn partial_search_coefficient<T: Real>(n_blocks: u64) -> Result<T> {
    let p = asymptotic_optimum::<T>(BlockCount::Finite(n_blocks))?;
    Ok(T::FRAC_PI_4() - p.c / T::of_u64(n_blocks).sqrt())
}

/// Probability of finding the target item if the search stops after the
/// global phase and every qubit is measured: `(K-2)^2 / (K (K-1))`.
pub fn interrupted_probability<T: Real>(n_blocks: u64) -> Result<T> {
    check_k(n_blocks)?;
    let k = T::of_u64(n_blocks);
    let d = k - T::two();
    Ok(d * d / (k * (k - T::one())))
}

/// Block counts for which partial search beats the interrupted variant at a
/// given item-success level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OperatingRange {
    pub k_min: u64,
    /// Large-`K` estimate `floor(3 / (1 - p))`.
    pub k_max_asymptotic: BlockCount,
    /// Largest `K` whose exact interrupted probability stays at or below `p`.
    pub k_max_exact: BlockCount,
}

pub fn operating_range(p_threshold: f64) -> Result<OperatingRange> {
    if p_threshold.is_nan() || p_threshold <= 0.0 {
        return Err(Error::BadProbability(p_threshold));
    }
    let limit = (1u64 << 53) as f64;
    if p_threshold >= 1.0 {
        return Ok(OperatingRange {
            k_min: 3,
            k_max_asymptotic: BlockCount::Infinite,
            k_max_exact: BlockCount::Infinite,
        });
    }
    let q = 1.0 - p_threshold;
    let approx = (3.0 / q).floor();
    let k_max_asymptotic = if approx >= limit {
        BlockCount::Infinite
    } else {
        BlockCount::Finite(approx as u64)
    };

    // (K-2)^2 <= p K (K-1)  <=>  q K^2 - (4 - p) K + 4 <= 0
    let bq = 4.0 - p_threshold;
    let root = (bq + (bq * bq - 16.0 * q).max(0.0).sqrt()) / (2.0 * q);
    let k_max_exact = if root >= limit {
        BlockCount::Infinite
    } else {
        let ok = |k: u64| k >= 2 && interrupted_probability::<f64>(k).unwrap() <= p_threshold;
        let mut k = (root.floor() as u64).max(2);
        while !ok(k) && k > 2 {
            k -= 1;
        }
        while ok(k + 1) {
            k += 1;
        }
        BlockCount::Finite(k)
    };
    Ok(OperatingRange {
        k_min: 3,
        k_max_asymptotic,
        k_max_exact,
    })
}

/// Distance of the schedule's final state from `sin(alpha_K)|t> + cos(alpha_K)|ntt>`.
pub fn final_state_deviation<T: Real>(g: &Geometry<T>, sch: &Schedule) -> Result<T> {
    let p = asymptotic_optimum::<T>(BlockCount::Finite(g.n_blocks()))?;
    Ok(state_deviation(g, &run_schedule(g, sch), p.alpha))
}

pub(crate) fn state_deviation<T: Real>(g: &Geometry<T>, s: &ReducedState<T>, alpha: T) -> T {
    let [t, ntt, nb] = s.to_orthonormal(g);
    (t - alpha.sin())
        .abs()
        .max((ntt - alpha.cos()).abs())
        .max(nb.abs())
}

/// `j_e = (alpha_K / 2) sqrt(b)`: local iterations from the block-uniform
/// state that reproduce the final target-block state.
pub fn effective_local_iterations<T: Real>(n_blocks: BlockCount, block_size: u64) -> Result<T> {
    let p = asymptotic_optimum::<T>(n_blocks)?;
    Ok(p.alpha / T::two() * T::of_u64(block_size).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundVariant {
    /// `(pi/4)(sqrt N - sqrt b)`.
    Basic,
    /// `(pi/4) sqrt N - (pi/6) sqrt b`.
    Tighter,
    /// `(pi/4) sqrt N + (alpha_K/2 - pi/4) sqrt b`.
    AlphaExact,
}

impl BoundVariant {
    pub const ALL: [BoundVariant; 3] = [
        BoundVariant::Basic,
        BoundVariant::Tighter,
        BoundVariant::AlphaExact,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundVariant::Basic => "basic",
            BoundVariant::Tighter => "tighter",
            BoundVariant::AlphaExact => "alpha_exact",
        }
    }
}

impl fmt::Display for BoundVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "basic" => Ok(BoundVariant::Basic),
            "tighter" => Ok(BoundVariant::Tighter),
            "alpha_exact" | "alpha-exact" => Ok(BoundVariant::AlphaExact),
            other => Err(Error::BadVariant(other.to_string())),
        }
    }
}

/// Lower bound on the oracle queries of any partial search over `g`.
pub fn lower_bound_queries<T: Real>(g: &Geometry<T>, variant: BoundVariant) -> Result<T> {
    let full = T::FRAC_PI_4() * g.n().sqrt();
    let sqrt_b = g.b().sqrt();
    let coeff = match variant {
        BoundVariant::Basic => -T::FRAC_PI_4(),
        BoundVariant::Tighter => -T::FRAC_PI_6(),
        BoundVariant::AlphaExact => {
            let p = asymptotic_optimum::<T>(BlockCount::Finite(g.n_blocks()))?;
            p.alpha / T::two() - T::FRAC_PI_4()
        }
    };
    Ok(full + coeff * sqrt_b)
}

/// Asymptotic query count `(pi/4) sqrt N - c_K sqrt b` achieved by the optimized schedule.
pub fn achieved_queries<T: Real>(g: &Geometry<T>) -> Result<T> {
    let p = asymptotic_optimum::<T>(BlockCount::Finite(g.n_blocks()))?;
    Ok(T::FRAC_PI_4() * g.n().sqrt() - p.c * g.b().sqrt())
}

/// One row of the partial-search vs. random-pick comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow<T> {
    pub n_blocks: u64,
    pub s_coeff: T,
    pub r_coeff: T,
    pub p_interrupted: T,
    pub c: T,
    pub note: String,
}

fn note_for(k: u64) -> String {
    if k == 4 {
        format!("printed S_4 = {PRINTED_S4} is a suspected misprint; tabulated alpha_4 and eta_4 give this s_coeff")
    } else {
        String::new()
    }
}

pub fn comparison_row<T: Real>(n_blocks: u64) -> Result<ComparisonRow<T>> {
    let p = asymptotic_optimum::<T>(BlockCount::Finite(n_blocks))?;
    Ok(ComparisonRow {
        n_blocks,
        s_coeff: partial_search_coefficient(n_blocks)?,
        r_coeff: random_pick_coefficient(n_blocks)?,
        p_interrupted: interrupted_probability(n_blocks)?,
        c: p.c,
        note: note_for(n_blocks),
    })
}

/// Rows for every `K` in `k_min..=k_max`, ordered by `K`.
pub fn comparison_table<T: Real>(k_min: u64, k_max: u64) -> Result<Vec<ComparisonRow<T>>> {
    check_k(k_min)?;
    (k_min..=k_max).map(comparison_row).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::apply_local;
    use crate::optimizer::asymptotic_schedule;
    use crate::scalar::round_half_even;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_4, PI};

    type G = Geometry<f64>;

    #[test]
    fn random_pick_values() {
        assert_abs_diff_eq!(
            random_pick_coefficient::<f64>(3).unwrap(),
            0.641,
            epsilon = 5e-4
        );
        assert_abs_diff_eq!(
            random_pick_coefficient::<f64>(4).unwrap(),
            0.68,
            epsilon = 5e-4
        );
        let r2 = random_pick_coefficient::<f64>(2).unwrap();
        assert_abs_diff_eq!(r2, PI / (4.0 * 2f64.sqrt()), epsilon = 1e-15);
        assert_abs_diff_eq!(
            r2,
            partial_search_coefficient::<f64>(2).unwrap(),
            epsilon = 1e-12
        );
        assert!(matches!(
            random_pick_coefficient::<f64>(1),
            Err(Error::BadK(1, 2))
        ));
    }

    #[test]
    fn partial_search_values() {
        assert_abs_diff_eq!(
            partial_search_coefficient::<f64>(3).unwrap(),
            0.5908,
            epsilon = 5e-4
        );
        assert_abs_diff_eq!(
            partial_search_coefficient::<f64>(5).unwrap(),
            0.6329,
            epsilon = 5e-4
        );
        assert_abs_diff_eq!(
            partial_search_coefficient::<f64>(4).unwrap(),
            FRAC_PI_4 - 0.3398 / 2.0,
            epsilon = 5e-4
        );
    }

    #[test]
    fn interrupted_values() {
        assert_eq!(interrupted_probability::<f64>(2).unwrap(), 0.0);
        assert_abs_diff_eq!(
            interrupted_probability::<f64>(30).unwrap(),
            784.0 / 870.0,
            epsilon = 1e-15
        );
        for k in [1000u64, 10_000, 100_000] {
            let p = interrupted_probability::<f64>(k).unwrap();
            let kf = k as f64;
            assert!((p - (1.0 - 3.0 / kf)).abs() <= 5.0 / (kf * kf));
        }
        let mut prev = -1.0;
        for k in 2..500 {
            let p = interrupted_probability::<f64>(k).unwrap();
            assert!(p > prev && p < 1.0);
            prev = p;
        }
    }

    #[test]
    fn operating_range_values() {
        let r = operating_range(0.9).unwrap();
        assert_eq!(r.k_min, 3);
        assert_eq!(r.k_max_asymptotic, BlockCount::Finite(30));
        // (K-2)^2 <= 0.9 K (K-1) holds up to K = 29
        assert_eq!(r.k_max_exact, BlockCount::Finite(29));
        for k in 2..=29 {
            assert!(interrupted_probability::<f64>(k).unwrap() <= 0.9);
        }
        assert!(interrupted_probability::<f64>(30).unwrap() > 0.9);

        let r = operating_range(1.0 - 1e-16).unwrap();
        assert_eq!(r.k_max_asymptotic, BlockCount::Infinite);
        assert_eq!(
            operating_range(1.0).unwrap().k_max_exact,
            BlockCount::Infinite
        );
        assert!(operating_range(0.0).is_err());
        // below p(3) = 1/6 only K = 2 qualifies, an empty operating range
        assert_eq!(
            operating_range(0.1).unwrap().k_max_exact,
            BlockCount::Finite(2)
        );
    }

    #[test]
    fn final_state_k4() {
        let g = G::new(4 << 14, 4).unwrap();
        let sch = asymptotic_schedule(&g).unwrap();
        let s = run_schedule(&g, &sch);
        assert_abs_diff_eq!(s.amp_target, 1.0 / 3f64.sqrt(), epsilon = 0.02);
        assert!(final_state_deviation(&g, &sch).unwrap() < 0.05);
    }

    #[test]
    fn final_state_k2_without_trailing() {
        let b = 1u64 << 14;
        let g = G::new(2 * b, 2).unwrap();
        let j2 = round_half_even(FRAC_PI_4 * (b as f64).sqrt()) as u64;
        let s = run_schedule(&g, &Schedule::new(0, j2, false));
        assert_abs_diff_eq!(s.amp_target, 2f64.sqrt() / 2.0, epsilon = 0.01);
    }

    #[test]
    fn uniform_state_deviation_is_large() {
        let g = G::new(1024, 4).unwrap();
        let d = final_state_deviation(&g, &Schedule::new(0, 0, false)).unwrap();
        assert!(d > 0.5);
    }

    #[test]
    fn effective_iterations() {
        let j = effective_local_iterations::<f64>(BlockCount::Finite(4), 256).unwrap();
        assert_abs_diff_eq!(j, 0.6154797086703874 / 2.0 * 16.0, epsilon = 1e-12);
        assert_abs_diff_eq!(j, 4.924, epsilon = 1e-3);
        let j = effective_local_iterations::<f64>(BlockCount::Infinite, 10_000).unwrap();
        assert_abs_diff_eq!(j, PI / 12.0 * 100.0, epsilon = 1e-12);
        assert!(effective_local_iterations::<f64>(BlockCount::Finite(1), 4).is_err());
    }

    #[test]
    fn effective_iterations_reproduce_final_state() {
        // G2^j |s2> has target amplitude sin((2j+1) theta2); with j = round(j_e)
        // the angle misses alpha_K by at most 2 theta2.
        for k in [3u64, 4, 8, 32, 1000] {
            for b in [256u64, 1024, 4096, 1 << 14] {
                let g = G::new(k * b, k).unwrap();
                let alpha = asymptotic_optimum::<f64>(BlockCount::Finite(k))
                    .unwrap()
                    .alpha;
                let je = effective_local_iterations::<f64>(BlockCount::Finite(k), b).unwrap();
                let j = round_half_even(je) as u64;
                let mut s = ReducedState::block_uniform(&g);
                for _ in 0..j {
                    s = apply_local(&s, &g);
                }
                let closed = ((2 * j + 1) as f64 * g.theta2()).sin();
                assert_abs_diff_eq!(s.amp_target, closed, epsilon = 1e-12);
                let miss = (s.amp_target - alpha.sin()).abs();
                assert!(miss <= 2.0 * g.theta2(), "k={k} b={b} miss={miss}");
                if b >= 4096 {
                    assert!(miss <= 0.05, "k={k} b={b} miss={miss}");
                }
            }
        }
    }

    #[test]
    fn bound_examples() {
        let g = G::new(1024, 4).unwrap();
        let basic = lower_bound_queries(&g, BoundVariant::Basic).unwrap();
        let tighter = lower_bound_queries(&g, BoundVariant::Tighter).unwrap();
        let exact = lower_bound_queries(&g, BoundVariant::AlphaExact).unwrap();
        assert_abs_diff_eq!(basic, FRAC_PI_4 * 16.0, epsilon = 1e-12);
        assert_abs_diff_eq!(tighter, 8.0 * PI - 16.0 * PI / 6.0, epsilon = 1e-12);
        assert_abs_diff_eq!(tighter, 16.76, epsilon = 5e-3);
        assert!(basic <= tighter && tighter <= exact);
        assert!(exact <= achieved_queries(&g).unwrap());
        assert!(21.0 >= tighter);
        assert!(lower_bound_queries(&G::new(1024, 1).unwrap(), BoundVariant::AlphaExact).is_err());
        assert_eq!(
            "tighter".parse::<BoundVariant>().unwrap(),
            BoundVariant::Tighter
        );
        assert_eq!(
            "loose".parse::<BoundVariant>(),
            Err(Error::BadVariant("loose".into()))
        );
    }

    #[test]
    fn table_rows() {
        let rows = comparison_table::<f64>(2, 40).unwrap();
        assert_eq!(rows.len(), 39);
        assert_abs_diff_eq!(rows[0].s_coeff, rows[0].r_coeff, epsilon = 1e-12);
        assert_abs_diff_eq!(rows[0].r_coeff, 0.5554, epsilon = 5e-4);
        assert_abs_diff_eq!(rows[1].s_coeff, 0.5908, epsilon = 5e-4);
        assert_abs_diff_eq!(rows[1].r_coeff, 0.6413, epsilon = 5e-4);
        for r in &rows[1..] {
            assert!(r.s_coeff < r.r_coeff);
            assert!(r.p_interrupted >= 0.0 && r.p_interrupted < 1.0);
        }
        assert!(rows[2].note.contains("0.586"));
        assert!(rows.iter().filter(|r| !r.note.is_empty()).count() == 1);
        assert!(comparison_table::<f64>(1, 4).is_err());
    }

    #[test]
    fn random_pick_large_k_expansion() {
        // R_K -> (pi/4) sqrt N - (pi/(8 sqrt K)) sqrt b, i.e. pi/4 - pi/(8K) per sqrt N
        for k in [100u64, 1000, 10_000] {
            let kf = k as f64;
            let r = random_pick_coefficient::<f64>(k).unwrap();
            let approx = FRAC_PI_4 - PI / (8.0 * kf);
            assert!((r - approx).abs() <= 1.0 / (kf * kf));
        }
    }
}
