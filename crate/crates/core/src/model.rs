//! Partial search evolved inside its three-dimensional invariant subspace.
//!
//! Both the global iteration `G1 = -I_s1 I_t` and the blockwise local
//! iteration `G2 = -I_s2 I_t` map the span of
//!
//! * the target item,
//! * the uniform superposition of the other items of the target block,
//! * the uniform superposition of every item outside the target block
//!
//! onto itself. Starting from the uniform superposition the whole
//! algorithm therefore reduces to three real numbers, one *per-item*
//! amplitude for each class, and the database size only enters as a
//! multiplicity. This makes the reduced model exact for any `N` up to the
//! integer precision of the scalar type.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Database layout: `n_items` entries cut into `n_blocks` contiguous blocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry<T> {
    n_items: u64,
    n_blocks: u64,
    block_size: u64,
    theta1: T,
    theta2: T,
}

impl<T: Real> Geometry<T> {
    /// `theta1 = asin(1/sqrt(N))`, `theta2 = asin(1/sqrt(b))`.
    pub fn new(n_items: u64, n_blocks: u64) -> Result<Self> {
        if n_items < 2 {
            return Err(Error::TooSmall(n_items));
        }
        if n_blocks == 0 || n_blocks > n_items {
            return Err(Error::BadK(n_blocks, 1));
        }
        if !n_items.is_multiple_of(n_blocks) {
            return Err(Error::NonDivisible { n_items, n_blocks });
        }
        if n_items > T::EXACT_INT_LIMIT {
            return Err(Error::Precision {
                n_items,
                limit: T::EXACT_INT_LIMIT,
            });
        }
        let block_size = n_items / n_blocks;
        let theta1 = T::of_u64(n_items).sqrt().recip().asin();
        let theta2 = T::of_u64(block_size).sqrt().recip().asin();
        Ok(Self {
            n_items,
            n_blocks,
            block_size,
            theta1,
            theta2,
        })
    }

    pub fn n_items(&self) -> u64 {
        self.n_items
    }

    pub fn n_blocks(&self) -> u64 {
        self.n_blocks
    }

    pub fn block_size(&self) -> u64 {
        self.block_size
    }

    /// Global Grover angle, `sin^2 theta1 = 1/N`.
    pub fn theta1(&self) -> T {
        self.theta1
    }

    /// Local Grover angle, `sin^2 theta2 = 1/b`.
    pub fn theta2(&self) -> T {
        self.theta2
    }

    /// Number of non-target items inside the target block, `b - 1`.
    pub fn ntt_count(&self) -> u64 {
        self.block_size - 1
    }

    /// Number of items outside the target block, `N - b`.
    pub fn nb_count(&self) -> u64 {
        self.n_items - self.block_size
    }

    pub(crate) fn n(&self) -> T {
        T::of_u64(self.n_items)
    }

    pub(crate) fn b(&self) -> T {
        T::of_u64(self.block_size)
    }
}

/// Per-item amplitudes of the three classes of basis states.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ReducedState<T> {
    /// Amplitude of the target item.
    pub amp_target: T,
    /// Amplitude of each of the `b - 1` other items in the target block.
    pub amp_ntt: T,
    /// Amplitude of each of the `N - b` items in non-target blocks.
    pub amp_nb: T,
}

impl<T: Real> ReducedState<T> {
    pub fn new(amp_target: T, amp_ntt: T, amp_nb: T) -> Self {
        Self {
            amp_target,
            amp_ntt,
            amp_nb,
        }
    }

    /// Uniform superposition over all `N` items.
    pub fn uniform(g: &Geometry<T>) -> Self {
        let a = g.n().sqrt().recip();
        Self::new(a, a, a)
    }

    /// Uniform superposition over the target block only.
    pub fn block_uniform(g: &Geometry<T>) -> Self {
        let a = g.b().sqrt().recip();
        Self::new(a, a, T::zero())
    }

    /// Weighted squared norm `t^2 + (b-1) ntt^2 + (N-b) nb^2`.
    pub fn norm_sqr(&self, g: &Geometry<T>) -> T {
        self.amp_target * self.amp_target
            + T::of_u64(g.ntt_count()) * self.amp_ntt * self.amp_ntt
            + T::of_u64(g.nb_count()) * self.amp_nb * self.amp_nb
    }

    /// Coordinates in the orthonormal basis `(|t>, |ntt>, |nb>)`.
    pub fn to_orthonormal(&self, g: &Geometry<T>) -> [T; 3] {
        [
            self.amp_target,
            T::of_u64(g.ntt_count()).sqrt() * self.amp_ntt,
            T::of_u64(g.nb_count()).sqrt() * self.amp_nb,
        ]
    }

    /// Inverse of [`to_orthonormal`](Self::to_orthonormal). Classes with
    /// zero multiplicity get amplitude zero.
    pub fn from_orthonormal(g: &Geometry<T>, v: [T; 3]) -> Self {
        let per_item = |x: T, count: u64| {
            if count == 0 {
                T::zero()
            } else {
                x / T::of_u64(count).sqrt()
            }
        };
        Self::new(
            v[0],
            per_item(v[1], g.ntt_count()),
            per_item(v[2], g.nb_count()),
        )
    }

    /// Probability that measuring the block index yields the target block.
    pub fn block_success_probability(&self, g: &Geometry<T>) -> T {
        self.amp_target * self.amp_target + T::of_u64(g.ntt_count()) * self.amp_ntt * self.amp_ntt
    }

    /// Same probability computed as the complement of the non-target weight.
    pub fn block_success_probability_complement(&self, g: &Geometry<T>) -> T {
        T::one() - T::of_u64(g.nb_count()) * self.amp_nb * self.amp_nb
    }

    /// Probability that measuring every qubit yields the target item.
    pub fn item_success_probability(&self) -> T {
        self.amp_target * self.amp_target
    }
}

/// The two kinds of oracle-querying iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Iteration {
    Global,
    Local,
}

/// `G1 = -I_s1 I_t`: flip the target, then reflect every amplitude about
/// the global mean. One oracle query.
pub fn apply_global<T: Real>(s: &ReducedState<T>, g: &Geometry<T>) -> ReducedState<T> {
    let flipped = -s.amp_target;
    let sum = flipped + T::of_u64(g.ntt_count()) * s.amp_ntt + T::of_u64(g.nb_count()) * s.amp_nb;
    let twice_mean = T::two() * sum / g.n();
    ReducedState::new(
        twice_mean - flipped,
        twice_mean - s.amp_ntt,
        twice_mean - s.amp_nb,
    )
}

/// `G2 = -I_s2 I_t`: flip the target, then reflect about the mean inside
/// each block. Block-uniform non-target blocks are fixed points, so
/// `amp_nb` passes through untouched. One oracle query.
///
/// With single-item blocks the reflection would only contribute a global
/// sign on the target; that edge is treated as the identity.
pub fn apply_local<T: Real>(s: &ReducedState<T>, g: &Geometry<T>) -> ReducedState<T> {
    if g.block_size() == 1 {
        return *s;
    }
    let flipped = -s.amp_target;
    let sum = flipped + T::of_u64(g.ntt_count()) * s.amp_ntt;
    let twice_mean = T::two() * sum / g.b();
    ReducedState::new(twice_mean - flipped, twice_mean - s.amp_ntt, s.amp_nb)
}

pub fn apply<T: Real>(which: Iteration, s: &ReducedState<T>, g: &Geometry<T>) -> ReducedState<T> {
    match which {
        Iteration::Global => apply_global(s, g),
        Iteration::Local => apply_local(s, g),
    }
}

/// Iteration counts for `G1^[trailing] G2^j2 G1^j1` applied to the uniform state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Schedule {
    pub j1: u64,
    pub j2: u64,
    pub trailing_global: bool,
}

impl Schedule {
    pub fn new(j1: u64, j2: u64, trailing_global: bool) -> Self {
        Self {
            j1,
            j2,
            trailing_global,
        }
    }

    /// Total oracle queries `S`.
    pub fn queries(&self) -> u64 {
        self.j1 + self.j2 + u64::from(self.trailing_global)
    }

    /// Iterations in application order.
    pub fn iterations(&self) -> impl Iterator<Item = Iteration> {
        let trailing = if self.trailing_global { 1 } else { 0 };
        std::iter::repeat_n(Iteration::Global, self.j1 as usize)
            .chain(std::iter::repeat_n(Iteration::Local, self.j2 as usize))
            .chain(std::iter::repeat_n(Iteration::Global, trailing))
    }
}

pub fn run_schedule<T: Real>(g: &Geometry<T>, sch: &Schedule) -> ReducedState<T> {
    run_schedule_traced(g, sch, |_| {})
}

/// Like [`run_schedule`], reporting every iteration to `on_query` as it is applied.
pub fn run_schedule_traced<T: Real, F>(
    g: &Geometry<T>,
    sch: &Schedule,
    mut on_query: F,
) -> ReducedState<T>
where
    F: FnMut(Iteration),
{
    sch.iterations().fold(ReducedState::uniform(g), |s, it| {
        on_query(it);
        apply(it, &s, g)
    })
}

/// Real 3x3 matrix of an iteration in the orthonormal `(|t>, |ntt>, |nb>)` basis.
pub fn iteration_matrix<T: Real>(g: &Geometry<T>, which: Iteration) -> [[T; 3]; 3] {
    let zero = T::zero();
    let (s, dim) = match which {
        Iteration::Global => {
            let u = ReducedState::uniform(g).to_orthonormal(g);
            (u, 3)
        }
        Iteration::Local => {
            if g.block_size() == 1 {
                let mut id = [[zero; 3]; 3];
                for (i, row) in id.iter_mut().enumerate() {
                    row[i] = T::one();
                }
                return id;
            }
            let u = ReducedState::block_uniform(g).to_orthonormal(g);
            (u, 2)
        }
    };
    // (2|s><s| - 1) restricted to the reflected span, identity elsewhere,
    // then the oracle flips the first column.
    let mut m = [[zero; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let id = if i == j { T::one() } else { zero };
            m[i][j] = if i < dim && j < dim {
                T::two() * s[i] * s[j] - id
            } else {
                id
            };
        }
        m[i][0] = -m[i][0];
    }
    m
}

/// Eigenvalue and eigenvector of an iteration in the `(|t>, |ntt>, |nb>)` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair<T> {
    pub eigenvalue: Complex<T>,
    pub eigenvector: [Complex<T>; 3],
}

impl<T: Real> EigenPair<T> {
    /// `|| M v - lambda v ||` for a real matrix acting on the complex eigenvector.
    pub fn residual(&self, m: &[[T; 3]; 3]) -> T {
        let mut acc = T::zero();
        for (i, row) in m.iter().enumerate() {
            let mv = row
                .iter()
                .zip(self.eigenvector.iter())
                .fold(Complex::new(T::zero(), T::zero()), |a, (&r, &v)| a + v * r);
            acc = acc + (mv - self.eigenvalue * self.eigenvector[i]).norm_sqr();
        }
        acc.sqrt()
    }
}

/// The two relevant eigenpairs `(|t> +- i|w>)/sqrt 2` with eigenvalues
/// `exp(+-2i theta)`. For the global iteration `|w>` is the normalized sum
/// of every non-target item; for the local one it is `|ntt>`.
pub fn eigensystem<T: Real>(g: &Geometry<T>, which: Iteration) -> Result<Vec<EigenPair<T>>> {
    let zero = T::zero();
    let (w, theta) = match which {
        Iteration::Global => {
            let rest = T::of_u64(g.n_items() - 1);
            (
                [
                    zero,
                    (T::of_u64(g.ntt_count()) / rest).sqrt(),
                    (T::of_u64(g.nb_count()) / rest).sqrt(),
                ],
                g.theta1(),
            )
        }
        Iteration::Local => {
            if g.block_size() < 2 {
                return Err(Error::Degenerate);
            }
            ([zero, T::one(), zero], g.theta2())
        }
    };
    let h = T::two().sqrt().recip();
    let pair = |sign: T| EigenPair {
        eigenvalue: Complex::from_polar(T::one(), sign * T::two() * theta),
        eigenvector: [
            Complex::new(h, zero),
            Complex::new(zero, sign * h * w[1]),
            Complex::new(zero, sign * h * w[2]),
        ],
    };
    Ok(vec![pair(T::one()), pair(-T::one())])
}
