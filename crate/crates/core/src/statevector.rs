//! Dense simulation over all `N` amplitudes.
//!
//! Blocks are the contiguous index ranges `[m*b, (m+1)*b)`; when `N` and
//! `K` are powers of two the block index is the high-order bits of the item
//! index. Amplitudes stay real throughout, so a `Vec<T>` is the whole state.
//!
//! Reductions are evaluated over fixed-size chunks whose partial sums are
//! combined in index order, so results are bit-identical regardless of the
//! rayon thread count.

use std::io::{Read, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{Geometry, Iteration, ReducedState, Schedule};
use crate::scalar::Real;

/// Default amplitude cap (128 MiB of `f64`).
pub const DEFAULT_CAP: u64 = 1 << 24;

const SUM_CHUNK: usize = 1 << 14;

/// Magic bytes opening a binary state dump.
pub const PGSV_MAGIC: &[u8; 4] = b"PGSV";
pub const PGSV_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct FullState<T> {
    amplitudes: Vec<T>,
    target_index: u64,
    geometry: Geometry<T>,
}

fn ordered_sum<T: Real>(xs: &[T]) -> T {
    if xs.len() <= SUM_CHUNK {
        return xs.iter().fold(T::zero(), |a, &x| a + x);
    }
    let partials: Vec<T> = xs
        .par_chunks(SUM_CHUNK)
        .map(|c| c.iter().fold(T::zero(), |a, &x| a + x))
        .collect();
    partials.into_iter().fold(T::zero(), |a, x| a + x)
}

impl<T: Real> FullState<T> {
    /// Uniform superposition `1/sqrt(N)` on every item.
    pub fn uniform(g: &Geometry<T>, target_index: u64, cap: u64) -> Result<Self> {
        if g.n_items() > cap {
            return Err(Error::CapExceeded {
                n_items: g.n_items(),
                cap,
            });
        }
        if target_index >= g.n_items() {
            return Err(Error::BadIndex {
                index: target_index,
                n_items: g.n_items(),
            });
        }
        let a = T::of_u64(g.n_items()).sqrt().recip();
        Ok(Self {
            amplitudes: vec![a; g.n_items() as usize],
            target_index,
            geometry: *g,
        })
    }

    /// Wrap existing amplitudes. The length must equal `N`.
    pub fn from_amplitudes(g: &Geometry<T>, target_index: u64, amplitudes: Vec<T>) -> Result<Self> {
        if amplitudes.len() as u64 != g.n_items() {
            return Err(Error::Format(format!(
                "expected {} amplitudes, got {}",
                g.n_items(),
                amplitudes.len()
            )));
        }
        if target_index >= g.n_items() {
            return Err(Error::BadIndex {
                index: target_index,
                n_items: g.n_items(),
            });
        }
        Ok(Self {
            amplitudes,
            target_index,
            geometry: *g,
        })
    }

    pub fn amplitudes(&self) -> &[T] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [T] {
        &mut self.amplitudes
    }

    pub fn target_index(&self) -> u64 {
        self.target_index
    }

    pub fn geometry(&self) -> &Geometry<T> {
        &self.geometry
    }

    pub fn target_block(&self) -> u64 {
        self.target_index / self.geometry.block_size()
    }

    pub fn norm_sqr(&self) -> T {
        let sq: Vec<T> = self.amplitudes.iter().map(|&a| a * a).collect();
        ordered_sum(&sq)
    }

    /// `I_t`: negate the target amplitude.
    pub fn apply_oracle(&mut self) {
        let t = self.target_index as usize;
        self.amplitudes[t] = -self.amplitudes[t];
    }

    /// `-I_s1`: reflect every amplitude about the global mean.
    pub fn apply_global_diffusion(&mut self) {
        let twice_mean =
            T::two() * ordered_sum(&self.amplitudes) / T::of_u64(self.geometry.n_items());
        self.amplitudes
            .par_iter_mut()
            .with_min_len(SUM_CHUNK)
            .for_each(|a| *a = twice_mean - *a);
    }

    /// `-I_s2` on every block independently.
    pub fn apply_local_diffusion(&mut self) {
        let b = self.geometry.block_size() as usize;
        let inv_b = T::of_u64(b as u64).recip();
        self.amplitudes.par_chunks_mut(b).for_each(|block| {
            let twice_mean = T::two() * block.iter().fold(T::zero(), |a, &x| a + x) * inv_b;
            for a in block.iter_mut() {
                *a = twice_mean - *a;
            }
        });
    }

    pub fn apply_global(&mut self) {
        self.apply_oracle();
        self.apply_global_diffusion();
    }

    /// Oracle then blockwise diffusion. Mirrors the reduced model in
    /// treating single-item blocks as the identity.
    pub fn apply_local(&mut self) {
        if self.geometry.block_size() == 1 {
            return;
        }
        self.apply_oracle();
        self.apply_local_diffusion();
    }

    pub fn apply(&mut self, which: Iteration) {
        match which {
            Iteration::Global => self.apply_global(),
            Iteration::Local => self.apply_local(),
        }
    }

    /// Project onto the three amplitude classes.
    ///
    /// Each class is represented by its mean. The returned residual is the
    /// largest spread (max minus min) found inside any class, which is zero
    /// exactly when the state lies in the invariant subspace.
    pub fn reduce(&self) -> (ReducedState<T>, T) {
        let b = self.geometry.block_size() as usize;
        let t = self.target_index as usize;
        let tb = t / b * b;

        let mut ntt = ClassStats::default();
        for (i, &a) in self.amplitudes[tb..tb + b].iter().enumerate() {
            if tb + i != t {
                ntt.push(a);
            }
        }
        let mut nb = ClassStats::default();
        for &a in self.amplitudes[..tb]
            .iter()
            .chain(&self.amplitudes[tb + b..])
        {
            nb.push(a);
        }
        let state = ReducedState::new(self.amplitudes[t], ntt.mean(), nb.mean());
        (state, ntt.spread().max(nb.spread()))
    }

    /// Probability of each block outcome when only block qubits are measured.
    pub fn block_distribution(&self) -> Vec<T> {
        let b = self.geometry.block_size() as usize;
        self.amplitudes
            .par_chunks(b)
            .map(|blk| blk.iter().fold(T::zero(), |acc, &a| acc + a * a))
            .collect()
    }

    /// Binary dump: `"PGSV"`, version `u32`, `N` `u64`, `K` `u64`, target
    /// `u64`, then `N` little-endian `f64` amplitudes.
    pub fn write_pgsv<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(PGSV_MAGIC)?;
        w.write_all(&PGSV_VERSION.to_le_bytes())?;
        w.write_all(&self.geometry.n_items().to_le_bytes())?;
        w.write_all(&self.geometry.n_blocks().to_le_bytes())?;
        w.write_all(&self.target_index.to_le_bytes())?;
        for a in &self.amplitudes {
            let x = a.to_f64().expect("finite amplitude");
            w.write_all(&x.to_le_bytes())?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_pgsv<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != PGSV_MAGIC {
            return Err(Error::Format(format!("bad magic {magic:?}")));
        }
        let mut word = [0u8; 4];
        r.read_exact(&mut word)?;
        let version = u32::from_le_bytes(word);
        if version != PGSV_VERSION {
            return Err(Error::Format(format!("unsupported version {version}")));
        }
        let read_u64 = |r: &mut R| -> Result<u64> {
            let mut buf = [0u8; 8];
            r.read_exact(&mut buf)?;
            Ok(u64::from_le_bytes(buf))
        };
        let n = read_u64(&mut r)?;
        let k = read_u64(&mut r)?;
        let target = read_u64(&mut r)?;
        let g = Geometry::new(n, k)?;
        let mut amplitudes = Vec::with_capacity(n as usize);
        let mut buf = [0u8; 8];
        for _ in 0..n {
            r.read_exact(&mut buf)?;
            amplitudes.push(T::of(f64::from_le_bytes(buf)));
        }
        Self::from_amplitudes(&g, target, amplitudes)
    }
}

#[derive(Debug, Clone, Copy)]
struct ClassStats<T> {
    sum: T,
    min: T,
    max: T,
    count: u64,
}

impl<T: Real> Default for ClassStats<T> {
    fn default() -> Self {
        Self {
            sum: T::zero(),
            min: T::infinity(),
            max: T::neg_infinity(),
            count: 0,
        }
    }
}

impl<T: Real> ClassStats<T> {
    fn push(&mut self, a: T) {
        self.sum = self.sum + a;
        self.min = self.min.min(a);
        self.max = self.max.max(a);
        self.count += 1;
    }

    fn mean(&self) -> T {
        if self.count == 0 {
            T::zero()
        } else {
            self.sum / T::of_u64(self.count)
        }
    }

    fn spread(&self) -> T {
        if self.count == 0 {
            T::zero()
        } else {
            self.max - self.min
        }
    }
}

/// Full-state analogue of [`crate::model::run_schedule`].
pub fn run_schedule_full<T: Real>(
    g: &Geometry<T>,
    target_index: u64,
    sch: &Schedule,
    cap: u64,
) -> Result<FullState<T>> {
    let mut s = FullState::uniform(g, target_index, cap)?;
    for it in sch.iterations() {
        s.apply(it);
    }
    Ok(s)
}
