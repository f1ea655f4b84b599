//! The derivative system of `C_u` as an GF(2)-linear map.
//!
//! For a difference `a = (alpha, beta, gamma)` the equation
//! `C_u(v + a) + C_u(v) + C_u(a) = 0` is
//!
//! ```text
//! alpha x^2 + alpha^2 x + u gamma y^2 + u beta^2 z = 0
//! beta y^2 + beta^2 y + u alpha z^2 + u gamma^2 x = 0
//! gamma z^2 + gamma^2 z + u beta x^2 + u alpha^2 y = 0
//! ```
//!
//! Squaring is GF(2)-linear, so the solutions form a subspace of
//! GF(2)^(3m) whose dimension `k` gives `2^k` solutions. `C_u` is APN
//! exactly when `k = 1` for every nonzero `a`.
//!
//! Vectors of GF(2)^(3m) list the polynomial-basis coordinates of x, then
//! y, then z. Triples are encoded as `alpha << 2m | beta << m | gamma`, so
//! the encoding order is lexicographic in (alpha, beta, gamma).

mod bitmatrix;
mod witness;

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2m::{FieldCtx, FieldError, FieldSummary, Fq};

pub use bitmatrix::{rank_u64, BitMatrix, Bits, MAX_DIM};
pub use witness::{
    certificate_for, verify_certificate, witness_search, SearchRecord, Strategy, Verification,
    WitnessCertificate, CERTIFICATE_SCHEMA, MAX_LISTED_KERNEL_DIM,
};

/// Largest m for exhaustive spectra and permutation checks (q^3 <= 2^27).
pub const EXHAUSTIVE_MAX_M: u32 = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivativeError {
    #[error("the difference (0, 0, 0) is not allowed here")]
    ZeroTriple,
    #[error("C_u needs 3 | m, got m = {0}")]
    NotMultipleOf3(u32),
    #[error("{what} is infeasible for m = {m} (limit m <= {limit}); use sampled mode")]
    Infeasible { what: &'static str, m: u32, limit: u32 },
    #[error("kernel dimension {0} is too large to list its solutions")]
    TooManySolutions(usize),
    #[error("triple has kernel dimension {0}, not a witness")]
    NotAWitness(usize),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A difference (alpha, beta, gamma) or a point (x, y, z) of GF(q)^3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Triple(pub [Fq; 3]);

impl Triple {
    pub const ZERO: Triple = Triple([Fq::ZERO; 3]);

    pub fn new(a: Fq, b: Fq, c: Fq) -> Self {
        Triple([a, b, c])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    /// (a, b, c) -> (b, c, a)
    pub fn rotate(&self) -> Self {
        Triple([self.0[1], self.0[2], self.0[0]])
    }

    /// `alpha << 2m | beta << m | gamma`; requires 3m <= 64.
    pub fn encode(&self, m: u32) -> u64 {
        debug_assert!(3 * m <= 64);
        (self.0[0].bits() << (2 * m)) | (self.0[1].bits() << m) | self.0[2].bits()
    }

    pub fn decode(index: u64, ctx: &FieldCtx) -> Self {
        let m = ctx.m();
        let mask = ctx.mask();
        let f = |bits: u64| ctx.elem(bits & mask).expect("masked");
        Triple([f(index >> (2 * m)), f(index >> m), f(index)])
    }

    /// Coordinates in GF(2)^(3m).
    pub fn to_bits(&self, m: u32) -> Bits {
        let mut out = [0; 3];
        for (k, c) in self.0.iter().enumerate() {
            or_at(&mut out, c.bits(), k * m as usize);
        }
        out
    }

    pub fn from_bits(v: &Bits, ctx: &FieldCtx) -> Self {
        let m = ctx.m() as usize;
        let f = |k: usize| ctx.elem(extract(v, k * m, m)).expect("masked");
        Triple([f(0), f(1), f(2)])
    }
}

impl std::ops::Add for Triple {
    type Output = Triple;

    fn add(self, rhs: Triple) -> Triple {
        Triple([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1], self.0[2] + rhs.0[2]])
    }
}

impl std::fmt::Display for Triple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

fn or_at(v: &mut Bits, value: u64, offset: usize) {
    let (w, s) = (offset / 64, offset % 64);
    v[w] |= value << s;
    if s > 0 && w + 1 < 3 {
        v[w + 1] |= value >> (64 - s);
    }
}

fn extract(v: &Bits, offset: usize, len: usize) -> u64 {
    let (w, s) = (offset / 64, offset % 64);
    let mut out = v[w] >> s;
    if s > 0 && w + 1 < 3 {
        out |= v[w + 1] << (64 - s);
    }
    if len == 64 {
        out
    } else {
        out & ((1u64 << len) - 1)
    }
}

/// Direct evaluation of `C_u(x, y, z)`.
pub fn eval_cu(v: Triple, u: Fq, ctx: &FieldCtx) -> Triple {
    let [x, y, z] = v.0;
    let cube = |w: Fq| ctx.mul(ctx.square(w), w);
    Triple([
        cube(x) + ctx.mul(u, ctx.mul(ctx.square(y), z)),
        cube(y) + ctx.mul(u, ctx.mul(x, ctx.square(z))),
        cube(z) + ctx.mul(u, ctx.mul(ctx.square(x), y)),
    ])
}

/// Left-hand sides of the derivative system at `v` for the difference `a`.
pub fn system_residual(a: Triple, v: Triple, u: Fq, ctx: &FieldCtx) -> Triple {
    let [al, be, ga] = a.0;
    let [x, y, z] = v.0;
    let sq = |w: Fq| ctx.square(w);
    let m = |p: Fq, q: Fq| ctx.mul(p, q);
    Triple([
        m(al, sq(x)) + m(sq(al), x) + m(u, m(ga, sq(y))) + m(u, m(sq(be), z)),
        m(be, sq(y)) + m(sq(be), y) + m(u, m(al, sq(z))) + m(u, m(sq(ga), x)),
        m(ga, sq(z)) + m(sq(ga), z) + m(u, m(be, sq(x))) + m(u, m(sq(al), y)),
    ])
}

/// Images of the 3m basis vectors, as field triples, in column order.
fn column_images(a: Triple, u: Fq, ctx: &FieldCtx, mut sink: impl FnMut(usize, [u64; 3])) {
    let m = ctx.m() as usize;
    let [al, be, ga] = a.0;
    // s * t^k for k < len
    let run = |s: Fq, len: usize| -> [u64; 128] {
        let mut out = [0u64; 128];
        let mut v = s.bits();
        for slot in out.iter_mut().take(len) {
            *slot = v;
            v = ctx.xtime(v);
        }
        out
    };
    let sq = |w: Fq| ctx.square(w);
    let us = |w: Fq| ctx.mul(u, w);
    let long = 2 * m - 1;
    // coefficients of the squared variable, indexed by t^(2i)
    let (a1, b1, g1) = (run(al, long), run(be, long), run(ga, long));
    let (ua, ub, ug) = (run(us(al), long), run(us(be), long), run(us(ga), long));
    // coefficients of the plain variable, indexed by t^i
    let (a2, b2, g2) = (run(sq(al), m), run(sq(be), m), run(sq(ga), m));
    let (ua2, ub2, ug2) = (run(us(sq(al)), m), run(us(sq(be)), m), run(us(sq(ga)), m));
    for i in 0..m {
        sink(i, [a1[2 * i] ^ a2[i], ug2[i], ub[2 * i]]);
        sink(m + i, [ug[2 * i], b1[2 * i] ^ b2[i], ua2[i]]);
        sink(2 * m + i, [ub2[i], ua[2 * i], g1[2 * i] ^ g2[i]]);
    }
}

/// Matrix of the derivative system: column `j` is the image of basis vector `j`.
pub fn derivative_matrix(a: Triple, u: Fq, ctx: &FieldCtx) -> BitMatrix {
    let n = 3 * ctx.m() as usize;
    let mut cols = vec![[0u64; 3]; n];
    column_images(a, u, ctx, |j, img| {
        let mut b = [0; 3];
        for (k, c) in img.iter().enumerate() {
            or_at(&mut b, *c, k * ctx.m() as usize);
        }
        cols[j] = b;
    });
    BitMatrix::from_columns(&cols)
}

/// Kernel dimension of the derivative system at `a`, using a packed
/// single-word elimination when 3m <= 64.
pub fn kernel_dim(a: Triple, u: Fq, ctx: &FieldCtx) -> usize {
    let m = ctx.m();
    if 3 * m > 64 {
        return derivative_matrix(a, u, ctx).kernel_dim();
    }
    let mut cols = [0u64; 64];
    column_images(a, u, ctx, |j, img| {
        cols[j] = (img[0] << (2 * m)) | (img[1] << m) | img[2];
    });
    // packed columns put x in the high bits; rank does not depend on the order
    3 * m as usize - rank_u64(&cols[..3 * m as usize])
}

/// Number of solutions of the derivative system for a nonzero difference.
pub fn solution_count(a: Triple, u: Fq, ctx: &FieldCtx) -> Result<u128, DerivativeError> {
    if a.is_zero() {
        return Err(DerivativeError::ZeroTriple);
    }
    let k = kernel_dim(a, u, ctx);
    1u128.checked_shl(k as u32).ok_or(DerivativeError::TooManySolutions(k))
}

/// Work reports from long-running scans.
pub trait Progress: Sync {
    fn update(&self, done: u64, total: u64);
}

impl Progress for () {
    fn update(&self, _: u64, _: u64) {}
}

pub(crate) fn require_cu(ctx: &FieldCtx) -> Result<(), DerivativeError> {
    if ctx.supports_cu() {
        Ok(())
    } else {
        Err(DerivativeError::NotMultipleOf3(ctx.m()))
    }
}

fn require_exhaustive(ctx: &FieldCtx, what: &'static str) -> Result<(), DerivativeError> {
    if ctx.m() > EXHAUSTIVE_MAX_M {
        return Err(DerivativeError::Infeasible {
            what,
            m: ctx.m(),
            limit: EXHAUSTIVE_MAX_M,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub field: FieldSummary,
    pub u: Fq,
    pub u_is_seventh_power: bool,
    /// Number of nonzero differences scanned, q^3 - 1.
    pub triples: u64,
    /// Kernel dimension -> number of nonzero differences attaining it.
    pub histogram: BTreeMap<u32, u64>,
    pub max_kernel_dim: u32,
    pub max_solutions: u64,
    pub is_apn: bool,
}

impl SpectrumReport {
    pub fn differential_uniformity(&self) -> u64 {
        self.max_solutions
    }
}

/// Exact kernel-dimension histogram over all nonzero differences.
pub fn differential_spectrum(
    u: Fq,
    ctx: &FieldCtx,
    progress: &dyn Progress,
) -> Result<SpectrumReport, DerivativeError> {
    require_cu(ctx)?;
    require_exhaustive(ctx, "an exhaustive spectrum")?;
    let q = ctx.order() as u64;
    let done = AtomicU64::new(0);
    let hist = (0..q)
        .into_par_iter()
        .map(|alpha| {
            let mut local = [0u64; 3 * EXHAUSTIVE_MAX_M as usize + 1];
            for rest in 0..q * q {
                let index = (alpha << (2 * ctx.m())) | rest;
                if index == 0 {
                    continue;
                }
                local[kernel_dim(Triple::decode(index, ctx), u, ctx)] += 1;
            }
            progress.update(done.fetch_add(1, Ordering::Relaxed) + 1, q);
            local
        })
        .reduce(
            || [0u64; 3 * EXHAUSTIVE_MAX_M as usize + 1],
            |mut x, y| {
                for (a, b) in x.iter_mut().zip(y) {
                    *a += b;
                }
                x
            },
        );
    let histogram: BTreeMap<u32, u64> = hist
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(k, &c)| (k as u32, c))
        .collect();
    let max_kernel_dim = *histogram.keys().next_back().expect("q^3 - 1 > 0 triples");
    Ok(SpectrumReport {
        field: ctx.summary(),
        u,
        u_is_seventh_power: u.is_zero() || ctx.is_seventh_power(u)?.is_seventh_power,
        triples: q * q * q - 1,
        histogram,
        max_kernel_dim,
        max_solutions: 1 << max_kernel_dim,
        is_apn: max_kernel_dim == 1,
    })
}

pub fn is_apn(u: Fq, ctx: &FieldCtx) -> Result<bool, DerivativeError> {
    Ok(differential_spectrum(u, ctx, &())?.is_apn)
}

pub fn differential_uniformity(u: Fq, ctx: &FieldCtx) -> Result<u64, DerivativeError> {
    Ok(differential_spectrum(u, ctx, &())?.max_solutions)
}

/// Whether `C_u` is a bijection of GF(q)^3, by marking every image.
pub fn is_permutation(u: Fq, ctx: &FieldCtx, progress: &dyn Progress) -> Result<bool, DerivativeError> {
    require_cu(ctx)?;
    require_exhaustive(ctx, "a permutation check")?;
    let q = ctx.order() as u64;
    let m = ctx.m();
    let seen: Vec<AtomicU64> = (0..(q * q * q).div_ceil(64)).map(|_| AtomicU64::new(0)).collect();
    let collision = AtomicBool::new(false);
    let done = AtomicU64::new(0);
    (0..q).into_par_iter().for_each(|x| {
        for rest in 0..q * q {
            if collision.load(Ordering::Relaxed) {
                return;
            }
            let v = Triple::decode((x << (2 * m)) | rest, ctx);
            let img = eval_cu(v, u, ctx).encode(m);
            let b = 1u64 << (img % 64);
            if seen[(img / 64) as usize].fetch_or(b, Ordering::Relaxed) & b != 0 {
                collision.store(true, Ordering::Relaxed);
                return;
            }
        }
        progress.update(done.fetch_add(1, Ordering::Relaxed) + 1, q);
    });
    Ok(!collision.load(Ordering::Relaxed))
}
