//! Searching for differences with more than two solutions, and certificates
//! that can be checked without trusting the linear algebra.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    derivative_matrix, eval_cu, kernel_dim, require_cu, system_residual, DerivativeError,
    Progress, Triple,
};
use crate::gf2m::{parse_hex_u128, FieldCtx, FieldSummary, Fq};

pub const CERTIFICATE_SCHEMA: &str = "witness/1";

/// Certificates list every solution, so the kernel must stay small.
pub const MAX_LISTED_KERNEL_DIM: usize = 16;

/// Largest m for an exhaustive scan: the triple encoding must fit a u64.
const EXHAUSTIVE_SEARCH_MAX_M: u32 = 21;

/// Draws per progress report in sampled mode.
const SAMPLE_CHUNK: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// All nonzero differences in encoding order; the first witness wins.
    Exhaustive,
    /// Draw `i` seeds a ChaCha8 stream `i` under `seed` and takes three
    /// masked words as (alpha, beta, gamma); the lowest successful draw wins.
    Sampled { seed: u64, max_draws: u64 },
}

/// How the difference in a certificate was found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "snake_case")]
pub enum SearchRecord {
    Exhaustive { index: u64 },
    Sampled { seed: u64, draw: u64, generator: String },
    SurfacePoint { y: Fq },
    Given,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    /// Every listed solution satisfies the three equations, by direct arithmetic.
    pub solutions_satisfy_system: bool,
    /// C_u(v + a) + C_u(v) + C_u(a) = 0 for every listed v.
    pub derivative_identity: bool,
    pub contains_zero_and_triple: bool,
    pub solutions_distinct: bool,
    /// The solutions are exactly the GF(2)-span of the listed basis.
    pub span_matches_basis: bool,
    pub count_is_two_to_k: bool,
    pub kernel_dim_at_least_2: bool,
}

impl Verification {
    pub fn all(&self) -> bool {
        self.solutions_satisfy_system
            && self.derivative_identity
            && self.contains_zero_and_triple
            && self.solutions_distinct
            && self.span_matches_basis
            && self.count_is_two_to_k
            && self.kernel_dim_at_least_2
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCertificate {
    pub schema: String,
    pub field: FieldSummary,
    pub u: Fq,
    pub triple: Triple,
    pub kernel_dim: usize,
    pub kernel_basis: Vec<Triple>,
    pub solutions: Vec<Triple>,
    pub search: SearchRecord,
    pub verification: Verification,
}

fn span(basis: &[Triple]) -> Vec<Triple> {
    let mut out = vec![Triple::ZERO];
    for b in basis {
        let shifted: Vec<Triple> = out.iter().map(|s| *s + *b).collect();
        out.extend(shifted);
    }
    out
}

fn verify_parts(
    a: Triple,
    u: Fq,
    k: usize,
    basis: &[Triple],
    solutions: &[Triple],
    ctx: &FieldCtx,
) -> Verification {
    let set: BTreeSet<Triple> = solutions.iter().copied().collect();
    let spanned: BTreeSet<Triple> = if basis.len() <= MAX_LISTED_KERNEL_DIM {
        span(basis).into_iter().collect()
    } else {
        BTreeSet::new()
    };
    let ca = eval_cu(a, u, ctx);
    Verification {
        solutions_satisfy_system: solutions
            .iter()
            .all(|v| system_residual(a, *v, u, ctx).is_zero()),
        derivative_identity: solutions
            .iter()
            .all(|v| (eval_cu(*v + a, u, ctx) + eval_cu(*v, u, ctx) + ca).is_zero()),
        contains_zero_and_triple: set.contains(&Triple::ZERO) && set.contains(&a),
        solutions_distinct: set.len() == solutions.len(),
        span_matches_basis: basis.len() == k && spanned == set,
        count_is_two_to_k: k < 64 && solutions.len() as u64 == 1u64 << k,
        kernel_dim_at_least_2: k >= 2,
    }
}

/// Builds and verifies the certificate for a difference with kernel
/// dimension at least 2.
pub fn certificate_for(
    a: Triple,
    u: Fq,
    ctx: &FieldCtx,
    search: SearchRecord,
) -> Result<WitnessCertificate, DerivativeError> {
    if a.is_zero() {
        return Err(DerivativeError::ZeroTriple);
    }
    let mat = derivative_matrix(a, u, ctx);
    let k = mat.kernel_dim();
    if k < 2 {
        return Err(DerivativeError::NotAWitness(k));
    }
    if k > MAX_LISTED_KERNEL_DIM {
        return Err(DerivativeError::TooManySolutions(k));
    }
    let basis: Vec<Triple> = mat
        .kernel_basis()
        .iter()
        .map(|b| Triple::from_bits(b, ctx))
        .collect();
    let mut solutions = span(&basis);
    solutions.sort_unstable();
    let verification = verify_parts(a, u, k, &basis, &solutions, ctx);
    Ok(WitnessCertificate {
        schema: CERTIFICATE_SCHEMA.to_string(),
        field: ctx.summary(),
        u,
        triple: a,
        kernel_dim: k,
        kernel_basis: basis,
        solutions,
        search,
        verification,
    })
}

/// Re-checks a certificate from its stored data alone. Errors mean the
/// certificate is malformed; a well-formed but wrong certificate yields
/// flags that are not all set.
pub fn verify_certificate(cert: &WitnessCertificate) -> Result<Verification, DerivativeError> {
    let modulus = parse_hex_u128(&cert.field.modulus)
        .ok_or_else(|| crate::gf2m::FieldError::BadHex(cert.field.modulus.clone()))?;
    let ctx = FieldCtx::new(cert.field.m, Some(modulus))?;
    let check = |x: Fq| ctx.elem(x.bits()).map(|_| ());
    check(cert.u)?;
    for t in std::iter::once(&cert.triple)
        .chain(&cert.kernel_basis)
        .chain(&cert.solutions)
    {
        for c in t.0 {
            check(c)?;
        }
    }
    if cert.triple.is_zero() {
        return Err(DerivativeError::ZeroTriple);
    }
    let mut v = verify_parts(
        cert.triple,
        cert.u,
        cert.kernel_dim,
        &cert.kernel_basis,
        &cert.solutions,
        &ctx,
    );
    // the stored dimension must also be the true one
    v.count_is_two_to_k &= kernel_dim(cert.triple, cert.u, &ctx) == cert.kernel_dim;
    Ok(v)
}

fn sampled_triple(seed: u64, draw: u64, ctx: &FieldCtx) -> Triple {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(draw);
    let mut next = || ctx.elem(rng.next_u64() & ctx.mask()).expect("masked");
    Triple([next(), next(), next()])
}

/// Looks for a difference with at least four solutions. `Ok(None)` from an
/// exhaustive scan proves APN; from a sampled scan it is inconclusive.
pub fn witness_search(
    u: Fq,
    ctx: &FieldCtx,
    strategy: Strategy,
    progress: &dyn Progress,
) -> Result<Option<WitnessCertificate>, DerivativeError> {
    require_cu(ctx)?;
    let is_witness = |a: Triple| !a.is_zero() && kernel_dim(a, u, ctx) >= 2;
    let found = match strategy {
        Strategy::Exhaustive => {
            if ctx.m() > EXHAUSTIVE_SEARCH_MAX_M {
                return Err(DerivativeError::Infeasible {
                    what: "an exhaustive witness search",
                    m: ctx.m(),
                    limit: EXHAUSTIVE_SEARCH_MAX_M,
                });
            }
            let q = ctx.order() as u64;
            let shift = 2 * ctx.m();
            let done = AtomicU64::new(0);
            (0..q)
                .into_par_iter()
                .find_map_first(|alpha| {
                    let hit = (0..q * q)
                        .map(|rest| (alpha << shift) | rest)
                        .find(|&i| is_witness(Triple::decode(i, ctx)));
                    progress.update(done.fetch_add(1, Ordering::Relaxed) + 1, q);
                    hit
                })
                .map(|index| (Triple::decode(index, ctx), SearchRecord::Exhaustive { index }))
        }
        Strategy::Sampled { seed, max_draws } => {
            let mut found = None;
            let mut start = 0;
            while start < max_draws && found.is_none() {
                let end = (start + SAMPLE_CHUNK).min(max_draws);
                found = (start..end)
                    .into_par_iter()
                    .map(|d| (d, sampled_triple(seed, d, ctx)))
                    .find_first(|(_, a)| is_witness(*a));
                progress.update(end, max_draws);
                start = end;
            }
            found.map(|(draw, a)| {
                let generator = "chacha8: stream = draw index, three masked u64 words".to_string();
                (a, SearchRecord::Sampled { seed, draw, generator })
            })
        }
    };
    found
        .map(|(a, record)| certificate_for(a, u, ctx, record))
        .transpose()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f6() -> (FieldCtx, Fq) {
        let ctx = FieldCtx::new(6, None).unwrap();
        let u = ctx.smallest_non_seventh_power().unwrap();
        (ctx, u)
    }

    #[test]
    fn none_at_m3() {
        let ctx = FieldCtx::new(3, None).unwrap();
        assert!(witness_search(ctx.t(), &ctx, Strategy::Exhaustive, &())
            .unwrap()
            .is_none());
    }

    #[test]
    fn exhaustive_m6_finds_first_witness() {
        let (ctx, u) = f6();
        let cert = witness_search(u, &ctx, Strategy::Exhaustive, &())
            .unwrap()
            .unwrap();
        assert!(cert.verification.all());
        assert!(cert.kernel_dim >= 2);
        assert_eq!(cert.solutions.len(), 1 << cert.kernel_dim);
        let SearchRecord::Exhaustive { index } = cert.search else {
            panic!("wrong record");
        };
        // nothing earlier is a witness
        for i in 1..index {
            assert_eq!(kernel_dim(Triple::decode(i, &ctx), u, &ctx), 1);
        }
        assert_eq!(verify_certificate(&cert).unwrap(), cert.verification);
    }

    #[test]
    fn sampled_is_reproducible() {
        let (ctx, u) = f6();
        let s = Strategy::Sampled { seed: 3, max_draws: 10_000 };
        let a = witness_search(u, &ctx, s, &()).unwrap().unwrap();
        let b = witness_search(u, &ctx, s, &()).unwrap().unwrap();
        assert_eq!(a, b);
        let SearchRecord::Sampled { draw, .. } = a.search else {
            panic!("wrong record");
        };
        assert_eq!(sampled_triple(3, draw, &ctx), a.triple);
    }

    #[test]
    fn tampered_certificates_fail() {
        let (ctx, u) = f6();
        let cert = witness_search(u, &ctx, Strategy::Exhaustive, &())
            .unwrap()
            .unwrap();
        let mut bad = cert.clone();
        bad.solutions[1].0[0] += Fq::ONE;
        let v = verify_certificate(&bad).unwrap();
        assert!(!v.all());
        assert!(!v.solutions_satisfy_system);

        let mut bad = cert.clone();
        bad.solutions.pop();
        assert!(!verify_certificate(&bad).unwrap().all());

        let mut bad = cert.clone();
        bad.u += Fq::ONE;
        assert!(!verify_certificate(&bad).unwrap().all());

        let mut bad = cert;
        bad.field.m = 5;
        assert!(verify_certificate(&bad).is_err());
    }

    #[test]
    fn certificate_rejects_apn_differences() {
        let ctx = FieldCtx::new(3, None).unwrap();
        let a = Triple::new(Fq::ONE, Fq::ZERO, Fq::ZERO);
        assert_eq!(
            certificate_for(a, ctx.t(), &ctx, SearchRecord::Given),
            Err(DerivativeError::NotAWitness(1))
        );
    }
}
