//! Rational points of the surface `P(alpha, beta, 1, y) = 0` and their link
//! to witnesses.
//!
//! A point with `alpha beta y (y + beta) (alpha + u^2 beta^3) != 0` yields a
//! solution of the derivative system at `(alpha, beta, 1)` outside
//! `{0, (alpha, beta, 1)}`: x comes from the relation linear in x and z from
//! the first equation. The surface polynomial is taken from the transcribed
//! coefficients, which the identity suite checks against the elimination.

mod bound;

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::OnceLock;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::derivative::{
    certificate_for, kernel_dim, system_residual, DerivativeError, Progress, SearchRecord, Triple,
    WitnessCertificate, EXHAUSTIVE_MAX_M,
};
use crate::gf2m::{FieldCtx, FieldError, FieldSummary, Fq};
use crate::identities::{formulas, Transcriptions};
use crate::mpoly::{Assignment, Evaluator, MPoly, Var};

pub use bound::{bound_check, BoundReport, BoundRow, BOUND_SCHEMA, REFERENCE_M, REFERENCE_NOTE};

/// Largest m for the two-order point count.
pub const COUNT_MAX_M: u32 = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("point {0} violates the reconstruction precondition: {1}")]
    Precondition(Triple, &'static str),
    #[error("reconstruction failed at {0}: {1}")]
    Reconstruction(Triple, String),
    #[error("u must be nonzero")]
    ZeroU,
    #[error(transparent)]
    Derivative(#[from] DerivativeError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A point (alpha, beta, 1, y) of the surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub alpha: Fq,
    pub beta: Fq,
    pub y: Fq,
    /// alpha beta y (y + beta) = 0
    pub on_excluded_lines: bool,
    /// alpha + u^2 beta^3 = 0
    pub on_degree44_curve: bool,
}

impl SurfacePoint {
    pub fn triple(&self) -> Triple {
        Triple::new(self.alpha, self.beta, Fq::ONE)
    }

    pub fn passes(&self, filter: SurfaceFilter) -> bool {
        !(filter.lines && self.on_excluded_lines) && !(filter.curve && self.on_degree44_curve)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SurfaceFilter {
    pub lines: bool,
    pub curve: bool,
}

impl SurfaceFilter {
    pub const NONE: SurfaceFilter = SurfaceFilter { lines: false, curve: false };
    pub const ALL: SurfaceFilter = SurfaceFilter { lines: true, curve: true };
}

/// Which surface polynomial to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coefficients {
    #[default]
    Verified,
    /// A2 read literally as printed (with the stray u^8), A1 = b * A2.
    PrintedA2,
}

/// A polynomial in alpha, beta with gamma = 1 and u fixed.
#[derive(Debug, Clone)]
struct Bivariate {
    terms: Vec<(usize, usize, Fq)>,
}

impl Bivariate {
    fn new(p: &MPoly, u: Fq, ctx: &FieldCtx) -> Self {
        let mut acc: std::collections::BTreeMap<(usize, usize), Fq> = Default::default();
        for (e, c) in p.terms() {
            assert!(c.in_gf2(), "surface coefficients lie in GF(2)");
            for v in [Var::X, Var::Y, Var::Z, Var::Xi] {
                assert_eq!(e[v.index()], 0, "unexpected variable {}", v.name());
            }
            let key = (e[Var::A.index()] as usize, e[Var::B.index()] as usize);
            let w = ctx.pow(u, e[Var::U.index()] as u128);
            *acc.entry(key).or_default() += w;
        }
        Bivariate {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|((a, b), c)| (a, b, c)).collect(),
        }
    }

    fn max_degrees(&self) -> (usize, usize) {
        self.terms
            .iter()
            .fold((0, 0), |(x, y), (a, b, _)| (x.max(*a), y.max(*b)))
    }

    fn eval(&self, pa: &[Fq], pb: &[Fq], ctx: &FieldCtx) -> Fq {
        self.terms
            .iter()
            .fold(Fq::ZERO, |acc, (a, b, c)| acc + ctx.mul(*c, ctx.mul(pa[*a], pb[*b])))
    }
}

fn powers(x: Fq, n: usize, ctx: &FieldCtx) -> Vec<Fq> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(Fq::ONE);
    for k in 1..=n {
        out.push(ctx.mul(out[k - 1], x));
    }
    out
}

fn transcriptions() -> &'static Transcriptions {
    static T: OnceLock<Transcriptions> = OnceLock::new();
    T.get_or_init(Transcriptions::standard)
}

/// The surface polynomial and the reconstruction data, specialized at
/// gamma = 1 and a concrete u.
#[derive(Debug, Clone)]
pub struct SurfaceModel<'a> {
    ctx: &'a FieldCtx,
    u: Fq,
    p: Vec<Bivariate>,
    q: Vec<Bivariate>,
    h: Bivariate,
    max_a: usize,
    max_b: usize,
}

impl<'a> SurfaceModel<'a> {
    pub fn new(u: Fq, ctx: &'a FieldCtx, coefficients: Coefficients) -> Result<Self, GeometryError> {
        if u.is_zero() {
            return Err(GeometryError::ZeroU);
        }
        let t = transcriptions();
        let mut pc = t.p_coeffs.clone();
        if coefficients == Coefficients::PrintedA2 {
            pc[1] = &formulas::gf2("b") * &t.a2_printed;
            pc[2] = t.a2_printed.clone();
        }
        let g1 = |p: &MPoly| p.substitute(Var::G, &MPoly::one(p.domain())).expect("same domain");
        let p: Vec<Bivariate> = pc.iter().map(|c| Bivariate::new(&g1(c), u, ctx)).collect();
        let q: Vec<Bivariate> = g1(&t.q)
            .coefficients_in(Var::Y)
            .iter()
            .map(|c| Bivariate::new(c, u, ctx))
            .collect();
        let h = Bivariate::new(&g1(&t.h), u, ctx);
        let (max_a, max_b) = p
            .iter()
            .chain(&q)
            .chain(std::iter::once(&h))
            .map(Bivariate::max_degrees)
            .fold((0, 0), |(x, y), (a, b)| (x.max(a), y.max(b)));
        Ok(SurfaceModel { ctx, u, p, q, h, max_a, max_b })
    }

    fn power_tables(&self, alpha: Fq, beta: Fq) -> (Vec<Fq>, Vec<Fq>) {
        (powers(alpha, self.max_a, self.ctx), powers(beta, self.max_b, self.ctx))
    }

    /// Coefficients A0..A6 of P(alpha, beta, 1, y) as a polynomial in y.
    pub fn coefficients(&self, alpha: Fq, beta: Fq) -> [Fq; 7] {
        let (pa, pb) = self.power_tables(alpha, beta);
        let mut out = [Fq::ZERO; 7];
        for (slot, c) in out.iter_mut().zip(&self.p) {
            *slot = c.eval(&pa, &pb, self.ctx);
        }
        out
    }

    pub fn horner(&self, coeffs: &[Fq; 7], y: Fq) -> Fq {
        coeffs
            .iter()
            .rev()
            .fold(Fq::ZERO, |acc, c| self.ctx.mul(acc, y) + *c)
    }

    pub fn h(&self, alpha: Fq, beta: Fq) -> Fq {
        let (pa, pb) = self.power_tables(alpha, beta);
        self.h.eval(&pa, &pb, self.ctx)
    }

    fn q_at(&self, alpha: Fq, beta: Fq, y: Fq) -> Fq {
        let (pa, pb) = self.power_tables(alpha, beta);
        self.q
            .iter()
            .rev()
            .fold(Fq::ZERO, |acc, c| self.ctx.mul(acc, y) + c.eval(&pa, &pb, self.ctx))
    }

    pub fn point(&self, alpha: Fq, beta: Fq, y: Fq) -> SurfacePoint {
        let ctx = self.ctx;
        let curve = alpha + ctx.mul(ctx.square(self.u), ctx.pow(beta, 3));
        SurfacePoint {
            alpha,
            beta,
            y,
            on_excluded_lines: alpha.is_zero() || beta.is_zero() || y.is_zero() || y == beta,
            on_degree44_curve: curve.is_zero(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceScan {
    pub field: FieldSummary,
    pub u: Fq,
    pub filter: SurfaceFilter,
    /// All affine points with gamma = 1.
    pub total: u64,
    pub on_excluded_lines: u64,
    /// Points with alpha beta y (y + beta) = 0 on none of the lines
    /// alpha = 0 = y, alpha = 0 = y + beta, beta = 0 = y.
    pub off_listed_lines: u64,
    pub on_degree44_curve: u64,
    /// Points passing the filter, in (alpha, beta, y) order.
    pub points: Vec<SurfacePoint>,
}

fn require_small(ctx: &FieldCtx, what: &'static str, limit: u32) -> Result<(), GeometryError> {
    if !ctx.supports_cu() {
        return Err(DerivativeError::NotMultipleOf3(ctx.m()).into());
    }
    if ctx.m() > limit {
        return Err(DerivativeError::Infeasible { what, m: ctx.m(), limit }.into());
    }
    Ok(())
}

/// Every point of the surface in the gamma = 1 chart.
pub fn surface_points(
    u: Fq,
    ctx: &FieldCtx,
    filter: SurfaceFilter,
    progress: &dyn Progress,
) -> Result<SurfaceScan, GeometryError> {
    scan(&SurfaceModel::new(u, ctx, Coefficients::Verified)?, filter, progress)
}

fn scan(model: &SurfaceModel, filter: SurfaceFilter, progress: &dyn Progress) -> Result<SurfaceScan, GeometryError> {
    let ctx = model.ctx;
    require_small(ctx, "surface enumeration", EXHAUSTIVE_MAX_M)?;
    let done = AtomicU64::new(0);
    let q = ctx.order() as u64;
    let per_alpha: Vec<(u64, u64, u64, u64, Vec<SurfacePoint>)> = ctx
        .enumerate()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|alpha| {
            let (mut total, mut lines, mut off, mut curve) = (0, 0, 0, 0);
            let mut kept = Vec::new();
            for beta in ctx.enumerate() {
                let c = model.coefficients(alpha, beta);
                for y in ctx.enumerate() {
                    if !model.horner(&c, y).is_zero() {
                        continue;
                    }
                    let p = model.point(alpha, beta, y);
                    total += 1;
                    lines += p.on_excluded_lines as u64;
                    let listed = (alpha.is_zero() && (y.is_zero() || y == beta))
                        || (beta.is_zero() && y.is_zero());
                    off += (p.on_excluded_lines && !listed) as u64;
                    curve += p.on_degree44_curve as u64;
                    if p.passes(filter) {
                        kept.push(p);
                    }
                }
            }
            progress.update(done.fetch_add(1, Ordering::Relaxed) + 1, q);
            (total, lines, off, curve, kept)
        })
        .collect();
    let mut out = SurfaceScan {
        field: ctx.summary(),
        u: model.u,
        filter,
        total: 0,
        on_excluded_lines: 0,
        off_listed_lines: 0,
        on_degree44_curve: 0,
        points: Vec::new(),
    };
    for (t, l, o, c, pts) in per_alpha {
        out.total += t;
        out.on_excluded_lines += l;
        out.off_listed_lines += o;
        out.on_degree44_curve += c;
        out.points.extend(pts);
    }
    Ok(out)
}

/// Rebuilds the solution (x, y, z) belonging to a filtered surface point
/// and certifies the triple (alpha, beta, 1).
pub fn point_to_witness(p: &SurfacePoint, u: Fq, ctx: &FieldCtx) -> Result<WitnessCertificate, GeometryError> {
    let model = SurfaceModel::new(u, ctx, Coefficients::Verified)?;
    reconstruct(&model, p, Guards::ALL)
}

/// Preconditions checked before reconstructing; the negative controls
/// switch some of them off.
#[derive(Debug, Clone, Copy)]
struct Guards {
    h: bool,
    curve: bool,
}

impl Guards {
    const ALL: Guards = Guards { h: true, curve: true };
}

fn reconstruct(model: &SurfaceModel, p: &SurfacePoint, guards: Guards) -> Result<WitnessCertificate, GeometryError> {
    let ctx = model.ctx;
    let u = model.u;
    let a = p.triple();
    let fresh = model.point(p.alpha, p.beta, p.y);
    if fresh.on_excluded_lines {
        return Err(GeometryError::Precondition(a, "alpha beta y (y + beta) = 0"));
    }
    if guards.curve && fresh.on_degree44_curve {
        return Err(GeometryError::Precondition(a, "alpha + u^2 beta^3 = 0"));
    }
    let h = model.h(p.alpha, p.beta);
    if guards.h && h.is_zero() {
        return Err(GeometryError::Precondition(a, "H(alpha, beta, 1) = 0"));
    }
    let fail = |msg: String| GeometryError::Reconstruction(a, msg);
    // u^3 beta^6 H x = Q(y)
    let denom = ctx.mul(ctx.mul(ctx.pow(u, 3), ctx.pow(p.beta, 6)), h);
    let x = ctx
        .div(model.q_at(p.alpha, p.beta, p.y), denom)
        .map_err(|e| fail(e.to_string()))?;
    // z from alpha x^2 + alpha^2 x + u gamma y^2 + u beta^2 z = 0
    let lhs = ctx.mul(p.alpha, ctx.square(x)) + ctx.mul(ctx.square(p.alpha), x) + ctx.mul(u, ctx.square(p.y));
    let z = ctx
        .div(lhs, ctx.mul(u, ctx.square(p.beta)))
        .map_err(|e| fail(e.to_string()))?;
    let v = Triple::new(x, p.y, z);
    if !system_residual(a, v, u, ctx).is_zero() {
        return Err(fail(format!("{v} does not solve the system")));
    }
    if v.is_zero() || v == a {
        return Err(fail(format!("{v} is a trivial solution")));
    }
    let cert = certificate_for(a, u, ctx, SearchRecord::SurfacePoint { y: p.y })?;
    if !cert.verification.all() || !cert.solutions.contains(&v) {
        return Err(fail("certificate does not verify".into()));
    }
    Ok(cert)
}

/// Deliberate defects for the negative controls of [`cross_validate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fault {
    #[default]
    None,
    /// Reconstruct without checking H(alpha, beta, 1) != 0.
    SkipHFilter,
    /// Keep points on alpha + u^2 beta^3 = 0.
    SkipCurveFilter,
    /// Use the literal printed A2.
    PrintedA2,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub kind: String,
    pub alpha: Fq,
    pub beta: Fq,
    pub y: Option<Fq>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossReport {
    pub field: FieldSummary,
    pub u: Fq,
    pub fault: Fault,
    /// Filtered surface points, each of which must yield a witness.
    pub surface_points: u64,
    pub witnesses_built: u64,
    /// Triples (alpha, beta, 1) with alpha beta (alpha + u^2 beta^3) != 0
    /// and kernel dimension >= 2, each of which must give a surface point.
    pub kernel_triples: u64,
    pub kernel_triples_on_surface: u64,
    pub mismatch_count: u64,
    /// The first few mismatches.
    pub mismatches: Vec<Mismatch>,
    pub consistent: bool,
}

const LISTED_MISMATCHES: usize = 20;

/// Checks both directions between surface points and witnesses.
pub fn cross_validate(u: Fq, ctx: &FieldCtx, fault: Fault) -> Result<CrossReport, GeometryError> {
    require_small(ctx, "cross-validation", EXHAUSTIVE_MAX_M)?;
    let coefficients = match fault {
        Fault::PrintedA2 => Coefficients::PrintedA2,
        _ => Coefficients::Verified,
    };
    let model = SurfaceModel::new(u, ctx, coefficients)?;
    let filter = SurfaceFilter {
        lines: true,
        curve: fault != Fault::SkipCurveFilter,
    };
    let scanned = scan(&model, filter, &())?;
    let mut mismatches = Vec::new();

    // surface -> kernel
    let guards = Guards {
        h: fault != Fault::SkipHFilter,
        curve: fault != Fault::SkipCurveFilter,
    };
    let results: Vec<(SurfacePoint, Result<WitnessCertificate, GeometryError>)> = scanned
        .points
        .par_iter()
        .map(|p| (*p, reconstruct(&model, p, guards)))
        .collect();
    let mut witnesses_built = 0;
    for (p, r) in results {
        match r {
            Ok(cert) if cert.kernel_dim >= 2 => witnesses_built += 1,
            Ok(cert) => mismatches.push(Mismatch {
                kind: "surface_point_without_witness".into(),
                alpha: p.alpha,
                beta: p.beta,
                y: Some(p.y),
                detail: format!("kernel dimension {}", cert.kernel_dim),
            }),
            Err(e) => mismatches.push(Mismatch {
                kind: "surface_point_without_witness".into(),
                alpha: p.alpha,
                beta: p.beta,
                y: Some(p.y),
                detail: e.to_string(),
            }),
        }
    }

    // kernel -> surface
    let pairs: Vec<(Fq, Fq)> = ctx
        .enumerate()
        .flat_map(|a| ctx.enumerate().map(move |b| (a, b)))
        .collect();
    let kernel_side: Vec<(Fq, Fq, bool)> = pairs
        .par_iter()
        .filter_map(|&(alpha, beta)| {
            let p0 = model.point(alpha, beta, Fq::ONE);
            if alpha.is_zero() || beta.is_zero() || p0.on_degree44_curve {
                return None;
            }
            let a = Triple::new(alpha, beta, Fq::ONE);
            if kernel_dim(a, u, ctx) < 2 {
                return None;
            }
            let cert = certificate_for(a, u, ctx, SearchRecord::Given).ok()?;
            let c = model.coefficients(alpha, beta);
            let hit = cert
                .solutions
                .iter()
                .map(|s| s.0[1])
                .any(|y| !y.is_zero() && y != beta && model.horner(&c, y).is_zero());
            Some((alpha, beta, hit))
        })
        .collect();
    let kernel_triples = kernel_side.len() as u64;
    let mut on_surface = 0;
    for (alpha, beta, hit) in kernel_side {
        if hit {
            on_surface += 1;
        } else {
            mismatches.push(Mismatch {
                kind: "witness_off_surface".into(),
                alpha,
                beta,
                y: None,
                detail: "no solution y outside {0, beta} is a root of P".into(),
            });
        }
    }

    let mismatch_count = mismatches.len() as u64;
    mismatches.truncate(LISTED_MISMATCHES);
    Ok(CrossReport {
        field: ctx.summary(),
        u,
        fault,
        surface_points: scanned.points.len() as u64,
        witnesses_built,
        kernel_triples,
        kernel_triples_on_surface: on_surface,
        mismatch_count,
        mismatches,
        consistent: mismatch_count == 0,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BandReport {
    pub field: FieldSummary,
    pub u: Fq,
    pub delta: u32,
    /// Count by (alpha, beta) blocks with the univariate specialization.
    pub count: u64,
    /// Count by y-major order with the full trivariate polynomial.
    pub count_y_major: u64,
    pub orders_agree: bool,
    pub q_squared: String,
    /// Conservative half-width (delta-1)(delta-2) ceil(q^(3/2)) + 5 ceil(delta^(13/3)) q.
    pub half_width: String,
    pub lower: String,
    pub upper: String,
    pub inside_band: bool,
    /// The half-width reaches q^2, so the lower end says nothing.
    pub vacuous: bool,
    pub caveat: String,
}

/// Exact affine point count in the gamma = 1 chart, compared with the
/// Lang-Weil type band for an absolutely irreducible surface of degree delta.
pub fn count_vs_band(u: Fq, ctx: &FieldCtx, delta: u32) -> Result<BandReport, GeometryError> {
    require_small(ctx, "the two-order point count", COUNT_MAX_M)?;
    let model = SurfaceModel::new(u, ctx, Coefficients::Verified)?;
    let count = scan(&model, SurfaceFilter::NONE, &())?.total;

    let p = transcriptions()
        .surface_polynomial()
        .substitute(Var::G, &MPoly::one(crate::mpoly::Domain::Gf2))
        .expect("same domain");
    let ev = Evaluator::new(&p, ctx).map_err(|e| GeometryError::Reconstruction(Triple::ZERO, e.to_string()))?;
    let ys: Vec<Fq> = ctx.enumerate().collect();
    let count_y_major: u64 = ys
        .par_iter()
        .map(|&y| {
            let mut n = 0;
            for beta in ctx.enumerate() {
                for alpha in ctx.enumerate() {
                    let pt = Assignment::new()
                        .with(Var::A, alpha)
                        .with(Var::B, beta)
                        .with(Var::Y, y)
                        .with(Var::U, u);
                    n += ev.eval(&pt).expect("all variables assigned").is_zero() as u64;
                }
            }
            n
        })
        .sum();

    let q = BigInt::from(ctx.order());
    let q2 = &q * &q;
    let half_width = bound::half_width(&q, delta);
    let lower = &q2 - &half_width;
    let upper = &q2 + &half_width;
    let c = BigInt::from(count);
    Ok(BandReport {
        field: ctx.summary(),
        u,
        delta,
        count,
        count_y_major,
        orders_agree: count == count_y_major,
        q_squared: q2.to_string(),
        inside_band: lower <= c && c <= upper,
        vacuous: half_width >= q2,
        half_width: half_width.to_string(),
        lower: lower.to_string(),
        upper: upper.to_string(),
        caveat: "the band applies to an absolutely irreducible component of degree at most delta; \
                 the count here is of the whole surface, so the comparison is informational"
            .into(),
    })
}
