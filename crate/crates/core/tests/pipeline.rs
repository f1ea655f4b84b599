use cuapn::derivative::{
    certificate_for, eval_cu, kernel_dim, verify_certificate, witness_search, SearchRecord,
    Strategy, Triple, WitnessCertificate,
};
use cuapn::geometry::{point_to_witness, surface_points, SurfaceFilter};
use cuapn::gf2m::{FieldCtx, Fq};

fn field(m: u32) -> (FieldCtx, Fq) {
    let ctx = FieldCtx::new(m, None).unwrap();
    let u = ctx.smallest_non_seventh_power().unwrap();
    (ctx, u)
}

/// C_u is homogeneous, so scaling a difference keeps its kernel dimension;
/// with gamma scaled to 1 the witness must appear on the surface.
#[test]
fn exhaustive_witness_lies_on_the_surface() {
    let (ctx, u) = field(6);
    let cert = witness_search(u, &ctx, Strategy::Exhaustive, &()).unwrap().unwrap();
    assert!(cert.verification.all());
    let [a, b, g] = cert.triple.0;
    assert!(!g.is_zero());
    let scaled = Triple::new(ctx.div(a, g).unwrap(), ctx.div(b, g).unwrap(), Fq::ONE);
    assert_eq!(kernel_dim(scaled, u, &ctx), cert.kernel_dim);
    let scan = surface_points(u, &ctx, SurfaceFilter::NONE, &()).unwrap();
    assert!(scan
        .points
        .iter()
        .any(|p| p.alpha == scaled.0[0] && p.beta == scaled.0[1]));
}

#[test]
fn surface_witness_matches_direct_certificate() {
    let (ctx, u) = field(6);
    let scan = surface_points(u, &ctx, SurfaceFilter::ALL, &()).unwrap();
    let p = &scan.points[0];
    let from_surface = point_to_witness(p, u, &ctx).unwrap();
    let direct = certificate_for(p.triple(), u, &ctx, SearchRecord::Given).unwrap();
    assert_eq!(from_surface.kernel_dim, direct.kernel_dim);
    assert_eq!(from_surface.solutions, direct.solutions);
    assert_eq!(from_surface.kernel_basis.len(), direct.kernel_basis.len());
}

#[test]
fn certificate_json_round_trip() {
    let (ctx, u) = field(9);
    let strategy = Strategy::Sampled { seed: 7, max_draws: 100_000 };
    let cert = witness_search(u, &ctx, strategy, &()).unwrap().unwrap();
    let text = serde_json::to_string(&cert).unwrap();
    let back: WitnessCertificate = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string(&back).unwrap(), text);
    assert!(verify_certificate(&back).unwrap().all());
}

#[test]
fn solutions_collide_under_c_u() {
    let (ctx, u) = field(6);
    let cert = witness_search(u, &ctx, Strategy::Exhaustive, &()).unwrap().unwrap();
    let a = cert.triple;
    let image = |x: Triple| eval_cu(x + a, u, &ctx) + eval_cu(x, u, &ctx);
    let target = image(Triple::ZERO);
    for s in &cert.solutions {
        assert_eq!(image(*s), target);
    }
}
