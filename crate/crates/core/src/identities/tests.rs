use super::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

fn standard() -> &'static Verifier {
    static V: OnceLock<Verifier> = OnceLock::new();
    V.get_or_init(Verifier::standard)
}

fn gf2(s: &str) -> MPoly {
    MPoly::parse(s, Domain::Gf2).unwrap()
}

#[test]
fn full_suite_passes() {
    let report = standard().run_all();
    for c in &report.checks {
        assert!(c.passed(), "{} failed: {:#?}", c.name, c);
    }
    assert!(report.all_pass);
    assert_eq!(report.checks.len(), CHECK_NAMES.len());
}

#[test]
fn transcribed_system_matches_derivative_of_cu() {
    let t = Transcriptions::standard();
    assert_eq!(derivative_system(), t.f);
    assert_eq!(t.f[0].term_count(), 4);
}

#[test]
fn recorded_scales() {
    let v = standard();
    let scales = |check: &str, rel: &str| {
        let c = v.run(check).unwrap();
        let r = c.find_relation(rel).unwrap().clone();
        assert!(r.holds, "{check}/{rel}");
        (r.computed_scale, r.transcribed_scale)
    };
    assert_eq!(scales("z_elimination", "res_z(F1,F2)"), ("1".into(), "u".into()));
    assert_eq!(scales("z_elimination", "res_z(F1,F3)"), ("1".into(), "1".into()));
    assert_eq!(scales("x4_cancellation", "g*r1 + a*r2"), ("1".into(), "b^2*u".into()));
    assert_eq!(scales("x4_reduction", "L^3*x^4"), ("1".into(), "1".into()));
    assert_eq!(scales("linear_in_x", "L^3*r1 reduced"), ("1".into(), "a^3".into()));
    assert_eq!(scales("y_eliminant", "eliminant"), ("b^10*u".into(), "1".into()));
    assert_eq!(scales("gamma0_curve", "P(g=0)"), ("1".into(), "1".into()));
    assert_eq!(
        scales("degenerate_alpha", "quadratic at degenerate alpha"),
        ("1".into(), "b^2".into())
    );
    assert_eq!(scales("degenerate_alpha", "Q1"), ("b^16*u^4".into(), "1".into()));
}

#[test]
fn resultants_of_the_first_step() {
    let v = standard();
    let t = &v.transcriptions;
    assert_eq!(v.derivation.res12, &gf2("u") * &t.r1);
    assert_eq!(v.derivation.res13, t.r2);
    assert_eq!(v.derivation.res12.divide_exact(&gf2("u")).unwrap(), t.r1);
}

#[test]
fn surface_polynomial_matches_transcription() {
    let v = standard();
    let p = v.surface_polynomial().unwrap();
    assert_eq!(p, v.transcriptions.surface_polynomial());
    assert_eq!(p.degree_in(Var::Y), 6);
    // the full eliminant has degree 1 + 1 + 6
    assert_eq!(v.derivation.eliminant.degree_in(Var::Y), 8);
}

#[test]
fn a2_readings() {
    let v = standard();
    let p = v.surface_polynomial().unwrap();
    let a2 = p.coeff_in(Var::Y, 2);
    assert_eq!(a2, v.transcriptions.p_coeffs[2]);
    assert_ne!(a2, v.transcriptions.a2_printed);
    assert_eq!(p.coeff_in(Var::Y, 1), &gf2("b") * &a2);
}

#[test]
fn printed_h_factor_list_is_reported() {
    let c = standard().run("h_factorization").unwrap();
    assert!(c.passed());
    assert!(c.notes.iter().any(|n| n.contains("does not equal")));
    for k in 2..=6 {
        assert!(c.find_fact(&format!("generator_eta^{k}")).unwrap().holds);
    }
}

#[test]
fn planted_error_in_r1_fails_only_its_check() {
    let mut t = Transcriptions::standard();
    // drop the u*b^6*y term
    t.r1 = &t.r1 + &gf2("u*b^6*y");
    let report = Verifier::new(t).run_all();
    let failed: Vec<_> = report
        .checks
        .iter()
        .filter(|c| !c.passed())
        .map(|c| c.name.as_str())
        .collect();
    assert_eq!(failed, ["z_elimination"]);
    let rel = report
        .check("z_elimination")
        .unwrap()
        .find_relation("res_z(F1,F2)")
        .unwrap();
    assert!(!rel.holds);
    assert_eq!(rel.discrepancy_terms, 1);
    assert_ne!(rel.discrepancy, "0");
}

#[test]
fn planted_errors_are_isolated() {
    type Plant = fn(&mut Transcriptions);
    let cases: [(&str, Plant); 7] = [
        ("x4_cancellation", |t| {
            t.quadratic_in_x = &t.quadratic_in_x + &gf2("b^4*g*y")
        }),
        ("x4_reduction", |t| t.coeff_a = &t.coeff_a + &gf2("g^6*a^9")),
        ("linear_in_x", |t| t.q = &t.q + &gf2("u^7*b^14*y^2")),
        ("h_factorization", |t| {
            // eta^3 -> eta in the second factor
            t.h_factors[1] = MPoly::parse("xi^5*b + e1*xi*a + e1*g", Domain::Gf8).unwrap()
        }),
        ("y_eliminant", |t| t.p_coeffs[5] = &t.p_coeffs[5] + &gf2("a^2*b^5*g^4")),
        ("gamma0_curve", |t| t.gamma0_curve = gf2("u^8*(a^7 + b^7)^2*y*(y + b)")),
        ("degenerate_alpha", |t| {
            t.degenerate_q1 = &t.degenerate_q1 + &gf2("u^10*g^4*b^19*y")
        }),
    ];
    for (name, plant) in cases {
        let mut t = Transcriptions::standard();
        plant(&mut t);
        let report = Verifier::new(t).run_all();
        let failed: Vec<_> = report
            .checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| c.name.as_str())
            .collect();
        assert_eq!(failed, [name], "planted error for {name}");
        assert!(!report.all_pass);
    }
}

#[test]
fn printed_a2_breaks_the_gamma0_curve() {
    let mut t = Transcriptions::standard();
    t.p_coeffs[2] = t.a2_printed.clone();
    t.p_coeffs[1] = &gf2("b") * &t.a2_printed;
    let v = Verifier::new(t);
    let c = v.run("y_eliminant").unwrap();
    assert!(!c.passed());
    assert!(!c.find_relation("A1").unwrap().holds);
}

#[test]
fn failing_relations_carry_nonzero_discrepancy() {
    let mut t = Transcriptions::standard();
    t.coeff_d = gf2("g^4*b^2");
    let c = Verifier::new(t).run("x4_reduction").unwrap();
    for r in &c.relations {
        assert_eq!(r.holds, r.discrepancy == "0");
        assert_eq!(r.holds, r.discrepancy_terms == 0);
    }
    assert!(c.relations.iter().any(|r| !r.holds));
}

#[test]
fn report_json_round_trips() {
    let report = standard().run_all();
    let json = serde_json::to_string_pretty(&report).unwrap();
    let back: IdentityReport = serde_json::from_str(&json).unwrap();
    assert_eq!(serde_json::to_string_pretty(&back).unwrap(), json);
    assert_eq!(back.schema, REPORT_SCHEMA);
}

#[test]
fn x4_structure() {
    let c = standard().run("x4_cancellation").unwrap();
    assert!(c.find_fact("x4_coefficient_vanishes").unwrap().holds);
    let c = standard().run("x4_reduction").unwrap();
    assert!(c.find_fact("B_divisible_by_(u*a*g^2+b^3)^2").unwrap().holds);
    assert!(c.find_fact("D_divisible_by_(a^3+u*b^2*g)^2").unwrap().holds);
}

#[test]
fn q_y4_coefficient() {
    let c = standard().run("linear_in_x").unwrap();
    assert!(c.find_relation("Q y^4 coefficient").unwrap().holds);
}

#[test]
fn degenerate_alpha_q1_has_degree_8() {
    let c = standard().run("degenerate_alpha").unwrap();
    assert!(c.find_fact("Q1_y_degree_is_8").unwrap().holds);
    assert!(c.find_fact("Q1_divisible_by_y(y+b)").unwrap().holds);
    assert!(c.find_relation("leading coefficient").unwrap().holds);
}

#[test]
fn u_conditions_on_concrete_fields() {
    let k3 = FieldCtx::new(3, None).unwrap();
    assert!(verify_u_conditions(&k3, k3.t()).passed());
    let k6 = FieldCtx::new(6, None).unwrap();
    let u = k6.smallest_non_seventh_power().unwrap();
    assert!(verify_u_conditions(&k6, u).passed());
    let c = verify_u_conditions(&k3, Fq::ONE);
    assert!(!c.passed());
    assert!(!c.find_fact("u_not_a_seventh_power").unwrap().holds);
    assert!(c.find_fact("u^2+u+1_nonzero").unwrap().holds);
}

#[test]
fn h_has_no_nonzero_roots_for_non_seventh_powers() {
    let h = Transcriptions::standard().h;
    for m in [3u32, 6] {
        let ctx = FieldCtx::new(m, None).unwrap();
        let u = ctx.smallest_non_seventh_power().unwrap();
        let ev = crate::mpoly::Evaluator::new(&h, &ctx).unwrap();
        for a in ctx.enumerate() {
            for b in ctx.enumerate() {
                for g in ctx.enumerate() {
                    if a.is_zero() && b.is_zero() && g.is_zero() {
                        continue;
                    }
                    let pt = crate::mpoly::Assignment::new()
                        .with(Var::A, a)
                        .with(Var::B, b)
                        .with(Var::G, g)
                        .with(Var::U, u);
                    assert_ne!(ev.eval(&pt).unwrap(), Fq::ZERO, "m={m} ({a},{b},{g})");
                }
            }
        }
    }
}

/// Fast smoke layer beneath the exact checks: both scaled sides of every
/// relation agree at random points of GF(2^6).
#[test]
fn relations_agree_at_random_points() {
    let ctx = FieldCtx::new(6, None).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let report = standard().run_all();
    let mut checked = 0;
    for c in &report.checks {
        for r in &c.relations {
            let (lhs, rhs) = r.sides.as_ref().unwrap();
            let el = crate::mpoly::Evaluator::new(lhs, &ctx).unwrap();
            let er = crate::mpoly::Evaluator::new(rhs, &ctx).unwrap();
            for _ in 0..100 {
                let mut pt = crate::mpoly::Assignment::new();
                for v in Var::ALL {
                    pt.set(v, ctx.elem(rng.gen::<u64>() & ctx.mask()).unwrap());
                }
                assert_eq!(el.eval(&pt).unwrap(), er.eval(&pt).unwrap(), "{}/{}", c.name, r.name);
            }
            checked += 1;
        }
    }
    assert!(checked >= 20);
}

#[test]
fn gf8_factors_vanish_with_xi_as_seventh_root() {
    // In GF(2^6) with u = xi^7 for a concrete xi, each factor's product
    // equals H evaluated directly.
    let ctx = FieldCtx::new(6, None).unwrap();
    let t = Transcriptions::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let h = crate::mpoly::Evaluator::new(&t.h, &ctx).unwrap();
    for _ in 0..50 {
        let r = |rng: &mut ChaCha8Rng| ctx.elem(rng.gen::<u64>() & ctx.mask()).unwrap();
        let (a, b, g, xi) = (r(&mut rng), r(&mut rng), r(&mut rng), r(&mut rng));
        let u = ctx.pow(xi, 7);
        let pt = crate::mpoly::Assignment::new()
            .with(Var::A, a)
            .with(Var::B, b)
            .with(Var::G, g)
            .with(Var::U, u)
            .with(Var::Xi, xi);
        let mut prod = Fq::ONE;
        for f in &t.h_factors {
            prod = ctx.mul(prod, f.eval(&pt, &ctx).unwrap());
        }
        assert_eq!(prod, h.eval(&pt).unwrap());
    }
}
