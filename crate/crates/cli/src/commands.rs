use std::fmt;
use std::process::ExitCode;
use std::time::Instant;

use cuapn::derivative::{
    differential_spectrum, is_permutation, verify_certificate, witness_search, DerivativeError,
    SpectrumReport, Strategy, WitnessCertificate,
};
use cuapn::geometry::{
    bound_check, count_vs_band, cross_validate, point_to_witness, surface_points, Fault,
    GeometryError, SurfaceFilter,
};
use cuapn::gf2m::{parse_hex_u128, FieldCtx, Fq};
use cuapn::identities::{verify_u_conditions, Verifier, CHECK_NAMES, REPORT_SCHEMA};
use serde_json::{json, Value};

use crate::output::{Document, StderrProgress};
use crate::{Cli, Command, FaultArg, FieldArgs};

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Io(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Io(m) => f.write_str(m),
        }
    }
}

impl From<DerivativeError> for Failure {
    fn from(e: DerivativeError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<GeometryError> for Failure {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::Derivative(d) => d.into(),
            other => Failure::Usage(other.to_string()),
        }
    }
}

const VERIFICATION_FAILED: u8 = 3;

struct Field {
    ctx: FieldCtx,
    u: Fq,
    warnings: Vec<String>,
}

impl Field {
    fn params(&self) -> Value {
        json!({
            "m": self.ctx.m(),
            "modulus": format!("{:#x}", self.ctx.modulus()),
            "u": self.u,
        })
    }
}

fn build_ctx(m: u32, modulus: Option<&str>) -> Result<FieldCtx, Failure> {
    let modulus = match modulus {
        Some(s) => Some(
            parse_hex_u128(s).ok_or_else(|| Failure::Usage(format!("cannot parse modulus {s:?}")))?,
        ),
        None => None,
    };
    FieldCtx::new(m, modulus).map_err(|e| Failure::Usage(e.to_string()))
}

/// "auto" picks the smallest non-seventh-power; an explicit u is accepted
/// with a warning when it breaks the family's hypothesis.
fn resolve_u(ctx: &FieldCtx, spec: &str) -> Result<(Fq, Vec<String>), Failure> {
    if spec.eq_ignore_ascii_case("auto") {
        let u = ctx.smallest_non_seventh_power().ok_or_else(|| {
            Failure::Usage(format!("u = auto needs 3 | m, got m = {}", ctx.m()))
        })?;
        return Ok((u, Vec::new()));
    }
    let u = ctx.parse_elem(spec).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut warnings = Vec::new();
    match ctx.is_seventh_power(u) {
        Err(_) => warnings.push("u = 0: C_u is outside the family".to_string()),
        Ok(r) if r.degenerate => {
            warnings.push("3 does not divide m: every u is a seventh power".to_string())
        }
        Ok(r) if r.is_seventh_power => warnings.push(format!(
            "u = {u} is a seventh power: results carry no claim about the family"
        )),
        Ok(_) => {}
    }
    Ok((u, warnings))
}

fn field(args: &FieldArgs) -> Result<Field, Failure> {
    let ctx = build_ctx(args.m, args.modulus.as_deref())?;
    let (u, warnings) = resolve_u(&ctx, &args.u)?;
    Ok(Field { ctx, u, warnings })
}

fn require_family(f: &Field) -> Result<(), Failure> {
    if f.ctx.supports_cu() {
        Ok(())
    } else {
        Err(Failure::Usage(format!("C_u needs 3 | m, got m = {}", f.ctx.m())))
    }
}

fn histogram(r: &SpectrumReport) -> Value {
    json!({
        "kernel_dim_counts": r.histogram,
        "solution_counts": r
            .histogram
            .iter()
            .map(|(k, c)| ((1u64 << k).to_string(), *c))
            .collect::<std::collections::BTreeMap<_, _>>(),
        "triples": r.triples,
    })
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

fn emit(cli: &Cli, mut doc: Document, warnings: &[String], code: u8) -> Result<ExitCode, Failure> {
    doc.warnings.extend_from_slice(warnings);
    if !cli.quiet {
        for w in &doc.warnings {
            eprintln!("warning: {w}");
        }
        eprintln!("{}: {}", doc.schema, doc.verdicts);
    }
    doc.write(cli.out.as_deref())
        .map_err(|e| Failure::Io(format!("cannot write output: {e}")))?;
    Ok(ExitCode::from(code))
}

pub fn run(cli: &Cli) -> Result<ExitCode, Failure> {
    let started = Instant::now();
    let progress = |label| StderrProgress::new(label, !cli.quiet);
    match &cli.command {
        Command::FieldInfo(args) => {
            let f = field(args)?;
            let ctx = &f.ctx;
            let seventh = ctx.is_seventh_power(f.u).ok();
            let verdicts = json!({
                "supports_cu": ctx.supports_cu(),
                "u_is_seventh_power": seventh.map(|s| s.is_seventh_power),
                "seventh_power_test_degenerate": seventh.map(|s| s.degenerate),
            });
            let mut doc = Document::new("field-info/1", f.params(), verdicts, started);
            doc.report = Some(json!({
                "order": ctx.order().to_string(),
                "t": ctx.t(),
                "gf8_generator": ctx.gf8_generator(),
                "smallest_non_seventh_power": ctx.smallest_non_seventh_power(),
            }));
            emit(cli, doc, &f.warnings, 0)
        }
        Command::ApnCheck(args) | Command::Spectrum(args) => {
            let f = field(args)?;
            require_family(&f)?;
            let r = differential_spectrum(f.u, &f.ctx, &progress("spectrum"))?;
            let verdicts = json!({
                "is_apn": r.is_apn,
                "differential_uniformity": r.differential_uniformity(),
                "max_kernel_dim": r.max_kernel_dim,
                "u_is_seventh_power": r.u_is_seventh_power,
            });
            let schema = match cli.command {
                Command::ApnCheck(_) => "apn-check/1",
                _ => "spectrum/1",
            };
            let mut doc = Document::new(schema, f.params(), verdicts, started);
            doc.histogram = Some(histogram(&r));
            emit(cli, doc, &f.warnings, 0)
        }
        Command::Permutation(args) => {
            let f = field(args)?;
            require_family(&f)?;
            let p = is_permutation(f.u, &f.ctx, &progress("permutation"))?;
            let doc = Document::new("permutation/1", f.params(), json!({ "is_permutation": p }), started);
            emit(cli, doc, &f.warnings, 0)
        }
        Command::Witness { field: args, sampled, seed, max_draws } => {
            let f = field(args)?;
            require_family(&f)?;
            let strategy = if *sampled {
                Strategy::Sampled { seed: *seed, max_draws: *max_draws }
            } else {
                Strategy::Exhaustive
            };
            let found = witness_search(f.u, &f.ctx, strategy, &progress("witness"))?;
            let mut params = f.params();
            params["strategy"] = json!(if *sampled { "sampled" } else { "exhaustive" });
            if *sampled {
                params["seed"] = json!(seed);
                params["max_draws"] = json!(max_draws);
            }
            let valid = found.as_ref().map(|c| c.verification.all());
            let verdicts = json!({
                "found": found.is_some(),
                "kernel_dim": found.as_ref().map(|c| c.kernel_dim),
                "solutions": found.as_ref().map(|c| c.solutions.len()),
                "certificate_valid": valid,
                // only an exhaustive miss proves APN
                "is_apn": match (&found, sampled) {
                    (Some(_), _) => Some(false),
                    (None, false) => Some(true),
                    (None, true) => None,
                },
            });
            let mut doc = Document::new("witness/1", params, verdicts, started);
            doc.certificate = found;
            let code = if valid == Some(false) { VERIFICATION_FAILED } else { 0 };
            emit(cli, doc, &f.warnings, code)
        }
        Command::VerifyCert { file } => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", file.display())))?;
            let value: Value = serde_json::from_str(&text)
                .map_err(|e| Failure::Usage(format!("{} is not JSON: {e}", file.display())))?;
            let inner = value.get("certificate").cloned().unwrap_or(value);
            let cert: WitnessCertificate = serde_json::from_value(inner)
                .map_err(|e| Failure::Usage(format!("no certificate in {}: {e}", file.display())))?;
            let (verdicts, ok) = match verify_certificate(&cert) {
                Ok(v) => (json!({ "valid": v.all(), "flags": v }), v.all()),
                Err(e) => (json!({ "valid": false, "error": e.to_string() }), false),
            };
            let params = json!({
                "file": file.display().to_string(),
                "m": cert.field.m,
                "modulus": cert.field.modulus,
                "u": cert.u,
                "triple": cert.triple,
            });
            let doc = Document::new("verify-cert/1", params, verdicts, started);
            emit(cli, doc, &[], if ok { 0 } else { VERIFICATION_FAILED })
        }
        Command::VerifyIdentities { checks, m, modulus, u } => {
            for c in checks {
                if !CHECK_NAMES.contains(&c.as_str()) {
                    return Err(Failure::Usage(format!(
                        "unknown check {c:?}; known: {}",
                        CHECK_NAMES.join(", ")
                    )));
                }
            }
            let verifier = Verifier::standard();
            let mut report = if checks.is_empty() {
                verifier.run_all()
            } else {
                let mut r = verifier.run_all();
                r.checks.retain(|c| checks.contains(&c.name));
                r.all_pass = r.checks.iter().all(|c| c.passed());
                r
            };
            let mut warnings = Vec::new();
            let mut params = json!({ "checks": if checks.is_empty() { to_value(&CHECK_NAMES) } else { to_value(checks) } });
            if let Some(m) = m {
                let ctx = build_ctx(*m, modulus.as_deref())?;
                let (u, w) = resolve_u(&ctx, u)?;
                warnings = w;
                let mut c = verify_u_conditions(&ctx, u);
                c.name = format!("u_conditions(m={m}, u={u})");
                report.checks.push(c);
                report.all_pass = report.checks.iter().all(|c| c.passed());
                params["m"] = json!(m);
                params["u"] = json!(u);
            }
            let verdicts = json!({
                "all_pass": report.all_pass,
                "passed": report.checks.iter().filter(|c| c.passed()).map(|c| c.name.clone()).collect::<Vec<_>>(),
                "failed": report.checks.iter().filter(|c| !c.passed()).map(|c| c.name.clone()).collect::<Vec<_>>(),
            });
            let mut doc = Document::new(REPORT_SCHEMA, params, verdicts, started);
            let ok = report.all_pass;
            doc.report = Some(to_value(&report));
            emit(cli, doc, &warnings, if ok { 0 } else { VERIFICATION_FAILED })
        }
        Command::Surface { field: args, filtered, points, emit_witness, band, delta } => {
            let f = field(args)?;
            require_family(&f)?;
            let filter = if *filtered { SurfaceFilter::ALL } else { SurfaceFilter::NONE };
            let scan = surface_points(f.u, &f.ctx, filter, &progress("surface"))?;
            let mut params = f.params();
            params["filtered"] = json!(filtered);
            let mut verdicts = json!({
                "total": scan.total,
                "kept": scan.points.len(),
                "on_excluded_lines": scan.on_excluded_lines,
                "off_listed_lines": scan.off_listed_lines,
                "on_degree44_curve": scan.on_degree44_curve,
            });
            let mut doc_report = json!({});
            if *band {
                let b = count_vs_band(f.u, &f.ctx, *delta)?;
                params["delta"] = json!(delta);
                verdicts["count_orders_agree"] = json!(b.orders_agree);
                verdicts["band_vacuous"] = json!(b.vacuous);
                doc_report["band"] = to_value(&b);
            }
            if *points {
                doc_report["points"] = to_value(&scan.points);
            }
            let mut code = 0;
            let certificate = if *emit_witness {
                let candidate = scan.points.iter().find(|p| p.passes(SurfaceFilter::ALL));
                match candidate.map(|p| point_to_witness(p, f.u, &f.ctx)) {
                    None => None,
                    Some(Ok(c)) => Some(c),
                    Some(Err(e)) => {
                        // the algebra guarantees success, so this is a bug
                        verdicts["reconstruction_error"] = json!(e.to_string());
                        code = VERIFICATION_FAILED;
                        None
                    }
                }
            } else {
                None
            };
            if *emit_witness {
                verdicts["witness"] = json!(certificate.is_some());
            }
            let mut doc = Document::new("surface/1", params, verdicts, started);
            doc.certificate = certificate;
            if doc_report.as_object().is_some_and(|o| !o.is_empty()) {
                doc.report = Some(doc_report);
            }
            emit(cli, doc, &f.warnings, code)
        }
        Command::CrossValidate { field: args, fault } => {
            let f = field(args)?;
            require_family(&f)?;
            let fault = match fault {
                FaultArg::None => Fault::None,
                FaultArg::SkipHFilter => Fault::SkipHFilter,
                FaultArg::SkipCurveFilter => Fault::SkipCurveFilter,
                FaultArg::PrintedA2 => Fault::PrintedA2,
            };
            let r = cross_validate(f.u, &f.ctx, fault)?;
            let mut params = f.params();
            params["fault"] = to_value(&fault);
            let verdicts = json!({
                "consistent": r.consistent,
                "mismatches": r.mismatch_count,
                "surface_points": r.surface_points,
                "kernel_triples": r.kernel_triples,
            });
            let mut doc = Document::new("cross-validate/1", params, verdicts, started);
            let code = if r.consistent { 0 } else { VERIFICATION_FAILED };
            doc.report = Some(to_value(&r));
            emit(cli, doc, &f.warnings, code)
        }
        Command::Bound { delta, m_from, m_to } => {
            if *delta < 3 {
                return Err(Failure::Usage("--delta must be at least 3".into()));
            }
            if *m_from < 1 || m_from > m_to {
                return Err(Failure::Usage("need 1 <= --m-from <= --m-to".into()));
            }
            let r = bound_check(*delta, *m_from, *m_to);
            let params = json!({ "delta": delta, "m_from": m_from, "m_to": m_to });
            let verdicts = json!({
                "applicability_threshold": r.applicability_threshold,
                "first_applicable_m": r.rows.iter().find(|x| x.applicable).map(|x| x.m),
                "minimal_closing_m": r.minimal_closing_m,
                "minimal_closing_m_in_family": r.minimal_closing_m_in_family,
                "monotone": r.monotone,
                "reference": r.reference,
                "consistent_with_reference": r.consistent_with_reference,
            });
            let mut doc = Document::new(&r.schema, params, verdicts, started);
            doc.report = Some(to_value(&r));
            emit(cli, doc, &[], 0)
        }
    }
}
