//! CSV and JSON encodings of sweep reports.

use annulus_core::analysis::{SweepPoint, SweepReport};
use annulus_core::special_functions::LowerBound;
use serde::Serialize;

use crate::format::{sig9, sig9_opt};

pub const SWEEP_CSV_HEADER: &str = "h,lambda,lambda_dot,fd_check,lower,upper";

/// One row per `h`; fields of failed points are left empty.
pub fn sweep_csv(report: &SweepReport) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for p in &report.points {
        let ok = p.outcome.as_ref().ok();
        let fields = [
            sig9(p.h),
            sig9_opt(ok.map(|r| r.lambda)),
            sig9_opt(ok.map(|r| r.lambda_dot)),
            sig9_opt(p.fd_check),
            sig9_opt(ok.map(|r| r.bounds.lower)),
            sig9_opt(ok.map(|r| r.bounds.upper)),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct JsonFlux<'a> {
    phi: &'a [f64],
    u_n: &'a [f64],
    u_n_sq: &'a [f64],
}

#[derive(Serialize)]
struct JsonPoint<'a> {
    h: f64,
    lambda: Option<f64>,
    lambda_dot: Option<f64>,
    fd_check: Option<f64>,
    lower: Option<f64>,
    upper: Option<f64>,
    lower_kind: Option<&'static str>,
    rellich_defect: Option<f64>,
    flux: Option<JsonFlux<'a>>,
    error: Option<String>,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    a: f64,
    points: Vec<JsonPoint<'a>>,
}

pub fn lower_kind_name(kind: LowerBound) -> &'static str {
    match kind {
        LowerBound::Annulus => "annulus",
        LowerBound::Disc => "disc bound",
    }
}

fn json_point(p: &SweepPoint) -> JsonPoint<'_> {
    match &p.outcome {
        Ok(r) => JsonPoint {
            h: p.h,
            lambda: Some(r.lambda),
            lambda_dot: Some(r.lambda_dot),
            fd_check: p.fd_check,
            lower: Some(r.bounds.lower),
            upper: Some(r.bounds.upper),
            lower_kind: Some(lower_kind_name(r.bounds.lower_kind)),
            rellich_defect: Some(r.rellich_defect),
            flux: Some(JsonFlux {
                phi: &r.flux.phi,
                u_n: &r.flux.u_n,
                u_n_sq: &r.flux.u_n_sq,
            }),
            error: None,
        },
        Err(e) => JsonPoint {
            h: p.h,
            lambda: None,
            lambda_dot: None,
            fd_check: p.fd_check,
            lower: None,
            upper: None,
            lower_kind: None,
            rellich_defect: None,
            flux: None,
            error: Some(e.to_string()),
        },
    }
}

/// The CSV fields plus the lower-bound kind, Rellich defect and the inner-ring flux arrays.
pub fn sweep_json(report: &SweepReport) -> String {
    let doc = JsonReport {
        a: report.a,
        points: report.points.iter().map(json_point).collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("sweep report serializes");
    s.push('\n');
    s
}
