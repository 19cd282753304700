//! Recomputes the reference configurations and lays the results beside the reference values.

use annulus_core::analysis::{analyze_point, flux_monotonicity};
use annulus_core::fem::Resolution;
use annulus_core::special_functions::{mu_first, DEFAULT_ROOT_TOL};
use rayon::prelude::*;
use serde::Serialize;

use crate::format::sig9;
use crate::reference::{ReferenceCase, ANGLES_DEG, CASES, CONCENTRIC};

fn rel_dev(computed: f64, reference: f64) -> f64 {
    (computed - reference) / reference
}

#[derive(Debug, Clone, Serialize)]
pub struct FluxCell {
    pub phi_deg: u32,
    pub computed: f64,
    pub reference: f64,
    pub rel_dev: f64,
    /// `|u_N(φ)| / |u_N(180°)|`, independent of how the eigenfunction is scaled.
    pub profile: f64,
    /// `ref(φ) / ref(180°)`.
    pub reference_profile: f64,
    pub profile_rel_dev: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseValues {
    pub lambda: f64,
    pub lambda_rel_dev: f64,
    pub lambda_dot: f64,
    pub rellich_defect: f64,
    pub flux_monotone: bool,
    pub cells: Vec<FluxCell>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseResult {
    pub a: f64,
    pub h: f64,
    pub reference_lambda: f64,
    pub outcome: Result<CaseValues, String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConcentricRow {
    pub a: f64,
    pub reference: f64,
    pub computed: Result<f64, String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TablesReport {
    pub concentric: Vec<ConcentricRow>,
    pub cases: Vec<CaseResult>,
}

fn run_case(c: &ReferenceCase, resolution: Resolution, tol: f64) -> CaseResult {
    let outcome = analyze_point(c.a, c.h, resolution, tol)
        .map(|p| {
            let far = p.flux.sample_sq(std::f64::consts::PI);
            let cells = ANGLES_DEG
                .iter()
                .zip(&c.u_n_sq)
                .map(|(&deg, &reference)| {
                    let computed = p.flux.sample_sq((deg as f64).to_radians());
                    let profile = (computed / far).sqrt();
                    let reference_profile = reference / c.u_n_sq[12];
                    FluxCell {
                        phi_deg: deg,
                        computed,
                        reference,
                        rel_dev: rel_dev(computed, reference),
                        profile,
                        reference_profile,
                        profile_rel_dev: rel_dev(profile, reference_profile),
                    }
                })
                .collect();
            CaseValues {
                lambda: p.lambda,
                lambda_rel_dev: rel_dev(p.lambda, c.lambda),
                lambda_dot: p.lambda_dot,
                rellich_defect: p.rellich_defect,
                flux_monotone: flux_monotonicity(&p.flux).passed(),
                cells,
            }
        })
        .map_err(|e| e.to_string());
    CaseResult {
        a: c.a,
        h: c.h,
        reference_lambda: c.lambda,
        outcome,
    }
}

/// All reference configurations at `resolution`, computed in parallel, reported in table order.
pub fn run_tables(resolution: Resolution, tol: f64) -> TablesReport {
    let concentric = CONCENTRIC
        .iter()
        .map(|&(a, reference)| ConcentricRow {
            a,
            reference,
            computed: mu_first(a, DEFAULT_ROOT_TOL).map_err(|e| e.to_string()),
        })
        .collect();
    let cases = CASES.par_iter().map(|c| run_case(c, resolution, tol)).collect();
    TablesReport { concentric, cases }
}

/// A row whose `computed` field carries the quoted error message.
fn error_row(quantity: &str, a: f64, h: f64, message: &str) -> Vec<String> {
    let mut fields = vec![quantity.to_string(), sig9(a), sig9(h), String::new()];
    fields.push(format!("\"error: {}\"", message.replace('"', "\"\"")));
    fields.resize(10, String::new());
    fields
}

pub const TABLES_CSV_HEADER: &str =
    "quantity,a,h,phi_deg,computed,reference,rel_dev,profile,reference_profile,profile_rel_dev";

/// Threshold checks over a finished report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TablesSummary {
    pub failed_cases: usize,
    pub max_lambda_dev: f64,
    /// Largest `|rel_dev|` of `u_N²` at 0°, 90° and 180°.
    pub max_flux_dev: f64,
    pub max_profile_dev: f64,
    pub all_monotone: bool,
}

impl TablesReport {
    pub fn summary(&self) -> TablesSummary {
        let mut s = TablesSummary {
            failed_cases: 0,
            max_lambda_dev: 0.0,
            max_flux_dev: 0.0,
            max_profile_dev: 0.0,
            all_monotone: true,
        };
        for c in &self.cases {
            match &c.outcome {
                Err(_) => s.failed_cases += 1,
                Ok(v) => {
                    s.max_lambda_dev = s.max_lambda_dev.max(v.lambda_rel_dev.abs());
                    s.all_monotone &= v.flux_monotone;
                    for cell in &v.cells {
                        if matches!(cell.phi_deg, 0 | 90 | 180) {
                            s.max_flux_dev = s.max_flux_dev.max(cell.rel_dev.abs());
                        }
                        s.max_profile_dev = s.max_profile_dev.max(cell.profile_rel_dev.abs());
                    }
                }
            }
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(TABLES_CSV_HEADER);
        out.push('\n');
        let mut row = |fields: &[String]| {
            out.push_str(&fields.join(","));
            out.push('\n');
        };
        let empty = String::new;
        for c in &self.concentric {
            match &c.computed {
                Ok(mu) => row(&[
                    "lambda0".into(),
                    sig9(c.a),
                    "0".into(),
                    empty(),
                    sig9(*mu),
                    sig9(c.reference),
                    sig9(rel_dev(*mu, c.reference)),
                    empty(),
                    empty(),
                    empty(),
                ]),
                Err(e) => row(&error_row("lambda0", c.a, 0.0, e)),
            }
        }
        for c in &self.cases {
            match &c.outcome {
                Ok(v) => {
                    for cell in &v.cells {
                        row(&[
                            "u_n_sq".into(),
                            sig9(c.a),
                            sig9(c.h),
                            cell.phi_deg.to_string(),
                            sig9(cell.computed),
                            sig9(cell.reference),
                            sig9(cell.rel_dev),
                            sig9(cell.profile),
                            sig9(cell.reference_profile),
                            sig9(cell.profile_rel_dev),
                        ]);
                    }
                    row(&[
                        "lambda".into(),
                        sig9(c.a),
                        sig9(c.h),
                        empty(),
                        sig9(v.lambda),
                        sig9(c.reference_lambda),
                        sig9(v.lambda_rel_dev),
                        empty(),
                        empty(),
                        empty(),
                    ]);
                }
                Err(e) => row(&error_row("lambda", c.a, c.h, e)),
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            #[serde(flatten)]
            report: &'a TablesReport,
            summary: TablesSummary,
        }
        let mut s = serde_json::to_string_pretty(&Doc {
            report: self,
            summary: self.summary(),
        })
        .expect("tables report serializes");
        s.push('\n');
        s
    }
}
