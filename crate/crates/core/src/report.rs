//! Whole-problem analysis and its table/JSON rendering.

use serde::Serialize;

use crate::conditioning::{kappa_structured, kappa_unstructured, ConditionReport, StructuredValue};
use crate::eigensolve::{check_assumptions, solve_all_detailed, AssumptionReport, Reduction};
use crate::error::{Error, Result};
use crate::poly::C64;
use crate::rmf::Rmf;
use crate::structure::{validate_structure_with, StructureTag};
use crate::tolerance::Tolerances;
use crate::verify::structured_oracle;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProblemSummary {
    pub n: usize,
    pub d: usize,
    pub m: usize,
    pub structure: Option<StructureTag>,
    pub poles: Vec<C64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolverSummary {
    pub candidates: usize,
    pub filtered_poles: usize,
    pub infinite: usize,
    pub dropped: usize,
    pub merged: usize,
    pub polynomial_degree: usize,
    pub reduction: Reduction,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Settings {
    pub tolerances: Tolerances,
    pub structure: Option<StructureTag>,
    pub oracle_grid: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenRecord {
    pub index: usize,
    pub lambda: C64,
    pub right_residual: f64,
    pub left_residual: f64,
    pub assumptions: AssumptionReport,
    pub kappa: Option<f64>,
    pub condition: Option<ConditionReport>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub problem: ProblemSummary,
    pub eigenvalues: Vec<EigenRecord>,
    pub settings: Settings,
    pub solver: SolverSummary,
    pub warnings: Vec<String>,
}

/// Solves `g`, checks the assumptions at every eigenvalue and reports `κ` and,
/// when a tag is given or declared, the structured value. `oracle_grid`
/// attaches grid-oracle estimates.
pub fn analyze(
    g: &Rmf,
    tag: Option<StructureTag>,
    oracle_grid: Option<usize>,
    tol: &Tolerances,
) -> Result<AnalysisReport> {
    let tag = tag.or(g.structure());
    if let Some(t) = tag {
        let rep = validate_structure_with(g, t, tol.structure);
        if !rep.ok {
            return Err(Error::StructureMismatch(format!(
                "problem is not {t} (largest coefficient residual {:.3e}, {} weight violations)",
                rep.max_residual(),
                rep.weight_violations.len()
            )));
        }
    }
    let solved = solve_all_detailed(g, tol)?;
    let mut warnings = Vec::new();
    if g.is_degree_deficient() {
        warnings.push("leading coefficient A_d is zero".into());
    }
    if solved.dropped > 0 {
        warnings.push(format!(
            "{} candidate eigenvalues failed refinement and were dropped",
            solved.dropped
        ));
    }
    let mut eigenvalues = Vec::with_capacity(solved.triplets.len());
    for (index, t) in solved.triplets.iter().enumerate() {
        let assumptions = check_assumptions(g, t, tol);
        let mut rec = EigenRecord {
            index,
            lambda: t.lambda,
            right_residual: t.right_residual,
            left_residual: t.left_residual,
            assumptions,
            kappa: None,
            condition: None,
            error: None,
        };
        match kappa_unstructured(g, t, tol) {
            Ok(k) => rec.kappa = Some(k),
            Err(e) => rec.error = Some(e.to_string()),
        }
        if let (Some(t_tag), Some(_)) = (tag, rec.kappa) {
            match kappa_structured(g, t, t_tag, tol) {
                Ok(mut c) => {
                    if let Some(n) = oracle_grid {
                        c.oracle_estimate = Some(structured_oracle(g, t, t_tag, n, tol)?.value);
                    }
                    rec.condition = Some(c);
                }
                Err(e) => rec.error = Some(e.to_string()),
            }
        }
        eigenvalues.push(rec);
    }
    Ok(AnalysisReport {
        problem: ProblemSummary {
            n: g.n(),
            d: g.degree(),
            m: g.num_terms(),
            structure: g.structure(),
            poles: solved.poles.clone(),
        },
        eigenvalues,
        settings: Settings {
            tolerances: *tol,
            structure: tag,
            oracle_grid,
        },
        solver: SolverSummary {
            candidates: solved.candidates,
            filtered_poles: solved.filtered_poles,
            infinite: solved.infinite,
            dropped: solved.dropped,
            merged: solved.merged,
            polynomial_degree: solved.polynomial_degree,
            reduction: solved.reduction,
        },
        warnings,
    })
}

/// `%g`-style formatting with `sig` significant digits.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sig = sig.max(1);
    let exp = x.abs().log10().floor() as i32;
    // Rounding can carry into the next decade.
    let probe = format!("{:.*e}", sig - 1, x);
    let exp = probe
        .split('e')
        .nth(1)
        .and_then(|e| e.parse::<i32>().ok())
        .unwrap_or(exp);
    if (-4..sig as i32).contains(&exp) {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        let s = format!("{:.*e}", sig - 1, x);
        let (mant, e) = s.split_once('e').expect("exponent present");
        let e: i32 = e.parse().expect("integer exponent");
        format!(
            "{}e{}{:02}",
            trim_zeros(mant),
            if e < 0 { '-' } else { '+' },
            e.abs()
        )
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

pub fn fmt_complex(z: C64) -> String {
    let sign = if z.im < 0.0 || (z.im == 0.0 && z.im.is_sign_negative()) {
        '-'
    } else {
        '+'
    };
    format!("{}{}{}i", fmt_sig(z.re, 6), sign, fmt_sig(z.im.abs(), 6))
}

pub fn fmt_structured(v: &StructuredValue) -> String {
    match *v {
        StructuredValue::Exact { value } => fmt_sig(value, 6),
        StructuredValue::Interval { lo, hi } => format!("[{}, {}]", fmt_sig(lo, 6), fmt_sig(hi, 6)),
    }
}

const HEADER: [&str; 7] = [
    "idx", "lambda", "kappa", "kappa_S", "ratio", "equality", "oracle",
];

/// One row per eigenvalue: λ, κ, κ^S (value or `[lo, hi]`), κ^S/κ, equality
/// reason, oracle estimate.
pub fn render_table(r: &AnalysisReport) -> String {
    let mut rows: Vec<[String; 7]> = vec![HEADER.map(String::from)];
    for e in &r.eigenvalues {
        let dash = || "-".to_string();
        let kappa = e.kappa.map_or_else(dash, |k| fmt_sig(k, 6));
        let (ks, ratio, eq, oracle) = match &e.condition {
            Some(c) => (
                fmt_structured(&c.structured),
                fmt_sig(c.ratio(), 6),
                if c.equality.holds {
                    c.equality.reason.describe().to_string()
                } else {
                    "no".into()
                },
                c.oracle_estimate.map_or_else(dash, |o| fmt_sig(o, 6)),
            ),
            None => (dash(), dash(), dash(), dash()),
        };
        rows.push([
            e.index.to_string(),
            fmt_complex(e.lambda),
            kappa,
            ks,
            ratio,
            eq,
            oracle,
        ]);
    }
    let widths: Vec<usize> = (0..7)
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &rows {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(s, &w)| format!("{s:<w$}"))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    let mut notes: Vec<String> = r.warnings.clone();
    for e in &r.eigenvalues {
        if let Some(err) = &e.error {
            notes.push(format!("eigenvalue {}: {err}", e.index));
        }
        for w in &e.assumptions.warnings {
            notes.push(format!("eigenvalue {}: {w}", e.index));
        }
        if let Some(c) = &e.condition {
            for w in &c.warnings {
                notes.push(format!("eigenvalue {}: {w}", e.index));
            }
        }
    }
    if r.eigenvalues.iter().any(|e| {
        e.condition
            .as_ref()
            .is_some_and(|c| c.oracle_estimate.is_some())
    }) {
        notes.push("oracle column: grid estimate, not certified".into());
    }
    for n in notes {
        out.push_str("warning: ");
        out.push_str(&n);
        out.push('\n');
    }
    out
}

pub fn render_json(r: &AnalysisReport) -> String {
    serde_json::to_string_pretty(r).expect("reports always serialize") + "\n"
}
