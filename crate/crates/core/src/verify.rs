//! Cross-checks between enumeration, sum sides, product side and the PBW
//! count, with JSON reports.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::characters::{char_l_sum, char_n_sum, char_product_without, char_rect_sum, pbw_census, Formula};
use crate::error::{EngineError, Result};
use crate::lie_data::{build_root_system, AlgebraSpec, Family, RootSystemData};
use crate::qp_enum::{census_to_series, enumerate_census, WeightSpec};
use crate::series::TruncatedSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Mismatch,
    Aborted,
}

/// First disagreeing coefficient, in canonical key order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MismatchReport {
    pub q: u32,
    pub y: Vec<u32>,
    pub lhs_formula: Formula,
    pub rhs_formula: Formula,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub task: String,
    pub spec: AlgebraSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<WeightSpec>,
    #[serde(rename = "M")]
    pub truncation: u32,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_mismatch: Option<MismatchReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub term_counts: BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl VerificationReport {
    fn new(task: String, spec: AlgebraSpec, weight: Option<WeightSpec>, truncation: u32) -> Self {
        VerificationReport {
            task,
            spec,
            weight,
            truncation,
            status: Status::Verified,
            first_mismatch: None,
            error: None,
            term_counts: BTreeMap::new(),
            timing_ms: None,
        }
    }

    fn aborted(mut self, e: EngineError) -> Self {
        self.status = Status::Aborted;
        self.error = Some(e.to_string());
        self
    }

    pub fn is_verified(&self) -> bool {
        self.status == Status::Verified
    }
}

/// Compares `lhs` against each right-hand side in turn, building every
/// right-hand side only when it is needed.
fn compare_chain(
    report: &mut VerificationReport,
    lhs_formula: Formula,
    lhs: &TruncatedSeries,
    rhs: &[(Formula, &dyn Fn() -> Result<TruncatedSeries>)],
) -> Result<()> {
    report.term_counts.insert(lhs_formula.name().into(), lhs.len());
    for (formula, build) in rhs {
        let series = build()?;
        report.term_counts.insert(formula.name().into(), series.len());
        if let Some(mm) = lhs.first_difference(&series) {
            report.status = Status::Mismatch;
            report.first_mismatch = Some(MismatchReport {
                q: mm.key.q,
                y: mm.key.y.to_vec(),
                lhs_formula,
                rhs_formula: *formula,
                lhs: mm.lhs.to_string(),
                rhs: mm.rhs.to_string(),
            });
            return Ok(());
        }
    }
    Ok(())
}

/// Product side against the `N` sum side, the PBW count and the generalized
/// Verma census.
pub fn verify_identity(rs: &RootSystemData, truncation: u32) -> VerificationReport {
    verify_identity_with(rs, truncation, None)
}

/// [`verify_identity`] with one root left out of the product side.
pub fn verify_identity_with(rs: &RootSystemData, truncation: u32, drop_root: Option<usize>) -> VerificationReport {
    let mut report = VerificationReport::new(format!("identity/{}/M={truncation}", rs.spec), rs.spec, None, truncation);
    if let Some(d) = drop_root {
        if d >= rs.positive_roots.len() {
            return report.aborted(EngineError::InvalidArgument(format!("no positive root with index {d}")));
        }
    }
    let product = char_product_without(rs, truncation, drop_root);
    let n_sum = || char_n_sum(rs, truncation);
    let pbw = || pbw_census(rs, truncation);
    let census = || Ok(census_to_series(&enumerate_census(rs, &WeightSpec::GenericVerma, truncation)?));
    let rhs: [(Formula, &dyn Fn() -> Result<TruncatedSeries>); 3] =
        [(Formula::NSum, &n_sum), (Formula::Pbw, &pbw), (Formula::Census, &census)];
    match compare_chain(&mut report, Formula::Product, &product, &rhs) {
        Ok(()) => report,
        Err(e) => report.aborted(e),
    }
}

/// Census of the basis for `spec` against its closed-form character.
pub fn verify_basis(rs: &RootSystemData, spec: &WeightSpec, truncation: u32) -> VerificationReport {
    let report = VerificationReport::new(
        format!("basis/{}/{spec}/M={truncation}", rs.spec),
        rs.spec,
        Some(*spec),
        truncation,
    );
    let mut report = report;
    let census = match enumerate_census(rs, spec, truncation) {
        Ok(c) => census_to_series(&c),
        Err(e) => return report.aborted(e),
    };
    let (formula, closed): (Formula, Box<dyn Fn() -> Result<TruncatedSeries>>) = match *spec {
        WeightSpec::GenericVerma => (Formula::NSum, Box::new(move || char_n_sum(rs, truncation))),
        WeightSpec::Standard { k } | WeightSpec::AltE { k } => {
            (Formula::LSum, Box::new(move || char_l_sum(rs, k, truncation)))
        }
        WeightSpec::Rectangular { k0, j, kj } => {
            (Formula::RectSum, Box::new(move || char_rect_sum(rs, k0, j, kj, truncation)))
        }
    };
    match compare_chain(&mut report, Formula::Census, &census, &[(formula, closed.as_ref())]) {
        Ok(()) => report,
        Err(e) => report.aborted(e),
    }
}

/// What a manifest row checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowMode {
    Identity,
    Verma,
    Standard,
    Rectangular,
    AltE,
}

/// One manifest row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestRow {
    pub family: Family,
    pub rank: usize,
    pub mode: RowMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k0: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kj: Option<u32>,
    #[serde(rename = "M")]
    pub truncation: u32,
    /// Leave this root out of the product side (identity rows only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drop_root: Option<usize>,
}

impl ManifestRow {
    pub fn identity(family: Family, rank: usize, truncation: u32) -> Self {
        ManifestRow { family, rank, mode: RowMode::Identity, k: None, k0: None, j: None, kj: None, truncation, drop_root: None }
    }

    pub fn basis(family: Family, rank: usize, weight: WeightSpec, truncation: u32) -> Self {
        let mut row = Self::identity(family, rank, truncation);
        match weight {
            WeightSpec::GenericVerma => row.mode = RowMode::Verma,
            WeightSpec::Standard { k } => {
                row.mode = RowMode::Standard;
                row.k = Some(k);
            }
            WeightSpec::AltE { k } => {
                row.mode = RowMode::AltE;
                row.k = Some(k);
            }
            WeightSpec::Rectangular { k0, j, kj } => {
                row.mode = RowMode::Rectangular;
                row.k0 = Some(k0);
                row.j = Some(j);
                row.kj = Some(kj);
            }
        }
        row
    }

    /// The weight this row names, if any; missing parameters are errors.
    pub fn weight(&self) -> Result<Option<WeightSpec>> {
        let need = |v: Option<u32>, name: &str| {
            v.ok_or_else(|| EngineError::InvalidArgument(format!("{:?} row needs {name}", self.mode)))
        };
        Ok(match self.mode {
            RowMode::Identity => None,
            RowMode::Verma => Some(WeightSpec::GenericVerma),
            RowMode::Standard => Some(WeightSpec::Standard { k: need(self.k, "k")? }),
            RowMode::AltE => Some(WeightSpec::AltE { k: need(self.k, "k")? }),
            RowMode::Rectangular => Some(WeightSpec::Rectangular {
                k0: need(self.k0, "k0")?,
                j: self.j.ok_or_else(|| EngineError::InvalidArgument("rectangular row needs j".into()))?,
                kj: need(self.kj, "kj")?,
            }),
        })
    }

    /// Checks that the row names a valid algebra and weight.
    pub fn validate(&self) -> Result<()> {
        let rs = build_root_system(AlgebraSpec::new(self.family, self.rank)?)?;
        if let Some(w) = self.weight()? {
            w.validate(&rs)?;
        }
        if self.drop_root.is_some() && self.mode != RowMode::Identity {
            return Err(EngineError::InvalidArgument("drop_root applies to identity rows only".into()));
        }
        Ok(())
    }
}

/// Parses a JSON manifest and validates every row.
pub fn parse_manifest(text: &str) -> Result<Vec<ManifestRow>> {
    let rows: Vec<ManifestRow> =
        serde_json::from_str(text).map_err(|e| EngineError::InvalidArgument(format!("malformed manifest: {e}")))?;
    for (i, row) in rows.iter().enumerate() {
        row.validate().map_err(|e| EngineError::InvalidArgument(format!("manifest row {i}: {e}")))?;
    }
    Ok(rows)
}

/// Runs one row.
pub fn run_row(row: &ManifestRow, timing: bool) -> VerificationReport {
    let start = Instant::now();
    let built = AlgebraSpec::new(row.family, row.rank).and_then(build_root_system);
    let mut report = match (built, row.weight()) {
        (Ok(rs), Ok(None)) => verify_identity_with(&rs, row.truncation, row.drop_root),
        (Ok(rs), Ok(Some(w))) => verify_basis(&rs, &w, row.truncation),
        (Err(e), _) | (_, Err(e)) => {
            let spec = AlgebraSpec::new(row.family, row.rank).unwrap_or_else(|_| AlgebraSpec::new(Family::A, 1).unwrap());
            VerificationReport::new(format!("invalid/{}{}", row.family, row.rank), spec, None, row.truncation)
                .aborted(e)
        }
    };
    if timing {
        report.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    report
}

/// Runs every row; individual failures do not stop the suite. Reports come
/// back in manifest order.
pub fn run_suite(rows: &[ManifestRow], timing: bool) -> Vec<VerificationReport> {
    rows.par_iter().with_max_len(1).map(|row| run_row(row, timing)).collect()
}

/// Whether every report verified.
pub fn suite_passed(reports: &[VerificationReport]) -> bool {
    reports.iter().all(VerificationReport::is_verified)
}

pub fn reports_to_json(reports: &[VerificationReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialize")
}

/// The desk-scale suite: identity rows for every family, standard,
/// rectangular and alternative-E basis rows.
pub fn default_manifest() -> Vec<ManifestRow> {
    use Family::*;
    let mut rows = Vec::new();
    for (f, l) in [(A, 1), (A, 2), (A, 3), (B, 2), (B, 3), (C, 3), (G, 2), (D, 4), (F, 4)] {
        rows.push(ManifestRow::identity(f, l, 10));
    }
    rows.push(ManifestRow::identity(E, 6, 6));
    rows.push(ManifestRow::identity(E, 7, 6));
    rows.push(ManifestRow::identity(E, 8, 5));
    let standard = [
        (A, 1, 1, 12),
        (A, 1, 2, 12),
        (A, 1, 3, 12),
        (A, 2, 1, 10),
        (A, 2, 2, 10),
        (B, 2, 1, 8),
        (G, 2, 1, 8),
        (D, 4, 1, 7),
        (D, 4, 2, 7),
        (F, 4, 1, 7),
        (E, 6, 1, 5),
    ];
    for (f, l, k, m) in standard {
        rows.push(ManifestRow::basis(f, l, WeightSpec::Standard { k }, m));
    }
    for (k0, j, kj) in [(1, 1, 1), (1, 3, 1), (1, 4, 1), (2, 1, 1)] {
        rows.push(ManifestRow::basis(D, 4, WeightSpec::Rectangular { k0, j, kj }, 6));
    }
    rows.push(ManifestRow::basis(E, 6, WeightSpec::Rectangular { k0: 1, j: 6, kj: 1 }, 5));
    for k in [1, 2] {
        rows.push(ManifestRow::basis(E, 6, WeightSpec::AltE { k }, 5));
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(f: Family, l: usize) -> RootSystemData {
        build_root_system(AlgebraSpec::new(f, l).unwrap()).unwrap()
    }

    #[test]
    fn a1_identity() {
        let r = verify_identity(&rs(Family::A, 1), 10);
        assert_eq!(r.status, Status::Verified, "{r:?}");
        assert!(r.first_mismatch.is_none());
        assert_eq!(r.term_counts.len(), 4);
    }

    #[test]
    fn zero_truncation_verifies() {
        for (f, l) in [(Family::G, 2), (Family::E, 7)] {
            assert!(verify_identity(&rs(f, l), 0).is_verified());
            assert!(verify_basis(&rs(f, l), &WeightSpec::Standard { k: 1 }, 0).is_verified());
        }
    }

    #[test]
    fn dropped_root_is_reported() {
        let r = verify_identity_with(&rs(Family::B, 2), 4, Some(3));
        assert_eq!(r.status, Status::Mismatch);
        let mm = r.first_mismatch.unwrap();
        assert_eq!(mm.q, 1);
        assert_eq!(mm.lhs_formula, Formula::Product);
        assert_eq!(mm.rhs_formula, Formula::NSum);
        let deficit: i64 = mm.rhs.parse::<i64>().unwrap() - mm.lhs.parse::<i64>().unwrap();
        assert_eq!(deficit, 1);
    }

    #[test]
    fn rogers_ramanujan_basis() {
        let a1 = rs(Family::A, 1);
        let r = verify_basis(&a1, &WeightSpec::Standard { k: 1 }, 12);
        assert!(r.is_verified());
    }

    #[test]
    fn d4_rectangular_basis() {
        let d4 = rs(Family::D, 4);
        assert!(verify_basis(&d4, &WeightSpec::Rectangular { k0: 1, j: 1, kj: 1 }, 6).is_verified());
    }

    #[test]
    fn manifest_round_trip() {
        let text = r#"[{"family":"A","rank":2,"mode":"identity","M":3},
                       {"family":"D","rank":4,"mode":"rectangular","k0":1,"j":3,"kj":1,"M":2},
                       {"family":"A","rank":1,"mode":"standard","k":2,"M":4}]"#;
        let rows = parse_manifest(text).unwrap();
        assert_eq!(rows.len(), 3);
        let reports = run_suite(&rows, false);
        assert!(suite_passed(&reports));
        assert!(reports.iter().all(|r| r.timing_ms.is_none()));
    }

    #[test]
    fn manifest_errors() {
        assert!(parse_manifest("[{").is_err());
        assert!(parse_manifest(r#"[{"family":"E","rank":9,"mode":"identity","M":1}]"#).is_err());
        assert!(parse_manifest(r#"[{"family":"A","rank":1,"mode":"standard","M":1}]"#).is_err());
        assert!(parse_manifest(r#"[{"family":"F","rank":4,"mode":"rectangular","k0":1,"j":1,"kj":1,"M":1}]"#).is_err());
        assert!(parse_manifest(r#"[{"family":"A","rank":1,"mode":"identity","M":1,"extra":0}]"#).is_err());
        assert_eq!(parse_manifest("[]").unwrap(), vec![]);
        assert!(suite_passed(&run_suite(&[], false)));
    }

    #[test]
    fn corrupted_row_fails_suite() {
        let mut bad = ManifestRow::identity(Family::A, 2, 3);
        bad.drop_root = Some(1);
        let reports = run_suite(&[ManifestRow::identity(Family::A, 1, 3), bad], false);
        assert!(reports[0].is_verified());
        assert_eq!(reports[1].status, Status::Mismatch);
        assert!(!suite_passed(&reports));
    }

    #[test]
    fn reports_are_deterministic() {
        let rows = vec![ManifestRow::identity(Family::G, 2, 4), ManifestRow::basis(Family::A, 2, WeightSpec::Standard { k: 1 }, 5)];
        let a = reports_to_json(&run_suite(&rows, false));
        let b = reports_to_json(&run_suite(&rows, false));
        assert_eq!(a, b);
    }
}
