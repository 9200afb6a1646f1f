//! The JSON report. Sections are filled in by whichever computations ran;
//! grades are always in the input's coordinates and only non-zero table
//! entries are listed.

use crate::analysis::{
    inequalities, perfectness, AnalysisError, InequalityReport, PerfectnessReport, Prepared,
};
use crate::complex::Simplex;
use crate::filtration::{MultiGrade, Perturbation};
use crate::gradient::{check_consistency, validate_gradient, GradientIssue};
use crate::invariants::{persistence_pairs_n1, PersistencePair};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, Serialize)]
pub struct Options {
    pub command: String,
    pub tiebreak: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub input_sha256: String,
    pub options: Options,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cells: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub perturbations: Vec<Perturbation>,
}

impl Meta {
    pub fn new(input: &[u8], options: Options) -> Self {
        Self {
            tool: "morsegrad",
            version: env!("CARGO_PKG_VERSION"),
            input_sha256: hex::encode(Sha256::digest(input)),
            options,
            params: None,
            cells: None,
            perturbations: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GradientSection {
    pub valid: bool,
    pub consistent: bool,
    pub issues: Vec<GradientIssue>,
    pub pairs: Vec<[Simplex; 2]>,
    pub critical: Vec<Simplex>,
    pub critical_by_dim: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MorseRecord {
    pub grade: MultiGrade,
    pub degree: usize,
    pub count: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct MorseNumbersSection {
    pub records: Vec<MorseRecord>,
    pub totals: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BettiRecord {
    pub grade: MultiGrade,
    pub degree: usize,
    /// `ξ0, ξ1` for one parameter, `ξ0, ξ1, ξ2` for two.
    pub xi: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BettiSection {
    pub params: usize,
    pub records: Vec<BettiRecord>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairRecord {
    pub degree: usize,
    pub birth: MultiGrade,
    pub death: Option<MultiGrade>,
    pub positive: Simplex,
    pub negative: Option<Simplex>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PersistenceSection {
    pub pairs: Vec<PairRecord>,
    pub ephemeral: Vec<PairRecord>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub meta: Meta,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gradient: Option<GradientSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub morse_numbers: Option<MorseNumbersSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub betti_tables: Option<BettiSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub persistence_pairs: Option<PersistenceSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perfectness: Option<PerfectnessReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inequalities: Option<InequalityReport>,
}

impl Report {
    pub fn new(meta: Meta) -> Self {
        Self {
            meta,
            gradient: None,
            morse_numbers: None,
            betti_tables: None,
            persistence_pairs: None,
            perfectness: None,
            inequalities: None,
        }
    }

    pub fn describe(&mut self, p: &Prepared) {
        self.meta.params = Some(p.filtration().params());
        self.meta.cells = Some(p.filtration().complex().len());
    }

    pub fn add_gradient(&mut self, p: &Prepared) {
        self.gradient = Some(gradient_section(p));
    }

    pub fn add_morse_numbers(&mut self, p: &Prepared) {
        self.morse_numbers = Some(morse_numbers_section(p));
    }

    pub fn add_betti_tables(&mut self, p: &Prepared) -> Result<(), AnalysisError> {
        self.betti_tables = Some(betti_section(p)?);
        Ok(())
    }

    pub fn add_persistence_pairs(&mut self, p: &Prepared) -> Result<(), AnalysisError> {
        self.persistence_pairs = Some(persistence_section(p)?);
        Ok(())
    }

    pub fn add_perfectness(&mut self, p: &Prepared) -> Result<(), AnalysisError> {
        self.perfectness = Some(perfectness(p)?);
        Ok(())
    }

    pub fn add_inequalities(&mut self, p: &Prepared) -> Result<(), AnalysisError> {
        self.inequalities = Some(inequalities(p, p.filtration().params() == 2)?);
        Ok(())
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is serializable");
        s.push('\n');
        s
    }
}

/// A report with every section that applies to the number of parameters.
pub fn full_report(p: &Prepared, meta: Meta) -> Result<Report, AnalysisError> {
    let mut r = Report::new(meta);
    r.describe(p);
    r.add_gradient(p);
    r.add_morse_numbers(p);
    let n = p.filtration().params();
    if n <= 2 {
        r.add_betti_tables(p)?;
    }
    if n == 1 {
        r.add_persistence_pairs(p)?;
    }
    r.add_perfectness(p)?;
    r.add_inequalities(p)?;
    Ok(r)
}

pub fn gradient_section(p: &Prepared) -> GradientSection {
    let f = p.filtration();
    let k = f.complex();
    let v = p.gradient();
    let verdict = validate_gradient(k, v);
    GradientSection {
        valid: verdict.valid,
        consistent: check_consistency(f, v).consistent,
        issues: verdict.issues,
        pairs: v
            .pair_simplices(k)
            .map(|(s, t)| [s.clone(), t.clone()])
            .collect(),
        critical: v.critical_simplices(k).cloned().collect(),
        critical_by_dim: v.morse_counts(k),
    }
}

pub fn morse_numbers_section(p: &Prepared) -> MorseNumbersSection {
    let t = p.morse_numbers();
    let mut records: Vec<MorseRecord> = t
        .entries()
        .map(|(u, q, m)| MorseRecord {
            grade: p.decompress(u),
            degree: q,
            count: m,
        })
        .collect();
    records.sort_by(|a, b| (&a.grade, a.degree).cmp(&(&b.grade, b.degree)));
    MorseNumbersSection {
        records,
        totals: t.totals().to_vec(),
    }
}

pub fn betti_section(p: &Prepared) -> Result<BettiSection, AnalysisError> {
    let t = p.betti_tables()?;
    let width = if t.params() == 1 { 2 } else { 3 };
    let mut records: Vec<BettiRecord> = t
        .entries()
        .map(|(u, q, xi)| BettiRecord {
            grade: p.decompress(u),
            degree: q,
            xi: xi[..width].to_vec(),
        })
        .collect();
    records.sort_by(|a, b| (&a.grade, a.degree).cmp(&(&b.grade, b.degree)));
    Ok(BettiSection {
        params: t.params(),
        records,
    })
}

pub fn persistence_section(p: &Prepared) -> Result<PersistenceSection, AnalysisError> {
    let pairs = persistence_pairs_n1(p.filtration())?;
    let k = p.filtration().complex();
    let record = |x: &PersistencePair| PairRecord {
        degree: x.degree,
        birth: p.decompress(&x.birth),
        death: x.death.as_ref().map(|d| p.decompress(d)),
        positive: k.simplex(x.positive).clone(),
        negative: x.negative.map(|n| k.simplex(n).clone()),
    };
    Ok(PersistenceSection {
        pairs: pairs.pairs.iter().map(record).collect(),
        ephemeral: pairs.ephemeral.iter().map(record).collect(),
    })
}
