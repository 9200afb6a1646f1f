//! Relative-perfectness and the Morse inequalities on a graded complex.
//!
//! All per-grade work runs on the compressed grid; rows handed back carry
//! grades in the original coordinates.

use crate::filtration::{Filtration, GradeGrid, MultiGrade};
use crate::gradient::{compute_gradient, DiscreteGradient, GradientError};
use crate::invariants::{
    betti_tables_n1, betti_tables_n2, build_modules, persistence_pairs_n1, relative_dims,
    BettiTables, InvariantsError,
};
use crate::morse::{
    build_morse_complex, morse_numbers, MorseComplex, MorseError, MorseNumbersTable,
};
use rayon::prelude::*;
use serde::Serialize;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Gradient(#[from] GradientError),
    #[error(transparent)]
    Morse(#[from] MorseError),
    #[error(transparent)]
    Invariants(#[from] InvariantsError),
    #[error("Betti tables are available for one or two parameters, not {0}")]
    TooManyParams(usize),
    #[error("Betti-table bounds need two parameters, got {0}")]
    BoundsNeedTwoParams(usize),
    #[error("m_{degree}({grade}) = {morse} is below the relative homology {relative}")]
    MorseBelowRelative {
        grade: MultiGrade,
        degree: usize,
        morse: usize,
        relative: usize,
    },
}

/// A filtration, its compressed form, a gradient on it and the Morse
/// complex, with per-grade invariants computed on first use.
pub struct Prepared {
    original: Filtration,
    grid: GradeGrid,
    filtration: Filtration,
    gradient: DiscreteGradient,
    morse: MorseComplex,
    morse_numbers: MorseNumbersTable,
    relative: OnceLock<Vec<Vec<usize>>>,
    betti: OnceLock<Result<BettiTables, AnalysisError>>,
}

impl Prepared {
    /// Uses `gradient` if given, otherwise the one built lower star by lower star.
    pub fn new(f: &Filtration, gradient: Option<DiscreteGradient>) -> Result<Self, AnalysisError> {
        let grid = GradeGrid::of(f);
        let filtration = grid.compress_filtration(f);
        let gradient = match gradient {
            Some(v) => v,
            None => compute_gradient(&filtration)?,
        };
        let morse = build_morse_complex(&filtration, &gradient)?;
        let morse_numbers = morse_numbers(&morse);
        Ok(Self {
            original: f.clone(),
            grid,
            filtration,
            gradient,
            morse,
            morse_numbers,
            relative: OnceLock::new(),
            betti: OnceLock::new(),
        })
    }

    pub fn original(&self) -> &Filtration {
        &self.original
    }

    /// Axis dictionaries of the compressed grid.
    pub fn grid(&self) -> &GradeGrid {
        &self.grid
    }

    /// The filtration in compressed coordinates.
    pub fn filtration(&self) -> &Filtration {
        &self.filtration
    }

    pub fn gradient(&self) -> &DiscreteGradient {
        &self.gradient
    }

    pub fn morse(&self) -> &MorseComplex {
        &self.morse
    }

    /// Morse numbers in compressed coordinates.
    pub fn morse_numbers(&self) -> &MorseNumbersTable {
        &self.morse_numbers
    }

    /// The grid of compressed grades.
    pub fn compressed_grid(&self) -> GradeGrid {
        GradeGrid::of(&self.filtration)
    }

    pub fn decompress(&self, u: &MultiGrade) -> MultiGrade {
        self.grid.decompress(u)
    }

    fn degrees(&self) -> usize {
        self.filtration.cells().degree_count()
    }

    /// `dim H_q(K^u, ⋃ K^{u-e_i})` per grid grade, in grid order.
    pub fn relative(&self) -> &[Vec<usize>] {
        self.relative.get_or_init(|| {
            self.grid
                .grades()
                .par_iter()
                .map(|u| relative_dims(&self.filtration, u))
                .collect()
        })
    }

    /// Betti tables of the filtration, in compressed coordinates.
    pub fn betti_tables(&self) -> Result<&BettiTables, AnalysisError> {
        self.betti
            .get_or_init(|| {
                let grid = self.compressed_grid();
                let modules = build_modules(&self.filtration, &grid);
                match self.filtration.params() {
                    1 => Ok(betti_tables_n1(&modules)?),
                    2 => Ok(betti_tables_n2(&modules)?),
                    n => Err(AnalysisError::TooManyParams(n)),
                }
            })
            .as_ref()
            .map_err(Clone::clone)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PerfectnessRow {
    pub grade: MultiGrade,
    pub degree: usize,
    pub morse: usize,
    pub relative: usize,
    pub equal: bool,
}

/// One-parameter cross-checks of the verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScalarChecks {
    /// `m_q(u) = ξ0^q(u) + ξ1^{q-1}(u)` at every grade.
    pub betti_condition: bool,
    /// Every critical cell creates or kills a class in the persistence of
    /// the Morse filtration: no pair of critical cells enters at one grade.
    pub critical_cells_positive_or_negative: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PerfectnessReport {
    pub relative_perfect: bool,
    /// Rows where the Morse number or the relative homology is non-zero.
    pub rows: Vec<PerfectnessRow>,
    pub witnesses: Vec<PerfectnessRow>,
    pub scalar: Option<ScalarChecks>,
}

pub fn check_relative_perfect(
    f: &Filtration,
    v: &DiscreteGradient,
) -> Result<PerfectnessReport, AnalysisError> {
    perfectness(&Prepared::new(f, Some(v.clone()))?)
}

pub fn perfectness(p: &Prepared) -> Result<PerfectnessReport, AnalysisError> {
    let mut rows = Vec::new();
    let grades = p.grid.grades();
    for (u, rel) in grades.iter().zip(p.relative()) {
        for q in 0..p.degrees() {
            let morse = p.morse_numbers.get(u, q);
            let relative = rel[q];
            if morse < relative {
                return Err(AnalysisError::MorseBelowRelative {
                    grade: p.decompress(u),
                    degree: q,
                    morse,
                    relative,
                });
            }
            if morse > 0 || relative > 0 {
                rows.push(PerfectnessRow {
                    grade: p.decompress(u),
                    degree: q,
                    morse,
                    relative,
                    equal: morse == relative,
                });
            }
        }
    }
    let witnesses: Vec<PerfectnessRow> = rows.iter().filter(|r| !r.equal).cloned().collect();
    let scalar = if p.filtration.params() == 1 {
        let t = p.betti_tables()?;
        let betti_condition = grades.iter().all(|u| {
            (0..p.degrees()).all(|q| {
                p.morse_numbers.get(u, q) == t.xi(0, u, q as isize) + t.xi(1, u, q as isize - 1)
            })
        });
        let pairs = persistence_pairs_n1(&p.morse)?;
        Some(ScalarChecks {
            betti_condition,
            critical_cells_positive_or_negative: pairs.ephemeral.is_empty(),
        })
    } else {
        None
    };
    Ok(PerfectnessReport {
        relative_perfect: witnesses.is_empty(),
        rows,
        witnesses,
        scalar,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelativeRow {
    pub grade: MultiGrade,
    pub degree: usize,
    pub morse: usize,
    pub relative: usize,
    pub holds: bool,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlobalRow {
    pub degree: usize,
    pub morse: usize,
    pub betti: usize,
    pub holds: bool,
    pub equal: bool,
}

/// Betti-table bounds on `m_q(u)` for two parameters. The upper bound uses
/// `ξ2^{q-2}(u)`; `upper_alt` is the same sum with `ξ2^{q-1}(u)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundRow {
    pub grade: MultiGrade,
    pub degree: usize,
    pub morse: usize,
    pub lower: i64,
    pub upper: usize,
    pub upper_alt: usize,
    pub lower_holds: bool,
    pub lower_equal: bool,
    /// Only evaluated for relative-perfect gradients.
    pub upper_holds: Option<bool>,
    pub upper_equal: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InequalityReport {
    pub all_hold: bool,
    pub relative_perfect: bool,
    pub relative: Vec<RelativeRow>,
    pub global: Vec<GlobalRow>,
    pub bounds: Option<Vec<BoundRow>>,
}

pub fn verify_inequalities(
    f: &Filtration,
    v: &DiscreteGradient,
    with_bounds: bool,
) -> Result<InequalityReport, AnalysisError> {
    inequalities(&Prepared::new(f, Some(v.clone()))?, with_bounds)
}

/// The lower and upper Betti-table bounds on `m_q(u)`.
pub fn betti_bounds(t: &BettiTables, u: &MultiGrade, q: usize) -> (i64, usize, usize) {
    let q = q as isize;
    let base = t.xi(0, u, q) + t.xi(1, u, q - 1);
    let lower = base as i64 - t.xi(2, u, q - 1) as i64;
    (lower, base + t.xi(2, u, q - 2), base + t.xi(2, u, q - 1))
}

pub fn inequalities(p: &Prepared, with_bounds: bool) -> Result<InequalityReport, AnalysisError> {
    let n = p.filtration.params();
    if with_bounds && n != 2 {
        return Err(AnalysisError::BoundsNeedTwoParams(n));
    }
    let grades = p.grid.grades();
    let mut relative = Vec::new();
    let mut relative_perfect = true;
    for (u, rel) in grades.iter().zip(p.relative()) {
        for (q, &r) in rel.iter().enumerate() {
            let m = p.morse_numbers.get(u, q);
            relative_perfect &= m == r;
            if m > 0 || r > 0 {
                relative.push(RelativeRow {
                    grade: p.decompress(u),
                    degree: q,
                    morse: m,
                    relative: r,
                    holds: m >= r,
                    equal: m == r,
                });
            }
        }
    }

    let betti = p.filtration.cells().homology_dims();
    let global: Vec<GlobalRow> = betti
        .iter()
        .enumerate()
        .map(|(q, &b)| {
            let m = p.morse_numbers.total(q);
            GlobalRow {
                degree: q,
                morse: m,
                betti: b,
                holds: m >= b,
                equal: m == b,
            }
        })
        .collect();

    let bounds = if with_bounds {
        let t = p.betti_tables()?;
        let mut rows = Vec::new();
        for u in &grades {
            for q in 0..=p.degrees() {
                let m = p.morse_numbers.get(u, q);
                let (lower, upper, upper_alt) = betti_bounds(t, u, q);
                if m == 0 && lower == 0 && upper == 0 && upper_alt == 0 {
                    continue;
                }
                rows.push(BoundRow {
                    grade: p.decompress(u),
                    degree: q,
                    morse: m,
                    lower,
                    upper,
                    upper_alt,
                    lower_holds: m as i64 >= lower,
                    lower_equal: m as i64 == lower,
                    upper_holds: relative_perfect.then_some(m <= upper),
                    upper_equal: relative_perfect.then_some(m == upper),
                });
            }
        }
        Some(rows)
    } else {
        None
    };

    let all_hold = relative.iter().all(|r| r.holds)
        && global.iter().all(|r| r.holds)
        && bounds
            .iter()
            .flatten()
            .all(|r| r.lower_holds && r.upper_holds != Some(false));
    Ok(InequalityReport {
        all_hold,
        relative_perfect,
        relative,
        global,
        bounds,
    })
}
