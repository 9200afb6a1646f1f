//! Discrete gradient vector fields consistent with one-critical
//! multi-parameter filtrations of simplicial complexes, their Morse
//! complexes, and the persistence invariants they are compared against.
//! All homology is over F2.

pub mod analysis;
pub mod complex;
pub mod f2;
pub mod filtration;
pub mod gradient;
pub mod invariants;
pub mod io;
pub mod morse;
pub mod random;
pub mod report;

pub use analysis::{
    check_relative_perfect, verify_inequalities, AnalysisError, InequalityReport,
    PerfectnessReport, Prepared,
};
pub use complex::{
    ComplexError, HomologyBasis, LefschetzComplex, Simplex, SimplicialComplex, VertexId,
};
pub use f2::{BinaryMatrix, BitVector};
pub use filtration::{
    Filtration, FiltrationError, GradeGrid, Graded, MultiGrade, Perturbation, VertexFunction,
};
pub use gradient::{
    check_consistency, compute_gradient, homotopy_expansion, validate_gradient, DiscreteGradient,
    ExpansionIndex, GradientError,
};
pub use invariants::{
    betti_tables_n1, betti_tables_n2, build_module, build_modules, inclusion_ranks,
    persistence_pairs_n1, rank_invariant, rank_invariant_from, BettiTables, PersistenceModule,
    PersistencePairs,
};
pub use io::{parse_input, InputError};
pub use morse::{
    build_morse_complex, morse_numbers, separatrix_parity, MorseComplex, MorseNumbersTable,
};
