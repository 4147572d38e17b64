//! Maximal Cohen–Macaulay modules over cusp surface singularities and `T_pq`
//! curve singularities.
//!
//! Indecomposable modules are indexed by triples `(d, m, λ)` of an aperiodic
//! s-sequence `d`, a multiplicity `m ≥ 1` and a nonzero scalar `λ`, attached to
//! vector bundles on the cyclic exceptional curve of the minimal resolution.
//!
//! - [`sequences`]: s-sequences, shifts, canonical forms, enumeration
//! - [`cohomology`]: θ, δ, `h⁰`, `h¹`, Kahn's condition, module ranks
//! - [`oracle`]: the same dimensions by exact linear algebra
//! - [`cusp`]: classification and rank-indexed enumeration over a cusp
//! - [`tpq`]: the σ-action and descent to `T_pq` curves
//! - [`quiver`]: Auslander–Reiten quivers and their export

pub mod cohomology;
pub mod cusp;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod quiver;
pub mod scalar;
pub mod sequences;
pub mod tpq;

pub use cohomology::{
    cohom_dims, delta, kahn_condition, module_rank, n_global, positive_parts, theta,
    twist_by_cycle, BundleTriple, CohomReport, CuspGeometry, PositivePart,
};
pub use cusp::{
    classify_label, enumerate_rank, family_counts, validate_cusp, CmKind, CmModuleLabel,
    FamilyDescriptor, GrowthTable, LambdaBase, RankEnumeration,
};
pub use error::{Error, Result};
pub use oracle::{
    build_presentation, dims_from_rank, oracle_dims, rank_of_h, verify_formula, FormulaCheck,
    OracleSpace,
};
pub use quiver::{
    ar_sequence, arrow_multiplicity, build_tube, cusp_quiver, export_dot, tpq_quiver,
    tpq_special_tube, ARQuiver, ArSequence, ArrowMultiplicity, GraphExport,
};
pub use scalar::Scalar;
pub use sequences::{enumerate_canonical, SSeq};
pub use tpq::{
    apply_sigma, descend, geometry_of, is_sigma_symmetric, sigma_of_module, tpq_iso, TpqGeometry,
    TpqKind, TpqModuleLabel,
};
