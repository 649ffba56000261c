//! Incidence matrices with constant closed-curve weight, built from site,
//! edge and cycle equations over a face-boundary basis.

pub mod site;

pub use site::{
    cycle_permutation, cycle_ratios, reordered_at, solve_site_equations, CycleWalk, Ratio, Reordered, SiteAssignment,
    SiteBlock, SiteVar, REORDERINGS,
};
pub mod edge;

pub use edge::{
    assemble, cycle_equation_residuals, edge_equation_rhs, link_entry, principal_image, solve_cycle_equations,
    solve_edge_equations, CycleResidual, EdgeAssignment,
};
pub mod build;
pub mod check;

pub use check::{curve_weight_report, CurveClass, WeightReport, MAX_CHECK_BETTI};

pub use build::{
    build_incidence_matrix, build_kasteleyn, crosscap_parity, prepare, AnyIncidence, IncidenceMatrix, KasteleynBuild,
    ParityClass, Prepared, Reference,
};
pub mod reduce;

pub use reduce::{extend_weights, modified_matrix, reduce_to_minor, reference_weight, weighted_matrix};
pub mod obstruction;

pub use obstruction::{obstruction_check, obstruction_trials, random_incidence_matrix, Obstruction, ObstructionReport};
