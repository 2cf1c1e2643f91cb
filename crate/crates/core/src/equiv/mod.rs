//! Partitions of finite sets and lattices of them.

pub mod lattice;
pub mod partition;
pub mod ultra;

pub use lattice::{
    check_sublattice, crt_solve, distributivity_failure, is_arithmetical, is_distributive,
    kaarli_extend, meet_closure, orthogonal_family_search, preserves_all, residuated_distance,
    sublattice_closure, zn_congruences, CrtOutcome, Extension, OrthogonalFamily,
};
pub use partition::{Partition, Relation};
pub use ultra::{
    join_ultrametric, powerset_monoid, system_from_ultrametric, threshold_relation,
    thresholds_compose_as_joins, ultrametric_from_system, zn_ultrametric,
};
