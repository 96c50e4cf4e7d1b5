//! The Cat's Dilemma: a sequential game against Nature in which an agent is
//! repeatedly offered one of three pairs drawn from three foods and must pick
//! one item, aiming at a balanced long-run diet (each food eaten a third of the
//! time).
//!
//! The crate models three strategy spaces and the maps between them:
//!
//! * **classical** mixtures of the eight deterministic choice functions, a point
//!   of the 7-simplex;
//! * **prequantized** strategies, eight complex amplitudes on S¹⁵;
//! * **quantized** single-qubit strategies, a point of S² read in three
//!   conjugated bases.
//!
//! Every strategy reduces to a [`ConditionalTriple`] `(α, β, γ)` in the unit
//! cube. [`optimal_frequencies`] sends a triple to the pair-frequency triple
//! `q` of the triangle for which it is optimal, [`classify`] tells transitive
//! from intransitive (cyclic) preferences, and the [`feasibility`] module
//! answers the inverse question exactly: for which `q` does an optimal strategy
//! of a given class exist in a given model. [`coverage`] turns either the
//! sampled clouds or the exact oracle into area fractions of the triangle.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod coverage;
pub mod feasibility;
pub mod sampling;
pub mod strategy;

pub use coverage::{
    empirical_coverage, oracle_coverage, table2_report, CoverageMethod, CoverageReport, Table2,
    TriangleGrid,
};
pub use feasibility::{
    classical_feasible, feasible, prequant_feasible, quant_feasible, solution_line, ClassFilter,
    SolutionLine, Verdict,
};
pub use sampling::{
    sample, sample_classical, sample_prequant, sample_quant, SampleBatch, SeededGenerator,
};
pub use strategy::{
    choice_table, classical_embed, classify, map_strategy, occupancy, optimal_frequencies,
    product_preimage, z_to_sphere, ChoiceFunctionTable, ClassicalStrategy, ConditionalTriple,
    ExtendedComplex, FrequencyTriple, MappedPoint, Model, NotOptimal, OccupancyTriple,
    PrequantStrategy, QuantumStrategy, Strategy, StrategyError, TransitivityClass,
};
