//! Whitehead partitions, compatibility search, hugging and spine retraction
//! for untwisted outer automorphism groups of right-angled Artin groups.

pub mod compat;
pub mod conditions;
pub mod error;
pub mod families;
pub mod graph;
pub mod hugging;
pub mod partition;
pub mod report;
pub mod retraction;
pub mod search;

pub use compat::{compatibility_graph, is_adjacent, is_compatible, CompatibilityGraph};
pub use conditions::{check_conditions, ConditionReport};
pub use error::{Error, Result};
pub use graph::{
    classify_vertices, Sign, SignedVertex, SignedVertexSet, SimplicialGraph, VertexClassification, VertexId, VertexSet,
};
pub use hugging::{cube_survives, HugIndex, HugKind, HugMode, HugWitness, Verdict};
pub use partition::{all_partitions, enumerate_partitions, whitehead_images, GeneratorWord, Partition};
pub use report::{analyze, AnalysisReport};
pub use retraction::{build_star, crosscheck_survivors, retract, RetractOptions, RetractionTrace, StarComplex};
pub use search::{max_compatible, CompatibleSet, MaxSetResult, NodeSet};
