//! Graph isomorphism testing by partition refinement with backjumping.

pub mod automorphism;
pub mod error;
pub mod families;
pub mod graph;
pub mod harness;
pub mod io;
pub mod matcher;
pub mod oracle;
pub mod refinement;
pub mod sequence;

pub use automorphism::{find_automorphisms, ExtendedSequence, SemiorbitPartition};
pub use error::{Error, Result};
pub use families::{
    complete_join, load_component, paley_graph, rook_graph_4x4, save_component, shrikhande_graph,
    tripartite_component, tripartite_union, two_level_components, two_level_family,
    two_level_graph, verify_srg, Component, Family, FamilySpec, InstancePair, TripartiteKind,
};
pub use graph::{
    is_isomorphism, AdjacencyCode, DegreeTriple, Graph, InducedSubgraph, Permutation, VertexSet,
};
pub use harness::{
    nsd, nsd_with, records_from_jsonl, records_to_jsonl, run_bench, run_bench_with, summarize,
    BenchConfig, BenchPlan, BenchRecord, BenchReport, BenchSummary, Divisor, SummaryRow,
};
pub use io::{load_graph, read_graph, save_graph, write_graph};
pub use matcher::{
    are_isomorphic, backjump_level, extract_isomorphism, match_sequence, MatchOptions,
    MatchOutcome, MatchStats,
};
pub use oracle::{
    brute_force_isomorphism, brute_force_orbits, random_digraph, random_iso_pair, OracleLimit,
};
pub use refinement::{
    concat, is_equitable, partition_by_set, partition_by_vertex, partitions_compatible,
    set_refinement, vertex_refinement, CellOrigin, DiscardedCell, Partition, RefinementOutcome,
};
pub use sequence::{
    degree_partition, generate_sequence, CrossDegrees, Level, RefinementKind, SequenceOfPartitions,
};
