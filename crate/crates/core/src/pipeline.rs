//! The standard chain: enumerate, build the flip graph, 2-color it with the
//! standard anchors.

use std::sync::Arc;

use crate::algebra::build_e;
use crate::enumeration::enumerate;
use crate::error::Result;
use crate::flips::{FlipGraph, Sign, SignatureTable};
use crate::model::EdgePartition;
use crate::symmetry::AppendixData;

/// Anchors fixing the sign convention: the nineteen orbit representatives
/// at `+1` for `d = 3`, otherwise `E_d` at `+1`.
pub fn standard_anchors(d: usize) -> Result<Vec<(EdgePartition, Sign)>> {
    if d == 3 {
        Ok(AppendixData::load()?.anchors())
    } else {
        Ok(vec![(build_e(d), Sign::Plus)])
    }
}

/// Cycle-free partitions and their flip graph.
pub fn flip_graph(d: usize) -> Result<FlipGraph> {
    FlipGraph::build(Arc::new(enumerate(d, true)?))
}

/// The signature for `d`, anchored by [`standard_anchors`].
pub fn signature(d: usize) -> Result<SignatureTable> {
    let graph = flip_graph(d)?;
    graph.check_bipartite(&standard_anchors(d)?)?.signature()
}
