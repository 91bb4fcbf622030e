use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::planar::VertexId;

use super::geometry::{rational_str, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveItemKind {
    /// A boundary vertex of the division lying on the curve.
    Boundary(VertexId),
    /// A marked point together with the part containing it.
    Point { id: usize, part: usize },
}

/// Something met while walking along a curve, at parameter `position`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveItem {
    #[serde(with = "rational_str")]
    pub position: Rational,
    pub kind: CurveItemKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub part: usize,
    pub points: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockPartition {
    pub blocks: Vec<Block>,
    /// Points left over after chunking, in curve order.
    pub discarded: Vec<usize>,
    pub boundary_count: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BlockError {
    #[error("items {0} and {1} are not in strictly increasing position")]
    UnorderedInput(usize, usize),
    #[error("block size must be positive")]
    ZeroBlockSize,
}

/// Cuts the curve at boundary vertices and groups each maximal run of
/// consecutive points from one part into blocks of exactly `s` points; the
/// remainder of every run is discarded.
pub fn block_partition(items: &[CurveItem], s: usize) -> Result<BlockPartition, BlockError> {
    if s == 0 {
        return Err(BlockError::ZeroBlockSize);
    }
    if let Some(i) = items.windows(2).position(|w| w[0].position >= w[1].position) {
        return Err(BlockError::UnorderedInput(i, i + 1));
    }
    let mut out = BlockPartition { blocks: Vec::new(), discarded: Vec::new(), boundary_count: 0 };
    let mut run: Vec<usize> = Vec::new();
    let mut run_part: Option<usize> = None;
    let flush = |run: &mut Vec<usize>, part: Option<usize>, out: &mut BlockPartition| {
        if let Some(part) = part {
            let full = run.len() - run.len() % s;
            for chunk in run[..full].chunks(s) {
                out.blocks.push(Block { part, points: chunk.to_vec() });
            }
            out.discarded.extend_from_slice(&run[full..]);
        }
        run.clear();
    };
    for item in items {
        match item.kind {
            CurveItemKind::Boundary(_) => {
                out.boundary_count += 1;
                flush(&mut run, run_part.take(), &mut out);
            }
            CurveItemKind::Point { id, part } => {
                if run_part != Some(part) {
                    flush(&mut run, run_part.take(), &mut out);
                    run_part = Some(part);
                }
                run.push(id);
            }
        }
    }
    flush(&mut run, run_part, &mut out);
    Ok(out)
}
