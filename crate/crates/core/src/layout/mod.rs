//! Device coupling graphs, logical depth, and placement of parallel blocks
//! onto physical qubits with buffer isolation.

mod maps;

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ir::{Circuit, Gate};

pub use maps::load_builtin_map;

/// Node expansions allowed per anchor when searching for a block path.
const PATH_SEARCH_BUDGET: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LayoutError {
    #[error("unknown coupling map {0:?}")]
    UnknownMap(String),
    #[error("invalid coupling map: {0}")]
    InvalidMap(String),
    #[error("block {block} of {blocks} ({k} qubits, buffer {buffer}) cannot be placed after {} blocks", placed.len())]
    Infeasible {
        block: usize,
        blocks: usize,
        k: usize,
        buffer: usize,
        placed: Vec<Vec<usize>>,
    },
    #[error("placement of {assigned} qubits cannot host a {width}-qubit circuit")]
    WidthMismatch { assigned: usize, width: usize },
    #[error("invalid placement: {0}")]
    InvalidPlacement(String),
}

/// Undirected simple graph over physical qubits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MapDoc", into = "MapDoc")]
pub struct CouplingMap {
    name: String,
    qubit_count: usize,
    edges: BTreeSet<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct MapDoc {
    name: String,
    qubit_count: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<MapDoc> for CouplingMap {
    type Error = LayoutError;

    fn try_from(doc: MapDoc) -> Result<Self, LayoutError> {
        CouplingMap::new(doc.name, doc.qubit_count, doc.edges.into_iter().map(|[a, b]| (a, b)))
    }
}

impl From<CouplingMap> for MapDoc {
    fn from(m: CouplingMap) -> Self {
        MapDoc {
            name: m.name,
            qubit_count: m.qubit_count,
            edges: m.edges.into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }
}

impl CouplingMap {
    /// Builds a map; edges are stored as `(low, high)` and duplicates merge.
    pub fn new(
        name: impl Into<String>,
        qubit_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, LayoutError> {
        let name = name.into();
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(LayoutError::InvalidMap(format!("{name}: self-loop on {a}")));
            }
            if a >= qubit_count || b >= qubit_count {
                return Err(LayoutError::InvalidMap(format!(
                    "{name}: edge ({a}, {b}) outside {qubit_count} qubits"
                )));
            }
            set.insert((a.min(b), a.max(b)));
        }
        let mut adjacency = vec![Vec::new(); qubit_count];
        for &(a, b) in &set {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for n in &mut adjacency {
            n.sort_unstable();
        }
        Ok(Self {
            name,
            qubit_count,
            edges: set,
            adjacency,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    /// Neighbours in ascending order.
    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.adjacency[q]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// Hop distance from the nearest of `sources` to every qubit.
    pub fn distances_from(&self, sources: &[usize]) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.qubit_count];
        let mut queue = VecDeque::new();
        for &s in sources {
            dist[s] = Some(0);
            queue.push_back(s);
        }
        while let Some(q) = queue.pop_front() {
            let d = dist[q].unwrap();
            for &nb in &self.adjacency[q] {
                if dist[nb].is_none() {
                    dist[nb] = Some(d + 1);
                    queue.push_back(nb);
                }
            }
        }
        dist
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

/// Physical qubits of each block, in logical order, plus the idle qubits
/// kept between blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Placement {
    pub blocks: Vec<Vec<usize>>,
    pub buffers: Vec<usize>,
}

impl Placement {
    pub fn assigned_qubits(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Checks disjointness, path adjacency inside blocks, and that qubits of
    /// different blocks are more than `buffer` hops apart.
    pub fn verify(&self, map: &CouplingMap, buffer: usize) -> Result<(), LayoutError> {
        let bad = |s: String| Err(LayoutError::InvalidPlacement(s));
        let mut owner = vec![None; map.qubit_count()];
        for (i, block) in self.blocks.iter().enumerate() {
            for &q in block {
                if q >= map.qubit_count() {
                    return bad(format!("qubit {q} not on {}", map.name()));
                }
                if owner[q].replace(i).is_some() {
                    return bad(format!("qubit {q} assigned twice"));
                }
            }
            if let Some(w) = block.windows(2).find(|w| !map.has_edge(w[0], w[1])) {
                return bad(format!("block {i}: {} and {} are not coupled", w[0], w[1]));
            }
        }
        if let Some(&q) = self.buffers.iter().find(|&&q| q >= map.qubit_count() || owner[q].is_some()) {
            return bad(format!("buffer qubit {q} is assigned or off-device"));
        }
        for (i, block) in self.blocks.iter().enumerate() {
            let dist = map.distances_from(block);
            for (q, d) in dist.iter().enumerate() {
                if let (Some(d), Some(j)) = (d, owner[q]) {
                    if j != i && *d <= buffer {
                        return bad(format!("blocks {i} and {j} are {d} hops apart at qubit {q}"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }
}

/// Greedy placement of `blocks` disjoint `k`-qubit paths, each more than
/// `buffer` hops from every other block.
///
/// Anchors are tried in index order, paths grow through the lowest-index
/// free neighbour first and backtrack on dead ends.
pub fn place_blocks(map: &CouplingMap, blocks: usize, k: usize, buffer: usize) -> Result<Placement, LayoutError> {
    place_blocks_weighted(map, blocks, k, buffer, None)
}

/// As [`place_blocks`], trying anchors in ascending `weights` order (for
/// example per-qubit error rates); ties fall back to index order.
pub fn place_blocks_weighted(
    map: &CouplingMap,
    blocks: usize,
    k: usize,
    buffer: usize,
    weights: Option<&[f64]>,
) -> Result<Placement, LayoutError> {
    if k == 0 {
        return Err(LayoutError::InvalidPlacement("blocks need at least one qubit".into()));
    }
    let n = map.qubit_count();
    let mut anchors: Vec<usize> = (0..n).collect();
    if let Some(w) = weights {
        if w.len() != n {
            return Err(LayoutError::InvalidPlacement(format!(
                "{} weights for {n} qubits",
                w.len()
            )));
        }
        anchors.sort_by(|&a, &b| w[a].total_cmp(&w[b]).then(a.cmp(&b)));
    }
    // assigned or inside some block's buffer halo
    let mut blocked = vec![false; n];
    let mut assigned = vec![false; n];
    let mut placed = Vec::with_capacity(blocks);
    for block in 0..blocks {
        let path = anchors
            .iter()
            .filter(|&&a| !blocked[a])
            .find_map(|&a| find_path(map, a, k, &blocked));
        let Some(path) = path else {
            return Err(LayoutError::Infeasible {
                block,
                blocks,
                k,
                buffer,
                placed,
            });
        };
        for &q in &path {
            assigned[q] = true;
        }
        for (q, d) in map.distances_from(&path).into_iter().enumerate() {
            if d.is_some_and(|d| d <= buffer) {
                blocked[q] = true;
            }
        }
        placed.push(path);
    }
    let buffers = (0..n).filter(|&q| blocked[q] && !assigned[q]).collect();
    Ok(Placement {
        blocks: placed,
        buffers,
    })
}

fn find_path(map: &CouplingMap, anchor: usize, k: usize, blocked: &[bool]) -> Option<Vec<usize>> {
    fn grow(
        map: &CouplingMap,
        k: usize,
        blocked: &[bool],
        on_path: &mut [bool],
        path: &mut Vec<usize>,
        budget: &mut usize,
    ) -> bool {
        if path.len() == k {
            return true;
        }
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        let tail = *path.last().unwrap();
        for &nb in map.neighbors(tail) {
            if blocked[nb] || on_path[nb] {
                continue;
            }
            on_path[nb] = true;
            path.push(nb);
            if grow(map, k, blocked, on_path, path, budget) {
                return true;
            }
            path.pop();
            on_path[nb] = false;
        }
        false
    }
    let mut on_path = vec![false; map.qubit_count()];
    on_path[anchor] = true;
    let mut path = vec![anchor];
    let mut budget = PATH_SEARCH_BUDGET;
    grow(map, k, blocked, &mut on_path, &mut path, &mut budget).then_some(path)
}

/// ASAP layer count: a gate sits one layer above the latest gate sharing a
/// qubit with it.
pub fn logical_depth(circuit: &Circuit) -> usize {
    ops_depth(circuit.width(), circuit.ops())
}

pub fn ops_depth(width: usize, ops: &[Gate]) -> usize {
    let mut frontier = vec![0usize; width];
    let mut depth = 0;
    for op in ops {
        let qs = op.qubits();
        let layer = 1 + qs.iter().map(|&q| frontier[q]).max().unwrap_or(0);
        for q in qs {
            frontier[q] = layer;
        }
        depth = depth.max(layer);
    }
    depth
}

/// Inputs to the volume metrics for a placed circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PlacementReport {
    /// Qubits assigned to blocks; buffers are not counted.
    pub nq: usize,
    pub depth: usize,
}

pub fn placement_report(placement: &Placement, circuit: &Circuit) -> Result<PlacementReport, LayoutError> {
    let nq = placement.assigned_qubits();
    if nq < circuit.width() {
        return Err(LayoutError::WidthMismatch {
            assigned: nq,
            width: circuit.width(),
        });
    }
    Ok(PlacementReport {
        nq,
        depth: logical_depth(circuit),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::{compose_qmp, Window, SearchProblem};

    #[test]
    fn depth_counts_layers() {
        let c = Circuit::new(3, (0..3).map(Gate::H).collect(), Window::full(3)).unwrap();
        assert_eq!(logical_depth(&c), 1);
        let c = Circuit::new(1, vec![Gate::H(0), Gate::X(0)], Window::full(1)).unwrap();
        assert_eq!(logical_depth(&c), 2);
        let c = Circuit::new(1, vec![], Window::full(1)).unwrap();
        assert_eq!(logical_depth(&c), 0);
    }

    #[test]
    fn line_seven_two_blocks() {
        let m = load_builtin_map("line-7").unwrap();
        let p = place_blocks(&m, 2, 3, 1).unwrap();
        assert_eq!(p.blocks, vec![vec![0, 1, 2], vec![4, 5, 6]]);
        assert_eq!(p.buffers, vec![3]);
        p.verify(&m, 1).unwrap();
    }

    #[test]
    fn line_five_is_infeasible() {
        let m = load_builtin_map("line-5").unwrap();
        match place_blocks(&m, 2, 3, 1) {
            Err(LayoutError::Infeasible { block, placed, .. }) => {
                assert_eq!(block, 1);
                assert_eq!(placed, vec![vec![0, 1, 2]]);
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn zero_buffer_only_needs_disjointness() {
        let m = load_builtin_map("line-6").unwrap();
        let p = place_blocks(&m, 2, 3, 0).unwrap();
        assert_eq!(p.blocks, vec![vec![0, 1, 2], vec![3, 4, 5]]);
        assert!(p.buffers.is_empty());
        assert!(p.verify(&m, 1).is_err());
    }

    #[test]
    fn weights_reorder_anchors() {
        let m = load_builtin_map("line-7").unwrap();
        let w = [5.0, 5.0, 5.0, 5.0, 0.0, 5.0, 5.0];
        let p = place_blocks_weighted(&m, 1, 3, 1, Some(&w)).unwrap();
        assert_eq!(p.blocks, vec![vec![4, 3, 2]]);
        assert!(place_blocks_weighted(&m, 1, 3, 1, Some(&w[..3])).is_err());
    }

    #[test]
    fn verify_catches_violations() {
        let m = load_builtin_map("line-7").unwrap();
        let gap = Placement { blocks: vec![vec![0, 2]], buffers: vec![] };
        assert!(gap.verify(&m, 1).is_err());
        let close = Placement { blocks: vec![vec![0, 1], vec![2, 3]], buffers: vec![] };
        assert!(close.verify(&m, 1).is_err());
        let dup = Placement { blocks: vec![vec![0, 1], vec![1, 2]], buffers: vec![] };
        assert!(dup.verify(&m, 0).is_err());
    }

    #[test]
    fn map_json_and_validation() {
        let m = CouplingMap::from_json(r#"{"name":"tri","qubit_count":3,"edges":[[0,1],[2,1]]}"#).unwrap();
        assert!(m.has_edge(1, 2));
        assert_eq!(CouplingMap::from_json(&m.to_json().unwrap()).unwrap(), m);
        assert!(CouplingMap::new("x", 2, [(0, 0)]).is_err());
        assert!(CouplingMap::new("x", 2, [(0, 2)]).is_err());
    }

    #[test]
    fn report_counts_block_qubits_only() {
        let m = load_builtin_map("heavy-hex-65").unwrap();
        let placement = place_blocks(&m, 4, 6, 1).unwrap();
        let problem = SearchProblem::from_strs(&["10110"]).unwrap();
        let (circuit, _) = compose_qmp(&problem, 2, 1).unwrap();
        let r = placement_report(&placement, &circuit).unwrap();
        assert_eq!(r.nq, 24);
        assert_eq!(r.depth, logical_depth(&circuit));
        let single = place_blocks(&m, 1, 3, 1).unwrap();
        assert!(matches!(
            placement_report(&single, &circuit),
            Err(LayoutError::WidthMismatch { assigned: 3, width: 20 })
        ));
    }
}
