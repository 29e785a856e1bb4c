//! Angle index set constructions: minimal globally-rigid sets, local sets
//! for distributed sensing and reference-angle propagation.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Angle;
use crate::graph::{AngleIndexSet, AngleTriple, Edge, Graph, Vertex};
use crate::rigidity::{self, Framework};

/// Output of the minimal GAIS construction.
#[derive(Clone, Debug, PartialEq)]
pub struct GaisResult {
    pub ais: AngleIndexSet,
    pub laman_subgraph: Graph,
    pub size: usize,
    pub angle_connected: bool,
    /// Rank of the signed-angle rigidity matrix restricted to `ais`.
    pub restricted_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaisJson {
    pub triples: Vec<AngleTriple>,
    pub laman_edges: Vec<Edge>,
    pub size: usize,
    pub angle_connected: bool,
    pub restricted_rank: usize,
}

impl GaisResult {
    pub fn to_json(&self) -> GaisJson {
        GaisJson {
            triples: self.ais.iter().collect(),
            laman_edges: self.laman_subgraph.edges().collect(),
            size: self.size,
            angle_connected: self.angle_connected,
            restricted_rank: self.restricted_rank,
        }
    }
}

/// Minimal GAIS of an ISAR framework: a BFS spanning tree of the full angle
/// index graph of a Laman spanning subframework, rooted at the edge with
/// the smallest hash.
pub fn algorithm1_minimal_gais(fw: &Framework) -> Result<GaisResult> {
    let laman = rigidity::extract_laman_spanning_subgraph(fw)?;
    let full = AngleIndexSet::full(&laman);
    let aig = full.angle_index_graph();
    let root = aig
        .vertices()
        .next()
        .ok_or_else(|| Error::InvalidParameter("graph has no edges".into()))?;
    let tree = aig.bfs_spanning_tree(root)?;
    let ais = AngleIndexSet::new(laman.clone(), tree.iter().map(|e| e.triple))?;
    let restricted_rank = rigidity::restricted_rank(fw, &ais)?;
    Ok(GaisResult {
        size: ais.len(),
        angle_connected: ais.is_angle_connected(),
        restricted_rank,
        ais,
        laman_subgraph: laman,
    })
}

/// For an ISAR Laman framework: `ais` has `2n - 4` triples and is angle
/// connected.
pub fn verify_minimal_gais(fw: &Framework, ais: &AngleIndexSet) -> Result<bool> {
    if !rigidity::is_laman(fw.graph()) {
        return Err(Error::NotLaman);
    }
    let n = fw.n();
    if ais.len() != 2 * n - 4 {
        return Ok(false);
    }
    Ok(ais.rehost(fw.graph().clone())?.is_angle_connected())
}

/// Union of per-vertex star patterns: at each vertex, consecutive pairs of
/// ascending-sorted neighbors.
pub fn decentralized_local_ais(g: &Graph) -> Result<AngleIndexSet> {
    let mut triples = Vec::new();
    for v in 1..=g.n() {
        let nb: Vec<Vertex> = g.neighbors(v).collect();
        if nb.len() < 2 {
            return Err(Error::DegreeTooLow {
                vertex: v,
                degree: nb.len(),
            });
        }
        triples.extend(nb.windows(2).map(|w| AngleTriple::new(w[0], v, w[1])));
    }
    AngleIndexSet::new(g.clone(), triples)
}

/// Signed angle of every triple in `ais`, evaluated on `fw`.
pub fn measure_angles(fw: &Framework, ais: &AngleIndexSet) -> Result<BTreeMap<AngleTriple, Angle>> {
    ais.iter().map(|t| Ok((t, fw.angle(t)?))).collect()
}

/// Angle of every directed edge bearing relative to a reference bearing,
/// obtained by summing signed angles along the angle index graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceAngleTable {
    reference: (Vertex, Vertex),
    /// Keyed by canonical edge, angle of the bearing from `e.0` to `e.1`.
    angles: BTreeMap<Edge, Angle>,
    /// Largest wrapped disagreement over triples not used by the BFS tree.
    cycle_residual: f64,
}

impl ReferenceAngleTable {
    pub fn reference(&self) -> (Vertex, Vertex) {
        self.reference
    }

    /// `alpha*_ij`, the counter-clockwise angle from the reference bearing
    /// to the bearing from `i` to `j`.
    pub fn get(&self, i: Vertex, j: Vertex) -> Option<Angle> {
        let e = Edge::new(i, j);
        let a = *self.angles.get(&e)?;
        Some(if e.0 == i { a } else { a + Angle::PI })
    }

    pub fn cycle_residual(&self) -> f64 {
        self.cycle_residual
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    /// Every directed edge with its angle, both orientations.
    pub fn directed(&self) -> impl Iterator<Item = ((Vertex, Vertex), Angle)> + '_ {
        self.angles
            .iter()
            .flat_map(|(e, &a)| [((e.0, e.1), a), ((e.1, e.0), a + Angle::PI)])
    }
}

fn set_directed(angles: &mut BTreeMap<Edge, Angle>, from: Vertex, to: Vertex, a: Angle) {
    let e = Edge::new(from, to);
    let canon = if e.0 == from { a } else { a + Angle::PI };
    angles.insert(e, canon);
}

fn get_directed(angles: &BTreeMap<Edge, Angle>, from: Vertex, to: Vertex) -> Option<Angle> {
    let e = Edge::new(from, to);
    angles
        .get(&e)
        .map(|&a| if e.0 == from { a } else { a + Angle::PI })
}

pub fn reference_angle_table(
    ais: &AngleIndexSet,
    angles: &BTreeMap<AngleTriple, Angle>,
    reference: (Vertex, Vertex),
) -> Result<ReferenceAngleTable> {
    let host = ais.host();
    let (r0, r1) = reference;
    if !host.has_edge(r0, r1) {
        return Err(Error::InvalidParameter(format!(
            "reference edge ({r0}, {r1}) is not in the graph"
        )));
    }
    for t in ais.iter() {
        if !angles.contains_key(&t) {
            return Err(Error::MissingAngle(t));
        }
    }
    let aig = ais.angle_index_graph();
    let n = host.n();
    let root = Edge::new(r0, r1);
    let mut table = BTreeMap::new();
    set_directed(&mut table, r0, r1, Angle::ZERO);
    let mut queue = VecDeque::from([root]);
    while let Some(e) = queue.pop_front() {
        for &(w, idx) in aig.neighbors(e.hash(n)) {
            let next = aig.host_edge(w).expect("vertex of the angle index graph");
            if table.contains_key(&next) {
                continue;
            }
            let t = aig.edges()[idx].triple;
            let alpha = angles[&t];
            if next == t.second_edge() {
                let a_ji = get_directed(&table, t.j, t.i).expect("visited");
                set_directed(&mut table, t.j, t.k, a_ji + alpha);
            } else {
                let a_jk = get_directed(&table, t.j, t.k).expect("visited");
                set_directed(&mut table, t.j, t.i, a_jk - alpha);
            }
            queue.push_back(next);
        }
    }
    if table.len() != host.edge_count() {
        return Err(Error::NotAngleConnected);
    }
    let cycle_residual = ais
        .iter()
        .map(|t| {
            let a_ji = get_directed(&table, t.j, t.i).expect("covered");
            let a_jk = get_directed(&table, t.j, t.k).expect("covered");
            (a_ji + angles[&t]).distance(a_jk)
        })
        .fold(0.0, f64::max);
    Ok(ReferenceAngleTable {
        reference,
        angles: table,
        cycle_residual,
    })
}
