//! Undirected graphs, the edge hash encoding, angle index sets and angle
//! index graphs.
//!
//! Vertices are 1-based throughout so that identifiers line up with the
//! usual textbook numbering of examples.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;

/// Encodes the undirected edge `{i, j}` of a graph on `n` vertices as
/// `(min - 1) * n + max`.
pub fn hash_edge(i: Vertex, j: Vertex, n: usize) -> Result<usize> {
    for v in [i, j] {
        if v == 0 || v > n {
            return Err(Error::InvalidVertex { vertex: v, n });
        }
    }
    if i == j {
        return Err(Error::SelfLoop(i));
    }
    Ok((i.min(j) - 1) * n + i.max(j))
}

/// Canonical undirected edge, stored with `.0 < .1`.
///
/// The derived ordering is lexicographic, which coincides with ascending
/// [`hash_edge`] order for any fixed vertex count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct Edge(pub Vertex, pub Vertex);

impl Edge {
    pub fn new(a: Vertex, b: Vertex) -> Self {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn contains(self, v: Vertex) -> bool {
        self.0 == v || self.1 == v
    }

    pub fn other(self, v: Vertex) -> Option<Vertex> {
        if self.0 == v {
            Some(self.1)
        } else if self.1 == v {
            Some(self.0)
        } else {
            None
        }
    }

    pub fn hash(self, n: usize) -> usize {
        (self.0 - 1) * n + self.1
    }
}

impl From<[usize; 2]> for Edge {
    fn from(e: [usize; 2]) -> Self {
        Edge::new(e[0], e[1])
    }
}

impl From<Edge> for [usize; 2] {
    fn from(e: Edge) -> Self {
        [e.0, e.1]
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
}

/// Simple undirected graph on vertices `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct Graph {
    n: usize,
    edges: BTreeSet<Edge>,
    adjacency: Vec<BTreeSet<Vertex>>,
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;
    fn try_from(g: GraphJson) -> Result<Self> {
        Graph::new(g.n, g.edges.into_iter().map(|[a, b]| (a, b)))
    }
}

impl From<Graph> for GraphJson {
    fn from(g: Graph) -> Self {
        GraphJson {
            n: g.n,
            edges: g.edges.iter().map(|&e| e.into()).collect(),
        }
    }
}

impl Graph {
    /// Builds a graph, rejecting out-of-range vertices, self-loops and
    /// duplicated edges.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let mut g = Graph::empty(n);
        for (a, b) in edges {
            hash_edge(a, b, n)?;
            let e = Edge::new(a, b);
            if !g.edges.insert(e) {
                return Err(Error::DuplicateEdge(e.0, e.1));
            }
            g.adjacency[a - 1].insert(b);
            g.adjacency[b - 1].insert(a);
        }
        Ok(g)
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: BTreeSet::new(),
            adjacency: vec![BTreeSet::new(); n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j)));
        Graph::new(n, edges).expect("complete graph edges are valid")
    }

    pub fn path(n: usize) -> Self {
        Graph::new(n, (1..n).map(|i| (i, i + 1))).expect("path edges are valid")
    }

    pub fn cycle(n: usize) -> Self {
        let mut edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        if n >= 3 {
            edges.push((n, 1));
        }
        Graph::new(n, edges).expect("cycle edges are valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in ascending hash order.
    pub fn edges(&self) -> impl ExactSizeIterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        a != b && self.edges.contains(&Edge::new(a, b))
    }

    /// Neighbors of `v` in ascending order.
    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.adjacency[v - 1].iter().copied()
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v - 1].len()
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        v >= 1 && v <= self.n
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if self.contains_vertex(v) {
            Ok(())
        } else {
            Err(Error::InvalidVertex {
                vertex: v,
                n: self.n,
            })
        }
    }

    /// Position of `e` in the ascending-hash edge order.
    pub fn edge_index(&self, e: Edge) -> Option<usize> {
        if !self.edges.contains(&e) {
            return None;
        }
        Some(self.edges.range(..e).count())
    }

    /// Map from edge to its row index in the ascending-hash order.
    pub fn edge_indices(&self) -> BTreeMap<Edge, usize> {
        self.edges
            .iter()
            .enumerate()
            .map(|(k, &e)| (e, k))
            .collect()
    }

    pub fn with_edges(&self, edges: impl IntoIterator<Item = Edge>) -> Result<Graph> {
        Graph::new(self.n, edges.into_iter().map(|e| (e.0, e.1)))
    }

    pub fn without_edge(&self, e: Edge) -> Graph {
        let mut g = self.clone();
        if g.edges.remove(&e) {
            g.adjacency[e.0 - 1].remove(&e.1);
            g.adjacency[e.1 - 1].remove(&e.0);
        }
        g
    }

    pub fn add_edge(&mut self, a: Vertex, b: Vertex) -> Result<()> {
        hash_edge(a, b, self.n)?;
        let e = Edge::new(a, b);
        if !self.edges.insert(e) {
            return Err(Error::DuplicateEdge(e.0, e.1));
        }
        self.adjacency[a - 1].insert(b);
        self.adjacency[b - 1].insert(a);
        Ok(())
    }

    /// Appends a new isolated vertex and returns its id.
    pub fn add_vertex(&mut self) -> Vertex {
        self.n += 1;
        self.adjacency.push(BTreeSet::new());
        self.n
    }

    fn bfs_parents(&self, root: Vertex) -> Vec<Option<Vertex>> {
        let mut parent = vec![None; self.n + 1];
        let mut seen = vec![false; self.n + 1];
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(u) = queue.pop_front() {
            for w in self.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(u);
                    queue.push_back(w);
                }
            }
        }
        parent[root] = Some(root);
        parent
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        self.bfs_parents(1).iter().skip(1).all(Option::is_some)
    }

    /// Shortest path from `u` to `v` (inclusive), found by BFS.
    pub fn undirected_path(&self, u: Vertex, v: Vertex) -> Result<Vec<Vertex>> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let parent = self.bfs_parents(u);
        if parent[v].is_none() {
            return Err(Error::NoPath(u, v));
        }
        let mut path = vec![v];
        let mut cur = v;
        while cur != u {
            cur = parent[cur].expect("reached vertices have parents");
            path.push(cur);
        }
        path.reverse();
        Ok(path)
    }

    /// BFS spanning tree rooted at `root`, neighbors visited in ascending
    /// order.  Edges are returned in discovery order.
    pub fn bfs_spanning_tree(&self, root: Vertex) -> Result<Vec<Edge>> {
        self.check_vertex(root)?;
        let mut seen = vec![false; self.n + 1];
        let mut queue = VecDeque::from([root]);
        let mut tree = Vec::with_capacity(self.n.saturating_sub(1));
        seen[root] = true;
        while let Some(u) = queue.pop_front() {
            for w in self.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    tree.push(Edge::new(u, w));
                    queue.push_back(w);
                }
            }
        }
        if tree.len() + 1 != self.n {
            return Err(Error::Disconnected);
        }
        Ok(tree)
    }
}

/// Index `(i, j, k)` of the signed angle at `j` from edge `(j, i)` to edge
/// `(j, k)`.
///
/// Ordering is lexicographic on `(j, i, k)`, i.e. grouped by center vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[usize; 3]", into = "[usize; 3]")]
pub struct AngleTriple {
    pub i: Vertex,
    pub j: Vertex,
    pub k: Vertex,
}

impl AngleTriple {
    /// Triple exactly as given, orientation preserved.
    pub const fn raw(i: Vertex, j: Vertex, k: Vertex) -> Self {
        AngleTriple { i, j, k }
    }

    /// Canonical triple with `i < k`.  The reversed triple indexes the
    /// complementary angle, so both describe the same constraint.
    pub fn new(i: Vertex, j: Vertex, k: Vertex) -> Self {
        if i <= k {
            AngleTriple { i, j, k }
        } else {
            AngleTriple { i: k, j, k: i }
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.i < self.k
    }

    pub fn center(&self) -> Vertex {
        self.j
    }

    /// Edge `(j, i)`.
    pub fn first_edge(&self) -> Edge {
        Edge::new(self.j, self.i)
    }

    /// Edge `(j, k)`.
    pub fn second_edge(&self) -> Edge {
        Edge::new(self.j, self.k)
    }

    fn key(&self) -> (Vertex, Vertex, Vertex) {
        (self.j, self.i, self.k)
    }
}

impl PartialOrd for AngleTriple {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AngleTriple {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl From<[usize; 3]> for AngleTriple {
    fn from(t: [usize; 3]) -> Self {
        AngleTriple::raw(t[0], t[1], t[2])
    }
}

impl From<AngleTriple> for [usize; 3] {
    fn from(t: AngleTriple) -> Self {
        [t.i, t.j, t.k]
    }
}

impl fmt::Display for AngleTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.i, self.j, self.k)
    }
}

/// JSON shape of an angle index set: `{"triples": [[i, j, k], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AisJson {
    pub triples: Vec<[usize; 3]>,
}

/// A set of canonical angle triples, each valid against `host`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AngleIndexSet {
    host: Graph,
    triples: BTreeSet<AngleTriple>,
}

impl AngleIndexSet {
    pub fn empty(host: Graph) -> Self {
        AngleIndexSet {
            host,
            triples: BTreeSet::new(),
        }
    }

    /// Builds a set from triples in any orientation; each is canonicalized
    /// and validated against the host.
    pub fn new(host: Graph, triples: impl IntoIterator<Item = AngleTriple>) -> Result<Self> {
        let mut set = AngleIndexSet::empty(host);
        for t in triples {
            set.insert(t)?;
        }
        Ok(set)
    }

    pub fn from_json(host: Graph, json: &AisJson) -> Result<Self> {
        AngleIndexSet::new(host, json.triples.iter().map(|&t| AngleTriple::from(t)))
    }

    pub fn to_json(&self) -> AisJson {
        AisJson {
            triples: self.triples.iter().map(|&t| t.into()).collect(),
        }
    }

    /// Every signed angle of the host: `(j,i),(j,k)` edges with `i < k`.
    pub fn full(host: &Graph) -> Self {
        let mut triples = BTreeSet::new();
        for j in 1..=host.n() {
            let nbrs: Vec<_> = host.neighbors(j).collect();
            for (a, &i) in nbrs.iter().enumerate() {
                for &k in &nbrs[a + 1..] {
                    triples.insert(AngleTriple { i, j, k });
                }
            }
        }
        AngleIndexSet {
            host: host.clone(),
            triples,
        }
    }

    pub fn host(&self) -> &Graph {
        &self.host
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Triples in `(j, i, k)` lexicographic order.
    pub fn iter(&self) -> impl ExactSizeIterator<Item = AngleTriple> + '_ {
        self.triples.iter().copied()
    }

    pub fn contains(&self, t: AngleTriple) -> bool {
        self.triples.contains(&AngleTriple::new(t.i, t.j, t.k))
    }

    /// Inserts `t` in canonical form.  Returns whether it was new.
    pub fn insert(&mut self, t: AngleTriple) -> Result<bool> {
        let valid = t.i != t.k
            && t.i != t.j
            && t.k != t.j
            && [t.i, t.j, t.k]
                .iter()
                .all(|&v| self.host.contains_vertex(v))
            && self.host.has_edge(t.j, t.i)
            && self.host.has_edge(t.j, t.k);
        if !valid {
            return Err(Error::InvalidTriple(t));
        }
        Ok(self.triples.insert(AngleTriple::new(t.i, t.j, t.k)))
    }

    pub fn remove(&mut self, t: AngleTriple) -> bool {
        self.triples.remove(&AngleTriple::new(t.i, t.j, t.k))
    }

    /// Triples centered at `v`.
    pub fn centered_at(&self, v: Vertex) -> AngleIndexSet {
        AngleIndexSet {
            host: self.host.clone(),
            triples: self.triples.iter().filter(|t| t.j == v).copied().collect(),
        }
    }

    /// Host edges that appear in at least one triple.
    pub fn covered_edges(&self) -> BTreeSet<Edge> {
        self.triples
            .iter()
            .flat_map(|t| [t.first_edge(), t.second_edge()])
            .collect()
    }

    /// The same triples re-hosted on another graph that contains them.
    pub fn rehost(&self, host: Graph) -> Result<AngleIndexSet> {
        AngleIndexSet::new(host, self.iter())
    }

    pub fn angle_index_graph(&self) -> AngleIndexGraph {
        build_angle_index_graph(self)
    }

    pub fn is_angle_connected(&self) -> bool {
        is_angle_connected(self)
    }
}

/// All signed-angle triples of `g`.
pub fn all_angle_triples(g: &Graph) -> AngleIndexSet {
    AngleIndexSet::full(g)
}

/// Edge of an angle index graph together with the triple that generated it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AngleIndexEdge {
    pub a: usize,
    pub b: usize,
    pub triple: AngleTriple,
}

/// Graph whose vertices are host edges (identified by hash) and whose edges
/// are the triples of an angle index set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AngleIndexGraph {
    n_host: usize,
    vertices: BTreeMap<usize, Edge>,
    edges: Vec<AngleIndexEdge>,
    adjacency: BTreeMap<usize, Vec<(usize, usize)>>,
}

pub fn build_angle_index_graph(ais: &AngleIndexSet) -> AngleIndexGraph {
    let n = ais.host().n();
    let vertices: BTreeMap<usize, Edge> = ais.host().edges().map(|e| (e.hash(n), e)).collect();
    let mut adjacency: BTreeMap<usize, Vec<(usize, usize)>> =
        vertices.keys().map(|&h| (h, Vec::new())).collect();
    let mut edges = Vec::with_capacity(ais.len());
    for t in ais.iter() {
        let a = t.first_edge().hash(n);
        let b = t.second_edge().hash(n);
        let idx = edges.len();
        edges.push(AngleIndexEdge { a, b, triple: t });
        adjacency.get_mut(&a).expect("host edge").push((b, idx));
        adjacency.get_mut(&b).expect("host edge").push((a, idx));
    }
    for list in adjacency.values_mut() {
        list.sort_unstable();
    }
    AngleIndexGraph {
        n_host: n,
        vertices,
        edges,
        adjacency,
    }
}

impl AngleIndexGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Vertex ids (edge hashes) in ascending order.
    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.vertices.keys().copied()
    }

    pub fn host_edge(&self, id: usize) -> Option<Edge> {
        self.vertices.get(&id).copied()
    }

    pub fn vertex_of(&self, e: Edge) -> usize {
        e.hash(self.n_host)
    }

    pub fn edges(&self) -> &[AngleIndexEdge] {
        &self.edges
    }

    /// `(neighbor id, edge index)` pairs, ascending by neighbor id.
    pub fn neighbors(&self, id: usize) -> &[(usize, usize)] {
        self.adjacency.get(&id).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Recovers the angle index set encoded by the edges.
    pub fn triples(&self) -> impl Iterator<Item = AngleTriple> + '_ {
        self.edges.iter().map(|e| e.triple)
    }

    /// Number of connected components over all vertices.
    pub fn component_count(&self) -> usize {
        let mut seen = BTreeSet::new();
        let mut count = 0;
        for v in self.vertices() {
            if seen.insert(v) {
                count += 1;
                let mut queue = VecDeque::from([v]);
                while let Some(u) = queue.pop_front() {
                    for &(w, _) in self.neighbors(u) {
                        if seen.insert(w) {
                            queue.push_back(w);
                        }
                    }
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// BFS spanning tree from `root`, neighbors visited in ascending id
    /// order.  Returns the generating edges in discovery order.
    pub fn bfs_spanning_tree(&self, root: usize) -> Result<Vec<AngleIndexEdge>> {
        if !self.vertices.contains_key(&root) {
            return Err(Error::InvalidParameter(format!(
                "angle index graph has no vertex {root}"
            )));
        }
        let mut seen = BTreeSet::from([root]);
        let mut queue = VecDeque::from([root]);
        let mut tree = Vec::new();
        while let Some(u) = queue.pop_front() {
            for &(w, idx) in self.neighbors(u) {
                if seen.insert(w) {
                    tree.push(self.edges[idx]);
                    queue.push_back(w);
                }
            }
        }
        if seen.len() != self.vertices.len() {
            return Err(Error::NotAngleConnected);
        }
        Ok(tree)
    }
}

/// Whether the angle index graph of `ais` is connected over every host edge.
pub fn is_angle_connected(ais: &AngleIndexSet) -> bool {
    build_angle_index_graph(ais).is_connected()
}
