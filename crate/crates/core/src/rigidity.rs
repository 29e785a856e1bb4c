//! Frameworks, rigidity matrices and rank-based rigidity verdicts.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{bearing, projection_matrix, signed_angle, Vec2, COINCIDENCE_TOL};
use crate::graph::{AngleIndexSet, AngleTriple, Edge, Graph, Vertex};
use crate::numerics::{self, SeededRng, DEFAULT_RANK_TOL};

/// Points within this distance of a common line count as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// A graph together with one position per vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct Framework {
    graph: Graph,
    config: Vec<Vec2>,
}

impl Framework {
    pub fn new(graph: Graph, config: Vec<Vec2>) -> Result<Self> {
        if config.len() != graph.n() {
            return Err(Error::DimensionMismatch {
                n: graph.n(),
                config: config.len(),
            });
        }
        if config.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFiniteConfiguration);
        }
        for a in 0..config.len() {
            for b in a + 1..config.len() {
                if config[a].distance(config[b]) < COINCIDENCE_TOL {
                    return Err(Error::CoincidentVertices { i: a + 1, j: b + 1 });
                }
            }
        }
        Ok(Framework { graph, config })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn config(&self) -> &[Vec2] {
        &self.config
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Position of 1-based vertex `v`.
    pub fn position(&self, v: Vertex) -> Vec2 {
        self.config[v - 1]
    }

    /// Same configuration over a different graph on the same vertices.
    pub fn with_graph(&self, graph: Graph) -> Result<Framework> {
        Framework::new(graph, self.config.clone())
    }

    pub fn with_config(&self, config: Vec<Vec2>) -> Result<Framework> {
        Framework::new(self.graph.clone(), config)
    }

    /// Stacked coordinates `(x1, y1, x2, y2, ...)`.
    pub fn stacked(&self) -> DVector<f64> {
        stack(&self.config)
    }

    /// Unit vector from the lower- to the higher-numbered endpoint of `e`.
    pub fn edge_bearing(&self, e: Edge) -> Result<Vec2> {
        bearing(self.position(e.0), self.position(e.1))
    }

    pub fn edge_length(&self, e: Edge) -> f64 {
        self.position(e.0).distance(self.position(e.1))
    }

    pub fn angle(&self, t: AngleTriple) -> Result<crate::geometry::Angle> {
        signed_angle(self.position(t.i), self.position(t.j), self.position(t.k))
    }
}

pub fn stack(config: &[Vec2]) -> DVector<f64> {
    DVector::from_iterator(config.len() * 2, config.iter().flat_map(|p| [p.x, p.y]))
}

pub fn unstack(x: &[f64]) -> Vec<Vec2> {
    x.chunks_exact(2).map(|c| Vec2::new(c[0], c[1])).collect()
}

/// Stacked edge bearings in ascending edge-hash order.
pub fn bearing_function(fw: &Framework) -> Result<DVector<f64>> {
    let mut out = Vec::with_capacity(2 * fw.graph.edge_count());
    for e in fw.graph.edges() {
        let b = fw.edge_bearing(e)?;
        out.push(b.x);
        out.push(b.y);
    }
    Ok(DVector::from_vec(out))
}

/// Signed incidence matrix `H` (edges x vertices): `-1` at the lower
/// endpoint, `+1` at the higher one.
pub fn incidence_matrix(g: &Graph) -> DMatrix<f64> {
    let mut h = DMatrix::zeros(g.edge_count(), g.n());
    for (row, e) in g.edges().enumerate() {
        h[(row, e.0 - 1)] = -1.0;
        h[(row, e.1 - 1)] = 1.0;
    }
    h
}

/// `H kron I2`.
pub fn incidence_matrix_2d(g: &Graph) -> DMatrix<f64> {
    let h = incidence_matrix(g);
    h.kronecker(&DMatrix::<f64>::identity(2, 2))
}

/// Jacobian of [`bearing_function`].
pub fn bearing_rigidity_matrix(fw: &Framework) -> Result<DMatrix<f64>> {
    let g = &fw.graph;
    let mut r = DMatrix::zeros(2 * g.edge_count(), 2 * g.n());
    for (row, e) in g.edges().enumerate() {
        let b = fw.edge_bearing(e)?;
        let p = projection_matrix(b).scale(1.0 / fw.edge_length(e));
        for (vertex, sign) in [(e.1, 1.0), (e.0, -1.0)] {
            let c = 2 * (vertex - 1);
            for a in 0..2 {
                for bb in 0..2 {
                    r[(2 * row + a, c + bb)] = sign * p.m[a][bb];
                }
            }
        }
    }
    Ok(r)
}

/// Stacked signed angles in triple order.
pub fn signed_angle_function(fw: &Framework, ais: &AngleIndexSet) -> Result<DVector<f64>> {
    check_ais_host(fw, ais)?;
    let mut out = Vec::with_capacity(ais.len());
    for t in ais.iter() {
        out.push(fw.angle(t)?.radians());
    }
    Ok(DVector::from_vec(out))
}

fn check_ais_host(fw: &Framework, ais: &AngleIndexSet) -> Result<()> {
    if ais.host().n() != fw.n() {
        return Err(Error::DimensionMismatch {
            n: fw.n(),
            config: ais.host().n(),
        });
    }
    for t in ais.iter() {
        if !fw.graph.has_edge(t.j, t.i) || !fw.graph.has_edge(t.j, t.k) {
            return Err(Error::InvalidTriple(t));
        }
    }
    Ok(())
}

/// Gradient of `alpha_ijk` with respect to the edge vector `p_i - p_j`,
/// written against the canonical orientation of edge `(j, i)`.
fn edge_gradient(fw: &Framework, center: Vertex, tip: Vertex) -> Result<(Edge, [f64; 2])> {
    let b = bearing(fw.position(center), fw.position(tip))?;
    let len = fw.position(center).distance(fw.position(tip));
    // b^T R(pi/2) = (b_y, -b_x)
    let mut g = [b.y / len, -b.x / len];
    let e = Edge::new(center, tip);
    if e.0 != center {
        g = [-g[0], -g[1]];
    }
    Ok((e, g))
}

/// Singularity-free signed-angle derivative with respect to the stacked
/// edge vectors (`|T| x 2|E|`).
pub fn signed_angle_edge_matrix(fw: &Framework, ais: &AngleIndexSet) -> Result<DMatrix<f64>> {
    check_ais_host(fw, ais)?;
    let index = fw.graph.edge_indices();
    let mut r = DMatrix::zeros(ais.len(), 2 * fw.graph.edge_count());
    for (row, t) in ais.iter().enumerate() {
        let (ei, gi) = edge_gradient(fw, t.j, t.i)?;
        let (ek, gk) = edge_gradient(fw, t.j, t.k)?;
        let ci = 2 * index[&ei];
        let ck = 2 * index[&ek];
        r[(row, ci)] += gi[0];
        r[(row, ci + 1)] += gi[1];
        r[(row, ck)] -= gk[0];
        r[(row, ck + 1)] -= gk[1];
    }
    Ok(r)
}

/// Signed-angle rigidity matrix, the Jacobian of [`signed_angle_function`].
/// Defined for every non-coincident configuration, including collinear
/// triples.
pub fn signed_angle_rigidity_matrix(fw: &Framework, ais: &AngleIndexSet) -> Result<DMatrix<f64>> {
    Ok(signed_angle_edge_matrix(fw, ais)? * incidence_matrix_2d(&fw.graph))
}

/// The same matrix through the arccos derivative,
/// `diag(-1/sin alpha) R_b R_B`.  Fails near `sin alpha = 0`.
pub fn signed_angle_rigidity_matrix_via_bearings(
    fw: &Framework,
    ais: &AngleIndexSet,
    min_abs_sin: f64,
) -> Result<DMatrix<f64>> {
    check_ais_host(fw, ais)?;
    let index = fw.graph.edge_indices();
    let rb = bearing_rigidity_matrix(fw)?;
    let mut rb_t = DMatrix::<f64>::zeros(ais.len(), 2 * fw.graph.edge_count());
    for (row, t) in ais.iter().enumerate() {
        let s = fw.angle(t)?.radians().sin();
        if s.abs() < min_abs_sin {
            return Err(Error::Numerical(format!(
                "sin of angle {t} is {s:e}, below {min_abs_sin:e}"
            )));
        }
        let b_ji = bearing(fw.position(t.j), fw.position(t.i))?;
        let b_jk = bearing(fw.position(t.j), fw.position(t.k))?;
        // d cos = b_jk . db_ji + b_ji . db_jk, with db expressed along the
        // canonical edge orientation
        for (tip, coef) in [(t.i, b_jk), (t.k, b_ji)] {
            let e = Edge::new(t.j, tip);
            let sign = if e.0 == t.j { 1.0 } else { -1.0 };
            let c = 2 * index[&e];
            rb_t[(row, c)] += -sign * coef.x / s;
            rb_t[(row, c + 1)] += -sign * coef.y / s;
        }
    }
    Ok(rb_t * rb)
}

/// Standard distance rigidity matrix (`|E| x 2n`).
pub fn distance_rigidity_matrix(fw: &Framework) -> Result<DMatrix<f64>> {
    let g = &fw.graph;
    let mut r = DMatrix::zeros(g.edge_count(), 2 * g.n());
    for (row, e) in g.edges().enumerate() {
        let (pa, pb) = (fw.position(e.0), fw.position(e.1));
        if pa.distance(pb) < COINCIDENCE_TOL {
            return Err(Error::CoincidentPoints {
                distance: pa.distance(pb),
            });
        }
        let d = pa - pb;
        let (ca, cb) = (2 * (e.0 - 1), 2 * (e.1 - 1));
        r[(row, ca)] = d.x;
        r[(row, ca + 1)] = d.y;
        r[(row, cb)] = -d.x;
        r[(row, cb + 1)] = -d.y;
    }
    Ok(r)
}

/// Rank and descending singular values under the default tolerance.
pub fn numerical_rank(m: &DMatrix<f64>) -> Result<(usize, Vec<f64>)> {
    numerical_rank_with(m, DEFAULT_RANK_TOL)
}

pub fn numerical_rank_with(m: &DMatrix<f64>, tol_rel: f64) -> Result<(usize, Vec<f64>)> {
    let s = numerics::svd(m)?.singular_values;
    Ok((numerics::rank_from_svd(&s, tol_rel), s))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub n: usize,
    pub edge_count: usize,
    pub triple_count: usize,
    pub rank_bearing: usize,
    pub rank_signed_angle: usize,
    pub null_dim_signed_angle: usize,
    pub is_ibr: bool,
    pub is_isar: bool,
    /// Relative threshold applied to the largest singular value.
    pub tolerance_used: f64,
    /// Singular values of the signed-angle rigidity matrix, descending.
    pub singular_values: Vec<f64>,
    pub singular_values_bearing: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

pub fn analyze(fw: &Framework) -> Result<RigidityReport> {
    analyze_with(fw, DEFAULT_RANK_TOL)
}

/// Rank tests over every edge and every angle triple of the graph.
pub fn analyze_with(fw: &Framework, tol_rel: f64) -> Result<RigidityReport> {
    let n = fw.n();
    let full = AngleIndexSet::full(&fw.graph);
    let rs = signed_angle_rigidity_matrix(fw, &full)?;
    let rb = bearing_rigidity_matrix(fw)?;
    let (rank_s, sv_s) = numerical_rank_with(&rs, tol_rel)?;
    let (rank_b, sv_b) = numerical_rank_with(&rb, tol_rel)?;
    Ok(RigidityReport {
        n,
        edge_count: fw.graph.edge_count(),
        triple_count: full.len(),
        rank_bearing: rank_b,
        rank_signed_angle: rank_s,
        null_dim_signed_angle: 2 * n - rank_s,
        is_ibr: n >= 2 && rank_b == 2 * n - 3,
        is_isar: n >= 2 && rank_s + 4 == 2 * n,
        tolerance_used: tol_rel,
        singular_values: sv_s,
        singular_values_bearing: sv_b,
        seed: None,
    })
}

/// Rank of the signed-angle rigidity matrix restricted to `ais`.
pub fn restricted_rank(fw: &Framework, ais: &AngleIndexSet) -> Result<usize> {
    Ok(numerical_rank(&signed_angle_rigidity_matrix(fw, ais)?)?.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrivialMotionBasis {
    pub scaling: DVector<f64>,
    pub rotation: DVector<f64>,
    pub translation_x: DVector<f64>,
    pub translation_y: DVector<f64>,
}

impl TrivialMotionBasis {
    /// The four motions as columns of a `2n x 4` matrix.
    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_columns(&[
            self.scaling.clone(),
            self.rotation.clone(),
            self.translation_x.clone(),
            self.translation_y.clone(),
        ])
    }

    pub fn vectors(&self) -> [&DVector<f64>; 4] {
        [
            &self.scaling,
            &self.rotation,
            &self.translation_x,
            &self.translation_y,
        ]
    }
}

pub fn trivial_motion_basis(fw: &Framework) -> Result<TrivialMotionBasis> {
    if is_degenerate(fw.config()) {
        return Err(Error::DegenerateConfiguration);
    }
    let n = fw.n();
    let rotated: Vec<Vec2> = fw.config().iter().map(|p| p.perp()).collect();
    Ok(TrivialMotionBasis {
        scaling: fw.stacked(),
        rotation: stack(&rotated),
        translation_x: stack(&vec![Vec2::E1; n]),
        translation_y: stack(&vec![Vec2::E2; n]),
    })
}

/// Largest distance from a point to the total-least-squares line.
pub fn line_fit_residual(config: &[Vec2]) -> f64 {
    if config.len() < 3 {
        return 0.0;
    }
    let m = config.len() as f64;
    let c = config.iter().fold(Vec2::ZERO, |a, &p| a + p) * (1.0 / m);
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for p in config {
        let d = *p - c;
        sxx += d.x * d.x;
        sxy += d.x * d.y;
        syy += d.y * d.y;
    }
    // principal direction of the scatter matrix
    let theta = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let normal = Vec2::from_polar(theta).perp();
    config
        .iter()
        .map(|&p| (p - c).dot(normal).abs())
        .fold(0.0, f64::max)
}

/// All points lie within [`DEGENERACY_TOL`] of a common line.
pub fn is_degenerate(config: &[Vec2]) -> bool {
    line_fit_residual(config) < DEGENERACY_TOL
}

/// Outcome of the (2,3) pebble game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PebbleGame {
    /// Edges accepted as independent, in scan order.
    pub independent: Vec<Edge>,
    pub rejected: Vec<Edge>,
}

impl PebbleGame {
    /// Rank of the generic rigidity matroid.
    pub fn rank(&self) -> usize {
        self.independent.len()
    }
}

struct Pebbles {
    free: Vec<u8>,
    out: Vec<Vec<usize>>,
}

impl Pebbles {
    /// Moves one pebble onto `target` along a reversed out-edge path,
    /// never drawing from vertices in `blocked`.
    fn fetch(&mut self, target: usize, blocked: &[usize]) -> bool {
        let n = self.free.len();
        let mut seen = vec![false; n];
        let mut parent = vec![usize::MAX; n];
        seen[target] = true;
        for &b in blocked {
            seen[b] = true;
        }
        let mut stack = vec![target];
        let mut found = None;
        'search: while let Some(u) = stack.pop() {
            for idx in 0..self.out[u].len() {
                let w = self.out[u][idx];
                if seen[w] {
                    continue;
                }
                seen[w] = true;
                parent[w] = u;
                if self.free[w] > 0 {
                    found = Some(w);
                    break 'search;
                }
                stack.push(w);
            }
        }
        let Some(mut w) = found else {
            return false;
        };
        self.free[w] -= 1;
        while w != target {
            let u = parent[w];
            let pos = self.out[u].iter().position(|&x| x == w).expect("path edge");
            self.out[u].swap_remove(pos);
            self.out[w].push(u);
            w = u;
        }
        self.free[target] += 1;
        true
    }

    fn try_insert(&mut self, u: usize, v: usize) -> bool {
        while self.free[u] < 2 {
            if !self.fetch(u, &[v]) {
                break;
            }
        }
        while self.free[v] < 2 {
            if !self.fetch(v, &[u]) {
                break;
            }
        }
        if self.free[u] + self.free[v] < 4 {
            return false;
        }
        self.free[u] -= 1;
        self.out[u].push(v);
        true
    }
}

/// Runs the (2,3) pebble game over the edges in ascending hash order.
pub fn pebble_game(g: &Graph) -> PebbleGame {
    let n = g.n();
    let mut state = Pebbles {
        free: vec![2; n],
        out: vec![Vec::new(); n],
    };
    let mut result = PebbleGame {
        independent: Vec::new(),
        rejected: Vec::new(),
    };
    for e in g.edges() {
        if state.try_insert(e.0 - 1, e.1 - 1) {
            result.independent.push(e);
        } else {
            result.rejected.push(e);
        }
    }
    result
}

/// `|E| = 2n - 3` and every subgraph on `v` vertices spans at most
/// `2v - 3` edges.
pub fn is_laman(g: &Graph) -> bool {
    let n = g.n();
    if n < 3 || g.edge_count() != 2 * n - 3 {
        return false;
    }
    pebble_game(g).rejected.is_empty()
}

/// Whether some spanning subgraph of `g` is Laman.
pub fn contains_laman_spanning_subgraph(g: &Graph) -> bool {
    g.n() >= 3 && pebble_game(g).rank() == 2 * g.n() - 3
}

/// Greedy choice of `2n - 3` edges with independent distance-rigidity rows.
pub fn extract_laman_spanning_subgraph(fw: &Framework) -> Result<Graph> {
    let report = analyze(fw)?;
    if !report.is_isar {
        return Err(Error::NotIsar {
            rank: report.rank_signed_angle,
            expected: 2 * fw.n() - 4,
        });
    }
    let rows = distance_rigidity_matrix(fw)?;
    let target = 2 * fw.n() - 3;
    let cols = rows.ncols();
    // echelon rows with their pivot columns
    let mut basis: Vec<(usize, Vec<f64>)> = Vec::new();
    let mut chosen = Vec::with_capacity(target);
    for (r, e) in fw.graph.edges().enumerate() {
        if chosen.len() == target {
            break;
        }
        let mut v: Vec<f64> = (0..cols).map(|c| rows[(r, c)]).collect();
        let scale = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        for (piv, b) in &basis {
            let f = v[*piv] / b[*piv];
            if f != 0.0 {
                for c in 0..cols {
                    v[c] -= f * b[c];
                }
            }
        }
        let (piv, mag) = v
            .iter()
            .enumerate()
            .map(|(c, x)| (c, x.abs()))
            .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if mag > 1e-8 * scale {
            basis.push((piv, v));
            chosen.push(e);
        }
    }
    let sub = fw.graph.with_edges(chosen)?;
    if !is_laman(&sub) {
        return Err(Error::Numerical(
            "selected rows are independent but the subgraph is not Laman".into(),
        ));
    }
    Ok(sub)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenericVerdict {
    pub samples: Vec<bool>,
    pub isar_count: usize,
    /// ISAR on a strict majority of samples.
    pub majority: bool,
    /// The graph has a Laman spanning subgraph.
    pub combinatorial: bool,
    pub seed: u64,
}

/// ISAR verdicts over `trials` seeded uniform configurations in the unit
/// square, along with the combinatorial Laman verdict.
pub fn generic_verdict(g: &Graph, trials: usize, seed: u64) -> Result<GenericVerdict> {
    let mut rng = SeededRng::new(seed);
    let mut samples = Vec::with_capacity(trials);
    for _ in 0..trials {
        let fw = random_framework(g.clone(), &mut rng)?;
        samples.push(analyze(&fw)?.is_isar);
    }
    let isar_count = samples.iter().filter(|&&s| s).count();
    Ok(GenericVerdict {
        majority: 2 * isar_count > trials,
        isar_count,
        samples,
        combinatorial: contains_laman_spanning_subgraph(g),
        seed,
    })
}

/// `n` points uniform in `[0, 1]^2`.
pub fn random_configuration(n: usize, rng: &mut SeededRng) -> Vec<Vec2> {
    (0..n)
        .map(|_| Vec2::new(rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)))
        .collect()
}

pub fn random_framework(g: Graph, rng: &mut SeededRng) -> Result<Framework> {
    loop {
        let config = random_configuration(g.n(), rng);
        match Framework::new(g.clone(), config) {
            Err(Error::CoincidentVertices { .. }) => continue,
            other => return other,
        }
    }
}

/// Laman graph grown from a triangle by random vertex additions: either two
/// new edges, or an edge split that removes `(a, b)` and joins the new
/// vertex to `a`, `b` and a third vertex.
pub fn random_laman_graph(n: usize, rng: &mut SeededRng) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "Laman graphs need at least 3 vertices, got {n}"
        )));
    }
    let mut g = Graph::complete(3);
    while g.n() < n {
        let existing = g.n();
        if rng.bernoulli(0.5) {
            let a = 1 + rng.index(existing);
            let mut b = 1 + rng.index(existing - 1);
            if b >= a {
                b += 1;
            }
            let v = g.add_vertex();
            g.add_edge(v, a)?;
            g.add_edge(v, b)?;
        } else {
            let edges: Vec<Edge> = g.edges().collect();
            let e = edges[rng.index(edges.len())];
            let others: Vec<Vertex> = (1..=existing).filter(|&c| !e.contains(c)).collect();
            let c = others[rng.index(others.len())];
            g = g.without_edge(e);
            let v = g.add_vertex();
            g.add_edge(v, e.0)?;
            g.add_edge(v, e.1)?;
            g.add_edge(v, c)?;
        }
    }
    Ok(g)
}

/// Random Laman graph at a random configuration, redrawn until ISAR.
pub fn random_isar_laman_framework(n: usize, rng: &mut SeededRng) -> Result<Framework> {
    let g = random_laman_graph(n, rng)?;
    for _ in 0..100 {
        let fw = random_framework(g.clone(), rng)?;
        if analyze(&fw)?.is_isar {
            return Ok(fw);
        }
    }
    Err(Error::Numerical(
        "no ISAR configuration found in 100 draws".into(),
    ))
}
