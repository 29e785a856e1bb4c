#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rigidnet::graph::{AngleIndexSet, Graph};
use rigidnet::numerics::SeededRng;
use rigidnet::rigidity::{self, Framework};
use rigidnet::Vec2;

/// Counting definition checked over every vertex subset.
pub fn exhaustive_laman(g: &Graph) -> bool {
    let n = g.n();
    if n < 3 || g.edge_count() != 2 * n - 3 {
        return false;
    }
    let edges: Vec<(usize, usize)> = g.edges().map(|e| (e.0 - 1, e.1 - 1)).collect();
    for mask in 0u32..(1 << n) {
        let v = mask.count_ones() as usize;
        if v < 2 {
            continue;
        }
        let e = edges
            .iter()
            .filter(|&&(a, b)| mask >> a & 1 == 1 && mask >> b & 1 == 1)
            .count();
        if e + 3 > 2 * v {
            return false;
        }
    }
    true
}

/// All pairs `(a, b)` with `1 <= a < b <= n`.
pub fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (1..=n)
        .flat_map(|a| (a + 1..=n).map(move |b| (a, b)))
        .collect()
}

/// Signed angle through complex arithmetic: `arg(z_k / z_i)` in `[0, 2pi)`.
pub fn angle_oracle(p_i: Vec2, p_j: Vec2, p_k: Vec2) -> f64 {
    let (ax, ay) = (p_i.x - p_j.x, p_i.y - p_j.y);
    let (bx, by) = (p_k.x - p_j.x, p_k.y - p_j.y);
    // b * conj(a)
    let re = bx * ax + by * ay;
    let im = by * ax - bx * ay;
    let a = im.atan2(re);
    if a < 0.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

fn wrap(x: f64) -> f64 {
    let mut y = x % (2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    } else if y <= -PI {
        y += 2.0 * PI;
    }
    y
}

/// Central differences of `f`, optionally reducing each output difference
/// into `(-pi, pi]`.
pub fn central_difference<F>(x: &[f64], h: f64, wrap_angles: bool, f: F) -> DMatrix<f64>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let m = f(x).len();
    let mut j = DMatrix::zeros(m, x.len());
    for c in 0..x.len() {
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[c] += h;
        xm[c] -= h;
        let (fp, fm) = (f(&xp), f(&xm));
        for r in 0..m {
            let d = if wrap_angles {
                wrap(fp[r] - fm[r])
            } else {
                fp[r] - fm[r]
            };
            j[(r, c)] = d / (2.0 * h);
        }
    }
    j
}

pub fn to_points(x: &[f64]) -> Vec<Vec2> {
    x.chunks_exact(2).map(|c| Vec2::new(c[0], c[1])).collect()
}

/// Signed angles of `ais` at configuration `x`, via [`angle_oracle`].
pub fn angles_at(ais: &AngleIndexSet, x: &[f64]) -> Vec<f64> {
    let p = to_points(x);
    ais.iter()
        .map(|t| angle_oracle(p[t.i - 1], p[t.j - 1], p[t.k - 1]))
        .collect()
}

/// Stacked lower-to-higher unit bearings at configuration `x`.
pub fn bearings_at(g: &Graph, x: &[f64]) -> Vec<f64> {
    let p = to_points(x);
    g.edges()
        .flat_map(|e| {
            let d = p[e.1 - 1] - p[e.0 - 1];
            let d = d * (1.0 / d.norm());
            [d.x, d.y]
        })
        .collect()
}

/// Orthogonal projector onto the column span of `a` (full column rank).
pub fn projector(a: &DMatrix<f64>) -> DMatrix<f64> {
    let gram = a.transpose() * a;
    let inv = gram.try_inverse().expect("full column rank");
    a * inv * a.transpose()
}

/// Largest principal angle between two spans of equal dimension, from the
/// spectral norm of the projector difference.
pub fn largest_principal_angle(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let d = projector(a) - projector(b);
    let s = d.svd(false, false).singular_values;
    s.iter().copied().fold(0.0, f64::max).min(1.0).asin()
}

/// Random connected graph: a random tree plus each remaining pair with
/// probability `p`.
pub fn random_connected_graph(n: usize, p: f64, rng: &mut SeededRng) -> Graph {
    let mut edges = Vec::new();
    for v in 2..=n {
        edges.push((1 + rng.index(v - 1), v));
    }
    for (a, b) in all_pairs(n) {
        let in_tree = edges.iter().any(|&(x, y)| (x.min(y), x.max(y)) == (a, b));
        if !in_tree && rng.bernoulli(p) {
            edges.push((a, b));
        }
    }
    Graph::new(n, edges).expect("valid edges")
}

pub fn random_framework_on(g: Graph, rng: &mut SeededRng) -> Framework {
    rigidity::random_framework(g, rng).expect("generic configuration")
}

/// Random similarity: rotation, positive scale in `[0.2, 5]`, translation.
pub fn random_similarity(rng: &mut SeededRng) -> (f64, f64, Vec2) {
    (
        rng.uniform(0.0, 2.0 * PI),
        rng.uniform(0.2, 5.0),
        Vec2::new(rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)),
    )
}

pub fn apply_similarity(p: &[Vec2], (theta, c, t): (f64, f64, Vec2)) -> Vec<Vec2> {
    let (s, co) = theta.sin_cos();
    p.iter()
        .map(|q| {
            Vec2::new(
                c * (co * q.x - s * q.y) + t.x,
                c * (s * q.x + co * q.y) + t.y,
            )
        })
        .collect()
}

pub fn stacked(p: &[Vec2]) -> DVector<f64> {
    DVector::from_iterator(2 * p.len(), p.iter().flat_map(|q| [q.x, q.y]))
}

/// Triangular prism: triangles 1-2-3 and 4-5-6 with rungs 1-5, 2-6, 3-4.
pub fn prism() -> Graph {
    Graph::new(
        6,
        [
            (1, 2),
            (1, 3),
            (1, 5),
            (2, 3),
            (2, 6),
            (3, 4),
            (4, 5),
            (4, 6),
            (5, 6),
        ],
    )
    .unwrap()
}

/// Localization scenario: a strip of triangles with anchors 1 and 2.
pub fn strip_graph() -> Graph {
    Graph::new(
        6,
        [
            (1, 2),
            (1, 3),
            (2, 3),
            (2, 4),
            (3, 4),
            (3, 5),
            (4, 5),
            (4, 6),
            (5, 6),
        ],
    )
    .unwrap()
}

pub fn strip_positions() -> Vec<Vec2> {
    vec![
        Vec2::new(0.0, 0.0),
        Vec2::new(2.0, 0.2),
        Vec2::new(0.8, 1.6),
        Vec2::new(2.9, 1.7),
        Vec2::new(1.7, 3.1),
        Vec2::new(3.8, 3.3),
    ]
}

/// Seven-agent target with triples (1,2,3), (2,3,6), (3,6,7), (4,7,6).
pub fn seven_agent_graph() -> Graph {
    Graph::new(
        7,
        [
            (1, 2),
            (1, 3),
            (2, 3),
            (2, 4),
            (3, 4),
            (3, 5),
            (4, 5),
            (3, 6),
            (5, 6),
            (6, 7),
            (4, 7),
        ],
    )
    .unwrap()
}

pub fn seven_agent_positions() -> Vec<Vec2> {
    vec![
        Vec2::new(0.0, 0.0),
        Vec2::new(1.6, -0.3),
        Vec2::new(0.9, 1.2),
        Vec2::new(2.4, 1.0),
        Vec2::new(1.6, 2.3),
        Vec2::new(0.2, 2.6),
        Vec2::new(2.9, 2.8),
    ]
}
