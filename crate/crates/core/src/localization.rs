//! Sensor network localization from signed angle measurements.
//!
//! Each sensor keeps an estimate of the global bearing to every neighbor.
//! The bearing estimates are driven to consistency with the measured
//! angles and the anchor pair, and the location estimates follow by
//! bearing-only localization against those estimates.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::ais::{self, measure_angles};
use crate::error::{Error, Result};
use crate::geometry::{bearing, projection_matrix, rotation_matrix, Angle, Mat2, Vec2};
use crate::graph::{AngleIndexSet, AngleTriple, Edge, Vertex};
use crate::numerics::{self, FitResult, OdeSystem, SeededRng};
use crate::rigidity::{self, Framework};

/// Errors at or below this value are treated as converged to round-off.
pub const ERROR_FLOOR: f64 = 1e-12;

/// A framework of true sensor locations with a set of anchors.
#[derive(Clone, Debug, PartialEq)]
pub struct SensorNetwork {
    framework: Framework,
    anchors: BTreeSet<Vertex>,
}

impl SensorNetwork {
    pub fn new(framework: Framework, anchors: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let anchors: BTreeSet<Vertex> = anchors.into_iter().collect();
        for &a in &anchors {
            framework.graph().check_vertex(a)?;
        }
        Ok(SensorNetwork { framework, anchors })
    }

    pub fn framework(&self) -> &Framework {
        &self.framework
    }

    pub fn anchors(&self) -> &BTreeSet<Vertex> {
        &self.anchors
    }

    pub fn is_anchor(&self, v: Vertex) -> bool {
        self.anchors.contains(&v)
    }

    pub fn followers(&self) -> impl Iterator<Item = Vertex> + '_ {
        (1..=self.framework.n()).filter(|v| !self.anchors.contains(v))
    }

    /// Edges whose endpoints are both anchors, ascending.
    pub fn anchor_edges(&self) -> Vec<Edge> {
        self.framework
            .graph()
            .edges()
            .filter(|e| self.is_anchor(e.0) && self.is_anchor(e.1))
            .collect()
    }

    /// Checks the standing assumption: ISAR Laman framework, at least two
    /// anchors, two of them adjacent.
    pub fn check_assumption(&self) -> Result<()> {
        let report = rigidity::analyze(&self.framework)?;
        if !report.is_isar {
            return Err(Error::AssumptionViolated(
                "framework is not infinitesimally signed-angle rigid".into(),
            ));
        }
        if !rigidity::is_laman(self.framework.graph()) {
            return Err(Error::AssumptionViolated("graph is not Laman".into()));
        }
        if self.anchors.len() < 2 {
            return Err(Error::AssumptionViolated(format!(
                "{} anchor(s), at least 2 required",
                self.anchors.len()
            )));
        }
        if self.anchor_edges().is_empty() {
            return Err(Error::AssumptionViolated(
                "no two anchors are adjacent".into(),
            ));
        }
        Ok(())
    }
}

/// Localizable from signed angles: ISAR with at least two anchors.
pub fn check_localizable(net: &SensorNetwork) -> bool {
    net.anchors.len() >= 2
        && rigidity::analyze(&net.framework)
            .map(|r| r.is_isar)
            .unwrap_or(false)
}

/// Triples of `gais` that sensor `i` measures itself.
pub fn local_measurement_ais(gais: &AngleIndexSet, i: Vertex) -> AngleIndexSet {
    gais.centered_at(i)
}

fn touches_anchor_edge(t: AngleTriple, net: &SensorNetwork) -> bool {
    [t.first_edge(), t.second_edge()]
        .iter()
        .any(|e| net.is_anchor(e.0) && net.is_anchor(e.1))
}

/// Adds one triple containing an anchor-anchor edge when `gais` has none.
/// The edge is added to the host graph if needed.
pub fn augment_gais_for_anchors(
    gais: &AngleIndexSet,
    net: &SensorNetwork,
) -> Result<AngleIndexSet> {
    let anchor_edges = net.anchor_edges();
    if anchor_edges.is_empty() {
        return Err(Error::NoAdjacentAnchors);
    }
    if gais.iter().any(|t| touches_anchor_edge(t, net)) {
        return Ok(gais.clone());
    }
    let host = gais.host();
    for e in &anchor_edges {
        for (center, tip) in [(e.1, e.0), (e.0, e.1)] {
            if let Some(k) = host.neighbors(center).find(|&k| k != tip) {
                let mut g = host.clone();
                if !g.has_edge(e.0, e.1) {
                    g.add_edge(e.0, e.1)?;
                }
                let mut out = gais.rehost(g)?;
                out.insert(AngleTriple::new(tip, center, k))?;
                return Ok(out);
            }
        }
    }
    Err(Error::NotLocalizable(
        "no anchor edge can be attached to the angle index set".into(),
    ))
}

/// Minimal GAIS of the network, augmented with an anchor-edge triple.
pub fn prepare_gais(net: &SensorNetwork) -> Result<AngleIndexSet> {
    let gais = ais::algorithm1_minimal_gais(&net.framework)?;
    augment_gais_for_anchors(&gais.ais, net)
}

/// Location estimates for every vertex and one bearing estimate per
/// ordered neighbor pair.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalizationState {
    pub p_hat: Vec<Vec2>,
    pub b_hat: BTreeMap<(Vertex, Vertex), Vec2>,
}

#[derive(Serialize)]
struct BearingEstimate {
    from: Vertex,
    to: Vertex,
    value: Vec2,
}

#[derive(Serialize)]
struct StateJson {
    positions: Vec<Vec2>,
    bearings: Vec<BearingEstimate>,
}

impl Serialize for LocalizationState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StateJson {
            positions: self.p_hat.clone(),
            bearings: self
                .b_hat
                .iter()
                .map(|(&(from, to), &value)| BearingEstimate { from, to, value })
                .collect(),
        }
        .serialize(s)
    }
}

/// The joint estimator as an ODE over
/// `[p_hat (2n) | b_hat (2m)]`, or bearings only.
#[derive(Clone, Debug)]
pub struct LocalizationSystem {
    n: usize,
    anchor: Vec<bool>,
    truth: Vec<Vec2>,
    pairs: Vec<(Vertex, Vertex)>,
    pair_index: BTreeMap<(Vertex, Vertex), usize>,
    /// Per pair: `d b_q = -sum (b_q - M b_other)`.
    couplings: Vec<Vec<(usize, Mat2)>>,
    pinned: Vec<Option<Vec2>>,
    /// Per vertex (0-based): `(neighbor, pair index of (i, neighbor))`.
    neighbors: Vec<Vec<(Vertex, usize)>>,
    estimate_positions: bool,
}

impl LocalizationSystem {
    /// Estimator driven by signed angles measured on the true locations.
    pub fn new(net: &SensorNetwork, gais: &AngleIndexSet) -> Result<Self> {
        let fw = net.framework();
        let angles = measure_angles(&fw.with_graph(gais.host().clone())?, gais)?;
        Self::with_angles(net, gais, &angles)
    }

    pub fn with_angles(
        net: &SensorNetwork,
        gais: &AngleIndexSet,
        angles: &BTreeMap<AngleTriple, Angle>,
    ) -> Result<Self> {
        let fw = net.framework();
        let n = fw.n();
        if gais.host().n() != n {
            return Err(Error::DimensionMismatch {
                n,
                config: gais.host().n(),
            });
        }
        let covered = gais.covered_edges();
        let mut pairs: Vec<(Vertex, Vertex)> = covered
            .iter()
            .flat_map(|e| [(e.0, e.1), (e.1, e.0)])
            .collect();
        pairs.sort_unstable();
        let pair_index: BTreeMap<_, _> = pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        let mut couplings = vec![Vec::new(); pairs.len()];
        for t in gais.iter() {
            let alpha = *angles.get(&t).ok_or(Error::MissingAngle(t))?;
            let r = rotation_matrix(alpha);
            let rt = r.transpose();
            let (a, c, b) = (t.i, t.j, t.k);
            let ca = pair_index[&(c, a)];
            let cb = pair_index[&(c, b)];
            couplings[ca].push((cb, rt));
            couplings[cb].push((ca, r));
            couplings[pair_index[&(a, c)]].push((cb, rt.scale(-1.0)));
            couplings[pair_index[&(b, c)]].push((ca, r.scale(-1.0)));
        }
        let mut pinned = vec![None; pairs.len()];
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if net.is_anchor(i) && net.is_anchor(j) {
                pinned[k] = Some(bearing(fw.position(i), fw.position(j))?);
            }
        }
        let mut neighbors = vec![Vec::new(); n];
        for (k, &(i, j)) in pairs.iter().enumerate() {
            neighbors[i - 1].push((j, k));
        }
        Ok(LocalizationSystem {
            n,
            anchor: (1..=n).map(|v| net.is_anchor(v)).collect(),
            truth: fw.config().to_vec(),
            pairs,
            pair_index,
            couplings,
            pinned,
            neighbors,
            estimate_positions: true,
        })
    }

    /// Same bearing dynamics without the location estimator.
    pub fn bearings_only(mut self) -> Self {
        self.estimate_positions = false;
        self
    }

    pub fn pairs(&self) -> &[(Vertex, Vertex)] {
        &self.pairs
    }

    pub fn pinned_pairs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.pairs
            .iter()
            .zip(&self.pinned)
            .filter(|(_, p)| p.is_some())
            .map(|(&q, _)| q)
    }

    /// Neighbors used by sensor `i`: endpoints of edges covered by the
    /// angle index set.
    pub fn neighbors_of(&self, i: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.neighbors[i - 1].iter().map(|&(j, _)| j)
    }

    fn bearing_offset(&self) -> usize {
        if self.estimate_positions {
            2 * self.n
        } else {
            0
        }
    }

    pub fn pack(&self, state: &LocalizationState) -> Result<Vec<f64>> {
        let mut x = Vec::with_capacity(self.dim());
        if self.estimate_positions {
            if state.p_hat.len() != self.n {
                return Err(Error::DimensionMismatch {
                    n: self.n,
                    config: state.p_hat.len(),
                });
            }
            x.extend(state.p_hat.iter().flat_map(|p| [p.x, p.y]));
        }
        for q in &self.pairs {
            let b = state.b_hat.get(q).ok_or_else(|| {
                Error::InvalidParameter(format!("no bearing estimate for ({}, {})", q.0, q.1))
            })?;
            x.extend([b.x, b.y]);
        }
        Ok(x)
    }

    pub fn unpack(&self, x: &[f64]) -> LocalizationState {
        let p_hat = if self.estimate_positions {
            rigidity::unstack(&x[..2 * self.n])
        } else {
            self.truth.clone()
        };
        let off = self.bearing_offset();
        let b_hat = self
            .pairs
            .iter()
            .enumerate()
            .map(|(k, &q)| (q, Vec2::new(x[off + 2 * k], x[off + 2 * k + 1])))
            .collect();
        LocalizationState { p_hat, b_hat }
    }

    /// The exact solution: true locations and true bearings.
    pub fn true_state(&self) -> LocalizationState {
        LocalizationState {
            p_hat: self.truth.clone(),
            b_hat: self
                .pairs
                .iter()
                .map(|&(i, j)| {
                    let b = bearing(self.truth[i - 1], self.truth[j - 1]).expect("distinct points");
                    ((i, j), b)
                })
                .collect(),
        }
    }

    /// Uniform initial estimates in `[-1, 1]^2`: followers in ascending
    /// order, then every ordered pair in ascending order.  Anchors and
    /// pinned pairs are then reset to their true values.
    pub fn random_state(&self, rng: &mut SeededRng) -> LocalizationState {
        let mut p_hat = self.truth.clone();
        for (v, p) in p_hat.iter_mut().enumerate() {
            if !self.anchor[v] {
                *p = Vec2::new(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
            }
        }
        let mut b_hat = BTreeMap::new();
        for (k, &q) in self.pairs.iter().enumerate() {
            let b = Vec2::new(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
            b_hat.insert(q, self.pinned[k].unwrap_or(b));
        }
        LocalizationState { p_hat, b_hat }
    }

    /// Bearing derivatives, two entries per ordered pair.
    pub fn bearing_rhs(&self, b: &[f64], db: &mut [f64]) {
        let get = |k: usize| Vec2::new(b[2 * k], b[2 * k + 1]);
        for (q, terms) in self.couplings.iter().enumerate() {
            let mut d = Vec2::ZERO;
            if self.pinned[q].is_none() {
                let own = get(q);
                for &(other, m) in terms {
                    d -= own - m * get(other);
                }
            }
            db[2 * q] = d.x;
            db[2 * q + 1] = d.y;
        }
    }

    /// Location derivatives, `P(b)` taken as `I - b b^T` even when `b` is
    /// not a unit vector.
    pub fn position_rhs(&self, p: &[f64], b: &[f64], dp: &mut [f64]) {
        for i in 0..self.n {
            let mut d = Vec2::ZERO;
            if !self.anchor[i] {
                let pi = Vec2::new(p[2 * i], p[2 * i + 1]);
                for &(j, q) in &self.neighbors[i] {
                    let pj = Vec2::new(p[2 * (j - 1)], p[2 * (j - 1) + 1]);
                    let bq = Vec2::new(b[2 * q], b[2 * q + 1]);
                    d -= projection_matrix(bq) * (pi - pj);
                }
            }
            dp[2 * i] = d.x;
            dp[2 * i + 1] = d.y;
        }
    }

    /// Location error `sum ||p_hat_i - p_i||`.
    pub fn location_error(&self, state: &LocalizationState) -> f64 {
        state
            .p_hat
            .iter()
            .zip(&self.truth)
            .map(|(a, b)| a.distance(*b))
            .sum()
    }

    /// Bearing error `sum ||b_hat_ij - b_ij||` over ordered pairs.
    pub fn bearing_error(&self, state: &LocalizationState) -> f64 {
        let truth = self.true_state();
        self.pairs
            .iter()
            .map(|q| state.b_hat[q].distance(truth.b_hat[q]))
            .sum()
    }

    pub fn pair_index(&self, i: Vertex, j: Vertex) -> Option<usize> {
        self.pair_index.get(&(i, j)).copied()
    }
}

impl OdeSystem for LocalizationSystem {
    fn dim(&self) -> usize {
        self.bearing_offset() + 2 * self.pairs.len()
    }

    fn rhs(&self, _t: f64, x: &[f64], dx: &mut [f64]) -> Result<()> {
        let off = self.bearing_offset();
        let (dp, db) = dx.split_at_mut(off);
        self.bearing_rhs(&x[off..], db);
        if self.estimate_positions {
            self.position_rhs(&x[..off], &x[off..], dp);
        }
        Ok(())
    }

    fn project(&self, _t: f64, x: &mut [f64]) {
        if self.estimate_positions {
            for (i, p) in self.truth.iter().enumerate() {
                if self.anchor[i] {
                    x[2 * i] = p.x;
                    x[2 * i + 1] = p.y;
                }
            }
        }
        let off = self.bearing_offset();
        for (k, pin) in self.pinned.iter().enumerate() {
            if let Some(b) = pin {
                x[off + 2 * k] = b.x;
                x[off + 2 * k + 1] = b.y;
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalizationConfig {
    pub seed: u64,
    pub step: f64,
    pub horizon: f64,
    /// Record every this many integration steps.
    pub sample_every: usize,
    /// Skip the localizability and anchor-pin checks.
    pub bypass_gate: bool,
}

impl Default for LocalizationConfig {
    fn default() -> Self {
        LocalizationConfig {
            seed: 0,
            step: 1e-3,
            horizon: 50.0,
            sample_every: 10,
            bypass_gate: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LocalizationTrajectory {
    pub times: Vec<f64>,
    pub location_error: Vec<f64>,
    pub bearing_error: Vec<f64>,
    pub initial_state: LocalizationState,
    pub final_state: LocalizationState,
}

impl LocalizationTrajectory {
    /// Exponential-rate fit of the location error over the last
    /// `tail_fraction` of the samples above the round-off floor.
    pub fn location_fit(&self, tail_fraction: f64) -> Result<FitResult> {
        numerics::log_error_tail_fit(
            &self.times,
            &self.location_error,
            tail_fraction,
            ERROR_FLOOR,
        )
    }

    pub fn bearing_fit(&self, tail_fraction: f64) -> Result<FitResult> {
        numerics::log_error_tail_fit(&self.times, &self.bearing_error, tail_fraction, ERROR_FLOOR)
    }

    pub fn final_location_error(&self) -> f64 {
        *self.location_error.last().expect("non-empty trajectory")
    }

    pub fn final_bearing_error(&self) -> f64 {
        *self.bearing_error.last().expect("non-empty trajectory")
    }
}

fn gate(net: &SensorNetwork, gais: &AngleIndexSet) -> Result<()> {
    if !check_localizable(net) {
        return Err(Error::NotLocalizable(if net.anchors.len() < 2 {
            format!("{} anchor(s), at least 2 required", net.anchors.len())
        } else {
            "framework is not infinitesimally signed-angle rigid".into()
        }));
    }
    if !gais.iter().any(|t| touches_anchor_edge(t, net)) {
        return Err(Error::AssumptionViolated(
            "angle index set has no triple on an anchor-anchor edge".into(),
        ));
    }
    if !gais.is_angle_connected() {
        return Err(Error::AssumptionViolated(
            "angle index set is not angle connected".into(),
        ));
    }
    Ok(())
}

/// Runs the estimator from seeded random initial estimates.
pub fn simulate_localization(
    net: &SensorNetwork,
    gais: &AngleIndexSet,
    config: &LocalizationConfig,
) -> Result<LocalizationTrajectory> {
    if !config.bypass_gate {
        gate(net, gais)?;
    }
    let sys = LocalizationSystem::new(net, gais)?;
    let mut rng = SeededRng::new(config.seed);
    let init = sys.random_state(&mut rng);
    run(&sys, &init, config)
}

/// Runs the estimator from the given initial estimates.
pub fn simulate_localization_from(
    net: &SensorNetwork,
    gais: &AngleIndexSet,
    initial: &LocalizationState,
    config: &LocalizationConfig,
) -> Result<LocalizationTrajectory> {
    if !config.bypass_gate {
        gate(net, gais)?;
    }
    let sys = LocalizationSystem::new(net, gais)?;
    run(&sys, initial, config)
}

fn run(
    sys: &LocalizationSystem,
    init: &LocalizationState,
    config: &LocalizationConfig,
) -> Result<LocalizationTrajectory> {
    let x0 = sys.pack(init)?;
    let traj = numerics::integrate(
        sys,
        &x0,
        0.0,
        config.horizon,
        config.step,
        config.sample_every,
    )?;
    let mut location_error = Vec::with_capacity(traj.times.len());
    let mut bearing_error = Vec::with_capacity(traj.times.len());
    for x in &traj.states {
        let s = sys.unpack(x);
        location_error.push(sys.location_error(&s));
        bearing_error.push(sys.bearing_error(&s));
    }
    Ok(LocalizationTrajectory {
        initial_state: sys.unpack(&traj.states[0]),
        final_state: sys.unpack(traj.last().1),
        times: traj.times,
        location_error,
        bearing_error,
    })
}

/// Configuration that agrees with `fw` on every signed angle and on the
/// location of `anchor`, obtained by a quarter-turn about that anchor.
pub fn rotated_alternative(fw: &Framework, anchor: Vertex) -> Vec<Vec2> {
    let r = Mat2::rotation(std::f64::consts::FRAC_PI_2);
    let pa = fw.position(anchor);
    let eta = pa - r * pa;
    fw.config().iter().map(|&p| r * p + eta).collect()
}

/// Estimator state at the rotated alternative: locations from
/// [`rotated_alternative`] and every bearing turned by a quarter.
pub fn rotated_equilibrium(
    sys: &LocalizationSystem,
    fw: &Framework,
    anchor: Vertex,
) -> LocalizationState {
    let r = Mat2::rotation(std::f64::consts::FRAC_PI_2);
    let truth = sys.true_state();
    LocalizationState {
        p_hat: rotated_alternative(fw, anchor),
        b_hat: truth.b_hat.into_iter().map(|(q, b)| (q, r * b)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn network(anchors: &[Vertex]) -> SensorNetwork {
        let g = Graph::new(
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
        .unwrap();
        let p = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(2.0, 0.2),
            Vec2::new(0.8, 1.6),
            Vec2::new(2.9, 1.7),
            Vec2::new(1.7, 3.1),
            Vec2::new(3.8, 3.3),
        ];
        SensorNetwork::new(Framework::new(g, p).unwrap(), anchors.iter().copied()).unwrap()
    }

    #[test]
    fn localizability() {
        assert!(check_localizable(&network(&[1, 2])));
        assert!(!check_localizable(&network(&[1])));
        assert!(!check_localizable(&network(&[])));
        assert!(network(&[1, 2]).check_assumption().is_ok());
        assert!(network(&[1, 6]).check_assumption().is_err());
    }

    #[test]
    fn local_sets_partition_the_gais() {
        let net = network(&[1, 2]);
        let gais = prepare_gais(&net).unwrap();
        let mut union = BTreeSet::new();
        for v in 1..=6 {
            union.extend(local_measurement_ais(&gais, v).iter());
        }
        assert_eq!(union, gais.iter().collect());
        let g = Graph::new(4, [(1, 2), (2, 3), (1, 3), (3, 4), (2, 4)]).unwrap();
        let ais = AngleIndexSet::new(g, [AngleTriple::new(1, 2, 3)]).unwrap();
        assert!(local_measurement_ais(&ais, 4).is_empty());
    }

    #[test]
    fn true_state_is_equilibrium() {
        let net = network(&[1, 2]);
        let gais = prepare_gais(&net).unwrap();
        let sys = LocalizationSystem::new(&net, &gais).unwrap();
        let x = sys.pack(&sys.true_state()).unwrap();
        let mut dx = vec![0.0; x.len()];
        sys.rhs(0.0, &x, &mut dx).unwrap();
        assert!(dx.iter().all(|d| d.abs() < 1e-14));
    }

    #[test]
    fn augmentation() {
        let net = network(&[1, 2]);
        let gais = ais::algorithm1_minimal_gais(net.framework()).unwrap().ais;
        let aug = augment_gais_for_anchors(&gais, &net).unwrap();
        assert_eq!(aug, gais);

        let g = net.framework().graph().clone();
        let lacking = AngleIndexSet::new(
            g.clone(),
            gais.iter().filter(|t| !touches_anchor_edge(*t, &net)),
        )
        .unwrap();
        let aug = augment_gais_for_anchors(&lacking, &net).unwrap();
        assert_eq!(aug.len(), lacking.len() + 1);
        assert!(aug.iter().any(|t| touches_anchor_edge(t, &net)));

        assert!(matches!(
            augment_gais_for_anchors(&gais, &network(&[1, 6])),
            Err(Error::NoAdjacentAnchors)
        ));
    }

    #[test]
    fn gate_errors() {
        let net = network(&[1]);
        let gais = prepare_gais(&network(&[1, 2])).unwrap();
        assert!(matches!(
            simulate_localization(&net, &gais, &LocalizationConfig::default()),
            Err(Error::NotLocalizable(_))
        ));
    }

    #[test]
    fn rotated_alternative_keeps_angles_and_anchor() {
        let net = network(&[1]);
        let fw = net.framework();
        let q = rotated_alternative(fw, 1);
        assert!(q[0].distance(fw.position(1)) < 1e-15);
        let alt = fw.with_config(q).unwrap();
        let full = AngleIndexSet::full(fw.graph());
        for t in full.iter() {
            assert!(fw.angle(t).unwrap().distance(alt.angle(t).unwrap()) < 1e-9);
        }
        assert!(alt.position(3).distance(fw.position(3)) > 0.1);
    }
}
