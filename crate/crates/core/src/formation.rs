//! Formation control from signed angle measurements taken in each agent's
//! body frame, with attitude consensus.

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};

use crate::ais::{self, ReferenceAngleTable};
use crate::error::{Error, Result};
use crate::geometry::{rotation_matrix, wrap_to_pi, Angle, Mat2, Vec2, COINCIDENCE_TOL};
use crate::graph::{AngleIndexSet, Edge, Vertex};
use crate::numerics::{self, FitResult, OdeSystem, SeededRng};
use crate::rigidity::{self, Framework};

/// Errors at or below this value carry no rate information.
pub const ERROR_FLOOR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgentState {
    pub position: Vec2,
    /// Rotation from the global frame to the body frame.
    pub attitude: Angle,
}

/// Target shape together with the reference angle of every directed edge.
#[derive(Clone, Debug)]
pub struct TargetFormation {
    framework: Framework,
    gais: AngleIndexSet,
    full: AngleIndexSet,
    reference_table: ReferenceAngleTable,
    target_angles: Vec<Angle>,
}

impl TargetFormation {
    /// Requires an ISAR target.  The reference bearing is `(1, 2)` when
    /// that edge exists, otherwise the edge with the smallest hash.
    pub fn new(framework: Framework) -> Result<Self> {
        let report = rigidity::analyze(&framework)?;
        if !report.is_isar {
            return Err(Error::AssumptionViolated(format!(
                "target formation is not infinitesimally signed-angle rigid (rank {}, need {})",
                report.rank_signed_angle,
                2 * framework.n() - 4
            )));
        }
        let gais = ais::algorithm1_minimal_gais(&framework)?.ais;
        let full = AngleIndexSet::full(framework.graph());
        let angles = ais::measure_angles(&framework, &full)?;
        let reference = if framework.graph().has_edge(1, 2) {
            (1, 2)
        } else {
            let e = framework
                .graph()
                .edges()
                .next()
                .expect("ISAR graph has edges");
            (e.0, e.1)
        };
        let reference_table = ais::reference_angle_table(&full, &angles, reference)?;
        let target_angles = full.iter().map(|t| angles[&t]).collect();
        Ok(TargetFormation {
            framework,
            gais,
            full,
            reference_table,
            target_angles,
        })
    }

    pub fn framework(&self) -> &Framework {
        &self.framework
    }

    pub fn n(&self) -> usize {
        self.framework.n()
    }

    pub fn gais(&self) -> &AngleIndexSet {
        &self.gais
    }

    pub fn reference_table(&self) -> &ReferenceAngleTable {
        &self.reference_table
    }

    pub fn alpha_star(&self, i: Vertex, j: Vertex) -> Angle {
        self.reference_table
            .get(i, j)
            .expect("directed edge of the target")
    }

    /// Largest `|R(alpha*_ij) b*_ref - b*_ij|` over directed edges.
    pub fn table_consistency(&self) -> f64 {
        let (r0, r1) = self.reference_table.reference();
        let p = self.framework.config();
        let b_ref = bearing_between(p, r0, r1);
        self.reference_table
            .directed()
            .map(|((i, j), a)| (rotation_matrix(a) * b_ref - bearing_between(p, i, j)).norm())
            .fold(0.0, f64::max)
    }

    /// Configuration with the same shape whose reference bearing points
    /// along `e2`.  The controller is at rest here when all attitudes are
    /// zero.
    pub fn aligned_configuration(&self) -> Vec<Vec2> {
        let (r0, r1) = self.reference_table.reference();
        let p = self.framework.config();
        let theta = FRAC_PI_2 - bearing_between(p, r0, r1).polar_angle().radians();
        let r = Mat2::rotation(theta);
        p.iter().map(|&x| r * x).collect()
    }

    /// Direction the bearing from `i` to `j` takes at the stable
    /// equilibrium reached with common attitude `beta`.
    pub fn equilibrium_bearing(&self, i: Vertex, j: Vertex, beta: f64) -> Vec2 {
        Vec2::from_polar(beta + self.alpha_star(i, j).radians() + FRAC_PI_2)
    }
}

fn bearing_between(p: &[Vec2], i: Vertex, j: Vertex) -> Vec2 {
    let d = p[j - 1] - p[i - 1];
    d * (1.0 / d.norm())
}

/// Largest wrapped distance between the signed angles of `p` and of the
/// target, over every angle triple of the target graph.
pub fn shape_error(p: &[Vec2], target: &TargetFormation) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (t, &a_star) in target.full.iter().zip(&target.target_angles) {
        let a = crate::geometry::signed_angle(p[t.i - 1], p[t.j - 1], p[t.k - 1])?;
        worst = worst.max(a.distance(a_star));
    }
    Ok(worst)
}

/// Largest wrapped attitude difference across an edge.
pub fn attitude_error(beta: &[f64], target: &TargetFormation) -> f64 {
    target
        .framework
        .graph()
        .edges()
        .map(|e| wrap_to_pi(beta[e.0 - 1] - beta[e.1 - 1]).abs())
        .fold(0.0, f64::max)
}

/// Polar angle of the bearing to `p_j` as seen in agent `i`'s body frame.
pub fn measured_body_angle(agent: &AgentState, p_j: Vec2) -> Result<Angle> {
    let b = crate::geometry::bearing(agent.position, p_j)?;
    Ok(b.polar_angle() - agent.attitude)
}

/// `[[1 - cos 2a, -sin 2a], [-sin 2a, 1 + cos 2a]]`, twice the projection
/// onto the normal of `(cos a, sin a)`.
pub fn r_bar(alpha: Angle) -> Mat2 {
    let (s, c) = (2.0 * alpha.radians()).sin_cos();
    Mat2::new(1.0 - c, -s, -s, 1.0 + c)
}

pub fn eta(beta_ij: f64, alpha_star: Angle) -> Vec2 {
    let half = 0.5 * beta_ij;
    Mat2::rotation(alpha_star.radians() - half) * Vec2::new(0.0, half.cos())
}

/// Position input of agent `i` in its body frame.
pub fn control_position(
    target: &TargetFormation,
    i: Vertex,
    agents: &[AgentState],
) -> Result<Vec2> {
    let me = &agents[i - 1];
    let mut u = Vec2::ZERO;
    for j in target.framework.graph().neighbors(i) {
        let other = &agents[j - 1];
        let alpha = measured_body_angle(me, other.position)?;
        let beta_ij = wrap_to_pi(me.attitude.radians() - other.attitude.radians());
        u -= r_bar(alpha) * eta(beta_ij, target.alpha_star(i, j));
    }
    Ok(u)
}

/// Attitude input: consensus on wrapped relative attitudes.
pub fn control_attitude(target: &TargetFormation, i: Vertex, agents: &[AgentState]) -> f64 {
    let bi = agents[i - 1].attitude.radians();
    -target
        .framework
        .graph()
        .neighbors(i)
        .map(|j| wrap_to_pi(bi - agents[j - 1].attitude.radians()))
        .sum::<f64>()
}

/// Closed loop over `[x_1, y_1, beta_1, x_2, ...]`.
#[derive(Clone, Debug)]
pub struct FormationSystem<'a> {
    target: &'a TargetFormation,
}

impl<'a> FormationSystem<'a> {
    pub fn new(target: &'a TargetFormation) -> Self {
        FormationSystem { target }
    }

    pub fn pack(agents: &[AgentState]) -> Vec<f64> {
        agents
            .iter()
            .flat_map(|a| [a.position.x, a.position.y, a.attitude.radians()])
            .collect()
    }

    pub fn unpack(x: &[f64]) -> Vec<AgentState> {
        x.chunks_exact(3)
            .map(|c| AgentState {
                position: Vec2::new(c[0], c[1]),
                attitude: Angle::new(c[2]),
            })
            .collect()
    }

    fn check_collisions(&self, agents: &[AgentState], t: f64) -> Result<()> {
        for e in self.target.framework.graph().edges() {
            let d = agents[e.0 - 1].position.distance(agents[e.1 - 1].position);
            if d.is_nan() || d < COINCIDENCE_TOL {
                return Err(Error::Collision { i: e.0, j: e.1, t });
            }
        }
        Ok(())
    }
}

impl OdeSystem for FormationSystem<'_> {
    fn dim(&self) -> usize {
        3 * self.target.n()
    }

    fn rhs(&self, t: f64, x: &[f64], dx: &mut [f64]) -> Result<()> {
        let agents = Self::unpack(x);
        self.check_collisions(&agents, t)?;
        for i in 1..=agents.len() {
            let u = control_position(self.target, i, &agents)?;
            let v = rotation_matrix(agents[i - 1].attitude) * u;
            let k = 3 * (i - 1);
            dx[k] = v.x;
            dx[k + 1] = v.y;
            dx[k + 2] = control_attitude(self.target, i, &agents);
        }
        Ok(())
    }

    fn project(&self, _t: f64, x: &mut [f64]) {
        for k in (2..x.len()).step_by(3) {
            x[k] = Angle::new(x[k]).radians();
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormationConfig {
    pub seed: u64,
    pub step: f64,
    pub horizon: f64,
    pub sample_every: usize,
    /// Initial positions are uniform in `[lo, hi]^2`.
    pub init_box: (f64, f64),
    /// Initial attitudes are uniform in this interval.
    pub init_attitude_range: (f64, f64),
}

impl Default for FormationConfig {
    fn default() -> Self {
        FormationConfig {
            seed: 0,
            step: 1e-3,
            horizon: 100.0,
            sample_every: 10,
            init_box: (0.0, 5.0),
            init_attitude_range: (-FRAC_PI_2, FRAC_PI_2),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FormationTrajectory {
    pub times: Vec<f64>,
    pub positions: Vec<Vec<Vec2>>,
    /// In `[0, 2pi)`.
    pub attitudes: Vec<Vec<f64>>,
    pub angle_error: Vec<f64>,
    pub attitude_error: Vec<f64>,
    /// Final bearings anti-aligned with the stable equilibrium directions.
    pub reversed: bool,
    pub warnings: Vec<String>,
}

impl FormationTrajectory {
    pub fn angle_fit(&self, tail_fraction: f64) -> Result<FitResult> {
        numerics::log_error_tail_fit(&self.times, &self.angle_error, tail_fraction, ERROR_FLOOR)
    }

    pub fn attitude_fit(&self, tail_fraction: f64) -> Result<FitResult> {
        numerics::log_error_tail_fit(
            &self.times,
            &self.attitude_error,
            tail_fraction,
            ERROR_FLOOR,
        )
    }

    pub fn final_angle_error(&self) -> f64 {
        *self.angle_error.last().expect("non-empty trajectory")
    }

    pub fn final_attitude_error(&self) -> f64 {
        *self.attitude_error.last().expect("non-empty trajectory")
    }

    pub fn final_agents(&self) -> Vec<AgentState> {
        let k = self.times.len() - 1;
        self.positions[k]
            .iter()
            .zip(&self.attitudes[k])
            .map(|(&position, &a)| AgentState {
                position,
                attitude: Angle::new(a),
            })
            .collect()
    }
}

/// Seeded initial state: every position (agent order, `x` then `y`), then
/// every attitude.
pub fn random_agents(n: usize, config: &FormationConfig, rng: &mut SeededRng) -> Vec<AgentState> {
    let (lo, hi) = config.init_box;
    let positions: Vec<Vec2> = (0..n)
        .map(|_| Vec2::new(rng.uniform(lo, hi), rng.uniform(lo, hi)))
        .collect();
    let (alo, ahi) = config.init_attitude_range;
    positions
        .into_iter()
        .map(|position| AgentState {
            position,
            attitude: Angle::new(rng.uniform(alo, ahi)),
        })
        .collect()
}

pub fn simulate_formation(
    target: &TargetFormation,
    config: &FormationConfig,
) -> Result<FormationTrajectory> {
    let mut rng = SeededRng::new(config.seed);
    let agents = random_agents(target.n(), config, &mut rng);
    let mut traj = simulate_formation_from(target, &agents, config)?;
    let (alo, ahi) = config.init_attitude_range;
    if ahi - alo >= std::f64::consts::PI {
        traj.warnings.insert(
            0,
            format!(
                "initial attitude spread {:.3} rad is not below pi; consensus on the circle may not be reached",
                ahi - alo
            ),
        );
    }
    Ok(traj)
}

pub fn simulate_formation_from(
    target: &TargetFormation,
    agents: &[AgentState],
    config: &FormationConfig,
) -> Result<FormationTrajectory> {
    if agents.len() != target.n() {
        return Err(Error::DimensionMismatch {
            n: target.n(),
            config: agents.len(),
        });
    }
    let sys = FormationSystem::new(target);
    let x0 = FormationSystem::pack(agents);
    let traj = numerics::integrate(
        &sys,
        &x0,
        0.0,
        config.horizon,
        config.step,
        config.sample_every,
    )?;
    let mut out = FormationTrajectory {
        times: Vec::with_capacity(traj.times.len()),
        positions: Vec::with_capacity(traj.times.len()),
        attitudes: Vec::with_capacity(traj.times.len()),
        angle_error: Vec::with_capacity(traj.times.len()),
        attitude_error: Vec::with_capacity(traj.times.len()),
        reversed: false,
        warnings: Vec::new(),
    };
    for (t, x) in traj.times.iter().zip(&traj.states) {
        let p: Vec<Vec2> = x.chunks_exact(3).map(|c| Vec2::new(c[0], c[1])).collect();
        let beta: Vec<f64> = x.chunks_exact(3).map(|c| c[2]).collect();
        out.angle_error.push(shape_error(&p, target)?);
        out.attitude_error.push(attitude_error(&beta, target));
        out.times.push(*t);
        out.positions.push(p);
        out.attitudes.push(beta);
    }
    out.reversed = reversed_alignment(
        target,
        out.positions.last().unwrap(),
        out.attitudes.last().unwrap(),
    ) < 0.0;
    if out.reversed {
        out.warnings
            .push("bearings converged anti-aligned with the stable equilibrium directions".into());
    }
    Ok(out)
}

/// Mean of `b_ij . d_ij` over edges, with `d_ij` the stable equilibrium
/// bearing for the circular mean attitude.  Near `-1` on the reversed
/// equilibrium.
pub fn reversed_alignment(target: &TargetFormation, p: &[Vec2], beta: &[f64]) -> f64 {
    let (s, c) = beta
        .iter()
        .fold((0.0, 0.0), |(s, c), b| (s + b.sin(), c + b.cos()));
    let mean = s.atan2(c).rem_euclid(TAU);
    let edges: Vec<Edge> = target.framework.graph().edges().collect();
    edges
        .iter()
        .map(|e| bearing_between(p, e.0, e.1).dot(target.equilibrium_bearing(e.0, e.1, mean)))
        .sum::<f64>()
        / edges.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use std::f64::consts::PI;

    fn target() -> TargetFormation {
        let g = Graph::new(
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
        .unwrap();
        let p = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.6, -0.3),
            Vec2::new(0.9, 1.2),
            Vec2::new(2.4, 1.0),
            Vec2::new(1.6, 2.3),
            Vec2::new(0.2, 2.6),
            Vec2::new(2.9, 2.8),
        ];
        TargetFormation::new(Framework::new(g, p).unwrap()).unwrap()
    }

    #[test]
    fn body_angle_examples() {
        let a = AgentState {
            position: Vec2::ZERO,
            attitude: Angle::ZERO,
        };
        assert_eq!(measured_body_angle(&a, Vec2::E1).unwrap(), Angle::ZERO);
        let a = AgentState {
            position: Vec2::ZERO,
            attitude: Angle::new(PI / 2.0),
        };
        assert!(measured_body_angle(&a, Vec2::E2).unwrap().radians().abs() < 1e-15);
        assert!(measured_body_angle(&a, Vec2::ZERO).is_err());
    }

    #[test]
    fn r_bar_spectrum() {
        for k in 0..12 {
            let a = Angle::new(0.37 * k as f64);
            let m = r_bar(a);
            assert!((m.m[0][1] - m.m[1][0]).abs() < 1e-15);
            let null = Vec2::from_polar(a.radians());
            assert!((m * null).norm() < 1e-14);
            let n = null.perp();
            assert!((m * n - n * 2.0).norm() < 1e-14);
        }
    }

    #[test]
    fn eta_at_zero_relative_attitude() {
        let a = Angle::new(1.1);
        assert!((eta(0.0, a) - rotation_matrix(a) * Vec2::E2).norm() < 1e-15);
    }

    #[test]
    fn attitude_control_examples() {
        let g = Graph::complete(3);
        let p = vec![Vec2::ZERO, Vec2::E1, Vec2::E2];
        let tf = TargetFormation::new(Framework::new(g, p.clone()).unwrap()).unwrap();
        let same: Vec<AgentState> = p
            .iter()
            .map(|&position| AgentState {
                position,
                attitude: Angle::new(0.4),
            })
            .collect();
        assert_eq!(control_attitude(&tf, 1, &same), 0.0);

        let g = Graph::complete(3);
        let tf = TargetFormation::new(Framework::new(g, p.clone()).unwrap()).unwrap();
        let mut agents = same.clone();
        agents[0].attitude = Angle::new(0.2);
        agents[1].attitude = Angle::new(0.0);
        agents[2].attitude = Angle::new(0.2);
        assert!((control_attitude(&tf, 1, &agents) + 0.2).abs() < 1e-15);
    }

    #[test]
    fn aligned_target_is_equilibrium() {
        let tf = target();
        assert!(tf.table_consistency() < 1e-9);
        let agents: Vec<AgentState> = tf
            .aligned_configuration()
            .into_iter()
            .map(|position| AgentState {
                position,
                attitude: Angle::ZERO,
            })
            .collect();
        for i in 1..=tf.n() {
            assert!(control_position(&tf, i, &agents).unwrap().norm() < 1e-9);
            assert_eq!(control_attitude(&tf, i, &agents), 0.0);
        }
    }

    #[test]
    fn shape_error_examples() {
        let tf = target();
        let p = tf.framework().config().to_vec();
        assert_eq!(shape_error(&p, &tf).unwrap(), 0.0);
        let q: Vec<Vec2> = p
            .iter()
            .map(|&x| Mat2::rotation(0.7) * x * 2.5 + Vec2::new(-1.0, 4.0))
            .collect();
        assert!(shape_error(&q, &tf).unwrap() < 1e-12);
        let r: Vec<Vec2> = p.iter().map(|x| Vec2::new(x.x, -x.y)).collect();
        assert!(shape_error(&r, &tf).unwrap() > 0.1);
    }

    #[test]
    fn non_isar_target_rejected() {
        let p = (0..4)
            .map(|i| Vec2::new(i as f64, (i % 2) as f64))
            .collect();
        let fw = Framework::new(Graph::path(4), p).unwrap();
        assert!(matches!(
            TargetFormation::new(fw),
            Err(Error::AssumptionViolated(_))
        ));
    }
}
