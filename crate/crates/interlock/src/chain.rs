//! Polygonal chains, fold moves, scenes, and their validity checks.
//!
//! A chain is an ordered list of universal joints with fixed reference edge
//! lengths. The elementary motion is a suffix rotation about an axis through
//! an interior joint: it preserves every edge length exactly and is
//! invertible by negating the angle.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, UnitSphere};
use serde::{Deserialize, Serialize};

use crate::construct::Provenance;
use crate::error::{Error, Result};
use crate::geom::{seg_seg_distance, seg_triangle_pierce, Segment, Triangle, Vec3, TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainRole {
    Trapezoid16,
    TwoChain,
    Tangle3,
    Tangle4,
    Generic,
}

impl std::fmt::Display for ChainRole {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ChainRole::Trapezoid16 => "trapezoid16",
            ChainRole::TwoChain => "two_chain",
            ChainRole::Tangle3 => "tangle3",
            ChainRole::Tangle4 => "tangle4",
            ChainRole::Generic => "generic",
        };
        f.write_str(s)
    }
}

/// Open polygonal chain with reference edge lengths captured at creation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Chain {
    pub role: ChainRole,
    joints: Vec<Vec3>,
    reference_lengths: Vec<f64>,
}

impl Chain {
    /// Capture a chain from explicit joints; reference lengths come from the
    /// input geometry.
    pub fn new(joints: Vec<Vec3>, role: ChainRole) -> Result<Chain> {
        if joints.len() < 2 {
            return Err(Error::ParameterDomain(format!(
                "chain needs at least 2 joints, got {}",
                joints.len()
            )));
        }
        for (i, j) in joints.iter().enumerate() {
            if !j.is_finite() {
                return Err(Error::ParameterDomain(format!("joint {i} not finite")));
            }
        }
        for i in 0..joints.len() - 1 {
            if joints[i].dist(joints[i + 1]) <= TOL {
                return Err(Error::RepeatedJoint(i));
            }
        }
        let reference_lengths = joints
            .windows(2)
            .map(|w| w[0].dist(w[1]))
            .collect();
        Ok(Chain { role, joints, reference_lengths })
    }

    /// Rebuild from serialized parts, checking the stored lengths against the
    /// joint geometry.
    pub fn from_parts(joints: Vec<Vec3>, reference_lengths: Vec<f64>, role: ChainRole) -> Result<Chain> {
        let chain = Chain::new(joints, role)?;
        if reference_lengths.len() != chain.reference_lengths.len() {
            return Err(Error::Schema("reference length count mismatch".into()));
        }
        for (stored, actual) in reference_lengths.iter().zip(&chain.reference_lengths) {
            if (stored - actual).abs() > TOL {
                return Err(Error::Schema(format!(
                    "stored reference length {stored} disagrees with geometry {actual}"
                )));
            }
        }
        Ok(chain)
    }

    pub fn joints(&self) -> &[Vec3] {
        &self.joints
    }

    pub fn reference_lengths(&self) -> &[f64] {
        &self.reference_lengths
    }

    pub fn edge_count(&self) -> usize {
        self.joints.len() - 1
    }

    pub fn edge(&self, i: usize) -> Segment {
        Segment {
            a: self.joints[i],
            b: self.joints[i + 1],
        }
    }

    /// Largest deviation of current edge lengths from the reference.
    pub fn length_drift(&self) -> f64 {
        self.joints
            .windows(2)
            .zip(&self.reference_lengths)
            .map(|(w, l)| (w[0].dist(w[1]) - l).abs())
            .fold(0.0, f64::max)
    }

    pub fn translated(&self, offset: Vec3) -> Chain {
        Chain {
            role: self.role,
            joints: self.joints.iter().map(|&j| j + offset).collect(),
            reference_lengths: self.reference_lengths.clone(),
        }
    }
}

/// Suffix rotation: joints after `pivot` rotate rigidly about `axis` through
/// the pivot joint.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FoldMove {
    pub chain: usize,
    pub pivot: usize,
    pub axis: Vec3,
    pub angle: f64,
}

/// Apply a fold to a single chain, producing the folded copy.
pub fn apply_fold(chain: &Chain, mv: &FoldMove) -> Result<Chain> {
    let n = chain.joints.len();
    if mv.pivot == 0 || mv.pivot >= n - 1 {
        return Err(Error::BadPivot { pivot: mv.pivot, joints: n });
    }
    let axis = mv
        .axis
        .normalized(TOL)
        .ok_or_else(|| Error::InvalidMove("zero fold axis".into()))?;
    let center = chain.joints[mv.pivot];
    let mut joints = chain.joints.clone();
    for j in joints.iter_mut().skip(mv.pivot + 1) {
        *j = center + (*j - center).rotated_about(axis, mv.angle);
    }
    Ok(Chain {
        role: chain.role,
        joints,
        reference_lengths: chain.reference_lengths.clone(),
    })
}

/// Recorded fact that a specific edge crosses a specific triangle with a
/// fixed orientation sign; persistence of these certificates is the tracked
/// invariant of a threaded scene.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PiercingCertificate {
    /// (chain index, edge index) of the piercing edge.
    pub piercer: (usize, usize),
    /// (chain index, joint index triple) spanning the target triangle.
    pub target: (usize, [usize; 3]),
    pub expected_sign: i8,
}

/// World state: chains plus the scale, clearance, and tracked certificates.
#[derive(Debug, Clone)]
pub struct Scene {
    pub chains: Vec<Chain>,
    pub epsilon: f64,
    pub tau: f64,
    pub certificates: Vec<PiercingCertificate>,
    pub provenance: Provenance,
}

impl Scene {
    pub fn chain_by_role(&self, role: ChainRole) -> Result<(usize, &Chain)> {
        self.chains
            .iter()
            .enumerate()
            .find(|(_, c)| c.role == role)
            .ok_or_else(|| Error::MissingRole(role.to_string()))
    }

    /// All edges as (chain index, edge index, segment).
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Segment)> + '_ {
        self.chains.iter().enumerate().flat_map(|(ci, c)| {
            (0..c.edge_count()).map(move |ei| (ci, ei, c.edge(ei)))
        })
    }

    pub fn certificate_segment(&self, cert: &PiercingCertificate) -> Segment {
        self.chains[cert.piercer.0].edge(cert.piercer.1)
    }

    pub fn certificate_triangle(&self, cert: &PiercingCertificate) -> Result<Triangle> {
        let joints = self.chains[cert.target.0].joints();
        let [i, j, k] = cert.target.1;
        Triangle::new(joints[i], joints[j], joints[k])
    }

    /// Scene copy with one fold applied.
    pub fn with_move(&self, mv: &FoldMove) -> Result<Scene> {
        if mv.chain >= self.chains.len() {
            return Err(Error::InvalidMove(format!(
                "chain index {} out of range",
                mv.chain
            )));
        }
        let mut chains = self.chains.clone();
        chains[mv.chain] = apply_fold(&chains[mv.chain], mv)?;
        Ok(Scene {
            chains,
            epsilon: self.epsilon,
            tau: self.tau,
            certificates: self.certificates.clone(),
            provenance: self.provenance.clone(),
        })
    }
}

/// Minimum clearance over all non-adjacent edge pairs, within and across
/// chains. Adjacent edges share a joint and are excluded (their overlap
/// criterion is separate).
pub fn min_clearance(scene: &Scene) -> f64 {
    let edges: Vec<(usize, usize, Segment)> = scene.edges().collect();
    let mut best = f64::INFINITY;
    for a in 0..edges.len() {
        for b in a + 1..edges.len() {
            let (ca, ea, ref sa) = edges[a];
            let (cb, eb, ref sb) = edges[b];
            if ca == cb && ea.abs_diff(eb) == 1 {
                continue;
            }
            best = best.min(seg_seg_distance(sa, sb));
        }
    }
    best
}

/// True iff every non-adjacent edge pair clears `tau` and adjacent edges
/// meet only at their shared joint (no fold-flat overlap).
pub fn scene_valid(scene: &Scene) -> bool {
    for chain in &scene.chains {
        let joints = chain.joints();
        for i in 1..joints.len() - 1 {
            let back = (joints[i - 1] - joints[i]).normalized(0.0);
            let fwd = (joints[i + 1] - joints[i]).normalized(0.0);
            match (back, fwd) {
                (Some(u), Some(v)) => {
                    if u.dot(v) > 1.0 - TOL {
                        return false; // doubled back onto the previous edge
                    }
                }
                _ => return false,
            }
        }
    }
    min_clearance(scene) >= scene.tau
}

/// True iff every certificate's edge still pierces its triangle with the
/// expected sign. Degenerate contacts propagate as errors.
pub fn check_certificates(scene: &Scene) -> Result<bool> {
    for cert in &scene.certificates {
        let seg = scene.certificate_segment(cert);
        let tri = scene.certificate_triangle(cert)?;
        let hit = seg_triangle_pierce(&seg, &tri)?;
        if !hit.pierces || hit.sign != cert.expected_sign {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Draw a random fold: uniform foldable chain and interior pivot, axis
/// uniform on the sphere, angle from a zero-mean normal with scale `sigma`,
/// wrapped into (-pi, pi].
pub fn random_fold(rng: &mut ChaCha8Rng, scene: &Scene, sigma: f64) -> FoldMove {
    assert!(sigma >= 0.0, "sigma must be nonnegative");
    let foldable: Vec<usize> = scene
        .chains
        .iter()
        .enumerate()
        .filter(|(_, c)| c.joints().len() >= 3)
        .map(|(i, _)| i)
        .collect();
    assert!(!foldable.is_empty(), "scene has no foldable chain");
    let chain = foldable[rng.random_range(0..foldable.len())];
    let n = scene.chains[chain].joints().len();
    let pivot = rng.random_range(1..=n - 2);
    let a: [f64; 3] = UnitSphere.sample(rng);
    let axis = Vec3::new(a[0], a[1], a[2]);
    let angle = if sigma == 0.0 {
        0.0
    } else {
        let raw: f64 = Normal::new(0.0, sigma).expect("valid sigma").sample(rng);
        let mut wrapped = raw.rem_euclid(2.0 * std::f64::consts::PI);
        if wrapped > std::f64::consts::PI {
            wrapped -= 2.0 * std::f64::consts::PI;
        }
        wrapped
    };
    FoldMove { chain, pivot, axis, angle }
}

/// Step-size cap for trajectory sampling: discrete moves below this angle
/// cannot tunnel an edge through a construction-scale triangle.
pub const FOLD_STEP_CAP: f64 = 0.05;

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn chain(points: &[(f64, f64, f64)]) -> Chain {
        Chain::new(
            points.iter().map(|&(x, y, z)| Vec3::new(x, y, z)).collect(),
            ChainRole::Generic,
        )
        .unwrap()
    }

    fn bare_scene(chains: Vec<Chain>, tau: f64) -> Scene {
        Scene {
            chains,
            epsilon: 1.0,
            tau,
            certificates: Vec::new(),
            provenance: Provenance::adhoc("test"),
        }
    }

    #[test]
    fn one_link_chain() {
        let c = chain(&[(0., 0., 0.), (1., 0., 0.)]);
        assert_eq!(c.reference_lengths(), &[1.0]);
    }

    #[test]
    fn repeated_joint_rejected() {
        let r = Chain::new(
            vec![Vec3::ZERO, Vec3::ZERO],
            ChainRole::Generic,
        );
        assert!(matches!(r, Err(Error::RepeatedJoint(0))));
    }

    #[test]
    fn tangle_four_chain_lengths_accepted() {
        let c = chain(&[
            (0., 0., 0.),
            (3., 0., 0.),
            (3., 1., 0.),
            (4., 1., 0.),
            (4., 4., 0.),
        ]);
        assert_eq!(c.reference_lengths(), &[3.0, 1.0, 1.0, 3.0]);
    }

    #[test]
    fn zero_angle_fold_is_identity() {
        let c = chain(&[(0., 0., 0.), (1., 0., 0.), (2., 0., 0.)]);
        let mv = FoldMove { chain: 0, pivot: 1, axis: Vec3::Z, angle: 0.0 };
        let folded = apply_fold(&c, &mv).unwrap();
        for (a, b) in c.joints().iter().zip(folded.joints()) {
            assert!(a.dist(*b) < 1e-15);
        }
    }

    #[test]
    fn pi_fold_doubles_back() {
        let c = chain(&[(0., 0., 0.), (1., 0., 0.), (2., 0., 0.)]);
        let mv = FoldMove { chain: 0, pivot: 1, axis: Vec3::Z, angle: std::f64::consts::PI };
        let folded = apply_fold(&c, &mv).unwrap();
        assert!(folded.joints()[2].dist(Vec3::ZERO) < 1e-12);
        assert!(folded.length_drift() < 1e-9);
    }

    #[test]
    fn bad_pivot_rejected() {
        let c = chain(&[(0., 0., 0.), (1., 0., 0.), (2., 0., 0.)]);
        for pivot in [0, 2, 7] {
            let mv = FoldMove { chain: 0, pivot, axis: Vec3::Z, angle: 0.1 };
            assert!(matches!(apply_fold(&c, &mv), Err(Error::BadPivot { .. })));
        }
    }

    #[test]
    fn parallel_chains_clear() {
        let s = bare_scene(
            vec![
                chain(&[(0., 0., 0.), (1., 0., 0.)]),
                chain(&[(0., 1., 0.), (1., 1., 0.)]),
            ],
            0.01,
        );
        assert!(scene_valid(&s));
        assert!((min_clearance(&s) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn crossing_chains_invalid() {
        let s = bare_scene(
            vec![
                chain(&[(0., 0., 0.), (1., 0., 0.)]),
                chain(&[(0.5, -0.5, 0.), (0.5, 0.5, 0.)]),
            ],
            0.01,
        );
        assert!(!scene_valid(&s));
        assert!(min_clearance(&s) < 1e-12);
    }

    #[test]
    fn folded_flat_adjacent_edges_invalid() {
        let s = bare_scene(
            vec![chain(&[(0., 0., 0.), (1., 0., 0.), (0.5, 0., 0.)])],
            1e-6,
        );
        assert!(!scene_valid(&s));
    }

    #[test]
    fn random_fold_deterministic() {
        let s = bare_scene(
            vec![chain(&[(0., 0., 0.), (1., 0., 0.), (2., 0., 0.), (3., 0., 0.)])],
            0.01,
        );
        let draw = |seed: u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            random_fold(&mut rng, &s, 0.1)
        };
        let (a, b) = (draw(42), draw(42));
        assert_eq!(a.chain, b.chain);
        assert_eq!(a.pivot, b.pivot);
        assert_eq!(a.angle, b.angle);
        assert!(a.axis.dist(b.axis) == 0.0);
    }

    #[test]
    fn random_fold_zero_sigma() {
        let s = bare_scene(
            vec![chain(&[(0., 0., 0.), (1., 0., 0.), (2., 0., 0.)])],
            0.01,
        );
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(random_fold(&mut rng, &s, 0.0).angle, 0.0);
    }

    #[test]
    fn random_fold_mean_near_zero() {
        let s = bare_scene(
            vec![chain(&[(0., 0., 0.), (1., 0., 0.), (2., 0., 0.)])],
            0.01,
        );
        let sigma = 0.3;
        let n = 10_000;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mean: f64 = (0..n)
            .map(|_| random_fold(&mut rng, &s, sigma).angle)
            .sum::<f64>()
            / n as f64;
        assert!(mean.abs() < 3.0 * sigma / (n as f64).sqrt());
    }

    #[test]
    fn fold_lengths_preserved_bulk() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let base = chain(&[
            (0., 0., 0.),
            (1., 0.2, -0.3),
            (1.8, 1.1, 0.4),
            (2.5, 0.4, 1.2),
            (3.3, -0.2, 0.8),
        ]);
        let s = bare_scene(vec![base], 1e-12);
        let mut current = s.chains[0].clone();
        for _ in 0..100_000 {
            let mv = random_fold(&mut rng, &s, 0.4);
            current = apply_fold(&current, &mv).unwrap();
            // Drift never accumulates past tolerance.
        }
        assert!(current.length_drift() < 1e-9);
    }

    #[test]
    fn fold_inverse_restores_joints() {
        let c = chain(&[
            (0., 0., 0.),
            (1., 0.2, -0.3),
            (1.8, 1.1, 0.4),
            (2.5, 0.4, 1.2),
        ]);
        let mv = FoldMove {
            chain: 0,
            pivot: 2,
            axis: Vec3::new(0.3, -0.5, 0.8).normalized(0.0).unwrap(),
            angle: 0.7,
        };
        let inv = FoldMove { angle: -mv.angle, ..mv };
        let back = apply_fold(&apply_fold(&c, &mv).unwrap(), &inv).unwrap();
        for (a, b) in c.joints().iter().zip(back.joints()) {
            assert!(a.dist(*b) < 1e-9);
        }
    }
}
