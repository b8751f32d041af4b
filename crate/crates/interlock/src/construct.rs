//! Generators for the concrete scenes: the 3/4-tangle, the 1-link jag
//! gadget, the 16-link near-rigid trapezoid chain, and the threaded 2-chain.
//!
//! Coordinate layout of the trapezoid (the `z = 0` plane, before the small
//! out-of-plane offsets of the corner gadgets):
//!
//! ```text
//!          T4 --------- T3          T4 = top-left  (tangle corner)
//!         /    \          \         T3 = top-right (jag corner)
//!        /       \ diag     \       T1 = bottom-left (jag corner)
//!      T1 ----------------- T2      T2 = bottom-right (tangle corner)
//! ```
//!
//! The two threading lines run along the extended trapezoid sides, offset
//! `-zeta * epsilon` out of plane; the 2-chain apex `v` sits at their
//! intersection above the top edge. Corner gadgets are built around exact
//! crossing points on those lines, so every piercing certificate holds by
//! construction and is then re-verified numerically.

use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_4;

use crate::chain::{check_certificates, min_clearance, scene_valid, Chain, ChainRole, PiercingCertificate, Scene};
use crate::error::{Error, Result};
use crate::geom::{seg_triangle_pierce, Segment, Triangle, Vec3};

/// Out-of-plane offset of the 2-chain plane, in units of epsilon.
const ZETA: f64 = 0.05;
/// Distance (in epsilon units) from a corner gadget's short edge to the
/// planned crossing point of the threading line through its triangle.
const CROSS_PULLBACK: f64 = 0.15;
/// Threading-line crossing parameter: the line pierces each gadget triangle
/// this many epsilon units below the corner, toward the chain exterior.
const CROSS_AT: f64 = -0.5;

/// Orthonormal placement frame: `place(p) = origin + u*p.x + v*p.y + w*p.z`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Frame {
    pub origin: Vec3,
    pub u: Vec3,
    pub v: Vec3,
    pub w: Vec3,
}

impl Frame {
    pub fn identity() -> Frame {
        Frame { origin: Vec3::ZERO, u: Vec3::X, v: Vec3::Y, w: Vec3::Z }
    }

    pub fn place(&self, p: Vec3) -> Vec3 {
        self.origin + self.u * p.x + self.v * p.y + self.w * p.z
    }

    fn is_orthonormal(&self) -> bool {
        let ortho = self.u.dot(self.v).abs() < 1e-9
            && self.v.dot(self.w).abs() < 1e-9
            && self.w.dot(self.u).abs() < 1e-9;
        let unit = (self.u.norm() - 1.0).abs() < 1e-9
            && (self.v.norm() - 1.0).abs() < 1e-9
            && (self.w.norm() - 1.0).abs() < 1e-9;
        ortho && unit
    }
}

/// Scale of a tangle build: unit middle bars, or bars shrunk so every joint
/// stays within an epsilon-ball of the middle-bar midpoint.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaleMode {
    Unit,
    Epsilon(f64),
}

impl ScaleMode {
    /// Multiplier applied to the canonical unit construction. In epsilon
    /// mode the middle bars are epsilon/6, i.e. scale epsilon/6.
    pub fn factor(&self) -> f64 {
        match self {
            ScaleMode::Unit => 1.0,
            ScaleMode::Epsilon(e) => e / 6.0,
        }
    }

    /// Nominal confinement radius: 6 in unit mode (the largest bound is
    /// 5.5), epsilon in epsilon mode.
    pub fn ball_radius(&self) -> f64 {
        6.0 * self.factor()
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TangleParams {
    pub scale: ScaleMode,
    pub frame: Frame,
}

impl TangleParams {
    pub fn unit() -> TangleParams {
        TangleParams { scale: ScaleMode::Unit, frame: Frame::identity() }
    }

    pub fn epsilon(e: f64) -> TangleParams {
        TangleParams { scale: ScaleMode::Epsilon(e), frame: Frame::identity() }
    }

    fn validate(&self) -> Result<()> {
        if let ScaleMode::Epsilon(e) = self.scale {
            if !(e > 0.0) {
                return Err(Error::ParameterDomain("tangle epsilon must be positive".into()));
            }
        }
        if !self.frame.is_orthonormal() {
            return Err(Error::ParameterDomain("tangle frame must be orthonormal".into()));
        }
        Ok(())
    }
}

/// Canonical unit-scale 3/4-tangle, in local coordinates.
///
/// 4-chain A,B,C,D,E with |BC| = |CD| = 1 and end bars 3; 3-chain w,x,y,z
/// with |xy| = 1 piercing triangle BCD, end bars 3. The end bars sweep to
/// opposite sides so each chain blocks the other's middle bar from backing
/// out of the crossing region.
fn unit_tangle_joints() -> ([Vec3; 5], [Vec3; 4]) {
    let b = Vec3::new(-0.6, 0.0, 0.0);
    let c = Vec3::new(0.0, 0.8, 0.0);
    let d = Vec3::new(0.6, 0.0, 0.0);
    let x = Vec3::new(0.0, 0.3, -0.5);
    let y = Vec3::new(0.0, 0.3, 0.5);

    let a_dir = Vec3::new(-0.25, -0.5, -0.83).normalized(0.0).unwrap();
    let e_dir = Vec3::new(0.25, -0.5, 0.83).normalized(0.0).unwrap();
    let w_dir = Vec3::new(0.5, -0.2, -0.84).normalized(0.0).unwrap();
    let z_dir = Vec3::new(-0.5, -0.2, 0.84).normalized(0.0).unwrap();

    let a = b + a_dir * 3.0;
    let e = d + e_dir * 3.0;
    let w = x + w_dir * 3.0;
    let z = y + z_dir * 3.0;
    ([a, b, c, d, e], [w, x, y, z])
}

/// Build an interlocked 3-chain/4-chain pair in the given frame and scale.
///
/// Returns (3-chain, 4-chain, certificate); the certificate indexes chains
/// as they appear in a tangle scene: chain 0 = 4-chain, chain 1 = 3-chain.
pub fn build_tangle34(p: &TangleParams) -> Result<(Chain, Chain, PiercingCertificate)> {
    p.validate()?;
    let s = p.scale.factor();
    let (four, three) = unit_tangle_joints();
    let place = |v: Vec3| p.frame.place(v * s);
    let chain4 = Chain::new(four.iter().map(|&v| place(v)).collect(), ChainRole::Tangle4)?;
    let chain3 = Chain::new(three.iter().map(|&v| place(v)).collect(), ChainRole::Tangle3)?;

    let seg = chain3.edge(1); // x -> y
    let tri = Triangle::new(chain4.joints()[1], chain4.joints()[2], chain4.joints()[3])?;
    let hit = seg_triangle_pierce(&seg, &tri)?;
    if !hit.pierces {
        return Err(Error::ConstructionClearance(
            "tangle middle bar fails to pierce its triangle".into(),
        ));
    }
    let certificate = PiercingCertificate {
        piercer: (1, 1),
        target: (0, [1, 2, 3]),
        expected_sign: hit.sign,
    };
    Ok((chain3, chain4, certificate))
}

/// Specification of a 1-link jag corner gadget.
#[derive(Debug, Clone, Copy)]
pub struct JagSpec {
    pub corner: Vec3,
    /// Direction from the corner toward joint `a` (along the incoming bar).
    pub incoming: Vec3,
    /// Direction from the corner toward joint `d` (along the outgoing bar).
    pub outgoing: Vec3,
    /// Length of the short link `bc`.
    pub epsilon: f64,
    /// Base-corner angle context (between the two bars).
    pub theta: f64,
    /// Length of the `ab` and `cd` arms.
    pub arm: f64,
}

/// Four joints (a, b, c, d) of a 1-link jag: arms along the given
/// directions, short link `bc` of length epsilon bridging the corner.
/// The gap between lines `ab` and `cd` is at most epsilon.
pub fn build_jag(s: &JagSpec) -> Result<[Vec3; 4]> {
    if !(s.epsilon > 0.0) || !(s.arm > 0.0) {
        return Err(Error::ParameterDomain("jag lengths must be positive".into()));
    }
    let din = s
        .incoming
        .normalized(1e-12)
        .ok_or_else(|| Error::DegenerateJag("zero incoming direction".into()))?;
    let dout = s
        .outgoing
        .normalized(1e-12)
        .ok_or_else(|| Error::DegenerateJag("zero outgoing direction".into()))?;
    let n = din.cross(dout);
    if n.norm() < 1e-9 {
        return Err(Error::DegenerateJag("incoming and outgoing directions are parallel".into()));
    }
    let n = n.normalized(0.0).unwrap();
    let b = s.corner + n * (s.epsilon / 2.0);
    let c = s.corner - n * (s.epsilon / 2.0);
    let a = b + din * s.arm;
    let d = c + dout * s.arm;
    Ok([a, b, c, d])
}

/// Trapezoid parameters: half-base B, side length L, base angle theta, the
/// corner-ball radius epsilon, endpoint extension (in units of L), and the
/// tangle twist about each diagonal axis.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TrapezoidParams {
    pub half_base: f64,
    pub side: f64,
    pub theta: f64,
    pub epsilon: f64,
    pub extension_factor: f64,
    pub twist: f64,
}

impl Default for TrapezoidParams {
    /// Defaults keep every domain constraint satisfied with wide margins;
    /// the top edge has length 2(B - L cos theta) = 0.4, i.e. 40 epsilon.
    fn default() -> Self {
        TrapezoidParams {
            half_base: 1.0,
            side: 1.6,
            theta: std::f64::consts::FRAC_PI_3,
            epsilon: 0.01,
            extension_factor: 10.0,
            twist: FRAC_PI_4,
        }
    }
}

impl TrapezoidParams {
    pub fn validate(&self) -> Result<()> {
        let (b, l, th, e) = (self.half_base, self.side, self.theta, self.epsilon);
        if !(b > 0.0 && l > 0.0 && e > 0.0) {
            return Err(Error::ParameterDomain("B, L, epsilon must be positive".into()));
        }
        if !(th > 0.0 && th < std::f64::consts::FRAC_PI_2) {
            return Err(Error::ParameterDomain("theta must lie in (0, pi/2)".into()));
        }
        if e > b.min(l) / 100.0 {
            return Err(Error::ParameterDomain(format!(
                "epsilon {e} exceeds min(B, L)/100 = {}",
                b.min(l) / 100.0
            )));
        }
        if 2.0 * e / l > 1.0 || th - (2.0 * e / l).asin() <= 0.0 {
            return Err(Error::ParameterDomain(
                "theta - asin(2 epsilon / L) must stay positive".into(),
            ));
        }
        // The top corners must be separated: a collapsed top edge would
        // merge the gadgets at T3 and T4.
        if b - l * th.cos() < 10.0 * e {
            return Err(Error::ParameterDomain(format!(
                "top half-length B - L cos(theta) = {} must be at least 10 epsilon",
                b - l * th.cos()
            )));
        }
        if !(self.extension_factor > 0.0) {
            return Err(Error::ParameterDomain("extension factor must be positive".into()));
        }
        Ok(())
    }

    pub fn apex_height(&self) -> f64 {
        self.half_base * self.theta.tan()
    }

    pub fn half_apex_angle(&self) -> f64 {
        std::f64::consts::FRAC_PI_2 - self.theta
    }

    /// Ideal corners [T1, T2, T3, T4] in the z = 0 plane.
    pub fn corners(&self) -> [Vec3; 4] {
        let (b, l, th) = (self.half_base, self.side, self.theta);
        let t1 = Vec3::new(-b, 0.0, 0.0);
        let t2 = Vec3::new(b, 0.0, 0.0);
        let t3 = Vec3::new(b - l * th.cos(), l * th.sin(), 0.0);
        let t4 = Vec3::new(-b + l * th.cos(), l * th.sin(), 0.0);
        [t1, t2, t3, t4]
    }

    pub fn apex(&self) -> Vec3 {
        Vec3::new(0.0, self.apex_height(), 0.0)
    }

    fn extension(&self) -> f64 {
        self.extension_factor * self.side
    }
}

/// Joint indices of the 16-chain, by role. The chain visits, in order:
/// exterior start, T2 tangle middle pair, T1 jag, T4 tangle run, T2 tangle
/// core, T3 jag, exterior end.
pub mod joints {
    pub const S0: usize = 0;
    pub const X2: usize = 1;
    pub const Y2: usize = 2;
    pub const A1: usize = 3;
    pub const B1: usize = 4;
    pub const C4: usize = 5;
    pub const D4: usize = 6;
    pub const E4: usize = 7;
    pub const F4: usize = 8;
    pub const G4: usize = 9;
    pub const H4: usize = 10;
    pub const K2: usize = 11;
    pub const L2: usize = 12;
    pub const M2: usize = 13;
    pub const P3: usize = 14;
    pub const Q3: usize = 15;
    pub const S1: usize = 16;
}

/// Output of the trapezoid build: the 17-joint chain plus the corner map
/// and planned threading geometry consumed by `thread_two_chain`.
#[derive(Debug, Clone)]
pub struct TrapezoidBuild {
    pub chain: Chain,
    pub params: TrapezoidParams,
    /// Ideal corners [T1, T2, T3, T4]: the epsilon-ball centers.
    pub corners: [Vec3; 4],
    /// Joint indices belonging to each corner's ball.
    pub corner_joints: [Vec<usize>; 4],
    pub apex: Vec3,
    /// Threading lines (point on line, unit direction up the side).
    pub left_line: (Vec3, Vec3),
    pub right_line: (Vec3, Vec3),
    /// Planned 2-chain apex.
    pub planned_v: Vec3,
}

fn rotate_offsets(offsets: &mut [Vec3], axis: Vec3, angle: f64) {
    if angle.abs() < 1e-15 {
        return;
    }
    for o in offsets.iter_mut() {
        *o = o.rotated_about(axis, angle);
    }
}

/// Build the 16-link trapezoid chain: 5 skeleton links (base, left side,
/// diagonal, right side, extended top), a 5-extra-link tangle at T4, a
/// 4-extra-link tangle at T2, and 1-link jags at T1 and T3. The first and
/// last links are extended so the chain endpoints sit far outside every
/// corner ball.
pub fn build_trapezoid16(tp: &TrapezoidParams) -> Result<TrapezoidBuild> {
    tp.validate()?;
    let e = tp.epsilon;
    let [t1, t2, t3, t4] = tp.corners();
    let th = tp.theta;
    let left_dir = Vec3::new(th.cos(), th.sin(), 0.0);
    let right_dir = Vec3::new(-th.cos(), th.sin(), 0.0);
    let diag_dir = (t2 - t4).normalized(0.0).unwrap();
    let top_dir = (t4 - t3).normalized(0.0).unwrap();
    let ext = tp.extension();

    // Threading lines: the trapezoid sides extended, dropped ZETA*eps below
    // the plane. All corner gadgets are anchored to exact crossing points
    // on these lines.
    let zoff = Vec3::new(0.0, 0.0, -ZETA * e);
    let left_line = (t1 + zoff, left_dir);
    let right_line = (t2 + zoff, right_dir);
    let planned_v = tp.apex() + zoff;

    // --- T1 jag (bottom-left): short vertical link of length eps.
    // The threading line crosses the wedge triangle (y2, a1, b1) at
    // CROSS_AT*eps below T1; the short edge sits CROSS_PULLBACK*eps further
    // from the base interior so the crossing lands strictly inside.
    let q1_cross = left_line.0 + left_line.1 * (CROSS_AT * e);
    let m1 = q1_cross - Vec3::X * (CROSS_PULLBACK * e) - zoff; // in-plane midpoint
    let a1 = m1 + zoff + Vec3::Z * (0.5 * e);
    let b1 = m1 + zoff - Vec3::Z * (0.5 * e);

    // --- T3 jag (top-right): mirror pattern along the top direction.
    let q3_cross = right_line.0 + right_line.1 * ((tp.side / e + CROSS_AT) * e);
    let m3 = q3_cross - top_dir * (CROSS_PULLBACK * e) - zoff;
    let p3 = m3 + zoff - Vec3::Z * (0.5 * e);
    let q3 = m3 + zoff + Vec3::Z * (0.5 * e);
    let s1 = q3 + top_dir * ext;

    // --- T4 tangle cluster (top-left), offsets in units of eps.
    // Wedge edge g4-h4 straddles the threading line at its crossing point;
    // the 4-chain core triangle f4,g4,h4 is pierced by the 3-chain middle
    // c4-d4.
    let q4_cross = left_line.0 + left_line.1 * ((tp.side / e + CROSS_AT) * e);
    let t4_local = |o: Vec3| t4 + o * e;
    // Short-edge midpoint, pulled back along the diagonal so the crossing
    // lands strictly inside the wedge on the diagonal side of the edge.
    let wedge_mid4 = (q4_cross - t4) / e - diag_dir * CROSS_PULLBACK;
    let h4_o = wedge_mid4 - Vec3::Z * (1.0 / 12.0);
    let g4_o = wedge_mid4 + Vec3::Z * (1.0 / 12.0);
    // Core apex f4: equilateral triangle with the g4-h4 edge, leaning
    // toward the threading line side.
    let core_out = Vec3::Z.cross(diag_dir).normalized(0.0).unwrap(); // horizontal, away from the diag
    let f4_o = wedge_mid4 + core_out * (3f64.sqrt() / 2.0 / 6.0);
    let core_centroid = (h4_o + g4_o + f4_o) / 3.0;
    // 3-chain middle c4-d4 pierces the core near its centroid. Tilt the
    // piercer slightly out of plane so its joints clear the threading line.
    let pierce_dir = (Vec3::Z.cross(core_out) + Vec3::Z * 0.4)
        .normalized(0.0)
        .unwrap();
    let c4_o = core_centroid + pierce_dir * (1.0 / 12.0);
    let d4_o = core_centroid - pierce_dir * (1.0 / 12.0);
    // Hub e4: closes d4 -> e4 -> f4 with two eps/2 links, tucked below.
    let e4_o = solve_hub(d4_o, f4_o, Vec3::new(0.49, -0.49, -0.72), 0.5)?;

    let mut t4_offsets = [c4_o, d4_o, e4_o, f4_o, g4_o, h4_o];
    rotate_offsets(&mut t4_offsets, diag_dir, tp.twist - FRAC_PI_4);
    let [c4_o, d4_o, e4_o, f4_o, g4_o, h4_o] = t4_offsets;
    let (c4, d4, e4, f4, g4, h4) = (
        t4_local(c4_o),
        t4_local(d4_o),
        t4_local(e4_o),
        t4_local(f4_o),
        t4_local(g4_o),
        t4_local(h4_o),
    );

    // --- T2 tangle cluster (bottom-right).
    // Wedge (a1, y2, x2) straddles the right threading line; the 4-chain
    // core k2,l2,m2 is horizontal and pierced by the vertical x2-y2 link.
    let q2_cross = right_line.0 + right_line.1 * (CROSS_AT * e);
    let t2_local = |o: Vec3| t2 + o * e;
    let wedge_mid2 = (q2_cross - t2) / e + Vec3::X * CROSS_PULLBACK;
    let x2_o = wedge_mid2 + Vec3::Z * (1.0 / 12.0);
    let y2_o = wedge_mid2 - Vec3::Z * (1.0 / 12.0);
    // The horizontal core sits centered on the vertical x2-y2 piercer, so
    // the crossing lands at the core centroid.
    let core2_centroid = wedge_mid2;
    let circum = 1.0 / (6.0 * 3f64.sqrt());
    let deg = std::f64::consts::PI / 180.0;
    let k2_o = core2_centroid + Vec3::new((135.0 * deg).cos(), (135.0 * deg).sin(), 0.0) * circum;
    let l2_o = core2_centroid + Vec3::new((255.0 * deg).cos(), (255.0 * deg).sin(), 0.0) * circum;
    let m2_o = core2_centroid + Vec3::new((15.0 * deg).cos(), (15.0 * deg).sin(), 0.0) * circum;

    let mut t2_offsets = [k2_o, l2_o, m2_o, x2_o, y2_o];
    rotate_offsets(&mut t2_offsets, -diag_dir, tp.twist - FRAC_PI_4);
    let [k2_o, l2_o, m2_o, x2_o, y2_o] = t2_offsets;
    let (k2, l2, m2, x2, y2) = (
        t2_local(k2_o),
        t2_local(l2_o),
        t2_local(m2_o),
        t2_local(x2_o),
        t2_local(y2_o),
    );

    // Exterior start: the T2 tangle's outer 3-chain bar, extended.
    let s0_dir = Vec3::new(0.45, -0.85, -0.28).normalized(0.0).unwrap();
    let s0 = x2 + s0_dir * ext;

    let joints_vec = vec![s0, x2, y2, a1, b1, c4, d4, e4, f4, g4, h4, k2, l2, m2, p3, q3, s1];
    let chain = Chain::new(joints_vec, ChainRole::Trapezoid16)?;
    debug_assert_eq!(chain.edge_count(), 16);

    let corner_joints = [
        vec![joints::A1, joints::B1],
        vec![joints::X2, joints::Y2, joints::K2, joints::L2, joints::M2],
        vec![joints::P3, joints::Q3],
        vec![joints::C4, joints::D4, joints::E4, joints::F4, joints::G4, joints::H4],
    ];

    let build = TrapezoidBuild {
        chain,
        params: *tp,
        corners: [t1, t2, t3, t4],
        corner_joints,
        apex: tp.apex(),
        left_line,
        right_line,
        planned_v,
    };
    check_trapezoid_integrity(&build)?;
    Ok(build)
}

/// Find the hub joint at distance `arm` from both `p` and `q`, displaced
/// along `bias` (made orthogonal to p-q) from their midpoint.
fn solve_hub(p: Vec3, q: Vec3, bias: Vec3, arm: f64) -> Result<Vec3> {
    let mid = (p + q) / 2.0;
    let half = (q - p) / 2.0;
    let h2 = arm * arm - half.norm_squared();
    if h2 <= 0.0 {
        return Err(Error::ConstructionClearance(
            "hub arms too short to bridge the gap".into(),
        ));
    }
    let d = q - p;
    let ortho = (bias - d * (bias.dot(d) / d.norm_squared()))
        .normalized(1e-12)
        .ok_or_else(|| Error::ConstructionClearance("hub bias parallel to the gap".into()))?;
    Ok(mid + ortho * h2.sqrt())
}

/// Structural checks on a fresh trapezoid build: joint count, corner-ball
/// containment, internal tangle piercings, and self-clearance.
fn check_trapezoid_integrity(build: &TrapezoidBuild) -> Result<()> {
    use joints::*;
    let tp = &build.params;
    let joints = build.chain.joints();
    if joints.len() != 17 {
        return Err(Error::ConstructionClearance(format!(
            "expected 17 joints, built {}",
            joints.len()
        )));
    }
    for (ci, list) in build.corner_joints.iter().enumerate() {
        for &ji in list {
            let d = joints[ji].dist(build.corners[ci]);
            if d > tp.epsilon {
                return Err(Error::ConstructionClearance(format!(
                    "joint {ji} sits {d} from corner {} (> epsilon {})",
                    ci + 1,
                    tp.epsilon
                )));
            }
        }
    }
    // Internal tangle piercings: 3-chain middles through 4-chain cores.
    let pierce = |seg: Segment, a: usize, b: usize, c: usize| -> Result<()> {
        let tri = Triangle::new(joints[a], joints[b], joints[c])?;
        let hit = seg_triangle_pierce(&seg, &tri)?;
        if !hit.pierces {
            return Err(Error::ConstructionClearance(
                "tangle middle bar misses its core triangle".into(),
            ));
        }
        Ok(())
    };
    pierce(build.chain.edge(C4), F4, G4, H4)?;
    pierce(build.chain.edge(X2), K2, L2, M2)?;

    // The bare trapezoid must clear itself.
    let scene = Scene {
        chains: vec![build.chain.clone()],
        epsilon: tp.epsilon,
        tau: tp.epsilon / 100.0,
        certificates: Vec::new(),
        provenance: Provenance::adhoc("trapezoid integrity check"),
    };
    if !scene_valid(&scene) {
        return Err(Error::ConstructionClearance(format!(
            "trapezoid self-clearance {} below tau {}",
            min_clearance(&scene),
            tp.epsilon / 100.0
        )));
    }
    Ok(())
}

/// Record of the 2-chain returned by `thread_two_chain`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TwoChainSpec {
    pub u: Vec3,
    pub v: Vec3,
    pub w: Vec3,
    pub link_uv: f64,
    pub link_vw: f64,
}

/// Thread the 2-chain (u, v, w) through the trapezoid: uv runs down the
/// left side through the T1 jag triangle and a jag loop of the T4 tangle's
/// 4-chain; vw runs down the right side through the T3 jag triangle and a
/// jag loop of the T2 tangle's 3-chain. Both links share the apex v.
///
/// Returns the chain and exactly four piercing certificates (chain indices
/// follow the interlocked scene layout: 0 = trapezoid, 1 = 2-chain).
pub fn thread_two_chain(
    tp: &TrapezoidParams,
    trap: &TrapezoidBuild,
) -> Result<(Chain, Vec<PiercingCertificate>)> {
    use joints::*;
    let v = trap.planned_v;
    let link = tp.extension();
    let u = v - trap.left_line.1 * link;
    let w = v - trap.right_line.1 * link;
    let two = Chain::new(vec![u, v, w], ChainRole::TwoChain)?;

    let h = tp.apex_height();
    let v_height = v.y;
    if (v_height - h).abs() > tp.epsilon {
        return Err(Error::ThreadingFailure(format!(
            "apex height {v_height} outside [h - eps, h + eps] around {h}"
        )));
    }

    let targets: [(usize, [usize; 3]); 4] = [
        (0, [Y2, A1, B1]), // uv through the T1 jag triangle
        (0, [K2, H4, G4]), // uv through the interior jag loop of the T4 4-chain
        (0, [S1, Q3, P3]), // vw through the T3 jag triangle
        (0, [A1, Y2, X2]), // vw through the interior jag loop of the T2 3-chain
    ];
    let piercers = [0usize, 0, 1, 1];

    let joints = trap.chain.joints();
    let mut certs = Vec::with_capacity(4);
    for (ti, &(tc, [a, b, c])) in targets.iter().enumerate() {
        let tri = Triangle::new(joints[a], joints[b], joints[c])?;
        let seg = two.edge(piercers[ti]);
        let hit = seg_triangle_pierce(&seg, &tri).map_err(|e| {
            Error::ThreadingFailure(format!("certificate {ti}: {e}"))
        })?;
        if !hit.pierces {
            return Err(Error::ThreadingFailure(format!(
                "certificate {ti}: threading link misses triangle ({a},{b},{c})"
            )));
        }
        certs.push(PiercingCertificate {
            piercer: (1, piercers[ti]),
            target: (tc, [a, b, c]),
            expected_sign: hit.sign,
        });
    }
    Ok((two, certs))
}

/// Scene construction kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SceneKind {
    Interlocked,
    Control,
    TangleOnly,
}

/// Construction provenance stored with every scene: the build kind, its
/// parameters, and the corner map needed by verification and search.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Interlocked {
        trapezoid: TrapezoidParams,
        corners: [Vec3; 4],
        corner_joints: [Vec<usize>; 4],
        apex: Vec3,
    },
    Control {
        trapezoid: TrapezoidParams,
        corners: [Vec3; 4],
        corner_joints: [Vec<usize>; 4],
        apex: Vec3,
        lift: f64,
    },
    TangleOnly {
        scale: ScaleMode,
    },
    Adhoc {
        label: String,
    },
}

impl Provenance {
    pub fn adhoc(label: &str) -> Provenance {
        Provenance::Adhoc { label: label.to_string() }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Provenance::Interlocked { .. } => "interlocked",
            Provenance::Control { .. } => "control",
            Provenance::TangleOnly { .. } => "tangle_only",
            Provenance::Adhoc { .. } => "adhoc",
        }
    }
}

/// Build a complete scene.
///
/// * `Interlocked`: trapezoid plus threaded 2-chain, four certificates.
/// * `Control`: same trapezoid, 2-chain lifted well clear with no threading
///   and no certificates; its far joint starts folded back toward the
///   trapezoid so separation requires actual search work.
/// * `TangleOnly`: a single 3/4-tangle (chain 0 = 4-chain, chain 1 = 3-chain).
pub fn build_scene_trapezoid(kind: SceneKind, tp: &TrapezoidParams) -> Result<Scene> {
    let trap = build_trapezoid16(tp)?;
    let scene = match kind {
        SceneKind::Interlocked => {
            let (two, certs) = thread_two_chain(tp, &trap)?;
            Scene {
                chains: vec![trap.chain.clone(), two],
                epsilon: tp.epsilon,
                tau: tp.epsilon / 100.0,
                certificates: certs,
                provenance: Provenance::Interlocked {
                    trapezoid: *tp,
                    corners: trap.corners,
                    corner_joints: trap.corner_joints.clone(),
                    apex: trap.apex,
                },
            }
        }
        SceneKind::Control => {
            let lift = 6.0 * tp.side;
            let v = trap.planned_v + Vec3::Z * lift;
            let link = tp.extension();
            let u = v - trap.left_line.1 * link;
            let w_dir = Vec3::new(0.5, -0.866, -1.0).normalized(0.0).unwrap();
            let w = v + w_dir * link;
            let two = Chain::new(vec![u, v, w], ChainRole::TwoChain)?;
            Scene {
                chains: vec![trap.chain.clone(), two],
                epsilon: tp.epsilon,
                tau: tp.epsilon / 100.0,
                certificates: Vec::new(),
                provenance: Provenance::Control {
                    trapezoid: *tp,
                    corners: trap.corners,
                    corner_joints: trap.corner_joints.clone(),
                    apex: trap.apex,
                    lift,
                },
            }
        }
        SceneKind::TangleOnly => {
            return Err(Error::ParameterDomain(
                "tangle_only scenes take TangleParams; use build_scene_tangle".into(),
            ))
        }
    };
    if !scene_valid(&scene) {
        return Err(Error::ConstructionClearance(format!(
            "built scene clearance {} below tau {}",
            min_clearance(&scene),
            scene.tau
        )));
    }
    if !check_certificates(&scene)? {
        return Err(Error::ThreadingFailure(
            "freshly built scene fails its certificates".into(),
        ));
    }
    Ok(scene)
}

/// Build a tangle-only scene: chain 0 is the 4-chain, chain 1 the 3-chain.
pub fn build_scene_tangle(params: &TangleParams) -> Result<Scene> {
    let (chain3, chain4, cert) = build_tangle34(params)?;
    let nominal_eps = params.scale.ball_radius();
    let scene = Scene {
        chains: vec![chain4, chain3],
        epsilon: nominal_eps,
        tau: nominal_eps / 100.0,
        certificates: vec![cert],
        provenance: Provenance::TangleOnly { scale: params.scale },
    };
    if !scene_valid(&scene) {
        return Err(Error::ConstructionClearance(format!(
            "tangle clearance {} below tau {}",
            min_clearance(&scene),
            scene.tau
        )));
    }
    if !check_certificates(&scene)? {
        return Err(Error::ThreadingFailure("tangle certificate fails at build".into()));
    }
    Ok(scene)
}

/// Current base-line frame of a trapezoid scene: (origin on the base line,
/// unit in-plane "up" direction). Computed from the current corner-joint
/// positions so it tracks foldings.
pub fn base_frame(scene: &Scene) -> Result<(Vec3, Vec3)> {
    let (corner_joints, _) = match &scene.provenance {
        Provenance::Interlocked { corner_joints, corners, .. }
        | Provenance::Control { corner_joints, corners, .. } => (corner_joints, corners),
        _ => {
            return Err(Error::MissingRole(
                "scene provenance has no trapezoid corner map".into(),
            ))
        }
    };
    let (_, trap) = scene.chain_by_role(ChainRole::Trapezoid16)?;
    let joints = trap.joints();
    let centroid = |list: &[usize]| -> Vec3 {
        list.iter().fold(Vec3::ZERO, |s, &i| s + joints[i]) / list.len() as f64
    };
    let c1 = centroid(&corner_joints[0]);
    let c2 = centroid(&corner_joints[1]);
    let c3 = centroid(&corner_joints[2]);
    let c4 = centroid(&corner_joints[3]);
    let base_dir = (c2 - c1)
        .normalized(1e-12)
        .ok_or_else(|| Error::DegenerateContact("collapsed base line".into()))?;
    let up_raw = (c3 + c4) * 0.5 - (c1 + c2) * 0.5;
    let up = (up_raw - base_dir * up_raw.dot(base_dir))
        .normalized(1e-12)
        .ok_or_else(|| Error::DegenerateContact("collapsed trapezoid frame".into()))?;
    Ok((c1, up))
}

/// Height of the 2-chain apex v above the current base line.
pub fn apex_height_of(scene: &Scene) -> Result<f64> {
    let (origin, up) = base_frame(scene)?;
    let (_, two) = scene.chain_by_role(ChainRole::TwoChain)?;
    Ok((two.joints()[1] - origin).dot(up))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::min_clearance;

    #[test]
    fn unit_tangle_lengths() {
        let (c3, c4, _) = build_tangle34(&TangleParams::unit()).unwrap();
        let l3: Vec<f64> = c3.reference_lengths().to_vec();
        let l4: Vec<f64> = c4.reference_lengths().to_vec();
        for (got, want) in l3.iter().zip([3.0, 1.0, 3.0]) {
            assert!((got - want).abs() < 1e-12, "3-chain lengths {l3:?}");
        }
        for (got, want) in l4.iter().zip([3.0, 1.0, 1.0, 3.0]) {
            assert!((got - want).abs() < 1e-12, "4-chain lengths {l4:?}");
        }
    }

    #[test]
    fn epsilon_tangle_scaling() {
        let (c3, c4, _) = build_tangle34(&TangleParams::epsilon(0.06)).unwrap();
        assert!((c3.reference_lengths()[1] - 0.01).abs() < 1e-15);
        assert!((c4.reference_lengths()[0] - 0.03).abs() < 1e-15);
        assert!((c4.reference_lengths()[1] - 0.01).abs() < 1e-15);
    }

    #[test]
    fn epsilon_tangle_confined_to_ball() {
        let eps = 0.1;
        let (c3, c4, _) = build_tangle34(&TangleParams::epsilon(eps)).unwrap();
        let x = c3.joints()[1];
        let y = c3.joints()[2];
        let p = (x + y) * 0.5;
        for &j in c3.joints().iter().chain(c4.joints()) {
            assert!(j.dist(p) < eps, "joint {j:?} escapes the {eps}-ball around {p:?}");
        }
    }

    #[test]
    fn jag_short_link_and_gap() {
        let spec = JagSpec {
            corner: Vec3::ZERO,
            incoming: Vec3::X,
            outgoing: Vec3::new(0.5, 0.866, 0.0),
            epsilon: 0.01,
            theta: std::f64::consts::FRAC_PI_3,
            arm: 1.0,
        };
        let [a, b, c, d] = build_jag(&spec).unwrap();
        assert!((b.dist(c) - 0.01).abs() < 1e-12);
        assert!(Triangle::new(a, b, c).is_ok());
        // Gap between the two arm lines is at most epsilon.
        let la = Segment::new(a + (a - b) * 1e3, b + (b - a) * 1e3).unwrap();
        let lc = Segment::new(c + (c - d) * 1e3, d + (d - c) * 1e3).unwrap();
        let gap = crate::geom::seg_seg_distance(&la, &lc);
        assert!(gap <= 0.01 + 1e-9, "gap {gap}");
    }

    #[test]
    fn jag_rejects_parallel_directions() {
        let spec = JagSpec {
            corner: Vec3::ZERO,
            incoming: Vec3::X,
            outgoing: Vec3::X,
            epsilon: 0.01,
            theta: 0.0,
            arm: 1.0,
        };
        assert!(matches!(build_jag(&spec), Err(Error::DegenerateJag(_))));
    }

    #[test]
    fn trapezoid_link_count_and_corners() {
        let tp = TrapezoidParams::default();
        let build = build_trapezoid16(&tp).unwrap();
        assert_eq!(build.chain.joints().len(), 17);
        assert_eq!(build.chain.edge_count(), 16);
        for (ci, list) in build.corner_joints.iter().enumerate() {
            for &ji in list {
                assert!(
                    build.chain.joints()[ji].dist(build.corners[ci]) <= tp.epsilon,
                    "joint {ji} outside ball {ci}"
                );
            }
        }
    }

    #[test]
    fn trapezoid_rejects_degenerate_top() {
        let tp = TrapezoidParams { side: 2.0, ..TrapezoidParams::default() };
        assert!(matches!(build_trapezoid16(&tp), Err(Error::ParameterDomain(_))));
    }

    #[test]
    fn interlocked_scene_certificates_and_clearance() {
        let tp = TrapezoidParams::default();
        let scene = build_scene_trapezoid(SceneKind::Interlocked, &tp).unwrap();
        assert_eq!(scene.certificates.len(), 4);
        assert!(check_certificates(&scene).unwrap());
        assert!(min_clearance(&scene) >= scene.tau);
        let h = tp.apex_height();
        let vh = apex_height_of(&scene).unwrap();
        assert!((vh - h).abs() <= tp.epsilon + 1e-9, "apex height {vh} vs {h}");
        let (_, two) = scene.chain_by_role(ChainRole::TwoChain).unwrap();
        for l in two.reference_lengths() {
            assert!(*l >= 10.0 * tp.side - 1e-9);
        }
    }

    #[test]
    fn control_scene_has_no_certificates() {
        let tp = TrapezoidParams::default();
        let scene = build_scene_trapezoid(SceneKind::Control, &tp).unwrap();
        assert!(scene.certificates.is_empty());
        assert!(check_certificates(&scene).unwrap());
    }

    #[test]
    fn tangle_scene_joint_counts() {
        let scene = build_scene_tangle(&TangleParams::unit()).unwrap();
        assert_eq!(scene.chains[0].joints().len(), 5);
        assert_eq!(scene.chains[1].joints().len(), 4);
        assert_eq!(scene.certificates.len(), 1);
    }

    #[test]
    fn scale_equivariance() {
        let tp = TrapezoidParams::default();
        let s = 3.7;
        let scaled = TrapezoidParams {
            half_base: tp.half_base * s,
            side: tp.side * s,
            epsilon: tp.epsilon * s,
            ..tp
        };
        let a = build_trapezoid16(&tp).unwrap();
        let b = build_trapezoid16(&scaled).unwrap();
        for (ja, jb) in a.chain.joints().iter().zip(b.chain.joints()) {
            assert!((*ja * s).dist(*jb) < 1e-9 * s, "scale equivariance broken");
        }
    }
}
