//! Brute-force validators: fixed-step RK4 integration of the Hamiltonian
//! and control systems, finite-difference Jacobians of the endpoint map,
//! and the Lorentzian length functional.
//!
//! Nothing here uses the closed-form exponential maps; the point is to
//! have an independent path to the same numbers.

use crate::error::{Error, Result};
use crate::group::{Control, Covector, Epsilon, FamilyTag, GroupElement};
use crate::math;
use alloc::vec::Vec;

/// One constant-control leg of a concatenated trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub control: Control,
    pub duration: f64,
}

/// A concatenation of constant-control segments.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseControl {
    pub segments: Vec<Segment>,
}

impl PiecewiseControl {
    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }
}

/// A sampled trajectory. `covectors` is populated by the extremal
/// integrator; `controls` by the control integrator, with `controls[i]`
/// the control in force on the step starting at `times[i]` (the last
/// entry repeats the final control so the lists stay aligned).
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub points: Vec<GroupElement>,
    pub covectors: Option<Vec<Covector>>,
    pub controls: Option<Vec<Control>>,
}

impl Trajectory {
    pub fn endpoint(&self) -> GroupElement {
        *self.points.last().expect("trajectory has at least the start point")
    }
}

/// Which reading of the family-one vertical velocity to integrate. The two
/// published forms disagree (ε²h₃ versus εh₃²); `Resolved` is the reading
/// consistent with the closed-form trajectories and the coframe identity,
/// `PrintedAlternative` is kept so both can be measured side by side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZResolution {
    Resolved,
    PrintedAlternative,
}

/// Right-hand side of the normal Hamiltonian system. State layout:
/// [x, y, z, h₁, h₂, h₃].
fn extremal_rhs(family: FamilyTag, eps: Epsilon, s: &[f64; 6], zres: ZResolution) -> [f64; 6] {
    let e = eps.get();
    let (x, y, h1, h2, h3) = (s[0], s[1], s[3], s[4], s[5]);
    match family {
        FamilyTag::FamilyOne => {
            let zdot = match zres {
                ZResolution::Resolved => h1 * y / 2.0 + h2 * x / 2.0 + e * e * h3,
                ZResolution::PrintedAlternative => h1 * y / 2.0 + h2 * x / 2.0 + e * h3 * h3,
            };
            [-h1, h2, zdot, -h2 * h3, -h1 * h3, 0.0]
        }
        FamilyTag::FamilyTwo => {
            [h1, h2, -h1 * y / 2.0 + h2 * x / 2.0 - e * e * h3, -h2 * h3, h1 * h3, 0.0]
        }
    }
}

fn rk4_step(
    family: FamilyTag,
    eps: Epsilon,
    s: &[f64; 6],
    dt: f64,
    zres: ZResolution,
) -> [f64; 6] {
    let add = |a: &[f64; 6], k: &[f64; 6], w: f64| {
        let mut r = [0.0; 6];
        for i in 0..6 {
            r[i] = a[i] + w * k[i];
        }
        r
    };
    let k1 = extremal_rhs(family, eps, s, zres);
    let k2 = extremal_rhs(family, eps, &add(s, &k1, dt / 2.0), zres);
    let k3 = extremal_rhs(family, eps, &add(s, &k2, dt / 2.0), zres);
    let k4 = extremal_rhs(family, eps, &add(s, &k3, dt), zres);
    let mut out = *s;
    for i in 0..6 {
        out[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Integrates the normal Hamiltonian system of `family` from the identity
/// with initial covector `h0` over [0, t_end] in `steps` RK4 steps.
pub fn integrate_extremal(
    family: FamilyTag,
    eps: Epsilon,
    h0: Covector,
    t_end: f64,
    steps: usize,
) -> Trajectory {
    integrate_extremal_with(family, eps, h0, t_end, steps, ZResolution::Resolved)
}

/// As [`integrate_extremal`] but with an explicit vertical-velocity reading
/// for family one (ignored for family two).
pub fn integrate_extremal_with(
    family: FamilyTag,
    eps: Epsilon,
    h0: Covector,
    t_end: f64,
    steps: usize,
    zres: ZResolution,
) -> Trajectory {
    assert!(steps >= 1);
    let dt = t_end / steps as f64;
    let mut state = [0.0, 0.0, 0.0, h0.h1, h0.h2, h0.h3];
    let mut times = Vec::with_capacity(steps + 1);
    let mut points = Vec::with_capacity(steps + 1);
    let mut covectors = Vec::with_capacity(steps + 1);
    let push = |times: &mut Vec<f64>,
                points: &mut Vec<GroupElement>,
                covectors: &mut Vec<Covector>,
                t: f64,
                s: &[f64; 6]| {
        times.push(t);
        points.push(GroupElement::new(s[0], s[1], s[2]));
        covectors.push(Covector::new(s[3], s[4], s[5]));
    };
    push(&mut times, &mut points, &mut covectors, 0.0, &state);
    for i in 0..steps {
        state = rk4_step(family, eps, &state, dt, zres);
        push(&mut times, &mut points, &mut covectors, (i + 1) as f64 * dt, &state);
    }
    Trajectory { times, points, covectors: Some(covectors), controls: None }
}

/// Endpoint of the extremal of `family` at time `t`, by RK4 with a step
/// density suited to the finite-difference oracle.
fn extremal_endpoint(family: FamilyTag, eps: Epsilon, h0: Covector, t: f64) -> GroupElement {
    let steps = (libm::ceil(1500.0 * math::abs(t))).max(500.0) as usize;
    integrate_extremal(family, eps, h0, t, steps).endpoint()
}

/// Integrates the control system q̇ = u₁X₁ + u₂X₂ + εu₃X₃ from `start`
/// along a piecewise-constant plan. The right-hand side is polynomial of
/// degree ≤ 1 in the state, so RK4 reproduces each leg exactly up to
/// rounding.
pub fn integrate_control(
    eps: Epsilon,
    start: GroupElement,
    plan: &PiecewiseControl,
    steps_per_segment: usize,
) -> Trajectory {
    assert!(steps_per_segment >= 1);
    let e = eps.get();
    let mut times = Vec::new();
    let mut points = Vec::new();
    let mut controls = Vec::new();
    let mut t = 0.0;
    let mut q = [start.x, start.y, start.z];
    times.push(t);
    points.push(start);
    for seg in &plan.segments {
        let u = seg.control;
        let dt = seg.duration / steps_per_segment as f64;
        let rhs = |s: &[f64; 3]| -> [f64; 3] {
            [u.u1, u.u2, -(s[1] / 2.0) * u.u1 + (s[0] / 2.0) * u.u2 + e * u.u3]
        };
        for _ in 0..steps_per_segment {
            let add = |a: &[f64; 3], k: &[f64; 3], w: f64| {
                [a[0] + w * k[0], a[1] + w * k[1], a[2] + w * k[2]]
            };
            let k1 = rhs(&q);
            let k2 = rhs(&add(&q, &k1, dt / 2.0));
            let k3 = rhs(&add(&q, &k2, dt / 2.0));
            let k4 = rhs(&add(&q, &k3, dt));
            for i in 0..3 {
                q[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
            controls.push(u);
            t += dt;
            times.push(t);
            points.push(GroupElement::new(q[0], q[1], q[2]));
        }
    }
    // repeat the final control so the list aligns with `times`
    if let Some(&last) = controls.last() {
        controls.push(last);
    }
    Trajectory { times, points, covectors: None, controls: Some(controls) }
}

/// Euclidean-orthonormal basis (e₁, e₂) of the tangent plane to the
/// Hamiltonian level {2H = const} at `h0` in covector space. Exposed so
/// callers can convert the finite-difference Jacobian to chart coordinates.
pub fn level_tangent_basis(family: FamilyTag, eps: Epsilon, h0: Covector) -> [[f64; 3]; 2] {
    let e = eps.get();
    // level gradient, up to the factor 2
    let g = match family {
        FamilyTag::FamilyOne => [-h0.h1, h0.h2, e * e * h0.h3],
        FamilyTag::FamilyTwo => [h0.h1, h0.h2, -e * e * h0.h3],
    };
    let norm = |v: [f64; 3]| math::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    let cross = |a: [f64; 3], b: [f64; 3]| {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    };
    // pick the coordinate axis least aligned with g to seed the first cross
    let ga = [math::abs(g[0]), math::abs(g[1]), math::abs(g[2])];
    let seed = if ga[0] <= ga[1] && ga[0] <= ga[2] {
        [1.0, 0.0, 0.0]
    } else if ga[1] <= ga[2] {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let mut e1 = cross(g, seed);
    let n1 = norm(e1);
    for v in e1.iter_mut() {
        *v /= n1;
    }
    let mut e2 = cross(g, e1);
    let n2 = norm(e2);
    for v in e2.iter_mut() {
        *v /= n2;
    }
    [e1, e2]
}

/// Finite-difference Jacobian determinant of the extremal endpoint map
/// with respect to (t, e₁, e₂), where (e₁, e₂) is the orthonormal level
/// basis of [`level_tangent_basis`] at `h0`.
///
/// Central differences at steps `h_step` and `h_step`/2 must agree to
/// 1e−3 in relative terms (with an absolute floor tied to the column
/// scale), otherwise `IllConditioned`; on success the Richardson
/// extrapolation of the two values is returned.
pub fn fd_jacobian(
    family: FamilyTag,
    eps: Epsilon,
    h0: Covector,
    t: f64,
    h_step: f64,
) -> Result<f64> {
    assert!(h_step > 0.0 && t > 0.0);
    let [e1, e2] = level_tangent_basis(family, eps, h0);
    let det_at = |h: f64| -> (f64, f64) {
        let shift = |d: [f64; 3], w: f64| {
            Covector::new(h0.h1 + w * d[0], h0.h2 + w * d[1], h0.h3 + w * d[2])
        };
        let diff = |p: GroupElement, m: GroupElement, den: f64| {
            [(p.x - m.x) / den, (p.y - m.y) / den, (p.z - m.z) / den]
        };
        let ct = diff(
            extremal_endpoint(family, eps, h0, t + h),
            extremal_endpoint(family, eps, h0, t - h),
            2.0 * h,
        );
        let c1 = diff(
            extremal_endpoint(family, eps, shift(e1, h), t),
            extremal_endpoint(family, eps, shift(e1, -h), t),
            2.0 * h,
        );
        let c2 = diff(
            extremal_endpoint(family, eps, shift(e2, h), t),
            extremal_endpoint(family, eps, shift(e2, -h), t),
            2.0 * h,
        );
        let det = ct[0] * (c1[1] * c2[2] - c1[2] * c2[1])
            - c1[0] * (ct[1] * c2[2] - ct[2] * c2[1])
            + c2[0] * (ct[1] * c1[2] - ct[2] * c1[1]);
        let norm = |c: [f64; 3]| math::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
        (det, norm(ct) * norm(c1) * norm(c2))
    };
    let (j_h, _) = det_at(h_step);
    let (j_h2, hadamard) = det_at(h_step / 2.0);
    let denom = math::abs(j_h).max(math::abs(j_h2)).max(1e-6 * hadamard).max(1e-300);
    if math::abs(j_h - j_h2) > 1e-3 * denom {
        return Err(Error::IllConditioned);
    }
    Ok((4.0 * j_h2 - j_h) / 3.0)
}

/// Squared Lorentzian speed −g(u) of a control under the form of `family`,
/// together with the control magnitude scale used for the cone tolerance.
fn timelike_speed2(family: FamilyTag, u: Control) -> (f64, f64) {
    let scale = u.u1 * u.u1 + u.u2 * u.u2 + u.u3 * u.u3;
    let speed2 = match family {
        FamilyTag::FamilyOne => u.u1 * u.u1 - u.u2 * u.u2 - u.u3 * u.u3,
        FamilyTag::FamilyTwo => u.u3 * u.u3 - u.u1 * u.u1 - u.u2 * u.u2,
    };
    (speed2, scale)
}

/// Lorentzian length ∫√(−g(u(t))) dt of a trajectory carrying controls,
/// by the left-endpoint step rule (exact for piecewise-constant controls).
/// Errors with `NotCausal` if any control leaves the cone by more than
/// rounding tolerance.
pub fn length_functional(family: FamilyTag, traj: &Trajectory) -> Result<f64> {
    let controls = traj.controls.as_ref().expect("trajectory carries controls");
    assert_eq!(controls.len(), traj.times.len());
    let mut total = 0.0;
    for i in 0..traj.times.len().saturating_sub(1) {
        let (speed2, scale) = timelike_speed2(family, controls[i]);
        if speed2 < -1e-12 * scale.max(1.0) {
            return Err(Error::NotCausal { defect: -speed2 });
        }
        total += (traj.times[i + 1] - traj.times[i]) * math::sqrt(speed2.max(0.0));
    }
    Ok(total)
}

/// Lorentzian length of a piecewise-constant plan without integrating it:
/// Σ duration·√(−g(u)) per segment.
pub fn plan_length(family: FamilyTag, plan: &PiecewiseControl) -> Result<f64> {
    let mut total = 0.0;
    for seg in &plan.segments {
        let (speed2, scale) = timelike_speed2(family, seg.control);
        if speed2 < -1e-12 * scale.max(1.0) {
            return Err(Error::NotCausal { defect: -speed2 });
        }
        total += seg.duration * math::sqrt(speed2.max(0.0));
    }
    Ok(total)
}
