//! The Heisenberg group, its left-invariant frame, control cones and
//! Lorentzian forms shared by both families of problems.

use crate::math;
use core::ops::Mul;

/// A point (x, y, z) of the Heisenberg group M = ℝ³ with the twisted
/// product rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement { x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        GroupElement { x, y, z }
    }

    /// Group inverse: (−x, −y, −z). The z-correction term of the product
    /// is antisymmetric, so no extra term appears.
    pub fn inverse(&self) -> GroupElement {
        GroupElement { x: -self.x, y: -self.y, z: -self.z }
    }

    pub fn norm_inf(&self) -> f64 {
        math::abs(self.x).max(math::abs(self.y)).max(math::abs(self.z))
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;

    /// Heisenberg product: z picks up the symplectic correction
    /// (x₁y₂ − x₂y₁)/2.
    fn mul(self, rhs: GroupElement) -> GroupElement {
        GroupElement {
            x: self.x + rhs.x,
            y: self.y + rhs.y,
            z: self.z + rhs.z + (self.x * rhs.y - rhs.x * self.y) / 2.0,
        }
    }
}

/// A tangent vector at `base`, stored in coordinate components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentVector {
    pub dx: f64,
    pub dy: f64,
    pub dz: f64,
    pub base: GroupElement,
}

/// An admissible control (u₁, u₂, u₃). Cone membership is checked by
/// [`cone_contains`], not stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Control {
    pub u1: f64,
    pub u2: f64,
    pub u3: f64,
}

impl Control {
    pub fn new(u1: f64, u2: f64, u3: f64) -> Self {
        Control { u1, u2, u3 }
    }
}

/// Adjoint state (h₁, h₂, h₃) on a fiber of the cotangent bundle,
/// expressed in the left-invariant frame: hᵢ = ⟨λ, Xᵢ⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Covector {
    pub h1: f64,
    pub h2: f64,
    pub h3: f64,
}

impl Covector {
    pub fn new(h1: f64, h2: f64, h3: f64) -> Self {
        Covector { h1, h2, h3 }
    }
}

/// The anisotropy parameter ε > 0 of the Lorentzian form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Epsilon(f64);

impl Epsilon {
    /// Returns `None` unless `value` is finite and strictly positive.
    pub fn new(value: f64) -> Option<Epsilon> {
        (value.is_finite() && value > 0.0).then_some(Epsilon(value))
    }

    pub fn get(&self) -> f64 {
        self.0
    }
}

/// Selects between the two cone/metric choices. The dynamics are identical
/// for both families; only the cone and the quadratic form differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyTag {
    FamilyOne,
    FamilyTwo,
}

/// Position of the commutant ℝX₃ relative to the light cone, which decides
/// between existence of maximizers and periodic trajectories.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    MaximizersExist,
    PeriodicNoMaximizers,
}

/// Right-hand side of the control system
/// q̇ = u₁X₁ + u₂X₂ + ε u₃X₃ at the point `q`.
pub fn dynamics(q: GroupElement, u: Control, eps: Epsilon) -> TangentVector {
    let e = eps.get();
    TangentVector {
        dx: u.u1,
        dy: u.u2,
        dz: -(q.y / 2.0) * u.u1 + (q.x / 2.0) * u.u2 + e * u.u3,
        base: q,
    }
}

/// Membership in the control cone. Boundary (equality) counts as inside.
///
/// Family one: u₁ ≥ √(u₂² + u₃²). Family two: u₃ ≥ √(u₁² + u₂²).
pub fn cone_contains(u: Control, family: FamilyTag) -> bool {
    match family {
        FamilyTag::FamilyOne => u.u1 >= math::hypot(u.u2, u.u3),
        FamilyTag::FamilyTwo => u.u3 >= math::hypot(u.u1, u.u2),
    }
}

/// Evaluates the left-invariant Lorentzian form on a tangent vector.
///
/// The coframe values are ω₁ = dx, ω₂ = dy, ω₃ = (y/2)dx − (x/2)dy + dz
/// at the base point of `v`. Family one: −ω₁² + ω₂² + ω₃²/ε²; family two:
/// ω₁² + ω₂² − ω₃²/ε².
pub fn lorentz_form(v: TangentVector, eps: Epsilon, family: FamilyTag) -> f64 {
    let e = eps.get();
    let w1 = v.dx;
    let w2 = v.dy;
    let w3 = (v.base.y / 2.0) * v.dx - (v.base.x / 2.0) * v.dy + v.dz;
    match family {
        FamilyTag::FamilyOne => -w1 * w1 + w2 * w2 + (w3 * w3) / (e * e),
        FamilyTag::FamilyTwo => w1 * w1 + w2 * w2 - (w3 * w3) / (e * e),
    }
}

/// Decides the regime by testing the cone position of ±X₃ at the identity.
///
/// Family one: C ∩ ℝX₃ = {0}, so maximizers exist. Family two: ℝX₃ ∖ {0}
/// lies in the interior of C ∪ C⁻, so periodic trajectories exist and no
/// maximizers do. The answer is ε-independent because the forms are
/// diagonal in the frame.
pub fn classify_commutant(eps: Epsilon, family: FamilyTag) -> Regime {
    let x3 = TangentVector { dx: 0.0, dy: 0.0, dz: 1.0, base: GroupElement::IDENTITY };
    let g = lorentz_form(x3, eps, family);
    // ±X₃ both evaluate to the same g; interior of C ∪ C⁻ means g < 0.
    if g < 0.0 {
        Regime::PeriodicNoMaximizers
    } else {
        Regime::MaximizersExist
    }
}

/// Push-forward of a tangent vector under left multiplication by `a`.
pub fn left_translate(a: GroupElement, v: TangentVector) -> TangentVector {
    TangentVector {
        dx: v.dx,
        dy: v.dy,
        dz: v.dz + (a.x * v.dy - a.y * v.dx) / 2.0,
        base: a * v.base,
    }
}
