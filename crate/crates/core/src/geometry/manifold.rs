//! Warped products `dt² + w(t)² g_F` over a homogeneous fiber, with a
//! radial density.

use serde::{Deserialize, Serialize};

use super::profile::RadialProfile;
use super::GeometryError;
use crate::numeric::Jet;

/// The fiber `(F, g_F)` of dimension `n - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Fiber {
    /// Round sphere of constant sectional curvature `curvature`.
    Sphere { curvature: f64 },
    /// Flat torus of the given volume.
    Torus { volume: f64 },
    /// Any homogeneous fiber, described by its volume and optionally its
    /// Einstein constant (`Ric_F = ricci · g_F`).
    Homogeneous { volume: f64, ricci: Option<f64> },
}

fn unit_sphere_volume(dim: usize) -> f64 {
    // vol(S^k) = 2π^{(k+1)/2} / Γ((k+1)/2), via the recursion vol(S^k) = 2π/(k-1) vol(S^{k-2}).
    let mut v = if dim % 2 == 0 { 2.0 } else { 2.0 * std::f64::consts::PI };
    let mut k = if dim % 2 == 0 { 0 } else { 1 };
    while k < dim {
        k += 2;
        v *= 2.0 * std::f64::consts::PI / (k as f64 - 1.0);
    }
    v
}

impl Fiber {
    /// Volume of `(F, g_F)` with `dim F = n - 1`.
    pub fn volume(&self, n: usize) -> f64 {
        match *self {
            Fiber::Sphere { curvature } => unit_sphere_volume(n - 1) / curvature.powf((n as f64 - 1.0) / 2.0),
            Fiber::Torus { volume } | Fiber::Homogeneous { volume, .. } => volume,
        }
    }

    /// Einstein constant of `g_F`, when known.
    pub fn ricci(&self, n: usize) -> Option<f64> {
        match *self {
            Fiber::Sphere { curvature } => Some((n as f64 - 2.0) * curvature),
            Fiber::Torus { .. } => Some(0.0),
            Fiber::Homogeneous { ricci, .. } => ricci,
        }
    }

    fn validate(&self) -> Result<(), GeometryError> {
        let ok = match *self {
            Fiber::Sphere { curvature } => curvature > 0.0 && curvature.is_finite(),
            Fiber::Torus { volume } | Fiber::Homogeneous { volume, .. } => volume > 0.0 && volume.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(GeometryError::Construction(format!("invalid fiber {self:?}")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    /// Boundary at `t = 0` only; every normal geodesic minimizes up to `T`.
    Collar,
    /// Boundary at `t = 0` and at `t = T`; cut value `T/2`.
    TwoEnded,
    /// Boundary at `t = 0`, smooth apex at `t = T` where `w(T) = 0`.
    BallApex,
    /// No boundary; `w(0) = 0`, `w'(0) = 1`, distance is measured from the pole.
    PointSymmetric,
}

/// A boundary component of a warped product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    /// The level `t = 0`.
    Inner,
    /// The level `t = T` of a two-ended instance.
    Outer,
}

#[derive(Debug, Clone)]
pub struct WarpedManifold {
    pub n: usize,
    pub fiber: Fiber,
    pub profile: RadialProfile,
    pub topology: Topology,
}

impl WarpedManifold {
    pub fn new(n: usize, fiber: Fiber, profile: RadialProfile, topology: Topology) -> Result<Self, GeometryError> {
        if n < 2 {
            return Err(GeometryError::Construction(format!("dimension must be at least 2, got {n}")));
        }
        fiber.validate()?;
        let t_max = profile.t_max;
        let w0 = profile.w.jet(0.0);
        let w_end = profile.w.value(t_max);
        let scale = w0.v.abs().max(1.0);
        match topology {
            Topology::Collar | Topology::TwoEnded => {
                if !(w0.v > 0.0) {
                    return Err(GeometryError::Construction(format!("w(0) = {} must be positive", w0.v)));
                }
            }
            Topology::BallApex => {
                if !(w0.v > 0.0) || w_end.abs() > 1e-8 * scale {
                    return Err(GeometryError::Construction(format!(
                        "a ball apex needs w(0) > 0 and w(T) = 0, got w(0) = {}, w(T) = {w_end}",
                        w0.v
                    )));
                }
            }
            Topology::PointSymmetric => {
                if w0.v.abs() > 1e-12 || (w0.d1 - 1.0).abs() > 1e-8 {
                    return Err(GeometryError::Construction(format!(
                        "a point-symmetric instance needs w(0) = 0 and w'(0) = 1, got {} and {}",
                        w0.v, w0.d1
                    )));
                }
            }
        }
        // Positivity of w in the interior, sampled.
        let samples = 256;
        for i in 1..samples {
            let t = t_max * i as f64 / samples as f64;
            let w = profile.w.value(t);
            if !(w > 0.0) {
                return Err(GeometryError::Construction(format!("w({t}) = {w} must be positive inside ]0,T[")));
            }
        }
        if matches!(topology, Topology::TwoEnded) && !(w_end > 0.0) {
            return Err(GeometryError::Construction(format!("w(T) = {w_end} must be positive on a two-ended instance")));
        }
        Ok(Self { n, fiber, profile, topology })
    }

    pub fn t_max(&self) -> f64 {
        self.profile.t_max
    }

    pub fn components(&self) -> Vec<Component> {
        match self.topology {
            Topology::Collar | Topology::BallApex => vec![Component::Inner],
            Topology::TwoEnded => vec![Component::Inner, Component::Outer],
            Topology::PointSymmetric => Vec::new(),
        }
    }

    /// Cut value `τ` of every normal geodesic.
    pub fn tau(&self) -> f64 {
        match self.topology {
            Topology::TwoEnded => 0.5 * self.t_max(),
            _ => self.t_max(),
        }
    }

    /// The profile seen from a boundary component, with `t` the distance
    /// from that component.
    pub fn view(&self, component: Component) -> Result<View<'_>, GeometryError> {
        match (self.topology, component) {
            (Topology::PointSymmetric, _) => Err(GeometryError::NoBoundary),
            (Topology::TwoEnded, Component::Outer) => Ok(View { m: self, reversed: true, tau: self.tau() }),
            (_, Component::Outer) => Err(GeometryError::NoSuchComponent(component)),
            (_, Component::Inner) => Ok(View { m: self, reversed: false, tau: self.tau() }),
        }
    }

    /// The profile seen from the pole of a point-symmetric instance.
    pub fn pole_view(&self) -> Result<View<'_>, GeometryError> {
        match self.topology {
            Topology::PointSymmetric => Ok(View { m: self, reversed: false, tau: self.t_max() }),
            _ => Err(GeometryError::WrongTopology { expected: "point_symmetric", found: self.topology }),
        }
    }

    /// Volume of a boundary component in the induced metric, `w(z)^{n-1} vol(F)`.
    pub fn component_area(&self, component: Component) -> Result<f64, GeometryError> {
        let v = self.view(component)?;
        Ok(v.w0().powi(self.n as i32 - 1) * self.fiber.volume(self.n))
    }
}

/// A radial coordinate system starting at one boundary component (or the pole).
#[derive(Debug, Clone, Copy)]
pub struct View<'a> {
    pub m: &'a WarpedManifold,
    pub reversed: bool,
    /// Cut value along this family of normal geodesics.
    pub tau: f64,
}

impl View<'_> {
    pub fn jets(&self, t: f64) -> (Jet, Jet) {
        self.m.profile.jets(t, self.reversed)
    }

    pub fn w0(&self) -> f64 {
        self.jets(0.0).0.v
    }

    pub fn phi0(&self) -> f64 {
        self.jets(0.0).1.v
    }

    pub fn n(&self) -> usize {
        self.m.n
    }
}
