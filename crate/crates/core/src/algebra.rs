//! Pencil bracket, Casimirs, the Hamiltonian H, the integral K and orbit
//! parametrization.

use nalgebra::{Matrix6, Vector3, Vector6};

use crate::error::{Error, Result};
use crate::model::ModelParams;

/// A point (J, x) of the six-dimensional phase space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub j: Vector3<f64>,
    pub x: Vector3<f64>,
}

impl PhasePoint {
    pub fn new(j: [f64; 3], x: [f64; 3]) -> Self {
        PhasePoint {
            j: Vector3::from(j),
            x: Vector3::from(x),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.j.iter().chain(self.x.iter()).all(|c| c.is_finite())
    }

    /// Coordinates in the order (J1, J2, J3, x1, x2, x3).
    pub fn as_vector(&self) -> Vector6<f64> {
        Vector6::new(self.j[0], self.j[1], self.j[2], self.x[0], self.x[1], self.x[2])
    }

    pub fn from_vector(z: &Vector6<f64>) -> Self {
        PhasePoint {
            j: Vector3::new(z[0], z[1], z[2]),
            x: Vector3::new(z[3], z[4], z[5]),
        }
    }

    /// The symmetry (J, x) -> (-J, x).
    pub fn reflected(&self) -> Self {
        PhasePoint { j: -self.j, x: self.x }
    }
}

/// Index of a coordinate function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coord {
    J1,
    J2,
    J3,
    X1,
    X2,
    X3,
}

impl Coord {
    pub const ALL: [Coord; 6] = [Coord::J1, Coord::J2, Coord::J3, Coord::X1, Coord::X2, Coord::X3];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Coord> {
        Coord::ALL.get(i).copied()
    }
}

/// Functions whose skew gradients are exposed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionTag {
    H,
    K,
    F1,
    F2,
}

fn levi(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// {z_i, z_j}(p) for the pencil with parameter kappa.
pub fn pencil_bracket(i: Coord, j: Coord, p: &PhasePoint, m: &ModelParams) -> f64 {
    let (a, b) = (i.index(), j.index());
    let mut acc = 0.0;
    for k in 0..3 {
        acc += match (a < 3, b < 3) {
            (true, true) => levi(a, b, k) * p.j[k],
            (true, false) => levi(a, b - 3, k) * p.x[k],
            (false, true) => levi(a - 3, b, k) * p.x[k],
            (false, false) => m.kappa * levi(a - 3, b - 3, k) * p.j[k],
        };
    }
    acc
}

/// The Poisson tensor at p: entry (i, j) is {z_i, z_j}.
pub fn poisson_tensor(p: &PhasePoint, m: &ModelParams) -> Matrix6<f64> {
    Matrix6::from_fn(|i, j| {
        pencil_bracket(Coord::ALL[i], Coord::ALL[j], p, m)
    })
}

/// {f, g}(p) given the gradients of f and g at p.
pub fn bracket_of_gradients(df: &Vector6<f64>, dg: &Vector6<f64>, p: &PhasePoint, m: &ModelParams) -> f64 {
    df.dot(&(poisson_tensor(p, m) * dg))
}

/// (f1, f2) = (|x|^2 + kappa |J|^2, x . J).
pub fn casimirs(p: &PhasePoint, m: &ModelParams) -> (f64, f64) {
    (p.x.norm_squared() + m.kappa * p.j.norm_squared(), p.x.dot(&p.j))
}

pub fn hamiltonian(p: &PhasePoint, m: &ModelParams) -> f64 {
    let j = &p.j;
    j[0] * j[0] + j[1] * j[1] + 2.0 * j[2] * j[2] + 2.0 * m.c1 * p.x[0]
}

fn k_parts(p: &PhasePoint, m: &ModelParams) -> (f64, f64) {
    let (j, x, c) = (&p.j, &p.x, m.c1);
    (
        j[0] * j[0] - j[1] * j[1] - 2.0 * c * x[0] + m.kappa * c * c,
        2.0 * j[0] * j[1] - 2.0 * c * x[1],
    )
}

pub fn integral_k(p: &PhasePoint, m: &ModelParams) -> f64 {
    let (a, b) = k_parts(p, m);
    a * a + b * b
}

/// Closed-form gradient in the order (J1, J2, J3, x1, x2, x3).
pub fn gradient(f: FunctionTag, p: &PhasePoint, m: &ModelParams) -> Vector6<f64> {
    let (j, x, c) = (&p.j, &p.x, m.c1);
    match f {
        FunctionTag::H => Vector6::new(2.0 * j[0], 2.0 * j[1], 4.0 * j[2], 2.0 * c, 0.0, 0.0),
        FunctionTag::K => {
            let (a, b) = k_parts(p, m);
            Vector6::new(
                4.0 * a * j[0] + 4.0 * b * j[1],
                -4.0 * a * j[1] + 4.0 * b * j[0],
                0.0,
                -4.0 * c * a,
                -4.0 * c * b,
                0.0,
            )
        }
        FunctionTag::F1 => Vector6::new(
            2.0 * m.kappa * j[0],
            2.0 * m.kappa * j[1],
            2.0 * m.kappa * j[2],
            2.0 * x[0],
            2.0 * x[1],
            2.0 * x[2],
        ),
        FunctionTag::F2 => Vector6::new(x[0], x[1], x[2], j[0], j[1], j[2]),
    }
}

pub fn evaluate(f: FunctionTag, p: &PhasePoint, m: &ModelParams) -> f64 {
    match f {
        FunctionTag::H => hamiltonian(p, m),
        FunctionTag::K => integral_k(p, m),
        FunctionTag::F1 => casimirs(p, m).0,
        FunctionTag::F2 => casimirs(p, m).1,
    }
}

/// Skew gradient: component i is {z_i, f}(p). The opposite flow direction is
/// just the negation; no orientation is preferred.
pub fn sgrad(f: FunctionTag, p: &PhasePoint, m: &ModelParams) -> Vector6<f64> {
    poisson_tensor(p, m) * gradient(f, p, m)
}

/// Radii of the two spheres p+ = x + sqrt(kappa) J, p- = x - sqrt(kappa) J.
pub fn sphere_radii(a: f64, b: f64, m: &ModelParams) -> Result<(f64, f64)> {
    if !(m.kappa > 0.0) {
        return Err(Error::InvalidParams(
            "orbits are noncompact unless kappa > 0".into(),
        ));
    }
    let sk = m.kappa.sqrt();
    let plus = a + 2.0 * sk * b;
    let minus = a - 2.0 * sk * b;
    let tol = 1e-14 * a.abs().max(1.0);
    if !a.is_finite() || !b.is_finite() || plus < -tol || minus < -tol {
        return Err(Error::InvalidOrbit { a, b });
    }
    Ok((plus.max(0.0).sqrt(), minus.max(0.0).sqrt()))
}

/// Orbit point from unit directions n1 (for p+) and n2 (for p-).
pub fn orbit_point_from_directions(
    a: f64,
    b: f64,
    n1: &Vector3<f64>,
    n2: &Vector3<f64>,
    m: &ModelParams,
) -> Result<PhasePoint> {
    let (rp, rm) = sphere_radii(a, b, m)?;
    let pp = n1 * rp;
    let pm = n2 * rm;
    Ok(PhasePoint {
        j: (pp - pm) / (2.0 * m.kappa.sqrt()),
        x: (pp + pm) / 2.0,
    })
}

/// Unit vector from polar angle theta and azimuth phi.
pub fn unit_from_angles(theta: f64, phi: f64) -> Vector3<f64> {
    Vector3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos())
}

/// Point of M_{a,b} from angles (theta1, phi1, theta2, phi2) on S^2 x S^2.
pub fn orbit_point(a: f64, b: f64, angles: [f64; 4], m: &ModelParams) -> Result<PhasePoint> {
    let n1 = unit_from_angles(angles[0], angles[1]);
    let n2 = unit_from_angles(angles[2], angles[3]);
    orbit_point_from_directions(a, b, &n1, &n2, m)
}

/// A distinguished point of a singular orbit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialPoint {
    pub point: PhasePoint,
    pub h: f64,
    pub k: f64,
}

/// Extremal points of H on the singular orbit a = 2 sqrt(kappa) b.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularOrbitProfile {
    pub a: f64,
    pub b: f64,
    pub b0: f64,
    pub p1_minus: SpecialPoint,
    pub p1_plus: SpecialPoint,
    /// Present only when b > b0.
    pub p2: Option<[SpecialPoint; 2]>,
}

impl SingularOrbitProfile {
    /// Points where H attains its minimum on the orbit.
    pub fn minimum(&self) -> Vec<SpecialPoint> {
        vec![self.p1_minus]
    }

    /// Points where H attains its maximum on the orbit.
    pub fn maximum(&self) -> Vec<SpecialPoint> {
        match &self.p2 {
            Some(p2) => p2.to_vec(),
            None => vec![self.p1_plus],
        }
    }
}

/// On the singular orbit x = sqrt(kappa) J, so a point is fixed by J alone.
pub fn singular_orbit_point(j: Vector3<f64>, m: &ModelParams) -> PhasePoint {
    PhasePoint { j, x: j * m.kappa.sqrt() }
}

/// H + sqrt(K) - kappa c1^2 - 2 b / sqrt(kappa); vanishes on the singular orbit.
pub fn singular_orbit_residual(p: &PhasePoint, b: f64, m: &ModelParams) -> f64 {
    hamiltonian(p, m) + integral_k(p, m).sqrt() - m.kappa * m.c1 * m.c1 - 2.0 * b / m.kappa.sqrt()
}

pub fn singular_orbit_profile(b: f64, m: &ModelParams) -> Result<SingularOrbitProfile> {
    m.require_compact()?;
    if !(b >= 0.0) || !b.is_finite() {
        return Err(Error::Domain(format!("singular orbit profile needs b >= 0, got {b}")));
    }
    let k4 = m.kappa.powf(0.25);
    let special = |j: Vector3<f64>| {
        let point = singular_orbit_point(j, m);
        SpecialPoint {
            point,
            h: hamiltonian(&point, m),
            k: integral_k(&point, m),
        }
    };
    let r = b.sqrt() / k4;
    let b0 = m.b0();
    let p2 = if b > b0 {
        let j1 = m.kappa.sqrt() * m.c1;
        let j3 = (b / m.kappa.sqrt() - m.kappa * m.c1 * m.c1).sqrt();
        Some([
            special(Vector3::new(j1, 0.0, j3)),
            special(Vector3::new(j1, 0.0, -j3)),
        ])
    } else {
        None
    };
    Ok(SingularOrbitProfile {
        a: 2.0 * m.kappa.sqrt() * b,
        b,
        b0,
        p1_minus: special(Vector3::new(-r, 0.0, 0.0)),
        p1_plus: special(Vector3::new(r, 0.0, 0.0)),
        p2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_examples() {
        let m = ModelParams::default();
        let p = PhasePoint::new([0.3, -0.2, 5.0], [0.1, 0.2, 0.3]);
        assert_eq!(pencil_bracket(Coord::J1, Coord::J2, &p, &m), 5.0);
        assert_eq!(pencil_bracket(Coord::J1, Coord::J1, &p, &m), 0.0);
        let q = PhasePoint::new([0.0, 0.0, 2.0], [0.0, 0.0, 0.0]);
        assert_eq!(pencil_bracket(Coord::X1, Coord::X2, &q, &m), 2.0);
    }

    #[test]
    fn casimir_and_energy_examples() {
        let m = ModelParams::default();
        let p = PhasePoint::new([1.0, 0.0, 0.0], [1.0, 0.0, 0.0]);
        assert_eq!(casimirs(&p, &m), (2.0, 1.0));
        let z = PhasePoint::new([0.0; 3], [0.0; 3]);
        assert_eq!(casimirs(&z, &m), (0.0, 0.0));
        assert_eq!(integral_k(&z, &m), 1.0);
        let x = PhasePoint::new([0.0; 3], [1.0, 0.0, 0.0]);
        assert_eq!(hamiltonian(&x, &m), 2.0);
    }

    #[test]
    fn sgrad_h_at_pure_rotation() {
        // only {x2, x1} dH/dx1 = -kappa J3 * 2c survives
        let m = ModelParams::default();
        let p = PhasePoint::new([0.0, 0.0, 1.0], [0.0; 3]);
        let v = sgrad(FunctionTag::H, &p, &m);
        assert!(v[0].abs() < 1e-15 && v[1].abs() < 1e-15 && v[2].abs() < 1e-15);
        assert!(v[3].abs() < 1e-15);
        assert!((v[4] + 2.0).abs() < 1e-15);
        assert!(v[5].abs() < 1e-15);
    }

    #[test]
    fn orbit_point_roundtrip_and_degenerate() {
        let m = ModelParams::default();
        let p = orbit_point(2.0, 0.0, [0.4, 1.0, 2.0, -0.5], &m).unwrap();
        let (f1, f2) = casimirs(&p, &m);
        assert!((f1 - 2.0).abs() < 1e-12 && f2.abs() < 1e-12);
        let q = orbit_point(2.0, 1.0, [0.4, 1.0, 2.0, -0.5], &m).unwrap();
        let (g1, g2) = casimirs(&q, &m);
        assert!((g1 - 2.0).abs() < 1e-12 && (g2 - 1.0).abs() < 1e-12);
        assert!(matches!(
            orbit_point(1.0, 1.0, [0.0; 4], &m),
            Err(Error::InvalidOrbit { .. })
        ));
        let flat = ModelParams::new(0.0, 1.0).unwrap();
        assert!(orbit_point(1.0, 0.0, [0.0; 4], &flat).is_err());
    }

    #[test]
    fn singular_profile_b0_split() {
        let m = ModelParams::default();
        let low = singular_orbit_profile(0.5, &m).unwrap();
        assert!(low.p2.is_none());
        assert!(low.p1_minus.h < low.p1_plus.h);
        let high = singular_orbit_profile(2.0, &m).unwrap();
        let p2 = high.p2.unwrap();
        for s in p2 {
            assert!(s.k.abs() < 1e-12);
            assert!(singular_orbit_residual(&s.point, 2.0, &m).abs() < 1e-12);
        }
        assert!(high.p1_plus.k > 0.0 && high.p1_minus.k > 0.0);
        assert!(p2[0].h > high.p1_plus.h);
    }
}
