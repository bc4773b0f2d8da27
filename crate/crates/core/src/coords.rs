//! Parameter charts of the orbit space: (a, b), (u, v), (q, s) and the
//! mirrored (q~, s~).

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::poly::Dd;

/// Casimir values (a, b) of an orbit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitParams {
    pub a: f64,
    pub b: f64,
}

impl OrbitParams {
    pub fn new(a: f64, b: f64) -> Self {
        OrbitParams { a, b }
    }

    pub fn is_valid(&self, m: &ModelParams) -> bool {
        self.a.is_finite()
            && self.b.is_finite()
            && self.a >= 2.0 * m.kappa.sqrt() * self.b.abs()
    }

    pub fn is_regular(&self, m: &ModelParams) -> bool {
        self.a > 2.0 * m.kappa.sqrt() * self.b.abs()
    }
}

/// The pair u <= v solving f^2 - 2 a f + 4 kappa b^2 = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CasimirCoords {
    pub u: f64,
    pub v: f64,
}

impl CasimirCoords {
    pub fn new(u: f64, v: f64) -> Result<Self> {
        if !(u >= 0.0 && v >= u) || !v.is_finite() {
            return Err(Error::Domain(format!("(u,v)=({u},{v}) outside 0 <= u <= v")));
        }
        Ok(CasimirCoords { u, v })
    }

    /// Points on v = u (singular orbits) or u = 0 (b = 0).
    pub fn is_boundary(&self) -> bool {
        self.u == 0.0 || self.u == self.v
    }
}

/// (q, s) = (sqrt(u)/v, 1/v), or with `mirrored` (sqrt(v)/u, 1/u).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QsCoords {
    pub q: f64,
    pub s: f64,
    pub mirrored: bool,
}

fn check_orbit(a: f64, b: f64, m: &ModelParams) -> Result<f64> {
    m.require_compact()?;
    // a^2 - 4 kappa b^2 cancels near the singular orbits; form it in
    // double-double
    let disc = Dd::new(a)
        .mul(Dd::new(a))
        .sub(Dd::new(b).mul(Dd::new(b)).mul(Dd::new(m.kappa)).scale(4.0))
        .to_f64();
    let tol = 1e-14 * a.abs().max(1.0).powi(2);
    if !a.is_finite() || !b.is_finite() || a < 0.0 || disc < -tol {
        return Err(Error::InvalidOrbit { a, b });
    }
    Ok(disc.max(0.0).sqrt())
}

pub fn ab_to_uv(a: f64, b: f64, m: &ModelParams) -> Result<CasimirCoords> {
    let r = check_orbit(a, b, m)?;
    let v = a + r;
    // u = a - r loses digits when b is small; use u v = 4 kappa b^2 instead
    let u = if v > 0.0 { 4.0 * m.kappa * b * b / v } else { 0.0 };
    Ok(CasimirCoords { u: u.min(v), v })
}

/// Inverse chart; the b >= 0 branch is returned.
pub fn uv_to_ab(c: CasimirCoords, m: &ModelParams) -> Result<OrbitParams> {
    m.require_compact()?;
    if !(c.u >= 0.0 && c.v >= c.u) {
        return Err(Error::Domain(format!("(u,v)=({},{}) outside 0 <= u <= v", c.u, c.v)));
    }
    Ok(OrbitParams {
        a: 0.5 * (c.u + c.v),
        b: (c.u * c.v / (4.0 * m.kappa)).sqrt(),
    })
}

pub fn uv_to_qs(c: CasimirCoords, mirrored: bool) -> Result<QsCoords> {
    let (num, den) = if mirrored { (c.v, c.u) } else { (c.u, c.v) };
    if den == 0.0 {
        return Err(Error::Domain(
            if mirrored { "u = 0 in the mirrored (q,s) chart" } else { "v = 0 in the (q,s) chart" }.into(),
        ));
    }
    Ok(QsCoords {
        q: num.sqrt() / den,
        s: 1.0 / den,
        mirrored,
    })
}

pub fn qs_to_uv(x: QsCoords) -> Result<CasimirCoords> {
    if !(x.s > 0.0) || !(x.q >= 0.0) {
        return Err(Error::Domain(format!("(q,s)=({},{}) needs s > 0, q >= 0", x.q, x.s)));
    }
    let inv = 1.0 / x.s;
    let other = x.q * x.q * inv * inv;
    Ok(if x.mirrored {
        CasimirCoords { u: inv, v: other }
    } else {
        CasimirCoords { u: other, v: inv }
    })
}

/// Map (q, s) directly to (u, v) without validating u <= v; used when
/// tracing curves that leave the domain.
pub fn qs_to_uv_raw(q: f64, s: f64, mirrored: bool) -> (f64, f64) {
    let inv = 1.0 / s;
    let other = q * q * inv * inv;
    if mirrored {
        (inv, other)
    } else {
        (other, inv)
    }
}
