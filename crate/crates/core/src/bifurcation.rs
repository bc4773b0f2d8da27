//! Bifurcation diagram of (H, K) restricted to an orbit: the carrier curves,
//! closed-form abscissas of the first-series singular points and the roots
//! of k(z) = 0.

use crate::coords::{ab_to_uv, CasimirCoords, OrbitParams};
use crate::error::{Error, Result};
use crate::family::{Family, SurfaceId};
use crate::model::ModelParams;
use crate::poly::{self, Dd};
use crate::separating::{self, RegionId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// (h, k) on the curve parametrized by z != 0.
pub fn parametric_curve(z: f64, a: f64, b: f64, m: &ModelParams) -> Result<(f64, f64)> {
    if z == 0.0 || !z.is_finite() {
        return Err(Error::Domain("parametric curve needs z != 0".into()));
    }
    let c2 = m.c1 * m.c1;
    let b2c2 = b * b * c2;
    let h = b2c2 / (z * z) + 2.0 * z;
    let k = 4.0 * a * c2 - 4.0 * b2c2 / z + b2c2 * b2c2 / z.powi(4) - 2.0 * m.kappa * c2 * h
        + m.kappa * m.kappa * c2 * c2;
    Ok((h, k))
}

/// dh/dz of the parametric curve.
pub fn parametric_dh(z: f64, b: f64, m: &ModelParams) -> f64 {
    -2.0 * b * b * m.c1 * m.c1 / z.powi(3) + 2.0
}

/// k on the left (+ sign) or right (- sign) parabola.
pub fn parabola(side: Side, h: f64, a: f64, b: f64, m: &ModelParams) -> Result<f64> {
    m.require_compact()?;
    let disc = a * a - 4.0 * m.kappa * b * b;
    if disc < -1e-14 * a.abs().max(1.0).powi(2) {
        return Err(Error::InvalidOrbit { a, b });
    }
    let r = disc.max(0.0).sqrt() / m.kappa;
    let base = h - m.kappa * m.c1 * m.c1 - a / m.kappa;
    let t = match side {
        Side::Left => base + r,
        Side::Right => base - r,
    };
    Ok(t * t)
}

/// Same parabolas written in (u, v): vertices at kappa c1^2 + u/kappa (left)
/// and kappa c1^2 + v/kappa (right).
pub fn parabola_uv(side: Side, h: f64, c: CasimirCoords, m: &ModelParams) -> f64 {
    let w = match side {
        Side::Left => c.u,
        Side::Right => c.v,
    };
    let t = h - m.kappa * m.c1 * m.c1 - w / m.kappa;
    t * t
}

fn need_first_series(s: SurfaceId) -> Result<()> {
    if s.is_root() {
        Err(Error::Precondition(format!(
            "{s} has no closed-form abscissa; use root_abscissas"
        )))
    } else {
        Ok(())
    }
}

/// Closed-form abscissa of a first-series singular point.
pub fn first_series_h(s: SurfaceId, c: CasimirCoords, m: &ModelParams) -> Result<f64> {
    need_first_series(s)?;
    m.require_compact()?;
    let (u, v, k) = (c.u, c.v, m.kappa);
    let tau = m.tau();
    let c2 = m.c1 * m.c1;
    Ok(match s {
        SurfaceId::MinusL => (u - 2.0 * tau * v.sqrt()) / (2.0 * k),
        SurfaceId::PlusL => (u + 2.0 * tau * v.sqrt()) / (2.0 * k),
        SurfaceId::MinusR => (v - 2.0 * tau * u.sqrt()) / (2.0 * k),
        SurfaceId::PlusR => (v + 2.0 * tau * u.sqrt()) / (2.0 * k),
        SurfaceId::LT => {
            if u == 0.0 {
                return Err(Error::Domain("lt is undefined at u = 0".into()));
            }
            (v / u) * k * c2 + u / k
        }
        SurfaceId::RT => {
            if v == 0.0 {
                return Err(Error::Domain("rt is undefined at v = 0".into()));
            }
            (u / v) * k * c2 + v / k
        }
        SurfaceId::Cusp => 3.0 * (u * v).cbrt() * (c2 / (4.0 * k)).cbrt(),
        SurfaceId::L => k * c2 + u / k,
        SurfaceId::Int => k * c2 + (u + v) / (2.0 * k),
        _ => unreachable!(),
    })
}

/// Parameter z on the parametric curve of a first-series point; `l` and
/// `int` are not on that curve.
pub fn first_series_z(s: SurfaceId, c: CasimirCoords, m: &ModelParams) -> Result<f64> {
    need_first_series(s)?;
    m.require_compact()?;
    let (u, v, k, c1) = (c.u, c.v, m.kappa, m.c1);
    Ok(match s {
        SurfaceId::MinusL => -(v / 2.0).sqrt() * c1,
        SurfaceId::PlusL => (v / 2.0).sqrt() * c1,
        SurfaceId::MinusR => -(u / 2.0).sqrt() * c1,
        SurfaceId::PlusR => (u / 2.0).sqrt() * c1,
        SurfaceId::LT => u / (2.0 * k),
        SurfaceId::RT => v / (2.0 * k),
        SurfaceId::Cusp => (u * v * c1 * c1 / (4.0 * k)).cbrt(),
        SurfaceId::L | SurfaceId::Int => {
            return Err(Error::Domain(format!("{s} does not lie on the parametric curve")))
        }
        _ => unreachable!(),
    })
}

/// k(z) z^4 as a quintic, highest degree first.
pub fn quintic_coefficients(a: f64, b: f64, m: &ModelParams) -> [f64; 6] {
    let (k, c2) = (m.kappa, m.c1 * m.c1);
    let b2 = b * b;
    [
        -4.0 * k * c2,
        4.0 * a * c2 + k * k * c2 * c2,
        -4.0 * b2 * c2,
        -2.0 * k * b2 * c2 * c2,
        0.0,
        b2 * b2 * c2 * c2,
    ]
}

/// The quintic times kappa^2, built from (u, v) in double-double. With
/// kappa b^2 = u v / 4 no square root or division enters the coefficients,
/// so exact double roots on the boundary curves survive.
pub fn quintic_coefficients_uv(c: CasimirCoords, m: &ModelParams) -> [Dd; 6] {
    let k = Dd::new(m.kappa);
    let c2 = Dd::new(m.c1).mul(Dd::new(m.c1));
    let a = Dd::new(c.u).add(Dd::new(c.v)).scale(0.5);
    let kb2 = Dd::new(c.u).mul(Dd::new(c.v)).scale(0.25);
    let kc2 = k.mul(c2);
    let k2 = k.mul(k);
    [
        k2.mul(kc2).scale(-4.0),
        k2.mul(a.mul(c2).scale(4.0).add(kc2.mul(kc2))),
        k.mul(kb2).mul(c2).scale(-4.0),
        k.mul(kc2).mul(kb2).mul(c2).scale(-2.0),
        Dd::ZERO,
        kb2.mul(kb2).mul(c2).mul(c2),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootPoint {
    pub z: f64,
    pub h: f64,
    /// Root, RootR, RootL for the three largest positive roots; None otherwise.
    pub surface: Option<SurfaceId>,
}

/// Real nonzero roots of k(a, b, z) = 0 with their abscissas, ascending in z.
pub fn root_abscissas(a: f64, b: f64, m: &ModelParams) -> Result<Vec<RootPoint>> {
    root_abscissas_uv(ab_to_uv(a, b, m)?, m)
}

pub fn root_abscissas_uv(c: CasimirCoords, m: &ModelParams) -> Result<Vec<RootPoint>> {
    m.require_compact()?;
    let zs = poly::real_nonzero_roots_dd(&quintic_coefficients_uv(c, m));
    let positives: Vec<f64> = zs.iter().copied().filter(|z| *z > 0.0).collect();
    let labels = [SurfaceId::Root, SurfaceId::RootR, SurfaceId::RootL];
    let b2c2 = c.u * c.v / (4.0 * m.kappa) * m.c1 * m.c1;
    let mut out = Vec::with_capacity(zs.len());
    for z in zs {
        let surface = if z > 0.0 {
            let rank = positives.iter().filter(|&&w| w > z).count();
            labels.get(rank).copied()
        } else {
            None
        };
        out.push(RootPoint {
            z,
            h: b2c2 / (z * z) + 2.0 * z,
            surface,
        });
    }
    Ok(out)
}

/// A singular point of the bifurcation diagram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularPoint {
    pub family: Family,
    pub surface: SurfaceId,
    pub h: f64,
    pub k: f64,
    pub z: Option<f64>,
}

/// Abscissa, ordinate and curve parameter for a family at the orbit (a, b).
/// The axis families y4, z7 use their b = 0 limits.
pub fn singular_point(family: Family, a: f64, b: f64, m: &ModelParams) -> Result<SingularPoint> {
    let c = ab_to_uv(a, b, m)?;
    let surface = family.surface();
    let (k, c2) = (m.kappa, m.c1 * m.c1);
    let point = |h: f64, kv: f64, z: Option<f64>| SingularPoint {
        family,
        surface,
        h,
        k: kv,
        z,
    };
    match family {
        Family::Y(4) => return Ok(point(0.0, 4.0 * a * c2 + k * k * c2 * c2, None)),
        Family::Z(7) => {
            let h = a / k;
            return Ok(point(h, parabola_uv(Side::Right, h, c, m), None));
        }
        _ => {}
    }
    if surface.is_root() {
        let roots = root_abscissas_uv(c, m)?;
        let r = roots
            .iter()
            .find(|r| r.surface == Some(surface))
            .ok_or_else(|| Error::NoMatch(format!("no {surface} root at (a,b)=({a},{b})")))?;
        return Ok(point(r.h, 0.0, Some(r.z)));
    }
    let h = first_series_h(surface, c, m)?;
    let z = first_series_z(surface, c, m).ok().filter(|z| *z != 0.0);
    let kv = match surface {
        SurfaceId::MinusL | SurfaceId::PlusL | SurfaceId::LT => parabola_uv(Side::Left, h, c, m),
        SurfaceId::MinusR | SurfaceId::PlusR | SurfaceId::RT => parabola_uv(Side::Right, h, c, m),
        SurfaceId::Cusp => match z {
            Some(z) => parametric_curve(z, a, b, m)?.1,
            None => 4.0 * a * c2 + k * k * c2 * c2 - 2.0 * k * c2 * h,
        },
        SurfaceId::L => 0.0,
        SurfaceId::Int => {
            let d = (c.v - c.u) / (2.0 * k);
            d * d
        }
        _ => unreachable!(),
    };
    Ok(point(h, kv, z))
}

/// Singular points for the given families, sorted by h.
pub fn family_points(families: &[Family], a: f64, b: f64, m: &ModelParams) -> Result<Vec<SingularPoint>> {
    let mut pts = families
        .iter()
        .map(|f| singular_point(*f, a, b, m))
        .collect::<Result<Vec<_>>>()?;
    pts.sort_by(|p, q| p.h.total_cmp(&q.h));
    Ok(pts)
}

/// Curves that carry arcs of the diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Carrier {
    LeftParabola,
    RightParabola,
    /// Parametric curve, z < 0.
    CurveNegative,
    /// Parametric curve, z > 0.
    CurvePositive,
    /// The line k = 0.
    Axis,
}

impl Carrier {
    pub fn name(&self) -> &'static str {
        match self {
            Carrier::LeftParabola => "left_parabola",
            Carrier::RightParabola => "right_parabola",
            Carrier::CurveNegative => "curve_neg",
            Carrier::CurvePositive => "curve_pos",
            Carrier::Axis => "axis",
        }
    }
}

/// Piece of a carrier between two consecutive singular points on it. The
/// parameter is h for parabolas and the axis, z for the parametric curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub carrier: Carrier,
    pub from: Family,
    pub to: Family,
    pub t0: f64,
    pub t1: f64,
}

impl Arc {
    pub fn id(&self) -> String {
        format!("{}:{}-{}", self.carrier.name(), self.from, self.to)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationDiagram {
    pub orbit: OrbitParams,
    pub coords: CasimirCoords,
    pub region: RegionId,
    pub singular_points: Vec<SingularPoint>,
    pub arcs: Vec<Arc>,
}

fn carriers_of(p: &SingularPoint) -> Vec<(Carrier, f64)> {
    use SurfaceId::*;
    let mut out = Vec::new();
    match p.surface {
        MinusL | PlusL | LT => out.push((Carrier::LeftParabola, p.h)),
        MinusR | PlusR | RT => out.push((Carrier::RightParabola, p.h)),
        Int => {
            out.push((Carrier::LeftParabola, p.h));
            out.push((Carrier::RightParabola, p.h));
        }
        L => out.push((Carrier::Axis, p.h)),
        RootL | RootR | Root => out.push((Carrier::Axis, p.h)),
        Cusp => {}
    }
    if let Some(z) = p.z {
        let c = if z < 0.0 { Carrier::CurveNegative } else { Carrier::CurvePositive };
        out.push((c, z));
    }
    out
}

/// Arcs between consecutive singular points along each carrier.
pub fn arcs_between(points: &[SingularPoint]) -> Vec<Arc> {
    let carriers = [
        Carrier::LeftParabola,
        Carrier::RightParabola,
        Carrier::CurveNegative,
        Carrier::CurvePositive,
        Carrier::Axis,
    ];
    let mut arcs = Vec::new();
    for carrier in carriers {
        let mut on: Vec<(f64, Family)> = points
            .iter()
            .flat_map(|p| {
                carriers_of(p)
                    .into_iter()
                    .filter(|(c, _)| *c == carrier)
                    .map(move |(_, t)| (t, p.family))
            })
            .collect();
        on.sort_by(|x, y| x.0.total_cmp(&y.0));
        for w in on.windows(2) {
            if w[1].0 > w[0].0 {
                arcs.push(Arc {
                    carrier,
                    from: w[0].1,
                    to: w[1].1,
                    t0: w[0].0,
                    t1: w[1].0,
                });
            }
        }
    }
    arcs
}

/// (h, k) samples along an arc, endpoints included.
pub fn sample_arc(arc: &Arc, orbit: OrbitParams, n: usize, m: &ModelParams) -> Result<Vec<(f64, f64)>> {
    let n = n.max(2);
    let c = ab_to_uv(orbit.a, orbit.b, m)?;
    (0..n)
        .map(|i| {
            let t = arc.t0 + (arc.t1 - arc.t0) * i as f64 / (n - 1) as f64;
            Ok(match arc.carrier {
                Carrier::LeftParabola => (t, parabola_uv(Side::Left, t, c, m)),
                Carrier::RightParabola => (t, parabola_uv(Side::Right, t, c, m)),
                Carrier::Axis => (t, 0.0),
                Carrier::CurveNegative | Carrier::CurvePositive => {
                    parametric_curve(t, orbit.a, orbit.b, m)?
                }
            })
        })
        .collect()
}

/// Assemble the diagram for an orbit strictly inside a subregion.
pub fn diagram(a: f64, b: f64, m: &ModelParams) -> Result<BifurcationDiagram> {
    let cls = separating::classify(a, b, m)?;
    let arcs = arcs_between(&cls.points);
    Ok(BifurcationDiagram {
        orbit: OrbitParams::new(a, b),
        coords: ab_to_uv(a, b, m)?,
        region: cls.region,
        singular_points: cls.points,
        arcs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m() -> ModelParams {
        ModelParams::default()
    }

    #[test]
    fn curve_examples() {
        let (h, k) = parametric_curve(1.0, 1.0, 0.0, &m()).unwrap();
        assert_eq!((h, k), (2.0, 1.0));
        assert!(parametric_curve(0.0, 1.0, 0.0, &m()).is_err());
        // (u,v) = (2,8): z_{+r} = 1, h = 6
        let c = CasimirCoords::new(2.0, 8.0).unwrap();
        let z = first_series_z(SurfaceId::PlusR, c, &m()).unwrap();
        assert!((z - 1.0).abs() < 1e-15);
        let ab = crate::coords::uv_to_ab(c, &m()).unwrap();
        let (h, _) = parametric_curve(z, ab.a, ab.b, &m()).unwrap();
        assert!((h - 6.0).abs() < 1e-12);
        assert!((first_series_h(SurfaceId::PlusR, c, &m()).unwrap() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn cusp_example_and_domain_errors() {
        let c = CasimirCoords::new(2.0, 2.0).unwrap();
        assert!((first_series_h(SurfaceId::Cusp, c, &m()).unwrap() - 3.0).abs() < 1e-12);
        let axis = CasimirCoords::new(0.0, 2.0).unwrap();
        assert!(first_series_h(SurfaceId::LT, axis, &m()).is_err());
        assert!(first_series_h(SurfaceId::RootL, axis, &m()).is_err());
    }

    #[test]
    fn parabola_vertices() {
        let (a, b) = (3.0, 1.0);
        let c = ab_to_uv(a, b, &m()).unwrap();
        let hl = first_series_h(SurfaceId::L, c, &m()).unwrap();
        assert!(parabola(Side::Left, hl, a, b, &m()).unwrap() < 1e-24);
        let hi = first_series_h(SurfaceId::Int, c, &m()).unwrap();
        let kl = parabola(Side::Left, hi, a, b, &m()).unwrap();
        let kr = parabola(Side::Right, hi, a, b, &m()).unwrap();
        assert!((kl - kr).abs() < 1e-12);
        // b = 0: vertices at kappa c^2 and kappa c^2 + 2a/kappa
        assert!(parabola(Side::Left, 1.0, 2.0, 0.0, &m()).unwrap() < 1e-24);
        assert!(parabola(Side::Right, 5.0, 2.0, 0.0, &m()).unwrap() < 1e-24);
        assert!(parabola(Side::Left, 1.0, 1.0, 1.0, &m()).is_err());
    }

    #[test]
    fn axis_root_matches_factorization() {
        let a = 3.0;
        let r = root_abscissas(a, 0.0, &m()).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0].z - (a + 0.25)).abs() < 1e-12);
        assert!((r[0].h - (2.0 * a + 0.5)).abs() < 1e-12);
        assert_eq!(r[0].surface, Some(SurfaceId::Root));
    }
}
