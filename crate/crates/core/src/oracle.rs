//! Brute-force check of the analytic diagram: momentum clouds, critical
//! points of (H, K) on an orbit found by least squares, and matching of the
//! recovered critical values against the analytic singular points.
//!
//! The orbit M_{a,b} is S^2 x S^2 through p+ = x + sqrt(kappa) J and
//! p- = x - sqrt(kappa) J. A point is critical when some combination
//! cos(t) dH + sin(t) dK vanishes on the tangent space, which is solved by
//! Levenberg-Marquardt in local sphere charts re-centred after each pass.

use levenberg_marquardt::{LeastSquaresProblem, LevenbergMarquardt};
use nalgebra::storage::Owned;
use nalgebra::{Matrix2x4, Matrix6x5, Vector3, Vector5, Vector6, U5, U6};
use pathfinding::matrix::Matrix;
use pathfinding::prelude::kuhn_munkres_min;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{self, FunctionTag, PhasePoint};
use crate::bifurcation::{self, Side};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::poly;
use crate::separating::RegionId;

/// Converged minima must have a normalized smallest singular value below this.
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Cluster radius in normalized (h, k).
pub const CLUSTER_RADIUS: f64 = 1e-4;
/// Matching runs on values merged only at this radius: CLUSTER_RADIUS is
/// wider than MATCH_TOL and would merge distinct nearby critical values.
pub const DUPLICATE_RADIUS: f64 = 1e-9;
/// Analytic and empirical values closer than this count as matched.
pub const MATCH_TOL: f64 = 1e-5;
/// Largest admissible distance of a critical value from the curve union.
pub const CURVE_TOL: f64 = 1e-6;

const OUTER_PASSES: usize = 6;
const FD_STEP: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalValue {
    pub h: f64,
    pub k: f64,
    /// Normalized smallest singular value at the minimizer.
    pub residual: f64,
}

/// Normalizing scale for h on the orbit (a, b); k uses its square.
pub fn h_scale(a: f64, m: &ModelParams) -> f64 {
    (a.abs() / m.kappa + m.kappa * m.c1 * m.c1).max(1.0)
}

fn check_orbit(a: f64, b: f64, m: &ModelParams, strict: bool) -> Result<()> {
    m.require_compact()?;
    let edge = 2.0 * m.kappa.sqrt() * b.abs();
    let ok = a.is_finite() && b.is_finite() && if strict { a > edge } else { a >= edge };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidOrbit { a, b })
    }
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vector3<f64> {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = (1.0 - z * z).max(0.0).sqrt();
    Vector3::new(r * phi.cos(), r * phi.sin(), z)
}

/// n samples of (H, K) at uniformly random points of the orbit.
pub fn momentum_cloud(a: f64, b: f64, n: usize, seed: u64, m: &ModelParams) -> Result<Vec<(f64, f64)>> {
    check_orbit(a, b, m, false)?;
    if n == 0 {
        return Err(Error::Precondition("cloud needs at least one sample".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dirs: Vec<(Vector3<f64>, Vector3<f64>)> =
        (0..n).map(|_| (random_unit(&mut rng), random_unit(&mut rng))).collect();
    dirs.par_iter()
        .map(|(n1, n2)| {
            let p = algebra::orbit_point_from_directions(a, b, n1, n2, m)?;
            Ok((algebra::hamiltonian(&p, m), algebra::integral_k(&p, m)))
        })
        .collect()
}

fn tangent_basis(n: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let axis = if n.x.abs() <= n.y.abs() && n.x.abs() <= n.z.abs() {
        Vector3::x()
    } else if n.y.abs() <= n.z.abs() {
        Vector3::y()
    } else {
        Vector3::z()
    };
    let e1 = n.cross(&axis).normalize();
    (e1, n.cross(&e1))
}

/// Derivatives of f along the tangent frame (e1, e2, e3, e4) of S^2 x S^2,
/// per unit angle.
fn tangent_row(
    g: &Vector6<f64>,
    frame: &[Vector3<f64>; 4],
    radii: (f64, f64),
    m: &ModelParams,
) -> [f64; 4] {
    let sk = 2.0 * m.kappa.sqrt();
    let gj = Vector3::new(g[0], g[1], g[2]);
    let gx = Vector3::new(g[3], g[4], g[5]);
    let dp = gj / sk + gx / 2.0;
    let dm = -gj / sk + gx / 2.0;
    [
        radii.0 * dp.dot(&frame[0]),
        radii.0 * dp.dot(&frame[1]),
        radii.1 * dm.dot(&frame[2]),
        radii.1 * dm.dot(&frame[3]),
    ]
}

/// Smallest singular value of the 2x4 matrix of tangent derivatives of
/// H / s and K / s^2, with s = h_scale(a).
pub fn tangent_sigma_min(a: f64, b: f64, p: &PhasePoint, m: &ModelParams) -> Result<f64> {
    let radii = algebra::sphere_radii(a, b, m)?;
    let sk = m.kappa.sqrt();
    let n1 = (p.x + p.j * sk).try_normalize(0.0);
    let n2 = (p.x - p.j * sk).try_normalize(0.0);
    let (n1, n2) = match (n1, n2) {
        (Some(x), Some(y)) => (x, y),
        _ => return Err(Error::Precondition("point lies on a degenerate orbit".into())),
    };
    let (e1, e2) = tangent_basis(&n1);
    let (e3, e4) = tangent_basis(&n2);
    Ok(sigma_min_at(p, &[e1, e2, e3, e4], radii, h_scale(a, m), m))
}

fn sigma_min_at(p: &PhasePoint, frame: &[Vector3<f64>; 4], radii: (f64, f64), s: f64, m: &ModelParams) -> f64 {
    let rh = tangent_row(&algebra::gradient(FunctionTag::H, p, m), frame, radii, m);
    let rk = tangent_row(&algebra::gradient(FunctionTag::K, p, m), frame, radii, m);
    let a = Matrix2x4::new(
        rh[0] / s,
        rh[1] / s,
        rh[2] / s,
        rh[3] / s,
        rk[0] / (s * s),
        rk[1] / (s * s),
        rk[2] / (s * s),
        rk[3] / (s * s),
    );
    let sv = a.singular_values();
    sv[0].min(sv[1])
}

/// What the search pins besides rank deficiency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    Free,
    /// H = h.
    Level(f64),
    /// (H, K) = (h, k).
    Value(f64, f64),
}

/// One local chart of the search: centre directions, their tangent frames
/// and the parameters (t1, t2, t3, t4, theta).
#[derive(Clone)]
struct Search<'a> {
    m: &'a ModelParams,
    radii: (f64, f64),
    s: f64,
    target: Target,
    n1: Vector3<f64>,
    n2: Vector3<f64>,
    frame: [Vector3<f64>; 4],
    x: Vector5<f64>,
}

impl<'a> Search<'a> {
    fn new(a: f64, b: f64, m: &'a ModelParams, target: Target, n1: Vector3<f64>, n2: Vector3<f64>, theta: f64) -> Result<Self> {
        let radii = algebra::sphere_radii(a, b, m)?;
        let mut s = Search {
            m,
            radii,
            s: h_scale(a, m),
            target,
            n1,
            n2,
            frame: [Vector3::zeros(); 4],
            x: Vector5::new(0.0, 0.0, 0.0, 0.0, theta),
        };
        s.recentre();
        Ok(s)
    }

    fn directions(&self, x: &Vector5<f64>) -> (Vector3<f64>, Vector3<f64>) {
        let f = &self.frame;
        let d1 = (self.n1 + f[0] * x[0] + f[1] * x[1]).normalize();
        let d2 = (self.n2 + f[2] * x[2] + f[3] * x[3]).normalize();
        (d1, d2)
    }

    fn point(&self, x: &Vector5<f64>) -> PhasePoint {
        let (d1, d2) = self.directions(x);
        let sk = self.m.kappa.sqrt();
        let pp = d1 * self.radii.0;
        let pm = d2 * self.radii.1;
        PhasePoint {
            j: (pp - pm) / (2.0 * sk),
            x: (pp + pm) / 2.0,
        }
    }

    /// Moves the chart centre to the current point.
    fn recentre(&mut self) {
        let (d1, d2) = self.directions(&self.x);
        self.n1 = d1;
        self.n2 = d2;
        let (e1, e2) = tangent_basis(&d1);
        let (e3, e4) = tangent_basis(&d2);
        self.frame = [e1, e2, e3, e4];
        self.x = Vector5::new(0.0, 0.0, 0.0, 0.0, self.x[4]);
    }

    fn eval(&self, x: &Vector5<f64>) -> Vector6<f64> {
        let p = self.point(x);
        let (d1, d2) = self.directions(x);
        // frame projected onto the tangent planes at the moved point
        let proj = |e: &Vector3<f64>, n: &Vector3<f64>| e - n * e.dot(n);
        let f = &self.frame;
        let frame = [proj(&f[0], &d1), proj(&f[1], &d1), proj(&f[2], &d2), proj(&f[3], &d2)];
        let rh = tangent_row(&algebra::gradient(FunctionTag::H, &p, self.m), &frame, self.radii, self.m);
        let rk = tangent_row(&algebra::gradient(FunctionTag::K, &p, self.m), &frame, self.radii, self.m);
        let (c, s) = (x[4].cos(), x[4].sin());
        let s1 = self.s;
        let s2 = s1 * s1;
        let (eh, ek) = match self.target {
            Target::Free => (0.0, 0.0),
            Target::Level(h) => ((algebra::hamiltonian(&p, self.m) - h) / s1, 0.0),
            Target::Value(h, k) => (
                (algebra::hamiltonian(&p, self.m) - h) / s1,
                (algebra::integral_k(&p, self.m) - k) / s2,
            ),
        };
        Vector6::new(
            c * rh[0] / s1 + s * rk[0] / s2,
            c * rh[1] / s1 + s * rk[1] / s2,
            c * rh[2] / s1 + s * rk[2] / s2,
            c * rh[3] / s1 + s * rk[3] / s2,
            eh,
            ek,
        )
    }
}

impl LeastSquaresProblem<f64, U6, U5> for Search<'_> {
    type ResidualStorage = Owned<f64, U6>;
    type JacobianStorage = Owned<f64, U6, U5>;
    type ParameterStorage = Owned<f64, U5>;

    fn set_params(&mut self, x: &Vector5<f64>) {
        self.x = *x;
    }

    fn params(&self) -> Vector5<f64> {
        self.x
    }

    fn residuals(&self) -> Option<Vector6<f64>> {
        let r = self.eval(&self.x);
        r.iter().all(|v| v.is_finite()).then_some(r)
    }

    fn jacobian(&self) -> Option<Matrix6x5<f64>> {
        let mut jac = Matrix6x5::zeros();
        for i in 0..5 {
            let mut xp = self.x;
            let mut xm = self.x;
            xp[i] += FD_STEP;
            xm[i] -= FD_STEP;
            let col = (self.eval(&xp) - self.eval(&xm)) / (2.0 * FD_STEP);
            jac.set_column(i, &col);
        }
        jac.iter().all(|v| v.is_finite()).then_some(jac)
    }
}

fn run_search(mut search: Search<'_>) -> Option<CriticalValue> {
    let lm = LevenbergMarquardt::new()
        .with_ftol(1e-15)
        .with_xtol(1e-15)
        .with_gtol(1e-15)
        .with_patience(200);
    for _ in 0..OUTER_PASSES {
        let (mut s, _report) = lm.minimize(search);
        let moved = s.x.fixed_rows::<4>(0).norm();
        s.recentre();
        search = s;
        if moved < 1e-13 {
            break;
        }
    }
    let p = search.point(&search.x);
    let residual = sigma_min_at(&p, &search.frame, search.radii, search.s, search.m);
    if !(residual < RESIDUAL_TOL) {
        return None;
    }
    let h = algebra::hamiltonian(&p, search.m);
    // a level search must stay on its level; a pinned search may miss its
    // value and is judged by the matcher
    if let Target::Level(t) = search.target {
        if (h - t).abs() > RESIDUAL_TOL * search.s {
            return None;
        }
    }
    Some(CriticalValue {
        h,
        k: algebra::integral_k(&p, search.m),
        residual,
    })
}

fn restart_rng(seed: u64, stream: u64, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.set_word_pos(i as u128 * 64);
    rng
}

fn searches(a: f64, b: f64, restarts: usize, seed: u64, stream: u64, target: Target, m: &ModelParams) -> Result<Vec<CriticalValue>> {
    check_orbit(a, b, m, true)?;
    let found: Vec<Option<CriticalValue>> = (0..restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = restart_rng(seed, stream, i);
            let n1 = random_unit(&mut rng);
            let n2 = random_unit(&mut rng);
            let theta = rng.gen_range(0.0..std::f64::consts::PI);
            Search::new(a, b, m, target, n1, n2, theta).ok().and_then(run_search)
        })
        .collect();
    Ok(found.into_iter().flatten().collect())
}

/// Critical values of (H, K) on M_{a,b} from `restarts` random starts,
/// deduplicated at CLUSTER_RADIUS and sorted by (h, k).
pub fn find_critical_points(a: f64, b: f64, restarts: usize, m: &ModelParams) -> Result<Vec<CriticalValue>> {
    find_critical_points_seeded(a, b, restarts, 0, m)
}

pub fn find_critical_points_seeded(a: f64, b: f64, restarts: usize, seed: u64, m: &ModelParams) -> Result<Vec<CriticalValue>> {
    let raw = searches(a, b, restarts, seed, 0, Target::Free, m)?;
    let s = h_scale(a, m);
    Ok(representatives(&cluster(&raw, (s, s * s), CLUSTER_RADIUS)))
}

/// Critical values on the level H = h.
pub fn critical_values_at_level(a: f64, b: f64, h: f64, restarts: usize, seed: u64, m: &ModelParams) -> Result<Vec<CriticalValue>> {
    if !h.is_finite() {
        return Err(Error::Domain(format!("level must be finite, got {h}")));
    }
    let raw = searches(a, b, restarts, seed, 1 + h.to_bits() % 1_000_003, Target::Level(h), m)?;
    let s = h_scale(a, m);
    Ok(representatives(&cluster(&raw, (s, s * s), CLUSTER_RADIUS)))
}

fn norm_dist(p: (f64, f64), q: (f64, f64), scale: (f64, f64)) -> f64 {
    ((p.0 - q.0) / scale.0).hypot((p.1 - q.1) / scale.1)
}

/// Groups values within `radius` of a cluster member. Input order does
/// not affect the result.
fn cluster(values: &[CriticalValue], scale: (f64, f64), radius: f64) -> Vec<Vec<CriticalValue>> {
    let mut sorted = values.to_vec();
    sorted.sort_by(|p, q| p.h.total_cmp(&q.h).then(p.k.total_cmp(&q.k)).then(p.residual.total_cmp(&q.residual)));
    let mut parent: Vec<usize> = (0..sorted.len()).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            if (sorted[j].h - sorted[i].h) / scale.0 > radius {
                break;
            }
            let d = norm_dist((sorted[i].h, sorted[i].k), (sorted[j].h, sorted[j].k), scale);
            if d <= radius {
                let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut groups: Vec<Vec<CriticalValue>> = Vec::new();
    let mut index = vec![usize::MAX; sorted.len()];
    for (i, v) in sorted.iter().enumerate() {
        let r = root(&mut parent, i);
        if index[r] == usize::MAX {
            index[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[index[r]].push(*v);
    }
    groups
}

/// Member with the smallest residual.
fn representatives(groups: &[Vec<CriticalValue>]) -> Vec<CriticalValue> {
    groups
        .iter()
        .map(|g| *g.iter().min_by(|p, q| p.residual.total_cmp(&q.residual)).expect("nonempty cluster"))
        .collect()
}

/// Normalized distance of (h, k) from the union of the line k = 0, the two
/// parabolas and the parametric curve (with its z -> 0 limit when b = 0), measured along k except at the
/// turning point of the parametric curve.
pub fn curve_union_residual(h: f64, k: f64, a: f64, b: f64, scale: (f64, f64), m: &ModelParams) -> Result<f64> {
    let mut best = k.abs();
    for side in [Side::Left, Side::Right] {
        best = best.min((k - bifurcation::parabola(side, h, a, b, m)?).abs());
    }
    // z on the curve with abscissa h: 2 z^3 - h z^2 + b^2 c1^2 = 0
    let b2c2 = b * b * m.c1 * m.c1;
    if b == 0.0 {
        // limit of the z -> 0 branch of the parametric curve
        let c2 = m.c1 * m.c1;
        let kl = h * h - 2.0 * m.kappa * c2 * h + m.kappa * m.kappa * c2 * c2 + 4.0 * a * c2;
        best = best.min((k - kl).abs());
    }
    let mut best = best / scale.1;
    let mut zs = poly::real_nonzero_roots(&[2.0, -h, 0.0, b2c2]);
    // a double root at the turning point of h(z) may come out complex
    if b2c2 > 0.0 {
        zs.push(b2c2.cbrt());
    }
    for z in zs {
        let (hz, kz) = bifurcation::parametric_curve(z, a, b, m)?;
        best = best.min(norm_dist((h, k), (hz, kz), scale));
    }
    Ok(best)
}

/// A labelled analytic point handed to the matcher.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticPoint {
    pub label: String,
    pub h: f64,
    pub k: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointMatch {
    pub label: String,
    pub analytic: (f64, f64),
    pub empirical: Option<(f64, f64)>,
    pub distance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Budget {
    pub restarts: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            restarts: 200,
            samples: 2000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub a: f64,
    pub b: f64,
    pub region: Option<RegionId>,
    pub scale: (f64, f64),
    pub matches: Vec<PointMatch>,
    pub missing: Vec<String>,
    /// Labels recovered only by a search pinned to their (h, k).
    pub pinned: Vec<String>,
    /// Critical values farther than CURVE_TOL from the curve union.
    pub spurious: Vec<CriticalValue>,
    pub empirical_count: usize,
    pub max_mismatch: f64,
    pub cloud_h_range: (f64, f64),
    pub cloud_k_range: (f64, f64),
    pub passed: bool,
}

/// Integer weight for the Hungarian solver, saturated far from any match.
fn weight(d: f64) -> i64 {
    (d.min(1e3) * 1e12).round() as i64
}

/// Optimal one-to-one pairing minimizing total normalized distance. Returns
/// (row in `left`, row in `right`, distance); works for either orientation.
pub fn match_points(left: &[(f64, f64)], right: &[(f64, f64)], scale: (f64, f64)) -> Vec<(usize, usize, f64)> {
    if left.is_empty() || right.is_empty() {
        return Vec::new();
    }
    let transpose = left.len() > right.len();
    let (rows, cols) = if transpose { (right, left) } else { (left, right) };
    let w = Matrix::from_fn(rows.len(), cols.len(), |(i, j)| weight(norm_dist(rows[i], cols[j], scale)));
    let (_, assign) = kuhn_munkres_min(&w);
    let mut out: Vec<(usize, usize, f64)> = assign
        .iter()
        .enumerate()
        .map(|(i, &j)| {
            let d = norm_dist(rows[i], cols[j], scale);
            if transpose {
                (j, i, d)
            } else {
                (i, j, d)
            }
        })
        .collect();
    out.sort_by_key(|t| t.0);
    out
}

fn assign(analytic: &[AnalyticPoint], groups: &[Vec<CriticalValue>], scale: (f64, f64)) -> Vec<PointMatch> {
    let mut matches: Vec<PointMatch> = analytic
        .iter()
        .map(|p| PointMatch {
            label: p.label.clone(),
            analytic: (p.h, p.k),
            empirical: None,
            distance: f64::INFINITY,
        })
        .collect();
    if groups.is_empty() || analytic.is_empty() {
        return matches;
    }
    // an analytic point is as close to a cluster as to its nearest member
    let nearest: Vec<Vec<(f64, f64)>> = matches
        .iter()
        .map(|t| {
            groups
                .iter()
                .map(|g| {
                    g.iter()
                        .map(|c| (c.h, c.k))
                        .min_by(|p, q| norm_dist(*p, t.analytic, scale).total_cmp(&norm_dist(*q, t.analytic, scale)))
                        .expect("nonempty cluster")
                })
                .collect()
        })
        .collect();
    let dist = |i: usize, j: usize| norm_dist((analytic[i].h, analytic[i].k), nearest[i][j], scale);
    let (rows, cols) = (analytic.len(), groups.len());
    let transpose = rows > cols;
    let w = if transpose {
        Matrix::from_fn(cols, rows, |(j, i)| weight(dist(i, j)))
    } else {
        Matrix::from_fn(rows, cols, |(i, j)| weight(dist(i, j)))
    };
    let (_, assignment) = kuhn_munkres_min(&w);
    let pairs: Vec<(usize, usize)> = assignment
        .iter()
        .enumerate()
        .map(|(r, &c)| if transpose { (c, r) } else { (r, c) })
        .collect();
    for (i, j) in pairs {
        let d = dist(i, j);
        matches[i].empirical = Some(nearest[i][j]);
        matches[i].distance = d;
    }
    matches
}

/// Runs the cloud, a blind search and one level search per analytic
/// abscissa, then matches analytic points to the recovered clusters. Points
/// still unmatched get a search pinned to their (h, k); those recovered that
/// way are listed in `pinned`.
pub fn verify_points(a: f64, b: f64, analytic: &[AnalyticPoint], budget: Budget, m: &ModelParams) -> Result<VerificationReport> {
    check_orbit(a, b, m, true)?;
    let cloud = momentum_cloud(a, b, budget.samples.max(1), budget.seed, m)?;
    let range = |f: fn(&(f64, f64)) -> f64| {
        cloud.iter().map(f).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    };
    let cloud_h_range = range(|p| p.0);
    let cloud_k_range = range(|p| p.1);

    let scale = (
        analytic.iter().map(|p| p.h.abs()).fold(1.0, f64::max),
        analytic.iter().map(|p| p.k.abs()).fold(1.0, f64::max),
    );
    let n = analytic.len() as u64;
    let mut raw = searches(a, b, budget.restarts, budget.seed, 0, Target::Free, m)?;
    for (i, p) in analytic.iter().enumerate() {
        raw.extend(searches(a, b, budget.restarts, budget.seed, 1 + i as u64, Target::Level(p.h), m)?);
    }
    let mut matches = assign(analytic, &cluster(&raw, scale, DUPLICATE_RADIUS), scale);
    let mut pinned = Vec::new();
    for (i, p) in analytic.iter().enumerate() {
        if matches[i].distance <= MATCH_TOL {
            continue;
        }
        let found = searches(a, b, budget.restarts, budget.seed, 1 + n + i as u64, Target::Value(p.h, p.k), m)?;
        if found.iter().any(|c| norm_dist((c.h, c.k), (p.h, p.k), scale) <= MATCH_TOL) {
            pinned.push(p.label.clone());
        }
        raw.extend(found);
    }
    if !pinned.is_empty() {
        matches = assign(analytic, &cluster(&raw, scale, DUPLICATE_RADIUS), scale);
    }
    let groups = cluster(&raw, scale, CLUSTER_RADIUS);
    let reps = representatives(&groups);

    let mut spurious = Vec::new();
    for r in &reps {
        if curve_union_residual(r.h, r.k, a, b, scale, m)? > CURVE_TOL {
            spurious.push(*r);
        }
    }
    let missing: Vec<String> = matches
        .iter()
        .filter(|x| !(x.distance <= MATCH_TOL))
        .map(|x| x.label.clone())
        .collect();
    let max_mismatch = matches.iter().map(|x| x.distance).fold(0.0, f64::max);
    let passed = missing.is_empty() && spurious.is_empty();
    Ok(VerificationReport {
        a,
        b,
        region: None,
        scale,
        matches,
        missing,
        pinned,
        spurious,
        empirical_count: reps.len(),
        max_mismatch,
        cloud_h_range,
        cloud_k_range,
        passed,
    })
}

/// Verifies the analytic diagram of an orbit inside a subregion.
pub fn verify_diagram(a: f64, b: f64, budget: Budget, m: &ModelParams) -> Result<VerificationReport> {
    let d = bifurcation::diagram(a, b, m)?;
    let analytic: Vec<AnalyticPoint> = d
        .singular_points
        .iter()
        .map(|p| AnalyticPoint {
            label: p.family.to_string(),
            h: p.h,
            k: p.k,
        })
        .collect();
    let mut report = verify_points(a, b, &analytic, budget, m)?;
    report.region = Some(d.region);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cloud_is_deterministic() {
        let m = ModelParams::default();
        let c1 = momentum_cloud(3.0, 0.5, 50, 7, &m).unwrap();
        let c2 = momentum_cloud(3.0, 0.5, 50, 7, &m).unwrap();
        assert_eq!(c1, c2);
        assert!(momentum_cloud(1.0, 1.0, 5, 0, &m).is_err());
    }

    #[test]
    fn matching_handles_both_orientations() {
        let l = [(0.0, 0.0), (1.0, 1.0)];
        let r = [(1.0, 1.1), (5.0, 5.0), (0.0, 0.1)];
        let m1 = match_points(&l, &r, (1.0, 1.0));
        let m2 = match_points(&r, &l, (1.0, 1.0));
        assert_eq!(m1.iter().map(|t| (t.0, t.1)).collect::<Vec<_>>(), vec![(0, 2), (1, 0)]);
        let mut back: Vec<_> = m2.iter().map(|t| (t.1, t.0)).collect();
        back.sort();
        assert_eq!(back, vec![(0, 2), (1, 0)]);
    }
}
