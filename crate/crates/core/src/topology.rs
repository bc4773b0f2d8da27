//! Chamber adjacency, the new arc families and admissible-basis matrices.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::data::{self, Chamber, Face, FaceLabel, Tables};
use crate::error::{Error, Result};
use crate::family::Family;

pub const FACE_COUNT: usize = 66;
pub const CHAMBER_COUNT: u8 = 32;

/// Chambers 1..=11 meet the plane b = 0 and are their own mirror images.
pub const SELF_MIRRORED: std::ops::RangeInclusive<u8> = 1..=11;

/// Families occurring on the axis b = 0.
fn axis_families(t: &Tables) -> BTreeSet<Family> {
    t.codes
        .iter()
        .filter(|r| r.region.major.on_axis())
        .flat_map(|r| r.families.iter().copied())
        .collect()
}

/// A face together with the half-space it lies in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FaceRef {
    pub face: Face,
    /// True for the copy in b < 0.
    pub mirrored: bool,
}

impl fmt::Display for FaceRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}{}", self.face.id, if self.mirrored { "'" } else { "" })
    }
}

/// A chamber as a pair (graph, half-space). The chambers 1..=11 are
/// normalised to the upper half.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SidedChamber {
    pub graph: u8,
    pub lower: bool,
}

impl SidedChamber {
    pub fn new(graph: u8, lower: bool) -> Self {
        SidedChamber {
            graph,
            lower: lower && !SELF_MIRRORED.contains(&graph),
        }
    }

    pub fn mirror(self) -> Self {
        SidedChamber::new(self.graph, !self.lower)
    }
}

/// Faces separating c1 and c2. A face between two self-mirrored chambers
/// whose family is absent on the axis does not cross b = 0, so it comes with
/// a mirror copy in b < 0.
pub fn face_between(c1: Chamber, c2: Chamber) -> Result<Vec<FaceRef>> {
    face_between_in(data::tables()?, c1, c2)
}

pub fn face_between_in(t: &Tables, c1: Chamber, c2: Chamber) -> Result<Vec<FaceRef>> {
    for c in [c1, c2].into_iter().flatten() {
        if !(1..=CHAMBER_COUNT).contains(&c) {
            return Err(Error::Precondition(format!("chamber {c} outside 1..32")));
        }
    }
    if c1 == c2 {
        return Err(Error::Precondition(format!(
            "face_between needs two different chambers, got {} twice",
            chamber_name(c1)
        )));
    }
    let axis = axis_families(t);
    let self_mirrored = |c: Chamber| c.is_some_and(|g| SELF_MIRRORED.contains(&g));
    let mut out = Vec::new();
    for f in &t.faces {
        let hit = (f.above == c1 && f.below == c2) || (f.above == c2 && f.below == c1);
        if !hit {
            continue;
        }
        out.push(FaceRef {
            face: *f,
            mirrored: false,
        });
        let off_axis = match f.label {
            FaceLabel::Family(fam) => !axis.contains(&fam),
            FaceLabel::Circles(_) => false,
        };
        if off_axis && self_mirrored(f.above) && self_mirrored(f.below) {
            out.push(FaceRef {
                face: *f,
                mirrored: true,
            });
        }
    }
    Ok(out)
}

pub fn chamber_name(c: Chamber) -> String {
    match c {
        Some(g) => g.to_string(),
        None => "empty".to_string(),
    }
}

/// Parse "12", "E" or "empty".
pub fn parse_chamber(s: &str) -> Result<Chamber> {
    match s {
        "E" | "e" | "empty" => Ok(None),
        _ => s
            .parse::<u8>()
            .ok()
            .filter(|g| (1..=CHAMBER_COUNT).contains(g))
            .map(Some)
            .ok_or_else(|| Error::Domain(format!("bad chamber {s:?}"))),
    }
}

/// A face whose row disagrees with every code and is set aside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quarantined {
    pub face: Face,
    pub reason: String,
    /// Code adjacencies that only this face's chambers could carry.
    pub explains: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChamberReport {
    pub faces: usize,
    pub chambers: usize,
    /// Code adjacencies "family next to chamber" checked against faces.
    pub adjacencies_checked: usize,
    pub quarantined: Vec<Quarantined>,
    pub mirror_involutive: bool,
}

impl ChamberReport {
    pub fn consistent(&self) -> bool {
        self.faces == FACE_COUNT && self.chambers == CHAMBER_COUNT as usize && self.mirror_involutive
    }
}

/// One crossing required by a code: the face of `family` has `chamber` on
/// the side given by `chamber_above`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Crossing {
    family: Family,
    below: Chamber,
    above: Chamber,
}

fn code_crossings(t: &Tables) -> BTreeSet<Crossing> {
    let mut out = BTreeSet::new();
    for r in &t.codes {
        for (i, fam) in r.families.iter().enumerate() {
            let below = if i == 0 { None } else { Some(r.graphs[i - 1]) };
            let above = r.graphs.get(i).copied();
            // y4 and z7 are points of the axis where faces meet, not faces
            if fam.is_axis_only() {
                continue;
            }
            out.insert(Crossing {
                family: *fam,
                below,
                above,
            });
        }
    }
    out
}

/// Check the face table against itself and against the codes.
pub fn validate_chamber_graph() -> Result<ChamberReport> {
    validate_chamber_graph_in(data::tables()?)
}

pub fn validate_chamber_graph_in(t: &Tables) -> Result<ChamberReport> {
    if t.faces.len() != FACE_COUNT {
        return Err(Error::DataIntegrity(format!(
            "expected {FACE_COUNT} faces, found {}",
            t.faces.len()
        )));
    }
    let mut ids = BTreeSet::new();
    let mut chambers = BTreeSet::new();
    for f in &t.faces {
        if !ids.insert(f.id) {
            return Err(Error::DataIntegrity(format!("face p{} listed twice", f.id)));
        }
        if f.above == f.below {
            return Err(Error::DataIntegrity(format!("face p{} has the same chamber on both sides", f.id)));
        }
        if let FaceLabel::Family(fam) = f.label {
            if !fam.is_valid() {
                return Err(Error::DataIntegrity(format!("face p{} has label {fam}", f.id)));
            }
        }
        chambers.extend(f.above);
        chambers.extend(f.below);
    }
    if chambers.len() != CHAMBER_COUNT as usize {
        return Err(Error::DataIntegrity(format!(
            "faces border {} chambers, expected {CHAMBER_COUNT}",
            chambers.len()
        )));
    }

    // every family face must be witnessed by some code, and every code
    // crossing must be carried by a face
    let crossings = code_crossings(t);
    let mut quarantined = Vec::new();
    for f in &t.faces {
        let FaceLabel::Family(fam) = f.label else { continue };
        let c = Crossing {
            family: fam,
            below: f.below,
            above: f.above,
        };
        if !crossings.contains(&c) {
            quarantined.push(Quarantined {
                face: *f,
                reason: format!(
                    "no code crosses {fam} from chamber {} to {}",
                    chamber_name(f.below),
                    chamber_name(f.above)
                ),
                explains: Vec::new(),
            });
        }
    }
    let carried = |c: &Crossing| {
        t.faces.iter().any(|f| {
            f.label == FaceLabel::Family(c.family) && f.above == c.above && f.below == c.below
        })
    };
    for c in &crossings {
        if carried(c) {
            continue;
        }
        let desc = format!("{} between {} and {}", c.family, chamber_name(c.below), chamber_name(c.above));
        match quarantined
            .iter_mut()
            .find(|q| q.face.above == c.above && q.face.below == c.below)
        {
            Some(q) => q.explains.push(desc),
            None => {
                return Err(Error::DataIntegrity(format!("no face carries the code crossing {desc}")));
            }
        }
    }
    // a quarantined face that explains nothing is an outright error
    if let Some(q) = quarantined.iter().find(|q| q.explains.is_empty()) {
        return Err(Error::DataIntegrity(format!("face p{}: {}", q.face.id, q.reason)));
    }

    let mirror_involutive = (1..=CHAMBER_COUNT).all(|g| {
        [false, true].iter().all(|&lower| {
            let c = SidedChamber::new(g, lower);
            c.mirror().mirror() == c && (c.mirror() == c) == SELF_MIRRORED.contains(&g)
        })
    });
    Ok(ChamberReport {
        faces: t.faces.len(),
        chambers: chambers.len(),
        adjacencies_checked: crossings.len(),
        quarantined,
        mirror_involutive,
    })
}

/// Arc families of the bifurcation diagrams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArcId {
    /// Arc families already present in the classical case, kept by name.
    Legacy(&'static str),
    Xi(u8),
}

pub const LEGACY_ARCS: [&str; 9] = ["α1", "β1", "β2", "γ1", "γ2", "γ3", "γ4", "δ1", "δ2"];

impl fmt::Display for ArcId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArcId::Legacy(n) => f.write_str(n),
            ArcId::Xi(i) => write!(f, "ξ{i}"),
        }
    }
}

impl FromStr for ArcId {
    type Err = Error;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let norm = s
            .replace("xi", "ξ")
            .replace("alpha", "α")
            .replace("beta", "β")
            .replace("gamma", "γ")
            .replace("delta", "δ")
            .replace('_', "");
        if let Some(n) = norm.strip_prefix('ξ') {
            return match n.parse::<u8>() {
                Ok(i) if (1..=5).contains(&i) => Ok(ArcId::Xi(i)),
                _ => Err(Error::UnknownArc(s.to_string())),
            };
        }
        LEGACY_ARCS
            .iter()
            .find(|a| **a == norm)
            .map(|a| ArcId::Legacy(a))
            .ok_or_else(|| Error::UnknownArc(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Atom {
    A,
    TwoA,
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Atom::A => "A",
            Atom::TwoA => "2A",
        })
    }
}

/// Atom, torus family and endpoint pairs of one of the new arc families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcInfo {
    pub id: ArcId,
    pub atom: Atom,
    pub torus_family: u8,
    pub endpoints: Vec<(Family, Family)>,
}

pub fn arc_info(id: ArcId) -> Result<ArcInfo> {
    use Family::Z;
    let (atom, torus_family, endpoints) = match id {
        ArcId::Xi(1) => (
            Atom::A,
            1,
            vec![(Z(4), Z(3)), (Z(4), Z(5)), (Z(4), Z(11)), (Z(4), Z(8)), (Z(7), Z(5)), (Z(7), Z(8))],
        ),
        ArcId::Xi(2) => (Atom::TwoA, 3, vec![(Z(3), Z(2)), (Z(5), Z(2))]),
        ArcId::Xi(3) => (Atom::TwoA, 2, vec![(Z(2), Z(1)), (Z(10), Z(1))]),
        ArcId::Xi(4) => (
            Atom::A,
            4,
            vec![(Z(6), Z(5)), (Z(6), Z(8)), (Z(7), Z(5)), (Z(7), Z(8))],
        ),
        ArcId::Xi(5) => (
            Atom::A,
            1,
            vec![(Z(8), Z(9)), (Z(8), Z(10)), (Z(11), Z(10)), (Z(11), Z(9))],
        ),
        other => {
            return Err(Error::UnknownArc(format!(
                "{other}: only the names of the classical arc families are stored"
            )))
        }
    };
    Ok(ArcInfo {
        id,
        atom,
        torus_family,
        endpoints,
    })
}

/// 2x2 integer matrix, row major.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransitionMatrix(pub [[i32; 2]; 2]);

impl TransitionMatrix {
    pub fn det(&self) -> i32 {
        let m = self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs() == 1
    }
}

impl fmt::Display for TransitionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.0;
        write!(f, "[[{}, {}], [{}, {}]]", m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

/// Admissible basis (lambda, mu) of a new arc in terms of known cycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleBasis {
    pub arc: ArcId,
    pub matrix: TransitionMatrix,
    /// The two cycles the matrix acts on.
    pub over: [ArcId; 2],
}

pub fn admissible_matrix(arc: ArcId) -> Result<AdmissibleBasis> {
    let l = ArcId::Legacy;
    let (m, over) = match arc {
        ArcId::Xi(1) => ([[1, -1], [1, 0]], [l("γ1"), l("γ3")]),
        ArcId::Xi(2) => ([[-1, 0], [0, 1]], [l("β2"), l("γ2")]),
        ArcId::Xi(3) => ([[0, -1], [-1, 0]], [l("δ1"), l("β1")]),
        ArcId::Xi(4) => ([[1, -1], [1, 0]], [l("γ4"), l("γ3")]),
        ArcId::Xi(5) => ([[0, -1], [1, 0]], [l("γ3"), l("β1")]),
        other => return Err(Error::UnknownArc(other.to_string())),
    };
    Ok(AdmissibleBasis {
        arc,
        matrix: TransitionMatrix(m),
        over,
    })
}

/// Basis at a center-center point from the signs of dH along the two arcs.
pub fn center_center_matrix(eps1: i32, eps2: i32) -> Result<TransitionMatrix> {
    if eps1.abs() != 1 || eps2.abs() != 1 {
        return Err(Error::Precondition(format!("signs must be +-1, got ({eps1}, {eps2})")));
    }
    Ok(TransitionMatrix([[0, eps1], [eps2, 0]]))
}

pub const XI_ARCS: [ArcId; 5] = [ArcId::Xi(1), ArcId::Xi(2), ArcId::Xi(3), ArcId::Xi(4), ArcId::Xi(5)];
