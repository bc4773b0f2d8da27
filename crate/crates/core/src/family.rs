//! Singular-point families y1..y13, z1..z11 and the surfaces that carry them.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// A family of singular points of the bifurcation diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Y(u8),
    Z(u8),
}

impl Family {
    pub const fn y(i: u8) -> Family {
        Family::Y(i)
    }

    pub const fn z(i: u8) -> Family {
        Family::Z(i)
    }

    pub fn is_valid(&self) -> bool {
        match *self {
            Family::Y(i) => (1..=13).contains(&i),
            Family::Z(i) => (1..=11).contains(&i),
        }
    }

    /// All 24 families, y first.
    pub fn all() -> Vec<Family> {
        (1..=13).map(Family::Y).chain((1..=11).map(Family::Z)).collect()
    }

    /// Families that only occur on the axis b = 0.
    pub fn is_axis_only(&self) -> bool {
        matches!(self, Family::Y(4) | Family::Z(7))
    }

    /// Surface carrying this family. y4 and z7 exist only at b = 0, where they
    /// are the limits of the cusp and of the merged +-r points.
    pub fn surface(&self) -> SurfaceId {
        use SurfaceId::*;
        match *self {
            Family::Y(1) => MinusL,
            Family::Y(3) | Family::Y(7) | Family::Y(12) | Family::Z(9) | Family::Z(10) => PlusL,
            Family::Z(4) => MinusR,
            Family::Z(3) | Family::Z(6) | Family::Z(11) | Family::Z(7) => PlusR,
            Family::Y(5) | Family::Y(8) => LT,
            Family::Z(2) | Family::Z(8) => RT,
            Family::Y(6) | Family::Y(9) | Family::Y(4) => Cusp,
            Family::Y(2) | Family::Y(13) => L,
            Family::Z(5) => Int,
            Family::Y(10) => RootR,
            Family::Y(11) => RootL,
            Family::Z(1) => Root,
            _ => unreachable!("invalid family {self}"),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Y(i) => write!(f, "y{i}"),
            Family::Z(i) => write!(f, "z{i}"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::DataIntegrity(format!("bad family tag {s:?}"));
        let (head, tail) = s.split_at(s.char_indices().nth(1).map(|(i, _)| i).ok_or_else(bad)?);
        let n: u8 = tail.parse().map_err(|_| bad())?;
        let fam = match head {
            "y" => Family::Y(n),
            "z" => Family::Z(n),
            _ => return Err(bad()),
        };
        if fam.is_valid() {
            Ok(fam)
        } else {
            Err(bad())
        }
    }
}

/// Surfaces in the orbit space along which singular points move. `Root` is
/// the largest positive root of k(z) = 0 (family z1); `RootR` and `RootL` are
/// the second and third largest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SurfaceId {
    MinusL,
    PlusL,
    MinusR,
    PlusR,
    LT,
    RT,
    Cusp,
    L,
    Int,
    RootL,
    RootR,
    Root,
}

impl SurfaceId {
    pub const FIRST_SERIES: [SurfaceId; 9] = [
        SurfaceId::MinusL,
        SurfaceId::PlusL,
        SurfaceId::MinusR,
        SurfaceId::PlusR,
        SurfaceId::LT,
        SurfaceId::RT,
        SurfaceId::Cusp,
        SurfaceId::L,
        SurfaceId::Int,
    ];

    pub fn is_root(&self) -> bool {
        matches!(self, SurfaceId::RootL | SurfaceId::RootR | SurfaceId::Root)
    }

    pub fn name(&self) -> &'static str {
        match self {
            SurfaceId::MinusL => "-l",
            SurfaceId::PlusL => "+l",
            SurfaceId::MinusR => "-r",
            SurfaceId::PlusR => "+r",
            SurfaceId::LT => "lt",
            SurfaceId::RT => "rt",
            SurfaceId::Cusp => "cusp",
            SurfaceId::L => "l",
            SurfaceId::Int => "int",
            SurfaceId::RootL => "rootl",
            SurfaceId::RootR => "rootr",
            SurfaceId::Root => "root",
        }
    }
}

impl fmt::Display for SurfaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SurfaceId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        use SurfaceId::*;
        Ok(match s {
            "-l" => MinusL,
            "+l" => PlusL,
            "-r" => MinusR,
            "+r" => PlusR,
            "lt" => LT,
            "rt" => RT,
            "cusp" => Cusp,
            "l" => L,
            "int" => Int,
            "rootl" => RootL,
            "rootr" => RootR,
            "root" => Root,
            _ => return Err(Error::Domain(format!("unknown surface {s:?}"))),
        })
    }
}

/// Families listed for a first-series surface (root surfaces map to their
/// single root family).
pub fn surface_families(s: SurfaceId) -> Vec<Family> {
    use Family::*;
    match s {
        SurfaceId::MinusL => vec![Y(1)],
        SurfaceId::PlusL => vec![Y(3), Y(7), Y(12), Z(9), Z(10)],
        SurfaceId::MinusR => vec![Z(4)],
        SurfaceId::PlusR => vec![Z(3), Z(6), Z(11)],
        SurfaceId::LT => vec![Y(5), Y(8)],
        SurfaceId::RT => vec![Z(2), Z(8)],
        SurfaceId::Cusp => vec![Y(6), Y(9)],
        SurfaceId::L => vec![Y(2), Y(13)],
        SurfaceId::Int => vec![Z(5)],
        SurfaceId::RootL => vec![Y(11)],
        SurfaceId::RootR => vec![Y(10)],
        SurfaceId::Root => vec![Z(1)],
    }
}
