//! Orbit codes, isoenergy classification and the graph/class census.

use std::collections::BTreeSet;
use std::fmt;

use crate::bifurcation::{family_points, SingularPoint};
use crate::data::{self, CodeRow, Tables};
use crate::error::{Error, Result};
use crate::family::Family;
use crate::model::ModelParams;
use crate::separating::{self, RegionId, AXIS_TOL};

/// Distance in h below which an energy level counts as singular.
pub const SINGULAR_H_TOL: f64 = 1e-9;

pub const GRAPH_COUNT: usize = 32;
pub const CLASS_COUNT: usize = 27;

/// Alternating sequence family, graph, family, ..., family.
#[derive(Debug, Clone, PartialEq)]
pub struct Code {
    pub subregion: RegionId,
    pub families: Vec<Family>,
    pub graphs: Vec<u8>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeEntry {
    Family(Family),
    Graph(u8),
}

impl Code {
    pub fn from_row(row: &CodeRow) -> Code {
        Code {
            subregion: row.region.clone(),
            families: row.families.clone(),
            graphs: row.graphs.clone(),
        }
    }

    pub fn entries(&self) -> Vec<CodeEntry> {
        let mut out = Vec::with_capacity(self.families.len() + self.graphs.len());
        for (i, f) in self.families.iter().enumerate() {
            out.push(CodeEntry::Family(*f));
            if let Some(g) = self.graphs.get(i) {
                out.push(CodeEntry::Graph(*g));
            }
        }
        out
    }

    /// Strict alternation, valid tags, graph numbers in 1..=32.
    pub fn is_well_formed(&self) -> bool {
        self.families.len() == self.graphs.len() + 1
            && self.families.iter().all(Family::is_valid)
            && self.graphs.iter().all(|g| (1..=GRAPH_COUNT as u8).contains(g))
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries()
            .iter()
            .map(|e| match e {
                CodeEntry::Family(x) => x.to_string(),
                CodeEntry::Graph(g) => g.to_string(),
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Code of an interior orbit. The row is looked up by the subregion label,
/// then the family order is recomputed from the analytic abscissas and must
/// agree with it.
pub fn code_for_orbit(a: f64, b: f64, m: &ModelParams) -> Result<Code> {
    Ok(code_with_points(a, b, m)?.0)
}

/// The code together with the singular points, sorted by h.
pub fn code_with_points(a: f64, b: f64, m: &ModelParams) -> Result<(Code, Vec<SingularPoint>)> {
    let label = separating::subregion(a, b, m)?;
    let t = data::tables()?;
    let row = t
        .codes
        .iter()
        .find(|r| r.region == label)
        .ok_or_else(|| Error::DataIntegrity(format!("no code row labelled {label}")))?;
    let (a2, b2) = if b.abs() < AXIS_TOL { (a, 0.0) } else { (a, b.abs()) };
    let points = family_points(&row.families, a2, b2, m)?;
    let order: Vec<Family> = points.iter().map(|p| p.family).collect();
    if order != row.families {
        let seq: Vec<String> = order.iter().map(|f| f.to_string()).collect();
        return Err(Error::NoMatch(format!(
            "computed order {} disagrees with row {label}",
            seq.join(" ")
        )));
    }
    Ok((Code::from_row(row), points))
}

/// Fomenko graph number and Liouville class of an isoenergy surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IsoenergyClass {
    pub graph: u8,
    pub liouville_class: u8,
}

impl fmt::Display for IsoenergyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "graph {}, class L{}", self.graph, self.liouville_class)
    }
}

pub fn isoenergy_class(a: f64, b: f64, h: f64, m: &ModelParams) -> Result<IsoenergyClass> {
    if !h.is_finite() {
        return Err(Error::Domain(format!("h must be finite, got {h}")));
    }
    let (code, points) = code_with_points(a, b, m)?;
    if let Some(p) = points.iter().find(|p| (h - p.h).abs() < SINGULAR_H_TOL) {
        return Err(Error::SingularH {
            family: p.family.to_string(),
            h: p.h,
        });
    }
    let first = points.first().map(|p| p.h).unwrap_or(f64::INFINITY);
    let last = points.last().map(|p| p.h).unwrap_or(f64::NEG_INFINITY);
    if h < first || h >= last {
        return Err(Error::EmptyQ { h });
    }
    // half-open [h_i, h_{i+1})
    let i = points.iter().rposition(|p| p.h <= h).expect("h above the first point");
    let graph = code.graphs[i];
    let liouville_class = data::tables()?
        .class_of_graph(graph)
        .ok_or_else(|| Error::DataIntegrity(format!("graph {graph} has no class")))?;
    Ok(IsoenergyClass {
        graph,
        liouville_class,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Census {
    pub graphs: usize,
    pub classes: usize,
    /// Class number and its graphs, ascending.
    pub by_class: Vec<(u8, Vec<u8>)>,
    pub code_rows: usize,
}

/// Counts graphs and classes in the tables and checks that the classes
/// partition the graphs 1..=32 used by the codes.
pub fn class_census(_m: &ModelParams) -> Result<Census> {
    census_of(data::tables()?)
}

pub fn census_of(t: &Tables) -> Result<Census> {
    let mut in_codes = BTreeSet::new();
    for r in &t.codes {
        let code = Code::from_row(r);
        if !code.is_well_formed() {
            return Err(Error::DataIntegrity(format!("code row {} is malformed", r.region)));
        }
        in_codes.extend(r.graphs.iter().copied());
    }
    let mut in_classes = BTreeSet::new();
    let mut by_class = Vec::new();
    let mut class_ids = BTreeSet::new();
    for c in &t.classes {
        if !class_ids.insert(c.class) {
            return Err(Error::DataIntegrity(format!("class L{} listed twice", c.class)));
        }
        for g in &c.graphs {
            if !in_classes.insert(*g) {
                return Err(Error::DataIntegrity(format!("graph {g} is in two classes")));
            }
        }
        let mut gs = c.graphs.clone();
        gs.sort_unstable();
        by_class.push((c.class, gs));
    }
    by_class.sort();
    let all: BTreeSet<u8> = (1..=GRAPH_COUNT as u8).collect();
    if in_codes != all {
        let missing: Vec<_> = all.difference(&in_codes).collect();
        return Err(Error::DataIntegrity(format!("graphs missing from codes: {missing:?}")));
    }
    if in_classes != all {
        return Err(Error::DataIntegrity(
            "classes do not partition graphs 1..32".into(),
        ));
    }
    if class_ids.len() != CLASS_COUNT {
        return Err(Error::DataIntegrity(format!(
            "expected {CLASS_COUNT} classes, found {}",
            class_ids.len()
        )));
    }
    Ok(Census {
        graphs: in_codes.len(),
        classes: class_ids.len(),
        by_class,
        code_rows: t.codes.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_round_trip_of_a_row() {
        let t = data::tables().unwrap();
        let row = t.codes.iter().find(|r| r.region.to_string() == "VIII").unwrap();
        let code = Code::from_row(row);
        assert_eq!(code.to_string(), "y1 1 z4 13 z11 11 z9");
        assert!(code.is_well_formed());
    }

    #[test]
    fn census_counts() {
        let c = class_census(&ModelParams::default()).unwrap();
        assert_eq!((c.graphs, c.classes, c.code_rows), (32, 27, 66));
    }

    #[test]
    fn below_minimum_is_empty() {
        let m = ModelParams::default();
        let (a, b) = separating::sample_orbit("VIII", &m).unwrap();
        let (_, pts) = code_with_points(a, b, &m).unwrap();
        let err = isoenergy_class(a, b, pts[0].h - 1.0, &m).unwrap_err();
        assert!(matches!(err, Error::EmptyQ { .. }));
        let err = isoenergy_class(a, b, pts[1].h, &m).unwrap_err();
        assert!(matches!(err, Error::SingularH { .. }));
    }
}
