//! Embedded tables: orbit codes per subregion, the chamber adjacency faces
//! and the graph-to-class grouping. `KOVTOP_DATA` may point to a directory
//! holding edited copies of the same files.

use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::family::Family;
use crate::separating::RegionId;

pub const CODES_FILE: &str = "codes.tsv";
pub const FACES_FILE: &str = "faces.tsv";
pub const CLASSES_FILE: &str = "classes.tsv";

const CODES_SRC: &str = include_str!("../data/codes.tsv");
const FACES_SRC: &str = include_str!("../data/faces.tsv");
const CLASSES_SRC: &str = include_str!("../data/classes.tsv");

pub const CODES_SHA256: &str = "ba171e30436f1edc706b371ecede2ea0e2da71b35e00fa315f0186f6bb5b3685";
pub const FACES_SHA256: &str = "3ffaf6be5549a823255a5c44007a779b4d6b8b4d4df84da1daecd5bc67cc01b9";
pub const CLASSES_SHA256: &str = "bd529d988032e9ad2671a9953147f19ded855eb1188f03ba3176c3267f8d69fb";

/// Tail shared by all region II codes and left out of their rows.
pub const REGION_II_TAIL: &str = "6 z2 7 z1";

/// One row of the code tables.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeRow {
    pub region: RegionId,
    pub families: Vec<Family>,
    pub graphs: Vec<u8>,
    /// True when the region II tail was appended at load time.
    pub tail_restored: bool,
}

/// A chamber of nonsingular triples; `None` is the empty set.
pub type Chamber = Option<u8>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceLabel {
    Family(Family),
    /// Singular-orbit face whose fibre is this many circles.
    Circles(u8),
}

impl std::fmt::Display for FaceLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FaceLabel::Family(x) => write!(f, "{x}"),
            FaceLabel::Circles(n) => write!(f, "S1x{n}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Face {
    pub id: u8,
    pub label: FaceLabel,
    /// Chamber on the side of larger h.
    pub above: Chamber,
    pub below: Chamber,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassRow {
    pub class: u8,
    pub graphs: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChecksumStatus {
    pub file: &'static str,
    pub expected: &'static str,
    pub actual: String,
}

impl ChecksumStatus {
    pub fn ok(&self) -> bool {
        self.expected == self.actual
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DataSource {
    Embedded,
    Directory(PathBuf),
}

#[derive(Debug, Clone)]
pub struct Tables {
    pub codes: Vec<CodeRow>,
    pub faces: Vec<Face>,
    pub classes: Vec<ClassRow>,
    pub checksums: Vec<ChecksumStatus>,
    pub source: DataSource,
}

pub fn sha256_hex(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn content_lines(src: &str) -> impl Iterator<Item = (usize, &str)> {
    src.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_code_row(lineno: usize, line: &str) -> Result<CodeRow> {
    let bad = |msg: &str| Error::DataIntegrity(format!("{CODES_FILE}:{lineno}: {msg}"));
    let (label, body) = line.split_once('\t').ok_or_else(|| bad("missing tab"))?;
    let region: RegionId = label.trim().parse().map_err(|_| bad("bad subregion label"))?;
    let mut tokens: Vec<String> = body.split_whitespace().map(str::to_owned).collect();
    let mut tail_restored = false;
    if region.major == crate::separating::Major::II {
        let tail: Vec<&str> = REGION_II_TAIL.split_whitespace().collect();
        if tokens.iter().any(|t| t == "z2" || t == "z1") {
            return Err(bad("region II row already carries part of the common tail"));
        }
        tokens.extend(tail.iter().map(|t| t.to_string()));
        tail_restored = true;
    }
    if tokens.len().is_multiple_of(2) {
        return Err(bad("code must start and end with a family"));
    }
    let mut families = Vec::new();
    let mut graphs = Vec::new();
    for (i, t) in tokens.iter().enumerate() {
        if i % 2 == 0 {
            families.push(t.parse::<Family>().map_err(|_| bad(&format!("bad family {t}")))?);
        } else {
            let g: u8 = t.parse().map_err(|_| bad(&format!("bad graph number {t}")))?;
            if !(1..=32).contains(&g) {
                return Err(bad(&format!("graph number {g} out of range")));
            }
            graphs.push(g);
        }
    }
    Ok(CodeRow {
        region,
        families,
        graphs,
        tail_restored,
    })
}

fn parse_chamber(t: &str) -> Option<Chamber> {
    if t == "E" {
        return Some(None);
    }
    let n: u8 = t.parse().ok()?;
    (1..=32).contains(&n).then_some(Some(n))
}

fn parse_face(lineno: usize, line: &str) -> Result<Face> {
    let bad = |msg: &str| Error::DataIntegrity(format!("{FACES_FILE}:{lineno}: {msg}"));
    let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
    if cols.len() != 4 {
        return Err(bad("expected 4 columns"));
    }
    let id: u8 = cols[0]
        .strip_prefix('p')
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| bad("bad face id"))?;
    let label = match cols[1] {
        "S1" => FaceLabel::Circles(1),
        "S2" => FaceLabel::Circles(2),
        t => FaceLabel::Family(t.parse().map_err(|_| bad("bad face label"))?),
    };
    let above = parse_chamber(cols[2]).ok_or_else(|| bad("bad chamber above"))?;
    let below = parse_chamber(cols[3]).ok_or_else(|| bad("bad chamber below"))?;
    if above == below {
        return Err(bad("a face must separate two different chambers"));
    }
    Ok(Face {
        id,
        label,
        above,
        below,
    })
}

fn parse_class(lineno: usize, line: &str) -> Result<ClassRow> {
    let bad = |msg: &str| Error::DataIntegrity(format!("{CLASSES_FILE}:{lineno}: {msg}"));
    let (label, body) = line.split_once('\t').ok_or_else(|| bad("missing tab"))?;
    let class: u8 = label
        .trim()
        .strip_prefix('L')
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| bad("bad class label"))?;
    let graphs = body
        .split_whitespace()
        .map(|t| t.parse::<u8>().map_err(|_| bad("bad graph number")))
        .collect::<Result<Vec<_>>>()?;
    Ok(ClassRow { class, graphs })
}

impl Tables {
    /// Parse the three sources. With `strict`, a checksum mismatch is an error.
    pub fn parse(codes: &str, faces: &str, classes: &str, source: DataSource, strict: bool) -> Result<Tables> {
        let checksums = vec![
            ChecksumStatus {
                file: CODES_FILE,
                expected: CODES_SHA256,
                actual: sha256_hex(codes),
            },
            ChecksumStatus {
                file: FACES_FILE,
                expected: FACES_SHA256,
                actual: sha256_hex(faces),
            },
            ChecksumStatus {
                file: CLASSES_FILE,
                expected: CLASSES_SHA256,
                actual: sha256_hex(classes),
            },
        ];
        if strict {
            if let Some(bad) = checksums.iter().find(|c| !c.ok()) {
                return Err(Error::DataIntegrity(format!(
                    "checksum mismatch for {}: {}",
                    bad.file, bad.actual
                )));
            }
        }
        Ok(Tables {
            codes: content_lines(codes)
                .map(|(n, l)| parse_code_row(n, l))
                .collect::<Result<_>>()?,
            faces: content_lines(faces)
                .map(|(n, l)| parse_face(n, l))
                .collect::<Result<_>>()?,
            classes: content_lines(classes)
                .map(|(n, l)| parse_class(n, l))
                .collect::<Result<_>>()?,
            checksums,
            source,
        })
    }

    pub fn embedded() -> Result<Tables> {
        Tables::parse(CODES_SRC, FACES_SRC, CLASSES_SRC, DataSource::Embedded, true)
    }

    /// Load edited tables from a directory; checksum differences are kept as
    /// notes in `checksums` rather than rejected.
    pub fn from_dir(dir: &Path) -> Result<Tables> {
        let read = |name: &str| {
            std::fs::read_to_string(dir.join(name))
                .map_err(|e| Error::DataIntegrity(format!("{}: {e}", dir.join(name).display())))
        };
        Tables::parse(
            &read(CODES_FILE)?,
            &read(FACES_FILE)?,
            &read(CLASSES_FILE)?,
            DataSource::Directory(dir.to_path_buf()),
            false,
        )
    }

    pub fn code_rows(&self, major: crate::separating::Major) -> impl Iterator<Item = &CodeRow> {
        self.codes.iter().filter(move |r| r.region.major == major)
    }

    pub fn class_of_graph(&self, graph: u8) -> Option<u8> {
        self.classes
            .iter()
            .find(|c| c.graphs.contains(&graph))
            .map(|c| c.class)
    }
}

static TABLES: OnceLock<Result<Tables>> = OnceLock::new();

/// Process-wide tables, loaded once (from `KOVTOP_DATA` when set).
pub fn tables() -> Result<&'static Tables> {
    TABLES
        .get_or_init(|| match std::env::var_os("KOVTOP_DATA") {
            Some(dir) if !dir.is_empty() => Tables::from_dir(Path::new(&dir)),
            _ => Tables::embedded(),
        })
        .as_ref()
        .map_err(Clone::clone)
}

/// Raw embedded sources, for writing a starting copy of the tables.
pub fn embedded_sources() -> [(&'static str, &'static str); 3] {
    [
        (CODES_FILE, CODES_SRC),
        (FACES_FILE, FACES_SRC),
        (CLASSES_FILE, CLASSES_SRC),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_checksums_match() {
        let t = Tables::embedded().unwrap();
        assert!(t.checksums.iter().all(ChecksumStatus::ok));
        assert_eq!(t.codes.len(), 66);
        assert_eq!(t.faces.len(), 66);
        assert_eq!(t.classes.len(), 27);
    }

    #[test]
    fn region_two_tail_restored() {
        let t = Tables::embedded().unwrap();
        let rows: Vec<_> = t.code_rows(crate::separating::Major::II).collect();
        assert_eq!(rows.len(), 15);
        for r in rows {
            assert!(r.tail_restored);
            assert_eq!(r.families.last(), Some(&Family::Z(1)));
            assert_eq!(&r.graphs[r.graphs.len() - 2..], &[6, 7]);
        }
    }

    #[test]
    fn tampered_source_rejected_in_strict_mode() {
        let codes = CODES_SRC.replace("VIII\ty1 1 z4 13", "VIII\ty1 1 z4 12");
        let err = Tables::parse(&codes, FACES_SRC, CLASSES_SRC, DataSource::Embedded, true);
        assert!(matches!(err, Err(Error::DataIntegrity(_))));
        let lax = Tables::parse(&codes, FACES_SRC, CLASSES_SRC, DataSource::Embedded, false).unwrap();
        assert!(!lax.checksums[0].ok());
    }

    #[test]
    fn malformed_rows_rejected() {
        assert!(parse_code_row(1, "VIII\ty1 1 z4 13").is_err());
        assert!(parse_code_row(1, "VIII\ty1 40 z4").is_err());
        assert!(parse_code_row(1, "II.1\ty1 1 z2").is_err());
        assert!(parse_face(1, "p1\ty1\t3\t3").is_err());
        assert!(parse_face(1, "p1\tq1\t3\t4").is_err());
    }
}
