//! Versioned, self-describing text documents for spaces and squares.
//!
//! A document is a JSON object with a fixed key order:
//!
//! ```text
//! {
//!   "schema_version": "1",
//!   "kind": "heffter_space",
//!   "parameters": {"v": 4, "k": 4, "r": 1},
//!   "shiftable": true,
//!   "provenance": "search:4,4,1",
//!   "payload": [
//!     [
//!       [-3, -2, 1, 4]
//!     ]
//!   ]
//! }
//! ```
//!
//! `plain_space` documents use parameters `w, n, r` and omit `shiftable`;
//! their points are written as `0..w-1` in canonical label order. `square`
//! documents use parameter `n` and a row-major payload of `n` rows.
//!
//! [`SpaceDocument::to_canonical_string`] is byte-exact: blocks sorted,
//! blocks within a class sorted, one block or row per line. Parsing accepts
//! any JSON layout and checks the payload shape against the parameters;
//! whether the object satisfies its definition is left to
//! [`SpaceDocument::validate`].

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Deserialize;
use serde_json::Value;

use crate::magic::{is_margossian, SquareArray};
use crate::report::Report;
use crate::space::{HeffterSpace, PlainSpace};
use crate::{Error, Result};

pub const SCHEMA_VERSION: &str = "1";

/// Provenance tag of documents transcribed from published tables.
pub const PAPER_FIXTURE: &str = "paper-fixture";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DocumentKind {
    HeffterSpace,
    PlainSpace,
    Square,
}

impl DocumentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DocumentKind::HeffterSpace => "heffter_space",
            DocumentKind::PlainSpace => "plain_space",
            DocumentKind::Square => "square",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "heffter_space" => Ok(DocumentKind::HeffterSpace),
            "plain_space" => Ok(DocumentKind::PlainSpace),
            "square" => Ok(DocumentKind::Square),
            other => Err(Error::Document(format!("unknown kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DocumentObject {
    Heffter(HeffterSpace),
    Plain(PlainSpace),
    Square(SquareArray),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceDocument {
    pub provenance: String,
    pub object: DocumentObject,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    schema_version: String,
    kind: String,
    parameters: BTreeMap<String, u64>,
    #[serde(default)]
    shiftable: Option<bool>,
    provenance: String,
    payload: Value,
}

fn quote(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn int_list<T: ToString>(xs: &[T]) -> String {
    let items: Vec<String> = xs.iter().map(ToString::to_string).collect();
    format!("[{}]", items.join(", "))
}

fn write_classes<T: ToString>(out: &mut String, classes: &[Vec<Vec<T>>]) {
    out.push_str("  \"payload\": [\n");
    for (c, class) in classes.iter().enumerate() {
        out.push_str("    [\n");
        for (b, block) in class.iter().enumerate() {
            let sep = if b + 1 < class.len() { "," } else { "" };
            let _ = writeln!(out, "      {}{sep}", int_list(block));
        }
        let sep = if c + 1 < classes.len() { "," } else { "" };
        let _ = writeln!(out, "    ]{sep}");
    }
    out.push_str("  ]\n");
}

impl SpaceDocument {
    pub fn heffter(space: HeffterSpace, provenance: impl Into<String>) -> Self {
        Self {
            provenance: provenance.into(),
            object: DocumentObject::Heffter(space),
        }
    }

    pub fn plain(space: PlainSpace, provenance: impl Into<String>) -> Self {
        Self {
            provenance: provenance.into(),
            object: DocumentObject::Plain(space),
        }
    }

    pub fn square(square: SquareArray, provenance: impl Into<String>) -> Self {
        Self {
            provenance: provenance.into(),
            object: DocumentObject::Square(square),
        }
    }

    pub fn kind(&self) -> DocumentKind {
        match self.object {
            DocumentObject::Heffter(_) => DocumentKind::HeffterSpace,
            DocumentObject::Plain(_) => DocumentKind::PlainSpace,
            DocumentObject::Square(_) => DocumentKind::Square,
        }
    }

    pub fn to_canonical_string(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n");
        let _ = writeln!(out, "  \"schema_version\": {},", quote(SCHEMA_VERSION));
        let _ = writeln!(out, "  \"kind\": {},", quote(self.kind().as_str()));
        match &self.object {
            DocumentObject::Heffter(h) => {
                let _ = writeln!(
                    out,
                    "  \"parameters\": {{\"v\": {}, \"k\": {}, \"r\": {}}},",
                    h.v(),
                    h.k(),
                    h.r()
                );
                let _ = writeln!(out, "  \"shiftable\": {},", h.is_shiftable());
                let _ = writeln!(out, "  \"provenance\": {},", quote(&self.provenance));
                write_classes(&mut out, &h.to_raw());
            }
            DocumentObject::Plain(p) => {
                let _ = writeln!(
                    out,
                    "  \"parameters\": {{\"w\": {}, \"n\": {}, \"r\": {}}},",
                    p.w(),
                    p.n(),
                    p.r()
                );
                let _ = writeln!(out, "  \"provenance\": {},", quote(&self.provenance));
                write_classes(&mut out, p.index_classes());
            }
            DocumentObject::Square(s) => {
                let _ = writeln!(out, "  \"parameters\": {{\"n\": {}}},", s.n());
                let _ = writeln!(out, "  \"provenance\": {},", quote(&self.provenance));
                out.push_str("  \"payload\": [\n");
                for i in 0..s.n() {
                    let sep = if i + 1 < s.n() { "," } else { "" };
                    let _ = writeln!(out, "    {}{sep}", int_list(s.row(i)));
                }
                out.push_str("  ]\n");
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawDocument =
            serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
        if raw.schema_version != SCHEMA_VERSION {
            return Err(Error::Document(format!(
                "unsupported schema_version {:?}",
                raw.schema_version
            )));
        }
        let kind = DocumentKind::parse(&raw.kind)?;
        let param = |name: &str| -> Result<usize> {
            raw.parameters
                .get(name)
                .map(|&x| x as usize)
                .ok_or_else(|| Error::Document(format!("missing parameter {name:?}")))
        };
        let expect_keys = |keys: &[&str]| -> Result<()> {
            let got: Vec<&str> = raw.parameters.keys().map(String::as_str).collect();
            let mut want = keys.to_vec();
            want.sort_unstable();
            if got != want {
                return Err(Error::Document(format!(
                    "parameters must be {keys:?}, got {got:?}"
                )));
            }
            Ok(())
        };
        let object = match kind {
            DocumentKind::HeffterSpace => {
                expect_keys(&["v", "k", "r"])?;
                let (v, k, r) = (param("v")?, param("k")?, param("r")?);
                let shiftable = raw
                    .shiftable
                    .ok_or_else(|| Error::Document("heffter_space needs \"shiftable\"".into()))?;
                let classes: Vec<Vec<Vec<i64>>> = serde_json::from_value(raw.payload)
                    .map_err(|e| Error::Document(format!("payload: {e}")))?;
                if classes.len() != r {
                    return Err(Error::Document(format!(
                        "declared r = {r}, payload has {} classes",
                        classes.len()
                    )));
                }
                let space = HeffterSpace::from_raw(v, k, classes, shiftable)
                    .map_err(|e| Error::Document(e.to_string()))?;
                DocumentObject::Heffter(space)
            }
            DocumentKind::PlainSpace => {
                expect_keys(&["w", "n", "r"])?;
                if raw.shiftable.is_some() {
                    return Err(Error::Document(
                        "plain_space has no \"shiftable\" field".into(),
                    ));
                }
                let (w, n, r) = (param("w")?, param("n")?, param("r")?);
                let classes: Vec<Vec<Vec<usize>>> = serde_json::from_value(raw.payload)
                    .map_err(|e| Error::Document(format!("payload: {e}")))?;
                if classes.len() != r {
                    return Err(Error::Document(format!(
                        "declared r = {r}, payload has {} classes",
                        classes.len()
                    )));
                }
                if let Some(&p) = classes.iter().flatten().flatten().find(|&&p| p >= w) {
                    return Err(Error::Document(format!("point {p} outside [0, {w})")));
                }
                let space = PlainSpace::from_indices(w, n, classes)
                    .map_err(|e| Error::Document(e.to_string()))?;
                DocumentObject::Plain(space)
            }
            DocumentKind::Square => {
                expect_keys(&["n"])?;
                if raw.shiftable.is_some() {
                    return Err(Error::Document("square has no \"shiftable\" field".into()));
                }
                let n = param("n")?;
                let rows: Vec<Vec<i64>> = serde_json::from_value(raw.payload)
                    .map_err(|e| Error::Document(format!("payload: {e}")))?;
                if rows.len() != n {
                    return Err(Error::Document(format!(
                        "declared n = {n}, payload has {} rows",
                        rows.len()
                    )));
                }
                DocumentObject::Square(
                    SquareArray::new(rows).map_err(|e| Error::Document(e.to_string()))?,
                )
            }
        };
        Ok(Self {
            provenance: raw.provenance,
            object,
        })
    }

    /// Run the validator matching the document kind. Squares are checked as
    /// Margossian squares; pass `require_shiftable` for Heffter spaces.
    pub fn validate(&self, require_shiftable: bool) -> Report {
        match &self.object {
            DocumentObject::Heffter(h) => h.validate(require_shiftable),
            DocumentObject::Plain(p) => p.validate(),
            DocumentObject::Square(s) => is_margossian(s),
        }
    }

    pub fn into_heffter(self) -> Result<HeffterSpace> {
        match self.object {
            DocumentObject::Heffter(h) => Ok(h),
            _ => Err(Error::Document(format!(
                "expected heffter_space, got {}",
                self.kind().as_str()
            ))),
        }
    }

    pub fn into_plain(self) -> Result<PlainSpace> {
        match self.object {
            DocumentObject::Plain(p) => Ok(p),
            _ => Err(Error::Document(format!(
                "expected plain_space, got {}",
                self.kind().as_str()
            ))),
        }
    }

    pub fn into_square(self) -> Result<SquareArray> {
        match self.object {
            DocumentObject::Square(s) => Ok(s),
            _ => Err(Error::Document(format!(
                "expected square, got {}",
                self.kind().as_str()
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compose::{plain_space_3, trivial_space};
    use crate::fixtures;
    use proptest::prelude::*;

    #[test]
    fn fixture_files_are_canonical() {
        for (name, text) in fixtures::ALL {
            let doc = SpaceDocument::parse(text).unwrap();
            assert_eq!(doc.provenance, PAPER_FIXTURE, "{name}");
            assert_eq!(
                &doc.to_canonical_string(),
                text,
                "{name} is not in canonical form"
            );
        }
    }

    #[test]
    fn small_document_layout() {
        let h = HeffterSpace::from_raw(4, 4, vec![vec![vec![1, 4, -2, -3]]], true).unwrap();
        let text = SpaceDocument::heffter(h, "search:4,4,1").to_canonical_string();
        let expected = "{\n  \"schema_version\": \"1\",\n  \"kind\": \"heffter_space\",\n  \"parameters\": {\"v\": 4, \"k\": 4, \"r\": 1},\n  \"shiftable\": true,\n  \"provenance\": \"search:4,4,1\",\n  \"payload\": [\n    [\n      [-3, -2, 1, 4]\n    ]\n  ]\n}\n";
        assert_eq!(text, expected);
    }

    #[test]
    fn parse_rejects_malformed() {
        let good = SpaceDocument::square(fixtures::margossian_4(), "x").to_canonical_string();
        assert!(SpaceDocument::parse(&good).is_ok());
        for bad in [
            good.replace("\"1\"", "\"2\""),
            good.replace("\"square\"", "\"cube\""),
            good.replace("\"n\": 4", "\"n\": 5"),
            good.replace("\"n\": 4", "\"m\": 4"),
            good.replace("[11, 2, 7, 14]", "[11, 2, 7]"),
            good.replace("[11, 2, 7, 14]", "[11, 2, 7, 1]"),
            "not json".to_string(),
        ] {
            assert!(
                matches!(SpaceDocument::parse(&bad), Err(Error::Document(_))),
                "{bad}"
            );
        }
        let plain = SpaceDocument::plain(trivial_space(2, 1).unwrap(), "x").to_canonical_string();
        assert!(SpaceDocument::parse(&plain.replace("[1]", "[2]")).is_err());
    }

    #[test]
    fn invalid_but_well_formed_documents_parse() {
        let text = fixtures::ALL[0]
            .1
            .replacen("[-18, -1, 2, 17]", "[-18, 1, 2, 17]", 1);
        let doc = SpaceDocument::parse(&text).unwrap();
        assert!(!doc.validate(true).passed());
    }

    #[test]
    fn plain_documents_round_trip() {
        for (m, n) in [(1, 1), (3, 2), (4, 4), (7, 3)] {
            let doc = SpaceDocument::plain(plain_space_3(m, n).unwrap(), format!("plain:{m},{n}"));
            let back = SpaceDocument::parse(&doc.to_canonical_string()).unwrap();
            assert_eq!(back, doc);
        }
    }

    proptest! {
        #[test]
        fn squares_round_trip(n in 1usize..7, seed in any::<u64>(), prov in "[a-z:,0-9 \"\\\\]{0,12}") {
            let mut entries: Vec<i64> = (0..(n * n) as i64).map(|x| x - (seed % 50) as i64).collect();
            let len = entries.len();
            entries.rotate_left((seed as usize) % len);
            let sq = SquareArray::from_row_major(n, entries).unwrap();
            let doc = SpaceDocument::square(sq, prov);
            let text = doc.to_canonical_string();
            let back = SpaceDocument::parse(&text).unwrap();
            prop_assert_eq!(&back, &doc);
            prop_assert_eq!(back.to_canonical_string(), text);
        }

        #[test]
        fn heffter_documents_round_trip(mask in any::<u32>(), shiftable in any::<bool>()) {
            // Arbitrary (valid or not) spaces built from sign patterns on [1, 8].
            let pts: Vec<i64> = (1..=8).map(|x| if mask >> x & 1 == 1 { -x } else { x }).collect();
            let classes = vec![
                vec![pts[0..4].to_vec(), pts[4..8].to_vec()],
                vec![vec![pts[0], pts[4], pts[1], pts[5]], vec![pts[2], pts[6], pts[3], pts[7]]],
            ];
            let h = HeffterSpace::from_raw(8, 4, classes, shiftable).unwrap();
            let doc = SpaceDocument::heffter(h, "prop");
            let back = SpaceDocument::parse(&doc.to_canonical_string()).unwrap();
            prop_assert_eq!(back, doc);
        }
    }
}
