use std::fmt::Write;

use heffter_core::{DocumentObject, SpaceDocument};

/// Squares as right-aligned grids; spaces as one block per line, grouped by class.
pub fn document(doc: &SpaceDocument) -> String {
    let mut out = String::new();
    match &doc.object {
        DocumentObject::Square(s) => {
            let _ = write!(out, "{s}");
        }
        DocumentObject::Heffter(h) => {
            let shift = if h.is_shiftable() { ", shiftable" } else { "" };
            let _ = writeln!(
                out,
                "Heffter space ({}, {}; {}){shift}",
                h.v(),
                h.k(),
                h.r()
            );
            for (i, class) in h.classes().iter().enumerate() {
                let _ = writeln!(out, "class {i}");
                for b in class.blocks() {
                    let _ = writeln!(out, "  {b}");
                }
            }
        }
        DocumentObject::Plain(p) => {
            let _ = writeln!(out, "space ({}, {}; {})", p.w(), p.n(), p.r());
            for (i, class) in p.label_classes().iter().enumerate() {
                let _ = writeln!(out, "class {i}");
                for b in class {
                    let _ = writeln!(out, "  {{{}}}", b.join(", "));
                }
            }
        }
    }
    out
}
