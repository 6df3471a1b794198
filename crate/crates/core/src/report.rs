//! Deterministic rendering of reports as aligned text tables or JSON.

use serde::Serialize;

use crate::bicomplex::IdentityChecks;
use crate::error::Result;
use crate::extension::{Classification, CocycleVerdict, SubspaceCheck};
use crate::homology::{CohomologyReport, ComparisonVerdict};
use crate::presentation::ValidationReport;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Table,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "table" => Ok(Format::Table),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format {s:?}, expected table or json")),
        }
    }
}

/// A titled table; numeric-looking cells are right-aligned.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub title: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

fn numeric(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_digit() || c == '-' || c == '/')
}

impl Table {
    pub fn new(title: impl Into<String>, headers: &[&str]) -> Self {
        Table { title: title.into(), headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let n = self.headers.len();
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |cells: &[String]| -> String {
            let parts: Vec<String> = (0..n)
                .map(|i| {
                    let c = cells.get(i).map_or("", String::as_str);
                    if numeric(c) {
                        format!("{c:>w$}", w = widths[i])
                    } else {
                        format!("{c:<w$}", w = widths[i])
                    }
                })
                .collect();
            parts.join("  ").trim_end().to_string()
        };
        let mut out = String::new();
        if !self.title.is_empty() {
            out.push_str(&self.title);
            out.push('\n');
        }
        out.push_str(&line(&self.headers));
        out.push('\n');
        let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
        out.push_str(&rule.join("  "));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&line(row));
            out.push('\n');
        }
        out
    }
}

/// Reports that render as one or more tables.
pub trait Render: Serialize {
    fn tables(&self) -> Vec<Table>;
}

pub fn render<T: Render + ?Sized>(report: &T, format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report)?;
            s.push('\n');
            Ok(s)
        }
        Format::Table => Ok(report.tables().iter().map(Table::render).collect::<Vec<_>>().join("\n")),
    }
}

fn yes(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

impl Render for CohomologyReport {
    fn tables(&self) -> Vec<Table> {
        let mut t = Table::new(
            format!("{} over {}, N = {}", self.title, self.field, self.truncation),
            &["n", "dim C^n", "dim Z^n", "dim B^n", "dim H^n"],
        );
        for d in &self.degrees {
            t.push(vec![
                d.degree.to_string(),
                d.cochain_dim.to_string(),
                d.kernel_dim.to_string(),
                d.image_dim.to_string(),
                d.dim.to_string(),
            ]);
        }
        vec![t]
    }
}

impl Render for ComparisonVerdict {
    fn tables(&self) -> Vec<Table> {
        let mut t = Table::new(
            format!("alpha^n over {}, N = {}", self.field, self.truncation),
            &["n", "dim H_A", "dim H", "rank", "mono", "iso"],
        );
        for e in &self.entries {
            t.push(vec![
                e.degree.to_string(),
                e.source_dim.to_string(),
                e.target_dim.to_string(),
                e.rank.to_string(),
                yes(e.mono),
                yes(e.iso),
            ]);
        }
        vec![t]
    }
}

impl Render for ValidationReport {
    fn tables(&self) -> Vec<Table> {
        let title =
            if self.is_valid() { "valid".to_string() } else { format!("{} violation(s)", self.violations.len()) };
        let mut t = Table::new(title, &["identity", "indices"]);
        for v in &self.violations {
            t.push(vec![v.identity.clone(), format!("{:?}", v.indices)]);
        }
        vec![t]
    }
}

impl Render for CocycleVerdict {
    fn tables(&self) -> Vec<Table> {
        let title = format!("degree {}: {}", self.degree, if self.is_cocycle { "cocycle" } else { "not a cocycle" });
        let mut t = Table::new(title, &["identity", "indices"]);
        for v in &self.violations {
            t.push(vec![v.identity.clone(), format!("{:?}", v.indices)]);
        }
        vec![t]
    }
}

impl Render for Classification {
    fn tables(&self) -> Vec<Table> {
        let mut t = Table::new("extensions over F_2", &["quantity", "value"]);
        let rows = [
            ("search bits", self.search_bits.to_string()),
            ("|Z^2|", self.cocycles.to_string()),
            ("|B^2|", self.coboundaries.to_string()),
            ("|H^2|", self.h2_size.to_string()),
            ("dim H^2", self.h2_dim.to_string()),
            ("classes", self.classes.to_string()),
            ("classes = 2^dim H^2", yes(self.consistent())),
        ];
        for (k, v) in rows {
            t.push(vec![k.to_string(), v]);
        }
        vec![t]
    }
}

impl Render for [SubspaceCheck] {
    fn tables(&self) -> Vec<Table> {
        let mut t =
            Table::new("explicit formulas against matrices", &["space", "explicit", "matrix", "E in M", "M in E"]);
        for c in self {
            t.push(vec![
                c.what.clone(),
                c.explicit_dim.to_string(),
                c.matrix_dim.to_string(),
                yes(c.explicit_in_matrix),
                yes(c.matrix_in_explicit),
            ]);
        }
        vec![t]
    }
}

impl Render for IdentityChecks {
    fn tables(&self) -> Vec<Table> {
        let mut t = Table::new("bicomplex identities", &["identity", "bidegrees checked"]);
        t.push(vec!["d d = 0".into(), self.dd.to_string()]);
        t.push(vec!["delta delta = 0".into(), self.delta_delta.to_string()]);
        t.push(vec!["d delta + delta d = 0".into(), self.anticommute.to_string()]);
        vec![t]
    }
}
