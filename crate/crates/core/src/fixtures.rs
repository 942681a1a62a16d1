//! Versioned tabular data: the tables the verification is checked against.
//!
//! The TOML sources are embedded at build time; `Fixtures::load_dir` reads a
//! replacement set from disk.

use std::path::Path;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::caselab::{BForm, Column};
use crate::error::{Error, Result};
use crate::gkgraph::Table1Row;
use crate::Sign;

pub const SCHEMA_VERSION: u32 = 1;

const FILES: [&str; 5] = ["table1", "table2", "table3", "table4", "table_ks"];

const EMBEDDED: [&str; 5] = [
    include_str!("../fixtures/table1.toml"),
    include_str!("../fixtures/table2.toml"),
    include_str!("../fixtures/table3.toml"),
    include_str!("../fixtures/table4.toml"),
    include_str!("../fixtures/table_ks.toml"),
];

/// A product such as "11^3*41*31*61", kept as written.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Product {
    pub text: String,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub value: BigUint,
    /// Factors as written, merged by base.
    pub factors: Vec<(BigUint, u32)>,
}

impl Product {
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::Fixture(format!("cannot parse product {text:?}"));
        let mut factors: Vec<(BigUint, u32)> = Vec::new();
        for part in text.split(['*', '·']).map(str::trim) {
            let (base, exp) = match part.split_once('^') {
                Some((b, e)) => (b.trim(), e.trim().parse::<u32>().map_err(|_| bad())?),
                None => (part, 1),
            };
            let base: BigUint = base.parse().map_err(|_| bad())?;
            match factors.iter_mut().find(|(b, _)| *b == base) {
                Some(f) => f.1 += exp,
                None => factors.push((base, exp)),
            }
        }
        factors.sort();
        let value = factors.iter().map(|(b, e)| num_traits::pow(b.clone(), *e as usize)).product();
        Ok(Product { text: text.to_string(), value, factors })
    }
}

fn check_schema(name: &str, schema: u32) -> Result<()> {
    if schema != SCHEMA_VERSION {
        return Err(Error::Fixture(format!("{name}: schema {schema}, expected {SCHEMA_VERSION}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Deserialize)]
struct Table1File {
    schema: u32,
    rows: Vec<Table1Record>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize)]
pub struct Table1Record {
    pub id: String,
    pub group: String,
    pub conditions: Vec<String>,
    pub formulas: Vec<String>,
    /// The product reading of the L^τ_{r+1} cell, kept for audit.
    #[serde(default)]
    pub printed: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
struct Table2File {
    schema: u32,
    provenance: String,
    entries: Vec<Table2Record>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize)]
pub struct Table2Record {
    pub n: u32,
    pub column: String,
    /// Empty with no range when no m is admissible.
    #[serde(default)]
    pub values: Vec<u32>,
    #[serde(default)]
    pub range: Option<[u32; 2]>,
}

impl Table2Record {
    pub fn values(&self) -> Vec<u32> {
        match self.range {
            Some([lo, hi]) => (lo..=hi).collect(),
            None => self.values.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table2 {
    pub provenance: String,
    pub entries: Vec<(u32, Column, Table2Record)>,
}

impl Table2 {
    pub fn entry(&self, n: u32, column: Column) -> Option<&Table2Record> {
        self.entries.iter().find(|(m, c, _)| *m == n && *c == column).map(|(_, _, r)| r)
    }

    pub fn targets(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.entries.iter().map(|(n, _, _)| *n).collect();
        v.sort();
        v.dedup();
        v
    }
}

#[derive(Debug, Clone, Deserialize)]
struct Table3File {
    schema: u32,
    rows: Vec<Table3Raw>,
}

#[derive(Debug, Clone, Deserialize)]
struct Table3Raw {
    n: u32,
    m: u32,
    b: String,
    sigma: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table3Row {
    pub n: u32,
    pub m: u32,
    pub form: BForm,
    pub sigma: Vec<Product>,
}

impl Table3Row {
    pub fn values(&self) -> Vec<BigUint> {
        let mut v: Vec<BigUint> = self.sigma.iter().map(|p| p.value.clone()).collect();
        v.sort();
        v.dedup();
        v
    }
}

#[derive(Debug, Clone, Deserialize)]
struct Table4File {
    schema: u32,
    rows: Vec<Table4Raw>,
}

#[derive(Debug, Clone, Deserialize)]
struct Table4Raw {
    n: u32,
    eps: String,
    q: u64,
    n2: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table4Row {
    pub n: u32,
    pub eps: Sign,
    pub q: u64,
    pub n2: Product,
}

impl Table4Row {
    /// Row key such as "7-3" or "8+5".
    pub fn key(&self) -> String {
        format!("{}{}{}", self.n, self.eps.symbol(), self.q)
    }
}

#[derive(Debug, Clone, Deserialize)]
struct KsFile {
    schema: u32,
    rows: Vec<KsRaw>,
}

#[derive(Debug, Clone, Deserialize)]
struct KsRaw {
    row: String,
    dim: u32,
    u: u64,
    values: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KsRow {
    pub row: Table1Row,
    pub dim: u32,
    pub u: u64,
    pub values: Vec<Product>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fixtures {
    pub table1: Vec<Table1Record>,
    pub table2: Table2,
    pub table3: Vec<Table3Row>,
    pub table4: Vec<Table4Row>,
    pub table_ks: Vec<KsRow>,
}

fn parse_toml<T: serde::de::DeserializeOwned>(name: &str, text: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| Error::Fixture(format!("{name}: {e}")))
}

fn parse_sign(s: &str) -> Result<Sign> {
    match s {
        "+" => Ok(Sign::Plus),
        "-" | "−" => Ok(Sign::Minus),
        _ => Err(Error::Fixture(format!("bad sign {s:?}"))),
    }
}

impl Fixtures {
    pub fn embedded() -> Result<Self> {
        Self::from_sources(EMBEDDED)
    }

    /// Reads table1.toml, table2.toml, table3.toml, table4.toml and table_ks.toml from `dir`.
    pub fn load_dir(dir: &Path) -> Result<Self> {
        let mut sources = Vec::new();
        for name in FILES {
            let path = dir.join(format!("{name}.toml"));
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::Fixture(format!("{}: {e}", path.display())))?;
            sources.push(text);
        }
        Self::from_sources([0, 1, 2, 3, 4].map(|i| sources[i].as_str()))
    }

    fn from_sources(src: [&str; 5]) -> Result<Self> {
        let t1: Table1File = parse_toml("table1", src[0])?;
        check_schema("table1", t1.schema)?;
        for r in &t1.rows {
            Table1Row::parse(&r.id).map_err(|e| Error::Fixture(e.to_string()))?;
        }

        let t2: Table2File = parse_toml("table2", src[1])?;
        check_schema("table2", t2.schema)?;
        let entries = t2
            .entries
            .into_iter()
            .map(|r| {
                let c = Column::parse(&r.column).map_err(|e| Error::Fixture(e.to_string()))?;
                Ok((r.n, c, r))
            })
            .collect::<Result<Vec<_>>>()?;

        let t3: Table3File = parse_toml("table3", src[2])?;
        check_schema("table3", t3.schema)?;
        let table3 = t3
            .rows
            .into_iter()
            .map(|r| {
                Ok(Table3Row {
                    n: r.n,
                    m: r.m,
                    form: BForm::parse(&r.b).map_err(|e| Error::Fixture(e.to_string()))?,
                    sigma: r.sigma.iter().map(|s| Product::parse(s)).collect::<Result<_>>()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let t4: Table4File = parse_toml("table4", src[3])?;
        check_schema("table4", t4.schema)?;
        let table4 = t4
            .rows
            .into_iter()
            .map(|r| Ok(Table4Row { n: r.n, eps: parse_sign(&r.eps)?, q: r.q, n2: Product::parse(&r.n2)? }))
            .collect::<Result<Vec<_>>>()?;

        let ks: KsFile = parse_toml("table_ks", src[4])?;
        check_schema("table_ks", ks.schema)?;
        let table_ks = ks
            .rows
            .into_iter()
            .map(|r| {
                Ok(KsRow {
                    row: Table1Row::parse(&r.row).map_err(|e| Error::Fixture(e.to_string()))?,
                    dim: r.dim,
                    u: r.u,
                    values: r.values.iter().map(|s| Product::parse(s)).collect::<Result<_>>()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        Ok(Fixtures {
            table1: t1.rows,
            table2: Table2 { provenance: t2.provenance, entries },
            table3,
            table4,
            table_ks,
        })
    }

    pub fn table3_row(&self, n: u32, m: u32, form: BForm) -> Option<&Table3Row> {
        self.table3.iter().find(|r| r.n == n && r.m == m && r.form == form)
    }

    pub fn table4_row(&self, key: &str) -> Result<&Table4Row> {
        self.table4
            .iter()
            .find(|r| r.key() == key)
            .ok_or_else(|| Error::Unknown { kind: "table4 row", name: key.into() })
    }

    /// Largest n_2 value of the fixture rows.
    pub fn table4_max(&self) -> BigUint {
        self.table4.iter().map(|r| r.n2.value.clone()).max().unwrap_or_else(BigUint::one)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_loads() {
        let fx = Fixtures::embedded().unwrap();
        assert_eq!(fx.table1.len(), 17);
        assert_eq!(fx.table3.len(), 33);
        assert_eq!(fx.table4.len(), 42);
        assert_eq!(fx.table2.targets(), vec![7, 11, 13, 17, 19, 23]);
        assert!(fx.table2.provenance.contains("external classification data"));
        assert_eq!(fx.table4_row("7-3").unwrap().n2.value, BigUint::from(547u32));
    }

    #[test]
    fn products() {
        let p = Product::parse("11^3*41*31*61").unwrap();
        assert_eq!(p.value, BigUint::from(1331u64 * 41 * 31 * 61));
        assert_eq!(p.factors[0], (BigUint::from(11u32), 3));
        assert!(Product::parse("7*x").is_err());
    }
}
