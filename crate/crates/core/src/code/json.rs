//! JSON export/import of a [`CodeDefinition`].
//!
//! ```text
//! {
//!   "schema_version": 1,
//!   "reduction_polynomial": "11d",
//!   "spec": { "family": "unilrc", "n": .., "k": .., "r": .., "z": .., "alpha": .., "g": .., "l": .., "d": .., "f": .. },
//!   "roles": ["data", ..., "global", ..., "local", ...],
//!   "groups": [ { "blocks": [0, 1, ..], "roles": ["data", .., "local"] }, ... ],
//!   "eval_points": ["01", "02", ...],
//!   "generator": ["0100..", ...]          // n rows of k bytes, lowercase hex
//! }
//! ```
//!
//! Block indices: data `0..k`, globals `k..k+g`, locals `k+g..n`.

use serde::{Deserialize, Serialize};

use super::{CodeDefinition, CodeSpec, GroupLayout, Role};
use crate::error::{Error, Result};
use crate::gf::{Gf, POLYNOMIAL};
use crate::matrix::GfMatrix;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct GroupJson {
    blocks: Vec<usize>,
    roles: Vec<Role>,
}

#[derive(Serialize, Deserialize)]
struct CodeJson {
    schema_version: u32,
    reduction_polynomial: String,
    spec: CodeSpec,
    roles: Vec<Role>,
    groups: Vec<GroupJson>,
    eval_points: Vec<String>,
    generator: Vec<String>,
}

fn to_hex(row: &[Gf]) -> String {
    hex::encode(row.iter().map(|g| g.0).collect::<Vec<u8>>())
}

fn from_hex(s: &str) -> Result<Vec<Gf>> {
    if s.chars().any(|c| c.is_ascii_uppercase()) {
        return Err(Error::Format(format!("hex must be lowercase: {s:?}")));
    }
    Ok(hex::decode(s).map_err(|e| Error::Format(e.to_string()))?.into_iter().map(Gf).collect())
}

impl CodeDefinition {
    pub fn to_json(&self) -> Result<String> {
        let doc = CodeJson {
            schema_version: SCHEMA_VERSION,
            reduction_polynomial: format!("{POLYNOMIAL:x}"),
            spec: self.spec.clone(),
            roles: self.layout.roles.clone(),
            groups: self
                .layout
                .groups
                .iter()
                .map(|g| GroupJson { blocks: g.clone(), roles: g.iter().map(|&b| self.layout.role(b)).collect() })
                .collect(),
            eval_points: self.eval_points.iter().map(|p| format!("{:02x}", p.0)).collect(),
            generator: (0..self.generator.rows()).map(|r| to_hex(self.generator.row(r))).collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<CodeDefinition> {
        let doc: CodeJson = serde_json::from_str(text)?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(Error::Format(format!("unsupported schema_version {}", doc.schema_version)));
        }
        if doc.reduction_polynomial != format!("{POLYNOMIAL:x}") {
            return Err(Error::Format(format!("reduction polynomial {} is not supported", doc.reduction_polynomial)));
        }
        for (i, g) in doc.groups.iter().enumerate() {
            let consistent = g.blocks.len() == g.roles.len()
                && g.blocks.iter().zip(&g.roles).all(|(&b, r)| doc.roles.get(b) == Some(r));
            if !consistent {
                return Err(Error::Format(format!("group {i} roles disagree with block roles")));
            }
        }
        let rows = doc.generator.iter().map(|r| from_hex(r)).collect::<Result<Vec<_>>>()?;
        let generator = GfMatrix::from_rows(&rows)?;
        let eval_points = doc
            .eval_points
            .iter()
            .map(|p| {
                from_hex(p).and_then(|v| match v.as_slice() {
                    [x] => Ok(*x),
                    _ => Err(Error::Format(format!("bad evaluation point {p:?}"))),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let layout = GroupLayout { roles: doc.roles, groups: doc.groups.into_iter().map(|g| g.blocks).collect() };
        CodeDefinition::assemble(doc.spec, layout, generator, eval_points)
    }
}
