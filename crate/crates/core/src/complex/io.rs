use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ComplexError, DiskCondition, TriComplex, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub id: VertexId,
    #[serde(rename = "type")]
    pub ty: u8,
}

/// On-disk form of a complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub disk_condition: DiskCondition,
    pub vertices: Vec<VertexRecord>,
    pub faces: Vec<[VertexId; 3]>,
    pub boundary_margin: u32,
}

impl From<&TriComplex> for ComplexFile {
    fn from(cx: &TriComplex) -> Self {
        ComplexFile {
            disk_condition: cx.disk_condition(),
            vertices: cx
                .vertex_types()
                .iter()
                .enumerate()
                .map(|(i, &ty)| VertexRecord {
                    id: i as VertexId,
                    ty,
                })
                .collect(),
            faces: cx.faces().to_vec(),
            boundary_margin: cx.margin(),
        }
    }
}

impl TryFrom<ComplexFile> for TriComplex {
    type Error = ComplexError;

    fn try_from(file: ComplexFile) -> Result<Self, ComplexError> {
        let mut types = Vec::with_capacity(file.vertices.len());
        for (i, v) in file.vertices.iter().enumerate() {
            if v.id as usize != i {
                return Err(ComplexError::VertexIds {
                    position: i,
                    found: v.id,
                });
            }
            types.push(v.ty);
        }
        TriComplex::new(file.disk_condition, types, file.faces, file.boundary_margin)
    }
}

impl TriComplex {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ComplexFile::from(self)).expect("complex serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ComplexError> {
        let file: ComplexFile =
            serde_json::from_str(text).map_err(|e| ComplexError::Malformed(e.to_string()))?;
        file.try_into()
    }

    pub fn store(&self, path: impl AsRef<Path>) -> Result<(), ComplexError> {
        fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ComplexError> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}
