//! Group presets: a TOML table per real form naming the root system, the
//! painting and the per-group lattice data. Built-in presets are embedded;
//! user files use the same schema.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::realform::{ParityRule, RealFormData, RealFormOptions, VoganDiagram};
use crate::rootsys::{build_root_system, Family, Realization};

const BUILTIN: &str = include_str!("../data/presets.toml");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupPreset {
    #[serde(default)]
    pub description: Option<String>,
    pub family: String,
    pub rank: usize,
    #[serde(default = "default_realization")]
    pub realization: String,
    pub noncompact: Vec<usize>,
    #[serde(default)]
    pub k_simple: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    pub parity: Option<Vec<i64>>,
    #[serde(default)]
    pub pencil: Option<Vec<i64>>,
    #[serde(default)]
    pub atlas_order: Option<Vec<usize>>,
    #[serde(default)]
    pub vanishing_pairs: Option<Vec<[usize; 2]>>,
}

fn default_realization() -> String {
    "default".into()
}

impl GroupPreset {
    pub fn build(&self) -> Result<RealFormData> {
        let family: Family = self.family.parse()?;
        let realization: Realization = self.realization.parse()?;
        let system = Arc::new(build_root_system(family, self.rank, realization)?);
        if let Some(order) = &self.atlas_order {
            let mut sorted = order.clone();
            sorted.sort_unstable();
            if sorted != (0..self.rank).collect::<Vec<_>>() {
                return Err(Error::Config("atlas_order is not a permutation".into()));
            }
        }
        let diagram = VoganDiagram::equal_rank(system, &self.noncompact)?;
        RealFormData::build(
            diagram,
            RealFormOptions {
                k_simple_order: self.k_simple.clone(),
                parity: self.parity.clone().map(|coefficients| ParityRule { coefficients }),
                pencil_direction: self.pencil.clone(),
                vanishing_pairs: self.vanishing_pairs.clone(),
            },
        )
    }

    /// Converts atlas-numbered coordinates to this preset's numbering.
    pub fn from_atlas<T: Clone>(&self, v: &[T]) -> Vec<T> {
        match &self.atlas_order {
            None => v.to_vec(),
            Some(order) => {
                let mut out = v.to_vec();
                for (i, &j) in order.iter().enumerate() {
                    out[j] = v[i].clone();
                }
                out
            }
        }
    }

    pub fn to_atlas<T: Clone>(&self, v: &[T]) -> Vec<T> {
        match &self.atlas_order {
            None => v.to_vec(),
            Some(order) => order.iter().map(|&j| v[j].clone()).collect(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PresetFile {
    pub groups: BTreeMap<String, GroupPreset>,
}

impl PresetFile {
    pub fn parse(text: &str, path: &str) -> Result<Self> {
        let groups: BTreeMap<String, GroupPreset> = toml::from_str(text).map_err(|e| {
            let (line, column) = e
                .span()
                .map(|sp| line_col(text, sp.start))
                .unwrap_or((0, 0));
            Error::Parse {
                path: path.to_string(),
                line,
                column,
                message: e.message().to_string(),
            }
        })?;
        Ok(PresetFile { groups })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn builtin() -> Self {
        Self::parse(BUILTIN, "presets.toml").expect("embedded presets parse")
    }

    pub fn get(&self, name: &str) -> Result<&GroupPreset> {
        self.groups
            .get(name)
            .ok_or_else(|| Error::UnknownPreset(name.to_string()))
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

/// Built-in real form by name, built once per process.
pub fn real_form(name: &str) -> Result<Arc<RealFormData>> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<RealFormData>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(rf) = cache.lock().expect("preset cache").get(name) {
        return Ok(rf.clone());
    }
    let rf = Arc::new(PresetFile::builtin().get(name)?.build()?);
    cache
        .lock()
        .expect("preset cache")
        .entry(name.to_string())
        .or_insert(rf.clone());
    Ok(rf)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_presets_parse() {
        let p = PresetFile::builtin();
        assert_eq!(p.groups.len(), 3);
        assert!(matches!(p.get("g2s"), Err(Error::UnknownPreset(_))));
    }

    #[test]
    fn parse_errors_carry_a_location() {
        let err = PresetFile::parse("[x]\nfamily = \"E\"\nrank = \"six\"\n", "bad.toml").unwrap_err();
        match err {
            Error::Parse { path, line, .. } => {
                assert_eq!(path, "bad.toml");
                assert_eq!(line, 3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn atlas_order_round_trip() {
        let p = PresetFile::builtin();
        let f4 = p.get("f4s").unwrap();
        let v = vec![0, 1, 0, 1];
        assert_eq!(f4.from_atlas(&v), vec![1, 0, 1, 0]);
        assert_eq!(f4.to_atlas(&f4.from_atlas(&v)), v);
    }
}
