use std::path::Path;

use serde::{Deserialize, Serialize};

use super::space::{GluedSpace, MergedPoint};
use super::tower::{EmbeddingMap, Tower};
use super::GluedError;
use crate::metric::{load_space_json, space_from_json, space_to_json, SpaceJson};
use crate::scalar::Scalar;

/// A level space, inline or as a path relative to the manifest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceSource {
    File { file: String },
    Inline(SpaceJson),
}

/// Tower manifest: scales, level spaces and consecutive maps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TowerJson {
    pub deltas: Vec<f64>,
    pub tol: f64,
    pub spaces: Vec<SpaceSource>,
    pub embeddings: Vec<EmbeddingMap>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<Vec<[f64; 2]>>>,
}

pub fn tower_to_json<T: Scalar>(tower: &Tower<T>) -> TowerJson {
    TowerJson {
        deltas: tower.deltas.clone(),
        tol: tower.tol,
        spaces: tower.spaces.iter().map(|s| SpaceSource::Inline(space_to_json(s))).collect(),
        embeddings: tower.embeddings.clone(),
        coords: tower.coords.clone(),
    }
}

/// Loads a manifest; `File` entries resolve against `base`.
pub fn tower_from_json<T: Scalar>(doc: TowerJson, base: Option<&Path>) -> Result<Tower<T>, GluedError> {
    let spaces = doc
        .spaces
        .into_iter()
        .map(|s| match s {
            SpaceSource::Inline(j) => space_from_json(j),
            SpaceSource::File { file } => match base {
                Some(b) => load_space_json(b.join(file)),
                None => load_space_json(file),
            },
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Tower { deltas: doc.deltas, spaces, embeddings: doc.embeddings, tol: doc.tol, coords: doc.coords })
}

/// A glued space as a plain metric space plus strata and maps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GluedJson {
    #[serde(flatten)]
    pub space: SpaceJson,
    pub stratum: Vec<usize>,
    pub origin: Vec<(usize, usize)>,
    pub f_maps: Vec<Vec<usize>>,
    pub deltas: Vec<f64>,
    pub merged: Vec<MergedPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<[f64; 2]>>,
}

pub fn glued_to_json<T: Scalar>(g: &GluedSpace<T>) -> GluedJson {
    GluedJson {
        space: space_to_json(&g.metric),
        stratum: g.origin.iter().map(|o| o.0).collect(),
        origin: g.origin.clone(),
        f_maps: g.f_maps.clone(),
        deltas: g.tower.deltas.clone(),
        merged: g.merged.clone(),
        coords: g.coords(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glued::build_glued;
    use crate::metric::{save_space_json, FiniteMetricSpace};

    #[test]
    fn manifest_round_trip_with_files() {
        let dir = tempfile::tempdir().unwrap();
        let a = FiniteMetricSpace::from_line(&[0.0, 1.0]);
        let b = FiniteMetricSpace::from_line(&[0.0, 0.5, 1.0]);
        save_space_json(&b, dir.path().join("b.json")).unwrap();
        let t = Tower::from_maps(vec![0.2, 0.1], vec![a.clone(), b], vec![vec![0, 2]], 0.0).unwrap();
        let mut doc = tower_to_json(&t);
        doc.spaces[1] = SpaceSource::File { file: "b.json".into() };
        let text = serde_json::to_string(&doc).unwrap();
        let back: Tower<f64> = tower_from_json(serde_json::from_str(&text).unwrap(), Some(dir.path())).unwrap();
        assert_eq!(back, t);
        let g = glued_to_json(&build_glued(&back).unwrap());
        assert_eq!(g.stratum, vec![0, 0, 1]);
        assert_eq!(g.space.n, 3);
    }
}
