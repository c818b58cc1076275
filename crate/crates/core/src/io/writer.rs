use std::path::{Path, PathBuf};

use super::csv::write_distance_csv;
use super::json::ComplexJson;
use super::off::{write_off, OffMesh};
use crate::corpus::{
    circle_metric, flat_torus, hexagonal_torus, klein_bottle, projective_plane, random_grid_metric, tetrahedron_sphere,
    Surface,
};
use crate::error::Result;
use crate::number::q_int;

/// Instance sizes for [`write_corpus`].
#[derive(Debug, Clone)]
pub struct CorpusSizes {
    /// Vertex counts of unit-step circles.
    pub circles: Vec<usize>,
    /// Grid sizes of square flat tori.
    pub tori: Vec<usize>,
    /// Grid sizes of hexagonal tori.
    pub hex_tori: Vec<usize>,
    /// Point counts of random ℓ1 grid metrics.
    pub random: Vec<usize>,
}

impl Default for CorpusSizes {
    fn default() -> Self {
        CorpusSizes { circles: vec![6, 12, 24, 48], tori: vec![3, 4, 5, 6], hex_tori: vec![6], random: vec![10, 16] }
    }
}

fn surface_json(s: &Surface) -> Result<String> {
    Ok(serde_json::to_string_pretty(&ComplexJson::from_surface(s))? + "\n")
}

/// Writes the corpus into `dir` and returns the written paths in order.
///
/// Output depends only on `seed` and `sizes`.
pub fn write_corpus(dir: &Path, seed: u64, sizes: &CorpusSizes) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut files: Vec<(String, String)> = Vec::new();
    for &n in &sizes.circles {
        files.push((format!("circle{n}.csv"), write_distance_csv(&circle_metric(n, &q_int(n as i64)))));
    }
    for &k in &sizes.tori {
        let s = flat_torus(k);
        let mesh = OffMesh {
            coords: s.coords.clone().unwrap_or_default(),
            faces: s.triangles.iter().map(|t| t.to_vec()).collect(),
        };
        files.push((format!("{}.off", s.name), write_off(&mesh)));
    }
    for &k in &sizes.hex_tori {
        let s = hexagonal_torus(k);
        files.push((format!("{}.json", s.name), surface_json(&s)?));
    }
    for s in [projective_plane(), klein_bottle(4, 4), tetrahedron_sphere()] {
        files.push((format!("{}.json", s.name), surface_json(&s)?));
    }
    for (i, &n) in sizes.random.iter().enumerate() {
        let m = random_grid_metric(n, 20, seed.wrapping_add(i as u64));
        files.push((format!("random{n}_seed{seed}.csv"), write_distance_csv(&m)));
    }
    let mut out = Vec::with_capacity(files.len());
    for (name, body) in files {
        let path = dir.join(name);
        std::fs::write(&path, body)?;
        out.push(path);
    }
    Ok(out)
}
