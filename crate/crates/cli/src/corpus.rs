//! Deterministic corpora of smooth complete fans: the standard families
//! (projective spaces, Hirzebruch surfaces, products) and seeded blow-up
//! towers over them, plus the file-writing command behind `torix corpus`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use torix_core::fan::{
    hirzebruch, product, projective_space, random_smooth_blowup_tower, Fan,
};
use torix_core::{Error, Result};

use crate::io::emit_fan;

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub provenance: String,
    pub fan: Fan,
}

/// The base fans available in one dimension.
pub fn base_fans(dim: usize) -> Result<Vec<CorpusEntry>> {
    let entry = |name: &str, fan: Fan| CorpusEntry {
        name: name.to_string(),
        provenance: name.to_string(),
        fan,
    };
    let p1 = projective_space(1);
    Ok(match dim {
        1 => vec![entry("P1", p1)],
        2 => vec![
            entry("P2", projective_space(2)),
            entry("F0", hirzebruch(0)),
            entry("F1", hirzebruch(1)),
            entry("F2", hirzebruch(2)),
            entry("F3", hirzebruch(3)),
            entry("P1xP1", product(&p1, &p1)),
        ],
        3 => vec![
            entry("P3", projective_space(3)),
            entry("P1xP2", product(&p1, &projective_space(2))),
            entry("P1xP1xP1", product(&p1, &product(&p1, &p1))),
        ],
        4 => vec![
            entry("P4", projective_space(4)),
            entry("P2xP2", product(&projective_space(2), &projective_space(2))),
            entry("P1xP3", product(&p1, &projective_space(3))),
        ],
        other => {
            return Err(Error::Input(format!("corpus dimension {other} not in 1..=4")));
        }
    })
}

/// `count` fans of the given dimension: the bases in order, then seeded
/// blow-up towers over them.
pub fn corpus_fans(seed: u64, count: usize, dim: usize, steps: usize) -> Result<Vec<CorpusEntry>> {
    let bases = base_fans(dim)?;
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let base = &bases[k % bases.len()];
        if k < bases.len() && steps == 0 {
            out.push(base.clone());
            continue;
        }
        let tower_seed = seed.wrapping_add(k as u64);
        let tower_steps = if dim == 1 { 0 } else { steps.max(1) };
        let fan = if tower_steps == 0 {
            base.fan.clone()
        } else {
            random_smooth_blowup_tower(&base.fan, tower_seed, tower_steps)?
        };
        let provenance = if tower_steps == 0 {
            base.name.clone()
        } else {
            format!("tower(base={}, seed={tower_seed}, steps={tower_steps})", base.name)
        };
        out.push(CorpusEntry { name: format!("fan_{k:03}"), provenance, fan });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub file: String,
    pub provenance: String,
    pub rank: usize,
    pub rays: usize,
    pub smooth: bool,
    pub complete: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub seed: u64,
    pub dim: usize,
    pub steps: usize,
    pub entries: Vec<ManifestEntry>,
}

/// Writes `count` fan files plus `manifest.json` into `out_dir`;
/// byte-identical across runs with the same arguments.
pub fn run_corpus(
    seed: u64,
    count: usize,
    dim: usize,
    steps: usize,
    out_dir: &Path,
) -> Result<Manifest> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| Error::Input(format!("cannot create {}: {e}", out_dir.display())))?;
    let fans = corpus_fans(seed, count, dim, steps)?;
    let mut entries = Vec::new();
    for (k, entry) in fans.iter().enumerate() {
        let file = format!("fan_{k:03}.json");
        std::fs::write(out_dir.join(&file), emit_fan(&entry.fan.data()))
            .map_err(|e| Error::Input(format!("cannot write {file}: {e}")))?;
        entries.push(ManifestEntry {
            file,
            provenance: entry.provenance.clone(),
            rank: entry.fan.rank(),
            rays: entry.fan.num_rays(),
            smooth: entry.fan.is_smooth(),
            complete: entry.fan.is_complete(),
        });
    }
    let manifest = Manifest { seed, dim, steps, entries };
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    std::fs::write(out_dir.join("manifest.json"), text)
        .map_err(|e| Error::Input(format!("cannot write manifest: {e}")))?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_deterministic() {
        let dir_a = std::env::temp_dir().join("torix-corpus-test-a");
        let dir_b = std::env::temp_dir().join("torix-corpus-test-b");
        for d in [&dir_a, &dir_b] {
            let _ = std::fs::remove_dir_all(d);
        }
        run_corpus(5, 4, 2, 3, &dir_a).unwrap();
        run_corpus(5, 4, 2, 3, &dir_b).unwrap();
        for name in ["fan_000.json", "fan_003.json", "manifest.json"] {
            let a = std::fs::read(dir_a.join(name)).unwrap();
            let b = std::fs::read(dir_b.join(name)).unwrap();
            assert_eq!(a, b, "{name} differs between runs");
        }
        for d in [&dir_a, &dir_b] {
            let _ = std::fs::remove_dir_all(d);
        }
    }

    #[test]
    fn towers_gain_rays() {
        let fans = corpus_fans(0, 5, 2, 3).unwrap();
        for entry in fans.iter().skip(0) {
            assert!(entry.fan.is_smooth());
            assert!(entry.fan.is_complete());
        }
        // A three-step tower on P2 has 3 + 3 rays.
        let tower = corpus_fans(0, 7, 2, 3).unwrap().pop().unwrap();
        assert_eq!(tower.fan.num_rays(), 6);
    }

    #[test]
    fn seed_zero_dim2_count1_step0_is_p2() {
        let fans = corpus_fans(0, 1, 2, 0).unwrap();
        assert_eq!(fans.len(), 1);
        assert_eq!(fans[0].fan, projective_space(2));
    }
}
