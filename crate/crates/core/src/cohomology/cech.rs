//! Degreewise Čech engines.
//!
//! The general engine computes, for one torus degree at a time, the
//! cohomology of the Čech complex over the cover by maximal-cone affine
//! charts. The piece of the chart-intersection indexed by a subset `L` of
//! maximal cones is one-dimensional exactly when the degree satisfies the
//! section inequality on every ray common to all cones of `L`, so the
//! whole degreewise complex is a function of the set of satisfied rays
//! ("pattern"). Patterns are memoized per fan.
//!
//! The same machinery with one extra level (the module itself) computes
//! graded pieces of local cohomology at the irrelevant ideal.
//!
//! For simplicial fans an independently derived fast path reduces a degree
//! piece to reduced simplicial cohomology of the subcomplex of the fan's
//! abstract simplicial complex induced on the unsatisfied rays; the two
//! paths cross-check one another in the test suite.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_traits::{Signed, Zero};

use crate::fan::Fan;
use crate::linalg::{dot, rank_sparse};
use crate::{Error, Int, Rat, Result};

const MAX_CONES_FOR_ENGINE: usize = 16;

pub struct CechEngine<'a> {
    fan: &'a Fan,
    t: usize,
    /// Intersection ray mask per subset of maximal cones, indexed by the
    /// subset bitmask. Entry 0 (empty subset) is the full ray set.
    subset_rays: Vec<u128>,
    /// Subset bitmasks grouped by cardinality, each group ascending.
    masks_by_size: Vec<Vec<u32>>,
    sheaf_cache: Mutex<HashMap<(u128, usize), Vec<usize>>>,
    local_cache: Mutex<HashMap<(u128, usize), Vec<usize>>>,
}

impl<'a> CechEngine<'a> {
    pub fn new(fan: &'a Fan) -> Result<Self> {
        let t = fan.max_cones().len();
        if t > MAX_CONES_FOR_ENGINE {
            return Err(Error::Input(format!(
                "cohomology engine supports at most {MAX_CONES_FOR_ENGINE} maximal cones, got {t}"
            )));
        }
        let all_rays_mask = if fan.num_rays() == 128 {
            u128::MAX
        } else {
            (1u128 << fan.num_rays()) - 1
        };
        let cone_masks: Vec<u128> = fan.max_cones().iter().map(|c| c.mask()).collect();
        let mut subset_rays = vec![all_rays_mask; 1usize << t];
        for s in 1..(1usize << t) {
            let low = s.trailing_zeros() as usize;
            subset_rays[s] = subset_rays[s & (s - 1)] & cone_masks[low];
        }
        let mut masks_by_size: Vec<Vec<u32>> = vec![Vec::new(); t + 1];
        for s in 0..(1u32 << t) {
            masks_by_size[s.count_ones() as usize].push(s);
        }
        Ok(CechEngine {
            fan,
            t,
            subset_rays,
            masks_by_size,
            sheaf_cache: Mutex::new(HashMap::new()),
            local_cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn fan(&self) -> &Fan {
        self.fan
    }

    pub(crate) fn cone_count(&self) -> usize {
        self.t
    }

    pub(crate) fn subset_ray_mask(&self, subset: u32) -> u128 {
        self.subset_rays[subset as usize]
    }

    pub(crate) fn masks_of_size(&self, size: usize) -> &[u32] {
        &self.masks_by_size[size]
    }

    /// Mask of rays whose section inequality `<u, v> >= -a` holds.
    pub fn satisfied_mask(&self, coeffs: &[Int], u: &[Int]) -> u128 {
        let mut mask = 0u128;
        for (i, ray) in self.fan.rays().iter().enumerate() {
            if dot(u, ray) + &coeffs[i] >= Int::zero() {
                mask |= 1u128 << i;
            }
        }
        mask
    }

    /// Cohomology dimensions `h^0..h^max_level` of the degreewise Čech
    /// complex over the maximal-cone cover, for the given satisfied-ray
    /// pattern.
    pub fn sheaf_dims(&self, pattern: u128, max_level: usize) -> Vec<usize> {
        let key = (pattern, max_level);
        if let Some(hit) = self.sheaf_cache.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let dims = self.family_dims(pattern, false, max_level);
        self.sheaf_cache.lock().unwrap().insert(key, dims.clone());
        dims
    }

    /// Graded local cohomology dimensions `H^0_B..H^max_level_B` for the
    /// pattern of nonnegative coordinates.
    pub fn local_dims(&self, pattern: u128, max_level: usize) -> Vec<usize> {
        let key = (pattern, max_level);
        if let Some(hit) = self.local_cache.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let dims = self.family_dims(pattern, true, max_level);
        self.local_cache.lock().unwrap().insert(key, dims.clone());
        dims
    }

    /// Core computation: the subcomplex of the full simplex cochain
    /// complex spanned by the subsets whose common rays are all satisfied.
    /// With `include_empty` the empty subset (the module itself) is level
    /// zero, computing local cohomology; without it levels start at the
    /// single charts, computing sheaf cohomology.
    fn family_dims(&self, pattern: u128, include_empty: bool, max_level: usize) -> Vec<usize> {
        let in_family = |s: u32| self.subset_rays[s as usize] & !pattern == 0;
        let min_size = usize::from(!include_empty);
        // Level k holds subsets of size k + min_size; to report levels
        // 0..=max_level we need one level beyond for the outgoing rank.
        let mut bases: Vec<Vec<u32>> = Vec::new();
        for size in min_size..=self.t.min(min_size + max_level + 1) {
            bases.push(self.masks_by_size[size].iter().copied().filter(|&s| in_family(s)).collect());
        }
        let mut ranks = vec![0usize; bases.len()];
        for k in 0..bases.len().saturating_sub(1) {
            ranks[k] = self.differential_rank(&bases[k], &bases[k + 1]);
        }
        (0..=max_level)
            .map(|lvl| {
                if lvl >= bases.len() {
                    return 0;
                }
                let out = ranks.get(lvl).copied().unwrap_or(0);
                let inc = if lvl == 0 { 0 } else { ranks.get(lvl - 1).copied().unwrap_or(0) };
                bases[lvl].len() - out - inc
            })
            .collect()
    }

    /// Rank of the incidence differential between consecutive levels.
    fn differential_rank(&self, cols: &[u32], rows: &[u32]) -> usize {
        if cols.is_empty() || rows.is_empty() {
            return 0;
        }
        let mut row_maps: Vec<BTreeMap<usize, Rat>> = vec![BTreeMap::new(); rows.len()];
        for (ci, &l) in cols.iter().enumerate() {
            for x in 0..self.t {
                let bit = 1u32 << x;
                if l & bit != 0 {
                    continue;
                }
                let l2 = l | bit;
                // Upward closure keeps the superset in the family.
                let ri = rows.binary_search(&l2).expect("family is upward closed");
                let sign = if (l & (bit - 1)).count_ones() % 2 == 0 { 1i64 } else { -1 };
                row_maps[ri].insert(ci, Rat::from_integer(Int::from(sign)));
            }
        }
        rank_sparse(row_maps)
    }
}

/// Reduced simplicial cohomology fast path for simplicial fans: the degree
/// piece of `H^p` equals reduced `H^{p-1}` of the subcomplex of the fan's
/// abstract simplicial complex induced on the unsatisfied rays.
pub fn fast_piece_dims(fan: &Fan, satisfied: u128, max_level: usize) -> Result<Vec<usize>> {
    if !fan.is_simplicial() {
        return Err(Error::Input("the subcomplex fast path needs a simplicial fan".into()));
    }
    let unsat = !satisfied;
    // Faces of the induced subcomplex, grouped by cardinality; includes
    // the empty face.
    let mut faces_by_size: Vec<Vec<u128>> = vec![Vec::new(); fan.rank() + 2];
    for cone in fan.all_cones() {
        let mask = cone.mask();
        if mask & !unsat == 0 {
            faces_by_size[cone.len()].push(mask);
        }
    }
    for group in &mut faces_by_size {
        group.sort_unstable();
    }
    // Reduced cohomology shifted: piece(p) = reduced H^{p-1}, living on
    // faces of cardinality p.
    let mut ranks = vec![0usize; faces_by_size.len()];
    for s in 0..faces_by_size.len() - 1 {
        ranks[s] = simplicial_coboundary_rank(fan, &faces_by_size[s], &faces_by_size[s + 1]);
    }
    Ok((0..=max_level)
        .map(|p| {
            if p >= faces_by_size.len() {
                return 0;
            }
            let out = ranks.get(p).copied().unwrap_or(0);
            let inc = if p == 0 { 0 } else { ranks.get(p - 1).copied().unwrap_or(0) };
            faces_by_size[p].len() - out - inc
        })
        .collect())
}

fn simplicial_coboundary_rank(fan: &Fan, cols: &[u128], rows: &[u128]) -> usize {
    if cols.is_empty() || rows.is_empty() {
        return 0;
    }
    let mut row_maps: Vec<BTreeMap<usize, Rat>> = vec![BTreeMap::new(); rows.len()];
    for (ci, &face) in cols.iter().enumerate() {
        for x in 0..fan.num_rays() {
            let bit = 1u128 << x;
            if face & bit != 0 {
                continue;
            }
            let bigger = face | bit;
            // Unlike the chart complex, the induced subcomplex is
            // downward closed, so the superset may be missing.
            if let Ok(ri) = rows.binary_search(&bigger) {
                let sign = if (face & (bit - 1)).count_ones() % 2 == 0 { 1i64 } else { -1 };
                row_maps[ri].insert(ci, Rat::from_integer(Int::from(sign)));
            }
        }
    }
    rank_sparse(row_maps)
}

/// Integer bounding box (expanded by one) around all vertices of the
/// hyperplane arrangement `{ <u, v_ray> = threshold }`, over rank-n ray
/// subsets and all per-ray threshold choices. Every torus degree with a
/// nonzero cohomology contribution on a complete fan lies strictly inside
/// the expanded box.
pub fn arrangement_box(fan: &Fan, thresholds: &[Vec<Int>]) -> Result<(Vec<Int>, Vec<Int>)> {
    use crate::linalg::{rank, solve, Mat};
    use crate::scalar::to_ratio_vec;
    let n = fan.rank();
    let d = fan.num_rays();
    let mut lo: Option<Vec<Rat>> = None;
    let mut hi: Option<Vec<Rat>> = None;
    let mut update = |u: &[Rat]| {
        match &mut lo {
            None => lo = Some(u.to_vec()),
            Some(lo) => {
                for (l, x) in lo.iter_mut().zip(u) {
                    if *x < *l {
                        *l = x.clone();
                    }
                }
            }
        }
        match &mut hi {
            None => hi = Some(u.to_vec()),
            Some(hi) => {
                for (h, x) in hi.iter_mut().zip(u) {
                    if *x > *h {
                        *h = x.clone();
                    }
                }
            }
        }
    };
    let mut subset = vec![0usize; n];
    enumerate_subsets(d, n, &mut subset, 0, 0, &mut |chosen: &[usize]| {
        let mat = Mat::from_rows_with_cols(
            chosen.iter().map(|&i| to_ratio_vec(fan.ray(i))).collect(),
            n,
        );
        if rank(&mat) != n {
            return;
        }
        // All combinations of thresholds for the chosen rays.
        let counts: Vec<usize> = chosen.iter().map(|&i| thresholds[i].len()).collect();
        let mut pick = vec![0usize; n];
        loop {
            let rhs: Vec<Rat> = chosen
                .iter()
                .zip(&pick)
                .map(|(&i, &k)| Rat::from_integer(thresholds[i][k].clone()))
                .collect();
            if let Some(u) = solve(&mat, &rhs) {
                update(&u);
            }
            let mut carry = true;
            for slot in (0..n).rev() {
                if !carry {
                    break;
                }
                pick[slot] += 1;
                if pick[slot] < counts[slot] {
                    carry = false;
                } else {
                    pick[slot] = 0;
                }
            }
            if carry {
                break;
            }
        }
    });
    let (lo, hi) = match (lo, hi) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => return Err(Error::Internal("no arrangement vertices; rays cannot span".into())),
    };
    let lo: Vec<Int> = lo.iter().map(|x| x.floor().to_integer() - 1).collect();
    let hi: Vec<Int> = hi.iter().map(|x| x.ceil().to_integer() + 1).collect();
    Ok((lo, hi))
}

fn enumerate_subsets(
    d: usize,
    k: usize,
    buffer: &mut Vec<usize>,
    start: usize,
    depth: usize,
    callback: &mut impl FnMut(&[usize]),
) {
    if depth == k {
        callback(&buffer[..k]);
        return;
    }
    for i in start..d {
        buffer[depth] = i;
        enumerate_subsets(d, k, buffer, i + 1, depth + 1, callback);
    }
}

/// All integer points of the box `[lo, hi]`, flagging points on the outer
/// shell (used to assert that no contribution escapes the box).
pub fn box_points(lo: &[Int], hi: &[Int]) -> Vec<(Vec<Int>, bool)> {
    let n = lo.len();
    let mut out = Vec::new();
    let mut point: Vec<Int> = lo.to_vec();
    'scan: loop {
        let on_shell =
            point.iter().zip(lo.iter().zip(hi)).any(|(x, (l, h))| x == l || x == h);
        out.push((point.clone(), on_shell));
        for c in (0..n).rev() {
            if point[c] < hi[c] {
                point[c] += 1;
                for (reset, low) in point.iter_mut().zip(lo).skip(c + 1) {
                    *reset = low.clone();
                }
                continue 'scan;
            }
        }
        break;
    }
    out
}

/// The satisfied-ray mask can also be read from a fine degree vector:
/// coordinates `>= 0` are the satisfied rays.
pub fn nonneg_mask(alpha: &[Int]) -> u128 {
    let mut mask = 0u128;
    for (i, a) in alpha.iter().enumerate() {
        if !a.is_negative() {
            mask |= 1u128 << i;
        }
    }
    mask
}
