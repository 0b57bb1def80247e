//! Fans: validated collections of strongly convex rational cones, plus the
//! operations on them that the rest of the crate is built on — walls, star
//! fans (quotients), star subdivisions (blow-ups), and the standard
//! constructions used as a test corpus.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{cone_geometry, primitive, ConeGeom};
use crate::linalg::{dot, int_rank, smith, Mat};
use crate::{Error, Int, LatticeVector, Rat, Result};

/// A cone of a fan, canonically represented by its sorted set of ray
/// indices. Equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cone(Vec<usize>);

impl Cone {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        Cone(indices)
    }

    pub fn rays(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn is_subset_of(&self, other: &Cone) -> bool {
        self.0.iter().all(|i| other.contains_index(*i))
    }

    pub fn intersection(&self, other: &Cone) -> Cone {
        Cone(self.0.iter().filter(|i| other.contains_index(**i)).copied().collect())
    }

    pub fn union(&self, other: &Cone) -> Cone {
        Cone::new(self.0.iter().chain(other.rays()).copied().collect())
    }

    pub fn without(&self, i: usize) -> Cone {
        Cone(self.0.iter().filter(|&&j| j != i).copied().collect())
    }

    pub fn with(&self, i: usize) -> Cone {
        Cone::new(self.0.iter().copied().chain([i]).collect())
    }

    /// Bitmask of ray indices; fans are capped at 128 rays.
    pub fn mask(&self) -> u128 {
        self.0.iter().fold(0u128, |m, &i| m | (1u128 << i))
    }
}

/// Raw fan data as read from or written to a fan file. Validation happens
/// when building a [`Fan`] out of it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanData {
    pub rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
}

impl FanData {
    /// One diagnostic per violated fan invariant; empty iff the data builds
    /// a valid fan. Validity does not require completeness.
    pub fn validate(&self) -> Vec<String> {
        let mut diags = Vec::new();
        let n = self.rank;
        if n == 0 {
            diags.push("rank must be at least 1".to_string());
            return diags;
        }
        if self.rays.len() > 128 {
            diags.push("more than 128 rays is unsupported".to_string());
            return diags;
        }
        let mut rays: Vec<LatticeVector> = Vec::new();
        for (i, ray) in self.rays.iter().enumerate() {
            if ray.len() != n {
                diags.push(format!("ray {i} has {} coordinates, expected {n}", ray.len()));
                return diags;
            }
            let v: LatticeVector = ray.iter().map(|&c| Int::from(c)).collect();
            if v.iter().all(Zero::is_zero) {
                diags.push(format!("ray {i} is zero"));
            } else if primitive(&v).map(|p| p != v).unwrap_or(true) {
                diags.push(format!("ray {i} not primitive"));
            }
            rays.push(v);
        }
        for i in 0..rays.len() {
            for j in i + 1..rays.len() {
                if rays[i] == rays[j] {
                    diags.push(format!("rays {i} and {j} are equal"));
                }
            }
        }
        if !diags.is_empty() {
            return diags;
        }
        if int_rank(&Mat::from_rows_with_cols(rays.clone(), n)) != n {
            diags.push(format!(
                "degenerate fan: rays span a proper subspace of Q^{n}; quotient by the span first"
            ));
            return diags;
        }
        let mut cones: Vec<Cone> = Vec::new();
        for (k, c) in self.max_cones.iter().enumerate() {
            if c.is_empty() {
                diags.push(format!("cone {k} is empty"));
                continue;
            }
            let mut sorted = c.clone();
            sorted.sort_unstable();
            let before = sorted.len();
            sorted.dedup();
            if sorted.len() != before {
                diags.push(format!("cone {k} has repeated ray indices"));
            }
            if let Some(&bad) = sorted.iter().find(|&&i| i >= rays.len()) {
                diags.push(format!(
                    "cone {k} references ray index {bad}, out of range 0..{}",
                    rays.len()
                ));
                continue;
            }
            cones.push(Cone(sorted));
        }
        if !diags.is_empty() {
            return diags;
        }
        let mut geoms: Vec<Option<ConeGeom>> = Vec::new();
        for (k, cone) in cones.iter().enumerate() {
            let ray_vecs: Vec<LatticeVector> =
                cone.rays().iter().map(|&i| rays[i].clone()).collect();
            match cone_geometry(n, &ray_vecs) {
                Ok(g) => geoms.push(Some(g)),
                Err(_) => {
                    diags.push(format!("cone {k} is not strongly convex"));
                    geoms.push(None);
                }
            }
        }
        if geoms.iter().any(Option::is_none) {
            return diags;
        }
        for i in 0..cones.len() {
            for j in i + 1..cones.len() {
                if cones[i] == cones[j] {
                    diags.push(format!("cones {i} and {j} are equal"));
                } else if cones[i].is_subset_of(&cones[j]) || cones[j].is_subset_of(&cones[i]) {
                    diags
                        .push(format!("cone {i} and cone {j} are nested; list only maximal cones"));
                }
            }
        }
        if !diags.is_empty() {
            return diags;
        }
        // Pairwise intersections must be common faces.
        let face_sets: Vec<BTreeSet<BTreeSet<usize>>> = cones
            .iter()
            .zip(&geoms)
            .map(|(cone, geom)| {
                geom.as_ref()
                    .unwrap()
                    .face_raysets(cone.len())
                    .into_iter()
                    .map(|f| f.into_iter().map(|l| cone.rays()[l]).collect::<BTreeSet<usize>>())
                    .collect()
            })
            .collect();
        for i in 0..cones.len() {
            for j in i + 1..cones.len() {
                let common: BTreeSet<usize> = cones[i]
                    .rays()
                    .iter()
                    .filter(|r| cones[j].contains_index(**r))
                    .copied()
                    .collect();
                if !face_sets[i].contains(&common) || !face_sets[j].contains(&common) {
                    diags.push(format!("intersection of cones {i} and {j} is not a common face"));
                    continue;
                }
                let gi = geoms[i].as_ref().unwrap();
                let gj = geoms[j].as_ref().unwrap();
                let mut normals = gi.facet_normals.clone();
                normals.extend(gj.facet_normals.iter().cloned());
                let mut eqs = gi.span_equalities.clone();
                eqs.extend(gj.span_equalities.iter().cloned());
                match crate::geometry::extreme_rays(n, &normals, &eqs) {
                    Ok(ext) => {
                        let expected: BTreeSet<LatticeVector> =
                            common.iter().map(|&r| rays[r].clone()).collect();
                        let got: BTreeSet<LatticeVector> = ext.into_iter().collect();
                        if got != expected {
                            diags.push(format!(
                                "intersection of cones {i} and {j} is not a common face"
                            ));
                        }
                    }
                    Err(_) => diags
                        .push(format!("intersection of cones {i} and {j} is not a common face")),
                }
            }
        }
        diags
    }

    pub fn build(&self) -> Result<Fan> {
        Fan::from_data(self)
    }
}

/// A wall: a codimension-one cone together with the two maximal cones it
/// separates. Walls carry the invariant curves of a complete fan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub tau: Cone,
    /// Indices into the fan's maximal cone list, `sigma1 < sigma2`.
    pub sigma1: usize,
    pub sigma2: usize,
}

/// A validated fan. Immutable after construction; all operations are pure.
#[derive(Debug)]
pub struct Fan {
    rank: usize,
    rays: Vec<LatticeVector>,
    max_cones: Vec<Cone>,
    max_geoms: Vec<ConeGeom>,
    all_cones: Vec<Cone>,
    dims: BTreeMap<Cone, usize>,
    walls_cache: OnceLock<Option<Vec<Wall>>>,
    complete_cache: OnceLock<bool>,
    singular_cache: OnceLock<Vec<usize>>,
}

impl Clone for Fan {
    fn clone(&self) -> Self {
        Fan {
            rank: self.rank,
            rays: self.rays.clone(),
            max_cones: self.max_cones.clone(),
            max_geoms: self.max_geoms.clone(),
            all_cones: self.all_cones.clone(),
            dims: self.dims.clone(),
            walls_cache: OnceLock::new(),
            complete_cache: OnceLock::new(),
            singular_cache: OnceLock::new(),
        }
    }
}

impl PartialEq for Fan {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.rays == other.rays && self.max_cones == other.max_cones
    }
}
impl Eq for Fan {}

impl Fan {
    pub fn from_data(data: &FanData) -> Result<Fan> {
        let diags = data.validate();
        if !diags.is_empty() {
            if diags.iter().any(|d| d.starts_with("degenerate fan")) {
                return Err(Error::DegenerateFan { rank: data.rank });
            }
            return Err(Error::InvalidFan(diags));
        }
        let rank = data.rank;
        let rays: Vec<LatticeVector> =
            data.rays.iter().map(|r| r.iter().map(|&c| Int::from(c)).collect()).collect();
        let mut max_cones: Vec<Cone> = data.max_cones.iter().map(|c| Cone::new(c.clone())).collect();
        max_cones.sort();
        let max_geoms: Vec<ConeGeom> = max_cones
            .iter()
            .map(|c| {
                let rv: Vec<LatticeVector> = c.rays().iter().map(|&i| rays[i].clone()).collect();
                cone_geometry(rank, &rv).expect("validated cone")
            })
            .collect();
        // Face closure.
        let mut set: BTreeSet<Cone> = BTreeSet::new();
        for (cone, geom) in max_cones.iter().zip(&max_geoms) {
            for local in geom.face_raysets(cone.len()) {
                set.insert(Cone(local.into_iter().map(|l| cone.rays()[l]).collect()));
            }
        }
        let all_cones: Vec<Cone> = set.into_iter().collect();
        let mut dims = BTreeMap::new();
        for cone in &all_cones {
            let rv: Vec<LatticeVector> = cone.rays().iter().map(|&i| rays[i].clone()).collect();
            dims.insert(cone.clone(), int_rank(&Mat::from_rows_with_cols(rv, rank)));
        }
        Ok(Fan {
            rank,
            rays,
            max_cones,
            max_geoms,
            all_cones,
            dims,
            walls_cache: OnceLock::new(),
            complete_cache: OnceLock::new(),
            singular_cache: OnceLock::new(),
        })
    }

    pub fn new(rank: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Fan> {
        FanData { rank, rays, max_cones }.build()
    }

    pub fn data(&self) -> FanData {
        FanData {
            rank: self.rank,
            rays: self
                .rays
                .iter()
                .map(|r| {
                    r.iter().map(|c| i64::try_from(c).expect("ray coordinate fits i64")).collect()
                })
                .collect(),
            max_cones: self.max_cones.iter().map(|c| c.rays().to_vec()).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn ray(&self, i: usize) -> &LatticeVector {
        &self.rays[i]
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn max_cones(&self) -> &[Cone] {
        &self.max_cones
    }

    pub fn max_geom(&self, i: usize) -> &ConeGeom {
        &self.max_geoms[i]
    }

    pub fn all_cones(&self) -> &[Cone] {
        &self.all_cones
    }

    pub fn contains_cone(&self, cone: &Cone) -> bool {
        self.all_cones.binary_search(cone).is_ok()
    }

    pub fn cone_dim(&self, cone: &Cone) -> Option<usize> {
        self.dims.get(cone).copied()
    }

    pub fn cones_of_dim(&self, k: usize) -> Vec<&Cone> {
        self.all_cones.iter().filter(|c| self.dims[*c] == k).collect()
    }

    /// Ray vectors of a cone, in ray-index order.
    pub fn cone_ray_vectors(&self, cone: &Cone) -> Vec<LatticeVector> {
        cone.rays().iter().map(|&i| self.rays[i].clone()).collect()
    }

    pub fn is_simplicial(&self) -> bool {
        self.max_cones.iter().all(|c| self.dims[c] == c.len())
    }

    /// Indices of maximal cones whose rays do not extend to a basis of the
    /// lattice. Empty iff the fan is smooth.
    pub fn singular_max_cones(&self) -> &[usize] {
        self.singular_cache.get_or_init(|| {
            let mut out = Vec::new();
            for (k, cone) in self.max_cones.iter().enumerate() {
                let rv = self.cone_ray_vectors(cone);
                let m = Mat::from_rows_with_cols(rv, self.rank);
                let s = smith(&m);
                let smooth = s.rank == cone.len() && s.factors.iter().all(One::is_one);
                if !smooth {
                    out.push(k);
                }
            }
            out
        })
    }

    pub fn is_smooth(&self) -> bool {
        self.singular_max_cones().is_empty()
    }

    /// Walls of the fan: codimension-one cones with their two adjacent
    /// maximal cones, ordered lexicographically by ray-index set.
    ///
    /// Errors when some codimension-one cone does not lie in exactly two
    /// maximal cones (the fan cannot be complete).
    pub fn walls(&self) -> Result<&[Wall]> {
        let cached = self.walls_cache.get_or_init(|| self.compute_walls().ok());
        match cached {
            Some(walls) => Ok(walls),
            None => Err(Error::NotComplete(
                "some codimension-1 cone is not contained in exactly two maximal cones".into(),
            )),
        }
    }

    fn compute_walls(&self) -> Result<Vec<Wall>> {
        let n = self.rank;
        let mut walls = Vec::new();
        for cone in &self.all_cones {
            if self.dims[cone] != n - 1 {
                continue;
            }
            let adjacent: Vec<usize> = self
                .max_cones
                .iter()
                .enumerate()
                .filter(|(_, m)| cone.is_subset_of(m) && self.dims[*m] == n)
                .map(|(i, _)| i)
                .collect();
            if adjacent.len() != 2 {
                return Err(Error::NotComplete(format!(
                    "codimension-1 cone {:?} lies in {} maximal cones, expected 2",
                    cone.rays(),
                    adjacent.len()
                )));
            }
            walls.push(Wall { tau: cone.clone(), sigma1: adjacent[0], sigma2: adjacent[1] });
        }
        walls.sort_by(|a, b| a.tau.cmp(&b.tau));
        Ok(walls)
    }

    /// Completeness: pure dimension, every codimension-one cone on exactly
    /// two maximal cones, connected adjacency graph — cross-checked by a
    /// seeded sample of rational points, each of which must lie in some
    /// maximal cone.
    pub fn is_complete(&self) -> bool {
        *self.complete_cache.get_or_init(|| {
            if self.max_cones.iter().any(|c| self.dims[c] != self.rank) {
                return false;
            }
            let Ok(walls) = self.walls() else {
                return false;
            };
            let t = self.max_cones.len();
            let mut seen = vec![false; t];
            let mut stack = vec![0usize];
            seen[0] = true;
            while let Some(i) = stack.pop() {
                for w in walls {
                    let next = if w.sigma1 == i {
                        w.sigma2
                    } else if w.sigma2 == i {
                        w.sigma1
                    } else {
                        continue;
                    };
                    if !seen[next] {
                        seen[next] = true;
                        stack.push(next);
                    }
                }
            }
            if seen.iter().any(|s| !s) {
                return false;
            }
            // Randomized membership cross-check with a fixed seed.
            let bound: i64 = 1 + self
                .rays
                .iter()
                .flat_map(|r| r.iter())
                .map(|c| i64::try_from(c).unwrap_or(i64::MAX / 2).abs())
                .max()
                .unwrap_or(1);
            let mut rng = ChaCha8Rng::seed_from_u64(0x746f726978);
            for _ in 0..100 {
                let point: Vec<Int> =
                    (0..self.rank).map(|_| Int::from(rng.gen_range(-bound..=bound))).collect();
                if point.iter().all(Zero::is_zero) {
                    continue;
                }
                if !self.max_geoms.iter().any(|g| g.contains_int(&point)) {
                    return false;
                }
            }
            true
        })
    }

    /// Indices of maximal cones containing the rational point.
    pub fn max_cones_containing_rat(&self, x: &[Rat]) -> Vec<usize> {
        self.max_geoms
            .iter()
            .enumerate()
            .filter(|(_, g)| g.contains_rat(x))
            .map(|(i, _)| i)
            .collect()
    }

    /// Indices of maximal cones containing the point in their relative
    /// interior.
    pub fn max_cones_containing_rat_strictly(&self, x: &[Rat]) -> Vec<usize> {
        self.max_geoms
            .iter()
            .enumerate()
            .filter(|(_, g)| g.contains_rat_strictly(x))
            .map(|(i, _)| i)
            .collect()
    }

    /// The fan is smooth, complete, and has exactly `rank + 1` rays — the
    /// fan of projective space.
    pub fn is_projective_space(&self) -> bool {
        self.num_rays() == self.rank + 1 && self.is_smooth() && self.is_complete()
    }

    /// Quotient data for the saturated sublattice spanned by a cone: the
    /// projection `N -> N / N_tau` as the trailing rows of a unimodular
    /// change of basis, plus a section of it.
    pub(crate) fn quotient_by_cone(&self, tau: &Cone) -> QuotientMap {
        let n = self.rank;
        let cols: Vec<LatticeVector> = tau.rays().iter().map(|&i| self.rays[i].clone()).collect();
        let mut m = Mat::zero(n, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for i in 0..n {
                m.set(i, j, col[i].clone());
            }
        }
        let s = smith(&m);
        let r = s.rank;
        let projection: Vec<LatticeVector> = (r..n).map(|i| s.u.row(i).to_vec()).collect();
        let section: Vec<LatticeVector> = (r..n).map(|j| s.u_inv.col(j)).collect();
        QuotientMap { projection, section }
    }

    /// The fan of the invariant subvariety attached to `tau`: images of the
    /// cones containing `tau` in the quotient lattice. Returns the fan and
    /// the map from old ray indices to new ones (rays of `tau` itself and
    /// rays outside the star map to `None`).
    pub fn star_fan(&self, tau: &Cone) -> Result<(Fan, Vec<Option<usize>>)> {
        if !self.contains_cone(tau) {
            return Err(Error::Input(format!("cone {:?} is not in the fan", tau.rays())));
        }
        if tau.is_empty() {
            return Ok((self.clone(), (0..self.num_rays()).map(Some).collect()));
        }
        let k = self.dims[tau];
        if k >= self.rank {
            return Err(Error::Input(
                "star fan of a full-dimensional cone would have rank 0".into(),
            ));
        }
        let quotient = self.quotient_by_cone(tau);
        let new_rank = self.rank - k;
        let mut ray_map: Vec<Option<usize>> = vec![None; self.num_rays()];
        let mut new_rays: Vec<Vec<i64>> = Vec::new();
        let mut new_cones: Vec<Vec<usize>> = Vec::new();
        for max in &self.max_cones {
            if !tau.is_subset_of(max) {
                continue;
            }
            for &ri in max.rays() {
                if tau.contains_index(ri) || ray_map[ri].is_some() {
                    continue;
                }
                let img: LatticeVector =
                    quotient.projection.iter().map(|row| dot(row, &self.rays[ri])).collect();
                let prim = primitive(&img)?;
                let as_i64: Vec<i64> =
                    prim.iter().map(|c| i64::try_from(c).expect("quotient ray fits i64")).collect();
                let pos = new_rays.iter().position(|r| *r == as_i64).unwrap_or_else(|| {
                    new_rays.push(as_i64.clone());
                    new_rays.len() - 1
                });
                ray_map[ri] = Some(pos);
            }
            new_cones.push(max.rays().iter().filter_map(|&ri| ray_map[ri]).collect());
        }
        new_cones.sort();
        new_cones.dedup();
        let fan = Fan::new(new_rank, new_rays, new_cones)?;
        Ok((fan, ray_map))
    }

    /// Star subdivision at a smooth cone of dimension at least 2: inserts
    /// the primitive sum of the cone's rays and subdivides every cone
    /// containing it. Returns the new fan and the index of the new ray
    /// (the exceptional divisor).
    pub fn star_subdivision(&self, sigma: &Cone) -> Result<(Fan, usize)> {
        if !self.contains_cone(sigma) {
            return Err(Error::Input(format!("cone {:?} is not in the fan", sigma.rays())));
        }
        if self.dims[sigma] < 2 {
            return Err(Error::Input("star subdivision needs a cone of dimension >= 2".into()));
        }
        let rv = self.cone_ray_vectors(sigma);
        let m = Mat::from_rows_with_cols(rv.clone(), self.rank);
        let s = smith(&m);
        if s.rank != sigma.len() || !s.factors.iter().all(One::is_one) {
            return Err(Error::NotSmooth(format!(
                "cone {:?} is singular; star subdivision here need not stay smooth",
                sigma.rays()
            )));
        }
        let mut barycenter = vec![Int::zero(); self.rank];
        for ray in &rv {
            for (b, c) in barycenter.iter_mut().zip(ray) {
                *b += c;
            }
        }
        let barycenter = primitive(&barycenter)?;
        let mut data = self.data();
        let new_index = data.rays.len();
        data.rays.push(
            barycenter.iter().map(|c| i64::try_from(c).expect("barycenter fits i64")).collect(),
        );
        let mut new_cones: Vec<Vec<usize>> = Vec::new();
        for max in &self.max_cones {
            if sigma.is_subset_of(max) {
                for &drop in sigma.rays() {
                    let replaced: Vec<usize> = max
                        .rays()
                        .iter()
                        .copied()
                        .filter(|&r| r != drop)
                        .chain([new_index])
                        .collect();
                    new_cones.push(replaced);
                }
            } else {
                new_cones.push(max.rays().to_vec());
            }
        }
        data.max_cones = new_cones;
        let fan = data.build()?;
        Ok((fan, new_index))
    }
}

pub(crate) struct QuotientMap {
    /// Rows of the projection `N -> Z^{n-k}`.
    pub projection: Vec<LatticeVector>,
    /// Columns of a section `Z^{n-k} -> N` of the projection.
    #[allow(dead_code)]
    pub section: Vec<LatticeVector>,
}

// ---------------------------------------------------------------------------
// Corpus constructors
// ---------------------------------------------------------------------------

/// Fan of projective space of dimension `n`: rays `e_1..e_n` and
/// `-(e_1+...+e_n)`, maximal cones all `n`-subsets.
pub fn projective_space(n: usize) -> Fan {
    assert!(n >= 1);
    let mut rays: Vec<Vec<i64>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { 1 } else { 0 }).collect()).collect();
    rays.push(vec![-1; n]);
    let max_cones: Vec<Vec<usize>> =
        (0..=n).map(|skip| (0..=n).filter(|&i| i != skip).collect()).collect();
    Fan::new(n, rays, max_cones).expect("projective space fan is valid")
}

/// Hirzebruch surface fan `F_a`: rays (1,0), (0,1), (-1,a), (0,-1) with the
/// four cyclic cones. `hirzebruch(0)` is the fan of P^1 x P^1.
pub fn hirzebruch(a: i64) -> Fan {
    assert!(a >= 0);
    let rays = vec![vec![1, 0], vec![0, 1], vec![-1, a], vec![0, -1]];
    let max_cones = vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]];
    Fan::new(2, rays, max_cones).expect("Hirzebruch fan is valid")
}

/// Product fan: direct sum of lattices, products of maximal cones.
pub fn product(a: &Fan, b: &Fan) -> Fan {
    let n = a.rank() + b.rank();
    let a_data = a.data();
    let b_data = b.data();
    let mut rays: Vec<Vec<i64>> = Vec::new();
    for r in &a_data.rays {
        let mut v = r.clone();
        v.extend(std::iter::repeat(0).take(b.rank()));
        rays.push(v);
    }
    for r in &b_data.rays {
        let mut v: Vec<i64> = std::iter::repeat(0).take(a.rank()).collect();
        v.extend(r.iter().copied());
        rays.push(v);
    }
    let offset = a.num_rays();
    let mut max_cones = Vec::new();
    for ca in &a_data.max_cones {
        for cb in &b_data.max_cones {
            let mut c = ca.clone();
            c.extend(cb.iter().map(|&i| i + offset));
            max_cones.push(c);
        }
    }
    Fan::new(n, rays, max_cones).expect("product fan is valid")
}

/// Applies `steps` random star subdivisions of two-dimensional cones to a
/// smooth fan, deterministically from the seed. The result has
/// `base.num_rays() + steps` rays and stays smooth (and complete when the
/// base is).
pub fn random_smooth_blowup_tower(base: &Fan, seed: u64, steps: usize) -> Result<Fan> {
    if !base.is_smooth() {
        return Err(Error::NotSmooth("blow-up towers need a smooth base fan".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fan = base.clone();
    for _ in 0..steps {
        let candidates: Vec<Cone> = fan
            .all_cones()
            .iter()
            .filter(|c| fan.cone_dim(c) == Some(2) && c.len() == 2)
            .cloned()
            .collect();
        let pick = candidates[rng.gen_range(0..candidates.len())].clone();
        let (next, _) = fan.star_subdivision(&pick)?;
        fan = next;
    }
    Ok(fan)
}

/// Tests whether two fans differ only by a relabeling of rays and a
/// unimodular change of lattice coordinates.
pub fn fans_isomorphic(a: &Fan, b: &Fan) -> bool {
    if a.rank() != b.rank()
        || a.num_rays() != b.num_rays()
        || a.max_cones().len() != b.max_cones().len()
    {
        return false;
    }
    let n = a.rank();
    // An independent spanning subset of the rays of the first maximal cone.
    let cone_a = &a.max_cones()[0];
    let mut chosen: Vec<usize> = Vec::new();
    for &ri in cone_a.rays() {
        let mut test: Vec<LatticeVector> = chosen.iter().map(|&i| a.ray(i).clone()).collect();
        test.push(a.ray(ri).clone());
        let len = test.len();
        if int_rank(&Mat::from_rows_with_cols(test, n)) == len {
            chosen.push(ri);
        }
        if chosen.len() == n {
            break;
        }
    }
    if chosen.len() < n {
        return false;
    }
    // Rows of va are the chosen rays; a candidate matrix T must satisfy
    // T * ray = image ray, i.e. va * T^t = wb.
    let va = Mat::from_rows_with_cols(chosen.iter().map(|&i| a.ray(i).clone()).collect(), n)
        .map(|x| Rat::from_integer(x.clone()));
    for cone_b in b.max_cones() {
        for assignment in permutations_of_size(cone_b.rays(), n) {
            let mut t_cols: Vec<Vec<Rat>> = Vec::new();
            let mut ok = true;
            for col in 0..n {
                let rhs: Vec<Rat> = assignment
                    .iter()
                    .map(|&i| Rat::from_integer(b.ray(i)[col].clone()))
                    .collect();
                match crate::linalg::solve(&va, &rhs) {
                    Some(sol) if sol.iter().all(|x| x.denom().is_one()) => t_cols.push(sol),
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            // t_cols[c] is row c of T^t, i.e. column c of ... assemble T with
            // T[r][c] = t_cols[r][c]: row r of T is t_cols[r].
            let t = Mat::from_rows_with_cols(
                t_cols.iter().map(|row| row.iter().map(|x| x.numer().clone()).collect()).collect(),
                n,
            );
            let s = smith(&t);
            if s.rank != n || !s.factors.iter().all(One::is_one) {
                continue;
            }
            let mut perm: Vec<Option<usize>> = vec![None; a.num_rays()];
            let mut valid = true;
            for (i, ray) in a.rays().iter().enumerate() {
                let image: LatticeVector = t.mul_vec(ray);
                match b.rays().iter().position(|r| *r == image) {
                    Some(j) => perm[i] = Some(j),
                    None => {
                        valid = false;
                        break;
                    }
                }
            }
            if !valid {
                continue;
            }
            let mapped: BTreeSet<Cone> = a
                .max_cones()
                .iter()
                .map(|c| Cone::new(c.rays().iter().map(|&i| perm[i].unwrap()).collect()))
                .collect();
            let target: BTreeSet<Cone> = b.max_cones().iter().cloned().collect();
            if mapped == target {
                return true;
            }
        }
    }
    false
}

fn permutations_of_size(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn rec(
        items: &[usize],
        k: usize,
        used: &mut Vec<bool>,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in 0..items.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            current.push(items[i]);
            rec(items, k, used, current, out);
            current.pop();
            used[i] = false;
        }
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    let mut used = vec![false; items.len()];
    rec(items, k, &mut used, &mut current, &mut out);
    out
}
