//! Exact polyhedral kernel for rational convex cones.
//!
//! Cones appear in two descriptions: generated by rays (V-form) or cut out
//! by linear inequalities and equations (H-form). Conversion between the
//! two goes through extreme-ray enumeration over subsets of active
//! constraints, which is entirely adequate at the scale of fans handled
//! here and keeps everything over exact integers.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::linalg::{dot, int_kernel, kernel, rank, Mat};
use crate::scalar::to_ratio_vec;
use crate::{Error, Int, Rat, Result};

/// Divides out the gcd of the entries, preserving direction.
pub fn primitive(v: &[Int]) -> Result<Vec<Int>> {
    let mut g = Int::from(0);
    for x in v {
        g = num_integer::Integer::gcd(&g, x);
    }
    if g.is_zero() {
        return Err(Error::Input("zero vector has no primitive representative".into()));
    }
    Ok(v.iter().map(|x| x / &g).collect())
}

/// Clears denominators of a rational vector and normalizes to a primitive
/// integer vector with the same direction.
pub fn primitive_of_rational(v: &[Rat]) -> Result<Vec<Int>> {
    let mut lcm = Int::from(1);
    for x in v {
        lcm = num_integer::Integer::lcm(&lcm, x.denom());
    }
    let ints: Vec<Int> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    primitive(&ints)
}

/// Extreme rays of the pointed cone
/// `{x : <n, x> >= 0 for n in normals, <e, x> = 0 for e in equalities}`.
///
/// Rays come back primitive, deduplicated, and sorted. Errors if the cone
/// contains a line.
pub fn extreme_rays(
    dim: usize,
    normals: &[Vec<Int>],
    equalities: &[Vec<Int>],
) -> Result<Vec<Vec<Int>>> {
    // Reduce to the subspace cut out by the equalities.
    let basis: Vec<Vec<Int>> = if equalities.is_empty() {
        Mat::<Int>::identity(dim).row_vecs()
    } else {
        let e = Mat::from_rows_with_cols(equalities.to_vec(), dim);
        int_kernel(&e)
    };
    let k = basis.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    // Each normal becomes a functional on the k-dimensional coordinates.
    let reduced: Vec<Vec<Int>> =
        normals.iter().map(|n| basis.iter().map(|b| dot(n, b)).collect()).collect();

    let reduced_q =
        Mat::from_rows_with_cols(reduced.clone(), k).map(|x| Rat::from_integer(x.clone()));
    if !kernel(&reduced_q).is_empty() {
        return Err(Error::Input("cone is not strongly convex (contains a line)".into()));
    }

    let mut found: BTreeSet<Vec<Int>> = BTreeSet::new();
    for subset in subsets_of_size(reduced.len(), k - 1) {
        let rows: Vec<Vec<Rat>> = subset.iter().map(|&i| to_ratio_vec(&reduced[i])).collect();
        let m = Mat::from_rows_with_cols(rows, k);
        if rank(&m) + 1 != k {
            continue;
        }
        let ker = kernel(&m);
        debug_assert_eq!(ker.len(), 1);
        let z = primitive_of_rational(&ker[0])?;
        for candidate in [z.clone(), z.iter().map(|x| -x).collect::<Vec<Int>>()] {
            if reduced.iter().all(|n| !dot(n, &candidate).is_negative()) {
                let ambient: Vec<Int> = (0..dim)
                    .map(|c| candidate.iter().zip(&basis).map(|(z, b)| z * &b[c]).sum::<Int>())
                    .collect();
                found.insert(primitive(&ambient)?);
            }
        }
    }
    Ok(found.into_iter().collect())
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    rec(0, n, k, &mut current, &mut out);
    out
}

/// H-form of a cone generated by rays, together with the incidence of rays
/// on facets. Facet normals live in the span of the cone, so that the cone
/// is exactly `{x : equalities(x) = 0, facet_normals(x) >= 0}`.
#[derive(Clone, Debug)]
pub struct ConeGeom {
    pub dim: usize,
    /// Basis of the functionals vanishing on the span of the cone.
    pub span_equalities: Vec<Vec<Int>>,
    pub facet_normals: Vec<Vec<Int>>,
    /// For each facet, the indices (into the defining ray list) of the rays
    /// lying on it.
    pub facet_rays: Vec<Vec<usize>>,
}

/// Computes the H-form of `cone(rays)` in `Z^ambient_dim`.
///
/// Errors if the cone is not strongly convex.
pub fn cone_geometry(ambient_dim: usize, rays: &[Vec<Int>]) -> Result<ConeGeom> {
    let ray_mat = Mat::from_rows_with_cols(rays.to_vec(), ambient_dim);
    let span_equalities = int_kernel(&ray_mat);
    let dim = ambient_dim - span_equalities.len();
    // The dual cone within the span; its extreme rays are facet normals.
    let facet_normals = extreme_rays(ambient_dim, rays, &span_equalities)
        .map_err(|_| Error::Input("cone is not strongly convex (contains a line)".into()))?;
    // Pointedness: the facet normals must span the span of the cone.
    let normal_rank =
        crate::linalg::int_rank(&Mat::from_rows_with_cols(facet_normals.clone(), ambient_dim));
    if normal_rank != dim {
        return Err(Error::Input("cone is not strongly convex (contains a line)".into()));
    }
    let facet_rays = facet_normals
        .iter()
        .map(|w| {
            rays.iter().enumerate().filter(|(_, r)| dot(w, r).is_zero()).map(|(i, _)| i).collect()
        })
        .collect();
    Ok(ConeGeom { dim, span_equalities, facet_normals, facet_rays })
}

impl ConeGeom {
    pub fn contains_int(&self, x: &[Int]) -> bool {
        self.span_equalities.iter().all(|e| dot(e, x).is_zero())
            && self.facet_normals.iter().all(|w| !dot(w, x).is_negative())
    }

    pub fn contains_rat(&self, x: &[Rat]) -> bool {
        let eval = |v: &Vec<Int>| dot(&to_ratio_vec(v), x);
        self.span_equalities.iter().all(|e| eval(e).is_zero())
            && self.facet_normals.iter().all(|w| !eval(w).is_negative())
    }

    /// `x` lies in the relative interior: on the span, strictly inside
    /// every facet.
    pub fn contains_rat_strictly(&self, x: &[Rat]) -> bool {
        let eval = |v: &Vec<Int>| dot(&to_ratio_vec(v), x);
        self.span_equalities.iter().all(|e| eval(e).is_zero())
            && self.facet_normals.iter().all(|w| eval(w).is_positive())
    }

    /// Ray-index sets of all faces of the cone (the cone itself and, for
    /// pointed cones, the zero face included), via closure of facet
    /// incidences under intersection.
    pub fn face_raysets(&self, nrays: usize) -> BTreeSet<BTreeSet<usize>> {
        let full: BTreeSet<usize> = (0..nrays).collect();
        let mut faces: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        faces.insert(full);
        let facet_sets: Vec<BTreeSet<usize>> =
            self.facet_rays.iter().map(|f| f.iter().copied().collect()).collect();
        loop {
            let mut new_faces = Vec::new();
            for face in &faces {
                for facet in &facet_sets {
                    let inter: BTreeSet<usize> = face.intersection(facet).copied().collect();
                    if !faces.contains(&inter) {
                        new_faces.push(inter);
                    }
                }
            }
            if new_faces.is_empty() {
                break;
            }
            faces.extend(new_faces);
        }
        faces
    }
}
