//! Cohomology of exterior powers of the cotangent sheaf, twisted by line
//! bundles, on smooth complete fans.
//!
//! The sheaf `Omega^j` is the kernel of an explicit graded map from the
//! j-th exterior power of a sum of twisted line modules to copies indexed
//! by a basis of the ray relation lattice. Each torus degree of each
//! localization is spanned by exterior monomials whose shifted degree
//! satisfies the section inequalities, so degreewise everything reduces to
//! ranks of small integer matrices: the Čech differential (signed
//! inclusions) stacked with the presentation map.

use std::collections::{BTreeMap, HashMap};

use num_traits::{Signed, Zero};

use crate::cohomology::cech::{arrangement_box, box_points, CechEngine};
use crate::divisor::{check_len, WeilDivisor};
use crate::fan::Fan;
use crate::linalg::{dot, int_kernel, rank_sparse, Mat};
use crate::{Error, Int, Rat, Result};

/// Basis of the relation lattice among the rays, presenting the cotangent
/// sheaf: the graded map sends the i-th twisted generator to
/// `(r_{0,i} Y_i, ..., r_{e-1,i} Y_i)` over the rows `r_c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerPresentation {
    /// `(d - n) x d`, rows form a basis of `{ r : sum_i r_i v_i = 0 }`.
    pub relation_basis: Vec<Vec<Int>>,
}

/// Computes the saturated relation lattice of the rays of a smooth fan.
pub fn euler_presentation(fan: &Fan) -> Result<EulerPresentation> {
    if !fan.is_smooth() {
        return Err(Error::NotSmooth("the cotangent presentation needs a smooth fan".into()));
    }
    let n = fan.rank();
    let d = fan.num_rays();
    // Columns are the rays: kernel vectors are the relations.
    let mut m = Mat::zero(n, d);
    for (i, ray) in fan.rays().iter().enumerate() {
        for k in 0..n {
            m.set(k, i, ray[k].clone());
        }
    }
    let relation_basis = int_kernel(&m);
    debug_assert_eq!(relation_basis.len(), d - n);
    for r in &relation_basis {
        debug_assert!(fan
            .rays()
            .iter()
            .zip(r)
            .fold(vec![Int::zero(); n], |acc, (v, c)| {
                acc.iter().zip(v).map(|(a, x)| a + c * x).collect()
            })
            .iter()
            .all(Zero::is_zero));
    }
    Ok(EulerPresentation { relation_basis })
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Target {
    /// Čech restriction target: (bigger chart subset, same exterior index).
    Chart(u32, usize),
    /// Presentation target: (same chart subset, smaller exterior mask, row).
    Relation(u32, u128, usize),
}

struct DegreeContext<'e, 'a> {
    engine: &'e CechEngine<'a>,
    relations: &'e [Vec<Int>],
    /// All exterior monomial index sets of size j: bitmask plus sorted
    /// element list.
    exterior: Vec<(u128, Vec<usize>)>,
    nonneg_mask: u128,
    positive_mask: u128,
}

impl DegreeContext<'_, '_> {
    /// A pair (charts L, exterior J) carries a one-dimensional piece iff
    /// the shifted degree is nonnegative on every common ray of L.
    fn admissible(&self, charts: u32, jmask: u128) -> bool {
        let rays = self.engine.subset_ray_mask(charts);
        (rays & jmask) & !self.positive_mask == 0 && (rays & !jmask) & !self.nonneg_mask == 0
    }

    fn basis_at_level(&self, level: usize) -> Vec<(u32, usize)> {
        let mut out = Vec::new();
        if level + 1 > self.engine.cone_count() {
            return out;
        }
        for &l in self.engine.masks_of_size(level + 1) {
            for (ji, (jmask, _)) in self.exterior.iter().enumerate() {
                if self.admissible(l, *jmask) {
                    out.push((l, ji));
                }
            }
        }
        out
    }

    /// Rank of the map whose blocks are the Čech differential (optional)
    /// and the presentation map, emitted column by column.
    fn rank_out(&self, basis: &[(u32, usize)], with_chart_block: bool) -> usize {
        if basis.is_empty() {
            return 0;
        }
        let t = self.engine.cone_count();
        let mut target_ids: HashMap<Target, usize> = HashMap::new();
        let mut columns: Vec<BTreeMap<usize, Rat>> = Vec::with_capacity(basis.len());
        for &(l, ji) in basis {
            let (jmask, jelems) = &self.exterior[ji];
            let mut column = BTreeMap::new();
            if with_chart_block {
                for x in 0..t {
                    let bit = 1u32 << x;
                    if l & bit != 0 {
                        continue;
                    }
                    let sign = if (l & (bit - 1)).count_ones() % 2 == 0 { 1i64 } else { -1 };
                    let next = target_ids.len();
                    let id = *target_ids.entry(Target::Chart(l | bit, ji)).or_insert(next);
                    column.insert(id, Rat::from_integer(Int::from(sign)));
                }
            }
            for (pos, &k) in jelems.iter().enumerate() {
                let sign = if pos % 2 == 0 { 1i64 } else { -1 };
                for (c, row) in self.relations.iter().enumerate() {
                    if row[k].is_zero() {
                        continue;
                    }
                    let smaller = jmask & !(1u128 << k);
                    let next = target_ids.len();
                    let id =
                        *target_ids.entry(Target::Relation(l, smaller, c)).or_insert(next);
                    column.insert(id, Rat::from_integer(Int::from(sign) * &row[k]));
                }
            }
            columns.push(column);
        }
        rank_sparse(columns)
    }
}

fn subsets_with_elements(d: usize, j: usize) -> Vec<(u128, Vec<usize>)> {
    fn rec(start: usize, d: usize, j: usize, cur: &mut Vec<usize>, out: &mut Vec<(u128, Vec<usize>)>) {
        if cur.len() == j {
            let mask = cur.iter().fold(0u128, |m, &i| m | (1u128 << i));
            out.push((mask, cur.clone()));
            return;
        }
        for i in start..d {
            cur.push(i);
            rec(i + 1, d, j, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, d, j, &mut Vec::new(), &mut out);
    out
}

/// Dimension at one fine degree of `H^p` of the degreewise complex of the
/// j-th cotangent power kernel module.
fn piece_for_masks(
    engine: &CechEngine<'_>,
    relations: &[Vec<Int>],
    j: usize,
    nonneg_mask: u128,
    positive_mask: u128,
    p: usize,
) -> usize {
    let ctx = DegreeContext {
        engine,
        relations,
        exterior: subsets_with_elements(engine.fan().num_rays(), j),
        nonneg_mask,
        positive_mask,
    };
    let basis_p = ctx.basis_at_level(p);
    let rank_p = ctx.rank_out(&basis_p, true);
    let (rank_prev, rank_prev_relation_only) = if p == 0 {
        (0, 0)
    } else {
        let basis_prev = ctx.basis_at_level(p - 1);
        (ctx.rank_out(&basis_prev, true), ctx.rank_out(&basis_prev, false))
    };
    let dim = basis_p.len() as i64 - rank_p as i64 - rank_prev as i64
        + rank_prev_relation_only as i64;
    debug_assert!(dim >= 0, "negative cohomology dimension");
    dim.max(0) as usize
}

fn degree_masks(beta: &[Int]) -> (u128, u128) {
    let mut nonneg = 0u128;
    let mut positive = 0u128;
    for (i, b) in beta.iter().enumerate() {
        if !b.is_negative() {
            nonneg |= 1u128 << i;
        }
        if b.is_positive() {
            positive |= 1u128 << i;
        }
    }
    (nonneg, positive)
}

/// `dim` of the fine-degree-`beta` piece of `H^p` of the Čech complex of
/// the j-th cotangent kernel module. Exposed for the homogeneity tests.
pub fn omega_degree_piece(fan: &Fan, j: usize, beta: &[Int], p: usize) -> Result<usize> {
    check_len(fan, beta.len())?;
    if j > fan.rank() {
        return Err(Error::Input(format!("exterior power {j} exceeds the dimension {}", fan.rank())));
    }
    let presentation = euler_presentation(fan)?;
    let engine = CechEngine::new(fan)?;
    let (nonneg, positive) = degree_masks(beta);
    Ok(piece_for_masks(&engine, &presentation.relation_basis, j, nonneg, positive, p))
}

/// `h^p(Omega^j (x) O(D))` on a smooth complete fan, summed over the
/// bounded fine-degree region of the divisor class.
pub fn omega_cohomology(fan: &Fan, j: usize, divisor: &WeilDivisor, p: usize) -> Result<usize> {
    check_len(fan, divisor.len())?;
    if j > fan.rank() {
        return Err(Error::Input(format!("exterior power {j} exceeds the dimension {}", fan.rank())));
    }
    if !fan.is_complete() {
        return Err(Error::NotComplete("cotangent cohomology needs a complete fan".into()));
    }
    let presentation = euler_presentation(fan)?;
    let engine = CechEngine::new(fan)?;
    // Two thresholds per ray: the section inequality for shifted and
    // unshifted exterior coordinates.
    let thresholds: Vec<Vec<Int>> = divisor
        .0
        .iter()
        .map(|a| vec![-a.clone(), Int::from(1) - a])
        .collect();
    let (lo, hi) = arrangement_box(fan, &thresholds)?;
    let mut memo: HashMap<(u128, u128), usize> = HashMap::new();
    let mut total = 0usize;
    for (u, shell) in box_points(&lo, &hi) {
        let beta: Vec<Int> =
            fan.rays().iter().zip(&divisor.0).map(|(v, a)| a + dot(&u, v)).collect();
        let masks = degree_masks(&beta);
        let dim = *memo.entry(masks).or_insert_with(|| {
            piece_for_masks(&engine, &presentation.relation_basis, j, masks.0, masks.1, p)
        });
        if shell && dim != 0 {
            return Err(Error::Internal(format!(
                "fine degree at {u:?} on the enumeration boundary contributes to cohomology"
            )));
        }
        total += dim;
    }
    Ok(total)
}
