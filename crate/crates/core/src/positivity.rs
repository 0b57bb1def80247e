//! Positivity of Cartier divisors on complete fans: nef, ample, globally
//! generated and big, togther with the executable forms of the structural
//! results that relate them — the nef and ampleness criteria by wall
//! degrees, the factorization of nef-and-big divisors through a coarser
//! fan, base-locus curves, and the Fujita-type global generation and very
//! ampleness statements with their projective-space exceptions.
//!
//! Global generation is deliberately computed from the convexity
//! certificate of the support function, while nef-ness comes from wall
//! degrees; the two must coincide on every input, and any disagreement is
//! reported as a theorem violation rather than silently resolved.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::divisor::{
    canonical_divisor, cartier_data, class_group, is_convex, is_strictly_convex, polytope, QCartierData, WeilDivisor,
};
use crate::fan::{Cone, Fan, Wall};
use crate::intersect::{all_wall_degrees, min_curve_degree, pullback, wall_curve_degree};
use crate::{Error, Int, Rat, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TriState {
    Yes,
    No,
    NotApplicable,
}

/// Everything the positivity pipeline knows about one divisor.
#[derive(Clone, Debug)]
pub struct PositivityProfile {
    pub nef: bool,
    pub globally_generated: bool,
    pub ample: bool,
    /// Equal to ampleness on smooth fans; not claimed elsewhere.
    pub very_ample: TriState,
    /// Defined only for nef divisors (full-dimensional divisor polytope).
    pub big: Option<bool>,
    pub min_degree: Rat,
    /// A wall attaining the minimal degree.
    pub witness: Option<Wall>,
}

/// Nef: nonnegative degree on every invariant curve. Requires a Cartier
/// divisor on a complete fan.
pub fn is_nef(fan: &Fan, divisor: &WeilDivisor) -> Result<bool> {
    cartier_data(fan, divisor)?;
    Ok(all_wall_degrees(fan, divisor)?.iter().all(|wd| !wd.value.is_negative()))
}

/// Ample: strictly positive degree on every invariant curve.
pub fn is_ample(fan: &Fan, divisor: &WeilDivisor) -> Result<bool> {
    cartier_data(fan, divisor)?;
    Ok(all_wall_degrees(fan, divisor)?.iter().all(|wd| wd.value.is_positive()))
}

/// Globally generated: the support function is convex. Computed on an
/// independent code path from [`is_nef`] and cross-checked against it; a
/// mismatch is a theorem violation.
pub fn is_globally_generated(fan: &Fan, divisor: &WeilDivisor) -> Result<bool> {
    let data = QCartierData::from_cartier(&cartier_data(fan, divisor)?);
    let convex = is_convex(fan, &data)?;
    let nef = all_wall_degrees(fan, divisor)?.iter().all(|wd| !wd.value.is_negative());
    if convex != nef {
        return Err(Error::TheoremViolation(format!(
            "support-function convexity ({convex}) disagrees with nonnegative wall degrees ({nef}) for {divisor}"
        )));
    }
    Ok(convex)
}

/// Very ample: equals ample on smooth complete fans; no claim is made on
/// singular ones.
pub fn is_very_ample(fan: &Fan, divisor: &WeilDivisor) -> Result<TriState> {
    if !fan.is_smooth() {
        return Ok(TriState::NotApplicable);
    }
    Ok(if is_ample(fan, divisor)? { TriState::Yes } else { TriState::No })
}

/// Big (for nef divisors): the divisor polytope has full dimension.
pub fn is_big(fan: &Fan, divisor: &WeilDivisor) -> Result<bool> {
    if !is_nef(fan, divisor)? {
        return Err(Error::Input(
            "bigness is computed by polytope dimension, which needs a nef divisor; \
             non-nef bigness is not supported"
                .into(),
        ));
    }
    let p = polytope(fan, &divisor.to_q())?;
    Ok(p.dim == fan.rank() as i64)
}

pub fn positivity_profile(fan: &Fan, divisor: &WeilDivisor) -> Result<PositivityProfile> {
    let degrees = all_wall_degrees(fan, divisor)?;
    let nef = degrees.iter().all(|wd| !wd.value.is_negative());
    let ample = degrees.iter().all(|wd| wd.value.is_positive());
    let globally_generated = is_globally_generated(fan, divisor)?;
    let very_ample = is_very_ample(fan, divisor)?;
    let big = if nef { Some(is_big(fan, divisor)?) } else { None };
    let (min_degree, witness) = degrees
        .iter()
        .min_by(|a, b| a.value.cmp(&b.value))
        .map(|wd| (wd.value.clone(), Some(wd.wall.clone())))
        .expect("complete fans have walls");
    Ok(PositivityProfile { nef, globally_generated, ample, very_ample, big, min_degree, witness })
}

/// Walls whose invariant curve has negative degree; nonempty iff the
/// divisor is not globally generated, so its base locus contains an
/// invariant curve exactly when this list is nonempty.
pub fn base_locus_curves(fan: &Fan, divisor: &WeilDivisor) -> Result<Vec<Wall>> {
    Ok(all_wall_degrees(fan, divisor)?
        .into_iter()
        .filter(|wd| wd.value.is_negative())
        .map(|wd| wd.wall)
        .collect())
}

/// A nef-and-big divisor factored through a coarser fan carrying an ample
/// divisor with the same support function.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub coarse: Fan,
    /// For each maximal cone of the fine fan, the index of the coarse
    /// maximal cone containing it.
    pub cone_map: Vec<usize>,
    pub ample_divisor: WeilDivisor,
}

/// Builds the normal fan of the divisor polytope by merging maximal cones
/// with equal local functionals, and certifies that the given divisor is
/// the pullback of an ample divisor from there.
pub fn nef_big_factorization(fan: &Fan, divisor: &WeilDivisor) -> Result<Factorization> {
    let cd = cartier_data(fan, divisor)?;
    if !is_nef(fan, divisor)? {
        return Err(Error::Input("factorization needs a nef divisor".into()));
    }
    let p = polytope(fan, &divisor.to_q())?;
    if p.dim != fan.rank() as i64 {
        return Err(Error::Input("factorization needs a big divisor".into()));
    }
    // The local functionals must be exactly the vertices of the polytope.
    let vertex_set: std::collections::BTreeSet<Vec<Rat>> = p.vertices.iter().cloned().collect();
    let functional_set: std::collections::BTreeSet<Vec<Rat>> =
        cd.u.iter().map(|u| crate::scalar::to_ratio_vec(u)).collect();
    if vertex_set != functional_set {
        return Err(Error::TheoremViolation(
            "polytope vertices differ from the set of local functionals of a nef and big divisor"
                .into(),
        ));
    }

    let mut groups: BTreeMap<Vec<Int>, Vec<usize>> = BTreeMap::new();
    for (i, u) in cd.u.iter().enumerate() {
        groups.entry(u.clone()).or_default().push(i);
    }
    let distinct: Vec<Vec<Int>> = groups.keys().cloned().collect();
    // Every extreme ray of a merged cone is a ray of the fine fan, so the
    // coarse fan reuses the fine ray indexing (restricted to surviving
    // rays). An already-ample divisor factors through the identity.
    let mut used_fine_rays: Vec<Vec<usize>> = Vec::new();
    for u in groups.keys() {
        let normals: Vec<Vec<Int>> = distinct
            .iter()
            .filter(|other| *other != u)
            .map(|other| other.iter().zip(u).map(|(a, b)| a - b).collect())
            .collect();
        let rays = crate::geometry::extreme_rays(fan.rank(), &normals, &[])?;
        let fine_indices = rays
            .iter()
            .map(|r| {
                fan.rays().iter().position(|v| v == r).ok_or_else(|| {
                    Error::Internal("merged cone has an extreme ray outside the fine fan".into())
                })
            })
            .collect::<Result<Vec<usize>>>()?;
        used_fine_rays.push(fine_indices);
    }
    let mut surviving: Vec<usize> = used_fine_rays.iter().flatten().copied().collect();
    surviving.sort_unstable();
    surviving.dedup();
    let reindex: BTreeMap<usize, usize> =
        surviving.iter().enumerate().map(|(new, &old)| (old, new)).collect();
    let coarse_rays: Vec<Vec<i64>> = surviving
        .iter()
        .map(|&i| fan.ray(i).iter().map(|c| i64::try_from(c).expect("ray fits i64")).collect())
        .collect();
    let coarse_cones: Vec<Vec<usize>> = used_fine_rays
        .iter()
        .map(|fine| fine.iter().map(|i| reindex[i]).collect())
        .collect();
    let coarse = Fan::new(fan.rank(), coarse_rays, coarse_cones)?;
    if !coarse.is_complete() {
        return Err(Error::TheoremViolation(
            "normal fan of a full-dimensional divisor polytope failed the completeness check"
                .into(),
        ));
    }
    // The coarse divisor shares the support function.
    let mut coeffs = Vec::with_capacity(coarse.num_rays());
    for ray in coarse.rays() {
        let mut best: Option<Rat> = None;
        for u in groups.keys() {
            let v = crate::linalg::dot(&crate::scalar::to_ratio_vec(u), &crate::scalar::to_ratio_vec(ray));
            best = Some(match best {
                None => v,
                Some(b) if v < b => v,
                Some(b) => b,
            });
        }
        let value = best.expect("at least one functional");
        if !value.denom().is_one() {
            return Err(Error::Internal("support function non-integral on a coarse ray".into()));
        }
        coeffs.push(-value.numer().clone());
    }
    let ample_divisor = WeilDivisor(coeffs);
    if !is_ample(&coarse, &ample_divisor)? {
        return Err(Error::TheoremViolation(
            "coarse divisor of a nef and big factorization is not ample".into(),
        ));
    }
    let pulled = pullback(&coarse, &ample_divisor, fan)?;
    if pulled != *divisor {
        return Err(Error::TheoremViolation(
            "pullback of the coarse ample divisor differs from the original divisor".into(),
        ));
    }
    // Each fine maximal cone sits in the coarse cone of its group; the
    // indices shift because Fan sorts maximal cones, so recover them by
    // geometry.
    let mut cone_map = Vec::with_capacity(fan.max_cones().len());
    for cone in fan.max_cones() {
        let rays = fan.cone_ray_vectors(cone);
        let coarse_idx = (0..coarse.max_cones().len())
            .find(|&ci| rays.iter().all(|r| coarse.max_geom(ci).contains_int(r)))
            .ok_or_else(|| Error::Internal("fine cone not contained in any coarse cone".into()))?;
        cone_map.push(coarse_idx);
    }
    Ok(Factorization { coarse, cone_map, ample_divisor })
}

// ---------------------------------------------------------------------------
// Fujita-type statements
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FujitaOutcome {
    Holds,
    ProjectiveSpaceException,
    HypothesisNotMet,
}

#[derive(Clone, Debug)]
pub struct FujitaVerdict {
    pub outcome: FujitaOutcome,
    pub detail: String,
    /// For `HypothesisNotMet`, a wall with too-small degree.
    pub witness: Option<Wall>,
}

fn check_fujita_preconditions(fan: &Fan, divisor: &WeilDivisor, primes: &[usize]) -> Result<()> {
    crate::divisor::check_len(fan, divisor.len())?;
    if !fan.is_smooth() {
        return Err(Error::NotSmooth("the global generation bound needs a smooth fan".into()));
    }
    if !fan.is_complete() {
        return Err(Error::NotComplete("the global generation bound needs a complete fan".into()));
    }
    let mut seen = std::collections::BTreeSet::new();
    for &p in primes {
        if p >= fan.num_rays() {
            return Err(Error::Input(format!("prime divisor index {p} out of range")));
        }
        if !seen.insert(p) {
            return Err(Error::Input(format!("prime divisor index {p} repeated")));
        }
    }
    Ok(())
}

/// The class of `divisor` equals `multiple` times the nef generator of the
/// rank-one class group of projective space.
fn is_multiple_of_hyperplane(fan: &Fan, divisor: &WeilDivisor, multiple: i64) -> bool {
    let cl = class_group(fan);
    let mut unit = vec![Int::zero(); fan.num_rays()];
    unit[0] = Int::one();
    let h = cl.project(&WeilDivisor(unit));
    let target: Vec<Int> = h.free.iter().map(|x| x * Int::from(multiple)).collect();
    cl.project(divisor).free == target
}

fn residual(_fan: &Fan, divisor: &WeilDivisor, primes: &[usize]) -> WeilDivisor {
    let mut coeffs = divisor.0.clone();
    for &p in primes {
        coeffs[p] -= 1;
    }
    WeilDivisor(coeffs)
}

/// Global generation bound: a line bundle meeting every invariant curve
/// with degree at least `n` keeps global generation after subtracting any
/// set of distinct prime invariant divisors, except for the anticanonical
/// situation on projective space itself.
pub fn fujita_global_generation(
    fan: &Fan,
    divisor: &WeilDivisor,
    primes: &[usize],
) -> Result<FujitaVerdict> {
    check_fujita_preconditions(fan, divisor, primes)?;
    let n = fan.rank();
    let (min, wall) = min_curve_degree(fan, divisor)?;
    if min < Rat::from_integer(Int::from(n as i64)) {
        return Ok(FujitaVerdict {
            outcome: FujitaOutcome::HypothesisNotMet,
            detail: format!(
                "minimal curve degree {min} on wall {:?} is below the required {n}",
                wall.tau.rays()
            ),
            witness: Some(wall),
        });
    }
    if fan.is_projective_space()
        && primes.len() == n + 1
        && is_multiple_of_hyperplane(fan, divisor, n as i64)
    {
        return Ok(FujitaVerdict {
            outcome: FujitaOutcome::ProjectiveSpaceException,
            detail: format!(
                "projective {n}-space with the degree-{n} bundle and all {} prime divisors",
                n + 1
            ),
            witness: None,
        });
    }
    let res = residual(fan, divisor, primes);
    if !is_globally_generated(fan, &res)? {
        return Err(Error::TheoremViolation(format!(
            "global generation bound failed: {res} is not globally generated \
             although the degree hypothesis holds and the exception does not apply"
        )));
    }
    Ok(FujitaVerdict {
        outcome: FujitaOutcome::Holds,
        detail: format!("{res} is globally generated"),
        witness: None,
    })
}

/// Very ampleness bound: degree at least `n + 1` on every invariant curve
/// keeps very ampleness after subtracting distinct prime divisors, with
/// the analogous projective-space exception.
pub fn fujita_very_ample(
    fan: &Fan,
    divisor: &WeilDivisor,
    primes: &[usize],
) -> Result<FujitaVerdict> {
    check_fujita_preconditions(fan, divisor, primes)?;
    let n = fan.rank();
    let (min, wall) = min_curve_degree(fan, divisor)?;
    if min < Rat::from_integer(Int::from((n + 1) as i64)) {
        return Ok(FujitaVerdict {
            outcome: FujitaOutcome::HypothesisNotMet,
            detail: format!(
                "minimal curve degree {min} on wall {:?} is below the required {}",
                wall.tau.rays(),
                n + 1
            ),
            witness: Some(wall),
        });
    }
    if fan.is_projective_space()
        && primes.len() == n + 1
        && is_multiple_of_hyperplane(fan, divisor, (n + 1) as i64)
    {
        return Ok(FujitaVerdict {
            outcome: FujitaOutcome::ProjectiveSpaceException,
            detail: format!(
                "projective {n}-space with the degree-{} bundle and all {} prime divisors",
                n + 1,
                n + 1
            ),
            witness: None,
        });
    }
    let res = residual(fan, divisor, primes);
    if !is_ample(fan, &res)? {
        return Err(Error::TheoremViolation(format!(
            "very ampleness bound failed: {res} is not ample \
             although the degree hypothesis holds and the exception does not apply"
        )));
    }
    Ok(FujitaVerdict {
        outcome: FujitaOutcome::Holds,
        detail: format!("{res} is ample, hence very ample on a smooth fan"),
        witness: None,
    })
}

/// Adjoint global generation: twisting by the canonical divisor is the
/// all-primes case of the global generation bound.
pub fn adjoint_global_generation(fan: &Fan, divisor: &WeilDivisor) -> Result<FujitaVerdict> {
    let all: Vec<usize> = (0..fan.num_rays()).collect();
    fujita_global_generation(fan, divisor, &all)
}

/// Adjoint very ampleness: the all-primes case of the very ampleness bound.
pub fn adjoint_very_ample(fan: &Fan, divisor: &WeilDivisor) -> Result<FujitaVerdict> {
    let all: Vec<usize> = (0..fan.num_rays()).collect();
    fujita_very_ample(fan, divisor, &all)
}

/// One induction step: if every curve degree is at least `l`, subtracting
/// one prime divisor drops the minimum by at most one.
pub fn induction_step_check(fan: &Fan, divisor: &WeilDivisor, l: i64, j: usize) -> Result<bool> {
    check_fujita_preconditions(fan, divisor, &[j])?;
    if l < 1 {
        return Err(Error::Input("the induction step needs l >= 1".into()));
    }
    let (min, _) = min_curve_degree(fan, divisor)?;
    if min < Rat::from_integer(Int::from(l)) {
        return Err(Error::Input(format!("minimal curve degree {min} is below l = {l}")));
    }
    let (after, _) = min_curve_degree(fan, &residual(fan, divisor, &[j]))?;
    Ok(after >= Rat::from_integer(Int::from(l - 1)))
}

/// Exact obstruction for subtracting two prime divisors from an ample
/// bundle: global generation fails iff some wall curve has degree one and
/// extends to maximal cones with both given rays.
pub fn two_divisor_gg_obstruction(
    fan: &Fan,
    divisor: &WeilDivisor,
    j1: usize,
    j2: usize,
) -> Result<(bool, Option<Wall>)> {
    check_fujita_preconditions(fan, divisor, &[j1, j2])?;
    if !is_ample(fan, divisor)? {
        return Err(Error::Input("the two-divisor obstruction is stated for ample divisors".into()));
    }
    let not_gg = !is_globally_generated(fan, &residual(fan, divisor, &[j1, j2]))?;
    let mut witness = None;
    for wall in fan.walls()? {
        if wall.tau.contains_index(j1) || wall.tau.contains_index(j2) {
            continue;
        }
        let with_j1 = wall.tau.with(j1);
        let with_j2 = wall.tau.with(j2);
        let spans = |c: &Cone| fan.max_cones().iter().any(|m| m == c);
        if !spans(&with_j1) || !spans(&with_j2) {
            continue;
        }
        if wall_curve_degree(fan, divisor, wall)?.is_one() {
            witness = Some(wall.clone());
            break;
        }
    }
    if not_gg != witness.is_some() {
        return Err(Error::TheoremViolation(format!(
            "two-divisor obstruction mismatch for {divisor} minus rays {j1},{j2}: \
             not globally generated = {not_gg}, witness wall found = {}",
            witness.is_some()
        )));
    }
    Ok((not_gg, witness))
}

/// Exact obstruction for ampleness of `divisor - D_j`: fails iff some wall
/// curve of degree one spans a maximal cone with ray `j`.
pub fn ample_minus_divisor_obstruction(
    fan: &Fan,
    divisor: &WeilDivisor,
    j: usize,
) -> Result<(bool, Option<Wall>)> {
    check_fujita_preconditions(fan, divisor, &[j])?;
    if !is_ample(fan, divisor)? {
        return Err(Error::Input("the obstruction is stated for ample divisors".into()));
    }
    let not_ample = !is_ample(fan, &residual(fan, divisor, &[j]))?;
    let mut witness = None;
    for wall in fan.walls()? {
        if wall.tau.contains_index(j) {
            continue;
        }
        let with_j = wall.tau.with(j);
        if !fan.max_cones().iter().any(|m| *m == with_j) {
            continue;
        }
        if wall_curve_degree(fan, divisor, wall)?.is_one() {
            witness = Some(wall.clone());
            break;
        }
    }
    if not_ample != witness.is_some() {
        return Err(Error::TheoremViolation(format!(
            "ampleness obstruction mismatch for {divisor} minus ray {j}: \
             not ample = {not_ample}, witness wall found = {}",
            witness.is_some()
        )));
    }
    Ok((not_ample, witness))
}

/// Bulk evaluator for positivity sweeps on smooth complete fans.
///
/// Wall degrees and local functionals are linear in the divisor, so they
/// are precomputed per unit coefficient vector once (through the same
/// checked code paths as the one-shot operations) and combined in machine
/// integers afterwards. Values stay far below the i64 range at the fan
/// sizes this crate targets; constructors verify the conversion.
pub struct SweepEngine<'a> {
    fan: &'a Fan,
    /// `unit_degrees[i][w]`: degree of the i-th unit divisor on wall w.
    unit_degrees: Vec<Vec<i64>>,
    /// `unit_u[i][sigma]`: local functional of the i-th unit divisor.
    unit_u: Vec<Vec<Vec<i64>>>,
    /// Convexity checks: `(near cone, far cone, far ray)` per wall and
    /// orientation.
    convexity_probes: Vec<(usize, usize, usize)>,
    rays: Vec<Vec<i64>>,
}

impl<'a> SweepEngine<'a> {
    pub fn new(fan: &'a Fan) -> Result<Self> {
        if !fan.is_smooth() || !fan.is_complete() {
            return Err(Error::Input("sweeps need a smooth complete fan".into()));
        }
        let d = fan.num_rays();
        let walls = fan.walls()?;
        let mut unit_degrees = Vec::with_capacity(d);
        let mut unit_u = Vec::with_capacity(d);
        for i in 0..d {
            let mut coeffs = vec![Int::zero(); d];
            coeffs[i] = Int::one();
            let unit = WeilDivisor(coeffs);
            let degrees: Vec<i64> = crate::intersect::all_wall_degrees(fan, &unit)?
                .into_iter()
                .map(|wd| {
                    debug_assert!(wd.value.denom().is_one());
                    i64::try_from(wd.value.numer()).expect("unit degree fits i64")
                })
                .collect();
            unit_degrees.push(degrees);
            let cd = cartier_data(fan, &unit)?;
            unit_u.push(
                cd.u.iter()
                    .map(|u| {
                        u.iter()
                            .map(|x| i64::try_from(x).expect("unit functional fits i64"))
                            .collect()
                    })
                    .collect(),
            );
        }
        let mut convexity_probes = Vec::new();
        for wall in walls {
            for (near, far) in [(wall.sigma1, wall.sigma2), (wall.sigma2, wall.sigma1)] {
                let near_cone = &fan.max_cones()[near];
                for &ri in fan.max_cones()[far].rays() {
                    if !near_cone.contains_index(ri) {
                        convexity_probes.push((near, far, ri));
                    }
                }
            }
        }
        let rays = fan
            .rays()
            .iter()
            .map(|r| r.iter().map(|x| i64::try_from(x).expect("ray fits i64")).collect())
            .collect();
        Ok(SweepEngine { fan, unit_degrees, unit_u, convexity_probes, rays })
    }

    pub fn fan(&self) -> &Fan {
        self.fan
    }

    pub fn wall_count(&self) -> usize {
        self.unit_degrees.first().map_or(0, Vec::len)
    }

    pub fn degrees(&self, coeffs: &[i64]) -> Vec<i64> {
        let walls = self.wall_count();
        let mut out = vec![0i64; walls];
        for (a, unit) in coeffs.iter().zip(&self.unit_degrees) {
            if *a == 0 {
                continue;
            }
            for (acc, u) in out.iter_mut().zip(unit) {
                *acc += a * u;
            }
        }
        out
    }

    pub fn min_degree(&self, coeffs: &[i64]) -> (i64, usize) {
        let degrees = self.degrees(coeffs);
        let (mut best, mut arg) = (degrees[0], 0);
        for (w, v) in degrees.iter().enumerate().skip(1) {
            if *v < best {
                best = *v;
                arg = w;
            }
        }
        (best, arg)
    }

    pub fn is_nef(&self, coeffs: &[i64]) -> bool {
        self.degrees(coeffs).iter().all(|v| *v >= 0)
    }

    pub fn is_ample(&self, coeffs: &[i64]) -> bool {
        self.degrees(coeffs).iter().all(|v| *v > 0)
    }

    fn functionals(&self, coeffs: &[i64]) -> Vec<Vec<i64>> {
        let t = self.fan.max_cones().len();
        let n = self.fan.rank();
        let mut out = vec![vec![0i64; n]; t];
        for (a, per_cone) in coeffs.iter().zip(&self.unit_u) {
            if *a == 0 {
                continue;
            }
            for (acc, u) in out.iter_mut().zip(per_cone) {
                for (x, y) in acc.iter_mut().zip(u) {
                    *x += a * y;
                }
            }
        }
        out
    }

    /// The support-function convexity certificate, evaluated on the
    /// precomputed wall probes.
    pub fn is_convex(&self, coeffs: &[i64]) -> bool {
        let u = self.functionals(coeffs);
        self.convexity_probes.iter().all(|&(near, far, ri)| {
            let ray = &self.rays[ri];
            let near_val: i64 = u[near].iter().zip(ray).map(|(a, b)| a * b).sum();
            let far_val: i64 = u[far].iter().zip(ray).map(|(a, b)| a * b).sum();
            far_val <= near_val
        })
    }

    /// Global generation with the nef cross-check, as in
    /// [`is_globally_generated`] but in bulk arithmetic.
    pub fn globally_generated_checked(&self, coeffs: &[i64]) -> Result<bool> {
        let convex = self.is_convex(coeffs);
        let nef = self.is_nef(coeffs);
        if convex != nef {
            return Err(Error::TheoremViolation(format!(
                "support-function convexity ({convex}) disagrees with nonnegative wall \
                 degrees ({nef}) for coefficients {coeffs:?}"
            )));
        }
        Ok(convex)
    }
}

/// Seeded probe for the existence of an ample class: tries random small
/// divisors for strict convexity. A `false` answer is only evidence, not
/// proof, that no ample class exists.
pub fn has_ample_class_probe(fan: &Fan, tries: usize) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(0xa3b1e);
    let d = fan.num_rays();
    for _ in 0..tries {
        let coeffs: Vec<Int> = (0..d).map(|_| Int::from(rng.gen_range(0..=4i64))).collect();
        let div = WeilDivisor(coeffs);
        let Ok(cd) = cartier_data(fan, &div) else {
            continue;
        };
        if is_strictly_convex(fan, &QCartierData::from_cartier(&cd)).unwrap_or(false) {
            return true;
        }
    }
    false
}

/// The anticanonical shift `divisor + K_X`, used by the adjoint bounds.
pub fn adjoint_divisor(fan: &Fan, divisor: &WeilDivisor) -> WeilDivisor {
    divisor.add(&canonical_divisor(fan))
}
