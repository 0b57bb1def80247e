//! Restriction-surjectivity workflow: blow up a smooth complete fan along
//! pairwise disjoint invariant subvarieties, twist the pulled-back ample
//! divisor down by the exceptional divisors, and verify that its first
//! cohomology vanishes — which is exactly the obstruction to restricting
//! global sections onto the subvarieties.

use torix_core::cohomology::{cohomology_table, CohomologyTable};
use torix_core::divisor::WeilDivisor;
use torix_core::fan::{Cone, Fan};
use torix_core::intersect::{pullback, restrict_to_subvariety, Restriction};
use torix_core::positivity::is_ample;
use torix_core::{Error, Int, Result};

#[derive(Clone, Debug)]
pub struct SurjectivityReport {
    /// Ray index of each exceptional divisor in the final fan, in target
    /// order. A one-dimensional target is its own exceptional ray.
    pub exceptional_rays: Vec<usize>,
    pub blowup: Fan,
    pub twisted_divisor: WeilDivisor,
    pub twisted_table: CohomologyTable,
    /// Sections of the original divisor.
    pub h0_original: usize,
    /// Sections of each restriction to a target subvariety.
    pub target_sections: Vec<usize>,
    /// `h^0(twisted) == h^0(original) - sum of target sections`; forced by
    /// surjectivity together with `h^1(twisted) = 0`.
    pub dimension_identity: bool,
    /// `h^1(twisted) == 0`; failure contradicts the surjectivity theorem.
    pub surjective: bool,
}

/// Pairwise disjointness of invariant subvarieties: no cone of the fan
/// contains two of the target cones.
fn check_disjoint(fan: &Fan, targets: &[Cone]) -> Result<()> {
    for i in 0..targets.len() {
        for j in i + 1..targets.len() {
            let union = targets[i].union(&targets[j]);
            if fan.all_cones().iter().any(|c| union.is_subset_of(c)) {
                return Err(Error::Input(format!(
                    "targets {:?} and {:?} meet: a cone of the fan contains both",
                    targets[i].rays(),
                    targets[j].rays()
                )));
            }
        }
    }
    Ok(())
}

pub fn run_surjectivity(
    fan: &Fan,
    divisor: &WeilDivisor,
    targets: &[Cone],
) -> Result<SurjectivityReport> {
    if !fan.is_smooth() || !fan.is_complete() {
        return Err(Error::Input("the surjectivity workflow needs a smooth complete fan".into()));
    }
    if targets.is_empty() {
        return Err(Error::Input("no target subvarieties given".into()));
    }
    for tau in targets {
        if tau.is_empty() {
            return Err(Error::Input("the zero cone is the whole variety, not a target".into()));
        }
        if !fan.contains_cone(tau) {
            return Err(Error::Input(format!("cone {:?} is not in the fan", tau.rays())));
        }
    }
    check_disjoint(fan, targets)?;
    if !is_ample(fan, divisor)? {
        return Err(Error::Input("the surjectivity statement needs an ample divisor".into()));
    }

    // Iterated star subdivision. Ray indices of untouched rays are stable,
    // so later targets remain valid; one-dimensional targets are already
    // divisors and need no subdivision.
    let mut blowup = fan.clone();
    let mut exceptional_rays = Vec::with_capacity(targets.len());
    for tau in targets {
        if tau.len() == 1 {
            exceptional_rays.push(tau.rays()[0]);
        } else {
            let (next, e) = blowup.star_subdivision(tau)?;
            blowup = next;
            exceptional_rays.push(e);
        }
    }

    let pulled = pullback(fan, divisor, &blowup)?;
    let mut coeffs = pulled.0.clone();
    for &e in &exceptional_rays {
        coeffs[e] -= 1;
    }
    let twisted_divisor = WeilDivisor(coeffs);
    let twisted_table = cohomology_table(&blowup, &twisted_divisor)?;

    let h0_original = cohomology_table(fan, divisor)?.dims[0];
    let mut target_sections = Vec::with_capacity(targets.len());
    for tau in targets {
        let count = match restrict_to_subvariety(fan, divisor, tau)? {
            Restriction::Point => 1,
            Restriction::Proper(star, restricted) => cohomology_table(&star, &restricted)?.dims[0],
        };
        target_sections.push(count);
    }
    let restricted_total: usize = target_sections.iter().sum();
    let dimension_identity = twisted_table.dims[0] + restricted_total == h0_original;
    let surjective = twisted_table.dims[1] == 0;
    Ok(SurjectivityReport {
        exceptional_rays,
        blowup,
        twisted_divisor,
        twisted_table,
        h0_original,
        target_sections,
        dimension_identity,
        surjective,
    })
}

/// Parses a target list "0,1;2,3" into cones.
pub fn parse_targets(text: &str) -> Result<Vec<Cone>> {
    text.split(';')
        .map(|part| {
            let rays = part
                .split(',')
                .map(|x| x.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Input(format!("bad target cone '{part}': {e}")))?;
            if rays.is_empty() {
                return Err(Error::Input("empty target cone".into()));
            }
            Ok(Cone::new(rays))
        })
        .collect()
}

/// Ample divisors found by seeded search, for sweep tests.
pub fn sample_ample_divisors(fan: &Fan, seed: u64, count: usize) -> Vec<WeilDivisor> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let d = fan.num_rays();
    let mut out = Vec::new();
    let mut tries = 0;
    while out.len() < count && tries < 4000 {
        tries += 1;
        let coeffs: Vec<Int> = (0..d).map(|_| Int::from(rng.gen_range(0..=4i64))).collect();
        let div = WeilDivisor(coeffs);
        if is_ample(fan, &div).unwrap_or(false) && !out.contains(&div) {
            out.push(div);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use torix_core::fan::{product, projective_space};

    #[test]
    fn p1xp1_two_opposite_points() {
        let p1 = projective_space(1);
        let quadric = product(&p1, &p1);
        // Rays: (1,0),(-1,0),(0,1),(0,-1); opposite fixed points are the
        // cones {0,2} and {1,3}.
        let divisor = WeilDivisor::from_i64(&[1, 0, 1, 0]);
        assert!(is_ample(&quadric, &divisor).unwrap());
        let targets = vec![Cone::new(vec![0, 2]), Cone::new(vec![1, 3])];
        let report = run_surjectivity(&quadric, &divisor, &targets).unwrap();
        assert!(report.surjective);
        assert_eq!(report.h0_original, 4);
        assert_eq!(report.target_sections, vec![1, 1]);
        assert_eq!(report.twisted_table.dims[0], 2);
        assert!(report.dimension_identity);
    }

    #[test]
    fn p2_one_fixed_point() {
        let fan = projective_space(2);
        let divisor = WeilDivisor::from_i64(&[1, 0, 0]);
        let report =
            run_surjectivity(&fan, &divisor, &[Cone::new(vec![0, 1])]).unwrap();
        assert!(report.surjective);
        assert_eq!(report.h0_original, 3);
        assert_eq!(report.target_sections, vec![1]);
        assert!(report.dimension_identity);
    }

    #[test]
    fn divisor_target_needs_no_blowup() {
        let fan = projective_space(2);
        let divisor = WeilDivisor::from_i64(&[2, 0, 0]);
        let report = run_surjectivity(&fan, &divisor, &[Cone::new(vec![2])]).unwrap();
        assert!(report.surjective);
        assert_eq!(report.blowup, fan);
        // Restricting the conic to a line leaves 3 sections of 6.
        assert_eq!(report.h0_original, 6);
        assert_eq!(report.target_sections, vec![3]);
        assert!(report.dimension_identity);
    }

    #[test]
    fn overlapping_targets_rejected() {
        // On P^3 the lines V({0,1}) and V({1,2}) meet in the fixed point
        // of the cone {0,1,2}.
        let p3 = projective_space(3);
        let divisor = WeilDivisor::from_i64(&[1, 0, 0, 0]);
        let overlapping = vec![Cone::new(vec![0, 1]), Cone::new(vec![1, 2])];
        assert!(run_surjectivity(&p3, &divisor, &overlapping).is_err());
        // A ray and a 2-cone containing it also overlap.
        let fan = projective_space(2);
        let divisor = WeilDivisor::from_i64(&[1, 0, 0]);
        let nested = vec![Cone::new(vec![0]), Cone::new(vec![0, 1])];
        assert!(run_surjectivity(&fan, &divisor, &nested).is_err());
        // Non-ample divisors are rejected.
        let not_ample = WeilDivisor::from_i64(&[0, 0, 0]);
        assert!(run_surjectivity(&fan, &not_ample, &[Cone::new(vec![0, 1])]).is_err());
    }

    #[test]
    fn two_fixed_points_of_p2_are_disjoint() {
        // The fixed points of two different maximal cones never meet even
        // when the cones share a ray.
        let fan = projective_space(2);
        let divisor = WeilDivisor::from_i64(&[2, 0, 0]);
        let targets = vec![Cone::new(vec![0, 1]), Cone::new(vec![1, 2])];
        let report = run_surjectivity(&fan, &divisor, &targets).unwrap();
        assert!(report.surjective);
        assert_eq!(report.h0_original, 6);
        assert_eq!(report.target_sections, vec![1, 1]);
        assert!(report.dimension_identity);
    }

    #[test]
    fn parse_target_lists() {
        let targets = parse_targets("0,1;2,3").unwrap();
        assert_eq!(targets, vec![Cone::new(vec![0, 1]), Cone::new(vec![2, 3])]);
        assert!(parse_targets("0,x").is_err());
    }
}
