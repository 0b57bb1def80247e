//! Sheaf cohomology of equivariant reflexive sheaves `O(D)` and of
//! `Omega^j (x) O(D)`, computed one torus degree at a time; graded local
//! cohomology of the Cox ring at the irrelevant ideal; and the vanishing
//! audits built on top.

pub mod cech;
pub mod omega;

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::divisor::{canonical_divisor, cartier_data, check_len, QDivisor, WeilDivisor};
use crate::fan::Fan;
use crate::intersect::all_wall_degrees;
use crate::linalg::dot;
use crate::{Error, Int, LatticeVector, Result};

pub use cech::{fast_piece_dims, CechEngine};
pub use omega::{euler_presentation, omega_cohomology, omega_degree_piece, EulerPresentation};

/// Total cohomology of one divisor, `h^0..h^n`, with an optional per-degree
/// breakdown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyTable {
    pub dims: Vec<usize>,
    pub per_degree: Option<BTreeMap<LatticeVector, Vec<usize>>>,
}

impl CohomologyTable {
    pub fn euler_characteristic(&self) -> Int {
        let mut chi = Int::zero();
        for (i, h) in self.dims.iter().enumerate() {
            let term = Int::from(*h as i64);
            if i % 2 == 0 {
                chi += term;
            } else {
                chi -= term;
            }
        }
        chi
    }

    pub fn higher_all_zero(&self) -> bool {
        self.dims.iter().skip(1).all(|h| *h == 0)
    }
}

/// Dimension of the torus-degree-`u` eigenspace of `H^i(X, O(D))`, from
/// the Čech complex over the maximal-cone cover. Valid on any fan.
pub fn cech_degree_piece(fan: &Fan, divisor: &WeilDivisor, u: &[Int], i: usize) -> Result<usize> {
    check_len(fan, divisor.len())?;
    if u.len() != fan.rank() {
        return Err(Error::Input("degree vector length must equal the fan rank".into()));
    }
    let engine = CechEngine::new(fan)?;
    let mask = engine.satisfied_mask(&divisor.0, u);
    Ok(engine.sheaf_dims(mask, i)[i])
}

/// Full cohomology table of `O(D)` on a complete fan by summation over the
/// bounded degree region.
pub fn cohomology_table(fan: &Fan, divisor: &WeilDivisor) -> Result<CohomologyTable> {
    let engine = CechEngine::new(fan)?;
    cohomology_table_with_engine(&engine, divisor, false)
}

/// As [`cohomology_table`], reusing a per-fan engine (pattern ranks are
/// memoized inside the engine) and optionally recording the per-degree
/// breakdown.
pub fn cohomology_table_with_engine(
    engine: &CechEngine<'_>,
    divisor: &WeilDivisor,
    per_degree: bool,
) -> Result<CohomologyTable> {
    let fan = engine.fan();
    check_len(fan, divisor.len())?;
    if !fan.is_complete() {
        return Err(Error::NotComplete("cohomology tables need a complete fan".into()));
    }
    let n = fan.rank();
    let thresholds: Vec<Vec<Int>> = divisor.0.iter().map(|a| vec![-a.clone()]).collect();
    let (lo, hi) = cech::arrangement_box(fan, &thresholds)?;
    let points = cech::box_points(&lo, &hi);
    let classified: Vec<(LatticeVector, bool, u128)> = points
        .into_par_iter()
        .map(|(u, shell)| {
            let mask = engine.satisfied_mask(&divisor.0, &u);
            (u, shell, mask)
        })
        .collect();
    let mut multiplicity: HashMap<u128, usize> = HashMap::new();
    for (_, _, mask) in &classified {
        *multiplicity.entry(*mask).or_insert(0) += 1;
    }
    let distinct: Vec<u128> = multiplicity.keys().copied().collect();
    let dims_for: HashMap<u128, Vec<usize>> = distinct
        .into_par_iter()
        .map(|mask| {
            let dims = engine.sheaf_dims(mask, n);
            (mask, dims)
        })
        .collect();
    // Nothing may contribute on the outer shell of the expanded box;
    // otherwise the bounded-region argument (hence the table) is wrong.
    for (u, shell, mask) in &classified {
        if *shell && dims_for[mask].iter().any(|d| *d != 0) {
            return Err(Error::Internal(format!(
                "degree {u:?} on the enumeration boundary contributes to cohomology"
            )));
        }
    }
    let mut dims = vec![0usize; n + 1];
    for (mask, count) in &multiplicity {
        for (i, d) in dims_for[mask].iter().enumerate() {
            dims[i] += d * count;
        }
    }
    let per_degree = per_degree.then(|| {
        classified
            .iter()
            .filter(|(_, _, mask)| dims_for[mask].iter().any(|d| *d != 0))
            .map(|(u, _, mask)| (u.clone(), dims_for[mask].clone()))
            .collect()
    });
    Ok(CohomologyTable { dims, per_degree })
}

/// Graded piece `dim H^i_B(S)_alpha` of local cohomology of the Cox ring
/// at the irrelevant ideal.
pub fn local_cohomology_s(fan: &Fan, alpha: &[Int], i: usize) -> Result<usize> {
    check_len(fan, alpha.len())?;
    let engine = CechEngine::new(fan)?;
    Ok(engine.local_dims(cech::nonneg_mask(alpha), i)[i])
}

/// Clamps each coordinate to 0 (nonnegative) or -1 (negative); graded
/// pieces of local cohomology of the Cox ring depend only on this pattern.
pub fn sign_normalize(alpha: &[Int]) -> Vec<Int> {
    alpha.iter().map(|a| if a.is_negative() { -Int::one() } else { Int::zero() }).collect()
}

/// The two graded pieces certifying Frobenius splitting: top local
/// cohomology at `(-1,...,-1)` and at `(-p,...,-p)`. Both are
/// one-dimensional on smooth complete fans.
pub fn frobenius_split_dims(fan: &Fan, p: u64) -> Result<(usize, usize)> {
    if !is_small_prime(p) {
        return Err(Error::Input(format!("{p} is not a prime")));
    }
    if !fan.is_smooth() || !fan.is_complete() {
        return Err(Error::Input("the splitting check needs a smooth complete fan".into()));
    }
    let d = fan.num_rays();
    let n = fan.rank();
    let ones: Vec<Int> = vec![-Int::one(); d];
    let ps: Vec<Int> = vec![-Int::from(p); d];
    let engine = CechEngine::new(fan)?;
    let at_ones = engine.local_dims(cech::nonneg_mask(&ones), n + 1)[n + 1];
    let at_ps = engine.local_dims(cech::nonneg_mask(&ps), n + 1)[n + 1];
    Ok((at_ones, at_ps))
}

fn is_small_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= p {
        if p % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// Serre duality on smooth complete fans: `h^i(O(D)) = h^{n-i}(O(K - D))`
/// for all `i`, both sides through the Čech engine.
pub fn serre_duality_check(fan: &Fan, divisor: &WeilDivisor) -> Result<bool> {
    if !fan.is_smooth() || !fan.is_complete() {
        return Err(Error::Input("the duality check needs a smooth complete fan".into()));
    }
    let engine = CechEngine::new(fan)?;
    let lhs = cohomology_table_with_engine(&engine, divisor, false)?;
    let dual = canonical_divisor(fan).sub(divisor);
    let rhs = cohomology_table_with_engine(&engine, &dual, false)?;
    let n = fan.rank();
    Ok((0..=n).all(|i| lhs.dims[i] == rhs.dims[n - i]))
}

/// Higher-cohomology vanishing of the adjoint of a nef and big divisor.
pub fn kawamata_viehweg_check(fan: &Fan, divisor: &WeilDivisor) -> Result<bool> {
    if !fan.is_smooth() || !fan.is_complete() {
        return Err(Error::Input("the vanishing check needs a smooth complete fan".into()));
    }
    if !crate::positivity::is_nef(fan, divisor)? || !crate::positivity::is_big(fan, divisor)? {
        return Err(Error::Input("the vanishing check needs a nef and big divisor".into()));
    }
    let adjoint = divisor.add(&canonical_divisor(fan));
    let table = cohomology_table(fan, &adjoint)?;
    Ok(table.higher_all_zero())
}

/// Hypothesis audit and conclusion check for the multiplication-stability
/// vanishing statement: if `m(D+E)` is integral and Cartier and `D+E` is
/// ample as a Q-divisor, every higher cohomology of `O(D)` vanishes.
#[derive(Clone, Debug)]
pub struct VanishingAudit {
    /// `0 <= e_j <= 1` for every coefficient of E.
    pub boundary_in_unit_range: bool,
    pub multiple_integral: bool,
    pub multiple_cartier: bool,
    pub q_ample: bool,
    pub hypotheses_hold: bool,
    /// Cohomology of `O(D)`, computed when the hypotheses hold.
    pub table: Option<CohomologyTable>,
    /// `Some(true)` when every `h^i`, `i >= 1`, vanished; `Some(false)` is
    /// a theorem violation.
    pub higher_vanishing: Option<bool>,
}

pub fn vanishing_audit(
    fan: &Fan,
    divisor: &WeilDivisor,
    boundary: &QDivisor,
    m: &Int,
) -> Result<VanishingAudit> {
    check_len(fan, divisor.len())?;
    check_len(fan, boundary.len())?;
    if m < &Int::one() {
        return Err(Error::Input("the multiplier m must be at least 1".into()));
    }
    if !fan.is_complete() {
        return Err(Error::NotComplete("the vanishing audit needs a complete fan".into()));
    }
    let boundary_in_unit_range =
        boundary.0.iter().all(|a| !a.is_negative() && *a <= crate::Rat::one());
    let sum = divisor.to_q().add(boundary);
    let scaled = sum.scale(&crate::Rat::from_integer(m.clone()));
    let multiple_integral = scaled.is_integral();
    let (multiple_cartier, q_ample) = if let Some(wd) = scaled.to_weil() {
        let cartier = cartier_data(fan, &wd).is_ok();
        let ample =
            cartier && all_wall_degrees(fan, &wd)?.iter().all(|x| x.value.is_positive());
        (cartier, ample)
    } else {
        (false, false)
    };
    let hypotheses_hold =
        boundary_in_unit_range && multiple_integral && multiple_cartier && q_ample;
    let (table, higher_vanishing) = if hypotheses_hold {
        let t = cohomology_table(fan, divisor)?;
        let ok = t.higher_all_zero();
        (Some(t), Some(ok))
    } else {
        (None, None)
    };
    Ok(VanishingAudit {
        boundary_in_unit_range,
        multiple_integral,
        multiple_cartier,
        q_ample,
        hypotheses_hold,
        table,
        higher_vanishing,
    })
}

/// Number of lattice points of the divisor polytope; the independent
/// oracle for `h^0` of nef divisors.
pub fn sections_by_polytope(fan: &Fan, divisor: &WeilDivisor) -> Result<usize> {
    let p = crate::divisor::polytope(fan, &divisor.to_q())?;
    Ok(crate::divisor::lattice_points(&p)?.len())
}

/// The fine degree of the torus weight `u` relative to a divisor:
/// `beta_i = a_i + <u, v_i>`.
pub fn fine_degree(fan: &Fan, divisor: &WeilDivisor, u: &[Int]) -> LatticeVector {
    fan.rays().iter().zip(&divisor.0).map(|(v, a)| a + dot(u, v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{hirzebruch, product, projective_space};
    use crate::ivec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn w(coeffs: &[i64]) -> WeilDivisor {
        WeilDivisor::from_i64(coeffs)
    }

    #[test]
    fn degree_pieces_match_examples() {
        let fan = projective_space(2);
        assert_eq!(cech_degree_piece(&fan, &WeilDivisor::zero(3), &ivec(&[0, 0]), 0).unwrap(), 1);
        let k = canonical_divisor(&fan);
        assert_eq!(cech_degree_piece(&fan, &k, &ivec(&[0, 0]), 2).unwrap(), 1);
        assert_eq!(cech_degree_piece(&fan, &k, &ivec(&[-1, -1]), 2).unwrap(), 0);
        let d1 = w(&[1, 0, 0]);
        assert_eq!(cech_degree_piece(&fan, &d1, &ivec(&[-1, 0]), 0).unwrap(), 1);
        assert_eq!(cech_degree_piece(&fan, &d1, &ivec(&[-1, 0]), 1).unwrap(), 0);
        assert_eq!(cech_degree_piece(&fan, &d1, &ivec(&[-1, 0]), 2).unwrap(), 0);
    }

    #[test]
    fn tables_on_p2() {
        let fan = projective_space(2);
        for k in 0..=4i64 {
            let table = cohomology_table(&fan, &w(&[k, 0, 0])).unwrap();
            let expected = ((k + 1) * (k + 2) / 2) as usize;
            assert_eq!(table.dims, vec![expected, 0, 0], "class {k}");
        }
        let k_table = cohomology_table(&fan, &canonical_divisor(&fan)).unwrap();
        assert_eq!(k_table.dims, vec![0, 0, 1]);
        let neg = cohomology_table(&fan, &w(&[-1, 0, 0])).unwrap();
        assert_eq!(neg.dims, vec![0, 0, 0]);
        let neg2 = cohomology_table(&fan, &w(&[-2, 0, 0])).unwrap();
        assert_eq!(neg2.dims, vec![0, 0, 0]);
    }

    #[test]
    fn table_on_p1() {
        let fan = projective_space(1);
        let t = cohomology_table(&fan, &w(&[-2, 0])).unwrap();
        assert_eq!(t.dims, vec![0, 1]);
        let t = cohomology_table(&fan, &w(&[3, 2])).unwrap();
        assert_eq!(t.dims, vec![6, 0]);
    }

    #[test]
    fn per_degree_breakdown() {
        let fan = projective_space(1);
        let engine = CechEngine::new(&fan).unwrap();
        let t = cohomology_table_with_engine(&engine, &w(&[1, 1]), true).unwrap();
        let map = t.per_degree.unwrap();
        assert_eq!(map.len(), 3);
        assert!(map.contains_key(&ivec(&[-1])));
        assert!(map.contains_key(&ivec(&[0])));
        assert!(map.contains_key(&ivec(&[1])));
    }

    #[test]
    fn h0_matches_lattice_points_on_quadric() {
        let quadric = product(&projective_space(1), &projective_space(1));
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10 {
            let coeffs: Vec<i64> = (0..4).map(|_| rng.gen_range(0..=3)).collect();
            let d = w(&coeffs);
            if !crate::positivity::is_nef(&quadric, &d).unwrap() {
                continue;
            }
            let table = cohomology_table(&quadric, &d).unwrap();
            assert_eq!(table.dims[0], sections_by_polytope(&quadric, &d).unwrap());
            assert_eq!(&table.dims[1..], &[0, 0]);
        }
    }

    #[test]
    fn local_cohomology_examples() {
        let fan = projective_space(2);
        assert_eq!(local_cohomology_s(&fan, &ivec(&[-1, -1, -1]), 3).unwrap(), 1);
        for i in 0..=3 {
            if i == 0 {
                assert_eq!(local_cohomology_s(&fan, &ivec(&[0, 0, 0]), i).unwrap(), 0);
            } else {
                assert_eq!(local_cohomology_s(&fan, &ivec(&[0, 0, 0]), i).unwrap(), 0);
            }
        }
    }

    #[test]
    fn sign_pattern_invariance() {
        let fan = hirzebruch(1);
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for _ in 0..60 {
            let alpha: Vec<Int> = (0..4).map(|_| Int::from(rng.gen_range(-6..=6i64))).collect();
            let clamped = sign_normalize(&alpha);
            for i in 0..=3 {
                assert_eq!(
                    local_cohomology_s(&fan, &alpha, i).unwrap(),
                    local_cohomology_s(&fan, &clamped, i).unwrap(),
                    "alpha {alpha:?} level {i}"
                );
            }
        }
        assert_eq!(sign_normalize(&ivec(&[2, -3, 5])), ivec(&[0, -1, 0]));
        assert_eq!(sign_normalize(&ivec(&[-1, -1, -1])), ivec(&[-1, -1, -1]));
    }

    #[test]
    fn bridge_between_local_and_sheaf() {
        // Summing graded local cohomology over a divisor class reproduces
        // sheaf cohomology one level down.
        let fan = projective_space(2);
        let engine = CechEngine::new(&fan).unwrap();
        for coeffs in [[-3i64, 0, 0], [1, 0, 0], [-1, -1, -1], [2, -1, 0]] {
            let d = w(&coeffs);
            let thresholds: Vec<Vec<Int>> = d.0.iter().map(|a| vec![-a.clone()]).collect();
            let (lo, hi) = cech::arrangement_box(&fan, &thresholds).unwrap();
            let table = cohomology_table_with_engine(&engine, &d, false).unwrap();
            for i in 1..=2usize {
                let mut total = 0;
                for (u, _) in cech::box_points(&lo, &hi) {
                    let alpha = fine_degree(&fan, &d, &u);
                    total += engine.local_dims(cech::nonneg_mask(&alpha), i + 1)[i + 1];
                }
                assert_eq!(total, table.dims[i], "class {coeffs:?} level {i}");
            }
        }
    }

    #[test]
    fn euler_characteristic_constant_on_classes() {
        let fan = hirzebruch(2);
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..10 {
            let coeffs: Vec<i64> = (0..4).map(|_| rng.gen_range(-2..=2)).collect();
            let d = w(&coeffs);
            let u = ivec(&[rng.gen_range(-2..=2), rng.gen_range(-2..=2)]);
            let shifted = d.add(&crate::divisor::character_divisor(&fan, &u));
            let chi = cohomology_table(&fan, &d).unwrap().euler_characteristic();
            let chi_shifted = cohomology_table(&fan, &shifted).unwrap().euler_characteristic();
            assert_eq!(chi, chi_shifted);
        }
    }

    #[test]
    fn frobenius_dimensions() {
        for p in [2u64, 3, 5] {
            assert_eq!(frobenius_split_dims(&projective_space(1), p).unwrap(), (1, 1));
            assert_eq!(frobenius_split_dims(&projective_space(2), p).unwrap(), (1, 1));
            assert_eq!(frobenius_split_dims(&hirzebruch(1), p).unwrap(), (1, 1));
        }
        assert!(frobenius_split_dims(&projective_space(2), 4).is_err());
    }

    #[test]
    fn serre_duality_examples() {
        let fan = projective_space(2);
        assert!(serre_duality_check(&fan, &w(&[2, 0, 0])).unwrap());
        assert!(serre_duality_check(&fan, &canonical_divisor(&fan)).unwrap());
        let p1 = projective_space(1);
        assert!(serre_duality_check(&p1, &w(&[-2, 0])).unwrap());
        // h^0(O(2)) = 6 pairs with h^2 of the class -5 divisor.
        let lhs = cohomology_table(&fan, &w(&[2, 0, 0])).unwrap();
        assert_eq!(lhs.dims[0], 6);
        let rhs = cohomology_table(&fan, &w(&[-5, 0, 0])).unwrap();
        assert_eq!(rhs.dims[2], 6);
    }

    #[test]
    fn kawamata_viehweg_on_blowup() {
        let p2 = projective_space(2);
        let (f1, _) = p2.star_subdivision(&crate::fan::Cone::new(vec![0, 1])).unwrap();
        let pulled = crate::intersect::pullback(&p2, &w(&[1, 0, 0]), &f1).unwrap();
        assert!(kawamata_viehweg_check(&f1, &pulled).unwrap());
        // Ample case on P^2 itself.
        assert!(kawamata_viehweg_check(&p2, &w(&[2, 0, 0])).unwrap());
        // Precondition: a fiber class on the quadric is nef but not big.
        let quadric = product(&projective_space(1), &projective_space(1));
        assert!(kawamata_viehweg_check(&quadric, &w(&[1, 0, 0, 0])).is_err());
    }

    #[test]
    fn vanishing_audit_on_weighted_projective() {
        // D = D3 on the weighted projective surface: E = D3 and m = 1 make
        // D + E integral Cartier ample, so higher cohomology of D vanishes.
        let fan = Fan::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, -2]],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        )
        .unwrap();
        let d3 = w(&[0, 0, 1]);
        let e = QDivisor::parse("0,0,1").unwrap();
        let audit = vanishing_audit(&fan, &d3, &e, &Int::one()).unwrap();
        assert!(audit.hypotheses_hold, "{audit:?}");
        assert_eq!(audit.higher_vanishing, Some(true));

        // Boundary coefficients outside [0,1] are reported, not raised.
        let bad = QDivisor::parse("0,0,2").unwrap();
        let audit = vanishing_audit(&fan, &d3, &bad, &Int::one()).unwrap();
        assert!(!audit.boundary_in_unit_range);
        assert!(!audit.hypotheses_hold);
    }

    #[test]
    fn vanishing_audit_adjoint_ample() {
        // K + (ample class 3) on P^2 with the full boundary E = sum of
        // primes: D + E is the ample class 3 itself.
        let fan = projective_space(2);
        let d = canonical_divisor(&fan).add(&w(&[3, 0, 0]));
        let e = QDivisor::parse("1,1,1").unwrap();
        let audit = vanishing_audit(&fan, &d, &e, &Int::one()).unwrap();
        assert!(audit.hypotheses_hold);
        assert_eq!(audit.higher_vanishing, Some(true));
        // An ample class minus two distinct primes keeps the vanishing.
        let l_minus = w(&[1, -1, -1]);
        let table = cohomology_table(&fan, &l_minus).unwrap();
        assert_eq!(&table.dims[1..], &[0, 0]);
    }

    #[test]
    fn multiplication_stability_instances() {
        // If h^i vanishes for a multiple of D, it vanishes for D.
        let fan = hirzebruch(1);
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        for _ in 0..8 {
            let coeffs: Vec<i64> = (0..4).map(|_| rng.gen_range(-2..=2)).collect();
            let d = w(&coeffs);
            let m = rng.gen_range(2..=3i64);
            let table_m = cohomology_table(&fan, &d.scale(&Int::from(m))).unwrap();
            let table_1 = cohomology_table(&fan, &d).unwrap();
            for i in 1..=2 {
                if table_m.dims[i] == 0 {
                    assert_eq!(table_1.dims[i], 0, "divisor {coeffs:?} m {m} level {i}");
                }
            }
        }
    }
}
