//! Intersection numbers of Q-Cartier divisors with invariant curves via
//! the wall formula, pullback of Cartier divisors along fan refinements,
//! and restriction to invariant subvarieties.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::divisor::{cartier_data, character_divisor, check_len, QDivisor, WeilDivisor};
use crate::fan::{Cone, Fan, Wall};
use crate::linalg::{dot, int_kernel, solve_diophantine, Mat};
use crate::scalar::to_ratio_vec;
use crate::{Error, Int, LatticeVector, Rat, Result};

/// A wall together with the degree of a divisor on its invariant curve.
#[derive(Clone, Debug)]
pub struct WallDegree {
    pub wall: Wall,
    pub value: Rat,
}

/// The primitive functional vanishing on the wall, oriented positively on
/// the `positive_side` maximal cone.
fn wall_functional(fan: &Fan, wall: &Wall, positive_side: usize) -> Result<LatticeVector> {
    let tau_rays = fan.cone_ray_vectors(&wall.tau);
    let m = Mat::from_rows_with_cols(tau_rays, fan.rank());
    let kernel = int_kernel(&m.map(|x| x.clone()));
    if kernel.len() != 1 {
        return Err(Error::Internal(format!(
            "wall {:?} does not have a rank-one transverse lattice",
            wall.tau.rays()
        )));
    }
    let mut w = kernel.into_iter().next().unwrap();
    let side_cone = &fan.max_cones()[positive_side];
    let probe = side_cone
        .rays()
        .iter()
        .find(|r| !wall.tau.contains_index(**r))
        .ok_or_else(|| Error::Internal("maximal cone equals its own wall".into()))?;
    let sign = dot(&w, fan.ray(*probe));
    if sign.is_zero() {
        return Err(Error::Internal("wall functional vanishes on a transverse ray".into()));
    }
    if sign.is_negative() {
        w = w.iter().map(|x| -x).collect();
    }
    Ok(w)
}

/// Rational functional of a divisor on a single maximal cone; errors with
/// the witness cone if the local system is inconsistent.
fn local_functional(fan: &Fan, cone: &Cone, coeffs: &[Int]) -> Result<Vec<Rat>> {
    let rows = fan.cone_ray_vectors(cone);
    let rhs: Vec<Int> = cone.rays().iter().map(|&i| -coeffs[i].clone()).collect();
    let sol = solve_diophantine(&Mat::from_rows_with_cols(rows, fan.rank()), &rhs)
        .ok_or_else(|| Error::NotQCartier(cone.rays().to_vec()))?;
    Ok(sol.rational)
}

fn degree_from_side(
    fan: &Fan,
    divisor: &WeilDivisor,
    wall: &Wall,
    near: usize,
    far: usize,
) -> Result<Rat> {
    let u_near = local_functional(fan, &fan.max_cones()[near], &divisor.0)?;
    let w = wall_functional(fan, wall, far)?;
    let far_cone = &fan.max_cones()[far];
    let mut value: Option<Rat> = None;
    for &ri in far_cone.rays() {
        if wall.tau.contains_index(ri) {
            continue;
        }
        let v = fan.ray(ri);
        let c = dot(&w, v);
        debug_assert!(c.is_positive());
        if fan.is_smooth() && !c.is_one() {
            return Err(Error::Internal(format!(
                "smooth fan produced wall multiplicity {c} at wall {:?}",
                wall.tau.rays()
            )));
        }
        let b = Rat::from_integer(divisor.0[ri].clone()) + dot(&u_near, &to_ratio_vec(v));
        let ratio = b / Rat::from_integer(c);
        match &value {
            None => value = Some(ratio),
            Some(prev) if *prev == ratio => {}
            Some(prev) => {
                return Err(Error::Internal(format!(
                    "wall degree at {:?} depends on the transverse ray: {prev} vs {ratio}",
                    wall.tau.rays()
                )))
            }
        }
    }
    value.ok_or_else(|| Error::Internal("wall has no transverse ray".into()))
}

/// Degree of a Q-Cartier integral divisor on the invariant curve of a
/// wall. Both evaluation sides are computed and must agree.
pub fn wall_curve_degree(fan: &Fan, divisor: &WeilDivisor, wall: &Wall) -> Result<Rat> {
    check_len(fan, divisor.len())?;
    let a = degree_from_side(fan, divisor, wall, wall.sigma1, wall.sigma2)?;
    let b = degree_from_side(fan, divisor, wall, wall.sigma2, wall.sigma1)?;
    if a != b {
        return Err(Error::Internal(format!(
            "wall degree at {:?} differs between sides: {a} vs {b}",
            wall.tau.rays()
        )));
    }
    Ok(a)
}

/// Degree of a Q-divisor: denominators are cleared first, the degree of
/// the integral multiple is divided back out.
pub fn wall_curve_degree_q(fan: &Fan, divisor: &QDivisor, wall: &Wall) -> Result<Rat> {
    let m = divisor.denominator();
    let scaled = divisor.scale(&Rat::from_integer(m.clone()));
    let integral = scaled.to_weil().expect("denominator cleared");
    Ok(wall_curve_degree(fan, &integral, wall)? / Rat::from_integer(m))
}

/// Degrees on all walls, in wall order.
pub fn all_wall_degrees(fan: &Fan, divisor: &WeilDivisor) -> Result<Vec<WallDegree>> {
    fan.walls()?
        .iter()
        .map(|w| Ok(WallDegree { wall: w.clone(), value: wall_curve_degree(fan, divisor, w)? }))
        .collect()
}

/// Minimum wall degree with a minimizing wall.
pub fn min_curve_degree(fan: &Fan, divisor: &WeilDivisor) -> Result<(Rat, Wall)> {
    let degrees = all_wall_degrees(fan, divisor)?;
    degrees
        .into_iter()
        .min_by(|a, b| a.value.cmp(&b.value))
        .map(|wd| (wd.value, wd.wall))
        .ok_or_else(|| Error::NotComplete("fan has no walls".into()))
}

/// Precomputed per-fan degree matrix: on simplicial complete fans the wall
/// degree is linear in the divisor, so sweeps over many divisors reduce to
/// one matrix-vector product each.
pub struct IntersectionEngine<'a> {
    fan: &'a Fan,
    /// `degree_matrix[w][i]` = degree of the i-th unit coefficient divisor
    /// on wall w.
    degree_matrix: Vec<Vec<Rat>>,
}

impl<'a> IntersectionEngine<'a> {
    pub fn new(fan: &'a Fan) -> Result<Self> {
        if !fan.is_simplicial() {
            return Err(Error::Input(
                "degree matrices need a simplicial fan; use wall_curve_degree directly".into(),
            ));
        }
        let walls = fan.walls()?;
        let d = fan.num_rays();
        let mut degree_matrix = vec![Vec::with_capacity(d); walls.len()];
        for i in 0..d {
            let mut coeffs = vec![Int::zero(); d];
            coeffs[i] = Int::one();
            let unit = WeilDivisor(coeffs);
            for (w, wall) in walls.iter().enumerate() {
                degree_matrix[w].push(wall_curve_degree(fan, &unit, wall)?);
            }
        }
        Ok(IntersectionEngine { fan, degree_matrix })
    }

    pub fn fan(&self) -> &Fan {
        self.fan
    }

    pub fn walls(&self) -> &[Wall] {
        self.fan.walls().expect("engine construction verified walls")
    }

    pub fn degrees(&self, divisor: &WeilDivisor) -> Result<Vec<Rat>> {
        check_len(self.fan, divisor.len())?;
        Ok(self
            .degree_matrix
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&divisor.0)
                    .filter(|(_, a)| !a.is_zero())
                    .map(|(r, a)| r * Rat::from_integer(a.clone()))
                    .sum()
            })
            .collect())
    }

    pub fn min_degree(&self, divisor: &WeilDivisor) -> Result<(Rat, usize)> {
        let degrees = self.degrees(divisor)?;
        degrees
            .into_iter()
            .enumerate()
            .min_by(|a, b| a.1.cmp(&b.1))
            .map(|(i, v)| (v, i))
            .ok_or_else(|| Error::NotComplete("fan has no walls".into()))
    }
}

/// Pullback of a Cartier divisor along a fan refinement: the divisor on
/// the fine fan with the same support function.
pub fn pullback(coarse: &Fan, divisor: &WeilDivisor, fine: &Fan) -> Result<WeilDivisor> {
    check_len(coarse, divisor.len())?;
    if fine.rank() != coarse.rank() {
        return Err(Error::Input("refinement must live in the same lattice".into()));
    }
    // Every maximal cone of the fine fan must sit inside a coarse cone.
    for cone in fine.max_cones() {
        let rays = fine.cone_ray_vectors(cone);
        let inside = (0..coarse.max_cones().len())
            .any(|i| rays.iter().all(|r| coarse.max_geom(i).contains_int(r)));
        if !inside {
            return Err(Error::Input(format!(
                "cone {:?} of the fine fan is not contained in any coarse cone",
                cone.rays()
            )));
        }
    }
    let cd = cartier_data(coarse, divisor)?;
    let mut coeffs = Vec::with_capacity(fine.num_rays());
    for ray in fine.rays() {
        let sigma = (0..coarse.max_cones().len())
            .find(|&i| coarse.max_geom(i).contains_int(ray))
            .ok_or_else(|| Error::Input("fine ray outside the coarse support".into()))?;
        coeffs.push(-dot(&cd.u[sigma], ray));
    }
    Ok(WeilDivisor(coeffs))
}

/// Restriction of a Cartier divisor on a smooth complete fan to the prime
/// divisor of ray `j`: a divisor on the star fan with the induced support
/// function. Returns the star fan, the ray-index map into it, and the
/// restricted divisor.
pub fn restrict_to_divisor(
    fan: &Fan,
    divisor: &WeilDivisor,
    j: usize,
) -> Result<(Fan, Vec<Option<usize>>, WeilDivisor)> {
    check_len(fan, divisor.len())?;
    if !fan.is_smooth() {
        return Err(Error::NotSmooth("restriction needs a smooth fan".into()));
    }
    if j >= fan.num_rays() {
        return Err(Error::Input(format!("ray index {j} out of range")));
    }
    // Shift by a character to make the coefficient at j vanish; then every
    // local functional at a cone containing j lies in the wall of j.
    let vj = fan.ray(j).clone();
    let sol = solve_diophantine(
        &Mat::from_rows_with_cols(vec![vj], fan.rank()),
        &[-divisor.0[j].clone()],
    )
    .expect("primitive ray evaluation is surjective");
    let u0 = sol.integral.expect("primitive ray evaluation splits integrally");
    let shifted = divisor.add(&character_divisor(fan, &u0));
    debug_assert!(shifted.0[j].is_zero());

    let tau = Cone::new(vec![j]);
    let (star, ray_map) = fan.star_fan(&tau)?;
    let quotient = fan.quotient_by_cone(&tau);
    let cd = cartier_data(fan, &shifted)?;

    let mut coeffs: Vec<Option<Int>> = vec![None; star.num_rays()];
    for (sigma_idx, sigma) in fan.max_cones().iter().enumerate() {
        if !sigma.contains_index(j) {
            continue;
        }
        // The functional descends: it vanishes on the ray being contracted.
        let u = &cd.u[sigma_idx];
        debug_assert!(dot(u, fan.ray(j)).is_zero());
        let u_bar: LatticeVector =
            quotient.section.iter().map(|s| dot(u, s)).collect();
        for &ri in sigma.rays() {
            if ri == j {
                continue;
            }
            let new_index = ray_map[ri].expect("star ray is mapped");
            let value = -dot(&u_bar, star.ray(new_index));
            match &coeffs[new_index] {
                None => coeffs[new_index] = Some(value),
                Some(prev) if *prev == value => {}
                Some(prev) => {
                    return Err(Error::Internal(format!(
                        "restriction coefficient mismatch on star ray {new_index}: {prev} vs {value}"
                    )))
                }
            }
        }
    }
    let coeffs: Vec<Int> = coeffs
        .into_iter()
        .map(|c| c.ok_or_else(|| Error::Internal("star ray received no coefficient".into())))
        .collect::<Result<_>>()?;
    Ok((star, ray_map, WeilDivisor(coeffs)))
}

/// Result of restricting a divisor to the invariant subvariety of a cone.
pub enum Restriction {
    /// The subvariety is a point; only global sections remain.
    Point,
    /// The subvariety with its fan and the restricted divisor.
    Proper(Fan, WeilDivisor),
}

/// Iterated restriction along the rays of `tau` on a smooth complete fan.
pub fn restrict_to_subvariety(fan: &Fan, divisor: &WeilDivisor, tau: &Cone) -> Result<Restriction> {
    if !fan.contains_cone(tau) {
        return Err(Error::Input(format!("cone {:?} is not in the fan", tau.rays())));
    }
    if tau.len() == fan.rank() {
        return Ok(Restriction::Point);
    }
    let mut current_fan = fan.clone();
    let mut current_div = divisor.clone();
    let mut remaining: Vec<usize> = tau.rays().to_vec();
    while let Some(j) = remaining.pop() {
        let (star, ray_map, restricted) = restrict_to_divisor(&current_fan, &current_div, j)?;
        remaining = remaining
            .into_iter()
            .map(|r| ray_map[r].ok_or_else(|| Error::Internal("cone ray lost in the star".into())))
            .collect::<Result<_>>()?;
        current_fan = star;
        current_div = restricted;
    }
    Ok(Restriction::Proper(current_fan, current_div))
}

/// Independent test oracle for smooth complete surfaces: the full matrix
/// of intersection numbers `(D_i . V(v_j))` from the cyclic ray relations
/// `v_prev + v_next = -(D_j^2) v_j` and adjacency.
pub fn surface_intersection_oracle(fan: &Fan) -> Result<Vec<Vec<Rat>>> {
    if fan.rank() != 2 || !fan.is_smooth() || !fan.is_complete() {
        return Err(Error::Input("oracle needs a smooth complete surface".into()));
    }
    let d = fan.num_rays();
    let mut matrix = vec![vec![Rat::zero(); d]; d];
    for j in 0..d {
        let neighbors: Vec<usize> = fan
            .max_cones()
            .iter()
            .filter(|c| c.contains_index(j))
            .flat_map(|c| c.rays().iter().copied().filter(|&r| r != j))
            .collect();
        debug_assert_eq!(neighbors.len(), 2);
        let (p, q) = (neighbors[0], neighbors[1]);
        // v_p + v_q = t v_j with t = -(D_j . V(v_j)).
        let sum: LatticeVector = fan.ray(p).iter().zip(fan.ray(q)).map(|(a, b)| a + b).collect();
        let vj = fan.ray(j);
        let k = (0..2)
            .find(|&c| !vj[c].is_zero())
            .expect("rays are nonzero");
        let t = Rat::new(sum[k].clone(), vj[k].clone());
        debug_assert_eq!(to_ratio_vec(vj).iter().map(|x| x * &t).collect::<Vec<_>>(), to_ratio_vec(&sum));
        matrix[j][j] = -t;
        matrix[p][j] = Rat::one();
        matrix[q][j] = Rat::one();
    }
    Ok(matrix)
}

/// Lattice length of the segment between two integral points (gcd of the
/// coordinate differences), used as the surface edge-length oracle.
pub fn lattice_length(a: &[Int], b: &[Int]) -> Int {
    let mut g = Int::zero();
    for (x, y) in a.iter().zip(b) {
        g = g.gcd(&(x - y));
    }
    g
}
