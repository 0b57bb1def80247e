//! Torus-invariant Weil, Cartier and Q-divisors on a fan: the class group,
//! per-cone linear functionals (Cartier data), piecewise-linear support
//! functions and their convexity certificates, divisor polytopes, and
//! lattice-point enumeration.

use std::fmt;

use num_traits::{One, Zero};

use crate::fan::{Cone, Fan};
use crate::geometry::extreme_rays;
use crate::linalg::{dot, rank, smith, solve_diophantine, Mat};
use crate::scalar::to_ratio_vec;
use crate::{Error, Int, LatticeVector, Rat, Result};

/// Integer coefficient vector on the rays of a fan.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeilDivisor(pub Vec<Int>);

/// Rational coefficient vector on the rays of a fan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QDivisor(pub Vec<Rat>);

impl WeilDivisor {
    pub fn zero(d: usize) -> Self {
        WeilDivisor(vec![Int::zero(); d])
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        WeilDivisor(coeffs.iter().map(|&c| Int::from(c)).collect())
    }

    /// Parses "a1,a2,...,ad" with integer entries.
    pub fn parse(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(|p| p.trim().parse::<Int>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Input(format!("bad divisor coefficient: {e}")))?;
        if coeffs.is_empty() {
            return Err(Error::Input("empty divisor".into()));
        }
        Ok(WeilDivisor(coeffs))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, i: usize) -> &Int {
        &self.0[i]
    }

    pub fn add(&self, other: &WeilDivisor) -> WeilDivisor {
        WeilDivisor(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &WeilDivisor) -> WeilDivisor {
        WeilDivisor(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> WeilDivisor {
        WeilDivisor(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, m: &Int) -> WeilDivisor {
        WeilDivisor(self.0.iter().map(|a| a * m).collect())
    }

    pub fn to_q(&self) -> QDivisor {
        QDivisor(self.0.iter().map(|a| Rat::from_integer(a.clone())).collect())
    }
}

impl fmt::Display for WeilDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl QDivisor {
    /// Parses "a1,a2,...,ad" with integer or rational ("p/q") entries.
    pub fn parse(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(|p| p.trim().parse::<Rat>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Input(format!("bad divisor coefficient: {e}")))?;
        if coeffs.is_empty() {
            return Err(Error::Input("empty divisor".into()));
        }
        Ok(QDivisor(coeffs))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, i: usize) -> &Rat {
        &self.0[i]
    }

    pub fn add(&self, other: &QDivisor) -> QDivisor {
        QDivisor(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, m: &Rat) -> QDivisor {
        QDivisor(self.0.iter().map(|a| a * m).collect())
    }

    /// Least common denominator of the coefficients.
    pub fn denominator(&self) -> Int {
        let mut m = Int::one();
        for c in &self.0 {
            m = num_integer::Integer::lcm(&m, c.denom());
        }
        m
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.denom().is_one())
    }

    pub fn to_weil(&self) -> Option<WeilDivisor> {
        self.is_integral().then(|| WeilDivisor(self.0.iter().map(|c| c.numer().clone()).collect()))
    }
}

impl fmt::Display for QDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Componentwise ceiling.
pub fn round_up(d: &QDivisor) -> WeilDivisor {
    WeilDivisor(d.0.iter().map(|c| c.ceil().to_integer()).collect())
}

/// Componentwise floor.
pub fn round_down(d: &QDivisor) -> WeilDivisor {
    WeilDivisor(d.0.iter().map(|c| c.floor().to_integer()).collect())
}

/// The canonical divisor: minus the sum of all prime invariant divisors.
pub fn canonical_divisor(fan: &Fan) -> WeilDivisor {
    WeilDivisor(vec![-Int::one(); fan.num_rays()])
}

/// The principal divisor of the character with exponent `u`: coefficient
/// `<u, v_i>` on ray `i`.
pub fn character_divisor(fan: &Fan, u: &LatticeVector) -> WeilDivisor {
    WeilDivisor(fan.rays().iter().map(|v| dot(u, v)).collect())
}

pub fn check_len(fan: &Fan, len: usize) -> Result<()> {
    if len != fan.num_rays() {
        return Err(Error::Input(format!(
            "divisor has {len} coefficients but the fan has {} rays",
            fan.num_rays()
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Class group
// ---------------------------------------------------------------------------

/// The class of a divisor: coordinates in `Z^(d-n)` plus residues modulo
/// the torsion invariants, in a basis fixed once per fan by the normal form
/// of the ray-evaluation map.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    pub free: Vec<Int>,
    /// `(residue, modulus)` pairs with `0 <= residue < modulus`.
    pub torsion: Vec<(Int, Int)>,
}

impl DivisorClass {
    pub fn is_zero(&self) -> bool {
        self.free.iter().all(Zero::is_zero) && self.torsion.iter().all(|(r, _)| r.is_zero())
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.free.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        for (r, m) in &self.torsion {
            write!(f, ";{r} mod {m}")?;
        }
        write!(f, ")")
    }
}

/// The class group of the fan, with a fixed projection from invariant Weil
/// divisors.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    pub free_rank: usize,
    /// Torsion invariants > 1 in divisibility order.
    pub torsion_moduli: Vec<Int>,
    /// Unimodular row transform of the normal form of the ray matrix; the
    /// projection reads classes off `transform * coefficients`.
    transform: Mat<Int>,
    transform_inv: Mat<Int>,
    /// Invariant factor per leading coordinate (1 means the coordinate
    /// dies in the quotient).
    factors: Vec<Int>,
}

/// Computes the class group `Z^d / image(M)` from the normal form of the
/// ray-evaluation matrix.
pub fn class_group(fan: &Fan) -> ClassGroup {
    let d = fan.num_rays();
    let n = fan.rank();
    let ray_matrix = Mat::from_rows_with_cols(fan.rays().to_vec(), n);
    let s = smith(&ray_matrix);
    debug_assert_eq!(s.rank, n, "nondegenerate fans have full-rank ray matrices");
    let torsion_moduli: Vec<Int> = s.factors.iter().filter(|f| !f.is_one()).cloned().collect();
    ClassGroup {
        free_rank: d - n,
        torsion_moduli,
        transform: s.u.clone(),
        transform_inv: s.u_inv.clone(),
        factors: s.factors,
    }
}

impl ClassGroup {
    pub fn project(&self, divisor: &WeilDivisor) -> DivisorClass {
        let w = self.transform.mul_vec(&divisor.0);
        let mut torsion = Vec::new();
        for (k, f) in self.factors.iter().enumerate() {
            if !f.is_one() {
                torsion.push((num_integer::Integer::mod_floor(&w[k], f), f.clone()));
            }
        }
        let free = w[self.factors.len()..].to_vec();
        DivisorClass { free, torsion }
    }

    /// A divisor whose class has the given free coordinates and vanishing
    /// torsion; a section of the projection on the free part.
    pub fn lift_free(&self, free: &[Int]) -> WeilDivisor {
        assert_eq!(free.len(), self.free_rank, "free coordinate count");
        let d = self.transform_inv.rows();
        let mut y = vec![Int::zero(); d];
        for (k, c) in free.iter().enumerate() {
            y[self.factors.len() + k] = c.clone();
        }
        WeilDivisor(self.transform_inv.mul_vec(&y))
    }

    /// "Z^r" or "Z^r + Z/m1 + ..." — the printed shape of the group.
    pub fn shape(&self) -> String {
        let mut s = format!("Z^{}", self.free_rank);
        for m in &self.torsion_moduli {
            s.push_str(&format!(" + Z/{m}"));
        }
        s
    }
}

pub fn is_principal(fan: &Fan, divisor: &WeilDivisor) -> Result<bool> {
    check_len(fan, divisor.len())?;
    Ok(class_group(fan).project(divisor).is_zero())
}

pub fn linearly_equivalent(fan: &Fan, a: &WeilDivisor, b: &WeilDivisor) -> Result<bool> {
    check_len(fan, a.len())?;
    check_len(fan, b.len())?;
    let cl = class_group(fan);
    Ok(cl.project(a) == cl.project(b))
}

// ---------------------------------------------------------------------------
// Cartier data and support functions
// ---------------------------------------------------------------------------

/// Integral per-maximal-cone linear functionals `u_sigma` with
/// `<u_sigma, v_i> = -a_i` on the rays of each cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartierData {
    /// Indexed like `fan.max_cones()`.
    pub u: Vec<LatticeVector>,
}

/// Rational per-maximal-cone functionals; exists iff the divisor is
/// Q-Cartier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QCartierData {
    pub u: Vec<Vec<Rat>>,
}

impl QCartierData {
    pub fn from_cartier(cd: &CartierData) -> Self {
        QCartierData { u: cd.u.iter().map(|u| to_ratio_vec(u)).collect() }
    }
}

fn cone_system(fan: &Fan, cone: &Cone, coeffs: &[Int]) -> (Mat<Int>, Vec<Int>) {
    let rows: Vec<LatticeVector> = fan.cone_ray_vectors(cone);
    let rhs: Vec<Int> = cone.rays().iter().map(|&i| -coeffs[i].clone()).collect();
    (Mat::from_rows_with_cols(rows, fan.rank()), rhs)
}

/// Solves for integral Cartier data; the error carries the first cone with
/// no integral (or no rational) solution.
pub fn cartier_data(fan: &Fan, divisor: &WeilDivisor) -> Result<CartierData> {
    check_len(fan, divisor.len())?;
    let mut u = Vec::with_capacity(fan.max_cones().len());
    for cone in fan.max_cones() {
        let (m, rhs) = cone_system(fan, cone, &divisor.0);
        let sol = solve_diophantine(&m, &rhs)
            .ok_or_else(|| Error::NotCartier(cone.rays().to_vec()))?;
        match sol.integral {
            Some(x) => u.push(x),
            None => return Err(Error::NotCartier(cone.rays().to_vec())),
        }
    }
    Ok(CartierData { u })
}

pub fn is_cartier(fan: &Fan, divisor: &WeilDivisor) -> Result<bool> {
    check_len(fan, divisor.len())?;
    Ok(cartier_data(fan, divisor).is_ok())
}

/// Rational Cartier data for an integral divisor; errors with the witness
/// cone when some local system is inconsistent.
pub fn q_cartier_data(fan: &Fan, divisor: &WeilDivisor) -> Result<QCartierData> {
    check_len(fan, divisor.len())?;
    let mut u = Vec::with_capacity(fan.max_cones().len());
    for cone in fan.max_cones() {
        let (m, rhs) = cone_system(fan, cone, &divisor.0);
        let sol = solve_diophantine(&m, &rhs)
            .ok_or_else(|| Error::NotQCartier(cone.rays().to_vec()))?;
        u.push(sol.rational);
    }
    Ok(QCartierData { u })
}

/// Least `m >= 1` with `m * divisor` Cartier, or `None` when the divisor is
/// not Q-Cartier.
pub fn q_cartier_index(fan: &Fan, divisor: &WeilDivisor) -> Result<Option<Int>> {
    check_len(fan, divisor.len())?;
    let mut index = Int::one();
    for cone in fan.max_cones() {
        let (m, rhs) = cone_system(fan, cone, &divisor.0);
        match solve_diophantine(&m, &rhs) {
            Some(sol) => index = num_integer::Integer::lcm(&index, &sol.denominator),
            None => return Ok(None),
        }
    }
    Ok(Some(index))
}

/// Evaluates the support function at a point of the fan's support:
/// `psi(x) = <u_sigma, x>` for any maximal cone containing `x`.
pub fn support_function_eval(fan: &Fan, data: &QCartierData, x: &[Rat]) -> Result<Rat> {
    let containing = fan.max_cones_containing_rat(x);
    let Some(&sigma) = containing.first() else {
        return Err(Error::Input("point lies outside the support of the fan".into()));
    };
    Ok(dot(&data.u[sigma], x))
}

/// Convexity of the support function across every wall: for each wall
/// `(tau; sigma1, sigma2)` and every ray of one cone not in the other,
/// the functional of the far cone does not exceed the near one.
pub fn is_convex(fan: &Fan, data: &QCartierData) -> Result<bool> {
    convexity_check(fan, data, false)
}

/// Strict convexity: the same inequalities, strictly.
pub fn is_strictly_convex(fan: &Fan, data: &QCartierData) -> Result<bool> {
    convexity_check(fan, data, true)
}

fn convexity_check(fan: &Fan, data: &QCartierData, strict: bool) -> Result<bool> {
    let walls = fan.walls()?;
    for wall in walls {
        for (near, far) in [(wall.sigma1, wall.sigma2), (wall.sigma2, wall.sigma1)] {
            let near_cone = &fan.max_cones()[near];
            let far_cone = &fan.max_cones()[far];
            for &ri in far_cone.rays() {
                if near_cone.contains_index(ri) {
                    continue;
                }
                let v = to_ratio_vec(fan.ray(ri));
                let far_value = dot(&data.u[far], &v);
                let near_value = dot(&data.u[near], &v);
                let ok = if strict { far_value < near_value } else { far_value <= near_value };
                if !ok {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Divisor polytopes
// ---------------------------------------------------------------------------

/// The polytope `P_D = { u : <u, v_i> >= -a_i }` of a divisor, with its
/// vertices enumerated exactly.
#[derive(Clone, Debug)]
pub struct DivisorPolytope {
    /// `(normal v_i, offset -a_i)` meaning `<u, v_i> >= -a_i`.
    pub inequalities: Vec<(LatticeVector, Rat)>,
    pub vertices: Vec<Vec<Rat>>,
    pub bounded: bool,
    /// Affine dimension of the vertex hull; -1 when empty. Only meaningful
    /// for bounded polytopes.
    pub dim: i64,
}

/// Builds the divisor polytope by enumerating rank-n subsets of active
/// inequalities.
pub fn polytope(fan: &Fan, coeffs: &QDivisor) -> Result<DivisorPolytope> {
    check_len(fan, coeffs.len())?;
    let n = fan.rank();
    let d = fan.num_rays();
    let inequalities: Vec<(LatticeVector, Rat)> =
        (0..d).map(|i| (fan.ray(i).clone(), -coeffs.coeff(i).clone())).collect();
    let bounded = extreme_rays(n, fan.rays(), &[])?.is_empty();

    let mut vertices: Vec<Vec<Rat>> = Vec::new();
    for subset in subsets(d, n) {
        let m = Mat::from_rows_with_cols(
            subset.iter().map(|&i| to_ratio_vec(&inequalities[i].0)).collect(),
            n,
        );
        if rank(&m) != n {
            continue;
        }
        let rhs: Vec<Rat> = subset.iter().map(|&i| inequalities[i].1.clone()).collect();
        let Some(u) = crate::linalg::solve(&m, &rhs) else {
            continue;
        };
        let feasible = inequalities.iter().all(|(v, b)| dot(&to_ratio_vec(v), &u) >= *b);
        if feasible && !vertices.contains(&u) {
            vertices.push(u);
        }
    }
    vertices.sort();
    let dim = if vertices.is_empty() {
        -1
    } else {
        let base = &vertices[0];
        let diffs: Vec<Vec<Rat>> = vertices[1..]
            .iter()
            .map(|v| v.iter().zip(base).map(|(a, b)| a.clone() - b.clone()).collect())
            .collect();
        rank(&Mat::from_rows_with_cols(diffs, n)) as i64
    };
    Ok(DivisorPolytope { inequalities, vertices, bounded, dim })
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// All lattice points of a bounded polytope, in lexicographic order.
pub fn lattice_points(p: &DivisorPolytope) -> Result<Vec<LatticeVector>> {
    if !p.bounded {
        return Err(Error::UnboundedPolytope);
    }
    if p.vertices.is_empty() {
        return Ok(Vec::new());
    }
    let n = p.vertices[0].len();
    let mut lo = vec![Int::zero(); n];
    let mut hi = vec![Int::zero(); n];
    for c in 0..n {
        let mut min = p.vertices[0][c].clone();
        let mut max = min.clone();
        for v in &p.vertices {
            if v[c] < min {
                min = v[c].clone();
            }
            if v[c] > max {
                max = v[c].clone();
            }
        }
        lo[c] = min.ceil().to_integer();
        hi[c] = max.floor().to_integer();
    }
    let mut out = Vec::new();
    let mut point = lo.clone();
    'scan: loop {
        let q = to_ratio_vec(&point);
        if p.inequalities.iter().all(|(v, b)| dot(&to_ratio_vec(v), &q) >= *b) {
            out.push(point.clone());
        }
        // Odometer increment over the box.
        for c in (0..n).rev() {
            if point[c] < hi[c] {
                point[c] += 1;
                for (reset, low) in point.iter_mut().zip(&lo).skip(c + 1) {
                    *reset = low.clone();
                }
                continue 'scan;
            }
        }
        break;
    }
    out.sort();
    Ok(out)
}
