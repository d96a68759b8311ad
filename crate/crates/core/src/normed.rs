//! Finite-dimensional normed-space descriptors (ℓ_q and weighted-L^q),
//! primal/dual norm evaluation, extreme points of polytopal dual balls, and
//! the central dual-ball maximization of weighted p-th moments.
//!
//! For weighted-L^q the pairing carries the weights, ⟨x, x*⟩ = Σ_j w_j x_j x*_j,
//! so the dual of weighted-L^q is the weighted-L^{q'} space with the same
//! weights and the discretized L^{p'}–L^p duality is represented exactly.

use crate::error::{Error, Result};
use crate::linalg::svd_rows;
use crate::scalar::{conjugate_exponent, Real};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Guard for sign-vector enumeration (primal ℓ_1, dual ℓ_∞ ball).
pub const MAX_SIGN_DIM: usize = 16;

/// Norm descriptor of a finite-dimensional space: exponent q ∈ [1, ∞] and
/// optional strictly positive coordinate weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DescriptorJson<F>", into = "DescriptorJson<F>")]
#[serde(bound(serialize = "F: Real + Serialize", deserialize = "F: Real + Deserialize<'de>"))]
pub struct SpaceDescriptor<F: Real> {
    dim: usize,
    q: F,
    weights: Option<Vec<F>>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "F: Real + Serialize", deserialize = "F: Real + Deserialize<'de>"))]
struct DescriptorJson<F: Real> {
    dim: usize,
    q: ExponentJson<F>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    weights: Option<Vec<F>>,
}

/// JSON form of an exponent: a number, or the string "inf".
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ExponentJson<F> {
    Finite(F),
    Named(String),
}

impl<F: Real> TryFrom<DescriptorJson<F>> for SpaceDescriptor<F> {
    type Error = Error;
    fn try_from(raw: DescriptorJson<F>) -> Result<Self> {
        let q = match raw.q {
            ExponentJson::Finite(v) => v,
            ExponentJson::Named(s) if s == "inf" => F::infinity(),
            ExponentJson::Named(_) => return Err(Error::BadExponent { p: f64::NAN }),
        };
        match raw.weights {
            Some(w) => SpaceDescriptor::weighted_lq(q, w),
            None => SpaceDescriptor::lq(raw.dim, q),
        }
    }
}

impl<F: Real> From<SpaceDescriptor<F>> for DescriptorJson<F> {
    fn from(d: SpaceDescriptor<F>) -> Self {
        DescriptorJson {
            dim: d.dim,
            q: if d.q.is_infinite() {
                ExponentJson::Named("inf".to_string())
            } else {
                ExponentJson::Finite(d.q)
            },
            weights: d.weights,
        }
    }
}

impl<F: Real> SpaceDescriptor<F> {
    /// Unweighted ℓ_q in dimension `dim`, q ∈ [1, ∞].
    pub fn lq(dim: usize, q: F) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        if q < F::one() || q.is_nan() {
            return Err(Error::BadExponent { p: q.as_f64() });
        }
        Ok(Self { dim, q, weights: None })
    }

    /// Weighted-L^q with strictly positive weights; dim = weight count.
    pub fn weighted_lq(q: F, weights: Vec<F>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        if q < F::one() || q.is_nan() {
            return Err(Error::BadExponent { p: q.as_f64() });
        }
        if weights.iter().any(|w| !(*w > F::zero()) || !w.is_finite()) {
            return Err(Error::BadWeights { reason: "weights must be strictly positive" });
        }
        Ok(Self { dim: weights.len(), q, weights: Some(weights) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn exponent(&self) -> F {
        self.q
    }

    pub fn weights(&self) -> Option<&[F]> {
        self.weights.as_deref()
    }

    /// Descriptor of the dual space under the declared pairing: conjugate
    /// exponent, same weights.
    pub fn dual(&self) -> Self {
        Self {
            dim: self.dim,
            q: conjugate_exponent(self.q),
            weights: self.weights.clone(),
        }
    }

    /// Pairing weight of coordinate `j` (1 for unweighted ℓ_q).
    pub fn pairing_weight(&self, j: usize) -> F {
        match &self.weights {
            Some(w) => w[j],
            None => F::one(),
        }
    }

    /// ⟨x, x*⟩ under the declared pairing.
    pub fn pairing(&self, x: &[F], xs: &[F]) -> F {
        match &self.weights {
            Some(w) => w.iter().zip(x).zip(xs).map(|((&w, &a), &b)| w * a * b).sum(),
            None => x.iter().zip(xs).map(|(&a, &b)| a * b).sum(),
        }
    }

    fn norm_of(&self, coords: &[F]) -> F {
        if self.q.is_infinite() {
            return coords.iter().fold(F::zero(), |acc, &c| acc.max(c.abs()));
        }
        let sum: F = coords
            .iter()
            .enumerate()
            .map(|(j, &c)| self.pairing_weight(j) * c.abs().powf(self.q))
            .sum();
        sum.powf(F::one() / self.q)
    }

    fn check_dim(&self, coords: &[F]) -> Result<()> {
        if coords.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: coords.len() });
        }
        Ok(())
    }
}

/// Element of the primal space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector<F> {
    pub coords: Vec<F>,
}

/// Element of the dual space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DualVector<F> {
    pub coords: Vec<F>,
}

impl<F: Real> Vector<F> {
    pub fn new(coords: Vec<F>) -> Self {
        Self { coords }
    }

    pub fn zero(dim: usize) -> Self {
        Self { coords: vec![F::zero(); dim] }
    }

    pub fn basis(dim: usize, j: usize) -> Self {
        let mut coords = vec![F::zero(); dim];
        coords[j] = F::one();
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn scaled(&self, c: F) -> Self {
        Self { coords: self.coords.iter().map(|&x| c * x).collect() }
    }

    pub fn minus(&self, other: &Self) -> Self {
        Self {
            coords: self.coords.iter().zip(&other.coords).map(|(&a, &b)| a - b).collect(),
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        Self {
            coords: self.coords.iter().zip(&other.coords).map(|(&a, &b)| a + b).collect(),
        }
    }
}

impl<F: Real> DualVector<F> {
    pub fn new(coords: Vec<F>) -> Self {
        Self { coords }
    }

    pub fn zero(dim: usize) -> Self {
        Self { coords: vec![F::zero(); dim] }
    }

    pub fn basis(dim: usize, j: usize) -> Self {
        let mut coords = vec![F::zero(); dim];
        coords[j] = F::one();
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn scaled(&self, c: F) -> Self {
        Self { coords: self.coords.iter().map(|&x| c * x).collect() }
    }
}

/// Norm of a primal vector.
pub fn norm<F: Real>(desc: &SpaceDescriptor<F>, x: &Vector<F>) -> Result<F> {
    desc.check_dim(&x.coords)?;
    Ok(desc.norm_of(&x.coords))
}

/// Norm of a dual vector in the conjugate-exponent space under the declared
/// pairing.
pub fn dual_norm<F: Real>(desc: &SpaceDescriptor<F>, xs: &DualVector<F>) -> Result<F> {
    desc.check_dim(&xs.coords)?;
    Ok(desc.dual().norm_of(&xs.coords))
}

/// Pairing ⟨x, x*⟩ with dimension checks.
pub fn pairing<F: Real>(desc: &SpaceDescriptor<F>, x: &Vector<F>, xs: &DualVector<F>) -> Result<F> {
    desc.check_dim(&x.coords)?;
    desc.check_dim(&xs.coords)?;
    Ok(desc.pairing(&x.coords, &xs.coords))
}

/// Extreme points of the dual unit ball when it is a polytope:
/// primal ℓ_∞ → 2d scaled coordinate functionals; primal ℓ_1 → 2^d sign
/// vectors (guarded); one-dimensional spaces → the two endpoints.
/// `None` when the dual ball is smooth (q strictly between 1 and ∞, d ≥ 2).
pub fn dual_ball_extreme_points<F: Real>(
    desc: &SpaceDescriptor<F>,
) -> Result<Option<Vec<DualVector<F>>>> {
    let d = desc.dim;
    if d == 1 {
        // segment: endpoints ±t with ‖t‖ dual = 1
        let unit = DualVector::basis(1, 0);
        let n = dual_norm(desc, &unit)?;
        let t = F::one() / n;
        return Ok(Some(vec![
            DualVector::new(vec![t]),
            DualVector::new(vec![-t]),
        ]));
    }
    if desc.q.is_infinite() {
        // dual ball is the weighted-L^1 ball: vertices ±e_j / w_j
        let mut pts = Vec::with_capacity(2 * d);
        for j in 0..d {
            let t = F::one() / desc.pairing_weight(j);
            let mut plus = vec![F::zero(); d];
            plus[j] = t;
            let mut minus = vec![F::zero(); d];
            minus[j] = -t;
            pts.push(DualVector::new(plus));
            pts.push(DualVector::new(minus));
        }
        return Ok(Some(pts));
    }
    if desc.q == F::one() {
        // dual ball is the L^∞ cube: 2^d sign vectors
        if d > MAX_SIGN_DIM {
            return Err(Error::TooManyVertices { dim: d, max: MAX_SIGN_DIM });
        }
        let mut pts = Vec::with_capacity(1 << d);
        for mask in 0u32..(1u32 << d) {
            let coords = (0..d)
                .map(|j| if mask >> j & 1 == 1 { F::one() } else { -F::one() })
                .collect();
            pts.push(DualVector::new(coords));
        }
        return Ok(Some(pts));
    }
    Ok(None)
}

/// Certification status of a reported optimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Certification {
    /// Global optimum from a closed-form route (polytope vertices or SVD).
    #[serde(rename = "exact")]
    Exact,
    /// Best value found by multi-start ascent; always a valid lower bound.
    #[serde(rename = "heuristic-lower-bound")]
    Heuristic,
}

/// Result of a dual-ball maximization: the value, the functional attaining
/// it, and whether the value is certified as the global optimum. The value
/// always equals the objective at the witness, so it is a valid lower bound
/// in every regime.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(serialize = "F: Real + Serialize", deserialize = "F: Real + Deserialize<'de>"))]
pub struct MomentMaxResult<F: Real> {
    pub value: F,
    pub witness: DualVector<F>,
    pub certified: Certification,
}

/// Deterministic search configuration for the heuristic regime.
#[derive(Debug, Clone, Copy)]
pub struct MomentSearchConfig {
    pub starts: usize,
    pub iters: usize,
    pub seed: u64,
}

impl Default for MomentSearchConfig {
    fn default() -> Self {
        Self { starts: 32, iters: 200, seed: 0 }
    }
}

struct MomentObjective<'a, F: Real> {
    desc: &'a SpaceDescriptor<F>,
    vectors: &'a [Vector<F>],
    weights: &'a [F],
    p: F,
}

impl<'a, F: Real> MomentObjective<'a, F> {
    /// (Σ_i μ_i |⟨v_i, x*⟩|^p)^{1/p}
    fn eval(&self, xs: &[F]) -> F {
        self.eval_pow(xs).powf(F::one() / self.p)
    }

    /// Σ_i μ_i |⟨v_i, x*⟩|^p
    fn eval_pow(&self, xs: &[F]) -> F {
        self.vectors
            .iter()
            .zip(self.weights)
            .map(|(v, &w)| w * self.desc.pairing(&v.coords, xs).abs().powf(self.p))
            .sum()
    }

    fn grad_pow(&self, xs: &[F]) -> Vec<F> {
        let d = self.desc.dim();
        let mut g = vec![F::zero(); d];
        for (v, &w) in self.vectors.iter().zip(self.weights) {
            let a = self.desc.pairing(&v.coords, xs);
            if a == F::zero() {
                continue;
            }
            let coef = self.p * w * a.abs().powf(self.p - F::one()) * a.signum();
            for j in 0..d {
                g[j] += coef * self.desc.pairing_weight(j) * v.coords[j];
            }
        }
        g
    }
}

/// sup over the dual unit ball of (Σ_i μ_i |⟨v_i, x*⟩|^p)^{1/p}.
///
/// Exact when the dual ball is a polytope (maximize over its extreme
/// points; the objective is convex in x*) or in the Hilbert case q = 2,
/// p = 2 (top singular value). Otherwise deterministic multi-start
/// projected gradient ascent; the result is then flagged as a certified
/// lower bound.
pub fn maximize_p_moment<F: Real>(
    desc: &SpaceDescriptor<F>,
    vectors: &[Vector<F>],
    weights: &[F],
    p: F,
) -> Result<MomentMaxResult<F>> {
    maximize_with_config(desc, vectors, weights, p, &MomentSearchConfig::default())
}

/// True iff the (descriptor, p) pair admits a certified-exact maximization.
pub fn certified_regime<F: Real>(desc: &SpaceDescriptor<F>, p: F) -> bool {
    desc.dim() == 1
        || desc.exponent() == F::one() && desc.dim() <= MAX_SIGN_DIM
        || desc.exponent().is_infinite()
        || desc.exponent() == F::of(2.0) && p == F::of(2.0)
}

/// Core maximization with an explicit deterministic search configuration.
pub fn maximize_with_config<F: Real>(
    desc: &SpaceDescriptor<F>,
    vectors: &[Vector<F>],
    weights: &[F],
    p: F,
    cfg: &MomentSearchConfig,
) -> Result<MomentMaxResult<F>> {
    if vectors.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if weights.len() != vectors.len() {
        return Err(Error::DimensionMismatch { expected: vectors.len(), got: weights.len() });
    }
    for v in vectors {
        desc.check_dim(&v.coords)?;
    }
    for (index, w) in weights.iter().enumerate() {
        if !(*w > F::zero()) || !w.is_finite() {
            return Err(Error::NonPositiveMass { index });
        }
    }
    if p < F::one() || !p.is_finite() {
        return Err(Error::BadExponent { p: p.as_f64() });
    }
    let objective = MomentObjective { desc, vectors, weights, p };

    // polytopal dual ball: the convex objective attains its max at a vertex
    let extreme = match dual_ball_extreme_points(desc) {
        Ok(pts) => pts,
        Err(Error::TooManyVertices { .. }) => None,
        Err(e) => return Err(e),
    };
    if let Some(points) = extreme {
        let mut best = points[0].clone();
        let mut best_val = objective.eval(&best.coords);
        for pt in &points[1..] {
            let v = objective.eval(&pt.coords);
            if v > best_val {
                best_val = v;
                best = pt.clone();
            }
        }
        return Ok(MomentMaxResult { value: best_val, witness: best, certified: Certification::Exact });
    }

    // Hilbert case: value is the top singular value of the matrix with rows
    // √μ_i √w_j v_ij (pairing weights folded in)
    if desc.exponent() == F::of(2.0) && p == F::of(2.0) {
        let rows: Vec<Vec<F>> = vectors
            .iter()
            .zip(weights)
            .map(|(v, &m)| {
                (0..desc.dim())
                    .map(|j| m.sqrt() * desc.pairing_weight(j).sqrt() * v.coords[j])
                    .collect()
            })
            .collect();
        let (_, right) = svd_rows(&rows);
        let y = &right[0];
        let coords: Vec<F> = (0..desc.dim())
            .map(|j| y[j] / desc.pairing_weight(j).sqrt())
            .collect();
        let witness = normalize_dual(desc, coords).unwrap_or_else(|| DualVector::zero(desc.dim()));
        let value = objective.eval(&witness.coords);
        return Ok(MomentMaxResult { value, witness, certified: Certification::Exact });
    }

    // heuristic regime: multi-start projected gradient ascent on the dual
    // sphere (the objective is positively homogeneous, so the maximum over
    // the ball is attained on the sphere)
    let d = desc.dim();
    let mut starts: Vec<DualVector<F>> = Vec::with_capacity(cfg.starts);
    for j in 0..d.min(cfg.starts / 2) {
        if let Some(s) = normalize_dual(desc, DualVector::<F>::basis(d, j).coords) {
            starts.push(s);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    while starts.len() < cfg.starts {
        let coords: Vec<F> = (0..d).map(|_| F::of(gaussian(&mut rng))).collect();
        if let Some(s) = normalize_dual(desc, coords) {
            starts.push(s);
        }
    }

    let mut best: Option<(F, DualVector<F>)> = None;
    for start in starts {
        let coarse = ascend(&objective, desc, start, cfg.iters);
        let (val, point) = polish(&objective, desc, coarse.1, cfg.iters);
        match &best {
            Some((bv, _)) if *bv >= val => {}
            _ => best = Some((val, point)),
        }
    }
    let (_, witness) = best.expect("at least one start");
    let value = objective.eval(&witness.coords);
    Ok(MomentMaxResult { value, witness, certified: Certification::Heuristic })
}

/// Conditional-gradient fixed point: replace x by the dual-ball maximizer of
/// the linearized objective. Monotone for convex objectives; converges to
/// machine precision near a maximizer (the power method when p = q = 2).
fn polish<F: Real>(
    objective: &MomentObjective<'_, F>,
    desc: &SpaceDescriptor<F>,
    start: DualVector<F>,
    iters: usize,
) -> (F, DualVector<F>) {
    let ball = desc.dual();
    let mut x = start;
    let mut val = objective.eval_pow(&x.coords);
    let mut stall = 0;
    for _ in 0..iters {
        let g = objective.grad_pow(&x.coords);
        let (lin, y) = linear_max_on_ball(&ball, &g);
        if !(lin > F::zero()) {
            break;
        }
        let y_val = objective.eval_pow(&y);
        if y_val > val {
            let rel = (y_val - val) / y_val.max(F::of(1e-300));
            x = DualVector::new(y);
            val = y_val;
            if rel < F::of(1e-16) {
                stall += 1;
                if stall >= 2 {
                    break;
                }
            } else {
                stall = 0;
            }
        } else {
            break;
        }
    }
    (objective.eval(&x.coords), x)
}

/// Backtracking gradient ascent of the p-th power objective, radially
/// projected onto the dual unit sphere.
fn ascend<F: Real>(
    objective: &MomentObjective<'_, F>,
    desc: &SpaceDescriptor<F>,
    start: DualVector<F>,
    iters: usize,
) -> (F, DualVector<F>) {
    let mut x = start;
    let mut val = objective.eval_pow(&x.coords);
    let mut step = F::of(0.5);
    let step_floor = F::of(1e-13);
    for _ in 0..iters {
        let g = objective.grad_pow(&x.coords);
        let gn: F = g.iter().map(|&c| c * c).sum::<F>().sqrt();
        if gn <= F::of(1e-300) {
            break;
        }
        let mut improved = false;
        while step > step_floor {
            let cand: Vec<F> = x
                .coords
                .iter()
                .zip(&g)
                .map(|(&xi, &gi)| xi + step * gi / gn)
                .collect();
            let Some(cand) = normalize_dual(desc, cand) else {
                step *= F::of(0.5);
                continue;
            };
            let cv = objective.eval_pow(&cand.coords);
            if cv > val {
                x = cand;
                val = cv;
                step = (step * F::of(1.5)).min(F::one());
                improved = true;
                break;
            }
            step *= F::of(0.5);
        }
        if !improved {
            break;
        }
    }
    (objective.eval(&x.coords), x)
}

/// Radial projection onto the dual unit sphere; `None` for (near-)zero input.
fn normalize_dual<F: Real>(desc: &SpaceDescriptor<F>, coords: Vec<F>) -> Option<DualVector<F>> {
    let n = desc.dual().norm_of(&coords);
    if !(n > F::of(1e-300)) || !n.is_finite() {
        return None;
    }
    Some(DualVector::new(coords.into_iter().map(|c| c / n).collect()))
}

/// Standard normal sample via Box–Muller (keeps the dependency surface to
/// plain uniform draws, which are stable across `rand` versions).
fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Deterministic direction set in dimension `dim`: uniform angles for d = 2,
/// Fibonacci sphere for d = 3, product-of-angles grids for d ≤ 5, seeded
/// gaussian directions beyond.
fn unit_directions<F: Real>(dim: usize, count: usize, seed: u64) -> Vec<Vec<F>> {
    let count = count.max(2);
    match dim {
        0 => Vec::new(),
        1 => vec![vec![F::one()], vec![-F::one()]],
        2 => (0..count)
            .map(|k| {
                let theta = std::f64::consts::TAU * (k as f64) / (count as f64);
                vec![F::of(theta.cos()), F::of(theta.sin())]
            })
            .collect(),
        3 => {
            // Fibonacci sphere
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|k| {
                    let z = 1.0 - 2.0 * (k as f64 + 0.5) / (count as f64);
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    let phi = golden * k as f64;
                    vec![F::of(r * phi.cos()), F::of(r * phi.sin()), F::of(z)]
                })
                .collect()
        }
        4 | 5 => {
            // product-of-angles grid in spherical coordinates
            let axes = dim - 1;
            let per = (count as f64).powf(1.0 / axes as f64).ceil() as usize;
            let per = per.max(2);
            let mut out = Vec::new();
            let mut idx = vec![0usize; axes];
            loop {
                let mut angles = Vec::with_capacity(axes);
                for (a, &i) in idx.iter().enumerate() {
                    let span = if a + 1 == axes { std::f64::consts::TAU } else { std::f64::consts::PI };
                    angles.push(span * (i as f64 + 0.5) / per as f64);
                }
                let mut coords = Vec::with_capacity(dim);
                let mut sin_prod = 1.0f64;
                for &a in &angles {
                    coords.push(F::of(sin_prod * a.cos()));
                    sin_prod *= a.sin();
                }
                coords.push(F::of(sin_prod));
                out.push(coords);
                // odometer
                let mut k = 0;
                loop {
                    idx[k] += 1;
                    if idx[k] < per {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                    if k == axes {
                        return out;
                    }
                }
            }
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count)
                .map(|_| (0..dim).map(|_| F::of(gaussian(&mut rng))).collect())
                .collect()
        }
    }
}

/// Deterministic points on the dual unit sphere of `desc`.
pub fn dual_sphere_grid<F: Real>(
    desc: &SpaceDescriptor<F>,
    count: usize,
    seed: u64,
) -> Vec<DualVector<F>> {
    unit_directions(desc.dim(), count, seed)
        .into_iter()
        .filter_map(|coords| normalize_dual(desc, coords))
        .collect()
}

/// Deterministic points on the primal unit sphere of `desc`.
pub fn primal_sphere_grid<F: Real>(
    desc: &SpaceDescriptor<F>,
    count: usize,
    seed: u64,
) -> Vec<Vector<F>> {
    unit_directions(desc.dim(), count, seed)
        .into_iter()
        .filter_map(|coords| {
            let n = desc.norm_of(&coords);
            if n > F::of(1e-300) && n.is_finite() {
                Some(Vector::new(coords.into_iter().map(|c| c / n).collect()))
            } else {
                None
            }
        })
        .collect()
}

/// Maximize the plain linear form x ↦ Σ_j r_j x_j over the unit ball of
/// `desc`; returns the max (the dual norm of `r` under the plain pairing)
/// and a unit vector attaining it (Hölder equality case).
pub(crate) fn linear_max_on_ball<F: Real>(desc: &SpaceDescriptor<F>, r: &[F]) -> (F, Vec<F>) {
    let d = desc.dim();
    // effective dual coordinates under the declared pairing
    let rho: Vec<F> = (0..d).map(|j| r[j] / desc.pairing_weight(j)).collect();
    let q = desc.exponent();
    let mut x = vec![F::zero(); d];
    if q == F::one() {
        let j = (0..d)
            .max_by(|&a, &b| {
                rho[a].abs().partial_cmp(&rho[b].abs()).unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap();
        x[j] = rho[j].signum();
    } else if q.is_infinite() {
        for j in 0..d {
            x[j] = rho[j].signum();
        }
    } else {
        let qp = conjugate_exponent(q);
        for j in 0..d {
            x[j] = rho[j].signum() * rho[j].abs().powf(qp - F::one());
        }
    }
    let n = desc.norm_of(&x);
    if !(n > F::zero()) || !n.is_finite() {
        return (F::zero(), vec![F::zero(); d]);
    }
    let x: Vec<F> = x.into_iter().map(|c| c / n).collect();
    let value = x.iter().zip(r).map(|(&a, &b)| a * b).sum();
    (value, x)
}

/// [`linear_max_on_ball`] wrapped for primal-vector callers.
pub(crate) fn plain_functional_max<F: Real>(
    desc: &SpaceDescriptor<F>,
    r: &[F],
) -> (F, Vector<F>) {
    let (value, x) = linear_max_on_ball(desc, r);
    (value, Vector::new(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn l<F: Real>(dim: usize, q: f64) -> SpaceDescriptor<F> {
        SpaceDescriptor::lq(dim, F::of(q)).unwrap()
    }

    #[test]
    fn norm_examples() {
        let d2 = l::<f64>(2, 2.0);
        assert_abs_diff_eq!(norm(&d2, &Vector::new(vec![3.0, 4.0])).unwrap(), 5.0);
        let d1 = l::<f64>(3, 1.0);
        assert_abs_diff_eq!(norm(&d1, &Vector::new(vec![1.0, -2.0, 3.0])).unwrap(), 6.0);
        let dinf = SpaceDescriptor::lq(3, f64::INFINITY).unwrap();
        assert_abs_diff_eq!(norm(&dinf, &Vector::new(vec![1.0, -2.0, 3.0])).unwrap(), 3.0);
        assert!(matches!(
            norm(&d2, &Vector::new(vec![1.0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn dual_norm_examples() {
        let d1 = l::<f64>(2, 1.0);
        assert_abs_diff_eq!(dual_norm(&d1, &DualVector::new(vec![3.0, -4.0])).unwrap(), 4.0);
        let d2 = l::<f64>(2, 2.0);
        assert_abs_diff_eq!(dual_norm(&d2, &DualVector::new(vec![3.0, 4.0])).unwrap(), 5.0);
    }

    #[test]
    fn hoelder_pairing_bound_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let dim = rng.gen_range(1..5usize);
            let q = [1.0, 1.5, 2.0, 3.0, f64::INFINITY][rng.gen_range(0..5usize)];
            let desc = if rng.gen_bool(0.5) {
                SpaceDescriptor::lq(dim, q).unwrap()
            } else {
                let w: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.1..3.0)).collect();
                SpaceDescriptor::weighted_lq(q, w).unwrap()
            };
            let x = Vector::new((0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect());
            let xs = DualVector::new((0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect());
            let lhs = pairing(&desc, &x, &xs).unwrap().abs();
            let rhs = norm(&desc, &x).unwrap() * dual_norm(&desc, &xs).unwrap();
            assert!(lhs <= rhs + 1e-9, "Hölder violated: {lhs} > {rhs}");
        }
    }

    #[test]
    fn dual_of_dual_round_trips() {
        for q in [1.0, 1.5, 2.0, 3.0, f64::INFINITY] {
            let desc = SpaceDescriptor::<f64>::lq(3, q).unwrap();
            assert_eq!(desc.dual().dual(), desc);
            let w = SpaceDescriptor::weighted_lq(q, vec![0.5, 0.25, 0.25]).unwrap();
            assert_eq!(w.dual().dual(), w);
        }
    }

    #[test]
    fn extreme_points_of_polytopal_balls() {
        let d1 = l::<f64>(2, 1.0);
        let pts = dual_ball_extreme_points(&d1).unwrap().unwrap();
        assert_eq!(pts.len(), 4); // (±1, ±1)
        for pt in &pts {
            assert_abs_diff_eq!(dual_norm(&d1, pt).unwrap(), 1.0, epsilon = 1e-12);
        }
        let dinf = SpaceDescriptor::lq(2, f64::INFINITY).unwrap();
        let pts = dual_ball_extreme_points(&dinf).unwrap().unwrap();
        assert_eq!(pts.len(), 4); // ±e_1, ±e_2
        let d2 = l::<f64>(2, 2.0);
        assert!(dual_ball_extreme_points(&d2).unwrap().is_none());
        let big = l::<f64>(17, 1.0);
        assert!(matches!(
            dual_ball_extreme_points(&big),
            Err(Error::TooManyVertices { .. })
        ));
    }

    #[test]
    fn moment_max_single_vector_is_its_norm() {
        // bidual norm identity, exercised across all three routes
        for q in [1.0, 1.5, 2.0, 3.0, f64::INFINITY] {
            for p in [1.0, 1.7, 2.0, 3.0] {
                let desc = SpaceDescriptor::<f64>::lq(3, q).unwrap();
                let v = Vector::new(vec![0.4, -1.2, 0.9]);
                let r =
                    maximize_p_moment(&desc, &[v.clone()], &[1.0], p).unwrap();
                let expected = norm(&desc, &v).unwrap();
                assert_abs_diff_eq!(r.value, expected, epsilon = 1e-7);
                assert!(dual_norm(&desc, &r.witness).unwrap() <= 1.0 + 1e-9);
            }
        }
    }

    #[test]
    fn moment_max_hilbert_case() {
        // v_1 = e_1, v_2 = e_2, μ = (1/2, 1/2), p = 2 → 1/√2
        let desc = l::<f64>(2, 2.0);
        let r = maximize_p_moment(
            &desc,
            &[Vector::basis(2, 0), Vector::basis(2, 1)],
            &[0.5, 0.5],
            2.0,
        )
        .unwrap();
        assert_eq!(r.certified, Certification::Exact);
        assert_abs_diff_eq!(r.value, 0.5f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn moment_max_polytopal_case() {
        // primal ℓ_∞²: dual ℓ_1 vertices ±e_j; p = 1 value (1+3)/2 = 2
        let desc = SpaceDescriptor::<f64>::lq(2, f64::INFINITY).unwrap();
        let r = maximize_p_moment(
            &desc,
            &[Vector::new(vec![1.0, 2.0]), Vector::new(vec![3.0, 1.0])],
            &[0.5, 0.5],
            1.0,
        )
        .unwrap();
        assert_eq!(r.certified, Certification::Exact);
        assert_abs_diff_eq!(r.value, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn moment_max_homogeneity_and_monotonicity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let dim = rng.gen_range(1..4usize);
            let q = [1.0, 2.0, f64::INFINITY][rng.gen_range(0..3usize)];
            let p = [1.0, 1.5, 2.0, 3.0][rng.gen_range(0..4usize)];
            let desc = SpaceDescriptor::<f64>::lq(dim, q).unwrap();
            let n = rng.gen_range(1..4usize);
            let vectors: Vec<Vector<f64>> = (0..n)
                .map(|_| Vector::new((0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect()))
                .collect();
            let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..1.0)).collect();
            let base = maximize_p_moment(&desc, &vectors, &weights, p).unwrap();
            // homogeneity
            let c = 2.5;
            let scaled: Vec<Vector<f64>> = vectors.iter().map(|v| v.scaled(c)).collect();
            let rs = maximize_p_moment(&desc, &scaled, &weights, p).unwrap();
            assert_abs_diff_eq!(rs.value, c * base.value, epsilon = 1e-8 * (1.0 + base.value));
            // monotonicity under adding a vector
            let mut more = vectors.clone();
            more.push(Vector::new((0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect()));
            let mut wts = weights.clone();
            wts.push(0.5);
            let rm = maximize_p_moment(&desc, &more, &wts, p).unwrap();
            assert!(rm.value >= base.value - 1e-9);
        }
    }

    #[test]
    fn moment_max_agrees_with_grid_scan_on_polytopal_balls() {
        // convex maximization vs dense boundary scan (vertices included)
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for case in 0..100 {
            let dim = rng.gen_range(2..4usize);
            let q = if case % 2 == 0 { 1.0 } else { f64::INFINITY };
            let p = [1.0, 1.5, 2.0, 3.0][rng.gen_range(0..4usize)];
            let desc = SpaceDescriptor::<f64>::lq(dim, q).unwrap();
            let n = rng.gen_range(1..4usize);
            let vectors: Vec<Vector<f64>> = (0..n)
                .map(|_| Vector::new((0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect()))
                .collect();
            let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..1.0)).collect();
            let exact = maximize_p_moment(&desc, &vectors, &weights, p).unwrap();
            assert_eq!(exact.certified, Certification::Exact);

            let objective = MomentObjective { desc: &desc, vectors: &vectors, weights: &weights, p };
            let mut scan: f64 = 0.0;
            // vertices of the dual ball
            for pt in dual_ball_extreme_points(&desc).unwrap().unwrap() {
                scan = scan.max(objective.eval(&pt.coords));
            }
            // dense boundary sampling of the dual sphere
            for dir in unit_directions::<f64>(dim, 2000, 5) {
                if let Some(s) = normalize_dual(&desc, dir) {
                    scan = scan.max(objective.eval(&s.coords));
                }
            }
            assert!(
                (exact.value - scan).abs() <= 1e-6 * (1.0 + scan),
                "exact {} vs scan {}",
                exact.value,
                scan
            );
            assert!(exact.value >= scan - 1e-9);
        }
    }

    #[test]
    fn heuristic_reports_valid_witness() {
        // q = 3 dual ball is smooth: heuristic regime
        let desc = l::<f64>(3, 3.0);
        let vectors = vec![
            Vector::new(vec![1.0, 0.5, -0.25]),
            Vector::new(vec![-0.5, 2.0, 0.75]),
        ];
        let r = maximize_p_moment(&desc, &vectors, &[0.5, 0.5], 1.5).unwrap();
        assert_eq!(r.certified, Certification::Heuristic);
        assert!(dual_norm(&desc, &r.witness).unwrap() <= 1.0 + 1e-9);
        let objective = MomentObjective { desc: &desc, vectors: &vectors, weights: &[0.5, 0.5], p: 1.5 };
        assert_abs_diff_eq!(objective.eval(&r.witness.coords), r.value, epsilon = 1e-9);
        // dense-scan lower bound must not beat the heuristic by much
        let mut scan: f64 = 0.0;
        for dir in unit_directions::<f64>(3, 4000, 9) {
            if let Some(s) = normalize_dual(&desc, dir) {
                scan = scan.max(objective.eval(&s.coords));
            }
        }
        assert!(r.value >= scan - 1e-4 * (1.0 + scan));
    }

    #[test]
    fn heuristic_search_is_deterministic_per_seed() {
        let desc = l::<f64>(3, 2.5);
        let vectors = vec![
            Vector::new(vec![0.9, -0.2, 0.4]),
            Vector::new(vec![0.1, 1.1, -0.6]),
            Vector::new(vec![-0.7, 0.3, 0.8]),
        ];
        let weights = [0.2, 0.5, 0.3];
        let cfg = MomentSearchConfig { seed: 42, ..MomentSearchConfig::default() };
        let a = maximize_with_config(&desc, &vectors, &weights, 1.7, &cfg).unwrap();
        let b = maximize_with_config(&desc, &vectors, &weights, 1.7, &cfg).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        for (x, y) in a.witness.coords.iter().zip(&b.witness.coords) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn plain_functional_max_attains_dual_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..100 {
            let dim = rng.gen_range(1..5usize);
            let q = [1.0, 1.5, 2.0, 4.0, f64::INFINITY][rng.gen_range(0..5usize)];
            let desc = if rng.gen_bool(0.5) {
                SpaceDescriptor::<f64>::lq(dim, q).unwrap()
            } else {
                let w: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.2..2.0)).collect();
                SpaceDescriptor::weighted_lq(q, w).unwrap()
            };
            let r: Vec<f64> = (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let (value, x) = plain_functional_max(&desc, &r);
            if value == 0.0 {
                continue;
            }
            assert_abs_diff_eq!(norm(&desc, &x).unwrap(), 1.0, epsilon = 1e-9);
            // compare against a dense sphere scan
            let mut scan: f64 = 0.0;
            for dir in primal_sphere_grid(&desc, 3000, 3) {
                let v: f64 = dir.coords.iter().zip(&r).map(|(&a, &b)| a * b).sum();
                scan = scan.max(v.abs());
            }
            assert!(value >= scan - 1e-3 * (1.0 + scan), "{value} vs scan {scan}");
        }
    }

    #[test]
    fn descriptor_json_round_trip() {
        let d = SpaceDescriptor::<f64>::lq(3, 2.0).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(s, r#"{"dim":3,"q":2.0}"#);
        assert_eq!(serde_json::from_str::<SpaceDescriptor<f64>>(&s).unwrap(), d);

        let d = SpaceDescriptor::<f64>::lq(2, f64::INFINITY).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(s, r#"{"dim":2,"q":"inf"}"#);
        assert_eq!(serde_json::from_str::<SpaceDescriptor<f64>>(&s).unwrap(), d);

        let d = SpaceDescriptor::weighted_lq(1.5, vec![0.5, 0.5]).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        let back: SpaceDescriptor<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
    }
}
