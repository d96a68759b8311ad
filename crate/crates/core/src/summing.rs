//! Linear operators between descriptors: definitional π_p lower bounds from
//! finite vector families, Pietsch-domination linear-program upper estimates
//! over dual-sphere discretizations, and operator/measure/function
//! compositions with the associated norm inequalities.
//!
//! The LP constant dominates on its test family only; it is an estimate that
//! converges to π_p(u) as the sphere and the test family densify, never a
//! certified global upper bound.

use crate::dunford::SimpleFunction;
use crate::error::{Error, Result};
use crate::linalg::svd_rows;
use crate::measure::VectorMeasure;
use crate::normed::{
    dual_norm, maximize_with_config, plain_functional_max, DualVector, MomentSearchConfig,
    SpaceDescriptor, Vector,
};
use crate::scalar::Real;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Operator u: X → Y as a dense matrix (codomain dim × domain dim).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OperatorJson<F>", into = "OperatorJson<F>")]
#[serde(bound(serialize = "F: Real + Serialize", deserialize = "F: Real + Deserialize<'de>"))]
pub struct LinearOperator<F: Real> {
    domain: SpaceDescriptor<F>,
    codomain: SpaceDescriptor<F>,
    entries: Vec<Vec<F>>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "F: Real + Serialize", deserialize = "F: Real + Deserialize<'de>"))]
struct OperatorJson<F: Real> {
    domain: SpaceDescriptor<F>,
    codomain: SpaceDescriptor<F>,
    entries: Vec<Vec<F>>,
}

impl<F: Real> TryFrom<OperatorJson<F>> for LinearOperator<F> {
    type Error = Error;
    fn try_from(raw: OperatorJson<F>) -> Result<Self> {
        LinearOperator::new(raw.domain, raw.codomain, raw.entries)
    }
}

impl<F: Real> From<LinearOperator<F>> for OperatorJson<F> {
    fn from(u: LinearOperator<F>) -> Self {
        OperatorJson { domain: u.domain, codomain: u.codomain, entries: u.entries }
    }
}

impl<F: Real> LinearOperator<F> {
    pub fn new(
        domain: SpaceDescriptor<F>,
        codomain: SpaceDescriptor<F>,
        entries: Vec<Vec<F>>,
    ) -> Result<Self> {
        if entries.len() != codomain.dim() {
            return Err(Error::DimensionMismatch {
                expected: codomain.dim(),
                got: entries.len(),
            });
        }
        for row in &entries {
            if row.len() != domain.dim() {
                return Err(Error::DimensionMismatch {
                    expected: domain.dim(),
                    got: row.len(),
                });
            }
        }
        Ok(Self { domain, codomain, entries })
    }

    /// Identity on `desc`.
    pub fn identity(desc: SpaceDescriptor<F>) -> Self {
        let d = desc.dim();
        let entries = (0..d)
            .map(|i| (0..d).map(|j| if i == j { F::one() } else { F::zero() }).collect())
            .collect();
        Self { domain: desc.clone(), codomain: desc, entries }
    }

    pub fn domain(&self) -> &SpaceDescriptor<F> {
        &self.domain
    }

    pub fn codomain(&self) -> &SpaceDescriptor<F> {
        &self.codomain
    }

    pub fn entries(&self) -> &[Vec<F>] {
        &self.entries
    }

    pub fn apply(&self, x: &Vector<F>) -> Result<Vector<F>> {
        if x.dim() != self.domain.dim() {
            return Err(Error::DimensionMismatch { expected: self.domain.dim(), got: x.dim() });
        }
        let coords = self
            .entries
            .iter()
            .map(|row| row.iter().zip(&x.coords).map(|(&a, &b)| a * b).sum())
            .collect();
        Ok(Vector::new(coords))
    }

    pub fn scaled(&self, c: F) -> Self {
        Self {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(|&v| c * v).collect())
                .collect(),
        }
    }
}

/// Search budget for the π_p lower-bound family search.
#[derive(Debug, Clone, Copy)]
pub struct SearchBudget {
    /// Largest family size tried; 0 means 2 × domain dimension.
    pub family_cap: usize,
    pub restarts: usize,
    pub hill_iters: usize,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self { family_cap: 0, restarts: 16, hill_iters: 60, seed: 0 }
    }
}

/// The p-summing ratio of one family:
/// (Σ_i ‖u x_i‖^p)^{1/p} / sup_{x*∈B}(Σ_i |⟨x_i, x*⟩|^p)^{1/p}.
/// Every ratio is a lower bound for π_p(u) (certified when the denominator
/// regime is exact).
pub fn family_ratio<F: Real>(
    u: &LinearOperator<F>,
    family: &[Vector<F>],
    p: F,
) -> Result<F> {
    family_ratio_with(u, family, p, &MomentSearchConfig::default())
}

fn family_ratio_with<F: Real>(
    u: &LinearOperator<F>,
    family: &[Vector<F>],
    p: F,
    cfg: &MomentSearchConfig,
) -> Result<F> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let weights = vec![F::one(); family.len()];
    let denominator = maximize_with_config(&u.domain, family, &weights, p, cfg)?.value;
    if !(denominator > F::of(1e-300)) {
        return Err(Error::ZeroFamily);
    }
    let mut num_pow = F::zero();
    for x in family {
        let image = u.apply(x)?;
        num_pow += crate::normed::norm(&u.codomain, &image)?.powf(p);
    }
    Ok(num_pow.powf(F::one() / p) / denominator)
}

/// Best definitional lower bound for π_p(u) over seeded families: the
/// standard basis, attaining vectors of the matrix rows, the leading
/// singular direction, and seeded random families refined by hill climbing.
/// Deterministic under a fixed seed.
pub fn pi_p_lower<F: Real>(
    u: &LinearOperator<F>,
    p: F,
    budget: &SearchBudget,
) -> Result<(F, Vec<Vector<F>>)> {
    if p < F::one() || !p.is_finite() {
        return Err(Error::BadExponent { p: p.as_f64() });
    }
    let d = u.domain.dim();
    let cap = if budget.family_cap == 0 { 2 * d } else { budget.family_cap };
    let cfg = MomentSearchConfig { seed: budget.seed, ..MomentSearchConfig::default() };

    let mut best: Option<(F, Vec<Vector<F>>)> = None;
    let consider = |family: &[Vector<F>], best: &mut Option<(F, Vec<Vector<F>>)>| {
        if let Ok(ratio) = family_ratio_with(u, family, p, &cfg) {
            match best {
                Some((bv, _)) if *bv >= ratio => {}
                _ => *best = Some((ratio, family.to_vec())),
            }
        }
    };

    // the full standard basis and each basis singleton
    let basis: Vec<Vector<F>> = (0..d).map(|j| Vector::basis(d, j)).collect();
    consider(&basis, &mut best);
    for v in &basis {
        consider(std::slice::from_ref(v), &mut best);
    }
    // attaining vectors of the rows (exact for rank-one and ℓ_1/ℓ_∞ shapes)
    for row in &u.entries {
        let (value, x) = plain_functional_max(&u.domain, row);
        if value > F::zero() {
            consider(std::slice::from_ref(&x), &mut best);
        }
    }
    // leading right singular direction of the matrix
    let (sv, right) = svd_rows(&u.entries);
    if !sv.is_empty() && sv[0] > F::zero() {
        let x = Vector::new(right[0].clone());
        consider(std::slice::from_ref(&x), &mut best);
    }

    // seeded random families with hill climbing
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    for _ in 0..budget.restarts {
        let size = rng.gen_range(1..=cap.max(1));
        let mut family: Vec<Vector<F>> = (0..size)
            .map(|_| Vector::new((0..d).map(|_| F::of(rng.gen_range(-1.0..1.0))).collect()))
            .collect();
        let Ok(mut current) = family_ratio_with(u, &family, p, &cfg) else {
            continue;
        };
        let mut sigma = 0.5;
        for _ in 0..budget.hill_iters {
            let candidate: Vec<Vector<F>> = family
                .iter()
                .map(|v| {
                    Vector::new(
                        v.coords
                            .iter()
                            .map(|&c| c + F::of(sigma * rng.gen_range(-1.0..1.0)))
                            .collect(),
                    )
                })
                .collect();
            if let Ok(r) = family_ratio_with(u, &candidate, p, &cfg) {
                if r > current {
                    current = r;
                    family = candidate;
                    continue;
                }
            }
            sigma *= 0.9;
        }
        consider(&family, &mut best);
    }

    Ok(best.unwrap_or((F::zero(), vec![Vector::zero(d)])))
}

/// Pietsch-style domination certificate over a finite dual-sphere
/// discretization: a discrete probability measure η on the support points
/// and a constant C with ‖u x‖^p ≤ C^p Σ_j η_j |⟨x, x*_j⟩|^p for every x in
/// the test family.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(serialize = "F: Real + Serialize", deserialize = "F: Real + Deserialize<'de>"))]
pub struct PietschCertificate<F: Real> {
    pub support: Vec<DualVector<F>>,
    pub weights: Vec<F>,
    pub constant: F,
    pub test_family: Vec<Vector<F>>,
}

impl<F: Real> PietschCertificate<F> {
    /// Re-check the certificate independently of the solver: weights form a
    /// probability vector (when C > 0) and domination holds on the whole
    /// test family within 1e-9.
    pub fn verify(&self, u: &LinearOperator<F>, p: F) -> Result<()> {
        let tol = F::of(1e-9);
        if self.weights.len() != self.support.len() {
            return Err(Error::DimensionMismatch {
                expected: self.support.len(),
                got: self.weights.len(),
            });
        }
        if self.weights.iter().any(|w| *w < -tol) {
            return Err(Error::LpFailure { detail: "negative certificate weight" });
        }
        if self.constant > F::zero() {
            let sum: F = self.weights.iter().copied().sum();
            if (sum - F::one()).abs() > tol {
                return Err(Error::LpFailure { detail: "certificate weights not a probability" });
            }
        }
        for xs in &self.support {
            let n = dual_norm(&u.domain, xs)?;
            if (n - F::one()).abs() > tol {
                return Err(Error::DualNormViolation { norm: n.as_f64() });
            }
        }
        let cp = self.constant.powf(p);
        for x in &self.test_family {
            let lhs = crate::normed::norm(&u.codomain, &u.apply(x)?)?.powf(p);
            let mut mixture = F::zero();
            for (xs, &w) in self.support.iter().zip(&self.weights) {
                mixture += w * u.domain.pairing(&x.coords, &xs.coords).abs().powf(p);
            }
            if lhs > cp * mixture + tol {
                return Err(Error::LpFailure { detail: "certificate domination violated" });
            }
        }
        Ok(())
    }

    /// C^p Σ_j η_j Σ_i w_i |⟨v_i, x*_j⟩|^p — the certificate-side mixture
    /// used in the composition inequalities.
    pub fn mixture_moment(&self, u: &LinearOperator<F>, vectors: &[Vector<F>], w: &[F], p: F) -> F {
        let mut total = F::zero();
        for (xs, &eta) in self.support.iter().zip(&self.weights) {
            let mut inner = F::zero();
            for (v, &wi) in vectors.iter().zip(w) {
                inner += wi * u.domain.pairing(&v.coords, &xs.coords).abs().powf(p);
            }
            total += eta * inner;
        }
        self.constant.powf(p) * total
    }
}

/// Solve the domination linear program
///   minimize Σ_j t_j  s.t.  Σ_j t_j |⟨x, x*_j⟩|^p ≥ ‖u x‖^p  (x in family)
/// over the given sphere points, returning C = (Σ t)^{1/p} and η = t/Σt.
pub fn pietsch_lp_upper<F: Real>(
    u: &LinearOperator<F>,
    p: F,
    sphere: &[DualVector<F>],
    test_family: &[Vector<F>],
) -> Result<PietschCertificate<F>> {
    if test_family.is_empty() || sphere.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if p < F::one() || !p.is_finite() {
        return Err(Error::BadExponent { p: p.as_f64() });
    }
    let tol = F::of(1e-9);
    for xs in sphere {
        let n = dual_norm(&u.domain, xs)?;
        if (n - F::one()).abs() > tol {
            return Err(Error::DualNormViolation { norm: n.as_f64() });
        }
    }

    // constraint rows for test vectors with ‖u x‖ > 0
    let mut rows: Vec<Vec<F>> = Vec::new();
    let mut rhs: Vec<F> = Vec::new();
    for x in test_family {
        let b = crate::normed::norm(&u.codomain, &u.apply(x)?)?.powf(p);
        if b == F::zero() {
            continue;
        }
        let row: Vec<F> = sphere
            .iter()
            .map(|xs| u.domain.pairing(&x.coords, &xs.coords).abs().powf(p))
            .collect();
        if row.iter().all(|&a| a <= F::of(1e-300)) {
            return Err(Error::InfeasibleLp);
        }
        rows.push(row);
        rhs.push(b);
    }

    if rows.is_empty() {
        // zero operator on the family: Dirac at the first sphere point, C = 0
        return Ok(PietschCertificate {
            support: vec![sphere[0].clone()],
            weights: vec![F::one()],
            constant: F::zero(),
            test_family: test_family.to_vec(),
        });
    }

    let c = vec![F::one(); sphere.len()];
    let solution = crate::simplex::minimize(&c, &rows, &rhs)?;
    let mut t = solution.x;
    let claimed: F = t.iter().copied().sum();
    if (claimed - solution.objective).abs() > F::of(1e-6) * (F::one() + solution.objective) {
        return Err(Error::LpFailure { detail: "solver objective inconsistent with solution" });
    }

    // repair any residual constraint violation by a uniform rescale, so the
    // certificate stands on its own regardless of solver tolerances
    let mut worst = F::one();
    for (row, &b) in rows.iter().zip(&rhs) {
        let lhs: F = row.iter().zip(&t).map(|(&a, &ti)| a * ti).sum();
        if !(lhs > F::zero()) {
            return Err(Error::LpFailure { detail: "solver returned a non-covering solution" });
        }
        worst = worst.max(b / lhs);
    }
    if worst > F::one() {
        let factor = worst * (F::one() + F::of(1e-13));
        for ti in &mut t {
            *ti *= factor;
        }
    }

    let total: F = t.iter().copied().sum();
    let mut support = Vec::new();
    let mut weights = Vec::new();
    for (xs, &ti) in sphere.iter().zip(&t) {
        if ti > F::zero() {
            support.push(xs.clone());
            weights.push(ti / total);
        }
    }
    let wsum: F = weights.iter().copied().sum();
    for w in &mut weights {
        *w /= wsum;
    }
    let certificate = PietschCertificate {
        support,
        weights,
        constant: total.powf(F::one() / p),
        test_family: test_family.to_vec(),
    };
    certificate.verify(u, p)?;
    Ok(certificate)
}

/// Definitional lower and LP upper estimate side by side.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(serialize = "F: Real + Serialize", deserialize = "F: Real + Deserialize<'de>"))]
pub struct SummingEstimate<F: Real> {
    pub p: F,
    pub lower: F,
    pub lower_family: Vec<Vector<F>>,
    pub upper: F,
    pub certificate: PietschCertificate<F>,
}

impl<F: Real> SummingEstimate<F> {
    /// Pair a lower bound with a certificate; rejects inverted estimates
    /// beyond tolerance when the certificate family covers the witness.
    pub fn assemble(
        p: F,
        lower: F,
        lower_family: Vec<Vector<F>>,
        certificate: PietschCertificate<F>,
    ) -> Result<Self> {
        let covered = lower_family
            .iter()
            .all(|x| certificate.test_family.iter().any(|y| vectors_close(x, y, F::of(1e-9))));
        if covered && lower > certificate.constant + F::of(1e-6) {
            return Err(Error::LpFailure { detail: "lower bound exceeds covered upper estimate" });
        }
        Ok(Self { p, lower, lower_family, upper: certificate.constant, certificate })
    }
}

fn vectors_close<F: Real>(a: &Vector<F>, b: &Vector<F>, tol: F) -> bool {
    a.coords.len() == b.coords.len()
        && a.coords.iter().zip(&b.coords).all(|(&x, &y)| (x - y).abs() <= tol)
}

/// u ∘ f atomwise; the indefinite integral of the composition is u applied
/// to the indefinite integral of f.
pub fn compose_function<F: Real>(
    u: &LinearOperator<F>,
    f: &SimpleFunction<F>,
) -> Result<SimpleFunction<F>> {
    if f.codomain() != &u.domain {
        return Err(Error::DescriptorMismatch);
    }
    let values = f.values().iter().map(|v| u.apply(v)).collect::<Result<Vec<_>>>()?;
    SimpleFunction::new(f.space().clone(), u.codomain.clone(), values)
}

/// u ∘ ν atomwise.
pub fn compose_measure<F: Real>(
    u: &LinearOperator<F>,
    nu: &VectorMeasure<F>,
) -> Result<VectorMeasure<F>> {
    if nu.codomain() != &u.domain {
        return Err(Error::DescriptorMismatch);
    }
    let values = nu.atom_values().iter().map(|v| u.apply(v)).collect::<Result<Vec<_>>>()?;
    VectorMeasure::new(nu.space().clone(), u.codomain.clone(), values)
}

/// Outcome of checking ‖u∘f‖_{L^p} ≤ C ‖f‖ against a domination certificate.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(serialize = "F: Real + Serialize", deserialize = "F: Real + Deserialize<'de>"))]
pub struct CompositionReport<F: Real> {
    /// ‖u ∘ f‖_{L^p(μ,Y)}
    pub composed_norm: F,
    /// ‖f‖ in the dual-ball norm
    pub dunford_norm: F,
    /// certificate constant C
    pub constant: F,
    /// C ‖f‖ — the right-hand side of the bound
    pub bound: F,
    /// C (Σ_j η_j Σ_i μ_i |⟨f_i, x*_j⟩|^p)^{1/p} — the certificate-side
    /// intermediate bound, valid by summing the domination constraints
    pub mixture_bound: F,
    /// bound − composed_norm
    pub slack: F,
    pub holds: bool,
}

/// Check the composition bound against a certificate whose test family
/// contains the scaled family {μ_i^{1/p} f_i}. Summing the domination
/// constraints over that family gives
/// Σ_i μ_i ‖u f_i‖^p ≤ C^p Σ_j η_j Σ_i μ_i |⟨f_i, x*_j⟩|^p ≤ C^p ‖f‖^p.
pub fn verify_composition_bound<F: Real>(
    u: &LinearOperator<F>,
    f: &SimpleFunction<F>,
    p: F,
    cert: &PietschCertificate<F>,
) -> Result<CompositionReport<F>> {
    if f.codomain() != &u.domain {
        return Err(Error::DescriptorMismatch);
    }
    if p < F::one() || !p.is_finite() {
        return Err(Error::BadExponent { p: p.as_f64() });
    }
    let tol = F::of(1e-9);
    // precondition: scaled family covered by the certificate's test family
    for (v, &m) in f.values().iter().zip(f.space().masses()) {
        let scaled = v.scaled(m.powf(F::one() / p));
        if !cert.test_family.iter().any(|y| vectors_close(&scaled, y, tol)) {
            return Err(Error::FamilyNotCovered);
        }
    }
    let composed = compose_function(u, f)?;
    let composed_norm = composed.bochner_norm(p)?;
    let dunford = f.dunford_norm(p)?.value;
    let bound = cert.constant * dunford;
    let mixture = cert
        .mixture_moment(u, f.values(), f.space().masses(), p)
        .powf(F::one() / p);
    Ok(CompositionReport {
        composed_norm,
        dunford_norm: dunford,
        constant: cert.constant,
        bound,
        mixture_bound: mixture,
        slack: bound - composed_norm,
        holds: composed_norm <= bound + tol,
    })
}
