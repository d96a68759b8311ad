//! Truncated counterexample constructors (the dyadic-interval orthonormal
//! blow-up and the Köthe-space indicator family) and the quantitative
//! dual-set thickness machinery: norming radius with certified bounds,
//! chain profiles, and the resulting dual-ball norm test.

use crate::dunford::SimpleFunction;
use crate::error::{Error, Result};
use crate::normed::{dual_norm, DualVector, SpaceDescriptor, Vector};
use crate::scalar::{conjugate_exponent, Real};
use crate::space::{lp_norm, DiscreteProbabilitySpace};
use serde::{Deserialize, Serialize};

/// Guard on the truncation depth of the dyadic example (codomain dimension
/// N, atom count N + 1).
pub const MAX_PETTIS_LEVELS: usize = 12;

/// Guard on the dimension for grid-certified radius bounds.
pub const MAX_RADIUS_DIM: usize = 4;

/// Truncation of the classical 2-Pettis example: atoms I_1, …, I_N with
/// masses 4^{-n} plus a remainder atom, values 2^n e_n on I_n and 0 on the
/// remainder, codomain ℓ_2^N.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(serialize = "F: Real + Serialize", deserialize = "F: Real + Deserialize<'de>"))]
pub struct PettisExampleConfig<F: Real> {
    pub levels: usize,
    pub p: F,
}

impl<F: Real> PettisExampleConfig<F> {
    pub fn new(levels: usize) -> Self {
        Self { levels, p: F::of(2.0) }
    }
}

/// Build the truncated example function.
pub fn pettis_example<F: Real>(cfg: &PettisExampleConfig<F>) -> Result<SimpleFunction<F>> {
    let n = cfg.levels;
    if n == 0 || n > MAX_PETTIS_LEVELS {
        return Err(Error::TooManyLevels { levels: n, max: MAX_PETTIS_LEVELS });
    }
    let mut masses: Vec<F> = (1..=n).map(|k| F::of(0.25f64.powi(k as i32))).collect();
    let partial: F = masses.iter().copied().sum();
    masses.push(F::one() - partial);
    let space = DiscreteProbabilitySpace::new(masses)?;
    let codomain = SpaceDescriptor::lq(n, F::of(2.0))?;
    let mut values: Vec<Vector<F>> = (0..n)
        .map(|k| Vector::basis(n, k).scaled(F::of(2f64.powi(k as i32 + 1))))
        .collect();
    values.push(Vector::zero(n));
    SimpleFunction::new(space, codomain, values)
}

/// Köthe-space example specialized to Z = L^{p'}(μ) over the same atoms:
/// φ = μ_i^{-1/p} f_i on atom i, f_i the normalized indicator of atom i.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(serialize = "F: Real + Serialize", deserialize = "F: Real + Deserialize<'de>"))]
pub struct KotheExampleConfig<F: Real> {
    pub p: F,
    pub atom_masses: Vec<F>,
}

/// Build the example function: codomain is weighted-L^{p'} over the atom
/// masses (dimension k), with value μ_i^{-1/p} · χ_{A_i}/‖χ_{A_i}‖ on atom i.
pub fn kothe_example<F: Real>(cfg: &KotheExampleConfig<F>) -> Result<SimpleFunction<F>> {
    let p = cfg.p;
    if !(p > F::one()) || !p.is_finite() {
        return Err(Error::BadExponent { p: p.as_f64() });
    }
    if cfg.atom_masses.len() < 2 {
        return Err(Error::TooFewAtoms { n: cfg.atom_masses.len(), min: 2 });
    }
    let space = DiscreteProbabilitySpace::new(cfg.atom_masses.clone())?;
    let pp = conjugate_exponent(p);
    let codomain = SpaceDescriptor::weighted_lq(pp, cfg.atom_masses.clone())?;
    let k = space.n_atoms();
    let values: Vec<Vector<F>> = (0..k)
        .map(|i| {
            let m = space.mass(i);
            // f_i = μ_i^{-1/p'} e_i has unit norm; φ_i = μ_i^{-1/p} f_i
            Vector::basis(k, i).scaled(m.powf(-F::one() / p) * m.powf(-F::one() / pp))
        })
        .collect();
    SimpleFunction::new(space, codomain, values)
}

/// The dual witnesses g_i = χ_{A_i}/‖χ_{A_i}‖_{L^p}: unit functionals with
/// ⟨f_i, g_i⟩ = 1 and disjoint supports.
pub fn kothe_dual_witnesses<F: Real>(cfg: &KotheExampleConfig<F>) -> Result<Vec<DualVector<F>>> {
    let p = cfg.p;
    if !(p > F::one()) || !p.is_finite() {
        return Err(Error::BadExponent { p: p.as_f64() });
    }
    if cfg.atom_masses.len() < 2 {
        return Err(Error::TooFewAtoms { n: cfg.atom_masses.len(), min: 2 });
    }
    let k = cfg.atom_masses.len();
    Ok((0..k)
        .map(|i| DualVector::basis(k, i).scaled(cfg.atom_masses[i].powf(-F::one() / p)))
        .collect())
}

/// A finite functional set Γ in the dual of a descriptor, optionally with an
/// increasing decomposition chain Γ_1 ⊆ Γ_2 ⊆ … exhausting Γ.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "InstanceJson<F>", into = "InstanceJson<F>")]
#[serde(bound(serialize = "F: Real + Serialize", deserialize = "F: Real + Deserialize<'de>"))]
pub struct ThicknessInstance<F: Real> {
    descriptor: SpaceDescriptor<F>,
    gamma: Vec<DualVector<F>>,
    decomposition: Option<Vec<Vec<DualVector<F>>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "F: Real + Serialize", deserialize = "F: Real + Deserialize<'de>"))]
struct InstanceJson<F: Real> {
    descriptor: SpaceDescriptor<F>,
    gamma: Vec<Vec<F>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    decomposition: Option<Vec<Vec<Vec<F>>>>,
}

impl<F: Real> TryFrom<InstanceJson<F>> for ThicknessInstance<F> {
    type Error = Error;
    fn try_from(raw: InstanceJson<F>) -> Result<Self> {
        ThicknessInstance::new(
            raw.descriptor,
            raw.gamma.into_iter().map(DualVector::new).collect(),
            raw.decomposition.map(|chain| {
                chain
                    .into_iter()
                    .map(|stage| stage.into_iter().map(DualVector::new).collect())
                    .collect()
            }),
        )
    }
}

impl<F: Real> From<ThicknessInstance<F>> for InstanceJson<F> {
    fn from(inst: ThicknessInstance<F>) -> Self {
        InstanceJson {
            descriptor: inst.descriptor,
            gamma: inst.gamma.into_iter().map(|g| g.coords).collect(),
            decomposition: inst.decomposition.map(|chain| {
                chain
                    .into_iter()
                    .map(|stage| stage.into_iter().map(|g| g.coords).collect())
                    .collect()
            }),
        }
    }
}

fn contains<F: Real>(haystack: &[DualVector<F>], needle: &DualVector<F>) -> bool {
    haystack.iter().any(|g| g.coords == needle.coords)
}

impl<F: Real> ThicknessInstance<F> {
    pub fn new(
        descriptor: SpaceDescriptor<F>,
        gamma: Vec<DualVector<F>>,
        decomposition: Option<Vec<Vec<DualVector<F>>>>,
    ) -> Result<Self> {
        let d = descriptor.dim();
        for g in &gamma {
            if g.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, got: g.dim() });
            }
        }
        if let Some(chain) = &decomposition {
            if chain.is_empty() {
                return Err(Error::MissingChain);
            }
            for stage in chain {
                for g in stage {
                    if g.dim() != d {
                        return Err(Error::DimensionMismatch { expected: d, got: g.dim() });
                    }
                }
            }
            for pair in chain.windows(2) {
                if !pair[0].iter().all(|g| contains(&pair[1], g)) {
                    return Err(Error::MissingChain);
                }
            }
            let last = chain.last().unwrap();
            let exhausts = gamma.iter().all(|g| contains(last, g))
                && last.iter().all(|g| contains(&gamma, g));
            if !exhausts {
                return Err(Error::MissingChain);
            }
        }
        Ok(Self { descriptor, gamma, decomposition })
    }

    pub fn descriptor(&self) -> &SpaceDescriptor<F> {
        &self.descriptor
    }

    pub fn gamma(&self) -> &[DualVector<F>] {
        &self.gamma
    }

    pub fn decomposition(&self) -> Option<&[Vec<DualVector<F>>]> {
        self.decomposition.as_deref()
    }
}

/// Certified bounds on the norming radius
/// r(Γ) = min_{‖x‖ = 1} max_{γ∈Γ} |⟨γ, x⟩|, the largest δ with
/// δ·(dual ball) inside the closed absolutely convex hull of Γ.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(serialize = "F: Real + Serialize", deserialize = "F: Real + Deserialize<'de>"))]
pub struct RadiusBounds<F: Real> {
    pub lower: F,
    pub upper: F,
    /// Direction attaining the upper bound.
    pub witness: Vector<F>,
}

/// Norming radius of Γ. Exact in dimension ≤ 2 via an angular sweep with
/// analytic breakpoints; in dimensions 3 and 4 a spherical grid of
/// resolution `grid_eps` gives an upper bound and a Lipschitz-corrected
/// lower bound.
pub fn thickness_radius<F: Real>(
    inst: &ThicknessInstance<F>,
    grid_eps: F,
) -> Result<RadiusBounds<F>> {
    let d = inst.descriptor.dim();
    if d > MAX_RADIUS_DIM {
        return Err(Error::DimensionTooLarge { dim: d, max: MAX_RADIUS_DIM });
    }
    if d <= 2 {
        return exact_radius_sweep(inst);
    }
    if !(grid_eps > F::zero()) {
        return Err(Error::BadGrid);
    }
    grid_radius(inst, grid_eps)
}

fn envelope<F: Real>(inst: &ThicknessInstance<F>, x: &[F]) -> F {
    inst.gamma
        .iter()
        .map(|g| inst.descriptor.pairing(x, &g.coords).abs())
        .fold(F::zero(), F::max)
}

/// Effective plain-pairing coordinates of a functional (pairing weights
/// folded in), so that ⟨γ, x⟩ = Σ_j eff_j x_j.
fn effective<F: Real>(desc: &SpaceDescriptor<F>, g: &DualVector<F>) -> Vec<F> {
    (0..desc.dim()).map(|j| desc.pairing_weight(j) * g.coords[j]).collect()
}

/// Exact d ≤ 2 minimization of the envelope max_γ |⟨γ, x⟩| over the unit
/// sphere. On a convex curve the positive part of x ↦ ⟨γ, x⟩ is unimodal,
/// so every local minimum of the envelope sits at a pairwise crossing or at
/// a zero of some ⟨γ, ·⟩; both candidate sets are closed-form.
fn exact_radius_sweep<F: Real>(inst: &ThicknessInstance<F>) -> Result<RadiusBounds<F>> {
    let desc = &inst.descriptor;
    let d = desc.dim();
    if inst.gamma.is_empty() {
        let x = normalize_primal(desc, vec![F::one(); d]).expect("unit candidate");
        return Ok(RadiusBounds { lower: F::zero(), upper: F::zero(), witness: x });
    }
    if d == 1 {
        let x = normalize_primal(desc, vec![F::one()]).expect("unit candidate");
        let value = envelope(inst, &x.coords);
        return Ok(RadiusBounds { lower: value, upper: value, witness: x });
    }

    let eff: Vec<Vec<F>> = inst.gamma.iter().map(|g| effective(desc, g)).collect();
    let mut candidates: Vec<Vec<F>> = Vec::new();
    let push_perp = |v: &[F], out: &mut Vec<Vec<F>>| {
        // direction orthogonal (plain sense) to v in the plane
        let u = vec![-v[1], v[0]];
        if u.iter().any(|&c| c.abs() > F::of(1e-300)) {
            out.push(u);
        }
    };
    for e in &eff {
        push_perp(e, &mut candidates);
    }
    for (i, a) in eff.iter().enumerate() {
        for b in &eff[i + 1..] {
            let diff: Vec<F> = a.iter().zip(b).map(|(&x, &y)| x - y).collect();
            let sum: Vec<F> = a.iter().zip(b).map(|(&x, &y)| x + y).collect();
            push_perp(&diff, &mut candidates);
            push_perp(&sum, &mut candidates);
        }
    }

    let mut best: Option<(F, Vector<F>)> = None;
    for cand in candidates {
        let Some(x) = normalize_primal(desc, cand) else { continue };
        let value = envelope(inst, &x.coords);
        match &best {
            Some((bv, _)) if *bv <= value => {}
            _ => best = Some((value, x)),
        }
    }
    let (value, witness) = best.expect("nonempty candidate set for nonempty gamma");
    Ok(RadiusBounds { lower: value, upper: value, witness })
}

/// Grid bound for d ∈ {3, 4}: upper = min over grid of the envelope; lower
/// subtracts the envelope's Lipschitz constant times the covering radius of
/// the grid on the unit sphere of the norm.
fn grid_radius<F: Real>(inst: &ThicknessInstance<F>, grid_eps: F) -> Result<RadiusBounds<F>> {
    let desc = &inst.descriptor;
    let d = desc.dim();
    if inst.gamma.is_empty() {
        let x = normalize_primal(desc, vec![F::one(); d]).expect("unit candidate");
        return Ok(RadiusBounds { lower: F::zero(), upper: F::zero(), witness: x });
    }
    let step = grid_eps.as_f64().min(0.5);
    let per_axis = (std::f64::consts::PI / step).ceil() as usize + 1;

    let mut best: Option<(F, Vector<F>)> = None;
    let axes = d - 1;
    let mut idx = vec![0usize; axes];
    'grid: loop {
        let mut coords: Vec<F> = Vec::with_capacity(d);
        let mut sin_prod = 1.0f64;
        for (a, &i) in idx.iter().enumerate() {
            let span = if a + 1 == axes { std::f64::consts::TAU } else { std::f64::consts::PI };
            let angle = span * i as f64 / (per_axis as f64);
            coords.push(F::of(sin_prod * angle.cos()));
            sin_prod *= angle.sin();
        }
        coords.push(F::of(sin_prod));
        if let Some(x) = normalize_primal(desc, coords) {
            let value = envelope(inst, &x.coords);
            match &best {
                Some((bv, _)) if *bv <= value => {}
                _ => best = Some((value, x)),
            }
        }
        let mut k = 0;
        loop {
            idx[k] += 1;
            if idx[k] < per_axis {
                break;
            }
            idx[k] = 0;
            k += 1;
            if k == axes {
                break 'grid;
            }
        }
    }
    let (upper, witness) = best.expect("grid nonempty");

    // covering radius of the angular mesh on the Euclidean sphere, then on
    // the norm sphere: ‖g(v) − g(u)‖_X ≤ 2 c_X ‖v − u‖_2 / m_X for the
    // radial map g onto the X-sphere, with c_X, m_X the equivalence
    // constants between ‖·‖_X and ‖·‖_2
    let eps_euclid = F::of((axes as f64) * std::f64::consts::TAU / (2.0 * per_axis as f64));
    let (c_upper, m_lower) = euclid_equivalence(desc);
    let covering = F::of(2.0) * c_upper * eps_euclid / m_lower;
    let lipschitz = inst
        .gamma
        .iter()
        .map(|g| dual_norm(desc, g).unwrap_or(F::zero()))
        .fold(F::zero(), F::max);
    let lower = (upper - lipschitz * covering).max(F::zero());
    Ok(RadiusBounds { lower, upper, witness })
}

/// Constants (c, m) with m‖v‖_2 ≤ ‖v‖_X ≤ c‖v‖_2.
fn euclid_equivalence<F: Real>(desc: &SpaceDescriptor<F>) -> (F, F) {
    let d = F::of(desc.dim() as f64);
    let q = desc.exponent();
    let (wmax, wmin) = match desc.weights() {
        Some(w) => (
            w.iter().copied().fold(F::zero(), F::max),
            w.iter().copied().fold(F::infinity(), F::min),
        ),
        None => (F::one(), F::one()),
    };
    if q.is_infinite() {
        // max|v_j| ∈ [‖v‖_2/√d, ‖v‖_2]
        return (F::one(), F::one() / d.sqrt());
    }
    let half = F::of(0.5);
    let inv_q = F::one() / q;
    // unweighted ℓ_q: ‖v‖_q ≤ d^{max(0,1/q−1/2)}‖v‖_2, ≥ d^{min(0,1/q−1/2)}‖v‖_2
    let c_shape = d.powf((inv_q - half).max(F::zero()));
    let m_shape = d.powf((inv_q - half).min(F::zero()));
    (wmax.powf(inv_q) * c_shape, wmin.powf(inv_q) * m_shape)
}

fn normalize_primal<F: Real>(desc: &SpaceDescriptor<F>, coords: Vec<F>) -> Option<Vector<F>> {
    let x = Vector::new(coords);
    let n = crate::normed::norm(desc, &x).ok()?;
    if !(n > F::of(1e-300)) || !n.is_finite() {
        return None;
    }
    Some(x.scaled(F::one() / n))
}

/// Radius profile r(Γ_k) along the decomposition chain. The finite
/// surrogate of thickness is a positive value somewhere in the profile.
pub fn thickness_chain_profile<F: Real>(
    inst: &ThicknessInstance<F>,
    grid_eps: F,
) -> Result<Vec<RadiusBounds<F>>> {
    let Some(chain) = inst.decomposition() else {
        return Err(Error::MissingChain);
    };
    let mut out = Vec::with_capacity(chain.len());
    for stage in chain {
        let sub = ThicknessInstance::new(inst.descriptor.clone(), stage.clone(), None)?;
        out.push(thickness_radius(&sub, grid_eps)?);
    }
    Ok(out)
}

/// Outcome of the dual-ball norm test through a norming set.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(serialize = "F: Real + Serialize", deserialize = "F: Real + Deserialize<'de>"))]
pub struct ThicknessBoundReport<F: Real> {
    /// Certified lower bound δ on the norming radius.
    pub delta: F,
    /// max_γ ‖⟨f, γ⟩‖_{L^p}
    pub gamma_moment: F,
    /// The implied bound gamma_moment / delta.
    pub bound: F,
    /// Directly computed dual-ball norm of f.
    pub dunford_norm: F,
    /// Certification of the dual-ball norm value.
    pub certification: crate::normed::Certification,
    pub holds: bool,
}

/// Quantitative norm test: δ·(dual ball) ⊆ aco(Γ) forces
/// ‖f‖ ≤ max_γ ‖⟨f, γ⟩‖_{L^p} / δ, since every δx* is an absolutely convex
/// combination of Γ and the L^p norm of the pairing is convex in x*.
pub fn thickness_norm_bound<F: Real>(
    f: &SimpleFunction<F>,
    inst: &ThicknessInstance<F>,
    p: F,
    grid_eps: F,
) -> Result<ThicknessBoundReport<F>> {
    if f.codomain() != inst.descriptor() {
        return Err(Error::DescriptorMismatch);
    }
    let radius = thickness_radius(inst, grid_eps)?;
    if !(radius.lower > F::zero()) {
        return Err(Error::NotNorming);
    }
    let mut gamma_moment = F::zero();
    for g in inst.gamma() {
        gamma_moment = gamma_moment.max(lp_norm(&f.pair(g)?, p)?);
    }
    let bound = gamma_moment / radius.lower;
    let dunford = f.dunford_norm(p)?;
    Ok(ThicknessBoundReport {
        delta: radius.lower,
        gamma_moment,
        bound,
        dunford_norm: dunford.value,
        certification: dunford.certified,
        holds: dunford.value <= bound + F::of(1e-9),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normed::{maximize_p_moment, Certification};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pettis_example_shapes() {
        let f = pettis_example(&PettisExampleConfig::<f64>::new(1)).unwrap();
        assert_eq!(f.space().masses(), &[0.25, 0.75]);
        assert_eq!(f.values()[0].coords, vec![2.0]);
        assert_eq!(f.values()[1].coords, vec![0.0]);

        let f = pettis_example(&PettisExampleConfig::<f64>::new(3)).unwrap();
        assert_eq!(f.space().n_atoms(), 4);
        assert_abs_diff_eq!(f.space().mass(3), 43.0 / 64.0, epsilon = 1e-15);
        assert_eq!(f.values()[1].coords, vec![0.0, 4.0, 0.0]);
        assert!(matches!(
            pettis_example(&PettisExampleConfig::<f64>::new(13)),
            Err(Error::TooManyLevels { .. })
        ));
    }

    #[test]
    fn pettis_example_norms() {
        let f = pettis_example(&PettisExampleConfig::<f64>::new(3)).unwrap();
        // the operator x* ↦ ⟨f, x*⟩ is an isometry on its span: norm 1
        let dn = f.dunford_norm(2.0).unwrap();
        assert_eq!(dn.certified, Certification::Exact);
        assert_abs_diff_eq!(dn.value, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.bochner_norm(2.0).unwrap(), 3f64.sqrt(), epsilon = 1e-12);
        // pairing with e_2 lives on atom 2 with value 4
        let paired = f.pair(&DualVector::basis(3, 1)).unwrap();
        assert_eq!(paired.values(), &[0.0, 4.0, 0.0, 0.0]);
        // indefinite integral of I_2
        let nu = f.indefinite_integral();
        assert_abs_diff_eq!(nu.evaluate(&[1]).unwrap().coords[1], 0.25, epsilon = 1e-15);
        // sv profile: all ones
        for sigma in f.sv_profile(2.0).unwrap() {
            assert_abs_diff_eq!(sigma, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn pettis_modulus_hits_one_at_dyadic_scales() {
        let f = pettis_example(&PettisExampleConfig::<f64>::new(4)).unwrap();
        let deltas: Vec<f64> = (1..=4).map(|n| 0.25f64.powi(n)).collect();
        let report = f.zfp_ui_modulus(2.0, &deltas).unwrap();
        for entry in &report.entries {
            assert_abs_diff_eq!(entry.value, 1.0, epsilon = 1e-9);
            assert_eq!(entry.certified, Certification::Exact);
        }
    }

    #[test]
    fn kothe_example_images_and_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for p in [1.5f64, 2.0, 3.0] {
            let k = 4;
            let mut masses: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
            let total: f64 = masses.iter().sum();
            for m in &mut masses {
                *m /= total;
            }
            let partial: f64 = masses[..k - 1].iter().sum();
            masses[k - 1] = 1.0 - partial;
            let cfg = KotheExampleConfig { p, atom_masses: masses.clone() };
            let phi = kothe_example(&cfg).unwrap();
            let gs = kothe_dual_witnesses(&cfg).unwrap();
            // images μ_i^{-1/p} χ_{A_i}: unit L^p norms and disjoint supports
            for (i, g) in gs.iter().enumerate() {
                assert_abs_diff_eq!(
                    dual_norm(phi.codomain(), g).unwrap(),
                    1.0,
                    epsilon = 1e-12
                );
                let image = phi.pair(g).unwrap();
                assert_abs_diff_eq!(lp_norm(&image, p).unwrap(), 1.0, epsilon = 1e-12);
                for (j, &v) in image.values().iter().enumerate() {
                    if i != j {
                        assert_eq!(v, 0.0);
                    } else {
                        assert_abs_diff_eq!(v, masses[i].powf(-1.0 / p), epsilon = 1e-12);
                    }
                }
            }
            // dual-ball norm exactly 1
            let dn = phi.dunford_norm(p).unwrap();
            assert_abs_diff_eq!(dn.value, 1.0, epsilon = 1e-6);
            // Bochner norm is k^{1/p}
            assert_abs_diff_eq!(
                phi.bochner_norm(p).unwrap(),
                (k as f64).powf(1.0 / p),
                epsilon = 1e-9
            );
        }
        // uniform 2-atom with p = 2: Bochner norm √2
        let cfg = KotheExampleConfig { p: 2.0, atom_masses: vec![0.5, 0.5] };
        let phi = kothe_example(&cfg).unwrap();
        assert_abs_diff_eq!(phi.bochner_norm(2.0).unwrap(), 2f64.sqrt(), epsilon = 1e-12);
        assert!(matches!(
            kothe_example(&KotheExampleConfig { p: 1.0, atom_masses: vec![0.5, 0.5] }),
            Err(Error::BadExponent { .. })
        ));
    }

    fn coordinate_cross(d: usize) -> Vec<DualVector<f64>> {
        let mut out = Vec::new();
        for j in 0..d {
            out.push(DualVector::basis(d, j));
            out.push(DualVector::basis(d, j).scaled(-1.0));
        }
        out
    }

    #[test]
    fn radius_of_coordinate_cross_in_euclidean_plane() {
        let desc = SpaceDescriptor::lq(2, 2.0).unwrap();
        let inst = ThicknessInstance::new(desc, coordinate_cross(2), None).unwrap();
        let r = thickness_radius(&inst, 0.01).unwrap();
        assert_abs_diff_eq!(r.lower, 0.5f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(r.upper, 0.5f64.sqrt(), epsilon = 1e-12);
        // witness is a diagonal direction
        let w = r.witness.coords;
        assert_abs_diff_eq!(w[0].abs(), w[1].abs(), epsilon = 1e-9);
    }

    #[test]
    fn radius_homogeneity_and_degenerate_cases() {
        let desc = SpaceDescriptor::lq(2, 2.0).unwrap();
        let gamma = coordinate_cross(2);
        let inst = ThicknessInstance::new(desc.clone(), gamma.clone(), None).unwrap();
        let r = thickness_radius(&inst, 0.01).unwrap();
        let scaled: Vec<DualVector<f64>> = gamma.iter().map(|g| g.scaled(0.3)).collect();
        let inst_s = ThicknessInstance::new(desc.clone(), scaled, None).unwrap();
        let rs = thickness_radius(&inst_s, 0.01).unwrap();
        assert_abs_diff_eq!(rs.upper, 0.3 * r.upper, epsilon = 1e-12);
        // a single functional cannot be norming in the plane
        let single = ThicknessInstance::new(
            desc,
            vec![DualVector::new(vec![1.0, 0.0])],
            None,
        )
        .unwrap();
        let r0 = thickness_radius(&single, 0.01).unwrap();
        assert_abs_diff_eq!(r0.upper, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn exact_sweep_matches_dense_scan_on_random_planar_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for case in 0..80 {
            let q = [1.0, 1.7, 2.0, f64::INFINITY][rng.gen_range(0..4usize)];
            let desc = if case % 2 == 0 {
                SpaceDescriptor::lq(2, q).unwrap()
            } else {
                let w = vec![rng.gen_range(0.2..2.0), rng.gen_range(0.2..2.0)];
                SpaceDescriptor::weighted_lq(q, w).unwrap()
            };
            let count = rng.gen_range(1..6usize);
            let mut gamma: Vec<DualVector<f64>> = (0..count)
                .map(|_| {
                    DualVector::new(vec![rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)])
                })
                .collect();
            // symmetrize so the hull is balanced either way
            let negs: Vec<DualVector<f64>> = gamma.iter().map(|g| g.scaled(-1.0)).collect();
            gamma.extend(negs);
            let inst = ThicknessInstance::new(desc.clone(), gamma, None).unwrap();
            let r = thickness_radius(&inst, 0.01).unwrap();
            // dense scan over the unit sphere (scan min ≥ true min = r)
            let mut scan = f64::INFINITY;
            for k in 0..20_000 {
                let theta = std::f64::consts::TAU * k as f64 / 20_000.0;
                let x = normalize_primal(&desc, vec![theta.cos(), theta.sin()]).unwrap();
                scan = scan.min(envelope(&inst, &x.coords));
            }
            assert!(
                r.upper <= scan + 1e-9,
                "sweep value {} above dense scan {}",
                r.upper,
                scan
            );
            assert!(r.upper >= scan - 1e-3 * (1.0 + scan), "sweep missed the min");
        }
    }

    #[test]
    fn grid_radius_bounds_bracket_the_euclidean_cross() {
        let desc = SpaceDescriptor::lq(3, 2.0).unwrap();
        let inst = ThicknessInstance::new(desc, coordinate_cross(3), None).unwrap();
        let r = thickness_radius(&inst, 0.02).unwrap();
        let truth = (1.0f64 / 3.0).sqrt();
        assert!(r.upper >= truth - 1e-9, "upper {} below truth {truth}", r.upper);
        assert!(r.lower <= truth + 1e-9, "lower {} above truth {truth}", r.lower);
        assert!(r.upper - truth < 0.05, "upper bound too loose: {}", r.upper);
        // guard
        let desc5 = SpaceDescriptor::lq(5, 2.0).unwrap();
        let inst5 = ThicknessInstance::new(desc5, coordinate_cross(5), None).unwrap();
        assert!(matches!(
            thickness_radius(&inst5, 0.05),
            Err(Error::DimensionTooLarge { .. })
        ));
    }

    #[test]
    fn radius_monotone_under_inclusion() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let desc = SpaceDescriptor::lq(2, 2.0).unwrap();
        for _ in 0..20 {
            let gamma: Vec<DualVector<f64>> = (0..6)
                .map(|_| {
                    DualVector::new(vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)])
                })
                .collect();
            let small = ThicknessInstance::new(desc.clone(), gamma[..3].to_vec(), None).unwrap();
            let large = ThicknessInstance::new(desc.clone(), gamma, None).unwrap();
            let rs = thickness_radius(&small, 0.01).unwrap();
            let rl = thickness_radius(&large, 0.01).unwrap();
            assert!(rl.upper >= rs.upper - 1e-12);
        }
    }

    #[test]
    fn chain_profile_is_nondecreasing_and_validated() {
        let desc = SpaceDescriptor::lq(2, 2.0).unwrap();
        let e1 = DualVector::basis(2, 0);
        let gamma = coordinate_cross(2);
        // stage 1: ±e_1 only (not norming); stage 2: full cross
        let stage1 = vec![e1.clone(), e1.scaled(-1.0)];
        let inst = ThicknessInstance::new(
            desc.clone(),
            gamma.clone(),
            Some(vec![stage1, gamma.clone()]),
        )
        .unwrap();
        let profile = thickness_chain_profile(&inst, 0.01).unwrap();
        assert_abs_diff_eq!(profile[0].upper, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(profile[1].upper, 0.5f64.sqrt(), epsilon = 1e-12);
        // missing chain is an error
        let bare = ThicknessInstance::new(desc.clone(), gamma.clone(), None).unwrap();
        assert!(matches!(
            thickness_chain_profile(&bare, 0.01),
            Err(Error::MissingChain)
        ));
        // non-nested chain rejected
        let bad = ThicknessInstance::new(
            desc,
            gamma.clone(),
            Some(vec![vec![DualVector::new(vec![0.5, 0.5])], gamma]),
        );
        assert!(matches!(bad, Err(Error::MissingChain)));
    }

    #[test]
    fn norm_bound_on_random_functions() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let desc = SpaceDescriptor::lq(2, 2.0).unwrap();
        let inst = ThicknessInstance::new(desc.clone(), coordinate_cross(2), None).unwrap();
        for _ in 0..100 {
            let n = rng.gen_range(1..5usize);
            let space = DiscreteProbabilitySpace::uniform(n).unwrap();
            let values: Vec<Vector<f64>> = (0..n)
                .map(|_| Vector::new(vec![rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)]))
                .collect();
            let f = SimpleFunction::new(space, desc.clone(), values).unwrap();
            let p = [1.0, 1.5, 2.0, 3.0][rng.gen_range(0..4usize)];
            let report = thickness_norm_bound(&f, &inst, p, 0.01).unwrap();
            assert!(report.holds, "bound {} vs norm {}", report.bound, report.dunford_norm);
            assert_abs_diff_eq!(report.delta, 0.5f64.sqrt(), epsilon = 1e-12);
        }
        // zero function: bound 0 ≤ anything, still holds
        let space = DiscreteProbabilitySpace::uniform(2).unwrap();
        let zero = SimpleFunction::new(
            space,
            desc.clone(),
            vec![Vector::zero(2), Vector::zero(2)],
        )
        .unwrap();
        let report = thickness_norm_bound(&zero, &inst, 2.0, 0.01).unwrap();
        assert!(report.holds);
        assert_abs_diff_eq!(report.bound, 0.0, epsilon = 1e-15);
        // non-norming set rejected
        let single = ThicknessInstance::new(
            desc.clone(),
            vec![DualVector::basis(2, 0)],
            None,
        )
        .unwrap();
        assert!(matches!(
            thickness_norm_bound(&zero, &single, 2.0, 0.01),
            Err(Error::NotNorming)
        ));
    }

    #[test]
    fn norm_bound_scale_invariance() {
        // scaling Γ by c scales both δ and the moments by c: bound unchanged
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let desc = SpaceDescriptor::lq(2, 2.0).unwrap();
        let gamma = coordinate_cross(2);
        let scaled: Vec<DualVector<f64>> = gamma.iter().map(|g| g.scaled(2.5)).collect();
        let inst = ThicknessInstance::new(desc.clone(), gamma, None).unwrap();
        let inst_s = ThicknessInstance::new(desc.clone(), scaled, None).unwrap();
        let space = DiscreteProbabilitySpace::uniform(3).unwrap();
        let values: Vec<Vector<f64>> = (0..3)
            .map(|_| Vector::new(vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]))
            .collect();
        let f = SimpleFunction::new(space, desc, values).unwrap();
        let a = thickness_norm_bound(&f, &inst, 2.0, 0.01).unwrap();
        let b = thickness_norm_bound(&f, &inst_s, 2.0, 0.01).unwrap();
        assert_abs_diff_eq!(a.bound, b.bound, epsilon = 1e-9 * (1.0 + a.bound));
    }

    #[test]
    fn kothe_moment_maximization_is_the_dual_norm() {
        // on the weighted codomain the objective equals the constraint norm,
        // so even the heuristic regime lands on 1 exactly
        let cfg = KotheExampleConfig { p: 3.0, atom_masses: vec![0.4, 0.3, 0.2, 0.1] };
        let phi = kothe_example(&cfg).unwrap();
        let r = maximize_p_moment(
            phi.codomain(),
            phi.values(),
            phi.space().masses(),
            3.0,
        )
        .unwrap();
        assert_eq!(r.certified, Certification::Heuristic);
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn instance_json_round_trip() {
        let desc = SpaceDescriptor::lq(2, 2.0).unwrap();
        let inst = ThicknessInstance::new(
            desc,
            coordinate_cross(2),
            Some(vec![coordinate_cross(2)[..2].to_vec(), coordinate_cross(2)]),
        )
        .unwrap();
        let json = serde_json::to_string(&inst).unwrap();
        let back: ThicknessInstance<f64> = serde_json::from_str(&json).unwrap();
        assert_eq!(back.gamma().len(), 4);
        assert!(back.decomposition().is_some());
    }
}
