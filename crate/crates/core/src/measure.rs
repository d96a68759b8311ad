//! Finitely additive vector measures on the atom algebra: total p-variation
//! by three routes (closed-form finest partition, brute force over all
//! partitions, Hölder-dual coefficients) and total p-semivariation via
//! dual-ball maximization.
//!
//! The finest-partition closed form is the production path; the other two
//! routes are retained as oracles. On atomic spaces refinement monotonicity
//! of the partition sums makes the finest partition optimal.

use crate::error::{Error, Result};
use crate::normed::{
    dual_norm, maximize_with_config, DualVector, MomentMaxResult, MomentSearchConfig,
    SpaceDescriptor, Vector,
};
use crate::scalar::Real;
use crate::space::{enumerate_partitions, DiscreteProbabilitySpace, Partition};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Guard for partition enumeration in the brute-force and Hölder-dual routes.
pub const MAX_BRUTE_ATOMS: usize = 8;

/// Finitely additive measure on the atom algebra, determined by its values
/// on atoms: ν(A) = Σ_{i∈A} ν({ω_i}). Vanishing on null sets is automatic
/// since no atom is null.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasureJson<F>", into = "MeasureJson<F>")]
#[serde(bound(serialize = "F: Real + Serialize", deserialize = "F: Real + Deserialize<'de>"))]
pub struct VectorMeasure<F: Real> {
    space: DiscreteProbabilitySpace<F>,
    codomain: SpaceDescriptor<F>,
    atom_values: Vec<Vector<F>>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "F: Real + Serialize", deserialize = "F: Real + Deserialize<'de>"))]
struct MeasureJson<F: Real> {
    space: DiscreteProbabilitySpace<F>,
    codomain: SpaceDescriptor<F>,
    atom_values: Vec<Vec<F>>,
}

impl<F: Real> TryFrom<MeasureJson<F>> for VectorMeasure<F> {
    type Error = Error;
    fn try_from(raw: MeasureJson<F>) -> Result<Self> {
        VectorMeasure::new(
            raw.space,
            raw.codomain,
            raw.atom_values.into_iter().map(Vector::new).collect(),
        )
    }
}

impl<F: Real> From<VectorMeasure<F>> for MeasureJson<F> {
    fn from(m: VectorMeasure<F>) -> Self {
        MeasureJson {
            space: m.space,
            codomain: m.codomain,
            atom_values: m.atom_values.into_iter().map(|v| v.coords).collect(),
        }
    }
}

/// Route selector for the total p-variation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariationMethod {
    /// Closed form at the all-singletons partition (production path).
    Finest,
    /// Maximum of the partition sums over every partition (oracle, n ≤ 8).
    Brute,
    /// Maximum over partitions of the Hölder-dual coefficient form
    /// (oracle, n ≤ 8).
    HolderDual,
}

impl<F: Real> VectorMeasure<F> {
    pub fn new(
        space: DiscreteProbabilitySpace<F>,
        codomain: SpaceDescriptor<F>,
        atom_values: Vec<Vector<F>>,
    ) -> Result<Self> {
        if atom_values.len() != space.n_atoms() {
            return Err(Error::DimensionMismatch {
                expected: space.n_atoms(),
                got: atom_values.len(),
            });
        }
        for v in &atom_values {
            if v.dim() != codomain.dim() {
                return Err(Error::DimensionMismatch {
                    expected: codomain.dim(),
                    got: v.dim(),
                });
            }
        }
        Ok(Self { space, codomain, atom_values })
    }

    pub fn space(&self) -> &DiscreteProbabilitySpace<F> {
        &self.space
    }

    pub fn codomain(&self) -> &SpaceDescriptor<F> {
        &self.codomain
    }

    pub fn atom_values(&self) -> &[Vector<F>] {
        &self.atom_values
    }

    /// ν(A) = Σ_{i∈A} ν({ω_i}); `atoms` is treated as a set.
    pub fn evaluate(&self, atoms: &[usize]) -> Result<Vector<F>> {
        let set: BTreeSet<usize> = atoms.iter().copied().collect();
        let mut out = Vector::zero(self.codomain.dim());
        for i in set {
            if i >= self.atom_values.len() {
                return Err(Error::IndexOutOfRange { index: i, len: self.atom_values.len() });
            }
            out = out.plus(&self.atom_values[i]);
        }
        Ok(out)
    }

    /// (Σ_{A∈𝒫} ‖ν(A)‖^p / μ(A)^{p−1})^{1/p} with the 0/0 convention.
    pub fn partition_p_sum(&self, partition: &Partition, p: F) -> Result<F> {
        if partition.n_atoms() != self.space.n_atoms() {
            return Err(Error::SpaceMismatch);
        }
        if p < F::one() || !p.is_finite() {
            return Err(Error::BadExponent { p: p.as_f64() });
        }
        let mut sum = F::zero();
        for block in partition.blocks() {
            let value = self.evaluate(block)?;
            let b = crate::normed::norm(&self.codomain, &value)?;
            if b == F::zero() {
                continue; // covers the 0/0^{p-1} convention
            }
            let m = self.space.subset_mass(block)?;
            sum += b.powf(p) / m.powf(p - F::one());
        }
        Ok(sum.powf(F::one() / p))
    }

    /// Total p-variation |ν|_p(Ω) by the selected route.
    pub fn p_variation(&self, p: F, method: VariationMethod) -> Result<F> {
        match method {
            VariationMethod::Finest => {
                self.partition_p_sum(&self.space.finest_partition(), p)
            }
            VariationMethod::Brute => {
                self.guard_brute()?;
                let mut best = F::zero();
                for partition in enumerate_partitions(&self.space)? {
                    best = best.max(self.partition_p_sum(&partition, p)?);
                }
                Ok(best)
            }
            VariationMethod::HolderDual => {
                self.guard_brute()?;
                if p < F::one() || !p.is_finite() {
                    return Err(Error::BadExponent { p: p.as_f64() });
                }
                let mut best = F::zero();
                for partition in enumerate_partitions(&self.space)? {
                    best = best.max(self.holder_dual_value(&partition, p)?);
                }
                Ok(best)
            }
        }
    }

    fn guard_brute(&self) -> Result<()> {
        let n = self.space.n_atoms();
        if n > MAX_BRUTE_ATOMS {
            return Err(Error::TooManyAtoms { n, max: MAX_BRUTE_ATOMS });
        }
        Ok(())
    }

    /// Σ_A |α_A| ‖ν(A)‖ with α the analytic Hölder maximizer among
    /// coefficient functions Σ α_A χ_A in the unit ball of L^{p'}(μ).
    fn holder_dual_value(&self, partition: &Partition, p: F) -> Result<F> {
        let blocks = partition.blocks();
        let mut norms = Vec::with_capacity(blocks.len());
        let mut masses = Vec::with_capacity(blocks.len());
        for block in blocks {
            let v = self.evaluate(block)?;
            norms.push(crate::normed::norm(&self.codomain, &v)?);
            masses.push(self.space.subset_mass(block)?);
        }
        if p == F::one() {
            // p' = ∞: coefficients in [−1, 1], maximizer is the sign pattern
            return Ok(norms.iter().copied().sum());
        }
        let pp = p / (p - F::one());
        let alphas: Vec<F> = norms
            .iter()
            .zip(&masses)
            .map(|(&b, &m)| if b == F::zero() { F::zero() } else { (b / m).powf(p - F::one()) })
            .collect();
        let s: F = alphas
            .iter()
            .zip(&masses)
            .map(|(&a, &m)| m * a.powf(pp))
            .sum();
        if s == F::zero() {
            return Ok(F::zero());
        }
        let scale = s.powf(F::one() / pp);
        Ok(alphas
            .iter()
            .zip(&norms)
            .map(|(&a, &b)| a * b)
            .sum::<F>()
            / scale)
    }

    /// Scalar total p-variation of ⟨ν, z*⟩, via the finest-partition
    /// reduction (valid for scalar measures by the same merge inequality).
    pub fn scalar_p_variation(&self, zs: &DualVector<F>, p: F) -> Result<F> {
        if p < F::one() || !p.is_finite() {
            return Err(Error::BadExponent { p: p.as_f64() });
        }
        let mut sum = F::zero();
        for (v, &m) in self.atom_values.iter().zip(self.space.masses()) {
            let a = crate::normed::pairing(&self.codomain, v, zs)?.abs();
            if a == F::zero() {
                continue;
            }
            sum += a.powf(p) / m.powf(p - F::one());
        }
        Ok(sum.powf(F::one() / p))
    }

    /// Total p-semivariation ‖ν‖_p(Ω) = sup over the dual unit ball of the
    /// scalar p-variation; equals the weighted p-th moment maximization with
    /// vectors ν_i/μ_i and weights μ_i.
    pub fn p_semivariation(&self, p: F) -> Result<MomentMaxResult<F>> {
        self.p_semivariation_with(p, &MomentSearchConfig::default())
    }

    pub fn p_semivariation_with(
        &self,
        p: F,
        cfg: &MomentSearchConfig,
    ) -> Result<MomentMaxResult<F>> {
        let vectors: Vec<Vector<F>> = self
            .atom_values
            .iter()
            .zip(self.space.masses())
            .map(|(v, &m)| v.scaled(F::one() / m))
            .collect();
        maximize_with_config(&self.codomain, &vectors, self.space.masses(), p, cfg)
    }

    /// Largest scalar p-variation over an explicit set of functionals in the
    /// dual unit ball: a lower bound on ‖ν‖_p(Ω) that converges to it as the
    /// set densifies.
    pub fn semivariation_over_subset(&self, p: F, delta: &[DualVector<F>]) -> Result<F> {
        let mut best = F::zero();
        for zs in delta {
            let n = dual_norm(&self.codomain, zs)?;
            if n > F::one() + F::of(1e-9) {
                return Err(Error::DualNormViolation { norm: n.as_f64() });
            }
            best = best.max(self.scalar_p_variation(zs, p)?);
        }
        Ok(best)
    }

    pub fn scaled(&self, c: F) -> Self {
        Self {
            space: self.space.clone(),
            codomain: self.codomain.clone(),
            atom_values: self.atom_values.iter().map(|v| v.scaled(c)).collect(),
        }
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        if self.codomain != other.codomain {
            return Err(Error::DescriptorMismatch);
        }
        Ok(Self {
            space: self.space.clone(),
            codomain: self.codomain.clone(),
            atom_values: self
                .atom_values
                .iter()
                .zip(&other.atom_values)
                .map(|(a, b)| a.plus(b))
                .collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normed::Certification;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn uniform2_measure() -> VectorMeasure<f64> {
        // ν_f for the uniform 2-atom space with f = (e_1, e_2): ν_i = e_i / 2
        let space = DiscreteProbabilitySpace::uniform(2).unwrap();
        let codomain = SpaceDescriptor::lq(2, 2.0).unwrap();
        VectorMeasure::new(
            space,
            codomain,
            vec![
                Vector::new(vec![0.5, 0.0]),
                Vector::new(vec![0.0, 0.5]),
            ],
        )
        .unwrap()
    }

    fn random_measure(rng: &mut ChaCha8Rng, n: usize, d: usize, q: f64) -> VectorMeasure<f64> {
        let mut masses: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
        let total: f64 = masses.iter().sum();
        for m in &mut masses {
            *m /= total;
        }
        let partial: f64 = masses[..n - 1].iter().sum();
        masses[n - 1] = 1.0 - partial;
        let space = DiscreteProbabilitySpace::new(masses).unwrap();
        let codomain = SpaceDescriptor::lq(d, q).unwrap();
        let atom_values = (0..n)
            .map(|_| Vector::new((0..d).map(|_| rng.gen_range(-2.0..2.0)).collect()))
            .collect();
        VectorMeasure::new(space, codomain, atom_values).unwrap()
    }

    #[test]
    fn evaluate_is_additive() {
        let nu = uniform2_measure();
        let empty = nu.evaluate(&[]).unwrap();
        assert_eq!(empty.coords, vec![0.0, 0.0]);
        let all = nu.evaluate(&[0, 1]).unwrap();
        assert_eq!(all.coords, vec![0.5, 0.5]);
        assert!(matches!(
            nu.evaluate(&[5]),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn partition_sum_examples() {
        let nu = uniform2_measure();
        let coarsest = nu.space().coarsest_partition();
        // ‖ν(Ω)‖ = ‖(1/2, 1/2)‖_2
        assert_abs_diff_eq!(
            nu.partition_p_sum(&coarsest, 2.0).unwrap(),
            0.5f64.sqrt(),
            epsilon = 1e-15
        );
        // finest with p = 2 equals the Bochner norm of f = (e_1, e_2): 1
        let finest = nu.space().finest_partition();
        assert_abs_diff_eq!(nu.partition_p_sum(&finest, 2.0).unwrap(), 1.0, epsilon = 1e-15);
        // p = 1: plain sum of block norms
        assert_abs_diff_eq!(nu.partition_p_sum(&finest, 1.0).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn variation_routes_agree_on_random_measures() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..60 {
            let n = rng.gen_range(1..6usize);
            let d = rng.gen_range(1..4usize);
            let q = [1.0, 2.0, f64::INFINITY][rng.gen_range(0..3usize)];
            let p = [1.0, 1.5, 2.0, 3.0][rng.gen_range(0..4usize)];
            let nu = random_measure(&mut rng, n, d, q);
            let finest = nu.p_variation(p, VariationMethod::Finest).unwrap();
            let brute = nu.p_variation(p, VariationMethod::Brute).unwrap();
            let holder = nu.p_variation(p, VariationMethod::HolderDual).unwrap();
            assert_abs_diff_eq!(finest, brute, epsilon = 1e-9 * (1.0 + finest));
            assert_abs_diff_eq!(finest, holder, epsilon = 1e-9 * (1.0 + finest));
        }
    }

    #[test]
    fn refinement_monotonicity_of_partition_sums() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..20 {
            let n = rng.gen_range(2..6usize);
            let nu = random_measure(&mut rng, n, 2, 2.0);
            let p = [1.0, 1.5, 2.0, 3.0][rng.gen_range(0..4usize)];
            let all: Vec<Partition> = enumerate_partitions(nu.space()).unwrap().collect();
            for fine in &all {
                for coarse in &all {
                    if crate::space::is_refinement(fine, coarse).unwrap() {
                        let vf = nu.partition_p_sum(fine, p).unwrap();
                        let vc = nu.partition_p_sum(coarse, p).unwrap();
                        assert!(vf >= vc - 1e-12, "refinement must not decrease the sum");
                    }
                }
            }
        }
    }

    #[test]
    fn semivariation_scalar_codomain_equals_variation() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..20 {
            let n = rng.gen_range(1..6usize);
            let nu = random_measure(&mut rng, n, 1, 2.0);
            let p = [1.0, 1.5, 2.0, 3.0][rng.gen_range(0..4usize)];
            let semi = nu.p_semivariation(p).unwrap();
            let var = nu.p_variation(p, VariationMethod::Finest).unwrap();
            assert_abs_diff_eq!(semi.value, var, epsilon = 1e-9 * (1.0 + var));
            assert_abs_diff_eq!(semi.witness.coords[0].abs(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn semivariation_of_two_atom_example() {
        let nu = uniform2_measure();
        let r = nu.p_semivariation(2.0).unwrap();
        assert_eq!(r.certified, Certification::Exact);
        assert_abs_diff_eq!(r.value, 0.5f64.sqrt(), epsilon = 1e-12);
        // zero measure
        let zero = nu.scaled(0.0);
        assert_abs_diff_eq!(zero.p_semivariation(2.0).unwrap().value, 0.0, epsilon = 0.0);
    }

    #[test]
    fn semivariation_over_subsets() {
        let nu = uniform2_measure();
        let full = nu.p_semivariation(2.0).unwrap();
        // the witness alone recovers the full value
        let sub = nu
            .semivariation_over_subset(2.0, std::slice::from_ref(&full.witness))
            .unwrap();
        assert_abs_diff_eq!(sub, full.value, epsilon = 1e-12);
        // single basis functional e_1 with p = 1 sees half the mass
        let e1 = DualVector::new(vec![1.0, 0.0]);
        let v1 = nu.semivariation_over_subset(1.0, &[e1.clone()]).unwrap();
        assert_abs_diff_eq!(v1, 0.5, epsilon = 1e-15);
        // with p = 2 the single functional already attains 1/√2
        let v2 = nu.semivariation_over_subset(2.0, &[e1.clone()]).unwrap();
        assert_abs_diff_eq!(v2, 0.5f64.sqrt(), epsilon = 1e-15);
        // nested sets are monotone
        let both = nu
            .semivariation_over_subset(2.0, &[e1, full.witness.clone()])
            .unwrap();
        assert!(both >= v2 - 1e-15);
        // norm violation rejected
        let too_big = DualVector::new(vec![2.0, 0.0]);
        assert!(matches!(
            nu.semivariation_over_subset(2.0, &[too_big]),
            Err(Error::DualNormViolation { .. })
        ));
    }

    #[test]
    fn semivariation_below_variation_with_homogeneity() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..50 {
            let n = rng.gen_range(1..6usize);
            let d = rng.gen_range(1..4usize);
            let q = [1.0, 2.0, f64::INFINITY][rng.gen_range(0..3usize)];
            let p = [1.0, 1.5, 2.0, 3.0][rng.gen_range(0..4usize)];
            let nu = random_measure(&mut rng, n, d, q);
            let semi = nu.p_semivariation(p).unwrap().value;
            let var = nu.p_variation(p, VariationMethod::Finest).unwrap();
            assert!(semi <= var + 1e-9, "‖ν‖_p = {semi} must not exceed |ν|_p = {var}");
            // homogeneity and triangle inequality in ν
            let c = 3.5;
            let vs = nu.scaled(c).p_variation(p, VariationMethod::Finest).unwrap();
            assert_abs_diff_eq!(vs, c * var, epsilon = 1e-9 * (1.0 + var));
            let other = random_measure(&mut rng, n, d, q);
            let other = VectorMeasure::new(
                nu.space().clone(),
                nu.codomain().clone(),
                other.atom_values().to_vec(),
            )
            .unwrap();
            let sum = nu.plus(&other).unwrap();
            let vsum = sum.p_variation(p, VariationMethod::Finest).unwrap();
            let vo = other.p_variation(p, VariationMethod::Finest).unwrap();
            assert!(vsum <= var + vo + 1e-9);
        }
    }

    #[test]
    fn single_atom_variation_is_the_norm() {
        let space = DiscreteProbabilitySpace::new(vec![1.0]).unwrap();
        let codomain = SpaceDescriptor::lq(3, 2.0).unwrap();
        let nu =
            VectorMeasure::new(space, codomain, vec![Vector::new(vec![1.0, 2.0, 2.0])]).unwrap();
        for p in [1.0, 1.5, 2.0, 3.0] {
            for m in [VariationMethod::Finest, VariationMethod::Brute, VariationMethod::HolderDual]
            {
                assert_abs_diff_eq!(nu.p_variation(p, m).unwrap(), 3.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn brute_force_guard() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let nu = random_measure(&mut rng, 9, 2, 2.0);
        assert!(matches!(
            nu.p_variation(2.0, VariationMethod::Brute),
            Err(Error::TooManyAtoms { .. })
        ));
        assert!(nu.p_variation(2.0, VariationMethod::Finest).is_ok());
    }

    #[test]
    fn measure_json_round_trip() {
        let nu = uniform2_measure();
        let json = serde_json::to_string(&nu).unwrap();
        let back: VectorMeasure<f64> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, nu);
    }
}
