//! Simple functions f: Ω → X on a finite atomic space: scalar pairings, the
//! dual-ball norm, the associated operator with its singular-value
//! diagnostics, the Bochner norm, the indefinite integral, partition
//! averaging with its approximation defect, and the uniform-integrability
//! modulus of the family {|⟨f, x*⟩|^p : x* in the dual ball}.

use crate::error::{Error, Result};
use crate::linalg::svd_rows;
use crate::measure::VectorMeasure;
use crate::normed::{
    certified_regime, maximize_with_config, Certification, DualVector, MomentMaxResult,
    MomentSearchConfig, SpaceDescriptor, Vector,
};
use crate::scalar::Real;
use crate::space::{DiscreteProbabilitySpace, Partition, ScalarFunction, MAX_SUBSET_ATOMS};
use serde::{Deserialize, Serialize};

/// Function Ω → X given by one vector per atom. On a finite atomic space
/// every function is of this form, strongly measurable, and integrable in
/// every sense; the quantitative objects below are the content.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FunctionJson<F>", into = "FunctionJson<F>")]
#[serde(bound(serialize = "F: Real + Serialize", deserialize = "F: Real + Deserialize<'de>"))]
pub struct SimpleFunction<F: Real> {
    space: DiscreteProbabilitySpace<F>,
    codomain: SpaceDescriptor<F>,
    values: Vec<Vector<F>>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "F: Real + Serialize", deserialize = "F: Real + Deserialize<'de>"))]
struct FunctionJson<F: Real> {
    space: DiscreteProbabilitySpace<F>,
    codomain: SpaceDescriptor<F>,
    values: Vec<Vec<F>>,
}

impl<F: Real> TryFrom<FunctionJson<F>> for SimpleFunction<F> {
    type Error = Error;
    fn try_from(raw: FunctionJson<F>) -> Result<Self> {
        SimpleFunction::new(
            raw.space,
            raw.codomain,
            raw.values.into_iter().map(Vector::new).collect(),
        )
    }
}

impl<F: Real> From<SimpleFunction<F>> for FunctionJson<F> {
    fn from(f: SimpleFunction<F>) -> Self {
        FunctionJson {
            space: f.space,
            codomain: f.codomain,
            values: f.values.into_iter().map(|v| v.coords).collect(),
        }
    }
}

impl<F: Real> SimpleFunction<F> {
    pub fn new(
        space: DiscreteProbabilitySpace<F>,
        codomain: SpaceDescriptor<F>,
        values: Vec<Vector<F>>,
    ) -> Result<Self> {
        if values.len() != space.n_atoms() {
            return Err(Error::DimensionMismatch {
                expected: space.n_atoms(),
                got: values.len(),
            });
        }
        for v in &values {
            if v.dim() != codomain.dim() {
                return Err(Error::DimensionMismatch { expected: codomain.dim(), got: v.dim() });
            }
        }
        Ok(Self { space, codomain, values })
    }

    /// Constant function with value `x`.
    pub fn constant(
        space: DiscreteProbabilitySpace<F>,
        codomain: SpaceDescriptor<F>,
        x: Vector<F>,
    ) -> Result<Self> {
        let values = vec![x; space.n_atoms()];
        Self::new(space, codomain, values)
    }

    pub fn space(&self) -> &DiscreteProbabilitySpace<F> {
        &self.space
    }

    pub fn codomain(&self) -> &SpaceDescriptor<F> {
        &self.codomain
    }

    pub fn values(&self) -> &[Vector<F>] {
        &self.values
    }

    /// Scalar pairing ⟨f, x*⟩ as a function on the atoms.
    pub fn pair(&self, xs: &DualVector<F>) -> Result<ScalarFunction<F>> {
        if xs.dim() != self.codomain.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.codomain.dim(),
                got: xs.dim(),
            });
        }
        let values = self
            .values
            .iter()
            .map(|v| self.codomain.pairing(&v.coords, &xs.coords))
            .collect();
        ScalarFunction::new(self.space.clone(), values)
    }

    /// Dual-ball norm: sup over x* in the dual unit ball of the L^p norm of
    /// ⟨f, x*⟩ — the operator norm of x* ↦ ⟨f, x*⟩ into L^p(μ).
    pub fn dunford_norm(&self, p: F) -> Result<MomentMaxResult<F>> {
        self.dunford_norm_with(p, &MomentSearchConfig::default())
    }

    pub fn dunford_norm_with(
        &self,
        p: F,
        cfg: &MomentSearchConfig,
    ) -> Result<MomentMaxResult<F>> {
        maximize_with_config(&self.codomain, &self.values, self.space.masses(), p, cfg)
    }

    /// (Σ_i μ_i ‖f_i‖^p)^{1/p}.
    pub fn bochner_norm(&self, p: F) -> Result<F> {
        if p < F::one() || !p.is_finite() {
            return Err(Error::BadExponent { p: p.as_f64() });
        }
        let mut sum = F::zero();
        for (v, &m) in self.values.iter().zip(self.space.masses()) {
            sum += m * crate::normed::norm(&self.codomain, v)?.powf(p);
        }
        Ok(sum.powf(F::one() / p))
    }

    /// Indefinite integral: the measure with atom values μ_i f_i.
    pub fn indefinite_integral(&self) -> VectorMeasure<F> {
        let atom_values = self
            .values
            .iter()
            .zip(self.space.masses())
            .map(|(v, &m)| v.scaled(m))
            .collect();
        VectorMeasure::new(self.space.clone(), self.codomain.clone(), atom_values)
            .expect("function shape carries over")
    }

    /// Associated operator for exponent `p`.
    pub fn dunford_operator(&self, p: F) -> Result<DunfordOperator<F>> {
        if p < F::one() || !p.is_finite() {
            return Err(Error::BadExponent { p: p.as_f64() });
        }
        Ok(DunfordOperator { function: self.clone(), p })
    }

    /// Singular values (descending) of the map x* ↦ ⟨f, x*⟩ from (X*, ℓ_2)
    /// to L²(μ): the matrix with rows √μ_i f_i, pairing weights folded in.
    /// Only the Hilbert/p = 2 regime is exact, everything else is rejected.
    pub fn sv_profile(&self, p: F) -> Result<Vec<F>> {
        if self.codomain.exponent() != F::of(2.0) {
            return Err(Error::UnsupportedRegime {
                detail: "sv_profile needs an ℓ_2 or weighted-L² codomain",
            });
        }
        if p != F::of(2.0) {
            return Err(Error::UnsupportedRegime { detail: "sv_profile needs p = 2" });
        }
        let d = self.codomain.dim();
        let rows: Vec<Vec<F>> = self
            .values
            .iter()
            .zip(self.space.masses())
            .map(|(v, &m)| {
                (0..d)
                    .map(|j| m.sqrt() * self.codomain.pairing_weight(j).sqrt() * v.coords[j])
                    .collect()
            })
            .collect();
        let (sigma, _) = svd_rows(&rows);
        Ok(sigma)
    }

    /// Block-wise conditional average over a partition:
    /// value (1/μ(A)) ∫_A f dμ on each block A.
    pub fn averaging(&self, partition: &Partition) -> Result<SimpleFunction<F>> {
        if partition.n_atoms() != self.space.n_atoms() {
            return Err(Error::SpaceMismatch);
        }
        let mut values = vec![Vector::zero(self.codomain.dim()); self.space.n_atoms()];
        for block in partition.blocks() {
            let mass = self.space.subset_mass(block)?;
            let mut avg = Vector::zero(self.codomain.dim());
            for &i in block {
                avg = avg.plus(&self.values[i].scaled(self.space.mass(i)));
            }
            let avg = avg.scaled(F::one() / mass);
            for &i in block {
                values[i] = avg.clone();
            }
        }
        SimpleFunction::new(self.space.clone(), self.codomain.clone(), values)
    }

    /// ‖f − h_𝒫‖ in the dual-ball norm, h_𝒫 the conditional average.
    pub fn approximation_defect(&self, partition: &Partition, p: F) -> Result<F> {
        let averaged = self.averaging(partition)?;
        Ok(self.minus(&averaged)?.dunford_norm(p)?.value)
    }

    /// Uniform-integrability modulus of {|⟨f, x*⟩|^p : ‖x*‖ ≤ 1}:
    ///
    ///   η(δ) = sup_{x*} sup_{μ(A) ≤ δ} ∫_A |⟨f, x*⟩|^p dμ,
    ///
    /// by branch-and-bound over atom subsets with a dual-ball maximization
    /// per subset (the inner problem is convex with exact regimes, so the
    /// subset search stays outside).
    pub fn zfp_ui_modulus(&self, p: F, deltas: &[F]) -> Result<ScalarFamilyReport<F>> {
        self.zfp_ui_modulus_with(p, deltas, &MomentSearchConfig::default())
    }

    pub fn zfp_ui_modulus_with(
        &self,
        p: F,
        deltas: &[F],
        cfg: &MomentSearchConfig,
    ) -> Result<ScalarFamilyReport<F>> {
        let n = self.space.n_atoms();
        if n > MAX_SUBSET_ATOMS {
            return Err(Error::TooManyAtoms { n, max: MAX_SUBSET_ATOMS });
        }
        if p < F::one() || !p.is_finite() {
            return Err(Error::BadExponent { p: p.as_f64() });
        }
        let certified = if certified_regime(&self.codomain, p) {
            Certification::Exact
        } else {
            Certification::Heuristic
        };
        let mut entries = Vec::with_capacity(deltas.len());
        for &delta in deltas {
            entries.push(self.best_small_subset(p, delta, cfg, certified)?);
        }
        Ok(ScalarFamilyReport { p, entries })
    }

    /// Branch-and-bound over subsets of mass ≤ delta, pruned by the
    /// monotone bound m(A ∪ rest) ≥ m(A′) for any feasible completion A′.
    fn best_small_subset(
        &self,
        p: F,
        delta: F,
        cfg: &MomentSearchConfig,
        certified: Certification,
    ) -> Result<ModulusEntry<F>> {
        let slack = F::of(crate::space::MASS_TOL);
        // strong singletons first: better incumbents, earlier pruning
        let mut order: Vec<usize> = (0..self.space.n_atoms()).collect();
        let scores: Vec<F> = self
            .values
            .iter()
            .zip(self.space.masses())
            .map(|(v, &m)| {
                let norm = crate::normed::norm(&self.codomain, v).unwrap_or(F::zero());
                m * norm.powf(p)
            })
            .collect();
        order.sort_by(|&a, &b| {
            scores[b].partial_cmp(&scores[a]).unwrap_or(std::cmp::Ordering::Equal)
        });

        struct Search<'a, F: Real> {
            f: &'a SimpleFunction<F>,
            p: F,
            cfg: &'a MomentSearchConfig,
            order: &'a [usize],
            slack: F,
            best_pow: F,
            best_atoms: Vec<usize>,
            best_witness: DualVector<F>,
        }

        impl<F: Real> Search<'_, F> {
            /// sup_{x*} Σ_{i∈atoms} μ_i |⟨f_i, x*⟩|^p and its witness
            fn eval_pow(&self, atoms: &[usize]) -> Result<(F, DualVector<F>)> {
                let vectors: Vec<Vector<F>> =
                    atoms.iter().map(|&i| self.f.values[i].clone()).collect();
                let weights: Vec<F> = atoms.iter().map(|&i| self.f.space.mass(i)).collect();
                let r = maximize_with_config(
                    &self.f.codomain,
                    &vectors,
                    &weights,
                    self.p,
                    self.cfg,
                )?;
                Ok((r.value.powf(self.p), r.witness))
            }

            fn consider(&mut self, atoms: &[usize]) -> Result<()> {
                if atoms.is_empty() {
                    return Ok(());
                }
                let (val, witness) = self.eval_pow(atoms)?;
                if val > self.best_pow {
                    self.best_pow = val;
                    self.best_atoms = atoms.to_vec();
                    self.best_witness = witness;
                }
                Ok(())
            }

            fn dfs(&mut self, pos: usize, chosen: &mut Vec<usize>, used: F, cap: F) -> Result<()> {
                let room = cap - used + self.slack;
                let feasible: Vec<usize> = self.order[pos..]
                    .iter()
                    .copied()
                    .filter(|&i| self.f.space.mass(i) <= room)
                    .collect();
                if feasible.is_empty() {
                    return self.consider(chosen);
                }
                let mut closure = chosen.clone();
                closure.extend(&feasible);
                let total: F = feasible.iter().map(|&i| self.f.space.mass(i)).sum();
                if total <= room {
                    return self.consider(&closure);
                }
                let (bound, _) = self.eval_pow(&closure)?;
                if bound <= self.best_pow {
                    return Ok(());
                }
                // branch on the strongest feasible atom
                let atom = feasible[0];
                let next = self.order[pos..].iter().position(|&i| i == atom).unwrap() + pos + 1;
                chosen.push(atom);
                self.dfs(next, chosen, used + self.f.space.mass(atom), cap)?;
                chosen.pop();
                self.dfs(next, chosen, used, cap)
            }
        }

        let mut search = Search {
            f: self,
            p,
            cfg,
            order: &order,
            slack,
            best_pow: F::zero(),
            best_atoms: Vec::new(),
            best_witness: DualVector::zero(self.codomain.dim()),
        };
        if delta >= -slack {
            search.dfs(0, &mut Vec::new(), F::zero(), delta)?;
        }
        let mut atoms = search.best_atoms;
        atoms.sort_unstable();
        Ok(ModulusEntry {
            delta,
            value: search.best_pow,
            witness_functional: search.best_witness,
            witness_atoms: atoms,
            certified,
        })
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        if self.codomain != other.codomain {
            return Err(Error::DescriptorMismatch);
        }
        Ok(Self {
            space: self.space.clone(),
            codomain: self.codomain.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.minus(b))
                .collect(),
        })
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
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.plus(b))
                .collect(),
        })
    }

    pub fn scaled(&self, c: F) -> Self {
        Self {
            space: self.space.clone(),
            codomain: self.codomain.clone(),
            values: self.values.iter().map(|v| v.scaled(c)).collect(),
        }
    }
}

/// The operator g ↦ ∫ g f dμ from scalar functions (modeling L^{p'}(μ))
/// into the codomain, together with its adjoint x* ↦ ⟨f, x*⟩.
#[derive(Debug, Clone)]
pub struct DunfordOperator<F: Real> {
    function: SimpleFunction<F>,
    p: F,
}

impl<F: Real> DunfordOperator<F> {
    pub fn function(&self) -> &SimpleFunction<F> {
        &self.function
    }

    pub fn exponent(&self) -> F {
        self.p
    }

    /// T(g) = Σ_i μ_i g_i f_i. In particular T(χ_A) = ν_f(A).
    pub fn apply(&self, g: &ScalarFunction<F>) -> Result<Vector<F>> {
        if g.space() != self.function.space() {
            return Err(Error::SpaceMismatch);
        }
        let mut out = Vector::zero(self.function.codomain().dim());
        for ((v, &m), &gi) in self
            .function
            .values()
            .iter()
            .zip(self.function.space().masses())
            .zip(g.values())
        {
            out = out.plus(&v.scaled(m * gi));
        }
        Ok(out)
    }

    /// Adjoint direction: x* ↦ ⟨f, x*⟩.
    pub fn adjoint(&self, xs: &DualVector<F>) -> Result<ScalarFunction<F>> {
        self.function.pair(xs)
    }
}

/// Application of the operator to a scalar function (free-function form).
pub fn dunford_apply<F: Real>(
    operator: &DunfordOperator<F>,
    g: &ScalarFunction<F>,
) -> Result<Vector<F>> {
    operator.apply(g)
}

/// Conditional expectation of a scalar function with respect to a partition:
/// the L^p-contractive averaging projection U_𝒫.
pub fn conditional_expectation<F: Real>(
    g: &ScalarFunction<F>,
    partition: &Partition,
) -> Result<ScalarFunction<F>> {
    if partition.n_atoms() != g.space().n_atoms() {
        return Err(Error::SpaceMismatch);
    }
    let mut values = vec![F::zero(); g.space().n_atoms()];
    for block in partition.blocks() {
        let mass = g.space().subset_mass(block)?;
        let mut avg = F::zero();
        for &i in block {
            avg += g.space().mass(i) * g.values()[i];
        }
        let avg = avg / mass;
        for &i in block {
            values[i] = avg;
        }
    }
    ScalarFunction::new(g.space().clone(), values)
}

/// Indicator χ_A as a scalar function.
pub fn indicator<F: Real>(
    space: &DiscreteProbabilitySpace<F>,
    atoms: &[usize],
) -> Result<ScalarFunction<F>> {
    let mut values = vec![F::zero(); space.n_atoms()];
    for &i in atoms {
        if i >= values.len() {
            return Err(Error::IndexOutOfRange { index: i, len: values.len() });
        }
        values[i] = F::one();
    }
    ScalarFunction::new(space.clone(), values)
}

/// Modulus curve of the family {|⟨f, x*⟩|^p}: per delta, the value η(δ) and
/// the maximizing (functional, atom subset) pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(serialize = "F: Real + Serialize", deserialize = "F: Real + Deserialize<'de>"))]
pub struct ScalarFamilyReport<F: Real> {
    pub p: F,
    pub entries: Vec<ModulusEntry<F>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(serialize = "F: Real + Serialize", deserialize = "F: Real + Deserialize<'de>"))]
pub struct ModulusEntry<F: Real> {
    pub delta: F,
    pub value: F,
    pub witness_functional: DualVector<F>,
    pub witness_atoms: Vec<usize>,
    pub certified: Certification,
}
