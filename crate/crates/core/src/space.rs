//! Finite atomic probability spaces, set partitions of the atom set ordered
//! by refinement, scalar L^p norms, and uniform-integrability moduli.
//!
//! Every measurable set is a subset of atoms, so partition suprema are finite
//! and the moduli below are computed exactly.

use crate::error::{Error, Result};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

/// Absolute tolerance for the total-mass invariant Σμ = 1.
pub const MASS_TOL: f64 = 1e-12;

/// Guard for full partition enumeration (Bell(10) = 115_975).
pub const MAX_ENUM_ATOMS: usize = 10;

/// Guard for subset searches in the uniform-integrability moduli.
pub const MAX_SUBSET_ATOMS: usize = 24;

/// Finite atomic probability space: strictly positive atom masses summing
/// to one. Masses are never renormalized; malformed input is rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpaceJson<F>", into = "SpaceJson<F>")]
#[serde(bound(serialize = "F: Real + Serialize", deserialize = "F: Real + Deserialize<'de>"))]
pub struct DiscreteProbabilitySpace<F: Real> {
    masses: Vec<F>,
}

#[derive(Serialize, Deserialize)]
struct SpaceJson<F> {
    masses: Vec<F>,
}

impl<F: Real> TryFrom<SpaceJson<F>> for DiscreteProbabilitySpace<F> {
    type Error = Error;
    fn try_from(raw: SpaceJson<F>) -> Result<Self> {
        DiscreteProbabilitySpace::new(raw.masses)
    }
}

impl<F: Real> From<DiscreteProbabilitySpace<F>> for SpaceJson<F> {
    fn from(space: DiscreteProbabilitySpace<F>) -> Self {
        SpaceJson { masses: space.masses }
    }
}

impl<F: Real> DiscreteProbabilitySpace<F> {
    /// Validating constructor: every mass strictly positive, total within
    /// `MASS_TOL` of one.
    pub fn new(masses: Vec<F>) -> Result<Self> {
        for (index, m) in masses.iter().enumerate() {
            if !(*m > F::zero()) || !m.is_finite() {
                return Err(Error::NonPositiveMass { index });
            }
        }
        let sum: F = masses.iter().copied().sum();
        if (sum - F::one()).abs() > F::of(MASS_TOL) {
            return Err(Error::MassNotOne { sum: sum.as_f64() });
        }
        Ok(Self { masses })
    }

    /// Uniform space on `n` atoms.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::MassNotOne { sum: 0.0 });
        }
        let w = F::one() / F::of(n as f64);
        let mut masses = vec![w; n];
        // close the rounding gap on the last atom so Σμ = 1 holds exactly
        let partial: F = masses[..n - 1].iter().copied().sum();
        masses[n - 1] = F::one() - partial;
        Self::new(masses)
    }

    pub fn n_atoms(&self) -> usize {
        self.masses.len()
    }

    pub fn masses(&self) -> &[F] {
        &self.masses
    }

    pub fn mass(&self, atom: usize) -> F {
        self.masses[atom]
    }

    /// Total mass of an atom subset.
    pub fn subset_mass(&self, atoms: &[usize]) -> Result<F> {
        let mut total = F::zero();
        for &i in atoms {
            if i >= self.masses.len() {
                return Err(Error::IndexOutOfRange { index: i, len: self.masses.len() });
            }
            total += self.masses[i];
        }
        Ok(total)
    }

    /// Partition into singletons.
    pub fn finest_partition(&self) -> Partition {
        Partition::new((0..self.n_atoms()).map(|i| vec![i]).collect()).expect("singletons")
    }

    /// One-block partition.
    pub fn coarsest_partition(&self) -> Partition {
        Partition::new(vec![(0..self.n_atoms()).collect()]).expect("single block")
    }
}

/// Set partition of the atoms `{0, …, n−1}`: pairwise disjoint nonempty
/// blocks covering every atom. Stored canonically (blocks sorted, blocks
/// ordered by their least element).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
}

impl TryFrom<Vec<Vec<usize>>> for Partition {
    type Error = Error;
    fn try_from(blocks: Vec<Vec<usize>>) -> Result<Self> {
        Partition::new(blocks)
    }
}

impl From<Partition> for Vec<Vec<usize>> {
    fn from(p: Partition) -> Self {
        p.blocks
    }
}

impl Partition {
    /// Validating constructor; canonicalizes block and atom order.
    pub fn new(blocks: Vec<Vec<usize>>) -> Result<Self> {
        let n: usize = blocks.iter().map(|b| b.len()).sum();
        let mut seen = vec![false; n];
        for block in &blocks {
            if block.is_empty() {
                return Err(Error::SpaceMismatch);
            }
            for &i in block {
                if i >= n {
                    return Err(Error::IndexOutOfRange { index: i, len: n });
                }
                if seen[i] {
                    return Err(Error::SpaceMismatch);
                }
                seen[i] = true;
            }
        }
        // disjoint + total count n + all indices < n ⟹ covering
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        blocks.sort_by_key(|b| b[0]);
        Ok(Self { blocks })
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn n_atoms(&self) -> usize {
        self.blocks.iter().map(|b| b.len()).sum()
    }

    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Index of the block containing each atom.
    pub fn block_of_atoms(&self) -> Vec<usize> {
        let mut owner = vec![0usize; self.n_atoms()];
        for (k, block) in self.blocks.iter().enumerate() {
            for &i in block {
                owner[i] = k;
            }
        }
        owner
    }
}

/// True iff every block of `fine` is contained in some block of `coarse`.
pub fn is_refinement(fine: &Partition, coarse: &Partition) -> Result<bool> {
    if fine.n_atoms() != coarse.n_atoms() {
        return Err(Error::SpaceMismatch);
    }
    let owner = coarse.block_of_atoms();
    for block in fine.blocks() {
        let k = owner[block[0]];
        if block.iter().any(|&i| owner[i] != k) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Enumerate every set partition of the atoms exactly once, in restricted
/// growth string order. Guarded at `MAX_ENUM_ATOMS`.
pub fn enumerate_partitions<F: Real>(
    space: &DiscreteProbabilitySpace<F>,
) -> Result<PartitionIter> {
    let n = space.n_atoms();
    if n > MAX_ENUM_ATOMS {
        return Err(Error::TooManyAtoms { n, max: MAX_ENUM_ATOMS });
    }
    Ok(PartitionIter { rgs: vec![0; n], done: n == 0 })
}

/// Iterator over set partitions via restricted growth strings.
pub struct PartitionIter {
    rgs: Vec<usize>,
    done: bool,
}

impl Iterator for PartitionIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let n = self.rgs.len();
        let n_blocks = self.rgs.iter().copied().max().unwrap_or(0) + 1;
        let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); n_blocks];
        for (i, &label) in self.rgs.iter().enumerate() {
            blocks[label].push(i);
        }
        let out = Partition::new(blocks).expect("rgs yields a valid partition");

        // advance: rightmost position that can grow, suffix reset to 0
        let mut pos = n;
        while pos > 1 {
            pos -= 1;
            let prefix_max = self.rgs[..pos].iter().copied().max().unwrap_or(0);
            if self.rgs[pos] <= prefix_max {
                self.rgs[pos] += 1;
                for v in &mut self.rgs[pos + 1..] {
                    *v = 0;
                }
                return Some(out);
            }
        }
        self.done = true;
        Some(out)
    }
}

/// Real-valued function on the atoms of a space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "F: Real + Serialize", deserialize = "F: Real + Deserialize<'de>"))]
pub struct ScalarFunction<F: Real> {
    space: DiscreteProbabilitySpace<F>,
    values: Vec<F>,
}

impl<F: Real> ScalarFunction<F> {
    pub fn new(space: DiscreteProbabilitySpace<F>, values: Vec<F>) -> Result<Self> {
        if values.len() != space.n_atoms() {
            return Err(Error::DimensionMismatch {
                expected: space.n_atoms(),
                got: values.len(),
            });
        }
        Ok(Self { space, values })
    }

    pub fn space(&self) -> &DiscreteProbabilitySpace<F> {
        &self.space
    }

    pub fn values(&self) -> &[F] {
        &self.values
    }

    /// Pointwise combination with another function on the same space.
    pub fn zip_with(&self, other: &Self, f: impl Fn(F, F) -> F) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Self { space: self.space.clone(), values })
    }

    pub fn map(&self, f: impl Fn(F) -> F) -> Self {
        Self {
            space: self.space.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// ∫_Ω h dμ.
    pub fn integral(&self) -> F {
        self.space
            .masses()
            .iter()
            .zip(&self.values)
            .map(|(&m, &v)| m * v)
            .sum()
    }
}

/// L^p(μ) norm: (Σ μ_i |h_i|^p)^{1/p}; max-abs for p = ∞.
///
/// p = ∞ is accepted here only; it backs the conjugate exponent p' = ∞
/// needed when p = 1 elsewhere.
pub fn lp_norm<F: Real>(h: &ScalarFunction<F>, p: F) -> Result<F> {
    if p < F::one() || p.is_nan() {
        return Err(Error::BadExponent { p: p.as_f64() });
    }
    if p.is_infinite() {
        return Ok(h
            .values()
            .iter()
            .fold(F::zero(), |acc, &v| acc.max(v.abs())));
    }
    let sum: F = h
        .space()
        .masses()
        .iter()
        .zip(h.values())
        .map(|(&m, &v)| m * v.abs().powf(p))
        .sum();
    Ok(sum.powf(F::one() / p))
}

/// Uniform-integrability modulus of a family: the exact value of
///
///   sup over h in the family, and over atom subsets A with μ(A) ≤ delta,
///   of ∫_A |h| dμ,
///
/// computed per function by branch-and-bound over subsets with a sorted
/// fractional-greedy upper bound.
pub fn ui_modulus<F: Real>(family: &[ScalarFunction<F>], delta: F) -> Result<F> {
    let Some(first) = family.first() else {
        return Ok(F::zero());
    };
    let n = first.space().n_atoms();
    if n > MAX_SUBSET_ATOMS {
        return Err(Error::TooManyAtoms { n, max: MAX_SUBSET_ATOMS });
    }
    let mut best = F::zero();
    for h in family {
        if h.space() != first.space() {
            return Err(Error::SpaceMismatch);
        }
        let items: Vec<(F, F)> = h
            .space()
            .masses()
            .iter()
            .zip(h.values())
            .map(|(&m, &v)| (m * v.abs(), m))
            .collect();
        best = best.max(knapsack_max(&items, delta));
    }
    Ok(best)
}

/// Exact 0/1 knapsack: maximize Σ value over item subsets with
/// Σ weight ≤ capacity (+ tiny slack for dyadic-exact inputs).
fn knapsack_max<F: Real>(items: &[(F, F)], capacity: F) -> F {
    let slack = F::of(MASS_TOL);
    if capacity < -slack {
        return F::zero();
    }
    // density order (value/weight = |h_i| here) for the fractional bound
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| {
        let da = items[a].0 / items[a].1;
        let db = items[b].0 / items[b].1;
        db.partial_cmp(&da).unwrap_or(std::cmp::Ordering::Equal)
    });
    let sorted: Vec<(F, F)> = order.iter().map(|&i| items[i]).collect();

    fn fractional_bound<F: Real>(sorted: &[(F, F)], pos: usize, room: F) -> F {
        let mut bound = F::zero();
        let mut room = room;
        for &(v, w) in &sorted[pos..] {
            if room <= F::zero() {
                break;
            }
            if w <= room {
                bound += v;
                room -= w;
            } else {
                bound += v * (room / w);
                break;
            }
        }
        bound
    }

    fn dfs<F: Real>(sorted: &[(F, F)], pos: usize, acc: F, room: F, slack: F, best: &mut F) {
        if acc > *best {
            *best = acc;
        }
        if pos == sorted.len() {
            return;
        }
        if acc + fractional_bound(sorted, pos, room + slack) <= *best {
            return;
        }
        let (v, w) = sorted[pos];
        if w <= room + slack {
            dfs(sorted, pos + 1, acc + v, room - w, slack, best);
        }
        dfs(sorted, pos + 1, acc, room, slack, best);
    }

    let mut best = F::zero();
    dfs(&sorted, 0, F::zero(), capacity, slack, &mut best);
    best
}
