use std::collections::BTreeMap;

use num_traits::Zero;

use crate::covers::{orient, RamificationData};
use crate::error::{Error, Result};
use crate::linalg::Z;
use crate::moduli::{enumerate_trees_with, ConeLocator, MarkedTree, ModuliSpace, Split};
use crate::polyhedra::{degree, divisor, PiecewiseLinearFn, WeightedComplex};
use crate::par::Workers;

const MAX_POSET: usize = 20;

/// Number of total orders on `0..n` in which `a` precedes `b` for every edge
/// `(a, b)`.
pub fn count_linear_extensions(n: usize, edges: &[(usize, usize)]) -> Result<Z> {
    if n > MAX_POSET {
        return Err(Error::Limit(format!("{n} vertices exceed the cap of {MAX_POSET}")));
    }
    if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= n || b >= n) {
        return Err(Error::Lookup(format!("edge ({a}, {b}) outside 0..{n}")));
    }
    let mut below = vec![0u32; n];
    for &(a, b) in edges {
        below[b] |= 1 << a;
    }
    let mut ways = vec![0u128; 1 << n];
    ways[0] = 1;
    for mask in 0..(1usize << n) {
        let w = ways[mask];
        if w == 0 {
            continue;
        }
        for v in 0..n {
            if mask & (1 << v) == 0 && below[v] & !(mask as u32) == 0 {
                ways[mask | (1 << v)] += w;
            }
        }
    }
    let total = ways[(1 << n) - 1];
    if total == 0 {
        return Err(Error::Structure("edge directions contain a cycle".into()));
    }
    Ok(Z::from(total))
}

/// Coefficient of a codimension-k boundary stratum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryCoefficient {
    pub tree: MarkedTree,
    pub m: Z,
    pub x_tau: Z,
    pub valence_product: Z,
}

impl BoundaryCoefficient {
    pub fn new(tree: &MarkedTree, x: &RamificationData) -> Result<Self> {
        let cover = orient(tree, x)?;
        let x_tau = cover.slopes().iter().fold(Z::from(1), |a, &s| a * s);
        let valence_product = tree.valences().iter().fold(Z::from(1), |a, &v| a * (v as i64 - 2));
        let m = if x_tau.is_zero() {
            Z::zero()
        } else {
            let parents = tree.parents();
            let edges: Vec<(usize, usize)> = cover
                .signed_slopes
                .iter()
                .enumerate()
                .map(|(e, &s)| if s > 0 { (parents[e], e + 1) } else { (e + 1, parents[e]) })
                .collect();
            count_linear_extensions(tree.num_vertices(), &edges)?
        };
        Ok(BoundaryCoefficient { tree: tree.clone(), m, x_tau, valence_product })
    }

    pub fn value(&self) -> Z {
        &self.m * &self.x_tau * &self.valence_product
    }
}

/// Applies `φ_s` for each split in turn, caching every prefix.
struct PhiCache<'a> {
    locator: &'a ConeLocator,
    workers: Workers,
    memo: BTreeMap<Vec<Split>, WeightedComplex>,
}

impl<'a> PhiCache<'a> {
    fn new(locator: &'a ConeLocator, base: WeightedComplex, workers: Workers) -> Self {
        let mut memo = BTreeMap::new();
        memo.insert(Vec::new(), base);
        PhiCache { locator, workers, memo }
    }

    fn get(&mut self, splits: &[Split]) -> Result<WeightedComplex> {
        if let Some(x) = self.memo.get(splits) {
            return Ok(x.clone());
        }
        let (last, prefix) = splits.split_last().expect("base is cached");
        let prev = self.get(prefix)?;
        let next = if prev.maximal.is_empty() || prev.dim == 0 {
            WeightedComplex::empty(prev.ambient_dim, prev.dim.saturating_sub(1)).with_lattice_basis(prev.lattice_basis.clone())
        } else {
            apply_phi(self.locator, last, &prev, self.workers)?
        };
        self.memo.insert(splits.to_vec(), next.clone());
        Ok(next)
    }
}

/// `φ_s · C` for a cycle whose cells lie in cones of `M_{0,n}`.
pub fn apply_phi(locator: &ConeLocator, s: &Split, c: &WeightedComplex, workers: Workers) -> Result<WeightedComplex> {
    let phi = PiecewiseLinearFn::from_cells(c.clone(), |cell| locator.phi_on(s, cell))?;
    divisor(&phi, workers)
}

/// `sum_τ m(τ) x_τ prod(val - 2) φ_τ · M_{0,n}` over cones τ of codimension `k`.
pub fn boundary_divisor_cycle(k: usize, x: &RamificationData, workers: Workers) -> Result<WeightedComplex> {
    let n = x.n();
    if k > n - 3 {
        return Err(Error::Param(format!("k = {k} exceeds n - 3 = {}", n - 3)));
    }
    let space = ModuliSpace::new(n)?;
    let locator = space.locator(workers)?;
    let mut cache = PhiCache::new(&locator, space.fan(workers)?, workers);
    let mut terms = Vec::new();
    for tree in enumerate_trees_with(n, n - 3 - k, workers)? {
        let coef = BoundaryCoefficient::new(&tree, x)?.value();
        if !coef.is_zero() {
            terms.push((coef, cache.get(&tree.splits)?));
        }
    }
    if terms.is_empty() {
        return Ok(WeightedComplex::empty(space.dim(), k).with_lattice_basis(space.lattice_basis.clone()));
    }
    let refs: Vec<(Z, &WeightedComplex)> = terms.iter().map(|(c, x)| (c.clone(), x)).collect();
    WeightedComplex::linear_combination(&refs, workers)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumericalEquivalence {
    pub equal: bool,
    /// `(ρ, deg φ_ρ·C, deg φ_ρ·D)` for every k-dimensional cone ρ.
    pub table: Vec<(MarkedTree, Z, Z)>,
}

/// Compares `φ_ρ · C` and `φ_ρ · D` for all k-dimensional cones ρ of `M_{0,n}`.
pub fn numerical_equivalence_check(
    c: &WeightedComplex,
    d: &WeightedComplex,
    k: usize,
    n: usize,
    workers: Workers,
) -> Result<NumericalEquivalence> {
    if c.dim != k || d.dim != k {
        return Err(Error::Dimension(format!("cycles of dimension {} and {}, expected {k}", c.dim, d.dim)));
    }
    let space = ModuliSpace::new(n)?;
    if c.ambient_dim != space.dim() || d.ambient_dim != space.dim() {
        return Err(Error::Dimension("cycles do not live in the moduli space".into()));
    }
    let locator = space.locator(workers)?;
    let mut cc = PhiCache::new(&locator, c.clone(), workers);
    let mut dc = PhiCache::new(&locator, d.clone(), workers);
    let mut table = Vec::new();
    for rho in enumerate_trees_with(n, k, workers)? {
        let a = zero_degree(&cc.get(&rho.splits)?)?;
        let b = zero_degree(&dc.get(&rho.splits)?)?;
        table.push((rho, a, b));
    }
    let equal = table.iter().all(|(_, a, b)| a == b);
    Ok(NumericalEquivalence { equal, table })
}

fn zero_degree(x: &WeightedComplex) -> Result<Z> {
    if x.maximal.is_empty() {
        Ok(Z::zero())
    } else {
        degree(x)
    }
}
