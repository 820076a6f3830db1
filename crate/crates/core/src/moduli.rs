//! Rational tropical curves with `n` marked leaves and the fan `M_{0,n}` in
//! its combinatorial subdivision.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{column_echelon, dot, rref, QVector, ZMatrix, Q, Z};
use crate::par::{self, Workers};
use crate::polyhedra::{AffineFn, Cell, PiecewiseLinearFn, WeightedComplex};

/// A bipartition `I | I^c` of the leaves, stored by the side not containing `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Split {
    mask: u32,
    n: u8,
}

impl Split {
    /// `elements` are 1-based leaf labels of either side.
    pub fn new(elements: &[usize], n: usize) -> Result<Split> {
        if !(4..=31).contains(&n) {
            return Err(Error::Param(format!("n = {n} outside 4..=31")));
        }
        let mut mask = 0u32;
        for &i in elements {
            if i == 0 || i > n {
                return Err(Error::Param(format!("leaf {i} outside 1..={n}")));
            }
            mask |= 1 << (i - 1);
        }
        Split::from_mask(mask, n)
    }

    pub fn from_mask(mask: u32, n: usize) -> Result<Split> {
        let full = (1u32 << n) - 1;
        let mut mask = mask & full;
        if mask & (1 << (n - 1)) != 0 {
            mask = full & !mask;
        }
        let size = mask.count_ones() as usize;
        if size < 2 || size > n - 2 {
            return Err(Error::Param(format!("split side of size {size} for n = {n}")));
        }
        Ok(Split { mask, n: n as u8 })
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    /// Sorted 1-based labels of the canonical side.
    pub fn elements(&self) -> Vec<usize> {
        (1..=self.n()).filter(|&i| self.contains(i)).collect()
    }

    pub fn contains(&self, leaf: usize) -> bool {
        leaf >= 1 && self.mask & (1 << (leaf - 1)) != 0
    }

    pub fn is_subset_of(&self, other: &Split) -> bool {
        self.mask & !other.mask == 0
    }

    /// Nested or disjoint canonical sides.
    pub fn compatible(&self, other: &Split) -> bool {
        self.is_subset_of(other) || other.is_subset_of(self) || self.mask & other.mask == 0
    }

    /// Whether leaves `i` and `j` lie on different sides.
    pub fn separates(&self, i: usize, j: usize) -> bool {
        self.contains(i) != self.contains(j)
    }

    pub fn all(n: usize) -> Vec<Split> {
        let mut out: Vec<Split> = (0u32..(1 << (n - 1))).filter_map(|m| Split::from_mask(m, n).ok()).collect();
        out.sort();
        out.dedup();
        out
    }
}

impl Ord for Split {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| self.elements().cmp(&other.elements()))
    }
}

impl PartialOrd for Split {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.elements().iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", s.join(","))
    }
}

/// Vertex of a marked tree. Vertex 0 carries leaf `n`; vertex `i + 1` is the
/// endpoint of edge `i` on the side of its split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeVertex {
    pub leaves: Vec<usize>,
    /// Edge to the parent (towards leaf `n`), if any.
    pub up: Option<usize>,
    /// Edges to children.
    pub down: Vec<usize>,
}

impl TreeVertex {
    pub fn valence(&self) -> usize {
        self.leaves.len() + self.down.len() + usize::from(self.up.is_some())
    }
}

/// Combinatorial type of an `n`-marked rational tropical curve, given by its
/// pairwise compatible splits in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MarkedTree {
    pub n: usize,
    pub splits: Vec<Split>,
}

impl MarkedTree {
    pub fn new(n: usize, mut splits: Vec<Split>) -> Result<MarkedTree> {
        if splits.iter().any(|s| s.n() != n) {
            return Err(Error::Param("split for a different number of leaves".into()));
        }
        splits.sort();
        splits.dedup();
        for (i, a) in splits.iter().enumerate() {
            if splits[i + 1..].iter().any(|b| !a.compatible(b)) {
                return Err(Error::Structure(format!("incompatible splits in tree containing {a}")));
            }
        }
        if splits.len() + 3 > n {
            return Err(Error::Structure("more than n - 3 edges".into()));
        }
        Ok(MarkedTree { n, splits })
    }

    pub fn from_subsets(n: usize, sets: &[&[usize]]) -> Result<MarkedTree> {
        let splits = sets.iter().map(|s| Split::new(s, n)).collect::<Result<Vec<_>>>()?;
        MarkedTree::new(n, splits)
    }

    pub fn num_edges(&self) -> usize {
        self.splits.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.splits.len() + 1
    }

    pub fn is_trivalent(&self) -> bool {
        self.splits.len() + 3 == self.n
    }

    fn minimal_containing(&self, pred: impl Fn(&Split) -> bool) -> Option<usize> {
        (0..self.splits.len()).filter(|&i| pred(&self.splits[i])).min_by_key(|&i| self.splits[i].len())
    }

    /// Upper endpoint (towards leaf `n`) of each edge; the lower endpoint of
    /// edge `i` is vertex `i + 1`.
    pub fn parents(&self) -> Vec<usize> {
        (0..self.splits.len())
            .map(|i| {
                let s = self.splits[i];
                self.minimal_containing(|t| *t != s && s.is_subset_of(t)).map_or(0, |j| j + 1)
            })
            .collect()
    }

    /// Vertex carrying each leaf (index `leaf - 1`).
    pub fn leaf_vertices(&self) -> Vec<usize> {
        (1..=self.n).map(|l| self.minimal_containing(|t| t.contains(l)).map_or(0, |j| j + 1)).collect()
    }

    pub fn vertices(&self) -> Vec<TreeVertex> {
        let mut vs = vec![TreeVertex { leaves: Vec::new(), up: None, down: Vec::new() }; self.num_vertices()];
        for (i, p) in self.parents().into_iter().enumerate() {
            vs[i + 1].up = Some(i);
            vs[p].down.push(i);
        }
        for (l, v) in self.leaf_vertices().into_iter().enumerate() {
            vs[v].leaves.push(l + 1);
        }
        vs
    }

    pub fn valences(&self) -> Vec<usize> {
        self.vertices().iter().map(|v| v.valence()).collect()
    }

    /// The tree obtained by contracting all edges not in `keep`.
    pub fn contract_to(&self, keep: &[usize]) -> MarkedTree {
        MarkedTree { n: self.n, splits: keep.iter().map(|&i| self.splits[i]).collect() }
    }

    /// Edges on the path between two vertices.
    pub fn path(&self, a: usize, b: usize) -> Vec<usize> {
        let parents = self.parents();
        let up = |mut v: usize| {
            let mut chain = Vec::new();
            while v != 0 {
                chain.push(v - 1);
                v = parents[v - 1];
            }
            chain
        };
        let (pa, pb) = (up(a), up(b));
        let common = pa.iter().rev().zip(pb.iter().rev()).take_while(|(x, y)| x == y).count();
        let mut out: Vec<usize> = pa[..pa.len() - common].to_vec();
        out.extend(pb[..pb.len() - common].iter().copied());
        out
    }
}

impl fmt::Display for MarkedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.splits.iter().map(|s| s.to_string()).collect();
        write!(f, "[{}]", s.join(";"))
    }
}

/// A marked tree with positive edge lengths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricTree {
    pub tree: MarkedTree,
    pub lengths: Vec<Q>,
}

impl MetricTree {
    pub fn new(tree: MarkedTree, lengths: Vec<Q>) -> Result<MetricTree> {
        if lengths.len() != tree.num_edges() {
            return Err(Error::Dimension("one length per edge required".into()));
        }
        if lengths.iter().any(|l| !l.is_positive()) {
            return Err(Error::Param("edge lengths must be positive".into()));
        }
        Ok(MetricTree { tree, lengths })
    }

    /// Distance between leaves `i` and `j` (1-based).
    pub fn distance(&self, i: usize, j: usize) -> Q {
        self.tree
            .splits
            .iter()
            .zip(&self.lengths)
            .filter(|(s, _)| s.separates(i, j))
            .fold(Q::zero(), |a, (_, l)| a + l)
    }
}

/// All trees with exactly `e` edges, in lexicographic order of split lists.
pub fn enumerate_trees(n: usize, e: usize) -> Result<Vec<MarkedTree>> {
    enumerate_trees_with(n, e, Workers::SEQUENTIAL)
}

pub fn enumerate_trees_with(n: usize, e: usize, workers: Workers) -> Result<Vec<MarkedTree>> {
    if !(4..=31).contains(&n) {
        return Err(Error::Param(format!("n = {n} outside 4..=31")));
    }
    if e + 3 > n {
        return Err(Error::Param(format!("{e} edges exceed n - 3 = {}", n - 3)));
    }
    if e == 0 {
        return Ok(vec![MarkedTree { n, splits: Vec::new() }]);
    }
    let all = Split::all(n);
    let firsts: Vec<usize> = (0..all.len()).collect();
    let parts = par::map(workers, &firsts, |&i| {
        let mut out = Vec::new();
        let mut chosen = vec![i];
        extend(&all, e, &mut chosen, &mut out, n);
        out
    });
    Ok(parts.into_iter().flatten().collect())
}

fn extend(all: &[Split], e: usize, chosen: &mut Vec<usize>, out: &mut Vec<MarkedTree>, n: usize) {
    if chosen.len() == e {
        out.push(MarkedTree { n, splits: chosen.iter().map(|&i| all[i]).collect() });
        return;
    }
    let start = chosen.last().map_or(0, |&l| l + 1);
    for j in start..all.len() {
        if chosen.iter().all(|&c| all[c].compatible(&all[j])) {
            chosen.push(j);
            extend(all, e, chosen, out, n);
            chosen.pop();
        }
    }
}

/// Coordinates on `M_{0,n} ⊂ Q^{C(n,2)} / Φ_n(Q^n)`.
///
/// Raw metric vectors are indexed by pairs `(i, j)`, `i < j`, in lexicographic
/// order. The quotient is realized on the pairs that are not pivots of `Φ_n`
/// (pivots: `(1, j)` for all `j` and `(2, 3)`). Points are then expressed in a
/// basis of the lattice generated by all rays `v_I`, so the ambient lattice of
/// every complex built here is the standard one.
#[derive(Clone, Debug)]
pub struct ModuliSpace {
    pub n: usize,
    pub pairs: Vec<(usize, usize)>,
    pivots: Vec<usize>,
    free: Vec<usize>,
    /// Columns: lattice basis in quotient coordinates.
    pub lattice_basis: Vec<Vec<Q>>,
    lattice_inverse: Vec<Vec<Q>>,
}

impl ModuliSpace {
    pub fn new(n: usize) -> Result<ModuliSpace> {
        if !(4..=31).contains(&n) {
            return Err(Error::Param(format!("n = {n} outside 4..=31")));
        }
        let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|i| ((i + 1)..=n).map(move |j| (i, j))).collect();
        let mut pivots = Vec::new();
        let mut acc: Vec<Vec<Q>> = Vec::new();
        for (k, &(i, j)) in pairs.iter().enumerate() {
            let mut row = vec![Q::zero(); n];
            row[i - 1] = Q::from_integer(1.into());
            row[j - 1] = Q::from_integer(1.into());
            let mut t = acc.clone();
            t.push(row.clone());
            if crate::linalg::rank_q(&t, n) > acc.len() {
                acc.push(row);
                pivots.push(k);
            }
        }
        let free: Vec<usize> = (0..pairs.len()).filter(|k| !pivots.contains(k)).collect();
        let mut space = ModuliSpace { n, pairs, pivots, free, lattice_basis: Vec::new(), lattice_inverse: Vec::new() };
        space.compute_lattice()?;
        Ok(space)
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// Raw metric vector of the one-edge tree of length 1.
    pub fn raw_ray(&self, s: &Split) -> Vec<Q> {
        self.pairs.iter().map(|&(i, j)| if s.separates(i, j) { Q::from_integer(1.into()) } else { Q::zero() }).collect()
    }

    /// Projection of a raw metric vector to quotient coordinates.
    pub fn quotient(&self, raw: &[Q]) -> Vec<Q> {
        let n = self.n;
        let mut rows: Vec<Vec<Q>> = self
            .pivots
            .iter()
            .map(|&k| {
                let (i, j) = self.pairs[k];
                let mut row = vec![Q::zero(); n + 1];
                row[i - 1] = Q::from_integer(1.into());
                row[j - 1] = Q::from_integer(1.into());
                row[n] = raw[k].clone();
                row
            })
            .collect();
        rref(&mut rows, n + 1);
        let a: Vec<Q> = (0..n).map(|i| rows[i][n].clone()).collect();
        self.free
            .iter()
            .map(|&k| {
                let (i, j) = self.pairs[k];
                &raw[k] - &a[i - 1] - &a[j - 1]
            })
            .collect()
    }

    fn compute_lattice(&mut self) -> Result<()> {
        let m = self.dim();
        let rays: Vec<Vec<Q>> = Split::all(self.n).iter().map(|s| self.quotient(&self.raw_ray(s))).collect();
        let den = rays.iter().flatten().fold(Z::from(1), |a, x| num_integer::Integer::lcm(&a, x.denom()));
        let cols: Vec<Vec<Z>> = rays.iter().map(|r| r.iter().map(|x| (x * Q::from_integer(den.clone())).to_integer()).collect()).collect();
        let rows: Vec<Vec<Z>> = (0..m).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        let ce = column_echelon(&ZMatrix::from_rows(cols.len(), rows)?);
        if ce.rank != m {
            return Err(Error::Structure("rays do not span the quotient".into()));
        }
        let dq = Q::from_integer(den);
        self.lattice_basis = (0..m).map(|j| (0..m).map(|i| Q::from_integer(ce.h.get(i, j).clone()) / &dq).collect()).collect();
        // inverse of the basis matrix (columns = basis vectors)
        let mut aug: Vec<Vec<Q>> = (0..m)
            .map(|i| {
                let mut row: Vec<Q> = (0..m).map(|j| self.lattice_basis[j][i].clone()).collect();
                row.extend((0..m).map(|j| if i == j { Q::from_integer(1.into()) } else { Q::zero() }));
                row
            })
            .collect();
        rref(&mut aug, 2 * m);
        self.lattice_inverse = aug.into_iter().map(|r| r[m..].to_vec()).collect();
        Ok(())
    }

    /// Lattice coordinates of a point given in quotient coordinates.
    pub fn to_lattice(&self, quotient: &[Q]) -> QVector {
        QVector(self.lattice_inverse.iter().map(|r| dot(r, quotient)).collect())
    }

    /// Quotient coordinates of a point given in lattice coordinates.
    pub fn to_quotient(&self, v: &QVector) -> Vec<Q> {
        let m = self.dim();
        (0..m).map(|i| (0..m).fold(Q::zero(), |a, j| a + &self.lattice_basis[j][i] * &v[j])).collect()
    }

    /// `v_I` in lattice coordinates.
    pub fn ray_vector(&self, s: &Split) -> QVector {
        self.to_lattice(&self.quotient(&self.raw_ray(s)))
    }

    /// `v_I` in quotient coordinates.
    pub fn ray_quotient_vector(&self, s: &Split) -> Vec<Q> {
        self.quotient(&self.raw_ray(s))
    }

    /// Raw pairwise leaf distances of a metric tree.
    pub fn raw_metric(&self, t: &MetricTree) -> Vec<Q> {
        self.pairs.iter().map(|&(i, j)| t.distance(i, j)).collect()
    }

    /// `sum_e length(e) v_{I_e}` in lattice coordinates.
    pub fn metric_vector(&self, t: &MetricTree) -> QVector {
        let mut out = QVector::zeros(self.dim());
        for (s, l) in t.tree.splits.iter().zip(&t.lengths) {
            out = &out + &self.ray_vector(s).scale(l);
        }
        out
    }

    pub fn cone(&self, t: &MarkedTree) -> Cell {
        let rays = t.splits.iter().map(|s| self.ray_vector(s)).collect();
        Cell::new(vec![QVector::zeros(self.dim())], rays, Vec::new()).expect("rays of equal length")
    }

    /// The fan of all cones with `e` edges, all of weight 1.
    pub fn skeleton(&self, e: usize, workers: Workers) -> Result<WeightedComplex> {
        let trees = enumerate_trees_with(self.n, e, workers)?;
        let cells = par::map(workers, &trees, |t| (self.cone(t), Z::from(1)));
        Ok(WeightedComplex::from_cells(self.dim(), e, cells, workers)?.with_lattice_basis(self.lattice_basis.clone()))
    }

    pub fn fan(&self, workers: Workers) -> Result<WeightedComplex> {
        self.skeleton(self.n - 3, workers)
    }

    pub fn locator(&self, workers: Workers) -> Result<ConeLocator> {
        ConeLocator::new(self, workers)
    }
}

pub fn moduli_fan(n: usize, workers: Workers) -> Result<WeightedComplex> {
    ModuliSpace::new(n)?.fan(workers)
}

/// `ψ_i`: cones whose tree carries leaf `i` at a 4-valent vertex, weight 1.
pub fn psi_class(n: usize, i: usize, workers: Workers) -> Result<WeightedComplex> {
    if i == 0 || i > n {
        return Err(Error::Param(format!("leaf {i} outside 1..={n}")));
    }
    let space = ModuliSpace::new(n)?;
    let trees = enumerate_trees_with(n, n - 4, workers)?;
    let cells: Vec<(Cell, Z)> = trees
        .iter()
        .filter(|t| {
            let vs = t.vertices();
            let lv = t.leaf_vertices()[i - 1];
            vs[lv].valence() >= 4
        })
        .map(|t| (space.cone(t), Z::from(1)))
        .collect();
    Ok(WeightedComplex::from_cells(space.dim(), n - 4, cells, workers)?.with_lattice_basis(space.lattice_basis.clone()))
}

/// Finds the minimal cone of `M_{0,n}` containing a point, by expanding the
/// point in the rays of each maximal cone.
#[derive(Clone, Debug)]
pub struct ConeLocator {
    pub trees: Vec<MarkedTree>,
    rays: Vec<Vec<QVector>>,
    left_inverses: Vec<Vec<Vec<Q>>>,
}

fn left_inverse(cols: &[QVector]) -> Vec<Vec<Q>> {
    // rows i of (R^T R)^{-1} R^T
    let k = cols.len();
    let gram: Vec<Vec<Q>> = (0..k).map(|i| (0..k).map(|j| cols[i].dot(&cols[j])).collect()).collect();
    let mut aug: Vec<Vec<Q>> = (0..k)
        .map(|i| {
            let mut row = gram[i].clone();
            row.extend((0..k).map(|j| if i == j { Q::from_integer(1.into()) } else { Q::zero() }));
            row
        })
        .collect();
    rref(&mut aug, 2 * k);
    let ginv: Vec<Vec<Q>> = aug.into_iter().map(|r| r[k..].to_vec()).collect();
    let m = cols.first().map_or(0, |c| c.dim());
    (0..k).map(|i| (0..m).map(|t| (0..k).fold(Q::zero(), |a, j| a + &ginv[i][j] * &cols[j][t])).collect()).collect()
}

impl ConeLocator {
    pub fn new(space: &ModuliSpace, workers: Workers) -> Result<ConeLocator> {
        let trees = enumerate_trees_with(space.n, space.n - 3, workers)?;
        let rays: Vec<Vec<QVector>> = trees.iter().map(|t| t.splits.iter().map(|s| space.ray_vector(s)).collect()).collect();
        let left_inverses = par::map(workers, &rays, |r| left_inverse(r));
        Ok(ConeLocator { trees, rays, left_inverses })
    }

    /// Ray coefficients of `p` in the minimal cone containing it, as
    /// `(split, coefficient > 0)` pairs, or `None` if `p` is outside the fan.
    pub fn locate(&self, p: &QVector) -> Option<Vec<(Split, Q)>> {
        for ((t, rays), li) in self.trees.iter().zip(&self.rays).zip(&self.left_inverses) {
            let c: Vec<Q> = li.iter().map(|row| dot(row, &p.0)).collect();
            if c.iter().any(|x| x.is_negative()) {
                continue;
            }
            let mut back = QVector::zeros(p.dim());
            for (r, x) in rays.iter().zip(&c) {
                back = &back + &r.scale(x);
            }
            if &back == p {
                return Some(t.splits.iter().copied().zip(c).filter(|(_, x)| !x.is_zero()).collect());
            }
        }
        None
    }

    /// Rows express a point of maximal cone `cone` in its ray coordinates.
    pub fn left_inverse(&self, cone: usize) -> &[Vec<Q>] {
        &self.left_inverses[cone]
    }

    /// The linear functional of a maximal cone giving the coefficient of `v_s`
    /// (zero if `s` is not a ray of the cone).
    pub fn coefficient_functional(&self, cone: usize, s: &Split) -> QVector {
        match self.trees[cone].splits.iter().position(|t| t == s) {
            Some(i) => QVector(self.left_inverses[cone][i].clone()),
            None => QVector::zeros(self.rays[cone].first().map_or(0, |r| r.dim())),
        }
    }

    /// Index of a maximal cone containing the cell (through a relative
    /// interior point).
    pub fn cone_containing(&self, cell: &Cell) -> Option<usize> {
        let p = cell.relative_interior_point();
        let found = self.locate(&p)?;
        self.trees.iter().position(|t| found.iter().all(|(s, _)| t.splits.contains(s)))
    }

    /// Whether a point (or direction) lies in maximal cone `cone`.
    pub fn cone_contains(&self, cone: usize, p: &QVector) -> bool {
        let c: Vec<Q> = self.left_inverses[cone].iter().map(|row| dot(row, &p.0)).collect();
        if c.iter().any(|x| x.is_negative()) {
            return false;
        }
        let mut back = QVector::zeros(p.dim());
        for (r, x) in self.rays[cone].iter().zip(&c) {
            back = &back + &r.scale(x);
        }
        &back == p
    }

    /// `φ_s` restricted to a cell, which must lie in a single cone of the fan.
    pub fn phi_on(&self, s: &Split, cell: &Cell) -> Result<AffineFn> {
        let outside = || Error::Carrier("cell is not contained in a cone of the moduli fan".into());
        let cone = self.cone_containing(cell).ok_or_else(outside)?;
        let inside = cell.lineality.is_empty()
            && cell.vertices.iter().chain(&cell.rays).all(|g| self.cone_contains(cone, g));
        if !inside {
            return Err(outside());
        }
        Ok(AffineFn::linear(self.coefficient_functional(cone, s)))
    }
}

/// `φ_s`: value 1 on `v_s`, 0 on every other ray, linear on each cone.
pub fn phi_function(s: &Split, n: usize, workers: Workers) -> Result<PiecewiseLinearFn> {
    let space = ModuliSpace::new(n)?;
    let locator = space.locator(workers)?;
    let fan = space.fan(workers)?;
    PiecewiseLinearFn::from_cells(fan, |c| locator.phi_on(s, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{q, qf};
    use crate::polyhedra::check_balancing;

    #[test]
    fn splits_are_canonical() {
        let a = Split::new(&[1, 2], 4).unwrap();
        let b = Split::new(&[3, 4], 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.elements(), vec![1, 2]);
        assert!(Split::new(&[1], 4).is_err());
        assert!(Split::new(&[1, 2, 3], 4).is_err());
        assert_eq!(Split::all(4).len(), 3);
        assert_eq!(Split::all(6).len(), 25);
    }

    #[test]
    fn tree_counts() {
        assert_eq!(enumerate_trees(4, 1).unwrap().len(), 3);
        assert_eq!(enumerate_trees(5, 2).unwrap().len(), 15);
        assert_eq!(enumerate_trees(6, 3).unwrap().len(), 105);
        assert_eq!(enumerate_trees(7, 4).unwrap().len(), 945);
        assert!(enumerate_trees(5, 3).is_err());
        let par = enumerate_trees_with(6, 3, Workers(3)).unwrap();
        assert_eq!(par, enumerate_trees(6, 3).unwrap());
    }

    #[test]
    fn tree_structure() {
        let t = MarkedTree::from_subsets(6, &[&[1, 2], &[1, 2, 3], &[1, 2, 3, 4]]).unwrap();
        assert!(t.is_trivalent());
        assert_eq!(t.valences(), vec![3, 3, 3, 3]);
        assert_eq!(t.parents(), vec![2, 3, 0]);
        assert_eq!(t.leaf_vertices(), vec![1, 1, 2, 3, 0, 0]);
        assert_eq!(t.path(1, 0).len(), 3);
        assert_eq!(t.path(1, 2), vec![0]);
        assert!(MarkedTree::from_subsets(5, &[&[1, 2], &[2, 3]]).is_err());
    }

    #[test]
    fn quotient_dimension_and_rays() {
        let s6 = ModuliSpace::new(6).unwrap();
        assert_eq!(s6.dim(), 9);
        let s4 = ModuliSpace::new(4).unwrap();
        assert_eq!(s4.raw_ray(&Split::new(&[1, 2], 4).unwrap()), vec![q(0), q(1), q(1), q(1), q(1), q(0)]);
        let sum = Split::all(4).iter().fold(QVector::zeros(1), |a, s| &a + &s4.ray_vector(s));
        assert!(sum.is_zero());
    }

    #[test]
    fn rays_are_integral_in_lattice_coordinates() {
        let s = ModuliSpace::new(6).unwrap();
        for sp in Split::all(6) {
            let v = s.ray_vector(&sp);
            assert!(v.to_integers().is_some());
            assert_eq!(s.to_quotient(&v), s.ray_quotient_vector(&sp));
        }
    }

    #[test]
    fn metric_vector_matches_distances() {
        let s = ModuliSpace::new(5).unwrap();
        let t = MarkedTree::from_subsets(5, &[&[1, 2], &[3, 4]]).unwrap();
        let mt = MetricTree::new(t, vec![q(1), qf(1, 2)]).unwrap();
        assert_eq!(s.to_quotient(&s.metric_vector(&mt)), s.quotient(&s.raw_metric(&mt)));
        assert_eq!(mt.distance(1, 3), qf(3, 2));
        assert!(MetricTree::new(mt.tree.clone(), vec![q(0), q(1)]).is_err());
    }

    #[test]
    fn moduli_fans_are_balanced() {
        for n in 4..=6 {
            let f = moduli_fan(n, Workers(1)).unwrap();
            assert!(check_balancing(&f, Workers(1)).unwrap().balanced, "n = {n}");
        }
        let f5 = moduli_fan(5, Workers(1)).unwrap();
        assert_eq!(f5.num_maximal(), 15);
        assert_eq!(f5.cells.len() - f5.num_maximal(), 10);
    }

    #[test]
    fn psi_classes() {
        let p4 = psi_class(4, 1, Workers(1)).unwrap();
        assert_eq!(p4.num_maximal(), 1);
        let p5 = psi_class(5, 5, Workers(1)).unwrap();
        assert_eq!(p5.num_maximal(), 6);
        let s = ModuliSpace::new(5).unwrap();
        for (c, _) in p5.maximal_cells() {
            let sp = Split::all(5).into_iter().find(|sp| s.cone(&MarkedTree::new(5, vec![*sp]).unwrap()) == *c).unwrap();
            assert_eq!(sp.len(), 2);
        }
    }

    #[test]
    fn phi_values() {
        let s = ModuliSpace::new(5).unwrap();
        let v12 = Split::new(&[1, 2], 5).unwrap();
        let v13 = Split::new(&[1, 3], 5).unwrap();
        let v34 = Split::new(&[3, 4], 5).unwrap();
        let phi = phi_function(&v12, 5, Workers(1)).unwrap();
        assert!(phi.is_continuous());
        assert_eq!(phi.eval(&s.ray_vector(&v12)), Some(q(1)));
        assert_eq!(phi.eval(&s.ray_vector(&v13)), Some(q(0)));
        let c = &s.ray_vector(&v12) + &s.ray_vector(&v34).scale(&qf(1, 2));
        assert_eq!(phi.eval(&c), Some(q(1)));
    }

    #[test]
    fn locate_points() {
        let s = ModuliSpace::new(5).unwrap();
        let loc = s.locator(Workers(1)).unwrap();
        let v12 = Split::new(&[1, 2], 5).unwrap();
        let v34 = Split::new(&[3, 4], 5).unwrap();
        let c = &s.ray_vector(&v12) + &s.ray_vector(&v34).scale(&qf(1, 2));
        assert_eq!(loc.locate(&c).unwrap(), vec![(v12, q(1)), (v34, qf(1, 2))]);
        assert_eq!(loc.locate(&QVector::zeros(5)).unwrap(), vec![]);
    }
}
