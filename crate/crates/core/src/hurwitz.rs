//! Tropical double Hurwitz cycles, marked and unmarked, computed cone by cone
//! in `M_{0,n}`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::covers::{orient, Cover, RamificationData};
use crate::error::{Error, Result};
use crate::linalg::{gcd_maximal_minors, QVector, ZMatrix, Q, Z};
use crate::moduli::{enumerate_trees_with, MarkedTree, ModuliSpace, Split};
use crate::par::{self, Workers};
use crate::polyhedra::{recession_fan, split_cell, Cell, HPoly, WeightedComplex};

/// `x`, the cycle dimension `k`, and the points `p_0 <= ... <= p_{N-1}`,
/// `N = n - 2 - k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HurwitzParams {
    pub x: RamificationData,
    pub k: usize,
    pub p: Vec<Q>,
}

impl HurwitzParams {
    pub fn new(x: RamificationData, k: usize, p: Vec<Q>) -> Result<Self> {
        let n = x.n();
        if n < 4 || k + 3 > n {
            return Err(Error::Param(format!("k = {k} outside 0..={}", n.saturating_sub(3))));
        }
        let big_n = n - 2 - k;
        if p.len() != big_n {
            return Err(Error::Param(format!("expected {big_n} points p, got {}", p.len())));
        }
        if p.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Param("points p must be sorted".into()));
        }
        Ok(HurwitzParams { x, k, p })
    }

    /// All `p_i = 0`.
    pub fn zeros(x: RamificationData, k: usize) -> Result<Self> {
        let big_n = (x.n() as isize - 2 - k as isize).max(0) as usize;
        Self::new(x, k, vec![Q::zero(); big_n])
    }

    /// `p = (0, 1, ..., N - 1)`.
    pub fn generic(x: RamificationData, k: usize) -> Result<Self> {
        let big_n = (x.n() as isize - 2 - k as isize).max(0) as usize;
        Self::new(x, k, (0..big_n).map(|i| Q::from_integer((i as i64).into())).collect())
    }

    pub fn n(&self) -> usize {
        self.x.n()
    }

    pub fn num_points(&self) -> usize {
        self.p.len()
    }
}

/// How each maximal cone is subdivided before its `k`-cells are collected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Refinement {
    /// Keep the cell of each vertex choice whole.
    None,
    /// Cut along the walls `ev_i = p_i`, `i >= 1`, of the evaluation maps of
    /// every vertex choice, i.e. along `h(v) - h(w) = p_i - p_0`.
    #[default]
    EvaluationWalls,
}

#[derive(Clone, Debug, Default)]
pub struct HurwitzOptions {
    pub workers: Workers,
    pub refinement: Refinement,
    /// Only use this maximal cone of `M_{0,n}`.
    pub restrict: Option<MarkedTree>,
}

impl HurwitzOptions {
    pub fn with_workers(workers: Workers) -> Self {
        HurwitzOptions { workers, ..Default::default() }
    }
}

/// One stratum of the marked cycle inside a maximal cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedCell {
    pub tree: MarkedTree,
    /// Vertices `q_0, ..., q_{N-1}` mapped to `p_0, ..., p_{N-1}`.
    pub choice: Vec<usize>,
    /// The cell in edge-length coordinates.
    pub region: Cell,
    /// Rows `(1, H_{q_i} - H_{q_0})` in (translation, edge length) coordinates.
    pub evaluation: ZMatrix,
    pub weight: Z,
}

impl MarkedCell {
    /// Defining equations `(H_{q_i} - H_{q_0}) . l = p_i - p_0`, `i >= 1`.
    pub fn equations(&self, p: &[Q]) -> Vec<(Vec<Z>, Q)> {
        (1..self.evaluation.nrows())
            .map(|i| (self.evaluation.row(i)[1..].to_vec(), &p[i] - &p[0]))
            .collect()
    }
}

fn ordered_choices(nv: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(nv: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in 0..nv {
            if !cur.contains(&v) {
                cur.push(v);
                rec(nv, len, cur, out);
                cur.pop();
            }
        }
    }
    rec(nv, len, &mut cur, &mut out);
    out
}

fn to_q(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&a| Q::from_integer(a.into())).collect()
}

/// The marked cells of one trivalent cone. Ties in `p` are resolved by the
/// perturbation `p_i -> p_i + i * eps`, `eps -> 0+`.
pub fn marked_cells_in_cone(params: &HurwitzParams, tree: &MarkedTree) -> Result<Vec<MarkedCell>> {
    if !tree.is_trivalent() || tree.n != params.n() {
        return Err(Error::Param("marked cells are computed in maximal cones of M_{0,n}".into()));
    }
    let cover = orient(tree, &params.x)?;
    let heights = cover.height_functionals();
    let d = tree.num_edges();
    let big_n = params.num_points();
    let mut out = Vec::new();
    for choice in ordered_choices(tree.num_vertices(), big_n) {
        let q0 = choice[0];
        let rows: Vec<Vec<Z>> = choice
            .iter()
            .map(|&q| {
                let mut r = vec![Z::from(1)];
                r.extend(heights[q].iter().zip(&heights[q0]).map(|(a, b)| Z::from(a - b)));
                r
            })
            .collect();
        let evaluation = ZMatrix::from_rows(d + 1, rows)?;
        let g = gcd_maximal_minors(&evaluation)?;
        if g.is_zero() {
            continue;
        }
        let mut poly = HPoly::orthant(d);
        let mut perturb = Vec::with_capacity(big_n.saturating_sub(1));
        for (i, &q) in choice.iter().enumerate().skip(1) {
            let diff: Vec<i64> = heights[q].iter().zip(&heights[q0]).map(|(a, b)| a - b).collect();
            poly = poly.with_eq(to_q(&diff), &params.p[i] - &params.p[0]);
            perturb.push(Q::from_integer((i as i64).into()));
        }
        let Some(v) = poly.vrep_perturbed(&perturb) else { continue };
        if v.affine_dim() != params.k {
            continue;
        }
        let region = Cell::new(
            v.vertices.into_iter().map(QVector).collect(),
            v.rays.into_iter().map(QVector).collect(),
            v.lineality.into_iter().map(QVector).collect(),
        )?;
        out.push(MarkedCell { tree: tree.clone(), choice, region, evaluation, weight: g });
    }
    Ok(out)
}

fn refinement_hyperplanes(mode: Refinement, cover: &Cover, p: &[Q]) -> Vec<(Vec<Q>, Q)> {
    if mode == Refinement::None {
        return Vec::new();
    }
    let heights = cover.height_functionals();
    let mut walls: Vec<Q> = p.iter().skip(1).map(|x| x - &p[0]).collect();
    walls.dedup();
    let mut out = Vec::new();
    for (i, a) in heights.iter().enumerate() {
        for b in &heights[i + 1..] {
            let diff: Vec<i64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
            if diff.iter().all(|&t| t == 0) {
                continue;
            }
            for l in &walls {
                out.push((to_q(&diff), l.clone()));
                if !l.is_zero() {
                    out.push((to_q(&diff), -l.clone()));
                }
            }
        }
    }
    out
}

fn ray_matrix(space: &ModuliSpace, splits: &[Split]) -> Vec<Vec<Q>> {
    let cols: Vec<QVector> = splits.iter().map(|s| space.ray_vector(s)).collect();
    (0..space.dim()).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
}

fn cones(params: &HurwitzParams, opts: &HurwitzOptions) -> Result<Vec<MarkedTree>> {
    match &opts.restrict {
        Some(t) => {
            if t.n != params.n() || !t.is_trivalent() {
                return Err(Error::Param(format!("{t} is not a maximal cone of M_0,{}", params.n())));
            }
            Ok(vec![t.clone()])
        }
        None => enumerate_trees_with(params.n(), params.n() - 3, opts.workers),
    }
}

/// All marked cells over the cones selected by `opts`, in cone order.
pub fn marked_cells(params: &HurwitzParams, opts: &HurwitzOptions) -> Result<Vec<MarkedCell>> {
    let trees = cones(params, opts)?;
    let parts = par::map(opts.workers, &trees, |t| marked_cells_in_cone(params, t));
    let mut out = Vec::new();
    for part in parts {
        out.extend(part?);
    }
    Ok(out)
}

fn merge(parts: Vec<Result<Vec<(Cell, Z)>>>) -> Result<Vec<(Cell, Z)>> {
    let mut acc: BTreeMap<Cell, Z> = BTreeMap::new();
    for part in parts {
        for (c, w) in part? {
            *acc.entry(c).or_insert_with(Z::zero) += w;
        }
    }
    Ok(acc.into_iter().collect())
}

/// `ℍ_k(x, p)` in lattice coordinates of `M_{0,n}`.
pub fn hurwitz_cycle(params: &HurwitzParams, opts: &HurwitzOptions) -> Result<WeightedComplex> {
    let space = ModuliSpace::new(params.n())?;
    let trees = cones(params, opts)?;
    let parts = par::map(opts.workers, &trees, |t| -> Result<Vec<(Cell, Z)>> {
        let cover = orient(t, &params.x)?;
        let rays = ray_matrix(&space, &t.splits);
        let hyper = refinement_hyperplanes(opts.refinement, &cover, &params.p);
        let mut out = Vec::new();
        for mc in marked_cells_in_cone(params, t)? {
            for piece in split_cell(&mc.region, &hyper)? {
                out.push((piece.map_linear(&rays)?, mc.weight.clone()));
            }
        }
        Ok(out)
    });
    let cells = merge(parts)?;
    Ok(WeightedComplex::from_cells(space.dim(), params.k, cells, opts.workers)?.with_lattice_basis(space.lattice_basis.clone()))
}

/// Splits of the `(n + N)`-marked tree obtained by attaching contracted leaf
/// `n + 1 + i` at vertex `q_i`.
pub fn marked_tree_splits(tree: &MarkedTree, choice: &[usize]) -> Result<Vec<Split>> {
    let n = tree.n;
    let total = n + choice.len();
    let parents = tree.parents();
    // vertices below each edge (on its split side)
    let below = |e: usize, v: usize| {
        let mut w = v;
        loop {
            if w == e + 1 {
                return true;
            }
            if w == 0 {
                return false;
            }
            w = parents[w - 1];
        }
    };
    tree.splits
        .iter()
        .enumerate()
        .map(|(e, s)| {
            let mut mask = s.mask();
            for (i, &q) in choice.iter().enumerate() {
                if below(e, q) {
                    mask |= 1 << (n + i);
                }
            }
            Split::from_mask(mask, total)
        })
        .collect()
}

/// `ℍ̃_k(x, p)` in lattice coordinates of `M_{0,n+N}`; the contracted ends
/// carry labels `n + 1, ..., n + N`.
pub fn marked_hurwitz_cycle(params: &HurwitzParams, opts: &HurwitzOptions) -> Result<WeightedComplex> {
    let total = params.n() + params.num_points();
    let space = ModuliSpace::new(total)?;
    let trees = cones(params, opts)?;
    let parts = par::map(opts.workers, &trees, |t| -> Result<Vec<(Cell, Z)>> {
        let mut out = Vec::new();
        for mc in marked_cells_in_cone(params, t)? {
            let rays = ray_matrix(&space, &marked_tree_splits(t, &mc.choice)?);
            out.push((mc.region.map_linear(&rays)?, mc.weight.clone()));
        }
        Ok(out)
    });
    let cells = merge(parts)?;
    Ok(WeightedComplex::from_cells(space.dim(), params.k, cells, opts.workers)?.with_lattice_basis(space.lattice_basis.clone()))
}

/// `ℍ_k(x)`: the cycle for `p = 0`.
pub fn hurwitz_fan(k: usize, x: &RamificationData, opts: &HurwitzOptions) -> Result<WeightedComplex> {
    hurwitz_cycle(&HurwitzParams::zeros(x.clone(), k)?, opts)
}

/// `ℍ_k(x)` computed as the recession fan of `ℍ_k(x, (0, 1, ..., N - 1))`.
pub fn hurwitz_fan_via_recession(k: usize, x: &RamificationData, opts: &HurwitzOptions) -> Result<WeightedComplex> {
    let cycle = hurwitz_cycle(&HurwitzParams::generic(x.clone(), k)?, opts)?;
    recession_fan(&cycle, opts.workers)
}

/// `ℍ̃_k(x)`: the marked cycle for `p = 0`.
pub fn marked_hurwitz_fan(k: usize, x: &RamificationData, opts: &HurwitzOptions) -> Result<WeightedComplex> {
    marked_hurwitz_cycle(&HurwitzParams::zeros(x.clone(), k)?, opts)
}
