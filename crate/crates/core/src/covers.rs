//! Tropical covers of the line induced on marked trees by ramification data.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{Q, Z};
use crate::moduli::MarkedTree;

/// `x ∈ Z^n` with `sum x_i = 0`, `x != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RamificationData {
    pub x: Vec<i64>,
}

impl RamificationData {
    pub fn new(x: Vec<i64>) -> Result<Self> {
        if x.len() < 3 {
            return Err(Error::Param("ramification data needs at least three entries".into()));
        }
        if x.iter().sum::<i64>() != 0 {
            return Err(Error::Param(format!("entries of x sum to {}, not 0", x.iter().sum::<i64>())));
        }
        if x.iter().all(|&v| v == 0) {
            return Err(Error::Param("x must be nonzero".into()));
        }
        Ok(RamificationData { x })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// `sum_{i in I} x_i` over the canonical side of a split mask.
    pub fn side_sum(&self, mask: u32) -> i64 {
        self.x.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, v)| v).sum()
    }
}

/// Direction in which the image of an edge increases.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeDirection {
    /// Image increases from the vertex nearer leaf `n` towards the split side.
    TowardSplitSide,
    TowardRoot,
    /// Slope zero: the edge is contracted and carries no direction.
    Flat,
}

/// A marked tree with the slopes and orientations that `x` forces on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    pub tree: MarkedTree,
    pub x: RamificationData,
    /// `x_{I_e}` per edge: the image of the split-side endpoint minus the
    /// image of the other endpoint equals `signed_slopes[e] * length(e)`.
    pub signed_slopes: Vec<i64>,
}

impl Cover {
    pub fn slopes(&self) -> Vec<i64> {
        self.signed_slopes.iter().map(|s| s.abs()).collect()
    }

    pub fn directions(&self) -> Vec<EdgeDirection> {
        self.signed_slopes
            .iter()
            .map(|&s| match s {
                0 => EdgeDirection::Flat,
                s if s > 0 => EdgeDirection::TowardSplitSide,
                _ => EdgeDirection::TowardRoot,
            })
            .collect()
    }

    pub fn has_flat_edge(&self) -> bool {
        self.signed_slopes.contains(&0)
    }

    /// Slope conservation at every vertex (ends contribute `x_i`).
    pub fn is_balanced(&self) -> bool {
        let vs = self.tree.vertices();
        vs.iter().all(|v| {
            let leaves: i64 = v.leaves.iter().map(|&l| self.x.x[l - 1]).sum();
            let down: i64 = v.down.iter().map(|&e| self.signed_slopes[e]).sum();
            let up = v.up.map_or(0, |e| self.signed_slopes[e]);
            leaves + down == up
        })
    }

    /// Image heights of all vertices as integer functionals in the edge
    /// lengths, normalized so that vertex 0 maps to 0.
    pub fn height_functionals(&self) -> Vec<Vec<i64>> {
        let d = self.tree.num_edges();
        let parents = self.tree.parents();
        let mut h = vec![vec![0i64; d]; d + 1];
        // splits are sorted so that a parent split may come after its child;
        // resolve by depth
        let mut done = vec![false; d + 1];
        done[0] = true;
        while done.iter().any(|x| !x) {
            for e in 0..d {
                if !done[e + 1] && done[parents[e]] {
                    let mut row = h[parents[e]].clone();
                    row[e] += self.signed_slopes[e];
                    h[e + 1] = row;
                    done[e + 1] = true;
                }
            }
        }
        h
    }
}

/// The unique cover structure `x` induces on the tree.
pub fn orient(tree: &MarkedTree, x: &RamificationData) -> Result<Cover> {
    if tree.n != x.n() {
        return Err(Error::Dimension(format!("tree has {} leaves, x has {} entries", tree.n, x.n())));
    }
    let signed_slopes = tree.splits.iter().map(|s| x.side_sum(s.mask())).collect();
    Ok(Cover { tree: tree.clone(), x: x.clone(), signed_slopes })
}

/// Images of all vertices when vertex `q` maps to `alpha`.
pub fn vertex_images(c: &Cover, lengths: &[Q], q: usize, alpha: &Q) -> Result<Vec<Q>> {
    if lengths.len() != c.tree.num_edges() {
        return Err(Error::Dimension("one length per edge required".into()));
    }
    if q >= c.tree.num_vertices() {
        return Err(Error::Lookup(format!("vertex {q} not in tree")));
    }
    let h: Vec<Q> = c
        .height_functionals()
        .iter()
        .map(|row| row.iter().zip(lengths).fold(Q::zero(), |a, (&s, l)| a + Q::from_integer(s.into()) * l))
        .collect();
    let shift = alpha - &h[q];
    Ok(h.into_iter().map(|v| v + &shift).collect())
}

/// Rows `(1, H_{q_i} - H_{q_0})` of the evaluation maps in coordinates
/// `(translation, edge lengths)`, where the translation is the image of `q_0`.
pub fn evaluation_functional(c: &Cover, choice: &[usize]) -> Result<Vec<Vec<Z>>> {
    let nv = c.tree.num_vertices();
    if let Some(bad) = choice.iter().find(|&&v| v >= nv) {
        return Err(Error::Lookup(format!("vertex {bad} not in tree")));
    }
    let Some(&q0) = choice.first() else { return Ok(Vec::new()) };
    let h = c.height_functionals();
    Ok(choice
        .iter()
        .map(|&q| {
            let mut row = vec![Z::from(1)];
            row.extend(h[q].iter().zip(&h[q0]).map(|(a, b)| Z::from(a - b)));
            row
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{q, qf};
    use crate::moduli::enumerate_trees;

    fn x6() -> RamificationData {
        RamificationData::new(vec![2, 2, 6, -5, -4, -1]).unwrap()
    }

    fn chain() -> MarkedTree {
        MarkedTree::from_subsets(6, &[&[1, 2], &[4, 5, 6], &[5, 6]]).unwrap()
    }

    #[test]
    fn validation() {
        assert!(RamificationData::new(vec![1, 1, -1]).is_err());
        assert!(RamificationData::new(vec![0, 0, 0]).is_err());
    }

    #[test]
    fn slopes_of_the_chain() {
        let c = orient(&chain(), &x6()).unwrap();
        // splits in canonical order: {1,2}, {1,2,3}, {1,2,3,4}
        assert_eq!(c.slopes(), vec![4, 10, 5]);
        assert!(c.is_balanced());
        let x = RamificationData::new(vec![1, 1, 1, 1, -4]).unwrap();
        let t = MarkedTree::from_subsets(5, &[&[1, 2], &[4, 5]]).unwrap();
        assert_eq!(orient(&t, &x).unwrap().slopes(), vec![2, 3]);
    }

    #[test]
    fn flat_edges() {
        let x = RamificationData::new(vec![1, -1, 1, -1]).unwrap();
        let t = MarkedTree::from_subsets(4, &[&[1, 2]]).unwrap();
        let c = orient(&t, &x).unwrap();
        assert!(c.has_flat_edge());
        assert_eq!(c.directions(), vec![EdgeDirection::Flat]);
    }

    #[test]
    fn conservation_on_all_trees() {
        let x = RamificationData::new(vec![3, -1, 2, -2, 1, -3, 0]).unwrap();
        for e in 0..=4 {
            for t in enumerate_trees(7, e).unwrap() {
                assert!(orient(&t, &x).unwrap().is_balanced());
            }
        }
    }

    #[test]
    fn images_of_two_edge_curve() {
        let x = RamificationData::new(vec![1, 1, 1, 1, -4]).unwrap();
        let t = MarkedTree::from_subsets(5, &[&[1, 2], &[4, 5]]).unwrap();
        let c = orient(&t, &x).unwrap();
        // vertex 2 (leaf 3) is the middle vertex q
        let h = vertex_images(&c, &[qf(1, 2), qf(1, 3)], 2, &q(0)).unwrap();
        let mut sorted = h.clone();
        sorted.sort();
        assert_eq!(sorted, vec![q(-1), q(0), q(1)]);
        let flat = vertex_images(&c, &[q(0), q(0)], 0, &q(7)).unwrap();
        assert!(flat.iter().all(|v| *v == q(7)));
    }

    #[test]
    fn chain_evaluations() {
        let c = orient(&chain(), &x6()).unwrap();
        // vertices: 0 root (leaves 5,6), 3 (leaf 4), 2 (leaf 3), 1 (leaves 1,2)
        let z = |v: &[i64]| v.iter().map(|&a| Z::from(a)).collect::<Vec<Z>>();
        let ev = evaluation_functional(&c, &[0, 3]).unwrap();
        assert_eq!(ev, vec![z(&[1, 0, 0, 0]), z(&[1, 0, 0, 5])]);
        let ev = evaluation_functional(&c, &[0, 2]).unwrap();
        assert_eq!(ev[1], z(&[1, 0, 10, 5]));
        let ev = evaluation_functional(&c, &[0, 1]).unwrap();
        assert_eq!(ev[1], z(&[1, 4, 10, 5]));
        assert!(evaluation_functional(&c, &[0, 9]).is_err());
    }
}
