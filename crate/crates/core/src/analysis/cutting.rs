use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::covers::{orient, vertex_images, RamificationData};
use crate::error::{Error, Result};
use crate::linalg::{QVector, Q, Z};
use crate::moduli::{MetricTree, ModuliSpace};
use crate::par::{self, Workers};
use crate::polyhedra::{divisor, split_cell, AffineFn, Cell, PiecewiseLinearFn, WeightedComplex};

/// `sum_{i<j} (val(v_i) - 2)(val(v_j) - 2) |h(v_i) - h(v_j)|` over unordered
/// pairs of vertices of the cover induced by `x` on the metric tree.
pub fn distance_sum_value(x: &RamificationData, t: &MetricTree) -> Result<Q> {
    let cover = orient(&t.tree, x)?;
    let h = vertex_images(&cover, &t.lengths, 0, &Q::zero())?;
    let val: Vec<i64> = t.tree.valences().iter().map(|&v| v as i64 - 2).collect();
    let mut total = Q::zero();
    for i in 0..h.len() {
        for j in (i + 1)..h.len() {
            total += Q::from_integer((val[i] * val[j]).into()) * (&h[i] - &h[j]).abs();
        }
    }
    Ok(total)
}

/// The distance-sum function on `M_{0,n}`, affine on the refinement of each
/// maximal cone by the loci where two vertices have equal image.
pub fn distance_sum_function(x: &RamificationData, workers: Workers) -> Result<PiecewiseLinearFn> {
    let n = x.n();
    let space = ModuliSpace::new(n)?;
    let locator = space.locator(workers)?;
    let idx: Vec<usize> = (0..locator.trees.len()).collect();
    let parts = par::map(workers, &idx, |&c| -> Result<Vec<(Cell, AffineFn)>> {
        let tree = &locator.trees[c];
        let d = tree.num_edges();
        let cover = orient(tree, x)?;
        let heights = cover.height_functionals();
        let val: Vec<i64> = tree.valences().iter().map(|&v| v as i64 - 2).collect();
        let origin = QVector::zeros(d);
        let units = (0..d)
            .map(|i| {
                let mut v = QVector::zeros(d);
                v[i] = Q::from_integer(1.into());
                v
            })
            .collect();
        let orthant = Cell::new(vec![origin], units, vec![])?;
        let mut diffs = Vec::new();
        for i in 0..heights.len() {
            for j in (i + 1)..heights.len() {
                let diff: Vec<Q> =
                    heights[i].iter().zip(&heights[j]).map(|(a, b)| Q::from_integer((a - b).into())).collect();
                if diff.iter().any(|t| !t.is_zero()) {
                    diffs.push((diff, Q::from_integer((val[i] * val[j]).into())));
                }
            }
        }
        let hyper: Vec<(Vec<Q>, Q)> = diffs.iter().map(|(d, _)| (d.clone(), Q::zero())).collect();
        let rays: Vec<QVector> = tree.splits.iter().map(|s| space.ray_vector(s)).collect();
        let rows: Vec<Vec<Q>> = (0..space.dim()).map(|i| rays.iter().map(|r| r[i].clone()).collect()).collect();
        let linv = locator.left_inverse(c);
        let mut out = Vec::new();
        for piece in split_cell(&orthant, &hyper)? {
            let p = piece.relative_interior_point();
            let mut f = vec![Q::zero(); d];
            for (diff, coef) in &diffs {
                let s = crate::linalg::dot(diff, &p.0);
                let sign = if s.is_negative() { -coef.clone() } else { coef.clone() };
                for (fe, de) in f.iter_mut().zip(diff) {
                    *fe += &sign * de;
                }
            }
            let mut lin = QVector::zeros(space.dim());
            for (fe, row) in f.iter().zip(linv) {
                lin = &lin + &QVector(row.clone()).scale(fe);
            }
            out.push((piece.map_linear(&rows)?, AffineFn::linear(lin)));
        }
        Ok(out)
    });
    let mut pieces: BTreeMap<Cell, AffineFn> = BTreeMap::new();
    for part in parts {
        for (c, f) in part? {
            pieces.insert(c, f);
        }
    }
    let cells: Vec<(Cell, Z)> = pieces.keys().map(|c| (c.clone(), Z::from(1))).collect();
    let carrier = WeightedComplex::from_cells(space.dim(), n - 3, cells, workers)?.with_lattice_basis(space.lattice_basis.clone());
    PiecewiseLinearFn::from_cells(carrier, |c| {
        pieces.get(c).cloned().ok_or_else(|| Error::Carrier("piece without affine data".into()))
    })
}

/// The divisor of the distance-sum function on `M_{0,n}`.
pub fn cut_codim_one(x: &RamificationData, workers: Workers) -> Result<WeightedComplex> {
    divisor(&distance_sum_function(x, workers)?, workers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{q, qf};
    use crate::moduli::MarkedTree;

    fn x5() -> RamificationData {
        RamificationData::new(vec![1, 1, 1, 1, -4]).unwrap()
    }

    #[test]
    fn value_at_two_edge_curve() {
        let t = MarkedTree::from_subsets(5, &[&[1, 2], &[3, 4]]).unwrap();
        let c = MetricTree::new(t, vec![q(1), qf(1, 2)]).unwrap();
        assert_eq!(distance_sum_value(&x5(), &c).unwrap(), q(4));
    }

    #[test]
    fn value_is_homogeneous_and_zero_at_origin() {
        let origin = MetricTree::new(MarkedTree::new(5, vec![]).unwrap(), vec![]).unwrap();
        assert_eq!(distance_sum_value(&x5(), &origin).unwrap(), q(0));
        let t = MarkedTree::from_subsets(5, &[&[1, 3], &[1, 2, 3]]).unwrap();
        let a = MetricTree::new(t.clone(), vec![q(1), qf(2, 3)]).unwrap();
        let b = MetricTree::new(t, vec![q(3), q(2)]).unwrap();
        assert_eq!(distance_sum_value(&x5(), &b).unwrap(), q(3) * distance_sum_value(&x5(), &a).unwrap());
    }

    #[test]
    fn function_matches_closed_form() {
        let f = distance_sum_function(&x5(), Workers(1)).unwrap();
        assert!(f.is_continuous());
        let space = ModuliSpace::new(5).unwrap();
        let t = MarkedTree::from_subsets(5, &[&[1, 2], &[3, 4]]).unwrap();
        let c = MetricTree::new(t, vec![q(1), qf(1, 2)]).unwrap();
        assert_eq!(f.eval(&space.metric_vector(&c)), Some(q(4)));
    }
}
