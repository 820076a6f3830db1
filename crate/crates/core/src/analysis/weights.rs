use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{primitive_direction, rational_kernel, rational_kernel_q, ZMatrix, Q, Z};
use crate::par::{self, Workers};
use crate::polyhedra::{check_balancing, ops::face_normals, WeightedComplex};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Irreducible,
    WeaklyIrreducible,
    Reducible,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Irreducible => "irreducible",
            Verdict::WeaklyIrreducible => "weakly irreducible",
            Verdict::Reducible => "reducible",
        }
    }
}

/// The lattice `Ω_X` of weight functions on the maximal cells of `X` that
/// make it balanced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSpaceResult {
    pub rank: usize,
    /// Primitive integer vectors indexed like `maximal`.
    pub basis: Vec<Vec<Z>>,
    pub gcd_of_given_weights: Z,
    pub verdict: Verdict,
}

/// Integer linear system of all local balancing conditions: one row per
/// codimension-one cell `τ` and per functional vanishing on `V_τ`.
pub fn balancing_equations(x: &WeightedComplex, workers: Workers) -> Result<ZMatrix> {
    let m = x.num_maximal();
    let normals = face_normals(x, workers)?;
    let blocks = par::map(workers, &normals, |(tau, ns)| {
        let span = x.cells[*tau].span();
        let annihilator = rational_kernel_q(&span, x.ambient_dim).basis;
        annihilator
            .iter()
            .filter_map(|a| {
                let a: Vec<Q> = a.iter().cloned().map(Q::from_integer).collect();
                let mut row = vec![Q::zero(); m];
                for (p, u) in ns {
                    row[*p] += crate::linalg::dot(&a, &u.0);
                }
                let ints = primitive_direction(&row);
                (!ints.iter().all(|v| v.is_zero())).then_some(ints)
            })
            .collect::<Vec<Vec<Z>>>()
    });
    let mut rows: Vec<Vec<Z>> = blocks.into_iter().flatten().collect();
    rows.sort();
    rows.dedup();
    ZMatrix::from_rows(m, rows)
}

pub fn weight_space(x: &WeightedComplex, workers: Workers) -> Result<WeightSpaceResult> {
    if !check_balancing(x, workers)?.balanced {
        return Err(Error::Unbalanced("weight space of an unbalanced complex".into()));
    }
    let eqs = balancing_equations(x, workers)?;
    let kernel = rational_kernel(&eqs);
    let rank = kernel.basis.len();
    let g = x.weights.iter().fold(Z::zero(), |a, w| a.gcd(w));
    let verdict = match (rank, g == Z::from(1)) {
        (1, true) => Verdict::Irreducible,
        (1, false) => Verdict::WeaklyIrreducible,
        _ => Verdict::Reducible,
    };
    Ok(WeightSpaceResult { rank, basis: kernel.basis, gcd_of_given_weights: g, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::QVector;
    use crate::moduli::moduli_fan;
    use crate::polyhedra::Cell;

    #[test]
    fn tropical_line_is_irreducible() {
        let cells = [[1, 0], [0, 1], [-1, -1]].iter().map(|r| {
            (Cell::new(vec![QVector::zeros(2)], vec![QVector::from_ints(r.iter().copied())], vec![]).unwrap(), Z::from(2))
        });
        let x = WeightedComplex::from_cells(2, 1, cells, Workers(1)).unwrap();
        let r = weight_space(&x, Workers(1)).unwrap();
        assert_eq!(r.rank, 1);
        assert_eq!(r.basis, vec![vec![Z::from(1); 3]]);
        assert_eq!(r.gcd_of_given_weights, Z::from(2));
        assert_eq!(r.verdict, Verdict::WeaklyIrreducible);
    }

    #[test]
    fn moduli_fans_are_irreducible() {
        for n in 4..=6 {
            let r = weight_space(&moduli_fan(n, Workers(1)).unwrap(), Workers(1)).unwrap();
            assert_eq!(r.verdict, Verdict::Irreducible, "n = {n}");
        }
    }
}
