use num_traits::{One, Zero};

use super::cell::Cell;
use super::complex::WeightedComplex;
use super::ops::{check_balancing, face_normals};
use crate::error::{Error, Result};
use crate::linalg::{QVector, Q, Z};
use crate::par::Workers;

/// `x -> linear . x + constant`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineFn {
    pub linear: QVector,
    pub constant: Q,
}

impl AffineFn {
    pub fn linear(linear: QVector) -> Self {
        AffineFn { linear, constant: Q::zero() }
    }

    pub fn eval(&self, p: &QVector) -> Q {
        self.linear.dot(p) + &self.constant
    }

    pub fn eval_dir(&self, v: &QVector) -> Q {
        self.linear.dot(v)
    }
}

/// A function that is affine on each maximal cell of its carrier.
#[derive(Clone, Debug)]
pub struct PiecewiseLinearFn {
    pub carrier: WeightedComplex,
    /// Aligned with `carrier.maximal`.
    pub pieces: Vec<AffineFn>,
}

impl PiecewiseLinearFn {
    pub fn new(carrier: WeightedComplex, pieces: Vec<AffineFn>) -> Result<Self> {
        if pieces.len() != carrier.num_maximal() {
            return Err(Error::Carrier("one affine piece per maximal cell required".into()));
        }
        Ok(PiecewiseLinearFn { carrier, pieces })
    }

    pub fn from_cells<F>(carrier: WeightedComplex, mut f: F) -> Result<Self>
    where
        F: FnMut(&Cell) -> Result<AffineFn>,
    {
        let pieces = carrier.maximal_cells().map(|(c, _)| f(c)).collect::<Result<Vec<_>>>()?;
        Ok(PiecewiseLinearFn { carrier, pieces })
    }

    pub fn eval(&self, p: &QVector) -> Option<Q> {
        self.carrier
            .maximal_cells()
            .zip(&self.pieces)
            .find(|((c, _), _)| c.contains(p))
            .map(|(_, a)| a.eval(p))
    }

    /// Whether neighbouring pieces agree on every shared facet.
    pub fn is_continuous(&self) -> bool {
        for (tau, parents) in self.carrier.codim_one_adjacency() {
            let t = &self.carrier.cells[tau];
            let a0 = &self.pieces[parents[0]];
            for &p in &parents[1..] {
                let a = &self.pieces[p];
                if t.vertices.iter().any(|v| a.eval(v) != a0.eval(v))
                    || t.rays.iter().chain(&t.lineality).any(|r| a.eval_dir(r) != a0.eval_dir(r))
                {
                    return false;
                }
            }
        }
        true
    }
}

/// The divisor of `phi` on its (balanced) carrier. Balancing of the result
/// is verified before zero-weight cells are pruned.
pub fn divisor(phi: &PiecewiseLinearFn, workers: Workers) -> Result<WeightedComplex> {
    let x = &phi.carrier;
    if x.dim == 0 {
        return Err(Error::Dimension("divisor on a 0-dimensional cycle".into()));
    }
    let normals = face_normals(x, workers)?;
    let mut cells = Vec::with_capacity(normals.len());
    for (tau, ns) in normals {
        let mut sum = QVector::zeros(x.ambient_dim);
        let mut value = Q::zero();
        for (p, u) in &ns {
            let w = Q::from_integer(x.weights[*p].clone());
            value += &w * phi.pieces[*p].eval_dir(u);
            sum = &sum + &u.scale(&w);
        }
        let t = &x.cells[tau];
        let mut span = t.span();
        let dim_t = span.len();
        span.push(sum.0.clone());
        if crate::linalg::rank_q(&span, x.ambient_dim) != dim_t {
            return Err(Error::Unbalanced("carrier is not balanced at a codimension-one cell".into()));
        }
        value -= phi.pieces[ns[0].0].eval_dir(&sum);
        if !value.denom().is_one() {
            return Err(Error::Carrier("function has non-integral slopes on the carrier lattice".into()));
        }
        cells.push((t.clone(), value.to_integer()));
    }
    let out = WeightedComplex::from_cells_unpruned(x.ambient_dim, x.dim - 1, cells, workers)?
        .with_lattice_basis(x.lattice_basis.clone());
    if out.dim > 0 && !check_balancing(&out, workers)?.balanced {
        return Err(Error::Unbalanced("divisor is not balanced".into()));
    }
    out.pruned(workers)
}

/// Sum of weights times a scalar; convenience for integer-weight bookkeeping.
pub fn total_weight(x: &WeightedComplex) -> Z {
    x.weights.iter().fold(Z::zero(), |a, w| a + w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn tropical_line() -> WeightedComplex {
        let cells = [[1, 0], [0, 1], [-1, -1]].iter().map(|r| {
            (Cell::new(vec![QVector::zeros(2)], vec![QVector::from_ints(r.iter().copied())], vec![]).unwrap(), Z::one())
        });
        WeightedComplex::from_cells(2, 1, cells, Workers(1)).unwrap()
    }

    #[test]
    fn linear_function_has_zero_divisor() {
        let x = tropical_line();
        let f = PiecewiseLinearFn::from_cells(x, |_| Ok(AffineFn::linear(QVector::from_ints([2, -3])))).unwrap();
        assert!(f.is_continuous());
        let d = divisor(&f, Workers(1)).unwrap();
        assert_eq!(d.num_maximal(), 0);
    }

    #[test]
    fn max_function_on_line() {
        // max(x, y, 0) restricted to the tropical line: 1 on (1,0), 1 on (0,1), 0 on (-1,-1)
        let x = tropical_line();
        let f = PiecewiseLinearFn::from_cells(x, |c| {
            let r = &c.rays[0];
            let lin = if r[0] == q(1) {
                QVector::from_ints([1, 0])
            } else if r[1] == q(1) {
                QVector::from_ints([0, 1])
            } else {
                QVector::zeros(2)
            };
            Ok(AffineFn::linear(lin))
        })
        .unwrap();
        assert!(f.is_continuous());
        let d = divisor(&f, Workers(1)).unwrap();
        assert_eq!(d.dim, 0);
        assert_eq!(total_weight(&d), Z::from(2));
        assert_eq!(f.eval(&QVector::from_ints([3, 0])), Some(q(3)));
    }
}
