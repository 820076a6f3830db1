use std::collections::BTreeMap;

use num_traits::Zero;

use super::cell::{AffineFrame, Cell};
use super::complex::WeightedComplex;
use super::local::{facets, subdivide, Constraint, HPoly, VRep};
use crate::error::{Error, Result};
use crate::linalg::{primitive_direction, rank_q, saturated_lattice, solve_in_span, QVector, Q, Z};
use crate::par::{self, Workers};

/// Representative of the primitive generator of `Λ_σ / Λ_τ` pointing into σ.
/// `lattice` is a Z-basis of `Λ_σ` and τ must be a facet of σ.
pub fn lattice_normal(sigma: &Cell, lattice: &[Vec<Z>], tau: &Cell) -> Result<QVector> {
    let d: QVector = if let Some(v) = sigma.vertices.iter().find(|v| tau.vertices.binary_search(v).is_err()) {
        v - &tau.vertices[0]
    } else if let Some(r) = sigma.rays.iter().find(|r| tau.rays.binary_search(r).is_err()) {
        r.clone()
    } else {
        return Err(Error::Structure("face has the same generators as its cell".into()));
    };
    let mut cols = tau.span();
    let nt = cols.len();
    cols.push(d.0.clone());
    let mut coeffs = Vec::with_capacity(lattice.len());
    for b in lattice {
        let bq: Vec<Q> = b.iter().cloned().map(Q::from_integer).collect();
        let x = solve_in_span(&cols, &bq).ok_or_else(|| Error::Structure("lattice vector outside cell span".into()))?;
        coeffs.push(x[nt].clone());
    }
    let g = crate::linalg::gcd_rationals(&coeffs);
    if g.is_zero() {
        return Err(Error::Structure("face is not of codimension one".into()));
    }
    Ok(d.scale(&g))
}

/// Lattice bases of the maximal cells, aligned with `x.maximal`.
pub fn cell_lattices(x: &WeightedComplex, workers: Workers) -> Vec<Vec<Vec<Z>>> {
    let cells: Vec<&Cell> = x.maximal_cells().map(|(c, _)| c).collect();
    par::map(workers, &cells, |c| saturated_lattice(&c.directions(), x.ambient_dim))
}

/// For each codimension-one cell: its index and `(maximal position, lattice normal)` pairs.
pub fn face_normals(x: &WeightedComplex, workers: Workers) -> Result<Vec<(usize, Vec<(usize, QVector)>)>> {
    let lattices = cell_lattices(x, workers);
    let adj: Vec<(usize, Vec<usize>)> = x.codim_one_adjacency().into_iter().collect();
    par::map(workers, &adj, |(tau, parents)| {
        let mut normals = Vec::with_capacity(parents.len());
        for &p in parents {
            let sigma = &x.cells[x.maximal[p]];
            normals.push((p, lattice_normal(sigma, &lattices[p], &x.cells[*tau])?));
        }
        Ok((*tau, normals))
    })
    .into_iter()
    .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalancingReport {
    pub balanced: bool,
    /// Indices (into `cells`) of codimension-one cells where balancing fails.
    pub violations: Vec<usize>,
}

fn in_span(span: &[Vec<Q>], v: &QVector) -> bool {
    if v.is_zero() {
        return true;
    }
    let mut t = span.to_vec();
    t.push(v.0.clone());
    rank_q(&t, v.dim()) == rank_q(span, v.dim())
}

pub fn check_balancing(x: &WeightedComplex, workers: Workers) -> Result<BalancingReport> {
    if x.dim > 0 && x.num_maximal() > 0 && x.faces.is_empty() {
        let has_facets = x.maximal_cells().any(|(c, _)| c.lineality.len() < c.dim());
        if has_facets {
            return Err(Error::Structure("complex has no face records".into()));
        }
    }
    let normals = face_normals(x, workers)?;
    let verdicts = par::map(workers, &normals, |(tau, ns)| {
        let mut s = QVector::zeros(x.ambient_dim);
        for (p, u) in ns {
            s = &s + &u.scale(&Q::from_integer(x.weights[*p].clone()));
        }
        in_span(&x.cells[*tau].span(), &s)
    });
    let violations: Vec<usize> =
        normals.iter().zip(verdicts).filter(|(_, ok)| !ok).map(|((tau, _), _)| *tau).collect();
    Ok(BalancingReport { balanced: violations.is_empty(), violations })
}

/// The local fan of `x` at `tau`, kept in ambient coordinates with `V_τ`
/// added to the lineality of every cone.
pub fn star(x: &WeightedComplex, tau: &Cell, workers: Workers) -> Result<WeightedComplex> {
    let p = tau.relative_interior_point();
    let v_tau: Vec<QVector> = tau.span().into_iter().map(QVector).collect();
    let mut cells = Vec::new();
    for (sigma, w) in x.maximal_cells() {
        if !sigma.contains(&p) {
            continue;
        }
        let rays = sigma.vertices.iter().map(|v| v - &p).chain(sigma.rays.iter().cloned()).collect();
        let mut lin = sigma.lineality.clone();
        lin.extend(v_tau.iter().cloned());
        cells.push((Cell::new(vec![QVector::zeros(x.ambient_dim)], rays, lin)?.normalized()?, w.clone()));
    }
    if cells.is_empty() {
        return Err(Error::Lookup("cell is not contained in the complex".into()));
    }
    Ok(WeightedComplex::from_cells(x.ambient_dim, x.dim, cells, workers)?.with_lattice_basis(x.lattice_basis.clone()))
}

fn normalized_hyperplane(c: &Constraint) -> Option<Constraint> {
    let mut v = c.normal.clone();
    v.push(c.rhs.clone());
    let mut p = primitive_direction(&v);
    crate::linalg::canonical_sign(&mut p);
    let rhs = Q::from_integer(p.pop()?);
    if p.iter().all(|x| x.is_zero()) {
        return None;
    }
    Some(Constraint::new(p.into_iter().map(Q::from_integer).collect(), rhs))
}

/// Common refinement within each affine span: every cell is cut by the facet
/// hyperplanes of all cells with the same affine hull, and weights of equal
/// pieces are added. Returns the pieces of nonzero weight in canonical order.
pub fn refine_by_spans(cells: Vec<(Cell, Z)>, workers: Workers) -> Result<Vec<(Cell, Z)>> {
    let mut groups: BTreeMap<(Vec<Vec<Q>>, QVector), Vec<(Cell, Z)>> = BTreeMap::new();
    for (c, w) in cells {
        groups.entry(c.affine_hull()).or_default().push((c, w));
    }
    let groups: Vec<((Vec<Vec<Q>>, QVector), Vec<(Cell, Z)>)> = groups.into_iter().collect();
    let results = par::map(workers, &groups, |((span, base), members)| -> Result<Vec<(Cell, Z)>> {
        let frame = AffineFrame::new(base.clone(), &[], span);
        let k = frame.dim();
        let locals: Vec<VRep> = members.iter().map(|(c, _)| c.local_vrep(&frame)).collect();
        let polys: Vec<HPoly> = locals
            .iter()
            .map(|v| HPoly { dim: k, eqs: Vec::new(), ineqs: facets(v, k).into_iter().map(|(_, c)| c).collect() })
            .collect();
        let mut hyper: Vec<Constraint> = polys.iter().flat_map(|p| p.ineqs.iter().filter_map(normalized_hyperplane)).collect();
        hyper.sort_by(|a, b| (&a.normal, &a.rhs).cmp(&(&b.normal, &b.rhs)));
        hyper.dedup();
        let mut acc: BTreeMap<Cell, Z> = BTreeMap::new();
        for (poly, (_, w)) in polys.into_iter().zip(members) {
            for (_, piece) in subdivide(poly, k, &hyper) {
                let key = Cell::new(
                    piece.vertices.into_iter().map(QVector).collect(),
                    piece.rays.into_iter().map(QVector).collect(),
                    piece.lineality.into_iter().map(QVector).collect(),
                )?;
                *acc.entry(key).or_insert_with(Z::zero) += w;
            }
        }
        let mut out = Vec::new();
        for (key, w) in acc {
            if w.is_zero() {
                continue;
            }
            let v = VRep {
                vertices: key.vertices.into_iter().map(|x| x.0).collect(),
                rays: key.rays.into_iter().map(|x| x.0).collect(),
                lineality: key.lineality.into_iter().map(|x| x.0).collect(),
            };
            out.push((Cell::from_local(&frame, &v)?, w));
        }
        Ok(out)
    });
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    out.sort();
    Ok(out)
}

/// Canonical representative of the cycle of `x` up to refinement.
pub fn canonical_refinement(x: &WeightedComplex, workers: Workers) -> Result<Vec<(Cell, Z)>> {
    refine_by_spans(x.weighted_cells(), workers)
}

/// Whether two cycles agree up to refinement (same support and weights).
pub fn cycles_equal(x: &WeightedComplex, y: &WeightedComplex, workers: Workers) -> Result<bool> {
    if x.ambient_dim != y.ambient_dim {
        return Err(Error::Dimension("cycles in different ambient spaces".into()));
    }
    if x.dim != y.dim {
        return Ok(x.num_maximal() == 0 && y.num_maximal() == 0);
    }
    let mut cells = x.weighted_cells();
    cells.extend(y.maximal_cells().map(|(c, w)| (c.clone(), -w)));
    Ok(refine_by_spans(cells, workers)?.is_empty())
}

pub fn recession_fan(x: &WeightedComplex, workers: Workers) -> Result<WeightedComplex> {
    if !check_balancing(x, workers)?.balanced {
        return Err(Error::Unbalanced("recession fan of an unbalanced complex".into()));
    }
    let origin = QVector::zeros(x.ambient_dim);
    let mut cells = Vec::new();
    for (c, w) in x.maximal_cells() {
        let rec = Cell::new(vec![origin.clone()], c.rays.clone(), c.lineality.clone())?;
        if rec.dim() == x.dim {
            cells.push((rec, w.clone()));
        }
    }
    let refined = refine_by_spans(cells, workers)?;
    Ok(WeightedComplex::from_cells(x.ambient_dim, x.dim, refined, workers)?.with_lattice_basis(x.lattice_basis.clone()))
}

/// Splits the cell along the affine hyperplanes `a . x = c`, returning the
/// full-dimensional pieces.
pub fn split_cell(cell: &Cell, hyperplanes: &[(Vec<Q>, Q)]) -> Result<Vec<Cell>> {
    let frame = cell.frame();
    let k = frame.dim();
    let local: Vec<Constraint> = hyperplanes
        .iter()
        .filter_map(|(a, c)| {
            let (lin, cst) = frame.pull_functional(a, &Q::zero());
            (!lin.iter().all(|x| x.is_zero())).then(|| Constraint::new(lin, c - cst))
        })
        .collect();
    if local.is_empty() {
        return Ok(vec![cell.clone()]);
    }
    subdivide(cell.local_hpoly(), k, &local).into_iter().map(|(_, v)| Cell::from_local(&frame, &v)).collect()
}

pub fn refine_by_hyperplanes(x: &WeightedComplex, hyperplanes: &[(Vec<Q>, Q)], workers: Workers) -> Result<WeightedComplex> {
    let cells = x.weighted_cells();
    let pieces = par::map(workers, &cells, |(c, w)| -> Result<Vec<(Cell, Z)>> {
        Ok(split_cell(c, hyperplanes)?.into_iter().map(|p| (p, w.clone())).collect())
    });
    let mut all = Vec::new();
    for p in pieces {
        all.extend(p?);
    }
    Ok(WeightedComplex::from_cells(x.ambient_dim, x.dim, all, workers)?.with_lattice_basis(x.lattice_basis.clone()))
}

/// Splits every cell along `{a . x = c}`.
pub fn refine_by_functional(x: &WeightedComplex, a: &[Q], c: &Q, workers: Workers) -> Result<WeightedComplex> {
    refine_by_hyperplanes(x, &[(a.to_vec(), c.clone())], workers)
}

pub fn degree(x: &WeightedComplex) -> Result<Z> {
    if x.dim != 0 {
        return Err(Error::Dimension(format!("degree of a {}-dimensional cycle", x.dim)));
    }
    Ok(x.weights.iter().fold(Z::zero(), |a, w| a + w))
}



#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;
    use num_traits::One;

    fn ray(v: &[i64]) -> Cell {
        Cell::new(vec![QVector::zeros(v.len())], vec![QVector::from_ints(v.iter().copied())], vec![]).unwrap()
    }

    fn fan(rays: &[(&[i64], i64)]) -> WeightedComplex {
        let m = rays[0].0.len();
        WeightedComplex::from_cells(m, 1, rays.iter().map(|(r, w)| (ray(r), Z::from(*w))), Workers(1)).unwrap()
    }

    #[test]
    fn line_is_balanced() {
        let x = fan(&[(&[1, 0], 1), (&[-1, 0], 1)]);
        assert!(check_balancing(&x, Workers(1)).unwrap().balanced);
    }

    #[test]
    fn tropical_line_balancing() {
        let x = fan(&[(&[1, 0], 1), (&[0, 1], 1), (&[-1, -1], 1)]);
        assert!(check_balancing(&x, Workers(1)).unwrap().balanced);
        let y = fan(&[(&[1, 0], 1), (&[0, 1], 1), (&[-1, -1], 2)]);
        let r = check_balancing(&y, Workers(1)).unwrap();
        assert!(!r.balanced);
        assert_eq!(r.violations.len(), 1);
    }

    #[test]
    fn lattice_normal_of_non_primitive_direction() {
        let sigma = Cell::new(vec![QVector::from_ints([0, 0]), QVector::from_ints([2, 2])], vec![], vec![]).unwrap();
        let tau = Cell::point(QVector::from_ints([0, 0]));
        let lat = saturated_lattice(&sigma.directions(), 2);
        assert_eq!(lattice_normal(&sigma, &lat, &tau).unwrap(), QVector::from_ints([1, 1]));
    }

    #[test]
    fn translated_line_recesses_to_line() {
        let l = Cell::new(vec![QVector::from_ints([3, 1])], vec![], vec![QVector::from_ints([1, 2])]).unwrap();
        let x = WeightedComplex::from_cells(2, 1, vec![(l, Z::one())], Workers(1)).unwrap();
        let r = recession_fan(&x, Workers(1)).unwrap();
        assert_eq!(r.num_maximal(), 1);
        assert!(r.is_fan());
        assert_eq!(recession_fan(&r, Workers(1)).unwrap(), r);
    }

    #[test]
    fn refine_ray_at_one() {
        let x = fan(&[(&[1], 1), (&[-1], 1)]);
        let r = refine_by_functional(&x, &[q(1)], &q(1), Workers(1)).unwrap();
        assert_eq!(r.num_maximal(), 3);
        assert!(check_balancing(&r, Workers(1)).unwrap().balanced);
        assert!(cycles_equal(&x, &r, Workers(1)).unwrap());
        let y = fan(&[(&[1], 1), (&[-1], 2)]);
        assert!(!cycles_equal(&x, &y, Workers(1)).unwrap());
    }

    #[test]
    fn star_at_origin_is_the_fan() {
        let x = fan(&[(&[1, 0], 1), (&[0, 1], 1), (&[-1, -1], 1)]);
        let s = star(&x, &Cell::point(QVector::zeros(2)), Workers(1)).unwrap();
        assert_eq!(s, x);
        let interior = Cell::point(QVector::from_ints([1, 0]));
        let s = star(&x, &interior, Workers(1)).unwrap();
        assert_eq!(s.num_maximal(), 1);
        assert_eq!(s.cells[0].lineality.len(), 1);
        assert!(star(&x, &Cell::point(QVector::from_ints([1, 1])), Workers(1)).is_err());
    }

    #[test]
    fn normalization_finds_lineality() {
        let c = Cell::new(vec![QVector::zeros(2)], vec![QVector::from_ints([1, 0]), QVector::from_ints([-1, 0]), QVector::from_ints([1, 1])], vec![]).unwrap();
        let n = c.normalized().unwrap();
        assert_eq!(n.lineality.len(), 1);
        assert_eq!(n.rays, vec![QVector::from_ints([0, 1])]);
    }

    #[test]
    fn degree_of_points() {
        let p = WeightedComplex::from_cells(1, 0, vec![(Cell::point(QVector::from_ints([0])), Z::from(5))], Workers(1)).unwrap();
        assert_eq!(degree(&p).unwrap(), Z::from(5));
        assert_eq!(degree(&WeightedComplex::empty(1, 0)).unwrap(), Z::zero());
        assert!(degree(&fan(&[(&[1], 1)])).is_err());
    }
}
