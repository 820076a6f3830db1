use num_traits::{One, Zero};

use super::local::{facets, Constraint, HPoly, VRep};
use crate::error::{Error, Result};
use crate::linalg::{dot, primitive_direction, rank_q, rref, row_space, QVector, Q, Z};

/// A rational polyhedron `conv(vertices) + cone(rays) + span(lineality)` in
/// ambient coordinates, kept in canonical form so that equal polyhedra
/// compare equal.
///
/// Canonical form: lineality is the RREF basis of its span; vertices and rays
/// are reduced modulo the lineality (zero in its pivot coordinates); rays are
/// primitive integer vectors; both lists are sorted without duplicates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub vertices: Vec<QVector>,
    pub rays: Vec<QVector>,
    pub lineality: Vec<QVector>,
}

fn reduce_mod(v: &mut [Q], lin: &[Vec<Q>], pivots: &[usize]) {
    for (row, &p) in lin.iter().zip(pivots) {
        if !v[p].is_zero() {
            let f = v[p].clone();
            for (x, l) in v.iter_mut().zip(row) {
                *x -= &f * l;
            }
        }
    }
}

fn to_q(v: Vec<Z>) -> QVector {
    QVector(v.into_iter().map(Q::from_integer).collect())
}

impl Cell {
    pub fn new(vertices: Vec<QVector>, rays: Vec<QVector>, lineality: Vec<QVector>) -> Result<Self> {
        let Some(first) = vertices.first() else {
            return Err(Error::Structure("a cell needs at least one vertex".into()));
        };
        let m = first.dim();
        if vertices.iter().chain(&rays).chain(&lineality).any(|v| v.dim() != m) {
            return Err(Error::Dimension("cell generators of different lengths".into()));
        }
        let mut lin: Vec<Vec<Q>> = lineality.into_iter().map(|v| v.0).collect();
        let pivots = rref(&mut lin, m);
        let mut vs: Vec<QVector> = vertices
            .into_iter()
            .map(|mut v| {
                reduce_mod(&mut v.0, &lin, &pivots);
                v
            })
            .collect();
        vs.sort();
        vs.dedup();
        let mut rs: Vec<QVector> = rays
            .into_iter()
            .filter_map(|mut r| {
                reduce_mod(&mut r.0, &lin, &pivots);
                (!r.is_zero()).then(|| to_q(primitive_direction(&r.0)))
            })
            .collect();
        rs.sort();
        rs.dedup();
        Ok(Cell { vertices: vs, rays: rs, lineality: lin.into_iter().map(QVector).collect() })
    }

    /// Recomputes a minimal generating set, detecting lineality implied by
    /// opposite rays and dropping redundant generators.
    pub fn normalized(&self) -> Result<Cell> {
        let frame = self.frame();
        let v = self
            .local_hpoly()
            .vrep()
            .ok_or_else(|| Error::Structure("cell became empty during normalization".into()))?;
        Cell::from_local(&frame, &v)
    }

    pub fn point(p: QVector) -> Self {
        Cell { vertices: vec![p], rays: Vec::new(), lineality: Vec::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices[0].dim()
    }

    /// Spanning directions of the linear space parallel to the cell.
    pub fn directions(&self) -> Vec<Vec<Q>> {
        let v0 = &self.vertices[0];
        let mut d: Vec<Vec<Q>> = self.vertices[1..].iter().map(|v| (v - v0).0).collect();
        d.extend(self.rays.iter().map(|r| r.0.clone()));
        d.extend(self.lineality.iter().map(|l| l.0.clone()));
        d
    }

    /// RREF basis of the linear space parallel to the cell.
    pub fn span(&self) -> Vec<Vec<Q>> {
        row_space(&self.directions(), self.ambient_dim())
    }

    pub fn dim(&self) -> usize {
        rank_q(&self.directions(), self.ambient_dim())
    }

    pub fn is_fan_cone(&self) -> bool {
        self.vertices.len() == 1 && self.vertices[0].is_zero()
    }

    pub fn relative_interior_point(&self) -> QVector {
        let m = self.ambient_dim();
        let mut p = QVector::zeros(m);
        for v in &self.vertices {
            p = &p + v;
        }
        p = p.scale(&Q::new(Z::one(), Z::from(self.vertices.len())));
        for r in &self.rays {
            p = &p + r;
        }
        p
    }

    pub fn frame(&self) -> AffineFrame {
        AffineFrame::new(self.vertices[0].clone(), &self.lineality, &self.directions())
    }

    /// Affine hull as `(base point, RREF direction basis)`; used to group cells
    /// lying in the same affine subspace.
    pub fn affine_hull(&self) -> (Vec<Vec<Q>>, QVector) {
        let mut span = self.directions();
        let pivots = rref(&mut span, self.ambient_dim());
        let mut base = self.vertices[0].clone();
        reduce_mod(&mut base.0, &span, &pivots);
        (span, base)
    }

    /// Generators expressed in the local coordinates of `frame`.
    pub fn local_vrep(&self, frame: &AffineFrame) -> VRep {
        VRep {
            vertices: self.vertices.iter().map(|v| frame.to_local(v)).collect(),
            rays: self.rays.iter().map(|r| frame.dir_to_local(r)).collect(),
            lineality: self.lineality.iter().map(|l| frame.dir_to_local(l)).collect(),
        }
    }

    /// The facets of the cell together with the local inequality (in the
    /// coordinates of `self.frame()`) that is tight on each.
    pub fn facets_with_inequalities(&self) -> Vec<(Cell, Constraint)> {
        let frame = self.frame();
        let local = self.local_vrep(&frame);
        let nv = self.vertices.len();
        let mut out: Vec<(Cell, Constraint)> = facets(&local, frame.dim())
            .into_iter()
            .map(|(tight, c)| {
                let verts = tight.iter().filter(|&&i| i < nv).map(|&i| self.vertices[i].clone()).collect();
                let rays = tight.iter().filter(|&&i| i >= nv).map(|&i| self.rays[i - nv].clone()).collect();
                (Cell { vertices: verts, rays, lineality: self.lineality.clone() }, c)
            })
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    pub fn facets(&self) -> Vec<Cell> {
        self.facets_with_inequalities().into_iter().map(|(c, _)| c).collect()
    }

    /// The cell as an H-polyhedron in the local coordinates of `self.frame()`.
    pub fn local_hpoly(&self) -> HPoly {
        let k = self.frame().dim();
        HPoly {
            dim: k,
            eqs: Vec::new(),
            ineqs: self.facets_with_inequalities().into_iter().map(|(_, c)| c).collect(),
        }
    }

    pub fn contains(&self, p: &QVector) -> bool {
        let frame = self.frame();
        let y = frame.to_local(p);
        &frame.to_global(&y) == p && self.local_hpoly().contains(&y)
    }

    /// Whether `face` is a face of `self` (same lineality, generators a subset
    /// lying on a common supporting hyperplane is assumed by construction).
    pub fn has_generators_of(&self, face: &Cell) -> bool {
        face.lineality == self.lineality
            && face.vertices.iter().all(|v| self.vertices.binary_search(v).is_ok())
            && face.rays.iter().all(|r| self.rays.binary_search(r).is_ok())
    }

    /// Maps local generators back to a cell in ambient coordinates.
    pub fn from_local(frame: &AffineFrame, v: &VRep) -> Result<Cell> {
        Cell::new(
            v.vertices.iter().map(|x| frame.to_global(x)).collect(),
            v.rays.iter().map(|x| frame.dir_to_global(x)).collect(),
            v.lineality.iter().map(|x| frame.dir_to_global(x)).collect(),
        )
    }

    /// Image under a linear map given by its matrix rows (`out_dim x in_dim`).
    pub fn map_linear(&self, rows: &[Vec<Q>]) -> Result<Cell> {
        let apply = |v: &QVector| QVector(rows.iter().map(|r| dot(r, &v.0)).collect());
        Cell::new(
            self.vertices.iter().map(apply).collect(),
            self.rays.iter().map(apply).collect(),
            self.lineality.iter().map(apply).collect(),
        )
    }

    pub fn translate(&self, by: &QVector) -> Result<Cell> {
        Cell::new(self.vertices.iter().map(|v| v + by).collect(), self.rays.clone(), self.lineality.clone())
    }
}

/// Affine coordinates on the affine hull of a cell: `x = base + sum y_i basis_i`.
/// The lineality directions, if any, come first.
#[derive(Clone, Debug)]
pub struct AffineFrame {
    pub base: QVector,
    pub basis: Vec<QVector>,
    rows: Vec<usize>,
    inv: Vec<Vec<Q>>,
}

impl AffineFrame {
    pub fn new(base: QVector, lineality: &[QVector], dirs: &[Vec<Q>]) -> Self {
        let m = base.dim();
        let mut basis: Vec<QVector> = Vec::new();
        let mut acc: Vec<Vec<Q>> = Vec::new();
        for d in lineality.iter().map(|l| l.0.clone()).chain(dirs.iter().cloned()) {
            let mut t = acc.clone();
            t.push(d.clone());
            if rank_q(&t, m) > acc.len() {
                acc.push(d.clone());
                basis.push(QVector(d));
            }
        }
        let k = basis.len();
        // rows where the basis matrix is invertible: pivots of its transpose
        let mut bt: Vec<Vec<Q>> = basis.iter().map(|b| b.0.clone()).collect();
        let rows = rref(&mut bt, m);
        let mut aug: Vec<Vec<Q>> = (0..k)
            .map(|i| {
                let mut row: Vec<Q> = basis.iter().map(|b| b[rows[i]].clone()).collect();
                row.extend((0..k).map(|j| if i == j { Q::one() } else { Q::zero() }));
                row
            })
            .collect();
        rref(&mut aug, 2 * k);
        let inv = aug.into_iter().map(|r| r[k..].to_vec()).collect();
        AffineFrame { base, basis, rows, inv }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn dir_to_local(&self, v: &QVector) -> Vec<Q> {
        let sel: Vec<Q> = self.rows.iter().map(|&r| v[r].clone()).collect();
        self.inv.iter().map(|row| dot(row, &sel)).collect()
    }

    pub fn to_local(&self, p: &QVector) -> Vec<Q> {
        self.dir_to_local(&(p - &self.base))
    }

    pub fn dir_to_global(&self, y: &[Q]) -> QVector {
        let mut out = QVector::zeros(self.base.dim());
        for (c, b) in y.iter().zip(&self.basis) {
            if !c.is_zero() {
                out = &out + &b.scale(c);
            }
        }
        out
    }

    pub fn to_global(&self, y: &[Q]) -> QVector {
        &self.base + &self.dir_to_global(y)
    }

    /// Pulls an ambient affine functional `a . x + c` back to local coordinates.
    pub fn pull_functional(&self, a: &[Q], c: &Q) -> (Vec<Q>, Q) {
        let lin = self.basis.iter().map(|b| dot(a, &b.0)).collect();
        (lin, c + dot(a, &self.base.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn qv(v: &[i64]) -> QVector {
        QVector::from_ints(v.iter().copied())
    }

    #[test]
    fn canonical_rays_are_primitive_and_sorted() {
        let c = Cell::new(vec![qv(&[0, 0])], vec![qv(&[0, 3]), qv(&[2, 0])], vec![]).unwrap();
        assert_eq!(c.rays, vec![qv(&[0, 1]), qv(&[1, 0])]);
        assert_eq!(c.dim(), 2);
        assert!(c.is_fan_cone());
    }

    #[test]
    fn lineality_reduces_generators() {
        let a = Cell::new(vec![qv(&[1, 1])], vec![qv(&[1, 2])], vec![qv(&[1, 1])]).unwrap();
        let b = Cell::new(vec![qv(&[0, 0])], vec![qv(&[0, 1])], vec![qv(&[-2, -2])]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn square_has_four_facets() {
        let c = Cell::new(vec![qv(&[0, 0]), qv(&[1, 0]), qv(&[0, 1]), qv(&[1, 1])], vec![], vec![]).unwrap();
        let f = c.facets();
        assert_eq!(f.len(), 4);
        assert!(f.iter().all(|x| x.vertices.len() == 2 && x.dim() == 1));
        let h = c.local_hpoly();
        assert!(h.contains(&c.frame().to_local(&c.relative_interior_point())));
    }

    #[test]
    fn cone_facets_and_halfline() {
        let cone = Cell::new(vec![qv(&[0, 0, 0])], vec![qv(&[1, 0, 0]), qv(&[0, 1, 0])], vec![]).unwrap();
        let f = cone.facets();
        assert_eq!(f.len(), 2);
        let ray = &f[0];
        assert_eq!(ray.facets(), vec![Cell::point(qv(&[0, 0, 0]))]);
        // a half-line with lineality has one facet
        let h = Cell::new(vec![qv(&[0, 0])], vec![qv(&[1, 0])], vec![qv(&[0, 1])]).unwrap();
        assert_eq!(h.facets().len(), 1);
        assert_eq!(h.facets()[0].dim(), 1);
    }

    #[test]
    fn frame_roundtrip() {
        let c = Cell::new(vec![qv(&[1, 2, 3]), qv(&[2, 2, 4])], vec![qv(&[0, 1, 0])], vec![]).unwrap();
        let f = c.frame();
        assert_eq!(f.dim(), 2);
        for v in &c.vertices {
            assert_eq!(&f.to_global(&f.to_local(v)), v);
        }
        let (lin, cst) = f.pull_functional(&[q(1), q(0), q(0)], &q(0));
        assert_eq!(cst, q(1));
        assert_eq!(lin.len(), 2);
    }
}
