//! Small polyhedra given by constraints in a low-dimensional coordinate space.
//!
//! Conversion to generators is done by enumerating tight constraint subsets,
//! which is exact and fast for the dimensions that occur (cones of `M_{0,n}`
//! with `n <= 8` have at most five edge-length coordinates).

use num_traits::{Signed, Zero};

use crate::linalg::{dot, primitive_direction, rank_q, rational_kernel_q, rref, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub normal: Vec<Q>,
    pub rhs: Q,
}

impl Constraint {
    pub fn new(normal: Vec<Q>, rhs: Q) -> Self {
        Constraint { normal, rhs }
    }

    pub fn value(&self, x: &[Q]) -> Q {
        dot(&self.normal, x)
    }
}

/// `{x : eqs hold, normal . x <= rhs for every inequality}`
#[derive(Clone, Debug, Default)]
pub struct HPoly {
    pub dim: usize,
    pub eqs: Vec<Constraint>,
    pub ineqs: Vec<Constraint>,
}

/// Generators of a polyhedron: `conv(vertices) + cone(rays) + span(lineality)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VRep {
    pub vertices: Vec<Vec<Q>>,
    pub rays: Vec<Vec<Q>>,
    pub lineality: Vec<Vec<Q>>,
}

impl VRep {
    pub fn affine_dim(&self) -> usize {
        let Some(v0) = self.vertices.first() else { return 0 };
        let mut dirs: Vec<Vec<Q>> = self
            .vertices
            .iter()
            .skip(1)
            .map(|v| v.iter().zip(v0).map(|(a, b)| a - b).collect())
            .collect();
        dirs.extend(self.rays.iter().cloned());
        dirs.extend(self.lineality.iter().cloned());
        rank_q(&dirs, v0.len())
    }
}

impl HPoly {
    /// The nonnegative orthant of `Q^dim`.
    pub fn orthant(dim: usize) -> Self {
        let ineqs = (0..dim)
            .map(|i| {
                let mut n = vec![Q::zero(); dim];
                n[i] = Q::from_integer((-1).into());
                Constraint::new(n, Q::zero())
            })
            .collect();
        HPoly { dim, eqs: Vec::new(), ineqs }
    }

    pub fn with_eq(mut self, normal: Vec<Q>, rhs: Q) -> Self {
        self.eqs.push(Constraint::new(normal, rhs));
        self
    }

    pub fn with_ineq(mut self, normal: Vec<Q>, rhs: Q) -> Self {
        self.ineqs.push(Constraint::new(normal, rhs));
        self
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        self.eqs.iter().all(|c| c.value(x) == c.rhs) && self.ineqs.iter().all(|c| c.value(x) <= c.rhs)
    }

    pub fn vrep(&self) -> Option<VRep> {
        self.vrep_perturbed(&vec![Q::zero(); self.eqs.len()])
    }

    /// Generators of the limit, as `eps -> 0+`, of the polyhedron whose
    /// equality right-hand sides are shifted by `eps * perturb`. Returns `None`
    /// if the perturbed polyhedron is empty for small `eps`.
    pub fn vrep_perturbed(&self, perturb: &[Q]) -> Option<VRep> {
        assert_eq!(perturb.len(), self.eqs.len());
        let d = self.dim;
        let mut all: Vec<Vec<Q>> = self.eqs.iter().map(|c| c.normal.clone()).collect();
        all.extend(self.ineqs.iter().map(|c| c.normal.clone()));
        let lineality = rational_kernel_q(&all, d).basis;
        let lineality: Vec<Vec<Q>> = lineality
            .into_iter()
            .map(|v| v.into_iter().map(Q::from_integer).collect())
            .collect();

        let mut eqs: Vec<(Vec<Q>, Q, Q)> = self
            .eqs
            .iter()
            .zip(perturb)
            .map(|(c, p)| (c.normal.clone(), c.rhs.clone(), p.clone()))
            .collect();
        for l in &lineality {
            eqs.push((l.clone(), Q::zero(), Q::zero()));
        }
        let eq_normals: Vec<Vec<Q>> = eqs.iter().map(|e| e.0.clone()).collect();
        let r = rank_q(&eq_normals, d);
        let t = d - r;

        let mut vertices: Vec<Vec<Q>> = Vec::new();
        for subset in Subsets::new(self.ineqs.len(), t) {
            let mut rows: Vec<Vec<Q>> = Vec::with_capacity(eqs.len() + t);
            for (n, b, c) in &eqs {
                let mut row = n.clone();
                row.push(b.clone());
                row.push(c.clone());
                rows.push(row);
            }
            for &i in &subset {
                let mut row = self.ineqs[i].normal.clone();
                row.push(self.ineqs[i].rhs.clone());
                row.push(Q::zero());
                rows.push(row);
            }
            let pivots = rref(&mut rows, d + 2);
            if pivots.len() != d || pivots.iter().any(|&p| p >= d) {
                continue;
            }
            let xb: Vec<Q> = (0..d).map(|i| rows[i][d].clone()).collect();
            let xc: Vec<Q> = (0..d).map(|i| rows[i][d + 1].clone()).collect();
            let feasible = self.ineqs.iter().all(|c| {
                let vb = c.value(&xb);
                vb < c.rhs || (vb == c.rhs && c.value(&xc) <= Q::zero())
            });
            if feasible && !vertices.contains(&xb) {
                vertices.push(xb);
            }
        }
        if vertices.is_empty() {
            return None;
        }
        vertices.sort();

        let mut rays: Vec<Vec<Q>> = Vec::new();
        if t > 0 {
            for subset in Subsets::new(self.ineqs.len(), t - 1) {
                let mut rows = eq_normals.clone();
                rows.extend(subset.iter().map(|&i| self.ineqs[i].normal.clone()));
                let ker = rational_kernel_q(&rows, d);
                if ker.basis.len() != 1 {
                    continue;
                }
                let v: Vec<Q> = ker.basis[0].iter().cloned().map(Q::from_integer).collect();
                let vals: Vec<Q> = self.ineqs.iter().map(|c| c.value(&v)).collect();
                let dir = if vals.iter().all(|x| !x.is_positive()) {
                    v
                } else if vals.iter().all(|x| !x.is_negative()) {
                    v.iter().map(|x| -x).collect()
                } else {
                    continue;
                };
                let dir: Vec<Q> = primitive_direction(&dir).into_iter().map(Q::from_integer).collect();
                if !rays.contains(&dir) {
                    rays.push(dir);
                }
            }
        }
        rays.sort();
        Some(VRep { vertices, rays, lineality })
    }
}

/// Facets of a full-dimensional polyhedron in `Q^k` given by generators.
/// Each facet is returned as the indices of the generators on it (vertices
/// first, then rays, numbered consecutively) and the inequality `normal . y <=
/// rhs` valid on the polyhedron and tight on the facet.
pub fn facets(v: &VRep, k: usize) -> Vec<(Vec<usize>, Constraint)> {
    let nl = v.lineality.len();
    if nl >= k {
        return Vec::new();
    }
    let kp = k - nl;
    let mut gens: Vec<Vec<Q>> = Vec::new();
    for x in &v.vertices {
        let mut g = vec![Q::from_integer(1.into())];
        g.extend(x.iter().cloned());
        gens.push(g);
    }
    for r in &v.rays {
        let mut g = vec![Q::zero()];
        g.extend(r.iter().cloned());
        gens.push(g);
    }
    let lin: Vec<Vec<Q>> = v
        .lineality
        .iter()
        .map(|l| {
            let mut g = vec![Q::zero()];
            g.extend(l.iter().cloned());
            g
        })
        .collect();
    let nv = v.vertices.len();
    let mut seen: Vec<Vec<usize>> = Vec::new();
    let mut out = Vec::new();
    for subset in Subsets::new(gens.len(), kp) {
        let mut rows = lin.clone();
        rows.extend(subset.iter().map(|&i| gens[i].clone()));
        let ker = rational_kernel_q(&rows, k + 1);
        if ker.basis.len() != 1 {
            continue;
        }
        let mut nrm: Vec<Q> = ker.basis[0].iter().cloned().map(Q::from_integer).collect();
        let vals: Vec<Q> = gens.iter().map(|g| dot(&nrm, g)).collect();
        if vals.iter().any(|x| x.is_negative()) {
            if vals.iter().any(|x| x.is_positive()) {
                continue;
            }
            nrm = nrm.iter().map(|x| -x).collect();
        }
        let tight: Vec<usize> = (0..gens.len()).filter(|&i| vals[i].is_zero()).collect();
        if !tight.iter().any(|&i| i < nv) || seen.contains(&tight) {
            continue;
        }
        seen.push(tight.clone());
        // n0 + n'.y >= 0  <=>  -n'.y <= n0
        let normal = nrm[1..].iter().map(|x| -x).collect();
        out.push((tight, Constraint::new(normal, nrm[0].clone())));
    }
    out
}

/// Lexicographically ordered k-subsets of `0..n`.
pub struct Subsets {
    n: usize,
    cur: Option<Vec<usize>>,
}

impl Subsets {
    pub fn new(n: usize, k: usize) -> Self {
        let cur = if k <= n { Some((0..k).collect()) } else { None };
        Subsets { n, cur }
    }
}

impl Iterator for Subsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.cur.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        let mut advanced = false;
        while i > 0 {
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in (i + 1)..k {
                    next[j] = next[j - 1] + 1;
                }
                advanced = true;
                break;
            }
        }
        self.cur = if advanced { Some(next) } else { None };
        Some(out)
    }
}

/// Which sides of the hyperplane `normal . x = rhs` the polyhedron meets in
/// points off the hyperplane: `(below, above)`.
pub fn sides(v: &VRep, normal: &[Q], rhs: &Q) -> (bool, bool) {
    let mut below = false;
    let mut above = false;
    for x in &v.vertices {
        let s = dot(normal, x);
        if &s < rhs {
            below = true;
        } else if &s > rhs {
            above = true;
        }
    }
    for r in v.rays.iter() {
        let s = dot(normal, r);
        if s.is_negative() {
            below = true;
        } else if s.is_positive() {
            above = true;
        }
    }
    for l in &v.lineality {
        if !dot(normal, l).is_zero() {
            below = true;
            above = true;
        }
    }
    (below, above)
}

/// Splits `poly` (of affine dimension `dim`) by a family of hyperplanes and
/// returns the pieces of full dimension `dim`, each with its generators.
pub fn subdivide(poly: HPoly, dim: usize, hyperplanes: &[Constraint]) -> Vec<(HPoly, VRep)> {
    let Some(v) = poly.vrep() else { return Vec::new() };
    if v.affine_dim() != dim {
        return Vec::new();
    }
    let mut pieces = vec![(poly, v)];
    for h in hyperplanes {
        let mut next = Vec::with_capacity(pieces.len() * 2);
        for (p, v) in pieces {
            let (below, above) = sides(&v, &h.normal, &h.rhs);
            if !(below && above) {
                next.push((p, v));
                continue;
            }
            let neg: Vec<Q> = h.normal.iter().map(|x| -x).collect();
            let lo = p.clone().with_ineq(h.normal.clone(), h.rhs.clone());
            let hi = p.with_ineq(neg, -h.rhs.clone());
            for part in [lo, hi] {
                if let Some(pv) = part.vrep() {
                    if pv.affine_dim() == dim {
                        next.push((part, pv));
                    }
                }
            }
        }
        pieces = next;
    }
    pieces
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{q, qf};

    #[test]
    fn orthant_is_a_cone() {
        let v = HPoly::orthant(2).vrep().unwrap();
        assert_eq!(v.vertices, vec![vec![q(0), q(0)]]);
        assert_eq!(v.rays.len(), 2);
        assert_eq!(v.affine_dim(), 2);
    }

    #[test]
    fn slice_of_orthant() {
        // x + 2y = 1, x,y >= 0 : segment from (1,0) to (0,1/2)
        let p = HPoly::orthant(2).with_eq(vec![q(1), q(2)], q(1));
        let v = p.vrep().unwrap();
        assert_eq!(v.vertices, vec![vec![q(0), qf(1, 2)], vec![q(1), q(0)]]);
        assert!(v.rays.is_empty());
        assert_eq!(v.affine_dim(), 1);
    }

    #[test]
    fn perturbation_selects_feasible_side() {
        // x - y = 0 + eps, x,y >= 0 : limit is the diagonal ray
        let p = HPoly::orthant(2).with_eq(vec![q(1), q(-1)], q(0));
        let v = p.vrep_perturbed(&[q(1)]).unwrap();
        assert_eq!(v.affine_dim(), 1);
        // x + y = 0 + eps feasible, limit a point; x + y = 0 - eps infeasible
        let p = HPoly::orthant(2).with_eq(vec![q(1), q(1)], q(0));
        assert_eq!(p.vrep_perturbed(&[q(1)]).unwrap().affine_dim(), 0);
        assert!(p.vrep_perturbed(&[q(-1)]).is_none());
    }

    #[test]
    fn empty_polyhedron() {
        let p = HPoly::orthant(2).with_eq(vec![q(1), q(1)], q(-1));
        assert!(p.vrep().is_none());
    }

    #[test]
    fn subdivide_cone_by_level() {
        // cone alpha >= 0 split at alpha = 1
        let pieces = subdivide(HPoly::orthant(1), 1, &[Constraint::new(vec![q(1)], q(1))]);
        assert_eq!(pieces.len(), 2);
        let mut kinds: Vec<(usize, usize)> =
            pieces.iter().map(|(_, v)| (v.vertices.len(), v.rays.len())).collect();
        kinds.sort();
        assert_eq!(kinds, vec![(1, 1), (2, 0)]);
        // a hyperplane containing the cell leaves it alone
        let seg = HPoly::orthant(2).with_eq(vec![q(1), q(0)], q(0));
        let pieces = subdivide(seg, 1, &[Constraint::new(vec![q(1), q(0)], q(0))]);
        assert_eq!(pieces.len(), 1);
    }

    #[test]
    fn subsets_enumerate_all() {
        assert_eq!(Subsets::new(5, 2).count(), 10);
        assert_eq!(Subsets::new(3, 0).count(), 1);
        assert_eq!(Subsets::new(2, 3).count(), 0);
    }
}
