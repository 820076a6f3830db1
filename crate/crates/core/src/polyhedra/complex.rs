use std::collections::BTreeMap;

use num_traits::Zero;

use super::cell::Cell;
use crate::error::{Error, Result};
use crate::linalg::{Q, Z};
use crate::par::{self, Workers};

/// A pure-dimensional weighted polyhedral complex.
///
/// `cells` lists the maximal cells first (in canonical order, indexed by
/// `maximal`), followed by their codimension-one faces. `faces` holds
/// `(child, parent)` index pairs for every facet of every maximal cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedComplex {
    pub ambient_dim: usize,
    pub dim: usize,
    /// Columns map ambient lattice coordinates to the coordinates the caller
    /// cares about (e.g. quotient coordinates of `M_{0,n}`); empty means the
    /// standard lattice.
    pub lattice_basis: Vec<Vec<Q>>,
    pub cells: Vec<Cell>,
    pub maximal: Vec<usize>,
    pub weights: Vec<Z>,
    pub faces: Vec<(usize, usize)>,
}

impl WeightedComplex {
    pub fn empty(ambient_dim: usize, dim: usize) -> Self {
        WeightedComplex {
            ambient_dim,
            dim,
            lattice_basis: Vec::new(),
            cells: Vec::new(),
            maximal: Vec::new(),
            weights: Vec::new(),
            faces: Vec::new(),
        }
    }

    /// Builds a complex from weighted maximal cells. Equal cells have their
    /// weights added; cells of total weight zero are dropped.
    pub fn from_cells<I>(ambient_dim: usize, dim: usize, cells: I, workers: Workers) -> Result<Self>
    where
        I: IntoIterator<Item = (Cell, Z)>,
    {
        Self::build(ambient_dim, dim, cells, true, workers)
    }

    /// As [`from_cells`](Self::from_cells) but keeps zero-weight cells.
    pub fn from_cells_unpruned<I>(ambient_dim: usize, dim: usize, cells: I, workers: Workers) -> Result<Self>
    where
        I: IntoIterator<Item = (Cell, Z)>,
    {
        Self::build(ambient_dim, dim, cells, false, workers)
    }

    fn build<I>(ambient_dim: usize, dim: usize, cells: I, prune: bool, workers: Workers) -> Result<Self>
    where
        I: IntoIterator<Item = (Cell, Z)>,
    {
        let mut merged: BTreeMap<Cell, Z> = BTreeMap::new();
        for (c, w) in cells {
            if c.ambient_dim() != ambient_dim {
                return Err(Error::Dimension(format!(
                    "cell in dimension {} added to complex in dimension {ambient_dim}",
                    c.ambient_dim()
                )));
            }
            *merged.entry(c).or_insert_with(Z::zero) += w;
        }
        if prune {
            merged.retain(|_, w| !w.is_zero());
        }
        let maximal_cells: Vec<(Cell, Z)> = merged.into_iter().collect();
        let dims = par::map(workers, &maximal_cells, |(c, _)| c.dim());
        if let Some(bad) = dims.iter().find(|&&d| d != dim) {
            return Err(Error::Dimension(format!("cell of dimension {bad} in a complex of dimension {dim}")));
        }
        let facets: Vec<Vec<Cell>> = if dim == 0 {
            vec![Vec::new(); maximal_cells.len()]
        } else {
            par::map(workers, &maximal_cells, |(c, _)| c.facets())
        };
        let m = maximal_cells.len();
        let mut face_index: BTreeMap<Cell, usize> = BTreeMap::new();
        for fs in &facets {
            for f in fs {
                face_index.entry(f.clone()).or_insert(0);
            }
        }
        let mut cells: Vec<Cell> = Vec::with_capacity(m + face_index.len());
        let mut weights = Vec::with_capacity(m);
        for (c, w) in maximal_cells {
            cells.push(c);
            weights.push(w);
        }
        for (i, (f, idx)) in face_index.iter_mut().enumerate() {
            *idx = m + i;
            cells.push(f.clone());
        }
        let mut faces = Vec::new();
        for (parent, fs) in facets.iter().enumerate() {
            for f in fs {
                faces.push((face_index[f], parent));
            }
        }
        faces.sort();
        Ok(WeightedComplex {
            ambient_dim,
            dim,
            lattice_basis: Vec::new(),
            cells,
            maximal: (0..m).collect(),
            weights,
            faces,
        })
    }

    pub fn with_lattice_basis(mut self, basis: Vec<Vec<Q>>) -> Self {
        self.lattice_basis = basis;
        self
    }

    pub fn num_maximal(&self) -> usize {
        self.maximal.len()
    }

    pub fn maximal_cells(&self) -> impl Iterator<Item = (&Cell, &Z)> {
        self.maximal.iter().map(|&i| &self.cells[i]).zip(self.weights.iter())
    }

    pub fn weighted_cells(&self) -> Vec<(Cell, Z)> {
        self.maximal_cells().map(|(c, w)| (c.clone(), w.clone())).collect()
    }

    /// Maps each codimension-one cell to the positions (in `maximal`) of the
    /// maximal cells containing it.
    pub fn codim_one_adjacency(&self) -> BTreeMap<usize, Vec<usize>> {
        let pos: BTreeMap<usize, usize> = self.maximal.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &(child, parent) in &self.faces {
            if let Some(&p) = pos.get(&parent) {
                adj.entry(child).or_default().push(p);
            }
        }
        adj
    }

    pub fn is_fan(&self) -> bool {
        self.maximal_cells().all(|(c, _)| c.is_fan_cone())
    }

    /// Same cells with new weights (aligned with `maximal`); zero-weight cells
    /// are kept so that indices stay stable.
    pub fn reweighted(&self, weights: Vec<Z>) -> Result<Self> {
        if weights.len() != self.maximal.len() {
            return Err(Error::Dimension("weight vector length differs from number of cells".into()));
        }
        let mut out = self.clone();
        out.weights = weights;
        Ok(out)
    }

    /// Removes maximal cells of weight zero.
    pub fn pruned(&self, workers: Workers) -> Result<Self> {
        let out = Self::from_cells(self.ambient_dim, self.dim, self.weighted_cells(), workers)?;
        Ok(out.with_lattice_basis(self.lattice_basis.clone()))
    }

    /// `sum_i c_i X_i` without refinement (cells must match exactly to merge).
    pub fn linear_combination(terms: &[(Z, &WeightedComplex)], workers: Workers) -> Result<Self> {
        let Some((_, first)) = terms.first() else {
            return Err(Error::Param("empty linear combination".into()));
        };
        let (ambient, dim) = (first.ambient_dim, first.dim);
        let mut cells = Vec::new();
        for (c, x) in terms {
            if x.ambient_dim != ambient || x.dim != dim {
                return Err(Error::Dimension("summing complexes of different dimensions".into()));
            }
            cells.extend(x.maximal_cells().map(|(cell, w)| (cell.clone(), c * w)));
        }
        Ok(Self::from_cells(ambient, dim, cells, workers)?.with_lattice_basis(first.lattice_basis.clone()))
    }
}
