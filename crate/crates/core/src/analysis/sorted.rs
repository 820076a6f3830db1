use crate::covers::RamificationData;
use crate::error::{Error, Result};
use crate::moduli::{MarkedTree, Split};

/// Leaves (1-based) sorted by `x_i`, ties broken by index.
pub fn x_order(x: &RamificationData) -> Vec<usize> {
    let mut order: Vec<usize> = (1..=x.n()).collect();
    order.sort_by_key(|&i| (x.x[i - 1], i));
    order
}

/// A caterpillar with leaves sorted along the chain and contracted ends
/// attached to chosen chain vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortedCover {
    pub tree: MarkedTree,
    pub leaf_order: Vec<usize>,
    /// Tree vertex of chain position `j` (1-based, lowest leaf first) at index `j - 1`.
    pub chain: Vec<usize>,
    /// Tree vertices carrying `p_0, p_1, ...` in order.
    pub marked: Vec<usize>,
}

/// `s` lists chain positions in `1..=n-2` carrying contracted ends.
pub fn sorted_maximal_cover(x: &RamificationData, s: &[usize]) -> Result<SortedCover> {
    let n = x.n();
    if n < 4 {
        return Err(Error::Param("sorted covers need n >= 4".into()));
    }
    let mut pos = s.to_vec();
    pos.sort_unstable();
    pos.dedup();
    if pos.len() != s.len() || pos.iter().any(|&j| j == 0 || j > n - 2) {
        return Err(Error::Param(format!("positions {s:?} must be distinct and lie in 1..={}", n - 2)));
    }
    let order = x_order(x);
    let splits = (1..=n - 3).map(|j| Split::new(&order[..=j], n)).collect::<Result<Vec<_>>>()?;
    let tree = MarkedTree::new(n, splits)?;
    let lv = tree.leaf_vertices();
    let chain: Vec<usize> = (1..=n - 2).map(|j| lv[order[j] - 1]).collect();
    let marked = pos.iter().map(|&j| chain[j - 1]).collect();
    Ok(SortedCover { tree, leaf_order: order, chain, marked })
}
