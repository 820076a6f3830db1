use crate::polyhedra::WeightedComplex;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connectivity {
    /// Positions in `maximal`, each component sorted, components ordered by
    /// their smallest member.
    pub components: Vec<Vec<usize>>,
    pub connected: bool,
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    let mut j = i;
    while parent[j] != r {
        let next = parent[j];
        parent[j] = r;
        j = next;
    }
    r
}

/// Components of the graph on maximal cells joined along shared
/// codimension-one faces.
pub fn connectedness_codim_one(x: &WeightedComplex) -> Connectivity {
    let m = x.num_maximal();
    let mut parent: Vec<usize> = (0..m).collect();
    for cells in x.codim_one_adjacency().values() {
        for w in cells.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut root_of = vec![usize::MAX; m];
    for i in 0..m {
        let r = find(&mut parent, i);
        if root_of[r] == usize::MAX {
            root_of[r] = components.len();
            components.push(Vec::new());
        }
        components[root_of[r]].push(i);
    }
    let connected = components.len() <= 1;
    Connectivity { components, connected }
}
