//! Named instances with known answers.

use crate::bounds::HidingGraph;
use crate::error::{invalid, Result};
use crate::lattice::{delta3_certificate_ordered, simplex, IPoint, LatticeSet};

/// Edges among the 28 points of [`crate::lattice::delta3_certificate`], by ID.
pub const DELTA3_EDGES: [(usize, usize); 54] = [
    (0, 5), (0, 13), (0, 23), (0, 24), (1, 5), (1, 7), (1, 15), (1, 23), (1, 27),
    (2, 12), (2, 24), (2, 26), (3, 6), (3, 11), (3, 12), (3, 18), (3, 20), (3, 25),
    (4, 9), (4, 11), (4, 18), (5, 14), (6, 8), (6, 10), (6, 16), (7, 14), (7, 16),
    (8, 15), (8, 19), (9, 23), (9, 27), (10, 19), (10, 20), (11, 23), (12, 16),
    (12, 17), (13, 14), (13, 16), (15, 16), (15, 21), (15, 25), (16, 24), (17, 25),
    (17, 26), (18, 27), (19, 21), (20, 21), (20, 23), (20, 24), (21, 22), (22, 24),
    (22, 25), (22, 26), (25, 27),
];

/// The 54-edge graph on the `Δ_3` certificate points; vertex `i` is point ID `i`.
pub fn delta3_graph() -> HidingGraph {
    HidingGraph::from_edges(delta3_certificate_ordered(), &DELTA3_EDGES).expect("valid edge list")
}

/// The four lattice-convex sets `Δ_3 ∪ S` (numbered 1 to 4) that need four facets.
pub fn four_facet_set(i: usize) -> Result<LatticeSet> {
    let extra: &[[i64; 3]] = match i {
        1 => &[],
        2 => &[[-1, 0, 1]],
        3 => &[[-1, 0, 1], [-1, 1, 0]],
        4 => &[[-1, 0, 1], [0, -1, 1]],
        _ => return invalid(format!("no set number {i}; choose 1 to 4")),
    };
    let mut pts = simplex(3).into_points();
    pts.extend(extra.iter().map(|p| p.to_vec()));
    LatticeSet::new(3, pts)
}

pub fn four_facet_sets() -> Vec<LatticeSet> {
    (1..=4).map(|i| four_facet_set(i).expect("fixture")).collect()
}

/// Vertices of a lattice pentagon with 10 observers and relaxation complexity 3.
pub fn pentagon() -> LatticeSet {
    LatticeSet::new(2, vec![vec![2, 1], vec![4, 1], vec![4, 2], vec![3, 3], vec![1, 2]])
        .expect("distinct points")
}

/// The observers of [`pentagon`].
pub fn pentagon_observers() -> Vec<IPoint> {
    vec![
        vec![2, 3],
        vec![0, 2],
        vec![1, 1],
        vec![2, 0],
        vec![3, 0],
        vec![4, 0],
        vec![5, 0],
        vec![5, 1],
        vec![5, 2],
        vec![4, 3],
    ]
}
