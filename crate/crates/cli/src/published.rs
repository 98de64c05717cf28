//! Reference numbers the classification is compared against.

/// Combinatorial types of six-dimensional Delaunay polytopes by rank
/// (faces of `HYP_7`), as `(rank, count)`.
pub const HYP7_TYPES_BY_RANK: [(usize, usize); 21] = [
    (21, 1),
    (20, 9),
    (19, 30),
    (18, 95),
    (17, 233),
    (16, 500),
    (15, 814),
    (14, 1092),
    (13, 1145),
    (12, 984),
    (11, 686),
    (10, 417),
    (9, 218),
    (8, 108),
    (7, 52),
    (6, 21),
    (5, 8),
    (4, 4),
    (3, 2),
    (2, 1),
    (1, 1),
];

/// Stated total number of six-dimensional types. The by-rank column above sums
/// to a different number; both are reported.
pub const HYP7_STATED_TOTAL: usize = 6241;

/// Number of maximal six-dimensional types: the Schläfli polytope, the 6-cube,
/// the half 6-cube and the product of the half 5-cube with a segment.
pub const HYP7_MAXIMAL: usize = 4;

/// Two-dimensional types: the triangle (rank 3) and the rectangle (rank 2).
pub const HYP3_TYPES_BY_RANK: [(usize, usize); 2] = [(3, 1), (2, 1)];

/// Facet orbit count, facet total and number of geometric classes of facets.
pub fn facet_numbers(n: usize) -> Option<(usize, usize, usize)> {
    match n {
        2 => Some((1, 3, 1)),
        6 => Some((14, 3773, 9)),
        _ => None,
    }
}

/// Published per-rank type counts for `n`, if any.
pub fn types_by_rank(n: usize) -> Option<&'static [(usize, usize)]> {
    match n {
        2 => Some(&HYP3_TYPES_BY_RANK),
        6 => Some(&HYP7_TYPES_BY_RANK),
        _ => None,
    }
}

pub fn expected_types(n: usize, rank: usize) -> Option<usize> {
    types_by_rank(n)?.iter().find(|(r, _)| *r == rank).map(|(_, c)| *c)
}
