//! Maximum bipartite matching by augmenting paths, used to decide the
//! injective-map conditions of multiset orderings.

/// `adjacency[i]` lists the right-side vertices compatible with left vertex
/// `i`. Returns the size of a maximum matching.
pub fn max_matching(adjacency: &[Vec<usize>], right_size: usize) -> usize {
    let mut matched_right: Vec<Option<usize>> = vec![None; right_size];
    let mut size = 0;
    for left in 0..adjacency.len() {
        let mut visited = vec![false; right_size];
        if augment(left, adjacency, &mut matched_right, &mut visited) {
            size += 1;
        }
    }
    size
}

/// True iff a maximum matching saturates every left vertex.
pub fn has_perfect_left_matching(adjacency: &[Vec<usize>], right_size: usize) -> bool {
    max_matching(adjacency, right_size) == adjacency.len()
}

fn augment(
    left: usize,
    adjacency: &[Vec<usize>],
    matched_right: &mut Vec<Option<usize>>,
    visited: &mut [bool],
) -> bool {
    for &right in &adjacency[left] {
        if visited[right] {
            continue;
        }
        visited[right] = true;
        if matched_right[right].is_none()
            || augment(matched_right[right].unwrap(), adjacency, matched_right, visited)
        {
            matched_right[right] = Some(left);
            return true;
        }
    }
    false
}
