use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Entry {
    cost: f64,
    node: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    // min-heap on (cost, node)
    fn cmp(&self, other: &Self) -> Ordering {
        other.cost.total_cmp(&self.cost).then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Single-pair Dijkstra. Nodes are settled in lexicographic (cost, id)
/// order and predecessors only change on strict improvement, so the
/// returned path is deterministic. `neighbours(u, out)` appends
/// `(v, arc_cost)` pairs; arcs must be nonnegative.
pub(crate) fn shortest_path<F>(
    node_count: usize,
    source: usize,
    target: usize,
    mut neighbours: F,
) -> Option<(f64, Vec<usize>)>
where
    F: FnMut(usize, &mut Vec<(usize, f64)>),
{
    let mut dist = vec![f64::INFINITY; node_count];
    let mut prev = vec![usize::MAX; node_count];
    let mut done = vec![false; node_count];
    let mut heap = BinaryHeap::new();
    let mut scratch = Vec::new();

    dist[source] = 0.0;
    heap.push(Entry { cost: 0.0, node: source });
    while let Some(Entry { cost, node }) = heap.pop() {
        if done[node] {
            continue;
        }
        done[node] = true;
        if node == target {
            break;
        }
        scratch.clear();
        neighbours(node, &mut scratch);
        for &(next, arc) in &scratch {
            if done[next] {
                continue;
            }
            let candidate = cost + arc;
            if candidate < dist[next] {
                dist[next] = candidate;
                prev[next] = node;
                heap.push(Entry { cost: candidate, node: next });
            }
        }
    }

    if !dist[target].is_finite() {
        return None;
    }
    let mut path = vec![target];
    let mut at = target;
    while at != source {
        at = prev[at];
        path.push(at);
    }
    path.reverse();
    Some((dist[target], path))
}
