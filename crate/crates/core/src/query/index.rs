//! Static box index, bulk loaded with sort-tile-recursive packing.

use crate::geometry::{boxes_overlap, Box2};

const NODE_CAPACITY: usize = 8;

#[derive(Debug, Clone)]
struct Node {
    bbox: Box2,
    /// Item ids at leaves, child node ids above.
    children: Vec<usize>,
    leaf: bool,
}

#[derive(Debug, Clone)]
pub struct BoxIndex {
    nodes: Vec<Node>,
    root: Option<usize>,
    len: usize,
}

impl BoxIndex {
    pub fn new(boxes: &[Box2]) -> Self {
        let mut nodes = Vec::new();
        let ids: Vec<usize> = (0..boxes.len()).collect();
        let mut level = pack(&ids, |i| boxes[i], true, &mut nodes);
        while level.len() > 1 {
            let node_boxes: Vec<Box2> = nodes.iter().map(|n| n.bbox).collect();
            level = pack(&level, |i| node_boxes[i], false, &mut nodes);
        }
        BoxIndex { nodes, root: level.first().copied(), len: boxes.len() }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Ids of every indexed box overlapping `window` (closed), ascending.
    pub fn query(&self, window: &Box2) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack: Vec<usize> = self.root.into_iter().collect();
        while let Some(n) = stack.pop() {
            let node = &self.nodes[n];
            if !boxes_overlap(&node.bbox, window) {
                continue;
            }
            if node.leaf {
                out.extend(node.children.iter().copied());
            } else {
                stack.extend(node.children.iter().copied());
            }
        }
        out
    }

    /// Like [`BoxIndex::query`] but keeps only ids whose own box overlaps.
    pub fn query_exact(&self, boxes: &[Box2], window: &Box2) -> Vec<usize> {
        let mut ids: Vec<usize> =
            self.query(window).into_iter().filter(|&i| boxes_overlap(&boxes[i], window)).collect();
        ids.sort_unstable();
        ids
    }
}

fn pack(ids: &[usize], bbox_of: impl Fn(usize) -> Box2, leaf: bool, nodes: &mut Vec<Node>) -> Vec<usize> {
    if ids.is_empty() {
        return Vec::new();
    }
    let node_count = ids.len().div_ceil(NODE_CAPACITY);
    let slabs = (node_count as f64).sqrt().ceil() as usize;
    let slab_size = ids.len().div_ceil(slabs);

    let mut sorted = ids.to_vec();
    sorted.sort_by(|&a, &b| bbox_of(a).center().x.total_cmp(&bbox_of(b).center().x).then(a.cmp(&b)));
    let mut parents = Vec::new();
    for slab in sorted.chunks_mut(slab_size) {
        slab.sort_by(|&a, &b| bbox_of(a).center().y.total_cmp(&bbox_of(b).center().y).then(a.cmp(&b)));
        for group in slab.chunks(NODE_CAPACITY) {
            let bbox = group.iter().map(|&i| bbox_of(i)).reduce(|acc, b| acc.union(&b)).expect("group is nonempty");
            nodes.push(Node { bbox, children: group.to_vec(), leaf });
            parents.push(nodes.len() - 1);
        }
    }
    parents
}
