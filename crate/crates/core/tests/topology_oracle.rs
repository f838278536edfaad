use std::collections::{HashMap, HashSet};

use landcore::geometry::{area, Box2, Point2, Polygon2};
use landcore::synth::{grid_partition, random_partition};
use landcore::topology::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Key = (u64, u64);

fn key(p: Point2) -> Key {
    (p.x.to_bits(), p.y.to_bits())
}

/// Directed input segments with the area on their left.
fn input_segments(parts: &[(AreaId, Polygon2)]) -> HashMap<(Key, Key), AreaId> {
    let mut out = HashMap::new();
    for (id, p) in parts {
        for ring in p.normalized().rings() {
            for (a, b) in ring.segments() {
                assert!(out.insert((key(a), key(b)), *id).is_none(), "directed segment used twice");
            }
        }
    }
    out
}

/// Checks the store against a brute-force reading of the input: edges cover
/// every input segment exactly once with the right owners, and every edge
/// is a maximal chain between nodes.
fn check_against_input(parts: &[(AreaId, Polygon2)], store: &TopologyStore) {
    let directed = input_segments(parts);
    let undirected: HashSet<(Key, Key)> = directed.keys().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    let owners = |a: Key, b: Key| (directed.get(&(a, b)).copied(), directed.get(&(b, a)).copied());
    let mut neighbours: HashMap<Key, HashSet<Key>> = HashMap::new();
    for &(a, b) in &undirected {
        neighbours.entry(a).or_default().insert(b);
        neighbours.entry(b).or_default().insert(a);
    }

    let mut covered = HashSet::new();
    for edge in store.edges.values() {
        let v: Vec<Key> = edge.line.vertices().iter().map(|&p| key(p)).collect();
        for w in v.windows(2) {
            assert!(covered.insert((w[0].min(w[1]), w[0].max(w[1]))), "segment stored twice");
            assert_eq!(owners(w[0], w[1]), (edge.a_id_left, edge.a_id_right), "edge {} owners", edge.b_id);
        }
        for i in 1..v.len() - 1 {
            assert_eq!(neighbours[&v[i]].len(), 2, "edge {} passes through a node", edge.b_id);
        }
        if !edge.is_closed() {
            for (end, next) in [(v[0], v[1]), (v[v.len() - 1], v[v.len() - 2])] {
                let nb = &neighbours[&end];
                let is_node = nb.len() != 2 || {
                    let other = *nb.iter().find(|&&n| n != next).unwrap();
                    let (l, r) = owners(end, next);
                    let (l2, r2) = owners(other, end);
                    (l, r) != (r2, l2) && (l, r) != (l2, r2)
                };
                assert!(is_node, "edge {} ends at a non-node", edge.b_id);
            }
        }
    }
    assert_eq!(covered, undirected);
}

fn ring_count(p: &Polygon2) -> usize {
    1 + p.islands().len()
}

#[test]
fn random_partitions_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..100 {
        let parts = random_partition(&mut rng);
        assert!(parts.len() <= 100);
        let store = build_topology(&parts).unwrap();
        check_against_input(&parts, &store);
        let before: f64 = parts.iter().map(|(_, p)| area(p)).sum();
        let mut after = 0.0;
        for (id, p) in &parts {
            let q = reconstruct_polygon(*id, &store).unwrap();
            assert_eq!(ring_count(&q), ring_count(p));
            assert!((area(&q) - area(p)).abs() <= 1e-9 * area(p));
            after += area(&q);
        }
        assert!((after - before).abs() <= 1e-9 * before);
        for (b, refs) in store.references() {
            let e = &store.edges[&b];
            if e.is_interior() {
                assert_eq!(refs.len(), 2);
                assert_eq!(refs[0].1, -refs[1].1);
            } else {
                assert_eq!(refs.len(), 1);
            }
        }
        let json = serde_json::to_string(&store).unwrap();
        let back: TopologyStore = serde_json::from_str(&json).unwrap();
        assert_eq!(back, store);
    }
}

#[test]
fn grid_edges_match_brute_force() {
    let parts = grid_partition(10, 10.0, 16);
    let store = build_topology(&parts).unwrap();
    check_against_input(&parts, &store);
    assert_eq!(store.edges.len(), 180 + 32 + 4);
    assert_eq!(store.stored_vertex_count(), 3736);
}

#[test]
fn abox_windows_always_complete() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..30 {
        let parts = random_partition(&mut rng);
        let store = build_topology(&parts).unwrap();
        for _ in 0..40 {
            let (x, y) = (rng.random_range(-10.0..75.0), rng.random_range(-10.0..75.0));
            let (w, h) = (rng.random_range(0.0..20.0), rng.random_range(0.0..20.0));
            let window = Box2::from_coords(x, y, x + w, y + h).unwrap();
            let got = window_query(&store, &window).unwrap();
            let expected: Vec<AreaId> = parts
                .iter()
                .filter(|(_, p)| landcore::geometry::bbox(p).overlaps(&window))
                .map(|(id, _)| *id)
                .collect();
            let mut ids: Vec<AreaId> = got.iter().map(|(id, _)| *id).collect();
            ids.sort_unstable();
            let mut expected_sorted = expected.clone();
            expected_sorted.sort_unstable();
            assert_eq!(ids, expected_sorted);
            for (id, p) in got {
                let original = &parts.iter().find(|(i, _)| *i == id).unwrap().1;
                assert!((area(&p) - area(original)).abs() <= 1e-9 * area(original));
            }
        }
    }
}

#[test]
fn overlapping_input_rejected() {
    let parts = vec![
        (1, Polygon2::rectangle(0.0, 0.0, 2.0, 2.0).unwrap()),
        (2, Polygon2::rectangle(1.0, 1.0, 3.0, 3.0).unwrap()),
    ];
    assert!(build_topology(&parts).is_err());
}
