//! Seeded instance generators for tests, benchmarks and `--random`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph_io::{Coordinates, InputGraph, UndirectedGraph};
use crate::ordering::Order;
use crate::Weight;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random Hamiltonian cycle plus `extra` random arcs, half of them
/// two-way. Weights are uniform in `[1, max_weight]`.
pub fn random_strongly_connected(n: usize, extra: usize, max_weight: Weight, seed: u64) -> InputGraph {
    let mut rng = rng(seed);
    let mut cycle: Vec<u32> = (0..n as u32).collect();
    cycle.shuffle(&mut rng);
    let mut arcs = Vec::new();
    let weight = |rng: &mut ChaCha8Rng| rng.gen_range(1..=max_weight.max(1));
    if n > 1 {
        for i in 0..n {
            let w = weight(&mut rng);
            arcs.push((cycle[i], cycle[(i + 1) % n], w));
        }
        for _ in 0..extra {
            let (u, v) = (rng.gen_range(0..n as u32), rng.gen_range(0..n as u32));
            let w = weight(&mut rng);
            arcs.push((u, v, w));
            if rng.gen_bool(0.5) {
                let w = weight(&mut rng);
                arcs.push((v, u, w));
            }
        }
    }
    InputGraph::from_arcs(n, arcs).expect("generated arcs are valid")
}

/// A random spanning tree plus `extra` random edges.
pub fn random_undirected(n: usize, extra: usize, seed: u64) -> UndirectedGraph {
    let mut rng = rng(seed);
    let mut edges: Vec<(u32, u32)> = (1..n as u32).map(|v| (rng.gen_range(0..v), v)).collect();
    if n > 1 {
        for _ in 0..extra {
            edges.push((rng.gen_range(0..n as u32), rng.gen_range(0..n as u32)));
        }
    }
    UndirectedGraph::from_edges(n, edges)
}

pub fn random_tree_undirected(n: usize, seed: u64) -> UndirectedGraph {
    random_undirected(n, 0, seed)
}

pub fn random_order(n: usize, seed: u64) -> Order {
    let mut pi: Vec<u32> = (0..n as u32).collect();
    pi.shuffle(&mut rng(seed));
    Order::from_vertices(pi).expect("shuffled identity")
}

/// `width × height` grid, vertex `x * height + y` at `(x, y)`.
pub fn grid_undirected(width: u32, height: u32) -> (UndirectedGraph, Coordinates) {
    let id = |x: u32, y: u32| x * height + y;
    let mut edges = Vec::new();
    for x in 0..width {
        for y in 0..height {
            if x + 1 < width {
                edges.push((id(x, y), id(x + 1, y)));
            }
            if y + 1 < height {
                edges.push((id(x, y), id(x, y + 1)));
            }
        }
    }
    let n = (width * height) as usize;
    let xs = (0..n as u32).map(|v| (v / height) as f64).collect();
    let ys = (0..n as u32).map(|v| (v % height) as f64).collect();
    (UndirectedGraph::from_edges(n, edges), Coordinates::new(xs, ys).expect("equal lengths"))
}

/// Grid with both directions of every edge weighted independently.
pub fn grid_input(width: u32, height: u32, max_weight: Weight, seed: u64) -> (InputGraph, Coordinates) {
    let (g, coords) = grid_undirected(width, height);
    let mut rng = rng(seed);
    let mut arcs = Vec::with_capacity(2 * g.edge_count());
    for (u, v) in g.edges() {
        arcs.push((u, v, rng.gen_range(1..=max_weight.max(1))));
        arcs.push((v, u, rng.gen_range(1..=max_weight.max(1))));
    }
    (InputGraph::from_arcs(g.vertex_count(), arcs).expect("generated arcs are valid"), coords)
}

/// `K_k` with vertices on a circle.
pub fn clique_undirected(k: usize) -> (UndirectedGraph, Coordinates) {
    let edges = (0..k as u32).flat_map(|a| (a + 1..k as u32).map(move |b| (a, b)));
    let angle = |v: usize| std::f64::consts::TAU * v as f64 / k.max(1) as f64;
    let coords = Coordinates::new((0..k).map(|v| angle(v).cos()).collect(), (0..k).map(|v| angle(v).sin()).collect())
        .expect("equal lengths");
    (UndirectedGraph::from_edges(k, edges), coords)
}

/// Complete digraph with random weights in `[1, 100]`.
pub fn clique_input(k: usize, seed: u64) -> InputGraph {
    let mut rng = rng(seed);
    let mut arcs = Vec::new();
    for a in 0..k as u32 {
        for b in 0..k as u32 {
            if a != b {
                arcs.push((a, b, rng.gen_range(1..=100)));
            }
        }
    }
    InputGraph::from_arcs(k, arcs).expect("generated arcs are valid")
}

/// Path `0 - 1 - ... - (n-1)` with unit weights in both directions.
pub fn path_input(n: usize) -> InputGraph {
    let arcs = (1..n as u32).flat_map(|v| [(v - 1, v, 1), (v, v - 1, 1)]);
    InputGraph::from_arcs(n, arcs).expect("generated arcs are valid")
}

/// Random weights in `[1, max_weight]` for `count` arcs.
pub fn random_weights(count: usize, max_weight: Weight, seed: u64) -> Vec<Weight> {
    let mut rng = rng(seed);
    (0..count).map(|_| rng.gen_range(1..=max_weight.max(1))).collect()
}

/// Repeatedly peels leaves; for a tree this contracts without fill.
pub fn leaf_first_order(tree: &UndirectedGraph) -> Order {
    let n = tree.vertex_count();
    let mut degree: Vec<usize> = (0..n as u32).map(|v| tree.degree(v)).collect();
    let mut done = vec![false; n];
    let mut stack: Vec<u32> = (0..n as u32).filter(|&v| degree[v as usize] <= 1).collect();
    let mut pi = Vec::new();
    while let Some(v) = stack.pop() {
        if done[v as usize] {
            continue;
        }
        done[v as usize] = true;
        pi.push(v);
        for &u in tree.neighbors(v) {
            if !done[u as usize] {
                degree[u as usize] -= 1;
                if degree[u as usize] == 1 {
                    stack.push(u);
                }
            }
        }
    }
    Order::from_vertices(pi).expect("every vertex peeled once")
}
