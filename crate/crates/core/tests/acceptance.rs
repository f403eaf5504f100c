//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test --test acceptance`.

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cch::construction::{contract_all, contract_all_naive, ChTopology};
use cch::customization::{
    basic_customization, partial_update, perfect_customization, perfect_witness_search, respecting_metric,
    write_metric, ArcMap, Customizer, Metric, PartialUpdater, SearchGraphs, UpDownWeights, WeightUpdate,
    WitnessVariant, DOWN, UP,
};
use cch::generate;
use cch::graph_io::{to_undirected, InputGraph};
use cch::ordering::{
    nested_dissection_order, treewidth_upper_bound, BfsBisector, InertialBisector, Order, DEFAULT_BALANCE,
    DEFAULT_RECURSION_FLOOR,
};
use cch::query::{run_query, Algorithm, Dijkstra, QueryContext};
use cch::triangles::{default_threshold, for_each_triangle, TriangleIndex, TriangleKind};
use cch::{UndirectedGraph, Weight, INF};

/// Wall-clock limit for the criteria that state one.
const TIME_LIMIT: Duration = Duration::from_secs(120);
/// Criterion 8: bound on `height(4n) / height(n)` of the mean depth.
const GRID_GROWTH_LIMIT: f64 = 3.0;
/// Criterion 10: undirected edges of the Karlsruhe instance.
const KARLSRUHE_EDGES: usize = 154_869;

const ALGORITHMS: [Algorithm; 3] = [Algorithm::Basic, Algorithm::Stalling, Algorithm::EliminationTree];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn nd_order(g: &UndirectedGraph) -> Order {
    nested_dissection_order(g, &BfsBisector::new(DEFAULT_BALANCE), DEFAULT_RECURSION_FLOOR).unwrap()
}

fn customized(g: &InputGraph, ch: &ChTopology) -> Metric {
    let mut m = respecting_metric(g, ch).unwrap();
    basic_customization(ch, &mut m, None).unwrap();
    m
}

fn metric_bytes(m: &Metric) -> Vec<u8> {
    let mut bytes = Vec::new();
    write_metric(m, 0, 0, &mut bytes).unwrap();
    bytes
}

/// All-pairs distances, `d[s][t]`.
fn floyd(g: &InputGraph) -> Vec<Vec<u64>> {
    let n = g.vertex_count();
    let inf = u64::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0;
    }
    for (t, h, w) in g.arcs() {
        if w < INF {
            let slot = &mut d[t as usize][h as usize];
            *slot = (*slot).min(w as u64);
        }
    }
    for k in 0..n {
        let row_k = d[k].clone();
        for row in d.iter_mut() {
            let dik = row[k];
            if dik == inf {
                continue;
            }
            for (dij, &dkj) in row.iter_mut().zip(&row_k) {
                *dij = (*dij).min(dik + dkj);
            }
        }
    }
    for row in &mut d {
        for x in row.iter_mut() {
            if *x >= INF as u64 {
                *x = INF as u64;
            }
        }
    }
    d
}

/// True if no vertex pair has two distinct shortest paths.
fn shortest_paths_unique(g: &InputGraph) -> bool {
    let n = g.vertex_count();
    for s in 0..n {
        let mut dist = vec![u64::MAX; n];
        let mut count = vec![0u8; n];
        let mut done = vec![false; n];
        dist[s] = 0;
        count[s] = 1;
        for _ in 0..n {
            let Some(v) = (0..n).filter(|&v| !done[v] && dist[v] < u64::MAX).min_by_key(|&v| dist[v]) else { break };
            done[v] = true;
            for a in g.out_arcs(v as u32) {
                let h = g.head(a) as usize;
                let nd = dist[v] + g.weight(a) as u64;
                if nd < dist[h] {
                    dist[h] = nd;
                    count[h] = count[v];
                } else if nd == dist[h] {
                    count[h] = count[h].saturating_add(count[v]).min(2);
                }
            }
        }
        if count.iter().any(|&c| c > 1) {
            return false;
        }
    }
    true
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut graphs, mut queries) = (0, 0);
    for i in 0..60 {
        let n = rng.gen_range(16..=512);
        let extra = [n / 4, n, 3 * n][i % 3];
        let g = generate::random_strongly_connected(n, extra, 10_000, 1000 + i as u64);
        let order = if i % 4 == 3 { generate::random_order(n, i as u64) } else { nd_order(&to_undirected(&g)) };
        let ch = contract_all(&to_undirected(&g), &order).unwrap();
        let metric = customized(&g, &ch);
        let mut ctx = QueryContext::new(n);
        let mut dijkstra = Dijkstra::new(n);
        for _ in 0..1000 {
            let (s, t) = (rng.gen_range(0..n as u32), rng.gen_range(0..n as u32));
            let expected = dijkstra.run(&g, s, t).unwrap().0;
            for algorithm in ALGORITHMS {
                let got = run_query(algorithm, &mut ctx, &ch, &metric, s, t).unwrap().distance;
                ensure(got == expected, || format!("graph {i}, {algorithm:?} {s}->{t}: {got} != {expected}"))?;
                queries += 1;
            }
        }
        graphs += 1;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < TIME_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!("{graphs} graphs, {queries} queries exact in {:.1}s", elapsed.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut arcs = 0;
    let count = 1000;
    for i in 0..count {
        let n = rng.gen_range(1..=256);
        let extra = rng.gen_range(0..=3 * n);
        let g = generate::random_undirected(n, extra, 2000 + i as u64);
        let order = if i % 2 == 0 { generate::random_order(n, i as u64) } else { nd_order(&g) };
        let fast = contract_all(&g, &order).unwrap();
        let naive = contract_all_naive(&g, &order).unwrap();
        ensure(fast.up_first_out() == naive.up_first_out() && fast.up_heads() == naive.up_heads(), || {
            format!("instance {i}: arc sets differ")
        })?;
        for x in 0..n as u32 {
            let up = fast.up_neighbors(x);
            for (j, &a) in up.iter().enumerate() {
                for &b in &up[j + 1..] {
                    ensure(fast.find_arc(a, b).is_some(), || format!("instance {i}: up({x}) not a clique"))?;
                }
            }
        }
        arcs += fast.arc_count();
    }
    let elapsed = start.elapsed();
    ensure(elapsed < TIME_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!("{count} graphs ({arcs} arcs) identical and chordal in {:.1}s", elapsed.as_secs_f64()))
}

fn one_way_graph(n: usize, seed: u64) -> InputGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let arcs: Vec<(u32, u32, Weight)> =
        (0..3 * n).map(|_| (rng.gen_range(0..n as u32), rng.gen_range(0..n as u32), rng.gen_range(1..=100))).collect();
    InputGraph::from_arcs(n, arcs).unwrap()
}

fn criterion_3() -> Outcome {
    let mut checked = 0;
    for i in 0..40u64 {
        let n = 8 + (i as usize * 3) % 121;
        let g =
            if i % 4 == 0 { one_way_graph(n, i) } else { generate::random_strongly_connected(n, n, 1000, 3000 + i) };
        let ch = contract_all(&to_undirected(&g), &nd_order(&to_undirected(&g))).unwrap();
        let mut m = customized(&g, &ch);
        perfect_customization(&ch, &mut m, None).unwrap();
        let d = floyd(&g);
        let order = ch.order();
        for arc in 0..ch.arc_count() {
            let (x, y) = (order.vertex(ch.tail(arc)) as usize, order.vertex(ch.head(arc)) as usize);
            ensure(m.up(arc) as u64 == d[x][y] && m.down(arc) as u64 == d[y][x], || {
                format!("graph {i}, arc {arc}: ({}, {}) vs ({}, {})", m.up(arc), m.down(arc), d[x][y], d[y][x])
            })?;
            checked += 2;
        }
    }
    Ok(format!("40 graphs, {checked} arc directions equal all-pairs distances"))
}

fn all_pairs_exact<W: UpDownWeights>(g: &InputGraph, ch: &ChTopology, w: &W, d: &[Vec<u64>]) -> Result<(), String> {
    let n = g.vertex_count();
    let mut ctx = QueryContext::new(n);
    for s in 0..n as u32 {
        for t in 0..n as u32 {
            for algorithm in ALGORITHMS {
                let got = run_query(algorithm, &mut ctx, ch, w, s, t).unwrap().distance as u64;
                ensure(got == d[s as usize][t as usize], || format!("{algorithm:?} {s}->{t}: {got}"))?;
            }
        }
    }
    Ok(())
}

fn retained_set(sg: &SearchGraphs, arcs: usize) -> Vec<bool> {
    (0..arcs).flat_map(|a| [sg.is_retained(a, UP), sg.is_retained(a, DOWN)]).collect()
}

fn criterion_4() -> Outcome {
    let (mut unique_instances, mut tied_instances, mut rejected) = (0, 0, 0);
    let (mut kept_unique, mut kept_general, mut total) = (0, 0, 0);
    let mut seed = 4000u64;
    while unique_instances < 25 || tied_instances < 10 {
        seed += 1;
        let n = 10 + (seed as usize * 7) % 70;
        let perturbed = unique_instances < 25;
        let max_weight = if perturbed { 1 << 24 } else { 3 };
        let g = generate::random_strongly_connected(n, n, max_weight, seed);
        if perturbed && !shortest_paths_unique(&g) {
            rejected += 1;
            continue;
        }
        let ch = contract_all(&to_undirected(&g), &nd_order(&to_undirected(&g))).unwrap();
        let m_c = customized(&g, &ch);
        let mut m_p = m_c.clone();
        perfect_customization(&ch, &mut m_p, None).unwrap();
        let unique = perfect_witness_search(&ch, &m_c, &m_p, WitnessVariant::Unique, None).unwrap();
        let general = perfect_witness_search(&ch, &m_c, &m_p, WitnessVariant::General, None).unwrap();
        let arcs = ch.arc_count();
        for a in 0..arcs {
            for dir in [UP, DOWN] {
                let expected = m_c.get(a, 0, dir) == m_p.get(a, 0, dir) && m_p.get(a, 0, dir) < INF;
                ensure(unique.is_retained(a, dir) == expected, || format!("seed {seed}: arc {a} dir {dir}"))?;
            }
        }
        let (su, sg) = (retained_set(&unique, arcs), retained_set(&general, arcs));
        ensure(sg.iter().zip(&su).all(|(&g, &u)| !g || u), || format!("seed {seed}: general keeps more"))?;
        if perturbed {
            ensure(su == sg, || format!("seed {seed}: variants differ on unique shortest paths"))?;
        }
        let d = floyd(&g);
        all_pairs_exact(&g, &ch, &unique, &d).map_err(|e| format!("seed {seed}, unique: {e}"))?;
        all_pairs_exact(&g, &ch, &general, &d).map_err(|e| format!("seed {seed}, general: {e}"))?;
        kept_unique += su.iter().filter(|&&k| k).count();
        kept_general += sg.iter().filter(|&&k| k).count();
        total += 2 * arcs;
        if perturbed {
            unique_instances += 1;
        } else {
            tied_instances += 1;
        }
    }
    Ok(format!(
        "{unique_instances} unique-path graphs ({rejected} tied draws rejected) + {tied_instances} tied graphs; \
         kept {kept_unique} (unique) / {kept_general} (general) of {total} directions, all-pairs exact"
    ))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut cases, mut to_inf) = (0, 0);
    let mut graph_seed = 5000u64;
    while cases < 600 {
        graph_seed += 1;
        let n = rng.gen_range(16..=128);
        let g = generate::random_strongly_connected(n, rng.gen_range(0..=2 * n), 1000, graph_seed);
        let ch = contract_all(&to_undirected(&g), &nd_order(&to_undirected(&g))).unwrap();
        let index = TriangleIndex::build_default(&ch, &TriangleKind::ALL);
        let map = ArcMap::new(&g, &ch).unwrap();
        let original = customized(&g, &ch);
        for round in 0..10 {
            let size = if round % 2 == 0 { 1 } else { rng.gen_range(2..=8) };
            let mut arcs: Vec<usize> = (0..size).map(|_| rng.gen_range(0..g.arc_count())).collect();
            arcs.sort_unstable();
            arcs.dedup();
            let forward: Vec<WeightUpdate> = arcs
                .iter()
                .map(|&a| {
                    let weight = match rng.gen_range(0..4) {
                        0 => INF,
                        1 => g.weight(a),
                        _ => rng.gen_range(1..=2000),
                    };
                    WeightUpdate { input_arc: a, weight }
                })
                .collect();
            to_inf += forward.iter().filter(|u| u.weight == INF).count();
            let back: Vec<WeightUpdate> =
                arcs.iter().map(|&a| WeightUpdate { input_arc: a, weight: g.weight(a) }).collect();

            let mut mutated = g.clone();
            for u in &forward {
                mutated.set_weight(u.input_arc, u.weight).unwrap();
            }
            let fresh = customized(&mutated, &ch);
            let mut patched = original.clone();
            if round % 3 == 2 {
                let mut updater = PartialUpdater::new(&ch, Some(&index));
                updater.enqueue(&map, &mut patched, &forward).unwrap();
                while !updater.step(&mut patched, 3).unwrap() {}
            } else {
                let idx = if round % 2 == 0 { Some(&index) } else { None };
                partial_update(&ch, &map, &mut patched, &forward, idx).unwrap();
            }
            ensure(metric_bytes(&patched) == metric_bytes(&fresh), || {
                format!("graph {graph_seed} round {round}: forward")
            })?;
            partial_update(&ch, &map, &mut patched, &back, Some(&index)).unwrap();
            ensure(metric_bytes(&patched) == metric_bytes(&original), || {
                format!("graph {graph_seed} round {round}: back")
            })?;
            cases += 2;
        }
    }
    Ok(format!("{cases} update batches ({to_inf} arcs closed with INF and reopened) byte-identical"))
}

fn brute_force(ch: &ChTopology, kind: TriangleKind, arc: usize) -> Vec<(u32, usize, usize)> {
    let (x, y) = (ch.tail(arc), ch.head(arc));
    let mut found = Vec::new();
    for z in 0..ch.vertex_count() as u32 {
        let pair = match kind {
            TriangleKind::Lower if z < x => (ch.find_arc(z, x), ch.find_arc(z, y)),
            TriangleKind::Intermediate if x < z && z < y => (ch.find_arc(x, z), ch.find_arc(z, y)),
            TriangleKind::Upper if z > y => (ch.find_arc(x, z), ch.find_arc(y, z)),
            _ => continue,
        };
        if let (Some(a), Some(b)) = pair {
            found.push((z, a, b));
        }
    }
    found
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut triangles = 0;
    for i in 0..150u64 {
        let n = rng.gen_range(1..=64);
        let g = generate::random_undirected(n, rng.gen_range(0..=4 * n), 6000 + i);
        let order = if i % 2 == 0 { generate::random_order(n, i) } else { nd_order(&g) };
        let ch = contract_all(&g, &order).unwrap();
        let levels = ch.level_count() as u32;
        let thresholds = [levels, default_threshold(&ch), levels / 2, 1];
        let indexes: Vec<TriangleIndex> =
            thresholds.iter().map(|&t| TriangleIndex::build(&ch, &TriangleKind::ALL, t)).collect();
        let m = ch.arc_count();
        for index in &indexes {
            let mut expected = 0;
            for kind in TriangleKind::ALL {
                let covered: usize = (0..m)
                    .filter(|&a| ch.level(ch.tail(a)) < index.threshold())
                    .map(|a| brute_force(&ch, kind, a).len())
                    .sum();
                ensure(index.triangle_count(kind) == covered, || format!("graph {i}: stored {kind:?} count"))?;
                expected += 2 * covered + m + 1;
            }
            ensure(index.memory_entries() == expected, || {
                format!("graph {i}: {} entries, 2t+m+1 gives {expected}", index.memory_entries())
            })?;
        }
        for arc in 0..m {
            for kind in TriangleKind::ALL {
                let truth = brute_force(&ch, kind, arc);
                triangles += truth.len();
                for index in std::iter::once(None).chain(indexes.iter().map(Some)) {
                    let mut got = Vec::new();
                    for_each_triangle(&ch, index, kind, arc, |t| {
                        got.push((t.third, t.first as usize, t.second as usize))
                    })
                    .unwrap();
                    ensure(got == truth, || format!("graph {i}, arc {arc}, {kind:?}: {got:?} != {truth:?}"))?;
                }
            }
        }
    }
    Ok(format!("150 graphs, {triangles} triangles match under merge, indexed and hybrid enumeration"))
}

fn criterion_7() -> Outcome {
    let max_threads = std::thread::available_parallelism().map_or(1, |p| p.get()).max(8);
    let (grid, _) = generate::grid_input(60, 60, 1000, 7);
    let instances = [grid, generate::random_strongly_connected(500, 400, 10_000, 7)];
    for (i, g) in instances.iter().enumerate() {
        let ch = contract_all(&to_undirected(g), &nd_order(&to_undirected(g))).unwrap();
        let index = TriangleIndex::build_default(&ch, &TriangleKind::ALL);
        let run = |threads: usize| -> (Vec<u8>, Vec<u8>) {
            let customizer = Customizer::new(&ch).unwrap().with_index(&index).with_threads(threads).unwrap();
            let mut m = respecting_metric(g, &ch).unwrap();
            customizer.basic(&mut m).unwrap();
            let basic = metric_bytes(&m);
            customizer.perfect(&mut m).unwrap();
            (basic, metric_bytes(&m))
        };
        ensure(run(1) == run(max_threads), || format!("instance {i}: thread count changes the metric"))?;

        let map = ArcMap::new(g, &ch).unwrap();
        let lanes: Vec<Vec<Weight>> = (0..8).map(|l| generate::random_weights(g.arc_count(), 10_000, 70 + l)).collect();
        let singles: Vec<Metric> = lanes
            .iter()
            .map(|w| {
                let mut m = Metric::respecting(&ch, &map, &[w.as_slice()]).unwrap();
                basic_customization(&ch, &mut m, None).unwrap();
                m
            })
            .collect();
        for k in [1usize, 2, 4, 8] {
            let refs: Vec<&[Weight]> = lanes[..k].iter().map(Vec::as_slice).collect();
            for width in [1, k] {
                let mut batch = Metric::respecting(&ch, &map, &refs).unwrap();
                Customizer::new(&ch)
                    .unwrap()
                    .with_batch_width(width)
                    .with_threads(max_threads)
                    .unwrap()
                    .basic(&mut batch)
                    .unwrap();
                for (l, single) in singles[..k].iter().enumerate() {
                    ensure(&batch.lane(l).unwrap() == single, || {
                        format!("instance {i}: k={k} width={width} lane {l}")
                    })?;
                }
            }
        }
    }
    Ok(format!("1 vs {max_threads} threads bit-identical; k in {{1,2,4,8}} lane-wise identical"))
}

fn criterion_8() -> Outcome {
    let mut worst_path = String::new();
    for n in [1usize, 2, 3, 7, 8, 100, 1000, 1023, 1024, 4097, 10_000] {
        let g = to_undirected(&generate::path_input(n));
        let order = nested_dissection_order(&g, &BfsBisector::new(DEFAULT_BALANCE), 1).unwrap();
        let height = contract_all(&g, &order).unwrap().elimination_tree().height();
        let bound = (n as f64 + 1.0).log2().ceil() as u32;
        ensure(height <= bound, || format!("path n={n}: height {height} > {bound}"))?;
        worst_path = format!("path n={n} height {height} <= {bound}");
    }
    let mut means = Vec::new();
    for side in [16u32, 32, 64, 128] {
        let (g, coords) = generate::grid_undirected(side, side);
        let order =
            nested_dissection_order(&g, &InertialBisector::new(&coords, DEFAULT_BALANCE), DEFAULT_RECURSION_FLOOR)
                .unwrap();
        means.push(contract_all(&g, &order).unwrap().elimination_tree().mean_depth());
    }
    let ratios: Vec<f64> = means.windows(2).map(|w| w[1] / w[0]).collect();
    for (&ratio, n) in ratios.iter().zip([256, 1024, 4096]) {
        ensure(ratio < GRID_GROWTH_LIMIT, || format!("grid n={n}: mean height ratio {ratio:.2}"))?;
    }
    Ok(format!(
        "{worst_path}; grid mean heights {:?}, ratios {:?}",
        means.iter().map(|m| format!("{m:.1}")).collect::<Vec<_>>(),
        ratios.iter().map(|r| format!("{r:.2}")).collect::<Vec<_>>()
    ))
}

fn criterion_9() -> Outcome {
    let p5 = to_undirected(&generate::path_input(5));
    let coords = cch::Coordinates::new((0..5).map(f64::from).collect(), vec![0.0; 5]).unwrap();
    let inertial = InertialBisector::new(&coords, DEFAULT_BALANCE);
    let bfs = BfsBisector::new(DEFAULT_BALANCE);
    for (name, bisector) in [("inertial", &inertial as &dyn cch::ordering::Bisector), ("bfs", &bfs)] {
        let order = nested_dissection_order(&p5, bisector, 2).unwrap();
        let ch = contract_all(&p5, &order).unwrap();
        ensure(order.vertex(4) == 2, || format!("{name}: top vertex {}", order.vertex(4)))?;
        ensure(ch.shortcut_count() == 2, || format!("{name}: {} shortcuts", ch.shortcut_count()))?;
        let search = ch.elimination_tree().height() - 1;
        ensure(search == 2, || format!("{name}: max search space {search} arcs"))?;
    }
    for seed in 0..20 {
        let tree = generate::random_tree_undirected(1 + seed as usize * 13, seed);
        let ch = contract_all(&tree, &generate::leaf_first_order(&tree)).unwrap();
        let expected = usize::from(tree.edge_count() > 0);
        ensure(treewidth_upper_bound(&ch) == expected, || format!("tree {seed}: {}", treewidth_upper_bound(&ch)))?;
    }
    for n in [3usize, 4, 6, 10, 50] {
        let cycle = UndirectedGraph::from_edges(n, (0..n as u32).map(|v| (v, (v + 1) % n as u32)));
        for order in [Order::identity(n), generate::random_order(n, n as u64), nd_order(&cycle)] {
            let tw = treewidth_upper_bound(&contract_all(&cycle, &order).unwrap());
            ensure(tw == 2, || format!("C{n}: {tw}"))?;
        }
    }
    for k in 1..=8 {
        let (clique, _) = generate::clique_undirected(k);
        for order in [Order::identity(k), generate::random_order(k, k as u64)] {
            let tw = treewidth_upper_bound(&contract_all(&clique, &order).unwrap());
            ensure(tw == k - 1, || format!("K{k}: {tw}"))?;
        }
    }
    Ok("P5: 2 shortcuts, search space 2 arcs; treewidth bounds 1 / 2 / k-1".into())
}

fn criterion_10() -> Option<Outcome> {
    let graph = std::env::var("CCH_GRAPH").ok();
    let order = std::env::var("CCH_ORDER").ok();
    let karlsruhe = std::env::var("CCH_KARLSRUHE").ok();
    if graph.is_none() && karlsruhe.is_none() {
        return None;
    }
    Some((|| {
        let mut notes = Vec::new();
        if let Some(path) = &karlsruhe {
            let bytes = fs::read(path).map_err(|e| format!("{path}: {e}"))?;
            let g = cch::graph_io::parse_dimacs_gr(bytes.as_slice()).map_err(|e| e.to_string())?;
            let edges = to_undirected(&g).edge_count();
            ensure(edges == KARLSRUHE_EDGES, || format!("Karlsruhe has {edges} undirected edges"))?;
            notes.push(format!("Karlsruhe {edges} edges"));
        }
        if let Some(graph) = &graph {
            let order = order.as_ref().ok_or("CCH_ORDER must accompany CCH_GRAPH")?;
            let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
            let (ch, metric) = (dir.path().join("ch.bin"), dir.path().join("metric.bin"));
            let (ch, metric) = (ch.to_str().unwrap(), metric.to_str().unwrap());
            let threads = std::thread::available_parallelism().map_or(1, |p| p.get()).to_string();
            let steps: [Vec<&str>; 3] = [
                vec!["contract", graph, "--order", order, "-o", ch],
                vec!["customize", graph, "--ch", ch, "-o", metric, "--threads", &threads],
                vec!["verify", graph, "--ch", ch, "--metric", metric, "--pairs", "10000"],
            ];
            for args in steps {
                let out = Command::new(env!("CARGO_BIN_EXE_cch")).args(&args).output().map_err(|e| e.to_string())?;
                ensure(out.status.success(), || {
                    format!("{} failed: {}", args[0], String::from_utf8_lossy(&out.stderr).trim())
                })?;
            }
            notes.push("verify passed on 10^4 pairs".into());
        }
        Ok(notes.join("; "))
    })())
}

fn guarded(f: fn() -> Outcome) -> Outcome {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|panic| {
        let text =
            panic.downcast_ref::<String>().cloned().or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()));
        Err(format!("panicked: {}", text.unwrap_or_default()))
    })
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("oracle correctness of all query algorithms", criterion_1),
        ("fast and naive contraction agree, hierarchy is chordal", criterion_2),
        ("perfect metric equals all-pairs distances", criterion_3),
        ("witness search keeps exactly the needed arcs", criterion_4),
        ("partial updates equal fresh customization", criterion_5),
        ("triangle enumeration and index memory", criterion_6),
        ("determinism under threads and batching", criterion_7),
        ("elimination-tree height on paths and grids", criterion_8),
        ("five-vertex path and treewidth bounds", criterion_9),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = guarded(f);
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {:>2} {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL  {:>2} {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    let name = "large-instance smoke test";
    match criterion_10() {
        None => println!("SKIP  10 {name}: set CCH_GRAPH and CCH_ORDER (and/or CCH_KARLSRUHE) to run"),
        Some(Ok(detail)) => println!("PASS  10 {name}: {detail}"),
        Some(Err(detail)) => {
            failures += 1;
            println!("FAIL  10 {name}: {detail}");
        }
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
