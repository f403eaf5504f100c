//! Shortest-path queries on a customized hierarchy.
//!
//! All searches run on the upward arcs only: the forward search from `s`
//! uses upward weights and the backward search from `t` downward weights.
//! Vertex ids inside a [`QueryResult`] are ranks; the query entry points take
//! input vertex ids.

use crate::construction::ChTopology;
use crate::customization::{ArcMap, Metric, UpDownWeights, DOWN, UP};
use crate::error::{Error, Result};
use crate::graph_io::InputGraph;
use crate::heap::IndexedHeap;
use crate::triangles::{scan, TriangleKind};
use crate::{Weight, INF, INVALID};

const FORWARD: usize = 0;
const BACKWARD: usize = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QueryStats {
    /// Vertices whose arcs were relaxed.
    pub settled: usize,
    /// Arcs relaxed.
    pub relaxed: usize,
    /// Vertices pruned by the stall test.
    pub stalled: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryResult {
    /// [`INF`] if `t` is unreachable.
    pub distance: Weight,
    /// Rank of the highest vertex of the found up-down path.
    pub meeting: Option<u32>,
    /// Ranks along the up-down path, empty if unreachable.
    pub up_down_path: Vec<u32>,
    pub stats: QueryStats,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    Basic,
    Stalling,
    EliminationTree,
}

/// Reusable per-thread query state. Distances are reset along the search
/// space after each query, never in full.
pub struct QueryContext {
    dist: [Vec<Weight>; 2],
    pred: [Vec<u32>; 2],
    heap: [IndexedHeap<Weight>; 2],
    touched: Vec<u32>,
}

impl QueryContext {
    pub fn new(vertex_count: usize) -> Self {
        Self {
            dist: [vec![INF; vertex_count], vec![INF; vertex_count]],
            pred: [vec![INVALID; vertex_count], vec![INVALID; vertex_count]],
            heap: [IndexedHeap::new(vertex_count), IndexedHeap::new(vertex_count)],
            touched: Vec::new(),
        }
    }

    fn check(&self, ch: &ChTopology, s: u32, t: u32) -> Result<(u32, u32)> {
        let n = ch.vertex_count();
        if self.dist[0].len() != n {
            return Err(Error::SizeMismatch(format!("context for {} vertices, hierarchy has {n}", self.dist[0].len())));
        }
        for v in [s, t] {
            if v as usize >= n {
                return Err(Error::VertexOutOfRange { id: v as u64, vertex_count: n });
            }
        }
        Ok((ch.order().rank(s), ch.order().rank(t)))
    }

    #[inline]
    fn improve(&mut self, dir: usize, v: u32, d: Weight, arc: u32) -> bool {
        let slot = &mut self.dist[dir][v as usize];
        if d < *slot {
            if *slot == INF {
                self.touched.push(v);
            }
            *slot = d;
            self.pred[dir][v as usize] = arc;
            true
        } else {
            false
        }
    }

    fn start(&mut self, s: u32, t: u32) {
        self.touched.extend([s, t]);
        self.dist[FORWARD][s as usize] = 0;
        self.dist[BACKWARD][t as usize] = 0;
    }

    fn path(&self, ch: &ChTopology, s: u32, t: u32, meeting: u32) -> Vec<u32> {
        let mut path = vec![meeting];
        let mut v = meeting;
        while v != s {
            v = ch.tail(self.pred[FORWARD][v as usize] as usize);
            path.push(v);
        }
        path.reverse();
        let mut v = meeting;
        while v != t {
            v = ch.tail(self.pred[BACKWARD][v as usize] as usize);
            path.push(v);
        }
        path
    }

    fn reset(&mut self) {
        for &v in &self.touched {
            for dir in [FORWARD, BACKWARD] {
                self.dist[dir][v as usize] = INF;
                self.pred[dir][v as usize] = INVALID;
            }
        }
        self.touched.clear();
        self.heap[0].clear();
        self.heap[1].clear();
    }

    /// True if no state from earlier queries is left.
    pub fn is_clean(&self) -> bool {
        self.touched.is_empty()
            && self.heap.iter().all(|h| h.is_empty())
            && self.dist.iter().all(|d| d.iter().all(|&x| x == INF))
            && self.pred.iter().all(|p| p.iter().all(|&x| x == INVALID))
    }

    fn finish(
        &mut self,
        ch: &ChTopology,
        s: u32,
        t: u32,
        best: Weight,
        meeting: u32,
        stats: QueryStats,
    ) -> QueryResult {
        let result = if best < INF {
            QueryResult { distance: best, meeting: Some(meeting), up_down_path: self.path(ch, s, t, meeting), stats }
        } else {
            QueryResult { distance: INF, meeting: None, up_down_path: Vec::new(), stats }
        };
        self.reset();
        result
    }
}

#[inline]
fn weight_for<W: UpDownWeights>(weights: &W, dir: usize, arc: usize) -> Weight {
    if dir == FORWARD {
        weights.up(arc)
    } else {
        weights.down(arc)
    }
}

fn bidirectional<W: UpDownWeights>(
    ctx: &mut QueryContext,
    ch: &ChTopology,
    weights: &W,
    s: u32,
    t: u32,
    stall: bool,
) -> Result<QueryResult> {
    let (s, t) = ctx.check(ch, s, t)?;
    ctx.start(s, t);
    ctx.heap[FORWARD].push_or_decrease(s, 0);
    ctx.heap[BACKWARD].push_or_decrease(t, 0);
    let mut stats = QueryStats::default();
    let (mut best, mut meeting) = (INF, INVALID);
    let mut active = [true, true];
    while active[0] || active[1] {
        for dir in [FORWARD, BACKWARD] {
            if !active[dir] {
                continue;
            }
            let Some((d, v)) = ctx.heap[dir].peek().filter(|&(d, _)| d < best) else {
                active[dir] = false;
                continue;
            };
            ctx.heap[dir].pop();
            let other = ctx.dist[1 - dir][v as usize];
            if other < INF && d + other < best {
                best = d + other;
                meeting = v;
            }
            if stall {
                let pruned = ch.up_arcs(v).any(|arc| {
                    let y = ch.head(arc) as usize;
                    let dy = ctx.dist[dir][y];
                    dy < INF && dy + weight_for(weights, 1 - dir, arc) <= d
                });
                if pruned {
                    stats.stalled += 1;
                    continue;
                }
            }
            stats.settled += 1;
            for arc in ch.up_arcs(v) {
                let w = weight_for(weights, dir, arc);
                if w >= INF {
                    continue;
                }
                stats.relaxed += 1;
                let y = ch.head(arc);
                if ctx.improve(dir, y, d + w, arc as u32) {
                    ctx.heap[dir].push_or_decrease(y, d + w);
                }
            }
        }
    }
    Ok(ctx.finish(ch, s, t, best, meeting, stats))
}

/// Bidirectional Dijkstra on the upward arcs, alternating directions. A
/// direction stops once its smallest key reaches the best distance found.
pub fn basic_query<W: UpDownWeights>(
    ctx: &mut QueryContext,
    ch: &ChTopology,
    weights: &W,
    s: u32,
    t: u32,
) -> Result<QueryResult> {
    bidirectional(ctx, ch, weights, s, t, false)
}

/// [`basic_query`] with stall-on-demand: a vertex `x` is not relaxed if a
/// higher neighbor `y` already proves `d(y) + m(y → x) <= d(x)`.
pub fn stalling_query<W: UpDownWeights>(
    ctx: &mut QueryContext,
    ch: &ChTopology,
    weights: &W,
    s: u32,
    t: u32,
) -> Result<QueryResult> {
    bidirectional(ctx, ch, weights, s, t, true)
}

/// Walks the elimination-tree paths from `s` and `t` to the root by
/// increasing rank and relaxes every arc on them; no priority queue.
pub fn elimination_tree_query<W: UpDownWeights>(
    ctx: &mut QueryContext,
    ch: &ChTopology,
    weights: &W,
    s: u32,
    t: u32,
) -> Result<QueryResult> {
    let (s, t) = ctx.check(ch, s, t)?;
    ctx.start(s, t);
    let parents = ch.elimination_parents();
    let mut stats = QueryStats::default();
    let (mut best, mut meeting) = (INF, INVALID);
    let (mut a, mut b) = (s, t);
    while a != INVALID || b != INVALID {
        let (v, dirs): (u32, &[usize]) = if a == b {
            (a, &[FORWARD, BACKWARD])
        } else if b == INVALID || (a != INVALID && a < b) {
            (a, &[FORWARD])
        } else {
            (b, &[BACKWARD])
        };
        let (df, db) = (ctx.dist[FORWARD][v as usize], ctx.dist[BACKWARD][v as usize]);
        if df < INF && db < INF && df + db < best {
            best = df + db;
            meeting = v;
        }
        for &dir in dirs {
            let d = ctx.dist[dir][v as usize];
            if d >= INF {
                continue;
            }
            stats.settled += 1;
            for arc in ch.up_arcs(v) {
                let w = weight_for(weights, dir, arc);
                if w >= INF {
                    continue;
                }
                stats.relaxed += 1;
                ctx.improve(dir, ch.head(arc), d + w, arc as u32);
            }
        }
        if v == a {
            a = parents[a as usize];
        }
        if v == b {
            b = parents[b as usize];
        }
    }
    Ok(ctx.finish(ch, s, t, best, meeting, stats))
}

pub fn run_query<W: UpDownWeights>(
    algorithm: Algorithm,
    ctx: &mut QueryContext,
    ch: &ChTopology,
    weights: &W,
    s: u32,
    t: u32,
) -> Result<QueryResult> {
    match algorithm {
        Algorithm::Basic => basic_query(ctx, ch, weights, s, t),
        Algorithm::Stalling => stalling_query(ctx, ch, weights, s, t),
        Algorithm::EliminationTree => elimination_tree_query(ctx, ch, weights, s, t),
    }
}

/// A path in the input graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathResult {
    pub distance: Weight,
    /// Input vertex ids from `s` to `t`.
    pub vertices: Vec<u32>,
    /// Input arc ids, one fewer than vertices.
    pub arcs: Vec<usize>,
}

#[inline]
fn traverse(metric: &Metric, arc: usize, from: u32, to: u32) -> Weight {
    metric.get(arc, 0, if from < to { UP } else { DOWN })
}

/// Expands an up-down path (ranks) into input arcs.
///
/// Each hierarchy arc is either an input arc of equal weight or is split at
/// the third vertex of a triangle whose two sides sum to its weight. Lower
/// triangles suffice for a customized metric; a perfect metric may also need
/// intermediate and upper ones.
pub fn unpack_path(ch: &ChTopology, metric: &Metric, map: &ArcMap, up_down: &[u32]) -> Result<PathResult> {
    let order = ch.order();
    let Some(&first) = up_down.first() else {
        return Err(Error::Internal("empty path".into()));
    };
    let mut result = PathResult { distance: 0, vertices: vec![order.vertex(first)], arcs: Vec::new() };
    let mut stack: Vec<(u32, u32)> = up_down.windows(2).rev().map(|w| (w[0], w[1])).collect();
    while let Some((a, b)) = stack.pop() {
        let arc = ch.find_arc(a, b).ok_or_else(|| Error::Internal(format!("no arc between ranks {a} and {b}")))?;
        let dir = if a < b { UP } else { DOWN };
        let w = metric.get(arc, 0, dir);
        if w >= INF {
            return Err(Error::Internal("path uses an infinite arc".into()));
        }
        if let Some(input) = map.input_arc(arc, dir).filter(|_| metric.input(arc, 0, dir) == w) {
            result.distance += w;
            result.arcs.push(input);
            result.vertices.push(order.vertex(b));
            continue;
        }
        let lo = a.min(b);
        let mut split = None;
        for kind in TriangleKind::ALL {
            scan(ch, kind, arc, |t| {
                if split.is_some() {
                    return;
                }
                let (at_lo, at_hi) = (t.first as usize, t.second as usize);
                let (az, zb) = if a == lo { (at_lo, at_hi) } else { (at_hi, at_lo) };
                if traverse(metric, az, a, t.third) + traverse(metric, zb, t.third, b) == w {
                    split = Some(t.third);
                }
            });
            if split.is_some() {
                break;
            }
        }
        let z = split.ok_or_else(|| Error::Internal(format!("arc {arc} cannot be unpacked with this metric")))?;
        stack.push((z, b));
        stack.push((a, z));
    }
    Ok(result)
}

/// Plain Dijkstra on the input graph with a 4-ary heap.
pub struct Dijkstra {
    dist: Vec<Weight>,
    heap: IndexedHeap<Weight>,
    touched: Vec<u32>,
}

impl Dijkstra {
    pub fn new(vertex_count: usize) -> Self {
        Self { dist: vec![INF; vertex_count], heap: IndexedHeap::new(vertex_count), touched: Vec::new() }
    }

    /// Distance and number of settled vertices.
    pub fn run(&mut self, graph: &InputGraph, s: u32, t: u32) -> Result<(Weight, usize)> {
        self.run_with_stats(graph, s, t).map(|(d, stats)| (d, stats.settled))
    }

    pub fn run_with_stats(&mut self, graph: &InputGraph, s: u32, t: u32) -> Result<(Weight, QueryStats)> {
        let n = graph.vertex_count();
        for v in [s, t] {
            if v as usize >= n {
                return Err(Error::VertexOutOfRange { id: v as u64, vertex_count: n });
            }
        }
        self.dist[s as usize] = 0;
        self.touched.push(s);
        self.heap.push_or_decrease(s, 0);
        let mut stats = QueryStats::default();
        let mut found = INF;
        while let Some((d, v)) = self.heap.pop() {
            stats.settled += 1;
            if v == t {
                found = d;
                break;
            }
            for arc in graph.out_arcs(v) {
                stats.relaxed += 1;
                let h = graph.head(arc);
                let nd = d + graph.weight(arc);
                if nd < self.dist[h as usize] {
                    if self.dist[h as usize] == INF {
                        self.touched.push(h);
                    }
                    self.dist[h as usize] = nd;
                    self.heap.push_or_decrease(h, nd);
                }
            }
        }
        for &v in &self.touched {
            self.dist[v as usize] = INF;
        }
        self.touched.clear();
        self.heap.clear();
        Ok((found, stats))
    }
}

/// One-shot distance by [`Dijkstra`].
pub fn dijkstra_baseline(graph: &InputGraph, s: u32, t: u32) -> Result<Weight> {
    Ok(Dijkstra::new(graph.vertex_count()).run(graph, s, t)?.0)
}
