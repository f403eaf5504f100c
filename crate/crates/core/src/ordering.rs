//! Contraction orders and the structure they induce.
//!
//! * [`nested_dissection_order`] computes a metric-independent order by
//!   recursive bisection; separators receive the highest ranks of their part.
//! * [`greedy_order`] is the classic metric-dependent order driven by an
//!   importance function and a hop-limited witness search.
//! * [`elimination_tree`], [`compute_levels`] and [`treewidth_upper_bound`]
//!   read structure off a built hierarchy.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap};
use std::io::{BufRead, Write};

use ordered_float::OrderedFloat;

use crate::construction::ChTopology;
use crate::error::{Error, Result};
use crate::graph_io::{Coordinates, InputGraph, UndirectedGraph};
use crate::INVALID;

/// Default balance slack: parts may exceed `2n/3` by 20%.
pub const DEFAULT_BALANCE: f64 = 0.2;
/// Parts with at most this many vertices are ordered without bisection.
pub const DEFAULT_RECURSION_FLOOR: usize = 8;
/// Settle limit of the witness search used by [`greedy_order`].
pub const DEFAULT_WITNESS_HOP_LIMIT: usize = 50;
/// Settle limit recommended for distance metrics on road graphs.
pub const DISTANCE_METRIC_WITNESS_HOP_LIMIT: usize = 1500;

/// A bijection between ranks and vertex ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Order {
    pi: Vec<u32>,
    rank: Vec<u32>,
}

impl Order {
    /// `pi[r]` is the vertex with rank `r`.
    pub fn from_vertices(pi: Vec<u32>) -> Result<Self> {
        let n = pi.len();
        let mut rank = vec![INVALID; n];
        for (r, &v) in pi.iter().enumerate() {
            if v as usize >= n {
                return Err(Error::NotAPermutation(format!("vertex {v} out of range for {n} vertices")));
            }
            if rank[v as usize] != INVALID {
                return Err(Error::NotAPermutation(format!("vertex {v} appears twice")));
            }
            rank[v as usize] = r as u32;
        }
        Ok(Self { pi, rank })
    }

    pub fn identity(n: usize) -> Self {
        let pi: Vec<u32> = (0..n as u32).collect();
        Self { rank: pi.clone(), pi }
    }

    pub fn len(&self) -> usize {
        self.pi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pi.is_empty()
    }

    pub fn vertex(&self, rank: u32) -> u32 {
        self.pi[rank as usize]
    }

    pub fn rank(&self, vertex: u32) -> u32 {
        self.rank[vertex as usize]
    }

    pub fn vertices(&self) -> &[u32] {
        &self.pi
    }

    pub fn ranks(&self) -> &[u32] {
        &self.rank
    }

    pub fn inverse(&self) -> Order {
        Order { pi: self.rank.clone(), rank: self.pi.clone() }
    }
}

/// Reads an order file: line `i` holds the vertex with rank `i`.
pub fn read_order<R: BufRead>(reader: R, vertex_count: Option<usize>) -> Result<Order> {
    let mut pi = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let field = line.trim();
        if field.is_empty() {
            continue;
        }
        let v: u32 =
            field.parse().map_err(|_| Error::Parse { line: i + 1, message: format!("bad vertex id '{field}'") })?;
        pi.push(v);
    }
    if let Some(n) = vertex_count {
        if pi.len() != n {
            return Err(Error::SizeMismatch(format!("order has {} entries, graph has {} vertices", pi.len(), n)));
        }
    }
    Order::from_vertices(pi)
}

pub fn write_order<W: Write>(order: &Order, mut out: W) -> Result<()> {
    let mut text = String::with_capacity(order.len() * 8);
    for &v in order.vertices() {
        text.push_str(&v.to_string());
        text.push('\n');
    }
    out.write_all(text.as_bytes())?;
    Ok(())
}

/// A vertex separator `separator` splitting the remaining vertices into
/// `side_a` and `side_b` with no edge between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bisection {
    pub separator: Vec<u32>,
    pub side_a: Vec<u32>,
    pub side_b: Vec<u32>,
}

impl Bisection {
    /// Checks partition and separation; balance is checked by [`is_balanced`](Self::is_balanced).
    pub fn validate(&self, graph: &UndirectedGraph) -> Result<()> {
        let n = graph.vertex_count();
        let mut side = vec![0u8; n];
        for (tag, set) in [(1u8, &self.separator), (2, &self.side_a), (3, &self.side_b)] {
            for &v in set.iter() {
                if v as usize >= n || side[v as usize] != 0 {
                    return Err(Error::Bisector(format!("vertex {v} missing from or repeated in the partition")));
                }
                side[v as usize] = tag;
            }
        }
        if side.contains(&0) {
            return Err(Error::Bisector("partition does not cover every vertex".into()));
        }
        for (u, v) in graph.edges() {
            let (a, b) = (side[u as usize], side[v as usize]);
            if (a == 2 && b == 3) || (a == 3 && b == 2) {
                return Err(Error::Bisector(format!("edge {{{u},{v}}} joins both sides")));
            }
        }
        Ok(())
    }

    pub fn is_balanced(&self, balance: f64) -> bool {
        let n = self.separator.len() + self.side_a.len() + self.side_b.len();
        self.side_a.len().max(self.side_b.len()) as f64 <= balance_bound(n, balance)
    }
}

fn balance_bound(n: usize, balance: f64) -> f64 {
    (1.0 + balance) * 2.0 * n as f64 / 3.0
}

/// Splits a graph for nested dissection.
///
/// `global_ids[i]` is the id, in the graph the order is computed for, of
/// local vertex `i`; geometric bisectors use it to look up coordinates.
pub trait Bisector: Sync {
    fn bisect(&self, graph: &UndirectedGraph, global_ids: &[u32]) -> Result<Bisection>;
}

impl<F> Bisector for F
where
    F: Fn(&UndirectedGraph, &[u32]) -> Result<Bisection> + Sync,
{
    fn bisect(&self, graph: &UndirectedGraph, global_ids: &[u32]) -> Result<Bisection> {
        self(graph, global_ids)
    }
}

/// Geometric bisector: sweeps the vertices along four fixed axes and takes
/// the prefix cut with the smallest vertex separator.
#[derive(Clone, Copy, Debug)]
pub struct InertialBisector<'a> {
    coords: &'a Coordinates,
    balance: f64,
}

impl<'a> InertialBisector<'a> {
    pub fn new(coords: &'a Coordinates, balance: f64) -> Self {
        Self { coords, balance }
    }
}

impl Bisector for InertialBisector<'_> {
    fn bisect(&self, graph: &UndirectedGraph, global_ids: &[u32]) -> Result<Bisection> {
        sweep_bisect(graph, global_ids, self.coords, self.balance)
    }
}

/// [`InertialBisector`] on a whole graph.
pub fn inertial_bisector(graph: &UndirectedGraph, coords: &Coordinates, balance: f64) -> Result<Bisection> {
    let ids: Vec<u32> = (0..graph.vertex_count() as u32).collect();
    sweep_bisect(graph, &ids, coords, balance)
}

#[derive(Clone, Copy, PartialEq, PartialOrd)]
struct SweepCandidate {
    separator: usize,
    larger: usize,
    axis: usize,
    prefix: usize,
    // 0: separator taken from the prefix side, 1: from the suffix side
    side: usize,
}

fn sweep_bisect(graph: &UndirectedGraph, global_ids: &[u32], coords: &Coordinates, balance: f64) -> Result<Bisection> {
    let n = graph.vertex_count();
    if n < 2 {
        return Err(Error::GraphTooSmall(n));
    }
    if global_ids.iter().any(|&g| g as usize >= coords.len()) {
        return Err(Error::MissingCoordinates);
    }
    let bound = balance_bound(n, balance);
    let axes: Vec<Vec<u32>> = (0..4)
        .map(|axis| {
            let angle = std::f64::consts::FRAC_PI_4 * axis as f64;
            let (sin, cos) = angle.sin_cos();
            let proj: Vec<f64> =
                global_ids.iter().map(|&g| coords.x[g as usize] * cos + coords.y[g as usize] * sin).collect();
            let mut sorted: Vec<u32> = (0..n as u32).collect();
            sorted.sort_by(|&a, &b| proj[a as usize].total_cmp(&proj[b as usize]).then(a.cmp(&b)));
            sorted
        })
        .collect();

    let mut best: Option<SweepCandidate> = None;
    let mut fallback: Option<(usize, usize, SweepCandidate)> = None;
    let mut in_prefix = vec![false; n];
    let mut prefix_neighbors = vec![0u32; n];
    for (axis, sorted) in axes.iter().enumerate() {
        in_prefix.iter_mut().for_each(|b| *b = false);
        prefix_neighbors.iter_mut().for_each(|c| *c = 0);
        let (mut prefix_boundary, mut suffix_boundary) = (0usize, 0usize);
        for (k, &v) in sorted.iter().enumerate().take(n - 1) {
            let deg = graph.degree(v) as u32;
            if prefix_neighbors[v as usize] > 0 {
                suffix_boundary -= 1;
            }
            in_prefix[v as usize] = true;
            if deg > prefix_neighbors[v as usize] {
                prefix_boundary += 1;
            }
            for &u in graph.neighbors(v) {
                let before = prefix_neighbors[u as usize];
                prefix_neighbors[u as usize] += 1;
                if in_prefix[u as usize] {
                    if u != v && graph.degree(u) as u32 == before + 1 {
                        prefix_boundary -= 1;
                    }
                } else if before == 0 {
                    suffix_boundary += 1;
                }
            }
            let prefix = k + 1;
            let suffix = n - prefix;
            for (side, sep, own, other) in [(0, prefix_boundary, prefix, suffix), (1, suffix_boundary, suffix, prefix)]
            {
                let larger = (own - sep).max(other);
                let cand = SweepCandidate { separator: sep, larger, axis, prefix, side };
                if larger as f64 <= bound {
                    if best.is_none_or(|b| cand < b) {
                        best = Some(cand);
                    }
                } else if fallback.is_none_or(|(l, s, _)| (larger, sep) < (l, s)) {
                    fallback = Some((larger, sep, cand));
                }
            }
        }
    }
    let cand = best.or(fallback.map(|f| f.2)).ok_or(Error::GraphTooSmall(n))?;
    let sorted = &axes[cand.axis];
    let mut in_prefix = vec![false; n];
    for &v in &sorted[..cand.prefix] {
        in_prefix[v as usize] = true;
    }
    let mut bisection = Bisection { separator: Vec::new(), side_a: Vec::new(), side_b: Vec::new() };
    for v in 0..n as u32 {
        let on_sep_side = in_prefix[v as usize] == (cand.side == 0);
        if on_sep_side {
            if graph.neighbors(v).iter().any(|&u| in_prefix[u as usize] != in_prefix[v as usize]) {
                bisection.separator.push(v);
            } else {
                bisection.side_a.push(v);
            }
        } else {
            bisection.side_b.push(v);
        }
    }
    Ok(bisection)
}

/// Coordinate-free bisector: BFS levels from a pseudo-peripheral vertex, one
/// level becomes the separator.
#[derive(Clone, Copy, Debug)]
pub struct BfsBisector {
    balance: f64,
}

impl BfsBisector {
    pub fn new(balance: f64) -> Self {
        Self { balance }
    }
}

impl Default for BfsBisector {
    fn default() -> Self {
        Self::new(DEFAULT_BALANCE)
    }
}

impl Bisector for BfsBisector {
    fn bisect(&self, graph: &UndirectedGraph, _global_ids: &[u32]) -> Result<Bisection> {
        bfs_bisector(graph, self.balance)
    }
}

fn bfs_levels(graph: &UndirectedGraph, root: u32, level_of: &mut [u32]) -> Vec<Vec<u32>> {
    level_of.iter_mut().for_each(|l| *l = INVALID);
    let mut levels = vec![vec![root]];
    level_of[root as usize] = 0;
    loop {
        let mut next = Vec::new();
        for &v in levels.last().unwrap() {
            for &u in graph.neighbors(v) {
                if level_of[u as usize] == INVALID {
                    level_of[u as usize] = levels.len() as u32;
                    next.push(u);
                }
            }
        }
        if next.is_empty() {
            return levels;
        }
        next.sort_unstable();
        levels.push(next);
    }
}

/// Splits a connected graph at the BFS level with the best ratio
/// `|S| / (|A|·|B|)` among balanced splits with two nonempty sides.
pub fn bfs_bisector(graph: &UndirectedGraph, balance: f64) -> Result<Bisection> {
    let n = graph.vertex_count();
    if n < 2 {
        return Err(Error::GraphTooSmall(n));
    }
    let mut level_of = vec![INVALID; n];
    let mut root = 0u32;
    let mut levels = bfs_levels(graph, root, &mut level_of);
    for _ in 0..8 {
        let candidate = *levels.last().unwrap().iter().min_by_key(|&&v| (graph.degree(v), v)).unwrap();
        let next = bfs_levels(graph, candidate, &mut level_of);
        if next.len() <= levels.len() {
            levels = bfs_levels(graph, root, &mut level_of);
            break;
        }
        root = candidate;
        levels = next;
    }
    if levels.iter().map(Vec::len).sum::<usize>() != n {
        return Err(Error::Bisector("bfs bisector needs a connected graph".into()));
    }

    let bound = balance_bound(n, balance);
    let mut before = 0usize;
    // (separator, a, b, level)
    let mut best: Option<(usize, usize, usize, usize)> = None;
    let mut fallback: Option<(usize, usize, usize)> = None;
    for (i, level) in levels.iter().enumerate() {
        let (s, a) = (level.len(), before);
        let b = n - a - s;
        before += s;
        if a > 0 && b > 0 && a.max(b) as f64 <= bound {
            let better = match best {
                None => true,
                Some((bs, ba, bb, _)) => {
                    let lhs = s as u128 * ba as u128 * bb as u128;
                    let rhs = bs as u128 * a as u128 * b as u128;
                    lhs < rhs || (lhs == rhs && a.max(b) < ba.max(bb))
                }
            };
            if better {
                best = Some((s, a, b, i));
            }
        }
        if fallback.is_none_or(|(l, fs, _)| (a.max(b), s) < (l, fs)) {
            fallback = Some((a.max(b), s, i));
        }
    }
    let chosen = best.map(|b| b.3).unwrap_or_else(|| fallback.unwrap().2);
    let mut bisection = Bisection { separator: Vec::new(), side_a: Vec::new(), side_b: Vec::new() };
    for v in 0..n as u32 {
        let l = level_of[v as usize] as usize;
        match l.cmp(&chosen) {
            std::cmp::Ordering::Less => bisection.side_a.push(v),
            std::cmp::Ordering::Equal => bisection.separator.push(v),
            std::cmp::Ordering::Greater => bisection.side_b.push(v),
        }
    }
    Ok(bisection)
}

/// Nested dissection order.
///
/// Each connected part larger than `recursion_floor` is bisected; the
/// separator takes the top ranks of the part, side A the lowest ones and
/// side B the ones in between. Disconnected parts are split into components
/// first. Small parts and separators are ranked by descending degree in
/// `graph`, then ascending id, from lowest to highest rank.
pub fn nested_dissection_order(
    graph: &UndirectedGraph,
    bisector: &dyn Bisector,
    recursion_floor: usize,
) -> Result<Order> {
    let n = graph.vertex_count();
    let mut pi = vec![INVALID; n];
    let mut local = vec![INVALID; n];
    let by_degree = |vertices: &mut Vec<u32>| {
        vertices.sort_by_key(|&v| (Reverse(graph.degree(v)), v));
    };
    let mut tasks: Vec<(Vec<u32>, usize)> = vec![((0..n as u32).collect(), 0)];
    while let Some((vertices, start)) = tasks.pop() {
        if vertices.is_empty() {
            continue;
        }
        if vertices.len() == 1 {
            pi[start] = vertices[0];
            continue;
        }
        let sub = graph.induced_subgraph_with(&vertices, &mut local);
        let components = sub.connected_components();
        if components.len() > 1 {
            let mut offset = start;
            for comp in components {
                let len = comp.len();
                tasks.push((comp.into_iter().map(|l| vertices[l as usize]).collect(), offset));
                offset += len;
            }
            continue;
        }
        if vertices.len() <= recursion_floor.max(1) {
            let mut sorted = vertices;
            by_degree(&mut sorted);
            pi[start..start + sorted.len()].copy_from_slice(&sorted);
            continue;
        }
        let bisection = bisector.bisect(&sub, &vertices)?;
        bisection.validate(&sub)?;
        if bisection.side_a.len() == vertices.len() || bisection.side_b.len() == vertices.len() {
            return Err(Error::Bisector("bisection made no progress".into()));
        }
        let to_global = |set: &[u32]| -> Vec<u32> {
            let mut global: Vec<u32> = set.iter().map(|&l| vertices[l as usize]).collect();
            global.sort_unstable();
            global
        };
        let mut separator = to_global(&bisection.separator);
        let (a, b) = (to_global(&bisection.side_a), to_global(&bisection.side_b));
        by_degree(&mut separator);
        let sep_start = start + a.len() + b.len();
        pi[sep_start..sep_start + separator.len()].copy_from_slice(&separator);
        let b_start = start + a.len();
        tasks.push((a, start));
        tasks.push((b, b_start));
    }
    Order::from_vertices(pi)
}

type CoreAdjacency = Vec<BTreeMap<u32, (u64, u32)>>;

/// Dynamic weighted core graph used by the greedy order.
struct WeightedCore {
    out: CoreAdjacency,
    inc: CoreAdjacency,
}

#[derive(Clone, Copy, Debug)]
struct PlannedShortcut {
    from: u32,
    to: u32,
    weight: u64,
    hops: u32,
    new: bool,
}

impl WeightedCore {
    fn new(graph: &InputGraph) -> Self {
        let n = graph.vertex_count();
        let mut out = vec![BTreeMap::new(); n];
        let mut inc = vec![BTreeMap::new(); n];
        for (t, h, w) in graph.arcs() {
            out[t as usize].insert(h, (w as u64, 1));
            inc[h as usize].insert(t, (w as u64, 1));
        }
        Self { out, inc }
    }

    /// Shortcuts needed to contract `v`, processing neighbor pairs by
    /// increasing length so that earlier shortcuts can witness later pairs.
    fn plan(&self, v: u32, hop_limit: usize) -> Vec<PlannedShortcut> {
        let mut pairs = Vec::new();
        for (&u, &(w1, h1)) in &self.inc[v as usize] {
            for (&x, &(w2, h2)) in &self.out[v as usize] {
                if u != x {
                    pairs.push((w1 + w2, u, x, h1 + h2));
                }
            }
        }
        pairs.sort_unstable();
        let mut planned: Vec<PlannedShortcut> = Vec::new();
        for (via, u, x, hops) in pairs {
            if self.witness_exists(u, x, via, v, &planned, hop_limit) {
                continue;
            }
            let new = !self.out[u as usize].contains_key(&x);
            planned.push(PlannedShortcut { from: u, to: x, weight: via, hops, new });
        }
        planned
    }

    /// Hop-limited Dijkstra from `source` avoiding `avoid`; true if `target`
    /// is reached within `limit`.
    fn witness_exists(
        &self,
        source: u32,
        target: u32,
        limit: u64,
        avoid: u32,
        extra: &[PlannedShortcut],
        hop_limit: usize,
    ) -> bool {
        let mut dist: HashMap<u32, u64> = HashMap::new();
        let mut heap = BinaryHeap::new();
        dist.insert(source, 0);
        heap.push(Reverse((0u64, source)));
        let mut settled = 0usize;
        while let Some(Reverse((d, y))) = heap.pop() {
            if d > limit {
                return false;
            }
            if dist.get(&y).is_some_and(|&best| best < d) {
                continue;
            }
            if y == target {
                return true;
            }
            settled += 1;
            if settled > hop_limit {
                return false;
            }
            let relax = |z: u32, w: u64, dist: &mut HashMap<u32, u64>, heap: &mut BinaryHeap<Reverse<(u64, u32)>>| {
                if z == avoid {
                    return;
                }
                let nd = d + w;
                if nd <= limit && dist.get(&z).is_none_or(|&old| nd < old) {
                    dist.insert(z, nd);
                    heap.push(Reverse((nd, z)));
                }
            };
            for (&z, &(w, _)) in &self.out[y as usize] {
                relax(z, w, &mut dist, &mut heap);
            }
            for s in extra.iter().filter(|s| s.from == y) {
                relax(s.to, s.weight, &mut dist, &mut heap);
            }
        }
        false
    }

    fn removed_arcs(&self, v: u32) -> (usize, u64) {
        let arcs = self.inc[v as usize].values().chain(self.out[v as usize].values());
        arcs.fold((0, 0), |(c, h), &(_, hops)| (c + 1, h + hops as u64))
    }

    fn contract(&mut self, v: u32, shortcuts: &[PlannedShortcut]) {
        for s in shortcuts {
            let entry = self.out[s.from as usize].entry(s.to).or_insert((u64::MAX, 0));
            if s.weight < entry.0 {
                *entry = (s.weight, s.hops);
                self.inc[s.to as usize].insert(s.from, (s.weight, s.hops));
            }
        }
        let inc = std::mem::take(&mut self.inc[v as usize]);
        let out = std::mem::take(&mut self.out[v as usize]);
        for &u in inc.keys() {
            self.out[u as usize].remove(&v);
        }
        for &x in out.keys() {
            self.inc[x as usize].remove(&v);
        }
    }

    fn neighbors(&self, v: u32) -> BTreeSet<u32> {
        self.inc[v as usize].keys().chain(self.out[v as usize].keys()).copied().collect()
    }
}

/// Result of the greedy metric-dependent contraction.
#[derive(Clone, Debug)]
pub struct GreedyOutcome {
    pub order: Order,
    /// Arcs inserted that did not exist before (weight decreases excluded).
    pub shortcuts: usize,
}

/// Greedy order minimizing `L(x) + |A(x)|/|D(x)| + Σh(A)/Σh(D)`.
///
/// `hop_limit` bounds the vertices settled per witness search;
/// `usize::MAX` makes the witness search exact.
pub fn greedy_order(graph: &InputGraph, hop_limit: usize) -> Order {
    greedy_contraction(graph, hop_limit).order
}

pub fn greedy_contraction(graph: &InputGraph, hop_limit: usize) -> GreedyOutcome {
    let n = graph.vertex_count();
    let mut core = WeightedCore::new(graph);
    let mut level = vec![0u32; n];
    let importance = |core: &WeightedCore, level: &[u32], v: u32| -> f64 {
        let planned = core.plan(v, hop_limit);
        let (removed, removed_hops) = core.removed_arcs(v);
        let added = planned.iter().filter(|s| s.new);
        let (count, hops) = added.fold((0usize, 0u64), |(c, h), s| (c + 1, h + s.hops as u64));
        let mut value = level[v as usize] as f64;
        if removed > 0 {
            value += count as f64 / removed as f64;
            value += hops as f64 / removed_hops as f64;
        }
        value
    };
    let mut key = vec![OrderedFloat(0.0); n];
    let mut queue = BTreeSet::new();
    for v in 0..n as u32 {
        key[v as usize] = OrderedFloat(importance(&core, &level, v));
        queue.insert((key[v as usize], v));
    }
    let mut pi = Vec::with_capacity(n);
    let mut shortcuts = 0usize;
    while let Some((_, v)) = queue.pop_first() {
        let planned = core.plan(v, hop_limit);
        shortcuts += planned.iter().filter(|s| s.new).count();
        let neighbors = core.neighbors(v);
        core.contract(v, &planned);
        pi.push(v);
        for &y in &neighbors {
            level[y as usize] = level[y as usize].max(level[v as usize] + 1);
        }
        for &y in &neighbors {
            if queue.remove(&(key[y as usize], y)) {
                key[y as usize] = OrderedFloat(importance(&core, &level, y));
                queue.insert((key[y as usize], y));
            }
        }
    }
    GreedyOutcome { order: Order::from_vertices(pi).expect("every vertex contracted once"), shortcuts }
}

/// Each vertex's parent is its lowest-ranked upward neighbor. Vertex ids are
/// ranks, as in [`ChTopology`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationTree {
    parent: Vec<u32>,
    depth: Vec<u32>,
}

impl EliminationTree {
    pub(crate) fn from_parents(parent: Vec<u32>) -> Self {
        let n = parent.len();
        let mut depth = vec![1u32; n];
        for v in (0..n).rev() {
            let p = parent[v];
            if p != INVALID {
                depth[v] = depth[p as usize] + 1;
            }
        }
        Self { parent, depth }
    }

    /// Parent rank, or [`INVALID`] for a root.
    pub fn parent(&self, rank: u32) -> u32 {
        self.parent[rank as usize]
    }

    pub fn parents(&self) -> &[u32] {
        &self.parent
    }

    /// Number of vertices on the path to the root, both ends included.
    pub fn depth(&self, rank: u32) -> u32 {
        self.depth[rank as usize]
    }

    pub fn height(&self) -> u32 {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    pub fn mean_depth(&self) -> f64 {
        if self.depth.is_empty() {
            return 0.0;
        }
        self.depth.iter().map(|&d| d as f64).sum::<f64>() / self.depth.len() as f64
    }

    pub fn roots(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.parent.len() as u32).filter(|&v| self.parent[v as usize] == INVALID)
    }

    /// `rank` and all its ancestors, by increasing rank.
    pub fn ancestors(&self, rank: u32) -> impl Iterator<Item = u32> + '_ {
        std::iter::successors(Some(rank), |&v| Some(self.parent[v as usize]).filter(|&p| p != INVALID))
    }
}

pub(crate) fn parents_from_upward(first_out: &[u32], head: &[u32]) -> Vec<u32> {
    (0..first_out.len() - 1)
        .map(|v| {
            let (b, e) = (first_out[v] as usize, first_out[v + 1] as usize);
            if b < e {
                head[b]
            } else {
                INVALID
            }
        })
        .collect()
}

pub(crate) fn levels_from_upward(first_out: &[u32], head: &[u32]) -> Vec<u32> {
    let n = first_out.len() - 1;
    let mut level = vec![0u32; n];
    for v in 0..n {
        for &h in &head[first_out[v] as usize..first_out[v + 1] as usize] {
            level[h as usize] = level[h as usize].max(level[v] + 1);
        }
    }
    level
}

pub fn elimination_tree(ch: &ChTopology) -> EliminationTree {
    EliminationTree::from_parents(ch.elimination_parents().to_vec())
}

/// Lowest levels such that every arc climbs at least one level.
pub fn compute_levels(ch: &ChTopology) -> Vec<u32> {
    levels_from_upward(ch.up_first_out(), ch.up_heads())
}

/// Maximum upward degree, an upper bound on the treewidth of the input.
pub fn treewidth_upper_bound(ch: &ChTopology) -> usize {
    (0..ch.vertex_count() as u32).map(|v| ch.up_degree(v)).max().unwrap_or(0)
}
