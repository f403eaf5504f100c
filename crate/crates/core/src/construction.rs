//! Building the metric-independent hierarchy.
//!
//! Contracting a vertex turns its remaining neighborhood into a clique. The
//! [`ContractionGraph`] does this without ever materializing cliques: a
//! contracted vertex becomes a *super vertex* that is merged into each of
//! its neighbors as they are contracted, so the super vertices always form
//! an independent set. Neighborhoods are linked lists of fixed-size
//! reference blocks; merging concatenates lists and joins union-find sets.
//! Duplicate and self references are dropped lazily during enumeration.

use std::collections::BTreeSet;
use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::graph_io::{read_magic, read_u32, read_u32s, read_u64, write_u32s, UndirectedGraph};
use crate::ordering::{levels_from_upward, parents_from_upward, EliminationTree, Order};
use crate::INVALID;

const BLOCK_SIZE: usize = 16;
const CH_MAGIC: &[u8; 4] = b"CCHT";

/// Contraction state over a graph whose vertex ids are already ranks.
pub struct ContractionGraph {
    refs: Vec<u32>,
    block_start: Vec<u32>,
    block_len: Vec<u32>,
    block_next: Vec<u32>,
    list_head: Vec<u32>,
    list_tail: Vec<u32>,
    uf_parent: Vec<u32>,
    uf_size: Vec<u32>,
    uf_label: Vec<u32>,
    is_super: Vec<bool>,
    marked: Vec<bool>,
    buffer: Vec<u32>,
}

impl ContractionGraph {
    /// Vertex `v` of `ranked` is contracted `v`-th.
    pub fn new(ranked: &UndirectedGraph) -> Self {
        let n = ranked.vertex_count();
        let mut cg = ContractionGraph {
            refs: Vec::with_capacity(2 * ranked.edge_count()),
            block_start: Vec::new(),
            block_len: Vec::new(),
            block_next: Vec::new(),
            list_head: vec![INVALID; n],
            list_tail: vec![INVALID; n],
            uf_parent: (0..n as u32).collect(),
            uf_size: vec![1; n],
            uf_label: (0..n as u32).collect(),
            is_super: vec![false; n],
            marked: vec![false; n],
            buffer: vec![0; n],
        };
        for v in 0..n as u32 {
            for chunk in ranked.neighbors(v).chunks(BLOCK_SIZE) {
                let block = cg.block_start.len() as u32;
                cg.block_start.push(cg.refs.len() as u32);
                cg.block_len.push(chunk.len() as u32);
                cg.block_next.push(INVALID);
                cg.refs.extend_from_slice(chunk);
                match cg.list_tail[v as usize] {
                    INVALID => cg.list_head[v as usize] = block,
                    tail => cg.block_next[tail as usize] = block,
                }
                cg.list_tail[v as usize] = block;
            }
        }
        cg
    }

    fn find(&mut self, v: u32) -> u32 {
        let mut root = v;
        while self.uf_parent[root as usize] != root {
            root = self.uf_parent[root as usize];
        }
        let mut cur = v;
        while cur != root {
            let next = self.uf_parent[cur as usize];
            self.uf_parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    fn representative(&mut self, v: u32) -> u32 {
        let root = self.find(v);
        self.uf_label[root as usize]
    }

    /// Merges super vertex `y` into `x`; `x` stays the representative.
    fn merge(&mut self, x: u32, y: u32) {
        let (yh, yt) = (self.list_head[y as usize], self.list_tail[y as usize]);
        if yh != INVALID {
            match self.list_tail[x as usize] {
                INVALID => self.list_head[x as usize] = yh,
                tail => self.block_next[tail as usize] = yh,
            }
            self.list_tail[x as usize] = yt;
            self.list_head[y as usize] = INVALID;
            self.list_tail[y as usize] = INVALID;
        }
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return;
        }
        let (big, small) = if self.uf_size[rx as usize] >= self.uf_size[ry as usize] { (rx, ry) } else { (ry, rx) };
        self.uf_parent[small as usize] = big;
        self.uf_size[big as usize] += self.uf_size[small as usize];
        self.uf_label[big as usize] = x;
    }

    /// Writes the distinct neighbors of `x` into the buffer, dropping stale
    /// references and empty blocks on the way.
    fn collect_neighbors(&mut self, x: u32) -> usize {
        let mut count = 0;
        let mut prev = INVALID;
        let mut block = self.list_head[x as usize];
        while block != INVALID {
            let start = self.block_start[block as usize] as usize;
            let mut i = 0;
            while i < self.block_len[block as usize] as usize {
                let r = self.representative(self.refs[start + i]);
                if r == x || self.marked[r as usize] {
                    let last = self.block_len[block as usize] as usize - 1;
                    self.refs[start + i] = self.refs[start + last];
                    self.block_len[block as usize] -= 1;
                    continue;
                }
                self.refs[start + i] = r;
                self.marked[r as usize] = true;
                self.buffer[count] = r;
                count += 1;
                i += 1;
            }
            let next = self.block_next[block as usize];
            if self.block_len[block as usize] == 0 {
                match prev {
                    INVALID => self.list_head[x as usize] = next,
                    p => self.block_next[p as usize] = next,
                }
                if self.list_tail[x as usize] == block {
                    self.list_tail[x as usize] = prev;
                }
            } else {
                prev = block;
            }
            block = next;
        }
        for i in 0..count {
            self.marked[self.buffer[i] as usize] = false;
        }
        count
    }

    /// Contracts every vertex in id order. `emit(x, up)` receives the upward
    /// neighbors of `x` sorted by id. Does not allocate.
    pub fn contract_with<F: FnMut(u32, &[u32])>(&mut self, mut emit: F) {
        for x in 0..self.list_head.len() as u32 {
            let count = self.collect_neighbors(x);
            for i in 0..count {
                let y = self.buffer[i];
                if self.is_super[y as usize] {
                    self.merge(x, y);
                }
            }
            self.is_super[x as usize] = true;
            let count = self.collect_neighbors(x);
            let up = &mut self.buffer[..count];
            up.sort_unstable();
            emit(x, up);
        }
    }
}

/// The upward hierarchy. Vertex ids are ranks; arc ids follow the upward
/// adjacency (by tail, then head).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChTopology {
    order: Order,
    up_first_out: Vec<u32>,
    up_head: Vec<u32>,
    arc_tail: Vec<u32>,
    down_first_in: Vec<u32>,
    down_tail: Vec<u32>,
    down_arc: Vec<u32>,
    levels: Vec<u32>,
    parents: Vec<u32>,
    input_edges: usize,
}

impl ChTopology {
    fn from_upward(order: Order, up_first_out: Vec<u32>, up_head: Vec<u32>, input_edges: usize) -> Self {
        let n = up_first_out.len() - 1;
        let m = up_head.len();
        let mut arc_tail = vec![0u32; m];
        let mut down_first_in = vec![0u32; n + 1];
        for v in 0..n {
            for a in up_first_out[v] as usize..up_first_out[v + 1] as usize {
                arc_tail[a] = v as u32;
                down_first_in[up_head[a] as usize + 1] += 1;
            }
        }
        for v in 0..n {
            down_first_in[v + 1] += down_first_in[v];
        }
        let mut fill = down_first_in.clone();
        let mut down_tail = vec![0u32; m];
        let mut down_arc = vec![0u32; m];
        for a in 0..m {
            let slot = &mut fill[up_head[a] as usize];
            down_tail[*slot as usize] = arc_tail[a];
            down_arc[*slot as usize] = a as u32;
            *slot += 1;
        }
        let levels = levels_from_upward(&up_first_out, &up_head);
        let parents = parents_from_upward(&up_first_out, &up_head);
        Self {
            order,
            up_first_out,
            up_head,
            arc_tail,
            down_first_in,
            down_tail,
            down_arc,
            levels,
            parents,
            input_edges,
        }
    }

    pub fn order(&self) -> &Order {
        &self.order
    }

    pub fn vertex_count(&self) -> usize {
        self.up_first_out.len() - 1
    }

    pub fn arc_count(&self) -> usize {
        self.up_head.len()
    }

    /// Arcs that are not edges of the input graph.
    pub fn shortcut_count(&self) -> usize {
        self.arc_count() - self.input_edges
    }

    pub fn input_edge_count(&self) -> usize {
        self.input_edges
    }

    pub fn up_first_out(&self) -> &[u32] {
        &self.up_first_out
    }

    pub fn up_heads(&self) -> &[u32] {
        &self.up_head
    }

    /// Arc ids of the upward arcs of `rank`.
    pub fn up_arcs(&self, rank: u32) -> std::ops::Range<usize> {
        self.up_first_out[rank as usize] as usize..self.up_first_out[rank as usize + 1] as usize
    }

    /// Upward neighbors of `rank`, ascending.
    pub fn up_neighbors(&self, rank: u32) -> &[u32] {
        &self.up_head[self.up_arcs(rank)]
    }

    pub fn up_degree(&self, rank: u32) -> usize {
        self.up_arcs(rank).len()
    }

    fn down_range(&self, rank: u32) -> std::ops::Range<usize> {
        self.down_first_in[rank as usize] as usize..self.down_first_in[rank as usize + 1] as usize
    }

    /// Downward neighbors of `rank`, ascending.
    pub fn down_neighbors(&self, rank: u32) -> &[u32] {
        &self.down_tail[self.down_range(rank)]
    }

    /// Arc ids matching [`down_neighbors`](Self::down_neighbors).
    pub fn down_arcs(&self, rank: u32) -> &[u32] {
        &self.down_arc[self.down_range(rank)]
    }

    pub fn down_degree(&self, rank: u32) -> usize {
        self.down_range(rank).len()
    }

    pub fn tail(&self, arc: usize) -> u32 {
        self.arc_tail[arc]
    }

    pub fn head(&self, arc: usize) -> u32 {
        self.up_head[arc]
    }

    /// The arc between two ranks, in either argument order.
    pub fn find_arc(&self, a: u32, b: u32) -> Option<usize> {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let range = self.up_arcs(lo);
        self.up_head[range.clone()].binary_search(&hi).ok().map(|i| range.start + i)
    }

    /// Level of each rank: 0 without downward neighbors, else one above the
    /// highest downward neighbor.
    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn level(&self, rank: u32) -> u32 {
        self.levels[rank as usize]
    }

    pub fn level_count(&self) -> usize {
        self.levels.iter().map(|&l| l as usize + 1).max().unwrap_or(0)
    }

    pub fn elimination_parents(&self) -> &[u32] {
        &self.parents
    }

    pub fn elimination_tree(&self) -> EliminationTree {
        EliminationTree::from_parents(self.parents.clone())
    }
}

fn check_order(graph: &UndirectedGraph, order: &Order) -> Result<()> {
    if order.len() != graph.vertex_count() {
        return Err(Error::NotAPermutation(format!(
            "order has {} entries, graph has {} vertices",
            order.len(),
            graph.vertex_count()
        )));
    }
    Ok(())
}

fn ranked_graph(graph: &UndirectedGraph, order: &Order) -> UndirectedGraph {
    let rank = order.ranks();
    UndirectedGraph::from_edges(graph.vertex_count(), graph.edges().map(|(u, v)| (rank[u as usize], rank[v as usize])))
}

/// Contracts `graph` along `order`.
pub fn contract_all(graph: &UndirectedGraph, order: &Order) -> Result<ChTopology> {
    check_order(graph, order)?;
    let n = graph.vertex_count();
    let mut cg = ContractionGraph::new(&ranked_graph(graph, order));
    let mut first_out = Vec::with_capacity(n + 1);
    first_out.push(0u32);
    let mut heads = Vec::new();
    cg.contract_with(|_, up| {
        heads.extend_from_slice(up);
        first_out.push(heads.len() as u32);
    });
    Ok(ChTopology::from_upward(order.clone(), first_out, heads, graph.edge_count()))
}

/// Reference implementation that inserts every clique edge explicitly.
pub fn contract_all_naive(graph: &UndirectedGraph, order: &Order) -> Result<ChTopology> {
    check_order(graph, order)?;
    let n = graph.vertex_count();
    let ranked = ranked_graph(graph, order);
    let mut adj: Vec<BTreeSet<u32>> = (0..n as u32).map(|v| ranked.neighbors(v).iter().copied().collect()).collect();
    let mut first_out = vec![0u32];
    let mut heads = Vec::new();
    for x in 0..n {
        let up: Vec<u32> = adj[x].iter().copied().filter(|&y| y as usize > x).collect();
        for (i, &a) in up.iter().enumerate() {
            for &b in &up[i + 1..] {
                adj[a as usize].insert(b);
                adj[b as usize].insert(a);
            }
        }
        heads.extend_from_slice(&up);
        first_out.push(heads.len() as u32);
    }
    Ok(ChTopology::from_upward(order.clone(), first_out, heads, graph.edge_count()))
}

/// Binary form: `"CCHT"`, graph hash (u64), n, arc count, input edge count,
/// order (n), upward first-out (n+1), heads, elimination parents (n), levels (n).
pub fn write_ch<W: Write>(ch: &ChTopology, graph_hash: u64, mut out: W) -> Result<()> {
    out.write_all(CH_MAGIC)?;
    out.write_all(&graph_hash.to_le_bytes())?;
    write_u32s(&mut out, &[ch.vertex_count() as u32, ch.arc_count() as u32, ch.input_edges as u32])?;
    write_u32s(&mut out, ch.order.vertices())?;
    write_u32s(&mut out, &ch.up_first_out)?;
    write_u32s(&mut out, &ch.up_head)?;
    write_u32s(&mut out, &ch.parents)?;
    write_u32s(&mut out, &ch.levels)?;
    Ok(())
}

/// Returns the hierarchy and the hash of the graph it was built for.
pub fn read_ch<R: Read>(mut input: R) -> Result<(ChTopology, u64)> {
    read_magic(&mut input, CH_MAGIC)?;
    let graph_hash = read_u64(&mut input)?;
    let n = read_u32(&mut input)? as usize;
    let m = read_u32(&mut input)? as usize;
    let input_edges = read_u32(&mut input)? as usize;
    let order = Order::from_vertices(read_u32s(&mut input, n)?)?;
    let first_out = read_u32s(&mut input, n + 1)?;
    let heads = read_u32s(&mut input, m)?;
    let parents = read_u32s(&mut input, n)?;
    let levels = read_u32s(&mut input, n)?;
    if first_out[0] != 0 || first_out[n] as usize != m || first_out.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::BadFormat("inconsistent first-out array".into()));
    }
    for v in 0..n {
        let up = &heads[first_out[v] as usize..first_out[v + 1] as usize];
        if up.iter().any(|&h| h as usize >= n || h as usize <= v) || up.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadFormat(format!("bad upward adjacency at rank {v}")));
        }
    }
    if input_edges > m {
        return Err(Error::BadFormat("more input edges than arcs".into()));
    }
    let ch = ChTopology::from_upward(order, first_out, heads, input_edges);
    if ch.parents != parents || ch.levels != levels {
        return Err(Error::BadFormat("stored tree or levels disagree with the arcs".into()));
    }
    Ok((ch, graph_hash))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use proptest::prelude::*;

    fn path(n: u32) -> UndirectedGraph {
        UndirectedGraph::from_edges(n as usize, (1..n).map(|v| (v - 1, v)))
    }

    fn arcs(ch: &ChTopology) -> Vec<(u32, u32)> {
        (0..ch.arc_count()).map(|a| (ch.tail(a), ch.head(a))).collect()
    }

    #[test]
    fn path_with_middle_last() {
        let order = Order::from_vertices(vec![1, 0, 3, 4, 2]).unwrap();
        let ch = contract_all(&path(5), &order).unwrap();
        assert_eq!(ch.arc_count(), 6);
        assert_eq!(ch.shortcut_count(), 2);
        assert_eq!(ch, contract_all_naive(&path(5), &order).unwrap());
    }

    #[test]
    fn star_has_no_fill_when_center_is_last() {
        let star = UndirectedGraph::from_edges(5, (1..5).map(|v| (0, v)));
        let ch = contract_all(&star, &Order::from_vertices(vec![1, 2, 3, 4, 0]).unwrap()).unwrap();
        assert_eq!(ch.shortcut_count(), 0);
        let ch = contract_all(&star, &Order::identity(5)).unwrap();
        assert_eq!(ch.arc_count(), 10);
    }

    #[test]
    fn clique_stays_a_clique() {
        let (k4, _) = generate::clique_undirected(4);
        let ch = contract_all(&k4, &Order::from_vertices(vec![3, 1, 0, 2]).unwrap()).unwrap();
        assert_eq!(ch.arc_count(), 6);
        assert_eq!(ch.shortcut_count(), 0);
    }

    #[test]
    fn cycle_fill() {
        let c6 = UndirectedGraph::from_edges(6, (0..6).map(|v| (v, (v + 1) % 6)));
        let ch = contract_all(&c6, &Order::identity(6)).unwrap();
        assert_eq!(ch.arc_count(), 9);
        let ch = contract_all(&c6, &Order::from_vertices(vec![0, 2, 4, 1, 3, 5]).unwrap()).unwrap();
        assert_eq!(ch.arc_count(), 9);
        assert_eq!(ch, contract_all_naive(&c6, ch.order()).unwrap());
        // every triangulation of a hexagon needs three chords
        let nd = crate::ordering::nested_dissection_order(&c6, &crate::ordering::BfsBisector::default(), 1).unwrap();
        assert_eq!(contract_all(&c6, &nd).unwrap().arc_count(), 9);
    }

    #[test]
    fn adjacency_views_agree() {
        let g = generate::random_undirected(40, 90, 3);
        let order = generate::random_order(40, 4);
        let ch = contract_all(&g, &order).unwrap();
        for v in 0..40u32 {
            for (i, &t) in ch.down_neighbors(v).iter().enumerate() {
                let a = ch.down_arcs(v)[i] as usize;
                assert_eq!((ch.tail(a), ch.head(a)), (t, v));
                assert_eq!(ch.find_arc(v, t), Some(a));
            }
            assert!(ch.down_neighbors(v).windows(2).all(|w| w[0] < w[1]));
        }
        assert_eq!(ch.find_arc(0, 0), None);
    }

    #[test]
    fn binary_roundtrip_and_rejection() {
        let g = generate::random_undirected(30, 60, 9);
        let ch = contract_all(&g, &generate::random_order(30, 1)).unwrap();
        let mut bytes = Vec::new();
        write_ch(&ch, 77, &mut bytes).unwrap();
        let (back, hash) = read_ch(bytes.as_slice()).unwrap();
        assert_eq!((back, hash), (ch, 77));
        assert!(read_ch(&bytes[..bytes.len() - 3]).is_err());
        let mut wrong = bytes.clone();
        wrong[0] = b'X';
        assert!(matches!(read_ch(wrong.as_slice()), Err(Error::BadFormat(_))));
    }

    #[test]
    fn rejects_order_of_wrong_length() {
        assert!(contract_all(&path(4), &Order::identity(3)).is_err());
    }

    /// Upward neighborhoods of a chordal supergraph form cliques.
    fn assert_upward_cliques(ch: &ChTopology) {
        for v in 0..ch.vertex_count() as u32 {
            let up = ch.up_neighbors(v);
            for (i, &a) in up.iter().enumerate() {
                for &b in &up[i + 1..] {
                    assert!(ch.find_arc(a, b).is_some(), "missing fill arc {a}-{b}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn matches_naive_contraction(n in 1u32..40, extra in 0usize..80, seed in 0u64..1000) {
            let g = generate::random_undirected(n as usize, extra, seed);
            let order = generate::random_order(n as usize, seed + 1);
            let fast = contract_all(&g, &order).unwrap();
            let naive = contract_all_naive(&g, &order).unwrap();
            prop_assert_eq!(arcs(&fast), arcs(&naive));
            assert_upward_cliques(&fast);
            let rank = order.ranks();
            for (u, v) in g.edges() {
                prop_assert!(fast.find_arc(rank[u as usize], rank[v as usize]).is_some());
            }
        }

        #[test]
        fn levels_strictly_increase_along_arcs(n in 1u32..40, extra in 0usize..80, seed in 0u64..1000) {
            let g = generate::random_undirected(n as usize, extra, seed);
            let ch = contract_all(&g, &generate::random_order(n as usize, seed)).unwrap();
            for a in 0..ch.arc_count() {
                prop_assert!(ch.level(ch.tail(a)) < ch.level(ch.head(a)));
            }
            for v in 0..n {
                let expected = ch.down_neighbors(v).iter().map(|&t| ch.level(t) + 1).max().unwrap_or(0);
                prop_assert_eq!(ch.level(v), expected);
            }
        }
    }

    /// The ancestors of `v` in the elimination tree are exactly the vertices
    /// reachable from `v` along upward arcs.
    #[test]
    fn ancestors_are_the_upward_reachable_set() {
        for seed in 0..20 {
            let g = generate::random_undirected(35, 50, seed);
            let ch = contract_all(&g, &generate::random_order(35, seed + 100)).unwrap();
            let tree = ch.elimination_tree();
            for v in 0..35u32 {
                let mut seen = BTreeSet::from([v]);
                let mut stack = vec![v];
                while let Some(x) = stack.pop() {
                    for &y in ch.up_neighbors(x) {
                        if seen.insert(y) {
                            stack.push(y);
                        }
                    }
                }
                let ancestors: BTreeSet<u32> = tree.ancestors(v).collect();
                assert_eq!(ancestors, seen);
            }
        }
    }
}
