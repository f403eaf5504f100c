//! Input graphs: parsing, normalization, serialization and simple transforms.
//!
//! Text formats are the DIMACS shortest-path challenge formats. Vertex IDs are
//! 1-based on disk and 0-based in memory.

use std::io::{BufRead, Read, Write};

use crate::error::{Error, Result};
use crate::ordering::Order;
use crate::{Weight, INF, INVALID};

const GRAPH_MAGIC: &[u8; 4] = b"CCHG";

/// Directed weighted graph in forward adjacency-array form.
///
/// Arcs are sorted by `(tail, head)`; an arc's index in that order is its
/// *input arc id*. `original_id` records the position of the arc among the
/// arcs it was built from (the line order of a DIMACS file).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputGraph {
    first_out: Vec<u32>,
    tail: Vec<u32>,
    head: Vec<u32>,
    weight: Vec<Weight>,
    original_id: Vec<u32>,
}

impl InputGraph {
    /// Builds a normalized graph: loops are dropped and parallel arcs collapse
    /// to the one with minimum weight (the earliest one on ties).
    pub fn from_arcs<I>(vertex_count: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, u32, Weight)>,
    {
        let mut list: Vec<(u32, u32, Weight, u32)> = Vec::new();
        for (i, (t, h, w)) in arcs.into_iter().enumerate() {
            for id in [t, h] {
                if id as usize >= vertex_count {
                    return Err(Error::VertexOutOfRange { id: id as u64, vertex_count });
                }
            }
            if w == 0 || w > INF {
                return Err(Error::InvalidWeight { weight: w as u64 });
            }
            if t != h {
                list.push((t, h, w, i as u32));
            }
        }
        list.sort_unstable_by_key(|&(t, h, w, id)| (t, h, w, id));
        list.dedup_by_key(|a| (a.0, a.1));

        let mut first_out = vec![0u32; vertex_count + 1];
        for &(t, ..) in &list {
            first_out[t as usize + 1] += 1;
        }
        for v in 0..vertex_count {
            first_out[v + 1] += first_out[v];
        }
        Ok(Self {
            first_out,
            tail: list.iter().map(|a| a.0).collect(),
            head: list.iter().map(|a| a.1).collect(),
            weight: list.iter().map(|a| a.2).collect(),
            original_id: list.iter().map(|a| a.3).collect(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.first_out.len() - 1
    }

    pub fn arc_count(&self) -> usize {
        self.head.len()
    }

    pub fn tail(&self, arc: usize) -> u32 {
        self.tail[arc]
    }

    pub fn head(&self, arc: usize) -> u32 {
        self.head[arc]
    }

    pub fn weight(&self, arc: usize) -> Weight {
        self.weight[arc]
    }

    pub fn original_id(&self, arc: usize) -> u32 {
        self.original_id[arc]
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weight
    }

    pub fn first_out(&self) -> &[u32] {
        &self.first_out
    }

    pub fn heads(&self) -> &[u32] {
        &self.head
    }

    /// Arc ids leaving `v`.
    pub fn out_arcs(&self, v: u32) -> std::ops::Range<usize> {
        self.first_out[v as usize] as usize..self.first_out[v as usize + 1] as usize
    }

    pub fn find_arc(&self, tail: u32, head: u32) -> Option<usize> {
        let range = self.out_arcs(tail);
        let start = range.start;
        self.head[range].binary_search(&head).ok().map(|i| start + i)
    }

    /// `(tail, head, weight)` for every arc in id order.
    pub fn arcs(&self) -> impl Iterator<Item = (u32, u32, Weight)> + '_ {
        (0..self.arc_count()).map(move |a| (self.tail[a], self.head[a], self.weight[a]))
    }

    pub fn set_weight(&mut self, arc: usize, weight: Weight) -> Result<()> {
        if arc >= self.arc_count() {
            return Err(Error::ArcOutOfRange(arc));
        }
        if weight == 0 || weight > INF {
            return Err(Error::InvalidWeight { weight: weight as u64 });
        }
        self.weight[arc] = weight;
        Ok(())
    }

    /// The graph with every arc reversed (arc ids are not preserved).
    pub fn reversed(&self) -> InputGraph {
        InputGraph::from_arcs(self.vertex_count(), self.arcs().map(|(t, h, w)| (h, t, w)))
            .expect("reversing a valid graph yields a valid graph")
    }
}

/// Simple undirected graph with symmetric, sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UndirectedGraph {
    first_out: Vec<u32>,
    neighbors: Vec<u32>,
}

impl UndirectedGraph {
    /// Builds a simple graph from arbitrary vertex pairs; loops and duplicates
    /// are discarded.
    pub fn from_edges<I>(vertex_count: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let mut pairs: Vec<(u32, u32)> = Vec::new();
        for (a, b) in edges {
            assert!((a as usize) < vertex_count && (b as usize) < vertex_count);
            if a != b {
                pairs.push((a, b));
                pairs.push((b, a));
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        let mut first_out = vec![0u32; vertex_count + 1];
        for &(a, _) in &pairs {
            first_out[a as usize + 1] += 1;
        }
        for v in 0..vertex_count {
            first_out[v + 1] += first_out[v];
        }
        Self { first_out, neighbors: pairs.into_iter().map(|p| p.1).collect() }
    }

    pub fn vertex_count(&self) -> usize {
        self.first_out.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.neighbors[self.first_out[v as usize] as usize..self.first_out[v as usize + 1] as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.neighbors(v).len()
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        self.neighbors(a).binary_search(&b).is_ok()
    }

    /// Every edge once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.vertex_count() as u32)
            .flat_map(move |u| self.neighbors(u).iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Subgraph induced by `vertices`; local id `i` stands for `vertices[i]`.
    pub fn induced_subgraph(&self, vertices: &[u32]) -> UndirectedGraph {
        let mut local = vec![INVALID; self.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v as usize] = i as u32;
        }
        self.induced_subgraph_with(vertices, &mut local)
    }

    /// Like [`induced_subgraph`](Self::induced_subgraph) with a caller-owned
    /// scratch map that is `INVALID` everywhere on entry and on return.
    pub(crate) fn induced_subgraph_with(&self, vertices: &[u32], local: &mut [u32]) -> UndirectedGraph {
        for (i, &v) in vertices.iter().enumerate() {
            local[v as usize] = i as u32;
        }
        let mut first_out = Vec::with_capacity(vertices.len() + 1);
        let mut neighbors = Vec::new();
        first_out.push(0);
        for &v in vertices {
            let start = neighbors.len();
            neighbors.extend(self.neighbors(v).iter().map(|&u| local[u as usize]).filter(|&u| u != INVALID));
            neighbors[start..].sort_unstable();
            first_out.push(neighbors.len() as u32);
        }
        for &v in vertices {
            local[v as usize] = INVALID;
        }
        UndirectedGraph { first_out, neighbors }
    }

    /// Connected components, each sorted ascending, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<u32>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        let mut stack = Vec::new();
        for s in 0..n as u32 {
            if seen[s as usize] {
                continue;
            }
            seen[s as usize] = true;
            stack.push(s);
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &u in self.neighbors(v) {
                    if !seen[u as usize] {
                        seen[u as usize] = true;
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        components
    }
}

/// Planar vertex positions, used only by the inertial bisector.
#[derive(Clone, Debug, PartialEq)]
pub struct Coordinates {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl Coordinates {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::SizeMismatch(format!("{} x-values, {} y-values", x.len(), y.len())));
        }
        Ok(Self { x, y })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn parse_field<T: std::str::FromStr>(field: Option<&str>, line: usize, what: &str) -> Result<T> {
    let field = field.ok_or_else(|| parse_error(line, format!("missing {what}")))?;
    field.parse().map_err(|_| parse_error(line, format!("bad {what} '{field}'")))
}

/// Parses a DIMACS `.gr` stream.
pub fn parse_dimacs_gr<R: BufRead>(reader: R) -> Result<InputGraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut arcs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let mut fields = line.split_whitespace();
        match fields.next() {
            None | Some("c") => {}
            Some("p") => {
                if header.is_some() {
                    return Err(parse_error(lineno, "duplicate problem line"));
                }
                if fields.next() != Some("sp") {
                    return Err(parse_error(lineno, "expected 'p sp <n> <m>'"));
                }
                let n: usize = parse_field(fields.next(), lineno, "vertex count")?;
                let m: usize = parse_field(fields.next(), lineno, "arc count")?;
                if n > INVALID as usize {
                    return Err(parse_error(lineno, "vertex count too large"));
                }
                header = Some((n, m));
            }
            Some("a") => {
                let (n, _) = header.ok_or_else(|| parse_error(lineno, "arc before problem line"))?;
                let tail: u64 = parse_field(fields.next(), lineno, "tail")?;
                let head: u64 = parse_field(fields.next(), lineno, "head")?;
                let weight: u64 = parse_field(fields.next(), lineno, "weight")?;
                for id in [tail, head] {
                    if id == 0 || id > n as u64 {
                        return Err(Error::VertexOutOfRange { id, vertex_count: n });
                    }
                }
                if weight == 0 || weight > INF as u64 {
                    return Err(Error::InvalidWeight { weight });
                }
                arcs.push(((tail - 1) as u32, (head - 1) as u32, weight as Weight));
            }
            Some(other) => return Err(parse_error(lineno, format!("unknown line type '{other}'"))),
        }
    }
    let (n, m) = header.ok_or_else(|| parse_error(0, "missing problem line"))?;
    if arcs.len() != m {
        return Err(Error::ArcCountMismatch { expected: m, found: arcs.len() });
    }
    InputGraph::from_arcs(n, arcs)
}

/// Canonical DIMACS serialization: arcs sorted by `(tail, head)`.
pub fn write_dimacs_gr<W: Write>(graph: &InputGraph, mut out: W) -> Result<()> {
    writeln!(out, "p sp {} {}", graph.vertex_count(), graph.arc_count())?;
    for (t, h, w) in graph.arcs() {
        writeln!(out, "a {} {} {}", t + 1, h + 1, w)?;
    }
    Ok(())
}

/// Parses a DIMACS `.co` stream (`v <id> <x> <y>`) for a graph of
/// `vertex_count` vertices. Every vertex needs exactly one line.
pub fn parse_dimacs_co<R: BufRead>(reader: R, vertex_count: usize) -> Result<Coordinates> {
    let mut x = vec![f64::NAN; vertex_count];
    let mut y = vec![f64::NAN; vertex_count];
    let mut seen = vec![false; vertex_count];
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let mut fields = line.split_whitespace();
        match fields.next() {
            None | Some("c") | Some("p") => {}
            Some("v") => {
                let id: u64 = parse_field(fields.next(), lineno, "vertex id")?;
                if id == 0 || id > vertex_count as u64 {
                    return Err(Error::VertexOutOfRange { id, vertex_count });
                }
                let v = (id - 1) as usize;
                if seen[v] {
                    return Err(parse_error(lineno, format!("duplicate coordinate for vertex {id}")));
                }
                seen[v] = true;
                x[v] = parse_field(fields.next(), lineno, "x")?;
                y[v] = parse_field(fields.next(), lineno, "y")?;
            }
            Some(other) => return Err(parse_error(lineno, format!("unknown line type '{other}'"))),
        }
    }
    if let Some(v) = seen.iter().position(|&s| !s) {
        return Err(parse_error(0, format!("no coordinate for vertex {}", v + 1)));
    }
    Coordinates::new(x, y)
}

pub fn write_dimacs_co<W: Write>(coords: &Coordinates, mut out: W) -> Result<()> {
    writeln!(out, "p aux sp co {}", coords.len())?;
    for v in 0..coords.len() {
        writeln!(out, "v {} {} {}", v + 1, coords.x[v], coords.y[v])?;
    }
    Ok(())
}

pub(crate) fn write_u32s<W: Write>(out: &mut W, values: &[u32]) -> Result<()> {
    let mut buf = Vec::with_capacity(values.len() * 4);
    for v in values {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    out.write_all(&buf)?;
    Ok(())
}

pub(crate) fn read_u32<R: Read>(input: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    input.read_exact(&mut b).map_err(|e| Error::BadFormat(format!("truncated file: {e}")))?;
    Ok(u32::from_le_bytes(b))
}

pub(crate) fn read_u64<R: Read>(input: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    input.read_exact(&mut b).map_err(|e| Error::BadFormat(format!("truncated file: {e}")))?;
    Ok(u64::from_le_bytes(b))
}

pub(crate) fn read_u32s<R: Read>(input: &mut R, len: usize) -> Result<Vec<u32>> {
    let mut buf = vec![0u8; len * 4];
    input.read_exact(&mut buf).map_err(|e| Error::BadFormat(format!("truncated file: {e}")))?;
    Ok(buf.chunks_exact(4).map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]])).collect())
}

pub(crate) fn read_magic<R: Read>(input: &mut R, magic: &[u8; 4]) -> Result<()> {
    let mut b = [0u8; 4];
    input.read_exact(&mut b).map_err(|e| Error::BadFormat(format!("truncated file: {e}")))?;
    if &b != magic {
        return Err(Error::BadFormat(format!(
            "expected magic {:?}, found {:?}",
            String::from_utf8_lossy(magic),
            String::from_utf8_lossy(&b)
        )));
    }
    Ok(())
}

/// Binary cache: `"CCHG"`, n, m, first-out (n+1), heads (m), weights (m);
/// all little-endian `u32`.
pub fn write_binary_graph<W: Write>(graph: &InputGraph, mut out: W) -> Result<()> {
    out.write_all(GRAPH_MAGIC)?;
    write_u32s(&mut out, &[graph.vertex_count() as u32, graph.arc_count() as u32])?;
    write_u32s(&mut out, &graph.first_out)?;
    write_u32s(&mut out, &graph.head)?;
    write_u32s(&mut out, &graph.weight)?;
    Ok(())
}

pub fn read_binary_graph<R: Read>(mut input: R) -> Result<InputGraph> {
    read_magic(&mut input, GRAPH_MAGIC)?;
    let n = read_u32(&mut input)? as usize;
    let m = read_u32(&mut input)? as usize;
    let first_out = read_u32s(&mut input, n + 1)?;
    let head = read_u32s(&mut input, m)?;
    let weight = read_u32s(&mut input, m)?;
    if first_out[0] != 0 || first_out[n] as usize != m || first_out.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::BadFormat("inconsistent first-out array".into()));
    }
    let arcs = (0..n).flat_map(|v| {
        let (first_out, head, weight) = (&first_out, &head, &weight);
        (first_out[v] as usize..first_out[v + 1] as usize).map(move |a| (v as u32, head[a], weight[a]))
    });
    InputGraph::from_arcs(n, arcs)
}

/// Restricts `graph` to its largest strongly connected component.
///
/// Returns the component graph and a map from old to new vertex ids (removed
/// vertices map to [`INVALID`]). Ties between equally large components go to
/// the one containing the smallest vertex id; surviving vertices keep their
/// relative order.
pub fn largest_scc(graph: &InputGraph) -> (InputGraph, Vec<u32>) {
    let n = graph.vertex_count();
    let component = strongly_connected_components(graph);
    let count = component.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
    let mut sizes = vec![0usize; count];
    let mut smallest = vec![u32::MAX; count];
    for (v, &c) in component.iter().enumerate() {
        sizes[c as usize] += 1;
        smallest[c as usize] = smallest[c as usize].min(v as u32);
    }
    let best = (0..count).max_by_key(|&c| (sizes[c], std::cmp::Reverse(smallest[c])));
    let mut map = vec![INVALID; n];
    let mut next = 0u32;
    if let Some(best) = best {
        for v in 0..n {
            if component[v] as usize == best {
                map[v] = next;
                next += 1;
            }
        }
    }
    let mut kept = Vec::new();
    let mut ids = Vec::new();
    for a in 0..graph.arc_count() {
        let (t, h) = (map[graph.tail(a) as usize], map[graph.head(a) as usize]);
        if t != INVALID && h != INVALID {
            kept.push((t, h, graph.weight(a)));
            ids.push(graph.original_id(a));
        }
    }
    let mut result = InputGraph::from_arcs(next as usize, kept).expect("subgraph of a valid graph");
    // Arc order is unchanged by relabeling, so original ids carry over 1:1.
    result.original_id = ids;
    (result, map)
}

/// Kosaraju's algorithm with explicit stacks; returns a component index per vertex.
fn strongly_connected_components(graph: &InputGraph) -> Vec<u32> {
    let n = graph.vertex_count();
    let mut visited = vec![false; n];
    let mut finish = Vec::with_capacity(n);
    let mut stack: Vec<(u32, usize)> = Vec::new();
    for s in 0..n as u32 {
        if visited[s as usize] {
            continue;
        }
        visited[s as usize] = true;
        stack.push((s, graph.out_arcs(s).start));
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next < graph.out_arcs(v).end {
                let h = graph.head(*next);
                *next += 1;
                if !visited[h as usize] {
                    visited[h as usize] = true;
                    stack.push((h, graph.out_arcs(h).start));
                }
            } else {
                finish.push(v);
                stack.pop();
            }
        }
    }
    let reversed = graph.reversed();
    let mut component = vec![INVALID; n];
    let mut count = 0u32;
    let mut dfs = Vec::new();
    for &s in finish.iter().rev() {
        if component[s as usize] != INVALID {
            continue;
        }
        component[s as usize] = count;
        dfs.push(s);
        while let Some(v) = dfs.pop() {
            for a in reversed.out_arcs(v) {
                let h = reversed.head(a);
                if component[h as usize] == INVALID {
                    component[h as usize] = count;
                    dfs.push(h);
                }
            }
        }
        count += 1;
    }
    component
}

/// Drops directions and weights.
pub fn to_undirected(graph: &InputGraph) -> UndirectedGraph {
    UndirectedGraph::from_edges(graph.vertex_count(), graph.arcs().map(|(t, h, _)| (t, h)))
}

/// Relabels vertices so that the vertex with rank `r` gets id `r`.
pub fn apply_order_to_ids(
    graph: &InputGraph,
    order: &Order,
    coords: Option<&Coordinates>,
) -> Result<(InputGraph, Option<Coordinates>)> {
    let n = graph.vertex_count();
    if order.len() != n {
        return Err(Error::NotAPermutation(format!("order has {} entries, graph {} vertices", order.len(), n)));
    }
    let rank = order.ranks();
    let mut arcs: Vec<(u32, u32, Weight, u32)> = (0..graph.arc_count())
        .map(|a| (rank[graph.tail(a) as usize], rank[graph.head(a) as usize], graph.weight(a), graph.original_id(a)))
        .collect();
    arcs.sort_unstable_by_key(|a| (a.0, a.1));
    let mut result = InputGraph::from_arcs(n, arcs.iter().map(|a| (a.0, a.1, a.2)))?;
    result.original_id = arcs.iter().map(|a| a.3).collect();
    let coords = match coords {
        Some(c) => {
            if c.len() != n {
                return Err(Error::SizeMismatch(format!("{} coordinates for {} vertices", c.len(), n)));
            }
            let pi = order.vertices();
            Some(Coordinates::new(
                pi.iter().map(|&v| c.x[v as usize]).collect(),
                pi.iter().map(|&v| c.y[v as usize]).collect(),
            )?)
        }
        None => None,
    };
    Ok((result, coords))
}

/// Identity stamp of a file's bytes: the first eight bytes of its SHA-256.
pub fn content_hash(bytes: &[u8]) -> u64 {
    use sha2::{Digest, Sha256};
    let digest = Sha256::digest(bytes);
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<InputGraph> {
        parse_dimacs_gr(text.as_bytes())
    }

    #[test]
    fn parses_single_arc() {
        let g = parse("c hello\np sp 2 1\na 1 2 5\n").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.arcs().collect::<Vec<_>>(), vec![(0, 1, 5)]);
    }

    #[test]
    fn collapses_parallel_arcs_and_drops_loops() {
        let g = parse("p sp 3 3\na 1 2 4\na 1 2 7\na 2 2 1\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.arcs().collect::<Vec<_>>(), vec![(0, 1, 4)]);
        assert_eq!(g.original_id(0), 0);
        let g = parse("p sp 2 2\na 1 2 9\na 1 2 3\n").unwrap();
        assert_eq!(g.arcs().collect::<Vec<_>>(), vec![(0, 1, 3)]);
        assert_eq!(g.original_id(0), 1);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse("p sp 2 1\na 1 3 5\n"), Err(Error::VertexOutOfRange { id: 3, .. })));
        assert!(matches!(parse("p sp 2 1\na 0 1 5\n"), Err(Error::VertexOutOfRange { id: 0, .. })));
        assert!(matches!(parse("p sp 2 1\na 1 2 0\n"), Err(Error::InvalidWeight { weight: 0 })));
        assert!(matches!(parse("p sp 2 1\na 1 2 2147483648\n"), Err(Error::InvalidWeight { .. })));
        assert!(matches!(parse("p sp 2 2\na 1 2 5\n"), Err(Error::ArcCountMismatch { expected: 2, found: 1 })));
        assert!(matches!(parse("p sp two 1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("a 1 2 3\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse("c only comments\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse("p max 2 1\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn canonical_serialization_is_a_fixed_point() {
        let g = parse("p sp 3 4\na 3 1 2\na 1 2 4\na 2 3 1\na 1 3 8\n").unwrap();
        let mut out = Vec::new();
        write_dimacs_gr(&g, &mut out).unwrap();
        assert_eq!(String::from_utf8(out.clone()).unwrap(), "p sp 3 4\na 1 2 4\na 1 3 8\na 2 3 1\na 3 1 2\n");
        let again = parse_dimacs_gr(&out[..]).unwrap();
        let mut out2 = Vec::new();
        write_dimacs_gr(&again, &mut out2).unwrap();
        assert_eq!(out, out2);
    }

    #[test]
    fn coordinates_roundtrip() {
        let co = "p aux sp co 2\nv 2 3.5 -1\nv 1 0 2.25\n";
        let c = parse_dimacs_co(co.as_bytes(), 2).unwrap();
        assert_eq!(c.x, vec![0.0, 3.5]);
        assert_eq!(c.y, vec![2.25, -1.0]);
        let mut out = Vec::new();
        write_dimacs_co(&c, &mut out).unwrap();
        assert_eq!(parse_dimacs_co(&out[..], 2).unwrap(), c);
        assert!(parse_dimacs_co("v 1 0 0\n".as_bytes(), 2).is_err());
        assert!(parse_dimacs_co("v 3 0 0\n".as_bytes(), 2).is_err());
    }

    #[test]
    fn binary_roundtrip() {
        let g = parse("p sp 4 4\na 1 2 4\na 2 3 1\na 3 4 7\na 4 1 2\n").unwrap();
        let mut buf = Vec::new();
        write_binary_graph(&g, &mut buf).unwrap();
        assert_eq!(&buf[..4], b"CCHG");
        assert_eq!(buf.len(), 4 + 8 + 5 * 4 + 4 * 4 * 2);
        assert_eq!(read_binary_graph(&buf[..]).unwrap(), g);
        buf[0] = b'X';
        assert!(matches!(read_binary_graph(&buf[..]), Err(Error::BadFormat(_))));
    }

    #[test]
    fn largest_scc_keeps_bigger_cycle() {
        // 3-cycle on {0,1,2}, 2-cycle on {3,4}
        let g = InputGraph::from_arcs(5, [(0, 1, 1), (1, 2, 1), (2, 0, 1), (3, 4, 1), (4, 3, 1)]).unwrap();
        let (scc, map) = largest_scc(&g);
        assert_eq!(scc.vertex_count(), 3);
        assert_eq!(scc.arc_count(), 3);
        assert_eq!(map, vec![0, 1, 2, INVALID, INVALID]);
    }

    #[test]
    fn largest_scc_is_identity_on_strongly_connected() {
        let g = InputGraph::from_arcs(3, [(0, 1, 2), (1, 2, 3), (2, 0, 4), (0, 2, 5)]).unwrap();
        let (scc, map) = largest_scc(&g);
        assert_eq!(scc, g);
        assert_eq!(map, vec![0, 1, 2]);
    }

    #[test]
    fn largest_scc_on_path_keeps_smallest_id() {
        let g = InputGraph::from_arcs(3, [(0, 1, 1), (1, 2, 1)]).unwrap();
        let (scc, map) = largest_scc(&g);
        assert_eq!(scc.vertex_count(), 1);
        assert_eq!(scc.arc_count(), 0);
        assert_eq!(map, vec![0, INVALID, INVALID]);
    }

    #[test]
    fn undirected_view() {
        let g = InputGraph::from_arcs(3, [(0, 1, 1), (1, 0, 1), (1, 2, 1)]).unwrap();
        let u = to_undirected(&g);
        assert_eq!(u.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        let empty = InputGraph::from_arcs(4, []).unwrap();
        assert_eq!(to_undirected(&empty).edge_count(), 0);
    }

    #[test]
    fn order_relabeling() {
        let g = InputGraph::from_arcs(2, [(0, 1, 5)]).unwrap();
        let (same, _) = apply_order_to_ids(&g, &Order::identity(2), None).unwrap();
        assert_eq!(same, g);
        let swap = Order::from_vertices(vec![1, 0]).unwrap();
        let (swapped, _) = apply_order_to_ids(&g, &swap, None).unwrap();
        assert_eq!(swapped.arcs().collect::<Vec<_>>(), vec![(1, 0, 5)]);
        assert!(apply_order_to_ids(&g, &Order::identity(3), None).is_err());
    }
}
