//! Triangle enumeration on the hierarchy.
//!
//! For an arc `(x, y)` with `x < y` and a third vertex `z`:
//!
//! * lower: `z < x`, arcs `(z, x)` and `(z, y)`;
//! * intermediate: `x < z < y`, arcs `(x, z)` and `(z, y)`;
//! * upper: `z > y`, arcs `(x, z)` and `(y, z)`.
//!
//! Enumeration intersects the two sorted neighbor lists involved. A
//! [`TriangleIndex`] precomputes the pairs for the arcs whose tail lies in
//! the lowest levels, where most of the merge work concentrates.

use crate::construction::ChTopology;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TriangleKind {
    Lower,
    Intermediate,
    Upper,
}

impl TriangleKind {
    pub const ALL: [TriangleKind; 3] = [TriangleKind::Lower, TriangleKind::Intermediate, TriangleKind::Upper];

    fn slot(self) -> usize {
        self as usize
    }
}

/// A triangle of some arc: the third vertex and the two other arcs, the one
/// touching the arc's tail first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Triangle {
    pub third: u32,
    pub first: u32,
    pub second: u32,
}

#[inline]
fn intersect<F: FnMut(usize, usize)>(a: &[u32], b: &[u32], mut f: F) {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                f(i, j);
                i += 1;
                j += 1;
            }
        }
    }
}

/// Merge-scan enumeration in ascending order of the third vertex.
#[inline]
pub(crate) fn scan<F: FnMut(Triangle)>(ch: &ChTopology, kind: TriangleKind, arc: usize, mut f: F) {
    let (x, y) = (ch.tail(arc), ch.head(arc));
    match kind {
        TriangleKind::Lower => {
            let (dx, dy) = (ch.down_neighbors(x), ch.down_neighbors(y));
            let (ax, ay) = (ch.down_arcs(x), ch.down_arcs(y));
            intersect(dx, dy, |i, j| f(Triangle { third: dx[i], first: ax[i], second: ay[j] }));
        }
        TriangleKind::Intermediate => {
            let ux = ch.up_neighbors(x);
            let base = ch.up_arcs(x).start;
            let (dy, ay) = (ch.down_neighbors(y), ch.down_arcs(y));
            let end = ux.partition_point(|&z| z < y);
            intersect(&ux[..end], dy, |i, j| f(Triangle { third: ux[i], first: (base + i) as u32, second: ay[j] }));
        }
        TriangleKind::Upper => {
            let (ux, uy) = (ch.up_neighbors(x), ch.up_neighbors(y));
            let (bx, by) = (ch.up_arcs(x).start, ch.up_arcs(y).start);
            intersect(ux, uy, |i, j| f(Triangle { third: ux[i], first: (bx + i) as u32, second: (by + j) as u32 }));
        }
    }
}

/// Estimated merge cost per arc of lower-triangle enumeration.
fn lower_scan_cost(ch: &ChTopology, arc: usize) -> u64 {
    (ch.down_degree(ch.tail(arc)) + ch.down_degree(ch.head(arc))) as u64
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct KindIndex {
    first: Vec<u32>,
    pairs: Vec<u32>,
}

impl KindIndex {
    fn build(ch: &ChTopology, kind: TriangleKind, threshold: u32) -> Self {
        let m = ch.arc_count();
        let mut first = Vec::with_capacity(m + 1);
        let mut pairs = Vec::new();
        first.push(0u32);
        for arc in 0..m {
            if ch.level(ch.tail(arc)) < threshold {
                scan(ch, kind, arc, |t| {
                    pairs.push(t.first);
                    pairs.push(t.second);
                });
            }
            first.push((pairs.len() / 2) as u32);
        }
        Self { first, pairs }
    }

    fn entries(&self) -> usize {
        self.first.len() + self.pairs.len()
    }
}

/// Precomputed triangles for arcs whose tail level is below a threshold.
///
/// Per kind, an offset array over all arcs plus the arc-id pairs: `2t + m + 1`
/// entries for `t` stored triangles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleIndex {
    threshold: u32,
    kinds: [Option<KindIndex>; 3],
}

impl TriangleIndex {
    /// Indexes the given kinds for arcs whose tail has level `< threshold`.
    pub fn build(ch: &ChTopology, kinds: &[TriangleKind], threshold: u32) -> Self {
        let mut slots: [Option<KindIndex>; 3] = [None, None, None];
        for &kind in kinds {
            slots[kind.slot()] = Some(KindIndex::build(ch, kind, threshold));
        }
        Self { threshold, kinds: slots }
    }

    /// Index over the lowest levels that account for about a third of the
    /// unaccelerated lower-triangle merge cost.
    pub fn build_default(ch: &ChTopology, kinds: &[TriangleKind]) -> Self {
        Self::build(ch, kinds, default_threshold(ch))
    }

    pub fn threshold(&self) -> u32 {
        self.threshold
    }

    pub fn has_kind(&self, kind: TriangleKind) -> bool {
        self.kinds[kind.slot()].is_some()
    }

    pub fn covers(&self, ch: &ChTopology, kind: TriangleKind, arc: usize) -> bool {
        self.kinds[kind.slot()].is_some() && ch.level(ch.tail(arc)) < self.threshold
    }

    /// Stored 32-bit entries over all kinds.
    pub fn memory_entries(&self) -> usize {
        self.kinds.iter().flatten().map(KindIndex::entries).sum()
    }

    pub fn memory_bytes(&self) -> usize {
        4 * self.memory_entries()
    }

    pub fn triangle_count(&self, kind: TriangleKind) -> usize {
        self.kinds[kind.slot()].as_ref().map_or(0, |k| k.pairs.len() / 2)
    }

    /// Visits indexed triangles of `arc`; false if the arc is not covered.
    #[inline]
    fn visit<F: FnMut(Triangle)>(&self, ch: &ChTopology, kind: TriangleKind, arc: usize, f: &mut F) -> bool {
        let Some(index) = &self.kinds[kind.slot()] else { return false };
        if ch.level(ch.tail(arc)) >= self.threshold {
            return false;
        }
        let (b, e) = (index.first[arc] as usize, index.first[arc + 1] as usize);
        for pair in index.pairs[2 * b..2 * e].chunks_exact(2) {
            let (first, second) = (pair[0], pair[1]);
            let third = match kind {
                TriangleKind::Lower => ch.tail(first as usize),
                _ => ch.head(first as usize),
            };
            f(Triangle { third, first, second });
        }
        true
    }
}

/// Smallest level threshold whose indexed arcs carry at least a third of the
/// total estimated lower-triangle merge cost.
pub fn default_threshold(ch: &ChTopology) -> u32 {
    let levels = ch.level_count();
    let mut per_level = vec![0u64; levels];
    for arc in 0..ch.arc_count() {
        per_level[ch.level(ch.tail(arc)) as usize] += lower_scan_cost(ch, arc);
    }
    let total: u64 = per_level.iter().sum();
    let mut acc = 0u64;
    for (l, cost) in per_level.iter().enumerate() {
        if 3 * acc >= total {
            return l as u32;
        }
        acc += cost;
    }
    levels as u32
}

/// Largest level threshold whose index over `kinds` fits in `bytes`.
pub fn threshold_for_memory(ch: &ChTopology, kinds: &[TriangleKind], bytes: usize) -> u32 {
    let levels = ch.level_count();
    let m = ch.arc_count();
    let mut per_level = vec![0usize; levels];
    for arc in 0..m {
        let level = ch.level(ch.tail(arc)) as usize;
        for &kind in kinds {
            scan(ch, kind, arc, |_| per_level[level] += 2);
        }
    }
    let mut used = kinds.len() * (m + 1) * 4;
    if used > bytes {
        return 0;
    }
    for (l, entries) in per_level.iter().enumerate() {
        used += entries * 4;
        if used > bytes {
            return l as u32;
        }
    }
    levels as u32
}

/// Enumerates the triangles of `kind` on `arc` in ascending order of the
/// third vertex, from the index when it covers the arc.
pub fn for_each_triangle<F: FnMut(Triangle)>(
    ch: &ChTopology,
    index: Option<&TriangleIndex>,
    kind: TriangleKind,
    arc: usize,
    mut f: F,
) -> Result<()> {
    if arc >= ch.arc_count() {
        return Err(Error::ArcOutOfRange(arc));
    }
    visit(ch, index, kind, arc, &mut f);
    Ok(())
}

#[inline]
pub(crate) fn visit<F: FnMut(Triangle)>(
    ch: &ChTopology,
    index: Option<&TriangleIndex>,
    kind: TriangleKind,
    arc: usize,
    f: &mut F,
) {
    if !index.is_some_and(|i| i.visit(ch, kind, arc, f)) {
        scan(ch, kind, arc, f);
    }
}

pub fn for_each_lower_triangle<F: FnMut(Triangle)>(
    ch: &ChTopology,
    index: Option<&TriangleIndex>,
    arc: usize,
    f: F,
) -> Result<()> {
    for_each_triangle(ch, index, TriangleKind::Lower, arc, f)
}

pub fn for_each_intermediate_triangle<F: FnMut(Triangle)>(
    ch: &ChTopology,
    index: Option<&TriangleIndex>,
    arc: usize,
    f: F,
) -> Result<()> {
    for_each_triangle(ch, index, TriangleKind::Intermediate, arc, f)
}

pub fn for_each_upper_triangle<F: FnMut(Triangle)>(
    ch: &ChTopology,
    index: Option<&TriangleIndex>,
    arc: usize,
    f: F,
) -> Result<()> {
    for_each_triangle(ch, index, TriangleKind::Upper, arc, f)
}

/// Total number of lower triangles, which equals the number of each other kind.
pub fn count_triangles(ch: &ChTopology) -> usize {
    (0..ch.arc_count())
        .map(|a| {
            let mut c = 0;
            scan(ch, TriangleKind::Lower, a, |_| c += 1);
            c
        })
        .sum()
}
