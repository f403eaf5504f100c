//! Metrics on the hierarchy and how to compute them.
//!
//! A [`Metric`] stores, for every hierarchy arc `(x, y)` with `x < y`, an
//! upward weight (`x → y`) and a downward weight (`y → x`), optionally for
//! several weight functions ("lanes") at once. The layout interleaves
//! `[arc][lane][direction]` so that one triangle enumeration serves all
//! lanes.
//!
//! * [`Customizer::basic`] relaxes lower triangles bottom-up; afterwards
//!   every shortest path has an up-down counterpart of equal length.
//! * [`Customizer::perfect`] relaxes intermediate and upper triangles
//!   top-down; afterwards every arc carries its exact distance.
//! * [`SearchGraphs`] drop arcs that no shortest up-down path needs.
//! * [`PartialUpdater`] repairs a customized metric after input weight
//!   changes by re-relaxing only affected arcs.

use std::collections::BTreeSet;
use std::io::{Read, Write};
use std::ops::Range;

use rayon::prelude::*;

use crate::construction::ChTopology;
use crate::error::{Error, Result};
use crate::graph_io::{read_magic, read_u32, read_u32s, read_u64, write_u32s, InputGraph};
use crate::triangles::{visit, TriangleIndex, TriangleKind};
use crate::{Weight, INF, INVALID};

pub const UP: usize = 0;
pub const DOWN: usize = 1;

const METRIC_MAGIC: &[u8; 4] = b"CCHM";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetricState {
    Respecting,
    Customized,
    Perfect,
}

impl MetricState {
    fn code(self) -> u32 {
        self as u32
    }

    fn from_code(code: u32) -> Result<Self> {
        match code {
            0 => Ok(Self::Respecting),
            1 => Ok(Self::Customized),
            2 => Ok(Self::Perfect),
            _ => Err(Error::BadFormat(format!("unknown metric state {code}"))),
        }
    }
}

/// Correspondence between input arcs and (hierarchy arc, direction).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcMap {
    to_ch: Vec<(u32, u8)>,
    to_input: Vec<u32>,
}

impl ArcMap {
    pub fn new(graph: &InputGraph, ch: &ChTopology) -> Result<Self> {
        if graph.vertex_count() != ch.vertex_count() {
            return Err(Error::SizeMismatch(format!(
                "graph has {} vertices, hierarchy {}",
                graph.vertex_count(),
                ch.vertex_count()
            )));
        }
        let rank = ch.order().ranks();
        let mut to_ch = Vec::with_capacity(graph.arc_count());
        let mut to_input = vec![INVALID; 2 * ch.arc_count()];
        for a in 0..graph.arc_count() {
            let (rt, rh) = (rank[graph.tail(a) as usize], rank[graph.head(a) as usize]);
            let arc = ch.find_arc(rt, rh).ok_or(Error::MissingChArc(a))?;
            let dir = if rt < rh { UP } else { DOWN };
            to_ch.push((arc as u32, dir as u8));
            to_input[2 * arc + dir] = a as u32;
        }
        Ok(Self { to_ch, to_input })
    }

    pub fn input_arc_count(&self) -> usize {
        self.to_ch.len()
    }

    /// Hierarchy arc and direction of input arc `input`.
    pub fn ch_arc(&self, input: usize) -> (usize, usize) {
        let (arc, dir) = self.to_ch[input];
        (arc as usize, dir as usize)
    }

    /// Input arc realizing `arc` in direction `dir`, if any.
    pub fn input_arc(&self, arc: usize, dir: usize) -> Option<usize> {
        match self.to_input[2 * arc + dir] {
            INVALID => None,
            a => Some(a as usize),
        }
    }
}

/// Weights on hierarchy arcs. See the [module docs](self) for the layout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metric {
    lanes: usize,
    arcs: usize,
    input: Vec<Weight>,
    weights: Vec<Weight>,
    state: MetricState,
}

impl Metric {
    /// Respecting metric; `lanes[l][a]` is the weight of input arc `a` in lane `l`.
    /// Arcs without an input counterpart get [`INF`].
    pub fn respecting(ch: &ChTopology, map: &ArcMap, lanes: &[&[Weight]]) -> Result<Self> {
        if lanes.is_empty() {
            return Err(Error::LaneMismatch("at least one lane is needed".into()));
        }
        let k = lanes.len();
        let mut input = vec![INF; 2 * k * ch.arc_count()];
        for (l, weights) in lanes.iter().enumerate() {
            if weights.len() != map.input_arc_count() {
                return Err(Error::LaneMismatch(format!(
                    "lane {l} has {} weights for {} input arcs",
                    weights.len(),
                    map.input_arc_count()
                )));
            }
            for (a, &w) in weights.iter().enumerate() {
                if !(1..=INF).contains(&w) {
                    return Err(Error::InvalidWeight { weight: w as u64 });
                }
                let (arc, dir) = map.ch_arc(a);
                input[(arc * k + l) * 2 + dir] = w;
            }
        }
        Ok(Self { lanes: k, arcs: ch.arc_count(), weights: input.clone(), input, state: MetricState::Respecting })
    }

    pub fn lanes(&self) -> usize {
        self.lanes
    }

    pub fn arc_count(&self) -> usize {
        self.arcs
    }

    pub fn state(&self) -> MetricState {
        self.state
    }

    #[inline]
    fn index(&self, arc: usize, lane: usize, dir: usize) -> usize {
        (arc * self.lanes + lane) * 2 + dir
    }

    #[inline]
    pub fn get(&self, arc: usize, lane: usize, dir: usize) -> Weight {
        self.weights[self.index(arc, lane, dir)]
    }

    /// Weight of the input arc behind `arc` in direction `dir`, [`INF`] if none.
    #[inline]
    pub fn input(&self, arc: usize, lane: usize, dir: usize) -> Weight {
        self.input[self.index(arc, lane, dir)]
    }

    #[inline]
    pub fn up(&self, arc: usize) -> Weight {
        self.get(arc, 0, UP)
    }

    #[inline]
    pub fn down(&self, arc: usize) -> Weight {
        self.get(arc, 0, DOWN)
    }

    /// Copy of a single lane.
    pub fn lane(&self, lane: usize) -> Result<Metric> {
        if lane >= self.lanes {
            return Err(Error::LaneMismatch(format!("lane {lane} of {}", self.lanes)));
        }
        let pick = |v: &[Weight]| -> Vec<Weight> {
            (0..self.arcs).flat_map(|a| [v[self.index(a, lane, UP)], v[self.index(a, lane, DOWN)]]).collect()
        };
        Ok(Metric {
            lanes: 1,
            arcs: self.arcs,
            input: pick(&self.input),
            weights: pick(&self.weights),
            state: self.state,
        })
    }

    fn check(&self, ch: &ChTopology) -> Result<()> {
        if self.arcs != ch.arc_count() {
            return Err(Error::SizeMismatch(format!("metric has {} arcs, hierarchy {}", self.arcs, ch.arc_count())));
        }
        Ok(())
    }
}

/// Upward and downward weights as seen by queries.
pub trait UpDownWeights: Sync {
    fn up(&self, arc: usize) -> Weight;
    fn down(&self, arc: usize) -> Weight;
}

impl UpDownWeights for Metric {
    #[inline]
    fn up(&self, arc: usize) -> Weight {
        Metric::up(self, arc)
    }

    #[inline]
    fn down(&self, arc: usize) -> Weight {
        Metric::down(self, arc)
    }
}

/// Respecting single-lane metric from the graph's own weights.
pub fn respecting_metric(graph: &InputGraph, ch: &ChTopology) -> Result<Metric> {
    let map = ArcMap::new(graph, ch)?;
    Metric::respecting(ch, &map, &[graph.weights()])
}

/// A metric as stored on disk, with the stamps of the files it belongs to.
#[derive(Clone, Debug)]
pub struct StoredMetric {
    pub metric: Metric,
    /// Present if the file was written from [`SearchGraphs`].
    pub search: Option<SearchGraphs>,
    pub graph_hash: u64,
    pub ch_hash: u64,
}

/// Binary form: `"CCHM"`, graph hash, hierarchy hash (u64 each), lanes, arc
/// count, state, input weights and current weights in the in-memory layout,
/// then a flag and, if set, one retained-direction mask per arc (bit 0 up,
/// bit 1 down).
pub fn write_metric<W: Write>(metric: &Metric, graph_hash: u64, ch_hash: u64, out: W) -> Result<()> {
    write_metric_file(metric, None, graph_hash, ch_hash, out)
}

pub fn write_search_graphs<W: Write>(search: &SearchGraphs, graph_hash: u64, ch_hash: u64, out: W) -> Result<()> {
    write_metric_file(&search.metric, Some(&search.keep), graph_hash, ch_hash, out)
}

fn write_metric_file<W: Write>(
    metric: &Metric,
    keep: Option<&[bool]>,
    graph_hash: u64,
    ch_hash: u64,
    mut out: W,
) -> Result<()> {
    out.write_all(METRIC_MAGIC)?;
    out.write_all(&graph_hash.to_le_bytes())?;
    out.write_all(&ch_hash.to_le_bytes())?;
    write_u32s(&mut out, &[metric.lanes as u32, metric.arcs as u32, metric.state.code()])?;
    write_u32s(&mut out, &metric.input)?;
    write_u32s(&mut out, &metric.weights)?;
    match keep {
        None => write_u32s(&mut out, &[0])?,
        Some(keep) => {
            write_u32s(&mut out, &[1])?;
            let mask: Vec<u32> = keep.chunks_exact(2).map(|k| k[0] as u32 | (k[1] as u32) << 1).collect();
            write_u32s(&mut out, &mask)?;
        }
    }
    Ok(())
}

pub fn read_metric<R: Read>(mut input: R) -> Result<StoredMetric> {
    read_magic(&mut input, METRIC_MAGIC)?;
    let graph_hash = read_u64(&mut input)?;
    let ch_hash = read_u64(&mut input)?;
    let lanes = read_u32(&mut input)? as usize;
    let arcs = read_u32(&mut input)? as usize;
    let state = MetricState::from_code(read_u32(&mut input)?)?;
    if lanes == 0 {
        return Err(Error::BadFormat("metric without lanes".into()));
    }
    let len = 2 * lanes * arcs;
    let input_w = read_u32s(&mut input, len)?;
    let weights = read_u32s(&mut input, len)?;
    if input_w.iter().chain(&weights).any(|&w| w == 0 || w > INF) {
        return Err(Error::BadFormat("weight out of range".into()));
    }
    let metric = Metric { lanes, arcs, input: input_w, weights, state };
    let search = match read_u32(&mut input)? {
        0 => None,
        1 => {
            if lanes != 1 || state != MetricState::Perfect {
                return Err(Error::BadFormat("search graphs need a single perfect lane".into()));
            }
            let mask = read_u32s(&mut input, arcs)?;
            if mask.iter().any(|&m| m > 3) {
                return Err(Error::BadFormat("bad direction mask".into()));
            }
            let keep = mask.iter().flat_map(|&m| [m & 1 != 0, m & 2 != 0]).collect();
            Some(SearchGraphs { metric: metric.clone(), keep })
        }
        f => return Err(Error::BadFormat(format!("bad mask flag {f}"))),
    };
    Ok(StoredMetric { metric, search, graph_hash, ch_hash })
}

/// Runs basic and perfect customization, possibly in parallel.
///
/// Work is split by level: all arcs whose tail lies in one level are
/// recomputed from a snapshot of the metric and written back together, so
/// the result does not depend on the number of threads.
pub struct Customizer<'a> {
    ch: &'a ChTopology,
    index: Option<&'a TriangleIndex>,
    pool: rayon::ThreadPool,
    batch_width: usize,
    by_level: Vec<Vec<u32>>,
}

fn build_pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))
}

impl<'a> Customizer<'a> {
    pub fn new(ch: &'a ChTopology) -> Result<Self> {
        let mut by_level = vec![Vec::new(); ch.level_count()];
        for v in 0..ch.vertex_count() as u32 {
            if ch.up_degree(v) > 0 {
                by_level[ch.level(v) as usize].push(v);
            }
        }
        Ok(Self { ch, index: None, pool: build_pool(1)?, batch_width: usize::MAX, by_level })
    }

    pub fn with_index(mut self, index: &'a TriangleIndex) -> Self {
        self.index = Some(index);
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Result<Self> {
        self.pool = build_pool(threads)?;
        Ok(self)
    }

    /// Lanes relaxed per triangle enumeration.
    pub fn with_batch_width(mut self, width: usize) -> Self {
        self.batch_width = width.max(1);
        self
    }

    fn lane_groups(&self, lanes: usize) -> impl Iterator<Item = Range<usize>> {
        let width = self.batch_width.min(lanes);
        (0..lanes).step_by(width).map(move |s| s..(s + width).min(lanes))
    }

    fn run_levels<F>(&self, metric: &mut Metric, descending: bool, compute: F)
    where
        F: Fn(&Metric, u32, &mut [Weight]) + Sync,
    {
        let stride = 2 * metric.lanes;
        let mut buffer: Vec<Weight> = Vec::new();
        let levels: Box<dyn Iterator<Item = &Vec<u32>>> =
            if descending { Box::new(self.by_level.iter().rev()) } else { Box::new(self.by_level.iter()) };
        for vertices in levels {
            let total: usize = vertices.iter().map(|&x| self.ch.up_degree(x) * stride).sum();
            buffer.clear();
            buffer.resize(total, 0);
            let mut parts = Vec::with_capacity(vertices.len());
            let mut rest = buffer.as_mut_slice();
            for &x in vertices {
                let (part, tail) = rest.split_at_mut(self.ch.up_degree(x) * stride);
                parts.push((x, part));
                rest = tail;
            }
            let snapshot = &*metric;
            self.pool.install(|| parts.into_par_iter().for_each(|(x, out)| compute(snapshot, x, out)));
            let mut offset = 0;
            for &x in vertices {
                let arcs = self.ch.up_arcs(x);
                let len = arcs.len() * stride;
                metric.weights[arcs.start * stride..arcs.end * stride].copy_from_slice(&buffer[offset..offset + len]);
                offset += len;
            }
        }
    }

    /// Lower-triangle relaxation from the input weights in every lane.
    pub fn basic(&self, metric: &mut Metric) -> Result<()> {
        metric.check(self.ch)?;
        let (ch, index) = (self.ch, self.index);
        let lanes = metric.lanes;
        let stride = 2 * lanes;
        let groups: Vec<Range<usize>> = self.lane_groups(lanes).collect();
        self.run_levels(metric, false, |m, x, out| {
            for (i, arc) in ch.up_arcs(x).enumerate() {
                let o = &mut out[i * stride..(i + 1) * stride];
                o.copy_from_slice(&m.input[arc * stride..(arc + 1) * stride]);
                for group in &groups {
                    visit(ch, index, TriangleKind::Lower, arc, &mut |t| {
                        let (p, q) = (t.first as usize * stride, t.second as usize * stride);
                        for l in group.clone() {
                            let up = m.weights[p + 2 * l + DOWN] + m.weights[q + 2 * l + UP];
                            let down = m.weights[p + 2 * l + UP] + m.weights[q + 2 * l + DOWN];
                            o[2 * l + UP] = o[2 * l + UP].min(up);
                            o[2 * l + DOWN] = o[2 * l + DOWN].min(down);
                        }
                    });
                }
            }
        });
        metric.state = MetricState::Customized;
        Ok(())
    }

    /// Intermediate- and upper-triangle relaxation; needs a customized metric.
    pub fn perfect(&self, metric: &mut Metric) -> Result<()> {
        metric.check(self.ch)?;
        if metric.state != MetricState::Customized {
            return Err(Error::MetricState { found: metric.state, needed: "Customized" });
        }
        let (ch, index) = (self.ch, self.index);
        let lanes = metric.lanes;
        let stride = 2 * lanes;
        let groups: Vec<Range<usize>> = self.lane_groups(lanes).collect();
        self.run_levels(metric, true, |m, x, out| {
            for (i, arc) in ch.up_arcs(x).enumerate() {
                let o = &mut out[i * stride..(i + 1) * stride];
                o.copy_from_slice(&m.weights[arc * stride..(arc + 1) * stride]);
                for group in &groups {
                    visit(ch, index, TriangleKind::Intermediate, arc, &mut |t| {
                        let (p, q) = (t.first as usize * stride, t.second as usize * stride);
                        for l in group.clone() {
                            let up = m.weights[p + 2 * l + UP] + m.weights[q + 2 * l + UP];
                            let down = m.weights[p + 2 * l + DOWN] + m.weights[q + 2 * l + DOWN];
                            o[2 * l + UP] = o[2 * l + UP].min(up);
                            o[2 * l + DOWN] = o[2 * l + DOWN].min(down);
                        }
                    });
                    visit(ch, index, TriangleKind::Upper, arc, &mut |t| {
                        let (p, q) = (t.first as usize * stride, t.second as usize * stride);
                        for l in group.clone() {
                            let up = m.weights[p + 2 * l + UP] + m.weights[q + 2 * l + DOWN];
                            let down = m.weights[p + 2 * l + DOWN] + m.weights[q + 2 * l + UP];
                            o[2 * l + UP] = o[2 * l + UP].min(up);
                            o[2 * l + DOWN] = o[2 * l + DOWN].min(down);
                        }
                    });
                }
            }
        });
        metric.state = MetricState::Perfect;
        Ok(())
    }
}

pub fn basic_customization(ch: &ChTopology, metric: &mut Metric, index: Option<&TriangleIndex>) -> Result<()> {
    let customizer = Customizer::new(ch)?;
    match index {
        Some(index) => customizer.with_index(index).basic(metric),
        None => customizer.basic(metric),
    }
}

pub fn perfect_customization(ch: &ChTopology, metric: &mut Metric, index: Option<&TriangleIndex>) -> Result<()> {
    let customizer = Customizer::new(ch)?;
    match index {
        Some(index) => customizer.with_index(index).perfect(metric),
        None => customizer.perfect(metric),
    }
}

/// How arcs are pruned after perfect customization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessVariant {
    /// Drop a direction whose weight perfect customization lowered.
    Unique,
    /// Drop a direction whose weight an intermediate or upper triangle attains.
    General,
}

/// Perfect metric restricted to the arc directions still needed by queries.
/// Dropped directions read as [`INF`].
#[derive(Clone, Debug)]
pub struct SearchGraphs {
    metric: Metric,
    keep: Vec<bool>,
}

impl SearchGraphs {
    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn is_retained(&self, arc: usize, dir: usize) -> bool {
        self.keep[2 * arc + dir]
    }

    /// Retained `(upward, downward)` directions.
    pub fn retained(&self) -> (usize, usize) {
        let up = self.keep.iter().step_by(2).filter(|&&k| k).count();
        let down = self.keep.iter().skip(1).step_by(2).filter(|&&k| k).count();
        (up, down)
    }
}

impl UpDownWeights for SearchGraphs {
    #[inline]
    fn up(&self, arc: usize) -> Weight {
        if self.keep[2 * arc + UP] {
            self.metric.up(arc)
        } else {
            INF
        }
    }

    #[inline]
    fn down(&self, arc: usize) -> Weight {
        if self.keep[2 * arc + DOWN] {
            self.metric.down(arc)
        } else {
            INF
        }
    }
}

fn single_perfect(metric: &Metric) -> Result<()> {
    if metric.state != MetricState::Perfect {
        return Err(Error::MetricState { found: metric.state, needed: "Perfect" });
    }
    if metric.lanes != 1 {
        return Err(Error::LaneMismatch("search graphs need a single lane".into()));
    }
    Ok(())
}

/// Prunes arcs of `perfect`; `customized` is the metric before perfect
/// customization and is only read by [`WitnessVariant::Unique`].
pub fn perfect_witness_search(
    ch: &ChTopology,
    customized: &Metric,
    perfect: &Metric,
    variant: WitnessVariant,
    index: Option<&TriangleIndex>,
) -> Result<SearchGraphs> {
    perfect.check(ch)?;
    single_perfect(perfect)?;
    let m = ch.arc_count();
    let mut keep = vec![true; 2 * m];
    match variant {
        WitnessVariant::Unique => {
            customized.check(ch)?;
            if customized.lanes != 1 {
                return Err(Error::LaneMismatch("search graphs need a single lane".into()));
            }
            for (k, (&c, &p)) in keep.iter_mut().zip(customized.weights.iter().zip(&perfect.weights)) {
                *k = c == p;
            }
        }
        WitnessVariant::General => {
            let w = &perfect.weights;
            for arc in 0..m {
                let (wu, wd) = (w[2 * arc + UP], w[2 * arc + DOWN]);
                let (mut ku, mut kd) = (true, true);
                visit(ch, index, TriangleKind::Intermediate, arc, &mut |t| {
                    let (p, q) = (2 * t.first as usize, 2 * t.second as usize);
                    ku &= w[p + UP] + w[q + UP] != wu;
                    kd &= w[p + DOWN] + w[q + DOWN] != wd;
                });
                visit(ch, index, TriangleKind::Upper, arc, &mut |t| {
                    let (p, q) = (2 * t.first as usize, 2 * t.second as usize);
                    ku &= w[p + UP] + w[q + DOWN] != wu;
                    kd &= w[p + DOWN] + w[q + UP] != wd;
                });
                keep[2 * arc + UP] = ku;
                keep[2 * arc + DOWN] = kd;
            }
        }
    }
    for (k, &p) in keep.iter_mut().zip(&perfect.weights) {
        *k &= p < INF;
    }
    Ok(SearchGraphs { metric: perfect.clone(), keep })
}

/// New weight for one input arc.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightUpdate {
    pub input_arc: usize,
    pub weight: Weight,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct UpdateStats {
    /// Arcs taken from the queue and recomputed.
    pub processed: usize,
    /// Recomputed arcs whose weight changed in some direction.
    pub changed: usize,
}

/// Incremental repair of a single-lane customized metric.
///
/// Arcs are processed by increasing tail level. A recomputed arc whose
/// weight changed enqueues every arc whose lower triangle it belongs to and
/// whose current value was either attained through it or would now drop.
/// The result equals a fresh basic customization with the new input weights.
pub struct PartialUpdater<'a> {
    ch: &'a ChTopology,
    index: Option<&'a TriangleIndex>,
    queue: BTreeSet<(u32, u32)>,
    stats: UpdateStats,
}

impl<'a> PartialUpdater<'a> {
    pub fn new(ch: &'a ChTopology, index: Option<&'a TriangleIndex>) -> Self {
        Self { ch, index, queue: BTreeSet::new(), stats: UpdateStats::default() }
    }

    fn check(&self, metric: &Metric) -> Result<()> {
        metric.check(self.ch)?;
        if metric.lanes != 1 {
            return Err(Error::LaneMismatch("partial updates need a single lane".into()));
        }
        if metric.state != MetricState::Customized {
            return Err(Error::MetricState { found: metric.state, needed: "Customized" });
        }
        Ok(())
    }

    /// Applies new input weights and queues the affected arcs. The metric is
    /// inconsistent until the queue has drained.
    pub fn enqueue(&mut self, map: &ArcMap, metric: &mut Metric, updates: &[WeightUpdate]) -> Result<()> {
        self.check(metric)?;
        for u in updates {
            if u.input_arc >= map.input_arc_count() {
                return Err(Error::ArcOutOfRange(u.input_arc));
            }
            if !(1..=INF).contains(&u.weight) {
                return Err(Error::InvalidWeight { weight: u.weight as u64 });
            }
        }
        for u in updates {
            let (arc, dir) = map.ch_arc(u.input_arc);
            metric.input[2 * arc + dir] = u.weight;
            self.queue.insert((self.ch.level(self.ch.tail(arc)), arc as u32));
        }
        Ok(())
    }

    pub fn pending(&self) -> usize {
        self.queue.len()
    }

    pub fn stats(&self) -> UpdateStats {
        self.stats
    }

    /// Processes at most `budget` queued arcs; true once the queue is empty.
    pub fn step(&mut self, metric: &mut Metric, budget: usize) -> Result<bool> {
        self.check(metric)?;
        for _ in 0..budget {
            let Some((_, arc)) = self.queue.pop_first() else { break };
            self.process(metric, arc as usize);
        }
        Ok(self.queue.is_empty())
    }

    pub fn run(&mut self, metric: &mut Metric) -> Result<UpdateStats> {
        self.step(metric, usize::MAX)?;
        Ok(self.stats)
    }

    fn process(&mut self, metric: &mut Metric, arc: usize) {
        let ch = self.ch;
        self.stats.processed += 1;
        let w = &metric.weights;
        let (mut up, mut down) = (metric.input[2 * arc + UP], metric.input[2 * arc + DOWN]);
        visit(ch, self.index, TriangleKind::Lower, arc, &mut |t| {
            let (p, q) = (2 * t.first as usize, 2 * t.second as usize);
            up = up.min(w[p + DOWN] + w[q + UP]);
            down = down.min(w[p + UP] + w[q + DOWN]);
        });
        let (old_up, old_down) = (w[2 * arc + UP], w[2 * arc + DOWN]);
        if (up, down) == (old_up, old_down) {
            return;
        }
        self.stats.changed += 1;
        metric.weights[2 * arc + UP] = up;
        metric.weights[2 * arc + DOWN] = down;
        let w = &metric.weights;
        let queue = &mut self.queue;
        let mut consider = |dependent: usize, old: (Weight, Weight), new: (Weight, Weight)| {
            let (cu, cd) = (w[2 * dependent + UP], w[2 * dependent + DOWN]);
            if old.0 == cu || new.0 < cu || old.1 == cd || new.1 < cd {
                queue.insert((ch.level(ch.tail(dependent)), dependent as u32));
            }
        };
        // (y, z) has (x, y) = arc and (x, z) = t.first in a lower triangle
        visit(ch, self.index, TriangleKind::Upper, arc, &mut |t| {
            let b = 2 * t.first as usize;
            let old = (old_down + w[b + UP], w[b + DOWN] + old_up);
            let new = (down + w[b + UP], w[b + DOWN] + up);
            consider(t.second as usize, old, new);
        });
        // (z, y) has (x, z) = t.first and (x, y) = arc in a lower triangle
        visit(ch, self.index, TriangleKind::Intermediate, arc, &mut |t| {
            let b = 2 * t.first as usize;
            let old = (w[b + DOWN] + old_up, old_down + w[b + UP]);
            let new = (w[b + DOWN] + up, down + w[b + UP]);
            consider(t.second as usize, old, new);
        });
    }
}

/// Applies `updates` and repairs the metric in one go.
pub fn partial_update(
    ch: &ChTopology,
    map: &ArcMap,
    metric: &mut Metric,
    updates: &[WeightUpdate],
    index: Option<&TriangleIndex>,
) -> Result<UpdateStats> {
    let mut updater = PartialUpdater::new(ch, index);
    updater.enqueue(map, metric, updates)?;
    updater.run(metric)
}
