//! Colored instances and the random models that produce them.
//!
//! A [`ColoredHypergraph`] is either a `k`-partite `k`-uniform hypergraph whose
//! parts are copies of `[n]`, or (in [`Mode::Graph`]) a simple graph on `[n]`.
//! Every edge carries exactly one color, so the coloring is a function on the
//! edge set. All indices are 0-based in memory; the JSON format is 1-based.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on the number of edges a sampler may materialize.
pub const DEFAULT_EDGE_LIMIT: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Partite,
    Graph,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Partite => f.write_str("partite"),
            Mode::Graph => f.write_str("graph"),
        }
    }
}

/// A vertex `index` of part `part`. In graph mode `part` is always 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartiteVertex {
    pub part: usize,
    pub index: usize,
}

impl PartiteVertex {
    pub fn new(part: usize, index: usize) -> Self {
        Self { part, index }
    }
}

/// An edge and its color.
///
/// In partite mode `verts[i]` is the index of the vertex taken from part `i`.
/// In graph mode `verts` is the endpoint pair in increasing order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColoredEdge {
    pub verts: Vec<u32>,
    pub color: u32,
}

impl ColoredEdge {
    pub fn new(verts: Vec<u32>, color: u32) -> Self {
        Self { verts, color }
    }

    /// A graph edge with endpoints put into canonical order.
    pub fn pair(u: u32, v: u32, color: u32) -> Self {
        let (a, b) = if u <= v { (u, v) } else { (v, u) };
        Self {
            verts: vec![a, b],
            color,
        }
    }
}

/// Reproducible randomness: a master seed plus an independent stream.
///
/// Trial `j` of an experiment uses `stream_index = j`, so results do not
/// depend on which worker ran the trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RandomnessSpec {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl RandomnessSpec {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        Self {
            master_seed,
            stream_index,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }

    /// A different seed derived from this one, for nested experiments.
    pub fn derive(&self, salt: u64) -> Self {
        let mixed = self
            .master_seed
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .rotate_left(17)
            ^ salt.wrapping_mul(0xD1B5_4A32_D192_ED03);
        Self::new(mixed, self.stream_index)
    }
}

/// A colored k-partite k-uniform hypergraph, or a colored simple graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredHypergraph {
    mode: Mode,
    n: usize,
    k: usize,
    kappa: usize,
    edges: Vec<ColoredEdge>,
    removed_vertices: BTreeSet<PartiteVertex>,
    removed_colors: BTreeSet<u32>,
}

impl ColoredHypergraph {
    /// Checked constructor for a partite instance. Edges are sorted into
    /// canonical order.
    pub fn partite(n: usize, k: usize, kappa: usize, edges: Vec<ColoredEdge>) -> Result<Self> {
        if n == 0 || k < 2 || kappa == 0 {
            return Err(Error::InvalidInstance(format!(
                "need n >= 1, k >= 2, kappa >= 1 (got n={n}, k={k}, kappa={kappa})"
            )));
        }
        for e in &edges {
            if e.verts.len() != k {
                return Err(Error::InvalidInstance(format!(
                    "edge {:?} has {} vertices, expected {k}",
                    e.verts,
                    e.verts.len()
                )));
            }
            if let Some(v) = e.verts.iter().find(|&&v| v as usize >= n) {
                return Err(Error::InvalidInstance(format!("vertex index {v} >= n={n}")));
            }
        }
        Self::finish(Mode::Partite, n, k, kappa, edges)
    }

    /// Checked constructor for a simple colored graph on `[n]`.
    pub fn graph(n: usize, kappa: usize, edges: Vec<ColoredEdge>) -> Result<Self> {
        if n == 0 || kappa == 0 {
            return Err(Error::InvalidInstance(format!(
                "need n >= 1 and kappa >= 1 (got n={n}, kappa={kappa})"
            )));
        }
        let mut normalized = Vec::with_capacity(edges.len());
        for e in edges {
            if e.verts.len() != 2 {
                return Err(Error::InvalidInstance(format!(
                    "graph edge {:?} must have two endpoints",
                    e.verts
                )));
            }
            let (u, v) = (e.verts[0], e.verts[1]);
            if u == v {
                return Err(Error::InvalidInstance(format!("loop at vertex {u}")));
            }
            if u.max(v) as usize >= n {
                return Err(Error::InvalidInstance(format!(
                    "vertex {} >= n={n}",
                    u.max(v)
                )));
            }
            normalized.push(ColoredEdge::pair(u, v, e.color));
        }
        Self::finish(Mode::Graph, n, 2, kappa, normalized)
    }

    fn finish(
        mode: Mode,
        n: usize,
        k: usize,
        kappa: usize,
        mut edges: Vec<ColoredEdge>,
    ) -> Result<Self> {
        if let Some(e) = edges.iter().find(|e| e.color as usize >= kappa) {
            return Err(Error::InvalidInstance(format!(
                "color {} out of range for kappa={kappa}",
                e.color
            )));
        }
        edges.sort();
        if let Some(w) = edges.windows(2).find(|w| w[0].verts == w[1].verts) {
            return Err(Error::InvalidInstance(format!(
                "vertex tuple {:?} appears more than once",
                w[0].verts
            )));
        }
        Ok(Self {
            mode,
            n,
            k,
            kappa,
            edges,
            removed_vertices: BTreeSet::new(),
            removed_colors: BTreeSet::new(),
        })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn edges(&self) -> &[ColoredEdge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn removed_vertices(&self) -> &BTreeSet<PartiteVertex> {
        &self.removed_vertices
    }

    pub fn removed_colors(&self) -> &BTreeSet<u32> {
        &self.removed_colors
    }

    pub fn is_restricted(&self) -> bool {
        !self.removed_vertices.is_empty() || !self.removed_colors.is_empty()
    }

    pub fn require_mode(&self, expected: Mode) -> Result<()> {
        if self.mode == expected {
            Ok(())
        } else {
            Err(Error::ModeMismatch {
                expected,
                found: self.mode,
            })
        }
    }

    /// `n^k` for partite instances, `n(n-1)/2` for graphs.
    pub fn max_edges(&self) -> u128 {
        match self.mode {
            Mode::Partite => (self.n as u128).pow(self.k as u32),
            Mode::Graph => (self.n as u128) * (self.n as u128 - 1) / 2,
        }
    }

    /// Number of vertex slots (`k n` partite, `n` graph), removed ones included.
    pub fn vertex_slots(&self) -> usize {
        match self.mode {
            Mode::Partite => self.k * self.n,
            Mode::Graph => self.n,
        }
    }

    /// Flat id of a vertex: `part * n + index`.
    pub fn vertex_id(&self, v: PartiteVertex) -> usize {
        v.part * self.n + v.index
    }

    pub fn vertex_from_id(&self, id: usize) -> PartiteVertex {
        match self.mode {
            Mode::Partite => PartiteVertex::new(id / self.n, id % self.n),
            Mode::Graph => PartiteVertex::new(0, id),
        }
    }

    /// Flat vertex ids touched by an edge.
    pub fn edge_vertex_ids<'a>(&'a self, e: &'a ColoredEdge) -> impl Iterator<Item = usize> + 'a {
        e.verts
            .iter()
            .enumerate()
            .map(move |(i, &v)| match self.mode {
                Mode::Partite => i * self.n + v as usize,
                Mode::Graph => v as usize,
            })
    }

    pub fn is_vertex_active(&self, v: PartiteVertex) -> bool {
        !self.removed_vertices.contains(&v)
    }

    /// Active flags indexed by flat vertex id.
    pub fn active_mask(&self) -> Vec<bool> {
        let mut mask = vec![true; self.vertex_slots()];
        for &v in &self.removed_vertices {
            mask[self.vertex_id(v)] = false;
        }
        mask
    }

    /// Colors that edges of this instance may still use.
    pub fn available_colors(&self) -> Vec<u32> {
        (0..self.kappa as u32)
            .filter(|c| !self.removed_colors.contains(c))
            .collect()
    }

    pub fn find_edge(&self, verts: &[u32]) -> Option<&ColoredEdge> {
        self.edges
            .binary_search_by(|e| e.verts.as_slice().cmp(verts))
            .ok()
            .map(|i| &self.edges[i])
    }

    /// `H - A - S - D`: drop the edges at `removed_edges` (indices into
    /// [`edges`](Self::edges)), the vertices `removed_vertices` with every
    /// edge touching them, and every edge whose color is in `removed_colors`.
    pub fn restrict(
        &self,
        removed_edges: &[usize],
        removed_vertices: &[PartiteVertex],
        removed_colors: &[u32],
    ) -> Result<Self> {
        let slots = match self.mode {
            Mode::Partite => self.k,
            Mode::Graph => 1,
        };
        for v in removed_vertices {
            if v.part >= slots || v.index >= self.n {
                return Err(Error::OutOfRange(format!("vertex {v:?} not in instance")));
            }
        }
        if let Some(c) = removed_colors.iter().find(|&&c| c as usize >= self.kappa) {
            return Err(Error::OutOfRange(format!("color {c} not in instance")));
        }
        let mut drop_edge = vec![false; self.edges.len()];
        for &i in removed_edges {
            *drop_edge.get_mut(i).ok_or_else(|| {
                Error::OutOfRange(format!("edge index {i} >= {}", self.edges.len()))
            })? = true;
        }

        let mut out = self.clone();
        out.removed_vertices
            .extend(removed_vertices.iter().copied());
        out.removed_colors.extend(removed_colors.iter().copied());
        let active = out.active_mask();
        out.edges = self
            .edges
            .iter()
            .zip(&drop_edge)
            .filter(|(e, &dropped)| {
                !dropped
                    && !out.removed_colors.contains(&e.color)
                    && self.edge_vertex_ids(e).all(|id| active[id])
            })
            .map(|(e, _)| e.clone())
            .collect();
        Ok(out)
    }

    /// The instance with the given edges removed (matched by vertex tuple).
    pub fn without_edges(&self, verts: &[Vec<u32>]) -> Self {
        let gone: HashSet<&[u32]> = verts.iter().map(Vec::as_slice).collect();
        let mut out = self.clone();
        out.edges.retain(|e| !gone.contains(e.verts.as_slice()));
        out
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        let mut vertex = vec![0u64; self.vertex_slots()];
        let mut color = vec![0u64; self.kappa];
        for e in &self.edges {
            for id in self.edge_vertex_ids(e) {
                vertex[id] += 1;
            }
            color[e.color as usize] += 1;
        }
        DegreeProfile { vertex, color }
    }

    /// A uniformly random permutation of edge indices.
    pub fn random_edge_ordering<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.edges.len()).collect();
        order.shuffle(rng);
        order
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&InstanceJson::from(self)).expect("instance serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&InstanceJson::from(self)).expect("instance serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: InstanceJson = serde_json::from_str(text)?;
        raw.try_into()
    }
}

/// Vertex degrees `d(v)` (by flat id) and color degrees `cd(c)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeProfile {
    pub vertex: Vec<u64>,
    pub color: Vec<u64>,
}

/// A set of edges of one instance.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Matching {
    pub edges: Vec<ColoredEdge>,
}

impl Matching {
    pub fn new(mut edges: Vec<ColoredEdge>) -> Self {
        edges.sort();
        Self { edges }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// All colors pairwise distinct.
    pub fn is_rainbow(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.edges.len());
        self.edges.iter().all(|e| seen.insert(e.color))
    }

    /// Pairwise vertex-disjoint, with every edge present in `h`.
    pub fn is_matching_of(&self, h: &ColoredHypergraph) -> bool {
        let mut covered = vec![false; h.vertex_slots()];
        for e in &self.edges {
            if h.find_edge(&e.verts).map(|f| f.color) != Some(e.color) {
                return false;
            }
            for id in h.edge_vertex_ids(e) {
                if std::mem::replace(&mut covered[id], true) {
                    return false;
                }
            }
        }
        true
    }

    /// A matching of `h` covering every active vertex of `h`.
    pub fn is_perfect_in(&self, h: &ColoredHypergraph) -> bool {
        if !self.is_matching_of(h) {
            return false;
        }
        let mut covered = vec![false; h.vertex_slots()];
        for e in &self.edges {
            for id in h.edge_vertex_ids(e) {
                covered[id] = true;
            }
        }
        h.active_mask()
            .iter()
            .zip(&covered)
            .all(|(&active, &c)| !active || c)
    }
}

fn check_edge_budget(requested: u128, limit: u64) -> Result<()> {
    if requested > limit as u128 {
        Err(Error::Capacity { requested, limit })
    } else {
        Ok(())
    }
}

fn tuple_count(n: usize, k: usize) -> Result<u128> {
    (n as u128).checked_pow(k as u32).ok_or(Error::Capacity {
        requested: u128::MAX,
        limit: u64::MAX,
    })
}

/// Decode a tuple index in `[0, n^k)` into part-major vertex indices.
fn decode_tuple(mut t: u64, n: usize, k: usize) -> Vec<u32> {
    let mut verts = vec![0u32; k];
    for slot in verts.iter_mut().rev() {
        *slot = (t % n as u64) as u32;
        t /= n as u64;
    }
    verts
}

/// Decode an index in `[0, n(n-1)/2)` into the lexicographically ordered pair.
fn decode_pair(mut t: u64, n: usize) -> (u32, u32) {
    let mut u = 0u64;
    loop {
        let row = (n as u64) - 1 - u;
        if t < row {
            return (u as u32, (u + 1 + t) as u32);
        }
        t -= row;
        u += 1;
    }
}

/// Partial Fisher-Yates over `[0, total)` with a sparse swap table.
///
/// The first `m` picks do not depend on `m`, and after each pick a color is
/// drawn, so instances for increasing `m` on one stream are nested.
fn sample_distinct_colored<R: Rng + ?Sized>(
    total: u64,
    m: u64,
    kappa: usize,
    rng: &mut R,
) -> Vec<(u64, u32)> {
    let mut swaps: HashMap<u64, u64> = HashMap::new();
    let mut out = Vec::with_capacity(m as usize);
    for i in 0..m {
        let j = rng.gen_range(i..total);
        let picked = *swaps.get(&j).unwrap_or(&j);
        let displaced = *swaps.get(&i).unwrap_or(&i);
        swaps.insert(j, displaced);
        let color = rng.gen_range(0..kappa as u32);
        out.push((picked, color));
    }
    out
}

/// The complete k-partite hypergraph with independent uniform colors.
pub fn complete_colored<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    kappa: usize,
    rng: &mut R,
    edge_limit: u64,
) -> Result<ColoredHypergraph> {
    if n == 0 || k < 2 || kappa == 0 {
        return Err(Error::OutOfRange(format!(
            "need n >= 1, k >= 2, kappa >= 1 (got n={n}, k={k}, kappa={kappa})"
        )));
    }
    let total = tuple_count(n, k)?;
    check_edge_budget(total, edge_limit)?;
    let edges = (0..total as u64)
        .map(|t| ColoredEdge::new(decode_tuple(t, n, k), rng.gen_range(0..kappa as u32)))
        .collect();
    ColoredHypergraph::partite(n, k, kappa, edges)
}

/// `HP^(kappa)_{n,m,k}`: `m` distinct tuples chosen uniformly, colors iid uniform.
pub fn sample_hp_m<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    kappa: usize,
    m: u64,
    rng: &mut R,
    edge_limit: u64,
) -> Result<ColoredHypergraph> {
    if n == 0 || k < 2 || kappa == 0 {
        return Err(Error::OutOfRange(format!(
            "need n >= 1, k >= 2, kappa >= 1 (got n={n}, k={k}, kappa={kappa})"
        )));
    }
    let total = tuple_count(n, k)?;
    if m as u128 > total {
        return Err(Error::OutOfRange(format!("m={m} exceeds n^k={total}")));
    }
    check_edge_budget(m as u128, edge_limit)?;
    let edges = sample_distinct_colored(total as u64, m, kappa, rng)
        .into_iter()
        .map(|(t, c)| ColoredEdge::new(decode_tuple(t, n, k), c))
        .collect();
    ColoredHypergraph::partite(n, k, kappa, edges)
}

/// Independent model: every tuple present with probability `p`.
pub fn sample_hp_p<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    kappa: usize,
    p: f64,
    rng: &mut R,
    edge_limit: u64,
) -> Result<ColoredHypergraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(format!("p={p} not in [0, 1]")));
    }
    if n == 0 || k < 2 || kappa == 0 {
        return Err(Error::OutOfRange(format!(
            "need n >= 1, k >= 2, kappa >= 1 (got n={n}, k={k}, kappa={kappa})"
        )));
    }
    let total = tuple_count(n, k)?;
    check_edge_budget(total, edge_limit)?;
    let mut edges = Vec::new();
    for t in 0..total as u64 {
        if rng.gen_bool(p) {
            edges.push(ColoredEdge::new(
                decode_tuple(t, n, k),
                rng.gen_range(0..kappa as u32),
            ));
        }
    }
    ColoredHypergraph::partite(n, k, kappa, edges)
}

/// `G^(kappa)_{n,m}`: `m` distinct pairs of `[n]`, colors iid uniform.
pub fn sample_colored_graph<R: Rng + ?Sized>(
    n: usize,
    m: u64,
    kappa: usize,
    rng: &mut R,
    edge_limit: u64,
) -> Result<ColoredHypergraph> {
    if n == 0 || kappa == 0 {
        return Err(Error::OutOfRange(format!(
            "need n >= 1 and kappa >= 1 (got n={n}, kappa={kappa})"
        )));
    }
    let total = (n as u64) * (n as u64 - 1) / 2;
    if m > total {
        return Err(Error::OutOfRange(format!("m={m} exceeds n(n-1)/2={total}")));
    }
    check_edge_budget(m as u128, edge_limit)?;
    let edges = sample_distinct_colored(total, m, kappa, rng)
        .into_iter()
        .map(|(t, c)| {
            let (u, v) = decode_pair(t, n);
            ColoredEdge::pair(u, v, c)
        })
        .collect();
    ColoredHypergraph::graph(n, kappa, edges)
}

// --- JSON ---

#[derive(Debug, Serialize, Deserialize)]
struct EdgeJson {
    verts: Vec<u32>,
    color: u32,
}

#[derive(Debug, Serialize, Deserialize)]
struct VertexJson {
    part: usize,
    index: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct InstanceJson {
    mode: Mode,
    n: usize,
    k: usize,
    colors: usize,
    edges: Vec<EdgeJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    removed_vertices: Vec<VertexJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    removed_colors: Vec<u32>,
}

impl From<&ColoredHypergraph> for InstanceJson {
    fn from(h: &ColoredHypergraph) -> Self {
        InstanceJson {
            mode: h.mode,
            n: h.n,
            k: h.k,
            colors: h.kappa,
            edges: h
                .edges
                .iter()
                .map(|e| EdgeJson {
                    verts: e.verts.iter().map(|v| v + 1).collect(),
                    color: e.color + 1,
                })
                .collect(),
            removed_vertices: h
                .removed_vertices
                .iter()
                .map(|v| VertexJson {
                    part: v.part + 1,
                    index: v.index + 1,
                })
                .collect(),
            removed_colors: h.removed_colors.iter().map(|c| c + 1).collect(),
        }
    }
}

fn one_based(x: u32, what: &str) -> Result<u32> {
    x.checked_sub(1)
        .ok_or_else(|| Error::Parse(format!("{what} indices are 1-based, found 0")))
}

impl TryFrom<InstanceJson> for ColoredHypergraph {
    type Error = Error;

    fn try_from(raw: InstanceJson) -> Result<Self> {
        let mut edges = Vec::with_capacity(raw.edges.len());
        for e in raw.edges {
            let verts = e
                .verts
                .into_iter()
                .map(|v| one_based(v, "vertex"))
                .collect::<Result<Vec<_>>>()?;
            edges.push(ColoredEdge::new(verts, one_based(e.color, "color")?));
        }
        let mut h = match raw.mode {
            Mode::Partite => ColoredHypergraph::partite(raw.n, raw.k, raw.colors, edges)?,
            Mode::Graph => {
                if raw.k != 2 {
                    return Err(Error::Parse(format!(
                        "graph mode requires k=2, got {}",
                        raw.k
                    )));
                }
                ColoredHypergraph::graph(raw.n, raw.colors, edges)?
            }
        };
        let removed_vertices = raw
            .removed_vertices
            .into_iter()
            .map(|v| {
                Ok(PartiteVertex::new(
                    one_based(v.part as u32, "part")? as usize,
                    one_based(v.index as u32, "vertex")? as usize,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let removed_colors = raw
            .removed_colors
            .into_iter()
            .map(|c| one_based(c, "color"))
            .collect::<Result<Vec<_>>>()?;
        if !removed_vertices.is_empty() || !removed_colors.is_empty() {
            let before = h.edges.len();
            h = h.restrict(&[], &removed_vertices, &removed_colors)?;
            if h.edges.len() != before {
                return Err(Error::InvalidInstance(
                    "edges touch removed vertices or colors".into(),
                ));
            }
        }
        Ok(h)
    }
}
