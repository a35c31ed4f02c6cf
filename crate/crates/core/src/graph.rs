//! Finite weighted graphs with a pinned-to-zero exterior layer, and the
//! discrete calculus on them: gradient, divergence, vertex and edge integrals.
//!
//! A [`Graph`] holds `n_interior` interior vertices (indices `0..n_interior`)
//! followed by a halo of exterior vertices. Functions live on the interior;
//! on halo vertices they read as zero. Every edge is stored in both
//! orientations with identical weight, grouped by tail vertex in a fixed
//! direction order, so reductions are deterministic and translation-equivariant
//! on lattice boxes.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{CoreError, Result};
use crate::sum::csum;

/// Default budget for `dim * (2*radius+1)^dim` lattice cells.
pub const DEFAULT_CELL_BUDGET: u64 = 1 << 25;

/// Parameters for a truncated integer-lattice box with a zero halo.
#[derive(Debug, Clone)]
pub struct LatticeSpec {
    /// Lattice dimension, at least 2.
    pub dim: usize,
    /// Box radius: interior vertices are the points with max |x_i| <= radius.
    pub radius: i64,
    /// Memory budget in cells, `dim * (2*radius+1)^dim` must not exceed it.
    pub cell_budget: u64,
}

impl LatticeSpec {
    pub fn new(dim: usize, radius: i64) -> Self {
        LatticeSpec {
            dim,
            radius,
            cell_budget: DEFAULT_CELL_BUDGET,
        }
    }
}

/// How the graph was constructed; lattice boxes carry their radius so that
/// solvers can validate exponent hypotheses and run refinement studies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphKind {
    LatticeBox { radius: i64 },
    General,
}

/// One directed edge with a strictly positive weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub tail: u32,
    pub head: u32,
    pub weight: f64,
}

/// A finite weighted graph: interior vertices, a zero-pinned halo, a positive
/// vertex measure on the interior, and symmetric directed edges.
#[derive(Debug, Clone)]
pub struct Graph {
    dim: usize,
    n_interior: usize,
    coords: Vec<i64>,
    mu: Vec<f64>,
    edges: Vec<Edge>,
    out_start: Vec<u32>,
    reverse: Vec<u32>,
    index_of: HashMap<Vec<i64>, u32>,
    kind: GraphKind,
}

impl Graph {
    /// Assemble a graph from raw parts, checking the structural invariants:
    /// positive interior measure, positive symmetric weights, and both
    /// orientations present for every edge.
    pub fn from_parts(
        dim: usize,
        n_interior: usize,
        coords: Vec<i64>,
        mu: Vec<f64>,
        undirected: &[(u32, u32, f64)],
        kind: GraphKind,
    ) -> Result<Graph> {
        let n_total = coords.len() / dim.max(1);
        if dim == 0 || coords.len() != n_total * dim {
            return Err(CoreError::domain("coordinate table has ragged dimension"));
        }
        if n_interior == 0 || n_interior > n_total {
            return Err(CoreError::domain("graph needs at least one interior vertex"));
        }
        if mu.len() != n_interior {
            return Err(CoreError::ShapeMismatch {
                expected: n_interior,
                got: mu.len(),
            });
        }
        if mu.iter().any(|&m| !(m > 0.0) || !m.is_finite()) {
            return Err(CoreError::domain("vertex measure must be positive and finite"));
        }

        let mut index_of = HashMap::with_capacity(n_total);
        for v in 0..n_total {
            let key = coords[v * dim..(v + 1) * dim].to_vec();
            if index_of.insert(key, v as u32).is_some() {
                return Err(CoreError::domain("duplicate vertex coordinates"));
            }
        }

        // Expand to directed edges grouped by tail, preserving the caller's
        // per-tail order (this fixes the reduction order).
        let mut out: Vec<Vec<Edge>> = vec![Vec::new(); n_total];
        for &(a, b, w) in undirected {
            let (a, b) = (a as usize, b as usize);
            if a >= n_total || b >= n_total || a == b {
                return Err(CoreError::domain("edge endpoint out of range"));
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(CoreError::domain("edge weight must be positive and finite"));
            }
            if a >= n_interior && b >= n_interior {
                return Err(CoreError::domain("edge joins two exterior vertices"));
            }
            out[a].push(Edge {
                tail: a as u32,
                head: b as u32,
                weight: w,
            });
            out[b].push(Edge {
                tail: b as u32,
                head: a as u32,
                weight: w,
            });
        }

        let mut edges = Vec::with_capacity(undirected.len() * 2);
        let mut out_start = Vec::with_capacity(n_total + 1);
        out_start.push(0u32);
        for list in &out {
            edges.extend_from_slice(list);
            out_start.push(edges.len() as u32);
        }

        let mut rev_lookup = HashMap::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            if rev_lookup.insert((e.tail, e.head), i as u32).is_some() {
                return Err(CoreError::domain("duplicate edge"));
            }
        }
        let mut reverse = vec![0u32; edges.len()];
        for (i, e) in edges.iter().enumerate() {
            match rev_lookup.get(&(e.head, e.tail)) {
                Some(&j) => {
                    if edges[j as usize].weight != e.weight {
                        return Err(CoreError::domain("edge weights are not symmetric"));
                    }
                    reverse[i] = j;
                }
                None => return Err(CoreError::domain("missing reverse orientation")),
            }
        }

        let g = Graph {
            dim,
            n_interior,
            coords,
            mu,
            edges,
            out_start,
            reverse,
            index_of,
            kind,
        };
        if !g.is_connected() {
            return Err(CoreError::domain("graph is not connected"));
        }
        Ok(g)
    }

    fn is_connected(&self) -> bool {
        let n = self.n_vertices();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for e in self.out_edges(v) {
                let w = e.head as usize;
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_interior(&self) -> usize {
        self.n_interior
    }

    pub fn n_halo(&self) -> usize {
        self.n_vertices() - self.n_interior
    }

    pub fn n_vertices(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn n_directed_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_interior(&self, v: usize) -> bool {
        v < self.n_interior
    }

    pub fn mu(&self, v: usize) -> f64 {
        self.mu[v]
    }

    pub fn coords_of(&self, v: usize) -> &[i64] {
        &self.coords[v * self.dim..(v + 1) * self.dim]
    }

    /// Index of the vertex at the given coordinates, if present.
    pub fn vertex_at(&self, coords: &[i64]) -> Option<usize> {
        self.index_of.get(coords).map(|&v| v as usize)
    }

    /// Graph distance to the origin in the lattice case: the l1 norm.
    pub fn l1_norm_of(&self, v: usize) -> i64 {
        self.coords_of(v).iter().map(|c| c.abs()).sum()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Outgoing edges of `v`, in the fixed per-vertex direction order.
    pub fn out_edges(&self, v: usize) -> &[Edge] {
        &self.edges[self.out_start[v] as usize..self.out_start[v + 1] as usize]
    }

    /// Index of the reverse orientation of directed edge `e`.
    pub fn reverse_edge(&self, e: usize) -> usize {
        self.reverse[e] as usize
    }

    pub fn degree(&self, v: usize) -> usize {
        (self.out_start[v + 1] - self.out_start[v]) as usize
    }

    pub fn kind(&self) -> &GraphKind {
        &self.kind
    }

    pub fn lattice_radius(&self) -> Option<i64> {
        match self.kind {
            GraphKind::LatticeBox { radius } => Some(radius),
            GraphKind::General => None,
        }
    }

    /// True when mu == 1 on the interior and w == 1 on every edge.
    pub fn has_unit_weights(&self) -> bool {
        self.mu.iter().all(|&m| m == 1.0) && self.edges.iter().all(|e| e.weight == 1.0)
    }

    /// Value of `u` at any vertex index, reading halo vertices as zero.
    pub fn value_at(&self, u: &VertexFunction, v: usize) -> f64 {
        if v < self.n_interior {
            u.values[v]
        } else {
            0.0
        }
    }

    /// Translate `u` by an integer shift: `u'(x) = u(x - shift)`. Fails if any
    /// mass would leave the interior.
    pub fn translate(&self, u: &VertexFunction, shift: &[i64]) -> Result<VertexFunction> {
        check_len(self.n_interior, u.len())?;
        if shift.len() != self.dim {
            return Err(CoreError::ShapeMismatch {
                expected: self.dim,
                got: shift.len(),
            });
        }
        let mut out = VertexFunction::zeros(self.n_interior);
        let mut target = vec![0i64; self.dim];
        for v in 0..self.n_interior {
            if u.values[v] == 0.0 {
                continue;
            }
            for (i, t) in target.iter_mut().enumerate() {
                *t = self.coords_of(v)[i] + shift[i];
            }
            match self.vertex_at(&target) {
                Some(w) if w < self.n_interior => out.values[w] = u.values[v],
                _ => {
                    return Err(CoreError::domain(
                        "translation moves support out of the interior",
                    ))
                }
            }
        }
        Ok(out)
    }

    /// Line-oriented debug dump: `v <index> <coords...> <mu>` per vertex
    /// (halo vertices carry mu = 0), `e <i> <j> <w>` per undirected edge.
    pub fn to_dump(&self) -> String {
        let mut s = String::new();
        for v in 0..self.n_vertices() {
            let _ = write!(s, "v {}", v);
            for c in self.coords_of(v) {
                let _ = write!(s, " {}", c);
            }
            let mu = if v < self.n_interior { self.mu[v] } else { 0.0 };
            let _ = writeln!(s, " {}", mu);
        }
        for (i, e) in self.edges.iter().enumerate() {
            if (i as u32) < self.reverse[i] {
                let _ = writeln!(s, "e {} {} {}", e.tail, e.head, e.weight);
            }
        }
        s
    }

    /// Parse the debug dump format. Vertices with mu > 0 are interior, mu = 0
    /// marks the zero-pinned exterior; indices are remapped so that interior
    /// vertices come first in dump-index order.
    pub fn from_dump(text: &str) -> Result<Graph> {
        struct RawVertex {
            idx: u32,
            coords: Vec<i64>,
            mu: f64,
        }
        let mut vertices: Vec<RawVertex> = Vec::new();
        let mut raw_edges: Vec<(u32, u32, f64)> = Vec::new();

        for (lno, line) in text.lines().enumerate() {
            let lno = lno + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut tok = line.split_whitespace();
            match tok.next() {
                Some("v") => {
                    let fields: Vec<&str> = tok.collect();
                    if fields.len() < 3 {
                        return Err(CoreError::parse(lno, "vertex line needs index, coords, mu"));
                    }
                    let idx: u32 = fields[0]
                        .parse()
                        .map_err(|_| CoreError::parse(lno, "bad vertex index"))?;
                    let mu: f64 = fields[fields.len() - 1]
                        .parse()
                        .map_err(|_| CoreError::parse(lno, "bad vertex measure"))?;
                    let coords = fields[1..fields.len() - 1]
                        .iter()
                        .map(|f| f.parse::<i64>())
                        .collect::<std::result::Result<Vec<i64>, _>>()
                        .map_err(|_| CoreError::parse(lno, "bad vertex coordinate"))?;
                    if mu < 0.0 || !mu.is_finite() {
                        return Err(CoreError::parse(lno, "vertex measure must be >= 0"));
                    }
                    vertices.push(RawVertex { idx, coords, mu });
                }
                Some("e") => {
                    let fields: Vec<&str> = tok.collect();
                    if fields.len() != 3 {
                        return Err(CoreError::parse(lno, "edge line needs tail, head, weight"));
                    }
                    let a: u32 = fields[0]
                        .parse()
                        .map_err(|_| CoreError::parse(lno, "bad edge endpoint"))?;
                    let b: u32 = fields[1]
                        .parse()
                        .map_err(|_| CoreError::parse(lno, "bad edge endpoint"))?;
                    let w: f64 = fields[2]
                        .parse()
                        .map_err(|_| CoreError::parse(lno, "bad edge weight"))?;
                    raw_edges.push((a, b, w));
                }
                Some(other) => {
                    return Err(CoreError::parse(lno, format!("unknown record '{}'", other)))
                }
                None => {}
            }
        }

        if vertices.is_empty() {
            return Err(CoreError::domain("dump contains no vertices"));
        }
        let dim = vertices[0].coords.len();
        if dim == 0 || vertices.iter().any(|v| v.coords.len() != dim) {
            return Err(CoreError::domain("inconsistent coordinate dimension in dump"));
        }

        // Interior first (mu > 0), then halo, each in dump-index order.
        let mut order: Vec<usize> = (0..vertices.len()).collect();
        order.sort_by_key(|&i| (vertices[i].mu == 0.0, vertices[i].idx));
        let mut remap = HashMap::with_capacity(vertices.len());
        for (new, &old) in order.iter().enumerate() {
            if remap.insert(vertices[old].idx, new as u32).is_some() {
                return Err(CoreError::domain("duplicate vertex index in dump"));
            }
        }

        let n_interior = vertices.iter().filter(|v| v.mu > 0.0).count();
        let mut coords = Vec::with_capacity(vertices.len() * dim);
        let mut mu = Vec::with_capacity(n_interior);
        for &old in &order {
            coords.extend_from_slice(&vertices[old].coords);
            if vertices[old].mu > 0.0 {
                mu.push(vertices[old].mu);
            }
        }

        let undirected: Vec<(u32, u32, f64)> = raw_edges
            .iter()
            .map(|&(a, b, w)| {
                let a = *remap
                    .get(&a)
                    .ok_or_else(|| CoreError::domain("edge references unknown vertex"))?;
                let b = *remap
                    .get(&b)
                    .ok_or_else(|| CoreError::domain("edge references unknown vertex"))?;
                Ok((a, b, w))
            })
            .collect::<Result<_>>()?;

        Graph::from_parts(dim, n_interior, coords, mu, &undirected, GraphKind::General)
    }
}

/// Build the truncated lattice box with unit measure and unit weights.
///
/// Interior vertices are indexed row-major over the box; the one-layer halo
/// follows in lexicographic coordinate order. Outgoing edges of each vertex
/// are generated dimension by dimension, minus direction before plus, which
/// keeps the reduction order translation-equivariant.
pub fn build_lattice(spec: &LatticeSpec) -> Result<Graph> {
    if spec.dim < 2 {
        return Err(CoreError::domain("lattice dimension must be at least 2"));
    }
    if spec.radius < 0 {
        return Err(CoreError::domain("lattice radius must be non-negative"));
    }
    let side = 2u128 * spec.radius as u128 + 1;
    let mut cells: u128 = spec.dim as u128;
    for _ in 0..spec.dim {
        cells = cells.saturating_mul(side);
    }
    if cells > spec.cell_budget as u128 {
        return Err(CoreError::Capacity {
            cells,
            budget: spec.cell_budget,
        });
    }

    let dim = spec.dim;
    let r = spec.radius;
    let side = (2 * r + 1) as usize;
    let n_interior = side.pow(dim as u32);

    let mut coords: Vec<i64> = Vec::with_capacity(n_interior * dim);
    let mut point = vec![-r; dim];
    loop {
        coords.extend_from_slice(&point);
        // row-major increment: last coordinate fastest
        let mut d = dim;
        loop {
            if d == 0 {
                break;
            }
            d -= 1;
            point[d] += 1;
            if point[d] <= r {
                break;
            }
            point[d] = -r;
            if d == 0 {
                break;
            }
        }
        if point.iter().all(|&c| c == -r) {
            break;
        }
    }
    debug_assert_eq!(coords.len(), n_interior * dim);

    let in_box = |p: &[i64]| p.iter().all(|&c| c.abs() <= r);

    // Halo: neighbours of interior vertices that fall outside the box.
    let mut halo: Vec<Vec<i64>> = Vec::new();
    {
        let mut seen = HashMap::new();
        for v in 0..n_interior {
            let base = &coords[v * dim..(v + 1) * dim];
            for d in 0..dim {
                for step in [-1i64, 1] {
                    let mut nb = base.to_vec();
                    nb[d] += step;
                    if !in_box(&nb) && !seen.contains_key(&nb) {
                        seen.insert(nb.clone(), ());
                        halo.push(nb);
                    }
                }
            }
        }
    }
    halo.sort();
    let n_total = n_interior + halo.len();
    let mut all_coords = coords;
    for h in &halo {
        all_coords.extend_from_slice(h);
    }

    let mut index_of = HashMap::with_capacity(n_total);
    for v in 0..n_total {
        index_of.insert(all_coords[v * dim..(v + 1) * dim].to_vec(), v as u32);
    }

    // Undirected edges, one record per unordered pair; from_parts expands both
    // orientations in per-tail generation order. To preserve the direction
    // order of out-edges we instead build directed edges here.
    let mut edges: Vec<Edge> = Vec::new();
    let mut out_start = vec![0u32; n_total + 1];
    for v in 0..n_total {
        let base = all_coords[v * dim..(v + 1) * dim].to_vec();
        let v_interior = v < n_interior;
        for d in 0..dim {
            for step in [-1i64, 1] {
                let mut nb = base.clone();
                nb[d] += step;
                if let Some(&w_idx) = index_of.get(&nb) {
                    let w_interior = (w_idx as usize) < n_interior;
                    if v_interior || w_interior {
                        edges.push(Edge {
                            tail: v as u32,
                            head: w_idx,
                            weight: 1.0,
                        });
                    }
                }
            }
        }
        out_start[v + 1] = edges.len() as u32;
    }

    let mut rev_lookup = HashMap::with_capacity(edges.len());
    for (i, e) in edges.iter().enumerate() {
        rev_lookup.insert((e.tail, e.head), i as u32);
    }
    let reverse = edges
        .iter()
        .map(|e| rev_lookup[&(e.head, e.tail)])
        .collect();

    Ok(Graph {
        dim,
        n_interior,
        coords: all_coords,
        mu: vec![1.0; n_interior],
        edges,
        out_start,
        reverse,
        index_of,
        kind: GraphKind::LatticeBox { radius: r },
    })
}

/// Real values on interior vertices; implicitly zero on the halo.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexFunction {
    values: Vec<f64>,
}

impl VertexFunction {
    pub fn zeros(n: usize) -> Self {
        VertexFunction {
            values: vec![0.0; n],
        }
    }

    pub fn from_values(values: Vec<f64>) -> Self {
        VertexFunction { values }
    }

    /// The indicator of a single interior vertex.
    pub fn delta(g: &Graph, coords: &[i64]) -> Result<Self> {
        match g.vertex_at(coords) {
            Some(v) if g.is_interior(v) => {
                let mut u = VertexFunction::zeros(g.n_interior());
                u.values[v] = 1.0;
                Ok(u)
            }
            _ => Err(CoreError::domain("delta site is not an interior vertex")),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scale(&mut self, c: f64) {
        for v in &mut self.values {
            *v *= c;
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.scale(c);
        out
    }

    /// self += c * other
    pub fn axpy(&mut self, c: f64, other: &VertexFunction) {
        debug_assert_eq!(self.len(), other.len());
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += c * b;
        }
    }

    pub fn dot(&self, other: &VertexFunction) -> f64 {
        debug_assert_eq!(self.len(), other.len());
        csum(self.values.iter().zip(&other.values).map(|(a, b)| a * b))
    }

    pub fn abs_in_place(&mut self) {
        for v in &mut self.values {
            *v = v.abs();
        }
    }

    /// Interior index of the entry with the largest magnitude.
    pub fn peak_index(&self) -> usize {
        let mut best = 0;
        let mut best_val = -1.0;
        for (i, v) in self.values.iter().enumerate() {
            if v.abs() > best_val {
                best_val = v.abs();
                best = i;
            }
        }
        best
    }
}

impl std::ops::Index<usize> for VertexFunction {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

impl std::ops::IndexMut<usize> for VertexFunction {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.values[i]
    }
}

/// Real values on directed edges.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeFunction {
    values: Vec<f64>,
}

impl EdgeFunction {
    pub fn zeros(n: usize) -> Self {
        EdgeFunction {
            values: vec![0.0; n],
        }
    }

    pub fn from_values(values: Vec<f64>) -> Self {
        EdgeFunction { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Exact antisymmetry check against the graph's edge pairing.
    pub fn is_antisymmetric(&self, g: &Graph) -> bool {
        self.values.len() == g.n_directed_edges()
            && (0..self.values.len()).all(|e| self.values[e] == -self.values[g.reverse_edge(e)])
    }
}

impl std::ops::Index<usize> for EdgeFunction {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

impl std::ops::IndexMut<usize> for EdgeFunction {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.values[i]
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(CoreError::ShapeMismatch { expected, got })
    }
}

/// Difference operator: per directed edge `(x,y)`, `u(y) - u(x)` with halo
/// values read as zero. The result is exactly antisymmetric.
pub fn gradient(g: &Graph, u: &VertexFunction) -> Result<EdgeFunction> {
    check_len(g.n_interior(), u.len())?;
    let mut out = EdgeFunction::zeros(g.n_directed_edges());
    for (i, e) in g.edges().iter().enumerate() {
        out.values[i] = g.value_at(u, e.head as usize) - g.value_at(u, e.tail as usize);
    }
    Ok(out)
}

/// Divergence: `(div f)(x) = 1/(2 mu(x)) * sum_{y~x} w_xy (f(x,y) - f(y,x))`
/// on interior vertices.
pub fn divergence(g: &Graph, f: &EdgeFunction) -> Result<VertexFunction> {
    check_len(g.n_directed_edges(), f.len())?;
    let mut out = VertexFunction::zeros(g.n_interior());
    for x in 0..g.n_interior() {
        let base = g.out_start[x] as usize;
        let mut acc = 0.0;
        for (k, e) in g.out_edges(x).iter().enumerate() {
            let idx = base + k;
            acc += e.weight * (f.values[idx] - f.values[g.reverse_edge(idx)]);
        }
        out.values[x] = acc / (2.0 * g.mu(x));
    }
    Ok(out)
}

/// Vertex integral `sum_x mu(x) u(x)` (the halo contributes nothing).
pub fn integrate_vertices(g: &Graph, u: &VertexFunction) -> f64 {
    assert_eq!(g.n_interior(), u.len(), "vertex function has wrong length");
    csum(u.values.iter().enumerate().map(|(x, v)| g.mu(x) * v))
}

/// Edge integral `1/2 * sum over directed edges of w_xy f(x,y)`.
pub fn integrate_edges(g: &Graph, f: &EdgeFunction) -> f64 {
    assert_eq!(
        g.n_directed_edges(),
        f.len(),
        "edge function has wrong length"
    );
    0.5 * csum(g.edges().iter().zip(&f.values).map(|(e, v)| e.weight * v))
}
