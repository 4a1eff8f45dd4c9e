//! Canonical labeling of a code through its coordinate/codeword incidence
//! graph: equitable partition refinement, individualization of coordinate
//! vertices, and a depth-first search pruned by discovered automorphisms.
//!
//! A leaf of the search is a discrete ordering of the coordinates. Its
//! certificate is the RREF generator matrix of the code relabeled by that
//! ordering, so two leaves with equal certificates differ by an
//! automorphism of the code. The canonical leaf is the maximum of
//! `(trace sequence, certificate)` over all leaves.

use std::cmp::Ordering;
use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::gf2::rref_words;
use crate::perm::Permutation;

pub const DEFAULT_NODE_BUDGET: u64 = 20_000_000;

#[inline]
fn mix(h: u64, x: u64) -> u64 {
    let mut z = h ^ x.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_add(h << 6).wrapping_add(h >> 2);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Bipartite incidence graph: vertices `0..n` are coordinates, the rest
/// are codewords.
pub(crate) struct Graph {
    adj: Vec<Vec<u32>>,
}

impl Graph {
    pub(crate) fn new(n: usize, words: &[u64]) -> Self {
        let mut adj = vec![Vec::new(); n + words.len()];
        for (k, &w) in words.iter().enumerate() {
            let wv = (n + k) as u32;
            let mut rest = w;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                adj[i].push(wv);
                adj[n + k].push(i as u32);
            }
        }
        Graph { adj }
    }

    fn order(&self) -> usize {
        self.adj.len()
    }
}

#[derive(Clone)]
struct Partition {
    elems: Vec<u32>,
    pos: Vec<u32>,
    /// vertex -> start position of its cell
    cell_of: Vec<u32>,
    /// start position -> end position (exclusive); meaningful at cell starts
    cell_end: Vec<u32>,
}

impl Partition {
    /// Cells given as an ordered list of vertex groups.
    fn from_cells(order: usize, cells: &[Vec<u32>]) -> Self {
        let mut p = Partition {
            elems: Vec::with_capacity(order),
            pos: vec![0; order],
            cell_of: vec![0; order],
            cell_end: vec![0; order + 1],
        };
        for cell in cells {
            let s = p.elems.len() as u32;
            for &v in cell {
                p.pos[v as usize] = p.elems.len() as u32;
                p.cell_of[v as usize] = s;
                p.elems.push(v);
            }
            p.cell_end[s as usize] = p.elems.len() as u32;
        }
        debug_assert_eq!(p.elems.len(), order);
        p
    }

    fn cell_starts(&self) -> Vec<u32> {
        let mut out = Vec::new();
        let mut s = 0u32;
        while (s as usize) < self.elems.len() {
            out.push(s);
            s = self.cell_end[s as usize];
        }
        out
    }

    /// All coordinate cells (positions `< n`) are singletons.
    fn coords_discrete(&self, n: usize) -> bool {
        let mut s = 0usize;
        while s < n {
            let e = self.cell_end[s] as usize;
            if e - s > 1 {
                return false;
            }
            s = e;
        }
        true
    }

    /// First largest non-singleton cell among coordinate positions.
    fn target_cell(&self, n: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        let mut s = 0usize;
        while s < n {
            let e = self.cell_end[s] as usize;
            if e - s > 1 && best.is_none_or(|(bs, be)| e - s > be - bs) {
                best = Some((s, e));
            }
            s = e;
        }
        best
    }
}

struct Refiner<'g> {
    graph: &'g Graph,
    count: Vec<u32>,
    touched: Vec<u32>,
    in_queue: Vec<bool>,
    scratch: Vec<(u32, u32)>,
}

impl<'g> Refiner<'g> {
    fn new(graph: &'g Graph) -> Self {
        let order = graph.order();
        Refiner {
            graph,
            count: vec![0; order],
            touched: Vec::new(),
            in_queue: vec![false; order + 1],
            scratch: Vec::new(),
        }
    }

    /// Refines `p` to the coarsest equitable partition finer than it, using
    /// the given cell starts as initial splitters. Returns the trace hash.
    fn refine(&mut self, p: &mut Partition, initial: &[u32]) -> u64 {
        let mut queue: VecDeque<u32> = VecDeque::new();
        for &s in initial {
            if !self.in_queue[s as usize] {
                self.in_queue[s as usize] = true;
                queue.push_back(s);
            }
        }
        let mut trace = 0x1234_5678u64;
        let mut cells_touched: Vec<u32> = Vec::new();
        while let Some(ws) = queue.pop_front() {
            self.in_queue[ws as usize] = false;
            let we = p.cell_end[ws as usize];
            trace = mix(trace, ((ws as u64) << 32) | (we - ws) as u64);
            for k in ws..we {
                let w = p.elems[k as usize];
                for &u in &self.graph.adj[w as usize] {
                    if self.count[u as usize] == 0 {
                        self.touched.push(u);
                    }
                    self.count[u as usize] += 1;
                }
            }
            cells_touched.clear();
            for &u in &self.touched {
                cells_touched.push(p.cell_of[u as usize]);
            }
            cells_touched.sort_unstable();
            cells_touched.dedup();
            for &xs in &cells_touched {
                let xe = p.cell_end[xs as usize];
                if xe - xs == 1 {
                    let v = p.elems[xs as usize];
                    trace = mix(trace, ((xs as u64) << 32) | self.count[v as usize] as u64);
                    continue;
                }
                self.scratch.clear();
                for k in xs..xe {
                    let v = p.elems[k as usize];
                    self.scratch.push((self.count[v as usize], v));
                }
                let first = self.scratch[0].0;
                if self.scratch.iter().all(|&(c, _)| c == first) {
                    trace = mix(trace, ((xs as u64) << 32) | first as u64);
                    continue;
                }
                self.scratch.sort_unstable();
                let was_queued = self.in_queue[xs as usize];
                // rewrite the cell in count order and cut it into subcells
                let mut sub_start = xs;
                let mut largest = (0u32, xs);
                let mut subcells: Vec<u32> = Vec::new();
                for (idx, &(c, v)) in self.scratch.iter().enumerate() {
                    let at = xs + idx as u32;
                    p.elems[at as usize] = v;
                    p.pos[v as usize] = at;
                    let boundary = idx + 1 == self.scratch.len() || self.scratch[idx + 1].0 != c;
                    if boundary {
                        let sub_end = at + 1;
                        for k in sub_start..sub_end {
                            p.cell_of[p.elems[k as usize] as usize] = sub_start;
                        }
                        p.cell_end[sub_start as usize] = sub_end;
                        trace = mix(trace, ((c as u64) << 32) | (sub_end - sub_start) as u64);
                        if sub_end - sub_start > largest.0 {
                            largest = (sub_end - sub_start, sub_start);
                        }
                        subcells.push(sub_start);
                        sub_start = sub_end;
                    }
                }
                for &sc in &subcells {
                    let skip = !was_queued && sc == largest.1;
                    if !skip && !self.in_queue[sc as usize] {
                        self.in_queue[sc as usize] = true;
                        queue.push_back(sc);
                    }
                }
            }
            for &u in &self.touched {
                self.count[u as usize] = 0;
            }
            self.touched.clear();
        }
        let ncells = p.cell_starts().len() as u64;
        mix(trace, ncells)
    }

    fn individualize(&mut self, p: &mut Partition, v: u32) -> u64 {
        let s = p.cell_of[v as usize];
        let e = p.cell_end[s as usize];
        debug_assert!(e - s > 1);
        let at = p.pos[v as usize];
        let other = p.elems[s as usize];
        p.elems.swap(s as usize, at as usize);
        p.pos[other as usize] = at;
        p.pos[v as usize] = s;
        for k in s + 1..e {
            p.cell_of[p.elems[k as usize] as usize] = s + 1;
        }
        p.cell_end[s as usize] = s + 1;
        p.cell_end[(s + 1) as usize] = e;
        let t = self.refine(p, &[s]);
        mix(t, s as u64)
    }
}

struct Leaf {
    traces: Vec<u64>,
    path: Vec<u32>,
    /// coordinate -> position
    labeling: Vec<u32>,
    cert: Vec<u64>,
}

pub(crate) struct SearchOutcome {
    /// coordinate -> canonical position
    pub labeling: Permutation,
    pub canonical_rows: Vec<u64>,
    pub automorphisms: Vec<Permutation>,
    pub nodes: u64,
}

struct Search<'a> {
    n: usize,
    rows: &'a [u64],
    refiner: Refiner<'a>,
    first: Option<Leaf>,
    best: Option<Leaf>,
    autos: Vec<Permutation>,
    nodes: u64,
    budget: u64,
}

fn common_prefix(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

fn cmp_prefix(traces: &[u64], reference: &[u64]) -> Ordering {
    let m = traces.len().min(reference.len());
    match traces[..m].cmp(&reference[..m]) {
        Ordering::Equal if traces.len() > reference.len() => Ordering::Greater,
        o => o,
    }
}

impl<'a> Search<'a> {
    fn certificate(&self, p: &Partition) -> (Vec<u32>, Vec<u64>) {
        let labeling: Vec<u32> = (0..self.n).map(|v| p.pos[v]).collect();
        let mut rows: Vec<u64> = self
            .rows
            .iter()
            .map(|&r| {
                let mut out = 0u64;
                let mut rest = r;
                while rest != 0 {
                    let i = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    out |= 1u64 << labeling[i];
                }
                out
            })
            .collect();
        rref_words(&mut rows, self.n);
        (labeling, rows)
    }

    fn record_automorphism(&mut self, a: &[u32], b: &[u32]) -> Result<()> {
        // a(C) = b(C)  =>  b⁻¹ ∘ a ∈ Aut(C)
        let mut binv = vec![0usize; self.n];
        for (v, &p) in b.iter().enumerate() {
            binv[p as usize] = v;
        }
        let images: Vec<usize> = a.iter().map(|&p| binv[p as usize]).collect();
        let g = Permutation::from_images(images)?;
        if g.is_identity() {
            return Ok(());
        }
        let ok = self.rows.iter().all(|&r| {
            let img = g.apply_word(r);
            let mut v = img;
            // membership via the RREF rows of the original code
            for &row in self.rows {
                let p = row.trailing_zeros();
                if v >> p & 1 == 1 {
                    v ^= row;
                }
            }
            v == 0
        });
        if !ok {
            return Err(Error::Invariant("leaf certificates matched but the map is not an automorphism".into()));
        }
        if !self.autos.contains(&g) {
            self.autos.push(g);
        }
        Ok(())
    }

    fn leaf(&mut self, p: &Partition, path: &[u32], traces: &[u64]) -> Result<usize> {
        let level = path.len();
        let (labeling, cert) = self.certificate(p);
        let leaf = Leaf {
            traces: traces.to_vec(),
            path: path.to_vec(),
            labeling,
            cert,
        };
        let Some(first) = &self.first else {
            self.best = Some(Leaf {
                traces: leaf.traces.clone(),
                path: leaf.path.clone(),
                labeling: leaf.labeling.clone(),
                cert: leaf.cert.clone(),
            });
            self.first = Some(leaf);
            return Ok(level.saturating_sub(1));
        };
        if first.traces == leaf.traces && first.cert == leaf.cert {
            let (fl, back) = (first.labeling.clone(), common_prefix(&first.path, path));
            self.record_automorphism(&fl, &leaf.labeling)?;
            return Ok(back);
        }
        let best = self.best.as_ref().unwrap();
        let ord = (&leaf.traces, &leaf.cert).cmp(&(&best.traces, &best.cert));
        match ord {
            Ordering::Greater => {
                self.best = Some(leaf);
                Ok(level.saturating_sub(1))
            }
            Ordering::Equal => {
                let (bl, back) = (best.labeling.clone(), common_prefix(&best.path, path));
                self.record_automorphism(&bl, &leaf.labeling)?;
                Ok(back)
            }
            Ordering::Less => Ok(level.saturating_sub(1)),
        }
    }

    fn same_orbit_as_explored(&self, path: &[u32], explored: &[u32], v: u32) -> bool {
        if explored.is_empty() || self.autos.is_empty() {
            return false;
        }
        let fixing: Vec<&Permutation> = self
            .autos
            .iter()
            .filter(|g| path.iter().all(|&x| g.image(x as usize) == x as usize))
            .collect();
        if fixing.is_empty() {
            return false;
        }
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for g in fixing {
            for x in 0..self.n {
                let (a, b) = (find(&mut parent, x), find(&mut parent, g.image(x)));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let rv = find(&mut parent, v as usize);
        explored.iter().any(|&u| find(&mut parent, u as usize) == rv)
    }

    fn explore(&mut self, p: &Partition, path: &mut Vec<u32>, traces: &mut Vec<u64>) -> Result<usize> {
        let level = path.len();
        if p.coords_discrete(self.n) {
            return self.leaf(p, path, traces);
        }
        let (s, e) = p.target_cell(self.n).expect("non-discrete partition has a target cell");
        let mut children: Vec<u32> = p.elems[s..e].to_vec();
        children.sort_unstable();
        let mut explored: Vec<u32> = Vec::new();
        for v in children {
            if self.same_orbit_as_explored(path, &explored, v) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::Budget {
                    what: "canonical labeling search nodes".into(),
                    limit: self.budget,
                });
            }
            let mut child = p.clone();
            let t = self.refiner.individualize(&mut child, v);
            path.push(v);
            traces.push(t);
            let eq_first = self
                .first
                .as_ref()
                .is_some_and(|f| f.traces.len() >= traces.len() && f.traces[..traces.len()] == traces[..]);
            let vs_best = self
                .best
                .as_ref()
                .map_or(Ordering::Greater, |b| cmp_prefix(traces, &b.traces));
            let r = if !eq_first && vs_best == Ordering::Less {
                level
            } else {
                self.explore(&child, path, traces)?
            };
            path.pop();
            traces.pop();
            explored.push(v);
            if r < level {
                return Ok(r);
            }
        }
        Ok(level.saturating_sub(1))
    }
}

/// Runs the canonical labeling search.
///
/// `coord_cells` is the ordered initial coloring of coordinates and
/// `words` the codeword vertices (grouped into cells by weight).
pub(crate) fn search(
    n: usize,
    rows: &[u64],
    words: &[u64],
    coord_cells: &[Vec<u32>],
    budget: u64,
) -> Result<SearchOutcome> {
    let graph = Graph::new(n, words);
    let mut cells: Vec<Vec<u32>> = coord_cells.to_vec();
    let mut by_weight: std::collections::BTreeMap<u32, Vec<u32>> = Default::default();
    for (k, w) in words.iter().enumerate() {
        by_weight.entry(w.count_ones()).or_default().push((n + k) as u32);
    }
    cells.extend(by_weight.into_values());
    let mut part = Partition::from_cells(graph.order(), &cells);
    let mut refiner = Refiner::new(&graph);
    let starts = part.cell_starts();
    let root_trace = refiner.refine(&mut part, &starts);
    let mut s = Search {
        n,
        rows,
        refiner,
        first: None,
        best: None,
        autos: Vec::new(),
        nodes: 1,
        budget,
    };
    let mut path = Vec::new();
    let mut traces = vec![root_trace];
    s.explore(&part, &mut path, &mut traces)?;
    let best = s.best.take().expect("search reaches at least one leaf");
    let labeling = Permutation::from_images(best.labeling.iter().map(|&p| p as usize).collect())?;
    Ok(SearchOutcome {
        labeling,
        canonical_rows: best.cert,
        automorphisms: s.autos,
        nodes: s.nodes,
    })
}
