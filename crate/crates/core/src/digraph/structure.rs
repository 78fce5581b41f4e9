use std::collections::VecDeque;

use super::{bits, Digraph, DigraphError};

/// Subset search in [`Digraph::contains_bidirected_kpq`] is bounded at this
/// many vertices.
pub const MAX_KPQ_SEARCH_VERTICES: usize = 10;

/// A proper two-colouring of the underlying undirected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    side: Vec<bool>,
}

impl Bipartition {
    /// `false` for part 0, `true` for part 1. Vertex 0 is always in part 0.
    pub fn side(&self, v: usize) -> bool {
        self.side[v]
    }

    pub fn part(&self, which: bool) -> Vec<usize> {
        (0..self.side.len()).filter(|&v| self.side[v] == which).collect()
    }

    fn mask(&self, which: bool) -> u64 {
        self.side.iter().enumerate().filter(|(_, s)| **s == which).fold(0, |m, (v, _)| m | (1u64 << v))
    }
}

impl Digraph {
    /// Strongly connected components, via iterative Tarjan. Components
    /// come out in reverse topological order of the condensation.
    pub fn strongly_connected_components(&self) -> Vec<Vec<usize>> {
        const UNSEEN: usize = usize::MAX;
        let n = self.n;
        let mut index = vec![UNSEEN; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::with_capacity(n);
        let mut comps = Vec::new();
        let mut next = 0usize;
        // (vertex, remaining out-neighbours to visit)
        let mut call: Vec<(usize, u64)> = Vec::with_capacity(n);

        for root in 0..n {
            if index[root] != UNSEEN {
                continue;
            }
            index[root] = next;
            low[root] = next;
            next += 1;
            stack.push(root);
            on_stack[root] = true;
            call.push((root, self.out[root]));

            while let Some(&mut (v, ref mut pending)) = call.last_mut() {
                if *pending != 0 {
                    let w = pending.trailing_zeros() as usize;
                    *pending &= *pending - 1;
                    if index[w] == UNSEEN {
                        index[w] = next;
                        low[w] = next;
                        next += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, self.out[w]));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                    continue;
                }
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
        comps
    }

    /// Every ordered pair of vertices is joined by a directed path.
    pub fn is_strongly_connected(&self) -> bool {
        if self.n == 1 {
            return true;
        }
        // Cheap rejection before the SCC pass.
        let mut has_in = 0u64;
        for &m in &self.out {
            if m == 0 {
                return false;
            }
            has_in |= m;
        }
        if has_in.count_ones() as usize != self.n {
            return false;
        }
        self.strongly_connected_components().len() == 1
    }

    /// Two-colouring of the underlying undirected graph such that every arc
    /// crosses parts, if one exists.
    pub fn bipartition(&self) -> Option<Bipartition> {
        let n = self.n;
        let undirected: Vec<u64> = (0..n).map(|v| self.out[v] | self.in_mask(v)).collect();
        let mut colour: Vec<Option<bool>> = vec![None; n];
        let mut queue = VecDeque::new();
        for start in 0..n {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(false);
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                let c = colour[v].unwrap();
                for w in bits(undirected[v]) {
                    match colour[w] {
                        None => {
                            colour[w] = Some(!c);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == c => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        let side: Vec<bool> = colour.into_iter().map(Option::unwrap).collect();
        debug_assert!(self.arcs.iter().all(|&(t, h)| side[t] != side[h]));
        Some(Bipartition { side })
    }

    /// Whether there are disjoint vertex sets `P`, `Q` with `|P| = p`,
    /// `|Q| = q` and all `2pq` arcs between them in both directions.
    pub fn contains_bidirected_kpq(&self, p: usize, q: usize) -> Result<bool, DigraphError> {
        if self.n > MAX_KPQ_SEARCH_VERTICES {
            return Err(DigraphError::TooLarge {
                what: "bidirected K_{p,q} search",
                n: self.n,
                max: MAX_KPQ_SEARCH_VERTICES,
            });
        }
        if p == 0 || q == 0 || p + q > self.n {
            return Ok(false);
        }
        // Bidirected neighbourhoods; a vertex is never its own neighbour, so
        // the common neighbourhood of P is automatically disjoint from P.
        let bi: Vec<u64> = (0..self.n).map(|v| self.out[v] & self.in_mask(v)).collect();
        let all = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        // P must sit inside one part when the digraph is bipartite.
        let pools: Vec<u64> = match self.bipartition() {
            Some(b) => vec![b.mask(false), b.mask(true)],
            None => vec![all],
        };
        for pool in pools {
            let members: Vec<usize> = bits(pool).collect();
            if members.len() < p {
                continue;
            }
            let found = for_each_subset(&members, p, &mut |subset| {
                let common = subset.iter().fold(all, |acc, &v| acc & bi[v]);
                common.count_ones() as usize >= q
            });
            if found {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Visits `k`-subsets of `items`, stopping early when `visit` returns true.
fn for_each_subset(items: &[usize], k: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn rec(
        items: &[usize],
        start: usize,
        k: usize,
        chosen: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if chosen.len() == k {
            return visit(chosen);
        }
        let need = k - chosen.len();
        for i in start..=items.len().saturating_sub(need) {
            if i >= items.len() {
                break;
            }
            chosen.push(items[i]);
            if rec(items, i + 1, k, chosen, visit) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    rec(items, 0, k, &mut Vec::with_capacity(k), visit)
}
