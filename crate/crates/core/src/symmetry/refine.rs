use std::collections::VecDeque;

use super::ColoredGraph;

/// Ordered partition of the vertex set, as a list of cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    cells: Vec<Vec<usize>>,
}

impl Partition {
    /// Cells keep their order; vertices inside a cell are sorted.
    pub fn new(mut cells: Vec<Vec<usize>>) -> Self {
        cells.retain(|c| !c.is_empty());
        for c in &mut cells {
            c.sort_unstable();
        }
        Self { cells }
    }

    pub fn unit(n: usize) -> Self {
        Self::new(vec![(0..n).collect()])
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn into_cells(self) -> Vec<Vec<usize>> {
        self.cells
    }

    pub fn is_discrete(&self) -> bool {
        self.cells.iter().all(|c| c.len() == 1)
    }
}

/// Coarsest equitable refinement of `initial`. Cells are split in place, the
/// fragments ordered by their neighbor count into the splitting cell, so the
/// result depends only on the graph structure and not on vertex names.
pub fn refine(cg: &ColoredGraph, initial: &Partition) -> Partition {
    let adj = cg.graph().adjacency();
    let mut cells = Cells::from_partition(cg.n(), initial);
    cells.refine_all(&adj);
    cells.to_partition()
}

/// Array form of an ordered partition: `lab` lists the vertices cell by
/// cell, and a cell is identified by the index of its first slot.
#[derive(Debug, Clone)]
pub(crate) struct Cells {
    lab: Vec<usize>,
    pos: Vec<usize>,
    /// `cell_of[v]` is the start of the cell holding `v`.
    cell_of: Vec<usize>,
    /// `end[s]` is the exclusive end of the cell starting at `s`.
    end: Vec<usize>,
    n_cells: usize,
    /// Running hash of the split history, for cheap node comparison.
    trace: u64,
}

impl Cells {
    pub(crate) fn from_partition(n: usize, p: &Partition) -> Self {
        let mut lab = Vec::with_capacity(n);
        let mut cell_of = vec![0; n];
        let mut end = vec![0; n];
        for cell in p.cells() {
            let start = lab.len();
            for &v in cell {
                cell_of[v] = start;
                lab.push(v);
            }
            end[start] = lab.len();
        }
        assert_eq!(
            lab.len(),
            n,
            "partition must cover every vertex exactly once"
        );
        let mut pos = vec![0; n];
        for (i, &v) in lab.iter().enumerate() {
            pos[v] = i;
        }
        Self {
            lab,
            pos,
            cell_of,
            end,
            n_cells: p.cells().len(),
            trace: 0,
        }
    }

    pub(crate) fn to_partition(&self) -> Partition {
        Partition::new(
            self.cell_starts()
                .map(|s| self.lab[s..self.end[s]].to_vec())
                .collect(),
        )
    }

    pub(crate) fn len(&self) -> usize {
        self.lab.len()
    }

    pub(crate) fn lab(&self) -> &[usize] {
        &self.lab
    }

    pub(crate) fn is_discrete(&self) -> bool {
        self.n_cells == self.lab.len()
    }

    pub(crate) fn cell_starts(&self) -> impl Iterator<Item = usize> + '_ {
        let mut s = 0;
        std::iter::from_fn(move || {
            if s >= self.lab.len() {
                return None;
            }
            let start = s;
            s = self.end[start];
            Some(start)
        })
    }

    pub(crate) fn cell(&self, start: usize) -> &[usize] {
        &self.lab[start..self.end[start]]
    }

    /// Same cell boundaries and split history.
    pub(crate) fn same_shape(&self, other: &Cells) -> bool {
        self.n_cells == other.n_cells
            && self.trace == other.trace
            && self
                .cell_starts()
                .zip(other.cell_starts())
                .all(|(a, b)| a == b)
            && self.cell_starts().all(|s| self.end[s] == other.end[s])
    }

    /// Start of the first smallest non-singleton cell.
    pub(crate) fn target_cell(&self) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for s in self.cell_starts() {
            let size = self.end[s] - s;
            if size > 1 && best.is_none_or(|(_, b)| size < b) {
                best = Some((s, size));
            }
        }
        best.map(|(s, _)| s)
    }

    /// Moves `v` to the front of its cell as a singleton, then refines.
    pub(crate) fn individualize(&self, v: usize, adj: &[Vec<usize>]) -> Cells {
        let mut next = self.clone();
        let start = next.cell_of[v];
        let end = next.end[start];
        debug_assert!(end - start > 1, "individualizing a singleton");
        next.swap_slots(start, next.pos[v]);
        next.end[start] = start + 1;
        next.end[start + 1] = end;
        for i in start + 1..end {
            let u = next.lab[i];
            next.cell_of[u] = start + 1;
        }
        next.n_cells += 1;
        next.mix(&[start as u64, (end - start) as u64]);
        next.refine_from(VecDeque::from([start]), adj);
        next
    }

    pub(crate) fn refine_all(&mut self, adj: &[Vec<usize>]) {
        let queue: VecDeque<usize> = self.cell_starts().collect();
        self.refine_from(queue, adj);
    }

    fn swap_slots(&mut self, i: usize, j: usize) {
        self.lab.swap(i, j);
        self.pos[self.lab[i]] = i;
        self.pos[self.lab[j]] = j;
    }

    fn mix(&mut self, words: &[u64]) {
        for &w in words {
            self.trace = (self.trace ^ w.wrapping_add(0x9e37_79b9_7f4a_7c15))
                .wrapping_mul(0x0000_0100_0000_01b3)
                .rotate_left(17);
        }
    }

    fn refine_from(&mut self, mut queue: VecDeque<usize>, adj: &[Vec<usize>]) {
        let n = self.lab.len();
        let mut queued = vec![false; n];
        for &s in &queue {
            queued[s] = true;
        }
        let mut count = vec![0usize; n];
        let mut touched_cells: Vec<usize> = Vec::new();
        let mut is_touched = vec![false; n];

        while let Some(splitter) = queue.pop_front() {
            queued[splitter] = false;
            if self.is_discrete() {
                break;
            }
            let members: Vec<usize> = self.cell(splitter).to_vec();
            for &u in &members {
                for &x in &adj[u] {
                    count[x] += 1;
                    let c = self.cell_of[x];
                    if !is_touched[c] {
                        is_touched[c] = true;
                        touched_cells.push(c);
                    }
                }
            }
            touched_cells.sort_unstable();

            for &c in &touched_cells {
                is_touched[c] = false;
                let end = self.end[c];
                if end - c == 1 {
                    continue;
                }
                let first = count[self.lab[c]];
                if self.lab[c..end].iter().all(|&v| count[v] == first) {
                    continue;
                }
                self.lab[c..end].sort_unstable_by_key(|&v| (count[v], v));
                for i in c..end {
                    self.pos[self.lab[i]] = i;
                }
                let mut frag_start = c;
                let mut words = vec![splitter as u64, c as u64];
                for i in c + 1..=end {
                    if i == end || count[self.lab[i]] != count[self.lab[i - 1]] {
                        self.end[frag_start] = i;
                        for k in frag_start..i {
                            let v = self.lab[k];
                            self.cell_of[v] = frag_start;
                        }
                        words.push(count[self.lab[frag_start]] as u64);
                        words.push((i - frag_start) as u64);
                        if frag_start != c {
                            self.n_cells += 1;
                        }
                        if !queued[frag_start] {
                            queued[frag_start] = true;
                            queue.push_back(frag_start);
                        }
                        frag_start = i;
                    }
                }
                self.mix(&words);
            }

            for &u in &members {
                for &x in &adj[u] {
                    count[x] = 0;
                }
            }
            touched_cells.clear();
        }
    }
}
