//! Small undirected graph helpers shared by the analysis modules.

use std::collections::VecDeque;

#[derive(Clone, Debug)]
pub struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSet {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), rank: vec![0; n] }
    }

    pub fn find(&mut self, mut node: usize) -> usize {
        let mut root = node;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[node] != root {
            let next = self.parent[node];
            self.parent[node] = root;
            node = next;
        }
        root
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.rank[a] < self.rank[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        if self.rank[a] == self.rank[b] {
            self.rank[a] += 1;
        }
        true
    }
}

/// Simple undirected graph on `0..n` with sorted adjacency lists.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Self { adjacency: vec![Vec::new(); n] }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Self::new(n);
        for (a, b) in edges {
            g.add_edge(a, b);
        }
        g.finish();
        g
    }

    /// Adds an edge; call [`Graph::finish`] before querying.
    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert_ne!(a, b, "loops are not allowed");
        self.adjacency[a].push(b);
        self.adjacency[b].push(a);
    }

    pub fn finish(&mut self) {
        for list in &mut self.adjacency {
            list.sort_unstable();
            list.dedup();
        }
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, list) in self.adjacency.iter().enumerate() {
            for &b in list {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// BFS distances from `source`; `None` for unreachable vertices.
    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.len()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            for &w in &self.adjacency[v] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Connected components of the subgraph induced by `keep`, as a label per
    /// vertex (`None` outside `keep`) and the component count.
    pub fn components_where(&self, keep: impl Fn(usize) -> bool) -> (Vec<Option<usize>>, usize) {
        self.components_filtered(keep, |_, _| true)
    }

    /// Components of the graph restricted to vertices in `keep` and edges
    /// accepted by `edge_ok`.
    pub fn components_filtered(
        &self,
        keep: impl Fn(usize) -> bool,
        edge_ok: impl Fn(usize, usize) -> bool,
    ) -> (Vec<Option<usize>>, usize) {
        let mut label = vec![None; self.len()];
        let mut count = 0;
        for start in 0..self.len() {
            if label[start].is_some() || !keep(start) {
                continue;
            }
            label[start] = Some(count);
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adjacency[v] {
                    if label[w].is_none() && keep(w) && edge_ok(v, w) {
                        label[w] = Some(count);
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    pub fn is_connected_on(&self, members: &[usize]) -> bool {
        if members.is_empty() {
            return true;
        }
        let mut inside = vec![false; self.len()];
        for &m in members {
            inside[m] = true;
        }
        let (_, count) = self.components_where(|v| inside[v]);
        count == 1
    }

    pub fn is_connected(&self) -> bool {
        let all: Vec<usize> = (0..self.len()).collect();
        self.is_connected_on(&all)
    }

    /// Induced subgraph on `members`, relabelled to `0..members.len()`.
    pub fn induced(&self, members: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.len()];
        for (i, &m) in members.iter().enumerate() {
            index[m] = i;
        }
        let mut g = Graph::new(members.len());
        for (i, &m) in members.iter().enumerate() {
            for &w in &self.adjacency[m] {
                let j = index[w];
                if j != usize::MAX && i < j {
                    g.add_edge(i, j);
                }
            }
        }
        g.finish();
        g
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.len()).map(|v| self.degree(v)).collect();
        d.sort_unstable();
        d
    }
}
