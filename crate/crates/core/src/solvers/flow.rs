//! Dinic's max-flow on real capacities.

/// Residual network with paired forward/backward arcs.
#[derive(Debug, Clone)]
pub(crate) struct FlowNetwork {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<f64>,
    eps: f64,
}

impl FlowNetwork {
    /// `eps` is the residual capacity below which an arc counts as saturated.
    pub fn new(nodes: usize, eps: f64) -> Self {
        Self {
            head: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
            eps,
        }
    }

    /// Adds an arc `u -> v` with capacity `forward` and its reverse with
    /// capacity `backward`.
    pub fn add_arc(&mut self, u: usize, v: usize, forward: f64, backward: f64) {
        self.head[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(forward);
        self.head[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(backward);
    }

    fn levels(&self, source: usize) -> Vec<usize> {
        let mut level = vec![usize::MAX; self.head.len()];
        let mut queue = std::collections::VecDeque::new();
        level[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            for &a in &self.head[u] {
                let v = self.to[a];
                if self.cap[a] > self.eps && level[v] == usize::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        level
    }

    /// Pushes one blocking flow along level-increasing arcs, walking the
    /// level graph with an explicit stack.
    fn blocking_flow(&mut self, source: usize, sink: usize, level: &[usize]) -> f64 {
        let mut next = vec![0usize; self.head.len()];
        let mut total = 0.0;
        let mut path: Vec<usize> = Vec::new();
        let mut u = source;
        loop {
            if u == sink {
                let push = path
                    .iter()
                    .map(|&a| self.cap[a])
                    .fold(f64::INFINITY, f64::min);
                for &a in &path {
                    self.cap[a] -= push;
                    self.cap[a ^ 1] += push;
                }
                total += push;
                // Retreat to the tail of the first saturated arc.
                let cut = path
                    .iter()
                    .position(|&a| self.cap[a] <= self.eps)
                    .unwrap_or(0);
                path.truncate(cut);
                u = match path.last() {
                    Some(&a) => self.to[a],
                    None => source,
                };
                continue;
            }
            let mut advanced = false;
            while next[u] < self.head[u].len() {
                let a = self.head[u][next[u]];
                let v = self.to[a];
                if self.cap[a] > self.eps && level[v] == level[u] + 1 {
                    path.push(a);
                    u = v;
                    advanced = true;
                    break;
                }
                next[u] += 1;
            }
            if advanced {
                continue;
            }
            // Dead end: retreat one arc and skip it.
            match path.pop() {
                Some(a) => {
                    u = self.to[a ^ 1];
                    next[u] += 1;
                }
                None => return total,
            }
        }
    }

    /// Runs max-flow to completion and returns its value.
    pub fn max_flow(&mut self, source: usize, sink: usize) -> f64 {
        let mut total = 0.0;
        loop {
            let level = self.levels(source);
            if level[sink] == usize::MAX {
                return total;
            }
            total += self.blocking_flow(source, sink, &level);
        }
    }

    /// Nodes reachable from `source` in the residual network; after
    /// [`max_flow`](Self::max_flow) this is the source side of the minimal
    /// minimum cut.
    pub fn source_side(&self, source: usize) -> Vec<bool> {
        self.levels(source)
            .into_iter()
            .map(|l| l != usize::MAX)
            .collect()
    }
}
