use std::collections::VecDeque;

/// Integer-capacity flow network solved by shortest augmenting paths.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u32>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        Self { adj: vec![Vec::new(); nodes], to: Vec::new(), cap: Vec::new() }
    }

    pub fn add_arc(&mut self, u: usize, v: usize, cap: u32) {
        self.adj[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(cap);
        self.adj[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(0);
    }

    /// Undirected unit edge: one arc each way.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.add_arc(u, v, 1);
        self.add_arc(v, u, 1);
    }

    /// Max flow from `s` to `t`, stopping early once `limit` is reached.
    /// Consumes residual capacity; clone first to reuse the network.
    pub fn max_flow(&mut self, s: usize, t: usize, limit: Option<u32>) -> u32 {
        if s == t {
            return limit.unwrap_or(u32::MAX);
        }
        let n = self.adj.len();
        let mut flow = 0;
        let mut via = vec![usize::MAX; n];
        loop {
            if limit.is_some_and(|l| flow >= l) {
                return flow;
            }
            via.iter_mut().for_each(|x| *x = usize::MAX);
            let mut queue = VecDeque::from([s]);
            let mut seen = vec![false; n];
            seen[s] = true;
            while let Some(u) = queue.pop_front() {
                if u == t {
                    break;
                }
                for &a in &self.adj[u] {
                    let w = self.to[a];
                    if self.cap[a] > 0 && !seen[w] {
                        seen[w] = true;
                        via[w] = a;
                        queue.push_back(w);
                    }
                }
            }
            if !seen[t] {
                return flow;
            }
            let mut bottleneck = u32::MAX;
            let mut w = t;
            while w != s {
                let a = via[w];
                bottleneck = bottleneck.min(self.cap[a]);
                w = self.to[a ^ 1];
            }
            let mut w = t;
            while w != s {
                let a = via[w];
                self.cap[a] -= bottleneck;
                self.cap[a ^ 1] += bottleneck;
                w = self.to[a ^ 1];
            }
            flow += bottleneck;
        }
    }
}
