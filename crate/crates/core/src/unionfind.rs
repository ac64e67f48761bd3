/// Disjoint sets over `0..n` with path compression and union by rank.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Merge by rank; returns `(kept, absorbed)` roots, or `None` if already
    /// joined. Ties keep the class of `a`.
    pub fn union(&mut self, a: usize, b: usize) -> Option<(usize, usize)> {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return None;
        }
        let (keep, absorb) = if self.rank[ra] >= self.rank[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.link(keep, absorb);
        Some((keep, absorb))
    }

    /// Merge keeping the root of `keep`, whatever the ranks.
    pub fn union_keeping(&mut self, keep: usize, other: usize) -> Option<(usize, usize)> {
        let (rk, ro) = (self.find(keep), self.find(other));
        if rk == ro {
            return None;
        }
        self.link(rk, ro);
        Some((rk, ro))
    }

    fn link(&mut self, keep: usize, absorb: usize) {
        self.parent[absorb] = keep;
        let bump = u8::from(self.rank[keep] == self.rank[absorb]);
        self.rank[keep] = self.rank[keep].max(self.rank[absorb]).saturating_add(bump);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_and_compresses() {
        let mut uf = UnionFind::new(6);
        assert_eq!(uf.union(0, 1), Some((0, 1)));
        assert_eq!(uf.union(2, 3), Some((2, 3)));
        assert_eq!(uf.union(3, 1), Some((2, 0)));
        assert_eq!(uf.union(0, 2), None);
        assert_eq!(uf.find(1), 2);
        assert_eq!(uf.union_keeping(5, 0), Some((5, 2)));
        assert_eq!(uf.find(3), 5);
        assert_ne!(uf.find(4), uf.find(0));
    }
}
