//! Union-find over dense `u32` indices, with path halving and union by size.

pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        assert!(n <= u32::MAX as usize);
        UnionFind { parent: (0..n as u32).collect(), size: vec![1; n] }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    /// Union the two classes; returns true if they were previously disjoint.
    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
        true
    }

    pub fn component_count(&mut self) -> usize {
        (0..self.parent.len() as u32).filter(|&x| self.parent[x as usize] == x).count()
    }

    /// Size of each class keyed by root, iterated in index order.
    pub fn component_sizes(&mut self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for x in 0..self.parent.len() as u32 {
            if self.parent[x as usize] == x {
                out.push((x, self.size[x as usize]));
            }
        }
        out
    }

    /// Component label in `0..component_count()` for every element, assigned
    /// in order of the smallest element of each component.
    pub fn labels(&mut self) -> Vec<u32> {
        let n = self.parent.len();
        let mut label_of_root = vec![u32::MAX; n];
        let mut labels = vec![0u32; n];
        let mut next = 0u32;
        for x in 0..n as u32 {
            let r = self.find(x);
            if label_of_root[r as usize] == u32::MAX {
                label_of_root[r as usize] = next;
                next += 1;
            }
            labels[x as usize] = label_of_root[r as usize];
        }
        labels
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_unions() {
        let mut uf = UnionFind::new(6);
        assert_eq!(uf.component_count(), 6);
        assert!(uf.union(0, 3));
        assert!(!uf.union(3, 0));
        assert!(uf.union(1, 2));
        assert_eq!(uf.component_count(), 4);
        let labels = uf.labels();
        assert_eq!(labels[0], labels[3]);
        assert_eq!(labels[1], labels[2]);
        assert_ne!(labels[0], labels[5]);
    }
}
