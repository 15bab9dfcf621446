use super::Permutation;

pub(crate) const NONE: u32 = u32::MAX;

/// Breadth-first Schreier tree of an orbit.
///
/// Points are stored in discovery order; `parent` and `label` are indexed by
/// that order and record the tree edge `parent --gens[label]--> point`.
#[derive(Clone, Debug)]
pub(crate) struct SchreierTree {
    pub points: Vec<u32>,
    pub position: Vec<u32>,
    pub parent: Vec<u32>,
    pub label: Vec<u32>,
}

impl SchreierTree {
    pub fn build(root: usize, gens: &[&Permutation], degree: usize) -> SchreierTree {
        let mut position = vec![NONE; degree];
        let mut points = vec![root as u32];
        let mut parent = vec![0u32];
        let mut label = vec![NONE];
        position[root] = 0;
        let mut head = 0;
        while head < points.len() {
            let x = points[head] as usize;
            for (k, g) in gens.iter().enumerate() {
                let y = g.apply(x);
                if position[y] == NONE {
                    position[y] = points.len() as u32;
                    points.push(y as u32);
                    parent.push(head as u32);
                    label.push(k as u32);
                }
            }
            head += 1;
        }
        SchreierTree {
            points,
            position,
            parent,
            label,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn root(&self) -> usize {
        self.points[0] as usize
    }

    #[inline]
    pub fn position_of(&self, point: usize) -> Option<usize> {
        match self.position.get(point) {
            Some(&p) if p != NONE => Some(p as usize),
            _ => None,
        }
    }

    /// Generator labels along the tree path from the root to the point at `pos`.
    pub fn word(&self, mut pos: usize) -> Vec<u32> {
        let mut w = Vec::new();
        while pos != 0 {
            w.push(self.label[pos]);
            pos = self.parent[pos] as usize;
        }
        w.reverse();
        w
    }

    pub fn is_tree_edge(&self, from_pos: usize, label: usize, to_pos: usize) -> bool {
        to_pos != 0 && self.parent[to_pos] as usize == from_pos && self.label[to_pos] as usize == label
    }

    /// Coset representative mapping the root to the point at `pos`.
    pub fn representative(&self, pos: usize, gens: &[&Permutation], degree: usize) -> Permutation {
        let word = self.word(pos);
        if word.is_empty() {
            return Permutation::identity(degree);
        }
        let mut images: Vec<u32> = gens[word[0] as usize].images().to_vec();
        for &l in &word[1..] {
            let g = gens[l as usize].images();
            for v in images.iter_mut() {
                *v = g[*v as usize];
            }
        }
        Permutation::from_images(images).expect("product of permutations")
    }

    /// All representatives in discovery order, each built from its parent's.
    pub fn all_representatives(&self, gens: &[&Permutation], degree: usize) -> Vec<Permutation> {
        let mut reps: Vec<Permutation> = Vec::with_capacity(self.len());
        reps.push(Permutation::identity(degree));
        for pos in 1..self.len() {
            let parent = &reps[self.parent[pos] as usize];
            reps.push(parent.then(gens[self.label[pos] as usize]));
        }
        reps
    }

    /// Images of `point` under every representative, in discovery order.
    pub fn column(&self, point: usize, gens: &[&Permutation], out: &mut Vec<u32>) {
        out.clear();
        out.reserve(self.len());
        out.push(point as u32);
        for pos in 1..self.len() {
            let prev = out[self.parent[pos] as usize];
            out.push(gens[self.label[pos] as usize].images()[prev as usize]);
        }
    }
}
