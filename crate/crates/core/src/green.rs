//! Green's relations of a finite monoid and its egg-box pictures.

use serde::Serialize;

use crate::monoid::FiniteMonoid;

/// Strongly connected components by an iterative Tarjan walk. `succ(v, i)`
/// is the `i`-th successor of `v`, for `i < degree`. Returns the component
/// of every vertex.
fn scc(n: usize, degree: usize, succ: impl Fn(usize, usize) -> usize) -> Vec<usize> {
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();
    let mut counter = 0;
    let mut ncomp = 0;
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        call.push((root, 0));
        while let Some(&mut (v, ref mut i)) = call.last_mut() {
            if *i < degree {
                let w = succ(v, *i);
                *i += 1;
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp[w] = ncomp;
                        if w == v {
                            break;
                        }
                    }
                    ncomp += 1;
                }
            }
        }
    }
    comp
}

/// Renumbers a class map so classes are ordered by least member.
fn normalize(of: &[usize]) -> (Vec<usize>, Vec<Vec<usize>>) {
    let mut renum = vec![usize::MAX; of.len()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut out = vec![0; of.len()];
    for (x, c) in of.iter().enumerate() {
        if renum[*c] == usize::MAX {
            renum[*c] = classes.len();
            classes.push(Vec::new());
        }
        out[x] = renum[*c];
        classes[renum[*c]].push(x);
    }
    (out, classes)
}

/// One J-class laid out with R-classes as rows and L-classes as columns.
#[derive(Debug, Clone, Serialize)]
pub struct EggBox {
    pub j: usize,
    /// R-class ids, top to bottom.
    pub rows: Vec<usize>,
    /// L-class ids, left to right.
    pub cols: Vec<usize>,
    /// `cells[r][c]` lists the H-class `rows[r] ∩ cols[c]`.
    pub cells: Vec<Vec<Vec<usize>>>,
}

impl EggBox {
    pub fn h_size(&self) -> usize {
        self.cells[0][0].len()
    }

    /// 0/1 matrix marking the cells that contain an idempotent.
    pub fn idempotent_pattern(&self, m: &FiniteMonoid) -> Vec<Vec<bool>> {
        self.cells
            .iter()
            .map(|row| row.iter().map(|h| h.iter().any(|&x| m.is_idempotent(x))).collect())
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GreenStructure {
    pub r_of: Vec<usize>,
    pub l_of: Vec<usize>,
    pub j_of: Vec<usize>,
    pub d_of: Vec<usize>,
    pub r_classes: Vec<Vec<usize>>,
    pub l_classes: Vec<Vec<usize>>,
    pub j_classes: Vec<Vec<usize>>,
    pub eggboxes: Vec<EggBox>,
    /// `j_leq[a][b]` iff `J_a ≤ J_b`, i.e. `J_a` lies in the ideal of `J_b`.
    pub j_leq: Vec<Vec<bool>>,
}

impl GreenStructure {
    pub fn j_count(&self) -> usize {
        self.j_classes.len()
    }

    pub fn is_h_trivial(&self) -> bool {
        self.eggboxes.iter().all(|e| e.h_size() == 1)
    }

    /// D (the join of R and L) coincides with J.
    pub fn d_equals_j(&self) -> bool {
        let n = self.j_of.len();
        (0..n).all(|a| (0..n).all(|b| (self.d_of[a] == self.d_of[b]) == (self.j_of[a] == self.j_of[b])))
    }

    /// J-classes with no J-class strictly below them.
    pub fn minimal_j_classes(&self) -> Vec<usize> {
        (0..self.j_count())
            .filter(|&a| (0..self.j_count()).all(|b| b == a || !self.j_leq[b][a]))
            .collect()
    }

    /// Common through-strand count of a J-class of diagrams.
    pub fn through_strands(&self, m: &FiniteMonoid, j: usize) -> Option<usize> {
        m.through_strands(self.j_classes[j][0])
    }

    pub fn h_class(&self, x: usize) -> Vec<usize> {
        self.r_classes[self.r_of[x]]
            .iter()
            .copied()
            .filter(|y| self.l_of[*y] == self.l_of[x])
            .collect()
    }
}

/// Green's relations via strongly connected components of the right, left
/// and two-sided Cayley graphs.
pub fn green(m: &FiniteMonoid) -> GreenStructure {
    let n = m.size();
    let (r_of, r_classes) = normalize(&scc(n, n, |a, s| m.mul(a, s)));
    let (l_of, l_classes) = normalize(&scc(n, n, |a, s| m.mul(s, a)));
    let (j_of, j_classes) = normalize(&scc(n, 2 * n, |a, s| if s < n { m.mul(a, s) } else { m.mul(s - n, a) }));

    // D = R ∨ L
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for class in r_classes.iter().chain(l_classes.iter()) {
        for w in class.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let roots: Vec<usize> = (0..n).map(|x| find(&mut parent, x)).collect();
    let (d_of, _) = normalize(&roots);

    // ideal of each J-class representative
    let jn = j_classes.len();
    let mut j_leq = vec![vec![false; jn]; jn];
    for (b, class) in j_classes.iter().enumerate() {
        let mut seen = vec![false; n];
        let mut todo = vec![class[0]];
        seen[class[0]] = true;
        while let Some(x) = todo.pop() {
            j_leq[j_of[x]][b] = true;
            for s in 0..n {
                for y in [m.mul(x, s), m.mul(s, x)] {
                    if !seen[y] {
                        seen[y] = true;
                        todo.push(y);
                    }
                }
            }
        }
    }

    let eggboxes = j_classes
        .iter()
        .enumerate()
        .map(|(j, members)| {
            let mut rows: Vec<usize> = Vec::new();
            let mut cols: Vec<usize> = Vec::new();
            for &x in members {
                if !rows.contains(&r_of[x]) {
                    rows.push(r_of[x]);
                }
                if !cols.contains(&l_of[x]) {
                    cols.push(l_of[x]);
                }
            }
            rows.sort_unstable();
            cols.sort_unstable();
            if members.iter().all(|&x| m.diagram(x).is_some()) {
                let key_r = |r: &usize| r_classes[*r].iter().map(|&x| m.diagram(x).unwrap().top_half()).min();
                let key_l =
                    |l: &usize| l_classes[*l].iter().map(|&x| m.diagram(x).unwrap().involute().top_half()).min();
                rows.sort_by_cached_key(key_r);
                cols.sort_by_cached_key(key_l);
            }
            let mut cells = vec![vec![Vec::new(); cols.len()]; rows.len()];
            for &x in members {
                let r = rows.iter().position(|c| *c == r_of[x]).unwrap();
                let c = cols.iter().position(|c| *c == l_of[x]).unwrap();
                cells[r][c].push(x);
            }
            EggBox { j, rows, cols, cells }
        })
        .collect();

    GreenStructure { r_of, l_of, j_of, d_of, r_classes, l_classes, j_classes, eggboxes, j_leq }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{EvaluationMap, Flavor};
    use crate::monoid::build_diagram_monoid;

    #[test]
    fn tl4_j_classes() {
        let m = build_diagram_monoid(Flavor::TemperleyLieb, 4, &EvaluationMap::classical()).unwrap();
        let g = green(&m);
        let mut sizes: Vec<(usize, usize)> =
            (0..g.j_count()).map(|j| (g.through_strands(&m, j).unwrap(), g.j_classes[j].len())).collect();
        sizes.sort();
        assert_eq!(sizes, vec![(0, 4), (2, 9), (4, 1)]);
        assert!(g.is_h_trivial());
        assert!(g.d_equals_j());
    }

    #[test]
    fn symmetric_group_is_one_class() {
        let m = build_diagram_monoid(Flavor::Symmetric, 3, &EvaluationMap::classical()).unwrap();
        let g = green(&m);
        assert_eq!(g.j_count(), 1);
        assert_eq!(g.eggboxes[0].h_size(), 6);
    }

    #[test]
    fn zero_is_minimal() {
        let m = build_diagram_monoid(Flavor::TemperleyLieb, 4, &EvaluationMap::zero()).unwrap();
        let g = green(&m);
        let z = m.zero().unwrap();
        assert_eq!(g.j_classes[g.j_of[z]], vec![z]);
        assert_eq!(g.minimal_j_classes(), vec![g.j_of[z]]);
        assert!((0..g.j_count()).all(|j| g.j_leq[g.j_of[z]][j]));
    }
}
