//! Stallings graph construction by folding, plus path tracing and the
//! membership test.
//!
//! The builder wedges one cycle per generator at a shared base vertex, then
//! folds until every vertex has at most one a-neighbor, one outgoing b-edge
//! and one incoming b-edge, closing every length-two b-path into a triangle
//! along the way. The result is relabeled in breadth-first order from the
//! base vertex, so equal subgroups produce identical labeled graphs no matter
//! how the generators were listed.

use crate::graph::ModularGraph;
use crate::word::{Letter, Word};
use crate::{Error, Result};

const NONE: u32 = u32::MAX;

/// Union-find over wedge vertices, with one a-slot and two b-slots per class.
struct Folder {
    parent: Vec<u32>,
    rank: Vec<u8>,
    a: Vec<u32>,
    b_out: Vec<u32>,
    b_in: Vec<u32>,
    queue: Vec<(u32, u32)>,
}

impl Folder {
    fn new() -> Folder {
        let mut f = Folder {
            parent: Vec::new(),
            rank: Vec::new(),
            a: Vec::new(),
            b_out: Vec::new(),
            b_in: Vec::new(),
            queue: Vec::new(),
        };
        f.fresh_vertex();
        f
    }

    fn fresh_vertex(&mut self) -> u32 {
        let id = self.parent.len() as u32;
        self.parent.push(id);
        self.rank.push(0);
        self.a.push(NONE);
        self.b_out.push(NONE);
        self.b_in.push(NONE);
        id
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    /// Merges two classes and reconciles their slots, queueing any further
    /// merges that slot conflicts force.
    fn union(&mut self, x: u32, y: u32) {
        let rx = self.find(x);
        let ry = self.find(y);
        if rx == ry {
            return;
        }
        let (keep, drop) = if self.rank[rx as usize] >= self.rank[ry as usize] {
            (rx, ry)
        } else {
            (ry, rx)
        };
        if self.rank[keep as usize] == self.rank[drop as usize] {
            self.rank[keep as usize] += 1;
        }
        self.parent[drop as usize] = keep;
        for slot in [0usize, 1, 2] {
            let arr: &mut Vec<u32> = match slot {
                0 => &mut self.a,
                1 => &mut self.b_out,
                _ => &mut self.b_in,
            };
            let kept = arr[keep as usize];
            let dropped = arr[drop as usize];
            if dropped != NONE {
                if kept == NONE {
                    arr[keep as usize] = dropped;
                } else {
                    self.queue.push((kept, dropped));
                }
            }
        }
    }

    fn drain(&mut self) {
        while let Some((x, y)) = self.queue.pop() {
            self.union(x, y);
        }
    }

    fn add_a(&mut self, u: u32, v: u32) {
        let u = self.find(u);
        let v = self.find(v);
        if u == v {
            let au = self.a[u as usize];
            if au == NONE {
                self.a[u as usize] = u;
            } else {
                self.queue.push((au, u));
            }
        } else {
            let au = self.a[u as usize];
            let av = self.a[v as usize];
            if au == NONE && av == NONE {
                self.a[u as usize] = v;
                self.a[v as usize] = u;
            } else {
                if au != NONE {
                    self.queue.push((au, v));
                }
                if av != NONE {
                    self.queue.push((av, u));
                }
            }
        }
        self.drain();
    }

    fn add_b(&mut self, u: u32, v: u32) {
        let u = self.find(u);
        let v = self.find(v);
        let out = self.b_out[u as usize];
        let inc = self.b_in[v as usize];
        if out == NONE && inc == NONE {
            self.b_out[u as usize] = v;
            self.b_in[v as usize] = u;
        } else {
            if out != NONE {
                self.queue.push((out, v));
            }
            if inc != NONE {
                self.queue.push((inc, u));
            }
        }
        self.drain();
    }

    /// Finds one length-two b-path that is not yet part of a triangle and
    /// repairs it: a path returning to its start collapses, any other one
    /// gains the closing edge. Returns false once no repair is needed.
    fn close_one_triangle(&mut self) -> bool {
        for x in 0..self.parent.len() as u32 {
            if self.find(x) != x {
                continue;
            }
            let y = self.b_out[x as usize];
            if y == NONE {
                continue;
            }
            let y = self.find(y);
            if y == x {
                continue;
            }
            let z = self.b_out[y as usize];
            if z == NONE {
                continue;
            }
            let z = self.find(z);
            if z == x || z == y {
                self.union(x, y);
                self.drain();
                return true;
            }
            let closing = self.b_out[z as usize];
            if closing != NONE && self.find(closing) == x {
                continue;
            }
            self.add_b(z, x);
            return true;
        }
        false
    }

    /// Relabels the live classes in breadth-first order from the base vertex
    /// and materializes the graph.
    fn into_graph(mut self) -> ModularGraph {
        self.drain();
        let total = self.parent.len();
        let root = self.find(0);
        let mut label = vec![0u32; total];
        let mut order = Vec::new();
        label[root as usize] = 1;
        order.push(root);
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for raw in [
                self.a[v as usize],
                self.b_out[v as usize],
                self.b_in[v as usize],
            ] {
                if raw == NONE {
                    continue;
                }
                let r = self.find(raw);
                if label[r as usize] == 0 {
                    label[r as usize] = order.len() as u32 + 1;
                    order.push(r);
                }
            }
        }
        let n = order.len() as u32;
        let mut alpha_pairs = Vec::new();
        let mut beta_pairs = Vec::new();
        for &v in &order {
            let lv = label[v as usize];
            let av = self.a[v as usize];
            if av != NONE {
                let la = label[self.find(av) as usize];
                if lv <= la {
                    alpha_pairs.push((lv, la));
                }
            }
            let bv = self.b_out[v as usize];
            if bv != NONE {
                beta_pairs.push((lv, label[self.find(bv) as usize]));
            }
        }
        ModularGraph::from_parts(n, &alpha_pairs, &beta_pairs, Some(1))
            .expect("folding produces a structurally valid graph")
    }
}

/// Builds the Stallings graph of the subgroup generated by the given words.
///
/// Generators are normalized first; those that normalize to the empty word
/// are ignored. An empty list (after normalization) yields the one-vertex
/// graph with no edges.
pub fn stallings_from_generators(gens: &[Word]) -> ModularGraph {
    let mut folder = Folder::new();
    for gen in gens {
        let w = gen.normalize();
        let letters = w.letters();
        if letters.is_empty() {
            continue;
        }
        let mut prev = 0u32;
        for (i, &letter) in letters.iter().enumerate() {
            let next = if i + 1 == letters.len() {
                0
            } else {
                folder.fresh_vertex()
            };
            match letter {
                Letter::A => folder.add_a(prev, next),
                Letter::B => folder.add_b(prev, next),
                Letter::Binv => folder.add_b(next, prev),
            }
            prev = next;
        }
    }
    while folder.close_one_triangle() {}
    let g = folder.into_graph();
    debug_assert!(g.validate(crate::graph::Mode::Reduced).is_ok());
    g
}

/// Follows the letters of `w` from `start`, reading a-edges for a, b-edges
/// forward for b and backward for b⁻¹. Returns the endpoint, or None as soon
/// as a step is undefined.
pub fn trace(g: &ModularGraph, start: u32, w: &Word) -> Option<u32> {
    let mut at = start;
    for &letter in w.letters() {
        at = match letter {
            Letter::A => g.alpha(at)?,
            Letter::B => g.beta(at)?,
            Letter::Binv => g.beta_inv(at)?,
        };
    }
    Some(at)
}

/// Tests whether the element spelled by `w` lies in the subgroup whose
/// Stallings graph is `g`. The graph must be rooted.
pub fn member(g: &ModularGraph, w: &Word) -> Result<bool> {
    let root = g
        .root()
        .ok_or_else(|| Error::BadArgument("membership requires a rooted graph".into()))?;
    Ok(trace(g, root, &w.normalize()) == Some(root))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::{delta_2, CombinatorialType, Mode};
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn degenerate_generator_lists() {
        let trivial = stallings_from_generators(&[]);
        assert_eq!(trivial.n(), 1);
        assert_eq!(trivial.root(), Some(1));
        assert_eq!(trivial.alpha(1), None);
        assert_eq!(trivial.beta(1), None);

        assert_eq!(stallings_from_generators(&[w("aa"), w("bbb")]), trivial);

        let a_only = stallings_from_generators(&[w("a")]);
        assert_eq!(a_only.n(), 1);
        assert_eq!(a_only.alpha(1), Some(1));
        assert_eq!(a_only.beta(1), None);

        let b_only = stallings_from_generators(&[w("b")]);
        assert_eq!(b_only.n(), 1);
        assert_eq!(b_only.beta(1), Some(1));
        let b_inv_only = stallings_from_generators(&[w("B")]);
        assert_eq!(b_only, b_inv_only);
    }

    #[test]
    fn builds_the_three_reference_graphs() {
        let h = stallings_from_generators(&fixtures::gens_h());
        assert_eq!(h.combinatorial_type(), CombinatorialType::new(6, 3, 0, 0, 0));
        assert!(h.is_isomorphic(&fixtures::graph_h(), true));

        let k = stallings_from_generators(&fixtures::gens_k());
        assert_eq!(k.combinatorial_type(), CombinatorialType::new(6, 3, 1, 0, 1));
        assert!(k.is_isomorphic(&fixtures::graph_k(), true));

        let l = stallings_from_generators(&fixtures::gens_l());
        assert_eq!(
            l.combinatorial_type(),
            CombinatorialType::new(13, 6, 0, 1, 1)
        );
        assert!(l.is_isomorphic(&fixtures::graph_l(), true));
    }

    #[test]
    fn results_are_cyclically_reduced_for_these_inputs() {
        for gens in [fixtures::gens_h(), fixtures::gens_k(), fixtures::gens_l()] {
            let g = stallings_from_generators(&gens);
            g.validate(Mode::CyclicallyReduced).unwrap();
        }
    }

    #[test]
    fn generators_and_short_products_are_members() {
        for gens in [fixtures::gens_h(), fixtures::gens_k(), fixtures::gens_l()] {
            let g = stallings_from_generators(&gens);
            let mut pool: Vec<Word> = gens.iter().map(|x| x.normalize()).collect();
            let inverses: Vec<Word> = pool.iter().map(|x| x.inverse()).collect();
            pool.extend(inverses);
            for x in &pool {
                assert!(member(&g, x).unwrap());
            }
            for x in &pool {
                for y in &pool {
                    let product = x.concat(y).normalize();
                    assert!(member(&g, &product).unwrap(), "product {product} rejected");
                }
            }
        }
    }

    #[test]
    fn ab_is_not_in_h() {
        let h = stallings_from_generators(&fixtures::gens_h());
        assert!(!member(&h, &w("ab")).unwrap());

        // Cross-check against every product of at most four generators or
        // inverses: none of them spells ab.
        let gens = fixtures::gens_h();
        let mut pool: Vec<Word> = gens.iter().map(|x| x.normalize()).collect();
        let inverses: Vec<Word> = pool.iter().map(|x| x.inverse()).collect();
        pool.extend(inverses);
        let target = w("ab");
        let mut frontier = vec![Word::empty()];
        for _ in 0..4 {
            let mut next = Vec::new();
            for p in &frontier {
                for g in &pool {
                    let q = p.concat(g).normalize();
                    assert_ne!(q, target);
                    next.push(q);
                }
            }
            frontier = next;
        }
    }

    #[test]
    fn membership_requires_a_root() {
        let g = fixtures::graph_h().with_root(None).unwrap();
        assert!(member(&g, &w("a")).is_err());
    }

    #[test]
    fn trace_follows_edges_literally() {
        let d2 = delta_2();
        assert_eq!(trace(&d2, 1, &w("b")), Some(2));
        assert_eq!(trace(&d2, 1, &w("a")), Some(2));
        assert_eq!(trace(&d2, 1, &w("aB")), Some(1));
        assert_eq!(trace(&d2, 1, &w("ab")), None);
        assert_eq!(trace(&d2, 1, &w("B")), None);

        let h = fixtures::graph_h();
        assert_eq!(trace(&h, 1, &w("ab")), Some(6));
        assert_eq!(trace(&h, 1, &w("abaB")), Some(1));
    }

    /// Reads one generator per non-tree edge off a spanning tree of `g` and
    /// returns the list; rebuilding from it must reproduce `g`.
    fn spanning_tree_generators(g: &ModularGraph) -> Vec<Word> {
        let root = g.root().unwrap();
        let n = g.n() as usize;
        let mut path = vec![None::<Word>; n + 1];
        path[root as usize] = Some(Word::empty());
        let mut tree: Vec<(u32, Letter, u32)> = Vec::new();
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let base = path[v as usize].clone().unwrap();
            let steps = [
                (g.alpha(v), Letter::A),
                (g.beta(v), Letter::B),
                (g.beta_inv(v), Letter::Binv),
            ];
            for (target, letter) in steps {
                if let Some(t) = target {
                    if path[t as usize].is_none() {
                        let mut p = base.clone();
                        p = p.concat(&Word::new(vec![letter]));
                        path[t as usize] = Some(p);
                        tree.push((v, letter, t));
                        queue.push_back(t);
                    }
                }
            }
        }
        let in_tree = |u: u32, letter: Letter, t: u32| {
            tree.iter().any(|&(a, l, b)| {
                (a, l, b) == (u, letter, t)
                    || match (l, letter) {
                        (Letter::A, Letter::A) => (b, a) == (u, t),
                        (Letter::B, Letter::Binv) => (a, b) == (t, u),
                        (Letter::Binv, Letter::B) => (a, b) == (u, t),
                        _ => false,
                    }
            })
        };
        let mut gens = Vec::new();
        let mut emit = |u: u32, letter: Letter, t: u32| {
            let p = path[u as usize].clone().unwrap();
            let q = path[t as usize].clone().unwrap();
            let word = p
                .concat(&Word::new(vec![letter]))
                .concat(&q.inverse())
                .normalize();
            if !word.is_empty() {
                gens.push(word);
            }
        };
        for (u, v) in g.alpha_pairs() {
            if !in_tree(u, Letter::A, v) {
                emit(u, Letter::A, v);
            }
        }
        for (u, v) in g.beta_pairs() {
            if !in_tree(u, Letter::B, v) {
                emit(u, Letter::B, v);
            }
        }
        gens
    }

    #[test]
    fn spanning_tree_generators_rebuild_the_graph() {
        for gens in [fixtures::gens_h(), fixtures::gens_k(), fixtures::gens_l()] {
            let g = stallings_from_generators(&gens);
            let extracted = spanning_tree_generators(&g);
            let rebuilt = stallings_from_generators(&extracted);
            assert_eq!(rebuilt, g);
        }
    }

    proptest! {
        #[test]
        fn generator_order_does_not_matter(perm in Just(vec![0usize, 1, 2, 3]).prop_shuffle()) {
            let gens = fixtures::gens_l();
            let shuffled: Vec<_> = perm.into_iter().map(|i| gens[i].clone()).collect();
            prop_assert_eq!(
                stallings_from_generators(&gens),
                stallings_from_generators(&shuffled)
            );
        }

        #[test]
        fn random_products_of_generators_are_members(picks in proptest::collection::vec(0usize..4, 1..8)) {
            let gens = fixtures::gens_h();
            let pool = [
                gens[0].normalize(),
                gens[1].normalize(),
                gens[0].inverse().normalize(),
                gens[1].inverse().normalize(),
            ];
            let g = stallings_from_generators(&gens);
            let mut word = Word::empty();
            for i in picks {
                word = word.concat(&pool[i]).normalize();
            }
            prop_assert!(member(&g, &word).unwrap());
        }
    }
}
