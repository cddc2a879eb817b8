//! Graph helpers shared by the automaton analyses.

use std::collections::VecDeque;

/// Adjacency lists with minterm labels.
pub(crate) type Graph = Vec<Vec<(u32, usize)>>;

/// Strongly connected components (iterative Tarjan). Returns the component
/// id of every node.
pub(crate) fn scc(g: &Graph) -> Vec<usize> {
    let n = g.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![usize::MAX; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;
    let mut call: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&(v, i)) = call.last() {
            if i < g[v].len() {
                let w = g[v][i].1;
                call.last_mut().expect("non-empty").1 += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}

/// Shortest label sequence from any of `starts` to a node satisfying
/// `is_target`; among shortest, the lexicographically smallest. Returns the
/// labels and the reached target.
pub(crate) fn lex_shortest(
    g: &Graph,
    starts: &[usize],
    is_target: &dyn Fn(usize) -> bool,
) -> Option<(Vec<u32>, usize)> {
    let n = g.len();
    let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (v, es) in g.iter().enumerate() {
        for &(_, w) in es {
            rev[w].push(v);
        }
    }
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for (v, d) in dist.iter_mut().enumerate() {
        if is_target(v) {
            *d = 0;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &u in &rev[v] {
            if dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    let best = starts.iter().map(|&s| dist[s]).min()?;
    if best == usize::MAX {
        return None;
    }
    let mut cur: Vec<usize> = starts
        .iter()
        .copied()
        .filter(|&s| dist[s] == best)
        .collect();
    let mut labels = Vec::with_capacity(best);
    for d in (0..best).rev() {
        let label = cur
            .iter()
            .flat_map(|&v| g[v].iter())
            .filter(|&&(_, w)| dist[w] == d)
            .map(|&(l, _)| l)
            .min()?;
        let mut next: Vec<usize> = cur
            .iter()
            .flat_map(|&v| g[v].iter())
            .filter(|&&(l, w)| l == label && dist[w] == d)
            .map(|&(_, w)| w)
            .collect();
        next.sort_unstable();
        next.dedup();
        labels.push(label);
        cur = next;
    }
    let end = cur.into_iter().filter(|&v| is_target(v)).min()?;
    Some((labels, end))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn components() {
        // 0 -> 1 -> 2 -> 1, 2 -> 3
        let g: Graph = vec![vec![(0, 1)], vec![(0, 2)], vec![(0, 1), (0, 3)], vec![]];
        let c = scc(&g);
        assert_eq!(c[1], c[2]);
        assert_ne!(c[0], c[1]);
        assert_ne!(c[3], c[1]);
    }

    #[test]
    fn lexicographic_tie_break() {
        // two length-2 paths 0->3: labels [1,0] and [0,5]
        let g: Graph = vec![vec![(1, 1), (0, 2)], vec![(0, 3)], vec![(5, 3)], vec![]];
        let (labels, end) = lex_shortest(&g, &[0], &|v| v == 3).unwrap();
        assert_eq!(labels, vec![0, 5]);
        assert_eq!(end, 3);
    }
}
