//! Reference implementations that share no code with `hierperc`, used as
//! oracles by the acceptance gate.

use std::collections::BTreeSet;

/// Root of `1 - exp(-lambda t) - t` on `(0, 1]` by plain bisection.
pub fn bisection_beta(lambda: f64) -> f64 {
    let f = |t: f64| 1.0 - (-lambda * t).exp() - t;
    let (mut lo, mut hi) = (1e-12, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Connected components of `0..n` by depth-first search, sorted.
pub fn dfs_components(n: usize, edges: &[(usize, usize)]) -> Vec<BTreeSet<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = BTreeSet::from([s]);
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    comp.insert(y);
                    stack.push(y);
                }
            }
        }
        out.push(comp);
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisection_hits_the_closed_form() {
        assert!((bisection_beta(2.0 * 2f64.ln()) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn dfs_on_a_path_and_an_isolated_vertex() {
        let comps = dfs_components(4, &[(0, 1), (1, 2)]);
        assert_eq!(comps, vec![BTreeSet::from([0, 1, 2]), BTreeSet::from([3])]);
    }
}
