use std::collections::HashMap;
use std::hash::Hash;

/// Share of the first `k` truth items found among the first `k` results.
/// Short lists contribute what they have; the divisor stays `k`.
pub fn precision_at_k<T: Eq + Hash>(result: &[T], truth: &[T], k: usize) -> f64 {
    assert!(k >= 1, "k must be positive");
    let top: std::collections::HashSet<&T> = truth.iter().take(k).collect();
    let hits = result.iter().take(k).filter(|x| top.contains(x)).count();
    hits as f64 / k as f64
}

/// Top-k footrule distance with absent items placed at `k + 1`, divided by
/// the largest distance two top-k lists sharing the same number of items
/// can reach. 0 means identical prefixes; `None` for empty input.
pub fn spearman_footrule<T: Eq + Hash>(result: &[T], truth: &[T], k: usize) -> Option<f64> {
    assert!(k >= 1, "k must be positive");
    if result.is_empty() || truth.is_empty() {
        return None;
    }
    let (a, b) = (positions(result, k), positions(truth, k));
    let miss = k + 1;
    let mut dist = 0usize;
    let mut common = 0usize;
    for (x, &pa) in &a {
        match b.get(x) {
            Some(&pb) => {
                common += 1;
                dist += pa.abs_diff(pb);
            }
            None => dist += miss - pa,
        }
    }
    for (x, &pb) in &b {
        if !a.contains_key(x) {
            dist += miss - pb;
        }
    }
    let max = max_footrule(k, common);
    Some(if max == 0 { 0.0 } else { (dist as f64 / max as f64).min(1.0) })
}

fn positions<T: Eq + Hash>(l: &[T], k: usize) -> HashMap<&T, usize> {
    let mut m = HashMap::new();
    for (i, x) in l.iter().take(k).enumerate() {
        m.entry(x).or_insert(i + 1);
    }
    m
}

/// Largest distance between two top-k lists with `c` items in common:
/// k(k+1) minus the least the shared items can save, which is reached by
/// putting them at the front of one list and reversed at the front of the
/// other.
fn max_footrule(k: usize, c: usize) -> usize {
    let saved = if c % 2 == 0 { c * (c + 2) / 2 } else { (c + 1) * (c + 1) / 2 };
    k * (k + 1) - saved
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_cases() {
        let a: Vec<u32> = (0..10).collect();
        let b: Vec<u32> = (10..20).collect();
        assert_eq!(precision_at_k(&a, &a, 10), 1.0);
        assert_eq!(precision_at_k(&a, &b, 10), 0.0);
        let mut c = b.clone();
        c[3] = 0;
        c[8] = 5;
        assert_eq!(precision_at_k(&c, &a, 10), 0.2);
        assert_eq!(precision_at_k(&a[..3], &a, 10), 0.3);
    }

    #[test]
    fn footrule_cases() {
        let a = ["x", "y", "z"];
        assert_eq!(spearman_footrule(&a, &a, 3), Some(0.0));
        assert_eq!(spearman_footrule(&["a", "b"], &["b", "a"], 2), Some(1.0));
        assert_eq!(spearman_footrule(&["a", "b"], &["c", "d"], 2), Some(1.0));
        assert_eq!(spearman_footrule::<&str>(&[], &["a"], 2), None);
        assert_eq!(spearman_footrule(&["a"], &["a"], 1), Some(0.0));
    }

    /// Exhaustive check of the normaliser over small permutations.
    #[test]
    fn normaliser_is_attained_maximum() {
        fn perms(items: &[u8], k: usize) -> Vec<Vec<u8>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for (i, &x) in items.iter().enumerate() {
                let mut rest = items.to_vec();
                rest.remove(i);
                for mut p in perms(&rest, k - 1) {
                    p.insert(0, x);
                    out.push(p);
                }
            }
            out
        }
        for k in 1..=4usize {
            let universe: Vec<u8> = (0..(2 * k) as u8).collect();
            let lists = perms(&universe, k);
            let first = &lists[0];
            let mut best = vec![0.0f64; k + 1];
            for l in &lists {
                let c = l.iter().filter(|x| first.contains(x)).count();
                let v = spearman_footrule(l, first, k).unwrap();
                assert!(v <= 1.0);
                best[c] = best[c].max(v);
            }
            for (c, b) in best.iter().enumerate() {
                if !(k == 1 && c == 1) {
                    assert_eq!(*b, 1.0, "k={k} c={c}");
                }
            }
        }
    }
}
