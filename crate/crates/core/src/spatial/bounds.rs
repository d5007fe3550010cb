use super::{Entry, ObjectIndex};
use crate::hierarchy::IntervalSet;
use crate::model::Problem;

/// Each user's value intervals with their sizes, per attribute; `None` for
/// indifference.
pub struct UserIntervals<'a> {
    users: Vec<Vec<Option<Vec<(&'a IntervalSet, u64)>>>>,
}

impl<'a> UserIntervals<'a> {
    pub fn new(p: &'a Problem) -> Self {
        let users = p
            .users
            .iter()
            .map(|u| {
                u.prefs
                    .iter()
                    .enumerate()
                    .map(|(k, pref)| {
                        pref.as_ref().map(|vals| {
                            vals.iter()
                                .map(|&v| {
                                    let s = p.domain.intervals(k, v);
                                    (s, s.measure())
                                })
                                .collect()
                        })
                    })
                    .collect()
            })
            .collect();
        UserIntervals { users }
    }

    pub fn users(&self) -> usize {
        self.users.len()
    }
}

/// Upper bound on the degree, for user `u` on attribute `k`, of any object
/// below `e`. Exact when `e` is an entry of a leaf node and `k` is indexed.
pub fn max_matching_degree(
    index: &ObjectIndex,
    p: &Problem,
    ui: &UserIntervals<'_>,
    e: &Entry,
    leaf: bool,
    u: usize,
    k: usize,
) -> f64 {
    let Some(uv) = &ui.users[u][k] else {
        return 1.0;
    };
    let Some(slot) = index.slot(k) else {
        return 1.0;
    };
    if leaf {
        let vals = &e.values[slot];
        let user_nodes = p.users[u].prefs[k].as_deref().unwrap_or(&[]);
        return p.matcher.combine(&p.domain, k, vals, user_nodes);
    }
    let range = &e.mbr.0[slot];
    let sim = &p.matcher.similarity;
    uv.iter()
        .map(|(set, size)| sim.upper_bound(*size, set.overlap_with_span(range)))
        .fold(0.0, f64::max)
}

/// Fills `out` (`users * dims` long) with the maximum matching vectors of
/// `e` for every user.
pub fn entry_bounds(
    index: &ObjectIndex,
    p: &Problem,
    ui: &UserIntervals<'_>,
    e: &Entry,
    leaf: bool,
    out: &mut [f64],
) {
    let d = index.dims();
    for u in 0..ui.users() {
        for k in 0..d {
            out[u * d + k] = max_matching_degree(index, p, ui, e, leaf, u, k);
        }
    }
}

/// Sum of the maximum matching vector norms over all users.
pub fn score(bounds: &[f64]) -> f64 {
    bounds.iter().sum()
}
