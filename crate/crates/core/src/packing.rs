//! Sort-tile-recursive grouping of items by their centre coordinates.

/// Splits `items` into groups of at most `cap`, tiling dimension after
/// dimension. `centre(item, dim)` gives the sort key; ties fall back to the
/// item value, so the result depends only on the input.
pub fn str_groups<F>(mut items: Vec<usize>, dims: usize, cap: usize, centre: F) -> Vec<Vec<usize>>
where
    F: Fn(usize, usize) -> f64,
{
    assert!(cap >= 1);
    let mut out = Vec::with_capacity(items.len().div_ceil(cap));
    tile(&mut items, 0, dims.max(1), cap, &centre, &mut out);
    out
}

fn tile<F>(items: &mut [usize], dim: usize, dims: usize, cap: usize, centre: &F, out: &mut Vec<Vec<usize>>)
where
    F: Fn(usize, usize) -> f64,
{
    let n = items.len();
    if n == 0 {
        return;
    }
    if n <= cap {
        out.push(items.to_vec());
        return;
    }
    let d = dim.min(dims - 1);
    items.sort_by(|&a, &b| centre(a, d).total_cmp(&centre(b, d)).then(a.cmp(&b)));
    if dim + 1 >= dims {
        out.extend(items.chunks(cap).map(<[usize]>::to_vec));
        return;
    }
    let pages = n.div_ceil(cap);
    let slabs = (pages as f64).powf(1.0 / (dims - dim) as f64).ceil() as usize;
    let slab = cap * pages.div_ceil(slabs.max(1));
    for chunk in items.chunks_mut(slab) {
        tile(chunk, dim + 1, dims, cap, centre, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn groups_cover_everything_once() {
        let pts: Vec<(f64, f64)> = (0..103).map(|i| ((i * 37 % 101) as f64, (i * 13 % 7) as f64)).collect();
        let g = str_groups((0..103).collect(), 2, 8, |i, d| if d == 0 { pts[i].0 } else { pts[i].1 });
        assert!(g.iter().all(|x| !x.is_empty() && x.len() <= 8));
        let mut all: Vec<usize> = g.concat();
        all.sort();
        assert_eq!(all, (0..103).collect::<Vec<_>>());
    }

    #[test]
    fn first_axis_slabs() {
        let xs = [2.5, 5.0, 0.5, 1.5];
        let g = str_groups(vec![0, 1, 2, 3], 5, 2, |i, d| if d == 0 { xs[i] } else { 0.0 });
        assert_eq!(g, vec![vec![2, 3], vec![0, 1]]);
    }
}
