use super::Ctx;
use crate::pager::{RecordBuf, RecordFile};

/// Key that never decreases along collective preference.
pub(super) fn key(v: &[f64]) -> f64 {
    v.iter().sum()
}

/// Sort-first skyline: presort by descending key (the sort reads the file
/// once and writes the sorted copy once), then filter in one pass.
pub(super) fn run(input: RecordFile, ctx: &mut Ctx<'_>) -> Vec<usize> {
    let width = input.width();
    let all = input.read_all(&mut ctx.io);
    let keys: Vec<f64> = (0..all.len()).map(|i| key(all.values(i))).collect();
    let mut order: Vec<usize> = (0..all.len()).collect();
    order.sort_by(|&a, &b| keys[b].total_cmp(&keys[a]).then(all.ids[a].cmp(&all.ids[b])));

    let mut sorted = RecordFile::new(width, Some(input.per_page()));
    for &i in &order {
        sorted.append(all.ids[i], all.values(i), &mut ctx.io);
    }
    sorted.flush(&mut ctx.io);
    drop(all);

    let mut sky = RecordBuf::new(width);
    let mut page = RecordBuf::new(width);
    for p in 0..sorted.pages() {
        sorted.read_page(p, &mut page, &mut ctx.io);
        for r in 0..page.len() {
            let rv = page.values(r);
            if (0..sky.len()).any(|i| ctx.dominates(sky.values(i), rv)) {
                continue;
            }
            // equal keys can hide a dominance lost to rounding
            let mut i = 0;
            while i < sky.len() {
                if key(sky.values(i)) <= key(rv) && ctx.dominates(rv, sky.values(i)) {
                    sky.swap_remove(i);
                } else {
                    i += 1;
                }
            }
            sky.push(page.ids[r], rv);
        }
    }
    sky.ids.iter().map(|&i| i as usize).collect()
}
