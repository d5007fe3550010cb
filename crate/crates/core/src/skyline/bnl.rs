use super::Ctx;
use crate::pager::{RecordBuf, RecordFile};

/// Block-nested-loops with a bounded window. Records that do not fit go to
/// a temporary file processed in the next pass; each window entry remembers
/// how many records had been spilled when it entered, which tells when it
/// has been compared against everything.
pub(super) fn run(input: RecordFile, cap: usize, ctx: &mut Ctx<'_>) -> Vec<usize> {
    let width = input.width();
    let per_page = input.per_page();
    let mut input = input;
    let mut out = Vec::new();
    let mut window = RecordBuf::new(width);
    let mut stamp: Vec<usize> = Vec::new();
    let mut carried: Vec<bool> = Vec::new();
    let mut page = RecordBuf::new(width);

    loop {
        let mut temp = RecordFile::new(width, Some(per_page));
        let mut pos = 0usize;
        let mut pending = carried.iter().filter(|&&c| c).count();
        for p in 0..input.pages() {
            input.read_page(p, &mut page, &mut ctx.io);
            for r in 0..page.len() {
                if pending > 0 {
                    let mut i = 0;
                    while i < window.len() {
                        if carried[i] && stamp[i] <= pos {
                            out.push(window.ids[i] as usize);
                            window.swap_remove(i);
                            stamp.swap_remove(i);
                            carried.swap_remove(i);
                            pending -= 1;
                        } else {
                            i += 1;
                        }
                    }
                }
                pos += 1;

                let rv = page.values(r);
                let mut dominated = false;
                let mut i = 0;
                while i < window.len() {
                    let wv = window.values(i);
                    if ctx.dominates(wv, rv) {
                        dominated = true;
                        break;
                    }
                    if ctx.dominates(rv, wv) {
                        if carried[i] {
                            pending -= 1;
                        }
                        window.swap_remove(i);
                        stamp.swap_remove(i);
                        carried.swap_remove(i);
                    } else {
                        i += 1;
                    }
                }
                if dominated {
                    continue;
                }
                if window.len() < cap {
                    window.push(page.ids[r], rv);
                    stamp.push(temp.len());
                    carried.push(false);
                } else {
                    temp.append(page.ids[r], rv, &mut ctx.io);
                }
            }
        }
        temp.flush(&mut ctx.io);

        // carried entries have now met every record; new entries inserted
        // before the first spill have too
        let mut i = 0;
        while i < window.len() {
            if carried[i] || stamp[i] == 0 || temp.is_empty() {
                out.push(window.ids[i] as usize);
                window.swap_remove(i);
                stamp.swap_remove(i);
                carried.swap_remove(i);
            } else {
                carried[i] = true;
                i += 1;
            }
        }
        if temp.is_empty() {
            debug_assert!(window.is_empty());
            return out;
        }
        input = temp;
    }
}
