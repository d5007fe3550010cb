//! Simulated secondary storage: fixed-size byte pages with I/O counting.

pub const PAGE_SIZE: usize = 4096;

/// Flat buffer of decoded records: ids plus `width` values each.
#[derive(Debug, Clone, Default)]
pub struct RecordBuf {
    width: usize,
    pub ids: Vec<u32>,
    pub values: Vec<f64>,
}

impl RecordBuf {
    pub fn new(width: usize) -> Self {
        RecordBuf {
            width,
            ids: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn values(&self, i: usize) -> &[f64] {
        &self.values[i * self.width..(i + 1) * self.width]
    }

    pub fn push(&mut self, id: u32, vals: &[f64]) {
        debug_assert_eq!(vals.len(), self.width);
        self.ids.push(id);
        self.values.extend_from_slice(vals);
    }

    /// Removes record `i` by moving the last one into its place.
    pub fn swap_remove(&mut self, i: usize) {
        let last = self.len() - 1;
        self.ids.swap_remove(i);
        if i != last {
            let w = self.width;
            self.values.copy_within(last * w..(last + 1) * w, i * w);
        }
        self.values.truncate(last * self.width);
    }

    pub fn clear(&mut self) {
        self.ids.clear();
        self.values.clear();
    }
}

/// A sequential file of fixed-width records `(u32 id, width × f64)`.
#[derive(Debug, Clone)]
pub struct RecordFile {
    width: usize,
    per_page: usize,
    pages: Vec<Vec<u8>>,
    tail: Vec<u8>,
    tail_count: usize,
    len: usize,
}

impl RecordFile {
    pub fn record_bytes(width: usize) -> usize {
        4 + 8 * width
    }

    /// Records per page when they are packed into `PAGE_SIZE` bytes.
    pub fn packed_per_page(width: usize) -> usize {
        (PAGE_SIZE / Self::record_bytes(width)).max(1)
    }

    /// `per_page` overrides the packed capacity.
    pub fn new(width: usize, per_page: Option<usize>) -> Self {
        let per_page = per_page.unwrap_or_else(|| Self::packed_per_page(width)).max(1);
        RecordFile {
            width,
            per_page,
            pages: Vec::new(),
            tail: Vec::new(),
            tail_count: 0,
            len: 0,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn per_page(&self) -> usize {
        self.per_page
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn pages(&self) -> usize {
        self.pages.len()
    }

    /// Appends a record; a page write is counted whenever a page fills.
    pub fn append(&mut self, id: u32, vals: &[f64], io: &mut u64) {
        debug_assert_eq!(vals.len(), self.width);
        self.tail.extend_from_slice(&id.to_le_bytes());
        for v in vals {
            self.tail.extend_from_slice(&v.to_le_bytes());
        }
        self.tail_count += 1;
        self.len += 1;
        if self.tail_count == self.per_page {
            self.flush(io);
        }
    }

    /// Writes out a partially filled last page.
    pub fn flush(&mut self, io: &mut u64) {
        if self.tail_count > 0 {
            self.pages.push(std::mem::take(&mut self.tail));
            self.tail_count = 0;
            *io += 1;
        }
    }

    /// Decodes page `p` into `out` (cleared first), counting one read.
    pub fn read_page(&self, p: usize, out: &mut RecordBuf, io: &mut u64) {
        *io += 1;
        out.clear();
        let rb = Self::record_bytes(self.width);
        for rec in self.pages[p].chunks_exact(rb) {
            out.ids.push(u32::from_le_bytes(rec[..4].try_into().unwrap()));
            out.values.extend(
                rec[4..]
                    .chunks_exact(8)
                    .map(|b| f64::from_le_bytes(b.try_into().unwrap())),
            );
        }
    }

    pub fn read_all(&self, io: &mut u64) -> RecordBuf {
        let mut all = RecordBuf::new(self.width);
        let mut page = RecordBuf::new(self.width);
        for p in 0..self.pages() {
            self.read_page(p, &mut page, io);
            all.ids.extend_from_slice(&page.ids);
            all.values.extend_from_slice(&page.values);
        }
        all
    }
}
