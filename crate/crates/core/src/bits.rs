//! Word-packed bit rows and the handful of kernels the counters are built on.

pub type Word = u64;
pub const WORD_BITS: usize = Word::BITS as usize;

#[inline]
pub fn words_for(n: usize) -> usize {
    n.div_ceil(WORD_BITS)
}

#[inline]
pub fn get(row: &[Word], i: usize) -> bool {
    row[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
}

#[inline]
pub fn set(row: &mut [Word], i: usize) {
    row[i / WORD_BITS] |= 1 << (i % WORD_BITS);
}

#[inline]
pub fn clear(row: &mut [Word], i: usize) {
    row[i / WORD_BITS] &= !(1 << (i % WORD_BITS));
}

#[inline]
pub fn count(row: &[Word]) -> usize {
    row.iter().map(|w| w.count_ones() as usize).sum()
}

/// `|a ∩ b|` without materializing the intersection.
#[inline]
pub fn and_count(a: &[Word], b: &[Word]) -> usize {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x & y).count_ones() as usize)
        .sum()
}

/// `|a ∩ b ∩ c|`.
#[inline]
pub fn and3_count(a: &[Word], b: &[Word], c: &[Word]) -> usize {
    a.iter()
        .zip(b)
        .zip(c)
        .map(|((x, y), z)| (x & y & z).count_ones() as usize)
        .sum()
}

/// Row with the first `n` bits set.
pub fn full(n: usize) -> Vec<Word> {
    let mut row = vec![!0; words_for(n)];
    let rem = n % WORD_BITS;
    if rem != 0 {
        if let Some(last) = row.last_mut() {
            *last = (1 << rem) - 1;
        }
    }
    row
}

/// Indices of the set bits, ascending.
pub fn ones(row: &[Word]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD_BITS + tz)
            }
        })
    })
}

/// Lowest set bit strictly greater than `after` in `a ∩ b ∩ c`.
pub fn first_common_after(a: &[Word], b: &[Word], c: &[Word], after: usize) -> Option<usize> {
    let start = after + 1;
    let first_word = start / WORD_BITS;
    for wi in first_word..a.len() {
        let mut w = a[wi] & b[wi] & c[wi];
        if wi == first_word {
            let shift = start % WORD_BITS;
            w &= !0 << shift;
        }
        if w != 0 {
            return Some(wi * WORD_BITS + w.trailing_zeros() as usize);
        }
    }
    None
}
