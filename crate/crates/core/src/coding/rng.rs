/// SplitMix64. Small, fully specified and easy to port, so samples can be
/// reproduced outside this crate.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Indices of `n` items drawn without replacement from `0..len` by a
    /// partial Fisher–Yates shuffle, in selection order. When `len <= n`
    /// every index is returned in ascending order and no draws are made.
    pub fn sample_indices(&mut self, len: usize, n: usize) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..len).collect();
        if len <= n {
            return idx;
        }
        for i in 0..n {
            let remaining = (len - i) as u64;
            let j = i + (self.next_u64() % remaining) as usize;
            idx.swap(i, j);
        }
        idx.truncate(n);
        idx
    }
}
