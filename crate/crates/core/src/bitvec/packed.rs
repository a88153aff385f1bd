/// Fixed-width unsigned integers packed into 64-bit words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PackedInts {
    words: Vec<u64>,
    width: usize,
    len: usize,
}

impl PackedInts {
    pub fn new(width: usize) -> Self {
        assert!((1..=64).contains(&width));
        PackedInts {
            words: Vec::new(),
            width,
            len: 0,
        }
    }

    /// Smallest width able to hold `max`.
    pub fn width_for(max: u64) -> usize {
        (64 - max.leading_zeros() as usize).max(1)
    }

    pub fn from_values(values: &[u64]) -> Self {
        let max = values.iter().copied().max().unwrap_or(0);
        let mut p = PackedInts::new(Self::width_for(max));
        for &v in values {
            p.push(v);
        }
        p
    }

    pub fn push(&mut self, v: u64) {
        debug_assert!(self.width == 64 || v >> self.width == 0);
        let bit = self.len * self.width;
        let (w, off) = (bit / 64, bit % 64);
        while self.words.len() <= (bit + self.width - 1) / 64 {
            self.words.push(0);
        }
        self.words[w] |= v << off;
        if off + self.width > 64 {
            self.words[w + 1] |= v >> (64 - off);
        }
        self.len += 1;
    }

    #[inline]
    pub fn get(&self, i: usize) -> u64 {
        assert!(i < self.len);
        let bit = i * self.width;
        let (w, off) = (bit / 64, bit % 64);
        let mask = if self.width == 64 {
            u64::MAX
        } else {
            (1u64 << self.width) - 1
        };
        let mut v = self.words[w] >> off;
        if off + self.width > 64 {
            v |= self.words[w + 1] << (64 - off);
        }
        v & mask
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn size_bits(&self) -> usize {
        self.len * self.width
    }
}

/// Non-decreasing integers: an absolute sample every `2^shift` entries and
/// packed offsets from it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MonotoneInts {
    shift: u32,
    samples: Vec<u64>,
    offsets: PackedInts,
}

impl MonotoneInts {
    /// `None` if `values` decreases somewhere. Samples every 16 entries.
    pub fn from_values(values: &[u64]) -> Option<Self> {
        Self::sampled(values, 4)
    }

    /// Samples every `2^shift` entries: sparser samples, wider offsets.
    pub fn sampled(values: &[u64], shift: u32) -> Option<Self> {
        if values.windows(2).any(|w| w[1] < w[0]) {
            return None;
        }
        let samples: Vec<u64> = values.iter().step_by(1 << shift).copied().collect();
        let offsets: Vec<u64> = values
            .iter()
            .enumerate()
            .map(|(i, &v)| v - samples[i >> shift])
            .collect();
        Some(MonotoneInts { shift, samples, offsets: PackedInts::from_values(&offsets) })
    }

    #[inline]
    pub fn get(&self, i: usize) -> u64 {
        self.samples[i >> self.shift] + self.offsets.get(i)
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    /// Index of the first entry equal to `x`, if any.
    pub fn position(&self, x: u64) -> Option<usize> {
        let s = self.samples.partition_point(|&v| v < x);
        // entries equal to `x` may start in the previous sample's run
        let first = s.saturating_sub(1) << self.shift;
        let last = ((s + 1) << self.shift).min(self.len());
        (first..last).find(|&i| self.get(i) == x)
    }

    pub fn size_bits(&self) -> usize {
        self.samples.len() * 64 + self.offsets.size_bits()
    }
}
