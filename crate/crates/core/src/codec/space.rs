use super::Encoding;

/// Space of an encoding, in bits.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceReport {
    pub n: usize,
    pub reduced_n: usize,
    pub general: bool,
    /// stored arrays: U, D, E, colors, lengths and (if general) C
    pub components: Vec<(&'static str, usize)>,
    pub core_bits: usize,
    /// block directories and their rank/select support
    pub aux_bits: usize,
    /// `log2 binom(n, k)` for `k` repeated positions; the entropy bound
    /// for `C`
    pub c_entropy_bits: f64,
}

impl SpaceReport {
    pub fn of(enc: &Encoding) -> Self {
        let core = enc.core();
        let mut components = vec![
            ("U", core.u().raw_bits()),
            ("D", core.d().size_bits()),
            ("E", core.e().raw_bits()),
            ("colors", core.colors().raw_bits()),
            ("lengths", core.length_bits()),
        ];
        let mut aux_bits = core.aux_bits();
        let mut c_entropy_bits = 0.0;
        if let Some(r) = enc.repeats() {
            components.push(("C", r.c().raw_bits()));
            aux_bits += r.aux_bits();
            c_entropy_bits = log2_binom(r.n(), r.c().count_ones());
        }
        SpaceReport {
            n: enc.n(),
            reduced_n: core.n(),
            general: enc.is_general(),
            core_bits: components.iter().map(|c| c.1).sum(),
            components,
            aux_bits,
            c_entropy_bits,
        }
    }

    pub fn core_per_element(&self) -> f64 {
        self.core_bits as f64 / self.n as f64
    }

    pub fn aux_per_element(&self) -> f64 {
        self.aux_bits as f64 / self.n as f64
    }
}

pub fn log2_binom(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (1..=k).map(|i| ((n - k + i) as f64 / i as f64).log2()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert!((log2_binom(4, 2) - 6f64.log2()).abs() < 1e-12);
        assert_eq!(log2_binom(5, 0), 0.0);
    }
}
