//! Deterministic operation counters.
//!
//! Wall-clock timings vary run to run; these counters do not. Every operation
//! that matters for cost accounting takes a `&mut OpCounters` and records what
//! it actually performed, so benchmark claims about work done can be asserted
//! exactly rather than inferred from timing.
//!
//! Units: `gaussian_samples` counts individual coefficient draws (a full
//! ring-element sample adds N), while `ternary_samples` and `uniform_samples`
//! count whole sampled ring elements.

use std::ops::{Add, AddAssign};

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct OpCounters {
    /// Public-key encryptions performed.
    pub encryptions: u64,
    /// Ring multiplications (any operands).
    pub ring_muls: u64,
    /// Ring multiplications with a public-key component as one operand.
    pub pk_ring_muls: u64,
    /// Forward or inverse number-theoretic transforms.
    pub ntts: u64,
    /// Individual Gaussian coefficient draws.
    pub gaussian_samples: u64,
    /// Ternary ring-element samples.
    pub ternary_samples: u64,
    /// Uniform ring-element samples.
    pub uniform_samples: u64,
    /// Ciphertext + ciphertext additions.
    pub ct_additions: u64,
    /// Ciphertext + raw-polynomial additions.
    pub pt_additions: u64,
    /// Slot-vector encodings (either path).
    pub encodes: u64,
    /// Cache precomputations.
    pub precomputes: u64,
    /// Cache-based reconstructions.
    pub reconstructions: u64,
    /// Ciphertext randomizations.
    pub randomizations: u64,
}

impl OpCounters {
    pub fn new() -> Self {
        Self::default()
    }

    /// Difference since an earlier snapshot. Panics in debug builds if any
    /// counter went backwards (counters are monotone).
    pub fn since(&self, earlier: &OpCounters) -> OpCounters {
        OpCounters {
            encryptions: self.encryptions - earlier.encryptions,
            ring_muls: self.ring_muls - earlier.ring_muls,
            pk_ring_muls: self.pk_ring_muls - earlier.pk_ring_muls,
            ntts: self.ntts - earlier.ntts,
            gaussian_samples: self.gaussian_samples - earlier.gaussian_samples,
            ternary_samples: self.ternary_samples - earlier.ternary_samples,
            uniform_samples: self.uniform_samples - earlier.uniform_samples,
            ct_additions: self.ct_additions - earlier.ct_additions,
            pt_additions: self.pt_additions - earlier.pt_additions,
            encodes: self.encodes - earlier.encodes,
            precomputes: self.precomputes - earlier.precomputes,
            reconstructions: self.reconstructions - earlier.reconstructions,
            randomizations: self.randomizations - earlier.randomizations,
        }
    }
}

impl AddAssign for OpCounters {
    fn add_assign(&mut self, rhs: Self) {
        self.encryptions += rhs.encryptions;
        self.ring_muls += rhs.ring_muls;
        self.pk_ring_muls += rhs.pk_ring_muls;
        self.ntts += rhs.ntts;
        self.gaussian_samples += rhs.gaussian_samples;
        self.ternary_samples += rhs.ternary_samples;
        self.uniform_samples += rhs.uniform_samples;
        self.ct_additions += rhs.ct_additions;
        self.pt_additions += rhs.pt_additions;
        self.encodes += rhs.encodes;
        self.precomputes += rhs.precomputes;
        self.reconstructions += rhs.reconstructions;
        self.randomizations += rhs.randomizations;
    }
}

impl Add for OpCounters {
    type Output = OpCounters;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}
