use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::bfacf::BfacfChain;
use super::{LatticeError, LatticePolygon};

/// Parameters of the composite Markov chain: several BFACF chains at
/// increasing fugacity with replica swaps between neighbours.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainParams {
    pub fugacities: Vec<f64>,
    pub swap_interval: u64,
    pub sample_interval: u64,
    pub burn_in: u64,
    pub max_length: usize,
    pub rng_seed: u64,
}

/// Critical fugacity of the cubic lattice (reciprocal growth constant).
pub const CRITICAL_FUGACITY: f64 = 0.213_49;

impl Default for ChainParams {
    fn default() -> Self {
        Self {
            fugacities: geometric_fugacities(0.18, 0.21, 5),
            swap_interval: 1_000,
            sample_interval: 10_000,
            burn_in: 1_000_000,
            max_length: 1_000,
            rng_seed: 0,
        }
    }
}

/// `n` fugacities spaced geometrically from `lo` to `hi` inclusive.
pub fn geometric_fugacities(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let r = (hi / lo).powf(1.0 / (n - 1) as f64);
    (0..n).map(|k| lo * r.powi(k as i32)).collect()
}

impl ChainParams {
    pub fn n_chains(&self) -> usize {
        self.fugacities.len()
    }

    pub fn validate(&self, seed: &LatticePolygon) -> Result<(), LatticeError> {
        let bad = |m: &str| Err(LatticeError::InvalidParams(m.to_string()));
        if self.fugacities.is_empty() {
            return bad("at least one chain is required");
        }
        if self.fugacities.iter().any(|&b| !(b > 0.0) || !b.is_finite()) {
            return bad("fugacities must be positive");
        }
        if self.fugacities.windows(2).any(|w| w[0] >= w[1]) {
            return bad("fugacities must be strictly increasing");
        }
        if self.swap_interval == 0 || self.sample_interval == 0 {
            return bad("intervals must be positive");
        }
        if self.max_length < seed.length() {
            return Err(LatticeError::LengthCapExceeded { length: seed.length(), cap: self.max_length });
        }
        Ok(())
    }
}

/// Run diagnostics of a [`CmcSampler`].
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CmcStats {
    pub moves_per_chain: u64,
    pub swap_attempts: Vec<u64>,
    pub swap_accepts: Vec<u64>,
    pub cap_rejections: u64,
    pub samples: u64,
    /// Sum of chain lengths over sample times, per chain.
    pub length_sums: Vec<u64>,
}

impl CmcStats {
    pub fn mean_lengths(&self) -> Vec<f64> {
        self.length_sums.iter().map(|&s| s as f64 / self.samples.max(1) as f64).collect()
    }
}

/// Stream of conformations from the lowest-fugacity chain.
pub struct CmcSampler {
    params: ChainParams,
    chains: Vec<BfacfChain>,
    rngs: Vec<ChaCha8Rng>,
    swap_rng: ChaCha8Rng,
    t: u64,
    burned_in: bool,
    sweep_parity: usize,
    stats: CmcStats,
    cap_warned: bool,
}

impl CmcSampler {
    pub fn new(seed: &LatticePolygon, params: ChainParams) -> Result<Self, LatticeError> {
        params.validate(seed)?;
        let k = params.n_chains();
        let chains = params
            .fugacities
            .iter()
            .map(|&b| BfacfChain::new(seed, b, params.max_length))
            .collect();
        let rngs = (0..k)
            .map(|i| {
                let mut r = ChaCha8Rng::seed_from_u64(params.rng_seed);
                r.set_stream(i as u64 + 1);
                r
            })
            .collect();
        let mut swap_rng = ChaCha8Rng::seed_from_u64(params.rng_seed);
        swap_rng.set_stream(0);
        let stats = CmcStats {
            swap_attempts: vec![0; k.saturating_sub(1)],
            swap_accepts: vec![0; k.saturating_sub(1)],
            length_sums: vec![0; k],
            ..CmcStats::default()
        };
        Ok(Self {
            params,
            chains,
            rngs,
            swap_rng,
            t: 0,
            burned_in: false,
            sweep_parity: 0,
            stats,
            cap_warned: false,
        })
    }

    pub fn params(&self) -> &ChainParams {
        &self.params
    }

    pub fn stats(&self) -> &CmcStats {
        &self.stats
    }

    /// Current conformation of chain `k`.
    pub fn chain_polygon(&self, k: usize) -> LatticePolygon {
        self.chains[k].polygon()
    }

    /// Advances every chain by `moves` attempted moves, with swap attempts
    /// at each multiple of the swap interval.
    fn advance(&mut self, mut moves: u64) {
        while moves > 0 {
            let to_swap = self.params.swap_interval - self.t % self.params.swap_interval;
            let block = moves.min(to_swap);
            for (chain, rng) in self.chains.iter_mut().zip(self.rngs.iter_mut()) {
                for _ in 0..block {
                    chain.step(rng);
                }
            }
            self.t += block;
            moves -= block;
            if self.t % self.params.swap_interval == 0 {
                self.attempt_swaps();
            }
        }
        self.stats.moves_per_chain = self.t;
        let cap: u64 = self.chains.iter().map(|c| c.cap_rejections()).sum();
        if cap > 0 && !self.cap_warned {
            log::warn!("length cap {} reached; growth moves rolled back", self.params.max_length);
            self.cap_warned = true;
        }
        self.stats.cap_rejections = cap;
    }

    /// Metropolis swaps between adjacent chains, alternating even and odd
    /// pairs. For weights `n b^n` the acceptance ratio is `(b_i/b_j)^(n_j - n_i)`.
    fn attempt_swaps(&mut self) {
        let k = self.chains.len();
        let mut i = self.sweep_parity;
        while i + 1 < k {
            let (bi, bj) = (self.chains[i].fugacity(), self.chains[i + 1].fugacity());
            let (ni, nj) = (self.chains[i].length() as f64, self.chains[i + 1].length() as f64);
            let log_ratio = (nj - ni) * (bi / bj).ln();
            self.stats.swap_attempts[i] += 1;
            if log_ratio >= 0.0 || self.swap_rng.gen::<f64>() < log_ratio.exp() {
                self.chains.swap(i, i + 1);
                self.chains[i].set_fugacity(bi);
                self.chains[i + 1].set_fugacity(bj);
                self.stats.swap_accepts[i] += 1;
            }
            i += 2;
        }
        self.sweep_parity ^= 1;
    }

    pub fn next_sample(&mut self) -> LatticePolygon {
        if !self.burned_in {
            self.advance(self.params.burn_in);
            self.burned_in = true;
        }
        self.advance(self.params.sample_interval);
        self.stats.samples += 1;
        for (s, c) in self.stats.length_sums.iter_mut().zip(&self.chains) {
            *s += c.length() as u64;
        }
        self.chains[0].polygon()
    }
}

impl Iterator for CmcSampler {
    type Item = LatticePolygon;

    fn next(&mut self) -> Option<LatticePolygon> {
        Some(self.next_sample())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_params(seed: u64) -> ChainParams {
        ChainParams {
            fugacities: vec![0.19, 0.2, 0.21],
            swap_interval: 100,
            sample_interval: 500,
            burn_in: 2_000,
            max_length: 400,
            rng_seed: seed,
        }
    }

    #[test]
    fn streams_are_reproducible() {
        let sq = LatticePolygon::unit_square();
        let a: Vec<_> = CmcSampler::new(&sq, small_params(5)).unwrap().take(20).collect();
        let b: Vec<_> = CmcSampler::new(&sq, small_params(5)).unwrap().take(20).collect();
        assert_eq!(a, b);
        let c: Vec<_> = CmcSampler::new(&sq, small_params(6)).unwrap().take(20).collect();
        assert_ne!(a, c);
    }

    #[test]
    fn parameter_validation() {
        let sq = LatticePolygon::unit_square();
        let mut p = small_params(0);
        p.fugacities = vec![0.2, 0.2];
        assert!(CmcSampler::new(&sq, p).is_err());
        let mut p = small_params(0);
        p.fugacities.clear();
        assert!(CmcSampler::new(&sq, p).is_err());
        let mut p = small_params(0);
        p.max_length = 2;
        assert!(matches!(CmcSampler::new(&sq, p), Err(LatticeError::LengthCapExceeded { .. })));
    }

    #[test]
    fn swaps_happen() {
        let mut s = CmcSampler::new(&LatticePolygon::unit_square(), small_params(9)).unwrap();
        for _ in 0..50 {
            s.next_sample();
        }
        assert!(s.stats().swap_accepts.iter().all(|&a| a > 0));
    }

    #[test]
    fn geometric_spacing() {
        let f = geometric_fugacities(0.1, 0.4, 3);
        assert!((f[1] - 0.2).abs() < 1e-12);
        assert!((f[2] - 0.4).abs() < 1e-12);
    }
}
