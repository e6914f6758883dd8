//! I.i.d. erasures with a uniformly random Pauli on every erased qubit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::pauli::{Pauli, PauliOperator};

/// Erased locations and the Pauli error they induced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErasurePattern {
    erased: Vec<usize>,
    mask: BitVec,
    error: PauliOperator,
}

impl ErasurePattern {
    /// Pattern with the given erased set and error. Fails if the error acts
    /// outside the erasure.
    pub fn new(n: usize, erased: impl IntoIterator<Item = usize>, error: PauliOperator) -> Result<Self> {
        let mut erased: Vec<usize> = erased.into_iter().collect();
        erased.sort_unstable();
        erased.dedup();
        if error.n() != n || erased.last().is_some_and(|&q| q >= n) {
            return Err(Error::Config(format!("erasure pattern does not fit {n} qubits")));
        }
        let mask = BitVec::from_indices(n, erased.iter().copied());
        if let Some(q) = error.support().into_iter().find(|&q| !mask.get(q)) {
            return Err(Error::Config(format!("error acts on unerased qubit {q}")));
        }
        Ok(Self { erased, mask, error })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            erased: Vec::new(),
            mask: BitVec::zeros(n),
            error: PauliOperator::identity(n),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.mask.len()
    }

    /// Erased qubits in ascending order.
    #[inline]
    pub fn erased(&self) -> &[usize] {
        &self.erased
    }

    #[inline]
    pub fn mask(&self) -> &BitVec {
        &self.mask
    }

    #[inline]
    pub fn is_erased(&self, q: usize) -> bool {
        self.mask.get(q)
    }

    #[inline]
    pub fn error(&self) -> &PauliOperator {
        &self.error
    }

    pub fn len(&self) -> usize {
        self.erased.len()
    }

    pub fn is_empty(&self) -> bool {
        self.erased.is_empty()
    }
}

/// Deterministic random stream for one trial: the master seed selects the
/// key and the trial index selects the ChaCha stream.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

pub fn check_probability(eps: f64) -> Result<()> {
    if (0.0..=1.0).contains(&eps) {
        Ok(())
    } else {
        Err(Error::InvalidProbability(eps))
    }
}

/// Erases each qubit with probability `eps` and puts one of I, X, Y, Z,
/// uniformly, on each erased qubit.
pub fn sample_erasure(n: usize, eps: f64, rng: &mut RngStream) -> Result<ErasurePattern> {
    check_probability(eps)?;
    let rng = rng.rng();
    let mut pattern = ErasurePattern::empty(n);
    for q in 0..n {
        if rng.random::<f64>() < eps {
            pattern.erased.push(q);
            pattern.mask.set(q, true);
            let p = Pauli::ALL[rng.random_range(0..4)];
            pattern.error.set(q, p);
        }
    }
    Ok(pattern)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extremes() {
        let mut rng = RngStream::new(7, 0);
        let p = sample_erasure(48, 0.0, &mut rng).unwrap();
        assert!(p.is_empty() && p.error().is_identity());
        let p = sample_erasure(48, 1.0, &mut rng).unwrap();
        assert_eq!(p.len(), 48);
        assert!(p.error().support().iter().all(|&q| p.is_erased(q)));
    }

    #[test]
    fn rejects_bad_probability() {
        let mut rng = RngStream::new(7, 0);
        for eps in [-0.1, 1.5, f64::NAN] {
            assert!(matches!(
                sample_erasure(4, eps, &mut rng),
                Err(Error::InvalidProbability(_))
            ));
        }
    }

    #[test]
    fn same_seed_same_pattern() {
        let a = sample_erasure(300, 0.3, &mut RngStream::new(11, 5)).unwrap();
        let b = sample_erasure(300, 0.3, &mut RngStream::new(11, 5)).unwrap();
        let c = sample_erasure(300, 0.3, &mut RngStream::new(11, 6)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn rejects_error_outside_erasure() {
        let e = PauliOperator::single(4, 2, Pauli::X);
        assert!(ErasurePattern::new(4, [1], e.clone()).is_err());
        assert!(ErasurePattern::new(4, [2], e).is_ok());
    }
}
