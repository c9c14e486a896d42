use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::metric::PointId;

/// Draws `n_prime` distinct points uniformly without replacement.
pub fn sample_landmarks(n: usize, n_prime: usize, seed: u64) -> Result<Vec<PointId>> {
    if n_prime == 0 || n_prime > n {
        return Err(Error::param(format!(
            "cannot sample {n_prime} landmarks from {n} points"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(index::sample(&mut rng, n, n_prime).into_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_sample_is_every_point() {
        let mut l = sample_landmarks(7, 7, 11).unwrap();
        l.sort_unstable();
        assert_eq!(l, (0..7).collect::<Vec<_>>());
    }

    #[test]
    fn deterministic_and_distinct() {
        let a = sample_landmarks(1000, 40, 5).unwrap();
        assert_eq!(a, sample_landmarks(1000, 40, 5).unwrap());
        let mut s = a.clone();
        s.sort_unstable();
        s.dedup();
        assert_eq!(s.len(), 40);
        assert!(sample_landmarks(3, 4, 0).is_err());
        assert!(sample_landmarks(3, 0, 0).is_err());
    }

    #[test]
    fn single_draw_is_uniform() {
        let mut counts = [0usize; 10];
        let draws = 100_000;
        for seed in 0..draws {
            counts[sample_landmarks(10, 1, seed).unwrap()[0]] += 1;
        }
        for c in counts {
            let f = c as f64 / draws as f64;
            assert!((0.09..=0.11).contains(&f), "frequency {f}");
        }
    }
}
