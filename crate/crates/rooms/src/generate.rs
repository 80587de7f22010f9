//! Seeded random instance generation for tests and benchmarks. The RNG is
//! a ChaCha stream keyed only by the seed, so equal parameters always
//! reproduce the same instance on every platform.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{ComparisonMode, Instance, PlayerId, PreferenceProfile, RoomSpec};

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error("capacities sum to {got}, expected n = {n}")]
    CapacityMismatch { got: usize, n: usize },
    #[error("every room needs capacity at least 2")]
    TinyRoom,
    #[error("acceptability density {0} outside (0, 1]")]
    BadAcceptability(f64),
    #[error("tie density {0} outside [0, 1)")]
    BadTieDensity(f64),
    #[error("strict preferences cannot carry tie density {0}")]
    StrictWithTies(f64),
    #[error("complete preferences require acceptability density 1, got {0}")]
    CompleteWithHoles(f64),
}

#[derive(Clone, Debug)]
pub struct GeneratorParams {
    pub n: usize,
    pub capacities: Vec<usize>,
    pub mode: ComparisonMode,
    pub strict: bool,
    pub complete: bool,
    /// Probability that an ordered pair (i, j) is acceptable; 1 keeps all.
    pub acceptability: f64,
    /// Probability that a ranked player ties with its predecessor.
    pub tie_density: f64,
    pub seed: u64,
}

impl GeneratorParams {
    /// Strict complete lists over `capacities`, everything else defaulted.
    pub fn strict_complete(n: usize, capacities: Vec<usize>, mode: ComparisonMode, seed: u64) -> Self {
        GeneratorParams {
            n,
            capacities,
            mode,
            strict: true,
            complete: true,
            acceptability: 1.0,
            tie_density: 0.0,
            seed,
        }
    }

    fn check(&self) -> Result<(), GenerateError> {
        let got: usize = self.capacities.iter().sum();
        if got != self.n {
            return Err(GenerateError::CapacityMismatch { got, n: self.n });
        }
        if self.capacities.iter().any(|&c| c < 2) {
            return Err(GenerateError::TinyRoom);
        }
        if !(self.acceptability > 0.0 && self.acceptability <= 1.0) {
            return Err(GenerateError::BadAcceptability(self.acceptability));
        }
        if !(0.0..1.0).contains(&self.tie_density) {
            return Err(GenerateError::BadTieDensity(self.tie_density));
        }
        if self.strict && self.tie_density > 0.0 {
            return Err(GenerateError::StrictWithTies(self.tie_density));
        }
        if self.complete && self.acceptability < 1.0 {
            return Err(GenerateError::CompleteWithHoles(self.acceptability));
        }
        Ok(())
    }
}

pub fn gen_random_instance(p: &GeneratorParams) -> Result<Instance, GenerateError> {
    p.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut groups: Vec<Vec<Vec<PlayerId>>> = Vec::with_capacity(p.n);
    for i in 0..p.n {
        let mut pool: Vec<PlayerId> = (0..p.n).filter(|&j| j != i).collect();
        if !p.complete && p.acceptability < 1.0 {
            pool.retain(|_| rng.gen_bool(p.acceptability));
        }
        pool.shuffle(&mut rng);
        let mut player_groups: Vec<Vec<PlayerId>> = Vec::new();
        for j in pool {
            let tie = p.tie_density > 0.0
                && !player_groups.is_empty()
                && rng.gen_bool(p.tie_density);
            if tie {
                player_groups.last_mut().unwrap().push(j);
            } else {
                player_groups.push(vec![j]);
            }
        }
        groups.push(player_groups);
    }
    Ok(Instance {
        n: p.n,
        rooms: RoomSpec::new(p.capacities.clone()),
        mode: p.mode,
        prefs: PreferenceProfile::from_groups(p.n, &groups, p.strict),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::write_instance;
    use crate::model::validate_instance;

    #[test]
    fn deterministic_in_seed() {
        let p = GeneratorParams::strict_complete(9, vec![3, 3, 3], ComparisonMode::Best, 42);
        let a = gen_random_instance(&p).unwrap();
        let b = gen_random_instance(&p).unwrap();
        assert_eq!(write_instance(&a), write_instance(&b));
        let mut p2 = p.clone();
        p2.seed = 43;
        assert_ne!(write_instance(&a), write_instance(&gen_random_instance(&p2).unwrap()));
    }

    #[test]
    fn complete_flag_ranks_everyone() {
        let p = GeneratorParams::strict_complete(9, vec![3, 3, 3], ComparisonMode::Worst, 7);
        let inst = gen_random_instance(&p).unwrap();
        assert!(validate_instance(&inst).ok());
        assert!(inst.prefs.is_complete());
        for i in 0..9 {
            for j in 0..9 {
                assert_eq!(inst.prefs.rank(i, j).is_some(), i != j);
            }
        }
    }

    #[test]
    fn acceptability_thins_the_lists() {
        let mut p = GeneratorParams::strict_complete(20, vec![10, 10], ComparisonMode::Best, 5);
        p.complete = false;
        p.acceptability = 0.5;
        let inst = gen_random_instance(&p).unwrap();
        assert!(validate_instance(&inst).ok());
        let ranked: usize = (0..20)
            .map(|i| (0..20).filter(|&j| inst.prefs.rank(i, j).is_some()).count())
            .sum();
        // 380 ordered pairs at density 0.5; allow generous slack.
        assert!((100..=280).contains(&ranked), "ranked = {ranked}");
        // Same seed, same set.
        let again = gen_random_instance(&p).unwrap();
        assert_eq!(inst, again);
    }

    #[test]
    fn ties_appear_when_requested() {
        let mut p = GeneratorParams::strict_complete(9, vec![3, 3, 3], ComparisonMode::Best, 11);
        p.strict = false;
        p.tie_density = 0.5;
        let inst = gen_random_instance(&p).unwrap();
        assert!(validate_instance(&inst).ok());
        assert!((0..9).any(|i| inst.prefs.groups_of(i).iter().any(|g| g.len() > 1)));
    }

    #[test]
    fn bad_params_are_rejected() {
        let mut p = GeneratorParams::strict_complete(9, vec![3, 3], ComparisonMode::Best, 0);
        assert!(matches!(
            gen_random_instance(&p),
            Err(GenerateError::CapacityMismatch { got: 6, n: 9 })
        ));
        p.capacities = vec![3, 3, 3];
        p.tie_density = 0.3;
        assert!(matches!(gen_random_instance(&p), Err(GenerateError::StrictWithTies(_))));
        p.tie_density = 0.0;
        p.acceptability = 0.5;
        assert!(matches!(gen_random_instance(&p), Err(GenerateError::CompleteWithHoles(_))));
        p.complete = false;
        p.acceptability = 0.0;
        assert!(matches!(gen_random_instance(&p), Err(GenerateError::BadAcceptability(_))));
    }
}
