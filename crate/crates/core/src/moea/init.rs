//! Population initialization strategies and the by-name registry that
//! selects one at runtime.

use std::collections::BTreeMap;

use rand::{Rng, RngCore};

use super::opposition::collective_init;
use super::Bounds;
use crate::error::{Error, Result};

/// Produces the first population of decision vectors. Initializers never
/// evaluate the problem.
pub trait PopulationInit: Send + Sync {
    /// Canonical algorithm name, e.g. `gde3`.
    fn name(&self) -> &'static str;

    fn initialize(&self, size: usize, bounds: &Bounds, rng: &mut dyn RngCore) -> Result<Vec<Vec<f64>>>;
}

/// Uniform random sampling within the bounds (plain GDE3).
#[derive(Debug, Default, Clone, Copy)]
pub struct RandomInit;

impl PopulationInit for RandomInit {
    fn name(&self) -> &'static str {
        "gde3"
    }

    fn initialize(&self, size: usize, bounds: &Bounds, rng: &mut dyn RngCore) -> Result<Vec<Vec<f64>>> {
        Ok((0..size)
            .map(|_| {
                (0..bounds.dim())
                    .map(|d| {
                        let (lo, hi) = (bounds.lower()[d], bounds.upper()[d]);
                        lo + (hi - lo) * rng.gen::<f64>()
                    })
                    .collect()
            })
            .collect())
    }
}

/// Collective oppositional initialization (CO-GDE3).
#[derive(Debug, Default, Clone, Copy)]
pub struct CollectiveInit;

impl PopulationInit for CollectiveInit {
    fn name(&self) -> &'static str {
        "co-gde3"
    }

    fn initialize(&self, size: usize, bounds: &Bounds, rng: &mut dyn RngCore) -> Result<Vec<Vec<f64>>> {
        Ok(collective_init(size, bounds, rng)?.into_iter().map(|(_, x)| x).collect())
    }
}

type Factory = fn() -> Box<dyn PopulationInit>;

/// Algorithm name to initializer lookup.
pub struct AlgorithmRegistry {
    entries: BTreeMap<&'static str, Factory>,
}

impl AlgorithmRegistry {
    pub fn empty() -> Self {
        Self { entries: BTreeMap::new() }
    }

    pub fn register(&mut self, name: &'static str, factory: Factory) {
        self.entries.insert(name, factory);
    }

    pub fn get(&self, name: &str) -> Result<Box<dyn PopulationInit>> {
        self.entries
            .get(name)
            .map(|f| f())
            .ok_or_else(|| Error::Config(format!("unknown algorithm '{name}' (known: {})", self.names().join(", "))))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }
}

impl Default for AlgorithmRegistry {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register("gde3", || Box::new(RandomInit));
        r.register("co-gde3", || Box::new(CollectiveInit));
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn registry_lookup() {
        let r = AlgorithmRegistry::default();
        assert_eq!(r.get("gde3").unwrap().name(), "gde3");
        assert_eq!(r.get("co-gde3").unwrap().name(), "co-gde3");
        assert!(matches!(r.get("nsga2"), Err(Error::Config(_))));
        assert_eq!(r.names(), vec!["co-gde3", "gde3"]);
    }

    #[test]
    fn random_init_within_bounds() {
        let b = Bounds::new(vec![-1.0, 2.0], vec![1.0, 3.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let pop = RandomInit.initialize(40, &b, &mut rng).unwrap();
        assert_eq!(pop.len(), 40);
        assert!(pop.iter().all(|x| b.contains(x)));
    }
}
