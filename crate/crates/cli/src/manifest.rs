//! The run manifest shared by the builder subcommands and the apply/check
//! pipeline: a space, an operator word, a seed, and optional Cartan
//! bookkeeping plus the reference inequality systems the builders know.

use polydd::constructions::HPolytope;
use polydd::ops::OperatorWord;
use polydd::rational::Rat;
use polydd::string_space::StringSpace;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub space: StringSpace,
    pub word: OperatorWord,
    #[serde(with = "polydd::rational::rat_flexible::vec")]
    pub seed: Vec<Rat>,
    /// Named Cartan type attached by the builders, for oracle comparisons.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cartan: Option<String>,
    /// 1-based simple root behind each block, when the space came from a word.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub block_roots: Option<Vec<usize>>,
    /// Reference inequality system for the chain, when one is known.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub polytope: Option<HPolytope>,
    /// Strictly removed region (twisted cubes): the chain is polytope minus this.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub removed: Option<HPolytope>,
}

impl Manifest {
    pub fn new(space: StringSpace, word: OperatorWord, seed: Vec<Rat>) -> Self {
        Manifest {
            space,
            word,
            seed,
            cartan: None,
            block_roots: None,
            polytope: None,
            removed: None,
        }
    }

    /// Seed dimension and word validity against the space.
    pub fn validate(&self) -> Result<(), polydd::Error> {
        if self.seed.len() != self.space.dim() {
            return Err(polydd::Error::DimensionMismatch {
                expected: self.space.dim(),
                got: self.seed.len(),
            });
        }
        self.word.validate(&self.space)
    }
}
