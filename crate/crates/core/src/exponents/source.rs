use std::sync::OnceLock;

use crate::channels::CqChannel;
use crate::divergences::OverlapProfile;
use crate::error::Result;
use crate::linalg::DensityMatrix;

/// What attains an extremum.
#[derive(Clone, Debug)]
pub enum Witness {
    /// The single fixed state pair of a `StatePairSource`.
    FixedPair,
    Letter {
        index: usize,
        label: String,
    },
    /// Input state fed to both channels.
    Input(DensityMatrix),
    /// Input pair (rho, sigma) fed to the same channel.
    Pair(DensityMatrix, DensityMatrix),
}

/// A supremum over the inputs of a source, with the maximizer.
#[derive(Clone, Debug)]
pub struct Extremum {
    pub value: f64,
    pub witness: Witness,
    /// Overlap data of the maximizing output pair.
    pub profile: OverlapProfile,
    /// Best value among grid/seed candidates before local refinement.
    pub grid_value: f64,
    pub search_method: &'static str,
}

/// Where a continuous search should look for starting points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Scan {
    Seeds,
    Alpha(f64),
    Stein,
    Reverse,
}

/// A family of output-state pairs indexed by inputs (letters, states or
/// state pairs). Every exponent is a supremum over the family of a quantity
/// computed from one pair.
pub trait ExponentSource: Sync {
    /// Sup over inputs of `objective` applied to the output pair.
    fn maximize(&self, objective: &(dyn Fn(&OverlapProfile) -> f64 + Sync), scan: Scan) -> Extremum;

    /// Cached sup_x D(rho_x || sigma_x).
    fn stein(&self) -> &Extremum;

    /// Cached sup_x D(sigma_x || rho_x).
    fn reverse_stein(&self) -> &Extremum;
}

#[derive(Debug, Default)]
pub(crate) struct SteinCache {
    stein: OnceLock<Extremum>,
    reverse: OnceLock<Extremum>,
}

impl SteinCache {
    pub(crate) fn stein(&self, src: &impl ExponentSource) -> &Extremum {
        self.stein
            .get_or_init(|| src.maximize(&|p: &OverlapProfile| p.relative_entropy(), Scan::Stein))
    }

    pub(crate) fn reverse(&self, src: &impl ExponentSource) -> &Extremum {
        self.reverse
            .get_or_init(|| src.maximize(&|p: &OverlapProfile| p.reverse_relative_entropy(), Scan::Reverse))
    }
}

/// A single pair (rho, sigma).
#[derive(Debug)]
pub struct StatePairSource {
    profile: OverlapProfile,
    cache: SteinCache,
}

impl StatePairSource {
    pub fn new(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<Self> {
        Ok(Self::from_profile(OverlapProfile::new(rho, sigma)?))
    }

    pub fn from_profile(profile: OverlapProfile) -> Self {
        Self {
            profile,
            cache: SteinCache::default(),
        }
    }
}

impl ExponentSource for StatePairSource {
    fn maximize(&self, objective: &(dyn Fn(&OverlapProfile) -> f64 + Sync), _scan: Scan) -> Extremum {
        let value = objective(&self.profile);
        Extremum {
            value,
            witness: Witness::FixedPair,
            profile: self.profile.clone(),
            grid_value: value,
            search_method: "fixed-pair",
        }
    }

    fn stein(&self) -> &Extremum {
        self.cache.stein(self)
    }

    fn reverse_stein(&self) -> &Extremum {
        self.cache.reverse(self)
    }
}

/// Pair of cq-channels on a shared finite alphabet: x -> (rho_x, sigma_x).
#[derive(Debug)]
pub struct CqSource {
    labels: Vec<String>,
    profiles: Vec<OverlapProfile>,
    cache: SteinCache,
}

impl CqSource {
    pub fn new(n: &CqChannel, nbar: &CqChannel) -> Result<Self> {
        n.check_matched(nbar)?;
        let profiles = n
            .outputs()
            .iter()
            .zip(nbar.outputs())
            .map(|(a, b)| OverlapProfile::new(a, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            labels: n.alphabet().to_vec(),
            profiles,
            cache: SteinCache::default(),
        })
    }
}

impl ExponentSource for CqSource {
    fn maximize(&self, objective: &(dyn Fn(&OverlapProfile) -> f64 + Sync), _scan: Scan) -> Extremum {
        let mut best = 0;
        let mut best_v = f64::NEG_INFINITY;
        for (i, p) in self.profiles.iter().enumerate() {
            let v = objective(p);
            if v > best_v {
                best_v = v;
                best = i;
            }
        }
        Extremum {
            value: best_v,
            witness: Witness::Letter {
                index: best,
                label: self.labels[best].clone(),
            },
            profile: self.profiles[best].clone(),
            grid_value: best_v,
            search_method: "alphabet",
        }
    }

    fn stein(&self) -> &Extremum {
        self.cache.stein(self)
    }

    fn reverse_stein(&self) -> &Extremum {
        self.cache.reverse(self)
    }
}
