//! Influence regions: compose the placements of surviving tiles pairwise and
//! count the distinct group elements obtained.

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;

use crate::catalog::{Catalog, QuarterGroup, TileType};
use crate::error::Result;
use crate::geometry::Isometry;
use crate::pruning::Region;

/// Elements of the group that may carry the base point to a Voronoi
/// neighbor, for base points in one prototile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborSet {
    pub group: String,
    pub prototile: TileType,
    pub members: BTreeSet<Isometry>,
}

impl NeighborSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, g: &Isometry) -> bool {
        self.members.contains(g)
    }
}

/// `ρ ∘ ρ'⁻¹` for all ordered pairs of distinct same-type surviving
/// placements. The set is closed under inversion, so both composition
/// orders are covered.
pub fn neighbor_candidates(region: &Region) -> HashSet<Isometry> {
    let mut out = HashSet::new();
    for t in TileType::ALL {
        let placements: Vec<Isometry> = region
            .survivors
            .iter()
            .filter(|x| x.tile_type == t)
            .map(|x| x.placement)
            .collect();
        let inverses: Vec<Isometry> = placements.iter().map(|p| p.inverse()).collect();
        let part: HashSet<Isometry> = placements
            .par_iter()
            .enumerate()
            .fold(HashSet::new, |mut acc, (i, rho)| {
                for (j, inv) in inverses.iter().enumerate() {
                    if i != j {
                        acc.insert(rho.compose(inv));
                    }
                }
                acc
            })
            .reduce(HashSet::new, |mut a, b| {
                a.extend(b);
                a
            });
        out.extend(part);
    }
    out.remove(&Isometry::identity());
    out
}

/// Candidates that belong to `g`.
pub fn neighbor_set(cat: &Catalog, g: &QuarterGroup, region: &Region) -> Result<NeighborSet> {
    let mut members = BTreeSet::new();
    for mu in neighbor_candidates(region) {
        if cat.is_member(g, &mu)? {
            members.insert(mu);
        }
    }
    Ok(NeighborSet {
        group: g.slug.clone(),
        prototile: region.prototile,
        members,
    })
}

pub fn count_bound(cat: &Catalog, g: &QuarterGroup, region: &Region) -> Result<usize> {
    Ok(neighbor_set(cat, g, region)?.len())
}
