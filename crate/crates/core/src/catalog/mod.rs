//! Checked-in group data: the horizontal isometries of N(Q) per prototile,
//! the eight quarter groups, and the translation/rotation sets used for
//! pruning. Everything is validated when the catalog is loaded.

mod load;
mod types;

use std::collections::HashMap;

use once_cell::sync::Lazy;

use crate::error::{Error, Result};
use crate::geometry::{Isometry, Linear, Vec3};

pub use load::{parse_axes, parse_horizontal_table, CatalogSources};
pub use types::*;

/// Immutable group data. Obtain the built-in copy with [`Catalog::builtin`].
#[derive(Debug, Clone)]
pub struct Catalog {
    /// `horizontal[type][coset][column]`
    horizontal: [[[Isometry; 4]; 8]; 4],
    groups: Vec<QuarterGroup>,
    sets: Vec<TransformationSet>,
    /// N(Q) modulo Z^3: (linear part, translation mod 1) -> coset.
    coset_index: HashMap<(Linear, Vec3), CosetId>,
}

static BUILTIN: Lazy<Catalog> =
    Lazy::new(|| Catalog::from_sources(&CatalogSources::builtin()).expect("built-in catalog is valid"));

impl Catalog {
    pub fn builtin() -> &'static Catalog {
        &BUILTIN
    }

    pub fn from_sources(src: &CatalogSources) -> Result<Catalog> {
        load::build(src)
    }

    pub(crate) fn from_parts(
        horizontal: [[[Isometry; 4]; 8]; 4],
        groups: Vec<QuarterGroup>,
        sets: Vec<TransformationSet>,
    ) -> Result<Catalog> {
        let mut coset_index = HashMap::with_capacity(96);
        for c in CosetId::ALL {
            for h in &horizontal[TileType::A.index()][c.index()] {
                for r in triad_powers() {
                    let key = r.compose(h).mod_lattice_key();
                    if let Some(prev) = coset_index.insert(key, c) {
                        return Err(Error::Catalog(format!(
                            "representatives of {prev} and {c} coincide modulo Z^3: {h}"
                        )));
                    }
                }
            }
        }
        Ok(Catalog {
            horizontal,
            groups,
            sets,
            coset_index,
        })
    }

    /// The 32 horizontal isometries for prototile type `t`, grouped by coset
    /// (index 0 is C1) in table column order.
    pub fn horizontal_isometries(&self, t: TileType) -> &[[Isometry; 4]; 8] {
        &self.horizontal[t.index()]
    }

    pub fn groups(&self) -> &[QuarterGroup] {
        &self.groups
    }

    /// Looks a group up by slug, display name or alias (case-insensitive).
    pub fn group(&self, name: &str) -> Result<&QuarterGroup> {
        let needle = name.trim().to_ascii_lowercase();
        self.groups
            .iter()
            .find(|g| g.matches_name(&needle))
            .ok_or_else(|| Error::UnknownGroup(name.to_string()))
    }

    /// The normalizer N(Q), the largest of the eight groups.
    pub fn normalizer(&self) -> &QuarterGroup {
        self.groups
            .iter()
            .max_by_key(|g| g.cosets.len())
            .expect("catalog has groups")
    }

    pub fn transformation_set(&self, id: StageId) -> &TransformationSet {
        &self.sets[id.index()]
    }

    pub fn transformation_sets(&self) -> &[TransformationSet] {
        &self.sets
    }

    /// Isometries representing `g` modulo integer translations: the type-A
    /// coset matrices of the group's cosets composed with the triad powers.
    pub fn representatives(&self, g: &QuarterGroup) -> Vec<Isometry> {
        let mut out = Vec::with_capacity(12 * g.cosets.len());
        for &c in &g.cosets {
            for h in &self.horizontal[TileType::A.index()][c.index()] {
                for r in triad_powers() {
                    out.push(r.compose(h));
                }
            }
        }
        out
    }

    /// The coset of N(Q)/Q containing `mu`.
    pub fn classify_coset(&self, mu: &Isometry) -> Result<CosetId> {
        self.coset_index
            .get(&mu.mod_lattice_key())
            .copied()
            .ok_or_else(|| Error::NotInNormalizer(mu.to_string()))
    }

    /// Whether `mu` (an element of N(Q)) belongs to `g`.
    pub fn is_member(&self, g: &QuarterGroup, mu: &Isometry) -> Result<bool> {
        Ok(g.cosets.contains(&self.classify_coset(mu)?))
    }

    /// Like [`Catalog::classify_coset`] but `None` outside N(Q).
    pub fn try_classify(&self, mu: &Isometry) -> Option<CosetId> {
        self.coset_index.get(&mu.mod_lattice_key()).copied()
    }
}

/// `[id, R, R^2]` for the triad `R: (x, y, z) -> (z, x, y)`.
pub fn triad_powers() -> [Isometry; 3] {
    let r = Isometry::triad_xyz();
    [Isometry::identity(), r, r.compose(&r)]
}
