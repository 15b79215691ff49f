use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::geometry::{Isometry, Point3, Rat, Vec3};

/// One of the eight classes of N(Q)/Q. `C1` is Q itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CosetId {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
}

impl CosetId {
    pub const ALL: [CosetId; 8] = [
        CosetId::C1,
        CosetId::C2,
        CosetId::C3,
        CosetId::C4,
        CosetId::C5,
        CosetId::C6,
        CosetId::C7,
        CosetId::C8,
    ];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for CosetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}", self.index() + 1)
    }
}

impl FromStr for CosetId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        CosetId::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Catalog(format!("unknown coset {s:?}")))
    }
}

/// Prototile type of the auxiliary tessellation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TileType {
    A,
    B,
    C,
    D,
}

impl TileType {
    pub const ALL: [TileType; 4] = [TileType::A, TileType::B, TileType::C, TileType::D];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for TileType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for TileType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim().to_ascii_uppercase().trim_end_matches('0') {
            "A" => Ok(TileType::A),
            "B" => Ok(TileType::B),
            "C" => Ok(TileType::C),
            "D" => Ok(TileType::D),
            _ => Err(Error::Catalog(format!("unknown tile type {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Lattice {
    P,
    I,
}

/// Identifier of a transformation set, which doubles as a pruning stage.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StageId {
    S1,
    S2,
    S3,
    S4,
    S5,
    S6,
}

impl StageId {
    pub const ALL: [StageId; 6] = [
        StageId::S1,
        StageId::S2,
        StageId::S3,
        StageId::S4,
        StageId::S5,
        StageId::S6,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_translation(self) -> bool {
        matches!(self, StageId::S1 | StageId::S2)
    }
}

impl fmt::Display for StageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S{}", self.index() + 1)
    }
}

impl FromStr for StageId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        StageId::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Catalog(format!("unknown transformation set {s:?}")))
    }
}

/// Wallpaper group types that occur as coordinate-plane subgroups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlaneGroupType {
    P1,
    P2,
    Pg,
    Pgg,
}

impl fmt::Display for PlaneGroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PlaneGroupType::P1 => "p1",
            PlaneGroupType::P2 => "p2",
            PlaneGroupType::Pg => "pg",
            PlaneGroupType::Pgg => "pgg",
        };
        f.write_str(s)
    }
}

/// A rotation axis: the line through `point` with direction `direction`,
/// and the rotation order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RotationAxis {
    pub point: Point3,
    pub direction: Vec3,
    pub order: u8,
}

impl RotationAxis {
    /// Rotation by `2π / order` about the axis (counter-clockwise around
    /// `direction`), as an exact isometry.
    ///
    /// Only defined for the directions that occur here: half-turns about
    /// any rational direction with an integral reflection matrix, and
    /// order-3 rotations about body diagonals.
    pub fn rotation(&self) -> Option<Isometry> {
        let d = self.direction.primitive();
        let di: Vec<i64> = d.0.iter().map(|c| c.to_integer()).collect();
        let n2: i64 = di.iter().map(|v| v * v).sum();
        let mut lin = [[0i32; 3]; 3];
        match self.order {
            2 => {
                // 2 d d^T / |d|^2 - I
                for i in 0..3 {
                    for j in 0..3 {
                        let num = 2 * di[i] * di[j] - if i == j { n2 } else { 0 };
                        if num % n2 != 0 {
                            return None;
                        }
                        lin[i][j] = (num / n2) as i32;
                    }
                }
            }
            3 => {
                if n2 != 3 {
                    return None;
                }
                // (-I + [d]_x + d d^T) / 2 for a body diagonal d.
                let cross = [
                    [0, -di[2], di[1]],
                    [di[2], 0, -di[0]],
                    [-di[1], di[0], 0],
                ];
                for i in 0..3 {
                    for j in 0..3 {
                        let num = -(if i == j { 1 } else { 0 }) + cross[i][j] + di[i] * di[j];
                        if num % 2 != 0 {
                            return None;
                        }
                        lin[i][j] = (num / 2) as i32;
                    }
                }
            }
            _ => return None,
        }
        let l = Isometry::new(lin, Vec3::zero()).ok()?;
        let t = self.point - l.apply_linear(&self.point);
        Some(Isometry::new_unchecked(lin, t))
    }

    /// Canonical description of the underlying line: primitive direction
    /// with its first nonzero coordinate positive, and the base point moved
    /// along the line to where that coordinate vanishes.
    pub fn canonical_line(&self) -> (Vec3, Point3) {
        let mut d = self.direction.primitive();
        let k = (0..3).find(|&i| !d.0[i].is_zero()).expect("nonzero direction");
        if d.0[k] < Rat::zero() {
            d = -d;
        }
        let s = self.point.0[k] / d.0[k];
        (d, self.point - d * s)
    }

    pub fn same_line(&self, other: &RotationAxis) -> bool {
        self.canonical_line() == other.canonical_line()
    }
}

/// A set of translations and/or rotation axes used as one pruning stage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformationSet {
    pub id: StageId,
    pub translations: Vec<Vec3>,
    pub axes: Vec<RotationAxis>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenBounds {
    pub col1: u32,
    pub col2: Option<u32>,
    pub col3: Option<u32>,
    pub col4: Option<u32>,
    #[serde(rename = "final")]
    pub final_bound: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuarterGroup {
    pub slug: String,
    pub name: String,
    #[serde(default)]
    pub aliases: Vec<String>,
    pub cosets: Vec<CosetId>,
    pub lattice: Lattice,
    pub aspects: u32,
    pub transformation_sets: Vec<StageId>,
    pub plane_group: PlaneGroupType,
    pub golden: GoldenBounds,
}

impl QuarterGroup {
    /// `12 |cosets|`, halved for body-centred lattices.
    pub fn computed_aspects(&self) -> u32 {
        let n = 12 * self.cosets.len() as u32;
        match self.lattice {
            Lattice::I => n / 2,
            Lattice::P => n,
        }
    }

    pub fn has_stage(&self, s: StageId) -> bool {
        self.transformation_sets.contains(&s)
    }

    pub(crate) fn matches_name(&self, needle_lower: &str) -> bool {
        self.slug.to_ascii_lowercase() == needle_lower
            || self.name.to_ascii_lowercase() == needle_lower
            || self.aliases.iter().any(|a| a.to_ascii_lowercase() == needle_lower)
    }

    /// Points per unit cube of a generic orbit.
    pub fn density(&self) -> u32 {
        12 * self.cosets.len() as u32
    }
}

impl fmt::Display for QuarterGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.slug)
    }
}
