use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::vec3::{format_rat, is_unit_or_zero, parse_rat, Point3, Rat, Vec3};
use crate::error::{Error, ParseError, Result};

/// Integer orthogonal 3x3 matrix, i.e. a signed permutation matrix.
pub type Linear = [[i32; 3]; 3];

pub const IDENTITY_LINEAR: Linear = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];

/// Exact affine isometry `p -> L p + t`.
///
/// `L` is a signed permutation matrix and `t` is rational. Equality and
/// hashing are exact, which is what lets tiles be identified by their
/// placement.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Isometry {
    lin: Linear,
    trans: Vec3,
}

impl Isometry {
    /// Validates that `lin` is orthogonal with entries in {-1, 0, 1}.
    pub fn new(lin: Linear, trans: Vec3) -> Result<Self> {
        if !is_signed_permutation(&lin) {
            return Err(Error::Catalog(format!("linear part {lin:?} is not orthogonal")));
        }
        Ok(Isometry { lin, trans })
    }

    pub(crate) const fn new_unchecked(lin: Linear, trans: Vec3) -> Self {
        Isometry { lin, trans }
    }

    pub fn identity() -> Self {
        Isometry {
            lin: IDENTITY_LINEAR,
            trans: Vec3::zero(),
        }
    }

    pub fn translation(v: Vec3) -> Self {
        Isometry {
            lin: IDENTITY_LINEAR,
            trans: v,
        }
    }

    /// The order-3 rotation `(x, y, z) -> (z, x, y)` about the line `x = y = z`.
    pub fn triad_xyz() -> Self {
        Isometry {
            lin: [[0, 0, 1], [1, 0, 0], [0, 1, 0]],
            trans: Vec3::zero(),
        }
    }

    pub fn linear(&self) -> &Linear {
        &self.lin
    }

    pub fn translation_part(&self) -> &Vec3 {
        &self.trans
    }

    pub fn apply(&self, p: &Point3) -> Point3 {
        self.apply_linear(p) + self.trans
    }

    pub fn apply_linear(&self, v: &Vec3) -> Vec3 {
        let mut out = [Rat::zero(); 3];
        for (i, row) in self.lin.iter().enumerate() {
            for (j, &l) in row.iter().enumerate() {
                match l {
                    1 => out[i] += v.0[j],
                    -1 => out[i] -= v.0[j],
                    _ => {}
                }
            }
        }
        Vec3(out)
    }

    /// `self ∘ other`: applies `other` first.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry {
            lin: mat_mul(&self.lin, &other.lin),
            trans: self.apply_linear(&other.trans) + self.trans,
        }
    }

    pub fn inverse(&self) -> Isometry {
        let lt = transpose(&self.lin);
        let inv_lin = Isometry {
            lin: lt,
            trans: Vec3::zero(),
        };
        Isometry {
            lin: lt,
            trans: -inv_lin.apply_linear(&self.trans),
        }
    }

    pub fn det(&self) -> i32 {
        det3(&self.lin)
    }

    pub fn is_identity(&self) -> bool {
        self.lin == IDENTITY_LINEAR && self.trans.is_zero()
    }

    pub fn is_translation(&self) -> bool {
        self.lin == IDENTITY_LINEAR
    }

    /// Key identifying the isometry modulo integer translations.
    pub fn mod_lattice_key(&self) -> (Linear, Vec3) {
        (self.lin, self.trans.fract_unit())
    }

    /// `p -> A p + b` in floating point.
    pub fn to_f64(&self) -> ([[f64; 3]; 3], [f64; 3]) {
        (self.lin.map(|r| r.map(f64::from)), self.trans.to_f64())
    }

    pub fn apply_f64(&self, p: &[f64; 3]) -> [f64; 3] {
        let t = self.trans.to_f64();
        let mut out = t;
        for (i, row) in self.lin.iter().enumerate() {
            for (j, &l) in row.iter().enumerate() {
                out[i] += f64::from(l) * p[j];
            }
        }
        out
    }

    /// 4x4 homogeneous matrix with first row `(1, 0, 0, 0)` and the
    /// translation in the first column, acting on `(1, x, y, z)^T`.
    pub fn to_homogeneous(&self) -> [[Rat; 4]; 4] {
        let mut m = [[Rat::zero(); 4]; 4];
        m[0][0] = Rat::one();
        for i in 0..3 {
            m[i + 1][0] = self.trans.0[i];
            for j in 0..3 {
                m[i + 1][j + 1] = Rat::from_integer(i64::from(self.lin[i][j]));
            }
        }
        m
    }

    pub fn from_homogeneous(m: &[[Rat; 4]; 4]) -> Result<Self> {
        let bad = || Error::Catalog(format!("not a homogeneous isometry matrix: {m:?}"));
        if !(m[0][0].is_one() && m[0][1..].iter().all(Zero::is_zero)) {
            return Err(bad());
        }
        let mut lin = [[0i32; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let e = m[i + 1][j + 1];
                if !is_unit_or_zero(&e) {
                    return Err(bad());
                }
                lin[i][j] = e.to_integer() as i32;
            }
        }
        Isometry::new(lin, Vec3([m[1][0], m[2][0], m[3][0]]))
    }

    /// Parses the record format `l11 l12 l13 l21 l22 l23 l31 l32 l33 t1 t2 t3`.
    pub fn parse_record(fields: &[&str]) -> std::result::Result<Self, ParseError> {
        if fields.len() != 12 {
            return Err(ParseError::Rational(format!(
                "expected 12 rationals, found {}",
                fields.len()
            )));
        }
        let vals = fields
            .iter()
            .map(|f| parse_rat(f))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let mut lin = [[0i32; 3]; 3];
        for (k, v) in vals[..9].iter().enumerate() {
            if !is_unit_or_zero(v) {
                return Err(ParseError::Rational(format!(
                    "linear entry {} is not in {{-1, 0, 1}}",
                    format_rat(v)
                )));
            }
            lin[k / 3][k % 3] = v.to_integer() as i32;
        }
        let trans = Vec3([vals[9], vals[10], vals[11]]);
        Isometry::new(lin, trans).map_err(|e| ParseError::Rational(e.to_string()))
    }

    pub fn to_record(&self) -> String {
        let mut parts: Vec<String> = self
            .lin
            .iter()
            .flat_map(|r| r.iter().map(|v| v.to_string()))
            .collect();
        parts.extend(self.trans.0.iter().map(format_rat));
        parts.join(" ")
    }
}

impl fmt::Debug for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 3] = ["x", "y", "z"];
        let comps: Vec<String> = (0..3)
            .map(|i| {
                let mut s = String::new();
                for (e, name) in self.lin[i].iter().zip(NAMES) {
                    match e {
                        1 => s.push_str(&format!("+{name}")),
                        -1 => s.push_str(&format!("-{name}")),
                        _ => {}
                    }
                }
                let t = self.trans.0[i];
                if !t.is_zero() {
                    let sign = if t > Rat::zero() { "+" } else { "" };
                    s.push_str(&format!("{sign}{}", format_rat(&t)));
                }
                s.trim_start_matches('+').to_string()
            })
            .collect();
        write!(f, "({})", comps.join(", "))
    }
}

impl fmt::Display for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct IsometryRepr {
    linear: Linear,
    translation: Vec3,
}

impl Serialize for Isometry {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        IsometryRepr {
            linear: self.lin,
            translation: self.trans,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Isometry {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = IsometryRepr::deserialize(d)?;
        Isometry::new(r.linear, r.translation).map_err(serde::de::Error::custom)
    }
}

pub fn mat_mul(a: &Linear, b: &Linear) -> Linear {
    let mut out = [[0i32; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn transpose(a: &Linear) -> Linear {
    let mut out = [[0i32; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[j][i];
        }
    }
    out
}

pub fn det3(m: &Linear) -> i32 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn is_signed_permutation(m: &Linear) -> bool {
    m.iter().flatten().all(|v| (-1..=1).contains(v)) && mat_mul(m, &transpose(m)) == IDENTITY_LINEAR
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::vec3::rat;

    fn screw() -> Isometry {
        // (x, y, z) -> (1 - x, 1/2 - y, 1/2 + z)
        Isometry::new(
            [[-1, 0, 0], [0, -1, 0], [0, 0, 1]],
            Vec3::new(rat(1, 1), rat(1, 2), rat(1, 2)),
        )
        .unwrap()
    }

    #[test]
    fn compose_with_identity() {
        let g = screw();
        assert_eq!(Isometry::identity().compose(&g), g);
        assert_eq!(g.compose(&Isometry::identity()), g);
    }

    #[test]
    fn screw_squared_is_unit_translation() {
        let g = screw();
        assert_eq!(g.compose(&g), Isometry::translation(Vec3::from_ints(0, 0, 1)));
    }

    #[test]
    fn triad_cubed_is_identity() {
        let r = Isometry::triad_xyz();
        assert!(r.compose(&r).compose(&r).is_identity());
        assert!(!r.compose(&r).is_identity());
    }

    #[test]
    fn inverse_examples() {
        assert!(Isometry::identity().inverse().is_identity());
        let t = Isometry::translation(Vec3::from_ints(1, 0, 0));
        assert_eq!(t.inverse(), Isometry::translation(Vec3::from_ints(-1, 0, 0)));
        // Solving L p + t = q for the screw by hand: p = (1 - x, 1/2 - y, z - 1/2).
        let expected = Isometry::new(
            [[-1, 0, 0], [0, -1, 0], [0, 0, 1]],
            Vec3::new(rat(1, 1), rat(1, 2), rat(-1, 2)),
        )
        .unwrap();
        assert_eq!(screw().inverse(), expected);
        assert!(screw().compose(&screw().inverse()).is_identity());
    }

    #[test]
    fn composition_order() {
        let a = Isometry::translation(Vec3::from_ints(1, 0, 0));
        let r = Isometry::triad_xyz();
        let p = Vec3::from_ints(1, 2, 3);
        assert_eq!(a.compose(&r).apply(&p), a.apply(&r.apply(&p)));
        assert_eq!(r.compose(&a).apply(&p), r.apply(&a.apply(&p)));
    }

    #[test]
    fn homogeneous_round_trip() {
        let g = screw();
        let m = g.to_homogeneous();
        assert_eq!(m[1][0], rat(1, 1));
        assert_eq!(m[2][0], rat(1, 2));
        assert_eq!(m[1][1], rat(-1, 1));
        assert_eq!(Isometry::from_homogeneous(&m).unwrap(), g);
    }

    #[test]
    fn rejects_non_orthogonal() {
        assert!(Isometry::new([[1, 1, 0], [0, 1, 0], [0, 0, 1]], Vec3::zero()).is_err());
        let rec: Vec<&str> = "1 0 0 0 1 0 0 0 2 0 0 0".split_whitespace().collect();
        assert!(Isometry::parse_record(&rec).is_err());
        let rec: Vec<&str> = "1 0 0 0 1 0 0 0 1 0 0 x".split_whitespace().collect();
        assert!(Isometry::parse_record(&rec).is_err());
    }

    #[test]
    fn record_round_trip() {
        let g = screw();
        let rec = g.to_record();
        let fields: Vec<&str> = rec.split_whitespace().collect();
        assert_eq!(Isometry::parse_record(&fields).unwrap(), g);
    }
}
