use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::ParseError;

/// Exact rational number in canonical reduced form.
///
/// All coordinates handled by the engine have small denominators (they
/// divide 16), so a machine-word ratio is enough.
pub type Rat = num_rational::Ratio<i64>;

/// Builds `n / d`. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(n)
}

/// Parses `"3/16"`, `"-1/2"` or `"7"`.
pub fn parse_rat(s: &str) -> Result<Rat, ParseError> {
    let bad = || ParseError::Rational(s.to_string());
    let s = s.trim();
    if s.is_empty() {
        return Err(bad());
    }
    match s.split_once('/') {
        None => s.parse::<i64>().map(Rat::from_integer).map_err(|_| bad()),
        Some((n, d)) => {
            let n: i64 = n.parse().map_err(|_| bad())?;
            let d: i64 = d.parse().map_err(|_| bad())?;
            if d <= 0 {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
    }
}

pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().expect("finite rational")
}

/// Exact 3-vector. Also used for points; `Point3 - Point3` is a `Vec3`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Vec3(pub [Rat; 3]);

pub type Point3 = Vec3;

impl Vec3 {
    pub fn new(x: Rat, y: Rat, z: Rat) -> Self {
        Vec3([x, y, z])
    }

    pub fn from_ints(x: i64, y: i64, z: i64) -> Self {
        Vec3([rat_int(x), rat_int(y), rat_int(z)])
    }

    pub fn zero() -> Self {
        Vec3([Rat::zero(); 3])
    }

    pub fn x(&self) -> Rat {
        self.0[0]
    }

    pub fn y(&self) -> Rat {
        self.0[1]
    }

    pub fn z(&self) -> Rat {
        self.0[2]
    }

    pub fn dot(&self, o: &Vec3) -> Rat {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    pub fn cross(&self, o: &Vec3) -> Vec3 {
        let [a, b, c] = self.0;
        let [d, e, f] = o.0;
        Vec3([b * f - c * e, c * d - a * f, a * e - b * d])
    }

    pub fn norm2(&self) -> Rat {
        self.dot(self)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    /// Component-wise fractional part in `[0, 1)`.
    pub fn fract_unit(&self) -> Vec3 {
        Vec3(self.0.map(|c| c - c.floor()))
    }

    pub fn floor(&self) -> Vec3 {
        Vec3(self.0.map(|c| c.floor()))
    }

    pub fn abs_max(&self) -> Rat {
        self.0
            .iter()
            .map(|c| c.abs())
            .fold(Rat::zero(), |a, b| if b > a { b } else { a })
    }

    pub fn to_f64(&self) -> [f64; 3] {
        self.0.map(|c| rat_to_f64(&c))
    }

    /// Scales a rational direction to the primitive integer vector with the
    /// same direction.
    pub fn primitive(&self) -> Vec3 {
        if self.is_zero() {
            return *self;
        }
        let lcm = self
            .0
            .iter()
            .fold(1i64, |acc, c| lcm_i64(acc, *c.denom()));
        let ints: Vec<i64> = self.0.iter().map(|c| (c * lcm).to_integer()).collect();
        let g = ints.iter().fold(0i64, |acc, &v| gcd_i64(acc, v.abs()));
        Vec3::from_ints(ints[0] / g, ints[1] / g, ints[2] / g)
    }
}

fn gcd_i64(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.abs()
}

fn lcm_i64(a: i64, b: i64) -> i64 {
    a / gcd_i64(a, b) * b
}

impl Index<usize> for Vec3 {
    type Output = Rat;
    fn index(&self, i: usize) -> &Rat {
        &self.0[i]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3(self.0.map(|c| -c))
    }
}

impl Mul<Rat> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: Rat) -> Vec3 {
        Vec3(self.0.map(|c| c * s))
    }
}

impl fmt::Debug for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            format_rat(&self.0[0]),
            format_rat(&self.0[1]),
            format_rat(&self.0[2])
        )
    }
}

impl fmt::Display for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for Vec3 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let parts: [String; 3] = self.0.map(|c| format_rat(&c));
        parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Vec3 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let parts = <[String; 3]>::deserialize(d)?;
        let mut out = [Rat::zero(); 3];
        for (o, p) in out.iter_mut().zip(parts.iter()) {
            *o = parse_rat(p).map_err(serde::de::Error::custom)?;
        }
        Ok(Vec3(out))
    }
}

/// `true` if `r` is one of 0, 1 or -1.
pub(crate) fn is_unit_or_zero(r: &Rat) -> bool {
    r.is_zero() || r.abs().is_one()
}
