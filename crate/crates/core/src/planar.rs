//! Exact points and predicates in the plane over Q(√2, √3).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Sub};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::exactnum::{rat, QField};

#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: QField,
    pub y: QField,
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Point {
    pub fn new(x: QField, y: QField) -> Self {
        Point { x, y }
    }

    pub fn origin() -> Self {
        Point::default()
    }

    pub fn dot(&self, o: &Point) -> QField {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn cross(&self, o: &Point) -> QField {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn norm_sq(&self) -> QField {
        self.dot(self)
    }

    pub fn scale(&self, k: &QField) -> Point {
        Point::new(&self.x * k, &self.y * k)
    }

    pub fn scale_rat(&self, k: &BigRational) -> Point {
        Point::new(self.x.scale(k), self.y.scale(k))
    }

    /// Rotation by a quarter turn counter-clockwise.
    pub fn perp(&self) -> Point {
        Point::new(-&self.y, self.x.clone())
    }

    pub fn dist_sq(&self, o: &Point) -> QField {
        (o - self).norm_sq()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }

    /// Mirror image across the line through `p` and `q`.
    pub fn reflect(&self, p: &Point, q: &Point) -> Point {
        let d = q - p;
        let t = (self - p).dot(&d) * d.norm_sq().inv().expect("distinct mirror points");
        let foot = p + &d.scale(&t);
        &foot.scale_rat(&rat(2, 1)) - self
    }
}

impl Add<&Point> for &Point {
    type Output = Point;
    fn add(self, o: &Point) -> Point {
        Point::new(&self.x + &o.x, &self.y + &o.y)
    }
}

impl Sub<&Point> for &Point {
    type Output = Point;
    fn sub(self, o: &Point) -> Point {
        Point::new(&self.x - &o.x, &self.y - &o.y)
    }
}

/// Sign of the turn `a → b → c`: `Greater` for counter-clockwise.
pub fn orient(a: &Point, b: &Point, c: &Point) -> Ordering {
    (b - a).cross(&(c - a)).sign()
}

/// The apex `c` of a triangle on base `ab` with `|ac|² = ac_sq`,
/// `|bc|² = bc_sq` and the given area, on the left of `a → b` when
/// `left` holds.
pub fn place_apex(a: &Point, b: &Point, ac_sq: &QField, bc_sq: &QField, area: &QField, left: bool) -> Point {
    let d = b - a;
    let l_sq = d.norm_sq();
    let inv = l_sq.inv().expect("nondegenerate base");
    let t = (&l_sq + ac_sq - bc_sq) * &inv * QField::from_rational(rat(1, 2));
    let mut s = area * &inv * QField::from_int(2);
    if !left {
        s = -s;
    }
    let along = d.scale(&t);
    let across = d.perp().scale(&s);
    &(a + &along) + &across
}

/// Squared distance from `p` to the closed segment `ab`, with the
/// parameter of the closest point clamped to `[0, 1]`.
pub fn segment_dist_sq(p: &Point, a: &Point, b: &Point) -> QField {
    let d = b - a;
    let t = (p - a).dot(&d);
    if !t.is_positive() {
        return p.dist_sq(a);
    }
    let l = d.norm_sq();
    if t.cmp_value(&l) != Ordering::Less {
        return p.dist_sq(b);
    }
    // |ap|² − t²/|d|²
    let ap = p.dist_sq(a);
    &ap - &(t.square() * l.inv().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64) -> Point {
        Point::new(QField::from_int(x), QField::from_int(y))
    }

    #[test]
    fn equilateral_apex() {
        let c = place_apex(&pt(0, 0), &pt(1, 0), &QField::one(), &QField::one(), &QField::sqrt3().scale(&rat(1, 4)), true);
        assert_eq!(c, Point::new(QField::from_rational(rat(1, 2)), QField::sqrt3().scale(&rat(1, 2))));
        let c2 = c.reflect(&pt(0, 0), &pt(1, 0));
        assert_eq!(c2.y, -&c.y);
        assert_eq!(c.dist_sq(&c2), QField::from_int(3));
        assert_eq!(orient(&pt(0, 0), &pt(1, 0), &c), Ordering::Greater);
    }

    #[test]
    fn segment_distance() {
        assert_eq!(segment_dist_sq(&pt(1, 2), &pt(0, 0), &pt(3, 0)), QField::from_int(4));
        assert_eq!(segment_dist_sq(&pt(-1, 1), &pt(0, 0), &pt(3, 0)), QField::from_int(2));
        assert_eq!(segment_dist_sq(&pt(5, 0), &pt(0, 0), &pt(3, 0)), QField::from_int(4));
    }
}
