use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::exactnum::{rat, QField};

use super::ComplexError;

/// Angles are stored in units of π/12; a full turn is 24 units.
pub const FULL_TURN_UNITS: u32 = 24;

/// The `(n₁, n₂, n₃)` disk-condition, `nᵢ` attached to vertex type `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DiskCondition {
    pub n: [u32; 3],
}

/// The three Euclidean base conditions, up to permutation of types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaseCondition {
    B666,
    B488,
    B4612,
}

impl BaseCondition {
    pub fn sorted_triple(self) -> [u32; 3] {
        match self {
            BaseCondition::B666 => [6, 6, 6],
            BaseCondition::B488 => [4, 8, 8],
            BaseCondition::B4612 => [4, 6, 12],
        }
    }

    pub const ALL: [BaseCondition; 3] = [BaseCondition::B666, BaseCondition::B488, BaseCondition::B4612];
}

impl fmt::Display for BaseCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.sorted_triple();
        write!(f, "({a},{b},{c})")
    }
}

/// Outcome of checking `1/n₁ + 1/n₂ + 1/n₃ ≤ 1/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiskVerdict {
    /// The triple is a base condition (Euclidean faces); geometry supported.
    Base(BaseCondition),
    /// Accepted with strict inequality; it dominates the given base
    /// condition but has hyperbolic faces, which are not modelled.
    Dominates(BaseCondition),
    /// Accepted, but no base condition is dominated (some `nᵢ = 3`).
    AcceptedNoBase,
    /// The inequality fails.
    Rejected,
}

impl DiskVerdict {
    pub fn is_accepted(self) -> bool {
        !matches!(self, DiskVerdict::Rejected)
    }

    /// Stable numeric code: 0 base, 1 rejected, 10/11 accepted but
    /// outside the modelled geometry.
    pub fn code(self) -> u8 {
        match self {
            DiskVerdict::Base(_) => 0,
            DiskVerdict::Rejected => 1,
            DiskVerdict::Dominates(_) => 10,
            DiskVerdict::AcceptedNoBase => 11,
        }
    }
}

impl DiskCondition {
    pub fn new(n1: u32, n2: u32, n3: u32) -> Self {
        DiskCondition { n: [n1, n2, n3] }
    }

    /// `n` for vertices of type `t ∈ {1,2,3}`.
    pub fn n_of(&self, t: u8) -> u32 {
        self.n[(t - 1) as usize]
    }

    pub fn reciprocal_sum(&self) -> BigRational {
        self.n.iter().map(|&n| rat(1, n as i64)).sum()
    }

    pub fn base(&self) -> Option<BaseCondition> {
        let mut s = self.n;
        s.sort_unstable();
        BaseCondition::ALL.into_iter().find(|b| b.sorted_triple() == s)
    }
}

impl fmt::Display for DiskCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.n[0], self.n[1], self.n[2])
    }
}

/// Checks the disk-condition inequality for a signed triple.
pub fn validate_disk_condition(n: [i64; 3]) -> Result<DiskVerdict, ComplexError> {
    if n.iter().any(|&x| x <= 0) {
        return Err(ComplexError::NonPositiveEntry(n));
    }
    let dc = DiskCondition::new(n[0] as u32, n[1] as u32, n[2] as u32);
    if dc.reciprocal_sum() > rat(1, 2) {
        return Ok(DiskVerdict::Rejected);
    }
    if let Some(b) = dc.base() {
        return Ok(DiskVerdict::Base(b));
    }
    let mut sorted = dc.n;
    sorted.sort_unstable();
    // componentwise domination of some sorted base triple
    let dominated = BaseCondition::ALL
        .into_iter()
        .find(|b| b.sorted_triple().iter().zip(sorted.iter()).all(|(m, x)| x >= m));
    Ok(match dominated {
        Some(b) => DiskVerdict::Dominates(b),
        None => DiskVerdict::AcceptedNoBase,
    })
}

/// Exact Euclidean face for a base condition, indexed by vertex type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleShape {
    /// Angle at the type-`i` vertex in units of π/12.
    pub angle_units: [u32; 3],
    /// Squared length of the side opposite the type-`i` vertex.
    pub side_sq: [QField; 3],
    pub area: QField,
}

fn sin_sq_units(u: u32) -> BigRational {
    match u {
        2 => rat(1, 4),
        3 => rat(1, 2),
        4 => rat(3, 4),
        6 => rat(1, 1),
        _ => unreachable!("non-base angle {u}·π/12"),
    }
}

/// Face metric of a base condition, shortest side scaled to length 1.
pub fn triangle_shape(dc: &DiskCondition) -> Result<TriangleShape, ComplexError> {
    dc.base().ok_or(ComplexError::NotBase(*dc))?;
    let angle_units = dc.n.map(|n| FULL_TURN_UNITS / n);
    let sins = angle_units.map(sin_sq_units);
    let min = sins.iter().min().unwrap().clone();
    let side_sq = sins.map(|s| QField::from_rational(s / &min));
    // 16·A² = 4a²b² − (a² + b² − c²)²
    let (a, b, c) = (&side_sq[0], &side_sq[1], &side_sq[2]);
    let t = a + b - c;
    let sixteen_area_sq = QField::from_int(4) * a * b - t.square();
    let area = sixteen_area_sq
        .scale(&rat(1, 16))
        .sqrt_exact()
        .expect("base triangles have area in the field");
    Ok(TriangleShape {
        angle_units,
        side_sq,
        area,
    })
}

impl TriangleShape {
    /// Squared length of the edge joining vertices of types `s` and `t`.
    pub fn edge_sq(&self, s: u8, t: u8) -> &QField {
        debug_assert!(s != t);
        let opposite = 6 - s - t;
        &self.side_sq[(opposite - 1) as usize]
    }

    pub fn angle_sum_units(&self) -> u32 {
        self.angle_units.iter().sum()
    }

    /// Longest squared side length.
    pub fn max_side_sq(&self) -> &QField {
        self.side_sq.iter().max_by(|x, y| x.cmp_value(y)).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts() {
        assert_eq!(validate_disk_condition([6, 6, 6]).unwrap(), DiskVerdict::Base(BaseCondition::B666));
        assert_eq!(validate_disk_condition([3, 3, 3]).unwrap(), DiskVerdict::Rejected);
        assert_eq!(validate_disk_condition([12, 4, 6]).unwrap(), DiskVerdict::Base(BaseCondition::B4612));
        assert_eq!(validate_disk_condition([7, 7, 7]).unwrap(), DiskVerdict::Dominates(BaseCondition::B666));
        assert_eq!(validate_disk_condition([3, 13, 13]).unwrap(), DiskVerdict::AcceptedNoBase);
        assert!(validate_disk_condition([0, 6, 6]).is_err());
        assert!(validate_disk_condition([-4, 8, 8]).is_err());
    }

    #[test]
    fn shapes() {
        let s = triangle_shape(&DiskCondition::new(6, 6, 6)).unwrap();
        assert_eq!(s.side_sq, [QField::one(), QField::one(), QField::one()]);
        assert_eq!(s.area, QField::from_ratios((0, 1), (0, 1), (1, 4), (0, 1)));

        let s = triangle_shape(&DiskCondition::new(4, 8, 8)).unwrap();
        assert_eq!(s.side_sq, [QField::from_int(2), QField::one(), QField::one()]);
        assert_eq!(s.angle_sum_units(), 12);

        let s = triangle_shape(&DiskCondition::new(4, 6, 12)).unwrap();
        assert_eq!(s.side_sq, [QField::from_int(4), QField::from_int(3), QField::one()]);
        assert_eq!(s.edge_sq(2, 3), &QField::from_int(4));
        assert_eq!(s.edge_sq(1, 3), &QField::from_int(3));
        assert_eq!(s.edge_sq(1, 2), &QField::one());

        assert!(triangle_shape(&DiskCondition::new(7, 7, 7)).is_err());
    }
}
