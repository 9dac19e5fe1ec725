//! Picard lattice of the surface X, the blow-up of P¹×P¹ at (0,0) and
//! (∞,∞), and the hexagon of boundary curves.

use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

/// A class `a·ℓh + b·ℓv + c·e1 + d·e2`. Here `ℓh` is the class of a curve
/// `{η = const}` and `ℓv` that of `{ξ = const}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct DivisorClass {
    pub lh: i64,
    pub lv: i64,
    pub e1: i64,
    pub e2: i64,
}

impl DivisorClass {
    pub const fn new(lh: i64, lv: i64, e1: i64, e2: i64) -> Self {
        DivisorClass { lh, lv, e1, e2 }
    }

    pub const ZERO: DivisorClass = DivisorClass::new(0, 0, 0, 0);
    pub const LH: DivisorClass = DivisorClass::new(1, 0, 0, 0);
    pub const LV: DivisorClass = DivisorClass::new(0, 1, 0, 0);
    pub const E1: DivisorClass = DivisorClass::new(0, 0, 1, 0);
    pub const E2: DivisorClass = DivisorClass::new(0, 0, 0, 1);

    /// Intersection pairing.
    pub fn dot(&self, o: &DivisorClass) -> i64 {
        self.lh * o.lv + self.lv * o.lh - self.e1 * o.e1 - self.e2 * o.e2
    }

    pub fn self_intersection(&self) -> i64 {
        self.dot(self)
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::ZERO
    }
}

impl Add for DivisorClass {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        DivisorClass::new(self.lh + o.lh, self.lv + o.lv, self.e1 + o.e1, self.e2 + o.e2)
    }
}

impl Sub for DivisorClass {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for DivisorClass {
    type Output = Self;
    fn neg(self) -> Self {
        DivisorClass::new(-self.lh, -self.lv, -self.e1, -self.e2)
    }
}

impl Mul<DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, d: DivisorClass) -> DivisorClass {
        DivisorClass::new(self * d.lh, self * d.lv, self * d.e1, self * d.e2)
    }
}

/// The six boundary curves in cyclic order around the hexagon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Curve {
    DPsi,
    DXi,
    C0,
    FPsi,
    FXi,
    CInf,
}

impl Curve {
    pub const ALL: [Curve; 6] = [Curve::DPsi, Curve::DXi, Curve::C0, Curve::FPsi, Curve::FXi, Curve::CInf];

    pub fn class(self) -> DivisorClass {
        use DivisorClass as D;
        match self {
            Curve::DPsi => D::LH - D::E1,
            Curve::DXi => D::E1,
            Curve::C0 => D::LV - D::E1,
            Curve::FPsi => D::LH - D::E2,
            Curve::FXi => D::E2,
            Curve::CInf => D::LV - D::E2,
        }
    }

    pub fn index(self) -> usize {
        Curve::ALL.iter().position(|&c| c == self).unwrap()
    }

    pub fn name(self) -> &'static str {
        match self {
            Curve::DPsi => "D_psi",
            Curve::DXi => "D_xi",
            Curve::C0 => "C_0",
            Curve::FPsi => "F_psi",
            Curve::FXi => "F_xi",
            Curve::CInf => "C_inf",
        }
    }
}

/// An integer combination of the six boundary curves. Block twists are
/// stored this way because restricting to a line needs to know where the
/// twist sits, not just its class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct BoundaryDivisor(pub [i64; 6]);

impl BoundaryDivisor {
    pub const TRIVIAL: BoundaryDivisor = BoundaryDivisor([0; 6]);

    pub fn curve(c: Curve) -> Self {
        let mut a = [0; 6];
        a[c.index()] = 1;
        BoundaryDivisor(a)
    }

    pub fn coeff(&self, c: Curve) -> i64 {
        self.0[c.index()]
    }

    /// `F = F_psi + F_xi`, the divisor `{η = ∞}`.
    pub fn f() -> Self {
        Self::curve(Curve::FPsi) + Self::curve(Curve::FXi)
    }

    /// The twist `O(i, j)` of P¹×P¹ pulled back to X, with `i` the η-degree
    /// and `j` the ξ-degree.
    pub fn o(i: i64, j: i64) -> Self {
        i * Self::f() + j * (Self::curve(Curve::CInf) + Self::curve(Curve::FXi))
    }

    pub fn class(&self) -> DivisorClass {
        Curve::ALL.iter().fold(DivisorClass::ZERO, |acc, &c| acc + self.coeff(c) * c.class())
    }
}

impl Add for BoundaryDivisor {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut a = self.0;
        for (x, y) in a.iter_mut().zip(o.0) {
            *x += y;
        }
        BoundaryDivisor(a)
    }
}

impl Sub for BoundaryDivisor {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for BoundaryDivisor {
    type Output = Self;
    fn neg(self) -> Self {
        BoundaryDivisor(self.0.map(|x| -x))
    }
}

impl Mul<BoundaryDivisor> for i64 {
    type Output = BoundaryDivisor;
    fn mul(self, d: BoundaryDivisor) -> BoundaryDivisor {
        BoundaryDivisor(d.0.map(|x| self * x))
    }
}

/// Divisors of the coordinate functions.
pub fn div_eta() -> BoundaryDivisor {
    BoundaryDivisor::curve(Curve::DPsi) + BoundaryDivisor::curve(Curve::DXi) - BoundaryDivisor::f()
}

pub fn div_xi() -> BoundaryDivisor {
    BoundaryDivisor::curve(Curve::DXi) - BoundaryDivisor::curve(Curve::FXi) + BoundaryDivisor::curve(Curve::C0)
        - BoundaryDivisor::curve(Curve::CInf)
}

pub fn div_psi() -> BoundaryDivisor {
    BoundaryDivisor::curve(Curve::DPsi) - BoundaryDivisor::curve(Curve::FPsi) - BoundaryDivisor::curve(Curve::C0)
        + BoundaryDivisor::curve(Curve::CInf)
}
