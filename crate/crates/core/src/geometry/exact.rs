//! Exact arithmetic in Q(sqrt 3) for certifying distance bounds on polygonal
//! boundaries. Koch vertices live in this field; dyadic cube corners are
//! rational.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// `a + b * sqrt(3)` with rational `a`, `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Qs3 {
    pub a: BigRational,
    pub b: BigRational,
}

impl Qs3 {
    pub fn zero() -> Self {
        Self::rational(BigRational::zero())
    }

    pub fn rational(a: BigRational) -> Self {
        Self {
            a,
            b: BigRational::zero(),
        }
    }

    pub fn int(v: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn sqrt3() -> Self {
        Self {
            a: BigRational::zero(),
            b: BigRational::from_integer(BigInt::from(1)),
        }
    }

    /// Exact value of a finite double.
    pub fn from_f64(v: f64) -> Self {
        Self::rational(BigRational::from_float(v).expect("finite value"))
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * 3f64.sqrt()
    }

    pub fn signum(&self) -> i32 {
        let sa = sign(&self.a);
        let sb = sign(&self.b);
        if sa >= 0 && sb >= 0 {
            return (sa + sb).signum();
        }
        if sa <= 0 && sb <= 0 {
            return -((-sa - sb).signum());
        }
        // opposite signs: compare a^2 with 3 b^2
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * BigRational::from_integer(BigInt::from(3));
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        match (self - other).signum() {
            s if s < 0 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

fn sign(v: &BigRational) -> i32 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

impl Add for &Qs3 {
    type Output = Qs3;
    fn add(self, o: &Qs3) -> Qs3 {
        Qs3 {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
        }
    }
}

impl Sub for &Qs3 {
    type Output = Qs3;
    fn sub(self, o: &Qs3) -> Qs3 {
        Qs3 {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
        }
    }
}

impl Mul for &Qs3 {
    type Output = Qs3;
    fn mul(self, o: &Qs3) -> Qs3 {
        let three = BigRational::from_integer(BigInt::from(3));
        Qs3 {
            a: &self.a * &o.a + &self.b * &o.b * three,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }
}

impl Neg for &Qs3 {
    type Output = Qs3;
    fn neg(self) -> Qs3 {
        Qs3 {
            a: -&self.a,
            b: -&self.b,
        }
    }
}

pub type ExactPoint = [Qs3; 2];

#[derive(Clone, Debug)]
pub struct ExactSegment {
    pub a: ExactPoint,
    pub b: ExactPoint,
}

fn dot(u: &ExactPoint, v: &ExactPoint) -> Qs3 {
    &(&u[0] * &v[0]) + &(&u[1] * &v[1])
}

fn diff(u: &ExactPoint, v: &ExactPoint) -> ExactPoint {
    [&u[0] - &v[0], &u[1] - &v[1]]
}

fn cross(u: &ExactPoint, v: &ExactPoint) -> Qs3 {
    &(&u[0] * &v[1]) - &(&u[1] * &v[0])
}

/// Squared distance from `p` to the segment, as a fraction `num / den` with
/// `den > 0`.
fn point_segment_sq(p: &ExactPoint, s: &ExactSegment) -> (Qs3, Qs3) {
    let d = diff(&s.b, &s.a);
    let w = diff(p, &s.a);
    let t = dot(&w, &d);
    let len = dot(&d, &d);
    if t.signum() <= 0 {
        return (dot(&w, &w), Qs3::int(1));
    }
    if t.cmp_exact(&len) != Ordering::Less {
        let wb = diff(p, &s.b);
        return (dot(&wb, &wb), Qs3::int(1));
    }
    let c = cross(&w, &d);
    (&c * &c, len)
}

/// Closed axis-aligned square `[lo, hi]` with rational corners.
#[derive(Clone, Debug)]
pub struct ExactBox {
    pub lo: [Qs3; 2],
    pub hi: [Qs3; 2],
}

impl ExactBox {
    pub fn from_f64(lo: [f64; 2], hi: [f64; 2]) -> Self {
        Self {
            lo: [Qs3::from_f64(lo[0]), Qs3::from_f64(lo[1])],
            hi: [Qs3::from_f64(hi[0]), Qs3::from_f64(hi[1])],
        }
    }

    fn corners(&self) -> [ExactPoint; 4] {
        [
            [self.lo[0].clone(), self.lo[1].clone()],
            [self.hi[0].clone(), self.lo[1].clone()],
            [self.hi[0].clone(), self.hi[1].clone()],
            [self.lo[0].clone(), self.hi[1].clone()],
        ]
    }

    fn point_sq(&self, p: &ExactPoint) -> Qs3 {
        let mut s = Qs3::zero();
        for i in 0..2 {
            let below = &self.lo[i] - &p[i];
            let above = &p[i] - &self.hi[i];
            if below.signum() > 0 {
                s = &s + &(&below * &below);
            } else if above.signum() > 0 {
                s = &s + &(&above * &above);
            }
        }
        s
    }

    /// Separating-axis test between the closed box and the closed segment.
    pub fn meets_segment(&self, s: &ExactSegment) -> bool {
        for i in 0..2 {
            let (lo, hi) = if s.a[i].cmp_exact(&s.b[i]) == Ordering::Less {
                (&s.a[i], &s.b[i])
            } else {
                (&s.b[i], &s.a[i])
            };
            if hi.cmp_exact(&self.lo[i]) == Ordering::Less || lo.cmp_exact(&self.hi[i]) == Ordering::Greater {
                return false;
            }
        }
        let d = diff(&s.b, &s.a);
        let mut pos = false;
        let mut neg = false;
        for c in self.corners() {
            match cross(&d, &diff(&c, &s.a)).signum() {
                1 => pos = true,
                -1 => neg = true,
                _ => return true,
            }
        }
        pos && neg
    }

    /// Compares the squared distance between the box and the segment with
    /// the rational `bound`.
    pub fn cmp_sq_distance(&self, s: &ExactSegment, bound: &Qs3) -> Ordering {
        if self.meets_segment(s) {
            return Qs3::zero().cmp_exact(bound);
        }
        let mut best = Ordering::Greater;
        for c in self.corners() {
            let (num, den) = point_segment_sq(&c, s);
            let o = num.cmp_exact(&(bound * &den));
            best = best.min(o);
        }
        for e in [&s.a, &s.b] {
            best = best.min(self.point_sq(e).cmp_exact(bound));
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_of_mixed_terms() {
        // 2 - sqrt3 > 0, 1 - sqrt3 < 0, 7 - 4 sqrt3 > 0 (tiny)
        let two_minus = &Qs3::int(2) - &Qs3::sqrt3();
        assert_eq!(two_minus.signum(), 1);
        let one_minus = &Qs3::int(1) - &Qs3::sqrt3();
        assert_eq!(one_minus.signum(), -1);
        let tiny = &Qs3::int(7) - &(&Qs3::int(4) * &Qs3::sqrt3());
        assert_eq!(tiny.signum(), 1);
        let sq = &Qs3::sqrt3() * &Qs3::sqrt3();
        assert_eq!(sq, Qs3::int(3));
    }

    #[test]
    fn box_segment_distance() {
        let b = ExactBox::from_f64([0.0, 0.0], [1.0, 1.0]);
        let s = ExactSegment {
            a: [Qs3::int(2), Qs3::int(-5)],
            b: [Qs3::int(2), Qs3::int(5)],
        };
        assert_eq!(b.cmp_sq_distance(&s, &Qs3::int(1)), Ordering::Equal);
        assert_eq!(b.cmp_sq_distance(&s, &Qs3::ratio(1, 2)), Ordering::Greater);
        let crossing = ExactSegment {
            a: [Qs3::ratio(-1, 2), Qs3::ratio(1, 2)],
            b: [Qs3::ratio(3, 2), Qs3::ratio(1, 2)],
        };
        assert!(b.meets_segment(&crossing));
        // slanted segment x + y = 3: distance from corner (1,1) is 1/sqrt2
        let slant = ExactSegment {
            a: [Qs3::int(3), Qs3::int(0)],
            b: [Qs3::int(0), Qs3::int(3)],
        };
        assert_eq!(b.cmp_sq_distance(&slant, &Qs3::ratio(1, 2)), Ordering::Equal);
    }
}
