//! Ordinary binary curves `y^2 + xy = x^3 + a2 x^2 + a6` in affine
//! coordinates. Only used to produce ground-truth point tuples.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::fieldalg::{FieldElement, FieldSpec};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CurveParams {
    a2: FieldElement,
    a6: FieldElement,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Point {
    Infinity,
    Affine { x: FieldElement, y: FieldElement },
}

impl Point {
    pub fn x(&self) -> Option<FieldElement> {
        match self {
            Point::Infinity => None,
            Point::Affine { x, .. } => Some(*x),
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => write!(f, "inf"),
            Point::Affine { x, y } => write!(f, "({x},{y})"),
        }
    }
}

impl CurveParams {
    pub fn new(a2: FieldElement, a6: FieldElement) -> Result<Self> {
        if a2.spec() != a6.spec() {
            return Err(Error::FieldMismatch(a2.spec().to_string(), a6.spec().to_string()));
        }
        if a6.is_zero() {
            return Err(Error::ZeroA6);
        }
        Ok(Self { a2, a6 })
    }

    /// Uniform `a2`, uniform nonzero `a6`.
    pub fn random<R: Rng + ?Sized>(spec: FieldSpec, rng: &mut R) -> Self {
        let a2 = spec.element(rng.gen::<u64>() & spec.mask()).expect("masked");
        let a6 = loop {
            let v = rng.gen::<u64>() & spec.mask();
            if v != 0 {
                break spec.element(v).expect("masked");
            }
        };
        Self { a2, a6 }
    }

    pub fn a2(&self) -> FieldElement {
        self.a2
    }

    pub fn a6(&self) -> FieldElement {
        self.a6
    }

    pub fn spec(&self) -> FieldSpec {
        self.a2.spec()
    }

    pub fn contains(&self, p: &Point) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine { x, y } => {
                if x.spec() != self.spec() || y.spec() != self.spec() {
                    return false;
                }
                let f = self.spec();
                let (x, y) = (x.value(), y.value());
                let x2 = f.square_raw(x);
                let lhs = f.square_raw(y) ^ f.mul_raw(x, y);
                let rhs = f.mul_raw(x2, x) ^ f.mul_raw(self.a2.value(), x2) ^ self.a6.value();
                lhs == rhs
            }
        }
    }

    pub fn point(&self, x: FieldElement, y: FieldElement) -> Result<Point> {
        let p = Point::Affine { x, y };
        if !self.contains(&p) {
            return Err(Error::PointNotOnCurve);
        }
        Ok(p)
    }

    /// `-(x, y) = (x, x + y)`.
    pub fn neg(&self, p: &Point) -> Point {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::Affine { x: *x, y: x.add(y).expect("same field") },
        }
    }

    /// Chord-and-tangent group law.
    pub fn add(&self, p: &Point, q: &Point) -> Result<Point> {
        if !self.contains(p) || !self.contains(q) {
            return Err(Error::PointNotOnCurve);
        }
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Infinity, _) => return Ok(*q),
            (_, Point::Infinity) => return Ok(*p),
            (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => {
                (x1.value(), y1.value(), x2.value(), y2.value())
            }
        };
        let f = self.spec();
        let a2 = self.a2.value();
        let (x3, y3) = if x1 != x2 {
            let lambda = f.mul_raw(y1 ^ y2, f.inv_raw(x1 ^ x2).expect("x1 != x2"));
            let x3 = f.square_raw(lambda) ^ lambda ^ x1 ^ x2 ^ a2;
            let y3 = f.mul_raw(lambda, x1 ^ x3) ^ x3 ^ y1;
            (x3, y3)
        } else if y2 != y1 || x1 == 0 {
            // q = -p, or doubling a 2-torsion point.
            return Ok(Point::Infinity);
        } else {
            let lambda = x1 ^ f.mul_raw(y1, f.inv_raw(x1).expect("x1 != 0"));
            let x3 = f.square_raw(lambda) ^ lambda ^ a2;
            let y3 = f.square_raw(x1) ^ f.mul_raw(lambda ^ 1, x3);
            (x3, y3)
        };
        Ok(Point::Affine { x: f.element(x3)?, y: f.element(y3)? })
    }

    /// Uniform affine point with `x != 0`: draw `x` until
    /// `t^2 + t = (x^3 + a2 x^2 + a6) / x^2` is solvable, then `y = x t`
    /// with a random choice between the two roots.
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        let f = self.spec();
        loop {
            let x = rng.gen::<u64>() & f.mask();
            if x == 0 {
                continue;
            }
            let x2 = f.square_raw(x);
            let rhs = f.mul_raw(x2, x) ^ f.mul_raw(self.a2.value(), x2) ^ self.a6.value();
            let a = f.mul_raw(rhs, f.inv_raw(x2).expect("x != 0"));
            let Some(mut t) = f.artin_schreier_raw(a) else {
                continue;
            };
            if rng.gen::<bool>() {
                t ^= 1;
            }
            let y = f.mul_raw(x, t);
            let p = Point::Affine { x: f.element(x).expect("masked"), y: f.element(y).expect("masked") };
            debug_assert!(self.contains(&p));
            return p;
        }
    }

    /// `m1` affine points summing to infinity: the first `m1 - 1` random,
    /// the last the negated partial sum. Resamples whenever a partial sum
    /// hits infinity or a point has `x = 0`.
    pub fn sum_zero_tuple<R: Rng + ?Sized>(&self, m1: usize, rng: &mut R) -> Result<Vec<Point>> {
        if m1 < 2 {
            return Err(Error::InvalidParameter(format!("sum-zero tuple needs at least 2 points, got {m1}")));
        }
        loop {
            let pts: Vec<Point> = (0..m1 - 1).map(|_| self.random_point(rng)).collect();
            let mut sum = Point::Infinity;
            for p in &pts {
                sum = self.add(&sum, p)?;
            }
            let last = self.neg(&sum);
            if last.x().is_none_or(|x| x.is_zero()) {
                continue;
            }
            let mut out = pts;
            out.push(last);
            return Ok(out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    fn curve(n: u32, seed: u64) -> (CurveParams, ChaCha8Rng) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = CurveParams::random(FieldSpec::default_for(n).unwrap(), &mut rng);
        (c, rng)
    }

    #[test]
    fn zero_a6_rejected() {
        let f = FieldSpec::default_for(5).unwrap();
        assert_eq!(CurveParams::new(f.one(), f.zero()), Err(Error::ZeroA6));
    }

    #[test]
    fn identity_and_inverse() {
        let (e, mut rng) = curve(13, 41);
        for _ in 0..100 {
            let p = e.random_point(&mut rng);
            assert!(e.contains(&p));
            assert_eq!(e.add(&p, &Point::Infinity).unwrap(), p);
            assert_eq!(e.add(&Point::Infinity, &p).unwrap(), p);
            let np = e.neg(&p);
            assert_eq!(np.x(), p.x());
            assert_eq!(e.add(&p, &np).unwrap(), Point::Infinity);
        }
    }

    #[test]
    fn group_axioms_sampled() {
        for (n, seed) in [(5u32, 42u64), (13, 43), (17, 44)] {
            let (e, mut rng) = curve(n, seed);
            for _ in 0..1000 {
                let p = e.random_point(&mut rng);
                let q = e.random_point(&mut rng);
                let r = e.random_point(&mut rng);
                let pq = e.add(&p, &q).unwrap();
                assert!(e.contains(&pq));
                assert_eq!(pq, e.add(&q, &p).unwrap());
                let lhs = e.add(&pq, &r).unwrap();
                let rhs = e.add(&p, &e.add(&q, &r).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
                // Doubling agrees with p + p via associativity: (p+p)+q = p+(p+q).
                let dbl = e.add(&p, &p).unwrap();
                assert_eq!(e.add(&dbl, &q).unwrap(), e.add(&p, &e.add(&p, &q).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn off_curve_rejected() {
        let (e, _) = curve(7, 45);
        let f = e.spec();
        let bad = (1..128u64)
            .flat_map(|x| (0..128u64).map(move |y| (x, y)))
            .map(|(x, y)| Point::Affine { x: f.element(x).unwrap(), y: f.element(y).unwrap() })
            .find(|p| !e.contains(p))
            .unwrap();
        assert_eq!(e.add(&bad, &Point::Infinity), Err(Error::PointNotOnCurve));
        assert_eq!(e.point(bad.x().unwrap(), bad_y(&bad)), Err(Error::PointNotOnCurve));
    }

    fn bad_y(p: &Point) -> FieldElement {
        match p {
            Point::Affine { y, .. } => *y,
            Point::Infinity => unreachable!(),
        }
    }

    #[test]
    fn sampled_x_values_cover_curve() {
        let (e, mut rng) = curve(5, 46);
        let f = e.spec();
        // Exhaustive enumeration of affine points.
        let mut affine_nonzero_x = 0;
        for x in 0..32u64 {
            for y in 0..32u64 {
                let p = Point::Affine { x: f.element(x).unwrap(), y: f.element(y).unwrap() };
                if e.contains(&p) && x != 0 {
                    affine_nonzero_x += 1;
                }
            }
        }
        let xs: HashSet<u64> = (0..10_000).map(|_| e.random_point(&mut rng).x().unwrap().value()).collect();
        assert_eq!(xs.len() * 2, affine_nonzero_x);
    }

    #[test]
    fn seed_determinism() {
        let (e, _) = curve(13, 47);
        let a = e.random_point(&mut ChaCha8Rng::seed_from_u64(9));
        let b = e.random_point(&mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
    }

    #[test]
    fn sum_zero_tuples() {
        let (e, mut rng) = curve(13, 48);
        for m1 in 2..=5 {
            for _ in 0..20 {
                let t = e.sum_zero_tuple(m1, &mut rng).unwrap();
                assert_eq!(t.len(), m1);
                let total = t.iter().try_fold(Point::Infinity, |acc, p| e.add(&acc, p)).unwrap();
                assert!(total.is_infinity());
                if m1 == 2 {
                    assert_eq!(t[0].x(), t[1].x());
                }
            }
        }
        assert!(e.sum_zero_tuple(1, &mut rng).is_err());
    }

    #[test]
    fn text_form() {
        let (e, mut rng) = curve(5, 49);
        assert_eq!(Point::Infinity.to_string(), "inf");
        let p = e.random_point(&mut rng);
        let s = p.to_string();
        assert!(s.starts_with("(0x") && s.contains(",0x") && s.ends_with(')'));
    }
}
