use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::{is_distinguishing, random_colouring, Colouring, SeededRng};
use crate::error::Result;
use crate::exact::{self, biguint_str};
use crate::graph::Graph;
use crate::permgroup::{automorphism_group, motion};
use crate::Caps;

/// The value `coefficient * 2^(-motion/2)`, exact even for odd motion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfPowerBound {
    pub coefficient: BigUint,
    pub motion: usize,
}

impl HalfPowerBound {
    /// The bound as a rational when `motion` is even.
    pub fn exact(&self) -> Option<BigRational> {
        self.motion.is_multiple_of(2).then(|| {
            exact::from_biguint(&self.coefficient, &BigUint::one())
                * exact::pow_rational(2, -(self.motion as i64 / 2))
        })
    }

    // x <= c 2^(-m/2)  <=>  x^2 2^m <= c^2  for x >= 0.
    fn cmp_square(&self, x: &BigRational) -> std::cmp::Ordering {
        let lhs = x * x * BigRational::from_integer(BigInt::one() << self.motion);
        let c = BigInt::from(self.coefficient.clone());
        lhs.cmp(&BigRational::from_integer(&c * &c))
    }

    /// `x <= self`.
    pub fn dominates(&self, x: &BigRational) -> bool {
        x.is_negative() || self.cmp_square(x).is_le()
    }

    pub fn equals(&self, x: &BigRational) -> bool {
        !x.is_negative() && self.cmp_square(x).is_eq()
    }

    pub fn to_f64(&self) -> f64 {
        self.coefficient.to_f64().unwrap_or(f64::INFINITY) * (-(self.motion as f64) / 2.0).exp2()
    }
}

impl fmt::Display for HalfPowerBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact() {
            Some(r) => f.write_str(&exact::rational_to_string(&r)),
            None => write!(f, "{}*2^(-{}/2)", self.coefficient, self.motion),
        }
    }
}

impl Serialize for HalfPowerBound {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RsBoundReport {
    #[serde(with = "biguint_str")]
    pub group_order: BigUint,
    pub motion: Option<usize>,
    /// Union bound `(|Aut| - 1) 2^(-m/2)` on the probability that a random
    /// 2-colouring is not distinguishing.
    pub bound: HalfPowerBound,
    pub bound_approx: f64,
    /// Whether `2^(m/2) >= |Aut|`, which guarantees a distinguishing
    /// 2-colouring exists.
    pub applicable: bool,
    pub witness: Option<Colouring>,
    pub attempts: u64,
}

/// Motion-based bound for 2-colourings. When the premise holds, a
/// distinguishing colouring is searched for on streams `0..max_attempts` of
/// `seed`.
pub fn russel_sundaram_bound(
    g: &Graph,
    seed: u64,
    max_attempts: u64,
    caps: &Caps,
) -> Result<RsBoundReport> {
    let group = automorphism_group(g, None)?;
    let order = group.order();
    let m = motion(&group, caps.enumeration);
    let n = g.vertex_count();
    let Some(mval) = m.motion else {
        return Ok(RsBoundReport {
            group_order: order,
            motion: None,
            bound: HalfPowerBound {
                coefficient: BigUint::zero(),
                motion: 0,
            },
            bound_approx: 0.0,
            applicable: true,
            witness: Some(Colouring::constant(n, 2)),
            attempts: 0,
        });
    };
    let bound = HalfPowerBound {
        coefficient: &order - 1u32,
        motion: mval,
    };
    // 2^(m/2) >= |Aut|  <=>  2^m >= |Aut|^2
    let applicable = (BigUint::one() << mval) >= &order * &order;
    let mut witness = None;
    let mut attempts = 0;
    if applicable {
        let rng = SeededRng::new(seed, 0);
        while attempts < max_attempts {
            let c = random_colouring(g, 2, &mut rng.stream(attempts))?;
            attempts += 1;
            if is_distinguishing(g, &c)?.distinguishing {
                witness = Some(c);
                break;
            }
        }
    }
    Ok(RsBoundReport {
        group_order: order,
        motion: Some(mval),
        bound_approx: bound.to_f64(),
        bound,
        applicable,
        witness,
        attempts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use crate::graph::named::*;

    #[test]
    fn examples() {
        let caps = Caps::default();
        let p4 = russel_sundaram_bound(&path(4), 1, 100, &caps).unwrap();
        assert_eq!(p4.bound.exact(), Some(ratio(1, 4)));
        assert!(p4.applicable);
        assert!(p4.witness.is_some());

        let c6 = russel_sundaram_bound(&cycle(6), 1, 100, &caps).unwrap();
        assert_eq!(c6.bound.to_string(), "11/4");
        assert!(!c6.applicable);
        assert!(c6.witness.is_none());

        let k2 = russel_sundaram_bound(&path(2), 1, 100, &caps).unwrap();
        assert_eq!(k2.bound.exact(), Some(ratio(1, 2)));
        // 2^(2/2) = |Aut K2|.
        assert!(k2.applicable);

        let k1 = russel_sundaram_bound(&path(1), 1, 100, &caps).unwrap();
        assert_eq!(k1.motion, None);
        assert_eq!(k1.bound.to_string(), "0");
    }

    #[test]
    fn odd_motion_comparisons() {
        let b = HalfPowerBound {
            coefficient: BigUint::from(2u32),
            motion: 3,
        };
        // 2 * 2^(-3/2) = 2^(-1/2) ~ 0.7071
        assert!(b.dominates(&ratio(7, 10)));
        assert!(!b.dominates(&ratio(71, 100)));
        assert!(!b.equals(&ratio(7, 10)));
        assert_eq!(b.to_string(), "2*2^(-3/2)");
        assert!((b.to_f64() - 0.5f64.sqrt()).abs() < 1e-12);
    }
}
