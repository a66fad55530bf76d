use std::fmt;
use std::ops::{AddAssign, Mul};

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

/// Non-negative counter that stays in a machine word until it overflows.
#[derive(Clone, PartialEq, Eq)]
pub enum Nat {
    Small(u64),
    Big(BigUint),
}

impl Nat {
    pub const ZERO: Nat = Nat::Small(0);
    pub const ONE: Nat = Nat::Small(1);

    pub fn is_zero(&self) -> bool {
        match self {
            Nat::Small(v) => *v == 0,
            Nat::Big(b) => b.is_zero(),
        }
    }

    pub fn to_biguint(&self) -> BigUint {
        match self {
            Nat::Small(v) => BigUint::from(*v),
            Nat::Big(b) => b.clone(),
        }
    }

    pub fn to_bigint(&self) -> BigInt {
        BigInt::from(self.to_biguint())
    }

    pub fn to_u64(&self) -> Option<u64> {
        match self {
            Nat::Small(v) => Some(*v),
            Nat::Big(b) => b.to_u64(),
        }
    }

    fn normalize(b: BigUint) -> Nat {
        match b.to_u64() {
            Some(v) => Nat::Small(v),
            None => Nat::Big(b),
        }
    }
}

impl Default for Nat {
    fn default() -> Self {
        Nat::ZERO
    }
}

impl From<u64> for Nat {
    fn from(v: u64) -> Self {
        Nat::Small(v)
    }
}

impl From<BigUint> for Nat {
    fn from(b: BigUint) -> Self {
        Nat::normalize(b)
    }
}

impl AddAssign<&Nat> for Nat {
    fn add_assign(&mut self, rhs: &Nat) {
        if let (Nat::Small(a), Nat::Small(b)) = (&*self, rhs) {
            if let Some(s) = a.checked_add(*b) {
                *self = Nat::Small(s);
                return;
            }
        }
        let sum = self.to_biguint() + rhs.to_biguint();
        *self = Nat::Big(sum);
    }
}

impl AddAssign<u64> for Nat {
    fn add_assign(&mut self, rhs: u64) {
        *self += &Nat::Small(rhs);
    }
}

impl Mul<&Nat> for &Nat {
    type Output = Nat;

    fn mul(self, rhs: &Nat) -> Nat {
        if let (Nat::Small(a), Nat::Small(b)) = (self, rhs) {
            if let Some(p) = a.checked_mul(*b) {
                return Nat::Small(p);
            }
        }
        Nat::normalize(self.to_biguint() * rhs.to_biguint())
    }
}

impl fmt::Debug for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nat::Small(v) => write!(f, "{v}"),
            Nat::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Display for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn promotes_on_overflow() {
        let mut n = Nat::Small(u64::MAX);
        n += 1;
        assert_eq!(n.to_biguint(), BigUint::from(u64::MAX) + 1u32);
        let sq = &Nat::Small(u64::MAX) * &Nat::Small(2);
        assert_eq!(sq.to_biguint(), BigUint::from(u64::MAX) * 2u32);
        let back = Nat::from(BigUint::from(7u32));
        assert_eq!(back, Nat::Small(7));
    }
}
