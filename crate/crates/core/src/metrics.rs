//! Closed-form lengths of shortest and longest complete developments.
//!
//! `m`/`h` measure shortest developments, `n`/`g` longest ones. Each pair is
//! the same recursion with the clamp `min(_, 1)` replaced by `max(_, 1)`,
//! so both are implemented once, parameterised by [`Extent`].

use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::term::{Mark, Term, VarName};

/// Exact unbounded natural number.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Count(BigUint);

impl Count {
    pub fn zero() -> Self {
        Count(BigUint::zero())
    }

    pub fn one() -> Self {
        Count(BigUint::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    /// `self - 1`, or `None` at zero.
    pub fn pred(&self) -> Option<Count> {
        (!self.is_zero()).then(|| Count(&self.0 - 1u32))
    }
}

impl From<u64> for Count {
    fn from(v: u64) -> Self {
        Count(BigUint::from(v))
    }
}

impl From<usize> for Count {
    fn from(v: usize) -> Self {
        Count(BigUint::from(v))
    }
}

impl From<BigUint> for Count {
    fn from(v: BigUint) -> Self {
        Count(v)
    }
}

impl PartialEq<u64> for Count {
    fn eq(&self, other: &u64) -> bool {
        self.to_u64() == Some(*other)
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Add for Count {
    type Output = Count;
    fn add(self, rhs: Count) -> Count {
        Count(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a Count> for &'a Count {
    type Output = Count;
    fn add(self, rhs: &Count) -> Count {
        Count(&self.0 + &rhs.0)
    }
}

impl Mul for Count {
    type Output = Count;
    fn mul(self, rhs: Count) -> Count {
        Count(self.0 * rhs.0)
    }
}

impl<'a> Mul<&'a Count> for &'a Count {
    type Output = Count;
    fn mul(self, rhs: &Count) -> Count {
        Count(&self.0 * &rhs.0)
    }
}

/// Which development length is measured.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Extent {
    Shortest,
    Longest,
}

impl Extent {
    /// `min(c, 1)` for shortest developments, `max(c, 1)` for longest.
    pub fn clamp(self, c: Count) -> Count {
        match self {
            Extent::Shortest if c.is_zero() => c,
            Extent::Shortest => Count::one(),
            Extent::Longest if c.is_zero() => Count::one(),
            Extent::Longest => c,
        }
    }
}

/// `m_x` for [`Extent::Shortest`], `n_x` for [`Extent::Longest`]: how many
/// copies of a term substituted for `x` get reduced.
pub fn multiplicity<L: Mark>(x: &VarName, m: &Term<L>, extent: Extent) -> Count {
    match m {
        Term::Var(v) => {
            if v == x {
                Count::one()
            } else {
                Count::zero()
            }
        }
        // A binder equal to x shadows it, which is the same as renaming the
        // binder apart and finding no occurrence of x in the body.
        Term::Lam { binder, body } => {
            if binder == x {
                Count::zero()
            } else {
                multiplicity(x, body, extent)
            }
        }
        // App heads are never marked lambdas, so no side condition applies.
        Term::App { fun, arg } => multiplicity(x, fun, extent) + multiplicity(x, arg, extent),
        Term::Red {
            binder, body, arg, ..
        } => {
            let in_arg = multiplicity(x, arg, extent);
            let in_body = if binder == x {
                Count::zero()
            } else {
                multiplicity(x, body, extent)
            };
            if in_arg.is_zero() {
                return in_body;
            }
            let factor = extent.clamp(multiplicity(binder, body, extent));
            in_body + in_arg * factor
        }
    }
}

/// `h` for [`Extent::Shortest`], `g` for [`Extent::Longest`].
pub fn dev_length<L: Mark>(m: &Term<L>, extent: Extent) -> Count {
    match m {
        Term::Var(_) => Count::zero(),
        Term::Lam { body, .. } => dev_length(body, extent),
        Term::App { fun, arg } => dev_length(fun, extent) + dev_length(arg, extent),
        Term::Red {
            binder, body, arg, ..
        } => {
            let in_arg = dev_length(arg, extent);
            let arg_cost = if in_arg.is_zero() {
                in_arg
            } else {
                in_arg * extent.clamp(multiplicity(binder, body, extent))
            };
            dev_length(body, extent) + arg_cost + Count::one()
        }
    }
}

/// `m_x(M)`.
pub fn m<L: Mark>(x: &VarName, t: &Term<L>) -> Count {
    multiplicity(x, t, Extent::Shortest)
}

/// `n_x(M)`.
pub fn n<L: Mark>(x: &VarName, t: &Term<L>) -> Count {
    multiplicity(x, t, Extent::Longest)
}

/// Length of a shortest complete development.
pub fn h<L: Mark>(t: &Term<L>) -> Count {
    dev_length(t, Extent::Shortest)
}

/// Length of a longest complete development.
pub fn g<L: Mark>(t: &Term<L>) -> Count {
    dev_length(t, Extent::Longest)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Term {
        Term::var(s)
    }

    fn x() -> VarName {
        VarName::new("x")
    }

    fn erasing() -> Term {
        // (\*x. z) ((\*y. y) w)
        Term::red("x", v("z"), Term::red("y", v("y"), v("w")))
    }

    fn duplicating() -> Term {
        // (\*x. x x) ((\*y. y) w)
        Term::red(
            "x",
            Term::app(v("x"), v("x")),
            Term::red("y", v("y"), v("w")),
        )
    }

    #[test]
    fn m_examples() {
        assert_eq!(m(&x(), &v("x")), 1);
        assert_eq!(m(&x(), &Term::red("y", v("z"), v("x"))), 0);
        assert_eq!(m(&x(), &Term::app(v("x"), v("x"))), 2);
        assert_eq!(m(&x(), &Term::lam("y", Term::app(v("y"), v("w")))), 0);
    }

    #[test]
    fn m_respects_shadowing() {
        assert_eq!(m(&x(), &Term::lam("x", v("x"))), 0);
        // (\*x. x) x: only the argument occurrence is free
        assert_eq!(m(&x(), &Term::red("x", v("x"), v("x"))), 1);
        assert_eq!(n(&x(), &Term::red("x", v("x"), v("x"))), 1);
    }

    #[test]
    fn h_examples() {
        assert_eq!(h(&Term::lam("x", Term::app(v("x"), v("x")))), 0);
        assert_eq!(h(&erasing()), 1);
        assert_eq!(h(&duplicating()), 2);
    }

    #[test]
    fn n_examples() {
        assert_eq!(n(&x(), &v("x")), 1);
        assert_eq!(n(&x(), &Term::red("y", v("z"), v("x"))), 1);
        assert_eq!(n(&x(), &Term::lam("y", v("y"))), 0);
    }

    #[test]
    fn g_examples() {
        assert_eq!(g(&v("x")), 0);
        assert_eq!(g(&erasing()), 2);
        assert_eq!(g(&duplicating()), 3);
    }

    #[test]
    fn counts_do_not_overflow() {
        // (\*x. x x) applied k times around a single marked identity: the
        // duplicating heads nest inside arguments, so g grows like 2^k.
        let mut t = Term::red("y", v("y"), v("w"));
        for _ in 0..80 {
            t = Term::red("x", Term::app(v("x"), v("x")), t);
        }
        let big = g(&t);
        assert!(big.to_u64().is_none());
        assert_eq!(h(&t), 81);
    }

    #[test]
    fn clamp() {
        assert_eq!(Extent::Shortest.clamp(Count::from(0u64)), 0);
        assert_eq!(Extent::Shortest.clamp(Count::from(5u64)), 1);
        assert_eq!(Extent::Longest.clamp(Count::from(0u64)), 1);
        assert_eq!(Extent::Longest.clamp(Count::from(5u64)), 5);
    }
}
