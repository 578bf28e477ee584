//! The rational map `F(z, p) = ((1 − 2z/p)², (1 − 2/p)²)` and backward orbits of its
//! second coordinate.

use num_complex::Complex;
use num_traits::Float;

use crate::error::{Error, Result};

/// A point `(z, p)`; `p ∉ {0, 1}` for nondegenerate parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamPoint<T> {
    pub z: Complex<T>,
    pub p: Complex<T>,
}

fn two<T: Float>() -> Complex<T> {
    Complex::new(T::one() + T::one(), T::zero())
}

fn degenerate<T: Float>(p: Complex<T>) -> bool {
    let eps = T::epsilon() * (T::one() + T::one()).powi(4);
    p.norm() <= eps || (p - Complex::new(T::one(), T::zero())).norm() <= eps
}

/// `(1 − 2/p)²`, the parameter recursion `p_{n-1} = (1 − 2/p_n)²`.
pub fn forward_p<T: Float>(p: Complex<T>) -> Result<Complex<T>> {
    if p.norm() == T::zero() {
        return Err(Error::DegenerateParameter("p = 0".into()));
    }
    let one = Complex::new(T::one(), T::zero());
    let t = one - two::<T>() / p;
    Ok(t * t)
}

/// `F(z, p) = ((1 − 2z/p)², (1 − 2/p)²)`.
pub fn iterate_f<T: Float>(z: Complex<T>, p: Complex<T>) -> Result<(Complex<T>, Complex<T>)> {
    if p.norm() == T::zero() {
        return Err(Error::DegenerateParameter("p = 0".into()));
    }
    let one = Complex::new(T::one(), T::zero());
    let a = one - two::<T>() * z / p;
    Ok((a * a, forward_p(p)?))
}

/// `F` on projective coordinates: `[z : p : u] ↦ [(p − 2z)² : (p − 2u)² : p²]`.
pub fn iterate_f_projective<T: Float>(z: Complex<T>, p: Complex<T>, u: Complex<T>) -> [Complex<T>; 3] {
    let a = p - two::<T>() * z;
    let b = p - two::<T>() * u;
    [a * a, b * b, p * p]
}

/// One backward step: `p = 2 / (1 ∓ √q)`, the sign chosen by `branch`.
pub fn backward_step<T: Float>(q: Complex<T>, branch: bool) -> Result<Complex<T>> {
    let one = Complex::new(T::one(), T::zero());
    let s = q.sqrt();
    let d = if branch { one + s } else { one - s };
    if d.norm() == T::zero() {
        return Err(Error::DegenerateParameter("1 ∓ √q = 0".into()));
    }
    let p = two::<T>() / d;
    if degenerate(p) {
        return Err(Error::DegenerateParameter("backward orbit reached p ∈ {0, 1}".into()));
    }
    Ok(p)
}

/// `n` backward steps from `p0`, with `branch[k]` choosing the square root at step `k`.
///
/// The first coordinate is pulled back alongside from `z0 = p0` using the same
/// branch bits, so consecutive points satisfy `F(z_k, p_k) = (z_{k-1}, p_{k-1})`.
pub fn backward_orbit<T: Float>(p0: Complex<T>, n: usize, branch: &[bool]) -> Result<Vec<ParamPoint<T>>> {
    if degenerate(p0) {
        return Err(Error::DegenerateParameter("p0 ∈ {0, 1}".into()));
    }
    if branch.len() < n {
        return Err(Error::DegenerateParameter(format!("{n} steps need {n} branch bits, got {}", branch.len())));
    }
    let one = Complex::new(T::one(), T::zero());
    let mut out = vec![ParamPoint { z: p0, p: p0 }];
    for &b in &branch[..n] {
        let prev = *out.last().unwrap();
        let p = backward_step(prev.p, b)?;
        let s = prev.z.sqrt();
        let z = p * (if b { one + s } else { one - s }) / two::<T>();
        out.push(ParamPoint { z, p });
    }
    Ok(out)
}

/// Relative distance `|a − b| / max(1, |b|)`.
pub fn rel_err<T: Float>(a: Complex<T>, b: Complex<T>) -> T {
    (a - b).norm() / T::one().max(b.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_i_is_fixed() {
        let p = Complex::new(0.0, 2.0);
        assert!(rel_err(forward_p(p).unwrap(), p) < 1e-12);
        let p32 = Complex::new(0.0f32, 2.0);
        assert!(rel_err(forward_p(p32).unwrap(), p32) < 1e-5);
    }

    #[test]
    fn z_zero_maps_to_one() {
        let (z, _) = iterate_f(Complex::new(0.0, 0.0), Complex::new(3.0, 1.0)).unwrap();
        assert_eq!(z, Complex::new(1.0, 0.0));
    }

    #[test]
    fn projective_form_agrees() {
        let (z, p) = (Complex::new(0.3, -0.7), Complex::new(2.5, 0.4));
        let [a, b, c] = iterate_f_projective(z, p, Complex::new(1.0, 0.0));
        let (fz, fp) = iterate_f(z, p).unwrap();
        assert!(rel_err(a / c, fz) < 1e-12);
        assert!(rel_err(b / c, fp) < 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(backward_orbit(Complex::new(1.0, 0.0), 1, &[false]).is_err());
        assert!(backward_orbit(Complex::new(0.0, 0.0), 1, &[false]).is_err());
        // q = 1 with the minus branch divides by zero.
        assert!(backward_step(Complex::new(1.0, 0.0), false).is_err());
        assert!(iterate_f(Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)).is_err());
    }
}
