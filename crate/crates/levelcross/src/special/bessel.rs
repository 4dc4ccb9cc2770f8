//! Modified Bessel function of the second kind for half-integer orders.

use crate::error::{Error, Result};

const FRAC_PI_2: f64 = std::f64::consts::FRAC_PI_2;

fn is_half_integer(p: f64) -> bool {
    let doubled = 2.0 * p;
    doubled.fract() == 0.0 && (doubled as i64) % 2 != 0
}

/// K_p(z) for p in {±1/2, ±3/2, ±5/2}, via the closed form
/// K_{1/2}(z) = sqrt(pi/(2z)) e^{-z} and the upward recurrence
/// K_{p+1}(z) = K_{p-1}(z) + (2p/z) K_p(z), with K_{-p} = K_p.
pub fn bessel_k_half_integer(p: f64, z: f64) -> Result<f64> {
    if z <= 0.0 {
        return Err(Error::Domain(format!("bessel_k: z {z} must be positive")));
    }
    if !is_half_integer(p) || p.abs() > 2.5 {
        return Err(Error::UnsupportedOrder(p));
    }
    let p = p.abs();
    let k_half = (FRAC_PI_2 / z).sqrt() * (-z).exp();
    let mut k_lo = k_half; // K_{1/2}
    let mut k_hi = k_half * (1.0 + 1.0 / z); // K_{3/2}
    let mut order = 1.5;
    while order < p {
        let next = k_lo + (2.0 * order / z) * k_hi;
        k_lo = k_hi;
        k_hi = next;
        order += 1.0;
    }
    Ok(if (p - 0.5).abs() < 1e-12 { k_lo } else { k_hi })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_half_closed_form() {
        // K_{1/2}(1) = sqrt(pi/2) e^{-1}
        let v = bessel_k_half_integer(0.5, 1.0).unwrap();
        assert!((v - 0.46106850444789455).abs() < 1e-15);
    }

    #[test]
    fn order_symmetry() {
        for &z in &[0.3, 1.0, 2.5, 7.0] {
            for &p in &[0.5, 1.5, 2.5] {
                let a = bessel_k_half_integer(p, z).unwrap();
                let b = bessel_k_half_integer(-p, z).unwrap();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn recurrence_vs_integral_representation() {
        // K_p(z) = integral_0^inf exp(-z cosh(t)) cosh(p t) dt, by trapezoid
        let oracle = |p: f64, z: f64| {
            let h = 1e-4;
            let mut sum = 0.5; // t = 0 term: exp(-z)*1 scaled below
            let mut t: f64 = h;
            loop {
                let term = (-z * (t.cosh() - 1.0)).exp() * (p * t).cosh();
                sum += term;
                if term < 1e-16 && t > 5.0 {
                    break;
                }
                t += h;
            }
            sum * h * (-z).exp()
        };
        for &(p, z) in &[(0.5, 1.0), (1.5, 2.0), (2.5, 1.5), (1.5, 0.7)] {
            let v = bessel_k_half_integer(p, z).unwrap();
            let o = oracle(p, z);
            assert!((v - o).abs() < 1e-9 * v.max(1.0), "p={p} z={z}: {v} vs {o}");
        }
    }

    #[test]
    fn k_three_halves_at_two() {
        // K_{3/2}(2) = K_{1/2}(2) * (1 + 1/2)
        let k12 = bessel_k_half_integer(0.5, 2.0).unwrap();
        let k32 = bessel_k_half_integer(1.5, 2.0).unwrap();
        assert!((k32 - 1.5 * k12).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(bessel_k_half_integer(0.5, 0.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_k_half_integer(0.5, -1.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_k_half_integer(1.0, 1.0), Err(Error::UnsupportedOrder(_))));
        assert!(matches!(bessel_k_half_integer(3.5, 1.0), Err(Error::UnsupportedOrder(_))));
    }
}
