//! Pairing and finite-set coding of naturals.

use crate::error::{Error, Result};

/// Cantor pairing `⟨a, b⟩ = (a + b)(a + b + 1)/2 + b`.
pub fn pair(a: u64, b: u64) -> Result<u64> {
    let overflow = || Error::TooLarge(format!("pair({a}, {b}) overflows u64"));
    let sum = a.checked_add(b).ok_or_else(overflow)?;
    let tri = if sum % 2 == 0 {
        (sum / 2).checked_mul(sum + 1)
    } else {
        sum.checked_mul(sum.div_ceil(2))
    }
    .ok_or_else(overflow)?;
    tri.checked_add(b).ok_or_else(overflow)
}

/// Inverse of [`pair`].
pub fn unpair(z: u64) -> (u64, u64) {
    // largest w with w(w+1)/2 <= z
    let mut w = (((8.0 * z as f64 + 1.0).sqrt() - 1.0) / 2.0) as u64;
    while w * (w + 1) / 2 > z {
        w -= 1;
    }
    while (w + 1) * (w + 2) / 2 <= z {
        w += 1;
    }
    let b = z - w * (w + 1) / 2;
    (w - b, b)
}

/// Canonical index of a finite set, `Σ 2^x`. Injective on strictly
/// increasing sequences; `()` codes to 0.
pub fn code_seq(s: &[u64]) -> Result<u64> {
    s.iter().try_fold(0u64, |acc, &x| {
        if x >= 64 {
            Err(Error::TooLarge(format!("cannot code element {x} (limit 63)")))
        } else {
            Ok(acc | 1 << x)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cantor_pairing() {
        assert_eq!(pair(0, 0).unwrap(), 0);
        assert_eq!(pair(1, 0).unwrap(), 1);
        assert_eq!(pair(0, 1).unwrap(), 2);
        assert_eq!(pair(2, 0).unwrap(), 3);
        for z in 0..2000 {
            let (a, b) = unpair(z);
            assert_eq!(pair(a, b).unwrap(), z);
        }
        assert!(pair(u64::MAX, 1).is_err());
    }

    #[test]
    fn set_codes() {
        assert_ne!(code_seq(&[]).unwrap(), code_seq(&[0]).unwrap());
        assert_eq!(code_seq(&[0, 2]).unwrap(), 5);
        assert!(code_seq(&[64]).is_err());
    }
}
