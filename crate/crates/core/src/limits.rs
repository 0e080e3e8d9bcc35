//! Size guards shared by every exhaustive search in the crate.

use crate::error::{Error, Result};

/// Environment variable that overrides the default guards.
///
/// A bare integer sets the element caps for products and free algebras.
/// A comma separated list of `key=value` pairs sets individual guards, with
/// keys `product`, `table`, `assignments`, `congruence`, `subalgebra`,
/// `discriminator` and `free`.
pub const CAP_ENV: &str = "AGKIT_CAP";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest universe a direct product may have.
    pub product_elements: u128,
    /// Largest universe for which dense operation tables are materialised.
    pub table_elements: usize,
    /// Largest number of assignments scanned by a single `holds_in`.
    pub assignments: u128,
    /// Largest universe whose full congruence lattice is computed.
    pub congruence_elements: usize,
    /// Largest universe whose subalgebras are enumerated.
    pub subalgebra_elements: usize,
    /// Largest universe accepted by the discriminator check.
    pub discriminator_elements: usize,
    /// Largest free algebra that is generated.
    pub free_elements: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            product_elements: 1_000_000,
            table_elements: 2048,
            assignments: 10_000_000,
            congruence_elements: 64,
            subalgebra_elements: 256,
            discriminator_elements: 8,
            free_elements: 100_000,
        }
    }
}

impl Limits {
    /// Defaults, overridden by `AGKIT_CAP` when it is set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(CAP_ENV) {
            Ok(value) => Limits::default().with_overrides(&value),
            Err(_) => Ok(Limits::default()),
        }
    }

    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec.is_empty() {
            return Ok(self);
        }
        if let Ok(n) = parse_count(spec) {
            self.product_elements = n;
            self.free_elements = n as usize;
            return Ok(self);
        }
        for item in spec.split(',') {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Invalid(format!("{CAP_ENV}: expected key=value, got `{item}`")))?;
            let n = parse_count(value.trim())?;
            match key.trim() {
                "product" => self.product_elements = n,
                "table" => self.table_elements = n as usize,
                "assignments" => self.assignments = n,
                "congruence" => self.congruence_elements = n as usize,
                "subalgebra" => self.subalgebra_elements = n as usize,
                "discriminator" => self.discriminator_elements = n as usize,
                "free" => self.free_elements = n as usize,
                other => {
                    return Err(Error::Invalid(format!("{CAP_ENV}: unknown guard `{other}`")));
                }
            }
        }
        Ok(self)
    }
}

// Accepts plain integers and the `1e6` shorthand.
fn parse_count(text: &str) -> Result<u128> {
    let bad = || Error::Invalid(format!("{CAP_ENV}: `{text}` is not a count"));
    if let Some((mantissa, exp)) = text.split_once(['e', 'E']) {
        let m: u128 = mantissa.parse().map_err(|_| bad())?;
        let e: u32 = exp.parse().map_err(|_| bad())?;
        return 10u128.checked_pow(e).and_then(|p| p.checked_mul(m)).ok_or_else(bad);
    }
    text.parse().map_err(|_| bad())
}

pub(crate) fn guard(what: &'static str, needed: u128, cap: u128) -> Result<()> {
    if needed > cap {
        Err(Error::CapExceeded { what, needed, cap })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bare_integer_sets_element_caps() {
        let l = Limits::default().with_overrides("5000").unwrap();
        assert_eq!(l.product_elements, 5000);
        assert_eq!(l.free_elements, 5000);
        assert_eq!(l.congruence_elements, 64);
    }

    #[test]
    fn keyed_overrides() {
        let l = Limits::default().with_overrides("assignments=1e8, congruence=128").unwrap();
        assert_eq!(l.assignments, 100_000_000);
        assert_eq!(l.congruence_elements, 128);
        assert!(Limits::default().with_overrides("bogus=1").is_err());
        assert!(Limits::default().with_overrides("product=abc").is_err());
    }
}
