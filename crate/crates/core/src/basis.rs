//! Mixed-radix enumeration of per-site digit strings, optionally with a
//! fixed digit sum. Both the spin basis (digit = m + S) and the Fock basis
//! (digit = occupation number) are instances.

use crate::error::{Error, Result};

const MAX_FULL_STATES: u64 = 1 << 28;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigBasis {
    radix: u64,
    sites: usize,
    digit_sum: Option<u64>,
    /// powers[x] = radix^(sites - 1 - x); site 0 is the most significant digit
    powers: Vec<u64>,
    codes: Vec<u64>,
}

impl ConfigBasis {
    /// All digit strings of length `sites` over `0..radix`, restricted to
    /// those whose digits add up to `digit_sum` when given. Codes come out
    /// in increasing numeric order, which is lexicographic in the digits.
    pub fn new(radix: u64, sites: usize, digit_sum: Option<u64>) -> Result<Self> {
        if radix < 2 {
            return Err(Error::InvalidSector(format!("radix must be >= 2, got {radix}")));
        }
        let too_large =
            || Error::TooLarge(format!("{radix}^{sites} states do not fit 64-bit codes"));
        let full = radix.checked_pow(sites as u32).ok_or_else(too_large)?;
        if digit_sum.is_none() && full > MAX_FULL_STATES {
            return Err(Error::TooLarge(format!(
                "{full} states exceed the enumeration limit {MAX_FULL_STATES}"
            )));
        }
        let mut powers = vec![1u64; sites];
        for x in (0..sites.saturating_sub(1)).rev() {
            powers[x] = powers[x + 1] * radix;
        }

        let codes = match digit_sum {
            None => (0..full).collect(),
            Some(total) => {
                let max_digit = radix - 1;
                if total > max_digit * sites as u64 {
                    Vec::new()
                } else {
                    let mut codes = Vec::new();
                    enumerate_fixed_sum(&powers, max_digit, 0, total, 0, &mut codes);
                    codes
                }
            }
        };

        Ok(ConfigBasis {
            radix,
            sites,
            digit_sum,
            powers,
            codes,
        })
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn radix(&self) -> u64 {
        self.radix
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn digit_sum(&self) -> Option<u64> {
        self.digit_sum
    }

    pub fn codes(&self) -> &[u64] {
        &self.codes
    }

    pub fn code(&self, index: usize) -> u64 {
        self.codes[index]
    }

    pub fn index_of(&self, code: u64) -> Option<usize> {
        self.codes.binary_search(&code).ok()
    }

    #[inline]
    pub fn digit(&self, code: u64, site: usize) -> u64 {
        (code / self.powers[site]) % self.radix
    }

    #[inline]
    pub fn power(&self, site: usize) -> u64 {
        self.powers[site]
    }

    pub fn digits(&self, index: usize) -> Vec<u64> {
        let code = self.codes[index];
        (0..self.sites).map(|x| self.digit(code, x)).collect()
    }

    pub fn encode(&self, digits: &[u64]) -> u64 {
        digits
            .iter()
            .zip(&self.powers)
            .map(|(&d, &p)| d * p)
            .sum()
    }
}

fn enumerate_fixed_sum(
    powers: &[u64],
    max_digit: u64,
    site: usize,
    remaining: u64,
    prefix: u64,
    out: &mut Vec<u64>,
) {
    let sites = powers.len();
    if site == sites {
        if remaining == 0 {
            out.push(prefix);
        }
        return;
    }
    let capacity_after = max_digit * (sites - site - 1) as u64;
    let lo = remaining.saturating_sub(capacity_after);
    let hi = remaining.min(max_digit);
    for d in lo..=hi {
        enumerate_fixed_sum(
            powers,
            max_digit,
            site + 1,
            remaining - d,
            prefix + d * powers[site],
            out,
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_sum_is_filtered_enumeration() {
        for radix in 2..=4u64 {
            for sites in 1..=5usize {
                let full = ConfigBasis::new(radix, sites, None).unwrap();
                let mut total = 0;
                for sum in 0..=(radix - 1) * sites as u64 {
                    let block = ConfigBasis::new(radix, sites, Some(sum)).unwrap();
                    let filtered: Vec<u64> = full
                        .codes()
                        .iter()
                        .copied()
                        .filter(|&c| (0..sites).map(|x| full.digit(c, x)).sum::<u64>() == sum)
                        .collect();
                    assert_eq!(block.codes(), &filtered[..]);
                    total += block.len();
                }
                assert_eq!(total, full.len());
            }
        }
    }

    #[test]
    fn encode_decode() {
        let b = ConfigBasis::new(3, 4, Some(3)).unwrap();
        for i in 0..b.len() {
            assert_eq!(b.encode(&b.digits(i)), b.code(i));
            assert_eq!(b.index_of(b.code(i)), Some(i));
        }
        assert!(ConfigBasis::new(3, 4, Some(9)).unwrap().is_empty());
    }
}
