//! The residue count table and indexed access to its bins.
//!
//! For items `a_1..a_n` and a modulus `p`, entry `t[i][j]` counts the subsets
//! of `{1..i}` whose sum is `j` mod `p`. The last row gives the bin sizes
//! `|T_{p,k}|`. Because every row is kept, the `I`-th element of a bin in the
//! order `≺` can be reconstructed by walking the rows backwards, which makes
//! the bins behave like random-access arrays.
//!
//! An alternative way to list `c` elements of one bin is a sorted
//! meet-in-the-middle merge in time `Õ(2^{n/2} + c)`; it needs no table but
//! has no indexed access, so it is not used here.

use std::io::{Read, Write};

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::problem::{Items, Subset};
use crate::scalar::{Count, Natural};

/// Default ceiling for the estimated table size: 8 GiB.
pub const DEFAULT_MEMORY_CAP: u64 = 8 << 30;

const DUMP_MAGIC: &[u8; 8] = b"SUBSUMDP";

/// The `(n+1) × p` count table, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpTable<C> {
    n: usize,
    p: u64,
    residues: Vec<u64>,
    counts: Vec<C>,
}

/// Estimated bytes for a table over `n` items and modulus `p`.
pub fn memory_estimate<C: Count>(n: usize, p: u64) -> Option<u64> {
    (n as u64 + 1)
        .checked_mul(p)?
        .checked_mul(C::entry_bytes(n) as u64)
}

impl<C: Count> DpTable<C> {
    /// Builds the table with the default memory cap.
    pub fn build<V: Natural>(items: &Items<V>, p: u64) -> Result<Self> {
        Self::build_with_cap(items, p, DEFAULT_MEMORY_CAP)
    }

    pub fn build_with_cap<V: Natural>(items: &Items<V>, p: u64, cap_bytes: u64) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidParameter("modulus must be at least 1".into()));
        }
        let residues = items.values().iter().map(|a| a.residue(p)).collect();
        Self::from_residues(residues, p, cap_bytes)
    }

    /// Builds the table directly from item residues mod `p`.
    pub fn from_residues(residues: Vec<u64>, p: u64, cap_bytes: u64) -> Result<Self> {
        let n = residues.len();
        if p == 0 {
            return Err(Error::InvalidParameter("modulus must be at least 1".into()));
        }
        if let Some(r) = residues.iter().find(|&&r| r >= p) {
            return Err(Error::InvalidParameter(format!("residue {r} is not below {p}")));
        }
        if let Some(max) = C::MAX_ITEMS {
            if n > max {
                return Err(Error::InvalidParameter(format!(
                    "this entry type holds counts for at most {max} items, got {n}"
                )));
            }
        }
        memory_estimate::<C>(n, p)
            .filter(|&b| b <= cap_bytes)
            .ok_or_else(|| {
                Error::ResourceLimit(format!(
                    "table for n = {n}, p = {p} exceeds the memory cap of {cap_bytes} bytes"
                ))
            })?;
        let width = usize::try_from(p).map_err(|_| Error::ResourceLimit(format!("modulus {p} too large")))?;
        let mut counts = vec![C::zero(); (n + 1) * width];
        counts[0] = C::one();
        for (i, &r) in residues.iter().enumerate() {
            let r = r as usize;
            let (done, rest) = counts.split_at_mut((i + 1) * width);
            let prev = &done[i * width..];
            let cur = &mut rest[..width];
            // t[i][j] = t[i-1][j] + t[i-1][(j - a_i) mod p]
            for j in 0..r {
                cur[j] = prev[j].clone();
                cur[j] += &prev[j + width - r];
            }
            for j in r..width {
                cur[j] = prev[j].clone();
                cur[j] += &prev[j - r];
            }
        }
        Ok(Self { n, p, residues, counts })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// `a_i mod p` for every item.
    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    /// `t[i][j]`.
    pub fn count(&self, i: usize, j: u64) -> &C {
        &self.counts[i * self.p as usize + j as usize]
    }

    pub fn row(&self, i: usize) -> &[C] {
        let w = self.p as usize;
        &self.counts[i * w..(i + 1) * w]
    }

    /// `|T_{p,k}|`.
    pub fn bin_size(&self, k: u64) -> &C {
        self.count(self.n, k)
    }

    pub fn bin(&self, k: u64) -> Result<BinRef<'_, C>> {
        if k >= self.p {
            return Err(Error::ContractViolation(format!("residue {k} is not below the modulus {}", self.p)));
        }
        Ok(BinRef { table: self, k })
    }

    /// The `index`-th element (1-based) of `T_{p,k}` under `≺`.
    pub fn unrank(&self, k: u64, index: &C) -> Result<Subset> {
        let mut members = Vec::new();
        self.unrank_into(k, index, &mut members)?;
        members.reverse();
        Ok(Subset::from_sorted_unchecked(members))
    }

    /// Writes the members in descending order into `out`.
    fn unrank_into(&self, k: u64, index: &C, out: &mut Vec<usize>) -> Result<()> {
        if k >= self.p {
            return Err(Error::ContractViolation(format!("residue {k} is not below the modulus {}", self.p)));
        }
        if index.is_zero() || index > self.bin_size(k) {
            return Err(Error::IndexOutOfRange {
                index: index.to_string(),
                size: self.bin_size(k).to_string(),
            });
        }
        out.clear();
        let mut rank = index.clone();
        let mut j = k;
        for i in (1..=self.n).rev() {
            let below = self.count(i - 1, j);
            if rank > *below {
                out.push(i);
                rank -= below;
                let r = self.residues[i - 1];
                j = if j >= r { j - r } else { j + self.p - r };
            }
        }
        debug_assert!(j == 0 && rank.is_one());
        Ok(())
    }

    /// Position (1-based) of `subset` within its bin; inverse of [`DpTable::unrank`].
    pub fn rank(&self, subset: &Subset) -> Result<(u64, C)> {
        if subset.max_index().is_some_and(|m| m > self.n) {
            return Err(Error::ShapeMismatch(format!("subset {subset} has indices above {}", self.n)));
        }
        let k = subset
            .members()
            .iter()
            .fold(0u64, |acc, &i| ((acc as u128 + self.residues[i - 1] as u128) % self.p as u128) as u64);
        let mut rank = C::one();
        let mut j = k;
        for i in (1..=self.n).rev() {
            if subset.contains(i) {
                rank += self.count(i - 1, j);
                let r = self.residues[i - 1];
                j = if j >= r { j - r } else { j + self.p - r };
            }
        }
        Ok((k, rank))
    }

    /// Writes a debugging dump: magic, `n`, `p`, residues, then every entry
    /// as a length-prefixed little-endian magnitude.
    pub fn dump<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(DUMP_MAGIC)?;
        w.write_all(&(self.n as u64).to_le_bytes())?;
        w.write_all(&self.p.to_le_bytes())?;
        for r in &self.residues {
            w.write_all(&r.to_le_bytes())?;
        }
        for c in &self.counts {
            let bytes = c.to_big().to_bytes_le();
            w.write_all(&(bytes.len() as u32).to_le_bytes())?;
            w.write_all(&bytes)?;
        }
        Ok(())
    }

    /// Reads a dump written by [`DpTable::dump`].
    pub fn read_dump<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != DUMP_MAGIC {
            return Err(Error::Parse("not a table dump".into()));
        }
        let mut word = [0u8; 8];
        let mut next_u64 = |r: &mut R| -> Result<u64> {
            r.read_exact(&mut word)?;
            Ok(u64::from_le_bytes(word))
        };
        let n = next_u64(&mut r)? as usize;
        let p = next_u64(&mut r)?;
        let residues = (0..n).map(|_| next_u64(&mut r)).collect::<Result<Vec<_>>>()?;
        let entries = (n as u64 + 1)
            .checked_mul(p)
            .filter(|&e| e <= 1 << 40)
            .ok_or_else(|| Error::Parse("implausible table shape".into()))?;
        let mut counts = Vec::with_capacity(entries as usize);
        for _ in 0..entries {
            let mut len = [0u8; 4];
            r.read_exact(&mut len)?;
            let mut bytes = vec![0u8; u32::from_le_bytes(len) as usize];
            r.read_exact(&mut bytes)?;
            let value = BigUint::from_bytes_le(&bytes);
            counts.push(C::from_big(&value).ok_or_else(|| Error::Parse("entry exceeds the count type".into()))?);
        }
        Ok(Self { n, p, residues, counts })
    }
}

/// One bin `T_{p,k}` of a table.
#[derive(Clone, Copy, Debug)]
pub struct BinRef<'a, C> {
    table: &'a DpTable<C>,
    k: u64,
}

impl<'a, C: Count> BinRef<'a, C> {
    pub fn residue(&self) -> u64 {
        self.k
    }

    pub fn table(&self) -> &'a DpTable<C> {
        self.table
    }

    pub fn size(&self) -> &'a C {
        self.table.bin_size(self.k)
    }

    pub fn unrank(&self, index: &C) -> Result<Subset> {
        self.table.unrank(self.k, index)
    }

    /// The first `min(c, |T_{p,k}|)` elements in `≺` order, produced lazily by
    /// unranking each index in turn.
    pub fn enumerate(&self, c: u64) -> BinIter<'a, C> {
        let size = self.size();
        let limit = match size.to_u64() {
            Some(s) => s.min(c),
            None => c,
        };
        BinIter {
            table: self.table,
            k: self.k,
            next: C::one(),
            remaining: limit,
            buf: Vec::with_capacity(self.table.n),
        }
    }

    /// Every element of the bin.
    pub fn iter(&self) -> BinIter<'a, C> {
        self.enumerate(u64::MAX)
    }
}

/// Streaming enumeration of a bin prefix.
pub struct BinIter<'a, C> {
    table: &'a DpTable<C>,
    k: u64,
    next: C,
    remaining: u64,
    buf: Vec<usize>,
}

impl<'a, C: Count> BinIter<'a, C> {
    /// Like `next`, but exposes the members in descending order without allocating.
    pub fn next_members(&mut self) -> Option<&[usize]> {
        if self.remaining == 0 {
            return None;
        }
        self.table
            .unrank_into(self.k, &self.next, &mut self.buf)
            .expect("index lies inside the bin");
        self.next += &C::one();
        self.remaining -= 1;
        Some(&self.buf)
    }
}

impl<'a, C: Count> Iterator for BinIter<'a, C> {
    type Item = Subset;

    fn next(&mut self) -> Option<Subset> {
        let mut members = self.next_members()?.to_vec();
        members.reverse();
        Some(Subset::from_sorted_unchecked(members))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (r, Some(r))
    }
}
