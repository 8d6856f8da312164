use super::{CodeDefinition, ErasurePattern};
use crate::error::{Error, Result};
use crate::gf;
use crate::matrix::{GfMatrix, RowBasis};

/// The `n` blocks of one encoded stripe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stripe {
    pub block_size: usize,
    pub blocks: Vec<Vec<u8>>,
}

impl Stripe {
    /// Every block, or `None` where `erasures` says the block is gone.
    pub fn view(&self, erasures: &ErasurePattern) -> Vec<Option<&[u8]>> {
        self.blocks
            .iter()
            .enumerate()
            .map(|(i, b)| if erasures.contains(i) { None } else { Some(b.as_slice()) })
            .collect()
    }

    pub fn data(&self, k: usize) -> &[Vec<u8>] {
        &self.blocks[..k]
    }
}

/// Result of a single-block repair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Repair {
    pub block: Vec<u8>,
    pub helpers: Vec<usize>,
    /// True when the block was rebuilt by XOR alone.
    pub xor_only: bool,
}

/// A reusable decoder for one erasure pattern: the survivors it reads and the
/// inverse that maps them back to the data.
#[derive(Clone, Debug)]
pub struct DecodePlan {
    pub survivors: Vec<usize>,
    inverse: GfMatrix,
}

impl DecodePlan {
    /// Recovers the `k` data blocks from the planned survivors.
    pub fn decode(&self, available: &[Option<&[u8]>]) -> Result<Vec<Vec<u8>>> {
        let rhs = self
            .survivors
            .iter()
            .map(|&b| {
                available
                    .get(b)
                    .copied()
                    .flatten()
                    .ok_or_else(|| Error::Contract(format!("planned survivor {b} is missing")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.inverse.mul_blocks(&rhs)
    }
}

fn check_blocks(blocks: &[Option<&[u8]>], n: usize) -> Result<usize> {
    if blocks.len() != n {
        return Err(Error::Contract(format!("expected {n} block slots, got {}", blocks.len())));
    }
    let mut len = None;
    for b in blocks.iter().flatten() {
        match len {
            None => len = Some(b.len()),
            Some(l) if l != b.len() => return Err(Error::Contract("unequal block sizes".into())),
            _ => {}
        }
    }
    Ok(len.unwrap_or(0))
}

impl CodeDefinition {
    /// Systematic encode: the data verbatim, then each parity row applied to the data.
    pub fn encode<B: AsRef<[u8]>>(&self, data: &[B]) -> Result<Stripe> {
        let k = self.k();
        if data.len() != k {
            return Err(Error::Contract(format!("expected {k} data blocks, got {}", data.len())));
        }
        let block_size = data.first().map_or(0, |b| b.as_ref().len());
        if data.iter().any(|b| b.as_ref().len() != block_size) {
            return Err(Error::Contract("data blocks differ in size".into()));
        }
        let mut blocks: Vec<Vec<u8>> = data.iter().map(|b| b.as_ref().to_vec()).collect();
        for row in k..self.n() {
            let mut p = vec![0u8; block_size];
            for (c, d) in data.iter().enumerate() {
                gf::mul_block_acc(&mut p, self.generator[(row, c)], d.as_ref())?;
            }
            blocks.push(p);
        }
        Ok(Stripe { block_size, blocks })
    }

    /// Rebuilds `failed` by XOR of the rest of its local group.
    pub fn local_repair(&self, available: &[Option<&[u8]>], failed: usize) -> Result<Repair> {
        let len = check_blocks(available, self.n())?;
        let helpers = self.layout.repair_set(failed).ok_or(Error::NotLocallyRepairable(failed))?;
        let mut out = vec![0u8; len];
        for &h in &helpers {
            let src = available[h].ok_or_else(|| Error::Decode(format!("helper block {h} of {failed} is missing")))?;
            gf::xor_block_acc(&mut out, src)?;
        }
        Ok(Repair { block: out, helpers, xor_only: true })
    }

    /// Whether the surviving generator rows still span the data space.
    pub fn decodable(&self, erasures: &ErasurePattern) -> bool {
        let k = self.k();
        if erasures.len() > self.n() - k {
            return false;
        }
        let mut basis = RowBasis::new(k);
        for b in (0..self.n()).filter(|b| !erasures.contains(*b)) {
            if basis.insert(self.generator.row(b)) && basis.rank() == k {
                return true;
            }
        }
        basis.rank() == k
    }

    /// Same question answered on the parity-check side: the erased columns of
    /// `H` are linearly independent.
    pub fn erased_columns_independent(&self, erasures: &ErasurePattern) -> bool {
        let cols: Vec<usize> = erasures.erased.iter().copied().collect();
        cols.len() <= self.parity_check.rows() && self.parity_check.select_cols(&cols).rank() == cols.len()
    }

    /// Picks `k` independent survivors, preferring the order given by `preference`.
    pub fn plan_with_preference(
        &self,
        erasures: &ErasurePattern,
        preference: impl IntoIterator<Item = usize>,
    ) -> Result<DecodePlan> {
        let k = self.k();
        let mut basis = RowBasis::new(k);
        let mut survivors = Vec::with_capacity(k);
        for b in preference {
            if erasures.contains(b) || b >= self.n() {
                continue;
            }
            if basis.insert(self.generator.row(b)) {
                survivors.push(b);
                if survivors.len() == k {
                    break;
                }
            }
        }
        if survivors.len() < k {
            return Err(Error::Decode(format!("erasure pattern {erasures} is not decodable")));
        }
        let inverse = self.generator.select_rows(&survivors).invert()?;
        Ok(DecodePlan { survivors, inverse })
    }

    /// Plan that prefers data blocks first, then parities in index order.
    pub fn decode_plan(&self, erasures: &ErasurePattern) -> Result<DecodePlan> {
        self.plan_with_preference(erasures, 0..self.n())
    }

    /// Recovers all `k` data blocks.
    pub fn global_decode(&self, available: &[Option<&[u8]>], erasures: &ErasurePattern) -> Result<Vec<Vec<u8>>> {
        check_blocks(available, self.n())?;
        if erasures.is_empty() {
            return available[..self.k()]
                .iter()
                .map(|b| b.map(<[u8]>::to_vec).ok_or_else(|| Error::Contract("data block missing".into())))
                .collect();
        }
        self.decode_plan(erasures)?.decode(available)
    }

    /// Rebuilds every erased block (data and parity).
    pub fn reconstruct(&self, available: &[Option<&[u8]>], erasures: &ErasurePattern) -> Result<Vec<(usize, Vec<u8>)>> {
        let data = self.global_decode(available, erasures)?;
        erasures.erased.iter().map(|&b| Ok((b, self.block_from_data(b, &data)?))).collect()
    }

    /// Row `b` of the generator applied to the data.
    pub fn block_from_data(&self, b: usize, data: &[Vec<u8>]) -> Result<Vec<u8>> {
        let len = data.first().map_or(0, Vec::len);
        let mut out = vec![0u8; len];
        for (c, d) in data.iter().enumerate() {
            gf::mul_block_acc(&mut out, self.generator[(b, c)], d)?;
        }
        Ok(out)
    }

    /// Single-block repair: XOR within the group when possible, otherwise a
    /// global decode of just that block.
    pub fn repair(&self, available: &[Option<&[u8]>], failed: usize) -> Result<Repair> {
        match self.local_repair(available, failed) {
            Err(Error::NotLocallyRepairable(_)) => {
                let erasures = ErasurePattern::new((0..self.n()).filter(|&b| available[b].is_none() || b == failed));
                let plan = self.decode_plan(&erasures)?;
                let data = plan.decode(available)?;
                let block = self.block_from_data(failed, &data)?;
                Ok(Repair { block, helpers: plan.survivors, xor_only: false })
            }
            other => other,
        }
    }

    /// `H * y` applied blockwise; all-zero for a valid stripe.
    pub fn syndrome(&self, stripe: &Stripe) -> Result<Vec<Vec<u8>>> {
        self.parity_check.mul_blocks(&stripe.blocks)
    }
}

/// Naive row-by-row evaluation of `G * x` for single-byte data, for tests.
#[cfg(test)]
pub(crate) fn encode_bytes_naive(g: &GfMatrix, x: &[u8]) -> Vec<u8> {
    use crate::gf::Gf;
    (0..g.rows()).map(|r| (0..g.cols()).map(|c| g[(r, c)] * Gf(x[c])).sum::<Gf>().0).collect()
}
