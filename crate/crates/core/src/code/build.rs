use super::{CodeDefinition, CodeSpec, Family, GroupLayout, Role};
use crate::error::{Error, Result};
use crate::gf::Gf;
use crate::matrix::GfMatrix;

/// The first `k` powers of the field generator: `1, 2, 4, 8, ...`.
pub fn evaluation_points(k: usize) -> Result<Vec<Gf>> {
    if k > 255 {
        return Err(Error::FieldTooSmall { needed: k });
    }
    Ok((0..k).map(Gf::exp).collect())
}

/// UniLRC with scale coefficient `alpha` over `z` clusters.
///
/// Starts from the `(alpha*z + 1) x k` Vandermonde matrix with powers
/// `0..=alpha*z`. Its first (all-ones) row is split into `z` block-diagonal
/// indicator rows `L`, the remaining rows form the global coefficients, every
/// `alpha` consecutive global rows are summed into `G*`, and the local rows
/// are `G* + L`.
pub fn build_unilrc(alpha: usize, z: usize) -> Result<CodeDefinition> {
    let spec = CodeSpec::unilrc(alpha, z)?;
    let (n, k, g) = (spec.n, spec.k, spec.g);
    let points = evaluation_points(k)?;

    let full = GfMatrix::vandermonde(&points, g + 1, 0)?;
    let globals = full.select_rows(&(1..=g).collect::<Vec<_>>());

    let per_group = k / z;
    let mut indicator = GfMatrix::zeros(z, k);
    for i in 0..z {
        for c in i * per_group..(i + 1) * per_group {
            indicator[(i, c)] = full[(0, c)];
        }
    }

    let mut combined = GfMatrix::zeros(z, k);
    for i in 0..z {
        for row in i * alpha..(i + 1) * alpha {
            for c in 0..k {
                let v = globals[(row, c)];
                combined[(i, c)] += v;
            }
        }
    }

    let mut locals = combined;
    for i in 0..z {
        for c in 0..k {
            let v = indicator[(i, c)];
            locals[(i, c)] += v;
        }
    }

    let generator = GfMatrix::identity(k).vstack(&globals)?.vstack(&locals)?;

    let mut roles = vec![Role::Data; k];
    roles.extend(std::iter::repeat_n(Role::Global, g));
    roles.extend(std::iter::repeat_n(Role::Local, z));
    let groups = (0..z)
        .map(|i| {
            let mut m: Vec<usize> = (i * per_group..(i + 1) * per_group).collect();
            m.extend(k + i * alpha..k + (i + 1) * alpha);
            m.push(k + g + i);
            m
        })
        .collect();
    debug_assert_eq!(roles.len(), n);

    CodeDefinition::assemble(spec, GroupLayout { roles, groups }, generator, points)
}

/// Generator for a layout with Vandermonde globals (powers `1..=g`) and local
/// rows equal to the sum of every other member's row in their group.
fn coupled_generator(layout: &GroupLayout, k: usize, g: usize, points: &[Gf]) -> Result<GfMatrix> {
    let n = layout.n();
    let mut gen = GfMatrix::identity(k).vstack(&GfMatrix::vandermonde(points, g, 1)?)?;
    let mut locals = GfMatrix::zeros(n - k - g, k);
    for group in &layout.groups {
        let local = *group
            .iter()
            .find(|&&b| layout.roles[b] == Role::Local)
            .ok_or_else(|| Error::Contract("group without local parity".into()))?;
        for &b in group.iter().filter(|&&b| b != local) {
            for c in 0..k {
                let v = gen[(b, c)];
                locals[(local - k - g, c)] += v;
            }
        }
    }
    gen = gen.vstack(&locals)?;
    Ok(gen)
}

fn roles(k: usize, g: usize, l: usize) -> Vec<Role> {
    let mut roles = vec![Role::Data; k];
    roles.extend(std::iter::repeat_n(Role::Global, g));
    roles.extend(std::iter::repeat_n(Role::Local, l));
    roles
}

/// Azure-style LRC: `k / group_data_size` XOR groups over the data plus `g`
/// global parities outside every group.
pub fn build_alrc(k: usize, group_data_size: usize, g: usize) -> Result<CodeDefinition> {
    if k == 0 || group_data_size == 0 || !k.is_multiple_of(group_data_size) {
        return Err(Error::Parameter(format!("group data size {group_data_size} must divide k = {k}")));
    }
    if g == 0 {
        return Err(Error::Parameter("ALRC needs at least one global parity".into()));
    }
    let l = k / group_data_size;
    let n = k + g + l;
    let points = evaluation_points(k)?;
    let groups = (0..l)
        .map(|i| {
            let mut m: Vec<usize> = (i * group_data_size..(i + 1) * group_data_size).collect();
            m.push(k + g + i);
            m
        })
        .collect();
    let layout = GroupLayout { roles: roles(k, g, l), groups };
    let generator = coupled_generator(&layout, k, g, &points)?;
    let spec = CodeSpec { family: Family::Alrc, n, k, r: group_data_size, z: l, alpha: None, g, l, d: g + 2, f: g + 1 };
    CodeDefinition::assemble(spec, layout, generator, points)
}

/// Optimal-Cauchy-style LRC: `l` groups, each holding `k / l` data blocks,
/// every global parity and one local parity, so every block has locality
/// `r = k / l + g`.
pub fn build_olrc(k: usize, r: usize, g: usize, l: usize) -> Result<CodeDefinition> {
    if l == 0 || k == 0 || !k.is_multiple_of(l) {
        return Err(Error::Parameter(format!("l = {l} must divide k = {k}")));
    }
    if r != k / l + g {
        return Err(Error::Parameter(format!("locality r = {r} inconsistent with k/l + g = {}", k / l + g)));
    }
    let n = k + g + l;
    let per = k / l;
    let points = evaluation_points(k)?;
    let groups = (0..l)
        .map(|i| {
            let mut m: Vec<usize> = (i * per..(i + 1) * per).collect();
            m.extend(k..k + g);
            m.push(k + g + i);
            m
        })
        .collect();
    let layout = GroupLayout { roles: roles(k, g, l), groups };
    let generator = coupled_generator(&layout, k, g, &points)?;
    let spec = CodeSpec { family: Family::Olrc, n, k, r, z: l, alpha: None, g, l, d: g + 2, f: g + 1 };
    CodeDefinition::assemble(spec, layout, generator, points)
}

/// Uniform-Cauchy-style LRC: data then global parities dealt in order into
/// `small_count` groups of locality `small_locality` followed by
/// `large_count` groups of locality `large_locality`; `g` is whatever the
/// groups hold beyond the `k` data blocks.
pub fn build_ulrc(
    k: usize,
    small_locality: usize,
    small_count: usize,
    large_locality: usize,
    large_count: usize,
) -> Result<CodeDefinition> {
    let sizes: Vec<usize> = std::iter::repeat_n(small_locality, small_count)
        .chain(std::iter::repeat_n(large_locality, large_count))
        .collect();
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Error::Parameter("ULRC needs non-empty groups".into()));
    }
    let held: usize = sizes.iter().sum();
    if held <= k {
        return Err(Error::Parameter(format!("groups hold {held} data+global blocks, need more than k = {k}")));
    }
    let g = held - k;
    let l = sizes.len();
    let n = k + g + l;
    let points = evaluation_points(k)?;
    let mut next = 0;
    let groups = sizes
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let mut m: Vec<usize> = (next..next + s).collect();
            next += s;
            m.push(k + g + i);
            m
        })
        .collect();
    let layout = GroupLayout { roles: roles(k, g, l), groups };
    let generator = coupled_generator(&layout, k, g, &points)?;
    let r = *sizes.iter().max().unwrap();
    let spec = CodeSpec { family: Family::Ulrc, n, k, r, z: l, alpha: None, g, l, d: g + 1, f: g };
    CodeDefinition::assemble(spec, layout, generator, points)
}
