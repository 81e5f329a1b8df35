//! Truncated TLS x Fock basis.
//!
//! A bath configuration is the occupation shift `dn` relative to a reference
//! occupation vector, stored sparsely as the sorted list of `(mode, delta)` pairs
//! with nonzero delta. Configurations obey `sum |dn_k| <= n_ph` and
//! `n_k^ref + dn_k >= 0`. Every configuration carries both TLS states; the full
//! state index is `2 * config + tls` with `tls = 0` for `sigma_z = +1`.

use std::collections::HashMap;

use crate::error::{invalid, Error, Result};
use crate::hilbert::bath::{BathModes, BathSpec};

/// Default ceiling on the number of basis states (TLS included).
pub const DEFAULT_STATE_BUDGET: usize = 8_000_000;

const DELTA_BIAS: i32 = 128;

#[inline]
fn pack(mode: usize, delta: i32) -> u32 {
    ((mode as u32) << 8) | ((delta + DELTA_BIAS) as u32)
}

#[inline]
fn unpack(e: u32) -> (usize, i32) {
    ((e >> 8) as usize, (e & 0xff) as i32 - DELTA_BIAS)
}

/// Sparse symmetric matrix over bath configurations in compressed-row form.
#[derive(Clone, Debug, Default)]
pub struct Csr {
    pub row_ptr: Vec<usize>,
    pub col: Vec<u32>,
    pub val: Vec<f64>,
}

impl Csr {
    pub fn nnz(&self) -> usize {
        self.val.len()
    }

    #[inline]
    pub fn row(&self, r: usize) -> (&[u32], &[f64]) {
        let (a, b) = (self.row_ptr[r], self.row_ptr[r + 1]);
        (&self.col[a..b], &self.val[a..b])
    }

    fn from_triplets(n: usize, mut trip: Vec<(u32, u32, f64)>) -> Self {
        trip.sort_unstable_by_key(|t| (t.0, t.1));
        let mut row_ptr = vec![0usize; n + 1];
        for &(r, _, _) in &trip {
            row_ptr[r as usize + 1] += 1;
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        let col = trip.iter().map(|t| t.1).collect();
        let val = trip.iter().map(|t| t.2).collect();
        Self { row_ptr, col, val }
    }
}

#[derive(Clone, Debug)]
pub struct TruncatedBasis {
    m_mod: usize,
    n_ph: usize,
    reference: Vec<u32>,
    offsets: Vec<usize>,
    entries: Vec<u32>,
    index: HashMap<Box<[u32]>, u32>,
}

impl TruncatedBasis {
    /// Number of bath configurations.
    pub fn n_configs(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of basis states, TLS included.
    pub fn dim(&self) -> usize {
        2 * self.n_configs()
    }

    pub fn m_mod(&self) -> usize {
        self.m_mod
    }

    pub fn n_ph(&self) -> usize {
        self.n_ph
    }

    pub fn reference_occupations(&self) -> &[u32] {
        &self.reference
    }

    fn raw(&self, c: usize) -> &[u32] {
        &self.entries[self.offsets[c]..self.offsets[c + 1]]
    }

    /// Nonzero `(mode, delta)` pairs of configuration `c`, sorted by mode.
    pub fn config(&self, c: usize) -> impl Iterator<Item = (usize, i32)> + '_ {
        self.raw(c).iter().map(|&e| unpack(e))
    }

    /// Dense occupation shift of configuration `c`.
    pub fn delta_vector(&self, c: usize) -> Vec<i32> {
        let mut v = vec![0; self.m_mod];
        for (k, d) in self.config(c) {
            v[k] = d;
        }
        v
    }

    /// Total excitation `sum |dn_k|` of configuration `c`.
    pub fn excitation(&self, c: usize) -> usize {
        self.config(c).map(|(_, d)| d.unsigned_abs() as usize).sum()
    }

    /// Ordinal of the configuration with the given sparse shift.
    pub fn lookup(&self, pairs: &[(usize, i32)]) -> Option<usize> {
        let key: Vec<u32> = pairs
            .iter()
            .filter(|p| p.1 != 0)
            .map(|&(k, d)| pack(k, d))
            .collect();
        self.index.get(key.as_slice()).map(|&i| i as usize)
    }

    /// Ordinal of a dense occupation shift.
    pub fn lookup_dense(&self, delta: &[i32]) -> Option<usize> {
        if delta.len() != self.m_mod {
            return None;
        }
        let pairs: Vec<(usize, i32)> = delta
            .iter()
            .enumerate()
            .filter(|p| *p.1 != 0)
            .map(|(k, &d)| (k, d))
            .collect();
        self.lookup(&pairs)
    }

    /// Bath energy `sum_k omega_k dn_k` of every configuration.
    pub fn bath_energies(&self, modes: &BathModes) -> Vec<f64> {
        (0..self.n_configs())
            .map(|c| self.config(c).map(|(k, d)| modes.omega[k] * d as f64).sum())
            .collect()
    }

    /// Matrix of `sum_k g_k (b_k + b_k^dagger)` restricted to the basis.
    ///
    /// Transitions that leave the truncated space are dropped.
    pub fn coupling_matrix(&self, modes: &BathModes) -> Csr {
        let mut trip = Vec::new();
        let mut key: Vec<u32> = Vec::with_capacity(self.n_ph + 1);
        let occupied: Vec<usize> = (0..self.m_mod).filter(|&k| self.reference[k] > 0).collect();
        for c in 0..self.n_configs() {
            let cur = self.raw(c);
            let mut candidates: Vec<usize> = cur.iter().map(|&e| unpack(e).0).collect();
            candidates.extend(occupied.iter().copied());
            candidates.sort_unstable();
            candidates.dedup();
            for k in candidates {
                let d = cur
                    .iter()
                    .map(|&e| unpack(e))
                    .find(|p| p.0 == k)
                    .map_or(0, |p| p.1);
                let n = self.reference[k] as i64 + d as i64;
                if n < 1 {
                    continue;
                }
                key.clear();
                let mut placed = false;
                for &e in cur {
                    let (kk, dd) = unpack(e);
                    if kk == k {
                        placed = true;
                        if dd - 1 != 0 {
                            key.push(pack(kk, dd - 1));
                        }
                    } else {
                        if kk > k && !placed {
                            key.push(pack(k, -1));
                            placed = true;
                        }
                        key.push(e);
                    }
                }
                if !placed {
                    key.push(pack(k, -1));
                }
                if let Some(&lower) = self.index.get(key.as_slice()) {
                    let v = modes.coupling[k] * (n as f64).sqrt();
                    if v != 0.0 {
                        trip.push((lower, c as u32, v));
                        trip.push((c as u32, lower, v));
                    }
                }
            }
        }
        Csr::from_triplets(self.n_configs(), trip)
    }

    /// Stable fingerprint of the basis (mode count, cap, reference occupations).
    pub fn fingerprint(&self) -> u64 {
        const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
        const PRIME: u64 = 0x0100_0000_01b3;
        let mut h = OFFSET;
        let mut eat = |x: u64| {
            for b in x.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(PRIME);
            }
        };
        eat(self.m_mod as u64);
        eat(self.n_ph as u64);
        for &r in &self.reference {
            eat(r as u64);
        }
        eat(self.n_configs() as u64);
        h
    }
}

/// Exact number of bath configurations for the given cap and references.
pub fn count_configs(n_ph: usize, reference: &[u32]) -> u128 {
    // ways[w] = number of partial configurations with total excitation w
    let mut ways = vec![0u128; n_ph + 1];
    ways[0] = 1;
    for &r in reference {
        let mut next = vec![0u128; n_ph + 1];
        for (w, &base) in ways.iter().enumerate() {
            if base == 0 {
                continue;
            }
            next[w] = next[w].saturating_add(base);
            for step in 1..=n_ph - w {
                let mult = 1 + u128::from(step <= r as usize);
                next[w + step] = next[w + step].saturating_add(base.saturating_mul(mult));
            }
        }
        ways = next;
    }
    ways.iter().fold(0u128, |a, &b| a.saturating_add(b))
}

/// Number of basis states (TLS included) at zero temperature.
pub fn zero_temperature_dim(m_mod: usize, n_ph: usize) -> u128 {
    2 * count_configs(n_ph, &vec![0; m_mod])
}

pub fn enumerate_basis(spec: &BathSpec, modes: &BathModes) -> Result<TruncatedBasis> {
    enumerate_basis_around(spec, modes, &vec![0; spec.m_mod], DEFAULT_STATE_BUDGET)
}

/// Enumerates the configurations around `reference` in graded-lexicographic order.
pub fn enumerate_basis_around(
    spec: &BathSpec,
    modes: &BathModes,
    reference: &[u32],
    budget: usize,
) -> Result<TruncatedBasis> {
    spec.validate()?;
    if modes.len() != spec.m_mod {
        return Err(Error::DimensionMismatch {
            expected: spec.m_mod,
            found: modes.len(),
        });
    }
    if reference.len() != spec.m_mod {
        return Err(Error::DimensionMismatch {
            expected: spec.m_mod,
            found: reference.len(),
        });
    }
    if spec.n_ph >= DELTA_BIAS as usize || spec.m_mod >= (1 << 24) {
        return Err(invalid(
            "n_ph",
            "excitation cap or mode count too large for the packed index",
        ));
    }
    let count = 2 * count_configs(spec.n_ph, reference);
    if count > budget as u128 {
        return Err(Error::BasisTooLarge { count, budget });
    }
    let n_conf = (count / 2) as usize;

    let mut offsets = Vec::with_capacity(n_conf + 1);
    let mut entries = Vec::new();
    offsets.push(0);
    let mut stack = Vec::with_capacity(spec.n_ph);
    for w in 0..=spec.n_ph {
        emit(reference, 0, w, &mut stack, &mut entries, &mut offsets);
    }
    debug_assert_eq!(offsets.len() - 1, n_conf);

    let mut index = HashMap::with_capacity(n_conf);
    for c in 0..n_conf {
        index.insert(
            entries[offsets[c]..offsets[c + 1]]
                .to_vec()
                .into_boxed_slice(),
            c as u32,
        );
    }
    Ok(TruncatedBasis {
        m_mod: spec.m_mod,
        n_ph: spec.n_ph,
        reference: reference.to_vec(),
        offsets,
        entries,
        index,
    })
}

/// Emits every completion of `stack` using modes `>= first` with remaining weight `left`.
fn emit(
    reference: &[u32],
    first: usize,
    left: usize,
    stack: &mut Vec<u32>,
    entries: &mut Vec<u32>,
    offsets: &mut Vec<usize>,
) {
    if left == 0 {
        entries.extend_from_slice(stack);
        offsets.push(entries.len());
        return;
    }
    for k in first..reference.len() {
        let lowest = -(left.min(reference[k] as usize) as i32);
        for d in (lowest..=left as i32).filter(|&d| d != 0) {
            stack.push(pack(k, d));
            emit(
                reference,
                k + 1,
                left - d.unsigned_abs() as usize,
                stack,
                entries,
                offsets,
            );
            stack.pop();
        }
    }
}
