//! Sorted spectra with multiplicities and channel provenance.

use serde::Serialize;

use crate::error::LabError;
use crate::scalar::Real;

/// Relative magnitude below which negative round-off is clamped to zero.
pub const NEGATIVE_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumEntry<T> {
    pub value: T,
    pub multiplicity: usize,
    /// Angular momentum ℓ for density spectra, 0 for one-channel operators.
    pub channel: usize,
    /// Position of the value inside its channel (0 = largest).
    pub radial_index: usize,
}

/// Nonincreasing sequence of eigen- or singular values, stored compactly as
/// entries with multiplicity. Ranks `k` are 1-based and count multiplicity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumSeries<T> {
    entries: Vec<SpectrumEntry<T>>,
    /// Largest rank at which two grid resolutions agree within 5%.
    pub trust_k: usize,
    /// Diagnostics raised while assembling the series.
    pub warnings: Vec<String>,
    offsets: Vec<usize>,
}

impl<T: Real> SpectrumSeries<T> {
    /// Sorts by (value desc, channel asc, radial index asc) and clamps
    /// round-off negatives. `trust_k` defaults to the full length.
    pub fn from_entries(mut entries: Vec<SpectrumEntry<T>>) -> Result<Self, LabError> {
        let largest = entries.iter().fold(T::zero(), |m, e| m.max(e.value));
        let clamp = T::lit(NEGATIVE_CLAMP) * largest;
        for e in entries.iter_mut() {
            if e.multiplicity == 0 {
                return Err(LabError::InvalidParameter { name: "multiplicity", reason: "must be at least 1".into() });
            }
            if e.value.is_nan() {
                return Err(LabError::Domain("spectrum contains NaN".into()));
            }
            if e.value < T::zero() {
                if -e.value > clamp {
                    return Err(LabError::Domain(format!(
                        "eigenvalue {} is negative beyond round-off (largest {})",
                        e.value, largest
                    )));
                }
                e.value = T::zero();
            }
        }
        entries.sort_by(|a, b| {
            b.value
                .partial_cmp(&a.value)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.channel.cmp(&b.channel))
                .then(a.radial_index.cmp(&b.radial_index))
        });
        let mut offsets = Vec::with_capacity(entries.len() + 1);
        let mut acc = 0;
        offsets.push(0);
        for e in &entries {
            acc += e.multiplicity;
            offsets.push(acc);
        }
        Ok(Self { entries, trust_k: acc, warnings: Vec::new(), offsets })
    }

    /// One-channel series with unit multiplicities.
    pub fn from_values(values: &[T]) -> Result<Self, LabError> {
        let entries = values
            .iter()
            .enumerate()
            .map(|(i, &value)| SpectrumEntry { value, multiplicity: 1, channel: 0, radial_index: i })
            .collect();
        Self::from_entries(entries)
    }

    pub fn entries(&self) -> &[SpectrumEntry<T>] {
        &self.entries
    }

    /// Number of values counting multiplicity.
    pub fn len(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Entry holding rank `k` (1-based).
    pub fn entry_at(&self, k: usize) -> Option<&SpectrumEntry<T>> {
        if k == 0 || k > self.len() {
            return None;
        }
        // offsets[i] < k <= offsets[i+1]
        let i = self.offsets.partition_point(|&o| o < k) - 1;
        self.entries.get(i)
    }

    /// Value at rank `k` (1-based).
    pub fn value_at(&self, k: usize) -> Option<T> {
        self.entry_at(k).map(|e| e.value)
    }

    pub fn largest(&self) -> T {
        self.entries.first().map(|e| e.value).unwrap_or_else(T::zero)
    }

    /// Values expanded by multiplicity.
    pub fn values(&self) -> Vec<T> {
        self.iter_ranked().map(|(_, e)| e.value).collect()
    }

    /// (rank, entry) pairs in rank order, each entry repeated by multiplicity.
    pub fn iter_ranked(&self) -> impl Iterator<Item = (usize, &SpectrumEntry<T>)> + '_ {
        self.entries
            .iter()
            .flat_map(|e| std::iter::repeat_n(e, e.multiplicity))
            .enumerate()
            .map(|(i, e)| (i + 1, e))
    }

    /// Σ value·multiplicity.
    pub fn total(&self) -> T {
        self.entries
            .iter()
            .fold(T::zero(), |acc, e| acc + e.value * T::from_usize_lossy(e.multiplicity))
    }

    /// Sets every value below `floor` to exactly zero.
    pub fn apply_floor(&mut self, floor: T) {
        for e in self.entries.iter_mut() {
            if e.value < floor {
                e.value = T::zero();
            }
        }
    }

    /// Number of ranks with a strictly positive value.
    pub fn positive_len(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| e.value > T::zero())
            .map(|e| e.multiplicity)
            .sum()
    }
}

/// Largest k such that the two spectra agree within `rel_tol` at every rank
/// 1..=k (only ranks where the reference value is positive are compared).
pub fn agreement_rank<T: Real>(fine: &SpectrumSeries<T>, coarse: &SpectrumSeries<T>, rel_tol: T) -> usize {
    let mut k = 0;
    for ((_, a), (_, b)) in fine.iter_ranked().zip(coarse.iter_ranked()) {
        if !(a.value > T::zero()) || (a.value - b.value).abs() > rel_tol * a.value {
            break;
        }
        k += 1;
    }
    k
}
