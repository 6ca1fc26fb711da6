//! Per-core rectangle sets and the diagonal-length ordering used to seed the
//! packing loop.

use std::cmp::Ordering;

use crate::design::SocDesign;
use crate::error::{Error, Result};
use crate::wrapper::{tam_time_table, TamTimePoint};

/// Selectable rectangles of one core: height is the TAM width used, width is
/// the test time at that height. Points are sorted by decreasing `tam_u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RectangleSet {
    pub core_id: u32,
    pub points: Vec<TamTimePoint>,
    pub max_tam_u: u32,
}

impl RectangleSet {
    pub fn from_points(core_id: u32, mut points: Vec<TamTimePoint>) -> Self {
        points.sort_by_key(|p| std::cmp::Reverse(p.tam_u));
        let max_tam_u = points.first().map_or(0, |p| p.tam_u);
        RectangleSet {
            core_id,
            points,
            max_tam_u,
        }
    }

    pub fn time_at(&self, tam_u: u32) -> Option<u64> {
        self.points
            .iter()
            .find(|p| p.tam_u == tam_u)
            .map(|p| p.test_time)
    }

    pub fn peak_time(&self) -> u64 {
        self.points.first().map_or(0, |p| p.test_time)
    }

    pub fn contains(&self, tam_u: u32) -> bool {
        self.time_at(tam_u).is_some()
    }
}

pub fn build_rectangles(design: &SocDesign, w_max: u32) -> Result<Vec<RectangleSet>> {
    if w_max == 0 {
        return Err(Error::ZeroWidth);
    }
    Ok(design
        .cores
        .iter()
        .map(|core| RectangleSet::from_points(core.id, tam_time_table(core, w_max)))
        .collect())
}

/// Smallest test time at `MAX_TAM_u` over all cores.
pub fn compute_tmin(sets: &[RectangleSet]) -> Result<u64> {
    sets.iter()
        .map(RectangleSet::peak_time)
        .min()
        .ok_or(Error::EmptyDesign)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalKey {
    pub core_id: u32,
    pub height: u32,
    /// Test time at `height` over `t_min`, kept exactly as a ratio.
    pub time: u64,
    pub t_min: u64,
    pub norm_width: f64,
    pub diagonal: f64,
}

impl DiagonalKey {
    pub fn new(core_id: u32, height: u32, time: u64, t_min: u64) -> Result<Self> {
        if t_min == 0 {
            return Err(Error::ZeroTmin);
        }
        let norm_width = time as f64 / t_min as f64;
        Ok(DiagonalKey {
            core_id,
            height,
            time,
            t_min,
            norm_width,
            diagonal: (height as f64).hypot(norm_width),
        })
    }

    /// `(height * t_min)^2 + time^2`, i.e. the squared diagonal scaled by
    /// `t_min^2`. Exact for cross-key comparison when `t_min` is shared.
    fn scaled_square(&self) -> u128 {
        let h = self.height as u128 * self.t_min as u128;
        h * h + self.time as u128 * self.time as u128
    }

    /// Exact comparison of diagonals, also across different `t_min` values.
    pub fn cmp_diagonal(&self, other: &Self) -> Ordering {
        if self.t_min == other.t_min {
            return self.scaled_square().cmp(&other.scaled_square());
        }
        // a/ta^2 vs b/tb^2  <=>  a * tb^2 vs b * ta^2
        let lhs = self.scaled_square() as f64 * (other.t_min as f64).powi(2);
        let rhs = other.scaled_square() as f64 * (self.t_min as f64).powi(2);
        lhs.partial_cmp(&rhs).unwrap_or(Ordering::Equal)
    }
}

pub fn diagonal_key(set: &RectangleSet, t_min: u64) -> Result<DiagonalKey> {
    DiagonalKey::new(set.core_id, set.max_tam_u, set.peak_time(), t_min)
}

/// Core ids by decreasing diagonal, then decreasing height, then increasing id.
pub fn sort_initial(keys: &[DiagonalKey]) -> Vec<u32> {
    let mut sorted: Vec<&DiagonalKey> = keys.iter().collect();
    sorted.sort_by(|a, b| {
        b.cmp_diagonal(a)
            .then(b.height.cmp(&a.height))
            .then(a.core_id.cmp(&b.core_id))
    });
    sorted.into_iter().map(|k| k.core_id).collect()
}

/// Rectangle sets, T_min, diagonal keys and the initial order in one go.
#[derive(Debug, Clone)]
pub struct Packing {
    pub sets: Vec<RectangleSet>,
    pub t_min: u64,
    pub keys: Vec<DiagonalKey>,
    pub order: Vec<u32>,
}

pub fn prepare(design: &SocDesign, w_max: u32) -> Result<Packing> {
    let sets = build_rectangles(design, w_max)?;
    let t_min = compute_tmin(&sets)?;
    let keys = sets
        .iter()
        .map(|s| diagonal_key(s, t_min))
        .collect::<Result<Vec<_>>>()?;
    let order = sort_initial(&keys);
    Ok(Packing {
        sets,
        t_min,
        keys,
        order,
    })
}
