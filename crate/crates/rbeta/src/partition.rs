//! Regions E_k and S_k of the random beta-transformation, critical-orbit
//! enumeration, class-B certification and the refined Markov partition C.
//!
//! The interval I_beta = [0, floor(beta)/(beta-1)] splits into equality
//! regions E_k, where only the branch T_k(x) = beta x - k applies, and closed
//! switch regions S_k where both T_{k-1} and T_k are admissible. Class B
//! requires the orbit closure F of the region endpoints to stay finite and
//! avoid switch interiors; the partition C then refines the regions by F and
//! every cell maps onto a union of cells.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::json;
use thiserror::Error;

use crate::field::{FieldContext, FieldElement};

#[derive(Debug, Error)]
pub enum PartitionError {
    #[error("beta is not certified class B: {0}")]
    NotClassB(String),
    #[error("partition invariant violated: {0}")]
    Invariant(String),
}

/// Interval over Q(beta) with endpoint-membership flags.
#[derive(Clone, Debug)]
pub struct IntervalQB {
    pub lo: FieldElement,
    pub hi: FieldElement,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl IntervalQB {
    pub fn length(&self) -> FieldElement {
        &self.hi - &self.lo
    }
}

/// Cell tag: inside some E_k (emitting digit k) or equal to a switch region.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellLabel {
    Digit(u32),
    Switch(u32),
}

/// Region of a single point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    Equality(u32),
    Switch(u32),
}

/// Exact boundaries of the regions E_k / S_k.
pub struct Regions {
    ctx: Arc<FieldContext>,
    /// Left endpoints k/beta of S_k, k = 1..=floor(beta).
    pub switch_lo: Vec<FieldElement>,
    /// Right endpoints floor(beta)/(beta(beta-1)) + (k-1)/beta of S_k.
    pub switch_hi: Vec<FieldElement>,
    pub zero: FieldElement,
    pub i_right: FieldElement,
}

impl Regions {
    pub fn new(ctx: &Arc<FieldContext>) -> Regions {
        let b = ctx.floor_beta() as i64;
        let beta = ctx.beta();
        let base = &ctx.i_beta_right() / &beta; // b / (beta (beta - 1))
        let mut switch_lo = Vec::new();
        let mut switch_hi = Vec::new();
        for k in 1..=b {
            switch_lo.push(&ctx.from_int(k) / &beta);
            switch_hi.push(&base + &(&ctx.from_int(k - 1) / &beta));
        }
        Regions {
            ctx: ctx.clone(),
            switch_lo,
            switch_hi,
            zero: ctx.zero(),
            i_right: ctx.i_beta_right(),
        }
    }

    /// Region of x in I_beta. Switch regions are closed, equality regions
    /// open at shared endpoints, so the classification is unambiguous.
    pub fn classify(&self, x: &FieldElement) -> Region {
        debug_assert!(*x >= self.zero && *x <= self.i_right, "point outside I_beta");
        for k in 0..self.switch_lo.len() {
            if *x < self.switch_lo[k] {
                return Region::Equality(k as u32);
            }
            if *x <= self.switch_hi[k] {
                return Region::Switch(k as u32 + 1);
            }
        }
        Region::Equality(self.ctx.floor_beta())
    }

    pub fn is_in_switch_interior(&self, x: &FieldElement) -> Option<u32> {
        for k in 0..self.switch_lo.len() {
            if *x > self.switch_lo[k] && *x < self.switch_hi[k] {
                return Some(k as u32 + 1);
            }
        }
        None
    }

    /// Set-valued orbit step: a single branch on equality regions, both
    /// branches on the closed switch regions.
    pub fn step(&self, x: &FieldElement) -> Vec<(u32, FieldElement)> {
        let beta = self.ctx.beta();
        let apply = |digit: u32| {
            let img = &(&beta * x) - &self.ctx.from_int(digit as i64);
            (digit, img)
        };
        match self.classify(x) {
            Region::Equality(k) => vec![apply(k)],
            Region::Switch(k) => vec![apply(k), apply(k - 1)],
        }
    }
}

/// Critical points k/beta and floor(beta)/(beta(beta-1)) + k/beta for
/// k = 0..=floor(beta), deduplicated and sorted.
pub fn critical_points(ctx: &Arc<FieldContext>) -> Vec<FieldElement> {
    let b = ctx.floor_beta() as i64;
    let beta = ctx.beta();
    let base = &ctx.i_beta_right() / &beta;
    let mut points = Vec::new();
    for k in 0..=b {
        points.push(&ctx.from_int(k) / &beta);
        points.push(&base + &(&ctx.from_int(k) / &beta));
    }
    points.sort();
    points.dedup();
    points
}

/// Orbit closure of the critical points under the set-valued step.
#[derive(Debug)]
pub struct OrbitSetF {
    /// Points in ascending order.
    pub points: Vec<FieldElement>,
    /// Successor indices per point, aligned with `points`.
    pub edges: Vec<Vec<usize>>,
    pub truncated: bool,
}

impl OrbitSetF {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn closure_from(
    regions: &Regions,
    seeds: Vec<FieldElement>,
    budget: usize,
) -> (BTreeMap<FieldElement, Vec<FieldElement>>, bool) {
    let mut seen: BTreeMap<FieldElement, Vec<FieldElement>> = BTreeMap::new();
    let mut queue: Vec<FieldElement> = Vec::new();
    let mut truncated = false;
    for s in seeds {
        if !seen.contains_key(&s) {
            if seen.len() >= budget {
                truncated = true;
                break;
            }
            seen.insert(s.clone(), Vec::new());
            queue.push(s);
        }
    }
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head].clone();
        head += 1;
        let succs: Vec<FieldElement> =
            regions.step(&x).into_iter().map(|(_, y)| y).collect();
        for y in &succs {
            if !seen.contains_key(y) {
                if seen.len() >= budget {
                    truncated = true;
                    continue;
                }
                seen.insert(y.clone(), Vec::new());
                queue.push(y.clone());
            }
        }
        seen.insert(x, succs);
    }
    (seen, truncated)
}

/// Breadth-first closure of the critical points; stops (with the flag set)
/// once `budget` distinct points have been collected.
pub fn orbit_closure(ctx: &Arc<FieldContext>, budget: usize) -> OrbitSetF {
    assert!(budget >= 1);
    let regions = Regions::new(ctx);
    let (seen, truncated) = closure_from(&regions, critical_points(ctx), budget);
    let points: Vec<FieldElement> = seen.keys().cloned().collect();
    let index: BTreeMap<&FieldElement, usize> =
        points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let edges = points
        .iter()
        .map(|p| {
            seen[p]
                .iter()
                .filter_map(|s| index.get(s).copied())
                .collect()
        })
        .collect();
    OrbitSetF {
        points,
        edges,
        truncated,
    }
}

#[derive(Debug)]
pub enum ClassBVerdict {
    Yes { orbit_size: usize },
    No { witness: FieldElement, switch_index: u32 },
    Unknown,
}

/// Budgeted class-B certification. A witness in a switch interior decides
/// "no" even when the closure is truncated; "yes" requires full closure.
pub fn certify_class_b(ctx: &Arc<FieldContext>, budget: usize) -> ClassBVerdict {
    let regions = Regions::new(ctx);
    let mut seen: BTreeMap<FieldElement, ()> = BTreeMap::new();
    let mut queue: Vec<FieldElement> = Vec::new();
    let mut truncated = false;
    for s in critical_points(ctx) {
        if seen.len() >= budget {
            truncated = true;
            break;
        }
        seen.insert(s.clone(), ());
        queue.push(s);
    }
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head].clone();
        head += 1;
        if let Some(k) = regions.is_in_switch_interior(&x) {
            return ClassBVerdict::No {
                witness: x,
                switch_index: k,
            };
        }
        for (_, y) in regions.step(&x) {
            if !seen.contains_key(&y) {
                if seen.len() >= budget {
                    truncated = true;
                    continue;
                }
                seen.insert(y.clone(), ());
                queue.push(y);
            }
        }
    }
    if truncated {
        ClassBVerdict::Unknown
    } else {
        ClassBVerdict::Yes {
            orbit_size: seen.len(),
        }
    }
}

/// The refined Markov partition C with cell labels and index bookkeeping.
#[derive(Debug)]
pub struct PartitionC {
    pub ctx: Arc<FieldContext>,
    pub cells: Vec<IntervalQB>,
    pub labels: Vec<CellLabel>,
    /// `m_sets[k]` lists the cells composing E_k.
    pub m_sets: Vec<Vec<usize>>,
    /// `switch_cells[i-1]` is the cell equal to S_i.
    pub switch_cells: Vec<usize>,
    /// Endpoint-convention collisions observed while assigning openness.
    pub notes: Vec<String>,
}

impl PartitionC {
    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    /// Cell boundaries: `cells[i]` spans `cuts[i]..cuts[i+1]`.
    pub fn cuts(&self) -> Vec<FieldElement> {
        let mut cuts: Vec<FieldElement> = self.cells.iter().map(|c| c.lo.clone()).collect();
        cuts.push(self.cells.last().unwrap().hi.clone());
        cuts
    }

    pub fn to_json(&self) -> serde_json::Value {
        let cells: Vec<_> = self
            .cells
            .iter()
            .zip(&self.labels)
            .map(|(cell, label)| {
                let label_json = match label {
                    CellLabel::Digit(k) => json!({ "digit": k }),
                    CellLabel::Switch(i) => json!({ "switch": i }),
                };
                json!({
                    "lo": cell.lo.coeff_strings(),
                    "hi": cell.hi.coeff_strings(),
                    "lo_closed": cell.lo_closed,
                    "hi_closed": cell.hi_closed,
                    "label": label_json,
                    "approx": [cell.lo.to_f64(), cell.hi.to_f64()],
                })
            })
            .collect();
        json!({
            "cells": cells,
            "m_sets": self.m_sets,
            "switch_cells": self.switch_cells,
            "notes": self.notes,
        })
    }
}

/// Builds the partition C from a certified orbit closure.
///
/// Cut points are the elements of F. Interior endpoint membership follows,
/// in order of precedence: switch-region closures from the base partition,
/// then the rule that orbit points of 1 open the cell on their left (they are
/// left endpoints), then the rule that orbit points of floor(beta)/(beta-1)-1
/// close it (they are right endpoints).
pub fn build_partition(
    ctx: &Arc<FieldContext>,
    orbit: &OrbitSetF,
) -> Result<PartitionC, PartitionError> {
    if orbit.truncated {
        return Err(PartitionError::NotClassB(
            "orbit closure truncated; class-B status unknown".into(),
        ));
    }
    let regions = Regions::new(ctx);
    for p in &orbit.points {
        if let Some(k) = regions.is_in_switch_interior(p) {
            return Err(PartitionError::NotClassB(format!(
                "orbit point {:?} lies in the interior of S_{}",
                p, k
            )));
        }
    }

    let one = ctx.one();
    let right_seed = &ctx.i_beta_right() - &one;
    let budget = orbit.len() * 4 + 16;
    let (family_one, t1) = closure_from(&regions, vec![one.clone()], budget);
    let (family_right, t2) = closure_from(&regions, vec![right_seed.clone()], budget);
    if t1 || t2 {
        return Err(PartitionError::Invariant(
            "family closures exceeded the certified orbit size".into(),
        ));
    }

    let cuts = orbit.points.clone();
    let n = cuts.len();
    if n < 2 {
        return Err(PartitionError::Invariant("fewer than two cut points".into()));
    }
    if cuts[0] != regions.zero || cuts[n - 1] != regions.i_right {
        return Err(PartitionError::Invariant(
            "orbit closure misses the endpoints of I_beta".into(),
        ));
    }

    let is_switch_endpoint = |x: &FieldElement| -> Option<(u32, bool)> {
        for k in 0..regions.switch_lo.len() {
            if x == &regions.switch_lo[k] {
                return Some((k as u32 + 1, true));
            }
            if x == &regions.switch_hi[k] {
                return Some((k as u32 + 1, false));
            }
        }
        None
    };

    let mut notes = Vec::new();
    // belongs_right[i]: interior cut i belongs to the cell on its right
    let mut belongs_right = vec![false; n];
    for i in 1..n - 1 {
        let c = &cuts[i];
        let in_one = family_one.contains_key(c);
        let in_right = family_right.contains_key(c);
        if let Some((k, is_left_end)) = is_switch_endpoint(c) {
            belongs_right[i] = is_left_end; // closed switch region takes the point
            if in_one || in_right {
                notes.push(format!(
                    "cut {} coincides with an endpoint of S_{}; base-partition closure applied",
                    c.to_f64(),
                    k
                ));
            }
        } else if in_one {
            belongs_right[i] = true; // left endpoint of the cell on the right
            if in_right {
                notes.push(format!(
                    "cut {} lies in both refinement orbits; orbit-of-1 precedence applied",
                    c.to_f64()
                ));
            }
        } else if in_right {
            belongs_right[i] = false;
        } else {
            return Err(PartitionError::Invariant(format!(
                "cut {} belongs to no refinement family and no region endpoint",
                c.to_f64()
            )));
        }
    }

    let mut cells = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let lo_closed = if i == 0 { true } else { belongs_right[i] };
        let hi_closed = if i + 1 == n - 1 {
            true
        } else {
            !belongs_right[i + 1]
        };
        if cuts[i] >= cuts[i + 1] {
            return Err(PartitionError::Invariant("degenerate cell".into()));
        }
        cells.push(IntervalQB {
            lo: cuts[i].clone(),
            hi: cuts[i + 1].clone(),
            lo_closed,
            hi_closed,
        });
    }

    // labels from the region of the open interior
    let b = ctx.floor_beta() as usize;
    let half = ctx.from_rational(BigRational::new(BigInt::from(1), BigInt::from(2)));
    let mut labels = Vec::with_capacity(cells.len());
    let mut m_sets: Vec<Vec<usize>> = vec![Vec::new(); b + 1];
    let mut switch_cells: Vec<Option<usize>> = vec![None; b];
    for (j, cell) in cells.iter().enumerate() {
        let mid = &(&cell.lo + &cell.hi) * &half;
        match regions.classify(&mid) {
            Region::Equality(k) => {
                labels.push(CellLabel::Digit(k));
                m_sets[k as usize].push(j);
            }
            Region::Switch(k) => {
                let ki = (k - 1) as usize;
                if cell.lo != regions.switch_lo[ki] || cell.hi != regions.switch_hi[ki] {
                    return Err(PartitionError::Invariant(format!(
                        "cell {} overlaps S_{} without equaling it",
                        j, k
                    )));
                }
                if switch_cells[ki].is_some() {
                    return Err(PartitionError::Invariant(format!(
                        "S_{} split across multiple cells",
                        k
                    )));
                }
                labels.push(CellLabel::Switch(k));
                switch_cells[ki] = Some(j);
            }
        }
    }
    let switch_cells: Vec<usize> = switch_cells
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            s.ok_or_else(|| PartitionError::Invariant(format!("S_{} has no cell", i + 1)))
        })
        .collect::<Result<_, _>>()?;

    let partition = PartitionC {
        ctx: ctx.clone(),
        cells,
        labels,
        m_sets,
        switch_cells,
        notes,
    };
    verify_partition(&partition, &regions)?;
    Ok(partition)
}

/// Image of a non-switch cell under its branch, expressed as a run of cell
/// indices tiling the image hull exactly.
pub(crate) fn image_cells(
    partition: &PartitionC,
    cell_index: usize,
) -> Result<Vec<usize>, PartitionError> {
    let digit = match partition.labels[cell_index] {
        CellLabel::Digit(k) => k,
        CellLabel::Switch(_) => {
            panic!("image_cells is defined for non-switch cells only")
        }
    };
    let ctx = &partition.ctx;
    let beta = ctx.beta();
    let d = ctx.from_int(digit as i64);
    let cell = &partition.cells[cell_index];
    let img_lo = &(&beta * &cell.lo) - &d;
    let img_hi = &(&beta * &cell.hi) - &d;
    let cuts = partition.cuts();
    let start = cuts
        .iter()
        .position(|c| *c == img_lo)
        .ok_or_else(|| err_tiling(cell_index, "left image endpoint is not a cut"))?;
    let end = cuts
        .iter()
        .position(|c| *c == img_hi)
        .ok_or_else(|| err_tiling(cell_index, "right image endpoint is not a cut"))?;
    if end <= start {
        return Err(err_tiling(cell_index, "empty image range"));
    }
    Ok((start..end).collect())
}

fn err_tiling(cell: usize, what: &str) -> PartitionError {
    PartitionError::Invariant(format!("image of cell {} is not a union of cells: {}", cell, what))
}

/// Checks the structural properties of C exactly: the fixed first and last
/// cells, region tilings, switch cells, Markov images and their symmetry,
/// and the switch-branch images onto C_0 and C_K.
fn verify_partition(p: &PartitionC, regions: &Regions) -> Result<(), PartitionError> {
    let ctx = &p.ctx;
    let k_last = p.n_cells() - 1;
    let one = ctx.one();
    let right_minus_one = &regions.i_right - &one;

    // (i) C_0 = [0, b/(beta-1) - 1], C_K = [1, b/(beta-1)]
    if p.cells[0].lo != regions.zero || p.cells[0].hi != right_minus_one {
        return Err(PartitionError::Invariant("C_0 endpoints are wrong".into()));
    }
    if p.cells[k_last].lo != one || p.cells[k_last].hi != regions.i_right {
        return Err(PartitionError::Invariant("C_K endpoints are wrong".into()));
    }

    // (ii) E_k tiled by M_k, with |M_k| = |M_{b-k}|
    let b = ctx.floor_beta() as usize;
    for k in 0..=b {
        let cells = &p.m_sets[k];
        if cells.is_empty() {
            return Err(PartitionError::Invariant(format!("E_{} has no cells", k)));
        }
        for w in cells.windows(2) {
            if w[1] != w[0] + 1 {
                return Err(PartitionError::Invariant(format!(
                    "E_{} cells are not consecutive",
                    k
                )));
            }
        }
        let lo = &p.cells[cells[0]].lo;
        let hi = &p.cells[*cells.last().unwrap()].hi;
        let (want_lo, want_hi) = equality_region_hull(regions, k as u32);
        if *lo != want_lo || *hi != want_hi {
            return Err(PartitionError::Invariant(format!(
                "E_{} hull mismatch",
                k
            )));
        }
        if p.m_sets[k].len() != p.m_sets[b - k].len() {
            return Err(PartitionError::Invariant(format!(
                "|M_{}| != |M_{}|",
                k,
                b - k
            )));
        }
    }

    // (iii) implied by construction; re-check hulls
    for (i, &j) in p.switch_cells.iter().enumerate() {
        if p.cells[j].lo != regions.switch_lo[i] || p.cells[j].hi != regions.switch_hi[i] {
            return Err(PartitionError::Invariant(format!("S_{} cell mismatch", i + 1)));
        }
    }

    // (iv) non-switch images tile cells, and the tilings are index-symmetric
    let mut images: Vec<Option<Vec<usize>>> = vec![None; p.n_cells()];
    for j in 0..p.n_cells() {
        if matches!(p.labels[j], CellLabel::Digit(_)) {
            images[j] = Some(image_cells(p, j)?);
        }
    }
    for j in 0..p.n_cells() {
        if let Some(img) = &images[j] {
            let mirror = &images[k_last - j];
            let mirror = mirror.as_ref().ok_or_else(|| {
                PartitionError::Invariant(format!("cell {} mirrors a switch cell", j))
            })?;
            let mut reflected: Vec<usize> = img.iter().map(|&c| k_last - c).collect();
            reflected.sort_unstable();
            if &reflected != mirror {
                return Err(PartitionError::Invariant(format!(
                    "image of cell {} is not symmetric to cell {}",
                    j,
                    k_last - j
                )));
            }
        }
    }

    // (v) switch branches map onto C_0 and C_K
    let beta = ctx.beta();
    for (i, &j) in p.switch_cells.iter().enumerate() {
        let k = (i + 1) as i64;
        let cell = &p.cells[j];
        let upper_lo = &(&beta * &cell.lo) - &ctx.from_int(k);
        let upper_hi = &(&beta * &cell.hi) - &ctx.from_int(k);
        if upper_lo != p.cells[0].lo || upper_hi != p.cells[0].hi {
            return Err(PartitionError::Invariant(format!(
                "T_{}(S_{}) is not C_0",
                k, k
            )));
        }
        let lower_lo = &(&beta * &cell.lo) - &ctx.from_int(k - 1);
        let lower_hi = &(&beta * &cell.hi) - &ctx.from_int(k - 1);
        if lower_lo != p.cells[k_last].lo || lower_hi != p.cells[k_last].hi {
            return Err(PartitionError::Invariant(format!(
                "T_{}(S_{}) is not C_K",
                k - 1,
                k
            )));
        }
    }

    // disjoint cover of I_beta respecting flags
    for w in 0..p.n_cells() - 1 {
        let a = &p.cells[w];
        let b2 = &p.cells[w + 1];
        if a.hi != b2.lo {
            return Err(PartitionError::Invariant("cells do not chain".into()));
        }
        if a.hi_closed == b2.lo_closed {
            return Err(PartitionError::Invariant(
                "shared endpoint belongs to both or neither cell".into(),
            ));
        }
    }
    if !p.cells[0].lo_closed || !p.cells[k_last].hi_closed {
        return Err(PartitionError::Invariant(
            "outer endpoints of I_beta must be covered".into(),
        ));
    }
    Ok(())
}

fn equality_region_hull(regions: &Regions, k: u32) -> (FieldElement, FieldElement) {
    let b = regions.switch_lo.len() as u32;
    let lo = if k == 0 {
        regions.zero.clone()
    } else {
        regions.switch_hi[(k - 1) as usize].clone()
    };
    let hi = if k == b {
        regions.i_right.clone()
    } else {
        regions.switch_lo[k as usize].clone()
    };
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldContext;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn golden() -> Arc<FieldContext> {
        FieldContext::new(
            &[-1, -1, 1],
            BigRational::from_integer(BigInt::from(1)),
            BigRational::from_integer(BigInt::from(2)),
        )
        .unwrap()
    }

    fn quartic() -> Arc<FieldContext> {
        FieldContext::new(
            &[-3, -2, -1, -3, 1],
            BigRational::new(BigInt::from(7), BigInt::from(2)),
            BigRational::new(BigInt::from(18), BigInt::from(5)),
        )
        .unwrap()
    }

    #[test]
    fn golden_critical_points() {
        let ctx = golden();
        let pts = critical_points(&ctx);
        assert_eq!(pts.len(), 4);
        let beta = ctx.beta();
        let expected = vec![
            ctx.zero(),
            &ctx.one() / &beta,
            ctx.one(),
            beta.clone(),
        ];
        assert_eq!(pts, expected);
        assert!(pts[0].is_zero_value());
    }

    #[test]
    fn quartic_critical_points_count() {
        let ctx = quartic();
        let pts = critical_points(&ctx);
        assert_eq!(pts.len(), 8);
        let right = ctx.i_beta_right();
        for p in &pts {
            assert!(p.sign() >= 0);
            assert!(*p <= right);
        }
    }

    #[test]
    fn golden_orbit_closure() {
        let ctx = golden();
        let orbit = orbit_closure(&ctx, 100);
        assert!(!orbit.truncated);
        assert_eq!(orbit.len(), 4);
        // successor structure: 0 -> {0}; 1/beta -> {0, 1}; 1 -> {1/beta, beta};
        // beta -> {1}
        let pts = &orbit.points;
        let idx = |x: &FieldElement| pts.iter().position(|p| p == x).unwrap();
        let beta = ctx.beta();
        let inv_beta = &ctx.one() / &beta;
        let mut succ0 = orbit.edges[idx(&ctx.zero())].clone();
        succ0.sort_unstable();
        succ0.dedup();
        assert_eq!(succ0, vec![idx(&ctx.zero())]);
        let mut s = orbit.edges[idx(&inv_beta)].clone();
        s.sort_unstable();
        assert_eq!(s, vec![idx(&ctx.zero()), idx(&ctx.one())]);
        let mut s = orbit.edges[idx(&ctx.one())].clone();
        s.sort_unstable();
        assert_eq!(s, vec![idx(&inv_beta), idx(&beta)]);
        // the right endpoint of I_beta is fixed by T_1: beta^2 - 1 = beta
        assert_eq!(orbit.edges[idx(&beta)], vec![idx(&beta)]);
    }

    #[test]
    fn budget_one_truncates() {
        let ctx = golden();
        let orbit = orbit_closure(&ctx, 1);
        assert!(orbit.truncated);
    }

    #[test]
    fn golden_is_class_b() {
        let ctx = golden();
        match certify_class_b(&ctx, 100) {
            ClassBVerdict::Yes { orbit_size } => assert_eq!(orbit_size, 4),
            v => panic!("expected yes, got {v:?}"),
        }
    }

    #[test]
    fn quartic_is_class_b() {
        let ctx = quartic();
        match certify_class_b(&ctx, 10_000) {
            ClassBVerdict::Yes { orbit_size } => assert_eq!(orbit_size, 14),
            v => panic!("expected yes, got {v:?}"),
        }
    }

    #[test]
    fn sqrt13_like_field_is_not_class_b() {
        // x^2 - x - 3 on (2, 3): the orbit of 1 enters the interior of S_2
        let ctx = FieldContext::new(
            &[-3, -1, 1],
            BigRational::from_integer(BigInt::from(2)),
            BigRational::from_integer(BigInt::from(3)),
        )
        .unwrap();
        match certify_class_b(&ctx, 100_000) {
            ClassBVerdict::No { witness, switch_index } => {
                assert_eq!(witness, ctx.one());
                assert_eq!(switch_index, 2);
            }
            v => panic!("expected no, got {v:?}"),
        }
    }

    #[test]
    fn golden_partition_matches_hand_construction() {
        let ctx = golden();
        let orbit = orbit_closure(&ctx, 100);
        let p = build_partition(&ctx, &orbit).unwrap();
        assert_eq!(p.n_cells(), 3);
        let beta = ctx.beta();
        let inv_beta = &ctx.one() / &beta;
        assert_eq!(p.cells[0].lo, ctx.zero());
        assert_eq!(p.cells[0].hi, inv_beta);
        assert_eq!(p.cells[1].lo, inv_beta);
        assert_eq!(p.cells[1].hi, ctx.one());
        assert_eq!(p.cells[2].hi, beta);
        assert_eq!(p.labels[0], CellLabel::Digit(0));
        assert_eq!(p.labels[1], CellLabel::Switch(1));
        assert_eq!(p.labels[2], CellLabel::Digit(1));
        assert_eq!(p.m_sets[0], vec![0]);
        assert_eq!(p.m_sets[1], vec![2]);
        assert_eq!(p.switch_cells, vec![1]);
    }

    #[test]
    fn quartic_partition_validates() {
        let ctx = quartic();
        let orbit = orbit_closure(&ctx, 10_000);
        let p = build_partition(&ctx, &orbit).unwrap();
        assert_eq!(p.n_cells(), 13);
        assert_eq!(p.m_sets[0].len(), 2);
        assert_eq!(p.m_sets[1].len(), 3);
        assert_eq!(p.m_sets[2].len(), 3);
        assert_eq!(p.m_sets[3].len(), 2);
        // cell count at least 2*floor(beta) + 1
        assert!(p.n_cells() >= 2 * ctx.floor_beta() as usize + 1);
    }

    #[test]
    fn partition_is_deterministic() {
        let ctx = quartic();
        let orbit = orbit_closure(&ctx, 10_000);
        let p1 = build_partition(&ctx, &orbit).unwrap();
        let p2 = build_partition(&ctx, &orbit).unwrap();
        assert_eq!(p1.n_cells(), p2.n_cells());
        for (a, b) in p1.cells.iter().zip(&p2.cells) {
            assert_eq!(a.lo, b.lo);
            assert_eq!(a.hi, b.hi);
            assert_eq!(a.lo_closed, b.lo_closed);
            assert_eq!(a.hi_closed, b.hi_closed);
        }
    }

    #[test]
    fn interior_points_classify_like_their_cell() {
        let ctx = quartic();
        let orbit = orbit_closure(&ctx, 10_000);
        let p = build_partition(&ctx, &orbit).unwrap();
        let regions = Regions::new(&ctx);
        let half = ctx.from_rational(BigRational::new(BigInt::from(1), BigInt::from(2)));
        for (j, cell) in p.cells.iter().enumerate() {
            let mid = &(&cell.lo + &cell.hi) * &half;
            match (p.labels[j], regions.classify(&mid)) {
                (CellLabel::Digit(k), Region::Equality(r)) => assert_eq!(k, r),
                (CellLabel::Switch(i), Region::Switch(r)) => assert_eq!(i, r),
                (l, r) => panic!("cell {j} label {l:?} but region {r:?}"),
            }
        }
    }

    #[test]
    fn not_class_b_rejected_by_builder() {
        let ctx = FieldContext::new(
            &[-3, -1, 1],
            BigRational::from_integer(BigInt::from(2)),
            BigRational::from_integer(BigInt::from(3)),
        )
        .unwrap();
        let orbit = orbit_closure(&ctx, 200);
        assert!(build_partition(&ctx, &orbit).is_err());
    }
}
