//! Nine-frequency pump plans for a square KPO lattice.
//!
//! KPOs sit on a square grid and couple to their four nearest neighbours. Pump index 1
//! occupies one sublattice; every other site carries one of the indices 2..9 following a
//! period-4 tile. A plaquette is an index-1 KPO together with three of its neighbours whose
//! pumps satisfy one of the four mixing conditions
//!
//! ```text
//! w1 + w2 = w3 + w9
//! w1 + w8 = w7 + w9
//! w1 + w4 = w3 + w5
//! w1 + w6 = w7 + w5
//! ```
//!
//! The four conditions leave ω1, ω2, ω3, ω4 and ω8 free. Around each non-1 site, the four
//! index-1 neighbours also meet a mixing condition trivially; that interaction is fourth
//! order and reported as negligible.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::relations::{detect_residual, ResonanceCondition};
use super::PumpAssignment;
use crate::error::{Error, Result};

/// Pump indices ((a, b), (c, d)) with ω_a + ω_b = ω_c + ω_d, one per plaquette type.
pub const PLAQUETTE_LINES: [([u8; 2], [u8; 2]); 4] =
    [([1, 2], [3, 9]), ([1, 8], [7, 9]), ([1, 4], [3, 5]), ([1, 6], [7, 5])];

/// Offsets (in units of the spacing) for pump indices 1..9. Within every star of the
/// default tiling these admit no integer relation of order ≤ 4 besides the plaquette ones.
pub const DEFAULT_OFFSETS: [i64; 9] = [0, 7, 13, 12, -1, 9, 10, 4, -6];

const TILE: [[u8; 4]; 4] = [[1, 2, 1, 3], [4, 1, 5, 1], [1, 6, 1, 7], [8, 1, 9, 1]];

/// Tile positions of plaquette centres and the line they realise (0-based into PLAQUETTE_LINES).
const CENTRES: [((usize, usize), usize); 4] = [((0, 2), 0), ((3, 3), 1), ((1, 3), 2), ((2, 2), 3)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Site {
    pub row: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Plaquette {
    pub centre: Site,
    /// Sites ordered so that ω[0] + ω[1] = ω[2] + ω[3]; `sites[0]` is the centre.
    pub sites: [Site; 4],
    /// 1-based line of the condition list.
    pub line: usize,
}

/// Relations found among the pumps of one index-1 KPO and its neighbours.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarReport {
    pub centre: Site,
    /// Distinct pump indices in the star, centre first.
    pub indices: Vec<u8>,
    /// Line realised by a plaquette centred here.
    pub designated: Option<usize>,
    /// Relations other than the designated one, with coefficients over `indices`.
    pub spurious: Vec<ResonanceCondition>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaquetteViolation {
    pub plaquette: usize,
    pub line: usize,
    /// (ω_a + ω_b) − (ω_c + ω_d), Hz.
    pub mismatch_hz: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LhzPlan {
    /// Grid side length.
    pub size: usize,
    /// Tile offset chosen for the grid's top-left corner.
    pub origin: (usize, usize),
    /// Pump index (1..9) of every site, row-major.
    pub sites: Vec<Vec<u8>>,
    /// Pump frequency of each index, Hz.
    pub pump_hz: [i64; 9],
    pub plaquettes: Vec<Plaquette>,
    pub stars: Vec<StarReport>,
    /// Non-1 sites whose four neighbours all carry index 1 (fourth-order, negligible).
    pub negligible: Vec<Site>,
}

impl LhzPlan {
    pub fn index(&self, s: Site) -> u8 {
        self.sites[s.row][s.col]
    }

    pub fn neighbours(&self, s: Site) -> Vec<Site> {
        neighbours(self.size, s)
    }

    pub fn frequency_hz(&self, s: Site) -> i64 {
        self.pump_hz[self.index(s) as usize - 1]
    }

    /// Pump assignment (rad/s) of a plaquette in its condition order.
    pub fn plaquette_pumps(&self, p: &Plaquette) -> PumpAssignment {
        let omega = p
            .sites
            .iter()
            .map(|&s| 2.0 * std::f64::consts::PI * self.frequency_hz(s) as f64)
            .collect();
        PumpAssignment::new(omega).expect("pump frequencies are positive")
    }

    pub fn spurious_count(&self) -> usize {
        self.stars.iter().map(|s| s.spurious.len()).sum()
    }
}

fn neighbours(size: usize, s: Site) -> Vec<Site> {
    let mut out = Vec::with_capacity(4);
    if s.row > 0 {
        out.push(Site { row: s.row - 1, col: s.col });
    }
    if s.row + 1 < size {
        out.push(Site { row: s.row + 1, col: s.col });
    }
    if s.col > 0 {
        out.push(Site { row: s.row, col: s.col - 1 });
    }
    if s.col + 1 < size {
        out.push(Site { row: s.row, col: s.col + 1 });
    }
    out
}

/// Solves the four conditions from the free frequencies of indices 1, 2, 3, 4 and 8.
pub fn lhz_frequencies(free: [i64; 5]) -> [i64; 9] {
    let [w1, w2, w3, w4, w8] = free;
    let w9 = w1 + w2 - w3;
    let w7 = w1 + w8 - w9;
    let w5 = w1 + w4 - w3;
    let w6 = w7 + w5 - w1;
    [w1, w2, w3, w4, w5, w6, w7, w8, w9]
}

/// Pump frequencies base + offset·spacing for the default offsets, Hz.
pub fn default_frequencies(base_hz: i64, spacing_hz: i64) -> [i64; 9] {
    let o = DEFAULT_OFFSETS;
    lhz_frequencies([o[0], o[1], o[2], o[3], o[7]].map(|x| base_hz + x * spacing_hz))
}

fn build_plaquettes(size: usize, origin: (usize, usize), sites: &[Vec<u8>]) -> Vec<Plaquette> {
    let mut out = Vec::new();
    for row in 0..size {
        for col in 0..size {
            let tile = ((row + origin.0) % 4, (col + origin.1) % 4);
            let Some(&(_, line)) = CENTRES.iter().find(|(pos, _)| *pos == tile) else {
                continue;
            };
            let centre = Site { row, col };
            let ([_, b], [c, d]) = PLAQUETTE_LINES[line];
            let near = neighbours(size, centre);
            let find = |idx: u8| near.iter().copied().find(|&s| sites[s.row][s.col] == idx);
            if let (Some(sb), Some(sc), Some(sd)) = (find(b), find(c), find(d)) {
                out.push(Plaquette {
                    centre,
                    sites: [centre, sb, sc, sd],
                    line: line + 1,
                });
            }
        }
    }
    out
}

fn tiled(size: usize, origin: (usize, usize)) -> Vec<Vec<u8>> {
    (0..size)
        .map(|r| {
            (0..size)
                .map(|c| TILE[(r + origin.0) % 4][(c + origin.1) % 4])
                .collect()
        })
        .collect()
}

/// Checks every plaquette condition in exact integer arithmetic.
pub fn validate_plan(plan: &LhzPlan, pump_hz: &[i64; 9], tol_hz: i64) -> Vec<PlaquetteViolation> {
    plan.plaquettes
        .iter()
        .enumerate()
        .filter_map(|(i, p)| {
            let f = |s: Site| pump_hz[plan.index(s) as usize - 1];
            let mismatch = f(p.sites[0]) + f(p.sites[1]) - f(p.sites[2]) - f(p.sites[3]);
            (mismatch.abs() > tol_hz).then_some(PlaquetteViolation {
                plaquette: i,
                line: p.line,
                mismatch_hz: mismatch,
            })
        })
        .collect()
}

fn star_report(plan: &LhzPlan, centre: Site, tol: f64) -> StarReport {
    let mut indices = vec![plan.index(centre)];
    for s in plan.neighbours(centre) {
        let idx = plan.index(s);
        if !indices.contains(&idx) {
            indices.push(idx);
        }
    }
    let designated = plan
        .plaquettes
        .iter()
        .find(|p| p.centre == centre)
        .map(|p| p.line);
    let expected: Option<Vec<i32>> = designated.map(|line| {
        let ([a, b], [c, d]) = PLAQUETTE_LINES[line - 1];
        let mut v = vec![0i32; indices.len()];
        let pos = |x: u8| indices.iter().position(|&i| i == x).expect("index in star");
        v[pos(a)] += 1;
        v[pos(b)] += 1;
        v[pos(c)] -= 1;
        v[pos(d)] -= 1;
        if v.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        v
    });
    let omega: Vec<f64> = indices
        .iter()
        .map(|&i| 2.0 * std::f64::consts::PI * plan.pump_hz[i as usize - 1] as f64)
        .collect();
    let pump = PumpAssignment::new(omega).expect("pump frequencies are positive");
    let spurious = detect_residual(&pump, 4, tol)
        .into_iter()
        .filter(|r| expected.as_ref() != Some(&r.coefficients))
        .collect();
    StarReport {
        centre,
        indices,
        designated,
        spurious,
    }
}

/// Builds a plan on a (2·rows)² grid, choosing the tile offset with the most plaquettes.
pub fn lhz_plan(rows: usize, pump_hz: [i64; 9], tol: f64) -> Result<LhzPlan> {
    if rows < 2 {
        return Err(Error::InvalidParameter(format!("rows must be at least 2, got {rows}")));
    }
    if pump_hz.iter().any(|&f| f <= 0) {
        return Err(Error::InvalidParameter("pump frequencies must be positive".into()));
    }
    let size = 2 * rows;
    let mut best: Option<((usize, usize), Vec<Plaquette>)> = None;
    for r0 in 0..4 {
        for c0 in 0..4 {
            let sites = tiled(size, (r0, c0));
            let plaq = build_plaquettes(size, (r0, c0), &sites);
            if best.as_ref().map_or(true, |(_, b)| plaq.len() > b.len()) {
                best = Some(((r0, c0), plaq));
            }
        }
    }
    let (origin, plaquettes) = best.expect("at least one tile offset");
    let sites = tiled(size, origin);
    let mut plan = LhzPlan {
        size,
        origin,
        sites,
        pump_hz,
        plaquettes,
        stars: Vec::new(),
        negligible: Vec::new(),
    };
    let all: Vec<Site> = (0..size)
        .flat_map(|row| (0..size).map(move |col| Site { row, col }))
        .collect();
    let stars: Vec<StarReport> = all
        .par_iter()
        .filter(|&&s| plan.index(s) == 1)
        .map(|&s| star_report(&plan, s, tol))
        .collect();
    let negligible = all
        .iter()
        .copied()
        .filter(|&s| {
            let near = plan.neighbours(s);
            plan.index(s) != 1 && near.len() == 4 && near.iter().all(|&n| plan.index(n) == 1)
        })
        .collect();
    plan.stars = stars;
    plan.negligible = negligible;
    Ok(plan)
}
