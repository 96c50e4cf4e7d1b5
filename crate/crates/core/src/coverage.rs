//! Area fractions of the frequency triangle, from sampled clouds or from the
//! exact oracle, on a regular triangular grid.
//!
//! Scaling the triangle by `R` and cutting every edge into `R` pieces gives
//! `R²` congruent cells. Rows run from the `q0` apex (row 0) to the `q1`–`q2`
//! edge (row `R-1`); row `r` holds `r + 1` upward and `r` downward cells,
//! interleaved left (`q1` side) to right (`q2` side). Cell `(r, p, up)` has
//! index `r² + 2p`, cell `(r, p, down)` has index `r² + 2p + 1`.

use alloc::vec;
use alloc::vec::Vec;

use crate::feasibility::{feasible, ClassFilter};
use crate::sampling::{sample, SampleBatch};
use crate::strategy::{map_strategy, FrequencyTriple, Model};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub index: usize,
    pub row: usize,
    pub position: usize,
    pub orientation: Orientation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TriangleGrid {
    resolution: usize,
}

impl TriangleGrid {
    /// # Panics
    ///
    /// If `resolution == 0`.
    pub fn new(resolution: usize) -> Self {
        assert!(resolution >= 1, "grid resolution must be at least 1");
        Self { resolution }
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn cell_count(&self) -> usize {
        self.resolution * self.resolution
    }

    pub fn cell(&self, index: usize) -> Cell {
        assert!(index < self.cell_count());
        let row = index.isqrt();
        let offset = index - row * row;
        Cell {
            index,
            row,
            position: offset / 2,
            orientation: if offset.is_multiple_of(2) {
                Orientation::Up
            } else {
                Orientation::Down
            },
        }
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.cell_count()).map(|i| self.cell(i))
    }

    /// Integer lattice corner of a cell in `(q1, q2)·R` units and its orientation.
    fn lattice(&self, cell: &Cell) -> (usize, usize) {
        // up: i1 + i2 = row, down: i1 + i2 = row - 1; i2 = position
        let i2 = cell.position;
        let i1 = match cell.orientation {
            Orientation::Up => cell.row - i2,
            Orientation::Down => cell.row - 1 - i2,
        };
        (i1, i2)
    }

    fn index_of(i1: usize, i2: usize, orientation: Orientation) -> usize {
        match orientation {
            Orientation::Up => {
                let row = i1 + i2;
                row * row + 2 * i2
            }
            Orientation::Down => {
                let row = i1 + i2 + 1;
                row * row + 2 * i2 + 1
            }
        }
    }

    pub fn centroid(&self, cell: &Cell) -> FrequencyTriple {
        let r = self.resolution as f64;
        let (i1, i2) = self.lattice(cell);
        let shift = match cell.orientation {
            Orientation::Up => 1.0 / 3.0,
            Orientation::Down => 2.0 / 3.0,
        };
        let q1 = (i1 as f64 + shift) / r;
        let q2 = (i2 as f64 + shift) / r;
        FrequencyTriple::normalized(1.0 - q1 - q2, q1, q2)
            .expect("centroid lies inside the triangle")
    }

    /// The three vertices of a cell.
    pub fn corners(&self, cell: &Cell) -> [FrequencyTriple; 3] {
        let r = self.resolution as f64;
        let (i1, i2) = self.lattice(cell);
        let (i1, i2) = (i1 as f64, i2 as f64);
        let lattice = match cell.orientation {
            Orientation::Up => [(i1, i2), (i1 + 1.0, i2), (i1, i2 + 1.0)],
            Orientation::Down => [(i1 + 1.0, i2), (i1, i2 + 1.0), (i1 + 1.0, i2 + 1.0)],
        };
        lattice.map(|(a, b)| {
            let (q1, q2) = (a / r, b / r);
            FrequencyTriple::normalized((1.0 - q1 - q2).max(0.0), q1, q2)
                .expect("grid vertices lie on the triangle")
        })
    }

    /// Index of the cell containing `q`. Points on shared edges go to the
    /// lowest-indexed cell that contains them.
    pub fn locate(&self, q: &FrequencyTriple) -> usize {
        let r = self.resolution;
        let rf = r as f64;
        let b = (q.q1() * rf).clamp(0.0, rf);
        let c = (q.q2() * rf).clamp(0.0, rf);

        let options = |x: f64| {
            let f = libm::floor(x);
            let mut v: [Option<usize>; 2] = [None, None];
            if f < rf {
                v[0] = Some(f as usize);
            }
            if f == x && f >= 1.0 {
                v[1] = Some(f as usize - 1);
            }
            v
        };

        let mut best: Option<usize> = None;
        for i1 in options(b).into_iter().flatten() {
            for i2 in options(c).into_iter().flatten() {
                let base = (i1 + i2) as f64;
                // up: b ≥ i1, c ≥ i2, b + c ≤ i1 + i2 + 1
                if i1 + i2 < r && b + c <= base + 1.0 {
                    let idx = Self::index_of(i1, i2, Orientation::Up);
                    best = Some(best.map_or(idx, |x| x.min(idx)));
                }
                // down: b ≤ i1 + 1, c ≤ i2 + 1, b + c ≥ i1 + i2 + 1
                if i1 + i2 + 1 < r && b + c >= base + 1.0 {
                    let idx = Self::index_of(i1, i2, Orientation::Down);
                    best = Some(best.map_or(idx, |x| x.min(idx)));
                }
            }
        }
        best.unwrap_or_else(|| {
            // rounding pushed the point just outside the triangle
            let i1 = (libm::floor(b) as usize).min(r - 1);
            let i2 = (libm::floor(c) as usize).min(r - 1 - i1);
            Self::index_of(i1, i2, Orientation::Up)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoverageMethod {
    Empirical,
    Oracle,
}

impl CoverageMethod {
    pub fn name(self) -> &'static str {
        match self {
            CoverageMethod::Empirical => "empirical",
            CoverageMethod::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageReport {
    pub model: Model,
    pub class: ClassFilter,
    pub resolution: usize,
    pub method: CoverageMethod,
    pub covered_cells: usize,
    pub fraction: f64,
    pub sample_count: Option<usize>,
    pub seed: Option<u64>,
}

/// Per-cell counts of optimal strategies of class `class` in `batch`.
/// Strategies that are optimal for no frequency triple are skipped.
pub fn hit_counts(batch: &SampleBatch, grid: &TriangleGrid, class: ClassFilter) -> Vec<u32> {
    let mut hits = vec![0u32; grid.cell_count()];
    for s in &batch.strategies {
        let m = map_strategy(s);
        if !class.matches(m.class) {
            continue;
        }
        if let Some(q) = m.q {
            hits[grid.locate(&q)] += 1;
        }
    }
    hits
}

fn report_from_mask(
    model: Model,
    class: ClassFilter,
    grid: &TriangleGrid,
    method: CoverageMethod,
    covered: impl Iterator<Item = bool>,
) -> CoverageReport {
    let covered_cells = covered.filter(|&c| c).count();
    CoverageReport {
        model,
        class,
        resolution: grid.resolution(),
        method,
        covered_cells,
        fraction: covered_cells as f64 / grid.cell_count() as f64,
        sample_count: None,
        seed: None,
    }
}

pub fn empirical_coverage(
    batch: &SampleBatch,
    grid: &TriangleGrid,
    class: ClassFilter,
) -> CoverageReport {
    let hits = hit_counts(batch, grid, class);
    CoverageReport {
        sample_count: Some(batch.len()),
        seed: Some(batch.seed),
        ..report_from_mask(
            batch.model,
            class,
            grid,
            CoverageMethod::Empirical,
            hits.iter().map(|&h| h > 0),
        )
    }
}

/// Whether the oracle marks each cell centroid feasible.
pub fn oracle_mask(grid: &TriangleGrid, model: Model, class: ClassFilter) -> Vec<bool> {
    grid.cells()
        .map(|cell| feasible(&grid.centroid(&cell), model, class).feasible)
        .collect()
}

pub fn oracle_coverage(grid: &TriangleGrid, model: Model, class: ClassFilter) -> CoverageReport {
    coverage_from_oracle_mask(grid, model, class, &oracle_mask(grid, model, class))
}

pub fn coverage_from_oracle_mask(
    grid: &TriangleGrid,
    model: Model,
    class: ClassFilter,
    mask: &[bool],
) -> CoverageReport {
    report_from_mask(
        model,
        class,
        grid,
        CoverageMethod::Oracle,
        mask.iter().copied(),
    )
}

/// Published area fractions `(all, intransitive, transitive)`; the classical
/// row also stands for the prequantized model.
pub const PUBLISHED_CLASSICAL: [f64; 3] = [0.67, 0.44, 0.67];
pub const PUBLISHED_QUANT: [f64; 3] = [0.60, 0.44, 0.37];

pub fn published_row(model: Model) -> [f64; 3] {
    match model {
        Model::Classical | Model::Prequant => PUBLISHED_CLASSICAL,
        Model::Quant => PUBLISHED_QUANT,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Table2Config {
    pub oracle_resolution: usize,
    pub empirical_resolution: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for Table2Config {
    fn default() -> Self {
        Self {
            oracle_resolution: 256,
            empirical_resolution: 100,
            samples: 100_000,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table2Row {
    pub model: Model,
    pub published: [f64; 3],
    /// Indexed like [`ClassFilter::EACH`].
    pub oracle: [CoverageReport; 3],
    pub empirical: [CoverageReport; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table2 {
    pub config: Table2Config,
    /// Classical, prequantized and quantized rows, in that order.
    pub rows: Vec<Table2Row>,
    /// Largest `|prequant - classical|` over the three empirical fractions.
    pub prequant_classical_delta: f64,
}

impl Table2 {
    pub fn row(&self, model: Model) -> &Table2Row {
        self.rows
            .iter()
            .find(|r| r.model == model)
            .expect("every model has a row")
    }
}

/// The row of one model from precomputed oracle masks and a sample batch.
pub fn table2_row(
    model: Model,
    oracle_grid: &TriangleGrid,
    masks: &[Vec<bool>; 3],
    empirical_grid: &TriangleGrid,
    batch: &SampleBatch,
) -> Table2Row {
    let classes = ClassFilter::EACH;
    Table2Row {
        model,
        published: published_row(model),
        oracle: core::array::from_fn(|i| {
            coverage_from_oracle_mask(oracle_grid, model, classes[i], &masks[i])
        }),
        empirical: core::array::from_fn(|i| empirical_coverage(batch, empirical_grid, classes[i])),
    }
}

pub fn assemble_table2(config: Table2Config, rows: Vec<Table2Row>) -> Table2 {
    let mut t = Table2 {
        config,
        rows,
        prequant_classical_delta: 0.0,
    };
    let (c, p) = (t.row(Model::Classical), t.row(Model::Prequant));
    t.prequant_classical_delta = (0..3)
        .map(|i| libm::fabs(c.empirical[i].fraction - p.empirical[i].fraction))
        .fold(0.0, f64::max);
    t
}

/// Both methods for every model and class, side by side.
pub fn table2_report(config: Table2Config) -> Table2 {
    let og = TriangleGrid::new(config.oracle_resolution);
    let eg = TriangleGrid::new(config.empirical_resolution);
    let rows = Model::ALL
        .iter()
        .map(|&model| {
            let masks = ClassFilter::EACH.map(|c| oracle_mask(&og, model, c));
            let batch = sample(model, config.samples, config.seed);
            table2_row(model, &og, &masks, &eg, &batch)
        })
        .collect();
    assemble_table2(config, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_cell_grid() {
        let g = TriangleGrid::new(1);
        assert_eq!(g.cell_count(), 1);
        let c = g.centroid(&g.cell(0)).as_array();
        assert!(c.iter().all(|&v| (v - 1.0 / 3.0).abs() < 1e-15));
    }

    #[test]
    fn two_grid_orientations() {
        let g = TriangleGrid::new(2);
        let ups = g
            .cells()
            .filter(|c| c.orientation == Orientation::Up)
            .count();
        assert_eq!((g.cell_count(), ups), (4, 3));
        let center = g.locate(&FrequencyTriple::center());
        let cell = g.cell(center);
        assert_eq!(cell.orientation, Orientation::Down);
        assert_eq!((cell.row, cell.position), (1, 0));
    }

    #[test]
    fn cell_index_roundtrip() {
        let g = TriangleGrid::new(7);
        for cell in g.cells() {
            let (i1, i2) = g.lattice(&cell);
            assert_eq!(TriangleGrid::index_of(i1, i2, cell.orientation), cell.index);
            assert_eq!(g.locate(&g.centroid(&cell)), cell.index);
        }
    }

    #[test]
    fn centroids_are_barycentric() {
        let g = TriangleGrid::new(13);
        for cell in g.cells() {
            let q = g.centroid(&cell).as_array();
            assert!((q.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(q.iter().all(|&v| v > 0.0));
        }
    }

    #[test]
    fn vertices_and_edges_locate() {
        let g = TriangleGrid::new(4);
        let apex = g.locate(&FrequencyTriple::new(1.0, 0.0, 0.0).unwrap());
        assert_eq!(apex, 0);
        let left = g.locate(&FrequencyTriple::new(0.0, 1.0, 0.0).unwrap());
        assert_eq!(g.cell(left).row, 3);
        assert_eq!(g.cell(left).position, 0);
        let right = g.locate(&FrequencyTriple::new(0.0, 0.0, 1.0).unwrap());
        assert_eq!(right, 15);
        // midpoint of the q1-q2 edge sits between two up cells and one down cell
        let mid = g.locate(&FrequencyTriple::new(0.0, 0.5, 0.5).unwrap());
        assert_eq!(mid, 9 + 2);
    }

    #[test]
    fn shared_edge_goes_to_lowest_index() {
        // q1 = 0.25 exactly at R = 4 is the edge between row-1 up cell (1,0) and down (0,0)
        let g = TriangleGrid::new(4);
        let q = FrequencyTriple::new(0.7, 0.25, 0.05).unwrap();
        assert_eq!(g.locate(&q), 1);
    }

    #[test]
    fn corners_surround_centroid() {
        let g = TriangleGrid::new(9);
        for cell in g.cells() {
            let corners = g.corners(&cell);
            let c = g.centroid(&cell).as_array();
            for (k, ck) in c.iter().enumerate() {
                let mean = corners.iter().map(|q| q.as_array()[k]).sum::<f64>() / 3.0;
                assert!((mean - ck).abs() < 1e-12);
            }
            // a point just inside each corner belongs to the cell
            for q in corners {
                let v = q.as_array();
                let near: [f64; 3] = core::array::from_fn(|k| 0.99 * v[k] + 0.01 * c[k]);
                let near = FrequencyTriple::normalized(near[0], near[1], near[2]).unwrap();
                assert_eq!(g.locate(&near), cell.index);
            }
        }
    }
}
