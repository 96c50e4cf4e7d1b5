//! Rayon versions of the core's batch operations. Work is split along the
//! same chunk and cell boundaries as the sequential code and collected in
//! order, so results are bitwise identical to it.

use catdilemma::coverage::{assemble_table2, table2_row, Table2Config};
use catdilemma::sampling::{chunk_count, sample_chunk};
use catdilemma::{
    feasible, map_strategy, ClassFilter, MappedPoint, Model, SampleBatch, Table2, TriangleGrid,
};
use rayon::prelude::*;

pub fn sample(model: Model, n: usize, seed: u64) -> SampleBatch {
    let chunks = (0..chunk_count(n))
        .into_par_iter()
        .map(|i| sample_chunk(model, n, seed, i))
        .collect();
    SampleBatch::from_chunks(model, seed, chunks)
}

pub fn map_batch(batch: &SampleBatch) -> Vec<MappedPoint> {
    batch.strategies.par_iter().map(map_strategy).collect()
}

pub fn oracle_mask(grid: &TriangleGrid, model: Model, class: ClassFilter) -> Vec<bool> {
    (0..grid.cell_count())
        .into_par_iter()
        .map(|i| feasible(&grid.centroid(&grid.cell(i)), model, class).feasible)
        .collect()
}

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
