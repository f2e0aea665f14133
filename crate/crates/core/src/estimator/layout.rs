use nalgebra::DMatrix;

use crate::channel::{Alignment, AssociationPattern};
use crate::error::{Error, Result};
use crate::geometry::OirsGrid;

/// Sampling lattice of one (PD, LED) pair: element rows and columns of its
/// aligned samples and the block that measures each lattice point.
#[derive(Debug, Clone, PartialEq)]
pub struct PairLattice {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    /// `block[(a, b)]` measures element `(rows[a], cols[b])`.
    pub block: DMatrix<usize>,
}

/// Phase-I design: which element is aligned with which (LED, PD) pair in
/// every time block.
///
/// For `spacing >= max(Nt, Nr)` the grid is tiled by `spacing x spacing`
/// subarrays (block `q = q_v + q_h Q_v`) and the element at row `pd`, column
/// `led` of each subarray serves that pair, so every pair is sampled on a
/// lattice of pitch `spacing`. `spacing = 1` is the dense baseline: each
/// `Nr x Nt` tile is visited `Nt Nr` times with cyclically shifted
/// assignments, so every element is measured for every pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SubarrayLayout {
    rows: usize,
    cols: usize,
    nt: usize,
    nr: usize,
    spacing: usize,
    q_v: usize,
    q_h: usize,
    blocks: Vec<Vec<Alignment>>,
    lattices: Vec<PairLattice>,
}

impl SubarrayLayout {
    pub fn new(rows: usize, cols: usize, nt: usize, nr: usize, spacing: usize) -> Result<Self> {
        if nt == 0 || nr == 0 || spacing == 0 {
            return Err(Error::Layout("Nt, Nr and spacing must be positive".into()));
        }
        if spacing == 1 {
            return Self::dense(rows, cols, nt, nr);
        }
        if spacing < nt.max(nr) {
            return Err(Error::Layout(format!(
                "a {spacing}x{spacing} subarray cannot hold an {nr}x{nt} aligned block"
            )));
        }
        let (q_v, q_h) = (rows / spacing, cols / spacing);
        if q_v == 0 || q_h == 0 {
            return Err(Error::Layout(format!(
                "{rows}x{cols} grid is smaller than one {spacing}x{spacing} subarray"
            )));
        }
        let mut blocks = Vec::with_capacity(q_v * q_h);
        for qh in 0..q_h {
            for qv in 0..q_v {
                let mut block = Vec::with_capacity(nt * nr);
                for led in 0..nt {
                    for pd in 0..nr {
                        let (i, j) = (qv * spacing + pd, qh * spacing + led);
                        block.push(Alignment { element: i + j * rows, pd, led });
                    }
                }
                blocks.push(block);
            }
        }
        let mut lattices = Vec::with_capacity(nt * nr);
        for led in 0..nt {
            for pd in 0..nr {
                lattices.push(PairLattice {
                    rows: (0..q_v).map(|qv| qv * spacing + pd).collect(),
                    cols: (0..q_h).map(|qh| qh * spacing + led).collect(),
                    block: DMatrix::from_fn(q_v, q_h, |qv, qh| qv + qh * q_v),
                });
            }
        }
        Ok(Self { rows, cols, nt, nr, spacing, q_v, q_h, blocks, lattices })
    }

    fn dense(rows: usize, cols: usize, nt: usize, nr: usize) -> Result<Self> {
        if rows == 0 || cols == 0 || rows % nr != 0 || cols % nt != 0 {
            return Err(Error::Layout(format!(
                "dense sampling needs rows divisible by Nr = {nr} and cols by Nt = {nt}, got {rows}x{cols}"
            )));
        }
        let shifts = nt * nr;
        let tiles_v = rows / nr;
        let tiles = tiles_v * (cols / nt);
        let block_of = |i: usize, j: usize, pd: usize, led: usize| {
            let a = (pd + nr - i % nr) % nr;
            let b = (led + nt - j % nt) % nt;
            let tile = i / nr + (j / nt) * tiles_v;
            (a + b * nr) + shifts * tile
        };
        let mut blocks = vec![Vec::with_capacity(shifts); shifts * tiles];
        for j in 0..cols {
            for i in 0..rows {
                for led in 0..nt {
                    for pd in 0..nr {
                        blocks[block_of(i, j, pd, led)].push(Alignment { element: i + j * rows, pd, led });
                    }
                }
            }
        }
        for block in &mut blocks {
            block.sort_by_key(|a| a.pd + a.led * nr);
        }
        let lattices = (0..shifts)
            .map(|k| {
                let (pd, led) = (k % nr, k / nr);
                PairLattice {
                    rows: (0..rows).collect(),
                    cols: (0..cols).collect(),
                    block: DMatrix::from_fn(rows, cols, |i, j| block_of(i, j, pd, led)),
                }
            })
            .collect();
        Ok(Self { rows, cols, nt, nr, spacing: 1, q_v: rows, q_h: cols, blocks, lattices })
    }

    pub fn for_grid(grid: &OirsGrid, nt: usize, nr: usize, spacing: usize) -> Result<Self> {
        Self::new(grid.rows(), grid.cols(), nt, nr, spacing)
    }

    /// Largest spacing whose physical sample pitch stays within `d_c`, or the
    /// dense baseline when that spacing cannot hold an aligned block.
    pub fn from_coherence(grid: &OirsGrid, nt: usize, nr: usize, d_c: f64) -> Result<Self> {
        if !(d_c > 0.0) {
            return Err(Error::Layout(format!("coherence distance {d_c} must be positive")));
        }
        let fit = (d_c / grid.element_pitch() + 1e-9).floor();
        let cap = grid.rows().min(grid.cols());
        let s = if fit >= cap as f64 { cap } else { fit as usize };
        let s = if s < nt.max(nr) { 1 } else { s };
        Self::for_grid(grid, nt, nr, s)
    }

    pub fn spacing(&self) -> usize {
        self.spacing
    }

    pub fn q_v(&self) -> usize {
        self.q_v
    }

    pub fn q_h(&self) -> usize {
        self.q_h
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn nt(&self) -> usize {
        self.nt
    }

    pub fn nr(&self) -> usize {
        self.nr
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn elements(&self) -> usize {
        self.rows * self.cols
    }

    pub fn csi_parameter_count(&self) -> usize {
        self.block_count() * self.nt * self.nr
    }

    /// Alignments of block `q`, one per pair, ordered by `pd + led * Nr`.
    pub fn block(&self, q: usize) -> &[Alignment] {
        &self.blocks[q]
    }

    pub fn blocks(&self) -> &[Vec<Alignment>] {
        &self.blocks
    }

    pub fn lattice(&self, pd: usize, led: usize) -> &PairLattice {
        &self.lattices[pd + led * self.nr]
    }

    /// Sampled element indices of one pair, ordered by block.
    pub fn omega(&self, pd: usize, led: usize) -> Vec<usize> {
        self.blocks.iter().map(|b| b[pd + led * self.nr].element).collect()
    }

    /// Association pattern `V_q` that is active during block `q`.
    pub fn block_pattern(&self, q: usize) -> Result<AssociationPattern> {
        AssociationPattern::from_alignments(self.elements(), self.nt, self.nr, &self.blocks[q])
    }

    /// Union `V` of all block patterns; `None` for the dense baseline, where
    /// elements change their alignment between blocks.
    pub fn composite_pattern(&self) -> Option<AssociationPattern> {
        if self.spacing == 1 && self.nt * self.nr > 1 {
            return None;
        }
        let all: Vec<Alignment> = self.blocks.iter().flatten().copied().collect();
        AssociationPattern::from_alignments(self.elements(), self.nt, self.nr, &all).ok()
    }
}

/// Phase-I design for `grid`: the layout, the overall pattern (if static)
/// and the per-block patterns.
pub fn design_pattern(
    grid: &OirsGrid,
    nt: usize,
    nr: usize,
    spacing: usize,
) -> Result<(Option<AssociationPattern>, Vec<AssociationPattern>, SubarrayLayout)> {
    let layout = SubarrayLayout::for_grid(grid, nt, nr, spacing)?;
    let blocks = (0..layout.block_count())
        .map(|q| layout.block_pattern(q))
        .collect::<Result<Vec<_>>>()?;
    Ok((layout.composite_pattern(), blocks, layout))
}
