use nalgebra::{DMatrix, DVector};

use super::scene::CsiTensor;
use crate::error::{Error, Result};

/// Element `element` steered toward LED `led` and PD `pd`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alignment {
    pub element: usize,
    pub pd: usize,
    pub led: usize,
}

/// Binary LED association `G` (N x Nt), PD association `F` (N x Nr) and the
/// composite `V` (N x Nt Nr) with `v_{pd + led Nr} = f_pd ⊙ g_led`.
///
/// Every element is aligned with at most one LED and at most one PD.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociationPattern {
    g: DMatrix<u8>,
    f: DMatrix<u8>,
    v: DMatrix<u8>,
}

impl AssociationPattern {
    pub fn new(g: DMatrix<u8>, f: DMatrix<u8>) -> Result<Self> {
        if g.nrows() != f.nrows() {
            return Err(Error::Shape(format!(
                "G has {} rows but F has {}",
                g.nrows(),
                f.nrows()
            )));
        }
        if g.iter().chain(f.iter()).any(|&x| x > 1) {
            return Err(Error::InvalidArgument("association entries must be 0 or 1".into()));
        }
        for (name, m) in [("G", &g), ("F", &f)] {
            if let Some(n) = (0..m.nrows()).find(|&n| m.row(n).iter().map(|&x| x as u32).sum::<u32>() > 1) {
                return Err(Error::InvalidArgument(format!(
                    "element {n} is associated with more than one column of {name}"
                )));
            }
        }
        let (nt, nr) = (g.ncols(), f.ncols());
        let v = DMatrix::from_fn(g.nrows(), nt * nr, |n, k| {
            let (pd, led) = (k % nr, k / nr);
            f[(n, pd)] * g[(n, led)]
        });
        Ok(Self { g, f, v })
    }

    pub fn empty(elements: usize, nt: usize, nr: usize) -> Self {
        Self::new(DMatrix::zeros(elements, nt), DMatrix::zeros(elements, nr))
            .expect("zero pattern is valid")
    }

    pub fn from_alignments(
        elements: usize,
        nt: usize,
        nr: usize,
        alignments: &[Alignment],
    ) -> Result<Self> {
        let mut g = DMatrix::zeros(elements, nt);
        let mut f = DMatrix::zeros(elements, nr);
        for a in alignments {
            if a.element >= elements || a.led >= nt || a.pd >= nr {
                return Err(Error::Shape(format!("alignment {a:?} out of range")));
            }
            if g.row(a.element).iter().any(|&x| x != 0) {
                return Err(Error::InvalidArgument(format!(
                    "element {} aligned twice",
                    a.element
                )));
            }
            g[(a.element, a.led)] = 1;
            f[(a.element, a.pd)] = 1;
        }
        Self::new(g, f)
    }

    pub fn g(&self) -> &DMatrix<u8> {
        &self.g
    }

    pub fn f(&self) -> &DMatrix<u8> {
        &self.f
    }

    pub fn composite(&self) -> &DMatrix<u8> {
        &self.v
    }

    pub fn elements(&self) -> usize {
        self.g.nrows()
    }

    pub fn nt(&self) -> usize {
        self.g.ncols()
    }

    pub fn nr(&self) -> usize {
        self.f.ncols()
    }

    /// Same pattern with every row outside `keep` switched off.
    pub fn restricted_to(&self, keep: &[usize]) -> Self {
        let mut mask = vec![false; self.elements()];
        for &n in keep {
            if n < mask.len() {
                mask[n] = true;
            }
        }
        let zero_rows = |m: &DMatrix<u8>| {
            DMatrix::from_fn(m.nrows(), m.ncols(), |n, k| if mask[n] { m[(n, k)] } else { 0 })
        };
        Self::new(zero_rows(&self.g), zero_rows(&self.f)).expect("subpattern stays valid")
    }

    /// Nonzero entries of `V` as alignments.
    pub fn alignments(&self) -> Vec<Alignment> {
        let nr = self.nr();
        let mut out = Vec::new();
        for k in 0..self.v.ncols() {
            for n in 0..self.v.nrows() {
                if self.v[(n, k)] == 1 {
                    out.push(Alignment {
                        element: n,
                        pd: k % nr,
                        led: k / nr,
                    });
                }
            }
        }
        out
    }
}

fn check_shapes(hc: &CsiTensor, pattern: &AssociationPattern) -> Result<()> {
    if hc.elements() != pattern.elements() || hc.nt() != pattern.nt() || hc.nr() != pattern.nr() {
        return Err(Error::Shape(format!(
            "CSI tensor is {}x({}*{}) but pattern is {}x({}*{})",
            hc.elements(),
            hc.nt(),
            hc.nr(),
            pattern.elements(),
            pattern.nt(),
            pattern.nr()
        )));
    }
    Ok(())
}

/// `Nr x Nt` channel with entry `(pd, led) = (f_pd ⊙ g_led)^T h_{pd,led}`.
pub fn assemble_h(hc: &CsiTensor, pattern: &AssociationPattern) -> Result<DMatrix<f64>> {
    check_shapes(hc, pattern)?;
    let (nt, nr) = (hc.nt(), hc.nr());
    let mut h = DMatrix::zeros(nr, nt);
    for led in 0..nt {
        let g = pattern.g().column(led);
        for pd in 0..nr {
            let f = pattern.f().column(pd);
            let gains = hc.pair(pd, led);
            h[(pd, led)] = (0..hc.elements())
                .map(|n| (f[n] * g[n]) as f64 * gains[n])
                .sum();
        }
    }
    Ok(h)
}

/// Block-diagonal matrix whose `k`-th diagonal block is column `k` of `v`.
pub fn blkdiag(v: &DMatrix<u8>) -> DMatrix<f64> {
    let (n, k) = v.shape();
    let mut out = DMatrix::zeros(n * k, k);
    for col in 0..k {
        for row in 0..n {
            out[(col * n + row, col)] = v[(row, col)] as f64;
        }
    }
    out
}

/// `vec(H) = blkdiag(V)^T vec(H_c)`.
pub fn vec_h_blkdiag(hc: &CsiTensor, pattern: &AssociationPattern) -> Result<DVector<f64>> {
    check_shapes(hc, pattern)?;
    Ok(blkdiag(pattern.composite()).transpose() * hc.vec())
}
