//! A hand-built association pattern and the channel matrix it induces.

use oirs::channel::{assemble_h, build_csi_tensor, vec_h_blkdiag, Alignment, AssociationPattern, SceneConfig, TruthModel};

fn main() -> oirs::Result<()> {
    let scene = SceneConfig::default();
    let csi = build_csi_tensor(&scene, TruthModel::Point)?;

    let alignments = [
        Alignment { element: 0, led: 0, pd: 0 },
        Alignment { element: 25, led: 1, pd: 0 },
        Alignment { element: 300, led: 0, pd: 1 },
        Alignment { element: 575, led: 1, pd: 1 },
    ];
    let pattern = AssociationPattern::from_alignments(csi.elements(), csi.nt(), csi.nr(), &alignments)?;

    let h = assemble_h(&csi, &pattern)?;
    println!("H = {h}");
    println!("vec(H) via block-diagonal form = {}", vec_h_blkdiag(&csi, &pattern)?.transpose());
    Ok(())
}
