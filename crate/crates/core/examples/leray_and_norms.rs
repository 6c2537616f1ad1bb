//! Projects a compressible field onto divergence-free fields and prints its norms.

use maxdiss::{Grid, Result, SpectralField};

fn main() -> Result<()> {
    let g = Grid::new(32)?;
    let u = SpectralField::from_vector_fn(g, |x, y| (x.sin() * y.cos() + (2.0 * x).cos(), y.sin() + x.cos()));
    let p = u.leray_project();
    println!("divergence defect before {:.3e}, after {:.3e}", u.divergence_defect(), p.divergence_defect());
    println!("removed gradient part has L2 norm {:.6}", u.axpy(-1.0, &p)?.l2_norm());
    let r = p.norm_report(&[2.0, 4.0])?;
    println!("L2 {:.6}  H1 seminorm {:.6}  Linf {:.6}", r.l2, r.h1_semi, r.l_inf);
    for (p, v) in &r.lp {
        println!("L{p} {v:.6}");
    }
    if let Some(h) = r.h_minus1 {
        println!("H-1 {h:.6}");
    }
    Ok(())
}
