//! Checks |b(u-v, u-v, v)| <= W(u, v) + K(v) E(u, v) with the Serrin weight on random pairs.

use maxdiss::energy::{rel_dissipation, rel_energy, serrin_weight, trilinear, WeightSpec};
use maxdiss::flow::random_solenoidal;
use maxdiss::{Grid, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let g = Grid::new(16)?;
    let w = WeightSpec::serrin_auto(4.0);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for i in 0..200u64 {
        let nu = 10f64.powf(rng.gen_range(-2.0..0.0));
        let u = random_solenoidal(g, rng.gen_range(1..=6), 2 * i).scale(rng.gen_range(0.1..10.0));
        let v = random_solenoidal(g, rng.gen_range(1..=6), 2 * i + 1).scale(rng.gen_range(0.1..10.0));
        let d = u.axpy(-1.0, &v)?;
        let lhs = trilinear(&d, &d, &v)?.abs();
        let rhs = rel_dissipation(&u, &v, nu)? + serrin_weight(&v, &w, nu)? * rel_energy(&u, &v)?;
        worst = worst.max(lhs / rhs);
    }
    println!("largest ratio of trilinear term to bound over 200 pairs: {worst:.3e}");
    Ok(())
}
