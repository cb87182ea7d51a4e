//! Draw a few random rectangular punctured tori and locate them in moduli
//! space.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use randtorus::hypgeom::GeodesicLengthPair;
use randtorus::modmap::build_cr_table;
use randtorus::torusgroup::QuadCrSampler;

fn main() -> randtorus::Result<()> {
    let sampler = QuadCrSampler::new()?;
    let table = build_cr_table(1.0, 50.0, 128)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    println!("{:>10} {:>8} {:>8} {:>9} {:>8}", "[Q]", "l_r", "l_s", "modulus", "d_T");
    for _ in 0..8 {
        let q = sampler.sample(&mut rng);
        let ell = GeodesicLengthPair::from_cross_ratio(q)?;
        let m = table.modulus_of_cr(q)?;
        println!("{q:10.4} {:8.4} {:8.4} {m:9.4} {:8.4}", ell.ell_r, ell.ell_s, m.ln());
    }
    Ok(())
}
