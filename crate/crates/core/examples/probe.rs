use std::time::Instant;
use germ_invariants::harmonic::{mu_general, mu_order_sum, HarmonicGerm};
use germ_invariants::verify::gen;

fn main() {
    for m in [1u32, 2, 3] {
        let mut rng = gen::case_rng(1, m as u64, 0);
        let mut redraws = 0;
        let t0 = Instant::now();
        let mut n = 0;
        while t0.elapsed().as_secs_f64() < 8.0 && n < 12 {
            let p = gen::tangent_poly(&mut rng, 5, 64);
            let g = HarmonicGerm::pm_family(p.clone(), m).unwrap();
            let t1 = Instant::now();
            let sum = mu_order_sum(&p, m);
            let t_sum = t1.elapsed();
            let t2 = Instant::now();
            let oracle = mu_general(&g).unwrap();
            let t_or = t2.elapsed();
            println!("m={m} deg={:?} sum={sum} ({t_sum:?}) oracle={oracle} ({t_or:?})", p.poly_degree());
            assert_eq!(sum, oracle);
            n += 1;
        }
        let _ = redraws;
    }
}
