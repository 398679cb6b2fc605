use std::time::Instant;

use lericone::formula::Sequent;
use lericone::random::Enumerator;
use lericone::semantics::{brute_consequence, decide, DEFAULT_CAP};
use lericone::seq::Mode;
use lericone::tableau::tableau_status;

fn main() {
    let e = Enumerator::new(2, 4);
    for n in 0..=5 {
        let start = Instant::now();
        let mut count = 0u64;
        let mut times = [0f64; 3];
        e.for_each_of_size(n, &mut |f| {
            count += 1;
            let s = Sequent::theorem(f.clone());
            for mode in [Mode::Plain, Mode::Faithful] {
                let t0 = Instant::now();
                let a = tableau_status(&s, mode);
                let t1 = Instant::now();
                let b = brute_consequence(&s, mode, DEFAULT_CAP).unwrap().status;
                let t2 = Instant::now();
                let c = decide(&s, mode, DEFAULT_CAP).unwrap().status;
                let t3 = Instant::now();
                times[0] += (t1 - t0).as_secs_f64();
                times[1] += (t2 - t1).as_secs_f64();
                times[2] += (t3 - t2).as_secs_f64();
                assert!(a == b && b == c, "{f} {mode:?}");
            }
        });
        println!("n={n} count={count} {:.2?} tableau={:.2}s brute={:.2}s skeleton={:.2}s", start.elapsed(), times[0], times[1], times[2]);
    }
}
