#![no_main]

use libfuzzer_sys::fuzz_target;
use lts_core::bsa::bsa_solve;
use lts_core::diagnostics::{check_pairwise, check_sign_rank, DEFAULT_BUDGET};
use lts_core::model::{Dataset, Problem};
use lts_core::numerics::Matrix;
use lts_core::oracle::{exact_enumerate, DEFAULT_CAP};

// Header bytes pick n in 4..=9, p in 1..=3 and h; every following pair of
// bytes is one value, an i16 divided by 2560 (so within [-12.8, 12.8)).
fuzz_target!(|data: &[u8]| {
    if data.len() < 3 {
        return;
    }
    let n = 4 + data[0] as usize % 6;
    let p = 1 + data[1] as usize % 3;
    let h = p + 1 + data[2] as usize % (n - p);
    let values: Vec<f64> =
        data[3..].chunks_exact(2).map(|c| i16::from_le_bytes([c[0], c[1]]) as f64 / 2560.0).collect();
    if values.len() < n * (p + 1) {
        return;
    }
    let x = Matrix::new(n, p, values[..n * p].to_vec()).unwrap();
    let y = values[n * p..n * (p + 1)].to_vec();
    let Ok(d) = Dataset::new(x, y, false) else { return };
    let pr = Problem::new(d, h).unwrap();
    let exact = exact_enumerate(&pr, DEFAULT_CAP);
    let fast = bsa_solve(&pr);
    // exactness is only promised when the data conditions hold
    let generic = check_pairwise(pr.dataset()).passed() && check_sign_rank(pr.dataset(), DEFAULT_BUDGET).passed();
    if let (Ok(e), Ok(f)) = (&exact, &fast) {
        assert!(e.objective <= f.objective * (1.0 + 1e-9) + 1e-9);
        if generic {
            assert!(
                (e.objective - f.objective).abs() <= 1e-7 * (1.0 + e.objective),
                "{} vs {}",
                f.objective,
                e.objective
            );
        }
    }
});
