use latcrypt::channel::{run_point, run_sweep, write_csv, SweepSpec};
use latcrypt_core::cipher::{keygen, CipherContext, SchemeParams};

fn ctx() -> CipherContext {
    CipherContext::new(keygen(SchemeParams::REFERENCE, 4).unwrap()).unwrap()
}

#[test]
fn sweep_is_reproducible_and_independent_of_threads() {
    let ctx = ctx();
    let spec = SweepSpec::parse_range("1:1:3", 40, 9).unwrap();
    let a = run_sweep(&ctx, &spec).unwrap();
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let b = single.install(|| run_sweep(&ctx, &spec).unwrap());
    assert_eq!(a, b);
    let mut csv = Vec::new();
    write_csv(&mut csv, &a).unwrap();
    assert_eq!(String::from_utf8(csv).unwrap().lines().count(), 4);
}

#[test]
fn high_vnr_is_error_free() {
    let row = run_point(&ctx(), 8.0, 0, 50, 1);
    assert_eq!((row.ser, row.fer), (0.0, 0.0));
}

#[test]
fn low_vnr_fails_and_counts_whole_frames() {
    let row = run_point(&ctx(), -3.0, 0, 20, 1);
    assert!(row.fer > 0.9);
    assert!(row.symbol_errors >= row.frame_errors);
    assert!(row.ser <= row.fer);
}

#[test]
fn ser_falls_across_the_waterfall() {
    let ctx = ctx();
    let low = run_point(&ctx, 1.0, 0, 200, 2);
    let high = run_point(&ctx, 3.0, 1, 200, 2);
    assert!(low.ser > high.ser, "{} vs {}", low.ser, high.ser);
}
