use proptest::prelude::*;

use pimkit::bnn::{amdahl_speedup, bin_dot, SpeedupInputs};
use pimkit::pum::{execute_program, SubarrayConfig, SubarrayState, TimingModel};
use pimkit::simdram::{throughput_report, ArithOp, LaneVector, OpKind, OpProgram, OpShape};

fn binary_kind() -> impl Strategy<Value = OpKind> {
    prop::sample::select(OpKind::ALL.iter().copied().filter(|k| k.is_binary()).collect::<Vec<_>>())
}

fn width() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![8u32, 16, 32])
}

fn mask(bits: u32) -> u64 {
    (1u64 << bits) - 1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn permuting_lanes_permutes_results(
        kind in binary_kind(),
        bits in width(),
        signed in any::<bool>(),
        raw in prop::collection::vec((any::<u64>(), any::<u64>()), 1..64),
        rotate in any::<usize>(),
    ) {
        let m = mask(bits);
        let a: Vec<u64> = raw.iter().map(|p| p.0 & m).collect();
        let b: Vec<u64> = raw.iter().map(|p| (p.1 & m).max(1)).collect();
        let program = OpProgram::build(OpShape::new(kind, bits).signed(signed), SubarrayConfig::default()).unwrap();
        let run = |a: &[u64], b: &[u64]| {
            let (x, y) = (LaneVector::new(bits, signed, a.to_vec()).unwrap(), LaneVector::new(bits, signed, b.to_vec()).unwrap());
            program.run(&[&x, &y]).unwrap().into_values()
        };
        let k = rotate % a.len();
        let (mut ra, mut rb) = (a.clone(), b.clone());
        ra.rotate_left(k);
        rb.rotate_left(k);
        let mut expected = run(&a, &b);
        expected.rotate_left(k);
        prop_assert_eq!(run(&ra, &rb), expected);
    }

    #[test]
    fn command_stream_ignores_data(kind in binary_kind(), bits in width(), seed_a in any::<u64>(), seed_b in any::<u64>()) {
        let program = OpProgram::build(OpShape::new(kind, bits), SubarrayConfig::default()).unwrap();
        let config = SubarrayConfig::new(512, 64, 6).unwrap();
        let logs: Vec<_> = [seed_a, seed_b]
            .iter()
            .map(|&seed| {
                let mut s = SubarrayState::new(config).unwrap();
                for (i, &row) in program.input_rows().iter().enumerate() {
                    for r in row..row + bits as usize {
                        s.write_row(r, &[seed.rotate_left((r + i) as u32) | 1]).unwrap();
                    }
                }
                execute_program(program.program(), &mut s).unwrap();
                s.activation_log()
            })
            .collect();
        prop_assert_eq!(logs[0], logs[1]);
        prop_assert_eq!(logs[0].total(), program.program().counts().total());
    }

    #[test]
    fn bin_dot_matches_signed_sum(pairs in prop::collection::vec((any::<bool>(), any::<bool>()), 1..=256)) {
        let (a, b): (Vec<bool>, Vec<bool>) = pairs.iter().copied().unzip();
        let pm = |x: bool| if x { 1i64 } else { -1 };
        let want: i64 = pairs.iter().map(|&(x, y)| pm(x) * pm(y)).sum();
        prop_assert_eq!(bin_dot(&a, &b).unwrap(), want);
    }
}

proptest! {
    #[test]
    fn amdahl_is_bounded_and_monotone(c in 0.0f64..=1.0, s in 1.0f64..1e4, dc in 0.0f64..0.5, ds in 0.0f64..100.0) {
        let f = |c: f64, s: f64| amdahl_speedup(SpeedupInputs::new(c, s).unwrap());
        let v = f(c, s);
        prop_assert!((1.0 - 1e-12..=s * (1.0 + 1e-12)).contains(&v));
        prop_assert!(f((c + dc).min(1.0), s) >= v - 1e-12);
        prop_assert!(f(c, s + ds) >= v - 1e-12);
    }
}

#[test]
fn add_and_sub_throughput_falls_with_width() {
    let t = TimingModel::default();
    for op in [ArithOp::Add, ArithOp::Sub] {
        let tp: Vec<f64> = [8, 16, 32, 64]
            .iter()
            .map(|&b| throughput_report(OpKind::Arith(op), b, &t).unwrap().throughput)
            .collect();
        assert!(tp.windows(2).all(|w| w[0] > w[1]), "{op:?}: {tp:?}");
    }
}
