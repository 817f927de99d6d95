use proptest::prelude::*;

use pimkit::pum::{
    allocate, equivalent, execute_program, synthesize_maj, transpose_to_horizontal, transpose_to_vertical,
    BoolCircuit, NodeId, OperandBinding, SubarrayConfig, SubarrayState,
};

/// (gate kind, operand picks) turned into a circuit over `inputs` inputs.
fn build(inputs: usize, spec: &[(u8, [usize; 3])], outs: &[usize]) -> BoolCircuit {
    let mut c = BoolCircuit::new();
    let mut nodes: Vec<NodeId> = (0..inputs).map(|_| c.input()).collect();
    nodes.push(c.constant(false));
    nodes.push(c.constant(true));
    for &(kind, picks) in spec {
        let p = |i: usize| nodes[picks[i] % nodes.len()];
        let n = match kind % 8 {
            0 => c.and(p(0), p(1)),
            1 => c.or(p(0), p(1)),
            2 => c.not(p(0)),
            3 => c.xor(p(0), p(1)),
            4 => c.xnor(p(0), p(1)),
            5 => c.maj(p(0), p(1), p(2)),
            6 => c.mux(p(0), p(1), p(2)),
            _ => c.full_add(p(0), p(1), p(2)).0,
        };
        nodes.push(n);
    }
    for &o in outs {
        c.output(nodes[o % nodes.len()]);
    }
    c
}

fn circuit() -> impl Strategy<Value = BoolCircuit> {
    (
        1usize..6,
        prop::collection::vec((any::<u8>(), [any::<usize>(), any::<usize>(), any::<usize>()]), 1..25),
        prop::collection::vec(any::<usize>(), 1..4),
    )
        .prop_map(|(i, spec, outs)| build(i, &spec, &outs))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn synthesis_preserves_function(c in circuit()) {
        let maj = synthesize_maj(&c).unwrap();
        prop_assert!(equivalent(&c, &maj).unwrap());
    }

    #[test]
    fn allocated_programs_replay_the_circuit(c in circuit(), seed in any::<u64>()) {
        let maj = synthesize_maj(&c).unwrap();
        let config = SubarrayConfig::new(64, 128, 8).unwrap();
        let ins: Vec<usize> = (0..maj.num_inputs()).collect();
        // outputs may repeat a node; bind each to its own row
        let outs: Vec<usize> = (0..maj.outputs().len()).map(|i| 20 + i).collect();
        let Ok(alloc) = allocate(&maj, &OperandBinding::new(ins.clone(), outs.clone()), &config.layout()) else {
            return Ok(());
        };
        prop_assert!(alloc.peak_rows <= 8);
        let mut state = SubarrayState::new(config).unwrap();
        let mut x = seed | 1;
        let mut next = || { x ^= x << 13; x ^= x >> 7; x ^= x << 17; x };
        let values: Vec<Vec<u64>> = ins.iter().map(|_| vec![next(), next()]).collect();
        for (&r, v) in ins.iter().zip(&values) {
            state.write_row(r, v).unwrap();
        }
        execute_program(&alloc.program, &mut state).unwrap();
        let log = state.activation_log();
        let counts = alloc.program.counts();
        prop_assert_eq!(
            (log.copies, log.triple_activations, log.not_activations, log.constant_inits),
            (counts.copies, counts.triple_activations, counts.not_activations, counts.constant_inits)
        );
        for w in 0..2 {
            let lane: Vec<u64> = values.iter().map(|v| v[w]).collect();
            let want = c.eval_words(&lane).unwrap();
            for (o, &row) in outs.iter().enumerate() {
                prop_assert_eq!(state.row(row).unwrap()[w], want[o]);
            }
        }
    }

    #[test]
    fn triple_activation_is_symmetric(a in any::<u64>(), b in any::<u64>(), c in any::<u64>(), perm in 0usize..6) {
        let config = SubarrayConfig::new(16, 64, 6).unwrap();
        let rows = config.layout().compute;
        let (r0, r1, r2) = (rows.start, rows.start + 1, rows.start + 2);
        let order = [[r0, r1, r2], [r0, r2, r1], [r1, r0, r2], [r1, r2, r0], [r2, r0, r1], [r2, r1, r0]][perm];
        let mut s = SubarrayState::new(config).unwrap();
        for (r, v) in [(r0, a), (r1, b), (r2, c)] {
            s.write_row(r, &[v]).unwrap();
        }
        s.maj3_activate(order[0], order[1], order[2]).unwrap();
        let want = (a & b) | (b & c) | (a & c);
        for r in [r0, r1, r2] {
            prop_assert_eq!(s.row(r).unwrap()[0], want);
        }
    }

    #[test]
    fn transpose_round_trips(width in prop::sample::select(vec![8u32, 16, 32, 64]), raw in prop::collection::vec(any::<u64>(), 0..300)) {
        let mask = if width == 64 { u64::MAX } else { (1 << width) - 1 };
        let values: Vec<u64> = raw.iter().map(|v| v & mask).collect();
        let m = transpose_to_vertical(&values, width, values.len().max(1)).unwrap();
        prop_assert_eq!(m.height(), width as usize);
        let back = transpose_to_horizontal(&m);
        prop_assert_eq!(&back[..values.len()], &values[..]);
    }
}
