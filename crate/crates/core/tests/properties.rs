use std::collections::HashMap;
use std::sync::Arc;

use num_rational::Rational64;
use proptest::prelude::*;
use tseries_core::algebra::{sel, win, CombineFn, CompareOp, Predicate, WindowSpec};
use tseries_core::expr::{canonical_name, evaluate_full, parse};
use tseries_core::indicators::mavg;
use tseries_core::segment::{assemble, split};
use tseries_core::transport::{pke, positive_runs, Trip};
use tseries_core::vector::{add, scale};
use tseries_core::{Calendar, Series, SegmentSpec, TimeSeries, Value};

fn rational() -> impl Strategy<Value = Value<Rational64>> {
    prop_oneof![
        6 => (-50i64..50, 1i64..8).prop_map(|(n, d)| Value::Real(Rational64::new(n, d))),
        1 => Just(Value::Empty),
        1 => Just(Value::Unknown),
    ]
}

fn real() -> impl Strategy<Value = Value<f64>> {
    prop_oneof![
        8 => (-1.0e3..1.0e3f64).prop_map(Value::Real),
        1 => Just(Value::Empty),
        1 => Just(Value::Unknown),
    ]
}

fn on(cal: &Arc<Calendar>, name: &str, values: Vec<Value<Rational64>>) -> TimeSeries<Rational64> {
    TimeSeries::new(name, cal.clone(), 0, values).unwrap()
}

fn close(a: &[Value<f64>], b: &[Value<f64>], rel: f64) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| match (x, y) {
            (Value::Real(x), Value::Real(y)) => (x - y).abs() <= rel * x.abs().max(y.abs()).max(1.0),
            _ => x.kind() == y.kind(),
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn vector_space_axioms_exact(
        (a, b, c) in (1usize..40).prop_flat_map(|n| (
            prop::collection::vec(rational(), n),
            prop::collection::vec(rational(), n),
            prop::collection::vec(rational(), n),
        )),
        s in (-9i64..9, 1i64..5),
        r in (-9i64..9, 1i64..5),
    ) {
        let cal = Arc::new(Calendar::synthetic(a.len()));
        let (a, b, c) = (on(&cal, "A", a), on(&cal, "B", b), on(&cal, "C", c));
        let s = Rational64::new(s.0, s.1);
        let r = Rational64::new(r.0, r.1);
        let zero = on(&cal, "Z", vec![Value::Real(Rational64::from_integer(0)); a.len()]);

        prop_assert_eq!(add(&a, &b).unwrap(), add(&b, &a).unwrap());
        prop_assert_eq!(
            add(&add(&a, &b).unwrap(), &c).unwrap(),
            add(&a, &add(&b, &c).unwrap()).unwrap()
        );
        prop_assert_eq!(add(&a, &zero).unwrap(), a.clone());
        prop_assert_eq!(scale(Rational64::from_integer(1), &a), a.clone());
        prop_assert_eq!(
            scale(s, &add(&a, &b).unwrap()),
            add(&scale(s, &a), &scale(s, &b)).unwrap()
        );
        prop_assert_eq!(scale(s + r, &a), add(&scale(s, &a), &scale(r, &a)).unwrap());
        prop_assert_eq!(scale(s * r, &a), scale(s, &scale(r, &a)));
        // Reals cancel with their opposite; nulls stay as they are.
        let cancelled = add(&a, &scale(Rational64::from_integer(-1), &a)).unwrap();
        for (x, y) in cancelled.values().iter().zip(a.values()) {
            match y {
                Value::Real(_) => prop_assert_eq!(*x, Value::Real(Rational64::from_integer(0))),
                other => prop_assert_eq!(x, other),
            }
        }
    }

    #[test]
    fn vector_space_axioms_dyadic_floats(
        (a, b, c) in (1usize..40).prop_flat_map(|n| {
            let cell = prop_oneof![
                6 => (-4096i32..4096).prop_map(|k| Value::Real(k as f64 / 64.0)),
                1 => Just(Value::Empty),
                1 => Just(Value::Unknown),
            ];
            (
                prop::collection::vec(cell.clone(), n),
                prop::collection::vec(cell.clone(), n),
                prop::collection::vec(cell, n),
            )
        }),
    ) {
        let cal = Arc::new(Calendar::synthetic(a.len()));
        let mk = |n: &str, v: Vec<Value<f64>>| Series::new(n, cal.clone(), 0, v).unwrap();
        let (a, b, c) = (mk("A", a), mk("B", b), mk("C", c));
        prop_assert_eq!(add(&a, &b).unwrap(), add(&b, &a).unwrap());
        prop_assert_eq!(
            add(&add(&a, &b).unwrap(), &c).unwrap(),
            add(&a, &add(&b, &c).unwrap()).unwrap()
        );
        prop_assert_eq!(scale(2.0, &add(&a, &b).unwrap()), add(&scale(2.0, &a), &scale(2.0, &b)).unwrap());
    }

    #[test]
    fn null_kind_of_sum_is_determined_by_kinds(x in rational(), y in rational()) {
        let z = x + y;
        match (x, y) {
            (Value::Real(_), Value::Real(_)) => prop_assert!(z.is_real()),
            (Value::Unknown, _) | (_, Value::Unknown) => prop_assert!(z.is_unknown()),
            _ => prop_assert!(z.is_empty()),
        }
        prop_assert_eq!(z, y + x);
    }

    #[test]
    fn selection_is_idempotent(v in prop::collection::vec(real(), 1..60), th in -500.0..500.0f64) {
        let s = {
            let cal = Arc::new(Calendar::synthetic(v.len()));
            Series::new("S", cal, 0, v).unwrap()
        };
        let p = Predicate::new(CompareOp::Gt, th).unwrap();
        let once = sel(&p, &s);
        prop_assert_eq!(sel(&p, &once), once);
    }

    #[test]
    fn window_is_causal(
        v in prop::collection::vec(real(), 2..80),
        w in 1usize..10,
        cut in 0usize..79,
        tail in prop::collection::vec(real(), 80),
    ) {
        let cut = cut % v.len();
        let cal = Arc::new(Calendar::synthetic(v.len()));
        let a = Series::new("S", cal.clone(), 0, v.clone()).unwrap();
        let mut changed = v.clone();
        changed[cut + 1..].copy_from_slice(&tail[..v.len() - cut - 1]);
        let b = Series::new("S", cal, 0, changed).unwrap();
        let spec = WindowSpec::new(w).unwrap();
        let wa = win(CombineFn::Sum, spec, &a).unwrap();
        let wb = win(CombineFn::Sum, spec, &b).unwrap();
        prop_assert_eq!(&wa.values()[..=cut], &wb.values()[..=cut]);
    }

    #[test]
    fn window_matches_direct_oracle(v in prop::collection::vec(real(), 1..80), w in 1usize..12) {
        let cal = Arc::new(Calendar::synthetic(v.len()));
        let s = Series::new("S", cal, 0, v.clone()).unwrap();
        let got = win(CombineFn::Max, WindowSpec::new(w).unwrap(), &s).unwrap();
        let want: Vec<Value<f64>> = (0..v.len())
            .map(|t| {
                let cells: Vec<Value<f64>> =
                    (0..w).map(|lag| v[t.saturating_sub(lag)]).collect();
                if cells.iter().any(Value::is_unknown) {
                    Value::Unknown
                } else if cells.iter().any(Value::is_empty) {
                    Value::Empty
                } else {
                    Value::Real(cells.iter().filter_map(Value::as_real).fold(f64::MIN, f64::max))
                }
            })
            .collect();
        prop_assert_eq!(got.values(), &want[..]);
    }

    #[test]
    fn incremental_mavg_matches_direct_sum(v in prop::collection::vec(real(), 1..200), w in 1usize..30) {
        let cal = Arc::new(Calendar::synthetic(v.len()));
        let s = Series::new("S", cal, 0, v.clone()).unwrap();
        let got = mavg(&s, w).unwrap();
        let want: Vec<Value<f64>> = (0..v.len())
            .map(|t| {
                let cells: Vec<Value<f64>> = (0..w).map(|lag| v[t.saturating_sub(lag)]).collect();
                if cells.iter().any(Value::is_unknown) {
                    Value::Unknown
                } else if cells.iter().any(Value::is_empty) {
                    Value::Empty
                } else {
                    Value::Real(cells.iter().filter_map(Value::as_real).sum::<f64>() / w as f64)
                }
            })
            .collect();
        prop_assert!(close(got.values(), &want, 1e-9));
    }

    #[test]
    fn parse_round_trip(e in expression()) {
        let first = canonical_name(&parse(&e).unwrap());
        let again = canonical_name(&parse(&first).unwrap());
        prop_assert_eq!(&first, &again);
        let tree = tseries_core::expr::canonicalize(&parse(&e).unwrap());
        prop_assert_eq!(parse(&first).unwrap(), tree);
    }

    #[test]
    fn segmented_chain_equals_centralized(
        v in prop::collection::vec(real(), 1..1200),
        chain in unary_chain(),
        seg_len in prop::sample::select(vec![64usize, 128, 256]),
    ) {
        let spec = SegmentSpec::new(seg_len, 60).unwrap();
        let cal = Arc::new(Calendar::synthetic(v.len()));
        let s = Series::new("S", cal, 0, v).unwrap();
        let expr = parse(&chain).unwrap();
        prop_assume!(expr.total_lookback() <= spec.overlap);
        let env = HashMap::from([("S".to_string(), s.clone())]);
        let want = evaluate_full(&expr, &env).unwrap();

        let mut steps = Vec::new();
        let mut node = &expr;
        while let Some(child) = node.children().first() {
            steps.push(node);
            node = child;
        }
        steps.reverse();
        let parts: Vec<_> = split(&s, spec)
            .into_iter()
            .map(|seg| {
                steps.iter().fold(seg, |seg, step| {
                    let tseries_core::ExprNode::Op { op, params, .. } = step else { unreachable!() };
                    seg.map(step.to_string(), step.lookback(), |l| {
                        tseries_core::expr::apply(*op, params, &[l])
                    })
                    .unwrap()
                })
            })
            .collect();
        for p in &parts {
            let core = p.core_interval().unwrap();
            prop_assert!(p.valid().start <= core.start);
        }
        let got = assemble(&parts, s.interval()).unwrap();
        prop_assert!(close(got.values(), want.values(), 1e-9));
    }

    #[test]
    fn split_assemble_round_trip(v in prop::collection::vec(real(), 1..3000), seg_len in 8usize..600) {
        let spec = SegmentSpec::new(seg_len, seg_len / 2).unwrap();
        let cal = Arc::new(Calendar::synthetic(v.len()));
        let s = Series::new("S", cal, 0, v).unwrap();
        prop_assert_eq!(assemble(&split(&s, spec), s.interval()).unwrap(), s);
    }

    #[test]
    fn pke_runs_telescope(speeds in prop::collection::vec(0.0..130.0f64, 2..120)) {
        let cal = Arc::new(Calendar::synthetic(speeds.len()));
        let s = Series::from_reals("v", cal, speeds.iter().copied()).unwrap();
        let trip = Trip::new(s, 1.0).unwrap();
        let ms: Vec<f64> = speeds.iter().map(|v| v / 3.6).collect();
        let stepwise: f64 = (1..ms.len())
            .filter(|&i| ms[i] > ms[i - 1])
            .map(|i| ms[i] * ms[i] - ms[i - 1] * ms[i - 1])
            .sum();
        let want = stepwise / (ms.len() - 1) as f64;
        prop_assert!((pke(&trip).unwrap() - want).abs() <= 1e-9 * want.abs().max(1.0));
        for (first, last) in positive_runs(&trip) {
            prop_assert!(first >= 1 && first <= last);
        }
    }
}

fn unary_chain() -> impl Strategy<Value = String> {
    let step = prop_oneof![
        (1usize..20).prop_map(|w| format!("MAVG($,{w})")),
        (1usize..20).prop_map(|w| format!("XAVG($,{w})")),
        (1usize..15).prop_map(|w| format!("RSI($,{w})")),
        (1usize..10).prop_map(|w| format!("MOM($,{w})")),
        Just("SHIFT($)".to_string()),
        (-3.0..3.0f64).prop_map(|x| format!("SCALE($,{x})")),
        (-10.0..10.0f64).prop_map(|x| format!("SEL($,>{x})")),
        Just("PROJ($,ABS)".to_string()),
        (1usize..8).prop_map(|w| format!("WIN(MIN,{w},$)")),
    ];
    prop::collection::vec(step, 1..4)
        .prop_map(|steps| steps.iter().fold("S".to_string(), |acc, s| s.replace('$', &acc)))
}

fn expression() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![Just("A".to_string()), Just("B".to_string()), Just("CAC40".to_string())];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), 1usize..200).prop_map(|(e, w)| format!("mavg( {e} , 0{w})")),
            (inner.clone(), -1.0e3..1.0e3f64).prop_map(|(e, x)| format!("SCALE({e},{x})")),
            (inner.clone(), -5.0..5.0f64).prop_map(|(e, x)| format!("SEL({e}, >={x})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("PLUS({a},{b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("Mult({a}, {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("MINUS({a},{b})")),
            (inner.clone(), inner.clone(), inner.clone())
                .prop_map(|(a, b, c)| format!("JOIN({a},{b},{c},sum)")),
            (inner.clone(), 1usize..50).prop_map(|(e, w)| format!("WIN(AVG,{w},{e})")),
            inner.clone().prop_map(|e| format!("SHIFT({e})")),
            (inner, 2usize..30).prop_map(|(e, w)| format!("XAVG({e},{w},0.1)")),
        ]
    })
}

#[test]
fn null_tables_all_kind_pairs() {
    use Value::{Empty as E, Real as R, Unknown as U};
    let one = Rational64::from_integer(1);
    let cells = [R(one), E, U];
    for x in cells {
        for y in cells {
            let expected = match (x, y) {
                (R(_), R(_)) => R(one + one),
                (U, _) | (_, U) => U,
                _ => E,
            };
            assert_eq!(x + y, expected, "{x} + {y}");
        }
        let scaled = x.scale(Rational64::from_integer(3));
        assert_eq!(scaled.kind(), x.kind());
    }
}
