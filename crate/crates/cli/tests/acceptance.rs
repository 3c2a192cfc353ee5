//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tseries_cli::bench::{self, Query};
use tseries_cli::synth::random_walk;
use tseries_core::expr::{canonical_name, canonicalize, decompose, evaluate, parse};
use tseries_core::indicators::mavg;
use tseries_core::transport::{pke, positive_runs, pst, q4_pke_text, rpa, Trip};
use tseries_core::vector::{add, mult, scale};
use tseries_core::{Calendar, Interval, Kind, Series, Value};
use tseries_cost::{
    capacity_bytes, fit, format_gb, gain, optimal_peers, measured_rows, MEASURED_N, MEASURED_T_NET,
};
use tseries_p2p::{annotate, execute, Network, SimConfig};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn walk(name: &str, cal: &Arc<Calendar>, rng: &mut ChaCha8Rng, null_rate: f64) -> Series {
    let mut price = 100.0;
    let values = (0..cal.len())
        .map(|_| {
            price *= (0.02 * (rng.random::<f64>() - 0.5)).exp();
            let r = rng.random::<f64>();
            if r < null_rate / 2.0 {
                Value::Empty
            } else if r < null_rate {
                Value::Unknown
            } else {
                Value::Real(price)
            }
        })
        .collect();
    Series::new(name, cal.clone(), 0, values).unwrap()
}

/// Same null pattern and reals within 1e-9 relative (absolute below 1).
fn same(a: &Series, b: &Series) -> bool {
    a.interval() == b.interval()
        && a.values().iter().zip(b.values()).all(|(x, y)| match (x, y) {
            (Value::Real(x), Value::Real(y)) => (x - y).abs() <= 1e-9 * x.abs().max(y.abs()).max(1.0),
            _ => x.kind() == y.kind(),
        })
}

fn sim(peers: usize, seg_len: Option<usize>, overlap: usize) -> SimConfig {
    SimConfig {
        peers,
        seg_len,
        overlap,
        check_invariants: true,
        ..SimConfig::default()
    }
}

fn ac1_capacity() -> Outcome {
    let bytes = capacity_bytes(1000, 10, 360, 8.5, 5, 4);
    ensure(bytes == 36_720_000_000, || format!("got {bytes}"))?;
    let shown = format_gb(bytes);
    ensure(shown == "≈34.2 GB", || format!("shown as {shown}"))?;
    Ok(format!("{bytes} bytes, {shown}"))
}

fn ac2_lookup_identity() -> Outcome {
    for r in measured_rows() {
        let product = r.p as f64 * r.t_index;
        ensure(format!("{product:.1}") == format!("{:.1}", r.t_r), || {
            format!("fixture P={}: {product:.1} vs {:.1}", r.p, r.t_r)
        })?;
    }
    let n = 60_000;
    let s = random_walk("S", n, 11);
    let q = parse("MACD(S,12,100)").unwrap();
    let mut shown = Vec::new();
    for peers in [8usize, 16, 32, 64] {
        let mut net = Network::new(sim(peers, None, 128)).map_err(|e| e.to_string())?;
        net.load_base(&s).map_err(|e| e.to_string())?;
        let run = execute(&mut net, &q, s.interval(), 1).map_err(|e| e.to_string())?;
        let p = run.probe;
        let product = peers as f64 * p.t_index;
        ensure(
            (product - p.t_r).abs() <= 1e-9 * p.t_r && format!("{product:.1}") == format!("{:.1}", p.t_r),
            || format!("simulated P={peers}: P*T_INDEX={product} T_R={}", p.t_r),
        )?;
        shown.push(format!("{peers}->{:.1}", p.t_r));
    }
    Ok(format!("6 fixture rows; simulated T_R {}", shown.join(" ")))
}

fn ac3_optimal_peers() -> Outcome {
    let clock = Instant::now();
    let f = fit(&measured_rows(), MEASURED_N, MEASURED_T_NET).map_err(|e| e.to_string())?;
    let k = f.params.gain_constants();
    let best = optimal_peers(MEASURED_N, &k, 4096);
    let peak = (1..=4096usize)
        .max_by(|&a, &b| gain(a, MEASURED_N, &k).total_cmp(&gain(b, MEASURED_N, &k)))
        .unwrap();
    let ms = clock.elapsed().as_secs_f64() * 1e3;
    ensure((32..=128).contains(&best), || format!("argmin T_P2P at P={best}"))?;
    ensure((50..=200).contains(&peak), || format!("gain peak at P={peak}"))?;
    ensure(ms < 1000.0, || format!("took {ms:.0} ms"))?;
    Ok(format!("A={:.4} B={:.3}; argmin P={best}, gain peak P={peak}", f.params.a, f.params.b))
}

fn random_expr(rng: &mut ChaCha8Rng, depth: usize) -> String {
    let base = |rng: &mut ChaCha8Rng| if rng.random_bool(0.5) { "A" } else { "B" }.to_string();
    if depth == 0 || rng.random_bool(0.2) {
        return base(rng);
    }
    let sub = |rng: &mut ChaCha8Rng| random_expr(rng, depth - 1);
    match rng.random_range(0..16) {
        0 => format!("SCALE({},{})", sub(rng), rng.random_range(-12..12) as f64 / 4.0),
        1 => {
            let cmp = [">", "<", ">=", "<="][rng.random_range(0..4)];
            format!("SEL({},{cmp}{})", sub(rng), rng.random_range(-10..120))
        }
        2 => format!("PROJ({},{})", sub(rng), ["ABS", "SQUARE", "IDENTITY"][rng.random_range(0..3)]),
        3 => format!("PLUS({},{})", sub(rng), sub(rng)),
        4 => format!("MINUS({},{})", sub(rng), sub(rng)),
        5 => format!("MULT({},{})", sub(rng), sub(rng)),
        6 => {
            let f = ["SUM", "PRODUCT", "MAX", "MIN", "AVG"][rng.random_range(0..5)];
            let k = rng.random_range(2..4);
            let kids: Vec<String> = (0..k).map(|_| sub(rng)).collect();
            format!("JOIN({},{f})", kids.join(","))
        }
        7 => format!("MAVG({},{})", sub(rng), rng.random_range(1..40)),
        8 => format!("XAVG({},{})", sub(rng), rng.random_range(1..40)),
        9 => format!("RSI({},{})", sub(rng), rng.random_range(1..30)),
        10 => format!("MOM({},{})", sub(rng), rng.random_range(1..20)),
        11 => format!("SHIFT({})", sub(rng)),
        12 => {
            let a = rng.random_range(2..20);
            format!("MACD({},{a},{})", base(rng), a + rng.random_range(1..60))
        }
        13 => format!("BUY({})", base(rng)),
        14 => format!("SELL({})", base(rng)),
        _ => q4_pke_text(&base(rng)),
    }
}

fn feasible(text: &str, overlap: usize) -> bool {
    let e = parse(text).unwrap();
    decompose(&e).atomics.iter().all(|a| a.total_lookback() <= overlap)
}

fn ac4_segmented_equals_centralized() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let cases = 200;
    let mut ops_seen = std::collections::BTreeSet::new();
    for case in 0..cases {
        let text = loop {
            let t = random_expr(&mut rng, 3);
            if feasible(&t, 128) {
                break t;
            }
        };
        for op in ["SCALE", "SEL", "PROJ", "PLUS", "MINUS", "MULT", "JOIN", "MAVG", "XAVG", "RSI", "MOM", "SHIFT", "MACD", "BUY", "SELL"] {
            if text.contains(&format!("{op}(")) {
                ops_seen.insert(op);
            }
        }
        if text.contains(&q4_pke_text("A")) || text.contains(&q4_pke_text("B")) {
            ops_seen.insert("Q4");
        }
        let n = rng.random_range(300..=5000);
        let cal = Arc::new(Calendar::synthetic(n));
        let (a, b) = (walk("A", &cal, &mut rng, 0.02), walk("B", &cal, &mut rng, 0.02));
        let peers = [2usize, 4, 8, 16][rng.random_range(0..4)];
        let iv = if rng.random_bool(0.5) {
            a.interval()
        } else {
            let s = rng.random_range(0..n);
            Interval { start: s, end: rng.random_range(s..n) }
        };
        let q = parse(&text).unwrap();
        let env = HashMap::from([("A".to_string(), a.clone()), ("B".to_string(), b.clone())]);
        let want = evaluate(&q, &env, iv).map_err(|e| format!("case {case} {text}: oracle failed: {e}"))?;
        let mut net = Network::new(sim(peers, Some(256), 128)).map_err(|e| e.to_string())?;
        net.load_base(&a).map_err(|e| e.to_string())?;
        net.load_base(&b).map_err(|e| e.to_string())?;
        let got = execute(&mut net, &q, iv, case).map_err(|e| format!("case {case} {text}: {e}"))?;
        ensure(same(&got.series, &want), || format!("case {case}: {text} on {peers} peers, n={n}, {iv:?}"))?;
        ensure(net.violations().is_empty(), || format!("case {case}: {:?}", net.violations()))?;
    }
    ensure(ops_seen.len() == 16, || format!("operators covered: {ops_seen:?}"))?;
    Ok(format!("{cases} random cases, all 16 operator forms covered"))
}

fn direct_mavg(v: &[Value<f64>], w: usize) -> Vec<Value<f64>> {
    (0..v.len())
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
        .collect()
}

fn ac5_incremental_mavg() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..1000 {
        let n = rng.random_range(1..=1500);
        let cal = Arc::new(Calendar::synthetic(n));
        let s = walk("S", &cal, &mut rng, 0.01);
        for w in [10usize, 50, 100] {
            let got = mavg(&s, w).map_err(|e| e.to_string())?;
            let want = Series::new("S", cal.clone(), 0, direct_mavg(s.values(), w)).unwrap();
            ensure(same(&got, &want), || format!("series {i}, n={n}, w={w}"))?;
        }
    }
    let big = random_walk("S", 100_000, 5);
    let time = |w: usize| {
        (0..7)
            .map(|_| {
                let clock = Instant::now();
                std::hint::black_box(mavg(&big, w).unwrap());
                clock.elapsed().as_secs_f64()
            })
            .fold(f64::INFINITY, f64::min)
    };
    time(10);
    let (t10, t100) = (time(10), time(100));
    let ratio = t100 / t10;
    ensure(ratio < 1.5, || format!("t(w=100)/t(w=10) = {ratio:.2}"))?;
    Ok(format!("1000 series x 3 windows exact; t(100)/t(10) = {ratio:.2} at n=100000"))
}

fn dyadic_series(name: &str, cal: &Arc<Calendar>, rng: &mut ChaCha8Rng) -> Series {
    let values = (0..cal.len())
        .map(|_| match rng.random_range(0..10) {
            0 => Value::Empty,
            1 => Value::Unknown,
            _ => Value::Real(rng.random_range(-400..400) as f64 / 4.0),
        })
        .collect();
    Series::new(name, cal.clone(), 0, values).unwrap()
}

fn ac6_vector_space() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let eq = |a: &Series, b: &Series| a.values() == b.values();
    for i in 0..500 {
        let n = rng.random_range(1..200);
        let cal = Arc::new(Calendar::synthetic(n));
        let (x, y, z) = (
            dyadic_series("X", &cal, &mut rng),
            dyadic_series("Y", &cal, &mut rng),
            dyadic_series("Z", &cal, &mut rng),
        );
        let zero = Series::constant("ZERO", cal.clone(), x.interval(), Value::Real(0.0)).unwrap();
        let one = Series::constant("ONE", cal.clone(), x.interval(), Value::Real(1.0)).unwrap();
        let a = rng.random_range(-16..16) as f64 / 8.0;
        let b = rng.random_range(-16..16) as f64 / 8.0;
        let r = |s: tseries_core::Result<Series>| s.unwrap();
        let checks = [
            ("x+y = y+x", eq(&r(add(&x, &y)), &r(add(&y, &x)))),
            ("xy = yx", eq(&r(mult(&x, &y)), &r(mult(&y, &x)))),
            ("(x+y)+z = x+(y+z)", eq(&r(add(&r(add(&x, &y)), &z)), &r(add(&x, &r(add(&y, &z)))))),
            ("(xy)z = x(yz)", eq(&r(mult(&r(mult(&x, &y)), &z)), &r(mult(&x, &r(mult(&y, &z)))))),
            ("x+0 = x", eq(&r(add(&x, &zero)), &x)),
            ("1x = x", eq(&scale(1.0, &x), &x)),
            ("x*1 = x", eq(&r(mult(&x, &one)), &x)),
            ("a(x+y) = ax+ay", eq(&scale(a, &r(add(&x, &y))), &r(add(&scale(a, &x), &scale(a, &y))))),
            ("(a+b)x = ax+bx", eq(&scale(a + b, &x), &r(add(&scale(a, &x), &scale(b, &x))))),
            ("a(bx) = (ab)x", eq(&scale(a, &scale(b, &x)), &scale(a * b, &x))),
            (
                "x(y+z) = xy+xz",
                eq(&r(mult(&x, &r(add(&y, &z)))), &r(add(&r(mult(&x, &y)), &r(mult(&x, &z))))),
            ),
        ];
        for (name, ok) in checks {
            ensure(ok, || format!("series {i}: {name}"))?;
        }
    }
    let cells = [Value::Real(2.0), Value::Empty, Value::Unknown];
    for x in cells {
        for y in cells {
            let want = if x.is_unknown() || y.is_unknown() {
                Kind::Unknown
            } else if x.is_empty() || y.is_empty() {
                Kind::Empty
            } else {
                Kind::Real
            };
            ensure((x + y).kind() == want, || format!("{x} + {y} = {}", x + y))?;
            ensure((x * y).kind() == want, || format!("{x} * {y} = {}", x * y))?;
        }
    }
    Ok("11 axioms on 500 null-bearing series; 9 kind pairs for + and *".into())
}

fn ac7_planner() -> Outcome {
    let q = parse("JOIN(MAVG(CAC40,10), SCALE(RSI(CAC40, 14), 100), SUM)").unwrap();
    let full = Interval { start: 0, end: 999 };
    let mut empty = Network::new(sim(16, Some(1024), 128)).map_err(|e| e.to_string())?;
    let plans = annotate(&mut empty, &q, full, 1).map_err(|e| e.to_string())?;
    ensure(plans.len() == 1 && plans[0].tree.node_count() == 6 && plans[0].tree.annotated_count() == 0, || {
        format!("empty DHT tree: {:?}", plans[0].tree)
    })?;

    let mut net = Network::new(sim(16, Some(1024), 128)).map_err(|e| e.to_string())?;
    net.load_base(&random_walk("CAC40", 1000, 7)).map_err(|e| e.to_string())?;
    for sub in ["MAVG(CAC40,10)", "SCALE(RSI(CAC40,14),100)"] {
        execute(&mut net, &parse(sub).unwrap(), full, 0).map_err(|e| e.to_string())?;
    }
    let plans = annotate(&mut net, &q, full, 1).map_err(|e| e.to_string())?;
    let tree = &plans[0].tree;
    ensure(
        tree.assign.is_none()
            && tree.children.len() == 2
            && tree.children.iter().all(|c| c.assign.is_some())
            && tree.surviving_descendants() == 0,
        || format!("pruned tree: {tree:?}"),
    )?;
    Ok("empty DHT keeps 6 nodes; cached MAVG and SCALE prune to root + 2 annotated leaves".into())
}

fn ac8_semantic_cache() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let cal = Arc::new(Calendar::synthetic(4000));
    let s = walk("S", &cal, &mut rng, 0.02);
    let q = parse("MACD(S,12,26)").unwrap();
    let mut net = Network::new(sim(8, Some(256), 128)).map_err(|e| e.to_string())?;
    net.load_base(&s).map_err(|e| e.to_string())?;
    let first = execute(&mut net, &q, s.interval(), 7).map_err(|e| e.to_string())?;
    let second = execute(&mut net, &q, s.interval(), 7).map_err(|e| e.to_string())?;
    ensure(second.stats.op_executions == 0, || format!("second run executed {} ops", second.stats.op_executions))?;
    ensure(second.probe.t_p2p < first.probe.t_p2p, || {
        format!("T_P2P {} then {}", first.probe.t_p2p, second.probe.t_p2p)
    })?;
    ensure(net.violations().is_empty(), || format!("{:?}", net.violations()))?;

    let tiny = SimConfig {
        cache_capacity: 1,
        ..sim(8, Some(256), 128)
    };
    let mut small = Network::new(tiny).map_err(|e| e.to_string())?;
    small.load_base(&s).map_err(|e| e.to_string())?;
    execute(&mut small, &q, s.interval(), 7).map_err(|e| e.to_string())?;
    let again = execute(&mut small, &q, s.interval(), 7).map_err(|e| e.to_string())?;
    ensure(again.stats.op_executions > 0, || "capacity-1 cache did not recompute".into())?;
    ensure(small.violations().is_empty(), || format!("{:?}", small.violations()))?;
    ensure(same(&again.series, &first.series), || "recomputed result differs".into())?;
    Ok(format!(
        "ops {} then 0, T_P2P {:.1} then {:.1}; capacity 1 recomputes {} ops; coherent throughout",
        first.stats.op_executions, first.probe.t_p2p, second.probe.t_p2p, again.stats.op_executions
    ))
}

fn trip_ms(speeds_ms: &[f64]) -> Trip<f64> {
    let cal = Arc::new(Calendar::synthetic(speeds_ms.len()));
    let kmh = speeds_ms.iter().map(|v| v * 3.6);
    Trip::new(Series::from_reals("v", cal, kmh).unwrap(), 1.0).unwrap()
}

fn ac9_transport() -> Outcome {
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-9;
    let flat = trip_ms(&[10.0; 6]);
    ensure(close(rpa(&flat).unwrap(), 0.0) && close(pke(&flat).unwrap(), 0.0), || "constant speed".into())?;
    let single = trip_ms(&[0.0, 10.0, 10.0, 0.0]).with_duration(4.0).unwrap();
    ensure(close(rpa(&single).unwrap(), 25.0) && close(pke(&single).unwrap(), 25.0), || {
        format!("[0,10,10,0]: rpa {} pke {}", rpa(&single).unwrap(), pke(&single).unwrap())
    })?;
    let osc = trip_ms(&[0.0, 5.0, 0.0, 5.0, 0.0]);
    ensure(close(pke(&osc).unwrap(), 12.5), || format!("oscillation pke {}", pke(&osc).unwrap()))?;
    let cal = Arc::new(Calendar::synthetic(4));
    let still = Trip::new(Series::from_reals("v", cal, [1.0, 3.0, 1.0, 3.0]).unwrap(), 1.0).unwrap();
    ensure(close(pst(&still).unwrap(), 0.5), || format!("pst {}", pst(&still).unwrap()))?;

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..500 {
        let n = rng.random_range(2..300);
        let kmh: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..130.0)).collect();
        let cal = Arc::new(Calendar::synthetic(n));
        let trip = Trip::new(Series::from_reals("v", cal, kmh.iter().copied()).unwrap(), 1.0).unwrap();
        let ms: Vec<f64> = kmh.iter().map(|v| v / 3.6).collect();
        let stepwise: f64 = (1..n)
            .filter(|&k| ms[k] > ms[k - 1])
            .map(|k| ms[k] * ms[k] - ms[k - 1] * ms[k - 1])
            .sum::<f64>()
            / (n - 1) as f64;
        let got = pke(&trip).unwrap();
        ensure((got - stepwise).abs() <= 1e-9 * stepwise.abs().max(1.0), || {
            format!("trip {i}: runs {got} vs telescoped {stepwise}")
        })?;
        ensure(positive_runs(&trip).iter().all(|&(a, b)| a >= 1 && a <= b), || format!("trip {i}: bad run"))?;
    }
    Ok("hand examples within 1e-9; run/telescoping identity on 500 trips".into())
}

fn ac10_bench_shape(suite_start: Instant) -> Outcome {
    let data = random_walk("PX1", 100_000, 10);
    let ns = [1000usize, 2000, 4000, 16000, 100_000];
    let rows = bench::run(&data, &[Query::Q3], &ns, &[10, 50, 100], 5).map_err(|e| e.to_string())?;
    let points: Vec<(usize, f64)> = rows.iter().map(|r| (r.n, r.t_min_ms)).collect();
    let slope = bench::loglog_slope(&points);
    ensure((0.8..=1.3).contains(&slope), || format!("log-log slope {slope:.3}"))?;
    let total = suite_start.elapsed().as_secs_f64();
    ensure(total < 300.0, || format!("suite took {total:.0} s"))?;
    Ok(format!("Q3 slope {slope:.3}; suite so far {total:.1} s"))
}

fn ac11_parser() -> Outcome {
    let corpus = [
        "MAVG(PX1, 10)",
        "RSI(PX1, 14)",
        "MINUS(XAVG(PX1,3), XAVG(PX1, 50))",
        "MINUS(MULT(MULT(PX1, SEL(MOM(PX1,2), >0)), MULT(PX1, SEL(MOM(PX1,2), >0))), MULT(MULT(SHIFT(PX1), SEL(MOM(PX1,2), >0)), MULT(SHIFT(PX1), SEL(MOM(PX1,2), >0))))",
        "MAVG(CAC40, 10)",
        "JOIN(MAVG(CAC40,10), SCALE(MOM(CAC40, 5), 100), SUM)",
        "SCALE(MOM(CAC40, 5),100)",
        "MOM(SCALE (CAC40, 100), 5)",
        "JOIN(MAVG(CAC40,10), SCALE(RSI(CAC40, 14), 100), SUM)",
        "SEL(MAVG(MINUS(MAVG(S,12),MAVG(S,26)),9),>0)",
        "SEL(DIVIDE(MAVG(S,26),MAVG(S,12)),>1.1)",
        "BUY(S)",
        "SELL(S)",
        "MACD(S,12,26)",
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let generated: Vec<String> = (0..1000).map(|_| random_expr(&mut rng, 4)).collect();
    let all: Vec<&str> = corpus.iter().copied().chain(generated.iter().map(String::as_str)).collect();
    for text in &all {
        let first = parse(text).map_err(|e| format!("{text}: {e}"))?;
        let name = canonical_name(&first);
        let again = parse(&name).map_err(|e| format!("{name}: {e}"))?;
        ensure(canonical_name(&again) == name && again == canonicalize(&first), || {
            format!("{text} -> {name} -> {}", canonical_name(&again))
        })?;
    }
    for (x, y) in [("PLUS(B,A)", "PLUS(A,B)"), ("MULT(MAVG(S,3),A)", "MULT(A,MAVG(S,3))")] {
        let (cx, cy) = (canonical_name(&parse(x).unwrap()), canonical_name(&parse(y).unwrap()));
        ensure(cx == cy, || format!("{x} -> {cx} but {y} -> {cy}"))?;
    }
    let (m1, m2) = (canonical_name(&parse("MINUS(B,A)").unwrap()), canonical_name(&parse("MINUS(A,B)").unwrap()));
    ensure(m1 != m2, || "MINUS operands were reordered".into())?;
    Ok(format!("{} expressions round-trip ({} printed forms); PLUS/MULT order canonical", all.len(), corpus.len()))
}

fn main() {
    let start = Instant::now();
    let criteria: Vec<Criterion> = vec![
        ("AC1 capacity", Box::new(ac1_capacity)),
        ("AC2 T_R = P x T_INDEX", Box::new(ac2_lookup_identity)),
        ("AC3 optimal peers", Box::new(ac3_optimal_peers)),
        ("AC4 segmented = centralized", Box::new(ac4_segmented_equals_centralized)),
        ("AC5 incremental MAVG", Box::new(ac5_incremental_mavg)),
        ("AC6 vector-space axioms", Box::new(ac6_vector_space)),
        ("AC7 planner pruning", Box::new(ac7_planner)),
        ("AC8 semantic cache", Box::new(ac8_semantic_cache)),
        ("AC9 transport kernels", Box::new(ac9_transport)),
        ("AC10 benchmark shape", Box::new(move || ac10_bench_shape(start))),
        ("AC11 parser round trip", Box::new(ac11_parser)),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let clock = Instant::now();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".into()));
        let secs = clock.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} ({secs:.1} s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail} ({secs:.1} s)");
            }
        }
    }
    println!("{} of {} criteria passed in {:.1} s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
