//! Acceptance criteria, one line per criterion. Runs as a plain binary so
//! the verdict lines are always printed; exits non-zero if any fails.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use zeck_core::adder::{self, digitwise_sum, stage1_eliminate, stage2_left_to_right, stage2_right_to_left};
use zeck_core::arith::{divrem, mul_binary, mul_fenwick, sqrt_rem};
use zeck_core::automaton::{compiled, direct_pass, run_parallel_prefix, run_scan};
use zeck_core::convert::{binary_to_zeck, binary_to_zeck_shaped, zeck_to_binary_shaped, BitSeq};
use zeck_core::fibcodec::{codeword, decode_stream, encode_stream, CodeStream};
use zeck_core::sample;
use zeck_core::seq::{canonical_violation, greedy_u64, greedy_zeckendorf, TernSeq, Valued, WorkSeq, ZeckSeq};
use zeck_core::signed::{add_signed, preliminary_pass, subtract, Sign, SignedZeck};
use zeck_core::tree::ceil_log2;
use zeck_core::{PassId, PassTrace, ZeckError};

type Verdict = Result<String, String>;
type Criterion<'a> = Box<dyn FnOnce() -> Verdict + 'a>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn contains_1011(d: &[u8]) -> bool {
    d.windows(4).any(|w| w == [1, 0, 1, 1])
}

fn random_biguint(rng: &mut StdRng, bits: u64) -> BigUint {
    let mut bytes = vec![0u8; bits.div_ceil(8) as usize];
    rng.fill(&mut bytes[..]);
    BigUint::from_bytes_le(&bytes) >> (bytes.len() as u64 * 8 - bits)
}

/// Log-uniform length in `[lo, hi]`, so short and long inputs both appear.
fn log_len(rng: &mut StdRng, lo: usize, hi: usize) -> usize {
    let x = rng.gen_range((lo as f64).ln()..=(hi as f64).ln());
    (x.exp().round() as usize).clamp(lo, hi)
}

// 1 and 3 share the exhaustive sweep; the per-pass 1011 check runs inside it.
fn exhaustive_unsigned(violations_1011: &AtomicUsize) -> Verdict {
    const N: usize = 1500;
    let reps: Vec<ZeckSeq> = (0..=2 * N as u64).map(greedy_u64).collect();
    let failures: usize = (0..=N)
        .into_par_iter()
        .map(|x| {
            let mut bad = 0;
            for y in 0..=N {
                let s = digitwise_sum(&reps[x], &reps[y]).expect("canonical operands");
                let out = stage1_eliminate(s)
                    .and_then(|s1| {
                        let rl = stage2_right_to_left(s1)?;
                        if contains_1011(rl.digits()) {
                            violations_1011.fetch_add(1, Ordering::Relaxed);
                        }
                        stage2_left_to_right(rl)
                    })
                    .ok();
                let via_add = adder::add(&reps[x], &reps[y]).ok();
                if out.as_ref() != Some(&reps[x + y]) || via_add.as_ref() != Some(&reps[x + y]) {
                    bad += 1;
                }
            }
            bad
        })
        .sum();
    check(failures == 0, || format!("{failures} of {} sums disagree with greedy", (N + 1) * (N + 1)))?;
    Ok(format!("{} pairs bit-exact", (N + 1) * (N + 1)))
}

fn value_conservation() -> Verdict {
    const PER_PASS: usize = 10_000;
    const MAX_LEN: usize = 10_000;
    let mut lines = Vec::new();
    for (p, pass) in PassId::ALL.into_iter().enumerate() {
        let failures: usize = (0..PER_PASS)
            .into_par_iter()
            .map(|i| {
                let mut rng = StdRng::seed_from_u64(0xC0FFEE + (p * PER_PASS + i) as u64);
                let len = if i % 100 == 0 { MAX_LEN } else { log_len(&mut rng, 4, MAX_LEN) };
                let input = sample::pass_input(&mut rng, pass, len);
                let ok = match pass {
                    PassId::SignedPrelim => {
                        let t = TernSeq::new(input).expect("signed digits");
                        preliminary_pass(&t).is_ok_and(|w| w.value() == t.value())
                    }
                    _ => {
                        let w = WorkSeq::new(input.iter().map(|&d| d as u8).collect()).expect("working digits");
                        let before = w.value();
                        match pass {
                            PassId::Stage1 => stage1_eliminate(w)
                                .is_ok_and(|o| o.value() == before && o.digits().iter().all(|&d| d <= 1)),
                            PassId::Stage2Rl => stage2_right_to_left(w).is_ok_and(|o| o.value() == before),
                            _ => stage2_left_to_right(w).is_ok_and(|o| o.value() == before),
                        }
                    }
                };
                usize::from(!ok)
            })
            .sum();
        check(failures == 0, || format!("{pass}: {failures} of {PER_PASS} inputs not conserved"))?;
        lines.push(format!("{pass} ok"));
    }
    Ok(format!("{PER_PASS} inputs per pass, lengths up to {MAX_LEN}: {}", lines.join(", ")))
}

fn no_1011(from_sweep: &AtomicUsize) -> Verdict {
    const TRIALS: usize = 100_000;
    let random: usize = (0..TRIALS)
        .into_par_iter()
        .map(|i| {
            let mut rng = StdRng::seed_from_u64(0x1011 + i as u64);
            let len = rng.gen_range(3..=256);
            let mut bits: Vec<u8> = (0..len).map(|_| rng.gen_range(0..=1)).collect();
            bits[0] = 0;
            match stage2_right_to_left(WorkSeq::new(bits).expect("bits")) {
                Ok(out) => usize::from(contains_1011(out.digits())),
                Err(_) => 1,
            }
        })
        .sum();
    let sweep = from_sweep.load(Ordering::Relaxed);
    check(random == 0 && sweep == 0, || format!("{random} random and {sweep} sweep violations"))?;
    Ok(format!("0 violations on {TRIALS} random inputs and the exhaustive sweep"))
}

fn linearity() -> Verdict {
    let mut rng = StdRng::seed_from_u64(4);
    for n in [100usize, 1_000, 10_000, 100_000] {
        for _ in 0..4 {
            let a = sample::canonical(&mut rng, n - adder::PAD);
            let blen = rng.gen_range(1..=n - adder::PAD);
            let b = sample::canonical(&mut rng, blen);
            let (sum, traces) = adder::add_traced(&a, &b, false).map_err(|e| e.to_string())?;
            check(sum.value() == a.value() + b.value(), || format!("n={n}: wrong sum"))?;
            let mut total = 0;
            for t in &traces {
                check(t.len == n, || format!("n={n}: {} ran over {} digits", t.pass, t.len))?;
                let want = n - t.pass.width() + 1;
                check(t.steps == want, || format!("n={n}: {} made {} placements, want {want}", t.pass, t.steps))?;
                check(t.steps == PassTrace::expected_steps(t.pass, n), || "expected_steps disagrees".into())?;
                check(t.firings <= t.steps, || format!("{} fired more than it stepped", t.pass))?;
                total += t.steps;
            }
            check(total <= 3 * n, || format!("n={n}: {total} placements exceed 3n"))?;
        }
    }
    Ok("placements = n - w + 1 per pass, total <= 3n for n in {1e2, 1e3, 1e4, 1e5}".into())
}

fn exhaustive_signed() -> Verdict {
    const N: i64 = 1000;
    let reps: Vec<SignedZeck> = (0..=2 * N).map(|v| SignedZeck::from_bigint(&BigInt::from(v))).collect();
    let oracle = |v: i64| if v >= 0 { reps[v as usize].clone() } else { -reps[(-v) as usize].clone() };
    let uncovered = AtomicUsize::new(0);
    let wrong: usize = (0..=N)
        .into_par_iter()
        .map(|x| {
            let mut bad = 0;
            for y in 0..=N {
                for (sx, sy) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                    let (a, b) = (sx * x, sy * y);
                    let (za, zb) = (oracle(a), oracle(b));
                    for (got, want) in [(add_signed(&za, &zb), a + b), (subtract(&za, &zb), a - b)] {
                        match got {
                            Ok(r) => {
                                let zero_ok = !r.is_zero() || r.sign() == Sign::NonNeg;
                                if r != oracle(want) || !zero_ok {
                                    bad += 1;
                                }
                            }
                            Err(ZeckError::Invariant(_)) => {
                                uncovered.fetch_add(1, Ordering::Relaxed);
                                bad += 1;
                            }
                            Err(_) => bad += 1,
                        }
                    }
                }
            }
            bad
        })
        .sum();
    let uncovered = uncovered.load(Ordering::Relaxed);
    check(wrong == 0, || format!("{wrong} signed results wrong, {uncovered} uncovered windows"))?;
    Ok(format!("{} signed sums and differences exact, 0 uncovered windows", 8 * (N + 1) * (N + 1)))
}

fn conversions() -> Verdict {
    let one = |v: &BigUint| -> Result<(), String> {
        let bits = BitSeq::from_biguint(v);
        let (z, up) = binary_to_zeck_shaped(&bits).map_err(|e| e.to_string())?;
        check(z == greedy_zeckendorf(v), || format!("binary_to_zeck({v}) differs from greedy"))?;
        check(binary_to_zeck(&bits).as_ref() == Ok(&z), || format!("zero-skipping conversion of {v} differs"))?;
        check(up.height == ceil_log2(bits.len()), || format!("tree height {} for {} bits", up.height, bits.len()))?;
        let (back, down) = zeck_to_binary_shaped(&z).map_err(|e| e.to_string())?;
        check(back == bits, || format!("round trip of {v} failed"))?;
        check(down.height == ceil_log2(z.len()), || format!("tree height {} for {} digits", down.height, z.len()))?;
        Ok(())
    };
    (0..=100_000u64).into_par_iter().try_for_each(|v| one(&BigUint::from(v)))?;
    let mut rng = StdRng::seed_from_u64(1024);
    for _ in 0..100 {
        let mut v = random_biguint(&mut rng, 1024);
        v.set_bit(1023, true);
        one(&v)?;
    }
    Ok("[0, 1e5] and 100 random 1024-bit values round-trip, equal greedy, height = ceil(log2 n)".into())
}

fn multiplication() -> Verdict {
    const N: u64 = 300;
    let reps: Vec<ZeckSeq> = (0..=N).map(greedy_u64).collect();
    (0..=N as usize).into_par_iter().try_for_each(|x| -> Result<(), String> {
        for y in 0..=N as usize {
            let want = greedy_u64((x * y) as u64);
            let f = mul_fenwick(&reps[x], &reps[y]).map_err(|e| e.to_string())?;
            let b = mul_binary(&reps[x], &reps[y]).map_err(|e| e.to_string())?;
            check(f == want && b == want, || format!("{x} * {y}"))?;
        }
        Ok(())
    })?;
    let mut rng = StdRng::seed_from_u64(128);
    for _ in 0..100 {
        let a = sample::canonical(&mut rng, 128);
        let b = sample::canonical(&mut rng, 128);
        let want = greedy_zeckendorf(&(a.to_biguint() * b.to_biguint()));
        let f = mul_fenwick(&a, &b).map_err(|e| e.to_string())?;
        let m = mul_binary(&a, &b).map_err(|e| e.to_string())?;
        check(f == want && m == want, || format!("128-digit product mismatch for {a} * {b}"))?;
    }
    Ok("fenwick = binary = greedy on [0,300]^2 and 100 random 128-digit pairs".into())
}

fn division_and_sqrt() -> Verdict {
    let canonical = |z: &ZeckSeq| canonical_violation(z.digits()).is_none();
    (0..=2000u64).into_par_iter().try_for_each(|x| -> Result<(), String> {
        let zx = greedy_u64(x);
        for d in 1..=200u64 {
            let (q, r) = divrem(&zx, &greedy_u64(d)).map_err(|e| e.to_string())?;
            let (qv, rv) = (q.to_biguint(), r.to_biguint());
            check(&qv * d + &rv == BigUint::from(x) && rv < BigUint::from(d), || format!("{x} / {d}"))?;
            check(canonical(&q) && canonical(&r), || format!("{x} / {d}: non-canonical output"))?;
            let (oq, or) = BigUint::from(x).div_rem(&BigUint::from(d));
            check(qv == oq && rv == or, || format!("{x} / {d} differs from the big-integer oracle"))?;
        }
        Ok(())
    })?;
    check(divrem(&greedy_u64(5), &ZeckSeq::zero()) == Err(ZeckError::DivisionByZero), || {
        "division by zero not reported".into()
    })?;
    (0..=100_000u64).into_par_iter().try_for_each(|x| -> Result<(), String> {
        let (s, r) = sqrt_rem(&greedy_u64(x)).map_err(|e| e.to_string())?;
        let (sv, rv) = (s.to_biguint(), r.to_biguint());
        let xv = BigUint::from(x);
        check(&sv * &sv <= xv && (&sv + 1u32) * (&sv + 1u32) > xv, || format!("floor sqrt of {x}"))?;
        check(&sv * &sv + &rv == xv, || format!("sqrt remainder of {x}"))?;
        check(canonical(&s) && canonical(&r), || format!("sqrt of {x}: non-canonical output"))?;
        Ok(())
    })?;
    Ok("x = qd + r, 0 <= r < d on [0,2000] x [1,200]; s = floor(sqrt x), r = x - s^2 on [0,1e5]".into())
}

fn transducers() -> Verdict {
    const PER_PASS: usize = 10_000;
    let mut summary = Vec::new();
    for (p, pass) in PassId::ALL.into_iter().enumerate() {
        let t = compiled(pass);
        (0..PER_PASS).into_par_iter().try_for_each(|i| -> Result<(), String> {
            let mut rng = StdRng::seed_from_u64(0x7A + (p * PER_PASS + i) as u64);
            let len = log_len(&mut rng, 4, 512);
            let input = sample::pass_input(&mut rng, pass, len);
            let n = input.len();
            let direct = direct_pass(pass, &input).map_err(|e| format!("{pass} direct: {e}"))?;
            let scan = run_scan(t, &input).map_err(|e| format!("{pass} scan: {e}"))?;
            check(scan.output == direct, || format!("{pass}: scan differs from the direct pass on {input:?}"))?;
            check(scan.cost.transitions == n, || format!("{pass}: {} transitions for n={n}", scan.cost.transitions))?;
            for chunk in [1, 2, 3, 8, 64, n] {
                let pre = run_parallel_prefix(t, &input, chunk).map_err(|e| format!("{pass} prefix: {e}"))?;
                check(pre.output == scan.output, || format!("{pass}: prefix (chunk {chunk}) differs from scan"))?;
                check(pre.cost.tree_height == Some(ceil_log2(n)), || {
                    format!("{pass}: height {:?} for n={n}", pre.cost.tree_height)
                })?;
                check(pre.cost.compositions <= 2 * n, || format!("{pass}: {} compositions", pre.cost.compositions))?;
                check(pre.cost.firings == scan.cost.firings, || format!("{pass}: firing counts differ"))?;
            }
            Ok(())
        })?;
        summary.push(format!("{pass} ({} states)", t.state_count()));
    }
    Ok(format!("scan = direct and prefix = scan for chunks {{1,2,3,8,64,n}}: {}", summary.join(", ")))
}

fn codec() -> Verdict {
    const TRIALS: usize = 10_000;
    (0..TRIALS).into_par_iter().try_for_each(|i| -> Result<(), String> {
        let mut rng = StdRng::seed_from_u64(0xC0DE + i as u64);
        let count = rng.gen_range(0..24);
        let values: Vec<BigUint> = (0..count)
            .map(|_| {
                let bits = rng.gen_range(1..=160);
                random_biguint(&mut rng, bits) + 1u32
            })
            .collect();
        let stream = encode_stream(&values).map_err(|e| e.to_string())?;
        let back = CodeStream::from_bytes(&stream.to_bytes()).map_err(|e| e.to_string())?;
        check(decode_stream(&back).map_err(|e| e.to_string())? == values, || format!("round trip {i}"))?;
        for v in &values {
            let w = codeword(v).map_err(|e| e.to_string())?;
            let first = w.windows(2).position(|p| p == [1, 1]);
            check(first == Some(w.len() - 2), || format!("codeword of {v} has an inner 11"))?;
        }
        Ok(())
    })?;
    let golden = golden_values();
    let bytes = encode_stream(&golden).map_err(|e| e.to_string())?.to_bytes();
    let again = encode_stream(&golden).map_err(|e| e.to_string())?.to_bytes();
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/codec_sample.fibc");
    let stored = std::fs::read(path).map_err(|e| format!("{path}: {e}"))?;
    check(bytes == again && bytes == stored, || "encoded bytes differ from the golden file".into())?;
    let decoded = decode_stream(&CodeStream::from_bytes(&stored).map_err(|e| e.to_string())?);
    check(decoded.as_ref() == Ok(&golden), || "golden file does not decode to its values".into())?;
    Ok(format!("{TRIALS} random streams round-trip, only terminal 11s, golden bytes stable"))
}

/// Values stored in `tests/golden/codec_sample.fibc` (one per line in
/// `codec_sample.txt`).
fn golden_values() -> Vec<BigUint> {
    let text = include_str!("golden/codec_sample.txt");
    text.lines().filter(|l| !l.is_empty()).map(|l| l.parse().expect("decimal")).collect()
}

fn run(name: &str, f: impl FnOnce() -> Verdict) -> bool {
    let start = Instant::now();
    let verdict = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    let secs = start.elapsed().as_secs_f64();
    match verdict {
        Ok(detail) => {
            println!("PASS  {name:<34} {detail} ({secs:.1}s)");
            true
        }
        Err(detail) => {
            println!("FAIL  {name:<34} {detail} ({secs:.1}s)");
            false
        }
    }
}

fn main() -> ExitCode {
    let filter: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let violations_1011 = AtomicUsize::new(0);
    let criteria: Vec<(&str, Criterion)> = vec![
        ("1 exhaustive unsigned addition", Box::new(|| exhaustive_unsigned(&violations_1011))),
        ("2 per-pass value conservation", Box::new(value_conservation)),
        ("3 no-1011 after right-to-left", Box::new(|| no_1011(&violations_1011))),
        ("4 three-pass linearity", Box::new(linearity)),
        ("5 exhaustive signed arithmetic", Box::new(exhaustive_signed)),
        ("6 conversion round trips", Box::new(conversions)),
        ("7 multiplication cross-check", Box::new(multiplication)),
        ("8 division and square root", Box::new(division_and_sqrt)),
        ("9 transducer equivalence", Box::new(transducers)),
        ("10 codec", Box::new(codec)),
    ];
    let mut failed = 0;
    let mut ran = 0;
    let needs_sweep = filter.as_deref().is_some_and(|f| "3 no-1011 after right-to-left".contains(f));
    for (name, f) in criteria {
        let selected = filter.as_deref().is_none_or(|f| name.contains(f));
        // criterion 3 reuses the sweep of criterion 1
        if !selected && !(needs_sweep && name.starts_with("1 ")) {
            continue;
        }
        ran += 1;
        if !run(name, f) {
            failed += 1;
        }
    }
    println!("acceptance: {} of {ran} criteria passed", ran - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
