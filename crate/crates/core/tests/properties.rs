use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::collection::vec;
use proptest::prelude::*;

use transdeg::diagonal::{diagonal_word, find_incomparable, verify_diagonal, Incomparable, PairOutcome};
use transdeg::exactla::{binomial, int, pow, rat, RatMatrix};
use transdeg::fst::BlockRun;
use transdeg::polyatoms::{
    atom_certificate, compare_power_means, default_schedule, m_mat, power_mean, u_vec, v_vec, verify_certificate,
};
use transdeg::synthesis::{epsilon_reduce, realize_rational, run_stages, synth_ratio_fst, synth_weight_fst};
use transdeg::weights::compose_tuples;
use transdeg::words::{naturalise, split_blocks};
use transdeg::{Error, Fst, IntegerSequence, Rational, RationalPoly, Stream, Weight, WeightTuple, Word};

fn small_rat() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn nonneg_rat() -> impl Strategy<Value = Rational> {
    (0i64..=6, 1i64..=3).prop_map(|(n, d)| rat(n, d))
}

fn poly(max_order: usize) -> impl Strategy<Value = RationalPoly> {
    vec(small_rat(), 1..=max_order + 1).prop_map(RationalPoly::new)
}

/// Natural coefficients and constant term at least `min_constant`.
fn natural_poly(max_order: usize, min_constant: i64) -> impl Strategy<Value = RationalPoly> {
    (min_constant..=min_constant + 3, vec(0i64..=3, 0..=max_order)).prop_map(|(c, rest)| {
        let mut coeffs = vec![c];
        coeffs.extend(rest);
        RationalPoly::from_ints(&coeffs)
    })
}

/// Nonnegative rational coefficients and positive order at most `max_order`.
fn qk_poly(max_order: usize) -> impl Strategy<Value = RationalPoly> {
    (vec(nonneg_rat(), 1..=max_order), (1i64..=6, 1i64..=3)).prop_map(|(mut coeffs, (n, d))| {
        coeffs.push(rat(n, d));
        RationalPoly::new(coeffs)
    })
}

fn weight(max_window: usize) -> impl Strategy<Value = Weight> {
    (vec(nonneg_rat(), 0..=max_window), small_rat()).prop_map(|(a, b)| Weight::new(a, b).unwrap())
}

fn tuple_of(w: impl Strategy<Value = Weight>, max_len: usize) -> impl Strategy<Value = WeightTuple> {
    vec(w, 1..=max_len)
        .prop_filter_map("consumes no input", |ws| WeightTuple::new(ws).ok().filter(|t| t.sum_length() > 0))
}

fn tuple(max_len: usize, max_window: usize) -> impl Strategy<Value = WeightTuple> {
    tuple_of(weight(max_window), max_len)
}

/// Integer weights whose negative constants are covered by the window.
fn synth_weight(max_window: usize) -> impl Strategy<Value = Weight> {
    (vec(0i64..=3, 0..=max_window), -3i64..=3).prop_filter_map("negative constant on an empty window", |(a, b)| {
        if b < 0 && a.iter().sum::<i64>() == 0 {
            return None;
        }
        Some(Weight::new(a.into_iter().map(int).collect(), int(b)).unwrap())
    })
}

fn word(max_len: usize) -> impl Strategy<Value = Word> {
    vec(0u8..=1, 0..=max_len).prop_map(|v| Word::new(v).unwrap())
}

fn fst(max_states: usize, max_out: usize) -> impl Strategy<Value = Fst> {
    (1..=max_states).prop_flat_map(move |n| {
        (vec((0..n, 0..n), n), vec((word(max_out), word(max_out)), n)).prop_map(|(delta, lambda)| {
            let delta = delta.into_iter().map(|(a, b)| [a, b]).collect();
            let lambda = lambda.into_iter().map(|(a, b)| [a, b]).collect();
            Fst::new(0, delta, lambda).unwrap()
        })
    })
}

fn morphic(i: usize) -> Stream {
    [Stream::thue_morse, Stream::period_doubling, Stream::mephisto_waltz][i % 3]()
}

fn stream() -> impl Strategy<Value = Stream> {
    prop_oneof![
        (0usize..3).prop_map(morphic),
        (word(4), vec(0u8..=1, 1..=4))
            .prop_map(|(u, v)| Stream::ultimately_periodic(u, Word::new(v).unwrap()).unwrap()),
        natural_poly(2, 0).prop_map(|p| Stream::block(IntegerSequence::poly(p))),
    ]
}

fn matrix(n: usize) -> impl Strategy<Value = RatMatrix> {
    vec(small_rat(), n * n).prop_map(move |data| RatMatrix::new(n, n, data).unwrap())
}

fn expand(blocks: &[u128]) -> Vec<u8> {
    blocks.iter().flat_map(|&b| Word::block(b as usize).into_vec()).collect()
}

/// The complete output blocks of `a` on the block word of `blocks`.
fn letter_blocks(a: &Fst, blocks: &[u128]) -> Vec<u128> {
    let (out, _) = a.transduce_finite(&expand(blocks)).unwrap();
    split_blocks(&out).complete.into_iter().map(|b| b as u128).collect()
}

fn naturals(values: &[Rational]) -> Vec<u128> {
    values.iter().map(|v| v.to_integer().to_u128().expect("natural value")).collect()
}

fn poly_values(p: &RationalPoly, count: usize) -> Vec<Rational> {
    (0..count as u64).map(|n| p.eval_at(n)).collect()
}

/// Values of `t ⊙ g` where `g` is given by enough values to produce `count` outputs.
fn inner_count(t: &WeightTuple, count: usize) -> usize {
    (count / t.len() + 2) * t.sum_length()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn inverse_times_matrix_is_identity(m in matrix(3)) {
        match m.inverse() {
            Ok(inv) => {
                prop_assert_eq!(inv.mul(&m).unwrap(), RatMatrix::identity(3));
                prop_assert_eq!(m.mul(&inv).unwrap(), RatMatrix::identity(3));
            }
            Err(Error::SingularMatrix) => prop_assert!(m.rank() < 3),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn solutions_satisfy_the_system(m in matrix(3), b in vec(small_rat(), 3)) {
        if let Ok(x) = m.solve(&b) {
            prop_assert_eq!(m.mul_vec(&x).unwrap(), b);
        }
    }

    #[test]
    fn affine_substitution_matches_evaluation(p in poly(5), a in 0u64..=5, b in 0u64..=5) {
        let q = p.affine_subst(a, b);
        for n in 0..=20 {
            prop_assert_eq!(q.eval_at(n), p.eval_at(a * n + b));
        }
    }

    #[test]
    fn prefixes_are_monotone(s in stream(), n in 0usize..150, extra in 0usize..150) {
        let short = s.prefix(n).unwrap().word;
        let long = s.prefix(n + extra).unwrap().word;
        prop_assert!(short.is_prefix_of(&long));
    }

    #[test]
    fn block_words_have_the_right_runs(p in natural_poly(2, 0), k in 1usize..10) {
        let values: Vec<usize> = (0..k as u64).map(|n| p.eval_at(n).to_integer().to_usize().unwrap()).collect();
        let len: usize = values.iter().map(|v| v + 1).sum();
        let s = Stream::block(IntegerSequence::poly(p));
        let prefix = s.prefix(len).unwrap().word;
        prop_assert_eq!(prefix.iter().filter(|&&a| a == 1).count(), k);
        let closed = s.prefix(len + 1).unwrap().word;
        prop_assert_eq!(split_blocks(&closed).complete, values);
    }

    #[test]
    fn naturalise_is_the_least_divisor(p in poly(3)) {
        let d = naturalise(&p);
        let values = poly_values(&p, 61);
        let works = |e: &BigInt| values.iter().all(|v| e.is_multiple_of(v.denom()));
        prop_assert!(works(&d));
        for e in 1..=60u32 {
            let e = BigInt::from(e);
            if works(&e) {
                prop_assert!(e.is_multiple_of(&d), "{} works but {} does not divide it", e, d);
            }
        }
    }

    #[test]
    fn transduction_is_a_homomorphism(a in fst(3, 3), u in word(12), v in word(12)) {
        let (out_u, q) = a.transduce_finite(&u).unwrap();
        let (out_v, _) = a.transduce_from(q, &v).unwrap();
        let mut uv = u.clone();
        uv.extend_from(&v);
        let mut joined = out_u;
        joined.extend_from(&out_v);
        prop_assert_eq!(a.transduce_finite(&uv).unwrap().0, joined);
    }

    #[test]
    fn composition_is_sequential_application(a in fst(3, 2), b in fst(3, 2), w in word(30)) {
        let direct = a.compose(&b).transduce_finite(&w).unwrap().0;
        let staged = b.transduce_finite(&a.transduce_finite(&w).unwrap().0).unwrap().0;
        prop_assert_eq!(direct, staged);
    }

    #[test]
    fn transducts_of_periodic_words_are_periodic(a in fst(3, 2), u in word(4), v in vec(0u8..=1, 1..=4)) {
        let states = a.states();
        let max_out = a.max_output().max(1);
        let len = 4 * states * (u.len() + v.len()) * max_out;
        let period_bound = states * v.len() * max_out;
        // each run of `states` copies of v passes through a cycle, which writes ≥ 1 letter unless the output is finite
        let copies = states * (len + 2);
        let mut input = u.clone().into_vec();
        for _ in 0..copies {
            input.extend(&v);
        }
        let out = a.transduce_finite(&input).unwrap().0;
        if out.len() >= len {
            let out = &out[..len];
            let periodic = (1..=period_bound).any(|p| (len / 2..len - p).all(|i| out[i] == out[i + p]));
            prop_assert!(periodic, "no period ≤ {} in {}", period_bound, Word::new(out.to_vec()).unwrap());
        }
    }

    #[test]
    fn scalar_law(c in nonneg_rat(), t in tuple(3, 4), f in poly(3)) {
        let base = t.product_of_poly(&f, 50).unwrap();
        let scaled: Vec<Rational> = base.iter().map(|v| v * &c).collect();
        prop_assert_eq!(&t.scale(&c).unwrap().product_of_poly(&f, 50).unwrap(), &scaled);
        prop_assert_eq!(&t.last_scale(&c).product_of_poly(&f.scale(&c), 50).unwrap(), &scaled);
    }

    #[test]
    fn composition_law(outer in tuple(3, 4), inner in tuple(3, 4), f in poly(3)) {
        let inner_values = inner.product_of_poly(&f, inner_count(&outer, 50)).unwrap();
        let nested = outer.product_of_values(&inner_values, 50).unwrap();
        let composed = compose_tuples(&outer, &inner).unwrap();
        prop_assert_eq!(composed.product_of_poly(&f, 50).unwrap(), nested);
    }

    #[test]
    fn unfolding_law(t in tuple(3, 4), n in 1usize..=4, f in poly(3)) {
        prop_assert_eq!(t.unfold(n).unwrap().product_of_poly(&f, 50).unwrap(), t.product_of_poly(&f, 50).unwrap());
    }

    #[test]
    fn strongly_non_constant_weights_stay_so(
        outer in tuple(3, 3),
        inner in tuple_of(weight(4).prop_filter("strongly non-constant", Weight::is_strongly_non_constant), 3),
    ) {
        let composed = compose_tuples(&outer, &inner).unwrap();
        for w in composed.weights() {
            prop_assert!(w.is_constant() || w.is_strongly_non_constant(), "{} in {}", w, composed);
        }
    }

    #[test]
    fn synthesized_weights_match_the_product(t in tuple_of(synth_weight(3), 3), f in natural_poly(2, 3)) {
        let a = synth_weight_fst(&t).unwrap();
        let input = naturals(&poly_values(&f, inner_count(&t, 10)));
        let want = naturals(&t.product_of_poly(&f, 10).unwrap());
        let got = a.run_blocks(&BlockRun::from_blocks(input), 10).unwrap();
        prop_assert_eq!(&got.complete[..10], &want[..]);
    }

    #[test]
    fn ratio_machines_rescale(e in 1u64..=6, d in 1u64..=6, f in natural_poly(2, 0)) {
        let values = naturals(&poly_values(&f, 11));
        let input: Vec<u128> = values.iter().map(|v| v * d as u128).collect();
        let want: Vec<u128> = values.iter().take(10).map(|v| v * e as u128).collect();
        let got = letter_blocks(&synth_ratio_fst(e, d).unwrap(), &input);
        prop_assert_eq!(&got[..10], &want[..]);
    }

    #[test]
    fn realized_chains_match_the_product(
        t in tuple_of((vec(nonneg_rat(), 0..=3), nonneg_rat()).prop_map(|(a, b)| Weight::new(a, b).unwrap()), 2),
        f in qk_poly(2),
    ) {
        let real = realize_rational(&t, &f).unwrap();
        let input = naturals(&poly_values(&f.scale(&Rational::from_integer(naturalise(&f))), inner_count(&t, 8)));
        let scale = Rational::from_integer(real.scale.clone());
        let want: Vec<Rational> = t.product_of_poly(&f, 8).unwrap().iter().map(|v| v * &scale).collect();
        let got = real.single.run_blocks(&BlockRun::from_blocks(input.clone()), 8).unwrap();
        prop_assert_eq!(&got.complete[..8], &naturals(&want)[..]);
        prop_assert_eq!(run_stages(&real.stages, input, 8).unwrap(), naturals(&want));
    }

    #[test]
    fn epsilon_reduction_bounds_lower_coefficients(q in qk_poly(4), j in 1u32..=6) {
        let eps = rat(1, 1 << j);
        let red = epsilon_reduce(&q, &eps).unwrap();
        let k = q.order();
        prop_assert_eq!(red.reduced.order(), k);
        prop_assert!(red.reduced.leading().is_one());
        prop_assert!(red.reduced.coeff(0).is_zero());
        for i in 1..k {
            let b = red.reduced.coeff(i);
            prop_assert!(!b.is_negative() && b < eps, "coefficient {} of {}", i, red.reduced);
        }
        // d is least: one step back some coefficient reaches ε
        if red.d > 1 {
            let d = red.d - 1;
            let norm = (q.leading() * pow(&int(d as i64), k as i64)).recip();
            let prev = q.affine_subst(d, 0).scale(&norm);
            prop_assert!((1..k).any(|i| prev.coeff(i) >= eps));
        }
        let start = q.scale(&Rational::from_integer(naturalise(&q)));
        let end = red.stages.iter().try_fold(start, |p, s| s.apply_poly(&p)).unwrap();
        prop_assert_eq!(end, red.reduced.scale(&Rational::from_integer(naturalise(&red.reduced))));
    }

    #[test]
    fn matrix_identity(p in poly(4).prop_filter("positive order", |p| p.order() > 0), seed in vec(nonneg_rat(), 4), b in small_rat()) {
        let k = p.order();
        let alpha = Weight::new(seed[..k].to_vec(), b).unwrap();
        // coefficient j of Σ a_i p(kn + i), expanded by the binomial theorem
        let coeff = |j: usize| -> Rational {
            let mut acc = Rational::zero();
            for (i, a) in alpha.coeffs().iter().enumerate() {
                for m in j..=k {
                    let term = p.coeff(m) * Rational::from_integer(binomial(m as u64, j as u64))
                        * pow(&int(k as i64), j as i64) * pow(&int(i as i64), (m - j) as i64);
                    acc += a * term;
                }
            }
            acc
        };
        let v: Vec<Rational> = (1..=k).map(coeff).collect();
        prop_assert_eq!(m_mat(&p).unwrap().mul_vec(&u_vec(&alpha)).unwrap(), v.clone());
        let image = alpha.apply_poly(&p, k as u64, 0);
        prop_assert_eq!((1..=k).map(|j| image.coeff(j)).collect::<Vec<_>>(), v);
        prop_assert_eq!(v_vec(&p).unwrap().len(), k);
    }

    #[test]
    fn power_means_increase_with_the_order(
        c in vec(1i64..=10, 2..=5),
        x in vec((1i64..=40, 1i64..=4), 5),
        all_equal in proptest::bool::weighted(0.1),
        (p, q) in (-2i64..=3, -2i64..=3).prop_filter("p < q", |(p, q)| p < q),
    ) {
        let total: i64 = c.iter().sum();
        let w: Vec<Rational> = c.iter().map(|&ci| rat(ci, total)).collect();
        let x: Vec<Rational> = x[..c.len()].iter().map(|&(n, d)| if all_equal { rat(x[0].0, x[0].1) } else { rat(n, d) }).collect();
        let equal = x.iter().all(|xi| xi == &x[0]);
        let order = compare_power_means(&w, p, q, &x).unwrap();
        prop_assert_eq!(order, if equal { std::cmp::Ordering::Equal } else { std::cmp::Ordering::Less });
        let mp = power_mean(&w, &int(p), &x).unwrap();
        let mq = power_mean(&w, &int(q), &x).unwrap();
        prop_assert!(mp <= mq * (1.0 + 1e-12), "M_{} = {} > M_{} = {}", p, mp, q, mq);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn certificates_satisfy_the_atom_identity(q in qk_poly(3)) {
        let k = q.order();
        let cert = atom_certificate(&q, &vec![int(1); k], &default_schedule()).unwrap();
        prop_assert!(cert.gamma.coeffs().iter().all(Signed::is_positive));
        let image = cert.gamma.apply_poly(&cert.reduced, k as u64, 0);
        prop_assert_eq!(image, &cert.target + &RationalPoly::constant(cert.slack.clone()));
        let report = verify_certificate(&cert, 4);
        prop_assert!(report.passed(), "{:?}", report);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn incomparable_outputs_differ_at_j(a in fst(3, 2), v in word(6)) {
        if let Incomparable::Found { x, y, j } = find_incomparable(&a, &v, 6).unwrap() {
            let run = |e: &Word| {
                let mut input = v.clone();
                input.extend_from(e);
                a.transduce_finite(&input).unwrap().0
            };
            let (ox, oy) = (run(&x), run(&y));
            prop_assert!(ox.len() > j && oy.len() > j);
            prop_assert_eq!(&ox[..j], &oy[..j]);
            prop_assert_ne!(ox[j], oy[j]);
        }
    }

    #[test]
    fn dodging_is_monotone(a in fst(3, 2), i in 0usize..3, v in word(10), e in word(10)) {
        let s = morphic(i);
        let dodges = |w: &[u8]| {
            let out = a.transduce_finite(w).unwrap().0;
            s.prefix(out.len()).unwrap().word != out
        };
        if dodges(&v) {
            let mut longer = v.clone();
            longer.extend_from(&e);
            prop_assert!(dodges(&longer));
        }
    }

    #[test]
    fn diagonal_words_dodge(machines in vec(fst(2, 2), 1..=5), seed in 0usize..3) {
        let adversary: Vec<(Fst, Stream)> =
            machines.into_iter().enumerate().map(|(i, a)| (a, morphic(i + seed))).collect();
        let (w, report) = diagonal_word(&adversary, 8).unwrap();
        prop_assert!(verify_diagonal(&adversary, &w, &report).unwrap().iter().all(|&ok| ok));
        for ((a, s), outcome) in adversary.iter().zip(&report.outcomes) {
            if let PairOutcome::Dodged { .. } = outcome {
                let out = a.transduce_finite(&w).unwrap().0;
                let target = s.prefix(out.len()).unwrap().word;
                prop_assert!(out.len() > target.len() || out != target);
            }
        }
    }
}
