//! Acceptance suite: one PASS/FAIL line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qd_core::algebra::{
    h_transform, is_irreducible, r1_preimage, r_transform, reciprocal, FactorHint, Field, Poly,
};
use qd_core::blocks::{annihilated_by, block_l, factor_diag_inverse, factor_l, transport_check, FactorMode, TransportLemma};
use qd_core::decompose::{
    construct, decide, decide_product_two_involutions, decide_product_two_unipotent2, upper_triangular_pm1_involutions,
    DecompKind,
};
use qd_core::gen;
use qd_core::infinite::{
    appendix_core_trend, appendix_index, appendix_operator, appendix_spanning_count, graph_window_report,
    jordan_graph_involution_pair, jordan_graph_squarezero_pair, jordan_graph_unipotent_pair, range_power_dim,
    sparse_pattern_jordan_check, Cell, JordanGraph, PatternVerdict,
};
use qd_core::kaplansky::{check_sumdim, check_supersumdim, kaplansky_invariants, realize_invariants};
use qd_core::linalg::{elementary_divisors, primary_decomposition};
use qd_core::oracle::{cross_check_kinds, oracle_set, Budget};
use qd_core::Mat;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn oracle_kind(kind: DecompKind, runs: &[(Field, usize)]) -> Outcome {
    let mut notes = Vec::new();
    for &(f, n) in runs {
        let r = cross_check_kinds(f, n, &[kind], Budget::default()).map_err(e2s)?;
        let c = &r.class_counts[0];
        ensure(r.agrees(), || format!("{f} n={n}: {} mismatches, first {:?}", r.mismatches.len(), r.mismatches[0]))?;
        ensure(c.screen_passes, || format!("{f} n={n}: sanity screen failed"))?;
        notes.push(format!("{f} n={n}: {}/{} in class", c.decided_true, c.candidates));
    }
    Ok(notes.join("; "))
}

fn c1() -> Outcome {
    let t = Instant::now();
    let s = oracle_kind(DecompKind::SquareZeroSum, &[(Field::Prime(2), 2), (Field::Prime(2), 3), (Field::Prime(3), 2)])?;
    ensure(t.elapsed() < Duration::from_secs(60), || format!("took {:?}", t.elapsed()))?;
    Ok(s)
}

fn c2() -> Outcome {
    let s = oracle_kind(DecompKind::InvolutionProduct, &[(Field::Prime(2), 2), (Field::Prime(3), 2)])?;
    let gl = |f: Field| {
        cross_check_kinds(f, 2, &[DecompKind::InvolutionProduct], Budget::default()).map(|r| r.class_counts[0].candidates)
    };
    ensure(gl(Field::Prime(2)).map_err(e2s)? == 6 && gl(Field::Prime(3)).map_err(e2s)? == 48, || "GL_2 sizes".into())?;
    Ok(s)
}

fn c3() -> Outcome {
    let s = oracle_kind(DecompKind::Unipotent2Product, &[(Field::Prime(3), 2), (Field::Prime(5), 2)])?;
    for p in [3, 5] {
        let f = Field::Prime(p);
        let set = oracle_set(f, 2, DecompKind::Unipotent2Product).map_err(e2s)?;
        let j = Mat::jordan(&f.int(-1), 2);
        let m = Mat::scalar(&f.int(-1), 2);
        ensure(set.contains(&j) && decide_product_two_unipotent2(&j).map_err(e2s)?.holds, || format!("J2(-1) rejected over {f}"))?;
        ensure(!set.contains(&m) && !decide_product_two_unipotent2(&m).map_err(e2s)?.holds, || format!("-I accepted over {f}"))?;
    }
    Ok(s)
}

fn c4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let fields = [Field::Prime(2), Field::Prime(3), Field::Prime(5), Field::Q];
    let kinds = [DecompKind::SquareZeroSum, DecompKind::InvolutionProduct, DecompKind::Unipotent2Product];
    let mut count = 0;
    for i in 0..500 {
        let f = fields[i % 4];
        let kind = kinds[(i / 4) % 3];
        let a = gen::yes_instance(&mut rng, f, kind, 8);
        let w = construct(kind, &a).map_err(|e| format!("{kind:?} over {f} on {a}: {e}"))?;
        ensure(w.verified && w.check(&a), || format!("{kind:?} over {f}: witness fails on {a}"))?;
        count += 1;
    }
    Ok(format!("{count} witnesses verified"))
}

/// Random matrix whose characteristic polynomial factors without hints.
fn random_square(rng: &mut ChaCha8Rng, f: Field, max_n: usize) -> Mat {
    let n = rng.gen_range(1..=max_n);
    if f != Field::Q {
        return gen::matrix(rng, f, n, n);
    }
    let mut blocks = Vec::new();
    let mut left = n;
    while left > 0 {
        let deg = rng.gen_range(1..=left.min(2));
        let p = gen::irreducible(rng, f, deg);
        let k = gen::table(rng, p.deg(), left, |_| true);
        let d: usize = k.iter().enumerate().map(|(i, m)| (i + 1) * m * p.deg()).sum();
        if d == 0 {
            break;
        }
        left -= d;
        blocks.push(realize_invariants(&p, &k).expect("valid table"));
    }
    gen::conjugate(rng, &Mat::block_diag(f, &blocks))
}

fn c5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let fields = [Field::Prime(2), Field::Prime(3), Field::Prime(5), Field::Prime(7), Field::Q];
    let mut primes = 0;
    let mut primary_checks = 0;
    for i in 0..200 {
        let f = fields[i % fields.len()];
        let a = random_square(&mut rng, f, 10);
        let eds = elementary_divisors(&a).map_err(e2s)?;
        let mut ps: Vec<Poly> = eds.iter().map(|(p, _)| p.clone()).collect();
        ps.dedup();
        let lambda = gen::nonzero_scalar(&mut rng, f);
        let la = a.scale(&lambda);
        let inv = a.inverse().ok();
        for p in &ps {
            primes += 1;
            let tab = kaplansky_invariants(&a, p).map_err(e2s)?;
            for k in 0..=a.rows() {
                let mult = eds.iter().filter(|(q, e)| q == p && *e == k + 1).count();
                ensure(tab.kappa(k) == mult, || format!("kappa_{k}({p}) = {} but {mult} divisors on {a}", tab.kappa(k)))?;
            }
            // kappa(lambda a, p_l) = kappa(a, H_lambda(p_l)) with p_l = H_{1/lambda}(p)
            let pl = h_transform(p, &lambda.inv().expect("nonzero")).map_err(e2s)?;
            let tl = kaplansky_invariants(&la, &pl).map_err(e2s)?;
            ensure(tl.kappa == tab.kappa && tl.kappa_inf == tab.kappa_inf, || format!("H transport fails at {p}"))?;
            if let Some(ai) = &inv {
                let ps = reciprocal(p).map_err(e2s)?;
                let ti = kaplansky_invariants(ai, &ps).map_err(e2s)?;
                ensure(ti.kappa == tab.kappa, || format!("reciprocal transport fails at {p}"))?;
            }
        }
        for part in primary_decomposition(&a, &FactorHint::none()).map_err(e2s)? {
            for alpha in 0..3 {
                for k in 0..3 {
                    ensure(check_sumdim(&part.restricted, &part.p, alpha, k).map_err(e2s)?, || "sumdim".into())?;
                    for l in 1..3 {
                        ensure(
                            check_supersumdim(&part.restricted, &part.p, alpha, k, l).map_err(e2s)?,
                            || format!("supersumdim at ({alpha},{k},{l})"),
                        )?;
                    }
                }
            }
            primary_checks += 1;
        }
    }
    Ok(format!("{primes} (matrix, prime) tables, {primary_checks} primary parts"))
}

fn primary_instance(rng: &mut ChaCha8Rng, q: &Poly, max_n: usize, allowed: impl Fn(usize) -> bool) -> Mat {
    loop {
        let k = gen::table(rng, q.deg(), max_n, &allowed);
        if !k.is_empty() {
            return gen::conjugate(rng, &realize_invariants(q, &k).expect("valid table"));
        }
    }
}

fn c6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut done = [0usize; 4];
    let fields = [Field::Prime(3), Field::Prime(5), Field::Prime(7), Field::Q];
    // K_even: q(t^2) irreducible
    while done[0] < 100 {
        let f = fields[done[0] % 4];
        let deg = rng.gen_range(1..=2);
        let q = gen::irreducible(&mut rng, f, deg);
        let p = q.compose(&Poly::monomial(f.one(), 2));
        if !is_irreducible(&p).map_err(e2s)? {
            continue;
        }
        let a = primary_instance(&mut rng, &q, 6 / q.deg(), |_| true);
        ensure(transport_check(TransportLemma::KEven, &a).map_err(e2s)?, || format!("K_even on {a}"))?;
        done[0] += 1;
    }
    let f2 = Field::Prime(2);
    while done[1] < 100 {
        let deg = rng.gen_range(1..=3);
        let q = gen::irreducible(&mut rng, f2, deg);
        let a = primary_instance(&mut rng, &q, 6, |_| true);
        ensure(transport_check(TransportLemma::KChar2, &a).map_err(e2s)?, || format!("K_char2 on {a}"))?;
        done[1] += 1;
    }
    while done[2] < 100 {
        let f = [Field::Prime(2), Field::Prime(3), Field::Prime(5), Field::Q][done[2] % 4];
        let deg = rng.gen_range(1..=2);
        let q = gen::irreducible(&mut rng, f, deg);
        let r = r_transform(&q, &f.one()).map_err(e2s)?;
        if !is_irreducible(&r).map_err(e2s)? {
            continue;
        }
        let a = primary_instance(&mut rng, &q, 6, |_| true);
        ensure(transport_check(TransportLemma::LR1, &a).map_err(e2s)?, || format!("L_R1 on {a}"))?;
        done[2] += 1;
    }
    while done[3] < 100 {
        let f = fields[done[3] % 4];
        let a = primary_instance(&mut rng, &Poly::linear(f.int(2)), 6, |_| true);
        ensure(transport_check(TransportLemma::LTplus1, &a).map_err(e2s)?, || format!("L_tplus1 on {a}"))?;
        done[3] += 1;
    }
    Ok("100 instances per branch".into())
}

fn c7() -> Outcome {
    let q = Field::Q;
    let a = Mat::from_ints(q, &[&[2]]);
    let (x, y) = factor_diag_inverse(&a, FactorMode::Involutions).map_err(e2s)?;
    let half = q.ratio(1, 2).map_err(e2s)?;
    let lit = Mat::from_rows(q, vec![vec![q.zero(), half], vec![q.int(2), q.zero()]]).map_err(e2s)?;
    ensure(x == Mat::from_ints(q, &[&[0, 1], &[1, 0]]) && y == lit, || "diag(2, 1/2) literal pair".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let fields = [Field::Prime(3), Field::Prime(5), Field::Prime(7), Field::Q];
    for (mode, eps) in [(FactorMode::Involutions, -1), (FactorMode::Unipotent2, 1)] {
        let mut done = 0;
        while done < 100 {
            let f = fields[done % 4];
            let n = rng.gen_range(1..=4);
            let a = gen::invertible(&mut rng, f, n);
            let id = Mat::identity(f, n);
            if mode == FactorMode::Unipotent2 && !(&(&a * &a) - &id).is_invertible() {
                continue;
            }
            let (x, y) = factor_diag_inverse(&a, mode).map_err(e2s)?;
            let target = Mat::block_diag(f, &[a.clone(), a.inverse().map_err(e2s)?]);
            ensure(&x * &y == target && annihilated_by(&x, eps) && annihilated_by(&y, eps), || format!("{mode:?} on {a}"))?;
            done += 1;
        }
    }
    for eps in [1, -1] {
        for i in 0..100 {
            let f = fields[i % 4];
            let n = rng.gen_range(1..=4);
            let a = gen::invertible(&mut rng, f, n);
            let (x, y) = factor_l(&a, eps).map_err(e2s)?;
            ensure(&x * &y == block_l(&a) && annihilated_by(&x, eps) && annihilated_by(&y, eps), || format!("factor_l({eps}) on {a}"))?;
        }
    }
    Ok("400 factorizations verified".into())
}

fn c8() -> Outcome {
    let specs: Vec<Vec<Cell>> = vec![
        (1..=6).map(Cell::Finite).collect(),
        vec![Cell::Infinite],
        vec![Cell::Finite(1), Cell::Finite(4), Cell::Infinite, Cell::Finite(6)],
        vec![Cell::Infinite, Cell::Finite(2), Cell::Infinite, Cell::Finite(3), Cell::Infinite, Cell::Finite(5)],
        vec![Cell::Finite(3), Cell::Finite(3), Cell::Finite(2), Cell::Infinite, Cell::Infinite],
    ];
    let mut runs = 0;
    for f in [Field::Q, Field::Prime(3), Field::Prime(2)] {
        for cells in &specs {
            let g = JordanGraph::from_cells(f, cells).map_err(e2s)?;
            for pair in [jordan_graph_squarezero_pair(&g), jordan_graph_involution_pair(&g), jordan_graph_unipotent_pair(&g)] {
                for n in [16, 64, 200] {
                    let r = graph_window_report(&pair, n);
                    ensure(r.all_pass(), || format!("{:?} {cells:?} over {f} at N={n}: {:?}", pair.kind, r.failures()))?;
                    runs += 1;
                }
            }
        }
    }
    Ok(format!("{runs} window reports"))
}

fn c9() -> Outcome {
    let f = Field::Q;
    let m = appendix_operator(f);
    let starts: Vec<usize> = (0..50).map(|n| n * (n + 1) / 2 + 1).collect();
    for j in 0..=1000 {
        let col = m.column(j);
        let want = if j == 0 {
            vec![]
        } else if starts.contains(&j) {
            vec![(0, f.one())]
        } else {
            vec![(j - 1, f.one())]
        };
        ensure(*col == want, || format!("column {j}"))?;
    }
    ensure(appendix_index(0, 1) == 1 && appendix_index(1, 2) == 3, || "basis order".into())?;
    ensure(sparse_pattern_jordan_check(&m, 8) == PatternVerdict::RowViolation(0), || "appendix pattern".into())?;
    let g = JordanGraph::from_cells(f, &[Cell::Finite(2), Cell::Finite(1), Cell::Infinite]).map_err(e2s)?;
    match sparse_pattern_jordan_check(&g.operator(), 20) {
        PatternVerdict::Cells(c) => ensure(c == g.window_cells(20), || format!("cells {c:?}"))?,
        v => return Err(format!("cell sum rejected: {v:?}")),
    }
    let trend = appendix_core_trend(&m, 40, 10, 8);
    let last = trend.last().expect("samples");
    ensure(trend.windows(2).all(|w| w[1].dim <= w[0].dim), || "core trend not monotone".into())?;
    ensure(last.dim == 1 && last.image_dim == 0, || format!("core tail {last:?}"))?;
    for n in 0..=5 {
        let r = range_power_dim(&m, n, 40).map_err(e2s)?;
        let c = appendix_spanning_count(n, 40);
        ensure(r == c.interior, || format!("n={n}: rank {r}, spanning count {c:?}"))?;
    }
    let dims: Vec<usize> = trend.iter().map(|s| s.dim).collect();
    Ok(format!("core dims on span(e_0..e_9): {dims:?}"))
}

fn partitions(max_weight: usize, min_part: usize) -> Vec<Vec<usize>> {
    // multisets of chain lengths >= min_part with sum <= max_weight
    let mut out = vec![vec![]];
    for part in min_part..=max_weight {
        for rest in partitions(max_weight - part, part) {
            let mut v = vec![part];
            v.extend(rest);
            out.push(v);
        }
    }
    out
}

fn c10() -> Outcome {
    let cases = [
        Poly::from_ints(Field::Prime(2), &[0, 1]),
        Poly::from_ints(Field::Prime(2), &[1, 1, 1]),
        Poly::from_ints(Field::Prime(3), &[1, -1, 0, 1]),
        Poly::from_ints(Field::Q, &[-1, 1]),
        Poly::from_ints(Field::Q, &[1, 0, 1]),
    ];
    let mut tables = 0;
    for p in &cases {
        let d = p.deg();
        for parts in partitions(24 / d, 1) {
            let mut kappa = vec![0; parts.iter().max().copied().unwrap_or(0)];
            for l in &parts {
                kappa[l - 1] += 1;
            }
            let a = realize_invariants(p, &kappa).map_err(e2s)?;
            let t = kaplansky_invariants(&a, p).map_err(e2s)?;
            ensure(t.kappa == kappa, || format!("round trip at {p} {kappa:?}"))?;
            tables += 1;
        }
    }
    let mut polys = 0;
    for f in [Field::Prime(2), Field::Prime(3)] {
        let q = f.order().expect("finite");
        for d in 1..=5u32 {
            for idx in 0..q.pow(d) {
                let mut cs = Vec::new();
                let mut x = idx;
                for _ in 0..d {
                    cs.push(f.int((x % q) as i64));
                    x /= q;
                }
                cs.push(f.one());
                let p = Poly::new(f, cs);
                let r = r_transform(&p, &f.one()).map_err(e2s)?;
                ensure(r1_preimage(&r).map_err(e2s)? == p, || format!("r1_preimage(R_1({p}))"))?;
                polys += 1;
            }
        }
    }
    Ok(format!("{tables} tables, {polys} polynomials"))
}

fn c11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let fields = [Field::Prime(3), Field::Prime(5), Field::Q];
    for i in 0..100 {
        let f = fields[i % 3];
        let n = rng.gen_range(1..=8);
        let a = gen::upper_triangular_pm1(&mut rng, f, n);
        ensure(decide_product_two_involutions(&a).map_err(e2s)?.holds, || format!("rejected {a}"))?;
        let w = upper_triangular_pm1_involutions(&a).map_err(|e| format!("{a}: {e}"))?;
        ensure(w.verified && w.check(&a), || format!("witness fails on {a}"))?;
        ensure(decide(DecompKind::InvolutionProduct, &a).map_err(e2s)?.holds, || "decide".into())?;
    }
    Ok("100 matrices".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("oracle equivalence, sums", c1),
        ("oracle equivalence, involutions", c2),
        ("oracle equivalence, unipotents", c3),
        ("witness soundness", c4),
        ("Kaplansky correctness", c5),
        ("transport checks", c6),
        ("block factorizations", c7),
        ("infinite graph constructions", c8),
        ("appendix operator", c9),
        ("round-trips", c10),
        ("upper-triangular +-1 involutions", c11),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(note) => println!("PASS {:>2} {name} ({secs:.1}s): {note}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
