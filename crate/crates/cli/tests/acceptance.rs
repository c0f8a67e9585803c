//! Acceptance criteria, one line per criterion. Run with
//! `cargo test -p prelie-cli --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use prelie_cli::run;
use prelie_core::dual::verify_dual;
use prelie_core::enveloping::{check_freeness, pbw_normalize, RewriteOrder};
use prelie_core::homology::{differential, homology_ranks, FiniteTable, PreLieStructure};
use prelie_core::lincomb::coeff;
use prelie_core::operad::{compose_at, element, pre_lie_defect, series_inverse_check};
use prelie_core::trees::{canonicalize, enumerate_trees, parse_tree, RawTree};
use prelie_core::words::{phi, relator_orbit, roundtrip_check};
use prelie_core::{Alphabet, Coefficient, ExactMatrix, Label, LinComb, OperadElement, RootedTree};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_tree<R: Rng>(rng: &mut R, mut labels: Vec<Label>) -> RootedTree {
    labels.shuffle(rng);
    let n = labels.len();
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 1..n {
        children[rng.gen_range(0..v)].push(v);
    }
    fn build(v: usize, labels: &[Label], children: &[Vec<usize>]) -> RawTree {
        RawTree::new(labels[v].clone(), children[v].iter().map(|&c| build(c, labels, children)).collect())
    }
    canonicalize(build(0, &labels, &children))
}

fn random_coeff<R: Rng>(rng: &mut R) -> Coefficient {
    let mut c = 0;
    while c == 0 {
        c = rng.gen_range(-3..=3);
    }
    coeff(c)
}

fn basis(n: usize) -> Vec<OperadElement> {
    enumerate_trees(n).unwrap().into_iter().map(|t| OperadElement::from_tree(t).unwrap()).collect()
}

fn compose_example() -> Check {
    let out = run(["prelie", "compose", "--left", "(2 (1) (3))", "--at", "2", "--right", "(1 (2))"]);
    ensure(out.code == 0, format!("exit {}", out.code))?;
    let got = OperadElement::parse(out.stdout.trim()).map_err(|e| e.to_string())?.into_value();
    let mut expected = LinComb::zero();
    for t in ["(2 (1) (3) (4))", "(2 (1) (3 (4)))", "(2 (3 (1)) (4))", "(2 (3 (1) (4)))"] {
        expected.add_term(parse_tree(t).unwrap(), coeff(1));
    }
    ensure(got == expected, format!("got {got}"))?;

    let (t, s) = (element("(2 (1) (3))").unwrap(), element("(1 (2))").unwrap());
    let mut times: Vec<Duration> = (0..101)
        .map(|_| {
            let start = Instant::now();
            std::hint::black_box(compose_at(&t, 2, &s).unwrap());
            start.elapsed()
        })
        .collect();
    times.sort();
    let median = times[50];
    ensure(median < Duration::from_millis(1), format!("median compose {median:?}"))?;
    Ok(format!("4 terms, coefficient 1, median {median:?}"))
}

fn dims() -> Check {
    for n in 1..=7usize {
        let got = enumerate_trees(n).map_err(|e| e.to_string())?.len();
        let expected = n.pow(n as u32 - 1);
        ensure(got == expected, format!("n = {n}: {got} ≠ {expected}"))?;
    }
    Ok("RT(1..7) = n^(n-1)".into())
}

fn series() -> Check {
    let r = series_inverse_check(10).map_err(|e| e.to_string())?;
    ensure(r.passed(), format!("residuals {:?}", r.residual_coefficients))?;
    Ok("residuals vanish through order 10".into())
}

fn relator() -> Check {
    let orbit = relator_orbit();
    ensure(orbit.len() == 6, "orbit size")?;
    for w in &orbit {
        ensure(phi(w).is_zero(), format!("phi({w}) ≠ 0"))?;
    }
    Ok("phi vanishes on the S3 orbit".into())
}

fn pre_lie_identity() -> Check {
    let mut checked = 0;
    for a in 1..=4 {
        for b in 1..=(5 - a) {
            for c in 1..=(6 - a - b) {
                for t1 in basis(a) {
                    for t2 in basis(b) {
                        for t3 in basis(c) {
                            ensure(pre_lie_defect(&t1, &t2, &t3).is_zero(), format!("{t1}, {t2}, {t3}"))?;
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    let mut rng = rng(6);
    for _ in 0..200 {
        let t: Vec<OperadElement> = (0..3)
            .map(|_| {
                let n = rng.gen_range(1..=3);
                let mut value = LinComb::zero();
                for _ in 0..rng.gen_range(1..=3) {
                    let tree = random_tree(&mut rng, (1..=n as u32).map(Label::Index).collect());
                    let c = random_coeff(&mut rng);
                    value.add_term(tree, c);
                }
                OperadElement::new(n, value).unwrap()
            })
            .collect();
        ensure(pre_lie_defect(&t[0], &t[1], &t[2]).is_zero(), "random triple")?;
    }
    Ok(format!("{checked} basis triples, 200 random triples"))
}

fn roundtrip() -> Check {
    let r5 = roundtrip_check(5).map_err(|e| e.to_string())?;
    ensure(r5.trees_checked == 625 && r5.phi_psi_failures.is_empty(), "phi∘psi ≠ id on RT(5)")?;
    let r4 = roundtrip_check(4).map_err(|e| e.to_string())?;
    ensure(r4.trees_checked == 64 && r4.choice_mismatches.is_empty(), "psi depends on the choice on RT(4)")?;
    Ok("625 trees, choice independent on 64".into())
}

fn dual() -> Check {
    let r = verify_dual();
    ensure(r.passed(), format!("{r:?}"))?;
    ensure(r.dim_r == 3 && r.dim_r_prime == 9 && r.dim_annihilator == 9, "dimensions")?;
    Ok("dim R = 3, dim R' = 9 = dim R^⊥".into())
}

fn scaled(t: &FiniteTable, c: &Coefficient) -> FiniteTable {
    let n = t.dim();
    let constants = (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| t.constant(i, j, k) * c).collect()).collect())
        .collect();
    FiniteTable::new(constants).unwrap()
}

fn random_table<R: Rng>(rng: &mut R) -> FiniteTable {
    let base = match rng.gen_range(0..3) {
        0 => {
            let mut c = || coeff(rng.gen_range(-3..=3));
            let (l, a, b) = (c(), c(), c());
            FiniteTable::derivation_family(&l, &a, &b).unwrap()
        }
        1 => FiniteTable::upper_triangular().unwrap(),
        _ => FiniteTable::diagonal(3).unwrap(),
    };
    let p = loop {
        let rows: Vec<Vec<Coefficient>> =
            (0..3).map(|_| (0..3).map(|_| coeff(rng.gen_range(-2..=2))).collect()).collect();
        let p = ExactMatrix::from_rows(3, &rows);
        if p.rank() == 3 {
            break p;
        }
    };
    let c = random_coeff(rng);
    scaled(&base, &c).transport(&p).unwrap()
}

fn d_squared_zero(l: &PreLieStructure, max_degree: usize, w: usize) -> Result<usize, String> {
    let mut products = 0;
    for n in 2..max_degree {
        let outer = differential(l, n, w).map_err(|e| e.to_string())?;
        let inner = differential(l, n + 1, w).map_err(|e| e.to_string())?;
        if outer.cols() == 0 || inner.cols() == 0 {
            continue;
        }
        ensure(outer.mul(&inner).is_zero(), format!("d{n} d{} ≠ 0 at weight {w}", n + 1))?;
        products += 1;
    }
    Ok(products)
}

fn free(symbols: &[&str], cutoff: usize) -> PreLieStructure {
    PreLieStructure::free(&Alphabet::new(symbols).unwrap(), cutoff).unwrap()
}

fn d_squared() -> Check {
    let mut products = 0;
    for symbols in [&["x"][..], &["x", "y"]] {
        let l = free(symbols, 5);
        for w in 1..=5 {
            products += d_squared_zero(&l, w + 1, w)?;
        }
    }
    let mut rng = rng(31);
    for _ in 0..50 {
        let l = PreLieStructure::FiniteTable(random_table(&mut rng));
        products += d_squared_zero(&l, 5, 0)?;
    }
    Ok(format!("{products} nonempty products d∘d vanish"))
}

fn koszul() -> Check {
    let x = homology_ranks(&free(&["x"], 5), 5, 5).map_err(|e| e.to_string())?;
    ensure(x.d_squared_zero() && x.concentrated_in_degree_one(1), format!("{{x}}:\n{x}"))?;
    let xy = homology_ranks(&free(&["x", "y"], 4), 5, 4).map_err(|e| e.to_string())?;
    ensure(xy.d_squared_zero() && xy.concentrated_in_degree_one(2), format!("{{x,y}}:\n{xy}"))?;
    Ok("{x} w ≤ 5 and {x,y} w ≤ 4 concentrated in degree 1".into())
}

/// Unlabelled rooted trees by the classical divisor-sum recurrence.
fn rooted_tree_counts(max: usize) -> Vec<u64> {
    let mut a = vec![0u64; max + 1];
    a[1] = 1;
    for n in 1..max {
        let mut s = 0;
        for k in 1..=n {
            let d_sum: u64 = (1..=k).filter(|d| k % d == 0).map(|d| d as u64 * a[d]).sum();
            s += d_sum * a[n - k + 1];
        }
        a[n + 1] = s / n as u64;
    }
    a
}

fn forests(counts: &[u64], n: usize) -> u64 {
    fn multichoose(k: u64, r: u64) -> u64 {
        (0..r).fold(1u64, |acc, i| acc * (k + i) / (i + 1))
    }
    fn go(counts: &[u64], max_part: usize, left: usize) -> u64 {
        if left == 0 {
            return 1;
        }
        let mut total = 0;
        for part in (1..=max_part.min(left)).rev() {
            for reps in 1..=left / part {
                total += multichoose(counts[part], reps as u64) * go(counts, part - 1, left - part * reps);
            }
        }
        total
    }
    go(counts, n, n)
}

fn freeness() -> Check {
    let r = check_freeness(&Alphabet::new(["x"]).unwrap(), 6).map_err(|e| e.to_string())?;
    let counts = rooted_tree_counts(6);
    let sizes: Vec<usize> = r.blocks.iter().map(|b| b.trees).collect();
    ensure(sizes == [1, 1, 2, 4, 9, 20], format!("sizes {sizes:?}"))?;
    for b in &r.blocks {
        ensure(b.trees as u64 == counts[b.weight], format!("tree oracle at weight {}", b.weight))?;
        ensure(b.module_dim as u64 == forests(&counts, b.weight - 1), format!("forest oracle at weight {}", b.weight))?;
        ensure(b.invertible(), format!("Ψ singular at weight {}", b.weight))?;
    }
    ensure(r.passed(), "report")?;
    Ok(format!("Ψ invertible, sizes {sizes:?}"))
}

fn pbw() -> Check {
    let alphabet = Alphabet::new(["x", "y"]).unwrap();
    let g = alphabet.labels();
    let mut rng = rng(41);
    for _ in 0..500 {
        let mut left = rng.gen_range(0..=6usize);
        let mut word = Vec::new();
        while left > 0 {
            let w = rng.gen_range(1..=left.min(3));
            let labels = (0..w).map(|_| g[rng.gen_range(0..g.len())].clone()).collect();
            word.push(random_tree(&mut rng, labels));
            left -= w;
        }
        let a = pbw_normalize(&word, 6, RewriteOrder::Leftmost).map_err(|e| e.to_string())?;
        let b = pbw_normalize(&word, 6, RewriteOrder::Rightmost).map_err(|e| e.to_string())?;
        ensure(a == b, "rewrite orders disagree")?;
    }
    Ok("500 words, both rewrite orders agree".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Check); 11] = [
        ("composition example", Duration::from_secs(5), compose_example),
        ("RT(n) = n^(n-1) for n ≤ 7", Duration::from_secs(30), dims),
        ("series inverse to order 10", Duration::from_secs(1), series),
        ("relator orbit in ker phi", Duration::from_secs(1), relator),
        ("pre-Lie identity for ⋆", Duration::from_secs(60), pre_lie_identity),
        ("phi∘psi = id on RT(5)", Duration::from_secs(60), roundtrip),
        ("Perm is the dual of pre-Lie", Duration::from_secs(1), dual),
        ("d∘d = 0", Duration::from_secs(120), d_squared),
        ("Koszul concentration", Duration::from_secs(120), koszul),
        ("freeness over U(L)", Duration::from_secs(60), freeness),
        ("PBW straightening is confluent", Duration::from_secs(30), pbw),
    ];
    let mut failures = 0;
    for (k, (name, limit, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (status, detail) = match result {
            Ok(d) if elapsed <= limit => ("pass", d),
            Ok(d) => ("FAIL", format!("{d}; over the {limit:?} limit")),
            Err(e) => ("FAIL", e),
        };
        if status != "pass" {
            failures += 1;
        }
        println!("criterion {:>2} {status} ({elapsed:.2?}, limit {limit:?}) {name}: {detail}", k + 1);
    }
    println!("{} of 11 criteria passed", 11 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
