use clap::Args;
use rand::Rng;

use kpath_core::algebra::{AlgebraElem, GroupVector};
use kpath_core::circuit::detect_multilinear;
use kpath_core::gf2e::{FieldElem, FieldSpec};
use kpath_core::graph::verify_path;
use kpath_core::held_karp::held_karp_path;
use kpath_core::oracle::{brute_force_kpath, count_k_walks, gf2_rank, has_multilinear_term};
use kpath_core::{generate, kpath, Result, RngStream};

use crate::{Seed, DEFAULT_SEED};

#[derive(Args)]
pub struct SelftestArgs {
    /// Random graphs per graph check.
    #[arg(long, default_value_t = 200)]
    cases: usize,
    #[arg(long, default_value_t = Seed::Fixed(DEFAULT_SEED))]
    seed: Seed,
}

type Check = fn(usize, &mut RngStream) -> Result<String>;

/// Runs every check, printing one line each. Exit status 0 iff all pass.
pub fn run(args: &SelftestArgs) -> u8 {
    let checks: [(&str, Check); 8] = [
        ("field worked example", field_example),
        ("group algebra worked example", algebra_example),
        ("(W0+v) products vs rank", products_vs_rank),
        ("transform vs convolution", transform_vs_convolution),
        ("walk counts vs matrix powers", walk_counts),
        ("detect vs exhaustive search", detect_vs_search),
        ("find and subset DP", find_paths),
        ("circuit detector vs expansion", circuits),
    ];
    let root = RngStream::new(args.seed.resolve());
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let mut rng = root.child("check", i as u64);
        match check(args.cases, &mut rng) {
            Ok(detail) if detail.is_empty() => println!("ok    {name}"),
            Ok(detail) => println!("ok    {name}: {detail}"),
            Err(e) => {
                failed += 1;
                println!("FAIL  {name}: {e}");
            }
        }
    }
    if failed == 0 {
        println!("all {} checks passed", checks.len());
        0
    } else {
        println!("{failed} of {} checks failed", checks.len());
        1
    }
}

fn fail(message: String) -> kpath_core::Error {
    kpath_core::Error::Parameter(message)
}

fn field_example(_: usize, _: &mut RngStream) -> Result<String> {
    let f = FieldSpec::new(2, 0b111)?;
    let x = FieldElem::new(0b10);
    let x2 = f.mul(x, x);
    if x2 != FieldElem::new(0b11) || f.mul(x, x2) != FieldElem::ONE {
        return Err(fail(format!("in GF(4): x^2 = {x2}, x^3 = {}", f.mul(x, x2))));
    }
    Ok("x^2 = x+1 and x^3 = 1 in GF(4)".into())
}

fn algebra_example(cases: usize, rng: &mut RngStream) -> Result<String> {
    let f = FieldSpec::new(2, 0b111)?;
    let g = |bits| GroupVector(bits);
    let elem = |terms: &[(u64, FieldElem)]| -> Result<AlgebraElem> {
        let mut e = AlgebraElem::zero(3, &f)?;
        for &(v, c) in terms {
            e.set_coeff(g(v), f.add(e.coeff(g(v)), c));
        }
        Ok(e)
    };
    for _ in 0..cases {
        let [a1, a2, b1, b2, b3] = [(); 5].map(|_| f.random(rng));
        let a = elem(&[(0b000, a1), (0b101, a2)])?;
        let b = elem(&[(0b000, b1), (0b101, b2), (0b111, b3)])?;
        let expected = elem(&[
            (0b000, f.add(f.mul(a1, b1), f.mul(a2, b2))),
            (0b010, f.mul(a2, b3)),
            (0b101, f.add(f.mul(a1, b2), f.mul(a2, b1))),
            (0b111, f.mul(a1, b3)),
        ])?;
        if a.mul_naive(&b)? != expected || a.mul_fast(&b)? != expected {
            return Err(fail("product over GF(4)[Z_2^3] differs from the closed form".into()));
        }
    }
    Ok(format!("{cases} products over GF(4)[Z_2^3]"))
}

fn products_vs_rank(cases: usize, rng: &mut RngStream) -> Result<String> {
    let mut checked = 0;
    for k in 1..=6u32 {
        let spec = FieldSpec::for_k(k as usize)?;
        let ones = AlgebraElem::all_ones(k, &spec)?;
        for _ in 0..cases {
            let vs: Vec<u64> = (0..k).map(|_| rng.gen_range(0..1u64 << k)).collect();
            let gv: Vec<GroupVector> = vs.iter().map(|&v| GroupVector(v)).collect();
            let p = AlgebraElem::elem_product(&gv, k, &spec)?;
            let ok = if gf2_rank(&vs) == vs.len() { p == ones } else { p.is_zero() };
            if !ok {
                return Err(fail(format!("vectors {vs:?} over Z_2^{k}")));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} tuples"))
}

fn transform_vs_convolution(cases: usize, rng: &mut RngStream) -> Result<String> {
    let mut checked = 0;
    for k in 1..=8u32 {
        let spec = FieldSpec::for_k(k as usize)?;
        for _ in 0..cases.div_ceil(8) {
            let random = |rng: &mut RngStream| {
                let coeffs = (0..1usize << k).map(|_| spec.random(rng)).collect();
                AlgebraElem::from_coeffs(k, &spec, coeffs)
            };
            let a = random(rng)?;
            let b = random(rng)?;
            if a.mul_fast(&b)? != a.mul_naive(&b)? {
                return Err(fail(format!("mismatch at k={k}")));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} pairs"))
}

fn walk_counts(cases: usize, rng: &mut RngStream) -> Result<String> {
    for _ in 0..cases {
        let n = rng.gen_range(1..=8);
        let g = generate::random(n, rng.gen_range(0.0..=1.0), rng);
        let k = rng.gen_range(1..=6);
        let ones = vec![1u128; n];
        let layered: u128 = kpath::walk_polynomial_value(&g, k, &ones)?;
        let direct = count_k_walks(&g, k)?;
        if layered != direct {
            return Err(fail(format!("n={n} k={k}: {layered} vs {direct}")));
        }
    }
    Ok(format!("{cases} graphs"))
}

fn detect_vs_search(cases: usize, rng: &mut RngStream) -> Result<String> {
    let mut yes = 0;
    for case in 0..cases {
        let n = rng.gen_range(1..=9);
        let g = generate::random(n, rng.gen_range(0.1..=0.6), rng);
        let k = rng.gen_range(1..=n.min(7));
        let exact = brute_force_kpath(&g, k).is_some();
        let d = kpath::detect(&g, k, kpath::DEFAULT_TRIALS, case as u64)?;
        if d.answer != exact {
            return Err(fail(format!("n={n} k={k}: exhaustive {exact}, detect {}", d.answer)));
        }
        yes += usize::from(exact);
    }
    Ok(format!("{cases} graphs, {yes} with a path"))
}

fn find_paths(cases: usize, rng: &mut RngStream) -> Result<String> {
    let mut found = 0;
    for case in 0..cases {
        let n = rng.gen_range(2..=10);
        let g = generate::random(n, rng.gen_range(0.2..=0.7), rng);
        let k = rng.gen_range(2..=n.min(6));
        let exact = brute_force_kpath(&g, k).is_some();
        if held_karp_path(&g, k)?.is_some() != exact {
            return Err(fail(format!("subset DP disagrees on n={n} k={k}")));
        }
        match kpath::find(&g, k, case as u64)? {
            Some(p) if verify_path(&g, &p, k) => found += 1,
            Some(p) => return Err(fail(format!("{p} is not a {k}-vertex path"))),
            None if exact => return Err(fail(format!("missed a path, n={n} k={k}"))),
            None => {}
        }
    }
    Ok(format!("{cases} graphs, {found} verified paths"))
}

fn circuits(cases: usize, rng: &mut RngStream) -> Result<String> {
    let mut checked = 0;
    for case in 0..cases.div_ceil(4) {
        let n = rng.gen_range(1..=5);
        let g = generate::random(n, rng.gen_range(0.2..=0.8), rng);
        let k = rng.gen_range(1..=n.min(4));
        let Some(c) = kpath::walk_circuit(&g, k)? else { continue };
        let symbolic = has_multilinear_term(&c, k)?;
        let randomized = detect_multilinear(&c, k, kpath::DEFAULT_TRIALS, &RngStream::new(case as u64))?;
        if symbolic != randomized {
            return Err(fail(format!("walk circuit n={n} k={k}: {symbolic} vs {randomized}")));
        }
        checked += 1;
    }
    Ok(format!("{checked} walk circuits"))
}
