//! Verification suites behind `cellint verify`.

use cellint::beta::{
    beta, beta_recurrence, beta_via_k, beta_via_partitions, count_n_bruteforce, count_n_formula, gamma_coeff,
    verify_product_identity,
};
use cellint::gfun::{
    f_integral_quadrature, f_numeric, g_formula, g_numeric, integral_g, verify_alpha_collapse,
    verify_xi_closure,
};
use cellint::hyperlog::{eval_series, verify_swap, verify_swap_restricted, HyperWord};
use cellint::oracle::{
    xi_montecarlo, xi_montecarlo_conditional, xi_series, xi_truncated, zlobin_i, zlobin_target, SeriesConfig,
    ZlobinMethod,
};
use cellint::poly::PsiPoly;
use cellint::ratfun::{alternating_partition, divisor_sweep, telescoping_check, verify_exactness};
use cellint::words::{words_ending_in_one, Word};
use cellint::xi::{verify_odd_relation, xi_numeric, xi_odd_bare_q0, xi_symbolic, xi_theorem};
use clap::ValueEnum;
use num_integer::binomial;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::report::{timed, Check};

pub const ZETA2: f64 = 1.644_934_066_848_226_4;
const NUMERIC_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Swap,
    Beta,
    NCount,
    Exactness,
    ShapeG,
    OddRelation,
    Oracle,
    Zlobin,
    All,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Swap,
        Suite::Beta,
        Suite::NCount,
        Suite::Exactness,
        Suite::ShapeG,
        Suite::OddRelation,
        Suite::Oracle,
        Suite::Zlobin,
    ];
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyOptions {
    pub lmax: Option<usize>,
    pub quick: bool,
    pub samples: u64,
    pub seed: u64,
    pub cutoff: usize,
}

impl VerifyOptions {
    fn lmax_or(&self, default: usize) -> usize {
        self.lmax.unwrap_or(default)
    }

    fn series(&self) -> SeriesConfig {
        SeriesConfig { cutoff: self.cutoff, ..SeriesConfig::default() }
    }
}

pub fn run_suites(suite: Suite, o: &VerifyOptions) -> Vec<Check> {
    let selected: Vec<Suite> = if suite == Suite::All { Suite::ALL.to_vec() } else { vec![suite] };
    selected.par_iter().flat_map(|s| run_one(*s, o)).collect()
}

fn run_one(suite: Suite, o: &VerifyOptions) -> Vec<Check> {
    match suite {
        Suite::Swap => swap(o),
        Suite::Beta => beta_suite(o),
        Suite::NCount => n_count(),
        Suite::Exactness => exactness(o),
        Suite::ShapeG => shape_g(o),
        Suite::OddRelation => odd_relation(o),
        Suite::Oracle => oracle(o),
        Suite::Zlobin => zlobin(o),
        Suite::All => run_suites(Suite::All, o),
    }
}

fn word_label(w: &Word) -> String {
    w.letters().iter().map(|d| char::from(b'0' + d)).collect()
}

fn swap(o: &VerifyOptions) -> Vec<Check> {
    let mut words: Vec<Word> = (1..=3).flat_map(words_ending_in_one).collect();
    let heavy = words_ending_in_one(4);
    let take = if o.quick { 5 } else { heavy.len() };
    words.extend(heavy.into_iter().take(take));
    let mut checks: Vec<Check> = words
        .par_iter()
        .map(|w| {
            let id = format!("swap.general.{}", word_label(w));
            let desc = "variable swap expansion at 20 seeded points";
            timed(&id, desc, || {
                let r = verify_swap(w, 20, 1e-6, o.seed)?;
                Ok::<_, cellint::Error>(Check::numeric(&id, desc, r.max_residual, 1e-6, json!(r)))
            })
        })
        .collect();
    for letters in [vec![1u8], vec![0, 1], vec![1, 1]] {
        let w = Word::new(letters).expect("valid word");
        let id = format!("swap.restricted.{}", word_label(&w));
        let desc = "restricted expansion at y = 1 against quadrature";
        checks.push(timed(&id, desc, || {
            let r = verify_swap_restricted(&w, &[0.2, 0.5, 0.8], 1e-5)?;
            Ok::<_, cellint::Error>(Check::numeric(&id, desc, r.max_residual, 1e-5, json!(r)))
        }));
    }
    let desc = "stated sign convention holds and the flipped one does not";
    checks.push(timed("swap.sign-arbitration", desc, || {
        let w = Word::new(vec![0, 1, 0, 1])?;
        let r = verify_swap(&w, 20, 1e-6, o.seed)?;
        let pass = r.max_residual < 1e-6 && r.alternate_max_residual > 1e-3;
        Ok::<_, cellint::Error>(Check::exact("swap.sign-arbitration", desc, pass, json!(r)))
    }));
    checks
}

fn closed_forms(l: usize) -> Vec<(usize, PsiPoly)> {
    let parse = |s: String| s.parse::<PsiPoly>().expect("valid polynomial");
    let mut out = vec![(l - 2, parse(format!("{}*p2", l - 2)))];
    if l >= 5 {
        out.push((l - 4, parse(format!("{}*p4 + {}*p2^2", l - 4, (l - 1) * (l - 4) / 2))));
    }
    if l >= 7 {
        out.push((
            l - 6,
            parse(format!(
                "{}*p6 + {}*p2*p4 + {}*p2^3",
                l - 6,
                (l - 6) * (l - 1),
                (l - 6) * (l - 2) * (l - 1) / 6
            )),
        ));
    }
    out
}

fn beta_suite(o: &VerifyOptions) -> Vec<Check> {
    let lmax = o.lmax_or(12);
    let mut checks = Vec::new();

    let desc = "recurrence, K-tuple and partition routes agree and are homogeneous";
    checks.push(timed("beta.routes", desc, || {
        let mut mismatches = Vec::new();
        let mut entries = 0;
        for upper in 2..=lmax + 1 {
            let l = upper - 1;
            for m in (1..=l).filter(|m| m % 2 == l % 2) {
                entries += 1;
                let r = beta_recurrence(upper, m)?;
                if beta_via_k(upper, m)? != r
                    || beta_via_partitions(upper, m)? != r
                    || !r.is_homogeneous_of(l - m)
                {
                    mismatches.push(format!("({upper},{m})"));
                }
            }
        }
        let detail = json!({ "entries": entries, "mismatches": mismatches });
        Ok::<_, cellint::Error>(Check::exact("beta.routes", desc, mismatches.is_empty(), detail))
    }));

    let desc = "closed forms of the top three beta columns";
    checks.push(timed("beta.closed-forms", desc, || {
        let mut mismatches = Vec::new();
        let mut compared = 0;
        for l in 3..=lmax {
            for (m, want) in closed_forms(l) {
                compared += 1;
                let got = beta(l + 1, m);
                if got != want {
                    mismatches
                        .push(json!({ "l": l, "m": m, "got": got.to_string(), "want": want.to_string() }));
                }
            }
        }
        let detail = json!({ "compared": compared, "mismatches": mismatches });
        Ok::<_, cellint::Error>(Check::exact("beta.closed-forms", desc, mismatches.is_empty(), detail))
    }));

    let desc = "product identity for every valid (l, m, q)";
    let lp = lmax.min(10);
    checks.push(timed("beta.product-identity", desc, || {
        let mut failures = Vec::new();
        let mut cases = 0;
        for l in 2..=lp {
            for m in (2..=l).filter(|m| m % 2 == (l + 1) % 2) {
                for q in 1..m {
                    cases += 1;
                    if !verify_product_identity(l, m, q)? {
                        failures.push([l, m, q]);
                    }
                }
            }
        }
        let detail = json!({ "l_max": lp, "cases": cases, "failures": failures });
        Ok::<_, cellint::Error>(Check::exact("beta.product-identity", desc, failures.is_empty(), detail))
    }));

    let desc = "xi from the recurrence, the closed gamma sum and both beta routes agree";
    checks.push(timed("xi.triple-route", desc, || {
        let mut mismatches = Vec::new();
        for l in 2..=lmax {
            let m = if l % 2 == 0 { 1 } else { 2 };
            let s = xi_symbolic(l);
            if xi_theorem(l) != s || beta_via_k(l + 2, m)? != s || beta_via_partitions(l + 2, m)? != s {
                mismatches.push(l);
            }
        }
        let detail = json!({ "l_max": lmax, "mismatches": mismatches });
        Ok::<_, cellint::Error>(Check::exact("xi.triple-route", desc, mismatches.is_empty(), detail))
    }));

    let desc = "every monomial of xi_2n and xi_2n+1 has grade 2n";
    checks.push(timed("xi.weight-purity", desc, || {
        let nmax = (lmax / 2).max(6);
        let bad: Vec<usize> = (1..=nmax)
            .flat_map(|n| [2 * n, 2 * n + 1])
            .filter(|&l| !xi_symbolic(l).is_homogeneous_of(l - l % 2))
            .collect();
        let detail = json!({ "n_max": nmax, "impure": bad });
        Ok::<_, cellint::Error>(Check::exact("xi.weight-purity", desc, bad.is_empty(), detail))
    }));
    checks
}

fn nondecreasing(s: usize, top: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..s {
        out = out
            .into_iter()
            .flat_map(|t: Vec<usize>| {
                let lo = t.last().copied().unwrap_or(0);
                (lo..=top).map(move |v| {
                    let mut n = t.clone();
                    n.push(v);
                    n
                })
            })
            .collect();
    }
    out
}

fn n_count() -> Vec<Check> {
    let mut checks = Vec::new();

    let desc = "binomial-sum formula against brute force, s <= 6, entries <= 6";
    checks.push(timed("ncount.formula", desc, || {
        let mut cases = 0;
        let mut core_cases = 0;
        let mut failures = Vec::new();
        for s in 1..=6 {
            for a in nondecreasing(s, 6) {
                cases += 1;
                if s <= 5 {
                    core_cases += 1;
                }
                if count_n_formula(&a)? != count_n_bruteforce(&a)? {
                    failures.push(a);
                }
            }
        }
        let detail = json!({ "cases": cases, "cases_s_le_5": core_cases, "failures": failures });
        let pass = failures.is_empty() && cases >= 1000;
        Ok::<_, cellint::Error>(Check::exact("ncount.formula", desc, pass, detail))
    }));

    let desc = "N(0, 1, ..., s-1) is the Catalan number, s <= 8";
    checks.push(timed("ncount.catalan", desc, || {
        let mut failures = Vec::new();
        for s in 1..=8usize {
            let a: Vec<usize> = (0..s).collect();
            let want = binomial(2 * s as u64, s as u64) / (s as u64 + 1);
            let (f, b) = (count_n_formula(&a)?, count_n_bruteforce(&a)?);
            if f != want || b != want {
                failures.push(json!({ "s": s, "formula": f, "bruteforce": b, "catalan": want }));
            }
        }
        Ok::<_, cellint::Error>(Check::exact("ncount.catalan", desc, failures.is_empty(), json!(failures)))
    }));

    let desc = "gamma_{1,2} = m(m+3)/2 and gamma_{2,1} = m(m+7)/2, m <= 10";
    checks.push(timed("ncount.gamma-two-part", desc, || {
        let mut failures = Vec::new();
        for m in 1..=10u64 {
            let g12 = gamma_coeff(m as usize, &[1, 2])?;
            let g21 = gamma_coeff(m as usize, &[2, 1])?;
            if g12 != m * (m + 3) / 2 || g21 != m * (m + 7) / 2 {
                failures.push(json!({ "m": m, "gamma_12": g12, "gamma_21": g21 }));
            }
        }
        Ok::<_, cellint::Error>(Check::exact(
            "ncount.gamma-two-part",
            desc,
            failures.is_empty(),
            json!(failures),
        ))
    }));

    let desc = "equal bounds give binom(a + s, s)";
    checks.push(timed("ncount.equal-bounds", desc, || {
        let mut failures = Vec::new();
        for s in 1..=6usize {
            for a in 0..=6usize {
                let want = binomial((a + s) as u64, s as u64);
                if count_n_formula(&vec![a; s])? != want {
                    failures.push([s, a]);
                }
            }
        }
        Ok::<_, cellint::Error>(Check::exact(
            "ncount.equal-bounds",
            desc,
            failures.is_empty(),
            json!(failures),
        ))
    }));
    checks
}

fn exactness(o: &VerifyOptions) -> Vec<Check> {
    let lmax = o.lmax_or(7);
    let mut checks: Vec<Check> = (2..=lmax)
        .into_par_iter()
        .map(|l| {
            let id = format!("exactness.d-alpha.l{l:02}");
            let desc = if l % 2 == 1 { "d(alpha) = omega" } else { "d(alpha) = 0" };
            timed(&id, desc, || {
                let r = verify_exactness(l)?;
                Ok::<_, cellint::Error>(Check::exact(&id, desc, r.pass, json!(r)))
            })
        })
        .collect();

    let desc = "sum of (-1)^i x_i df/dx_i vanishes";
    checks.push(timed("exactness.telescoping", desc, || {
        let bad: Vec<usize> = (2..=lmax).filter(|&l| !telescoping_check(l).unwrap_or(false)).collect();
        let detail = json!({ "l_max": lmax, "failures": bad });
        Ok::<_, cellint::Error>(Check::exact("exactness.telescoping", desc, bad.is_empty(), detail))
    }));

    let ns: Vec<usize> = if o.quick { vec![5, 6] } else { vec![5, 6, 7, 8] };
    for n in ns {
        let id = format!("exactness.divisor.n{n}");
        let desc = if n % 2 == 1 {
            "even l: minimum pole order -1"
        } else {
            "odd l: double pole only at the alternating partition"
        };
        checks.push(timed(&id, desc, || {
            let sweep = divisor_sweep(n)?;
            let pass = if n % 2 == 1 {
                sweep.min_order == -1
            } else {
                sweep.min_order == -2 && sweep.minimizers == vec![alternating_partition(n)?]
            };
            Ok::<_, cellint::Error>(Check::exact(&id, desc, pass, json!(sweep)))
        }));
    }
    checks
}

fn shape_g(o: &VerifyOptions) -> Vec<Check> {
    let mut checks: Vec<Check> = (2..=5usize)
        .into_par_iter()
        .map(|l| {
            let id = format!("shape-g.formula.l{l}");
            let desc = "G_l(1, x) by quadrature against the beta/H formula";
            timed(&id, desc, || {
                let mut worst: f64 = 0.0;
                let mut points = Vec::new();
                for x in [0.2, 0.5, 0.8] {
                    let (a, b) = (g_numeric(l, x)?, g_formula(l, x)?);
                    worst = worst.max((a.value - b.value).abs());
                    points.push(json!({ "x": x, "quadrature": a.value, "formula": b.value }));
                }
                Ok::<_, cellint::Error>(Check::numeric(&id, desc, worst, 1e-4, json!(points)))
            })
        })
        .collect();

    let lmax = o.lmax_or(8);
    let desc = "word coefficients vanish off admissible words and collapse to beta";
    checks.push(timed("shape-g.alpha-collapse", desc, || {
        let r = verify_alpha_collapse(lmax)?;
        Ok::<_, cellint::Error>(Check::exact("shape-g.alpha-collapse", desc, r.pass, json!(r)))
    }));

    for upper in 2..=5usize {
        let id = format!("shape-g.integral.l{upper}");
        let desc = "integral of G by quadrature against the closed form";
        checks.push(timed(&id, desc, || {
            let r = integral_g(upper)?;
            let res = (r.formula.value - r.quadrature.value).abs();
            Ok::<_, cellint::Error>(Check::numeric(&id, desc, res, 1e-4, json!(r)))
        }));
    }

    let desc = "xi_{l+1} = sum_k a_{l+1,k} xi_k + integral of G";
    checks.push(timed("shape-g.xi-closure", desc, || {
        let bad: Vec<usize> = (1..=lmax).filter(|&l| !verify_xi_closure(l).unwrap_or(false)).collect();
        let detail = json!({ "l_max": lmax, "failures": bad });
        Ok::<_, cellint::Error>(Check::exact("shape-g.xi-closure", desc, bad.is_empty(), detail))
    }));

    for l in 2..=4usize {
        let id = format!("shape-g.f-integral.l{l}");
        let desc = "integral of F_l by quadrature against xi_l";
        checks.push(timed(&id, desc, || {
            let q = f_integral_quadrature(l)?;
            let x = xi_numeric(l, NUMERIC_TOL)?;
            let res = (q.value - x.value).abs();
            Ok::<_, cellint::Error>(Check::numeric(&id, desc, res, 1e-4, json!({ "quadrature": q, "xi": x })))
        }));
    }

    let desc = "F_3(1, 1/2) from the recursion against zeta(2) + L_01 + L_11";
    checks.push(timed("shape-g.f3-display", desc, || {
        let x: f64 = 0.5;
        let f3 = f_numeric(3, x)?;
        let l01 = eval_series(&HyperWord::from(&Word::new(vec![0, 1])?), x)?;
        let l11 = eval_series(&HyperWord::from(&Word::new(vec![1, 1])?), x)?;
        let want = ZETA2 + l01.value + l11.value;
        let res = (f3.value - want).abs();
        Ok::<_, cellint::Error>(Check::numeric(
            "shape-g.f3-display",
            desc,
            res,
            1e-6,
            json!({ "f3": f3, "display": want }),
        ))
    }));
    checks
}

fn sigma_check(id: &str, desc: &str, est: f64, stderr: f64, truth: f64, detail: serde_json::Value) -> Check {
    let z = (est - truth) / stderr;
    let mut c = Check::numeric(id, desc, z.abs(), 3.0, detail);
    if let serde_json::Value::Object(m) = &mut c.detail {
        m.insert("z".into(), json!(z));
    }
    c
}

fn odd_relation(o: &VerifyOptions) -> Vec<Check> {
    let mut checks = Vec::new();
    let desc = "xi_{2m+1} = sum_h xi_{2h} xi_{2m-2h} exactly, m <= 5";
    checks.push(timed("odd-relation.exact", desc, || {
        let bad: Vec<usize> = (1..=5).filter(|&m| !verify_odd_relation(m).unwrap_or(false)).collect();
        Ok::<_, cellint::Error>(Check::exact(
            "odd-relation.exact",
            desc,
            bad.is_empty(),
            json!({ "failures": bad }),
        ))
    }));

    let desc = "xi_5 against conditional Monte Carlo within 3 sigma";
    checks.push(timed("odd-relation.xi5-mc", desc, || {
        let x = xi_numeric(5, NUMERIC_TOL)?;
        let mc = xi_montecarlo_conditional(5, o.samples, o.seed)?;
        let detail = json!({ "xi": x, "mc": mc });
        Ok::<_, cellint::Error>(sigma_check("odd-relation.xi5-mc", desc, mc.mean, mc.stderr, x.value, detail))
    }));

    let desc = "xi_5 against plain Monte Carlo (infinite variance, informational)";
    checks.push(
        timed("odd-relation.xi5-mc-plain", desc, || {
            let x = xi_numeric(5, NUMERIC_TOL)?;
            let mc = xi_montecarlo(5, o.samples, o.seed)?;
            let detail = json!({ "xi": x, "mc": mc });
            Ok::<_, cellint::Error>(sigma_check(
                "odd-relation.xi5-mc-plain",
                desc,
                mc.mean,
                mc.stderr,
                x.value,
                detail,
            ))
        })
        .informational(),
    );

    let desc = "the bare-q0 odd display disagrees with the recurrence (informational)";
    checks.push(
        timed("odd-relation.bare-q0", desc, || {
            let bare = xi_odd_bare_q0(3)?;
            let detail = json!({ "bare_q0": bare.to_string(), "recurrence": xi_symbolic(3).to_string() });
            Ok::<_, cellint::Error>(Check::exact(
                "odd-relation.bare-q0",
                desc,
                bare == xi_symbolic(3),
                detail,
            ))
        })
        .informational(),
    );
    checks
}

fn oracle(o: &VerifyOptions) -> Vec<Check> {
    let cfg = o.series();
    let mut checks = Vec::new();

    let desc = "series oracle for xi_2 against zeta(2)";
    checks.push(timed("oracle.series-zeta2", desc, || {
        let r = xi_series(2, &cfg)?;
        let res = (r.estimate.value - ZETA2).abs();
        Ok::<_, cellint::Error>(Check::numeric("oracle.series-zeta2", desc, res, 1e-4, json!(r.estimate)))
    }));

    let per_l: Vec<Vec<Check>> = (2..=5usize)
        .into_par_iter()
        .map(|l| {
            let mut out = Vec::new();
            let id = format!("oracle.series.l{l}");
            let desc = "series oracle against the symbolic value";
            out.push(timed(&id, desc, || {
                let r = xi_series(l, &cfg)?;
                let x = xi_numeric(l, NUMERIC_TOL)?;
                let res = (r.estimate.value - x.value).abs();
                let detail = json!({ "series": r.estimate, "richardson": r.richardson, "xi": x });
                Ok::<_, cellint::Error>(Check::numeric(&id, desc, res, 2e-3, detail))
            }));
            let id = format!("oracle.mc-conditional.l{l}");
            let desc = "conditional Monte Carlo within 3 sigma of the symbolic value";
            out.push(timed(&id, desc, || {
                let x = xi_numeric(l, NUMERIC_TOL)?;
                let mc = xi_montecarlo_conditional(l, o.samples, o.seed)?;
                let detail = json!({ "xi": x, "mc": mc });
                Ok::<_, cellint::Error>(sigma_check(&id, desc, mc.mean, mc.stderr, x.value, detail))
            }));
            let id = format!("oracle.mc-plain.l{l}");
            let desc = "plain Monte Carlo (infinite variance, informational)";
            out.push(
                timed(&id, desc, || {
                    let x = xi_numeric(l, NUMERIC_TOL)?;
                    let mc = xi_montecarlo(l, o.samples, o.seed)?;
                    let detail = json!({ "xi": x, "mc": mc });
                    Ok::<_, cellint::Error>(sigma_check(&id, desc, mc.mean, mc.stderr, x.value, detail))
                })
                .informational(),
            );
            out
        })
        .collect();
    checks.extend(per_l.into_iter().flatten());

    let desc = "seeded Monte Carlo is bit-reproducible";
    checks.push(timed("oracle.reproducible", desc, || {
        let a = xi_montecarlo(3, 100_000, o.seed)?;
        let b = xi_montecarlo(3, 100_000, o.seed)?;
        let pass = a.mean.to_bits() == b.mean.to_bits() && a.stderr.to_bits() == b.stderr.to_bits();
        Ok::<_, cellint::Error>(Check::exact("oracle.reproducible", desc, pass, json!({ "a": a, "b": b })))
    }));

    let desc = "Richardson residual |S(2N) - S(N)| decreases with N for l = 2, 3";
    checks.push(timed("oracle.richardson-residual", desc, || {
        let mut rows = Vec::new();
        let mut pass = true;
        for l in [2usize, 3] {
            let res: Vec<f64> = [250usize, 500, 1000, 2000]
                .iter()
                .map(|&n| (xi_truncated(l, 2 * n) - xi_truncated(l, n)).abs())
                .collect();
            pass &= res.windows(2).all(|w| w[1] < w[0]);
            rows.push(json!({ "l": l, "cutoffs": [250, 500, 1000, 2000], "residuals": res }));
        }
        Ok::<_, cellint::Error>(Check::exact("oracle.richardson-residual", desc, pass, json!(rows)))
    }));
    checks
}

fn zlobin(o: &VerifyOptions) -> Vec<Check> {
    let cfg = o.series();
    let mut checks = Vec::new();
    for l in 2..=4usize {
        for (kind, method, gating) in [
            ("mc-conditional", ZlobinMethod::Conditional { samples: o.samples, seed: o.seed }, true),
            ("mc-plain", ZlobinMethod::MonteCarlo { samples: o.samples, seed: o.seed }, false),
        ] {
            let id = format!("zlobin.{kind}.l{l}");
            let desc = if gating {
                "Monte Carlo within 3 sigma of (l-1)! zeta(l)"
            } else {
                "plain Monte Carlo against (l-1)! zeta(l) (informational)"
            };
            let c = timed(&id, desc, || {
                let r = zlobin_i(l, method)?;
                let t = zlobin_target(l, 1e-12)?;
                let detail = json!({ "result": r, "target": t });
                Ok::<_, cellint::Error>(sigma_check(
                    &id,
                    desc,
                    r.estimate.value,
                    r.estimate.bound,
                    t.value,
                    detail,
                ))
            });
            checks.push(if gating { c } else { c.informational() });
        }
    }
    for l in 2..=5usize {
        let id = format!("zlobin.series.l{l}");
        let desc = "series oracle against (l-1)! zeta(l)";
        checks.push(timed(&id, desc, || {
            let r = zlobin_i(l, ZlobinMethod::Series(cfg))?;
            let t = zlobin_target(l, 1e-12)?;
            let res = (r.estimate.value - t.value).abs();
            Ok::<_, cellint::Error>(Check::numeric(&id, desc, res, 1e-4, json!({ "result": r, "target": t })))
        }));
    }
    checks
}
