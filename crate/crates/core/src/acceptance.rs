//! The acceptance suite: ten exact checks with wall-clock limits.
//!
//! Shared by the `acceptance` integration test and the CLI `selftest`.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use num_bigint::BigUint;

use crate::bipartite::{phi_kmn, psi_kmn, SortedBipartiteConfig};
use crate::complete::{phi_kn, psi_kn, CompleteConfig};
use crate::enumeration::{
    count_pattern_formula, count_polyominoes_formula, enumerate_pattern, enumerate_polyominoes,
    pattern_word, verify_cyclic_lemma, PatternKind, VerifyMode,
};
use crate::frames::{config_to_framed_pair, pos, Direction, FramedPair, Point};
use crate::graph::{is_parking, is_recurrent, stable_configurations, Configuration, Graph};
use crate::limits::Limits;
use crate::operators::{beta, phi, psi};
use crate::reference::{
    example_graph, parking_by_subsets, recurrent_by_orders, small_graph_family, ClassKey,
};
use crate::words::BinomialWord;

type Check = std::result::Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {:<28} {} in {:.3}s (limit {}s){}",
            self.id,
            self.title,
            if self.passed { "PASS" } else { "FAIL" },
            self.elapsed.as_secs_f64(),
            self.limit.as_secs(),
            if self.detail.is_empty() {
                String::new()
            } else {
                format!(": {}", self.detail)
            }
        )
    }
}

pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    pub limit: Duration,
    check: fn(&Limits) -> Check,
}

impl Criterion {
    pub fn run(&self, limits: &Limits) -> CriterionOutcome {
        let start = Instant::now();
        let result = (self.check)(limits);
        let elapsed = start.elapsed();
        let (passed, detail) = match result {
            Ok(()) if elapsed <= self.limit => (true, String::new()),
            Ok(()) => (false, "time limit exceeded".to_string()),
            Err(e) => (false, e),
        };
        CriterionOutcome {
            id: self.id,
            title: self.title,
            passed,
            detail,
            elapsed,
            limit: self.limit,
        }
    }
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            id: 1,
            title: "example graph psi",
            limit: secs(1),
            check: example_reproduction,
        },
        Criterion {
            id: 2,
            title: "frame measurement",
            limit: secs(1),
            check: frame_measurement,
        },
        Criterion {
            id: 3,
            title: "class walk on K4,6",
            limit: secs(1),
            check: class_walk,
        },
        Criterion {
            id: 4,
            title: "stable intersections",
            limit: secs(1),
            check: stable_intersections,
        },
        Criterion {
            id: 5,
            title: "cyclic lemma, m+n<=9",
            limit: secs(60),
            check: cyclic_lemma,
        },
        Criterion {
            id: 6,
            title: "enumeration formulas",
            limit: secs(120),
            check: enumeration_formulas,
        },
        Criterion {
            id: 7,
            title: "operator laws",
            limit: secs(120),
            check: operator_laws,
        },
        Criterion {
            id: 8,
            title: "bipartite equivalences",
            limit: secs(120),
            check: bipartite_equivalences,
        },
        Criterion {
            id: 9,
            title: "K_n reduction",
            limit: secs(60),
            check: kn_reduction,
        },
        Criterion {
            id: 10,
            title: "translation laws",
            limit: secs(30),
            check: translation_laws,
        },
    ]
}

pub fn run_all(limits: &Limits) -> Vec<CriterionOutcome> {
    criteria().iter().map(|c| c.run(limits)).collect()
}

fn cfg(h: &[i64]) -> Configuration {
    Configuration::new(h.to_vec())
}

fn sc(
    m: usize,
    n: usize,
    a: &[i64],
    b: &[i64],
) -> std::result::Result<SortedBipartiteConfig, String> {
    SortedBipartiteConfig::new(m, n, a.to_vec(), b.to_vec()).map_err(fail)
}

fn example_reproduction(_: &Limits) -> Check {
    let g = example_graph();
    let want = cfg(&[1, 1, 0, 0, 2, 2]);
    for start in [[0, 0, 2, 0, 2, 2], [1, 1, 0, 2, 0, 0]] {
        let got = psi(&g, &cfg(&start)).map_err(fail)?;
        ensure!(got == want, "psi{} = {got}, expected {want}", cfg(&start));
    }
    Ok(())
}

fn frame_measurement(_: &Limits) -> Check {
    let p = FramedPair::parse("ENNENENN", "NNNEENENN", Point::new(2, 7)).map_err(fail)?;
    let got = p.measure();
    let want = sc(4, 6, &[2, 2, 4, 5, 5, 6], &[-4, -1, 1])?;
    ensure!(got == want, "measured {got}, expected {want}");
    Ok(())
}

fn class_walk(_: &Limits) -> Check {
    let mut cur = sc(4, 6, &[1, 2, 2, 3, 3, 3], &[0, 3, 5])?;
    let expected = [
        sc(4, 6, &[0, 0, 1, 1, 1, 3], &[2, 4, 5])?,
        sc(4, 6, &[0, 1, 1, 2, 2, 2], &[0, 3, 5])?,
        sc(4, 6, &[0, 0, 0, 2, 3, 3], &[0, 2, 3])?,
    ];
    let mut grades = vec![crate::bipartite::grade_kmn(&cur).map_err(fail)?];
    for want in &expected {
        cur = phi_kmn(&cur).map_err(fail)?;
        ensure!(&cur == want, "walk reached {cur}, expected {want}");
        grades.push(crate::bipartite::grade_kmn(&cur).map_err(fail)?);
    }
    ensure!(
        phi_kmn(&cur).map_err(fail)? == cur,
        "{cur} is not fixed by phi"
    );
    ensure!(grades == [3, 2, 1, 0], "grades {grades:?}");
    Ok(())
}

fn stable_intersections(_: &Limits) -> Check {
    let p = FramedPair::parse("ENNENENN", "NNNEENENN", Point::ORIGIN).map_err(fail)?;
    let got = p.stable_intersections();
    let want = [(5, 9), (3, 4), (2, 3), (0, 0)].map(|(x, y)| Point::new(x, y));
    ensure!(got == want, "intersections {got:?}");
    ensure!(pos(&p, 8) == 2, "pos(E_8) = {}", pos(&p, 8));
    Ok(())
}

fn cyclic_lemma(limits: &Limits) -> Check {
    let limits = Limits {
        cyclic_sum_cap: limits.cyclic_sum_cap.max(9),
        ..*limits
    };
    for m in 2..=7 {
        for n in 2..=9 - m {
            let r = verify_cyclic_lemma(m, n, VerifyMode::Exhaustive, &limits).map_err(fail)?;
            ensure!(
                r.ok(),
                "(m,n)=({m},{n}): {} parts vs formula {}; {:?}",
                r.parts,
                r.formula,
                r.failures.first()
            );
        }
    }
    Ok(())
}

fn enumeration_formulas(limits: &Limits) -> Check {
    let limits = Limits {
        enumeration_sum_cap: limits.enumeration_sum_cap.max(12),
        ..*limits
    };
    for s in 2..=10 {
        for m in 1..s {
            let n = s - m;
            let f = count_polyominoes_formula(m, n).map_err(fail)?;
            let b = enumerate_polyominoes(m, n, &limits).map_err(fail)?.len();
            ensure!(
                f == BigUint::from(b),
                "Polyo_({m},{n}): formula {f}, brute {b}"
            );
        }
    }
    for a in 1..=3 {
        for b in 1..=3 {
            for c in 1..=3 {
                if c * (a + b) > 10 {
                    continue;
                }
                let f = count_pattern_formula(a, b, c, PatternKind::Simple).map_err(fail)?;
                let p = pattern_word(a, b, c, PatternKind::Simple);
                let got = enumerate_pattern(&p, &limits).map_err(fail)?.len();
                ensure!(
                    f == BigUint::from(got),
                    "simple({a},{b},{c}): formula {f}, brute {got}"
                );
            }
        }
    }
    for a in 1..=5usize {
        for b in 1..=5usize {
            for c in 1..=3usize {
                if a == b || 2 * c * (a + b) > 12 {
                    continue;
                }
                let f = count_pattern_formula(a, b, c, PatternKind::Double).map_err(fail)?;
                let p = pattern_word(a, b, c, PatternKind::Double);
                let got = enumerate_pattern(&p, &limits).map_err(fail)?.len();
                ensure!(
                    f == BigUint::from(got),
                    "double({a},{b},{c}): formula {f}, brute {got}"
                );
            }
        }
    }
    let spot = [
        (count_polyominoes_formula(2, 2), 3u32),
        (count_pattern_formula(1, 1, 3, PatternKind::Simple), 2),
        (count_pattern_formula(1, 2, 1, PatternKind::Double), 3),
    ];
    for (got, want) in spot {
        let got = got.map_err(fail)?;
        ensure!(
            got == BigUint::from(want),
            "spot value {got}, expected {want}"
        );
    }
    Ok(())
}

/// ψ-fixed ⇔ recurrent, φ-fixed ⇔ parking, φβ = βψ, and one recurrent and
/// one parking configuration per toppling class, on one graph.
pub fn operator_laws_on(g: &Graph, limits: &Limits) -> Check {
    let keys = ClassKey::new(g);
    let mut classes: HashMap<Vec<i64>, (usize, usize)> = HashMap::new();
    for c in stable_configurations(g) {
        let up = crate::operators::psi_with_subset(g, &c, limits)
            .map_err(fail)?
            .0;
        let down = crate::operators::phi_with_subset(g, &c, limits)
            .map_err(fail)?
            .0;
        let rec = recurrent_by_orders(g, &c).map_err(fail)?;
        let park = parking_by_subsets(g, &c).map_err(fail)?;
        ensure!((up == c) == rec, "psi-fixed vs recurrent disagree at {c}");
        ensure!((down == c) == park, "phi-fixed vs parking disagree at {c}");
        let lhs = phi(g, &beta(g, &c).map_err(fail)?).map_err(fail)?;
        let rhs = beta(g, &up).map_err(fail)?;
        ensure!(lhs == rhs, "phi.beta != beta.psi at {c}");
        let e = classes.entry(keys.key(&c)).or_default();
        e.0 += rec as usize;
        e.1 += park as usize;
    }
    ensure!(
        classes.len() as i64 == keys.class_count(),
        "{} classes met, det L = {}",
        classes.len(),
        keys.class_count()
    );
    for (key, (r, p)) in classes {
        ensure!(
            r == 1 && p == 1,
            "class {key:?}: {r} recurrent, {p} parking"
        );
    }
    Ok(())
}

fn operator_laws(limits: &Limits) -> Check {
    let family = small_graph_family();
    ensure!(
        family.len() >= 20,
        "family has only {} graphs",
        family.len()
    );
    for (i, g) in family.iter().enumerate() {
        operator_laws_on(g, limits).map_err(|e| format!("graph #{i}: {e}"))?;
    }
    Ok(())
}

fn general_sorted(
    g: &Graph,
    c: &SortedBipartiteConfig,
    op: fn(&Graph, &Configuration) -> crate::error::Result<Configuration>,
) -> std::result::Result<SortedBipartiteConfig, String> {
    let out = op(g, &c.to_configuration()).map_err(fail)?;
    SortedBipartiteConfig::from_configuration(c.m(), c.n(), &out).map_err(fail)
}

fn iterate(
    mut c: SortedBipartiteConfig,
    times: usize,
    op: fn(&SortedBipartiteConfig) -> crate::error::Result<SortedBipartiteConfig>,
) -> std::result::Result<SortedBipartiteConfig, String> {
    for _ in 0..times {
        c = op(&c).map_err(fail)?;
    }
    Ok(c)
}

/// All the `K_{m,n}` equivalences for one `(m, n)`.
pub fn bipartite_equivalences_on(m: usize, n: usize) -> Check {
    let g = Graph::complete_bipartite(m, n).map_err(fail)?;
    for c in SortedBipartiteConfig::all_stable(m, n).map_err(fail)? {
        let alg = phi_kmn(&c).map_err(fail)?;
        let gen = general_sorted(&g, &c, phi)?;
        let frame = config_to_framed_pair(&c).map_err(fail)?;
        let jumped = frame.jump(Direction::Next).map_err(fail)?.measure();
        ensure!(
            alg == gen && gen == jumped,
            "phi at {c}: algorithm {alg}, general {gen}, frame {jumped}"
        );

        let conj = psi_kmn(&c).map_err(fail)?;
        let gen_psi = general_sorted(&g, &c, psi)?;
        let jumped_psi = frame.jump(Direction::Prev).map_err(fail)?.measure();
        ensure!(
            conj == jumped_psi && conj == gen_psi,
            "psi at {c}: conjugated {conj}, general {gen_psi}, frame {jumped_psi}"
        );

        let general = c.to_configuration();
        let rec = is_recurrent(&g, &general).map_err(fail)?;
        let park = is_parking(&g, &general).map_err(fail)?;
        if !rec {
            ensure!(
                phi_kmn(&conj).map_err(fail)? == c,
                "phi(psi(c)) != c at {c}"
            );
        }
        if !park {
            ensure!(psi_kmn(&alg).map_err(fail)? == c, "psi(phi(c)) != c at {c}");
        }

        let grade = crate::bipartite::grade_kmn(&c).map_err(fail)?;
        let parking = crate::bipartite::parking_of(&c).map_err(fail)?;
        let recurrent = crate::bipartite::recurrent_of(&c).map_err(fail)?;
        ensure!(
            iterate(parking, grade, psi_kmn)? == c,
            "psi^grade(parking) != c at {c}"
        );
        ensure!(
            iterate(recurrent, m - 1 - grade, phi_kmn)? == c,
            "phi^(m-1-grade)(recurrent) != c at {c}"
        );
        ensure!(
            frame.is_parking_anchor() == park,
            "pos test for parking disagrees at {c}"
        );
    }
    Ok(())
}

fn bipartite_equivalences(_: &Limits) -> Check {
    for m in 2..=4 {
        for n in 1..=4 {
            bipartite_equivalences_on(m, n).map_err(|e| format!("K{m},{n}: {e}"))?;
        }
    }
    Ok(())
}

fn kn_reduction(_: &Limits) -> Check {
    let g55 = Graph::complete_bipartite(5, 5).map_err(fail)?;
    let u = cfg(&[0, 1, 2, 3, 4, 1, 3, 3, 4]);
    let first = phi(&g55, &u).map_err(fail)?;
    let second = phi(&g55, &first).map_err(fail)?;
    ensure!(
        first == cfg(&[1, 2, 3, 4, 0, 2, 4, 4, 0]),
        "phi(u) = {first}"
    );
    ensure!(first.heights[5..].contains(&0), "phi(u) is 0-free");
    ensure!(
        second == cfg(&[3, 4, 0, 1, 2, 4, 1, 1, 2]),
        "phi^2(u) = {second}"
    );
    let v = CompleteConfig::new(5, vec![0, 2, 2, 3]).map_err(fail)?;
    let r = phi_kn(&v).map_err(fail)?;
    ensure!(r.steps == 2, "k = {}", r.steps);
    let want = CompleteConfig::new(5, vec![3, 0, 0, 1])
        .map_err(fail)?
        .sorted();
    ensure!(r.config == want, "phi(v) = {}", r.config);
    for n in 2..=5 {
        let g = Graph::complete(n).map_err(fail)?;
        for v in CompleteConfig::all_sorted_stable(n).map_err(fail)? {
            let c = v.to_configuration();
            let gp = CompleteConfig::new(n, phi(&g, &c).map_err(fail)?.heights).map_err(fail)?;
            let gs = CompleteConfig::new(n, psi(&g, &c).map_err(fail)?.heights).map_err(fail)?;
            let fp = phi_kn(&v).map_err(fail)?.config;
            let fs = psi_kn(&v).map_err(fail)?.config;
            ensure!(fp == gp.sorted(), "K{n} phi at {v}: {fp} vs {gp}");
            ensure!(fs == gs.sorted(), "K{n} psi at {v}: {fs} vs {gs}");
        }
    }
    Ok(())
}

/// Frame shifts against `T` and the height increments, at every anchor of a
/// three-period window, for one `(m, n)`.
pub fn translation_laws_on(m: usize, n: usize) -> Check {
    let (mi, ni) = (m as i64, n as i64);
    for upper in BinomialWord::all(m - 1, n - 1) {
        for lower in BinomialWord::all(m - 1, n) {
            let base =
                FramedPair::new(upper.clone(), lower.clone(), Point::ORIGIN).map_err(fail)?;
            for x in 0..3 * mi {
                for y in 0..3 * ni {
                    let here = base.with_anchor(Point::new(x, y)).measure();
                    let south = base.with_anchor(Point::new(x, y - 1)).measure();
                    let west = base.with_anchor(Point::new(x - 1, y)).measure();
                    let t_non = here.t_nonsink().map_err(fail)?;
                    let t_sink = here.t_sink().map_err(fail)?;
                    ensure!(
                        south == t_non,
                        "({upper},{lower}) at ({x},{y}): south shift {south} vs {t_non}"
                    );
                    ensure!(
                        west == t_sink,
                        "({upper},{lower}) at ({x},{y}): west shift {west} vs {t_sink}"
                    );
                    ensure!(
                        t_non.total_height() == here.total_height() - 1
                            && t_non.nonsink_height() == here.nonsink_height() - mi,
                        "height laws for the non-sink toppling at {here}"
                    );
                    ensure!(
                        t_sink.total_height() == here.total_height()
                            && t_sink.nonsink_height() == here.nonsink_height() + ni,
                        "height laws for the sink-side toppling at {here}"
                    );
                }
            }
        }
    }
    Ok(())
}

fn translation_laws(_: &Limits) -> Check {
    for m in 2..=4 {
        for n in 1..=4 {
            translation_laws_on(m, n).map_err(|e| format!("K{m},{n}: {e}"))?;
        }
    }
    Ok(())
}
