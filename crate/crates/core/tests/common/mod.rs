#![allow(dead_code)]

use proptest::test_runner::{Config, RngSeed};
use scatterlab::csd::ScatteringDiagram;
use scatterlab::dilogprod::Factor;
use scatterlab::lattice::MTilde;
use scatterlab::rat::{parse_q, q, Q};
use scatterlab::seriesrep::TruncatedSeries;
use scatterlab::Error;

/// Parses a product written as `[a,b]^c[d,e]...` (missing exponents are 1).
pub fn product(s: &str) -> Vec<Factor> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        assert!(rest.starts_with('['), "bad product text near {rest}");
        let close = rest.find(']').unwrap();
        let n: Vec<i64> = rest[1..close].split(',').map(|x| x.trim().parse().unwrap()).collect();
        rest = &rest[close + 1..];
        let c = if let Some(r) = rest.strip_prefix('^') {
            let end = r.find('[').unwrap_or(r.len());
            let c = parse_q(&r[..end]).unwrap();
            rest = &r[end..];
            c
        } else {
            parse_q("1").unwrap()
        };
        out.push(Factor::new(n, c));
        rest = rest.trim_start();
    }
    out
}

/// Property-test configuration with a fixed seed and no failure files.
pub fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(scatterlab::cones::base_seed()),
        failure_persistence: None,
        ..Config::default()
    }
}

/// A rational with a fixed odd denominator, keeping random points off lattice hyperplanes.
pub fn rq(num: i64) -> Q {
    q(num, 97)
}

/// Theta at `q_end`, moving to the suggested nearby endpoint if the first is not general.
pub fn theta_near(d: &ScatteringDiagram, m0: &MTilde, q_end: &[Q], level: i64) -> TruncatedSeries {
    let mut point = q_end.to_vec();
    for _ in 0..8 {
        match scatterlab::theta::theta(d, m0, &point, level) {
            Ok(t) => return t,
            Err(Error::NotGeneral { suggestion: Some(z), .. }) => point = z,
            Err(e) => panic!("theta failed at {point:?}: {e}"),
        }
    }
    panic!("no general endpoint near {q_end:?}")
}
