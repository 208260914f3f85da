mod common;

use common::{build, derivation, derivation_terms, ring, terms, PRIMES};
use pfol_core::algebra::{parse_poly, Poly};
use pfol_core::birational::{discrepancy_report, weighted_blowup_chart, DifferentialForm, Tower, TowerStep};
use pfol_core::derivation::Derivation;
use proptest::prelude::*;

fn coprime_weights(a: u32, b: u32) -> bool {
    (1..=a.min(b)).rev().find(|g| a.is_multiple_of(*g) && b.is_multiple_of(*g)) == Some(1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn pullback_is_functorial(
        w1 in (1u32..4, 1u32..6),
        w2 in (1u32..4, 1u32..6),
        c in 0i64..3,
        dt in derivation_terms(2, 2, 2),
        omega in (terms(2, 2, 2), terms(2, 2, 2)),
    ) {
        prop_assume!(coprime_weights(w1.0, w1.1) && coprime_weights(w2.0, w2.1));
        for p in PRIMES {
            let r = ring(p, &["x", "y"]);
            let steps = [TowerStep { weights: w1, center: (0, 0) }, TowerStep { weights: w2, center: (c, 0) }];
            let tower = Tower::from_steps(&r, &steps).unwrap();
            let (m1, m2) = (&tower.charts()[0], &tower.charts()[1]);
            let m = tower.composite().unwrap();
            let d = derivation(&r, &dt);
            if !d.is_zero() {
                prop_assert_eq!(
                    m2.pullback_derivation(&m1.pullback_derivation(&d).unwrap()).unwrap(),
                    m.pullback_derivation(&d).unwrap()
                );
            }
            let w = DifferentialForm::one_form(&r, vec![build(&r, &omega.0), build(&r, &omega.1)]).unwrap();
            prop_assert_eq!(w.pullback(m1).unwrap().pullback(m2).unwrap(), w.pullback(&m).unwrap());
            let vol = DifferentialForm::volume(&r);
            prop_assert_eq!(vol.pullback(m1).unwrap().pullback(m2).unwrap(), vol.pullback(&m).unwrap());
        }
    }

    #[test]
    fn pairing_is_preserved(
        w in (1u32..5, 1u32..9),
        dt in derivation_terms(2, 2, 3),
        omega in (terms(2, 2, 3), terms(2, 2, 3)),
    ) {
        prop_assume!(coprime_weights(w.0, w.1));
        for p in PRIMES {
            let r = ring(p, &["x", "y"]);
            let v = derivation(&r, &dt);
            if v.is_zero() {
                continue;
            }
            let m = weighted_blowup_chart(&r, w).unwrap();
            let form = DifferentialForm::one_form(&r, vec![build(&r, &omega.0), build(&r, &omega.1)]).unwrap();
            let lhs = form.pullback(&m).unwrap().pair(&m.pullback_derivation(&v).unwrap()).unwrap();
            let rhs = m.pull_rational(&form.pair(&v).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}

/// Fields with `ω(D) = 1` have nonnegative discrepancy along every
/// exceptional divisor of every tower of (1, b) blow-ups of depth ≤ 3.
#[test]
fn certified_fields_have_nonnegative_discrepancies_on_all_small_towers() {
    for p in PRIMES {
        let r = ring(p, &["x", "y"]);
        let fields = [
            ("d/dx", ["1", "0"]),
            ("d/dy", ["0", "1"]),
            ("d/dx + y*d/dy", ["1", "0"]),
            ("(1 + x)*d/dx + x^2*d/dy", ["1", "0"]),
        ];
        for (src, omega) in fields {
            let d = Derivation::parse(&r, src).unwrap();
            let omega: Vec<Poly> = omega.iter().map(|s| parse_poly(&r, s).unwrap()).collect();
            if !d.canonical_certificate(&omega).unwrap() {
                // (1 + x) is not a unit; this field is only checked when certified
                continue;
            }
            let fol = d.saturate().unwrap();
            let bs: Vec<u32> = (1..=p as u32 + 1).collect();
            let mut towers: Vec<Vec<u32>> = bs.iter().map(|&b| vec![b]).collect();
            for _ in 1..3 {
                let next: Vec<Vec<u32>> = towers
                    .iter()
                    .filter(|t| t.len() == towers.last().unwrap().len())
                    .flat_map(|t| bs.iter().map(move |&b| [t.clone(), vec![b]].concat()))
                    .collect();
                towers.extend(next);
            }
            for t in &towers {
                let steps: Vec<TowerStep> = t.iter().map(|&b| TowerStep { weights: (1, b), center: (0, 0) }).collect();
                let tower = Tower::from_steps(&r, &steps).unwrap();
                for (label, disc) in discrepancy_report(&tower, Some(&fol)).unwrap() {
                    let a = disc.foliated.unwrap();
                    assert!(a >= 0, "p = {p}, {src}, weights {t:?}: a({label}) = {a}");
                }
            }
        }
    }
}

#[test]
fn frobenius_weight_chart_jacobian_loses_the_middle_term() {
    for p in PRIMES {
        let r = ring(p, &["x", "y"]);
        let m = weighted_blowup_chart(&r, (1, p as u32)).unwrap();
        let j = m.jacobian();
        let s = m.source();
        assert!(j[0][1].is_zero() && j[1][0].is_zero(), "p·s^(p-1)·t must vanish");
        assert!(j[0][0].is_one());
        assert_eq!(j[1][1], parse_poly(s, &format!("s^{p}")).unwrap());
    }
}
