use alevol::exactla::MatQ;
use alevol::gaugeclassify::{gamma_invariant_numeric, gauge_term, kronheimer_f, ZetaGram};
use alevol::mckay::*;
use alevol::ratpoly::{int, rat};
use alevol::tensorcalc::Mat4;

fn table() -> Vec<AdeLabel> {
    let mut v: Vec<AdeLabel> = (1..=7).map(AdeLabel::A).collect();
    v.extend((4..=8).map(AdeLabel::D));
    v.extend([AdeLabel::E6, AdeLabel::E7, AdeLabel::E8]);
    v
}

#[test]
fn root_counts() {
    for l in table() {
        let n = l.rank();
        let expected = match l {
            AdeLabel::A(_) => n * (n + 1) / 2,
            AdeLabel::D(_) => n * (n - 1),
            AdeLabel::E6 => 36,
            AdeLabel::E7 => 63,
            AdeLabel::E8 => 120,
        };
        assert_eq!(positive_roots(l).len(), expected, "{l}");
    }
}

#[test]
fn killing_is_twice_dual_coxeter_times_cartan() {
    for l in table() {
        let c = l.cartan_matrix();
        let h = l.dual_coxeter() as i64;
        let rows: Vec<&[i64]> = c.iter().map(|r| r.as_slice()).collect();
        let scaled: Vec<Vec<i64>> = c
            .iter()
            .map(|r| r.iter().map(|v| 2 * h * v).collect())
            .collect();
        let scaled_rows: Vec<&[i64]> = scaled.iter().map(|r| r.as_slice()).collect();
        assert_eq!(
            killing_gram(l),
            MatQ::from_i64(&scaled_rows).unwrap(),
            "{l}"
        );
        assert_eq!(MatQ::from_i64(&rows).unwrap().rank(), l.rank());
    }
}

#[test]
fn group_orders_match_table() {
    for l in table() {
        let expected = match l {
            AdeLabel::A(n) => n as usize + 1,
            AdeLabel::D(n) => 4 * (n as usize - 2),
            AdeLabel::E6 => 24,
            AdeLabel::E7 => 48,
            AdeLabel::E8 => 120,
        };
        let s = gamma_spec(l);
        assert_eq!(s.order, expected, "{l}");
        assert!(s.order >= 2);
        let elems = enumerate_group(&generators(l));
        for q in &elems {
            let norm: f64 = q.iter().map(|v| v * v).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn e8_has_120_unit_quaternions() {
    assert_eq!(enumerate_group(&generators(AdeLabel::E8)).len(), 120);
}

#[test]
fn kronheimer_term_is_gamma_invariant() {
    let f = kronheimer_f(&ZetaGram::from_upper([
        int(3),
        rat(1, 2),
        int(-1),
        int(2),
        rat(1, 3),
        int(1),
    ]));
    let l = Mat4::diag([int(3), int(-1), int(-1), int(-1)]);
    let u3 = gauge_term(&l);
    for label in table() {
        let gens = generator_matrices(label);
        assert!(gamma_invariant_numeric(&f, &gens, 1e-9), "{label}");
        if !matches!(label, AdeLabel::A(1)) {
            assert!(!gamma_invariant_numeric(&u3, &gens, 1e-9), "{label}");
        }
    }
}

#[test]
fn volume_is_nonpositive_and_quadratic() {
    for l in table() {
        let s = gamma_spec(l);
        let n = s.rank;
        let z = [
            (0..n).map(|i| rat(i as i64 + 1, 3)).collect::<Vec<_>>(),
            (0..n).map(|i| int(1 - i as i64)).collect(),
            vec![int(0); n],
        ];
        let v1 = renormalized_volume(&s, &PeriodPoint::Coords(z.clone())).unwrap();
        let scaled = z
            .clone()
            .map(|v| v.into_iter().map(|c| c * int(3)).collect());
        let v3 = renormalized_volume(&s, &PeriodPoint::Coords(scaled)).unwrap();
        assert!(v1 < 0.0);
        assert!((v3 / v1 - 9.0).abs() < 1e-12);
        let zero = PeriodPoint::Coords([vec![int(0); n], vec![int(0); n], vec![int(0); n]]);
        assert_eq!(renormalized_volume(&s, &zero).unwrap(), 0.0);
        let g = PeriodPoint::Coords(z).gram(&s).unwrap();
        assert!(g.is_psd());
    }
}

#[test]
fn flow_radius_matches_ode_on_grid() {
    for rho in [2.0, 5.0, 10.0, 100.0] {
        for zn in [0.0, 1.0, 6.0] {
            let tau = flow_radius(rho, zn).unwrap();
            let back = flow_ode(tau, zn, 4000);
            assert!((back - rho).abs() < 1e-9, "rho {rho} |z|^2 {zn}: {back}");
        }
    }
}
