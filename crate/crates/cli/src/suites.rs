//! Invariant suites behind `verify`. Every check is deterministic: random inputs come from
//! fixed ChaCha seeds and floats are printed with shortest round-trip formatting.

use std::f64::consts::PI;

use alevol::ehnum::{
    default_directions, geometric_grid, perturbed_h_decay, renvol_estimate,
    renvol_remainder_exponent, ros_check, u_expansion_b, EhConfig, AREA_S3_Z2,
};
use alevol::exactla::{independent, SubspaceQ};
use alevol::gaugeclassify::{
    check_kernel_conditions, gauge_term, kronheimer_f, opposite_reduced, reduced_kron_g,
    s4_parameter_basis, su2minus_invariant, tensor_to_coords, u3_matrices, Classifier, Part,
    ZetaGram, DOMAIN_DIM, KERNEL_DIM,
};
use alevol::mckay::{
    flow_ode, flow_radius, gamma_spec, killing_gram, positive_roots, renormalized_volume, AdeLabel,
    PeriodPoint,
};
use alevol::ratpoly::{int, rat, RadialFn, Rational};
use alevol::tensorcalc::{
    bochner_flat, divergence, hessian, laplacian, lie_derivative, trace, LinearVectorField, Mat4,
    Symmetry, TensorField,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::{Check, VerifyReport};

pub const SUITES: [&str; 4] = ["symbolic", "kernel", "mckay", "eh"];

pub fn small_rat(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-9..=9), rng.gen_range(1..=5))
}

pub fn random_gram(rng: &mut ChaCha8Rng) -> ZetaGram {
    ZetaGram::from_upper(std::array::from_fn(|_| small_rat(rng)))
}

pub fn random_mat4(rng: &mut ChaCha8Rng) -> Mat4 {
    let v: Vec<Rational> = (0..16).map(|_| small_rat(rng)).collect();
    Mat4::from_fn(|i, j| v[4 * i + j].clone())
}

/// Random rational combination of the structured kernel basis.
pub fn random_kernel_element(c: &Classifier, rng: &mut ChaCha8Rng) -> TensorField {
    c.structured().iter().fold(
        TensorField::zeros(2, Symmetry::Full).expect("rank 2"),
        |acc, (_, t)| &acc + &t.scale(&small_rat(rng)),
    )
}

fn count(id: &str, ok: impl Iterator<Item = bool>) -> Check {
    let v: Vec<bool> = ok.collect();
    let n = v.iter().filter(|&&b| b).count();
    Check::exact(
        id,
        format!("{n}/{}", v.len()),
        format!("{}/{}", v.len(), v.len()),
    )
}

pub fn run(suite: &str) -> Option<VerifyReport> {
    let checks = match suite {
        "symbolic" => symbolic(),
        "kernel" => kernel(),
        "mckay" => mckay(),
        "eh" => eh(),
        "all" => SUITES
            .iter()
            .flat_map(|s| run(s).expect("known suite").checks)
            .collect(),
        _ => return None,
    };
    Some(VerifyReport::new(suite, checks))
}

pub fn symbolic() -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let fs: Vec<TensorField> = (0..8)
        .map(|_| kronheimer_f(&random_gram(&mut rng)))
        .collect();
    let euler = LinearVectorField::euler();
    let mut out = vec![
        count(
            "symbolic.kron.trace_zero",
            fs.iter().map(|f| trace(f).unwrap().is_zero()),
        ),
        count(
            "symbolic.kron.div_zero",
            fs.iter().map(|f| divergence(f).unwrap().is_zero()),
        ),
        count(
            "symbolic.kron.laplacian_zero",
            fs.iter().map(|f| laplacian(f).is_zero()),
        ),
        count(
            "symbolic.kron.homogeneity",
            fs.iter()
                .map(|f| lie_derivative(&euler, f).unwrap() == f.scale(&int(-2))),
        ),
    ];
    let bochner = (0..9).map(|i| {
        let x = LinearVectorField::new(random_mat4(&mut rng), (i % 3) as u32);
        bochner_flat(&x).is_zero()
    });
    out.push(count("symbolic.bochner_flat", bochner));
    let green = RadialFn::inv_r2_pow(1);
    out.push(Check::flag(
        "symbolic.inv_r2_harmonic",
        trace(&hessian(&green)).unwrap().is_zero(),
    ));
    let mixed =
        (0..4).all(|i| (0..4).all(|j| green.partial(i).partial(j) == green.partial(j).partial(i)));
    out.push(Check::flag("symbolic.mixed_partials_commute", mixed));
    out
}

pub fn kernel() -> Vec<Check> {
    let c = Classifier::shared();
    let mut out = vec![
        Check::exact("kernel.nullity", c.kernel().dim(), KERNEL_DIM),
        Check::exact("kernel.rank", c.rank(), DOMAIN_DIM - KERNEL_DIM),
    ];
    for (p, d) in Part::ALL.iter().zip([1, 6, 9, 5, 5]) {
        out.push(Check::exact(
            &format!("kernel.dim.{}", p.name()),
            c.part(*p).dim(),
            d,
        ));
    }
    let parts: Vec<&SubspaceQ> = Part::ALL.iter().map(|&p| c.part(p)).collect();
    out.push(Check::flag(
        "kernel.parts_independent",
        independent(&parts).unwrap(),
    ));
    out.push(Check::flag(
        "kernel.parts_span_kernel",
        c.structured_span().equals(c.kernel()).unwrap(),
    ));

    let other = Mat4::diag([int(-1), int(1), int(1), int(1)]);
    let moved: Vec<Vec<Rational>> = s4_parameter_basis()
        .iter()
        .map(|z| tensor_to_coords(&opposite_reduced(z, &other).unwrap()).unwrap())
        .collect();
    let moved = SubspaceQ::from_spanning(DOMAIN_DIM, moved).unwrap();
    out.push(Check::flag(
        "kernel.s4minus_reflection_independent",
        moved.equals(c.part(Part::S4Minus)).unwrap(),
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let u12 = c.part(Part::U1).sum(c.part(Part::U2)).unwrap();
    let grams: Vec<ZetaGram> = (0..5).map(|_| random_gram(&mut rng)).collect();
    out.push(count(
        "kernel.kron_minus_reduced_in_U1_U2",
        grams.iter().map(|z| {
            let d = &kronheimer_f(z) - &reduced_kron_g(z);
            u12.contains_vector(&tensor_to_coords(&d).unwrap()).unwrap()
        }),
    ));
    out.push(count(
        "kernel.kron_U1_projection",
        grams.iter().map(|z| {
            let d = c.decompose(&kronheimer_f(z)).unwrap();
            let expected = hessian(&RadialFn::inv_r2_pow(1)).scale(&(-z.trace() / int(6)));
            gauge_term(&d.l1()) == expected
        }),
    ));

    let mut elems: Vec<TensorField> = c.structured().iter().map(|(_, t)| t.clone()).collect();
    elems.extend((0..5).map(|_| random_kernel_element(c, &mut rng)));
    let chars: Vec<_> = elems.iter().map(|h| c.characterize(h).unwrap()).collect();
    out.push(count(
        "kernel.tracefree_equivalence",
        chars.iter().map(|x| x.tracefree_equivalence()),
    ));
    out.push(count(
        "kernel.tangential_equivalence",
        chars.iter().map(|x| x.tangential_equivalence()),
    ));

    let reduced = s4_parameter_basis();
    let inv = grams
        .iter()
        .map(kronheimer_f)
        .chain(reduced.iter().map(reduced_kron_g))
        .map(|h| su2minus_invariant(&h).unwrap());
    out.push(count("kernel.su2minus_invariance", inv));
    out.push(count(
        "kernel.conditions_hold",
        elems.iter().map(|h| check_kernel_conditions(h).is_ok()),
    ));
    out
}

pub fn ade_table() -> Vec<AdeLabel> {
    let mut v: Vec<AdeLabel> = (1..=7).map(AdeLabel::A).collect();
    v.extend((4..=8).map(AdeLabel::D));
    v.extend([AdeLabel::E6, AdeLabel::E7, AdeLabel::E8]);
    v
}

pub fn mckay() -> Vec<Check> {
    let table = ade_table();
    let mut out = vec![count(
        "mckay.positive_root_counts",
        table.iter().map(|&l| {
            let n = l.rank();
            let expected = match l {
                AdeLabel::A(_) => n * (n + 1) / 2,
                AdeLabel::D(_) => n * (n - 1),
                AdeLabel::E6 => 36,
                AdeLabel::E7 => 63,
                AdeLabel::E8 => 120,
            };
            positive_roots(l).len() == expected
        }),
    )];
    out.push(count(
        "mckay.killing_is_2hC",
        table.iter().map(|&l| {
            let k = killing_gram(l);
            let h = int(2 * l.dual_coxeter() as i64);
            let cm = l.cartan_matrix();
            (0..l.rank()).all(|i| (0..l.rank()).all(|j| *k.get(i, j) == &h * int(cm[i][j])))
        }),
    ));
    out.push(count(
        "mckay.group_orders",
        table.iter().map(|&l| {
            let expected = match l {
                AdeLabel::A(n) => n as usize + 1,
                AdeLabel::D(n) => 4 * (n as usize - 2),
                AdeLabel::E6 => 24,
                AdeLabel::E7 => 48,
                AdeLabel::E8 => 120,
            };
            gamma_spec(l).order == expected
        }),
    ));
    let a1 = gamma_spec(AdeLabel::A(1));
    let unit = PeriodPoint::Gram(ZetaGram::diag([int(1), int(0), int(0)]));
    let v = renormalized_volume(&a1, &unit).unwrap();
    out.push(Check::relative(
        "mckay.A1_unit_volume",
        v,
        -PI * PI / 6.0,
        4.0 * f64::EPSILON,
    ));
    let scaled = PeriodPoint::Gram(ZetaGram::diag([int(1), int(0), int(0)]).scale(&int(4)));
    let v4 = renormalized_volume(&a1, &scaled).unwrap();
    out.push(Check::relative(
        "mckay.volume_quadratic_in_zeta",
        v4 / v,
        4.0,
        1e-15,
    ));
    let mut worst = 0.0f64;
    for rho in [2.0, 5.0, 10.0, 100.0] {
        for zn in [0.0, 1.0, 6.0] {
            let tau = flow_radius(rho, zn).unwrap();
            worst = worst.max((flow_ode(tau, zn, 4000) - rho).abs());
        }
    }
    out.push(Check::at_most("mckay.flow_radius_vs_ode", worst, 1e-9));
    out
}

pub fn eh() -> Vec<Check> {
    let mut out = Vec::new();
    let mut vols = Vec::new();
    for a in [0.5, 1.0, 2.0] {
        let cfg = EhConfig::new(a).unwrap();
        let grid = geometric_grid(10.0 * a, 1e4 * a, 32).unwrap();
        let e = renvol_estimate(&cfg, &grid).unwrap();
        let exact = -PI * PI * a.powi(4) / 12.0;
        out.push(Check::relative(
            &format!("eh.renvol.a={a}"),
            e.value,
            exact,
            1e-6,
        ));
        out.push(Check::at_most(
            &format!("eh.renvol.residual.a={a}"),
            e.rel_residual,
            1e-8,
        ));
        out.push(Check::negative(
            &format!("eh.renvol.negative.a={a}"),
            e.value,
        ));
        let b = u_expansion_b(&cfg, &grid).unwrap();
        out.push(Check::relative(
            &format!("eh.b_relation.a={a}"),
            b.b * AREA_S3_Z2,
            -4.0 * e.value,
            1e-6,
        ));
        if a == 1.0 {
            out.push(Check::relative("eh.b.a=1", b.b, 1.0 / 3.0, 1e-6));
        }
        vols.push(e.value);
    }
    out.push(Check::relative(
        "eh.renvol.scaling",
        vols[2] / vols[1],
        16.0,
        1e-9,
    ));
    let cfg = EhConfig::new(1.0).unwrap();
    let p = renvol_remainder_exponent(&cfg, &geometric_grid(10.0, 1000.0, 24).unwrap()).unwrap();
    out.push(Check::relative(
        "eh.renvol.remainder_exponent",
        p,
        4.0,
        0.05,
    ));

    let flat = EhConfig::new(0.0).unwrap();
    let eq = [1.0, 10.0, 100.0].iter().map(|&rho| {
        let r = ros_check(&flat, rho).unwrap();
        r.ok && ((r.lhs - r.rhs) / r.rhs).abs() <= 1e-12
    });
    out.push(count("eh.ros.equality_flat", eq));
    let strict = [10.0, 100.0, 1000.0].iter().map(|&rho| {
        let r = ros_check(&cfg, rho).unwrap();
        r.ok && r.lhs < r.rhs
    });
    out.push(count("eh.ros.strict_a=1", strict));

    out.extend(decay_checks());
    out
}

pub fn decay_checks() -> Vec<Check> {
    let grid = geometric_grid(10.0, 1e4, 25).unwrap();
    let dirs = default_directions();
    let one = int(1);
    let zero = perturbed_h_decay(
        &TensorField::zeros(2, Symmetry::Full).unwrap(),
        &grid,
        &dirs,
        &one,
    )
    .unwrap();
    let worst_zero = zero
        .max_deviation
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let mut out = vec![Check::exact(
        "eh.decay.zero_perturbation",
        crate::report::num(worst_zero),
        "0",
    )];
    let plus = s4_parameter_basis()
        .iter()
        .map(|z| {
            perturbed_h_decay(&reduced_kron_g(z), &grid, &dirs, &one)
                .unwrap()
                .exponent
        })
        .fold(f64::INFINITY, f64::min);
    let u3: Vec<f64> = u3_matrices()
        .iter()
        .map(|l| {
            perturbed_h_decay(&gauge_term(l), &grid, &dirs, &one)
                .unwrap()
                .exponent
        })
        .collect();
    let u3_max = u3.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let u3_min = u3.iter().cloned().fold(f64::INFINITY, f64::min);
    out.push(Check::at_least(
        "eh.decay.reduced_kronheimer_min",
        plus,
        4.8,
    ));
    out.push(Check::at_most("eh.decay.u3_max", u3_max, 4.2));
    out.push(Check::at_least("eh.decay.u3_min", u3_min, 3.8));
    out.push(Check::at_least("eh.decay.gap", plus - u3_max, 0.6));
    let mixed = &reduced_kron_g(&ZetaGram::unit_sym(0, 1)) + &gauge_term(&u3_matrices()[0]);
    let m = perturbed_h_decay(&mixed, &grid, &dirs, &one)
        .unwrap()
        .exponent;
    out.push(Check::at_most("eh.decay.mixed_with_u3", m, 4.3));
    out
}
