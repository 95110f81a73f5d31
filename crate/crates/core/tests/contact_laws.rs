use std::f64::consts::PI;

use approx::assert_relative_eq;
use floes_core::contact::{cross, pair_force_torque};
use floes_core::{Domain, FloeParams, FloeState, MaterialInputs, MaterialParams, Vec2};
use proptest::prelude::*;

fn materials() -> MaterialParams {
    MaterialParams::new(&MaterialInputs::default(), 1e-3).unwrap()
}

/// Independent transcription of the pair law, working on plain arrays.
#[allow(clippy::too_many_arguments)]
fn naive_force(
    xi: [f64; 2],
    vi: [f64; 2],
    wi: f64,
    ri: f64,
    hi: f64,
    xj: [f64; 2],
    vj: [f64; 2],
    wj: f64,
    rj: f64,
    hj: f64,
    len: f64,
) -> ([f64; 2], [f64; 2], f64, f64) {
    let (e, nu, er, mu, vstar, tcmax) = (1e4, 0.7, 0.15f64, 0.2, 1e-6, 1e-2);
    let ee = e / (2.0 * (1.0 - nu * nu));
    let ge = e / (4.0 * (2.0 + nu) * (1.0 - nu));
    let eta = er.ln() / (er.ln() * er.ln() + PI * PI).sqrt();
    let mut dx = xj[0] - xi[0];
    let mut dy = xj[1] - xi[1];
    dx -= len * (dx / len).round();
    dy -= len * (dy / len).round();
    let d = (dx * dx + dy * dy).sqrt();
    let n = [dx / d, dy / d];
    let t = [-n[1], n[0]];
    let delta = d - (ri + rj);
    if delta >= 0.0 {
        return ([0.0; 2], [0.0; 2], 0.0, 0.0);
    }
    let mi = PI * ri * ri * hi;
    let mj = PI * rj * rj * hj;
    let he = hi.min(hj);
    let re = ri * rj / (ri + rj);
    let me = mi * mj / (mi + mj);
    let x = delta * re / (2.0 * he * he);
    let g = (0.9117 * x * x - 0.2722 * x + 0.003324) / (x * x - 1.524 * x + 0.03159);
    let k1 = PI * ee * he * g;
    let k2 = eta * (5.0 * k1 * me).sqrt();
    let k3 = 6.0 * ge / ee * k1;
    let dv = [vi[0] - vj[0], vi[1] - vj[1]];
    let speed = (dv[0] * dv[0] + dv[1] * dv[1]).sqrt();
    let tc = (2.94 * (me / k1).powf(0.4) * (speed + vstar).powf(-0.2)).min(tcmax);
    let sigma_t = -(dv[0] * t[0] + dv[1] * t[1]) - rj * wj - ri * wi;
    let fnm = k1 * delta + k2 * (dv[0] * n[0] + dv[1] * n[1]);
    let f_n = [fnm * n[0], fnm * n[1]];
    let ftm = k3 * tc * sigma_t;
    let zeta = if ftm.abs() <= mu * fnm.abs() { 1.0 } else { mu * fnm.abs() / ftm.abs() };
    let f_t = [zeta * ftm * t[0], zeta * ftm * t[1]];
    let nxft = n[0] * f_t[1] - n[1] * f_t[0];
    (f_n, f_t, ri * nxft, rj * nxft)
}

fn floe(r: f64, h: f64, m: &MaterialParams) -> FloeParams {
    FloeParams::from_materials(r, h, m).unwrap()
}

prop_compose! {
    fn pair()(ri in 0.02f64..0.5, rj in 0.02f64..0.5, hi in 0.3f64..3.0, hj in 0.3f64..3.0,
              frac in 0.3f64..1.2, phi in 0.0f64..(2.0 * PI),
              cx in -3.0f64..3.0, cy in -3.0f64..3.0,
              v in prop::array::uniform4(-2.0f64..2.0), w in prop::array::uniform2(-3.0f64..3.0))
        -> ([f64; 6], [f64; 6], f64)
    {
        let d = frac * (ri + rj);
        ([cx, cy, v[0], v[1], w[0], ri], [cx + d * phi.cos(), cy + d * phi.sin(), v[2], v[3], w[1], rj], hi / hj)
    }
}

fn build(
    a: [f64; 6],
    b: [f64; 6],
    h_ratio: f64,
    dom: &Domain,
    m: &MaterialParams,
) -> ((FloeParams, FloeState), (FloeParams, FloeState)) {
    let (hi, hj) = if h_ratio >= 1.0 { (h_ratio, 1.0) } else { (1.0, 1.0 / h_ratio) };
    let pi = floe(a[5], hi, m);
    let pj = floe(b[5], hj, m);
    let si = FloeState::new(dom, Vec2::new(a[0], a[1]), Vec2::new(a[2], a[3]), 0.0, a[4]);
    let sj = FloeState::new(dom, Vec2::new(b[0], b[1]), Vec2::new(b[2], b[3]), 0.0, b[4]);
    ((pi, si), (pj, sj))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn antisymmetric_and_capped((a, b, hr) in pair()) {
        let dom = Domain::periodic_square_pi();
        let m = materials();
        let ((pi, si), (pj, sj)) = build(a, b, hr, &dom, &m);
        let fij = pair_force_torque((0, &si, &pi), (1, &sj, &pj), &m, &dom).unwrap();
        let fji = pair_force_torque((1, &sj, &pj), (0, &si, &pi), &m, &dom).unwrap();
        prop_assert_eq!(fij.normal_force, -fji.normal_force);
        prop_assert_eq!(fij.tangential_force, -fji.tangential_force);
        prop_assert_eq!(fij.torque_i, fji.torque_j);
        prop_assert!(fij.tangential_force.norm() <= m.friction * fij.normal_force.norm());
        if fij.friction_scale < 1.0 {
            let cap = m.friction * fij.normal_force.norm();
            prop_assert!((fij.tangential_force.norm() - cap).abs() <= 1e-12 * cap);
        }
        prop_assert!(fij.k_damping <= 0.0 && fij.k_normal >= 0.0 && fij.k_tangential >= 0.0);
        if fij.in_contact() {
            prop_assert!(fij.k_damping < 0.0 && fij.k_normal > 0.0);
        }
        prop_assert!(fij.normal_dissipation(si.velocity, sj.velocity) <= 0.0);
        prop_assert!(fij.tangential_dissipation() <= 0.0);
    }

    #[test]
    fn matches_naive_transcription((a, b, hr) in pair()) {
        let dom = Domain::periodic_square_pi();
        let m = MaterialParams::new(&MaterialInputs { t_c_max: Some(1e-2), ..MaterialInputs::default() }, 1e-3).unwrap();
        let ((pi, si), (pj, sj)) = build(a, b, hr, &dom, &m);
        let c = pair_force_torque((0, &si, &pi), (1, &sj, &pj), &m, &dom).unwrap();
        let (f_n, f_t, ti, tj) = naive_force(
            [si.position.x, si.position.y], [a[2], a[3]], a[4], pi.radius(), pi.thickness(),
            [sj.position.x, sj.position.y], [b[2], b[3]], b[4], pj.radius(), pj.thickness(),
            2.0 * PI,
        );
        let scale = 1.0 + c.normal_force.norm();
        prop_assert!((c.normal_force - Vec2::new(f_n[0], f_n[1])).norm() <= 1e-10 * scale);
        prop_assert!((c.tangential_force - Vec2::new(f_t[0], f_t[1])).norm() <= 1e-10 * scale);
        prop_assert!((c.torque_i - ti).abs() <= 1e-10 * scale);
        prop_assert!((c.torque_j - tj).abs() <= 1e-10 * scale);
    }

    #[test]
    fn torque_residual_is_second_order((a, b, hr) in pair()) {
        // in free space x_i × f + x_j × (-f) + τ_i + τ_j = -δ (n × f_t)
        let dom = Domain::open([-10.0, -10.0], [10.0, 10.0]).unwrap();
        let m = materials();
        let ((pi, si), (pj, sj)) = build(a, b, hr, &dom, &m);
        let c = pair_force_torque((0, &si, &pi), (1, &sj, &pj), &m, &dom).unwrap();
        let f = c.force();
        let residual = cross(si.unwrapped, f) - cross(sj.unwrapped, f) + c.torque_i + c.torque_j;
        let delta = c.geometry.overlap.min(0.0);
        let expected = -delta * cross(c.geometry.normal, c.tangential_force);
        let size = f.norm() * (si.unwrapped.norm() + sj.unwrapped.norm() + 1.0);
        prop_assert!((residual - expected).abs() <= 1e-12 * size);
        // bounded by κ₁δ² whenever the tangential force is below the elastic scale
        if c.tangential_force.norm() <= c.k_normal * delta.abs() {
            prop_assert!(residual.abs() <= c.k_normal * delta * delta * (1.0 + 1e-9) + 1e-12 * size);
        }
    }
}

#[test]
fn pure_spin_brakes_both_floes() {
    let dom = Domain::periodic_square_pi();
    let m = materials();
    let p = floe(1.0, 1.0, &m);
    let si = FloeState::new(&dom, Vec2::new(-0.99, 0.0), Vec2::zeros(), 0.0, 1.0);
    let sj = FloeState::new(&dom, Vec2::new(0.99, 0.0), Vec2::zeros(), 0.0, 1.0);
    let c = pair_force_torque((0, &si, &p), (1, &sj, &p), &m, &dom).unwrap();
    assert_relative_eq!(c.slip_rate, -2.0, max_relative = 1e-15);
    assert!(c.torque_i < 0.0 && c.torque_j < 0.0);
    assert_relative_eq!(c.torque_i, c.torque_j);
}

#[test]
fn head_on_has_no_tangential_force() {
    let dom = Domain::periodic_square_pi();
    let m = materials();
    let p = floe(0.5, 1.0, &m);
    let si = FloeState::new(&dom, Vec2::new(-0.45, 0.0), Vec2::new(1.0, 0.0), 0.0, 0.0);
    let sj = FloeState::new(&dom, Vec2::new(0.45, 0.0), Vec2::new(-1.0, 0.0), 0.0, 0.0);
    let c = pair_force_torque((0, &si, &p), (1, &sj, &p), &m, &dom).unwrap();
    assert_eq!(c.tangential_force, Vec2::zeros());
    let expect = c.k_normal * c.geometry.overlap + 2.0 * c.k_damping;
    assert_relative_eq!(c.normal_force.x, expect, max_relative = 1e-14);
    // damping adds to the repulsion while approaching
    assert!(c.normal_force.x < c.k_normal * c.geometry.overlap);
}
