//! Cross-check of the wedge-coordinate Evans construction against the plain
//! 4x4 determinant formulation: two unstable solutions carried forward, two
//! stable solutions carried backward, matched at x = 0 through det[u1 u2 s1 s2].
//! Both formulations must report the same winding around the contour.

use hopfwind_core::contour::ContourSpec;
use hopfwind_core::model::{
    field4, field4_infinity, SpectralPoint, SystemParams, PRESET_HOCKING_STEWARTSON,
};
use hopfwind_core::odeint::{integrate_linear, IntegratorConfig};
use hopfwind_core::oracle::{count_eigenvalues, trace_from_values, winding_number};
use hopfwind_core::xalg::{det4, eig4, CMat, Vec4};
use hopfwind_core::Complex64;

/// Phase-fix an eigenvector so its first component is real positive; the
/// analytic eigenvectors of the block-companion asymptotic matrix have a
/// nonvanishing first component on these contours, so this picks the
/// continuous section up to a positive real scalar.
fn phase_fixed(v: &Vec4) -> Vec4 {
    let lead = v[0];
    assert!(lead.norm() > 1e-6, "leading component too small to fix the phase");
    v.scale(lead.conj().scale(1.0 / lead.norm()))
}

#[test]
fn determinant_formulation_agrees_with_wedge_winding() {
    let params = SystemParams::preset(PRESET_HOCKING_STEWARTSON).unwrap();
    let n = 256;
    let spec = ContourSpec::new(Complex64::new(15.0, 0.0), 0.1, n).unwrap();
    let (x0, x1) = (-10.0, 10.0);
    let cfg = IntegratorConfig { rel_tol: 1e-8, abs_tol: 1e-10, h_store: 5.0, ..Default::default() };

    let mut values = Vec::with_capacity(n);
    for lambda in spec.samples() {
        let point = SpectralPoint(lambda);
        let pairs = eig4(&field4_infinity(point, &params)).unwrap();
        // two unstable spatial modes (Re > 0), two stable; ordered by Im so
        // the labelling is continuous along the contour
        let mut unstable: Vec<_> = pairs.iter().filter(|p| p.value.re > 0.0).collect();
        let mut stable: Vec<_> = pairs.iter().filter(|p| p.value.re < 0.0).collect();
        assert_eq!(unstable.len(), 2);
        assert_eq!(stable.len(), 2);
        unstable.sort_by(|a, b| a.value.im.total_cmp(&b.value.im));
        stable.sort_by(|a, b| a.value.im.total_cmp(&b.value.im));

        let forward = |seed: &Vec4| {
            let leg_cfg = IntegratorConfig { h_store: (-x0) / 2.0, ..cfg };
            integrate_linear(
                |x, y: &Vec4| field4(x, point, &params).mul_vec(y),
                seed,
                x0,
                0.0,
                &leg_cfg,
            )
            .unwrap()
        };
        let backward = |seed: &Vec4| {
            let leg_cfg = IntegratorConfig { h_store: x1 / 2.0, ..cfg };
            integrate_linear(
                |t, y: &Vec4| -(field4(x1 - t, point, &params).mul_vec(y)),
                seed,
                0.0,
                x1,
                &leg_cfg,
            )
            .unwrap()
        };

        let u1 = forward(&phase_fixed(&unstable[0].vector));
        let u2 = forward(&phase_fixed(&unstable[1].vector));
        let s1 = backward(&phase_fixed(&stable[0].vector));
        let s2 = backward(&phase_fixed(&stable[1].vector));

        let mut frame = CMat::<4>::zeros();
        for (col, leg) in [&u1, &u2, &s1, &s2].into_iter().enumerate() {
            let state = leg.last_state();
            for row in 0..4 {
                frame[(row, col)] = state[row];
            }
        }
        values.push(det4(&frame));
    }

    let lambdas: Vec<Complex64> = spec.samples().collect();
    let det_trace = trace_from_values(lambdas, values).unwrap();
    let det_winding = winding_number(&det_trace).unwrap();

    let wedge_winding = count_eigenvalues(&spec, &params, x0, x1, &cfg).unwrap();
    assert_eq!(det_winding, wedge_winding);
    assert_eq!(wedge_winding, 1);
}
