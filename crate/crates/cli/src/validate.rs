//! The cross-module invariant suite behind `hopfwind validate`: algebraic
//! identities, the compound-matrix reconstruction oracle (plus a mutation
//! probe showing that oracle actually bites), eigen residuals, synthetic
//! winding loops, and integrator closed forms, all at reduced sizes.

use hopfwind_core::contour::ContourSpec;
use hopfwind_core::model::{
    asymptotic_pair, coefficients, essential_spectrum, field4, field4_infinity, field6,
    field6_infinity, Branch, SpectralPoint, SystemParams, PRESET_HOCKING_STEWARTSON,
};
use hopfwind_core::odeint::{integrate_linear, IntegratorConfig};
use hopfwind_core::oracle::{trace_from_values, winding_number};
use hopfwind_core::phase::geometric_phase;
use hopfwind_core::xalg::{
    det4, eig4, induced_compound, wedge2, wedge4_pair, CMat, CVec, Mat4, Mat6, Vec4, Vec6,
};
use hopfwind_core::Complex64;

pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

struct SplitMix64(u64);

impl SplitMix64 {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 52) as f64 * 2.0 - 1.0
    }

    fn complex(&mut self) -> Complex64 {
        Complex64::new(self.next_f64(), self.next_f64())
    }

    fn vec4(&mut self) -> Vec4 {
        CVec(std::array::from_fn(|_| self.complex()))
    }

    fn mat4(&mut self) -> Mat4 {
        CMat(std::array::from_fn(|_| std::array::from_fn(|_| self.complex())))
    }
}

fn preset() -> SystemParams {
    SystemParams::preset(PRESET_HOCKING_STEWARTSON).unwrap()
}

fn check(name: &'static str, worst: f64, bound: f64) -> Check {
    Check {
        name,
        passed: worst <= bound,
        detail: format!("worst {worst:.3e}, bound {bound:.1e}"),
    }
}

fn wedge_antisymmetry() -> Check {
    let mut rng = SplitMix64(1);
    let mut worst = 0.0f64;
    for _ in 0..64 {
        let u = rng.vec4();
        let v = rng.vec4();
        worst = worst.max((wedge2(&u, &v) + wedge2(&v, &u)).norm());
        worst = worst.max(wedge2(&u, &u).norm());
    }
    check("xalg: wedge antisymmetry", worst, 0.0)
}

fn leibniz_rule() -> Check {
    let mut rng = SplitMix64(2);
    let mut worst = 0.0f64;
    for _ in 0..64 {
        let a = rng.mat4();
        let u = rng.vec4();
        let v = rng.vec4();
        let lhs = induced_compound(&a).mul_vec(&wedge2(&u, &v));
        let rhs = wedge2(&a.mul_vec(&u), &v) + wedge2(&u, &a.mul_vec(&v));
        let scale = (1.0 + a.frobenius_norm()) * (u.norm() * v.norm()).max(1.0);
        worst = worst.max((lhs - rhs).norm() / scale);
    }
    check("xalg: Leibniz rule of the induced compound", worst, 1e-12)
}

fn wedge_pairing_determinant() -> Check {
    let mut rng = SplitMix64(3);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let cols: [Vec4; 4] = std::array::from_fn(|_| rng.vec4());
        let mut m = Mat4::zeros();
        for (j, col) in cols.iter().enumerate() {
            for i in 0..4 {
                m[(i, j)] = col[i];
            }
        }
        let det = det4(&m);
        let paired = wedge4_pair(&wedge2(&cols[0], &cols[1]), &wedge2(&cols[2], &cols[3]));
        worst = worst.max((det - paired).norm() / det.norm().max(1e-9));
    }
    check("xalg: wedge pairing equals the 4x4 determinant", worst, 1e-10)
}

fn compound_reconstruction(params: &SystemParams) -> Check {
    let mut rng = SplitMix64(4);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let x = 6.0 * rng.next_f64();
        let lambda = SpectralPoint(Complex64::new(15.0 * rng.next_f64(), 5.0 * rng.next_f64()));
        let lhs = induced_compound(&field4(x, lambda, params));
        let rhs = field6(x, lambda, params);
        worst = worst.max(entrywise_distance(&lhs, &rhs));
    }
    check("model: compound of the 4x4 field reproduces the 6x6 field", worst, 1e-12)
}

fn entrywise_distance(a: &Mat6, b: &Mat6) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..6 {
        for j in 0..6 {
            worst = worst.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    worst
}

/// Deliberate fault injection: flipping the sign of a31 must break the
/// reconstruction identity, proving the oracle can detect coefficient
/// corruption. Passes when the corrupted mismatch is large.
fn mutation_detector(params: &SystemParams) -> Check {
    let lambda = SpectralPoint(Complex64::new(2.0, 1.0));
    let x = 0.4;
    let q = coefficients(x, lambda, params);
    let mut corrupted = field4(x, lambda, params);
    corrupted[(2, 0)] = -q.a31;
    let mismatch = entrywise_distance(&induced_compound(&corrupted), &field6(x, lambda, params));
    Check {
        name: "model: mutation probe (corrupted a31 breaks the reconstruction)",
        passed: mismatch > 1.0,
        detail: format!("corrupted mismatch {mismatch:.3e}, required > 1"),
    }
}

fn eigen_residuals(params: &SystemParams) -> Check {
    let mut worst = 0.0f64;
    for center in [15.0, 0.0] {
        let spec = ContourSpec::new(Complex64::new(center, 0.0), 0.1, 50).unwrap();
        for lambda in spec.samples() {
            let point = SpectralPoint(lambda);
            let pair = asymptotic_pair(point, params).unwrap();
            let a6 = field6_infinity(point, params);
            for (sigma, x) in [(pair.sigma_plus, pair.x_plus), (pair.sigma_minus, pair.x_minus)] {
                worst = worst.max((a6.mul_vec(&x) - x.scale(sigma)).norm() / x.norm());
            }
            let pairs4 = match eig4(&field4_infinity(point, params)) {
                Ok(p) => p,
                Err(e) => {
                    return Check {
                        name: "model: asymptotic eigen residuals",
                        passed: false,
                        detail: format!("eig4 failed: {e}"),
                    }
                }
            };
            let a4 = field4_infinity(point, params);
            for p in pairs4.iter() {
                worst = worst.max((a4.mul_vec(&p.vector) - p.vector.scale(p.value)).norm());
            }
        }
    }
    check("model: asymptotic eigen residuals", worst, 1e-10)
}

fn synthetic_winding_loops() -> Check {
    let n = 1_000;
    let v = Vec6::from_re([0.8, -0.1, 0.4, 0.2, -0.6, 0.3]);
    let mut worst = 0.0f64;
    for k in -2i32..=3 {
        let samples: Vec<Vec6> = (0..n)
            .map(|j| {
                let angle = 2.0 * std::f64::consts::PI * k as f64 * j as f64 / n as f64;
                v.scale(Complex64::new(0.0, angle).exp())
            })
            .collect();
        worst = worst.max((geometric_phase(&samples) - k as f64).abs());
    }
    check("phase: synthetic winding loops at n = 1000", worst, 1e-3)
}

fn integrator_closed_forms(params: &SystemParams) -> Check {
    let cfg = IntegratorConfig::default();
    let lam = Complex64::new(0.5, 2.0);
    let traj = integrate_linear(|_x, y: &Vec6| y.scale(lam), &Vec6::basis(1), 0.0, 1.0, &cfg)
        .unwrap();
    let mut worst = (traj.last_log_scale() - lam.re).abs();

    let pair = asymptotic_pair(15.0.into(), params).unwrap();
    let a6 = field6_infinity(15.0.into(), params);
    let y0 = pair.x_plus.normalized();
    let traj = integrate_linear(|_x, y: &Vec6| a6.mul_vec(y), &y0, 0.0, 1.0, &cfg).unwrap();
    worst = worst.max((traj.last_log_scale() - pair.sigma_plus.re).abs());
    for state in traj.states.iter() {
        worst = worst.max((*state - y0).norm());
    }
    check("odeint: exponential and eigenvector-flow closed forms", worst, 1e-6)
}

fn argument_principle() -> Check {
    let run = |center: Complex64, f: &dyn Fn(Complex64) -> Complex64| -> i64 {
        let spec = ContourSpec::new(center, 0.1, 64).unwrap();
        let lambdas: Vec<Complex64> = spec.samples().collect();
        let values = lambdas.iter().map(|&z| f(z)).collect();
        winding_number(&trace_from_values(lambdas, values).unwrap()).unwrap()
    };
    let c15 = Complex64::new(15.0, 0.0);
    let simple = run(c15, &|z| z - c15 + Complex64::new(0.02, 0.01));
    let double = run(Complex64::new(0.0, 0.0), &|z| z * z);
    let none = run(Complex64::new(0.0, 0.0), &|_| Complex64::new(1.0, 0.0));
    Check {
        name: "oracle: argument principle on synthetic functions",
        passed: simple == 1 && double == 2 && none == 0,
        detail: format!("windings ({simple}, {double}, {none}), expected (1, 2, 0)"),
    }
}

fn essential_spectrum_symmetry(params: &SystemParams) -> Check {
    let mut worst = 0.0f64;
    for k in 0..=20 {
        let s = 0.5 * k as f64;
        let plus = essential_spectrum(s, Branch::Plus, params);
        let minus = essential_spectrum(s, Branch::Minus, params);
        worst = worst.max((minus - plus.conj()).norm());
    }
    check("model: essential-spectrum branches conjugate", worst, 1e-12)
}

/// Run every check. The caller renders the table and picks the exit code.
pub fn run_all() -> Vec<Check> {
    let params = preset();
    vec![
        wedge_antisymmetry(),
        leibniz_rule(),
        wedge_pairing_determinant(),
        compound_reconstruction(&params),
        mutation_detector(&params),
        eigen_residuals(&params),
        synthetic_winding_loops(),
        integrator_closed_forms(&params),
        argument_principle(),
        essential_spectrum_symmetry(&params),
    ]
}

#[cfg(test)]
mod tests {
    #[test]
    fn fresh_build_passes_every_check() {
        for check in super::run_all() {
            assert!(check.passed, "{} failed: {}", check.name, check.detail);
        }
    }
}
