//! Special functions and numerical kernels used by the equations of state:
//! the exponential integral, adaptive Gauss–Kronrod quadrature, and a
//! monotone cubic Hermite table.

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Exponential integral `E1(x) = ∫_x^∞ e^{-r}/r dr` for `x > 0`.
///
/// Power series below `x = 1`, modified Lentz continued fraction above.
pub fn exp_integral_e1(x: f64) -> f64 {
    if x <= 0.0 {
        return f64::INFINITY;
    }
    if x <= 1.0 {
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..200 {
            let kf = k as f64;
            term *= -x / kf;
            let add = term / kf;
            sum += add;
            if add.abs() < 1e-17 * sum.abs().max(1e-300) {
                break;
            }
        }
        -EULER_GAMMA - x.ln() - sum
    } else {
        let tiny = 1e-300;
        let mut b = x + 1.0;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..500 {
            let an = -((i * i) as f64);
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        h * (-x).exp()
    }
}

// Gauss–Kronrod 7/15 abscissae and weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let fsum = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * fsum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * fsum;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Globally adaptive Gauss–Kronrod integration of `f` over `[a, b]`.
///
/// Bisects the interval with the largest error estimate until the summed
/// estimate drops below `rel_tol * |result|` (or an absolute floor).
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    let mut intervals: Vec<(f64, f64, f64, f64)> = Vec::with_capacity(64);
    let (v, e) = gk15(&f, a, b);
    intervals.push((a, b, v, e));
    for _ in 0..4000 {
        let total: f64 = intervals.iter().map(|iv| iv.2).sum();
        let err: f64 = intervals.iter().map(|iv| iv.3).sum();
        if err <= rel_tol * total.abs() || err < 1e-300 {
            break;
        }
        let (worst, _) = intervals
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, iv)| if iv.3 > acc.1 { (i, iv.3) } else { acc });
        let (lo, hi, _, _) = intervals.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        intervals.push((lo, mid, v1, e1));
        intervals.push((mid, hi, v2, e2));
    }
    // summed in interval order for reproducibility
    intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
    intervals.iter().map(|iv| iv.2).sum()
}

/// Cubic Hermite table on a uniform grid with exact nodal slopes,
/// limited (Fritsch–Carlson) so that monotone data stay monotone.
#[derive(Debug, Clone)]
pub struct MonotoneCubicTable {
    start: f64,
    step: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubicTable {
    pub fn build<F: Fn(f64) -> (f64, f64)>(start: f64, end: f64, nodes: usize, f: F) -> Self {
        assert!(nodes >= 2 && end > start);
        let step = (end - start) / (nodes - 1) as f64;
        let (values, mut slopes): (Vec<f64>, Vec<f64>) =
            (0..nodes).map(|i| f(start + step * i as f64)).unzip();
        for i in 0..nodes - 1 {
            let secant = (values[i + 1] - values[i]) / step;
            if secant == 0.0 {
                slopes[i] = 0.0;
                slopes[i + 1] = 0.0;
                continue;
            }
            let a = slopes[i] / secant;
            let b = slopes[i + 1] / secant;
            let r2 = a * a + b * b;
            if r2 > 9.0 {
                let tau = 3.0 / r2.sqrt();
                slopes[i] = tau * a * secant;
                slopes[i + 1] = tau * b * secant;
            }
        }
        Self { start, step, values, slopes }
    }

    pub fn contains(&self, y: f64) -> bool {
        y >= self.start && y <= self.start + self.step * (self.values.len() - 1) as f64
    }

    /// Interpolated value and derivative at `y` (caller checks `contains`).
    pub fn eval(&self, y: f64) -> (f64, f64) {
        let last = self.values.len() - 2;
        let pos = (y - self.start) / self.step;
        let i = (pos.floor().max(0.0) as usize).min(last);
        let t = pos - i as f64;
        let h = self.step;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.slopes[i] * h, self.slopes[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        let value = (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * m0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * m1;
        let deriv = ((6.0 * t2 - 6.0 * t) * y0
            + (3.0 * t2 - 4.0 * t + 1.0) * m0
            + (-6.0 * t2 + 6.0 * t) * y1
            + (3.0 * t2 - 2.0 * t) * m1)
            / h;
        (value, deriv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e1_matches_reference_values() {
        // Abramowitz & Stegun table 5.1
        assert!((exp_integral_e1(1.0) - 0.219_383_934_395_520_3).abs() < 1e-14);
        assert!((exp_integral_e1(0.5) - 0.559_773_594_776_160_8).abs() < 1e-14);
        assert!((exp_integral_e1(2.0) - 0.048_900_510_708_061_12).abs() < 1e-15);
        assert!((exp_integral_e1(10.0) - 4.156_968_929_685_324e-6).abs() < 1e-18);
    }

    #[test]
    fn e1_is_continuous_across_branch_switch() {
        let below = exp_integral_e1(1.0 - 1e-12);
        let above = exp_integral_e1(1.0 + 1e-12);
        assert!((below - above).abs() < 1e-11);
    }

    #[test]
    fn adaptive_quadrature_handles_peaked_integrand() {
        let v = integrate_adaptive(|x| (-1000.0 * x).exp(), 0.0, 1.0, 1e-12);
        assert!((v - 1e-3).abs() < 1e-14);
        let v = integrate_adaptive(|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12);
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn hermite_table_reproduces_smooth_function() {
        let table = MonotoneCubicTable::build(0.0, 2.0, 201, |x| (x.exp(), x.exp()));
        for k in 0..97 {
            let x = 0.0203 * k as f64;
            let (v, d) = table.eval(x);
            assert!((v - x.exp()).abs() < 1e-8 * x.exp());
            assert!((d - x.exp()).abs() < 1e-5 * x.exp());
        }
    }
}
