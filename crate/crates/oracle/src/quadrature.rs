//! Adaptive Simpson quadrature.

const MAX_DEPTH: u32 = 48;
const INITIAL_PANELS: usize = 16;

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

impl Panel {
    fn new<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fb: f64) -> Self {
        let fm = f(0.5 * (a + b));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        Self { a, b, fa, fm, fb, whole }
    }
}

fn refine<F: Fn(f64) -> f64>(f: &F, p: Panel, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (p.a + p.b);
    let left = Panel::new(f, p.a, m, p.fa, p.fm);
    let right = Panel::new(f, m, p.b, p.fm, p.fb);
    let delta = left.whole + right.whole - p.whole;
    let floor = 8.0 * f64::EPSILON * (left.whole.abs() + right.whole.abs());
    if depth >= MAX_DEPTH || delta.abs() <= 15.0 * tol.max(floor) {
        return left.whole + right.whole + delta / 15.0;
    }
    refine(f, left, 0.5 * tol, depth + 1) + refine(f, right, 0.5 * tol, depth + 1)
}

/// `∫_a^b f` to absolute tolerance `tol`, by recursive Simpson bisection with
/// Richardson correction. The interval is first cut into a few fixed panels
/// so narrow features are not stepped over.
pub fn adaptive_quadrature<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let h = (b - a) / INITIAL_PANELS as f64;
    let panel_tol = tol / INITIAL_PANELS as f64;
    let mut total = 0.0;
    let mut left = a;
    let mut f_left = f(a);
    for k in 1..=INITIAL_PANELS {
        let right = if k == INITIAL_PANELS { b } else { a + h * k as f64 };
        let f_right = f(right);
        total += refine(&f, Panel::new(&f, left, right, f_left, f_right), panel_tol, 0);
        left = right;
        f_left = f_right;
    }
    total
}
