/// Classical four-stage Runge–Kutta step. `k1` may be supplied when the
/// derivative at `(t, x)` is already known.
pub fn rk4_step<const N: usize, E>(
    x: &[f64; N],
    t: f64,
    dt: f64,
    k1: Option<[f64; N]>,
    mut f: impl FnMut(f64, &[f64; N]) -> Result<[f64; N], E>,
) -> Result<[f64; N], E> {
    let axpy = |a: f64, k: &[f64; N]| {
        let mut y = *x;
        for i in 0..N {
            y[i] += a * k[i];
        }
        y
    };
    let k1 = match k1 {
        Some(k) => k,
        None => f(t, x)?,
    };
    let k2 = f(t + 0.5 * dt, &axpy(0.5 * dt, &k1))?;
    let k3 = f(t + 0.5 * dt, &axpy(0.5 * dt, &k2))?;
    let k4 = f(t + dt, &axpy(dt, &k3))?;
    let mut out = *x;
    for i in 0..N {
        out[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    Ok(out)
}
