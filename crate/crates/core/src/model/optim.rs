//! SGD with Nesterov momentum in look-ahead form:
//! `v <- mu * v - lr * grad(w + mu * v)`, then `w <- w + v`.

use super::Params;

/// One Nesterov update on flat slices. `grad` must be taken at `w + mu * v`.
pub fn nesterov_update(w: &mut [f64], v: &mut [f64], grad: &[f64], learning_rate: f64, momentum: f64) {
    for ((w, v), g) in w.iter_mut().zip(v.iter_mut()).zip(grad) {
        *v = momentum * *v - learning_rate * g;
        *w += *v;
    }
}

/// The look-ahead point `w + mu * v` at which the next gradient is evaluated.
pub fn lookahead(params: &Params, velocity: &Params, momentum: f64) -> Params {
    let mut ahead = params.clone();
    if momentum != 0.0 {
        ahead.zip_apply(velocity, |w, v| *w += momentum * v);
    }
    ahead
}

pub fn sgd_nesterov_step(
    params: &mut Params,
    grads_at_lookahead: &Params,
    velocity: &mut Params,
    learning_rate: f64,
    momentum: f64,
) {
    debug_assert!(params.same_shape(grads_at_lookahead) && params.same_shape(velocity));
    for ((w, v), g) in params
        .slices_mut()
        .into_iter()
        .zip(velocity.slices_mut())
        .zip(grads_at_lookahead.slices())
    {
        nesterov_update(w, v, g, learning_rate, momentum);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_iteration_by_hand() {
        let (mut w, mut v) = ([1.0], [0.0]);
        nesterov_update(&mut w, &mut v, &[2.0], 0.1, 0.9);
        assert!((v[0] + 0.2).abs() < 1e-12 && (w[0] - 0.8).abs() < 1e-12);
        nesterov_update(&mut w, &mut v, &[2.0], 0.1, 0.9);
        assert!((v[0] + 0.38).abs() < 1e-12 && (w[0] - 0.42).abs() < 1e-12);
    }

    #[test]
    fn empty_velocity_is_plain_sgd() {
        let (mut w, mut v) = ([1.0, -3.0], [0.0, 0.0]);
        nesterov_update(&mut w, &mut v, &[0.5, -1.0], 0.1, 0.9);
        assert!((w[0] - 0.95).abs() < 1e-12 && (w[1] + 2.9).abs() < 1e-12);
    }

    #[test]
    fn zero_gradient_zero_velocity_is_a_fixed_point() {
        let (mut w, mut v) = ([0.7], [0.0]);
        nesterov_update(&mut w, &mut v, &[0.0], 0.1, 0.9);
        assert_eq!(w, [0.7]);
    }
}
