mod common;

use action_triple::commutant::commutant_basis;
use action_triple::linalg::{int, Matrix, MAX_DIM};
use common::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn check_commutant(x: &Rows, expected_dim: usize) {
    let basis = commutant_basis(&matrix(x)).unwrap();
    assert_eq!(basis.dim(), expected_dim);
    for b in basis.elements() {
        assert!(is_zero(&bracket(x, &rows(b))));
    }
}

#[test]
fn dense_commutant_at_the_dimension_limit() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let x = rand_int_rows(&mut rng, MAX_DIM, MAX_DIM, -2, 2);
    let basis = commutant_basis(&matrix(&x)).unwrap();
    assert_eq!(basis.dim(), MAX_DIM);
    let mut power = identity(MAX_DIM);
    for b in basis.elements() {
        assert_eq!(rows(b), power);
        power = mul(&power, &x);
    }
}

#[test]
fn structured_commutants_at_the_dimension_limit() {
    let n = MAX_DIM;
    let mut shift = zeros(n, n);
    for i in 0..n {
        shift[(i + 1) % n][i] = int(1);
    }
    check_commutant(&shift, n);
    let repeated: Vec<i64> = (0..n as i64).map(|i| i % 3).collect();
    let sizes = [11, 11, 10];
    check_commutant(&rows(&Matrix::diag_ints(&repeated)), sizes.iter().map(|s| s * s).sum());
    check_commutant(&identity(n), n * n);
}
