use bosonlab::permanent::{permanent, permanent_bruteforce, permanent_ryser};
use bosonlab::wavepacket::{overlap, overlap_quadrature, GramMatrix, QuadratureGrid, WavePacket};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_packet(rng: &mut ChaCha8Rng, dim: usize) -> WavePacket {
    let xi = (0..dim).map(|_| rng.random_range(-2.0..2.0)).collect();
    let pi = (0..dim).map(|_| rng.random_range(-2.0..2.0)).collect();
    WavePacket::new(xi, pi, rng.random_range(0.5..2.0)).unwrap()
}

#[test]
fn ryser_agrees_with_brute_force_on_gram_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for case in 0..500 {
        let n = 2 + case % 7;
        let sigma = rng.random_range(0.5..2.0);
        let packets: Vec<WavePacket> = (0..n)
            .map(|_| {
                let xi = vec![rng.random_range(-2.0..2.0)];
                let pi = vec![rng.random_range(-2.0..2.0)];
                WavePacket::new(xi, pi, sigma).unwrap()
            })
            .collect();
        let g = GramMatrix::new(&packets).unwrap();
        let brute = permanent_bruteforce(g.matrix()).unwrap();
        let ryser = permanent_ryser(g.matrix()).unwrap();
        let rel = (brute - ryser).norm() / brute.norm();
        assert!(rel <= 1e-12, "n = {n}: {brute} vs {ryser}");
        assert_eq!(permanent(g.matrix()).unwrap(), g.permanent().unwrap());
    }
}

#[test]
fn closed_form_overlap_matches_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let sigma = rng.random_range(0.5..2.0);
        let mut pair = || {
            WavePacket::new(vec![rng.random_range(-3.0..3.0)], vec![rng.random_range(-3.0..3.0)], sigma).unwrap()
        };
        let (a, b) = (pair(), pair());
        let exact = overlap(&a, &b).unwrap();
        let numeric = overlap_quadrature(&a, &b, QuadratureGrid::default()).unwrap();
        assert!((exact - numeric.value).norm() <= 1e-8, "{exact} vs {:?}", numeric);
    }
}

#[test]
fn three_dimensional_overlaps_factorize() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let a = random_packet(&mut rng, 3);
        let b = WavePacket::new(
            (0..3).map(|_| rng.random_range(-2.0..2.0)).collect(),
            (0..3).map(|_| rng.random_range(-2.0..2.0)).collect(),
            a.sigma(),
        )
        .unwrap();
        let exact = overlap(&a, &b).unwrap();
        let numeric = overlap_quadrature(&a, &b, QuadratureGrid::default()).unwrap();
        assert!((exact - numeric.value).norm() <= 1e-8);
    }
}

#[test]
fn gram_matrices_are_positive_semidefinite() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for n in 2..=8 {
        let sigma = 1.0;
        let packets: Vec<WavePacket> = (0..n)
            .map(|_| WavePacket::new(vec![rng.random_range(-1.0..1.0)], vec![rng.random_range(-1.0..1.0)], sigma).unwrap())
            .collect();
        let g = GramMatrix::new(&packets).unwrap();
        assert!(g.is_hermitian(1e-14));
        assert!(g.min_eigenvalue() > -1e-12);
        let p = g.permanent().unwrap();
        assert!(p.re >= 1.0 - 1e-12 && p.im.abs() <= 1e-10 * p.re);
    }
}
