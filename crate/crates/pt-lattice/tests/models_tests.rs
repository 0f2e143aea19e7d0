mod common;

use pt_lattice::models::{check_pt_symmetry, parity_matrix, Variant};
use pt_lattice::{Complex64, Error, Lattice, Vector};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn dimer_matrix_entries() {
    let h = Lattice::new(Variant::Dimer, 2)
        .with_gamma(0.7)
        .hamiltonian()
        .unwrap();
    assert_eq!(h[(0, 0)], c(0.0, 0.7));
    assert_eq!(h[(1, 1)], c(0.0, -0.7));
    assert_eq!(h[(0, 1)], c(-1.0, 0.0));
    assert_eq!(h[(1, 0)], c(-1.0, 0.0));
}

#[test]
fn trimer_matrix_entries() {
    let h = Lattice::new(Variant::Trimer, 3)
        .with_gamma(1.2)
        .hamiltonian()
        .unwrap();
    let hop = -1.0 / 2.0f64.sqrt();
    assert_eq!(h[(0, 0)], c(0.0, 1.2));
    assert_eq!(h[(1, 1)], c(0.0, 0.0));
    assert_eq!(h[(2, 2)], c(0.0, -1.2));
    for (i, j) in [(0, 1), (1, 0), (1, 2), (2, 1)] {
        assert!((h[(i, j)] - c(hop, 0.0)).norm() < 1e-15);
    }
    assert_eq!(h[(0, 2)], c(0.0, 0.0));
}

#[test]
fn chain_gain_loss_placement() {
    let h = Lattice::new(Variant::UniformChain, 6)
        .with_gain_site(2)
        .with_gamma(3.0)
        .with_j(2.0)
        .hamiltonian()
        .unwrap();
    // Gain at site 2, loss at mirror site 6 + 1 - 2 = 5 (1-indexed).
    assert_eq!(h[(1, 1)], c(0.0, 3.0));
    assert_eq!(h[(4, 4)], c(0.0, -3.0));
    for k in 0..5 {
        assert_eq!(h[(k, k + 1)], c(-2.0, 0.0));
        assert_eq!(h[(k + 1, k)], c(-2.0, 0.0));
    }
    assert_eq!(h[(0, 2)], c(0.0, 0.0));
    assert_eq!(h[(0, 0)], c(0.0, 0.0));
}

#[test]
fn ssh_alternating_bonds_start_strong() {
    let h = Lattice::new(Variant::Ssh, 8)
        .with_gain_site(3)
        .with_gamma(2.0)
        .with_delta(0.4)
        .hamiltonian()
        .unwrap();
    // Odd bonds (1, 3, 5, 7) carry -J, even bonds -J(1 - delta).
    for k in 1..8usize {
        let expect = if k % 2 == 1 { -1.0 } else { -0.6 };
        assert!((h[(k - 1, k)] - c(expect, 0.0)).norm() < 1e-15, "bond {k}");
    }
    assert_eq!(h[(2, 2)], c(0.0, 2.0));
    assert_eq!(h[(5, 5)], c(0.0, -2.0));
}

#[test]
fn aah_profile_repeats_with_absolute_values() {
    let h = Lattice::new(Variant::Aah, 8)
        .with_gain_site(3)
        .with_gamma(1.0)
        .with_j(5.0) // must NOT scale the profile
        .with_profile(vec![1.0, 0.8, 0.4])
        .hamiltonian()
        .unwrap();
    let expect = [1.0, 0.8, 0.4, 1.0, 0.8, 0.4, 1.0];
    for (k, e) in expect.iter().enumerate() {
        assert!(
            (h[(k, k + 1)] - c(-e, 0.0)).norm() < 1e-15,
            "bond {}",
            k + 1
        );
    }
    assert_eq!(h[(2, 2)], c(0.0, 1.0));
    assert_eq!(h[(5, 5)], c(0.0, -1.0));
}

#[test]
fn aah_warnings_for_incommensurate_sizes() {
    let warn = Lattice::new(Variant::Aah, 7)
        .with_gain_site(2)
        .with_profile(vec![1.0, 0.8, 0.4])
        .validate()
        .unwrap();
    // (N + 1) % p = 8 % 3 != 0 and m0 % p = 2 % 3 != 0: both flagged.
    assert_eq!(warn.len(), 2);

    let clean = Lattice::new(Variant::Aah, 8)
        .with_gain_site(3)
        .with_profile(vec![1.0, 0.8, 0.4])
        .validate()
        .unwrap();
    assert!(clean.is_empty());
}

#[test]
fn pst_bonds_and_gradient() {
    let h = Lattice::new(Variant::Pst, 4)
        .with_gamma(0.9)
        .hamiltonian()
        .unwrap();
    // Bonds -J sqrt(k (N - k)) / 2 for k = 1..3: -sqrt(3)/2, -1, -sqrt(3)/2.
    let s3 = 3.0f64.sqrt() / 2.0;
    assert!((h[(0, 1)] - c(-s3, 0.0)).norm() < 1e-15);
    assert!((h[(1, 2)] - c(-1.0, 0.0)).norm() < 1e-15);
    assert!((h[(2, 3)] - c(-s3, 0.0)).norm() < 1e-15);
    // Diagonal i gamma (k - 1 - S), S = 1.5.
    assert!((h[(0, 0)] - c(0.0, -1.35)).norm() < 1e-15);
    assert!((h[(1, 1)] - c(0.0, -0.45)).norm() < 1e-15);
    assert!((h[(2, 2)] - c(0.0, 0.45)).norm() < 1e-15);
    assert!((h[(3, 3)] - c(0.0, 1.35)).norm() < 1e-15);
    // Negative gamma is allowed for this variant only.
    assert!(Lattice::new(Variant::Pst, 4)
        .with_gamma(-0.9)
        .hamiltonian()
        .is_ok());
}

#[test]
fn ring_two_tunneling_segments() {
    let h = Lattice::new(Variant::TwoTunnelingRing, 5)
        .with_gain_site(2)
        .with_gamma(1.8)
        .with_jprime(0.5)
        .hamiltonian()
        .unwrap();
    // m0 = 2, mirror = 4: bonds 2, 3 are J-bonds; bonds 1, 4 and the
    // wraparound (5, 1) are J'-bonds.
    assert_eq!(h[(0, 1)], c(-0.5, 0.0));
    assert_eq!(h[(1, 2)], c(-1.0, 0.0));
    assert_eq!(h[(2, 3)], c(-1.0, 0.0));
    assert_eq!(h[(3, 4)], c(-0.5, 0.0));
    assert_eq!(h[(4, 0)], c(-0.5, 0.0));
    assert_eq!(h[(0, 4)], c(-0.5, 0.0));
    assert_eq!(h[(1, 1)], c(0.0, 1.8));
    assert_eq!(h[(3, 3)], c(0.0, -1.8));
}

#[test]
fn ring_jprime_zero_reduces_to_open_chain() {
    let ring = Lattice::new(Variant::TwoTunnelingRing, 6)
        .with_gain_site(1)
        .with_gamma(0.5)
        .with_jprime(0.0)
        .hamiltonian()
        .unwrap();
    let chain = Lattice::new(Variant::UniformChain, 6)
        .with_gain_site(1)
        .with_gamma(0.5)
        .hamiltonian()
        .unwrap();
    assert!(common::max_entry_diff(&ring, &chain) < 1e-15);
}

#[test]
fn all_gain_loss_variants_are_pt_symmetric() {
    let specs = vec![
        Lattice::new(Variant::Dimer, 2).with_gamma(0.9),
        Lattice::new(Variant::Trimer, 3).with_gamma(2.0),
        Lattice::new(Variant::UniformChain, 6)
            .with_gain_site(2)
            .with_gamma(3.0),
        Lattice::new(Variant::Ssh, 8)
            .with_gain_site(3)
            .with_gamma(2.0)
            .with_delta(0.3),
        Lattice::new(Variant::Pst, 5).with_gamma(1.1),
        Lattice::new(Variant::TwoTunnelingRing, 8)
            .with_gain_site(2)
            .with_gamma(1.0)
            .with_jprime(0.25),
    ];
    for spec in specs {
        let h = spec.hamiltonian().unwrap();
        let p = parity_matrix(spec.n);
        let r = check_pt_symmetry(&h, &p).unwrap();
        assert!(r < 1e-14, "{} residual {r:e}", spec.variant);
    }
}

#[test]
fn aah_is_honestly_not_pt_symmetric() {
    let h = Lattice::new(Variant::Aah, 8)
        .with_gain_site(3)
        .with_gamma(1.0)
        .with_profile(vec![1.0, 0.8, 0.4])
        .hamiltonian()
        .unwrap();
    let r = check_pt_symmetry(&h, &parity_matrix(8)).unwrap();
    assert!(
        r > 0.1,
        "profile breaks reflection symmetry, residual {r:e}"
    );
}

#[test]
fn validation_rejects_bad_specs() {
    let is_field = |res: pt_lattice::Result<Vec<String>>, name: &str| match res {
        Err(Error::InvalidSpec { field, .. }) => assert_eq!(field, name),
        other => panic!("expected InvalidSpec({name}), got {other:?}"),
    };

    is_field(Lattice::new(Variant::Dimer, 3).validate(), "n");
    is_field(Lattice::new(Variant::Trimer, 4).validate(), "n");
    is_field(Lattice::new(Variant::UniformChain, 1).validate(), "n");
    is_field(
        Lattice::new(Variant::UniformChain, 6)
            .with_j(0.0)
            .validate(),
        "j",
    );
    is_field(
        Lattice::new(Variant::UniformChain, 6)
            .with_j(-1.0)
            .validate(),
        "j",
    );
    is_field(
        Lattice::new(Variant::UniformChain, 6)
            .with_gamma(-0.5)
            .validate(),
        "gamma",
    );
    is_field(
        Lattice::new(Variant::UniformChain, 6)
            .with_gain_site(7)
            .validate(),
        "m0",
    );
    is_field(
        Lattice::new(Variant::UniformChain, 6)
            .with_gain_site(0)
            .validate(),
        "m0",
    );
    // Self-mirrored gain site: N = 5, m0 = 3 maps onto itself.
    is_field(
        Lattice::new(Variant::UniformChain, 5)
            .with_gain_site(3)
            .validate(),
        "m0",
    );
    is_field(
        Lattice::new(Variant::Ssh, 8)
            .with_gain_site(3)
            .with_delta(1.5)
            .validate(),
        "delta",
    );
    is_field(
        Lattice::new(Variant::Ssh, 8)
            .with_gain_site(3)
            .with_delta(-0.1)
            .validate(),
        "delta",
    );
    is_field(
        Lattice::new(Variant::Aah, 8)
            .with_gain_site(3)
            .with_profile(vec![1.0, 0.5])
            .validate(),
        "profile",
    );
    is_field(
        Lattice::new(Variant::Aah, 8)
            .with_gain_site(3)
            .with_profile(vec![1.0, -0.5, 0.3])
            .validate(),
        "profile",
    );
    is_field(
        Lattice::new(Variant::TwoTunnelingRing, 5)
            .with_gain_site(1)
            .with_jprime(-0.2)
            .validate(),
        "jprime",
    );
}

#[test]
fn variant_names_round_trip() {
    for v in Variant::ALL {
        let name = v.name();
        let back: Variant = name.parse().unwrap();
        assert_eq!(back, v);
        assert_eq!(format!("{v}"), name);
    }
    let err = "penrose".parse::<Variant>();
    match err {
        Err(Error::InvalidSpec { field, .. }) => assert_eq!(field, "model"),
        other => panic!("expected InvalidSpec(model), got {other:?}"),
    }
}

#[test]
fn parity_reverses_and_squares_to_identity() {
    let p = parity_matrix(4);
    let v = Vector::from_vec(vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)]);
    let r = p.reverse(&v).unwrap();
    assert_eq!(r[0], c(4.0, 0.0));
    assert_eq!(r[3], c(1.0, 0.0));
    let rr = p.reverse(&r).unwrap();
    for k in 0..4 {
        assert_eq!(rr[k], v[k]);
    }

    let m = p.matrix::<f64>();
    assert_eq!(m[(0, 3)], c(1.0, 0.0));
    assert_eq!(m[(3, 0)], c(1.0, 0.0));
    assert_eq!(m[(0, 0)], c(0.0, 0.0));
    let sq = m.mul(&m).unwrap();
    assert!(common::max_entry_diff(&sq, &pt_lattice::Matrix::identity(4)) < 1e-15);

    assert!(matches!(
        p.reverse(&Vector::zeros(3)),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn mirror_site_pairs() {
    let spec = Lattice::new(Variant::UniformChain, 6).with_gain_site(2);
    assert_eq!(spec.mirror_site(), 5);
    let spec = Lattice::new(Variant::TwoTunnelingRing, 11).with_gain_site(1);
    assert_eq!(spec.mirror_site(), 11);
}

#[test]
fn f32_model_matches_f64() {
    let h32 = pt_lattice::Lattice32::new(Variant::Ssh, 8)
        .with_gain_site(3)
        .with_gamma(2.0)
        .with_delta(0.1)
        .hamiltonian()
        .unwrap();
    let h64 = Lattice::new(Variant::Ssh, 8)
        .with_gain_site(3)
        .with_gamma(2.0)
        .with_delta(0.1)
        .hamiltonian()
        .unwrap();
    for i in 0..8 {
        for j in 0..8 {
            let a = h32[(i, j)];
            let b = h64[(i, j)];
            assert!((f64::from(a.re) - b.re).abs() < 1e-7);
            assert!((f64::from(a.im) - b.im).abs() < 1e-7);
        }
    }
}
