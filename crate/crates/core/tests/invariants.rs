use countertwist::charpoly::{block_decompose, char_poly_exact};
use countertwist::evolution::SpectralPropagator;
use countertwist::spectrum::spectrum;
use countertwist::spin_algebra::{build_h_f, chiral_operator};
use countertwist::{Precision, Spin};
use proptest::prelude::*;

fn spin(twice: i64) -> Spin {
    Spin::from_twice(twice).unwrap()
}

fn p() -> Precision {
    Precision::new(20).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn charpoly_parity_and_leading_sign(twice in 1i64..=40) {
        let poly = char_poly_exact(spin(twice)).unwrap();
        let n = (twice + 1) as usize;
        prop_assert_eq!(poly.degree(), Some(n));
        if n.is_multiple_of(2) {
            prop_assert!(poly.is_even());
            prop_assert!(*poly.leading().unwrap() == 1);
        } else {
            prop_assert!(poly.is_odd());
            prop_assert!(*poly.leading().unwrap() == -1);
        }
    }

    #[test]
    fn spectrum_is_paired(twice in 1i64..=24) {
        let s = spectrum(spin(twice), p()).unwrap();
        prop_assert!(s.pairing_verified);
        let ev = s.expanded();
        prop_assert_eq!(ev.len(), (twice + 1) as usize);
        for (a, b) in ev.iter().zip(ev.iter().rev()) {
            prop_assert!((a.to_f64() + b.to_f64()).abs() < 1e-15 * (1.0 + a.to_f64().abs()));
        }
    }

    #[test]
    fn field_hamiltonian_is_hermitian_and_chiral(
        twice in 0i64..=30,
        chi in -5.0f64..5.0,
        omega in -5.0f64..5.0,
    ) {
        let j = spin(twice);
        let h = build_h_f(j, chi, omega, p());
        prop_assert!(h.max_abs_diff(&h.adjoint()).unwrap() == 0.0);
        let r = chiral_operator(j, p());
        prop_assert!(h.anticommutator(&r).unwrap().max_abs() < 1e-15 * (1.0 + chi.abs() + omega.abs()));
    }

    #[test]
    fn blocks_partition_the_basis(twice in 0i64..=60) {
        let j = spin(twice);
        let d = block_decompose(j);
        let mut labels: Vec<_> = d.blocks().iter().flat_map(|b| b.labels.clone()).collect();
        labels.sort();
        labels.reverse();
        let all: Vec<_> = j.labels().collect();
        prop_assert_eq!(&labels, &all);
        for b in d.blocks() {
            for w in b.labels.windows(2) {
                prop_assert_eq!(w[0].twice() - w[1].twice(), 4);
            }
        }
        let sizes = [d.block_a.size(), d.block_b.size()];
        prop_assert_eq!(sizes, [j.dim().div_ceil(2), j.dim() / 2]);

        // the chains carry all of tr(H²)
        let h = build_h_f(j, 1.0, 0.0, p());
        let dense: f64 = h.entries().iter().map(|z| z.norm_sqr().to_f64()).sum();
        let exact = d.trace_sq().to_f64();
        prop_assert!((dense - exact).abs() <= 1e-12 * exact.max(1.0));
    }

    #[test]
    fn propagator_is_unitary_and_composes(twice in 1i64..=12, t1 in -4.0f64..4.0, t2 in -4.0f64..4.0) {
        let sp = SpectralPropagator::new(spin(twice), p()).unwrap();
        let (a, b) = (sp.at_f64(t1).matrix, sp.at_f64(t2).matrix);
        prop_assert!(a.unitarity_defect() < 1e-15);
        let ab = a.mul(&b).unwrap();
        prop_assert!(ab.max_abs_diff(&sp.at_f64(t1 + t2).matrix).unwrap() < 1e-14);
    }
}
