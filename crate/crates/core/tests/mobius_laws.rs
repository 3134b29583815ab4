use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use schwarzian::complex::{c, real, ExtendedComplex, C64};
use schwarzian::mobius::MobiusTransform;
use schwarzian::schwarzian::schwarzian_numeric;

fn random_c(rng: &mut ChaCha8Rng) -> C64 {
    c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
}

fn random_map(rng: &mut ChaCha8Rng) -> MobiusTransform {
    loop {
        let [a, b, cc, d] = [0; 4].map(|_| random_c(rng));
        if (a * d - b * cc).norm() > 0.1 {
            return MobiusTransform::new(a, b, cc, d).unwrap();
        }
    }
}

fn points(rng: &mut ChaCha8Rng) -> Vec<ExtendedComplex> {
    let mut v: Vec<ExtendedComplex> = (0..19).map(|_| random_c(rng).into()).collect();
    v.push(ExtendedComplex::Infinity);
    v
}

fn close(x: ExtendedComplex, y: ExtendedComplex) -> bool {
    x.chordal_distance(y) <= 1e-10
}

#[test]
fn group_laws_pointwise() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let (f, g, h) = (random_map(&mut rng), random_map(&mut rng), random_map(&mut rng));
        let left = f.compose(&g).compose(&h);
        let right = f.compose(&g.compose(&h));
        let inv = f.inverse();
        for z in points(&mut rng) {
            assert!(close(left.apply(z), right.apply(z)));
            assert!(close(f.compose(&g).apply(z), f.apply(g.apply(z))));
            assert!(close(MobiusTransform::identity().compose(&f).apply(z), f.apply(z)));
            assert!(close(inv.apply(f.apply(z)), z));
        }
        assert!(f.compose(&inv).is_identity(1e-10));
    }
}

#[test]
fn matrix_examples() {
    let m = |a: f64, b: f64, cc: f64, d: f64| MobiusTransform::new(real(a), real(b), real(cc), real(d)).unwrap();
    assert_eq!(m(1.0, 1.0, 0.0, 1.0).compose(&m(1.0, 0.0, 1.0, 1.0)), m(2.0, 1.0, 1.0, 1.0));
    assert_eq!(m(1.0, 2.0, 3.0, 4.0).inverse(), m(4.0, -2.0, -3.0, 1.0));
    let inversion = m(0.0, 1.0, 1.0, 0.0);
    assert!(inversion.compose(&inversion).is_identity(1e-12));
    assert!(MobiusTransform::new(real(1.0), real(2.0), real(2.0), real(4.0)).is_err());
}

#[test]
fn three_point_maps() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..20 {
        let from = [0; 3].map(|_| random_c(&mut rng));
        let to = [0; 3].map(|_| random_c(&mut rng));
        let m = MobiusTransform::from_three_points(from, to).unwrap();
        for (x, y) in from.iter().zip(to) {
            assert!(close(m.apply((*x).into()), y.into()));
        }
    }
}

#[test]
fn schwarzian_of_mobius_vanishes() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let m = random_map(&mut rng);
        let [_, _, cc, d] = m.coefficients();
        let z = random_c(&mut rng);
        let dist = if cc.norm() > 0.0 { (z + d / cc).norm() } else { f64::INFINITY };
        if dist < 0.1 {
            continue;
        }
        let s = schwarzian_numeric(|w| m.apply_finite(w).finite().unwrap(), z, (dist / 2.0).min(0.3), 64).unwrap();
        assert!(s.norm() <= 1e-8, "{s}");
    }
}
