use std::f64::consts::{FRAC_PI_4, PI};

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::shapes::{sample_shape, GridSpec};

fn pt(v: &[f64]) -> AmbientPoint {
    DVector::from_column_slice(v)
}

/// Circumcenter of affinely independent points within their affine hull, by LU.
fn oracle_circumcenter(pts: &[&AmbientPoint]) -> Option<AmbientPoint> {
    let m = pts.len() - 1;
    if m == 0 {
        return Some(pts[0].clone());
    }
    let a: Vec<DVector<f64>> = pts[1..].iter().map(|p| *p - pts[0]).collect();
    let gram = DMatrix::from_fn(m, m, |i, j| a[i].dot(&a[j]));
    if gram.determinant().abs() < 1e-12 * gram.norm().powi(m as i32) {
        return None;
    }
    let rhs = DVector::from_fn(m, |i, _| 0.5 * a[i].norm_squared());
    let lambda = gram.lu().solve(&rhs)?;
    let mut c = pts[0].clone();
    for (l, d) in lambda.iter().zip(&a) {
        c += d * *l;
    }
    Some(c)
}

fn subsets(n: usize, max_size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == max {
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, max, cur, out);
            cur.pop();
        }
    }
    rec(0, n, max_size, &mut cur, &mut out);
    out
}

/// Smallest radius among balls circumscribing some support subset and enclosing all points.
fn enumeration_radius(points: &[AmbientPoint]) -> f64 {
    let d = points[0].len();
    let mut best = f64::INFINITY;
    for s in subsets(points.len(), d + 1) {
        let sub: Vec<&AmbientPoint> = s.iter().map(|&i| &points[i]).collect();
        let Some(c) = oracle_circumcenter(&sub) else {
            continue;
        };
        let r = (sub[0] - &c).norm();
        if r < best
            && points
                .iter()
                .all(|p| (p - &c).norm() <= r * (1.0 + 1e-12) + 1e-12)
        {
            best = r;
        }
    }
    best
}

fn random_points(rng: &mut ChaCha8Rng, count: usize, dim: usize) -> Vec<AmbientPoint> {
    (0..count)
        .map(|_| DVector::from_fn(dim, |_, _| rng.gen::<f64>()))
        .collect()
}

#[test]
fn euclidean_examples() {
    let b = euclidean_miniball(&[pt(&[-1.0, 0.0]), pt(&[1.0, 0.0])], 0).unwrap();
    assert!(b.center.norm() < 1e-15 && (b.radius - 1.0).abs() < 1e-15);
    let corners: Vec<_> = [[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]]
        .iter()
        .map(|c| pt(c))
        .collect();
    let b = euclidean_miniball(&corners, 7).unwrap();
    assert!(b.center.norm() < 1e-14 && (b.radius - 2f64.sqrt()).abs() < 1e-14);
    assert!(b.support.len() >= 2);
    let b = euclidean_miniball(&[pt(&[3.0, 4.0, 5.0])], 0).unwrap();
    assert_eq!(b.radius, 0.0);
}

#[test]
fn euclidean_rejects_bad_input() {
    assert!(euclidean_miniball(&[], 0).is_err());
    assert!(matches!(
        euclidean_miniball(&[DVector::zeros(9)], 0),
        Err(Error::Dimension(_))
    ));
}

#[test]
fn euclidean_matches_enumeration_on_small_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..200 {
        let dim = 3 + trial % 2;
        let count = rng.gen_range(1..=12);
        let pts = random_points(&mut rng, count, dim);
        let ball = euclidean_miniball(&pts, trial as u64).unwrap();
        let oracle = enumeration_radius(&pts);
        assert!(
            (ball.radius - oracle).abs() < 1e-9,
            "trial {trial}: {} vs {oracle}",
            ball.radius
        );
        assert!(
            ball.max_distance(&SpaceForm::euclidean(dim - 1).unwrap(), &pts) <= ball.radius + 1e-9
        );
    }
}

#[test]
fn euclidean_matches_enumeration_on_two_hundred_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let pts = random_points(&mut rng, 200, 3);
    let ball = euclidean_miniball(&pts, 1).unwrap();
    let v: Vec<Vector3<f64>> = pts.iter().map(|p| Vector3::new(p[0], p[1], p[2])).collect();
    let circum = |sub: &[Vector3<f64>]| -> Option<Vector3<f64>> {
        let m = sub.len() - 1;
        let mut gram = Matrix3::identity();
        let mut rhs = Vector3::zeros();
        for i in 0..m {
            let ai = sub[i + 1] - sub[0];
            for j in 0..m {
                gram[(i, j)] = ai.dot(&(sub[j + 1] - sub[0]));
            }
            rhs[i] = 0.5 * ai.norm_squared();
        }
        let lambda = gram.lu().solve(&rhs)?;
        let mut c = sub[0];
        for i in 0..m {
            c += (sub[i + 1] - sub[0]) * lambda[i];
        }
        Some(c)
    };
    let n = v.len();
    let mut best = f64::INFINITY;
    for i in 0..n {
        // returns the circumradius so that supersets can be pruned: a sphere
        // through four points contains the circumcircle of any three of them
        let check = |sub: &[Vector3<f64>], best: &mut f64| -> f64 {
            let Some(c) = circum(sub) else { return 0.0 };
            let r = (sub[0] - c).norm();
            if r < *best && v.iter().all(|p| (p - c).norm() <= r + 1e-12) {
                *best = r;
            }
            r
        };
        for j in i + 1..n {
            check(&[v[i], v[j]], &mut best);
            for k in j + 1..n {
                if check(&[v[i], v[j], v[k]], &mut best) >= best {
                    continue;
                }
                for l in k + 1..n {
                    check(&[v[i], v[j], v[k], v[l]], &mut best);
                }
            }
        }
    }
    assert!(
        (ball.radius - best).abs() < 1e-9,
        "{} vs {best}",
        ball.radius
    );
}

#[test]
fn euclidean_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let pts = random_points(&mut rng, 500, 4);
    assert_eq!(
        euclidean_miniball(&pts, 9).unwrap(),
        euclidean_miniball(&pts, 9).unwrap()
    );
}

/// Point at geodesic distance `rho` from the north pole of S² (δ = 1) at longitude `lon`.
fn cap_point(rho: f64, lon: f64) -> AmbientPoint {
    pt(&[rho.sin() * lon.cos(), rho.sin() * lon.sin(), rho.cos()])
}

#[test]
fn spherical_examples() {
    let rho = 0.7;
    let pts: Vec<_> = (0..3)
        .map(|i| cap_point(rho, 2.0 * PI * i as f64 / 3.0))
        .collect();
    let b = spherical_miniball(&pts, 1.0).unwrap();
    assert!((&b.center - pt(&[0.0, 0.0, 1.0])).norm() < 1e-12);
    assert!((b.radius - rho).abs() < 1e-12);

    let x = cap_point(0.3, 1.0);
    let b = spherical_miniball(std::slice::from_ref(&x), 1.0).unwrap();
    assert!((&b.center - x).norm() < 1e-15 && b.radius.abs() < 1e-15);

    // curvature 4: radius halves
    let pts4: Vec<_> = pts.iter().map(|p| p * 0.5).collect();
    let b = spherical_miniball(&pts4, 4.0).unwrap();
    assert!((b.radius - rho / 2.0).abs() < 1e-12);
}

#[test]
fn spherical_rejects_sets_without_open_hemisphere() {
    let antipodal = [pt(&[1.0, 0.0, 0.0]), pt(&[-1.0, 0.0, 0.0])];
    assert!(matches!(
        spherical_miniball(&antipodal, 1.0),
        Err(Error::NotHemisphere(_))
    ));
    let s = 1.0 / 3f64.sqrt();
    let tetra = [
        pt(&[s, s, s]),
        pt(&[s, -s, -s]),
        pt(&[-s, s, -s]),
        pt(&[-s, -s, s]),
    ];
    assert!(matches!(
        spherical_miniball(&tetra, 1.0),
        Err(Error::NotHemisphere(_))
    ));
    assert!(spherical_miniball(&[pt(&[2.0, 0.0, 0.0])], 1.0).is_err());
}

/// Exact 1-center on S²: best enclosing circumcircle over pairs and triples.
fn spherical_enumeration(points: &[AmbientPoint]) -> f64 {
    let dist = |a: &AmbientPoint, b: &AmbientPoint| a.dot(b).clamp(-1.0, 1.0).acos();
    let mut best = f64::INFINITY;
    let mut consider = |c: AmbientPoint| {
        let r = points.iter().map(|p| dist(&c, p)).fold(0.0, f64::max);
        best = best.min(r);
    };
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            consider((&points[i] + &points[j]).normalize());
            for k in j + 1..n {
                let c = (&points[i] - &points[j]).cross(&(&points[i] - &points[k]));
                if c.norm() < 1e-14 {
                    continue;
                }
                let c = c.normalize();
                consider(if c.dot(&points[i]) > 0.0 { c } else { -c });
            }
        }
    }
    best
}

fn exp_map(pole: &AmbientPoint, frame: &DMatrix<f64>, v: [f64; 2]) -> AmbientPoint {
    let t = frame.column(0) * v[0] + frame.column(1) * v[1];
    let len = t.norm();
    if len == 0.0 {
        return pole.clone();
    }
    pole * len.cos() + t * (len.sin() / len)
}

/// Zooming grid search over tangent coordinates of candidate centers.
fn spherical_grid_search(
    points: &[AmbientPoint],
    pole: &AmbientPoint,
    frame: &DMatrix<f64>,
    cap: f64,
) -> f64 {
    let f = |v: [f64; 2]| {
        let c = exp_map(pole, frame, v);
        points
            .iter()
            .map(|p| 2.0 * ((p - &c).norm() / 2.0).asin())
            .fold(0.0, f64::max)
    };
    let mut mid = [0.0, 0.0];
    let mut half = cap;
    let mut best = f(mid);
    let m = 40;
    while half > 1e-9 {
        let mut best_v = mid;
        for i in 0..=m {
            for j in 0..=m {
                let v = [
                    mid[0] + half * (2.0 * i as f64 / m as f64 - 1.0),
                    mid[1] + half * (2.0 * j as f64 / m as f64 - 1.0),
                ];
                let val = f(v);
                if val < best {
                    best = val;
                    best_v = v;
                }
            }
        }
        mid = best_v;
        half *= 0.5;
    }
    best
}

fn random_cap(
    rng: &mut ChaCha8Rng,
    count: usize,
    cap: f64,
) -> (AmbientPoint, DMatrix<f64>, Vec<AmbientPoint>) {
    let pole = DVector::from_fn(3, |_, _| rng.gen::<f64>() - 0.5).normalize();
    let frame = SpaceForm::sphere(1.0, 2).unwrap().tangent_basis(&pole);
    let pts = (0..count)
        .map(|_| {
            let rho = cap * rng.gen::<f64>().sqrt();
            let a = rng.gen::<f64>() * 2.0 * PI;
            exp_map(&pole, &frame, [rho * a.cos(), rho * a.sin()])
        })
        .collect();
    (pole, frame, pts)
}

#[test]
fn spherical_matches_oracles_on_random_caps() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..10 {
        let (pole, frame, pts) = random_cap(&mut rng, 100, 0.4);
        let ball = spherical_miniball(&pts, 1.0).unwrap();
        let exact = spherical_enumeration(&pts);
        assert!(
            (ball.radius - exact).abs() < 1e-9,
            "{} vs {exact}",
            ball.radius
        );
        let grid = spherical_grid_search(&pts, &pole, &frame, 0.4);
        assert!(
            (ball.radius - grid).abs() < 1e-5,
            "{} vs {grid}",
            ball.radius
        );
    }
}

#[test]
fn spherical_miniball_in_three_sphere() {
    let space = SpaceForm::sphere(1.0, 3).unwrap();
    let pole = pt(&[0.0, 0.0, 0.0, 1.0]);
    let mut pts = Vec::new();
    for i in 0..4 {
        let e = DVector::from_fn(4, |r, _| if r == i.min(2) { 1.0 } else { 0.0 });
        let sign = if i == 3 { -1.0 } else { 1.0 };
        pts.push(&pole * 0.5f64.cos() + e * (sign * 0.5f64.sin()));
    }
    let b = enclose_points(&space, &pts, 0).unwrap();
    assert!(b.max_distance(&space, &pts) <= b.radius + 1e-12);
    assert!(b.radius <= 0.5 + 1e-12);
}

#[test]
fn extrinsic_radius_of_round_sphere() {
    let shape = ParametricShape::round_sphere(vec![0.3, -1.0, 2.0], 1.5).unwrap();
    let mut s = sample_shape(&shape, &GridSpec::default_for(2)).unwrap();
    let b = extrinsic_radius(&mut s, 0).unwrap();
    assert!((&b.center - pt(&[0.3, -1.0, 2.0])).norm() < 1e-9);
    assert!((b.radius - 1.5).abs() < 1e-9);
    assert_eq!(b.contact.len(), s.len());
    assert!(s.samples().iter().all(|x| (x.radial.r - 1.5).abs() < 1e-9));
}

#[test]
fn extrinsic_radius_of_ellipsoid_reaches_the_vertex() {
    let shape = ParametricShape::ellipsoid(vec![0.0; 3], vec![2.0, 1.0, 1.0]).unwrap();
    let mut s = sample_shape(&shape, &GridSpec::default_for(2)).unwrap();
    let b = extrinsic_radius(&mut s, 0).unwrap();
    assert!(b.center.norm() < 1e-6, "{}", b.center);
    assert!((b.radius - 2.0).abs() < 1e-6, "{}", b.radius);
    assert!(!b.contact.is_empty());
    assert!(b
        .contact
        .iter()
        .all(|&i| s.samples()[i].position[0].abs() > 1.9));
}

#[test]
fn extrinsic_radius_of_perturbed_sphere_includes_the_poles() {
    let shape = ParametricShape::perturbed_sphere(vec![0.0; 3], 1.0, 0.1).unwrap();
    let mut s = sample_shape(&shape, &GridSpec::new(vec![16, 32]).unwrap()).unwrap();
    let b = extrinsic_radius(&mut s, 0).unwrap();
    assert!((b.radius - 1.1).abs() < 1e-9, "{}", b.radius);
    assert!(b.stats.refinements >= 1);
}

#[test]
fn extrinsic_radius_of_geodesic_sphere() {
    let pole = pt(&[0.6, 0.0, 0.0, 0.8]);
    let shape = ParametricShape::geodesic_sphere(1.0, pole.as_slice().to_vec(), FRAC_PI_4).unwrap();
    let mut s = sample_shape(&shape, &GridSpec::default_for(2)).unwrap();
    let b = extrinsic_radius(&mut s, 0).unwrap();
    assert!((&b.center - &pole).norm() < 1e-7);
    assert!((b.radius - FRAC_PI_4).abs() < 1e-7);
    assert_eq!(s.base_point(), &b.center);
}

#[test]
fn great_sphere_has_no_enclosing_hemisphere() {
    let shape =
        ParametricShape::geodesic_sphere(1.0, ParametricShape::north_pole(1.0, 2), PI / 2.0)
            .unwrap();
    let mut s = sample_shape(&shape, &GridSpec::new(vec![16, 32]).unwrap()).unwrap();
    assert!(matches!(
        extrinsic_radius(&mut s, 0),
        Err(Error::NotHemisphere(_))
    ));
}

#[test]
fn large_geodesic_sphere_is_small_about_the_antipode() {
    let shape =
        ParametricShape::geodesic_sphere(1.0, ParametricShape::north_pole(1.0, 2), 1.7).unwrap();
    let mut s = sample_shape(&shape, &GridSpec::new(vec![16, 32]).unwrap()).unwrap();
    let b = extrinsic_radius(&mut s, 0).unwrap();
    assert!((b.radius - (PI - 1.7)).abs() < 1e-9);
    assert!((b.center[3] + 1.0).abs() < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn euclidean_ball_encloses(seed in 0u64..1000, count in 1usize..60, dim in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = random_points(&mut rng, count, dim);
        let b = euclidean_miniball(&pts, seed).unwrap();
        for p in &pts {
            prop_assert!((p - &b.center).norm() <= b.radius + 1e-9);
        }
        for &i in &b.support {
            prop_assert!(((&pts[i] - &b.center).norm() - b.radius).abs() <= 1e-9);
        }
    }

    #[test]
    fn spherical_radius_is_monotone(seed in 0u64..1000, count in 2usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, _, pts) = random_cap(&mut rng, count, 1.0);
        let smaller = spherical_miniball(&pts[..count - 1], 1.0).unwrap();
        let larger = spherical_miniball(&pts, 1.0).unwrap();
        prop_assert!(larger.radius >= smaller.radius - 1e-12);
        let space = SpaceForm::sphere(1.0, 2).unwrap();
        prop_assert!(larger.max_distance(&space, &pts) <= larger.radius + 1e-9);
    }
}
