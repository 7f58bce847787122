//! Deterministic property checks shared between the property-test drivers
//! and the acceptance suite. Each function takes concrete inputs and panics
//! with a descriptive message on any violation, so the same body can sit
//! under a proptest strategy or be called straight from a criterion.

#![allow(dead_code)]

use classpoly::ecfp::{certify_cardinality, CurveFp, PointFp};
use classpoly::modpoly::ModPolyCache;
use classpoly::orbit::conjugate_orbit;
use classpoly::primesel::{select_primes, PlanPolicy};
use classpoly::quadform::{class_number, enumerate_reduced, QuadForm};
use classpoly::Discriminant;
use std::sync::OnceLock;

static CACHE_DIR: OnceLock<tempfile::TempDir> = OnceLock::new();

/// One modular polynomial cache directory per test process, so no level is
/// built twice within a run.
pub fn shared_cache_dir() -> std::path::PathBuf {
    CACHE_DIR
        .get_or_init(|| tempfile::tempdir().expect("cache tempdir"))
        .path()
        .to_path_buf()
}

pub fn shared_cache() -> ModPolyCache {
    ModPolyCache::new(Some(shared_cache_dir()))
}

/// Valid negative discriminant values not exceeding `bound` in magnitude.
pub fn discriminant_values(bound: i64) -> Vec<i64> {
    (-bound..0)
        .filter(|v| {
            let m = ((v % 4) + 4) % 4;
            m == 0 || m == 1
        })
        .collect()
}

/// The reduced forms of discriminant `dv` satisfy the abelian group axioms
/// under composition-and-reduction.
pub fn check_form_group_axioms(dv: i64) {
    let d = Discriminant::new(dv).expect("caller supplies valid discriminants");
    let forms = enumerate_reduced(&d);
    assert_eq!(
        forms.len() as u64,
        class_number(&d),
        "enumeration vs h for D={dv}"
    );
    let identity = QuadForm::identity(&d);
    assert!(forms.contains(&identity), "identity missing for D={dv}");
    let compose = |a: &QuadForm, b: &QuadForm| -> QuadForm {
        a.compose(b)
            .expect("composable: same discriminant")
            .reduce()
    };
    for f in &forms {
        assert!(f.is_reduced(), "enumerated form not reduced for D={dv}");
        assert_eq!(&compose(f, &identity), f, "identity law for D={dv}");
        let inv = f.inverse().reduce();
        assert!(forms.contains(&inv), "inverse closure for D={dv}");
        assert_eq!(compose(f, &inv), identity, "inverse law for D={dv}");
    }
    for a in &forms {
        for b in &forms {
            let ab = compose(a, b);
            assert!(forms.contains(&ab), "closure for D={dv}");
            assert_eq!(ab, compose(b, a), "commutativity for D={dv}");
        }
    }
    for a in &forms {
        for b in &forms {
            for c in &forms {
                assert_eq!(
                    compose(&compose(a, b), c),
                    compose(a, &compose(b, c)),
                    "associativity for D={dv}"
                );
            }
        }
    }
}

/// Every point of y^2 = x^3 + ax + b over F_p, identity included.
fn all_points(curve: &CurveFp) -> Vec<PointFp> {
    let p = curve.p();
    let mut pts = vec![PointFp::Infinity];
    for x in 0..p {
        for y in 0..p {
            let pt = PointFp::Affine(x, y);
            if curve.contains(&pt) {
                pts.push(pt);
            }
        }
    }
    pts
}

/// The brute-forced point set of a small curve is an abelian group under
/// the chord-tangent law, and scalar multiplication agrees with repeated
/// addition.
pub fn check_curve_group_law(p: u64, a: u64, b: u64) {
    let Ok(curve) = CurveFp::new(p, a % p, b % p) else {
        // Singular parameters: nothing to check.
        return;
    };
    let pts = all_points(&curve);
    assert_eq!(
        pts.len() as u64,
        curve.exhaustive_count(),
        "count vs enumeration"
    );
    for x in &pts {
        assert_eq!(
            curve.add(x, &PointFp::Infinity),
            *x,
            "identity law on {p},{a},{b}"
        );
        let neg = curve.neg(x);
        assert!(pts.contains(&neg), "negation closure on {p},{a},{b}");
        assert_eq!(
            curve.add(x, &neg),
            PointFp::Infinity,
            "inverse law on {p},{a},{b}"
        );
    }
    for x in &pts {
        for y in &pts {
            let s = curve.add(x, y);
            assert!(pts.contains(&s), "closure on {p},{a},{b}");
            assert_eq!(s, curve.add(y, x), "commutativity on {p},{a},{b}");
        }
    }
    for x in &pts {
        for y in &pts {
            for z in &pts {
                assert_eq!(
                    curve.add(&curve.add(x, y), z),
                    curve.add(x, &curve.add(y, z)),
                    "associativity on {p},{a},{b}"
                );
            }
        }
    }
    let sample = pts[pts.len() / 2];
    let mut acc = PointFp::Infinity;
    for n in 0..6u64 {
        assert_eq!(
            curve.scalar_mul(n, &sample),
            acc,
            "scalar ladder on {p},{a},{b}"
        );
        acc = curve.add(&acc, &sample);
    }
}

/// Cardinality certification agrees with exhaustive counting: the true
/// trace certifies to the counted cardinality, a wrong trace refuses, and
/// a trace outside the Hasse interval errors.
pub fn check_certificate_against_count(p: u64, a: u64, b: u64) {
    assert!(p > 457, "caller keeps p above the exhaustive threshold");
    let Ok(curve) = CurveFp::new(p, a % p, b % p) else {
        return;
    };
    let count = curve.exhaustive_count();
    let u = (p + 1).abs_diff(count);
    let hasse = 2 * p.isqrt() + 1;
    assert!(u <= hasse, "Hasse violation would mean a counting bug");
    if u == 0 {
        // Supersingular trace: the u = 0 guard is exercised separately.
        return;
    }
    let cert = certify_cardinality(&curve, u)
        .expect("trace in range")
        .expect("true trace must certify");
    assert_eq!(
        cert.cardinality(),
        count,
        "certified vs counted on {p},{a},{b}"
    );
    cert.check(&curve)
        .expect("certificate must survive its own audit");

    let wrong = if u + 1 <= hasse { u + 1 } else { u - 1 };
    if wrong != 0 {
        let refused = certify_cardinality(&curve, wrong).expect("trace in range");
        assert!(
            refused.is_none(),
            "wrong trace {wrong} certified on {p},{a},{b}"
        );
    }
    assert!(
        certify_cardinality(&curve, hasse + p).is_err(),
        "trace past the Hasse interval must error"
    );
}

/// Conjugate orbits have exactly h(D) distinct members, the schedule
/// orders multiply to h(D), and the seed only chooses where the walk
/// starts: the member set is seed-independent.
pub fn check_orbit_properties(dv: i64) {
    let d = Discriminant::new(dv).expect("caller supplies valid discriminants");
    let h = class_number(&d);
    let plan = select_primes(&d, 24, PlanPolicy::SplitOnly, 16).expect("plan");
    let w = &plan.split()[0];
    let cache = shared_cache();
    let sorted_orbit = |seed: u64| -> Vec<u64> {
        let orbit = conjugate_orbit(&d, w, seed, &cache).expect("orbit");
        let mut js = orbit.j_values().to_vec();
        js.sort_unstable();
        js
    };
    let reference = sorted_orbit(0);
    assert_eq!(reference.len() as u64, h, "orbit size vs h for D={dv}");
    let mut dedup = reference.clone();
    dedup.dedup();
    assert_eq!(dedup.len() as u64, h, "orbit members distinct for D={dv}");
    let schedule = conjugate_orbit(&d, w, 0, &cache)
        .expect("orbit")
        .schedule()
        .clone();
    let order_product: u64 = schedule.generators().iter().map(|g| g.order).product();
    assert_eq!(
        order_product, h,
        "schedule orders cover the group for D={dv}"
    );
    for seed in [1u64, 41] {
        assert_eq!(
            sorted_orbit(seed),
            reference,
            "seed {seed} changed the orbit set for D={dv}"
        );
    }
}
