use hypersym::constructions::build_immersion;
use hypersym::constructions::instances::shipped_instances;
use hypersym::numeric::{blaschke_residual, induce, measure_difference_tensor, oriented_normal, shape_operator};

const STEP: f64 = 1e-2;

#[test]
fn scalar_curvature_matches_mean_curvature_plus_pick() {
    for inst in shipped_instances(4, 3).unwrap() {
        for [t, v, w] in inst.grid.points() {
            let m = measure_difference_tensor(&inst.spec, t, v, w, STEP).unwrap();
            let gap = (m.kappa_hat - m.h_eff - m.pick).abs();
            assert!(gap < 5e-3, "{} at ({t}, {v}, {w}): gap {gap}", inst.name);
            assert!(m.apolarity < 1e-3, "{} apolarity {}", inst.name, m.apolarity);
        }
    }
}

#[test]
fn shape_operator_is_mean_curvature_times_identity() {
    for inst in shipped_instances(3, 3).unwrap() {
        for [t, v, w] in inst.grid.points() {
            let (n, _, flipped) = oriented_normal(&inst.spec, t, v, w).unwrap();
            let jet = build_immersion(&inst.spec, t, v, w).unwrap();
            let s = shape_operator(&jet, &n, 1e-9).unwrap();
            let h = if flipped { -inst.spec.h } else { inst.spec.h };
            for i in 0..3 {
                for j in 0..3 {
                    let want = if i == j { h } else { 0.0 };
                    assert!((s[i][j] - want).abs() < 1e-8, "{}: S[{i}][{j}] = {}", inst.name, s[i][j]);
                }
            }
        }
    }
}

#[test]
fn doubled_normal_breaks_volume_normalization() {
    for inst in shipped_instances(3, 3).unwrap() {
        let [t, v, w] = inst.grid.points()[4];
        let (n, _, _) = oriented_normal(&inst.spec, t, v, w).unwrap();
        let jet = build_immersion(&inst.spec, t, v, w).unwrap();
        assert!(blaschke_residual(&induce(&jet, &n.xi).unwrap()) < 1e-8, "{}", inst.name);
        let doubled = n.xi.map(|c| 2.0 * c);
        assert!(blaschke_residual(&induce(&jet, &doubled).unwrap()) > 0.1, "{}", inst.name);
    }
}
