use innerlim::gallery::{ann_reference, annulus_tower, generate, Family, FamilySpec};
use innerlim::gh::{gh_lower_bound, gh_upper_bound, greedy_packing};
use innerlim::glued::{build_glued, glued_to_json, validate_tower};
use innerlim::metric::{read_space_json, FiniteMetricSpace};
use innerlim::sampler::{inner_region, SamplePlan};
use innerlim::scenario::{builtin, export_report, export_space, run, ExportFormat, Report};
use proptest::prelude::*;

#[test]
fn glued_annulus_tower_matches_the_reference_band() {
    let plan = SamplePlan::new(0.1);
    let tower = annulus_tower(&[0.4, 0.2], &plan).unwrap();
    assert!(validate_tower(&tower).passed());
    let g = build_glued(&tower).unwrap();
    let reference: FiniteMetricSpace<f64> = ann_reference(0.2, &plan).unwrap().dense();
    assert_eq!(g.len(), reference.len());
    let up = gh_upper_bound(&g.metric, &reference, 100).unwrap().value;
    assert!(up <= 0.1, "{up}");
}

#[test]
fn glued_json_is_a_loadable_space() {
    let tower = annulus_tower(&[0.4, 0.3], &SamplePlan::new(0.15)).unwrap();
    let g = build_glued(&tower).unwrap();
    let text = serde_json::to_string(&glued_to_json(&g)).unwrap();
    let back: FiniteMetricSpace<f64> = read_space_json(&text).unwrap();
    for i in 0..g.len() {
        assert_eq!(back.row(i), g.metric.row(i));
    }
}

#[test]
fn inner_regions_of_a_generated_family_shrink_packings() {
    let spec = FamilySpec::new(Family::GoldFoils { j: 3, r_inner: None }).with_plan(SamplePlan::new(0.05));
    let g = generate(&spec).unwrap();
    let innerlim::gallery::Generated::Sampled(s) = &g else { panic!("gold foils are sampled") };
    let full = greedy_packing(s, 0.3, 0).count;
    let inner = inner_region(s, 0.2, false);
    let cut = greedy_packing(&inner.subspace(), 0.3, 0).count;
    assert!(cut < full && cut >= 3, "{cut} vs {full}");
}

#[test]
fn report_json_reads_back() {
    let report = run(&builtin("bad-balls").unwrap()).unwrap();
    let text = export_report(&report, ExportFormat::Json).unwrap();
    let back: Report = serde_json::from_str(&text).unwrap();
    assert_eq!(back.steps, report.steps);
    assert!(back.passed);
    let plot = export_report(&report, ExportFormat::Plotdata).unwrap();
    assert!(plot.lines().any(|l| l.starts_with("0,book_ball,members,")));
}

fn cloud(max: usize) -> impl Strategy<Value = Vec<[f64; 2]>> {
    prop::collection::vec((0.0..3.0f64, 0.0..3.0f64).prop_map(|(a, b)| [a, b]), 1..=max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gh_bounds_are_ordered(a in cloud(9), b in cloud(9)) {
        let x = FiniteMetricSpace::from_planar(&a);
        let y = FiniteMetricSpace::from_planar(&b);
        let lo = gh_lower_bound(&x, &y).unwrap().value;
        let up = gh_upper_bound(&x, &y, 30).unwrap().value;
        prop_assert!(lo <= up + 1e-12, "{} > {}", lo, up);
        prop_assert!(lo >= (x.diameter() - y.diameter()).abs() / 2.0 - 1e-12);
        prop_assert_eq!(gh_upper_bound(&x, &x, 30).unwrap().value, 0.0);
    }

    #[test]
    fn json_export_round_trips(a in cloud(12)) {
        let x = FiniteMetricSpace::from_planar(&a);
        let y: FiniteMetricSpace<f64> = read_space_json(&export_space(&x, None, ExportFormat::Json).unwrap()).unwrap();
        for i in 0..x.len() {
            prop_assert_eq!(x.row(i), y.row(i));
        }
    }
}
