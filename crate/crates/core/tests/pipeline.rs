use serde_json::json;
use teamsynth::agents::validate;
use teamsynth::executor::{check_local_satisfaction, estimate_centralized, simulate, SimulationConfig};
use teamsynth::io::{load_scenario, strategies_from_json, strategies_to_json, warehouse, WAREHOUSE};
use teamsynth::pipeline::{run_pipeline, PipelineError, PipelineOptions};

#[test]
fn warehouse_loads_and_validates() {
    let (sc, sim) = load_scenario(WAREHOUSE).unwrap();
    assert!(validate(&sc).is_empty());
    assert_eq!(sc.len(), 3);
    assert_eq!(sim.unwrap().unrollings, 3);
}

#[test]
fn warehouse_strategies_satisfy_every_formula() {
    let sc = warehouse();
    let syn = run_pipeline(&sc, &PipelineOptions::default()).unwrap();
    assert!(syn.strategies.iter().chain(&syn.raw).all(|s| s.is_valid(&sc)));
    for seed in 0..3 {
        let cfg = SimulationConfig { seed, ..Default::default() };
        let sim = simulate(&syn.strategies, &sc, &cfg).unwrap();
        let v = check_local_satisfaction(&sim, &syn.strategies, &sc).unwrap();
        assert!(v.iter().all(|v| v.holds()), "seed {seed}: {v:?}");
    }
}

#[test]
fn per_class_products_agree_with_the_single_one() {
    let sc = warehouse();
    let opts = PipelineOptions { per_class: true, centralized_cap: None };
    let syn = run_pipeline(&sc, &opts).unwrap();
    assert_eq!(syn.products.len(), syn.stats.classes.len());
    let sim = simulate(&syn.strategies, &sc, &SimulationConfig::default()).unwrap();
    let v = check_local_satisfaction(&sim, &syn.strategies, &sc).unwrap();
    assert!(v.iter().all(|v| v.holds()));
}

#[test]
fn strategy_files_round_trip() {
    let sc = warehouse();
    let syn = run_pipeline(&sc, &PipelineOptions { per_class: false, centralized_cap: None }).unwrap();
    let text = strategies_to_json(&syn.strategies, &sc);
    assert_eq!(strategies_from_json(&text, &sc).unwrap(), syn.strategies);
}

#[test]
fn corrupted_strategy_is_rejected() {
    let sc = warehouse();
    let syn = run_pipeline(&sc, &PipelineOptions { per_class: false, centralized_cap: None }).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&strategies_to_json(&syn.strategies, &sc)).unwrap();
    v[0]["cycle"][0]["action"] = json!("east");
    v[0]["cycle"][0]["state"] = json!("c9_9");
    assert!(strategies_from_json(&v.to_string(), &sc).is_err());
}

fn single(motion: &str, task: &str) -> String {
    json!({
        "agents": [{
            "id": "solo",
            "services": ["ping"],
            "grid": {
                "width": 3, "height": 3,
                "rooms": [{"name": "left", "from": [0, 0], "to": [0, 2]}],
                "service_cells": [{"services": ["ping"], "cell": [2, 2]}],
                "initial": [1, 1]
            }
        }],
        "motion_formulas": [motion],
        "task_formulas": [task],
    })
    .to_string()
}

#[test]
fn unsatisfiable_motion_is_reported_as_empty() {
    let (sc, _) = load_scenario(&single("left && !left", "true")).unwrap();
    let err = run_pipeline(&sc, &PipelineOptions::default()).unwrap_err();
    assert!(err.is_emptiness(), "{err}");
}

#[test]
fn invalid_scenario_is_rejected_before_synthesis() {
    let (sc, _) = load_scenario(&single("G nowhere", "true")).unwrap();
    assert!(matches!(run_pipeline(&sc, &PipelineOptions::default()), Err(PipelineError::Invalid(_))));
}

#[test]
fn trivial_single_agent_estimate() {
    let (sc, _) = load_scenario(&single("true", "true")).unwrap();
    let r = estimate_centralized(&sc, 1_000).unwrap();
    assert_eq!(r.ba_sizes, vec![1, 1]);
    assert_eq!(r.estimate, 9);
    assert_eq!(r.materialized, Some(9));
}

#[test]
fn lone_agent_serves_forever() {
    let (sc, _) = load_scenario(&single("G F left", "G F ping")).unwrap();
    let syn = run_pipeline(&sc, &PipelineOptions::default()).unwrap();
    let sim = simulate(&syn.strategies, &sc, &SimulationConfig::default()).unwrap();
    let v = check_local_satisfaction(&sim, &syn.strategies, &sc).unwrap();
    assert!(v[0].holds(), "{v:?}");
    assert!(syn.stats.centralized.unwrap().materialized.is_some());
}
