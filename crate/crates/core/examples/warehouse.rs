use teamsynth::executor::{check_local_satisfaction, simulate, SimulationConfig};
use teamsynth::io::warehouse;
use teamsynth::pipeline::{run_pipeline, PipelineOptions};

fn main() {
    let sc = warehouse();
    let syn = match run_pipeline(&sc, &PipelineOptions::default()) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    };
    println!("{}", serde_json::to_string_pretty(&syn.stats).unwrap());
    for s in &syn.strategies {
        let a = &sc.agents[s.agent];
        let f = |v: &[teamsynth::global::Step]| v.iter().map(|st| format!("{}:{}{}", a.ts.state_name(st.state), a.ts.action_name(st.action), if st.sync.is_singleton() { String::new() } else { format!("{}", st.sync) })).collect::<Vec<_>>().join(" ");
        println!("agent {}\n  prefix {}\n  cycle {}", a.name, f(&s.prefix), f(&s.cycle));
    }
    for seed in 0..5 {
        let cfg = SimulationConfig { seed, ..Default::default() };
        match simulate(&syn.strategies, &sc, &cfg) {
            Ok(sim) => {
                let v = check_local_satisfaction(&sim, &syn.strategies, &sc).unwrap();
                for x in &v { println!("  {} {:?}", x.agent, x.local.word); }
                println!("seed {seed}: {:?}", v.iter().map(|v| (v.motion, v.task, v.agree, v.local.padded)).collect::<Vec<_>>());
            }
            Err(e) => println!("seed {seed}: {e}"),
        }
    }
}
