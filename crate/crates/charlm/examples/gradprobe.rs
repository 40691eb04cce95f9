// scratch probe: find conditioning strategy for the finite-difference check
use charlm::net::{backward, forward, loss, ModelConfig, Parameters};
use charlm::rng::Rng;

fn min_nonzero_grad(cfg: &ModelConfig, params: &Parameters, inputs: &[Vec<usize>], targets: &[Vec<usize>]) -> f64 {
    let fwd = forward(inputs, params, cfg).unwrap();
    let grads = backward(&fwd, targets, params, cfg).unwrap();
    let mut min_nonzero = f64::INFINITY;
    for (_, block) in grads.blocks() {
        for &g in block {
            if g != 0.0 && g.abs() < min_nonzero {
                min_nonzero = g.abs();
            }
        }
    }
    min_nonzero
}

fn max_rel(cfg: &ModelConfig, params: &Parameters, inputs: &[Vec<usize>], targets: &[Vec<usize>]) -> f64 {
    let fwd = forward(inputs, params, cfg).unwrap();
    let grads = backward(&fwd, targets, params, cfg).unwrap();
    let eps = 1e-5;
    let mut worst: f64 = 0.0;
    let n_blocks = grads.blocks().len();
    for bi in 0..n_blocks {
        for k in 0..grads.blocks()[bi].1.len() {
            let a = grads.blocks()[bi].1[k];
            let mut plus = params.clone();
            plus.blocks_mut()[bi].1[k] += eps;
            let lp = loss(&forward(inputs, &plus, cfg).unwrap().logits, targets).unwrap();
            let mut minus = params.clone();
            minus.blocks_mut()[bi].1[k] -= eps;
            let lm = loss(&forward(inputs, &minus, cfg).unwrap().logits, targets).unwrap();
            let numeric = (lp - lm) / (2.0 * eps);
            let rel = (a - numeric).abs() / a.abs().max(numeric.abs()).max(1e-8);
            if rel > worst {
                worst = rel;
            }
        }
    }
    worst
}

fn scaled_init(cfg: &ModelConfig, seed: u64, scale: f64) -> Parameters {
    let mut params = Parameters::init(cfg, &mut Rng::from_seed(seed));
    for (_, block) in params.blocks_mut() {
        for v in block {
            *v *= scale;
        }
    }
    params
}

fn main() {
    let cfg = ModelConfig {
        vocab_size: 5,
        embed_dim: 4,
        hidden_size: 6,
        num_layers: 2,
        seq_len: 3,
    };
    let inputs = vec![vec![0, 2, 4], vec![1, 3, 0]];
    let targets = vec![vec![2, 4, 1], vec![3, 0, 2]];

    for &scale in &[1.0f64, 2.0, 3.0] {
        // first pass: min nonzero analytic gradient per seed (cheap)
        let mut best: Vec<(u64, f64)> = (0..300u64)
            .map(|seed| {
                let p = scaled_init(&cfg, seed, scale);
                (seed, min_nonzero_grad(&cfg, &p, &inputs, &targets))
            })
            .collect();
        best.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
        println!("scale {scale}: best-conditioned seeds:");
        for &(seed, min_g) in best.iter().take(4) {
            let p = scaled_init(&cfg, seed, scale);
            let worst = max_rel(&cfg, &p, &inputs, &targets);
            println!("  seed {seed}: min|g| {min_g:.3e}  max_rel {worst:.3e}");
        }
    }
}
