//! One sweep: every `(n, trial)` pair of the config becomes one record.

use std::time::Instant;

use rayon::prelude::*;
use tensorconc_core::diagnostics::{bounded_degree_check, discrepancy_check};
use tensorconc_core::{
    adjacency, bernoulli_sample, center, degree_map, er_hypergraph, expander_construct, mixing_check, regularize,
    removed_count_check, sparsify_uniform, spectral_sandwich, OffsetTensor, PowerIterConfig, ProbabilityModel,
    SeedSpec, SparseTensor, TensorShape,
};

use crate::config::{Command, ExperimentConfig};
use crate::error::{HarnessError, Result};
use crate::record::{Aux, ResultRecord};

struct Estimate {
    lower: f64,
    upper: f64,
    aux: Aux,
}

fn estimate(w: &OffsetTensor, m: usize, config: &ExperimentConfig, seed: SeedSpec) -> Result<Estimate> {
    if !config.estimate_norm {
        return Ok(Estimate { lower: 0.0, upper: 0.0, aux: Aux::new().int("estimated", false) });
    }
    let cfg = PowerIterConfig { seed: seed.child(1), ..config.estimator };
    let e = spectral_sandwich(w, m, &cfg)?;
    let mut aux = Aux::new().num("hopm", e.hopm_lower);
    if let Some(s) = e.slice_lower {
        aux = aux.num("slice", s);
    }
    if let Some(c) = e.chain_upper {
        aux = aux.num("chain_upper", c);
    }
    aux = aux.num("upper_cap", e.upper_cap).int("iterations", e.iterations_used).int("converged", e.converged);
    Ok(Estimate { lower: e.lower, upper: e.upper, aux })
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

fn trial(config: &ExperimentConfig, n: usize, trial: usize) -> Result<ResultRecord> {
    let start = Instant::now();
    let (k, m) = (config.k, config.m);
    let p = config.p_rule.p(n, m);
    let seed = SeedSpec::new(config.base_seed, trial as u64);
    let shape = TensorShape::new(k, n)?;
    let model = ProbabilityModel::homogeneous(p)?;

    let (est, aux) = match config.command {
        Command::Concentration => {
            let t = bernoulli_sample(shape, &model, seed)?;
            let est = estimate(&center(&t, &model)?, m, config, seed)?;
            (est, Aux::new().int("nnz", t.nnz()))
        }
        Command::Regularize => {
            let t = bernoulli_sample(shape, &model, seed)?;
            let r = regularize(&t, m, p)?;
            let check = removed_count_check(&r, n, p);
            let max_degree = degree_map(&r.regularized, m)?.max();
            let est = estimate(&center(&r.regularized, &model)?, m, config, seed)?;
            let aux = Aux::new()
                .int("nnz", t.nnz())
                .int("nnz_regularized", r.regularized.nnz())
                .int("removed", check.count)
                .num("removed_bound", check.bound)
                .int("removed_within", check.within)
                .num("threshold", r.threshold)
                .num("max_degree", max_degree)
                .int("degree_within", max_degree <= r.threshold)
                .int("in_regime", r.in_regime);
            (est, aux)
        }
        Command::Expander => {
            let h = er_hypergraph(k, n, p, seed)?;
            let expander = expander_construct(&adjacency(&h), p)?;
            let report = mixing_check(&expander, p, &config.families, seed.child(2))?;
            let max_degree = degree_map(&expander, k - 1)?.max();
            let degree_bound = 2.0 * factorial(k) * (n as f64).powi(k as i32 - 1) * p;
            let est = estimate(&center(&expander, &model)?, m, config, seed)?;
            let aux = Aux::new()
                .int("edges", h.num_edges())
                .int("edges_kept", expander.nnz() / factorial(k) as usize)
                .num("c", report.c)
                .num("max_ratio", report.max_ratio)
                .num("fitted_c", report.fitted_c)
                .num("singleton_max", report.singleton_max)
                .int("families", report.trials.len())
                .num("max_degree", max_degree)
                .num("degree_bound", degree_bound)
                .int("degree_within", max_degree <= degree_bound);
            (est, aux)
        }
        Command::Sparsify => {
            let ones = SparseTensor::ones(shape)?;
            let kept = sparsify_uniform(&ones, p, seed)?;
            // T̃ - pT with T = J
            let est = estimate(&center(&kept, &model)?, m, config, seed)?;
            (est, Aux::new().int("nnz", kept.nnz()))
        }
        Command::Diagnostics => {
            let t = bernoulli_sample(shape, &model, seed)?;
            let deg = bounded_degree_check(&t, p, config.constants.c1)?;
            let disc = discrepancy_check(&t, p, &config.constants, &config.families, seed.child(2))?;
            let est = estimate(&center(&t, &model)?, m, config, seed)?;
            let aux = Aux::new()
                .int("nnz", t.nnz())
                .num("max_degree", deg.max_degree)
                .num("degree_bound", deg.bound)
                .int("degree_within", deg.within)
                .int("families", disc.families)
                .int("case1", disc.case1)
                .int("case2", disc.case2)
                .int("violations", disc.violations)
                .num("fitted_c2", disc.fitted_c2)
                .num("fitted_c3", disc.fitted_c3);
            (est, aux)
        }
    };
    let sqrt_nmp = ((n as f64).powi(m as i32) * p).sqrt();
    let mut aux = aux.finish();
    let extra = est.aux.finish();
    if !extra.is_empty() {
        aux = format!("{aux};{extra}");
    }
    Ok(ResultRecord {
        command: config.command.name().into(),
        k,
        n,
        p,
        m,
        trial,
        seed: config.base_seed,
        lower: est.lower,
        upper: est.upper,
        sqrt_nmp,
        ratio_lower: est.lower / sqrt_nmp,
        ratio_upper: est.upper / sqrt_nmp,
        aux,
        wall_ms: start.elapsed().as_millis() as u64,
    })
}

/// Runs the sweep on `jobs` threads. Records come back ordered by
/// `(n, trial)` whatever the scheduling.
pub fn run(config: &ExperimentConfig, jobs: usize) -> Result<Vec<ResultRecord>> {
    config.validate()?;
    let tasks: Vec<(usize, usize)> =
        config.n_list.iter().flat_map(|&n| (0..config.trials).map(move |t| (n, t))).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))?;
    pool.install(|| tasks.par_iter().map(|&(n, t)| trial(config, n, t)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::PRule;
    use crate::record::{mask_wall_ms, to_csv_string};

    fn tiny(command: Command) -> ExperimentConfig {
        let mut c = ExperimentConfig::for_command(command);
        c.n_list = vec![6, 8];
        c.trials = 2;
        c.estimator.restarts = 2;
        c.families.samples = 50;
        if command == Command::Regularize {
            c.n_list = vec![5, 6];
        }
        c.p_rule = PRule::Fixed { p: 0.3 };
        c
    }

    #[test]
    fn fixed_one_gives_zero_rows() {
        let mut c = ExperimentConfig::for_command(Command::Concentration);
        c.k = 2;
        c.m = 1;
        c.n_list = vec![8];
        c.trials = 1;
        c.p_rule = PRule::Fixed { p: 1.0 };
        let rows = run(&c, 1).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!((rows[0].lower, rows[0].upper), (0.0, 0.0));
    }

    #[test]
    fn every_command_runs_and_orders_rows() {
        for cmd in Command::ALL {
            let c = tiny(cmd);
            let rows = run(&c, 3).unwrap();
            assert_eq!(rows.len(), 4, "{cmd}");
            let keys: Vec<(usize, usize)> = rows.iter().map(|r| (r.n, r.trial)).collect();
            let mut sorted = keys.clone();
            sorted.sort();
            assert_eq!(keys, sorted);
            assert!(rows.iter().all(|r| r.lower <= r.upper + 1e-8), "{cmd}");
            let again = run(&c, 1).unwrap();
            assert_eq!(mask_wall_ms(&to_csv_string(&rows)), mask_wall_ms(&to_csv_string(&again)));
        }
    }
}
