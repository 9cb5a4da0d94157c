//! Monte Carlo campaigns on the cargo-loading instance: an aircraft with
//! weight capacity `W` and volume capacity `V` is filled with shipments from
//! `m` customers, each offering price `p` per kg for up to `d` kg of goods
//! of density `ρ`. For every trial the empirical frequency with which a
//! fresh customer changes the optimal load is compared with the confidence
//! interval attached to the number of customers actually loaded.

mod config;
mod rng;

use std::io::Write;
use std::path::Path;

use rand::Rng;
use rand_distr::{Distribution, Normal, Uniform};
use rayon::prelude::*;
use serde::Serialize;

use crate::duality::dual_from_basis;
use crate::error::{ArrivalError, Error};
use crate::lp_core::{solve_primal, AgentProfile, SharingProblem};
use crate::new_agent::empirical_violation_probability;
use crate::sensitivity::{count_active_dual, count_active_primal, epsilon_table, interval_for, EpsilonTable};

pub use config::{CargoConfig, DemandDist};
pub use rng::{stream, Purpose};

/// Draws one customer: `c = (-p)`, `A = [1; 1/ρ]`, `d` from the configured
/// weight distribution.
pub fn sample_cargo_agent<R: Rng + ?Sized>(config: &CargoConfig, rng: &mut R) -> AgentProfile {
    let price = Uniform::new_inclusive(config.p_min, config.p_max).sample(rng);
    let rho = Uniform::new_inclusive(config.rho_min, config.rho_max).sample(rng);
    let d = match config.d_dist {
        DemandDist::Uniform { d_min, d_max } => Uniform::new_inclusive(d_min, d_max).sample(rng),
        DemandDist::TruncatedGaussian { mu, sigma2 } => {
            let normal = Normal::new(mu, sigma2.sqrt()).expect("validated variance");
            loop {
                let d = normal.sample(rng);
                if d > 0.0 {
                    break d;
                }
            }
        }
    };
    AgentProfile::scalar(-price, d, &[1.0, 1.0 / rho]).expect("sampled agent is valid")
}

/// The `m` customers of one trial.
pub fn sample_trial_agents(config: &CargoConfig, trial: usize) -> Vec<AgentProfile> {
    let mut rng = stream(config.seed, Purpose::Agents, trial as u64, 0);
    (0..config.m).map(|_| sample_cargo_agent(config, &mut rng)).collect()
}

/// Weight and volume rows, both inequalities.
pub fn cargo_problem(config: &CargoConfig, agents: Vec<AgentProfile>) -> Result<SharingProblem, Error> {
    Ok(SharingProblem::new(2, vec![config.w, config.v], agents)?)
}

/// Result of one trial. `p_hat`, `eps_low`, `eps_high` are empty when the
/// trial was discarded.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial_index: usize,
    pub s_star: usize,
    pub s_star_dual: Option<usize>,
    pub p_hat: Option<f64>,
    pub eps_low: Option<f64>,
    pub eps_high: Option<f64>,
    pub inside: Option<bool>,
    pub changes: usize,
    pub tie_count: usize,
    pub draws: usize,
    pub audited: usize,
    pub audit_mismatches: usize,
    pub degenerate: bool,
    pub non_unique: bool,
    /// Primal and dual active counts differ.
    pub count_mismatch: bool,
}

impl TrialRecord {
    /// Trials with a clean optimum and agreeing counts enter the statistics.
    pub fn clean(&self) -> bool {
        !self.degenerate && !self.non_unique && !self.count_mismatch
    }
}

/// Runs trial `trial` against the precomputed `table` for `config.m`.
pub fn run_trial(config: &CargoConfig, table: &EpsilonTable, trial: usize) -> Result<TrialRecord, Error> {
    let problem = cargo_problem(config, sample_trial_agents(config, trial))?;
    let lp = problem.assemble()?;
    let solution = solve_primal(&lp)?;
    let s_star = count_active_primal(&solution);
    let mut record = TrialRecord {
        trial_index: trial,
        s_star,
        s_star_dual: None,
        p_hat: None,
        eps_low: None,
        eps_high: None,
        inside: None,
        changes: 0,
        tie_count: 0,
        draws: 0,
        audited: 0,
        audit_mismatches: 0,
        degenerate: solution.flags.degenerate,
        non_unique: solution.flags.non_unique,
        count_mismatch: false,
    };
    if !solution.flags.clean() {
        return Ok(record);
    }
    let s_dual = count_active_dual(&lp, &dual_from_basis(&lp, &solution.partition)?);
    record.s_star_dual = Some(s_dual);
    if s_dual != s_star {
        record.count_mismatch = true;
        return Ok(record);
    }
    let sampler = |draw: usize| {
        let mut rng = stream(config.seed, Purpose::Arrivals, trial as u64, draw as u64);
        sample_cargo_agent(config, &mut rng)
    };
    let est = match empirical_violation_probability(&solution, &lp, sampler, config.arrivals(), config.audit_every()) {
        Ok(est) => est,
        Err(ArrivalError::DegenerateBase) => return Ok(record),
        Err(e) => return Err(e.into()),
    };
    let iv = interval_for(table, s_star);
    record.p_hat = Some(est.p_hat);
    record.eps_low = Some(iv.eps_low);
    record.eps_high = Some(iv.eps_high);
    record.inside = Some(iv.eps_low <= est.p_hat && est.p_hat <= iv.eps_high);
    record.changes = est.changes;
    record.tie_count = est.ties;
    record.draws = est.draws;
    record.audited = est.audited;
    record.audit_mismatches = est.audit_mismatches;
    Ok(record)
}

/// Aggregate counts over a campaign.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CampaignSummary {
    pub m: usize,
    pub beta: f64,
    pub trials: usize,
    pub clean_trials: usize,
    pub inside: usize,
    /// Discards by reason; a trial may have several.
    pub discarded_degenerate: usize,
    pub discarded_non_unique: usize,
    pub discarded_count_mismatch: usize,
    pub ties: usize,
    pub audited: usize,
    pub audit_mismatches: usize,
    pub median_s_star: Option<f64>,
    pub max_band_width: f64,
    /// `k` values where the upper bound decreases with `k`.
    pub monotonicity_warnings: Vec<usize>,
}

impl CampaignSummary {
    pub fn all_inside(&self) -> bool {
        self.inside == self.clean_trials
    }
}

pub fn summarize(config: &CargoConfig, table: &EpsilonTable, records: &[TrialRecord]) -> CampaignSummary {
    let clean: Vec<&TrialRecord> = records.iter().filter(|r| r.clean()).collect();
    let mut s: Vec<usize> = clean.iter().map(|r| r.s_star).collect();
    s.sort_unstable();
    let median_s_star = match s.len() {
        0 => None,
        n if n % 2 == 1 => Some(s[n / 2] as f64),
        n => Some(0.5 * (s[n / 2 - 1] + s[n / 2]) as f64),
    };
    CampaignSummary {
        m: config.m,
        beta: config.beta,
        trials: records.len(),
        clean_trials: clean.len(),
        inside: clean.iter().filter(|r| r.inside == Some(true)).count(),
        discarded_degenerate: records.iter().filter(|r| r.degenerate).count(),
        discarded_non_unique: records.iter().filter(|r| r.non_unique).count(),
        discarded_count_mismatch: records.iter().filter(|r| r.count_mismatch).count(),
        ties: clean.iter().map(|r| r.tie_count).sum(),
        audited: clean.iter().map(|r| r.audited).sum(),
        audit_mismatches: clean.iter().map(|r| r.audit_mismatches).sum(),
        median_s_star,
        max_band_width: table.rows.iter().map(|r| r.eps_high - r.eps_low).fold(0.0, f64::max),
        monotonicity_warnings: table.monotonicity_warnings(),
    }
}

/// Records ordered by trial index, the table they were judged against and
/// the summary.
#[derive(Clone, Debug)]
pub struct Campaign {
    pub table: EpsilonTable,
    pub records: Vec<TrialRecord>,
    pub summary: CampaignSummary,
}

/// Runs all trials of `config` in parallel.
pub fn run_campaign(config: &CargoConfig) -> Result<Campaign, Error> {
    config.validate()?;
    let table = epsilon_table(config.m, config.beta)?;
    run_campaign_with_table(config, table)
}

/// As [`run_campaign`] with a table already built for `(config.m, config.beta)`.
pub fn run_campaign_with_table(config: &CargoConfig, table: EpsilonTable) -> Result<Campaign, Error> {
    if table.m != config.m || table.beta != config.beta {
        return Err(Error::Config(format!(
            "table is for m = {}, beta = {:e}; config has m = {}, beta = {:e}",
            table.m, table.beta, config.m, config.beta
        )));
    }
    let records = (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(config, &table, t))
        .collect::<Result<Vec<_>, _>>()?;
    let summary = summarize(config, &table, &records);
    Ok(Campaign { table, records, summary })
}

pub fn write_trials_csv<W: Write>(records: &[TrialRecord], out: W) -> Result<(), Error> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `trials.csv`, `epsilon.csv` and `summary.json` into `dir`.
pub fn write_outputs(campaign: &Campaign, dir: &Path) -> Result<(), Error> {
    std::fs::create_dir_all(dir)?;
    write_trials_csv(&campaign.records, std::fs::File::create(dir.join("trials.csv"))?)?;
    campaign.table.write_csv(std::fs::File::create(dir.join("epsilon.csv"))?)?;
    let mut f = std::fs::File::create(dir.join("summary.json"))?;
    serde_json::to_writer_pretty(&mut f, &campaign.summary)?;
    writeln!(f)?;
    Ok(())
}
