use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context as _, Result};
use seqroctm::io::{
    parse_chain_document, parse_emitters, parse_functional_csv, parse_sequence, parse_tree_document,
    to_dot, write_functional_csv, write_sequence, ChainDocument, TreeDocument,
};
use seqroctm::rng::derive_seed;
use seqroctm::selection::{prune_generic, BicConfig, Criterion, EstimationResult, FunctionalConfig};
use seqroctm::simulate::{simulate_ctm, simulate_responses_categorical, simulate_responses_functional};
use seqroctm::tuning::{champion_trees, smc_select, BootstrapStrategy, ChampionChain, ChampionConfig, SmcConfig};
use seqroctm::{Alphabet, Context, PairedSample, Responses, Symbol, TransitionTable};

use crate::args::{
    Bootstrap, ChainArgs, ChampionsArgs, EstimateMethod, ExportDotArgs, OutputArgs, SampleArgs, SimulateArgs,
    TuneArgs,
};

/// A result the numerics could not produce (exit code 3).
#[derive(Debug)]
pub struct NumericError(pub String);

impl std::fmt::Display for NumericError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "numeric failure: {}", self.0)
    }
}

impl std::error::Error for NumericError {}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn emit(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn alphabet_for(size: Option<usize>, seq: &[Symbol]) -> Result<Alphabet> {
    Ok(match size {
        Some(s) => Alphabet::new(s)?,
        None => Alphabet::covering(seq, 2)?,
    })
}

fn load_sample(args: &SampleArgs) -> Result<PairedSample> {
    let x = parse_sequence(&read(&args.x)?).with_context(|| format!("in {}", args.x.display()))?;
    let alphabet = alphabet_for(args.alphabet_size, &x)?;
    let sample = if let Some(p) = &args.y {
        let y = parse_sequence(&read(p)?).with_context(|| format!("in {}", p.display()))?;
        let responses = alphabet_for(args.response_alphabet_size, &y)?;
        PairedSample::categorical(alphabet, x, y, responses)?
    } else if let Some(p) = &args.y_functional {
        let y = parse_functional_csv(&read(p)?).with_context(|| format!("in {}", p.display()))?;
        PairedSample::functional(alphabet, x, y)?
    } else {
        PairedSample::chain(alphabet, x)?
    };
    Ok(sample)
}

fn finite(value: f64, what: &str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(NumericError(format!("{what} is {value}")).into())
    }
}

pub fn simulate(args: &SimulateArgs) -> Result<()> {
    if args.length == 0 {
        bail!("--length must be at least 1");
    }
    let doc = parse_tree_document(&read(&args.tree)?).with_context(|| format!("in {}", args.tree.display()))?;
    let (tree, table) = doc.model()?;
    let table = table.ok_or_else(|| anyhow!("{} has no transition rows", args.tree.display()))?;
    let x = simulate_ctm(&tree, &table.fill_unobserved_uniform(), args.length, args.seed, args.burn_in)?;
    emit(args.out_x.as_ref(), &write_sequence(&x))?;

    let y_seed = derive_seed(args.seed, 1);
    let y_text = if let Some(p) = &args.response_tree {
        let doc = parse_tree_document(&read(p)?).with_context(|| format!("in {}", p.display()))?;
        let (ty, q) = doc.model()?;
        let q = q.ok_or_else(|| anyhow!("{} has no transition rows", p.display()))?;
        let y = simulate_responses_categorical(&x, &ty, &q.fill_unobserved_uniform(), y_seed)?;
        Some(write_sequence(&y))
    } else if let Some(p) = &args.emitters {
        let emitters = parse_emitters(&read(p)?).with_context(|| format!("in {}", p.display()))?;
        let y = simulate_responses_functional(&x, &tree, &emitters, y_seed)?;
        Some(write_functional_csv(&y))
    } else {
        None
    };
    match (y_text, &args.out_y) {
        (Some(text), Some(path)) => emit(Some(path), &text),
        (Some(_), None) => bail!("responses requested but --out-y is missing"),
        (None, Some(_)) => bail!("--out-y needs --response-tree or --emitters"),
        (None, None) => Ok(()),
    }
}

fn estimation_report(result: &EstimationResult, settings: &[(&str, String)]) -> String {
    let mut s = String::new();
    for (k, v) in settings {
        writeln!(s, "{k}: {v}").unwrap();
    }
    writeln!(s, "tree: {}", result.tree).unwrap();
    writeln!(s, "leaves: {}", result.tree.len()).unwrap();
    if let Some(ll) = result.log_likelihood {
        writeln!(s, "log_likelihood: {ll}").unwrap();
    }
    writeln!(s, "\nstem\tbranch\tstatistic\tthreshold\tdecision").unwrap();
    for step in &result.prune_trace {
        let branch: Vec<String> = step.branch.iter().map(ToString::to_string).collect();
        writeln!(
            s,
            "{}\t{}\t{}\t{}\t{}",
            step.stem,
            branch.join(" "),
            step.statistic,
            step.threshold,
            if step.pruned { "prune" } else { "keep" }
        )
        .unwrap();
    }
    s
}

fn finish_estimate(
    result: &EstimationResult,
    alphabet: Alphabet,
    settings: Vec<(&str, String)>,
    metadata: Vec<(&str, serde_json::Value)>,
    output: &OutputArgs,
) -> Result<()> {
    if let Some(ll) = result.log_likelihood {
        finite(ll, "log-likelihood")?;
    }
    debug_assert_eq!(alphabet, result.tree.alphabet());
    let mut doc = TreeDocument::new(&result.tree, result.q_hat.as_ref());
    for (k, v) in metadata {
        doc = doc.with_metadata(k, v);
    }
    if let Some(ll) = result.log_likelihood {
        doc = doc.with_metadata("log_likelihood", ll);
    }
    emit(output.out.as_ref(), &doc.to_json())?;
    if let Some(path) = &output.report {
        emit(Some(path), &estimation_report(result, &settings))?;
    }
    Ok(())
}

pub fn estimate(method: &EstimateMethod) -> Result<()> {
    match method {
        EstimateMethod::Bic { sample, height, c, no_log_n, output } => {
            let s = load_sample(sample)?;
            let mut cfg = BicConfig::new(*c);
            cfg.penalty_uses_log_n = !no_log_n;
            let result = prune_generic(&s, *height, &Criterion::Bic(cfg))?;
            finish_estimate(
                &result,
                s.alphabet(),
                vec![
                    ("criterion", "bic".into()),
                    ("height", height.to_string()),
                    ("c", c.to_string()),
                    ("penalty_uses_log_n", (!no_log_n).to_string()),
                    ("n", s.len().to_string()),
                ],
                vec![
                    ("criterion", "bic".into()),
                    ("height", (*height).into()),
                    ("c", (*c).into()),
                    ("penalty_uses_log_n", (!no_log_n).into()),
                    ("n", s.len().into()),
                ],
                output,
            )
        }
        EstimateMethod::Delta { sample, height, delta, output } => {
            let s = load_sample(sample)?;
            let result = prune_generic(&s, *height, &Criterion::Delta { delta: *delta })?;
            finish_estimate(
                &result,
                s.alphabet(),
                vec![
                    ("criterion", "delta".into()),
                    ("height", height.to_string()),
                    ("delta", delta.to_string()),
                    ("n", s.len().to_string()),
                ],
                vec![
                    ("criterion", "delta".into()),
                    ("height", (*height).into()),
                    ("delta", (*delta).into()),
                    ("n", s.len().into()),
                ],
                output,
            )
        }
        EstimateMethod::Functional {
            sample,
            height,
            nbm,
            alpha,
            beta,
            seed,
            no_bonferroni,
            output,
        } => {
            let s = load_sample(sample)?;
            let mut cfg = FunctionalConfig::new(*nbm, *alpha, *beta, *seed);
            cfg.bonferroni = !no_bonferroni;
            let result = prune_generic(&s, *height, &Criterion::Functional(cfg))?;
            finish_estimate(
                &result,
                s.alphabet(),
                vec![
                    ("criterion", "functional".into()),
                    ("height", height.to_string()),
                    ("nbm", nbm.to_string()),
                    ("alpha", alpha.to_string()),
                    ("beta", beta.to_string()),
                    ("seed", seed.to_string()),
                    ("bonferroni", (!no_bonferroni).to_string()),
                    ("n", s.len().to_string()),
                ],
                vec![
                    ("criterion", "functional".into()),
                    ("height", (*height).into()),
                    ("nbm", (*nbm).into()),
                    ("alpha", (*alpha).into()),
                    ("beta", (*beta).into()),
                    ("seed", (*seed).into()),
                    ("bonferroni", (!no_bonferroni).into()),
                    ("n", s.len().into()),
                ],
                output,
            )
        }
        EstimateMethod::Ctm { x, alphabet_size, height, c, output } => {
            let seq = parse_sequence(&read(x)?).with_context(|| format!("in {}", x.display()))?;
            let alphabet = alphabet_for(*alphabet_size, &seq)?;
            let n = seq.len();
            let result = seqroctm::selection::estimate_ctm(&seq, alphabet, *height, BicConfig::new(*c))?;
            finish_estimate(
                &result,
                alphabet,
                vec![
                    ("criterion", "ctm".into()),
                    ("height", height.to_string()),
                    ("c", c.to_string()),
                    ("n", n.to_string()),
                ],
                vec![
                    ("criterion", "ctm".into()),
                    ("height", (*height).into()),
                    ("c", (*c).into()),
                    ("n", n.into()),
                ],
                output,
            )
        }
    }
}

fn champion_config(args: &ChainArgs) -> Result<ChampionConfig> {
    let height = args.height.ok_or_else(|| anyhow!("--height is required to compute the champion trees"))?;
    let mut cfg = ChampionConfig::new(height);
    cfg.c_min = args.c_min;
    cfg.c_max = args.c_max;
    cfg.tol = args.tol;
    Ok(cfg)
}

fn check_chain(chain: &ChampionChain) -> Result<()> {
    for &ll in &chain.log_likelihoods {
        finite(ll, "champion log-likelihood")?;
    }
    Ok(())
}

pub fn champions(args: &ChampionsArgs) -> Result<()> {
    let sample = load_sample(&args.sample)?;
    let chain = champion_trees(&sample, &champion_config(&args.chain)?)?;
    check_chain(&chain)?;
    let doc = ChainDocument::new(&chain);
    emit(args.out.as_ref(), &doc.to_json())?;
    if let Some(path) = &args.csv {
        emit(Some(path), &doc.to_csv())?;
    }
    Ok(())
}

fn renewal_context(text: &str) -> Result<Context> {
    Ok(Context::from(parse_sequence(text).context("in --renewal")?))
}

pub fn tune(args: &TuneArgs) -> Result<()> {
    let sample = load_sample(&args.sample)?;
    let chain = match &args.chain {
        Some(p) => parse_chain_document(&read(p)?).with_context(|| format!("in {}", p.display()))?,
        None => champion_trees(&sample, &champion_config(&args.search)?)?,
    };
    check_chain(&chain)?;
    let mut cfg = SmcConfig::for_length(sample.len());
    if let Some(n1) = args.n1 {
        cfg.n1 = n1;
    }
    if let Some(n2) = args.n2 {
        cfg.n2 = n2;
    }
    cfg.b = args.b;
    cfg.alpha = args.alpha;
    cfg.seed = args.seed;
    cfg.refit = !args.frozen;
    cfg.strategy = match args.bootstrap {
        Bootstrap::None => BootstrapStrategy::None,
        Bootstrap::Parametric => BootstrapStrategy::Parametric { c: args.stimulus_c },
        Bootstrap::Blocks => BootstrapStrategy::Blocks {
            renewal: args.renewal.as_deref().map(renewal_context).transpose()?,
        },
    };
    let outcome = smc_select(&chain, &sample, &cfg)?;
    for t in &outcome.tests {
        if t.statistic.is_nan() || t.p_value.is_nan() {
            return Err(NumericError("t-test produced NaN".into()).into());
        }
    }

    let table: &TransitionTable = &chain.tables[outcome.index];
    let mut doc = TreeDocument::new(&outcome.tree, Some(table))
        .with_metadata("criterion", "smc")
        .with_metadata("index", outcome.index)
        .with_metadata("chain_length", chain.len())
        .with_metadata("cutoff", chain.cutoffs[outcome.index])
        .with_metadata("n1", cfg.n1)
        .with_metadata("n2", cfg.n2)
        .with_metadata("B", cfg.b)
        .with_metadata("alpha", cfg.alpha)
        .with_metadata("bootstrap", cfg.strategy.name())
        .with_metadata("seed", cfg.seed)
        .with_metadata("refit", cfg.refit);
    if let Some(w) = &outcome.renewal {
        doc = doc.with_metadata("renewal", w.symbols().to_vec());
    }
    emit(args.output.out.as_ref(), &doc.to_json())?;

    if let Some(path) = &args.output.report {
        let mut s = String::new();
        writeln!(s, "n: {}", sample.len()).unwrap();
        writeln!(s, "responses: {}", match sample.y() {
            Responses::Categorical { .. } => "categorical",
            Responses::Functional(_) => "functional",
        })
        .unwrap();
        writeln!(s, "n1: {}\nn2: {}\nB: {}\nalpha: {}", cfg.n1, cfg.n2, cfg.b, cfg.alpha).unwrap();
        writeln!(s, "bootstrap: {}\nseed: {}\nrefit: {}", cfg.strategy.name(), cfg.seed, cfg.refit).unwrap();
        if let Some(w) = &outcome.renewal {
            writeln!(s, "renewal: {w}").unwrap();
        }
        writeln!(s, "\npair\tleaves\tt\tp_value\treject").unwrap();
        for (k, t) in outcome.tests.iter().enumerate() {
            writeln!(
                s,
                "{k}-{}\t{}-{}\t{}\t{:e}\t{}",
                k + 1,
                chain.trees[k].len(),
                chain.trees[k + 1].len(),
                t.statistic,
                t.p_value,
                t.reject
            )
            .unwrap();
        }
        writeln!(s, "\nselected: {} {}", outcome.index, outcome.tree).unwrap();
        emit(Some(path), &s)?;
    }
    Ok(())
}

pub fn export_dot(args: &ExportDotArgs) -> Result<()> {
    let doc = parse_tree_document(&read(&args.tree)?).with_context(|| format!("in {}", args.tree.display()))?;
    let (tree, table) = doc.model()?;
    let table = if args.no_probabilities { None } else { table };
    emit(args.out.as_ref(), &to_dot(&tree, table.as_ref()))
}
