use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use contour_attractor::classify::{classify, explain};
use contour_attractor::ged::Budget;
use contour_attractor::graph::{serialize, to_dot};
use contour_attractor::harness::{
    evaluate, explanations_jsonl, load_idx, test_slice, train_from_config, write_outputs, HarnessConfig,
};
use contour_attractor::vectorize::{vectorize, Raster};
use contour_attractor::ConceptLibrary;

#[derive(Parser)]
#[command(name = "contour-attractor", version, about = "Few-shot contour classification with concept graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Vectorize an image and print its contour graph as JSON (or DOT).
    Vectorize {
        #[arg(long)]
        image: PathBuf,
        /// Config whose [vectorize] section is used; defaults apply otherwise.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Treat dark strokes on a light background as foreground.
        #[arg(long)]
        invert: bool,
        #[arg(long)]
        dot: bool,
    },
    /// Train the concept library described by a config file.
    Train {
        #[arg(long, default_value = "configs/default.toml")]
        config: PathBuf,
        #[arg(long, default_value = "library.json")]
        out: PathBuf,
    },
    /// Classify one image against a trained library.
    Classify {
        #[arg(long)]
        image: PathBuf,
        #[arg(long)]
        library: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Wall-clock limit per concept comparison; 0 means none.
        #[arg(long, default_value_t = 2000)]
        budget_ms: u64,
        /// Search expansion limit per comparison; 0 means none.
        #[arg(long, default_value_t = 0)]
        max_expansions: u64,
        #[arg(long)]
        invert: bool,
        /// Also print a plain-text explanation.
        #[arg(long)]
        explain: bool,
    },
    /// Classify the held-out test slice and write metrics, confusion matrix and timing.
    Evaluate {
        #[arg(long, default_value = "configs/default.toml")]
        config: PathBuf,
        /// Trained library; trained from the config when omitted.
        #[arg(long)]
        library: Option<PathBuf>,
        #[arg(long, default_value = "results")]
        out_dir: PathBuf,
        /// Keep only every n-th test image.
        #[arg(long, default_value_t = 1)]
        every: usize,
        /// Write per-image explanations to explanations.jsonl.
        #[arg(long)]
        explain: bool,
    },
    /// Write one Graphviz DOT file per concept.
    ExportConcepts {
        #[arg(long)]
        library: PathBuf,
        #[arg(long, default_value = "concepts")]
        out_dir: PathBuf,
    },
}

fn load_config(path: Option<&Path>) -> Result<HarnessConfig<f64>> {
    match path {
        Some(p) => HarnessConfig::load(p).with_context(|| format!("loading {}", p.display())),
        None => Ok(HarnessConfig::default()),
    }
}

fn load_image(path: &Path, invert: bool) -> Result<Raster> {
    let img = image::open(path).with_context(|| format!("reading {}", path.display()))?.to_luma8();
    let (w, h) = img.dimensions();
    let mut pixels = img.into_raw();
    if invert {
        pixels.iter_mut().for_each(|p| *p = 255 - *p);
    }
    Ok(Raster::from_pixels(w as usize, h as usize, pixels))
}

fn load_library(path: &Path) -> Result<ConceptLibrary> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(ConceptLibrary::from_json(&text)?)
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::Vectorize { image, config, invert, dot } => {
            let cfg = load_config(config.as_deref())?;
            let g = vectorize(&load_image(&image, invert)?, &cfg.vectorize)?;
            if dot {
                print!("{}", to_dot(&g, &image.file_stem().unwrap_or_default().to_string_lossy()));
            } else {
                println!("{}", serialize(&g)?);
            }
        }
        Command::Train { config, out } => {
            let cfg = load_config(Some(&config))?;
            let data = load_idx(&cfg.data.images, &cfg.data.labels)?;
            let (lib, summary) = train_from_config(&data, &cfg)?;
            for s in &summary {
                eprintln!(
                    "{}: {} graphs ({} failed to vectorize), {} absorbed, {} nodes / {} edges",
                    s.label, s.graphs, s.vectorize_failures, s.absorbed, s.nodes, s.edges
                );
            }
            write(&out, &lib.to_json())?;
        }
        Command::Classify { image, library, config, budget_ms, max_expansions, invert, explain: verbose } => {
            let cfg = load_config(config.as_deref())?;
            let lib = load_library(&library)?;
            let g = vectorize(&load_image(&image, invert)?, &cfg.vectorize)?;
            let budget = Budget {
                time: (budget_ms > 0).then(|| Duration::from_millis(budget_ms)),
                max_expansions: (max_expansions > 0).then_some(max_expansions),
            };
            let report = classify(&g, &lib, &cfg.ged, budget)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            if verbose {
                println!("{}", explain(&report));
            }
        }
        Command::Evaluate { config, library, out_dir, every, explain: verbose } => {
            let cfg = load_config(Some(&config))?;
            let data = load_idx(&cfg.data.images, &cfg.data.labels)?;
            let lib = match library {
                Some(p) => load_library(&p)?,
                None => train_from_config(&data, &cfg)?.0,
            };
            let slice = test_slice(&data, &cfg.classes, cfg.data.test_per_class).every(every);
            if slice.is_empty() {
                bail!("the test slice is empty");
            }
            let (result, per_image) = evaluate(&lib, &slice, &cfg, cfg.budget());
            write_outputs(&out_dir, &result)?;
            write(&out_dir.join("library.json"), &lib.to_json())?;
            if verbose {
                write(&out_dir.join("explanations.jsonl"), &explanations_jsonl(&per_image))?;
            }
            println!(
                "accuracy {:.2}%  precision {:.2}  recall {:.2}  f1 {:.2}  classified {}  failed {}",
                result.accuracy, result.precision, result.recall, result.f1, result.classified_count, result.failed_count
            );
            print!("{}", result.confusion.to_csv());
        }
        Command::ExportConcepts { library, out_dir } => {
            let lib = load_library(&library)?;
            std::fs::create_dir_all(&out_dir)?;
            for (label, dot) in lib.to_dot() {
                write(&out_dir.join(format!("{label}.dot")), &dot)?;
            }
        }
    }
    Ok(())
}
