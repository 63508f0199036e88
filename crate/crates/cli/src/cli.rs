//! Argument parsing and command dispatch.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use srg_core::{Region, SignalClass, SystemExpr};

use crate::jobs::{self, JobError, JobResult, LoopRequest, SampleRequest, SrgRequest};
use crate::svg::{self, Layer, Witness};

#[derive(Debug, Parser)]
#[command(name = "srg", version, about = "Scaled relative graph bounds and graphical margins")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every command. JSON arguments accept inline JSON or a file path.
#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Signal class JSON.
    #[arg(long, global = true)]
    pub class: Option<String>,
    /// Region resolution ε.
    #[arg(long, global = true)]
    pub resolution: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Use sampled refinements of static nonlinearities (uncertified).
    #[arg(long, global = true)]
    pub trust_sampled: bool,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Outer bound on the SRG of a system.
    Bound {
        #[arg(long)]
        system: String,
        #[command(flatten)]
        common: Common,
    },
    /// Robustness margin of the loop formed by a controller and a plant.
    Margin {
        #[arg(long)]
        controller: String,
        #[arg(long)]
        plant: String,
        #[command(flatten)]
        common: Common,
    },
    /// Sensitivity margin and the sensitivity SRG bound.
    Sensitivity {
        #[arg(long)]
        plant: String,
        #[arg(long)]
        controller: String,
        #[command(flatten)]
        common: Common,
    },
    /// Empirical SRG from simulated input pairs.
    Sample {
        #[arg(long)]
        system: String,
        #[arg(long, default_value_t = 200)]
        pairs: usize,
        #[command(flatten)]
        common: Common,
    },
    /// SVG picture of a bound, a region, or a margin construction.
    Render {
        #[arg(long, conflicts_with_all = ["region", "controller"])]
        system: Option<String>,
        /// Region JSON to draw as is.
        #[arg(long, conflicts_with = "controller")]
        region: Option<String>,
        #[arg(long, requires = "plant")]
        controller: Option<String>,
        #[arg(long, requires = "controller")]
        plant: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// JSON API server.
    Serve {
        #[arg(long, default_value_t = 8080, value_parser = clap::value_parser!(u16).range(1024..))]
        port: u16,
    },
}

fn load<T: DeserializeOwned>(arg: &str) -> JobResult<T> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return jobs::parse(arg);
    }
    let text = std::fs::read_to_string(arg)
        .map_err(|e| JobError::Validation(format!("cannot read `{arg}`: {e}")))?;
    jobs::parse(&text)
}

fn class(common: &Common) -> JobResult<SignalClass> {
    common.class.as_deref().map_or(Ok(SignalClass::default()), load)
}

fn write(out: Option<&Path>, text: &str) -> JobResult<()> {
    match out {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| JobError::Validation(format!("cannot write `{}`: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn loop_request(plant: &str, controller: &str, common: &Common) -> JobResult<LoopRequest> {
    Ok(LoopRequest {
        plant: load(plant)?,
        controller: load(controller)?,
        class: class(common)?,
        resolution: common.resolution,
        trust_sampled: common.trust_sampled,
        seed: common.seed,
    })
}

fn srg_request(system: &str, common: &Common) -> JobResult<SrgRequest> {
    Ok(SrgRequest {
        system: load(system)?,
        class: class(common)?,
        resolution: common.resolution,
        trust_sampled: common.trust_sampled,
        seed: common.seed,
    })
}

fn render(
    system: Option<&str>,
    region: Option<&str>,
    loop_parts: Option<(&str, &str)>,
    common: &Common,
) -> JobResult<String> {
    if let Some((controller, plant)) = loop_parts {
        let req = loop_request(plant, controller, common)?;
        let inverse = jobs::bound(&SrgRequest {
            system: SystemExpr::inverse(req.controller.clone()),
            class: req.class,
            resolution: req.resolution,
            trust_sampled: req.trust_sampled,
            seed: req.seed,
        })?;
        let plant = jobs::bound(&SrgRequest {
            system: req.plant.clone(),
            class: req.class,
            resolution: req.resolution,
            trust_sampled: req.trust_sampled,
            seed: req.seed,
        })?;
        let report = jobs::margin(&req)?;
        let layers = [
            Layer {
                label: "SRG(C⁻¹)".into(),
                region: inverse.region,
            },
            Layer {
                label: "−SRG(plant)".into(),
                region: plant.region.neg(),
            },
        ];
        return Ok(svg::render(&layers, report.witness.map(|(a, b)| Witness(a, b))));
    }
    let (label, region) = match (system, region) {
        (Some(s), _) => ("SRG bound".to_string(), jobs::bound(&srg_request(s, common)?)?.region),
        (None, Some(r)) => {
            let region: Region = load(r)?;
            ("region".to_string(), region)
        }
        (None, None) => {
            return Err(JobError::Validation(
                "render needs --system, --region, or --controller with --plant".into(),
            ))
        }
    };
    Ok(svg::render(&[Layer { label, region }], None))
}

/// Runs a command; `serve` blocks until the server stops.
pub fn run(cli: Cli) -> JobResult<()> {
    match cli.command {
        Command::Bound { system, common } => {
            let b = jobs::bound(&srg_request(&system, &common)?)?;
            write(common.out.as_deref(), &jobs::to_json(&b))
        }
        Command::Margin {
            controller,
            plant,
            common,
        } => {
            let r = jobs::margin(&loop_request(&plant, &controller, &common)?)?;
            write(common.out.as_deref(), &jobs::to_json(&r))
        }
        Command::Sensitivity {
            plant,
            controller,
            common,
        } => {
            let r = jobs::sensitivity(&loop_request(&plant, &controller, &common)?)?;
            write(common.out.as_deref(), &jobs::to_json(&r))
        }
        Command::Sample {
            system,
            pairs,
            common,
        } => {
            let req = SampleRequest {
                system: load(&system)?,
                class: class(&common)?,
                n_pairs: pairs,
                seed: common.seed,
            };
            write(common.out.as_deref(), &jobs::to_json(&jobs::sample(&req)?))
        }
        Command::Render {
            system,
            region,
            controller,
            plant,
            common,
        } => {
            let loop_parts = controller.as_deref().zip(plant.as_deref());
            let svg = render(system.as_deref(), region.as_deref(), loop_parts, &common)?;
            write(common.out.as_deref(), &svg)
        }
        Command::Serve { port } => {
            let rt = tokio::runtime::Runtime::new()
                .map_err(|e| JobError::Numeric(format!("cannot start runtime: {e}")))?;
            rt.block_on(crate::server::serve(port))
                .map_err(|e| JobError::Validation(format!("cannot serve on port {port}: {e}")))
        }
    }
}
