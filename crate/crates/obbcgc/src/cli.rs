//! `obbcgc` subcommands.
//!
//! Values come from, in increasing priority: built-in defaults, `--config`,
//! then command-line flags. Files go under `--out-dir` (default `out`).

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use obbcgc_core::assignment::{
    assign_classic_scores, assign_ocp_scores, score_matrix, GroundTruthObject,
};
use obbcgc_core::bench::{
    default_bin_edges, proposal_histogram, run_comparison, BenchConfig, IoUHistogram, Trial,
};
use obbcgc_core::consistency::ProposalPair;
use obbcgc_core::geometry::{hbb_iou, o2mer, obb_iou};
use obbcgc_core::{HorizontalBox, OrientedBox};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::dota::{read_dota_file, write_records};
use crate::format::{fmt_hbb, fmt_num, parse_box, parse_obb, InlineBox};
use crate::report::{assignment_csv, histogram_csv, json_bytes, write_atomic, LabelCounts};
use crate::{generate_anchors, Error, Result};

const DEFAULT_OUT_DIR: &str = "out";

#[derive(Debug, Parser)]
#[command(
    name = "obbcgc",
    version,
    about = "Oriented box geometry, consistency loss and OCP label assignment"
)]
pub struct Args {
    /// Seed for every random draw (overrides the config's bench seed).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Run configuration, TOML or JSON (by extension).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory for output files.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// IoU of two inline boxes: rotated if either has an angle.
    Iou {
        /// cx,cy,w,h or cx,cy,w,h,theta_deg
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Axis-aligned rectangle enclosing an inline oriented box.
    O2mer {
        /// cx,cy,w,h,theta_deg
        #[arg(long = "box", allow_hyphen_values = true)]
        obb: String,
    },
    /// DOTA annotation files to canonical box CSV, one `<stem>.csv` per file.
    Convert { files: Vec<PathBuf> },
    /// OCP and max-IoU label assignment of a generated anchor grid.
    Assign {
        /// DOTA annotation files, one per image.
        files: Vec<PathBuf>,
        /// Image size as W,H.
        #[arg(long, value_parser = parse_size)]
        image_size: Option<(f64, f64)>,
    },
    /// Paired descent runs with and without the consistency term.
    Bench {
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Proposal IoU histogram, from a proposals CSV or from bench runs.
    Hist {
        /// DOTA annotation file holding the ground truth.
        #[arg(long, requires = "proposals", conflicts_with = "synthetic")]
        annotations: Option<PathBuf>,
        /// CSV with columns hbb_cx,hbb_cy,hbb_w,hbb_h,cx,cy,w,h,theta_deg.
        #[arg(long, requires = "annotations")]
        proposals: Option<PathBuf>,
        /// Histogram the final proposals of the bench run with the consistency term.
        #[arg(long)]
        synthetic: bool,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        steps: Option<usize>,
    },
}

impl Args {
    /// Parses a full argument list (program name first) without exiting on error.
    pub fn try_from_argv<I, T>(argv: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        Self::try_parse_from(argv).map_err(|e| Error::argument("argv", e.to_string()))
    }
}

fn parse_size(text: &str) -> std::result::Result<(f64, f64), String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [w, h] = parts.as_slice() else {
        return Err(format!("expected W,H, got `{text}`"));
    };
    let w: f64 = w.parse().map_err(|_| format!("`{w}` is not a number"))?;
    let h: f64 = h.parse().map_err(|_| format!("`{h}` is not a number"))?;
    if !(w > 0.0 && h > 0.0 && w.is_finite() && h.is_finite()) {
        return Err(format!("image size must be positive, got `{text}`"));
    }
    Ok((w, h))
}

struct Context {
    config: RunConfig,
    out_dir: PathBuf,
}

impl Context {
    fn new(args: &Args) -> Result<Self> {
        let mut config = match &args.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(seed) = args.seed {
            config.bench.seed = seed;
        }
        let out_dir = args
            .out_dir
            .clone()
            .or_else(|| config.io.out_dir.clone())
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
        Ok(Self { config, out_dir })
    }

    fn annotations(&self, files: &[PathBuf]) -> Result<Vec<PathBuf>> {
        let files = if files.is_empty() {
            self.config.io.annotations.clone()
        } else {
            files.to_vec()
        };
        if files.is_empty() {
            return Err(Error::argument("files", "no annotation files given"));
        }
        Ok(files)
    }

    fn bench(&self, trials: Option<usize>, steps: Option<usize>) -> Result<BenchConfig> {
        let mut cfg = self.config.bench;
        cfg.trials = trials.unwrap_or(cfg.trials);
        cfg.steps = steps.unwrap_or(cfg.steps);
        cfg.validate()?;
        Ok(cfg)
    }

    fn write(&self, name: impl AsRef<Path>, bytes: &[u8]) -> Result<PathBuf> {
        let path = self.out_dir.join(name);
        write_atomic(&path, bytes)?;
        Ok(path)
    }
}

pub fn run(args: &Args, out: &mut impl Write) -> Result<()> {
    let stdout = |out: &mut dyn Write, line: &str| {
        writeln!(out, "{line}").map_err(|e| Error::io("<stdout>", e))
    };
    match &args.command {
        Command::Iou { a, b } => {
            let v = match (parse_box("--a", a)?, parse_box("--b", b)?) {
                (InlineBox::Horizontal(a), InlineBox::Horizontal(b)) => hbb_iou(&a, &b),
                (a, b) => obb_iou(&as_obb(a)?, &as_obb(b)?),
            };
            stdout(out, &fmt_num(v))
        }
        Command::O2mer { obb } => stdout(out, &fmt_hbb(&o2mer(&parse_obb("--box", obb)?))),
        Command::Convert { files } => {
            let ctx = Context::new(args)?;
            for file in ctx.annotations(files)? {
                let objects = read_dota_file(&file)?;
                let path = ctx.write(output_name(&file, ".csv")?, &write_records(&objects)?)?;
                stdout(
                    out,
                    &format!(
                        "{}: {} objects -> {}",
                        file.display(),
                        objects.len(),
                        path.display()
                    ),
                )?;
            }
            Ok(())
        }
        Command::Assign { files, image_size } => {
            let ctx = Context::new(args)?;
            let (w, h) = image_size.or(ctx.config.io.image_size).ok_or_else(|| {
                Error::argument("--image-size", "required (flag or config io.image_size)")
            })?;
            assign(&ctx, &ctx.annotations(files)?, w, h, out)
        }
        Command::Bench { trials, steps } => {
            let ctx = Context::new(args)?;
            let cfg = ctx.bench(*trials, *steps)?;
            let cmp = run_comparison(&cfg)?;
            ctx.write("bench_cgc_on.json", &json_bytes(&cmp.cgc_on)?)?;
            ctx.write("bench_cgc_off.json", &json_bytes(&cmp.cgc_off)?)?;
            let summary = BenchSummaryFile {
                config: cfg,
                cgc_on: cmp.cgc_on.summary,
                cgc_off: cmp.cgc_off.summary,
                win_rate: cmp.win_rate,
            };
            ctx.write("bench_summary.json", &json_bytes(&summary)?)?;
            stdout(
                out,
                &format!(
                    "consistency IoU: on {} off {}, win rate {}",
                    fmt_num(summary.cgc_on.mean_consistency_iou),
                    fmt_num(summary.cgc_off.mean_consistency_iou),
                    fmt_num(summary.win_rate)
                ),
            )
        }
        Command::Hist {
            annotations,
            proposals,
            synthetic,
            trials,
            steps,
        } => {
            let ctx = Context::new(args)?;
            let hist = match (annotations, proposals) {
                (Some(ann), Some(prop)) => {
                    let gts: Vec<GroundTruthObject> = read_dota_file(ann)?
                        .iter()
                        .enumerate()
                        .map(|(i, o)| o.to_ground_truth(i as u64))
                        .collect();
                    proposal_histogram(&read_proposals(prop)?, &gts, &default_bin_edges())?
                }
                _ if *synthetic => synthetic_histogram(&ctx.bench(*trials, *steps)?)?,
                _ => {
                    return Err(Error::argument(
                        "hist",
                        "give --annotations with --proposals, or --synthetic",
                    ))
                }
            };
            let path = ctx.write("hist.csv", &histogram_csv(&hist)?)?;
            stdout(out, &format!("{}", path.display()))
        }
    }
}

fn as_obb(b: InlineBox) -> Result<OrientedBox> {
    Ok(match b {
        InlineBox::Oriented(o) => o,
        InlineBox::Horizontal(h) => OrientedBox::new(h.cx(), h.cy(), h.w(), h.h(), 0.0)?,
    })
}

fn output_name(file: &Path, suffix: &str) -> Result<String> {
    let stem = file.file_stem().and_then(|s| s.to_str()).ok_or_else(|| {
        Error::argument(
            "files",
            format!("cannot name output for {}", file.display()),
        )
    })?;
    Ok(format!("{stem}{suffix}"))
}

#[derive(Debug, Serialize)]
struct ImageSummary {
    annotation: PathBuf,
    objects: usize,
    ocp: LabelCounts,
    classic: LabelCounts,
}

#[derive(Debug, Serialize)]
struct AssignSummaryFile {
    config: RunConfig,
    image_size: (f64, f64),
    anchors: usize,
    images: Vec<ImageSummary>,
}

fn assign(ctx: &Context, files: &[PathBuf], w: f64, h: f64, out: &mut impl Write) -> Result<()> {
    let cfg = &ctx.config;
    let anchors = generate_anchors(w, h, &cfg.anchor_grid)?;
    let mut images = Vec::new();
    for file in files {
        // ground-truth ids are object positions in the file
        let gts: Vec<GroundTruthObject> = read_dota_file(file)?
            .iter()
            .enumerate()
            .map(|(i, o)| o.to_ground_truth(i as u64))
            .collect();
        let ids: Vec<u64> = gts.iter().map(|g| g.id).collect();
        let scores = score_matrix(&anchors, &gts);
        let ocp = assign_ocp_scores(&scores, &ids, &cfg.assignment)?;
        let classic = assign_classic_scores(
            &scores,
            &ids,
            cfg.assignment.threshold,
            cfg.assignment.candidate_iou,
        )?;
        ctx.write(output_name(file, "_ocp.csv")?, &assignment_csv(&ocp)?)?;
        ctx.write(
            output_name(file, "_classic.csv")?,
            &assignment_csv(&classic)?,
        )?;
        let summary = ImageSummary {
            annotation: file.clone(),
            objects: gts.len(),
            ocp: LabelCounts::from(&ocp),
            classic: LabelCounts::from(&classic),
        };
        writeln!(
            out,
            "{}: {} objects, {} anchors, ocp positives {}, classic positives {}",
            file.display(),
            summary.objects,
            anchors.len(),
            summary.ocp.positive,
            summary.classic.positive
        )
        .map_err(|e| Error::io("<stdout>", e))?;
        images.push(summary);
    }
    let summary = AssignSummaryFile {
        config: cfg.clone(),
        image_size: (w, h),
        anchors: anchors.len(),
        images,
    };
    ctx.write("assign_summary.json", &json_bytes(&summary)?)?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct BenchSummaryFile {
    config: BenchConfig,
    cgc_on: obbcgc_core::bench::BenchSummary,
    cgc_off: obbcgc_core::bench::BenchSummary,
    win_rate: f64,
}

#[derive(Debug, Deserialize)]
struct ProposalRow {
    hbb_cx: f64,
    hbb_cy: f64,
    hbb_w: f64,
    hbb_h: f64,
    cx: f64,
    cy: f64,
    w: f64,
    h: f64,
    theta_deg: f64,
}

fn read_proposals(path: &Path) -> Result<Vec<ProposalPair>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let parse = || -> Result<Vec<ProposalPair>> {
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let mut pairs = Vec::new();
        for (i, row) in reader.deserialize::<ProposalRow>().enumerate() {
            let line = i + 2;
            let r = row.map_err(|e| Error::Parse {
                line,
                message: e.to_string(),
            })?;
            let pair = HorizontalBox::new(r.hbb_cx, r.hbb_cy, r.hbb_w, r.hbb_h)
                .and_then(|hbb| {
                    Ok(ProposalPair::new(
                        hbb,
                        OrientedBox::from_degrees(r.cx, r.cy, r.w, r.h, r.theta_deg)?,
                    ))
                })
                .map_err(|e| Error::Parse {
                    line,
                    message: e.to_string(),
                })?;
            pairs.push(pair);
        }
        Ok(pairs)
    };
    parse().map_err(|e| e.in_file(path))
}

/// Final proposals of each trial against that trial's own ground truth.
fn synthetic_histogram(cfg: &BenchConfig) -> Result<IoUHistogram> {
    let edges = default_bin_edges();
    let mut total = IoUHistogram {
        counts_hbb: vec![0; edges.len() - 1],
        counts_obb: vec![0; edges.len() - 1],
        bin_edges: edges,
    };
    for index in 0..cfg.trials {
        let mut trial = Trial::sample(cfg, index)?;
        trial.descend(cfg);
        let gt = GroundTruthObject::new(index as u64, "synthetic", trial.gt);
        total.merge(&proposal_histogram(
            &[trial.pair()?],
            &[gt],
            &total.bin_edges,
        )?)?;
    }
    Ok(total)
}
