//! One function per CLI verb. Every stage reads upstream artifacts from the
//! output directory, does its work, and writes its own subdirectory plus a
//! meta.json carrying the producing config hash.

use crate::config::{RunConfig, WeightMode};
use anyhow::{bail, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use viewscope_core::baselines::{
    cat_views, heur_views, hum_views, rand_views, traj_views, BaselineRun, PlacedView,
};
use viewscope_core::candgen::{generate_room, Candidate};
use viewscope_core::categories::CategoryWeights;
use viewscope_core::emd::{evaluate_sets, EmdReport};
use viewscope_core::io::candidates::{
    read_candidates, write_candidates, CameraRecord, CandidateRecord,
};
use viewscope_core::pdf::{
    estimate_pdfs, load_example_set, write_example_set, CategoryPdfSet, ExampleSet,
};
use viewscope_core::room_seed;
use viewscope_core::scene::{Scene, SceneIndex, SemanticDepthImage};
use viewscope_core::select::{lazy_greedy_select, ScoredView, SelectionConfig, ViewSet};
use viewscope_core::suite::{build_suite, SuiteConfig};

pub struct OutPaths {
    root: PathBuf,
}

impl OutPaths {
    pub fn new(cfg: &RunConfig) -> Self {
        OutPaths { root: cfg.paths.out.clone() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn scenes(&self) -> PathBuf {
        self.root.join("scenes")
    }

    pub fn scene_file(&self) -> PathBuf {
        self.scenes().join("suite.json")
    }

    pub fn ground_truth(&self) -> PathBuf {
        self.scenes().join("ground_truth.jsonl")
    }

    pub fn examples_dir(&self) -> PathBuf {
        self.scenes().join("examples")
    }

    pub fn pdfs(&self) -> PathBuf {
        self.root.join("pdfs")
    }

    pub fn pdf_file(&self) -> PathBuf {
        self.pdfs().join("pdfs.json")
    }

    pub fn candidates(&self) -> PathBuf {
        self.root.join("candidates")
    }

    pub fn candidates_all(&self) -> PathBuf {
        self.candidates().join("all.jsonl")
    }

    pub fn room_shard(&self, room_id: &str) -> PathBuf {
        self.candidates().join(format!("{room_id}.jsonl"))
    }

    pub fn selection(&self) -> PathBuf {
        self.root.join("selection")
    }

    pub fn selection_manifest(&self) -> PathBuf {
        self.selection().join("manifest.json")
    }

    pub fn baselines(&self) -> PathBuf {
        self.root.join("baselines")
    }

    pub fn baseline_file(&self, name: &str) -> PathBuf {
        self.baselines().join(format!("{name}.jsonl"))
    }

    pub fn eval(&self) -> PathBuf {
        self.root.join("eval")
    }

    pub fn views(&self) -> PathBuf {
        self.root.join("views")
    }

    pub fn summary(&self) -> PathBuf {
        self.root.join("run_summary.json")
    }
}

fn ensure_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path).with_context(|| format!("creating {}", path.display()))
}

#[derive(Serialize)]
struct StageMeta<'a> {
    stage: &'a str,
    config_sha256: String,
}

fn write_meta(dir: &Path, stage: &str, cfg: &RunConfig) -> Result<()> {
    let meta = StageMeta { stage, config_sha256: cfg.hash() };
    let text = serde_json::to_string_pretty(&meta)?;
    std::fs::write(dir.join("meta.json"), text)
        .with_context(|| format!("writing {}/meta.json", dir.display()))
}

fn require(path: &Path, producer: &str) -> Result<()> {
    if !path.exists() {
        bail!(
            "missing artifact {}; run `viewscope {producer}` first",
            path.display()
        );
    }
    Ok(())
}

fn thread_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .context("building worker pool")
}

fn load_scene(cfg: &RunConfig, out: &OutPaths) -> Result<Scene> {
    let path = match &cfg.paths.scene {
        Some(p) => p.clone(),
        None => {
            require(&out.scene_file(), "suite")?;
            out.scene_file()
        }
    };
    let scene = Scene::load(&path).with_context(|| format!("loading {}", path.display()))?;
    let problems = scene.validate();
    if !problems.is_empty() {
        bail!("scene {} is invalid: {}", path.display(), problems.join("; "));
    }
    Ok(scene)
}

fn load_examples(cfg: &RunConfig, out: &OutPaths) -> Result<ExampleSet> {
    let dir = match &cfg.paths.examples {
        Some(p) => p.clone(),
        None => {
            require(&out.examples_dir().join("manifest.json"), "suite")?;
            out.examples_dir()
        }
    };
    load_example_set(&dir, cfg.pdf.mode)
        .with_context(|| format!("loading example set {}", dir.display()))
}

fn render_placed(
    scene: &Scene,
    views: &[PlacedView],
    width: u32,
    height: u32,
    pool: &rayon::ThreadPool,
) -> Vec<SemanticDepthImage> {
    let index = SceneIndex::new(scene);
    pool.install(|| {
        views
            .par_iter()
            .map(|v| index.render(&v.camera, width, height))
            .collect()
    })
}

fn placed_to_records(views: &[PlacedView]) -> Vec<CandidateRecord> {
    views
        .iter()
        .enumerate()
        .map(|(i, v)| CandidateRecord {
            id: i as u64,
            room: v.room.clone(),
            camera: CameraRecord {
                pos: v.camera.position,
                yaw: v.camera.yaw,
                pitch: v.camera.pitch,
                roll: v.camera.roll,
            },
            aggregate: None,
            vector: None,
        })
        .collect()
}

fn records_to_placed(records: &[CandidateRecord], cfg: &RunConfig) -> Vec<PlacedView> {
    records
        .iter()
        .map(|r| PlacedView {
            room: r.room.clone(),
            camera: r.camera(cfg.generate.hfov, cfg.generate.aspect),
        })
        .collect()
}

/// Builds the synthetic scene suite, its ground-truth cameras, and the
/// example set rendered from them.
pub fn cmd_suite(cfg: &RunConfig) -> Result<()> {
    let out = OutPaths::new(cfg);
    ensure_dir(&out.scenes())?;
    let suite_cfg = SuiteConfig {
        rooms: cfg.suite.rooms,
        seed: cfg.seed,
        cameras_per_room: cfg.suite.cameras_per_room,
        hfov: cfg.generate.hfov,
        aspect: cfg.generate.aspect,
    };
    let suite = build_suite(&suite_cfg);
    suite
        .scene
        .save(&out.scene_file())
        .context("writing suite scene")?;
    write_candidates(&out.ground_truth(), &placed_to_records(&suite.ground_truth))?;
    let pool = thread_pool(cfg.workers)?;
    let images = render_placed(
        &suite.scene,
        &suite.ground_truth,
        cfg.suite.example_width,
        cfg.suite.example_height,
        &pool,
    );
    write_example_set(
        &out.examples_dir(),
        &images,
        &suite.scene.categories,
        cfg.pdf.mode,
    )
    .context("writing example set")?;
    write_meta(&out.scenes(), "suite", cfg)?;
    println!(
        "suite: {} rooms, {} ground-truth views, example set at {}",
        suite.scene.rooms.len(),
        suite.ground_truth.len(),
        out.examples_dir().display()
    );
    Ok(())
}

/// Estimates per-category pdfs from the example set.
pub fn cmd_pdf(cfg: &RunConfig) -> Result<()> {
    let out = OutPaths::new(cfg);
    let examples = load_examples(cfg, &out)?;
    let pdfs = estimate_pdfs(&examples, &cfg.pdf).context("estimating pdfs")?;
    ensure_dir(&out.pdfs())?;
    pdfs.save(&out.pdf_file()).context("writing pdf file")?;
    write_meta(&out.pdfs(), "pdf", cfg)?;
    let nonempty = (0..examples.categories.len())
        .filter(|&c| !pdfs.is_empty_category(c as u8))
        .count();
    println!(
        "pdf: {} images -> {} categories with mass, {} bins/category",
        examples.images.len(),
        nonempty,
        pdfs.config().bins_per_category()
    );
    Ok(())
}

fn category_weights(cfg: &RunConfig, scene: &Scene) -> Result<CategoryWeights> {
    match cfg.weights.mode {
        WeightMode::Uniform => Ok(CategoryWeights::uniform(scene.categories.len())),
        WeightMode::Nyu40 => {
            if scene.categories.len() != 40 {
                bail!(
                    "weights.mode = nyu40 needs the 40-class table, scene has {}; use weights.mode = uniform",
                    scene.categories.len()
                );
            }
            Ok(CategoryWeights::nyu40())
        }
    }
}

/// Generates, scores, and filters candidates for every room. Rooms fan out
/// across the worker pool; output order and bytes are schedule-independent
/// because each room derives its RNG from (seed, room id).
pub fn cmd_generate(cfg: &RunConfig) -> Result<()> {
    let out = OutPaths::new(cfg);
    let scene = load_scene(cfg, &out)?;
    require(&out.pdf_file(), "pdf")?;
    let pdfs = CategoryPdfSet::load(&out.pdf_file()).context("loading pdfs")?;
    let weights = category_weights(cfg, &scene)?;
    let pool = thread_pool(cfg.workers)?;
    let per_room: Vec<Result<Vec<Candidate>, _>> = pool.install(|| {
        scene
            .rooms
            .par_iter()
            .map(|room| generate_room(&scene, room, &pdfs, &weights, &cfg.tilt, &cfg.generate))
            .collect()
    });
    ensure_dir(&out.candidates())?;
    let mut all = Vec::new();
    for (room, result) in scene.rooms.iter().zip(per_room) {
        let cands = result.with_context(|| format!("generating room {}", room.id))?;
        let records: Vec<CandidateRecord> =
            cands.iter().map(CandidateRecord::from_candidate).collect();
        write_candidates(&out.room_shard(&room.id), &records)?;
        all.extend(records);
    }
    write_candidates(&out.candidates_all(), &all)?;
    write_meta(&out.candidates(), "generate", cfg)?;
    println!(
        "generate: {} candidates across {} rooms -> {}",
        all.len(),
        scene.rooms.len(),
        out.candidates_all().display()
    );
    Ok(())
}

#[derive(Serialize)]
struct SelectionManifest {
    config_sha256: String,
    #[serde(flatten)]
    selection: ViewSet,
}

/// Runs lazy greedy selection over the pooled candidate list.
pub fn cmd_select(cfg: &RunConfig) -> Result<ViewSet> {
    let out = OutPaths::new(cfg);
    require(&out.candidates_all(), "generate")?;
    let scene = load_scene(cfg, &out)?;
    let records = read_candidates(&out.candidates_all())?;
    let mut views = Vec::with_capacity(records.len());
    for r in &records {
        let Some(vector) = &r.vector else {
            bail!(
                "candidate {} has no score vector; regenerate with `viewscope generate`",
                r.id
            );
        };
        views.push(ScoredView { id: r.id, vector: vector.clone() });
    }
    let sel_cfg = match &cfg.select.h {
        Some(h) => SelectionConfig { k: cfg.select.k, h: h.clone() },
        None => SelectionConfig::with_default_h(cfg.select.k, scene.categories.len()),
    };
    if sel_cfg.h.len() != scene.categories.len() {
        bail!(
            "[select] h has {} entries but the scene has {} categories",
            sel_cfg.h.len(),
            scene.categories.len()
        );
    }
    sel_cfg.validate().map_err(|e| anyhow::anyhow!("[select] {e}"))?;
    let selection = lazy_greedy_select(&views, &sel_cfg);
    ensure_dir(&out.selection())?;
    let manifest = SelectionManifest { config_sha256: cfg.hash(), selection: selection.clone() };
    std::fs::write(
        out.selection_manifest(),
        serde_json::to_string_pretty(&manifest)?,
    )
    .context("writing selection manifest")?;
    write_meta(&out.selection(), "select", cfg)?;
    println!(
        "select: {} picks, objective {:.4}, {} gain evaluations",
        selection.picks.len(),
        selection.objective,
        selection.gain_evaluations
    );
    Ok(selection)
}

pub const BASELINE_NAMES: [&str; 5] = ["rand", "hum", "cat", "traj", "heur"];

/// Emits one baseline's cameras as an unscored candidate list.
pub fn cmd_baseline(cfg: &RunConfig, which: &str) -> Result<()> {
    let out = OutPaths::new(cfg);
    let scene = load_scene(cfg, &out)?;
    let mut rng = ChaCha8Rng::seed_from_u64(room_seed(cfg.seed, &format!("baseline/{which}")));
    let run: BaselineRun = match which {
        "rand" => rand_views(&scene, &cfg.baseline, &mut rng)?,
        "hum" => hum_views(&scene, &cfg.baseline, &mut rng)?,
        "cat" => cat_views(&scene, &cfg.baseline, &mut rng)?,
        "traj" => traj_views(&scene, &cfg.baseline, &mut rng)?,
        "heur" => heur_views(&scene, &cfg.baseline)?,
        other => bail!("unknown baseline {other:?}; expected one of {BASELINE_NAMES:?}"),
    };
    for w in &run.warnings {
        eprintln!("baseline {which}: {w}");
    }
    ensure_dir(&out.baselines())?;
    write_candidates(&out.baseline_file(which), &placed_to_records(&run.views))?;
    write_meta(&out.baselines(), "baseline", cfg)?;
    println!(
        "baseline {which}: {} views -> {}",
        run.views.len(),
        out.baseline_file(which).display()
    );
    Ok(())
}

/// Cameras of the selected view set, resolved through the candidate list.
fn selected_views(cfg: &RunConfig, out: &OutPaths) -> Result<Vec<PlacedView>> {
    require(&out.selection_manifest(), "select")?;
    require(&out.candidates_all(), "generate")?;
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.selection_manifest())?)?;
    let picks = manifest["picks"]
        .as_array()
        .context("selection manifest has no picks array")?;
    let records = read_candidates(&out.candidates_all())?;
    let by_id: BTreeMap<u64, &CandidateRecord> =
        records.iter().map(|r| (r.id, r)).collect();
    let mut views = Vec::with_capacity(picks.len());
    for pick in picks {
        let id = pick["id"].as_u64().context("pick without id")?;
        let record = by_id
            .get(&id)
            .with_context(|| format!("selected id {id} not in candidate list"))?;
        views.push(PlacedView {
            room: record.room.clone(),
            camera: record.camera(cfg.generate.hfov, cfg.generate.aspect),
        });
    }
    Ok(views)
}

#[derive(Serialize)]
struct EvalSummary {
    config_sha256: String,
    grand_means: BTreeMap<String, f64>,
}

/// Renders each requested view set and scores it against the example set.
/// `sets` defaults to the selection ("datamatch") plus every baseline file
/// present in the output directory.
pub fn cmd_eval(cfg: &RunConfig, sets: Option<Vec<String>>) -> Result<BTreeMap<String, f64>> {
    let out = OutPaths::new(cfg);
    let scene = load_scene(cfg, &out)?;
    let examples = load_examples(cfg, &out)?;
    if scene.categories.names() != examples.categories.names() {
        bail!(
            "category tables differ between scene ({}) and example set ({}); refusing to compare",
            scene.categories.len(),
            examples.categories.len()
        );
    }
    let set_names = match sets {
        Some(s) => s,
        None => {
            let mut names = vec!["datamatch".to_string()];
            for b in BASELINE_NAMES {
                if out.baseline_file(b).exists() {
                    names.push(b.to_string());
                }
            }
            names
        }
    };
    let (width, height) = match examples.images.first() {
        Some(img) => (img.width, img.height),
        None => bail!("example set has no images"),
    };
    let pool = thread_pool(cfg.workers)?;
    ensure_dir(&out.eval())?;
    let mut grand_means = BTreeMap::new();
    for name in &set_names {
        let views = if name == "datamatch" {
            selected_views(cfg, &out)?
        } else {
            require(&out.baseline_file(name), &format!("baseline {name}"))?;
            records_to_placed(&read_candidates(&out.baseline_file(name))?, cfg)
        };
        if views.is_empty() {
            bail!("set {name:?} has no views to evaluate");
        }
        let rendered = render_placed(&scene, &views, width, height, &pool);
        let report: EmdReport =
            evaluate_sets(&rendered, &examples.images, &scene.categories, &cfg.emd)
                .with_context(|| format!("evaluating set {name}"))?;
        std::fs::write(
            out.eval().join(format!("{name}.json")),
            serde_json::to_string_pretty(&report)?,
        )?;
        std::fs::write(out.eval().join(format!("{name}.csv")), report.to_csv())?;
        grand_means.insert(name.clone(), report.grand_mean);
    }
    let summary = EvalSummary { config_sha256: cfg.hash(), grand_means: grand_means.clone() };
    std::fs::write(
        out.eval().join("summary.json"),
        serde_json::to_string_pretty(&summary)?,
    )?;
    write_meta(&out.eval(), "eval", cfg)?;
    println!("eval ({width}x{height}, {} example images):", examples.images.len());
    for (name, mean) in &grand_means {
        println!("  {name:<10} grand-mean EMD {mean:.4}");
    }
    Ok(grand_means)
}

/// Renders the selected cameras to numbered PGM pairs with a manifest.
pub fn cmd_export(cfg: &RunConfig) -> Result<()> {
    let out = OutPaths::new(cfg);
    let scene = load_scene(cfg, &out)?;
    let views = selected_views(cfg, &out)?;
    let pool = thread_pool(cfg.workers)?;
    let images = render_placed(
        &scene,
        &views,
        cfg.suite.example_width,
        cfg.suite.example_height,
        &pool,
    );
    write_example_set(&out.views(), &images, &scene.categories, cfg.pdf.mode)
        .context("writing exported views")?;
    write_meta(&out.views(), "export", cfg)?;
    println!("export: {} views -> {}", images.len(), out.views().display());
    Ok(())
}

#[derive(Serialize)]
struct RunSummary {
    config_sha256: String,
    config: RunConfig,
    stage_seconds: BTreeMap<String, f64>,
    grand_means: BTreeMap<String, f64>,
}

/// Full run: suite, pdf, generate, select, all baselines, eval, export.
/// Refuses to touch a non-empty output directory unless forced.
pub fn cmd_pipeline(cfg: &RunConfig, force: bool) -> Result<BTreeMap<String, f64>> {
    let out = OutPaths::new(cfg);
    if !force && out.root().exists() && out.root().read_dir()?.next().is_some() {
        bail!(
            "output directory {} is not empty; pass --force to overwrite",
            out.root().display()
        );
    }
    ensure_dir(out.root())?;
    let mut stage_seconds = BTreeMap::new();
    let mut timed = |name: &str, f: &mut dyn FnMut() -> Result<()>| -> Result<()> {
        let start = std::time::Instant::now();
        f().with_context(|| format!("stage `{name}` failed"))?;
        stage_seconds.insert(name.to_string(), start.elapsed().as_secs_f64());
        Ok(())
    };
    timed("suite", &mut || cmd_suite(cfg))?;
    timed("pdf", &mut || cmd_pdf(cfg))?;
    timed("generate", &mut || cmd_generate(cfg))?;
    timed("select", &mut || cmd_select(cfg).map(|_| ()))?;
    for b in BASELINE_NAMES {
        timed(&format!("baseline {b}"), &mut || cmd_baseline(cfg, b))?;
    }
    let mut grand_means = BTreeMap::new();
    timed("eval", &mut || {
        grand_means = cmd_eval(cfg, None)?;
        Ok(())
    })?;
    timed("export", &mut || cmd_export(cfg))?;
    let summary = RunSummary {
        config_sha256: cfg.hash(),
        config: cfg.clone(),
        stage_seconds,
        grand_means: grand_means.clone(),
    };
    std::fs::write(out.summary(), serde_json::to_string_pretty(&summary)?)
        .context("writing run summary")?;
    println!("pipeline complete; summary at {}", out.summary().display());
    Ok(grand_means)
}

/// Loads and validates a scene file, printing its shape or its problems.
pub fn cmd_scene_validate(path: &Path) -> Result<()> {
    let scene = Scene::load(path).with_context(|| format!("loading {}", path.display()))?;
    let problems = scene.validate();
    if problems.is_empty() {
        let objects: usize = scene.rooms.iter().map(|r| r.objects.len()).sum();
        println!(
            "valid: {} rooms, {} objects, {} categories",
            scene.rooms.len(),
            objects,
            scene.categories.len()
        );
        Ok(())
    } else {
        for p in &problems {
            eprintln!("invalid: {p}");
        }
        bail!("{} validation problem(s) in {}", problems.len(), path.display());
    }
}
