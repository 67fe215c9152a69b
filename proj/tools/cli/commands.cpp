#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sdseg/config_file.hpp"
#include "sdseg/errors.hpp"
#include "sdseg/image_io.hpp"
#include "sdseg/metrics.hpp"
#include "sdseg/report.hpp"
#include "sdseg/synthetic.hpp"

namespace sdseg::cli {
namespace fs = std::filesystem;

namespace {

struct CommonOptions {
  SegmenterConfig config;
  std::string edge_policy = "replicate";
  int jobs = 0;
  std::string config_file;
};

void add_common(CLI::App* sub, CommonOptions& o) {
  auto& c = o.config;
  sub->add_option("--block-size", c.basis.block_size, "Block side N")
      ->capture_default_str();
  sub->add_option("--num-bases", c.basis.num_bases, "DCT bases K")
      ->capture_default_str();
  sub->add_option("--lambda1", c.solver.lambda1, "Weight on ||s||_1")
      ->capture_default_str();
  sub->add_option("--lambda2", c.solver.lambda2, "Weight on TV(s)")
      ->capture_default_str();
  sub->add_option("--rho1", c.solver.rho1)->capture_default_str();
  sub->add_option("--rho2", c.solver.rho2)->capture_default_str();
  sub->add_option("--rho3", c.solver.rho3)->capture_default_str();
  sub->add_option("--iters", c.solver.max_iters, "ADMM iterations")
      ->capture_default_str();
  sub->add_option("--primal-tol", c.solver.primal_tol,
                  "Early-stop residual tolerance (0 = off)")
      ->capture_default_str();
  sub->add_option("--fg-threshold", c.fg_threshold,
                  "Foreground if |s| exceeds this (8-bit levels)")
      ->capture_default_str();
  sub->add_option("--edge-policy", o.edge_policy, "replicate | reject")
      ->capture_default_str();
  sub->add_option("--intensity-scale", c.intensity_scale,
                  "Pixels are mapped to [0, scale] before solving")
      ->capture_default_str();
  sub->add_option("--jobs", o.jobs, "Worker threads (0 = all cores)")
      ->capture_default_str();
  sub->add_option("--config", o.config_file, "key=value file; flags win");
}

// Resolves the textual options and validates everything before any work.
void finalize(CommonOptions& o) {
  o.config.edge_policy = parse_edge_policy(o.edge_policy);
  o.config.validate();
  if (o.jobs < 0) throw ConfigError("--jobs must be >= 0");
}

// Config-file values are spliced in as --key=value arguments unless the
// same flag already appears on the command line.
std::vector<std::string> merge_config_file(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;

  const auto values = read_config_file(path);
  auto given = [&args](const std::string& key) {
    const std::string flag = "--" + key;
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
  };
  std::vector<std::string> merged = args;
  for (const auto& [key, value] : values) {
    if (key == "config" || given(key)) continue;
    merged.push_back("--" + key + "=" + value);
  }
  return merged;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + path.string());
  f << text;
  if (!f) throw IoError("failed writing " + path.string());
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json block_dump(const std::string& name, const ImagePlane& image,
                          const SegmenterConfig& cfg,
                          const std::vector<BlockRecord>& records) {
  nlohmann::json j;
  j["image"] = name;
  j["width"] = image.width;
  j["height"] = image.height;
  j["block_size"] = cfg.basis.block_size;
  j["num_bases"] = cfg.basis.num_bases;
  j["blocks"] = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json b;
    b["row"] = r.block_row;
    b["col"] = r.block_col;
    b["iterations"] = r.result.iterations_run;
    b["alpha"] = std::vector<double>(r.result.alpha.data(),
                                     r.result.alpha.data() + r.result.alpha.size());
    nlohmann::json res = nlohmann::json::array();
    for (const auto& p : r.result.primal_residuals) {
      res.push_back({p.coefficient, p.fidelity, p.gradient});
    }
    b["primal_residuals"] = std::move(res);
    b["dual_residuals"] = r.result.dual_residuals;
    b["objective"] = r.result.objective_history;
    j["blocks"].push_back(std::move(b));
  }
  return j;
}

int cmd_segment(const std::vector<std::string>& inputs, const fs::path& out_dir,
                bool overlay, bool dump, const CommonOptions& o,
                std::ostream& out, std::ostream& err) {
  const BlockSegmenter segmenter(o.config);
  ensure_dir(out_dir);
  int status = kOk;
  for (const auto& input : inputs) {
    const fs::path in(input);
    const std::string stem = in.stem().string();
    try {
      const ImagePlane image = read_luminance(in);
      std::vector<BlockRecord> records;
      const SegmentationMask mask =
          segmenter.segment_image(image, o.jobs, dump ? &records : nullptr);
      write_mask(out_dir / (stem + "_mask.png"), mask);
      if (overlay) {
        write_rgb_png(out_dir / (stem + "_overlay.png"), make_overlay(image, mask));
      }
      if (dump) {
        write_text(out_dir / (stem + "_blocks.json"),
                   block_dump(in.filename().string(), image, o.config, records)
                           .dump(1) + "\n");
      }
      out << in.filename().string() << ": " << mask.foreground_count() << " of "
          << mask.bits.size() << " pixels foreground\n";
    } catch (const std::exception& e) {
      err << "error: " << input << ": " << e.what() << '\n';
      status = kFileFailure;
    }
  }
  return status;
}

int cmd_eval(const fs::path& dataset, const fs::path& out_dir, bool baseline,
             const CommonOptions& o, std::ostream& out, std::ostream& err) {
  const DatasetListing listing = list_dataset(dataset);
  int status = kOk;
  for (const auto& p : listing.unpaired) {
    err << "warning: no matching pair for " << p.string() << ", skipped\n";
    status = kFileFailure;
  }
  if (listing.pairs.empty()) {
    err << "error: no image/_gt pairs found in " << dataset.string() << '\n';
    return kFileFailure;
  }

  std::vector<DatasetItem> items;
  for (const auto& pair : listing.pairs) {
    items.push_back({pair.id, [pair] {
                       LabeledImage li{read_luminance(pair.image), read_mask(pair.truth)};
                       if (li.image.width != li.truth.width ||
                           li.image.height != li.truth.height) {
                         throw DimensionError("image and ground truth sizes differ");
                       }
                       return li;
                     }});
  }

  auto run_method = [&](DecompositionMethod method) {
    SegmenterConfig cfg = o.config;
    cfg.method = method;
    const BlockSegmenter segmenter(cfg);
    return evaluate_dataset(
        items,
        [&segmenter](const ImagePlane& image) {
          return segmenter.segment_image(image, 1);
        },
        o.jobs);
  };

  ensure_dir(out_dir);
  const EvalReport proposed = run_method(DecompositionMethod::kSparseTv);
  write_text(out_dir / "report.csv", to_csv(proposed));
  std::vector<MethodSummary> rows{{"Sparse + TV decomposition", &proposed}};

  EvalReport lad;
  if (baseline) {
    lad = run_method(DecompositionMethod::kLeastAbsoluteDeviation);
    write_text(out_dir / "report_lad.csv", to_csv(lad));
    rows.push_back({"Least absolute deviation", &lad});
  }

  for (const auto& f : proposed.failures) {
    err << "error: " << f.id << ": " << f.message << '\n';
    status = kFileFailure;
  }

  std::ostringstream table;
  table << "Evaluated " << proposed.per_image.size() << " of "
        << listing.pairs.size() << " pairs\n\n";
  write_summary_table(table, rows);
  write_text(out_dir / "summary.txt", table.str());
  out << table.str();
  return status;
}

int cmd_synth(int count, std::uint64_t seed, const SynthOptions& opts,
              const fs::path& out_dir, std::ostream& out) {
  opts.validate();
  if (count < 1) throw ConfigError("--count must be >= 1");
  ensure_dir(out_dir);
  for (int i = 0; i < count; ++i) {
    const SyntheticSample s = generate_sample(opts, seed, static_cast<std::uint64_t>(i));
    char name[32];
    std::snprintf(name, sizeof name, "synth_%04d", i);
    write_luminance(out_dir / (std::string(name) + ".png"), s.image);
    write_mask(out_dir / (std::string(name) + "_gt.png"), s.truth);
  }
  out << "wrote " << count << " image/ground-truth pairs to " << out_dir.string()
      << '\n';
  return kOk;
}

int cmd_decompose(const fs::path& input, const fs::path& out_dir,
                  const CommonOptions& o, std::ostream& out, std::ostream& err) {
  const BlockSegmenter segmenter(o.config);
  try {
    const ImagePlane image = read_luminance(input);
    const BlockDecomposition d = decompose_image_block(image, segmenter);
    ensure_dir(out_dir);
    const std::string stem = input.stem().string();
    const int n = segmenter.block_size();

    ImagePlane bg(n, n), sp(n, n);
    for (Eigen::Index i = 0; i < d.background.size(); ++i) {
      bg.pixels[static_cast<std::size_t>(i)] = d.background(i);
      sp.pixels[static_cast<std::size_t>(i)] = 128.0 + d.sparse(i);
    }
    write_luminance(out_dir / (stem + "_background.png"), bg);
    write_luminance(out_dir / (stem + "_sparse.png"), sp);

    std::ostringstream txt;
    txt << "# k u v alpha\n";
    const auto& freqs = segmenter.basis().frequencies();
    for (Eigen::Index k = 0; k < d.alpha.size(); ++k) {
      txt << k << ' ' << freqs[static_cast<std::size_t>(k)].u << ' '
          << freqs[static_cast<std::size_t>(k)].v << ' '
          << format_double(d.alpha(k)) << '\n';
    }
    write_text(out_dir / (stem + "_alpha.txt"), txt.str());
    out << input.filename().string() << ": wrote background, sparse and alpha to "
        << out_dir.string() << '\n';
    return kOk;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    err << "error: " << input.string() << ": " << e.what() << '\n';
    return kFileFailure;
  }
}

bool is_image_file(const fs::path& p) {
  std::string e = p.extension().string();
  std::transform(e.begin(), e.end(), e.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return e == ".png" || e == ".pgm" || e == ".ppm";
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

BlockDecomposition decompose_image_block(const ImagePlane& block,
                                         const BlockSegmenter& segmenter) {
  const int n = segmenter.block_size();
  if (block.width != n || block.height != n) {
    throw DimensionError("decompose expects a " + std::to_string(n) + "x" +
                         std::to_string(n) + " block, got " +
                         std::to_string(block.width) + "x" +
                         std::to_string(block.height));
  }
  block.validate();
  const Eigen::VectorXd f = segmenter.extract_block(block, 0, 0);
  const BlockOutcome outcome = segmenter.segment_block(f);
  const double scale = segmenter.config().intensity_scale / 255.0;

  BlockDecomposition d;
  d.alpha = outcome.result.alpha;
  d.background = segmenter.basis().entries() * outcome.result.alpha / scale;
  d.sparse = f - d.background;
  return d;
}

DatasetListing list_dataset(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw IoError("dataset directory not found: " + dir.string());
  }
  std::map<std::string, fs::path> images, truths;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || !is_image_file(entry.path())) continue;
    const std::string stem = entry.path().stem().string();
    if (ends_with(stem, "_gt")) {
      truths[stem.substr(0, stem.size() - 3)] = entry.path();
    } else {
      images[stem] = entry.path();
    }
  }
  DatasetListing listing;
  for (const auto& [id, path] : images) {
    const auto t = truths.find(id);
    if (t == truths.end()) {
      listing.unpaired.push_back(path);
    } else {
      listing.pairs.push_back({id, path, t->second});
    }
  }
  for (const auto& [id, path] : truths) {
    if (!images.contains(id)) listing.unpaired.push_back(path);
  }
  return listing;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Background/foreground segmentation of screen content by "
               "sparse decomposition with total-variation regularization"};
  app.require_subcommand(1);

  CommonOptions seg_opts, eval_opts, dec_opts;
  std::vector<std::string> seg_inputs;
  std::string seg_out, eval_dir, eval_out, synth_out, dec_input, dec_out;
  bool overlay = false, dump = false, no_baseline = false;
  int synth_count = 0;
  std::uint64_t synth_seed = 0;
  SynthOptions synth;
  double contrast = -1.0;
  int thickness = 0;

  auto* seg = app.add_subcommand("segment", "Write a foreground mask per image");
  seg->add_option("inputs", seg_inputs, "PNG / PGM / PPM images")->required();
  seg->add_option("--out", seg_out, "Output directory")->required();
  seg->add_flag("--overlay", overlay, "Also write a tinted overlay image");
  seg->add_flag("--dump", dump, "Write per-block alpha and residual histories");
  add_common(seg, seg_opts);

  auto* ev = app.add_subcommand("eval", "Score a dataset of <name>/<name>_gt pairs");
  ev->add_option("dataset", eval_dir, "Directory of image pairs")->required();
  ev->add_option("--out", eval_out, "Output directory for CSV reports")->required();
  ev->add_flag("--no-baseline", no_baseline, "Skip the least-absolute-deviation run");
  add_common(ev, eval_opts);

  auto* sy = app.add_subcommand("synth", "Generate synthetic blocks with ground truth");
  sy->add_option("--count", synth_count, "Number of blocks")->required();
  sy->add_option("--seed", synth_seed, "Random seed")->capture_default_str();
  sy->add_option("--out", synth_out, "Output directory")->required();
  sy->add_option("--contrast", contrast, "Fixed stroke contrast (default: 30-80)");
  sy->add_option("--thickness", thickness, "Fixed stroke thickness (default: 1-3)");
  sy->add_option("--noise", synth.noise_sigma, "Gaussian noise sigma")
      ->capture_default_str();
  sy->add_option("--block-size", synth.block_size)->capture_default_str();

  auto* de = app.add_subcommand("decompose", "Split one block into background and sparse parts");
  de->add_option("input", dec_input, "One N x N block image")->required();
  de->add_option("--out", dec_out, "Output directory")->required();
  add_common(de, dec_opts);

  try {
    std::vector<std::string> args = merge_config_file(raw_args);
    // CLI11 consumes arguments from the back.
    std::reverse(args.begin(), args.end());
    app.parse(args);

    if (*seg) {
      finalize(seg_opts);
      return cmd_segment(seg_inputs, seg_out, overlay, dump, seg_opts, out, err);
    }
    if (*ev) {
      finalize(eval_opts);
      return cmd_eval(eval_dir, eval_out, !no_baseline, eval_opts, out, err);
    }
    if (*sy) {
      if (contrast >= 0) synth.min_contrast = synth.max_contrast = contrast;
      if (thickness > 0) synth.min_thickness = synth.max_thickness = thickness;
      return cmd_synth(synth_count, synth_seed, synth, synth_out, out);
    }
    if (*de) {
      finalize(dec_opts);
      return cmd_decompose(dec_input, dec_out, dec_opts, out, err);
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFileFailure;
  }
  return kConfigError;
}

}  // namespace sdseg::cli
