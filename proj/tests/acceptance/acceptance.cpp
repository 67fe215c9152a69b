// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any selected criterion fails.
//
//   acceptance                 run all ten
//   acceptance --criterion 4   run one (repeatable)
//
// Criterion 8 needs the external 332-block dataset; point
// SDSEG_DATASET_DIR at a directory of <name>.png / <name>_gt.png pairs.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "oracles.hpp"
#include "sdseg/admm.hpp"
#include "sdseg/block_segmenter.hpp"
#include "sdseg/dct_basis.hpp"
#include "sdseg/diff_operators.hpp"
#include "sdseg/image_io.hpp"
#include "sdseg/metrics.hpp"
#include "sdseg/reference_solvers.hpp"
#include "sdseg/synthetic.hpp"

using namespace sdseg;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<DatasetItem> suite_items(const std::vector<SyntheticSample>& suite) {
  std::vector<DatasetItem> items;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const SyntheticSample* s = &suite[i];
    items.push_back({"fixture_" + std::to_string(i), [s] { return LabeledImage{s->image, s->truth}; }});
  }
  return items;
}

Outcome basis_correctness() {
  const Stopwatch sw;
  double worst = 0.0;
  for (auto [n, k] : {std::pair{8, 6}, {16, 20}, {64, 20}}) {
    const BasisMatrix b = build_basis({n, k});
    const Eigen::MatrixXd g = b.entries().transpose() * b.entries();
    worst = std::max(worst, (g - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff());
  }
  const double t = sw.seconds();
  return {worst < 1e-10 && t < 1.0,
          "max |P^T P - I| = " + fmt("%.2e", worst) + ", " + fmt("%.3f", t) + " s"};
}

Outcome tv_oracle() {
  const Stopwatch sw;
  const DiffOperator d(8);
  testing::TestRng rng(2);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Eigen::VectorXd s = testing::random_vector(rng, 64, 0.0, 1.0);
    worst = std::max(worst, std::abs(d.apply(s).lpNorm<1>() - testing::tv_double_loop(s, 8)));
  }
  const double t = sw.seconds();
  return {worst <= 1e-12 && t < 1.0,
          "max |tv - double loop| = " + fmt("%.2e", worst) + ", " + fmt("%.3f", t) + " s"};
}

Outcome soft_threshold_identities() {
  testing::TestRng rng(3);
  int mismatches = 0;
  std::vector<double> vs, ts;
  for (int i = 0; i < 10000; ++i) {
    // Mix ordinary draws with exact ties |v| == t and t == 0.
    double v = rng.uniform(-100, 100);
    double t = rng.uniform(0, 60);
    if (i % 50 == 0) t = std::abs(v);
    if (i % 77 == 0) t = 0.0;
    if (i % 91 == 0) v = 0.0;
    vs.push_back(v);
    ts.push_back(t);
  }
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const double v = vs[i], t = ts[i];
    const double sign = v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0);
    const double expected = sign * std::max(std::abs(v) - t, 0.0);
    if (soft_threshold(v, t) != expected) ++mismatches;
    Eigen::VectorXd one(1);
    one(0) = v;
    if (soft_threshold(one, t)(0) != expected) ++mismatches;
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatches over 10^4 pairs"};
}

Outcome admm_vs_oracle() {
  const Stopwatch sw;
  const BasisMatrix p = build_basis({8, 6});
  const DiffOperator d(8);
  const SolverConfig weights;  // lambda1 = 10, lambda2 = 4
  SolverConfig run = weights;
  run.max_iters = 200000;
  run.primal_tol = 1e-6;
  const AdmmWorkspace ws(p, d, run);

  testing::TestRng rng(4);
  double worst = 0.0;
  bool all_converged = true;
  for (int i = 0; i < 20; ++i) {
    const Eigen::VectorXd f = testing::random_vector(rng, 64, 0, 255);
    const DecompositionResult admm = solve(f, ws);
    all_converged = all_converged && admm.iterations_run < run.max_iters &&
                    admm.primal_residuals.back().max() < 1e-6;
    const DecompositionResult ref = proximal_reference(f, p, d, weights);
    const double oa = objective(admm.alpha, f, p, d, weights);
    const double orf = ref.final_objective();
    worst = std::max(worst, std::abs(oa - orf) / std::max(1.0, std::abs(orf)));
  }
  const double t = sw.seconds();
  return {all_converged && worst < 1e-3 && t < 120.0,
          "worst relative objective gap " + fmt("%.2e", worst) +
              (all_converged ? "" : ", some runs did not reach residual 1e-6") + ", " +
              fmt("%.2f", t) + " s"};
}

Outcome convergence() {
  const auto suite = fixture_suite();
  const BlockSegmenter seg(SegmenterConfig{});
  int ok = 0;
  double worst[3] = {0, 0, 0};
  for (const auto& s : suite) {
    const Eigen::VectorXd f = seg.extract_block(s.image, 0, 0) * (seg.config().intensity_scale / 255.0);
    const DecompositionResult r = solve(f, seg.workspace());
    const PrimalResiduals& a = r.primal_residuals.front();
    const PrimalResiduals& b = r.primal_residuals.back();
    const double q[3] = {b.coefficient / a.coefficient, b.fidelity / a.fidelity,
                         b.gradient / a.gradient};
    for (int k = 0; k < 3; ++k) worst[k] = std::max(worst[k], q[k]);
    if (q[0] < 0.01 && q[1] < 0.01 && q[2] < 0.01) ++ok;
  }
  return {ok == static_cast<int>(suite.size()),
          std::to_string(ok) + "/" + std::to_string(suite.size()) +
              " blocks below 1%; worst iteration-50/iteration-1 ratios " + fmt("%.3g", worst[0]) +
              " (coefficient), " + fmt("%.3g", worst[1]) + " (fidelity), " +
              fmt("%.3g", worst[2]) + " (gradient)"};
}

Outcome constant_and_ramp() {
  const BlockSegmenter seg(SegmenterConfig{});
  std::vector<std::pair<std::string, ImagePlane>> cases;
  for (double c : {0.0, 128.0, 255.0}) cases.push_back({"constant " + fmt("%.0f", c), ImagePlane(64, 64, c)});
  // Ramps span 0..63 along the ramp direction (the diagonal covers 0..126).
  ImagePlane h(64, 64), v(64, 64), diag(64, 64);
  for (int r = 0; r < 64; ++r) {
    for (int c = 0; c < 64; ++c) {
      h.at(r, c) = c;
      v.at(r, c) = r;
      diag.at(r, c) = r + c;
    }
  }
  cases.push_back({"horizontal ramp", h});
  cases.push_back({"vertical ramp", v});
  cases.push_back({"diagonal ramp", diag});

  std::string bad;
  for (const auto& [name, img] : cases) {
    const auto n = seg.segment_image(img).foreground_count();
    if (n != 0) bad += " " + name + "=" + std::to_string(n);
  }
  return {bad.empty(), bad.empty() ? std::to_string(cases.size()) + " blocks, 0 foreground pixels"
                                   : "foreground found:" + bad};
}

Outcome synthetic_benchmark() {
  const Stopwatch sw;
  const auto suite = fixture_suite();
  const auto items = suite_items(suite);
  SegmenterConfig cfg;
  const EvalReport proposed = evaluate_dataset(items, cfg, 0);
  cfg.method = DecompositionMethod::kLeastAbsoluteDeviation;
  const EvalReport lad = evaluate_dataset(items, cfg, 0);
  const double t = sw.seconds();
  const bool ok = proposed.failures.empty() && proposed.macro.f1 >= 0.90 &&
                  lad.macro.precision < proposed.macro.precision && t < 300.0;
  return {ok, "proposed P/R/F1 " + fmt("%.4f", proposed.macro.precision) + "/" +
                  fmt("%.4f", proposed.macro.recall) + "/" + fmt("%.4f", proposed.macro.f1) +
                  ", LAD P/R/F1 " + fmt("%.4f", lad.macro.precision) + "/" +
                  fmt("%.4f", lad.macro.recall) + "/" + fmt("%.4f", lad.macro.f1) + ", " +
                  fmt("%.1f", t) + " s"};
}

Outcome published_accuracy() {
  const char* dir = std::getenv("SDSEG_DATASET_DIR");
  if (dir == nullptr || *dir == '\0') {
    return {true, "not applicable: SDSEG_DATASET_DIR unset, criteria 1-7 constitute acceptance"};
  }
  const cli::DatasetListing listing = cli::list_dataset(dir);
  std::vector<DatasetItem> items;
  for (const auto& pair : listing.pairs) {
    items.push_back({pair.id, [pair] { return LabeledImage{read_luminance(pair.image), read_mask(pair.truth)}; }});
  }
  if (items.empty()) return {false, std::string("no image pairs in ") + dir};

  // Only tau is tuned. The solve does not depend on tau, so cache residuals
  // once and re-threshold.
  SegmenterConfig cfg;
  const BlockSegmenter seg(cfg);
  std::vector<LabeledImage> data;
  std::vector<std::vector<BlockRecord>> records;
  for (const auto& item : items) {
    data.push_back(item.load());
    records.emplace_back();
    seg.segment_image(data.back().image, 0, &records.back());
  }

  double best_tau = -1, best_gap = 1e9;
  Rates best{};
  const int n = cfg.basis.block_size;
  const double scale = cfg.intensity_scale / 255.0;
  for (double tau = 5.0; tau <= 20.0 + 1e-9; tau += 0.5) {
    EvalReport rep;
    for (std::size_t i = 0; i < data.size(); ++i) {
      SegmentationMask mask(data[i].image.width, data[i].image.height);
      for (const auto& r : records[i]) {
        for (int x = 0; x < n; ++x) {
          for (int y = 0; y < n; ++y) {
            const int row = r.block_row * n + x, col = r.block_col * n + y;
            if (row >= mask.height || col >= mask.width) continue;
            mask.at(row, col) = std::abs(r.result.s(x * n + y)) / scale > tau ? 1 : 0;
          }
        }
      }
      ImageScore s{items[i].id, confusion(mask, data[i].truth), {}};
      s.rates = precision_recall_f1(s.counts);
      rep.per_image.push_back(s);
    }
    aggregate(rep);
    const double gap = std::max({std::abs(100 * rep.macro.precision - 94.3),
                                 std::abs(100 * rep.macro.recall - 88.0),
                                 std::abs(100 * rep.macro.f1 - 90.9)});
    if (gap < best_gap) {
      best_gap = gap;
      best_tau = tau;
      best = rep.macro;
    }
  }
  return {best_gap <= 3.0, std::to_string(items.size()) + " pairs; best tau " + fmt("%.1f", best_tau) +
                               " gives P/R/F1 " + fmt("%.1f", 100 * best.precision) + "/" +
                               fmt("%.1f", 100 * best.recall) + "/" + fmt("%.1f", 100 * best.f1) +
                               " (max gap " + fmt("%.2f", best_gap) + " pp)"};
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream f(e.path(), std::ios::binary);
    files[fs::relative(e.path(), dir).string()] =
        std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
  }
  return files;
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "sdseg_acceptance_determinism";
  fs::remove_all(root);
  const fs::path data = root / "data";
  std::ostringstream sink;
  if (cli::run({"synth", "--count", "6", "--seed", "9", "--out", data.string()}, sink, sink) != 0) {
    return {false, "synth failed: " + sink.str()};
  }
  // One image that is not a multiple of the block size.
  ImagePlane odd(100, 70);
  const auto a = generate_sample(SynthOptions{}, 9, 0);
  const auto b = generate_sample(SynthOptions{}, 9, 1);
  for (int r = 0; r < 70; ++r) {
    for (int c = 0; c < 100; ++c) odd.at(r, c) = c < 64 ? a.image.at(r % 64, c) : b.image.at(r % 64, c - 36);
  }
  write_luminance(root / "odd.png", odd);

  std::vector<std::string> seg_inputs{(root / "odd.png").string()};
  for (int i = 0; i < 6; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "synth_%04d.png", i);
    seg_inputs.push_back((data / name).string());
  }

  std::vector<std::map<std::string, std::string>> outputs;
  std::vector<std::string> stdouts;
  int run_index = 0;
  for (const char* jobs : {"1", "1", "3", "0"}) {
    const fs::path out = root / ("run" + std::to_string(run_index++));
    std::ostringstream o, e;
    std::vector<std::string> seg{"segment"};
    seg.insert(seg.end(), seg_inputs.begin(), seg_inputs.end());
    for (const char* s : {"--overlay", "--dump", "--jobs"}) seg.push_back(s);
    seg.push_back(jobs);
    seg.push_back("--out");
    seg.push_back((out / "segment").string());
    if (cli::run(seg, o, e) != 0) return {false, "segment failed: " + e.str()};
    if (cli::run({"eval", data.string(), "--out", (out / "eval").string(), "--jobs", jobs}, o, e) != 0) {
      return {false, "eval failed: " + e.str()};
    }
    outputs.push_back(snapshot(out));
    stdouts.push_back(o.str());
  }
  bool same = true;
  for (std::size_t i = 1; i < outputs.size(); ++i) {
    same = same && outputs[i] == outputs[0] && stdouts[i] == stdouts[0];
  }
  const std::size_t files = outputs[0].size();
  fs::remove_all(root);
  return {same && files == 7 * 3 + 3,
          std::to_string(files) + " output files compared over 4 runs (--jobs 1, 1, 3, 0)" +
              (same ? ", byte-identical" : ", DIFFER")};
}

Outcome k_monotonicity() {
  const auto suite = fixture_suite();
  std::vector<double> means;
  std::string detail = "mean foreground pixels";
  for (int k : {10, 20, 35}) {
    SegmenterConfig cfg;
    cfg.basis.num_bases = k;
    const BlockSegmenter seg(cfg);
    double total = 0.0;
    for (const auto& s : suite) total += static_cast<double>(seg.segment_image(s.image).foreground_count());
    means.push_back(total / static_cast<double>(suite.size()));
    detail += " K=" + std::to_string(k) + ": " + fmt("%.1f", means.back());
  }
  return {means[1] <= means[0] && means[2] <= means[1], detail};
}

struct Criterion {
  const char* name;
  std::function<Outcome()> check;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {"Basis correctness", basis_correctness},
      {"TV operator oracle equivalence", tv_oracle},
      {"Soft-threshold identities", soft_threshold_identities},
      {"ADMM vs reference solver", admm_vs_oracle},
      {"Convergence within 50 iterations", convergence},
      {"Constant/ramp sanity", constant_and_ramp},
      {"Synthetic benchmark", synthetic_benchmark},
      {"Published accuracy (conditional)", published_accuracy},
      {"Determinism", determinism},
      {"K-monotonicity", k_monotonicity},
  };

  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--criterion" && i + 1 < argc) {
      const int c = std::atoi(argv[++i]);
      if (c < 1 || c > static_cast<int>(criteria.size())) {
        std::cerr << "unknown criterion " << argv[i] << '\n';
        return 2;
      }
      selected.push_back(c);
    } else {
      std::cerr << "usage: acceptance [--criterion N]...\n";
      return 2;
    }
  }
  if (selected.empty()) {
    for (int c = 1; c <= static_cast<int>(criteria.size()); ++c) selected.push_back(c);
  }

  int failures = 0;
  for (int c : selected) {
    const Criterion& cr = criteria[static_cast<std::size_t>(c - 1)];
    Outcome o;
    try {
      o = cr.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << c << ". " << cr.name << ": " << o.detail
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
