#include <benchmark/benchmark.h>

#include "sdseg/admm.hpp"
#include "sdseg/block_segmenter.hpp"
#include "sdseg/dct_basis.hpp"
#include "sdseg/diff_operators.hpp"
#include "sdseg/synthetic.hpp"

namespace {

void BM_BuildBasis(benchmark::State& state) {
  const sdseg::BasisSpec spec{static_cast<int>(state.range(0)), static_cast<int>(state.range(1))};
  for (auto _ : state) benchmark::DoNotOptimize(sdseg::build_basis(spec));
}
BENCHMARK(BM_BuildBasis)->Args({8, 6})->Args({64, 20})->Args({64, 35});

void BM_Workspace(benchmark::State& state) {
  const auto basis = sdseg::build_basis({64, 20});
  const sdseg::DiffOperator diff(64);
  for (auto _ : state) {
    sdseg::AdmmWorkspace ws(basis, diff, sdseg::SolverConfig{});
    benchmark::DoNotOptimize(ws.system_matrix().data());
  }
}
BENCHMARK(BM_Workspace)->Unit(benchmark::kMillisecond);

// One 64x64 block, default 50 iterations.
void BM_SolveBlock(benchmark::State& state) {
  sdseg::SegmenterConfig cfg;
  cfg.basis.num_bases = static_cast<int>(state.range(0));
  const sdseg::BlockSegmenter seg(cfg);
  const auto sample = sdseg::generate_sample(sdseg::SynthOptions{}, 1, 0);
  const Eigen::VectorXd f = seg.extract_block(sample.image, 0, 0);
  for (auto _ : state) benchmark::DoNotOptimize(seg.segment_block(f));
}
BENCHMARK(BM_SolveBlock)->Arg(10)->Arg(20)->Arg(35)->Unit(benchmark::kMillisecond);

// 512x512 image = 64 blocks.
void BM_SegmentImage(benchmark::State& state) {
  const sdseg::BlockSegmenter seg(sdseg::SegmenterConfig{});
  sdseg::ImagePlane img(512, 512);
  for (int br = 0; br < 8; ++br) {
    for (int bc = 0; bc < 8; ++bc) {
      const auto s = sdseg::generate_sample(sdseg::SynthOptions{}, 2,
                                            static_cast<std::uint64_t>(br * 8 + bc));
      for (int x = 0; x < 64; ++x) {
        for (int y = 0; y < 64; ++y) img.at(br * 64 + x, bc * 64 + y) = s.image.at(x, y);
      }
    }
  }
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(seg.segment_image(img, jobs));
}
BENCHMARK(BM_SegmentImage)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
