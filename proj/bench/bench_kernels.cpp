// Times the batch kernels on the serial reference path and the OpenMP path
// and checks the outputs agree. Usage: bench_kernels [repeats]

#include <chrono>
#include <cstdio>
#include <random>

#include "lindyn/batch.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace lindyn;

namespace {

using Clock = std::chrono::steady_clock;

double time_of(const std::function<void()>& fn, int repeats) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = Clock::now();
    fn();
    const auto t1 = Clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

struct Row {
  const char* name;
  double serial;
  double parallel;
  bool agree;
};

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::atoi(argv[1]) : 3;

  Schedule sched = Schedule::canonical(3);
  sched.tau.kind = TauRule::Kind::Synthesized;
  OperatorSpec spec = OperatorSpec::derive(sched);
  finalize_synthesized_tau(spec);

  Schedule toy_sched = Schedule::geometric(4, 6);
  toy_sched.tau.kind = TauRule::Kind::Affine;
  const OperatorSpec toy = OperatorSpec::derive(toy_sched);

  std::mt19937_64 eng(0xBE7C0);
  auto rnd_vec = [&](std::uint64_t limit, std::size_t support) {
    std::vector<FinVec::Entry> e;
    for (std::size_t i = 0; i < support; ++i) {
      e.push_back({eng() % limit,
                   Dyadic::scaled(static_cast<long>(eng() % 4096) - 2048,
                                  static_cast<std::int64_t>(eng() % 24) - 12)});
    }
    return FinVec::from_entries(std::move(e));
  };

  std::vector<Row> rows;

  {
    BatchOutcome s, p;
    const double ts = time_of([&] { s = roundtrip_basis_batch(spec, spec.horizon_coord(),
                                                              Exec::Serial); },
                              repeats);
    const double tp = time_of([&] { p = roundtrip_basis_batch(spec, spec.horizon_coord(),
                                                              Exec::Parallel); },
                              repeats);
    rows.push_back({"roundtrip-basis (17480 coords)", ts, tp,
                    s.pass == p.pass && s.failures == p.failures});
  }
  {
    std::vector<FinVec> vecs;
    std::vector<std::size_t> blocks;
    for (int i = 0; i < 64; ++i) {
      blocks.push_back(1);
      vecs.push_back(rnd_vec(spec.block_end(1), 8));
    }
    BatchOutcome s, p;
    const double ts =
        time_of([&] { s = section_period_batch(spec, vecs, blocks, Exec::Serial); },
                repeats);
    const double tp =
        time_of([&] { p = section_period_batch(spec, vecs, blocks, Exec::Parallel); },
                repeats);
    rows.push_back({"section-period (64 vectors)", ts, tp,
                    s.pass == p.pass && s.failures == p.failures});
  }
  {
    std::vector<FinVec> vecs;
    std::vector<std::int64_t> powers;
    for (int i = 0; i < 64; ++i) {
      vecs.push_back(rnd_vec(spec.block_start(2), 8));
      powers.push_back(i % 2 == 0 ? 128 : -128);
    }
    BatchOutcome s, p;
    const double ts =
        time_of([&] { s = power_oracle_batch(spec, 2, vecs, powers, Exec::Serial); },
                repeats);
    const double tp =
        time_of([&] { p = power_oracle_batch(spec, 2, vecs, powers, Exec::Parallel); },
                repeats);
    rows.push_back({"power-oracle (64 vectors, +-128)", ts, tp,
                    s.pass == p.pass && s.failures == p.failures});
  }
  {
    std::vector<std::size_t> blocks;
    for (std::size_t n = 4; n < 12; ++n) blocks.push_back(n);
    BatchOutcome s, p;
    const double ts =
        time_of([&] { s = basis_decay_batch(toy, blocks, Exec::Serial); }, repeats);
    const double tp =
        time_of([&] { p = basis_decay_batch(toy, blocks, Exec::Parallel); }, repeats);
    rows.push_back({"basis-decay windows (8 blocks)", ts, tp,
                    s.pass == p.pass && s.failures == p.failures});
  }
  {
    const SeparatedFamily fam =
        SeparatedFamily::build({{2, 2}, {5, 3}, {16, 11}}, 200000);
    BatchOutcome s, p;
    const double ts =
        time_of([&] { s = separation_scan_batch(fam, Exec::Serial); }, repeats);
    const double tp =
        time_of([&] { p = separation_scan_batch(fam, Exec::Parallel); }, repeats);
    rows.push_back({"separation scan (3 sets, H=2e5)", ts, tp,
                    s.pass == p.pass && s.failures == p.failures});
  }

#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif
  std::printf("%-36s %10s %10s %8s %s\n", "kernel", "serial(s)", "omp(s)", "speedup",
              "bit-identical");
  bool all_agree = true;
  for (const Row& r : rows) {
    std::printf("%-36s %10.4f %10.4f %7.2fx %s\n", r.name, r.serial, r.parallel,
                r.serial / r.parallel, r.agree ? "yes" : "NO");
    all_agree = all_agree && r.agree;
  }
  return all_agree ? 0 : 1;
}
