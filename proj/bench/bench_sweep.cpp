// Serial reference loop vs OpenMP batch over the same randomized cases.
#include <chrono>
#include <cstdlib>
#include <iostream>

#include <fmt/format.h>
#include <omp.h>

#include "jugglepac/batch.hpp"

using namespace jpac;

namespace {

std::vector<CaseSpec> make_cases(std::size_t per_cell) {
  std::vector<CaseSpec> cases;
  std::uint64_t seed = 1;
  for (unsigned p : {1u, 2u, 3u, 5u, 8u, 14u, 16u}) {
    for (unsigned L : {1u, 2u, 3u, 4u}) {
      for (std::size_t i = 0; i < per_cell; ++i) {
        CaseSpec c;
        c.engine.adder_latency = p;
        c.engine.label_width = L;
        c.workload.seed = seed++;
        c.workload.length_policy = LengthPolicy::uniform_range;
        c.workload.count = 40;
        c.workload.length_lo = min_dataset_length(p, L);
        c.workload.length_hi = c.workload.length_lo + 40;
        c.workload.gaps.probability = 0.05;
        cases.push_back(c);
      }
    }
  }
  return cases;
}

template <typename F>
double seconds(F &&f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int main(int argc, char **argv) {
  const std::size_t per_cell = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 20;
  const auto cases = make_cases(per_cell);

  std::vector<CaseOutcome> serial, parallel;
  const double ts = seconds([&] { serial = run_cases_serial(cases); });
  const double tp = seconds([&] { parallel = run_cases_parallel(cases); });

  std::uint64_t cycles = 0;
  for (const CaseOutcome &o : serial) {
    cycles += o.valid_cycles;
  }
  const bool same = serial == parallel;
  std::cout << fmt::format("cases {}  input cycles {}  threads {}\n", cases.size(), cycles, omp_get_max_threads());
  std::cout << fmt::format("serial   {:8.3f} s  {:10.0f} cycles/s\n", ts, cycles / ts);
  std::cout << fmt::format("openmp   {:8.3f} s  {:10.0f} cycles/s  speedup {:.2f}x\n", tp, cycles / tp, ts / tp);
  std::cout << "outcomes identical: " << (same ? "yes" : "NO") << '\n';
  return same ? 0 : 1;
}
